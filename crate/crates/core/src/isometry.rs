//! Equivalence of finite vector configurations in `R^k` under `GL_k(R)`,
//! up to multiplication of individual vectors by units. Used for
//! isometry testing of forms, stabilizers of cones and identification of
//! faces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{self, act, GLMat, HermForm, LVec};
use crate::linalg::{self, Mat};
use crate::minvec;
use crate::ring::{FieldCtx, KElem, Rat};

/// Per-vector invariant: `G(v, v)` and the sorted norms `N(G(v, w))`.
pub type Fingerprint = (Rat, Vec<Rat>);

/// Vectors spanning `K^k` with a Gram function `G` satisfying
/// `G(h v, h w) = G(v, w)` for the sought maps and
/// `G(u v, u' w) = u conj(u') G(v, w)` for units.
#[derive(Clone, Debug)]
pub struct Config {
    pub k: usize,
    pub vecs: Vec<LVec>,
    kvecs: Vec<Vec<KElem>>,
    gram: Vec<Vec<KElem>>,
    pub fp: Vec<Fingerprint>,
    index: HashMap<LVec, usize>,
}

impl Config {
    fn build(ctx: &FieldCtx, k: usize, vecs: &[LVec], f: &Mat<KElem>) -> Self {
        let kvecs: Vec<Vec<KElem>> =
            vecs.iter().map(|v| herm::to_elems(ctx, v).iter().map(|x| x.to_k()).collect()).collect();
        // rows: v^t F
        let vf: Vec<Vec<KElem>> = kvecs
            .iter()
            .map(|v| (0..k).map(|j| (0..k).fold(KElem::zero(), |acc, i| acc.add(&ctx.mul(&v[i], &f[i][j])))).collect())
            .collect();
        let conj: Vec<Vec<KElem>> = kvecs.iter().map(|w| w.iter().map(|x| ctx.conj(x)).collect()).collect();
        let gram: Vec<Vec<KElem>> = vf
            .iter()
            .map(|a| conj.iter().map(|b| a.iter().zip(b).fold(KElem::zero(), |acc, (x, y)| acc.add(&ctx.mul(x, y)))).collect())
            .collect();
        let fp = gram
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut ns: Vec<Rat> = row.iter().map(|x| ctx.norm(x)).collect();
                ns.sort();
                (row[i].a.clone(), ns)
            })
            .collect();
        let index = vecs.iter().enumerate().map(|(i, v)| (herm::unit_canonical(ctx, v), i)).collect();
        Config { k, vecs: vecs.to_vec(), kvecs, gram, fp, index }
    }

    /// Gram `G(v, w) = v^t conj(P)^{-1} conj(w)` with `P = sum v v^*`; the
    /// vectors must span `K^k` and be pairwise non-associate.
    pub fn intrinsic(ctx: &FieldCtx, k: usize, vecs: &[LVec]) -> Self {
        let p = herm::outer_sum(ctx, k, vecs);
        let pbar: Mat<KElem> = p.iter().map(|row| row.iter().map(|x| ctx.conj(x)).collect()).collect();
        let f = if k == 0 { Vec::new() } else { linalg::inverse(ctx, &pbar).expect("configuration spans") };
        Self::build(ctx, k, vecs, &f)
    }

    /// Gram `G(v, w) = v^t A conj(w)`.
    pub fn with_form(ctx: &FieldCtx, a: &HermForm, vecs: &[LVec]) -> Self {
        Self::build(ctx, a.rank_r(), vecs, &a.entries)
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    /// Isomorphism-invariant key.
    pub fn invariant(&self) -> Vec<Fingerprint> {
        let mut f = self.fp.clone();
        f.sort();
        f
    }

    pub fn lookup(&self, ctx: &FieldCtx, v: &[i64]) -> Option<usize> {
        self.index.get(&herm::unit_canonical(ctx, v)).copied()
    }
}

/// All `h` in `GL_k(R)` (or the first one) mapping the vectors of `s` onto
/// those of `t` up to units, preserving the Gram data and accepted by
/// `check`.
pub fn search(
    ctx: &FieldCtx,
    s: &Config,
    t: &Config,
    all: bool,
    check: &dyn Fn(&GLMat) -> bool,
) -> Vec<GLMat> {
    let k = s.k;
    if s.k != t.k || s.len() != t.len() || s.invariant() != t.invariant() {
        return Vec::new();
    }
    if k == 0 {
        let id = GLMat::identity(0);
        return if check(&id) { vec![id] } else { Vec::new() };
    }
    // basis of s: rarest fingerprints first
    let mut class_size: HashMap<&Fingerprint, usize> = HashMap::new();
    for f in &s.fp {
        *class_size.entry(f).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by_key(|&i| (class_size[&s.fp[i]], i));
    let mut basis: Vec<usize> = Vec::new();
    let mut echelon: Mat<KElem> = Vec::new();
    for &i in &order {
        let mut trial = echelon.clone();
        trial.push(s.kvecs[i].clone());
        let rk = linalg::rref(ctx, &mut trial).len();
        if rk > echelon.len() {
            trial.truncate(rk);
            echelon = trial;
            basis.push(i);
            if basis.len() == k {
                break;
            }
        }
    }
    assert_eq!(basis.len(), k, "configuration must span");
    let sb: Mat<KElem> = (0..k).map(|row| basis.iter().map(|&b| s.kvecs[b][row].clone()).collect()).collect();
    let sb_inv = linalg::inverse(ctx, &sb).expect("basis is invertible");
    let cands: Vec<Vec<usize>> = basis.iter().map(|&b| (0..t.len()).filter(|&j| t.fp[j] == s.fp[b]).collect()).collect();
    let units: Vec<KElem> = ctx.units().iter().map(|u| u.to_k()).collect();
    let one = KElem::one();

    let mut st = SearchState { chosen: Vec::new(), found: Vec::new() };
    dfs(ctx, s, t, &basis, &cands, &units, &one, &sb_inv, all, check, &mut st);
    st.found
}

struct SearchState {
    chosen: Vec<(usize, KElem)>,
    found: Vec<GLMat>,
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    ctx: &FieldCtx,
    s: &Config,
    t: &Config,
    basis: &[usize],
    cands: &[Vec<usize>],
    units: &[KElem],
    one: &KElem,
    sb_inv: &Mat<KElem>,
    all: bool,
    check: &dyn Fn(&GLMat) -> bool,
    st: &mut SearchState,
) {
    if !all && !st.found.is_empty() {
        return;
    }
    let i = st.chosen.len();
    let k = basis.len();
    if i == k {
        if let Some(h) = complete(ctx, s, t, sb_inv, &st.chosen) {
            if check(&h) {
                st.found.push(h);
            }
        }
        return;
    }
    let bi = basis[i];
    let unit_choices: &[KElem] = if i == 0 && !all { std::slice::from_ref(one) } else { units };
    for &tj in &cands[i] {
        if st.chosen.iter().any(|(c, _)| *c == tj) {
            continue;
        }
        for u in unit_choices {
            let ok = st.chosen.iter().enumerate().all(|(j, (tc, uc))| {
                // G_T(u t, uc tc) = u conj(uc) G_T(t, tc)
                let g = ctx.mul(&ctx.mul(u, &ctx.conj(uc)), &t.gram[tj][*tc]);
                g == s.gram[bi][basis[j]]
            });
            if !ok {
                continue;
            }
            st.chosen.push((tj, u.clone()));
            dfs(ctx, s, t, basis, cands, units, one, sb_inv, all, check, st);
            st.chosen.pop();
            if !all && !st.found.is_empty() {
                return;
            }
        }
    }
}

fn complete(ctx: &FieldCtx, s: &Config, t: &Config, sb_inv: &Mat<KElem>, chosen: &[(usize, KElem)]) -> Option<GLMat> {
    let k = s.k;
    let tb: Mat<KElem> =
        (0..k).map(|row| chosen.iter().map(|(tj, u)| ctx.mul(u, &t.kvecs[*tj][row])).collect()).collect();
    let h = GLMat::from_k(ctx, &linalg::mat_mul(ctx, &tb, sb_inv))?;
    let mut hit = vec![false; t.len()];
    for v in &s.vecs {
        let j = t.lookup(ctx, &h.apply(ctx, v))?;
        if hit[j] {
            return None;
        }
        hit[j] = true;
    }
    Some(h)
}

/// A configuration of vectors in `R^r` reduced to the saturated sublattice
/// it spans.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub r: usize,
    pub k: usize,
    /// First `k` columns span the saturation.
    pub basis: GLMat,
    pub basis_inv: GLMat,
    /// Coordinates in `R^k`, in input order.
    pub vecs: Vec<LVec>,
    pub config: Config,
}

impl Reduced {
    pub fn new(ctx: &FieldCtx, r: usize, vecs: &[LVec]) -> Self {
        let (k, basis) = herm::adapted_basis(ctx, r, vecs);
        let basis_inv = basis.inverse(ctx);
        let deg = ctx.degree();
        let red: Vec<LVec> = vecs
            .iter()
            .map(|v| {
                let y = basis_inv.apply(ctx, v);
                debug_assert!(y[k * deg..].iter().all(|&x| x == 0));
                y[..k * deg].to_vec()
            })
            .collect();
        let config = Config::intrinsic(ctx, k, &red);
        Reduced { r, k, basis, basis_inv, vecs: red, config }
    }

    /// Lift `y` in `R^k` back to `R^r`.
    pub fn lift(&self, ctx: &FieldCtx, y: &[i64]) -> LVec {
        let mut full = y.to_vec();
        full.resize(self.r * ctx.degree(), 0);
        self.basis.apply(ctx, &full)
    }
}

/// The group of `h` in `GL_k(R)` permuting the configuration up to units.
pub fn config_stabilizer(ctx: &FieldCtx, c: &Config) -> Vec<GLMat> {
    search(ctx, c, c, true, &|_| true)
}

pub fn config_equivalence(ctx: &FieldCtx, s: &Config, t: &Config) -> Option<GLMat> {
    search(ctx, s, t, false, &|_| true).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryResult {
    pub found: bool,
    pub witness: Option<GLMat>,
}

/// Short vectors of `a` up to units: those below the least bound at which
/// they span `K^r`.
fn spanning_short_vectors(ctx: &FieldCtx, a: &HermForm) -> Result<(Rat, Vec<LVec>)> {
    let r = a.rank_r();
    let en = minvec::Enumerator::for_form(ctx, a)?;
    let mut bound = en.minimal(ctx).min_value;
    loop {
        let vs = en.below(&bound);
        let mut values: Vec<Rat> = vs.iter().map(|(_, x)| x.clone()).collect();
        values.sort();
        values.dedup();
        for c in &values {
            let sel: Vec<LVec> = vs.iter().filter(|(_, x)| x <= c).map(|(v, _)| v.clone()).collect();
            if herm::cone_rank(ctx, r, &sel) == r {
                return Ok((c.clone(), minvec::unit_reps(ctx, &sel)));
            }
        }
        bound = bound * Rat::from_integer(2.into());
    }
}

/// Decide whether `act(g, a) = b` for some `g` in `GL_r(R)`.
pub fn is_equivalent(ctx: &FieldCtx, a: &HermForm, b: &HermForm) -> Result<IsometryResult> {
    if a.rank_r() != b.rank_r() {
        return Err(Error::DimensionMismatch { expected: a.rank_r(), got: b.rank_r() });
    }
    let (ca, sa) = spanning_short_vectors(ctx, a)?;
    let (cb, sb) = spanning_short_vectors(ctx, b)?;
    if ca != cb || sa.len() != sb.len() {
        return Ok(IsometryResult { found: false, witness: None });
    }
    let ta = Config::with_form(ctx, a, &sa);
    let tb = Config::with_form(ctx, b, &sb);
    let found = search(ctx, &tb, &ta, false, &|h| act(ctx, h, a).map_or(false, |x| x == *b));
    Ok(match found.into_iter().next() {
        Some(g) => IsometryResult { found: true, witness: Some(g) },
        None => IsometryResult { found: false, witness: None },
    })
}

/// Automorphism group `{g : act(g, a) = a}`.
pub fn automorphisms(ctx: &FieldCtx, a: &HermForm) -> Result<Vec<GLMat>> {
    let (_, s) = spanning_short_vectors(ctx, a)?;
    let c = Config::with_form(ctx, a, &s);
    Ok(search(ctx, &c, &c, true, &|h| act(ctx, h, a).map_or(false, |x| x == *a)))
}
