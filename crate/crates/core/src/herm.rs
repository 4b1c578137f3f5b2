//! Hermitian forms over `K`, the lattice `Herm_r(R)`, the action of
//! `GL_r(R)` and the realization as rational quadratic forms on `Z^{2r}`.
//!
//! Lattice vectors of `R^r` are stored by their integer coordinates in the
//! basis `e_1, w e_1, e_2, w e_2, ...` (just `e_1, ..., e_r` in symmetric
//! mode). A form `A` evaluates as `A(v) = v^t A conj(v)`, so that
//! `act(g, A)(v) = A(g v)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::ring::{rat, rat_from_json, rat_to_json, FieldCtx, IQElem, KElem, Quad, Rat};

/// Integer coordinates of a lattice vector.
pub type LVec = Vec<i64>;

pub type SmallElem = Quad<i64>;

/// Dimension of `Herm_r` over `Q`.
pub fn form_dim(ctx: &FieldCtx, r: usize) -> usize {
    if ctx.is_symmetric() {
        r * (r + 1) / 2
    } else {
        r * r
    }
}

pub fn lattice_dim(ctx: &FieldCtx, r: usize) -> usize {
    r * ctx.degree()
}

pub fn small(x: &IQElem) -> SmallElem {
    Quad { a: x.a.to_i64().expect("coordinate overflow"), b: x.b.to_i64().expect("coordinate overflow") }
}

pub fn big(x: &SmallElem) -> IQElem {
    IQElem::int(x.a, x.b)
}

pub fn entry(ctx: &FieldCtx, v: &[i64], i: usize) -> SmallElem {
    if ctx.is_symmetric() {
        Quad { a: v[i], b: 0 }
    } else {
        Quad { a: v[2 * i], b: v[2 * i + 1] }
    }
}

pub fn to_elems(ctx: &FieldCtx, v: &[i64]) -> Vec<IQElem> {
    (0..v.len() / ctx.degree()).map(|i| big(&entry(ctx, v, i))).collect()
}

pub fn from_elems(ctx: &FieldCtx, e: &[IQElem]) -> LVec {
    let mut out = Vec::with_capacity(e.len() * ctx.degree());
    for x in e {
        let s = small(x);
        out.push(s.a);
        if !ctx.is_symmetric() {
            out.push(s.b);
        }
    }
    out
}

pub fn scale_vec(ctx: &FieldCtx, u: &SmallElem, v: &[i64]) -> LVec {
    let r = v.len() / ctx.degree();
    let mut out = Vec::with_capacity(v.len());
    for i in 0..r {
        let x = ctx.mul(u, &entry(ctx, v, i));
        out.push(x.a);
        if !ctx.is_symmetric() {
            out.push(x.b);
        }
    }
    out
}

/// Canonical representative of `{u v : u unit}`: the lexicographically
/// greatest coordinate vector.
pub fn unit_canonical(ctx: &FieldCtx, v: &[i64]) -> LVec {
    ctx.units().iter().map(|u| scale_vec(ctx, &small(u), v)).max().expect("unit group is nonempty")
}

/// The linear functional `A -> A(v)` in form coordinates: `A(v) = <coords(A), phi(v)>`.
pub fn phi(ctx: &FieldCtx, v: &[i64]) -> Vec<i64> {
    let r = v.len() / ctx.degree();
    let e: Vec<SmallElem> = (0..r).map(|i| entry(ctx, v, i)).collect();
    let mut out = Vec::with_capacity(form_dim(ctx, r));
    for x in &e {
        out.push(ctx.norm(x));
    }
    let w = Quad { a: 0, b: 1 };
    for i in 0..r {
        for j in i + 1..r {
            let p = ctx.mul(&e[i], &ctx.conj(&e[j]));
            out.push(ctx.trace(&p));
            if !ctx.is_symmetric() {
                out.push(ctx.trace(&ctx.mul(&w, &p)));
            }
        }
    }
    out
}

/// An `r x r` Hermitian matrix over `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermForm {
    pub entries: Vec<Vec<KElem>>,
}

impl HermForm {
    pub fn rank_r(&self) -> usize {
        self.entries.len()
    }

    pub fn identity(r: usize) -> Self {
        let entries = (0..r)
            .map(|i| (0..r).map(|j| if i == j { KElem::one() } else { KElem::zero() }).collect())
            .collect();
        HermForm { entries }
    }

    pub fn from_coords(ctx: &FieldCtx, r: usize, c: &[Rat]) -> Self {
        assert_eq!(c.len(), form_dim(ctx, r));
        let mut entries = vec![vec![KElem::zero(); r]; r];
        for i in 0..r {
            entries[i][i] = KElem::from_rat(c[i].clone());
        }
        let mut k = r;
        for i in 0..r {
            for j in i + 1..r {
                let x = if ctx.is_symmetric() {
                    k += 1;
                    KElem::from_rat(c[k - 1].clone())
                } else {
                    k += 2;
                    Quad { a: c[k - 2].clone(), b: c[k - 1].clone() }
                };
                entries[j][i] = ctx.conj(&x);
                entries[i][j] = x;
            }
        }
        HermForm { entries }
    }

    pub fn from_int_coords(ctx: &FieldCtx, r: usize, c: &[BigInt]) -> Self {
        let q: Vec<Rat> = c.iter().map(|x| Rat::from_integer(x.clone())).collect();
        Self::from_coords(ctx, r, &q)
    }

    pub fn coords(&self, ctx: &FieldCtx) -> Vec<Rat> {
        let r = self.rank_r();
        let mut out: Vec<Rat> = (0..r).map(|i| self.entries[i][i].a.clone()).collect();
        for i in 0..r {
            for j in i + 1..r {
                out.push(self.entries[i][j].a.clone());
                if !ctx.is_symmetric() {
                    out.push(self.entries[i][j].b.clone());
                }
            }
        }
        out
    }

    pub fn is_hermitian(&self, ctx: &FieldCtx) -> bool {
        let r = self.rank_r();
        (0..r).all(|i| {
            self.entries[i].len() == r
                && self.entries[i][i].b.is_zero()
                && (0..r).all(|j| self.entries[j][i] == ctx.conj(&self.entries[i][j]))
        })
    }

    /// Whether every entry lies in `R`.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_integral())
    }

    pub fn eval(&self, ctx: &FieldCtx, v: &[i64]) -> Rat {
        linalg::dot_rat(&self.coords(ctx), &linalg::to_rat_vec(&linalg::int_vec(&phi(ctx, v))))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        HermForm { entries: self.entries.iter().map(|row| row.iter().map(|x| x.scale(c)).collect()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        HermForm {
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect(),
        }
    }

    /// `A + t * rho` with `rho` given in form coordinates.
    pub fn add_scaled_coords(&self, ctx: &FieldCtx, t: &Rat, rho: &[Rat]) -> Self {
        let c: Vec<Rat> = self.coords(ctx).iter().zip(rho).map(|(a, b)| a + t * b).collect();
        Self::from_coords(ctx, self.rank_r(), &c)
    }

    /// Gram matrix of `v -> A(v)` on the integer coordinates of `R^r`.
    pub fn to_real_quadratic(&self, ctx: &FieldCtx) -> Mat<Rat> {
        let r = self.rank_r();
        if ctx.is_symmetric() {
            return self.entries.iter().map(|row| row.iter().map(|x| x.a.clone()).collect()).collect();
        }
        let basis = [KElem::one(), ctx.w().to_k()];
        let n = 2 * r;
        let mut q = vec![vec![Rat::zero(); n]; n];
        for k in 0..r {
            for l in 0..r {
                for (al, a) in basis.iter().enumerate() {
                    for (bl, b) in basis.iter().enumerate() {
                        let x = ctx.mul(&ctx.mul(a, &self.entries[k][l]), &ctx.conj(b));
                        q[2 * k + al][2 * l + bl] = ctx.real_part(&x);
                    }
                }
            }
        }
        q
    }

    pub fn is_positive_definite(&self, ctx: &FieldCtx) -> bool {
        pohst_decomposition(&self.to_real_quadratic(ctx)).is_some()
    }

    pub fn is_positive_semidefinite(&self, ctx: &FieldCtx) -> bool {
        is_psd(&self.to_real_quadratic(ctx))
    }

    /// Matrix rank over `K`.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        linalg::rank(ctx, &self.entries)
    }
}

impl Serialize for HermForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<serde_json::Value>>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let [an, ad] = rat_to_json(&x.a);
                        let [bn, bd] = rat_to_json(&x.b);
                        vec![an, ad, bn, bd]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermForm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Vec<serde_json::Value>>> = Vec::deserialize(de)?;
        let mut entries = Vec::new();
        for row in rows {
            let mut out = Vec::new();
            for x in row {
                if x.len() != 4 {
                    return Err(serde::de::Error::custom("form entry must have 4 components"));
                }
                let a = rat_from_json(&x[0], &x[1]).map_err(serde::de::Error::custom)?;
                let b = rat_from_json(&x[2], &x[3]).map_err(serde::de::Error::custom)?;
                out.push(Quad { a, b });
            }
            entries.push(out);
        }
        Ok(HermForm { entries })
    }
}

/// A Z-basis of `Herm_r(R)` with coordinate maps.
#[derive(Clone, Debug)]
pub struct HermLatticeBasis {
    pub r: usize,
    pub elements: Vec<HermForm>,
}

pub fn integral_basis(ctx: &FieldCtx, r: usize) -> HermLatticeBasis {
    let n = form_dim(ctx, r);
    let elements = (0..n)
        .map(|k| {
            let c: Vec<Rat> = (0..n).map(|i| rat((i == k) as i64)).collect();
            HermForm::from_coords(ctx, r, &c)
        })
        .collect();
    HermLatticeBasis { r, elements }
}

impl HermLatticeBasis {
    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn to_coords(&self, ctx: &FieldCtx, a: &HermForm) -> Vec<Rat> {
        a.coords(ctx)
    }

    pub fn from_coords(&self, ctx: &FieldCtx, c: &[Rat]) -> HermForm {
        HermForm::from_coords(ctx, self.r, c)
    }
}

/// Decomposition `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`; `None`
/// unless `Q` is positive definite.
pub fn pohst_decomposition(q: &Mat<Rat>) -> Option<Mat<Rat>> {
    let n = q.len();
    let mut a = q.clone();
    for i in 0..n {
        if !a[i][i].is_positive() {
            return None;
        }
        for j in i + 1..n {
            a[j][i] = a[i][j].clone();
            a[i][j] = &a[i][j] / &a[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &a[k][i] * &a[i][l];
                a[k][l] -= t;
            }
        }
    }
    Some(a)
}

/// Positive semidefiniteness by symmetric elimination with diagonal pivots.
pub fn is_psd(q: &Mat<Rat>) -> bool {
    let mut a = q.clone();
    let mut active: Vec<usize> = (0..a.len()).collect();
    while let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
        let p = active.remove(pos);
        if a[p][p].is_negative() {
            return false;
        }
        for &i in &active {
            let f = &a[i][p] / &a[p][p];
            for &j in &active {
                let t = &f * &a[p][j];
                a[i][j] -= t;
            }
        }
    }
    // remaining block has zero diagonal, so it must vanish
    active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()))
}

/// An invertible `r x r` matrix over `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GLMat {
    pub rows: Vec<Vec<IQElem>>,
}

impl GLMat {
    pub fn identity(r: usize) -> Self {
        GLMat {
            rows: (0..r).map(|i| (0..r).map(|j| IQElem::from_int((i == j) as i64)).collect()).collect(),
        }
    }

    pub fn scalar(r: usize, u: &IQElem) -> Self {
        GLMat { rows: (0..r).map(|i| (0..r).map(|j| if i == j { u.clone() } else { IQElem::zero() }).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn to_k(&self) -> Mat<KElem> {
        self.rows.iter().map(|row| row.iter().map(|x| x.to_k()).collect()).collect()
    }

    /// Checked conversion from a matrix over `K`.
    pub fn from_k(ctx: &FieldCtx, m: &Mat<KElem>) -> Option<Self> {
        let rows: Option<Vec<Vec<IQElem>>> = m.iter().map(|row| row.iter().map(|x| x.to_r()).collect()).collect();
        let g = GLMat { rows: rows? };
        ctx.is_unit(&g.det(ctx)).then_some(g)
    }

    pub fn det(&self, ctx: &FieldCtx) -> IQElem {
        linalg::determinant(ctx, &self.to_k()).to_r().expect("determinant of an integral matrix is integral")
    }

    pub fn mul(&self, ctx: &FieldCtx, o: &GLMat) -> GLMat {
        let m = linalg::mat_mul(ctx, &self.to_k(), &o.to_k());
        GLMat { rows: m.iter().map(|row| row.iter().map(|x| x.to_r().unwrap()).collect()).collect() }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> GLMat {
        let inv = linalg::inverse(ctx, &self.to_k()).expect("GL matrix is invertible");
        GLMat::from_k(ctx, &inv).expect("inverse of a GL matrix is integral")
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &[i64]) -> LVec {
        let x: Vec<SmallElem> = (0..self.dim()).map(|i| entry(ctx, v, i)).collect();
        let mut out = Vec::with_capacity(v.len());
        for row in &self.rows {
            let mut acc = Quad { a: 0i64, b: 0 };
            for (g, xi) in row.iter().zip(&x) {
                acc = acc.add(&ctx.mul(&small(g), xi));
            }
            out.push(acc.a);
            if !ctx.is_symmetric() {
                out.push(acc.b);
            }
        }
        out
    }

    /// Matrix of `x -> g x` on integer coordinates.
    pub fn to_real(&self, ctx: &FieldCtx) -> Vec<Vec<BigInt>> {
        let r = self.dim();
        let deg = ctx.degree();
        let n = r * deg;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        let basis = [IQElem::one(), ctx.w()];
        for k in 0..r {
            for l in 0..r {
                for (bl, b) in basis.iter().take(deg).enumerate() {
                    let x = ctx.mul(&self.rows[k][l], b);
                    m[deg * k][deg * l + bl] = x.a.clone();
                    if deg == 2 {
                        m[deg * k + 1][deg * l + bl] = x.b.clone();
                    }
                }
            }
        }
        m
    }
}

/// `g^t A conj(g)`.
pub fn act(ctx: &FieldCtx, g: &GLMat, a: &HermForm) -> Result<HermForm> {
    if g.dim() != a.rank_r() {
        return Err(Error::DimensionMismatch { expected: a.rank_r(), got: g.dim() });
    }
    let gk = g.to_k();
    let gt = linalg::transpose(&gk);
    let gbar: Mat<KElem> = gk.iter().map(|row| row.iter().map(|x| ctx.conj(x)).collect()).collect();
    let m = linalg::mat_mul(ctx, &linalg::mat_mul(ctx, &gt, &a.entries), &gbar);
    Ok(HermForm { entries: m })
}

/// `sum_v v conj(v)^t` over the given vectors.
pub fn outer_sum(ctx: &FieldCtx, r: usize, vectors: &[LVec]) -> Mat<KElem> {
    let mut p = vec![vec![KElem::zero(); r]; r];
    for v in vectors {
        let e: Vec<SmallElem> = (0..r).map(|i| entry(ctx, v, i)).collect();
        for k in 0..r {
            for l in 0..r {
                let x = ctx.mul(&e[k], &ctx.conj(&e[l]));
                p[k][l] = p[k][l].add(&KElem::new(rat(x.a), rat(x.b)));
            }
        }
    }
    p
}

/// Rank of the cone spanned by `v v^*` for the given vectors: the `K`-rank
/// of the sum of the generators.
pub fn cone_rank(ctx: &FieldCtx, r: usize, vectors: &[LVec]) -> usize {
    linalg::rank(ctx, &outer_sum(ctx, r, vectors))
}

/// A matrix `C` in `GL_r(R)` whose first `k` columns are an `R`-basis of
/// the saturation `R^r ∩ K<vectors>`, where `k` is the `K`-rank.
pub fn adapted_basis(ctx: &FieldCtx, r: usize, vectors: &[LVec]) -> (usize, GLMat) {
    let vk: Mat<KElem> = vectors.iter().map(|v| to_elems(ctx, v).iter().map(|x| x.to_k()).collect()).collect();
    let equations = linalg::nullspace(ctx, &vk, r);
    let k = r - equations.len();
    let mut w: Vec<Vec<IQElem>> = equations.iter().map(|row| clear_k_denominators(row)).collect();
    let mut u = GLMat::identity(r).rows;
    // column operations on w, mirrored on u, until w = [0 | M]
    let mut done = 0;
    while done < w.len() {
        let c = r - 1 - done;
        let Some(ri) = (done..w.len()).find(|&i| (0..=c).any(|j| !w[i][j].is_zero())) else {
            unreachable!("equations have full rank");
        };
        w.swap(done, ri);
        for j in 0..c {
            let x = w[done][j].clone();
            let y = w[done][c].clone();
            if x.is_zero() {
                continue;
            }
            let (g, s, t) = ctx.gcdex(&x, &y);
            let xg = ctx.div_exact(&x, &g).unwrap();
            let yg = ctx.div_exact(&y, &g).unwrap();
            // new c = s col_j + t col_c; new j = -y/g col_j + x/g col_c
            let comb = |m: &mut Vec<Vec<IQElem>>| {
                for row in m.iter_mut() {
                    let (a, b) = (row[j].clone(), row[c].clone());
                    row[c] = ctx.mul(&s, &a).add(&ctx.mul(&t, &b));
                    row[j] = ctx.mul(&yg, &a).neg().add(&ctx.mul(&xg, &b));
                }
            };
            comb(&mut w);
            comb(&mut u);
        }
        done += 1;
    }
    (k, GLMat { rows: u })
}

fn clear_k_denominators(row: &[KElem]) -> Vec<IQElem> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.a.denom()).lcm(x.b.denom()));
    let lq = Rat::from_integer(l);
    row.iter().map(|x| x.scale(&lq).to_r().unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(d: u32) -> FieldCtx {
        FieldCtx::new(d).unwrap()
    }

    fn g_from(rows: &[&[(i64, i64)]]) -> GLMat {
        GLMat { rows: rows.iter().map(|r| r.iter().map(|&(a, b)| IQElem::int(a, b)).collect()).collect() }
    }

    #[test]
    fn integral_basis_ranks() {
        assert_eq!(integral_basis(&ctx(1), 1).rank(), 1);
        assert_eq!(integral_basis(&ctx(1), 2).rank(), 4);
        assert_eq!(integral_basis(&ctx(0), 3).rank(), 6);
        let c = ctx(7);
        let b = integral_basis(&c, 3);
        for (k, e) in b.elements.iter().enumerate() {
            assert!(e.is_hermitian(&c) && e.is_integral());
            let co = b.to_coords(&c, e);
            assert!(co.iter().enumerate().all(|(i, x)| *x == rat((i == k) as i64)));
        }
    }

    #[test]
    fn action_examples() {
        let c = ctx(1);
        let a = HermForm::identity(2);
        assert_eq!(act(&c, &GLMat::identity(2), &a).unwrap(), a);
        let i = IQElem::int(0, 1);
        assert_eq!(act(&c, &GLMat::scalar(2, &i), &a).unwrap(), a);
        let g = g_from(&[&[(1, 0), (1, 0)], &[(0, 0), (1, 0)]]);
        let b = act(&c, &g, &a).unwrap();
        let want = HermForm::from_coords(&c, 2, &[rat(1), rat(2), rat(1), rat(0)]);
        assert_eq!(b, want);
        assert!(act(&c, &GLMat::identity(3), &a).is_err());
    }

    #[test]
    fn real_quadratic_examples() {
        let id = HermForm::identity(1);
        assert_eq!(id.to_real_quadratic(&ctx(1)), vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
        let half = crate::ring::rat_frac(1, 2);
        assert_eq!(id.to_real_quadratic(&ctx(3)), vec![vec![rat(1), half.clone()], vec![half, rat(1)]]);
        assert_eq!(id.to_real_quadratic(&ctx(2)), vec![vec![rat(1), rat(0)], vec![rat(0), rat(2)]]);
    }

    #[test]
    fn positivity_and_rank() {
        let c = ctx(1);
        for r in 1..4 {
            let id = HermForm::identity(r);
            assert!(id.is_positive_definite(&c));
            assert_eq!(id.rank(&c), r);
        }
        let v: LVec = vec![1, 1, 0, 1];
        let p = HermForm { entries: outer_sum(&c, 2, &[v]) };
        assert!(p.is_positive_semidefinite(&c));
        assert!(!p.is_positive_definite(&c));
        assert_eq!(p.rank(&c), 1);
        let z = ctx(0);
        assert_eq!(cone_rank(&z, 3, &[vec![1, 0, 0], vec![0, 1, 0]]), 2);
    }

    #[test]
    fn adapted_basis_saturates() {
        let c = ctx(0);
        let (k, m) = adapted_basis(&c, 3, &[vec![2, 4, 0], vec![0, 0, 0]]);
        assert_eq!(k, 1);
        let inv = m.inverse(&c);
        let y = inv.apply(&c, &[1, 2, 0]);
        assert_eq!(&y[1..], &[0, 0]);
        assert_eq!(y[0].abs(), 1);
        let c = ctx(19);
        let v = vec![4, 0, 1, 1, 3, -2];
        let (k, m) = adapted_basis(&c, 3, &[v.clone()]);
        assert_eq!(k, 1);
        let y = m.inverse(&c).apply(&c, &v);
        assert!(y[2..].iter().all(|&x| x == 0));
    }

    fn elem() -> impl Strategy<Value = (i64, i64)> {
        (-3i64..=3, -3i64..=3)
    }

    fn random_gl(c: &FieldCtx, r: usize, seeds: &[(i64, i64)]) -> GLMat {
        // product of elementary matrices
        let mut g = GLMat::identity(r);
        for (k, &(a, b)) in seeds.iter().enumerate() {
            let i = k % r;
            let j = (k / r + 1 + i) % r;
            if i == j {
                continue;
            }
            let mut e = GLMat::identity(r);
            e.rows[i][j] = if c.is_symmetric() { IQElem::int(a, 0) } else { IQElem::int(a, b) };
            g = g.mul(c, &e);
        }
        g
    }

    proptest! {
        #[test]
        fn realization_is_equivariant(di in 0usize..6, seeds in proptest::collection::vec(elem(), 6), cs in proptest::collection::vec(-4i64..=4, 9)) {
            let d = [0, 1, 2, 3, 7, 11][di];
            let c = ctx(d);
            let r = 3;
            let n = form_dim(&c, r);
            let a = HermForm::from_coords(&c, r, &cs.iter().take(n).map(|&x| rat(x)).collect::<Vec<_>>());
            let g = random_gl(&c, r, &seeds);
            prop_assert!(c.is_unit(&g.det(&c)));
            let b = act(&c, &g, &a).unwrap();
            prop_assert!(b.is_hermitian(&c) && b.is_integral());
            let gr = g.to_real(&c);
            let grq: Mat<Rat> = gr.iter().map(|row| linalg::to_rat_vec(row)).collect();
            let lhs = b.to_real_quadratic(&c);
            let rhs = linalg::mat_mul(&linalg::QField, &linalg::mat_mul(&linalg::QField, &linalg::transpose(&grq), &a.to_real_quadratic(&c)), &grq);
            prop_assert_eq!(lhs, rhs);
            // the action composes on the right
            let h = random_gl(&c, r, &seeds[1..]);
            prop_assert_eq!(act(&c, &h, &b).unwrap(), act(&c, &g.mul(&c, &h), &a).unwrap());
            // evaluation agrees with the realized Gram matrix
            let v: LVec = (0..lattice_dim(&c, r)).map(|i| seeds[i % 6].0).collect();
            let vq = linalg::to_rat_vec(&linalg::int_vec(&v));
            let qv = linalg::mat_vec(&linalg::QField, &a.to_real_quadratic(&c), &vq);
            prop_assert_eq!(a.eval(&c, &v), linalg::dot_rat(&vq, &qv));
            prop_assert_eq!(b.eval(&c, &v), a.eval(&c, &g.apply(&c, &v)));
        }
    }
}
