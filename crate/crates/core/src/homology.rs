//! Rational homology of finite filtered chain complexes: Betti numbers,
//! relative homology of filtration quotients, spectral sequence pages and
//! the doubling check.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, QField};
use crate::ring::{rat_to_json, Rat};

/// A generator: the cell it comes from and its filtration level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen {
    pub cell: usize,
    pub filt: usize,
}

/// Finite chain complex over `Q` concentrated in degrees `0..=top`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ChainComplex {
    pub gens: Vec<Vec<Gen>>,
    /// `boundary[n]` holds entries `(row, col, value)` of `d_n: C_n -> C_{n-1}`.
    pub boundary: Vec<Vec<(usize, usize, Rat)>>,
}

pub type BettiTable = BTreeMap<usize, usize>;

impl ChainComplex {
    pub fn new(gens: Vec<Vec<Gen>>) -> Self {
        let boundary = vec![Vec::new(); gens.len()];
        ChainComplex { gens, boundary }
    }

    pub fn top(&self) -> usize {
        self.gens.len().saturating_sub(1)
    }

    pub fn rank_in(&self, n: usize) -> usize {
        self.gens.get(n).map_or(0, |g| g.len())
    }

    pub fn max_filt(&self) -> usize {
        self.gens.iter().flatten().map(|g| g.filt).max().unwrap_or(0)
    }

    /// Dense matrix of `d_n`.
    pub fn dense(&self, n: usize) -> Vec<Vec<Rat>> {
        let rows = if n == 0 { 0 } else { self.rank_in(n - 1) };
        let mut m = vec![vec![Rat::zero(); self.rank_in(n)]; rows];
        if n < self.boundary.len() {
            for (i, j, x) in &self.boundary[n] {
                m[*i][*j] += x;
            }
        }
        m
    }

    /// Whether `d_{n-1} d_n = 0` for every `n`.
    pub fn is_complex(&self) -> bool {
        (2..self.gens.len()).all(|n| {
            let a = self.dense(n - 1);
            let b = self.dense(n);
            if a.is_empty() || b.is_empty() {
                return true;
            }
            linalg::mat_mul(&QField, &a, &b).iter().flatten().all(|x| x.is_zero())
        })
    }

    /// The generators selected by `keep` together with the induced
    /// differential (a subquotient complex when `keep` is locally closed).
    pub fn restrict(&self, keep: impl Fn(&Gen) -> bool) -> ChainComplex {
        let mut map: Vec<HashMap<usize, usize>> = Vec::new();
        let mut gens = Vec::new();
        for g in &self.gens {
            let mut m = HashMap::new();
            let mut out = Vec::new();
            for (i, x) in g.iter().enumerate() {
                if keep(x) {
                    m.insert(i, out.len());
                    out.push(*x);
                }
            }
            map.push(m);
            gens.push(out);
        }
        let mut boundary = vec![Vec::new(); gens.len()];
        for n in 1..self.boundary.len() {
            for (i, j, x) in &self.boundary[n] {
                if let (Some(&a), Some(&b)) = (map[n - 1].get(i), map[n].get(j)) {
                    boundary[n].push((a, b, x.clone()));
                }
            }
        }
        ChainComplex { gens, boundary }
    }

    /// Whether the generators selected by `keep` span a subcomplex.
    pub fn is_closed(&self, keep: impl Fn(&Gen) -> bool) -> bool {
        (1..self.boundary.len()).all(|n| {
            self.boundary[n]
                .iter()
                .all(|(i, j, x)| !keep(&self.gens[n][*j]) || keep(&self.gens[n - 1][*i]) || x.is_zero())
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let degrees: Vec<serde_json::Value> = self
            .gens
            .iter()
            .enumerate()
            .map(|(n, g)| {
                let bd: Vec<serde_json::Value> = self.boundary[n]
                    .iter()
                    .map(|(i, j, x)| {
                        let [a, b] = rat_to_json(x);
                        serde_json::json!([i, j, a, b])
                    })
                    .collect();
                serde_json::json!({ "degree": n, "generators": g, "boundary": bd })
            })
            .collect();
        serde_json::json!({ "degrees": degrees })
    }
}

/// Rank of a sparse matrix given by rows, by elimination with pivot rows
/// taken shortest first.
pub fn sparse_rank(rows: Vec<Vec<(usize, Rat)>>) -> usize {
    let mut rows: Vec<Vec<(usize, Rat)>> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|(_, x)| !x.is_zero());
            r.sort_by_key(|e| e.0);
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, Vec<(usize, Rat)>> = HashMap::new();
    for mut row in rows {
        while let Some((c, lead)) = row.first().cloned() {
            match pivots.get(&c) {
                None => {
                    pivots.insert(c, row);
                    break;
                }
                Some(p) => {
                    let f = &lead / &p[0].1;
                    row = axpy(&row, &f, p);
                }
            }
        }
    }
    pivots.len()
}

/// `a - f b` for sorted sparse rows.
fn axpy(a: &[(usize, Rat)], f: &Rat, b: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - f * &b[j].1;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn dense_to_sparse(rows: &[Vec<Rat>]) -> Vec<Vec<(usize, Rat)>> {
    rows.iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
        .collect()
}

/// Rank of `d_n` (as a sparse matrix).
fn boundary_rank(c: &ChainComplex, n: usize) -> usize {
    if n == 0 || n >= c.boundary.len() {
        return 0;
    }
    let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); c.rank_in(n)];
    for (i, j, x) in &c.boundary[n] {
        cols[*j].push((*i, x.clone()));
    }
    // merge duplicates
    let cols = cols
        .into_iter()
        .map(|col| {
            let mut m: BTreeMap<usize, Rat> = BTreeMap::new();
            for (i, x) in col {
                *m.entry(i).or_insert_with(Rat::zero) += x;
            }
            m.into_iter().collect()
        })
        .collect();
    sparse_rank(cols)
}

/// `dim H_n = #gen_n - rank d_n - rank d_{n+1}`.
pub fn betti(c: &ChainComplex) -> BettiTable {
    let ranks: Vec<usize> = (0..=c.gens.len()).into_par_iter().map(|n| boundary_rank(c, n)).collect();
    let mut out = BettiTable::new();
    for n in 0..c.gens.len() {
        let h = c.rank_in(n) - ranks[n] - ranks[n + 1];
        if h > 0 {
            out.insert(n, h);
        }
    }
    out
}

/// Homology of `Fil_p / Fil_{p-1}`.
pub fn relative_betti(c: &ChainComplex, p: usize) -> BettiTable {
    betti(&c.restrict(|g| g.filt == p))
}

/// Homology of `Fil_p`.
pub fn filtered_betti(c: &ChainComplex, p: usize) -> BettiTable {
    betti(&c.restrict(|g| g.filt <= p))
}

/// Dimensions indexed by column `p` and total degree `n`.
pub type Grid = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSequence {
    pub max_p: usize,
    pub top: usize,
    /// `pages[k - 1]` is `E^k`.
    pub pages: Vec<Grid>,
    pub e_inf: Grid,
    /// Rank of `d^1: E^1_{p,n} -> E^1_{p-1,n-1}`.
    pub d1_rank: Grid,
}

struct Filtered<'a> {
    c: &'a ChainComplex,
    dense: Vec<Vec<Vec<Rat>>>,
}

impl<'a> Filtered<'a> {
    fn new(c: &'a ChainComplex) -> Self {
        let dense = (0..=c.gens.len()).map(|n| if n < c.gens.len() { c.dense(n) } else { Vec::new() }).collect();
        Filtered { c, dense }
    }

    fn f(&self, n: usize, p: i64) -> Vec<usize> {
        if n >= self.c.gens.len() || p < 0 {
            return Vec::new();
        }
        (0..self.c.rank_in(n)).filter(|&i| self.c.gens[n][i].filt as i64 <= p).collect()
    }

    /// Basis of `Z^r_{p,n} = {x in F_p C_n : d x in F_{p-r} C_{n-1}}`.
    fn z(&self, r: i64, p: i64, n: usize) -> Vec<Vec<Rat>> {
        let dim = self.c.rank_in(n);
        let cols = self.f(n, p);
        if cols.is_empty() {
            return Vec::new();
        }
        let bad_rows: Vec<usize> = if n == 0 {
            Vec::new()
        } else {
            (0..self.c.rank_in(n - 1)).filter(|&i| self.c.gens[n - 1][i].filt as i64 > p - r).collect()
        };
        let m: Vec<Vec<Rat>> = bad_rows.iter().map(|&i| cols.iter().map(|&j| self.dense[n][i][j].clone()).collect()).collect();
        let ker = if m.is_empty() {
            (0..cols.len()).map(|k| (0..cols.len()).map(|l| if k == l { Rat::one() } else { Rat::zero() }).collect()).collect()
        } else {
            linalg::nullspace(&QField, &m, cols.len())
        };
        ker.into_iter()
            .map(|x| {
                let mut full = vec![Rat::zero(); dim];
                for (k, &j) in cols.iter().enumerate() {
                    full[j] = x[k].clone();
                }
                full
            })
            .collect()
    }

    fn apply_d(&self, n: usize, xs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        if n == 0 {
            return Vec::new();
        }
        xs.iter().map(|x| linalg::mat_vec(&QField, &self.dense[n], x)).collect()
    }

    /// `dim E^r_{p,n}`.
    fn page(&self, r: i64, p: i64, n: usize) -> usize {
        let num = self.z(r, p, n).len();
        if num == 0 {
            return 0;
        }
        let mut den = self.z(r - 1, p - 1, n);
        if n + 1 < self.c.gens.len() {
            den.extend(self.apply_d(n + 1, &self.z(r - 1, p + r - 1, n + 1)));
        }
        num - sparse_rank(dense_to_sparse(&den))
    }

    fn d1_rank(&self, p: i64, n: usize) -> usize {
        if n == 0 || p == 0 {
            return 0;
        }
        // denominator of E^1_{p-1,n-1}: F_{p-2} C_{n-1} + d F_{p-1} C_n
        let mut den: Vec<Vec<Rat>> = self
            .f(n - 1, p - 2)
            .into_iter()
            .map(|i| (0..self.c.rank_in(n - 1)).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        den.extend(self.apply_d(n, &self.z(0, p - 1, n)));
        let base = sparse_rank(dense_to_sparse(&den));
        den.extend(self.apply_d(n, &self.z(1, p, n)));
        sparse_rank(dense_to_sparse(&den)) - base
    }
}

/// Pages of the spectral sequence of the filtration by `Gen::filt`, up to
/// the page where it stabilizes.
pub fn spectral_sequence(c: &ChainComplex) -> SpectralSequence {
    let fc = Filtered::new(c);
    let max_p = c.max_filt();
    let top = c.top();
    let last = max_p as i64 + 2;
    let cells: Vec<(i64, usize, usize)> = (1..=last)
        .flat_map(|r| (0..=max_p).flat_map(move |p| (0..=top).map(move |n| (r, p, n))))
        .collect();
    let dims: Vec<usize> = cells.par_iter().map(|&(r, p, n)| fc.page(r, p as i64, n)).collect();
    let mut pages = vec![vec![vec![0; top + 1]; max_p + 1]; last as usize];
    for (&(r, p, n), d) in cells.iter().zip(dims) {
        pages[r as usize - 1][p][n] = d;
    }
    let e_inf = pages.last().unwrap().clone();
    let d1: Vec<usize> = (0..=max_p)
        .flat_map(|p| (0..=top).map(move |n| (p, n)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(p, n)| fc.d1_rank(p as i64, n))
        .collect();
    let d1_rank = (0..=max_p).map(|p| (0..=top).map(|n| d1[p * (top + 1) + n]).collect()).collect();
    SpectralSequence { max_p, top, pages, e_inf, d1_rank }
}

impl SpectralSequence {
    pub fn e1(&self) -> &Grid {
        &self.pages[0]
    }

    pub fn e2(&self) -> &Grid {
        &self.pages[1]
    }

    /// `sum_p dim E^inf_{p, n-p}` per total degree `n`.
    pub fn e_inf_totals(&self) -> BettiTable {
        let mut out = BettiTable::new();
        for n in 0..=self.top {
            let s: usize = (0..=self.max_p).map(|p| self.e_inf[p][n]).sum();
            if s > 0 {
                out.insert(n, s);
            }
        }
        out
    }

    /// `E^2` recomputed from `E^1` and the ranks of `d^1`.
    pub fn e2_from_d1(&self) -> Grid {
        let e1 = self.e1();
        (0..=self.max_p)
            .map(|p| {
                (0..=self.top)
                    .map(|n| {
                        let incoming = if p < self.max_p && n < self.top { self.d1_rank[p + 1][n + 1] } else { 0 };
                        e1[p][n] - self.d1_rank[p][n] - incoming
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn grid_get(g: &Grid, p: usize, n: usize) -> usize {
    g.get(p).and_then(|row| row.get(n)).copied().unwrap_or(0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub violations: Vec<String>,
    /// `(s, t, m)`: exactness forces `dim E^1_{s,t} >= m`.
    pub implied_bounds: Vec<(usize, usize, usize)>,
}

impl DoublingReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compare `E^1` with the undoubled columns `U_s = H(Fil_s)`: the
/// identity `E^1_{s,t} = U_{s,t} + U_{s-1,t}`, exactness of `E^1` rows in
/// the columns below the last one, and `U_s = ker d^1`.
pub fn doubling_check(undoubled: &Grid, e1: &Grid, e2: &Grid, d1_rank: &Grid) -> DoublingReport {
    let mut rep = DoublingReport::default();
    let cols = e1.len();
    if cols == 0 {
        return rep;
    }
    let top = e1.iter().map(|r| r.len()).max().unwrap_or(0);
    for s in 0..cols {
        for n in 0..top {
            let want = grid_get(undoubled, s, n) + if s > 0 && n > 0 { grid_get(undoubled, s - 1, n - 1) } else { 0 };
            let have = grid_get(e1, s, n);
            if want != have {
                rep.violations.push(format!("E1[s={s}, t={}] = {have}, undoubled sum {want}", n as i64 - s as i64));
            }
            if s + 1 < cols && grid_get(e2, s, n) != 0 {
                rep.violations.push(format!("E2[s={s}, t={}] = {} is not zero", n as i64 - s as i64, grid_get(e2, s, n)));
            }
            let ker = have - grid_get(d1_rank, s, n);
            if ker != grid_get(undoubled, s, n) {
                rep.violations.push(format!("ker d1 at [s={s}, t={}] = {ker}, undoubled {}", n as i64 - s as i64, grid_get(undoubled, s, n)));
            }
        }
    }
    for s in 0..cols {
        for n in s..top {
            let t = n - s;
            let here = grid_get(e1, s, n);
            let before = if s > 0 { grid_get(e1, s - 1, n - 1) } else { 0 };
            if here > 0 && before == 0 {
                rep.implied_bounds.push((s + 1, t, here));
                if s + 1 < cols && grid_get(e1, s + 1, n + 1) < here {
                    rep.violations.push(format!("E1[s={}, t={t}] below implied bound {here}", s + 1));
                }
            }
        }
    }
    rep
}
