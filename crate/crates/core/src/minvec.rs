//! Minimum and minimal vectors of positive definite forms by Fincke-Pohst
//! enumeration on the realized lattice.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::herm::{self, HermForm, LVec};
use crate::linalg::Mat;
use crate::ring::{rat_to_json, FieldCtx, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinVecSet {
    pub min_value: Rat,
    /// The full set `M(A)`.
    pub vectors: Vec<LVec>,
    /// One canonical representative per unit orbit, sorted.
    pub reps: Vec<LVec>,
}

impl MinVecSet {
    pub fn to_json(&self, ctx: &FieldCtx) -> serde_json::Value {
        let conv = |vs: &[LVec]| -> Vec<serde_json::Value> {
            vs.iter().map(|v| serde_json::to_value(herm::to_elems(ctx, v)).unwrap()).collect()
        };
        serde_json::json!({
            "min_value": rat_to_json(&self.min_value),
            "vectors": conv(&self.vectors),
            "reps": conv(&self.reps),
        })
    }
}

enum IntGram {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

/// Exact integer evaluator `x -> x^t G x` with `G = den * Q`.
struct ExactGram {
    gram: IntGram,
    den: BigInt,
}

impl ExactGram {
    fn new(q: &Mat<Rat>) -> Self {
        let den = q.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let dq = Rat::from_integer(den.clone());
        let big: Vec<Vec<BigInt>> = q.iter().map(|row| row.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
        let small: Option<Vec<Vec<i64>>> = big
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().filter(|v| v.abs() < (1 << 40))).collect())
            .collect();
        let gram = match small {
            Some(s) => IntGram::Small(s),
            None => IntGram::Big(big),
        };
        ExactGram { gram, den }
    }

    fn numerator(&self, x: &[i64]) -> BigInt {
        match &self.gram {
            IntGram::Small(g) => {
                if x.iter().all(|v| v.abs() < (1 << 20)) {
                    let mut acc: i128 = 0;
                    for (i, row) in g.iter().enumerate() {
                        if x[i] == 0 {
                            continue;
                        }
                        let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                        acc += s * x[i] as i128;
                    }
                    BigInt::from(acc)
                } else {
                    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                    quad_big(g.iter().map(|row| row.iter().map(|&a| BigInt::from(a)).collect()).collect::<Vec<Vec<BigInt>>>().as_slice(), &xb)
                }
            }
            IntGram::Big(g) => {
                let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                quad_big(g, &xb)
            }
        }
    }

    fn value(&self, x: &[i64]) -> Rat {
        Rat::new(self.numerator(x), self.den.clone())
    }
}

fn quad_big(g: &[Vec<BigInt>], x: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, row) in g.iter().enumerate() {
        let s = row.iter().zip(x).fold(BigInt::zero(), |s, (a, b)| s + a * b);
        acc += s * &x[i];
    }
    acc
}

/// Short-vector enumerator for a fixed positive definite Gram matrix.
pub struct Enumerator {
    n: usize,
    diag: Vec<f64>,
    mu: Vec<Vec<f64>>,
    /// Gram matrix in the reduced basis.
    exact: ExactGram,
    q: Mat<Rat>,
    /// Columns: the reduced basis in original coordinates.
    basis: Vec<Vec<i64>>,
}

impl Enumerator {
    pub fn new(q: &Mat<Rat>) -> Result<Self> {
        herm::pohst_decomposition(q).ok_or(Error::NotPositiveDefinite)?;
        let n = q.len();
        let f = |x: &Rat| x.to_f64().expect("finite rational");
        let basis = lll(&q.iter().map(|row| row.iter().map(f).collect()).collect::<Vec<Vec<f64>>>());
        let bq: Mat<Rat> = basis.iter().map(|row| row.iter().map(|&x| crate::ring::rat(x)).collect()).collect();
        // reduced Gram B^t Q B, with the basis vectors as columns of B
        let qb = crate::linalg::mat_mul(&crate::linalg::QField, q, &bq);
        let red = crate::linalg::mat_mul(&crate::linalg::QField, &crate::linalg::transpose(&bq), &qb);
        let dec = herm::pohst_decomposition(&red).ok_or(Error::NotPositiveDefinite)?;
        let diag = (0..n).map(|i| f(&dec[i][i])).collect();
        let mu = (0..n).map(|i| (0..n).map(|j| if j > i { f(&dec[i][j]) } else { 0.0 }).collect()).collect();
        Ok(Enumerator { n, diag, mu, exact: ExactGram::new(&red), q: q.clone(), basis })
    }

    fn to_original(&self, y: &[i64]) -> LVec {
        self.basis.iter().map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn for_form(ctx: &FieldCtx, a: &HermForm) -> Result<Self> {
        Self::new(&a.to_real_quadratic(ctx))
    }

    pub fn value(&self, x: &[i64]) -> Rat {
        ExactGram::new(&self.q).value(x)
    }

    /// All nonzero `x` with `Q(x) <= bound`, with their exact values.
    pub fn below(&self, bound: &Rat) -> Vec<(LVec, Rat)> {
        let mut out = Vec::new();
        if !bound.is_positive() || self.n == 0 {
            return out;
        }
        let threshold = (bound * Rat::from_integer(self.exact.den.clone())).floor().to_integer();
        let b = bound.to_f64().unwrap();
        let start = b * (1.0 + 1e-9) + 1e-12;
        let eps = 1e-9 * b.max(1.0);
        let mut x = vec![0i64; self.n];
        self.recurse(self.n - 1, start, eps, &mut x, &mut |x| {
            if x.iter().all(|&v| v == 0) {
                return;
            }
            let num = self.exact.numerator(x);
            if num <= threshold {
                out.push((self.to_original(x), Rat::new(num, self.exact.den.clone())));
            }
        });
        out.sort();
        out
    }

    fn recurse(&self, i: usize, remaining: f64, eps: f64, x: &mut Vec<i64>, leaf: &mut dyn FnMut(&[i64])) {
        let c: f64 = (i + 1..self.n).map(|j| self.mu[i][j] * x[j] as f64).sum();
        let half = (remaining.max(0.0) / self.diag[i]).sqrt();
        let lo = (-c - half - 1e-9).ceil() as i64;
        let hi = (-c + half + 1e-9).floor() as i64;
        for v in lo..=hi {
            let t = v as f64 + c;
            let rem = remaining - self.diag[i] * t * t;
            if rem < -eps {
                continue;
            }
            x[i] = v;
            if i == 0 {
                leaf(x);
            } else {
                self.recurse(i - 1, rem, eps, x, leaf);
            }
        }
        x[i] = 0;
    }

    pub fn minimal(&self, ctx: &FieldCtx) -> MinVecSet {
        let bound = (0..self.n).map(|i| self.q[i][i].clone()).min().expect("nonempty lattice");
        // the reduced basis usually gives a better bound
        let bound = (0..self.n)
            .map(|i| {
                let mut e = vec![0; self.n];
                e[i] = 1;
                self.exact.value(&e)
            })
            .fold(bound, |a, b| a.min(b));
        let cands = self.below(&bound);
        let min_value = cands.iter().map(|(_, v)| v.clone()).min().expect("basis vectors are candidates");
        let vectors: Vec<LVec> = cands.into_iter().filter(|(_, v)| *v == min_value).map(|(x, _)| x).collect();
        let reps = unit_reps(ctx, &vectors);
        MinVecSet { min_value, vectors, reps }
    }
}

/// LLL reduction (`delta = 0.99`) of the lattice with Gram matrix `q`;
/// returns an integral unimodular matrix whose columns are the reduced
/// basis. Floating point only steers the choices, so the result is always
/// a basis.
pub fn lll(q: &[Vec<f64>]) -> Vec<Vec<i64>> {
    let n = q.len();
    let mut b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    // column j of the result is cols[j]
    let gram = |c: &Vec<Vec<i64>>, i: usize, j: usize| -> f64 {
        let mut s = 0.0;
        for (k, row) in q.iter().enumerate() {
            if c[i][k] == 0 {
                continue;
            }
            let t: f64 = row.iter().zip(&c[j]).map(|(a, &x)| a * x as f64).sum();
            s += c[i][k] as f64 * t;
        }
        s
    };
    let gso = |c: &Vec<Vec<i64>>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bs = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = gram(c, i, j);
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bs[k];
                }
                mu[i][j] = s / bs[j];
            }
            let mut s = gram(c, i, i);
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bs[k];
            }
            bs[i] = s;
        }
        (mu, bs)
    };
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 10_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&b);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i64;
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= r * y;
                }
            }
        }
        let (mu, bs) = gso(&b);
        if bs[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bs[k - 1] {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    // b holds basis vectors as rows; return them as columns
    (0..n).map(|i| (0..n).map(|j| b[j][i]).collect()).collect()
}

/// Sorted canonical representatives of the unit orbits in `vs`.
pub fn unit_reps(ctx: &FieldCtx, vs: &[LVec]) -> Vec<LVec> {
    let set: BTreeSet<LVec> = vs.iter().map(|v| herm::unit_canonical(ctx, v)).collect();
    set.into_iter().collect()
}

pub fn minimal_vectors(ctx: &FieldCtx, a: &HermForm) -> Result<MinVecSet> {
    Ok(Enumerator::for_form(ctx, a)?.minimal(ctx))
}

/// Every nonzero `v` with `A(v) <= bound` (both signs and all unit
/// multiples), paired with `A(v)`.
pub fn vectors_below(ctx: &FieldCtx, a: &HermForm, bound: &Rat) -> Result<Vec<(LVec, Rat)>> {
    Ok(Enumerator::for_form(ctx, a)?.below(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::{act, GLMat};
    use crate::ring::{rat, IQElem};
    use proptest::prelude::*;

    fn ctx(d: u32) -> FieldCtx {
        FieldCtx::new(d).unwrap()
    }

    /// Exhaustive search over a box.
    fn box_search(ctx: &FieldCtx, a: &HermForm, c: i64) -> (Rat, Vec<LVec>) {
        let n = herm::lattice_dim(ctx, a.rank_r());
        let mut best: Option<Rat> = None;
        let mut vs = Vec::new();
        let mut x = vec![-c; n];
        loop {
            if x.iter().any(|&v| v != 0) {
                let val = a.eval(ctx, &x);
                match &best {
                    Some(b) if val > *b => {}
                    Some(b) if val == *b => vs.push(x.clone()),
                    _ => {
                        best = Some(val);
                        vs = vec![x.clone()];
                    }
                }
            }
            let mut i = 0;
            while i < n && x[i] == c {
                x[i] = -c;
                i += 1;
            }
            if i == n {
                break;
            }
            x[i] += 1;
        }
        vs.sort();
        (best.unwrap(), vs)
    }

    #[test]
    fn gaussian_identity() {
        let m = minimal_vectors(&ctx(1), &HermForm::identity(2)).unwrap();
        assert_eq!(m.min_value, rat(1));
        assert_eq!(m.vectors.len(), 8);
        assert_eq!(m.reps.len(), 2);
    }

    #[test]
    fn a2_root_lattice() {
        let c = ctx(0);
        let a = HermForm::from_coords(&c, 2, &[rat(2), rat(2), rat(1)]);
        let m = minimal_vectors(&c, &a).unwrap();
        assert_eq!(m.min_value, rat(2));
        let mut want: Vec<LVec> = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, -1], vec![-1, 1]];
        want.sort();
        assert_eq!(m.vectors, want);
        assert_eq!(m.reps.len(), 3);
        assert_eq!(box_search(&c, &a, 3), (rat(2), want));
    }

    #[test]
    fn eisenstein_units() {
        let m = minimal_vectors(&ctx(3), &HermForm::identity(1)).unwrap();
        assert_eq!((m.min_value, m.vectors.len(), m.reps.len()), (rat(1), 6, 1));
    }

    #[test]
    fn below_examples() {
        let c = ctx(1);
        let v = vectors_below(&c, &HermForm::identity(1), &rat(2)).unwrap();
        // 4 units of norm 1 and 4 associates of 1+i
        assert_eq!(v.len(), 8);
        assert_eq!(unit_reps(&c, &v.iter().map(|p| p.0.clone()).collect::<Vec<_>>()).len(), 2);
        let n1 = v.iter().filter(|p| p.1 == rat(1)).count();
        assert_eq!(n1, 4);
        assert!(vectors_below(&c, &HermForm::identity(2), &crate::ring::rat_frac(1, 2)).unwrap().is_empty());
        let z = ctx(0);
        let v: Vec<LVec> = vectors_below(&z, &HermForm::identity(2), &rat(1)).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(v, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn not_positive_definite() {
        let c = ctx(0);
        let a = HermForm::from_coords(&c, 2, &[rat(1), rat(1), rat(1)]);
        assert!(matches!(minimal_vectors(&c, &a), Err(Error::NotPositiveDefinite)));
    }

    fn random_form(c: &FieldCtx, r: usize, off: &[i64]) -> HermForm {
        // diagonally dominant, hence positive definite
        let n = herm::form_dim(c, r);
        let coords: Vec<Rat> = (0..n).map(|i| if i < r { rat(3 + off[i].abs() * 2) } else { crate::ring::rat_frac(off[i], 3) }).collect();
        HermForm::from_coords(c, r, &coords)
    }

    fn random_gl(c: &FieldCtx, r: usize, seeds: &[(i64, i64)]) -> GLMat {
        let mut g = GLMat::identity(r);
        for (k, &(a, b)) in seeds.iter().enumerate() {
            let i = k % r;
            let j = (i + 1 + k / r) % r;
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
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn matches_box_search(di in 0usize..5, off in proptest::collection::vec(-2i64..=2, 4)) {
            let d = [0, 1, 2, 3, 7][di];
            let c = ctx(d);
            let a = random_form(&c, 2, &off);
            let m = minimal_vectors(&c, &a).unwrap();
            let (bmin, bvs) = box_search(&c, &a, 3);
            prop_assert_eq!(m.min_value, bmin);
            prop_assert_eq!(m.vectors, bvs);
        }

        #[test]
        fn equivariant_and_scaling(di in 0usize..6, off in proptest::collection::vec(-2i64..=2, 4), seeds in proptest::collection::vec((-2i64..=2, -2i64..=2), 4), s in 1i64..5) {
            let d = [0, 1, 2, 3, 7, 11][di];
            let c = ctx(d);
            let a = random_form(&c, 2, &off);
            let g = random_gl(&c, 2, &seeds);
            let m = minimal_vectors(&c, &a).unwrap();
            let mg = minimal_vectors(&c, &act(&c, &g, &a).unwrap()).unwrap();
            prop_assert_eq!(&m.min_value, &mg.min_value);
            let ginv = g.inverse(&c);
            let mut moved: Vec<LVec> = m.vectors.iter().map(|v| ginv.apply(&c, v)).collect();
            moved.sort();
            prop_assert_eq!(&moved, &mg.vectors);
            prop_assert_eq!(m.vectors.len(), c.units().len() * m.reps.len());
            let ms = minimal_vectors(&c, &a.scale(&crate::ring::rat_frac(s, 3))).unwrap();
            prop_assert_eq!(ms.min_value, m.min_value * crate::ring::rat_frac(s, 3));
            prop_assert_eq!(ms.vectors, m.vectors);
        }
    }
}
