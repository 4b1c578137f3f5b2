//! Dense exact linear algebra over a field given as a ring object, plus a
//! few integer lattice helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::Rat;

/// A field, given as an object that performs arithmetic on its elements.
pub trait FieldOps {
    type El: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, x: &Self::El) -> bool;
    fn add(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn sub(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn mul(&self, x: &Self::El, y: &Self::El) -> Self::El;
    fn inv(&self, x: &Self::El) -> Self::El;
    fn neg(&self, x: &Self::El) -> Self::El;
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct QField;

impl FieldOps for QField {
    type El = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, x: &Rat) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Rat, y: &Rat) -> Rat {
        x + y
    }
    fn sub(&self, x: &Rat, y: &Rat) -> Rat {
        x - y
    }
    fn mul(&self, x: &Rat, y: &Rat) -> Rat {
        x * y
    }
    fn inv(&self, x: &Rat) -> Rat {
        x.recip()
    }
    fn neg(&self, x: &Rat) -> Rat {
        -x
    }
}

pub type Mat<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: FieldOps>(f: &F, m: &mut Mat<F::El>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]);
        for j in c..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldOps>(f: &F, m: &Mat<F::El>) -> usize {
    let mut m = m.clone();
    rref(f, &mut m).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace<F: FieldOps>(f: &F, m: &Mat<F::El>, cols: usize) -> Vec<Vec<F::El>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); cols];
            x[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(&a[i][fc]);
            }
            x
        })
        .collect()
}

pub fn determinant<F: FieldOps>(f: &F, m: &Mat<F::El>) -> F::El {
    let n = m.len();
    let mut a = m.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
            return f.zero();
        };
        if p != c {
            a.swap(p, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &a[c][c]);
        let inv = f.inv(&a[c][c]);
        for i in c + 1..n {
            if f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = f.mul(&a[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
    }
    det
}

pub fn inverse<F: FieldOps>(f: &F, m: &Mat<F::El>) -> Option<Mat<F::El>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Mat<F::El> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<F: FieldOps>(f: &F, a: &Mat<F::El>, b: &Mat<F::El>) -> Mat<F::El> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(f.zero(), |acc, k| {
                        if f.is_zero(&row[k]) {
                            acc
                        } else {
                            f.add(&acc, &f.mul(&row[k], &b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: FieldOps>(f: &F, a: &Mat<F::El>, x: &[F::El]) -> Vec<F::El> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(f.zero(), |acc, (p, q)| f.add(&acc, &f.mul(p, q))))
        .collect()
}

pub fn transpose<E: Clone>(m: &Mat<E>) -> Mat<E> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Coordinates of `x` in terms of the rows of `basis` (assumed linearly
/// independent), or `None` if `x` is outside their span.
pub fn coordinates<F: FieldOps>(f: &F, basis: &[Vec<F::El>], x: &[F::El]) -> Option<Vec<F::El>> {
    let k = basis.len();
    let n = x.len();
    // columns: basis vectors, then x
    let mut aug: Mat<F::El> = (0..n)
        .map(|i| {
            let mut row: Vec<F::El> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![f.zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        out[p] = aug[i][k].clone();
    }
    Some(out)
}

/// Indices of a maximal linearly independent subset, chosen greedily in
/// order.
pub fn greedy_basis<F: FieldOps>(f: &F, vectors: &[Vec<F::El>]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut echelon: Mat<F::El> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut trial = echelon.clone();
        trial.push(v.clone());
        let r = rref(f, &mut trial).len();
        if r > echelon.len() {
            trial.truncate(r);
            echelon = trial;
            chosen.push(i);
        }
    }
    chosen
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction.
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    primitive(&mut out);
    out
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Whether the Z-lattice spanned by the rows of `rows` (assumed linearly
/// independent) equals its rational saturation in `Z^n`, i.e. the gcd of
/// its maximal minors is 1.
pub fn is_saturated(rows: &[Vec<BigInt>]) -> bool {
    let k = rows.len();
    if k == 0 {
        return true;
    }
    let n = rows[0].len();
    let mut g = BigInt::zero();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let minor: Vec<Vec<BigInt>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&bareiss_det(&minor));
        if g.is_one() {
            return true;
        }
        // next k-subset of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return g.abs().is_one();
            }
            i -= 1;
            if cols[i] < n - k + i {
                cols[i] += 1;
                for j in i + 1..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn q(rows: &[&[i64]]) -> Mat<Rat> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&QField, &m), 2);
        let ker = nullspace(&QField, &m, 3);
        assert_eq!(ker.len(), 1);
        assert!(mat_vec(&QField, &m, &ker[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinant_matches_bareiss() {
        let m = [[2i64, -1, 0], [-1, 2, -1], [0, -1, 2]];
        let qm: Mat<Rat> = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let im: Vec<Vec<BigInt>> = m.iter().map(|r| int_vec(r)).collect();
        assert_eq!(determinant(&QField, &qm), rat(4));
        assert_eq!(bareiss_det(&im), BigInt::from(4));
        let inv = inverse(&QField, &qm).unwrap();
        let id = mat_mul(&QField, &qm, &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, rat((i == j) as i64));
            }
        }
    }

    #[test]
    fn coordinates_in_span() {
        let basis = q(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = vec![rat(2), rat(3), rat(5)];
        assert_eq!(coordinates(&QField, &basis, &x), Some(vec![rat(2), rat(3)]));
        assert_eq!(coordinates(&QField, &basis, &[rat(1), rat(1), rat(0)]), None);
    }

    #[test]
    fn saturation() {
        assert!(is_saturated(&[int_vec(&[1, 1, 0]), int_vec(&[0, 1, 1])]));
        assert!(!is_saturated(&[int_vec(&[2, 0, 0])]));
        assert!(!is_saturated(&[int_vec(&[1, 1, 0]), int_vec(&[1, -1, 0])]));
    }
}
