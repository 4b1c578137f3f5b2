//! Level-`m` structure counts for the symplectic group: isotropic
//! subspaces of `(Z/m)^{2g}`, cusp orbit counts, orientation behaviour of
//! principal congruence subgroups and the top-weight cohomology table.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, QField};
use crate::ring::rat;

/// Largest search space (`m^{2gp}`) the brute-force count accepts.
pub const BRUTE_LIMIT: u128 = 100_000_000;

/// Distinct prime factors of `m`, with exponents.
pub fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn euler_phi(m: u64) -> u64 {
    factor(m).iter().fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

/// `|GL_p(Z/m)|`.
pub fn gl_order(p: u32, m: u64) -> BigUint {
    let mut out = BigUint::one();
    for (q, e) in factor(m) {
        let q = BigUint::from(q);
        let mut f = BigUint::one();
        let qp = q.pow(p);
        for i in 0..p {
            f *= &qp - q.pow(i);
        }
        out *= f * q.pow((e - 1) * p * p);
    }
    out
}

/// Row echelon basis modulo a prime, for incremental independence tests.
#[derive(Clone)]
struct EchelonModP {
    q: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonModP {
    /// Adds `v` if independent of the current rows.
    fn push(&mut self, v: &[u64]) -> bool {
        let q = self.q;
        let mut w: Vec<u64> = v.iter().map(|x| x % q).collect();
        for (piv, row) in &self.rows {
            let c = w[*piv];
            if c != 0 {
                for (a, b) in w.iter_mut().zip(row) {
                    *a = (*a + q - c * b % q) % q;
                }
            }
        }
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inverse(w[piv], q);
        for a in w.iter_mut() {
            *a = *a * inv % q;
        }
        self.rows.push((piv, w));
        true
    }
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    let g = (a as i64).extended_gcd(&(q as i64));
    g.x.rem_euclid(q as i64) as u64
}

/// Standard symplectic form on `(Z/m)^{2g}` with pairs `(e_i, f_i)`.
fn omega(v: &[u64], w: &[u64], m: u64) -> u64 {
    let g = v.len() / 2;
    let mut s = 0u64;
    for i in 0..g {
        s = (s + v[i] * w[g + i] % m + m - v[g + i] * w[i] % m) % m;
    }
    s
}

/// Number of isotropic free rank-`p` direct summands of `(Z/m)^{2g}`,
/// counted as isotropic unimodular `p`-frames divided by `|GL_p(Z/m)|`.
pub fn count_isotropic_bruteforce(g: u32, p: u32, m: u64) -> Result<BigUint> {
    if p > g || m == 0 {
        return Err(Error::Invalid("need 0 <= p <= g and m >= 1".into()));
    }
    let space = (m as u128).checked_pow(2 * g * p);
    if space.map_or(true, |s| s > BRUTE_LIMIT) {
        return Err(Error::TooLarge(format!("m^(2gp) exceeds {BRUTE_LIMIT}")));
    }
    if m == 1 {
        return Ok(BigUint::one());
    }
    let n = 2 * g as usize;
    let total = (m as u128).pow(n as u32) as u64;
    let vectors: Vec<Vec<u64>> = (0..total)
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect()
        })
        .collect();
    let primes: Vec<u64> = factor(m).iter().map(|f| f.0).collect();
    let start: Vec<EchelonModP> = primes.iter().map(|&q| EchelonModP { q, rows: Vec::new() }).collect();
    let mut frames = 0u64;
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        vs: &[Vec<u64>],
        m: u64,
        p: usize,
        chosen: &mut Vec<usize>,
        ech: &[EchelonModP],
        frames: &mut u64,
    ) {
        if chosen.len() == p {
            *frames += 1;
            return;
        }
        for (i, v) in vs.iter().enumerate() {
            if chosen.iter().any(|&j| omega(&vs[j], v, m) != 0) {
                continue;
            }
            let mut next = ech.to_vec();
            if !next.iter_mut().all(|e| e.push(v)) {
                continue;
            }
            chosen.push(i);
            rec(vs, m, p, chosen, &next, frames);
            chosen.pop();
        }
    }
    rec(&vectors, m, p as usize, &mut chosen, &start, &mut frames);
    let gl = gl_order(p, m);
    let (q, rem) = BigUint::from(frames).div_rem(&gl);
    debug_assert!(rem.is_zero());
    Ok(q)
}

/// `m^{g(g+1)/2} prod_{p | m} prod_{i=1}^{g} (1 + p^{-i})`.
pub fn count_isotropic_formula(g: u32, m: u64) -> BigUint {
    let d = g * (g + 1) / 2;
    let mut num = BigUint::from(m).pow(d);
    for (p, _) in factor(m) {
        let pb = BigUint::from(p);
        num /= pb.pow(d);
        for i in 1..=g {
            num *= pb.pow(i) + 1u32;
        }
    }
    num
}

fn epsilon_times(m: u64, x: BigUint) -> BigUint {
    if m >= 3 {
        x / 2u32
    } else {
        x
    }
}

/// Orbits of isotropic `p`-dimensional subspaces under the level-`m`
/// congruence subgroup, from the brute-force count.
pub fn pi(g: u32, p: u32, m: u64) -> Result<BigUint> {
    let c = count_isotropic_bruteforce(g, p, m)?;
    Ok(epsilon_times(m, c * euler_phi(m)))
}

/// `eps_m m^{g(g+1)/2} phi(m) prod_{p | m} prod_{i=1}^{g} (1 + p^{-i})`.
pub fn pi_closed(g: u32, m: u64) -> BigUint {
    epsilon_times(m, count_isotropic_formula(g, m) * euler_phi(m))
}

/// Whether the level-`m` subgroup of `GL_s(Z)` preserves orientation of
/// the space of symmetric `s x s` matrices.
pub fn orientation_preserving(m: u64, s: u32) -> bool {
    m >= 3 || s % 2 == 1
}

/// Determinant of `X -> e X e^t` on symmetric `s x s` matrices, for
/// `e = diag(-1, 1, ..., 1)`.
pub fn reflection_det_on_sym(s: usize) -> i64 {
    let idx: Vec<(usize, usize)> = (0..s).flat_map(|i| (i..s).map(move |j| (i, j))).collect();
    let sign = |i: usize| if i == 0 { -1 } else { 1 };
    let m: Vec<Vec<_>> = idx
        .iter()
        .map(|&(i, j)| idx.iter().map(|&(k, l)| if (i, j) == (k, l) { rat(sign(i) * sign(j)) } else { rat(0) }).collect())
        .collect();
    let det = linalg::determinant(&QField, &m);
    i64::try_from(det.to_integer()).expect("determinant is +-1")
}

/// Dimension of the degree-`k` part of the exterior algebra on
/// generators in degrees `5, 9, 13, ...`.
pub fn omega_dim(k: usize) -> u64 {
    let mut dp = vec![0u64; k + 1];
    dp[0] = 1;
    let mut part = 5;
    while part <= k {
        for s in (part..=k).rev() {
            dp[s] += dp[s - part];
        }
        part += 4;
    }
    dp[k]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableEntry {
    Value(BigUint),
    OutsideStableRange,
}

/// `dim Gr^W H^{d+k}` for `k = 0..=k_max`: `omega_dim(k) pi_closed(g, m)`
/// when the level subgroup preserves orientation, zero otherwise.
pub fn top_weight_table(g: u32, m: u64, k_max: usize) -> Vec<TableEntry> {
    let stable = (g as usize).saturating_sub(2);
    let pi = pi_closed(g, m);
    (0..=k_max)
        .map(|k| {
            if g < 2 || k > stable {
                TableEntry::OutsideStableRange
            } else if orientation_preserving(m, g) {
                TableEntry::Value(&pi * omega_dim(k))
            } else {
                TableEntry::Value(BigUint::zero())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(count_isotropic_bruteforce(1, 1, 3).unwrap(), b(4));
        assert_eq!(count_isotropic_bruteforce(1, 1, 4).unwrap(), b(6));
        assert_eq!(count_isotropic_bruteforce(2, 2, 2).unwrap(), b(15));
        assert!(matches!(count_isotropic_bruteforce(4, 4, 5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(count_isotropic_formula(1, 3), b(4));
        assert_eq!(count_isotropic_formula(2, 2), b(15));
        assert_eq!(count_isotropic_formula(2, 3), b(40));
        assert_eq!(count_isotropic_formula(3, 1), b(1));
    }

    #[test]
    fn formula_matches_brute_force_grid() {
        for g in 1..=4u32 {
            for m in 1..=100u64 {
                if (m as u128).checked_pow(2 * g * g).map_or(true, |s| s > BRUTE_LIMIT) {
                    break;
                }
                assert_eq!(count_isotropic_formula(g, m), count_isotropic_bruteforce(g, g, m).unwrap(), "g={g} m={m}");
            }
        }
    }

    #[test]
    fn pi_values() {
        assert_eq!(pi(1, 1, 1).unwrap(), b(1));
        assert_eq!(pi(1, 1, 3).unwrap(), b(4));
        assert_eq!(pi(2, 2, 3).unwrap(), b(40));
        assert_eq!(pi_closed(2, 3), b(40));
        assert_eq!(pi_closed(1, 1), b(1));
        let expect = (1..=7u32).fold(BigUint::one(), |acc, i| acc * (b(3).pow(i) + 1u32));
        assert_eq!(pi_closed(7, 3), expect);
    }

    #[test]
    fn lower_dimensional_counts() {
        // every nonzero vector of F_3^4 spans an isotropic line
        assert_eq!(count_isotropic_bruteforce(2, 1, 3).unwrap(), b(40));
        assert_eq!(count_isotropic_bruteforce(2, 0, 3).unwrap(), b(1));
    }

    #[test]
    fn orientation() {
        assert!(orientation_preserving(3, 2));
        assert!(!orientation_preserving(2, 2));
        assert!(orientation_preserving(1, 3));
        for s in 1..=5 {
            for m in [1, 2] {
                assert_eq!(orientation_preserving(m, s as u32), reflection_det_on_sym(s) == 1);
            }
        }
    }

    #[test]
    fn omega_dims() {
        assert_eq!(omega_dim(0), 1);
        assert!((1..=4).all(|k| omega_dim(k) == 0));
        for k in [5, 9, 13, 14] {
            assert_eq!(omega_dim(k), 1);
        }
        assert_eq!(omega_dim(6), 0);
    }

    #[test]
    fn tables() {
        let pi = pi_closed(7, 3);
        let z = || TableEntry::Value(BigUint::zero());
        assert_eq!(
            top_weight_table(7, 3, 5),
            vec![TableEntry::Value(pi.clone()), z(), z(), z(), z(), TableEntry::Value(pi)]
        );
        assert!(top_weight_table(4, 2, 2).iter().all(|e| *e == z()));
        assert_eq!(top_weight_table(4, 2, 3)[3], TableEntry::OutsideStableRange);
        assert_eq!(top_weight_table(3, 1, 1), vec![TableEntry::Value(b(1)), z()]);
    }

    proptest! {
        #[test]
        fn formula_is_multiplicative(g in 1u32..5, a in 1u64..30, c in 1u64..30) {
            prop_assume!(a.gcd(&c) == 1);
            prop_assert_eq!(count_isotropic_formula(g, a * c), count_isotropic_formula(g, a) * count_isotropic_formula(g, c));
        }
    }
}
