//! Facets of full-dimensional rational cones by the double description
//! method, and faces as subsets of the generating rays.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, QField};
use crate::ring::Rat;

/// A set of small indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Bits(pub Vec<u64>);

impl Bits {
    pub fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::empty(n);
        for i in idx {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_subset(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * k + t)
            })
        })
    }

    /// Image under a permutation of indices.
    pub fn permute(&self, perm: &[usize]) -> Bits {
        let mut out = Bits(vec![0; self.0.len()]);
        for i in self.iter() {
            out.insert(perm[i]);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    /// Primitive inner normal: nonnegative on every ray.
    pub normal: Vec<BigInt>,
    /// Rays lying on the facet.
    pub rays: Bits,
}

struct DdRay {
    y: Vec<BigInt>,
    zeros: Bits,
}

/// Facets of the cone spanned by `gens`, which must span the whole space.
pub fn facets(gens: &[Vec<i64>]) -> Vec<Facet> {
    let m = gens.len();
    let n = gens.first().map_or(0, |g| g.len());
    let g: Vec<Vec<BigInt>> = gens.iter().map(|v| linalg::int_vec(v)).collect();
    let gq: Vec<Vec<Rat>> = g.iter().map(|v| linalg::to_rat_vec(v)).collect();
    let basis = linalg::greedy_basis(&QField, &gq);
    assert_eq!(basis.len(), n, "cone must be full-dimensional");
    let bm: Vec<Vec<Rat>> = basis.iter().map(|&i| gq[i].clone()).collect();
    let inv = linalg::inverse(&QField, &bm).expect("basis is invertible");
    let mut rays: Vec<DdRay> = (0..n)
        .map(|j| {
            let col: Vec<Rat> = (0..n).map(|i| inv[i][j].clone()).collect();
            let y = linalg::clear_denominators(&col);
            let zeros = Bits::from_indices(m, basis.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &i)| i));
            DdRay { y, zeros }
        })
        .collect();
    let in_basis = Bits::from_indices(m, basis.iter().copied());
    for (gi, gv) in g.iter().enumerate() {
        if in_basis.contains(gi) {
            continue;
        }
        let s: Vec<BigInt> = rays.iter().map(|r| linalg::dot_int(gv, &r.y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_negative()).collect();
        let mut new_rays = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < n {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let mut y: Vec<BigInt> =
                    rays[q].y.iter().zip(&rays[p].y).map(|(yq, yp)| &s[p] * yq - &s[q] * yp).collect();
                linalg::primitive(&mut y);
                let mut zeros = common;
                zeros.insert(gi);
                new_rays.push(DdRay { y, zeros });
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if s[i].is_zero() {
                r.zeros.insert(gi);
                kept.push(r);
            } else if s[i].is_positive() {
                kept.push(r);
            }
        }
        kept.extend(new_rays);
        rays = kept;
    }
    let mut out: Vec<Facet> = rays.into_iter().map(|r| Facet { normal: r.y, rays: r.zeros }).collect();
    out.sort_by(|a, b| a.rays.cmp(&b.rays));
    out
}

/// The facets of the face `f`, given all facets of the ambient cone:
/// the maximal proper intersections of `f` with them.
pub fn subfacets(f: &Bits, facets: &[Bits]) -> Vec<Bits> {
    let mut cands: Vec<Bits> = facets.iter().map(|g| f.and(g)).filter(|x| x != f).collect();
    cands.sort_by_key(|b| std::cmp::Reverse(b.count()));
    cands.dedup();
    let mut out: Vec<Bits> = Vec::new();
    for c in cands {
        if !out.iter().any(|o| c.is_subset(o)) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// All faces of the cone (as ray subsets), including the cone itself and
/// the zero face.
pub fn all_faces(nrays: usize, facets: &[Bits]) -> Vec<Bits> {
    let top = Bits::full(nrays);
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut stack = vec![top.clone()];
    seen.insert(top);
    while let Some(f) = stack.pop() {
        for s in subfacets(&f, facets) {
            if seen.insert(s.clone()) {
                stack.push(s);
            }
        }
    }
    let mut out: Vec<Bits> = seen.into_iter().collect();
    out.sort();
    out
}

/// Linear-span dimension of the rays in `f`.
pub fn face_dim(gens: &[Vec<i64>], f: &Bits) -> usize {
    let rows: Vec<Vec<Rat>> = f.iter().map(|i| linalg::to_rat_vec(&linalg::int_vec(&gens[i]))).collect();
    linalg::rank(&QField, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_ops() {
        let a = Bits::from_indices(70, [1, 65, 3]);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 65]);
        assert!(Bits::from_indices(70, [3]).is_subset(&a));
        assert_eq!(a.count(), 3);
    }

    #[test]
    fn square_cone() {
        // cone over a square: 4 facets, 4 edges, apex
        let gens = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
        let fs = facets(&gens);
        assert_eq!(fs.len(), 4);
        for f in &fs {
            assert_eq!(f.rays.count(), 2);
            for (i, g) in gens.iter().enumerate() {
                let v = linalg::dot_int(&f.normal, &linalg::int_vec(g));
                assert!(!v.is_negative());
                assert_eq!(v.is_zero(), f.rays.contains(i));
            }
        }
        let fb: Vec<Bits> = fs.iter().map(|f| f.rays.clone()).collect();
        let faces = all_faces(4, &fb);
        // apex, 4 rays, 4 facets, cone
        assert_eq!(faces.len(), 10);
        let dims: Vec<usize> = faces.iter().map(|f| face_dim(&gens, f)).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 4);
    }

    #[test]
    fn cube_cone_with_interior_generator() {
        let mut gens = Vec::new();
        for a in [-1i64, 1] {
            for b in [-1i64, 1] {
                for c in [-1i64, 1] {
                    gens.push(vec![a, b, c, 1]);
                }
            }
        }
        gens.push(vec![0, 0, 0, 1]);
        let fs = facets(&gens);
        assert_eq!(fs.len(), 6);
        assert!(fs.iter().all(|f| f.rays.count() == 4 && !f.rays.contains(8)));
    }

    #[test]
    fn simplicial() {
        let gens = vec![vec![1, 0], vec![1, 1]];
        let fs = facets(&gens);
        assert_eq!(fs.len(), 2);
        let faces = all_faces(2, &fs.iter().map(|f| f.rays.clone()).collect::<Vec<_>>());
        assert_eq!(faces.len(), 4);
        assert!(faces.contains(&Bits::empty(2)));
    }
}
