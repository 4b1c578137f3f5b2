//! The perfect cone complex: orbits of faces of perfect cones, their
//! orientation behaviour, and the oriented cellular chain complex with its
//! inflation subcomplex and rank filtration.

use std::collections::HashMap;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{self, GLMat, LVec};
use crate::homology::{ChainComplex, Gen};
use crate::isometry::{self, Fingerprint, Reduced};
use crate::linalg::{self, QField};
use crate::polyhedral::{self, Bits};
use crate::ring::{rat, FieldCtx, IQElem, Rat};
use crate::voronoi::{self, PerfectDecomposition};

/// A `GL_r(R)`-orbit of faces of perfect cones.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellOrbit {
    pub id: usize,
    /// Perfect class and ray subset of the representative.
    pub class: usize,
    pub face: Bits,
    /// Generating vectors of the representative (one per ray).
    pub vectors: Vec<LVec>,
    pub dim: usize,
    pub rank: usize,
    pub alternating: bool,
    /// Order of the stabilizer acting on the `K`-span of the face.
    pub stabilizer_order: usize,
    /// Indices into `vectors` whose rays form the oriented basis of the span.
    pub orientation_basis: Vec<usize>,
    pub coloop: Option<LVec>,
    /// Facet orbits with a witness `g` carrying the facet onto their
    /// representative. Filled for alternating cells only.
    pub incident_facets: Vec<(usize, GLMat)>,
    /// An element of the stabilizer reversing orientation, if any.
    pub reversing: Option<GLMat>,
    #[serde(skip)]
    reduced: Option<Reduced>,
}

impl CellOrbit {
    fn reduced(&self) -> &Reduced {
        self.reduced.as_ref().expect("reduced data present")
    }
}

/// All cell orbits together with the map from (class, canonical face) to
/// orbit.
#[derive(Clone, Debug)]
pub struct CellSet {
    pub ctx: FieldCtx,
    pub r: usize,
    pub decomposition: PerfectDecomposition,
    pub cells: Vec<CellOrbit>,
    face_orbit: HashMap<(usize, Bits), usize>,
}

fn phis(ctx: &FieldCtx, vs: &[LVec]) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| linalg::to_rat_vec(&linalg::int_vec(&herm::phi(ctx, v)))).collect()
}

fn det_sign(m: &[Vec<Rat>]) -> i32 {
    let d = linalg::determinant(&QField, &m.to_vec());
    if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of the determinant of the map sending the basis `basis` (rows)
/// to `images`, both inside the same span.
fn relative_sign(basis: &[Vec<Rat>], images: &[Vec<Rat>]) -> i32 {
    let m: Vec<Vec<Rat>> = images
        .iter()
        .map(|x| linalg::coordinates(&QField, basis, x).expect("image lies in the span"))
        .collect();
    det_sign(&m)
}

/// Sign of `h` on the span of the rays of a reduced configuration, using
/// the ray basis given by `basis` (indices into `vecs`).
fn sign_on_span(ctx: &FieldCtx, h: &GLMat, vecs: &[LVec], basis: &[usize]) -> i32 {
    let b: Vec<LVec> = basis.iter().map(|&i| vecs[i].clone()).collect();
    let img: Vec<LVec> = b.iter().map(|v| h.apply(ctx, v)).collect();
    relative_sign(&phis(ctx, &b), &phis(ctx, &img))
}

/// A vector of the configuration that extends to an `R`-basis of the
/// saturated span with all the others in the complementary span.
pub fn has_coloop(ctx: &FieldCtx, r: usize, vecs: &[LVec]) -> Option<LVec> {
    let red = Reduced::new(ctx, r, vecs);
    let k = red.k;
    if k == 0 {
        return None;
    }
    let deg = ctx.degree();
    (0..vecs.len()).find_map(|i| {
        let rest: Vec<LVec> = red.vecs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        let (kk, c) = herm::adapted_basis(ctx, k, &rest);
        if kk + 1 != k {
            return None;
        }
        let z = c.inverse(ctx).apply(ctx, &red.vecs[i]);
        let last = herm::big(&herm::entry(ctx, &z[(k - 1) * deg..], 0));
        ctx.is_unit(&last).then(|| vecs[i].clone())
    })
}

/// `C_t (h + I) C_s^{-1}`: the map of `R^r` induced by `h` between the
/// reduced coordinates of two configurations.
fn lift_map(ctx: &FieldCtx, s: &Reduced, t: &Reduced, h: &GLMat) -> GLMat {
    let r = s.r;
    let mut rows = GLMat::identity(r).rows;
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            rows[i][j] = h.rows[i][j].clone();
        }
    }
    t.basis.mul(ctx, &GLMat { rows }).mul(ctx, &s.basis_inv)
}

type Key = (usize, usize, usize, Vec<Fingerprint>);

struct Pending {
    class: usize,
    face: Bits,
    vectors: Vec<LVec>,
    dim: usize,
    reduced: Reduced,
    key: Key,
}

/// One representative per orbit of faces of the perfect cones of
/// `GL_r(R)`, with stabilizer data and flags.
pub fn cell_orbits(ctx: &FieldCtx, r: usize) -> Result<CellSet> {
    let decomposition = voronoi::enumerate_perfect(ctx, r)?;
    cell_orbits_of(decomposition)
}

pub fn cell_orbits_of(decomposition: PerfectDecomposition) -> Result<CellSet> {
    let ctx = decomposition.ctx.clone();
    let r = decomposition.r;
    let pending: Vec<Pending> = if r == 0 {
        vec![Pending {
            class: 0,
            face: Bits::empty(0),
            vectors: Vec::new(),
            dim: 0,
            reduced: Reduced::new(&ctx, 0, &[]),
            key: (0, 0, 0, Vec::new()),
        }]
    } else {
        decomposition
            .classes
            .par_iter()
            .enumerate()
            .flat_map_iter(|(ci, cone)| {
                let faces = polyhedral::all_faces(cone.rays.len(), &cone.facet_bits());
                let mut canon: Vec<Bits> = faces.into_iter().filter(|f| cone.canonical_face(f) == *f).collect();
                canon.sort();
                let ctx = &ctx;
                canon.into_iter().map(move |face| {
                    let vectors: Vec<LVec> = face.iter().map(|i| cone.min_vectors[i].clone()).collect();
                    let dim = polyhedral::face_dim(&cone.rays, &face);
                    let reduced = Reduced::new(ctx, r, &vectors);
                    let key = (dim, reduced.k, vectors.len(), reduced.config.invariant());
                    Pending { class: ci, face, vectors, dim, reduced, key }
                })
            })
            .collect()
    };

    // global registry
    let mut registry: HashMap<Key, Vec<usize>> = HashMap::new();
    let mut assign: Vec<usize> = Vec::with_capacity(pending.len());
    let mut unresolved: Vec<(usize, Vec<usize>)> = Vec::new();
    for (pi, p) in pending.iter().enumerate() {
        match registry.get(&p.key) {
            None => {
                registry.insert(p.key.clone(), vec![pi]);
                assign.push(pi);
            }
            Some(cands) => {
                unresolved.push((pi, cands.clone()));
                assign.push(usize::MAX);
            }
        }
    }
    for (pi, _) in unresolved {
        let p = &pending[pi];
        let cands = registry.get(&p.key).cloned().unwrap_or_default();
        let found = cands
            .par_iter()
            .find_first(|&&qi| isometry::config_equivalence(&ctx, &p.reduced.config, &pending[qi].reduced.config).is_some())
            .copied();
        match found {
            Some(qi) => assign[pi] = qi,
            None => {
                registry.get_mut(&p.key).unwrap().push(pi);
                assign[pi] = pi;
            }
        }
    }

    // representatives ordered by (dim, rank, discovery)
    let mut rep_idx: Vec<usize> = (0..pending.len()).filter(|&i| assign[i] == i).collect();
    rep_idx.sort_by_key(|&i| (pending[i].dim, pending[i].reduced.k, i));
    let mut id_of: HashMap<usize, usize> = HashMap::new();
    for (id, &pi) in rep_idx.iter().enumerate() {
        id_of.insert(pi, id);
    }
    let mut face_orbit = HashMap::new();
    for (pi, p) in pending.iter().enumerate() {
        face_orbit.insert((p.class, p.face.clone()), id_of[&assign[pi]]);
    }

    let cells: Vec<CellOrbit> = rep_idx
        .par_iter()
        .enumerate()
        .map(|(id, &pi)| {
            let p = &pending[pi];
            let red = &p.reduced;
            let stab = isometry::config_stabilizer(&ctx, &red.config);
            let rows = phis(&ctx, &p.vectors);
            let orientation_basis = linalg::greedy_basis(&QField, &rows);
            let reversing = stab.iter().find(|h| sign_on_span(&ctx, h, &red.vecs, &orientation_basis) < 0).cloned();
            CellOrbit {
                id,
                class: p.class,
                face: p.face.clone(),
                vectors: p.vectors.clone(),
                dim: p.dim,
                rank: red.k,
                alternating: reversing.is_none(),
                stabilizer_order: stab.len(),
                orientation_basis,
                coloop: has_coloop(&ctx, r, &p.vectors),
                incident_facets: Vec::new(),
                reversing: reversing.map(|h| lift_map(&ctx, red, red, &h)),
                reduced: Some(red.clone()),
            }
        })
        .collect();
    Ok(CellSet { ctx, r, decomposition, cells, face_orbit })
}

/// Oriented complex on the alternating cells, filtered by rank.
#[derive(Clone, Debug)]
pub struct PerfectComplex {
    pub cells: CellSet,
    pub chain: ChainComplex,
}

impl CellSet {
    pub fn orbit_of(&self, class: usize, face: &Bits) -> usize {
        let cone = &self.decomposition.classes[class];
        self.face_orbit[&(class, cone.canonical_face(face))]
    }

    /// Sign and witness for the facet `g` of the representative of `sigma`.
    fn incidence(&self, sigma: &CellOrbit, g: &Bits) -> Result<Option<(usize, i32, GLMat)>> {
        let ctx = &self.ctx;
        let cone = &self.decomposition.classes[sigma.class];
        let tau = &self.cells[self.orbit_of(sigma.class, g)];
        if !tau.alternating {
            return Ok(None);
        }
        let sv: Vec<LVec> = g.iter().map(|i| cone.min_vectors[i].clone()).collect();
        let red_g = Reduced::new(ctx, self.r, &sv);
        let h = isometry::config_equivalence(ctx, &red_g.config, &tau.reduced().config)
            .ok_or_else(|| Error::OrientationInconsistency("facet has no identification".into()))?;
        let w = lift_map(ctx, &red_g, tau.reduced(), &h);

        let bs: Vec<Vec<Rat>> = sigma.orientation_basis.iter().map(|&i| sigma.vectors[i].clone()).map(|v| phis(ctx, &[v]).remove(0)).collect();
        let g_rows = phis(ctx, &sv);
        let bg = linalg::greedy_basis(&QField, &g_rows);
        let u_idx = sigma.face.iter().position(|i| !g.contains(i)).expect("facet is proper");
        let mut induced = vec![phis(ctx, &[sigma.vectors[u_idx].clone()]).remove(0)];
        induced.extend(bg.iter().map(|&i| g_rows[i].clone()));
        let e1 = relative_sign(&bs, &induced);

        let bt: Vec<Vec<Rat>> = tau.orientation_basis.iter().map(|&i| phis(ctx, &[tau.vectors[i].clone()]).remove(0)).collect();
        let img: Vec<LVec> = bg.iter().map(|&i| w.apply(ctx, &sv[i])).collect();
        let e2 = relative_sign(&bt, &phis(ctx, &img));

        // a second, independently found witness must agree
        let back = isometry::config_equivalence(ctx, &tau.reduced().config, &red_g.config)
            .ok_or_else(|| Error::OrientationInconsistency("identification is not symmetric".into()))?;
        let w2 = lift_map(ctx, &red_g, tau.reduced(), &back.inverse(ctx));
        let img2: Vec<LVec> = bg.iter().map(|&i| w2.apply(ctx, &sv[i])).collect();
        if relative_sign(&bt, &phis(ctx, &img2)) != e2 {
            return Err(Error::OrientationInconsistency(format!("cell {} transports two orientations onto facet orbit {}", sigma.id, tau.id)));
        }
        if e1 == 0 || e2 == 0 {
            return Err(Error::OrientationInconsistency("degenerate orientation".into()));
        }
        Ok(Some((tau.id, e1 * e2, w)))
    }

    /// The cellular chain complex on the alternating orbits, graded by
    /// dimension and filtered by rank.
    pub fn build_chain_complex(mut self) -> Result<PerfectComplex> {
        let top = self.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut gens: Vec<Vec<Gen>> = vec![Vec::new(); top + 1];
        let mut pos: HashMap<usize, usize> = HashMap::new();
        for c in self.cells.iter().filter(|c| c.alternating) {
            pos.insert(c.id, gens[c.dim].len());
            gens[c.dim].push(Gen { cell: c.id, filt: c.rank });
        }
        let mut chain = ChainComplex::new(gens);
        let columns: Vec<Result<Vec<(usize, i32, GLMat)>>> = self
            .cells
            .par_iter()
            .map(|sigma| {
                if !sigma.alternating || sigma.dim == 0 {
                    return Ok(Vec::new());
                }
                let cone = &self.decomposition.classes[sigma.class];
                let mut out = Vec::new();
                for g in polyhedral::subfacets(&sigma.face, &cone.facet_bits()) {
                    if let Some(x) = self.incidence(sigma, &g)? {
                        out.push(x);
                    }
                }
                Ok(out)
            })
            .collect();
        for (sigma, col) in self.cells.iter_mut().zip(columns) {
            let col = col?;
            if sigma.alternating && sigma.dim > 0 {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for (t, s, _) in &col {
                    *acc.entry(*t).or_default() += *s as i64;
                }
                let mut entries: Vec<(usize, i64)> = acc.into_iter().filter(|x| x.1 != 0).collect();
                entries.sort();
                for (t, s) in entries {
                    chain.boundary[sigma.dim].push((pos[&t], pos[&sigma.id], rat(s)));
                }
            }
            sigma.incident_facets = col.into_iter().map(|(t, _, w)| (t, w)).collect();
        }
        if !chain.is_complex() {
            return Err(Error::OrientationInconsistency("boundary does not square to zero".into()));
        }
        Ok(PerfectComplex { cells: self, chain })
    }
}

/// Orbits and complex for `GL_r(R)` in one step.
pub fn perfect_complex(ctx: &FieldCtx, r: usize) -> Result<PerfectComplex> {
    cell_orbits(ctx, r)?.build_chain_complex()
}

impl PerfectComplex {
    pub fn cell(&self, g: &Gen) -> &CellOrbit {
        &self.cells.cells[g.cell]
    }

    fn in_inflation(&self, g: &Gen) -> bool {
        let c = self.cell(g);
        c.rank < self.cells.r || (c.rank == self.cells.r && c.coloop.is_some())
    }

    /// Cells of rank below `r`, or of rank `r` with a coloop.
    pub fn inflation_subcomplex(&self) -> Result<ChainComplex> {
        if !self.chain.is_closed(|g| self.in_inflation(g)) {
            return Err(Error::NotClosed);
        }
        Ok(self.chain.restrict(|g| self.in_inflation(g)))
    }

    /// `Fil_p`: cells of rank at most `p`.
    pub fn rank_filtration(&self, p: usize) -> ChainComplex {
        self.chain.restrict(|g| g.filt <= p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ctx = &self.cells.ctx;
        let degrees: Vec<serde_json::Value> = self
            .chain
            .gens
            .iter()
            .enumerate()
            .map(|(n, gens)| {
                let g: Vec<serde_json::Value> = gens
                    .iter()
                    .map(|g| {
                        let c = self.cell(g);
                        serde_json::json!({
                            "cell": c.id,
                            "dim": c.dim,
                            "rank": c.rank,
                            "alternating": c.alternating,
                            "stabilizer_order": c.stabilizer_order,
                            "inflation": self.in_inflation(g),
                        })
                    })
                    .collect();
                let bd: Vec<serde_json::Value> = self.chain.boundary[n]
                    .iter()
                    .map(|(i, j, x)| {
                        let [a, b] = crate::ring::rat_to_json(x);
                        serde_json::json!([i, j, a, b])
                    })
                    .collect();
                serde_json::json!({ "degree": n, "generators": g, "boundary": bd })
            })
            .collect();
        let cells: Vec<serde_json::Value> = self
            .cells
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "id": c.id,
                    "dim": c.dim,
                    "rank": c.rank,
                    "alternating": c.alternating,
                    "stabilizer_order": c.stabilizer_order,
                    "vectors": c.vectors.iter().map(|v| herm::to_elems(ctx, v)).collect::<Vec<Vec<IQElem>>>(),
                    "orientation_basis": c.orientation_basis,
                    "coloop": c.coloop.as_ref().map(|v| herm::to_elems(ctx, v)),
                })
            })
            .collect();
        serde_json::json!({ "d": ctx.d(), "r": self.cells.r, "cells": cells, "degrees": degrees })
    }
}

/// A complex read back from the JSON written by `PerfectComplex::to_json`.
#[derive(Clone, Debug)]
pub struct StoredComplex {
    pub d: u32,
    pub r: usize,
    pub chain: ChainComplex,
    /// Inflation membership per degree and generator.
    pub inflation: Vec<Vec<bool>>,
}

impl StoredComplex {
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed complex".into());
        let d = v["d"].as_u64().ok_or_else(bad)? as u32;
        let r = v["r"].as_u64().ok_or_else(bad)? as usize;
        let degrees = v["degrees"].as_array().ok_or_else(bad)?;
        let mut gens = Vec::new();
        let mut inflation = Vec::new();
        let mut boundary = Vec::new();
        for deg in degrees {
            let g = deg["generators"].as_array().ok_or_else(bad)?;
            let mut row = Vec::new();
            let mut infl = Vec::new();
            for x in g {
                row.push(Gen {
                    cell: x["cell"].as_u64().ok_or_else(bad)? as usize,
                    filt: x["rank"].as_u64().ok_or_else(bad)? as usize,
                });
                infl.push(x["inflation"].as_bool().ok_or_else(bad)?);
            }
            gens.push(row);
            inflation.push(infl);
            let b = deg["boundary"].as_array().ok_or_else(bad)?;
            boundary.push(
                b.iter()
                    .map(|t| {
                        let t: [serde_json::Value; 4] = serde_json::from_value(t.clone())?;
                        let x = crate::ring::rat_from_json(&t[2], &t[3]).map_err(Error::Invalid)?;
                        Ok((t[0].as_u64().ok_or_else(bad)? as usize, t[1].as_u64().ok_or_else(bad)? as usize, x))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let chain = ChainComplex { gens, boundary };
        if !chain.is_complex() {
            return Err(Error::OrientationInconsistency("stored boundary does not square to zero".into()));
        }
        Ok(StoredComplex { d, r, chain, inflation })
    }

    pub fn inflation_subcomplex(&self) -> Result<ChainComplex> {
        let member = |g: &Gen| {
            self.chain.gens.iter().zip(&self.inflation).any(|(gs, fl)| gs.iter().zip(fl).any(|(x, &f)| f && x == g))
        };
        if !self.chain.is_closed(member) {
            return Err(Error::NotClosed);
        }
        Ok(self.chain.restrict(member))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{betti, BettiTable};

    fn ctx(d: u32) -> FieldCtx {
        if d == 0 {
            FieldCtx::symmetric()
        } else {
            FieldCtx::new(d).unwrap()
        }
    }

    #[test]
    fn coloop_examples() {
        let z = ctx(0);
        assert_eq!(has_coloop(&z, 2, &[vec![1, 0]]), Some(vec![1, 0]));
        assert_eq!(has_coloop(&z, 2, &[vec![1, 0], vec![0, 1], vec![1, -1]]), None);
        assert_eq!(has_coloop(&z, 2, &[vec![2, 0]]), None);
        assert_eq!(has_coloop(&z, 2, &[]), None);
        let g = ctx(1);
        assert!(has_coloop(&g, 2, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).is_some());
    }

    #[test]
    fn gaussian_rank_two() {
        let pc = perfect_complex(&ctx(1), 2).unwrap();
        let cells = &pc.cells.cells;
        assert_eq!(pc.cells.decomposition.classes.len(), 1);
        assert_eq!(cells.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        let alt: Vec<usize> = cells.iter().filter(|c| c.alternating).map(|c| c.dim).collect();
        assert_eq!(alt, vec![0, 1, 4]);
        assert!(cells[3].reversing.is_some());
        assert_eq!(betti(&pc.chain), BettiTable::from([(4, 1)]));
        let infl = pc.inflation_subcomplex().unwrap();
        assert_eq!(infl.gens.iter().map(|g| g.len()).sum::<usize>(), 2);
        assert!(betti(&infl).is_empty());
        let fil1 = pc.rank_filtration(1);
        assert_eq!(fil1.gens.iter().map(|g| g.len()).collect::<Vec<_>>(), infl.gens.iter().map(|g| g.len()).collect::<Vec<_>>());
    }

    #[test]
    fn rank_one_any_d() {
        for d in [0, 1, 3, 7] {
            let pc = perfect_complex(&ctx(d), 1).unwrap();
            assert_eq!(pc.cells.cells.len(), 2);
            assert!(pc.cells.cells.iter().all(|c| c.alternating));
            assert!(betti(&pc.chain).is_empty());
            assert_eq!(pc.inflation_subcomplex().unwrap().gens, pc.chain.gens);
        }
    }

    #[test]
    fn rank_zero() {
        let pc = perfect_complex(&ctx(1), 0).unwrap();
        assert_eq!(betti(&pc.chain), BettiTable::from([(0, 1)]));
    }

    #[test]
    fn witnesses_identify_facets() {
        let pc = perfect_complex(&ctx(0), 3).unwrap();
        let c = &pc.cells;
        let z = &c.ctx;
        for sigma in c.cells.iter().filter(|s| s.alternating && s.dim > 0) {
            let cone = &c.decomposition.classes[sigma.class];
            let subs = polyhedral::subfacets(&sigma.face, &cone.facet_bits());
            let mut k = 0;
            for g in subs {
                let tau = &c.cells[c.orbit_of(sigma.class, &g)];
                if !tau.alternating {
                    continue;
                }
                let (t, w) = &sigma.incident_facets[k];
                k += 1;
                assert_eq!(*t, tau.id);
                let target: Vec<LVec> = tau.vectors.iter().map(|v| herm::unit_canonical(z, v)).collect();
                for i in g.iter() {
                    let img = herm::unit_canonical(z, &w.apply(z, &cone.min_vectors[i]));
                    assert!(target.contains(&img));
                }
            }
        }
    }

    #[test]
    fn alternating_is_basis_independent() {
        let pc = perfect_complex(&ctx(3), 2).unwrap();
        let z = &pc.cells.ctx;
        for c in &pc.cells.cells {
            let red = c.reduced();
            let rows = phis(z, &red.vecs);
            let rev: Vec<Vec<Rat>> = rows.iter().rev().cloned().collect();
            let basis: Vec<usize> = linalg::greedy_basis(&QField, &rev).into_iter().map(|i| rows.len() - 1 - i).collect();
            let stab = isometry::config_stabilizer(z, &red.config);
            let alt = stab.iter().all(|h| sign_on_span(z, h, &red.vecs, &basis) > 0);
            assert_eq!(alt, c.alternating);
        }
    }

    #[test]
    fn json_round_trip() {
        let pc = perfect_complex(&ctx(1), 2).unwrap();
        let back = StoredComplex::from_json(&pc.to_json()).unwrap();
        assert_eq!(betti(&back.chain), betti(&pc.chain));
        assert_eq!(back.inflation_subcomplex().unwrap().gens, pc.inflation_subcomplex().unwrap().gens);
        assert_eq!((back.d, back.r), (1, 2));
    }
}
