//! Voronoi's algorithm: perfect forms, their cones, neighbors across
//! facets, and enumeration of all perfect cones up to `GL_r(R)`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{self, act, GLMat, HermForm, LVec};
use crate::isometry::{self, Config, IsometryResult};
use crate::linalg::{self, QField};
use crate::minvec::{self, Enumerator};
use crate::polyhedral::{self, Bits, Facet};
use crate::ring::{rat, FieldCtx, Rat};

const MAX_CLASSES: usize = 10_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerfectCone {
    /// Perfect form with minimum 1.
    pub form: HermForm,
    /// `M'(A)`, sorted.
    pub min_vectors: Vec<LVec>,
    /// `phi(v)` for `v` in `min_vectors`.
    pub rays: Vec<Vec<i64>>,
    pub span_dim: usize,
    pub facets: Vec<Facet>,
    /// Automorphisms of the form.
    pub stabilizer: Vec<GLMat>,
    /// Distinct permutations of the rays induced by the stabilizer.
    pub ray_perms: Vec<Vec<usize>>,
    /// One facet per stabilizer orbit, with the class of its neighbor
    /// (`None` for facets on the boundary of the positive cone).
    pub facet_orbits: Vec<(usize, Option<usize>)>,
    pub adjacency: Vec<usize>,
}

impl PerfectCone {
    pub fn from_form(ctx: &FieldCtx, form: &HermForm) -> Result<Self> {
        let r = form.rank_r();
        let mv = minvec::minimal_vectors(ctx, form)?;
        let form = form.scale(&mv.min_value.recip());
        let rays: Vec<Vec<i64>> = mv.reps.iter().map(|v| herm::phi(ctx, v)).collect();
        let span_dim = ray_span(&rays);
        if span_dim != herm::form_dim(ctx, r) {
            return Err(Error::Invalid("form is not perfect".into()));
        }
        let facets = polyhedral::facets(&rays);
        let config = Config::with_form(ctx, &form, &mv.reps);
        let stabilizer = isometry::search(ctx, &config, &config, true, &|h| act(ctx, h, &form).map_or(false, |x| x == form));
        let mut perms: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &stabilizer {
            perms.insert(
                mv.reps.iter().map(|v| config.lookup(ctx, &h.apply(ctx, v)).expect("automorphism permutes M'")).collect(),
            );
        }
        Ok(PerfectCone {
            form,
            min_vectors: mv.reps,
            rays,
            span_dim,
            facets,
            stabilizer,
            ray_perms: perms.into_iter().collect(),
            facet_orbits: Vec::new(),
            adjacency: Vec::new(),
        })
    }

    pub fn rank_r(&self) -> usize {
        self.form.rank_r()
    }

    pub fn config(&self, ctx: &FieldCtx) -> Config {
        Config::with_form(ctx, &self.form, &self.min_vectors)
    }

    /// Smallest image of a ray subset under the stabilizer.
    pub fn canonical_face(&self, f: &Bits) -> Bits {
        self.ray_perms.iter().map(|p| f.permute(p)).min().unwrap_or_else(|| f.clone())
    }

    pub fn facet_bits(&self) -> Vec<Bits> {
        self.facets.iter().map(|f| f.rays.clone()).collect()
    }
}

fn ray_span(rays: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<Rat>> = rays.iter().map(|v| linalg::to_rat_vec(&linalg::int_vec(v))).collect();
    linalg::rank(&QField, &rows)
}

/// The first `t > 0` at which `A + t rho` acquires new minimal vectors,
/// for `rho` vanishing on the minimal vectors it must keep and not
/// positive semidefinite. `A` has minimum 1.
fn line_search(ctx: &FieldCtx, a: &HermForm, rho: &[Rat]) -> Result<Rat> {
    let one = Rat::one();
    let a_coords = a.coords(ctx);
    let value = |c: &[Rat], v: &LVec| linalg::dot_rat(c, &linalg::to_rat_vec(&linalg::int_vec(&herm::phi(ctx, v))));
    // lo: positive definite without new short vectors; hi: not positive definite
    let mut lo = Rat::zero();
    let mut hi: Option<Rat> = None;
    let mut t = Rat::one();
    let mut steps = 0;
    let below = loop {
        steps += 1;
        if steps > 2000 {
            return Err(Error::Invalid("line search did not terminate".into()));
        }
        let b = a.add_scaled_coords(ctx, &t, rho);
        let Ok(en) = Enumerator::for_form(ctx, &b) else {
            hi = Some(t.clone());
            t = (&lo + &t) / rat(2);
            continue;
        };
        let at_most: Vec<(LVec, Rat)> = en.below(&one);
        let below: Vec<LVec> = at_most.iter().filter(|(_, x)| *x < one).map(|(v, _)| v.clone()).collect();
        if !below.is_empty() {
            break below;
        }
        // new minimal vectors exactly at t
        if at_most.iter().any(|(v, _)| !value(rho, v).is_zero()) {
            return Ok(t);
        }
        lo = t.clone();
        t = match &hi {
            Some(h) => (&lo + h) / rat(2),
            None => &t * rat(2),
        };
    };
    let mut below = below;
    loop {
        t = below
            .iter()
            .map(|v| {
                let rv = value(rho, v);
                debug_assert!(rv.is_negative());
                (&one - value(&a_coords, v)) / rv
            })
            .min()
            .expect("nonempty");
        let b = a.add_scaled_coords(ctx, &t, rho);
        let en = Enumerator::for_form(ctx, &b)?;
        below = en.below(&one).into_iter().filter(|(_, x)| *x < one).map(|(v, _)| v).collect();
        if below.is_empty() {
            return Ok(t);
        }
    }
}

/// Perfect form reached from `a` by repeatedly moving away from the
/// current minimal vectors; normalized to minimum 1.
pub fn ascend_to_perfect(ctx: &FieldCtx, a: &HermForm) -> Result<HermForm> {
    let r = a.rank_r();
    let n = herm::form_dim(ctx, r);
    let mut cur = a.clone();
    loop {
        let mv = minvec::minimal_vectors(ctx, &cur)?;
        cur = cur.scale(&mv.min_value.recip());
        let rays: Vec<Vec<Rat>> =
            mv.reps.iter().map(|v| linalg::to_rat_vec(&linalg::int_vec(&herm::phi(ctx, v)))).collect();
        let ker = linalg::nullspace(&QField, &rays, n);
        let Some(mut rho) = ker.into_iter().next() else {
            return Ok(cur);
        };
        if HermForm::from_coords(ctx, r, &rho).is_positive_semidefinite(ctx) {
            rho = rho.iter().map(|x| -x).collect();
        }
        let t = line_search(ctx, &cur, &rho)?;
        cur = cur.add_scaled_coords(ctx, &t, &rho);
    }
}

/// The perfect form on the other side of the facet with inner normal
/// `normal`, or `None` if the facet lies on the boundary of the positive
/// cone.
pub fn facet_neighbor(ctx: &FieldCtx, cone: &PerfectCone, normal: &[BigInt]) -> Result<Option<HermForm>> {
    let r = cone.rank_r();
    let rho: Vec<Rat> = linalg::to_rat_vec(normal);
    if HermForm::from_coords(ctx, r, &rho).is_positive_semidefinite(ctx) {
        return Ok(None);
    }
    let t = line_search(ctx, &cone.form, &rho)?;
    Ok(Some(cone.form.add_scaled_coords(ctx, &t, &rho)))
}

pub fn is_equivalent(ctx: &FieldCtx, a: &HermForm, b: &HermForm) -> Result<IsometryResult> {
    isometry::is_equivalent(ctx, a, b)
}

/// Automorphism group of the cone of a perfect form.
pub fn stabilizer(cone: &PerfectCone) -> &[GLMat] {
    &cone.stabilizer
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerfectDecomposition {
    pub ctx: FieldCtx,
    pub r: usize,
    pub classes: Vec<PerfectCone>,
}

/// Index of the class equivalent to `form`, searching `classes`.
fn find_class(ctx: &FieldCtx, classes: &[(PerfectCone, Config, Vec<isometry::Fingerprint>)], cone: &PerfectCone) -> Option<usize> {
    let cfg = cone.config(ctx);
    let key = cfg.invariant();
    classes.iter().position(|(c, ccfg, ckey)| {
        *ckey == key
            && !isometry::search(ctx, &cfg, ccfg, false, &|h| act(ctx, h, &c.form).map_or(false, |x| x == cone.form))
                .is_empty()
    })
}

/// All perfect cones up to equivalence, in breadth-first discovery order
/// starting from the ascent of the identity form.
pub fn enumerate_perfect(ctx: &FieldCtx, r: usize) -> Result<PerfectDecomposition> {
    if r == 0 {
        return Ok(PerfectDecomposition { ctx: ctx.clone(), r, classes: Vec::new() });
    }
    let start = ascend_to_perfect(ctx, &HermForm::identity(r))?;
    let first = PerfectCone::from_form(ctx, &start)?;
    let cfg = first.config(ctx);
    let key = cfg.invariant();
    let mut classes = vec![(first, cfg, key)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        let cone = &classes[ci].0;
        let mut reps: BTreeSet<Bits> = BTreeSet::new();
        let mut orbit_facets = Vec::new();
        for (fi, f) in cone.facets.iter().enumerate() {
            if cone.canonical_face(&f.rays) == f.rays && reps.insert(f.rays.clone()) {
                orbit_facets.push(fi);
            }
        }
        let neighbors: Vec<Result<Option<PerfectCone>>> = orbit_facets
            .par_iter()
            .map(|&fi| {
                facet_neighbor(ctx, cone, &cone.facets[fi].normal)?
                    .map(|f| PerfectCone::from_form(ctx, &f))
                    .transpose()
            })
            .collect();
        let mut facet_orbits = Vec::new();
        for (fi, nb) in orbit_facets.into_iter().zip(neighbors) {
            let Some(nb) = nb? else {
                facet_orbits.push((fi, None));
                continue;
            };
            let idx = match find_class(ctx, &classes, &nb) {
                Some(i) => i,
                None => {
                    if classes.len() >= MAX_CLASSES {
                        return Err(Error::TooLarge("too many perfect classes".into()));
                    }
                    let cfg = nb.config(ctx);
                    let key = cfg.invariant();
                    classes.push((nb, cfg, key));
                    queue.push_back(classes.len() - 1);
                    classes.len() - 1
                }
            };
            facet_orbits.push((fi, Some(idx)));
        }
        let adj: BTreeSet<usize> = facet_orbits.iter().filter_map(|x| x.1).collect();
        classes[ci].0.facet_orbits = facet_orbits;
        classes[ci].0.adjacency = adj.into_iter().collect();
    }
    Ok(PerfectDecomposition { ctx: ctx.clone(), r, classes: classes.into_iter().map(|c| c.0).collect() })
}

impl PerfectDecomposition {
    /// Every facet of every class has its neighbor among the classes.
    pub fn closure_certificate(&self) -> Result<bool> {
        let ctx = &self.ctx;
        for c in &self.classes {
            for f in &c.facets {
                let Some(nb) = facet_neighbor(ctx, c, &f.normal)? else {
                    continue;
                };
                let found = self.classes.iter().any(|d| is_equivalent(ctx, &d.form, &nb).map_or(false, |x| x.found));
                if !found {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ctx = &self.ctx;
        let classes: Vec<serde_json::Value> = self
            .classes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "form": c.form,
                    "rays": c.min_vectors.iter().map(|v| herm::to_elems(ctx, v)).collect::<Vec<_>>(),
                    "stabilizer_order": c.stabilizer.len(),
                    "adjacency": c.adjacency,
                })
            })
            .collect();
        serde_json::json!({ "d": ctx.d(), "r": self.r, "classes": classes })
    }
}
