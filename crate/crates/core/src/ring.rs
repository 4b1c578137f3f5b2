//! Exact arithmetic in the ring of integers `R` of an imaginary quadratic
//! field `K = Q(sqrt(-d))` with class number one, and in `K` itself.
//!
//! Elements are stored in the basis `{1, w}` where `w = sqrt(-d)` when
//! `-d = 2, 3 mod 4` and `w = (1 + sqrt(-d)) / 2` when `-d = 1 mod 4`.
//! The value `d = 0` selects the symmetric mode in which `R = Z`, `K = Q`
//! and conjugation is the identity; elements then always have `b = 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::FieldOps;

pub type Rat = BigRational;

/// Discriminant parameters admitted by the library (besides `0`).
pub const ADMISSIBLE_D: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficient types usable inside [`Quad`].
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Eq
    + std::hash::Hash
    + Ord
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

impl Coeff for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Coeff for i64 {
    fn from_i64(n: i64) -> Self {
        n
    }
}

impl Coeff for Rat {
    fn from_i64(n: i64) -> Self {
        rat(n)
    }
}

/// `a + b*w` with coefficients in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Quad<T> {
    pub a: T,
    pub b: T,
}

/// Element of the ring of integers `R`.
pub type IQElem = Quad<BigInt>;
/// Element of the field `K`.
pub type KElem = Quad<Rat>;

impl<T: Coeff> Quad<T> {
    pub fn new(a: T, b: T) -> Self {
        Quad { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        Quad { a: T::from_i64(n), b: T::zero() }
    }

    pub fn zero() -> Self {
        Quad { a: T::zero(), b: T::zero() }
    }

    pub fn one() -> Self {
        Quad { a: T::one(), b: T::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn neg(&self) -> Self {
        Quad { a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Quad { a: self.a.clone() + o.a.clone(), b: self.b.clone() + o.b.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quad { a: self.a.clone() - o.a.clone(), b: self.b.clone() - o.b.clone() }
    }

    pub fn scale(&self, c: &T) -> Self {
        Quad { a: self.a.clone() * c.clone(), b: self.b.clone() * c.clone() }
    }
}

impl IQElem {
    pub fn int(a: i64, b: i64) -> Self {
        Quad { a: BigInt::from(a), b: BigInt::from(b) }
    }

    pub fn to_k(&self) -> KElem {
        Quad { a: Rat::from_integer(self.a.clone()), b: Rat::from_integer(self.b.clone()) }
    }
}

impl KElem {
    pub fn from_rat(a: Rat) -> Self {
        Quad { a, b: Rat::zero() }
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn to_r(&self) -> Option<IQElem> {
        self.is_integral().then(|| Quad { a: self.a.to_integer(), b: self.b.to_integer() })
    }
}

impl fmt::Display for IQElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}{}w", self.a, self.b)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

impl Serialize for IQElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [json_int(&self.a), json_int(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for IQElem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[serde_json::Value; 2]>::deserialize(de)?;
        let a = int_from_json(&a).map_err(serde::de::Error::custom)?;
        let b = int_from_json(&b).map_err(serde::de::Error::custom)?;
        Ok(Quad { a, b })
    }
}

/// Integers travel through JSON as numbers when they fit in 64 bits and as
/// decimal strings otherwise.
pub fn json_int(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("integer out of range: {n}")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad integer: {s}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

pub fn rat_to_json(q: &Rat) -> [serde_json::Value; 2] {
    [json_int(q.numer()), json_int(q.denom())]
}

pub fn rat_from_json(num: &serde_json::Value, den: &serde_json::Value) -> std::result::Result<Rat, String> {
    let d = int_from_json(den)?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rat::new(int_from_json(num)?, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `d = 0`: `R = Z`.
    Rational,
    /// `w = sqrt(-d)`.
    Sqrt,
    /// `w = (1 + sqrt(-d)) / 2`.
    HalfIntegral,
}

/// The ring `R` together with its field of fractions. Acts as the ring
/// object for all arithmetic on [`Quad`] values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    d: u32,
    kind: OmegaKind,
    /// `w + conj(w)`
    trace_w: i64,
    /// `w * conj(w)`
    norm_w: i64,
    units: Vec<IQElem>,
}

impl Serialize for FieldCtx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            d: u32,
        }
        Repr { d: self.d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldCtx {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            d: u32,
        }
        let r = Repr::deserialize(de)?;
        FieldCtx::new(r.d).map_err(serde::de::Error::custom)
    }
}

impl FieldCtx {
    pub fn new(d: u32) -> Result<Self> {
        let (kind, trace_w, norm_w) = match d {
            0 => (OmegaKind::Rational, 0, 0),
            1 | 2 => (OmegaKind::Sqrt, 0, d as i64),
            _ if ADMISSIBLE_D.contains(&d) => (OmegaKind::HalfIntegral, 1, (1 + d as i64) / 4),
            _ => return Err(Error::InadmissibleD(d)),
        };
        let mut ctx = FieldCtx { d, kind, trace_w, norm_w, units: Vec::new() };
        ctx.units = ctx.find_units();
        Ok(ctx)
    }

    pub fn symmetric() -> Self {
        FieldCtx::new(0).expect("d = 0 is always admissible")
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn is_symmetric(&self) -> bool {
        self.d == 0
    }

    /// Rank of `R` as a `Z`-module.
    pub fn degree(&self) -> usize {
        if self.is_symmetric() {
            1
        } else {
            2
        }
    }

    pub fn trace_w(&self) -> i64 {
        self.trace_w
    }

    pub fn norm_w(&self) -> i64 {
        self.norm_w
    }

    fn find_units(&self) -> Vec<IQElem> {
        let mut units = Vec::new();
        let bmax = if self.is_symmetric() { 0 } else { 1 };
        for a in -1..=1i64 {
            for b in -bmax..=bmax {
                let x = IQElem::int(a, b);
                if self.norm(&x).is_one() {
                    units.push(x);
                }
            }
        }
        units.sort_by(|x, y| y.cmp(x));
        units
    }

    pub fn units(&self) -> &[IQElem] {
        &self.units
    }

    pub fn w(&self) -> IQElem {
        IQElem::int(0, 1)
    }

    pub fn mul<T: Coeff>(&self, x: &Quad<T>, y: &Quad<T>) -> Quad<T> {
        // w^2 = tr*w - n
        let bb = x.b.clone() * y.b.clone();
        let a = x.a.clone() * y.a.clone() - bb.clone() * T::from_i64(self.norm_w);
        let b = x.a.clone() * y.b.clone() + x.b.clone() * y.a.clone() + bb * T::from_i64(self.trace_w);
        Quad { a, b }
    }

    pub fn conj<T: Coeff>(&self, x: &Quad<T>) -> Quad<T> {
        if self.is_symmetric() {
            return x.clone();
        }
        // conj(w) = tr - w
        Quad { a: x.a.clone() + x.b.clone() * T::from_i64(self.trace_w), b: -x.b.clone() }
    }

    /// The field norm `x * conj(x)`.
    pub fn norm<T: Coeff>(&self, x: &Quad<T>) -> T {
        x.a.clone() * x.a.clone()
            + x.a.clone() * x.b.clone() * T::from_i64(self.trace_w)
            + x.b.clone() * x.b.clone() * T::from_i64(self.norm_w)
    }

    /// Twice the real part under the fixed complex embedding.
    pub fn trace<T: Coeff>(&self, x: &Quad<T>) -> T {
        x.a.clone() * T::from_i64(2) + x.b.clone() * T::from_i64(self.trace_w)
    }

    pub fn real_part(&self, x: &KElem) -> Rat {
        self.trace(x) / rat(2)
    }

    pub fn is_unit(&self, x: &IQElem) -> bool {
        self.norm(x).is_one()
    }

    pub fn inv(&self, x: &KElem) -> KElem {
        let n = self.norm(x);
        assert!(!n.is_zero(), "division by zero in K");
        self.conj(x).scale(&(Rat::one() / n))
    }

    pub fn div(&self, x: &KElem, y: &KElem) -> KElem {
        self.mul(x, &self.inv(y))
    }

    /// Exact quotient in `R`, if it exists.
    pub fn div_exact(&self, x: &IQElem, y: &IQElem) -> Option<IQElem> {
        if y.is_zero() {
            return None;
        }
        self.div(&x.to_k(), &y.to_k()).to_r()
    }

    pub fn divides(&self, y: &IQElem, x: &IQElem) -> bool {
        if y.is_zero() {
            return x.is_zero();
        }
        self.div_exact(x, y).is_some()
    }

    pub fn pow(&self, x: &IQElem, e: u32) -> IQElem {
        let mut acc = IQElem::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Canonical representative of the unit orbit `{u x}`: the multiple
    /// whose coordinate sequence is lexicographically greatest.
    pub fn unit_normalize(&self, x: &IQElem) -> (IQElem, IQElem) {
        let mut best = (x.clone(), IQElem::one());
        for u in &self.units {
            let y = self.mul(u, x);
            if y > best.0 {
                best = (y, u.clone());
            }
        }
        best
    }

    /// A generator `g` of the ideal `(x, y)` with Bezout coefficients
    /// `s x + t y = g`. `R` is a principal ideal domain for every admissible
    /// `d`; norm-Euclidean division is used when it makes progress and the
    /// ideal lattice is reduced directly otherwise.
    pub fn gcdex(&self, x: &IQElem, y: &IQElem) -> (IQElem, IQElem, IQElem) {
        // invariant: r0 = s0 x + t0 y, r1 = s1 x + t1 y
        let (mut r0, mut s0, mut t0) = (x.clone(), IQElem::one(), IQElem::zero());
        let (mut r1, mut s1, mut t1) = (y.clone(), IQElem::zero(), IQElem::one());
        while !r1.is_zero() {
            let Some(q) = self.euclid_quotient(&r0, &r1) else {
                let (g, a, b) = self.ideal_generator(&r0, &r1);
                // g = a r0 + b r1
                let s = self.mul(&a, &s0).add(&self.mul(&b, &s1));
                let t = self.mul(&a, &t0).add(&self.mul(&b, &t1));
                return (g, s, t);
            };
            let r2 = r0.sub(&self.mul(&q, &r1));
            let s2 = s0.sub(&self.mul(&q, &s1));
            let t2 = t0.sub(&self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    /// A quotient `q` with `N(x - q y) < N(y)`, searched among lattice
    /// points next to `x / y`.
    fn euclid_quotient(&self, x: &IQElem, y: &IQElem) -> Option<IQElem> {
        let ny = self.norm(y);
        let exact = self.div(&x.to_k(), &y.to_k());
        let fa = exact.a.floor().to_integer();
        let fb = exact.b.floor().to_integer();
        let mut best: Option<(BigInt, IQElem)> = None;
        for da in 0..=1 {
            for db in 0..=1 {
                let q = Quad { a: fa.clone() + da, b: fb.clone() + db };
                let rem = x.sub(&self.mul(&q, y));
                let nr = self.norm(&rem);
                if best.as_ref().map_or(true, |(n, _)| nr < *n) {
                    best = Some((nr, q));
                }
            }
        }
        best.filter(|(n, _)| *n < ny).map(|(_, q)| q)
    }

    /// Shortest nonzero element of the ideal lattice `xR + yR` for the norm
    /// form, with coefficients expressing it in `x, y`.
    fn ideal_generator(&self, x: &IQElem, y: &IQElem) -> (IQElem, IQElem, IQElem) {
        let w = self.w();
        let mut gens: Vec<(IQElem, IQElem, IQElem)> = vec![
            (x.clone(), IQElem::one(), IQElem::zero()),
            (self.mul(x, &w), w.clone(), IQElem::zero()),
            (y.clone(), IQElem::zero(), IQElem::one()),
            (self.mul(y, &w), IQElem::zero(), w.clone()),
        ];
        let comb = |k: &BigInt, p: &(IQElem, IQElem, IQElem), q: &(IQElem, IQElem, IQElem)| {
            let kk = IQElem { a: k.clone(), b: BigInt::zero() };
            (
                p.0.sub(&self.mul(&kk, &q.0)),
                p.1.sub(&self.mul(&kk, &q.1)),
                p.2.sub(&self.mul(&kk, &q.2)),
            )
        };
        // integer Euclid on the first coordinate, then on the second
        let mut basis = Vec::new();
        for coord in 0..2 {
            let get = |e: &IQElem| if coord == 0 { e.a.clone() } else { e.b.clone() };
            loop {
                let mut nz: Vec<usize> = (0..gens.len()).filter(|&i| !get(&gens[i].0).is_zero()).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        basis.push(gens.remove(i));
                    }
                    break;
                }
                nz.sort_by_key(|&i| get(&gens[i].0).abs());
                let p = nz[0];
                for &i in &nz[1..] {
                    let k = get(&gens[i].0).div_floor(&get(&gens[p].0));
                    gens[i] = comb(&k, &gens[i], &gens[p]);
                }
            }
        }
        // Lagrange reduction of the rank-2 basis
        let (mut u, mut v) = (basis[0].clone(), basis[1].clone());
        loop {
            if self.norm(&v.0) < self.norm(&u.0) {
                std::mem::swap(&mut u, &mut v);
            }
            let nu = self.norm(&u.0);
            // integer nearest to <u, v> / <u, u> for the bilinear form of N
            let uv = self.trace(&self.mul(&u.0, &self.conj(&v.0)));
            let k = Rat::new(uv, nu.clone() * 2).round().to_integer();
            if k.is_zero() {
                break;
            }
            v = comb(&k, &v, &u);
            if self.norm(&v.0) >= nu {
                break;
            }
        }
        u
    }

    pub fn parse_check(d: i64) -> Result<Self> {
        u32::try_from(d).map_err(|_| Error::InadmissibleD(u32::MAX)).and_then(FieldCtx::new)
    }
}

impl FieldOps for FieldCtx {
    type El = KElem;

    fn zero(&self) -> KElem {
        KElem::zero()
    }
    fn one(&self) -> KElem {
        KElem::one()
    }
    fn is_zero(&self, x: &KElem) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &KElem, y: &KElem) -> KElem {
        x.add(y)
    }
    fn sub(&self, x: &KElem, y: &KElem) -> KElem {
        x.sub(y)
    }
    fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        FieldCtx::mul(self, x, y)
    }
    fn inv(&self, x: &KElem) -> KElem {
        FieldCtx::inv(self, x)
    }
    fn neg(&self, x: &KElem) -> KElem {
        x.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(d: u32) -> FieldCtx {
        FieldCtx::new(d).unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let g = ctx(1);
        assert_eq!(g.conj(&IQElem::int(2, 3)), IQElem::int(2, -3));
        let e = ctx(3);
        assert_eq!(e.conj(&IQElem::int(0, 1)), IQElem::int(1, -1));
        let z = ctx(0);
        assert_eq!(z.conj(&IQElem::int(5, 0)), IQElem::int(5, 0));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(ctx(1).norm(&IQElem::int(1, 1)), BigInt::from(2));
        assert_eq!(ctx(3).norm(&IQElem::int(0, 1)), BigInt::from(1));
        assert_eq!(ctx(7).norm(&IQElem::int(0, 1)), BigInt::from(2));
    }

    #[test]
    fn unit_groups() {
        let g = ctx(1);
        assert_eq!(g.units().len(), 4);
        for u in [IQElem::int(1, 0), IQElem::int(-1, 0), IQElem::int(0, 1), IQElem::int(0, -1)] {
            assert!(g.units().contains(&u));
        }
        assert_eq!(ctx(3).units().len(), 6);
        assert_eq!(ctx(11).units(), &[IQElem::int(1, 0), IQElem::int(-1, 0)]);
        assert_eq!(ctx(0).units().len(), 2);
        for d in ADMISSIBLE_D {
            let c = ctx(d);
            assert!(matches!(c.units().len(), 2 | 4 | 6));
            assert!(c.units().iter().all(|u| c.is_unit(u)));
        }
    }

    #[test]
    fn inadmissible_d_rejected() {
        assert!(matches!(FieldCtx::new(5), Err(Error::InadmissibleD(5))));
        assert!(FieldCtx::new(99).is_err());
    }

    #[test]
    fn gcd_in_non_euclidean_ring() {
        // R = Z[(1+sqrt(-19))/2] is a PID that is not norm-Euclidean.
        let c = ctx(19);
        let x = IQElem::int(4, 0);
        let y = IQElem::int(1, 1);
        let (g, s, t) = c.gcdex(&x, &y);
        assert_eq!(c.mul(&s, &x).add(&c.mul(&t, &y)), g);
        assert!(c.divides(&g, &x) && c.divides(&g, &y));
    }

    #[test]
    fn json_round_trip() {
        let x = IQElem { a: BigInt::from(3), b: BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap() };
        let s = serde_json::to_string(&x).unwrap();
        let y: IQElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&IQElem::int(2, -1)).unwrap(), "[2,-1]");
        let c: FieldCtx = serde_json::from_str(r#"{"d":7}"#).unwrap();
        assert_eq!(c, ctx(7));
    }

    fn elem() -> impl Strategy<Value = (i64, i64)> {
        (-50i64..50, -50i64..50)
    }

    proptest! {
        #[test]
        fn ring_axioms(di in 0usize..10, x in elem(), y in elem(), z in elem()) {
            let d = if di == 9 { 0 } else { ADMISSIBLE_D[di] };
            let c = ctx(d);
            let bz = |p: (i64, i64)| if d == 0 { IQElem::int(p.0, 0) } else { IQElem::int(p.0, p.1) };
            let (x, y, z) = (bz(x), bz(y), bz(z));
            prop_assert_eq!(c.mul(&c.mul(&x, &y), &z), c.mul(&x, &c.mul(&y, &z)));
            prop_assert_eq!(c.mul(&x, &y.add(&z)), c.mul(&x, &y).add(&c.mul(&x, &z)));
            prop_assert_eq!(c.mul(&x, &y), c.mul(&y, &x));
            prop_assert_eq!(c.conj(&c.conj(&x)), x.clone());
            prop_assert_eq!(c.conj(&c.mul(&x, &y)), c.mul(&c.conj(&x), &c.conj(&y)));
            prop_assert_eq!(c.norm(&c.mul(&x, &y)), c.norm(&x) * c.norm(&y));
            let n = c.norm(&x);
            prop_assert!(n >= BigInt::zero());
            prop_assert_eq!(n.is_zero(), x.is_zero());
            prop_assert_eq!(c.mul(&x, &c.conj(&x)), IQElem { a: c.norm(&x), b: BigInt::zero() });
        }

        #[test]
        fn bezout_identity(di in 0usize..9, x in elem(), y in elem()) {
            let c = ctx(ADMISSIBLE_D[di]);
            let (x, y) = (IQElem::int(x.0, x.1), IQElem::int(y.0, y.1));
            let (g, s, t) = c.gcdex(&x, &y);
            prop_assert_eq!(c.mul(&s, &x).add(&c.mul(&t, &y)), g.clone());
            prop_assert!(c.divides(&g, &x));
            prop_assert!(c.divides(&g, &y));
        }
    }
}
