//! Exact arithmetic with rational-coefficient sums of roots of unity.
//!
//! A [`CycloNumber`] is a finite linear combination of `N`-th roots of unity
//! with coefficients in an exact scalar type `R`. Values are kept in a
//! canonical form: exponents are reduced to the power basis of the `N`-th
//! cyclotomic field (one coordinate per prime power dividing `N`, reduced
//! modulo the prime-power cyclotomic relation), and the order is then shrunk
//! to the smallest divisor of `N` that still carries the value. Equality is
//! therefore structural and exact; floating point only enters through
//! [`CycloNumber::eval_complex`].
//!
//! Square roots of rational primes are available inside the ring through the
//! classical Gauss-sum identities, see [`CycloNumber::sqrt_prime`]; this is
//! what keeps `q^{-a/2}` prefactors of normalized character sums exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::arith::{factorize, gcd, lcm, legendre, mod_inv, phi_prime_power};
use crate::{Error, Result};

/// Scalar coefficients a [`CycloNumber`] can carry. Blanket-implemented for
/// every type with exact ring operations plus primitive conversions; the
/// crate instantiates it with `num_rational::BigRational` (see [`crate::Rat`]).
pub trait Coefficient:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + std::ops::Div<Output = Self>
    + FromPrimitive
    + ToPrimitive
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + std::ops::Div<Output = T>
        + FromPrimitive
        + ToPrimitive
{
}

/// The group of fourth roots of unity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mu4 {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Mu4 {
    pub const ALL: [Mu4; 4] = [Mu4::One, Mu4::I, Mu4::MinusOne, Mu4::MinusI];

    /// `i^e`.
    pub fn from_exponent(e: i64) -> Mu4 {
        match e.rem_euclid(4) {
            0 => Mu4::One,
            1 => Mu4::I,
            2 => Mu4::MinusOne,
            _ => Mu4::MinusI,
        }
    }

    /// Exponent `e` with `self = i^e`, in `0..4`.
    pub fn exponent(self) -> i64 {
        match self {
            Mu4::One => 0,
            Mu4::I => 1,
            Mu4::MinusOne => 2,
            Mu4::MinusI => 3,
        }
    }

    pub fn mul(self, other: Mu4) -> Mu4 {
        Mu4::from_exponent(self.exponent() + other.exponent())
    }

    pub fn pow(self, k: i64) -> Mu4 {
        Mu4::from_exponent(self.exponent().wrapping_mul(k.rem_euclid(4)))
    }

    pub fn inverse(self) -> Mu4 {
        Mu4::from_exponent(-self.exponent())
    }

    /// `+1`/`-1` for a sign, `None` for `±i`.
    pub fn as_sign(self) -> Option<i8> {
        match self {
            Mu4::One => Some(1),
            Mu4::MinusOne => Some(-1),
            _ => None,
        }
    }

    pub fn from_sign(s: i8) -> Mu4 {
        if s >= 0 {
            Mu4::One
        } else {
            Mu4::MinusOne
        }
    }

    pub fn to_cyclo<R: Coefficient>(self) -> CycloNumber<R> {
        CycloNumber::root_of_unity(4, self.exponent()).expect("order 4 is valid")
    }

    pub fn value(self) -> (f64, f64) {
        match self {
            Mu4::One => (1.0, 0.0),
            Mu4::I => (0.0, 1.0),
            Mu4::MinusOne => (-1.0, 0.0),
            Mu4::MinusI => (0.0, -1.0),
        }
    }
}

impl fmt::Display for Mu4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mu4::One => "1",
            Mu4::I => "i",
            Mu4::MinusOne => "-1",
            Mu4::MinusI => "-i",
        };
        f.write_str(s)
    }
}

impl FromStr for Mu4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mu4> {
        match s.trim() {
            "1" | "+1" => Ok(Mu4::One),
            "i" | "+i" => Ok(Mu4::I),
            "-1" => Ok(Mu4::MinusOne),
            "-i" => Ok(Mu4::MinusI),
            other => Err(Error::BadInput(format!("not a fourth root of unity: {other:?}"))),
        }
    }
}

impl serde::Serialize for Mu4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Mu4 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Mu4, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact sum of roots of unity of a common order.
///
/// Invariants (established by every constructor and operation):
/// * stored exponents lie in `[0, order)` and form a canonical-basis
///   representation of the value,
/// * no stored coefficient is zero,
/// * the order is minimal among divisors of any construction order.
#[derive(Clone, Debug, PartialEq)]
pub struct CycloNumber<R> {
    order: u64,
    coeffs: BTreeMap<u64, R>,
}

impl<R: Coefficient> CycloNumber<R> {
    pub fn zero() -> Self {
        CycloNumber { order: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The imaginary unit `ζ_4`.
    pub fn i() -> Self {
        Self::root_of_unity(4, 1).expect("order 4 is valid")
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_coefficient(R::from_i64(n).expect("scalar admits i64 conversion"))
    }

    pub fn from_coefficient(c: R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, c);
        CycloNumber { order: 1, coeffs }
    }

    /// `ζ_N^k`, the single term with coefficient one.
    pub fn root_of_unity(order: u64, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let k = k.rem_euclid(order as i64) as u64;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, R::one());
        Ok(Self::canonicalized(order, coeffs))
    }

    /// Raw constructor from `(exponent, coefficient)` terms at a given order;
    /// exponents are taken modulo the order and the result is canonicalized.
    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (i64, R)>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut coeffs: BTreeMap<u64, R> = BTreeMap::new();
        for (k, c) in terms {
            let k = k.rem_euclid(order as i64) as u64;
            insert_add(&mut coeffs, k, c);
        }
        Ok(Self::canonicalized(order, coeffs))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &R)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some(c)` when the value is the rational constant `c`.
    pub fn as_rational(&self) -> Option<R> {
        match self.coeffs.len() {
            0 => Some(R::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, v)| (k, v.clone() * c.clone()))
            .collect();
        Self::canonicalized(self.order, coeffs)
    }

    /// Complex conjugation, `ζ_N^k ↦ ζ_N^{N-k}`; a ring automorphism.
    pub fn conjugate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, v)| ((self.order - k) % self.order, v.clone()))
            .collect();
        Self::canonicalized(self.order, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_mu4(&self, m: Mu4) -> Self {
        self * &m.to_cyclo()
    }

    /// Numeric evaluation `Σ c_k · e^{2πik/N}` in double precision. Each term
    /// contributes at most `~1e-12` of rounding error at the magnitudes used
    /// in this crate.
    pub fn eval_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, c) in &self.coeffs {
            let c = c.to_f64().expect("scalar admits f64 conversion");
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.order as f64);
            re += c * theta.cos();
            im += c * theta.sin();
        }
        (re, im)
    }

    /// Snap a unit-modulus value to the fourth root of unity it equals.
    ///
    /// Single stored terms of order dividing 4 are matched exactly; anything
    /// else falls back to numeric matching within `1e-6`. A failure signals a
    /// formula bug upstream, not a tolerance problem.
    pub fn snap_fourth_root(&self) -> Result<Mu4> {
        if let Some(m) = self.as_mu4_exact() {
            return Ok(m);
        }
        let (re, im) = self.eval_complex();
        let modulus = (re * re + im * im).sqrt();
        if (modulus - 1.0).abs() > 1e-6 {
            return Err(Error::NotAFourthRoot);
        }
        for m in Mu4::ALL {
            let (mr, mi) = m.value();
            if ((re - mr).powi(2) + (im - mi).powi(2)).sqrt() <= 1e-6 {
                return Ok(m);
            }
        }
        Err(Error::NotAFourthRoot)
    }

    fn as_mu4_exact(&self) -> Option<Mu4> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (&k, c) = self.coeffs.iter().next()?;
        let sign = if *c == R::one() {
            1
        } else if *c == -R::one() {
            -1
        } else {
            return None;
        };
        // Canonical forms: ±1 live at order 1, ±i at order 4 exponent 1.
        match (self.order, k, sign) {
            (1, 0, 1) => Some(Mu4::One),
            (1, 0, -1) => Some(Mu4::MinusOne),
            (4, 1, 1) => Some(Mu4::I),
            (4, 1, -1) => Some(Mu4::MinusI),
            _ => None,
        }
    }

    /// Exact `√p` for a rational prime, realized inside the ring:
    /// `√2 = ζ_8 - ζ_8^3`, and for odd `p` the quadratic Gauss sum
    /// `g = Σ_x (x/p) ζ_p^x`, which equals `√p` when `p ≡ 1 (mod 4)` and
    /// `i·√p` when `p ≡ 3 (mod 4)`.
    pub fn sqrt_prime(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            let a = Self::root_of_unity(8, 1)?;
            let b = Self::root_of_unity(8, 3)?;
            return Ok(&a - &b);
        }
        let g = Self::from_terms(
            p,
            (1..p).map(|x| (x as i64, R::from_i8(legendre(x as i64, p)).unwrap())),
        )?;
        if p % 4 == 1 {
            Ok(g)
        } else {
            // g = i·√p, so √p = -i·g.
            Ok(g.mul_mu4(Mu4::MinusI))
        }
    }

    /// Rebuild the value lifted to a multiple of its order; the result is
    /// canonicalized again, so this is the identity on values.
    pub fn lifted(&self, multiple: u64) -> Result<Self> {
        if multiple == 0 {
            return Err(Error::ZeroOrder);
        }
        let target = self.order * multiple;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k * multiple, c.clone()))
            .collect();
        Ok(Self::canonicalized(target, coeffs))
    }

    fn canonicalized(order: u64, coeffs: BTreeMap<u64, R>) -> Self {
        let (order, coeffs) = canonical_form(order, coeffs);
        CycloNumber { order, coeffs }
    }

    fn lift_raw(&self, target: u64) -> BTreeMap<u64, R> {
        let m = target / self.order;
        self.coeffs
            .iter()
            .map(|(&k, c)| (k * m, c.clone()))
            .collect()
    }
}

fn insert_add<R: Coefficient>(map: &mut BTreeMap<u64, R>, k: u64, c: R) {
    if c.is_zero() {
        return;
    }
    match map.remove(&k) {
        None => {
            map.insert(k, c);
        }
        Some(prev) => {
            let sum = prev + c;
            if !sum.is_zero() {
                map.insert(k, sum);
            }
        }
    }
}

/// Reduce to the canonical power basis of `Q(ζ_order)` and shrink the order.
fn canonical_form<R: Coefficient>(
    mut order: u64,
    mut coeffs: BTreeMap<u64, R>,
) -> (u64, BTreeMap<u64, R>) {
    order = order.max(1);
    loop {
        coeffs = reduce_to_basis(order, coeffs);
        if coeffs.is_empty() {
            return (1, coeffs);
        }
        let mut g = order;
        for &k in coeffs.keys() {
            g = gcd(g, k);
        }
        if g <= 1 {
            return (order, coeffs);
        }
        order /= g;
        coeffs = coeffs.into_iter().map(|(k, c)| (k / g, c)).collect();
        if order == 1 {
            return (order, coeffs);
        }
    }
}

/// Rewrite exponents on the tensor basis of the prime-power subfields: for
/// each `p^a || N` the coordinate is reduced below `φ(p^a)` with the relation
/// `ζ^{φ(p^a)} = -Σ_{t=0}^{p-2} ζ^{t·p^{a-1}}`.
fn reduce_to_basis<R: Coefficient>(order: u64, coeffs: BTreeMap<u64, R>) -> BTreeMap<u64, R> {
    if order == 1 || coeffs.is_empty() {
        let mut out = BTreeMap::new();
        for (k, c) in coeffs {
            insert_add(&mut out, k % order, c);
        }
        return out;
    }
    let facs = factorize(order);
    struct Fac {
        q: u64,
        cofactor: u64,
        inv: u64,
        phi: u64,
        step: u64,
        p: u64,
    }
    let data: Vec<Fac> = facs
        .iter()
        .map(|&(p, a)| {
            let q = p.pow(a);
            let cofactor = order / q;
            Fac {
                q,
                cofactor,
                inv: mod_inv(cofactor % q, q).expect("cofactor is coprime to q"),
                phi: phi_prime_power(p, a),
                step: p.pow(a - 1),
                p,
            }
        })
        .collect();

    let mut multi: BTreeMap<Vec<u64>, R> = BTreeMap::new();
    for (k, c) in coeffs {
        let key: Vec<u64> = data.iter().map(|f| (k % f.q) * f.inv % f.q).collect();
        merge(&mut multi, key, c);
    }
    for (i, f) in data.iter().enumerate() {
        let mut next: BTreeMap<Vec<u64>, R> = BTreeMap::new();
        for (key, c) in multi {
            if key[i] < f.phi {
                merge(&mut next, key, c);
            } else {
                let base = key[i] - f.phi;
                for t in 0..f.p - 1 {
                    let mut nk = key.clone();
                    nk[i] = base + t * f.step;
                    merge(&mut next, nk, -c.clone());
                }
            }
        }
        multi = next;
    }
    let mut out = BTreeMap::new();
    for (key, c) in multi {
        if c.is_zero() {
            continue;
        }
        let k = key
            .iter()
            .zip(&data)
            .fold(0u64, |acc, (&j, f)| (acc + j * f.cofactor) % order);
        out.insert(k, c);
    }
    out
}

fn merge<R: Coefficient>(map: &mut BTreeMap<Vec<u64>, R>, key: Vec<u64>, c: R) {
    match map.remove(&key) {
        None => {
            if !c.is_zero() {
                map.insert(key, c);
            }
        }
        Some(prev) => {
            let sum = prev + c;
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
    }
}

impl<R: Coefficient> Add for &CycloNumber<R> {
    type Output = CycloNumber<R>;

    fn add(self, rhs: Self) -> CycloNumber<R> {
        let n = lcm(self.order, rhs.order);
        let mut coeffs = self.lift_raw(n);
        for (k, c) in rhs.lift_raw(n) {
            insert_add(&mut coeffs, k, c);
        }
        CycloNumber::canonicalized(n, coeffs)
    }
}

impl<R: Coefficient> Sub for &CycloNumber<R> {
    type Output = CycloNumber<R>;

    fn sub(self, rhs: Self) -> CycloNumber<R> {
        self + &(-rhs)
    }
}

impl<R: Coefficient> Neg for &CycloNumber<R> {
    type Output = CycloNumber<R>;

    fn neg(self) -> CycloNumber<R> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, -c.clone()))
            .collect();
        CycloNumber { order: self.order, coeffs }
    }
}

impl<R: Coefficient> Mul for &CycloNumber<R> {
    type Output = CycloNumber<R>;

    fn mul(self, rhs: Self) -> CycloNumber<R> {
        let n = lcm(self.order, rhs.order);
        let a = self.lift_raw(n);
        let b = rhs.lift_raw(n);
        let mut coeffs: BTreeMap<u64, R> = BTreeMap::new();
        for (&ka, ca) in &a {
            for (&kb, cb) in &b {
                insert_add(&mut coeffs, (ka + kb) % n, ca.clone() * cb.clone());
            }
        }
        CycloNumber::canonicalized(n, coeffs)
    }
}

impl<R: Coefficient> fmt::Display for CycloNumber<R>
where
    R: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        if let Some(m) = self.as_mu4_exact() {
            return write!(f, "{m}");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else if *c == R::one() {
                write!(f, "z{}^{}", self.order, k)?;
            } else if *c == -R::one() {
                write!(f, "-z{}^{}", self.order, k)?;
            } else {
                write!(f, "({c})*z{}^{}", self.order, k)?;
            }
        }
        Ok(())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CycloWire {
    order: u64,
    terms: Vec<(u64, String)>,
}

impl serde::Serialize for CycloNumber<crate::Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, format!("{}/{}", c.numer(), c.denom())))
            .collect();
        CycloWire { order: self.order, terms }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CycloNumber<crate::Rat> {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<CycloNumber<crate::Rat>, D::Error> {
        use serde::de::Error as _;
        let wire = CycloWire::deserialize(d)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for (k, c) in wire.terms {
            let c: crate::Rat = c
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coefficient {c:?}: {e}")))?;
            if k >= wire.order.max(1) {
                return Err(D::Error::custom(format!(
                    "exponent {k} out of range for order {}",
                    wire.order
                )));
            }
            terms.push((k as i64, c));
        }
        CycloNumber::from_terms(wire.order, terms).map_err(D::Error::custom)
    }
}
