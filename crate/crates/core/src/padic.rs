//! Invariant-level model of finite extensions of `Q_p`, conductor and
//! different bookkeeping, and exact character evaluation over `Q_p` itself.
//!
//! Fields are described by their ramification data only (a tower of
//! unramified / totally tame / wild steps over `Q_p`), never by elements.
//! Uniformizer conventions are the usual ones — `π_K = π_F` across an
//! unramified step and `π_F = N_{K/F}(π_K)` across a totally ramified step —
//! and are implicit in the invariant-level bookkeeping.
//!
//! Explicit character evaluation is deliberately restricted to `F = Q_p`
//! with small conductors (`a ≤ 3` for `p = 2`, `a ≤ 2` otherwise): that is
//! the range in which all closed-form lambda computations take place, and it
//! keeps every value an exact cyclotomic number.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{gcd, is_prime, legendre, mod_inv, primitive_root};
use crate::groups::FiniteGroup;
use crate::{Cyclo, Error, Rat, Result};

/// One step of a ramification tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerStep {
    /// Unramified of residue degree `f`.
    Unramified(u64),
    /// Totally ramified, tame: `gcd(e, p) = 1`.
    TotallyTame(u64),
    /// Totally ramified wild step; the different exponent is not derivable
    /// from `e` alone, so fields containing one only support dispatch-level
    /// answers.
    WildMarker(u64),
}

impl TowerStep {
    fn e(&self) -> u64 {
        match self {
            TowerStep::Unramified(_) => 1,
            TowerStep::TotallyTame(e) | TowerStep::WildMarker(e) => *e,
        }
    }

    fn f(&self) -> u64 {
        match self {
            TowerStep::Unramified(f) => *f,
            _ => 1,
        }
    }
}

/// A finite extension of `Q_p`, described by its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalField {
    p: u64,
    tower: Vec<TowerStep>,
}

impl LocalField {
    /// The base field `Q_p` itself.
    pub fn qp(p: u64) -> Result<LocalField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(LocalField { p, tower: Vec::new() })
    }

    pub fn new(p: u64, tower: Vec<TowerStep>) -> Result<LocalField> {
        let mut field = LocalField::qp(p)?;
        for step in tower {
            field = field.extended(step)?;
        }
        Ok(field)
    }

    /// Extend the tower by one step.
    pub fn extended(&self, step: TowerStep) -> Result<LocalField> {
        match &step {
            TowerStep::Unramified(f) => {
                if *f == 0 {
                    return Err(Error::BadInput("residue degree must be >= 1".into()));
                }
            }
            TowerStep::TotallyTame(e) => {
                if *e == 0 {
                    return Err(Error::BadInput("ramification index must be >= 1".into()));
                }
                if gcd(*e, self.p) != 1 {
                    return Err(Error::BadInput(format!(
                        "tame step must have gcd(e, p) = 1, got e = {e}, p = {}",
                        self.p
                    )));
                }
            }
            TowerStep::WildMarker(e) => {
                if *e < 2 || *e % self.p != 0 {
                    return Err(Error::BadInput(format!(
                        "wild step needs p | e and e > 1, got e = {e}, p = {}",
                        self.p
                    )));
                }
            }
        }
        let mut tower = self.tower.clone();
        tower.push(step);
        Ok(LocalField { p: self.p, tower })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tower(&self) -> &[TowerStep] {
        &self.tower
    }

    /// Absolute ramification index `e_{F/Q_p}`.
    pub fn e(&self) -> u64 {
        self.tower.iter().map(TowerStep::e).product()
    }

    /// Absolute residue degree `f_{F/Q_p}`.
    pub fn f(&self) -> u64 {
        self.tower.iter().map(TowerStep::f).product()
    }

    pub fn degree(&self) -> u64 {
        self.e() * self.f()
    }

    /// Residue field size `q_F = p^f`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f() as u32)
    }

    pub fn is_qp(&self) -> bool {
        self.degree() == 1
    }

    pub fn has_wild_step(&self) -> bool {
        self.tower
            .iter()
            .any(|s| matches!(s, TowerStep::WildMarker(_)))
    }

    /// Exponent of the absolute different `d_{F/Q_p}`, composed along the
    /// tower by `d_{K/F} = e_{K/L}·d_{L/F} + d_{K/L}`; tame steps contribute
    /// `e - 1`, unramified steps contribute `0`.
    pub fn different_exponent(&self) -> Result<i64> {
        different_over(&self.tower)
    }

    /// `|F^×/(F^×)²|`: `4` for odd `p`, `2^{2+n}` for `p = 2` with
    /// `n = [F:Q_2]`.
    pub fn square_class_group_order(&self) -> u64 {
        if self.p != 2 {
            4
        } else {
            1u64 << (2 + self.degree())
        }
    }
}

fn different_over(steps: &[TowerStep]) -> Result<i64> {
    let mut d: i64 = 0;
    for step in steps {
        match step {
            TowerStep::Unramified(_) => {}
            TowerStep::TotallyTame(e) => {
                d = (*e as i64) * d + (*e as i64 - 1);
            }
            TowerStep::WildMarker(_) => return Err(Error::WildDifferentUnknown),
        }
    }
    Ok(d)
}

/// `|F^×/(F^×)²|` as a free function, matching the operation-level surface.
pub fn square_class_group_order(field: &LocalField) -> u64 {
    field.square_class_group_order()
}

#[derive(serde::Serialize, serde::Deserialize)]
struct FieldWire {
    p: u64,
    tower: Vec<(String, u64)>,
}

impl serde::Serialize for LocalField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tower = self
            .tower
            .iter()
            .map(|step| match step {
                TowerStep::Unramified(f) => ("unramified".to_string(), *f),
                TowerStep::TotallyTame(e) => ("tame".to_string(), *e),
                TowerStep::WildMarker(e) => ("wild".to_string(), *e),
            })
            .collect();
        FieldWire { p: self.p, tower }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for LocalField {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<LocalField, D::Error> {
        use serde::de::Error as _;
        let wire = FieldWire::deserialize(d)?;
        let mut steps = Vec::with_capacity(wire.tower.len());
        for (kind, n) in wire.tower {
            let step = match kind.as_str() {
                "unramified" => TowerStep::Unramified(n),
                "tame" => TowerStep::TotallyTame(n),
                "wild" => TowerStep::WildMarker(n),
                other => return Err(D::Error::custom(format!("unknown tower step {other:?}"))),
            };
            steps.push(step);
        }
        LocalField::new(wire.p, steps).map_err(D::Error::custom)
    }
}

/// How an extension `K/F` is constituted, at the level the lambda formulas
/// distinguish.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtKind {
    Unramified,
    TameTotallyRamified,
    WildQuadratic,
    GaloisWithGroup(FiniteGroup),
}

/// An extension `K/F` of local fields: base field plus the tower steps from
/// `F` up to `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionDescriptor {
    base: LocalField,
    steps: Vec<TowerStep>,
    kind: ExtKind,
    /// Ramification break `t` of a quadratic extension, when tracked:
    /// `-1` unramified, `0` tame, odd `< 2e` or exactly `2e` in the wild
    /// quadratic case.
    ramification_break: Option<i64>,
}

impl ExtensionDescriptor {
    pub fn unramified(base: LocalField, f: u64) -> Result<Self> {
        let top_step = TowerStep::Unramified(f);
        base.extended(top_step.clone())?;
        Ok(ExtensionDescriptor {
            base,
            steps: vec![top_step],
            kind: ExtKind::Unramified,
            ramification_break: Some(-1),
        })
    }

    pub fn tame_totally_ramified(base: LocalField, e: u64) -> Result<Self> {
        let step = TowerStep::TotallyTame(e);
        base.extended(step.clone())?;
        let ramification_break = if e == 2 { Some(0) } else { None };
        Ok(ExtensionDescriptor {
            base,
            steps: vec![step],
            kind: ExtKind::TameTotallyRamified,
            ramification_break,
        })
    }

    /// A wildly ramified quadratic extension with ramification break `t`.
    /// Requires residue characteristic two, and `t` odd with `t < 2e_F` or
    /// exactly the exceptional value `t = 2e_F`.
    pub fn wild_quadratic(base: LocalField, t: i64) -> Result<Self> {
        if base.p() != 2 {
            return Err(Error::BadInput(
                "wild quadratic extensions require residue characteristic 2".into(),
            ));
        }
        let e2 = 2 * base.e() as i64;
        let valid = (t % 2 == 1 && t > 0 && t < e2) || t == e2;
        if !valid {
            return Err(Error::BadInput(format!(
                "ramification break must be odd below {e2} or exactly {e2}, got {t}"
            )));
        }
        Ok(ExtensionDescriptor {
            base,
            steps: vec![TowerStep::WildMarker(2)],
            kind: ExtKind::WildQuadratic,
            ramification_break: Some(t),
        })
    }

    /// A multi-step Galois extension with a known Galois group.
    pub fn galois(base: LocalField, steps: Vec<TowerStep>, group: FiniteGroup) -> Result<Self> {
        let mut top = base.clone();
        for s in &steps {
            top = top.extended(s.clone())?;
        }
        let degree: u64 = steps.iter().map(|s| s.e() * s.f()).product();
        if group.order() as u64 != degree {
            return Err(Error::BadInput(format!(
                "group order {} does not match extension degree {degree}",
                group.order()
            )));
        }
        Ok(ExtensionDescriptor {
            base,
            steps,
            kind: ExtKind::GaloisWithGroup(group),
            ramification_break: None,
        })
    }

    pub fn base(&self) -> &LocalField {
        &self.base
    }

    pub fn kind(&self) -> &ExtKind {
        &self.kind
    }

    pub fn steps(&self) -> &[TowerStep] {
        &self.steps
    }

    pub fn top(&self) -> Result<LocalField> {
        let mut top = self.base.clone();
        for s in &self.steps {
            top = top.extended(s.clone())?;
        }
        Ok(top)
    }

    /// Relative ramification index `e_{K/F}`.
    pub fn e(&self) -> u64 {
        self.steps.iter().map(TowerStep::e).product()
    }

    /// Relative residue degree `f_{K/F}`.
    pub fn f(&self) -> u64 {
        self.steps.iter().map(TowerStep::f).product()
    }

    pub fn degree(&self) -> u64 {
        self.e() * self.f()
    }

    pub fn ramification_break(&self) -> Option<i64> {
        self.ramification_break
    }

    /// Relative different exponent `d_{K/F}`.
    pub fn different_exponent(&self) -> Result<i64> {
        different_over(&self.steps)
    }

    /// Conductor of the quadratic character attached to a quadratic
    /// extension by class field theory: `t + 1` in terms of the
    /// ramification break.
    pub fn omega_conductor(&self) -> Result<i64> {
        if self.degree() != 2 {
            return Err(Error::BadInput("omega_conductor needs a quadratic extension".into()));
        }
        let t = self
            .ramification_break
            .ok_or_else(|| Error::BadInput("ramification break not recorded".into()))?;
        Ok(t + 1)
    }
}

/// `n(ψ ∘ Tr_{K/F}) = e_{K/F}·n(ψ) + d_{K/F}`.
pub fn conductor_after_trace(ext: &ExtensionDescriptor, n_psi: i64) -> Result<i64> {
    Ok(ext.e() as i64 * n_psi + ext.different_exponent()?)
}

/// p-adic valuation of a nonzero rational.
pub fn val_p(x: &Rat, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v: i64 = 0;
    let mut n = x.numer().clone();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

/// The rational `r ∈ [0,1)` with p-power denominator and `x - r ∈ Z_p`,
/// i.e. the p-adic fractional part that drives `ψ_{Q_p}(x) = e^{2πi·r}`.
pub fn p_adic_fractional_part(x: &Rat, p: u64) -> Result<Rat> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    let p_big = BigInt::from(p);
    let mut k = 0u32;
    let mut m = x.denom().clone();
    while (&m % &p_big).is_zero() {
        m /= &p_big;
        k += 1;
    }
    if k == 0 {
        return Ok(Rat::zero());
    }
    let pk = p_big.pow(k);
    // x = num / (p^k · m) with gcd(m, p) = 1; r = b / p^k where
    // b ≡ num · m^{-1} (mod p^k).
    let egcd = m.extended_gcd(&pk);
    debug_assert!(egcd.gcd.is_one());
    let m_inv = egcd.x.mod_floor(&pk);
    let b = (x.numer() * m_inv).mod_floor(&pk);
    Ok(Rat::new(b, pk))
}

/// `ψ_{Q_p}(x) = e^{2πi·r}` with `r` the p-adic fractional part of `x`,
/// exactly, as a root of unity of p-power order.
pub fn eval_canonical_add_char(p: u64, x: &Rat) -> Result<Cyclo> {
    let r = p_adic_fractional_part(x, p)?;
    let denom = big_u64(r.denom())?;
    let numer = big_u64(r.numer())?;
    Cyclo::root_of_unity(denom, numer as i64)
}

fn big_u64(n: &BigInt) -> Result<u64> {
    use num_traits::ToPrimitive;
    n.to_u64()
        .ok_or_else(|| Error::BadInput(format!("value out of range: {n}")))
}

/// Ascending representatives of `U/U^a` inside `Z`: the integers in
/// `[1, p^a)` coprime to `p`.
pub fn unit_representatives(p: u64, a: u8) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let max_a = if p == 2 { 3 } else { 2 };
    if a == 0 || a > max_a {
        return Err(Error::UnsupportedConductor(format!(
            "unit representatives supported for 1 <= a <= {max_a} at p = {p}, got {a}"
        )));
    }
    let bound = p.pow(a as u32);
    Ok((1..bound).filter(|x| x % p != 0).collect())
}

/// A nontrivial additive character `ψ = b·ψ_F` of a local field, stored as
/// the canonical character together with a rational shift.
#[derive(Clone, Debug, PartialEq)]
pub struct AddChar {
    field: LocalField,
    shift: Rat,
    conductor: i64,
}

impl AddChar {
    /// The canonical character `ψ_F`, of conductor `d_{F/Q_p}`.
    pub fn canonical(field: LocalField) -> Result<AddChar> {
        let conductor = field.different_exponent()?;
        Ok(AddChar { field, shift: Rat::one(), conductor })
    }

    /// `b·ψ`, with `n(b·ψ) = ν_F(b) + n(ψ)`.
    pub fn shifted(&self, b: &Rat) -> Result<AddChar> {
        if b.is_zero() {
            return Err(Error::ZeroArgument("additive character shift"));
        }
        let nu_f = self.field.e() as i64 * val_p(b, self.field.p());
        Ok(AddChar {
            field: self.field.clone(),
            shift: &self.shift * b,
            conductor: self.conductor + nu_f,
        })
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn shift(&self) -> &Rat {
        &self.shift
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// Evaluate at a rational argument. Only supported over `Q_p` itself;
    /// for larger fields evaluation would go through a trace form the
    /// invariant-level model does not carry.
    pub fn eval(&self, x: &Rat) -> Result<Cyclo> {
        if !self.field.is_qp() {
            return Err(Error::UnsupportedField);
        }
        if x.is_zero() {
            return Ok(Cyclo::one());
        }
        eval_canonical_add_char(self.field.p(), &(&self.shift * x))
    }
}

/// Unit-part data of a multiplicative character of `Q_p^×` in the supported
/// conductor range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitValues {
    /// Trivial on all units (conductor 0).
    Trivial,
    /// Odd `p`, conductor 1: the quadratic residue character of `(Z/p)^×`.
    QuadraticResidue,
    /// `p = 2`, conductor ≤ 3: values on the generators `3` and `5` of
    /// `U/U^3`.
    Mod8 { on3: i8, on5: i8 },
}

/// A quadratic (or trivial) multiplicative character of `Q_p^×`, given by
/// its value on the uniformizer `p` and on unit-quotient generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultChar {
    p: u64,
    conductor: u8,
    on_uniformizer: i8,
    units: UnitValues,
}

impl MultChar {
    pub fn trivial(p: u64) -> Result<MultChar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(MultChar { p, conductor: 0, on_uniformizer: 1, units: UnitValues::Trivial })
    }

    /// The unramified quadratic character: `χ(p) = -1`, trivial on units.
    pub fn unramified_quadratic(p: u64) -> Result<MultChar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(MultChar { p, conductor: 0, on_uniformizer: -1, units: UnitValues::Trivial })
    }

    /// For odd `p`: the two ramified quadratic characters, Legendre symbol
    /// on units and the chosen sign on the uniformizer.
    pub fn ramified_quadratic(p: u64, on_uniformizer: i8) -> Result<MultChar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenResidueCharacteristic);
        }
        check_sign(on_uniformizer)?;
        Ok(MultChar { p, conductor: 1, on_uniformizer, units: UnitValues::QuadraticResidue })
    }

    /// For `p = 2`: the character determined by its values on `2`, `3`
    /// and `5`. The conductor is forced by nontriviality on the unit
    /// filtration: `a = 3` when `χ(5) = -1`, else `a = 2` when `χ(3) = -1`,
    /// else `a = 0`.
    pub fn q2_char(on2: i8, on3: i8, on5: i8) -> Result<MultChar> {
        check_sign(on2)?;
        check_sign(on3)?;
        check_sign(on5)?;
        let (conductor, units) = if on5 == -1 {
            (3, UnitValues::Mod8 { on3, on5 })
        } else if on3 == -1 {
            (2, UnitValues::Mod8 { on3, on5 })
        } else {
            (0, UnitValues::Trivial)
        };
        Ok(MultChar { p: 2, conductor, on_uniformizer: on2, units })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Conductor `a(χ)`.
    pub fn conductor(&self) -> u8 {
        self.conductor
    }

    pub fn on_uniformizer(&self) -> i8 {
        self.on_uniformizer
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 0 && self.on_uniformizer == 1
    }

    /// All stored values are signs, so every character here is its own
    /// inverse.
    pub fn inverse(&self) -> MultChar {
        self.clone()
    }

    /// Pointwise product; both characters must live over the same `p`.
    pub fn product(&self, other: &MultChar) -> Result<MultChar> {
        if self.p != other.p {
            return Err(Error::CharacterMismatch(format!(
                "characters over Q_{} and Q_{}",
                self.p, other.p
            )));
        }
        let on_pi = self.on_uniformizer * other.on_uniformizer;
        if self.p == 2 {
            let (a3, a5) = self.mod8_values();
            let (b3, b5) = other.mod8_values();
            MultChar::q2_char(on_pi, a3 * b3, a5 * b5)
        } else {
            let qr = matches!(self.units, UnitValues::QuadraticResidue)
                ^ matches!(other.units, UnitValues::QuadraticResidue);
            if qr {
                MultChar::ramified_quadratic(self.p, on_pi)
            } else {
                let mut chi = MultChar::trivial(self.p)?;
                chi.on_uniformizer = on_pi;
                Ok(chi)
            }
        }
    }

    fn mod8_values(&self) -> (i8, i8) {
        match self.units {
            UnitValues::Trivial => (1, 1),
            UnitValues::Mod8 { on3, on5 } => (on3, on5),
            UnitValues::QuadraticResidue => unreachable!("odd-p data in a p=2 character"),
        }
    }

    /// `χ(-1)`.
    pub fn value_at_minus_one(&self) -> i8 {
        match &self.units {
            UnitValues::Trivial => 1,
            UnitValues::QuadraticResidue => legendre(-1, self.p),
            // -1 ≡ 7 = 3·5 (mod 8).
            UnitValues::Mod8 { on3, on5 } => on3 * on5,
        }
    }

    /// Evaluate at a nonzero rational, as a sign.
    pub fn eval_sign(&self, x: &Rat) -> Result<i8> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("multiplicative character at zero"));
        }
        let v = val_p(x, self.p);
        let pi_part = if v.rem_euclid(2) == 0 { 1 } else { self.on_uniformizer };
        let unit_part = match &self.units {
            UnitValues::Trivial => 1,
            UnitValues::QuadraticResidue => {
                let u = self.unit_class(x, v, self.p)?;
                legendre(u as i64, self.p)
            }
            UnitValues::Mod8 { on3, on5 } => {
                let u = self.unit_class(x, v, 8)?;
                // U/U^3 = {1,3,5,7} with 7 = 3·5.
                match u {
                    1 => 1,
                    3 => *on3,
                    5 => *on5,
                    7 => on3 * on5,
                    _ => unreachable!("odd class mod 8"),
                }
            }
        };
        Ok(pi_part * unit_part)
    }

    /// Evaluate at a nonzero rational, as a cyclotomic number.
    pub fn eval(&self, x: &Rat) -> Result<Cyclo> {
        Ok(Cyclo::from_integer(self.eval_sign(x)? as i64))
    }

    /// The class of the unit part `x·p^{-v}` modulo `m` (`m = p` or `8`).
    fn unit_class(&self, x: &Rat, v: i64, m: u64) -> Result<u64> {
        let p_big = BigInt::from(self.p);
        let mut numer = x.numer().clone();
        let mut denom = x.denom().clone();
        let mut v = v;
        while v > 0 {
            numer /= &p_big;
            v -= 1;
        }
        while v < 0 {
            denom /= &p_big;
            v += 1;
        }
        let m_big = BigInt::from(m);
        let n = big_u64(&numer.mod_floor(&m_big))?;
        let d = big_u64(&denom.mod_floor(&m_big))?;
        let d_inv = mod_inv(d, m).expect("denominator is a unit mod m");
        Ok(n * d_inv % m)
    }

    /// JSON per the external schema: for `p = 2`,
    /// `{"a": 2, "on_uniformizer": "+1", "on_units": {"3": "-1", "5": "+1"}}`;
    /// for odd `p` the unit map is keyed by the least primitive root.
    pub fn to_json(&self) -> serde_json::Value {
        let mut units = BTreeMap::new();
        match &self.units {
            UnitValues::Trivial => {}
            UnitValues::QuadraticResidue => {
                units.insert(primitive_root(self.p).to_string(), sign_str(-1));
            }
            UnitValues::Mod8 { on3, on5 } => {
                units.insert("3".to_string(), sign_str(*on3));
                units.insert("5".to_string(), sign_str(*on5));
            }
        }
        serde_json::json!({
            "a": self.conductor,
            "on_uniformizer": sign_str(self.on_uniformizer),
            "on_units": units,
        })
    }

    /// Parse the schema above; `p` comes from context (it is not part of the
    /// character JSON).
    pub fn from_json(p: u64, v: &serde_json::Value) -> Result<MultChar> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("character JSON must be an object".into()))?;
        let a = obj
            .get("a")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadInput("character JSON needs integer field \"a\"".into()))?;
        let on_pi = parse_sign(
            obj.get("on_uniformizer")
                .and_then(|x| x.as_str())
                .unwrap_or("+1"),
        )?;
        let units = obj
            .get("on_units")
            .and_then(|x| x.as_object())
            .map(|m| {
                m.iter()
                    .map(|(k, val)| {
                        let s = val
                            .as_str()
                            .ok_or_else(|| Error::BadInput("unit values must be strings".into()))?;
                        Ok((k.clone(), parse_sign(s)?))
                    })
                    .collect::<Result<BTreeMap<String, i8>>>()
            })
            .transpose()?
            .unwrap_or_default();
        let chi = if p == 2 {
            let on3 = units.get("3").copied().unwrap_or(1);
            let on5 = units.get("5").copied().unwrap_or(1);
            MultChar::q2_char(on_pi, on3, on5)?
        } else {
            let g = primitive_root(p).to_string();
            let nontrivial = units.get(&g).copied().unwrap_or(1) == -1;
            if nontrivial {
                MultChar::ramified_quadratic(p, on_pi)?
            } else {
                let mut chi = MultChar::trivial(p)?;
                chi.on_uniformizer = on_pi;
                chi
            }
        };
        if chi.conductor as u64 != a {
            return Err(Error::InvalidCharacter(format!(
                "declared conductor {a} but values force conductor {}",
                chi.conductor
            )));
        }
        Ok(chi)
    }
}

fn check_sign(s: i8) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::InvalidCharacter(format!("character values must be ±1, got {s}")))
    }
}

fn sign_str(s: i8) -> String {
    if s >= 0 { "+1".to_string() } else { "-1".to_string() }
}

fn parse_sign(s: &str) -> Result<i8> {
    match s.trim() {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(Error::BadInput(format!("expected \"+1\" or \"-1\", got {other:?}"))),
    }
}
