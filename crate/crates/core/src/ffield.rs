//! Finite fields `GF(p^s)`: trace to the prime field, the canonical additive
//! character, the quadratic multiplicative character, and quadratic Gauss
//! sums computed both by brute force and by the classical closed form.
//!
//! Fields are modelled as `GF(p)[t]/(f)` for a deterministic monic
//! irreducible `f`; every exported quantity (trace, characters, Gauss sums)
//! is independent of that model, which the tests check by recomputing with a
//! second modulus.

use num_bigint::BigInt;

use crate::arith::{factorize, is_prime, mod_inv};
use crate::cyclo::{Coefficient, CycloNumber, Mu4};
use crate::{Error, Result};

/// Descriptor of `GF(p^s)` together with its defining modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    s: u32,
    /// Monic modulus of degree `s`, constant coefficient first; length `s+1`.
    modulus: Vec<u64>,
}

/// An element of a [`FiniteField`], as a coefficient vector of length `s`
/// over `GF(p)`, constant coefficient first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFElement {
    coeffs: Vec<u64>,
}

impl FFElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl FiniteField {
    /// The field `GF(p^s)` with the deterministic modulus: the monic degree-s
    /// polynomial whose non-leading coefficient vector, read as a base-p
    /// number (constant digit least significant), is smallest among the
    /// irreducible candidates.
    pub fn new(p: u64, s: u32) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::BadInput("degree s must be >= 1".into()));
        }
        let count = p
            .checked_pow(s)
            .ok_or_else(|| Error::BadInput("p^s overflows".into()))?;
        for m in 0..count {
            let mut modulus: Vec<u64> = Vec::with_capacity(s as usize + 1);
            let mut rest = m;
            for _ in 0..s {
                modulus.push(rest % p);
                rest /= p;
            }
            modulus.push(1);
            if poly_is_irreducible(p, &modulus) {
                return Ok(FiniteField { p, s, modulus });
            }
        }
        unreachable!("GF(p^s) always has an irreducible modulus")
    }

    /// Same field with a caller-supplied monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() % p != 1 {
            return Err(Error::BadInput("modulus must be monic of degree >= 1".into()));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::NotIrreducible);
        }
        let s = (modulus.len() - 1) as u32;
        Ok(FiniteField { p, s, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    /// `q = p^s`.
    pub fn size(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FFElement {
        FFElement { coeffs: vec![0; self.s as usize] }
    }

    pub fn one(&self) -> FFElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FFElement {
        let mut coeffs = vec![0; self.s as usize];
        coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        FFElement { coeffs }
    }

    /// Element from raw coefficients (constant first); reduced mod p.
    pub fn element(&self, coeffs: &[i64]) -> FFElement {
        let mut out = vec![0; self.s as usize];
        for (i, &c) in coeffs.iter().enumerate().take(self.s as usize) {
            out[i] = c.rem_euclid(self.p as i64) as u64;
        }
        FFElement { coeffs: out }
    }

    /// The class of `t`, a root of the modulus.
    pub fn gen_root(&self) -> FFElement {
        if self.s == 1 {
            // t ≡ -modulus[0] in the degree-one model.
            self.from_int(-(self.modulus[0] as i64))
        } else {
            let mut coeffs = vec![0; self.s as usize];
            coeffs[1] = 1;
            FFElement { coeffs }
        }
    }

    pub fn is_zero(&self, x: &FFElement) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FFElement { coeffs }
    }

    pub fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        let prod = poly_mul_mod(self.p, &a.coeffs, &b.coeffs, &self.modulus);
        FFElement { coeffs: prod }
    }

    pub fn pow(&self, a: &FFElement, mut e: u64) -> FFElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `Tr(x) = Σ_{j<s} x^{p^j}`, landing in the prime field.
    pub fn trace_to_prime(&self, x: &FFElement) -> u64 {
        let mut acc = x.clone();
        let mut frob = x.clone();
        for _ in 1..self.s {
            frob = self.pow(&frob, self.p);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must be scalar");
        acc.coeffs[0]
    }

    /// `ψ_q(x) = ζ_p^{Tr(x)}`, the canonical additive character.
    pub fn canonical_additive_char<R: Coefficient>(&self, x: &FFElement) -> CycloNumber<R> {
        CycloNumber::root_of_unity(self.p, self.trace_to_prime(x) as i64)
            .expect("characteristic is nonzero")
    }

    /// Quadratic character `x^{(q-1)/2}`; `+1` exactly for nonzero squares.
    pub fn quadratic_character(&self, x: &FFElement) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if self.is_zero(x) {
            return Err(Error::ZeroArgument("quadratic character of zero"));
        }
        let y = self.pow(x, (self.size() - 1) / 2);
        if y == self.one() {
            Ok(1)
        } else {
            Ok(-1)
        }
    }

    /// A fixed generator of the multiplicative group: the first element, in
    /// base-p enumeration order of coefficient vectors, of order `q - 1`.
    pub fn multiplicative_generator(&self) -> FFElement {
        let q = self.size();
        let prime_factors: Vec<u64> = factorize(q - 1).into_iter().map(|(f, _)| f).collect();
        'outer: for m in 1..q {
            let g = self.enumerated(m);
            for &f in &prime_factors {
                if self.pow(&g, (q - 1) / f) == self.one() {
                    continue 'outer;
                }
            }
            return g;
        }
        unreachable!("GF(q)^x is cyclic")
    }

    fn enumerated(&self, m: u64) -> FFElement {
        let mut coeffs = Vec::with_capacity(self.s as usize);
        let mut rest = m;
        for _ in 0..self.s {
            coeffs.push(rest % self.p);
            rest /= self.p;
        }
        FFElement { coeffs }
    }

    /// `G(χ,ψ) = Σ_{x ∈ GF(q)^×} χ(x)·ψ(x)` for the quadratic character and
    /// the canonical additive character, summed term by term.
    ///
    /// Runs over `x = g^j`, where `χ(g^j) = (-1)^j` and the trace of `x` is a
    /// linear form in its coefficients, so the whole sweep is `O(q·s^2)`.
    pub fn gauss_sum_bruteforce<R: Coefficient>(&self) -> Result<CycloNumber<R>> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let q = self.size();
        // Trace is linear: precompute it on the power basis.
        let mut basis_trace = Vec::with_capacity(self.s as usize);
        for i in 0..self.s as usize {
            let mut coeffs = vec![0; self.s as usize];
            coeffs[i] = 1;
            basis_trace.push(self.trace_to_prime(&FFElement { coeffs }));
        }
        let trace_of = |x: &FFElement| -> u64 {
            x.coeffs
                .iter()
                .zip(&basis_trace)
                .fold(0u64, |acc, (&c, &t)| (acc + c * t) % self.p)
        };
        let g = self.multiplicative_generator();
        let mut counts = vec![0i64; self.p as usize];
        let mut x = self.one();
        for j in 0..q - 1 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            counts[trace_of(&x) as usize] += sign;
            x = self.mul(&x, &g);
        }
        debug_assert_eq!(x, self.one());
        CycloNumber::from_terms(
            self.p,
            counts
                .into_iter()
                .enumerate()
                .map(|(t, c)| (t as i64, R::from_i64(c).unwrap())),
        )
    }
}

/// Closed form of the quadratic Gauss sum over `GF(p^s)`:
/// `(-1)^{s-1}·q^{1/2}` when `p ≡ 1 (mod 4)` and `(-1)^{s-1}·i^s·q^{1/2}`
/// when `p ≡ 3 (mod 4)`, with `q^{1/2}` realized exactly inside the ring.
pub fn gauss_sum_closed_form<R: Coefficient>(p: u64, s: u32) -> Result<CycloNumber<R>> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::BadInput("degree s must be >= 1".into()));
    }
    let sqrt_q: CycloNumber<R> = sqrt_power(p, s)?;
    let sign = if s % 2 == 1 { 1 } else { -1 }; // (-1)^{s-1}
    let mut value = sqrt_q.scale(&R::from_i64(sign).unwrap());
    if p % 4 == 3 {
        value = value.mul_mu4(Mu4::from_exponent(s as i64));
    }
    Ok(value)
}

/// `p^{s/2}` as an exact cyclotomic number.
fn sqrt_power<R: Coefficient>(p: u64, s: u32) -> Result<CycloNumber<R>> {
    let rational = CycloNumber::from_coefficient(big_to_r::<R>(&BigInt::from(p).pow(s / 2)));
    if s % 2 == 0 {
        Ok(rational)
    } else {
        Ok(&rational * &CycloNumber::sqrt_prime(p)?)
    }
}

fn big_to_r<R: Coefficient>(n: &BigInt) -> R {
    // Magnitudes stay tiny in this crate, but do not assume i64 fits.
    use num_traits::Zero as _;
    if n.is_zero() {
        return R::zero();
    }
    let (sign, digits) = n.to_radix_be(256);
    let base = R::from_u32(256).unwrap();
    let mut acc = R::zero();
    for &d in &digits {
        acc = acc * base.clone() + R::from_u8(d).unwrap();
    }
    if sign == num_bigint::Sign::Minus {
        acc = -acc;
    }
    acc
}

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let s = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // Reduce: x^s = -(lower part of modulus).
    for i in (s..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &m) in modulus.iter().enumerate().take(s) {
            let idx = i - s + j;
            prod[idx] = (prod[idx] + c * (p - m) % p) % p;
        }
    }
    prod.truncate(s);
    prod.resize(s, 0);
    prod
}

fn poly_pow_x_mod(p: u64, e: u64, modulus: &[u64]) -> Vec<u64> {
    let s = modulus.len() - 1;
    let mut acc = vec![0u64; s];
    acc[0] = 1;
    let mut base = vec![0u64; s];
    if s == 1 {
        base[0] = (p - modulus[0] % p) % p; // x ≡ -c mod (x + c)
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(p, &acc, &base, modulus);
        }
        base = poly_mul_mod(p, &base, &base, modulus);
        e >>= 1;
    }
    acc
}

/// Irreducibility over `GF(p)`: a root search suffices through degree three;
/// higher degrees use the `x^{p^k} - x` gcd criterion.
fn poly_is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let s = modulus.len() - 1;
    if s == 1 {
        return true;
    }
    if s <= 3 {
        for r in 0..p {
            let mut acc = 0u64;
            let mut power = 1u64;
            for &c in modulus.iter() {
                acc = (acc + c * power) % p;
                power = power * r % p;
            }
            if acc == 0 {
                return false;
            }
        }
        return true;
    }
    // x^{p^s} ≡ x, and gcd(x^{p^{s/l}} - x, f) = 1 for each prime l | s.
    let frob_s = poly_pow_x_mod(p, p.pow(s as u32), modulus);
    let mut x_poly = vec![0u64; s];
    x_poly[1] = 1;
    if frob_s != x_poly {
        return false;
    }
    for (l, _) in factorize(s as u64) {
        let fk = poly_pow_x_mod(p, p.pow((s as u64 / l) as u32), modulus);
        let diff: Vec<u64> = fk
            .iter()
            .zip(&x_poly)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        if poly_gcd_degree(p, &diff, modulus) != 0 {
            return false;
        }
    }
    true
}

fn poly_gcd_degree(p: u64, a: &[u64], b: &[u64]) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        trim(&mut a);
        trim(&mut b);
        if b.is_empty() {
            return a.len().saturating_sub(1);
        }
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p).expect("leading coefficient is a unit");
    while r.len() > db {
        let c = *r.last().unwrap() * lead_inv % p;
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + c * (p - bc) % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}
