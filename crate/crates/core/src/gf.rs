//! Finite fields `F_{ℓ^d}` in Zech-logarithm representation, and the Brauer
//! lift of their roots of unity into cyclotomic fields.
//!
//! A raw element is a `u32`: `0` is zero and `v > 0` stands for `g^(v-1)`
//! where `g` is the class of `x` modulo the field's defining polynomial.
//! Defining polynomials are the least primitive polynomials (ordered by the
//! integer `Σ c_i ℓ^i` of their lower coefficients), so `x` itself generates
//! the multiplicative group and multiplication is addition of logarithms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

/// Raw field element (see module docs).
pub type Fq = u32;

/// Largest field size the tables are built for.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

const NONE: u32 = u32::MAX;

/// `F_{ℓ^d}` with log/antilog/Zech tables.
pub struct Field {
    l: u32,
    d: u32,
    q: u32,
    /// Lower coefficients `c_0..c_{d-1}` of the monic defining polynomial.
    poly: Vec<u32>,
    /// `exp[i]` = base-ℓ encoding of `g^i`.
    exp: Vec<u32>,
    /// `log[enc]` = `i` with `g^i = enc`, or `NONE` for zero.
    log: Vec<u32>,
    /// `zech[n]` = log of `1 + g^n`, or `NONE` when that sum is zero.
    zech: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (poly {:?})", self.l, self.d, self.defining_polynomial())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

fn enc_add(a: u32, b: u32, l: u32, d: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..d {
        out += ((a % l + b % l) % l) * place;
        a /= l;
        b /= l;
        place *= l;
    }
    out
}

/// Multiply the encoded polynomial by `x` modulo `x^d + Σ c_i x^i`.
fn enc_mul_x(a: u32, l: u32, d: u32, poly: &[u32]) -> u32 {
    let mut digits: Vec<u32> = (0..d).scan(a, |s, _| {
        let r = *s % l;
        *s /= l;
        Some(r)
    })
    .collect();
    let top = digits[d as usize - 1];
    for i in (1..d as usize).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    for i in 0..d as usize {
        digits[i] = (digits[i] + (l - (top * poly[i]) % l)) % l;
    }
    digits.iter().rev().fold(0, |acc, &c| acc * l + c)
}

impl Field {
    fn build(l: u32, d: u32) -> Result<Field> {
        let q64 = (l as u64).pow(d);
        if q64 > MAX_FIELD_SIZE {
            return Err(Error::Resource { what: "field size", value: q64, bound: MAX_FIELD_SIZE });
        }
        let q = q64 as u32;
        let n = q - 1;
        // candidate polynomials in increasing order of Σ c_i ℓ^i
        for code in 0..q {
            let poly: Vec<u32> = (0..d).scan(code, |s, _| {
                let r = *s % l;
                *s /= l;
                Some(r)
            })
            .collect();
            if poly[0] == 0 {
                continue;
            }
            let mut exp = Vec::with_capacity(n as usize);
            let x = if d == 1 { (l - poly[0]) % l } else { l };
            let mut cur = 1u32;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp.push(cur);
                cur = if d == 1 { (cur * x) % l } else { enc_mul_x(cur, l, d, &poly) };
            }
            if !ok || cur != 1 {
                continue;
            }
            let mut log = vec![NONE; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            let zech = (0..n)
                .map(|k| log[enc_add(1, exp[k as usize], l, d) as usize])
                .collect();
            return Ok(Field { l, d, q, poly, exp, log, zech });
        }
        Err(Error::Internal(format!("no primitive polynomial of degree {d} over F_{l}")))
    }

    /// Registry lookup; fields are built once per `(ℓ, d)` and shared.
    pub fn get(l: u32, d: u32) -> Result<Arc<Field>> {
        static REGISTRY: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
        if !is_prime(l as u64) {
            return Err(Error::Domain(format!("{l} is not prime")));
        }
        if d == 0 {
            return Err(Error::Domain("field degree must be positive".into()));
        }
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = reg.lock().expect("field registry poisoned").get(&(l, d)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Field::build(l, d)?);
        let mut guard = reg.lock().expect("field registry poisoned");
        Ok(guard.entry((l, d)).or_insert(f).clone())
    }

    pub fn characteristic(&self) -> u32 {
        self.l
    }
    pub fn degree(&self) -> u32 {
        self.d
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    /// Order of the multiplicative group, `q - 1`.
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    /// Full monic defining polynomial, constant term first.
    pub fn defining_polynomial(&self) -> Vec<u32> {
        let mut p = self.poly.clone();
        p.push(1);
        p
    }

    #[inline]
    pub fn zero(&self) -> Fq {
        0
    }
    #[inline]
    pub fn one(&self) -> Fq {
        1
    }
    /// The fixed generator `g` of the multiplicative group.
    #[inline]
    pub fn generator(&self) -> Fq {
        if self.q == 2 {
            1
        } else {
            2
        }
    }

    /// `g^k` for any integer `k`.
    #[inline]
    pub fn from_log(&self, k: i64) -> Fq {
        1 + k.rem_euclid(self.unit_order() as i64) as u32
    }

    /// Discrete log to base `g`; `None` for zero.
    #[inline]
    pub fn log(&self, a: Fq) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(a - 1)
        }
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let r = n.rem_euclid(self.l as i64) as u32;
        self.from_encoding(r)
    }

    pub fn from_encoding(&self, enc: u32) -> Fq {
        let lg = self.log[enc as usize];
        if lg == NONE {
            0
        } else {
            lg + 1
        }
    }

    /// Base-ℓ encoding `Σ a_i ℓ^i` of the coefficient vector.
    pub fn encoding(&self, a: Fq) -> u32 {
        if a == 0 {
            0
        } else {
            self.exp[(a - 1) as usize]
        }
    }

    pub fn coefficients(&self, a: Fq) -> Vec<u32> {
        let mut e = self.encoding(a);
        (0..self.d)
            .map(|_| {
                let r = e % self.l;
                e /= self.l;
                r
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let n = self.unit_order();
        let (la, lb) = (a - 1, b - 1);
        let diff = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[diff as usize];
        if z == NONE {
            0
        } else {
            1 + ((la as u64 + z as u64) % n as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if a == 0 || self.l == 2 {
            return a;
        }
        let n = self.unit_order();
        1 + ((a - 1) + n / 2) % n
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.unit_order();
        let s = (a - 1) + (b - 1);
        1 + if s >= n { s - n } else { s }
    }

    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a != 0, "inverse of zero");
        let n = self.unit_order();
        1 + (n - (a - 1)) % n
    }

    #[inline]
    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a == 0 {
            assert!(e > 0, "zero to a non-positive power");
            return 0;
        }
        let n = self.unit_order() as i64;
        1 + (((a - 1) as i64 * e.rem_euclid(n)) % n) as u32
    }

    /// The Frobenius `x ↦ x^ℓ`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.l as i64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> Result<u32> {
        match self.log(a) {
            None => Err(Error::Domain("multiplicative order of zero".into())),
            Some(k) => Ok(self.unit_order() / k.gcd(&self.unit_order())),
        }
    }

    /// The chosen primitive `e`th root of unity `g^((q-1)/e)`.
    pub fn primitive_root_of_unity(&self, e: u32) -> Result<Fq> {
        if e == 0 || !self.unit_order().is_multiple_of(e) {
            return Err(Error::InvalidOrder { order: e as u64, prime: self.l as u64 });
        }
        Ok(self.from_log((self.unit_order() / e) as i64))
    }

    /// All `x` with `x^e = 1`, in increasing log order.
    pub fn roots_of_unity(&self, e: u32) -> Vec<Fq> {
        let e = e.gcd(&self.unit_order());
        let step = self.unit_order() / e;
        (0..e).map(|i| self.from_log((i * step) as i64)).collect()
    }

    pub fn element(self: &Arc<Self>, raw: Fq) -> FieldElement {
        FieldElement { field: self.clone(), raw }
    }
}

/// Smallest `d` with `e | ℓ^d - 1`, and that field.
pub fn field_tower(l: u32, e: u64) -> Result<Arc<Field>> {
    if !is_prime(l as u64) {
        return Err(Error::Domain(format!("{l} is not prime")));
    }
    if e == 0 || e.gcd(&(l as u64)) != 1 {
        return Err(Error::InvalidOrder { order: e, prime: l as u64 });
    }
    let mut d = 1u32;
    let mut pw = l as u64 % e;
    loop {
        if (pw + e - 1).is_multiple_of(e) {
            return Field::get(l, d);
        }
        d += 1;
        pw = (pw * l as u64) % e;
        if (l as u64).checked_pow(d).is_none_or(|q| q > MAX_FIELD_SIZE) {
            return Err(Error::Resource {
                what: "field size",
                value: (l as u64).saturating_pow(d),
                bound: MAX_FIELD_SIZE,
            });
        }
    }
}

/// Multiplicative order of a nonzero element.
pub fn root_order(x: &FieldElement) -> Result<u32> {
    x.field.order(x.raw)
}

/// Minimal `k >= 0` with `base^k = x`, or `None` if `x ∉ <base>`.
///
/// Logarithms are read off the Zech tables, so this is a linear congruence
/// `k · log(base) ≡ log(x) (mod q-1)` rather than a baby-step giant-step search.
pub fn discrete_log(x: &FieldElement, base: &FieldElement) -> Result<Option<u64>> {
    let f = &base.field;
    let lb = f.log(base.raw).ok_or_else(|| Error::Domain("discrete log to base zero".into()))?;
    let Some(lx) = f.log(x.raw) else { return Ok(None) };
    Ok(solve_linear_congruence(lb as u64, lx as u64, f.unit_order() as u64))
}

/// Minimal nonnegative `k` with `a·k ≡ b (mod n)`.
pub fn solve_linear_congruence(a: u64, b: u64, n: u64) -> Option<u64> {
    let g = a.gcd(&n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let (a1, b1, n1) = (a / g, b / g, n / g);
    if n1 == 1 {
        return Some(0);
    }
    let inv = mod_inverse(a1 % n1, n1)?;
    Some(((b1 % n1) as u128 * inv as u128 % n1 as u128) as u64)
}

pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(n as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// A field element bundled with its field, for API boundaries and reports.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<Field>,
    raw: Fq,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn raw(&self) -> Fq {
        self.raw
    }
    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }
    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        self.field.element(self.field.mul(self.raw, o.raw))
    }
    pub fn add(&self, o: &FieldElement) -> FieldElement {
        self.field.element(self.field.add(self.raw, o.raw))
    }
    pub fn inv(&self) -> FieldElement {
        self.field.element(self.field.inv(self.raw))
    }
    pub fn pow(&self, e: i64) -> FieldElement {
        self.field.element(self.field.pow(self.raw, e))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.field, &o.field) && self.raw == o.raw
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field.log(self.raw) {
            None => write!(f, "0"),
            Some(k) => write!(f, "g^{k} in F_{}", self.field.size()),
        }
    }
}

/// Serialized form `{"l", "d", "poly", "coeffs"}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FieldElementRepr {
    pub l: u32,
    pub d: u32,
    pub poly: Vec<u32>,
    pub coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn to_repr(&self) -> FieldElementRepr {
        FieldElementRepr {
            l: self.field.l,
            d: self.field.d,
            poly: self.field.defining_polynomial(),
            coeffs: self.field.coefficients(self.raw),
        }
    }

    pub fn from_repr(r: &FieldElementRepr) -> Result<FieldElement> {
        let f = Field::get(r.l, r.d)?;
        if f.defining_polynomial() != r.poly {
            return Err(Error::Consistency(format!(
                "defining polynomial {:?} differs from this build's {:?}",
                r.poly,
                f.defining_polynomial()
            )));
        }
        if r.coeffs.len() != r.d as usize || r.coeffs.iter().any(|&c| c >= r.l) {
            return Err(Error::Domain("coefficient vector out of range".into()));
        }
        let enc = r.coeffs.iter().rev().fold(0, |acc, &c| acc * r.l + c);
        let raw = f.from_encoding(enc);
        Ok(f.element(raw))
    }
}

/// Which primitive `(q-1)`th root of unity corresponds to `ζ_{q-1}`.
///
/// The distinguished root is `g^unit`; every chosen `e`th root is a power of
/// it, so the chosen roots are compatible under powering by construction.
#[derive(Clone)]
pub struct LiftConvention {
    field: Arc<Field>,
    unit: u64,
}

impl fmt::Debug for LiftConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LiftConvention(F_{}, g^{})", self.field.size(), self.unit)
    }
}

impl LiftConvention {
    /// Default convention: `g` itself is sent to `ζ_{q-1}`.
    pub fn standard(field: &Arc<Field>) -> Self {
        LiftConvention { field: field.clone(), unit: 1 }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Chosen primitive `e`th root of unity.
    pub fn chosen_root(&self, e: u32) -> Result<Fq> {
        let n = self.field.unit_order();
        if e == 0 || !n.is_multiple_of(e) {
            return Err(Error::InvalidOrder { order: e as u64, prime: self.field.l as u64 });
        }
        Ok(self.field.from_log((self.unit * (n / e) as u64) as i64))
    }

    /// Exponent `k` with `x = ρ^k`, `ρ` the distinguished `(q-1)`th root.
    pub fn exponent(&self, x: Fq) -> Result<u64> {
        let n = self.field.unit_order() as u64;
        let lx = self.field.log(x).ok_or_else(|| Error::Domain("Brauer lift of zero".into()))? as u64;
        let inv = mod_inverse(self.unit % n.max(1), n.max(1)).unwrap_or(0);
        Ok((lx as u128 * inv as u128 % n.max(1) as u128) as u64)
    }

    /// Lift a root of unity of order dividing `conductor` to `ζ_conductor^k`.
    pub fn lift_exponent(&self, x: Fq, conductor: u32) -> Result<u32> {
        let n = self.field.unit_order() as u64;
        let k = self.exponent(x)?;
        let num = k * conductor as u64;
        if !num.is_multiple_of(n) {
            return Err(Error::Domain(format!(
                "element of order {} does not lie in μ_{conductor}",
                self.field.order(x)?
            )));
        }
        Ok(((num / n) % conductor as u64) as u32)
    }

    pub fn lift_in(&self, x: Fq, conductor: u32) -> Result<CycloNumber> {
        Ok(CycloNumber::zeta_power(conductor, self.lift_exponent(x, conductor)? as i64))
    }

    /// The convention on a subfield induced by an embedding into this field.
    pub fn restrict(&self, emb: &Embedding) -> Result<LiftConvention> {
        if !Arc::ptr_eq(&emb.large, &self.field) {
            return Err(Error::Consistency("embedding target is not this convention's field".into()));
        }
        // image of g_small is ρ_large^(s·j) for s = (Q-1)/(q-1); find j, then
        // ρ_small = g_small^(j^{-1}) maps to ρ_large^s.
        let n_small = emb.small.unit_order() as u64;
        let s = (self.field.unit_order() / emb.small.unit_order()) as u64;
        let k = self.exponent(emb.image_of_generator)?;
        if k % s != 0 {
            return Err(Error::Internal("embedded generator outside the subfield".into()));
        }
        let j = k / s;
        let unit = mod_inverse(j % n_small.max(1), n_small.max(1)).unwrap_or(1);
        Ok(LiftConvention { field: emb.small.clone(), unit: unit.max(1) })
    }
}

/// Brauer lift of a root of unity of `ℓ'`-order into `Q(ζ_{ord x})`.
pub fn brauer_lift(x: &FieldElement, conv: &LiftConvention) -> Result<CycloNumber> {
    if !Arc::ptr_eq(&x.field, &conv.field) {
        return Err(Error::Consistency("element and convention live in different fields".into()));
    }
    let o = x.field.order(x.raw)?;
    conv.lift_in(x.raw, o)
}

/// A field embedding `F_{ℓ^d} ↪ F_{ℓ^{d'}}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: Arc<Field>,
    large: Arc<Field>,
    image_of_generator: Fq,
}

impl Embedding {
    /// Send `x` (the small field's generator) to the root of its minimal
    /// polynomial with least logarithm in the large field.
    pub fn new(small: &Arc<Field>, large: &Arc<Field>) -> Result<Embedding> {
        if small.l != large.l || !large.d.is_multiple_of(small.d) {
            return Err(Error::Structure(format!("{small:?} does not embed in {large:?}")));
        }
        let s = large.unit_order() / small.unit_order();
        let poly = small.defining_polynomial();
        for j in 1..small.unit_order().max(2) {
            let cand = large.from_log((j * s) as i64);
            // evaluate Σ c_i cand^i in the large field
            let mut acc = 0;
            for &c in poly.iter().rev() {
                acc = large.add(large.mul(acc, cand), large.from_int(c as i64));
            }
            if acc == 0 {
                return Ok(Embedding { small: small.clone(), large: large.clone(), image_of_generator: cand });
            }
        }
        Err(Error::Internal("no root of the defining polynomial in the extension".into()))
    }

    pub fn apply(&self, x: Fq) -> Fq {
        match self.small.log(x) {
            None => 0,
            Some(k) => self.large.pow(self.image_of_generator, k as i64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tower_degrees() {
        assert_eq!(field_tower(2, 3).unwrap().degree(), 2);
        assert_eq!(field_tower(7, 2).unwrap().degree(), 1);
        // 5 | 2^d - 1 first at d = 4 (scan: 1, 3, 7, 15)
        let scan = (1..).find(|&d| (2u64.pow(d) - 1) % 5 == 0).unwrap();
        assert_eq!(scan, 4);
        assert_eq!(field_tower(2, 5).unwrap().degree(), scan);
        assert!(matches!(field_tower(2, 4), Err(Error::InvalidOrder { .. })));
        assert!(matches!(field_tower(3, 0), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn orders_and_logs() {
        let f7 = Field::get(7, 1).unwrap();
        let minus_one = f7.from_int(-1);
        assert_eq!(f7.order(1).unwrap(), 1);
        assert_eq!(f7.order(minus_one).unwrap(), 2);
        assert!(f7.order(0).is_err());
        let f4 = Field::get(2, 2).unwrap();
        let g = f4.element(f4.generator());
        assert_eq!(root_order(&g).unwrap(), 3);
        assert_eq!(discrete_log(&f4.element(1), &g).unwrap(), Some(0));
        assert_eq!(discrete_log(&g, &g).unwrap(), Some(1));
        assert_eq!(discrete_log(&g.pow(2), &g).unwrap(), Some(2));
        let f7g = f7.element(f7.generator());
        // 2 generates the squares of F_7; 3 is not a square
        assert_eq!(discrete_log(&f7.element(f7.from_int(3)), &f7.element(f7.from_int(2))).unwrap(), None);
        assert!(discrete_log(&f7g, &f7.element(0)).is_err());
    }

    #[test]
    fn lifts() {
        let f7 = Field::get(7, 1).unwrap();
        let c = LiftConvention::standard(&f7);
        assert_eq!(brauer_lift(&f7.element(1), &c).unwrap().to_i64(), Some(1));
        assert_eq!(brauer_lift(&f7.element(f7.from_int(-1)), &c).unwrap().to_i64(), Some(-1));
        let f4 = Field::get(2, 2).unwrap();
        let c4 = LiftConvention::standard(&f4);
        let root = c4.chosen_root(3).unwrap();
        assert_eq!(brauer_lift(&f4.element(root), &c4).unwrap(), CycloNumber::zeta_power(3, 1));
        assert!(brauer_lift(&f4.element(0), &c4).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        let f = Field::get(3, 2).unwrap();
        for a in 0..f.size() {
            for b in 0..f.size() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                for c in 0..f.size() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                }
            }
            if a != 0 {
                assert_eq!(f.pow(a, f.unit_order() as i64), 1);
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            // Frobenius is additive
            for b in 0..f.size() {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
    }

    #[test]
    fn embedding_commutes_with_lift() {
        let small = Field::get(2, 2).unwrap();
        let large = Field::get(2, 4).unwrap();
        let emb = Embedding::new(&small, &large).unwrap();
        let big = LiftConvention::standard(&large);
        let sub = big.restrict(&emb).unwrap();
        for x in 1..small.size() {
            let y = emb.apply(x);
            assert_eq!(sub.lift_in(x, 3).unwrap(), big.lift_in(y, 3).unwrap());
            for z in 1..small.size() {
                assert_eq!(emb.apply(small.add(x, z)), large.add(y, emb.apply(z)));
            }
        }
        // compatibility of chosen roots under powering
        assert_eq!(large.pow(big.chosen_root(15).unwrap(), 5), big.chosen_root(3).unwrap());
    }

    #[test]
    fn repr_round_trip() {
        let f = Field::get(5, 2).unwrap();
        let x = f.element(f.from_log(7));
        let r = x.to_repr();
        assert_eq!(FieldElement::from_repr(&r).unwrap(), x);
    }

    proptest! {
        #[test]
        fn lift_is_multiplicative(a in 0u32..48, b in 0u32..48) {
            let f = Field::get(7, 2).unwrap();
            let c = LiftConvention::standard(&f);
            let (x, y) = (f.from_log(a as i64), f.from_log(b as i64));
            let lx = c.lift_in(x, 48).unwrap();
            let ly = c.lift_in(y, 48).unwrap();
            prop_assert_eq!(c.lift_in(f.mul(x, y), 48).unwrap(), &lx * &ly);
            prop_assert_eq!(c.lift_in(f.inv(x), 48).unwrap(), lx.conj());
        }
    }
}
