//! Exact arithmetic in cyclotomic fields `Q(ζ_K)`.
//!
//! A [`CycloNumber`] is stored in the power basis `1, ζ, …, ζ^{φ(K)-1}` with
//! arbitrary-precision rational coefficients, reduced modulo the `K`th
//! cyclotomic polynomial. Reduction is canonical, so two numbers with the same
//! conductor are equal exactly when their coefficient vectors agree. Numbers
//! with different conductors are compared and combined in `Q(ζ_lcm)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest conductor the reduction tables are built for.
pub const MAX_CONDUCTOR: u32 = 10_000;

struct CycloData {
    phi: usize,
    /// `powers[j]` is `ζ^j` written in the power basis, for `0 <= j < K`.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_poly(k: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&k) {
        return p.clone();
    }
    // x^k - 1 divided by Φ_d for every proper divisor d of k.
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for d in 1..k {
        if k.is_multiple_of(d) {
            let den = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &den);
        }
    }
    cache.insert(k, num.clone());
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem: Vec<i64> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn data(k: u32) -> Arc<CycloData> {
    static TABLES: OnceLock<Mutex<(HashMap<u32, Arc<CycloData>>, HashMap<u32, Vec<i64>>)>> =
        OnceLock::new();
    assert!((1..=MAX_CONDUCTOR).contains(&k), "conductor {k} out of range");
    let lock = TABLES.get_or_init(|| Mutex::new((HashMap::new(), HashMap::new())));
    let mut guard = lock.lock().expect("cyclotomic table lock poisoned");
    if let Some(d) = guard.0.get(&k) {
        return d.clone();
    }
    let poly = cyclotomic_poly(k, &mut guard.1);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(k as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..k {
        powers.push(cur.clone());
        // multiply by ζ and reduce the overflow coefficient
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * poly[i];
            }
        }
    }
    let d = Arc::new(CycloData { phi, powers });
    guard.0.insert(k, d.clone());
    d
}

/// Euler's totient of `k`.
pub fn euler_phi(k: u32) -> u32 {
    let mut n = k;
    let mut out = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// An element of `Q(ζ_K)`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(conductor: u32) -> Self {
        let phi = data(conductor).phi;
        CycloNumber { conductor, coeffs: vec![BigRational::zero(); phi] }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_integer(conductor, 1)
    }

    pub fn from_integer(conductor: u32, n: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(conductor: u32, q: BigRational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    /// `ζ_K^j` for any integer `j`.
    pub fn zeta_power(conductor: u32, j: i64) -> Self {
        let k = conductor as i64;
        let e = j.rem_euclid(k) as usize;
        let d = data(conductor);
        CycloNumber {
            conductor,
            coeffs: d.powers[e].iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    /// `Σ counts[t] · ζ_K^t`: the form every character value takes.
    pub fn from_root_counts(conductor: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), conductor as usize);
        let d = data(conductor);
        let mut acc = vec![0i64; d.phi];
        for (t, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &p) in acc.iter_mut().zip(&d.powers[t]) {
                    *a += c * p;
                }
            }
        }
        CycloNumber {
            conductor,
            coeffs: acc.into_iter().map(|c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Option<Self> {
        if conductor == 0 || conductor > MAX_CONDUCTOR {
            return None;
        }
        if coeffs.len() != data(conductor).phi {
            return None;
        }
        Some(CycloNumber { conductor, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        let q = self.to_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    /// All coordinates are integers, i.e. the number lies in `Z[ζ_K]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Rewrite in `Q(ζ_L)` for a multiple `L` of the conductor.
    pub fn promote(&self, l: u32) -> Self {
        assert!(l.is_multiple_of(self.conductor), "conductor {} does not divide {l}", self.conductor);
        if l == self.conductor {
            return self.clone();
        }
        let step = (l / self.conductor) as usize;
        let d = data(l);
        let mut out = vec![BigRational::zero(); d.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                for (o, &p) in out.iter_mut().zip(&d.powers[j * step]) {
                    if p != 0 {
                        *o += c * BigRational::from_integer(p.into());
                    }
                }
            }
        }
        CycloNumber { conductor: l, coeffs: out }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let l = self.conductor.lcm(&other.conductor);
        (self.promote(l), other.promote(l))
    }

    /// The Galois automorphism `ζ ↦ ζ^k` (`k` coprime to the conductor).
    pub fn galois(&self, k: i64) -> Self {
        let kk = self.conductor as i64;
        debug_assert!(kk == 1 || k.rem_euclid(kk).gcd(&kk) == 1, "k must be a unit mod {kk}");
        let d = data(self.conductor);
        let mut out = vec![BigRational::zero(); d.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let t = ((j as i64) * k).rem_euclid(kk) as usize;
                for (o, &p) in out.iter_mut().zip(&d.powers[t]) {
                    if p != 0 {
                        *o += c * BigRational::from_integer(p.into());
                    }
                }
            }
        }
        CycloNumber { conductor: self.conductor, coeffs: out }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Floating-point value at `ζ = exp(2πi/K)`; only for sanity checks.
    pub fn to_complex(&self) -> (f64, f64) {
        let k = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / k;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Deterministic total order on representations with equal conductor.
    /// Used for tie-breaking when sorting tables; it has no algebraic meaning.
    pub fn cmp_repr(&self, other: &Self) -> Ordering {
        let (a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        if self.conductor != rhs.conductor {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.conductor != rhs.conductor {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        let k = self.conductor as usize;
        let d = data(self.conductor);
        let mut raw: Vec<BigRational> = vec![BigRational::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % k] += a * b;
                }
            }
        }
        let mut out = vec![BigRational::zero(); d.phi];
        for (t, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if t < d.phi {
                out[t] += c;
            } else {
                for (o, &p) in out.iter_mut().zip(&d.powers[t]) {
                    if p != 0 {
                        *o += &c * BigRational::from_integer(p.into());
                    }
                }
            }
        }
        CycloNumber { conductor: self.conductor, coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (j, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z{}^{j}", self.conductor)?,
                (_, false) => write!(f, "{a}*z{}^{j}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloRepr {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CycloRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        CycloNumber::from_coeffs(r.conductor, coeffs)
            .ok_or_else(|| D::Error::custom("coefficient count does not match φ(conductor)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(120), 32);
        for k in [1u32, 2, 3, 4, 6, 12, 15, 60, 120] {
            assert_eq!(data(k).phi as u32, euler_phi(k));
        }
    }

    #[test]
    fn roots_sum_to_zero() {
        for k in [2u32, 3, 5, 8, 12] {
            let mut s = CycloNumber::zero(k);
            for j in 0..k as i64 {
                s = &s + &CycloNumber::zeta_power(k, j);
            }
            assert!(s.is_zero(), "sum of {k}th roots");
        }
    }

    #[test]
    fn promotion_and_equality_across_conductors() {
        let w3 = CycloNumber::zeta_power(3, 1);
        let w6 = CycloNumber::zeta_power(6, 2);
        assert_eq!(w3, w6);
        let minus_one = CycloNumber::zeta_power(4, 2);
        assert_eq!(minus_one.to_i64(), Some(-1));
        assert_eq!((&w3 * &w3.conj()).to_i64(), Some(1));
    }

    #[test]
    fn serde_round_trip() {
        let x = &CycloNumber::zeta_power(12, 5) + &CycloNumber::from_integer(12, 3);
        let s = serde_json::to_string(&x).unwrap();
        let y: CycloNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    fn arb(k: u32) -> impl Strategy<Value = CycloNumber> {
        prop::collection::vec(-3i64..=3, k as usize).prop_map(move |c| CycloNumber::from_root_counts(k, &c))
    }

    proptest! {
        #[test]
        fn ring_axioms_and_float_agreement(a in arb(12), b in arb(12), c in arb(12)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            let (ar, ai) = a.to_complex();
            let (br, bi) = b.to_complex();
            let (pr, pi) = (&a * &b).to_complex();
            prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
            prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
        }

        #[test]
        fn conjugation_is_involutive_automorphism(a in arb(15), b in arb(15)) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }
}
