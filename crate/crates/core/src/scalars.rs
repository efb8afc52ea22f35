//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are stored in the power basis of `Q[x]/(Φ_N(x))` with a single
//! common denominator. Values whose numerators and denominator fit in `i64`
//! use an inline fast path; anything larger is promoted to `BigInt`. The
//! representation is canonical (reduced modulo `Φ_N`, content coprime to the
//! denominator, denominator positive, small form whenever it fits), so
//! structural equality is value equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Static data for one cyclotomic field.
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    /// Coefficients of the monic `Φ_N`, lowest degree first.
    modulus: Vec<i64>,
    /// `x^k mod Φ_N` for `k` in `degree..2*degree`.
    fold: Vec<Vec<i64>>,
    /// `ζ^k` in the power basis for `k` in `0..N`.
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}
impl Eq for CyclotomicField {}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn registry() -> &'static Mutex<HashMap<u32, &'static CyclotomicField>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static CyclotomicField>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        return vec![0];
    }
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = poly_divexact(&poly, &cyclotomic_poly(d));
        }
    }
    poly
}

impl CyclotomicField {
    /// The field `Q(ζ_order)`; instances are interned and live for the process.
    pub fn get(order: u32) -> &'static CyclotomicField {
        assert!(order >= 1, "cyclotomic order must be positive");
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(f) = reg.get(&order) {
            return f;
        }
        let field: &'static CyclotomicField = Box::leak(Box::new(Self::build(order)));
        reg.insert(order, field);
        field
    }

    /// The field hosting every constant needed at level `p`: `N = lcm(8, 4p)`.
    pub fn for_level(p: u32) -> &'static CyclotomicField {
        Self::get(session_order(p))
    }

    fn build(order: u32) -> Self {
        let modulus = cyclotomic_poly(order);
        let degree = modulus.len() - 1;
        let reduce_once = |v: &mut Vec<i64>| {
            while v.len() > degree {
                let c = v.pop().unwrap();
                let base = v.len() - degree;
                if c != 0 {
                    for (j, m) in modulus[..degree].iter().enumerate() {
                        v[base + j] -= c * m;
                    }
                }
            }
        };
        let mut fold = Vec::with_capacity(degree);
        for k in degree..2 * degree {
            let mut v = vec![0i64; k + 1];
            v[k] = 1;
            reduce_once(&mut v);
            fold.push(v);
        }
        let mut powers = Vec::with_capacity(order as usize);
        for k in 0..order as usize {
            let mut v = vec![0i64; k.max(degree - 1) + 1];
            v[k] = 1;
            reduce_once(&mut v);
            v.resize(degree, 0);
            powers.push(v);
        }
        CyclotomicField { order, degree, modulus, fold, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `φ(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn zero(&'static self) -> CycloScalar {
        CycloScalar::from_small(self, SmallVec::from_elem(0, self.degree), 1)
    }

    pub fn one(&'static self) -> CycloScalar {
        self.int(1)
    }

    pub fn int(&'static self, n: i64) -> CycloScalar {
        let mut num = SmallVec::from_elem(0, self.degree);
        num[0] = n;
        CycloScalar::from_small(self, num, 1)
    }

    pub fn rational(&'static self, num: i64, den: i64) -> CycloScalar {
        assert!(den != 0, "zero denominator");
        let mut v: SmallVec<[i64; 16]> = SmallVec::from_elem(0, self.degree);
        v[0] = num;
        CycloScalar::normalize_small(self, v.into_iter().map(i128::from).collect(), den as i128)
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn root_of_unity_power(&'static self, k: i64) -> CycloScalar {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CycloScalar::from_small(self, self.powers[idx].iter().copied().collect(), 1)
    }

    /// `ζ_m^k`, for `m` dividing `N`.
    pub fn root_of_unity(&'static self, m: u32, k: i64) -> CycloScalar {
        assert!(self.order.is_multiple_of(m), "ζ_{m} does not live in Q(ζ_{})", self.order);
        self.root_of_unity_power(k * (self.order / m) as i64)
    }

    /// Builds an element from rational coordinates in the power basis.
    pub fn from_rationals(&'static self, coeffs: &[BigRational]) -> CycloScalar {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        num.resize(self.degree, BigInt::zero());
        CycloScalar::reduce_big(self, num, den)
    }
}

pub fn session_order(p: u32) -> u32 {
    let four_p = 4 * p;
    four_p.lcm(&8)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: SmallVec<[i64; 16]>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloScalar {
    field: &'static CyclotomicField,
    repr: Repr,
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.repr == other.repr
    }
}
impl Eq for CycloScalar {}

impl Hash for CycloScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.repr.hash(state);
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits(v: i128) -> bool {
    v >= i64::MIN as i128 && v <= i64::MAX as i128
}

impl CycloScalar {
    fn from_small(field: &'static CyclotomicField, num: SmallVec<[i64; 16]>, den: i64) -> Self {
        CycloScalar { field, repr: Repr::Small { num, den } }
    }

    fn normalize_small(field: &'static CyclotomicField, num: Vec<i128>, den: i128) -> Self {
        let mut g = den;
        for &c in &num {
            if g == 1 {
                break;
            }
            g = gcd_i128(g, c);
        }
        let mut g = g.abs();
        if den < 0 {
            g = -g;
        }
        if g == 0 {
            g = 1;
        }
        let den = den / g;
        if num.iter().all(|&c| c == 0) {
            return field.zero();
        }
        if fits(den) && num.iter().all(|&c| fits(c / g)) {
            let num = num.iter().map(|&c| (c / g) as i64).collect();
            CycloScalar::from_small(field, num, den as i64)
        } else {
            let num = num.iter().map(|&c| BigInt::from(c / g)).collect();
            CycloScalar::normalize_big(field, num, BigInt::from(den))
        }
    }

    fn normalize_big(field: &'static CyclotomicField, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(|c| c.is_zero()) {
            return field.zero();
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        let small = num.iter()
                .map(|c| c.to_i64())
                .collect::<Option<SmallVec<[i64; 16]>>>().zip(den.to_i64());
        match small {
            Some((n, d)) => CycloScalar::from_small(field, n, d),
            None => CycloScalar { field, repr: Repr::Big { num, den } },
        }
    }

    /// Reduces a numerator polynomial of any length modulo `Φ_N`.
    fn reduce_big(field: &'static CyclotomicField, mut num: Vec<BigInt>, den: BigInt) -> Self {
        let d = field.degree;
        while num.len() > d {
            let c = num.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let base = num.len() - d;
            for (j, m) in field.modulus[..d].iter().enumerate() {
                if *m != 0 {
                    num[base + j] -= &c * *m;
                }
            }
        }
        num.resize(d, BigInt::zero());
        Self::normalize_big(field, num, den)
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Small { num, den } => (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Coordinates in the power basis as exact rationals.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let (num, den) = self.big_parts();
        num.into_iter().map(|n| BigRational::new(n, den.clone())).collect()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.field, other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.field.order, right: other.field.order })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate_other: bool) -> Self {
        let sign: i128 = if negate_other { -1 } else { 1 };
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if other.is_zero() {
                return self.clone();
            }
            if self.is_zero() {
                return if negate_other { -other } else { other.clone() };
            }
            let (da, db) = (*da as i128, *db as i128);
            if da == db {
                let num: Vec<i128> = a.iter().zip(b).map(|(&x, &y)| x as i128 + sign * y as i128).collect();
                return Self::normalize_small(self.field, num, da);
            }
            let g = gcd_i128(da, db);
            let (fa, fb) = (db / g, da / g);
            if let Some(den) = da.checked_mul(fa) {
                let num: Option<Vec<i128>> = a
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| {
                        let l = (x as i128).checked_mul(fa)?;
                        let r = (y as i128).checked_mul(fb)?.checked_mul(sign)?;
                        l.checked_add(r)
                    })
                    .collect();
                if let Some(num) = num {
                    return Self::normalize_small(self.field, num, den);
                }
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let g = da.gcd(&db);
        let fa = &db / &g;
        let fb = &da / &g;
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| if negate_other { x * &fa - y * &fb } else { x * &fa + y * &fb })
            .collect();
        Self::normalize_big(self.field, num, da * fa)
    }

    fn mul_small(&self, a: &[i64], da: i64, b: &[i64], db: i64) -> Option<Self> {
        let d = self.field.degree;
        let mut prod = [0i128; 64];
        let prod = if 2 * d <= 64 { &mut prod[..2 * d] } else { return None };
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let t = (x as i128).checked_mul(y as i128)?;
                prod[i + j] = prod[i + j].checked_add(t)?;
            }
        }
        let mut out: Vec<i128> = prod[..d].to_vec();
        for k in d..2 * d - 1 {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &f) in self.field.fold[k - d].iter().enumerate().take(d) {
                if f != 0 {
                    out[j] = out[j].checked_add(c.checked_mul(f as i128)?)?;
                }
            }
        }
        let den = (da as i128).checked_mul(db as i128)?;
        Some(Self::normalize_small(self.field, out, den))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if let Some(r) = self.mul_small(a, *da, b, *db) {
                return r;
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::reduce_big(self.field, prod, da * db)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_N`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field;
        let to_q = |v: &[i64]| -> Vec<BigRational> { v.iter().map(|&c| BigRational::from_integer(c.into())).collect() };
        let mut r0 = to_q(&field.modulus);
        let mut r1 = self.coefficients();
        trim(&mut r1);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(&r0, &r1);
            let s_next = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s_next);
        }
        // r0 is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        let mut coeffs = inv;
        coeffs.resize(field.degree, BigRational::zero());
        let out = field.from_rationals(&coeffs);
        debug_assert!((self * &out).is_one());
        Ok(out)
    }

    pub fn pow(&self, mut e: i64) -> Self {
        let mut base = if e < 0 {
            e = -e;
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Galois automorphism `ζ ↦ ζ^{-1}`, i.e. complex conjugation.
    pub fn conj(&self) -> Self {
        let (num, den) = self.big_parts();
        let n = self.field.order as i64;
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); self.field.degree];
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (-(k as i64)).rem_euclid(n) as usize;
            for (j, &v) in self.field.powers[idx].iter().enumerate() {
                if v != 0 {
                    acc[j] += c * v;
                }
            }
        }
        Self::normalize_big(self.field, acc, den)
    }

    /// Complex embedding under `ζ_N ↦ e^{2πi/N}`.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.field.order as f64;
        let (num, den) = self.big_parts();
        let den = den.to_f64().unwrap_or(f64::INFINITY);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }

    /// Rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let coeffs = self.coefficients();
        if coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        let (num, den) = self.big_parts();
        let enc = |b: &BigInt| match b.to_i64() {
            Some(v) => json!(v),
            None => json!(b.to_string()),
        };
        let coeffs: Vec<Value> = num
            .iter()
            .map(|n| {
                let r = BigRational::new(n.clone(), den.clone());
                json!([enc(r.numer()), enc(r.denom())])
            })
            .collect();
        let (re, im) = self.approx();
        json!({ "N": self.field.order, "coeffs": coeffs, "approx": [re, im] })
    }

    pub fn from_json(field: &'static CyclotomicField, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Schema(format!("scalar: {m}"));
        let order = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N"))?;
        if order != field.order as u64 {
            return Err(Error::FieldMismatch { left: field.order, right: order as u32 });
        }
        let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
        if coeffs.len() != field.degree {
            return Err(bad("wrong number of coefficients"));
        }
        let parse = |x: &Value| -> Result<BigInt> {
            match x {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("non-integer coefficient")),
                Value::String(s) => s.parse::<BigInt>().map_err(|_| bad("bad integer string")),
                _ => Err(bad("coefficient must be a number or string")),
            }
        };
        let mut rats = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("coefficient must be [num, den]"))?;
            let den = parse(&pair[1])?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            rats.push(BigRational::new(parse(&pair[0])?, den));
        }
        Ok(field.from_rationals(&rats))
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: &CycloScalar) -> CycloScalar {
                assert!(
                    std::ptr::eq(self.field, rhs.field),
                    "cyclotomic order mismatch: {} vs {}",
                    self.field.order,
                    rhs.field.order
                );
                $body(self, rhs)
            }
        }
        impl $tr<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: &CycloScalar) -> CycloScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $m(self, rhs: CycloScalar) -> CycloScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycloScalar, b: &CycloScalar| a.add_unchecked(b, false));
binop!(Sub, sub, |a: &CycloScalar, b: &CycloScalar| a.add_unchecked(b, true));
binop!(Mul, mul, |a: &CycloScalar, b: &CycloScalar| a.mul_unchecked(b));
binop!(Div, div, |a: &CycloScalar, b: &CycloScalar| a.mul_unchecked(&b.inverse().expect("division by zero")));

impl AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&CycloScalar> for CycloScalar {
    fn sub_assign(&mut self, rhs: &CycloScalar) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&CycloScalar> for CycloScalar {
    fn mul_assign(&mut self, rhs: &CycloScalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        match &self.repr {
            Repr::Small { num, den } if num.iter().all(|&c| c != i64::MIN) => {
                CycloScalar::from_small(self.field, num.iter().map(|&c| -c).collect(), *den)
            }
            _ => {
                let (num, den) = self.big_parts();
                CycloScalar::normalize_big(self.field, num.into_iter().map(|c| -c).collect(), den)
            }
        }
    }
}
impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

/// The scalar constants at level `p`: `q = e^{iπ/p}`, its square root, the
/// quantum integers, and the square roots needed by the normalizations.
#[derive(Clone, Copy)]
pub struct Scalars {
    p: u32,
    field: &'static CyclotomicField,
}

impl fmt::Debug for Scalars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalars(p={}, N={})", self.p, self.field.order)
    }
}

impl Scalars {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidLevel(p));
        }
        Ok(Scalars { p, field: CyclotomicField::for_level(p) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn zero(&self) -> CycloScalar {
        self.field.zero()
    }

    pub fn one(&self) -> CycloScalar {
        self.field.one()
    }

    pub fn int(&self, n: i64) -> CycloScalar {
        self.field.int(n)
    }

    pub fn rational(&self, n: i64, d: i64) -> CycloScalar {
        self.field.rational(n, d)
    }

    pub fn root_of_unity_power(&self, k: i64) -> CycloScalar {
        self.field.root_of_unity_power(k)
    }

    /// `q^{k/2} = e^{iπk/2p}`.
    pub fn q_half_pow(&self, k: i64) -> CycloScalar {
        self.field.root_of_unity(4 * self.p, k)
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> CycloScalar {
        self.field.root_of_unity(2 * self.p, k)
    }

    pub fn q(&self) -> CycloScalar {
        self.q_pow(1)
    }

    pub fn i(&self) -> CycloScalar {
        self.field.root_of_unity(4, 1)
    }

    /// `(−1)^k`.
    pub fn sign(&self, k: i64) -> CycloScalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            -self.one()
        }
    }

    /// `q − q^{-1}`.
    pub fn q_diff(&self) -> CycloScalar {
        self.q_pow(1) - self.q_pow(-1)
    }

    /// `[m] = (q^m − q^{−m}) / (q − q^{−1})`.
    pub fn quantum_integer(&self, m: i64) -> CycloScalar {
        (self.q_pow(m) - self.q_pow(-m)) / self.q_diff()
    }

    /// `[m]! = [m][m−1]…[1]`, with `[0]! = 1`.
    pub fn quantum_factorial(&self, m: u32) -> CycloScalar {
        (1..=m as i64).fold(self.one(), |acc, k| acc * self.quantum_integer(k))
    }

    /// Positive real square root of a squarefree `n` dividing `2p`, built from
    /// quadratic Gauss sums and `√2 = ζ_8 + ζ_8^{-1}`.
    pub fn sqrt_positive(&self, n: u32) -> Result<CycloScalar> {
        if n == 0 || !(2 * self.p).is_multiple_of(n) || !is_squarefree(n) {
            return Err(Error::UnsupportedRadicand(n));
        }
        let odd = if n.is_multiple_of(2) { n / 2 } else { n };
        let mut root = if odd == 1 {
            self.one()
        } else {
            let gauss = (0..odd as i64)
                .map(|k| self.field.root_of_unity(odd, k * k))
                .fold(self.zero(), |acc, t| acc + t);
            if odd % 4 == 1 {
                gauss
            } else {
                -(self.i() * gauss)
            }
        };
        if n.is_multiple_of(2) {
            let z8 = self.field.root_of_unity(8, 1);
            let sqrt2 = &z8 + z8.inverse()?;
            root = root * sqrt2;
        }
        debug_assert!(&root * &root == self.int(n as i64));
        let (re, im) = root.approx();
        debug_assert!(re > 0.0 && im.abs() < 1e-9);
        Ok(root)
    }

    /// `√m` for a positive integer whose squarefree part divides `2p`.
    pub fn sqrt_int(&self, m: u32) -> Result<CycloScalar> {
        let (square, free) = split_square(m);
        Ok(self.int(square as i64) * self.sqrt_positive(free)?)
    }
}

fn is_squarefree(n: u32) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `m = s² t` with `t` squarefree; returns `(s, t)`.
fn split_square(m: u32) -> (u32, u32) {
    let (mut s, mut t) = (1, m);
    let mut d = 2;
    while d * d <= t {
        while t % (d * d) == 0 {
            t /= d * d;
            s *= d;
        }
        d += 1;
    }
    (s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(session_order(2), 8);
        assert_eq!(session_order(3), 24);
        assert_eq!(session_order(5), 40);
    }

    #[test]
    fn roots_of_unity() {
        let s = Scalars::new(2).unwrap();
        let z8 = s.field().root_of_unity(8, 1);
        assert_eq!(&z8 * &z8, s.i());
        assert_eq!(s.q_half_pow(1) * s.q_half_pow(1), s.q());
        assert!((s.q() + s.q_pow(-1)).is_zero());
        assert!(s.root_of_unity_power(0).is_one());
        assert!(s.root_of_unity_power(8).is_one());
        assert_eq!(s.root_of_unity_power(2), s.i());
    }

    #[test]
    fn inverse_and_units() {
        for p in [2, 3, 4, 5] {
            let s = Scalars::new(p).unwrap();
            assert!(s.one().inverse().unwrap().is_one());
            assert_eq!(s.q().inverse().unwrap(), s.q_pow(2 * p as i64 - 1));
            assert!(matches!(s.zero().inverse(), Err(Error::DivisionByZero)));
        }
    }

    #[test]
    fn quantum_numbers() {
        for p in [2u32, 3, 4, 5] {
            let s = Scalars::new(p).unwrap();
            assert!(s.quantum_integer(1).is_one());
            assert!(s.quantum_integer(p as i64).is_zero());
            assert!(s.quantum_factorial(0).is_one());
        }
        let s = Scalars::new(3).unwrap();
        let two = s.quantum_integer(2);
        assert_eq!(two, s.q() + s.q_pow(-1));
        assert!(close(two.approx(), (1.0, 0.0), 1e-12));
    }

    #[test]
    fn square_roots() {
        for p in [2u32, 3, 4, 5, 6] {
            let s = Scalars::new(p).unwrap();
            for n in 1..=2 * p {
                if (2 * p) % n != 0 || !is_squarefree(n) {
                    assert!(s.sqrt_positive(n).is_err());
                    continue;
                }
                let r = s.sqrt_positive(n).unwrap();
                assert_eq!(&r * &r, s.int(n as i64));
                let (re, im) = r.approx();
                assert!((re - (n as f64).sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
            }
        }
        let s = Scalars::new(2).unwrap();
        assert!(close(s.sqrt_positive(2).unwrap().approx(), (std::f64::consts::SQRT_2, 0.0), 1e-8));
        assert_eq!(s.sqrt_int(8).unwrap(), s.int(2) * s.sqrt_positive(2).unwrap());
    }

    #[test]
    fn approx_basics() {
        let s = Scalars::new(3).unwrap();
        assert!(close(s.one().approx(), (1.0, 0.0), 1e-15));
        assert!(close(s.i().approx(), (0.0, 1.0), 1e-15));
    }

    #[test]
    fn big_promotion_round_trips() {
        let s = Scalars::new(3).unwrap();
        let x = s.rational(i64::MAX, 3) + s.q();
        let y = &x * &x * &x;
        let back = &y / &(&x * &x);
        assert_eq!(back, x);
        let json = y.to_json();
        assert_eq!(CycloScalar::from_json(s.field(), &json).unwrap(), y);
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn mismatched_fields_panic() {
        let a = Scalars::new(2).unwrap().one();
        let b = Scalars::new(3).unwrap().one();
        let _ = a + b;
    }

    #[test]
    fn mismatched_fields_error() {
        let a = Scalars::new(2).unwrap().one();
        let b = Scalars::new(3).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch { .. })));
    }

    fn arb_scalar(field: &'static CyclotomicField) -> impl Strategy<Value = CycloScalar> {
        (prop::collection::vec(-20i64..20, field.degree()), 1i64..7).prop_map(move |(nums, den)| {
            nums.iter()
                .enumerate()
                .fold(field.zero(), |acc, (k, &c)| acc + field.rational(c, den) * field.root_of_unity_power(k as i64))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(CyclotomicField::for_level(3)),
                        b in arb_scalar(CyclotomicField::for_level(3)),
                        c in arb_scalar(CyclotomicField::for_level(3))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn approx_is_a_homomorphism(a in arb_scalar(CyclotomicField::for_level(5)),
                                    b in arb_scalar(CyclotomicField::for_level(5))) {
            let (ar, ai) = a.approx();
            let (br, bi) = b.approx();
            let (pr, pi) = (&a * &b).approx();
            prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
            prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
            let (sr, si) = (&a + &b).approx();
            prop_assert!((sr - ar - br).abs() < 1e-9 && (si - ai - bi).abs() < 1e-9);
        }

        #[test]
        fn canonical_form_is_idempotent(a in arb_scalar(CyclotomicField::for_level(3))) {
            let again = a.field().from_rationals(&a.coefficients());
            prop_assert_eq!(again, a);
        }
    }
}
