//! Elements of the restricted quantum group `U` and its extension `D`, and of
//! their tensor powers.
//!
//! Both algebras are generated by `E`, `F` and a grouplike `G` of order `cd`
//! (`G = K`, `cd = 2p` for `U`; `G = k`, `cd = 4p` for `D`) subject to
//! `G E G⁻¹ = ζ_cd² E`, `G F G⁻¹ = ζ_cd⁻² F`, `E^p = F^p = 0` and
//! `[E, F] = (G^h − G^{−h}) / (q − q⁻¹)` with `h = 1` for `U`, `h = 2` for `D`.
//! Coproducts are `Δ(E) = 1⊗E + E⊗G^h`, `Δ(F) = G^{−h}⊗F + F⊗1`, `Δ(G) = G⊗G`.
//!
//! Elements are stored in the basis `E^a F^b π_λ`, where `π_λ` is the spectral
//! idempotent of `G` with `G π_λ = ζ_cd^λ π_λ`. In that basis a product of two
//! basis vectors has at most `p` terms, which keeps products and state sums
//! sparse. The monomial basis `E^a F^b G^c` is available through
//! [`Element::to_pbw`] and [`Element::from_pbw`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use collections::{FxHashMap, Key};
use serde_json::{json, Value};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::scalars::{CycloScalar, Scalars};

pub(crate) mod collections {
    pub type FxHashMap<K, V> = rustc_hash::FxHashMap<K, V>;
    pub type Key = smallvec::SmallVec<[u32; 4]>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    /// `U`, dimension `2p³`.
    Restricted,
    /// `D ⊃ U`, dimension `4p³`, carrying the R-matrix.
    Double,
}

impl AlgebraKind {
    fn cartan_order(self, p: u32) -> u32 {
        match self {
            AlgebraKind::Restricted => 2 * p,
            AlgebraKind::Double => 4 * p,
        }
    }

    fn twist(self) -> u32 {
        match self {
            AlgebraKind::Restricted => 1,
            AlgebraKind::Double => 2,
        }
    }

    fn symbols(self) -> [&'static str; 3] {
        match self {
            AlgebraKind::Restricted => ["E", "F", "K"],
            AlgebraKind::Double => ["e", "phi", "k"],
        }
    }
}

/// A PBW monomial `E^e F^f G^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e: u32,
    pub f: u32,
    pub k: u32,
}

impl Monomial {
    pub fn new(e: u32, f: u32, k: u32) -> Self {
        Monomial { e, f, k }
    }
}

/// Structure constants for one algebra at one level.
pub struct Algebra {
    kind: AlgebraKind,
    p: u32,
    cd: u32,
    h: u32,
    sc: Scalars,
    zeta: Vec<CycloScalar>,
    /// `F^b E^a = Σ_t E^{a−t} F^{b−t} V_t(G)`; entry `[b][a][t][ν]` is `V_t(ζ^ν)`.
    fe: Vec<Vec<Vec<Vec<CycloScalar>>>>,
    /// Gaussian binomials in `q²`.
    binom: Vec<Vec<CycloScalar>>,
    antipode: OnceLock<Vec<Element>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.p == other.p
    }
}
impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={})", self.name(), self.p)
    }
}

fn registry() -> &'static Mutex<BTreeMap<(AlgebraKind, u32), &'static Algebra>> {
    static REG: OnceLock<Mutex<BTreeMap<(AlgebraKind, u32), &'static Algebra>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(BTreeMap::new()))
}

impl Algebra {
    pub fn get(kind: AlgebraKind, p: u32) -> Result<&'static Algebra> {
        let sc = Scalars::new(p)?;
        let mut reg = registry().lock().expect("algebra registry poisoned");
        if let Some(a) = reg.get(&(kind, p)) {
            return Ok(a);
        }
        let alg: &'static Algebra = Box::leak(Box::new(Self::build(kind, sc)));
        reg.insert((kind, p), alg);
        Ok(alg)
    }

    pub fn restricted(p: u32) -> Result<&'static Algebra> {
        Self::get(AlgebraKind::Restricted, p)
    }

    pub fn double(p: u32) -> Result<&'static Algebra> {
        Self::get(AlgebraKind::Double, p)
    }

    fn build(kind: AlgebraKind, sc: Scalars) -> Self {
        let p = sc.p();
        let cd = kind.cartan_order(p);
        let h = kind.twist();
        let field = sc.field();
        let zeta: Vec<CycloScalar> = (0..cd).map(|k| field.root_of_unity(cd, k as i64)).collect();
        let zp = |k: i64| zeta[k.rem_euclid(cd as i64) as usize].clone();
        let qd_inv = sc.q_diff().inverse().expect("q − q⁻¹ is a unit");
        // [E^a, F] = E^{a−1} P_a(G), P_a(ζ^ν) = Σ_{j<a} (ζ^{h(ν+2j)} − ζ^{−h(ν+2j)})/(q−q⁻¹)
        let comm: Vec<Vec<CycloScalar>> = (0..p)
            .map(|a| {
                (0..cd)
                    .map(|nu| {
                        (0..a as i64).fold(sc.zero(), |acc, j| {
                            let x = h as i64 * (nu as i64 + 2 * j);
                            acc + (zp(x) - zp(-x)) * &qd_inv
                        })
                    })
                    .collect()
            })
            .collect();
        let ones = vec![sc.one(); cd as usize];
        let mut fe: Vec<Vec<Vec<Vec<CycloScalar>>>> = vec![vec![vec![]; p as usize]; p as usize];
        for a in 0..p as usize {
            fe[0][a] = vec![ones.clone()];
        }
        for b in 1..p as usize {
            fe[b][0] = vec![ones.clone()];
            for a in 1..p as usize {
                let mut terms = Vec::with_capacity(a.min(b) + 1);
                for t in 0..=a.min(b) {
                    let vals: Vec<CycloScalar> = (0..cd as i64)
                        .map(|nu| {
                            let mut v = sc.zero();
                            if let Some(prev) = fe[b - 1][a].get(t) {
                                v += &prev[(nu - 2).rem_euclid(cd as i64) as usize];
                            }
                            if t > 0 {
                                if let Some(prev) = fe[b - 1][a - 1].get(t - 1) {
                                    v -= &(&prev[nu as usize] * &comm[a][nu as usize]);
                                }
                            }
                            v
                        })
                        .collect();
                    terms.push(vals);
                }
                fe[b][a] = terms;
            }
        }
        let omega = sc.q_pow(2);
        let omega_pow = |k: u32| omega.pow(k as i64);
        let binom = (0..p)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        (1..=k).fold(sc.one(), |acc, i| {
                            acc * (sc.one() - omega_pow(n - k + i)) / (sc.one() - omega_pow(i))
                        })
                    })
                    .collect()
            })
            .collect();
        Algebra { kind, p, cd, h, sc, zeta, fe, binom, antipode: OnceLock::new() }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn scalars(&self) -> &Scalars {
        &self.sc
    }

    /// Order of the grouplike generator.
    pub fn cartan_order(&self) -> u32 {
        self.cd
    }

    /// Exponent `h` in `Δ(E) = 1⊗E + E⊗G^h`.
    pub fn twist(&self) -> u32 {
        self.h
    }

    pub fn dim(&self) -> usize {
        (self.p * self.p * self.cd) as usize
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AlgebraKind::Restricted => "U",
            AlgebraKind::Double => "D",
        }
    }

    pub fn symbols(&self) -> [&'static str; 3] {
        self.kind.symbols()
    }

    /// `ζ_cd^k`.
    pub fn zeta(&self, k: i64) -> &CycloScalar {
        &self.zeta[k.rem_euclid(self.cd as i64) as usize]
    }

    pub fn wrap(&self, w: i64) -> u32 {
        w.rem_euclid(self.cd as i64) as u32
    }

    pub fn index(&self, a: u32, b: u32, lambda: u32) -> u32 {
        debug_assert!(a < self.p && b < self.p && lambda < self.cd);
        (a * self.p + b) * self.cd + lambda
    }

    pub fn split(&self, i: u32) -> (u32, u32, u32) {
        let lambda = i % self.cd;
        let ab = i / self.cd;
        (ab / self.p, ab % self.p, lambda)
    }

    /// Eigenvalue exponent of `G` acting from the right on a basis vector.
    pub fn right_weight(&self, i: u32) -> u32 {
        i % self.cd
    }

    /// Eigenvalue exponent of `G` acting from the left on a basis vector.
    pub fn left_weight(&self, i: u32) -> u32 {
        let (a, b, l) = self.split(i);
        self.wrap(l as i64 + 2 * a as i64 - 2 * b as i64)
    }

    pub fn gaussian_binomial(&self, n: u32, k: u32) -> &CycloScalar {
        &self.binom[n as usize][k as usize]
    }

    /// Product of two basis vectors as `(index, coefficient)` pairs.
    pub fn mul_basis(&self, i: u32, j: u32) -> SmallVec<[(u32, &CycloScalar); 8]> {
        let mut out = SmallVec::new();
        if self.right_weight(i) != self.left_weight(j) {
            return out;
        }
        let (a, b, _) = self.split(i);
        let (a2, b2, mu) = self.split(j);
        let nu = self.wrap(mu as i64 - 2 * b2 as i64) as usize;
        for (t, vals) in self.fe[b as usize][a2 as usize].iter().enumerate() {
            let t = t as u32;
            let (ea, fb) = (a + a2 - t, b - t + b2);
            if ea >= self.p || fb >= self.p {
                continue;
            }
            let c = &vals[nu];
            if !c.is_zero() {
                out.push((self.index(ea, fb, mu), c));
            }
        }
        out
    }

    pub fn zero(&'static self) -> Element {
        Element { alg: self, terms: BTreeMap::new() }
    }

    pub fn one(&'static self) -> Element {
        self.cartan_power(0)
    }

    pub fn basis(&'static self, i: u32) -> Element {
        let mut terms = BTreeMap::new();
        terms.insert(i, self.sc.one());
        Element { alg: self, terms }
    }

    /// `π_λ`.
    pub fn weight_projector(&'static self, lambda: i64) -> Element {
        self.basis(self.index(0, 0, self.wrap(lambda)))
    }

    /// `G^c = Σ_λ ζ^{cλ} π_λ`.
    pub fn cartan_power(&'static self, c: i64) -> Element {
        let terms = (0..self.cd).map(|l| (l, self.zeta(c * l as i64).clone())).collect();
        Element { alg: self, terms }
    }

    /// `E^a F^b G^c`.
    pub fn monomial(&'static self, a: u32, b: u32, c: i64) -> Element {
        if a >= self.p || b >= self.p {
            return self.zero();
        }
        let terms = (0..self.cd).map(|l| (self.index(a, b, l), self.zeta(c * l as i64).clone())).collect();
        Element { alg: self, terms }
    }

    pub fn e(&'static self) -> Element {
        self.monomial(1, 0, 0)
    }

    pub fn f(&'static self) -> Element {
        self.monomial(0, 1, 0)
    }

    pub fn k(&'static self) -> Element {
        self.cartan_power(1)
    }

    pub fn scalar(&'static self, c: CycloScalar) -> Element {
        self.one().scale(&c)
    }

    /// The PBW basis `E^a F^b G^c` in lexicographic order.
    pub fn pbw_basis(&'static self) -> Vec<(Monomial, Element)> {
        let mut out = Vec::with_capacity(self.dim());
        for a in 0..self.p {
            for b in 0..self.p {
                for c in 0..self.cd {
                    out.push((Monomial::new(a, b, c), self.monomial(a, b, c as i64)));
                }
            }
        }
        out
    }

    fn antipode_table(&'static self) -> &'static Vec<Element> {
        self.antipode.get_or_init(|| {
            let h = self.h as i64;
            let se = -(self.e() * self.cartan_power(-h));
            let sf = -(self.cartan_power(h) * self.f());
            let mut se_pow = vec![self.one()];
            let mut sf_pow = vec![self.one()];
            for _ in 1..self.p {
                se_pow.push(se_pow.last().unwrap() * &se);
                sf_pow.push(sf_pow.last().unwrap() * &sf);
            }
            (0..self.dim() as u32)
                .map(|i| {
                    let (a, b, l) = self.split(i);
                    self.weight_projector(-(l as i64)) * &sf_pow[b as usize] * &se_pow[a as usize]
                })
                .collect()
        })
    }

    fn coproduct_basis(&'static self, i: u32, out: &mut FxHashMap<Key, CycloScalar>, coeff: &CycloScalar) {
        let (a, b, lambda) = self.split(i);
        let h = self.h as i64;
        for k in 0..=a {
            for l in 0..=b {
                let bin = self.gaussian_binomial(a, k) * self.gaussian_binomial(b, l);
                let base = coeff * &bin;
                for alpha in 0..self.cd {
                    let beta = self.wrap(lambda as i64 - alpha as i64);
                    let (ak, bl) = ((a - k) as i64, (b - l) as i64);
                    let exp = -h * bl * alpha as i64 + h * ak * beta as i64 - 2 * h * ak * bl;
                    let c = &base * self.zeta(exp);
                    let key: Key = smallvec![self.index(a - k, l, alpha), self.index(k, b - l, beta)];
                    add_into(out, key, &c);
                }
            }
        }
    }
}

pub(crate) fn add_into<K: std::hash::Hash + Eq>(map: &mut FxHashMap<K, CycloScalar>, key: K, c: &CycloScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}

fn add_into_btree(map: &mut BTreeMap<u32, CycloScalar>, key: u32, c: &CycloScalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}

/// An element of `U` or `D`.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    alg: &'static Algebra,
    terms: BTreeMap<u32, CycloScalar>,
}

fn same_algebra(a: &'static Algebra, b: &'static Algebra) -> bool {
    std::ptr::eq(a, b)
}

impl Element {
    pub fn algebra(&self) -> &'static Algebra {
        self.alg
    }

    pub fn from_terms(alg: &'static Algebra, terms: impl IntoIterator<Item = (u32, CycloScalar)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in terms {
            add_into_btree(&mut map, i, &c);
        }
        map.retain(|_, c| !c.is_zero());
        Element { alg, terms: map }
    }

    /// Coefficients in the `E^a F^b π_λ` basis.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &CycloScalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: u32) -> CycloScalar {
        self.terms.get(&i).cloned().unwrap_or_else(|| self.alg.sc.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &CycloScalar) -> Element {
        if c.is_zero() {
            return self.alg.zero();
        }
        Element { alg: self.alg, terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    fn combine(&self, other: &Element, negate: bool) -> Element {
        assert!(same_algebra(self.alg, other.alg), "algebra mismatch");
        let mut terms = self.terms.clone();
        for (i, c) in &other.terms {
            if negate {
                add_into_btree(&mut terms, *i, &-c);
            } else {
                add_into_btree(&mut terms, *i, c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Element { alg: self.alg, terms }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        if !same_algebra(self.alg, other.alg) {
            return Err(Error::AlgebraMismatch(format!("{:?} vs {:?}", self.alg, other.alg)));
        }
        Ok(self.mul_ref(other))
    }

    fn mul_ref(&self, other: &Element) -> Element {
        let alg = self.alg;
        // group the right factor by left weight so only matching pairs meet
        let mut by_weight: Vec<Vec<(u32, &CycloScalar)>> = vec![vec![]; alg.cd as usize];
        for (j, c) in &other.terms {
            by_weight[alg.left_weight(*j) as usize].push((*j, c));
        }
        let mut acc: FxHashMap<u32, CycloScalar> = FxHashMap::default();
        for (i, x) in &self.terms {
            for (j, y) in &by_weight[alg.right_weight(*i) as usize] {
                let xy = x * *y;
                for (k, s) in alg.mul_basis(*i, *j) {
                    add_into(&mut acc, k, &(&xy * s));
                }
            }
        }
        Element::from_terms(alg, acc)
    }

    pub fn pow(&self, n: u32) -> Element {
        (0..n).fold(self.alg.one(), |acc, _| &acc * self)
    }

    pub fn commutator(&self, other: &Element) -> Element {
        self * other - other * self
    }

    pub fn counit(&self) -> CycloScalar {
        self.coeff(self.alg.index(0, 0, 0))
    }

    pub fn antipode(&self) -> Element {
        let table = self.alg.antipode_table();
        let mut acc = BTreeMap::new();
        for (i, c) in &self.terms {
            for (j, s) in &table[*i as usize].terms {
                add_into_btree(&mut acc, *j, &(c * s));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Element { alg: self.alg, terms: acc }
    }

    pub fn coproduct(&self) -> Tensor {
        let mut acc = FxHashMap::default();
        for (i, c) in &self.terms {
            self.alg.coproduct_basis(*i, &mut acc, c);
        }
        Tensor::from_map(self.alg, 2, acc)
    }

    /// `Δ^{[n]}`: the `n`-fold iterated coproduct (`n = 1` is the identity).
    pub fn iterated_coproduct(&self, n: usize) -> Tensor {
        assert!(n >= 1);
        let mut t = Tensor::from_element(self);
        for _ in 1..n {
            let last = t.arity - 1;
            t = t.coproduct_slot(last);
        }
        t
    }

    /// Coordinates in the monomial basis `E^a F^b G^c`.
    pub fn to_pbw(&self) -> BTreeMap<Monomial, CycloScalar> {
        let alg = self.alg;
        let inv_cd = alg.sc.rational(1, alg.cd as i64);
        let mut acc: BTreeMap<Monomial, CycloScalar> = BTreeMap::new();
        for (i, x) in &self.terms {
            let (a, b, l) = alg.split(*i);
            let xs = x * &inv_cd;
            for c in 0..alg.cd {
                let v = &xs * alg.zeta(-(l as i64) * c as i64);
                let e = acc.entry(Monomial::new(a, b, c)).or_insert_with(|| alg.sc.zero());
                *e += &v;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    pub fn from_pbw(alg: &'static Algebra, terms: impl IntoIterator<Item = (Monomial, CycloScalar)>) -> Element {
        let mut acc = FxHashMap::default();
        for (m, y) in terms {
            if m.e >= alg.p || m.f >= alg.p {
                continue;
            }
            for l in 0..alg.cd {
                add_into(&mut acc, alg.index(m.e, m.f, l), &(&y * alg.zeta(m.k as i64 * l as i64)));
            }
        }
        Element::from_terms(alg, acc)
    }

    /// True for a `D` element lying in the image of `U`.
    pub fn is_in_restricted(&self) -> bool {
        let alg = self.alg;
        if alg.kind == AlgebraKind::Restricted {
            return true;
        }
        let half = alg.cd / 2;
        self.terms.iter().all(|(i, c)| {
            let (a, b, l) = alg.split(*i);
            self.terms.get(&alg.index(a, b, (l + half) % alg.cd)) == Some(c)
        })
    }

    /// Image under `E ↦ e, F ↦ φ, K ↦ k²`.
    pub fn embed(&self) -> Result<Element> {
        let alg = self.alg;
        if alg.kind == AlgebraKind::Double {
            return Ok(self.clone());
        }
        let d = Algebra::double(alg.p)?;
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            let (a, b, l) = alg.split(*i);
            terms.insert(d.index(a, b, l), c.clone());
            terms.insert(d.index(a, b, l + alg.cd), c.clone());
        }
        Ok(Element { alg: d, terms })
    }

    /// Inverse of [`Element::embed`]; fails when an odd power of `k` occurs.
    pub fn to_restricted(&self) -> Result<Element> {
        let alg = self.alg;
        if alg.kind == AlgebraKind::Restricted {
            return Ok(self.clone());
        }
        if !self.is_in_restricted() {
            return Err(Error::NotInSubalgebra(format!("{} terms with odd k-exponent", self.len())));
        }
        let u = Algebra::restricted(alg.p)?;
        let terms = self
            .terms
            .iter()
            .filter_map(|(i, c)| {
                let (a, b, l) = alg.split(*i);
                (l < u.cd).then(|| (u.index(a, b, l), c.clone()))
            })
            .collect();
        Ok(Element { alg: u, terms })
    }

    pub fn to_json(&self) -> Value {
        let [se, sf, sk] = self.alg.symbols();
        let items: Vec<Value> = self
            .to_pbw()
            .iter()
            .map(|(m, c)| json!({ "monomial": format!("{se}^{} {sf}^{} {sk}^{}", m.e, m.f, m.k), "scalar": c.to_json() }))
            .collect();
        json!({ "algebra": self.alg.name(), "p": self.alg.p, "terms": items })
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [se, sf, sk] = self.alg.symbols();
        let pbw = self.to_pbw();
        if pbw.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in pbw.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {se}^{} {sf}^{} {sk}^{}", m.e, m.f, m.k)?;
        }
        Ok(())
    }
}

macro_rules! elem_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&Element> for &Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                assert!(same_algebra(self.alg, rhs.alg), "algebra mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<Element> for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&Element> for Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                (&self).$m(rhs)
            }
        }
        impl std::ops::$tr<Element> for &Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                self.$m(&rhs)
            }
        }
    };
}

elem_binop!(Add, add, |a: &Element, b: &Element| a.combine(b, false));
elem_binop!(Sub, sub, |a: &Element, b: &Element| a.combine(b, true));
elem_binop!(Mul, mul, |a: &Element, b: &Element| a.mul_ref(b));

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { alg: self.alg, terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect() }
    }
}
impl std::ops::Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

/// An element of the tensor power `A^{⊗m}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    alg: &'static Algebra,
    arity: usize,
    terms: FxHashMap<Key, CycloScalar>,
}

impl Tensor {
    pub fn from_map(alg: &'static Algebra, arity: usize, mut terms: FxHashMap<Key, CycloScalar>) -> Tensor {
        terms.retain(|_, c| !c.is_zero());
        debug_assert!(terms.keys().all(|k| k.len() == arity));
        Tensor { alg, arity, terms }
    }

    pub fn zero(alg: &'static Algebra, arity: usize) -> Tensor {
        Tensor { alg, arity, terms: FxHashMap::default() }
    }

    pub fn one(alg: &'static Algebra, arity: usize) -> Tensor {
        Tensor::pure(&vec![alg.one(); arity])
    }

    pub fn from_element(x: &Element) -> Tensor {
        let terms = x.terms.iter().map(|(i, c)| (smallvec![*i], c.clone())).collect();
        Tensor { alg: x.alg, arity: 1, terms }
    }

    /// `x_1 ⊗ … ⊗ x_m`.
    pub fn pure(slots: &[Element]) -> Tensor {
        let alg = slots[0].alg;
        let mut terms: FxHashMap<Key, CycloScalar> = FxHashMap::default();
        terms.insert(Key::new(), alg.sc.one());
        for s in slots {
            assert!(same_algebra(alg, s.alg), "algebra mismatch");
            let mut next = FxHashMap::default();
            for (k, c) in &terms {
                for (i, x) in &s.terms {
                    let mut key = k.clone();
                    key.push(*i);
                    next.insert(key, c * x);
                }
            }
            terms = next;
        }
        Tensor::from_map(alg, slots.len(), terms)
    }

    pub fn algebra(&self) -> &'static Algebra {
        self.alg
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &CycloScalar)> {
        self.terms.iter()
    }

    /// Terms in a deterministic order.
    pub fn sorted_terms(&self) -> Vec<(&Key, &CycloScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn scale(&self, c: &CycloScalar) -> Tensor {
        let terms = self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect();
        Tensor::from_map(self.alg, self.arity, terms)
    }

    fn combine(&self, other: &Tensor, negate: bool) -> Tensor {
        assert!(same_algebra(self.alg, other.alg), "algebra mismatch");
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            if negate {
                add_into(&mut terms, k.clone(), &-c);
            } else {
                add_into(&mut terms, k.clone(), c);
            }
        }
        Tensor::from_map(self.alg, self.arity, terms)
    }

    pub fn try_mul(&self, other: &Tensor) -> Result<Tensor> {
        if !same_algebra(self.alg, other.alg) {
            return Err(Error::AlgebraMismatch(format!("{:?} vs {:?}", self.alg, other.alg)));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        Ok(self.mul_ref(other))
    }

    fn mul_ref(&self, other: &Tensor) -> Tensor {
        let alg = self.alg;
        let mut index: FxHashMap<Key, Vec<(&Key, &CycloScalar)>> = FxHashMap::default();
        for (k, c) in &other.terms {
            let w: Key = k.iter().map(|&i| alg.left_weight(i)).collect();
            index.entry(w).or_default().push((k, c));
        }
        let mut acc: FxHashMap<Key, CycloScalar> = FxHashMap::default();
        let mut w: Key = smallvec![0; self.arity];
        for (kx, x) in &self.terms {
            for (s, &i) in kx.iter().enumerate() {
                w[s] = alg.right_weight(i);
            }
            let Some(matches) = index.get(&w) else { continue };
            for (ky, y) in matches {
                let xy = x * *y;
                slotwise_product(alg, kx, ky, &xy, &mut acc);
            }
        }
        Tensor::from_map(alg, self.arity, acc)
    }

    /// Applies a linear map on one slot, given on basis vectors.
    pub fn map_slot(&self, slot: usize, f: impl Fn(u32) -> Element) -> Tensor {
        let mut cache: FxHashMap<u32, Element> = FxHashMap::default();
        let mut acc = FxHashMap::default();
        let mut alg_out = None;
        for (k, c) in &self.terms {
            let img = cache.entry(k[slot]).or_insert_with(|| f(k[slot]));
            alg_out.get_or_insert(img.alg);
            for (j, s) in &img.terms {
                let mut key = k.clone();
                key[slot] = *j;
                add_into(&mut acc, key, &(c * s));
            }
        }
        Tensor::from_map(alg_out.unwrap_or(self.alg), self.arity, acc)
    }

    pub fn antipode_slot(&self, slot: usize) -> Tensor {
        let alg = self.alg;
        self.map_slot(slot, |i| alg.basis(i).antipode())
    }

    /// Applies `Δ` to one slot, raising the arity by one.
    pub fn coproduct_slot(&self, slot: usize) -> Tensor {
        let alg = self.alg;
        let mut cache: FxHashMap<u32, FxHashMap<Key, CycloScalar>> = FxHashMap::default();
        let mut acc = FxHashMap::default();
        for (k, c) in &self.terms {
            let d = cache.entry(k[slot]).or_insert_with(|| {
                let mut m = FxHashMap::default();
                alg.coproduct_basis(k[slot], &mut m, &alg.sc.one());
                m
            });
            for (pair, s) in d.iter() {
                let mut key: Key = SmallVec::with_capacity(self.arity + 1);
                key.extend_from_slice(&k[..slot]);
                key.extend_from_slice(pair);
                key.extend_from_slice(&k[slot + 1..]);
                add_into(&mut acc, key, &(c * s));
            }
        }
        Tensor::from_map(alg, self.arity + 1, acc)
    }

    /// Contracts one slot with a linear functional, lowering the arity.
    pub fn apply_functional(&self, slot: usize, f: impl Fn(u32) -> CycloScalar) -> Tensor {
        let mut cache: FxHashMap<u32, CycloScalar> = FxHashMap::default();
        let mut acc = FxHashMap::default();
        for (k, c) in &self.terms {
            let v = cache.entry(k[slot]).or_insert_with(|| f(k[slot]));
            if v.is_zero() {
                continue;
            }
            let mut key = k.clone();
            key.remove(slot);
            add_into(&mut acc, key, &(c * &*v));
        }
        Tensor::from_map(self.alg, self.arity - 1, acc)
    }

    pub fn counit_slot(&self, slot: usize) -> Tensor {
        let alg = self.alg;
        let unit = alg.index(0, 0, 0);
        self.apply_functional(slot, |i| if i == unit { alg.sc.one() } else { alg.sc.zero() })
    }

    /// Reorders slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.arity);
        let terms = self.terms.iter().map(|(k, c)| (perm.iter().map(|&s| k[s]).collect(), c.clone())).collect();
        Tensor { alg: self.alg, arity: self.arity, terms }
    }

    /// Places this tensor into slots `positions` of a larger tensor with `1` elsewhere.
    pub fn inflate(&self, arity: usize, positions: &[usize]) -> Tensor {
        assert_eq!(positions.len(), self.arity);
        let alg = self.alg;
        let one = alg.one();
        let mut terms: FxHashMap<Key, CycloScalar> = FxHashMap::default();
        for (k, c) in &self.terms {
            let mut partial: Vec<(Key, CycloScalar)> = vec![(smallvec![0; arity], c.clone())];
            for s in 0..arity {
                if let Some(pos) = positions.iter().position(|&x| x == s) {
                    for (key, _) in partial.iter_mut() {
                        key[s] = k[pos];
                    }
                } else {
                    partial = partial
                        .into_iter()
                        .flat_map(|(key, v)| {
                            one.terms.iter().map(move |(i, x)| {
                                let mut kk = key.clone();
                                kk[s] = *i;
                                (kk, &v * x)
                            })
                        })
                        .collect();
                }
            }
            for (key, v) in partial {
                add_into(&mut terms, key, &v);
            }
        }
        Tensor::from_map(alg, arity, terms)
    }

    /// Multiplies the slots together in the given order (`order[0]` leftmost).
    pub fn multiply_slots(&self, order: &[usize]) -> Element {
        let alg = self.alg;
        let mut acc: FxHashMap<u32, CycloScalar> = FxHashMap::default();
        for (k, c) in &self.terms {
            let mut cur: SmallVec<[(u32, CycloScalar); 8]> = smallvec![(k[order[0]], c.clone())];
            for &s in &order[1..] {
                let mut next = SmallVec::new();
                for (i, x) in &cur {
                    for (j, y) in alg.mul_basis(*i, k[s]) {
                        next.push((j, x * y));
                    }
                }
                cur = next;
            }
            for (i, x) in cur {
                add_into(&mut acc, i, &x);
            }
        }
        Element::from_terms(alg, acc)
    }

    /// `x·self` where `x` occupies the given slots (and `1` the rest).
    pub fn left_multiply_at(&self, x: &Tensor, positions: &[usize]) -> Tensor {
        assert!(same_algebra(self.alg, x.alg), "algebra mismatch");
        assert_eq!(positions.len(), x.arity);
        let alg = self.alg;
        let mut acc: FxHashMap<Key, CycloScalar> = FxHashMap::default();
        for (ks, c) in &self.terms {
            'outer: for (kx, d) in &x.terms {
                for (s, &pos) in positions.iter().enumerate() {
                    if alg.right_weight(kx[s]) != alg.left_weight(ks[pos]) {
                        continue 'outer;
                    }
                }
                let mut partial: SmallVec<[(Key, CycloScalar); 4]> = smallvec![(ks.clone(), c * d)];
                for (s, &pos) in positions.iter().enumerate() {
                    let mut next = SmallVec::new();
                    for (key, v) in &partial {
                        for (j, y) in alg.mul_basis(kx[s], ks[pos]) {
                            let mut k2 = key.clone();
                            k2[pos] = j;
                            next.push((k2, v * y));
                        }
                    }
                    partial = next;
                }
                for (key, v) in partial {
                    add_into(&mut acc, key, &v);
                }
            }
        }
        Tensor::from_map(alg, self.arity, acc)
    }

    /// Multiplies each group of slots into one slot (`group[0]` leftmost);
    /// slot `i` of the result is the product of `groups[i]`.
    pub fn merge_slots(&self, groups: &[Vec<usize>]) -> Tensor {
        let alg = self.alg;
        let mut acc: FxHashMap<Key, CycloScalar> = FxHashMap::default();
        for (k, c) in &self.terms {
            let mut partial: Vec<(Key, CycloScalar)> = vec![(Key::new(), c.clone())];
            for g in groups {
                let mut next = Vec::new();
                for (key, v) in &partial {
                    let mut cur: SmallVec<[(u32, CycloScalar); 8]> = smallvec![(k[g[0]], v.clone())];
                    for &s in &g[1..] {
                        let mut n2 = SmallVec::new();
                        for (i, x) in &cur {
                            for (j, y) in alg.mul_basis(*i, k[s]) {
                                n2.push((j, x * y));
                            }
                        }
                        cur = n2;
                    }
                    for (i, x) in cur {
                        let mut k2 = key.clone();
                        k2.push(i);
                        next.push((k2, x));
                    }
                }
                partial = next;
            }
            for (key, v) in partial {
                add_into(&mut acc, key, &v);
            }
        }
        Tensor::from_map(alg, groups.len(), acc)
    }

    /// The coefficient of an arity-zero tensor.
    pub fn scalar_value(&self) -> CycloScalar {
        debug_assert_eq!(self.arity, 0);
        self.terms.get(&Key::new()).cloned().unwrap_or_else(|| self.alg.sc.zero())
    }

    pub fn is_in_restricted(&self) -> bool {
        if self.alg.kind == AlgebraKind::Restricted {
            return true;
        }
        let half = self.alg.cd / 2;
        let alg = self.alg;
        self.terms.iter().all(|(k, c)| {
            (0..self.arity).all(|s| {
                let mut k2 = k.clone();
                let (a, b, l) = alg.split(k[s]);
                k2[s] = alg.index(a, b, (l + half) % alg.cd);
                self.terms.get(&k2) == Some(c)
            })
        })
    }

    pub fn to_restricted(&self) -> Result<Tensor> {
        let alg = self.alg;
        if alg.kind == AlgebraKind::Restricted {
            return Ok(self.clone());
        }
        if !self.is_in_restricted() {
            return Err(Error::NotInSubalgebra(format!("tensor with {} terms", self.len())));
        }
        let u = Algebra::restricted(alg.p)?;
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let mut key = Key::new();
                for &i in k {
                    let (a, b, l) = alg.split(i);
                    if l >= u.cd {
                        return None;
                    }
                    key.push(u.index(a, b, l));
                }
                Some((key, c.clone()))
            })
            .collect();
        Ok(Tensor { alg: u, arity: self.arity, terms })
    }

    pub fn embed(&self) -> Result<Tensor> {
        let alg = self.alg;
        if alg.kind == AlgebraKind::Double {
            return Ok(self.clone());
        }
        let d = Algebra::double(alg.p)?;
        let mut terms = FxHashMap::default();
        for (k, c) in &self.terms {
            let mut keys: Vec<Key> = vec![Key::new()];
            for &i in k {
                let (a, b, l) = alg.split(i);
                keys = keys
                    .into_iter()
                    .flat_map(|key| {
                        [l, l + alg.cd].map(|ll| {
                            let mut kk = key.clone();
                            kk.push(d.index(a, b, ll));
                            kk
                        })
                    })
                    .collect();
            }
            for key in keys {
                terms.insert(key, c.clone());
            }
        }
        Ok(Tensor { alg: d, arity: self.arity, terms })
    }

    /// Coordinates in the monomial basis, slot by slot.
    pub fn to_pbw(&self) -> BTreeMap<Vec<Monomial>, CycloScalar> {
        let alg = self.alg;
        let mut cur: FxHashMap<Key, CycloScalar> = self.terms.clone();
        let inv_cd = alg.sc.rational(1, alg.cd as i64);
        for s in 0..self.arity {
            let mut next = FxHashMap::default();
            for (k, c) in &cur {
                let (a, b, l) = alg.split(k[s]);
                let cs = c * &inv_cd;
                for e in 0..alg.cd {
                    let mut key = k.clone();
                    key[s] = (a * alg.p + b) * alg.cd + e;
                    add_into(&mut next, key, &(&cs * alg.zeta(-(l as i64) * e as i64)));
                }
            }
            cur = next;
        }
        cur.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let ms = k.iter().map(|&i| {
                    let (a, b, e) = alg.split(i);
                    Monomial::new(a, b, e)
                });
                (ms.collect(), c)
            })
            .collect()
    }

    pub fn from_pbw(alg: &'static Algebra, arity: usize, terms: impl IntoIterator<Item = (Vec<Monomial>, CycloScalar)>) -> Tensor {
        let mut acc = FxHashMap::default();
        for (ms, c) in terms {
            assert_eq!(ms.len(), arity);
            let slots: Vec<Element> = ms.iter().map(|m| alg.monomial(m.e, m.f, m.k as i64)).collect();
            for (k, x) in Tensor::pure(&slots).terms {
                add_into(&mut acc, k, &(&x * &c));
            }
        }
        Tensor::from_map(alg, arity, acc)
    }

    pub fn to_json(&self) -> Value {
        let [se, sf, sk] = self.alg.symbols();
        let items: Vec<Value> = self
            .to_pbw()
            .iter()
            .map(|(ms, c)| {
                let names: Vec<String> = ms.iter().map(|m| format!("{se}^{} {sf}^{} {sk}^{}", m.e, m.f, m.k)).collect();
                json!({ "monomials": names, "scalar": c.to_json() })
            })
            .collect();
        json!({ "algebra": self.alg.name(), "p": self.alg.p, "arity": self.arity, "terms": items })
    }
}

pub(crate) fn slotwise_product(
    alg: &'static Algebra,
    kx: &[u32],
    ky: &[u32],
    coeff: &CycloScalar,
    acc: &mut FxHashMap<Key, CycloScalar>,
) {
    let mut partial: SmallVec<[(Key, CycloScalar); 8]> = smallvec![(Key::new(), coeff.clone())];
    for (i, j) in kx.iter().zip(ky) {
        let prods = alg.mul_basis(*i, *j);
        if prods.is_empty() {
            return;
        }
        let mut next = SmallVec::new();
        for (key, c) in &partial {
            for (k, s) in &prods {
                let mut kk = key.clone();
                kk.push(*k);
                next.push((kk, c * *s));
            }
        }
        partial = next;
    }
    for (k, c) in partial {
        add_into(acc, k, &c);
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({}^⊗{}, {} terms)", self.alg.name(), self.arity, self.len())
    }
}

macro_rules! tensor_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&Tensor> for &Tensor {
            type Output = Tensor;
            fn $m(self, rhs: &Tensor) -> Tensor {
                assert!(same_algebra(self.alg, rhs.alg), "algebra mismatch");
                assert_eq!(self.arity, rhs.arity, "arity mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<Tensor> for Tensor {
            type Output = Tensor;
            fn $m(self, rhs: Tensor) -> Tensor {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&Tensor> for Tensor {
            type Output = Tensor;
            fn $m(self, rhs: &Tensor) -> Tensor {
                (&self).$m(rhs)
            }
        }
        impl std::ops::$tr<Tensor> for &Tensor {
            type Output = Tensor;
            fn $m(self, rhs: Tensor) -> Tensor {
                self.$m(&rhs)
            }
        }
    };
}

tensor_binop!(Add, add, |a: &Tensor, b: &Tensor| a.combine(b, false));
tensor_binop!(Sub, sub, |a: &Tensor, b: &Tensor| a.combine(b, true));
tensor_binop!(Mul, mul, |a: &Tensor, b: &Tensor| a.mul_ref(b));

impl std::ops::Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(&-self.alg.sc.one())
    }
}

/// Coassociativity, counit, antipode and `S² = Ad_g` on every basis vector.
pub fn verify_hopf(alg: &'static Algebra) -> crate::report::Report {
    let mut rep = crate::report::Report::new(format!("Hopf axioms for {alg:?}"));
    let g = alg.cartan_power(alg.twist() as i64 * (alg.p() as i64 + 1));
    let g_inv = alg.cartan_power(-(alg.twist() as i64) * (alg.p() as i64 + 1));
    let (mut coassoc, mut counit, mut antipode, mut s2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (m, x) in alg.pbw_basis() {
        let d = x.coproduct();
        if d.coproduct_slot(0) != d.coproduct_slot(1) {
            coassoc.push(m);
        }
        let unit = Tensor::from_element(&x);
        if d.counit_slot(0) != unit || d.counit_slot(1) != unit {
            counit.push(m);
        }
        let eps = alg.scalar(x.counit());
        if d.antipode_slot(0).multiply_slots(&[0, 1]) != eps || d.antipode_slot(1).multiply_slots(&[0, 1]) != eps {
            antipode.push(m);
        }
        if x.antipode().antipode() != &(&g * &x) * &g_inv {
            s2.push(m);
        }
    }
    let n = alg.dim();
    for (name, bad) in [
        ("(Δ⊗id)Δ = (id⊗Δ)Δ", coassoc),
        ("(ε⊗id)Δ = id = (id⊗ε)Δ", counit),
        ("m(S⊗id)Δ = ε1 = m(id⊗S)Δ", antipode),
        ("S² = Ad_g", s2),
    ] {
        rep.check_with(format!("{name} on {n} basis elements"), bad.is_empty(), || format!("fails on {bad:?}"));
    }
    let gens = [alg.e(), alg.f(), alg.k()];
    let mut mult = true;
    for x in &gens {
        for y in &gens {
            mult &= (x * y).coproduct() == &x.coproduct() * &y.coproduct();
            mult &= (x * y).antipode() == y.antipode() * x.antipode();
        }
    }
    rep.check("Δ multiplicative and S anti-multiplicative on generators", mult);
    rep
}

/// Multiplication by rewriting with the defining relations one generator at a
/// time, in the monomial basis. Slow; used as an oracle for the fast product.
pub mod reference {
    use super::*;

    pub type Pbw = BTreeMap<Monomial, CycloScalar>;

    fn push(out: &mut Pbw, m: Monomial, c: CycloScalar) {
        if c.is_zero() {
            return;
        }
        let e = out.entry(m).or_insert_with(|| c.field().zero());
        *e += &c;
        if e.is_zero() {
            out.remove(&m);
        }
    }

    /// `G · x`.
    pub fn left_k(alg: &Algebra, x: &Pbw) -> Pbw {
        let mut out = Pbw::new();
        for (m, c) in x {
            let w = 2 * m.e as i64 - 2 * m.f as i64;
            let k = (m.k + 1) % alg.cd;
            push(&mut out, Monomial::new(m.e, m.f, k), c * alg.zeta(w));
        }
        out
    }

    /// `E · x`.
    pub fn left_e(alg: &Algebra, x: &Pbw) -> Pbw {
        let mut out = Pbw::new();
        for (m, c) in x {
            if m.e + 1 < alg.p {
                push(&mut out, Monomial::new(m.e + 1, m.f, m.k), c.clone());
            }
        }
        out
    }

    /// `F · x`, via `F E = E F − [E, F]`.
    pub fn left_f(alg: &Algebra, x: &Pbw) -> Pbw {
        let mut out = Pbw::new();
        for (m, c) in x {
            let single: Pbw = [(*m, c.clone())].into_iter().collect();
            for (mm, cc) in left_f_monomial(alg, &single) {
                push(&mut out, mm, cc);
            }
        }
        out
    }

    fn left_f_monomial(alg: &Algebra, x: &Pbw) -> Pbw {
        let (m, c) = x.iter().next().map(|(m, c)| (*m, c.clone())).expect("one term");
        if m.e == 0 {
            let mut out = Pbw::new();
            if m.f + 1 < alg.p {
                push(&mut out, Monomial::new(0, m.f + 1, m.k), c);
            }
            return out;
        }
        let rest: Pbw = [(Monomial::new(m.e - 1, m.f, m.k), c)].into_iter().collect();
        let mut out = left_e(alg, &left_f(alg, &rest));
        // − (G^h − G^{−h})/(q − q⁻¹) · rest
        let qd = alg.sc.q_diff().inverse().expect("unit");
        let mut up = rest.clone();
        for _ in 0..alg.h {
            up = left_k(alg, &up);
        }
        let mut down = rest;
        for _ in 0..alg.cd - alg.h {
            down = left_k(alg, &down);
        }
        for (mm, cc) in up {
            push(&mut out, mm, -(cc * &qd));
        }
        for (mm, cc) in down {
            push(&mut out, mm, cc * &qd);
        }
        out
    }

    /// `x · y` with each monomial of `x` applied to `y` generator by generator.
    pub fn multiply(alg: &Algebra, x: &Pbw, y: &Pbw) -> Pbw {
        let mut out = Pbw::new();
        for (m, c) in x {
            let mut cur = y.clone();
            for _ in 0..m.k {
                cur = left_k(alg, &cur);
            }
            for _ in 0..m.f {
                cur = left_f(alg, &cur);
            }
            for _ in 0..m.e {
                cur = left_e(alg, &cur);
            }
            for (mm, cc) in cur {
                push(&mut out, mm, cc * c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn algebras() -> Vec<&'static Algebra> {
        vec![
            Algebra::restricted(2).unwrap(),
            Algebra::double(2).unwrap(),
            Algebra::restricted(3).unwrap(),
            Algebra::double(3).unwrap(),
        ]
    }

    #[test]
    fn dimensions() {
        assert_eq!(Algebra::restricted(3).unwrap().dim(), 54);
        assert_eq!(Algebra::double(3).unwrap().dim(), 108);
        let u = Algebra::restricted(2).unwrap();
        assert_eq!(u.pbw_basis().len(), 16);
    }

    #[test]
    fn defining_relations() {
        for alg in algebras() {
            let sc = alg.scalars();
            let (e, f, k) = (alg.e(), alg.f(), alg.k());
            let kinv = alg.cartan_power(-1);
            assert!((&k * &kinv - alg.one()).is_zero());
            assert_eq!(&k * &e * &kinv, e.scale(alg.zeta(2)));
            assert_eq!(&k * &f * &kinv, f.scale(alg.zeta(-2)));
            let h = alg.twist() as i64;
            let rhs = (alg.cartan_power(h) - alg.cartan_power(-h)).scale(&sc.q_diff().inverse().unwrap());
            assert_eq!(e.commutator(&f), rhs);
            assert!(e.pow(alg.p()).is_zero());
            assert!(f.pow(alg.p()).is_zero());
            assert!(!e.pow(alg.p() - 1).is_zero());
            assert_eq!(k.pow(alg.cartan_order()), alg.one());
        }
    }

    #[test]
    fn fast_product_matches_relation_rewriting() {
        for alg in algebras() {
            let basis = alg.pbw_basis();
            let step = if alg.dim() > 60 { 7 } else { 1 };
            for (i, (mx, x)) in basis.iter().enumerate().step_by(step) {
                for (my, y) in basis.iter().skip(i % 3).step_by(step) {
                    let px: reference::Pbw = [(*mx, alg.scalars().one())].into_iter().collect();
                    let py: reference::Pbw = [(*my, alg.scalars().one())].into_iter().collect();
                    let slow = reference::multiply(alg, &px, &py);
                    assert_eq!((x * y).to_pbw(), slow, "{mx:?} * {my:?} in {alg:?}");
                }
            }
        }
    }

    #[test]
    fn pbw_round_trip() {
        let alg = Algebra::double(2).unwrap();
        for (m, x) in alg.pbw_basis() {
            let pbw = x.to_pbw();
            assert_eq!(pbw.len(), 1);
            assert!(pbw[&m].is_one());
            assert_eq!(Element::from_pbw(alg, pbw), x);
        }
    }

    #[test]
    fn pbw_examples() {
        let u = Algebra::restricted(3).unwrap();
        let sc = u.scalars();
        let lhs = u.e() * u.f() - u.f() * u.e();
        let rhs = (u.k() - u.cartan_power(-1)).scale(&sc.q_diff().inverse().unwrap());
        assert_eq!(lhs, rhs);
        assert!((u.e().pow(2) * u.e()).is_zero());
        assert_eq!(u.k() * u.cartan_power(5), u.one());
        assert_eq!(u.k().coproduct(), Tensor::pure(&[u.k(), u.k()]));
        assert_eq!(u.one().coproduct(), Tensor::one(u, 2));
        assert!(u.monomial(0, 0, 3).counit().is_one());
        assert!(u.monomial(1, 1, 1).counit().is_zero());
        assert_eq!(u.k().antipode(), u.cartan_power(-1));
        assert_eq!(u.one().antipode(), u.one());
    }

    #[test]
    fn generator_coproducts() {
        for alg in algebras() {
            let h = alg.twist() as i64;
            let de = Tensor::pure(&[alg.one(), alg.e()]) + Tensor::pure(&[alg.e(), alg.cartan_power(h)]);
            let df = Tensor::pure(&[alg.cartan_power(-h), alg.f()]) + Tensor::pure(&[alg.f(), alg.one()]);
            assert_eq!(alg.e().coproduct(), de);
            assert_eq!(alg.f().coproduct(), df);
        }
    }

    #[test]
    fn coproduct_is_multiplicative_on_generators() {
        for alg in algebras() {
            let gens = [alg.e(), alg.f(), alg.k()];
            for i in 0..alg.dim() as u32 {
                let x = alg.basis(i);
                let dx = x.coproduct();
                for g in &gens {
                    assert_eq!((g * &x).coproduct(), &g.coproduct() * &dx);
                }
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let u = Algebra::restricted(2).unwrap();
        let ef = Tensor::pure(&[u.e(), u.f()]);
        assert_eq!(&Tensor::one(u, 2) * &ef, ef);
        assert_eq!(Tensor::pure(&[u.e(), u.one()]) * Tensor::pure(&[u.one(), u.f()]), ef);
        assert_eq!(
            Tensor::pure(&[u.e(), u.one()]) * Tensor::pure(&[u.f(), u.one()]),
            Tensor::pure(&[u.e() * u.f(), u.one()])
        );
    }

    #[test]
    fn embedding() {
        let u = Algebra::restricted(3).unwrap();
        let d = Algebra::double(3).unwrap();
        let kk = u.k().embed().unwrap();
        assert_eq!(kk, d.cartan_power(2));
        assert!(!d.k().is_in_restricted());
        assert!(d.k().to_restricted().is_err());
        for (_, x) in u.pbw_basis().into_iter().step_by(5) {
            let y = x.embed().unwrap();
            assert!(y.is_in_restricted());
            assert_eq!(y.to_restricted().unwrap(), x);
        }
        let x = u.e() * u.k() + u.f();
        let y = u.f().pow(2) * u.e();
        assert_eq!((&x * &y).embed().unwrap(), x.embed().unwrap() * y.embed().unwrap());
        assert_eq!(x.coproduct().embed().unwrap(), x.embed().unwrap().coproduct());
    }

    #[test]
    fn slot_operations() {
        let u = Algebra::restricted(2).unwrap();
        let t = Tensor::pure(&[u.e(), u.f()]);
        assert_eq!(t.permute(&[1, 0]), Tensor::pure(&[u.f(), u.e()]));
        assert_eq!(t.multiply_slots(&[0, 1]), u.e() * u.f());
        assert_eq!(t.multiply_slots(&[1, 0]), u.f() * u.e());
        assert_eq!(t.inflate(3, &[0, 2]), Tensor::pure(&[u.e(), u.one(), u.f()]));
        assert_eq!(u.k().iterated_coproduct(3), Tensor::pure(&[u.k(), u.k(), u.k()]));
    }

    #[test]
    fn slot_multiplication_and_merging() {
        let alg = Algebra::double(2).unwrap();
        let mut rng = crate::sample::rng(5);
        let x: Vec<Element> = (0..5).map(|_| crate::sample::random_element(alg, &mut rng, 3)).collect();
        let state = Tensor::pure(&x[..3]);
        let pair = Tensor::pure(&x[3..]);
        let direct = &pair.inflate(3, &[2, 0]) * &state;
        assert_eq!(state.left_multiply_at(&pair, &[2, 0]), direct);
        let merged = state.merge_slots(&[vec![2, 0], vec![1]]);
        assert_eq!(merged, Tensor::pure(&[&x[2] * &x[0], x[1].clone()]));
        assert_eq!(Tensor::pure(&x[..1]).counit_slot(0).scalar_value(), x[0].counit());
    }

    #[test]
    fn hopf_axioms() {
        for alg in algebras() {
            let rep = verify_hopf(alg);
            assert!(rep.passed(), "{rep}");
        }
    }

    fn arb_element(alg: &'static Algebra) -> impl Strategy<Value = Element> {
        prop::collection::vec((0..alg.dim() as u32, -3i64..4), 1..5).prop_map(move |v| {
            Element::from_terms(alg, v.into_iter().map(|(i, c)| (i, alg.scalars().int(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn associativity(x in arb_element(Algebra::double(3).unwrap()),
                         y in arb_element(Algebra::double(3).unwrap()),
                         z in arb_element(Algebra::double(3).unwrap())) {
            prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn bialgebra(x in arb_element(Algebra::restricted(3).unwrap()),
                     y in arb_element(Algebra::restricted(3).unwrap())) {
            prop_assert_eq!((&x * &y).coproduct(), &x.coproduct() * &y.coproduct());
        }

        #[test]
        fn antipode_is_antimultiplicative(x in arb_element(Algebra::double(2).unwrap()),
                                          y in arb_element(Algebra::double(2).unwrap())) {
            prop_assert_eq!((&x * &y).antipode(), y.antipode() * x.antipode());
        }
    }
}
