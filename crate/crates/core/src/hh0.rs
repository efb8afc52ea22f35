//! Trace classes `HH₀(U) = U/[U,U]`.

use std::fmt;

use crate::cache::{memoize, Registry};
use crate::center::{CenterData, WeightZero};
use crate::error::{Error, Result};
use crate::hopf::{Algebra, Element};
use crate::linalg::{Matrix, RowSpace};
use crate::repmod::{ModuleRep, Sign};
use crate::report::Report;
use crate::sample;
use crate::scalars::CycloScalar;

/// A basis vector of `HH₀(U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    /// `[f_k^±]`, the class of a primitive idempotent covering `X_k^±`.
    Idempotent { k: u32, sign: Sign },
    /// `[h_j] = [w_j^+ f_j^+]`.
    Nilpotent { j: u32 },
}

impl ClassLabel {
    pub fn parse(s: &str) -> Option<ClassLabel> {
        let s = s.replace('−', "-");
        let rest = s.strip_prefix('h')?;
        if let Some(k) = rest.strip_prefix('+') {
            return k.parse().ok().map(|k| ClassLabel::Idempotent { k, sign: Sign::Plus });
        }
        if let Some(k) = rest.strip_prefix('-') {
            return k.parse().ok().map(|k| ClassLabel::Idempotent { k, sign: Sign::Minus });
        }
        rest.parse().ok().map(|j| ClassLabel::Nilpotent { j })
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Idempotent { k, sign } => write!(f, "h{sign}{k}"),
            ClassLabel::Nilpotent { j } => write!(f, "h{j}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrimitiveIdempotent {
    pub element: Element,
    pub k: u32,
    pub sign: Sign,
    /// Central block and weight: the idempotent is `e_block π_weight`.
    pub block: u32,
    pub weight: u32,
}

#[derive(Clone, Debug)]
pub struct HH0Data {
    pub p: u32,
    w0: WeightZero,
    /// Weight-zero part of `[U,U]`; the rest of `[U,U]` is every vector of nonzero weight.
    commutators: RowSpace,
    free: Vec<usize>,
    inv: Matrix,
    /// `f_1^+..f_p^+, f_1^−..f_p^−, h_1..h_{p−1}` with their representatives.
    pub classes: Vec<(ClassLabel, Element)>,
    pub primitive: Vec<PrimitiveIdempotent>,
}

static HH0: Registry<HH0Data> = Registry::new();

/// The weight-zero part of `[U,U]`, spanned by `[E, x]` (`x` of weight −2)
/// and `[F, x]` (`x` of weight +2).
fn commutator_space(alg: &'static Algebra, w0: &WeightZero) -> Result<RowSpace> {
    let mut rs = RowSpace::new(alg.scalars().field(), w0.dim());
    for i in 0..alg.dim() as u32 {
        let (a, b, _) = alg.split(i);
        let g = if a + 1 == b {
            alg.e()
        } else if b + 1 == a {
            alg.f()
        } else {
            continue;
        };
        let c = g.commutator(&alg.basis(i));
        if !w0.is_weight_zero(&c) {
            return Err(Error::Construction("commutator left the weight-zero subspace".into()));
        }
        rs.insert(&w0.project(&c));
    }
    Ok(rs)
}

/// `e_j π_λ` for every nonzero combination, labelled by the unique simple module
/// on which it has rank one.
pub fn primitive_idempotents(center: &CenterData) -> Result<Vec<PrimitiveIdempotent>> {
    let p = center.p;
    let alg = center.algebra();
    let mut simples = Vec::new();
    for sign in Sign::both() {
        for s in 1..=p {
            simples.push(ModuleRep::simple(p, s, sign)?);
        }
    }
    let mut out = Vec::new();
    for (block, e) in center.idempotents.iter().enumerate() {
        for lambda in 0..2 * p {
            let f = e * &alg.weight_projector(lambda as i64);
            if f.is_zero() {
                continue;
            }
            let mut label = None;
            for v in &simples {
                match v.act(&f)?.rank() {
                    0 => {}
                    1 if label.is_none() => label = Some(v.label.clone()),
                    r => return Err(Error::Construction(format!("e_{block} π_{lambda} has rank {r} on {}", v.label))),
                }
            }
            let Some(crate::repmod::ModuleLabel::Simple { s, sign }) = label else {
                return Err(Error::Construction(format!("e_{block} π_{lambda} kills every simple module")));
            };
            out.push(PrimitiveIdempotent { element: f, k: s, sign, block: block as u32, weight: lambda });
        }
    }
    for sign in Sign::both() {
        for k in 1..=p {
            let n = out.iter().filter(|f| f.k == k && f.sign == sign).count();
            if n != k as usize {
                return Err(Error::Construction(format!("{n} primitive idempotents cover X({k},{sign}), expected {k}")));
            }
        }
    }
    Ok(out)
}

impl HH0Data {
    pub fn get(p: u32) -> Result<&'static HH0Data> {
        memoize(&HH0, p, || HH0Data::build(p))
    }

    pub fn build(p: u32) -> Result<HH0Data> {
        let center = CenterData::get(p)?;
        let alg = center.algebra();
        let w0 = WeightZero::new(alg);
        let commutators = commutator_space(alg, &w0)?;
        let codim = w0.dim() - commutators.rank();
        if codim != 3 * p as usize - 1 {
            return Err(Error::Construction(format!("[U,U] has codimension {codim}, expected {}", 3 * p - 1)));
        }
        let pivots = commutators.pivots();
        let free: Vec<usize> = (0..w0.dim()).filter(|c| !pivots.contains(c)).collect();

        let primitive = primitive_idempotents(center)?;
        let mut classes = Vec::new();
        for sign in Sign::both() {
            for k in 1..=p {
                let f = primitive.iter().find(|f| f.k == k && f.sign == sign).expect("counted above");
                classes.push((ClassLabel::Idempotent { k, sign }, f.element.clone()));
            }
        }
        for j in 1..p {
            let f = &classes[j as usize - 1].1;
            classes.push((ClassLabel::Nilpotent { j }, &center.w_plus[j as usize - 1] * f));
        }

        let field = alg.scalars().field();
        let rows: Vec<Vec<CycloScalar>> = free
            .iter()
            .map(|&c| classes.iter().map(|(_, x)| commutators.reduce(&w0.project(x))[c].clone()).collect())
            .collect();
        let inv = Matrix::from_rows(field, rows)
            .inverse()
            .map_err(|_| Error::Construction("trace class representatives are linearly dependent".into()))?;
        Ok(HH0Data { p, w0, commutators, free, inv, classes, primitive })
    }

    pub fn algebra(&self) -> &'static Algebra {
        Algebra::restricted(self.p).expect("level validated")
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Dimension of `[U,U]` inside `U`.
    pub fn commutator_dim(&self) -> usize {
        self.algebra().dim() - self.w0.dim() + self.commutators.rank()
    }

    pub fn in_commutator(&self, x: &Element) -> bool {
        self.commutators.contains(&self.w0.project(x))
    }

    /// Coordinates of `[x]` in the class basis.
    pub fn class_of(&self, x: &Element) -> Vec<CycloScalar> {
        let r = self.commutators.reduce(&self.w0.project(x));
        let sub: Vec<CycloScalar> = self.free.iter().map(|&c| r[c].clone()).collect();
        self.inv.apply(&sub)
    }

    pub fn label_index(&self, label: ClassLabel) -> Option<usize> {
        self.classes.iter().position(|(l, _)| *l == label)
    }

    pub fn representative(&self, label: ClassLabel) -> Option<&Element> {
        self.classes.iter().find(|(l, _)| *l == label).map(|(_, x)| x)
    }
}

pub fn verify_hh0(data: &HH0Data, center: &CenterData) -> Report {
    let mut rep = Report::new("HH0");
    let p = data.p;
    let alg = data.algebra();
    let sc = alg.scalars();
    let n = 3 * p as usize - 1;
    rep.check(format!("dim HH0 = {n}"), data.dim() == n);
    rep.check(format!("dim [U,U] = 2p³ − {n}"), data.commutator_dim() == alg.dim() - n);
    rep.check("EF − FE ∈ [U,U]", data.in_commutator(&alg.e().commutator(&alg.f())));
    rep.check("1 ∉ [U,U]", !data.in_commutator(&alg.one()));

    let pairs = sample::random_pairs(alg, 7, 6, 4);
    let zero = vec![sc.zero(); n];
    rep.check("class_of kills commutators", pairs.iter().all(|(x, y)| data.class_of(&x.commutator(y)) == zero));
    let zs = center.named_basis();
    rep.check(
        "z·[U,U] ⊂ [U,U]",
        pairs.iter().all(|(x, y)| zs.iter().all(|(_, z)| data.in_commutator(&(z * &x.commutator(y))))),
    );
    let ok = (1..p).all(|j| {
        let a = &center.w_plus[j as usize - 1] * data.representative(ClassLabel::Idempotent { k: j, sign: Sign::Plus }).unwrap();
        let b = &center.w_minus[j as usize - 1]
            * data.representative(ClassLabel::Idempotent { k: p - j, sign: Sign::Minus }).unwrap();
        data.class_of(&a) == data.class_of(&b)
    });
    rep.check("[w_j^+ f_j^+] = [w_j^− f_{p−j}^−]", ok);
    let mut expected = zero.clone();
    for (i, (l, _)) in data.classes.iter().enumerate() {
        if let ClassLabel::Idempotent { k, .. } = l {
            expected[i] = sc.int(*k as i64);
        }
    }
    rep.check("class_of(1) = Σ k([f_k^+] + [f_k^−])", data.class_of(&alg.one()) == expected);

    let prim = &data.primitive;
    let sum = prim.iter().fold(alg.zero(), |acc, f| acc + &f.element);
    rep.check("primitive idempotents sum to 1", sum == alg.one());
    let orth = prim.iter().enumerate().all(|(a, f)| {
        prim.iter().enumerate().all(|(b, g)| {
            let prod = &f.element * &g.element;
            if a == b {
                prod == f.element
            } else {
                prod.is_zero()
            }
        })
    });
    rep.check("primitive idempotents are orthogonal", orth);
    let blocks = (0..=p).all(|j| {
        let s = prim
            .iter()
            .filter(|f| (f.sign == Sign::Plus && f.k == j) || (f.sign == Sign::Minus && f.k == p - j))
            .fold(alg.zero(), |acc, f| acc + &f.element);
        s == center.idempotents[j as usize]
    });
    rep.check("e_j is the sum of the idempotents labelled (j,+) and (p−j,−)", blocks);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse() {
        assert_eq!(ClassLabel::parse("h+2"), Some(ClassLabel::Idempotent { k: 2, sign: Sign::Plus }));
        assert_eq!(ClassLabel::parse("h−1"), Some(ClassLabel::Idempotent { k: 1, sign: Sign::Minus }));
        assert_eq!(ClassLabel::parse("h3"), Some(ClassLabel::Nilpotent { j: 3 }));
        assert_eq!(ClassLabel::parse("x3"), None);
        assert_eq!(ClassLabel::Idempotent { k: 2, sign: Sign::Minus }.to_string(), "h-2");
    }

    #[test]
    fn structure() {
        for p in [2, 3] {
            let data = HH0Data::get(p).unwrap();
            let center = CenterData::get(p).unwrap();
            let rep = verify_hh0(data, center);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn counts_at_two() {
        let data = HH0Data::get(2).unwrap();
        let count = |k, sign| data.primitive.iter().filter(|f| f.k == k && f.sign == sign).count();
        assert_eq!(count(1, Sign::Plus), 1);
        assert_eq!(count(2, Sign::Plus), 2);
        assert_eq!(count(1, Sign::Minus), 1);
        assert_eq!(count(2, Sign::Minus), 2);
        assert_eq!(data.commutator_dim(), 16 - 5);
    }
}
