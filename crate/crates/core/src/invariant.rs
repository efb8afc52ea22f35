//! Logarithmic Hennings invariants of colored surgery presentations, the
//! center-valued knot invariant and its expansion coefficients.

use serde_json::{json, Value};

use crate::center::CenterData;
use crate::error::{Error, Result};
use crate::hh0::ClassLabel;
use crate::hopf::{Element, Tensor};
use crate::integral::{is_central, IntegralData};
use crate::linalg::Coordinates;
use crate::mtrace::{PairingRoute, TracePrime};
use crate::report::Report;
use crate::scalars::{CycloScalar, Scalars};
use crate::tangle::{ClosurePresentation, ColorSpec, Convention, Role, Sweeper, UniversalInvariant};

/// A linear combination of trace classes.
pub type ClassCombination = Vec<(ClassLabel, CycloScalar)>;

/// A presentation together with resolved colors, in `(L⁺, L⁰, L⁻)` order.
#[derive(Clone, Debug)]
pub struct ColoredSurgeryInput {
    pub presentation: ClosurePresentation,
    pub plus_colors: Vec<Element>,
    /// `None` leaves a minus component open (only for the center-valued invariant).
    pub minus_colors: Vec<Option<ClassCombination>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantValue {
    pub exact: CycloScalar,
    pub signature: i64,
    pub prefactor: CycloScalar,
    pub presentation_hash: String,
    pub convention: Convention,
}

impl InvariantValue {
    pub fn approx(&self) -> (f64, f64) {
        self.exact.approx()
    }

    pub fn to_json(&self) -> Value {
        let (re, im) = self.approx();
        json!({
            "exact": self.exact.to_string(),
            "exact_coeffs": self.exact.to_json(),
            "approx": [re, im],
            "s": self.signature,
            "prefactor": self.prefactor.to_string(),
            "provenance": { "presentation": self.presentation_hash, "convention": self.convention.to_string() },
        })
    }
}

/// `J^log` and its coordinates in the `{e_j, w_j^±}` basis.
#[derive(Clone, Debug)]
pub struct JLogValue {
    pub element: Element,
    /// `a_0, …, a_p`.
    pub a: Vec<CycloScalar>,
    /// `b_1^+, …, b_{p−1}^+`.
    pub b_plus: Vec<CycloScalar>,
    /// `b_1^−, …, b_{p−1}^−`.
    pub b_minus: Vec<CycloScalar>,
    pub signature: i64,
}

impl JLogValue {
    pub fn to_json(&self) -> Value {
        let list = |v: &[CycloScalar]| Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect());
        json!({
            "a": list(&self.a),
            "b_plus": list(&self.b_plus),
            "b_minus": list(&self.b_minus),
            "s": self.signature,
        })
    }
}

/// Shared per-level data for invariant evaluation.
pub struct InvariantEngine {
    pub p: u32,
    pub sweeper: Sweeper,
    pub trace: &'static TracePrime,
    pub integral: IntegralData,
    center_coords: Coordinates,
}

impl InvariantEngine {
    pub fn new(p: u32, convention: Convention) -> Result<Self> {
        let trace = TracePrime::get(p)?;
        let center = trace.center;
        let alg = center.algebra();
        let rows: Vec<Vec<CycloScalar>> =
            center.named_basis().iter().map(|(_, z)| (0..alg.dim() as u32).map(|i| z.coeff(i)).collect()).collect();
        let center_coords = Coordinates::new(alg.scalars().field(), rows)?;
        Ok(InvariantEngine { p, sweeper: Sweeper::new(p, convention)?, trace, integral: IntegralData::new(p)?, center_coords })
    }

    pub fn scalars(&self) -> &Scalars {
        self.trace.algebra().scalars()
    }

    fn center(&self) -> &'static CenterData {
        self.trace.center
    }

    /// Resolves the colors written in the presentation.
    pub fn input(&self, pres: &ClosurePresentation) -> Result<ColoredSurgeryInput> {
        if let Some(p) = pres.p {
            if p != self.p {
                return Err(Error::Presentation(format!("presentation is for p = {p}, session has p = {}", self.p)));
            }
        }
        let valid = pres.validate()?;
        let mut plus_colors = Vec::new();
        let mut minus_colors = Vec::new();
        for &ci in &valid.order {
            let c = &pres.components[ci];
            match c.role {
                Role::Plus => {
                    let spec = c.color.as_ref().ok_or_else(|| Error::Color(format!("plus component {} has no color", ci + 1)))?;
                    plus_colors.push(self.central_color(spec)?);
                }
                Role::Surgery => {
                    if c.color.is_some() {
                        return Err(Error::Color(format!("surgery component {} carries a color", ci + 1)));
                    }
                }
                Role::Minus => minus_colors.push(c.color.as_ref().map(|s| self.class_color(s)).transpose()?),
            }
        }
        Ok(ColoredSurgeryInput { presentation: pres.clone(), plus_colors, minus_colors })
    }

    fn central_color(&self, spec: &ColorSpec) -> Result<Element> {
        let center = self.center();
        let named = |n: &str| center.named(n).ok_or_else(|| Error::Color(format!("unknown central basis element {n:?}")));
        match spec {
            ColorSpec::Name(n) => named(n),
            ColorSpec::Combination(m) => {
                let mut acc = center.algebra().zero();
                for (n, c) in m {
                    acc = acc + named(n)?.scale(&self.scalars().int(*c));
                }
                Ok(acc)
            }
        }
    }

    fn class_color(&self, spec: &ColorSpec) -> Result<ClassCombination> {
        let parse = |n: &str| -> Result<ClassLabel> {
            let l = ClassLabel::parse(n).ok_or_else(|| Error::Color(format!("unknown trace class {n:?}")))?;
            self.trace.hh0.representative(l).ok_or_else(|| Error::Color(format!("trace class {n:?} does not exist at p = {}", self.p)))?;
            Ok(l)
        };
        match spec {
            ColorSpec::Name(n) => Ok(vec![(parse(n)?, self.scalars().one())]),
            ColorSpec::Combination(m) => m.iter().map(|(n, c)| Ok((parse(n)?, self.scalars().int(*c)))).collect(),
        }
    }

    pub fn universal_invariant(&self, pres: &ClosurePresentation) -> Result<UniversalInvariant> {
        self.sweeper.universal_invariant(pres)
    }

    /// Evaluates the `L⁺` and `L⁰` slots, leaving the `L⁻` slots and returning
    /// the signature of the surgery block.
    fn close_surgery(&self, input: &ColoredSurgeryInput) -> Result<(Tensor, i64, String)> {
        let valid = input.presentation.validate()?;
        let (mp, m0, mm) = valid.role_counts();
        if input.plus_colors.len() != mp {
            return Err(Error::ArityMismatch(input.plus_colors.len(), mp));
        }
        if input.minus_colors.len() != mm {
            return Err(Error::ArityMismatch(input.minus_colors.len(), mm));
        }
        let j = self.universal_invariant(&input.presentation)?;
        let alg = self.trace.algebra();
        let mut t = j.value;
        for slot in (0..mp + m0).rev() {
            let values: Vec<CycloScalar> = if slot < mp {
                let z = &input.plus_colors[slot];
                if !is_central(z) {
                    return Err(Error::Color("plus color is not central".into()));
                }
                (0..alg.dim() as u32).map(|i| self.integral.mu(&(z * &alg.basis(i)))).collect()
            } else {
                (0..alg.dim() as u32).map(|i| self.integral.mu_basis(i)).collect()
            };
            t = t.apply_functional(slot, |i| values[i as usize].clone());
        }
        Ok((t, valid.surgery_signature(), j.presentation_hash))
    }

    fn prefactor(&self, s: i64) -> CycloScalar {
        self.integral.delta.pow(s)
    }

    /// `H^log(M, L)` using the given route for closing the minus slots.
    pub fn h_log_with(&self, input: &ColoredSurgeryInput, route: PairingRoute) -> Result<InvariantValue> {
        let (rest, s, hash) = self.close_surgery(input)?;
        let colors: Vec<&ClassCombination> = input
            .minus_colors
            .iter()
            .map(|c| c.as_ref().ok_or_else(|| Error::Color("every minus component needs a trace class".into())))
            .collect::<Result<_>>()?;
        let sc = self.scalars();
        let mut total = sc.zero();
        if colors.is_empty() {
            total = rest.scalar_value();
        } else {
            // Expand the pairing multilinearly over the color combinations.
            let mut stack: Vec<(Vec<ClassLabel>, CycloScalar)> = vec![(Vec::new(), sc.one())];
            for combo in &colors {
                stack = stack
                    .into_iter()
                    .flat_map(|(labels, c)| {
                        combo.iter().map(move |(l, d)| {
                            let mut ls = labels.clone();
                            ls.push(*l);
                            (ls, &c * d)
                        })
                    })
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
            for (labels, c) in stack {
                total += &(&c * &self.trace.pairing(&rest, &labels, route)?);
            }
        }
        let prefactor = self.prefactor(s);
        Ok(InvariantValue {
            exact: &total * &prefactor,
            signature: s,
            prefactor,
            presentation_hash: hash,
            convention: self.sweeper.convention,
        })
    }

    /// `H^log` through quantum characters.
    pub fn h_log(&self, input: &ColoredSurgeryInput) -> Result<InvariantValue> {
        self.h_log_with(input, PairingRoute::Character)
    }

    /// The colored Hennings invariant (no minus components).
    pub fn hennings(&self, input: &ColoredSurgeryInput) -> Result<InvariantValue> {
        if !input.minus_colors.is_empty() {
            return Err(Error::Presentation("the Hennings invariant takes no trace-colored components".into()));
        }
        self.h_log(input)
    }

    /// `J^log` for a presentation with exactly one open minus component.
    pub fn j_log(&self, input: &ColoredSurgeryInput) -> Result<JLogValue> {
        if input.minus_colors.len() != 1 {
            return Err(Error::Presentation(format!("J^log needs exactly one minus component, found {}", input.minus_colors.len())));
        }
        let (rest, s, _) = self.close_surgery(input)?;
        let element = rest.multiply_slots(&[0]).scale(&self.prefactor(s));
        if !is_central(&element) {
            return Err(Error::Construction("the one-slot invariant is not central".into()));
        }
        let alg = self.trace.algebra();
        let v: Vec<CycloScalar> = (0..alg.dim() as u32).map(|i| element.coeff(i)).collect();
        let c = self.center_coords.coords(&v)?;
        let p = self.p as usize;
        Ok(JLogValue {
            element,
            a: c[..=p].to_vec(),
            b_plus: c[p + 1..2 * p].to_vec(),
            b_minus: c[2 * p..].to_vec(),
            signature: s,
        })
    }

    /// Replaces the color of the single minus component.
    fn with_minus_color(&self, input: &ColoredSurgeryInput, color: ClassCombination) -> ColoredSurgeryInput {
        ColoredSurgeryInput { minus_colors: vec![Some(color)], ..input.clone() }
    }

    /// The five relations between the coefficients of `J^log` and `H^log`.
    pub fn coefficient_relations(&self, input: &ColoredSurgeryInput) -> Result<Report> {
        let mut rep = Report::new(format!("coefficient relations p={}", self.p));
        let jl = self.j_log(input)?;
        let sc = *self.scalars();
        let p = self.p;
        let h = |color: ClassCombination| self.h_log(&self.with_minus_color(input, color)).map(|v| v.exact);
        let one = sc.one();
        let class = |l: ClassLabel| vec![(l, one.clone())];
        let plus = |k| ClassLabel::Idempotent { k, sign: crate::repmod::Sign::Plus };
        let minus = |k| ClassLabel::Idempotent { k, sign: crate::repmod::Sign::Minus };
        let eq = |rep: &mut Report, name: String, lhs: &CycloScalar, rhs: CycloScalar| {
            let ok = *lhs == rhs;
            rep.check_with(name, ok, || format!("coefficient {lhs}, from H^log {rhs}"));
        };

        eq(&mut rep, "a_0 = H(h_p^−)".into(), &jl.a[0], h(class(minus(p)))?);
        eq(&mut rep, "a_p = (−1)^{p−1} H(h_p^+)".into(), &jl.a[p as usize], sc.sign(p as i64 - 1) * h(class(plus(p)))?);
        for j in 1..p {
            let ji = j as i64;
            let sq = sc.quantum_integer(ji).pow(2);
            let dim = sc.q_pow(ji) + sc.q_pow(-ji);
            let hj = ClassLabel::Nilpotent { j };
            let a_rhs = sc.sign(ji) * h(class(hj))? / &sq;
            eq(&mut rep, format!("a_{j} = (−1)^{j}/[{j}]² H(h_{j})"), &jl.a[j as usize], a_rhs);
            let bp = h(vec![(plus(j), sq.clone()), (hj, -&dim)])?;
            eq(&mut rep, format!("b_{j}^+ = (−1)^{j}/[{j}]⁴ H([{j}]² h_{j}^+ − (q^{j}+q^-{j}) h_{j})"), &jl.b_plus[j as usize - 1], sc.sign(ji) * bp / sq.pow(2));
            let bm = h(vec![(minus(p - j), sq.clone()), (hj, -&dim)])?;
            eq(&mut rep, format!("b_{j}^− = (−1)^{j}/[{j}]⁴ H([{j}]² h_{}^− − (q^{j}+q^-{j}) h_{j})", p - j), &jl.b_minus[j as usize - 1], sc.sign(ji) * bm / sq.pow(2));
        }
        // Pairing J^log against every class reproduces H^log directly.
        let mut direct = true;
        for (l, _) in &self.trace.hh0.classes {
            let lhs = self.trace.pair_central(&jl.element, *l)?;
            direct &= lhs == h(class(*l))?;
        }
        rep.check("⟨J^log, h⟩ = H^log(h) for every basis class", direct);
        Ok(rep)
    }
}

/// A pair of presentations related by a Kirby move or an isotopy.
#[derive(Clone, Debug, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct KirbyPair {
    pub name: String,
    #[serde(rename = "move")]
    pub kind: String,
    pub left: ClosurePresentation,
    pub right: ClosurePresentation,
}

const KIRBY_CORPUS: &str = include_str!("../tests/fixtures/kirby_pairs.json");

/// The shipped corpus of related presentations.
pub fn kirby_corpus() -> Result<Vec<KirbyPair>> {
    let pairs: Vec<KirbyPair> = serde_json::from_str(KIRBY_CORPUS)?;
    for pair in &pairs {
        pair.left.validate()?;
        pair.right.validate()?;
    }
    Ok(pairs)
}

/// Equal invariants across each corpus pair, and equal character and
/// partial-trace routes on each presentation.
pub fn invariance_suite(p: u32, convention: Convention) -> Result<Report> {
    let eng = InvariantEngine::new(p, convention)?;
    let mut rep = Report::new(format!("Kirby and isotopy invariance p={p}"));
    for pair in kirby_corpus()? {
        // The corpus is written for p = 2; its colors exist at every level.
        let eval = |pres: &ClosurePresentation| -> Result<(InvariantValue, InvariantValue)> {
            let input = eng.input(&ClosurePresentation { p: Some(p), ..pres.clone() })?;
            Ok((eng.h_log(&input)?, eng.h_log_with(&input, PairingRoute::RightPartial)?))
        };
        match (eval(&pair.left), eval(&pair.right)) {
            (Ok((l, l_slow)), Ok((r, r_slow))) => {
                rep.check_with(format!("{} ({})", pair.name, pair.kind), l.exact == r.exact, || {
                    format!("{} vs {}", l.exact, r.exact)
                });
                rep.check(format!("{}: character and partial-trace routes agree", pair.name), l == l_slow && r == r_slow);
            }
            (Err(e), _) | (_, Err(e)) => rep.fail(format!("{} ({})", pair.name, pair.kind), e.to_string()),
        }
    }
    Ok(rep)
}

/// The normalization anchors: `S³` with an `h_p^−` unknot, `S¹×S²`, and
/// `S³` as `±1` surgery on an unknot.
pub fn anchor_suite(p: u32, convention: Convention) -> Result<Report> {
    let eng = InvariantEngine::new(p, convention)?;
    let mut rep = Report::new(format!("invariant anchors p={p}"));
    let unknot = |role, framing, color: Option<ColorSpec>| -> Result<ClosurePresentation> {
        let mut pres = ClosurePresentation::closure(1, &[], role)?;
        pres.components[0].framing = framing;
        pres.components[0].color = color;
        Ok(pres)
    };
    let hp = ColorSpec::Name(format!("h-{p}"));
    let v = eng.h_log(&eng.input(&unknot(Role::Minus, 0, Some(hp))?)?)?;
    rep.check_with("H(S³, unknot colored h_p^−) = 1", v.exact.is_one(), || v.exact.to_string());
    let v = eng.hennings(&eng.input(&unknot(Role::Surgery, 0, None)?)?)?;
    rep.check_with("H(S¹×S², ∅) = 0", v.exact.is_zero(), || v.exact.to_string());
    for f in [1, -1] {
        let v = eng.hennings(&eng.input(&unknot(Role::Surgery, f, None)?)?)?;
        rep.check_with(format!("H(S³ as {f:+}-surgery on an unknot) = 1"), v.exact.is_one(), || v.exact.to_string());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(p: u32) -> InvariantEngine {
        InvariantEngine::new(p, Convention::A).unwrap()
    }

    #[test]
    fn anchors() {
        for p in [2, 3] {
            let rep = anchor_suite(p, Convention::A).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn unknot_center_valued_invariant_is_one() {
        let eng = engine(2);
        let pres = ClosurePresentation::closure(1, &[], Role::Minus).unwrap();
        let jl = eng.j_log(&eng.input(&pres).unwrap()).unwrap();
        assert!(jl.a.iter().all(CycloScalar::is_one));
        assert!(jl.b_plus.iter().chain(&jl.b_minus).all(CycloScalar::is_zero));
        let rep = eng.coefficient_relations(&eng.input(&pres).unwrap()).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn trefoil_relations() {
        let eng = engine(2);
        let mut pres = ClosurePresentation::closure(2, &[1, 1, 1], Role::Minus).unwrap();
        pres.components[0].framing = 0;
        let rep = eng.coefficient_relations(&eng.input(&pres).unwrap()).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn split_zero_surgery_kills_hennings() {
        let eng = engine(2);
        let mut pres = ClosurePresentation::closure(3, &[1, 1, 1], Role::Surgery).unwrap();
        pres.components[0].framing = 1;
        pres.components[1].framing = 0;
        let v = eng.hennings(&eng.input(&pres).unwrap()).unwrap();
        assert!(v.exact.is_zero());
    }

    #[test]
    fn color_errors() {
        let eng = engine(2);
        let mut pres = ClosurePresentation::closure(1, &[], Role::Plus).unwrap();
        assert!(eng.input(&pres).is_err());
        pres.components[0].color = Some(ColorSpec::Name("e7".into()));
        assert!(eng.input(&pres).is_err());
        pres.components[0].role = Role::Minus;
        pres.components[0].color = Some(ColorSpec::Name("h-3".into()));
        assert!(eng.input(&pres).is_err());
        pres.p = Some(3);
        assert!(eng.input(&pres).is_err());
    }
}
