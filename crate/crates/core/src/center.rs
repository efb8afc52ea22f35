//! The center `Z(U)`: Casimir, central idempotents `e_j` and the radical
//! elements `w_j^±`.

use std::collections::BTreeMap;

use crate::cache::{memoize, Registry};
use crate::error::{Error, Result};
use crate::hopf::{Algebra, Element, Tensor};
use crate::linalg::{Coordinates, Matrix};
use crate::repmod::{ModuleRep, ProjectiveModel, Sign};
use crate::report::Report;
use crate::scalars::{CycloScalar, Scalars};

/// `C = FE + (qK + q⁻¹K⁻¹)/(q − q⁻¹)²`.
pub fn casimir(alg: &'static Algebra) -> Element {
    let sc = alg.scalars();
    let qd = sc.q_diff();
    let denom = (&qd * &qd).inverse().expect("q − q⁻¹ ≠ 0");
    let k_part = alg.k().scale(&sc.q()) + alg.cartan_power(-1).scale(&sc.q_pow(-1));
    alg.f() * alg.e() + k_part.scale(&denom)
}

/// `c_j = (q^j + q^{−j})/(q − q⁻¹)²`, the Casimir eigenvalue on `X_j^+`.
pub fn casimir_value(sc: &Scalars, j: i64) -> CycloScalar {
    let qd = sc.q_diff();
    (sc.q_pow(j) + sc.q_pow(-j)) / (&qd * &qd)
}

/// The span of `E^a F^a π_λ`, where every central element lives.
#[derive(Clone, Debug)]
pub(crate) struct WeightZero {
    alg: &'static Algebra,
    pub(crate) indices: Vec<u32>,
    pos: BTreeMap<u32, usize>,
}

impl WeightZero {
    pub(crate) fn new(alg: &'static Algebra) -> Self {
        let mut indices = Vec::new();
        for a in 0..alg.p() {
            for l in 0..alg.cartan_order() {
                indices.push(alg.index(a, a, l));
            }
        }
        let pos = indices.iter().enumerate().map(|(n, &i)| (i, n)).collect();
        WeightZero { alg, indices, pos }
    }

    pub(crate) fn dim(&self) -> usize {
        self.indices.len()
    }

    /// The weight-zero part of `x` as a coordinate vector.
    pub(crate) fn project(&self, x: &Element) -> Vec<CycloScalar> {
        let mut v = vec![self.alg.scalars().zero(); self.dim()];
        for (i, c) in x.terms() {
            if let Some(&n) = self.pos.get(&i) {
                v[n] = c.clone();
            }
        }
        v
    }

    pub(crate) fn is_weight_zero(&self, x: &Element) -> bool {
        x.terms().all(|(i, _)| self.pos.contains_key(&i))
    }

    pub(crate) fn element(&self, v: &[CycloScalar]) -> Element {
        Element::from_terms(self.alg, self.indices.iter().zip(v).map(|(&i, c)| (i, c.clone())))
    }
}

/// Basis of `Z(U)`: the common kernel of `ad_E` and `ad_F` on the
/// weight-zero subspace (the kernel of `ad_K`).
pub fn compute_center(p: u32) -> Result<Vec<Element>> {
    let alg = Algebra::restricted(p)?;
    let w0 = WeightZero::new(alg);
    let n = alg.dim();
    let field = alg.scalars().field();
    let mut m = Matrix::zeros(field, 2 * n, w0.dim());
    for (col, &i) in w0.indices.iter().enumerate() {
        let x = alg.basis(i);
        for (off, g) in [(0, alg.e()), (n, alg.f())] {
            for (row, c) in g.commutator(&x).terms() {
                m[(off + row as usize, col)] = c.clone();
            }
        }
    }
    let basis: Vec<Element> = m.nullspace().iter().map(|v| w0.element(v)).collect();
    let expected = 3 * p as usize - 1;
    if basis.len() != expected {
        return Err(Error::Construction(format!("center has dimension {}, expected {expected}", basis.len())));
    }
    Ok(basis)
}

/// Structure constants `L_a` of multiplication in a basis of a commutative
/// subalgebra, and the radical as the kernel of `(a, b) ↦ tr(L_a L_b)`.
pub fn radical(basis: &[Element]) -> Result<Vec<Element>> {
    let alg = basis.first().ok_or_else(|| Error::Construction("empty basis".into()))?.algebra();
    let w0 = WeightZero::new(alg);
    let field = alg.scalars().field();
    let coords = Coordinates::new(field, basis.iter().map(|z| w0.project(z)).collect())?;
    let k = basis.len();
    let mut mult = Vec::with_capacity(k);
    for a in basis {
        let mut l = Matrix::zeros(field, k, k);
        for (col, b) in basis.iter().enumerate() {
            for (row, c) in coords.coords(&w0.project(&(a * b)))?.into_iter().enumerate() {
                l[(row, col)] = c;
            }
        }
        mult.push(l);
    }
    let mut form = Matrix::zeros(field, k, k);
    for a in 0..k {
        for b in a..k {
            let t = mult[a].trace_product(&mult[b]);
            form[(b, a)] = t.clone();
            form[(a, b)] = t;
        }
    }
    Ok(form
        .nullspace()
        .iter()
        .map(|v| v.iter().zip(basis).fold(alg.zero(), |acc, (c, z)| acc + z.scale(c)))
        .collect())
}

fn lift_idempotent(mut e: Element) -> Result<Element> {
    let three = e.algebra().scalars().int(3);
    let two = e.algebra().scalars().int(2);
    for _ in 0..8 {
        let e2 = &e * &e;
        if e2 == e {
            return Ok(e);
        }
        let e3 = &e2 * &e;
        e = e2.scale(&three) - e3.scale(&two);
    }
    Err(Error::Construction("idempotent lifting did not converge".into()))
}

#[derive(Clone, Debug)]
pub struct CenterData {
    pub p: u32,
    pub casimir: Element,
    /// `c_0, …, c_p`; block `j` carries Casimir eigenvalue `c_j`.
    pub c_values: Vec<CycloScalar>,
    /// Nullspace basis as computed.
    pub raw_basis: Vec<Element>,
    pub radical: Vec<Element>,
    /// `e_0, …, e_p`.
    pub idempotents: Vec<Element>,
    /// `w_1^+, …, w_{p−1}^+`.
    pub w_plus: Vec<Element>,
    /// `w_1^−, …, w_{p−1}^−`.
    pub w_minus: Vec<Element>,
    /// `P_1^+, …, P_p^+, P_1^−, …, P_p^−`.
    pub models: Vec<ProjectiveModel>,
}

static CENTERS: Registry<CenterData> = Registry::new();

impl CenterData {
    pub fn get(p: u32) -> Result<&'static CenterData> {
        memoize(&CENTERS, p, || CenterData::build(p))
    }

    pub fn build(p: u32) -> Result<CenterData> {
        let alg = Algebra::restricted(p)?;
        let sc = *alg.scalars();
        let c = casimir(alg);
        let c_values: Vec<CycloScalar> = (0..=p as i64).map(|j| casimir_value(&sc, j)).collect();
        let raw_basis = compute_center(p)?;
        let radical = radical(&raw_basis)?;
        if radical.len() != 2 * p as usize - 2 {
            return Err(Error::Construction(format!("radical has dimension {}, expected {}", radical.len(), 2 * p - 2)));
        }

        let mut idempotents = Vec::new();
        for j in 0..=p as usize {
            let mut l = alg.one();
            for (i, ci) in c_values.iter().enumerate() {
                if i != j {
                    let factor = (&c_values[j] - ci).inverse()?;
                    l = (&l * (&c - &alg.scalar(ci.clone()))).scale(&factor);
                }
            }
            idempotents.push(lift_idempotent(l)?);
        }
        let idempotents = label_idempotents(p, idempotents)?;

        let mut models = Vec::new();
        for sign in Sign::both() {
            for k in 1..=p {
                let block = if sign == Sign::Plus { k } else { p - k };
                models.push(ProjectiveModel::new(p, k, sign, &idempotents[block as usize])?);
            }
        }

        let mut data = CenterData { p, casimir: c, c_values, raw_basis, radical, idempotents, w_plus: vec![], w_minus: vec![], models };
        let actions = data.basis_actions()?;
        for j in 1..p {
            let nil = data.nilpotent(j);
            let plus = data.solve_on_models(&actions, (j, Sign::Plus), &nil)?;
            let minus = data.solve_on_models(&actions, (p - j, Sign::Minus), &nil)?;
            data.w_plus.push(plus);
            data.w_minus.push(minus);
        }
        Ok(data)
    }

    pub fn algebra(&self) -> &'static Algebra {
        self.casimir.algebra()
    }

    /// `e_j (C − c_j)`.
    pub fn nilpotent(&self, j: u32) -> Element {
        let alg = self.algebra();
        &self.idempotents[j as usize] * (&self.casimir - &alg.scalar(self.c_values[j as usize].clone()))
    }

    pub fn model(&self, j: u32, sign: Sign) -> &ProjectiveModel {
        let off = if sign == Sign::Plus { 0 } else { self.p as usize };
        &self.models[off + j as usize - 1]
    }

    /// `e_j`, `w_j^+` and `w_j^−` in that order.
    pub fn named_basis(&self) -> Vec<(String, Element)> {
        let mut out: Vec<(String, Element)> =
            self.idempotents.iter().enumerate().map(|(j, e)| (format!("e{j}"), e.clone())).collect();
        out.extend(self.w_plus.iter().enumerate().map(|(j, w)| (format!("w+{}", j + 1), w.clone())));
        out.extend(self.w_minus.iter().enumerate().map(|(j, w)| (format!("w-{}", j + 1), w.clone())));
        out
    }

    /// Looks up `e0..ep`, `w+j`, `w-j`.
    pub fn named(&self, name: &str) -> Option<Element> {
        let name = name.replace('−', "-");
        self.named_basis().into_iter().find(|(n, _)| *n == name).map(|(_, e)| e)
    }

    /// `ρ_m(z_i)` on every model `m` for every raw basis element `z_i`.
    fn basis_actions(&self) -> Result<Vec<Vec<Matrix>>> {
        self.models.iter().map(|m| self.raw_basis.iter().map(|z| m.act(z)).collect()).collect()
    }

    /// The central `z` acting as `ρ(target)` on the model `at` and as zero on
    /// every other model.
    fn solve_on_models(&self, actions: &[Vec<Matrix>], at: (u32, Sign), target: &Element) -> Result<Element> {
        let field = self.algebra().scalars().field();
        let k = self.raw_basis.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (m, acts) in self.models.iter().zip(actions) {
            let goal = if (m.j, m.sign) == at { Some(m.act(target)?) } else { None };
            let d = m.ambient.dim;
            for r in 0..d {
                for c in 0..d {
                    let row: Vec<CycloScalar> = acts.iter().map(|a| a[(r, c)].clone()).collect();
                    let b = goal.as_ref().map_or(field.zero(), |g| g[(r, c)].clone());
                    if row.iter().all(CycloScalar::is_zero) && b.is_zero() {
                        continue;
                    }
                    rows.push(row);
                    rhs.push(b);
                }
            }
        }
        let m = Matrix::from_rows(field, rows);
        if m.rank() != k {
            return Err(Error::Underdetermined("center does not act faithfully on the models".into()));
        }
        let sol = m.solve_unique(&rhs)?;
        Ok(sol.iter().zip(&self.raw_basis).fold(self.algebra().zero(), |acc, (c, z)| acc + z.scale(c)))
    }
}

fn label_idempotents(p: u32, idem: Vec<Element>) -> Result<Vec<Element>> {
    let mut simples: Vec<(u32, ModuleRep)> = (1..=p).map(|s| ModuleRep::simple(p, s, Sign::Plus).map(|m| (s, m))).collect::<Result<_>>()?;
    simples.push((0, ModuleRep::simple(p, p, Sign::Minus)?));
    let mut out: Vec<Option<Element>> = vec![None; p as usize + 1];
    for e in idem {
        let mut hits = Vec::new();
        for (label, v) in &simples {
            let m = v.act(&e)?;
            if m == Matrix::identity(m.field(), v.dim) {
                hits.push(*label);
            }
        }
        match hits.as_slice() {
            [l] if out[*l as usize].is_none() => out[*l as usize] = Some(e),
            _ => return Err(Error::Construction(format!("ambiguous idempotent label {hits:?}"))),
        }
    }
    out.into_iter().map(|e| e.ok_or_else(|| Error::Construction("missing block".into()))).collect()
}

/// Relations among `e_j`, `w_j^±`, and their action on the projective models.
pub fn verify_center(data: &CenterData) -> Report {
    let mut rep = Report::new("center");
    let p = data.p;
    let alg = data.algebra();
    let w0 = WeightZero::new(alg);
    rep.check(format!("dim Z(U) = {}", 3 * p - 1), data.raw_basis.len() == 3 * p as usize - 1);
    rep.check(format!("dim Rad Z(U) = {}", 2 * p - 2), data.radical.len() == 2 * p as usize - 2);
    let named = data.named_basis();
    let span = Matrix::from_rows(alg.scalars().field(), named.iter().map(|(_, z)| w0.project(z)).collect()).rank();
    rep.check("e_j, w_j^± span the center", span == 3 * p as usize - 1);
    rep.check("named elements are central", named.iter().all(|(_, z)| crate::integral::is_central(z)));

    let e = &data.idempotents;
    let sum = e.iter().fold(alg.zero(), |acc, x| acc + x);
    rep.check("Σ e_j = 1", sum == alg.one());
    let mut ok = true;
    for s in 0..=p as usize {
        for t in 0..=p as usize {
            let expected = if s == t { e[s].clone() } else { alg.zero() };
            ok &= &e[s] * &e[t] == expected;
        }
    }
    rep.check("e_s e_t = δ_st e_s", ok);
    let mut ok = true;
    for s in 0..=p as usize {
        for t in 1..p as usize {
            for w in [&data.w_plus[t - 1], &data.w_minus[t - 1]] {
                let expected = if s == t { w.clone() } else { alg.zero() };
                ok &= &e[s] * w == expected;
            }
        }
    }
    rep.check("e_s w_t^± = δ_st w_t^±", ok);
    let ws: Vec<&Element> = data.w_plus.iter().chain(&data.w_minus).collect();
    rep.check("w_s^± w_t^± = 0", ws.iter().all(|a| ws.iter().all(|b| (*a * *b).is_zero())));
    rep.check(
        "e_j (C − c_j) squares to zero",
        (1..p).all(|j| {
            let n = data.nilpotent(j);
            !n.is_zero() && (&n * &n).is_zero()
        }),
    );
    rep.check("e_0 (C − c_0) = e_p (C − c_p) = 0", data.nilpotent(0).is_zero() && data.nilpotent(p).is_zero());
    let closed = named.iter().all(|(_, a)| named.iter().all(|(_, b)| crate::integral::is_central(&(a * b))));
    rep.check("products of center elements are central", closed);

    // Action on the projective models.
    let mut table_ok = true;
    let mut first_bad = String::new();
    for m in &data.models {
        let block = if m.sign == Sign::Plus { m.j } else { p - m.j };
        let zero = Matrix::zeros(alg.scalars().field(), m.ambient.dim, m.ambient.dim);
        for (j, ej) in e.iter().enumerate() {
            let got = m.act(ej).unwrap_or_else(|_| zero.clone());
            let want = if j as u32 == block { m.projector.clone() } else { zero.clone() };
            if got != want {
                table_ok = false;
                first_bad = format!("e_{j} on P({},{})", m.j, m.sign);
            }
        }
        for j in 1..p {
            let x = m.act(&data.nilpotent(j)).unwrap_or_else(|_| zero.clone());
            for (w, home) in [(&data.w_plus[j as usize - 1], (j, Sign::Plus)), (&data.w_minus[j as usize - 1], (p - j, Sign::Minus))] {
                let got = m.act(w).unwrap_or_else(|_| zero.clone());
                let want = if (m.j, m.sign) == home { x.clone() } else { zero.clone() };
                if got != want || ((m.j, m.sign) == home && got.is_zero()) {
                    table_ok = false;
                    first_bad = format!("w_{j} on P({},{})", m.j, m.sign);
                }
            }
        }
    }
    rep.check_with("action of e_j, w_j^± on every projective model", table_ok, || first_bad);
    rep
}

/// `Δ(C) = K⁻¹⊗FE + K⁻¹E⊗FK + F⊗E + FE⊗K + (qK⊗K + q⁻¹K⁻¹⊗K⁻¹)/(q−q⁻¹)²`.
pub fn verify_casimir_coproduct(p: u32) -> Result<Report> {
    let alg = Algebra::restricted(p)?;
    let sc = alg.scalars();
    let (e, f, k, ki) = (alg.e(), alg.f(), alg.k(), alg.cartan_power(-1));
    let qd = sc.q_diff();
    let pure = |a: &Element, b: &Element| Tensor::pure(&[a.clone(), b.clone()]);
    let expected = pure(&ki, &(&f * &e))
        + pure(&(&ki * &e), &(&f * &k))
        + pure(&f, &e)
        + pure(&(&f * &e), &k)
        + (pure(&k, &k).scale(&sc.q()) + pure(&ki, &ki).scale(&sc.q_pow(-1))).scale(&(&qd * &qd).inverse()?);
    let c = casimir(alg);
    let mut rep = Report::new("Casimir");
    rep.check("C is central", crate::integral::is_central(&c));
    rep.check("Δ(C) matches the five-term expansion", c.coproduct() == expected);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_dimension_and_membership() {
        for p in [2, 3] {
            let basis = compute_center(p).unwrap();
            assert_eq!(basis.len(), 3 * p as usize - 1);
            let alg = Algebra::restricted(p).unwrap();
            let w0 = WeightZero::new(alg);
            let vs: Vec<Vec<CycloScalar>> = basis.iter().map(|z| w0.project(z)).collect();
            let coords = Coordinates::new(alg.scalars().field(), vs).unwrap();
            assert!(coords.coords(&w0.project(&alg.one())).is_ok());
            assert!(coords.coords(&w0.project(&casimir(alg))).is_ok());
            assert!(coords.coords(&w0.project(&(alg.f() * alg.e()))).is_err());
        }
    }

    #[test]
    fn casimir_coproduct() {
        for p in [2, 3] {
            assert!(verify_casimir_coproduct(p).unwrap().passed());
            let alg = Algebra::restricted(p).unwrap();
            assert!(casimir(alg).commutator(&alg.e()).is_zero());
        }
    }

    #[test]
    fn center_structure() {
        for p in [2, 3] {
            let data = CenterData::get(p).unwrap();
            let rep = verify_center(data);
            assert!(rep.passed(), "{rep}");
            let e0 = data.named("e0").unwrap();
            let xm = ModuleRep::simple(p, p, Sign::Minus).unwrap();
            assert_eq!(xm.act(&e0).unwrap(), Matrix::identity(xm.scalars().field(), xm.dim));
            assert_eq!(data.named("w−1"), data.named("w-1"));
            assert!(data.named("w+0").is_none());
            let m = data.model(p - 1, Sign::Plus);
            assert_eq!(m.projector, Matrix::identity(m.projector.field(), 2 * p as usize));
        }
    }

    #[test]
    fn model_sizes_at_three() {
        let data = CenterData::get(3).unwrap();
        let m = data.model(1, Sign::Plus);
        assert_eq!(m.ambient.dim, 12);
        assert_eq!(m.projector.rank(), 6);
        let top = data.model(3, Sign::Plus);
        assert_eq!(top.ambient.dim, 3);
        // X_p^+ ⊗ X_2^+ is entirely in block p−1.
        let x = ModuleRep::simple(3, 3, Sign::Plus).unwrap().tensor(&ModuleRep::simple(3, 2, Sign::Plus).unwrap()).unwrap();
        assert_eq!(x.act(&data.idempotents[2]).unwrap(), Matrix::identity(x.scalars().field(), 6));
    }
}
