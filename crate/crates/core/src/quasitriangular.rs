//! The R-matrix of `D`, the monodromy, the Drinfeld element, the ribbon
//! element and the balancing element.

use crate::cache::{memoize, Registry};
use crate::error::{Error, Result};
use crate::hopf::{Algebra, Element, Monomial, Tensor};
use crate::report::Report;

/// Ribbon structure at one level. `R` lives in `D⊗D`; everything else is
/// stored in `U`.
#[derive(Clone, Debug)]
pub struct RibbonData {
    pub p: u32,
    pub r_matrix: Tensor,
    pub r_inv: Tensor,
    pub r21: Tensor,
    pub monodromy: Tensor,
    pub monodromy_inv: Tensor,
    pub u: Element,
    pub u_inv: Element,
    pub ribbon: Element,
    pub ribbon_inv: Element,
    pub balancing: Element,
    pub balancing_inv: Element,
}

/// `R = (1/4p) Σ ((q−q⁻¹)^m/[m]!) q^{m(m−1)/2 + m(n−j) − nj/2} e^m k^n ⊗ φ^m k^j`.
pub fn build_r(p: u32) -> Result<Tensor> {
    let d = Algebra::double(p)?;
    let sc = d.scalars();
    let cd = d.cartan_order() as i64;
    let norm = sc.rational(1, cd);
    let mut terms = Vec::new();
    for m in 0..p {
        let mi = m as i64;
        let lead = &norm * &sc.q_diff().pow(mi) / sc.quantum_factorial(m);
        for n in 0..cd {
            for j in 0..cd {
                // exponent of q^{1/2}
                let half = mi * (mi - 1) + 2 * mi * (n - j) - n * j;
                let c = &lead * &sc.q_half_pow(half);
                terms.push((vec![Monomial::new(m, 0, n as u32), Monomial::new(0, m, j as u32)], c));
            }
        }
    }
    Ok(Tensor::from_pbw(d, 2, terms))
}

/// `R⁻¹ = (S⊗id)(R)`, checked by multiplication.
pub fn build_r_inv(r: &Tensor) -> Result<Tensor> {
    let inv = r.antipode_slot(0);
    let one = Tensor::one(r.algebra(), 2);
    if &inv * r != one || r * &inv != one {
        return Err(Error::Construction("(S⊗id)(R) is not a two-sided inverse of R".into()));
    }
    Ok(inv)
}

/// `r = ((1−i)/(2√p)) Σ ((q−q⁻¹)^m/[m]!) q^{−m/2 + mj + (j+p+1)²/2} φ^m e^m k^{2j}`, in `U`.
pub fn build_ribbon(p: u32) -> Result<Element> {
    let d = Algebra::double(p)?;
    let sc = d.scalars();
    let pref = (sc.one() - sc.i()) / (sc.int(2) * sc.sqrt_int(p)?);
    let (e, f) = (d.e(), d.f());
    let mut acc = d.zero();
    for m in 0..p {
        let mi = m as i64;
        let lead = &pref * &sc.q_diff().pow(mi) / sc.quantum_factorial(m);
        let fe = f.pow(m) * e.pow(m);
        for j in 0..2 * p as i64 {
            let half = -mi + 2 * mi * j + (j + p as i64 + 1).pow(2);
            let c = &lead * &sc.q_half_pow(half);
            acc = acc + (&fe * &d.cartan_power(2 * j)).scale(&c);
        }
    }
    acc.to_restricted()
        .map_err(|e| Error::Construction(format!("ribbon element is not in U: {e}")))
}

/// `u = Σ S(β_i) α_i` for `R = Σ α_i ⊗ β_i`, in `U`.
pub fn build_u(r: &Tensor) -> Result<Element> {
    r.antipode_slot(1)
        .multiply_slots(&[1, 0])
        .to_restricted()
        .map_err(|e| Error::Construction(format!("Drinfeld element is not in U: {e}")))
}

/// `u⁻¹ = Σ β_i S²(α_i)`, in `U`.
pub fn build_u_inv(r: &Tensor) -> Result<Element> {
    let d = r.algebra();
    r.map_slot(0, |i| d.basis(i).antipode().antipode())
        .multiply_slots(&[1, 0])
        .to_restricted()
        .map_err(|e| Error::Construction(format!("inverse Drinfeld element is not in U: {e}")))
}

/// `g = K^{p+1}`.
pub fn balancing(p: u32) -> Result<Element> {
    Ok(Algebra::restricted(p)?.cartan_power(p as i64 + 1))
}

/// `M = R₂₁ R`, in `U⊗U`.
pub fn monodromy(r: &Tensor) -> Result<Tensor> {
    (r.permute(&[1, 0]) * r)
        .to_restricted()
        .map_err(|e| Error::Construction(format!("monodromy is not in U⊗U: {e}")))
}

static RIBBONS: Registry<RibbonData> = Registry::new();

impl RibbonData {
    /// Built once per level.
    pub fn get(p: u32) -> Result<&'static RibbonData> {
        memoize(&RIBBONS, p, || RibbonData::build(p))
    }

    pub fn build(p: u32) -> Result<Self> {
        let r_matrix = build_r(p)?;
        let r_inv = build_r_inv(&r_matrix)?;
        let r21 = r_matrix.permute(&[1, 0]);
        let monodromy = monodromy(&r_matrix)?;
        let monodromy_inv = (&r_inv * &r_inv.permute(&[1, 0]))
            .to_restricted()
            .map_err(|e| Error::Construction(format!("inverse monodromy is not in U⊗U: {e}")))?;
        let u = build_u(&r_matrix)?;
        let u_inv = build_u_inv(&r_matrix)?;
        let ribbon = build_ribbon(p)?;
        let balancing = balancing(p)?;
        let uu = u.algebra();
        let balancing_inv = uu.cartan_power(-(p as i64) - 1);
        let ribbon_inv = &balancing * &u_inv;
        if &ribbon * &ribbon_inv != uu.one() {
            return Err(Error::Construction("g·u⁻¹ is not inverse to the ribbon element".into()));
        }
        if &u * &u_inv != uu.one() {
            return Err(Error::Construction("Σ β S²(α) is not inverse to u".into()));
        }
        Ok(RibbonData { p, r_matrix, r_inv, r21, monodromy, monodromy_inv, u, u_inv, ribbon, ribbon_inv, balancing, balancing_inv })
    }

    pub fn restricted(&self) -> &'static Algebra {
        self.u.algebra()
    }

    pub fn double(&self) -> &'static Algebra {
        self.r_matrix.algebra()
    }
}

/// Checks the quasitriangular axioms of `R` in `D`.
pub fn verify_quasitriangular(r: &Tensor) -> Report {
    let mut rep = Report::new("quasitriangular");
    let d = r.algebra();
    let inv = r.antipode_slot(0);
    let one2 = Tensor::one(d, 2);
    rep.check("R·R⁻¹ = 1⊗1", &inv * r == one2 && r * &inv == one2);
    rep.check("(ε⊗id)R = 1", r.counit_slot(0) == Tensor::one(d, 1));
    rep.check("(id⊗ε)R = 1", r.counit_slot(1) == Tensor::one(d, 1));
    for (name, x) in [("e", d.e()), ("phi", d.f()), ("k", d.k())] {
        let dx = x.coproduct();
        let lhs = r * &dx * &inv;
        rep.check_with(format!("R Δ({name}) R⁻¹ = Δop({name})"), lhs == dx.permute(&[1, 0]), || {
            format!("{} differing terms", (lhs.clone() - dx.permute(&[1, 0])).len())
        });
    }
    let r12 = r.inflate(3, &[0, 1]);
    let r13 = r.inflate(3, &[0, 2]);
    let r23 = r.inflate(3, &[1, 2]);
    let delta1 = r.coproduct_slot(0);
    rep.check("(Δ⊗id)R = R13 R23", delta1 == &r13 * &r23);
    let delta2 = r.coproduct_slot(1);
    rep.check("(id⊗Δ)R = R13 R12", delta2 == &r13 * &r12);
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    rep.check_with("Yang–Baxter R12 R13 R23 = R23 R13 R12", lhs == rhs, || format!("{} differing terms", (lhs.clone() - rhs.clone()).len()));
    rep
}

/// Checks the ribbon relations and the balancing element.
pub fn verify_ribbon(data: &RibbonData) -> Report {
    let mut rep = Report::new("ribbon");
    let u = data.restricted();
    let r = &data.ribbon;
    let gens = [u.e(), u.f(), u.k()];
    rep.check("r central", gens.iter().all(|x| x * r == r * x));
    rep.check("r invertible", r * &data.ribbon_inv == u.one());
    rep.check("r² = u S(u)", r * r == &data.u * &data.u.antipode());
    rep.check("S(r) = r", r.antipode() == *r);
    rep.check("ε(r) = 1", r.counit().is_one());
    let rr = Tensor::pure(&[r.clone(), r.clone()]);
    rep.check("Δ(r) = M⁻¹ (r⊗r)", r.coproduct() == &data.monodromy_inv * &rr);
    let uu = Tensor::pure(&[data.u.clone(), data.u.clone()]);
    rep.check("Δ(u) = M⁻¹ (u⊗u)", data.u.coproduct() == &data.monodromy_inv * &uu);
    rep.check("M M⁻¹ = 1⊗1", &data.monodromy * &data.monodromy_inv == Tensor::one(u, 2));
    rep.check("M ∈ U⊗U", data.r21.clone() * &data.r_matrix == data.monodromy.embed().unwrap_or_else(|_| Tensor::zero(u, 2)));
    let g = &data.balancing;
    rep.check("r⁻¹ u = K^{p+1}", &data.ribbon_inv * &data.u == *g);
    rep.check("Δ(g) = g⊗g", g.coproduct() == Tensor::pure(&[g.clone(), g.clone()]));
    rep.check("ε(g) = 1", g.counit().is_one());
    let mut s2_ok = true;
    let mut s2_u = true;
    for (_, x) in u.pbw_basis() {
        let s2 = x.antipode().antipode();
        s2_ok &= g * &x * &data.balancing_inv == s2;
        s2_u &= &data.u * &x * &data.u_inv == s2;
    }
    rep.check("S²(x) = g x g⁻¹ on the basis", s2_ok);
    rep.check("S²(x) = u x u⁻¹ on the basis", s2_u);
    rep
}

/// Rank of the coefficient matrix of `M` (left slot × right slot).
pub fn monodromy_rank(data: &RibbonData) -> usize {
    let u = data.restricted();
    let n = u.dim();
    let mut m = crate::linalg::Matrix::zeros(u.scalars().field(), n, n);
    for (k, c) in data.monodromy.terms() {
        m[(k[0] as usize, k[1] as usize)] = c.clone();
    }
    m.rank()
}
