//! The right integral `μ` of `U`.

use crate::error::{Error, Result};
use crate::hopf::{Algebra, Element};
use crate::report::Report;
use crate::scalars::CycloScalar;

#[derive(Clone, Debug)]
pub struct IntegralData {
    alg: &'static Algebra,
    /// `ζ = −√(2/p) ([p−1]!)²`.
    pub zeta: CycloScalar,
    /// `δ = (1−i)/√2 · q^{(3−p²)/2}`.
    pub delta: CycloScalar,
    /// Exponents `(a, b, c)` of the monomial picked out by `μ`.
    pub support: (u32, u32, u32),
}

/// `ζ = −√(2/p)([p−1]!)²`.
pub fn normalization(p: u32) -> Result<CycloScalar> {
    let alg = Algebra::restricted(p)?;
    let sc = alg.scalars();
    let fact = sc.quantum_factorial(p - 1);
    Ok(-(sc.sqrt_int(2 * p)? / sc.int(p as i64)) * &fact * &fact)
}

/// Closed form `δ = (1−i)/√2 · q^{(3−p²)/2}`.
pub fn delta_closed_form(p: u32) -> Result<CycloScalar> {
    let sc = Algebra::restricted(p)?.scalars();
    let pi = p as i64;
    Ok((sc.one() - sc.i()) / sc.sqrt_positive(2)? * sc.q_half_pow(3 - pi * pi))
}

impl IntegralData {
    pub fn new(p: u32) -> Result<Self> {
        let alg = Algebra::restricted(p)?;
        Ok(IntegralData { alg, zeta: normalization(p)?, delta: delta_closed_form(p)?, support: (p - 1, p - 1, p + 1) })
    }

    pub fn algebra(&self) -> &'static Algebra {
        self.alg
    }

    /// Coefficient of `E^a F^b K^c` times `ζ`.
    pub fn mu(&self, x: &Element) -> CycloScalar {
        self.mu_at(x, self.support)
    }

    fn mu_at(&self, x: &Element, (a, b, c): (u32, u32, u32)) -> CycloScalar {
        let alg = self.alg;
        let cd = alg.cartan_order();
        let mut acc = alg.scalars().zero();
        for l in 0..cd {
            let coeff = x.coeff(alg.index(a, b, l));
            if !coeff.is_zero() {
                acc += &(&coeff * alg.zeta(-(l as i64) * c as i64));
            }
        }
        acc * alg.scalars().rational(1, cd as i64) * &self.zeta
    }

    /// `μ` on a single basis vector `E^a F^b π_λ`.
    pub fn mu_basis(&self, i: u32) -> CycloScalar {
        let alg = self.alg;
        let (a, b, l) = alg.split(i);
        if (a, b) != (self.support.0, self.support.1) {
            return alg.scalars().zero();
        }
        alg.zeta(-(l as i64) * self.support.2 as i64) * &alg.scalars().rational(1, alg.cartan_order() as i64) * &self.zeta
    }

    /// `μ_z(x) = μ(z x)` for central `z`.
    pub fn mu_twisted(&self, z: &Element, x: &Element) -> Result<CycloScalar> {
        if !is_central(z) {
            return Err(Error::Construction("twisting element is not central".into()));
        }
        Ok(self.mu(&(z * x)))
    }

    /// Checks `μ(r) = δ` and `μ(r⁻¹) = δ⁻¹`.
    pub fn check_delta(&self, ribbon: &Element, ribbon_inv: &Element) -> Result<()> {
        let got = self.mu(ribbon);
        if got != self.delta {
            return Err(Error::Construction(format!("μ(r) = {got} differs from the closed form {}", self.delta)));
        }
        if &self.mu(ribbon_inv) * &self.delta != self.alg.scalars().one() {
            return Err(Error::Construction("μ(r⁻¹) δ ≠ 1".into()));
        }
        Ok(())
    }
}

pub fn is_central(z: &Element) -> bool {
    let alg = z.algebra();
    [alg.e(), alg.f(), alg.k()].iter().all(|x| x * z == z * x)
}

/// `(μ⊗id)Δ(x) = μ(x)·1` for every basis vector, optionally with the
/// functional evaluated at a different monomial (negative control).
pub fn verify_right_integral(data: &IntegralData) -> Report {
    verify_right_integral_at(data, data.support)
}

pub fn verify_right_integral_at(data: &IntegralData, support: (u32, u32, u32)) -> Report {
    let mut rep = Report::new("right integral");
    let alg = data.alg;
    let cd = alg.cartan_order();
    let mu_b = |i: u32| {
        let (a, b, l) = alg.split(i);
        if (a, b) != (support.0, support.1) {
            return alg.scalars().zero();
        }
        alg.zeta(-(l as i64) * support.2 as i64) * &alg.scalars().rational(1, cd as i64) * &data.zeta
    };
    let mut bad = Vec::new();
    for (m, x) in alg.pbw_basis() {
        let lhs = x.coproduct().apply_functional(0, mu_b);
        let mux = data.mu_at(&x, support);
        let rhs = crate::hopf::Tensor::from_element(&alg.scalar(mux));
        if lhs != rhs {
            bad.push(m);
        }
    }
    rep.check_with(format!("(μ⊗id)Δ(x) = μ(x)1 on {} basis elements", alg.dim()), bad.is_empty(), || {
        format!("fails on {} elements, first {:?}", bad.len(), bad[0])
    });
    rep
}

/// Each `μ_z` is a quantum character and the family is linearly independent.
pub fn verify_qchar(data: &IntegralData, center_basis: &[Element], samples: &[(Element, Element)]) -> Report {
    let mut rep = Report::new("quantum characters");
    for (n, z) in center_basis.iter().enumerate() {
        let ok = samples.iter().all(|(x, y)| {
            let lhs = data.mu(&(z * &(x * y)));
            let rhs = data.mu(&(z * &(y.antipode().antipode() * x)));
            lhs == rhs
        });
        rep.check(format!("μ_z(xy) = μ_z(S²(y)x) for center basis element {n}"), ok);
    }
    let alg = data.alg;
    let rows: Vec<Vec<CycloScalar>> =
        center_basis.iter().map(|z| alg.pbw_basis().iter().map(|(_, x)| data.mu(&(z * x))).collect()).collect();
    let m = crate::linalg::Matrix::from_rows(alg.scalars().field(), rows);
    let rank = m.rank();
    rep.check_with(format!("rank of {{μ_z}} = {}", center_basis.len()), rank == center_basis.len(), || format!("rank {rank}"));
    let g = alg.cartan_power(alg.p() as i64 + 1);
    let cyclic = samples.iter().all(|(x, y)| data.mu(&(&g * &(x * y))) == data.mu(&(&g * &(y * x))));
    rep.check("x ↦ μ(gx) is cyclic", cyclic);
    rep
}
