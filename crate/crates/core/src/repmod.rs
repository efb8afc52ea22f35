//! Matrix models of `U`-modules: simples, tensor products, quantum traces and
//! projective covers cut out of tensor ambients by central idempotents.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{Algebra, AlgebraKind, Element};
use crate::linalg::Matrix;
use crate::scalars::{CycloScalar, Scalars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `−1`.
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" | "plus" => Some(Sign::Plus),
            "-" | "−" | "minus" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleLabel {
    Simple { s: u32, sign: Sign },
    Tensor(Vec<ModuleLabel>),
    Projective { j: u32, sign: Sign },
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleLabel::Simple { s, sign } => write!(f, "X({s},{sign})"),
            ModuleLabel::Projective { j, sign } => write!(f, "P({j},{sign})"),
            ModuleLabel::Tensor(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", names.join(" ⊗ "))
            }
        }
    }
}

/// A finite-dimensional `U`-module on which `K` acts diagonally.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    alg: &'static Algebra,
    pub dim: usize,
    pub mat_e: Matrix,
    pub mat_f: Matrix,
    pub mat_k: Matrix,
    pub mat_kinv: Matrix,
    /// `K v_i = q^{weights[i]} v_i`, exponents reduced mod `2p`.
    pub weights: Vec<u32>,
    pub label: ModuleLabel,
    e_pows: Vec<Matrix>,
    f_pows: Vec<Matrix>,
}

impl ModuleRep {
    fn from_parts(alg: &'static Algebra, e: Matrix, f: Matrix, weights: Vec<u32>, label: ModuleLabel) -> Result<Self> {
        let sc = alg.scalars();
        let k: Vec<CycloScalar> = weights.iter().map(|&w| sc.q_pow(w as i64)).collect();
        let kinv: Vec<CycloScalar> = weights.iter().map(|&w| sc.q_pow(-(w as i64))).collect();
        let field = sc.field();
        let mut e_pows = vec![Matrix::identity(field, weights.len())];
        let mut f_pows = vec![Matrix::identity(field, weights.len())];
        for n in 1..alg.p() as usize {
            e_pows.push(e_pows[n - 1].matmul(&e));
            f_pows.push(f_pows[n - 1].matmul(&f));
        }
        let rep = ModuleRep {
            alg,
            dim: weights.len(),
            mat_k: Matrix::diagonal(field, &k),
            mat_kinv: Matrix::diagonal(field, &kinv),
            mat_e: e,
            mat_f: f,
            weights,
            label,
            e_pows,
            f_pows,
        };
        rep.check_relations()?;
        Ok(rep)
    }

    /// The simple module `X_s^±` with highest weight `±q^{s−1}`.
    pub fn simple(p: u32, s: u32, sign: Sign) -> Result<Self> {
        let alg = Algebra::restricted(p)?;
        if s == 0 || s > p {
            return Err(Error::Construction(format!("simple module dimension {s} outside 1..={p}")));
        }
        let sc = alg.scalars();
        let field = sc.field();
        let n = s as usize;
        let shift = if sign == Sign::Plus { 0 } else { p as i64 };
        let weights = (0..s as i64).map(|i| (s as i64 - 1 - 2 * i + shift).rem_euclid(2 * p as i64) as u32).collect();
        let mut e = Matrix::zeros(field, n, n);
        let mut f = Matrix::zeros(field, n, n);
        for i in 1..n {
            f[(i, i - 1)] = sc.one();
            let c = sc.quantum_integer(i as i64) * sc.quantum_integer(s as i64 - i as i64);
            e[(i - 1, i)] = c * sc.int(sign.value());
        }
        ModuleRep::from_parts(alg, e, f, weights, ModuleLabel::Simple { s, sign })
    }

    pub fn algebra(&self) -> &'static Algebra {
        self.alg
    }

    pub fn scalars(&self) -> &Scalars {
        self.alg.scalars()
    }

    pub fn p(&self) -> u32 {
        self.alg.p()
    }

    /// `V ⊗ W` with `Δ(E) = 1⊗E + E⊗K`, `Δ(F) = K⁻¹⊗F + F⊗1`.
    pub fn tensor(&self, other: &ModuleRep) -> Result<ModuleRep> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch(format!("{} vs {}", self.alg.name(), other.alg.name())));
        }
        let field = self.scalars().field();
        let id_v = Matrix::identity(field, self.dim);
        let id_w = Matrix::identity(field, other.dim);
        let e = &id_v.kron(&other.mat_e) + &self.mat_e.kron(&other.mat_k);
        let f = &self.mat_kinv.kron(&other.mat_f) + &self.mat_f.kron(&id_w);
        let two_p = 2 * self.p();
        let weights =
            self.weights.iter().flat_map(|&a| other.weights.iter().map(move |&b| (a + b) % two_p)).collect();
        let mut parts = Vec::new();
        for l in [&self.label, &other.label] {
            match l {
                ModuleLabel::Tensor(v) => parts.extend(v.iter().cloned()),
                _ => parts.push(l.clone()),
            }
        }
        ModuleRep::from_parts(self.alg, e, f, weights, ModuleLabel::Tensor(parts))
    }

    fn check_relations(&self) -> Result<()> {
        let sc = self.scalars();
        let q2 = sc.q_pow(2);
        let (e, f, k, ki) = (&self.mat_e, &self.mat_f, &self.mat_k, &self.mat_kinv);
        let id = Matrix::identity(sc.field(), self.dim);
        let fail = |what: &str| Err(Error::Construction(format!("{}: relation {what} fails", self.label)));
        if (k * ki) != id {
            return fail("K K⁻¹ = 1");
        }
        if (k * e) != (e * k).scale(&q2) {
            return fail("K E = q² E K");
        }
        if (k * f).scale(&q2) != (f * k) {
            return fail("K F = q⁻² F K");
        }
        let comm = &(e * f) - &(f * e);
        if comm != (k - ki).scale(&sc.q_diff().inverse()?) {
            return fail("[E, F] = (K − K⁻¹)/(q − q⁻¹)");
        }
        let p = self.p();
        if !self.e_pows[p as usize - 1].matmul(e).is_zero() || !self.f_pows[p as usize - 1].matmul(f).is_zero() {
            return fail("E^p = F^p = 0");
        }
        Ok(())
    }

    /// `ρ(x)` for `x ∈ U`.
    pub fn act(&self, x: &Element) -> Result<Matrix> {
        if x.algebra().kind() != AlgebraKind::Restricted || x.algebra().p() != self.p() {
            return Err(Error::AlgebraMismatch(format!("cannot act by an element of {}", x.algebra().name())));
        }
        let alg = self.alg;
        let field = self.scalars().field();
        let p = self.p() as usize;
        // Group by the E exponent: ρ(x) = Σ_a ρ(E)^a Σ_b ρ(F)^b D_{a,b}.
        let mut diag: Vec<Vec<Option<Vec<CycloScalar>>>> = vec![vec![None; p]; p];
        for (i, c) in x.terms() {
            let (a, b, l) = alg.split(i);
            let d = diag[a as usize][b as usize].get_or_insert_with(|| vec![field.zero(); self.dim]);
            for (slot, &w) in self.weights.iter().enumerate() {
                if w == l {
                    d[slot] += c;
                }
            }
        }
        let mut out = Matrix::zeros(field, self.dim, self.dim);
        for (a, row) in diag.iter().enumerate() {
            let mut inner = Matrix::zeros(field, self.dim, self.dim);
            let mut any = false;
            for (b, d) in row.iter().enumerate() {
                let Some(d) = d else { continue };
                let fb = &self.f_pows[b];
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        if !d[c].is_zero() && !fb[(r, c)].is_zero() {
                            let t = &fb[(r, c)] * &d[c];
                            inner[(r, c)] += &t;
                            any = true;
                        }
                    }
                }
            }
            if any {
                out = &out + &self.e_pows[a].matmul(&inner);
            }
        }
        Ok(out)
    }

    /// Diagonal entries of `ρ(g^{±1})`, `g = K^{p+1}`.
    pub fn pivotal_diagonal(&self, inverse: bool) -> Vec<CycloScalar> {
        let e = self.p() as i64 + 1;
        let e = if inverse { -e } else { e };
        self.weights.iter().map(|&w| self.scalars().q_pow(e * w as i64)).collect()
    }

    pub fn is_equivariant(&self, m: &Matrix) -> bool {
        [&self.mat_e, &self.mat_f, &self.mat_k].iter().all(|x| x.matmul(m) == m.matmul(x))
    }

    /// `tr(ρ(g^{±1}) f)` for any `f`, equivariant or not.
    pub fn pivotal_trace(&self, f: &Matrix, inverse: bool) -> CycloScalar {
        weighted_trace(f, &self.pivotal_diagonal(inverse))
    }

    /// `tr(ρ(g) f)`.
    pub fn qtrace_right(&self, f: &Matrix) -> CycloScalar {
        debug_assert!(self.is_equivariant(f), "quantum trace of a non-equivariant map");
        weighted_trace(f, &self.pivotal_diagonal(false))
    }

    /// `tr(ρ(g⁻¹) f)`.
    pub fn qtrace_left(&self, f: &Matrix) -> CycloScalar {
        debug_assert!(self.is_equivariant(f), "quantum trace of a non-equivariant map");
        weighted_trace(f, &self.pivotal_diagonal(true))
    }
}

fn weighted_trace(f: &Matrix, w: &[CycloScalar]) -> CycloScalar {
    w.iter().enumerate().fold(f.field().zero(), |acc, (i, g)| {
        let d = &f[(i, i)];
        if d.is_zero() {
            acc
        } else {
            acc + d * g
        }
    })
}

/// Traces out `W` from an endomorphism of `V ⊗ W`, weighted by `ρ_W(g)`.
pub fn partial_qtrace_right(f: &Matrix, v: &ModuleRep, w: &ModuleRep) -> Result<Matrix> {
    check_shape(f, v, w)?;
    let g = w.pivotal_diagonal(false);
    let mut out = Matrix::zeros(f.field(), v.dim, v.dim);
    for i in 0..v.dim {
        for k in 0..v.dim {
            let mut acc = f.field().zero();
            for (j, gj) in g.iter().enumerate() {
                let x = &f[(i * w.dim + j, k * w.dim + j)];
                if !x.is_zero() {
                    acc += &(x * gj);
                }
            }
            out[(i, k)] = acc;
        }
    }
    Ok(out)
}

/// Traces out `V` from an endomorphism of `V ⊗ W`, weighted by `ρ_V(g⁻¹)`.
pub fn partial_qtrace_left(f: &Matrix, v: &ModuleRep, w: &ModuleRep) -> Result<Matrix> {
    check_shape(f, v, w)?;
    let g = v.pivotal_diagonal(true);
    let mut out = Matrix::zeros(f.field(), w.dim, w.dim);
    for j in 0..w.dim {
        for l in 0..w.dim {
            let mut acc = f.field().zero();
            for (i, gi) in g.iter().enumerate() {
                let x = &f[(i * w.dim + j, i * w.dim + l)];
                if !x.is_zero() {
                    acc += &(x * gi);
                }
            }
            out[(j, l)] = acc;
        }
    }
    Ok(out)
}

fn check_shape(f: &Matrix, v: &ModuleRep, w: &ModuleRep) -> Result<()> {
    let n = v.dim * w.dim;
    if f.rows() != n || f.cols() != n {
        return Err(Error::ArityMismatch(f.rows(), n));
    }
    Ok(())
}

/// `P_j^±` realized as the image of a central idempotent on
/// `X_p^± ⊗ (X_2^+)^{⊗(p−j)}`.
#[derive(Clone, Debug)]
pub struct ProjectiveModel {
    pub ambient: ModuleRep,
    pub projector: Matrix,
    pub j: u32,
    pub sign: Sign,
}

impl ProjectiveModel {
    /// `idempotent` must be the central idempotent of the block containing
    /// `P_j^±` (`e_j` for `+`, `e_{p−j}` for `−`); it is ignored for `j = p`.
    pub fn new(p: u32, j: u32, sign: Sign, idempotent: &Element) -> Result<Self> {
        if j == 0 || j > p {
            return Err(Error::Construction(format!("projective label {j} outside 1..={p}")));
        }
        let top = ModuleRep::simple(p, p, sign)?;
        if j == p {
            let projector = Matrix::identity(top.scalars().field(), top.dim);
            return Ok(ProjectiveModel { ambient: top, projector, j, sign });
        }
        let two = ModuleRep::simple(p, 2, Sign::Plus)?;
        let mut ambient = top;
        for _ in 0..p - j {
            ambient = ambient.tensor(&two)?;
        }
        let projector = ambient.act(idempotent)?;
        if projector.matmul(&projector) != projector {
            return Err(Error::Construction(format!("P({j},{sign}): projector is not idempotent")));
        }
        if !ambient.is_equivariant(&projector) {
            return Err(Error::Construction(format!("P({j},{sign}): projector is not equivariant")));
        }
        let rank = projector.rank();
        if rank != 2 * p as usize {
            return Err(Error::Construction(format!("P({j},{sign}): projector rank {rank}, expected {}", 2 * p)));
        }
        Ok(ProjectiveModel { ambient, projector, j, sign })
    }

    pub fn label(&self) -> ModuleLabel {
        ModuleLabel::Projective { j: self.j, sign: self.sign }
    }

    /// `ρ(x)` restricted to the summand, as an endomorphism of the ambient.
    pub fn act(&self, x: &Element) -> Result<Matrix> {
        Ok(self.ambient.act(x)?.matmul(&self.projector))
    }

    pub fn qtrace_right(&self, f: &Matrix) -> CycloScalar {
        self.ambient.qtrace_right(&f.matmul(&self.projector))
    }

    pub fn qtrace_left(&self, f: &Matrix) -> CycloScalar {
        self.ambient.qtrace_left(&f.matmul(&self.projector))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn casimir(alg: &'static Algebra) -> Element {
        let sc = alg.scalars();
        let qd = sc.q_diff();
        let k = (alg.k().scale(&sc.q()) + alg.cartan_power(-1).scale(&sc.q_pow(-1))).scale(&(&qd * &qd).inverse().unwrap());
        alg.f() * alg.e() + k
    }

    #[test]
    fn simple_examples() {
        let p = 3;
        let x2 = ModuleRep::simple(p, 2, Sign::Plus).unwrap();
        let sc = *x2.scalars();
        assert_eq!(x2.mat_k, Matrix::diagonal(sc.field(), &[sc.q(), sc.q_pow(-1)]));
        assert!(x2.mat_f[(1, 0)].is_one());
        assert!(x2.mat_e[(0, 1)].is_one());
        let triv = ModuleRep::simple(p, 1, Sign::Plus).unwrap();
        assert!(triv.mat_e.is_zero() && triv.mat_f.is_zero() && triv.mat_k[(0, 0)].is_one());
        let sgn = ModuleRep::simple(p, 1, Sign::Minus).unwrap();
        assert_eq!(sgn.mat_k[(0, 0)], sc.int(-1));
        for s in 1..=p {
            for sign in Sign::both() {
                let v = ModuleRep::simple(p, s, sign).unwrap();
                let top = sc.q_pow(s as i64 - 1) * sc.int(sign.value());
                assert_eq!(v.mat_k[(0, 0)], top);
                assert!((0..v.dim).all(|r| v.mat_e[(r, 0)].is_zero()));
                let id = Matrix::identity(sc.field(), v.dim);
                assert_eq!(v.qtrace_left(&id), v.qtrace_right(&id));
            }
        }
        assert!(ModuleRep::simple(p, 4, Sign::Plus).is_err());
    }

    #[test]
    fn tensor_and_act() {
        for p in [2, 3, 4] {
            let alg = Algebra::restricted(p).unwrap();
            let sc = *alg.scalars();
            let x1 = ModuleRep::simple(p, 1, Sign::Plus).unwrap();
            let x2 = ModuleRep::simple(p, 2, Sign::Plus).unwrap();
            let xp = ModuleRep::simple(p, p, Sign::Minus).unwrap();
            let t = x1.tensor(&xp).unwrap();
            assert_eq!(t.mat_e, xp.mat_e);
            assert_eq!(t.mat_f, xp.mat_f);
            assert_eq!(x2.tensor(&x2).unwrap().dim, 4);
            let v = xp.tensor(&x2).unwrap();
            assert_eq!(v.act(&alg.one()).unwrap(), Matrix::identity(sc.field(), v.dim));
            assert!(v.act(&alg.e().pow(p)).unwrap().is_zero());
            assert_eq!(v.act(&alg.e()).unwrap(), v.mat_e);
            assert_eq!(v.act(&alg.f()).unwrap(), v.mat_f);
            assert_eq!(v.act(&alg.k()).unwrap(), v.mat_k);
            let x = alg.e() * alg.f() * alg.k() + alg.f().pow(2) * alg.scalar(sc.q());
            let y = alg.f() * alg.e() * alg.e() - alg.cartan_power(3);
            assert_eq!(v.act(&(&x * &y)).unwrap(), v.act(&x).unwrap().matmul(&v.act(&y).unwrap()));
            // Full trace equals the trace of either partial trace.
            let f = v.act(&casimir(alg)).unwrap();
            assert!(v.is_equivariant(&f));
            let pr = partial_qtrace_right(&f, &xp, &x2).unwrap();
            let pl = partial_qtrace_left(&f, &xp, &x2).unwrap();
            assert_eq!(xp.qtrace_right(&pr), v.qtrace_right(&f));
            assert_eq!(x2.qtrace_left(&pl), v.qtrace_left(&f));
            let trivial_minus = ModuleRep::simple(p, 1, Sign::Minus).unwrap();
            let id1 = Matrix::identity(sc.field(), 1);
            assert_eq!(trivial_minus.qtrace_right(&id1), sc.sign(p as i64 + 1));
        }
    }

    #[test]
    fn casimir_is_scalar_on_simples() {
        for p in [2, 3] {
            let alg = Algebra::restricted(p).unwrap();
            let sc = *alg.scalars();
            let qd = sc.q_diff();
            let c = casimir(alg);
            for s in 1..=p {
                for sign in Sign::both() {
                    let v = ModuleRep::simple(p, s, sign).unwrap();
                    let m = v.act(&c).unwrap();
                    let expected = (sc.q_pow(s as i64) + sc.q_pow(-(s as i64))) * sc.int(sign.value()) / (&qd * &qd);
                    assert_eq!(m, Matrix::identity(sc.field(), v.dim).scale(&expected));
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_identity_over_two() {
        let p = 3;
        let sc = Scalars::new(p).unwrap();
        let x2 = ModuleRep::simple(p, 2, Sign::Plus).unwrap();
        let xp = ModuleRep::simple(p, p, Sign::Plus).unwrap();
        let expected = -(sc.q() + sc.q_pow(-1));
        let v = x2.tensor(&xp).unwrap();
        let id = Matrix::identity(sc.field(), v.dim);
        let pl = partial_qtrace_left(&id, &x2, &xp).unwrap();
        assert_eq!(pl, Matrix::identity(sc.field(), xp.dim).scale(&expected));
        let pr = partial_qtrace_right(&id, &xp, &x2).unwrap();
        assert_eq!(pr, Matrix::identity(sc.field(), xp.dim).scale(&expected));
        assert!(partial_qtrace_right(&Matrix::identity(sc.field(), 2), &xp, &x2).is_err());
    }
}
