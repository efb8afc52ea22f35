//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use loghen::center::{verify_center, CenterData};
use loghen::hh0::ClassLabel;
use loghen::hopf::{verify_hopf, Algebra, Element, Tensor};
use loghen::integral::{is_central, verify_right_integral, IntegralData};
use loghen::invariant::{invariance_suite, ColoredSurgeryInput, InvariantEngine};
use loghen::linalg::Matrix;
use loghen::mtrace::{pairing_table, solve_trace_recursion, Side, TracePrime};
use loghen::quasitriangular::{verify_quasitriangular, verify_ribbon, RibbonData};
use loghen::repmod::Sign;
use loghen::scalars::{CycloScalar, Scalars};
use loghen::tangle::{closed_evaluations, verify_tangle, ClosurePresentation, ColorSpec, Convention, Role, Sweeper, MARKOV_CORPUS};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(rep: loghen::report::Report) -> Outcome {
    ensure(rep.passed(), || rep.to_string())
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Outcome {
    ensure(elapsed <= budget, || format!("{what} took {elapsed:?}, budget {budget:?}"))
}

fn c1_hopf() -> Outcome {
    let start = Instant::now();
    for p in [2, 3] {
        report(verify_hopf(Algebra::restricted(p).map_err(|e| e.to_string())?))?;
        report(verify_hopf(Algebra::double(p).map_err(|e| e.to_string())?))?;
        // S²(E) = K E K⁻¹ = q² E, by hand.
        let u = Algebra::restricted(p).unwrap();
        ensure(u.e().antipode().antipode() == u.e().scale(&u.scalars().q_pow(2)), || "S²(E) ≠ q²E".into())?;
    }
    within(start.elapsed(), Duration::from_secs(60), "Hopf suite")
}

fn c2_ribbon() -> Outcome {
    let start = Instant::now();
    for p in [2, 3] {
        let r = RibbonData::build(p).map_err(|e| e.to_string())?;
        report(verify_quasitriangular(&r.r_matrix))?;
        report(verify_ribbon(&r))?;
        ensure(r.monodromy.algebra().kind() == loghen::hopf::AlgebraKind::Restricted, || "M not stored in U⊗U".into())?;
        ensure((&r.r21 * &r.r_matrix).is_in_restricted(), || "R21 R ∉ U⊗U".into())?;
        ensure(r.ribbon.is_in_restricted() && r.ribbon.embed().is_ok(), || "r ∉ U".into())?;
    }
    within(start.elapsed(), Duration::from_secs(300), "ribbon suite")
}

/// `(1−i)/√2 · q^{(3−p²)/2}` assembled here from the field primitives.
fn delta_oracle(p: u32) -> CycloScalar {
    let sc = Scalars::new(p).unwrap();
    let pi = p as i64;
    let one_minus_i = sc.one() - sc.i();
    let sqrt2 = sc.sqrt_positive(2).unwrap();
    (one_minus_i / sqrt2) * sc.q_half_pow(3 - pi * pi)
}

fn c3_integral() -> Outcome {
    for p in [2, 3] {
        let d = IntegralData::new(p).map_err(|e| e.to_string())?;
        report(verify_right_integral(&d))?;
        let r = RibbonData::get(p).map_err(|e| e.to_string())?;
        let mu_r = d.mu(&r.ribbon);
        ensure(mu_r == delta_oracle(p), || format!("μ(r) = {mu_r} at p = {p}"))?;
        ensure((&d.mu(&r.ribbon_inv) * &mu_r).is_one(), || "μ(r⁻¹)μ(r) ≠ 1".into())?;
        if p == 2 {
            let (re, im) = mu_r.approx();
            ensure(re.abs() < 1e-12 && (im + 1.0).abs() < 1e-12, || format!("δ ≈ {re} + {im}i at p = 2"))?;
        }
    }
    Ok(())
}

/// Center dimension by brute force over the whole algebra.
fn center_dimension(p: u32) -> usize {
    let u = Algebra::restricted(p).unwrap();
    let n = u.dim();
    let gens = [u.e(), u.f(), u.k()];
    let mut rows = vec![vec![u.scalars().zero(); n]; 3 * n];
    for j in 0..n as u32 {
        let x = u.basis(j);
        for (g, h) in gens.iter().enumerate() {
            for (i, c) in h.commutator(&x).terms() {
                rows[g * n + i as usize][j as usize] = c.clone();
            }
        }
    }
    n - Matrix::from_rows(u.scalars().field(), rows).rank()
}

fn c4_center() -> Outcome {
    for p in [2, 3] {
        let dim = center_dimension(p);
        ensure(dim == 3 * p as usize - 1, || format!("dim Z(U) = {dim} at p = {p}"))?;
        let c = CenterData::get(p).map_err(|e| e.to_string())?;
        ensure(c.named_basis().len() == dim, || "named basis has the wrong size".into())?;
        report(verify_center(c))?;
    }
    Ok(())
}

/// Closed-form modified trace values, written out independently.
fn closed_trace(p: u32, id: bool, k: u32, sign: Sign) -> CycloScalar {
    let sc = Scalars::new(p).unwrap();
    let (k, pi) = (k as i64, p as i64);
    let eps = match sign {
        Sign::Plus => sc.one(),
        Sign::Minus => sc.int(-1),
    };
    if id {
        if k == pi {
            return if sign == Sign::Plus { sc.sign(pi - 1) } else { sc.one() };
        }
        eps.pow(pi - 1) * sc.sign(k) * (sc.q_pow(k) + sc.q_pow(-k))
    } else {
        let n = sc.quantum_integer(k);
        eps.pow(pi) * sc.sign(k) * &n * &n
    }
}

fn c5_trace() -> Outcome {
    for p in [2, 3, 4] {
        let anchor = Scalars::new(p).unwrap().sign(p as i64 - 1);
        for side in [Side::Right, Side::Left] {
            let t = solve_trace_recursion(p, side, &anchor).map_err(|e| format!("p = {p} {side:?}: {e}"))?;
            for sign in Sign::both() {
                for k in 1..=p {
                    ensure(*t.t_id(k, sign) == closed_trace(p, true, k, sign), || format!("t(id P({k},{sign})) at p = {p} {side:?}"))?;
                }
                for j in 1..p {
                    ensure(*t.t_x(j, sign) == closed_trace(p, false, j, sign), || format!("t(x({j},{sign})) at p = {p} {side:?}"))?;
                }
            }
        }
    }
    Ok(())
}

/// The pairing table entry for a named center element and a class.
fn table_entry(p: u32, row: &str, col: ClassLabel) -> CycloScalar {
    let sc = Scalars::new(p).unwrap();
    let zero = sc.zero();
    let (kind, j): (&str, u32) = if let Some(r) = row.strip_prefix("w+") {
        ("w+", r.parse().unwrap())
    } else if let Some(r) = row.strip_prefix("w-") {
        ("w-", r.parse().unwrap())
    } else {
        ("e", row[1..].parse().unwrap())
    };
    let ji = j as i64;
    let sq = sc.quantum_integer(ji).pow(2);
    let dimq = sc.q_pow(ji) + sc.q_pow(-ji);
    match (kind, col) {
        ("e", ClassLabel::Idempotent { k, sign: Sign::Plus }) if k == p => {
            if j == p {
                sc.sign(p as i64 - 1)
            } else {
                zero
            }
        }
        ("e", ClassLabel::Idempotent { k, sign: Sign::Minus }) if k == p => {
            if j == 0 {
                sc.one()
            } else {
                zero
            }
        }
        ("e", ClassLabel::Nilpotent { j: s }) => {
            if s == j {
                sc.sign(ji) * sq
            } else {
                zero
            }
        }
        ("e", ClassLabel::Idempotent { k, sign: Sign::Plus }) => {
            if k == j {
                sc.sign(ji) * dimq
            } else {
                zero
            }
        }
        ("e", ClassLabel::Idempotent { k, sign: Sign::Minus }) => {
            if j > 0 && j < p && k == p - j {
                sc.sign(ji) * dimq
            } else {
                zero
            }
        }
        ("w+", ClassLabel::Idempotent { k, sign: Sign::Plus }) if k == j => sc.sign(ji) * sq,
        ("w-", ClassLabel::Idempotent { k, sign: Sign::Minus }) if k == p - j => sc.sign(ji) * sq,
        _ => zero,
    }
}

fn c6_pairing() -> Outcome {
    for p in [2, 3] {
        let t = pairing_table(p).map_err(|e| e.to_string())?;
        let n = 3 * p as usize - 1;
        ensure(t.rows.len() == n && t.cols.len() == n, || format!("table is {}×{}", t.rows.len(), t.cols.len()))?;
        for (r, name) in t.rows.iter().enumerate() {
            for (c, col) in t.cols.iter().enumerate() {
                let want = table_entry(p, name, *col);
                ensure(t.entries[(r, c)] == want, || format!("p = {p} ({name}, {col}): {} vs {want}", t.entries[(r, c)]))?;
            }
        }
        ensure(!t.determinant.is_zero(), || format!("determinant vanishes at p = {p}"))?;
    }
    Ok(())
}

fn c7_z0() -> Outcome {
    for p in [2, 3] {
        let tp = TracePrime::get(p).map_err(|e| e.to_string())?;
        let u = tp.algebra();
        ensure(is_central(&tp.z0), || "z₀ is not central".into())?;
        let g = u.cartan_power(p as i64 + 1);
        let mu = IntegralData::new(p).map_err(|e| e.to_string())?;
        for (m, x) in u.pbw_basis() {
            let lhs = mu.mu(&(&g * &(&tp.z0 * &x)));
            ensure(lhs == tp.tr_prime(&x), || format!("residual at {m:?}, p = {p}"))?;
        }
    }
    Ok(())
}

fn c8_tangle() -> Outcome {
    for p in [2, 3] {
        let sw = Sweeper::new(p, Convention::A).map_err(|e| e.to_string())?;
        let r = RibbonData::get(p).map_err(|e| e.to_string())?;
        let direct: Tensor = (&r.r_matrix.permute(&[1, 0]) * &r.r_matrix).to_restricted().map_err(|e| e.to_string())?;
        let hopf = ClosurePresentation::closure(2, &[1, 1], Role::Minus).unwrap();
        let j = sw.universal_invariant(&hopf).map_err(|e| e.to_string())?;
        ensure(j.value == direct, || format!("cut-open σ1² ≠ R21 R at p = {p}"))?;
        let one = Tensor::one(r.double(), 2);
        ensure(sw.sweep(2, &[1, -1]).unwrap().0 == one && sw.sweep(2, &[-1, 1]).unwrap().0 == one, || "Reidemeister II".into())?;
    }
    report(verify_tangle(2, Convention::A).map_err(|e| e.to_string())?)?;
    let sw = Sweeper::new(2, Convention::A).unwrap();
    let mu = IntegralData::new(2).unwrap();
    ensure(MARKOV_CORPUS.len() >= 6, || "Markov corpus too small".into())?;
    for (name, (n1, w1), (n2, w2)) in MARKOV_CORPUS {
        let a = closed_evaluations(&sw, &mu, *n1, w1).map_err(|e| e.to_string())?;
        let b = closed_evaluations(&sw, &mu, *n2, w2).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name}: closed evaluations differ"))?;
    }
    Ok(())
}

fn unknot(role: Role, framing: i64, color: Option<&str>) -> ClosurePresentation {
    let mut pres = ClosurePresentation::closure(1, &[], role).unwrap();
    pres.components[0].framing = framing;
    pres.components[0].color = color.map(|c| ColorSpec::Name(c.into()));
    pres
}

fn c9_anchors() -> Outcome {
    for p in [2, 3] {
        let eng = InvariantEngine::new(p, Convention::A).map_err(|e| e.to_string())?;
        let eval = |pres: ClosurePresentation| -> Result<CycloScalar, String> {
            let input: ColoredSurgeryInput = eng.input(&pres).map_err(|e| e.to_string())?;
            eng.h_log(&input).map(|v| v.exact).map_err(|e| e.to_string())
        };
        let hp = format!("h-{p}");
        let v = eval(unknot(Role::Minus, 0, Some(&hp)))?;
        ensure(v.is_one(), || format!("S³ with h_p^− unknot: {v}"))?;
        let v = eval(unknot(Role::Surgery, 0, None))?;
        ensure(v.is_zero(), || format!("S¹×S²: {v}"))?;
        for f in [1, -1] {
            let v = eval(unknot(Role::Surgery, f, None))?;
            ensure(v.is_one(), || format!("S³ via {f:+} unknot: {v}"))?;
        }
    }
    Ok(())
}

fn c10_kirby() -> Outcome {
    let start = Instant::now();
    let rep = invariance_suite(2, Convention::A).map_err(|e| e.to_string())?;
    ensure(rep.checks.len() >= 8, || "Kirby corpus is empty".into())?;
    report(rep)?;
    within(start.elapsed(), Duration::from_secs(600), "Kirby suite")
}

fn c11_coefficient_relations() -> Outcome {
    for p in [2, 3] {
        let eng = InvariantEngine::new(p, Convention::A).map_err(|e| e.to_string())?;
        for (n, word) in [(1usize, &[][..]), (2, &[1i64, 1, 1][..])] {
            let mut pres = ClosurePresentation::closure(n, word, Role::Minus).unwrap();
            pres.components[0].framing = 0;
            let input = eng.input(&pres).map_err(|e| e.to_string())?;
            report(eng.coefficient_relations(&input).map_err(|e| e.to_string())?)?;
            if n == 1 {
                let jl = eng.j_log(&input).map_err(|e| e.to_string())?;
                let one: Element = eng.trace.algebra().one();
                ensure(jl.element == one, || "J^log(unknot) ≠ 1".into())?;
            }
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Hopf axioms for U and D at p = 2, 3", c1_hopf),
        ("quasitriangular, Yang–Baxter and ribbon relations at p = 2, 3", c2_ribbon),
        ("right integral and μ(r) = δ", c3_integral),
        ("center dimension, relations and action table", c4_center),
        ("modified trace table from the recursion at p = 2, 3, 4", c5_trace),
        ("pairing table and determinant at p = 2, 3", c6_pairing),
        ("central representative z₀ of Tr′", c7_z0),
        ("tangle oracle, Reidemeister and Markov moves", c8_tangle),
        ("invariant anchors", c9_anchors),
        ("Kirby corpus at p = 2", c10_kirby),
        ("coefficient relations for the unknot and trefoil", c11_coefficient_relations),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s)\n    {}", i + 1, e.replace('\n', "\n    "));
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
