//! Command-line interface: verification suites, invariants of presentation
//! files, and the trace and pairing tables.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::center::{verify_casimir_coproduct, verify_center, CenterData};
use crate::error::{Error, Result};
use crate::hh0::{verify_hh0, HH0Data};
use crate::hopf::{verify_hopf, Algebra};
use crate::integral::{verify_qchar, verify_right_integral, IntegralData};
use crate::invariant::{anchor_suite, invariance_suite, InvariantEngine};
use crate::mtrace::{pairing_table, verify_trace_prime, verify_trace_recursion, PairingRoute, TraceTable};
use crate::quasitriangular::{verify_quasitriangular, verify_ribbon, RibbonData};
use crate::report::Report;
use crate::sample;
use crate::tangle::{verify_tangle, ClosurePresentation, Convention, Role};

#[derive(Debug, Parser)]
#[command(name = "loghen", version, about = "Exact computations for restricted quantum sl(2) and logarithmic Hennings invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        p: u32,
        /// Comma-separated suites, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, default_value = "A")]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the invariant of a presentation file.
    Invariant {
        input: PathBuf,
        /// Level; defaults to the `p` field of the presentation.
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        p: Option<u32>,
        #[arg(long, value_enum, default_value = "hlog")]
        mode: Mode,
        /// Close the trace-colored slots with quantum characters or partial traces.
        #[arg(long, value_enum, default_value = "character")]
        route: Route,
        #[arg(long, default_value = "A")]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the modified-trace table and the pairing matrix.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        p: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    All,
    Hopf,
    Ribbon,
    Integral,
    Center,
    Trace,
    Pairing,
    Tangle,
    Invariance,
}

impl Suite {
    const EVERY: [Suite; 8] =
        [Suite::Hopf, Suite::Ribbon, Suite::Integral, Suite::Center, Suite::Trace, Suite::Pairing, Suite::Tangle, Suite::Invariance];

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Hopf => "hopf",
            Suite::Ribbon => "ribbon",
            Suite::Integral => "integral",
            Suite::Center => "center",
            Suite::Trace => "trace",
            Suite::Pairing => "pairing",
            Suite::Tangle => "tangle",
            Suite::Invariance => "invariance",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Hlog,
    Jlog,
    Hennings,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Character,
    Partial,
}

/// Runs one suite; the extra value carries table snapshots.
pub fn run_suite(p: u32, suite: Suite, convention: Convention) -> Result<(Vec<Report>, Option<Value>)> {
    let mut reports = Vec::new();
    let mut extra = None;
    match suite {
        Suite::All => unreachable!("expanded before dispatch"),
        Suite::Hopf => {
            reports.push(verify_hopf(Algebra::restricted(p)?));
            reports.push(verify_hopf(Algebra::double(p)?));
        }
        Suite::Ribbon => {
            let r = RibbonData::get(p)?;
            reports.push(verify_quasitriangular(&r.r_matrix));
            reports.push(verify_ribbon(r));
        }
        Suite::Integral => {
            let d = IntegralData::new(p)?;
            reports.push(verify_right_integral(&d));
            let r = RibbonData::get(p)?;
            let mut rep = Report::new("evaluation on the ribbon element");
            match d.check_delta(&r.ribbon, &r.ribbon_inv) {
                Ok(()) => {
                    rep.check("μ(r) = (1−i)/√2 · q^{(3−p²)/2} and μ(r⁻¹)μ(r) = 1", true);
                }
                Err(e) => rep.fail("μ(r) = (1−i)/√2 · q^{(3−p²)/2}", e.to_string()),
            }
            reports.push(rep);
            let center = CenterData::get(p)?;
            let basis: Vec<_> = center.named_basis().into_iter().map(|(_, z)| z).collect();
            reports.push(verify_qchar(&d, &basis, &sample::random_pairs(d.algebra(), 3, 6, 5)));
        }
        Suite::Center => {
            let center = CenterData::get(p)?;
            reports.push(verify_center(center));
            reports.push(verify_casimir_coproduct(p)?);
            reports.push(verify_hh0(HH0Data::get(p)?, center));
        }
        Suite::Trace => {
            reports.push(verify_trace_recursion(p));
            reports.push(verify_trace_prime(p));
        }
        Suite::Pairing => {
            let t = pairing_table(p)?;
            let mut rep = Report::new(format!("pairing table p={p}"));
            let mut mismatches = Vec::new();
            for r in 0..t.rows.len() {
                for c in 0..t.cols.len() {
                    if t.entries[(r, c)] != t.expected[(r, c)] {
                        mismatches.push(format!("({}, {})", t.rows[r], t.cols[c]));
                    }
                }
            }
            let n = t.rows.len() * t.cols.len();
            rep.check_with(format!("all {n} entries match the closed form"), mismatches.is_empty(), || mismatches.join(", "));
            rep.check("determinant ≠ 0", !t.determinant.is_zero());
            reports.push(rep);
            extra = Some(t.to_json());
        }
        Suite::Tangle => reports.push(verify_tangle(p, convention)?),
        Suite::Invariance => {
            reports.push(anchor_suite(p, convention)?);
            reports.push(invariance_suite(p, convention)?);
            let eng = InvariantEngine::new(p, convention)?;
            for (name, n, word) in [("unknot", 1usize, &[][..]), ("trefoil", 2, &[1i64, 1, 1][..])] {
                let mut pres = ClosurePresentation::closure(n, word, Role::Minus)?;
                pres.components[0].framing = 0;
                let mut rep = eng.coefficient_relations(&eng.input(&pres)?)?;
                rep.title = format!("{} ({name})", rep.title);
                reports.push(rep);
            }
        }
    }
    Ok((reports, extra))
}

/// `verify`: the JSON report and whether everything passed.
pub fn cmd_verify(p: u32, suites: &[Suite], convention: Convention) -> Result<(Value, bool)> {
    let mut selected: Vec<Suite> =
        if suites.contains(&Suite::All) { Suite::EVERY.to_vec() } else { suites.to_vec() };
    selected.sort();
    selected.dedup();
    let mut all_ok = true;
    let mut out = Vec::new();
    for s in selected {
        let (reports, extra) = run_suite(p, s, convention)?;
        let ok = reports.iter().all(Report::passed);
        all_ok &= ok;
        let mut entry = json!({
            "suite": s.name(),
            "passed": ok,
            "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        });
        if let Some(x) = extra {
            entry["table"] = x;
        }
        out.push(entry);
    }
    Ok((json!({ "p": p, "convention": convention.to_string(), "passed": all_ok, "suites": out }), all_ok))
}

/// `invariant`: evaluates a presentation file.
pub fn cmd_invariant(text: &str, p: Option<u32>, mode: Mode, route: Route, convention: Convention) -> Result<Value> {
    let pres = ClosurePresentation::from_json(text)?;
    let p = match (p, pres.p) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Presentation(format!("--p {a} disagrees with the presentation's p = {b}")));
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(Error::Schema("no level given: set \"p\" in the file or pass --p".into())),
    };
    let eng = InvariantEngine::new(p, convention)?;
    let input = eng.input(&pres)?;
    let route = match route {
        Route::Character => PairingRoute::Character,
        Route::Partial => PairingRoute::RightPartial,
    };
    let (mut value, kind) = match mode {
        Mode::Hlog => (eng.h_log_with(&input, route)?.to_json(), "hlog"),
        Mode::Hennings => (eng.hennings(&input)?.to_json(), "hennings"),
        Mode::Jlog => {
            let mut v = eng.j_log(&input)?.to_json();
            v["provenance"] = json!({ "presentation": pres.hash(), "convention": convention.to_string() });
            (v, "jlog")
        }
    };
    value["p"] = json!(p);
    value["mode"] = json!(kind);
    Ok(value)
}

/// `tables`: trace values and the pairing matrix.
pub fn cmd_tables(p: u32) -> Result<Value> {
    let t = pairing_table(p)?;
    let expected_ok = (0..t.rows.len()).all(|r| (0..t.cols.len()).all(|c| t.entries[(r, c)] == t.expected[(r, c)]));
    Ok(json!({
        "p": p,
        "trace_table": TraceTable::closed_form(p)?.to_json(),
        "pairing": t.to_json(),
        "pairing_matches_closed_form": expected_ok,
    }))
}

fn emit(value: &Value, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Verify { p, suite, convention, out } => {
            cmd_verify(p, &suite, convention).and_then(|(v, ok)| emit(&v, out.as_ref()).map(|()| if ok { 0 } else { 1 }))
        }
        Command::Invariant { input, p, mode, route, convention, out } => std::fs::read_to_string(&input)
            .map_err(Error::from)
            .and_then(|text| cmd_invariant(&text, p, mode, route, convention))
            .and_then(|v| emit(&v, out.as_ref()).map(|()| 0)),
        Command::Tables { p, out } => cmd_tables(p).and_then(|v| emit(&v, out.as_ref()).map(|()| 0)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commands() {
        let cli = Cli::try_parse_from(["loghen", "verify", "--p", "2", "--suite", "pairing,trace"]).unwrap();
        match cli.command {
            Command::Verify { p, suite, .. } => {
                assert_eq!(p, 2);
                assert_eq!(suite, vec![Suite::Pairing, Suite::Trace]);
            }
            _ => panic!("wrong command"),
        }
        assert!(Cli::try_parse_from(["loghen", "verify", "--p", "1"]).is_err());
        assert!(Cli::try_parse_from(["loghen", "verify", "--p", "2", "--suite", "bogus"]).is_err());
        assert!(Cli::try_parse_from(["loghen", "invariant", "x.json", "--mode", "jlog", "--convention", "B"]).is_ok());
    }

    #[test]
    fn invariant_from_json() {
        let text = r#"{"p": 2, "strands": 1, "word": [], "components": [{"strands": [1], "cut": 1, "role": "minus", "framing": 0, "color": "h-2"}]}"#;
        let v = cmd_invariant(text, None, Mode::Hlog, Route::Character, Convention::A).unwrap();
        assert_eq!(v["exact"], "1");
        let s1s2 = r#"{"p": 2, "strands": 1, "word": [], "components": [{"strands": [1], "cut": 1, "role": "surgery", "framing": 0}]}"#;
        let v = cmd_invariant(s1s2, None, Mode::Hennings, Route::Character, Convention::A).unwrap();
        assert_eq!(v["exact"], "0");
        let bad = r#"{"p": 2, "strands": 2, "word": [1, 1], "components": [{"strands": [1, 2], "cut": 1, "role": "minus", "framing": 0}]}"#;
        assert!(matches!(cmd_invariant(bad, None, Mode::Hlog, Route::Character, Convention::A), Err(Error::Presentation(_))));
        let typo = r#"{"p": 2, "strands": 1, "word": [], "components": [{"strand": [1]}]}"#;
        assert!(matches!(cmd_invariant(typo, None, Mode::Hlog, Route::Character, Convention::A), Err(Error::Schema(_))));
    }

    #[test]
    fn tables_are_deterministic() {
        let a = serde_json::to_string(&cmd_tables(2).unwrap()).unwrap();
        let b = serde_json::to_string(&cmd_tables(2).unwrap()).unwrap();
        assert_eq!(a, b);
        let v = cmd_tables(3).unwrap();
        assert_eq!(v["pairing"]["entries"].as_array().unwrap().len(), 8);
        assert_eq!(v["pairing_matches_closed_form"], true);
    }
}
