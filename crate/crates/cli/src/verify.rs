//! Corpus verification. Each entry is either a polynomial (one line) or a
//! cycle document (a line starting with `{`). Polynomials are checked
//! against the volume formula for the Euler characteristic; cycles are
//! checked component by component against values known in closed form.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use gaussrr::cycles::{self, CycleComponent, IdentityReport, LagrangianCycle, Verdict};
use gaussrr::euler::{self, Nondegeneracy};
use gaussrr::laurent::LaurentPolynomial;

use crate::{emit_structured, Failure, Format, Settings};

enum Input {
    Polynomial(LaurentPolynomial),
    Cycle(LagrangianCycle),
}

struct Entry {
    line: usize,
    text: String,
    input: Input,
}

#[derive(Serialize)]
struct CycleCheck {
    verdict: Verdict,
    chi_via_cc: Option<i64>,
    expected: Option<i64>,
    notes: Vec<String>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Outcome {
    Polynomial(IdentityReport),
    Cycle(CycleCheck),
}

impl Outcome {
    fn verdict(&self) -> Verdict {
        match self {
            Outcome::Polynomial(r) => r.verdict,
            Outcome::Cycle(c) => c.verdict,
        }
    }
}

#[derive(Serialize)]
struct EntryReport<'a> {
    line: usize,
    input: &'a str,
    #[serde(flatten)]
    outcome: &'a Outcome,
}

#[derive(Serialize, Default)]
struct Summary {
    entries: usize,
    equal: usize,
    unequal: usize,
    not_applicable: usize,
    unresolved: usize,
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    entries: Vec<EntryReport<'a>>,
    summary: Summary,
}

fn parse_entries(settings: &Settings, text: &str) -> Result<Vec<Entry>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let input = if line.starts_with('{') {
            let cycle = cycles::parse_cycle(line)
                .map_err(|e| Failure::usage(format!("line {}: {e}", i + 1)))?;
            Input::Cycle(cycle)
        } else {
            Input::Polynomial(
                settings
                    .parse(line)
                    .map_err(|e| Failure::usage(format!("line {}: {}", i + 1, e.message)))?,
            )
        };
        out.push(Entry {
            line: i + 1,
            text: line.to_string(),
            input,
        });
    }
    Ok(out)
}

/// Closed-form contribution of one component: zero for the zero section,
/// one for a point, and `(-1)^(n-1) χ(V(f))` for a nondegenerate
/// hypersurface.
fn expected_gdeg(n: usize, component: &CycleComponent, settings: &Settings) -> Result<i64, String> {
    match component {
        CycleComponent::ZeroSection => Ok(0),
        CycleComponent::Point(_) => Ok(1),
        CycleComponent::Hypersurface(f) => {
            match euler::nondegeneracy_check(f, &settings.gauss.tracker)
                .map_err(|e| e.to_string())?
            {
                Nondegeneracy::Nondegenerate => {}
                _ => return Err(format!("{f} is not known to be nondegenerate")),
            }
            let chi = euler::chi_nondegenerate_hypersurface(f)
                .map_err(|e| e.to_string())?
                .chi;
            Ok(if n % 2 == 1 { chi } else { -chi })
        }
        CycleComponent::CompleteIntersection(_) => {
            Err("no closed form for complete intersections".into())
        }
    }
}

fn check_cycle(cycle: &LagrangianCycle, settings: &Settings) -> CycleCheck {
    let mut notes = Vec::new();
    let mut expected = Some(0);
    for (c, m) in cycle.components() {
        match expected_gdeg(cycle.dimension(), c, settings) {
            Ok(v) => expected = expected.map(|e| e + m * v),
            Err(note) => {
                notes.push(note);
                expected = None;
            }
        }
    }
    let computed = cycles::chi_via_cc(cycle, &settings.gauss);
    let (verdict, chi) = match (&computed, expected) {
        (Err(e), _) => {
            notes.push(e.to_string());
            (Verdict::Unresolved, None)
        }
        (Ok(r), None) => (Verdict::NotApplicable, Some(r.chi)),
        (Ok(r), Some(e)) if r.chi == e => (Verdict::Equal, Some(r.chi)),
        (Ok(r), Some(_)) => (Verdict::Unequal, Some(r.chi)),
    };
    CycleCheck {
        verdict,
        chi_via_cc: chi,
        expected,
        notes,
    }
}

fn evaluate(entry: &Entry, settings: &Settings) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = match &entry.input {
        Input::Polynomial(f) => Outcome::Polynomial(cycles::verify_cor_1_5(f, &settings.gauss)),
        Input::Cycle(c) => Outcome::Cycle(check_cycle(c, settings)),
    };
    (outcome, start.elapsed())
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn verdict_text(v: Verdict, outcome: &Outcome) -> String {
    match v {
        Verdict::Equal => "equal".into(),
        Verdict::Unequal => "UNEQUAL".into(),
        Verdict::Unresolved => "unresolved".into(),
        Verdict::NotApplicable => match outcome {
            Outcome::Polynomial(r)
                if matches!(r.nondegeneracy, Some(Nondegeneracy::Degenerate { .. })) =>
            {
                "not applicable (degenerate)".into()
            }
            _ => "not applicable".into(),
        },
    }
}

pub(crate) fn cmd_verify(settings: &Settings, text: &str) -> Result<u8, Failure> {
    let entries = parse_entries(settings, text)?;
    let results: Vec<(Outcome, Duration)> =
        entries.par_iter().map(|e| evaluate(e, settings)).collect();

    let mut summary = Summary {
        entries: entries.len(),
        ..Summary::default()
    };
    for (outcome, _) in &results {
        match outcome.verdict() {
            Verdict::Equal => summary.equal += 1,
            Verdict::Unequal => summary.unequal += 1,
            Verdict::NotApplicable => summary.not_applicable += 1,
            Verdict::Unresolved => summary.unresolved += 1,
        }
    }
    let code = if summary.unequal + summary.unresolved == 0 {
        0
    } else {
        2
    };

    match settings.format {
        Format::Structured => {
            let body = VerifyBody {
                entries: entries
                    .iter()
                    .zip(&results)
                    .map(|(e, (o, _))| EntryReport {
                        line: e.line,
                        input: &e.text,
                        outcome: o,
                    })
                    .collect(),
                summary,
            };
            emit_structured(settings, "verify", settings.dimension(), body);
        }
        Format::Text => {
            println!(
                "{:>5}  {:>5}  {:>5}  {:>7}  {:>5}  {:>9}  {:<28}  input",
                "line", "gdeg", "chi", "agreed", "bkk", "time(ms)", "verdict"
            );
            for (e, (o, t)) in entries.iter().zip(&results) {
                let (gdeg, chi, agreed, bkk) = match o {
                    Outcome::Polynomial(r) => (
                        cell(r.gdeg),
                        cell(r.signed_chi),
                        cell(r.agreed.map(|a| if a { "yes" } else { "no" })),
                        cell(r.bkk),
                    ),
                    Outcome::Cycle(c) => {
                        (cell(c.chi_via_cc), cell(c.expected), "-".into(), "-".into())
                    }
                };
                println!(
                    "{:>5}  {:>5}  {:>5}  {:>7}  {:>5}  {:>9.1}  {:<28}  {}",
                    e.line,
                    gdeg,
                    chi,
                    agreed,
                    bkk,
                    t.as_secs_f64() * 1e3,
                    verdict_text(o.verdict(), o),
                    e.text
                );
            }
            println!(
                "{} entries: {} equal, {} unequal, {} not applicable, {} unresolved",
                summary.entries,
                summary.equal,
                summary.unequal,
                summary.not_applicable,
                summary.unresolved
            );
        }
    }
    Ok(code)
}
