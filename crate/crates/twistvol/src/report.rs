//! Serialization of experiment products: a JSON report with stable key
//! order and fixed float formatting, a CSV companion for plotting, and
//! plain-text renderings for the terminal.
//!
//! Every float is printed with 15 significant digits (`{:.14e}`), so a
//! report is byte-identical across runs with the same configuration and
//! seed regardless of thread count. Non-finite values (possible for a
//! vacuous check margin) are serialized as the JSON strings "inf",
//! "-inf" or "nan"; the schema file documents this.
//!
//! ```text
//! CSV layout (one row per color):
//! N,v_N,lower_proxy,upper_proxy
//! 50,3.51426917702043e0,...
//! ```

use crate::conjecture::{ConvergenceReport, LemmaCheck};
use crate::jones::{JonesValue, SumStats};
use crate::potential::CriticalPoint;
use serde::Serialize;
use serde_json::value::RawValue;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// A float rendered as a raw JSON token with 15 significant digits.
fn jf(x: f64) -> Box<RawValue> {
    let token = if x.is_finite() {
        format!("{x:.14e}")
    } else if x.is_nan() {
        "\"nan\"".to_string()
    } else if x > 0.0 {
        "\"inf\"".to_string()
    } else {
        "\"-inf\"".to_string()
    };
    RawValue::from_string(token).expect("float token is valid JSON")
}

#[derive(Serialize)]
struct JsonRow {
    n: u32,
    v_n: Box<RawValue>,
    lower_proxy: Box<RawValue>,
    upper_proxy: Box<RawValue>,
    lower_proxy_no_constant: Box<RawValue>,
    log_abs: Box<RawValue>,
    max_log_term: Box<RawValue>,
    argmax: Vec<u32>,
    extended_precision: bool,
}

#[derive(Serialize)]
struct JsonGridMax {
    n: u32,
    value: Box<RawValue>,
    index: Vec<u32>,
}

#[derive(Serialize)]
struct JsonCheck {
    passed: bool,
    margin: Box<RawValue>,
    tolerance: Box<RawValue>,
    note: String,
}

#[derive(Serialize)]
struct JsonReport {
    schema_version: u32,
    p: i32,
    seed: u64,
    term_budget: u64,
    n_values: Vec<u32>,
    per_n: Vec<JsonRow>,
    extrapolated: Box<RawValue>,
    fit_rms_residual: Box<RawValue>,
    potential_volume: Box<RawValue>,
    gap: Box<RawValue>,
    grid_max: JsonGridMax,
    lemma_checks: BTreeMap<String, JsonCheck>,
    diagnostics: Vec<String>,
}

fn check_map(checks: &[LemmaCheck]) -> BTreeMap<String, JsonCheck> {
    checks
        .iter()
        .map(|c| {
            (
                c.name.clone(),
                JsonCheck {
                    passed: c.passed,
                    margin: jf(c.margin),
                    tolerance: jf(c.tolerance),
                    note: c.note.clone(),
                },
            )
        })
        .collect()
}

/// The full report as pretty JSON with a trailing newline. Key order is
/// fixed by the schema; map keys sort lexicographically.
pub fn render_report_json(r: &ConvergenceReport) -> String {
    let json = JsonReport {
        schema_version: 1,
        p: r.p,
        seed: r.seed,
        term_budget: r.term_budget,
        n_values: r.per_n.iter().map(|row| row.n).collect(),
        per_n: r
            .per_n
            .iter()
            .map(|row| JsonRow {
                n: row.n,
                v_n: jf(row.v_n),
                lower_proxy: jf(row.lower_proxy),
                upper_proxy: jf(row.upper_proxy),
                lower_proxy_no_constant: jf(row.lower_proxy_no_constant),
                log_abs: jf(row.log_abs),
                max_log_term: jf(row.max_log_term),
                argmax: row.argmax.clone(),
                extended_precision: row.extended_precision,
            })
            .collect(),
        extrapolated: jf(r.extrapolated),
        fit_rms_residual: jf(r.fit_rms_residual),
        potential_volume: jf(r.potential_volume),
        gap: jf(r.gap),
        grid_max: JsonGridMax {
            n: r.grid_max_n,
            value: jf(r.grid_max_value),
            index: r.grid_max_index.clone(),
        },
        lemma_checks: check_map(&r.lemma_checks),
        diagnostics: r.diagnostics.clone(),
    };
    let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
    s.push('\n');
    s
}

/// The per-color table as CSV with the fixed header
/// `N,v_N,lower_proxy,upper_proxy`.
pub fn render_report_csv(r: &ConvergenceReport) -> String {
    let mut s = String::from("N,v_N,lower_proxy,upper_proxy\n");
    for row in &r.per_n {
        let _ = writeln!(
            s,
            "{},{:.14e},{:.14e},{:.14e}",
            row.n, row.v_n, row.lower_proxy, row.upper_proxy
        );
    }
    s
}

/// One line per check: status, name, margin, tolerance, then the note
/// after a `#`.
pub fn render_checks_text(checks: &[LemmaCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{status} {:<14} margin={:.14e}  tol={:.14e}  # {}",
            c.name, c.margin, c.tolerance, c.note
        );
    }
    s
}

/// The check list alone as pretty JSON (used by the standalone check
/// command).
pub fn render_checks_json(checks: &[LemmaCheck]) -> String {
    let mut s = serde_json::to_string_pretty(&check_map(checks)).expect("checks serialize");
    s.push('\n');
    s
}

/// Human summary of a report for the terminal: the squeeze table, the
/// headline numbers, then the check lines and diagnostics.
pub fn render_report_text(r: &ConvergenceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}   seed = {}   term_budget = {}", r.p, r.seed, r.term_budget);
    let _ = writeln!(
        s,
        "{:>6}  {:>22}  {:>22}  {:>22}",
        "N", "v_N", "lower_proxy", "upper_proxy"
    );
    for row in &r.per_n {
        let _ = writeln!(
            s,
            "{:>6}  {:>22.14e}  {:>22.14e}  {:>22.14e}",
            row.n, row.v_n, row.lower_proxy, row.upper_proxy
        );
    }
    let _ = writeln!(
        s,
        "extrapolated     = {:.14e}   (fit rms {:.2e})",
        r.extrapolated, r.fit_rms_residual
    );
    let _ = writeln!(s, "Im f(a)          = {:.14e}", r.potential_volume);
    let _ = writeln!(s, "gap              = {:.14e}", r.gap);
    let _ = writeln!(
        s,
        "grid max Im f    = {:.14e} at N = {} index {:?}",
        r.grid_max_value, r.grid_max_n, r.grid_max_index
    );
    let failed = r.lemma_checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(
        s,
        "checks: {} passed, {} failed",
        r.lemma_checks.len() - failed,
        failed
    );
    s.push_str(&render_checks_text(&r.lemma_checks));
    for d in &r.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

/// Jones evaluation for the terminal: value, log-magnitude, and the
/// growth number v_N = 2 pi log|J_N| / N.
pub fn render_jones_text(p: i32, j: &JonesValue, stats: &SumStats) -> String {
    let v_n = TAU * j.log_abs / j.n as f64;
    let mut s = String::new();
    let _ = writeln!(s, "p = {p}   N = {}", j.n);
    let _ = writeln!(s, "value   = {:.14e} + {:.14e} i", j.value.re, j.value.im);
    let _ = writeln!(s, "log_abs = {:.14e}", j.log_abs);
    let _ = writeln!(s, "v_N     = {:.14e}", v_n);
    let _ = writeln!(
        s,
        "terms   = {}   max_log_term = {:.14e} at {:?}   extended_precision = {}",
        stats.term_count, stats.max_log_term, stats.argmax, stats.extended_precision
    );
    s
}

#[derive(Serialize)]
struct JsonJones {
    p: i32,
    n: u32,
    value_re: Box<RawValue>,
    value_im: Box<RawValue>,
    log_abs: Box<RawValue>,
    v_n: Box<RawValue>,
    term_count: u64,
    max_log_term: Box<RawValue>,
    argmax: Vec<u32>,
    extended_precision: bool,
}

pub fn render_jones_json(p: i32, j: &JonesValue, stats: &SumStats) -> String {
    let json = JsonJones {
        p,
        n: j.n,
        value_re: jf(j.value.re),
        value_im: jf(j.value.im),
        log_abs: jf(j.log_abs),
        v_n: jf(TAU * j.log_abs / j.n as f64),
        term_count: stats.term_count.min(u64::MAX as u128) as u64,
        max_log_term: jf(stats.max_log_term),
        argmax: stats.argmax.clone(),
        extended_precision: stats.extended_precision,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("jones serializes");
    s.push('\n');
    s
}

/// Critical point for the terminal: the a-vector, residual, f(a), and
/// the volume Im f(a).
pub fn render_critical_text(p: i32, c: &CriticalPoint) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {p}");
    for (i, a) in c.a.iter().enumerate() {
        let _ = writeln!(s, "a[{}]     = {:.14e} + {:.14e} i", i + 1, a.re, a.im);
    }
    let _ = writeln!(s, "residual = {:.14e}", c.residual);
    let _ = writeln!(s, "f(a)     = {:.14e} + {:.14e} i", c.potential.re, c.potential.im);
    let _ = writeln!(s, "volume   = {:.14e}", c.volume);
    s
}

#[derive(Serialize)]
struct JsonComplex {
    re: Box<RawValue>,
    im: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonCritical {
    p: i32,
    a: Vec<JsonComplex>,
    residual: Box<RawValue>,
    potential: JsonComplex,
    volume: Box<RawValue>,
}

pub fn render_critical_json(p: i32, c: &CriticalPoint) -> String {
    let json = JsonCritical {
        p,
        a: c.a
            .iter()
            .map(|w| JsonComplex {
                re: jf(w.re),
                im: jf(w.im),
            })
            .collect(),
        residual: jf(c.residual),
        potential: JsonComplex {
            re: jf(c.potential.re),
            im: jf(c.potential.im),
        },
        volume: jf(c.volume),
    };
    let mut s = serde_json::to_string_pretty(&json).expect("critical point serializes");
    s.push('\n');
    s
}
