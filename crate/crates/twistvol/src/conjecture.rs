//! Experiment driver: ties the Jones-growth sequence to the
//! critical-point volume and measures every supporting inequality and
//! asymptotic statement the comparison rests on.
//!
//! `run_experiment` produces a `ConvergenceReport` with one row per
//! color N (growth value v_N = 2 pi log|J_N| / N squeezed between two
//! max-term proxies), the extrapolated limit of the sequence, the
//! volume from the potential's critical point, their gap, and a map of
//! named property checks. A failed check never aborts the run; the
//! report records it with the measured margin. Only resource errors
//! (term budgets, solver failure) propagate.
//!
//! Check names are stable identifiers forming the report's external
//! interface:
//!
//! ```text
//! theorem_155     |J_2| equals the determinant anchor 4|p| - 1
//! lemma_98        circle values of Li2 converge to pi^2/6
//! lemma_100       duplication identity of Li2
//! lemma_101       (2 pi/N) log|(q)_n| tracks -Cl2(2 pi n/N)
//! corollary_102   bracket log-magnitude tracks its Cl2 combination
//! lemma_103       lattice potential vs potential at the circle points
//! lemma_106       (2 pi/N) log maxterm vs lattice potential at argmax
//! lemma_109       v_N <= upper proxy (term count bound)
//! lemma_114       every summand magnitude <= N 2^{(N-1)(2p-1)}
//! lemma_115       lower proxy <= v_N (max-term bound)
//! lemma_121       |J_N| >= 1 for N >= 4
//! lemma_93        solver point keeps |Re a_i - 1| > margin, all i
//! lemma_125       component 1 margin of the same exclusion
//! lemma_126       component 2 margin of the same exclusion
//! theorem_97      headline gap |extrapolated - Im f(a)| under tolerance
//! ```

use crate::dilog::{clausen, li2, li2_circle, Branch};
use crate::error::{Error, Result};
use crate::jones::{
    colored_jones, colored_jones_with_stats, extrapolate_limit, LatticeIndex, TwistKnotSpec,
};
use crate::potential::{
    grid_max_im_f, potential_f_lattice, ray_distance, solve_critical, SolverConfig,
};
use crate::qseries::QTable;
use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

/// Configuration for one experiment run. `tolerances` overrides the
/// per-check defaults by check name; an empty map applies defaults and
/// the report notes that.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub p: i32,
    pub n_values: Vec<u32>,
    pub term_budget: u128,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(p: i32, n_values: Vec<u32>) -> Result<ExperimentConfig> {
        let cfg = ExperimentConfig {
            p,
            n_values,
            term_budget: crate::jones::default_term_budget(),
            tolerances: BTreeMap::new(),
            seed: 7,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The default color list: up to 400 in steps of 50 for |p| = 2,
    /// up to 100 in steps of 20 for larger twists (the lattice grows
    /// as N^{2|p|-1}).
    pub fn default_n_values(p: i32) -> Vec<u32> {
        if p.unsigned_abs() == 2 {
            vec![50, 100, 150, 200, 250, 300, 350, 400]
        } else {
            vec![40, 60, 80, 100]
        }
    }

    pub fn validate(&self) -> Result<()> {
        TwistKnotSpec::new(self.p)?;
        if self.n_values.is_empty() {
            return Err(Error::Domain("N_values must not be empty".into()));
        }
        if self.n_values[0] < 2 {
            return Err(Error::Domain("every N must be at least 2".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("N_values must be strictly ascending".into()));
        }
        if self.term_budget == 0 {
            return Err(Error::Domain("term_budget must be positive".into()));
        }
        Ok(())
    }
}

/// One named property check with its measured margin. The meaning of
/// `margin` depends on the check (a distance for closeness checks, a
/// slack for inequalities, a ratio for bound checks); `note` spells it
/// out.
#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub tolerance: f64,
    pub note: String,
}

/// One row of the convergence table.
#[derive(Clone, Debug)]
pub struct PerNRow {
    pub n: u32,
    pub v_n: f64,
    pub lower_proxy: f64,
    pub upper_proxy: f64,
    /// The lower proxy without its 2^{(N-1)(2p-1)} safety constant;
    /// informational only, not a valid finite-N bound.
    pub lower_proxy_no_constant: f64,
    pub log_abs: f64,
    pub max_log_term: f64,
    pub argmax: Vec<u32>,
    pub extended_precision: bool,
}

/// The full experiment product.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub p: i32,
    pub seed: u64,
    pub term_budget: u64,
    pub per_n: Vec<PerNRow>,
    pub extrapolated: f64,
    pub fit_rms_residual: f64,
    pub potential_volume: f64,
    pub gap: f64,
    pub grid_max_n: u32,
    pub grid_max_value: f64,
    pub grid_max_index: Vec<u32>,
    pub lemma_checks: Vec<LemmaCheck>,
    pub diagnostics: Vec<String>,
}

/// Default tolerance for a named check: 1e-10 for algebraic identities
/// and inequality slacks, 0.05 for asymptotic equivalences at desk
/// scale, 1e-6 margins for the solver exclusion zones, and the headline
/// gap tolerance 0.02 (|p| = 2) or 0.05.
pub fn default_tolerance(name: &str, p: i32) -> f64 {
    match name {
        "theorem_155" => 1e-9,
        "lemma_98" => 1e-2,
        "lemma_100" => 1e-10,
        "lemma_101" | "corollary_102" | "lemma_103" => 0.05,
        "lemma_106" => 0.1,
        "lemma_109" | "lemma_114" | "lemma_115" | "lemma_121" => 1e-10,
        "lemma_93" | "lemma_125" | "lemma_126" => 1e-6,
        "theorem_97" => {
            if p.unsigned_abs() == 2 {
                0.02
            } else {
                0.05
            }
        }
        _ => 1e-10,
    }
}

fn resolve_tolerance(config: &ExperimentConfig, name: &str) -> f64 {
    config
        .tolerances
        .get(name)
        .copied()
        .unwrap_or_else(|| default_tolerance(name, config.p))
}

/// Determinant anchor: |J_2| = 4|p| - 1 (7 for the first twist knot,
/// 11 for the second, ...).
fn check_theorem_155(spec: &TwistKnotSpec, tolerance: f64) -> Result<LemmaCheck> {
    let j2 = colored_jones(spec, 2)?;
    let anchor = (4 * spec.p().unsigned_abs() - 1) as f64;
    let margin = (j2.value.norm() - anchor).abs();
    Ok(LemmaCheck {
        name: "theorem_155".into(),
        passed: margin < tolerance,
        margin,
        tolerance,
        note: format!(
            "|J_2| = {:.12} vs determinant anchor {anchor}; margin is the absolute difference",
            j2.value.norm()
        ),
    })
}

/// Circle convergence: |Li2(exp(2 pi i n/N)) - pi^2/6| decreasing over
/// doublings N = 8n .. 2^14 n for n in {1, 2, 3}, final below tolerance.
fn check_lemma_98(tolerance: f64) -> LemmaCheck {
    let target = Complex64::new(PI * PI / 6.0, 0.0);
    let mut monotone = true;
    let mut final_max = 0.0f64;
    for n in 1u32..=3 {
        let mut prev = f64::INFINITY;
        let mut last = f64::NAN;
        for k in 3..=14 {
            let big_n = n << k;
            let d = (li2_circle(n as i64, big_n) - target).norm();
            if d >= prev {
                monotone = false;
            }
            prev = d;
            last = d;
        }
        final_max = final_max.max(last);
    }
    LemmaCheck {
        name: "lemma_98".into(),
        passed: monotone && final_max < tolerance,
        margin: final_max,
        tolerance,
        note: format!(
            "max over n in {{1,2,3}} of |Li2 circle value - pi^2/6| at N = 16384 n; \
             monotone decreasing over doublings: {monotone}"
        ),
    }
}

/// Duplication identity: Li2(z) + Li2(-z) = Li2(z^2)/2 at seeded random
/// points in the disk |z| <= 0.99.
fn check_lemma_100(seed: u64, points: usize, tolerance: f64) -> LemmaCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(100));
    let unit = Uniform::new(0.0f64, 1.0);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let r = 0.99 * unit.sample(&mut rng).sqrt();
        let t = TAU * unit.sample(&mut rng);
        let z = Complex64::from_polar(r, t);
        let lhs = li2(z, Branch::Principal).unwrap().value
            + li2(-z, Branch::Principal).unwrap().value;
        let rhs = li2(z * z, Branch::Principal).unwrap().value.scale(0.5);
        worst = worst.max((lhs - rhs).norm());
    }
    LemmaCheck {
        name: "lemma_100".into(),
        passed: worst < tolerance,
        margin: worst,
        tolerance,
        note: format!("max |Li2(z) + Li2(-z) - Li2(z^2)/2| over {points} random |z| <= 0.99"),
    }
}

/// q-factorial asymptotics: with n = floor(alpha N), the difference
/// |(2 pi/N) log|(q)_n| - (-Cl2(2 pi n/N))| decreases along N_values
/// and ends below the tolerance.
pub fn check_lemma_101(alpha: f64, n_values: &[u32], tolerance: f64) -> Result<LemmaCheck> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let mut diffs = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let k = (alpha * n as f64).floor() as u32;
        if k < 1 {
            return Err(Error::Domain(format!(
                "alpha N = {} is below 1 at N = {n}",
                alpha * n as f64
            )));
        }
        let table = QTable::new(n)?;
        let lhs = TAU / n as f64 * table.log_poch[k as usize];
        let rhs = -clausen(TAU * k as f64 / n as f64);
        diffs.push((lhs - rhs).abs());
    }
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let final_diff = *diffs.last().unwrap();
    Ok(LemmaCheck {
        name: "lemma_101".into(),
        passed: monotone && final_diff < tolerance,
        margin: final_diff,
        tolerance,
        note: format!(
            "alpha = {alpha:.6}; differences along N = {n_values:?}: {:?}; decreasing: {monotone}",
            diffs.iter().map(|d| format!("{d:.6}")).collect::<Vec<_>>()
        ),
    })
}

/// Bracket asymptotics at fixed ratios top = N/2, bot = N/4: the scaled
/// bracket log-magnitude tracks -Cl2(t_top) + Cl2(t_top - t_bot)
/// + Cl2(t_bot).
fn check_corollary_102(n_values: &[u32], tolerance: f64) -> Result<LemmaCheck> {
    let mut diffs = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let (top, bot) = (n / 2, n / 4);
        let table = QTable::new(n)?;
        let lhs = TAU / n as f64
            * (table.log_poch[top as usize]
                - table.log_poch[(top - bot) as usize]
                - table.log_poch[bot as usize]);
        let th = |k: u32| TAU * k as f64 / n as f64;
        let rhs = -clausen(th(top)) + clausen(th(top - bot)) + clausen(th(bot));
        diffs.push((lhs - rhs).abs());
    }
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let final_diff = *diffs.last().unwrap();
    Ok(LemmaCheck {
        name: "corollary_102".into(),
        passed: monotone && final_diff < tolerance,
        margin: final_diff,
        tolerance,
        note: format!(
            "ratios (1/2, 1/4); differences along N = {n_values:?}: {:?}; decreasing: {monotone}",
            diffs.iter().map(|d| format!("{d:.6}")).collect::<Vec<_>>()
        ),
    })
}

/// Lattice potential vs the potential at the corresponding circle
/// points, at fixed index ratios. The difference is exactly
/// -Cl2(t_1) - 2 Cl2(t_m) (it does not vanish as N grows), so this
/// check measures the stated quantity and reports the closed form in
/// its note.
fn check_lemma_103(spec: &TwistKnotSpec, n_values: &[u32], tolerance: f64) -> Result<LemmaCheck> {
    let m = spec.dimension();
    // the documented ratio tuple for the 3-variable case, extended
    // harmonically for larger p
    let ratios: Vec<f64> = if m == 3 {
        vec![0.125, 0.25, 0.5]
    } else {
        (1..=m).map(|i| i as f64 / (2 * m) as f64).collect()
    };
    let mut diffs = Vec::with_capacity(n_values.len());
    let mut closed_last = 0.0f64;
    for &n in n_values {
        let ns: Vec<u32> = ratios.iter().map(|r| (r * n as f64).floor() as u32).collect();
        let idx = LatticeIndex::new(ns.clone())?;
        let lat = potential_f_lattice(spec, &idx, n).im;
        let z: Vec<Complex64> = ns
            .iter()
            .map(|&k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
            .collect();
        let circ = crate::potential::potential_f(spec, &z)?.im;
        diffs.push((lat - circ).abs());
        closed_last = -clausen(TAU * ns[0] as f64 / n as f64)
            - 2.0 * clausen(TAU * ns[m - 1] as f64 / n as f64);
    }
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let final_diff = *diffs.last().unwrap();
    Ok(LemmaCheck {
        name: "lemma_103".into(),
        passed: monotone && final_diff < tolerance,
        margin: final_diff,
        tolerance,
        note: format!(
            "fixed index ratios {ratios:?}; differences along N = {n_values:?}: {:?}; \
             the difference equals -Cl2(t_1) - 2 Cl2(t_m) exactly ({closed_last:.8} at the \
             last N), so it cannot shrink at fixed ratios; with fixed indices n = (1,..) \
             instead it does decrease but needs N near 2e5 to pass this tolerance",
            diffs.iter().map(|d| format!("{d:.6}")).collect::<Vec<_>>()
        ),
    })
}

/// Max-term location consistency: |(2 pi/N) log maxterm - Im lattice
/// potential at the argmax| should shrink when N doubles and end under
/// the tolerance once N reaches 200.
fn check_lemma_106(spec: &TwistKnotSpec, rows: &[PerNRow], tolerance: f64) -> LemmaCheck {
    let dist: Vec<(u32, f64)> = rows
        .iter()
        .map(|r| {
            let idx = LatticeIndex::new(r.argmax.clone()).expect("argmax is ordered");
            let lat = potential_f_lattice(spec, &idx, r.n).im;
            (r.n, (TAU / r.n as f64 * r.max_log_term - lat).abs())
        })
        .collect();
    let mut doubling_ok = true;
    for (n, d) in &dist {
        if let Some((_, d2)) = dist.iter().find(|(n2, _)| *n2 == n * 2) {
            if d2 >= d {
                doubling_ok = false;
            }
        }
    }
    let last = dist.last().map(|&(_, d)| d).unwrap_or(f64::NAN);
    let bound_applies = dist.last().map(|&(n, _)| n >= 200).unwrap_or(false);
    let passed = doubling_ok && (!bound_applies || last < tolerance);
    LemmaCheck {
        name: "lemma_106".into(),
        passed,
        margin: last,
        tolerance,
        note: format!(
            "distances {:?}; decreasing across every doubling present: {doubling_ok}; \
             the < tolerance clause applies from N = 200 ({})",
            dist.iter()
                .map(|(n, d)| format!("N={n}: {d:.6}"))
                .collect::<Vec<_>>(),
            if bound_applies { "applied" } else { "largest N below 200, trend only" }
        ),
    }
}

/// Per-term bound at one color: every summand magnitude is at most
/// N 2^{(N-1)(2p-1)}; the margin is the largest ratio observed.
pub fn check_lemma_114(p: i32, n: u32, budget: u128, tolerance: f64) -> Result<LemmaCheck> {
    let spec = TwistKnotSpec::new(p)?;
    let (_, stats) = colored_jones_with_stats(&spec, n, budget)?;
    let bound_log = (n as f64).ln() + ((n - 1) as usize * spec.dimension()) as f64 * 2f64.ln();
    let ratio = (stats.max_log_term - bound_log).exp();
    Ok(LemmaCheck {
        name: "lemma_114".into(),
        passed: ratio <= 1.0 + tolerance,
        margin: ratio,
        tolerance,
        note: format!(
            "p = {p}, N = {n}: max |term| / (N 2^((N-1)(2p-1))) over all {} lattice points",
            stats.term_count
        ),
    })
}

fn check_lemma_114_rows(spec: &TwistKnotSpec, rows: &[PerNRow], tolerance: f64) -> LemmaCheck {
    let mut worst = 0.0f64;
    let mut at = 0u32;
    for r in rows {
        let bound_log =
            (r.n as f64).ln() + ((r.n - 1) as usize * spec.dimension()) as f64 * 2f64.ln();
        let ratio = (r.max_log_term - bound_log).exp();
        if ratio > worst {
            worst = ratio;
            at = r.n;
        }
    }
    LemmaCheck {
        name: "lemma_114".into(),
        passed: worst <= 1.0 + tolerance,
        margin: worst,
        tolerance,
        note: format!("max over report rows of max |term| / (N 2^((N-1)(2p-1))), attained at N = {at}"),
    }
}

/// Growth floor: |J_N| >= 1 for every N >= 4 in the list; the margin is
/// the smallest log|J_N| seen there (nonnegative iff the check holds).
pub fn check_lemma_121(p: i32, n_values: &[u32], budget: u128, tolerance: f64) -> Result<LemmaCheck> {
    let spec = TwistKnotSpec::new(p)?;
    let mut min_log = f64::INFINITY;
    let mut at = 0u32;
    let mut small = Vec::new();
    for &n in n_values {
        let (j, _) = colored_jones_with_stats(&spec, n, budget)?;
        if n >= 4 {
            if j.log_abs < min_log {
                min_log = j.log_abs;
                at = n;
            }
        } else {
            small.push(format!("N={n}: |J| = {:.6}", j.log_abs.exp()));
        }
    }
    let passed = min_log >= -tolerance;
    Ok(LemmaCheck {
        name: "lemma_121".into(),
        passed,
        margin: min_log,
        tolerance,
        note: format!(
            "min log|J_N| over N >= 4 attained at N = {at}; boundary cases below 4 \
             (informational): {small:?}"
        ),
    })
}

fn check_lemma_121_rows(rows: &[PerNRow], tolerance: f64) -> LemmaCheck {
    let mut min_log = f64::INFINITY;
    let mut at = 0u32;
    let mut small = Vec::new();
    for r in rows {
        if r.n >= 4 {
            if r.log_abs < min_log {
                min_log = r.log_abs;
                at = r.n;
            }
        } else {
            small.push(format!("N={}: |J| = {:.6}", r.n, r.log_abs.exp()));
        }
    }
    LemmaCheck {
        name: "lemma_121".into(),
        passed: min_log >= -tolerance,
        margin: min_log,
        tolerance,
        note: format!(
            "min log|J_N| over report rows with N >= 4, attained at N = {at}; \
             rows below 4 (informational): {small:?}"
        ),
    }
}

fn check_squeeze(name: &str, rows: &[PerNRow], tolerance: f64) -> LemmaCheck {
    let upper = name == "lemma_109";
    let mut slack = f64::INFINITY;
    let mut at = 0u32;
    for r in rows {
        let s = if upper {
            r.upper_proxy - r.v_n
        } else {
            r.v_n - r.lower_proxy
        };
        if s < slack {
            slack = s;
            at = r.n;
        }
    }
    let side = if upper {
        "v_N <= upper_proxy"
    } else {
        "lower_proxy <= v_N"
    };
    let mut note = format!("min slack of {side} over report rows, attained at N = {at}");
    if !upper {
        note.push_str(
            "; the no-constant proxy variant is recorded per row as \
             lower_proxy_no_constant and is not a valid finite-N bound",
        );
    }
    LemmaCheck {
        name: name.into(),
        passed: slack >= -tolerance,
        margin: slack,
        tolerance,
        note,
    }
}

fn check_solver_margins(a: &[Complex64], name: &str, tolerance: f64) -> LemmaCheck {
    let (margin, what) = match name {
        "lemma_125" => ((a[0].re - 1.0).abs(), "|Re a_1 - 1|".to_string()),
        "lemma_126" => ((a[1].re - 1.0).abs(), "|Re a_2 - 1|".to_string()),
        _ => {
            let m = a
                .iter()
                .map(|w| (w.re - 1.0).abs())
                .fold(f64::INFINITY, f64::min);
            (m, "min over i of |Re a_i - 1|".to_string())
        }
    };
    LemmaCheck {
        name: name.into(),
        passed: margin > tolerance,
        margin,
        tolerance,
        note: format!(
            "{what} at the solved point; the ray [0, oo) clearance is {:.6}",
            a.iter().map(|w| ray_distance(*w)).fold(f64::INFINITY, f64::min)
        ),
    }
}

/// The full experiment. Never errs on a failed property check; budget
/// and solver errors propagate.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let spec = TwistKnotSpec::new(config.p)?;
    let m = spec.dimension();
    let mut diagnostics = Vec::new();
    if config.tolerances.is_empty() {
        diagnostics.push("tolerances: defaults applied for every check".to_string());
    }

    let solver_cfg = SolverConfig {
        seed: config.seed,
        ..SolverConfig::default()
    };
    let critical = solve_critical(&spec, &solver_cfg)?;
    let potential_volume = critical.volume;

    let mut per_n = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        let (j, stats) = colored_jones_with_stats(&spec, n, config.term_budget)?;
        let nf = n as f64;
        let scale = TAU / nf;
        per_n.push(PerNRow {
            n,
            v_n: scale * j.log_abs,
            lower_proxy: scale
                * (stats.max_log_term - nf.ln() - ((n - 1) as usize * m) as f64 * 2f64.ln()),
            upper_proxy: scale * (stats.max_log_term + m as f64 * nf.ln()),
            lower_proxy_no_constant: scale * (stats.max_log_term - nf.ln()),
            log_abs: j.log_abs,
            max_log_term: stats.max_log_term,
            argmax: stats.argmax,
            extended_precision: stats.extended_precision,
        });
    }

    let seq: Vec<(u32, f64)> = per_n.iter().map(|r| (r.n, r.v_n)).collect();
    let (extrapolated, fit_rms_residual) = if seq.len() >= 4 {
        extrapolate_limit(&seq)?
    } else {
        diagnostics.push(format!(
            "extrapolation skipped ({} point(s), need 4): reporting the last v_N",
            seq.len()
        ));
        (seq.last().unwrap().1, 0.0)
    };
    let gap = (extrapolated - potential_volume).abs();

    // model-adequacy diagnostic: refit on the N <= 200 prefix when both
    // halves have enough points
    let prefix: Vec<(u32, f64)> = seq.iter().copied().filter(|&(n, _)| n <= 200).collect();
    if prefix.len() >= 4 && prefix.len() < seq.len() {
        let (v200, _) = extrapolate_limit(&prefix)?;
        let gap200 = (v200 - potential_volume).abs();
        if gap200 < gap {
            diagnostics.push(format!(
                "extrapolation-model inadequacy flag: gap with N <= 200 ({gap200:.6}) is \
                 smaller than with all N ({gap:.6}); more data moved the fitted limit away \
                 from the critical value"
            ));
        } else {
            diagnostics.push(format!(
                "gap shrinkage holds: {gap200:.6} (N <= 200) >= {gap:.6} (all N)"
            ));
        }
    }

    let grid_max_n = 60u32;
    let (grid_idx, grid_val) = grid_max_im_f(&spec, grid_max_n, config.term_budget)?;
    diagnostics.push(format!(
        "lattice grid maximum at N = {grid_max_n}: {grid_val:.9} at {:?} (the critical \
         value Im f(a) is {potential_volume:.9})",
        grid_idx.indices()
    ));
    diagnostics.push(format!(
        "census volumes nearest the two computed numbers (informational): extrapolated \
         {extrapolated:.6}; critical value {potential_volume:.6}; twist-knot census values \
         2.828122, 3.163963, 3.331744, 3.427205"
    ));

    let asym_n: Vec<u32> = vec![100, 200, 400, 800];
    let tol = |name: &str| resolve_tolerance(config, name);
    let mut checks = vec![
        check_theorem_155(&spec, tol("theorem_155"))?,
        check_lemma_98(tol("lemma_98")),
        check_lemma_100(config.seed, 10_000, tol("lemma_100")),
        check_lemma_101(1.0 / 3.0, &asym_n, tol("lemma_101"))?,
        check_corollary_102(&asym_n, tol("corollary_102"))?,
        check_lemma_103(&spec, &asym_n, tol("lemma_103"))?,
        check_lemma_106(&spec, &per_n, tol("lemma_106")),
        check_squeeze("lemma_109", &per_n, tol("lemma_109")),
        check_lemma_114_rows(&spec, &per_n, tol("lemma_114")),
        check_squeeze("lemma_115", &per_n, tol("lemma_115")),
        check_lemma_121_rows(&per_n, tol("lemma_121")),
        check_solver_margins(&critical.a, "lemma_93", tol("lemma_93")),
        check_solver_margins(&critical.a, "lemma_125", tol("lemma_125")),
        check_solver_margins(&critical.a, "lemma_126", tol("lemma_126")),
        LemmaCheck {
            name: "theorem_97".into(),
            passed: gap < tol("theorem_97"),
            margin: gap,
            tolerance: tol("theorem_97"),
            note: format!(
                "|extrapolated - Im f(a)| with extrapolated = {extrapolated:.9} \
                 (fit rms {fit_rms_residual:.3e}) and Im f(a) = {potential_volume:.9}"
            ),
        },
    ];
    checks.sort_by(|a, b| a.name.cmp(&b.name));

    Ok(ConvergenceReport {
        p: config.p,
        seed: config.seed,
        term_budget: config.term_budget.min(u64::MAX as u128) as u64,
        per_n,
        extrapolated,
        fit_rms_residual,
        potential_volume,
        gap,
        grid_max_n,
        grid_max_value: grid_val,
        grid_max_index: grid_idx.indices().to_vec(),
        lemma_checks: checks,
        diagnostics,
    })
}

/// Check groups runnable without a full experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaSuite {
    All,
    Qseries,
    Dilog,
    Bounds,
    Asymptotics,
}

impl LemmaSuite {
    pub fn parse(s: &str) -> Result<LemmaSuite> {
        match s {
            "all" => Ok(LemmaSuite::All),
            "qseries" => Ok(LemmaSuite::Qseries),
            "dilog" => Ok(LemmaSuite::Dilog),
            "bounds" => Ok(LemmaSuite::Bounds),
            "asymptotics" => Ok(LemmaSuite::Asymptotics),
            other => Err(Error::Usage(format!(
                "unknown suite '{other}' (expected all, qseries, dilog, bounds, asymptotics)"
            ))),
        }
    }
}

/// Standalone check runner behind the `lemmas` command: fixed
/// desk-scale parameters, default tolerances, p = 2 where a knot is
/// needed. The headline gap check (`theorem_97`) requires the full
/// experiment and is only produced by `run_experiment`.
pub fn run_lemma_suite(suite: LemmaSuite, seed: u64, budget: u128) -> Result<Vec<LemmaCheck>> {
    use LemmaSuite::*;
    let spec = TwistKnotSpec::new(2)?;
    let asym_n: Vec<u32> = vec![100, 200, 400, 800];
    let mut checks = Vec::new();
    if matches!(suite, All | Qseries) {
        checks.push(check_theorem_155(&spec, default_tolerance("theorem_155", 2))?);
    }
    if matches!(suite, All | Dilog) {
        checks.push(check_lemma_98(default_tolerance("lemma_98", 2)));
        checks.push(check_lemma_100(seed, 10_000, default_tolerance("lemma_100", 2)));
    }
    if matches!(suite, All | Bounds) {
        checks.push(check_lemma_114(2, 20, budget, default_tolerance("lemma_114", 2))?);
        checks.push(check_lemma_121(
            2,
            &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
            budget,
            default_tolerance("lemma_121", 2),
        )?);
        let rows = squeeze_rows(&spec, &[10, 20, 40], budget)?;
        checks.push(check_squeeze("lemma_109", &rows, default_tolerance("lemma_109", 2)));
        checks.push(check_squeeze("lemma_115", &rows, default_tolerance("lemma_115", 2)));
    }
    if matches!(suite, All | Asymptotics) {
        checks.push(check_lemma_101(1.0 / 3.0, &asym_n, default_tolerance("lemma_101", 2))?);
        checks.push(check_corollary_102(&asym_n, default_tolerance("corollary_102", 2))?);
        checks.push(check_lemma_103(&spec, &asym_n, default_tolerance("lemma_103", 2))?);
        let rows = squeeze_rows(&spec, &[50, 100, 200], budget)?;
        checks.push(check_lemma_106(&spec, &rows, default_tolerance("lemma_106", 2)));
    }
    if matches!(suite, All) {
        let solver_cfg = SolverConfig {
            seed,
            ..SolverConfig::default()
        };
        let critical = solve_critical(&spec, &solver_cfg)?;
        for name in ["lemma_93", "lemma_125", "lemma_126"] {
            checks.push(check_solver_margins(&critical.a, name, default_tolerance(name, 2)));
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(checks)
}

fn squeeze_rows(spec: &TwistKnotSpec, n_values: &[u32], budget: u128) -> Result<Vec<PerNRow>> {
    let m = spec.dimension();
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let (j, stats) = colored_jones_with_stats(spec, n, budget)?;
        let nf = n as f64;
        let scale = TAU / nf;
        rows.push(PerNRow {
            n,
            v_n: scale * j.log_abs,
            lower_proxy: scale
                * (stats.max_log_term - nf.ln() - ((n - 1) as usize * m) as f64 * 2f64.ln()),
            upper_proxy: scale * (stats.max_log_term + m as f64 * nf.ln()),
            lower_proxy_no_constant: scale * (stats.max_log_term - nf.ln()),
            log_abs: j.log_abs,
            max_log_term: stats.max_log_term,
            argmax: stats.argmax,
            extended_precision: stats.extended_precision,
        });
    }
    Ok(rows)
}
