//! The dilogarithm potential function, its unit-torus lattice variant,
//! and the critical-point machinery that produces the volume.
//!
//! For m = 2p - 1 variables the potential is
//!
//! ```text
//! f(z) = -Li2(1/z_1)
//!        + sum_{i=1}^{2p-2} ( Li2(z_i) - Li2(z_i/z_{i+1}) + Li2(1/z_{i+1}) )
//!        + Li2(z_{2p-1}),
//! ```
//!
//! with every dilogarithm on the principal branch. Setting each
//! z_k d f / d z_k to zero and exponentiating yields the rational
//! critical system
//!
//! ```text
//! 1 - z_1/z_2                 = (1 - z_1)(1 - 1/z_1)
//! (1 - z_i/z_{i+1})(1 - 1/z_i) = (1 - z_i)(1 - z_{i-1}/z_i)   (1 < i < m)
//! 1 - 1/z_m                   = (1 - z_m)(1 - z_{m-1}/z_m)
//! ```
//!
//! whose solutions strictly contain the critical points of f: the
//! exponentiation forgets 2 pi i multiples, so the solver keeps only
//! solutions whose true gradient also vanishes. Among those it returns
//! the admissible point maximizing Im f; that imaginary part is the
//! volume candidate compared against the growth of the colored Jones
//! evaluations.
//!
//! The lattice variant replaces each argument by a root of unity
//! exp(2 pi i n_j / N) and is evaluated through the closed circle form
//! of Li2, so its imaginary part telescopes to
//! Cl2(t_1) + sum Cl2(t_{j+1} - t_j) - 2 Cl2(t_m) with t_j = 2 pi n_j/N.

use crate::dilog::{clausen, li2, li2_circle, Branch};
use crate::error::{Error, Result};
use crate::jones::{triangular_term_count, LatticeIndex, TwistKnotSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Multi-start Newton configuration for `solve_critical`. Start 0 is the
/// deterministic point with every component exp(i pi / 3); starts
/// 1..starts draw |z| in [0.5, 2] and arg in (0.1, pi - 0.1) from a
/// counter-seeded generator, so runs are reproducible for a given seed.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            starts: 64,
            max_iterations: 200,
            tolerance: 1e-12,
            seed: 7,
        }
    }
}

/// An admissible critical point: the solved coordinates, the max-norm of
/// the rational system there, and the potential value whose imaginary
/// part is the volume candidate.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub a: Vec<Complex64>,
    pub residual: f64,
    pub volume: f64,
    pub potential: Complex64,
}

fn effective_dimension(spec: &TwistKnotSpec) -> usize {
    // the mirror image (p < 0) has the same volume; the potential is
    // always evaluated for |p|
    spec.dimension()
}

fn check_arity(spec: &TwistKnotSpec, z: &[Complex64]) -> Result<()> {
    let m = effective_dimension(spec);
    if z.len() != m {
        return Err(Error::Domain(format!(
            "expected {m} components for p = {}, got {}",
            spec.p(),
            z.len()
        )));
    }
    if let Some(k) = z.iter().position(|w| w.re == 0.0 && w.im == 0.0) {
        return Err(Error::Domain(format!("component z{} is zero", k + 1)));
    }
    Ok(())
}

/// Exact-cut test for a dilogarithm argument: on [1, oo) including the
/// endpoint.
fn on_cut(w: Complex64) -> bool {
    w.im == 0.0 && w.re >= 1.0
}

/// Evaluate Li2 for one named potential term. An argument exactly equal
/// to 1 takes the boundary value pi^2/6 (needed e.g. when consecutive
/// components coincide); anywhere else on [1, oo) is a reported error.
fn li2_term(w: Complex64, name: impl Fn() -> String) -> Result<Complex64> {
    if w.im == 0.0 && w.re == 1.0 {
        return Ok(Complex64::new(PI * PI / 6.0, 0.0));
    }
    if on_cut(w) {
        return Err(Error::CutArgument {
            term: name(),
            value: format!("{w}"),
        });
    }
    li2(w, Branch::Principal).map(|v| v.value).map_err(|_| Error::CutArgument {
        term: name(),
        value: format!("{w}"),
    })
}

/// The potential f(z) on the principal branch.
pub fn potential_f(spec: &TwistKnotSpec, z: &[Complex64]) -> Result<Complex64> {
    check_arity(spec, z)?;
    let m = z.len();
    let mut f = -li2_term(z[0].inv(), || "1/z1".to_string())?;
    for i in 0..m - 1 {
        f += li2_term(z[i], || format!("z{}", i + 1))?;
        f -= li2_term(z[i] / z[i + 1], || format!("z{}/z{}", i + 1, i + 2))?;
        f += li2_term(z[i + 1].inv(), || format!("1/z{}", i + 2))?;
    }
    f += li2_term(z[m - 1], || format!("z{m}"))?;
    Ok(f)
}

/// The analytic gradient of f. Each component collects the
/// -log(1 - w)/w chain factors of the four dilogarithms touching z_k:
///
/// ```text
/// df/dz_1 = ( -log(1 - 1/z_1) - log(1 - z_1) + log(1 - z_1/z_2) ) / z_1
/// df/dz_k = ( -log(1 - z_k) + log(1 - z_k/z_{k+1})
///             - log(1 - z_{k-1}/z_k) + log(1 - 1/z_k) ) / z_k
/// df/dz_m = ( -log(1 - z_m) - log(1 - z_{m-1}/z_m) + log(1 - 1/z_m) ) / z_m
/// ```
///
/// Arguments on the cut (where f is not differentiable) are reported
/// exactly as in `potential_f`.
pub fn grad_f(spec: &TwistKnotSpec, z: &[Complex64]) -> Result<Vec<Complex64>> {
    check_arity(spec, z)?;
    let m = z.len();
    let one = Complex64::new(1.0, 0.0);
    let lg = |w: Complex64, name: &dyn Fn() -> String| -> Result<Complex64> {
        if on_cut(w) {
            return Err(Error::CutArgument {
                term: name(),
                value: format!("{w}"),
            });
        }
        Ok((one - w).ln())
    };
    let mut g = Vec::with_capacity(m);
    for k in 0..m {
        let zk = z[k];
        let mut s = -lg(zk, &|| format!("z{}", k + 1))?;
        if k + 1 < m {
            s += lg(zk / z[k + 1], &|| format!("z{}/z{}", k + 1, k + 2))?;
        } else {
            s -= lg(z[k - 1] / zk, &|| format!("z{}/z{}", k, k + 1))?;
            s += lg(zk.inv(), &|| format!("1/z{}", k + 1))?;
        }
        if k == 0 {
            s -= lg(zk.inv(), &|| "1/z1".to_string())?;
        } else if k + 1 < m {
            s -= lg(z[k - 1] / zk, &|| format!("z{}/z{}", k, k + 1))?;
            s += lg(zk.inv(), &|| format!("1/z{}", k + 1))?;
        }
        g.push(s / zk);
    }
    Ok(g)
}

/// Left-minus-right of the three rational equation families, as complex
/// numbers (the solver's F).
fn critical_system(z: &[Complex64]) -> Vec<Complex64> {
    let m = z.len();
    let one = Complex64::new(1.0, 0.0);
    let mut f = Vec::with_capacity(m);
    f.push(one - z[0] / z[1] - (one - z[0]) * (one - z[0].inv()));
    for i in 1..m - 1 {
        f.push(
            (one - z[i] / z[i + 1]) * (one - z[i].inv())
                - (one - z[i]) * (one - z[i - 1] / z[i]),
        );
    }
    f.push(one - z[m - 1].inv() - (one - z[m - 1]) * (one - z[m - 2] / z[m - 1]));
    f
}

/// Tridiagonal Jacobian of `critical_system`.
fn critical_jacobian(z: &[Complex64]) -> DMatrix<Complex64> {
    let m = z.len();
    let one = Complex64::new(1.0, 0.0);
    let mut j = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    j[(0, 0)] = one - (z[0] * z[0]).inv() - z[1].inv();
    j[(0, 1)] = z[0] / (z[1] * z[1]);
    for i in 1..m - 1 {
        let a = one - z[i] / z[i + 1];
        let b = one - z[i].inv();
        let c = one - z[i];
        let d = one - z[i - 1] / z[i];
        let zi2 = z[i] * z[i];
        j[(i, i - 1)] = c / z[i];
        j[(i, i)] = -b / z[i + 1] + a / zi2 + d - c * z[i - 1] / zi2;
        j[(i, i + 1)] = b * z[i] / (z[i + 1] * z[i + 1]);
    }
    let zm = z[m - 1];
    let zm2 = zm * zm;
    j[(m - 1, m - 2)] = (one - zm) / zm;
    j[(m - 1, m - 1)] = zm2.inv() + one - z[m - 2] / zm - (one - zm) * z[m - 2] / zm2;
    j
}

/// Component magnitudes |LHS - RHS| of the three equation families.
pub fn critical_residual(spec: &TwistKnotSpec, z: &[Complex64]) -> Result<Vec<f64>> {
    check_arity(spec, z)?;
    Ok(critical_system(z).iter().map(|w| w.norm()).collect())
}

fn system_max_norm(z: &[Complex64]) -> f64 {
    critical_system(z)
        .iter()
        .map(|w| w.norm())
        .fold(0.0, f64::max)
}

/// Distance from w to the ray [0, oo).
pub fn ray_distance(w: Complex64) -> f64 {
    if w.re <= 0.0 {
        w.norm()
    } else {
        w.im.abs()
    }
}

/// Newton with residual-decreasing damping from one start. Returns the
/// final iterate, its residual, and whether the tolerance was met.
fn newton_run(
    mut z: Vec<Complex64>,
    max_iterations: usize,
    tolerance: f64,
) -> (Vec<Complex64>, f64, bool) {
    let m = z.len();
    let mut res = system_max_norm(&z);
    for _ in 0..max_iterations {
        if !res.is_finite() {
            return (z, f64::INFINITY, false);
        }
        if res < tolerance {
            return (z, res, true);
        }
        let f = critical_system(&z);
        let jac = critical_jacobian(&z);
        let rhs = DVector::from_iterator(m, f.iter().map(|w| -w));
        let step = match jac.lu().solve(&rhs) {
            Some(s) => s,
            None => return (z, res, false),
        };
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..30 {
            let mut cand: Vec<Complex64> =
                (0..m).map(|k| z[k] + step[k].scale(lambda)).collect();
            // keep iterates off the excluded ray so the divisions and the
            // admissibility geometry stay well defined
            for w in cand.iter_mut() {
                if w.im.abs() < 1e-12 && w.re > -1e-12 {
                    w.im += 1e-12;
                }
            }
            let cres = system_max_norm(&cand);
            if cres.is_finite() && cres < res {
                z = cand;
                res = cres;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return (z, res, false);
        }
    }
    (z, res, res < tolerance)
}

/// Multi-start damped Newton on the rational system, filtered down to
/// genuine critical points of f.
///
/// A converged solution is admissible when its residual meets the
/// tolerance, every component keeps distance > 1e-6 from the ray
/// [0, oo), every |Re a_i - 1| > 1e-6, and the true gradient of f has
/// max-norm < 1e-8 (this last filter removes solutions the
/// exponentiation introduced, which solve the rational system with a
/// gradient offset by 2 pi i). Among admissible points the one
/// maximizing Im f wins, ties resolved by start order.
pub fn solve_critical(spec: &TwistKnotSpec, config: &SolverConfig) -> Result<CriticalPoint> {
    let m = effective_dimension(spec);
    let radius = Uniform::new(0.5f64, 2.0);
    let angle = Uniform::new(0.1f64, PI - 0.1);
    let mut best: Option<CriticalPoint> = None;
    let mut best_residual = f64::INFINITY;
    for s in 0..config.starts.max(1) {
        let z0: Vec<Complex64> = if s == 0 {
            vec![Complex64::from_polar(1.0, PI / 3.0); m]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(s as u64));
            (0..m)
                .map(|_| {
                    Complex64::from_polar(radius.sample(&mut rng), angle.sample(&mut rng))
                })
                .collect()
        };
        let (z, res, converged) = newton_run(z0, config.max_iterations, config.tolerance);
        if res < best_residual {
            best_residual = res;
        }
        if !converged {
            continue;
        }
        if z.iter().any(|w| ray_distance(*w) <= 1e-6) {
            continue;
        }
        if z.iter().any(|w| (w.re - 1.0).abs() <= 1e-6) {
            continue;
        }
        let grad_ok = match grad_f(spec, &z) {
            Ok(g) => g.iter().map(|w| w.norm()).fold(0.0, f64::max) < 1e-8,
            Err(_) => false,
        };
        if !grad_ok {
            continue;
        }
        let fval = match potential_f(spec, &z) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let better = match &best {
            None => true,
            Some(b) => fval.im > b.volume,
        };
        if better {
            best = Some(CriticalPoint {
                a: z,
                residual: res,
                volume: fval.im,
                potential: fval,
            });
        }
    }
    best.ok_or(Error::SolverFailure {
        starts: config.starts.max(1),
        best_residual,
    })
}

/// The lattice potential: every argument of the displayed sum is the
/// root of unity exp(2 pi i n_j / N), evaluated through the closed
/// circle form of Li2:
///
/// ```text
/// sum_{i=1}^{2p-2} [ Li2(w^{n_i}) - Li2(w^{n_{i+1}}) + Li2(w^{n_{i+1}-n_i}) ]
///   - Li2(w^{n_{2p-1}}),      w = exp(2 pi i / N).
/// ```
pub fn potential_f_lattice(spec: &TwistKnotSpec, idx: &LatticeIndex, n: u32) -> Complex64 {
    let m = effective_dimension(spec);
    let ns = idx.indices();
    assert_eq!(ns.len(), m, "lattice index arity must match 2|p|-1");
    let mut f = -li2_circle(ns[m - 1] as i64, n);
    for i in 0..m - 1 {
        f += li2_circle(ns[i] as i64, n);
        f -= li2_circle(ns[i + 1] as i64, n);
        f += li2_circle(ns[i + 1] as i64 - ns[i] as i64, n);
    }
    f
}

/// Exhaustive maximum of Im `potential_f_lattice` over the full ordered
/// lattice at resolution N. The imaginary part telescopes to
/// Cl2-in-the-first-index plus Cl2-of-consecutive-differences minus
/// twice Cl2-at-the-top, so each lattice point costs m - 1 additions
/// from one Clausen table.
pub fn grid_max_im_f(
    spec: &TwistKnotSpec,
    n: u32,
    budget: u128,
) -> Result<(LatticeIndex, f64)> {
    if n == 0 {
        return Err(Error::Domain("lattice resolution N must be at least 1".into()));
    }
    let m = effective_dimension(spec);
    let count = triangular_term_count(n, m).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::Budget {
            estimate: count,
            budget,
        });
    }
    let cl: Vec<f64> = (0..n).map(|k| clausen(TAU * k as f64 / n as f64)).collect();

    fn descend(
        level: usize,
        upper: u32,
        partial: f64,
        cl: &[f64],
        stack: &mut Vec<u32>,
        best: &mut (f64, Vec<u32>),
    ) {
        if level == 1 {
            for b in 0..=upper {
                let v = partial + cl[(upper - b) as usize] + cl[b as usize];
                if v > best.0 {
                    best.0 = v;
                    let mut arg = Vec::with_capacity(stack.len() + 1);
                    arg.push(b);
                    arg.extend(stack.iter().rev());
                    best.1 = arg;
                }
            }
            return;
        }
        for b in 0..=upper {
            stack.push(b);
            descend(level - 1, b, partial + cl[(upper - b) as usize], cl, stack, best);
            stack.pop();
        }
    }

    let tops: Vec<u32> = (0..n).collect();
    let maxima: Vec<(f64, Vec<u32>)> = tops
        .par_iter()
        .map(|&top| {
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut stack = vec![top];
            descend(m - 1, top, -2.0 * cl[top as usize], &cl, &mut stack, &mut best);
            best
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for c in maxima {
        if c.0 > best.0 {
            best = c;
        }
    }
    Ok((LatticeIndex::new(best.1)?, best.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn spec(p: i32) -> TwistKnotSpec {
        TwistKnotSpec::new(p).unwrap()
    }

    fn max_norm(v: &[f64]) -> f64 {
        v.iter().cloned().fold(0.0, f64::max)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// 22-digit critical point for p = 2, from the independent
    /// high-precision solve.
    fn frozen_a2() -> Vec<Complex64> {
        vec![
            c(0.2787264115771458, 0.4834199201861535),
            c(-0.3992317464103921, 0.3256401823153007),
            c(-1.3992317464103921, 0.3256401823153007),
        ]
    }

    fn frozen_a3() -> Vec<Complex64> {
        vec![
            c(0.2362876426102154, 0.4349075945400021),
            c(-0.2915079643574353, 0.2199560245842794),
            c(-0.6870140165163017, 0.1530720260528407),
            c(-1.1504447896957860, 0.1259329042088820),
            c(-2.1504447896957860, 0.1259329042088820),
        ]
    }

    /// Solves the rational system but is not a critical point of f (the
    /// gradient is a nonzero multiple of 2 pi i there).
    fn spurious_point() -> Vec<Complex64> {
        vec![
            c(0.97127358842285, 0.81385869587152),
            c(1.89923174641039, 0.40053175351852),
            c(0.89923174641039, 0.40053175351852),
        ]
    }

    #[test]
    fn all_minus_one_takes_boundary_value() {
        // every ratio is exactly 1 and takes the boundary value pi^2/6;
        // the displayed sum assembles to pi^2/12 + 2(-pi^2/3) - pi^2/12
        let z = vec![c(-1.0, 0.0); 3];
        let f = potential_f(&spec(2), &z).unwrap();
        assert_relative_eq!(f.re, -2.0 * PI * PI / 3.0, max_relative = 1e-14);
        assert!(f.im.abs() < 1e-14);
    }

    #[test]
    fn negative_real_inputs_give_real_output() {
        // increasing magnitudes keep every ratio in (0, 1]
        for z in [
            vec![c(-0.5, 0.0), c(-1.0, 0.0), c(-2.0, 0.0)],
            vec![c(-1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
            vec![c(-0.25, 0.0), c(-0.5, 0.0), c(-3.0, 0.0)],
        ] {
            let f = potential_f(&spec(2), &z).unwrap();
            assert!(f.im.abs() < 1e-12, "Im f = {} at {z:?}", f.im);
        }
        let z5 = vec![
            c(-0.2, 0.0),
            c(-0.4, 0.0),
            c(-0.9, 0.0),
            c(-1.5, 0.0),
            c(-2.5, 0.0),
        ];
        assert!(potential_f(&spec(3), &z5).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn cut_violations_name_the_term() {
        // z1/z2 = 2 lands on the cut
        let z = vec![c(-2.0, 0.0), c(-1.0, 0.0), c(-0.5, 0.0)];
        match potential_f(&spec(2), &z) {
            Err(Error::CutArgument { term, .. }) => assert_eq!(term, "z1/z2"),
            other => panic!("expected cut error, got {other:?}"),
        }
        // 1/z2 = 4 lands on the cut
        let z2 = vec![c(-1.0, 0.0), c(0.25, 0.0), c(-0.5, 0.0)];
        match potential_f(&spec(2), &z2) {
            Err(Error::CutArgument { term, .. }) => assert_eq!(term, "1/z2"),
            other => panic!("expected cut error, got {other:?}"),
        }
    }

    #[test]
    fn potential_matches_frozen_critical_values() {
        let f2 = potential_f(&spec(2), &frozen_a2()).unwrap();
        assert_relative_eq!(f2.re, -3.500873365551734, max_relative = 1e-12);
        assert_relative_eq!(f2.im, 3.163963228883144, max_relative = 1e-12);
        let f3 = potential_f(&spec(3), &frozen_a3()).unwrap();
        assert_relative_eq!(f3.re, -8.774740480605127, max_relative = 1e-12);
        assert_relative_eq!(f3.im, 3.427205246274016, max_relative = 1e-12);
    }

    #[test]
    fn unit_circle_inputs_match_circle_closed_form() {
        // with every z_j = w^{n_j}, f assembles from the circle values of
        // Li2 with exponents n_i, n_i - n_{i+1}, -n_{i+1}, -n_1
        let n = 12u32;
        for ns in [[1i64, 3, 5], [2, 3, 7], [1, 1, 4]] {
            let z: Vec<Complex64> = ns
                .iter()
                .map(|&k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
                .collect();
            let f = potential_f(&spec(2), &z).unwrap();
            let mut g = -li2_circle(-ns[0], n);
            for i in 0..2 {
                g += li2_circle(ns[i], n);
                g -= li2_circle(ns[i] - ns[i + 1], n);
                g += li2_circle(-ns[i + 1], n);
            }
            g += li2_circle(ns[2], n);
            assert!((f - g).norm() < 1e-12, "mismatch at {ns:?}: {f} vs {g}");
        }
    }

    #[test]
    fn gradient_agrees_with_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let radius = Uniform::new(0.6f64, 1.8);
        let angle = Uniform::new(0.15f64, PI - 0.15);
        let h = 1e-5;
        for p in [2, 3] {
            let sp = spec(p);
            let m = sp.dimension();
            for _ in 0..50 {
                let z: Vec<Complex64> = (0..m)
                    .map(|_| {
                        Complex64::from_polar(radius.sample(&mut rng), angle.sample(&mut rng))
                    })
                    .collect();
                let g = grad_f(&sp, &z).unwrap();
                for k in 0..m {
                    let mut zp = z.clone();
                    let mut zm = z.clone();
                    zp[k] += c(h, 0.0);
                    zm[k] -= c(h, 0.0);
                    let fd = (potential_f(&sp, &zp).unwrap() - potential_f(&sp, &zm).unwrap())
                        / c(2.0 * h, 0.0);
                    let rel = (g[k] - fd).norm() / g[k].norm().max(1e-3);
                    assert!(rel < 1e-6, "p={p} k={k} rel={rel:e}");
                }
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_frozen_points() {
        let g2 = grad_f(&spec(2), &frozen_a2()).unwrap();
        assert!(g2.iter().map(|w| w.norm()).fold(0.0, f64::max) < 1e-10);
        let g3 = grad_f(&spec(3), &frozen_a3()).unwrap();
        assert!(g3.iter().map(|w| w.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let z = vec![c(0.3, 0.5), c(-0.4, 0.33), c(-1.4, 0.31)];
        let jac = critical_jacobian(&z);
        let h = 1e-6;
        for col in 0..3 {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[col] += c(h, 0.0);
            zm[col] -= c(h, 0.0);
            let fp = critical_system(&zp);
            let fm = critical_system(&zm);
            for row in 0..3 {
                let fd = (fp[row] - fm[row]) / c(2.0 * h, 0.0);
                assert!(
                    (jac[(row, col)] - fd).norm() < 1e-6,
                    "J[{row}][{col}] = {} vs fd {fd}",
                    jac[(row, col)]
                );
            }
        }
    }

    #[test]
    fn residual_examples() {
        // a solved point has a tiny residual; a generic point does not
        let r = critical_residual(&spec(2), &frozen_a2()).unwrap();
        assert!(max_norm(&r) < 1e-12);
        let generic = vec![c(2.0, 1.0); 3];
        let rg = critical_residual(&spec(2), &generic).unwrap();
        assert!(max_norm(&rg) > 0.1 && max_norm(&rg).is_finite());
        assert!(critical_residual(&spec(2), &[c(0.0, 0.0), c(1.0, 1.0), c(1.0, 1.0)]).is_err());
    }

    #[test]
    fn gradient_and_system_vanish_together_near_solution() {
        // both diagnostics agree about criticality at the solution and
        // at 20 nearby perturbations
        let sp = spec(2);
        let a = frozen_a2();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let check = |z: &Vec<Complex64>| {
            let g = grad_f(&sp, z).unwrap();
            let gmax = g.iter().map(|w| w.norm()).fold(0.0, f64::max);
            let rmax = max_norm(&critical_residual(&sp, z).unwrap());
            assert_eq!(gmax < 1e-8, rmax < 1e-8, "grad {gmax:e} vs residual {rmax:e}");
        };
        check(&a);
        for _ in 0..20 {
            let z: Vec<Complex64> = a
                .iter()
                .map(|w| w + c(rng.gen_range(-1e-4..1e-4), rng.gen_range(-1e-4..1e-4)))
                .collect();
            check(&z);
        }
    }

    #[test]
    fn spurious_system_solution_has_large_gradient() {
        // the exponentiated system is satisfied, the true gradient is not
        let sp = spec(2);
        let z = spurious_point();
        assert!(max_norm(&critical_residual(&sp, &z).unwrap()) < 1e-9);
        let g = grad_f(&sp, &z).unwrap();
        let gmax = g.iter().map(|w| w.norm()).fold(0.0, f64::max);
        assert!(gmax > 1.0, "expected O(2 pi) gradient, got {gmax:e}");
        assert_relative_eq!(
            potential_f(&sp, &z).unwrap().im,
            5.5821557611179,
            max_relative = 1e-10
        );
    }

    #[test]
    fn solver_recovers_frozen_points() {
        let cfg = SolverConfig::default();
        let s2 = solve_critical(&spec(2), &cfg).unwrap();
        assert!(s2.residual < 1e-12);
        assert_relative_eq!(s2.volume, 3.163963228883144, max_relative = 1e-10);
        for (got, want) in s2.a.iter().zip(frozen_a2()) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }
        // postconditions: re-fed residual, ray distance, margin
        assert!(max_norm(&critical_residual(&spec(2), &s2.a).unwrap()) < 1e-12);
        assert!(s2.a.iter().all(|w| ray_distance(*w) > 1e-6));
        assert!(s2.a.iter().all(|w| (w.re - 1.0).abs() > 1e-6));

        let s3 = solve_critical(&spec(3), &cfg).unwrap();
        assert!(s3.residual < 1e-12);
        assert_relative_eq!(s3.volume, 3.427205246274016, max_relative = 1e-10);
        for (got, want) in s3.a.iter().zip(frozen_a3()) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let cfg = SolverConfig::default();
        let a = solve_critical(&spec(2), &cfg).unwrap();
        let b = solve_critical(&spec(2), &cfg).unwrap();
        for (x, y) in a.a.iter().zip(&b.a) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(a.volume.to_bits(), b.volume.to_bits());
    }

    #[test]
    fn solver_failure_carries_best_residual() {
        let cfg = SolverConfig {
            starts: 2,
            max_iterations: 1,
            tolerance: 1e-12,
            seed: 7,
        };
        match solve_critical(&spec(2), &cfg) {
            Err(Error::SolverFailure {
                starts,
                best_residual,
            }) => {
                assert_eq!(starts, 2);
                assert!(best_residual.is_finite() && best_residual > 1e-12);
            }
            other => panic!("expected solver failure, got {other:?}"),
        }
    }

    #[test]
    fn lattice_value_at_origin() {
        // every Li2 argument is 1; the display sums to (2p-3) pi^2/6
        let idx = LatticeIndex::new(vec![0, 0, 0]).unwrap();
        let f = potential_f_lattice(&spec(2), &idx, 8);
        assert_relative_eq!(f.re, PI * PI / 6.0, max_relative = 1e-14);
        assert!(f.im.abs() < 1e-14);
        let idx5 = LatticeIndex::new(vec![0, 0, 0, 0, 0]).unwrap();
        let f5 = potential_f_lattice(&spec(3), &idx5, 8);
        assert_relative_eq!(f5.re, 3.0 * PI * PI / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn lattice_example_reduces_to_clausen_combination() {
        // p = 2, N = 6, n = (1, 2, 3): the Cl2(2 pi/3) terms cancel and
        // Cl2(pi) = 0, leaving 3 Cl2(pi/3)
        let idx = LatticeIndex::new(vec![1, 2, 3]).unwrap();
        let f = potential_f_lattice(&spec(2), &idx, 6);
        assert_relative_eq!(f.im, 3.0 * clausen(PI / 3.0), max_relative = 1e-13);
    }

    #[test]
    fn lattice_minus_circle_difference_is_closed_form() {
        // Im f_lattice - Im f(circle points) = -Cl2(t_1) - 2 Cl2(t_m)
        let n = 40u32;
        let sp = spec(2);
        for ns in [[1u32, 2, 3], [3, 9, 17], [5, 5, 21]] {
            let idx = LatticeIndex::new(ns.to_vec()).unwrap();
            let lat = potential_f_lattice(&sp, &idx, n).im;
            let z: Vec<Complex64> = ns
                .iter()
                .map(|&k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
                .collect();
            let circ = potential_f(&sp, &z).unwrap().im;
            let t1 = TAU * ns[0] as f64 / n as f64;
            let tm = TAU * ns[2] as f64 / n as f64;
            let predicted = -clausen(t1) - 2.0 * clausen(tm);
            assert_relative_eq!(lat - circ, predicted, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_maximum_frozen_values() {
        let budget = 1u128 << 31;
        let sp = spec(2);
        let (idx30, v30) = grid_max_im_f(&sp, 30, budget).unwrap();
        assert_eq!(idx30.indices(), &[8, 16, 24]);
        assert_relative_eq!(v30, 4.625782071224, max_relative = 1e-9);
        let (idx60, v60) = grid_max_im_f(&sp, 60, budget).unwrap();
        assert_eq!(idx60.indices(), &[16, 32, 48]);
        assert_relative_eq!(v60, 4.625782071224, max_relative = 1e-9);
        // the value depends only on the multiset {n1, n2-n1, n3-n2}, so
        // the three orderings of {31, 32, 32} tie exactly at N = 120
        let (idx120, v120) = grid_max_im_f(&sp, 120, budget).unwrap();
        let tied: [&[u32]; 3] = [&[31, 63, 95], &[32, 63, 95], &[32, 64, 95]];
        assert!(tied.contains(&idx120.indices()), "argmax {:?}", idx120.indices());
        assert_relative_eq!(v120, 4.627111812153, max_relative = 1e-9);
        // refinement is monotone along 30 -> 60 -> 120
        assert!(v60 >= v30 - 1e-9 && v120 >= v60 - 1e-9);
        // N = 2: all four lattice points evaluate to 0
        let (idx2, v2) = grid_max_im_f(&sp, 2, budget).unwrap();
        assert_eq!(idx2.indices(), &[0, 0, 0]);
        assert!(v2.abs() < 1e-15);
        // p = 3
        let (_, v3) = grid_max_im_f(&spec(3), 30, budget).unwrap();
        assert_relative_eq!(v3, 7.104591244868, max_relative = 1e-9);
    }

    #[test]
    fn grid_maximum_matches_direct_lattice_evaluation() {
        let sp = spec(2);
        let (idx, v) = grid_max_im_f(&sp, 24, 1 << 31).unwrap();
        let direct = potential_f_lattice(&sp, &idx, 24).im;
        assert_relative_eq!(v, direct, epsilon = 1e-12);
    }

    #[test]
    fn grid_budget_is_enforced() {
        match grid_max_im_f(&spec(3), 100, 1000) {
            Err(Error::Budget { estimate, budget }) => {
                assert_eq!(budget, 1000);
                assert!(estimate > 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
