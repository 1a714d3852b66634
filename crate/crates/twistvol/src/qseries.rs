//! q-Pochhammer symbols and Gaussian q-binomial coefficients at roots of
//! unity.
//!
//! Everything here is built from the primitive phase q = exp(2 pi i / N).
//! The q-Pochhammer symbol is the finite product
//!
//! ```text
//! (x)_n = prod_{k=0}^{n-1} (1 - x q^k),
//! ```
//!
//! with (q)_n the x = q case, and the Gaussian binomial is the ratio
//! (q)_top / ((q)_{top-bot} (q)_bot). At a root of unity some factors
//! vanish exactly (1 - q^N = 0), so zeros are detected by index
//! arithmetic, never by comparing a rounded product against zero. Values
//! move through [`LogComplex`] (log-magnitude plus phase) so that products
//! of hundreds of factors of magnitude up to 2 neither overflow nor lose
//! their scale.

use crate::error::{Error, Result};
use crate::qd::{Qd, QdComplex};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// The modulus N and primitive phase angle 2 pi / N. The root q itself is
/// always derived from the angle on demand, so powers of q are computed
/// from exact index arithmetic rather than repeated rounded multiplication.
#[derive(Clone, Copy, Debug)]
pub struct RootOfUnity {
    modulus: u32,
    phase_angle: f64,
}

impl RootOfUnity {
    pub fn new(modulus: u32) -> Result<RootOfUnity> {
        if modulus == 0 {
            return Err(Error::Domain("modulus N must be at least 1".into()));
        }
        Ok(RootOfUnity {
            modulus,
            phase_angle: TAU / modulus as f64,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The phase angle 2 pi / N in radians.
    #[inline]
    pub fn phase_angle(&self) -> f64 {
        self.phase_angle
    }

    /// q = exp(2 pi i / N).
    #[inline]
    pub fn q(&self) -> Complex64 {
        self.power(1)
    }

    /// q^k for any integer k, reduced mod N before evaluation; q^0 is
    /// exactly 1 and every power has unit modulus by construction.
    #[inline]
    pub fn power(&self, k: i64) -> Complex64 {
        let j = k.rem_euclid(self.modulus as i64);
        if j == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, TAU * (j as f64 / self.modulus as f64))
    }

    /// Angle of q^k as a value in [0, 2 pi).
    #[inline]
    pub fn angle(&self, k: i64) -> f64 {
        let j = k.rem_euclid(self.modulus as i64);
        TAU * (j as f64 / self.modulus as f64)
    }
}

/// Wrap an angle into (-pi, pi].
#[inline]
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// A complex value stored as (natural log of magnitude, phase), the only
/// representation that survives products of exponentially large or small
/// factors. An exact zero carries `log_mag = -inf`.
#[derive(Clone, Copy, Debug)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn from_complex(z: Complex64) -> LogComplex {
        if z.re == 0.0 && z.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex {
            log_mag: z.norm().ln(),
            phase: z.arg(),
        }
    }

    /// Build from polar data, normalizing the phase.
    pub fn new(log_mag: f64, phase: f64) -> LogComplex {
        if log_mag == f64::NEG_INFINITY {
            return LogComplex::ZERO;
        }
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + other.log_mag, self.phase + other.phase)
    }

    /// Division; dividing by an exact zero is a caller bug and panics.
    pub fn div(self, other: LogComplex) -> LogComplex {
        assert!(!other.is_zero(), "LogComplex division by exact zero");
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag - other.log_mag, self.phase - other.phase)
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }
}

/// q-Pochhammer symbol (x)_n for x on the unit circle.
///
/// If x coincides with a power q^j (within 4 ulp), the factor indices are
/// analysed exactly: the product contains the factor 1 - q^0 = 0 precisely
/// when some k < n has j + k divisible by N, and in that case the result
/// is an exact structural zero. Otherwise the product is accumulated in
/// log form factor by factor.
pub fn q_pochhammer(ru: &RootOfUnity, x: Complex64, n: u32) -> LogComplex {
    let nn = ru.modulus() as i64;
    // nearest aligned index to arg(x)
    let j = (x.arg() / ru.phase_angle()).round() as i64;
    let aligned = (x - ru.power(j)).norm() <= 4.0 * f64::EPSILON;
    if aligned {
        let j = j.rem_euclid(nn);
        // first k >= 0 with j + k divisible by N
        let k0 = (nn - j) % nn;
        if (n as i64) > k0 {
            return LogComplex::ZERO;
        }
        let mut acc = LogComplex::ONE;
        for k in 0..n as i64 {
            let f = Complex64::new(1.0, 0.0) - ru.power(j + k);
            acc = acc.mul(LogComplex::from_complex(f));
        }
        return acc;
    }
    let mut acc = LogComplex::ONE;
    for k in 0..n as i64 {
        let f = Complex64::new(1.0, 0.0) - x * ru.power(k);
        acc = acc.mul(LogComplex::from_complex(f));
    }
    acc
}

/// Gaussian binomial coefficient bracket(top, bot) at the root of unity,
/// total over all nonnegative arguments.
///
/// Returns exact zero for bot > top. For arguments at or above N the
/// numerator and denominator Pochhammers may individually vanish; the
/// vanishing factors (those with index divisible by N) are counted and
/// cancelled structurally, using the identity that the product of the
/// remaining factors over a full period equals N.
pub fn q_binomial(ru: &RootOfUnity, top: u32, bot: u32) -> LogComplex {
    if bot > top {
        return LogComplex::ZERO;
    }
    let table = QTable::new(ru.modulus()).expect("modulus already validated");
    table.bracket_log_total(top, bot)
}

/// The magnitude bound 2^top, valid for every bracket(top, bot).
pub fn q_binomial_magnitude_bound(_ru: &RootOfUnity, top: u32) -> f64 {
    2f64.powi(top as i32)
}

/// Shared per-N tables of q-powers and Pochhammer prefixes in f64, giving
/// O(1) brackets after an O(N) build. The summation over the index lattice
/// touches on the order of N^(2p-1) brackets, so these are built once and
/// shared across threads read-only.
pub struct QTable {
    pub ru: RootOfUnity,
    /// q^k for k in 0..N
    pub q_pow: Vec<Complex64>,
    /// (q)_n for n in 0..N (rectangular; magnitudes stay in f64 range)
    pub poch: Vec<Complex64>,
    /// log |(q)_n| for n in 0..N
    pub log_poch: Vec<f64>,
    /// phase of (q)_n, wrapped
    pub phase_poch: Vec<f64>,
}

impl QTable {
    pub fn new(modulus: u32) -> Result<QTable> {
        let ru = RootOfUnity::new(modulus)?;
        let n = modulus as usize;
        let mut q_pow = Vec::with_capacity(n);
        for k in 0..n {
            q_pow.push(ru.power(k as i64));
        }
        let mut poch = Vec::with_capacity(n);
        let mut log_poch = Vec::with_capacity(n);
        let mut phase_poch = Vec::with_capacity(n);
        poch.push(Complex64::new(1.0, 0.0));
        log_poch.push(0.0);
        phase_poch.push(0.0);
        let mut acc = Complex64::new(1.0, 0.0);
        let mut lacc = LogComplex::ONE;
        for k in 1..n {
            let f = Complex64::new(1.0, 0.0) - q_pow[k];
            acc *= f;
            lacc = lacc.mul(LogComplex::from_complex(f));
            poch.push(acc);
            log_poch.push(lacc.log_mag);
            phase_poch.push(lacc.phase);
        }
        Ok(QTable {
            ru,
            q_pow,
            poch,
            log_poch,
            phase_poch,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.ru.modulus()
    }

    /// (q)_n as a LogComplex, n < N.
    #[inline]
    pub fn poch_log(&self, n: u32) -> LogComplex {
        LogComplex {
            log_mag: self.log_poch[n as usize],
            phase: self.phase_poch[n as usize],
        }
    }

    /// bracket(top, bot) for 0 <= bot <= top <= N-1 (all finite here).
    #[inline]
    pub fn bracket_log(&self, top: u32, bot: u32) -> LogComplex {
        self.poch_log(top)
            .div(self.poch_log(top - bot))
            .div(self.poch_log(bot))
    }

    /// bracket(top, bot) with no restriction on the arguments: counts and
    /// cancels vanishing factors when indices reach N.
    pub fn bracket_log_total(&self, top: u32, bot: u32) -> LogComplex {
        if bot > top {
            return LogComplex::ZERO;
        }
        let n = self.modulus();
        if top < n {
            return self.bracket_log(top, bot);
        }
        // (q)_m has floor(m/N) vanishing factors; the product of the
        // non-vanishing factors over each full period is exactly N, and the
        // leftover partial period is (q)_{m mod N}. When the vanishing
        // factors cancel in number, their ratio still contributes the
        // ordinary binomial C(top/N, bot/N) of the period counts (each
        // vanishing factor behaves like its derivative at the root), which
        // reproduces the value of the Gaussian polynomial at q.
        let zeros = |m: u32| (m / n) as i64;
        let excess = zeros(top) - zeros(top - bot) - zeros(bot);
        debug_assert!(excess >= 0, "bracket can never be infinite");
        if excess > 0 {
            return LogComplex::ZERO;
        }
        let mut lucas = 1.0_f64;
        for j in 1..=zeros(bot) {
            lucas *= (zeros(top) - zeros(bot) + j) as f64 / j as f64;
        }
        let reduced = |m: u32| -> LogComplex {
            let cycles = (m / n) as f64;
            let rest = self.poch_log(m % n);
            LogComplex::new(cycles * (n as f64).ln() + rest.log_mag, rest.phase)
        };
        let cancelled = reduced(top).div(reduced(top - bot)).div(reduced(bot));
        LogComplex::new(cancelled.log_mag + lucas.ln(), cancelled.phase)
    }
}

/// The same prefix tables in quad-double precision, for the summation
/// escalation path. Powers of q are the cumulative products of a single
/// high-precision sin/cos evaluation of 2 pi / N; the accumulated error
/// after N steps stays near 2^-208, far below what the cancellation in the
/// main sum can expose.
pub struct QTableQd {
    /// q^k for k in 0..N
    pub q_pow: Vec<QdComplex>,
    /// (q)_n for n in 0..N
    pub poch: Vec<QdComplex>,
    /// 1 / (q)_n for n in 0..N
    pub inv_poch: Vec<QdComplex>,
}

impl QTableQd {
    pub fn new(modulus: u32) -> QTableQd {
        let n = modulus as usize;
        let theta = Qd::TWO_PI.div(Qd::from_f64(modulus as f64));
        let (s, c) = theta.sincos();
        let q = QdComplex::new(c, s);
        let mut q_pow = Vec::with_capacity(n);
        q_pow.push(QdComplex::ONE);
        for k in 1..n {
            q_pow.push(q_pow[k - 1].mul(q));
        }
        let mut poch = Vec::with_capacity(n);
        poch.push(QdComplex::ONE);
        for k in 1..n {
            let f = QdComplex::ONE.sub(q_pow[k]);
            poch.push(poch[k - 1].mul(f));
        }
        let inv_poch = poch.iter().map(|z| z.recip()).collect();
        QTableQd {
            q_pow,
            poch,
            inv_poch,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_product_is_one() {
        for n in [1u32, 2, 7, 60] {
            let ru = RootOfUnity::new(n).unwrap();
            let v = q_pochhammer(&ru, ru.q(), 0).to_complex();
            assert_eq!(v, c(1.0, 0.0));
        }
    }

    #[test]
    fn poch_three_at_n_four_is_four() {
        // (1-i)(1-(-1))(1-(-i)) = 4 at q = i
        let ru = RootOfUnity::new(4).unwrap();
        let v = q_pochhammer(&ru, ru.q(), 3).to_complex();
        assert_relative_eq!(v.re, 4.0, max_relative = 1e-13);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn poch_full_period_is_structural_zero() {
        for n in [2u32, 3, 4, 7, 31] {
            let ru = RootOfUnity::new(n).unwrap();
            let v = q_pochhammer(&ru, ru.q(), n);
            assert!(v.is_zero(), "(q)_N must vanish exactly at N={}", n);
            assert!(q_pochhammer(&ru, ru.q(), n + 5).is_zero());
        }
    }

    #[test]
    fn structural_zero_from_shifted_argument() {
        // x = q^5 at N = 12: factor 1 - q^{5+k} vanishes first at k = 7
        let ru = RootOfUnity::new(12).unwrap();
        let x = ru.power(5);
        assert!(!q_pochhammer(&ru, x, 7).is_zero());
        assert!(q_pochhammer(&ru, x, 8).is_zero());
    }

    #[test]
    fn unaligned_argument_never_vanishes() {
        let ru = RootOfUnity::new(8).unwrap();
        let x = Complex64::from_polar(1.0, 0.37);
        for n in 0..=8 {
            assert!(!q_pochhammer(&ru, x, n).is_zero());
        }
    }

    #[test]
    fn power_table_is_exact_at_the_wrap() {
        for n in [1u32, 2, 5, 512] {
            let ru = RootOfUnity::new(n).unwrap();
            assert_eq!(ru.power(0), c(1.0, 0.0));
            assert_eq!(ru.power(n as i64), c(1.0, 0.0));
            for k in 0..n as i64 {
                assert!((ru.power(k).norm() - 1.0).abs() <= 2.0 * f64::EPSILON);
            }
        }
    }

    #[test]
    fn frozen_poch_magnitude() {
        // log|(q)_20| at N = 60, reference from 50-digit arithmetic
        let t = QTable::new(60).unwrap();
        assert_relative_eq!(t.log_poch[20], -4.13697473204000942781, max_relative = 1e-13);
    }

    #[test]
    fn bracket_trivial_edges() {
        let ru = RootOfUnity::new(11).unwrap();
        for n in 0..=10u32 {
            let a = q_binomial(&ru, n, 0).to_complex();
            let b = q_binomial(&ru, n, n).to_complex();
            assert_relative_eq!(a.re, 1.0, max_relative = 1e-13);
            assert!(a.im.abs() < 1e-13);
            assert_relative_eq!(b.re, 1.0, max_relative = 1e-13);
            assert!(b.im.abs() < 1e-13);
        }
        assert!(q_binomial(&ru, 3, 5).is_zero());
    }

    #[test]
    fn bracket_small_values() {
        // [2;1] at N = 4 equals 1 + q = 1 + i
        let ru = RootOfUnity::new(4).unwrap();
        let v = q_binomial(&ru, 2, 1).to_complex();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-13);
        assert_relative_eq!(v.im, 1.0, epsilon = 1e-13);
        // [3;1] at N = 2 (q = -1) equals 1 + q + q^2 = 1; numerator and
        // denominator each contain one vanishing factor
        let ru2 = RootOfUnity::new(2).unwrap();
        let w = q_binomial(&ru2, 3, 1).to_complex();
        assert_relative_eq!(w.re, 1.0, epsilon = 1e-12);
        assert!(w.im.abs() < 1e-12);
    }

    #[test]
    fn bracket_above_modulus_vanishes_when_uncancelled() {
        // [4;1] at N = 4: numerator (q)_4 = 0, denominator finite
        let ru = RootOfUnity::new(4).unwrap();
        assert!(q_binomial(&ru, 4, 1).is_zero());
        // [4;0] = 1: the zero cancels structurally
        let v = q_binomial(&ru, 4, 0).to_complex();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bracket_symmetry() {
        for n in [5u32, 8, 12] {
            let ru = RootOfUnity::new(n).unwrap();
            for m in 0..n {
                for k in 0..=m {
                    let a = q_binomial(&ru, m, k).to_complex();
                    let b = q_binomial(&ru, m, m - k).to_complex();
                    assert!((a - b).norm() < 1e-12, "symmetry broke at N={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn bracket_pascal_recurrence() {
        // bracket(m, k) = bracket(m-1, k-1) + q^k bracket(m-1, k)
        for n in [4u32, 7, 13] {
            let t = QTable::new(n).unwrap();
            for m in 1..n {
                for k in 1..=m {
                    let lhs = t.bracket_log(m, k).to_complex();
                    let a = t.bracket_log(m - 1, k - 1).to_complex();
                    let b = if k < m {
                        t.bracket_log(m - 1, k).to_complex()
                    } else {
                        c(0.0, 0.0)
                    };
                    let rhs = a + t.q_pow[k as usize] * b;
                    assert!((lhs - rhs).norm() < 1e-12, "recurrence broke N={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn subset_sum_identity() {
        // bracket(m, k) = sum over k-element subsets I of {1..m} of
        // q^{s_I - k(k+1)/2}. Verified for all k <= m <= 10, N <= 12;
        // the identity holds including the structural zeros at m >= N.
        for n in 2u32..=12 {
            let ru = RootOfUnity::new(n).unwrap();
            for m in 0u32..=10 {
                for k in 0..=m {
                    let bracket = q_binomial(&ru, m, k).to_complex();
                    let mut sum = c(0.0, 0.0);
                    // enumerate subsets of {1..m} by bitmask
                    for mask in 0u32..(1 << m) {
                        if mask.count_ones() != k {
                            continue;
                        }
                        let mut s: i64 = 0;
                        for bit in 0..m {
                            if mask >> bit & 1 == 1 {
                                s += bit as i64 + 1;
                            }
                        }
                        sum += ru.power(s - (k as i64 * (k as i64 + 1)) / 2);
                    }
                    assert!(
                        (bracket - sum).norm() < 1e-10,
                        "subset identity broke at N={n} m={m} k={k}: {bracket} vs {sum}"
                    );
                }
            }
        }
    }

    #[test]
    fn poch_magnitude_bounds() {
        // each factor has magnitude at most 2, so |(q)_n| <= 2^n; and the
        // all-factor product has magnitude exactly N
        for n in 2u32..=64 {
            let t = QTable::new(n).unwrap();
            for (m, &lp) in t.log_poch.iter().enumerate() {
                assert!(lp <= m as f64 * 2f64.ln() + 1e-12);
            }
            let full: f64 = t.log_poch[(n - 1) as usize];
            assert_relative_eq!(full.exp(), n as f64, max_relative = 1e-11);
        }
    }

    #[test]
    fn full_cycle_magnitude_matches_modulus_up_to_512() {
        for n in [2u32, 3, 16, 100, 257, 511, 512] {
            let t = QTable::new(n).unwrap();
            let m = t.log_poch[(n - 1) as usize].exp();
            assert!(
                (m - n as f64).abs() < 1e-9,
                "|(q)_(N-1)| = {m} != N = {n}"
            );
        }
    }

    #[test]
    fn magnitude_bound_dominates_brackets() {
        let ru = RootOfUnity::new(7).unwrap();
        for top in 0..=6u32 {
            let bound = q_binomial_magnitude_bound(&ru, top);
            for bot in 0..=top {
                let v = q_binomial(&ru, top, bot);
                assert!(
                    v.log_mag.exp() <= bound + 1e-12,
                    "bound 2^{top} violated at [{top};{bot}]"
                );
            }
        }
        assert_eq!(q_binomial_magnitude_bound(&ru, 0), 1.0);
        assert_eq!(q_binomial_magnitude_bound(&ru, 6), 64.0);
    }

    #[test]
    fn log_complex_phase_stays_normalized() {
        let mut x = 0.8234_f64;
        let mut acc = LogComplex::ONE;
        for _ in 0..1000 {
            x = (x * 887.0 + 0.113).fract();
            acc = acc.mul(LogComplex::new(0.0, 6.0 * x - 3.0));
            assert!(acc.phase > -PI && acc.phase <= PI);
        }
        let z = LogComplex::new(0.0, PI); // phase pi maps to itself
        assert_eq!(z.phase, PI);
        let w = LogComplex::new(0.0, -PI); // -pi wraps to +pi
        assert_eq!(w.phase, PI);
    }

    #[test]
    fn qd_tables_agree_with_f64_tables() {
        for n in [7u32, 60] {
            let t = QTable::new(n).unwrap();
            let tq = QTableQd::new(n);
            for k in 0..n as usize {
                let d = (t.poch[k] - Complex64::new(tq.poch[k].re.to_f64(), tq.poch[k].im.to_f64())).norm();
                let scale = t.poch[k].norm().max(1.0);
                assert!(d / scale < 1e-13, "poch mismatch N={n} k={k}");
                let unit = tq.q_pow[k].mul(tq.inv_poch[k]).mul(tq.poch[k]);
                let back = Complex64::new(unit.re.to_f64(), unit.im.to_f64());
                assert!((back - t.q_pow[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qd_poch_frozen_magnitude() {
        let tq = QTableQd::new(60);
        let z = tq.poch[20];
        let mag2 = z.re.mul(z.re).add(z.im.mul(z.im)).to_f64();
        assert_relative_eq!(0.5 * mag2.ln(), -4.13697473204000942781, max_relative = 1e-15);
    }
}
