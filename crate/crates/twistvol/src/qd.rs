//! Quad-double arithmetic: an unevaluated sum of four f64 limbs giving
//! roughly 212 bits (about 63 decimal digits) of working precision.
//!
//! The colored Jones sum cancels exponentially: the largest summand exceeds
//! the result by a factor that grows like exp(0.29 N), so past N of around
//! 100 plain f64 accumulation returns noise. This module supplies just
//! enough extended precision to push exact evaluation to the N of a few
//! hundred that the convergence experiments need, using the error-free
//! transformation algorithms of Hida, Li and Bailey (the classic QD
//! library). Products use Dekker splitting rather than fused multiply-add
//! so results are bit-identical across targets with and without FMA.
//!
//! Only the operations the summation kernel needs are implemented:
//! add/sub/mul/div, integer powers of unit-modulus complex values via
//! `sincos`, and conversions. This is not a general bignum facility.

/// Four-limb extended-precision value: `self.0` carries the leading bits,
/// each following limb refines the previous ones. Invariant (renormalized
/// form): `|limb[i+1]| <= ulp(limb[i]) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Qd(pub f64, pub f64, pub f64, pub f64);

/// Error-free sum assuming `|a| >= |b|`: returns `(s, e)` with `s + e = a + b` exactly.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free sum of two doubles: `s + e = a + b` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Dekker split of a double into high and low halves with 26/27 significant bits.
#[inline]
fn split(a: f64) -> (f64, f64) {
    // 2^27 + 1; valid for |a| < 2^996, far above anything the summation sees
    let t = 134217729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Error-free product: `p + e = a * b` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}

/// Three-way sum: returns `(s, e1, e2)` with `s + e1 + e2 = a + b + c`.
#[inline]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (s, t3) = two_sum(c, t1);
    let (e1, e2) = two_sum(t2, t3);
    (s, e1, e2)
}

/// Three-way sum keeping only one error limb.
#[inline]
fn three_sum2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (s, t3) = two_sum(c, t1);
    (s, t2 + t3)
}

/// Renormalize five limbs into canonical four-limb form.
fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> Qd {
    if !c0.is_finite() {
        return Qd(c0, 0.0, 0.0, 0.0);
    }
    let (s, c4) = quick_two_sum(c3, c4);
    let (s, c3) = quick_two_sum(c2, s);
    let (s, c2) = quick_two_sum(c1, s);
    let (c0, c1) = quick_two_sum(c0, s);

    let (s0, s1) = quick_two_sum(c0, c1);
    let (r0, r1, r2, r3);
    if s1 != 0.0 {
        let (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            let (s2, mut s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
                (r0, r1, r2, r3) = (s0, s1, s2, s3);
            } else {
                let (s2, s3) = quick_two_sum(s2, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, s3);
            }
        } else {
            let (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                let (s2, s3) = quick_two_sum(s2, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, s3);
            } else {
                let (s1, s2) = quick_two_sum(s1, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, 0.0);
            }
        }
    } else {
        let (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            let (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                let (s2, s3) = quick_two_sum(s2, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, s3);
            } else {
                let (s1, s2) = quick_two_sum(s1, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, 0.0);
            }
        } else {
            let (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                let (s1, s2) = quick_two_sum(s1, c4);
                (r0, r1, r2, r3) = (s0, s1, s2, 0.0);
            } else {
                let (s0, s1) = quick_two_sum(s0, c4);
                (r0, r1, r2, r3) = (s0, s1, 0.0, 0.0);
            }
        }
    }
    Qd(r0, r1, r2, r3)
}

/// Renormalize four limbs into canonical form.
fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> Qd {
    if !c0.is_finite() {
        return Qd(c0, 0.0, 0.0, 0.0);
    }
    let (s, c3) = quick_two_sum(c2, c3);
    let (s, c2) = quick_two_sum(c1, s);
    let (c0, c1) = quick_two_sum(c0, s);

    let (s0, s1) = quick_two_sum(c0, c1);
    let (r0, r1, r2, r3);
    if s1 != 0.0 {
        let (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            let (s2, s3) = quick_two_sum(s2, c3);
            (r0, r1, r2, r3) = (s0, s1, s2, s3);
        } else {
            let (s1, s2) = quick_two_sum(s1, c3);
            (r0, r1, r2, r3) = (s0, s1, s2, 0.0);
        }
    } else {
        let (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            let (s1, s2) = quick_two_sum(s1, c3);
            (r0, r1, r2, r3) = (s0, s1, s2, 0.0);
        } else {
            let (s0, s1) = quick_two_sum(s0, c3);
            (r0, r1, r2, r3) = (s0, s1, 0.0, 0.0);
        }
    }
    Qd(r0, r1, r2, r3)
}

impl Qd {
    pub const ZERO: Qd = Qd(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Qd = Qd(1.0, 0.0, 0.0, 0.0);
    /// pi to quad-double precision (leading limb is the f64 constant,
    /// the tail limbs carry the next 159 bits).
    pub const PI: Qd = Qd(
        std::f64::consts::PI,
        1.2246467991473532e-16,
        -2.9947698097183397e-33,
        1.1124542208633653e-49,
    );
    /// 2 pi to quad-double precision.
    pub const TWO_PI: Qd = Qd(
        std::f64::consts::TAU,
        2.4492935982947064e-16,
        -5.989539619436679e-33,
        2.2249084417267306e-49,
    );

    #[inline]
    pub fn from_f64(a: f64) -> Qd {
        Qd(a, 0.0, 0.0, 0.0)
    }

    /// Leading-limb approximation (correct to f64 precision).
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn neg(self) -> Qd {
        Qd(-self.0, -self.1, -self.2, -self.3)
    }

    pub fn add(self, b: Qd) -> Qd {
        let (s0, t0) = two_sum(self.0, b.0);
        let (s1, t1) = two_sum(self.1, b.1);
        let (s2, t2) = two_sum(self.2, b.2);
        let (s3, t3) = two_sum(self.3, b.3);
        let (s1, t0) = two_sum(s1, t0);
        let (s2, t0, t1) = three_sum(s2, t0, t1);
        let (s3, t0) = three_sum2(s3, t0, t2);
        let t0 = t0 + t1 + t3;
        renorm5(s0, s1, s2, s3, t0)
    }

    #[inline]
    pub fn sub(self, b: Qd) -> Qd {
        self.add(b.neg())
    }

    pub fn mul(self, b: Qd) -> Qd {
        let a = self;
        let (p0, q0) = two_prod(a.0, b.0);
        let (p1, q1) = two_prod(a.0, b.1);
        let (p2, q2) = two_prod(a.1, b.0);
        let (p3, q3) = two_prod(a.0, b.2);
        let (p4, q4) = two_prod(a.1, b.1);
        let (p5, q5) = two_prod(a.2, b.0);

        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        let s2 = s2 + (t0 + t1);
        let s1 = s1 + (a.0 * b.3 + a.1 * b.2 + a.2 * b.1 + a.3 * b.0 + q0 + q3 + q4 + q5);
        renorm5(p0, p1, s0, s1, s2)
    }

    pub fn mul_f64(self, b: f64) -> Qd {
        self.mul(Qd::from_f64(b))
    }

    /// Long division by repeated correction; the quotient limbs are exact
    /// f64 divisions of the running remainder.
    pub fn div(self, b: Qd) -> Qd {
        let q0 = self.0 / b.0;
        let mut r = self.sub(b.mul_f64(q0));
        let q1 = r.0 / b.0;
        r = r.sub(b.mul_f64(q1));
        let q2 = r.0 / b.0;
        r = r.sub(b.mul_f64(q2));
        let q3 = r.0 / b.0;
        renorm4(q0, q1, q2, q3)
    }

    #[inline]
    pub fn abs(self) -> Qd {
        if self.0 < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    /// Simultaneous sine and cosine, valid for 0 <= x <= 2 pi.
    ///
    /// The argument is halved until it is below 0.8, expanded by Taylor
    /// series (about 50 terms reach quad-double precision there), then the
    /// double-angle identities undo the halving. Used once per root of
    /// unity; everything else is repeated multiplication.
    pub fn sincos(self) -> (Qd, Qd) {
        let mut x = self;
        let mut halvings = 0u32;
        while x.0.abs() > 0.8 {
            x = x.mul_f64(0.5);
            halvings += 1;
        }
        let x2 = x.mul(x);
        // sin series
        let mut term = x;
        let mut s = x;
        let mut k = 1u64;
        loop {
            k += 2;
            term = term.mul(x2).div(Qd::from_f64((k * (k - 1)) as f64)).neg();
            s = s.add(term);
            if term.0.abs() < 1e-70 {
                break;
            }
        }
        // cos series
        let mut term = Qd::ONE;
        let mut c = Qd::ONE;
        let mut k = 0u64;
        loop {
            k += 2;
            term = term.mul(x2).div(Qd::from_f64((k * (k - 1)) as f64)).neg();
            c = c.add(term);
            if term.0.abs() < 1e-70 {
                break;
            }
        }
        for _ in 0..halvings {
            let s2 = s.mul(c).mul_f64(2.0);
            let c2 = c.mul(c).sub(s.mul(s));
            s = s2;
            c = c2;
        }
        (s, c)
    }
}

/// Complex number with quad-double components.
#[derive(Clone, Copy, Debug, Default)]
pub struct QdComplex {
    pub re: Qd,
    pub im: Qd,
}

impl QdComplex {
    pub const ZERO: QdComplex = QdComplex {
        re: Qd::ZERO,
        im: Qd::ZERO,
    };
    pub const ONE: QdComplex = QdComplex {
        re: Qd::ONE,
        im: Qd::ZERO,
    };

    #[inline]
    pub fn new(re: Qd, im: Qd) -> QdComplex {
        QdComplex { re, im }
    }

    #[inline]
    pub fn add(self, b: QdComplex) -> QdComplex {
        QdComplex::new(self.re.add(b.re), self.im.add(b.im))
    }

    #[inline]
    pub fn sub(self, b: QdComplex) -> QdComplex {
        QdComplex::new(self.re.sub(b.re), self.im.sub(b.im))
    }

    #[inline]
    pub fn neg(self) -> QdComplex {
        QdComplex::new(self.re.neg(), self.im.neg())
    }

    /// Multiply both components by an f64 scalar.
    #[inline]
    pub fn scale(self, s: f64) -> QdComplex {
        QdComplex::new(self.re.mul_f64(s), self.im.mul_f64(s))
    }

    #[inline]
    pub fn mul(self, b: QdComplex) -> QdComplex {
        QdComplex::new(
            self.re.mul(b.re).sub(self.im.mul(b.im)),
            self.re.mul(b.im).add(self.im.mul(b.re)),
        )
    }

    /// 1 / self via the conjugate over the squared modulus.
    pub fn recip(self) -> QdComplex {
        let n = self.re.mul(self.re).add(self.im.mul(self.im));
        QdComplex::new(self.re.div(n), self.im.neg().div(n))
    }

    /// Squared modulus as f64 (used only for final magnitudes and logs).
    #[inline]
    pub fn norm_sqr_f64(self) -> f64 {
        let n = self.re.mul(self.re).add(self.im.mul(self.im));
        n.to_f64()
    }
}
