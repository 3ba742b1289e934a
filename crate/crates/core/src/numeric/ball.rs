use num_rational::BigRational;
use num_traits::Signed;

use super::bigfloat::{BigFloat, Round};
use super::complex::BigComplex;
use super::gauss::GaussianRational;
use super::ring::{Field, Ring};

const RAD_BITS: u32 = 32;

/// Complex interval: a dyadic midpoint and a radius such that the true
/// value lies in the closed disk `|z − mid| ≤ rad`. Rounding errors of the
/// midpoint are computed exactly and folded into the radius.
#[derive(Clone, Debug)]
pub struct Ball {
    pub re: BigFloat,
    pub im: BigFloat,
    pub rad: BigFloat,
    pub prec: u32,
}

fn up(x: BigFloat) -> BigFloat {
    x.round(RAD_BITS, Round::Up)
}

impl Ball {
    pub fn exact(re: BigFloat, im: BigFloat) -> Self {
        Ball { re, im, rad: BigFloat::zero(), prec: 0 }
    }

    pub fn real(x: BigFloat) -> Self {
        Self::exact(x, BigFloat::zero())
    }

    pub fn from_gauss(z: &GaussianRational, prec: u32) -> Self {
        let re = BigFloat::from_rational(&z.re, prec, Round::Nearest);
        let im = BigFloat::from_rational(&z.im, prec, Round::Nearest);
        let er = (re.to_rational() - &z.re).abs();
        let ei = (im.to_rational() - &z.im).abs();
        let e = BigFloat::from_rational(&(er + ei), RAD_BITS, Round::Up);
        Ball { re, im, rad: e, prec }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        Self::from_gauss(&GaussianRational::real(x.clone()), prec)
    }

    pub fn with_rad(mut self, extra: &BigFloat) -> Self {
        self.rad = up(self.rad.add(&extra.abs()));
        self
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.tidy(self.re.clone(), self.im.clone(), self.rad.clone())
    }

    /// Rounds the midpoint to the working precision and widens the radius
    /// by the exact rounding error.
    fn tidy(&self, re: BigFloat, im: BigFloat, rad: BigFloat) -> Self {
        if self.prec == 0 {
            return Ball { re, im, rad: up(rad), prec: 0 };
        }
        let rr = re.round(self.prec, Round::Nearest);
        let ri = im.round(self.prec, Round::Nearest);
        let err = rr.sub(&re).abs().add(&ri.sub(&im).abs());
        Ball { re: rr, im: ri, rad: up(rad.add(&err)), prec: self.prec }
    }

    fn p2(&self, o: &Self) -> Self {
        Ball { re: BigFloat::zero(), im: BigFloat::zero(), rad: BigFloat::zero(), prec: self.prec.max(o.prec) }
    }

    pub fn mid(&self) -> BigComplex {
        BigComplex { re: self.re.clone(), im: self.im.clone(), prec: self.prec }
    }

    pub fn mid_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_up(&self) -> BigFloat {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        n.sqrt(RAD_BITS + 8, Round::Up)
    }

    /// Lower bound on `|mid|`.
    pub fn mid_abs_down(&self) -> BigFloat {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        n.sqrt(RAD_BITS + 8, Round::Down)
    }

    /// Certified upper bound on `|z|` over the ball.
    pub fn abs_upper(&self) -> BigFloat {
        up(self.mid_abs_up().add(&self.rad))
    }

    /// Certified lower bound on `|z|` over the ball (may be ≤ 0).
    pub fn abs_lower(&self) -> BigFloat {
        self.mid_abs_down().sub(&self.rad).round(RAD_BITS, Round::Down)
    }

    /// True when every point of the ball has modulus strictly above `k ≥ 0`:
    /// decided exactly as `|mid|² > (k + rad)²` with `|mid| > k + rad`.
    pub fn abs_gt(&self, k: &BigFloat) -> bool {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let t = k.add(&self.rad);
        n > t.mul(&t)
    }

    /// True when every point of the ball has modulus strictly below `k`.
    pub fn abs_lt(&self, k: &BigFloat) -> bool {
        let t = k.sub(&self.rad);
        if t.is_negative() || t.is_zero() {
            return false;
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        n < t.mul(&t)
    }

    pub fn contains_zero(&self) -> bool {
        !self.abs_gt(&BigFloat::zero())
    }

    /// Whether the imaginary part is certainly nonzero.
    pub fn im_nonzero(&self) -> bool {
        self.im.abs() > self.rad
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        let d = Ring::sub(&self.to_exact_mid(), z);
        let r = self.rad.to_rational();
        d.norm_sq() <= &r * &r
    }

    fn to_exact_mid(&self) -> GaussianRational {
        GaussianRational::new(self.re.to_rational(), self.im.to_rational())
    }

    pub fn conj(&self) -> Self {
        Ball { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    /// Square root of a ball around a positive real.
    pub fn sqrt_real(&self) -> Option<Self> {
        let prec = self.prec.max(64);
        let lo = self.re.sub(&self.rad).sub(&self.im.abs());
        if lo.is_negative() || lo.is_zero() {
            return None;
        }
        let s = self.re.sqrt(prec, Round::Nearest);
        // |√x − s| ≤ |x − s²| / (√lo + s)
        let resid = s.mul(&s).sub(&self.re).abs().add(&self.rad).add(&self.im.abs());
        let den = lo.sqrt(RAD_BITS + 8, Round::Down).add(&s);
        let r = resid.div(&den, RAD_BITS + 8, Round::Up);
        Some(Ball { re: s, im: BigFloat::zero(), rad: up(r), prec })
    }
}

impl Ring for Ball {
    fn nil() -> Self {
        Ball::exact(BigFloat::zero(), BigFloat::zero())
    }
    fn ident() -> Self {
        Ball::exact(BigFloat::from_i64(1), BigFloat::zero())
    }
    fn is_nil(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.p2(o).tidy(self.re.add(&o.re), self.im.add(&o.im), self.rad.add(&o.rad))
    }
    fn sub(&self, o: &Self) -> Self {
        self.p2(o).tidy(self.re.sub(&o.re), self.im.sub(&o.im), self.rad.add(&o.rad))
    }
    fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            BigFloat::zero()
        } else {
            self.mid_abs_up()
                .mul(&o.rad)
                .add(&o.mid_abs_up().mul(&self.rad))
                .add(&self.rad.mul(&o.rad))
        };
        self.p2(o).tidy(re, im, rad)
    }
    fn from_i64(n: i64) -> Self {
        Ball::exact(BigFloat::from_i64(n), BigFloat::zero())
    }
}

impl Field for Ball {
    /// `None` when the ball may contain zero.
    fn inv(&self) -> Option<Self> {
        let lo = self.abs_lower();
        if lo.is_negative() || lo.is_zero() {
            return None;
        }
        let prec = self.prec.max(64);
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        // midpoint of 1/m computed by rounded division; error bounded below
        let qr = self.re.div(&n, prec, Round::Nearest);
        let qi = self.im.neg().div(&n, prec, Round::Nearest);
        let exact = GaussianRational::new(self.re.to_rational(), self.im.to_rational())
            .inv()
            .expect("nonzero midpoint");
        let er = (qr.to_rational() - &exact.re).abs() + (qi.to_rational() - &exact.im).abs();
        let round_err = BigFloat::from_rational(&er, RAD_BITS, Round::Up);
        // |1/(m+δ) − 1/m| ≤ rad / (|m| (|m| − rad))
        let m_lo = self.mid_abs_down();
        let prop = if self.rad.is_zero() {
            BigFloat::zero()
        } else {
            self.rad.div(&m_lo.mul(&lo), RAD_BITS + 8, Round::Up)
        };
        Some(Ball { re: qr, im: qi, rad: up(prop.add(&round_err)), prec: self.prec })
    }
}

/// `atan(1/n)` for an integer `n ≥ 2` as a real ball.
fn atan_inv(n: i64, prec: u32) -> Ball {
    let n2 = BigRational::from_integer((n * n).into());
    let mut pw = BigRational::new(1.into(), n.into());
    let mut sum = Ball::nil().with_prec(prec + 16);
    let eps = BigRational::new(1.into(), num_bigint::BigInt::from(1) << (prec as usize + 8));
    let mut k: i64 = 0;
    loop {
        let term = &pw / BigRational::from_integer((2 * k + 1).into());
        if term < eps {
            // alternating series: remainder below the first omitted term
            return sum.with_rad(&BigFloat::from_rational(&term, RAD_BITS, Round::Up));
        }
        let t = Ball::from_rational(&term, prec + 16);
        sum = if k % 2 == 0 { sum.add(&t) } else { sum.sub(&t) };
        pw /= &n2;
        k += 1;
    }
}

/// π as a real ball of radius about `2^−prec`.
pub fn pi(prec: u32) -> Ball {
    let a = atan_inv(5, prec).mul(&Ball::from_i64(16));
    let b = atan_inv(239, prec).mul(&Ball::from_i64(4));
    a.sub(&b).with_prec(prec)
}

fn cos_sin_small(x: &BigFloat, prec: u32) -> (Ball, Ball) {
    // |x| ≤ 1/2: plain Taylor series with a termwise remainder bound
    let wp = prec + 32;
    let xb = Ball::real(x.clone()).with_prec(wp);
    let x2 = xb.mul(&xb);
    let mut c = Ball::ident().with_prec(wp);
    let mut s = xb.clone();
    let mut term_c = Ball::ident().with_prec(wp);
    let mut term_s = xb.clone();
    let mut k: i64 = 1;
    let tol = BigFloat::pow2(-(wp as i64) - 4);
    loop {
        term_c = term_c.mul(&x2).neg().mul(&Ball::from_rational(
            &BigRational::new(1.into(), ((2 * k - 1) * (2 * k)).into()),
            wp,
        ));
        term_s = term_s.mul(&x2).neg().mul(&Ball::from_rational(
            &BigRational::new(1.into(), ((2 * k) * (2 * k + 1)).into()),
            wp,
        ));
        c = c.add(&term_c);
        s = s.add(&term_s);
        k += 1;
        if term_c.abs_upper() < tol && term_s.abs_upper() < tol {
            // the next terms are smaller still; bound the tails by them
            let tail = term_c.abs_upper().add(&term_s.abs_upper());
            return (c.with_rad(&tail), s.with_rad(&tail));
        }
    }
}

/// `(cos θ, sin θ)` for a real ball θ with `|θ| ≤ 8`.
pub fn cos_sin(theta: &Ball, prec: u32) -> (Ball, Ball) {
    let mut x = theta.re.clone();
    let mut halvings = 0;
    while x.abs() > BigFloat::pow2(-1) {
        x = x.mul_pow2(-1);
        halvings += 1;
    }
    let (mut c, mut s) = cos_sin_small(&x, prec + 2 * halvings);
    for _ in 0..halvings {
        let c2 = c.mul(&c).mul(&Ball::from_i64(2)).sub(&Ball::ident());
        let s2 = s.mul(&c).mul(&Ball::from_i64(2));
        c = c2;
        s = s2;
    }
    // both functions are 1-Lipschitz
    let r = theta.rad.add(&theta.im.abs());
    (c.with_rad(&r).with_prec(prec), s.with_rad(&r).with_prec(prec))
}

/// `e^{2πi/k}` as a complex ball.
pub fn root_of_unity(k: u32, prec: u32) -> Ball {
    let theta = pi(prec + 8)
        .mul(&Ball::from_i64(2))
        .mul(&Ball::from_rational(&BigRational::new(1.into(), (k as i64).into()), prec + 8));
    let (c, s) = cos_sin(&theta, prec);
    Ball {
        re: c.re,
        im: s.re,
        rad: up(c.rad.add(&s.rad)),
        prec,
    }
}
