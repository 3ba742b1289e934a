use std::fmt;

use num_complex::Complex64;

use super::bigfloat::{BigFloat, Round};
use super::gauss::GaussianRational;
use super::ring::{Field, Ring};

/// Floating complex number carrying its working precision. Every operation
/// rounds to nearest at the larger operand precision; precision 0 marks an
/// exact constant that adopts the precision of whatever it meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: u32,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: u32) -> Self {
        BigComplex { re, im, prec }.rounded()
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(z.re), BigFloat::from_f64(z.im), prec)
    }

    pub fn from_gauss(z: &GaussianRational, prec: u32) -> Self {
        BigComplex {
            re: BigFloat::from_rational(&z.re, prec, Round::Nearest),
            im: BigFloat::from_rational(&z.im, prec, Round::Nearest),
            prec,
        }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.clone(), prec }.rounded()
    }

    fn rounded(self) -> Self {
        if self.prec == 0 {
            return self;
        }
        BigComplex {
            re: self.re.round(self.prec, Round::Nearest),
            im: self.im.round(self.prec, Round::Nearest),
            prec: self.prec,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Exact value of the stored dyadic coordinates.
    pub fn to_gauss(&self) -> GaussianRational {
        GaussianRational::new(self.re.to_rational(), self.im.to_rational())
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg(), prec: self.prec }
    }

    /// `|z|²` rounded up.
    pub fn norm_sq_up(&self) -> BigFloat {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        n.round(self.prec.max(64), Round::Up)
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    fn p2(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }
}

impl Ring for BigComplex {
    fn nil() -> Self {
        BigComplex { re: BigFloat::zero(), im: BigFloat::zero(), prec: 0 }
    }
    fn ident() -> Self {
        Self::from_i64(1)
    }
    fn is_nil(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        BigComplex { re: self.re.add(&o.re), im: self.im.add(&o.im), prec: self.p2(o) }.rounded()
    }
    fn sub(&self, o: &Self) -> Self {
        BigComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im), prec: self.p2(o) }.rounded()
    }
    fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        BigComplex { re, im, prec: self.p2(o) }.rounded()
    }
    fn from_i64(n: i64) -> Self {
        BigComplex { re: BigFloat::from_i64(n), im: BigFloat::zero(), prec: 0 }
    }
}

impl Field for BigComplex {
    fn inv(&self) -> Option<Self> {
        if self.is_nil() {
            return None;
        }
        let prec = self.prec.max(64);
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Some(BigComplex {
            re: self.re.div(&n, prec, Round::Nearest),
            im: self.im.neg().div(&n, prec, Round::Nearest),
            prec: self.prec,
        })
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        if z.im < 0.0 {
            write!(f, "{:e}-{:e}i", z.re, -z.im)
        } else {
            write!(f, "{:e}+{:e}i", z.re, z.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_at_precision() {
        let z = BigComplex::from_gauss(&"3/4-1/2i".parse().unwrap(), 200);
        let one = z.mul(&z.inv().unwrap());
        let err = one.sub(&BigComplex::ident());
        assert!(err.re.abs() < BigFloat::pow2(-190) && err.im.abs() < BigFloat::pow2(-190));
    }
}
