use num_rational::BigRational;
use serde::Serialize;

use crate::numeric::gauss::{fmt_rational, rat_to_f64};
use crate::numeric::{BigFloat, Round};

/// The positive root `c = (5√2 − 4)/4` of `8x² + 16x − 17`, enclosed by
/// dyadic rationals, and `t* = arccos c`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitThreshold {
    /// Ascending coefficients of the defining polynomial.
    pub poly: [i64; 3],
    #[serde(serialize_with = "as_str")]
    pub lo: BigRational,
    #[serde(serialize_with = "as_str")]
    pub hi: BigRational,
    pub value: f64,
    pub t_star: f64,
}

fn as_str<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

const BITS: u32 = 128;

fn defining(x: &BigRational) -> BigRational {
    let c = |k: i64| BigRational::from_integer(k.into());
    c(8) * x * x + c(16) * x - c(17)
}

impl UnitThreshold {
    /// The enclosure is a sign change of the increasing defining
    /// polynomial on `[0, 1]`.
    pub fn check(&self) -> bool {
        let zero = BigRational::from_integer(0.into());
        self.lo >= zero && self.lo < self.hi && defining(&self.lo) < zero && defining(&self.hi) > zero
    }

    pub fn width(&self) -> f64 {
        rat_to_f64(&(&self.hi - &self.lo))
    }
}

pub fn unit_threshold() -> UnitThreshold {
    let two = BigFloat::from_i64(2);
    let q = |r: Round| {
        let s = two.sqrt(BITS, r).to_rational();
        (BigRational::from_integer(5.into()) * s - BigRational::from_integer(4.into())) / BigRational::from_integer(4.into())
    };
    let (lo, hi) = (q(Round::Down), q(Round::Up));
    let value = rat_to_f64(&((&lo + &hi) / BigRational::from_integer(2.into())));
    UnitThreshold { poly: [-17, 16, 8], lo, hi, value, t_star: value.acos() }
}
