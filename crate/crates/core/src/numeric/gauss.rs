use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{Field, GaussInt, Ring};
use super::NumericError;

/// An element `re + im·i` of ℚ(i). Both parts are kept in lowest terms with
/// positive denominators (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `a/b + (c/d)i` from machine integers.
    pub fn from_frac(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussianRational {
            re: BigRational::new(a.into(), b.into()),
            im: BigRational::new(c.into(), d.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`, exactly.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|z - w|²`, exactly.
    pub fn dist_sq(&self, w: &Self) -> BigRational {
        Ring::sub(self, w).norm_sq()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        GaussianRational { re: &self.re * k, im: &self.im * k }
    }

    /// Least common denominator `q > 0` and Gaussian integer `P` with
    /// `self = P/q`.
    pub fn to_homogeneous(&self) -> (GaussInt, BigInt) {
        let q = self.re.denom().lcm(self.im.denom());
        let a = self.re.numer() * (&q / self.re.denom());
        let b = self.im.numer() * (&q / self.im.denom());
        (Complex::new(a, b), q)
    }

    /// `P / q` for a Gaussian integer `P` and a nonzero integer `q`.
    pub fn from_homogeneous(num: &GaussInt, den: &BigInt) -> Self {
        GaussianRational {
            re: BigRational::new(num.re.clone(), den.clone()),
            im: BigRational::new(num.im.clone(), den.clone()),
        }
    }

    /// `num / den` for Gaussian integers, `den ≠ 0`.
    pub fn from_gauss_quotient(num: &GaussInt, den: &GaussInt) -> Option<Self> {
        let n2 = &den.re * &den.re + &den.im * &den.im;
        if n2.is_zero() {
            return None;
        }
        let c = Complex::new(den.re.clone(), -&den.im);
        let t = num * c;
        Some(GaussianRational {
            re: BigRational::new(t.re, n2.clone()),
            im: BigRational::new(t.im, n2),
        })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Largest bit length among the four numerators and denominators.
    pub fn bits(&self) -> u64 {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

/// Nearest `f64` to a big rational, robust to huge numerators and
/// denominators.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db - 60;
    let q = if shift >= 0 {
        x.numer() / (x.denom() << (shift as usize))
    } else {
        (x.numer() << ((-shift) as usize)) / x.denom()
    };
    q.to_f64().unwrap_or(0.0) * (2f64).powi(shift as i32)
}

impl Ring for GaussianRational {
    fn nil() -> Self {
        GaussianRational::default()
    }
    fn ident() -> Self {
        Self::from_int(1)
    }
    fn is_nil(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re * &o.re);
        }
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:path) => {
        impl std::ops::$tr<&GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                $f(self, o)
            }
        }
        impl std::ops::$tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                $f(&self, &o)
            }
        }
    };
}
forward_binop!(Add, add, Ring::add);
forward_binop!(Sub, sub, Ring::sub);
forward_binop!(Mul, mul, Ring::mul);

impl std::ops::Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        Ring::neg(&self)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        GaussianRational::real(r)
    }
}

/// Formats a rational as `num/den`, or just `num` for integers.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
    }
}

impl FromStr for GaussianRational {
    type Err = NumericError;
    fn from_str(s: &str) -> Result<Self, NumericError> {
        super::parse::parse_gaussian(s)
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
