use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Commutative ring operations used by the generic evaluators.
///
/// Everything that carries reliability values implements this: exact
/// Gaussian rationals, Gaussian integers (homogeneous evaluation),
/// polynomials, floating complex numbers and balls.
pub trait Ring: Clone + std::fmt::Debug {
    fn nil() -> Self;
    fn ident() -> Self;
    fn is_nil(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn neg(&self) -> Self {
        Self::nil().sub(self)
    }

    fn pow_n(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::ident();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring with partial inversion; `inv` returns `None` exactly on zero
/// (or, for approximate types, when zero cannot be excluded).
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Ring for BigRational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn ident() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Gaussian integers. Used for homogeneous evaluation at `p = P/q`, where
/// every reliability value of an `m`-edge graph is `R̃/q^m` with `R̃ ∈ ℤ[i]`.
pub type GaussInt = Complex<BigInt>;

impl Ring for GaussInt {
    fn nil() -> Self {
        Complex::new(BigInt::zero(), BigInt::zero())
    }
    fn ident() -> Self {
        Complex::new(BigInt::one(), BigInt::zero())
    }
    fn is_nil(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Complex::new(&self.re * &o.re, BigInt::zero());
        }
        self * o
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(n.into(), BigInt::zero())
    }
}

impl Ring for Complex64 {
    fn nil() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn ident() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_nil(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_nil(self) {
            None
        } else {
            Some(self.inv())
        }
    }
}
