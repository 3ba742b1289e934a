use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::BigComplex;
use super::gauss::GaussianRational;
use super::NumericError;

/// The rational `a/b` with `b ≤ n` and `|x − a/b| ≤ 1/(2n²)`, if any. Such a
/// fraction is a convergent of `x`, so walking the continued fraction finds
/// it.
pub fn reconstruct_rational(x: &BigRational, n: &BigInt) -> Option<BigRational> {
    let tol = BigRational::new(BigInt::one(), BigInt::from(2) * n * n);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > n {
            return None;
        }
        let cand = BigRational::new(h2.clone(), k2.clone());
        if (x - &cand).abs() <= tol {
            return Some(cand);
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rest = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}

/// Coordinatewise reconstruction of a Gaussian rational from an exact
/// rational approximation.
pub fn reconstruct_gauss(x: &GaussianRational, den_bound: &BigInt) -> Result<GaussianRational, NumericError> {
    let fail = || NumericError::ReconstructionFailed { bound: den_bound.to_string() };
    if !den_bound.is_positive() {
        return Err(fail());
    }
    let re = reconstruct_rational(&x.re, den_bound).ok_or_else(fail)?;
    let im = reconstruct_rational(&x.im, den_bound).ok_or_else(fail)?;
    Ok(GaussianRational::new(re, im))
}

/// Recovers the unique Gaussian rational with coordinate denominators at
/// most `den_bound` lying within `1/(2·den_bound²)` of `x` in each
/// coordinate.
pub fn rational_reconstruct(x: &BigComplex, den_bound: &BigInt) -> Result<GaussianRational, NumericError> {
    reconstruct_gauss(&x.to_gauss(), den_bound)
}

/// Smallest-denominator fraction in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    let fl = lo.floor();
    if &fl == lo || fl.clone() + BigRational::one() <= *hi {
        return if &fl == lo { fl } else { fl + BigRational::one() };
    }
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    // both fractional parts lie in (0, 1): recurse on the reciprocals
    let inner = simplest_between(&hi_f.recip(), &lo_f.recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn third_from_decimal() {
        let x = q(3333333333, 10000000000);
        assert_eq!(reconstruct_rational(&x, &100.into()), Some(q(1, 3)));
        assert_eq!(reconstruct_rational(&q(1, 1_000_000_000_000), &100.into()), Some(q(0, 1)));
        assert_eq!(reconstruct_rational(&q(-1, 1_000_000_000_000), &100.into()), Some(q(0, 1)));
    }

    #[test]
    fn gaussian_round_trip() {
        let z = GaussianRational::new(q(-3, 7), q(2, 5));
        let x = BigComplex::from_gauss(&z, 60);
        assert_eq!(rational_reconstruct(&x, &100.into()).unwrap(), z);
        let off = GaussianRational::new(q(-3, 7) + q(1, 1000), q(2, 5));
        assert!(reconstruct_gauss(&off, &100.into()).is_err());
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&q(3, 10), &q(2, 5)), q(1, 3));
        assert_eq!(simplest_between(&q(-7, 5), &q(-6, 5)), q(-4, 3));
        assert_eq!(simplest_between(&q(1, 2), &q(1, 2)), q(1, 2));
    }
}
