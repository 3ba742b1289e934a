//! Exact Gaussian rationals, dyadic big floats and balls, rational
//! polynomials, root finding and rational reconstruction.

pub mod ball;
pub mod bigfloat;
pub mod complex;
pub mod gauss;
pub mod height;
pub mod parse;
pub mod poly;
pub mod reconstruct;
pub mod ring;
pub mod roots;

pub use ball::Ball;
pub use bigfloat::{BigFloat, Round};
pub use complex::BigComplex;
pub use gauss::GaussianRational;
pub use height::AlgebraicBound;
pub use poly::{poly_gcd, RatPoly, ZPoly};
pub use reconstruct::rational_reconstruct;
pub use ring::{Field, GaussInt, Ring};
pub use roots::poly_roots;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("cannot parse {input:?} at byte {offset}: {msg}")]
    Parse { input: String, offset: usize, msg: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial has degree 0")]
    DegreeTooLow,
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("polynomial does not divide exactly")]
    NotDivisible,
    #[error("reconstruction failed: no Gaussian rational with denominator <= {bound} close enough")]
    ReconstructionFailed { bound: String },
    #[error("root residual {residual:e} exceeds bound {bound:e}")]
    RootResidual { residual: f64, bound: f64 },
}

#[cfg(test)]
mod props {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn gauss() -> impl Strategy<Value = GaussianRational> {
        (-50i64..50, 1i64..30, -50i64..50, 1i64..30).prop_map(|(a, b, c, d)| GaussianRational::from_frac(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(x in gauss(), y in gauss(), z in gauss()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            if !x.is_nil() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()), GaussianRational::ident());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reconstruct_after_rounding(a in -10_000i64..10_000, b in 1i64..=1000, c in -10_000i64..10_000, d in 1i64..=1000) {
            let z = GaussianRational::from_frac(a, b, c, d);
            let n = BigInt::from(1000);
            // 2·log₂(1000) + 8 fractional bits on top of the integer part
            let prec = 14 + 2 * 10 + 8 + 2;
            let x = BigComplex::from_gauss(&z, prec);
            prop_assert_eq!(rational_reconstruct(&x, &n).unwrap(), z);
        }

        #[test]
        fn roots_rebuild_polynomial(cs in proptest::collection::vec(-20i64..20, 2..8)) {
            let q = RatPoly::from_ints(&cs);
            prop_assume!(q.degree().unwrap_or(0) >= 1);
            let prec = 128;
            let rs = poly_roots(&q, prec).unwrap();
            let rebuilt = roots::from_roots(q.leading().unwrap(), &rs, prec + 32);
            let tol = q.length() / BigRational::from_integer(BigInt::from(1) << (prec / 2) as usize);
            for (k, c) in rebuilt.iter().enumerate() {
                let d = c.to_gauss().sub(&GaussianRational::real(q.coeff(k)));
                prop_assert!(d.norm_sq() <= &tol * &tol);
            }
        }
    }
}
