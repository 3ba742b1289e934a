use num_complex::Complex64;
use num_rational::BigRational;

use super::ball::Ball;
use super::bigfloat::{BigFloat, Round};
use super::complex::BigComplex;
use super::gauss::{rat_to_f64, GaussianRational};
use super::poly::{RatPoly, ZPoly};
use super::ring::{Field, Ring};
use super::NumericError;

/// A root approximation with a certified bound on `|q(z)|`.
#[derive(Clone, Debug)]
pub struct Root {
    pub z: BigComplex,
    pub residual: BigFloat,
}

/// Simultaneous Aberth–Ehrlich iteration in machine precision. `coeffs`
/// ascending, leading coefficient nonzero.
pub fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mono: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![Complex64::new(-mono[0], 0.0)];
    }
    // Fujiwara-style radius for the starting circle
    let rad = (0..n)
        .map(|k| mono[k].abs().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let dcoeffs: Vec<f64> = (1..=n).map(|k| k as f64 * mono[k]).collect();
    let horner = |c: &[f64], x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &ck| a * x + ck);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = horner(&mono, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / horner(&dcoeffs, z[i]);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Rigorous bound on `|q(z)|` for an integer polynomial evaluated by f64
/// Horner at the f64 point `z`: the computed modulus plus the standard
/// `γ_{2n} Σ|c_k||z|^k` forward error.
pub fn residual_bound_f64(q: &ZPoly, z: Complex64) -> f64 {
    let n = q.0.len() as f64;
    let u = f64::EPSILON / 2.0;
    let gamma = (4.0 * n + 4.0) * u / (1.0 - (4.0 * n + 4.0) * u);
    let r = z.norm();
    let mut absum = 0.0;
    let mut pw = 1.0;
    for &c in &q.0 {
        absum += (c as f64).abs() * pw;
        pw *= r;
    }
    let v = q.eval_f64(z).norm();
    (v + gamma * absum) * (1.0 + 4.0 * u)
}

/// Roots of an integer polynomial in machine precision with residual
/// bounds; the fast path of the zero atlas.
pub fn zpoly_roots_f64(q: &ZPoly) -> Vec<(Complex64, f64)> {
    let c: Vec<f64> = q.0.iter().map(|&x| x as f64).collect();
    aberth_f64(&c).into_iter().map(|z| (z, residual_bound_f64(q, z))).collect()
}

fn eval_ball(q: &RatPoly, z: &BigComplex, prec: u32) -> Ball {
    let zb = Ball::exact(z.re.clone(), z.im.clone()).with_prec(prec);
    q.eval_with(&zb, |c| Ball::from_rational(c, prec))
}

/// Certified upper bound on `|q(z)|` by ball evaluation at `prec` bits.
pub fn residual_ball(q: &RatPoly, z: &BigComplex, prec: u32) -> BigFloat {
    eval_ball(q, z, prec).abs_upper()
}

/// `2^{−prec/2}·L(q)` as a rational.
fn tolerance(q: &RatPoly, precision: u32) -> BigRational {
    let two = BigRational::from_integer(num_bigint::BigInt::from(1) << (precision / 2) as usize);
    q.length() / two
}

/// All roots of `q` with multiplicity, each satisfying
/// `|q(z)| ≤ 2^{−precision/2}·L(q)` (certified by ball evaluation).
pub fn poly_roots(q: &RatPoly, precision: u32) -> Result<Vec<BigComplex>, NumericError> {
    Ok(poly_roots_certified(q, precision)?.into_iter().map(|r| r.z).collect())
}

pub fn poly_roots_certified(q: &RatPoly, precision: u32) -> Result<Vec<Root>, NumericError> {
    let deg = q.degree().ok_or(NumericError::ZeroPolynomial)?;
    if deg == 0 {
        return Err(NumericError::DegreeTooLow);
    }
    let precision = precision.max(64);
    let wp = precision + 32;
    let tol = tolerance(q, precision);
    let tol_bf = BigFloat::from_rational(&tol, 64, Round::Down);
    let mut out = Vec::with_capacity(deg);
    for (f, mult) in q.squarefree()? {
        let approx = aberth_f64(&f.to_f64_coeffs());
        let df = f.derivative();
        for z0 in approx {
            let z = newton_polish(&f, &df, z0, wp);
            let resid = eval_ball(q, &z, wp).abs_upper();
            if resid > tol_bf {
                return Err(NumericError::RootResidual { residual: resid.to_f64(), bound: rat_to_f64(&tol) });
            }
            for _ in 0..mult {
                out.push(Root { z: z.with_prec(precision), residual: resid.clone() });
            }
        }
    }
    Ok(out)
}

fn newton_polish(f: &RatPoly, df: &RatPoly, z0: Complex64, wp: u32) -> BigComplex {
    let mut prec = 64u32;
    let mut z = BigComplex::from_c64(z0, prec);
    let embed = |p: u32| move |c: &BigRational| BigComplex::from_gauss(&GaussianRational::real(c.clone()), p);
    let mut extra = 0;
    loop {
        let fz = f.eval_with(&z, embed(prec));
        let dz = df.eval_with(&z, embed(prec));
        if let Some(step) = fz.div(&dz) {
            z = z.sub(&step);
        }
        if prec >= wp {
            extra += 1;
            if extra >= 3 {
                return z;
            }
        } else {
            prec = (prec * 2).min(wp);
            z = z.with_prec(prec);
        }
    }
}

/// Reconstructs a monic-scaled polynomial from roots: `lead·∏(p − zᵢ)`.
pub fn from_roots(lead: &BigRational, roots: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let mut acc = vec![BigComplex::from_gauss(&GaussianRational::real(lead.clone()), prec)];
    for z in roots {
        let mut next = vec![BigComplex::nil(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add(a);
            next[k] = next[k].sub(&a.mul(z));
        }
        acc = next;
    }
    acc
}

/// Machine-precision helper used by plotting-side consumers.
pub fn to_f64_roots(rs: &[BigComplex]) -> Vec<Complex64> {
    rs.iter().map(|z| z.to_c64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn i_and_minus_i() {
        let q = RatPoly::from_ints(&[1, 0, 1]);
        let mut rs: Vec<_> = poly_roots(&q, 128).unwrap().iter().map(|z| z.to_c64()).collect();
        rs.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((rs[0] - Complex64::new(0.0, -1.0)).norm() < 1e-30);
        assert!((rs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-30);
        let rs = poly_roots(&q, 128).unwrap();
        for z in &rs {
            let d = z.to_gauss().sub(&GaussianRational::i()).norm_sq().min(z.to_gauss().add(&GaussianRational::i()).norm_sq());
            assert!(d < BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(60)));
        }
    }

    #[test]
    fn triangle_roots_with_multiplicity() {
        let q = RatPoly::from_ints(&[1, -1]).pow_n(2).mul(&RatPoly::from_ints(&[1, 2]));
        let rs = poly_roots(&q, 100).unwrap();
        let mut re: Vec<f64> = rs.iter().map(|z| z.re.to_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 0.5).abs() < 1e-25 && (re[1] - 1.0).abs() < 1e-25 && (re[2] - 1.0).abs() < 1e-25);
    }

    #[test]
    fn zero_and_constant_rejected() {
        assert!(poly_roots(&RatPoly::nil(), 64).is_err());
        assert!(poly_roots(&RatPoly::from_ints(&[3]), 64).is_err());
        let one = poly_roots(&RatPoly::from_ints(&[-1, 1]), 64).unwrap();
        assert_eq!(one[0].to_gauss(), GaussianRational::from_int(1));
    }

    #[test]
    fn f64_residuals_are_bounds() {
        let q = ZPoly(vec![1, 3, 0, -2, 5, 1]);
        for (z, r) in zpoly_roots_f64(&q) {
            assert!(r < 1e-10);
            // exact residual at the f64 point never exceeds the bound
            let zg = GaussianRational::new(
                BigFloat::from_f64(z.re).to_rational(),
                BigFloat::from_f64(z.im).to_rational(),
            );
            let v = q.to_ratpoly().eval(&zg).norm_sq();
            assert!(rat_to_f64(&v).sqrt() <= r);
            assert!(!v.is_negative());
        }
    }
}
