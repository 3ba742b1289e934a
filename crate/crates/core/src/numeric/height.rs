use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::gauss::GaussianRational;

/// Degree, absolute logarithmic height and the magnitude bound
/// `C = 4^{dm}·M^m` of a Gaussian rational, where `M` is the Mahler
/// measure of its minimal polynomial (so `h = log M / d`).
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicBound {
    pub d: u32,
    pub mahler: BigInt,
    pub h: f64,
    pub m: u32,
    pub c: BigInt,
    pub log_c: f64,
}

/// Primitive integer minimal polynomial of `p` over ℚ, ascending.
pub fn minimal_polynomial(p: &GaussianRational) -> Vec<BigInt> {
    if p.is_real() {
        return vec![-p.re.numer().clone(), p.re.denom().clone()];
    }
    // x² − 2 Re(p) x + |p|²
    let n = p.norm_sq();
    let t = &p.re * BigInt::from(-2);
    let l = n.denom().lcm(t.denom());
    let c0 = n.numer() * (&l / n.denom());
    let c1 = t.numer() * (&l / t.denom());
    let g = c0.gcd(&c1).gcd(&l);
    vec![c0 / &g, c1 / &g, l / g]
}

impl AlgebraicBound {
    pub fn new(p: &GaussianRational, m: u32) -> Self {
        let mp = minimal_polynomial(p);
        let d = (mp.len() - 1) as u32;
        // the roots are conjugate (or the single rational), so the Mahler
        // measure is max(|lead|, |constant|)
        let lead = mp.last().unwrap().abs();
        let cst = mp[0].abs();
        let mahler = if lead > cst { lead } else { cst };
        let c = (BigInt::one() << (2 * d * m) as usize) * num_traits::pow(mahler.clone(), m as usize);
        let log_m = log_big(&mahler);
        AlgebraicBound {
            d,
            h: log_m / d as f64,
            m,
            log_c: (d * m) as f64 * 4f64.ln() + m as f64 * log_m,
            c,
            mahler,
        }
    }
}

/// Natural log of a positive big integer.
pub fn log_big(x: &BigInt) -> f64 {
    let b = x.bits();
    if b < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = b - 60;
    (x >> shift as usize).to_f64().unwrap().ln() + shift as f64 * 2f64.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_half() {
        let p: GaussianRational = "-1/2".parse().unwrap();
        assert_eq!(minimal_polynomial(&p), vec![BigInt::from(1), BigInt::from(2)]);
        let b = AlgebraicBound::new(&p, 8);
        assert_eq!(b.c, BigInt::from(16777216));
        assert_eq!(AlgebraicBound::new(&p, 1).c, BigInt::from(8));
        assert!((b.h - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_parameters() {
        let p: GaussianRational = "0+1/2i".parse().unwrap();
        assert_eq!(minimal_polynomial(&p), vec![BigInt::from(1), BigInt::from(0), BigInt::from(4)]);
        assert_eq!(AlgebraicBound::new(&p, 3).c, BigInt::from(64).pow(3));
        let p: GaussianRational = "1/2+1/3i".parse().unwrap();
        // 36x² − 36x + 13
        assert_eq!(minimal_polynomial(&p), vec![BigInt::from(13), BigInt::from(-36), BigInt::from(36)]);
    }
}
