use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::GaussianRational;
use super::ring::Ring;
use super::NumericError;

/// Polynomial with rational coefficients, ascending degree, no trailing
/// zeros. The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `p`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Evaluation in any ring that rationals embed into.
    pub fn eval_with<T: Ring>(&self, x: &T, embed: impl Fn(&BigRational) -> T) -> T {
        let mut acc = T::nil();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.eval_with(x, |c| GaussianRational::real(c.clone()))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.eval_with(x, |c| c.clone())
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly), NumericError> {
        let dl = d.leading().ok_or(NumericError::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((RatPoly::default(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((RatPoly::new(q), RatPoly::new(r)))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &RatPoly) -> Result<RatPoly, NumericError> {
        let (q, r) = self.div_rem(d)?;
        if !r.coeffs.is_empty() {
            return Err(NumericError::NotDivisible);
        }
        Ok(q)
    }

    /// Sum of absolute values of the coefficients, `L(q)`.
    pub fn length(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |a, c| a + c.abs())
    }

    /// Largest absolute coefficient, `H(q)`.
    pub fn height(&self) -> BigRational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.coeffs.is_empty() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.iter().map(|c| c / &g * &sign).collect()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(super::gauss::rat_to_f64).collect()
    }

    /// Square-free decomposition: pairs `(f, k)` with `self = c·∏ f^k`,
    /// each `f` monic and square-free, pairwise coprime (Yun's algorithm).
    pub fn squarefree(&self) -> Result<Vec<(RatPoly, usize)>, NumericError> {
        if self.coeffs.is_empty() {
            return Err(NumericError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.degree() == Some(0) {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = poly_gcd(&f, &df)?;
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = poly_gcd(&b, &d)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = c.sub(&b.derivative());
            k += 1;
        }
        Ok(out)
    }
}

/// Monic greatest common divisor over ℚ.
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> Result<RatPoly, NumericError> {
    if a.coeffs.is_empty() && b.coeffs.is_empty() {
        return Err(NumericError::BothZero);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.coeffs.is_empty() {
        let (_, r) = x.div_rem(&y)?;
        // keep coefficient growth in check
        x = y.monic();
        y = r.monic();
    }
    Ok(x.monic())
}

impl Ring for RatPoly {
    fn nil() -> Self {
        RatPoly::default()
    }
    fn ident() -> Self {
        RatPoly::from_ints(&[1])
    }
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return RatPoly::default();
        }
        let mut r = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        RatPoly::new(r)
    }
    fn from_i64(n: i64) -> Self {
        RatPoly::from_ints(&[n])
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let cs = super::gauss::fmt_rational(&a);
            match (k, a.is_one()) {
                (0, _) => write!(f, "{}", cs)?,
                (1, true) => write!(f, "p")?,
                (1, false) => write!(f, "{}*p", cs)?,
                (_, true) => write!(f, "p^{}", k)?,
                (_, false) => write!(f, "{}*p^{}", cs, k)?,
            }
        }
        Ok(())
    }
}

impl serde::Serialize for RatPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&super::gauss::fmt_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for RatPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let cs = v
            .iter()
            .map(|s| super::parse::parse_rational(s, false))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(RatPoly::new(cs))
    }
}

/// Dense integer polynomial with machine coefficients. Used by the zero
/// atlas, where hundreds of thousands of small polynomials are built.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct ZPoly(pub Vec<i64>);

impl ZPoly {
    pub fn trimmed(mut v: Vec<i64>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        ZPoly(v)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn to_ratpoly(&self) -> RatPoly {
        RatPoly::from_ints(&self.0)
    }

    /// Divides out every factor `(1 - p)`; returns the quotient and the
    /// multiplicity removed.
    pub fn deflate_one(&self) -> (ZPoly, usize) {
        let mut cur = self.0.clone();
        let mut k = 0;
        while !cur.is_empty() && cur.iter().sum::<i64>() == 0 {
            // synthetic division by (p - 1)
            let n = cur.len();
            let mut q = vec![0i64; n - 1];
            let mut acc = 0i64;
            for j in (1..n).rev() {
                acc += cur[j];
                q[j - 1] = acc;
            }
            cur = q;
            k += 1;
        }
        (ZPoly::trimmed(cur), k)
    }

    pub fn eval_f64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            acc = acc * z + c as f64;
        }
        acc
    }
}

fn fit(v: i128) -> i64 {
    v.to_i64().expect("integer polynomial coefficient overflow")
}

impl Ring for ZPoly {
    fn nil() -> Self {
        ZPoly(Vec::new())
    }
    fn ident() -> Self {
        ZPoly(vec![1])
    }
    fn is_nil(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let g = |v: &Vec<i64>, k| v.get(k).copied().unwrap_or(0) as i128;
        ZPoly::trimmed((0..n).map(|k| fit(g(&self.0, k) + g(&o.0, k))).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let g = |v: &Vec<i64>, k| v.get(k).copied().unwrap_or(0) as i128;
        ZPoly::trimmed((0..n).map(|k| fit(g(&self.0, k) - g(&o.0, k))).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut r = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                r[i + j] += a as i128 * b as i128;
            }
        }
        ZPoly::trimmed(r.into_iter().map(fit).collect())
    }
    fn from_i64(n: i64) -> Self {
        ZPoly::trimmed(vec![n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        let a = RatPoly::from_ints(&[-1, 0, 1]);
        let b = RatPoly::from_ints(&[-1, 1]);
        assert_eq!(poly_gcd(&a, &b).unwrap(), b);
        let c = RatPoly::from_ints(&[1, 1]);
        assert_eq!(poly_gcd(&RatPoly::x(), &c).unwrap(), RatPoly::ident());
        assert!(matches!(
            poly_gcd(&RatPoly::nil(), &RatPoly::nil()),
            Err(NumericError::BothZero)
        ));
        assert_eq!(poly_gcd(&RatPoly::nil(), &a.scale(&BigRational::from_integer(3.into()))).unwrap(), a);
    }

    #[test]
    fn squarefree_of_triangle() {
        // (1-p)^2 (1+2p)
        let q = RatPoly::from_ints(&[1, -1]).pow_n(2).mul(&RatPoly::from_ints(&[1, 2]));
        let sf = q.squarefree().unwrap();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (RatPoly::new(vec![BigRational::new(1.into(), 2.into()), BigRational::one()]), 1));
        assert_eq!(sf[1], (RatPoly::from_ints(&[-1, 1]), 2));
    }

    #[test]
    fn display_and_serde() {
        let q = RatPoly::from_ints(&[1, -1, 0, 2]);
        assert_eq!(q.to_string(), "2*p^3 - p + 1");
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"["1","-1","0","2"]"#);
        let back: RatPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn deflation() {
        let z = ZPoly(vec![1, -1]).pow_n(2).mul(&ZPoly(vec![1, 2]));
        let (d, k) = z.deflate_one();
        assert_eq!((d, k), (ZPoly(vec![1, 2]), 2));
    }
}
