use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// toward −∞
    Down,
    /// toward +∞
    Up,
    Nearest,
}

/// Dyadic number `mant · 2^exp`. Addition, subtraction and multiplication
/// are exact; rounding only happens in [`BigFloat::round`], division and
/// square roots.
#[derive(Clone, Debug, Default)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        BigFloat { mant, exp }.normalized()
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::from_parts(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_int(n.into())
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        BigFloat { mant: BigInt::one(), exp: k }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::from_parts(BigInt::from(m) * sign, ex)
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Floor of log₂|x| (for x ≠ 0).
    pub fn ilog2(&self) -> i64 {
        self.mant.bits() as i64 - 1 + self.exp
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &o.mant << (o.exp - e) as usize;
        Self::from_parts(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_parts(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// Rounds to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let m = shift_round(&self.mant, s, mode);
        Self::from_parts(m, self.exp + s as i64)
    }

    /// Rounds to a multiple of `2^e`.
    pub fn round_to_exp(&self, e: i64, mode: Round) -> Self {
        if self.exp >= e {
            return self.clone();
        }
        let s = (e - self.exp) as u64;
        Self::from_parts(shift_round(&self.mant, s, mode), e)
    }

    pub fn from_rational(r: &BigRational, prec: u32, mode: Round) -> Self {
        Self::div_int(r.numer(), r.denom(), prec, mode)
    }

    fn div_int(n: &BigInt, d: &BigInt, prec: u32, mode: Round) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + 2 + d.bits() as i64 - n.bits() as i64).max(0);
        let num = n << k as usize;
        let (q, r) = num.div_mod_floor(d);
        let q = if r.is_zero() {
            q
        } else {
            match mode {
                Round::Down => q,
                Round::Up => q + 1,
                Round::Nearest => {
                    let twice = (&r << 1usize).abs();
                    if twice >= d.abs() {
                        q + 1
                    } else {
                        q
                    }
                }
            }
        };
        Self::from_parts(q, -k).round(prec, mode)
    }

    pub fn div(&self, o: &Self, prec: u32, mode: Round) -> Self {
        assert!(!o.is_zero(), "division by zero");
        let (n, d) = if o.mant.is_negative() {
            (-&self.mant, -&o.mant)
        } else {
            (self.mant.clone(), o.mant.clone())
        };
        Self::div_int(&n, &d, prec, mode).mul_pow2(self.exp - o.exp)
    }

    /// Square root of a nonnegative value rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, mode: Round) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = if !exact && mode == Round::Up { s + 1 } else { s };
        Self::from_parts(s, (self.exp - shift) / 2).round(prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits() as i64;
        let (m, e) = if b > 64 {
            (&self.mant >> (b - 64) as usize, self.exp + b - 64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling to stay within the f64 exponent range
        let h = e / 2;
        mf * 2f64.powi(h as i32) * 2f64.powi((e - h) as i32)
    }
}

fn shift_round(m: &BigInt, s: u64, mode: Round) -> BigInt {
    let (q, r) = m.div_mod_floor(&(BigInt::one() << s as usize));
    if r.is_zero() {
        return q;
    }
    match mode {
        Round::Down => q,
        Round::Up => q + 1,
        Round::Nearest => {
            if r.bit(s - 1) {
                q + 1
            } else {
                q
            }
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.sub(o);
        match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
