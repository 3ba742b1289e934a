use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use crate::numeric::{Field, GaussianRational, Ring};

use super::{Ext, InteractionError};

/// `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Field> Mobius<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self, InteractionError> {
        let m = Mobius { a, b, c, d };
        if m.det().is_nil() {
            return Err(InteractionError::Degenerate);
        }
        Ok(m)
    }

    pub fn det(&self) -> T {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Projective evaluation: `∞ ↦ a/c` and the pole maps to `∞`.
    pub fn apply(&self, z: &Ext<T>) -> Ext<T> {
        let (num, den) = match z {
            Ext::Finite(z) => (self.a.mul(z).add(&self.b), self.c.mul(z).add(&self.d)),
            Ext::Infinity => (self.a.clone(), self.c.clone()),
        };
        match num.div(&den) {
            Some(v) => Ext::Finite(v),
            None => Ext::Infinity,
        }
    }

    pub fn apply_finite(&self, z: &T) -> Ext<T> {
        self.apply(&Ext::Finite(z.clone()))
    }

    /// `self ∘ other`
    pub fn compose(&self, o: &Self) -> Self {
        Mobius {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn inverse(&self) -> Self {
        Mobius { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }

    /// `n`-fold iterate (`n = 0` is the identity).
    pub fn iterate(&self, n: u32) -> Self {
        let mut acc = Mobius { a: T::ident(), b: T::nil(), c: T::nil(), d: T::ident() };
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Derivative at a fixed point, `(ad − bc)/(cz + d)²`; at `∞` (only a
    /// fixed point when `c = 0`) the multiplier is `d/a`.
    pub fn multiplier(&self, z: &Ext<T>) -> Option<T> {
        match z {
            Ext::Finite(z) => self.det().div(&self.c.mul(z).add(&self.d).pow_n(2)),
            Ext::Infinity => self.d.div(&self.a),
        }
    }
}

/// `f_p(z) = 1 + (1−p)/(z−1) = (z − p)/(z − 1)`, an involution.
pub fn f_map<T: Field>(p: &T) -> Result<Mobius<T>, InteractionError> {
    Mobius::new(T::ident(), p.neg(), T::ident(), T::from_i64(-1))
}

/// `g(z) = f_p(f_p(z)·f_p(y₀)) = (z·y₀ − p)/(z + y₀ − 1 − p)`: the effect on
/// `y` of putting a gadget in parallel with `G₀` (`y₀ = y_{G₀}(p)`) and
/// transforming back.
pub fn g_map<T: Field>(p: &T, y0: &T) -> Result<Mobius<T>, InteractionError> {
    let d = y0.sub(&T::ident()).sub(p);
    Mobius::new(y0.clone(), p.neg(), T::ident(), d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedKind {
    Attracting,
    Repelling,
    Neutral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint<T> {
    pub point: Ext<T>,
    pub multiplier: T,
    pub kind: FixedKind,
}

/// Fixed points of a Möbius map. A parabolic map has a single point.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport<T> {
    pub points: Vec<FixedPoint<T>>,
}

/// Exact square root of a rational, if it is one.
fn sqrt_rational(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

/// Exact square root in `ℚ(i)`, if it exists.
pub fn sqrt_gaussian(z: &GaussianRational) -> Option<GaussianRational> {
    let modulus = sqrt_rational(&z.norm_sq())?;
    let two = BigRational::from_integer(BigInt::from(2));
    let u = sqrt_rational(&((&modulus + &z.re) / &two))?;
    let mut v = sqrt_rational(&((&modulus - &z.re) / &two))?;
    if z.im.is_negative() {
        v = -v;
    }
    let r = GaussianRational::new(u, v);
    (r.mul(&r) == *z).then_some(r)
}

fn kind_exact(m: &GaussianRational) -> FixedKind {
    let n = m.norm_sq();
    let one = BigRational::from_integer(1.into());
    match n.cmp(&one) {
        std::cmp::Ordering::Less => FixedKind::Attracting,
        std::cmp::Ordering::Greater => FixedKind::Repelling,
        std::cmp::Ordering::Equal => FixedKind::Neutral,
    }
}

fn report<T: Field>(
    m: &Mobius<T>,
    pts: Vec<Ext<T>>,
    kind: impl Fn(&T) -> FixedKind,
) -> Result<FixedPointReport<T>, InteractionError> {
    let points = pts
        .into_iter()
        .map(|z| {
            let mult = m.multiplier(&z).ok_or(InteractionError::Degenerate)?;
            Ok(FixedPoint { kind: kind(&mult), multiplier: mult, point: z })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FixedPointReport { points })
}

/// Exact fixed-point classification over the Gaussian rationals. Fails
/// when the fixed points are not in `ℚ(i)` or the map is the identity.
pub fn classify_fixed(m: &Mobius<GaussianRational>) -> Result<FixedPointReport<GaussianRational>, InteractionError> {
    // c z² + (d − a) z − b = 0
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let dma = d.sub(a);
    let pts = if c.is_nil() {
        if dma.is_nil() {
            if b.is_nil() {
                return Err(InteractionError::Identity);
            }
            vec![Ext::Infinity]
        } else {
            vec![Ext::Finite(b.div(&dma).expect("nonzero")), Ext::Infinity]
        }
    } else {
        let disc = dma.mul(&dma).add(&GaussianRational::from_int(4).mul(c).mul(b));
        let two_c = c.add(c);
        let root = sqrt_gaussian(&disc).ok_or(InteractionError::IrrationalFixedPoints)?;
        let z1 = a.sub(d).add(&root).div(&two_c).expect("nonzero");
        if root.is_nil() {
            vec![Ext::Finite(z1)]
        } else {
            let z2 = a.sub(d).sub(&root).div(&two_c).expect("nonzero");
            vec![Ext::Finite(z1), Ext::Finite(z2)]
        }
    };
    report(m, pts, kind_exact)
}

/// Floating-point fixed-point classification; multipliers within `tol` of
/// the unit circle are reported neutral.
pub fn classify_fixed_f64(m: &Mobius<Complex64>, tol: f64) -> Result<FixedPointReport<Complex64>, InteractionError> {
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
    let small = |z: Complex64| z.norm() <= tol * scale;
    let pts = if small(c) {
        if small(d - a) {
            if small(b) {
                return Err(InteractionError::Identity);
            }
            vec![Ext::Infinity]
        } else {
            vec![Ext::Finite(b / (d - a)), Ext::Infinity]
        }
    } else {
        let root = ((d - a) * (d - a) + 4.0 * c * b).sqrt();
        let z1 = (a - d + root) / (2.0 * c);
        if small(root) {
            vec![Ext::Finite(z1)]
        } else {
            vec![Ext::Finite(z1), Ext::Finite((a - d - root) / (2.0 * c))]
        }
    };
    report(m, pts, |mult| {
        let r = mult.norm();
        if (r - 1.0).abs() <= tol {
            FixedKind::Neutral
        } else if r < 1.0 {
            FixedKind::Attracting
        } else {
            FixedKind::Repelling
        }
    })
}
