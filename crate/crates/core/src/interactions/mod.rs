//! Effective and virtual interactions, the Möbius maps they induce, point
//! classification and the pentagon template.

pub mod mobius;
pub mod pentagon;

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::numeric::{Field, GaussianRational, Ring};
use crate::reliability::RelPair;

pub use mobius::{classify_fixed, classify_fixed_f64, f_map, g_map, FixedKind, FixedPoint, FixedPointReport, Mobius};
pub use pentagon::{pentagon_circle_sq, pentagon_f, pentagon_template, pentagon_threshold, pentagon_via_multivariate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InteractionError {
    #[error("interaction undefined: R and S both vanish")]
    Undefined,
    #[error("Möbius map is degenerate (ad − bc = 0)")]
    Degenerate,
    #[error("the identity map has no isolated fixed points")]
    Identity,
    #[error("fixed points are not Gaussian rationals")]
    IrrationalFixedPoints,
    #[error("indeterminate product 0·∞ of virtual interactions")]
    Indeterminate,
    #[error("composition counts must be positive")]
    ZeroCount,
}

/// A value on the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext<T> {
    Finite(T),
    Infinity,
}

impl<T> Ext<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinity => None,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Ext<U> {
        match self {
            Ext::Finite(v) => Ext::Finite(f(v)),
            Ext::Infinity => Ext::Infinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(v) => v.fmt(f),
            Ext::Infinity => f.write_str("inf"),
        }
    }
}

/// Effective interaction `y = (1−p)S/R + 1` and virtual interaction
/// `ŷ = R/S + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionPoint<T> {
    pub y: Ext<T>,
    pub yhat: Ext<T>,
}

pub fn interactions_of<T: Field>(pair: &RelPair<T>, p: &T) -> Result<InteractionPoint<T>, InteractionError> {
    if pair.r.is_nil() && pair.s.is_nil() {
        return Err(InteractionError::Undefined);
    }
    let one = T::ident();
    let y = match pair.s.div(&pair.r) {
        Some(q) => Ext::Finite(one.sub(p).mul(&q).add(&one)),
        None => Ext::Infinity,
    };
    let yhat = match pair.r.div(&pair.s) {
        Some(q) => Ext::Finite(q.add(&one)),
        None => Ext::Infinity,
    };
    Ok(InteractionPoint { y, yhat })
}

/// `ŷ` alone.
pub fn yhat_of<T: Field>(pair: &RelPair<T>) -> Ext<T> {
    match pair.r.div(&pair.s) {
        Some(q) => Ext::Finite(q.add(&T::ident())),
        None => Ext::Infinity,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    Exceptional,
    Active,
    Inactive,
    ZeroWitness,
}

impl PointClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointClass::Exceptional => "exceptional",
            PointClass::Active => "active",
            PointClass::Inactive => "inactive",
            PointClass::ZeroWitness => "zero-witness",
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact classification of a pair. Complex mode: active iff
/// `1 < |ŷ| < ∞` and `ŷ ∉ ℝ`. Real mode: active iff `ŷ < −1`.
pub fn classify_point(pair: &RelPair<GaussianRational>, real_mode: bool) -> PointClass {
    if is_exceptional(pair) {
        return PointClass::Exceptional;
    }
    if pair.r.is_nil() {
        return PointClass::ZeroWitness;
    }
    let Ext::Finite(y) = yhat_of(pair) else {
        return PointClass::Inactive;
    };
    let active = if real_mode {
        y.is_real() && y.re < BigRational::from_integer((-1).into())
    } else {
        !y.is_real() && y.norm_sq() > BigRational::from_integer(1.into())
    };
    if active {
        PointClass::Active
    } else {
        PointClass::Inactive
    }
}

/// Floating classification with a relative tolerance `tol` on every test.
pub fn classify_point_f64(pair: &RelPair<Complex64>, real_mode: bool, tol: f64) -> PointClass {
    let scale = pair.r.norm().max(pair.s.norm());
    if (pair.r + pair.s).norm() <= tol * scale {
        return PointClass::Exceptional;
    }
    if pair.r.norm() <= tol * scale {
        return PointClass::ZeroWitness;
    }
    if pair.s.norm() <= tol * scale {
        return PointClass::Inactive;
    }
    let y = pair.r / pair.s + 1.0;
    let real = y.im.abs() <= tol * y.norm().max(1.0);
    let active = if real_mode { real && y.re < -1.0 - tol } else { !real && y.norm() > 1.0 + tol };
    if active {
        PointClass::Active
    } else {
        PointClass::Inactive
    }
}

/// `ŷ` of a parallel composition, `ŷ₁·ŷ₂`; undefined for `{0, ∞}`.
pub fn parallel_yhat<T: Field>(a: &Ext<T>, b: &Ext<T>) -> Result<Ext<T>, InteractionError> {
    match (a, b) {
        (Ext::Finite(x), Ext::Finite(y)) => Ok(Ext::Finite(x.mul(y))),
        (Ext::Finite(x), Ext::Infinity) | (Ext::Infinity, Ext::Finite(x)) => {
            if x.is_nil() {
                Err(InteractionError::Indeterminate)
            } else {
                Ok(Ext::Infinity)
            }
        }
        (Ext::Infinity, Ext::Infinity) => Ok(Ext::Infinity),
    }
}

/// `ŷ` of the `n`-fold series of the `m`-fold parallel of a gadget with
/// virtual interaction `yhat`: `ŷ^m / n + (n−1)/n`.
pub fn closed_forms<T: Field>(yhat: &Ext<T>, n: u64, m: u64) -> Result<Ext<T>, InteractionError> {
    if n == 0 || m == 0 {
        return Err(InteractionError::ZeroCount);
    }
    let mut acc = yhat.clone();
    for _ in 1..m {
        acc = parallel_yhat(&acc, yhat)?;
    }
    Ok(match acc {
        Ext::Infinity => Ext::Infinity,
        Ext::Finite(v) => {
            let nn = T::from_i64(n as i64);
            let inv = nn.inv().expect("positive count");
            Ext::Finite(v.add(&nn.sub(&T::ident())).mul(&inv))
        }
    })
}

/// `R + S = 0`: the parameter lies in the exceptional set of the gadget.
pub fn is_exceptional(pair: &RelPair<GaussianRational>) -> bool {
    pair.r.add(&pair.s).is_nil()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_sp;
    use crate::graph::random::{random_expr, random_gaussian};
    use crate::reliability::{eval_sp, k2_pair};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = GaussianRational;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn basic_gadgets() {
        let p = q("1/3+2/7i");
        let one = Q::ident();
        let k2 = interactions_of(&k2_pair(&p), &p).unwrap();
        assert_eq!(k2.y, Ext::Finite(p.add(&one)));
        assert_eq!(k2.yhat, Ext::Finite(p.inv().unwrap()));
        let dbl = eval_sp(&parse_sp("e|e").unwrap(), &k2_pair(&p));
        assert_eq!(yhat_of(&dbl), Ext::Finite(p.mul(&p).inv().unwrap()));
        let path = eval_sp(&parse_sp("e*e").unwrap(), &k2_pair(&p));
        assert_eq!(yhat_of(&path), Ext::Finite(one.add(&p).div(&p.add(&p)).unwrap()));
        let zero = Q::nil();
        assert_eq!(interactions_of(&RelPair::new(zero.clone(), zero.clone()), &p), Err(InteractionError::Undefined));
        let at_one = interactions_of(&k2_pair(&one), &one).unwrap();
        assert_eq!((at_one.y, at_one.yhat), (Ext::Infinity, Ext::Finite(one.clone())));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_point(&k2_pair(&q("1/2+3/5i")), false), PointClass::Active);
        assert_eq!(classify_point(&k2_pair(&q("1/2")), true), PointClass::Inactive);
        assert_eq!(classify_point(&k2_pair(&q("-1/2")), true), PointClass::Active);
        assert_eq!(classify_point(&RelPair::new(q("2"), q("-2")), false), PointClass::Exceptional);
        assert_eq!(classify_point(&RelPair::new(q("0"), q("1/3")), false), PointClass::ZeroWitness);
        let f = k2_pair(&q("1/2+3/5i")).map(|z| z.to_c64());
        assert_eq!(classify_point_f64(&f, false, 1e-12), PointClass::Active);
    }

    #[test]
    fn closed_form_examples() {
        let p = q("-1/2");
        let yk = Ext::Finite(p.inv().unwrap());
        assert_eq!(closed_forms(&yk, 1, 3).unwrap(), Ext::Finite(p.pow_n(3).inv().unwrap()));
        assert_eq!(closed_forms(&yk, 1, 1).unwrap(), yk);
        let four = closed_forms(&yk, 1, 2).unwrap();
        assert_eq!(four, Ext::Finite(q("4")));
        assert_eq!(closed_forms(&four, 2, 1).unwrap(), Ext::Finite(q("5/2")));
        let check = eval_sp(&parse_sp("(e|e)*(e|e)").unwrap(), &k2_pair(&p));
        assert_eq!(yhat_of(&check), Ext::Finite(q("5/2")));
        assert_eq!(parallel_yhat(&Ext::Finite(Q::nil()), &Ext::Infinity), Err(InteractionError::Indeterminate));
        assert_eq!(closed_forms(&yk, 0, 1), Err(InteractionError::ZeroCount));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn f_maps_y_to_yhat(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(1..=10);
            let x = random_expr(&mut rng, k);
            let p = random_gaussian(&mut rng, 9);
            let pair = eval_sp(&x, &k2_pair(&p));
            if let (Ok(ip), Ok(f)) = (interactions_of(&pair, &p), f_map(&p)) {
                prop_assert_eq!(f.apply(&ip.y), ip.yhat);
            }
        }

        #[test]
        fn series_adds_effective_interactions(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (k1, k2) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let a = random_expr(&mut rng, k1);
            let b = random_expr(&mut rng, k2);
            let p = random_gaussian(&mut rng, 9);
            let base = k2_pair(&p);
            let (pa, pb) = (eval_sp(&a, &base), eval_sp(&b, &base));
            let ps = eval_sp(&crate::graph::SPExpr::series(vec![a, b]), &base);
            let (Ok(ia), Ok(ib), Ok(is)) = (interactions_of(&pa, &p), interactions_of(&pb, &p), interactions_of(&ps, &p)) else {
                return Ok(());
            };
            let ys = is.y;
            if let (Ext::Finite(ya), Ext::Finite(yb)) = (ia.y, ib.y) {
                prop_assert_eq!(ys, Ext::Finite(ya.add(&yb).sub(&Q::ident())));
            }
        }
    }
}
