use num_rational::BigRational;

use crate::graph::{Multigraph, TwoTerminal};
use crate::numeric::ball::cos_sin;
use crate::numeric::{Ball, Field, GaussianRational, Ring};
use crate::reliability::{eval_multivariate, ReliabilityError};

use super::{yhat_of, Ext};

/// The pentagon template on vertices `s=0, 1, 2, 3, t=4`, with the class
/// (0 for `a₁`, 1 for `a₂`) of every edge.
pub fn pentagon_template() -> (TwoTerminal, Vec<usize>) {
    let a1 = [(0, 2), (0, 3), (1, 3), (1, 2), (2, 4), (3, 4)];
    let a2 = [(0, 1), (1, 4), (2, 3)];
    let edges: Vec<(usize, usize)> = a1.iter().chain(&a2).copied().collect();
    let classes = [vec![0; a1.len()], vec![1; a2.len()]].concat();
    (TwoTerminal { graph: Multigraph { n: 5, edges }, s: 0, t: 4 }, classes)
}

fn c<T: Ring>(k: i64) -> T {
    T::from_i64(k)
}

/// Closed form of `ŷ` for the template with `a₁ ↦ G₁`, `a₂ ↦ G₂`, as a
/// function of `ŷ_{G₁} = y1` and `ŷ_{G₂} = y2`. A vanishing denominator
/// yields `∞`.
pub fn pentagon_f<T: Field>(y1: &T, y2: &T) -> Ext<T> {
    let p1 = |k: u64| y1.pow_n(k);
    let y2sq = y2.mul(y2);
    let five = (1..=5).fold(T::ident(), |acc, k| acc.add(&p1(k)));
    let quad = p1(2).add(y1).add(&T::ident());
    let cub = p1(3).add(&p1(2)).add(&y1.mul(&c(2))).add(&c(2));
    let num = five
        .mul(&y2sq.mul(y2))
        .sub(&quad.mul(&y2sq).mul(&c(2)))
        .sub(&p1(2).mul(&c(2)))
        .sub(&cub.mul(y2))
        .add(&y1.mul(&c(2)))
        .add(&c(6));
    let lin = p1(2).mul(&c(2)).sub(&y1.mul(&c(5))).sub(&c(9));
    let den = cub.mul(&y2sq).add(&lin.mul(y2)).sub(&y1.mul(&c(6))).add(&c(12)).mul(&c(2));
    match num.div(&den) {
        Some(v) => Ext::Finite(v),
        None => Ext::Infinity,
    }
}

/// The same quantity computed from the template through the multivariate
/// polynomial at `p_i = 1/y_{class(i)}`.
pub fn pentagon_via_multivariate(
    y1: &GaussianRational,
    y2: &GaussianRational,
) -> Result<Ext<GaussianRational>, ReliabilityError> {
    let (h, classes) = pentagon_template();
    let inv = |y: &GaussianRational| y.inv().unwrap_or_else(GaussianRational::nil);
    let ps = [inv(y1), inv(y2)];
    let per: Vec<GaussianRational> = classes.iter().map(|&k| ps[k].clone()).collect();
    Ok(yhat_of(&eval_multivariate(&h, &per)?))
}

/// `|F(e^{it}, e^{−it})|²` in closed trigonometric form. Near `t = 0` the
/// common factor `1 − cos t` is cancelled; elsewhere the denominator
/// `12c² − 25c + 13 = (1 − c)(13 − 12c)` is formed with `1 − c = 2 sin²(t/2)`.
pub fn pentagon_circle_sq(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    if t.abs() < 1e-3 {
        (1.0 + c) * (9.0 - 8.0 * c * c) / (2.0 * (13.0 - 12.0 * c))
    } else {
        let h = (0.5 * t).sin();
        (8.0 * s.powi(4) + s * s) / (2.0 * (2.0 * h * h) * (13.0 - 12.0 * c))
    }
}

/// `|F(e^{it}, e^{−it})|²` evaluated from the rational form of `F` in ball
/// arithmetic, for a rational angle `|t| ≤ 8`.
pub fn pentagon_circle_sq_ball(t: &BigRational, prec: u32) -> Option<Ball> {
    let (co, si) = cos_sin(&Ball::from_rational(t, prec + 16), prec + 16);
    let i = Ball::from_gauss(&GaussianRational::i(), prec + 16);
    let z = co.add(&i.mul(&si));
    let zb = co.sub(&i.mul(&si));
    let f = pentagon_f(&z, &zb);
    let f = f.finite()?;
    Some(f.mul(&f.conj()).with_prec(prec))
}

/// `(5√2 − 4)/4`, the positive root of `8x² + 16x − 17`.
pub fn pentagon_threshold() -> f64 {
    (5.0 * 2f64.sqrt() - 4.0) / 4.0
}

/// `cos t` at the crossing `|F(e^{it}, e^{−it})|² = 1` on `t ∈ (0, π)`,
/// located by bisection in `t` on the trigonometric form.
pub fn pentagon_crossing(tol: f64) -> f64 {
    // the value exceeds 1 for small t and is below 1 at t = π/2
    let (mut lo, mut hi) = (1e-2, std::f64::consts::FRAC_PI_2);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pentagon_circle_sq(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).cos()
}
