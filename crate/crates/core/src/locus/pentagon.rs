use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::random::random_gaussian;
use crate::interactions::pentagon::{pentagon_circle_sq, pentagon_circle_sq_ball, pentagon_crossing, pentagon_f, pentagon_via_multivariate};
use crate::numeric::Ring;

use super::threshold::unit_threshold;

#[derive(Clone, Debug, Serialize)]
pub struct PentagonReport {
    pub exact_points: usize,
    pub exact_matches: usize,
    pub circle_samples: usize,
    /// Largest `|closed trig form − ball evaluation of F|` over the samples.
    pub circle_max_dev: f64,
    pub crossing_cos: f64,
    pub threshold: f64,
    pub crossing_err: f64,
    pub passed: bool,
}

/// Compares the closed form of `F` with the template evaluated through
/// the multivariate polynomial at `points` random Gaussian rationals, the
/// trigonometric form of `|F(e^{it}, e^{−it})|²` with ball evaluation of
/// `F` at `samples` random angles, and the bisected crossing with the
/// exact threshold.
pub fn pentagon_report(seed: u64, points: usize, samples: usize) -> PentagonReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matches = 0;
    let mut done = 0;
    while done < points {
        let y1 = random_gaussian(&mut rng, 9);
        let y2 = random_gaussian(&mut rng, 9);
        if y1.is_nil() || y2.is_nil() {
            continue;
        }
        done += 1;
        if pentagon_via_multivariate(&y1, &y2).is_ok_and(|v| v == pentagon_f(&y1, &y2)) {
            matches += 1;
        }
    }
    let mut max_dev = 0.0f64;
    for _ in 0..samples {
        let t = BigRational::from_float(rng.gen_range(-3.1..3.1f64)).expect("finite");
        let tf = crate::numeric::gauss::rat_to_f64(&t);
        let dev = match pentagon_circle_sq_ball(&t, 128) {
            Some(b) => (b.mid_f64().re - pentagon_circle_sq(tf)).abs() + b.rad.to_f64(),
            None => f64::INFINITY,
        };
        max_dev = max_dev.max(dev);
    }
    let threshold = unit_threshold();
    let crossing_cos = pentagon_crossing(1e-13);
    let crossing_err = (crossing_cos - threshold.value).abs();
    PentagonReport {
        exact_points: points,
        exact_matches: matches,
        circle_samples: samples,
        circle_max_dev: max_dev,
        crossing_cos,
        threshold: threshold.value,
        crossing_err,
        passed: matches == points && max_dev <= 1e-12 && crossing_err <= 1e-9 && threshold.check(),
    }
}
