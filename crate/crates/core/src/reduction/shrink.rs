//! Locating the root `−B/A` of a linear form `A·w + B` from coarse
//! approximations of its modulus or argument.
//!
//! The search keeps an axis-aligned box known to contain the root, laid out
//! as a grid of cells. Every answered query turns into a constraint (an
//! annulus around the query point in abs mode, a wedge in arg mode) and a
//! cell survives only if some point of it is compatible with every
//! constraint. Whenever the surviving cells fit in a noticeably smaller box
//! the grid is rebuilt on that box.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::numeric::gauss::rat_to_f64;
use crate::numeric::height::log_big;
use crate::numeric::{GaussianRational, Ring};

use super::{OracleMode, ReductionError};

type Q = GaussianRational;

/// An approximation of `A·w + B` in log-modulus or argument form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinearAnswer {
    LnAbs(f64),
    Arg(f64),
}

/// One answered query: the exact point `w` where the form was evaluated.
#[derive(Clone, Debug)]
pub struct Probe {
    pub w: Q,
    pub answer: LinearAnswer,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shrink {
    /// `A = 0` (or `A = B = 0`).
    AZero,
    /// `−B/A ∈ B_∞(y, δ/2)`.
    Root(Q),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShrinkStats {
    pub queries: usize,
    pub zooms: usize,
    /// `log₂(C/δ)`
    pub log2_range: f64,
}

#[derive(Clone, Debug)]
pub struct ShrinkParams {
    pub delta: BigRational,
    pub c: BigInt,
    pub mode: OracleMode,
    /// Envelope the answers are guaranteed to respect.
    pub envelope: f64,
    /// The root is known to be real.
    pub real: bool,
    pub seed: u64,
    pub max_queries: Option<usize>,
}

pub(crate) fn ln_rat(x: &BigRational) -> f64 {
    log_big(&x.numer().abs()) - log_big(x.denom())
}

/// `ln |z|`, `−∞` at 0.
pub(crate) fn ln_abs(z: &Q) -> f64 {
    let n = z.norm_sq();
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    0.5 * ln_rat(&n)
}

/// `arg z ∈ (−π, π]`, robust to huge or tiny coordinates.
pub(crate) fn arg(z: &Q) -> f64 {
    let lr = if z.re.is_zero() { f64::NEG_INFINITY } else { ln_rat(&z.re) };
    let li = if z.im.is_zero() { f64::NEG_INFINITY } else { ln_rat(&z.im) };
    let top = lr.max(li);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    let x = if z.re.is_zero() { 0.0 } else { (lr - top).exp() * if z.re.is_negative() { -1.0 } else { 1.0 } };
    let y = if z.im.is_zero() { 0.0 } else { (li - top).exp() * if z.im.is_negative() { -1.0 } else { 1.0 } };
    y.atan2(x)
}

/// Distance between two angles on the circle.
pub(crate) fn ang_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[derive(Clone, Debug)]
enum Kind {
    /// `ln |w − root| ∈ [lo, hi]`
    Ring { lo: f64, hi: f64 },
    /// `arg(root − w)` within `half` of `dir`
    Wedge { dir: f64, half: f64 },
}

#[derive(Clone, Debug)]
struct Constraint {
    w: Q,
    kind: Kind,
}

/// Box `c ± (hx, hy)` in exact coordinates; local coordinates are
/// `(z − c)/s` with `s = max(hx, hy)`.
struct Frame {
    c: Q,
    hx: BigRational,
    hy: BigRational,
    s: BigRational,
    ln_s: f64,
    nx: usize,
    ny: usize,
    half: (f64, f64),
    /// Rounding slack of constraint points, local units.
    eta: f64,
    alive: Vec<bool>,
}

impl Frame {
    fn new(c: Q, hx: BigRational, hy: BigRational, real: bool, eta: &BigRational) -> Self {
        let s = if hx > hy { hx.clone() } else { hy.clone() };
        let (nx, ny) = if real { (32, 1) } else { (16, 16) };
        let half = (rat_to_f64(&(&hx / &s)), rat_to_f64(&(&hy / &s)));
        let eta = rat_to_f64(&(eta / &s)) * 1.01;
        Frame { ln_s: ln_rat(&s), c, hx, hy, s, nx, ny, half, eta, alive: vec![true; nx * ny] }
    }

    fn local(&self, w: &Q) -> Option<Complex64> {
        let d = w.sub(&self.c);
        let z = Complex64::new(rat_to_f64(&(&d.re / &self.s)), rat_to_f64(&(&d.im / &self.s)));
        (z.re.is_finite() && z.im.is_finite()).then_some(z)
    }

    fn half_local(&self) -> (f64, f64) {
        self.half
    }

    /// Center and circumradius of cell `k`, local units.
    fn cell(&self, k: usize) -> (Complex64, f64) {
        let (hx, hy) = self.half_local();
        let (i, j) = (k % self.nx, k / self.nx);
        let (dx, dy) = (2.0 * hx / self.nx as f64, 2.0 * hy / self.ny as f64);
        let c = Complex64::new(-hx + (i as f64 + 0.5) * dx, -hy + (j as f64 + 0.5) * dy);
        let rho = 0.5 * (dx * dx + dy * dy).sqrt() * (1.0 + 1e-9) + 1e-12;
        (c, rho)
    }

    fn admits(&self, con: &Constraint, wl: Option<Complex64>, center: Complex64, rho: f64) -> bool {
        let Some(wl) = wl else { return true };
        let rho = rho + self.eta;
        let v = center - wl;
        let dist = v.norm();
        match con.kind {
            Kind::Ring { lo, hi } => {
                let dmax = dist + rho;
                let dmin = dist - rho;
                let slack = 1e-9;
                dmax.ln() + self.ln_s >= lo - slack && (dmin <= 0.0 || dmin.ln() + self.ln_s <= hi + slack)
            }
            Kind::Wedge { dir, half } => {
                if dist <= rho {
                    return true;
                }
                ang_dist(v.im.atan2(v.re), dir) <= half + (rho / dist).min(1.0).asin() + 1e-9
            }
        }
    }

    fn apply(&mut self, con: &Constraint) {
        let wl = self.local(&con.w);
        for k in 0..self.alive.len() {
            if self.alive[k] {
                let (c, rho) = self.cell(k);
                if !self.admits(con, wl, c, rho) {
                    self.alive[k] = false;
                }
            }
        }
    }

    fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Bounding box of the surviving cells, local units.
    fn bbox(&self) -> Option<(f64, f64, f64, f64)> {
        let (hx, hy) = self.half_local();
        let (dx, dy) = (hx / self.nx as f64, hy / self.ny as f64);
        let mut b: Option<(f64, f64, f64, f64)> = None;
        for k in (0..self.alive.len()).filter(|&k| self.alive[k]) {
            let (c, _) = self.cell(k);
            let cell = (c.re - dx, c.re + dx, c.im - dy, c.im + dy);
            b = Some(match b {
                None => cell,
                Some(o) => (o.0.min(cell.0), o.1.max(cell.1), o.2.min(cell.2), o.3.max(cell.3)),
            });
        }
        b
    }
}

/// `x` rounded down to a multiple of `2^{-k}`.
fn round_dyadic(x: &BigRational, k: i64) -> BigRational {
    let scale = pow2(k);
    (x * &scale).floor() / scale
}

fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Binary exponent `k` with `2^{-k}` about `s·2^{-40}`.
fn grid_bits(s: &BigRational) -> i64 {
    40 - (ln_rat(s) / std::f64::consts::LN_2).floor() as i64
}

const REAPPLY: usize = 48;

/// Shrinks the frame to the bounding box of its survivors while that
/// removes at least a quarter of the width.
fn zoom(frame: &mut Frame, cons: &[Constraint], real: bool, target: &BigRational, eta: &BigRational, stats: &mut ShrinkStats) {
    loop {
        if &frame.hx <= target && &frame.hy <= target {
            return;
        }
        let Some((x0, x1, y0, y1)) = frame.bbox() else { return };
        let (hx, hy) = ((x1 - x0) / 2.0, (y1 - y0) / 2.0);
        if hx.max(hy) > 0.75 {
            return;
        }
        let k = grid_bits(&frame.s);
        let slack = pow2(-k + 1);
        let cre = round_dyadic(&(&frame.c.re + &frame.s * from_f64((x0 + x1) / 2.0)), k);
        let cim = if real { BigRational::zero() } else { round_dyadic(&(&frame.c.im + &frame.s * from_f64((y0 + y1) / 2.0)), k) };
        let grow = 1.0 + 1e-9;
        let nhx = round_dyadic(&(&frame.s * from_f64(hx * grow)), k) + &slack;
        let nhy = if real { BigRational::zero() } else { round_dyadic(&(&frame.s * from_f64(hy * grow)), k) + &slack };
        *frame = Frame::new(Q::new(cre, cim), nhx, nhy, real, eta);
        stats.zooms += 1;
        // dropping old constraints only keeps extra cells alive
        for con in cons.iter().rev().take(REAPPLY) {
            frame.apply(con);
            if frame.alive_count() == 0 {
                return;
            }
        }
    }
}

/// Finds `−B/A` to within `δ/2` (sup norm) or decides `A = 0`, given a
/// query returning an approximation of `A·w + B` at some exact `w` within
/// `ε` of the requested point. `|A|, |B| ≤ C`, each 0 or at least `1/C`.
pub fn box_shrink<F>(mut query: F, params: &ShrinkParams) -> Result<(Shrink, ShrinkStats), ReductionError>
where
    F: FnMut(&Q, &BigRational) -> Result<Probe, ReductionError>,
{
    let c2 = BigRational::from_integer(&params.c * &params.c);
    let ln_c2 = ln_rat(&c2);
    let mut stats = ShrinkStats {
        log2_range: (log_big(&params.c) - ln_rat(&params.delta)) / std::f64::consts::LN_2,
        ..Default::default()
    };
    let budget = params.max_queries.unwrap_or(40 + (12.0 * stats.log2_range) as usize);
    let env = params.envelope;
    let mut ask = |y: &Q, eps: &BigRational, stats: &mut ShrinkStats| {
        stats.queries += 1;
        if stats.queries > budget {
            return Err(ReductionError::QueryBudget(budget));
        }
        query(y, eps)
    };

    // anchors: two near points and ±F with F ≥ 2^{12}·C²
    let far_bits = (ln_c2 / std::f64::consts::LN_2).ceil() as i64 + 14;
    let far = pow2(far_bits);
    let one = BigRational::one();
    let near = [Q::from_frac(1, 2, 0, 1), Q::from_frac(-1, 3, 0, 1)];
    let mut anchors = Vec::new();
    for y in &near {
        anchors.push(ask(y, &BigRational::new(1.into(), 16.into()), &mut stats)?);
    }
    let fp = ask(&Q::real(far.clone()), &one, &mut stats)?;
    let fm = ask(&Q::real(-far.clone()), &one, &mut stats)?;
    anchors.push(fp.clone());
    anchors.push(fm);

    let a_nonzero = match params.mode {
        OracleMode::Abs => {
            let lns: Vec<f64> = anchors.iter().map(|p| as_ln(&p.answer)).collect();
            let hi = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = lns.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo > 2.0 * env + 1e-9
        }
        OracleMode::Arg => {
            let th: Vec<f64> = anchors.iter().map(|p| as_arg(&p.answer)).collect();
            th.iter().any(|a| th.iter().any(|b| ang_dist(*a, *b) > 2.0 * env + 1e-9))
        }
    };
    if !a_nonzero {
        return Ok((Shrink::AZero, stats));
    }

    // |w_F − root| = |w_F|·(1 ± C²/|w_F|)
    let ln_wf = ln_abs(&fp.w);
    let rel = (ln_c2 - ln_wf).exp();
    let sigma_abs = 2.0 * env - (1.0 - rel).ln() + 1e-9;
    let sigma_arg = 2.0 * env + rel.min(1.0).asin() * 1.01 + 1e-9;
    let ln_a = as_ln(&fp.answer) - ln_wf;
    let arg_a = match fp.answer {
        LinearAnswer::Arg(t) => t - arg(&fp.w),
        LinearAnswer::LnAbs(_) => 0.0,
    };
    // constraint points are rounded to multiples of η = 2^{-eta_bits} ≤ δ·2^{-24}
    let eta_bits = 24 - (ln_rat(&params.delta) / std::f64::consts::LN_2).floor() as i64;
    let eta = pow2(-eta_bits);
    let to_constraint = |p: &Probe| -> Constraint {
        let kind = match p.answer {
            LinearAnswer::LnAbs(l) => {
                let d = l - ln_a;
                Kind::Ring { lo: d - sigma_abs, hi: d + sigma_abs }
            }
            LinearAnswer::Arg(t) => Kind::Wedge { dir: t - arg_a + PI, half: sigma_arg },
        };
        let w = Q::new(round_dyadic(&p.w.re, eta_bits), round_dyadic(&p.w.im, eta_bits));
        Constraint { w, kind }
    };

    let mut probes: Vec<Probe> = anchors;
    let mut cons: Vec<Constraint> = probes.iter().map(to_constraint).collect();
    let c2h = c2.clone();
    let mut frame = Frame::new(Q::nil(), c2h.clone(), if params.real { BigRational::zero() } else { c2h }, params.real, &eta);
    let target = &params.delta / BigRational::from_integer(2.into());
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for con in &cons {
        frame.apply(con);
    }
    loop {
        zoom(&mut frame, &cons, params.real, &target, &eta, &mut stats);
        if frame.alive_count() == 0 {
            return fallback(&frame, &probes, &cons).map(|y| (Shrink::Root(y), stats.clone()));
        }
        if frame.hx <= target && frame.hy <= target {
            return Ok((Shrink::Root(frame.c.clone()), stats));
        }
        // probe at the surviving cell nearest the centroid, jittered
        let cells: Vec<(Complex64, f64)> =
            (0..frame.alive.len()).filter(|&k| frame.alive[k]).map(|k| frame.cell(k)).collect();
        let cen = cells.iter().map(|c| c.0).sum::<Complex64>() / cells.len() as f64;
        let (mut pick, _) = cells[0];
        for (c, _) in &cells {
            if (c - cen).norm() < (pick - cen).norm() {
                pick = *c;
            }
        }
        let (hx, hy) = frame.half_local();
        let jx = rng.gen_range(-0.25..0.25) * hx / frame.nx as f64;
        let jy = if params.real { 0.0 } else { rng.gen_range(-0.25..0.25) * hy / frame.ny as f64 };
        let k = grid_bits(&frame.s);
        let yre = round_dyadic(&(&frame.c.re + &frame.s * from_f64(pick.re + jx)), k);
        let yim = if params.real { BigRational::zero() } else { round_dyadic(&(&frame.c.im + &frame.s * from_f64(pick.im + jy)), k) };
        let eps = &frame.s / BigRational::from_integer(4.into());
        let p = ask(&Q::new(yre, yim), &eps, &mut stats)?;
        let con = to_constraint(&p);
        frame.apply(&con);
        cons.push(con);
        probes.push(p);
    }
}

fn as_ln(a: &LinearAnswer) -> f64 {
    match a {
        LinearAnswer::LnAbs(l) => *l,
        LinearAnswer::Arg(_) => 0.0,
    }
}

fn as_arg(a: &LinearAnswer) -> f64 {
    match a {
        LinearAnswer::Arg(t) => *t,
        LinearAnswer::LnAbs(_) => 0.0,
    }
}

/// Every cell died, so some answer was not faithful. With a faithful
/// oracle that only happens when a query point is the root itself.
fn fallback(frame: &Frame, probes: &[Probe], cons: &[Constraint]) -> Result<Q, ReductionError> {
    for j in (0..probes.len()).rev() {
        let Some(wl) = frame.local(&probes[j].w) else { continue };
        let ok = cons.iter().enumerate().all(|(i, con)| i == j || frame.admits(con, frame.local(&con.w), wl, 0.0));
        if ok {
            return Ok(probes[j].w.clone());
        }
    }
    Err(ReductionError::Inconsistent(format!("no point is compatible with the {} answers", probes.len())))
}
