//! Approximating a prescribed edge interaction by a series–parallel
//! composition of a base gadget.

pub mod cover;
pub mod gadget;
pub mod path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::graph::{SPExpr, TwoTerminal};
use crate::interactions::Ext;
use crate::numeric::{BigFloat, Field, GaussianRational, Ring, Round};
use crate::reliability::{eval_sp, RelPair};

pub use cover::{precompute, CoverCertificate, Member};
pub use gadget::{Base, Gadget};
pub use path::{path_find, PathResult};

type Q = GaussianRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("precondition unverified: no active composition found within the search budget")]
    PreconditionUnverified,
    #[error("cover search exhausted: {0}")]
    CoverSearchExhausted(String),
    #[error("target {0} is not real but every interaction at a real parameter is")]
    TargetNotReal(String),
    #[error("accuracy must be positive")]
    NonPositiveEps,
    #[error("target not in the start disk")]
    TargetOutsideDisk,
    #[error("backward orbit left the covered disk after {0} steps")]
    OrbitEscaped(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// How far-away targets are brought into the disk around 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Subtract exact offsets of small gadgets in series, then run the
    /// orbit search at full accuracy.
    #[default]
    Offset,
    /// Split into `n` equal series parts, or pull back by the parallel map.
    Paper,
}

/// Which construction produced a result, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "case")]
pub enum Step {
    Exact,
    Orbit { steps: usize },
    Offset { parts: usize },
    Split { n: usize },
    Pullback { i: usize },
}

#[derive(Clone, Debug)]
pub struct ConstructResult {
    pub expr: SPExpr,
    /// Exact `(R, S)` at `p`.
    pub pair: RelPair<Q>,
    pub y: Q,
    /// Upper bound on `|y − (p+1) − y₀|`.
    pub error: BigRational,
    pub size: usize,
    pub steps: Vec<Step>,
}

/// Upper bound on `sqrt(x)` as a rational.
pub(crate) fn sqrt_up(x: &BigRational) -> BigRational {
    let f = BigFloat::from_rational(x, 64, Round::Up);
    f.sqrt(64, Round::Up).to_rational()
}

pub(crate) fn rat(x: &BigRational) -> Q {
    Q::real(x.clone())
}

pub(crate) fn ln_rat(x: &BigRational) -> f64 {
    crate::numeric::height::log_big(&x.numer().abs()) - crate::numeric::height::log_big(x.denom())
}

/// `2^{-k}` as a rational.
pub(crate) fn pow2_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Construct with a fresh certificate.
pub fn construct(g0: &TwoTerminal, p: &Q, y0: &Q, eps: &BigRational) -> Result<ConstructResult, ConstructError> {
    let cert = precompute(g0, p)?;
    construct_interaction(&cert, y0, eps, Strategy::default())
}

/// Expression `G` over the base gadget with `|y_G(p) − (p+1) − y₀| < ε`
/// and `R(G;p) ≠ 0`.
pub fn construct_interaction(
    cert: &CoverCertificate,
    y0: &Q,
    eps: &BigRational,
    strategy: Strategy,
) -> Result<ConstructResult, ConstructError> {
    if !eps.is_positive() {
        return Err(ConstructError::NonPositiveEps);
    }
    if cert.real && !y0.is_real() {
        return Err(ConstructError::TargetNotReal(y0.to_string()));
    }
    let base = &cert.base;
    let omega = y0.add(&Q::ident()).add(&base.p);
    let mut steps = Vec::new();
    let g = build(cert, &omega, eps, strategy, &mut steps, 0)?;
    // independent re-evaluation from the expression, homogeneous to avoid gcds
    let hpair = eval_sp(&g.expr, &base.g0_hpair);
    let scale = num_traits::pow(base.den.clone(), base.edges(&g));
    let pair = hpair.map(|x| Q::from_homogeneous(x, &scale));
    if pair.r.is_nil() {
        return Err(ConstructError::VerificationFailed("R vanishes".into()));
    }
    let y = Q::ident().sub(&base.p).mul(&pair.s).div(&pair.r).unwrap().add(&Q::ident());
    let d2 = y.dist_sq(&omega);
    if d2 >= eps * eps {
        return Err(ConstructError::VerificationFailed(format!("error² {} ≥ ε²", d2)));
    }
    if base.y(&g).finite() != Some(&y) {
        return Err(ConstructError::VerificationFailed("tracked pair disagrees with re-evaluation".into()));
    }
    let mut error = sqrt_up(&d2);
    if &error >= eps {
        error = eps.clone();
    }
    Ok(ConstructResult { size: g.expr.leaves(), expr: g.expr, pair, y, error, steps })
}

const MAX_DEPTH: usize = 4;

fn build(
    cert: &CoverCertificate,
    omega: &Q,
    eps: &BigRational,
    strategy: Strategy,
    steps: &mut Vec<Step>,
    depth: usize,
) -> Result<Gadget, ConstructError> {
    if let Some(m) = cert.pool.iter().find(|m| &m.y == omega) {
        steps.push(Step::Exact);
        return Ok(m.gadget.clone());
    }
    let base = &cert.base;
    let one = Q::ident();
    let r2 = &cert.r * &cert.r;
    let near_one = omega.dist_sq(&one);
    if near_one <= r2 {
        return case_orbit(cert, omega, eps, steps);
    }
    let near_p = omega.dist_sq(&base.p) <= BigRational::from_integer(4.into());
    match strategy {
        Strategy::Offset => {
            if near_p || near_one <= BigRational::from_integer(256.into()) {
                if let Some(g) = case_offset(cert, omega, eps, steps)? {
                    return Ok(g);
                }
            }
            if near_p {
                return case_split(cert, omega, eps, steps);
            }
        }
        Strategy::Paper => {
            if near_p {
                return case_split(cert, omega, eps, steps);
            }
        }
    }
    if depth >= MAX_DEPTH {
        return Err(ConstructError::VerificationFailed("pullback recursion too deep".into()));
    }
    case_pullback(cert, omega, eps, strategy, steps, depth)
}

/// Target in the disk around 1: follow a backward orbit of the family.
fn case_orbit(cert: &CoverCertificate, u: &Q, eps: &BigRational, steps: &mut Vec<Step>) -> Result<Gadget, ConstructError> {
    let path = path_find(cert, u, eps)?;
    steps.push(Step::Orbit { steps: path.indices.len() });
    chain(cert, &path.indices)
}

/// `H₀ = start`, `H_j = (H_{j−1} ∥ W) ⋈ G_{i_j}` with indices applied
/// innermost first. Fails if some `R(H_j)` vanishes.
pub fn chain(cert: &CoverCertificate, indices: &[usize]) -> Result<Gadget, ConstructError> {
    let base = &cert.base;
    let mut h = cert.start.gadget.clone();
    for &i in indices.iter().rev() {
        h = base.series_into(base.parallel_into(h, &cert.work), &cert.family[i].gadget);
        if h.hpair.r.is_nil() {
            return Err(ConstructError::VerificationFailed("R vanished along the chain".into()));
        }
    }
    Ok(h)
}

/// Greedily subtract exact pool offsets until the remainder is within
/// `r/2` of 0, then solve the remainder at full accuracy.
fn case_offset(
    cert: &CoverCertificate,
    omega: &Q,
    eps: &BigRational,
    steps: &mut Vec<Step>,
) -> Result<Option<Gadget>, ConstructError> {
    let half = &cert.r / BigRational::from_integer(2.into());
    let goal = &half * &half;
    let mut rem = omega.sub(&Q::ident());
    let mut parts: Vec<usize> = Vec::new();
    while rem.norm_sq() > goal {
        let cur = rem.norm_sq();
        let best = cert
            .pool
            .iter()
            .enumerate()
            .map(|(k, m)| (k, rem.sub(&m.v).norm_sq()))
            .min_by(|a, b| a.1.cmp(&b.1));
        match best {
            Some((k, d)) if d < cur => {
                rem = rem.sub(&cert.pool[k].v);
                parts.push(k);
            }
            _ => return Ok(None),
        }
        if parts.len() > 100_000 {
            return Ok(None);
        }
    }
    steps.push(Step::Offset { parts: parts.len() });
    let u = rem.add(&Q::ident());
    let base = &cert.base;
    let mut g = case_orbit(cert, &u, eps, steps)?;
    for k in parts {
        g = base.series_into(g, &cert.pool[k].gadget);
    }
    Ok(Some(g))
}

/// `n`-fold series of a solution for `1 + (ω−1)/n` at accuracy `ε/n`.
fn case_split(cert: &CoverCertificate, omega: &Q, eps: &BigRational, steps: &mut Vec<Step>) -> Result<Gadget, ConstructError> {
    let dist = sqrt_up(&omega.dist_sq(&Q::ident()));
    let n = (dist / &cert.r).floor().to_integer() + BigInt::one();
    let n = n.to_usize().ok_or_else(|| ConstructError::InvalidParameter("target too far".into()))?;
    let nq = BigRational::from_integer(n.into());
    let u = omega.sub(&Q::ident()).scale(&nq.recip()).add(&Q::ident());
    steps.push(Step::Split { n });
    let h = case_orbit(cert, &u, &(eps / &nq), steps)?;
    Ok(cert.base.series_pow(&h, n))
}

/// Pull the target back by `g^{-1}` until it lies within 2 of `p`, solve
/// there at a tighter accuracy and push forward with `∥ W`.
fn case_pullback(
    cert: &CoverCertificate,
    omega: &Q,
    eps: &BigRational,
    strategy: Strategy,
    steps: &mut Vec<Step>,
    depth: usize,
) -> Result<Gadget, ConstructError> {
    let base = &cert.base;
    let ginv = cert.g.inverse();
    let four = BigRational::from_integer(4.into());
    let mut orbit = vec![omega.clone()];
    loop {
        let x = orbit.last().unwrap();
        if x.dist_sq(&base.p) <= four {
            break;
        }
        if orbit.len() > 4096 {
            return Err(ConstructError::VerificationFailed("pullback did not reach the disk around p".into()));
        }
        let next = ginv.apply_finite(x).finite().cloned();
        match next {
            Some(n) => orbit.push(n),
            None => return Err(ConstructError::VerificationFailed("pullback hit the pole".into())),
        }
    }
    let i = orbit.len() - 1;
    let x0 = orbit[i].clone();
    // |(g^i)'(x0)| along the forward orbit x_i → … → x_0 = ω
    // exact, since orbit points can sit very close to the pole
    let ln_det = 0.5 * ln_rat(&cert.g.det().norm_sq());
    let mut log_d = 0.0;
    for x in &orbit[1..] {
        let den = cert.g.c.mul(x).add(&cert.g.d);
        log_d += ln_det - ln_rat(&den.norm_sq());
    }
    let mut k = ((log_d / std::f64::consts::LN_2 + 1.0).ceil().max(0.0) as u32).saturating_add(1);
    let mut last = None;
    for _ in 0..8 {
        let local_eps = eps * pow2_neg(k);
        let mut sub = Vec::new();
        let h = build(cert, &x0, &local_eps, strategy, &mut sub, depth + 1)?;
        let mut g = h;
        for _ in 0..i {
            g = base.parallel_into(g, &cert.work);
        }
        if let Ext::Finite(y) = base.y(&g) {
            if y.dist_sq(omega) < eps * eps && !g.hpair.r.is_nil() {
                steps.push(Step::Pullback { i });
                steps.extend(sub);
                return Ok(g);
            }
        }
        last = Some(k);
        k += 4;
    }
    Err(ConstructError::VerificationFailed(format!("pullback accuracy 2^-{} insufficient", last.unwrap_or(0))))
}

impl ConstructResult {
    /// `y − (p+1)`, the interaction relative to a single edge.
    pub fn offset(&self, p: &Q) -> Q {
        self.y.sub(&Q::ident()).sub(p)
    }
}

#[cfg(test)]
mod tests;
