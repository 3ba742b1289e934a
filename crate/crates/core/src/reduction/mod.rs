//! Recovering exact reliabilities from coarse approximations: simulated
//! oracles, the shifted linear form, box shrinking, exact ratios and
//! telescoping.

pub mod shrink;

use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructor::{construct_interaction, precompute, ConstructError, CoverCertificate, Strategy};
use crate::graph::{substitute, Assignment, GraphError, Multigraph, TwoTerminal};
use crate::numeric::reconstruct::{reconstruct_gauss, reconstruct_rational};
use crate::numeric::{AlgebraicBound, Field, GaussianRational, Ring};
use crate::reliability::{eval_delcon, RelPair};

pub use shrink::{box_shrink, LinearAnswer, Probe, Shrink, ShrinkParams, ShrinkStats};
use shrink::{arg, ln_abs, ln_rat};

type Q = GaussianRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("oracle input has {edges} edges; exact evaluation is capped at {cap}")]
    CapExceeded { edges: usize, cap: usize },
    #[error("gadget has R = 0")]
    ZeroGadget,
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("oracle answers are inconsistent: {0}")]
    Inconsistent(String),
    #[error("query budget of {0} exhausted")]
    QueryBudget(usize),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Abs,
    Arg,
}

impl FromStr for OracleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abs" => Ok(OracleMode::Abs),
            "arg" => Ok(OracleMode::Arg),
            _ => Err(format!("unknown oracle mode {s:?} (expected abs or arg)")),
        }
    }
}

impl std::fmt::Display for OracleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleMode::Abs => "abs",
            OracleMode::Arg => "arg",
        })
    }
}

/// A value returned by an oracle. `flagged` marks answers to graphs with
/// `R = 0`; consumers must not rely on it.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleAnswer {
    pub value: BigRational,
    pub flagged: bool,
}

/// Deterministic adversarial oracle: exact evaluation followed by a
/// perturbation inside the envelope, seeded by the graph and the seed.
#[derive(Debug)]
pub struct ApproxOracle {
    pub p: Q,
    pub mode: OracleMode,
    pub seed: u64,
    /// Abs answers lie in `|R|·e^{±r}`, arg answers within `r` of `arg R`.
    pub envelope: f64,
    pub cap: usize,
    queries: AtomicUsize,
}

pub const DEFAULT_ENVELOPE: f64 = 0.25;
pub const ORACLE_EDGE_CAP: usize = 200_000;

pub fn simulated_oracle(p: &Q, mode: OracleMode, seed: u64) -> Result<ApproxOracle, ReductionError> {
    if p.is_nil() || p == &Q::ident() {
        return Err(ReductionError::InvalidParameter(format!("p = {p} must avoid 0 and 1")));
    }
    Ok(ApproxOracle { p: p.clone(), mode, seed, envelope: DEFAULT_ENVELOPE, cap: ORACLE_EDGE_CAP, queries: AtomicUsize::new(0) })
}

/// `e^t` as a dyadic rational, to about 50 bits.
fn exp_rat(t: f64) -> BigRational {
    let k = (t / std::f64::consts::LN_2).floor();
    let mant = (t - k * std::f64::consts::LN_2).exp();
    let m = BigRational::from_float(mant).unwrap();
    let k = k as i64;
    let two = BigInt::from(2);
    if k >= 0 {
        m * BigRational::from_integer(num_traits::pow(two, k as usize))
    } else {
        m / BigRational::from_integer(num_traits::pow(two, (-k) as usize))
    }
}

fn wrap(t: f64) -> f64 {
    let w = (t + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    if w <= -std::f64::consts::PI {
        w + 2.0 * std::f64::consts::PI
    } else {
        w
    }
}

fn graph_seed(seed: u64, h: &Multigraph) -> u64 {
    let mut s = std::collections::hash_map::DefaultHasher::new();
    seed.hash(&mut s);
    h.n.hash(&mut s);
    h.edges.hash(&mut s);
    s.finish()
}

impl ApproxOracle {
    pub fn with_envelope(mut self, r: f64) -> Self {
        self.envelope = r;
        self
    }

    pub fn queries(&self) -> usize {
        self.queries.load(Ordering::Relaxed)
    }

    /// Exact `R(H;p)`.
    pub fn exact(&self, h: &Multigraph) -> Result<Q, ReductionError> {
        if h.edge_count() > self.cap {
            return Err(ReductionError::CapExceeded { edges: h.edge_count(), cap: self.cap });
        }
        Ok(eval_delcon(h, &self.p))
    }

    pub fn answer(&self, h: &Multigraph) -> Result<OracleAnswer, ReductionError> {
        let r = self.exact(h)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        let mut rng = ChaCha8Rng::seed_from_u64(graph_seed(self.seed, h));
        if r.is_nil() {
            let value = match self.mode {
                OracleMode::Abs => exp_rat(rng.gen_range(-20.0..20.0)),
                OracleMode::Arg => BigRational::from_float(rng.gen_range(-3.14..3.14)).unwrap(),
            };
            return Ok(OracleAnswer { value, flagged: true });
        }
        // push toward either edge of the envelope, or anywhere inside
        let u = match rng.gen_range(0..3) {
            0 => 0.999,
            1 => -0.999,
            _ => rng.gen_range(-0.999..0.999),
        };
        let value = match self.mode {
            OracleMode::Abs => exp_rat(ln_abs(&r) + u * self.envelope),
            OracleMode::Arg => BigRational::from_float(wrap(arg(&r) + u * self.envelope)).unwrap(),
        };
        Ok(OracleAnswer { value, flagged: false })
    }
}

/// Approximation of `R(H;p) + (y_G − (p+1))·R(H∖e;p)` from one oracle call
/// on `H` with `e` replaced by `G`, rescaled by the exact `(1−p)/R(G;p)`.
pub fn shifted_eval(
    h: &Multigraph,
    e: usize,
    g: &TwoTerminal,
    pair_g: &RelPair<Q>,
    oracle: &ApproxOracle,
) -> Result<LinearAnswer, ReductionError> {
    shifted_eval_amplified(h, e, g, pair_g, oracle, 1)
}

/// `k` copies glued at vertex 0, so `R(G^{(k)}) = R(G)^k`.
pub fn one_sum_power(g: &Multigraph, k: usize) -> Multigraph {
    let mut acc = g.clone();
    for _ in 1..k {
        let n = acc.n;
        acc = acc.disjoint_union(g).merge_vertices(0, n);
    }
    acc
}

/// As [`shifted_eval`], but the single oracle call is made on the `k`-fold
/// one-vertex join of the substituted graph and the modulus answer is
/// rooted, which divides the abs envelope by `k`. Arg answers only admit
/// `k = 1`.
pub fn shifted_eval_amplified(
    h: &Multigraph,
    e: usize,
    g: &TwoTerminal,
    pair_g: &RelPair<Q>,
    oracle: &ApproxOracle,
    k: usize,
) -> Result<LinearAnswer, ReductionError> {
    if k == 0 || (k > 1 && oracle.mode == OracleMode::Arg) {
        return Err(ReductionError::InvalidParameter(format!("amplification {k} in {} mode", oracle.mode)));
    }
    let scale = Q::ident().sub(&oracle.p).div(&pair_g.r).ok_or(ReductionError::ZeroGadget)?;
    let sub = substitute(h, Assignment::One(e, g))?;
    let ans = oracle.answer(&one_sum_power(&sub, k))?;
    Ok(match oracle.mode {
        OracleMode::Abs => {
            let v = if ans.value.is_positive() { ln_rat(&ans.value) } else { f64::NEG_INFINITY };
            LinearAnswer::LnAbs(v / k as f64 + ln_abs(&scale))
        }
        OracleMode::Arg => LinearAnswer::Arg(ans.value.to_f64().unwrap_or(0.0) + arg(&scale)),
    })
}

/// Magnitude bound `C` for reliabilities of `m`-edge graphs at `p`.
pub fn height_bound(m: u32, p: &Q) -> AlgebraicBound {
    AlgebraicBound::new(p, m)
}

/// A rational `δ ≤ e^{−(d²+5d)}·C^{−2}`.
pub fn separation(bound: &AlgebraicBound) -> BigRational {
    let d = bound.d as f64;
    let k = ((d * d + 5.0 * d).exp().ceil() as u64) + 1;
    BigRational::new(BigInt::one(), BigInt::from(k) * &bound.c * &bound.c)
}

/// Denominator bound for the coordinates of `R(F)/R(F∖e)` when `F` has `m`
/// edges: with `p = P/q` the ratio is `R̃_F / (q·R̃_{F∖e})` with
/// `|R̃_{F∖e}| ≤ (|P| + |q−P|)^{m−1}`.
pub fn ratio_denominator_bound(m: u32, p: &Q) -> BigInt {
    let (num, den) = p.to_homogeneous();
    let l1 = |re: &BigInt, im: &BigInt| re.abs() + im.abs();
    let k = l1(&num.re, &num.im) + l1(&(&den - &num.re), &num.im);
    let e = m.saturating_sub(1) as usize;
    if p.is_real() {
        den * num_traits::pow(k, e)
    } else {
        den * num_traits::pow(k, 2 * e)
    }
}

/// Theorem-style answer for one edge: `b = 1` with `r = R(F)/R(F∖e)`, or
/// `b = 0` with `r = 1 − p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioAnswer {
    pub r: Q,
    pub b: u8,
}

/// How a ratio was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "detail")]
pub enum Outcome {
    Loop,
    AZero,
    Reconstructed,
    /// Answers left no consistent root; only possible when `R(F∖e)` and
    /// `R(F/e)` both vanish, where any answer is acceptable.
    Degenerate(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub answer: RatioAnswer,
    pub outcome: Outcome,
    pub queries: usize,
    pub log2_range: f64,
}

#[derive(Clone, Debug)]
pub struct ReduceConfig {
    /// Envelope assumed by the search; must dominate the oracle's.
    pub envelope: f64,
    pub strategy: Strategy,
    pub max_queries: Option<usize>,
    /// Copies per abs query; arg queries always use one.
    pub amplify: usize,
}

pub const DEFAULT_AMPLIFY: usize = 4;

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { envelope: DEFAULT_ENVELOPE, strategy: Strategy::Offset, max_queries: None, amplify: DEFAULT_AMPLIFY }
    }
}

/// Everything a ratio computation needs at a fixed parameter.
#[derive(Debug)]
pub struct Reducer {
    pub cert: CoverCertificate,
    pub oracle: ApproxOracle,
    pub config: ReduceConfig,
}

impl Reducer {
    pub fn new(g0: &TwoTerminal, oracle: ApproxOracle) -> Result<Self, ReductionError> {
        let cert = precompute(g0, &oracle.p)?;
        Ok(Reducer { cert, oracle, config: ReduceConfig::default() })
    }

    pub fn amplification(&self) -> usize {
        match self.oracle.mode {
            OracleMode::Abs => self.config.amplify.max(1),
            OracleMode::Arg => 1,
        }
    }

    pub fn p(&self) -> &Q {
        &self.oracle.p
    }

    pub fn ratio(&self, f: &Multigraph, e: usize) -> Result<RatioReport, ReductionError> {
        compute_ratio(f, e, self)
    }

    /// `R(F;p)` from oracle answers only.
    pub fn reduce(&self, f: &Multigraph) -> Result<(Telescoped, Vec<RatioReport>), ReductionError> {
        let mut reports = Vec::new();
        let t = telescope(f, |g, e| {
            let rep = self.ratio(g, e)?;
            let a = rep.answer.clone();
            reports.push(rep);
            Ok(a)
        })?;
        Ok((t, reports))
    }
}

/// `(r, b)` for the edge `e` of `F`, from oracle answers on graphs with
/// `e` replaced by constructed gadgets.
pub fn compute_ratio(f: &Multigraph, e: usize, red: &Reducer) -> Result<RatioReport, ReductionError> {
    if e >= f.edge_count() {
        return Err(GraphError::EdgeOutOfRange(e).into());
    }
    let p = red.p().clone();
    if f.is_loop(e) {
        // R(F) = R(F∖e) and F/e = F∖e
        return Ok(RatioReport { answer: RatioAnswer { r: Q::ident(), b: 1 }, outcome: Outcome::Loop, queries: 0, log2_range: 0.0 });
    }
    let m = f.edge_count() as u32;
    let bound = height_bound(m, &p);
    let k = red.amplification();
    let params = ShrinkParams {
        delta: separation(&bound),
        c: bound.c.clone(),
        mode: red.oracle.mode,
        envelope: red.config.envelope / k as f64,
        real: red.cert.real,
        seed: graph_seed(red.oracle.seed ^ 0x5eed, f) ^ e as u64,
        max_queries: red.config.max_queries,
    };
    let cert = &red.cert;
    let query = |y0: &Q, eps: &BigRational| -> Result<Probe, ReductionError> {
        let res = construct_interaction(cert, y0, eps, red.config.strategy)?;
        let g = res.expr.realize(&cert.base.g0);
        let answer = shifted_eval_amplified(f, e, &g, &res.pair, &red.oracle, k)?;
        Ok(Probe { w: res.offset(&p), answer })
    };
    let one_minus_p = Q::ident().sub(&p);
    let degenerate = |msg: String, queries: usize, log2_range: f64| RatioReport {
        answer: RatioAnswer { r: Q::nil(), b: 1 },
        outcome: Outcome::Degenerate(msg),
        queries,
        log2_range,
    };
    match box_shrink(query, &params) {
        Ok((Shrink::AZero, st)) => Ok(RatioReport {
            answer: RatioAnswer { r: one_minus_p, b: 0 },
            outcome: Outcome::AZero,
            queries: st.queries,
            log2_range: st.log2_range,
        }),
        Ok((Shrink::Root(y), st)) => {
            let n = ratio_denominator_bound(m, &p);
            let rec = if cert.real {
                reconstruct_rational(&y.re, &n).map(Q::real).ok_or_else(|| format!("no fraction with denominator ≤ {n}"))
            } else {
                reconstruct_gauss(&y, &n).map_err(|e| e.to_string())
            };
            match rec {
                Ok(z) => Ok(RatioReport {
                    answer: RatioAnswer { r: z.neg(), b: 1 },
                    outcome: Outcome::Reconstructed,
                    queries: st.queries,
                    log2_range: st.log2_range,
                }),
                Err(msg) => Ok(degenerate(msg, st.queries, st.log2_range)),
            }
        }
        Err(ReductionError::Inconsistent(msg)) => Ok(degenerate(msg, 0, 0.0)),
        Err(ReductionError::QueryBudget(b)) => Ok(degenerate(format!("budget {b}"), b, 0.0)),
        Err(err) => Err(err),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TelescopeStep {
    /// Edge count of `G_i`.
    pub edges: usize,
    /// Endpoints of `e_i` in `G_i`.
    pub edge: (usize, usize),
    pub b: u8,
    pub r: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Telescoped {
    pub value: Q,
    pub steps: Vec<TelescopeStep>,
    /// `R` of the final edgeless graph.
    pub c: u8,
}

/// `R(F;p) = c·∏ rᵢ` along the delete/contract sequence chosen by the
/// ratio answers, always on the first remaining edge.
pub fn telescope<F>(f: &Multigraph, mut ratio: F) -> Result<Telescoped, ReductionError>
where
    F: FnMut(&Multigraph, usize) -> Result<RatioAnswer, ReductionError>,
{
    let mut g = f.clone();
    let mut steps = Vec::new();
    let mut prod = Q::ident();
    while g.edge_count() > 0 {
        let RatioAnswer { r, b } = ratio(&g, 0)?;
        steps.push(TelescopeStep { edges: g.edge_count(), edge: g.edges[0], b, r: r.clone() });
        prod = prod.mul(&r);
        g = if b == 1 { g.delete_edge(0) } else { g.contract_edge(0) };
    }
    let c = u8::from(g.n == 1);
    let value = if c == 1 { prod } else { Q::nil() };
    Ok(Telescoped { value, steps, c })
}
