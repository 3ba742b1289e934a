use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::graph::{SPExpr, TwoTerminal};
use crate::interactions::{classify_point, closed_forms, is_exceptional, yhat_of, Ext, PointClass};
use crate::numeric::GaussianRational as Q;
use crate::reliability::{eval_pair_delcon, eval_sp, RelPair};

use super::unity::{unity_gadget, unity_polys};
use super::{sample_at, LocusClass, LocusError, LocusSample, Region};

pub const MAX_BUDGET: usize = 10_000;
const MAX_WORD_LEAVES: usize = 16;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Composition words tried per point, at most 10⁴.
    pub budget: usize,
    /// Activity means `ŷ < −1` instead of `1 < |ŷ| < ∞, ŷ ∉ ℝ`.
    pub real_mode: bool,
    /// Largest series and parallel counts in the targeted family.
    pub family: u64,
    /// Try the root-of-unity gadgets (only over a single-edge base).
    pub seeds: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { budget: 2000, real_mode: false, family: 12, seeds: true }
    }
}

/// What made a point active or a zero.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Sp(SPExpr),
    /// One of the gadgets `G₅ … G₉` over single edges.
    Unity(u32),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Sp(e) => write!(f, "{e}"),
            Witness::Unity(k) => write!(f, "G{k}"),
        }
    }
}

fn is_single_edge(g: &TwoTerminal) -> bool {
    g.graph.n == 2 && g.graph.edges.len() == 1 && g.s != g.t && !g.graph.is_loop(0)
}

/// Recomputes the pair of a witness from the graph it denotes.
fn fresh_pair(g0: &TwoTerminal, w: &Witness, p: &Q) -> RelPair<Q> {
    match w {
        Witness::Sp(e) => eval_pair_delcon(&e.realize(g0), p),
        Witness::Unity(k) => eval_pair_delcon(&unity_gadget(*k).expect("k in range"), p),
    }
}

enum Found {
    Active(Witness, Q),
    Zero(Witness),
    Nothing,
}

struct Search<'a> {
    real_mode: bool,
    words: usize,
    budget: usize,
    zero: Option<Witness>,
    g0: &'a TwoTerminal,
    p: &'a Q,
}

impl Search<'_> {
    /// Counts one word; returns an active witness after re-verifying it.
    fn try_word(&mut self, pair: &RelPair<Q>, w: impl FnOnce() -> Witness) -> Option<Found> {
        self.words += 1;
        match classify_point(pair, self.real_mode) {
            PointClass::Active => {
                let w = w();
                let fresh = fresh_pair(self.g0, &w, self.p);
                if classify_point(&fresh, self.real_mode) == PointClass::Active {
                    let y = yhat_of(&fresh).finite().cloned().expect("active has finite ŷ");
                    return Some(Found::Active(w, y));
                }
                None
            }
            PointClass::ZeroWitness if self.zero.is_none() => {
                self.zero = Some(w());
                None
            }
            _ => None,
        }
    }

    fn exhausted(&self) -> bool {
        self.words >= self.budget
    }
}

fn search(g0: &TwoTerminal, base: &RelPair<Q>, p: &Q, cfg: &ScanConfig) -> Found {
    let mut st = Search { real_mode: cfg.real_mode, words: 0, budget: cfg.budget.max(1), zero: None, g0, p };
    if let Some(f) = st.try_word(base, || Witness::Sp(SPExpr::leaf())) {
        return f;
    }
    // n-fold series of m-fold parallels, screened by the closed form of ŷ
    let y0 = yhat_of(base);
    'family: for m in 1..=cfg.family {
        for n in 1..=cfg.family {
            if (n, m) == (1, 1) {
                continue;
            }
            if st.exhausted() {
                break 'family;
            }
            st.words += 1;
            let Ok(Ext::Finite(y)) = closed_forms(&y0, n, m) else { continue };
            let promising = if cfg.real_mode {
                y.is_real() && y.re < num_rational::BigRational::from_integer((-1).into())
            } else {
                !y.is_real() && y.norm_sq() > num_rational::BigRational::from_integer(1.into())
            };
            if promising {
                let e = SPExpr::series_pow(&SPExpr::parallel_pow(&SPExpr::leaf(), m as usize), n as usize);
                let pair = eval_sp(&e, base);
                st.words -= 1;
                if let Some(f) = st.try_word(&pair, || Witness::Sp(e)) {
                    return f;
                }
            }
        }
    }
    if cfg.seeds && is_single_edge(g0) {
        for k in 5..=9 {
            if st.exhausted() {
                break;
            }
            let polys = unity_polys(k).expect("k in range");
            let pair = RelPair::new(polys.r.eval(p), polys.s.eval(p));
            if let Some(f) = st.try_word(&pair, || Witness::Unity(k)) {
                return f;
            }
        }
    }
    // all words by leaf count, deduplicated by their value at p
    let mut seen: HashSet<RelPair<Q>> = HashSet::new();
    seen.insert(base.clone());
    let mut levels: Vec<Vec<(RelPair<Q>, SPExpr)>> = vec![Vec::new(), vec![(base.clone(), SPExpr::leaf())]];
    for size in 2..=MAX_WORD_LEAVES {
        let mut next = Vec::new();
        for a in 1..=size / 2 {
            let b = size - a;
            for i in 0..levels[a].len() {
                let j0 = if a == b { i } else { 0 };
                for j in j0..levels[b].len() {
                    for series in [true, false] {
                        if st.exhausted() {
                            break;
                        }
                        let (pa, ea) = &levels[a][i];
                        let (pb, eb) = &levels[b][j];
                        let pair = if series { pa.series(pb) } else { pa.parallel(pb) };
                        if !seen.insert(pair.clone()) {
                            st.words += 1;
                            continue;
                        }
                        let parts = vec![ea.clone(), eb.clone()];
                        let e = if series { SPExpr::series(parts) } else { SPExpr::parallel(parts) };
                        if let Some(f) = st.try_word(&pair, || Witness::Sp(e.clone())) {
                            return f;
                        }
                        next.push((pair, e));
                    }
                }
            }
        }
        levels.push(next);
        if st.exhausted() {
            break;
        }
    }
    match st.zero {
        Some(w) => Found::Zero(w),
        None => Found::Nothing,
    }
}

/// Classifies one exact parameter value over the base gadget `g0`.
pub fn scan_point(g0: &TwoTerminal, p: &Q, cfg: &ScanConfig) -> LocusSample {
    let base = eval_pair_delcon(g0, p);
    if is_exceptional(&base) {
        let mut s = sample_at(p.clone(), LocusClass::Exceptional);
        s.witness_value = Some("R+S=0".into());
        return s;
    }
    match search(g0, &base, p, cfg) {
        Found::Active(w, y) => {
            let mut s = sample_at(p.clone(), LocusClass::Active);
            s.witness = Some(w.to_string());
            s.witness_value = Some(y.to_string());
            s
        }
        Found::Zero(w) => {
            let mut s = sample_at(p.clone(), LocusClass::Zero);
            s.witness = Some(w.to_string());
            s.witness_value = Some("R=0".into());
            s.residual = Some(0.0);
            s
        }
        Found::Nothing => sample_at(p.clone(), LocusClass::InactiveAtBudget),
    }
}

/// Classifies the `n × n` grid of cell centres of `region` (one row or
/// column when a side is degenerate), in parallel over points.
/// Inactive-at-budget means no witness was found, not that none exists.
pub fn activity_scan(g0: &TwoTerminal, region: &Region, n: usize, cfg: &ScanConfig) -> Result<Vec<LocusSample>, LocusError> {
    if cfg.budget > MAX_BUDGET {
        return Err(LocusError::Budget(cfg.budget));
    }
    Ok(region.grid(n).par_iter().map(|p| scan_point(g0, p, cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn q(s: &str) -> Q {
        crate::numeric::parse::parse_gaussian_decimal(s).unwrap()
    }

    #[test]
    fn scan_examples() {
        let k2 = TwoTerminal::k2();
        let cfg = ScanConfig::default();
        let s = scan_point(&k2, &q("0.5+0.6i"), &cfg);
        assert_eq!((s.class, s.witness.as_deref()), (LocusClass::Active, Some("e")));
        let real = ScanConfig { real_mode: true, budget: 300, ..cfg.clone() };
        let s = scan_point(&k2, &q("1/2"), &real);
        assert_eq!(s.class, LocusClass::InactiveAtBudget);
        // ŷ = 1/p < −1 on (−1, 0)
        assert_eq!(scan_point(&k2, &q("-1/2"), &real).class, LocusClass::Active);
        assert_eq!(scan_point(&k2, &q("1"), &cfg).class, LocusClass::Zero);
    }

    #[test]
    fn seed_witness_outside_the_disk() {
        let z = Complex64::from_polar(1.0005, 2.0 * std::f64::consts::PI / 5.0);
        let p = Q::new(BigRational::from_float(z.re).unwrap(), BigRational::from_float(z.im).unwrap());
        let cfg = ScanConfig { budget: 400, ..Default::default() };
        let s = scan_point(&TwoTerminal::k2(), &p, &cfg);
        assert_eq!(s.class, LocusClass::Active);
        assert_eq!(s.witness.as_deref(), Some("G5"));
        let without = ScanConfig { seeds: false, ..cfg };
        assert_ne!(scan_point(&TwoTerminal::k2(), &p, &without).witness.as_deref(), Some("G5"));
    }

    #[test]
    fn exceptional_base() {
        // two edges in series: R + S = (1 − p)(1 + p)
        let g = TwoTerminal::path(2);
        let s = scan_point(&g, &q("-1"), &ScanConfig::default());
        assert_eq!(s.class, LocusClass::Exceptional);
    }

    #[test]
    fn active_samples_reverify() {
        let g0 = TwoTerminal::path(2);
        let region: Region = "-1.5,1.5,-1.5,1.5".parse().unwrap();
        let cfg = ScanConfig { budget: 200, ..Default::default() };
        let out = activity_scan(&g0, &region, 5, &cfg).unwrap();
        assert_eq!(out.len(), 25);
        for s in out.iter().filter(|s| s.class == LocusClass::Active) {
            let e: SPExpr = s.witness.as_ref().unwrap().parse().unwrap();
            let pair = crate::reliability::eval_sp(&e, &eval_pair_delcon(&g0, &s.point));
            assert_eq!(classify_point(&pair, false), PointClass::Active);
            assert_eq!(yhat_of(&pair).finite().unwrap().to_string(), *s.witness_value.as_ref().unwrap());
        }
        assert!(out.iter().any(|s| s.class == LocusClass::Active));
        assert!(activity_scan(&g0, &region, 2, &ScanConfig { budget: 20_000, ..cfg }).is_err());
    }

    #[test]
    fn real_boundedness_probe_finds_nothing() {
        // on (1, 1.5) no composition of these bases reaches ŷ < −1 at desk budgets
        let region: Region = "1.01,1.5,0,0".parse().unwrap();
        let cfg = ScanConfig { budget: 300, real_mode: true, ..Default::default() };
        for g0 in [TwoTerminal::k2(), TwoTerminal::path(3), TwoTerminal::bundle(3)] {
            let out = activity_scan(&g0, &region, 4, &cfg).unwrap();
            assert!(out.iter().all(|s| s.class == LocusClass::InactiveAtBudget), "{out:?}");
        }
    }
}
