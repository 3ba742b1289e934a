use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{SPExpr, TwoTerminal};
use crate::numeric::roots::{poly_roots_certified, residual_ball, residual_bound_f64, zpoly_roots_f64};
use crate::numeric::{BigComplex, GaussianRational, RatPoly, ZPoly};
use crate::reliability::{symbolic, RelPair};

use super::{sample_at, LocusClass, LocusError, LocusSample};

pub const MAX_LEAVES: usize = 16;

#[derive(Clone, Debug)]
pub struct AtlasConfig {
    pub max_leaves: usize,
    /// Bits for root finding; 53 or less selects the machine-precision
    /// path.
    pub precision: u32,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        AtlasConfig { max_leaves: 14, precision: 53 }
    }
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Base,
    Series(u32, u32),
    Parallel(u32, u32),
}

/// One distinct `(R, S)` pair of the enumeration.
#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub pair: RelPair<ZPoly>,
    pub leaves: u8,
    origin: Origin,
}

#[derive(Clone, Debug)]
pub struct AtlasRoot {
    pub z: Complex64,
    /// The root at full precision when that path was used.
    pub exact: Option<BigComplex>,
    /// Upper bound on `|R(z)|` at the stored point.
    pub residual: f64,
    /// Index of the entry whose `R` vanishes here.
    pub entry: u32,
}

#[derive(Clone, Debug)]
pub struct ZeroAtlas {
    pub entries: Vec<AtlasEntry>,
    pub roots: Vec<AtlasRoot>,
    /// Entries with pairwise distinct `R`, in enumeration order.
    pub distinct_r: usize,
    pub precision: u32,
}

impl ZeroAtlas {
    /// The expression of entry `i`, rebuilt from its construction.
    pub fn expr(&self, i: u32) -> SPExpr {
        match self.entries[i as usize].origin {
            Origin::Base => SPExpr::leaf(),
            Origin::Series(a, b) => SPExpr::series(vec![self.expr(a), self.expr(b)]),
            Origin::Parallel(a, b) => SPExpr::parallel(vec![self.expr(a), self.expr(b)]),
        }
    }

    /// `R` of entry `i` with every factor `1 − p` removed.
    pub fn deflated(&self, i: u32) -> ZPoly {
        self.entries[i as usize].pair.r.deflate_one().0
    }

    pub fn sample(&self, root: &AtlasRoot) -> LocusSample {
        let point = match &root.exact {
            Some(z) => z.to_gauss(),
            None => GaussianRational::new(
                num_rational::BigRational::from_float(root.z.re).unwrap_or_default(),
                num_rational::BigRational::from_float(root.z.im).unwrap_or_default(),
            ),
        };
        let mut s = sample_at(point, LocusClass::Zero);
        s.re = root.z.re;
        s.im = root.z.im;
        s.witness = Some(self.expr(root.entry).to_string());
        s.witness_value = Some(self.deflated(root.entry).to_ratpoly().to_string());
        s.residual = Some(root.residual);
        s
    }

    /// Samples for the roots accepted by `keep`.
    pub fn samples(&self, keep: impl Fn(&AtlasRoot) -> bool) -> Vec<LocusSample> {
        self.roots.iter().filter(|r| keep(r)).map(|r| self.sample(r)).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.roots.iter().map(|r| r.z)
    }
}

fn to_zpoly(q: &RatPoly) -> Option<ZPoly> {
    let cs = q.coeffs().iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect::<Option<Vec<_>>>()?;
    Some(ZPoly::trimmed(cs))
}

/// Distinct `(R, S)` pairs of series-parallel expressions over `base` with
/// at most `max_leaves` leaves, each recorded at its smallest leaf count.
fn enumerate(base: RelPair<ZPoly>, max_leaves: usize) -> Vec<AtlasEntry> {
    let mut entries = vec![AtlasEntry { pair: base.clone(), leaves: 1, origin: Origin::Base }];
    let mut index: HashMap<RelPair<ZPoly>, u32> = HashMap::from([(base, 0)]);
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(), vec![0]];
    for n in 2..=max_leaves {
        let mut level = Vec::new();
        for a in 1..=n / 2 {
            let b = n - a;
            for (ii, &i) in levels[a].iter().enumerate() {
                let js = if a == b { &levels[b][ii..] } else { &levels[b][..] };
                for &j in js {
                    let (x, y) = (&entries[i as usize].pair, &entries[j as usize].pair);
                    for (pair, origin) in [(x.series(y), Origin::Series(i, j)), (x.parallel(y), Origin::Parallel(i, j))] {
                        if index.contains_key(&pair) {
                            continue;
                        }
                        let id = entries.len() as u32;
                        index.insert(pair.clone(), id);
                        entries.push(AtlasEntry { pair, leaves: n as u8, origin });
                        level.push(id);
                    }
                }
            }
        }
        levels.push(level);
    }
    entries
}

/// Roots of the reliability polynomials of all series-parallel
/// compositions of `base` up to `max_leaves` leaves, after removing the
/// forced factors `1 − p`. Pairs are deduplicated exactly and roots are
/// computed once per distinct `R`.
pub fn zero_atlas(base: &TwoTerminal, cfg: &AtlasConfig) -> Result<ZeroAtlas, LocusError> {
    if cfg.max_leaves > MAX_LEAVES {
        return Err(LocusError::Leaves(cfg.max_leaves));
    }
    let sym = symbolic(base)?;
    let pair = match (to_zpoly(&sym.r), to_zpoly(&sym.s)) {
        (Some(r), Some(s)) => RelPair::new(r, s),
        _ => unreachable!("reliability polynomials have small integer coefficients"),
    };
    let entries = enumerate(pair, cfg.max_leaves.max(1));
    let mut first: HashMap<&ZPoly, u32> = HashMap::new();
    let mut distinct = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if !first.contains_key(&e.pair.r) {
            first.insert(&e.pair.r, i as u32);
            distinct.push(i as u32);
        }
    }
    let prec = cfg.precision;
    let per: Vec<Result<Vec<AtlasRoot>, LocusError>> = distinct
        .par_iter()
        .map(|&i| {
            let r = &entries[i as usize].pair.r;
            let (q, _) = r.deflate_one();
            if q.degree().unwrap_or(0) == 0 {
                return Ok(Vec::new());
            }
            if prec <= 53 {
                return Ok(zpoly_roots_f64(&q)
                    .into_iter()
                    .map(|(z, _)| AtlasRoot { z, exact: None, residual: residual_bound_f64(r, z), entry: i })
                    .collect());
            }
            let rq = r.to_ratpoly();
            let wp = prec + 32;
            Ok(poly_roots_certified(&q.to_ratpoly(), prec)?
                .into_iter()
                .map(|root| {
                    let res = residual_ball(&rq, &root.z, wp).to_f64();
                    AtlasRoot { z: root.z.to_c64(), residual: res * (1.0 + 1e-15), exact: Some(root.z), entry: i }
                })
                .collect())
        })
        .collect();
    let mut roots = Vec::new();
    for r in per {
        roots.extend(r?);
    }
    Ok(ZeroAtlas { distinct_r: distinct.len(), entries, roots, precision: prec })
}

#[derive(Clone, Debug)]
pub struct DensityConfig {
    /// Cells per side of the grid over `[−1, 1]²`.
    pub grid: usize,
    /// Cells whose centre is closer than this to `[0, 1]` are ignored.
    pub min_dist: f64,
    /// Fraction of eligible cells that must contain a root.
    pub threshold: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig { grid: 20, min_dist: 0.1, threshold: 0.8 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub hit: usize,
    pub eligible: usize,
    pub fraction: f64,
    pub passed: bool,
    /// Centres of eligible cells without a root.
    pub missing: Vec<[f64; 2]>,
}

fn dist_to_unit_segment(z: Complex64) -> f64 {
    if z.re < 0.0 {
        z.norm()
    } else if z.re > 1.0 {
        (z - 1.0).norm()
    } else {
        z.im.abs()
    }
}

/// Grid-cell coverage of the unit disk by `points`. A cell is eligible
/// when its centre lies in the open disk at distance at least `min_dist`
/// from `[0, 1]`; it is hit when some point of modulus below 1 lies in it.
pub fn density(points: impl Iterator<Item = Complex64>, cfg: &DensityConfig) -> DensityReport {
    let n = cfg.grid;
    let w = 2.0 / n as f64;
    let mut hit = vec![false; n * n];
    for z in points.filter(|z| z.norm() < 1.0) {
        let i = (((z.re + 1.0) / w) as usize).min(n - 1);
        let j = (((z.im + 1.0) / w) as usize).min(n - 1);
        hit[j * n + i] = true;
    }
    let mut report = DensityReport { hit: 0, eligible: 0, fraction: 0.0, passed: false, missing: Vec::new() };
    for j in 0..n {
        for i in 0..n {
            let c = Complex64::new(-1.0 + (i as f64 + 0.5) * w, -1.0 + (j as f64 + 0.5) * w);
            if c.norm() >= 1.0 || dist_to_unit_segment(c) < cfg.min_dist {
                continue;
            }
            report.eligible += 1;
            if hit[j * n + i] {
                report.hit += 1;
            } else {
                report.missing.push([c.re, c.im]);
            }
        }
    }
    report.fraction = report.hit as f64 / report.eligible.max(1) as f64;
    report.passed = report.fraction >= cfg.threshold;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_sp;
    use crate::reliability::{eval_sp, k2_pair};

    fn small(leaves: usize, precision: u32) -> ZeroAtlas {
        zero_atlas(&TwoTerminal::k2(), &AtlasConfig { max_leaves: leaves, precision }).unwrap()
    }

    #[test]
    fn small_examples() {
        let a = small(3, 53);
        // e, e|e, e*e, and four three-leaf shapes
        assert_eq!(a.entries.len(), 7);
        let tri = parse_sp("(e*e)|e").unwrap();
        let want = eval_sp(&tri, &k2_pair(&ZPoly(vec![0, 1])));
        let i = a.entries.iter().position(|e| e.pair == want).unwrap() as u32;
        let rs: Vec<_> = a.roots.iter().filter(|r| r.entry == i).collect();
        assert_eq!(rs.len(), 1);
        assert!((rs[0].z - Complex64::new(-0.5, 0.0)).norm() < 1e-14);
        assert_eq!(a.deflated(i), ZPoly(vec![1, 2]));
        assert!(a.roots.iter().all(|r| r.entry != 0));
        assert!(zero_atlas(&TwoTerminal::k2(), &AtlasConfig { max_leaves: 17, precision: 53 }).is_err());
    }

    #[test]
    fn entries_are_distinct_and_match_their_expressions() {
        let a = small(7, 53);
        let base = k2_pair(&ZPoly(vec![0, 1]));
        let mut seen = std::collections::HashSet::new();
        for (i, e) in a.entries.iter().enumerate() {
            assert!(seen.insert(e.pair.clone()));
            let x = a.expr(i as u32);
            assert_eq!(x.leaves(), e.leaves as usize);
            assert_eq!(eval_sp(&x, &base), e.pair);
        }
    }

    #[test]
    fn residuals_bound_r_and_shrink_with_precision() {
        let lo = small(6, 53);
        for r in &lo.roots {
            let q = &lo.entries[r.entry as usize].pair.r;
            assert!(q.eval_f64(r.z).norm() <= r.residual);
            assert!(r.residual < 1e-9);
        }
        let a = small(5, 64);
        let b = small(5, 128);
        assert_eq!(a.roots.len(), b.roots.len());
        let worst = |x: &ZeroAtlas| x.roots.iter().map(|r| r.residual).fold(0.0f64, f64::max);
        assert!(worst(&b) < worst(&a) && worst(&a) > 0.0);
        assert!(worst(&b) < 1e-30);
    }

    #[test]
    fn roots_have_unit_virtual_interaction() {
        // at a root of R with S ≠ 0, ŷ = R/S + 1 is 1 up to the residual
        let a = small(8, 53);
        let mut checked = 0;
        for r in a.roots.iter().step_by(7) {
            let pair = &a.entries[r.entry as usize].pair;
            let s = pair.s.eval_f64(r.z);
            if s.norm() < 1e-6 {
                continue;
            }
            let y = pair.r.eval_f64(r.z) / s + 1.0;
            assert!((y - 1.0).norm() <= 2.0 * r.residual / s.norm() + 1e-15);
            checked += 1;
            if checked == 20 {
                break;
            }
        }
        assert_eq!(checked, 20);
    }

    #[test]
    fn density_counts_cells() {
        let cfg = DensityConfig::default();
        let empty = density(std::iter::empty(), &cfg);
        assert_eq!(empty.hit, 0);
        assert!(empty.eligible > 200 && empty.eligible < 314);
        let one = density([Complex64::new(-0.55, 0.55)].into_iter(), &cfg);
        assert_eq!(one.hit, 1);
        // points on the excluded segment or outside the disk never count
        let none = density([Complex64::new(0.5, 0.0), Complex64::new(0.9, 0.9)].into_iter(), &cfg);
        assert_eq!(none.hit, 0);
    }
}
