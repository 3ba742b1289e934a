use std::collections::HashSet;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::TwoTerminal;
use crate::interactions::{classify_point, g_map, Ext, Mobius, PointClass};
use crate::numeric::gauss::rat_to_f64;
use crate::numeric::{BigFloat, Field, GaussianRational, Ring, Round};

use super::gadget::{Base, Gadget};
use super::{pow2_neg, rat, ConstructError};

type Q = GaussianRational;

/// A gadget with its exact interaction `y`, offset `v = y − 1` and map
/// `Φ(z) = g(z) + v`.
#[derive(Clone, Debug)]
pub struct Member {
    pub gadget: Gadget,
    pub y: Q,
    pub v: Q,
    pub map: Mobius<Q>,
}

/// Everything the constructor needs at a fixed base gadget and parameter.
#[derive(Clone, Debug)]
pub struct CoverCertificate {
    pub base: Base,
    pub real: bool,
    /// Smallest active composition found.
    pub witness: Gadget,
    /// `W = witness^{∥k}`; the parallel map `g` is taken with respect to it.
    pub work: Gadget,
    pub y_work: Q,
    pub yhat_work: Q,
    pub g: Mobius<Q>,
    pub g_f64: Mobius<Complex64>,
    /// `|g′(1)| = 1/|ŷ_W|`.
    pub multiplier: f64,
    pub r: BigRational,
    /// Radius actually covered, slightly above `r`.
    pub r_cover: BigRational,
    /// Certified bound on `|Φᵢ′|` over `B(1, 3r)`.
    pub alpha: BigRational,
    pub family: Vec<Member>,
    pub start: Member,
    pub escape_n: u32,
    /// Small gadgets used as exact offsets.
    pub pool: Vec<Member>,
    pub cover_cells: usize,
}

const WITNESS_MAX: usize = 8;
const POOL_MAX: usize = 40;
/// Leaf bounds tried in turn for the candidate search.
const DP_STAGES: [usize; 3] = [12, 20, 28];
const DP_CAP: usize = 1500;
const REFINE_ROUNDS: usize = 6;
const GRID: i64 = 16;

/// Closed disk `|z − center|² ≤ rad_sq`.
#[derive(Clone, Debug, PartialEq)]
pub struct Disk {
    pub center: Q,
    pub rad_sq: BigRational,
}

impl Disk {
    pub fn contains(&self, z: &Q) -> bool {
        z.dist_sq(&self.center) <= self.rad_sq
    }
}

/// Exact image of the disk `B(z0, ρ)` under a Möbius map with `c ≠ 0`
/// whose pole lies outside the disk.
pub fn image_disk(m: &Mobius<Q>, z0: &Q, rho_sq: &BigRational) -> Option<Disk> {
    let cinv = m.c.inv()?;
    let zp = m.d.mul(&cinv).neg();
    let u0 = z0.sub(&zp);
    let den = u0.norm_sq() - rho_sq;
    if !den.is_positive() {
        return None;
    }
    let k = m.det().mul(&cinv).mul(&cinv);
    let center = m.a.mul(&cinv).sub(&k.mul(&u0.conj()).scale(&den.recip()));
    let rad_sq = k.norm_sq() * rho_sq / (&den * &den);
    Some(Disk { center, rad_sq })
}

fn image_disk_f64(m: &Mobius<Complex64>, z0: Complex64, rho: f64) -> Option<(Complex64, f64)> {
    let zp = -m.d / m.c;
    let u0 = z0 - zp;
    let den = u0.norm_sqr() - rho * rho;
    if den <= 0.0 {
        return None;
    }
    let k = m.det() / (m.c * m.c);
    Some((m.a / m.c - k * u0.conj() / den, k.norm() * rho / den))
}

/// `Φ(z) = g(z) + v`.
pub fn shifted(g: &Mobius<Q>, v: &Q) -> Mobius<Q> {
    Mobius { a: g.a.add(&v.mul(&g.c)), b: g.b.add(&v.mul(&g.d)), c: g.c.clone(), d: g.d.clone() }
}

fn to_f64_map(m: &Mobius<Q>) -> Mobius<Complex64> {
    Mobius { a: m.a.to_c64(), b: m.b.to_c64(), c: m.c.to_c64(), d: m.d.to_c64() }
}

/// Axis-parallel cell; degenerate in the imaginary direction in real mode.
#[derive(Clone, Debug)]
struct Cell {
    x0: BigRational,
    x1: BigRational,
    y0: BigRational,
    y1: BigRational,
    /// Float corners, for pre-filtering.
    fc: Vec<Complex64>,
}

impl Cell {
    fn new(x0: BigRational, x1: BigRational, y0: BigRational, y1: BigRational, real: bool) -> Self {
        let mut c = Cell { x0, x1, y0, y1, fc: Vec::new() };
        c.fc = c.corners(real).iter().map(|z| z.to_c64()).collect();
        c
    }

    fn corners(&self, real: bool) -> Vec<Q> {
        if real {
            vec![rat(&self.x0), rat(&self.x1)]
        } else {
            vec![
                Q::new(self.x0.clone(), self.y0.clone()),
                Q::new(self.x1.clone(), self.y0.clone()),
                Q::new(self.x0.clone(), self.y1.clone()),
                Q::new(self.x1.clone(), self.y1.clone()),
            ]
        }
    }

    /// Whether the cell meets the closed disk `B(1, ρ)`.
    fn meets(&self, rho_sq: &BigRational) -> bool {
        let one = BigRational::one();
        let clamp = |lo: &BigRational, hi: &BigRational, x: &BigRational| {
            if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                BigRational::zero()
            }
        };
        let dx = clamp(&self.x0, &self.x1, &one);
        let dy = clamp(&self.y0, &self.y1, &BigRational::zero());
        &dx * &dx + &dy * &dy <= *rho_sq
    }

    fn split(&self, real: bool) -> Vec<Cell> {
        let two = BigRational::from_integer(2.into());
        let xm = (&self.x0 + &self.x1) / &two;
        if real {
            return vec![
                Cell::new(self.x0.clone(), xm.clone(), self.y0.clone(), self.y1.clone(), real),
                Cell::new(xm, self.x1.clone(), self.y0.clone(), self.y1.clone(), real),
            ];
        }
        let ym = (&self.y0 + &self.y1) / &two;
        let mut out = Vec::with_capacity(4);
        for (a, b) in [(&self.x0, &xm), (&xm, &self.x1)] {
            for (c, d) in [(&self.y0, &ym), (&ym, &self.y1)] {
                out.push(Cell::new(a.clone(), b.clone(), c.clone(), d.clone(), real));
            }
        }
        out
    }
}

struct Candidate {
    gadget: Gadget,
    v: Q,
}

fn member(base: &Base, g: &Mobius<Q>, gadget: Gadget) -> Option<Member> {
    let Ext::Finite(y) = base.y(&gadget) else { return None };
    let v = y.sub(&Q::ident());
    Some(Member { map: shifted(g, &v), gadget, y, v })
}

/// Smallest active word among `G₀^{∥n}`, `G₀^{⋈m}` and their two nestings.
fn find_witness(base: &Base, real: bool) -> Option<Gadget> {
    let leaf = base.leaf();
    let mut words = Vec::new();
    for n in 1..=WITNESS_MAX {
        for m in 1..=WITNESS_MAX {
            let par = base.parallel_pow(&leaf, n);
            words.push(base.series_pow(&par, m));
            if n > 1 && m > 1 {
                let ser = base.series_pow(&leaf, m);
                words.push(base.parallel_pow(&ser, n));
            }
        }
    }
    words.sort_by_key(|g| g.leaves);
    words.into_iter().find(|g| classify_point(&base.pair(g), real) == PointClass::Active)
}

/// Largest `r = 2^{-j}` with the contraction bound at most `(1 + a)/2`.
fn choose_r(y_w: &Q, p: &Q, a0: f64) -> Option<(u32, BigRational)> {
    let one = Q::ident();
    let n1 = y_w.dist_sq(&one);
    let n2 = y_w.dist_sq(p);
    let target = (1.0 + a0) / 2.0;
    let num_up = BigFloat::from_rational(&(&n1 * &n2), 96, Round::Up).sqrt(96, Round::Up);
    let d_lo = BigFloat::from_rational(&n2, 96, Round::Down).sqrt(96, Round::Down);
    for j in 2..=60u32 {
        let three_r = BigFloat::from_rational(&(pow2_neg(j) * BigRational::from_integer(3.into())), 96, Round::Up);
        let gap = d_lo.sub(&three_r);
        if gap.is_negative() || gap.is_zero() {
            continue;
        }
        let den = gap.mul(&gap).round(96, Round::Down);
        let alpha = num_up.div(&den, 96, Round::Up);
        if alpha.to_f64() <= target {
            return Some((j, alpha.to_rational()));
        }
    }
    None
}

/// Certificate for `G₀` at `p`: activity witness, parallel map, radius,
/// covering family, start point and escape count.
pub fn precompute(g0: &TwoTerminal, p: &Q) -> Result<CoverCertificate, ConstructError> {
    let base = Base::new(g0, p)?;
    let real = p.is_real();
    let witness = find_witness(&base, real).ok_or(ConstructError::PreconditionUnverified)?;
    let Ext::Finite(yh) = base.yhat(&witness) else { unreachable!("active point has finite ŷ") };
    let a_wit = rat_to_f64(&yh.norm_sq()).sqrt().recip();
    let k = (1..=64).find(|&k| a_wit.powi(k) <= 0.6).unwrap_or(64) as usize;
    let work = base.parallel_pow(&witness, k);
    let Ext::Finite(yhat_work) = base.yhat(&work) else { unreachable!() };
    let Ext::Finite(y_work) = base.y(&work) else {
        return Err(ConstructError::PreconditionFailed("R vanishes on the working gadget".into()));
    };
    let a0 = rat_to_f64(&yhat_work.norm_sq()).sqrt().recip();
    let g = g_map(p, &y_work).map_err(|e| ConstructError::PreconditionFailed(e.to_string()))?;
    let g_f64 = to_f64_map(&g);
    let (j, alpha) = choose_r(&y_work, p, a0)
        .ok_or_else(|| ConstructError::CoverSearchExhausted("no radius meets the contraction bound".into()))?;
    let r = pow2_neg(j);
    let r_cover = &r * BigRational::new(17.into(), 16.into());
    let alpha_f = rat_to_f64(&alpha);
    // boundary sample of B(1, 3r)
    let rf = rat_to_f64(&r);
    for k in 0..64 {
        let z = Complex64::new(1.0, 0.0) + Complex64::from_polar(3.0 * rf, k as f64 * std::f64::consts::TAU / 64.0);
        let d = g_f64.det().norm() / (g_f64.c * z + g_f64.d).norm_sqr();
        if d > alpha_f * (1.0 + 1e-12) {
            return Err(ConstructError::CoverSearchExhausted(format!("|g'| = {d} exceeds the bound {alpha_f}")));
        }
    }

    let pool = build_pool(&base, &g, &work, &r);
    let start = pool
        .iter()
        .find(|m| m.v.norm_sq() < &r * &r)
        .cloned()
        .ok_or_else(|| ConstructError::CoverSearchExhausted("no start point in the disk".into()))?;
    let vmax = pool
        .iter()
        .map(|m| rat_to_f64(&m.v.norm_sq()).sqrt())
        .filter(|&x| x <= 8.0)
        .fold(8.0 * rf, f64::max);
    let mut found = None;
    for leaves in DP_STAGES {
        let cands = candidates(&base, &g, &work, &pool, vmax, leaves);
        match select_family(&base, &g, &g_f64, cands, &r, &r_cover, real) {
            Ok(f) => {
                found = Some(f);
                break;
            }
            Err(e) if leaves == DP_STAGES[DP_STAGES.len() - 1] => return Err(e),
            Err(_) => {}
        }
    }
    let (family, cells) = found.expect("last stage returns");

    // conjugated coordinates h(z) = (z−1)/(z−p), in which g is z ↦ λz
    let pf = p.to_c64();
    let dist = (pf - 1.0).norm();
    let c_min = rf / (rf + dist);
    let sup = 1.0 + dist / 2.0;
    let escape_n = ((sup / c_min).ln() / (1.0 / a0).ln()).ceil().max(0.0) as u32;

    Ok(CoverCertificate {
        base,
        real,
        witness,
        work,
        y_work,
        yhat_work,
        g,
        g_f64,
        multiplier: a0,
        r,
        r_cover,
        alpha,
        family,
        start,
        escape_n,
        pool,
        cover_cells: cells,
    })
}

/// `G₀^{∥n}` and `W^{∥n}` until the offsets are far inside the disk.
fn build_pool(base: &Base, g: &Mobius<Q>, work: &Gadget, r: &BigRational) -> Vec<Member> {
    let tiny = r * r / BigRational::from_integer(4096.into());
    let mut out: Vec<Member> = Vec::new();
    let mut seen = HashSet::new();
    for unit in [base.leaf(), work.clone()] {
        let mut acc = unit.clone();
        for n in 1..=POOL_MAX {
            if n > 1 {
                acc = base.parallel_into(acc, &unit);
            }
            let Some(m) = member(base, g, acc.clone()) else { continue };
            let small = m.v.norm_sq() < tiny;
            if seen.insert(m.v.clone()) {
                out.push(m);
            }
            if small {
                break;
            }
        }
    }
    out.sort_by_key(|m| m.gadget.leaves);
    out
}

/// Compositions by leaf count: a state grows by a pool gadget in series
/// (offsets add) or by `W` in parallel (`v ↦ g(1+v) − 1`). States are
/// de-duplicated by offset and pruned to offsets within `vmax`.
fn candidates(base: &Base, g: &Mobius<Q>, work: &Gadget, pool: &[Member], vmax: f64, max_leaves: usize) -> Vec<Candidate> {
    let vmax_sq = vmax * vmax;
    let one = Q::ident();
    let gf = to_f64_map(g);
    let pool_v: Vec<Complex64> = pool.iter().map(|m| m.v.to_c64()).collect();
    let wl = work.leaves;
    let mut levels: Vec<Vec<Candidate>> = vec![Vec::new()];
    let mut seen: HashSet<Q> = HashSet::new();
    let mut out = Vec::new();
    // (|v|², v, parent level and index, pool index or None for ∥ W)
    type Fresh = (f64, Q, Option<(usize, usize)>, Option<usize>);
    for l in 1..=max_leaves {
        let mut fresh: Vec<Fresh> = Vec::new();
        for (k, m) in pool.iter().enumerate() {
            let ml = m.gadget.leaves;
            if ml == l && seen.insert(m.v.clone()) {
                fresh.push((m.v.to_c64().norm_sqr(), m.v.clone(), None, Some(k)));
            }
            if ml < l {
                for (si, s) in levels[l - ml].iter().enumerate() {
                    let approx = (s.v.to_c64() + pool_v[k]).norm_sqr();
                    if approx > vmax_sq {
                        continue;
                    }
                    let v = s.v.add(&m.v);
                    if seen.insert(v.clone()) {
                        fresh.push((approx, v, Some((l - ml, si)), Some(k)));
                    }
                }
            }
        }
        if wl < l {
            for (si, s) in levels[l - wl].iter().enumerate() {
                let z = s.v.to_c64() + 1.0;
                let approx = ((gf.a * z + gf.b) / (gf.c * z + gf.d) - 1.0).norm_sqr();
                if !(approx <= vmax_sq) {
                    continue;
                }
                let Ext::Finite(w) = g.apply_finite(&s.v.add(&one)) else { continue };
                let v = w.sub(&one);
                if seen.insert(v.clone()) {
                    fresh.push((approx, v, Some((l - wl, si)), None));
                }
            }
        }
        fresh.sort_by(|a, b| a.0.total_cmp(&b.0));
        fresh.truncate(DP_CAP);
        let level: Vec<Candidate> = fresh
            .into_iter()
            .map(|(_, v, from, k)| {
                let gadget = match (from, k) {
                    (None, Some(k)) => pool[k].gadget.clone(),
                    (Some((lv, si)), Some(k)) => base.series_into(levels[lv][si].gadget.clone(), &pool[k].gadget),
                    (Some((lv, si)), None) => base.parallel_into(levels[lv][si].gadget.clone(), work),
                    (None, None) => unreachable!(),
                };
                Candidate { gadget, v }
            })
            .filter(|c| !c.gadget.hpair.r.is_nil())
            .collect();
        out.extend(level.iter().map(|c| Candidate { gadget: c.gadget.clone(), v: c.v.clone() }));
        levels.push(level);
    }
    out
}

/// Greedy choice of family members by increasing size until every cell of
/// a mesh over `B(1, r_cover)` lies inside one image disk `Φᵢ(B(1, r))`.
fn select_family(
    base: &Base,
    g: &Mobius<Q>,
    g_f64: &Mobius<Complex64>,
    cands: Vec<Candidate>,
    r: &BigRational,
    r_cover: &BigRational,
    real: bool,
) -> Result<(Vec<Member>, usize), ConstructError> {
    let one = Q::ident();
    let rho_sq = r * r;
    let rc_sq = r_cover * r_cover;
    let rf = rat_to_f64(r);
    let rcf = rat_to_f64(r_cover);
    let img = image_disk_f64(g_f64, Complex64::new(1.0, 0.0), rf)
        .ok_or_else(|| ConstructError::CoverSearchExhausted("pole inside the disk".into()))?;
    // candidates whose image disk meets the target disk, with f64 disks
    let mut live: Vec<(Candidate, Complex64, f64)> = cands
        .into_iter()
        .filter(|c| !c.gadget.hpair.r.is_nil())
        .filter_map(|c| {
            let center = img.0 + c.v.to_c64();
            ((center - 1.0).norm() < rcf + img.1).then_some((c, center, img.1))
        })
        .collect();
    live.sort_by_key(|(c, _, _)| c.gadget.leaves);

    let step = r_cover * BigRational::new(2.into(), GRID.into());
    let lo = BigRational::one() - r_cover;
    let mut cells = Vec::new();
    for a in 0..GRID {
        let x0 = &lo + &step * BigRational::from_integer(a.into());
        let x1 = &x0 + &step;
        if real {
            cells.push(Cell::new(x0, x1, BigRational::zero(), BigRational::zero(), real));
            continue;
        }
        for b in 0..GRID {
            let y0 = -r_cover + &step * BigRational::from_integer(b.into());
            let y1 = &y0 + &step;
            let c = Cell::new(x0.clone(), x1.clone(), y0, y1, real);
            if c.meets(&rc_sq) {
                cells.push(c);
            }
        }
    }
    let mut total_cells = 0;
    let mut chosen: Vec<(Member, Disk, (Complex64, f64))> = Vec::new();
    let mut used = vec![false; live.len()];
    let mut last_area = f64::INFINITY;
    for round in 0..=REFINE_ROUNDS {
        cells.retain(|c| {
            !chosen.iter().any(|(_, d, fd)| {
                c.fc.iter().all(|z| (z - fd.0).norm() <= fd.1 * (1.0 - 1e-9))
                    && c.corners(real).iter().all(|z| d.contains(z))
            })
        });
        for (ci, (cand, center, rad)) in live.iter().enumerate() {
            if cells.is_empty() {
                break;
            }
            if used[ci] {
                continue;
            }
            let slack = rad * (1.0 - 1e-9);
            let hit: Vec<usize> = (0..cells.len())
                .filter(|&k| cells[k].fc.iter().all(|z| (z - center).norm() <= slack))
                .collect();
            if hit.is_empty() {
                continue;
            }
            let map = shifted(g, &cand.v);
            let Some(disk) = image_disk(&map, &one, &rho_sq) else { continue };
            let exact: Vec<usize> =
                hit.into_iter().filter(|&k| cells[k].corners(real).iter().all(|z| disk.contains(z))).collect();
            if exact.is_empty() {
                continue;
            }
            used[ci] = true;
            let drop: HashSet<usize> = exact.into_iter().collect();
            total_cells += drop.len();
            let mut k = 0;
            cells.retain(|_| {
                k += 1;
                !drop.contains(&(k - 1))
            });
            let y = cand.v.add(&one);
            chosen.push((Member { gadget: cand.gadget.clone(), y, v: cand.v.clone(), map }, disk, (*center, *rad)));
        }
        if cells.is_empty() {
            let family: Vec<Member> = chosen.into_iter().map(|(m, _, _)| m).collect();
            debug_assert!(family.iter().all(|m| base.y(&m.gadget).finite() == Some(&m.y)));
            return Ok((family, total_cells));
        }
        // refining only helps near seams between disks
        let split: f64 = if real { 2.0 } else { 4.0 };
        let area = cells.len() as f64 / split.powi(round as i32);
        if area > 0.9 * last_area {
            break;
        }
        last_area = area;
        if round < REFINE_ROUNDS {
            cells = cells.iter().flat_map(|c| c.split(real)).filter(|c| c.meets(&rc_sq)).collect();
        }
    }
    Err(ConstructError::CoverSearchExhausted(format!(
        "{} mesh cells uncovered after {} candidates",
        cells.len(),
        live.len()
    )))
}

/// Certificate re-check from scratch: every member pair has `R ≠ 0`, maps
/// are `g + v`, the start lies in the disk and the mesh is covered.
pub fn verify_certificate(cert: &CoverCertificate) -> Result<(), String> {
    let base = &cert.base;
    let one = Q::ident();
    let rho_sq = &cert.r * &cert.r;
    for (i, m) in cert.family.iter().chain(std::iter::once(&cert.start)).enumerate() {
        if m.gadget.hpair.r.is_nil() {
            return Err(format!("member {i} has R = 0"));
        }
        if base.y(&m.gadget).finite() != Some(&m.y) {
            return Err(format!("member {i} has a stale interaction"));
        }
        if m.map != shifted(&cert.g, &m.y.sub(&one)) {
            return Err(format!("member {i} map is not g + v"));
        }
    }
    if cert.start.y.dist_sq(&one) >= rho_sq {
        return Err("start point outside the disk".into());
    }
    let disks: Vec<Disk> = cert.family.iter().filter_map(|m| image_disk(&m.map, &one, &rho_sq)).collect();
    if disks.len() != cert.family.len() {
        return Err("a family map has its pole in the disk".into());
    }
    // random interior points of B(1, r_cover) are inside some image disk
    let rc = rat_to_f64(&cert.r_cover);
    for k in 0..200 {
        let t = k as f64 * 2.399963;
        let s = ((k as f64 + 0.5) / 200.0).sqrt() * rc;
        let z = if cert.real {
            Q::real(BigRational::from_float(1.0 + s * t.cos()).unwrap())
        } else {
            let w = Complex64::from_polar(s, t);
            Q::new(BigRational::from_float(1.0 + w.re).unwrap(), BigRational::from_float(w.im).unwrap())
        };
        if !disks.iter().any(|d| d.contains(&z)) {
            return Err(format!("sample {z} not covered"));
        }
    }
    Ok(())
}
