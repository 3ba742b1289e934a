//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_FAIL` are reported but do not fail the run; any other failure
//! exits nonzero.

use std::time::{Duration, Instant};

use netrel::constructor::{construct_interaction, precompute, Strategy};
use netrel::graph::random::{random_expr, random_gaussian, random_multigraph, random_two_terminal};
use netrel::graph::{substitute, Assignment, Multigraph, TwoTerminal};
use netrel::locus::atlas::{AtlasConfig, DensityConfig};
use netrel::locus::{density, pentagon_report, verify_unity, zero_atlas};
use netrel::numeric::{Field, GaussianRational as Q, Ring};
use netrel::reduction::{simulated_oracle, OracleMode, Reducer};
use netrel::reliability::{brute_force, brute_force_multivariate, eval_delcon, eval_pair_delcon, eval_sp, k2_pair, RelPair};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAIL: &[&str] = &["constructor", "reduction", "zero-atlas-density"];

struct Outcome {
    passed: bool,
    detail: String,
}

fn q(s: &str) -> Q {
    s.parse().unwrap()
}

fn one() -> Q {
    Q::ident()
}

/// Brute-force `R` of a plain multigraph.
fn brute_r(g: &Multigraph, p: &Q) -> Q {
    if g.n < 2 {
        return one();
    }
    brute_force(&TwoTerminal { graph: g.clone(), s: 0, t: 1 }, p).unwrap().r
}

fn brute_pair(g: &TwoTerminal, p: &Q) -> RelPair<Q> {
    brute_force(g, p).unwrap()
}

fn y_of(pair: &RelPair<Q>, p: &Q) -> Option<Q> {
    Some(one().sub(p).mul(&pair.s.div(&pair.r)?).add(&one()))
}

fn yhat(pair: &RelPair<Q>) -> Option<Q> {
    Some(pair.r.div(&pair.s)?.add(&one()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut graphs, mut exprs, mut bad) = (0, 0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(0..=8);
        let g = random_multigraph(&mut rng, n, m);
        for _ in 0..20 {
            let p = random_gaussian(&mut rng, 12);
            if eval_delcon(&g, &p) != brute_r(&g, &p) {
                bad += 1;
            }
        }
        graphs += 1;
    }
    for _ in 0..200 {
        let leaves = rng.gen_range(1..=12);
        let e = random_expr(&mut rng, leaves);
        let g = e.realize(&TwoTerminal::k2());
        for _ in 0..20 {
            let p = random_gaussian(&mut rng, 12);
            if eval_sp(&e, &k2_pair(&p)) != brute_pair(&g, &p) || eval_pair_delcon(&g, &p) != brute_pair(&g, &p) {
                bad += 1;
            }
        }
        exprs += 1;
    }
    Outcome { passed: bad == 0, detail: format!("{graphs} multigraphs and {exprs} expressions at 20 parameters each, {bad} mismatches") }
}

/// Counts checked instances and failures of one identity.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
}

impl Tally {
    fn check(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

fn non_loop_edge(rng: &mut ChaCha8Rng, h: &Multigraph) -> Option<usize> {
    let cands: Vec<usize> = (0..h.edge_count()).filter(|&e| !h.is_loop(e)).collect();
    (!cands.is_empty()).then(|| cands[rng.gen_range(0..cands.len())])
}

fn loopless(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Multigraph {
    let g = random_multigraph(rng, n, m);
    Multigraph { n, edges: g.edges.into_iter().filter(|&(a, b)| a != b).collect() }
}

fn identity_suite() -> Outcome {
    const N: usize = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut t: Vec<(&str, Tally)> = [
        "series-parallel recursion",
        "deletion-contraction",
        "interaction composition",
        "n-fold series",
        "single replacement",
        "effective interaction replacement",
        "virtual interaction of f_p",
        "full substitution of y-hat",
        "full substitution of R",
        "multivariate substitution",
    ]
    .into_iter()
    .map(|n| (n, Tally::default()))
    .collect();
    let mut guard = 0;
    while t.iter().any(|(_, x)| x.checked < N) && guard < 100 * N {
        guard += 1;
        let p = random_gaussian(&mut rng, 9);
        let (n1, m1, n2, m2) = (rng.gen_range(2..=4), rng.gen_range(1..=4), rng.gen_range(2..=4), rng.gen_range(1..=4));
        let g1 = random_two_terminal(&mut rng, n1, m1);
        let g2 = random_two_terminal(&mut rng, n2, m2);
        let (a, b) = (brute_pair(&g1, &p), brute_pair(&g2, &p));
        let ser = brute_pair(&TwoTerminal::series(&[g1.clone(), g2.clone()]), &p);
        let par = brute_pair(&TwoTerminal::parallel(&[g1.clone(), g2.clone()]), &p);
        t[0].1.check(
            par.s == a.s.mul(&b.s)
                && ser.r == a.r.mul(&b.r)
                && par.r == a.r.mul(&b.s).add(&b.r.mul(&a.s)).add(&a.r.mul(&b.r))
                && ser.s == a.r.mul(&b.s).add(&b.r.mul(&a.s)),
        );

        if let Some(e) = non_loop_edge(&mut rng, &g1.graph) {
            let del = TwoTerminal { graph: g1.graph.delete_edge(e), ..g1.clone() };
            let r_ok = a.r == p.mul(&brute_r(&del.graph, &p)).add(&one().sub(&p).mul(&brute_r(&g1.graph.contract_edge(e), &p)));
            let (u, v) = g1.graph.edges[e];
            let s_ok = if (u, v) == (g1.s, g1.t) || (v, u) == (g1.s, g1.t) {
                true
            } else {
                // contraction relabels vertices; merge terminals after it
                let con_merged = g1.graph.merge_vertices(g1.s, g1.t).contract_edge(e);
                let s_del = brute_pair(&del, &p).s;
                let r_con = brute_r(&g1.graph.contract_edge(e), &p);
                let s_con = brute_r(&con_merged, &p).sub(&r_con);
                a.s == p.mul(&s_del).add(&one().sub(&p).mul(&s_con))
            };
            t[1].1.check(r_ok && s_ok);
        }

        if let (Some(y1), Some(y2), Some(ys)) = (y_of(&a, &p), y_of(&b, &p), y_of(&ser, &p)) {
            let ok_s = ys == y1.add(&y2).sub(&one());
            let ok_p = match (yhat(&a), yhat(&b), yhat(&par)) {
                (Some(h1), Some(h2), Some(hp)) => hp == h1.mul(&h2),
                _ => true,
            };
            t[2].1.check(ok_s && ok_p);
        }

        let k = rng.gen_range(2..=4usize);
        let multi = brute_pair(&TwoTerminal::series(&vec![g1.clone(); k]), &p);
        if let (Some(h), Some(hk)) = (yhat(&a), yhat(&multi)) {
            let kq = Q::from_i64(k as i64);
            t[3].1.check(hk == h.div(&kq).unwrap().add(&Q::from_i64(k as i64 - 1).div(&kq).unwrap()));
        }

        // gadget into one edge of a random host
        let (hn, hm) = (rng.gen_range(2..=4), rng.gen_range(1..=4));
        let h = random_multigraph(&mut rng, hn, hm);
        if let Some(e) = non_loop_edge(&mut rng, &h) {
            let he = substitute(&h, Assignment::One(e, &g2)).unwrap();
            let (del, con) = (brute_r(&h.delete_edge(e), &p), brute_r(&h.contract_edge(e), &p));
            let lhs = brute_r(&he, &p);
            t[4].1.check(lhs == b.s.mul(&del).add(&b.r.mul(&con)));
            if let (Some(inv), Some(y)) = (b.r.inv(), y_of(&b, &p)) {
                let left = one().sub(&p).mul(&inv).mul(&lhs);
                let right = brute_r(&h, &p).add(&y.sub(&p.add(&one())).mul(&del));
                t[5].1.check(left == right);
            }
        }

        if let (Some(y), Some(h)) = (y_of(&a, &p), yhat(&a)) {
            // f_p(z) = 1 + (1 − p)/(z − 1)
            if let Some(w) = y.sub(&one()).inv() {
                t[6].1.check(one().add(&one().sub(&p).mul(&w)) == h);
            }
        }

        // every edge of a loopless host replaced by a connected gadget
        let hm = rng.gen_range(1..=3);
        let host = TwoTerminal { graph: loopless(&mut rng, 3, hm), s: 0, t: 1 };
        if g2.graph.is_connected() {
            if let Some(x) = yhat(&b).and_then(|v| v.inv()) {
                let big = TwoTerminal { graph: substitute(&host.graph, Assignment::All(&g2)).unwrap(), s: 0, t: 1 };
                if big.edge_count() <= 16 {
                    let pb = brute_pair(&big, &p);
                    let ph = brute_pair(&host, &x);
                    let scale = b.total().pow_n(host.edge_count() as u64);
                    t[8].1.check(pb.r == ph.r.mul(&scale));
                    if let (Some(l), Some(r)) = (yhat(&pb), yhat(&ph)) {
                        t[7].1.check(l == r);
                    }
                }
            }
        }

        // a different gadget per edge
        let hm = rng.gen_range(1..=3);
        let host = TwoTerminal { graph: loopless(&mut rng, 3, hm), s: 0, t: 2 };
        let gs: Vec<TwoTerminal> = (0..host.edge_count())
            .map(|_| {
                let m = rng.gen_range(1..=3);
                random_two_terminal(&mut rng, 3, m)
            })
            .collect();
        let xs: Option<Vec<Q>> = gs.iter().map(|g| yhat(&brute_pair(g, &p)).and_then(|v| v.inv())).collect();
        if let Some(xs) = xs {
            let per: Vec<Option<TwoTerminal>> = gs.iter().cloned().map(Some).collect();
            let big = TwoTerminal { graph: substitute(&host.graph, Assignment::PerEdge(&per)).unwrap(), s: 0, t: 2 };
            if big.edge_count() <= 16 {
                let lhs = yhat(&brute_pair(&big, &p));
                let rhs = yhat(&brute_force_multivariate(&host, &xs).unwrap());
                if lhs.is_some() || rhs.is_some() {
                    t[9].1.check(lhs == rhs);
                }
            }
        }
    }
    let short: Vec<String> = t.iter().filter(|(_, x)| x.checked < 50).map(|(n, x)| format!("{n} ({})", x.checked)).collect();
    let failed: Vec<String> = t.iter().filter(|(_, x)| x.failed > 0).map(|(n, x)| format!("{n} ({} of {})", x.failed, x.checked)).collect();
    let min = t.iter().map(|(_, x)| x.checked).min().unwrap_or(0);
    Outcome {
        passed: short.is_empty() && failed.is_empty(),
        detail: format!("{} identities, at least {min} instances each; failures {failed:?}; too few {short:?}", t.len()),
    }
}

fn pentagon() -> Outcome {
    let r = pentagon_report(7, 50, 1000);
    Outcome {
        passed: r.passed,
        detail: format!(
            "template {}/{} exact, circle deviation {:.1e} over {} samples, crossing cos t = {:.12} (error {:.1e})",
            r.exact_matches, r.exact_points, r.circle_max_dev, r.circle_samples, r.crossing_cos, r.crossing_err
        ),
    }
}

fn unity() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in 5..=9 {
        match verify_unity(k) {
            Ok(c) => {
                ok &= c.holds();
                parts.push(format!("k={k}: gcd {:?}, |ŷ| ≥ {:.6} at {} bits", c.gcd.to_string(), c.yhat_abs_lower, c.precision));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("k={k}: {e}"));
            }
        }
    }
    Outcome { passed: ok, detail: parts.join("; ") }
}

fn rational_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    let d = rng.gen_range(1..=100i64);
    BigRational::new(BigInt::from(rng.gen_range(lo * d..=hi * d)), BigInt::from(d))
}

fn pow10_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), k as usize))
}

/// Successes over `targets` at `p`, and the first error seen.
fn construct_batch(p: &Q, targets: &[Q], eps: &BigRational) -> (usize, Option<String>, Vec<usize>) {
    let cert = match precompute(&TwoTerminal::k2(), p) {
        Ok(c) => c,
        Err(e) => return (0, Some(e.to_string()), vec![]),
    };
    let (mut good, mut first, mut sizes) = (0, None, Vec::new());
    for y0 in targets {
        match construct_interaction(&cert, y0, eps, Strategy::Offset) {
            Ok(res) => {
                // re-verify from the expression alone
                let pair = brute_or_sp(&res.expr, p);
                let y = y_of(&pair, p);
                let ok = !pair.r.is_nil()
                    && y.as_ref().is_some_and(|y| {
                        let d = y.sub(&p.add(&one())).dist_sq(y0);
                        d < eps * eps
                    });
                if ok {
                    good += 1;
                    sizes.push(res.size);
                } else if first.is_none() {
                    first = Some(format!("re-verification failed for {y0}"));
                }
            }
            Err(e) => {
                first.get_or_insert_with(|| e.to_string());
            }
        }
    }
    (good, first, sizes)
}

fn brute_or_sp(e: &netrel::SPExpr, p: &Q) -> RelPair<Q> {
    eval_sp(e, &k2_pair(p))
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx, if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) })
}

fn constructor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let p = q("-1/2");
    let eps = pow10_neg(6);
    let complex: Vec<Q> = (0..100).map(|_| Q::new(rational_in(&mut rng, -10, 10), rational_in(&mut rng, -10, 10))).collect();
    let (good, err, _) = construct_batch(&p, &complex, &eps);
    let real: Vec<Q> = complex.iter().map(|z| Q::real(z.re.clone())).collect();
    let (good_real, err_real, _) = construct_batch(&p, &real, &eps);
    let (good_i, err_i, _) = construct_batch(&q("1/2i"), &complex, &eps);
    println!("INFO constructor: real parts of the targets at p = -1/2: {good_real}/100 ({err_real:?})");
    println!("INFO constructor: the complex targets at p = 1/2i: {good_i}/100 ({err_i:?})");
    // leaf growth across accuracies on a fixed set of real targets
    let sample: Vec<Q> = real.iter().take(10).cloned().collect();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut all_ok = true;
    for k in 2..=8 {
        let (g, _, sizes) = construct_batch(&p, &sample, &pow10_neg(k));
        all_ok &= g == sample.len();
        xs.push(k as f64 * std::f64::consts::LN_10);
        ys.push(sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64);
    }
    let (slope, icpt, r2) = linear_fit(&xs, &ys);
    let affine = all_ok && slope > 0.0 && r2 >= 0.9;
    println!("INFO constructor: mean leaves {ys:?} over ln(1/eps); fit {slope:.2}·ln(1/eps) + {icpt:.1}, r² = {r2:.3}");
    Outcome {
        passed: good == 100 && affine,
        detail: format!(
            "complex targets at p = -1/2: {good}/100 ({}); leaf growth affine: {affine}",
            err.unwrap_or_else(|| "no error".into())
        ),
    }
}

fn reduction() -> Outcome {
    let ps = ["-1/2", "-1", "1/2i", "3/4i"];
    let modes = [OracleMode::Abs, OracleMode::Arg];
    let seeds = [1u64, 2, 3];
    let per_combo = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut total, mut correct, mut zeros) = (0, 0, 0);
    let mut per_p = Vec::new();
    for ps_ in ps {
        let p = q(ps_);
        let (mut pt, mut pc, mut perr) = (0, 0, None::<String>);
        for mode in modes {
            for seed in seeds {
                let red = simulated_oracle(&p, mode, seed).map_err(|e| e.to_string()).and_then(|o| Reducer::new(&TwoTerminal::k2(), o).map_err(|e| e.to_string()));
                for i in 0..per_combo {
                    let f = match i {
                        // disconnected
                        0 => {
                            let m = rng.gen_range(1..=5);
                            let g = random_multigraph(&mut rng, 3, m);
                            Multigraph { n: g.n + 1, edges: g.edges }
                        }
                        // R(K₃; −1/2) = 0 with F connected
                        1 if ps_ == "-1/2" => Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap(),
                        _ => {
                            let n = rng.gen_range(2..=5);
                            let m = rng.gen_range(1..=8);
                            random_multigraph(&mut rng, n, m)
                        }
                    };
                    let exact = brute_r(&f, &p);
                    total += 1;
                    pt += 1;
                    let got = match &red {
                        Ok(r) => r.reduce(&f).map(|(t, _)| t.value).map_err(|e| e.to_string()),
                        Err(e) => Err(e.clone()),
                    };
                    match got {
                        Ok(v) if v == exact => {
                            correct += 1;
                            pc += 1;
                            if exact.is_nil() {
                                zeros += 1;
                            }
                        }
                        Ok(v) => {
                            perr.get_or_insert(format!("{f:?}: got {v}, expected {exact}"));
                        }
                        Err(e) => {
                            perr.get_or_insert(e);
                        }
                    }
                }
            }
        }
        println!("INFO reduction: p = {ps_}: {pc}/{pt} exact{}", perr.as_ref().map(|e| format!(", first failure: {e}")).unwrap_or_default());
        per_p.push(format!("{ps_}: {pc}/{pt}"));
    }
    Outcome {
        passed: correct == total && zeros > 0,
        detail: format!("{correct}/{total} graphs recovered exactly ({zeros} with R = 0); {}", per_p.join(", ")),
    }
}

fn atlas_density() -> Outcome {
    let atlas = match zero_atlas(&TwoTerminal::k2(), &AtlasConfig { max_leaves: 14, precision: 53 }) {
        Ok(a) => a,
        Err(e) => return Outcome { passed: false, detail: e.to_string() },
    };
    let cfg = DensityConfig::default();
    let d = density(atlas.points(), &cfg);
    Outcome {
        passed: d.passed,
        detail: format!(
            "{} distinct pairs, {} distinct R, {} roots; {}/{} cells hit = {:.1}% (threshold {:.0}%)",
            atlas.entries.len(),
            atlas.distinct_r,
            atlas.roots.len(),
            d.hit,
            d.eligible,
            100.0 * d.fraction,
            100.0 * cfg.threshold
        ),
    }
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("oracle-equivalence", 60, oracle_equivalence),
        ("identity-suite", 60, identity_suite),
        ("pentagon", 30, pentagon),
        ("unity-gadgets", 600, unity),
        ("constructor", 120, constructor),
        ("reduction", 600, reduction),
        ("zero-atlas-density", 600, atlas_density),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (name, limit, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let el = t.elapsed();
        let in_time = el <= Duration::from_secs(limit);
        let passed = out.passed && in_time;
        println!(
            "{} {name}: {} [{:.1} s of {limit} s]",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            el.as_secs_f64()
        );
        if !passed && !KNOWN_FAIL.contains(&name) {
            unexpected.push(name);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
