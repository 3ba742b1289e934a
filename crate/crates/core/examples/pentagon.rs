//! The pentagon template and where its modulus crosses 1 on the circle.

use netrel::interactions::pentagon::{pentagon_circle_sq, pentagon_crossing};
use netrel::locus::{pentagon_report, unit_threshold};

fn main() {
    let th = unit_threshold();
    println!("threshold cos t* = {:.15} (t* = {:.6})", th.value, th.t_star);
    for k in 0..=8 {
        let t = k as f64 * std::f64::consts::PI / 8.0;
        println!("t = {t:.4}: |F|² = {:.6}", pentagon_circle_sq(t));
    }
    println!("bisected crossing: {:.12}", pentagon_crossing(1e-13));
    let r = pentagon_report(1, 20, 200);
    println!("report: passed = {}, max deviation {:.2e}", r.passed, r.circle_max_dev);
}
