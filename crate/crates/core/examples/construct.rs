//! Build a gadget whose edge interaction approximates a target.

use netrel::constructor::{construct_interaction, precompute, Strategy};
use netrel::graph::TwoTerminal;
use netrel::numeric::parse::{parse_gaussian, parse_rational};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p = parse_gaussian(args.get(1).map(String::as_str).unwrap_or("i/2")).unwrap();
    let target = parse_gaussian(args.get(2).map(String::as_str).unwrap_or("5+3i")).unwrap();
    let eps = parse_rational(args.get(3).map(String::as_str).unwrap_or("1e-6"), true).unwrap();
    let t = std::time::Instant::now();
    let cert = precompute(&TwoTerminal::k2(), &p).unwrap();
    println!(
        "certificate: r = {}, alpha ≈ {:.4}, {} family members, start {} ({:?})",
        cert.r,
        netrel::numeric::gauss::rat_to_f64(&cert.alpha),
        cert.family.len(),
        cert.start.gadget.expr,
        t.elapsed()
    );
    let t = std::time::Instant::now();
    let res = construct_interaction(&cert, &target, &eps, Strategy::Offset).unwrap();
    println!("{} leaves, error ≤ {:.3e}, steps {:?} ({:?})", res.size, netrel::numeric::gauss::rat_to_f64(&res.error), res.steps, t.elapsed());
    if res.size <= 200 {
        println!("{}", res.expr);
    }
}
