//! Zeros of series-parallel compositions and their coverage of the disk.

use netrel::graph::TwoTerminal;
use netrel::locus::{density, zero_atlas, AtlasConfig, DensityConfig};

fn main() {
    let leaves = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let atlas = zero_atlas(&TwoTerminal::k2(), &AtlasConfig { max_leaves: leaves, precision: 53 }).unwrap();
    println!("{} distinct pairs, {} distinct R, {} roots", atlas.entries.len(), atlas.distinct_r, atlas.roots.len());
    let d = density(atlas.points(), &DensityConfig::default());
    println!("{}/{} cells hit ({:.1}%)", d.hit, d.eligible, 100.0 * d.fraction);
    if let Some(r) = atlas.roots.iter().find(|r| r.z.norm() < 1.0 && r.z.im.abs() > 0.3) {
        println!("e.g. {:.6} is a zero of {}", r.z, atlas.expr(r.entry));
    }
}
