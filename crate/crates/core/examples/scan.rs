//! Activity scan of a small grid, written as CSV.

use netrel::graph::TwoTerminal;
use netrel::locus::{activity_scan, write_csv, Region, ScanConfig};

fn main() {
    let region: Region = "-1.5,1.5,-1.5,1.5".parse().unwrap();
    let cfg = ScanConfig { budget: 300, ..Default::default() };
    let samples = activity_scan(&TwoTerminal::path(2), &region, 6, &cfg).unwrap();
    write_csv(std::io::stdout().lock(), &samples).unwrap();
}
