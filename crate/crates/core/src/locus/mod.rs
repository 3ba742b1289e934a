//! Activity and zero loci, root-of-unity certificates and the pentagon
//! threshold.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::numeric::gauss::{fmt_rational, rat_to_f64};
use crate::numeric::parse::parse_rational;
use crate::numeric::{GaussianRational, NumericError};
use crate::reliability::ReliabilityError;

pub mod atlas;
pub mod pentagon;
pub mod scan;
pub mod threshold;
pub mod unity;

pub use atlas::{density, zero_atlas, AtlasConfig, DensityConfig, DensityReport, ZeroAtlas};
pub use pentagon::{pentagon_report, PentagonReport};
pub use scan::{activity_scan, scan_point, ScanConfig, Witness};
pub use threshold::{unit_threshold, UnitThreshold};
pub use unity::{unity_gadget, unity_matrix, verify_unity, UnityCertificate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocusError {
    #[error("k = {0} is outside 5..=9")]
    InvalidK(u32),
    #[error("could not certify k = {k} up to {bits} bits: {what}")]
    NotCertified { k: u32, bits: u32, what: String },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("word budget {0} exceeds 10000")]
    Budget(usize),
    #[error("max_leaves {0} exceeds 16")]
    Leaves(usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Reliability(#[from] ReliabilityError),
    #[error("output: {0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocusClass {
    Active,
    Zero,
    Exceptional,
    InactiveAtBudget,
}

impl LocusClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LocusClass::Active => "active",
            LocusClass::Zero => "zero",
            LocusClass::Exceptional => "exceptional",
            LocusClass::InactiveAtBudget => "inactive-at-budget",
        }
    }
}

impl fmt::Display for LocusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One classified parameter value. `point` is exact: a grid value for
/// scans, the dyadic root approximation for atlases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusSample {
    pub re: f64,
    pub im: f64,
    pub point: GaussianRational,
    pub class: LocusClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// `ŷ` of an active witness, or the deflated polynomial of a zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<String>,
    /// Upper bound on `|R(point)|` for zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// Axis-parallel rectangle with exact corners. A degenerate side gives a
/// one-dimensional grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub re_min: BigRational,
    pub re_max: BigRational,
    pub im_min: BigRational,
    pub im_max: BigRational,
}

impl Region {
    pub fn new(re_min: BigRational, re_max: BigRational, im_min: BigRational, im_max: BigRational) -> Result<Self, LocusError> {
        if re_min > re_max || im_min > im_max {
            return Err(LocusError::InvalidRegion("minimum exceeds maximum".into()));
        }
        Ok(Region { re_min, re_max, im_min, im_max })
    }

    /// The closed unit square `[−1, 1]²`.
    pub fn unit_square() -> Self {
        let one = BigRational::from_integer(1.into());
        Region { re_min: -one.clone(), re_max: one.clone(), im_min: -one.clone(), im_max: one }
    }

    /// `n` cell centres per non-degenerate side, row-major from the
    /// bottom-left.
    pub fn grid(&self, n: usize) -> Vec<GaussianRational> {
        let axis = |lo: &BigRational, hi: &BigRational| -> Vec<BigRational> {
            if lo == hi || n == 0 {
                return vec![lo.clone()];
            }
            let w = (hi - lo) / BigRational::from_integer((2 * n).into());
            (0..n).map(|i| lo + &w * BigRational::from_integer((2 * i + 1).into())).collect()
        };
        let xs = axis(&self.re_min, &self.re_max);
        let ys = axis(&self.im_min, &self.im_max);
        ys.iter().flat_map(|y| xs.iter().map(move |x| GaussianRational::new(x.clone(), y.clone()))).collect()
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        self.re_min <= z.re && z.re <= self.re_max && self.im_min <= z.im && z.im <= self.im_max
    }
}

/// `re_min,re_max,im_min,im_max`, each exact or decimal.
impl FromStr for Region {
    type Err = LocusError;
    fn from_str(s: &str) -> Result<Self, LocusError> {
        let parts: Vec<&str> = s.split(',').map(|x| x.trim()).collect();
        if parts.len() != 4 {
            return Err(LocusError::InvalidRegion(format!("expected 4 comma-separated bounds, got {:?}", s)));
        }
        let v = parts.iter().map(|x| parse_rational(x, true)).collect::<Result<Vec<_>, _>>()?;
        Region::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RegionRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RegionRepr::deserialize(d)?;
        let p = |x: &str| parse_rational(x, true).map_err(serde::de::Error::custom);
        Region::new(p(&r.re_min)?, p(&r.re_max)?, p(&r.im_min)?, p(&r.im_max)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RegionRepr {
    re_min: String,
    re_max: String,
    im_min: String,
    im_max: String,
    #[serde(default, skip_deserializing)]
    approx: [f64; 4],
}

impl From<&Region> for RegionRepr {
    fn from(r: &Region) -> Self {
        RegionRepr {
            re_min: fmt_rational(&r.re_min),
            re_max: fmt_rational(&r.re_max),
            im_min: fmt_rational(&r.im_min),
            im_max: fmt_rational(&r.im_max),
            approx: [rat_to_f64(&r.re_min), rat_to_f64(&r.re_max), rat_to_f64(&r.im_min), rat_to_f64(&r.im_max)],
        }
    }
}

/// A JSON tile: the samples of one run plus what produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub region: Region,
    pub metadata: TileMeta,
    pub samples: Vec<LocusSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileMeta {
    /// `scan` or `atlas`.
    pub kind: String,
    /// Base gadget, as an adjacency-style edge list.
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_leaves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub real_mode: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    re: f64,
    im: f64,
    class: &'a str,
    witness: &'a str,
    residual: String,
}

/// Writes `re,im,class,witness,residual` rows with a header.
pub fn write_csv<W: Write>(out: W, samples: &[LocusSample]) -> Result<(), LocusError> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        let row = CsvRow {
            re: s.re,
            im: s.im,
            class: s.class.as_str(),
            witness: s.witness.as_deref().unwrap_or(""),
            residual: s.residual.map(|r| format!("{r:e}")).unwrap_or_default(),
        };
        w.serialize(row).map_err(|e| LocusError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| LocusError::Io(e.to_string()))
}

fn sample_at(point: GaussianRational, class: LocusClass) -> LocusSample {
    let c = point.to_c64();
    LocusSample { re: c.re, im: c.im, point, class, witness: None, witness_value: None, residual: None }
}
