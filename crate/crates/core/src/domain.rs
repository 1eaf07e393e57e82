//! Shared types: scenario, radio parameters, interference matrix, coloring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel index, 1-based (channel 1 to channel k).
pub type Channel = u16;

/// Version tag written into every scenario and floorplan file.
pub const FORMAT_VERSION: u32 = 1;

/// Wi-Fi 2.4 GHz band size.
pub const DEFAULT_SPECTRUM_SIZE: u16 = 11;

/// Physical-layer constants shared by every node in a scenario.
///
/// The defaults are working values, not measurements: sensible indoor
/// numbers for 2.4 GHz with a 0 to 30 dB SINR throughput range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioParams {
    /// Transmission power, dBm.
    pub tx_power_dbm: f64,
    pub tx_gain_db: f64,
    pub rx_gain_db: f64,
    /// Losses from walls and other obstacles, dB.
    pub obstacle_loss_db: f64,
    /// Activity index, dB. Only applied to interfering transmissions.
    pub activity_index_db: f64,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    /// SINR at which utility drops to 0.
    pub sinr_min_db: f64,
    /// SINR at which utility saturates at 1.
    pub sinr_max_db: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            tx_power_dbm: 20.0,
            tx_gain_db: 0.0,
            rx_gain_db: 0.0,
            obstacle_loss_db: 0.0,
            activity_index_db: 0.0,
            tx_height_m: 1.5,
            rx_height_m: 1.5,
            sinr_min_db: 0.0,
            sinr_max_db: 30.0,
        }
    }
}

/// Unit-disk radii, one per endpoint-type pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceRadii {
    pub ap_ap: f64,
    pub ap_wd: f64,
    pub wd_wd: f64,
}

impl Default for InterferenceRadii {
    fn default() -> Self {
        InterferenceRadii {
            ap_ap: 30.0,
            ap_wd: 20.0,
            wd_wd: 10.0,
        }
    }
}

impl InterferenceRadii {
    pub fn for_pair(&self, a: NodeKind, b: NodeKind) -> f64 {
        match (a, b) {
            (NodeKind::Ap, NodeKind::Ap) => self.ap_ap,
            (NodeKind::Wd, NodeKind::Wd) => self.wd_wd,
            _ => self.ap_wd,
        }
    }
}

impl std::str::FromStr for InterferenceRadii {
    type Err = Error;

    /// Parses `ap_ap,ap_wd,wd_wd` in meters.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Validation(format!("radii `{s}`: {e}")))?;
        match parts[..] {
            [ap_ap, ap_wd, wd_wd] => Ok(InterferenceRadii {
                ap_ap,
                ap_wd,
                wd_wd,
            }),
            _ => Err(Error::Validation(format!(
                "radii `{s}`: expected three comma-separated values"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Ap,
    Wd,
}

/// A typed vertex of the network graph. APs order before WDs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    pub id: u32,
}

impl Node {
    pub fn ap(id: u32) -> Self {
        Node {
            kind: NodeKind::Ap,
            id,
        }
    }

    pub fn wd(id: u32) -> Self {
        Node {
            kind: NodeKind::Wd,
            id,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NodeKind::Ap => write!(f, "ap{}", self.id),
            NodeKind::Wd => write!(f, "wd{}", self.id),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

impl Site {
    pub fn new(id: u32, x: f64, y: f64) -> Self {
        Site { id, x, y }
    }

    pub fn distance(&self, other: &Site) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// The physical world: where every AP and WD sits and how radios behave.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format: u32,
    pub width_m: f64,
    pub height_m: f64,
    pub aps: Vec<Site>,
    pub wds: Vec<Site>,
    pub radio: RadioParams,
    pub interference_radii: InterferenceRadii,
    pub spectrum_size: u16,
}

impl Scenario {
    pub fn new(width_m: f64, height_m: f64, aps: Vec<Site>, wds: Vec<Site>) -> Self {
        Scenario {
            format: FORMAT_VERSION,
            width_m,
            height_m,
            aps,
            wds,
            radio: RadioParams::default(),
            interference_radii: InterferenceRadii::default(),
            spectrum_size: DEFAULT_SPECTRUM_SIZE,
        }
    }

    pub fn ap_ids(&self) -> Vec<u32> {
        self.aps.iter().map(|s| s.id).collect()
    }

    /// Lists every invariant violation. An empty list means the scenario is
    /// well formed.
    pub fn validate(&self) -> Vec<Violation> {
        validate_scenario(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    UnsupportedFormat(u32),
    NonPositiveDimensions { width_m: f64, height_m: f64 },
    DuplicateId(Node),
    OutOfBounds { node: Node, x: f64, y: f64 },
    BadRadius { pair: &'static str, value: f64 },
    BadRadio(String),
    EmptySpectrum,
    WirelessDevicesWithoutAccessPoint,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnsupportedFormat(v) => write!(f, "unsupported format version {v}"),
            Violation::NonPositiveDimensions { width_m, height_m } => {
                write!(f, "non-positive dimensions {width_m} x {height_m}")
            }
            Violation::DuplicateId(n) => write!(f, "duplicate id {n}"),
            Violation::OutOfBounds { node, x, y } => {
                write!(f, "{node} at ({x}, {y}) is out of bounds")
            }
            Violation::BadRadius { pair, value } => {
                write!(f, "bad radius {pair} = {value}")
            }
            Violation::BadRadio(msg) => write!(f, "bad radio parameters: {msg}"),
            Violation::EmptySpectrum => write!(f, "spectrum size must be at least 1"),
            Violation::WirelessDevicesWithoutAccessPoint => {
                write!(f, "wireless devices present but no access point")
            }
        }
    }
}

pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.format != FORMAT_VERSION {
        out.push(Violation::UnsupportedFormat(s.format));
    }
    let dims_ok = s.width_m > 0.0 && s.height_m > 0.0;
    if !dims_ok {
        out.push(Violation::NonPositiveDimensions {
            width_m: s.width_m,
            height_m: s.height_m,
        });
    }
    for (kind, sites) in [(NodeKind::Ap, &s.aps), (NodeKind::Wd, &s.wds)] {
        let mut seen = BTreeSet::new();
        for site in sites {
            let node = Node { kind, id: site.id };
            if !seen.insert(site.id) {
                out.push(Violation::DuplicateId(node));
            }
            let inside =
                site.x >= 0.0 && site.y >= 0.0 && site.x <= s.width_m && site.y <= s.height_m;
            if dims_ok && !inside {
                out.push(Violation::OutOfBounds {
                    node,
                    x: site.x,
                    y: site.y,
                });
            }
        }
    }
    let r = &s.interference_radii;
    for (pair, value) in [("ap_ap", r.ap_ap), ("ap_wd", r.ap_wd), ("wd_wd", r.wd_wd)] {
        if !(value.is_finite() && value >= 0.0) {
            out.push(Violation::BadRadius { pair, value });
        }
    }
    let p = &s.radio;
    if p.sinr_min_db.partial_cmp(&p.sinr_max_db) != Some(std::cmp::Ordering::Less) {
        out.push(Violation::BadRadio(format!(
            "sinr_min_db {} must be below sinr_max_db {}",
            p.sinr_min_db, p.sinr_max_db
        )));
    }
    if !(p.tx_height_m > 0.0 && p.rx_height_m > 0.0) {
        out.push(Violation::BadRadio(format!(
            "antenna heights must be positive, got {} and {}",
            p.tx_height_m, p.rx_height_m
        )));
    }
    let gains = [
        p.tx_power_dbm,
        p.tx_gain_db,
        p.rx_gain_db,
        p.obstacle_loss_db,
        p.activity_index_db,
    ];
    if gains.iter().any(|g| !g.is_finite()) {
        out.push(Violation::BadRadio("non-finite power or gain".into()));
    }
    if s.spectrum_size == 0 {
        out.push(Violation::EmptySpectrum);
    }
    if s.aps.is_empty() && !s.wds.is_empty() {
        out.push(Violation::WirelessDevicesWithoutAccessPoint);
    }
    out
}

/// Symmetric k x k channel-pair attenuation in dB relative to co-channel.
///
/// Entry `(i, j)` is added to the interference a transmission on channel `i`
/// causes at a receiver on channel `j`. `f64::NEG_INFINITY` marks channel
/// pairs with no spectral overlap; such pairs contribute nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMatrix {
    k: usize,
    db: Vec<f64>,
    linear: Vec<f64>,
}

impl InterferenceMatrix {
    /// Builds a matrix from row-major dB values.
    pub fn from_db(k: usize, db: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Matrix("empty matrix".into()));
        }
        if db.len() != k * k {
            return Err(Error::Matrix(format!(
                "expected {} entries for k = {k}, got {}",
                k * k,
                db.len()
            )));
        }
        for i in 0..k {
            for j in 0..k {
                let v = db[i * k + j];
                if v.is_nan() || v == f64::INFINITY {
                    return Err(Error::Matrix(format!(
                        "entry ({}, {}) is {v}",
                        i + 1,
                        j + 1
                    )));
                }
                if v != db[j * k + i] {
                    return Err(Error::Matrix(format!(
                        "not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let linear = db.iter().map(|&v| db_to_linear(v)).collect();
        Ok(InterferenceMatrix { k, db, linear })
    }

    /// Rectangular spectral-mask overlap model.
    ///
    /// Two channels `|i - j|` apart with centers `spacing` MHz apart and
    /// masks `bandwidth` MHz wide overlap by the fraction
    /// `max(0, 1 - |i - j| * spacing / bandwidth)`; the dB entry is
    /// `10 log10` of that fraction.
    pub fn spectral_mask(k: usize, spacing_mhz: f64, bandwidth_mhz: f64) -> Result<Self> {
        if !(spacing_mhz > 0.0 && spacing_mhz.is_finite()) {
            return Err(Error::Validation(format!(
                "channel spacing must be positive, got {spacing_mhz}"
            )));
        }
        if !(bandwidth_mhz > 0.0 && bandwidth_mhz.is_finite()) {
            return Err(Error::Validation(format!(
                "channel bandwidth must be positive, got {bandwidth_mhz}"
            )));
        }
        let mut db = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let sep = i.abs_diff(j) as f64;
                let overlap = (1.0 - sep * spacing_mhz / bandwidth_mhz).max(0.0);
                db.push(linear_to_db(overlap));
            }
        }
        Self::from_db(k, db)
    }

    /// 2.4 GHz defaults: 5 MHz channel spacing, 22 MHz wide channels.
    pub fn default_for(k: usize) -> Result<Self> {
        Self::spectral_mask(k, 5.0, 22.0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// dB entry for 1-based channels.
    pub fn db(&self, ci: Channel, cj: Channel) -> f64 {
        self.db[self.offset(ci, cj)]
    }

    /// Linear overlap `10^(db / 10)` for 1-based channels; 0 for `-inf`.
    pub fn overlap(&self, ci: Channel, cj: Channel) -> f64 {
        self.linear[self.offset(ci, cj)]
    }

    /// Row-major linear overlaps indexed by 0-based channel.
    pub fn linear_table(&self) -> &[f64] {
        &self.linear
    }

    fn offset(&self, ci: Channel, cj: Channel) -> usize {
        let (i, j) = (ci as usize, cj as usize);
        assert!(
            (1..=self.k).contains(&i) && (1..=self.k).contains(&j),
            "channel pair ({ci}, {cj}) outside 1..={}",
            self.k
        );
        (i - 1) * self.k + (j - 1)
    }

    /// Reads the CSV matrix format: k rows of k cells, `-inf` or `inf-` for
    /// no overlap.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record.iter().map(parse_cell).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let k = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::Matrix(format!(
                "row {} has {} cells, expected {k}",
                i + 1,
                row.len()
            )));
        }
        Self::from_db(k, rows.into_iter().flatten().collect())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        for row in self.db.chunks(self.k) {
            wtr.write_record(row.iter().map(|&v| {
                if v == f64::NEG_INFINITY {
                    "-inf".to_string()
                } else {
                    v.to_string()
                }
            }))?;
        }
        wtr.flush().map_err(|e| Error::io("<matrix csv>", e))?;
        Ok(())
    }
}

fn parse_cell(cell: &str) -> Result<f64> {
    match cell {
        "-inf" | "inf-" => Ok(f64::NEG_INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| Error::Matrix(format!("cell `{other}`: {e}"))),
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    if db == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(db / 10.0)
    }
}

pub fn linear_to_db(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * x.log10()
    }
}

/// A channel for every AP. WDs carry none; they use their AP's channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    pub channels: BTreeMap<u32, Channel>,
}

impl Coloring {
    /// Pairs `ap_ids[i]` with `assignment[i]`.
    pub fn from_assignment(ap_ids: &[u32], assignment: &[Channel]) -> Self {
        assert_eq!(ap_ids.len(), assignment.len());
        Coloring {
            channels: ap_ids
                .iter()
                .copied()
                .zip(assignment.iter().copied())
                .collect(),
        }
    }

    pub fn uniform(ap_ids: &[u32], channel: Channel) -> Self {
        Coloring {
            channels: ap_ids.iter().map(|&id| (id, channel)).collect(),
        }
    }

    pub fn channel(&self, ap: u32) -> Option<Channel> {
        self.channels.get(&ap).copied()
    }

    /// Channels in the order of `ap_ids`.
    pub fn to_assignment(&self, ap_ids: &[u32]) -> Result<Vec<Channel>> {
        ap_ids
            .iter()
            .map(|id| {
                self.channel(*id)
                    .ok_or_else(|| Error::Validation(format!("coloring misses ap{id}")))
            })
            .collect()
    }

    /// Checks totality over `ap_ids` and that channels lie in `1..=k`.
    pub fn check(&self, ap_ids: &[u32], k: usize) -> Result<()> {
        if self.channels.len() != ap_ids.len() {
            return Err(Error::Validation(format!(
                "coloring has {} entries for {} access points",
                self.channels.len(),
                ap_ids.len()
            )));
        }
        for c in self.to_assignment(ap_ids)? {
            if c == 0 || c as usize > k {
                return Err(Error::Validation(format!("channel {c} outside 1..={k}")));
            }
        }
        Ok(())
    }
}
