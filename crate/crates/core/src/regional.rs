//! Region-level (continent) aggregation of subgraph flows.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::report::sig6;

const DEFAULT_REGIONS: &str = include_str!("../data/regions.csv");

/// Country to region assignment; region order is first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionMap {
    regions: Vec<String>,
    region_of: BTreeMap<CountryCode, usize>,
}

impl RegionMap {
    /// 117 countries grouped into six continents.
    pub fn continents() -> Self {
        Self::from_csv(DEFAULT_REGIONS.as_bytes()).expect("bundled region map is valid")
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (CountryCode, String)>) -> Self {
        let mut regions: Vec<String> = Vec::new();
        let mut region_of = BTreeMap::new();
        for (country, region) in pairs {
            let idx = match regions.iter().position(|r| *r == region) {
                Some(i) => i,
                None => {
                    regions.push(region);
                    regions.len() - 1
                }
            };
            region_of.insert(country, idx);
        }
        Self { regions, region_of }
    }

    /// Reads `country,region` CSV.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != ["country", "region"] {
            return Err(Error::MalformedRow {
                row: 1,
                message: format!(
                    "expected header `country,region`, found `{}`",
                    header.join(",")
                ),
            });
        }
        let mut pairs = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec.position().map_or(0, |p| p.line());
            let country = CountryCode::new(&rec[0]).map_err(|e| Error::MalformedRow {
                row,
                message: e.to_string(),
            })?;
            let region = rec.get(1).unwrap_or_default().to_string();
            if region.is_empty() {
                return Err(Error::MalformedRow {
                    row,
                    message: "empty region name".into(),
                });
            }
            pairs.push((country, region));
        }
        Ok(Self::from_pairs(pairs))
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn region_index(&self, country: CountryCode) -> Option<usize> {
        self.region_of.get(&country).copied()
    }

    pub fn region(&self, country: CountryCode) -> Option<&str> {
        self.region_index(country).map(|i| self.regions[i].as_str())
    }

    pub fn len(&self) -> usize {
        self.region_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.region_of.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowMode {
    Raw,
    Share,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionalFlowMatrix {
    pub regions: Vec<String>,
    /// Row-major; rows are origin regions.
    pub values: Vec<f64>,
    pub mode: FlowMode,
}

impl RegionalFlowMatrix {
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.values[from * self.regions.len() + to]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_region_matrix(&self.regions, &self.values, out)
    }
}

fn write_region_matrix<W: Write>(regions: &[String], values: &[f64], mut out: W) -> Result<()> {
    let quoted: Vec<String> = regions.iter().map(|r| csv_field(r)).collect();
    writeln!(out, "region,{}", quoted.join(","))?;
    let n = regions.len();
    for (i, r) in quoted.iter().enumerate() {
        let row: Vec<String> = values[i * n..(i + 1) * n]
            .iter()
            .map(|v| sig6(*v))
            .collect();
        writeln!(out, "{r},{}", row.join(","))?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Raw region-to-region flow: cell `(r, s)` sums `w_ij` over edges with origin in
/// `r` and destination in `s`, intra-region cells included.
pub fn regional_flows(g: &Digraph, rm: &RegionMap) -> Result<RegionalFlowMatrix> {
    let k = rm.regions().len();
    let nodes = g.nodes();
    let region: Vec<usize> = nodes
        .iter()
        .map(|&c| {
            rm.region_index(c)
                .ok_or_else(|| Error::UnmappedCountry(c.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; k * k];
    for e in g.edges() {
        counts[region[e.source] * k + region[e.target]] += e.weight;
    }
    Ok(RegionalFlowMatrix {
        regions: rm.regions().to_vec(),
        values: counts.into_iter().map(|c| c as f64).collect(),
        mode: FlowMode::Raw,
    })
}

/// Divides every cell by the grand total.
pub fn to_shares(m: &RegionalFlowMatrix) -> Result<RegionalFlowMatrix> {
    let total = m.total();
    if total <= 0.0 {
        return Err(Error::InvalidParameter(
            "regional matrix has zero total weight".into(),
        ));
    }
    Ok(RegionalFlowMatrix {
        regions: m.regions.clone(),
        values: m.values.iter().map(|v| v / total).collect(),
        mode: FlowMode::Share,
    })
}

/// Percentage-point difference `100 * (a - b)` between two share matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareDiff {
    pub regions: Vec<String>,
    pub values: Vec<f64>,
    /// Cells that are zero on both sides.
    pub null_cells: Vec<bool>,
}

impl ShareDiff {
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.values[from * self.regions.len() + to]
    }

    /// Mean absolute difference over every cell.
    pub fn mean_abs(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    /// Mean absolute difference over cells that are non-zero on at least one side.
    pub fn mean_abs_non_null(&self) -> Option<f64> {
        let live: Vec<f64> = self
            .values
            .iter()
            .zip(&self.null_cells)
            .filter(|(_, &null)| !null)
            .map(|(v, _)| v.abs())
            .collect();
        (!live.is_empty()).then(|| live.iter().sum::<f64>() / live.len() as f64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_region_matrix(&self.regions, &self.values, out)
    }
}

pub fn share_diff(a: &RegionalFlowMatrix, b: &RegionalFlowMatrix) -> Result<ShareDiff> {
    if a.regions != b.regions {
        return Err(Error::Mismatch("region lists differ".into()));
    }
    if a.mode != FlowMode::Share || b.mode != FlowMode::Share {
        return Err(Error::InvalidParameter(
            "share_diff expects share matrices".into(),
        ));
    }
    Ok(ShareDiff {
        regions: a.regions.clone(),
        values: a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| 100.0 * (x - y))
            .collect(),
        null_cells: a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| *x == 0.0 && *y == 0.0)
            .collect(),
    })
}
