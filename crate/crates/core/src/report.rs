//! Tabular and JSON serialization of analysis results.
//!
//! CSV values carry 6 significant digits; JSON keeps full precision. Every
//! persisted file starts with a [`Metadata`] header.

use std::io::Write;

use serde::Serialize;

use crate::census::{MotifZScores, PercentDiff, TriadCensus};
use crate::error::Result;
use crate::metrics::{CentralityTable, ComponentAssignment, Measure, StructuralReport};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to 6 significant digits and prints the shortest exact form of the
/// rounded value.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("valid float");
    format!("{rounded}")
}

fn opt6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Metadata {
    pub fn new(config_hash: impl Into<String>, seed: u64) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config_hash: config_hash.into(),
            seed,
        }
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("tool={} {}", self.tool, self.version),
            format!("config_hash={}", self.config_hash),
            format!("seed={}", self.seed),
        ]
    }

    /// `# key=value` lines for CSV output.
    pub fn write_comment<W: Write>(&self, out: &mut W) -> Result<()> {
        for line in self.lines() {
            writeln!(out, "# {line}")?;
        }
        Ok(())
    }

    /// Pretty JSON object `{"metadata": ..., "data": ...}`.
    pub fn wrap_json<T: Serialize + ?Sized>(&self, data: &T) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Doc<'a, T: ?Sized> {
            metadata: &'a Metadata,
            data: &'a T,
        }
        let mut bytes = serde_json::to_vec_pretty(&Doc {
            metadata: self,
            data,
        })?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

/// Prepends the metadata comment block to a CSV body produced by `body`.
pub fn csv_with_header(
    meta: &Metadata,
    body: impl FnOnce(&mut Vec<u8>) -> Result<()>,
) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    meta.write_comment(&mut buf)?;
    body(&mut buf)?;
    Ok(buf)
}

pub fn write_structural_csv<W: Write>(r: &StructuralReport, mut out: W) -> Result<()> {
    writeln!(out, "metric,value")?;
    let rows: Vec<(&str, String)> = vec![
        ("node_count", r.node_count.to_string()),
        ("edge_count", r.edge_count.to_string()),
        ("density", sig6(r.density)),
        ("avg_geodesic", opt6(r.avg_geodesic)),
        (
            "diameter",
            r.diameter.map(|d| d.to_string()).unwrap_or_default(),
        ),
        ("reachable_pairs", r.reachable_pairs.to_string()),
        ("unreachable_pairs", r.unreachable_pairs.to_string()),
        ("avg_degree", sig6(r.avg_degree)),
        (
            "degree_centralization",
            opt6(r.degree_centralization.map(|c| c.value)),
        ),
        (
            "degree_centralization_direction",
            r.degree_centralization
                .map(|c| c.direction.as_str().to_string())
                .unwrap_or_default(),
        ),
        ("avg_strength", sig6(r.avg_strength)),
        ("dyads_mutual", r.dyads.mutual.to_string()),
        ("dyads_asymmetric", r.dyads.asymmetric.to_string()),
        ("dyads_null", r.dyads.null.to_string()),
        ("reciprocity", sig6(r.reciprocity)),
        ("transitivity", sig6(r.transitivity)),
    ];
    for (k, v) in rows {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

/// `rank,country,value` for one measure.
pub fn write_centrality_csv<W: Write>(
    t: &CentralityTable,
    measure: Measure,
    mut out: W,
) -> Result<()> {
    writeln!(out, "rank,country,value")?;
    for (rank, c, v) in t.ranking(measure) {
        writeln!(out, "{rank},{c},{}", sig6(v))?;
    }
    Ok(())
}

/// `country,component_id,component_size`.
pub fn write_scc_csv<W: Write>(a: &ComponentAssignment, mut out: W) -> Result<()> {
    writeln!(out, "country,component_id,component_size")?;
    for (i, c) in a.countries.iter().enumerate() {
        let id = a.component_of[i];
        writeln!(out, "{c},{id},{}", a.components[id].len())?;
    }
    Ok(())
}

pub fn write_census_csv<W: Write>(c: &TriadCensus, mut out: W) -> Result<()> {
    writeln!(out, "class,count")?;
    for (class, n) in c.iter() {
        writeln!(out, "{class},{n}")?;
    }
    Ok(())
}

/// `class,real,mean,std,z,flag`; flag is `relevant`, `undefined` or empty.
pub fn write_zscores_csv<W: Write>(z: &MotifZScores, mut out: W) -> Result<()> {
    writeln!(out, "class,real,mean,std,z,flag")?;
    for s in &z.scores {
        let flag = match (s.z, s.relevant) {
            (None, _) => "undefined",
            (Some(_), true) => "relevant",
            _ => "",
        };
        writeln!(
            out,
            "{},{},{},{},{},{flag}",
            s.class,
            s.real_count,
            sig6(s.null_mean),
            sig6(s.null_std),
            opt6(s.z)
        )?;
    }
    Ok(())
}

/// `class,percent_diff,flag`.
pub fn write_diff_csv<W: Write>(d: &[PercentDiff], mut out: W) -> Result<()> {
    writeln!(out, "class,percent_diff,flag")?;
    for p in d {
        let flag = if p.value.is_none() { "undefined" } else { "" };
        writeln!(out, "{},{},{flag}", p.class, opt6(p.value))?;
    }
    Ok(())
}
