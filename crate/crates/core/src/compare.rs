//! Multidimensional comparison of two datasets.
//!
//! Each subgraph yields a standardized feature vector per country (five
//! centrality features plus a one-hot block over its strongly connected
//! components). Euclidean distances between countries are averaged over all
//! subgraphs of a dataset. Each country's row of averaged distances is then
//! correlated between the two datasets.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::graph::{Direction, TopKSubgraph};
use crate::metrics::{CentralityTable, ComponentAssignment};
use crate::report::sig6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub countries: Vec<CountryCode>,
    pub direction: Direction,
    pub k: usize,
    pub columns: Vec<String>,
    /// One standardized row per country.
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Centers a column and scales it to unit population variance. Columns whose
/// values are all identical become all zeros.
pub fn standardize(column: &mut [f64]) {
    let n = column.len() as f64;
    let constant = column.windows(2).all(|w| w[0] == w[1]);
    if column.is_empty() || constant {
        column.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let mean = column.iter().sum::<f64>() / n;
    let var = column.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    column.iter_mut().for_each(|x| *x = (*x - mean) / std);
}

pub fn feature_matrix(
    sg: &TopKSubgraph,
    metrics: &CentralityTable,
    comps: &ComponentAssignment,
) -> Result<FeatureMatrix> {
    let countries = sg.nodes().to_vec();
    let n = countries.len();
    let complementary = match sg.direction {
        Direction::Out => "in_degree",
        Direction::In => "out_degree",
    };
    let mut columns: Vec<String> = [
        "in_strength",
        "out_strength",
        "betweenness",
        "pagerank",
        complementary,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut data: Vec<Vec<f64>> = vec![Vec::with_capacity(n); 5];
    let mut component = Vec::with_capacity(n);

    for &c in &countries {
        let i = metrics
            .index_of(c)
            .ok_or_else(|| Error::Missing(format!("centrality values for {c}")))?;
        let ci = comps
            .countries
            .binary_search(&c)
            .map_err(|_| Error::Missing(format!("component for {c}")))?;
        data[0].push(metrics.in_strength[i] as f64);
        data[1].push(metrics.out_strength[i] as f64);
        data[2].push(metrics.betweenness[i]);
        data[3].push(metrics.pagerank[i]);
        data[4].push(match sg.direction {
            Direction::Out => metrics.in_degree[i],
            Direction::In => metrics.out_degree[i],
        } as f64);
        component.push(comps.component_of[ci]);
    }

    for id in 0..comps.component_count() {
        columns.push(format!("component_{id}"));
        data.push(
            component
                .iter()
                .map(|&c| if c == id { 1.0 } else { 0.0 })
                .collect(),
        );
    }
    for col in &mut data {
        standardize(col);
    }
    let rows = (0..n)
        .map(|i| data.iter().map(|col| col[i]).collect())
        .collect();
    Ok(FeatureMatrix {
        countries,
        direction: sg.direction,
        k: sg.k,
        columns,
        rows,
    })
}

/// Square country-by-country matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountryMatrix {
    pub countries: Vec<CountryCode>,
    /// Row-major.
    pub values: Vec<f64>,
}

impl CountryMatrix {
    pub fn len(&self) -> usize {
        self.countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.countries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            countries: self.countries.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<&str> = self.countries.iter().map(|c| c.as_str()).collect();
        writeln!(out, "country,{}", header.join(","))?;
        for (i, c) in self.countries.iter().enumerate() {
            let row: Vec<String> = self.row(i).iter().map(|v| sig6(*v)).collect();
            writeln!(out, "{c},{}", row.join(","))?;
        }
        Ok(())
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Element-wise mean of per-subgraph Euclidean distance matrices over the
/// countries present in every feature matrix.
pub fn avg_distance_matrix(fms: &[FeatureMatrix]) -> Result<CountryMatrix> {
    let first = fms
        .first()
        .ok_or_else(|| Error::InvalidParameter("no feature matrices given".into()))?;
    let common: Vec<CountryCode> = first
        .countries
        .iter()
        .copied()
        .filter(|c| fms.iter().all(|fm| fm.countries.binary_search(c).is_ok()))
        .collect();
    if common.is_empty() {
        return Err(Error::Mismatch(
            "feature matrices share no countries".into(),
        ));
    }
    let m = common.len();
    let mut values = vec![0.0; m * m];
    for fm in fms {
        let idx: Vec<usize> = common
            .iter()
            .map(|c| fm.countries.binary_search(c).expect("common country"))
            .collect();
        for a in 0..m {
            for b in a + 1..m {
                let d = euclidean(&fm.rows[idx[a]], &fm.rows[idx[b]]);
                values[a * m + b] += d;
                values[b * m + a] += d;
            }
        }
    }
    let count = fms.len() as f64;
    values.iter_mut().for_each(|v| *v /= count);
    Ok(CountryMatrix {
        countries: common,
        values,
    })
}

/// Pearson correlation; `None` for fewer than 3 points or a constant side.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return None;
    }
    let constant = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
    if constant(x) || constant(y) {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountryCorrelation {
    pub country: CountryCode,
    pub rho: Option<f64>,
    /// Off-diagonal entries compared.
    pub compared: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub common_countries: usize,
    pub entries: Vec<CountryCorrelation>,
}

impl CorrelationReport {
    pub fn get(&self, country: CountryCode) -> Option<&CountryCorrelation> {
        self.entries.iter().find(|e| e.country == country)
    }

    /// `country,rho,flag`; undefined correlations are written empty and flagged.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "country,rho,flag")?;
        for e in &self.entries {
            match e.rho {
                Some(r) => writeln!(out, "{},{},", e.country, sig6(r))?,
                None => writeln!(out, "{},,undefined", e.country)?,
            }
        }
        Ok(())
    }
}

/// Per-country Pearson correlation between the two datasets' rows, restricted
/// to common countries and excluding the self-distance entry.
pub fn country_correlations(a: &CountryMatrix, b: &CountryMatrix) -> Result<CorrelationReport> {
    let common: Vec<CountryCode> = a
        .countries
        .iter()
        .copied()
        .filter(|c| b.countries.binary_search(c).is_ok())
        .collect();
    if common.len() < 3 {
        return Err(Error::TooFewNodes {
            required: 3,
            actual: common.len(),
        });
    }
    let ia: Vec<usize> = common
        .iter()
        .map(|c| a.countries.binary_search(c).unwrap())
        .collect();
    let ib: Vec<usize> = common
        .iter()
        .map(|c| b.countries.binary_search(c).unwrap())
        .collect();
    let entries = (0..common.len())
        .map(|r| {
            let others = (0..common.len()).filter(|&s| s != r);
            let x: Vec<f64> = others.clone().map(|s| a.get(ia[r], ia[s])).collect();
            let y: Vec<f64> = others.map(|s| b.get(ib[r], ib[s])).collect();
            CountryCorrelation {
                country: common[r],
                rho: pearson(&x, &y),
                compared: x.len(),
            }
        })
        .collect();
    Ok(CorrelationReport {
        common_countries: common.len(),
        entries,
    })
}
