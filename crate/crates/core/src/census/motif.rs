use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::null_model::{derive_seed, rewire};
use super::triad::{triad_census, TriadCensus, TriadClass};
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Report-only annotation thresholds for calling a motif relevant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relevance {
    pub min_z: f64,
    pub min_count: u64,
}

impl Default for Relevance {
    fn default() -> Self {
        Self {
            min_z: 2.0,
            min_count: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotifScore {
    pub class: TriadClass,
    pub real_count: u64,
    pub null_mean: f64,
    /// Population standard deviation over the ensemble.
    pub null_std: f64,
    /// `None` when the null distribution has zero spread.
    pub z: Option<f64>,
    pub relevant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotifZScores {
    pub ensemble_size: usize,
    pub seed: u64,
    pub swaps_per_edge: usize,
    /// One entry per connected triad class, in standard order.
    pub scores: Vec<MotifScore>,
}

impl MotifZScores {
    pub fn get(&self, class: TriadClass) -> Option<&MotifScore> {
        self.scores.iter().find(|s| s.class == class)
    }

    pub fn annotate(&mut self, relevance: Relevance) {
        for s in &mut self.scores {
            s.relevant =
                s.z.is_some_and(|z| z >= relevance.min_z) && s.real_count >= relevance.min_count;
        }
    }

    /// Connected class with the largest defined z (ties: first in standard order).
    pub fn argmax(&self) -> Option<TriadClass> {
        let mut best: Option<(TriadClass, f64)> = None;
        for s in &self.scores {
            if let Some(z) = s.z {
                if best.map_or(true, |(_, b)| z > b) {
                    best = Some((s.class, z));
                }
            }
        }
        best.map(|(c, _)| c)
    }
}

/// Z-scores of the connected classes of `real` against an explicit null ensemble.
pub fn zscores_from_ensemble(
    real: &TriadCensus,
    ensemble: &[TriadCensus],
    seed: u64,
    swaps_per_edge: usize,
) -> Result<MotifZScores> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidParameter(
            "ensemble needs at least 2 samples".into(),
        ));
    }
    let size = ensemble.len() as f64;
    let scores = TriadClass::CONNECTED
        .into_iter()
        .map(|class| {
            let mean = ensemble.iter().map(|c| c.get(class) as f64).sum::<f64>() / size;
            let var = ensemble
                .iter()
                .map(|c| (c.get(class) as f64 - mean).powi(2))
                .sum::<f64>()
                / size;
            let std = var.sqrt();
            let real_count = real.get(class);
            MotifScore {
                class,
                real_count,
                null_mean: mean,
                null_std: std,
                z: (std > 0.0).then(|| (real_count as f64 - mean) / std),
                relevant: false,
            }
        })
        .collect();
    let mut out = MotifZScores {
        ensemble_size: ensemble.len(),
        seed,
        swaps_per_edge,
        scores,
    };
    out.annotate(Relevance::default());
    Ok(out)
}

/// Censuses `ensemble_size` independently rewired copies of `g` (sample `i` is
/// seeded from `(seed, i)`, so results do not depend on thread scheduling) and
/// scores the real census against them.
pub fn motif_zscores(
    g: &Digraph,
    ensemble_size: usize,
    seed: u64,
    swaps_per_edge: usize,
) -> Result<MotifZScores> {
    if ensemble_size < 2 {
        return Err(Error::InvalidParameter(
            "ensemble_size must be at least 2".into(),
        ));
    }
    let real = triad_census(g)?;
    let ensemble: Vec<TriadCensus> = (0..ensemble_size)
        .into_par_iter()
        .map(|i| {
            let sample = rewire(g, derive_seed(seed, &format!("sample/{i}")), swaps_per_edge);
            triad_census(&sample)
        })
        .collect::<Result<_>>()?;
    zscores_from_ensemble(&real, &ensemble, seed, swaps_per_edge)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercentDiff {
    pub class: TriadClass,
    /// `100 * (z_a - z_b) / |z_b|`; `None` when undefined.
    pub value: Option<f64>,
}

/// Per-class percentage difference of z-values, `b` being the reference side.
pub fn z_percent_diff(a: &MotifZScores, b: &MotifZScores) -> Result<Vec<PercentDiff>> {
    let classes_a: Vec<_> = a.scores.iter().map(|s| s.class).collect();
    let classes_b: Vec<_> = b.scores.iter().map(|s| s.class).collect();
    if classes_a != classes_b {
        return Err(Error::Mismatch("motif class sets differ".into()));
    }
    Ok(a.scores
        .iter()
        .zip(&b.scores)
        .map(|(sa, sb)| PercentDiff {
            class: sa.class,
            value: match (sa.z, sb.z) {
                (Some(za), Some(zb)) if zb != 0.0 => Some(100.0 * (za - zb) / zb.abs()),
                _ => None,
            },
        })
        .collect())
}
