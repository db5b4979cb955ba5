//! Triad census, degree-preserving null models and motif significance.

mod motif;
mod null_model;
mod triad;

pub use motif::{
    motif_zscores, z_percent_diff, zscores_from_ensemble, MotifScore, MotifZScores, PercentDiff,
    Relevance,
};
pub use null_model::{derive_seed, rewire, rewire_with, BinaryDigraph};
pub use triad::{triad_census, TriadCensus, TriadClass};
