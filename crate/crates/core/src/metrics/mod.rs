//! Structural statistics, centralities and strongly connected components.

mod centrality;
mod components;
mod structural;

pub use centrality::{
    betweenness, centrality_table, competition_ranks, pagerank, CentralityTable, Measure,
    PageRankParams,
};
pub use components::{scc, ComponentAssignment};
pub use structural::{
    degree_centralization, dyad_census, geodesics, reciprocity, structural_report,
    structural_report_for, transitivity, DirectedValue, DyadCensus, GeodesicSummary,
    StructuralReport,
};
