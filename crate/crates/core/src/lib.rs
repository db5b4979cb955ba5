//! Country-level tourist mobility networks built from geotagged check-ins or
//! official origin-destination flow matrices.
//!
//! The typical path is [`ingest`] → [`graph::topk`] → the analysis modules
//! ([`metrics`], [`clustering`], [`census`], [`regional`], [`compare`]).
//! [`pipeline`] wires them into the batch commands of the `tourflow` binary.

pub mod census;
pub mod clustering;
pub mod compare;
pub mod config;
pub mod country;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod plot;
pub mod regional;
pub mod report;
pub mod synthetic;

pub use country::CountryCode;
pub use error::{Error, Result};
pub use graph::{topk, topk_in, topk_out, Digraph, Direction, MobilityGraph, TopKSubgraph};
