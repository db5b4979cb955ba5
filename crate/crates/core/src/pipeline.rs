//! Batch pipeline behind the command-line subcommands.
//!
//! `build` turns each configured dataset into a persisted flow graph.
//! `analyze` runs every module on each Top-k subgraph and, with two datasets,
//! the cross-dataset comparisons. `plot` renders report CSVs to SVG and `export`
//! serializes graphs. All outputs live under the configured output directory,
//! start with a metadata header and are written atomically.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::census::{
    motif_zscores, triad_census, z_percent_diff, MotifZScores, PercentDiff, TriadCensus,
};
use crate::clustering::{
    average_linkage, distance_matrix, filter_singletons, ClusterAssignment, DistanceMatrix,
};
use crate::compare::{
    avg_distance_matrix, country_correlations, feature_matrix, CorrelationReport, CountryMatrix,
    FeatureMatrix,
};
use crate::config::{DatasetConfig, RunConfig, Source};
use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::export::{export_graph, ExportFormat};
use crate::graph::{topk, Direction, MobilityGraph, TopKSubgraph};
use crate::ingest::{
    build_mobility_graph, filter_countries, infer_homes, parse_checkins, parse_flow_matrix,
    write_flow_matrix, InputFormat,
};
use crate::metrics::{
    centrality_table, scc, structural_report, CentralityTable, ComponentAssignment, Measure,
    StructuralReport,
};
use crate::plot::{plot, PlotKind};
use crate::regional::{
    regional_flows, share_diff, to_shares, RegionMap, RegionalFlowMatrix, ShareDiff,
};
use crate::report::{self, csv_with_header, Metadata};

/// One file of an output bundle, path relative to the output directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub path: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(parent)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("no file name in {}", path.display())))?;
    let tmp = parent.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_bundle(out_dir: &Path, files: &[OutputFile]) -> Result<Vec<ManifestEntry>> {
    let mut entries = files
        .par_iter()
        .map(|f| {
            write_atomic(&out_dir.join(&f.path), &f.bytes)
                .map_err(|e| e.context(f.path.clone()))?;
            Ok(ManifestEntry {
                path: f.path.clone(),
                sha256: sha256_hex(&f.bytes),
                bytes: f.bytes.len() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(entries)
}

pub fn metadata(cfg: &RunConfig) -> Metadata {
    Metadata::new(cfg.hash(), cfg.seed)
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedRowInfo {
    pub row: u64,
    pub reason: String,
}

/// Ingestion statistics for one dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetBuild {
    pub name: String,
    pub label: String,
    pub source: &'static str,
    pub input: String,
    pub records: Option<usize>,
    pub skipped_rows: Vec<SkippedRowInfo>,
    pub users: Option<usize>,
    pub users_with_kept_home: Option<usize>,
    pub checkin_threshold: Option<u64>,
    pub countries_seen: Option<usize>,
    pub countries_dropped: Vec<CountryCode>,
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: u64,
}

/// Builds one dataset's flow graph in memory.
pub fn build_dataset(d: &DatasetConfig, cfg: &RunConfig) -> Result<(MobilityGraph, DatasetBuild)> {
    let path = d.source.path();
    let ctx = |e: Error| e.context(format!("ingest {}", path.display()));
    let file = fs::File::open(path).map_err(|e| ctx(e.into()))?;
    match &d.source {
        Source::Checkins { format, .. } => {
            let format = match format {
                Some(f) => *f,
                None => InputFormat::from_path(path).map_err(ctx)?,
            };
            let table = parse_checkins(file, format, cfg.parse_mode).map_err(ctx)?;
            let homes = infer_homes(&table);
            let allowed = filter_countries(&table, cfg.checkin_threshold);
            let g = build_mobility_graph(&table, &homes, &allowed, &d.label).map_err(ctx)?;
            let stats = DatasetBuild {
                name: d.name.clone(),
                label: d.label.clone(),
                source: "checkins",
                input: file_name(path),
                records: Some(table.len()),
                skipped_rows: table
                    .skipped()
                    .iter()
                    .map(|s| SkippedRowInfo {
                        row: s.row,
                        reason: s.reason.clone(),
                    })
                    .collect(),
                users: Some(table.user_counts().len()),
                users_with_kept_home: Some(homes.values().filter(|h| allowed.contains(h)).count()),
                checkin_threshold: Some(cfg.checkin_threshold),
                countries_seen: Some(table.country_counts().len()),
                countries_dropped: table
                    .country_counts()
                    .keys()
                    .filter(|c| !allowed.contains(c))
                    .copied()
                    .collect(),
                nodes: g.node_count(),
                edges: g.edge_count(),
                total_weight: g.total_weight(),
            };
            Ok((g, stats))
        }
        Source::Flows { .. } => {
            let parsed = parse_flow_matrix(file).map_err(ctx)?;
            let g = MobilityGraph::new(d.label.clone(), parsed.into_digraph());
            let stats = DatasetBuild {
                name: d.name.clone(),
                label: d.label.clone(),
                source: "flows",
                input: file_name(path),
                records: None,
                skipped_rows: Vec::new(),
                users: None,
                users_with_kept_home: None,
                checkin_threshold: None,
                countries_seen: None,
                countries_dropped: Vec::new(),
                nodes: g.node_count(),
                edges: g.edge_count(),
                total_weight: g.total_weight(),
            };
            Ok((g, stats))
        }
    }
}

pub fn graph_path(name: &str) -> String {
    format!("graphs/{name}.csv")
}

#[derive(Debug)]
pub struct BuildOutput {
    pub graphs: Vec<(String, MobilityGraph)>,
    pub datasets: Vec<DatasetBuild>,
    pub files: Vec<ManifestEntry>,
}

/// Ingests every configured dataset and writes `graphs/<name>.csv` plus
/// `build_manifest.json`.
pub fn cmd_build(cfg: &RunConfig) -> Result<BuildOutput> {
    cfg.validate()?;
    let datasets = cfg.datasets()?;
    if datasets.is_empty() {
        return Err(Error::Config("no dataset configured".into()));
    }
    let meta = metadata(cfg);
    let built = datasets
        .par_iter()
        .map(|d| build_dataset(d, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut files = Vec::new();
    for (g, stats) in &built {
        let mut bytes = Vec::new();
        write_flow_matrix(g, &meta.lines(), &mut bytes)?;
        files.push(OutputFile {
            path: graph_path(&stats.name),
            bytes,
        });
    }
    let mut entries = write_bundle(&cfg.output_dir, &files)?;

    #[derive(Serialize)]
    struct BuildManifest<'a> {
        datasets: Vec<&'a DatasetBuild>,
        files: &'a [ManifestEntry],
    }
    let manifest = meta.wrap_json(&BuildManifest {
        datasets: built.iter().map(|(_, s)| s).collect(),
        files: &entries,
    })?;
    entries.extend(write_bundle(
        &cfg.output_dir,
        &[OutputFile {
            path: "build_manifest.json".into(),
            bytes: manifest,
        }],
    )?);

    let (graphs, datasets) = built
        .into_iter()
        .map(|(g, s)| ((s.name.clone(), g), s))
        .unzip();
    Ok(BuildOutput {
        graphs,
        datasets,
        files: entries,
    })
}

/// Every single-dataset result for one Top-k subgraph.
#[derive(Clone, Debug)]
pub struct SubgraphAnalysis {
    pub dataset: String,
    pub subgraph: TopKSubgraph,
    pub structural: StructuralReport,
    pub centrality: CentralityTable,
    pub components: ComponentAssignment,
    pub distance: DistanceMatrix,
    pub clusters: ClusterAssignment,
    pub census: TriadCensus,
    pub zscores: MotifZScores,
    pub regional_raw: RegionalFlowMatrix,
    pub regional_share: RegionalFlowMatrix,
    pub features: FeatureMatrix,
}

impl SubgraphAnalysis {
    pub fn tag(&self) -> String {
        self.subgraph.tag()
    }
}

/// Seed for the motif ensemble of a subgraph. It does not depend on the
/// dataset, so identical graphs get identical null ensembles.
pub fn census_seed(cfg: &RunConfig, tag: &str) -> u64 {
    cfg.module_seed(&format!("census/{tag}"))
}

pub fn analyze_subgraph(
    g: &MobilityGraph,
    dataset: &str,
    direction: Direction,
    k: usize,
    cfg: &RunConfig,
    regions: &RegionMap,
) -> Result<SubgraphAnalysis> {
    let sg = topk(g, k, direction).map_err(|e| e.context("graph"))?;
    let tag = sg.tag();
    let at = |module: &str| format!("{module} [{dataset}/{tag}]");

    let structural = structural_report(&sg).map_err(|e| e.context(at("metrics")))?;
    let centrality = centrality_table(&sg, &cfg.pagerank).map_err(|e| e.context(at("metrics")))?;
    let components = scc(&sg);
    let distance = distance_matrix(&sg);
    let n_clusters = cfg.n_clusters.min(sg.node_count());
    let clusters = average_linkage(&distance, n_clusters)
        .map(|c| filter_singletons(&c))
        .map_err(|e| e.context(at("clustering")))?;
    let census = triad_census(&sg).map_err(|e| e.context(at("census")))?;
    let mut zscores = motif_zscores(
        &sg,
        cfg.ensemble_size,
        census_seed(cfg, &tag),
        cfg.swaps_per_edge,
    )
    .map_err(|e| e.context(at("census")))?;
    zscores.annotate(cfg.relevance);
    let regional_raw = regional_flows(&sg, regions).map_err(|e| e.context(at("regional")))?;
    let regional_share = to_shares(&regional_raw).map_err(|e| e.context(at("regional")))?;
    let features =
        feature_matrix(&sg, &centrality, &components).map_err(|e| e.context(at("compare")))?;

    Ok(SubgraphAnalysis {
        dataset: dataset.to_string(),
        subgraph: sg,
        structural,
        centrality,
        components,
        distance,
        clusters,
        census,
        zscores,
        regional_raw,
        regional_share,
        features,
    })
}

/// Serializes one subgraph analysis under `<dataset>/<tag>/`.
pub fn subgraph_files(a: &SubgraphAnalysis, meta: &Metadata) -> Result<Vec<OutputFile>> {
    let dir = format!("{}/{}", a.dataset, a.tag());
    let file = |name: &str, bytes: Vec<u8>| OutputFile {
        path: format!("{dir}/{name}"),
        bytes,
    };
    let mut files = vec![
        file("structural.json", meta.wrap_json(&a.structural)?),
        file(
            "structural.csv",
            csv_with_header(meta, |w| report::write_structural_csv(&a.structural, w))?,
        ),
        file(
            "scc.csv",
            csv_with_header(meta, |w| report::write_scc_csv(&a.components, w))?,
        ),
        file(
            "distance.csv",
            csv_with_header(meta, |w| a.distance.write_csv(w))?,
        ),
        file(
            "clusters.csv",
            csv_with_header(meta, |w| a.clusters.write_csv(w))?,
        ),
        file(
            "triad_census.csv",
            csv_with_header(meta, |w| report::write_census_csv(&a.census, w))?,
        ),
        file(
            "motif_zscores.csv",
            csv_with_header(meta, |w| report::write_zscores_csv(&a.zscores, w))?,
        ),
        file("motif_zscores.json", meta.wrap_json(&a.zscores)?),
        file(
            "regional_raw.csv",
            csv_with_header(meta, |w| a.regional_raw.write_csv(w))?,
        ),
        file(
            "regional_share.csv",
            csv_with_header(meta, |w| a.regional_share.write_csv(w))?,
        ),
    ];
    for m in Measure::ALL {
        files.push(file(
            &format!("centrality_{}.csv", m.name()),
            csv_with_header(meta, |w| report::write_centrality_csv(&a.centrality, m, w))?,
        ));
    }
    Ok(files)
}

/// Cross-dataset results; `b` is the reference side.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub dataset_a: String,
    pub dataset_b: String,
    /// Per subgraph tag: motif z percentage differences and share differences.
    pub per_subgraph: Vec<(String, Vec<PercentDiff>, ShareDiff)>,
    pub distance_a: CountryMatrix,
    pub distance_b: CountryMatrix,
    pub correlations: CorrelationReport,
}

/// Compares two analyses aligned by subgraph order.
pub fn compare_datasets(a: &[SubgraphAnalysis], b: &[SubgraphAnalysis]) -> Result<Comparison> {
    let name = |xs: &[SubgraphAnalysis]| xs.first().map(|x| x.dataset.clone()).unwrap_or_default();
    let ctx = |e: Error| e.context("compare");
    let mut per_subgraph = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        if x.tag() != y.tag() {
            return Err(ctx(Error::Mismatch(format!(
                "subgraph {} vs {}",
                x.tag(),
                y.tag()
            ))));
        }
        let zd = z_percent_diff(&x.zscores, &y.zscores).map_err(ctx)?;
        let sd = share_diff(&x.regional_share, &y.regional_share).map_err(ctx)?;
        per_subgraph.push((x.tag(), zd, sd));
    }
    let fa: Vec<FeatureMatrix> = a.iter().map(|x| x.features.clone()).collect();
    let fb: Vec<FeatureMatrix> = b.iter().map(|x| x.features.clone()).collect();
    let distance_a = avg_distance_matrix(&fa).map_err(ctx)?;
    let distance_b = avg_distance_matrix(&fb).map_err(ctx)?;
    let correlations = country_correlations(&distance_a, &distance_b).map_err(ctx)?;
    Ok(Comparison {
        dataset_a: name(a),
        dataset_b: name(b),
        per_subgraph,
        distance_a,
        distance_b,
        correlations,
    })
}

#[derive(Serialize)]
struct ComparisonSummary<'a> {
    dataset_a: &'a str,
    reference: &'a str,
    common_countries: usize,
    defined_correlations: usize,
    mean_rho: Option<f64>,
    share_diff: Vec<ShareDiffSummary>,
}

#[derive(Serialize)]
struct ShareDiffSummary {
    subgraph: String,
    mean_abs: f64,
    mean_abs_non_null: Option<f64>,
    null_cells: usize,
}

pub fn comparison_files(c: &Comparison, meta: &Metadata) -> Result<Vec<OutputFile>> {
    let mut files = Vec::new();
    for (tag, zd, sd) in &c.per_subgraph {
        files.push(OutputFile {
            path: format!("comparison/{tag}/zscore_diff.csv"),
            bytes: csv_with_header(meta, |w| report::write_diff_csv(zd, w))?,
        });
        files.push(OutputFile {
            path: format!("comparison/{tag}/share_diff.csv"),
            bytes: csv_with_header(meta, |w| sd.write_csv(w))?,
        });
    }
    files.push(OutputFile {
        path: format!("comparison/feature_distance_{}.csv", c.dataset_a),
        bytes: csv_with_header(meta, |w| c.distance_a.write_csv(w))?,
    });
    files.push(OutputFile {
        path: format!("comparison/feature_distance_{}.csv", c.dataset_b),
        bytes: csv_with_header(meta, |w| c.distance_b.write_csv(w))?,
    });
    files.push(OutputFile {
        path: "comparison/correlations.csv".into(),
        bytes: csv_with_header(meta, |w| c.correlations.write_csv(w))?,
    });
    let rhos: Vec<f64> = c
        .correlations
        .entries
        .iter()
        .filter_map(|e| e.rho)
        .collect();
    let summary = ComparisonSummary {
        dataset_a: &c.dataset_a,
        reference: &c.dataset_b,
        common_countries: c.correlations.common_countries,
        defined_correlations: rhos.len(),
        mean_rho: (!rhos.is_empty()).then(|| rhos.iter().sum::<f64>() / rhos.len() as f64),
        share_diff: c
            .per_subgraph
            .iter()
            .map(|(tag, _, sd)| ShareDiffSummary {
                subgraph: tag.clone(),
                mean_abs: sd.mean_abs(),
                mean_abs_non_null: sd.mean_abs_non_null(),
                null_cells: sd.null_cells.iter().filter(|&&b| b).count(),
            })
            .collect(),
    };
    files.push(OutputFile {
        path: "comparison/summary.json".into(),
        bytes: meta.wrap_json(&summary)?,
    });
    Ok(files)
}

pub fn load_region_map(cfg: &RunConfig) -> Result<RegionMap> {
    match cfg.region_map_path() {
        None => Ok(RegionMap::continents()),
        Some(p) => {
            let f =
                fs::File::open(&p).map_err(|e| Error::from(e).context(p.display().to_string()))?;
            RegionMap::from_csv(f).map_err(|e| e.context(p.display().to_string()))
        }
    }
}

/// Runs every analysis over in-memory graphs and returns the bundle files,
/// manifest excluded.
pub fn analyze_graphs(
    graphs: &[(String, MobilityGraph)],
    cfg: &RunConfig,
    regions: &RegionMap,
) -> Result<(Vec<Vec<SubgraphAnalysis>>, Vec<OutputFile>)> {
    if graphs.is_empty() || graphs.len() > 2 {
        return Err(Error::InvalidParameter(format!(
            "expected 1 or 2 graphs, got {}",
            graphs.len()
        )));
    }
    let meta = metadata(cfg);
    let jobs: Vec<(usize, Direction, usize)> = (0..graphs.len())
        .flat_map(|d| {
            cfg.k
                .iter()
                .flat_map(move |&k| [Direction::In, Direction::Out].map(|dir| (d, dir, k)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(d, dir, k)| {
            let (name, g) = &graphs[d];
            analyze_subgraph(g, name, dir, k, cfg, regions)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut per_dataset: Vec<Vec<SubgraphAnalysis>> = vec![Vec::new(); graphs.len()];
    for (&(d, _, _), r) in jobs.iter().zip(results) {
        per_dataset[d].push(r);
    }
    let mut files = Vec::new();
    for a in per_dataset.iter().flatten() {
        files.extend(subgraph_files(a, &meta)?);
    }
    if let [a, b] = per_dataset.as_slice() {
        files.extend(comparison_files(&compare_datasets(a, b)?, &meta)?);
    }
    Ok((per_dataset, files))
}

#[derive(Debug)]
pub struct AnalyzeOutput {
    pub analyses: Vec<Vec<SubgraphAnalysis>>,
    pub files: Vec<ManifestEntry>,
}

/// Loads graphs (explicit paths, or the `build` outputs of configured datasets),
/// analyzes them and writes the bundle plus `manifest.json`. Relative graph
/// paths are taken under the output directory.
pub fn cmd_analyze(cfg: &RunConfig, graph_paths: &[PathBuf]) -> Result<AnalyzeOutput> {
    cfg.validate()?;
    let paths: Vec<(String, PathBuf)> = if graph_paths.is_empty() {
        cfg.dataset_names()
            .into_iter()
            .map(|n| {
                let p = cfg.output_dir.join(graph_path(&n));
                (n, p)
            })
            .collect()
    } else {
        graph_paths
            .iter()
            .map(|p| {
                let stem = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                (stem, under_output(cfg, p))
            })
            .collect()
    };
    if paths.is_empty() {
        return Err(Error::Config("no graphs to analyze".into()));
    }
    let mut graphs = Vec::with_capacity(paths.len());
    for (name, p) in &paths {
        let f = fs::File::open(p)
            .map_err(|e| Error::from(e).context(format!("graph {}", p.display())))?;
        let g = parse_flow_matrix(f).map_err(|e| e.context(format!("graph {}", p.display())))?;
        graphs.push((name.clone(), g));
    }
    let regions = load_region_map(cfg)?;
    let (analyses, files) = analyze_graphs(&graphs, cfg, &regions)?;
    let mut entries = write_bundle(&cfg.output_dir, &files)?;

    #[derive(Serialize)]
    struct Manifest<'a> {
        inputs: Vec<ManifestEntry>,
        files: &'a [ManifestEntry],
    }
    let inputs = paths
        .iter()
        .map(|(name, p)| {
            let bytes = fs::read(p)?;
            Ok(ManifestEntry {
                path: format!("{name}: {}", file_name(p)),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = metadata(cfg).wrap_json(&Manifest {
        inputs,
        files: &entries,
    })?;
    entries.extend(write_bundle(
        &cfg.output_dir,
        &[OutputFile {
            path: "manifest.json".into(),
            bytes: manifest,
        }],
    )?);
    Ok(AnalyzeOutput {
        analyses,
        files: entries,
    })
}

fn under_output(cfg: &RunConfig, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        cfg.output_dir.join(p)
    }
}

/// Renders a report CSV to SVG. Relative paths are taken under the output
/// directory; the default output replaces the extension with `.svg`.
pub fn cmd_plot(
    cfg: &RunConfig,
    report_path: &Path,
    kind: PlotKind,
    output: Option<&Path>,
) -> Result<PathBuf> {
    let input = under_output(cfg, report_path);
    let f = fs::File::open(&input)
        .map_err(|e| Error::from(e).context(format!("plot {}", input.display())))?;
    let svg = plot(f, kind, cfg.module_seed("plot"), &metadata(cfg).lines())
        .map_err(|e| e.context(format!("plot {}", input.display())))?;
    let out = match output {
        Some(p) => under_output(cfg, p),
        None => input.with_extension("svg"),
    };
    write_atomic(&out, svg.as_bytes())?;
    Ok(out)
}

/// Parses a subgraph tag such as `out3` or `in1`.
pub fn parse_tag(tag: &str) -> Result<(Direction, usize)> {
    let bad = || {
        Error::InvalidParameter(format!(
            "bad subgraph tag `{tag}` (expected e.g. in1, out3)"
        ))
    };
    let (dir, k) = if let Some(k) = tag.strip_prefix("out") {
        (Direction::Out, k)
    } else if let Some(k) = tag.strip_prefix("in") {
        (Direction::In, k)
    } else {
        return Err(bad());
    };
    let k: usize = k.parse().map_err(|_| bad())?;
    if k == 0 {
        return Err(bad());
    }
    Ok((dir, k))
}

/// Exports a persisted graph, optionally reduced to a Top-k subgraph.
pub fn cmd_export(
    cfg: &RunConfig,
    graph: &Path,
    format: ExportFormat,
    subgraph: Option<&str>,
    output: Option<&Path>,
) -> Result<PathBuf> {
    let input = under_output(cfg, graph);
    let f = fs::File::open(&input)
        .map_err(|e| Error::from(e).context(format!("export {}", input.display())))?;
    let g = parse_flow_matrix(f).map_err(|e| e.context(format!("export {}", input.display())))?;
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let (name, digraph) = match subgraph {
        Some(tag) => {
            let (dir, k) = parse_tag(tag)?;
            let sg = topk(&g, k, dir)?;
            (format!("{}_{}", g.label, sg.tag()), sg.digraph().clone())
        }
        None => (g.label.clone(), g.digraph().clone()),
    };
    let mut bytes = Vec::new();
    export_graph(&digraph, &name, format, &metadata(cfg).lines(), &mut bytes)?;
    let out = match output {
        Some(p) => under_output(cfg, p),
        None => {
            let suffix = subgraph.map(|t| format!("_{t}")).unwrap_or_default();
            cfg.output_dir
                .join("exports")
                .join(format!("{stem}{suffix}.{}", format.extension()))
        }
    };
    write_atomic(&out, &bytes)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse() {
        assert_eq!(parse_tag("out3").unwrap(), (Direction::Out, 3));
        assert_eq!(parse_tag("in1").unwrap(), (Direction::In, 1));
        assert!(parse_tag("in0").is_err());
        assert!(parse_tag("up2").is_err());
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
