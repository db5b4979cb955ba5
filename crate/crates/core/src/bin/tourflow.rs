use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tourflow::config::RunConfig;
use tourflow::export::ExportFormat;
use tourflow::pipeline::{cmd_analyze, cmd_build, cmd_export, cmd_plot};
use tourflow::plot::PlotKind;
use tourflow::Result;

/// Mobility network analysis from check-ins or flow matrices.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Config override `key=value`; repeatable, applied after the file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated Top-k values.
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    ensemble_size: Option<usize>,
    #[arg(long, global = true)]
    n_clusters: Option<usize>,
    #[arg(long, global = true)]
    threshold: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest the configured datasets into flow graphs.
    Build,
    /// Run all analyses; graphs default to the `build` outputs.
    Analyze { graphs: Vec<PathBuf> },
    /// Render a report CSV as SVG.
    Plot {
        report: PathBuf,
        #[arg(long, value_parser = parse::<PlotKind>)]
        kind: PlotKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a graph as DOT, GraphML or edge CSV.
    Export {
        graph: PathBuf,
        #[arg(long, value_parser = parse::<ExportFormat>)]
        format: ExportFormat,
        /// Top-k subgraph tag such as `out3`.
        #[arg(long)]
        subgraph: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = tourflow::Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: tourflow::Error| e.to_string())
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(cli.overrides.iter().map(String::as_str))?;
    let flags = [
        (
            "output_dir",
            cli.output_dir.as_ref().map(|p| p.display().to_string()),
        ),
        ("seed", cli.seed.map(|v| v.to_string())),
        ("k", cli.k.clone()),
        ("ensemble.size", cli.ensemble_size.map(|v| v.to_string())),
        ("n_clusters", cli.n_clusters.map(|v| v.to_string())),
        ("checkin_threshold", cli.threshold.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Build => {
            let out = cmd_build(&cfg)?;
            for d in &out.datasets {
                println!("{}: {} nodes, {} edges", d.name, d.nodes, d.edges);
            }
        }
        Command::Analyze { graphs } => {
            let out = cmd_analyze(&cfg, graphs)?;
            println!(
                "wrote {} files to {}",
                out.files.len(),
                cfg.output_dir.display()
            );
        }
        Command::Plot { report, kind, out } => {
            println!(
                "{}",
                cmd_plot(&cfg, report, *kind, out.as_deref())?.display()
            );
        }
        Command::Export {
            graph,
            format,
            subgraph,
            out,
        } => {
            let path = cmd_export(&cfg, graph, *format, subgraph.as_deref(), out.as_deref())?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
