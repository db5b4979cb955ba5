use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use tourflow::config::RunConfig;
use tourflow::export::ExportFormat;
use tourflow::ingest::{parse_flow_matrix, write_flow_matrix};
use tourflow::pipeline::{
    analyze_graphs, analyze_subgraph, cmd_analyze, cmd_build, cmd_export, cmd_plot, metadata,
    subgraph_files,
};
use tourflow::plot::PlotKind;
use tourflow::synthetic::World;
use tourflow::{Direction, Error};

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    world: World,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let world = World::generate(14, 3, 5);
    let mut f = fs::File::create(root.join("checkins.csv")).unwrap();
    writeln!(f, "user_id,country,timestamp").unwrap();
    for r in world.checkins(600, 4, 3, 6) {
        writeln!(f, "{},{},{}", r.user_id, r.country, r.timestamp.timestamp()).unwrap();
    }
    let flows = world.flow_graph("official", 800.0, 0.3, 7);
    write_flow_matrix(
        &flows,
        &[],
        fs::File::create(root.join("flows.csv")).unwrap(),
    )
    .unwrap();
    let mut rm = fs::File::create(root.join("regions.csv")).unwrap();
    writeln!(rm, "country,region").unwrap();
    for (c, r) in world.countries.iter().zip(&world.region_of) {
        writeln!(rm, "{c},{}", world.regions[*r]).unwrap();
    }
    Fixture {
        _dir: dir,
        root,
        world,
    }
}

fn config(fx: &Fixture, body: &str, out: &str) -> RunConfig {
    let text = format!(
        "region_map = regions.csv\nensemble.size = 20\nensemble.swaps_per_edge = 10\nn_clusters = 4\nseed = 3\ncheckin_threshold = 20\noutput_dir = {}\n{body}",
        fx.root.join(out).display()
    );
    let path = fx.root.join(format!("{out}.conf"));
    fs::write(&path, text).unwrap();
    RunConfig::load(&path).unwrap()
}

const TWO: &str = "dataset.a.checkins = checkins.csv\ndataset.b.flows = flows.csv\n";

fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(
                    p.strip_prefix(root).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

#[test]
fn built_graph_reparses_to_the_same_graph() {
    let fx = fixture();
    let cfg = config(&fx, TWO, "out");
    let built = cmd_build(&cfg).unwrap();
    assert_eq!(built.graphs.len(), 2);
    for (name, g) in &built.graphs {
        let text = fs::read(cfg.output_dir.join(format!("graphs/{name}.csv"))).unwrap();
        assert!(String::from_utf8_lossy(&text).starts_with("# tool=tourflow"));
        let back = parse_flow_matrix(text.as_slice()).unwrap();
        assert_eq!(back.digraph(), g.digraph());
    }
    assert!(cfg.output_dir.join("build_manifest.json").exists());
}

#[test]
fn dataset_with_two_sources_is_rejected() {
    let fx = fixture();
    let cfg = config(
        &fx,
        "dataset.a.checkins = checkins.csv\ndataset.a.flows = flows.csv\n",
        "out",
    );
    let e = cmd_build(&cfg).unwrap_err();
    assert!(matches!(e, Error::Config(_)), "{e}");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let fx = fixture();
    let trees: Vec<_> = ["run1", "run2"]
        .iter()
        .map(|out| {
            let cfg = config(&fx, TWO, out);
            cmd_build(&cfg).unwrap();
            cmd_analyze(&cfg, &[]).unwrap();
            read_tree(&cfg.output_dir)
        })
        .collect();
    assert_eq!(
        trees[0].keys().collect::<Vec<_>>(),
        trees[1].keys().collect::<Vec<_>>()
    );
    for (k, v) in &trees[0] {
        assert!(trees[1][k] == *v, "{k} differs");
    }
    assert!(trees[0].contains_key("comparison/correlations.csv"));
    assert!(!trees[0].keys().any(|k| k.contains(".tmp")));
}

#[test]
fn single_dataset_has_no_comparison() {
    let fx = fixture();
    let cfg = config(&fx, "dataset.b.flows = flows.csv\n", "out");
    cmd_build(&cfg).unwrap();
    let out = cmd_analyze(&cfg, &[]).unwrap();
    assert_eq!(out.analyses.len(), 1);
    assert_eq!(out.analyses[0].len(), 6);
    assert!(out.files.iter().all(|f| !f.path.starts_with("comparison/")));
    assert!(!cfg.output_dir.join("comparison").exists());
}

#[test]
fn identical_datasets_compare_as_identical() {
    let fx = fixture();
    let cfg = config(
        &fx,
        "dataset.a.flows = flows.csv\ndataset.b.flows = flows.csv\n",
        "out",
    );
    cmd_build(&cfg).unwrap();
    cmd_analyze(&cfg, &[]).unwrap();
    let corr = fs::read_to_string(cfg.output_dir.join("comparison/correlations.csv")).unwrap();
    let mut defined = 0;
    for line in corr.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[2] != "undefined" {
            assert!(
                (cols[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9,
                "{line}"
            );
            defined += 1;
        }
    }
    assert!(defined > 0);
    for tag in ["in1", "in2", "in3", "out1", "out2", "out3"] {
        let diff = fs::read_to_string(
            cfg.output_dir
                .join(format!("comparison/{tag}/zscore_diff.csv")),
        )
        .unwrap();
        for line in diff.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let v = line.split(',').nth(1).unwrap();
            assert!(
                v.is_empty() || v.parse::<f64>().unwrap() == 0.0,
                "{tag}: {line}"
            );
        }
        let share = fs::read_to_string(
            cfg.output_dir
                .join(format!("comparison/{tag}/share_diff.csv")),
        )
        .unwrap();
        for line in share.lines().filter(|l| !l.starts_with('#')).skip(1) {
            assert!(
                line.split(',')
                    .skip(1)
                    .all(|v| v.parse::<f64>().unwrap() == 0.0),
                "{tag}: {line}"
            );
        }
    }
}

#[test]
fn bundle_equals_direct_module_calls() {
    let fx = fixture();
    let cfg = config(&fx, "dataset.b.flows = flows.csv\n", "out");
    cmd_build(&cfg).unwrap();
    cmd_analyze(&cfg, &[]).unwrap();
    let g =
        parse_flow_matrix(fs::File::open(cfg.output_dir.join("graphs/b.csv")).unwrap()).unwrap();
    let regions = fx.world.region_map();
    let meta = metadata(&cfg);
    for k in [1, 2, 3] {
        for dir in [Direction::In, Direction::Out] {
            let a = analyze_subgraph(&g, "b", dir, k, &cfg, &regions).unwrap();
            for f in subgraph_files(&a, &meta).unwrap() {
                let on_disk = fs::read(cfg.output_dir.join(&f.path)).unwrap();
                assert!(on_disk == f.bytes, "{} differs", f.path);
            }
        }
    }
    let (_, files) = analyze_graphs(&[("b".into(), g)], &cfg, &regions).unwrap();
    for f in files {
        assert!(
            fs::read(cfg.output_dir.join(&f.path)).unwrap() == f.bytes,
            "{}",
            f.path
        );
    }
}

#[test]
fn plots_are_deterministic_and_check_their_input() {
    let fx = fixture();
    let cfg = config(&fx, TWO, "out");
    cmd_build(&cfg).unwrap();
    cmd_analyze(&cfg, &[]).unwrap();
    let cases = [
        ("comparison/correlations.csv", PlotKind::Strip),
        ("a/out3/distance.csv", PlotKind::Heatmap),
        ("a/out3/motif_zscores.csv", PlotKind::Bar),
        ("comparison/out3/zscore_diff.csv", PlotKind::Bar),
    ];
    for (report, kind) in cases {
        let first = cmd_plot(&cfg, Path::new(report), kind, Some(Path::new("p1.svg"))).unwrap();
        let a = fs::read(&first).unwrap();
        let second = cmd_plot(&cfg, Path::new(report), kind, Some(Path::new("p2.svg"))).unwrap();
        assert_eq!(a, fs::read(&second).unwrap(), "{report}");
        let doc = String::from_utf8(a).unwrap();
        roxmltree::Document::parse(&doc).unwrap();
        assert!(doc.contains(&format!("config_hash={}", cfg.hash())));
    }
    let default = cmd_plot(
        &cfg,
        Path::new("a/in1/distance.csv"),
        PlotKind::Heatmap,
        None,
    )
    .unwrap();
    assert_eq!(default, cfg.output_dir.join("a/in1/distance.svg"));
    assert!(cmd_plot(
        &cfg,
        Path::new("a/out3/motif_zscores.csv"),
        PlotKind::Heatmap,
        None
    )
    .is_err());
    assert!(cmd_plot(
        &cfg,
        Path::new("a/out3/distance.csv"),
        PlotKind::Strip,
        None
    )
    .is_err());
}

#[test]
fn export_writes_each_format() {
    let fx = fixture();
    let cfg = config(&fx, TWO, "out");
    cmd_build(&cfg).unwrap();
    for f in [
        ExportFormat::Dot,
        ExportFormat::GraphMl,
        ExportFormat::EdgeCsv,
    ] {
        let p = cmd_export(&cfg, Path::new("graphs/b.csv"), f, Some("out2"), None).unwrap();
        assert_eq!(
            p,
            cfg.output_dir
                .join(format!("exports/b_out2.{}", f.extension()))
        );
        assert!(fs::metadata(&p).unwrap().len() > 0);
    }
    let csv = cmd_export(
        &cfg,
        Path::new("graphs/b.csv"),
        ExportFormat::EdgeCsv,
        None,
        Some(Path::new("full.csv")),
    )
    .unwrap();
    let g = parse_flow_matrix(fs::File::open(&csv).unwrap()).unwrap();
    let orig =
        parse_flow_matrix(fs::File::open(cfg.output_dir.join("graphs/b.csv")).unwrap()).unwrap();
    assert_eq!(g.digraph(), orig.digraph());
    assert!(cmd_export(
        &cfg,
        Path::new("graphs/b.csv"),
        ExportFormat::Dot,
        Some("sideways2"),
        None
    )
    .is_err());
}

#[test]
fn cli_exit_codes() {
    let fx = fixture();
    let bin = env!("CARGO_BIN_EXE_tourflow");
    let conf = fx.root.join("cli.conf");
    fs::write(
        &conf,
        format!(
            "{TWO}region_map = regions.csv\nensemble.size = 10\ncheckin_threshold = 20\nn_clusters = 3\noutput_dir = {}\n",
            fx.root.join("cli").display()
        ),
    )
    .unwrap();
    let run = |args: &[&str]| {
        Command::new(bin)
            .arg("--config")
            .arg(&conf)
            .args(args)
            .output()
            .unwrap()
    };

    let missing = run(&["analyze"]);
    assert_eq!(
        missing.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&missing.stderr)
    );
    assert!(run(&["build"]).status.success());
    assert!(run(&["--k", "2", "analyze"]).status.success());
    assert!(fx.root.join("cli/a/out2/structural.json").exists());
    assert!(!fx.root.join("cli/a/out1").exists());
    assert!(
        run(&["plot", "comparison/correlations.csv", "--kind", "strip"])
            .status
            .success()
    );
    assert!(run(&["export", "graphs/a.csv", "--format", "graphml"])
        .status
        .success());
    assert_eq!(run(&["--set", "k=0", "build"]).status.code(), Some(2));
    assert_eq!(run(&["--set", "bogus=1", "build"]).status.code(), Some(2));
    assert_eq!(
        run(&["plot", "a/out2/scc.csv", "--kind", "heatmap"])
            .status
            .code(),
        Some(5)
    );

    fs::write(
        fx.root.join("bad.csv"),
        "origin,destination,count\nAA,AB,-1\n",
    )
    .unwrap();
    let bad = run(&["analyze", fx.root.join("bad.csv").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(4));
}
