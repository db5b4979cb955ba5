//! Deterministic SVG rendering of report CSVs.
//!
//! Three kinds are supported: a heatmap for any dense labelled matrix, a strip
//! plot for per-country correlations and a bar chart for per-class or
//! per-country values. Output contains no timestamps; strip jitter is seeded.

use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Heatmap,
    Strip,
    Bar,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heatmap" => Ok(PlotKind::Heatmap),
            "strip" => Ok(PlotKind::Strip),
            "bar" => Ok(PlotKind::Bar),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

/// Parsed report: leading `#` comment lines plus the CSV table.
struct Table {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table<R: Read>(mut reader: R) -> Result<Table> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let comments = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim().to_string())
        .collect();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Table {
        comments,
        header,
        rows,
    })
}

fn parse_value(s: &str, row: usize) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::MalformedRow {
        row: row as u64,
        message: format!("`{s}` is not a number"),
    })
}

fn mismatch(kind: &str, header: &[String]) -> Error {
    Error::Mismatch(format!(
        "{kind} plot cannot render a report with columns `{}`",
        header.join(",")
    ))
}

/// Renders a report CSV read from `reader`. `header` lines go into leading XML
/// comments, followed by the report's own comment lines.
pub fn plot<R: Read>(reader: R, kind: PlotKind, seed: u64, header: &[String]) -> Result<String> {
    let mut t = read_table(reader)?;
    let source = t.comments.iter().map(|c| format!("source {c}"));
    t.comments = header.iter().cloned().chain(source).collect();
    match kind {
        PlotKind::Heatmap => heatmap(&t),
        PlotKind::Strip => strip(&t, seed),
        PlotKind::Bar => bar(&t),
    }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open_svg(out: &mut String, comments: &[String], width: f64, height: f64) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for c in comments {
        let _ = writeln!(out, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>"
    );
}

/// Diverging scale: blue for negative, white at zero, red for positive.
fn signed_color(v: f64, max_abs: f64) -> String {
    let t = (v / max_abs).clamp(-1.0, 1.0);
    let (end, t) = if t < 0.0 {
        ((33.0, 102.0, 172.0), -t)
    } else {
        ((178.0, 24.0, 43.0), t)
    };
    let mix = |e: f64| (255.0 + (e - 255.0) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(end.0), mix(end.1), mix(end.2))
}

fn heatmap(t: &Table) -> Result<String> {
    let cols = &t.header[1..];
    let square = !cols.is_empty()
        && t.rows.len() == cols.len()
        && t.rows.iter().all(|r| r.len() == cols.len() + 1);
    if !square {
        return Err(mismatch("heatmap", &t.header));
    }
    let n = cols.len();
    let mut values = Vec::with_capacity(n * n);
    for (i, r) in t.rows.iter().enumerate() {
        for s in &r[1..] {
            values.push(parse_value(s, i + 2)?.unwrap_or(0.0));
        }
    }
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_abs = if max_abs > 0.0 { max_abs } else { 1.0 };

    let cell = if n > 40 { 8.0 } else { 48.0 };
    let margin = 120.0;
    let size = margin + cell * n as f64 + 80.0;
    let mut out = String::new();
    open_svg(&mut out, &t.comments, size, size);
    for (j, c) in cols.iter().enumerate() {
        let x = margin + cell * (j as f64 + 0.5);
        let _ = writeln!(
            out,
            "<text class=\"col-label\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"start\" transform=\"rotate(-60 {x:.2} {:.2})\">{}</text>",
            margin - 6.0,
            margin - 6.0,
            xml(c)
        );
    }
    for (i, r) in t.rows.iter().enumerate() {
        let y = margin + cell * i as f64;
        let _ = writeln!(
            out,
            "<text class=\"row-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            margin - 6.0,
            y + cell * 0.6,
            xml(&r[0])
        );
        for j in 0..n {
            let v = values[i * n + j];
            let _ = writeln!(
                out,
                "<rect class=\"cell\" x=\"{:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"{}\" stroke=\"#cccccc\" data-value=\"{v}\"/>",
                margin + cell * j as f64,
                signed_color(v, max_abs)
            );
        }
    }
    let ly = margin + cell * n as f64 + 20.0;
    for (k, f) in [-1.0, -0.5, 0.0, 0.5, 1.0].iter().enumerate() {
        let x = margin + 60.0 * k as f64;
        let _ = writeln!(
            out,
            "<rect class=\"legend\" x=\"{x:.2}\" y=\"{ly:.2}\" width=\"20\" height=\"12\" fill=\"{}\"/>",
            signed_color(f * max_abs, max_abs)
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\">{:.3}</text>",
            x + 24.0,
            ly + 10.0,
            f * max_abs
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn strip(t: &Table, seed: u64) -> Result<String> {
    if t.header != ["country", "rho", "flag"] {
        return Err(mismatch("strip", &t.header));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (width, height, left, right) = (640.0, 220.0, 40.0, 600.0);
    let mid = height / 2.0;
    let x_of = |rho: f64| left + (rho + 1.0) / 2.0 * (right - left);
    let mut out = String::new();
    open_svg(&mut out, &t.comments, width, height);
    let _ = writeln!(
        out,
        "<line x1=\"{left}\" y1=\"{mid}\" x2=\"{right}\" y2=\"{mid}\" stroke=\"#888888\"/>"
    );
    for tick in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let x = x_of(tick);
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{tick:.1}</text>",
            height - 10.0
        );
    }
    for (i, r) in t.rows.iter().enumerate() {
        let jitter: f64 = rng.gen_range(-40.0..40.0);
        if let Some(rho) = parse_value(r.get(1).map_or("", |s| s), i + 2)? {
            let _ = writeln!(
                out,
                "<circle class=\"mark\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#2166ac\" fill-opacity=\"0.7\"><title>{} {}</title></circle>",
                x_of(rho),
                mid + jitter,
                xml(&r[0]),
                rho
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn bar(t: &Table) -> Result<String> {
    let h: Vec<&str> = t.header.iter().map(String::as_str).collect();
    let (label_col, value_col) = match h.as_slice() {
        ["class", "real", "mean", "std", "z", "flag"] => (0, 4),
        ["class", "percent_diff", "flag"] => (0, 1),
        ["rank", "country", "value"] => (1, 2),
        _ => return Err(mismatch("bar", &t.header)),
    };
    let mut bars = Vec::with_capacity(t.rows.len());
    for (i, r) in t.rows.iter().enumerate() {
        let v = parse_value(r.get(value_col).map_or("", |s| s), i + 2)?;
        bars.push((r[label_col].clone(), v));
    }
    let max_abs = bars
        .iter()
        .filter_map(|b| b.1)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let max_abs = if max_abs > 0.0 { max_abs } else { 1.0 };
    let lo = bars.iter().filter_map(|b| b.1).any(|v| v < 0.0);

    let slot = 28.0;
    let (left, top, plot_h) = (50.0, 20.0, 240.0);
    let width = left + slot * bars.len() as f64 + 20.0;
    let height = top + plot_h + 60.0;
    let zero = if lo { top + plot_h / 2.0 } else { top + plot_h };
    let scale = if lo { plot_h / 2.0 } else { plot_h } / max_abs;
    let mut out = String::new();
    open_svg(&mut out, &t.comments, width, height);
    for (i, (label, v)) in bars.iter().enumerate() {
        let x = left + slot * i as f64 + 4.0;
        if let Some(v) = v {
            let len = v.abs() * scale;
            let y = if *v >= 0.0 { zero - len } else { zero };
            let fill = if *v >= 0.0 { "#b2182b" } else { "#2166ac" };
            let _ = writeln!(
                out,
                "<rect class=\"bar\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{len:.2}\" fill=\"{fill}\" data-value=\"{v}\"/>",
                slot - 8.0
            );
        }
        let lx = x + (slot - 8.0) / 2.0;
        let ly = top + plot_h + 14.0;
        let _ = writeln!(
            out,
            "<text x=\"{lx:.2}\" y=\"{ly:.2}\" text-anchor=\"end\" transform=\"rotate(-60 {lx:.2} {ly:.2})\">{}</text>",
            xml(label)
        );
    }
    let _ = writeln!(
        out,
        "<line x1=\"{left}\" y1=\"{zero:.2}\" x2=\"{:.2}\" y2=\"{zero:.2}\" stroke=\"#333333\"/>",
        width - 20.0
    );
    let _ = writeln!(
        out,
        "<text x=\"4\" y=\"{:.2}\">{}</text>",
        top + 4.0,
        crate::report::sig6(max_abs)
    );
    out.push_str("</svg>\n");
    Ok(out)
}
