//! Graph serialization to DOT, GraphML and edge-list CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Digraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    EdgeCsv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::GraphMl => "graphml",
            ExportFormat::EdgeCsv => "csv",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            "csv" | "edge-csv" => Ok(ExportFormat::EdgeCsv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Dot => "dot",
            ExportFormat::GraphMl => "graphml",
            ExportFormat::EdgeCsv => "csv",
        })
    }
}

/// Writes `g` under graph id `name`. `comments` are emitted in the format's
/// comment syntax before the document body.
pub fn export_graph<W: Write>(
    g: &Digraph,
    name: &str,
    format: ExportFormat,
    comments: &[String],
    mut out: W,
) -> Result<()> {
    match format {
        ExportFormat::Dot => {
            for c in comments {
                writeln!(out, "// {c}")?;
            }
            writeln!(out, "digraph \"{}\" {{", dot_escape(name))?;
            for c in g.nodes() {
                writeln!(out, "  \"{c}\";")?;
            }
            for (a, b, w) in g.coded_edges() {
                writeln!(out, "  \"{a}\" -> \"{b}\" [weight={w}];")?;
            }
            writeln!(out, "}}")?;
        }
        ExportFormat::GraphMl => {
            writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
            for c in comments {
                writeln!(out, "<!-- {} -->", c.replace("--", "- -"))?;
            }
            writeln!(
                out,
                r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
            )?;
            writeln!(
                out,
                r#"  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>"#
            )?;
            writeln!(
                out,
                r#"  <graph id="{}" edgedefault="directed">"#,
                xml_escape(name)
            )?;
            for c in g.nodes() {
                writeln!(out, r#"    <node id="{c}"/>"#)?;
            }
            for (a, b, w) in g.coded_edges() {
                writeln!(
                    out,
                    r#"    <edge source="{a}" target="{b}"><data key="weight">{w}</data></edge>"#
                )?;
            }
            writeln!(out, "  </graph>")?;
            writeln!(out, "</graphml>")?;
        }
        ExportFormat::EdgeCsv => {
            for c in comments {
                writeln!(out, "# {c}")?;
            }
            writeln!(out, "origin,destination,count")?;
            for (a, b, w) in g.coded_edges() {
                writeln!(out, "{a},{b},{w}")?;
            }
        }
    }
    Ok(())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::codes;

    fn render(g: &Digraph, f: ExportFormat) -> String {
        let mut buf = Vec::new();
        export_graph(g, "g", f, &[], &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn dot_single_edge() {
        let g = Digraph::new(codes(2), [(0, 1, 5)]).unwrap();
        let dot = render(&g, ExportFormat::Dot);
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("\"AA\" -> \"AB\" [weight=5];"));
    }

    #[test]
    fn empty_graph_documents() {
        let g = Digraph::new(vec![], []).unwrap();
        assert_eq!(render(&g, ExportFormat::Dot), "digraph \"g\" {\n}\n");
        assert_eq!(
            render(&g, ExportFormat::EdgeCsv),
            "origin,destination,count\n"
        );
        let xml = render(&g, ExportFormat::GraphMl);
        assert!(xml.contains("<graph id=\"g\" edgedefault=\"directed\">\n  </graph>"));
    }

    #[test]
    fn unknown_format() {
        assert!(matches!(
            "gexf".parse::<ExportFormat>(),
            Err(Error::UnknownFormat(_))
        ));
        assert_eq!(
            "GraphML".parse::<ExportFormat>().unwrap(),
            ExportFormat::GraphMl
        );
    }
}
