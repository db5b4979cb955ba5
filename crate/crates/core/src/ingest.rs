//! Check-in logs and official flow matrices in; [`MobilityGraph`] out.
//!
//! A user's home is the country holding most of their check-ins (ties go to the
//! lexicographically smallest code). Every other country they checked in at
//! counts them once as a tourist on the `home -> country` edge.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::Deserialize;

use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::graph::{Digraph, MobilityGraph};

/// Default activity threshold: countries need strictly more check-ins than this.
pub const DEFAULT_CHECKIN_THRESHOLD: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckinRecord {
    pub user_id: String,
    pub country: CountryCode,
    pub timestamp: DateTime<Utc>,
    pub venue_id: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Ndjson,
}

impl InputFormat {
    /// Guesses the format from a file extension (`.csv`, `.ndjson`, `.jsonl`).
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default();
        ext.parse()
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "ndjson" | "jsonl" => Ok(InputFormat::Ndjson),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// First malformed row aborts the parse.
    #[default]
    Strict,
    /// Malformed rows are skipped and reported.
    Lenient,
}

impl FromStr for ParseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(ParseMode::Strict),
            "lenient" => Ok(ParseMode::Lenient),
            other => Err(Error::InvalidParameter(format!(
                "unknown parse mode `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedRow {
    /// 1-based line number in the input.
    pub row: u64,
    pub reason: String,
}

/// Parsed check-ins plus exact per-country and per-user aggregations.
#[derive(Clone, Debug, Default)]
pub struct CheckinTable {
    records: Vec<CheckinRecord>,
    country_counts: BTreeMap<CountryCode, u64>,
    user_counts: BTreeMap<String, BTreeMap<CountryCode, u64>>,
    skipped: Vec<SkippedRow>,
}

impl CheckinTable {
    pub fn from_records(records: Vec<CheckinRecord>) -> Self {
        let mut country_counts = BTreeMap::new();
        let mut user_counts: BTreeMap<String, BTreeMap<CountryCode, u64>> = BTreeMap::new();
        for r in &records {
            *country_counts.entry(r.country).or_insert(0) += 1;
            *user_counts
                .entry(r.user_id.clone())
                .or_default()
                .entry(r.country)
                .or_insert(0) += 1;
        }
        Self {
            records,
            country_counts,
            user_counts,
            skipped: Vec::new(),
        }
    }

    pub fn records(&self) -> &[CheckinRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn country_counts(&self) -> &BTreeMap<CountryCode, u64> {
        &self.country_counts
    }

    pub fn user_counts(&self) -> &BTreeMap<String, BTreeMap<CountryCode, u64>> {
        &self.user_counts
    }

    /// Rows dropped in lenient mode.
    pub fn skipped(&self) -> &[SkippedRow] {
        &self.skipped
    }
}

fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if let Ok(secs) = raw.parse::<i64>() {
        return DateTime::from_timestamp(secs, 0);
    }
    let parsed = DateTime::parse_from_rfc3339(raw)
        .map(|t| t.with_timezone(&Utc))
        .or_else(|_| NaiveDateTime::parse_from_str(raw, "%Y-%m-%d %H:%M:%S").map(|t| t.and_utc()))
        .ok()?;
    // seconds precision
    DateTime::from_timestamp(parsed.timestamp(), 0)
}

fn make_record(
    user_id: &str,
    country: &str,
    timestamp: &str,
    venue_id: Option<&str>,
) -> std::result::Result<CheckinRecord, String> {
    if user_id.is_empty() {
        return Err("empty user_id".into());
    }
    let country = CountryCode::new(country).map_err(|e| e.to_string())?;
    let timestamp =
        parse_timestamp(timestamp).ok_or_else(|| format!("bad timestamp `{timestamp}`"))?;
    Ok(CheckinRecord {
        user_id: user_id.to_string(),
        country,
        timestamp,
        venue_id: venue_id.filter(|v| !v.is_empty()).map(str::to_string),
    })
}

#[derive(Deserialize)]
struct JsonCheckin {
    user_id: serde_json::Value,
    country: String,
    timestamp: serde_json::Value,
    #[serde(default)]
    venue_id: Option<serde_json::Value>,
}

fn json_scalar(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Parses a check-in log (CSV with header `user_id,country,timestamp[,venue_id]`,
/// or NDJSON objects with the same keys).
///
/// Timestamps may be RFC 3339, `YYYY-MM-DD HH:MM:SS` (UTC) or integer Unix seconds.
pub fn parse_checkins<R: Read>(
    reader: R,
    format: InputFormat,
    mode: ParseMode,
) -> Result<CheckinTable> {
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut reject = |row: u64, reason: String| -> Result<()> {
        match mode {
            ParseMode::Strict => Err(Error::MalformedRow {
                row,
                message: reason,
            }),
            ParseMode::Lenient => {
                skipped.push(SkippedRow { row, reason });
                Ok(())
            }
        }
    };

    match format {
        InputFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(true)
                .flexible(true)
                .trim(csv::Trim::All)
                .from_reader(reader);
            let header = rdr.headers()?.clone();
            let names: Vec<&str> = header.iter().collect();
            let ok = matches!(
                names.as_slice(),
                ["user_id", "country", "timestamp"]
                    | ["user_id", "country", "timestamp", "venue_id"]
            );
            if !ok {
                return Err(Error::MalformedRow {
                    row: 1,
                    message: format!(
                        "expected header `user_id,country,timestamp[,venue_id]`, found `{}`",
                        names.join(",")
                    ),
                });
            }
            let mut rec = csv::StringRecord::new();
            loop {
                match rdr.read_record(&mut rec) {
                    Ok(false) => break,
                    Ok(true) => {
                        let row = rec.position().map_or(0, |p| p.line());
                        if rec.len() < 3 || rec.len() > names.len() {
                            reject(
                                row,
                                format!("expected {} fields, found {}", names.len(), rec.len()),
                            )?;
                            continue;
                        }
                        match make_record(&rec[0], &rec[1], &rec[2], rec.get(3)) {
                            Ok(r) => records.push(r),
                            Err(msg) => reject(row, msg)?,
                        }
                    }
                    Err(e) => {
                        let row = e.position().map_or(0, |p| p.line());
                        if e.is_io_error() {
                            return Err(e.into());
                        }
                        reject(row, e.to_string())?;
                    }
                }
            }
        }
        InputFormat::Ndjson => {
            for (i, line) in BufReader::new(reader).lines().enumerate() {
                let line = line?;
                let row = i as u64 + 1;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: std::result::Result<JsonCheckin, _> = serde_json::from_str(&line);
                let result = parsed.map_err(|e| e.to_string()).and_then(|j| {
                    let user =
                        json_scalar(&j.user_id).ok_or("user_id must be a string or number")?;
                    let ts =
                        json_scalar(&j.timestamp).ok_or("timestamp must be a string or number")?;
                    let venue = j.venue_id.as_ref().and_then(json_scalar);
                    make_record(&user, &j.country, &ts, venue.as_deref())
                });
                match result {
                    Ok(r) => records.push(r),
                    Err(msg) => reject(row, msg)?,
                }
            }
        }
    }

    let mut table = CheckinTable::from_records(records);
    table.skipped = skipped;
    Ok(table)
}

/// Home country per user.
pub type HomeAssignment = BTreeMap<String, CountryCode>;

/// Each user's home is the country with most of their check-ins; ties go to the
/// lexicographically smallest code.
pub fn infer_homes(table: &CheckinTable) -> HomeAssignment {
    table
        .user_counts
        .iter()
        .filter_map(|(user, counts)| {
            // BTreeMap iterates in code order, so the first maximum wins ties
            let mut best: Option<(CountryCode, u64)> = None;
            for (&c, &n) in counts {
                if best.map_or(true, |(_, b)| n > b) {
                    best = Some((c, n));
                }
            }
            best.map(|(c, _)| (user.clone(), c))
        })
        .collect()
}

/// Countries with strictly more than `threshold` check-ins.
pub fn filter_countries(table: &CheckinTable, threshold: u64) -> BTreeSet<CountryCode> {
    table
        .country_counts
        .iter()
        .filter(|&(_, &n)| n > threshold)
        .map(|(&c, _)| c)
        .collect()
}

/// Builds the country flow graph over `allowed`.
///
/// `w_ij` is the number of distinct users with home `i` and at least one
/// check-in in `j` (`i != j`, both allowed). Users whose home is not allowed
/// are dropped entirely.
pub fn build_mobility_graph(
    table: &CheckinTable,
    homes: &HomeAssignment,
    allowed: &BTreeSet<CountryCode>,
    label: &str,
) -> Result<MobilityGraph> {
    let mut weights: BTreeMap<(CountryCode, CountryCode), u64> = BTreeMap::new();
    for (user, counts) in &table.user_counts {
        let home = *homes
            .get(user)
            .ok_or_else(|| Error::Missing(format!("home country for user `{user}`")))?;
        if !allowed.contains(&home) {
            continue;
        }
        for &visited in counts.keys() {
            if visited != home && allowed.contains(&visited) {
                *weights.entry((home, visited)).or_insert(0) += 1;
            }
        }
    }
    let graph = Digraph::from_coded(
        allowed.iter().copied(),
        weights.into_iter().map(|((a, b), w)| (a, b, w)),
    )?;
    Ok(MobilityGraph::new(label, graph))
}

const NODES_DIRECTIVE: &str = "# nodes=";
const LABEL_DIRECTIVE: &str = "# label=";

/// Parses an `origin,destination,count` flow matrix.
///
/// Lines starting with `#` are comments. Two comment directives are honored so
/// that serialized graphs round-trip: `# label=<name>` and
/// `# nodes=<code>,<code>,...` (declares nodes that may have no edges).
pub fn parse_flow_matrix<R: Read>(reader: R) -> Result<MobilityGraph> {
    let mut text = String::new();
    BufReader::new(reader).read_to_string(&mut text)?;

    let mut label = String::from("flows");
    let mut nodes = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(NODES_DIRECTIVE) {
            for code in rest.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                nodes.push(CountryCode::new(code)?);
            }
        } else if let Some(rest) = line.strip_prefix(LABEL_DIRECTIVE) {
            label = rest.trim().to_string();
        }
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != ["origin", "destination", "count"] {
        return Err(Error::MalformedRow {
            row: 1,
            message: format!(
                "expected header `origin,destination,count`, found `{}`",
                header.join(",")
            ),
        });
    }

    let mut edges: BTreeMap<(CountryCode, CountryCode), u64> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        let malformed = |message: String| Error::MalformedRow { row, message };
        if rec.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", rec.len())));
        }
        let origin = CountryCode::new(&rec[0]).map_err(|e| malformed(e.to_string()))?;
        let destination = CountryCode::new(&rec[1]).map_err(|e| malformed(e.to_string()))?;
        let count: i64 = rec[2]
            .parse()
            .map_err(|_| malformed(format!("count `{}` is not an integer", &rec[2])))?;
        if origin == destination {
            return Err(Error::SelfLoop(origin.to_string()).context(format!("row {row}")));
        }
        if count <= 0 {
            return Err(Error::NonPositiveWeight {
                origin: origin.to_string(),
                destination: destination.to_string(),
            }
            .context(format!("row {row}")));
        }
        if edges.insert((origin, destination), count as u64).is_some() {
            return Err(Error::DuplicateEdge {
                origin: origin.to_string(),
                destination: destination.to_string(),
            }
            .context(format!("row {row}")));
        }
    }

    let graph = Digraph::from_coded(nodes, edges.into_iter().map(|((a, b), w)| (a, b, w)))?;
    Ok(MobilityGraph::new(label, graph))
}

/// Serializes a graph as `origin,destination,count` rows sorted by (origin, destination),
/// preceded by `preamble` comment lines and the label/node directives.
pub fn write_flow_matrix<W: Write>(
    g: &MobilityGraph,
    preamble: &[String],
    mut out: W,
) -> Result<()> {
    for line in preamble {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{LABEL_DIRECTIVE}{}", g.label)?;
    let codes: Vec<&str> = g.nodes().iter().map(|c| c.as_str()).collect();
    writeln!(out, "{NODES_DIRECTIVE}{}", codes.join(","))?;
    writeln!(out, "origin,destination,count")?;
    for (a, b, w) in g.coded_edges() {
        writeln!(out, "{a},{b},{w}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(s: &str) -> CountryCode {
        s.parse().unwrap()
    }

    fn table(rows: &[(&str, &str)]) -> CheckinTable {
        let records = rows
            .iter()
            .map(|&(u, c)| CheckinRecord {
                user_id: u.to_string(),
                country: cc(c),
                timestamp: DateTime::from_timestamp(0, 0).unwrap(),
                venue_id: None,
            })
            .collect();
        CheckinTable::from_records(records)
    }

    #[test]
    fn header_only_csv_is_empty() {
        let t = parse_checkins(
            "user_id,country,timestamp\n".as_bytes(),
            InputFormat::Csv,
            ParseMode::Strict,
        )
        .unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn lenient_mode_skips_bad_country() {
        let data = "user_id,country,timestamp\n\
                    u1,TR,2014-04-01T10:00:00Z\n\
                    u1,Germany,2014-04-01T11:00:00Z\n\
                    u2,US,1396350000\n\
                    u3,BR,2014-04-02 08:30:00\n";
        let t = parse_checkins(data.as_bytes(), InputFormat::Csv, ParseMode::Lenient).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.skipped().len(), 1);
        assert_eq!(t.skipped()[0].row, 3);

        let err = parse_checkins(data.as_bytes(), InputFormat::Csv, ParseMode::Strict).unwrap_err();
        assert!(matches!(err, Error::MalformedRow { row: 3, .. }), "{err}");
    }

    #[test]
    fn csv_with_venue_and_crlf() {
        let data = "user_id,country,timestamp,venue_id\r\nu1,TR,2014-04-01T10:00:00Z,v9\r\nu1,DE,2014-04-01T10:00:00+02:00,\r\n";
        let t = parse_checkins(data.as_bytes(), InputFormat::Csv, ParseMode::Strict).unwrap();
        assert_eq!(t.records()[0].venue_id.as_deref(), Some("v9"));
        assert_eq!(t.records()[1].venue_id, None);
        assert_eq!(
            t.records()[1].timestamp.timestamp(),
            t.records()[0].timestamp.timestamp() - 7200
        );
    }

    #[test]
    fn ndjson_records() {
        let data = r#"{"user_id":"u1","country":"TR","timestamp":"2014-04-01T10:00:00Z"}
{"user_id":7,"country":"US","timestamp":1396350000,"venue_id":"x"}

{"user_id":"u2","country":"us","timestamp":0}
"#;
        let t = parse_checkins(data.as_bytes(), InputFormat::Ndjson, ParseMode::Lenient).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.records()[1].user_id, "7");
        assert_eq!(t.skipped()[0].row, 4);
    }

    #[test]
    fn unknown_format_and_bad_header() {
        assert!(matches!(
            "xml".parse::<InputFormat>(),
            Err(Error::UnknownFormat(_))
        ));
        let err = parse_checkins(
            "user,country,ts\n".as_bytes(),
            InputFormat::Csv,
            ParseMode::Lenient,
        );
        assert!(err.is_err());
    }

    #[test]
    fn home_is_max_with_lexicographic_tie_break() {
        let mut rows = vec![("u1", "TR"); 5];
        rows.extend([("u1", "US"); 2]);
        rows.extend([("u2", "BR"); 3]);
        rows.extend([("u2", "AR"); 3]);
        let homes = infer_homes(&table(&rows));
        assert_eq!(homes["u1"], cc("TR"));
        assert_eq!(homes["u2"], cc("AR"));
    }

    #[test]
    fn threshold_is_strict() {
        let mut rows = vec![("u1", "TR"); 1000];
        rows.push(("u2", "US"));
        let t = table(&rows);
        assert!(filter_countries(&t, 1000).is_empty());
        assert_eq!(filter_countries(&t, 999), [cc("TR")].into());
        assert_eq!(filter_countries(&t, 0).len(), 2);
    }

    #[test]
    fn single_tourist_edge() {
        let t = table(&[("u1", "TR"), ("u1", "TR"), ("u1", "DE")]);
        let homes = infer_homes(&t);
        let g = build_mobility_graph(&t, &homes, &filter_countries(&t, 0), "x").unwrap();
        let e: Vec<_> = g.coded_edges().collect();
        assert_eq!(e, vec![(cc("TR"), cc("DE"), 1)]);
    }

    #[test]
    fn distinct_users_counted_once() {
        let t = table(&[
            ("a", "US"),
            ("a", "US"),
            ("a", "MX"),
            ("a", "MX"),
            ("a", "MX"),
            ("a", "US"),
            ("a", "US"),
            ("b", "US"),
            ("b", "US"),
            ("b", "US"),
            ("b", "MX"),
            ("b", "CA"),
        ]);
        let homes = infer_homes(&t);
        let g = build_mobility_graph(&t, &homes, &filter_countries(&t, 0), "x").unwrap();
        let us = g.index_of(cc("US")).unwrap();
        assert_eq!(g.weight(us, g.index_of(cc("MX")).unwrap()), Some(2));
        assert_eq!(g.weight(us, g.index_of(cc("CA")).unwrap()), Some(1));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn residents_of_filtered_countries_are_dropped() {
        let t = table(&[
            ("a", "XX"),
            ("a", "XX"),
            ("a", "US"),
            ("b", "US"),
            ("b", "MX"),
        ]);
        let allowed = [cc("US"), cc("MX")].into();
        let g = build_mobility_graph(&t, &infer_homes(&t), &allowed, "x").unwrap();
        // a lives in XX and is dropped; b's home is MX (tie) and visits US
        let e: Vec<_> = g.coded_edges().collect();
        assert_eq!(e, vec![(cc("MX"), cc("US"), 1)]);
    }

    #[test]
    fn flow_matrix_basic_and_errors() {
        let g = parse_flow_matrix("origin,destination,count\nFR,ES,100\nES,FR,80\n".as_bytes())
            .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 2);

        let self_loop =
            parse_flow_matrix("origin,destination,count\nFR,FR,5\n".as_bytes()).unwrap_err();
        assert!(
            matches!(self_loop, Error::Context { ref source, .. } if matches!(**source, Error::SelfLoop(_)))
        );
        let dup = parse_flow_matrix("origin,destination,count\nFR,ES,1\nFR,ES,2\n".as_bytes());
        assert!(dup.is_err());
        let zero = parse_flow_matrix("origin,destination,count\nFR,ES,0\n".as_bytes());
        assert!(zero.is_err());
        let neg = parse_flow_matrix("origin,destination,count\nFR,ES,-3\n".as_bytes());
        assert!(neg.is_err());
    }

    #[test]
    fn flow_matrix_round_trip_keeps_isolated_nodes() {
        let g = parse_flow_matrix(
            "# nodes=AA,ZZ\n# label=wto\norigin,destination,count\nFR,ES,100\n".as_bytes(),
        )
        .unwrap();
        assert_eq!(g.node_count(), 4);
        let mut buf = Vec::new();
        write_flow_matrix(&g, &["meta".into()], &mut buf).unwrap();
        let back = parse_flow_matrix(buf.as_slice()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.label, "wto");
    }
}
