//! CSV file formats.
//!
//! - clustering: header `point,color,cluster`, one row per point;
//! - correlation graph: first line `nodes,N`, then one `u,v` line (`u < v`) per "+" edge;
//! - consensus: header `point,color,c1,...,cm`, one clustering per `c` column.
//!
//! Point ids must be exactly `0..n` in any order. Cluster labels are arbitrary
//! non-negative integers and are renumbered by first appearance on write.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use fairclust::{Clustering, ColorAssignment, CorrelationInstance};

use crate::error::{CliError, Result};

struct Row {
    line: u64,
    fields: Vec<String>,
}

fn io_err(path: &Path, source: io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source }
}

fn malformed(path: &Path, line: u64, msg: impl Into<String>) -> CliError {
    CliError::Malformed { path: path.to_path_buf(), line, msg: msg.into() }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| io_err(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn rows<R: Read>(reader: R, path: &Path) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            match e.into_kind() {
                csv::ErrorKind::Io(source) => io_err(path, source),
                kind => malformed(path, line, format!("{kind:?}")),
            }
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        out.push(Row { line, fields: record.iter().map(str::to_owned).collect() });
    }
    Ok(out)
}

fn integer(path: &Path, row: &Row, i: usize) -> Result<usize> {
    let field = &row.fields[i];
    field.parse::<usize>().map_err(|_| malformed(path, row.line, format!("`{field}` is not a non-negative integer")))
}

fn expect_header(path: &Path, row: Option<&Row>, expected: &[String]) -> Result<()> {
    match row {
        Some(r) if r.fields == expected => Ok(()),
        Some(r) => Err(malformed(path, r.line, format!("expected header `{}`", expected.join(",")))),
        None => Err(CliError::NoPoints { path: path.to_path_buf() }),
    }
}

/// Rows keyed by point id, checked to cover `0..n` exactly once.
fn point_table(path: &Path, body: &[Row], width: usize) -> Result<Vec<Vec<usize>>> {
    if body.is_empty() {
        return Err(CliError::NoPoints { path: path.to_path_buf() });
    }
    let n = body.len();
    let mut table: Vec<Option<Vec<usize>>> = vec![None; n];
    for row in body {
        if row.fields.len() != width {
            return Err(malformed(path, row.line, format!("expected {width} fields, found {}", row.fields.len())));
        }
        let values = (0..width).map(|i| integer(path, row, i)).collect::<Result<Vec<_>>>()?;
        let point = values[0];
        if point >= n {
            return Err(malformed(path, row.line, format!("point {point} out of range for {n} rows (gap in ids)")));
        }
        if table[point].is_some() {
            return Err(malformed(path, row.line, format!("duplicate point {point}")));
        }
        table[point] = Some(values[1..].to_vec());
    }
    Ok(table.into_iter().map(Option::unwrap).collect())
}

fn column(table: &[Vec<usize>], i: usize) -> Vec<usize> {
    table.iter().map(|r| r[i]).collect()
}

pub fn parse_clustering<R: Read>(reader: R, path: &Path) -> Result<(Clustering, ColorAssignment)> {
    let rows = rows(reader, path)?;
    let header = ["point", "color", "cluster"].map(String::from);
    expect_header(path, rows.first(), &header)?;
    let table = point_table(path, &rows[1..], 3)?;
    let colors = ColorAssignment::new(column(&table, 0))?;
    let clustering = Clustering::from_labels(&column(&table, 1))?;
    Ok((clustering, colors))
}

pub fn read_clustering(path: &Path) -> Result<(Clustering, ColorAssignment)> {
    parse_clustering(open(path)?, path)
}

pub fn format_clustering<W: Write>(mut w: W, c: &Clustering, colors: &ColorAssignment) -> io::Result<()> {
    writeln!(w, "point,color,cluster")?;
    for (point, (&label, &color)) in c.labels().iter().zip(colors.colors()).enumerate() {
        writeln!(w, "{point},{color},{label}")?;
    }
    w.flush()
}

pub fn write_clustering(path: &Path, c: &Clustering, colors: &ColorAssignment) -> Result<()> {
    check_sizes(c.n_points(), colors)?;
    format_clustering(create(path)?, c, colors).map_err(|e| io_err(path, e))
}

fn check_sizes(n: usize, colors: &ColorAssignment) -> Result<()> {
    if n != colors.n_points() {
        return Err(fairclust::Error::PointSetMismatch { left: n, right: colors.n_points() }.into());
    }
    Ok(())
}

pub fn parse_correlation<R: Read>(reader: R, path: &Path) -> Result<CorrelationInstance> {
    let rows = rows(reader, path)?;
    let first = rows.first().ok_or_else(|| CliError::NoPoints { path: path.to_path_buf() })?;
    if first.fields.len() != 2 || first.fields[0] != "nodes" {
        return Err(malformed(path, first.line, "expected `nodes,N`"));
    }
    let n = integer(path, first, 1)?;
    let mut edges = Vec::with_capacity(rows.len() - 1);
    for row in &rows[1..] {
        if row.fields.len() != 2 {
            return Err(malformed(path, row.line, "expected `u,v`"));
        }
        let (u, v) = (integer(path, row, 0)?, integer(path, row, 1)?);
        if u >= v {
            return Err(malformed(path, row.line, format!("edge `{u},{v}` must satisfy u < v")));
        }
        edges.push((u, v));
    }
    Ok(CorrelationInstance::new(n, edges)?)
}

pub fn read_correlation(path: &Path) -> Result<CorrelationInstance> {
    parse_correlation(open(path)?, path)
}

pub fn format_correlation<W: Write>(mut w: W, inst: &CorrelationInstance) -> io::Result<()> {
    writeln!(w, "nodes,{}", inst.n_points())?;
    for &(u, v) in inst.plus_edges() {
        writeln!(w, "{u},{v}")?;
    }
    w.flush()
}

pub fn write_correlation(path: &Path, inst: &CorrelationInstance) -> Result<()> {
    format_correlation(create(path)?, inst).map_err(|e| io_err(path, e))
}

pub fn parse_consensus<R: Read>(reader: R, path: &Path) -> Result<(Vec<Clustering>, ColorAssignment)> {
    let rows = rows(reader, path)?;
    let head = rows.first().ok_or_else(|| CliError::NoPoints { path: path.to_path_buf() })?;
    let m = head.fields.len().saturating_sub(2);
    let mut header = vec!["point".to_string(), "color".to_string()];
    header.extend((1..=m).map(|i| format!("c{i}")));
    if m == 0 {
        return Err(malformed(path, head.line, "expected header `point,color,c1,...,cm` with m ≥ 1"));
    }
    expect_header(path, Some(head), &header)?;
    let table = point_table(path, &rows[1..], m + 2)?;
    let colors = ColorAssignment::new(column(&table, 0))?;
    let inputs = (1..=m).map(|i| Clustering::from_labels(&column(&table, i))).collect::<fairclust::Result<Vec<_>>>()?;
    Ok((inputs, colors))
}

pub fn read_consensus(path: &Path) -> Result<(Vec<Clustering>, ColorAssignment)> {
    parse_consensus(open(path)?, path)
}

pub fn format_consensus<W: Write>(mut w: W, inputs: &[Clustering], colors: &ColorAssignment) -> io::Result<()> {
    write!(w, "point,color")?;
    for i in 1..=inputs.len() {
        write!(w, ",c{i}")?;
    }
    writeln!(w)?;
    for (point, &color) in colors.colors().iter().enumerate() {
        write!(w, "{point},{color}")?;
        for c in inputs {
            write!(w, ",{}", c.labels()[point])?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn write_consensus(path: &Path, inputs: &[Clustering], colors: &ColorAssignment) -> Result<()> {
    if inputs.is_empty() {
        return Err(fairclust::Error::NoInputs.into());
    }
    for c in inputs {
        check_sizes(c.n_points(), colors)?;
    }
    format_consensus(create(path)?, inputs, colors).map_err(|e| io_err(path, e))
}

/// Label used in error messages for in-memory sources.
pub fn memory_path() -> PathBuf {
    PathBuf::from("<input>")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<(Clustering, ColorAssignment)> {
        parse_clustering(text.as_bytes(), &memory_path())
    }

    #[test]
    fn reads_four_points() {
        let (c, colors) = parse("point,color,cluster\n0,0,5\n1,1,5\n3,1,2\n2,0,2\n").unwrap();
        assert_eq!(c.n_points(), 4);
        assert_eq!(c.clusters(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(colors.counts(), &[2, 2]);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "point,color,cluster\n0,0,0\n1,1,0\n2,0,1\n3,1,1\n";
        let (c, colors) = parse(text).unwrap();
        let mut out = Vec::new();
        format_clustering(&mut out, &c, &colors).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(parse("point,color,cluster\n"), Err(CliError::NoPoints { .. })));
        assert!(matches!(parse(""), Err(CliError::NoPoints { .. })));
        assert!(matches!(parse("a,b,c\n0,0,0\n"), Err(CliError::Malformed { line: 1, .. })));
        assert!(matches!(parse("point,color,cluster\n0,0,0\n0,0,1\n"), Err(CliError::Malformed { line: 3, .. })));
        assert!(matches!(parse("point,color,cluster\n0,0,0\n2,0,1\n"), Err(CliError::Malformed { .. })));
        assert!(matches!(parse("point,color,cluster\n0,-1,0\n"), Err(CliError::Malformed { .. })));
        assert!(matches!(parse("point,color,cluster\n0,0\n"), Err(CliError::Malformed { .. })));
        assert!(matches!(parse("point,color,cluster\n0,1,0\n"), Err(CliError::Core(_))));
    }

    #[test]
    fn correlation_round_trip() {
        let text = "nodes,4\n0,1\n2,3\n";
        let inst = parse_correlation(text.as_bytes(), &memory_path()).unwrap();
        assert_eq!(inst.plus_edges(), &[(0, 1), (2, 3)]);
        let mut out = Vec::new();
        format_correlation(&mut out, &inst).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
        assert!(parse_correlation("nodes,3\n1,0\n".as_bytes(), &memory_path()).is_err());
        assert!(parse_correlation("nodes,3\n0,1\n0,1\n".as_bytes(), &memory_path()).is_err());
        assert!(parse_correlation("nodes,3\n0,3\n".as_bytes(), &memory_path()).is_err());
    }

    #[test]
    fn consensus_round_trip() {
        let text = "point,color,c1,c2\n0,0,0,0\n1,1,0,1\n";
        let (inputs, colors) = parse_consensus(text.as_bytes(), &memory_path()).unwrap();
        assert_eq!(inputs.len(), 2);
        let mut out = Vec::new();
        format_consensus(&mut out, &inputs, &colors).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
        assert!(parse_consensus("point,color\n0,0\n".as_bytes(), &memory_path()).is_err());
        assert!(parse_consensus("point,color,c2\n0,0,0\n".as_bytes(), &memory_path()).is_err());
    }
}
