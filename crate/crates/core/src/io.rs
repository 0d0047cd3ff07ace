//! Plain-text input formats.
//!
//! * Points: one point per line, coordinates separated by commas and/or
//!   whitespace.
//! * Graphs: a header `n m`, then `m` lines `u v [w]` with 0-based vertices;
//!   the graph is weighted when any weight is given.
//! * Samples: one site index per line.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::path::Path;
use std::str::FromStr;

use crate::error::{GapError, Result};
use crate::metric::{Graph, PointCloud};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| GapError::Io(format!("{}: {e}", path.display())))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
}

fn parse_field<T: FromStr>(field: &str, context: &str, line: usize, what: &str) -> Result<T> {
    field.parse().map_err(|_| GapError::Parse {
        context: context.to_string(),
        line,
        message: format!("invalid {what} {field:?}"),
    })
}

fn malformed(context: &str, line: usize, message: String) -> GapError {
    GapError::Parse {
        context: context.to_string(),
        line,
        message,
    }
}

/// Raw point rows in file order, duplicates kept.
pub fn parse_point_rows(text: &str, context: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, content) in content_lines(text) {
        let row = fields(content)
            .map(|f| parse_field::<f64>(f, context, line, "coordinate"))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(malformed(
                    context,
                    line,
                    format!("expected {} coordinates, found {}", first.len(), row.len()),
                ));
            }
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(malformed(context, line, "non-finite coordinate".into()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(GapError::EmptyInput);
    }
    Ok(rows)
}

pub fn parse_points(text: &str, context: &str) -> Result<PointCloud> {
    let rows = parse_point_rows(text, context)?;
    PointCloud::new(rows[0].len(), rows)
}

pub fn parse_graph(text: &str, context: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| malformed(context, 1, "missing header \"n m\"".into()))?;
    let head: Vec<&str> = fields(header).collect();
    if head.len() != 2 {
        return Err(malformed(context, hline, "header must be \"n m\"".into()));
    }
    let n: usize = parse_field(head[0], context, hline, "vertex count")?;
    let m: usize = parse_field(head[1], context, hline, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut weighted = false;
    let mut last_line = hline;
    for (line, content) in lines {
        last_line = line;
        let f: Vec<&str> = fields(content).collect();
        if !(2..=3).contains(&f.len()) {
            return Err(malformed(context, line, "edge must be \"u v [w]\"".into()));
        }
        let u: usize = parse_field(f[0], context, line, "vertex")?;
        let v: usize = parse_field(f[1], context, line, "vertex")?;
        let w = match f.get(2) {
            Some(w) => {
                weighted = true;
                parse_field::<f64>(w, context, line, "weight")?
            }
            None => 1.0,
        };
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(malformed(
            context,
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges, weighted)
}

pub fn parse_sample(text: &str, context: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (line, content) in content_lines(text) {
        for f in fields(content) {
            out.push(parse_field(f, context, line, "index")?);
        }
    }
    Ok(out)
}
