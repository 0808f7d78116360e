//! Text formats for matroids and graphs.
//!
//! Matroid files start with `dim d` and then list one element per line as
//! `LABEL BITS`, where `BITS` has `d` binary digits, row 1 first. In
//! dimension 0 an element line is just its label. Graph files list one edge
//! per line as `u v label`. In both, `#` starts a comment and blank lines
//! are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::construct::Graph;
use crate::error::{Error, Result};
use crate::gf2::{GF2Vector, MAX_DIM};
use crate::matroid::{validate_label, BinaryMatroid, MAX_ELEMENTS};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-comment tokens of each line with their 1-based line and column.
fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (pos, c) in content.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    toks.push((s, &content[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            toks.push((s, &content[s..]));
        }
        let toks: Vec<(usize, &str)> = toks
            .into_iter()
            .map(|(byte, t)| (content[..byte].chars().count() + 1, t))
            .collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub fn parse_matroid(text: &str) -> Result<BinaryMatroid> {
    let mut lines = tokens(text);
    let Some((line, header)) = lines.next() else {
        return Err(parse_error(1, 1, "missing `dim` line"));
    };
    if header[0].1 != "dim" || header.len() != 2 {
        return Err(parse_error(line, header[0].0, "expected `dim <d>`"));
    }
    let (col, d) = header[1];
    let dim: usize = d
        .parse()
        .map_err(|_| parse_error(line, col, format!("`{d}` is not a dimension")))?;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
    }
    let mut elements = Vec::new();
    let mut seen = HashSet::new();
    for (line, toks) in lines {
        let expected = if dim == 0 { 1 } else { 2 };
        if toks.len() != expected {
            let col = toks.get(expected).map_or(toks[0].0, |t| t.0);
            let shape = if dim == 0 { "LABEL" } else { "LABEL BITS" };
            return Err(parse_error(line, col, format!("expected `{shape}`")));
        }
        let (lcol, label) = toks[0];
        if validate_label(label).is_err() {
            return Err(parse_error(line, lcol, format!("invalid label `{label}`")));
        }
        if !seen.insert(label) {
            return Err(parse_error(
                line,
                lcol,
                format!("duplicate label `{label}`"),
            ));
        }
        let v = if dim == 0 {
            GF2Vector::zero(0)?
        } else {
            let (bcol, bits) = toks[1];
            if let Some(k) = bits.chars().position(|c| c != '0' && c != '1') {
                return Err(parse_error(line, bcol + k, "expected a binary digit"));
            }
            let len = bits.chars().count();
            if len != dim {
                return Err(parse_error(
                    line,
                    bcol,
                    format!("column has {len} rows, expected {dim}"),
                ));
            }
            GF2Vector::parse_rows(bits)?
        };
        if elements.len() == MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                count: MAX_ELEMENTS + 1,
                max: MAX_ELEMENTS,
            });
        }
        elements.push((label.to_string(), v));
    }
    BinaryMatroid::new(dim, elements)
}

pub fn serialize_matroid(m: &BinaryMatroid) -> String {
    let mut out = format!("dim {}\n", m.dim());
    for (i, l) in m.labels().iter().enumerate() {
        if m.dim() == 0 {
            let _ = writeln!(out, "{l}");
        } else {
            let _ = writeln!(out, "{l} {}", m.column(i));
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, toks) in tokens(text) {
        if toks.len() != 3 {
            let col = toks.get(3).map_or(toks[0].0, |t| t.0);
            return Err(parse_error(line, col, "expected `u v label`"));
        }
        let (lcol, label) = toks[2];
        if validate_label(label).is_err() {
            return Err(parse_error(line, lcol, format!("invalid label `{label}`")));
        }
        if !seen.insert(label) {
            return Err(parse_error(
                line,
                lcol,
                format!("duplicate label `{label}`"),
            ));
        }
        if edges.len() == MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                count: MAX_ELEMENTS + 1,
                max: MAX_ELEMENTS,
            });
        }
        edges.push((
            toks[0].1.to_string(),
            toks[1].1.to_string(),
            label.to_string(),
        ));
    }
    Ok(Graph::new(edges))
}

pub fn serialize_graph(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|(u, v, l)| format!("{u} {v} {l}\n"))
        .collect()
}
