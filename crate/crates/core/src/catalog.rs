//! Named matroids.
//!
//! Keys: `F7`, `F7STAR`, `MK(n)`, `PG(r)`, `MSTAR_K5`, `MSTAR_K33`, `M_K24`,
//! `CIRCUIT(n)` and `THETA(a,b,c)`.

use crate::construct::{
    circuit_matroid, complete_graph_matroid, cycle_matroid, projective_geometry, Graph,
};
use crate::error::{Error, Result};
use crate::gf2::GF2Vector;
use crate::matroid::BinaryMatroid;

/// Key forms with a one-line description each.
pub const CATALOG: &[(&str, &str)] = &[
    ("F7", "Fano plane, elements 1..7 by bit pattern"),
    ("F7STAR", "dual of the Fano plane"),
    ("MK(n)", "cycle matroid of the complete graph K_n"),
    ("PG(r)", "binary projective geometry of rank r"),
    ("MSTAR_K5", "bond matroid of K5, elements 1..9 and 0"),
    (
        "MSTAR_K33",
        "bond matroid of K3,3, element ij joins u_i to w_j",
    ),
    ("M_K24", "cycle matroid of K2,4, elements a1..a4 and b1..b4"),
    ("CIRCUIT(n)", "the n-element circuit U(n-1,n)"),
    (
        "THETA(a,b,c)",
        "cycle matroid of three internally disjoint paths",
    ),
];

/// Columns of the bond matroid of K5, elements `1..9, 0`.
const MSTAR_K5_COLUMNS: [(&str, &str); 10] = [
    ("1", "100000"),
    ("2", "010000"),
    ("3", "001000"),
    ("4", "000100"),
    ("5", "000010"),
    ("6", "000001"),
    ("7", "111000"),
    ("8", "001101"),
    ("9", "010011"),
    ("0", "100110"),
];

fn fano() -> Result<BinaryMatroid> {
    let pg = projective_geometry(3)?;
    let map = pg
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), (i + 1).to_string()))
        .collect();
    pg.relabel(&map)
}

fn graph(edges: Vec<(String, String, String)>) -> Result<BinaryMatroid> {
    cycle_matroid(&Graph::new(edges))
}

fn k33() -> Result<BinaryMatroid> {
    let mut edges = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            edges.push((format!("u{i}"), format!("w{j}"), format!("{i}{j}")));
        }
    }
    graph(edges)
}

fn k24() -> Result<BinaryMatroid> {
    let mut edges = Vec::new();
    for i in 1..=4 {
        edges.push(("x".to_string(), format!("m{i}"), format!("a{i}")));
        edges.push((format!("m{i}"), "y".to_string(), format!("b{i}")));
    }
    graph(edges)
}

/// Paths of `a`, `b` and `c` edges between two vertices; the edges of the
/// path with `k` edges are labelled `<p>1..<p>k` with `p` in `a, b, c`.
pub fn theta_graph_matroid(a: usize, b: usize, c: usize) -> Result<BinaryMatroid> {
    let mut edges = Vec::new();
    for (name, len) in [("a", a), ("b", b), ("c", c)] {
        if len == 0 {
            return Err(Error::InvalidArgument(
                "theta paths need at least one edge".into(),
            ));
        }
        for k in 1..=len {
            let from = if k == 1 {
                "x".to_string()
            } else {
                format!("{name}:{}", k - 1)
            };
            let to = if k == len {
                "y".to_string()
            } else {
                format!("{name}:{k}")
            };
            edges.push((from, to, format!("{name}{k}")));
        }
    }
    graph(edges)
}

fn args(key: &str, name: &str) -> Option<Vec<usize>> {
    let inner = key
        .strip_prefix(name)?
        .strip_prefix('(')?
        .strip_suffix(')')?;
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// The matroid named by `key`.
pub fn lookup(key: &str) -> Result<BinaryMatroid> {
    let key = key.trim();
    let unknown = || Error::InvalidArgument(format!("unknown catalog key `{key}`"));
    match key {
        "F7" => return fano(),
        "F7STAR" => return fano()?.dual(),
        "MSTAR_K5" => {
            return BinaryMatroid::new(
                6,
                MSTAR_K5_COLUMNS
                    .iter()
                    .map(|(l, c)| Ok((l.to_string(), GF2Vector::parse_rows(c)?)))
                    .collect::<Result<_>>()?,
            )
        }
        "MSTAR_K33" => return k33()?.dual(),
        "M_K24" => return k24(),
        _ => {}
    }
    let one = |name: &str| match args(key, name).as_deref() {
        Some([n]) => Some(*n),
        _ => None,
    };
    if let Some(n) = one("MK") {
        return complete_graph_matroid(n);
    }
    if let Some(r) = one("PG") {
        return projective_geometry(r);
    }
    if let Some(n) = one("CIRCUIT") {
        return circuit_matroid(n);
    }
    if let Some([a, b, c]) = args(key, "THETA").as_deref() {
        return theta_graph_matroid(*a, *b, *c);
    }
    Err(unknown())
}
