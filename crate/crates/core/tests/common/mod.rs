//! Shared corpus and brute-force oracles for the integration tests. The
//! oracles work from plain column lists and never call the search code
//! they check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta3::construct::{
    circuit_matroid, complete_graph_matroid, cycle_matroid, parallel_connection,
    projective_geometry, Graph,
};
use theta3::{catalog, BinaryMatroid, GF2Vector};

pub fn cols(m: &BinaryMatroid) -> Vec<u64> {
    m.columns().iter().map(|c| c.bits()).collect()
}

/// Rank of the columns picked by `mask`, by plain Gaussian elimination.
pub fn rank(cols: &[u64], mask: u64) -> usize {
    let mut rows: Vec<u64> = Vec::new();
    for (i, &c) in cols.iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        let mut v = c;
        for &r in &rows {
            v = v.min(v ^ r);
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

pub fn is_circuit(cols: &[u64], mask: u64) -> bool {
    let n = mask.count_ones() as usize;
    n > 0
        && rank(cols, mask) == n - 1
        && (0..cols.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| rank(cols, mask & !(1 << i)) == n - 1)
}

pub fn subsets(n: usize) -> impl Iterator<Item = u64> {
    0..(1u64 << n)
}

/// All circuits as bit masks.
pub fn circuits(cols: &[u64]) -> BTreeSet<u64> {
    subsets(cols.len())
        .filter(|&s| is_circuit(cols, s))
        .collect()
}

/// Theta-graphs found directly from the definition: restrictions with
/// nullity two, no coloops, and exactly three series classes, which are
/// then the arcs. Returned as sorted arc triples of bit masks.
pub fn theta_graphs(cols: &[u64]) -> BTreeSet<[u64; 3]> {
    let mut out = BTreeSet::new();
    for t in subsets(cols.len()) {
        let size = t.count_ones() as usize;
        if size < 3 {
            continue;
        }
        let r = rank(cols, t);
        if r + 2 != size {
            continue;
        }
        let members: Vec<usize> = (0..cols.len()).filter(|i| t >> i & 1 == 1).collect();
        if members.iter().any(|&e| rank(cols, t & !(1 << e)) < r) {
            continue;
        }
        let mut classes: Vec<u64> = Vec::new();
        for &e in &members {
            match classes
                .iter_mut()
                .find(|c| rank(cols, t & !(1 << e) & !(1 << c.trailing_zeros())) < r)
            {
                Some(c) => *c |= 1 << e,
                None => classes.push(1 << e),
            }
        }
        if classes.len() == 3 {
            classes.sort();
            out.insert([classes[0], classes[1], classes[2]]);
        }
    }
    out
}

/// Completeness by the definition: some element `e` makes every arc plus
/// `e` a circuit, or is itself an arc.
pub fn is_complete(cols: &[u64], arcs: [u64; 3]) -> bool {
    (0..cols.len()).any(|e| {
        let bit = 1u64 << e;
        arcs.iter()
            .all(|&a| a == bit || (a & bit == 0 && is_circuit(cols, a | bit)))
    })
}

pub fn mat(dim: usize, columns: &[u64], prefix: &str) -> BinaryMatroid {
    BinaryMatroid::new(
        dim,
        columns
            .iter()
            .enumerate()
            .map(|(i, &c)| (format!("{prefix}{i}"), GF2Vector::new(c, dim).unwrap()))
            .collect(),
    )
    .unwrap()
}

pub fn graph(edges: &[(&str, &str, &str)]) -> Graph {
    Graph::new(
        edges
            .iter()
            .map(|(u, v, l)| (u.to_string(), v.to_string(), l.to_string()))
            .collect(),
    )
}

pub fn k23() -> BinaryMatroid {
    cycle_matroid(&graph(&[
        ("x", "1", "a1"),
        ("1", "y", "b1"),
        ("x", "2", "a2"),
        ("2", "y", "b2"),
        ("x", "3", "a3"),
        ("3", "y", "b3"),
    ]))
    .unwrap()
}

/// Two triangles sharing the basepoint `p`.
pub fn two_triangles() -> BinaryMatroid {
    let m = BinaryMatroid::new(
        2,
        vec![
            ("p".into(), GF2Vector::new(0b01, 2).unwrap()),
            ("a".into(), GF2Vector::new(0b10, 2).unwrap()),
            ("b".into(), GF2Vector::new(0b11, 2).unwrap()),
        ],
    )
    .unwrap();
    let n = BinaryMatroid::new(
        2,
        vec![
            ("p".into(), GF2Vector::new(0b10, 2).unwrap()),
            ("c".into(), GF2Vector::new(0b01, 2).unwrap()),
            ("d".into(), GF2Vector::new(0b11, 2).unwrap()),
        ],
    )
    .unwrap();
    parallel_connection(&m, &n, "p", "p").unwrap()
}

/// Random column lists drawn from nonzero vectors of dimension `dim`,
/// sometimes with repeats and zero columns.
pub fn random_matroid(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_len: usize,
    tag: usize,
) -> BinaryMatroid {
    let n = rng.gen_range(1..=max_len);
    let top = 1u64 << dim;
    let cols: Vec<u64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.05) {
                0
            } else {
                rng.gen_range(1..top)
            }
        })
        .collect();
    mat(dim, &cols, &format!("r{tag}_"))
}

/// Named and constructed matroids used across the suites, with names.
pub fn corpus() -> Vec<(String, BinaryMatroid)> {
    let mut out: Vec<(String, BinaryMatroid)> = Vec::new();
    for key in [
        "F7",
        "F7STAR",
        "MSTAR_K5",
        "MSTAR_K33",
        "M_K24",
        "THETA(2,2,2)",
        "THETA(1,2,3)",
        "THETA(2,3,3)",
    ] {
        out.push((key.to_string(), catalog::lookup(key).unwrap()));
    }
    for n in 1..=10 {
        out.push((format!("CIRCUIT({n})"), circuit_matroid(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("MK({n})"), complete_graph_matroid(n).unwrap()));
    }
    for r in 1..=4 {
        out.push((format!("PG({r})"), projective_geometry(r).unwrap()));
    }
    out.push(("K23".into(), k23()));
    out.push(("two triangles".into(), two_triangles()));
    out.push(("U13".into(), mat(1, &[1, 1, 1], "u")));
    out.push((
        "parallel pair and loop".into(),
        mat(2, &[1, 1, 2, 3, 0], "q"),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    for i in 0..40 {
        let dim = rng.gen_range(3..=5);
        out.push((format!("random {i}"), random_matroid(&mut rng, dim, 10, i)));
    }
    out
}

/// Images of a column set under every invertible linear map of dimension
/// `dim`, as bit masks over the `2^dim` vectors.
pub fn gl_orbit(dim: usize, columns: &[u64]) -> HashSet<u64> {
    let top = 1u64 << dim;
    let mut out = HashSet::new();
    let mut images = vec![0u64; dim];
    fn rec(
        k: usize,
        dim: usize,
        top: u64,
        images: &mut Vec<u64>,
        columns: &[u64],
        out: &mut HashSet<u64>,
    ) {
        if k == dim {
            let mut mask = 0u64;
            for &c in columns {
                let mut v = 0;
                for (i, &img) in images.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        v ^= img;
                    }
                }
                mask |= 1 << v;
            }
            out.insert(mask);
            return;
        }
        for v in 1..top {
            images[k] = v;
            if rank(&images[..=k], (1 << (k + 1)) - 1) == k + 1 {
                rec(k + 1, dim, top, images, columns, out);
            }
        }
    }
    rec(0, dim, top, &mut images, columns, &mut out);
    out
}

/// Circuit families keyed by label sets.
pub fn labelled_circuits(m: &BinaryMatroid) -> BTreeSet<Vec<String>> {
    let c = cols(m);
    circuits(&c)
        .into_iter()
        .map(|mask| {
            let mut v: Vec<String> = (0..m.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| m.label(i).to_string())
                .collect();
            v.sort();
            v
        })
        .collect()
}

pub fn label_map(pairs: &[(&str, &str)]) -> HashMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}
