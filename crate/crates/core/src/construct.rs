//! Building blocks (circuits, complete-graph matroids, projective
//! geometries, cycle matroids), their recognizers, and parallel connection.

use std::collections::{HashMap, HashSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{self, drop_rows, MAX_DIM};
use crate::matroid::{BinaryMatroid, ElementSet, MAX_ELEMENTS};

/// A multigraph as a list of `(u, v, label)` edges. Vertex names are free
/// text; edge labels become element labels of the cycle matroid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    edges: Vec<(String, String, String)>,
}

impl Graph {
    pub fn new(edges: Vec<(String, String, String)>) -> Self {
        Graph { edges }
    }

    pub fn edges(&self) -> &[(String, String, String)] {
        &self.edges
    }

    /// Vertices in order of first appearance.
    pub fn vertices(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v, _) in &self.edges {
            for x in [u, v] {
                if seen.insert(x.as_str()) {
                    out.push(x.as_str());
                }
            }
        }
        out
    }
}

/// `U(n-1, n)`: unit vectors `e1..e(n-1)` and their sum, labelled `c1..cn`.
pub fn circuit_matroid(n: usize) -> Result<BinaryMatroid> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a circuit needs at least one element".into(),
        ));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::TooManyElements {
            count: n,
            max: MAX_ELEMENTS,
        });
    }
    let dim = n - 1;
    let mut cols: Vec<u64> = (0..dim).map(|i| 1u64 << i).collect();
    cols.push(gf2::dim_mask(dim));
    let labels = (1..=n).map(|i| format!("c{i}")).collect();
    BinaryMatroid::from_raw(dim, labels, cols)
}

/// Label of edge `{i, j}` of `K_n` (1-based, `i < j`).
pub fn complete_graph_edge_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("e{i}{j}")
    } else {
        format!("e{i}_{j}")
    }
}

/// Vertex pairs of `K_n` in column order of [`complete_graph_matroid`].
pub fn complete_graph_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect()
}

/// `M(K_n)` in rank `n - 1`: vertex `n` is the root, edge `{i, n}` is `e_i`
/// and edge `{i, j}` is `e_i + e_j`. Edges are ordered lexicographically.
pub fn complete_graph_matroid(n: usize) -> Result<BinaryMatroid> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a complete graph needs a vertex".into(),
        ));
    }
    let edges = complete_graph_edges(n);
    if edges.len() > MAX_ELEMENTS {
        return Err(Error::TooManyElements {
            count: edges.len(),
            max: MAX_ELEMENTS,
        });
    }
    let unit = |i: usize| if i == n { 0 } else { 1u64 << (i - 1) };
    let labels = edges
        .iter()
        .map(|&(i, j)| complete_graph_edge_label(n, i, j))
        .collect();
    let cols = edges.iter().map(|&(i, j)| unit(i) | unit(j)).collect();
    BinaryMatroid::from_raw(n - 1, labels, cols)
}

/// Label of the point with bit pattern `value` in [`projective_geometry`].
pub fn projective_point_label(value: u64) -> String {
    format!("p{value}")
}

/// `PG(r-1, 2)`: all nonzero vectors of dimension `r` in increasing
/// numeric order (row 1 is the low bit), labelled `p<value>`.
pub fn projective_geometry(r: usize) -> Result<BinaryMatroid> {
    let count = if r >= 64 {
        usize::MAX
    } else {
        (1usize << r) - 1
    };
    if count > MAX_ELEMENTS {
        return Err(Error::TooManyElements {
            count,
            max: MAX_ELEMENTS,
        });
    }
    let cols: Vec<u64> = (1..=count as u64).collect();
    let labels = cols.iter().map(|&v| projective_point_label(v)).collect();
    BinaryMatroid::from_raw(r, labels, cols)
}

/// The cycle matroid of `g` over GF(2). Each connected component of the
/// graph drops the row of its first-seen vertex; loops become zero columns.
pub fn cycle_matroid(g: &Graph) -> Result<BinaryMatroid> {
    let vertices = g.vertices();
    let id: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v, _) in g.edges() {
        let (a, b) = (
            find(&mut parent, id[u.as_str()]),
            find(&mut parent, id[v.as_str()]),
        );
        // Keep the first-seen vertex as root.
        parent[a.max(b)] = a.min(b);
    }
    let mut row = vec![None; vertices.len()];
    let mut dim = 0;
    for (i, r) in row.iter_mut().enumerate() {
        if find(&mut parent, i) != i {
            *r = Some(dim);
            dim += 1;
        }
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
    }
    let bit = |v: &str| row[id[v]].map_or(0, |r| 1u64 << r);
    let labels = g.edges().iter().map(|(_, _, l)| l.clone()).collect();
    let cols = g.edges().iter().map(|(u, v, _)| bit(u) ^ bit(v)).collect();
    BinaryMatroid::from_raw(dim, labels, cols)
}

/// Coordinates in which `u` is `e1`: bit 0 is the coefficient of `u`, the
/// remaining bits are the other rows with the pivot row of `u` removed.
fn align_basepoint(cols: &[u64], u: u64) -> Vec<u64> {
    let pivot = u & u.wrapping_neg();
    cols.iter()
        .map(|&c| {
            let hit = c & pivot != 0;
            let rest = if hit { c ^ u } else { c };
            (hit as u64) | (drop_rows(rest, pivot) << 1)
        })
        .collect()
}

fn index_or_unknown(m: &BinaryMatroid, label: &str) -> Result<usize> {
    m.index_of(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Parallel connection of `m` and `n` along `pm` and `pn`. The result lists
/// the elements of `m` (the basepoint keeps the label `pm`) followed by
/// those of `n` other than `pn`.
///
/// A loop basepoint gives a direct sum: `m ⊕ n/pn` when `pm` is a loop,
/// otherwise `m/pm ⊕ n` with the basepoint kept as a loop.
pub fn parallel_connection(
    m: &BinaryMatroid,
    n: &BinaryMatroid,
    pm: &str,
    pn: &str,
) -> Result<BinaryMatroid> {
    let im = index_or_unknown(m, pm)?;
    let jn = index_or_unknown(n, pn)?;
    if let Some(l) = n
        .labels()
        .iter()
        .enumerate()
        .find(|&(j, l)| j != jn && m.index_of(l).is_some())
        .map(|(_, l)| l)
    {
        return Err(Error::LabelCollision(l.clone()));
    }
    let n_rest = n.ground().without(jn);
    let u = m.raw_cols()[im];
    let w = n.raw_cols()[jn];
    if u == 0 {
        return m.direct_sum(&n.contract(ElementSet::singleton(jn))?);
    }
    if w == 0 {
        let mc = m.contract(ElementSet::singleton(im))?;
        let mut cols = mc.raw_cols().to_vec();
        cols.insert(im, 0);
        let with_loop = BinaryMatroid::from_raw(mc.dim(), m.labels().to_vec(), cols)?;
        return with_loop.direct_sum(&n.restrict(n_rest)?);
    }
    let (m, n) = if m.dim() + n.dim() > MAX_DIM + 1 {
        (m.compact(), n.compact())
    } else {
        (m.clone(), n.clone())
    };
    let dim = m.dim() + n.dim() - 1;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
    }
    let u = m.raw_cols()[im];
    let w = n.raw_cols()[jn];
    let shift = m.dim();
    let mut cols = align_basepoint(m.raw_cols(), u);
    let mut labels = m.labels().to_vec();
    for (j, c) in align_basepoint(n.raw_cols(), w).into_iter().enumerate() {
        if j == jn {
            continue;
        }
        let high = c >> 1;
        let high = if shift == 64 { 0 } else { high << shift };
        cols.push((c & 1) | high);
        labels.push(n.label(j).to_string());
    }
    BinaryMatroid::from_raw(dim, labels, cols)
}

/// 2-sum: the parallel connection with the basepoint deleted.
pub fn two_sum(m: &BinaryMatroid, n: &BinaryMatroid, pm: &str, pn: &str) -> Result<BinaryMatroid> {
    let p = parallel_connection(m, n, pm, pn)?;
    let i = index_or_unknown(&p, pm)?;
    p.delete(ElementSet::singleton(i))
}

/// Simple with every nonzero vector of its span present.
pub fn is_projective(m: &BinaryMatroid) -> bool {
    crate::theta::is_full_span(m)
}

/// For a projective geometry, the point of `PG(r-1, 2)` each element maps
/// to under an isomorphism with [`projective_geometry`].
pub fn projective_embedding(m: &BinaryMatroid) -> Option<Vec<u64>> {
    if !is_projective(m) {
        return None;
    }
    let basis = gf2::greedy_basis(m.raw_cols());
    gf2::coordinates(m.raw_cols(), &basis)
}

/// The ground set is a circuit.
pub fn is_circuit(m: &BinaryMatroid) -> bool {
    !m.is_empty() && m.is_circuit_set(m.ground()).unwrap_or(false)
}

/// The ground set is a cocircuit: rank one and no loops.
pub fn is_cocircuit(m: &BinaryMatroid) -> bool {
    !m.is_empty() && m.rank() == 1 && m.loops().is_empty()
}

/// `n` with `C(n, 2) = |E|`, if any.
fn clique_order(edges: usize) -> Option<usize> {
    (1..=12).find(|&n| n * (n - 1) / 2 == edges)
}

/// For an `M(K_n)`, the vertex pair of each element under an isomorphism
/// with [`complete_graph_matroid`]`(n)`.
///
/// The search looks for a vertex star: a basis `b1..b(n-1)` whose pairwise
/// sums are all columns of `m`. Counting then forces every column to have
/// weight at most two in that basis. The search fixes the last element in
/// the star, since every element lies in some star.
pub fn complete_graph_embedding(
    m: &BinaryMatroid,
    budget: &Budget,
) -> Result<Option<Vec<(usize, usize)>>> {
    let Some(n) = clique_order(m.len()) else {
        return Ok(None);
    };
    if m.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if m.rank() != n - 1 || !m.is_simple() {
        return Ok(None);
    }
    let cols = m.raw_cols();
    let index: HashMap<u64, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    fn extend(
        cols: &[u64],
        index: &HashMap<u64, usize>,
        star: &mut Vec<usize>,
        span: &mut gf2::XorBasis,
        target: usize,
        budget: &Budget,
    ) -> Result<bool> {
        if star.len() == target {
            return Ok(true);
        }
        // Candidates in decreasing order below the last pick.
        for x in (0..star[star.len() - 1]).rev() {
            budget.charge(1, "complete-graph basis search")?;
            if star
                .iter()
                .any(|&s| !index.contains_key(&(cols[s] ^ cols[x])))
            {
                continue;
            }
            let Some(p) = span.insert(cols[x]) else {
                continue;
            };
            star.push(x);
            if extend(cols, index, star, span, target, budget)? {
                return Ok(true);
            }
            star.pop();
            span.remove(p);
        }
        Ok(false)
    }

    let last = cols.len() - 1;
    let mut star = vec![last];
    let mut span = gf2::XorBasis::new();
    span.insert(cols[last]);
    if !extend(cols, &index, &mut star, &mut span, n - 1, budget)? {
        return Ok(None);
    }
    // On the constructed M(K_n) this recovers the star of vertex n in
    // order, so the embedding is the identity there.
    star.sort_unstable();
    let mut pairs = vec![(0, 0); m.len()];
    for (a, &s) in star.iter().enumerate() {
        pairs[s] = (a + 1, n);
        for (b, &t) in star.iter().enumerate().skip(a + 1) {
            pairs[index[&(cols[s] ^ cols[t])]] = (a + 1, b + 1);
        }
    }
    Ok(Some(pairs))
}

/// `Some(n)` when `m` is isomorphic to `M(K_n)`.
pub fn is_complete_graph(m: &BinaryMatroid, budget: &Budget) -> Result<Option<usize>> {
    Ok(complete_graph_embedding(m, budget)?.map(|_| clique_order(m.len()).expect("checked")))
}
