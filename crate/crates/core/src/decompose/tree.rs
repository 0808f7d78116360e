//! Exact 2-separations and the canonical tree decomposition.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::budget::Budget;
use crate::construct::{is_circuit, is_cocircuit, two_sum};
use crate::error::{Error, Result};
use crate::gf2::XorBasis;
use crate::matroid::{for_each_k_subset, BinaryMatroid, ElementSet, SeparationOrder};

/// Every exact 2-separation `(X, Y)` of `m`. `X` is the smaller side, or
/// the side holding element 0 when both have the same size; the list is
/// ordered by `|X|` and then by the sorted indices of `X`.
pub fn two_separations(
    m: &BinaryMatroid,
    budget: &Budget,
) -> Result<Vec<(ElementSet, ElementSet)>> {
    let n = m.len();
    let full = m.rank();
    let mut out = Vec::new();
    for k in 2..=n / 2 {
        let mut level = Vec::new();
        for_each_k_subset(n, k, |bits| {
            budget.charge(1, "2-separation search")?;
            let x = ElementSet::from_bits(bits);
            if 2 * k == n && !x.contains(0) {
                return Ok(true);
            }
            let y = m.ground().difference(x);
            if m.rank_unchecked(x) + m.rank_unchecked(y) == full + 1 {
                level.push((x, y));
            }
            Ok(true)
        })?;
        level.sort_by_key(|(x, _)| x.indices());
        out.extend(level);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Circuit,
    Cocircuit,
    ThreeConnected,
}

impl VertexKind {
    pub fn of(m: &BinaryMatroid) -> VertexKind {
        if is_circuit(m) {
            VertexKind::Circuit
        } else if is_cocircuit(m) {
            VertexKind::Cocircuit
        } else {
            VertexKind::ThreeConnected
        }
    }
}

/// A tree whose vertices are labelled by matroids and whose edges are
/// labelled by the single element the two endpoint matroids share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidLabelledTree {
    vertices: Vec<BinaryMatroid>,
    kinds: Vec<VertexKind>,
    edges: Vec<(usize, usize, String)>,
}

/// Shape of a tree with edge labels abstracted away; equal signatures mean
/// the trees agree up to renaming edge elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeSignature(Vec<(VertexKind, Vec<(ElementKey, u64)>)>);

/// A vertex element: either an original label, or an edge element named by
/// the original labels on one side of its edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ElementKey {
    Real(String),
    Edge(Vec<String>),
}

impl MatroidLabelledTree {
    /// Build and check the structural invariants (see [`Self::validate`]).
    pub fn new(vertices: Vec<BinaryMatroid>, edges: Vec<(usize, usize, String)>) -> Result<Self> {
        let kinds = vertices.iter().map(VertexKind::of).collect();
        let t = MatroidLabelledTree {
            vertices,
            kinds,
            edges,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn vertices(&self) -> &[BinaryMatroid] {
        &self.vertices
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn edges(&self) -> &[(usize, usize, String)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(a, b, _)| *a == v || *b == v)
            .count()
    }

    /// Neighbours of `v` with the connecting edge label.
    pub fn neighbours(&self, v: usize) -> Vec<(usize, &str)> {
        self.edges
            .iter()
            .filter_map(|(a, b, e)| {
                if *a == v {
                    Some((*b, e.as_str()))
                } else if *b == v {
                    Some((*a, e.as_str()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Labels that are not edge elements, in vertex order.
    pub fn real_labels(&self) -> Vec<String> {
        let edge: HashSet<&str> = self.edges.iter().map(|(_, _, e)| e.as_str()).collect();
        self.vertices
            .iter()
            .flat_map(|v| v.labels().iter())
            .filter(|l| !edge.contains(l.as_str()))
            .cloned()
            .collect()
    }

    /// Tree shape, shared edge elements, separator freeness, vertex sizes,
    /// and the ban on adjacent circuits or adjacent cocircuits.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidTree(why));
        let n = self.vertices.len();
        if n == 0 {
            return bad("no vertices".into());
        }
        if self.edges.len() != n - 1 {
            return bad(format!("{} vertices but {} edges", n, self.edges.len()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut adjacent: HashMap<(usize, usize), &str> = HashMap::new();
        for (a, b, e) in &self.edges {
            if *a >= n || *b >= n || a == b {
                return bad(format!("edge {e} has bad endpoints"));
            }
            let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
            if ra == rb {
                return bad(format!("edge {e} closes a cycle"));
            }
            parent[ra] = rb;
            adjacent.insert(((*a).min(*b), (*a).max(*b)), e);
        }
        let label_sets: Vec<HashSet<&str>> = self
            .vertices
            .iter()
            .map(|v| v.labels().iter().map(String::as_str).collect())
            .collect();
        for i in 0..n {
            if n > 1 && self.vertices[i].len() < 3 {
                return bad(format!("vertex {i} has fewer than three elements"));
            }
            for j in i + 1..n {
                let mut shared: Vec<&str> = label_sets[i]
                    .intersection(&label_sets[j])
                    .copied()
                    .collect();
                shared.sort();
                match adjacent.get(&(i, j)) {
                    Some(e) if shared != [*e] => {
                        return bad(format!("vertices {i} and {j} do not share exactly `{e}`"))
                    }
                    None if !shared.is_empty() => {
                        return bad(format!("non-adjacent vertices {i} and {j} share elements"))
                    }
                    _ => {}
                }
            }
        }
        for (a, b, e) in &self.edges {
            for v in [*a, *b] {
                let m = &self.vertices[v];
                let idx = m.index_of(e).expect("shared element checked above");
                let comp = m
                    .connected_components()
                    .into_iter()
                    .find(|c| c.contains(idx))
                    .expect("every element has a component");
                if comp.len() == 1 {
                    return bad(format!("`{e}` is a separator of vertex {v}"));
                }
            }
            let (ka, kb) = (self.kinds[*a], self.kinds[*b]);
            if ka == kb && ka != VertexKind::ThreeConnected {
                return bad(format!("adjacent vertices {a} and {b} are both {ka:?}"));
            }
        }
        Ok(())
    }

    /// [`Self::validate`] plus: every vertex is a circuit, a cocircuit, or
    /// 3-connected.
    pub fn validate_canonical(&self, budget: &Budget) -> Result<()> {
        self.validate()?;
        for (i, (v, k)) in self.vertices.iter().zip(&self.kinds).enumerate() {
            if *k == VertexKind::ThreeConnected && !v.is_3connected(budget)? {
                return Err(Error::InvalidTree(format!("vertex {i} is not 3-connected")));
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> TreeSignature {
        let real: Vec<String> = {
            let mut r = self.real_labels();
            r.sort();
            r
        };
        let mut edge_keys: HashMap<&str, Vec<String>> = HashMap::new();
        for (idx, (a, _, e)) in self.edges.iter().enumerate() {
            // Real labels on the side of `a` once this edge is removed.
            let mut seen = vec![false; self.vertices.len()];
            let mut stack = vec![*a];
            seen[*a] = true;
            while let Some(v) = stack.pop() {
                for (j, (x, y, _)) in self.edges.iter().enumerate() {
                    if j == idx {
                        continue;
                    }
                    let w = if *x == v {
                        *y
                    } else if *y == v {
                        *x
                    } else {
                        continue;
                    };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            let side: HashSet<&str> = (0..self.vertices.len())
                .filter(|&v| seen[v])
                .flat_map(|v| self.vertices[v].labels().iter().map(String::as_str))
                .collect();
            let (mut s1, mut s2): (Vec<String>, Vec<String>) = real
                .iter()
                .cloned()
                .partition(|l| side.contains(l.as_str()));
            s1.sort();
            s2.sort();
            edge_keys.insert(e, s1.min(s2));
        }
        let mut vs: Vec<(VertexKind, Vec<(ElementKey, u64)>)> = self
            .vertices
            .iter()
            .zip(&self.kinds)
            .map(|(v, k)| {
                let mut elems: Vec<(ElementKey, u64)> = v
                    .labels()
                    .iter()
                    .zip(v.raw_cols())
                    .map(|(l, &c)| match edge_keys.get(l.as_str()) {
                        Some(side) => (ElementKey::Edge(side.clone()), c),
                        None => (ElementKey::Real(l.clone()), c),
                    })
                    .collect();
                elems.sort();
                (*k, elems)
            })
            .collect();
        vs.sort();
        TreeSignature(vs)
    }
}

/// Order in which [`recompose`] contracts tree edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    #[default]
    Forward,
    Reverse,
}

/// The 2-sum of all vertex labels across all tree edges.
pub fn recompose(t: &MatroidLabelledTree, order: EdgeOrder) -> Result<BinaryMatroid> {
    t.validate()?;
    let n = t.vertices.len();
    let mut parts: Vec<Option<BinaryMatroid>> =
        t.vertices.iter().map(|v| Some(v.compact())).collect();
    let mut owner: Vec<usize> = (0..n).collect();
    let edges: Vec<&(usize, usize, String)> = match order {
        EdgeOrder::Forward => t.edges.iter().collect(),
        EdgeOrder::Reverse => t.edges.iter().rev().collect(),
    };
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b, e) in edges {
        let (ra, rb) = (find(&mut owner, *a), find(&mut owner, *b));
        let ma = parts[ra].take().expect("live part");
        let mb = parts[rb].take().expect("live part");
        let joined = two_sum(&ma, &mb, e, e)?;
        owner[rb] = ra;
        parts[ra] = Some(joined.compact());
    }
    let root = find(&mut owner, 0);
    Ok(parts[root].take().expect("live part"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecomposeOptions {
    pub order: SeparationOrder,
}

/// The unique nonzero vector in `span(x) ∩ span(y)` when that intersection
/// has dimension one.
fn shared_vector(m: &BinaryMatroid, x: ElementSet, y: ElementSet) -> Option<u64> {
    let cols = m.raw_cols();
    let mut bx = XorBasis::new();
    for i in x.iter() {
        bx.insert(cols[i]);
    }
    // Residues of Y modulo span(X), each with the Y-columns it combines.
    let mut rows: Vec<(u64, u64)> = Vec::new();
    for i in y.iter() {
        let mut v = bx.reduce_full(cols[i]);
        let mut z = cols[i];
        for &(r, c) in &rows {
            if v & (r & r.wrapping_neg()) != 0 {
                v ^= r;
                z ^= c;
            }
        }
        if v == 0 {
            if z != 0 {
                return Some(z);
            }
            continue;
        }
        // Keep rows reduced on each other's pivots.
        let p = v & v.wrapping_neg();
        for row in rows.iter_mut() {
            if row.0 & p != 0 {
                row.0 ^= v;
                row.1 ^= z;
            }
        }
        rows.push((v, z));
    }
    None
}

struct Builder<'a> {
    real: &'a BinaryMatroid,
    next_virtual: usize,
    vertices: Vec<BinaryMatroid>,
    edges: Vec<(usize, usize, String)>,
    order: SeparationOrder,
    budget: &'a Budget,
}

impl Builder<'_> {
    fn fresh(&mut self) -> String {
        loop {
            self.next_virtual += 1;
            let l = format!("_t{}", self.next_virtual);
            if self.real.index_of(&l).is_none() {
                return l;
            }
        }
    }

    /// Split `piece` to completion; returns the vertices it produced.
    fn split(&mut self, piece: BinaryMatroid) -> Result<Vec<usize>> {
        if piece.len() < 4 || is_circuit(&piece) || is_cocircuit(&piece) {
            self.vertices.push(piece);
            return Ok(vec![self.vertices.len() - 1]);
        }
        let Some(x) = piece.find_two_separation(self.order, self.budget)? else {
            self.vertices.push(piece);
            return Ok(vec![self.vertices.len() - 1]);
        };
        let y = piece.ground().difference(x);
        let z = shared_vector(&piece, x, y)
            .ok_or_else(|| Error::InvalidArgument("2-separation without a shared vector".into()))?;
        let t = self.fresh();
        let side = |s: ElementSet| -> Result<BinaryMatroid> {
            let part = piece.restrict(s)?;
            part.with_element(&t, crate::gf2::GF2Vector::from_raw(z, piece.dim()))
        };
        let left = self.split(side(x)?)?;
        let right = self.split(side(y)?)?;
        let holder = |ids: &[usize], vs: &[BinaryMatroid]| {
            *ids.iter()
                .find(|&&v| vs[v].index_of(&t).is_some())
                .expect("shared element lands in one vertex")
        };
        let a = holder(&left, &self.vertices);
        let b = holder(&right, &self.vertices);
        self.edges.push((a, b, t));
        let mut all = left;
        all.extend(right);
        Ok(all)
    }
}

/// Merge a piece pair across their shared element: both live in the same
/// coordinates, so the 2-sum is the union of their other columns.
fn glue(a: &BinaryMatroid, b: &BinaryMatroid, e: &str) -> Result<BinaryMatroid> {
    let mut labels = Vec::new();
    let mut cols = Vec::new();
    for m in [a, b] {
        for (l, &c) in m.labels().iter().zip(m.raw_cols()) {
            if l != e {
                labels.push(l.clone());
                cols.push(c);
            }
        }
    }
    BinaryMatroid::from_raw(a.dim(), labels, cols)
}

/// Canonical tree decomposition of a connected matroid: vertices are
/// 3-connected, circuits or cocircuits, no two circuits or two cocircuits
/// are adjacent, and 2-summing along all edges gives back `m`. Edge elements
/// are labelled `_t1`, `_t2`, ... (skipping labels `m` already uses).
pub fn canonical_tree_decomposition(
    m: &BinaryMatroid,
    opts: DecomposeOptions,
    budget: &Budget,
) -> Result<MatroidLabelledTree> {
    if m.is_empty() {
        return Err(Error::InvalidArgument(
            "empty matroid has no tree decomposition".into(),
        ));
    }
    if !m.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut b = Builder {
        real: m,
        next_virtual: 0,
        vertices: Vec::new(),
        edges: Vec::new(),
        order: opts.order,
        budget,
    };
    b.split(m.clone())?;
    let (mut vertices, mut edges) = (b.vertices, b.edges);
    // Merge adjacent circuits and adjacent cocircuits.
    loop {
        let kinds: Vec<VertexKind> = vertices.iter().map(VertexKind::of).collect();
        let Some(pos) = edges.iter().position(|(a, b, _)| {
            kinds[*a] == kinds[*b] && kinds[*a] != VertexKind::ThreeConnected
        }) else {
            break;
        };
        let (a, b, e) = edges.remove(pos);
        vertices[a] = glue(&vertices[a], &vertices[b], &e)?;
        vertices.remove(b);
        for (x, y, _) in edges.iter_mut() {
            for v in [x, y] {
                if *v == b {
                    *v = a;
                }
                if *v > b {
                    *v -= 1;
                }
            }
        }
    }
    // Number vertices and edges by the smallest original element each
    // vertex holds, so the layout does not depend on the search order.
    let first_real = |v: &BinaryMatroid| {
        v.labels()
            .iter()
            .filter_map(|l| m.index_of(l))
            .min()
            .unwrap_or(usize::MAX)
    };
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&v| (first_real(&vertices[v]), v));
    let rank_of: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertices: Vec<BinaryMatroid> = order.iter().map(|&v| vertices[v].clone()).collect();
    let mut edges: Vec<(usize, usize, String)> = edges
        .into_iter()
        .map(|(a, b, e)| {
            let (a, b) = (rank_of[&a], rank_of[&b]);
            (a.min(b), a.max(b), e)
        })
        .collect();
    edges.sort_by_key(|e| (e.0, e.1));
    MatroidLabelledTree::new(vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        circuit_matroid, complete_graph_matroid, parallel_connection, projective_geometry,
    };
    use crate::gf2::GF2Vector;

    fn mat(dim: usize, cols: &[(&str, &str)]) -> BinaryMatroid {
        BinaryMatroid::new(
            dim,
            cols.iter()
                .map(|(l, c)| (l.to_string(), GF2Vector::parse_rows(c).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn decompose(m: &BinaryMatroid, order: SeparationOrder) -> MatroidLabelledTree {
        canonical_tree_decomposition(m, DecomposeOptions { order }, &Budget::unlimited()).unwrap()
    }

    #[test]
    fn separations_of_small_matroids() {
        let b = Budget::unlimited();
        assert!(two_separations(&projective_geometry(3).unwrap(), &b)
            .unwrap()
            .is_empty());
        // U(3,4): each of the three 2/2 partitions, listed once.
        let seps = two_separations(&circuit_matroid(4).unwrap(), &b).unwrap();
        assert_eq!(seps.len(), 3);
        assert!(seps.iter().all(|(x, _)| x.contains(0)));
    }

    #[test]
    fn blocks_are_single_vertices() {
        let k4 = complete_graph_matroid(4).unwrap();
        let t = decompose(&k4, SeparationOrder::Forward);
        assert_eq!(t.kinds(), [VertexKind::ThreeConnected]);
        let c5 = circuit_matroid(5).unwrap();
        assert_eq!(
            decompose(&c5, SeparationOrder::Forward).kinds(),
            [VertexKind::Circuit]
        );
    }

    #[test]
    fn two_triangles_give_a_path() {
        let m = mat(2, &[("p", "10"), ("a", "01"), ("b", "11")]);
        let n = mat(2, &[("p", "01"), ("c", "10"), ("d", "11")]);
        let pc = parallel_connection(&m, &n, "p", "p").unwrap();
        let t = decompose(&pc, SeparationOrder::Forward);
        let mut kinds = t.kinds().to_vec();
        kinds.sort();
        assert_eq!(
            kinds,
            [
                VertexKind::Circuit,
                VertexKind::Circuit,
                VertexKind::Cocircuit
            ]
        );
        let hub = t
            .kinds()
            .iter()
            .position(|k| *k == VertexKind::Cocircuit)
            .unwrap();
        assert_eq!(t.degree(hub), 2);
        assert_eq!(t.vertices()[hub].len(), 3);
        let back = recompose(&t, EdgeOrder::Forward).unwrap();
        assert!(back.same_matroid(&pc).unwrap());
        assert_eq!(
            t.signature(),
            decompose(&pc, SeparationOrder::Reverse).signature()
        );
    }

    #[test]
    fn circuits_merge_into_one_vertex() {
        // A long circuit splits into triangles that must be merged again.
        let c = circuit_matroid(8).unwrap();
        let t = decompose(&c, SeparationOrder::Forward);
        assert_eq!(t.vertices().len(), 1);
        // Dually, a bond.
        let bond = mat(
            1,
            &[("a", "1"), ("b", "1"), ("c", "1"), ("d", "1"), ("e", "1")],
        );
        assert_eq!(
            decompose(&bond, SeparationOrder::Forward).kinds(),
            [VertexKind::Cocircuit]
        );
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let tri = mat(2, &[("a", "10"), ("b", "01"), ("x", "11")]);
        let tri2 = mat(2, &[("c", "10"), ("d", "01"), ("x", "11")]);
        // Two adjacent circuits.
        assert!(matches!(
            MatroidLabelledTree::new(vec![tri.clone(), tri2.clone()], vec![(0, 1, "x".into())]),
            Err(Error::InvalidTree(_))
        ));
        // Missing edge.
        assert!(MatroidLabelledTree::new(vec![tri, tri2], vec![]).is_err());
        assert!(matches!(
            canonical_tree_decomposition(
                &mat(2, &[("a", "10"), ("b", "01")]),
                DecomposeOptions::default(),
                &Budget::unlimited()
            ),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn shared_vector_of_a_two_sum() {
        let m = circuit_matroid(4).unwrap();
        let x = ElementSet::from_indices([0, 1]);
        let y = ElementSet::from_indices([2, 3]);
        assert_eq!(shared_vector(&m, x, y), Some(0b011));
    }
}
