//! Canonical tree decompositions and structural recognition of the
//! theta-closed class.
//!
//! A simple connected matroid is theta-closed exactly when it is a circuit,
//! a complete-graph matroid, a projective geometry, or its canonical tree
//! is a star arrangement: every edge joins one of those blocks to a
//! cocircuit hub, and every hub has one element besides its edge elements.
//! Such a tree reads off as iterated parallel connections at the hub
//! elements. Loops and parallel elements are peeled off first and put back
//! as direct sums with `CIRCUIT(1)` and parallel connections with
//! `CIRCUIT(2)`.

mod recipe;
mod tree;

use std::collections::HashMap;

pub use recipe::{BuildRecipe, MAX_RECIPE_DEPTH};
pub use tree::{
    canonical_tree_decomposition, recompose, two_separations, DecomposeOptions, EdgeOrder,
    ElementKey, MatroidLabelledTree, TreeSignature, VertexKind,
};

use crate::budget::Budget;
use crate::construct::{
    complete_graph_edges, complete_graph_embedding, is_circuit, projective_embedding,
};
use crate::error::{Error, Result};
use crate::gf2::GF2Vector;
use crate::matroid::BinaryMatroid;
use crate::theta::{is_theta3_closed, CheckOptions, ClosedVerdict};

/// Evidence that a matroid is outside the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Arcs of an incomplete theta-graph, by label.
    pub arcs: [Vec<String>; 3],
    pub completing: GF2Vector,
    /// Why the structural recognizer rejected the matroid.
    pub objection: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    InClass(BuildRecipe),
    NotInClass(Witness),
}

impl Verdict {
    pub fn in_class(&self) -> bool {
        matches!(self, Verdict::InClass(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassifyOptions {
    pub check: CheckOptions,
    pub decompose: DecomposeOptions,
}

fn labels_of(m: &BinaryMatroid) -> Option<Vec<String>> {
    Some(m.labels().to_vec())
}

/// Recipe for a single block, with its elements named as in `m`.
pub fn block_recipe(m: &BinaryMatroid, budget: &Budget) -> Result<Option<BuildRecipe>> {
    if m.len() == 1 && m.rank() == 1 {
        return Ok(Some(BuildRecipe::Projective {
            r: 1,
            labels: labels_of(m),
        }));
    }
    if is_circuit(m) {
        return Ok(Some(BuildRecipe::Circuit {
            n: m.len(),
            labels: labels_of(m),
        }));
    }
    if let Some(values) = projective_embedding(m) {
        let mut labels = vec![String::new(); m.len()];
        for (i, v) in values.into_iter().enumerate() {
            labels[v as usize - 1] = m.label(i).to_string();
        }
        return Ok(Some(BuildRecipe::Projective {
            r: m.rank(),
            labels: Some(labels),
        }));
    }
    if let Some(pairs) = complete_graph_embedding(m, budget)? {
        let n = m.rank() + 1;
        let slot: HashMap<(usize, usize), usize> = complete_graph_edges(n)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut labels = vec![String::new(); m.len()];
        for (i, p) in pairs.iter().enumerate() {
            labels[slot[p]] = m.label(i).to_string();
        }
        return Ok(Some(BuildRecipe::CompleteGraph {
            n,
            labels: Some(labels),
        }));
    }
    Ok(None)
}

fn describe(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// Recipe for a simple connected matroid, or the structural objection.
fn component_recipe(
    m: &BinaryMatroid,
    opts: DecomposeOptions,
    budget: &Budget,
) -> Result<std::result::Result<BuildRecipe, String>> {
    if let Some(r) = block_recipe(m, budget)? {
        return Ok(Ok(r));
    }
    let tree = canonical_tree_decomposition(m, opts, budget)?;
    let real: Vec<String> = tree.real_labels();
    let is_real = |l: &str| m.index_of(l).is_some();
    if tree.vertices().len() == 1 {
        return Ok(Err(format!(
            "{} is 3-connected but not a circuit, complete graph or projective geometry",
            describe(&real)
        )));
    }
    let kinds = tree.kinds();
    let vertex_text = |v: usize| describe(tree.vertices()[v].labels());
    // Every edge joins a hub to a block.
    for (a, b, _) in tree.edges() {
        if (kinds[*a] == VertexKind::Cocircuit) == (kinds[*b] == VertexKind::Cocircuit) {
            return Ok(Err(format!(
                "tree vertices {} and {} are joined by a 2-sum",
                vertex_text(*a),
                vertex_text(*b)
            )));
        }
    }
    let mut hub_point: HashMap<usize, String> = HashMap::new();
    for (v, k) in kinds.iter().enumerate() {
        if *k != VertexKind::Cocircuit {
            continue;
        }
        let own: Vec<&String> = tree.vertices()[v]
            .labels()
            .iter()
            .filter(|l| is_real(l))
            .collect();
        if own.len() != 1 {
            return Ok(Err(format!(
                "cocircuit vertex {} of degree {} has {} elements",
                vertex_text(v),
                tree.degree(v),
                tree.vertices()[v].len()
            )));
        }
        hub_point.insert(v, own[0].clone());
    }
    // Blocks with each edge element renamed to its hub's element.
    let mut leaves: HashMap<usize, BuildRecipe> = HashMap::new();
    for (v, k) in kinds.iter().enumerate() {
        if *k == VertexKind::Cocircuit {
            continue;
        }
        let rename: HashMap<String, String> = tree
            .neighbours(v)
            .into_iter()
            .map(|(h, e)| (e.to_string(), hub_point[&h].clone()))
            .collect();
        let block = tree.vertices()[v].relabel(&rename)?;
        match block_recipe(&block, budget)? {
            Some(r) => {
                leaves.insert(v, r);
            }
            None => {
                return Ok(Err(format!(
                    "tree vertex {} is not a circuit, complete graph or projective geometry",
                    vertex_text(v)
                )))
            }
        }
    }
    let root = (0..kinds.len())
        .find(|&v| kinds[v] != VertexKind::Cocircuit)
        .expect("edges alternate, so some vertex is a block");

    fn block_term(
        tree: &MatroidLabelledTree,
        leaves: &HashMap<usize, BuildRecipe>,
        hub_point: &HashMap<usize, String>,
        v: usize,
        parent: Option<usize>,
    ) -> BuildRecipe {
        let mut term = leaves[&v].clone();
        for (h, _) in tree.neighbours(v) {
            if Some(h) == parent {
                continue;
            }
            let p = &hub_point[&h];
            let mut star: Option<BuildRecipe> = None;
            for (w, _) in tree.neighbours(h) {
                if w == v {
                    continue;
                }
                let t = block_term(tree, leaves, hub_point, w, Some(h));
                star = Some(match star {
                    None => t,
                    Some(s) => BuildRecipe::parallel(s, t, p.clone()),
                });
            }
            let star = star.expect("hubs have at least two neighbours");
            term = BuildRecipe::parallel(term, star, p.clone());
        }
        term
    }

    Ok(Ok(block_term(&tree, &leaves, &hub_point, root, None)))
}

/// Structural recipe for `m`, or the reason none exists.
pub fn structural_recipe(
    m: &BinaryMatroid,
    opts: DecomposeOptions,
    budget: &Budget,
) -> Result<std::result::Result<BuildRecipe, String>> {
    let loops = m.loops();
    let nonloop = m.delete(loops)?;
    let simple = nonloop.simplify();
    let mut terms = Vec::new();
    for comp in simple.connected_components() {
        match component_recipe(&simple.restrict(comp)?, opts, budget)? {
            Ok(t) => terms.push(t),
            Err(why) => return Ok(Err(why)),
        }
    }
    for l in loops.iter() {
        terms.push(BuildRecipe::Circuit {
            n: 1,
            labels: Some(vec![m.label(l).to_string()]),
        });
    }
    let mut recipe = terms
        .into_iter()
        .reduce(BuildRecipe::direct_sum)
        .unwrap_or(BuildRecipe::Projective { r: 0, labels: None });
    for class in nonloop.parallel_classes() {
        let labels = class.labels(&nonloop);
        let base = labels.iter().min().expect("classes are nonempty").clone();
        for q in labels.iter().filter(|&l| *l != base) {
            let pair = BuildRecipe::Circuit {
                n: 2,
                labels: Some(vec![base.clone(), q.clone()]),
            };
            recipe = BuildRecipe::parallel(recipe, pair, base.clone());
        }
    }
    Ok(Ok(recipe))
}

/// Decide membership in the theta-closed class structurally. Members come
/// with a recipe that is re-evaluated and checked against `m`; non-members
/// come with an incomplete theta-graph. Any disagreement between the two
/// views is reported as [`Error::Discrepancy`].
pub fn classify_theta3(
    m: &BinaryMatroid,
    opts: ClassifyOptions,
    budget: &Budget,
) -> Result<Verdict> {
    match structural_recipe(m, opts.decompose, budget)? {
        Ok(recipe) => {
            if !recipe.evaluate()?.same_matroid(m)? {
                return Err(Error::Discrepancy(format!(
                    "recipe {recipe} does not rebuild the input"
                )));
            }
            Ok(Verdict::InClass(recipe))
        }
        Err(objection) => match is_theta3_closed(m, opts.check, budget)? {
            ClosedVerdict::NotClosed(t) => Ok(Verdict::NotInClass(Witness {
                arcs: t.arc_labels(m),
                completing: t.completing_vector(),
                objection,
            })),
            ClosedVerdict::Closed => Err(Error::Discrepancy(format!(
                "{objection}, yet every theta-graph is complete"
            ))),
        },
    }
}
