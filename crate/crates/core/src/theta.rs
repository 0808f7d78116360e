//! Theta-graph restrictions, completeness, and the closure they generate.
//!
//! A theta-graph of a binary matroid is a set `T` split into three disjoint
//! nonempty independent arcs whose pairwise unions are circuits and with
//! `r(T) = |T| - 2`. All three arcs then have the same column sum, the
//! *completing vector*; the theta-graph is complete exactly when an arc is a
//! singleton or some element has that column.
//!
//! Two search strategies are provided and must agree:
//!
//! * [`Strategy::Enumerate`] lists every theta-graph from pairs of circuits
//!   `C1, C2` with `C1 ∩ C2 ≠ ∅` and `r(C1 ∪ C2) = |C1 ∪ C2| - 2`.
//! * [`Strategy::Targeted`] works per missing vector `v`: it buckets the
//!   independent sets with column sum `v` and looks for three pairwise
//!   disjoint ones whose union has nullity two. Arcs of a theta-graph
//!   completed by a missing vector have at least two elements, so each arc
//!   has at most `r(M) - 2` elements and the search is finite and exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::budget::Budget;
use crate::construct::{cycle_matroid, Graph};
use crate::error::{Error, Result};
use crate::gf2::{GF2Vector, XorBasis};
use crate::matroid::{BinaryMatroid, ElementSet};

/// Arc order: by size, then by sorted member indices.
fn cmp_arc(a: ElementSet, b: ElementSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let d = a.bits() ^ b.bits();
        if d == 0 {
            Ordering::Equal
        } else if a.bits() & d & d.wrapping_neg() != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaGraph {
    arcs: [ElementSet; 3],
    completing: GF2Vector,
}

impl Ord for ThetaGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arcs
            .iter()
            .zip(other.arcs.iter())
            .map(|(&a, &b)| cmp_arc(a, b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.completing.cmp(&other.completing))
    }
}

impl PartialOrd for ThetaGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ThetaGraph {
    /// Validate three arcs against `host` and build the theta-graph.
    pub fn new(host: &BinaryMatroid, a: ElementSet, b: ElementSet, c: ElementSet) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidArgument(format!("not a theta-graph: {why}")));
        let all = a.union(b).union(c);
        if a.is_empty() || b.is_empty() || c.is_empty() {
            return bad("empty arc");
        }
        if a.len() + b.len() + c.len() != all.len() {
            return bad("arcs overlap");
        }
        for arc in [a, b, c] {
            if !host.is_independent(arc)? {
                return bad("dependent arc");
            }
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if !host.is_circuit_set(x.union(y))? {
                return bad("two arcs do not form a circuit");
            }
        }
        if host.rank_of(all)? + 2 != all.len() {
            return bad("union does not have nullity two");
        }
        Ok(Self::assemble(host, [a, b, c]))
    }

    pub(crate) fn assemble(host: &BinaryMatroid, mut arcs: [ElementSet; 3]) -> Self {
        arcs.sort_by(|&x, &y| cmp_arc(x, y));
        ThetaGraph {
            arcs,
            completing: host.sum_of(arcs[0]),
        }
    }

    /// Arcs in canonical order.
    pub fn arcs(&self) -> [ElementSet; 3] {
        self.arcs
    }

    pub fn elements(&self) -> ElementSet {
        self.arcs[0].union(self.arcs[1]).union(self.arcs[2])
    }

    pub fn completing_vector(&self) -> GF2Vector {
        self.completing
    }

    pub fn has_singleton_arc(&self) -> bool {
        self.arcs.iter().any(|a| a.len() == 1)
    }

    /// Arc labels, each arc sorted by element order.
    pub fn arc_labels(&self, host: &BinaryMatroid) -> [Vec<String>; 3] {
        self.arcs.map(|a| a.labels(host))
    }

    /// Re-index into a larger host through an increasing index map.
    fn lift(&self, map: &[usize]) -> ThetaGraph {
        ThetaGraph {
            arcs: self
                .arcs
                .map(|a| ElementSet::from_indices(a.iter().map(|i| map[i]))),
            completing: self.completing,
        }
    }
}

/// Theta-graph search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Enumerate for sparse or high-rank inputs, target otherwise.
    #[default]
    Auto,
    Enumerate,
    Targeted,
}

impl Strategy {
    fn resolve(self, m: &BinaryMatroid) -> Strategy {
        match self {
            Strategy::Auto => {
                let r = m.rank();
                if r <= 12 && m.len() >= 10 {
                    Strategy::Targeted
                } else {
                    Strategy::Enumerate
                }
            }
            s => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub strategy: Strategy,
    /// Report a simple matroid holding every nonzero vector of its span as
    /// closed without searching.
    pub projective_shortcut: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            strategy: Strategy::Auto,
            projective_shortcut: true,
        }
    }
}

/// Every theta-graph of `m`, each once, in canonical order.
pub fn theta_graphs(m: &BinaryMatroid, budget: &Budget) -> Result<Vec<ThetaGraph>> {
    let circuits = m.all_circuits(budget)?;
    let found: Vec<Vec<ThetaGraph>> = (0..circuits.len())
        .into_par_iter()
        .map(|i| {
            let c1 = circuits[i];
            let mut local = Vec::new();
            budget.charge((circuits.len() - i) as u64, "theta-graph enumeration")?;
            for &c2 in &circuits[i + 1..] {
                let shared = c1.intersection(c2);
                if shared.is_empty() {
                    continue;
                }
                let u = c1.union(c2);
                if m.rank_unchecked(u) + 2 == u.len() {
                    local.push(ThetaGraph::assemble(
                        m,
                        [c1.difference(c2), c2.difference(c1), shared],
                    ));
                }
            }
            Ok(local)
        })
        .collect::<Result<_>>()?;
    let set: BTreeSet<ThetaGraph> = found.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

/// The element completing `t`, if any: the member of a singleton arc, or
/// else the first element whose column is the completing vector.
pub fn completing_element(m: &BinaryMatroid, t: &ThetaGraph) -> Option<usize> {
    if let Some(a) = t.arcs.iter().find(|a| a.len() == 1) {
        return a.first();
    }
    let v = t.completing.bits();
    m.raw_cols().iter().position(|&c| c == v)
}

pub fn is_complete(m: &BinaryMatroid, t: &ThetaGraph) -> bool {
    completing_element(m, t).is_some()
}

/// Minimal theta-graph per missing completing vector, by enumeration.
fn completions_enumerate(m: &BinaryMatroid, budget: &Budget) -> Result<BTreeMap<u64, ThetaGraph>> {
    let mut out: BTreeMap<u64, ThetaGraph> = BTreeMap::new();
    for t in theta_graphs(m, budget)? {
        if is_complete(m, &t) {
            continue;
        }
        // theta_graphs is sorted, so the first hit per vector is minimal.
        out.entry(t.completing.bits()).or_insert(t);
    }
    Ok(out)
}

/// Independent sets of size `2..=max_len` whose column sum is missing from
/// `m`, bucketed by that sum.
fn missing_sum_arcs(
    m: &BinaryMatroid,
    max_len: usize,
    budget: &Budget,
) -> Result<HashMap<u64, Vec<ElementSet>>> {
    let present: HashSet<u64> = m.raw_cols().iter().copied().collect();
    let cols = m.raw_cols();
    let mut out: HashMap<u64, Vec<ElementSet>> = HashMap::new();
    let mut basis = XorBasis::new();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        cols: &[u64],
        present: &HashSet<u64>,
        current: ElementSet,
        sum: u64,
        start: usize,
        max_len: usize,
        basis: &mut XorBasis,
        budget: &Budget,
        out: &mut HashMap<u64, Vec<ElementSet>>,
    ) -> Result<()> {
        budget.charge(1, "targeted theta search")?;
        if current.len() >= 2 && !present.contains(&sum) {
            out.entry(sum).or_default().push(current);
        }
        if current.len() == max_len {
            return Ok(());
        }
        for x in start..cols.len() {
            if let Some(p) = basis.insert(cols[x]) {
                dfs(
                    cols,
                    present,
                    current.with(x),
                    sum ^ cols[x],
                    x + 1,
                    max_len,
                    basis,
                    budget,
                    out,
                )?;
                basis.remove(p);
            }
        }
        Ok(())
    }

    dfs(
        cols,
        &present,
        ElementSet::EMPTY,
        0,
        0,
        max_len,
        &mut basis,
        budget,
        &mut out,
    )?;
    Ok(out)
}

/// Smallest theta-graph whose arcs are drawn from `arcs` (all with the same
/// column sum), or `None`.
fn first_theta_among(
    m: &BinaryMatroid,
    arcs: &[ElementSet],
    max_total: usize,
    budget: &Budget,
) -> Result<Option<ThetaGraph>> {
    for (i, &a) in arcs.iter().enumerate() {
        budget.charge(1, "targeted theta search")?;
        for (j, &b) in arcs.iter().enumerate().skip(i + 1) {
            if a.len() + b.len() + b.len() > max_total {
                break;
            }
            if !a.intersection(b).is_empty() {
                continue;
            }
            let ab = a.union(b);
            if m.rank_unchecked(ab) + 1 != ab.len() {
                continue;
            }
            for &c in &arcs[j + 1..] {
                if ab.len() + c.len() > max_total {
                    break;
                }
                if !ab.intersection(c).is_empty() {
                    continue;
                }
                let t = ab.union(c);
                if m.rank_unchecked(t) + 2 == t.len() {
                    return Ok(Some(ThetaGraph::assemble(m, [a, b, c])));
                }
            }
        }
    }
    Ok(None)
}

/// Minimal theta-graph per missing completing vector, by targeted search.
/// With `first_only`, stop at the smallest such vector.
fn completions_targeted(
    m: &BinaryMatroid,
    first_only: bool,
    budget: &Budget,
) -> Result<BTreeMap<u64, ThetaGraph>> {
    let r = m.rank();
    if r < 4 {
        return Ok(BTreeMap::new());
    }
    let buckets = missing_sum_arcs(m, r - 2, budget)?;
    let mut candidates: Vec<(u64, Vec<ElementSet>)> = buckets
        .into_iter()
        .filter(|(_, arcs)| arcs.len() >= 3)
        .collect();
    candidates.sort_by_key(|(v, _)| *v);
    for (_, arcs) in candidates.iter_mut() {
        arcs.sort_by(|&x, &y| cmp_arc(x, y));
    }
    let search = |(v, arcs): &(u64, Vec<ElementSet>)| -> Result<Option<(u64, ThetaGraph)>> {
        Ok(first_theta_among(m, arcs, r + 2, budget)?.map(|t| (*v, t)))
    };
    if first_only {
        let hit = candidates
            .par_iter()
            .map(search)
            .find_map_first(|res| match res {
                Ok(None) => None,
                other => Some(other),
            });
        return match hit {
            Some(Ok(Some((v, t)))) => Ok(BTreeMap::from([(v, t)])),
            Some(Err(e)) => Err(e),
            _ => Ok(BTreeMap::new()),
        };
    }
    let results: Vec<Option<(u64, ThetaGraph)>> =
        candidates.par_iter().map(search).collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

fn completions_component(
    m: &BinaryMatroid,
    strategy: Strategy,
    first_only: bool,
    budget: &Budget,
) -> Result<BTreeMap<u64, ThetaGraph>> {
    match strategy.resolve(m) {
        Strategy::Targeted => completions_targeted(m, first_only, budget),
        _ => completions_enumerate(m, budget),
    }
}

/// For every vector completing some incomplete theta-graph of `m`, the
/// smallest such theta-graph (indices refer to `m`).
pub fn incomplete_by_vector(
    m: &BinaryMatroid,
    strategy: Strategy,
    budget: &Budget,
) -> Result<BTreeMap<u64, ThetaGraph>> {
    per_component(m, strategy, false, budget)
}

fn per_component(
    m: &BinaryMatroid,
    strategy: Strategy,
    first_only: bool,
    budget: &Budget,
) -> Result<BTreeMap<u64, ThetaGraph>> {
    let comps = m.connected_components();
    if comps.len() == 1 {
        return completions_component(m, strategy, first_only, budget);
    }
    let mut out: BTreeMap<u64, ThetaGraph> = BTreeMap::new();
    for comp in comps {
        if comp.len() < 6 {
            // Fewer than six elements cannot hold three arcs of size two.
            continue;
        }
        let map = comp.indices();
        let sub = m.restrict(comp)?;
        for (v, t) in completions_component(&sub, strategy, first_only, budget)? {
            let t = t.lift(&map);
            out.entry(v)
                .and_modify(|old| {
                    if t < *old {
                        *old = t
                    }
                })
                .or_insert(t);
        }
    }
    if first_only {
        if let Some((&v, &t)) = out.iter().next() {
            return Ok(BTreeMap::from([(v, t)]));
        }
    }
    Ok(out)
}

/// Whether every column of the span of `m` is present and `m` is simple.
pub(crate) fn is_full_span(m: &BinaryMatroid) -> bool {
    let r = m.rank();
    r < 64 && m.is_simple() && m.len() as u64 == (1u64 << r) - 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedVerdict {
    Closed,
    /// The incomplete theta-graph with the smallest completing vector, ties
    /// broken by arc order.
    NotClosed(ThetaGraph),
}

impl ClosedVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosedVerdict::Closed)
    }
}

/// Whether every theta-graph of `m` is complete.
pub fn is_theta3_closed(
    m: &BinaryMatroid,
    opts: CheckOptions,
    budget: &Budget,
) -> Result<ClosedVerdict> {
    if opts.projective_shortcut && is_full_span(m) {
        return Ok(ClosedVerdict::Closed);
    }
    Ok(
        match per_component(m, opts.strategy, true, budget)?
            .into_values()
            .next()
        {
            Some(t) => ClosedVerdict::NotClosed(t),
            None => ClosedVerdict::Closed,
        },
    )
}

/// How many completing vectors one closure round adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundMode {
    /// Every completing vector of every incomplete theta-graph.
    #[default]
    Batch,
    /// Only the smallest completing vector.
    OneAtATime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    pub strategy: Strategy,
    pub mode: RoundMode,
    /// Stop as soon as the matroid holds its whole span.
    pub projective_shortcut: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            strategy: Strategy::Auto,
            mode: RoundMode::Batch,
            projective_shortcut: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureRound {
    /// Added columns, in increasing order of their bit patterns.
    pub added: Vec<GF2Vector>,
    /// `witnesses[i]` is an incomplete theta-graph completed by `added[i]`;
    /// indices refer to the matroid at the start of the round, which every
    /// later matroid extends.
    pub witnesses: Vec<ThetaGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureTrace {
    /// The input as given.
    pub input: BinaryMatroid,
    /// The simple matroid the rounds start from.
    pub initial: BinaryMatroid,
    pub rounds: Vec<ClosureRound>,
    pub final_matroid: BinaryMatroid,
}

impl ClosureTrace {
    /// Whether the input had to be simplified first.
    pub fn simplified(&self) -> bool {
        self.input.len() != self.initial.len()
    }
}

/// Label for a synthesized element.
pub fn synthesized_label(v: &GF2Vector) -> String {
    format!("v{v}")
}

/// The fixed point of repeatedly adding the completing vectors of all
/// incomplete theta-graphs. Non-simple input is simplified first.
pub fn theta3_closure(
    m: &BinaryMatroid,
    opts: ClosureOptions,
    budget: &Budget,
) -> Result<(BinaryMatroid, ClosureTrace)> {
    let initial = m.simplify();
    let mut current = initial.clone();
    let mut rounds = Vec::new();
    loop {
        budget.check_time("theta closure")?;
        if opts.projective_shortcut && is_full_span(&current) {
            break;
        }
        let first_only = opts.mode == RoundMode::OneAtATime;
        let found = per_component(&current, opts.strategy, first_only, budget)?;
        if found.is_empty() {
            break;
        }
        let mut round = ClosureRound {
            added: Vec::new(),
            witnesses: Vec::new(),
        };
        let mut next = current.clone();
        for (_, t) in found {
            let v = t.completing_vector();
            let label = next.fresh_label(&synthesized_label(&v));
            next = next.with_element(&label, v)?;
            round.added.push(v);
            round.witnesses.push(t);
        }
        rounds.push(round);
        current = next;
    }
    let trace = ClosureTrace {
        input: m.clone(),
        initial,
        rounds,
        final_matroid: current.clone(),
    };
    Ok((current, trace))
}

/// Theta-closedness of a graph through its cycle matroid.
pub fn graph_is_theta3_closed(g: &Graph, opts: CheckOptions, budget: &Budget) -> Result<bool> {
    Ok(is_theta3_closed(&cycle_matroid(g)?, opts, budget)?.is_closed())
}
