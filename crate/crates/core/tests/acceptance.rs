//! Acceptance suite. Each criterion runs in turn and prints one line with
//! its verdict and timing; the process fails if any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta3::catalog::lookup;
use theta3::construct::{
    circuit_matroid, complete_graph_matroid, is_complete_graph, is_projective, parallel_connection,
    projective_geometry, two_sum, Graph,
};
use theta3::decompose::{
    canonical_tree_decomposition, classify_theta3, recompose, ClassifyOptions, DecomposeOptions,
    EdgeOrder, Verdict,
};
use theta3::theta::{
    graph_is_theta3_closed, is_complete, is_theta3_closed, theta3_closure, theta_graphs,
    CheckOptions, ClosedVerdict, ClosureOptions, Strategy,
};
use theta3::{BinaryMatroid, Budget, ElementSet, GF2Vector, SeparationOrder, ThetaGraph};

fn closed(m: &BinaryMatroid) -> bool {
    is_theta3_closed(m, CheckOptions::default(), &Budget::unlimited())
        .unwrap()
        .is_closed()
}

fn column_set(m: &BinaryMatroid) -> BTreeSet<u64> {
    common::cols(m).into_iter().collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(d: Duration, limit: Duration, what: &str) {
    assert!(d <= limit, "{what} took {d:?}, limit {limit:?}");
}

/// Closures of M*(K3,3) and F7* both end at the rank-4 projective geometry.
fn worked_closures() -> String {
    let pg = column_set(&projective_geometry(4).unwrap());
    let mut slowest = Duration::ZERO;
    for key in ["MSTAR_K33", "F7STAR"] {
        let m = lookup(key).unwrap();
        let ((c, _), d) =
            timed(|| theta3_closure(&m, ClosureOptions::default(), &Budget::unlimited()).unwrap());
        within(d, Duration::from_secs(10), key);
        assert_eq!(column_set(&c), pg, "{key}");
        assert!(is_projective(&c));
        assert!(column_set(&m).is_subset(&column_set(&c)));
        slowest = slowest.max(d);
    }
    format!("both reach 15 points, slowest {slowest:.2?} (limit 10s each)")
}

/// The twelve weight-two completing vectors read off the bond matrix of K5.
const MSTAR_K5_WEIGHT_TWO: [&str; 12] = [
    "110000", "101000", "100100", "100010", "011000", "010010", "010001", "001100", "001001",
    "000110", "000101", "000011",
];

fn mstar_k5_closure() -> String {
    let m = lookup("MSTAR_K5").unwrap();
    let ((c, trace), d) =
        timed(|| theta3_closure(&m, ClosureOptions::default(), &Budget::unlimited()).unwrap());
    within(d, Duration::from_secs(600), "closure");
    let light: BTreeSet<String> = trace.rounds[0]
        .added
        .iter()
        .map(GF2Vector::to_string)
        .filter(|v| v.matches('1').count() <= 2)
        .collect();
    let expected: BTreeSet<String> = MSTAR_K5_WEIGHT_TWO.iter().map(|s| s.to_string()).collect();
    assert_eq!(light, expected);
    assert_eq!(column_set(&c), column_set(&projective_geometry(6).unwrap()));
    format!(
        "first round adds {} vectors incl. the 12 of weight <= 2; 63 points after {} rounds in {d:.2?} (limit 600s)",
        trace.rounds[0].added.len(),
        trace.rounds.len()
    )
}

/// Witness must be a theta-graph by the definitional oracle and incomplete.
fn check_witness(m: &BinaryMatroid, t: &ThetaGraph) {
    let cols = common::cols(m);
    let mut arcs = t.arcs().map(|s| s.bits());
    arcs.sort();
    assert!(common::theta_graphs(&cols).contains(&arcs));
    assert!(!common::is_complete(&cols, arcs));
    assert!(!is_complete(m, t));
}

fn negative_instances() -> String {
    let mut cases: Vec<(String, BinaryMatroid)> = vec![
        ("M(K2,4)".into(), lookup("M_K24").unwrap()),
        ("M(K2,3)".into(), common::k23()),
    ];
    let pg = projective_geometry(4).unwrap();
    for q in 0..pg.len() {
        cases.push((
            format!("PG(3,2)\\{}", pg.label(q)),
            pg.delete(ElementSet::singleton(q)).unwrap(),
        ));
    }
    let mut slowest = Duration::ZERO;
    for (name, m) in &cases {
        let (v, d) =
            timed(|| is_theta3_closed(m, CheckOptions::default(), &Budget::unlimited()).unwrap());
        within(d, Duration::from_secs(1), name);
        slowest = slowest.max(d);
        match v {
            ClosedVerdict::NotClosed(t) => check_witness(m, &t),
            ClosedVerdict::Closed => panic!("{name} reported closed"),
        }
    }
    format!(
        "{} instances not closed with checked witnesses, slowest {slowest:.2?} (limit 1s each)",
        cases.len()
    )
}

fn positive_instances() -> String {
    let (count, d) = timed(|| {
        let direct = CheckOptions {
            strategy: Strategy::Auto,
            projective_shortcut: false,
        };
        let b = Budget::unlimited();
        let mut count = 0;
        for n in 1..=7 {
            assert!(closed(&complete_graph_matroid(n).unwrap()), "MK({n})");
            count += 1;
        }
        for r in 1..=4 {
            let pg = projective_geometry(r).unwrap();
            assert!(
                is_theta3_closed(&pg, direct, &b).unwrap().is_closed(),
                "PG({r})"
            );
            count += 1;
        }
        assert!(closed(&projective_geometry(5).unwrap()), "PG(5)");
        count += 1;
        for n in 1..=10 {
            assert!(closed(&circuit_matroid(n).unwrap()), "CIRCUIT({n})");
            count += 1;
        }
        count
    });
    within(d, Duration::from_secs(60), "positive instances");
    format!("{count} instances closed in {d:.2?} (limit 60s)")
}

fn classify(m: &BinaryMatroid) -> Verdict {
    classify_theta3(m, ClassifyOptions::default(), &Budget::unlimited()).unwrap()
}

fn agree(m: &BinaryMatroid) {
    let c = closed(m);
    match classify(m) {
        Verdict::InClass(r) => {
            assert!(c, "{m:?}: recipe {r} for a matroid that is not closed");
            assert!(r.evaluate().unwrap().same_matroid(m).unwrap(), "{m:?}: {r}");
        }
        Verdict::NotInClass(_) => assert!(!c, "{m:?}: closed but classified outside"),
    }
}

fn equivalence_sweep() -> String {
    let (n, d) = timed(|| {
        for mask in 0u64..128 {
            let cols: Vec<u64> = (1..8u64).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            agree(&common::mat(3, &cols, "x"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        for _ in 0..500 {
            let mask: u64 = rng.gen_range(0..1 << 15);
            let cols: Vec<u64> = (1..16u64).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            agree(&common::mat(4, &cols, "y"));
        }
        628
    });
    within(d, Duration::from_secs(300), "sweep");
    format!("{n} subsets, zero disagreements in {d:.2?} (limit 300s)")
}

fn oracle_equivalence() -> String {
    let mut checked = 0;
    let mut thetas = 0;
    for (name, m) in common::corpus() {
        if m.len() > 10 {
            continue;
        }
        let cols = common::cols(&m);
        let expected = common::theta_graphs(&cols);
        let found = theta_graphs(&m, &Budget::unlimited()).unwrap();
        let as_set: BTreeSet<[u64; 3]> = found
            .iter()
            .map(|t| {
                let mut a = t.arcs().map(|s| s.bits());
                a.sort();
                a
            })
            .collect();
        assert_eq!(as_set, expected, "{name}");
        assert_eq!(found.len(), expected.len(), "{name}");
        for t in &found {
            let mut a = t.arcs().map(|s| s.bits());
            a.sort();
            assert_eq!(is_complete(&m, t), common::is_complete(&cols, a), "{name}");
        }
        thetas += found.len();
        checked += 1;
    }
    format!("{checked} matroids, {thetas} theta-graphs, zero disagreements")
}

fn rename_all(m: &BinaryMatroid, prefix: &str) -> BinaryMatroid {
    let map: HashMap<String, String> = m
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), format!("{prefix}{i}")))
        .collect();
    m.relabel(&map).unwrap()
}

fn block(rng: &mut ChaCha8Rng) -> BinaryMatroid {
    match rng.gen_range(0..3) {
        0 => circuit_matroid(rng.gen_range(2..=6)).unwrap(),
        1 => complete_graph_matroid(rng.gen_range(3..=5)).unwrap(),
        _ => projective_geometry(rng.gen_range(2..=4)).unwrap(),
    }
}

/// Glue `n` onto `m` by parallel connection at random basepoints. Also
/// reports whether the basepoint is a loop on exactly one side.
fn glue(m: &BinaryMatroid, n: &BinaryMatroid, rng: &mut ChaCha8Rng) -> (BinaryMatroid, bool) {
    let (i, j) = (rng.gen_range(0..m.len()), rng.gen_range(0..n.len()));
    let one_sided_loop = m.loops().contains(i) != n.loops().contains(j);
    let pm = m.label(i).to_string();
    let n = n
        .relabel(&common::label_map(&[(n.label(j), pm.as_str())]))
        .unwrap();
    (
        parallel_connection(m, &n, &pm, &pm).unwrap(),
        one_sided_loop,
    )
}

/// A mix of members built from blocks, closures of random sets, and
/// arbitrary column lists, sometimes with parallel copies and loops. Glued
/// members stay within `max_len` elements so exhaustive checks stay cheap.
fn sample(rng: &mut ChaCha8Rng, prefix: &str, max_len: usize) -> BinaryMatroid {
    let mut m = match rng.gen_range(0..3) {
        0 => {
            let mut m = rename_all(&block(rng), &format!("{prefix}a"));
            for k in 0..rng.gen_range(0..3) {
                let n = rename_all(&block(rng), &format!("{prefix}b{k}_"));
                if m.len() + n.len() > max_len {
                    break;
                }
                m = if rng.gen_bool(0.8) {
                    glue(&m, &n, rng).0
                } else {
                    m.direct_sum(&n).unwrap()
                };
            }
            m
        }
        1 => {
            let dim = rng.gen_range(3..=4);
            let r = common::random_matroid(rng, dim, 8, 0);
            theta3_closure(&r, ClosureOptions::default(), &Budget::unlimited())
                .unwrap()
                .0
        }
        _ => {
            let dim = rng.gen_range(2..=5);
            common::random_matroid(rng, dim, 10, 0)
        }
    };
    m = rename_all(&m, prefix);
    if m.is_empty() {
        return m;
    }
    for k in 0..rng.gen_range(0..3) {
        let i = rng.gen_range(0..m.len());
        let col = if rng.gen_bool(0.2) {
            GF2Vector::zero(m.dim()).unwrap()
        } else {
            m.column(i)
        };
        m = m.with_element(&format!("{prefix}x{k}"), col).unwrap();
    }
    m
}

/// Draw samples until `want` of them satisfy the premise of `law`; `law`
/// returns `None` when the premise fails.
fn sampled(seed: u64, want: usize, law: impl Fn(&mut ChaCha8Rng) -> Option<()>) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..50 * want {
        if law(&mut rng).is_some() {
            hits += 1;
            if hits == want {
                break;
            }
        }
    }
    assert_eq!(hits, want, "too few samples met the premise");
    hits
}

fn hereditary_and_composition() -> String {
    let si = sampled(71, 200, |rng| {
        let m = sample(rng, "m", 24);
        closed(&m).then(|| assert!(closed(&m.simplify()), "{m:?}"))
    });
    let flats = sampled(72, 200, |rng| {
        let m = sample(rng, "m", 24);
        if m.is_empty() || !closed(&m) {
            return None;
        }
        let s = ElementSet::from_bits(rng.gen::<u64>() & m.ground().bits());
        let f = m.closure_flat(s).unwrap();
        assert!(m.is_flat(f).unwrap());
        assert!(closed(&m.restrict(f).unwrap()), "{m:?} on {f:?}");
        Some(())
    });
    let contractions = sampled(73, 200, |rng| {
        let m = sample(rng, "m", 24);
        if m.is_empty() || !closed(&m) {
            return None;
        }
        let e = rng.gen_range(0..m.len());
        assert!(
            closed(&m.contract(ElementSet::singleton(e)).unwrap()),
            "{m:?} / {e}"
        );
        Some(())
    });
    let summands = sampled(74, 200, |rng| {
        let m = sample(rng, "m", 16);
        let n = sample(rng, "n", 16);
        let ok = |x: &BinaryMatroid, i: usize| !x.loops().contains(i) && !x.coloops().contains(i);
        if m.is_empty() || n.is_empty() {
            return None;
        }
        let (i, j) = (rng.gen_range(0..m.len()), rng.gen_range(0..n.len()));
        if !ok(&m, i) || !ok(&n, j) {
            return None;
        }
        let p = m.label(i).to_string();
        let n = n
            .relabel(&common::label_map(&[(n.label(j), p.as_str())]))
            .unwrap();
        let sum = two_sum(&m, &n, &p, &p).unwrap();
        closed(&sum).then(|| assert!(closed(&m) && closed(&n), "{m:?} (+)2 {n:?}"))
    });
    one_sided_loop_counterexample();
    let members = std::cell::Cell::new(0);
    let (degenerate, reverse_fails) = (std::cell::Cell::new(0), std::cell::Cell::new(0));
    let parallel = sampled(75, 200, |rng| {
        // Lean towards non-members on one side so both directions of the
        // equivalence get exercised.
        let m = if rng.gen_bool(0.5) {
            non_member(rng)
        } else {
            sample(rng, "m", 16)
        };
        let n = sample(rng, "n", 16);
        if m.is_empty() || n.is_empty() {
            return None;
        }
        let (pc, one_sided_loop) = glue(&m, &n, rng);
        let parts = closed(&m) && closed(&n);
        if parts {
            assert!(closed(&pc), "P({m:?}, {n:?})");
            members.set(members.get() + 1);
        } else if one_sided_loop {
            // A basepoint that is a loop on one side only is contracted
            // from the other side, which can hide a bad theta-graph there.
            degenerate.set(degenerate.get() + 1);
            reverse_fails.set(reverse_fails.get() + closed(&pc) as usize);
        } else {
            assert!(!closed(&pc), "P({m:?}, {n:?})");
        }
        Some(())
    });
    assert!(
        members.get() >= 40 && parallel - members.get() >= 40,
        "{} members",
        members.get()
    );
    format!(
        "simplification {si}, flats {flats}, contraction {contractions}, 2-sum summands {summands}, \
         parallel connection {parallel} ({} with both sides closed): zero violations; \
         with a one-sided loop basepoint the converse failed {} of {} times",
        members.get(),
        reverse_fails.get(),
        degenerate.get()
    )
}

/// A random matroid that is not closed.
fn non_member(rng: &mut ChaCha8Rng) -> BinaryMatroid {
    loop {
        let dim = rng.gen_range(4..=5);
        let m = rename_all(&common::random_matroid(rng, dim, 12, 0), "m");
        if !closed(&m) {
            return m;
        }
    }
}

/// The converse of the parallel connection law needs a basepoint that is
/// not a loop of exactly one side: here M(K2,3) is glued to a single loop,
/// which contracts the basepoint out of M(K2,3) and leaves a closed matroid.
fn one_sided_loop_counterexample() {
    let k23 = common::k23();
    let lp = BinaryMatroid::new(1, vec![("a1".into(), GF2Vector::zero(1).unwrap())]).unwrap();
    let pc = parallel_connection(&k23, &lp, "a1", "a1").unwrap();
    assert!(!closed(&k23));
    assert!(closed(&lp));
    assert!(closed(&pc));
}

fn decomposition_soundness() -> String {
    let b = Budget::unlimited();
    let mut checked = 0;
    for (name, m) in common::corpus() {
        if m.is_empty() || !m.is_connected() || m.len() > 14 {
            continue;
        }
        let forward = canonical_tree_decomposition(
            &m,
            DecomposeOptions {
                order: SeparationOrder::Forward,
            },
            &b,
        )
        .unwrap();
        let reverse = canonical_tree_decomposition(
            &m,
            DecomposeOptions {
                order: SeparationOrder::Reverse,
            },
            &b,
        )
        .unwrap();
        forward.validate_canonical(&b).unwrap();
        reverse.validate_canonical(&b).unwrap();
        let expected = common::labelled_circuits(&m);
        for t in [&forward, &reverse] {
            for order in [EdgeOrder::Forward, EdgeOrder::Reverse] {
                let back = recompose(t, order).unwrap();
                assert_eq!(common::labelled_circuits(&back), expected, "{name}");
            }
        }
        assert_eq!(forward.signature(), reverse.signature(), "{name}");
        checked += 1;
    }
    format!("{checked} connected matroids recompose with equal circuits; both orders agree")
}

fn spanning_clique_supersets() -> String {
    let (sizes, d) = timed(|| {
        let base = common::cols(&complete_graph_matroid(5).unwrap());
        let rest: Vec<u64> = (1..16u64).filter(|v| !base.contains(v)).collect();
        let mut sizes = BTreeSet::new();
        for mask in 0u64..1 << rest.len() {
            let mut cols = base.clone();
            cols.extend(
                (0..rest.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| rest[i]),
            );
            let m = common::mat(4, &cols, "s");
            if closed(&m) {
                match m.len() {
                    10 => assert_eq!(
                        is_complete_graph(&m, &Budget::unlimited()).unwrap(),
                        Some(5)
                    ),
                    15 => assert!(is_projective(&m)),
                    n => panic!("closed superset with {n} elements"),
                }
                sizes.insert(m.len());
            }
        }
        sizes
    });
    within(d, Duration::from_secs(60), "supersets");
    assert_eq!(sizes, BTreeSet::from([10, 15]));
    format!("32 supersets, closed only at 10 (M(K5)) and 15 (PG(3,2)) in {d:.2?} (limit 60s)")
}

/// Edge list of a cycle or complete graph on vertices `0..n`.
fn piece(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    if rng.gen_bool(0.5) {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    } else {
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect()
    }
}

/// Glue cycles and complete graphs by 1-sums and 2-sums until the graph
/// would pass `MAX_VERTICES` vertices.
const MAX_VERTICES: usize = 8;

fn glued_graph(rng: &mut ChaCha8Rng) -> Graph {
    let mut vertices = rng.gen_range(2..=MAX_VERTICES);
    let mut edges = piece(rng, vertices);
    for _ in 0..rng.gen_range(0..4) {
        let two = rng.gen_bool(0.5);
        let shared = if two { 2 } else { 1 };
        if vertices + 1 > MAX_VERTICES {
            break;
        }
        let n = rng.gen_range(shared.max(2)..=MAX_VERTICES - vertices + shared);
        let mut p = piece(rng, n);
        // Vertices of the new piece that are shared, with their images.
        let glued: Vec<(usize, usize)> = if two {
            // 2-sum in the graph sense: identify an edge of each side and
            // keep one copy of it, which is a parallel connection.
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            let (x, y) = p.remove(rng.gen_range(0..p.len()));
            vec![(x, u), (y, v)]
        } else {
            vec![(0, rng.gen_range(0..vertices))]
        };
        let mut fresh = vertices..;
        let map: Vec<usize> = (0..n)
            .map(|w| match glued.iter().find(|(x, _)| *x == w) {
                Some(&(_, image)) => image,
                None => fresh.next().unwrap(),
            })
            .collect();
        edges.extend(p.into_iter().map(|(a, b)| (map[a], map[b])));
        vertices += n - shared;
    }
    Graph::new(
        edges
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| (format!("v{u}"), format!("v{v}"), format!("g{i}")))
            .collect(),
    )
}

fn glued_graphs_are_closed() -> String {
    let b = Budget::unlimited();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a9a);
    let mut largest = 0;
    for _ in 0..100 {
        let g = glued_graph(&mut rng);
        assert!(g.vertices().len() <= MAX_VERTICES);
        largest = largest.max(g.edges().len());
        assert!(
            graph_is_theta3_closed(&g, CheckOptions::default(), &b).unwrap(),
            "{g:?}"
        );
    }
    let k23 = common::graph(&[
        ("x", "1", "a1"),
        ("1", "y", "b1"),
        ("x", "2", "a2"),
        ("2", "y", "b2"),
        ("x", "3", "a3"),
        ("3", "y", "b3"),
    ]);
    assert!(!graph_is_theta3_closed(&k23, CheckOptions::default(), &b).unwrap());
    format!("100 glued graphs closed (largest {largest} edges); K2,3 not closed")
}

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked closures", worked_closures),
        ("M*(K5) closure", mstar_k5_closure),
        ("negative instances", negative_instances),
        ("positive instances", positive_instances),
        ("classification sweep", equivalence_sweep),
        ("oracle equivalence", oracle_equivalence),
        (
            "hereditary and composition laws",
            hereditary_and_composition,
        ),
        ("decomposition soundness", decomposition_soundness),
        ("spanning clique supersets", spanning_clique_supersets),
        ("glued graphs", glued_graphs_are_closed),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!(
                    "criterion {} ({name}): FAIL after {:.2?}: {msg}",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
