mod common;

use comdet::generate::{gnp, gnp_nonempty, random_partition};
use comdet::graph::{load_edge_list_str, Format};
use comdet::louvain::{aggregate, local_move_pass, louvain, AggregateGraph, LouvainConfig};
use comdet::modularity::{exact_delta_q, modularity};
use comdet::nash::{
    delta_r, is_nash_equilibrium, rm, rm_correction, stabilize, MoveEvaluation, Role,
    StabilizeConfig,
};
use comdet::overlap::{alpha_cut, legitimacy_matrix};
use comdet::{Graph, Partition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{pair_sum_delta, pair_sum_modularity};

/// A random instance: graph with at least one edge plus a partition.
fn instance(max_n: usize) -> impl Strategy<Value = (Graph, Partition)> {
    (2..=max_n, any::<u64>(), 1usize..8).prop_map(|(n, seed, k)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp_nonempty(n, 0.2, &mut rng);
        let p = random_partition(&g, k, &mut rng);
        (g, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshake_and_roundtrip(n in 1usize..40, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(n, 0.15, &mut rng);
        let deg_sum: usize = (0..g.n()).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(deg_sum, 2 * g.m());

        let back = load_edge_list_str(&g.to_edge_list(), Format::Unipartite).unwrap();
        let labelled = |h: &Graph| {
            let mut e: Vec<(String, String)> = h
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (h.label(u).to_string(), h.label(v).to_string());
                    if a < b { (a, b) } else { (b, a) }
                })
                .collect();
            e.sort();
            e
        };
        prop_assert_eq!(labelled(&back), labelled(&g));
        prop_assert_eq!(back.n(), g.n());
    }

    #[test]
    fn bipartite_edges_cross_parts(pairs in prop::collection::vec((0u8..6, 0u8..6), 1..30)) {
        let text: String = pairs.iter().map(|(a, b)| format!("t{a} b{b}\n")).collect();
        let g = load_edge_list_str(&text, Format::Bipartite).unwrap();
        for &(u, v) in g.edges() {
            prop_assert_ne!(g.part(u), g.part(v));
        }
    }

    #[test]
    fn community_sum_matches_pair_sum((g, p) in instance(50)) {
        let fast = modularity(&g, &p).unwrap();
        prop_assert!((fast - pair_sum_modularity(&g, &p)).abs() < 1e-12);
        prop_assert!((-0.5..1.0).contains(&fast));
    }

    #[test]
    fn modularity_ignores_labels((g, p) in instance(30), shift in 1usize..100) {
        let relabeled: Vec<usize> = p.assignment().iter().map(|&c| c * 7 + shift).collect();
        let q = Partition::from_assignment(&g, relabeled).unwrap();
        prop_assert!((modularity(&g, &p).unwrap() - modularity(&g, &q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rm_is_exact_delta((g, p) in instance(30)) {
        for w in 0..g.n() {
            for c in p.community_ids() {
                let fast = rm(&g, &p, w, c).unwrap();
                prop_assert!((fast - exact_delta_q(&g, &p, w, c).unwrap()).abs() < 1e-12);
                prop_assert!((fast - pair_sum_delta(&g, &p, w, c)).abs() < 1e-12);
            }
            prop_assert_eq!(rm(&g, &p, w, p.community_of(w)).unwrap(), 0.0);
        }
    }

    #[test]
    fn corrected_gains_match_recomputation((g, p) in instance(15), pick: u64) {
        let w = (pick as usize) % g.n();
        let from = p.community_of(w);
        let targets: Vec<usize> = p.community_ids().filter(|&c| c != from).collect();
        prop_assume!(!targets.is_empty());
        let to = targets[(pick as usize / 31) % targets.len()];
        let mv = MoveEvaluation { vertex: w, from, to, gain: rm(&g, &p, w, to).unwrap() };
        let mut after = p.clone();
        after.move_vertex(&g, w, to).unwrap();
        prop_assert!(after.stats_consistent(&g));
        for z in (0..g.n()).filter(|&z| z != w) {
            let own = p.community_of(z);
            for c in after.community_ids().filter(|&c| c != own) {
                let corr = rm_correction(&g, z, Role::classify(own, &mv), Role::classify(c, &mv), &mv).unwrap();
                let expect = rm(&g, &after, z, c).unwrap();
                prop_assert!((rm(&g, &p, z, c).unwrap() + corr - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stabilize_reaches_certified_equilibrium((g, p) in instance(30)) {
        let cfg = StabilizeConfig { debug_recompute: true, ..Default::default() };
        let q0 = modularity(&g, &p).unwrap();
        let (out, trace) = stabilize(&g, &p, &cfg).unwrap();
        prop_assert!(is_nash_equilibrium(&g, &out, cfg.epsilon));
        prop_assert!(out.stats_consistent(&g));
        prop_assert!(trace.final_q >= q0);
        let mut prev = q0;
        for e in &trace.entries {
            prop_assert!((e.q_before - prev).abs() < 1e-12);
            prop_assert!((e.q_after - e.q_before - e.evaluation.gain).abs() < 1e-9);
            prop_assert!(e.q_after - e.q_before > cfg.epsilon);
            prev = e.q_after;
        }
        prop_assert!((modularity(&g, &out).unwrap() - trace.final_q).abs() < 1e-12);
    }

    #[test]
    fn local_moves_never_lower_modularity(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp_nonempty(20, 0.2, &mut rng);
        let ag = AggregateGraph::from_graph(&g);
        let mut assign: Vec<usize> = (0..g.n()).collect();
        let order: Vec<usize> = (0..g.n()).rev().collect();
        let mut q = ag.modularity(&assign);
        loop {
            let (next, improved) = local_move_pass(&ag, &assign, &order, 1e-9);
            let q_next = ag.modularity(&next);
            prop_assert!(q_next >= q - 1e-12);
            if !improved {
                prop_assert_eq!(&next, &assign);
                break;
            }
            assign = next;
            q = q_next;
        }
    }

    #[test]
    fn aggregation_preserves_modularity((g, p) in instance(30), coarse in 1usize..5) {
        let ag = AggregateGraph::from_graph(&g);
        let (next, node_of) = aggregate(&ag, p.assignment());
        prop_assert!((next.total_weight() - 2.0 * g.m() as f64).abs() < 1e-12);
        // Any partition of the super-vertices, unrolled to the original graph.
        let upper: Vec<usize> = (0..next.n()).map(|i| i % coarse).collect();
        let unrolled: Vec<usize> = node_of.iter().map(|&i| upper[i]).collect();
        let q_up = next.modularity(&upper);
        let q_down = modularity(&g, &Partition::from_assignment(&g, unrolled).unwrap()).unwrap();
        prop_assert!((q_up - q_down).abs() < 1e-12);
    }

    #[test]
    fn louvain_beats_singletons_and_is_deterministic(seed: u64, lseed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp_nonempty(25, 0.15, &mut rng);
        let cfg = LouvainConfig::with_seed(lseed);
        let p = louvain(&g, &cfg).unwrap();
        let q = modularity(&g, &p).unwrap();
        prop_assert!(q >= modularity(&g, &Partition::singletons(&g)).unwrap());
        prop_assert_eq!(louvain(&g, &cfg).unwrap(), p);
    }

    #[test]
    fn legitimacy_in_unit_interval_and_cuts_nest((g, p) in instance(30), a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0) {
        let l = legitimacy_matrix(&g, &p);
        for (u, row) in l.values.iter().enumerate() {
            for &v in row {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            if g.deg(u) == 0 {
                prop_assert!(row.iter().all(|&v| v == 0.0));
            }
        }
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let loose = alpha_cut(&l, lo).unwrap();
        let tight = alpha_cut(&l, hi).unwrap();
        for (a, b) in tight.memberships.iter().zip(&loose.memberships) {
            prop_assert!(a.communities.iter().all(|c| b.communities.contains(c)));
            prop_assert!(a.communities.contains(&a.assigned));
        }
    }
}

#[test]
fn delta_r_nonadjacent_example() {
    // w = 0 (degree 3), z = 1 (degree 2), not adjacent, m = 10.
    let g = Graph::from_edges(
        17,
        &[
            (0, 2), (0, 3), (0, 4),
            (1, 5), (1, 6),
            (7, 8), (9, 10), (11, 12), (13, 14), (15, 16),
        ],
    )
    .unwrap();
    assert_eq!(g.m(), 10);
    let oracle: f64 = 0.0 - (2.0 * 3.0) / (2.0 * 10.0);
    assert!((oracle + 0.3).abs() < 1e-15);
    assert!((delta_r(&g, 0, 1) - oracle).abs() < 1e-15);
}

#[test]
fn correction_additivity() {
    // Row sums of the table: going C1 -> C2 directly equals the detour
    // through an uninvolved community, both as coefficients and as values.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = gnp_nonempty(15, 0.3, &mut rng);
    let mv = MoveEvaluation { vertex: 0, from: 0, to: 1, gain: 0.0 };
    for z in 1..g.n() {
        let c = |f, t| rm_correction(&g, z, f, t, &mv).unwrap();
        let (s, t, o) = (Role::Source, Role::Target, Role::Other);
        let dr = delta_r(&g, 0, z);
        let m = g.m() as f64;
        assert!((c(s, t) - (c(s, o) + c(o, t))).abs() < 1e-15);
        assert!((m * c(s, t) - 2.0 * dr).abs() < 1e-12);
        assert!((c(t, s) - (c(t, o) + c(o, s))).abs() < 1e-15);
        assert!((m * c(t, s) + 2.0 * dr).abs() < 1e-12);
        assert_eq!(c(o, o), 0.0);
    }
}
