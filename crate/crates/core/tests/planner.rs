mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structctl::graph::{EdgeKind, QDigraph, VertexId};
use structctl::kalman::generic_rank_check;
use structctl::lin::{build_cactus_cover, lin_check, verify_cactus_cover};
use structctl::matching::{
    drivers_for_matching, matching_decomposition, maximum_matching, minimum_drivers, Matching,
};
use structctl::planner::{
    apply_plan, contract_supervertex, parse_plan, plan_augmentation, root_only, AugmentationPlan,
    PlanError, PlannedEdge, Reason,
};

use common::{build, fixture, random_connected};

fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<QDigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let p = rng.gen_range(0.0..0.3);
            random_connected(&mut rng, n, p)
        })
        .collect()
}

fn with_edges(g: &QDigraph, edges: &[PlannedEdge]) -> QDigraph {
    let mut b = g.to_builder();
    for e in edges {
        let (s, d) = (b.id(&e.src).unwrap(), b.id(&e.dst).unwrap());
        b.add_edge_kind(s, d, EdgeKind::Entanglement).unwrap();
    }
    b.build()
}

#[test]
fn matching_never_shrinks_across_phases() {
    for g in corpus(31, 300, 14) {
        let plan = plan_augmentation(&g).unwrap();
        let mut last = maximum_matching(&g).size();
        for k in 0..=plan.added_edges.len() {
            let size = maximum_matching(&with_edges(&g, &plan.added_edges[..k])).size();
            assert!(size >= last, "{}", g.to_text());
            last = size;
        }
        // phases appear in order
        let phases: Vec<Reason> = plan.added_edges.iter().map(|e| e.reason).collect();
        assert!(phases.windows(2).all(|w| w[0] <= w[1]), "{phases:?}");
    }
}

#[test]
fn closing_paths_matches_every_path_vertex() {
    for g in corpus(32, 300, 14) {
        let plan = plan_augmentation(&g).unwrap();
        let m = maximum_matching(&g);
        let dec = matching_decomposition(&g, &m).unwrap();
        let closing: Vec<PlannedEdge> = plan
            .added_edges
            .iter()
            .filter(|e| e.reason == Reason::ClosePath)
            .cloned()
            .collect();
        let h = with_edges(&g, &closing);
        let nontrivial: Vec<&Vec<VertexId>> = dec.paths.iter().filter(|p| p.len() >= 2).collect();

        // old matching plus one closing edge per path is a matching of h
        let mut edges = m.edges().to_vec();
        for p in &nontrivial {
            edges.push((p[p.len() - 1], p[0]));
        }
        let closed = Matching::from_edges(&h, edges).unwrap();
        for p in &nontrivial {
            assert!(p.iter().all(|&v| closed.is_matched(v)));
        }
        let rematched = maximum_matching(&h);
        assert_eq!(rematched.size(), m.size() + nontrivial.len());
        // a closing edge is only skipped when it already existed
        assert!(closing.len() <= nontrivial.len());
    }
}

#[test]
fn plan_size_bounds() {
    for g in corpus(33, 500, 20) {
        let plan = plan_augmentation(&g).unwrap();
        let m = maximum_matching(&g);
        let dec = matching_decomposition(&g, &m).unwrap();
        let singletons = dec.paths.iter().filter(|p| p.len() == 1).count();
        let unmatched = g.n() - m.size();
        let repairs = plan
            .added_edges
            .iter()
            .filter(|e| e.reason == Reason::Accessibility)
            .count();
        let k = plan.added_edges.len();
        assert!(k <= unmatched + 2 * singletons + repairs);
        assert!(k <= 2 * g.n(), "{} edges for n = {}", k, g.n());
        let n = g.n() as u64;
        assert!(plan.locc_cost_bound() <= 2 * n * n * n * n);
        assert_eq!(plan.locc_cost_bound(), k as u64 * n * n * n);
    }
}

#[test]
fn augmented_networks_have_one_driver_and_one_cactus() {
    for g in corpus(34, 300, 16) {
        let plan = plan_augmentation(&g).unwrap();
        let post = root_only(&apply_plan(&g, &plan).unwrap(), &plan.root);
        assert_eq!(post.n_drivers(), 1);
        assert_eq!(minimum_drivers(&post).unwrap().n_d, 1);
        let report = lin_check(&post);
        assert!(report.controllable && report.inaccessible.is_empty());
        let m = maximum_matching(&post);
        let d = drivers_for_matching(&post, &m).unwrap();
        let dc = build_cactus_cover(&post, &m, &d).unwrap();
        assert_eq!(dc.cover.cacti.len(), 1);
        assert!(dc.added_roots.is_empty());
        assert!(verify_cactus_cover(&dc.graph, &dc.cover).is_valid());
    }
}

#[test]
fn rank_does_not_drop_after_augmentation() {
    for (i, g) in corpus(35, 200, 10).into_iter().enumerate() {
        let plan = plan_augmentation(&g).unwrap();
        let bare = AugmentationPlan {
            added_edges: Vec::new(),
            ..plan.clone()
        };
        let before = generic_rank_check(&apply_plan(&g, &bare).unwrap(), 3, i as u64).unwrap();
        let after = generic_rank_check(&apply_plan(&g, &plan).unwrap(), 3, i as u64).unwrap();
        assert!(after.achieved_rank >= before.achieved_rank);
        assert!(after.full_rank);
    }
}

#[test]
fn plan_text_round_trips() {
    for g in corpus(36, 100, 12) {
        let plan = plan_augmentation(&g).unwrap();
        assert_eq!(parse_plan(&plan.to_text()).unwrap(), plan);
    }
}

#[test]
fn two_driver_fixture_plan() {
    let g = fixture("two_drivers.net");
    let plan = plan_augmentation(&g).unwrap();
    assert_eq!(
        plan.added_edges[0],
        PlannedEdge {
            src: "V2".into(),
            dst: "V6".into(),
            reason: Reason::ClosePath
        }
    );
    let post = apply_plan(&g, &plan).unwrap();
    assert!(structctl::to_dot(&post).contains("\"V2\" -> \"V6\" [style=dashed];"));
    assert!(matches!(
        apply_plan(&post, &plan),
        Err(PlanError::EdgePresent(s, d)) if s == "V2" && d == "V6"
    ));
}

#[test]
fn empty_plan_only_adds_the_drive_edge() {
    let g = build(3, 0, &[(0, 1), (1, 2), (2, 0)]);
    let plan = plan_augmentation(&g).unwrap();
    assert!(plan.added_edges.is_empty());
    let post = apply_plan(&g, &plan).unwrap();
    assert_eq!(post.edges().len(), g.edges().len() + 1);
    assert_eq!(post.drive_edges().count(), 1);
}

#[test]
fn disconnected_networks_are_rejected() {
    let g = build(3, 0, &[(0, 1)]);
    assert_eq!(
        plan_augmentation(&g),
        Err(PlanError::Disconnected(vec![
            vec!["V1".into(), "V2".into()],
            vec!["V3".into()]
        ]))
    );
}

#[test]
fn closed_fixture_contracts_to_a_supervertex() {
    let g = fixture("two_drivers_closed.net");
    assert_eq!(minimum_drivers(&g).unwrap().n_d, 1);
    let cycle: Vec<VertexId> = ["V6", "V5", "V4", "V2"]
        .iter()
        .map(|l| g.id(l).unwrap())
        .collect();
    let (h, map) = contract_supervertex(&g, &cycle).unwrap();
    assert_eq!(map.representative, "V2-6");
    assert_eq!(h.n(), 4);
    assert_eq!(lin_check(&h).controllable, lin_check(&g).controllable);
    assert!(lin_check(&h).controllable);
}

/// Contracting the cycle that carries the drive attachment keeps a single
/// root sufficient.
#[test]
fn contracting_planned_networks_preserves_the_verdict() {
    let mut contracted = 0;
    for g in corpus(37, 200, 14) {
        let plan = plan_augmentation(&g).unwrap();
        let post = root_only(&apply_plan(&g, &plan).unwrap(), &plan.root);
        let m = maximum_matching(&post);
        let dec = matching_decomposition(&post, &m).unwrap();
        let attach = post.id(&plan.drive_attachment).unwrap();
        let Some(cycle) = dec
            .cycles
            .iter()
            .find(|c| c.contains(&attach) && c.len() >= 2)
        else {
            continue;
        };
        let (h, map) = contract_supervertex(&post, cycle).unwrap();
        assert_eq!(h.n(), post.n() - cycle.len() + 1);
        assert!(h.has_edge(h.id(&plan.root).unwrap(), map.representative_id));
        assert_eq!(lin_check(&h).controllable, lin_check(&post).controllable);
        contracted += 1;
    }
    assert!(contracted >= 100, "{contracted}");
}
