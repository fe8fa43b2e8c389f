mod common;

use rand::Rng;
use symrig::connectivity::{
    edge_connectivity, find_k_block, is_n_gain_mixed_connected, is_n_mixed_connected, k_blocks, symmetric_separation,
};
use symrig::fixtures;
use symrig::matroid::{count, is_forced_rigid_combinatorial, CountFamily};
use symrig::numeric::{is_rigid_numeric, motion_space};
use symrig::symcover::{check_cover_lower_bound, cover_from_partition, CoverVariant};
use symrig::{CoveringGraph, EdgeId, GainGraph, GroupSpec};

/// Every set partition of `0..m`, as restricted growth strings.
fn set_partitions(m: usize, mut visit: impl FnMut(&[Vec<EdgeId>])) {
    fn rec(i: usize, m: usize, labels: &mut Vec<usize>, blocks: usize, visit: &mut dyn FnMut(&[Vec<EdgeId>])) {
        if i == m {
            let mut parts = vec![Vec::new(); blocks];
            for (e, &l) in labels.iter().enumerate() {
                parts[l].push(e);
            }
            visit(&parts);
            return;
        }
        for l in 0..=blocks {
            labels.push(l);
            rec(i + 1, m, labels, blocks.max(l + 1), visit);
            labels.pop();
        }
    }
    rec(0, m, &mut Vec::new(), 0, &mut visit);
}

#[test]
fn set_partition_counts_are_bell_numbers() {
    for (m, bell) in [(1, 1), (3, 5), (5, 52), (8, 4140)] {
        let mut n = 0;
        set_partitions(m, |_| n += 1);
        assert_eq!(n, bell);
    }
}

#[test]
fn lifted_connectivity_holds_on_fixtures() {
    for f in fixtures::all().unwrap() {
        let cov = CoveringGraph::expand(&f.graph).unwrap();
        let mut last = true;
        for n in 1..=7 {
            let mixed = is_n_mixed_connected(&cov, n).unwrap().connected;
            // Monotone in n.
            assert!(last || !mixed, "{} n = {n}", f.name);
            last = mixed;
            if mixed {
                assert!(is_n_gain_mixed_connected(&f.graph, n).unwrap().0, "{} n = {n}", f.name);
            }
        }
    }
}

#[test]
fn fixture_blocks_separate_at_their_cost() {
    for name in ["fig1b", "fig2b", "fig2a"] {
        let f = fixtures::load(name).unwrap();
        let cov = CoveringGraph::expand(&f.graph).unwrap();
        for b in k_blocks(&f.graph, 6) {
            let sep = symmetric_separation(&f.graph, &b).unwrap();
            assert_eq!(2 * sep.u_h.len() + sep.d_h.len(), b.k, "{name}");
            assert!(common::separates(&cov, &sep.u_h, &sep.d_h, &sep.component), "{name}");
        }
    }
}

#[test]
fn six_fold_star_has_no_small_blocks() {
    let f = fixtures::load("fig2b").unwrap();
    assert!(find_k_block(&f.graph, 5).is_none());
}

#[test]
fn two_fold_ring_blocks() {
    // A 5-mixed-connected covering rules out blocks up to cost 4; cutting one
    // K_5 block off along its attaching edges costs 5.
    let f = fixtures::load("fig2a").unwrap();
    assert!(find_k_block(&f.graph, 4).is_none());
    let b = find_k_block(&f.graph, 5).expect("a 5-block");
    assert_eq!((b.k, b.vertices.len(), b.u.len()), (5, 5, 0));
}

#[test]
fn dihedral_ring_is_not_six_gain_mixed_connected() {
    let f = fixtures::load("fig3").unwrap();
    let (ok, block) = is_n_gain_mixed_connected(&f.graph, 6).unwrap();
    assert!(!ok);
    assert!(block.unwrap().k <= 5);
}

#[test]
fn loopless_k6_ring_is_not_seven_gain_mixed_connected() {
    let f = fixtures::load("fig4").unwrap();
    let (gl, _) = f.graph.without_loops();
    assert!(!is_n_gain_mixed_connected(&gl, 7).unwrap().0);
}

#[test]
fn balanced_edge_is_a_zero_block() {
    let z2 = GroupSpec::cyclic(2).unwrap();
    let mut g = GainGraph::new(z2, ["a", "b"]).unwrap();
    g.add_edge(0, 1, z2.identity()).unwrap();
    let b = find_k_block(&g, 3).unwrap();
    assert_eq!((b.k, b.u.len(), b.d.len(), b.whole), (0, 0, 0, true));
    assert!(!is_n_gain_mixed_connected(&g, 1).unwrap().0);
    let sep = symmetric_separation(&g, &b).unwrap();
    assert!(sep.u_h.is_empty() && sep.d_h.is_empty());
    let cov = CoveringGraph::expand(&g).unwrap();
    assert!(common::separates(&cov, &sep.u_h, &sep.d_h, &sep.component));
}

#[test]
fn whole_star_cover_is_everything() {
    let f = fixtures::load("fig2b").unwrap();
    let sc = cover_from_partition(&f.graph, &[f.graph.edge_ids()]).unwrap();
    assert_eq!(sc.sets.len(), 1);
    assert_eq!(sc.sets[0].group_order, 6);
    assert_eq!(sc.sets[0].vertices, (0..42).collect::<Vec<_>>());
}

#[test]
fn star_cover_inequality_fails_without_two_edge_connectivity() {
    let f = fixtures::load("fig2b").unwrap();
    let parts = f.partition("witness").unwrap();
    let r = check_cover_lower_bound(&f.graph, parts, CoverVariant::Forced).unwrap();
    assert!(!r.hypotheses_hold);
    assert!(!r.holds);
    // Six 6-cycles count 9 each, six balanced edges give 12 pairs of 1.
    assert_eq!((r.lhs, r.rhs), (6 * 9 + 6 * 6, 2 * 42 + 6 * 3));
}

#[test]
fn bridge_free_follows_from_six_mixed_connectivity_for_small_groups() {
    let mut rng = common::rng(0xb41d);
    let groups = [
        GroupSpec::cyclic(2).unwrap(),
        GroupSpec::cyclic(3).unwrap(),
        GroupSpec::cyclic(4).unwrap(),
        GroupSpec::cyclic(5).unwrap(),
        GroupSpec::reflection(),
        GroupSpec::dihedral(2).unwrap(),
    ];
    let mut seen = 0;
    for i in 0..400 {
        let n = rng.random_range(2..=4);
        let g = common::random_graph(&mut rng, groups[i % groups.len()], n, 12);
        let cov = CoveringGraph::expand(&g).unwrap();
        if is_n_mixed_connected(&cov, 6).unwrap().connected {
            seen += 1;
            assert!(edge_connectivity(&g).is_none_or(|l| l >= 2), "{}", g.to_json());
        }
    }
    for f in fixtures::all().unwrap() {
        let cov = CoveringGraph::expand(&f.graph).unwrap();
        if f.graph.group().order() < 6 && is_n_mixed_connected(&cov, 6).unwrap().connected {
            seen += 1;
            assert!(edge_connectivity(&f.graph).is_none_or(|l| l >= 2), "{}", f.name);
        }
    }
    assert!(seen > 0);
}

/// Small graphs over groups where at most eight edges can be
/// 6-gain-mixed-connected, with every partition of the edge set.
#[test]
fn forced_cover_inequality_under_its_hypotheses() {
    let mut rng = common::rng(0xc0e5);
    let groups = [
        GroupSpec::cyclic(4).unwrap(),
        GroupSpec::cyclic(5).unwrap(),
        GroupSpec::cyclic(6).unwrap(),
        GroupSpec::cyclic(7).unwrap(),
        GroupSpec::dihedral(3).unwrap(),
        GroupSpec::dihedral(4).unwrap(),
    ];
    let (mut graphs, mut covers) = (0, 0);
    let mut attempts = 0;
    while graphs < 24 && attempts < 20_000 {
        attempts += 1;
        let gr = groups[attempts % groups.len()];
        let n = rng.random_range(1..=3);
        let g = common::random_graph(&mut rng, gr, n, 8);
        if g.edge_count() == 0 {
            continue;
        }
        let bridgeless = gr.order() < 6 || edge_connectivity(&g).is_none_or(|l| l >= 2);
        if !bridgeless || !is_n_gain_mixed_connected(&g, 6).unwrap().0 {
            continue;
        }
        graphs += 1;
        set_partitions(g.edge_count(), |parts| {
            let sc = cover_from_partition(&g, parts).unwrap();
            if sc.sets.iter().any(|x| x.vertices.len() == sc.covering_vertices) {
                return;
            }
            let (lhs, rhs) = (sc.lhs(), sc.rhs(CoverVariant::Forced));
            assert!(lhs >= rhs, "{lhs} < {rhs} for {parts:?} on {}", g.to_json());
            covers += 1;
        });
    }
    assert!(graphs >= 12, "only {graphs} graphs met the hypotheses");
    assert!(covers > 1000);
}

/// Dense two-fold graphs whose loopless part is 7-gain-mixed-connected, with
/// random partitions.
#[test]
fn sign_cover_inequality_under_its_hypotheses() {
    let mut rng = common::rng(0x5164);
    let (mut graphs, mut checked) = (0, 0);
    for i in 0..8 {
        let gr = if i % 2 == 0 { GroupSpec::cyclic(2).unwrap() } else { GroupSpec::reflection() };
        let n = 5;
        let mut g = GainGraph::new(gr, (0..n).map(|v| format!("v{v}"))).unwrap();
        for a in 0..n {
            for b in a + 1..n {
                for x in 0..2 {
                    if rng.random_bool(0.95) {
                        g.add_edge(a, b, gr.element_at(x)).unwrap();
                    }
                }
            }
            if rng.random_bool(0.5) {
                g.add_edge(a, a, gr.element_at(1)).unwrap();
            }
        }
        let m = g.edge_count();
        let (gl, _) = g.without_loops();
        if !is_n_gain_mixed_connected(&gl, 7).unwrap().0 {
            continue;
        }
        graphs += 1;
        for _ in 0..300 {
            let blocks = rng.random_range(1..=m);
            let mut parts = vec![Vec::new(); blocks];
            for e in 0..m {
                parts[rng.random_range(0..blocks)].push(e);
            }
            parts.retain(|p: &Vec<EdgeId>| !p.is_empty());
            let Some(r) = check_cover_lower_bound_fast(&g, &parts) else { continue };
            checked += 1;
            assert!(r.0 >= r.1, "{} < {} for {parts:?} on {}", r.0, r.1, g.to_json());
        }
    }
    assert!(graphs >= 2, "only {graphs} graphs met the hypotheses");
    assert!(checked >= 200, "only {checked} partitions checked");
}

/// Both sides of the sign-character inequality without re-checking the
/// connectivity hypotheses. `None` when some cover set is every vertex.
fn check_cover_lower_bound_fast(g: &GainGraph, parts: &[Vec<EdgeId>]) -> Option<(i64, i64)> {
    let (gl, kept) = g.without_loops();
    let parts: Vec<Vec<EdgeId>> = parts
        .iter()
        .map(|p| p.iter().filter_map(|e| kept.iter().position(|k| k == e)).collect::<Vec<_>>())
        .filter(|p| !p.is_empty())
        .collect();
    let sc = cover_from_partition(&gl, &parts).unwrap();
    if sc.sets.iter().any(|x| x.vertices.len() == sc.covering_vertices) {
        return None;
    }
    Some((sc.lhs(), sc.rhs(CoverVariant::Iota1)))
}

#[test]
fn a_cover_set_on_every_vertex_can_break_the_inequality() {
    // Three loops over Z_7 lift to K_7, which is 6-mixed-connected, yet the
    // single part gives one set on all seven vertices: 11 < 14 + 4.
    let z7 = GroupSpec::cyclic(7).unwrap();
    let mut g = GainGraph::new(z7, ["v"]).unwrap();
    for j in [1, 5, 3] {
        g.add_edge(0, 0, z7.rotation(j)).unwrap();
    }
    assert!(is_n_gain_mixed_connected(&g, 6).unwrap().0);
    let r = check_cover_lower_bound(&g, &[g.edge_ids()], CoverVariant::Forced).unwrap();
    assert_eq!((r.lhs, r.rhs), (11, 18));
    assert!(!r.holds && !r.hypotheses_hold);
}

#[test]
fn nu_dominates_rho_and_agrees_on_balanced_sets() {
    let mut rng = common::rng(0x2a);
    let z5 = GroupSpec::cyclic(5).unwrap();
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let g = common::random_graph(&mut rng, z5, n, 7);
        let ids = g.edge_ids();
        if ids.is_empty() {
            continue;
        }
        // Every non-empty subset of a small edge set.
        for mask in 1u32..(1 << ids.len().min(7)) {
            let x: Vec<EdgeId> = (0..ids.len().min(7)).filter(|&i| mask >> i & 1 == 1).collect();
            let rho = count(CountFamily::Rho, &g, &x).unwrap();
            for t in 0..5 {
                let nu = count(CountFamily::Nu(t), &g, &x).unwrap();
                assert!(nu >= rho);
                if g.is_balanced(&x) {
                    assert_eq!(nu, rho);
                    assert_eq!(rho, 2 * g.vertices_of(&x).len() as i64 - 3);
                }
            }
        }
    }
}

#[test]
fn hexagon_with_two_triangles_is_forced_rigid() {
    let z6 = GroupSpec::cyclic(6).unwrap();
    let mut g = GainGraph::new(z6, ["v"]).unwrap();
    g.add_edge(0, 0, z6.rotation(1)).unwrap();
    g.add_edge(0, 0, z6.rotation(2)).unwrap();
    assert_eq!(count(CountFamily::Rho, &g, &[0, 1]).unwrap(), 1);
    assert!(is_forced_rigid_combinatorial(&g).unwrap().rigid);
    assert!(motion_space(&g, 0, 1).unwrap().rigid);
}

#[test]
fn full_rigidity_examples() {
    let c1 = GroupSpec::cyclic(1).unwrap();
    let mut k4 = GainGraph::new(c1, ["a", "b", "c", "d"]).unwrap();
    for a in 0..4 {
        for b in a + 1..4 {
            k4.add_edge(a, b, c1.identity()).unwrap();
        }
    }
    assert!(is_rigid_numeric(&k4, 1).unwrap().rigid);

    let star = fixtures::load("fig2b").unwrap();
    let r = is_rigid_numeric(&star.graph, 1).unwrap();
    assert!(!r.characters[0].rigid);
    assert!(!r.rigid);
    assert_eq!(r.characters.iter().map(|c| c.rank).sum::<usize>(), r.rank);

    let ring = fixtures::load("fig4").unwrap();
    assert!(!is_rigid_numeric(&ring.graph, 1).unwrap().rigid);
}
