#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symrig::covering::CoverVertex;
use symrig::{CoveringGraph, EdgeId, GainGraph, GroupSpec, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A gain graph on `n` vertices with up to `m` edges. Edges equivalent to an
/// existing one are skipped, so the result may have fewer.
pub fn random_graph(rng: &mut ChaCha8Rng, group: GroupSpec, n: usize, m: usize) -> GainGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut g = GainGraph::new(group, names).unwrap();
    let order = group.order();
    for _ in 0..m {
        let t = rng.random_range(0..n);
        let h = rng.random_range(0..n);
        let gain = group.element_at(rng.random_range(0..order));
        let _ = g.add_edge(t, h, gain);
    }
    g
}

pub fn small_groups() -> Vec<GroupSpec> {
    vec![
        GroupSpec::cyclic(2).unwrap(),
        GroupSpec::cyclic(3).unwrap(),
        GroupSpec::cyclic(5).unwrap(),
        GroupSpec::reflection(),
    ]
}

pub fn groups_up_to_six() -> Vec<GroupSpec> {
    vec![
        GroupSpec::cyclic(1).unwrap(),
        GroupSpec::cyclic(2).unwrap(),
        GroupSpec::cyclic(3).unwrap(),
        GroupSpec::cyclic(4).unwrap(),
        GroupSpec::cyclic(5).unwrap(),
        GroupSpec::cyclic(6).unwrap(),
        GroupSpec::reflection(),
        GroupSpec::dihedral(2).unwrap(),
        GroupSpec::dihedral(3).unwrap(),
    ]
}

/// Least `2|W| + |F|` disconnecting the covering graph, by trying every
/// vertex set `W` and every bipartition of the rest. `None` if nothing up to
/// `max_cost` disconnects it.
pub fn brute_min_mixed_cut(cov: &CoveringGraph, max_cost: usize) -> Option<usize> {
    let n = cov.vertex_count();
    assert!(n <= 16, "brute force is for small coverings");
    let mut best: Option<usize> = None;
    for wmask in 0u32..(1 << n) {
        let w = wmask.count_ones() as usize;
        if 2 * w > max_cost {
            continue;
        }
        let dead: Vec<bool> = (0..n).map(|x| wmask >> x & 1 == 1).collect();
        let alive: Vec<usize> = (0..n).filter(|&x| !dead[x]).collect();
        if alive.len() < 2 {
            continue;
        }
        // Edge cuts of G - W: every bipartition with the first alive vertex on
        // side A.
        let rest = &alive[1..];
        for side in 0u32..(1 << rest.len()) {
            if side == (1 << rest.len()) - 1 {
                continue;
            }
            let mut in_a = vec![false; n];
            in_a[alive[0]] = true;
            for (i, &x) in rest.iter().enumerate() {
                in_a[x] = side >> i & 1 == 1;
            }
            let f = cov
                .edges()
                .iter()
                .filter(|&&(a, b)| !dead[a] && !dead[b] && in_a[a] != in_a[b])
                .count();
            let cost = 2 * w + f;
            if cost <= max_cost && best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
        }
    }
    best
}

/// Least `k` of a block, by trying every `U`, `D` with `2|U| + |D| <= k_max`
/// and every component `H` of `G - U - D`, with the lift computed in the
/// covering graph itself.
pub fn brute_min_block(g: &GainGraph, k_max: usize) -> Option<usize> {
    let gr = *g.group();
    let cov = CoveringGraph::expand(g).unwrap();
    let n = g.vertex_count();
    let m = g.edge_count();
    assert!(n <= 6 && m <= 12);
    let mut best: Option<usize> = None;
    for umask in 0u32..(1 << n) {
        let u: Vec<VertexId> = (0..n).filter(|&v| umask >> v & 1 == 1).collect();
        if 2 * u.len() > k_max || u.len() == n {
            continue;
        }
        for dmask in 0u32..(1 << m) {
            let d: Vec<EdgeId> = (0..m).filter(|&e| dmask >> e & 1 == 1).collect();
            if 2 * u.len() + d.len() > k_max {
                continue;
            }
            let kept: Vec<EdgeId> = (0..m)
                .filter(|&e| {
                    let edge = g.edges()[e];
                    dmask >> e & 1 == 0 && !u.contains(&edge.tail) && !u.contains(&edge.head)
                })
                .collect();
            let alive: Vec<VertexId> = (0..n).filter(|v| !u.contains(v)).collect();
            for comp in components(g, &alive, &kept) {
                let h_edges: Vec<EdgeId> = kept
                    .iter()
                    .copied()
                    .filter(|&e| comp.contains(&g.edges()[e].tail))
                    .collect();
                let whole = comp.len() == alive.len() && h_edges.len() == kept.len();
                // Component of (id, root) in the lift of H.
                let root = comp[0];
                let lifted: BTreeSet<usize> = h_edges.iter().flat_map(|&e| cov.fibre(e)).collect();
                let start = cov.vertex(gr.identity(), root);
                let mut c = BTreeSet::from([start]);
                let mut stack = vec![start];
                while let Some(x) = stack.pop() {
                    for &(y, e) in cov.neighbors(x) {
                        if lifted.contains(&e) && c.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                let kappa = c.iter().filter(|&&x| cov.project_vertex(x) == root).count();
                if whole && kappa == gr.order() {
                    continue;
                }
                let mut k = 0;
                for &v in &u {
                    let over: BTreeSet<CoverVertex> = c
                        .iter()
                        .flat_map(|&x| cov.neighbors(x).iter().map(|&(y, _)| y))
                        .filter(|&y| cov.project_vertex(y) == v)
                        .collect();
                    k += 2 * over.len();
                }
                for &e in &d {
                    k += cov
                        .fibre(e)
                        .iter()
                        .filter(|&&i| {
                            let (a, b) = cov.edges()[i];
                            c.contains(&a) || c.contains(&b)
                        })
                        .count();
                }
                if k <= k_max && best.is_none_or(|b| k < b) {
                    best = Some(k);
                }
            }
        }
    }
    best
}

fn components(g: &GainGraph, alive: &[VertexId], edges: &[EdgeId]) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for &s in alive {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &e in edges {
                let edge = g.edges()[e];
                if edge.touches(v) {
                    let w = edge.other(v);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Whether removing `u_h` and `d_h` cuts `component` off from the rest of the
/// covering graph, with something left on the other side.
pub fn separates(cov: &CoveringGraph, u_h: &[CoverVertex], d_h: &[(CoverVertex, CoverVertex)], component: &[CoverVertex]) -> bool {
    let inside: BTreeSet<CoverVertex> = component.iter().copied().collect();
    let cut: BTreeSet<CoverVertex> = u_h.iter().copied().collect();
    let removed: BTreeSet<(CoverVertex, CoverVertex)> = d_h.iter().copied().collect();
    if inside.iter().any(|x| cut.contains(x)) {
        return false;
    }
    let outside = (0..cov.vertex_count()).any(|x| !inside.contains(&x) && !cut.contains(&x));
    let leaks = cov.edges().iter().any(|&(a, b)| {
        let key = (a.min(b), a.max(b));
        let crosses = inside.contains(&a) != inside.contains(&b);
        crosses && !cut.contains(&a) && !cut.contains(&b) && !removed.contains(&key)
    });
    outside && !leaks
}
