//! Covering graphs of gain graphs. The covering vertex `(γ, v)` is stored at
//! index `index_of(γ) * |V| + v`, and `Γ` acts by left multiplication on the
//! first coordinate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain_graph::{EdgeId, GainGraph, VertexId};
use crate::group::{GroupElement, GroupSpec};

pub type CoverVertex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringGraph {
    group: GroupSpec,
    names: Vec<String>,
    edges: Vec<(CoverVertex, CoverVertex)>,
    source: Vec<EdgeId>,
    adj: Vec<Vec<(CoverVertex, usize)>>,
}

/// Covering edges swapped onto themselves by a group element, and the
/// quotient loops they come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedEdgeReport {
    pub fixed_edges: Vec<usize>,
    pub quotient_loops_of_order_2: Vec<EdgeId>,
}

/// JSON form of a covering graph. `vertices` lists the covering vertex
/// names in index order and is ignored on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoveringRepr {
    group: GroupSpec,
    quotient_vertices: Vec<String>,
    #[serde(default)]
    vertices: Vec<String>,
    edges: Vec<(CoverVertex, CoverVertex)>,
}

impl CoveringGraph {
    pub fn to_json(&self) -> String {
        let repr = CoveringRepr {
            group: self.group,
            quotient_vertices: self.names.clone(),
            vertices: (0..self.vertex_count()).map(|x| self.vertex_name(x)).collect(),
            edges: self.edges.clone(),
        };
        serde_json::to_string_pretty(&repr).expect("covering graphs serialize")
    }

    pub fn from_json(text: &str) -> Result<CoveringGraph> {
        let repr: CoveringRepr = serde_json::from_str(text)?;
        Self::from_edges(repr.group, repr.quotient_vertices, &repr.edges)
    }

    /// Builds the covering graph: each quotient edge `(i, j, α)` gives the
    /// edges `{(γ, i), (γα, j)}` for all `γ`, merged when they coincide.
    pub fn expand(g: &GainGraph) -> Result<CoveringGraph> {
        let gr = *g.group();
        let n = g.vertex_count();
        let mut seen: HashMap<(CoverVertex, CoverVertex), EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        let mut source = Vec::new();
        for e in g.edges() {
            let before = edges.len();
            for gamma in gr.elements() {
                let x = gr.index_of(gamma) * n + e.tail;
                let y = gr.index_of(gr.op(gamma, e.gain)) * n + e.head;
                if x == y {
                    return Err(Error::InvalidCovering(format!("edge {} lifts to a loop", e.id)));
                }
                let key = (x.min(y), x.max(y));
                match seen.get(&key) {
                    Some(&other) if other != e.id => {
                        return Err(Error::InvalidCovering(format!(
                            "edges {other} and {} lift to the same covering edge",
                            e.id
                        )))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, e.id);
                        edges.push(key);
                        source.push(e.id);
                    }
                }
            }
            let orbit = edges.len() - before;
            let expected = if e.is_loop() && gr.order_of(e.gain) == 2 {
                gr.order() / 2
            } else {
                gr.order()
            };
            debug_assert_eq!(orbit, expected, "orbit size of edge {}", e.id);
        }
        Ok(Self::assemble(gr, g.vertex_names().to_vec(), edges, source))
    }

    fn assemble(
        group: GroupSpec,
        names: Vec<String>,
        edges: Vec<(CoverVertex, CoverVertex)>,
        source: Vec<EdgeId>,
    ) -> CoveringGraph {
        let total = group.order() * names.len();
        let mut adj = vec![Vec::new(); total];
        for (i, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        CoveringGraph {
            group,
            names,
            edges,
            source,
            adj,
        }
    }

    /// A covering graph given directly by its edge set. The edge set must be
    /// simple and closed under the action; the source of each edge is the
    /// index of its orbit in order of first appearance.
    pub fn from_edges(
        group: GroupSpec,
        quotient_vertices: Vec<String>,
        edges: &[(CoverVertex, CoverVertex)],
    ) -> Result<CoveringGraph> {
        let n = quotient_vertices.len();
        let total = group.order() * n;
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= total || b >= total {
                return Err(Error::InvalidCovering(format!("vertex index out of range in edge ({a}, {b})")));
            }
            if a == b {
                return Err(Error::InvalidCovering(format!("loop at covering vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidCovering(format!("repeated edge ({a}, {b})")));
            }
        }
        let act = |gamma: GroupElement, x: CoverVertex| {
            let h = group.element_at(x / n);
            group.index_of(group.op(gamma, h)) * n + x % n
        };
        let mut orbit_of: BTreeMap<(CoverVertex, CoverVertex), usize> = BTreeMap::new();
        let mut out_edges = Vec::new();
        let mut source = Vec::new();
        let mut orbits = 0;
        for &(a, b) in edges {
            let key = (a.min(b), a.max(b));
            if orbit_of.contains_key(&key) {
                continue;
            }
            let orbit_id = orbits;
            orbits += 1;
            for gamma in group.elements() {
                let (x, y) = (act(gamma, a), act(gamma, b));
                let k = (x.min(y), x.max(y));
                if !set.contains(&k) {
                    return Err(Error::InvalidCovering(format!(
                        "edge set is not invariant under the action of {gamma}"
                    )));
                }
                if let std::collections::btree_map::Entry::Vacant(v) = orbit_of.entry(k) {
                    v.insert(orbit_id);
                    out_edges.push(k);
                    source.push(orbit_id);
                }
            }
        }
        Ok(Self::assemble(group, quotient_vertices, out_edges, source))
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn quotient_vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(CoverVertex, CoverVertex)] {
        &self.edges
    }

    /// Neighbours of `x` with the id of the joining edge.
    pub fn neighbors(&self, x: CoverVertex) -> &[(CoverVertex, usize)] {
        &self.adj[x]
    }

    pub fn degree(&self, x: CoverVertex) -> usize {
        self.adj[x].len()
    }

    pub fn vertex(&self, gamma: GroupElement, v: VertexId) -> CoverVertex {
        self.group.index_of(gamma) * self.names.len() + v
    }

    /// `(γ, v)` for a covering vertex.
    pub fn label(&self, x: CoverVertex) -> (GroupElement, VertexId) {
        let n = self.names.len();
        (self.group.element_at(x / n), x % n)
    }

    pub fn vertex_name(&self, x: CoverVertex) -> String {
        let (gamma, v) = self.label(x);
        if gamma.is_identity() {
            self.names[v].clone()
        } else {
            format!("{gamma}.{}", self.names[v])
        }
    }

    /// `γ · x`.
    pub fn act(&self, gamma: GroupElement, x: CoverVertex) -> CoverVertex {
        let (h, v) = self.label(x);
        self.vertex(self.group.op(gamma, h), v)
    }

    /// The covering map on vertices.
    pub fn project_vertex(&self, x: CoverVertex) -> VertexId {
        x % self.names.len()
    }

    /// The covering map on edges: the quotient edge (or orbit) id.
    pub fn project_edge(&self, e: usize) -> EdgeId {
        self.source[e]
    }

    /// Covering edges lying over quotient edge `id`.
    pub fn fibre(&self, id: EdgeId) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.source[e] == id).collect()
    }

    pub fn edge_index(&self, a: CoverVertex, b: CoverVertex) -> Option<usize> {
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Covering edges `{x, y}` with `γx = y` and `γy = x` for some `γ ≠ id`.
    pub fn fixed_edges(&self) -> FixedEdgeReport {
        let gr = &self.group;
        let mut fixed = Vec::new();
        let mut loops = BTreeSet::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let (ga, va) = self.label(a);
            let (gb, vb) = self.label(b);
            if va != vb {
                continue;
            }
            let gamma = gr.op(gb, gr.inv(ga));
            if !gamma.is_identity() && self.act(gamma, b) == a {
                fixed.push(i);
                loops.insert(self.source[i]);
            }
        }
        FixedEdgeReport {
            fixed_edges: fixed,
            quotient_loops_of_order_2: loops.into_iter().collect(),
        }
    }

    /// The covering graph with the given edges removed, keeping edge sources.
    pub fn without_edges(&self, remove: &[usize]) -> CoveringGraph {
        let drop: BTreeSet<usize> = remove.iter().copied().collect();
        let (edges, source) = self
            .edges
            .iter()
            .zip(&self.source)
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, (&e, &s))| (e, s))
            .unzip();
        Self::assemble(self.group, self.names.clone(), edges, source)
    }

    /// Picks `(id, v)` as the representative of each vertex orbit and reads
    /// off one quotient edge per edge orbit, oriented from the smaller to the
    /// larger quotient vertex.
    pub fn quotient_of(&self) -> Result<GainGraph> {
        let gr = &self.group;
        let mut g = GainGraph::new(*gr, self.names.iter().cloned())?;
        let mut reps: BTreeMap<usize, (VertexId, VertexId, GroupElement)> = BTreeMap::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let (ga, va) = self.label(a);
            let (gb, vb) = self.label(b);
            let fwd = (va, vb, gr.op(gr.inv(ga), gb));
            let rev = (vb, va, gr.op(gr.inv(gb), ga));
            let pick = if (fwd.0, fwd.1, gr.index_of(fwd.2)) <= (rev.0, rev.1, gr.index_of(rev.2)) {
                fwd
            } else {
                rev
            };
            let src = self.source[i];
            match reps.get(&src) {
                None => {
                    reps.insert(src, pick);
                }
                Some(&old) => {
                    if (old.0, old.1, gr.index_of(old.2)) > (pick.0, pick.1, gr.index_of(pick.2)) {
                        reps.insert(src, pick);
                    }
                }
            }
        }
        for (_, (t, h, x)) in reps {
            g.add_edge(t, h, x)
                .map_err(|e| Error::InvalidCovering(format!("orbit does not give a valid quotient edge: {e}")))?;
        }
        Ok(g)
    }

    /// Graphviz rendering; edge labels are quotient edge ids.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph covering {\n");
        for x in 0..self.vertex_count() {
            let _ = writeln!(out, "  {x} [label=\"{}\"];", self.vertex_name(x));
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "  {a} -- {b} [label=\"{}\"];", self.source[i]);
        }
        out.push_str("}\n");
        out
    }
}

/// `G̃ − Ẽ_ℓ` and `G_ℓ`: the covering graph without its fixed edges and the
/// quotient without its loops.
pub fn strip_fixed(cov: &CoveringGraph, g: &GainGraph) -> (CoveringGraph, GainGraph) {
    let report = cov.fixed_edges();
    (cov.without_edges(&report.fixed_edges), g.without_loops().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let gr = GroupSpec::cyclic(3).unwrap();
        let mut g = GainGraph::new(gr, ["a", "b"]).unwrap();
        g.add_edge(0, 1, gr.rotation(1)).unwrap();
        g.add_edge(0, 0, gr.rotation(1)).unwrap();
        let cov = CoveringGraph::expand(&g).unwrap();
        let back = CoveringGraph::from_json(&cov.to_json()).unwrap();
        assert_eq!(back.edges(), cov.edges());
        assert_eq!(back.quotient_of().unwrap().edge_count(), 2);
        assert!(CoveringGraph::from_json(r#"{"group":{"kind":"cyclic","k":2},"quotient_vertices":["a"],"edges":[[0,1],[0,1]]}"#).is_err());
    }
    use crate::gain_graph::GainGraph;

    fn fig1b() -> GainGraph {
        let mut g = GainGraph::new(GroupSpec::dihedral(3).unwrap(), ["1", "2"]).unwrap();
        g.add_edge_named("2", "1", "id").unwrap();
        g.add_edge_named("2", "1", "s").unwrap();
        g.add_edge_named("1", "1", "r").unwrap();
        g.add_edge_named("1", "1", "s*r^2").unwrap();
        g
    }

    #[test]
    fn triangle_from_loop() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let mut g = GainGraph::new(z3, ["v"]).unwrap();
        g.add_edge(0, 0, z3.rotation(1)).unwrap();
        let c = CoveringGraph::expand(&g).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edge_count(), 3);
        assert!((0..3).all(|x| c.degree(x) == 2));
        let q = c.quotient_of().unwrap();
        assert_eq!(q.edge_count(), 1);
        assert!(q.edges()[0].is_loop());
    }

    #[test]
    fn fig1_counts() {
        let g = fig1b();
        let c = CoveringGraph::expand(&g).unwrap();
        assert_eq!(c.vertex_count(), 12);
        // 6 + 6 for the parallel pair, 6 for the rotation loop, 3 for the
        // reflection loop.
        assert_eq!(c.edge_count(), 21);
        assert_eq!(c.fixed_edges().quotient_loops_of_order_2, vec![3]);
    }

    #[test]
    fn reflection_loop_is_fixed() {
        let cs = GroupSpec::reflection();
        let mut g = GainGraph::new(cs, ["v"]).unwrap();
        g.add_edge_named("v", "v", "s").unwrap();
        let c = CoveringGraph::expand(&g).unwrap();
        assert_eq!(c.edges(), &[(0, 1)]);
        assert_eq!(c.fixed_edges().fixed_edges, vec![0]);
        let (cl, gl) = strip_fixed(&c, &g);
        assert_eq!(cl.edge_count(), 0);
        assert_eq!(gl.edge_count(), 0);
    }

    #[test]
    fn matching_edges_are_fixed() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let n = 4;
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut g = GainGraph::new(z2, names).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j, z2.identity()).unwrap();
            }
            g.add_edge(i, i, z2.rotation(1)).unwrap();
        }
        let c = CoveringGraph::expand(&g).unwrap();
        let r = c.fixed_edges();
        assert_eq!(r.fixed_edges.len(), n);
        assert_eq!(r.quotient_loops_of_order_2.len(), n);
        let (cl, gl) = strip_fixed(&c, &g);
        assert_eq!(cl.edge_count(), 2 * 6);
        assert_eq!(gl.edge_count(), 6);
    }

    #[test]
    fn action_is_free_and_commutes() {
        let g = fig1b();
        let c = CoveringGraph::expand(&g).unwrap();
        let gr = *c.group();
        for x in 0..c.vertex_count() {
            for gamma in gr.elements() {
                let y = c.act(gamma, x);
                assert_eq!(c.project_vertex(y), c.project_vertex(x));
                if !gamma.is_identity() {
                    assert_ne!(y, x);
                }
            }
        }
        for (i, &(a, b)) in c.edges().iter().enumerate() {
            for gamma in gr.elements() {
                let e = c.edge_index(c.act(gamma, a), c.act(gamma, b)).expect("image is an edge");
                assert_eq!(c.project_edge(e), c.project_edge(i));
            }
        }
    }

    #[test]
    fn rejects_non_invariant_edge_sets() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert!(CoveringGraph::from_edges(z2, vec!["a".into(), "b".into()], &[(0, 1)]).is_err());
        let ok = CoveringGraph::from_edges(z2, vec!["a".into(), "b".into()], &[(0, 1), (2, 3)]).unwrap();
        let q = ok.quotient_of().unwrap();
        assert_eq!(q.edge_count(), 1);
        assert!(q.edges()[0].gain.is_identity());
        assert!(CoveringGraph::from_edges(z2, vec!["a".into()], &[(0, 0)]).is_err());
    }

    #[test]
    fn dot_export() {
        let c = CoveringGraph::expand(&fig1b()).unwrap();
        let dot = c.to_dot();
        assert!(dot.starts_with("graph covering {"));
        assert_eq!(dot.matches(" -- ").count(), 21);
    }
}
