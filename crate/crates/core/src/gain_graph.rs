//! Quotient gain graphs: directed multigraphs whose edges carry elements of a
//! point group. Loops and parallel edges are allowed as long as the covering
//! graph they describe stays simple.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Subgroup, SubgroupClass};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Largest vertex degree for which near-balance is decided by enumerating
/// bipartitions.
pub const NEAR_BALANCE_DEGREE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub gain: GroupElement,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.tail == v || self.head == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainGraph {
    group: GroupSpec,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    keys: HashSet<(VertexId, VertexId, GroupElement)>,
}

/// One traversal step of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Forward(EdgeId),
    Backward(EdgeId),
}

/// A walk given by its start vertex and the edges it traverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: VertexId,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceKind {
    Balanced,
    UnbalancedCyclic,
    Other,
}

impl BalanceKind {
    /// The β correction: 0, 2 or 3.
    pub fn beta(self) -> i64 {
        match self {
            BalanceKind::Balanced => 0,
            BalanceKind::UnbalancedCyclic => 2,
            BalanceKind::Other => 3,
        }
    }

    fn of(class: SubgroupClass) -> Self {
        match class {
            SubgroupClass::Trivial => BalanceKind::Balanced,
            SubgroupClass::CyclicNontrivial => BalanceKind::UnbalancedCyclic,
            SubgroupClass::Dihedral => BalanceKind::Other,
        }
    }
}

/// A connected component of an edge subset together with the subgroup its
/// closed walks at `root` generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentBalance {
    pub root: VertexId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub subgroup: Subgroup,
    pub kind: BalanceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceClass {
    pub kind: BalanceKind,
    pub components: Vec<ComponentBalance>,
}

impl BalanceClass {
    pub fn beta(&self) -> i64 {
        self.kind.beta()
    }

    pub fn is_balanced(&self) -> bool {
        self.kind == BalanceKind::Balanced
    }
}

/// Spanning-forest data of an edge subset. `potential[v]` is the gain of the
/// tree path from the component root to `v`, so switching by it turns every
/// tree edge into an identity edge.
#[derive(Debug, Clone)]
pub struct Span {
    pub comp_of: Vec<Option<usize>>,
    pub potential: Vec<GroupElement>,
    pub roots: Vec<VertexId>,
    pub comp_vertices: Vec<Vec<VertexId>>,
    pub comp_edges: Vec<Vec<EdgeId>>,
    /// Gains `g_i α g_j^-1` of the non-tree edges, per component.
    pub cycle_gains: Vec<Vec<GroupElement>>,
}

/// A vertex split: edges in `first` stay at the first copy, edges in
/// `second` move to the second copy, loops become arcs between the copies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub vertex: VertexId,
    pub first: Vec<EdgeId>,
    pub second: Vec<EdgeId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EdgeRepr {
    tail: String,
    head: String,
    gain: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GainGraphRepr {
    group: GroupSpec,
    vertices: Vec<String>,
    edges: Vec<EdgeRepr>,
}

impl Serialize for GainGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GainGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GainGraphRepr::deserialize(d)?;
        GainGraph::from_repr(repr).map_err(serde::de::Error::custom)
    }
}

impl GainGraph {
    pub fn new<I, S>(group: GroupSpec, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = GainGraph {
            group,
            names: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            keys: HashSet::new(),
        };
        for name in vertices {
            g.add_vertex(name)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::InvalidGraph(format!("duplicate vertex `{name}`")));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Adds the edge `tail -> head` with the given gain.
    ///
    /// Rejects identity loops and any edge equivalent to an existing one,
    /// where `(i, j, α)` and `(j, i, α^-1)` count as the same edge.
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, gain: GroupElement) -> Result<EdgeId> {
        for v in [tail, head] {
            if v >= self.names.len() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        if !self.group.contains(gain) {
            return Err(Error::GroupMismatch(format!("gain {gain} is not in {}", self.group)));
        }
        if tail == head && gain.is_identity() {
            return Err(Error::InvalidGraph(format!(
                "loop at `{}` has identity gain",
                self.names[tail]
            )));
        }
        let key = self.edge_key(tail, head, gain);
        if self.keys.contains(&key) {
            return Err(Error::InvalidGraph(format!(
                "edge {} -> {} with gain {gain} duplicates an existing edge",
                self.names[tail], self.names[head]
            )));
        }
        self.keys.insert(key);
        let id = self.edges.len();
        self.edges.push(Edge { id, tail, head, gain });
        Ok(id)
    }

    pub fn add_edge_named(&mut self, tail: &str, head: &str, gain: &str) -> Result<EdgeId> {
        let t = self.vertex_id(tail)?;
        let h = self.vertex_id(head)?;
        let g = self.group.parse_element(gain)?;
        self.add_edge(t, h, g)
    }

    fn edge_key(&self, tail: VertexId, head: VertexId, gain: GroupElement) -> (VertexId, VertexId, GroupElement) {
        let fwd = (tail, head, gain);
        let rev = (head, tail, self.group.inv(gain));
        fwd.min(rev)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: GainGraphRepr = serde_json::from_str(text)?;
        Self::from_repr(repr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.repr()).expect("gain graph serializes")
    }

    fn from_repr(repr: GainGraphRepr) -> Result<Self> {
        let mut g = GainGraph::new(repr.group, repr.vertices)?;
        for e in &repr.edges {
            g.add_edge_named(&e.tail, &e.head, &e.gain)?;
        }
        Ok(g)
    }

    fn repr(&self) -> GainGraphRepr {
        GainGraphRepr {
            group: self.group,
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRepr {
                    tail: self.names[e.tail].clone(),
                    head: self.names[e.head].clone(),
                    gain: e.gain.to_string(),
                })
                .collect(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id).ok_or(Error::UnknownEdge(id))
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        (0..self.edges.len()).collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn loops(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_loop())
    }

    /// Validates an edge subset and returns it sorted without repeats.
    pub fn normalize_subset(&self, subset: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut v = subset.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&last) = v.last() {
            if last >= self.edges.len() {
                return Err(Error::UnknownEdge(last));
            }
        }
        Ok(v)
    }

    /// `V(E')`, sorted.
    pub fn vertices_of(&self, subset: &[EdgeId]) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = subset
            .iter()
            .flat_map(|&e| [self.edges[e].tail, self.edges[e].head])
            .collect();
        set.into_iter().collect()
    }

    /// Spanning forest of `subset` found by breadth-first search from the
    /// lowest vertex of each component, visiting edges in id order.
    pub fn span(&self, subset: &[EdgeId]) -> Span {
        let n = self.names.len();
        let mut adj: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &e in &sorted {
            let edge = &self.edges[e];
            adj.entry(edge.tail).or_default().push(e);
            if !edge.is_loop() {
                adj.entry(edge.head).or_default().push(e);
            }
        }
        let mut starts: Vec<VertexId> = adj.keys().copied().collect();
        starts.sort_unstable();

        let gr = &self.group;
        let mut span = Span {
            comp_of: vec![None; n],
            potential: vec![GroupElement::IDENTITY; n],
            roots: Vec::new(),
            comp_vertices: Vec::new(),
            comp_edges: Vec::new(),
            cycle_gains: Vec::new(),
        };
        let mut tree_edge = vec![false; self.edges.len()];
        for root in starts {
            if span.comp_of[root].is_some() {
                continue;
            }
            let c = span.roots.len();
            span.roots.push(root);
            span.comp_of[root] = Some(c);
            let mut verts = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &e in &adj[&u] {
                    let edge = &self.edges[e];
                    let w = edge.other(u);
                    if span.comp_of[w].is_none() {
                        span.comp_of[w] = Some(c);
                        span.potential[w] = if edge.tail == u {
                            gr.op(span.potential[u], edge.gain)
                        } else {
                            gr.op(span.potential[u], gr.inv(edge.gain))
                        };
                        tree_edge[e] = true;
                        verts.push(w);
                        queue.push_back(w);
                    }
                }
            }
            verts.sort_unstable();
            span.comp_vertices.push(verts);
            span.comp_edges.push(Vec::new());
            span.cycle_gains.push(Vec::new());
        }
        for &e in &sorted {
            let edge = &self.edges[e];
            let c = span.comp_of[edge.tail].expect("edge endpoint visited");
            span.comp_edges[c].push(e);
            if !tree_edge[e] {
                let x = gr.op(
                    gr.op(span.potential[edge.tail], edge.gain),
                    gr.inv(span.potential[edge.head]),
                );
                if !x.is_identity() {
                    span.cycle_gains[c].push(x);
                }
            }
        }
        span
    }

    /// Connected components of `subset` as (vertices, edges), ordered by
    /// lowest vertex.
    pub fn components(&self, subset: &[EdgeId]) -> Vec<(Vec<VertexId>, Vec<EdgeId>)> {
        let span = self.span(subset);
        span.comp_vertices.into_iter().zip(span.comp_edges).collect()
    }

    pub fn is_connected_subset(&self, subset: &[EdgeId]) -> bool {
        !subset.is_empty() && self.span(subset).roots.len() == 1
    }

    /// Gain of a walk: the product of edge gains, inverted on edges traversed
    /// head to tail.
    pub fn walk_gain(&self, walk: &Walk) -> Result<GroupElement> {
        if walk.start >= self.names.len() {
            return Err(Error::UnknownVertex(walk.start.to_string()));
        }
        let gr = &self.group;
        let mut at = walk.start;
        let mut acc = GroupElement::IDENTITY;
        for (i, step) in walk.steps.iter().enumerate() {
            let (id, forward) = match *step {
                Step::Forward(e) => (e, true),
                Step::Backward(e) => (e, false),
            };
            let e = self.edge(id)?;
            let (from, to, x) = if forward {
                (e.tail, e.head, e.gain)
            } else {
                (e.head, e.tail, gr.inv(e.gain))
            };
            if from != at {
                return Err(Error::InvalidWalk(format!(
                    "step {i} uses edge {id} from `{}` but the walk is at `{}`",
                    self.names[from], self.names[at]
                )));
            }
            acc = gr.op(acc, x);
            at = to;
        }
        Ok(acc)
    }

    /// Walk from an alternating vertex/edge sequence `v0 e1 v1 ... el vl`.
    /// Loops are taken in their stored direction.
    pub fn walk_from_sequence(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Result<Walk> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::InvalidWalk("need exactly one more vertex than edges".into()));
        }
        let mut steps = Vec::with_capacity(edges.len());
        for (i, &id) in edges.iter().enumerate() {
            let e = self.edge(id)?;
            let (a, b) = (vertices[i], vertices[i + 1]);
            if e.tail == a && e.head == b {
                steps.push(Step::Forward(id));
            } else if e.head == a && e.tail == b {
                steps.push(Step::Backward(id));
            } else {
                return Err(Error::InvalidWalk(format!("edge {id} does not join entries {i} and {}", i + 1)));
            }
        }
        Ok(Walk {
            start: vertices[0],
            steps,
        })
    }

    /// `⟨E'⟩` at `base`: the subgroup of closed-walk gains of the component of
    /// `subset` containing `base`.
    pub fn induced_subgroup(&self, subset: &[EdgeId], base: VertexId) -> Result<Subgroup> {
        let subset = self.normalize_subset(subset)?;
        let span = self.span(&subset);
        let c = span
            .comp_of
            .get(base)
            .copied()
            .flatten()
            .ok_or_else(|| Error::InvalidArgument(format!("vertex {base} is not incident to the edge set")))?;
        let gr = &self.group;
        let g = span.potential[base];
        let gens = span.cycle_gains[c].iter().map(|&x| gr.op(gr.op(g, x), gr.inv(g)));
        Ok(gr.subgroup_generated(gens))
    }

    pub fn classify(&self, subset: &[EdgeId]) -> Result<BalanceClass> {
        let subset = self.normalize_subset(subset)?;
        if subset.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let span = self.span(&subset);
        let mut components = Vec::with_capacity(span.roots.len());
        let mut kind = BalanceKind::Balanced;
        for c in 0..span.roots.len() {
            let subgroup = self.group.subgroup_generated(span.cycle_gains[c].iter().copied());
            let ck = BalanceKind::of(subgroup.classify(&self.group));
            if ck.beta() > kind.beta() {
                kind = ck;
            }
            components.push(ComponentBalance {
                root: span.roots[c],
                vertices: span.comp_vertices[c].clone(),
                edges: span.comp_edges[c].clone(),
                subgroup,
                kind: ck,
            });
        }
        Ok(BalanceClass { kind, components })
    }

    /// β without building the subgroups.
    pub fn beta(&self, subset: &[EdgeId]) -> i64 {
        let span = self.span(subset);
        span.cycle_gains.iter().map(|gens| self.gains_kind(gens).beta()).max().unwrap_or(0)
    }

    pub fn is_balanced(&self, subset: &[EdgeId]) -> bool {
        self.span(subset).cycle_gains.iter().all(|g| g.is_empty())
    }

    /// Class of the subgroup generated by `gens` (identity already removed).
    /// A subgroup of a point group is dihedral exactly when it contains two
    /// distinct reflections or a reflection and a nontrivial rotation.
    pub(crate) fn gains_kind(&self, gens: &[GroupElement]) -> BalanceKind {
        if gens.is_empty() {
            return BalanceKind::Balanced;
        }
        let mut refl: Option<GroupElement> = None;
        let mut rot = false;
        for &x in gens {
            if x.reflection_bit() {
                match refl {
                    Some(r) if r != x => return BalanceKind::Other,
                    _ => refl = Some(x),
                }
            } else {
                rot = true;
            }
        }
        if refl.is_some() && rot {
            BalanceKind::Other
        } else {
            BalanceKind::UnbalancedCyclic
        }
    }

    /// Relabels every edge `(i, j, α)` to `h(i) α h(j)^-1`.
    pub fn switch(&self, h: &[GroupElement]) -> Result<GainGraph> {
        if h.len() != self.names.len() {
            return Err(Error::InvalidArgument(format!(
                "switching map has {} entries for {} vertices",
                h.len(),
                self.names.len()
            )));
        }
        let gr = &self.group;
        let mut out = GainGraph::new(self.group, self.names.iter().cloned())?;
        for e in &self.edges {
            let x = gr.multiply(gr.multiply(h[e.tail], e.gain)?, gr.inv(h[e.head]))?;
            out.add_edge(e.tail, e.head, x)?;
        }
        Ok(out)
    }

    /// Same graph with edge `id` stored in the opposite orientation.
    pub fn with_reversed(&self, id: EdgeId) -> Result<GainGraph> {
        self.edge(id)?;
        let mut out = GainGraph::new(self.group, self.names.iter().cloned())?;
        for e in &self.edges {
            if e.id == id {
                out.add_edge(e.head, e.tail, self.group.inv(e.gain))?;
            } else {
                out.add_edge(e.tail, e.head, e.gain)?;
            }
        }
        Ok(out)
    }

    /// The graph restricted to `subset`, keeping all vertices. Edge `i` of the
    /// result is `subset[i]` after sorting.
    pub fn edge_subgraph(&self, subset: &[EdgeId]) -> Result<(GainGraph, Vec<EdgeId>)> {
        let subset = self.normalize_subset(subset)?;
        let mut out = GainGraph::new(self.group, self.names.iter().cloned())?;
        for &id in &subset {
            let e = &self.edges[id];
            out.add_edge(e.tail, e.head, e.gain)?;
        }
        Ok((out, subset))
    }

    /// `G_ℓ`: all loops deleted. Returns the original id of each kept edge.
    pub fn without_loops(&self) -> (GainGraph, Vec<EdgeId>) {
        let keep: Vec<EdgeId> = self.edges.iter().filter(|e| !e.is_loop()).map(|e| e.id).collect();
        self.edge_subgraph(&keep).expect("subset of own edges")
    }

    fn split_parts(&self, v: VertexId, first: &[EdgeId], second: &[EdgeId], within: Option<&[EdgeId]>) -> Result<()> {
        let mut expected: Vec<EdgeId> = self
            .edges
            .iter()
            .filter(|e| !e.is_loop() && e.touches(v))
            .map(|e| e.id)
            .collect();
        if let Some(w) = within {
            expected.retain(|e| w.contains(e));
        }
        let mut given: Vec<EdgeId> = first.iter().chain(second).copied().collect();
        given.sort_unstable();
        let len = given.len();
        given.dedup();
        if given.len() != len || given != expected {
            return Err(Error::NotAPartition(format!(
                "the two parts must split the non-loop edges at `{}` exactly",
                self.names[v]
            )));
        }
        Ok(())
    }

    /// Replaces `v` by two copies. The first copy keeps the name and id of
    /// `v`; the second is appended. Edges in `second` move to the second copy
    /// and each loop at `v` becomes an arc from the first to the second copy
    /// with the same gain.
    pub fn split(&self, v: VertexId, first: &[EdgeId], second: &[EdgeId]) -> Result<GainGraph> {
        if v >= self.names.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        self.split_parts(v, first, second, None)?;
        let mut name = format!("{}'", self.names[v]);
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        let mut out = GainGraph::new(self.group, self.names.iter().cloned())?;
        let v2 = out.add_vertex(name)?;
        for e in &self.edges {
            let (mut t, mut h) = (e.tail, e.head);
            if e.is_loop() && t == v {
                h = v2;
            } else if second.contains(&e.id) {
                if t == v {
                    t = v2;
                } else {
                    h = v2;
                }
            }
            out.add_edge(t, h, e.gain)?;
        }
        Ok(out)
    }

    /// Whether the image of `subset` in the split graph is balanced. Works on
    /// potentials directly so no graph is rebuilt.
    fn split_is_balanced(&self, subset: &[EdgeId], v: VertexId, second: &HashSet<EdgeId>) -> bool {
        let n = self.names.len();
        let v2 = n;
        let mut parent: Vec<Option<(usize, GroupElement)>> = vec![None; n + 1];
        let mut adj: HashMap<usize, Vec<(usize, GroupElement)>> = HashMap::new();
        let gr = &self.group;
        for &id in subset {
            let e = &self.edges[id];
            let (mut t, mut h) = (e.tail, e.head);
            if e.is_loop() && t == v {
                h = v2;
            } else if second.contains(&id) {
                if t == v {
                    t = v2;
                } else {
                    h = v2;
                }
            }
            if t == h {
                return false;
            }
            adj.entry(t).or_default().push((h, e.gain));
            adj.entry(h).or_default().push((t, gr.inv(e.gain)));
        }
        let mut starts: Vec<usize> = adj.keys().copied().collect();
        starts.sort_unstable();
        for s in starts {
            if parent[s].is_some() {
                continue;
            }
            parent[s] = Some((s, GroupElement::IDENTITY));
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let gu = parent[u].expect("visited").1;
                for &(w, x) in &adj[&u] {
                    let gw = gr.op(gu, x);
                    match parent[w] {
                        None => {
                            parent[w] = Some((s, gw));
                            stack.push(w);
                        }
                        Some((_, old)) if old != gw => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Searches all vertices and all bipartitions of their non-loop edges in
    /// `subset` for a split after which `subset` is balanced. Returns a witness
    /// when `subset` is near-balanced.
    pub fn is_near_balanced(&self, subset: &[EdgeId]) -> Result<Option<SplitWitness>> {
        let subset = self.normalize_subset(subset)?;
        if subset.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        if !self.is_connected_subset(&subset) {
            return Err(Error::Disconnected);
        }
        if self.is_balanced(&subset) {
            return Ok(None);
        }
        for v in self.vertices_of(&subset) {
            let incident: Vec<EdgeId> = subset
                .iter()
                .copied()
                .filter(|&e| {
                    let edge = &self.edges[e];
                    !edge.is_loop() && edge.touches(v)
                })
                .collect();
            let loops = subset
                .iter()
                .filter(|&&e| self.edges[e].is_loop() && self.edges[e].tail == v)
                .count();
            // Two loops at v become distinct parallel arcs, which always
            // close an unbalanced cycle; other vertices keep their loops.
            if loops >= 2 {
                continue;
            }
            let d = incident.len();
            if d > NEAR_BALANCE_DEGREE_CAP {
                return Err(Error::TooLarge(format!(
                    "vertex `{}` has degree {d} in the edge set",
                    self.names[v]
                )));
            }
            for mask in 0u64..(1u64 << d) {
                let second: HashSet<EdgeId> = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| incident[i]).collect();
                if self.split_is_balanced(&subset, v, &second) {
                    let first = (0..d).filter(|i| mask >> i & 1 == 0).map(|i| incident[i]).collect();
                    let mut second: Vec<EdgeId> = second.into_iter().collect();
                    second.sort_unstable();
                    return Ok(Some(SplitWitness {
                        vertex: v,
                        first,
                        second,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Checks a witness against [`GainGraph::split`] followed by a balance test.
    pub fn verify_split_witness(&self, subset: &[EdgeId], w: &SplitWitness) -> Result<bool> {
        let subset = self.normalize_subset(subset)?;
        self.split_parts(w.vertex, &w.first, &w.second, Some(&subset))?;
        let rest: Vec<EdgeId> = self
            .edges
            .iter()
            .filter(|e| !e.is_loop() && e.touches(w.vertex) && !subset.contains(&e.id))
            .map(|e| e.id)
            .collect();
        let first: Vec<EdgeId> = w.first.iter().chain(&rest).copied().collect();
        let split = self.split(w.vertex, &first, &w.second)?;
        Ok(split.is_balanced(&subset))
    }
}
