//! Mixed-connectivity of covering graphs and gain-mixed-connectivity of
//! quotient gain graphs.
//!
//! A graph is `n`-mixed-connected when no vertex set `W` and edge set `F` with
//! `2|W| + |F| <= n - 1` disconnect it. For a fixed `W` the cheapest `F` is a
//! minimum edge cut of `G - W`, so the search runs over small vertex sets and
//! computes edge connectivity with unit-capacity augmenting paths.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::covering::{CoverVertex, CoveringGraph};
use crate::error::{Error, Result};
use crate::gain_graph::{EdgeId, GainGraph, VertexId};
use crate::group::GroupElement;

/// A disconnecting pair of the covering graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedCut {
    pub w: Vec<CoverVertex>,
    pub f: Vec<(CoverVertex, CoverVertex)>,
    pub cost: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedReport {
    pub n: usize,
    pub connected: bool,
    pub witness: Option<MixedCut>,
}

/// Undirected multigraph with per-edge ids, used for flow computations.
struct FlowGraph {
    ends: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl FlowGraph {
    fn new(n: usize, ends: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in ends.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        FlowGraph { ends, adj }
    }

    fn reach(&self, s: usize, alive: &[bool], flow: Option<&[i8]>) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(w, e) in &self.adj[u] {
                if !alive[w] || seen[w] {
                    continue;
                }
                if let Some(f) = flow {
                    let residual = if self.ends[e].0 == u { 1 - f[e] } else { 1 + f[e] };
                    if residual <= 0 {
                        continue;
                    }
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        seen
    }

    /// Max flow from `s` to `t` in `G[alive]`, stopping once it reaches `cap`.
    /// Returns the flow value and, when below `cap`, the source side of a
    /// minimum cut.
    fn capped_flow(&self, s: usize, t: usize, alive: &[bool], cap: usize) -> (usize, Option<Vec<bool>>) {
        let n = self.adj.len();
        let mut flow = vec![0i8; self.ends.len()];
        let mut value = 0;
        while value < cap {
            let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &(w, e) in &self.adj[u] {
                    if !alive[w] || seen[w] {
                        continue;
                    }
                    let residual = if self.ends[e].0 == u { 1 - flow[e] } else { 1 + flow[e] };
                    if residual <= 0 {
                        continue;
                    }
                    seen[w] = true;
                    pred[w] = Some((u, e));
                    if w == t {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            if !seen[t] {
                return (value, Some(self.reach(s, alive, Some(&flow))));
            }
            let mut v = t;
            while let Some((u, e)) = pred[v] {
                if self.ends[e].0 == u {
                    flow[e] += 1;
                } else {
                    flow[e] -= 1;
                }
                v = u;
            }
            value += 1;
        }
        (value, None)
    }

    /// A minimum edge cut of `G[alive]` with fewer than `cap` edges, if one
    /// exists. Graphs with at most one live vertex count as connected.
    fn min_edge_cut(&self, alive: &[bool], cap: usize) -> Option<Vec<usize>> {
        let live: Vec<usize> = (0..self.adj.len()).filter(|&v| alive[v]).collect();
        if live.len() <= 1 || cap == 0 {
            return None;
        }
        let s = live[0];
        let side = self.reach(s, alive, None);
        if live.iter().any(|&v| !side[v]) {
            return Some(Vec::new());
        }
        let mut best: Option<(usize, Vec<bool>)> = None;
        let mut bound = cap;
        for &t in &live[1..] {
            let (value, cut) = self.capped_flow(s, t, alive, bound);
            if value < bound {
                bound = value;
                best = Some((value, cut.expect("cut below cap")));
            }
        }
        best.map(|(_, side)| {
            (0..self.ends.len())
                .filter(|&e| {
                    let (a, b) = self.ends[e];
                    alive[a] && alive[b] && a != b && side[a] != side[b]
                })
                .collect()
        })
    }
}

/// The cheapest disconnecting pair `(W, F)` of cost at most `max_cost`.
///
/// Ties are broken by the enumeration order: smaller `|W|` first, then
/// lexicographic `W`. Because the covering graph is vertex-transitive on each
/// fibre, it suffices to try sets `W` whose smallest vertex lies in the
/// identity sheet.
pub fn min_mixed_cut(cov: &CoveringGraph, max_cost: usize) -> Option<MixedCut> {
    let n = cov.vertex_count();
    let sheet = cov.quotient_vertex_count();
    let graph = FlowGraph::new(n, cov.edges().to_vec());
    let mut best: Option<MixedCut> = None;
    let mut bound = max_cost + 1;
    let mut alive = vec![true; n];
    for size in 0..=max_cost / 2 {
        if 2 * size >= bound || n < size + 2 {
            break;
        }
        let cap = bound - 2 * size;
        let consider = |w: &[usize], alive: &[bool], bound: &mut usize, best: &mut Option<MixedCut>| {
            let cap = (*bound).saturating_sub(2 * w.len()).min(cap);
            if let Some(cut) = graph.min_edge_cut(alive, cap) {
                let cost = 2 * w.len() + cut.len();
                if cost < *bound {
                    *bound = cost;
                    *best = Some(MixedCut {
                        w: w.to_vec(),
                        f: cut.iter().map(|&e| graph.ends[e]).collect(),
                        cost,
                    });
                }
            }
        };
        if size == 0 {
            consider(&[], &alive, &mut bound, &mut best);
            continue;
        }
        for w in (0..n).combinations(size) {
            if w[0] >= sheet {
                break;
            }
            if 2 * size >= bound {
                break;
            }
            for &x in &w {
                alive[x] = false;
            }
            consider(&w, &alive, &mut bound, &mut best);
            for &x in &w {
                alive[x] = true;
            }
        }
    }
    best
}

pub fn is_n_mixed_connected(cov: &CoveringGraph, n: usize) -> Result<MixedReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let witness = min_mixed_cut(cov, n - 1);
    Ok(MixedReport {
        n,
        connected: witness.is_none(),
        witness,
    })
}

/// The largest `n <= limit` for which the covering graph is `n`-mixed-connected
/// (0 if it is disconnected).
pub fn mixed_connectivity(cov: &CoveringGraph, limit: usize) -> usize {
    match min_mixed_cut(cov, limit.saturating_sub(1)) {
        Some(cut) => cut.cost,
        None => limit,
    }
}

/// Edge connectivity of the underlying loopless multigraph. `None` stands for
/// infinity on a single vertex.
pub fn edge_connectivity(g: &GainGraph) -> Option<usize> {
    let n = g.vertex_count();
    if n <= 1 {
        return None;
    }
    let ends: Vec<(usize, usize)> = g.edges().iter().filter(|e| !e.is_loop()).map(|e| (e.tail, e.head)).collect();
    let cap = ends.len() + 1;
    let graph = FlowGraph::new(n, ends);
    let alive = vec![true; n];
    Some(graph.min_edge_cut(&alive, cap).map_or(cap, |c| c.len()))
}

/// A `k`-block: a connected component `H = (V', E')` of `G - U - D` whose
/// lifted separation costs `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KBlock {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub u: Vec<VertexId>,
    pub d: Vec<EdgeId>,
    pub k: usize,
    /// `|⟨E'⟩|`.
    pub subgroup_order: usize,
    /// Whether `G - U - D` is `H` itself.
    pub whole: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricSeparation {
    pub u_h: Vec<CoverVertex>,
    pub d_h: Vec<(CoverVertex, CoverVertex)>,
    /// Vertex set of the lift `⟨E'⟩ H` cut off by the separation.
    pub component: Vec<CoverVertex>,
}

/// The lift of a connected subgraph: potentials `g_v` along a spanning tree
/// from the lowest vertex and membership of `⟨E'⟩`, indexed by group index.
struct Lift {
    inside: Vec<bool>,
    potential: Vec<GroupElement>,
    kappa: Vec<bool>,
    kappa_order: usize,
}

fn lift(g: &GainGraph, vertices: &[VertexId], edges: &[EdgeId]) -> Result<Lift> {
    let Some(&root) = vertices.iter().min() else {
        return Err(Error::InvalidArgument("subgraph has no vertices".into()));
    };
    let gr = g.group();
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    for &e in edges {
        let edge = g.edge(e)?;
        if !inside[edge.tail] || !inside[edge.head] {
            return Err(Error::InvalidArgument(format!("edge {e} leaves the subgraph")));
        }
    }
    let span = g.span(edges);
    let spanned = span.comp_vertices.first().map_or(1, |c| c.len());
    if span.roots.len() > 1 || (vertices.len() > 1 && spanned != vertices.len()) {
        return Err(Error::Disconnected);
    }
    let mut potential = span.potential;
    if span.roots.is_empty() {
        potential[root] = GroupElement::IDENTITY;
    }
    let sub = gr.subgroup_generated(span.cycle_gains.first().cloned().unwrap_or_default());
    let mut kappa = vec![false; gr.order()];
    for &x in sub.elements() {
        kappa[gr.index_of(x)] = true;
    }
    Ok(Lift {
        inside,
        potential,
        kappa,
        kappa_order: sub.order(),
    })
}

impl Lift {
    fn contains(&self, g: &GainGraph, gamma: GroupElement, v: VertexId) -> bool {
        let gr = g.group();
        self.inside[v] && self.kappa[gr.index_of(gr.op(gamma, gr.inv(self.potential[v])))]
    }

    fn vertex_trace(&self, g: &GainGraph, v: VertexId) -> Vec<CoverVertex> {
        let gr = g.group();
        let n = g.vertex_count();
        let mut out = BTreeSet::new();
        for e in g.edges().iter().filter(|e| !e.is_loop() && e.touches(v)) {
            let (u, to_v) = if e.tail == v {
                (e.head, gr.inv(e.gain))
            } else {
                (e.tail, e.gain)
            };
            if !self.inside[u] {
                continue;
            }
            // Covering neighbours of (h g_u, u) over v are (h g_u x, v).
            let base = gr.op(self.potential[u], to_v);
            for (i, &k) in self.kappa.iter().enumerate() {
                if k {
                    let x = gr.op(gr.element_at(i), base);
                    out.insert(gr.index_of(x) * n + v);
                }
            }
        }
        out.into_iter().collect()
    }

    fn edge_trace(&self, g: &GainGraph, e: EdgeId) -> Vec<(CoverVertex, CoverVertex)> {
        let gr = g.group();
        let n = g.vertex_count();
        let edge = g.edges()[e];
        let mut out = BTreeSet::new();
        for gamma in gr.elements() {
            let head = gr.op(gamma, edge.gain);
            if self.contains(g, gamma, edge.tail) || self.contains(g, head, edge.head) {
                let x = gr.index_of(gamma) * n + edge.tail;
                let y = gr.index_of(head) * n + edge.head;
                out.insert((x.min(y), x.max(y)));
            }
        }
        out.into_iter().collect()
    }

    fn component(&self, g: &GainGraph) -> Vec<CoverVertex> {
        let gr = g.group();
        let n = g.vertex_count();
        let mut out = Vec::new();
        for v in (0..n).filter(|&v| self.inside[v]) {
            for (i, &k) in self.kappa.iter().enumerate() {
                if k {
                    out.push(gr.index_of(gr.op(gr.element_at(i), self.potential[v])) * n + v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn enlarges(&self, g: &GainGraph, e: EdgeId) -> bool {
        let gr = g.group();
        let edge = g.edges()[e];
        let x = gr.op(gr.op(self.potential[edge.tail], edge.gain), gr.inv(self.potential[edge.head]));
        !self.kappa[gr.index_of(x)]
    }
}

/// `v_H`: the covering vertices over `v` adjacent to the lift `⟨E'⟩ H`.
pub fn vertex_trace(g: &GainGraph, v: VertexId, h_vertices: &[VertexId], h_edges: &[EdgeId]) -> Result<Vec<CoverVertex>> {
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if h_vertices.contains(&v) {
        return Err(Error::InvalidArgument("vertex lies in the subgraph".into()));
    }
    let l = lift(g, h_vertices, h_edges)?;
    let adjacent = g.edges().iter().any(|e| !e.is_loop() && e.touches(v) && l.inside[e.other(v)]);
    if !adjacent {
        return Err(Error::InvalidArgument(format!(
            "vertex `{}` is not adjacent to the subgraph",
            g.vertex_name(v)
        )));
    }
    Ok(l.vertex_trace(g, v))
}

/// `e_H`: the covering edges over `e` incident to the lift `⟨E'⟩ H`.
pub fn edge_trace(g: &GainGraph, e: EdgeId, h_vertices: &[VertexId], h_edges: &[EdgeId]) -> Result<Vec<(CoverVertex, CoverVertex)>> {
    let edge = *g.edge(e)?;
    if h_edges.contains(&e) {
        return Err(Error::InvalidArgument("edge lies in the subgraph".into()));
    }
    let l = lift(g, h_vertices, h_edges)?;
    if !l.inside[edge.tail] && !l.inside[edge.head] {
        return Err(Error::InvalidArgument(format!("edge {e} does not touch the subgraph")));
    }
    Ok(l.edge_trace(g, e))
}

/// `2 Σ |v_H| + Σ |e_H|` for the given `H`, `U`, `D`.
pub fn block_cost(g: &GainGraph, h_vertices: &[VertexId], h_edges: &[EdgeId], u: &[VertexId], d: &[EdgeId]) -> Result<usize> {
    let l = lift(g, h_vertices, h_edges)?;
    let vs: usize = u.iter().map(|&v| l.vertex_trace(g, v).len()).sum();
    let es: usize = d.iter().map(|&e| l.edge_trace(g, e).len()).sum();
    Ok(2 * vs + es)
}

pub fn symmetric_separation(g: &GainGraph, b: &KBlock) -> Result<SymmetricSeparation> {
    let l = lift(g, &b.vertices, &b.edges)?;
    let mut u_h: Vec<CoverVertex> = b.u.iter().flat_map(|&v| l.vertex_trace(g, v)).collect();
    u_h.sort_unstable();
    let mut d_h: Vec<(CoverVertex, CoverVertex)> = b.d.iter().flat_map(|&e| l.edge_trace(g, e)).collect();
    d_h.sort_unstable();
    Ok(SymmetricSeparation {
        u_h,
        d_h,
        component: l.component(g),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Open,
    In,
    Cut,
    Out,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    First,
    Minimum,
    All,
}

struct Search<'a> {
    g: &'a GainGraph,
    nbrs: Vec<Vec<(VertexId, EdgeId)>>,
    mode: Mode,
    budget: usize,
    found: Vec<KBlock>,
    done: bool,
}

impl Search<'_> {
    fn key(b: &KBlock) -> (usize, usize, usize, Vec<VertexId>, Vec<VertexId>, Vec<EdgeId>) {
        (b.k, b.u.len(), b.d.len(), b.u.clone(), b.d.clone(), b.vertices.clone())
    }

    fn record(&mut self, b: KBlock) {
        match self.mode {
            Mode::First => {
                self.found.push(b);
                self.done = true;
            }
            Mode::All => self.found.push(b),
            Mode::Minimum => {
                if b.k < self.budget {
                    self.budget = b.k;
                    self.found.retain(|x| x.k <= b.k);
                }
                if self.found.first().is_none_or(|x| Self::key(&b) < Self::key(x)) {
                    self.found.clear();
                    self.found.push(b);
                }
            }
        }
    }

    fn run(&mut self) {
        let n = self.g.vertex_count();
        for root in 0..n {
            if self.done {
                return;
            }
            let mut status = vec![Status::Open; n];
            status[root] = Status::In;
            self.grow(root, &mut status, 0);
        }
    }

    fn edges_between(&self, v: VertexId, status: &[Status], want: Status) -> usize {
        self.nbrs[v].iter().filter(|&&(w, _)| status[w] == want).count()
    }

    fn grow(&mut self, root: VertexId, status: &mut [Status], cost: usize) {
        if self.done || cost > self.budget {
            return;
        }
        let next = (0..status.len())
            .filter(|&v| status[v] == Status::Open)
            .find(|&v| self.nbrs[v].iter().any(|&(w, _)| status[w] == Status::In));
        let Some(w) = next else {
            self.leaf(status, cost);
            return;
        };
        if w > root {
            status[w] = Status::In;
            let add = self.edges_between(w, status, Status::Out);
            self.grow(root, status, cost + add);
        }
        status[w] = Status::Cut;
        self.grow(root, status, cost + 2);
        status[w] = Status::Out;
        let add = self.edges_between(w, status, Status::In);
        self.grow(root, status, cost + add);
        status[w] = Status::Open;
    }

    fn leaf(&mut self, status: &[Status], cost: usize) {
        let g = self.g;
        let vertices: Vec<VertexId> = (0..status.len()).filter(|&v| status[v] == Status::In).collect();
        let u: Vec<VertexId> = (0..status.len()).filter(|&v| status[v] == Status::Cut).collect();
        let whole = status.iter().all(|&s| s == Status::In || s == Status::Cut);
        let mut external: Vec<EdgeId> = g
            .edges()
            .iter()
            .filter(|e| {
                let (a, b) = (status[e.tail] == Status::In, status[e.head] == Status::In);
                a != b && (status[e.tail] != Status::Cut && status[e.head] != Status::Cut)
            })
            .map(|e| e.id)
            .collect();
        external.sort_unstable();
        let internal: Vec<EdgeId> = g
            .edges()
            .iter()
            .filter(|e| status[e.tail] == Status::In && status[e.head] == Status::In)
            .map(|e| e.id)
            .collect();
        let mut chosen = Vec::new();
        self.choose_internal(&vertices, &u, &external, &internal, 0, &mut chosen, cost, whole);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_internal(
        &mut self,
        vertices: &[VertexId],
        u: &[VertexId],
        external: &[EdgeId],
        internal: &[EdgeId],
        from: usize,
        chosen: &mut Vec<EdgeId>,
        cost: usize,
        whole: bool,
    ) {
        if self.done || cost > self.budget {
            return;
        }
        self.evaluate(vertices, u, external, internal, chosen, whole);
        for i in from..internal.len() {
            let e = self.g.edges()[internal[i]];
            let lb = if e.is_loop() { 1 } else { 2 };
            chosen.push(internal[i]);
            self.choose_internal(vertices, u, external, internal, i + 1, chosen, cost + lb, whole);
            chosen.pop();
            if self.done {
                return;
            }
        }
    }

    fn evaluate(&mut self, vertices: &[VertexId], u: &[VertexId], external: &[EdgeId], internal: &[EdgeId], chosen: &[EdgeId], whole: bool) {
        let g = self.g;
        let edges: Vec<EdgeId> = internal.iter().copied().filter(|e| !chosen.contains(e)).collect();
        let Ok(l) = lift(g, vertices, &edges) else {
            return;
        };
        if whole && l.kappa_order == g.group().order() {
            return;
        }
        if chosen.iter().any(|&e| !l.enlarges(g, e)) {
            return;
        }
        let mut k = 0;
        for &v in u {
            k += 2 * l.vertex_trace(g, v).len();
            if k > self.budget {
                return;
            }
        }
        let mut d: Vec<EdgeId> = external.iter().chain(chosen).copied().collect();
        d.sort_unstable();
        for &e in &d {
            k += l.edge_trace(g, e).len();
            if k > self.budget {
                return;
            }
        }
        self.record(KBlock {
            vertices: vertices.to_vec(),
            edges,
            u: u.to_vec(),
            d,
            k,
            subgroup_order: l.kappa_order,
            whole,
        });
    }
}

fn search(g: &GainGraph, k_max: usize, mode: Mode) -> Vec<KBlock> {
    let mut nbrs = vec![Vec::new(); g.vertex_count()];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        nbrs[e.tail].push((e.head, e.id));
        nbrs[e.head].push((e.tail, e.id));
    }
    let mut s = Search {
        g,
        nbrs,
        mode,
        budget: k_max,
        found: Vec::new(),
        done: false,
    };
    s.run();
    s.found
}

/// A `k`-block of least `k <= k_max`, ties broken by `(k, |U|, |D|, U, D, V')`.
///
/// The search fixes the lowest vertex of `H` and decides, for each vertex
/// next to `H`, whether it joins `H`, goes into `U` or stays outside; edges
/// from `H` to outside vertices are forced into `D`. Only minimal pairs are
/// produced: `U` is adjacent to `H`, `D` avoids `U`, and internal edges of
/// `D` enlarge `⟨E'⟩`. A smallest block always has this form.
pub fn find_k_block(g: &GainGraph, k_max: usize) -> Option<KBlock> {
    search(g, k_max, Mode::Minimum).into_iter().next()
}

/// Every minimal `k`-block with `k <= k_max`.
pub fn k_blocks(g: &GainGraph, k_max: usize) -> Vec<KBlock> {
    search(g, k_max, Mode::All)
}

/// Whether `g` has no `k`-block with `k <= n - 1`; a block is returned as a
/// witness otherwise.
pub fn is_n_gain_mixed_connected(g: &GainGraph, n: usize) -> Result<(bool, Option<KBlock>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let found = search(g, n - 1, Mode::First).into_iter().next();
    Ok((found.is_none(), found))
}

/// Largest `n <= limit` for which `g` is `n`-gain-mixed-connected.
pub fn gain_mixed_connectivity(g: &GainGraph, limit: usize) -> usize {
    find_k_block(g, limit.saturating_sub(1)).map_or(limit, |b| b.k)
}
