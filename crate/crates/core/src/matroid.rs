//! Count functions ρ, μ, ν_t, the matroids they induce, and combinatorial
//! rigidity decisions.
//!
//! Independence has two routes. The direct route checks `count(F) >= |F|`
//! on every connected subset and is exponential. The fast route applies when
//! the count is `r1(F) + r2(F) - 1` on connected sets for two matroids with
//! ranks `r1`, `r2`: then `I` is independent exactly when `I + ē` lies in the
//! union `M1 ∨ M2` for a parallel copy `ē` of each `e ∈ I`, which a matroid
//! partition augmenting path decides in polynomial time. This covers ρ over
//! cyclic groups and `C_s` (frame ∨ frame), μ (graphic ∨ frame) and ν_t for
//! `t ∈ {0, 1, k-1}` (where ν_t = ρ).

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain_graph::{EdgeId, GainGraph};
use crate::group::{GroupElement, GroupKind, GroupSpec};

/// Largest edge set on which independence is checked subset by subset.
pub const EXHAUSTIVE_INDEPENDENCE_CAP: usize = 20;
/// Largest edge set on which the minimum over all partitions is computed.
pub const EXHAUSTIVE_PARTITION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family", content = "t")]
pub enum CountFamily {
    Rho,
    Mu,
    Nu(u32),
}

impl std::fmt::Display for CountFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountFamily::Rho => write!(f, "rho"),
            CountFamily::Mu => write!(f, "mu"),
            CountFamily::Nu(t) => write!(f, "nu_{t}"),
        }
    }
}

impl CountFamily {
    /// `ν_t` with `t` reduced mod `k`.
    pub fn nu(group: &GroupSpec, t: i64) -> Result<Self> {
        if group.kind() != GroupKind::Cyclic {
            return Err(Error::GroupMismatch(format!("nu_t needs a rotation group, got {group}")));
        }
        Ok(CountFamily::Nu(t.rem_euclid(group.k() as i64) as u32))
    }

    pub fn check(&self, group: &GroupSpec) -> Result<()> {
        match self {
            CountFamily::Rho => {
                if group.kind() == GroupKind::Dihedral && group.k().is_multiple_of(2) {
                    return Err(Error::Uncharacterized(format!(
                        "forced rigidity over {group} (even dihedral) has no count characterization"
                    )));
                }
                Ok(())
            }
            CountFamily::Mu => {
                if group.order() != 2 {
                    return Err(Error::GroupMismatch(format!("mu is defined for C_2 and C_s, got {group}")));
                }
                Ok(())
            }
            CountFamily::Nu(t) => {
                if group.kind() != GroupKind::Cyclic {
                    return Err(Error::GroupMismatch(format!("nu_t needs a rotation group, got {group}")));
                }
                if *t >= group.k() {
                    return Err(Error::InvalidArgument(format!("t = {t} is not reduced mod {}", group.k())));
                }
                Ok(())
            }
        }
    }

    /// Whether the fast union oracle decides independence for this family.
    pub fn has_union_oracle(&self, group: &GroupSpec) -> bool {
        match *self {
            CountFamily::Rho => group.is_abstractly_cyclic(),
            CountFamily::Mu => true,
            CountFamily::Nu(t) => {
                let k = group.k();
                t == 0 || t == 1 || t + 1 == k
            }
        }
    }
}

/// `α_t` of a connected edge set over a rotation group.
fn alpha_connected(g: &GainGraph, x: &[EdgeId], gens: &[GroupElement], t: u32) -> i64 {
    if gens.is_empty() {
        return 0;
    }
    let gr = g.group();
    let l = gr.subgroup_generated(gens.iter().copied()).order() as u32;
    let r = t % l;
    if r == 0 || r == 1 || r == l - 1 {
        return 2;
    }
    match g.is_near_balanced(x) {
        Ok(Some(_)) => 2,
        _ => 3,
    }
}

/// Count of a nonempty, validated edge set.
pub(crate) fn count_unchecked(f: CountFamily, g: &GainGraph, x: &[EdgeId]) -> i64 {
    let span = g.span(x);
    let nv: usize = span.comp_vertices.iter().map(|c| c.len()).sum();
    let base = 2 * nv as i64 - 3;
    let extra = match f {
        CountFamily::Rho => span.cycle_gains.iter().map(|c| g.gains_kind(c).beta()).max().unwrap_or(0),
        CountFamily::Mu => span.cycle_gains.iter().any(|c| !c.is_empty()) as i64,
        CountFamily::Nu(t) => (0..span.roots.len())
            .map(|c| alpha_connected(g, &span.comp_edges[c], &span.cycle_gains[c], t))
            .max()
            .unwrap_or(0),
    };
    base + extra
}

/// `ρ(X)`, `μ(X)` or `ν_t(X)` of a nonempty edge set.
pub fn count(f: CountFamily, g: &GainGraph, x: &[EdgeId]) -> Result<i64> {
    f.check(g.group())?;
    let x = g.normalize_subset(x)?;
    if x.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(count_unchecked(f, g, &x))
}

/// Sum of counts over the parts of a partition of `ground`.
pub fn partition_value(f: CountFamily, g: &GainGraph, ground: &[EdgeId], parts: &[Vec<EdgeId>]) -> Result<i64> {
    f.check(g.group())?;
    let ground = g.normalize_subset(ground)?;
    let mut seen = BTreeSet::new();
    let mut total = 0;
    for part in parts {
        if part.is_empty() {
            return Err(Error::NotAPartition("empty part".into()));
        }
        for &e in part {
            g.edge(e)?;
            if !seen.insert(e) {
                return Err(Error::NotAPartition(format!("edge {e} appears twice")));
            }
        }
        total += count_unchecked(f, g, &g.normalize_subset(part)?);
    }
    if seen.into_iter().collect::<Vec<_>>() != ground {
        return Err(Error::NotAPartition("parts do not cover the edge set exactly".into()));
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Connected subset enumeration.

/// Visits every connected edge set `S` with `seed ∈ S ⊆ pool` whose edges
/// are not in `excluded`, exactly once. The visitor returns `false` to stop.
struct ConnectedSets<'a> {
    g: &'a GainGraph,
    incident: Vec<Vec<EdgeId>>,
    excluded: Vec<bool>,
    in_set: Vec<bool>,
}

impl<'a> ConnectedSets<'a> {
    fn new(g: &'a GainGraph, pool: &[EdgeId]) -> Self {
        let mut incident = vec![Vec::new(); g.vertex_count()];
        let mut excluded = vec![true; g.edge_count()];
        for &e in pool {
            let edge = g.edges()[e];
            incident[edge.tail].push(e);
            if !edge.is_loop() {
                incident[edge.head].push(e);
            }
            excluded[e] = false;
        }
        ConnectedSets {
            g,
            incident,
            excluded,
            in_set: vec![false; g.edge_count()],
        }
    }

    fn extend(&self, from: &[EdgeId], e: EdgeId, cand: &mut Vec<EdgeId>) {
        let edge = self.g.edges()[e];
        for v in [edge.tail, edge.head] {
            for &f in &self.incident[v] {
                if !self.excluded[f] && !self.in_set[f] && f != e && !cand.contains(&f) && !from.contains(&f) {
                    cand.push(f);
                }
            }
        }
    }

    fn run<F: FnMut(&[EdgeId]) -> bool>(&mut self, seed: EdgeId, visit: &mut F) -> bool {
        let mut set = vec![seed];
        self.in_set[seed] = true;
        let mut cand = Vec::new();
        self.extend(&[], seed, &mut cand);
        let go = self.rec(&mut set, cand, visit);
        self.in_set[seed] = false;
        go
    }

    fn rec<F: FnMut(&[EdgeId]) -> bool>(&mut self, set: &mut Vec<EdgeId>, cand: Vec<EdgeId>, visit: &mut F) -> bool {
        if !visit(set) {
            return false;
        }
        let mut go = true;
        let mut marked = Vec::new();
        for i in 0..cand.len() {
            let c = cand[i];
            let mut next: Vec<EdgeId> = cand[i + 1..].to_vec();
            self.in_set[c] = true;
            set.push(c);
            self.extend(&cand[..=i], c, &mut next);
            go = self.rec(set, next, visit);
            set.pop();
            self.in_set[c] = false;
            if !go {
                break;
            }
            self.excluded[c] = true;
            marked.push(c);
        }
        for c in marked {
            self.excluded[c] = false;
        }
        go
    }
}

/// Smallest connected `F ⊆ pool` containing `seed` with `count(F) < |F|`.
fn violation_through(f: CountFamily, g: &GainGraph, pool: &[EdgeId], seed: EdgeId, skip: &[EdgeId]) -> Option<Vec<EdgeId>> {
    let mut cs = ConnectedSets::new(g, pool);
    for &e in skip {
        cs.excluded[e] = true;
    }
    let mut best: Option<Vec<EdgeId>> = None;
    cs.run(seed, &mut |s| {
        if best.as_ref().is_none_or(|b| s.len() < b.len()) && count_unchecked(f, g, s) < s.len() as i64 {
            let mut v = s.to_vec();
            v.sort_unstable();
            best = Some(v);
        }
        true
    });
    best
}

/// Independence by checking every connected subset.
pub fn is_independent_exhaustive(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> Result<Independence> {
    f.check(g.group())?;
    let subset = g.normalize_subset(subset)?;
    if subset.len() > EXHAUSTIVE_INDEPENDENCE_CAP {
        return Err(Error::TooLarge(format!(
            "{} edges exceed the exhaustive independence cap of {EXHAUSTIVE_INDEPENDENCE_CAP}",
            subset.len()
        )));
    }
    let mut best: Option<Vec<EdgeId>> = None;
    for (i, &e) in subset.iter().enumerate() {
        if let Some(v) = violation_through(f, g, &subset, e, &subset[..i]) {
            if best.as_ref().is_none_or(|b| (v.len(), &v) < (b.len(), b)) {
                best = Some(v);
            }
        }
    }
    Ok(Independence {
        independent: best.is_none(),
        violating: best,
    })
}

// ---------------------------------------------------------------------------
// Union oracle.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Graphic,
    Frame,
}

/// Union-find over vertices carrying the gain of the path from the root.
struct GainForest<'a> {
    gr: &'a GroupSpec,
    parent: Vec<usize>,
    pot: Vec<GroupElement>,
    cyclic: Vec<bool>,
    touched: Vec<usize>,
}

impl<'a> GainForest<'a> {
    fn new(gr: &'a GroupSpec, n: usize) -> Self {
        GainForest {
            gr,
            parent: (0..n).collect(),
            pot: vec![GroupElement::IDENTITY; n],
            cyclic: vec![false; n],
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = v;
            self.pot[v] = GroupElement::IDENTITY;
            self.cyclic[v] = false;
        }
        self.touched.clear();
    }

    fn find(&mut self, v: usize) -> (usize, GroupElement) {
        let mut path = Vec::new();
        let mut r = v;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress: pot[x] becomes the gain root -> x.
        for &x in path.iter().rev() {
            let p = self.parent[x];
            if p != r {
                self.pot[x] = self.gr.op(self.pot[p], self.pot[x]);
            }
            self.parent[x] = r;
        }
        (r, if v == r { GroupElement::IDENTITY } else { self.pot[v] })
    }

    /// Adds an edge; returns false when the set becomes dependent.
    fn add(&mut self, kind: Kind, tail: usize, head: usize, gain: GroupElement) -> bool {
        self.touched.push(tail);
        self.touched.push(head);
        let (rt, pt) = self.find(tail);
        let (rh, ph) = self.find(head);
        let gr = self.gr;
        if rt == rh {
            if kind == Kind::Graphic || self.cyclic[rt] {
                return false;
            }
            let x = gr.op(gr.op(pt, gain), gr.inv(ph));
            if x.is_identity() {
                return false;
            }
            self.cyclic[rt] = true;
            true
        } else {
            if self.cyclic[rt] && self.cyclic[rh] {
                return false;
            }
            self.parent[rh] = rt;
            self.pot[rh] = gr.op(gr.op(pt, gain), gr.inv(ph));
            self.cyclic[rt] |= self.cyclic[rh];
            true
        }
    }
}

struct UnionOracle<'a> {
    g: &'a GainGraph,
    kinds: [Kind; 2],
    /// Element `2e` is edge `e`, element `2e + 1` its parallel copy.
    side: Vec<Option<u8>>,
    forest: GainForest<'a>,
}

impl<'a> UnionOracle<'a> {
    fn new(g: &'a GainGraph, f: CountFamily) -> Self {
        let kinds = match f {
            CountFamily::Mu => [Kind::Graphic, Kind::Frame],
            _ => [Kind::Frame, Kind::Frame],
        };
        UnionOracle {
            g,
            kinds,
            side: vec![None; 2 * g.edge_count()],
            forest: GainForest::new(g.group(), g.vertex_count()),
        }
    }

    fn independent(&mut self, kind: Kind, elems: &[usize]) -> bool {
        self.forest.reset();
        for &x in elems {
            let e = self.g.edges()[x / 2];
            if !self.forest.add(kind, e.tail, e.head, e.gain) {
                self.forest.reset();
                return false;
            }
        }
        self.forest.reset();
        true
    }

    /// The circuit of `S_j + a`, or `None` when `S_j + a` is independent.
    fn circuit(&mut self, j: usize, a: usize) -> Option<Vec<usize>> {
        let kind = self.kinds[j];
        let mut elems: Vec<usize> = (0..self.side.len()).filter(|&x| self.side[x] == Some(j as u8)).collect();
        elems.push(a);
        if self.independent(kind, &elems) {
            return None;
        }
        let core = self.core(&elems, a);
        let mut circuit = Vec::new();
        for i in 0..core.len() {
            let rest: Vec<usize> = core.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            if self.independent(kind, &rest) {
                circuit.push(core[i]);
            }
        }
        Some(circuit)
    }

    /// Edges of the 2-core of the component of `a` within `elems`.
    fn core(&self, elems: &[usize], a: usize) -> Vec<usize> {
        let edges = self.g.edges();
        let ends = |x: usize| (edges[x / 2].tail, edges[x / 2].head);
        let mut comp = vec![a];
        let mut verts: BTreeSet<usize> = [ends(a).0, ends(a).1].into();
        let mut changed = true;
        let mut left: Vec<usize> = elems.iter().copied().filter(|&x| x != a).collect();
        while changed {
            changed = false;
            left.retain(|&x| {
                let (t, h) = ends(x);
                if verts.contains(&t) || verts.contains(&h) {
                    verts.insert(t);
                    verts.insert(h);
                    comp.push(x);
                    changed = true;
                    false
                } else {
                    true
                }
            });
        }
        loop {
            let mut deg: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
            for &x in &comp {
                let (t, h) = ends(x);
                *deg.entry(t).or_default() += 1;
                *deg.entry(h).or_default() += 1;
            }
            let before = comp.len();
            comp.retain(|&x| {
                let (t, h) = ends(x);
                t == h || (deg[&t] > 1 && deg[&h] > 1)
            });
            if comp.len() == before {
                return comp;
            }
        }
    }

    /// Matroid partition augmentation: tries to add element `x`.
    fn insert(&mut self, x: usize) -> bool {
        let mut pred: Vec<Option<(usize, u8)>> = vec![None; self.side.len()];
        let mut seen = vec![false; self.side.len()];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(a) = queue.pop_front() {
            for j in 0..2u8 {
                if self.side[a] == Some(j) {
                    continue;
                }
                match self.circuit(j as usize, a) {
                    None => {
                        self.side[a] = Some(j);
                        let mut b = a;
                        while let Some((p, jp)) = pred[b] {
                            self.side[p] = Some(jp);
                            b = p;
                        }
                        return true;
                    }
                    Some(c) => {
                        for b in c {
                            if b != a && !seen[b] {
                                seen[b] = true;
                                pred[b] = Some((a, j));
                                queue.push_back(b);
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Adds edge `e` to the maintained independent set if it stays
    /// independent.
    fn try_add(&mut self, e: EdgeId) -> bool {
        let saved = self.side.clone();
        if self.insert(2 * e) && self.insert(2 * e + 1) {
            self.side[2 * e + 1] = None;
            true
        } else {
            self.side = saved;
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub independent: bool,
    /// A subset `F` with `count(F) < |F|` when dependent.
    pub violating: Option<Vec<EdgeId>>,
}

fn union_independent(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> bool {
    let mut o = UnionOracle::new(g, f);
    subset.iter().all(|&e| o.try_add(e))
}

/// Shrinks a dependent set to a circuit, which violates the count.
fn shrink_to_circuit(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> Vec<EdgeId> {
    let mut c = subset.to_vec();
    let mut i = 0;
    while i < c.len() {
        let mut rest = c.clone();
        rest.remove(i);
        if !union_independent(f, g, &rest) {
            c = rest;
        } else {
            i += 1;
        }
    }
    c
}

/// Whether `count(F) >= |F|` for every nonempty `F ⊆ subset`, with a
/// violating set otherwise. Uses the union oracle when it applies and the
/// subset check (capped) otherwise.
pub fn is_independent(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> Result<Independence> {
    f.check(g.group())?;
    let subset = g.normalize_subset(subset)?;
    if !f.has_union_oracle(g.group()) {
        return is_independent_exhaustive(f, g, &subset);
    }
    if union_independent(f, g, &subset) {
        return Ok(Independence {
            independent: true,
            violating: None,
        });
    }
    Ok(Independence {
        independent: false,
        violating: Some(shrink_to_circuit(f, g, &subset)),
    })
}

// ---------------------------------------------------------------------------
// Rank.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub family: CountFamily,
    /// Size of the independent set found greedily.
    pub lower: usize,
    /// Smallest partition value found.
    pub upper: i64,
    pub basis: Vec<EdgeId>,
    /// A partition attaining `upper`.
    pub partition: Vec<Vec<EdgeId>>,
    /// The greedy basis is maximal, so `lower` is the rank.
    pub greedy_exact: bool,
    /// The partition was found by exhaustive search, so `upper` is the rank.
    pub partition_exact: bool,
}

impl RankReport {
    pub fn exact(&self) -> Option<usize> {
        if self.greedy_exact || self.lower as i64 == self.upper {
            Some(self.lower)
        } else if self.partition_exact {
            Some(self.upper.max(0) as usize)
        } else {
            None
        }
    }
}

/// Greedy maximal independent set in id order. Returns the set and whether
/// every edge was decided.
pub fn greedy_basis(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> Result<(Vec<EdgeId>, bool)> {
    f.check(g.group())?;
    let subset = g.normalize_subset(subset)?;
    let mut basis = Vec::new();
    if f.has_union_oracle(g.group()) {
        let mut o = UnionOracle::new(g, f);
        for &e in &subset {
            if o.try_add(e) {
                basis.push(e);
            }
        }
        return Ok((basis, true));
    }
    for &e in &subset {
        let mut pool = basis.clone();
        pool.push(e);
        // Only sets through e can fail; they live in e's component of the pool.
        let comp = g
            .components(&pool)
            .into_iter()
            .find(|(_, es)| es.contains(&e))
            .map(|(_, es)| es)
            .unwrap_or_default();
        if comp.len() > EXHAUSTIVE_INDEPENDENCE_CAP {
            return Ok((basis, false));
        }
        if violation_through(f, g, &comp, e, &[]).is_none() {
            basis.push(e);
        }
    }
    Ok((basis, true))
}

/// Minimum of `Σ count(part)` over partitions into connected parts.
pub fn exhaustive_partition(f: CountFamily, g: &GainGraph, subset: &[EdgeId]) -> Result<(i64, Vec<Vec<EdgeId>>)> {
    f.check(g.group())?;
    let subset = g.normalize_subset(subset)?;
    let m = subset.len();
    if m > EXHAUSTIVE_PARTITION_CAP {
        return Err(Error::TooLarge(format!(
            "{m} edges exceed the exhaustive partition cap of {EXHAUSTIVE_PARTITION_CAP}"
        )));
    }
    let full = (1usize << m) - 1;
    let members = |mask: usize| -> Vec<EdgeId> { (0..m).filter(|i| mask >> i & 1 == 1).map(|i| subset[i]).collect() };
    let mut value = vec![None; full + 1];
    for (mask, slot) in value.iter_mut().enumerate().skip(1) {
        let x = members(mask);
        if g.is_connected_subset(&x) {
            *slot = Some(count_unchecked(f, g, &x));
        }
    }
    let mut best = vec![i64::MAX; full + 1];
    let mut choice = vec![0usize; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if let Some(v) = value[part] {
                let tail = best[mask ^ part];
                if tail != i64::MAX && v + tail < best[mask] {
                    best[mask] = v + tail;
                    choice[mask] = part;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut parts = Vec::new();
    let mut mask = full;
    while mask != 0 {
        parts.push(members(choice[mask]));
        mask ^= choice[mask];
    }
    parts.sort();
    Ok((best[full], parts))
}

/// Rank of `subset`, with a greedy basis as the lower bound and the best of
/// the exhaustive partition (when small), the component partition, the
/// singletons, and any caller-supplied candidates as the upper bound.
pub fn rank(f: CountFamily, g: &GainGraph, subset: &[EdgeId], candidates: &[Vec<Vec<EdgeId>>]) -> Result<RankReport> {
    f.check(g.group())?;
    let subset = g.normalize_subset(subset)?;
    let (basis, greedy_exact) = greedy_basis(f, g, &subset)?;

    let mut upper = subset.len() as i64;
    let mut partition: Vec<Vec<EdgeId>> = subset.iter().map(|&e| vec![e]).collect();
    let mut partition_exact = false;
    if subset.is_empty() {
        upper = 0;
        partition.clear();
    } else {
        let comps: Vec<Vec<EdgeId>> = g.components(&subset).into_iter().map(|(_, es)| es).collect();
        let v = partition_value(f, g, &subset, &comps)?;
        if v < upper {
            upper = v;
            partition = comps;
        }
        for cand in candidates {
            let v = partition_value(f, g, &subset, cand)?;
            if v < upper {
                upper = v;
                partition = cand.clone();
            }
        }
        if subset.len() <= EXHAUSTIVE_PARTITION_CAP {
            let (v, parts) = exhaustive_partition(f, g, &subset)?;
            if v < upper {
                upper = v;
                partition = parts;
            }
            partition_exact = true;
        }
    }
    if greedy_exact && partition_exact && basis.len() as i64 != upper {
        return Err(Error::Indeterminate(format!(
            "greedy rank {} and partition rank {upper} disagree for {f}",
            basis.len()
        )));
    }
    Ok(RankReport {
        family: f,
        lower: basis.len(),
        upper,
        basis,
        partition,
        greedy_exact,
        partition_exact,
    })
}

// ---------------------------------------------------------------------------
// Rigidity decisions.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinatorialVerdict {
    pub rigid: bool,
    pub family: CountFamily,
    pub threshold: i64,
    pub rank: RankReport,
}

fn decide(f: CountFamily, g: &GainGraph, threshold: i64, candidates: &[Vec<Vec<EdgeId>>]) -> Result<CombinatorialVerdict> {
    let r = rank(f, g, &g.edge_ids(), candidates)?;
    let spans = g.vertices_of(&r.basis).len() == g.vertex_count() || g.vertex_count() <= 1;
    let rigid = if r.upper < threshold {
        false
    } else if r.lower as i64 >= threshold {
        spans
    } else if let Some(x) = r.exact() {
        x as i64 >= threshold && spans
    } else {
        return Err(Error::Indeterminate(format!(
            "{f} rank lies in [{}, {}] and the threshold is {threshold}; supply a tighter candidate partition",
            r.lower, r.upper
        )));
    };
    Ok(CombinatorialVerdict {
        rigid,
        family: f,
        threshold,
        rank: r,
    })
}

/// Edge count a spanning independent set needs for forced rigidity.
pub fn forced_threshold(group: &GroupSpec, vertices: usize) -> Result<i64> {
    CountFamily::Rho.check(group)?;
    let n = vertices as i64;
    Ok(match group.kind() {
        GroupKind::Cyclic if group.k() == 1 => (2 * n - 3).max(0),
        GroupKind::Dihedral => 2 * n,
        _ => 2 * n - 1,
    })
}

pub fn is_forced_rigid_combinatorial(g: &GainGraph) -> Result<CombinatorialVerdict> {
    is_forced_rigid_with(g, &[])
}

pub fn is_forced_rigid_with(g: &GainGraph, candidates: &[Vec<Vec<EdgeId>>]) -> Result<CombinatorialVerdict> {
    let threshold = forced_threshold(g.group(), g.vertex_count())?;
    decide(CountFamily::Rho, g, threshold, candidates)
}

/// The family and threshold characterizing `ι_t` rigidity, when known.
pub fn iota_regime(group: &GroupSpec, t: i64, vertices: usize) -> Result<(CountFamily, i64)> {
    let n = vertices as i64;
    let unknown = |why: &str| Err(Error::Uncharacterized(format!("iota_{t} rigidity over {group}: {why}")));
    match group.kind() {
        GroupKind::Reflection => match t.rem_euclid(2) {
            0 => Ok((CountFamily::Rho, forced_threshold(group, vertices)?)),
            _ => Ok((CountFamily::Mu, 2 * n - 2)),
        },
        GroupKind::Cyclic => {
            let k = group.k() as i64;
            let t = t.rem_euclid(k);
            if t == 0 {
                return Ok((CountFamily::Rho, forced_threshold(group, vertices)?));
            }
            match k {
                2 => Ok((CountFamily::Mu, 2 * n - 2)),
                3 => unknown("only forced rigidity is characterized for C_3"),
                k if k % 2 == 1 && (5..1000).contains(&k) => {
                    let f = CountFamily::Nu(t as u32);
                    let th = if t == 1 || t == k - 1 { 2 * n - 1 } else { 2 * n };
                    Ok((f, th))
                }
                _ => unknown("no count characterization"),
            }
        }
        GroupKind::Dihedral => {
            if t == 0 {
                Ok((CountFamily::Rho, forced_threshold(group, vertices)?))
            } else {
                unknown("incidental rigidity is open for dihedral groups")
            }
        }
    }
}

pub fn is_iota_rigid_combinatorial(g: &GainGraph, t: i64) -> Result<CombinatorialVerdict> {
    is_iota_rigid_with(g, t, &[])
}

pub fn is_iota_rigid_with(g: &GainGraph, t: i64, candidates: &[Vec<Vec<EdgeId>>]) -> Result<CombinatorialVerdict> {
    let (f, threshold) = iota_regime(g.group(), t, g.vertex_count())?;
    decide(f, g, threshold, candidates)
}

/// Characters whose conjunction decides full rigidity, when known.
pub fn full_rigidity_characters(group: &GroupSpec) -> Result<Vec<i64>> {
    match group.kind() {
        GroupKind::Reflection => Ok(vec![0, 1]),
        GroupKind::Cyclic => match group.k() {
            1 | 3 => Ok(vec![0]),
            2 => Ok(vec![0, 1]),
            k if k % 2 == 1 && (5..1000).contains(&k) => Ok((0..k as i64).collect()),
            _ => Err(Error::Uncharacterized(format!("full rigidity over {group}"))),
        },
        GroupKind::Dihedral => Err(Error::Uncharacterized(format!("full rigidity over {group}"))),
    }
}

/// Full (incidental) rigidity as the conjunction of the characterized
/// per-character verdicts.
pub fn is_rigid_combinatorial(g: &GainGraph) -> Result<Vec<(i64, CombinatorialVerdict)>> {
    full_rigidity_characters(g.group())?
        .into_iter()
        .map(|t| Ok((t, is_iota_rigid_combinatorial(g, t)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(group: GroupSpec, n: usize) -> GainGraph {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut g = GainGraph::new(group, names).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j, group.identity()).unwrap();
            }
        }
        g
    }

    #[test]
    fn counts() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let k5 = complete(z2, 5);
        assert_eq!(count(CountFamily::Rho, &k5, &k5.edge_ids()).unwrap(), 7);
        assert_eq!(count(CountFamily::Mu, &k5, &k5.edge_ids()).unwrap(), 7);

        let mut lp = GainGraph::new(z2, ["v"]).unwrap();
        lp.add_edge(0, 0, z2.rotation(1)).unwrap();
        assert_eq!(count(CountFamily::Mu, &lp, &[0]).unwrap(), 0);
        assert_eq!(count(CountFamily::Rho, &lp, &[0]).unwrap(), 1);

        let z6 = GroupSpec::cyclic(6).unwrap();
        let mut y = GainGraph::new(z6, ["y"]).unwrap();
        for j in 1..=3 {
            y.add_edge(0, 0, z6.rotation(j)).unwrap();
        }
        assert_eq!(count(CountFamily::Rho, &y, &y.edge_ids()).unwrap(), 1);
        assert!(matches!(count(CountFamily::Rho, &y, &[]), Err(Error::EmptyEdgeSet)));
        assert!(matches!(count(CountFamily::Mu, &y, &[0]), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn independence_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut g = GainGraph::new(z2, ["a", "b"]).unwrap();
        g.add_edge(0, 1, z2.identity()).unwrap();
        g.add_edge(0, 0, z2.rotation(1)).unwrap();
        assert!(is_independent(CountFamily::Rho, &g, &[0]).unwrap().independent);
        let r = is_independent(CountFamily::Mu, &g, &[1]).unwrap();
        assert!(!r.independent);
        assert_eq!(r.violating, Some(vec![1]));

        let k4 = complete(z2, 4);
        for route in [is_independent, is_independent_exhaustive] {
            let r = route(CountFamily::Rho, &k4, &k4.edge_ids()).unwrap();
            assert!(!r.independent);
            assert_eq!(r.violating.unwrap().len(), 6);
        }
    }

    #[test]
    fn exhaustive_cap_is_loud() {
        let g = complete(GroupSpec::cyclic(2).unwrap(), 8);
        assert!(matches!(
            is_independent_exhaustive(CountFamily::Rho, &g, &g.edge_ids()),
            Err(Error::TooLarge(_))
        ));
        assert!(matches!(exhaustive_partition(CountFamily::Rho, &g, &g.edge_ids()), Err(Error::TooLarge(_))));
    }

    #[test]
    fn laman_rank() {
        let triv = GroupSpec::cyclic(1).unwrap();
        let k4 = complete(triv, 4);
        let r = rank(CountFamily::Rho, &k4, &k4.edge_ids(), &[]).unwrap();
        assert_eq!(r.exact(), Some(5));
        assert_eq!(r.upper, 5);
        assert!(is_forced_rigid_combinatorial(&k4).unwrap().rigid);
    }

    #[test]
    fn single_balanced_edge_is_not_iota_rigid() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut g = GainGraph::new(z2, ["a", "b"]).unwrap();
        g.add_edge(0, 1, z2.identity()).unwrap();
        let v = is_iota_rigid_combinatorial(&g, 1).unwrap();
        assert!(!v.rigid);
        assert_eq!(v.threshold, 2);
    }

    #[test]
    fn triangle_over_c3() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let mut g = GainGraph::new(z3, ["v"]).unwrap();
        g.add_edge(0, 0, z3.rotation(1)).unwrap();
        assert!(is_forced_rigid_combinatorial(&g).unwrap().rigid);
        let full = is_rigid_combinatorial(&g).unwrap();
        assert_eq!(full.len(), 1);
        assert!(full[0].1.rigid);
        assert!(matches!(is_iota_rigid_combinatorial(&g, 1), Err(Error::Uncharacterized(_))));
    }

    #[test]
    fn z5_two_loops() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        let mut g = GainGraph::new(z5, ["v"]).unwrap();
        g.add_edge(0, 0, z5.rotation(1)).unwrap();
        g.add_edge(0, 0, z5.rotation(2)).unwrap();
        let nu2 = CountFamily::Nu(2);
        // A single loop is near-balanced; the pair is not.
        assert_eq!(count(nu2, &g, &[0]).unwrap(), 1);
        assert_eq!(count(nu2, &g, &[0, 1]).unwrap(), 2);
        let v = is_iota_rigid_combinatorial(&g, 2).unwrap();
        assert_eq!(v.threshold, 2);
        assert_eq!(v.rank.exact(), Some(2));
        assert!(v.rigid);
    }

    #[test]
    fn even_dihedral_is_open() {
        let g = complete(GroupSpec::dihedral(4).unwrap(), 2);
        assert!(matches!(is_forced_rigid_combinatorial(&g), Err(Error::Uncharacterized(_))));
    }

    #[test]
    fn partition_validation() {
        let g = complete(GroupSpec::cyclic(2).unwrap(), 3);
        assert!(partition_value(CountFamily::Rho, &g, &g.edge_ids(), &[vec![0, 1]]).is_err());
        assert!(partition_value(CountFamily::Rho, &g, &g.edge_ids(), &[vec![0, 1], vec![1, 2]]).is_err());
        assert_eq!(partition_value(CountFamily::Rho, &g, &g.edge_ids(), &[vec![0, 1, 2]]).unwrap(), 3);
    }

    #[test]
    fn connected_sets_are_enumerated_once() {
        let g = complete(GroupSpec::cyclic(2).unwrap(), 4);
        let all = g.edge_ids();
        let mut seen = BTreeSet::new();
        for (i, &e) in all.iter().enumerate() {
            let mut cs = ConnectedSets::new(&g, &all);
            for &x in &all[..i] {
                cs.excluded[x] = true;
            }
            cs.run(e, &mut |s| {
                let mut v = s.to_vec();
                v.sort_unstable();
                assert!(seen.insert(v));
                true
            });
        }
        let expect = (1u32..64)
            .filter(|m| g.is_connected_subset(&(0..6).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
            .count();
        assert_eq!(seen.len(), expect);
    }
}
