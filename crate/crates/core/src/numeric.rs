//! Numerical rigidity oracle: random symmetric placements, the rigidity
//! matrix of the covering framework and its restriction to the velocity
//! fields of a single character.
//!
//! A velocity field of character `t` satisfies `τ(γ) u_i = ω^{tγ} u_{γi}`, so it
//! is determined by its values on the representatives `(id, v)`. The kernel of
//! `R · B_t` is then the space of such motions.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covering::CoveringGraph;
use crate::error::{Error, Result};
use crate::gain_graph::GainGraph;
use crate::group::{GroupElement, GroupKind, GroupSpec};

/// Singular values below `RANK_TOLERANCE * σ_max` count as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;
/// Two covering vertices closer than this are resampled.
pub const COLLISION_DISTANCE: f64 = 1e-9;
const MAX_ATTEMPTS: usize = 100;
/// A singular value within this factor of the cutoff makes the rank unreliable.
const GAP: f64 = 1e2;
/// Relative to the norm of the rigidity matrix.
const ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    pub seed: u64,
    /// `p'(v)` for each quotient vertex.
    pub quotient: Vec<[f64; 2]>,
    /// `p(γ, v) = τ(γ) p'(v)`, indexed like the covering vertices.
    pub points: Vec<[f64; 2]>,
}

impl Placement {
    pub fn point(&self, x: usize) -> Vector2<f64> {
        Vector2::new(self.points[x][0], self.points[x][1])
    }
}

/// Rows are covering edges, columns are `(covering vertex, coordinate)` pairs
/// in the order `2x, 2x + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix {
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MotionSpaceReport {
    pub t: i64,
    pub subspace_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub trivial_dim: usize,
    pub rigid: bool,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullRigidityReport {
    pub rigid: bool,
    pub rank: usize,
    pub covering_vertices: usize,
    /// Per-character reports; empty unless the group is abelian.
    pub characters: Vec<MotionSpaceReport>,
    pub seeds: Vec<u64>,
}

/// Samples `p'` uniformly from `[-1, 1]^2` and extends it equivariantly,
/// resampling while two covering vertices (nearly) coincide.
pub fn symmetric_generic_placement(g: &GainGraph, seed: u64) -> Result<Placement> {
    let gr = g.group();
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let quotient: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)])
            .collect();
        let mut points = vec![[0.0; 2]; gr.order() * n];
        for gamma in gr.elements() {
            let m = gr.tau(gamma);
            for (v, q) in quotient.iter().enumerate() {
                let p = m * Vector2::new(q[0], q[1]);
                points[gr.index_of(gamma) * n + v] = [p.x, p.y];
            }
        }
        let collides = (0..points.len()).any(|a| {
            (a + 1..points.len()).any(|b| {
                let (dx, dy) = (points[a][0] - points[b][0], points[a][1] - points[b][1]);
                dx.hypot(dy) < COLLISION_DISTANCE
            })
        });
        if !collides {
            return Ok(Placement { seed, quotient, points });
        }
    }
    Err(Error::Indeterminate(format!(
        "no collision-free placement after {MAX_ATTEMPTS} attempts"
    )))
}

/// Row `{x, y}` holds `p_x - p_y` in the columns of `x` and `p_y - p_x` in
/// the columns of `y`.
pub fn build_rigidity_matrix(cov: &CoveringGraph, p: &Placement) -> RigidityMatrix {
    let mut m = DMatrix::zeros(cov.edge_count(), 2 * cov.vertex_count());
    for (row, &(x, y)) in cov.edges().iter().enumerate() {
        let d = p.point(x) - p.point(y);
        m[(row, 2 * x)] = d.x;
        m[(row, 2 * x + 1)] = d.y;
        m[(row, 2 * y)] = -d.x;
        m[(row, 2 * y + 1)] = -d.y;
    }
    RigidityMatrix { matrix: m }
}

fn check_character(group: &GroupSpec, t: i64) -> Result<()> {
    match group.kind() {
        GroupKind::Dihedral if t != 0 => Err(Error::Unsupported(format!(
            "character {t} of {group}: only symmetric (t = 0) motions are available for dihedral groups"
        ))),
        GroupKind::Dihedral => Ok(()),
        _ => {
            let k = character_count(group);
            if (0..k).contains(&t) {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("character index {t} must lie in 0..{k}")))
            }
        }
    }
}

fn character_count(group: &GroupSpec) -> i64 {
    match group.kind() {
        GroupKind::Reflection => 2,
        GroupKind::Cyclic => group.k() as i64,
        GroupKind::Dihedral => 1,
    }
}

/// `ω^{tγ}` with `ω = e^{2πi/k}` for `C_k` and `ω = -1` for `C_s`.
pub fn character(group: &GroupSpec, t: i64, gamma: GroupElement) -> Complex64 {
    match group.kind() {
        GroupKind::Reflection => {
            if gamma.reflection_bit() && t.rem_euclid(2) == 1 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        }
        GroupKind::Cyclic => {
            let k = group.k() as i64;
            let e = (t * gamma.rotation_index() as i64).rem_euclid(k);
            // Exact values on the axes keep real problems real.
            match (4 * e % k == 0).then_some(4 * e / k) {
                Some(0) => Complex64::new(1.0, 0.0),
                Some(1) => Complex64::new(0.0, 1.0),
                Some(2) => Complex64::new(-1.0, 0.0),
                Some(3) => Complex64::new(0.0, -1.0),
                _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / k as f64),
            }
        }
        GroupKind::Dihedral => Complex64::new(1.0, 0.0),
    }
}

/// Columns `2v, 2v + 1` carry the unit velocity of `(id, v)` in each
/// coordinate, propagated by `u_{γi} = ω^{-tγ} τ(γ) u_i`.
pub fn iota_subspace_basis(g: &GainGraph, t: i64) -> Result<DMatrix<Complex64>> {
    let gr = g.group();
    check_character(gr, t)?;
    let n = g.vertex_count();
    let mut b = DMatrix::zeros(2 * gr.order() * n, 2 * n);
    for gamma in gr.elements() {
        let w = character(gr, t, gamma).conj();
        let m: Matrix2<f64> = gr.tau(gamma);
        for v in 0..n {
            let x = gr.index_of(gamma) * n + v;
            for c in 0..2 {
                for r in 0..2 {
                    b[(2 * x + r, 2 * v + c)] = w * m[(r, c)];
                }
            }
        }
    }
    Ok(b)
}

fn trivial_dim(group: &GroupSpec, t: i64, vertices: usize) -> usize {
    if vertices == 0 {
        return 0;
    }
    match group.kind() {
        GroupKind::Reflection => {
            if t == 0 {
                1
            } else {
                2
            }
        }
        GroupKind::Cyclic => {
            let k = group.k() as i64;
            match k {
                1 => [0, 2, 3][vertices.min(2)],
                2 => {
                    if t == 0 {
                        1
                    } else {
                        2
                    }
                }
                _ if t == 0 || t == 1 || t == k - 1 => 1,
                _ => 0,
            }
        }
        GroupKind::Dihedral => 0,
    }
}

/// Numerical rank with the relative cutoff. Singular values below
/// `ABSOLUTE_FLOOR * scale` are rounding noise whatever `σ_max` is. Fails when
/// a singular value sits too close to the cutoff to call.
fn numerical_rank(singular: &[f64], scale: f64, tol: f64) -> Result<usize> {
    let floor = ABSOLUTE_FLOOR * scale;
    let max = singular.iter().copied().fold(0.0, f64::max);
    if max <= floor {
        return Ok(0);
    }
    let cut = (tol * max).max(floor);
    if let Some(s) = singular.iter().find(|&&s| s > (cut / GAP).max(floor) && s < cut * GAP) {
        return Err(Error::Indeterminate(format!(
            "singular value {:.3e} is within a factor {GAP} of the cutoff {cut:.3e}",
            s
        )));
    }
    Ok(singular.iter().filter(|&&s| s >= cut).count())
}

fn complex_rank(m: DMatrix<Complex64>, scale: f64, tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    if m.iter().all(|z| z.im == 0.0) {
        return real_rank(m.map(|z| z.re), scale, tol);
    }
    numerical_rank(m.svd(false, false).singular_values.as_slice(), scale, tol)
}

fn real_rank(m: DMatrix<f64>, scale: f64, tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    numerical_rank(m.svd(false, false).singular_values.as_slice(), scale, tol)
}

fn motion_space_at(g: &GainGraph, cov: &CoveringGraph, t: i64, p: &Placement, tol: f64) -> Result<MotionSpaceReport> {
    let b = iota_subspace_basis(g, t)?;
    let r = build_rigidity_matrix(cov, p).matrix;
    let scale = r.norm();
    let rank = complex_rank(r.map(|x| Complex64::new(x, 0.0)) * &b, scale, tol)?;
    let subspace_dim = b.ncols();
    let kernel_dim = subspace_dim - rank;
    let trivial = trivial_dim(g.group(), t, g.vertex_count());
    if kernel_dim < trivial {
        return Err(Error::Indeterminate(format!(
            "kernel dimension {kernel_dim} is below the trivial dimension {trivial} for t = {t}"
        )));
    }
    Ok(MotionSpaceReport {
        t,
        subspace_dim,
        rank,
        kernel_dim,
        trivial_dim: trivial,
        rigid: kernel_dim == trivial,
        seeds: vec![p.seed],
    })
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("rank tolerance {tol} must lie in (0, 1)")))
    }
}

/// The seeds `seed, seed + 1, seed + 2` used for one verdict.
pub fn seed_triple(seed: u64) -> Vec<u64> {
    (0..3).map(|i| seed.wrapping_add(i)).collect()
}

/// Motions of character `t` at placements from the given seeds. The kernel
/// dimension must agree across all of them.
pub fn motion_space_seeds(g: &GainGraph, t: i64, seeds: &[u64]) -> Result<MotionSpaceReport> {
    motion_space_tol(g, t, seeds, RANK_TOLERANCE)
}

/// [`motion_space_seeds`] with a relative rank tolerance other than
/// [`RANK_TOLERANCE`].
pub fn motion_space_tol(g: &GainGraph, t: i64, seeds: &[u64], tol: f64) -> Result<MotionSpaceReport> {
    check_tolerance(tol)?;
    check_character(g.group(), t)?;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("at least one seed is required".into()));
    }
    let cov = CoveringGraph::expand(g)?;
    let mut first: Option<MotionSpaceReport> = None;
    for &seed in seeds {
        let p = symmetric_generic_placement(g, seed)?;
        let r = motion_space_at(g, &cov, t, &p, tol)?;
        match &mut first {
            None => first = Some(r),
            Some(f) if f.kernel_dim == r.kernel_dim => f.seeds.push(seed),
            Some(f) => {
                return Err(Error::Indeterminate(format!(
                    "kernel dimension {} at seed {} but {} at seed {seed}",
                    f.kernel_dim, f.seeds[0], r.kernel_dim
                )))
            }
        }
    }
    Ok(first.expect("seeds is non-empty"))
}

/// [`motion_space_seeds`] over [`seed_triple`].
pub fn motion_space(g: &GainGraph, t: i64, seed: u64) -> Result<MotionSpaceReport> {
    motion_space_seeds(g, t, &seed_triple(seed))
}

/// Full infinitesimal rigidity of the covering framework: `rank R = 2|Ṽ| - 3`.
/// For abelian groups the per-character ranks must add up to `rank R`, and the
/// verdict must be the conjunction of the per-character verdicts.
pub fn is_rigid_numeric_seeds(g: &GainGraph, seeds: &[u64]) -> Result<FullRigidityReport> {
    is_rigid_numeric_tol(g, seeds, RANK_TOLERANCE)
}

pub fn is_rigid_numeric_tol(g: &GainGraph, seeds: &[u64], tol: f64) -> Result<FullRigidityReport> {
    check_tolerance(tol)?;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("at least one seed is required".into()));
    }
    let gr = *g.group();
    let cov = CoveringGraph::expand(g)?;
    let nv = cov.vertex_count();
    let abelian = gr.kind() != GroupKind::Dihedral;
    let mut out: Option<FullRigidityReport> = None;
    for &seed in seeds {
        let p = symmetric_generic_placement(g, seed)?;
        let r = build_rigidity_matrix(&cov, &p).matrix;
        let scale = r.norm();
        let rank = real_rank(r, scale, tol)?;
        let rigid = nv < 2 || rank + 3 == 2 * nv;
        let mut characters = Vec::new();
        if abelian {
            for t in 0..character_count(&gr) {
                characters.push(motion_space_at(g, &cov, t, &p, tol)?);
            }
            let total: usize = characters.iter().map(|c| c.rank).sum();
            let all = characters.iter().all(|c| c.rigid);
            if total != rank || all != rigid {
                return Err(Error::Indeterminate(format!(
                    "character ranks add up to {total} against rank {rank} at seed {seed}"
                )));
            }
        }
        match &mut out {
            None => {
                out = Some(FullRigidityReport {
                    rigid,
                    rank,
                    covering_vertices: nv,
                    characters,
                    seeds: vec![seed],
                })
            }
            Some(f) if f.rank == rank => f.seeds.push(seed),
            Some(f) => {
                return Err(Error::Indeterminate(format!(
                    "rigidity matrix rank {} at seed {} but {rank} at seed {seed}",
                    f.rank, f.seeds[0]
                )))
            }
        }
    }
    Ok(out.expect("seeds is non-empty"))
}

pub fn is_rigid_numeric(g: &GainGraph, seed: u64) -> Result<FullRigidityReport> {
    is_rigid_numeric_seeds(g, &seed_triple(seed))
}

/// Translations and the infinitesimal rotation of a placement, as columns.
pub fn trivial_motions(p: &Placement) -> DMatrix<f64> {
    let n = p.points.len();
    let mut m = DMatrix::zeros(2 * n, 3);
    for (x, q) in p.points.iter().enumerate() {
        m[(2 * x, 0)] = 1.0;
        m[(2 * x + 1, 1)] = 1.0;
        m[(2 * x, 2)] = -q[1];
        m[(2 * x + 1, 2)] = q[0];
    }
    m
}
