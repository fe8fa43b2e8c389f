//! Plane point groups in Schoenflies notation: the reflection group `C_s`,
//! the rotation groups `C_k` and the dihedral groups `C_kv`.
//!
//! Every element is stored in the normal form `s^b r^j`, where `r` is the
//! rotation by `2π/k` and `s` the reflection in the x-axis. The only relation
//! needed to multiply is `r s = s r^-1`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by [`GroupSpec`] constructors.
pub const MAX_GROUP_ORDER: u32 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Reflection,
    Cyclic,
    Dihedral,
}

/// A finite plane point group.
///
/// `C_s` is kept internally as the dihedral group with `k = 1` but keeps its
/// own [`GroupKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    kind: GroupKind,
    k: u32,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        match r.kind {
            GroupKind::Reflection => match r.k {
                None | Some(1) => Ok(GroupSpec::reflection()),
                Some(k) => Err(Error::InvalidGroup(format!("reflection group takes no k (got {k})"))),
            },
            GroupKind::Cyclic => GroupSpec::cyclic(required_k(r.k)?),
            GroupKind::Dihedral => GroupSpec::dihedral(required_k(r.k)?),
        }
    }
}

fn required_k(k: Option<u32>) -> Result<u32> {
    k.ok_or_else(|| Error::InvalidGroup("missing `k`".into()))
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRepr {
            kind: g.kind,
            k: (g.kind != GroupKind::Reflection).then_some(g.k),
        }
    }
}

/// The element `s^b r^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    rotation_index: u32,
    reflection_bit: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        rotation_index: 0,
        reflection_bit: false,
    };

    pub fn rotation_index(self) -> u32 {
        self.rotation_index
    }

    pub fn reflection_bit(self) -> bool {
        self.reflection_bit
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.reflection_bit, self.rotation_index) {
            (false, 0) => write!(f, "id"),
            (false, j) => write!(f, "r^{j}"),
            (true, 0) => write!(f, "s"),
            (true, j) => write!(f, "s*r^{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupClass {
    Trivial,
    CyclicNontrivial,
    Dihedral,
}

/// A subgroup together with the generators it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: BTreeSet<GroupElement>,
    generated_by: BTreeSet<GroupElement>,
}

impl Subgroup {
    pub fn elements(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn generated_by(&self) -> &BTreeSet<GroupElement> {
        &self.generated_by
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.elements.contains(&g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Cyclic iff some element has order `|H|`; every subgroup of a plane
    /// point group is cyclic or dihedral.
    pub fn classify(&self, group: &GroupSpec) -> SubgroupClass {
        if self.is_trivial() {
            return SubgroupClass::Trivial;
        }
        let n = self.order() as u32;
        if self.elements.iter().any(|&g| group.order_of(g) == n) {
            SubgroupClass::CyclicNontrivial
        } else {
            SubgroupClass::Dihedral
        }
    }

    pub fn is_cyclic(&self, group: &GroupSpec) -> bool {
        self.classify(group) != SubgroupClass::Dihedral
    }
}

impl GroupSpec {
    pub fn reflection() -> Self {
        GroupSpec {
            kind: GroupKind::Reflection,
            k: 1,
        }
    }

    pub fn cyclic(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!("cyclic group needs 1 <= k <= {MAX_GROUP_ORDER}, got {k}")));
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic,
            k,
        })
    }

    /// `C_kv`. `dihedral(1)` is the reflection group and is returned as such.
    pub fn dihedral(k: u32) -> Result<Self> {
        if k == 0 || 2 * k > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!("dihedral group needs 1 <= 2k <= {MAX_GROUP_ORDER}, got k = {k}")));
        }
        if k == 1 {
            return Ok(GroupSpec::reflection());
        }
        Ok(GroupSpec {
            kind: GroupKind::Dihedral,
            k,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Number of rotations (the `k` of `C_k` / `C_kv`; 1 for `C_s`).
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn has_reflections(&self) -> bool {
        self.kind != GroupKind::Cyclic
    }

    pub fn order(&self) -> usize {
        if self.has_reflections() {
            2 * self.k as usize
        } else {
            self.k as usize
        }
    }

    /// True for the groups whose abstract structure is cyclic: `C_k` and `C_s`.
    pub fn is_abstractly_cyclic(&self) -> bool {
        self.kind != GroupKind::Dihedral
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Reflection => "C_s".into(),
            GroupKind::Cyclic => format!("C_{}", self.k),
            GroupKind::Dihedral => format!("C_{}v", self.k),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    /// The rotation `r^j` (index reduced mod k).
    pub fn rotation(&self, j: i64) -> GroupElement {
        GroupElement {
            rotation_index: j.rem_euclid(self.k as i64) as u32,
            reflection_bit: false,
        }
    }

    /// The element `s r^j`.
    pub fn reflection_element(&self, j: i64) -> Result<GroupElement> {
        if !self.has_reflections() {
            return Err(Error::GroupMismatch(format!("{} has no reflections", self.name())));
        }
        Ok(GroupElement {
            rotation_index: j.rem_euclid(self.k as i64) as u32,
            reflection_bit: true,
        })
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.rotation_index < self.k && (!g.reflection_bit || self.has_reflections())
    }

    fn check(&self, g: GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{g} is not an element of {}", self.name())))
        }
    }

    /// Dense index in `0..order()`: `b * k + j` for `s^b r^j`.
    pub fn index_of(&self, g: GroupElement) -> usize {
        g.reflection_bit as usize * self.k as usize + g.rotation_index as usize
    }

    pub fn element_at(&self, idx: usize) -> GroupElement {
        let k = self.k as usize;
        GroupElement {
            rotation_index: (idx % k) as u32,
            reflection_bit: idx >= k,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Product `ab`, checking that both operands belong to this group.
    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.op(a, b))
    }

    /// Unchecked product. `(s^a r^i)(s^b r^j) = s^(a+b) r^((-1)^b i + j)`.
    #[inline]
    pub fn op(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let k = self.k;
        let i = if b.reflection_bit {
            (k - a.rotation_index) % k
        } else {
            a.rotation_index
        };
        GroupElement {
            rotation_index: (i + b.rotation_index) % k,
            reflection_bit: a.reflection_bit ^ b.reflection_bit,
        }
    }

    #[inline]
    pub fn inv(&self, g: GroupElement) -> GroupElement {
        if g.reflection_bit {
            g
        } else {
            GroupElement {
                rotation_index: (self.k - g.rotation_index) % self.k,
                reflection_bit: false,
            }
        }
    }

    pub fn pow(&self, g: GroupElement, n: u64) -> GroupElement {
        let mut acc = GroupElement::IDENTITY;
        for _ in 0..n {
            acc = self.op(acc, g);
        }
        acc
    }

    /// Smallest `m >= 1` with `g^m = id`.
    pub fn order_of(&self, g: GroupElement) -> u32 {
        if g.reflection_bit {
            2
        } else if g.rotation_index == 0 {
            1
        } else {
            self.k / gcd(self.k, g.rotation_index)
        }
    }

    /// Closure of `gens` under multiplication. Finite groups need no explicit
    /// inverses.
    pub fn subgroup_generated<I>(&self, gens: I) -> Subgroup
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let generated_by: BTreeSet<GroupElement> = gens.into_iter().collect();
        let mut elements = BTreeSet::from([GroupElement::IDENTITY]);
        let mut frontier = vec![GroupElement::IDENTITY];
        while let Some(x) = frontier.pop() {
            for &g in &generated_by {
                let y = self.op(x, g);
                if elements.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup {
            elements,
            generated_by,
        }
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_generated(self.elements())
    }

    pub fn classify_subgroup(&self, h: &Subgroup) -> SubgroupClass {
        h.classify(self)
    }

    /// Conjugate `g h g^-1`.
    pub fn conjugate(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.op(self.op(g, h), self.inv(g))
    }

    /// Orthogonal image: the rotation by `2πj/k`, preceded by the reflection in
    /// the x-axis when the reflection bit is set (`τ(s r^j) = S R_j`).
    pub fn tau(&self, g: GroupElement) -> Matrix2<f64> {
        let theta = 2.0 * PI * g.rotation_index as f64 / self.k as f64;
        let (sin, cos) = theta.sin_cos();
        let rot = Matrix2::new(cos, -sin, sin, cos);
        if g.reflection_bit {
            Matrix2::new(1.0, 0.0, 0.0, -1.0) * rot
        } else {
            rot
        }
    }

    /// Parses `id`, `r`, `r^j`, `s`, `s*r`, `s*r^j` (`j` may be negative and
    /// is reduced mod k).
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::ParseElement(text.to_string());
        let (refl, rest) = match t.as_str() {
            "id" | "e" | "1" => return Ok(GroupElement::IDENTITY),
            "s" => (true, ""),
            _ => match t.strip_prefix("s*") {
                Some(rest) => (true, rest),
                None => (false, t.as_str()),
            },
        };
        let j: i64 = if rest.is_empty() {
            0
        } else if rest == "r" {
            1
        } else if let Some(exp) = rest.strip_prefix("r^") {
            exp.parse().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        if refl {
            self.reflection_element(j)
        } else {
            Ok(self.rotation(j))
        }
    }

    pub fn format_element(&self, g: GroupElement) -> String {
        g.to_string()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3v() -> GroupSpec {
        GroupSpec::dihedral(3).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let g = c3v();
        for a in g.elements() {
            assert_eq!(g.multiply(g.identity(), a).unwrap(), a);
            assert_eq!(g.op(a, g.identity()), a);
        }
    }

    #[test]
    fn dihedral_relation() {
        let g = c3v();
        let s = g.parse_element("s").unwrap();
        let c3 = g.parse_element("r").unwrap();
        let x = g.op(g.op(s, c3), s);
        assert_eq!(x, g.rotation(2));
        assert_eq!(x, g.inv(c3));
    }

    #[test]
    fn cyclic_addition() {
        let g = GroupSpec::cyclic(6).unwrap();
        let c = g.rotation(2);
        assert_eq!(g.op(c, c), g.rotation(4));
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        let refl = GroupSpec::reflection().reflection_element(0).unwrap();
        assert!(matches!(z6.multiply(refl, z6.identity()), Err(Error::GroupMismatch(_))));
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert!(z3.multiply(z6.rotation(5), z3.identity()).is_err());
    }

    #[test]
    fn element_orders() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(z6.order_of(z6.identity()), 1);
        assert_eq!(z6.order_of(z6.rotation(2)), 3);
        assert_eq!(z6.order_of(z6.rotation(1)), 6);
        let g = c3v();
        for j in 0..3 {
            assert_eq!(g.order_of(g.reflection_element(j).unwrap()), 2);
        }
        assert_eq!(GroupSpec::reflection().order_of(GroupSpec::reflection().reflection_element(0).unwrap()), 2);
    }

    #[test]
    fn generated_subgroups() {
        let g = c3v();
        assert_eq!(g.subgroup_generated([]).order(), 1);
        let h = g.subgroup_generated([g.rotation(1), g.reflection_element(0).unwrap()]);
        assert_eq!(h.order(), 6);
        assert_eq!(h.classify(&g), SubgroupClass::Dihedral);
        let c = g.subgroup_generated([g.rotation(1)]);
        assert_eq!(c.classify(&g), SubgroupClass::CyclicNontrivial);
        assert_eq!(g.subgroup_generated([]).classify(&g), SubgroupClass::Trivial);

        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = z6.subgroup_generated([z6.rotation(3)]);
        assert_eq!(h.order(), 2);
        assert!(h.contains(z6.rotation(3)));
    }

    #[test]
    fn tau_examples() {
        let g = GroupSpec::cyclic(2).unwrap();
        assert!((g.tau(g.identity()) - Matrix2::identity()).norm() < 1e-15);
        assert!((g.tau(g.rotation(1)) - Matrix2::new(-1.0, 0.0, 0.0, -1.0)).norm() < 1e-15);
        let cs = GroupSpec::reflection();
        let s = cs.reflection_element(0).unwrap();
        assert_eq!(cs.tau(s), Matrix2::new(1.0, 0.0, 0.0, -1.0));
    }

    #[test]
    fn parse_and_format_round_trip() {
        let g = GroupSpec::dihedral(5).unwrap();
        for a in g.elements() {
            assert_eq!(g.parse_element(&a.to_string()).unwrap(), a);
        }
        assert_eq!(g.parse_element("s*r").unwrap(), g.reflection_element(1).unwrap());
        assert_eq!(g.parse_element("r^-1").unwrap(), g.rotation(4));
        assert!(GroupSpec::cyclic(4).unwrap().parse_element("s").is_err());
        assert!(g.parse_element("t^2").is_err());
    }

    #[test]
    fn serde_forms() {
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"cyclic","k":6}"#).unwrap();
        assert_eq!(g, GroupSpec::cyclic(6).unwrap());
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"reflection"}"#).unwrap();
        assert_eq!(g.order(), 2);
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"dihedral","k":1}"#).unwrap();
        assert_eq!(g.kind(), GroupKind::Reflection);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"kind":"cyclic","k":0}"#).is_err());
        assert!(serde_json::from_str::<GroupSpec>(r#"{"kind":"dihedral"}"#).is_err());
        let back = serde_json::to_string(&GroupSpec::dihedral(3).unwrap()).unwrap();
        assert_eq!(back, r#"{"kind":"dihedral","k":3}"#);
    }

    fn small_groups() -> Vec<GroupSpec> {
        let mut v = vec![GroupSpec::reflection()];
        for k in 1..=12 {
            v.push(GroupSpec::cyclic(k).unwrap());
            v.push(GroupSpec::dihedral(k).unwrap());
        }
        v
    }

    #[test]
    fn group_axioms_exhaustive() {
        for g in small_groups() {
            for a in g.elements() {
                assert_eq!(g.op(a, g.inv(a)), g.identity());
                assert_eq!(g.order() as u32 % g.order_of(a), 0, "Lagrange in {g}");
                assert_eq!(g.pow(a, g.order_of(a) as u64), g.identity());
                for b in g.elements() {
                    for c in g.elements() {
                        assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn tau_is_a_homomorphism() {
        for g in small_groups().into_iter().filter(|g| g.order() <= 24) {
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = g.tau(a) * g.tau(b);
                    let rhs = g.tau(g.op(a, b));
                    assert!((lhs - rhs).norm() <= 1e-12, "{g}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn dihedral_classification_rule() {
        let g = GroupSpec::dihedral(6).unwrap();
        let els: Vec<_> = g.elements().collect();
        for &a in &els {
            for &b in &els {
                let h = g.subgroup_generated([a, b]);
                let reflections = h.elements().iter().filter(|x| x.reflection_bit()).count();
                let rotations = h.elements().iter().filter(|x| !x.reflection_bit() && !x.is_identity()).count();
                let expect = reflections >= 2 || (reflections >= 1 && rotations >= 1);
                assert_eq!(h.classify(&g) == SubgroupClass::Dihedral, expect);
            }
        }
    }
}
