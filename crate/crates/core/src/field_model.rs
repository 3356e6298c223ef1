//! Places of the ground field, the automorphisms of the field that fix the
//! splitting class, and the two permutation actions on invariant vectors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::brauer_witt::OmegaVector;
use crate::error::{Error, Result};
use crate::invariant_algebra::PlaceKind;
use crate::perm::{closure, Perm};

/// Place label. Ordered naturally, so `v2 < v11` and `5a < 5b < 7`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaceId(pub String);

impl PlaceId {
    pub fn new(s: impl Into<String>) -> Self {
        PlaceId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn chunks(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..=bytes.len() {
        if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
            out.push((bytes[start].is_ascii_digit(), &s[start..i]));
            start = i;
        }
    }
    out
}

impl Ord for PlaceId {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (chunks(&self.0), chunks(&other.0));
        for ((da, sa), (db, sb)) in a.iter().zip(b.iter()) {
            let ord = if *da && *db {
                let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
                ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
            } else {
                sa.cmp(sb)
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.len().cmp(&b.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PlaceId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PlaceId {
    fn from(s: &str) -> Self {
        PlaceId(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceLabel {
    pub id: PlaceId,
    pub kind: PlaceKind,
    /// Finite places with the same class have isomorphic completions (with
    /// the splitting class). `None` for archimedean places.
    pub adelic_class: Option<String>,
}

impl PlaceLabel {
    pub fn finite(id: &str, kind: PlaceKind, class: &str) -> Self {
        PlaceLabel {
            id: id.into(),
            kind,
            adelic_class: Some(class.to_string()),
        }
    }
    pub fn real(id: &str, kind: PlaceKind) -> Self {
        PlaceLabel {
            id: id.into(),
            kind,
            adelic_class: None,
        }
    }
}

/// Whether the fiber of the outer-class map through the splitting class is a
/// single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HbarFiber {
    Trivial,
    Nontrivial,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub degree: u32,
    pub real_places: Vec<PlaceLabel>,
    pub complex_place_count: u32,
    /// Only the finite places carrying data need to be listed.
    pub finite_places: Vec<PlaceLabel>,
    pub locally_determined: bool,
    pub galois_over_q: bool,
    pub hbar_fiber: HbarFiber,
}

impl FieldDescriptor {
    /// The rationals with the given finite places, all in singleton classes.
    pub fn rationals(finite: &[(&str, PlaceKind)], real_kind: PlaceKind) -> Self {
        FieldDescriptor {
            degree: 1,
            real_places: vec![PlaceLabel::real("inf", real_kind)],
            complex_place_count: 0,
            finite_places: finite
                .iter()
                .map(|(id, k)| PlaceLabel::finite(id, *k, id))
                .collect(),
            locally_determined: true,
            galois_over_q: true,
            hbar_fiber: HbarFiber::Trivial,
        }
    }

    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }

    pub fn is_totally_imaginary(&self) -> bool {
        self.real_places.is_empty()
    }

    /// Finite places followed by real places; the index space on which place
    /// symmetries act.
    pub fn all_places(&self) -> Vec<&PlaceLabel> {
        self.finite_places.iter().chain(self.real_places.iter()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.all_places().iter().position(|p| p.id.as_str() == id)
    }

    pub fn place(&self, id: &str) -> Option<&PlaceLabel> {
        self.all_places().into_iter().find(|p| p.id.as_str() == id)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Field(m));
        if self.degree == 0 {
            return err("degree must be positive".into());
        }
        let r = self.real_places.len() as u32;
        if r + 2 * self.complex_place_count != self.degree {
            return err(format!(
                "{r} real and {} complex places do not match degree {}",
                self.complex_place_count, self.degree
            ));
        }
        let mut ids = BTreeSet::new();
        for p in self.all_places() {
            if !ids.insert(p.id.clone()) {
                return err(format!("duplicate place label {}", p.id));
            }
        }
        let mut class_kind: HashMap<&str, PlaceKind> = HashMap::new();
        for p in &self.finite_places {
            if !p.kind.is_finite() {
                return err(format!("finite place {} has kind {:?}", p.id, p.kind));
            }
            let class = p
                .adelic_class
                .as_deref()
                .ok_or_else(|| Error::Field(format!("finite place {} lacks a class", p.id)))?;
            if let Some(k) = class_kind.insert(class, p.kind) {
                if k != p.kind {
                    return err(format!("places in class {class} have different kinds"));
                }
            }
        }
        for p in &self.real_places {
            if !p.kind.is_real() {
                return err(format!("real place {} has kind {:?}", p.id, p.kind));
            }
        }
        if self.galois_over_q && self.hbar_fiber == HbarFiber::Nontrivial {
            return err("the outer-class fiber is trivial over Galois fields".into());
        }
        if self.galois_over_q && r != 0 && r != self.degree {
            return err("a Galois field is totally real or totally imaginary".into());
        }
        if self.degree == 1 {
            if r != 1 || !self.locally_determined || !self.galois_over_q {
                return err("degree 1 means the rationals: one real place, Galois, locally determined".into());
            }
            if self.hbar_fiber == HbarFiber::Nontrivial {
                return err("hbar fiber is trivial over the rationals".into());
            }
        }
        Ok(())
    }

    /// The effective fiber answer: Galois fields (and the rationals) have a
    /// trivial fiber regardless of what was recorded.
    pub fn resolved_hbar(&self) -> HbarFiber {
        if self.galois_over_q {
            HbarFiber::Trivial
        } else {
            self.hbar_fiber
        }
    }
}

/// Generators of the automorphisms of the field fixing the splitting class,
/// as permutations of [`FieldDescriptor::all_places`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaceSymmetry {
    pub generators: Vec<Perm>,
}

impl PlaceSymmetry {
    pub fn trivial() -> Self {
        PlaceSymmetry::default()
    }

    /// Each generator is a list of label cycles, e.g. `[["5a","5b"],["w1","w2"]]`.
    pub fn from_label_cycles(field: &FieldDescriptor, gens: &[Vec<Vec<&str>>]) -> Result<Self> {
        let n = field.all_places().len();
        let mut out = Vec::new();
        for g in gens {
            let mut cycles = Vec::new();
            for c in g {
                let idx: Result<Vec<usize>> = c
                    .iter()
                    .map(|l| {
                        field
                            .index_of(l)
                            .ok_or_else(|| Error::Symmetry(format!("unknown place {l}")))
                    })
                    .collect();
                cycles.push(idx?);
            }
            out.push(Perm::from_cycles(n, &cycles)?);
        }
        Ok(PlaceSymmetry { generators: out })
    }

    /// All group elements (identity first).
    pub fn elements(&self, field: &FieldDescriptor) -> Result<Vec<Perm>> {
        let n = field.all_places().len();
        closure(n, &self.generators, field.degree.max(1) as usize)
    }

    pub fn validate(&self, field: &FieldDescriptor) -> Result<()> {
        let places = field.all_places();
        let n = places.len();
        for g in &self.generators {
            if g.degree() != n {
                return Err(Error::Symmetry(format!(
                    "generator acts on {} points, field has {n} places",
                    g.degree()
                )));
            }
            for (i, p) in places.iter().enumerate() {
                let q = places[g.apply(i)];
                if q.kind != p.kind {
                    return Err(Error::Symmetry(format!(
                        "{g} sends {} to {} of a different kind",
                        p.id, q.id
                    )));
                }
                if q.adelic_class != p.adelic_class {
                    return Err(Error::Symmetry(format!(
                        "{} and {} lie in different adelic classes",
                        p.id, q.id
                    )));
                }
            }
        }
        let order = self
            .elements(field)
            .map_err(|_| {
                Error::Symmetry(format!("generated group is larger than the degree {}", field.degree))
            })?
            .len() as u32;
        if field.degree % order != 0 {
            return Err(Error::Symmetry(format!(
                "group of order {order} does not divide degree {}",
                field.degree
            )));
        }
        Ok(())
    }

    /// Labels as cycles, for printing.
    pub fn label_cycles(&self, field: &FieldDescriptor) -> Vec<Vec<Vec<String>>> {
        let places = field.all_places();
        self.generators
            .iter()
            .map(|g| {
                g.cycles()
                    .into_iter()
                    .map(|c| c.into_iter().map(|i| places[i].id.0.clone()).collect())
                    .collect()
            })
            .collect()
    }
}

/// Moves the value at place `i` to place `g(i)`.
pub fn permute_omega(omega: &OmegaVector, field: &FieldDescriptor, g: &Perm) -> OmegaVector {
    let places = field.all_places();
    let mut out = omega.clone();
    for (i, p) in places.iter().enumerate() {
        let target = &places[g.apply(i)].id;
        if let Some(e) = omega.finite.get(&p.id) {
            out.finite.insert(target.clone(), *e);
        } else if let Some(e) = omega.real.get(&p.id) {
            out.real.insert(target.clone(), *e);
        }
    }
    out
}

/// `omega` moved by every automorphism in the group.
pub fn global_orbit(
    omega: &OmegaVector,
    field: &FieldDescriptor,
    sym: &PlaceSymmetry,
) -> Result<BTreeSet<OmegaVector>> {
    Ok(sym
        .elements(field)?
        .iter()
        .map(|g| permute_omega(omega, field, g))
        .collect())
}

/// Largest adelic orbit that is enumerated in full.
pub const ADELIC_ORBIT_CAP: u128 = 200_000;

fn classes_of(field: &FieldDescriptor) -> BTreeMap<&str, Vec<&PlaceLabel>> {
    let mut classes: BTreeMap<&str, Vec<&PlaceLabel>> = BTreeMap::new();
    for p in &field.finite_places {
        classes
            .entry(p.adelic_class.as_deref().unwrap_or(p.id.as_str()))
            .or_default()
            .push(p);
    }
    classes
}

/// Number of elements of [`adelic_orbit`], saturating.
pub fn adelic_orbit_size(omega: &OmegaVector, field: &FieldDescriptor) -> u128 {
    let mut total: u128 = 1;
    for members in classes_of(field).values() {
        let mut counts: BTreeMap<_, u128> = BTreeMap::new();
        for p in members {
            *counts.entry(omega.finite[&p.id]).or_default() += 1;
        }
        // multinomial coefficient, built up one binomial at a time
        let mut placed: u128 = 0;
        for c in counts.values() {
            for i in 1..=*c {
                placed += 1;
                total = total.saturating_mul(placed) / i;
            }
        }
    }
    total
}

/// Rearrangements of the finite coordinates within each adelic class. The
/// result carries no real coordinates.
pub fn adelic_orbit(omega: &OmegaVector, field: &FieldDescriptor) -> BTreeSet<OmegaVector> {
    let mut out = BTreeSet::new();
    for_each_rearrangement(omega, field, |w| {
        out.insert(w);
        true
    });
    out
}

/// Up to `limit` elements of the adelic orbit outside `known`, without
/// building the whole orbit.
pub fn adelic_escapes(
    omega: &OmegaVector,
    field: &FieldDescriptor,
    known: &BTreeSet<OmegaVector>,
    limit: usize,
) -> Vec<OmegaVector> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_rearrangement(omega, field, |w| {
        if !known.contains(&w) {
            out.push(w);
        }
        out.len() < limit
    });
    out
}

/// Calls `f` on every rearrangement until it returns false.
fn for_each_rearrangement(omega: &OmegaVector, field: &FieldDescriptor, mut f: impl FnMut(OmegaVector) -> bool) {
    let classes: Vec<(Vec<&PlaceLabel>, Vec<Vec<crate::brauer_witt::Entry>>)> = classes_of(field)
        .into_values()
        .filter(|m| m.len() >= 2)
        .map(|members| {
            let values: Vec<_> = members.iter().map(|p| omega.finite[&p.id]).collect();
            let arr = multiset_permutations(values);
            (members, arr)
        })
        .collect();
    let base = omega.finite_part();
    let mut idx = vec![0usize; classes.len()];
    loop {
        let mut w = base.clone();
        for ((members, arr), &i) in classes.iter().zip(&idx) {
            for (p, e) in members.iter().zip(&arr[i]) {
                w.finite.insert(p.id.clone(), *e);
            }
        }
        if !f(w) {
            return;
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == idx.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < classes[k].1.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn multiset_permutations<T: Ord + Clone>(mut v: Vec<T>) -> Vec<Vec<T>> {
    v.sort();
    let mut out = vec![v.clone()];
    loop {
        // next lexicographic permutation
        let n = v.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

/// The subgroup of elements fixing the given place.
pub fn stabilizer_subgroup(
    sym: &PlaceSymmetry,
    field: &FieldDescriptor,
    place: &str,
) -> Result<PlaceSymmetry> {
    let i = field
        .index_of(place)
        .ok_or_else(|| Error::Symmetry(format!("unknown place {place}")))?;
    let generators = sym
        .elements(field)?
        .into_iter()
        .filter(|g| g.apply(i) == i && !g.is_identity())
        .collect();
    Ok(PlaceSymmetry { generators })
}

/// Whether some element sends place `a` to place `b`.
pub fn moves_place(sym: &PlaceSymmetry, field: &FieldDescriptor, a: &str, b: &str) -> Result<bool> {
    let (i, j) = match (field.index_of(a), field.index_of(b)) {
        (Some(i), Some(j)) => (i, j),
        _ => return Err(Error::Symmetry(format!("unknown place {a} or {b}"))),
    };
    Ok(sym.elements(field)?.iter().any(|g| g.apply(i) == j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v: Vec<PlaceId> = ["v11", "v2", "5b", "5a", "7", "3"].iter().map(|s| (*s).into()).collect();
        v.sort();
        let s: Vec<&str> = v.iter().map(|p| p.as_str()).collect();
        assert_eq!(s, ["3", "5a", "5b", "7", "v2", "v11"]);
    }

    #[test]
    fn multiset_perms() {
        assert_eq!(multiset_permutations(vec![1, 1, 0]).len(), 3);
        assert_eq!(multiset_permutations(vec![1, 2, 3]).len(), 6);
    }

    #[test]
    fn galois_with_nontrivial_fiber_rejected() {
        let mut f = FieldDescriptor::rationals(&[], PlaceKind::RealInner);
        f.hbar_fiber = HbarFiber::Nontrivial;
        assert!(f.validate().is_err());
    }
}
