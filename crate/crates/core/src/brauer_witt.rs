//! Invariant vectors: one local class per finite and real place, subject to
//! the global sum condition. Also the admissible-subset orbit and the
//! weak-uniformity test built from it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_model::{
    adelic_orbit, adelic_orbit_size, global_orbit, FieldDescriptor, PlaceId, PlaceSymmetry, ADELIC_ORBIT_CAP,
};
use crate::invariant_algebra::{
    c_local, center_shape, h2_local, sym_act, Family, GroupType, LocalClass, PlaceKind,
};

/// Default limit on the number of inner-twin places for exhaustive subset
/// enumeration; overridden by `RIGIDITY_SUBSET_CAP`.
pub const DEFAULT_SUBSET_CAP: usize = 24;
const HARD_SUBSET_CAP: usize = 40;

pub fn subset_cap() -> usize {
    std::env::var("RIGIDITY_SUBSET_CAP")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map(|c| c.min(HARD_SUBSET_CAP))
        .unwrap_or(DEFAULT_SUBSET_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Entry {
    pub kind: PlaceKind,
    pub class: LocalClass,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OmegaVector {
    pub group_type: GroupType,
    pub finite: BTreeMap<PlaceId, Entry>,
    pub real: BTreeMap<PlaceId, Entry>,
}

impl OmegaVector {
    /// Checks that every value lies in the local group for its place kind.
    /// Coherence is checked separately.
    pub fn new(
        group_type: GroupType,
        finite: BTreeMap<PlaceId, Entry>,
        real: BTreeMap<PlaceId, Entry>,
    ) -> Result<Self> {
        for (id, e) in finite.iter() {
            if !e.kind.is_finite() {
                return Err(Error::Shape(format!("{id} is listed as finite but has kind {:?}", e.kind)));
            }
            c_local(&group_type, e.kind, &e.class)
                .map_err(|err| Error::Shape(format!("place {id}: {err}")))?;
        }
        for (id, e) in real.iter() {
            if !e.kind.is_real() {
                return Err(Error::Shape(format!("{id} is listed as real but has kind {:?}", e.kind)));
            }
            c_local(&group_type, e.kind, &e.class)
                .map_err(|err| Error::Shape(format!("place {id}: {err}")))?;
        }
        Ok(OmegaVector {
            group_type,
            finite,
            real,
        })
    }

    /// Zero vector on the places of `field`.
    pub fn zero(group_type: GroupType, field: &FieldDescriptor) -> Result<Self> {
        let mk = |p: &crate::field_model::PlaceLabel| -> Result<(PlaceId, Entry)> {
            let (shape, _) = h2_local(&group_type, p.kind)?;
            Ok((
                p.id.clone(),
                Entry {
                    kind: p.kind,
                    class: shape.zero(),
                },
            ))
        };
        let finite = field.finite_places.iter().map(mk).collect::<Result<_>>()?;
        let real = field.real_places.iter().map(mk).collect::<Result<_>>()?;
        OmegaVector::new(group_type, finite, real)
    }

    pub fn finite_part(&self) -> OmegaVector {
        OmegaVector {
            group_type: self.group_type,
            finite: self.finite.clone(),
            real: BTreeMap::new(),
        }
    }

    pub fn class_at(&self, id: &str) -> Option<LocalClass> {
        let key = PlaceId::new(id);
        self.finite
            .get(&key)
            .or_else(|| self.real.get(&key))
            .map(|e| e.class)
    }

    pub fn set_class(&mut self, id: &PlaceId, class: LocalClass) {
        if let Some(e) = self.finite.get_mut(id) {
            e.class = class;
        } else if let Some(e) = self.real.get_mut(id) {
            e.class = class;
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PlaceId, &Entry)> {
        self.finite.iter().chain(self.real.iter())
    }

    pub fn is_coherent(&self) -> bool {
        tate_sum(self).map(|s| s.is_zero()).unwrap_or(false)
    }

    pub fn check_coherent(&self) -> Result<()> {
        let s = tate_sum(self)?;
        if s.is_zero() {
            Ok(())
        } else {
            Err(Error::Incoherent { sum: s.to_string() })
        }
    }

    /// The diagram automorphism applied at every place.
    pub fn sigma(&self) -> OmegaVector {
        let mut out = self.clone();
        for e in out.finite.values_mut().chain(out.real.values_mut()) {
            e.class = sym_act(&self.group_type, e.kind, &e.class).expect("validated shape");
        }
        out
    }

    /// Finite values as a compact string, e.g. `(1/3, 2/3, 2/3, 1/3)`.
    pub fn finite_string(&self) -> String {
        let v: Vec<String> = self.finite.values().map(|e| e.class.to_string()).collect();
        format!("({})", v.join(", "))
    }
}

impl fmt::Display for OmegaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fin: Vec<String> = self.finite.iter().map(|(k, e)| format!("{k}:{}", e.class)).collect();
        write!(f, "[{}]", fin.join(" "))?;
        if !self.real.is_empty() {
            let re: Vec<String> = self.real.iter().map(|(k, e)| format!("{k}:{}", e.class)).collect();
            write!(f, " | [{}]", re.join(" "))?;
        }
        Ok(())
    }
}

/// Sum of the images of all local classes in the global target.
pub fn tate_sum(omega: &OmegaVector) -> Result<LocalClass> {
    let t = &omega.group_type;
    let mut acc = center_shape(t).zero();
    for (_, e) in omega.entries() {
        acc = acc.add(&c_local(t, e.kind, &e.class)?)?;
    }
    Ok(acc)
}

/// Finite places whose value is moved by the local diagram automorphism.
pub fn inner_twin_places(omega: &OmegaVector) -> Vec<PlaceId> {
    omega
        .finite
        .iter()
        .filter(|(_, e)| {
            sym_act(&omega.group_type, e.kind, &e.class).map(|y| y != e.class).unwrap_or(false)
        })
        .map(|(k, _)| k.clone())
        .collect()
}

/// Orbit of `omega` under the local automorphisms that keep the global sum
/// unchanged. Subsets are stored as bit masks over `twins`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SOmegaOrbit {
    pub twins: Vec<PlaceId>,
    pub admissible_masks: Vec<u64>,
    pub elements: BTreeSet<OmegaVector>,
}

impl SOmegaOrbit {
    pub fn subsets(&self) -> impl Iterator<Item = Vec<PlaceId>> + '_ {
        self.admissible_masks.iter().map(move |&m| {
            self.twins
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
    }
}

/// Decides, from the global images of the twin values, which flip sets keep
/// the global sum fixed.
struct Admissibility {
    rule: Rule,
    values: Vec<LocalClass>,
}

enum Rule {
    SumIn(Vec<LocalClass>),
    EvenSize,
    Any,
}

impl Admissibility {
    fn new(omega: &OmegaVector, twins: &[PlaceId]) -> Result<Self> {
        let t = &omega.group_type;
        let values = twins
            .iter()
            .map(|p| {
                let e = &omega.finite[p];
                c_local(t, e.kind, &e.class)
            })
            .collect::<Result<Vec<_>>>()?;
        let target = center_shape(t);
        let rule = if t.is_outer() {
            Rule::Any
        } else {
            match t.family() {
                Family::D => Rule::EvenSize,
                Family::A if t.rank() % 2 == 1 => {
                    let half = (t.rank() + 1) / 2;
                    let m = t.rank() + 1;
                    Rule::SumIn(vec![target.zero(), LocalClass::Cyclic { m, r: half }])
                }
                _ => Rule::SumIn(vec![target.zero()]),
            }
        };
        Ok(Admissibility { rule, values })
    }

    fn admits(&self, mask: u64) -> bool {
        match &self.rule {
            Rule::Any => true,
            Rule::EvenSize => mask.count_ones() % 2 == 0,
            Rule::SumIn(allowed) => {
                let mut acc = allowed[0].shape().zero();
                for (i, v) in self.values.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc = acc.add(v).expect("same target");
                    }
                }
                allowed.contains(&acc)
            }
        }
    }
}

fn flip(omega: &OmegaVector, twins: &[PlaceId], mask: u64) -> OmegaVector {
    let mut out = omega.clone();
    for (i, p) in twins.iter().enumerate() {
        if mask >> i & 1 == 1 {
            let e = out.finite.get_mut(p).expect("twin is a finite place");
            e.class = sym_act(&omega.group_type, e.kind, &e.class).expect("validated shape");
        }
    }
    out
}

pub fn s_omega_orbit(omega: &OmegaVector) -> Result<SOmegaOrbit> {
    s_omega_orbit_with_cap(omega, subset_cap())
}

pub fn s_omega_orbit_with_cap(omega: &OmegaVector, cap: usize) -> Result<SOmegaOrbit> {
    let twins = inner_twin_places(omega);
    if twins.len() > cap.min(HARD_SUBSET_CAP) {
        let partial = partial_certificate(omega, &twins)?;
        return Err(Error::Capacity {
            what: "inner-twin places for subset enumeration".into(),
            size: twins.len(),
            cap,
            partial: partial.map(|w| format!("third orbit element {}", w.finite_string())),
        });
    }
    let adm = Admissibility::new(omega, &twins)?;
    let mut admissible_masks = Vec::new();
    let mut elements = BTreeSet::new();
    for mask in 0..(1u64 << twins.len()) {
        if adm.admits(mask) {
            admissible_masks.push(mask);
            elements.insert(flip(omega, &twins, mask));
        }
    }
    Ok(SOmegaOrbit {
        twins,
        admissible_masks,
        elements,
    })
}

/// Looks through flip sets of size at most three for an orbit element other
/// than `omega` and its image under the global automorphism.
fn partial_certificate(omega: &OmegaVector, twins: &[PlaceId]) -> Result<Option<OmegaVector>> {
    let adm = Admissibility::new(omega, twins)?;
    let sigma = omega.sigma();
    let n = twins.len().min(63);
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let mask = (1u64 << a) | (1u64 << b) | (1u64 << c);
                if adm.admits(mask) {
                    let w = flip(omega, twins, mask);
                    if w != *omega && w.finite != sigma.finite {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Sort key for candidate twins: fewest changed finite coordinates first,
/// then the latest first change.
pub fn closeness_key(base: &OmegaVector, w: &OmegaVector) -> (usize, std::cmp::Reverse<usize>) {
    let diffs: Vec<usize> = base
        .finite
        .iter()
        .enumerate()
        .filter(|(_, (k, e))| w.finite.get(*k) != Some(e))
        .map(|(i, _)| i)
        .collect();
    let first = diffs.first().copied().unwrap_or(usize::MAX);
    (diffs.len(), std::cmp::Reverse(first))
}

/// Picks the candidate closest to `base` on finite places, ties broken by
/// canonical order.
pub fn closest_candidate<'a>(
    base: &OmegaVector,
    candidates: impl IntoIterator<Item = &'a OmegaVector>,
) -> Option<&'a OmegaVector> {
    candidates
        .into_iter()
        .min_by(|a, b| closeness_key(base, a).cmp(&closeness_key(base, b)).then_with(|| a.cmp(b)))
}

/// Flip sets over the twin places, filtered by admissibility.
pub(crate) struct FlipEnumerator {
    omega: OmegaVector,
    pub twins: Vec<PlaceId>,
    adm: Admissibility,
}

impl FlipEnumerator {
    pub fn new(omega: &OmegaVector) -> Result<Self> {
        let twins = inner_twin_places(omega);
        let adm = Admissibility::new(omega, &twins)?;
        Ok(FlipEnumerator {
            omega: omega.clone(),
            twins,
            adm,
        })
    }

    pub fn element(&self, mask: u64) -> Option<OmegaVector> {
        if self.adm.admits(mask) {
            Some(flip(&self.omega, &self.twins, mask))
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakUniformity {
    pub holds: bool,
    /// `{omega, sigma.omega}` moved by the field automorphisms, finite part only.
    pub lhs: BTreeSet<OmegaVector>,
    /// Admissible-subset orbit moved by the adelic rearrangements.
    pub rhs: BTreeSet<OmegaVector>,
    /// An element of `rhs` missing from `lhs`, when there is one.
    pub witness: Option<OmegaVector>,
}

pub fn weak_uniformity(
    omega: &OmegaVector,
    field: &FieldDescriptor,
    sym: &PlaceSymmetry,
) -> Result<WeakUniformity> {
    let mut lhs = BTreeSet::new();
    for start in [omega.clone(), omega.sigma()] {
        for w in global_orbit(&start, field, sym)? {
            lhs.insert(w.finite_part());
        }
    }
    let orbit = s_omega_orbit(omega)?;
    let size: u128 = orbit
        .elements
        .iter()
        .fold(0u128, |acc, e| acc.saturating_add(adelic_orbit_size(e, field)));
    if size > ADELIC_ORBIT_CAP {
        return Err(Error::Capacity {
            what: "adelic orbit".into(),
            size: usize::try_from(size).unwrap_or(usize::MAX),
            cap: ADELIC_ORBIT_CAP as usize,
            partial: None,
        });
    }
    let mut rhs = BTreeSet::new();
    for e in &orbit.elements {
        rhs.extend(adelic_orbit(e, field));
    }
    let witness = closest_candidate(omega, rhs.difference(&lhs)).cloned();
    Ok(WeakUniformity {
        holds: lhs == rhs,
        lhs,
        rhs,
        witness,
    })
}

/// Shortcut for outer types: two or more twins already break uniformity;
/// otherwise the orbit comparison reduces to the plain automorphism orbits.
/// `None` for inner types.
pub fn outer_fast_path(
    omega: &OmegaVector,
    field: &FieldDescriptor,
    sym: &PlaceSymmetry,
) -> Result<Option<bool>> {
    if !omega.group_type.is_outer() {
        return Ok(None);
    }
    if inner_twin_places(omega).len() >= 2 {
        return Ok(Some(false));
    }
    let global: BTreeSet<OmegaVector> = global_orbit(omega, field, sym)?
        .iter()
        .map(OmegaVector::finite_part)
        .collect();
    if adelic_orbit_size(omega, field) != global.len() as u128 {
        return Ok(Some(false));
    }
    Ok(Some(global == adelic_orbit(omega, field)))
}

/// Sufficient condition for too many inner twins: with `r` twins and modulus
/// `m` depending on the type, `degree < 2^floor((r-1)/m)` forces
/// non-uniformity.
pub fn inner_twin_bound(omega: &OmegaVector, field: &FieldDescriptor) -> bool {
    let t = &omega.group_type;
    if t.is_outer() || !t.has_symmetry() {
        return false;
    }
    let m = match t.family() {
        Family::A if t.rank() % 2 == 0 => t.rank() + 1,
        Family::A => (t.rank() - 1) / 2 + 1,
        Family::D => 2,
        Family::E6 => 3,
        _ => return false,
    };
    let r = inner_twin_places(omega).len() as u32;
    if r == 0 {
        return false;
    }
    let e = (r - 1) / m;
    if e >= 32 {
        return true;
    }
    (field.degree as u64) < (1u64 << e)
}

/// True when the two vectors give isomorphic local groups at every finite
/// place, up to rearranging places inside adelic classes.
pub fn locally_equivalent(a: &OmegaVector, b: &OmegaVector, field: &FieldDescriptor) -> bool {
    if a.group_type != b.group_type {
        return false;
    }
    let t = &a.group_type;
    let profile = |w: &OmegaVector| -> Option<BTreeMap<String, Vec<(PlaceKind, LocalClass)>>> {
        let mut m: BTreeMap<String, Vec<(PlaceKind, LocalClass)>> = BTreeMap::new();
        for p in &field.finite_places {
            let e = w.finite.get(&p.id)?;
            let s = sym_act(t, e.kind, &e.class).ok()?;
            let rep = e.class.min(s);
            m.entry(p.adelic_class.clone().unwrap_or_default())
                .or_default()
                .push((e.kind, rep));
        }
        for v in m.values_mut() {
            v.sort();
        }
        Some(m)
    };
    match (profile(a), profile(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}
