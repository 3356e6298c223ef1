//! Closed-form criteria for two special situations: groups over the
//! rationals, and quasi-split groups over Galois fields. These recompute
//! everything they need from the raw invariants so that they can serve as an
//! independent cross-check of [`super::classify`].

use std::collections::BTreeSet;

use crate::descriptor::GroupDescriptor;
use crate::error::{Error, Result};
use crate::invariant_algebra::{global_sym_act, c_local, Family, GroupType, LocalClass, PlaceKind};
use crate::real_forms::RealFormTag;

use super::{CheckState, Outcome, Reason, Verdict};

const BRUTE_FORCE_LIMIT: usize = 22;

/// Whether the finite value is a twin value, read off the explicit list of
/// non-fixed classes for each type.
fn is_twin_value(t: &GroupType, kind: PlaceKind, x: &LocalClass) -> bool {
    if kind != PlaceKind::FiniteInner || !t.has_symmetry() {
        return false;
    }
    match (t.family(), x) {
        (Family::A, LocalClass::Cyclic { m, r }) => {
            if t.rank() % 2 == 0 {
                *r != 0
            } else {
                *r != 0 && *r != m / 2
            }
        }
        (Family::E6, LocalClass::Cyclic { r, .. }) => *r != 0,
        (Family::D, LocalClass::Klein(a, b)) => a != b,
        (Family::D, LocalClass::Cyclic { r, .. }) => *r == 1 || *r == 3,
        _ => false,
    }
}

fn flipped(x: &LocalClass) -> LocalClass {
    match x {
        LocalClass::Klein(a, b) => LocalClass::Klein(*b, *a),
        LocalClass::Cyclic { m, r } => LocalClass::Cyclic { m: *m, r: (m - r) % m },
        LocalClass::Trivial => LocalClass::Trivial,
    }
}

/// Size of the twin-flip orbit by plain enumeration of all flip sets, keeping
/// those whose summed global image is fixed by the diagram automorphism.
pub fn brute_force_flip_orbit(d: &GroupDescriptor) -> Result<BTreeSet<Vec<LocalClass>>> {
    let t = &d.group_type;
    let entries: Vec<_> = d.omega.finite.values().copied().collect();
    let twins: Vec<usize> = (0..entries.len())
        .filter(|&i| is_twin_value(t, entries[i].kind, &entries[i].class))
        .collect();
    if twins.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity {
            what: "twin places for the brute-force orbit".into(),
            size: twins.len(),
            cap: BRUTE_FORCE_LIMIT,
            partial: None,
        });
    }
    let images: Vec<LocalClass> = twins
        .iter()
        .map(|&i| c_local(t, entries[i].kind, &entries[i].class))
        .collect::<Result<_>>()?;
    let zero = crate::invariant_algebra::center_shape(t).zero();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << twins.len()) {
        let mut sum = zero;
        for (j, img) in images.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sum = sum.add(img)?;
            }
        }
        if global_sym_act(t, &sum)? != sum {
            continue;
        }
        let mut v: Vec<LocalClass> = entries.iter().map(|e| e.class).collect();
        for (j, &i) in twins.iter().enumerate() {
            if mask >> j & 1 == 1 {
                v[i] = flipped(&v[i]);
            }
        }
        out.insert(v);
    }
    Ok(out)
}

fn twin_count(d: &GroupDescriptor) -> usize {
    d.omega
        .finite
        .values()
        .filter(|e| is_twin_value(&d.group_type, e.kind, &e.class))
        .count()
}

/// Some nonempty subset of the finite values sums to `+-target` mod `m`.
fn brute_subset_hits(values: &[u32], m: u32, target: u32) -> Result<bool> {
    let nz: Vec<u32> = values.iter().copied().filter(|v| v % m != 0).collect();
    if nz.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity {
            what: "nonzero coordinates for the brute-force subset scan".into(),
            size: nz.len(),
            cap: BRUTE_FORCE_LIMIT,
            partial: None,
        });
    }
    for mask in 1u64..(1u64 << nz.len()) {
        let s: u64 = nz
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| *v as u64)
            .sum();
        let s = (s % m as u64) as u32;
        if s == target % m || s == (m - target % m) % m {
            return Ok(true);
        }
    }
    Ok(false)
}

struct Clauses {
    branch: &'static str,
    reasons: Vec<Reason>,
    unknown: Vec<String>,
}

impl Clauses {
    fn new(branch: &'static str) -> Self {
        Clauses {
            branch,
            reasons: vec![],
            unknown: vec![],
        }
    }
    fn push(&mut self, condition: impl Into<String>, ok: bool) {
        self.reasons.push(Reason {
            condition: condition.into(),
            status: if ok { CheckState::Holds } else { CheckState::Fails },
        });
    }
    fn finish(self) -> Verdict {
        let outcome = if self.reasons.iter().any(|r| r.status == CheckState::Fails) {
            Outcome::NotRigid
        } else if !self.unknown.is_empty() {
            Outcome::Undetermined
        } else {
            Outcome::Rigid
        };
        Verdict {
            outcome,
            branch: self.branch.into(),
            reasons: self.reasons,
            witness: None,
            missing: self.unknown,
        }
    }
}

/// Classification of groups over the rationals by the explicit list of
/// rigid cases.
pub fn specialize_q(d: &GroupDescriptor) -> Result<Verdict> {
    if d.field.degree != 1 {
        return Err(Error::Precondition("the rationals criterion needs a degree one field".into()));
    }
    let t = d.group_type;
    let real = &d.field.real_places[0];
    let tag = d.real_forms[&real.id].canonical();
    let mut c = Clauses::new("rationals");
    if tag == RealFormTag::Unspecified {
        c.unknown.push(format!("name of the real form at {}", real.id));
    }
    let rank = t.rank();
    let outer = t.is_outer();
    let twins = twin_count(d);
    match t.family() {
        Family::A if rank == 1 => c.push("type A1", true),
        Family::A if !outer && (rank % 2 == 0 || rank % 4 == 1) => {
            let orbit = brute_force_flip_orbit(d)?;
            c.push("at most two twin-flip images", orbit.len() <= 2);
        }
        Family::A if !outer => {
            // rank = 4n+3
            let n = (rank - 3) / 4;
            let orbit = brute_force_flip_orbit(d)?;
            c.push("at most two twin-flip images", orbit.len() <= 2);
            let values: Vec<u32> = d
                .omega
                .finite
                .values()
                .map(|e| match e.class {
                    LocalClass::Cyclic { r, .. } => r,
                    _ => 0,
                })
                .collect();
            let hit = brute_subset_hits(&values, rank + 1, n + 1)?;
            c.push(format!("no subset of coordinates sums to +-{} mod {}", n + 1, rank + 1), !hit);
        }
        Family::A if rank % 2 == 0 => {
            let nonqs = d.omega.finite.values().filter(|e| !e.class.is_zero()).count();
            c.push("not quasi-split at at most one finite place", nonqs <= 1);
            c.push("split at the real place", matches!(tag, RealFormTag::SlR(_)));
        }
        Family::A => {
            c.push("inner twin at at most one finite place", twins <= 1);
            let ok = real.kind == PlaceKind::RealInner || (rank == 3 && tag == RealFormTag::Su(3, 1));
            c.push("inner at the real place, or SU(3,1) in rank three", ok);
        }
        Family::C => c.push(
            format!("real form Sp({},R)", 2 * rank),
            tag == RealFormTag::SpR(2 * rank),
        ),
        Family::D if rank % 2 == 0 => {
            if outer {
                c.push("no inner twin at a finite place", twins == 0);
            } else {
                c.push("inner twin at exactly one finite place", twins == 1);
            }
            c.push(format!("real form Spin*({})", 2 * rank), tag == RealFormTag::SpinStar(2 * rank));
        }
        Family::D if !outer => {
            c.push("rank five", rank == 5);
            c.push("no inner twin at a finite place", twins == 0);
            c.push("real form Spin(7,3)", tag == RealFormTag::Spin(7, 3));
        }
        Family::D => {
            c.push("inner twin at at most one finite place", twins <= 1);
            let ok = tag == RealFormTag::SpinStar(2 * rank) || (rank == 5 && tag == RealFormTag::Spin(7, 3));
            c.push("real form Spin*(2n), or Spin(7,3) in rank five", ok);
        }
        _ => c.push(format!("type {} is never rigid over the rationals", t.label()), false),
    }
    Ok(c.finish())
}

/// Classification of quasi-split groups over a Galois field.
pub fn specialize_quasisplit(d: &GroupDescriptor) -> Result<Verdict> {
    if !d.field.galois_over_q {
        return Err(Error::Precondition("the quasi-split criterion needs a Galois field".into()));
    }
    if d.omega.entries().any(|(_, e)| !e.class.is_zero()) {
        return Err(Error::Precondition("the quasi-split criterion needs all invariants zero".into()));
    }
    let t = d.group_type;
    let imaginary = d.field.real_places.is_empty();
    let tags: Vec<RealFormTag> = d.field.real_places.iter().map(|p| d.real_forms[&p.id].canonical()).collect();
    let mut c = Clauses::new("quasi-split-galois");
    match t.family() {
        Family::A if t.rank() % 2 == 0 => c.push(
            "split at every real place",
            tags.iter().all(|x| matches!(x, RealFormTag::SlR(_))),
        ),
        Family::A | Family::C => {
            let split_q = d.field.degree == 1
                && match tags[0] {
                    RealFormTag::SlR(_) => true,
                    RealFormTag::SpR(_) => true,
                    _ => false,
                };
            c.push("split over the rationals, or totally imaginary", split_q || imaginary);
        }
        _ => c.push("totally imaginary", imaginary),
    }
    Ok(c.finish())
}
