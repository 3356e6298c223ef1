//! Decides congruence rigidity from a group descriptor.
//!
//! Every branch lists the conditions of the matching classification result.
//! A failed condition carries candidate twins (invariant vectors of groups
//! that agree at all finite places but are not isomorphic); the first
//! candidate that survives an independent check becomes the witness.

pub mod corollaries;
pub mod subset_sum;

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::brauer_witt::{
    closeness_key, inner_twin_bound, inner_twin_places, locally_equivalent, subset_cap,
    weak_uniformity, FlipEnumerator, OmegaVector,
};
use crate::descriptor::GroupDescriptor;
use crate::error::{Error, Result};
use crate::field_model::{
    adelic_escapes, adelic_orbit_size, global_orbit, moves_place, stabilizer_subgroup, HbarFiber, PlaceId, PlaceSymmetry,
};
use crate::invariant_algebra::{Family, LocalClass, PlaceKind};

pub use corollaries::{specialize_q, specialize_quasisplit};
pub use subset_sum::subset_sum_forbidden;

const MAX_CANDIDATES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Rigid,
    NotRigid,
    Undetermined,
    OutOfScope,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Rigid => 0,
            Outcome::NotRigid => 1,
            Outcome::Undetermined => 2,
            Outcome::OutOfScope => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckState {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub condition: String,
    pub status: CheckState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A concrete non-isomorphic group with the same finite local data.
    Twin(Box<GroupDescriptor>),
    /// A twin whose existence is established but which has no finite
    /// description in the descriptor language.
    Symbolic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Name of the classification branch the reasons belong to.
    pub branch: String,
    pub reasons: Vec<Reason>,
    pub witness: Option<Witness>,
    pub missing: Vec<String>,
}

impl Verdict {
    pub fn out_of_scope(msg: &str) -> Verdict {
        Verdict {
            outcome: Outcome::OutOfScope,
            branch: "scope".into(),
            reasons: vec![Reason {
                condition: msg.to_string(),
                status: CheckState::Fails,
            }],
            witness: None,
            missing: vec![],
        }
    }

    pub fn twin(&self) -> Option<&GroupDescriptor> {
        match &self.witness {
            Some(Witness::Twin(d)) => Some(d),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match &self.witness {
            None => serde_json::Value::Null,
            Some(Witness::Twin(d)) => json!({
                "kind": "twin",
                "finite_invariants": d.omega.finite_string(),
                "descriptor": d.to_text(),
            }),
            Some(Witness::Symbolic(s)) => json!({ "kind": "symbolic", "description": s }),
        };
        json!({
            "outcome": self.outcome,
            "branch": self.branch,
            "reasons": self.reasons,
            "witness": witness,
            "missing": self.missing,
        })
    }

    pub fn to_human(&self) -> String {
        let mut s = format!("verdict: {:?}\nbranch: {}\n", self.outcome, self.branch);
        for r in &self.reasons {
            let mark = match r.status {
                CheckState::Holds => "holds",
                CheckState::Fails => "FAILS",
                CheckState::Unknown => "unknown",
            };
            s.push_str(&format!("  [{mark}] {}\n", r.condition));
        }
        for m in &self.missing {
            s.push_str(&format!("missing: {m}\n"));
        }
        match &self.witness {
            Some(Witness::Twin(d)) => {
                s.push_str(&format!(
                    "witness finite invariants: {}\nwitness descriptor:\n",
                    d.omega.finite_string()
                ));
                for line in d.to_text().lines() {
                    s.push_str(&format!("  {line}\n"));
                }
            }
            Some(Witness::Symbolic(w)) => s.push_str(&format!("witness: {w}\n")),
            None => {}
        }
        s
    }
}

enum Status {
    Pass,
    Fail {
        twins: Vec<OmegaVector>,
        symbolic: Option<String>,
    },
    Unknown(String),
}

struct Check {
    condition: String,
    status: Status,
}

fn check(condition: impl Into<String>, status: Status) -> Check {
    Check {
        condition: condition.into(),
        status,
    }
}

fn pass_if(condition: impl Into<String>, ok: bool, twins: impl FnOnce() -> Vec<OmegaVector>) -> Check {
    check(
        condition,
        if ok {
            Status::Pass
        } else {
            Status::Fail {
                twins: twins(),
                symbolic: None,
            }
        },
    )
}

pub fn classify(d: &GroupDescriptor) -> Result<Verdict> {
    let f = &d.field;
    let t = d.group_type;
    if !f.locally_determined {
        return Ok(Verdict {
            outcome: Outcome::Undetermined,
            branch: "field".into(),
            reasons: vec![],
            witness: None,
            missing: vec!["the ground field is not known to be determined by its finite adeles".into()],
        });
    }
    let r = f.real_places.len();
    let (branch, mut checks) = if !t.has_symmetry() {
        ("no-symmetry", no_symmetry(d)?)
    } else if r == 0 {
        ("symmetric-totally-imaginary", symmetric_imaginary(d)?)
    } else {
        match t.family() {
            Family::A => ("type-A-real", type_a_real(d)?),
            Family::D => ("type-D-real", type_d_real(d)?),
            _ => ("E6-real", e6_real(d)?),
        }
    };
    if t.is_outer() {
        checks.push(match f.resolved_hbar() {
            HbarFiber::Trivial => check("outer-class fiber is a single point", Status::Pass),
            HbarFiber::Nontrivial => check(
                "outer-class fiber is a single point",
                Status::Fail {
                    twins: vec![],
                    symbolic: Some(
                        "a form with the same finite local data but a different outer class in the same fiber"
                            .into(),
                    ),
                },
            ),
            HbarFiber::Unknown => check(
                "outer-class fiber is a single point",
                Status::Unknown("whether the outer-class fiber through the splitting class is trivial".into()),
            ),
        });
    }
    checks.extend(real_form_checks(d));
    finalize(d, branch, checks)
}

fn finalize(d: &GroupDescriptor, branch: &str, checks: Vec<Check>) -> Result<Verdict> {
    let reasons = checks
        .iter()
        .map(|c| Reason {
            condition: c.condition.clone(),
            status: match c.status {
                Status::Pass => CheckState::Holds,
                Status::Fail { .. } => CheckState::Fails,
                Status::Unknown(_) => CheckState::Unknown,
            },
        })
        .collect();
    // A failed condition with neither a verified twin nor a symbolic
    // certificate is acceptable only when another failed condition supplies
    // one; otherwise the checks contradict each other.
    let mut symbolic = None;
    let mut unbacked: Option<(&str, usize)> = None;
    let mut any_fail = false;
    for c in &checks {
        if let Status::Fail { twins, symbolic: sym } = &c.status {
            any_fail = true;
            for theta in twins {
                if let Some(w) = verified_twin(d, theta)? {
                    return Ok(Verdict {
                        outcome: Outcome::NotRigid,
                        branch: branch.into(),
                        reasons,
                        witness: Some(Witness::Twin(Box::new(w))),
                        missing: vec![],
                    });
                }
            }
            match sym {
                Some(s) => {
                    symbolic.get_or_insert_with(|| s.clone());
                }
                None => {
                    unbacked.get_or_insert((c.condition.as_str(), twins.len()));
                }
            }
        }
    }
    if any_fail {
        if symbolic.is_none() {
            if let Some((cond, n)) = unbacked {
                return Err(Error::Internal(format!(
                    "condition '{cond}' failed but none of {n} candidate twins survived the check"
                )));
            }
        }
        return Ok(Verdict {
            outcome: Outcome::NotRigid,
            branch: branch.into(),
            reasons,
            witness: symbolic.map(Witness::Symbolic),
            missing: vec![],
        });
    }
    let missing: Vec<String> = checks
        .iter()
        .filter_map(|c| match &c.status {
            Status::Unknown(m) => Some(m.clone()),
            _ => None,
        })
        .collect();
    Ok(Verdict {
        outcome: if missing.is_empty() {
            Outcome::Rigid
        } else {
            Outcome::Undetermined
        },
        branch: branch.into(),
        reasons,
        witness: None,
        missing,
    })
}

/// The full orbit of the input under the diagram automorphism and the field
/// automorphisms.
pub fn symmetric_global_orbit(d: &GroupDescriptor) -> Result<BTreeSet<OmegaVector>> {
    let mut out = global_orbit(&d.omega, &d.field, &d.symmetry)?;
    out.extend(global_orbit(&d.omega.sigma(), &d.field, &d.symmetry)?);
    Ok(out)
}

/// Builds the twin descriptor and checks it independently: valid and
/// coherent, same local data at every finite place, and outside the orbit of
/// the input.
fn verified_twin(d: &GroupDescriptor, theta: &OmegaVector) -> Result<Option<GroupDescriptor>> {
    let Ok(w) = d.with_omega(theta.clone()) else {
        return Ok(None);
    };
    if !locally_equivalent(&d.omega, &w.omega, &d.field) {
        return Ok(None);
    }
    if symmetric_global_orbit(d)?.contains(&w.omega) {
        return Ok(None);
    }
    Ok(Some(w))
}

fn real_form_checks(d: &GroupDescriptor) -> Vec<Check> {
    d.field
        .real_places
        .iter()
        .map(|p| {
            let tag = d.real_forms[&p.id];
            let cond = format!("real form {tag} at {} has trivial image in H1(R, Ad G)", p.id);
            match tag.q_image_trivial() {
                Some(true) => check(cond, Status::Pass),
                Some(false) => check(
                    cond,
                    Status::Fail {
                        twins: vec![],
                        symbolic: Some(format!(
                            "a group with the same invariants whose form at {} is another real form \
                             with the H2 class of {tag}; one exists because H1(R, G) -> H1(R, Ad G) \
                             is nontrivial for {tag}",
                            p.id
                        )),
                    },
                ),
                None => check(cond, Status::Unknown(format!("name of the real form at {}", p.id))),
            }
        })
        .collect()
}

fn with_real_part(finite: &OmegaVector, base: &OmegaVector) -> OmegaVector {
    OmegaVector {
        group_type: base.group_type,
        finite: finite.finite.clone(),
        real: base.real.clone(),
    }
}

fn sorted_candidates(base: &OmegaVector, it: impl IntoIterator<Item = OmegaVector>) -> Vec<OmegaVector> {
    let mut v: Vec<OmegaVector> = it.into_iter().map(|w| with_real_part(&w, base)).collect();
    v.sort_by(|a, b| closeness_key(base, a).cmp(&closeness_key(base, b)).then_with(|| a.cmp(b)));
    v.truncate(MAX_CANDIDATES);
    v
}

fn add_one(x: &LocalClass) -> LocalClass {
    match x {
        LocalClass::Cyclic { m, r } => LocalClass::Cyclic { m: *m, r: (r + 1) % m },
        other => *other,
    }
}

fn flip_reals(base: &OmegaVector, ids: &[&PlaceId]) -> OmegaVector {
    let mut out = base.clone();
    for id in ids {
        if let Some(e) = out.real.get_mut(*id) {
            e.class = add_one(&e.class);
        }
    }
    out
}

/// Pairs of real places with equal Z/2 values, inner places first.
fn equal_real_pairs(d: &GroupDescriptor) -> Vec<(PlaceId, PlaceId)> {
    let mut reals: Vec<_> = d
        .omega
        .real
        .iter()
        .filter(|(_, e)| matches!(e.class, LocalClass::Cyclic { m: 2, .. }))
        .collect();
    reals.sort_by_key(|(_, e)| e.kind != PlaceKind::RealInner);
    let mut out = Vec::new();
    for i in 0..reals.len() {
        for j in i + 1..reals.len() {
            if reals[i].1.class == reals[j].1.class {
                out.push((reals[i].0.clone(), reals[j].0.clone()));
            }
        }
    }
    out
}

fn flip_equal_pairs(d: &GroupDescriptor) -> Vec<OmegaVector> {
    equal_real_pairs(d)
        .iter()
        .take(MAX_CANDIDATES)
        .map(|(a, b)| flip_reals(&d.omega, &[a, b]))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lhs {
    /// `{omega, sigma.omega}` moved by the field automorphisms.
    WithSigma,
    /// `omega` moved by the field automorphisms only.
    Plain,
}

fn lhs_set(d: &GroupDescriptor, sym: &PlaceSymmetry, mode: Lhs) -> Result<BTreeSet<OmegaVector>> {
    let mut starts = vec![d.omega.clone()];
    if mode == Lhs::WithSigma {
        starts.push(d.omega.sigma());
    }
    let mut lhs = BTreeSet::new();
    for s in starts {
        for w in global_orbit(&s, &d.field, sym)? {
            lhs.insert(w.finite_part());
        }
    }
    Ok(lhs)
}

/// Elements of the admissible-flip orbit moved by adelic rearrangements that
/// escape `lhs`, searching flip sets of at most `max_size` places.
fn escape_candidates(
    d: &GroupDescriptor,
    sym: &PlaceSymmetry,
    mode: Lhs,
    max_size: usize,
) -> Result<Vec<OmegaVector>> {
    let lhs = lhs_set(d, sym, mode)?;
    let en = FlipEnumerator::new(&d.omega)?;
    let n = en.twins.len().min(63);
    let mut found = BTreeSet::new();
    let mut stack: Vec<(u64, usize, usize)> = vec![(0, 0, 0)];
    // depth-first over combinations of size <= max_size
    while let Some((mask, next, size)) = stack.pop() {
        if let Some(e) = en.element(mask) {
            found.extend(adelic_escapes(&e, &d.field, &lhs, MAX_CANDIDATES - found.len()));
            if found.len() >= MAX_CANDIDATES {
                break;
            }
        }
        if size < max_size {
            for i in (next..n).rev() {
                stack.push((mask | (1u64 << i), i + 1, size + 1));
            }
        }
    }
    Ok(sorted_candidates(&d.omega, found))
}

/// Weak uniformity with respect to `sym`, with shortcuts when too many twins
/// already force failure.
fn wu_status(d: &GroupDescriptor, sym: &PlaceSymmetry) -> Result<Status> {
    let w = &d.omega;
    let twins = inner_twin_places(w);
    let forced = (w.group_type.is_outer() && twins.len() >= 2) || inner_twin_bound(w, &d.field);
    let cap = subset_cap();
    if forced || twins.len() > cap {
        let c = escape_candidates(d, sym, Lhs::WithSigma, 4)?;
        if !c.is_empty() {
            return Ok(Status::Fail {
                twins: c,
                symbolic: None,
            });
        }
    }
    // The unflipped invariant alone can already have too many rearrangements.
    let lhs = lhs_set(d, sym, Lhs::WithSigma)?;
    if adelic_orbit_size(w, &d.field) > lhs.len() as u128 {
        let c = sorted_candidates(w, adelic_escapes(w, &d.field, &lhs, MAX_CANDIDATES));
        return Ok(Status::Fail {
            twins: c,
            symbolic: None,
        });
    }
    let wu = weak_uniformity(w, &d.field, sym)?;
    if wu.holds {
        if forced {
            return Err(Error::Internal("twin count forces non-uniformity but the orbits agree".into()));
        }
        return Ok(Status::Pass);
    }
    Ok(Status::Fail {
        twins: sorted_candidates(w, wu.rhs.difference(&wu.lhs).cloned()),
        symbolic: None,
    })
}

fn real_ids(d: &GroupDescriptor) -> Vec<PlaceId> {
    d.field.real_places.iter().map(|p| p.id.clone()).collect()
}

/// A1 or the odd A types with exactly two real places: the two real values
/// must differ, some automorphism must exchange the two places, and uniformity
/// must hold for the stabilizer of one of them.
fn two_real_places_checks(d: &GroupDescriptor, both_inner_required: bool) -> Result<Vec<Check>> {
    let ids = real_ids(d);
    let (w1, w2) = (&ids[0], &ids[1]);
    let e1 = d.omega.real[w1];
    let e2 = d.omega.real[w2];
    let flip_both = || vec![flip_reals(&d.omega, &[w1, w2])];
    let mut out = Vec::new();
    let kinds_ok = !both_inner_required || (e1.kind == PlaceKind::RealInner && e2.kind == PlaceKind::RealInner);
    out.push(pass_if(
        "the two real places are inner with different classes (one SL_R, one SL_H)",
        kinds_ok && e1.class != e2.class,
        flip_both,
    ));
    let swap = moves_place(&d.symmetry, &d.field, w1.as_str(), w2.as_str())?;
    out.push(pass_if(
        "some field automorphism exchanges the two real places",
        swap,
        flip_both,
    ));
    if kinds_ok && e1.class != e2.class && swap {
        let stab = stabilizer_subgroup(&d.symmetry, &d.field, w1.as_str())?;
        out.push(check(
            format!("uniformity for the automorphisms fixing {w1}"),
            wu_status(d, &stab)?,
        ));
    }
    Ok(out)
}

fn no_symmetry(d: &GroupDescriptor) -> Result<Vec<Check>> {
    let t = d.group_type;
    let r = d.field.real_places.len();
    let mut out = vec![check("weak uniformity", wu_status(d, &d.symmetry)?)];
    match t.family() {
        Family::A => {
            if r == 2 {
                out.extend(two_real_places_checks(d, true)?);
            } else if r >= 3 {
                out.push(pass_if("at most two real places", false, || flip_equal_pairs(d)));
            }
        }
        Family::C => {
            if r >= 2 {
                out.push(check(
                    "at most one real place",
                    Status::Fail {
                        twins: flip_equal_pairs(d),
                        symbolic: Some("a twin differing at two real places".into()),
                    },
                ));
            }
        }
        _ => {
            if r >= 1 {
                out.push(check(
                    "the field is totally imaginary",
                    Status::Fail {
                        twins: flip_equal_pairs(d),
                        symbolic: Some(format!(
                            "a group with the same invariants and a different real form at {}",
                            d.field.real_places[0].id
                        )),
                    },
                ));
            }
        }
    }
    Ok(out)
}

fn symmetric_imaginary(d: &GroupDescriptor) -> Result<Vec<Check>> {
    Ok(vec![check("weak uniformity", wu_status(d, &d.symmetry)?)])
}

fn type_a_real(d: &GroupDescriptor) -> Result<Vec<Check>> {
    let t = d.group_type;
    let (even, n) = t.a_parity().expect("type A");
    let r = d.field.real_places.len();
    if even {
        return Ok(vec![check("weak uniformity", wu_status(d, &d.symmetry)?)]);
    }
    if r >= 3 {
        return Ok(vec![pass_if("at most two real places", false, || flip_equal_pairs(d))]);
    }
    let mut out = Vec::new();
    if r == 1 {
        out.push(check("weak uniformity", wu_status(d, &d.symmetry)?));
    } else {
        out.extend(two_real_places_checks(d, true)?);
    }
    if !t.is_outer() && (n + 1) % 2 == 0 {
        out.push(subset_check(d, n));
    }
    Ok(out)
}

/// No subset of the finite values sums to +-(n+1)/2 in Z/(2n+2).
fn subset_check(d: &GroupDescriptor, n: u32) -> Check {
    let m = 2 * n + 2;
    let half = (n + 1) / 2;
    let ids: Vec<&PlaceId> = d.omega.finite.keys().collect();
    let values: Vec<u32> = d
        .omega
        .finite
        .values()
        .map(|e| match e.class {
            LocalClass::Cyclic { r, .. } => r,
            _ => 0,
        })
        .collect();
    let cond = format!("no subset of finite values sums to +-{half} mod {m}");
    match subset_sum_forbidden(&values, m, &[half, m - half]) {
        None => check(cond, Status::Pass),
        Some(idx) => {
            let mut base = d.omega.clone();
            for &i in &idx {
                let e = base.finite.get_mut(ids[i]).unwrap();
                e.class = e.class.neg();
            }
            let twins = real_ids(d)
                .iter()
                .map(|w| flip_reals(&base, &[w]))
                .collect();
            check(cond, Status::Fail { twins, symbolic: None })
        }
    }
}

fn type_d_real(d: &GroupDescriptor) -> Result<Vec<Check>> {
    let t = d.group_type;
    let w = &d.omega;
    let r = d.field.real_places.len();
    let mut out = Vec::new();
    if r >= 2 {
        let twins = if t.is_d_even() {
            let inner: Vec<&PlaceId> = w
                .real
                .iter()
                .filter(|(_, e)| e.kind == PlaceKind::RealInner)
                .map(|(k, _)| k)
                .collect();
            let mut c = Vec::new();
            for i in 0..inner.len() {
                for j in i + 1..inner.len() {
                    c.push(two_klein_places(w, inner[i], inner[j]));
                }
            }
            c.truncate(MAX_CANDIDATES);
            c
        } else {
            let mut c = flip_equal_pairs(d);
            let ids = real_ids(d);
            for i in 0..ids.len() {
                for j in i + 1..ids.len() {
                    c.push(flip_reals(w, &[&ids[i], &ids[j]]));
                }
            }
            c.truncate(MAX_CANDIDATES);
            c
        };
        out.push(check(
            "exactly one real place",
            Status::Fail {
                twins,
                symbolic: Some("a group with the same finite data differing at the real places".into()),
            },
        ));
        return Ok(out);
    }

    let lhs = lhs_set(d, &d.symmetry, Lhs::Plain)?;
    out.push(pass_if(
        "field automorphisms realize every adelic rearrangement of the invariants",
        adelic_orbit_size(w, &d.field) == lhs.len() as u128,
        || sorted_candidates(w, adelic_escapes(w, &d.field, &lhs, MAX_CANDIDATES)),
    ));

    let twins = inner_twin_places(w);
    let k = twins.len();
    let no_twin_symbolic = || Status::Fail {
        twins: vec![],
        symbolic: Some("the real form rules out this twin count".into()),
    };
    if t.is_d_even() {
        if t.is_outer() {
            out.push(pass_if("no inner twin place", k == 0, || {
                let mut c: Vec<OmegaVector> = twins
                    .iter()
                    .map(|v| {
                        let mut x = w.clone();
                        let e = x.finite.get_mut(v).unwrap();
                        e.class = e.class.swap();
                        x
                    })
                    .collect();
                c.extend(escape_candidates(d, &d.symmetry, Lhs::Plain, 2).unwrap_or_default());
                c
            }));
        } else if k == 0 {
            out.push(check("exactly one inner twin place", no_twin_symbolic()));
        } else {
            out.push(pass_if("exactly one inner twin place", k == 1, || {
                escape_candidates(d, &d.symmetry, Lhs::Plain, 4).unwrap_or_default()
            }));
        }
    } else if t.is_outer() {
        out.push(pass_if("at most one inner twin place", k <= 1, || {
            escape_candidates(d, &d.symmetry, Lhs::WithSigma, 4).unwrap_or_default()
        }));
    } else {
        let real = real_ids(d);
        out.push(pass_if("no inner twin place", k == 0, || {
            twins
                .iter()
                .map(|v| {
                    let mut x = w.clone();
                    let e = x.finite.get_mut(v).unwrap();
                    e.class = e.class.neg();
                    flip_reals(&x, &[&real[0]])
                })
                .collect()
        }));
    }
    Ok(out)
}

/// Two inner real places of type D with even rank: rewrite their values so
/// the sum is kept but the number of values fixed by the coordinate swap
/// changes.
fn two_klein_places(w: &OmegaVector, a: &PlaceId, b: &PlaceId) -> OmegaVector {
    let (x, y) = (w.real[a].class, w.real[b].class);
    let sum = x.add(&y).expect("Klein values");
    let zero = LocalClass::Klein(0, 0);
    let one = LocalClass::Klein(1, 1);
    let (nx, ny) = if x != zero && y != zero {
        (zero, sum)
    } else if x != one && y != one {
        (one, sum.add(&one).unwrap())
    } else {
        (LocalClass::Klein(0, 1), LocalClass::Klein(1, 0))
    };
    let mut out = w.clone();
    out.real.get_mut(a).unwrap().class = nx;
    out.real.get_mut(b).unwrap().class = ny;
    out
}

fn e6_real(d: &GroupDescriptor) -> Result<Vec<Check>> {
    let twins = match wu_status(d, &d.symmetry)? {
        Status::Fail { twins, .. } => twins,
        _ => vec![],
    };
    Ok(vec![check(
        "E6 over a field with a real place",
        Status::Fail {
            twins,
            symbolic: Some(format!(
                "a group with the same invariants and a different real form at {}",
                d.field.real_places[0].id
            )),
        },
    )])
}
