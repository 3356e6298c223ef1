//! Seeded random descriptors and small independent re-implementations of
//! the local tables, shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidity::descriptor::{parse_descriptor, GroupDescriptor};
use rigidity::invariant_algebra::{h2_local, Family, Form, GroupType, LocalClass, PlaceKind};
use rigidity::real_forms::{forms_for_type, RealFormTag};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const PRIMES: [u32; 14] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldShape {
    Rationals,
    /// Cyclic Galois field of the given degree, totally real.
    GaloisReal(u32),
    /// Cyclic Galois field of the given even degree, totally imaginary.
    GaloisImaginary(u32),
    /// A field with no automorphisms, or with one involution when `aut` is set.
    NonGalois { real: u32, complex: u32, aut: bool },
}

impl FieldShape {
    pub fn degree(&self) -> u32 {
        match *self {
            FieldShape::Rationals => 1,
            FieldShape::GaloisReal(d) | FieldShape::GaloisImaginary(d) => d,
            FieldShape::NonGalois { real, complex, .. } => real + 2 * complex,
        }
    }
    fn real_count(&self) -> u32 {
        match *self {
            FieldShape::Rationals => 1,
            FieldShape::GaloisReal(d) => d,
            FieldShape::GaloisImaginary(_) => 0,
            FieldShape::NonGalois { real, .. } => real,
        }
    }
}

pub fn random_field(r: &mut ChaCha8Rng) -> FieldShape {
    match r.gen_range(0..6) {
        0 | 1 => FieldShape::Rationals,
        2 => FieldShape::GaloisReal(*[2, 3, 4].choose(r).unwrap()),
        3 => FieldShape::GaloisImaginary(*[2, 4, 6].choose(r).unwrap()),
        4 => FieldShape::NonGalois {
            real: 1,
            complex: 1,
            aut: false,
        },
        _ => FieldShape::NonGalois {
            real: 2,
            complex: 1,
            aut: r.gen_bool(0.5),
        },
    }
}

pub fn all_types() -> Vec<GroupType> {
    let mut out = Vec::new();
    for n in 1..=7 {
        out.push(GroupType::inner(Family::A, n).unwrap());
        if n >= 2 {
            out.push(GroupType::new(Family::A, n, Form::Outer).unwrap());
        }
    }
    for n in 3..=6 {
        out.push(GroupType::inner(Family::B, n).unwrap());
    }
    for n in 2..=6 {
        out.push(GroupType::inner(Family::C, n).unwrap());
    }
    for n in 5..=8 {
        out.push(GroupType::inner(Family::D, n).unwrap());
        out.push(GroupType::new(Family::D, n, Form::Outer).unwrap());
    }
    out.push(GroupType::inner(Family::E6, 6).unwrap());
    out.push(GroupType::new(Family::E6, 6, Form::Outer).unwrap());
    for (f, n) in [(Family::E7, 7), (Family::E8, 8), (Family::F4, 4), (Family::G2, 2)] {
        out.push(GroupType::inner(f, n).unwrap());
    }
    out
}

pub fn symmetric_types() -> Vec<GroupType> {
    all_types().into_iter().filter(|t| t.has_symmetry()).collect()
}

pub fn is_a_even(t: &GroupType) -> bool {
    t.family() == Family::A && t.rank() % 2 == 0
}

/// Knobs for [`random_descriptor`].
#[derive(Clone, Copy, Debug)]
pub struct Knobs {
    pub max_primes: usize,
    /// Probability that a finite coordinate is zero.
    pub zero_bias: f64,
    /// Restrict real forms to quasi-split ones and all invariants to zero.
    pub quasi_split: bool,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            max_primes: 5,
            zero_bias: 0.4,
            quasi_split: false,
        }
    }
}

fn random_class(r: &mut ChaCha8Rng, t: &GroupType, kind: PlaceKind) -> LocalClass {
    let (shape, _) = h2_local(t, kind).unwrap();
    *shape.elements().choose(r).unwrap()
}

fn real_kind_fits(tag: &RealFormTag, t: &GroupType, kind: PlaceKind) -> bool {
    tag.check_fits(t, kind).is_ok()
}

struct Place {
    id: String,
    class: String,
    kind: PlaceKind,
    value: LocalClass,
}

struct Real {
    id: String,
    kind: PlaceKind,
    form: RealFormTag,
    value: LocalClass,
}

/// Descriptor text for a random coherent group of type `t` over a field of
/// the given shape, or `None` when the draw cannot be made coherent.
pub fn random_descriptor_text(r: &mut ChaCha8Rng, t: &GroupType, shape: FieldShape, k: Knobs) -> Option<String> {
    let degree = shape.degree();
    let galois = matches!(
        shape,
        FieldShape::Rationals | FieldShape::GaloisReal(_) | FieldShape::GaloisImaginary(_)
    );
    let mut aut_cycles: Vec<Vec<String>> = Vec::new();
    let mut places: Vec<Place> = Vec::new();
    let n_primes = r.gen_range(1..=k.max_primes.max(1));
    let mut primes: Vec<u32> = PRIMES.to_vec();
    primes.shuffle(r);
    primes.truncate(n_primes);
    primes.sort();
    for (i, &p) in primes.iter().enumerate() {
        let kind = if !t.is_outer() || i == 0 || r.gen_bool(0.5) {
            PlaceKind::FiniteInner
        } else {
            PlaceKind::FiniteOuter
        };
        let split: u32 = match shape {
            FieldShape::Rationals => 1,
            FieldShape::GaloisReal(d) | FieldShape::GaloisImaginary(d) => {
                let divs: Vec<u32> = (1..=d).filter(|g| d % g == 0).collect();
                *divs.choose(r).unwrap()
            }
            FieldShape::NonGalois { .. } => r.gen_range(1..=degree.min(3)),
        };
        let ids: Vec<String> = if split == 1 {
            vec![p.to_string()]
        } else {
            (0..split).map(|j| format!("{p}{}", (b'a' + j as u8) as char)).collect()
        };
        let mut classes: Vec<String> = vec![p.to_string(); ids.len()];
        if !galois && ids.len() == 3 && r.gen_bool(0.5) {
            classes[2] = format!("{p}x");
        }
        if galois && split > 1 {
            aut_cycles.push(ids.clone());
        }
        if let FieldShape::NonGalois { aut: true, .. } = shape {
            if ids.len() >= 2 && classes[0] == classes[1] {
                aut_cycles.push(ids[..2].to_vec());
            }
        }
        for (id, class) in ids.into_iter().zip(classes) {
            let value = if k.quasi_split || r.gen_bool(k.zero_bias) {
                h2_local(t, kind).unwrap().0.zero()
            } else {
                random_class(r, t, kind)
            };
            places.push(Place { id, class, kind, value });
        }
    }

    let n_real = shape.real_count();
    let real_ids: Vec<String> = if shape == FieldShape::Rationals {
        vec!["inf".into()]
    } else {
        (1..=n_real).map(|i| format!("w{i}")).collect()
    };
    let uniform_kind = galois || matches!(shape, FieldShape::NonGalois { aut: true, .. });
    let shared_kind = if t.is_outer() && r.gen_bool(0.5) {
        PlaceKind::RealOuter
    } else {
        PlaceKind::RealInner
    };
    if matches!(shape, FieldShape::GaloisReal(_)) {
        aut_cycles.push(real_ids.clone());
    }
    if matches!(shape, FieldShape::NonGalois { aut: true, .. }) && real_ids.len() >= 2 && r.gen_bool(0.5) {
        aut_cycles.push(real_ids[..2].to_vec());
    }
    let mut memo: BTreeMap<RealFormTag, LocalClass> = BTreeMap::new();
    let mut reals: Vec<Real> = Vec::new();
    for id in real_ids {
        let kind = if !t.is_outer() {
            PlaceKind::RealInner
        } else if uniform_kind {
            shared_kind
        } else if r.gen_bool(0.5) {
            PlaceKind::RealOuter
        } else {
            PlaceKind::RealInner
        };
        let mut cands: Vec<RealFormTag> = forms_for_type(t)
            .into_iter()
            .map(|(tag, _)| tag)
            .filter(|tag| real_kind_fits(tag, t, kind))
            .collect();
        if k.quasi_split {
            cands.retain(|tag| tag.is_quasi_split());
        }
        let form = cands.choose(r).copied().unwrap_or(RealFormTag::Unspecified);
        let value = if k.quasi_split {
            h2_local(t, kind).unwrap().0.zero()
        } else {
            match form.known_class(t, kind).unwrap() {
                Some(c) => c,
                None if form == RealFormTag::Unspecified => random_class(r, t, kind),
                None => *memo.entry(form).or_insert_with(|| random_class(r, t, kind)),
            }
        };
        reals.push(Real { id, kind, form, value });
    }

    if !k.quasi_split {
        // Restore coherence by changing one finite coordinate.
        let sum = oracle::total(t, places.iter().map(|p| (p.kind, p.value)).chain(reals.iter().map(|w| (w.kind, w.value))));
        if !oracle::is_zero(&sum) {
            let mut fixed = false;
            let mut order: Vec<usize> = (0..places.len()).collect();
            order.shuffle(r);
            for i in order {
                let p = &places[i];
                let rest = oracle::add(t, &sum, &oracle::neg(t, &oracle::image(t, p.kind, &p.value)));
                let (shape, _) = h2_local(t, p.kind).unwrap();
                let mut opts: Vec<LocalClass> = shape
                    .elements()
                    .into_iter()
                    .filter(|x| oracle::is_zero(&oracle::add(t, &rest, &oracle::image(t, p.kind, x))))
                    .collect();
                if opts.is_empty() {
                    continue;
                }
                opts.shuffle(r);
                places[i].value = opts[0];
                fixed = true;
                break;
            }
            if !fixed {
                return None;
            }
        }
    }

    let mut s = String::new();
    let fam = match t.family() {
        Family::A | Family::D | Family::E6 => {
            format!("{}{}", if t.is_outer() { 2 } else { 1 }, t.family())
        }
        f => f.to_string(),
    };
    let _ = writeln!(s, "[group]\ntype = {fam}\nrank = {}\n", t.rank());
    let _ = writeln!(
        s,
        "[field]\ndegree = {degree}\ncomplex_places = {}\ngalois = {galois}\nlocally_determined = true\n",
        (degree - n_real) / 2
    );
    if !aut_cycles.is_empty() {
        let body: String = aut_cycles.iter().map(|c| format!("({})", c.join(" "))).collect();
        let _ = writeln!(s, "[aut]\ng = {body}\n");
    }
    let _ = writeln!(s, "[places]");
    for p in &places {
        let kind = if p.kind == PlaceKind::FiniteInner { "split" } else { "nonsplit" };
        let _ = writeln!(s, "{} = class={} kind={kind} omega={}", p.id, p.class, p.value);
    }
    if !reals.is_empty() {
        let _ = writeln!(s, "\n[real]");
        for w in &reals {
            let kind = if w.kind == PlaceKind::RealInner { "inner" } else { "outer" };
            let _ = writeln!(s, "{} = form={} kind={kind} omega={}", w.id, w.form.syntax(), w.value);
        }
    }
    Some(s)
}

/// Parses a random descriptor; panics with the text if the library rejects
/// what the generator considers valid.
pub fn random_descriptor(r: &mut ChaCha8Rng, t: &GroupType, shape: FieldShape, k: Knobs) -> Option<GroupDescriptor> {
    let text = random_descriptor_text(r, t, shape, k)?;
    match parse_descriptor(&text) {
        Ok(d) => Some(d),
        Err(e) => panic!("generated descriptor rejected: {e}\n{text}"),
    }
}

/// The local tables written out again, over plain residues, without the
/// library's shape machinery.
pub mod oracle {
    use rigidity::invariant_algebra::{Family, GroupType, LocalClass, PlaceKind};

    /// Global target as (modulus, klein?) with modulus 1 for the zero group.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Target {
        Zero,
        Mod(u32),
        Klein,
    }

    pub fn target(t: &GroupType) -> Target {
        let n = t.rank();
        let outer = t.is_outer();
        match t.family() {
            Family::A if !outer => Target::Mod(n + 1),
            Family::A if n % 2 == 0 => Target::Zero,
            Family::A => Target::Mod(2),
            Family::B | Family::C | Family::E7 => Target::Mod(2),
            Family::D if outer => Target::Mod(2),
            Family::D if n % 2 == 0 => Target::Klein,
            Family::D => Target::Mod(4),
            Family::E6 if outer => Target::Zero,
            Family::E6 => Target::Mod(3),
            _ => Target::Zero,
        }
    }

    fn residue(x: &LocalClass) -> (u32, u32) {
        match *x {
            LocalClass::Trivial => (0, 0),
            LocalClass::Cyclic { r, .. } => (r, 0),
            LocalClass::Klein(a, b) => (a as u32, b as u32),
        }
    }

    /// Image in the global target, as a pair of residues.
    pub fn image(t: &GroupType, kind: PlaceKind, x: &LocalClass) -> (u32, u32) {
        let n = t.rank();
        let (a, b) = residue(x);
        let outer = t.is_outer();
        let tgt = target(t);
        if tgt == Target::Zero {
            return (0, 0);
        }
        match kind {
            PlaceKind::Complex => (0, 0),
            PlaceKind::FiniteInner if !outer => (a, b),
            PlaceKind::FiniteInner => match t.family() {
                Family::D if n % 2 == 0 => ((a + b) % 2, 0),
                _ => (a % 2, 0),
            },
            PlaceKind::FiniteOuter | PlaceKind::RealOuter => (a % 2, 0),
            PlaceKind::RealInner => match (t.family(), outer) {
                // SL_H sits at (n+1)/2 in Z/(n+1).
                (Family::A, false) => ((a * (n + 1) / 2) % (n + 1), 0),
                (Family::D, false) if n % 2 == 1 => ((2 * a) % 4, 0),
                (Family::D, true) if n % 2 == 0 => ((a + b) % 2, 0),
                _ => (a, b),
            },
        }
    }

    pub fn add(t: &GroupType, x: &(u32, u32), y: &(u32, u32)) -> (u32, u32) {
        reduce(t, (x.0 + y.0, x.1 + y.1))
    }

    pub fn neg(t: &GroupType, x: &(u32, u32)) -> (u32, u32) {
        match target(t) {
            Target::Mod(m) => ((m - x.0 % m) % m, 0),
            _ => *x,
        }
    }

    pub fn is_zero(x: &(u32, u32)) -> bool {
        *x == (0, 0)
    }

    pub fn reduce(t: &GroupType, x: (u32, u32)) -> (u32, u32) {
        match target(t) {
            Target::Zero => (0, 0),
            Target::Mod(m) => (x.0 % m, 0),
            Target::Klein => (x.0 % 2, x.1 % 2),
        }
    }

    pub fn total(t: &GroupType, it: impl Iterator<Item = (PlaceKind, LocalClass)>) -> (u32, u32) {
        let mut acc = (0, 0);
        for (k, x) in it {
            acc = add(t, &acc, &image(t, k, &x));
        }
        acc
    }

    /// Diagram automorphism on the global target.
    pub fn sigma(t: &GroupType, x: (u32, u32)) -> (u32, u32) {
        if !t.has_symmetry() || t.is_outer() {
            return x;
        }
        match target(t) {
            Target::Mod(m) => ((m - x.0 % m) % m, 0),
            Target::Klein => (x.1, x.0),
            Target::Zero => x,
        }
    }

    /// Diagram automorphism on a local class at a split finite place.
    pub fn sigma_local(t: &GroupType, x: &LocalClass) -> LocalClass {
        if !t.has_symmetry() {
            return *x;
        }
        match *x {
            LocalClass::Cyclic { m, r } => LocalClass::Cyclic { m, r: (m - r) % m },
            LocalClass::Klein(a, b) => LocalClass::Klein(b, a),
            LocalClass::Trivial => LocalClass::Trivial,
        }
    }
}
