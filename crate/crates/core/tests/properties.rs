//! Property tests for the module invariants. Random descriptors come from
//! seeded generators in `common`; proptest supplies the seeds.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use rigidity::brauer_witt::{inner_twin_bound, outer_fast_path, s_omega_orbit, weak_uniformity};
use rigidity::classifier::classify;
use rigidity::descriptor::{parse_descriptor, GroupDescriptor};
use rigidity::field_model::{adelic_orbit, adelic_orbit_size, global_orbit};
use rigidity::invariant_algebra::{
    c_local, center_shape, count_local_forms, global_sym_act, h2_local, sym_act, Family, GroupType, LocalClass,
    PlaceKind,
};
use rigidity::real_forms::{RealFormTag, DELTA};

use common::{oracle, rng, Knobs};

const KINDS: [PlaceKind; 4] = [
    PlaceKind::FiniteInner,
    PlaceKind::FiniteOuter,
    PlaceKind::RealInner,
    PlaceKind::RealOuter,
];

fn kinds_for(t: &GroupType) -> Vec<PlaceKind> {
    KINDS
        .iter()
        .copied()
        .filter(|k| t.is_outer() || matches!(k, PlaceKind::FiniteInner | PlaceKind::RealInner))
        .collect()
}

#[test]
fn local_maps_are_homomorphisms() {
    for t in common::all_types() {
        for kind in kinds_for(&t) {
            let (shape, _) = h2_local(&t, kind).unwrap();
            for x in shape.elements() {
                for y in shape.elements() {
                    let lhs = c_local(&t, kind, &x.add(&y).unwrap()).unwrap();
                    let rhs = c_local(&t, kind, &x).unwrap().add(&c_local(&t, kind, &y).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{t} {kind:?} {x} {y}");
                }
            }
        }
    }
}

#[test]
fn local_maps_commute_with_the_diagram_automorphism() {
    for t in common::all_types() {
        for kind in kinds_for(&t) {
            let (shape, _) = h2_local(&t, kind).unwrap();
            for x in shape.elements() {
                let a = c_local(&t, kind, &sym_act(&t, kind, &x).unwrap()).unwrap();
                let b = global_sym_act(&t, &c_local(&t, kind, &x).unwrap()).unwrap();
                assert_eq!(a, b, "{t} {kind:?} {x}");
                let twice = sym_act(&t, kind, &sym_act(&t, kind, &x).unwrap()).unwrap();
                assert_eq!(twice, x, "{t} {kind:?} {x}");
            }
        }
    }
}

#[test]
fn local_maps_match_the_retyped_table() {
    for t in common::all_types() {
        for kind in kinds_for(&t) {
            let (shape, _) = h2_local(&t, kind).unwrap();
            for x in shape.elements() {
                let lib = c_local(&t, kind, &x).unwrap();
                let (a, b) = oracle::image(&t, kind, &x);
                let want = match center_shape(&t).zero() {
                    LocalClass::Trivial => LocalClass::Trivial,
                    LocalClass::Cyclic { m, .. } => LocalClass::Cyclic { m, r: a % m },
                    LocalClass::Klein(..) => LocalClass::Klein((a % 2) as u8, (b % 2) as u8),
                };
                assert_eq!(lib, want, "{t} {kind:?} {x}");
            }
        }
    }
}

#[test]
fn split_places_of_outer_types_use_the_inner_group() {
    for t in common::all_types().into_iter().filter(|t| t.is_outer()) {
        let outer = h2_local(&t, PlaceKind::FiniteInner).unwrap().0;
        let inner = h2_local(&t.inner_twin(), PlaceKind::FiniteInner).unwrap().0;
        assert_eq!(outer, inner, "{t}");
    }
}

#[test]
fn local_form_counts_match_direct_orbit_counts() {
    for t in common::all_types() {
        let (shape, _) = h2_local(&t, PlaceKind::FiniteInner).unwrap();
        let mut orbits: BTreeSet<BTreeSet<LocalClass>> = BTreeSet::new();
        for x in shape.elements() {
            orbits.insert([x, oracle::sigma_local(&t, &x)].into_iter().collect());
        }
        let extra = match (t.family(), t.rank()) {
            (Family::A, n) if n >= 3 && n % 2 == 1 => 2,
            (Family::D, _) => 2,
            (Family::A, n) if n >= 2 => 1,
            (Family::E6, _) => 1,
            _ => 0,
        };
        for sq in [4u64, 8] {
            assert_eq!(
                count_local_forms(&t, sq).unwrap(),
                orbits.len() as u64 + extra * (sq - 1),
                "{t} with {sq} square classes"
            );
        }
    }
}

#[test]
fn delta_is_symmetric_and_counts_are_consistent() {
    for r in 0..4 {
        for s in 0..4 {
            assert_eq!(DELTA[r][s], DELTA[s][r]);
        }
    }
    use RealFormTag::*;
    let mut tags = vec![];
    for n in 1..=20 {
        tags.extend([SlR(n + 1), SlH(n), SpR(2 * n), SpinStar(2 * n + 4), Sp(n, 0), Sp(n, n)]);
    }
    for total in 2..=40 {
        for s in 0..=total / 2 {
            tags.extend([Su(total - s, s), Spin(total - s, s)]);
        }
    }
    for t in tags {
        let st = t.stats().unwrap();
        assert_eq!(st.z_h1 % st.pi0, 0, "{t}");
        assert!(st.kernel() <= st.h1, "{t}");
    }
}

fn draw(seed: u64, knobs: Knobs) -> Option<GroupDescriptor> {
    let mut r = rng(seed);
    let types = common::all_types();
    let t = *types.choose(&mut r).unwrap();
    let shape = common::random_field(&mut r);
    common::random_descriptor(&mut r, &t, shape, knobs)
}

fn draw_symmetric(seed: u64, knobs: Knobs) -> Option<GroupDescriptor> {
    let mut r = rng(seed);
    let types = common::symmetric_types();
    let t = *types.choose(&mut r).unwrap();
    let shape = common::random_field(&mut r);
    common::random_descriptor(&mut r, &t, shape, knobs)
}

/// Renames every place, reversing the order of the labels. Adelic class
/// labels are kept, so the class structure is unchanged.
fn relabel(d: &GroupDescriptor) -> GroupDescriptor {
    let places = d.field.all_places();
    let n = places.len();
    let rename: std::collections::BTreeMap<String, String> = places
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str().to_string(), format!("z{:02}", n - i)))
        .collect();
    let map = |tok: &str| rename.get(tok).cloned().unwrap_or_else(|| panic!("unknown place {tok}"));
    let mut section = String::new();
    let mut lines = vec![];
    for line in d.to_text().lines() {
        if line.starts_with('[') {
            section = line.to_string();
            lines.push(line.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once(" = ") else {
            lines.push(line.to_string());
            continue;
        };
        match section.as_str() {
            "[places]" | "[real]" => {
                let mut value = value.to_string();
                if section == "[places]" && !value.starts_with("class=") {
                    value = format!("class={key} {value}");
                }
                lines.push(format!("{} = {value}", map(key)));
            }
            "[aut]" => {
                let body: String = value
                    .split_inclusive(|c| c == '(' || c == ')' || c == ' ')
                    .map(|piece| {
                        let tok = piece.trim_end_matches(|c| c == '(' || c == ')' || c == ' ');
                        let tail = &piece[tok.len()..];
                        if tok.is_empty() { piece.to_string() } else { format!("{}{tail}", map(tok)) }
                    })
                    .collect();
                lines.push(format!("{key} = {body}"));
            }
            _ => lines.push(line.to_string()),
        }
    }
    let text = lines.join("\n");
    parse_descriptor(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn descriptor_text_round_trips(seed in any::<u64>()) {
        if let Some(d) = draw(seed, Knobs::default()) {
            let back = parse_descriptor(&d.to_text()).unwrap();
            prop_assert_eq!(back, d);
        }
    }

    #[test]
    fn global_orbit_lies_in_adelic_orbit(seed in any::<u64>()) {
        if let Some(d) = draw(seed, Knobs::default()) {
            let g = global_orbit(&d.omega, &d.field, &d.symmetry).unwrap();
            let a = adelic_orbit(&d.omega, &d.field);
            prop_assert_eq!(a.len() as u128, adelic_orbit_size(&d.omega, &d.field));
            let order = d.symmetry.elements(&d.field).unwrap().len();
            prop_assert_eq!(order % g.len(), 0);
            for w in &g {
                prop_assert!(a.contains(&w.finite_part()));
            }
        }
    }

    #[test]
    fn adelic_orbit_ignores_declaration_order(seed in any::<u64>()) {
        if let Some(d) = draw(seed, Knobs::default()) {
            let text = d.to_text();
            let mut r = rng(seed ^ 0x5eed);
            let mut out = vec![];
            let mut block: Vec<&str> = vec![];
            let mut in_places = false;
            for line in text.lines() {
                if line.starts_with('[') {
                    block.shuffle(&mut r);
                    out.append(&mut block);
                    in_places = line == "[places]";
                    out.push(line);
                } else if in_places && !line.trim().is_empty() {
                    block.push(line);
                } else {
                    out.push(line);
                }
            }
            block.shuffle(&mut r);
            out.append(&mut block);
            let shuffled = parse_descriptor(&out.join("\n")).unwrap();
            prop_assert_eq!(adelic_orbit(&shuffled.omega, &shuffled.field), adelic_orbit(&d.omega, &d.field));
        }
    }

    #[test]
    fn flip_orbit_sums_are_sigma_related(seed in any::<u64>()) {
        if let Some(d) = draw_symmetric(seed, Knobs { max_primes: 6, ..Knobs::default() }) {
            let t = d.group_type;
            let finite_sum = |w: &rigidity::brauer_witt::OmegaVector| {
                oracle::total(&t, w.finite.values().map(|e| (e.kind, e.class)))
            };
            let base = finite_sum(&d.omega);
            let Ok(orbit) = s_omega_orbit(&d.omega) else { return Ok(()) };
            for e in &orbit.elements {
                let s = finite_sum(e);
                prop_assert!(s == base || s == oracle::sigma(&t, base));
                prop_assert_eq!(e.is_coherent(), s == base);
            }
        }
    }

    #[test]
    fn weak_uniformity_ignores_labels(seed in any::<u64>()) {
        if let Some(d) = draw_symmetric(seed, Knobs { max_primes: 3, ..Knobs::default() }) {
            let e = relabel(&d);
            let a = weak_uniformity(&d.omega, &d.field, &d.symmetry);
            let b = weak_uniformity(&e.omega, &e.field, &e.symmetry);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert_eq!(a.holds, b.holds);
                prop_assert_eq!(a.lhs.len(), b.lhs.len());
                prop_assert_eq!(a.rhs.len(), b.rhs.len());
            }
            let va = classify(&d).unwrap();
            let vb = classify(&e).unwrap();
            prop_assert_eq!(va.outcome, vb.outcome);
        }
    }

    #[test]
    fn outer_shortcut_agrees_with_the_orbit_comparison(seed in any::<u64>()) {
        let mut r = rng(seed);
        let outer: Vec<GroupType> = common::all_types().into_iter().filter(|t| t.is_outer()).collect();
        let t = *outer.choose(&mut r).unwrap();
        let shape = common::random_field(&mut r);
        let knobs = Knobs { max_primes: r.gen_range(1..=5), ..Knobs::default() };
        if let Some(d) = common::random_descriptor(&mut r, &t, shape, knobs) {
            let twins = rigidity::brauer_witt::inner_twin_places(&d.omega).len();
            prop_assume!(twins <= 6);
            let fast = outer_fast_path(&d.omega, &d.field, &d.symmetry).unwrap().unwrap();
            let full = weak_uniformity(&d.omega, &d.field, &d.symmetry).unwrap().holds;
            prop_assert_eq!(fast, full);
        }
    }

    #[test]
    fn twin_bound_matches_its_formula(seed in any::<u64>()) {
        if let Some(d) = draw_symmetric(seed, Knobs { max_primes: 12, zero_bias: 0.1, ..Knobs::default() }) {
            let t = d.group_type;
            let r = d.omega.finite.values()
                .filter(|e| e.kind == PlaceKind::FiniteInner && oracle::sigma_local(&t, &e.class) != e.class)
                .count() as u32;
            let m = match t.family() {
                Family::A if t.rank() % 2 == 0 => t.rank() + 1,
                Family::A => (t.rank() + 1) / 2,
                Family::D => 2,
                _ => 3,
            };
            let want = !t.is_outer() && r >= 1 && (d.field.degree as u64) < (1u64 << ((r - 1) / m));
            prop_assert_eq!(inner_twin_bound(&d.omega, &d.field), want);
        }
    }

    #[test]
    fn classification_is_deterministic(seed in any::<u64>()) {
        if let Some(d) = draw(seed, Knobs::default()) {
            let a = classify(&d).unwrap();
            let b = classify(&d).unwrap();
            prop_assert_eq!(a.to_json(), b.to_json());
        }
    }
}
