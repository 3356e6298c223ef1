//! A complete group descriptor and its plain-text file format.
//!
//! ```text
//! # comment
//! [group]
//! type = 1A          # family, optionally prefixed 1 (inner) or 2 (outer)
//! rank = 2
//! [field]
//! degree = 1
//! complex_places = 0
//! locally_determined = true
//! galois = true
//! hbar = trivial     # trivial | nontrivial | unknown
//! [aut]
//! g1 = (5a 5b)(w1 w2)
//! [places]
//! 2 = class=2 kind=split omega=1/3
//! [real]
//! inf = form=SL_R(3) omega=0
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::brauer_witt::{Entry, OmegaVector};
use crate::error::{Error, Result};
use crate::field_model::{FieldDescriptor, HbarFiber, PlaceId, PlaceLabel, PlaceSymmetry};
use crate::invariant_algebra::{c_local, h2_local, sym_act, GroupType, LocalClass, PlaceKind};
use crate::perm::Perm;
use crate::real_forms::{real_class, RealFormTag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub group_type: GroupType,
    pub field: FieldDescriptor,
    pub symmetry: PlaceSymmetry,
    pub omega: OmegaVector,
    pub real_forms: BTreeMap<PlaceId, RealFormTag>,
}

impl GroupDescriptor {
    /// Validates the pieces against each other: place kinds, values on every
    /// place, real forms fitting their places and classes, and coherence.
    pub fn new(
        group_type: GroupType,
        field: FieldDescriptor,
        symmetry: PlaceSymmetry,
        omega: OmegaVector,
        real_forms: BTreeMap<PlaceId, RealFormTag>,
    ) -> Result<Self> {
        field.validate()?;
        symmetry.validate(&field)?;
        if omega.group_type != group_type {
            return Err(Error::Contract("invariant vector has a different group type".into()));
        }
        if !group_type.is_outer() {
            if let Some(p) = field
                .all_places()
                .into_iter()
                .find(|p| matches!(p.kind, PlaceKind::FiniteOuter | PlaceKind::RealOuter))
            {
                return Err(Error::Field(format!(
                    "place {} is marked outer but {group_type} is an inner form",
                    p.id
                )));
            }
        }
        let fin_ids: BTreeSet<&PlaceId> = field.finite_places.iter().map(|p| &p.id).collect();
        let real_ids: BTreeSet<&PlaceId> = field.real_places.iter().map(|p| &p.id).collect();
        if omega.finite.keys().collect::<BTreeSet<_>>() != fin_ids {
            return Err(Error::Contract("finite invariants do not cover the finite places exactly".into()));
        }
        if omega.real.keys().collect::<BTreeSet<_>>() != real_ids {
            return Err(Error::Contract("real invariants do not cover the real places exactly".into()));
        }
        for p in field.all_places() {
            let e = omega.finite.get(&p.id).or_else(|| omega.real.get(&p.id)).unwrap();
            if e.kind != p.kind {
                return Err(Error::Contract(format!("kind of {} differs between field and invariants", p.id)));
            }
        }
        if real_forms.keys().collect::<BTreeSet<_>>() != real_ids {
            return Err(Error::Contract("every real place needs exactly one real form".into()));
        }
        let mut class_of_tag: BTreeMap<RealFormTag, LocalClass> = BTreeMap::new();
        for p in &field.real_places {
            let tag = real_forms[&p.id];
            let class = omega.real[&p.id].class;
            tag.check_fits(&group_type, p.kind).map_err(|msg| Error::RealForm {
                place: p.id.to_string(),
                form: tag.to_string(),
                msg,
            })?;
            real_class(&tag, &group_type, p.kind, Some(class)).map_err(|e| match e {
                Error::RealForm { form, msg, .. } => Error::RealForm {
                    place: p.id.to_string(),
                    form,
                    msg,
                },
                other => other,
            })?;
            if tag != RealFormTag::Unspecified {
                if let Some(prev) = class_of_tag.insert(tag.canonical(), class) {
                    let alt = sym_act(&group_type, p.kind, &prev)?;
                    if prev != class && alt != class {
                        return Err(Error::RealForm {
                            place: p.id.to_string(),
                            form: tag.to_string(),
                            msg: format!("the same form carries classes {prev} and {class}"),
                        });
                    }
                }
            }
        }
        omega.check_coherent()?;
        Ok(GroupDescriptor {
            group_type,
            field,
            symmetry,
            omega,
            real_forms,
        })
    }

    /// Same group data with a different invariant vector; real forms at
    /// places whose class changed are relabelled.
    pub fn with_omega(&self, theta: OmegaVector) -> Result<GroupDescriptor> {
        let mut forms = self.real_forms.clone();
        for (id, e) in &theta.real {
            if self.omega.real[id].class != e.class {
                forms.insert(
                    id.clone(),
                    crate::real_forms::named_form_with_class(&self.group_type, e.kind, &e.class),
                );
            }
        }
        GroupDescriptor::new(
            self.group_type,
            self.field.clone(),
            self.symmetry.clone(),
            theta,
            forms,
        )
    }

    pub fn to_text(&self) -> String {
        let t = &self.group_type;
        let mut s = String::new();
        let fam = {
            let l = t.label();
            if t.family().to_string().len() == 1 {
                l.trim_end_matches(|c: char| c.is_ascii_digit()).to_string()
            } else {
                l
            }
        };
        let _ = writeln!(s, "[group]\ntype = {fam}\nrank = {}", t.rank());
        let f = &self.field;
        let _ = writeln!(
            s,
            "\n[field]\ndegree = {}\ncomplex_places = {}\nlocally_determined = {}\ngalois = {}\nhbar = {}",
            f.degree,
            f.complex_place_count,
            f.locally_determined,
            f.galois_over_q,
            match f.hbar_fiber {
                HbarFiber::Trivial => "trivial",
                HbarFiber::Nontrivial => "nontrivial",
                HbarFiber::Unknown => "unknown",
            }
        );
        let cycles = self.symmetry.label_cycles(f);
        if !cycles.is_empty() {
            let _ = writeln!(s, "\n[aut]");
            for (i, g) in cycles.iter().enumerate() {
                let body: String = if g.is_empty() {
                    "()".into()
                } else {
                    g.iter().map(|c| format!("({})", c.join(" "))).collect()
                };
                let _ = writeln!(s, "g{} = {body}", i + 1);
            }
        }
        if !f.finite_places.is_empty() {
            let _ = writeln!(s, "\n[places]");
            for p in &f.finite_places {
                let kind = if p.kind == PlaceKind::FiniteInner { "split" } else { "nonsplit" };
                let _ = writeln!(
                    s,
                    "{} = class={} kind={kind} omega={}",
                    p.id,
                    p.adelic_class.as_deref().unwrap_or(p.id.as_str()),
                    self.omega.finite[&p.id].class
                );
            }
        }
        if !f.real_places.is_empty() {
            let _ = writeln!(s, "\n[real]");
            for p in &f.real_places {
                let kind = if p.kind == PlaceKind::RealInner { "inner" } else { "outer" };
                let _ = writeln!(
                    s,
                    "{} = form={} kind={kind} omega={}",
                    p.id,
                    self.real_forms[&p.id].syntax(),
                    self.omega.real[&p.id].class
                );
            }
        }
        s
    }
}

#[derive(Default)]
struct Raw {
    group_type: Option<(String, usize, usize)>,
    rank: Option<(u32, usize, usize)>,
    degree: Option<u32>,
    complex: Option<u32>,
    locally_determined: Option<bool>,
    galois: Option<bool>,
    hbar: Option<HbarFiber>,
    aut: Vec<(usize, Vec<Vec<(String, usize)>>)>,
    places: Vec<RawPlace>,
    reals: Vec<RawReal>,
}

struct RawPlace {
    line: usize,
    id: String,
    class: Option<String>,
    kind: Option<(String, usize)>,
    omega: Option<(String, usize)>,
}

struct RawReal {
    line: usize,
    col: usize,
    id: String,
    form: (String, usize),
    kind: Option<(String, usize)>,
    omega: Option<(String, usize)>,
}

/// Splits on whitespace, keeping parenthesized groups together. Returns each
/// token with its 1-based column.
fn tokens(s: &str, base_col: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push((std::mem::take(&mut cur), base_col + start));
            }
            continue;
        }
        if cur.is_empty() {
            start = i;
        }
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if !(ch.is_whitespace()) {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push((cur, base_col + start));
    }
    out
}

fn parse_bool(v: &str, line: usize, col: usize) -> Result<bool> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(Error::parse(line, col, format!("expected true or false, got {v:?}"))),
    }
}

/// Parses descriptor text. Errors carry the 1-based line and column.
pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor> {
    let mut raw = Raw::default();
    let mut section: Option<String> = None;
    let mut seen_sections = BTreeSet::new();
    for (ln0, full) in text.lines().enumerate() {
        let line = ln0 + 1;
        let content = full.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::parse(line, indent + 1, "unterminated section header"))?
                .trim()
                .to_string();
            if !["group", "field", "aut", "places", "real"].contains(&name.as_str()) {
                return Err(Error::parse(line, indent + 1, format!("unknown section [{name}]")));
            }
            if !seen_sections.insert(name.clone()) {
                return Err(Error::parse(line, indent + 1, format!("section [{name}] appears twice")));
            }
            section = Some(name);
            continue;
        }
        let Some(sec) = section.as_deref() else {
            return Err(Error::parse(line, indent + 1, "entry before any section header"));
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::parse(line, indent + 1, "expected KEY = VALUE"))?;
        let key = key.trim();
        let eq = content.find('=').unwrap();
        let after = &content[eq + 1..];
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        let value_str = value.trim();
        if key.is_empty() {
            return Err(Error::parse(line, indent + 1, "missing key"));
        }
        match sec {
            "group" | "field" => {
                let pieces = tokens(value_str, value_col);
                if pieces.len() != 1 {
                    return Err(Error::parse(line, value_col, format!("expected one value for {key}")));
                }
                let v = pieces[0].0.as_str();
                let num = || -> Result<u32> {
                    v.parse()
                        .map_err(|_| Error::parse(line, value_col, format!("expected a number for {key}, got {v:?}")))
                };
                match (sec, key) {
                    ("group", "type") => raw.group_type = Some((v.to_string(), line, value_col)),
                    ("group", "rank") => raw.rank = Some((num()?, line, value_col)),
                    ("field", "degree") => raw.degree = Some(num()?),
                    ("field", "complex_places") => raw.complex = Some(num()?),
                    ("field", "locally_determined") => {
                        raw.locally_determined = Some(parse_bool(v, line, value_col)?)
                    }
                    ("field", "galois") => raw.galois = Some(parse_bool(v, line, value_col)?),
                    ("field", "hbar") => {
                        raw.hbar = Some(match v {
                            "trivial" => HbarFiber::Trivial,
                            "nontrivial" => HbarFiber::Nontrivial,
                            "unknown" => HbarFiber::Unknown,
                            _ => {
                                return Err(Error::parse(
                                    line,
                                    value_col,
                                    format!("hbar must be trivial, nontrivial or unknown, got {v:?}"),
                                ))
                            }
                        })
                    }
                    _ => {
                        return Err(Error::parse(line, indent + 1, format!("unknown key {key:?} in [{sec}]")))
                    }
                }
            }
            "aut" => {
                let mut cycles = Vec::new();
                let mut rest = value_str;
                let mut col = value_col;
                while !rest.is_empty() {
                    let open = rest
                        .strip_prefix('(')
                        .ok_or_else(|| Error::parse(line, col, "expected '(' starting a cycle"))?;
                    let close = open
                        .find(')')
                        .ok_or_else(|| Error::parse(line, col, "unclosed cycle"))?;
                    let body = &open[..close];
                    let cyc = tokens(body, col + 1);
                    if !cyc.is_empty() {
                        cycles.push(cyc);
                    }
                    let consumed = close + 2;
                    let after = &rest[consumed..];
                    col += consumed + (after.len() - after.trim_start().len());
                    rest = after.trim_start();
                }
                raw.aut.push((line, cycles));
            }
            "places" => {
                let mut p = RawPlace {
                    line,
                    id: key.to_string(),
                    class: None,
                    kind: None,
                    omega: None,
                };
                for (tok, col) in tokens(value_str, value_col) {
                    let (k, v) = tok
                        .split_once('=')
                        .ok_or_else(|| Error::parse(line, col, format!("expected key=value, got {tok:?}")))?;
                    let vcol = col + k.len() + 1;
                    match k {
                        "class" => p.class = Some(v.to_string()),
                        "kind" => p.kind = Some((v.to_string(), vcol)),
                        "omega" => p.omega = Some((v.to_string(), vcol)),
                        _ => return Err(Error::parse(line, col, format!("unknown place attribute {k:?}"))),
                    }
                }
                raw.places.push(p);
            }
            "real" => {
                let mut form = None;
                let mut kind = None;
                let mut omega = None;
                for (tok, col) in tokens(value_str, value_col) {
                    let (k, v) = tok
                        .split_once('=')
                        .ok_or_else(|| Error::parse(line, col, format!("expected key=value, got {tok:?}")))?;
                    let vcol = col + k.len() + 1;
                    match k {
                        "form" => form = Some((v.to_string(), vcol)),
                        "kind" => kind = Some((v.to_string(), vcol)),
                        "omega" => omega = Some((v.to_string(), vcol)),
                        _ => return Err(Error::parse(line, col, format!("unknown real attribute {k:?}"))),
                    }
                }
                let form = form.ok_or_else(|| Error::parse(line, value_col, "real place needs form=TAG(PARAMS)"))?;
                raw.reals.push(RawReal {
                    line,
                    col: indent + 1,
                    id: key.to_string(),
                    form,
                    kind,
                    omega,
                });
            }
            _ => unreachable!(),
        }
    }
    build(raw, &seen_sections)
}

fn build(raw: Raw, sections: &BTreeSet<String>) -> Result<GroupDescriptor> {
    if !sections.contains("group") {
        return Err(Error::parse(1, 1, "missing [group]"));
    }
    if !sections.contains("field") {
        return Err(Error::parse(1, 1, "missing [field]"));
    }
    let (fam, tl, tc) = raw
        .group_type
        .ok_or_else(|| Error::parse(1, 1, "missing type in [group]"))?;
    let (rank, rl, rc) = raw.rank.ok_or_else(|| Error::parse(tl, 1, "missing rank in [group]"))?;
    let group_type = GroupType::parse_parts(&fam, rank).map_err(|e| match e {
        Error::OutOfScope(m) => Error::OutOfScope(format!("line {rl}, column {rc}: {m}")),
        other => Error::parse(tl, tc, other.to_string()),
    })?;
    let outer = group_type.is_outer();

    let degree = raw.degree.ok_or_else(|| Error::parse(1, 1, "missing degree in [field]"))?;
    let r = raw.reals.len() as u32;
    let complex = match raw.complex {
        Some(c) => c,
        None => {
            if degree < r || (degree - r) % 2 == 1 {
                return Err(Error::parse(1, 1, "cannot infer complex_places from degree and real places"));
            }
            (degree - r) / 2
        }
    };
    let galois = raw.galois.unwrap_or(degree == 1);
    let mut finite_places = Vec::new();
    let mut finite_omega = BTreeMap::new();
    for p in &raw.places {
        let kind = match p.kind.as_ref().map(|(k, c)| (k.as_str(), *c)) {
            None | Some(("split", _)) => PlaceKind::FiniteInner,
            Some(("nonsplit", c)) => {
                if !outer {
                    return Err(Error::parse(p.line, c, format!("nonsplit place in inner type {group_type}")));
                }
                PlaceKind::FiniteOuter
            }
            Some((other, c)) => {
                return Err(Error::parse(p.line, c, format!("kind must be split or nonsplit, got {other:?}")))
            }
        };
        let (shape, _) = h2_local(&group_type, kind).map_err(|e| Error::parse(p.line, 1, e.to_string()))?;
        let class = match &p.omega {
            None => shape.zero(),
            Some((v, c)) => LocalClass::parse(v, shape).map_err(|m| Error::parse(p.line, *c, m))?,
        };
        finite_places.push(PlaceLabel::finite(&p.id, kind, p.class.as_deref().unwrap_or(&p.id)));
        finite_omega.insert(PlaceId::new(&p.id), Entry { kind, class });
    }

    let mut real_places = Vec::new();
    let mut tags = BTreeMap::new();
    let mut supplied: Vec<(PlaceId, PlaceKind, RealFormTag, Option<LocalClass>, usize, usize)> = Vec::new();
    for rr in &raw.reals {
        let tag: RealFormTag = rr
            .form
            .0
            .parse()
            .map_err(|m: String| Error::parse(rr.line, rr.form.1, m))?;
        let kind = match rr.kind.as_ref().map(|(k, c)| (k.as_str(), *c)) {
            Some(("inner", _)) => PlaceKind::RealInner,
            Some(("outer", c)) => {
                if !outer {
                    return Err(Error::parse(rr.line, c, format!("outer real place in inner type {group_type}")));
                }
                PlaceKind::RealOuter
            }
            Some((other, c)) => {
                return Err(Error::parse(rr.line, c, format!("kind must be inner or outer, got {other:?}")))
            }
            None => match tag.is_real_inner() {
                Some(false) => PlaceKind::RealOuter,
                Some(true) => PlaceKind::RealInner,
                None if !outer => PlaceKind::RealInner,
                None => {
                    return Err(Error::parse(rr.line, rr.form.1, "state kind=inner or kind=outer for this form"))
                }
            },
        };
        tag.check_fits(&group_type, kind)
            .map_err(|m| Error::parse(rr.line, rr.form.1, m))?;
        let (shape, _) = h2_local(&group_type, kind).map_err(|e| Error::parse(rr.line, rr.col, e.to_string()))?;
        let given = match &rr.omega {
            None => None,
            Some((v, c)) => Some(LocalClass::parse(v, shape).map_err(|m| Error::parse(rr.line, *c, m))?),
        };
        let col = rr.omega.as_ref().map(|o| o.1).unwrap_or(rr.form.1);
        real_places.push(PlaceLabel::real(&rr.id, kind));
        tags.insert(PlaceId::new(&rr.id), tag);
        supplied.push((PlaceId::new(&rr.id), kind, tag, given, rr.line, col));
    }

    let field = FieldDescriptor {
        degree,
        real_places,
        complex_place_count: complex,
        finite_places,
        locally_determined: raw.locally_determined.unwrap_or(true),
        galois_over_q: galois,
        hbar_fiber: raw.hbar.unwrap_or(if galois { HbarFiber::Trivial } else { HbarFiber::Unknown }),
    };

    // real classes: named, supplied, or solved from coherence
    let mut real_omega = BTreeMap::new();
    let mut unknown = Vec::new();
    for (id, kind, tag, given, line, col) in &supplied {
        match real_class(tag, &group_type, *kind, *given) {
            Ok(Some(c)) => {
                real_omega.insert(id.clone(), Entry { kind: *kind, class: c });
            }
            Ok(None) => unknown.push((id.clone(), *kind, *tag, *line, *col)),
            Err(e) => return Err(Error::parse(*line, *col, e.to_string())),
        }
    }
    if let Some((id, kind, tag, line, col)) = unknown.first().cloned() {
        if unknown.len() > 1 {
            return Err(Error::parse(
                unknown[1].3,
                unknown[1].4,
                Error::MissingRealClass {
                    place: unknown[1].0.to_string(),
                    form: unknown[1].2.to_string(),
                }
                .to_string(),
            ));
        }
        let partial = OmegaVector::new(group_type, finite_omega.clone(), real_omega.clone())
            .map_err(|e| Error::parse(line, col, e.to_string()))?;
        let sum = crate::brauer_witt::tate_sum(&partial)?;
        let needed = sum.neg();
        let (shape, _) = h2_local(&group_type, kind)?;
        let solutions: Vec<LocalClass> = shape
            .elements()
            .into_iter()
            .filter(|x| c_local(&group_type, kind, x).ok() == Some(needed))
            .collect();
        if solutions.len() != 1 {
            return Err(Error::parse(
                line,
                col,
                Error::MissingRealClass {
                    place: id.to_string(),
                    form: tag.to_string(),
                }
                .to_string(),
            ));
        }
        real_omega.insert(id, Entry { kind, class: solutions[0] });
    }

    let omega = OmegaVector::new(group_type, finite_omega, real_omega)?;

    let n = field.all_places().len();
    let mut gens = Vec::new();
    for (line, cycles) in &raw.aut {
        let mut idx = Vec::new();
        for c in cycles {
            let mut ci = Vec::new();
            for (label, col) in c {
                let i = field
                    .index_of(label)
                    .ok_or_else(|| Error::parse(*line, *col, format!("unknown place {label:?}")))?;
                ci.push(i);
            }
            idx.push(ci);
        }
        gens.push(Perm::from_cycles(n, &idx).map_err(|e| Error::parse(*line, 1, e.to_string()))?);
    }
    let symmetry = PlaceSymmetry { generators: gens };
    GroupDescriptor::new(group_type, field, symmetry, omega, tags)
}
