//! Real forms: names, the cohomology counts that decide whether the map from
//! H1(R, G) to H1(R, Ad G) is trivial, and the H2 class of a form where it is
//! determined by its name.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariant_algebra::{h2_local, sym_act, Family, GroupType, LocalClass, PlaceKind, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum E7Form {
    Split,
    Quaternionic,
    Hermitian,
    Compact,
}

/// Parameters follow the usual matrix sizes: `SpinStar(2n)` and `SpR(2n)`
/// store `2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RealFormTag {
    SlR(u32),
    SlH(u32),
    Su(u32, u32),
    Spin(u32, u32),
    SpinStar(u32),
    SpR(u32),
    Sp(u32, u32),
    E7(E7Form),
    /// Split form of E6, E8, F4 or G2.
    SplitForm(Family),
    CompactForm(Family),
    /// Any other form of E6, E8, F4 or G2.
    AnisotropicOther(Family),
    /// A real place whose form is only known through its H2 class.
    Unspecified,
}

impl Serialize for RealFormTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.syntax())
    }
}

/// The counts |Z/2-part of H1(R,Z)|, |pi0|, |H1(R,G)| for the forms where they
/// are tabulated. The map is trivial iff `z_h1 / pi0 == h1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RealStats {
    pub z_h1: u32,
    pub pi0: u32,
    pub h1: u32,
}

impl RealStats {
    pub fn kernel(&self) -> u32 {
        self.z_h1 / self.pi0
    }
    pub fn q_image_trivial(&self) -> bool {
        self.z_h1 % self.pi0 == 0 && self.kernel() == self.h1
    }
}

/// Correction term in the count of H1 for Spin(r, s), indexed by r and s mod 4.
pub const DELTA: [[u32; 4]; 4] = [[3, 2, 2, 2], [2, 1, 1, 0], [2, 1, 0, 0], [2, 0, 0, 0]];

fn even(n: u32) -> bool {
    n % 2 == 0
}

impl RealFormTag {
    /// Tabulated counts, for the families where they are known.
    pub fn stats(&self) -> Option<RealStats> {
        use RealFormTag::*;
        let s = |z, p, h| RealStats { z_h1: z, pi0: p, h1: h };
        Some(match *self {
            SlR(n) => {
                let v = if even(n) { 2 } else { 1 };
                s(v, v, 1)
            }
            SlH(_) => s(2, 1, 2),
            Su(r, q) => s(
                if even(r + q) { 2 } else { 1 },
                if r == q { 2 } else { 1 },
                r / 2 + q / 2 + 1,
            ),
            Spin(r, q) => {
                let z = if (r + q) % 4 == 0 {
                    if even(r) {
                        4
                    } else {
                        1
                    }
                } else {
                    2
                };
                let p = if r * q == 0 {
                    1
                } else if !even(r) && !even(q) && r != q {
                    1
                } else if r == q && even(r) {
                    4
                } else {
                    2
                };
                s(z, p, (r + q) / 4 + DELTA[(r % 4) as usize][(q % 4) as usize])
            }
            SpinStar(m) => {
                let n = m / 2;
                if even(n) {
                    s(4, 2, 2)
                } else {
                    s(2, 1, 2)
                }
            }
            SpR(_) => s(2, 2, 1),
            Sp(r, q) => s(2, 2, r + q + 1),
            E7(E7Form::Split) | E7(E7Form::Hermitian) => s(2, 2, 2),
            E7(E7Form::Quaternionic) | E7(E7Form::Compact) => s(2, 1, 4),
            _ => return None,
        })
    }

    /// Whether every class of H1(R, G) maps to the trivial class of
    /// H1(R, Ad G). `None` when the form is not named.
    pub fn q_image_trivial(&self) -> Option<bool> {
        match self {
            RealFormTag::Unspecified => None,
            RealFormTag::SplitForm(_) | RealFormTag::CompactForm(_) | RealFormTag::AnisotropicOther(_) => {
                Some(false)
            }
            t => t.stats().map(|st| st.q_image_trivial()),
        }
    }

    /// Rewrites small cases through the low-rank isomorphisms, and puts the
    /// larger signature entry first.
    pub fn canonical(&self) -> RealFormTag {
        use RealFormTag::*;
        match *self {
            Su(r, s) if r < s => Su(s, r).canonical(),
            Spin(r, s) if r < s => Spin(s, r).canonical(),
            Sp(r, s) if r < s => Sp(s, r).canonical(),
            Su(1, 1) => SlR(2),
            Su(2, 0) => SlH(1),
            Spin(2, 1) => SlR(2),
            Spin(3, 0) => SlH(1),
            Spin(3, 2) => SpR(4),
            Spin(4, 1) => Sp(1, 1),
            Spin(5, 0) => Sp(2, 0),
            Spin(3, 3) => SlR(4),
            Spin(5, 1) => SlH(2),
            Spin(4, 2) => Su(2, 2),
            Spin(6, 0) => Su(4, 0),
            SpinStar(6) => Su(3, 1),
            SpR(2) => SlR(2),
            Sp(1, 0) => SlH(1),
            t => t,
        }
    }

    /// Family and rank of the (canonical) form, if it is absolutely simple
    /// and of a supported type.
    pub fn cartan(&self) -> Option<(Family, u32)> {
        use RealFormTag::*;
        let c = self.canonical();
        let out = match c {
            SlR(n) if n >= 2 => (Family::A, n - 1),
            SlH(n) if n >= 1 => (Family::A, 2 * n - 1),
            Su(r, s) if r + s >= 3 => (Family::A, r + s - 1),
            Spin(r, s) if (r + s) % 2 == 1 && r + s >= 7 => (Family::B, (r + s - 1) / 2),
            Spin(r, s) if (r + s) % 2 == 0 && r + s >= 10 => (Family::D, (r + s) / 2),
            SpinStar(m) if m % 2 == 0 && m >= 10 => (Family::D, m / 2),
            SpR(m) if m % 2 == 0 && m >= 4 => (Family::C, m / 2),
            Sp(r, s) if r + s >= 2 => (Family::C, r + s),
            E7(_) => (Family::E7, 7),
            SplitForm(f) | CompactForm(f) | AnisotropicOther(f)
                if matches!(f, Family::E6 | Family::E8 | Family::F4 | Family::G2) =>
            {
                let rank = match f {
                    Family::E6 => 6,
                    Family::E8 => 8,
                    Family::F4 => 4,
                    _ => 2,
                };
                (f, rank)
            }
            _ => return None,
        };
        Some(out)
    }

    /// `Some(true)` when the form is an inner form of the split real group,
    /// `Some(false)` when outer, `None` when not recorded.
    pub fn is_real_inner(&self) -> Option<bool> {
        use RealFormTag::*;
        match self.canonical() {
            SlR(_) | SlH(_) | SpR(_) | Sp(..) | E7(_) => Some(true),
            Su(..) => Some(false),
            Spin(r, s) if (r + s) % 2 == 1 => Some(true),
            Spin(r, s) => Some(r % 2 == ((r + s) / 2) % 2),
            SpinStar(m) => Some((m / 2) % 2 == 0),
            SplitForm(Family::E6) | CompactForm(Family::E6) | AnisotropicOther(Family::E6) => None,
            SplitForm(_) | CompactForm(_) | AnisotropicOther(_) => Some(true),
            Unspecified => None,
        }
    }

    pub fn is_quasi_split(&self) -> bool {
        use RealFormTag::*;
        match self.canonical() {
            SlR(_) | SpR(_) | E7(E7Form::Split) | SplitForm(_) => true,
            Su(r, s) => r.abs_diff(s) <= 1,
            Spin(r, s) => r.abs_diff(s) <= 2,
            _ => false,
        }
    }

    /// Checks that this form can sit at a real place of the given kind for a
    /// group of type `t`.
    pub fn check_fits(&self, t: &GroupType, kind: PlaceKind) -> std::result::Result<(), String> {
        if *self == RealFormTag::Unspecified {
            return Ok(());
        }
        let Some((fam, rank)) = self.cartan() else {
            return Err(format!("{self} is not an absolutely simple form of a supported type"));
        };
        if fam != t.family() || rank != t.rank() {
            return Err(format!("{self} has type {fam}{rank}, the group has type {t}"));
        }
        if let Some(inner) = self.is_real_inner() {
            let want = kind == PlaceKind::RealInner;
            if inner != want {
                return Err(format!(
                    "{self} is {} over R but the place is {kind:?}",
                    if inner { "inner" } else { "outer" }
                ));
            }
        }
        Ok(())
    }

    /// H2 class at a real place when the name determines it.
    pub fn known_class(&self, t: &GroupType, kind: PlaceKind) -> Result<Option<LocalClass>> {
        let (shape, _) = h2_local(t, kind)?;
        if shape == Shape::Trivial {
            return Ok(Some(LocalClass::Trivial));
        }
        let c = self.canonical();
        if c.is_quasi_split() {
            return Ok(Some(shape.zero()));
        }
        Ok(match (c, shape) {
            (RealFormTag::SlH(_), Shape::Cyclic(2)) => Some(LocalClass::Cyclic { m: 2, r: 1 }),
            (RealFormTag::SpinStar(m), Shape::Klein) if (m / 2) % 2 == 0 => Some(LocalClass::Klein(1, 0)),
            _ => None,
        })
    }

    /// Tag syntax used in descriptor files, e.g. `SL_R(3)`.
    pub fn syntax(&self) -> String {
        use RealFormTag::*;
        match self {
            SlR(n) => format!("SL_R({n})"),
            SlH(n) => format!("SL_H({n})"),
            Su(r, s) => format!("SU({r},{s})"),
            Spin(r, s) => format!("Spin({r},{s})"),
            SpinStar(m) => format!("SpinStar({m})"),
            SpR(m) => format!("Sp_R({m})"),
            Sp(r, s) => format!("Sp({r},{s})"),
            E7(f) => format!("E7({})", e7_name(*f)),
            SplitForm(f) => format!("SplitForm({f})"),
            CompactForm(f) => format!("CompactForm({f})"),
            AnisotropicOther(f) => format!("AnisotropicOther({f})"),
            Unspecified => "unspecified".into(),
        }
    }
}

fn e7_name(f: E7Form) -> &'static str {
    match f {
        E7Form::Split => "split",
        E7Form::Quaternionic => "quaternionic",
        E7Form::Hermitian => "hermitian",
        E7Form::Compact => "compact",
    }
}

impl fmt::Display for RealFormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RealFormTag::*;
        match self {
            SlR(n) => write!(f, "SL({n},R)"),
            SlH(n) => write!(f, "SL({n},H)"),
            SpinStar(m) => write!(f, "Spin*({m})"),
            SpR(m) => write!(f, "Sp({m},R)"),
            SplitForm(x) => write!(f, "split {x}"),
            CompactForm(x) => write!(f, "compact {x}"),
            AnisotropicOther(x) => write!(f, "other {x}"),
            other => f.write_str(&other.syntax()),
        }
    }
}

impl FromStr for RealFormTag {
    type Err = String;

    /// Accepts both the file syntax (`SL_R(3)`, `SpinStar(12)`, `Sp_R(6)`) and
    /// the display names (`SL(3,R)`, `Spin*(12)`, `Sp(6,R)`).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        use RealFormTag::*;
        let s = s.trim();
        if s.eq_ignore_ascii_case("unspecified") {
            return Ok(Unspecified);
        }
        let (name, args) = s
            .split_once('(')
            .and_then(|(n, rest)| rest.strip_suffix(')').map(|a| (n.trim(), a)))
            .ok_or_else(|| format!("expected TAG(PARAMS), got {s:?}"))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let num = |i: usize| -> std::result::Result<u32, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("{name} needs more parameters"))?
                .parse::<u32>()
                .map_err(|_| format!("bad parameter {:?} in {s}", parts[i]))
        };
        let arity = |k: usize| -> std::result::Result<(), String> {
            if parts.len() == k {
                Ok(())
            } else {
                Err(format!("{name} takes {k} parameter(s), got {}", parts.len()))
            }
        };
        let family = |i: usize| -> std::result::Result<Family, String> {
            let f: Family = parts[i].parse().map_err(|e: Error| e.to_string())?;
            if matches!(f, Family::E6 | Family::E8 | Family::F4 | Family::G2) {
                Ok(f)
            } else {
                Err(format!("{name} is only used for E6, E8, F4, G2; use the named forms"))
            }
        };
        let tag = match name {
            "SL_R" => {
                arity(1)?;
                SlR(num(0)?)
            }
            "SL_H" => {
                arity(1)?;
                SlH(num(0)?)
            }
            "SL" => {
                arity(2)?;
                match parts[1] {
                    "R" => SlR(num(0)?),
                    "H" => SlH(num(0)?),
                    other => return Err(format!("SL(n,{other}) is not a real form name")),
                }
            }
            "SU" => {
                arity(2)?;
                Su(num(0)?, num(1)?)
            }
            "Spin" => {
                arity(2)?;
                Spin(num(0)?, num(1)?)
            }
            "SpinStar" | "Spin*" => {
                arity(1)?;
                SpinStar(num(0)?)
            }
            "Sp_R" => {
                arity(1)?;
                SpR(num(0)?)
            }
            "Sp" => {
                arity(2)?;
                if parts[1] == "R" {
                    SpR(num(0)?)
                } else {
                    Sp(num(0)?, num(1)?)
                }
            }
            "E7" => {
                arity(1)?;
                E7(match parts[0] {
                    "split" => E7Form::Split,
                    "quaternionic" => E7Form::Quaternionic,
                    "hermitian" => E7Form::Hermitian,
                    "compact" => E7Form::Compact,
                    other => return Err(format!("unknown E7 form {other:?}")),
                })
            }
            "SplitForm" => {
                arity(1)?;
                SplitForm(family(0)?)
            }
            "CompactForm" => {
                arity(1)?;
                CompactForm(family(0)?)
            }
            "AnisotropicOther" => {
                arity(1)?;
                AnisotropicOther(family(0)?)
            }
            other => return Err(format!("unknown real form tag {other:?}")),
        };
        match tag {
            SpinStar(m) | SpR(m) if m % 2 == 1 => Err(format!("{s}: parameter must be even")),
            SlR(0) | SlH(0) | SpinStar(0) | SpR(0) | Su(0, 0) | Spin(0, 0) | Sp(0, 0) => {
                Err(format!("{s}: parameters too small"))
            }
            t => Ok(t),
        }
    }
}

/// Every named real form of the (family, rank) of `t`, with whether it is
/// inner over R. Aliases from low-rank isomorphisms appear once, in canonical
/// form.
pub fn forms_for_type(t: &GroupType) -> Vec<(RealFormTag, bool)> {
    use RealFormTag::*;
    let n = t.rank();
    let mut raw: Vec<RealFormTag> = Vec::new();
    match t.family() {
        Family::A => {
            raw.push(SlR(n + 1));
            if n % 2 == 1 {
                raw.push(SlH((n + 1) / 2));
            }
            if n >= 2 {
                for s in 0..=(n + 1) / 2 {
                    raw.push(Su(n + 1 - s, s));
                }
            }
        }
        Family::B => {
            for s in 0..=n {
                raw.push(Spin(2 * n + 1 - s, s));
            }
        }
        Family::C => {
            raw.push(SpR(2 * n));
            for s in 0..=n / 2 {
                raw.push(Sp(n - s, s));
            }
        }
        Family::D => {
            for s in 0..=n {
                raw.push(Spin(2 * n - s, s));
            }
            raw.push(SpinStar(2 * n));
        }
        Family::E7 => {
            for f in [E7Form::Split, E7Form::Quaternionic, E7Form::Hermitian, E7Form::Compact] {
                raw.push(E7(f));
            }
        }
        f => {
            raw.push(SplitForm(f));
            raw.push(CompactForm(f));
            raw.push(AnisotropicOther(f));
        }
    }
    let mut out: Vec<(RealFormTag, bool)> = Vec::new();
    for tag in raw {
        let c = tag.canonical();
        if c.cartan() != Some((t.family(), n)) {
            continue;
        }
        if out.iter().any(|(x, _)| *x == c) {
            continue;
        }
        let inner = c.is_real_inner().unwrap_or(true);
        out.push((c, inner));
    }
    out
}

/// Real forms of `t` with trivial image, restricted to those that can occur
/// at a real place of a group of type `t` (inner forms only when `t` is an
/// inner type). `bound` caps the size parameter (`r + s` or matrix size).
pub fn trivial_image_forms(t: &GroupType, bound: Option<u32>) -> Vec<RealFormTag> {
    forms_for_type(t)
        .into_iter()
        .filter(|(_, inner)| t.is_outer() || *inner)
        .filter(|(tag, _)| bound.map_or(true, |b| size_param(tag) <= b))
        .filter(|(tag, _)| tag.q_image_trivial() == Some(true))
        .map(|(tag, _)| tag)
        .collect()
}

fn size_param(tag: &RealFormTag) -> u32 {
    use RealFormTag::*;
    match *tag {
        SlR(n) => n,
        SlH(n) => 2 * n,
        Su(r, s) | Spin(r, s) => r + s,
        Sp(r, s) => 2 * (r + s),
        SpinStar(m) | SpR(m) => m,
        _ => 0,
    }
}

/// The class a real place must carry: the named class when known (a supplied
/// value must then agree up to the diagram automorphism), otherwise the
/// supplied value. `None` when neither is available.
pub fn real_class(
    tag: &RealFormTag,
    t: &GroupType,
    kind: PlaceKind,
    supplied: Option<LocalClass>,
) -> Result<Option<LocalClass>> {
    let known = tag.known_class(t, kind)?;
    match (known, supplied) {
        (Some(k), Some(s)) => {
            let alt = sym_act(t, kind, &k)?;
            if s == k || s == alt {
                Ok(Some(s))
            } else {
                Err(Error::RealForm {
                    place: String::new(),
                    form: tag.to_string(),
                    msg: format!("class {s} contradicts the class {k} of this form"),
                })
            }
        }
        (Some(k), None) => Ok(Some(k)),
        (None, s) => {
            if let Some(s) = s {
                let (shape, _) = h2_local(t, kind)?;
                if s.shape() != shape {
                    return Err(Error::Shape(format!("{s} is not in {shape}")));
                }
            }
            Ok(s)
        }
    }
}

/// A named form with the given class at a place of the given kind, when one
/// is known; used to label real coordinates of constructed twins.
pub fn named_form_with_class(t: &GroupType, kind: PlaceKind, class: &LocalClass) -> RealFormTag {
    use RealFormTag::*;
    let n = t.rank();
    let candidates: Vec<RealFormTag> = forms_for_type(t)
        .into_iter()
        .filter(|(_, inner)| *inner == (kind == PlaceKind::RealInner))
        .map(|(tag, _)| tag)
        .collect();
    for tag in &candidates {
        if let Ok(Some(k)) = tag.known_class(t, kind) {
            if k == *class || sym_act(t, kind, &k).ok() == Some(*class) {
                return *tag;
            }
        }
    }
    if t.family() == Family::C && kind == PlaceKind::RealInner && !class.is_zero() {
        // quaternionic hermitian forms all carry the class of the quaternions
        return Sp(n, 0);
    }
    Unspecified
}
