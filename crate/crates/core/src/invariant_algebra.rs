//! Local Poitou–Tate data: the local cohomology group at each kind of place,
//! the map into the global target, and the action of the Dynkin symmetry group.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    fn fixed_rank(self) -> Option<u32> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E6" => Family::E6,
            "E7" => Family::E7,
            "E8" => Family::E8,
            "F4" => Family::F4,
            "G2" => Family::G2,
            _ => return Err(Error::InvalidType(format!("unknown family {s:?}"))),
        })
    }
}

/// Whether the quasi-split inner form is split (inner) or only split by a
/// quadratic extension (outer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Form {
    Inner,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupType {
    family: Family,
    rank: u32,
    form: Form,
}

impl GroupType {
    /// Validates rank bounds and which families admit outer forms. `B2` is
    /// normalized to `C2`; `D4` is rejected as out of scope (triality).
    pub fn new(family: Family, rank: u32, form: Form) -> Result<Self> {
        let mut family = family;
        if let Some(r) = family.fixed_rank() {
            if rank != r {
                return Err(Error::InvalidType(format!("{family} has rank {r}, got {rank}")));
            }
        }
        match family {
            Family::A if rank < 1 => return Err(Error::InvalidType("A needs rank >= 1".into())),
            Family::B if rank < 2 => return Err(Error::InvalidType("B needs rank >= 2".into())),
            Family::B if rank == 2 => family = Family::C,
            Family::C if rank < 2 => return Err(Error::InvalidType("C needs rank >= 2".into())),
            Family::D if rank == 4 => {
                return Err(Error::OutOfScope("type D4 (triality) is not handled".into()))
            }
            Family::D if rank < 4 => {
                return Err(Error::InvalidType(format!(
                    "D{rank} is not a separate type; use the isomorphic A or C type"
                )))
            }
            _ => {}
        }
        if form == Form::Outer {
            let ok = match family {
                Family::A => rank >= 2,
                Family::D => rank >= 5,
                Family::E6 => true,
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidType(format!(
                    "{family}{rank} has no outer forms"
                )));
            }
        }
        Ok(GroupType { family, rank, form })
    }

    pub fn inner(family: Family, rank: u32) -> Result<Self> {
        Self::new(family, rank, Form::Inner)
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn rank(&self) -> u32 {
        self.rank
    }
    pub fn form(&self) -> Form {
        self.form
    }
    pub fn is_outer(&self) -> bool {
        self.form == Form::Outer
    }

    /// True when the Dynkin diagram has a nontrivial automorphism group.
    pub fn has_symmetry(&self) -> bool {
        match self.family {
            Family::A => self.rank >= 2,
            Family::D | Family::E6 => true,
            _ => false,
        }
    }

    pub fn inner_twin(&self) -> GroupType {
        GroupType {
            form: Form::Inner,
            ..*self
        }
    }

    /// `A` of even rank (2n) or `A` of odd rank (2n+1), with `n`.
    pub fn a_parity(&self) -> Option<(bool, u32)> {
        if self.family != Family::A {
            return None;
        }
        if self.rank % 2 == 0 {
            Some((true, self.rank / 2))
        } else {
            Some((false, (self.rank - 1) / 2))
        }
    }

    pub fn is_d_even(&self) -> bool {
        self.family == Family::D && self.rank % 2 == 0
    }
    pub fn is_d_odd(&self) -> bool {
        self.family == Family::D && self.rank % 2 == 1
    }

    fn is_a_even(&self) -> bool {
        self.family == Family::A && self.rank % 2 == 0
    }

    /// Short label such as `1A4`, `2D6`, `B3`, `1E6`, `E8`.
    pub fn label(&self) -> String {
        let prefix = if self.has_symmetry() {
            match self.form {
                Form::Inner => "1",
                Form::Outer => "2",
            }
        } else {
            ""
        };
        match self.family.fixed_rank() {
            Some(_) => format!("{prefix}{}", self.family),
            None => format!("{prefix}{}{}", self.family, self.rank),
        }
    }

    /// Parses a family token with optional `1`/`2` prefix (`1A`, `2D`, `C`,
    /// `2E6`) together with a rank.
    pub fn parse_parts(family_token: &str, rank: u32) -> Result<Self> {
        let (form, fam) = if let Some(rest) = family_token.strip_prefix('1') {
            (Form::Inner, rest)
        } else if let Some(rest) = family_token.strip_prefix('2') {
            (Form::Outer, rest)
        } else {
            (Form::Inner, family_token)
        };
        GroupType::new(fam.parse()?, rank, form)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Shape {
    Trivial,
    Cyclic(u32),
    /// Z/2 x Z/2
    Klein,
}

impl Shape {
    pub fn order(&self) -> u32 {
        match self {
            Shape::Trivial => 1,
            Shape::Cyclic(m) => *m,
            Shape::Klein => 4,
        }
    }

    pub fn zero(&self) -> LocalClass {
        match self {
            Shape::Trivial => LocalClass::Trivial,
            Shape::Cyclic(m) => LocalClass::Cyclic { m: *m, r: 0 },
            Shape::Klein => LocalClass::Klein(0, 0),
        }
    }

    pub fn elements(&self) -> Vec<LocalClass> {
        match self {
            Shape::Trivial => vec![LocalClass::Trivial],
            Shape::Cyclic(m) => (0..*m).map(|r| LocalClass::Cyclic { m: *m, r }).collect(),
            Shape::Klein => vec![
                LocalClass::Klein(0, 0),
                LocalClass::Klein(0, 1),
                LocalClass::Klein(1, 0),
                LocalClass::Klein(1, 1),
            ],
        }
    }

    fn cyclic(m: u32) -> Shape {
        if m == 1 {
            Shape::Trivial
        } else {
            Shape::Cyclic(m)
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Trivial => f.write_str("0"),
            Shape::Cyclic(m) => write!(f, "Z/{m}"),
            Shape::Klein => f.write_str("Z/2xZ/2"),
        }
    }
}

/// An element of one of the small abelian groups above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LocalClass {
    Trivial,
    Cyclic { m: u32, r: u32 },
    Klein(u8, u8),
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LocalClass {
    pub fn shape(&self) -> Shape {
        match self {
            LocalClass::Trivial => Shape::Trivial,
            LocalClass::Cyclic { m, .. } => Shape::Cyclic(*m),
            LocalClass::Klein(..) => Shape::Klein,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LocalClass::Trivial => true,
            LocalClass::Cyclic { r, .. } => *r == 0,
            LocalClass::Klein(a, b) => *a == 0 && *b == 0,
        }
    }

    pub fn add(&self, other: &LocalClass) -> Result<LocalClass> {
        match (self, other) {
            (LocalClass::Trivial, LocalClass::Trivial) => Ok(LocalClass::Trivial),
            (LocalClass::Cyclic { m, r }, LocalClass::Cyclic { m: m2, r: r2 }) if m == m2 => {
                Ok(LocalClass::Cyclic {
                    m: *m,
                    r: (r + r2) % m,
                })
            }
            (LocalClass::Klein(a, b), LocalClass::Klein(c, d)) => {
                Ok(LocalClass::Klein((a + c) % 2, (b + d) % 2))
            }
            _ => Err(Error::Shape(format!("cannot add {self} and {other}"))),
        }
    }

    pub fn neg(&self) -> LocalClass {
        match self {
            LocalClass::Cyclic { m, r } => LocalClass::Cyclic { m: *m, r: (m - r) % m },
            other => *other,
        }
    }

    pub fn swap(&self) -> LocalClass {
        match self {
            LocalClass::Klein(a, b) => LocalClass::Klein(*b, *a),
            other => *other,
        }
    }

    /// Reads `0`, an integer residue, a fraction `a/b` with `b | m` (taken as
    /// the invariant a/b in (1/m)Z/Z), or `(b1,b2)` for the Klein group.
    pub fn parse(text: &str, shape: Shape) -> std::result::Result<LocalClass, String> {
        let t = text.trim();
        match shape {
            Shape::Trivial => {
                if t == "0" || t == "0/1" {
                    Ok(LocalClass::Trivial)
                } else {
                    Err(format!("value {t:?} in the trivial group; only 0 is allowed"))
                }
            }
            Shape::Klein => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| format!("expected (b1,b2) for a Z/2xZ/2 value, got {t:?}"))?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(format!("expected two entries in {t:?}"));
                }
                let bit = |s: &str| -> std::result::Result<u8, String> {
                    match s {
                        "0" => Ok(0),
                        "1" => Ok(1),
                        _ => Err(format!("expected 0 or 1, got {s:?}")),
                    }
                };
                Ok(LocalClass::Klein(bit(parts[0])?, bit(parts[1])?))
            }
            Shape::Cyclic(m) => {
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (t, "1"),
                };
                let a: i64 = num.parse().map_err(|_| format!("bad numerator {num:?}"))?;
                let b: i64 = den.parse().map_err(|_| format!("bad denominator {den:?}"))?;
                if b <= 0 {
                    return Err(format!("denominator must be positive in {t:?}"));
                }
                let m64 = m as i64;
                let r = if t.contains('/') {
                    if m64 % b != 0 {
                        return Err(format!("{t} is not an invariant of order dividing {m}"));
                    }
                    a * (m64 / b)
                } else {
                    a
                };
                Ok(LocalClass::Cyclic {
                    m,
                    r: r.rem_euclid(m64) as u32,
                })
            }
        }
    }
}

impl fmt::Display for LocalClass {
    /// Cyclic values print as reduced invariants `a/b`, so `2 in Z/3` is `2/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalClass::Trivial => f.write_str("0"),
            LocalClass::Cyclic { r: 0, .. } => f.write_str("0"),
            LocalClass::Cyclic { m, r } => {
                let g = gcd(*r, *m);
                write!(f, "{}/{}", r / g, m / g)
            }
            LocalClass::Klein(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlaceKind {
    /// Finite place where the group is of inner type.
    FiniteInner,
    /// Finite place where the splitting extension stays a field.
    FiniteOuter,
    RealInner,
    RealOuter,
    Complex,
}

impl PlaceKind {
    pub fn is_finite(&self) -> bool {
        matches!(self, PlaceKind::FiniteInner | PlaceKind::FiniteOuter)
    }
    pub fn is_real(&self) -> bool {
        matches!(self, PlaceKind::RealInner | PlaceKind::RealOuter)
    }
    pub fn is_inner(&self) -> bool {
        matches!(self, PlaceKind::FiniteInner | PlaceKind::RealInner)
    }
}

/// The homomorphism from a local group into the global target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalMap {
    Zero,
    Identity,
    /// Z/a -> Z/b, x |-> k*x.
    Scale(u32),
    /// Reduction Z/2m -> Z/2.
    Parity,
    /// Z/2 x Z/2 -> Z/2, (a,b) |-> a+b.
    Sum,
}

impl LocalMap {
    fn apply(&self, x: &LocalClass, target: Shape) -> LocalClass {
        match (self, x) {
            (LocalMap::Zero, _) => target.zero(),
            (LocalMap::Identity, x) => *x,
            (LocalMap::Scale(k), LocalClass::Cyclic { r, .. }) => match target {
                Shape::Cyclic(m) => LocalClass::Cyclic { m, r: (k * r) % m },
                _ => target.zero(),
            },
            (LocalMap::Parity, LocalClass::Cyclic { r, .. }) => LocalClass::Cyclic { m: 2, r: r % 2 },
            (LocalMap::Sum, LocalClass::Klein(a, b)) => LocalClass::Cyclic {
                m: 2,
                r: ((a + b) % 2) as u32,
            },
            _ => target.zero(),
        }
    }
}

/// The global target group, i.e. the dual of the center.
pub fn center_shape(t: &GroupType) -> Shape {
    match t.family {
        Family::A => {
            let n1 = t.rank + 1;
            match (t.form, t.rank % 2 == 0) {
                (Form::Inner, _) => Shape::cyclic(n1),
                (Form::Outer, true) => Shape::Trivial,
                (Form::Outer, false) => Shape::Cyclic(2),
            }
        }
        Family::B | Family::C | Family::E7 => Shape::Cyclic(2),
        Family::D => match (t.form, t.rank % 2 == 0) {
            (Form::Inner, true) => Shape::Klein,
            (Form::Inner, false) => Shape::Cyclic(4),
            (Form::Outer, _) => Shape::Cyclic(2),
        },
        Family::E6 => match t.form {
            Form::Inner => Shape::Cyclic(3),
            Form::Outer => Shape::Trivial,
        },
        Family::E8 | Family::F4 | Family::G2 => Shape::Trivial,
    }
}

/// The local group at a place of the given kind and its map into the target.
pub fn h2_local(t: &GroupType, kind: PlaceKind) -> Result<(Shape, LocalMap)> {
    use PlaceKind::*;
    if kind == Complex {
        return Ok((Shape::Trivial, LocalMap::Zero));
    }
    let z2 = Shape::Cyclic(2);
    let a_even_or_e6 = t.is_a_even() || t.family == Family::E6;
    match t.form {
        Form::Inner => match kind {
            FiniteInner => Ok((center_shape(t), LocalMap::Identity)),
            RealInner => Ok(match t.family {
                Family::A if t.rank % 2 == 0 => (Shape::Trivial, LocalMap::Zero),
                Family::A => (z2, LocalMap::Scale((t.rank - 1) / 2 + 1)),
                Family::B | Family::C | Family::E7 => (z2, LocalMap::Identity),
                Family::D if t.rank % 2 == 0 => (Shape::Klein, LocalMap::Identity),
                Family::D => (z2, LocalMap::Scale(2)),
                Family::E6 | Family::E8 | Family::F4 | Family::G2 => {
                    (Shape::Trivial, LocalMap::Zero)
                }
            }),
            _ => Err(Error::Contract(format!(
                "{t} is an inner form; {kind:?} places do not occur"
            ))),
        },
        Form::Outer => {
            if a_even_or_e6 {
                return Ok(match kind {
                    FiniteInner => (center_shape(&t.inner_twin()), LocalMap::Zero),
                    _ => (Shape::Trivial, LocalMap::Zero),
                });
            }
            // remaining outer types: A odd, D
            Ok(match kind {
                FiniteInner => {
                    let map = if t.is_d_even() {
                        LocalMap::Sum
                    } else {
                        LocalMap::Parity
                    };
                    (center_shape(&t.inner_twin()), map)
                }
                FiniteOuter => (z2, LocalMap::Identity),
                RealInner if t.is_d_even() => (Shape::Klein, LocalMap::Sum),
                RealInner => (z2, LocalMap::Identity),
                RealOuter if t.is_d_even() => (Shape::Trivial, LocalMap::Zero),
                RealOuter => (z2, LocalMap::Identity),
                Complex => unreachable!(),
            })
        }
    }
}

/// Image of a local class in the global target.
pub fn c_local(t: &GroupType, kind: PlaceKind, x: &LocalClass) -> Result<LocalClass> {
    let (shape, map) = h2_local(t, kind)?;
    if x.shape() != shape {
        return Err(Error::Shape(format!(
            "{x} is not in {shape} (local group of {t} at a {kind:?} place)"
        )));
    }
    Ok(map.apply(x, center_shape(t)))
}

/// Action of the nontrivial diagram automorphism on a local class: inversion on
/// cyclic groups, coordinate swap on Z/2 x Z/2, identity for types without
/// symmetry.
pub fn sym_act(t: &GroupType, kind: PlaceKind, x: &LocalClass) -> Result<LocalClass> {
    let (shape, _) = h2_local(t, kind)?;
    if x.shape() != shape {
        return Err(Error::Shape(format!("{x} is not in {shape}")));
    }
    Ok(raw_sym(t, x))
}

/// The same rule on the global target.
pub fn global_sym_act(t: &GroupType, x: &LocalClass) -> Result<LocalClass> {
    if x.shape() != center_shape(t) {
        return Err(Error::Shape(format!("{x} is not in {}", center_shape(t))));
    }
    Ok(raw_sym(t, x))
}

fn raw_sym(t: &GroupType, x: &LocalClass) -> LocalClass {
    if !t.has_symmetry() {
        return *x;
    }
    match x {
        LocalClass::Klein(..) => x.swap(),
        LocalClass::Cyclic { .. } => x.neg(),
        LocalClass::Trivial => *x,
    }
}

/// Number of isomorphism classes of forms of `t` over a local field with
/// `square_classes` = |k_v^x / (k_v^x)^2|.
pub fn count_local_forms(t: &GroupType, square_classes: u64) -> Result<u64> {
    if square_classes == 0 {
        return Err(Error::Contract("the number of square classes must be positive".into()));
    }
    let (shape, _) = h2_local(t, PlaceKind::FiniteInner)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut orbits = 0u64;
    for x in shape.elements() {
        if seen.insert(x) {
            orbits += 1;
            seen.insert(raw_sym(t, &x));
        }
    }
    let m = match t.family {
        Family::A if t.rank >= 3 && t.rank % 2 == 1 => 2,
        Family::D => 2,
        Family::A if t.rank >= 2 => 1,
        Family::E6 => 1,
        _ => 0,
    };
    Ok(orbits + m * (square_classes - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(m: u32, r: u32) -> LocalClass {
        LocalClass::Cyclic { m, r }
    }

    #[test]
    fn worked_values() {
        let a3 = GroupType::inner(Family::A, 3).unwrap();
        assert_eq!(c_local(&a3, PlaceKind::RealInner, &cyc(2, 1)).unwrap(), cyc(4, 2));
        let a3o = GroupType::new(Family::A, 3, Form::Outer).unwrap();
        assert_eq!(c_local(&a3o, PlaceKind::FiniteInner, &cyc(4, 3)).unwrap(), cyc(2, 1));
        let d6o = GroupType::new(Family::D, 6, Form::Outer).unwrap();
        assert_eq!(
            c_local(&d6o, PlaceKind::FiniteInner, &LocalClass::Klein(1, 1)).unwrap(),
            cyc(2, 0)
        );
        let a4 = GroupType::inner(Family::A, 4).unwrap();
        assert_eq!(sym_act(&a4, PlaceKind::FiniteInner, &cyc(5, 2)).unwrap(), cyc(5, 3));
        let d6 = GroupType::inner(Family::D, 6).unwrap();
        assert_eq!(
            sym_act(&d6, PlaceKind::FiniteInner, &LocalClass::Klein(1, 0)).unwrap(),
            LocalClass::Klein(0, 1)
        );
    }

    #[test]
    fn local_form_counts() {
        let a2 = GroupType::inner(Family::A, 2).unwrap();
        assert_eq!(count_local_forms(&a2, 4).unwrap(), 5);
        let d6 = GroupType::inner(Family::D, 6).unwrap();
        assert_eq!(count_local_forms(&d6, 8).unwrap(), 17);
        let g2 = GroupType::inner(Family::G2, 2).unwrap();
        assert_eq!(count_local_forms(&g2, 4).unwrap(), 1);
    }

    #[test]
    fn type_normalization() {
        let b2 = GroupType::inner(Family::B, 2).unwrap();
        assert_eq!(b2.family(), Family::C);
        assert!(GroupType::inner(Family::D, 4).unwrap_err().is_out_of_scope());
        assert!(GroupType::new(Family::B, 3, Form::Outer).is_err());
        assert!(GroupType::new(Family::A, 1, Form::Outer).is_err());
        assert_eq!(GroupType::parse_parts("2E6", 6).unwrap().label(), "2E6");
    }

    #[test]
    fn inner_form_rejects_outer_places() {
        let a2 = GroupType::inner(Family::A, 2).unwrap();
        assert!(matches!(
            h2_local(&a2, PlaceKind::FiniteOuter),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn fractions() {
        assert_eq!(LocalClass::parse("2/3", Shape::Cyclic(3)).unwrap(), cyc(3, 2));
        assert_eq!(LocalClass::parse("1/2", Shape::Cyclic(6)).unwrap(), cyc(6, 3));
        assert_eq!(LocalClass::parse("-1", Shape::Cyclic(4)).unwrap(), cyc(4, 3));
        assert!(LocalClass::parse("1/4", Shape::Cyclic(6)).is_err());
        assert_eq!(cyc(6, 3).to_string(), "1/2");
        assert_eq!(
            LocalClass::parse("(1,0)", Shape::Klein).unwrap(),
            LocalClass::Klein(1, 0)
        );
    }
}
