//! Permutation-group side of arithmetic equivalence: almost conjugate
//! subgroups, the induced trivial characters that detect them, and the
//! index-two criterion that forces almost conjugate subgroups to be
//! conjugate.
//!
//! Characters are integer class functions (fixed-point counts on coset
//! spaces); nothing here uses complex representations.

pub mod catalog;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{closure, Perm};

pub use catalog::{builtin_catalog, parse_catalog, CatalogEntry};

pub const DEFAULT_GROUP_CAP: usize = 10080;
const SUBGROUP_CAP: usize = 20000;
const TABLE_LIMIT: usize = 2048;

/// A finite permutation group with its elements, inverses and conjugacy
/// classes precomputed. Elements are stored in sorted order, so the
/// identity is element 0.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
    gen_idx: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_cap(degree, generators, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Contract(format!("generator {g} does not act on {degree} points")));
        }
        let mut elements = closure(degree, &generators, cap)?;
        elements.sort();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let gen_idx = generators.iter().map(|g| index[g]).collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.then(b)] as u32);
                }
            }
            t
        });
        let mut g = PermGroup {
            degree,
            generators,
            elements,
            index,
            table,
            inverse,
            gen_idx,
            classes: vec![],
            class_of: vec![usize::MAX; n],
        };
        g.compute_classes();
        Ok(g)
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &s in &self.gen_idx {
                    let y = self.conj(x, s);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }
    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `a` followed by `b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self.order(), (0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(self.order(), vec![0])
    }

    /// Checks closure and identity before accepting the set.
    pub fn subgroup(&self, mut members: Vec<usize>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::Contract("subgroup must contain the identity".into()));
        }
        let set: HashSet<usize> = members.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::Contract("set is not closed under multiplication".into()));
                }
            }
        }
        Ok(Subgroup::from_members(self.order(), members))
    }

    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup::from_members(self.order(), members)
    }

    pub fn generated_by_perms(&self, gens: &[Perm]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|p| {
                self.index_of(p)
                    .ok_or_else(|| Error::Contract(format!("{p} is not in the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generated(&idx))
    }

    /// Elements fixing the given point.
    pub fn stabilizer(&self, point: usize) -> Subgroup {
        let m = (0..self.order()).filter(|&i| self.elements[i].apply(point) == point).collect();
        Subgroup::from_members(self.order(), m)
    }

    /// Elements mapping the given set of points onto itself.
    pub fn setwise_stabilizer(&self, points: &[usize]) -> Subgroup {
        let set: HashSet<usize> = points.iter().copied().collect();
        let m = (0..self.order())
            .filter(|&i| points.iter().all(|&p| set.contains(&self.elements[i].apply(p))))
            .collect();
        Subgroup::from_members(self.order(), m)
    }

    /// `g^-1 U g`.
    pub fn conjugate(&self, u: &Subgroup, g: usize) -> Subgroup {
        let mut m: Vec<usize> = u.members.iter().map(|&x| self.conj(x, g)).collect();
        m.sort_unstable();
        Subgroup::from_members(self.order(), m)
    }

    pub fn is_normal(&self, u: &Subgroup) -> bool {
        self.gen_idx
            .iter()
            .all(|&s| u.members.iter().all(|&x| u.contains(self.conj(x, s))))
    }

    /// Every subgroup, built bottom-up by adjoining one element at a time to
    /// subgroups already found.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        let n = self.order();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let triv = self.trivial();
        seen.insert(triv.bits.clone());
        let mut all = vec![triv];
        let mut frontier = 0;
        while frontier < all.len() {
            let h = all[frontier].clone();
            frontier += 1;
            let mut covered = h.bits.clone();
            let base = small_generating_set(self, &h);
            for g in 0..n {
                if covered[g / 64] >> (g % 64) & 1 == 1 {
                    continue;
                }
                let mut ext_gens = base.clone();
                ext_gens.push(g);
                let k = self.generated(&ext_gens);
                for (w, kb) in covered.iter_mut().zip(&k.bits) {
                    *w |= kb;
                }
                if seen.insert(k.bits.clone()) {
                    if all.len() >= SUBGROUP_CAP {
                        return Err(Error::Capacity {
                            what: "subgroup enumeration".into(),
                            size: all.len() + 1,
                            cap: SUBGROUP_CAP,
                            partial: None,
                        });
                    }
                    all.push(k);
                }
            }
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        Ok(all)
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self.all_subgroups()?.into_iter().filter(|u| self.is_normal(u)).collect())
    }
}

/// A few elements generating `h`, found greedily.
fn small_generating_set(g: &PermGroup, h: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut cur = g.trivial();
    for &x in h.members() {
        if cur.order() == h.order() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = g.generated(&gens);
        }
    }
    gens
}

/// A subgroup as a sorted list of element indices of its parent group, with
/// a bit set for membership tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    bits: Vec<u64>,
    members: Vec<usize>,
}

impl Subgroup {
    fn from_members(group_order: usize, members: Vec<usize>) -> Self {
        let mut bits = vec![0u64; group_order.div_ceil(64)];
        for &m in &members {
            bits[m / 64] |= 1 << (m % 64);
        }
        Subgroup { bits, members }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }
    pub fn members(&self) -> &[usize] {
        &self.members
    }
    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }
    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// Number of elements of `u` in each conjugacy class of `g`.
pub fn class_profile(g: &PermGroup, u: &Subgroup) -> Vec<usize> {
    let mut p = vec![0; g.conjugacy_classes().len()];
    for &x in u.members() {
        p[g.class_of(x)] += 1;
    }
    p
}

/// The permutation character of `g` on the right cosets of `u`, evaluated
/// at one representative per class by counting fixed cosets directly.
pub fn coset_character(g: &PermGroup, u: &Subgroup) -> Vec<usize> {
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in u.members() {
            coset_of[g.mul(h, x)] = id;
        }
    }
    g.conjugacy_classes()
        .iter()
        .map(|cls| {
            let x = cls[0];
            reps.iter().filter(|&&r| coset_of[g.mul(r, x)] == coset_of[r]).count()
        })
        .collect()
}

/// Same number of elements in every conjugacy class. The answer is
/// confirmed by comparing the two permutation characters; a disagreement is
/// reported as an internal error.
pub fn almost_conjugate(g: &PermGroup, u1: &Subgroup, u2: &Subgroup) -> Result<bool> {
    if u1.order() != u2.order() {
        return Ok(false);
    }
    let by_profile = class_profile(g, u1) == class_profile(g, u2);
    let by_character = coset_character(g, u1) == coset_character(g, u2);
    if by_profile != by_character {
        return Err(Error::Internal(
            "class profiles and induced characters disagree on almost conjugacy".into(),
        ));
    }
    Ok(by_profile)
}

pub fn are_conjugate(g: &PermGroup, u1: &Subgroup, u2: &Subgroup) -> bool {
    if u1.order() != u2.order() || class_profile(g, u1) != class_profile(g, u2) {
        return false;
    }
    (0..g.order()).any(|x| u1.members().iter().all(|&h| u2.contains(g.conj(h, x))))
}

/// A normal subgroup containing both as subgroups of index two.
pub fn common_normal_index2(g: &PermGroup, u1: &Subgroup, u2: &Subgroup) -> Result<Option<Subgroup>> {
    if u1.order() != u2.order() || 2 * u1.order() > g.order() || g.order() % (2 * u1.order()) != 0 {
        return Ok(None);
    }
    let want = 2 * u1.order();
    if want == g.order() {
        return Ok(Some(g.whole()));
    }
    Ok(g
        .normal_subgroups()?
        .into_iter()
        .find(|n| n.order() == want && u1.is_subset_of(n) && u2.is_subset_of(n)))
}

#[derive(Clone, Debug)]
pub struct PropReport {
    pub holds: bool,
    /// Pairs of index-two subgroups examined.
    pub pairs_checked: usize,
    /// Of those, pairs that were almost conjugate.
    pub almost_conjugate_pairs: usize,
    pub counterexample: Option<(Subgroup, Subgroup)>,
}

/// For every normal subgroup and every pair of its index-two subgroups:
/// almost conjugate implies conjugate.
pub fn verify_prop_almost_conjugate(g: &PermGroup) -> Result<PropReport> {
    let subs = g.all_subgroups()?;
    let mut report = PropReport {
        holds: true,
        pairs_checked: 0,
        almost_conjugate_pairs: 0,
        counterexample: None,
    };
    for n in subs.iter().filter(|n| g.is_normal(n)) {
        let halves: Vec<&Subgroup> = subs
            .iter()
            .filter(|u| 2 * u.order() == n.order() && u.is_subset_of(n))
            .collect();
        for i in 0..halves.len() {
            for j in i..halves.len() {
                report.pairs_checked += 1;
                if almost_conjugate(g, halves[i], halves[j])? {
                    report.almost_conjugate_pairs += 1;
                    if !are_conjugate(g, halves[i], halves[j]) {
                        report.holds = false;
                        report.counterexample = Some((halves[i].clone(), halves[j].clone()));
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Group-theoretic content of the injectivity argument for Galois fields:
/// every almost conjugate pair of index-two subgroups of `n` is conjugate in
/// `g`.
pub fn hbar_certificate(g: &PermGroup, n: &Subgroup, pairs: &[(Subgroup, Subgroup)]) -> Result<bool> {
    if !g.is_normal(n) {
        return Err(Error::Precondition("N is not normal in G".into()));
    }
    for (u1, u2) in pairs {
        for u in [u1, u2] {
            if !u.is_subset_of(n) || 2 * u.order() != n.order() {
                return Err(Error::Precondition("pair member is not an index-two subgroup of N".into()));
            }
        }
    }
    for (u1, u2) in pairs {
        if almost_conjugate(g, u1, u2)? && !are_conjugate(g, u1, u2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction to `n` of the character induced from `u`, against
/// `[G:N]` copies of the trivial character plus the sign characters of `N`
/// with kernels the conjugates of `u`. Both sides are evaluated at every
/// element of `n`.
pub fn mackey_check(g: &PermGroup, n: &Subgroup, u: &Subgroup) -> Result<bool> {
    if !g.is_normal(n) || !u.is_subset_of(n) || 2 * u.order() != n.order() {
        return Err(Error::Precondition("need U of index two in N, N normal in G".into()));
    }
    let order = g.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if coset_of[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &h in u.members() {
                coset_of[g.mul(h, x)] = id;
            }
        }
    }
    let mut n_coset = vec![usize::MAX; order];
    let mut n_reps = Vec::new();
    for x in 0..order {
        if n_coset[x] == usize::MAX {
            n_reps.push(x);
            for &h in n.members() {
                n_coset[g.mul(h, x)] = n_reps.len() - 1;
            }
        }
    }
    let conjugates: Vec<Subgroup> = n_reps.iter().map(|&s| g.conjugate(u, s)).collect();
    for &x in n.members() {
        let lhs = reps.iter().filter(|&&r| coset_of[g.mul(r, x)] == coset_of[r]).count() as i64;
        let rhs = n_reps.len() as i64
            + conjugates
                .iter()
                .map(|k| if k.contains(x) { 1 } else { -1 })
                .sum::<i64>();
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Almost conjugate but non-conjugate pairs, one pair per pair of
/// conjugacy classes of subgroups.
pub fn gassmann_pairs(g: &PermGroup) -> Result<Vec<(Subgroup, Subgroup)>> {
    let subs = g.all_subgroups()?;
    // one representative per conjugacy class of subgroups
    let mut reps: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for u in &subs {
        if seen.contains(&u.bits) {
            continue;
        }
        for x in 0..g.order() {
            seen.insert(g.conjugate(u, x).bits);
        }
        reps.push(u.clone());
    }
    let mut out = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if almost_conjugate(g, &reps[i], &reps[j])? {
                out.push((reps[i].clone(), reps[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Summary of the checks run on one catalog group.
#[derive(Clone, Debug)]
pub struct EquivSummary {
    pub name: String,
    pub order: usize,
    pub classes: usize,
    pub subgroups: usize,
    pub normal_subgroups: usize,
    pub gassmann_pairs: usize,
    pub prop: PropReport,
    pub mackey_cases: usize,
    pub mackey_holds: bool,
}

pub fn summarize(name: &str, g: &PermGroup) -> Result<EquivSummary> {
    let subs = g.all_subgroups()?;
    let normals: Vec<&Subgroup> = subs.iter().filter(|n| g.is_normal(n)).collect();
    let mut mackey_cases = 0;
    let mut mackey_holds = true;
    for n in &normals {
        for u in subs.iter().filter(|u| 2 * u.order() == n.order() && u.is_subset_of(n)) {
            mackey_cases += 1;
            mackey_holds &= mackey_check(g, n, u)?;
        }
    }
    Ok(EquivSummary {
        name: name.to_string(),
        order: g.order(),
        classes: g.conjugacy_classes().len(),
        subgroups: subs.len(),
        normal_subgroups: normals.len(),
        gassmann_pairs: gassmann_pairs(g)?.len(),
        prop: verify_prop_almost_conjugate(g)?,
        mackey_cases,
        mackey_holds,
    })
}
