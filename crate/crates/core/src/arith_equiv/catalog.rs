//! Plain-text catalog of permutation groups.
//!
//! ```text
//! [group NAME]
//! degree = 7
//! gen = (1 2 3 4 5 6 7)
//! gen = (3 5)(6 7)
//! ```

use crate::error::{Error, Result};
use crate::perm::Perm;

use super::{PermGroup, Subgroup};

const BUILTIN: &str = include_str!("../../examples/catalog.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
}

impl CatalogEntry {
    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::new(self.degree, self.generators.clone())
    }
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN).expect("bundled catalog parses")
}

pub fn builtin_group(name: &str) -> Result<PermGroup> {
    builtin_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Contract(format!("no catalog group named {name}")))?
        .group()
}

/// Parses cycle notation such as `(1 2 3)(4 5)` over points `1..=degree`.
pub fn parse_cycles(text: &str, degree: usize) -> std::result::Result<Perm, String> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected '(' at '{rest}'"))?;
        let close = inner.find(')').ok_or("unclosed cycle")?;
        let mut cyc = Vec::new();
        for tok in inner[..close].split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let p: usize = tok.parse().map_err(|_| format!("bad point '{tok}'"))?;
            if p == 0 || p > degree {
                return Err(format!("point {p} outside 1..{degree}"));
            }
            cyc.push(p - 1);
        }
        if !cyc.is_empty() {
            cycles.push(cyc);
        }
        rest = inner[close + 1..].trim_start();
    }
    Perm::from_cycles(degree, &cycles).map_err(|e| e.to_string())
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    let mut pending_gens: Vec<(usize, String)> = Vec::new();
    let finish = |out: &mut Vec<CatalogEntry>, gens: &mut Vec<(usize, String)>| -> Result<()> {
        if let Some(e) = out.last_mut() {
            if e.degree == 0 {
                return Err(Error::parse(0, 1, format!("group {} has no degree", e.name)));
            }
            for (line, g) in gens.drain(..) {
                let p = parse_cycles(&g, e.degree).map_err(|m| Error::parse(line, 1, m))?;
                e.generators.push(p);
            }
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(head) = line.strip_prefix('[') {
            let head = head
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(line_no, raw.len(), "missing ']'"))?;
            let name = head
                .strip_prefix("group")
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| Error::parse(line_no, 2, "expected [group NAME]"))?;
            finish(&mut out, &mut pending_gens)?;
            out.push(CatalogEntry {
                name: name.to_string(),
                degree: 0,
                generators: vec![],
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, 1, "expected key = value"))?;
        let entry = out
            .last_mut()
            .ok_or_else(|| Error::parse(line_no, 1, "entry before any [group] header"))?;
        match key.trim() {
            "degree" => {
                entry.degree = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, 1, "degree must be a positive integer"))?;
                if entry.degree == 0 {
                    return Err(Error::parse(line_no, 1, "degree must be positive"));
                }
            }
            "gen" => pending_gens.push((line_no, value.trim().to_string())),
            other => return Err(Error::parse(line_no, 1, format!("unknown key '{other}'"))),
        }
    }
    finish(&mut out, &mut pending_gens)?;
    Ok(out)
}

/// Lines of the Fano plane on points 0..7: translates of {0, 1, 3}.
pub fn fano_lines() -> Vec<[usize; 3]> {
    (0..7).map(|i| [i, (i + 1) % 7, (i + 3) % 7]).collect()
}

/// Stabilizers of the point 0 and of the line {0, 1, 3}.
pub fn fano_point_and_line_stabilizers(g: &PermGroup) -> (Subgroup, Subgroup) {
    (g.stabilizer(0), g.setwise_stabilizer(&fano_lines()[0]))
}

/// In the wreath product model of A4 x C2: the subgroup `U` generated by the
/// first two coordinate involutions, and the two coordinate subgroups inside
/// it.
pub fn wreath_subgroups(g: &PermGroup) -> Result<(Subgroup, Subgroup, Subgroup)> {
    let t1 = parse_cycles("(1 2)", 6).map_err(Error::Contract)?;
    let t2 = parse_cycles("(3 4)", 6).map_err(Error::Contract)?;
    Ok((
        g.generated_by_perms(&[t1.clone(), t2.clone()])?,
        g.generated_by_perms(&[t1])?,
        g.generated_by_perms(&[t2])?,
    ))
}
