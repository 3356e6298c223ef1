//! Command-line front end.
//!
//! Exit codes: 0 success or Rigid, 1 NotRigid (or a failed check in
//! `equiv`/`selftest`), 2 Undetermined, 3 error, 4 out of scope.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::arith_equiv::{parse_catalog, summarize};
use crate::brauer_witt::{s_omega_orbit, weak_uniformity};
use crate::classifier::{classify, Outcome, Verdict};
use crate::descriptor::{parse_descriptor, GroupDescriptor};
use crate::error::{Error, Result};
use crate::invariant_algebra::GroupType;
use crate::real_forms::trivial_image_forms;

pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rigidity", version, about = "Decide congruence rigidity of groups over number fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a descriptor file, or every .grp file in a directory.
    Classify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the two orbit sets compared by weak uniformity.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the real forms whose cohomology maps trivially to the adjoint group.
    Realforms {
        /// Family with optional inner/outer prefix: C, 1A, 2D, E7, ...
        family: String,
        rank: u32,
        /// Largest size parameter to list.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Run the arithmetic-equivalence checks on a group catalog.
    Equiv { catalog: PathBuf },
    /// Classify the bundled fixtures and compare with the expected outcomes.
    Selftest,
}

/// Runs the tool with `args` (program name first) and returns the exit code.
pub fn main_with_args(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let res = match cli.command {
        Command::Classify { path, json } => cmd_classify(&path, json, out),
        Command::Orbit { file, json } => cmd_orbit(&file, json, out),
        Command::Realforms { family, rank, bound } => cmd_realforms(&family, rank, bound, out),
        Command::Equiv { catalog } => cmd_equiv(&catalog, out),
        Command::Selftest => cmd_selftest(out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_out_of_scope() {
                4
            } else {
                EXIT_ERROR
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GroupDescriptor> {
    parse_descriptor(&read(path)?)
}

/// Parses and classifies; out-of-scope inputs become an OutOfScope verdict.
pub fn classify_text(text: &str) -> Result<Verdict> {
    match parse_descriptor(text) {
        Ok(d) => classify(&d),
        Err(Error::OutOfScope(msg)) => Ok(Verdict::out_of_scope(&msg)),
        Err(e) => Err(e),
    }
}

fn cmd_classify(path: &Path, json: bool, out: &mut dyn Write) -> Result<i32> {
    if path.is_dir() {
        return classify_dir(path, json, out);
    }
    let v = classify_text(&read(path)?)?;
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v.to_json()).expect("json"));
    } else {
        let _ = write!(out, "{}", v.to_human());
    }
    Ok(v.outcome.exit_code())
}

/// Classifies every `.grp` file in the directory in parallel; exit code 3 if
/// any file failed, else 0.
fn classify_dir(dir: &Path, json: bool, out: &mut dyn Write) -> Result<i32> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "grp"))
        .collect();
    files.sort();
    let results: Vec<(PathBuf, Result<Verdict>)> = files
        .par_iter()
        .map(|p| (p.clone(), read(p).and_then(|t| classify_text(&t))))
        .collect();
    let mut failed = false;
    let mut records = Vec::new();
    for (p, r) in results {
        let name = p.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_default();
        match r {
            Ok(v) => {
                if json {
                    records.push(json!({ "file": name, "verdict": v.to_json() }));
                } else {
                    let _ = writeln!(out, "{name}: {:?}", v.outcome);
                }
            }
            Err(e) => {
                failed = true;
                if json {
                    records.push(json!({ "file": name, "error": e.to_string() }));
                } else {
                    let _ = writeln!(out, "{name}: error: {e}");
                }
            }
        }
    }
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&records).expect("json"));
    }
    Ok(if failed { EXIT_ERROR } else { 0 })
}

fn cmd_orbit(path: &Path, json: bool, out: &mut dyn Write) -> Result<i32> {
    let d = load(path)?;
    let wu = weak_uniformity(&d.omega, &d.field, &d.symmetry)?;
    let so = s_omega_orbit(&d.omega)?;
    let fmt_set = |s: &std::collections::BTreeSet<crate::brauer_witt::OmegaVector>| -> Vec<String> {
        s.iter().map(|w| w.finite_string()).collect()
    };
    if json {
        let v = json!({
            "holds": wu.holds,
            "twin_flip_orbit": so.elements.iter().map(|w| w.finite_string()).collect::<Vec<_>>(),
            "lhs": fmt_set(&wu.lhs),
            "rhs": fmt_set(&wu.rhs),
            "witness": wu.witness.as_ref().map(|w| w.finite_string()),
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        let places: Vec<String> = d.omega.finite.keys().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "places: ({})", places.join(", "));
        let _ = writeln!(out, "twin-flip orbit ({}):", so.elements.len());
        for w in &so.elements {
            let _ = writeln!(out, "  {}", w.finite_string());
        }
        let _ = writeln!(out, "global orbit with diagram automorphism ({}):", wu.lhs.len());
        for s in fmt_set(&wu.lhs) {
            let _ = writeln!(out, "  {s}");
        }
        let _ = writeln!(out, "adelic orbit of twin flips ({}):", wu.rhs.len());
        for s in fmt_set(&wu.rhs) {
            let _ = writeln!(out, "  {s}");
        }
        let _ = writeln!(out, "weakly uniform: {}", wu.holds);
    }
    Ok(0)
}

fn cmd_realforms(family: &str, rank: u32, bound: Option<u32>, out: &mut dyn Write) -> Result<i32> {
    let t = GroupType::parse_parts(family, rank)?;
    for tag in trivial_image_forms(&t, bound) {
        let _ = writeln!(out, "{tag}");
    }
    Ok(0)
}

fn cmd_equiv(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let entries = parse_catalog(&read(path)?)?;
    let summaries: Vec<Result<_>> = entries
        .par_iter()
        .map(|e| e.group().and_then(|g| summarize(&e.name, &g)))
        .collect();
    let mut all_ok = true;
    for s in summaries {
        let s = s?;
        let ok = s.prop.holds && s.mackey_holds;
        all_ok &= ok;
        let _ = writeln!(
            out,
            "{}: order {}, {} classes, {} subgroups ({} normal), {} almost-conjugate non-conjugate pairs, \
             index-two criterion {} on {} pairs, restriction formula {} on {} cases",
            s.name,
            s.order,
            s.classes,
            s.subgroups,
            s.normal_subgroups,
            s.gassmann_pairs,
            if s.prop.holds { "holds" } else { "FAILS" },
            s.prop.pairs_checked,
            if s.mackey_holds { "holds" } else { "FAILS" },
            s.mackey_cases,
        );
    }
    Ok(if all_ok { 0 } else { 1 })
}

/// A bundled descriptor with its expected outcome and, for non-rigid
/// fixtures with a concrete twin, the expected finite invariants of the
/// witness.
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub expected: Outcome,
    pub witness_finite: Option<&'static str>,
}

macro_rules! fixture {
    ($name:literal, $outcome:expr, $witness:expr) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../examples/", $name)),
            expected: $outcome,
            witness_finite: $witness,
        }
    };
}

pub fn fixtures() -> Vec<Fixture> {
    use Outcome::*;
    vec![
        fixture!("table1_D1.grp", NotRigid, Some("(1/3, 2/3, 2/3, 1/3)")),
        fixture!("table1_D2.grp", NotRigid, Some("(1/3, 2/3, 1/3, 2/3)")),
        fixture!("table3_A4_gaussian.grp", Rigid, None),
        fixture!("table3_no_swap.grp", NotRigid, Some("(1/5, 3/5, 2/5, 4/5)")),
        fixture!("table4_A5_gaussian.grp", Rigid, None),
        fixture!("quaternion_sqrt2.grp", NotRigid, None),
        fixture!("cubic_31.grp", NotRigid, None),
        fixture!("sl2_Q.grp", Rigid, None),
        fixture!("split_C3_Q.grp", Rigid, None),
        fixture!("split_G2_Q.grp", NotRigid, None),
        fixture!("outer_A2_Q.grp", Rigid, None),
        fixture!("A3_Q_subset.grp", NotRigid, None),
        fixture!("D6_Q_one_twin.grp", Rigid, None),
        fixture!("D5_Q_twins.grp", NotRigid, None),
        fixture!("outer_D6_two_reals.grp", NotRigid, None),
        fixture!("E6_Q.grp", NotRigid, None),
        fixture!("E6_gaussian.grp", Rigid, None),
        fixture!("outer_A2_imag_quadratic.grp", Rigid, None),
        fixture!("sextic_hbar.grp", NotRigid, None),
        fixture!("komatsu_hbar.grp", NotRigid, None),
        fixture!("D4.grp", OutOfScope, None),
    ]
}

fn cmd_selftest(out: &mut dyn Write) -> Result<i32> {
    let mut failures = 0;
    for f in fixtures() {
        let res = classify_text(f.text);
        let (ok, detail) = match &res {
            Ok(v) => {
                let witness_ok = match (f.witness_finite, v.twin()) {
                    (None, _) => true,
                    (Some(want), Some(tw)) => tw.omega.finite_string() == want,
                    (Some(_), None) => false,
                };
                (
                    v.outcome == f.expected && witness_ok,
                    format!(
                        "{:?}{}",
                        v.outcome,
                        v.twin().map(|t| format!(" witness {}", t.omega.finite_string())).unwrap_or_default()
                    ),
                )
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        let _ = writeln!(
            out,
            "{} {}: {} (expected {:?})",
            if ok { "PASS" } else { "FAIL" },
            f.name,
            detail,
            f.expected
        );
    }
    Ok(if failures == 0 { 0 } else { 1 })
}
