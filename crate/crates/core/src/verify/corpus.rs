use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use super::checks::{run_check, VerifyOptions};
use super::{CheckReport, Instance, Status, Theorem};
use crate::closure::normal_overgroups;
use crate::error::{Error, Result};
use crate::perm::{GroupHom, PermGroup};
use crate::presets::{parse_element, preset, preset_group, NAMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusSpec {
    /// Presets of order at most 16, plus S4.
    Small,
    /// A handful of groups of order at most 8.
    Tiny,
}

impl FromStr for CorpusSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<CorpusSpec> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(CorpusSpec::Small),
            "tiny" => Ok(CorpusSpec::Tiny),
            _ => Err(Error::invalid(format!("unknown corpus {s:?}; expected small or tiny"))),
        }
    }
}

const TINY: &[&str] = &["C1", "C2", "C3", "C4", "V4", "S3", "D4", "Q8"];

/// Subgroup embeddings between presets, images written in the codomain.
const INCLUSIONS: &[(&str, &str, &[&str])] = &[
    ("C2", "V4", &["a"]),
    ("C2", "C4", &["a^2"]),
    ("C2", "S3", &["b"]),
    ("C3", "S3", &["a"]),
    ("C2", "D4", &["s"]),
    ("C2", "D4", &["r^2"]),
    ("C4", "D4", &["r"]),
    ("V4", "D4", &["s", "r^2"]),
    ("C4", "Q8", &["a"]),
    ("C2", "Q8", &["a^2"]),
    ("C4", "C8", &["a^2"]),
    ("C3", "C6", &["a^2"]),
    ("C3", "C9", &["a^3"]),
    ("C5", "C10", &["a^2"]),
    ("C6", "C12", &["a^2"]),
    ("C4", "C12", &["a^3"]),
    ("C7", "C14", &["a^2"]),
    ("C5", "C15", &["a^3"]),
    ("C8", "C16", &["a^2"]),
    ("C5", "D5", &["r"]),
    ("C2", "D5", &["s"]),
    ("S3", "D6", &["r^2", "s"]),
    ("C6", "D6", &["r"]),
    ("V4", "A4", &["b", "a^-1 b a"]),
    ("C3", "A4", &["a"]),
    ("C8", "D8", &["r"]),
    ("D4", "D8", &["r^2", "s"]),
    ("Q8", "Q16", &["a^2", "b"]),
    ("C8", "Q16", &["a"]),
    ("C4", "C2xC4", &["b"]),
    ("C2", "C2xC4", &["a"]),
    ("V4", "C2^3", &["a", "b"]),
    ("C2", "S4", &["(1 2)"]),
    ("C2", "S4", &["(1 2)(3 4)"]),
    ("C3", "S4", &["(1 2 3)"]),
    ("C4", "S4", &["(1 2 3 4)"]),
    ("V4", "S4", &["(1 2)(3 4)", "(1 3)(2 4)"]),
    ("S3", "S4", &["(1 2 3)", "(1 2)"]),
    ("D4", "S4", &["(1 2 3 4)", "(2 4)"]),
    ("A4", "S4", &["(1 2 3)", "(1 2)(3 4)"]),
];

/// Names of the groups in a corpus.
pub fn corpus_groups(spec: CorpusSpec) -> Vec<&'static str> {
    match spec {
        CorpusSpec::Tiny => TINY.to_vec(),
        CorpusSpec::Small => NAMES
            .iter()
            .copied()
            .filter(|n| *n == "S4" || preset_group(n).map(|g| g.order() <= 16).unwrap_or(false))
            .collect(),
    }
}

/// Identities, trivial maps to `C2`, every quotient map, and the listed
/// embeddings between groups of the corpus.
pub fn build_corpus(spec: CorpusSpec) -> Result<Vec<Instance>> {
    let names = corpus_groups(spec);
    let c2 = preset_group("C2")?;
    let mut out = Vec::new();
    for name in &names {
        let gamma = preset(name)?;
        let g = gamma.group().clone();
        out.push(Instance::new(format!("id {name}"), gamma.clone(), &GroupHom::identity(&g))?);
        out.push(Instance::new(
            format!("trivial {name} -> C2"),
            gamma.clone(),
            &GroupHom::trivial(&g, &c2),
        )?);
        let trivial = PermGroup::trivial(g.degree());
        let mut count: BTreeMap<u64, usize> = BTreeMap::new();
        for n in normal_overgroups(&g, &trivial, 500)? {
            if n.is_trivial() || n.order() == g.order() {
                continue;
            }
            let i = count.entry(n.order()).or_default();
            *i += 1;
            let (_, proj) = g.quotient(&n)?;
            out.push(Instance::new(
                format!("{name} -> {name}/N{}#{i}", n.order()),
                gamma.clone(),
                &proj,
            )?);
        }
    }
    for (d, c, images) in INCLUSIONS {
        if !names.contains(d) || !names.contains(c) {
            continue;
        }
        let dg = preset(d)?;
        let cg = preset(c)?;
        let imgs = images
            .iter()
            .map(|s| parse_element(&cg, s))
            .collect::<Result<Vec<_>>>()?;
        let phi = GroupHom::new(dg.group().clone(), cg.group().clone(), imgs)?;
        if !phi.is_injective() {
            return Err(Error::inconsistent(format!("listed embedding {d} -> {c} is not injective")));
        }
        out.push(Instance::new(format!("{d} -> {c} by {}", images.join(", ")), dg, &phi)?);
    }
    Ok(out)
}

fn apply(theorem: Theorem, inst: &Instance, opts: &VerifyOptions) -> Option<CheckReport> {
    match run_check(theorem, inst, opts) {
        Ok(r) => Some(r),
        Err(Error::Precondition(_)) => None,
        Err(e @ Error::Capacity { .. }) => Some(CheckReport::skipped(theorem, &inst.name, e.to_string())),
        Err(e) => Some(CheckReport::new(theorem, &inst.name).fail(e.to_string())),
    }
}

/// Every listed checker on every instance it applies to. Instances outside
/// a checker's hypotheses are left out; capacity errors become skipped
/// reports. The perfect-case checker is also run on the corestriction to
/// the subnormal closure of the image when that closure is perfect.
pub fn run_corpus(instances: &[Instance], theorems: &[Theorem], opts: &VerifyOptions) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for inst in instances {
        for &t in theorems {
            match apply(t, inst, opts) {
                Some(r) => out.push(r),
                None if t == Theorem::PerfectCase => {
                    if let Some(r) = perfect_on_closure(inst, opts) {
                        out.push(r);
                    }
                }
                None => {}
            }
        }
    }
    out
}

fn perfect_on_closure(inst: &Instance, opts: &VerifyOptions) -> Option<CheckReport> {
    let g = inst.phi.codomain();
    let c = match g.successive_normal_closures(inst.phi.image()) {
        Ok(mut s) => s.pop().expect("series has a first term"),
        Err(e) => return Some(CheckReport::new(Theorem::PerfectCase, &inst.name).fail(e.to_string())),
    };
    if !c.is_perfect() || c.same_as(g) {
        return None;
    }
    let sub = inst
        .phi
        .corestrict(&c)
        .and_then(|psi| Instance::new(format!("{} onto c", inst.name), inst.gamma.clone(), &psi));
    match sub {
        Ok(i) => apply(Theorem::PerfectCase, &i, opts),
        Err(e) => Some(CheckReport::new(Theorem::PerfectCase, &inst.name).fail(e.to_string())),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TheoremCounts {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub theorems: BTreeMap<String, TheoremCounts>,
}

impl CorpusSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn summarize(reports: &[CheckReport]) -> CorpusSummary {
    let mut s = CorpusSummary::default();
    for r in reports {
        s.total += 1;
        let t = s.theorems.entry(r.theorem.name().to_string()).or_default();
        match r.status {
            Status::Pass => {
                s.passed += 1;
                t.passed += 1;
            }
            Status::Fail => {
                s.failed += 1;
                t.failed += 1;
            }
            Status::Skipped => {
                s.skipped += 1;
                t.skipped += 1;
            }
        }
    }
    s
}
