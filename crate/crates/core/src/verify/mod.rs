//! Checkers that test the structural properties of towers and limits on
//! concrete instances, and a corpus runner.

mod checks;
mod corpus;

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fp::PresentedGroup;
use crate::perm::GroupHom;
use crate::tower::{inverse_limit, LimitOptions, LimitResult};

pub use checks::{
    check_finiteness_and_bound, check_kernel_reduction, check_lcs_quotients, check_nilpotent_fixed_point,
    check_perfect_case, check_subnormal_invariance, check_universality, run_check, subnormal_overgroups,
    VerifyOptions,
};
pub use corpus::{build_corpus, corpus_groups, run_corpus, summarize, CorpusSpec, CorpusSummary, TheoremCounts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    #[serde(rename = "nilpotent")]
    NilpotentFixedPoint,
    #[serde(rename = "lcs_quotients")]
    LcsQuotients,
    #[serde(rename = "finiteness")]
    FinitenessBound,
    #[serde(rename = "subnormal_invariance")]
    SubnormalInvariance,
    #[serde(rename = "universality")]
    Universality,
    #[serde(rename = "kernel_reduction")]
    KernelReduction,
    #[serde(rename = "perfect_case")]
    PerfectCase,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::NilpotentFixedPoint,
        Theorem::LcsQuotients,
        Theorem::FinitenessBound,
        Theorem::SubnormalInvariance,
        Theorem::Universality,
        Theorem::KernelReduction,
        Theorem::PerfectCase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::NilpotentFixedPoint => "nilpotent",
            Theorem::LcsQuotients => "lcs_quotients",
            Theorem::FinitenessBound => "finiteness",
            Theorem::SubnormalInvariance => "subnormal_invariance",
            Theorem::Universality => "universality",
            Theorem::KernelReduction => "kernel_reduction",
            Theorem::PerfectCase => "perfect_case",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theorem> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| {
                let names: Vec<&str> = Theorem::ALL.iter().map(|t| t.name()).collect();
                Error::invalid(format!("unknown theorem {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A capacity bound stopped the check.
    Skipped,
}

/// Outcome of one checker on one instance. Failures always carry a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub instance: String,
    pub status: Status,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn new(theorem: Theorem, instance: &str) -> CheckReport {
        CheckReport {
            theorem,
            instance: instance.to_string(),
            status: Status::Pass,
            data: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn fail(mut self, witness: impl Into<String>) -> CheckReport {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
        self
    }

    /// Passes if `ok`, otherwise fails with the lazily built witness.
    pub fn finish(self, ok: bool, witness: impl FnOnce() -> String) -> CheckReport {
        if ok {
            self
        } else {
            self.fail(witness())
        }
    }

    pub fn skipped(theorem: Theorem, instance: &str, reason: impl Into<String>) -> CheckReport {
        CheckReport {
            status: Status::Skipped,
            witness: Some(reason.into()),
            ..CheckReport::new(theorem, instance)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// A named homomorphism with a presented domain; the limit of the reduced
/// tower is computed once and shared by every checker.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub gamma: PresentedGroup,
    pub phi: GroupHom,
    limit: OnceCell<LimitResult>,
}

impl Instance {
    pub fn new(name: impl Into<String>, gamma: PresentedGroup, phi: &GroupHom) -> Result<Instance> {
        let phi = if phi.domain().generators() == gamma.group().generators() {
            phi.clone()
        } else {
            phi.rebase(gamma.group())?
        };
        Ok(Instance {
            name: name.into(),
            gamma,
            phi,
            limit: OnceCell::new(),
        })
    }

    pub fn limit(&self) -> Result<&LimitResult> {
        if let Some(l) = self.limit.get() {
            return Ok(l);
        }
        let l = inverse_limit(&self.gamma, &self.phi, &LimitOptions::default())?;
        Ok(self.limit.get_or_init(|| l))
    }
}
