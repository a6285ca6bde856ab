use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{GroupHom, NormalMap, PermGroup};

/// `M_{k+1} -> M_k -> ... -> M_1 = G`; `links[0]` starts at `M_{k+1}` and
/// the last link ends at `G`.
#[derive(Clone, Debug)]
pub struct SubnormalChain {
    pub links: Vec<NormalMap>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SubnormalChainReport {
    pub links_pass: Vec<bool>,
    pub composable: bool,
    pub image_order: u64,
    pub image_subnormal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl SubnormalChainReport {
    pub fn valid(&self) -> bool {
        self.composable && self.links_pass.iter().all(|&b| b) && self.image_subnormal
    }
}

impl SubnormalChain {
    pub fn new(links: Vec<NormalMap>) -> SubnormalChain {
        SubnormalChain { links }
    }

    /// Chain of normal inclusions `groups[0] >= groups[1] >= ...`, read from
    /// the smallest group upwards.
    pub fn of_inclusions(groups: &[PermGroup]) -> Result<SubnormalChain> {
        let mut links = Vec::new();
        for w in groups.windows(2).rev() {
            if w[0].same_as(&w[1]) {
                continue;
            }
            links.push(NormalMap::normal_inclusion(&w[1], &w[0])?);
        }
        Ok(SubnormalChain { links })
    }

    pub fn bottom(&self) -> Option<&PermGroup> {
        self.links.first().map(|l| l.source())
    }

    pub fn top(&self) -> Option<&PermGroup> {
        self.links.last().map(|l| l.target())
    }

    /// The composite map `M_{k+1} -> G`.
    pub fn composite(&self) -> Result<GroupHom> {
        let mut iter = self.links.iter();
        let first = iter.next().ok_or_else(|| Error::invalid("empty chain"))?;
        let mut acc = first.map.clone();
        for l in iter {
            acc = acc.then(&l.map)?;
        }
        Ok(acc)
    }

    pub fn report(&self) -> Result<SubnormalChainReport> {
        let mut witness = None;
        let mut links_pass = Vec::with_capacity(self.links.len());
        for (i, l) in self.links.iter().enumerate() {
            let r = l.check_axioms()?;
            if !r.passed() {
                witness.get_or_insert_with(|| format!("link {}: {}", i + 1, r.witness.clone().unwrap_or_default()));
            }
            links_pass.push(r.passed());
        }
        let composable = self
            .links
            .windows(2)
            .all(|w| w[0].target().same_as(w[1].source()) && w[0].target().degree() == w[1].source().degree());
        if !composable {
            witness.get_or_insert_with(|| "consecutive links do not compose".into());
        }
        let (image_order, image_subnormal) = if composable && !self.links.is_empty() {
            let n = self.composite()?;
            let g = self.top().unwrap();
            let sub = g.is_subnormal(n.image())?;
            if !sub {
                witness.get_or_insert_with(|| "image of the composite is not subnormal".into());
            }
            (n.image().order(), sub)
        } else {
            (0, composable)
        };
        Ok(SubnormalChainReport {
            links_pass,
            composable,
            image_order,
            image_subnormal,
            witness,
        })
    }
}

/// Whether every link is a normal map, the links compose, and the image of
/// the composite is subnormal.
pub fn verify_subnormal_chain(c: &SubnormalChain) -> Result<bool> {
    Ok(c.report()?.valid())
}
