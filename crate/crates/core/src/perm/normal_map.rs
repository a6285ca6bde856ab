use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::group::minimal_generators;
use crate::perm::{GroupHom, PermGroup, Permutation};

/// Generator indexing for groups generated by `Q`-indexed copies `(x, g)`.
///
/// Generator `(x, g)` sits at position `x * |Q| + index(g)`.
#[derive(Debug)]
pub struct CopyIndex {
    q_elements: Vec<Permutation>,
    q_index: HashMap<Permutation, usize>,
    copies: usize,
}

impl CopyIndex {
    pub fn new(q_elements: Vec<Permutation>, copies: usize) -> Self {
        let q_index = q_elements.iter().enumerate().map(|(i, q)| (q.clone(), i)).collect();
        CopyIndex {
            q_elements,
            q_index,
            copies,
        }
    }

    pub fn q_elements(&self) -> &[Permutation] {
        &self.q_elements
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn position(&self, x: usize, q: &Permutation) -> Option<usize> {
        self.q_index.get(q).map(|&i| x * self.q_elements.len() + i)
    }

    pub fn split(&self, position: usize) -> (usize, usize) {
        (position / self.q_elements.len(), position % self.q_elements.len())
    }
}

/// How `Q` acts on `M` for a normal map `M -> Q`.
#[derive(Clone, Debug)]
pub enum Action {
    /// `M` and `Q` live in a common symmetric group and `m^q = q^-1 m q`.
    Conjugation,
    /// `m^q = proj(l)^-1 m proj(l)` for any `l` with `section(l) = q`, where
    /// `proj: L -> M` and `section: L -> Q` are surjections out of a common group.
    Lifted { proj: GroupHom, section: GroupHom },
    /// `M` is generated by copies `(x, g)` and `(x, g)^q = (x, g q)`.
    Copies(Arc<CopyIndex>),
    /// Action of `Q` through a map `Q -> P` followed by an action of `P`.
    Pullback { through: GroupHom, inner: Box<Action> },
}

/// A crossed module `n: M -> Q` with its `Q`-action on `M`.
#[derive(Clone, Debug)]
pub struct NormalMap {
    pub map: GroupHom,
    pub action: Action,
}

/// Outcome of checking the normal-map axioms.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NormalMapReport {
    pub automorphic: bool,
    pub equivariance: bool,
    pub peiffer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl NormalMapReport {
    pub fn passed(&self) -> bool {
        self.automorphic && self.equivariance && self.peiffer
    }
}

impl NormalMap {
    pub fn new(map: GroupHom, action: Action) -> Self {
        NormalMap { map, action }
    }

    /// Inclusion of a normal subgroup, acting by conjugation.
    pub fn normal_inclusion(sub: &PermGroup, ambient: &PermGroup) -> Result<NormalMap> {
        if !sub.is_normal_in(ambient) {
            return Err(Error::invalid("inclusion of a subgroup that is not normal"));
        }
        Ok(NormalMap::new(GroupHom::inclusion(sub, ambient)?, Action::Conjugation))
    }

    pub fn source(&self) -> &PermGroup {
        self.map.domain()
    }

    pub fn target(&self) -> &PermGroup {
        self.map.codomain()
    }

    /// `m_j^q` for the `j`-th generator of the source and any `q` in the target.
    pub fn act_on_generator(&self, j: usize, q: &Permutation) -> Result<Permutation> {
        act_generator(&self.action, self.source(), j, q)
    }

    /// The automorphism `m -> m^q` of the source.
    pub fn act_hom(&self, q: &Permutation) -> Result<GroupHom> {
        let images = (0..self.source().generators().len())
            .map(|j| self.act_on_generator(j, q))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.source().clone(), self.source().clone(), images)
    }

    /// `m^q` for arbitrary `m` in the source.
    pub fn act(&self, m: &Permutation, q: &Permutation) -> Result<Permutation> {
        match &self.action {
            Action::Conjugation => Ok(m.conjugate_by(q)),
            Action::Lifted { proj, section } => {
                let l = lift(section, q)?;
                Ok(m.conjugate_by(&proj.eval(&l)?))
            }
            _ => self.act_hom(q)?.eval(m),
        }
    }

    /// Checks that each generator of a generating set of `Q` acts by an
    /// automorphism, equivariance `n(m^q) = q^-1 n(m) q`, and the Peiffer
    /// identity `m^{n(m')} = m'^-1 m m'`.
    pub fn check_axioms(&self) -> Result<NormalMapReport> {
        let mut report = NormalMapReport {
            automorphic: true,
            equivariance: true,
            peiffer: true,
            witness: None,
        };
        let m_gens = self.source().generators();
        let q_gens = minimal_generators(self.target().degree(), self.target().generators().to_vec());
        let n_images: Vec<Permutation> = m_gens.iter().map(|m| self.map.eval(m)).collect::<Result<_>>()?;

        for q in &q_gens {
            match self.act_hom(q) {
                Ok(alpha) if alpha.is_bijective() => {}
                Ok(_) => {
                    report.automorphic = false;
                    report.witness.get_or_insert(format!("action of {q} is not bijective"));
                }
                Err(Error::NotAHomomorphism { .. }) => {
                    report.automorphic = false;
                    report.witness.get_or_insert(format!("action of {q} is not a homomorphism"));
                }
                Err(Error::InvalidInput(msg)) => {
                    report.automorphic = false;
                    report.witness.get_or_insert(format!("action of {q}: {msg}"));
                }
                Err(e) => return Err(e),
            }
            for (j, m) in m_gens.iter().enumerate() {
                let mq = self.act_on_generator(j, q)?;
                if !self.source().contains(&mq) {
                    report.automorphic = false;
                    report.equivariance = false;
                    report.witness.get_or_insert(format!("{m} acted on by {q} leaves the source"));
                    continue;
                }
                let lhs = self.map.eval(&mq)?;
                let rhs = n_images[j].conjugate_by(q);
                if lhs != rhs {
                    report.equivariance = false;
                    report
                        .witness
                        .get_or_insert(format!("equivariance fails for m = {m}, q = {q}"));
                }
            }
        }

        // m' ranges over a generating subset; both sides are homomorphisms in m'
        let sub = minimal_generators(self.source().degree(), m_gens.to_vec());
        let sub_idx: Vec<usize> = sub
            .iter()
            .map(|s| m_gens.iter().position(|m| m == s).unwrap())
            .collect();
        for &k in &sub_idx {
            let mk = &m_gens[k];
            for (j, m) in m_gens.iter().enumerate() {
                let lhs = self.act_on_generator(j, &n_images[k])?;
                let rhs = m.conjugate_by(mk);
                if lhs != rhs {
                    report.peiffer = false;
                    report
                        .witness
                        .get_or_insert(format!("Peiffer identity fails for m = {m}, m' = {mk}"));
                }
            }
        }
        Ok(report)
    }
}

fn lift(section: &GroupHom, q: &Permutation) -> Result<Permutation> {
    section
        .preimage(q)?
        .ok_or_else(|| Error::invalid(format!("{q} is outside the acting group")))
}

fn act_generator(action: &Action, source: &PermGroup, j: usize, q: &Permutation) -> Result<Permutation> {
    let m = source
        .generators()
        .get(j)
        .ok_or_else(|| Error::invalid(format!("no generator {j}")))?;
    match action {
        Action::Conjugation => {
            if q.degree() != m.degree() {
                return Err(Error::invalid("conjugation action across different point sets"));
            }
            Ok(m.conjugate_by(q))
        }
        Action::Lifted { proj, section } => {
            let l = lift(section, q)?;
            Ok(m.conjugate_by(&proj.eval(&l)?))
        }
        Action::Copies(index) => {
            let (x, gi) = index.split(j);
            let target = index.q_elements()[gi].compose(q);
            let pos = index
                .position(x, &target)
                .ok_or_else(|| Error::invalid(format!("{q} is outside the acting group")))?;
            Ok(source.generators()[pos].clone())
        }
        Action::Pullback { through, inner } => {
            let p = through.eval(q)?;
            act_generator(inner, source, j, &p)
        }
    }
}
