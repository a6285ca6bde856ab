use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::chain::{ChainOptions, StabChain};
use crate::perm::hom::GroupHom;
use crate::perm::Permutation;

/// Default bound on element enumeration (centers, quotients, element lists).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 100_000;

struct GroupData {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
}

/// A finite permutation group given by generators.
///
/// The generator list is kept exactly as supplied (identities included) so
/// that homomorphisms can be defined on it positionally. Cloning is cheap.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<GroupData>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<PermGroup> {
        Self::build(degree, generators, None)
    }

    /// Like [`PermGroup::new`] when the order is already known; the chain
    /// construction stops once that order is reached and fails if it is exceeded.
    pub fn with_known_order(degree: usize, generators: Vec<Permutation>, order: u64) -> Result<PermGroup> {
        Self::build(degree, generators, Some(order))
    }

    fn build(degree: usize, generators: Vec<Permutation>, known: Option<u64>) -> Result<PermGroup> {
        let chain = StabChain::build(
            degree,
            &generators,
            ChainOptions {
                base_prefix: &[],
                known_order: known,
            },
        )?;
        Ok(PermGroup {
            inner: Arc::new(GroupData {
                degree,
                generators,
                chain,
            }),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    /// Symmetric group on `n` points.
    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(Permutation::from_images(cycle).unwrap());
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(Permutation::from_images(t).unwrap());
        }
        PermGroup::new(n.max(1), gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    pub fn chain(&self) -> &StabChain {
        &self.inner.chain
    }

    pub fn order(&self) -> u64 {
        self.inner.chain.order()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.inner.chain.contains(g)
    }

    /// `self <= other` (same degree, every generator of `self` in `other`).
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree() && self.generators().iter().all(|g| other.contains(g))
    }

    /// Equality as subsets of the symmetric group.
    pub fn same_as(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        self.is_subgroup_of(ambient)
            && ambient
                .generators()
                .iter()
                .all(|g| self.generators().iter().all(|h| self.contains(&h.conjugate_by(g))))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    fn require_enumerable(&self, bound: u64) -> Result<()> {
        if self.order() > bound {
            return Err(Error::capacity(
                format!("group of order {} is above the enumeration bound", self.order()),
                bound,
            ));
        }
        Ok(())
    }

    /// All elements, subject to `DEFAULT_ENUMERATION_BOUND`.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        self.elements_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn elements_bounded(&self, bound: u64) -> Result<Vec<Permutation>> {
        self.require_enumerable(bound)?;
        Ok(self.inner.chain.elements())
    }

    fn check_members(&self, elems: &[Permutation]) -> Result<()> {
        for e in elems {
            if e.degree() != self.degree() || !self.contains(e) {
                return Err(Error::invalid(format!("element {} is not in the group", e)));
            }
        }
        Ok(())
    }

    fn check_subgroup(&self, h: &PermGroup, what: &str) -> Result<()> {
        if !h.is_subgroup_of(self) {
            return Err(Error::invalid(format!("{what} is not contained in the ambient group")));
        }
        Ok(())
    }

    /// Subgroup generated by `elems`, which must lie in `self`.
    pub fn subgroup_generated(&self, elems: &[Permutation]) -> Result<PermGroup> {
        self.check_members(elems)?;
        PermGroup::new(self.degree(), elems.to_vec())
    }

    /// Smallest normal subgroup of `self` containing `h`.
    pub fn normal_closure(&self, h: &PermGroup) -> Result<PermGroup> {
        self.check_subgroup(h, "subgroup")?;
        Ok(normal_closure_of_gens(self, h.generators().to_vec()))
    }

    /// `[a, b]` for subgroups `a, b` of `self`.
    pub fn commutator_subgroup(&self, a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
        self.check_subgroup(a, "first commutator argument")?;
        self.check_subgroup(b, "second commutator argument")?;
        let comms: Vec<Permutation> = a
            .generators()
            .iter()
            .flat_map(|x| b.generators().iter().map(move |y| x.commutator(y)))
            .filter(|c| !c.is_identity())
            .collect();
        let mut join_gens = a.generators().to_vec();
        join_gens.extend(b.generators().iter().cloned());
        let join = PermGroup::new(self.degree(), join_gens)?;
        Ok(normal_closure_of_gens(&join, comms))
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        self.commutator_subgroup(self, self).expect("self-commutator")
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    /// Elements commuting with every generator, by enumeration.
    pub fn center(&self) -> Result<PermGroup> {
        self.center_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn center_bounded(&self, bound: u64) -> Result<PermGroup> {
        let gens = self.generators();
        let central: Vec<Permutation> = self
            .elements_bounded(bound)?
            .into_iter()
            .filter(|z| !z.is_identity() && gens.iter().all(|g| z.commutes_with(g)))
            .collect();
        PermGroup::new(self.degree(), minimal_generators(self.degree(), central))
    }

    /// `1 = Z_0 <= Z_1 <= ...`, ending at the first repeat (the hypercenter).
    pub fn upper_central_series(&self) -> Result<Vec<PermGroup>> {
        self.upper_central_series_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn upper_central_series_bounded(&self, bound: u64) -> Result<Vec<PermGroup>> {
        let elems = self.elements_bounded(bound)?;
        let gens = self.generators();
        let mut series = vec![PermGroup::trivial(self.degree())];
        loop {
            let last = series.last().unwrap().clone();
            let next_elems: Vec<Permutation> = elems
                .iter()
                .filter(|z| !last.contains(z) && gens.iter().all(|g| last.contains(&z.commutator(g))))
                .cloned()
                .collect();
            if next_elems.is_empty() {
                break;
            }
            let mut gens_next = last.generators().to_vec();
            gens_next.extend(minimal_generators_over(&last, next_elems));
            series.push(PermGroup::new(self.degree(), gens_next)?);
        }
        Ok(series)
    }

    pub fn hypercenter(&self) -> Result<PermGroup> {
        Ok(self.upper_central_series()?.pop().unwrap())
    }

    /// `gamma_1 = G, gamma_{i+1} = [G, gamma_i]`, ending at the first repeat.
    pub fn lower_central_series(&self) -> Vec<PermGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(self, last).expect("terms are subgroups");
            if next.order() == last.order() {
                break;
            }
            series.push(next);
        }
        series
    }

    /// `G^(0) = G, G^(i+1) = [G^(i), G^(i)]`, ending at the first repeat.
    pub fn derived_series(&self) -> Vec<PermGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.derived_subgroup();
            if next.order() == last.order() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_trivial()
    }

    /// Nilpotency class, or `None` if the group is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let lcs = self.lower_central_series();
        if lcs.last().unwrap().is_trivial() {
            Some(lcs.len() - 1)
        } else {
            None
        }
    }

    /// Quotient by a normal subgroup, realised by the right-regular action on
    /// cosets, together with the projection.
    pub fn quotient(&self, n: &PermGroup) -> Result<(PermGroup, GroupHom)> {
        if !n.is_normal_in(self) {
            return Err(Error::invalid("quotient requires a normal subgroup"));
        }
        let elems = self.elements()?;
        let index_of: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n_elems = n.elements()?;
        let mut coset_of = vec![usize::MAX; elems.len()];
        let mut reps: Vec<usize> = Vec::new();
        for (i, g) in elems.iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for x in &n_elems {
                coset_of[index_of[&x.compose(g)]] = c;
            }
        }
        let index = reps.len();
        let gens: Vec<Permutation> = self
            .generators()
            .iter()
            .map(|s| {
                let images = reps
                    .iter()
                    .map(|&r| coset_of[index_of[&elems[r].compose(s)]] as u32)
                    .collect();
                Permutation::from_images(images).expect("coset action is a permutation")
            })
            .collect();
        let q = PermGroup::with_known_order(index.max(1), pad_degree(gens, index.max(1)), index as u64)?;
        let proj = GroupHom::new(self.clone(), q.clone(), q.generators().to_vec())?;
        Ok((q, proj))
    }

    /// Successive normal closures of `h`: `C_0 = self`, `C_{i+1} = <h^{C_i}>`.
    pub fn successive_normal_closures(&self, h: &PermGroup) -> Result<Vec<PermGroup>> {
        self.check_subgroup(h, "subgroup")?;
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.normal_closure(h)?;
            if next.order() == last.order() {
                break;
            }
            series.push(next);
        }
        Ok(series)
    }

    /// Whether `h` is subnormal in `self`; on success the certificate chain
    /// `self = C_0 > C_1 > ... > h` of successive normal closures.
    pub fn subnormal_chain(&self, h: &PermGroup) -> Result<Option<Vec<PermGroup>>> {
        let series = self.successive_normal_closures(h)?;
        if series.last().unwrap().order() == h.order() {
            Ok(Some(series))
        } else {
            Ok(None)
        }
    }

    pub fn is_subnormal(&self, h: &PermGroup) -> Result<bool> {
        Ok(self.subnormal_chain(h)?.is_some())
    }

    /// Sorted element list; a canonical key for small subgroups.
    pub fn element_key(&self) -> Result<Vec<Permutation>> {
        let mut e = self.elements()?;
        e.sort();
        Ok(e)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree())
            .field("order", &self.order())
            .field("generators", &self.generators())
            .finish()
    }
}

fn pad_degree(gens: Vec<Permutation>, degree: usize) -> Vec<Permutation> {
    gens.into_iter()
        .map(|g| if g.degree() < degree { g.extend(degree).unwrap() } else { g })
        .collect()
}

/// Normal closure in `ambient` of the subgroup generated by `seed`.
fn normal_closure_of_gens(ambient: &PermGroup, seed: Vec<Permutation>) -> PermGroup {
    let degree = ambient.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut current = PermGroup::trivial(degree);
    let mut queue: Vec<Permutation> = seed;
    while let Some(x) = queue.pop() {
        if current.contains(&x) {
            continue;
        }
        gens.push(x.clone());
        current = PermGroup::new(degree, gens.clone()).expect("same degree");
        for g in ambient.generators() {
            for y in &gens {
                let c = y.conjugate_by(g);
                if !current.contains(&c) {
                    queue.push(c);
                }
            }
        }
    }
    current
}

/// Greedy subset of `elems` generating the same group.
pub(crate) fn minimal_generators(degree: usize, elems: Vec<Permutation>) -> Vec<Permutation> {
    minimal_generators_over(&PermGroup::trivial(degree), elems)
}

/// Elements of `elems` added greedily on top of `base` until all are covered.
pub(crate) fn minimal_generators_over(base: &PermGroup, elems: Vec<Permutation>) -> Vec<Permutation> {
    let mut chosen: Vec<Permutation> = Vec::new();
    let mut current = base.clone();
    let mut seen = HashSet::new();
    for e in elems {
        if !seen.insert(e.clone()) || current.contains(&e) {
            continue;
        }
        chosen.push(e);
        let mut all = base.generators().to_vec();
        all.extend(chosen.iter().cloned());
        current = PermGroup::new(base.degree(), all).expect("same degree");
    }
    chosen
}
