//! Exhaustive search for homomorphisms subject to commuting constraints.

use crate::error::{Error, Result};
use crate::perm::group::minimal_generators;
use crate::perm::{GroupHom, PermGroup, Permutation};

/// Conditions a searched map `f: A -> B` must satisfy.
#[derive(Clone, Copy, Default)]
pub struct HomConstraints<'a> {
    /// `(down, target)`: `f` followed by `down: B -> T` equals `target: A -> T`.
    pub down: Option<(&'a GroupHom, &'a GroupHom)>,
    /// `(from, expected)`: `from: X -> A` followed by `f` equals `expected: X -> B`.
    pub through: Option<(&'a GroupHom, &'a GroupHom)>,
}

/// Every homomorphism `domain -> codomain` meeting the constraints.
///
/// Images are chosen for a greedy generating subset of the domain (images
/// of `from` first), restricted by `down` to preimage cosets and by element
/// orders; each tuple is then certified with the graph test. Fails with a
/// capacity error if more than `cap` tuples would be tried.
pub fn search_homs(
    domain: &PermGroup,
    codomain: &PermGroup,
    constraints: HomConstraints<'_>,
    cap: u64,
) -> Result<Vec<GroupHom>> {
    let mut pool: Vec<Permutation> = Vec::new();
    if let Some((from, _)) = constraints.through {
        if !from.codomain().same_as(domain) {
            return Err(Error::invalid("constraint map does not land in the searched domain"));
        }
        pool.extend(from.gen_images().iter().cloned());
    }
    pool.extend(domain.generators().iter().cloned());
    let gens = minimal_generators(domain.degree(), pool);

    if let Some((down, target)) = constraints.down {
        if !down.domain().same_as(codomain) || !target.domain().same_as(domain) {
            return Err(Error::invalid("constraint maps do not match the searched groups"));
        }
    }

    let mut candidates: Vec<Vec<Permutation>> = Vec::with_capacity(gens.len());
    let codomain_elements = if constraints.down.is_none() {
        Some(codomain.elements()?)
    } else {
        None
    };
    for m in &gens {
        let mut set: Vec<Permutation> = match constraints.down {
            Some((down, target)) => {
                let t = target.eval(m)?;
                match down.preimage(&t)? {
                    None => return Ok(Vec::new()),
                    Some(lift) => down.kernel().elements()?.iter().map(|k| k.compose(&lift)).collect(),
                }
            }
            None => codomain_elements.clone().expect("computed above"),
        };
        if let Some((from, expected)) = constraints.through {
            if let Some(i) = from.gen_images().iter().position(|x| x == m) {
                let want = expected.eval(&from.domain().generators()[i])?;
                set.retain(|c| *c == want);
            }
        }
        let order = m.order();
        set.retain(|c| order % c.order() == 0);
        if set.is_empty() {
            return Ok(Vec::new());
        }
        candidates.push(set);
    }

    let total = candidates
        .iter()
        .try_fold(1u64, |acc, s| acc.checked_mul(s.len() as u64))
        .unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::capacity("homomorphism search tuples", cap));
    }

    let sub = PermGroup::with_known_order(domain.degree(), gens.clone(), domain.order())?;
    let mut found = Vec::new();
    let mut idx = vec![0usize; candidates.len()];
    loop {
        let images: Vec<Permutation> = idx.iter().zip(&candidates).map(|(&i, s)| s[i].clone()).collect();
        match GroupHom::new(sub.clone(), codomain.clone(), images) {
            Ok(f) => {
                if satisfies_through(&f, constraints)? {
                    found.push(f.rebase(domain)?);
                }
            }
            Err(Error::NotAHomomorphism { .. }) => {}
            Err(e) => return Err(e),
        }
        // mixed-radix increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(found);
            }
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn satisfies_through(f: &GroupHom, constraints: HomConstraints<'_>) -> Result<bool> {
    if let Some((from, expected)) = constraints.through {
        for x in from.domain().generators() {
            if f.eval(&from.eval(x)?)? != expected.eval(x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
