//! Free normal closures `Gamma -> Gamma^phi -> Q` of a homomorphism.
//!
//! When `phi` is onto, `Gamma^phi = Gamma / [Gamma, ker phi]` and `Q` acts
//! through lifts. Otherwise the closure is realized from a presentation on
//! `Q`-indexed copies `(x, q)` of the generators of `Gamma`, subject to the
//! relators of `Gamma` in every copy and the Peiffer relations
//! `(x,g)^-1 (y,h) (x,g) = (y, h g^-1 phi(x) g)`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::{perm_realization, todd_coxeter, Presentation, PresentedGroup, Word};
use crate::perm::{search_homs, Action, CopyIndex, GroupHom, HomConstraints, NormalMap, PermGroup, Permutation};

/// Coset bound used when the caller gives none.
pub const DEFAULT_MAX_COSETS: usize = 500_000;

#[derive(Clone, Debug, Default)]
pub struct ClosureOptions {
    pub max_cosets: Option<usize>,
    /// Use the presentation even when `phi` is onto.
    pub force_peiffer: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMethod {
    FastPath,
    Peiffer,
}

/// `phi = boundary . structural` with `boundary` a normal map.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub phi: GroupHom,
    pub closure_group: PermGroup,
    pub structural: GroupHom,
    pub boundary: NormalMap,
    pub method: ClosureMethod,
    /// Cosets in the final table (Peiffer path only).
    pub cosets: Option<usize>,
    pub coset_bound: Option<usize>,
}

/// Outcome of [`crossed_module_check`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClosureCheck {
    pub automorphic: bool,
    pub equivariance: bool,
    pub peiffer: bool,
    pub composition: bool,
    pub image_is_normal_closure: bool,
    pub kernel_central: bool,
    /// Whether `Q` is the normal closure of the image of `phi`.
    pub normally_generated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ClosureCheck {
    pub fn passed(&self) -> bool {
        self.automorphic
            && self.equivariance
            && self.peiffer
            && self.composition
            && self.image_is_normal_closure
            && self.kernel_central
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorEntry {
    pub generator: usize,
    pub q: String,
    pub element: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureSummary {
    pub method: ClosureMethod,
    pub domain_order: u64,
    pub codomain_order: u64,
    pub closure_order: u64,
    pub boundary_image_order: u64,
    pub boundary_kernel_order: u64,
    pub structural_kernel_order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_bound: Option<usize>,
    pub check: ClosureCheck,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generator_index: Vec<GeneratorEntry>,
}

impl ClosureResult {
    pub fn order(&self) -> u64 {
        self.closure_group.order()
    }

    /// The element `(x, q)`: the image of domain generator `x` acted on by `q`.
    pub fn copy_element(&self, x: usize, q: &Permutation) -> Result<Permutation> {
        let gx = self
            .phi
            .domain()
            .generators()
            .get(x)
            .ok_or_else(|| Error::invalid(format!("no domain generator {x}")))?;
        let c = self.structural.eval(gx)?;
        self.boundary.act(&c, q)
    }

    /// `(x, q) -> element` for every domain generator and every `q` in `Q`.
    pub fn generator_index(&self) -> Result<Vec<GeneratorEntry>> {
        let qs = self.phi.codomain().elements()?;
        let mut out = Vec::new();
        for x in 0..self.phi.domain().generators().len() {
            for q in &qs {
                out.push(GeneratorEntry {
                    generator: x + 1,
                    q: q.cycle_string(),
                    element: self.copy_element(x, q)?.cycle_string(),
                });
            }
        }
        Ok(out)
    }

    pub fn summary(&self, with_index: bool) -> Result<ClosureSummary> {
        Ok(ClosureSummary {
            method: self.method,
            domain_order: self.phi.domain().order(),
            codomain_order: self.phi.codomain().order(),
            closure_order: self.order(),
            boundary_image_order: self.boundary.map.image().order(),
            boundary_kernel_order: self.boundary.map.kernel().order(),
            structural_kernel_order: self.structural.kernel().order(),
            cosets: self.cosets,
            coset_bound: self.coset_bound,
            check: crossed_module_check(self)?,
            generator_index: if with_index { self.generator_index()? } else { Vec::new() },
        })
    }
}

/// Presentation of `Gamma^phi` on generators `(x, q)`, `x` a generator of
/// `Gamma` and `q` in `Q = codomain(phi)`; `(x, q)` has index
/// `x * |Q| + index(q)` in the order of `Q.elements()`.
pub fn peiffer_presentation(p: &Presentation, phi: &GroupHom) -> Result<(Presentation, Arc<CopyIndex>)> {
    let gamma = phi.domain();
    if p.generator_count() != gamma.generators().len() {
        return Err(Error::invalid(format!(
            "presentation has {} generators, the domain has {}",
            p.generator_count(),
            gamma.generators().len()
        )));
    }
    for r in p.relators() {
        if !r.evaluate(gamma.generators(), gamma.degree())?.is_identity() {
            return Err(Error::invalid(format!(
                "relator {} does not hold in the domain",
                r.render(p.labels())
            )));
        }
    }
    let qs = phi.codomain().elements()?;
    let nq = qs.len();
    let nx = p.generator_count();
    let index = Arc::new(CopyIndex::new(qs.clone(), nx));
    let gen = |x: usize, q: &Permutation| -> i32 { index.position(x, q).expect("element of Q") as i32 + 1 };

    let mut labels = Vec::with_capacity(nx * nq);
    for x in 0..nx {
        for qi in 0..nq {
            labels.push(format!("{}_{}", p.labels()[x], qi));
        }
    }
    let mut relators = Vec::with_capacity(p.relators().len() * nq + nx * nx * nq * nq);
    for qi in 0..nq {
        let copy: Vec<Word> = (0..nx).map(|x| Word::gen(x * nq + qi)).collect();
        for r in p.relators() {
            relators.push(r.substitute(&copy));
        }
    }
    for x in 0..nx {
        let phi_x = &phi.gen_images()[x];
        for g in &qs {
            // h g^-1 phi(x) g, for every h
            let twist = phi_x.conjugate_by(g);
            for y in 0..nx {
                for h in &qs {
                    relators.push(Word::from_letters(vec![
                        -gen(x, g),
                        gen(y, h),
                        gen(x, g),
                        -gen(y, &h.compose(&twist)),
                    ]));
                }
            }
        }
    }
    Ok((Presentation::with_labels(labels, relators)?, index))
}

/// The free normal closure of `phi`, whose domain must be `gamma.group()`.
pub fn free_normal_closure(gamma: &PresentedGroup, phi: &GroupHom, opts: &ClosureOptions) -> Result<ClosureResult> {
    let phi = if phi.domain().generators() == gamma.group().generators() {
        phi.clone()
    } else {
        phi.rebase(gamma.group())?
    };
    let result = if phi.is_surjective() && !opts.force_peiffer {
        fast_path(&phi)?
    } else {
        peiffer_path(gamma, &phi, opts.max_cosets.unwrap_or(DEFAULT_MAX_COSETS))?
    };
    let check = crossed_module_check(&result)?;
    if !check.passed() {
        return Err(Error::inconsistent(format!(
            "free normal closure fails its invariants: {}",
            check.witness.unwrap_or_default()
        )));
    }
    Ok(result)
}

fn fast_path(phi: &GroupHom) -> Result<ClosureResult> {
    let gamma = phi.domain();
    let k = phi.kernel();
    let n = gamma.commutator_subgroup(gamma, k)?;
    let (closure, proj) = if n.is_trivial() {
        (gamma.clone(), GroupHom::identity(gamma))
    } else {
        gamma.quotient(&n)?
    };
    let boundary_map = GroupHom::new(closure.clone(), phi.codomain().clone(), phi.gen_images().to_vec())
        .map_err(|e| Error::inconsistent(format!("boundary on the quotient is not well defined: {e}")))?;
    let action = Action::Lifted {
        proj: proj.clone(),
        section: phi.clone(),
    };
    Ok(ClosureResult {
        phi: phi.clone(),
        closure_group: closure,
        structural: proj,
        boundary: NormalMap::new(boundary_map, action),
        method: ClosureMethod::FastPath,
        cosets: None,
        coset_bound: None,
    })
}

fn peiffer_path(gamma: &PresentedGroup, phi: &GroupHom, max_cosets: usize) -> Result<ClosureResult> {
    let (pres, index) = peiffer_presentation(gamma.presentation(), phi)?;
    let table = todd_coxeter(&pres, &[], max_cosets)?;
    if !table.is_complete() {
        return Err(Error::capacity("coset enumeration for the free normal closure", max_cosets as u64));
    }
    let (closure, gens) = perm_realization(&table, &pres)?;
    let q = phi.codomain();
    let id = q.identity();
    let structural_images = (0..gamma.group().generators().len())
        .map(|x| gens[index.position(x, &id).expect("identity in Q")].clone())
        .collect();
    let structural = GroupHom::new(gamma.group().clone(), closure.clone(), structural_images)
        .map_err(|e| Error::inconsistent(format!("structural map is not well defined: {e}")))?;
    let mut boundary_images = Vec::with_capacity(gens.len());
    for pos in 0..gens.len() {
        let (x, qi) = index.split(pos);
        let g = &index.q_elements()[qi];
        boundary_images.push(phi.gen_images()[x].conjugate_by(g));
    }
    let boundary_map = GroupHom::new(closure.clone(), q.clone(), boundary_images)
        .map_err(|e| Error::inconsistent(format!("boundary map is not well defined: {e}")))?;
    Ok(ClosureResult {
        phi: phi.clone(),
        closure_group: closure,
        structural,
        boundary: NormalMap::new(boundary_map, Action::Copies(index)),
        method: ClosureMethod::Peiffer,
        cosets: Some(table.len()),
        coset_bound: Some(max_cosets),
    })
}

/// Crossed-module axioms, `boundary . structural = phi`, image of the
/// boundary equal to the normal closure of the image of `phi`, and
/// centrality of the boundary kernel.
///
/// The kernel of a crossed module is always central (the Peiffer identity
/// with `m'` in the kernel reads `m = m'^-1 m m'`), so centrality is checked
/// whether or not `Q` is normally generated by the image.
pub fn crossed_module_check(c: &ClosureResult) -> Result<ClosureCheck> {
    let axioms = c.boundary.check_axioms()?;
    let mut witness = axioms.witness.clone();
    let q = c.phi.codomain();

    let composite = c.structural.then(&c.boundary.map)?;
    let composition = composite.agrees_with(&c.phi)?;
    if !composition {
        witness.get_or_insert_with(|| "boundary after structural differs from phi".into());
    }

    let normal_closure = q.normal_closure(c.phi.image())?;
    let image_is_normal_closure = c.boundary.map.image().same_as(&normal_closure);
    if !image_is_normal_closure {
        witness.get_or_insert_with(|| {
            format!(
                "boundary image has order {}, normal closure of the image has order {}",
                c.boundary.map.image().order(),
                normal_closure.order()
            )
        });
    }

    let kernel = c.boundary.map.kernel();
    let mut kernel_central = true;
    'outer: for k in kernel.generators() {
        for m in c.closure_group.generators() {
            if !k.commutes_with(m) {
                kernel_central = false;
                witness.get_or_insert_with(|| format!("kernel element {k} does not commute with {m}"));
                break 'outer;
            }
        }
    }

    Ok(ClosureCheck {
        automorphic: axioms.automorphic,
        equivariance: axioms.equivariance,
        peiffer: axioms.peiffer,
        composition,
        image_is_normal_closure,
        kernel_central,
        normally_generated: normal_closure.same_as(q),
        witness,
    })
}

/// Normal subgroups of `q` containing `h`, smallest first; at most `cap`.
pub fn normal_overgroups(q: &PermGroup, h: &PermGroup, cap: usize) -> Result<Vec<PermGroup>> {
    let start = q.normal_closure(h)?;
    let elements = q.elements()?;
    let mut found = vec![start];
    let mut keys: HashSet<Vec<Permutation>> = HashSet::new();
    keys.insert(found[0].element_key()?);
    let mut head = 0;
    while head < found.len() {
        let n = found[head].clone();
        head += 1;
        for x in &elements {
            if n.contains(x) {
                continue;
            }
            let mut gens = n.generators().to_vec();
            gens.push(x.clone());
            let joined = q.normal_closure(&q.subgroup_generated(&gens)?)?;
            if keys.insert(joined.element_key()?) {
                if found.len() >= cap {
                    return Err(Error::capacity("normal overgroup enumeration", cap as u64));
                }
                found.push(joined);
            }
        }
    }
    found.sort_by_key(|g| g.order());
    Ok(found)
}

/// One universality instance: a normal subgroup `N` of `Q` and how many maps
/// `Gamma^phi -> N` commute with the factorization through `N`.
#[derive(Clone, Debug, Serialize)]
pub struct UniversalityCase {
    pub normal_subgroup_order: u64,
    pub commuting_maps: usize,
}

/// For each normal `N` of `Q` containing the image of `phi`, counts the maps
/// `f: Gamma^phi -> N` with `incl . f = boundary` and `f . structural = phi`.
pub fn universality_proxy(c: &ClosureResult, cap: u64) -> Result<Vec<UniversalityCase>> {
    if c.order() > cap {
        return Err(Error::capacity("universality search closure order", cap));
    }
    let q = c.phi.codomain();
    let mut out = Vec::new();
    for n in normal_overgroups(q, c.phi.image(), 500)? {
        let incl = GroupHom::inclusion(&n, q)?;
        let phi_n = c.phi.corestrict(&n)?;
        let maps = search_homs(
            &c.closure_group,
            &n,
            HomConstraints {
                down: Some((&incl, &c.boundary.map)),
                through: Some((&c.structural, &phi_n)),
            },
            100_000,
        )?;
        out.push(UniversalityCase {
            normal_subgroup_order: n.order(),
            commuting_maps: maps.len(),
        });
    }
    Ok(out)
}
