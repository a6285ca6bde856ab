use serde::Serialize;

use crate::closure::{free_normal_closure, ClosureCheck, ClosureMethod, ClosureOptions, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::fp::PresentedGroup;
use crate::perm::{GroupHom, NormalMap, PermGroup};
use crate::tower::bound::{bound_g, within_bound};
use crate::tower::series::{kernel_commutator_series, subnormal_closure_series, SeriesRecord, SeriesSummary};
use crate::tower::subnormal::{SubnormalChain, SubnormalChainReport};

pub const DEFAULT_MAX_STAGES: usize = 64;

/// The reduction of `phi: Gamma -> G` to `psi: Gamma/K -> c`, where `c` is
/// the subnormal closure of the image and `K` the terminal member of
/// `K_1 = ker phi`, `K_{i+1} = [Gamma, K_i]`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub closures: SeriesRecord,
    pub commutators: SeriesRecord,
    pub quotient: PresentedGroup,
    pub projection: GroupHom,
    pub psi: GroupHom,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionSummary {
    pub c_order: u64,
    pub k_order: u64,
    pub quotient_order: u64,
    pub closures: SeriesSummary,
    pub commutators: SeriesSummary,
}

impl Reduction {
    pub fn c(&self) -> &PermGroup {
        self.closures.terminal()
    }

    pub fn k(&self) -> &PermGroup {
        self.commutators.terminal()
    }

    /// `|Gamma/K| * g(|c|)`.
    pub fn order_bound(&self) -> f64 {
        self.quotient.group().order() as f64 * bound_g(self.c().order())
    }

    /// Four times [`Reduction::order_bound`], rounded up.
    pub fn default_coset_bound(&self) -> usize {
        let b = (4.0 * self.order_bound()).ceil();
        if b >= usize::MAX as f64 {
            usize::MAX
        } else {
            b as usize
        }
    }

    pub fn summary(&self) -> ReductionSummary {
        ReductionSummary {
            c_order: self.c().order(),
            k_order: self.k().order(),
            quotient_order: self.quotient.group().order(),
            closures: self.closures.summary(),
            commutators: self.commutators.summary(),
        }
    }
}

fn aligned(gamma: &PresentedGroup, phi: &GroupHom) -> Result<GroupHom> {
    if phi.domain().generators() == gamma.group().generators() {
        Ok(phi.clone())
    } else {
        phi.rebase(gamma.group())
    }
}

pub fn reduce(gamma: &PresentedGroup, phi: &GroupHom) -> Result<Reduction> {
    let phi = aligned(gamma, phi)?;
    let g = phi.codomain();
    let closures = subnormal_closure_series(g, phi.image())?;
    let commutators = kernel_commutator_series(gamma.group(), phi.kernel())?;
    let c = closures.terminal().clone();
    let k = commutators.terminal().clone();
    let (quotient, projection) = if k.is_trivial() {
        (gamma.clone(), GroupHom::identity(gamma.group()))
    } else {
        let (q, proj) = gamma.group().quotient(&k)?;
        let pres = gamma.quotient_presentation(&k)?;
        (PresentedGroup::new(q, pres)?, proj)
    };
    let psi = GroupHom::new(quotient.group().clone(), c, phi.gen_images().to_vec())
        .map_err(|e| Error::inconsistent(format!("reduced map is not well defined: {e}")))?;
    Ok(Reduction {
        closures,
        commutators,
        quotient,
        projection,
        psi,
    })
}

#[derive(Clone, Debug)]
pub struct TowerOptions {
    pub reduce: bool,
    pub max_stages: usize,
    pub coset_bound: Option<usize>,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            reduce: true,
            max_stages: DEFAULT_MAX_STAGES,
            coset_bound: None,
        }
    }
}

/// Stage `i` of the tower: `Gamma_i`, `phi_i: Gamma -> Gamma_i`, and the
/// connecting normal map `Gamma_i -> Gamma_{i-1}` for `i >= 2`.
#[derive(Clone, Debug)]
pub struct TowerRecord {
    pub stage: usize,
    pub group: PermGroup,
    pub structural: GroupHom,
    pub connecting: Option<NormalMap>,
    pub method: Option<ClosureMethod>,
    pub cosets: Option<usize>,
    pub check: Option<ClosureCheck>,
}

#[derive(Clone, Debug)]
pub struct Tower {
    /// The group the tower is built over (`Gamma`, or `Gamma/K` if reduced).
    pub source: PresentedGroup,
    pub map: GroupHom,
    pub reduction: Option<Reduction>,
    pub stages: Vec<TowerRecord>,
    pub stabilized_at: Option<usize>,
    pub coset_bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub stage: usize,
    pub order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connecting_image_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connecting_kernel_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_central: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<ClosureMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosets: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerSummary {
    pub reduced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
    pub coset_bound: usize,
    pub stages: Vec<StageSummary>,
    pub stabilized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilized_at: Option<usize>,
    pub terminal_order: u64,
}

impl Tower {
    pub fn last(&self) -> &TowerRecord {
        self.stages.last().expect("tower has a first stage")
    }

    pub fn orders(&self) -> Vec<u64> {
        self.stages.iter().map(|s| s.group.order()).collect()
    }

    pub fn summary(&self) -> TowerSummary {
        TowerSummary {
            reduced: self.reduction.is_some(),
            reduction: self.reduction.as_ref().map(|r| r.summary()),
            coset_bound: self.coset_bound,
            stages: self
                .stages
                .iter()
                .map(|s| StageSummary {
                    stage: s.stage,
                    order: s.group.order(),
                    connecting_image_order: s.connecting.as_ref().map(|c| c.map.image().order()),
                    connecting_kernel_order: s.connecting.as_ref().map(|c| c.map.kernel().order()),
                    kernel_central: s.check.as_ref().map(|c| c.kernel_central),
                    method: s.method,
                    cosets: s.cosets,
                })
                .collect(),
            stabilized: self.stabilized_at.is_some(),
            stabilized_at: self.stabilized_at,
            terminal_order: self.last().group.order(),
        }
    }
}

/// `Gamma_1 = G`, `Gamma_{i+1} = Gamma^{phi_i}`, stopping at the first stage
/// whose connecting map is bijective or after `max_stages` stages.
pub fn build_tower(gamma: &PresentedGroup, phi: &GroupHom, opts: &TowerOptions) -> Result<Tower> {
    if opts.max_stages == 0 {
        return Err(Error::invalid("max_stages must be at least 1"));
    }
    let phi = aligned(gamma, phi)?;
    let (source, map, reduction) = if opts.reduce {
        let r = reduce(gamma, &phi)?;
        (r.quotient.clone(), r.psi.clone(), Some(r))
    } else {
        (gamma.clone(), phi.clone(), None)
    };
    let coset_bound = opts.coset_bound.unwrap_or_else(|| match &reduction {
        Some(r) => r.default_coset_bound(),
        None => DEFAULT_MAX_COSETS,
    });
    let mut stages = vec![TowerRecord {
        stage: 1,
        group: map.codomain().clone(),
        structural: map.clone(),
        connecting: None,
        method: None,
        cosets: None,
        check: None,
    }];
    let mut stabilized_at = None;
    while stages.len() < opts.max_stages {
        let stage = stages.len() + 1;
        let prev = stages.last().unwrap();
        let closure = free_normal_closure(
            &source,
            &prev.structural,
            &ClosureOptions {
                max_cosets: Some(coset_bound),
                force_peiffer: false,
            },
        )
        .map_err(|e| e.context(&format!("tower stage {stage}")))?;
        let check = crate::closure::crossed_module_check(&closure)?;
        let bijective = closure.boundary.map.is_bijective();
        stages.push(TowerRecord {
            stage,
            group: closure.closure_group.clone(),
            structural: closure.structural.clone(),
            connecting: Some(closure.boundary.clone()),
            method: Some(closure.method),
            cosets: closure.cosets,
            check: Some(check),
        });
        if bijective {
            stabilized_at = Some(stage);
            break;
        }
    }
    Ok(Tower {
        source,
        map,
        reduction,
        stages,
        stabilized_at,
        coset_bound,
    })
}

#[derive(Clone, Debug)]
pub struct LimitOptions {
    pub max_stages: usize,
    pub coset_bound: Option<usize>,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            max_stages: DEFAULT_MAX_STAGES,
            coset_bound: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LimitChecks {
    pub factorization: bool,
    pub connecting_kernels_central: bool,
    pub kernel_hypercentral: bool,
    pub within_bound: bool,
    pub subnormal_chain: SubnormalChainReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LimitChecks {
    pub fn passed(&self) -> bool {
        self.factorization
            && self.connecting_kernels_central
            && self.kernel_hypercentral
            && self.within_bound
            && self.subnormal_chain.valid()
    }
}

/// The stable member `Gamma_inf` of the reduced tower with
/// `phi = from_limit . into_limit`.
#[derive(Clone, Debug)]
pub struct LimitResult {
    pub phi: GroupHom,
    pub tower: Tower,
    pub limit_group: PermGroup,
    pub into_limit: GroupHom,
    pub from_limit: GroupHom,
    /// `Gamma_inf -> c`.
    pub onto_closure: GroupHom,
    pub stabilized_at: usize,
    pub bound: f64,
    pub chain: SubnormalChain,
    pub checks: LimitChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSummary {
    pub domain_order: u64,
    pub codomain_order: u64,
    pub limit_order: u64,
    pub stabilized_at: usize,
    pub c_order: u64,
    pub k_order: u64,
    pub quotient_order: u64,
    pub g_value: f64,
    pub bound: f64,
    pub slack: f64,
    pub into_limit_kernel_order: u64,
    pub into_limit_bijective: bool,
    pub from_limit_image_order: u64,
    pub from_limit_kernel_order: u64,
    pub stage_orders: Vec<u64>,
    pub checks: LimitChecks,
}

impl LimitResult {
    pub fn reduction(&self) -> &Reduction {
        self.tower.reduction.as_ref().expect("limits use the reduced tower")
    }

    pub fn order(&self) -> u64 {
        self.limit_group.order()
    }

    pub fn summary(&self) -> LimitSummary {
        let r = self.reduction();
        LimitSummary {
            domain_order: self.phi.domain().order(),
            codomain_order: self.phi.codomain().order(),
            limit_order: self.order(),
            stabilized_at: self.stabilized_at,
            c_order: r.c().order(),
            k_order: r.k().order(),
            quotient_order: r.quotient.group().order(),
            g_value: bound_g(r.c().order()),
            bound: self.bound,
            slack: self.bound - self.order() as f64,
            into_limit_kernel_order: self.into_limit.kernel().order(),
            into_limit_bijective: self.into_limit.is_bijective(),
            from_limit_image_order: self.from_limit.image().order(),
            from_limit_kernel_order: self.from_limit.kernel().order(),
            stage_orders: self.tower.orders(),
            checks: self.checks.clone(),
        }
    }
}

/// Builds the reduced tower to stabilization and verifies the limit:
/// factorization of `phi`, central connecting kernels, hypercentral kernel
/// of `Gamma_inf -> c`, the order bound, and the subnormal certificate.
pub fn inverse_limit(gamma: &PresentedGroup, phi: &GroupHom, opts: &LimitOptions) -> Result<LimitResult> {
    let phi = aligned(gamma, phi)?;
    let tower = build_tower(
        gamma,
        &phi,
        &TowerOptions {
            reduce: true,
            max_stages: opts.max_stages,
            coset_bound: opts.coset_bound,
        },
    )?;
    let stabilized_at = tower.stabilized_at.ok_or_else(|| {
        Error::inconsistent(format!("tower not stabilized within {} stages", opts.max_stages))
    })?;
    let r = tower.reduction.clone().expect("reduced tower");
    let last = tower.last().clone();
    let limit_group = last.group.clone();
    let into_limit = r.projection.then(&last.structural)?;

    let links: Vec<NormalMap> = tower.stages.iter().rev().filter_map(|s| s.connecting.clone()).collect();
    let mut onto_closure = GroupHom::identity(&limit_group);
    for l in &links {
        onto_closure = onto_closure.then(&l.map)?;
    }
    let g = phi.codomain();
    let from_limit = onto_closure.then(&GroupHom::inclusion(r.c(), g)?)?;

    let mut witness = None;
    let factorization = into_limit.then(&from_limit)?.agrees_with(&phi)?;
    if !factorization {
        witness.get_or_insert_with(|| "from_limit after into_limit differs from phi".to_string());
    }
    let connecting_kernels_central = tower
        .stages
        .iter()
        .filter_map(|s| s.check.as_ref())
        .all(|c| c.kernel_central);
    if !connecting_kernels_central {
        witness.get_or_insert_with(|| "a connecting kernel is not central".to_string());
    }
    let hyper = limit_group.hypercenter()?;
    let kernel_hypercentral = onto_closure.kernel().is_subgroup_of(&hyper);
    if !kernel_hypercentral {
        witness.get_or_insert_with(|| {
            format!(
                "kernel of order {} is not inside the hypercenter of order {}",
                onto_closure.kernel().order(),
                hyper.order()
            )
        });
    }
    let bound = r.order_bound();
    let within = within_bound(limit_group.order() as f64, bound);
    if !within {
        witness.get_or_insert_with(|| format!("|limit| = {} exceeds {bound}", limit_group.order()));
    }

    let mut chain_links = links.clone();
    let closure_terms: Vec<PermGroup> = r.closures.terms[..=r.closures.terminal_index].to_vec();
    chain_links.extend(SubnormalChain::of_inclusions(&closure_terms)?.links);
    let chain = SubnormalChain::new(chain_links);
    let chain_report = chain.report()?;
    if !chain_report.valid() {
        witness.get_or_insert_with(|| chain_report.witness.clone().unwrap_or_default());
    }

    let checks = LimitChecks {
        factorization,
        connecting_kernels_central,
        kernel_hypercentral,
        within_bound: within,
        subnormal_chain: chain_report,
        witness,
    };
    if !checks.passed() {
        return Err(Error::inconsistent(format!(
            "limit fails its invariants: {}",
            checks.witness.clone().unwrap_or_default()
        )));
    }
    Ok(LimitResult {
        phi,
        tower,
        limit_group,
        into_limit,
        from_limit,
        onto_closure,
        stabilized_at,
        bound,
        chain,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;
    use crate::Permutation;

    fn hom(domain: &str, codomain: &str, images: &[&str]) -> (PresentedGroup, GroupHom) {
        let d = preset(domain).unwrap();
        let c = preset(codomain).unwrap();
        let imgs = images
            .iter()
            .map(|s| Permutation::parse_cycles(s, c.group().degree()).unwrap())
            .collect();
        let h = GroupHom::new(d.group().clone(), c.group().clone(), imgs).unwrap();
        (d, h)
    }

    #[test]
    fn reduce_examples() {
        let (d, phi) = hom("C2", "C2", &["()"]);
        let r = reduce(&d, &phi).unwrap();
        assert_eq!(r.c().order(), 1);
        assert_eq!(r.k().order(), 1);
        assert_eq!(r.psi.domain().order(), 2);

        let (d, phi) = hom("S3", "S4", &["(1 2 3)", "(1 2)"]);
        let r = reduce(&d, &phi).unwrap();
        assert_eq!(r.c().order(), 24);
        assert_eq!(r.k().order(), 1);
        assert_eq!(r.psi.domain().order(), 6);

        let (d, phi) = hom("C3", "S3", &["(1 2 3)"]);
        let r = reduce(&d, &phi).unwrap();
        assert_eq!(r.c().order(), 3);
        assert!(r.psi.is_bijective());
    }

    #[test]
    fn identity_stabilizes_at_stage_two() {
        let (d, phi) = hom("S3", "S3", &["(1 2 3)", "(1 2)"]);
        let t = build_tower(&d, &phi, &TowerOptions::default()).unwrap();
        assert_eq!(t.stabilized_at, Some(2));
        assert_eq!(t.orders(), vec![6, 6]);
    }

    #[test]
    fn unreduced_trivial_map_grows() {
        // Each stage is elementary abelian of order 2^(|previous| / 2).
        let (d, phi) = hom("C2", "C3", &["()"]);
        let opts = TowerOptions {
            reduce: false,
            max_stages: 4,
            coset_bound: None,
        };
        let t = build_tower(&d, &phi, &opts).unwrap();
        assert_eq!(t.orders(), vec![3, 8, 16, 256]);
        assert_eq!(t.stabilized_at, None);

        // 4 is a fixed point of that rule, so over C2 the orders stall at 4
        // without the connecting maps becoming bijective.
        let (d, phi) = hom("C2", "C2", &["()"]);
        let t = build_tower(&d, &phi, &TowerOptions { max_stages: 5, ..opts }).unwrap();
        assert_eq!(t.orders(), vec![2, 4, 4, 4, 4]);
        assert_eq!(t.stabilized_at, None);

        let t = build_tower(&d, &phi, &TowerOptions::default()).unwrap();
        assert!(t.stabilized_at.is_some());
        let lim = inverse_limit(&d, &phi, &LimitOptions::default()).unwrap();
        assert_eq!(lim.order(), 2);
        assert!(lim.into_limit.is_bijective());
        assert_eq!(lim.bound, 2.0);
    }

    #[test]
    fn limits_of_small_maps() {
        let (d, phi) = hom("C4", "C2", &["(1 2)"]);
        let lim = inverse_limit(&d, &phi, &LimitOptions::default()).unwrap();
        assert_eq!(lim.order(), 4);
        assert!(lim.into_limit.is_bijective());

        let (d, phi) = hom("C3", "S3", &["(1 2 3)"]);
        let lim = inverse_limit(&d, &phi, &LimitOptions::default()).unwrap();
        assert_eq!(lim.order(), 3);
        assert!(lim.into_limit.is_bijective());

        let (d, phi) = hom("S3", "S4", &["(1 2 3)", "(1 2)"]);
        let lim = inverse_limit(&d, &phi, &LimitOptions::default()).unwrap();
        assert!((lim.order() as f64) <= 6.0 * bound_g(24));
        assert!(lim.checks.passed());
    }

    #[test]
    fn max_stages_zero_rejected() {
        let (d, phi) = hom("C2", "C2", &["()"]);
        let opts = TowerOptions {
            reduce: true,
            max_stages: 0,
            coset_bound: None,
        };
        assert!(build_tower(&d, &phi, &opts).is_err());
    }
}
