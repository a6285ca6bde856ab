use std::collections::HashSet;

use serde_json::{json, Value};

use super::{CheckReport, Instance, Theorem};
use crate::closure::{free_normal_closure, ClosureOptions};
use crate::error::{Error, Result};
use crate::perm::{search_homs, GroupHom, HomConstraints, PermGroup, Permutation};
use crate::tower::{bound_g, build_tower, inverse_limit, reduce, within_bound, LimitOptions, LimitResult, TowerOptions};

/// Caps shared by the checkers.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Most subgroups visited while enumerating subnormal overgroups.
    pub subgroup_cap: usize,
    /// Largest limit order searched exhaustively for universality.
    pub universality_cap: u64,
    /// Most image tuples tried by one homomorphism search.
    pub search_cap: u64,
    /// Coset bound for closures computed outside the reduced tower.
    pub max_cosets: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            subgroup_cap: 500,
            universality_cap: 24,
            search_cap: 200_000,
            max_cosets: 20_000,
        }
    }
}

/// The limit, or the invariant violation reported while computing it.
fn limit_or_witness(inst: &Instance) -> Result<std::result::Result<&LimitResult, String>> {
    match inst.limit() {
        Ok(l) => Ok(Ok(l)),
        Err(e @ Error::Inconsistent(_)) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

macro_rules! limit {
    ($inst:expr, $report:expr) => {
        match limit_or_witness($inst)? {
            Ok(l) => l,
            Err(w) => return Ok($report.fail(w)),
        }
    };
}

fn class_of_nilpotent_residual(g: &PermGroup) -> usize {
    g.lower_central_series().len() - 1
}

pub fn check_nilpotent_fixed_point(inst: &Instance) -> Result<CheckReport> {
    let gamma = inst.gamma.group();
    let g = inst.phi.codomain();
    if !gamma.is_nilpotent() || !g.is_nilpotent() {
        return Err(Error::precondition(format!(
            "domain and codomain must be nilpotent (domain: {}, codomain: {})",
            gamma.is_nilpotent(),
            g.is_nilpotent()
        )));
    }
    let mut r = CheckReport::new(Theorem::NilpotentFixedPoint, &inst.name);
    let lim = limit!(inst, r);
    let kernel = lim.into_limit.kernel().order();
    r.set("domain_order", gamma.order());
    r.set("limit_order", lim.order());
    r.set("kernel_order", kernel);
    Ok(r.finish(lim.into_limit.is_bijective(), || {
        format!(
            "phi_inf has kernel of order {kernel} and image of order {} in a limit of order {}",
            lim.into_limit.image().order(),
            lim.order()
        )
    }))
}

/// Orders of `Gamma/gamma_k` and `Gamma_inf/gamma_k` agree for every `k`,
/// and `Gamma -> Gamma_inf/gamma_k(Gamma_inf)` has kernel exactly
/// `gamma_k(Gamma)`.
pub fn check_lcs_quotients(inst: &Instance) -> Result<CheckReport> {
    let mut r = CheckReport::new(Theorem::LcsQuotients, &inst.name);
    let lim = limit!(inst, r);
    let gamma = inst.gamma.group();
    let h = &lim.limit_group;
    let lg = gamma.lower_central_series();
    let lh = h.lower_central_series();
    let levels = lg.len().max(lh.len());
    let mut dq = Vec::new();
    let mut hq = Vec::new();
    let mut witness = None;
    for k in 1..=levels {
        let gk = &lg[(k - 1).min(lg.len() - 1)];
        let hk = &lh[(k - 1).min(lh.len() - 1)];
        let a = gamma.order() / gk.order();
        let b = h.order() / hk.order();
        dq.push(a);
        hq.push(b);
        let kernel = if hk.same_as(h) {
            gamma.clone()
        } else {
            let (_, proj) = h.quotient(hk)?;
            lim.into_limit.then(&proj)?.kernel().clone()
        };
        if a != b {
            witness.get_or_insert_with(|| format!("k = {k}: quotient orders {a} and {b}"));
        } else if !kernel.same_as(gk) {
            witness.get_or_insert_with(|| {
                format!(
                    "k = {k}: induced map has kernel of order {} over gamma_k of order {}",
                    kernel.order() / gk.order(),
                    gk.order()
                )
            });
        }
    }
    r.set("domain_quotients", dq);
    r.set("limit_quotients", hq);
    Ok(match witness {
        None => r,
        Some(w) => r.fail(w),
    })
}

pub fn check_finiteness_and_bound(inst: &Instance) -> Result<CheckReport> {
    let mut r = CheckReport::new(Theorem::FinitenessBound, &inst.name);
    let lim = limit!(inst, r);
    let red = lim.reduction();
    let order = lim.order();
    r.set("limit_order", order);
    r.set("stabilized_at", lim.stabilized_at);
    r.set("quotient_order", red.quotient.group().order());
    r.set("c_order", red.c().order());
    r.set("g", bound_g(red.c().order()));
    r.set("bound", lim.bound);
    r.set("slack", lim.bound - order as f64);
    Ok(r.finish(within_bound(order as f64, lim.bound), || {
        format!("|limit| = {order} exceeds the bound {}", lim.bound)
    }))
}

/// Subnormal subgroups of `g` containing `h`: `h` itself, every subgroup
/// generated by `h` and at most three further elements that is subnormal,
/// and `g`. Sorted by order.
pub fn subnormal_overgroups(g: &PermGroup, h: &PermGroup, cap: usize) -> Result<Vec<PermGroup>> {
    let elements = g.elements()?;
    let start = g.subgroup_generated(h.generators())?;
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    seen.insert(start.element_key()?);
    let mut found = vec![start.clone()];
    let mut frontier = vec![start];
    for _ in 0..3 {
        let mut next = Vec::new();
        for s in &frontier {
            for x in &elements {
                if s.contains(x) {
                    continue;
                }
                let mut gens = s.generators().to_vec();
                gens.push(x.clone());
                let t = g.subgroup_generated(&gens)?;
                if seen.insert(t.element_key()?) {
                    if found.len() >= cap {
                        return Err(Error::capacity("subgroup enumeration", cap as u64));
                    }
                    found.push(t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    if seen.insert(g.element_key()?) {
        found.push(g.clone());
    }
    let mut out = Vec::new();
    for s in found {
        if g.is_subnormal(&s)? {
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.order());
    Ok(out)
}

/// For each subnormal `S` containing the image, the limit of the
/// corestriction to `S` has the same order and there is a bijective map to
/// the limit of `phi` commuting with both factorizations.
pub fn check_subnormal_invariance(inst: &Instance, opts: &VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new(Theorem::SubnormalInvariance, &inst.name);
    let lim = limit!(inst, r);
    let g = inst.phi.codomain();
    let subs = subnormal_overgroups(g, inst.phi.image(), opts.subgroup_cap)?;
    let mut cases: Vec<Value> = Vec::new();
    let mut witness = None;
    for s in &subs {
        let psi = inst.phi.corestrict(s)?;
        let ls = match inverse_limit(&inst.gamma, &psi, &LimitOptions::default()) {
            Ok(l) => l,
            Err(e @ Error::Inconsistent(_)) => {
                witness.get_or_insert_with(|| format!("S of order {}: {e}", s.order()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let target = ls.from_limit.then(&GroupHom::inclusion(s, g)?)?;
        let maps = search_homs(
            &ls.limit_group,
            &lim.limit_group,
            HomConstraints {
                down: Some((&lim.from_limit, &target)),
                through: Some((&ls.into_limit, &lim.into_limit)),
            },
            opts.search_cap,
        )?;
        let bijective = maps.iter().any(|m| m.is_bijective());
        if ls.order() != lim.order() || !bijective {
            witness.get_or_insert_with(|| {
                format!(
                    "S of order {}: limit of order {} against {}, {} commuting maps, none bijective: {}",
                    s.order(),
                    ls.order(),
                    lim.order(),
                    maps.len(),
                    !bijective
                )
            });
        }
        cases.push(json!({
            "s_order": s.order(),
            "limit_order": ls.order(),
            "comparison_maps": maps.len(),
            "bijective": bijective,
        }));
    }
    r.set("limit_order", lim.order());
    r.set("overgroups", cases);
    Ok(match witness {
        None => r,
        Some(w) => r.fail(w),
    })
}

/// For each subnormal `S` containing the image, exactly one map
/// `Gamma_inf -> S` commutes with `phi_inf` and with the map to `G`.
pub fn check_universality(inst: &Instance, opts: &VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new(Theorem::Universality, &inst.name);
    let lim = limit!(inst, r);
    if lim.order() > opts.universality_cap {
        return Err(Error::capacity("universality search: limit order", opts.universality_cap));
    }
    let g = inst.phi.codomain();
    let subs = subnormal_overgroups(g, inst.phi.image(), opts.subgroup_cap)?;
    let mut cases: Vec<Value> = Vec::new();
    let mut witness = None;
    for s in &subs {
        let incl = GroupHom::inclusion(s, g)?;
        let psi = inst.phi.corestrict(s)?;
        let maps = search_homs(
            &lim.limit_group,
            s,
            HomConstraints {
                down: Some((&incl, &lim.from_limit)),
                through: Some((&lim.into_limit, &psi)),
            },
            opts.search_cap,
        )?;
        if maps.len() != 1 {
            witness.get_or_insert_with(|| format!("S of order {}: {} commuting maps", s.order(), maps.len()));
        }
        cases.push(json!({ "s_order": s.order(), "commuting_maps": maps.len() }));
    }
    r.set("limit_order", lim.order());
    r.set("overgroups", cases);
    Ok(match witness {
        None => r,
        Some(w) => r.fail(w),
    })
}

/// The closure of `phi` and the closure of the induced `Gamma/K -> G` are
/// isomorphic through the map sending each copy generator `(x, q)` to
/// `(xK, q)`.
pub fn check_kernel_reduction(inst: &Instance, opts: &VerifyOptions) -> Result<CheckReport> {
    let mut r = CheckReport::new(Theorem::KernelReduction, &inst.name);
    let red = reduce(&inst.gamma, &inst.phi)?;
    let g = inst.phi.codomain();
    let rho = GroupHom::new(red.quotient.group().clone(), g.clone(), inst.phi.gen_images().to_vec())
        .map_err(|e| Error::inconsistent(format!("induced map on the quotient: {e}")))?;
    let copts = ClosureOptions {
        max_cosets: Some(opts.max_cosets),
        force_peiffer: true,
    };
    let closure = |gamma, phi| match free_normal_closure(gamma, phi, &copts) {
        Err(e @ Error::Inconsistent(_)) => Ok(Err(e.to_string())),
        other => other.map(Ok),
    };
    let a = match closure(&inst.gamma, &inst.phi)? {
        Ok(a) => a,
        Err(w) => return Ok(r.fail(w)),
    };
    let b = match closure(&red.quotient, &rho)? {
        Ok(b) => b,
        Err(w) => return Ok(r.fail(w)),
    };
    r.set("k_order", red.k().order());
    r.set("closure_order", a.order());
    r.set("reduced_closure_order", b.order());
    let sigma = match GroupHom::new(
        a.closure_group.clone(),
        b.closure_group.clone(),
        b.closure_group.generators().to_vec(),
    ) {
        Ok(s) => s,
        Err(e @ Error::NotAHomomorphism { .. }) => return Ok(r.fail(format!("comparison map: {e}"))),
        Err(e) => return Err(e),
    };
    let over_g = sigma.then(&b.boundary.map)?.agrees_with(&a.boundary.map)?;
    let under_gamma = a.structural.then(&sigma)?.agrees_with(&red.projection.then(&b.structural)?)?;
    let ok = a.order() == b.order() && sigma.is_bijective() && over_g && under_gamma;
    Ok(r.finish(ok, || {
        format!(
            "orders {} and {}, comparison kernel of order {}, commutes over G: {over_g}, under Gamma: {under_gamma}",
            a.order(),
            b.order(),
            sigma.kernel().order()
        )
    }))
}

/// Two branches, each run when its hypotheses hold:
///
/// * perfect domain normally generating `G`: `Gamma_2` is perfect, its
///   kernel over `G` is central, and the tower is stable from `Gamma_2`;
/// * perfect `G` normally generated by the image: `H = Gamma_inf` is the
///   central product of its perfect core `L` and its hypercenter `Z`,
///   `class(Z) <= c + 1` with `c` the class of `Gamma/gamma_inf(Gamma)`, and
///   when `ker phi` is nilpotent of class `d`, `class(ker phi_inf) >= d - c - 1`.
pub fn check_perfect_case(inst: &Instance, opts: &VerifyOptions) -> Result<CheckReport> {
    let gamma = inst.gamma.group();
    let g = inst.phi.codomain();
    let normally_generated = g.normal_closure(inst.phi.image())?.order() == g.order();
    let perfect_domain = gamma.is_perfect() && normally_generated;
    let perfect_codomain = g.is_perfect() && normally_generated;
    if !perfect_domain && !perfect_codomain {
        return Err(Error::precondition(format!(
            "needs the image to normally generate G (it does: {normally_generated}) and a perfect domain ({}) or codomain ({})",
            gamma.is_perfect(),
            g.is_perfect()
        )));
    }
    let mut r = CheckReport::new(Theorem::PerfectCase, &inst.name);
    let mut witness: Option<String> = None;
    let mut branches = Vec::new();

    if perfect_domain {
        branches.push("perfect_domain");
        let tower = build_tower(
            &inst.gamma,
            &inst.phi,
            &TowerOptions {
                reduce: false,
                max_stages: 3,
                coset_bound: Some(opts.max_cosets),
            },
        );
        match tower {
            Ok(t) => {
                let s2 = &t.stages[1];
                let connecting = s2.connecting.as_ref().expect("stage 2 has a connecting map");
                let perfect = s2.group.is_perfect();
                let center = s2.group.center()?;
                let central = connecting.map.kernel().is_subgroup_of(&center);
                let stable = t.stabilized_at.is_some_and(|s| s <= 3);
                r.set("gamma2_order", s2.group.order());
                r.set("gamma2_kernel_order", connecting.map.kernel().order());
                r.set("stage_orders", t.orders());
                if !(perfect && central && stable) {
                    witness.get_or_insert_with(|| {
                        format!("Gamma_2 perfect: {perfect}, kernel central: {central}, stable from stage 2: {stable}")
                    });
                }
            }
            Err(e @ Error::Inconsistent(_)) => {
                witness.get_or_insert_with(|| e.to_string());
            }
            Err(e) => return Err(e),
        }
    }

    if perfect_codomain {
        branches.push("perfect_codomain");
        let lim = limit!(inst, r);
        let h = &lim.limit_group;
        let l = h.derived_series().pop().unwrap();
        let z = h.hypercenter()?;
        let mut gens = l.generators().to_vec();
        gens.extend(z.generators().iter().cloned());
        let product = h.subgroup_generated(&gens)?.order() == h.order();
        let commute = l
            .generators()
            .iter()
            .all(|a| z.generators().iter().all(|b| a.commutes_with(b)));
        let c = class_of_nilpotent_residual(gamma);
        let z_class = z
            .nilpotency_class()
            .ok_or_else(|| Error::inconsistent("hypercenter is not nilpotent"))?;
        r.set("limit_order", h.order());
        r.set("perfect_core_order", l.order());
        r.set("hypercenter_order", z.order());
        r.set("hypercenter_class", z_class);
        r.set("residual_class", c);
        if !(product && commute && z_class <= c + 1) {
            witness.get_or_insert_with(|| {
                format!(
                    "L Z = H: {product}, [L, Z] = 1: {commute}, class of Z {z_class} against c + 1 = {}",
                    c + 1
                )
            });
        }
        let k = inst.phi.kernel();
        if let Some(d) = k.nilpotency_class() {
            branches.push("kernel_class");
            let kinf = lim
                .into_limit
                .kernel()
                .nilpotency_class()
                .ok_or_else(|| Error::inconsistent("kernel of phi_inf is not nilpotent"))?;
            r.set("kernel_class", d);
            r.set("limit_kernel_class", kinf);
            if (kinf as i64) < d as i64 - c as i64 - 1 {
                witness.get_or_insert_with(|| {
                    format!("class of ker phi_inf is {kinf}, below d - c - 1 = {}", d as i64 - c as i64 - 1)
                });
            }
        }
    }
    r.set("branches", branches);
    Ok(match witness {
        None => r,
        Some(w) => r.fail(w),
    })
}

/// Runs one checker with the given caps.
pub fn run_check(theorem: Theorem, inst: &Instance, opts: &VerifyOptions) -> Result<CheckReport> {
    match theorem {
        Theorem::NilpotentFixedPoint => check_nilpotent_fixed_point(inst),
        Theorem::LcsQuotients => check_lcs_quotients(inst),
        Theorem::FinitenessBound => check_finiteness_and_bound(inst),
        Theorem::SubnormalInvariance => check_subnormal_invariance(inst, opts),
        Theorem::Universality => check_universality(inst, opts),
        Theorem::KernelReduction => check_kernel_reduction(inst, opts),
        Theorem::PerfectCase => check_perfect_case(inst, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{parse_element, preset};
    use crate::verify::Status;

    fn inst(domain: &str, codomain: &str, images: &[&str]) -> Instance {
        let d = preset(domain).unwrap();
        let c = preset(codomain).unwrap();
        let imgs = images.iter().map(|s| parse_element(&c, s).unwrap()).collect();
        let phi = GroupHom::new(d.group().clone(), c.group().clone(), imgs).unwrap();
        Instance::new(format!("{domain} -> {codomain}"), d, &phi).unwrap()
    }

    #[test]
    fn nilpotent_examples() {
        let opts = VerifyOptions::default();
        assert!(run_check(Theorem::NilpotentFixedPoint, &inst("C4", "C2", &["a"]), &opts).unwrap().passed());
        assert!(run_check(Theorem::NilpotentFixedPoint, &inst("D4", "D4", &["r", "s"]), &opts).unwrap().passed());
        assert!(run_check(Theorem::NilpotentFixedPoint, &inst("Q8", "C2", &["a", "e"]), &opts).unwrap().passed());
        let e = run_check(Theorem::NilpotentFixedPoint, &inst("S3", "S3", &["a", "b"]), &opts).unwrap_err();
        assert_eq!(e.kind(), "precondition");
    }

    #[test]
    fn lcs_and_bound() {
        let i = inst("S3", "S4", &["(1 2 3)", "(1 2)"]);
        let r = check_lcs_quotients(&i).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.data["domain_quotients"], r.data["limit_quotients"]);
        let b = check_finiteness_and_bound(&inst("C2", "C2", &["e"])).unwrap();
        assert!(b.passed());
        assert_eq!(b.data["limit_order"], 2);
        assert_eq!(b.data["bound"], 2.0);
        let b = check_finiteness_and_bound(&inst("C3", "S3", &["a"])).unwrap();
        assert_eq!(b.data["bound"], 9.0);
    }

    #[test]
    fn overgroups_in_s4() {
        let s4 = preset("S4").unwrap().group().clone();
        let h = PermGroup::new(4, vec![Permutation::parse_cycles("(1 2)(3 4)", 4).unwrap()]).unwrap();
        let orders: Vec<u64> = subnormal_overgroups(&s4, &h, 500).unwrap().iter().map(|s| s.order()).collect();
        // C4, D4 and the other Klein group lie only in Sylow subgroups
        assert_eq!(orders, vec![2, 4, 12, 24]);
        let t = PermGroup::new(4, vec![Permutation::parse_cycles("(1 2)", 4).unwrap()]).unwrap();
        let orders: Vec<u64> = subnormal_overgroups(&s4, &t, 500).unwrap().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![24]);
    }

    #[test]
    fn invariance_and_universality() {
        let opts = VerifyOptions::default();
        for i in [
            inst("C2", "S4", &["(1 2)(3 4)"]),
            inst("C3", "S3", &["a"]),
            inst("S3", "S3", &["a", "b"]),
        ] {
            let r = check_subnormal_invariance(&i, &opts).unwrap();
            assert!(r.passed(), "{r:?}");
            let u = check_universality(&i, &opts).unwrap();
            assert!(u.passed(), "{u:?}");
        }
    }

    #[test]
    fn kernel_reduction_examples() {
        let opts = VerifyOptions::default();
        for i in [
            inst("S3", "C2", &["e", "a"]),
            inst("C4", "C2", &["e"]),
            inst("D4", "C2", &["a", "e"]),
            inst("S3", "S3", &["a", "b"]),
        ] {
            let r = check_kernel_reduction(&i, &opts).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn perfect_branches() {
        let opts = VerifyOptions::default();
        let r = check_perfect_case(&inst("A5", "A5", &["a", "b"]), &opts).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.data["gamma2_order"], 60);
        let e = check_perfect_case(&inst("V4", "V4", &["a", "b"]), &opts).unwrap_err();
        assert_eq!(e.kind(), "precondition");
        let e = check_perfect_case(
            &inst("A5", "S5", &["(1 2)(3 4)", "(1 3 5)"]),
            &opts,
        )
        .unwrap_err();
        assert_eq!(e.kind(), "precondition");
    }

    #[test]
    fn capacity_is_an_error() {
        let opts = VerifyOptions {
            universality_cap: 1,
            ..VerifyOptions::default()
        };
        let e = check_universality(&inst("C2", "C2", &["a"]), &opts).unwrap_err();
        assert_eq!(e.kind(), "capacity");
        let r = CheckReport::skipped(Theorem::Universality, "x", e.to_string());
        assert_eq!(r.status, Status::Skipped);
    }
}
