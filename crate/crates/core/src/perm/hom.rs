use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::perm::chain::{ChainOptions, StabChain};
use crate::perm::{PermGroup, Permutation};

struct HomData {
    domain: PermGroup,
    codomain: PermGroup,
    gen_images: Vec<Permutation>,
    /// Graph subgroup `D = <(g_i, h_i)>` on `n + m` points, base in the domain part.
    graph: StabChain,
    /// Same subgroup with the moved codomain points as a base prefix.
    graph_by_codomain: OnceLock<(StabChain, usize)>,
    image: OnceLock<PermGroup>,
    kernel: OnceLock<PermGroup>,
}

/// A homomorphism between permutation groups, defined by the images of the
/// domain generators and certified by the graph test `|D| = |domain|`.
#[derive(Clone)]
pub struct GroupHom {
    inner: Arc<HomData>,
}

impl GroupHom {
    pub fn new(domain: PermGroup, codomain: PermGroup, gen_images: Vec<Permutation>) -> Result<GroupHom> {
        if gen_images.len() != domain.generators().len() {
            return Err(Error::invalid(format!(
                "{} generator images given for {} domain generators",
                gen_images.len(),
                domain.generators().len()
            )));
        }
        for img in &gen_images {
            if img.degree() != codomain.degree() || !codomain.contains(img) {
                return Err(Error::invalid(format!("image {} is not in the codomain", img)));
            }
        }
        let n = domain.degree();
        let paired: Vec<Permutation> = domain
            .generators()
            .iter()
            .zip(&gen_images)
            .map(|(g, h)| g.direct_sum(h))
            .collect();
        let graph = StabChain::build(n + codomain.degree(), &paired, ChainOptions::default())?;
        if graph.order() != domain.order() {
            let witness = graph_witness(&paired, n, codomain.degree())?;
            return Err(Error::NotAHomomorphism {
                domain_order: domain.order(),
                graph_order: graph.order(),
                witness,
            });
        }
        debug_assert!(graph.base().iter().all(|&b| b < n));
        Ok(GroupHom {
            inner: Arc::new(HomData {
                domain,
                codomain,
                gen_images,
                graph,
                graph_by_codomain: OnceLock::new(),
                image: OnceLock::new(),
                kernel: OnceLock::new(),
            }),
        })
    }

    pub fn identity(group: &PermGroup) -> GroupHom {
        GroupHom::new(group.clone(), group.clone(), group.generators().to_vec()).expect("identity map")
    }

    pub fn trivial(domain: &PermGroup, codomain: &PermGroup) -> GroupHom {
        let images = vec![codomain.identity(); domain.generators().len()];
        GroupHom::new(domain.clone(), codomain.clone(), images).expect("trivial map")
    }

    /// Inclusion of a subgroup acting on the same points.
    pub fn inclusion(sub: &PermGroup, ambient: &PermGroup) -> Result<GroupHom> {
        if !sub.is_subgroup_of(ambient) {
            return Err(Error::invalid("inclusion of a non-subgroup"));
        }
        GroupHom::new(sub.clone(), ambient.clone(), sub.generators().to_vec())
    }

    pub fn domain(&self) -> &PermGroup {
        &self.inner.domain
    }

    pub fn codomain(&self) -> &PermGroup {
        &self.inner.codomain
    }

    pub fn gen_images(&self) -> &[Permutation] {
        &self.inner.gen_images
    }

    /// Image of an arbitrary domain element.
    pub fn eval(&self, g: &Permutation) -> Result<Permutation> {
        let n = self.domain().degree();
        let m = self.codomain().degree();
        if g.degree() != n {
            return Err(Error::invalid(format!("element {} has the wrong degree", g)));
        }
        let lifted = g.direct_sum(&Permutation::identity(m));
        let (residue, _) = self.inner.graph.strip(lifted, 0);
        // residue = (1, h(g)^-1) when g lies in the domain
        if !residue.slice(0, n).is_identity() {
            return Err(Error::invalid(format!("element {} is not in the domain", g)));
        }
        Ok(residue.slice(n, m).inverse())
    }

    fn codomain_chain(&self) -> &(StabChain, usize) {
        self.inner.graph_by_codomain.get_or_init(|| {
            let n = self.domain().degree();
            let m = self.codomain().degree();
            let paired: Vec<Permutation> = self
                .domain()
                .generators()
                .iter()
                .zip(self.gen_images())
                .map(|(g, h)| g.direct_sum(h))
                .collect();
            let prefix: Vec<usize> = (n..n + m).filter(|&p| paired.iter().any(|x| x.apply(p) != p)).collect();
            let chain = StabChain::build(
                n + m,
                &paired,
                ChainOptions {
                    base_prefix: &prefix,
                    known_order: Some(self.domain().order()),
                },
            )
            .expect("graph subgroup of a verified homomorphism");
            let count = prefix.len();
            (chain, count)
        })
    }

    /// Some `g` with `h(g) = q`, or `None` if `q` is outside the image.
    pub fn preimage(&self, q: &Permutation) -> Result<Option<Permutation>> {
        let n = self.domain().degree();
        let m = self.codomain().degree();
        if q.degree() != m {
            return Err(Error::invalid(format!("element {} has the wrong degree", q)));
        }
        let (chain, count) = self.codomain_chain();
        let lifted = Permutation::identity(n).direct_sum(q);
        let (residue, level) = chain.strip_prefix(lifted, *count);
        if level < (*count).min(chain.num_levels()) || !residue.slice(n, m).is_identity() {
            return Ok(None);
        }
        Ok(Some(residue.slice(0, n).inverse()))
    }

    pub fn image(&self) -> &PermGroup {
        self.inner.image.get_or_init(|| {
            PermGroup::new(self.codomain().degree(), self.gen_images().to_vec()).expect("images in codomain")
        })
    }

    pub fn kernel(&self) -> &PermGroup {
        self.inner.kernel.get_or_init(|| {
            let n = self.domain().degree();
            let (chain, count) = self.codomain_chain();
            let gens: Vec<Permutation> = chain
                .level_generators(*count)
                .into_iter()
                .map(|x| x.slice(0, n))
                .collect();
            let order = self.domain().order() / self.image().order();
            PermGroup::with_known_order(n, gens, order).expect("kernel order is |domain| / |image|")
        })
    }

    pub fn is_injective(&self) -> bool {
        self.image().order() == self.domain().order()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.codomain().order()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `other . self`: first `self`, then `other`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.codomain().degree() != other.domain().degree() || !self.image().is_subgroup_of(other.domain()) {
            return Err(Error::invalid("composition of maps with mismatched groups"));
        }
        let images = self
            .gen_images()
            .iter()
            .map(|x| other.eval(x))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.domain().clone(), other.codomain().clone(), images)
    }

    /// Same map with a smaller codomain containing the image.
    pub fn corestrict(&self, codomain: &PermGroup) -> Result<GroupHom> {
        GroupHom::new(self.domain().clone(), codomain.clone(), self.gen_images().to_vec())
    }

    /// Restriction to a subgroup of the domain.
    pub fn restrict(&self, sub: &PermGroup) -> Result<GroupHom> {
        let images = sub.generators().iter().map(|g| self.eval(g)).collect::<Result<Vec<_>>>()?;
        GroupHom::new(sub.clone(), self.codomain().clone(), images)
    }

    /// Same map on a domain with a different generating list of the same group.
    pub fn rebase(&self, domain: &PermGroup) -> Result<GroupHom> {
        if !domain.same_as(self.domain()) {
            return Err(Error::invalid("rebase onto a different group"));
        }
        self.restrict(domain)
    }

    /// Whether two maps with the same domain agree on every generator.
    pub fn agrees_with(&self, other: &GroupHom) -> Result<bool> {
        for g in self.domain().generators() {
            if self.eval(g)? != other.eval(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The map induced on `domain / n` when `n <= ker`.
    pub fn induced_on_quotient(&self, quotient: &PermGroup, projection: &GroupHom) -> Result<GroupHom> {
        if projection.domain().degree() != self.domain().degree() {
            return Err(Error::invalid("projection has a different domain"));
        }
        if !projection.kernel().is_subgroup_of(self.kernel()) {
            return Err(Error::invalid("quotient kernel is not inside the kernel of the map"));
        }
        // quotient generators are the images of the domain generators
        GroupHom::new(quotient.clone(), self.codomain().clone(), self.gen_images().to_vec())
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHom")
            .field("domain_order", &self.domain().order())
            .field("codomain_order", &self.codomain().order())
            .field("gen_images", &self.gen_images())
            .finish()
    }
}

/// A non-identity `c` with `(1, c)` in the graph subgroup.
fn graph_witness(paired: &[Permutation], n: usize, m: usize) -> Result<Permutation> {
    let prefix: Vec<usize> = (0..n).filter(|&p| paired.iter().any(|x| x.apply(p) != p)).collect();
    let chain = StabChain::build(
        n + m,
        paired,
        ChainOptions {
            base_prefix: &prefix,
            known_order: None,
        },
    )?;
    chain
        .level_generators(prefix.len())
        .into_iter()
        .map(|x| x.slice(n, m))
        .find(|c| !c.is_identity())
        .ok_or_else(|| Error::inconsistent("graph test failed without a witness"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn cyclic(n: usize) -> PermGroup {
        let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        PermGroup::new(n, vec![Permutation::from_images(cycle).unwrap()]).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let s3 = PermGroup::symmetric(3);
        let id = GroupHom::identity(&s3);
        assert!(id.kernel().is_trivial());
        assert!(id.is_bijective());
    }

    #[test]
    fn c4_onto_c2() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let h = GroupHom::new(c4.clone(), c2.clone(), vec![p("(1 2)", 2)]).unwrap();
        assert_eq!(h.kernel().order(), 2);
        assert!(h.kernel().contains(&p("(1 3)(2 4)", 4)));
        assert!(h.is_surjective());
        assert_eq!(h.eval(&p("(1 4 3 2)", 4)).unwrap(), p("(1 2)", 2));
        let pre = h.preimage(&p("(1 2)", 2)).unwrap().unwrap();
        assert_eq!(h.eval(&pre).unwrap(), p("(1 2)", 2));
        assert!(h.preimage(&p("(1 2)", 3)).is_err());
    }

    #[test]
    fn rejects_order_two_onto_order_three() {
        let s3 = PermGroup::symmetric(3);
        let c3 = cyclic(3);
        let images = vec![p("(1 2 3)", 3), p("(1 2 3)", 3)];
        match GroupHom::new(s3, c3, images) {
            Err(Error::NotAHomomorphism { witness, .. }) => assert!(!witness.is_identity()),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn trivial_map_image() {
        let s3 = PermGroup::symmetric(3);
        let c2 = cyclic(2);
        let t = GroupHom::trivial(&s3, &c2);
        assert!(t.image().is_trivial());
        assert_eq!(t.kernel().order(), 6);
    }

    #[test]
    fn graph_test_agrees_with_exhaustive_check() {
        // every assignment of S3 generators into S3
        let s3 = PermGroup::symmetric(3);
        let elems = s3.elements().unwrap();
        let all = s3.elements().unwrap();
        for a in &elems {
            for b in &elems {
                let images = vec![a.clone(), b.clone()];
                let graph_ok = GroupHom::new(s3.clone(), s3.clone(), images.clone()).is_ok();
                let exhaustive = exhaustive_is_hom(&s3, &images, &all);
                assert_eq!(graph_ok, exhaustive, "images {a} {b}");
            }
        }
    }

    /// Brute force: extend along a BFS tree, then check every product.
    fn exhaustive_is_hom(g: &PermGroup, images: &[Permutation], all: &[Permutation]) -> bool {
        use std::collections::HashMap;
        let mut map: HashMap<Permutation, Permutation> = HashMap::new();
        let id = g.identity();
        map.insert(id.clone(), Permutation::identity(images[0].degree()));
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for (s, t) in g.generators().iter().zip(images) {
                let y = x.compose(s);
                let v = map[&x].compose(t);
                match map.get(&y) {
                    Some(w) if *w != v => return false,
                    Some(_) => {}
                    None => {
                        map.insert(y.clone(), v);
                        queue.push(y);
                    }
                }
            }
        }
        all.iter()
            .all(|a| all.iter().all(|b| map[&a.compose(b)] == map[a].compose(&map[b])))
    }
}
