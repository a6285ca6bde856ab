//! Deterministic Schreier-Sims.
//!
//! Levels follow the usual stabilizer-chain layout: level `l` stores a base
//! point `b_l`, the strong generators fixing `b_0 .. b_{l-1}`, and the orbit
//! of `b_l` under them with explicit transversal elements `u` satisfying
//! `b_l^u = beta`.

use crate::error::{Error, Result};
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    gens: Vec<usize>,
    orbit: Vec<usize>,
    slot: Vec<u32>,
    reps: Vec<Permutation>,
    reps_inv: Vec<Permutation>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        Level {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            slot: vec![NONE; degree],
            reps: Vec::new(),
            reps_inv: Vec::new(),
        }
    }

    fn rebuild_orbit(&mut self, strong: &[Permutation], degree: usize) {
        self.slot.iter_mut().for_each(|s| *s = NONE);
        self.orbit.clear();
        self.reps.clear();
        self.reps_inv.clear();
        let id = Permutation::identity(degree);
        self.slot[self.base_point] = 0;
        self.orbit.push(self.base_point);
        self.reps.push(id.clone());
        self.reps_inv.push(id);
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            let u = self.reps[head].clone();
            for &gi in &self.gens {
                let s = &strong[gi];
                let gamma = s.apply(beta);
                if self.slot[gamma] == NONE {
                    let v = u.compose(s);
                    self.slot[gamma] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.reps_inv.push(v.inverse());
                    self.reps.push(v);
                }
            }
            head += 1;
        }
    }

    #[inline]
    fn rep_index(&self, point: usize) -> Option<usize> {
        match self.slot[point] {
            NONE => None,
            i => Some(i as usize),
        }
    }
}

/// A base and strong generating set with transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

/// Build options for [`StabChain::build`].
#[derive(Clone, Debug, Default)]
pub struct ChainOptions<'a> {
    /// Points to use first as base points, in order.
    pub base_prefix: &'a [usize],
    /// If the group order is known, construction stops as soon as it is reached.
    pub known_order: Option<u64>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Permutation], opts: ChainOptions<'_>) -> Result<StabChain> {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::invalid(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = Vec::new();
        for &b in opts.base_prefix {
            if b >= degree {
                return Err(Error::invalid(format!("base point {} out of range", b + 1)));
            }
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for s in &strong {
            if base.iter().all(|&b| s.apply(b) == b) {
                base.push(s.first_moved().expect("non-identity generator"));
            }
        }
        let mut chain = StabChain {
            degree,
            strong,
            levels: base.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for (gi, s) in chain.strong.iter().enumerate() {
            for (l, level) in chain.levels.iter_mut().enumerate() {
                if base[..l].iter().all(|&b| s.apply(b) == b) {
                    level.gens.push(gi);
                } else {
                    break;
                }
            }
        }
        for level in chain.levels.iter_mut() {
            level.rebuild_orbit(&chain.strong, degree);
        }
        chain.complete(opts.known_order)?;
        Ok(chain)
    }

    fn complete(&mut self, known_order: Option<u64>) -> Result<()> {
        if let Some(target) = known_order {
            if self.order_checked()? == target {
                return Ok(());
            }
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let l = i as usize;
            match self.find_missing(l) {
                None => i -= 1,
                Some((h, j)) => {
                    let gi = self.strong.len();
                    self.strong.push(h);
                    if j == self.levels.len() {
                        let b = self.strong[gi].first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for m in l + 1..=j {
                        self.levels[m].gens.push(gi);
                        self.levels[m].rebuild_orbit(&self.strong, self.degree);
                    }
                    if let Some(target) = known_order {
                        let now = self.order_checked()?;
                        if now == target {
                            return Ok(());
                        }
                        if now > target {
                            return Err(Error::inconsistent(format!(
                                "group order exceeds the supplied order {target}"
                            )));
                        }
                    }
                    i = j as isize;
                }
            }
        }
        if let Some(target) = known_order {
            let now = self.order_checked()?;
            if now != target {
                return Err(Error::inconsistent(format!(
                    "group has order {now}, supplied order was {target}"
                )));
            }
        }
        Ok(())
    }

    /// First Schreier generator at level `l` that does not sift through the
    /// levels below, with the residue and the level where sifting stopped.
    fn find_missing(&self, l: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[l];
        for (k, &beta) in level.orbit.iter().enumerate() {
            let u = &level.reps[k];
            for &gi in &level.gens {
                let s = &self.strong[gi];
                let gamma = s.apply(beta);
                let idx = level.rep_index(gamma).expect("orbit closed under generators");
                // u_beta * s * u_gamma^-1 is the identity iff u_beta * s == u_gamma
                let us = u.compose(s);
                if us == level.reps[idx] {
                    continue;
                }
                let g = us.compose(&level.reps_inv[idx]);
                let (h, j) = self.strip(g, l + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// at which it left the chain (`levels.len()` if it sifted through).
    pub fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(level.base_point);
            if beta == level.base_point {
                continue;
            }
            match level.rep_index(beta) {
                None => return (g, l),
                Some(idx) => g = g.compose(&level.reps_inv[idx]),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    fn order_checked(&self) -> Result<u64> {
        self.levels.iter().try_fold(1u64, |acc, l| {
            acc.checked_mul(l.orbit.len() as u64)
                .ok_or_else(|| Error::capacity("group order exceeds 2^64", u64::MAX))
        })
    }

    pub fn order(&self) -> u64 {
        self.order_checked().expect("order checked at construction")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Strong generators of the stabilizer of the first `l` base points.
    pub fn level_generators(&self, l: usize) -> Vec<Permutation> {
        match self.levels.get(l) {
            Some(level) => level.gens.iter().map(|&gi| self.strong[gi].clone()).collect(),
            None => Vec::new(),
        }
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_base_point(&self, l: usize) -> usize {
        self.levels[l].base_point
    }

    /// Sifts `g` through the first `count` levels only.
    pub fn strip_prefix(&self, g: Permutation, count: usize) -> (Permutation, usize) {
        let mut g = g;
        for (l, level) in self.levels.iter().enumerate().take(count) {
            let beta = g.apply(level.base_point);
            if beta == level.base_point {
                continue;
            }
            match level.rep_index(beta) {
                None => return (g, l),
                Some(idx) => g = g.compose(&level.reps_inv[idx]),
            }
        }
        (g, count.min(self.levels.len()))
    }

    /// Every group element, in a fixed order determined by the chain.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        // g = u_{k-1} ... u_1 u_0, built from the deepest level outwards
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.reps.len());
            for g in &out {
                for u in &level.reps {
                    next.push(g.compose(u));
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        let s4 = StabChain::build(4, &[p("(1 2 3 4)", 4), p("(1 2)", 4)], Default::default()).unwrap();
        assert_eq!(s4.order(), 24);
        let s6 = StabChain::build(6, &[p("(1 2 3 4 5 6)", 6), p("(1 2)", 6)], Default::default()).unwrap();
        assert_eq!(s6.order(), 720);
        assert_eq!(s6.elements().len(), 720);
    }

    #[test]
    fn empty_and_identity_generators() {
        let t = StabChain::build(3, &[], Default::default()).unwrap();
        assert_eq!(t.order(), 1);
        let t = StabChain::build(3, &[Permutation::identity(3)], Default::default()).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.contains(&Permutation::identity(3)));
        assert!(!t.contains(&p("(1 2)", 3)));
    }

    #[test]
    fn membership_in_a4() {
        let a4 = StabChain::build(4, &[p("(1 2 3)", 4), p("(2 3 4)", 4)], Default::default()).unwrap();
        assert_eq!(a4.order(), 12);
        assert!(a4.contains(&p("(1 2)(3 4)", 4)));
        assert!(!a4.contains(&p("(1 2)", 4)));
    }

    #[test]
    fn prefix_base_gives_pointwise_stabilizer() {
        let s4 = StabChain::build(
            4,
            &[p("(1 2 3 4)", 4), p("(1 2)", 4)],
            ChainOptions { base_prefix: &[2, 3], known_order: None },
        )
        .unwrap();
        assert_eq!(&s4.base()[..2], &[2, 3]);
        // stabilizer of points 3 and 4 is <(1 2)>
        let stab = s4.level_generators(2);
        let c = StabChain::build(4, &stab, Default::default()).unwrap();
        assert_eq!(c.order(), 2);
    }

    #[test]
    fn known_order_short_circuits() {
        let gens = [p("(1 2 3 4 5)", 5), p("(1 2)", 5)];
        let c = StabChain::build(5, &gens, ChainOptions { base_prefix: &[], known_order: Some(120) }).unwrap();
        assert_eq!(c.order(), 120);
        assert!(StabChain::build(5, &gens, ChainOptions { base_prefix: &[], known_order: Some(60) }).is_err());
    }
}
