use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fp::presentation::Presentation;
use crate::fp::todd_coxeter::{todd_coxeter, CosetTable};
use crate::fp::word::Word;
use crate::perm::{PermGroup, Permutation};

/// Largest group accepted by [`cayley_presentation`] by default.
pub const DEFAULT_CAYLEY_BOUND: u64 = 360;

/// The permutation action on cosets of a complete table, with one
/// permutation per abstract generator.
pub fn perm_realization(t: &CosetTable, p: &Presentation) -> Result<(PermGroup, Vec<Permutation>)> {
    if !t.is_complete() {
        return Err(Error::invalid("cannot realize an incomplete coset table"));
    }
    if t.generator_count() != p.generator_count() {
        return Err(Error::invalid("coset table and presentation disagree on generators"));
    }
    let gens = (0..p.generator_count())
        .map(|g| t.generator_action(g))
        .collect::<Result<Vec<_>>>()?;
    let degree = t.len();
    let group = if t.over_trivial_subgroup() {
        // regular action: the order is the number of cosets
        PermGroup::with_known_order(degree, gens.clone(), degree as u64)?
    } else {
        PermGroup::new(degree, gens.clone())?
    };
    Ok((group, gens))
}

/// Enumerates `p` over the trivial subgroup and realizes it.
pub fn realize(p: &Presentation, max_cosets: usize) -> Result<(PermGroup, Vec<Permutation>)> {
    let t = todd_coxeter(p, &[], max_cosets)?;
    if !t.is_complete() {
        return Err(Error::capacity("coset enumeration", max_cosets as u64));
    }
    perm_realization(&t, p)
}

/// One generator per non-identity element and one relator `x y z^-1` per
/// product `x y = z` (just `x y` when `z` is the identity).
pub fn cayley_presentation(g: &PermGroup) -> Result<(Presentation, Vec<Permutation>)> {
    cayley_presentation_bounded(g, DEFAULT_CAYLEY_BOUND)
}

pub fn cayley_presentation_bounded(g: &PermGroup, bound: u64) -> Result<(Presentation, Vec<Permutation>)> {
    if g.order() > bound {
        return Err(Error::capacity("Cayley presentation group order", bound));
    }
    let elems: Vec<Permutation> = g.elements()?.into_iter().filter(|e| !e.is_identity()).collect();
    let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut relators = Vec::with_capacity(elems.len() * elems.len());
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            let z = x.compose(y);
            let mut letters = vec![i as i32 + 1, j as i32 + 1];
            if let Some(&k) = index.get(&z) {
                letters.push(-(k as i32 + 1));
            }
            relators.push(Word::from_letters(letters));
        }
    }
    Ok((Presentation::new(elems.len(), relators)?, elems))
}

/// Words in the group's own generators for every element, along a
/// breadth-first spanning tree of the Cayley graph.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub elements: Vec<Permutation>,
    pub words: Vec<Word>,
    index: HashMap<Permutation, usize>,
}

impl SpanningTree {
    pub fn new(g: &PermGroup) -> Result<SpanningTree> {
        g.elements()?; // enforces the enumeration bound
        let id = g.identity();
        let mut elements = vec![id.clone()];
        let mut words = vec![Word::empty()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (s_idx, s) in g.generators().iter().enumerate() {
                let e = elements[i].compose(s);
                if !index.contains_key(&e) {
                    index.insert(e.clone(), elements.len());
                    words.push(words[i].concat(&Word::gen(s_idx)));
                    elements.push(e);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Ok(SpanningTree { elements, words, index })
    }

    pub fn word_for(&self, g: &Permutation) -> Option<&Word> {
        self.index.get(g).map(|&i| &self.words[i])
    }

    pub fn position(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// Presentation on the group's own generators: one relator per edge of the
/// Cayley graph outside a spanning tree.
pub fn spanning_presentation(g: &PermGroup) -> Result<Presentation> {
    let tree = SpanningTree::new(g)?;
    let mut relators = Vec::new();
    for (i, e) in tree.elements.iter().enumerate() {
        for (s_idx, s) in g.generators().iter().enumerate() {
            let target = e.compose(s);
            let t = tree.position(&target).expect("closed under generators");
            let w = tree.words[i].concat(&Word::gen(s_idx));
            if w != tree.words[t] {
                let r = w.concat(&tree.words[t].inverse());
                if !r.is_empty() && !relators.contains(&r) {
                    relators.push(r);
                }
            }
        }
    }
    Presentation::new(g.generators().len(), relators)
}

/// A permutation group together with a presentation on its generators.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    group: PermGroup,
    presentation: Presentation,
}

impl PresentedGroup {
    /// Checks that the generators satisfy the relators and that the
    /// presented group has the same order.
    pub fn new(group: PermGroup, presentation: Presentation) -> Result<PresentedGroup> {
        if presentation.generator_count() != group.generators().len() {
            return Err(Error::invalid(format!(
                "presentation has {} generators, group has {}",
                presentation.generator_count(),
                group.generators().len()
            )));
        }
        for r in presentation.relators() {
            if !r.evaluate(group.generators(), group.degree())?.is_identity() {
                return Err(Error::invalid(format!(
                    "relator {} does not hold in the group",
                    r.render(presentation.labels())
                )));
            }
        }
        let bound = (group.order().saturating_mul(20)).max(64) as usize;
        let t = todd_coxeter(&presentation, &[], bound)?;
        if !t.is_complete() {
            return Err(Error::invalid("presentation does not define a group of the expected order"));
        }
        if t.len() as u64 != group.order() {
            return Err(Error::invalid(format!(
                "presentation defines a group of order {}, expected {}",
                t.len(),
                group.order()
            )));
        }
        Ok(PresentedGroup { group, presentation })
    }

    /// Uses the spanning-tree presentation on the group's own generators.
    pub fn from_group(group: PermGroup) -> Result<PresentedGroup> {
        let p = spanning_presentation(&group)?;
        Ok(PresentedGroup { group, presentation: p })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Presentation of `G/N` on the images of `G`'s generators, obtained by
    /// adding words for the generators of `N`.
    pub fn quotient_presentation(&self, n: &PermGroup) -> Result<Presentation> {
        if !n.is_subgroup_of(&self.group) {
            return Err(Error::invalid("quotient by a subgroup outside the group"));
        }
        if n.is_trivial() {
            return Ok(self.presentation.clone());
        }
        let tree = SpanningTree::new(&self.group)?;
        let extra = n
            .generators()
            .iter()
            .filter(|x| !x.is_identity())
            .map(|x| tree.word_for(x).cloned().expect("element of the group"))
            .collect::<Vec<_>>();
        Ok(self.presentation.with_extra_relators(extra))
    }
}
