//! HLT coset enumeration with union-find coincidence handling.
//!
//! Column `2g` holds the action of generator `g`, column `2g + 1` that of its
//! inverse. Cosets are defined in increasing order and the lowest undefined
//! entry met while scanning is always the one filled next.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::presentation::Presentation;
use crate::fp::word::Word;
use crate::perm::Permutation;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableStatus {
    Complete,
    Overflow,
}

/// A coset table; rows are cosets (coset 0 is the subgroup itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generator_count: usize,
    rows: Vec<Vec<u32>>,
    status: TableStatus,
    max_cosets: usize,
    trivial_subgroup: bool,
}

impl CosetTable {
    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == TableStatus::Complete
    }

    /// Number of live cosets (the index, when complete).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn max_cosets(&self) -> usize {
        self.max_cosets
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn over_trivial_subgroup(&self) -> bool {
        self.trivial_subgroup
    }

    pub fn entry(&self, coset: usize, column: usize) -> Option<usize> {
        match self.rows[coset][column] {
            UNDEF => None,
            c => Some(c as usize),
        }
    }

    /// Coset reached from `coset` by reading `w`, if every step is defined.
    pub fn trace(&self, coset: usize, w: &Word) -> Option<usize> {
        let mut c = coset;
        for &l in w.letters() {
            c = self.entry(c, column(l))?;
        }
        Some(c)
    }

    /// Every entry defined, generators act bijectively, and every relator
    /// closes from every coset.
    pub fn verify(&self, p: &Presentation) -> bool {
        if !self.is_complete() || p.generator_count() != self.generator_count {
            return false;
        }
        let n = self.rows.len();
        for (c, row) in self.rows.iter().enumerate() {
            for (col, &d) in row.iter().enumerate() {
                if d == UNDEF || d as usize >= n || self.rows[d as usize][col ^ 1] != c as u32 {
                    return false;
                }
            }
        }
        p.relators()
            .iter()
            .all(|r| (0..n).all(|c| self.trace(c, r) == Some(c)))
    }

    /// Permutation of the cosets induced by generator `g`.
    pub fn generator_action(&self, g: usize) -> Result<Permutation> {
        if !self.is_complete() {
            return Err(Error::invalid("coset table is not complete"));
        }
        Permutation::from_images(self.rows.iter().map(|r| r[2 * g]).collect())
    }
}

#[inline]
fn column(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
    queue: Vec<usize>,
}

struct Overflow;

impl Enumerator {
    fn new(cols: usize, max_cosets: usize) -> Self {
        Enumerator {
            cols,
            table: vec![UNDEF; cols],
            parent: vec![0],
            live: 1,
            max_cosets,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, v: u32) {
        self.table[c * self.cols + col] = v;
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, col: usize) -> std::result::Result<(), Overflow> {
        if self.live >= self.max_cosets {
            return Err(Overflow);
        }
        let d = self.allocated();
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.live += 1;
        self.set(c, col, d as u32);
        self.set(d, col ^ 1, c as u32);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut k = c;
        while self.parent[k] as usize != r {
            let next = self.parent[k] as usize;
            self.parent[k] = r as u32;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let x = self.rep(a);
        let y = self.rep(b);
        if x != y {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            self.parent[hi] = lo as u32;
            self.live -= 1;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for col in 0..self.cols {
                let d = self.get(g, col);
                if d == UNDEF {
                    continue;
                }
                let d = d as usize;
                self.set(d, col ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x as usize);
                } else {
                    let nu_inv = self.get(nu, col ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv as usize);
                    } else {
                        self.set(mu, col, nu as u32);
                        self.set(nu, col ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[i32]) -> std::result::Result<(), Overflow> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                let next = self.get(f, column(w[i]));
                if next == UNDEF {
                    break;
                }
                f = next as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Ok(());
            }
            while j >= i as isize {
                let next = self.get(b, column(w[j as usize]) ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let col = column(w[i]);
                self.set(f, col, b as u32);
                self.set(b, col ^ 1, f as u32);
                return Ok(());
            }
            self.define(f, column(w[i]))?;
        }
    }

    /// Renumbers live cosets in order; returns the new index of `alpha`.
    fn compact(&mut self, alpha: usize) -> usize {
        let n = self.allocated();
        let mut renum = vec![UNDEF; n];
        let mut next = 0u32;
        for (c, slot) in renum.iter_mut().enumerate() {
            if self.parent[c] as usize == c {
                *slot = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.cols);
        for c in 0..n {
            if renum[c] == UNDEF {
                continue;
            }
            for col in 0..self.cols {
                let v = self.get(c, col);
                table.push(if v == UNDEF { UNDEF } else { renum[v as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        let mut a = alpha;
        while renum[a] == UNDEF {
            a += 1;
        }
        renum[a] as usize
    }

    fn into_rows(mut self) -> Vec<Vec<u32>> {
        self.compact(0);
        self.table.chunks(self.cols.max(1)).map(|r| r.to_vec()).take(self.parent.len()).collect()
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup_words` in the
/// group presented by `p`, defining at most `max_cosets` live cosets at once.
pub fn todd_coxeter(p: &Presentation, subgroup_words: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::invalid("coset bound must be at least 1"));
    }
    for w in subgroup_words {
        if w.generator_span() > p.generator_count() {
            return Err(Error::invalid("subgroup word uses an unknown generator"));
        }
    }
    let cols = 2 * p.generator_count();
    let relators: Vec<&[i32]> = p
        .relators()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.letters())
        .collect();
    let mut e = Enumerator::new(cols, max_cosets);
    let status = run(&mut e, &relators, subgroup_words);
    let trivial_subgroup = subgroup_words.iter().all(|w| w.is_empty());
    let rows = if cols == 0 {
        vec![Vec::new()]
    } else {
        e.into_rows()
    };
    Ok(CosetTable {
        generator_count: p.generator_count(),
        rows,
        status,
        max_cosets,
        trivial_subgroup,
    })
}

fn run(e: &mut Enumerator, relators: &[&[i32]], subgroup_words: &[Word]) -> TableStatus {
    for w in subgroup_words {
        if e.scan_and_fill(0, w.letters()).is_err() {
            return TableStatus::Overflow;
        }
    }
    let mut alpha = 0;
    while alpha < e.allocated() {
        if e.is_live(alpha) {
            for r in relators {
                if !e.is_live(alpha) {
                    break;
                }
                if e.scan_and_fill(alpha, r).is_err() {
                    return TableStatus::Overflow;
                }
            }
            for col in 0..e.cols {
                if !e.is_live(alpha) {
                    break;
                }
                if e.get(alpha, col) == UNDEF && e.define(alpha, col).is_err() {
                    return TableStatus::Overflow;
                }
            }
        }
        alpha += 1;
        if e.allocated() > 4 * e.max_cosets.max(1024) && alpha < e.allocated() {
            alpha = e.compact(alpha);
        }
    }
    TableStatus::Complete
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic() {
        let p = Presentation::parse(&["a"], &["a^5"]).unwrap();
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert!(t.is_complete());
        assert_eq!(t.len(), 5);
        assert!(t.verify(&p));
    }

    #[test]
    fn subgroup_index() {
        let p = Presentation::parse(&["a", "b"], &["a^3", "b^2", "(a b)^2"]).unwrap();
        let t = todd_coxeter(&p, &[Word::gen(0)], 100).unwrap();
        assert_eq!(t.len(), 2);
        let t = todd_coxeter(&p, &[Word::gen(1)], 100).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn overflow_is_reported() {
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^2"]).unwrap();
        let t = todd_coxeter(&p, &[], 50).unwrap();
        assert_eq!(t.status(), TableStatus::Overflow);
        assert!(!t.verify(&p));
        assert!(todd_coxeter(&p, &[], 0).is_err());
    }

    #[test]
    fn no_generators() {
        let p = Presentation::new(0, vec![]).unwrap();
        let t = todd_coxeter(&p, &[], 1).unwrap();
        assert!(t.is_complete());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn generator_killed() {
        let p = Presentation::parse(&["a", "b"], &["a", "b^3"]).unwrap();
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.verify(&p));
    }
}
