use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::PermGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    SuccessiveNormalClosures,
    SuccessiveCommutators,
    LowerCentral,
    UpperCentral,
}

/// A terminated series; the terminal term appears twice, at
/// `terminal_index` and `terminal_index + 1`.
#[derive(Clone, Debug)]
pub struct SeriesRecord {
    pub kind: SeriesKind,
    pub terms: Vec<PermGroup>,
    pub terminal_index: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeriesSummary {
    pub kind: SeriesKind,
    pub orders: Vec<u64>,
    pub terminal_index: usize,
    pub terminal_order: u64,
}

impl SeriesRecord {
    /// Builds a record from distinct terms by repeating the last one.
    fn from_distinct(kind: SeriesKind, mut terms: Vec<PermGroup>) -> SeriesRecord {
        let last = terms.last().expect("series has a first term").clone();
        let terminal_index = terms.len() - 1;
        terms.push(last);
        SeriesRecord {
            kind,
            terms,
            terminal_index,
        }
    }

    pub fn terminal(&self) -> &PermGroup {
        &self.terms[self.terminal_index]
    }

    pub fn orders(&self) -> Vec<u64> {
        self.terms.iter().map(|g| g.order()).collect()
    }

    pub fn summary(&self) -> SeriesSummary {
        SeriesSummary {
            kind: self.kind,
            orders: self.orders(),
            terminal_index: self.terminal_index,
            terminal_order: self.terminal().order(),
        }
    }
}

/// `C_0 = G`, `C_{i+1} = <H^{C_i}>`; the terminal term is the smallest
/// subnormal subgroup of `G` containing `H`.
pub fn subnormal_closure_series(g: &PermGroup, h: &PermGroup) -> Result<SeriesRecord> {
    Ok(SeriesRecord::from_distinct(
        SeriesKind::SuccessiveNormalClosures,
        g.successive_normal_closures(h)?,
    ))
}

/// `K_1 = K`, `K_{i+1} = [Gamma, K_i]`.
pub fn kernel_commutator_series(gamma: &PermGroup, k: &PermGroup) -> Result<SeriesRecord> {
    if !k.is_normal_in(gamma) {
        return Err(Error::invalid("successive commutators need a normal subgroup"));
    }
    let mut terms = vec![k.clone()];
    loop {
        let last = terms.last().unwrap();
        let next = gamma.commutator_subgroup(gamma, last)?;
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    Ok(SeriesRecord::from_distinct(SeriesKind::SuccessiveCommutators, terms))
}

pub fn lower_central_record(g: &PermGroup) -> SeriesRecord {
    SeriesRecord::from_distinct(SeriesKind::LowerCentral, g.lower_central_series())
}

pub fn upper_central_record(g: &PermGroup) -> Result<SeriesRecord> {
    Ok(SeriesRecord::from_distinct(SeriesKind::UpperCentral, g.upper_central_series()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset_group;
    use crate::Permutation;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn normal_closure_series_examples() {
        let s3 = preset_group("S3").unwrap();
        let a3 = PermGroup::new(3, vec![p("(1 2 3)", 3)]).unwrap();
        let r = subnormal_closure_series(&s3, &a3).unwrap();
        assert_eq!(r.orders(), vec![6, 3, 3]);
        assert_eq!(r.terminal().order(), 3);

        let s4 = preset_group("S4").unwrap();
        let t = PermGroup::new(4, vec![p("(1 2)", 4)]).unwrap();
        assert_eq!(subnormal_closure_series(&s4, &t).unwrap().orders(), vec![24, 24]);
    }

    #[test]
    fn commutator_series_examples() {
        let d4 = preset_group("D4").unwrap();
        let z = d4.center().unwrap();
        let r = kernel_commutator_series(&d4, &z).unwrap();
        assert_eq!(r.orders(), vec![2, 1, 1]);
        let s3 = preset_group("S3").unwrap();
        let a3 = PermGroup::new(3, vec![p("(1 2 3)", 3)]).unwrap();
        assert_eq!(kernel_commutator_series(&s3, &a3).unwrap().orders(), vec![3, 3]);
        let t = PermGroup::new(3, vec![p("(1 2)", 3)]).unwrap();
        assert!(kernel_commutator_series(&s3, &t).is_err());
        // K = Gamma reproduces the lower central series
        let q8 = preset_group("Q8").unwrap();
        assert_eq!(
            kernel_commutator_series(&q8, &q8).unwrap().orders(),
            lower_central_record(&q8).orders()
        );
    }

    #[test]
    fn central_records() {
        let d4 = preset_group("D4").unwrap();
        let r = upper_central_record(&d4).unwrap();
        assert_eq!(r.orders(), vec![1, 2, 8, 8]);
        assert_eq!(r.terms[r.terminal_index].order(), r.terms[r.terminal_index + 1].order());
        assert_eq!(lower_central_record(&preset_group("S3").unwrap()).orders(), vec![6, 3, 3]);
    }
}
