use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::word::Word;

/// A finitely presented group `<X | R>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Word>,
    labels: Vec<String>,
}

/// JSON form: `{"gens": ["a","b"], "relators": ["a^3","b^2","(a b)^2"]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationSpec {
    pub gens: Vec<String>,
    pub relators: Vec<String>,
}

pub fn default_labels(count: usize) -> Vec<String> {
    if count <= 26 {
        (0..count).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..count).map(|i| format!("x{}", i + 1)).collect()
    }
}

impl Presentation {
    /// Relators are freely reduced on entry; empty relators are kept so that
    /// relator counts stay predictable.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Presentation> {
        Presentation::with_labels(default_labels(generator_count), relators)
    }

    pub fn with_labels(labels: Vec<String>, relators: Vec<Word>) -> Result<Presentation> {
        let generator_count = labels.len();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if l.is_empty() || !l.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::invalid(format!("bad generator label {l:?}")));
            }
            if !seen.insert(l) {
                return Err(Error::invalid(format!("duplicate generator label {l:?}")));
            }
        }
        let relators: Vec<Word> = relators.into_iter().map(Word::reduced).collect();
        for r in &relators {
            if r.generator_span() > generator_count {
                return Err(Error::invalid(format!(
                    "relator uses generator {} of {}",
                    r.generator_span(),
                    generator_count
                )));
            }
        }
        Ok(Presentation {
            generator_count,
            relators,
            labels,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Same generators with extra relators appended.
    pub fn with_extra_relators(&self, extra: impl IntoIterator<Item = Word>) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(extra.into_iter().map(Word::reduced));
        Presentation {
            generator_count: self.generator_count,
            relators,
            labels: self.labels.clone(),
        }
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Presentation> {
        let relators = spec
            .relators
            .iter()
            .map(|r| Word::parse(r, &spec.gens))
            .collect::<Result<Vec<_>>>()?;
        Presentation::with_labels(spec.gens.clone(), relators)
    }

    pub fn to_spec(&self) -> PresentationSpec {
        PresentationSpec {
            gens: self.labels.clone(),
            relators: self.relators.iter().map(|r| r.render(&self.labels)).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Presentation> {
        let spec: PresentationSpec =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("presentation JSON: {e}")))?;
        Presentation::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("presentation serializes")
    }

    /// Parses `labels` and relator strings in one go.
    pub fn parse(labels: &[&str], relators: &[&str]) -> Result<Presentation> {
        Presentation::from_spec(&PresentationSpec {
            gens: labels.iter().map(|s| s.to_string()).collect(),
            relators: relators.iter().map(|s| s.to_string()).collect(),
        })
    }
}
