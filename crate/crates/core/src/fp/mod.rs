//! Finitely presented groups and coset enumeration.

pub mod presentation;
pub mod realize;
pub mod todd_coxeter;
pub mod word;

pub use presentation::{default_labels, Presentation, PresentationSpec};
pub use realize::{
    cayley_presentation, cayley_presentation_bounded, perm_realization, realize, spanning_presentation,
    PresentedGroup, SpanningTree, DEFAULT_CAYLEY_BOUND,
};
pub use todd_coxeter::{todd_coxeter, CosetTable, TableStatus};
pub use word::Word;
