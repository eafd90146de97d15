//! Link invariants in Seifert fibered spaces: group presentations from arrow
//! diagrams, first homology of the complement, per-component homology
//! classes, and one-dimensional twisted Alexander polynomials.

pub mod diagram;
pub mod fox;
pub mod homology;
pub mod moves;
pub mod presentation;
pub mod report;
pub mod ring;
pub mod twisted;
pub mod word;

pub use diagram::{parse_diagram, serialize_diagram, ArrowDiagram, SeifertData};
pub use homology::{h1, manifold_h1, smith_normal_form, AbelianGroup, IntMatrix};
pub use presentation::{build_presentation, seifert_group, tietze_simplify, GroupPresentation};
pub use twisted::{twisted_alexander, SigmaSelector, TwistedResult};
