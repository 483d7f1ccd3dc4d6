//! Exact computations around q-shiftable quantum affine algebras.
//!
//! The crate covers the shift equations on a Laurent ring and their
//! classification, oscillator realizations of the four shiftable affine
//! types, the modules built from them (Laurent-ring modules, Fock modules and
//! their twisted variants), braid-group root vectors, and highest l-weights.
//! All arithmetic is exact over `Q(i)(v)` with `q = v^4`.

pub mod scalars;
pub mod cartan;
pub mod laurent;
pub mod shiftability;
pub mod oscillator;
pub mod algebra;
pub mod repmodules;
pub mod lweights;
pub mod suite;
pub mod cli;
