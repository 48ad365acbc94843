//! Exact homological algebra for presheaves of chain complexes on finite
//! sites: Smith normal form, sheafification, Dold-Kan, hypercover descent,
//! cofibrant replacement by representables, Godement resolutions, and
//! hypercohomology by two independent methods.

pub mod complex;
pub mod error;
pub mod exactalg;
pub mod fixtures;
pub mod godement;
pub mod hypercover;
pub mod resolve;
pub mod simplicial;
pub mod site;

pub use error::Error;
