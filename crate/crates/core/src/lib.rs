//! Exact q-expansions of level-one modular forms, Ramanujan-type congruence
//! scanning, Hecke-side certification and the `P¹(Z/M)` permutation module
//! computations behind the structure rules.

pub mod algebra;
pub mod criterion;
pub mod engine;
pub mod error;
pub mod forms;
pub mod heckeops;
pub mod p1rep;
pub mod qseries;

pub use error::{Error, Result};
