//! Analysis toolkit for authoritative DNS response selection.
//!
//! Policies are modeled as total functions from a finite space of resolver-visible
//! query contexts to weighted outcomes over a finite candidate set. On top of that
//! model the crate provides:
//!
//! - [`algebra`]: behaviors with `⊕`/`⊗`, gates, observables and equivalence,
//! - [`normalform`]: partition of the context space into regions and the
//!   `⊕ᵢ (gateᵢ ⊗ selectionᵢ)` reconstruction,
//! - [`realization`]: restricted realizations, collapse, representability,
//!   approximation and lowering checks,
//! - [`serve`] and [`wire`]: concrete responses and a 512-byte wire encoder,
//! - [`dsl`] and [`cli`]: the text formats and command-line driver.

pub mod algebra;
pub mod cli;
pub mod dsl;
mod error;
pub mod fixtures;
pub mod generate;
pub mod laws;
pub mod normalform;
pub mod rational;
pub mod realization;
pub mod serve;
pub mod universe;
pub mod wire;

pub use error::{Error, Result};
