//! Enriched symmetric monoidal categories over small exact models.
//!
//! The kernel provides three finite backends (functions, relations, rational
//! matrices). Everything else is built generically over the [`Smc`] and
//! [`Enrichment`] traits and checked by exhaustive enumeration within bounds.
#![no_std]

extern crate alloc;

pub mod category;
pub mod causlite;
pub mod closure;
pub mod combs;
pub mod enrichment;
pub mod error;
pub mod kernel;
pub mod matrix;
pub mod pmcat;
pub mod report;
pub mod towers;

pub use category::{Bounds, HomQuery, HomSet, Smc};
pub use enrichment::{Enrichment, SelfEnrichment};
pub use error::{Error, Result};
pub use kernel::{Atom, Backend, Carrier, Model, Morphism, ObjectExpr, Payload};
pub use matrix::{QMatrix, Q};
pub use report::{LawReport, Status, Violation, Witness};
