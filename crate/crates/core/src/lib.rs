//! Periods of rigid double octic Calabi-Yau threefolds.

pub mod arrangement;
pub mod cache;
pub mod chamber;
pub mod concord;
pub mod error;
pub mod exact;
pub mod golden;
pub mod lattice;
pub mod modular;
pub mod pipeline;
pub mod quadrature;

pub use error::{Error, Result};
