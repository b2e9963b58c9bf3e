//! Equivariant degree engine for reversible second-order systems with
//! commensurate delays and symmetry group `O(2) × Γ × Z₂`.

pub mod analysis;
pub mod basicdeg;
pub mod bitset;
pub mod burnside;
pub mod chartab;
pub mod cyclotomic;
pub mod ddedeg;
pub mod error;
pub mod gamma;
pub mod o2gamma;
pub mod permgroup;

pub use error::{EqError, Result};
