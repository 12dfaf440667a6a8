pub mod algebra;
pub mod brace;
pub mod classify;
pub mod error;
pub mod gf;
pub mod holomorph;
pub mod json;
pub mod matfp;
pub mod oracle;
pub mod vector;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldSpec, SquareClass};
pub use matfp::MatFp;
