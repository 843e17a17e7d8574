//! Exact triply-graded Molien series for finite complex reflection groups.

pub mod error;
pub mod derivforms;
pub mod exactnum;
pub mod formulas;
pub mod groups;
pub mod molien;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{Cyclotomic, Rational};
pub use qseries::{QTSLaurent, RationalForm, TSPoly};
