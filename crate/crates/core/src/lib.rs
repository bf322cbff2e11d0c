//! Finite modal algebras of depth two, their Kripke frames, and a brute-force
//! verification harness for the structural results about them.

pub mod ba;
pub mod duality;
pub mod error;
pub mod frames;
pub mod logic;
pub mod operators;
pub mod semantics;
pub mod verdict;
pub mod verify;

pub use ba::{Element, ElementSet, FiniteBa};
pub use error::{Error, Result};
pub use frames::{EnumConstraints, Frame, FrameCondition};
pub use logic::{Formula, ParseError, Rule};
pub use operators::{ExtremalKind, ModalAlgebra, ModalOperator};
pub use verdict::Verdict;
