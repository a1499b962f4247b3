//! Exact deciders for proper, convergent and exterior sequences over
//! finitely presented tail spaces, together with the one-point
//! constructions and the sheaf-gluing checker built on top of them.

pub mod compactify;
pub mod error;
pub mod exteriority;
pub mod fixtures;
pub mod maps;
pub mod sequences;
pub mod sets;
pub mod sheaves;
pub mod spaces;

pub use error::{Error, Result};
pub use exteriority::{ExtSpace, Externology};
pub use maps::{FPMap, TailImage};
pub use sequences::{AffineInj, FPSeq, Thread};
pub use sets::{EvSet, PointId, PointRef, TailId, TailTrace, Universe};
pub use spaces::{RawSpace, SpacePres};
