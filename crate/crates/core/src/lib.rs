//! Degreewise computer algebra for Segre products of weighted polynomial rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`]: windowed Hilbert series, Segre/Veronese constructions and
//!   local cohomology of Segre products at the level of Hilbert functions.
//! * [`numsgp`]: extended numerical semigroups, submonoids of `N x L` for a
//!   finite abelian group `L`.
//! * [`gradedlin`]: exact sparse linear algebra, polynomial complexes, their
//!   diagonal parts over a Segre product, minimal resolutions and Ext.
//! * [`quivers`]: quivers with multiplicities, endomorphism quivers computed
//!   from Hom spaces, and the two folding constructions.
//! * [`kronecker`]: Euler form combinatorics of the `n`-Kronecker quiver.
//! * [`cli`]: config parsing, cached batch jobs and reproduction recipes.

pub mod cli;
pub mod gradedlin;
pub mod hilbert;
pub mod kronecker;
pub mod numsgp;
pub mod quivers;

pub use hilbert::{DegreeVector, FieldSpec, HilbertSeries, WeightedRingSpec, Window};
