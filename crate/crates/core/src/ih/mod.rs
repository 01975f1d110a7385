//! Simplicial intersection homology over `Q` and the Witt condition.
//!
//! A chain is `p̄`-allowable when its simplices meet each stratum closure of
//! codimension `c` in dimension at most `d - c + p̄(c)`. Intersection chains are
//! allowable chains with allowable boundary; their homology is computed by exact
//! rational elimination.

pub mod complex;
pub mod homology;
pub mod linalg;
pub mod triangulations;
pub mod witt;

pub use complex::{FilteredSimplicialComplex, FiltrationPiece, Simplex};
pub use homology::{
    chain_complex, homology, ih_betti, intersection_chain_complex, ChainComplexQ, Perversity,
    PerversityKind,
};
pub use witt::{witt_check, StratumVerdict, WittVerdict};
