//! Grid hypergraph constructions for tight-tree Ramsey lower bounds.
//!
//! The crate builds the 3- and 4-uniform grid hypergraphs (and their
//! signed-lexicographic-order generalizations), certifies the structural
//! properties that admit finite checking, recognizes and embeds tight
//! r-trees, runs the exhaustive order-family search, and provides the
//! Turán-bound / random-deletion machinery.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod grid;
pub mod manifest;
pub mod search;
pub mod trees;

pub use error::{Error, Result};
pub use grid::{
    enumerate_edges, h3_spec, h4_spec, is_edge, signed_lex_compare, symmetric4_spec, t_edge,
    ConstructionSpec, GridPoint, GridTables, HyperEdge, LinkDigraphSpec, Sign, SignedLexOrder,
};

/// Maps a function over an index range, in parallel when the `parallel`
/// feature is enabled. Output order follows the input order either way.
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`], kept available for benchmarking the
/// parallel speedup.
pub fn map_indexed_seq<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}
