//! Drawings of clustered graphs that allow exactly one kind of crossing.
//!
//! A clustered graph ([`model::ClusteredGraph`]) is a graph plus a tree of
//! nested vertex sets, each drawn as a region. Crossings come in three kinds:
//! edge-edge, edge-region and region-region. This crate builds drawings that
//! use only one kind ([`draw::construct_a00`], [`draw::construct_0b0`],
//! [`rr::construct_00c`]), counts their crossings, and decides when a
//! region-region-only drawing exists ([`rr::test_rr_biconnected`], with
//! [`rr::oracle_test_rr`] as an exhaustive cross-check).
//!
//! The guide in `book/` walks through the concepts with runnable examples.

pub mod constraints;
pub mod draw;
pub mod embedding;
pub mod graph;
pub mod generators;
pub mod model;
pub mod rr;
pub mod spqr;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/clustered-graphs.md")]
    mod chapter1 {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    mod chapter2 {}
    #[doc = include_str!("../../../book/src/spqr.md")]
    mod chapter3 {}
    #[doc = include_str!("../../../book/src/constraints.md")]
    mod chapter4 {}
    #[doc = include_str!("../../../book/src/rr-feasibility.md")]
    mod chapter5 {}
    #[doc = include_str!("../../../book/src/drawings.md")]
    mod chapter6 {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod chapter7 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod chapter8 {}
}
