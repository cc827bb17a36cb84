//! Classical and quantum CSS codes built from hypergraph and homological
//! products, together with the automorphism gadgets they inherit.

pub mod error;
pub mod f2core;

pub use error::{Error, Result};
pub mod automorph;
pub mod classical;
pub mod css;
pub mod cupprod;
pub mod fixtures;
pub mod ftcheck;
pub mod gadgets;
pub mod graphs;
pub mod products;
pub mod search;
