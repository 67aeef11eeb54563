//! Finite loops as Cayley tables, Moufang structure theory, and exhaustive
//! search for half-isomorphisms.
//!
//! * [`loop_table`]: the table representation, divisions, inverses, powers
//!   and the loop file formats.
//! * [`identities`]: group, commutative, Moufang, diassociative and
//!   automorphic tests with reproducible witnesses.
//! * [`structure`]: generated subloops, the nucleus, normality, quotients and
//!   the squaring map on a quotient.
//! * [`halfmorph`]: classification and search of half-homomorphisms.
//! * [`scott`]: Scott triples and the catalog sweep.
//! * [`catalog`]: named loops and exhaustive small-order enumeration.

pub mod catalog;
pub mod error;
pub mod halfmorph;
pub mod identities;
pub mod loop_table;
pub mod scott;
pub mod structure;

pub use error::{Error, Result};
pub use loop_table::{parse_loop, serialize_loop, Element, LoopTable};
