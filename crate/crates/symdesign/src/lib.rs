//! Second-moment analysis of U(1)- and SU(d)-symmetric random quantum circuits.
//!
//! The crate builds the representation theory of `S_n` in Young's orthogonal
//! form ([`snrep`]), decomposes the qudit Hilbert space into symmetry sectors
//! ([`hilbert`]), assembles second-moment operators restricted to their
//! phase-filtered bases ([`moment`]), reads the resulting blocks as Markov
//! chains and checks the gap comparisons between them ([`markov`]), computes
//! Cayley-graph gaps of `S_n` ([`cayley`]), and cross-validates everything
//! against dense constructions and Monte Carlo sampling ([`oracle`]).
//! [`report`] glues the pieces into the pipeline driven by the command-line
//! tool.

pub mod cayley;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod markov;
pub mod moment;
pub mod oracle;
pub mod report;
pub mod snrep;

pub use error::{Error, Result};
