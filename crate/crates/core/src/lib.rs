//! Exact computation of the Łojasiewicz exponent of isolated surface and
//! plane-curve singularities from the Newton polyhedron of the defining
//! polynomial.
//!
//! ```
//! use newtloj::{engine::lojasiewicz, parser::parse_polynomial, lattice::Rational};
//!
//! let f = parse_polynomial("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5", 3).unwrap();
//! let report = lojasiewicz(&f).unwrap();
//! assert_eq!(report.exponent, Rational::new(13, 3));
//! assert_eq!(report.sufficiency_degree, 5);
//! ```

pub mod boundary;
pub mod classify;
pub mod engine;
pub mod lattice;
pub mod mixed_volume;
pub mod oracle;
pub mod par;
pub mod parser;
pub mod sample;
pub mod selftest;

use thiserror::Error;

pub use boundary::{build_boundary, Face, NewtonBoundary};
pub use engine::{lojasiewicz, ExponentReport};
pub use lattice::{Axis, ExponentVector, Rational, WeightVector};
pub use parser::{parse_input, parse_polynomial, Support};

/// Any failure surfaced by the library, with its command-line exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] parser::ParseError),
    #[error("cannot read input: {0}")]
    Io(String),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Boundary(#[from] boundary::BoundaryError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error(transparent)]
    MixedVolume(#[from] mixed_volume::MixedVolumeError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Sample(#[from] sample::SampleError),
    #[error("{0}")]
    Precondition(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// 2 for unreadable input, 3 for violated preconditions, 4 for failed
    /// internal cross-checks.
    pub fn exit_code(&self) -> i32 {
        use classify::ClassifyError as C;
        use engine::EngineError as E;
        use mixed_volume::MixedVolumeError as M;
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::CrossCheck(_)
            | Error::Classify(C::CrossCheck(_))
            | Error::Engine(E::Classify(C::CrossCheck(_)))
            | Error::MixedVolume(M::CrossCheck(_)) => 4,
            _ => 3,
        }
    }
}
