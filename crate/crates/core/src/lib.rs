//! Spectra of Jordan-Kronecker products `A⊗B + B⊗A`, their even/odd split,
//! interlacing checks, exact certificates and extremal constructions.

pub mod bases;
pub mod constructions;
pub mod dense;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod interlacing;
pub mod io;
pub mod reproduce;
pub mod search;
pub mod spectra;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use constructions::{fixture, generate, ladder, Family, Fixture, GeneratorSpec, Params};
pub use exact::{certify_skew_extremal, CounterexampleCertificate, Rational, RationalMatrix};
pub use interlacing::{check_interlacing, check_strong, check_weak, interlace_report, InterlaceReport};
pub use search::{run_search, Property, SearchConfig, SearchSummary, TrialRecord};
pub use spectra::{jordan_kron, spectrum_report, spectrum_split, Parity, SpectrumReport, SpectrumSplit, SymmetryClass};
