//! Coercivity certificates for sparse multivariate polynomials with rational
//! coefficients, decided from the Newton polytope at infinity.
//!
//! The entry point is [`certify`], which runs the full decision cascade and
//! returns a [`Certificate`]. The building blocks are public as well:
//! polynomial parsing ([`poly`]), exact vertex and face computations
//! ([`geometry`]), barycentric maps ([`barycentric`]), circuit numbers
//! ([`circuit`]) and a numeric cross-check ([`oracle`]).

pub mod barycentric;
pub mod certify;
pub mod circuit;
pub mod cli;
pub mod enclosure;
pub mod geometry;
pub mod lp;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod scan;

pub use barycentric::{build_map, minimal_barycentric, BarycentricMap, Representation};
pub use certify::{
    certify, construct_weights, posynomial_check, theorem_main_check, Certificate, CertifyOptions,
    HAlphaTable, MarginPolicy, Theorem, Verdict,
};
pub use circuit::{circuit_coercive, circuit_nonnegative, recognize_circuit, CircuitStructure};
pub use geometry::{analyze, vertex_set, NewtonAnalysis};
pub use poly::{parse_polynomial, Exponent, Polynomial, VarSpec};
pub use rational::Rational;
