//! Numerical gauge calculus on trivial Hermitian bundles over the flat torus
//! and the punctured complex plane.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the aliases below fix `f64`, which every tolerance in
//! the test suites assumes.

pub mod algebra;
pub mod curves;
pub mod error;
pub mod gauge;
pub mod grid_forms;
pub mod holonomy;
pub mod matrix;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type AlgebraElement = algebra::AlgebraElement<f64>;
pub type PauliBasis = algebra::PauliBasis<f64>;
pub type CMatrix = matrix::CMatrix<f64>;
pub type LieForm = grid_forms::LieForm<f64>;
pub type VectorField = grid_forms::VectorField<f64>;
pub type Connection = gauge::Connection<f64>;
pub type CurvatureField = gauge::CurvatureField<f64>;
pub type ParametricPath = holonomy::ParametricPath<f64>;
pub type MeromorphicPotential = holonomy::MeromorphicPotential<f64>;
pub type AnalyticTorusPotential = holonomy::AnalyticTorusPotential<f64>;
pub type ConnectionCurve = curves::ConnectionCurve<f64>;
pub type PerturbationJets = curves::PerturbationJets<f64>;
