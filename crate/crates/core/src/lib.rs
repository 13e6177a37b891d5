//! Numerical core for dependence estimation, cumulative-production volatility
//! and Parrondo-type ladder games.
//!
//! The crate is organised by engine:
//!
//! - [`numerics`]: grids, convolution, cumulants, digamma, saddle points, small eigenproblems
//! - [`infotheory`]: correlation measures, discrete entropies, histogram and KNN mutual information
//! - [`marketdata`]: OHLC ingestion, session returns, volatility asymmetry
//! - [`production`]: the cumulative-production model and its exact density recursion
//! - [`parrondo`]: master equations, transfer matrices, growth rates, two-envelope game

pub mod error;
pub mod infotheory;
pub mod marketdata;
pub mod numerics;
pub mod parrondo;
pub mod production;
pub mod sharding;

pub use error::{Error, Result};
