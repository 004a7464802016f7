//! Dispersion models DM(μ, σ²) with density a(y; σ²) exp{-d(y; μ) / (2σ²)}.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: log-gamma, log-beta, |Γ(x+iy)|², Bessel I₀ and K_ν.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration on finite and
//!   infinite intervals, plus cumulative integrals on a grid.
//! * [`deviance`]: the unit-deviance abstraction: axiom checks, diagonal
//!   derivatives by Richardson-extrapolated finite differences, the unit
//!   variance function and the saddlepoint density.
//! * [`catalog`]: sixteen concrete dispersion models with exact
//!   log-densities, closed-form diagonal derivatives and limit constants.
//! * [`asymptotics`]: moderate-deviation sequences x_σ, density ratios
//!   against the normal limit, convergence reports, CDF distances and
//!   saddlepoint uniformity sweeps.

// `!(a < b)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod catalog;
pub mod deviance;
pub mod error;
mod numeric;
pub mod quadrature;
pub mod specfun;

pub use asymptotics::{
    AsymptoticScenario, Branch, DensityRatio, LimitReport, LimitRow, DEFAULT_LIMIT_TOLERANCE,
};
pub use catalog::{
    lookup, lookup_with, CatalogEntry, ClassFlags, Family, LimitConstant, ParameterMap,
    ShapeParams, TableComparison, TableStatus,
};
pub use deviance::{DiagonalDerivatives, OpenInterval, Support, UnitDeviance};
pub use error::{Error, Result};
pub use quadrature::{IntervalKind, QuadratureOptions, QuadratureResult};
pub use specfun::SpecialValue;
