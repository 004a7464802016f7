//! Concrete dispersion models: exact log-densities, closed-form diagonal
//! derivatives, limit orders and small-dispersion limit constants.

use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

use crate::deviance::{OpenInterval, Support, UnitDeviance};
use crate::error::{Error, Result};
use crate::numeric::{expm1_minus_x, normal_log_pdf, x_minus_ln1p, x_minus_sin};
use crate::quadrature::IntervalKind;
use crate::specfun::{
    ln_abs_gamma_complex_sq, ln_bessel_i0_scaled_unchecked, ln_bessel_k_scaled_unchecked,
    ln_beta_unchecked, ln_gamma_complex_correction, ln_gamma_correction_unchecked,
    ln_gamma_unchecked,
};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Relative size below which a third diagonal derivative counts as zero.
const ZERO_DERIVATIVE_TOLERANCE: f64 = 1e-10;

/// Above this precision the GHS normalizer switches to its Stirling form.
const GHS_STIRLING_MIN_LAMBDA: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Normal,
    StudentT,
    GeneralizedStudentT,
    Gamma,
    ReciprocalGamma,
    LogGamma,
    Ghs,
    InverseGaussian,
    ReciprocalInverseGaussian,
    Hyperbola,
    Hyperbolic,
    Simplex,
    VonMises,
    Leipnik,
    TransformedLeipnik,
    GigModified,
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::Normal,
        Family::StudentT,
        Family::GeneralizedStudentT,
        Family::Gamma,
        Family::ReciprocalGamma,
        Family::LogGamma,
        Family::Ghs,
        Family::InverseGaussian,
        Family::ReciprocalInverseGaussian,
        Family::Hyperbola,
        Family::Hyperbolic,
        Family::Simplex,
        Family::VonMises,
        Family::Leipnik,
        Family::TransformedLeipnik,
        Family::GigModified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::StudentT => "student_t",
            Family::GeneralizedStudentT => "generalized_student_t",
            Family::Gamma => "gamma",
            Family::ReciprocalGamma => "reciprocal_gamma",
            Family::LogGamma => "log_gamma",
            Family::Ghs => "ghs",
            Family::InverseGaussian => "inverse_gaussian",
            Family::ReciprocalInverseGaussian => "reciprocal_inverse_gaussian",
            Family::Hyperbola => "hyperbola",
            Family::Hyperbolic => "hyperbolic",
            Family::Simplex => "simplex",
            Family::VonMises => "von_mises",
            Family::Leipnik => "leipnik",
            Family::TransformedLeipnik => "transformed_leipnik",
            Family::GigModified => "gig_modified",
        }
    }

    pub fn from_name(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownEntry {
                name: name.to_string(),
                valid: valid_names(),
            })
    }

    /// Lowest order with a generically nonvanishing diagonal derivative.
    pub fn limit_order(self) -> u32 {
        match self {
            Family::Normal
            | Family::StudentT
            | Family::GeneralizedStudentT
            | Family::Hyperbolic
            | Family::VonMises => 4,
            _ => 3,
        }
    }

    pub fn class_flags(self) -> ClassFlags {
        ClassFlags {
            proper_dm: self != Family::Ghs,
            exponential_dm: matches!(
                self,
                Family::Normal | Family::Gamma | Family::InverseGaussian | Family::Ghs
            ),
        }
    }

    pub fn parameter_map(self) -> ParameterMap {
        match self {
            Family::Normal | Family::InverseGaussian | Family::Simplex | Family::VonMises => {
                ParameterMap::Sigma2
            }
            Family::StudentT => ParameterMap::DegreesOfFreedom,
            Family::GeneralizedStudentT => ParameterMap::ShapeR,
            Family::Hyperbolic => ParameterMap::HalfPrecision,
            _ => ParameterMap::Precision,
        }
    }

    /// Interior μ₀ used by default: away from derivative zero crossings.
    pub fn default_mu0(self) -> f64 {
        match self {
            Family::Gamma
            | Family::InverseGaussian
            | Family::ReciprocalInverseGaussian
            | Family::Hyperbola
            | Family::ReciprocalGamma
            | Family::GigModified => 1.0,
            Family::Simplex | Family::TransformedLeipnik | Family::Leipnik => 0.3,
            Family::Ghs => 0.5,
            Family::VonMises => PI,
            Family::Normal
            | Family::StudentT
            | Family::GeneralizedStudentT
            | Family::LogGamma
            | Family::Hyperbolic => 0.0,
        }
    }

    /// Five interior μ₀ values spread over Ω.
    pub fn interior_mu0_grid(self) -> [f64; 5] {
        match self {
            Family::Normal
            | Family::StudentT
            | Family::GeneralizedStudentT
            | Family::LogGamma
            | Family::Hyperbolic => [-1.5, -0.5, 0.0, 0.7, 2.0],
            Family::Ghs => [-1.5, -0.4, 0.5, 1.0, 2.5],
            Family::Gamma
            | Family::ReciprocalGamma
            | Family::InverseGaussian
            | Family::ReciprocalInverseGaussian
            | Family::Hyperbola
            | Family::GigModified => [0.4, 0.8, 1.0, 2.0, 3.5],
            Family::Simplex | Family::TransformedLeipnik => [0.15, 0.3, 0.45, 0.6, 0.85],
            Family::Leipnik => [-0.6, -0.2, 0.3, 0.5, 0.8],
            Family::VonMises => [1.0, 2.0, PI, 4.0, 5.3],
        }
    }

    /// A compact rectangle side inside Ω used for grid checks.
    pub fn compact(self) -> (f64, f64) {
        match self {
            Family::Normal
            | Family::StudentT
            | Family::GeneralizedStudentT
            | Family::LogGamma
            | Family::Hyperbolic
            | Family::Ghs => (-3.0, 3.0),
            Family::Gamma
            | Family::ReciprocalGamma
            | Family::InverseGaussian
            | Family::ReciprocalInverseGaussian
            | Family::Hyperbola
            | Family::GigModified => (0.2, 5.0),
            Family::Simplex | Family::TransformedLeipnik => (0.05, 0.95),
            Family::Leipnik => (-0.9, 0.9),
            Family::VonMises => (0.5, 5.8),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn valid_names() -> String {
    Family::ALL
        .iter()
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassFlags {
    pub proper_dm: bool,
    pub exponential_dm: bool,
}

/// How σ² relates to the native parameter of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterMap {
    /// Parameterised by σ² directly.
    Sigma2,
    /// σ² = 1/λ.
    Precision,
    /// σ² = 1/(n + 1), n > 0 degrees of freedom.
    DegreesOfFreedom,
    /// σ² = 1/(r + 1), r > 0.
    ShapeR,
    /// σ² = 1/(2λ).
    HalfPrecision,
}

impl ParameterMap {
    pub fn native_symbol(self) -> &'static str {
        match self {
            ParameterMap::Sigma2 => "sigma2",
            ParameterMap::Precision | ParameterMap::HalfPrecision => "lambda",
            ParameterMap::DegreesOfFreedom => "n",
            ParameterMap::ShapeR => "r",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ParameterMap::Sigma2 => "sigma2",
            ParameterMap::Precision => "sigma2 = 1/lambda",
            ParameterMap::DegreesOfFreedom => "sigma2 = 1/(n+1)",
            ParameterMap::ShapeR => "sigma2 = 1/(r+1)",
            ParameterMap::HalfPrecision => "sigma2 = 1/(2*lambda)",
        }
    }

    pub fn sigma2_from_native(self, native: f64) -> Result<f64> {
        if !(native > 0.0 && native.is_finite()) {
            return Err(Error::domain(
                "parameter map",
                format!(
                    "{} = {native} must be finite and positive",
                    self.native_symbol()
                ),
            ));
        }
        Ok(match self {
            ParameterMap::Sigma2 => native,
            ParameterMap::Precision => 1.0 / native,
            ParameterMap::DegreesOfFreedom | ParameterMap::ShapeR => 1.0 / (native + 1.0),
            ParameterMap::HalfPrecision => 0.5 / native,
        })
    }

    pub fn native_from_sigma2(self, sigma2: f64) -> f64 {
        match self {
            ParameterMap::Sigma2 => sigma2,
            ParameterMap::Precision => 1.0 / sigma2,
            ParameterMap::DegreesOfFreedom | ParameterMap::ShapeR => 1.0 / sigma2 - 1.0,
            ParameterMap::HalfPrecision => 0.5 / sigma2,
        }
    }
}

/// Shape parameters fixed at lookup: `s` for the generalized t, `a` for
/// the modified GIG and `b` for the hyperbolic family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeParams {
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self {
            s: 2.0,
            a: 0.5,
            b: 0.0,
        }
    }
}

/// exp(−β ∂ᵏd(μ₀; μ₀) / (2·k!)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitConstant {
    pub k: u32,
    pub beta: f64,
    pub dkd: f64,
    pub value: f64,
    /// The order was raised above the family default order because the
    /// third derivative vanishes at this μ₀.
    pub elevated: bool,
}

impl LimitConstant {
    pub fn new(k: u32, beta: f64, dkd: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(
                "limit_constant",
                format!("beta = {beta} must be finite and >= 0"),
            ));
        }
        let factorial: f64 = (1..=k).map(f64::from).product();
        let value = if beta == 0.0 {
            1.0
        } else {
            (-beta * dkd / (2.0 * factorial)).exp()
        };
        Ok(Self {
            k,
            beta,
            dkd,
            value,
            elevated: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TableStatus {
    Match,
    Discrepancy,
    /// The family carries no printed constant (the normal baseline).
    NotTabulated,
}

impl fmt::Display for TableStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableStatus::Match => "MATCH",
            TableStatus::Discrepancy => "DISCREPANCY",
            TableStatus::NotTabulated => "NOT_TABULATED",
        })
    }
}

/// Printed per-family constant compared with the one derived from the
/// closed-form diagonal derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableComparison {
    pub entry: &'static str,
    pub mu0: f64,
    pub beta: f64,
    pub status: TableStatus,
    pub derived: LimitConstant,
    pub derived_formula: &'static str,
    pub printed_formula: Option<&'static str>,
    pub printed_value: Option<f64>,
}

/// Entry metadata in its JSON shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryMetadata {
    pub name: &'static str,
    pub support: IntervalKind,
    pub parameter_map: &'static str,
    pub variance_formula_text: &'static str,
    pub k: u32,
    pub class_flags: ClassFlags,
}

/// A named dispersion model.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    family: Family,
    shapes: ShapeParams,
    deviance: UnitDeviance,
}

/// Entry with default shape parameters.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    CatalogEntry::new(Family::from_name(name)?, ShapeParams::default())
}

pub fn lookup_with(name: &str, shapes: ShapeParams) -> Result<CatalogEntry> {
    CatalogEntry::new(Family::from_name(name)?, shapes)
}

/// All sixteen entries with default shape parameters, in catalog order.
pub fn all_entries() -> Vec<CatalogEntry> {
    Family::ALL
        .into_iter()
        .map(|f| CatalogEntry::new(f, ShapeParams::default()).expect("default shapes are valid"))
        .collect()
}

fn check_shapes(family: Family, shapes: &ShapeParams) -> Result<()> {
    match family {
        Family::GeneralizedStudentT if !(shapes.s > 0.0 && shapes.s.is_finite()) => {
            Err(Error::domain(
                "lookup",
                format!("generalized_student_t needs s > 0, got {}", shapes.s),
            ))
        }
        Family::GigModified if !(-1.0..=1.0).contains(&shapes.a) => Err(Error::domain(
            "lookup",
            format!("gig_modified needs a in [-1, 1], got {}", shapes.a),
        )),
        // For b != 0 the printed deviance a√(1+u²) − b·u − a is not minimised
        // on the diagonal, so it is not a unit deviance.
        Family::Hyperbolic if shapes.b != 0.0 => Err(Error::domain(
            "lookup",
            format!(
                "hyperbolic is a dispersion model only for b = 0, got b = {}",
                shapes.b
            ),
        )),
        _ => Ok(()),
    }
}

fn real_line() -> (Support, OpenInterval) {
    (IntervalKind::Infinite, OpenInterval::REAL_LINE)
}

fn positive() -> (Support, OpenInterval) {
    (
        IntervalKind::SemiInfinite { a: 0.0 },
        OpenInterval::POSITIVE,
    )
}

fn unit() -> (Support, OpenInterval) {
    (
        IntervalKind::Finite { a: 0.0, b: 1.0 },
        OpenInterval {
            lower: 0.0,
            upper: 1.0,
        },
    )
}

fn ghs_deviance(y: f64, mu: f64) -> f64 {
    // θ = atan y − atan μ; d = 2yθ + 2 ln(cos θ − μ sin θ), rearranged so
    // every piece is O(θ²).
    let theta = (y - mu).atan2(1.0 + y * mu);
    let half = (0.5 * theta).sin();
    let sin_theta = theta.sin();
    let q = -2.0 * half * half - mu * sin_theta;
    2.0 * (y - mu) * theta + 2.0 * (mu * x_minus_sin(theta) - 2.0 * half * half - x_minus_ln1p(q))
}

fn gamma_deviance(y: f64, mu: f64) -> f64 {
    2.0 * x_minus_ln1p((y - mu) / mu)
}

fn reciprocal_gamma_deviance(y: f64, mu: f64) -> f64 {
    2.0 * x_minus_ln1p((mu - y) / y)
}

fn build_deviance(family: Family, shapes: &ShapeParams) -> Result<UnitDeviance> {
    let name = family.name();
    let dev = match family {
        Family::Normal => {
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| (y - mu) * (y - mu))?
                .with_diagonal(2, |_| 2.0)
                .with_diagonal(3, |_| 0.0)
                .with_diagonal(4, |_| 0.0)
        }
        Family::StudentT => {
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| ((y - mu) * (y - mu)).ln_1p())?
                .with_diagonal(2, |_| 2.0)
                .with_diagonal(3, |_| 0.0)
                .with_diagonal(4, |_| -12.0)
        }
        Family::GeneralizedStudentT => {
            let s = shapes.s;
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, move |y: f64, mu: f64| {
                ((y - mu) * (y - mu) / s).ln_1p()
            })?
            .with_diagonal(2, move |_| 2.0 / s)
            .with_diagonal(3, |_| 0.0)
            .with_diagonal(4, move |_| -12.0 / (s * s))
        }
        Family::Gamma => {
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, gamma_deviance)?
                .with_diagonal(2, |m: f64| 2.0 / (m * m))
                .with_diagonal(3, |m: f64| -4.0 / m.powi(3))
                .with_diagonal(4, |m: f64| 12.0 / m.powi(4))
        }
        Family::ReciprocalGamma => {
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, reciprocal_gamma_deviance)?
                .with_diagonal(2, |m: f64| 2.0 / (m * m))
                .with_diagonal(3, |m: f64| -8.0 / m.powi(3))
                .with_diagonal(4, |m: f64| 36.0 / m.powi(4))
        }
        Family::LogGamma => {
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| 2.0 * expm1_minus_x(y - mu))?
                .with_diagonal(2, |_| 2.0)
                .with_diagonal(3, |_| 2.0)
                .with_diagonal(4, |_| 2.0)
        }
        Family::Ghs => {
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, ghs_deviance)?
                .with_diagonal(2, |m: f64| 2.0 / (1.0 + m * m))
                .with_diagonal(3, |m: f64| -4.0 * m / (1.0 + m * m).powi(2))
                .with_diagonal(4, |m: f64| {
                    4.0 * (3.0 * m * m - 1.0) / (1.0 + m * m).powi(3)
                })
        }
        Family::InverseGaussian => {
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| {
                (y - mu) * (y - mu) / (y * mu * mu)
            })?
            .with_diagonal(2, |m: f64| 2.0 / m.powi(3))
            .with_diagonal(3, |m: f64| -6.0 / m.powi(4))
            .with_diagonal(4, |m: f64| 24.0 / m.powi(5))
        }
        Family::ReciprocalInverseGaussian => {
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| (y - mu) * (y - mu) / y)?
                .with_diagonal(2, |m: f64| 2.0 / m)
                .with_diagonal(3, |m: f64| -6.0 / (m * m))
                .with_diagonal(4, |m: f64| 24.0 / m.powi(3))
        }
        Family::Hyperbola => {
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| (y - mu) * (y - mu) / (y * mu))?
                .with_diagonal(2, |m: f64| 2.0 / (m * m))
                .with_diagonal(3, |m: f64| -6.0 / m.powi(3))
                .with_diagonal(4, |m: f64| 24.0 / m.powi(4))
        }
        Family::Hyperbolic => {
            let a = (1.0 + shapes.b * shapes.b).sqrt();
            let (c, o) = real_line();
            UnitDeviance::new(name, c, o, move |y: f64, mu: f64| {
                let u2 = (y - mu) * (y - mu);
                a * u2 / ((1.0 + u2).sqrt() + 1.0)
            })?
            .with_diagonal(2, move |_| a)
            .with_diagonal(3, |_| 0.0)
            .with_diagonal(4, move |_| -3.0 * a)
        }
        Family::Simplex => {
            let (c, o) = unit();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| {
                let u = y - mu;
                let m = mu * (1.0 - mu);
                u * u / (y * (1.0 - y) * m * m)
            })?
            .with_diagonal(2, |m: f64| 2.0 / (m * (1.0 - m)).powi(3))
            .with_diagonal(3, |m: f64| 6.0 * (2.0 * m - 1.0) / (m * (1.0 - m)).powi(4))
            .with_diagonal(4, |m: f64| {
                24.0 * (3.0 * m * m - 3.0 * m + 1.0) / (m * (1.0 - m)).powi(5)
            })
        }
        Family::VonMises => {
            let support = IntervalKind::Finite {
                a: 0.0,
                b: 2.0 * PI,
            };
            let omega = OpenInterval {
                lower: 0.0,
                upper: 2.0 * PI,
            };
            UnitDeviance::new(name, support, omega, |y: f64, mu: f64| {
                let s = (0.5 * (y - mu)).sin();
                4.0 * s * s
            })?
            .with_diagonal(2, |_| 2.0)
            .with_diagonal(3, |_| 0.0)
            .with_diagonal(4, |_| -2.0)
        }
        Family::Leipnik => {
            let support = IntervalKind::Finite { a: -1.0, b: 1.0 };
            let omega = OpenInterval {
                lower: -1.0,
                upper: 1.0,
            };
            UnitDeviance::new(name, support, omega, |y: f64, mu: f64| {
                let u = y - mu;
                (u * u / ((1.0 - y) * (1.0 + y))).ln_1p()
            })?
            .with_diagonal(2, |m: f64| 2.0 / (1.0 - m * m))
            .with_diagonal(3, |m: f64| 12.0 * m / (1.0 - m * m).powi(2))
            .with_diagonal(4, |m: f64| {
                12.0 * (1.0 + 7.0 * m * m) / (1.0 - m * m).powi(3)
            })
        }
        Family::TransformedLeipnik => {
            let (c, o) = unit();
            UnitDeviance::new(name, c, o, |y: f64, mu: f64| {
                let u = y - mu;
                (u * u / (y * (1.0 - y))).ln_1p()
            })?
            .with_diagonal(2, |m: f64| 2.0 / (m * (1.0 - m)))
            .with_diagonal(3, |m: f64| 6.0 * (2.0 * m - 1.0) / (m * (1.0 - m)).powi(2))
            .with_diagonal(4, |m: f64| {
                12.0 * (7.0 * m * m - 7.0 * m + 2.0) / (m * (1.0 - m)).powi(3)
            })
        }
        Family::GigModified => {
            let a = shapes.a;
            let wg = 0.5 * (1.0 + a);
            let wr = 0.5 * (1.0 - a);
            let (c, o) = positive();
            UnitDeviance::new(name, c, o, move |y: f64, mu: f64| {
                let mut d = wg * gamma_deviance(y, mu);
                if wr != 0.0 {
                    d += wr * reciprocal_gamma_deviance(y, mu);
                }
                d
            })?
            .with_diagonal(2, |m: f64| 2.0 / (m * m))
            .with_diagonal(3, move |m: f64| -(6.0 - 2.0 * a) / m.powi(3))
            .with_diagonal(4, move |m: f64| (24.0 - 12.0 * a) / m.powi(4))
        }
    };
    Ok(dev)
}

/// ½ ln(λ/2π) − [ln Γ(λ) − Stirling(λ)]: the λ-part of the gamma-type
/// normalizers ln(λ^λ e^{−λ} / Γ(λ)).
fn ln_gamma_family_constant(lambda: f64) -> f64 {
    0.5 * (lambda / (2.0 * PI)).ln() - ln_gamma_correction_unchecked(lambda)
}

impl CatalogEntry {
    pub fn new(family: Family, shapes: ShapeParams) -> Result<Self> {
        check_shapes(family, &shapes)?;
        let deviance = build_deviance(family, &shapes)?;
        Ok(Self {
            family,
            shapes,
            deviance,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    pub fn shapes(&self) -> ShapeParams {
        self.shapes
    }

    /// Shape parameters relevant to this family as (symbol, value) pairs.
    pub fn fixed_shape_params(&self) -> Vec<(&'static str, f64)> {
        match self.family {
            Family::GeneralizedStudentT => vec![("s", self.shapes.s)],
            Family::GigModified => vec![("a", self.shapes.a)],
            Family::Hyperbolic => vec![("b", self.shapes.b), ("a", self.hyperbolic_a())],
            _ => Vec::new(),
        }
    }

    fn hyperbolic_a(&self) -> f64 {
        (1.0 + self.shapes.b * self.shapes.b).sqrt()
    }

    pub fn deviance(&self) -> &UnitDeviance {
        &self.deviance
    }

    pub fn support(&self) -> Support {
        self.deviance.support()
    }

    pub fn omega(&self) -> OpenInterval {
        self.deviance.omega()
    }

    pub fn parameter_map(&self) -> ParameterMap {
        self.family.parameter_map()
    }

    pub fn limit_order(&self) -> u32 {
        self.family.limit_order()
    }

    pub fn class_flags(&self) -> ClassFlags {
        self.family.class_flags()
    }

    pub fn default_mu0(&self) -> f64 {
        self.family.default_mu0()
    }

    fn closed(&self, order: u32, mu0: f64) -> f64 {
        self.deviance
            .closed_form_diagonal(order, mu0)
            .expect("catalog deviances carry closed forms for orders 2..=4")
    }

    /// V(μ₀) from the closed form.
    pub fn variance(&self, mu0: f64) -> f64 {
        2.0 / self.closed(2, mu0)
    }

    pub fn d2(&self, mu0: f64) -> f64 {
        self.closed(2, mu0)
    }

    pub fn d3(&self, mu0: f64) -> f64 {
        self.closed(3, mu0)
    }

    pub fn d4(&self, mu0: f64) -> f64 {
        self.closed(4, mu0)
    }

    pub fn variance_formula_text(&self) -> &'static str {
        match self.family {
            Family::Normal | Family::StudentT | Family::LogGamma | Family::VonMises => "1",
            Family::GeneralizedStudentT => "s",
            Family::Gamma | Family::ReciprocalGamma | Family::Hyperbola | Family::GigModified => {
                "mu0^2"
            }
            Family::Ghs => "1+mu0^2",
            Family::InverseGaussian => "mu0^3",
            Family::ReciprocalInverseGaussian => "mu0",
            Family::Hyperbolic => "2/a",
            Family::Simplex => "mu0^3*(1-mu0)^3",
            Family::Leipnik => "1-mu0^2",
            Family::TransformedLeipnik => "mu0*(1-mu0)",
        }
    }

    pub fn metadata(&self) -> EntryMetadata {
        EntryMetadata {
            name: self.name(),
            support: self.support(),
            parameter_map: self.parameter_map().description(),
            variance_formula_text: self.variance_formula_text(),
            k: self.limit_order(),
            class_flags: self.class_flags(),
        }
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string(&self.metadata()).expect("metadata serializes")
    }

    /// Largest admissible σ² (exclusive), if bounded.
    pub fn max_sigma2(&self) -> Option<f64> {
        match self.family {
            Family::StudentT | Family::GeneralizedStudentT => Some(1.0),
            _ => None,
        }
    }

    fn check_sigma2(&self, sigma2: f64) -> Result<()> {
        let ok = sigma2 > 0.0 && sigma2.is_finite() && self.max_sigma2().is_none_or(|m| sigma2 < m);
        if ok {
            Ok(())
        } else {
            let map = self.parameter_map();
            Err(Error::domain(
                "exact_log_pdf",
                format!(
                    "{}: sigma2 = {sigma2} maps to an invalid {} ({})",
                    self.name(),
                    map.native_symbol(),
                    map.description()
                ),
            ))
        }
    }

    /// ln a(y; σ²).
    pub fn log_normalizer(&self, y: f64, sigma2: f64) -> Result<f64> {
        self.check_sigma2(sigma2)?;
        if !self.deviance.in_support(y) {
            return Err(Error::domain(
                "log_normalizer",
                format!(
                    "{}: y = {y} is outside the support {}",
                    self.name(),
                    self.support()
                ),
            ));
        }
        let lambda = 1.0 / sigma2;
        let value = match self.family {
            Family::Normal => -0.5 * (2.0 * PI * sigma2).ln(),
            Family::StudentT => -ln_beta_unchecked(0.5 * (lambda - 1.0), 0.5),
            Family::GeneralizedStudentT => {
                -0.5 * self.shapes.s.ln() - ln_beta_unchecked(0.5 * (lambda - 1.0), 0.5)
            }
            Family::Gamma | Family::ReciprocalGamma => ln_gamma_family_constant(lambda) - y.ln(),
            Family::LogGamma => ln_gamma_family_constant(lambda),
            Family::Ghs => ghs_log_normalizer(y, lambda)?,
            Family::InverseGaussian => -0.5 * (2.0 * PI * sigma2).ln() - 1.5 * y.ln(),
            Family::ReciprocalInverseGaussian => -0.5 * (2.0 * PI * sigma2).ln() - 0.5 * y.ln(),
            Family::Hyperbola => -(2f64.ln()) - ln_bessel_k_scaled_unchecked(0.0, lambda) - y.ln(),
            Family::Hyperbolic => {
                let a = self.hyperbolic_a();
                let l = 0.5 * lambda;
                -(2.0 * a).ln() - ln_bessel_k_scaled_unchecked(1.0, l) - l * (a - 1.0)
            }
            Family::Simplex => -0.5 * (2.0 * PI * sigma2).ln() - 1.5 * (y * (1.0 - y)).ln(),
            Family::VonMises => -LN_2PI - ln_bessel_i0_scaled_unchecked(lambda),
            Family::Leipnik => {
                -0.5 * ((1.0 - y) * (1.0 + y)).ln() - ln_beta_unchecked(0.5 * (lambda + 1.0), 0.5)
            }
            Family::TransformedLeipnik => {
                -0.5 * (y * (1.0 - y)).ln() - ln_beta_unchecked(0.5 * (lambda + 1.0), 0.5)
            }
            Family::GigModified => gig_log_normalizer(y, lambda, self.shapes.a),
        };
        Ok(value)
    }

    /// ln f(y; μ, σ²) = ln a(y; σ²) − d(y; μ)/(2σ²).
    pub fn exact_log_pdf(&self, y: f64, mu: f64, sigma2: f64) -> Result<f64> {
        let ln_a = self.log_normalizer(y, sigma2)?;
        let d = self.deviance.eval(y, mu)?;
        Ok(ln_a - d / (2.0 * sigma2))
    }

    /// Log-density of Z = (Y − μ₀)/σ with Y ~ DM(μ₀ + σμ, σ²).
    pub fn standardized_log_pdf(&self, x: f64, mu: f64, mu0: f64, sigma2: f64) -> Result<f64> {
        self.check_sigma2(sigma2)?;
        let sigma = sigma2.sqrt();
        let y = mu0 + sigma * x;
        if !self.deviance.in_support(y) {
            return Err(Error::domain(
                "standardized_log_pdf",
                format!(
                    "{}: x = {x} maps to y = {y}, outside the support {}",
                    self.name(),
                    self.support()
                ),
            ));
        }
        let m = mu0 + sigma * mu;
        if !self.omega().contains(m) {
            return Err(Error::domain(
                "standardized_log_pdf",
                format!(
                    "{}: mu0 + sigma*mu = {m} is outside {}",
                    self.name(),
                    self.omega()
                ),
            ));
        }
        if self.family == Family::Normal {
            // Standardizing N(m, σ²) gives N(μ, 1) exactly; skip the
            // cancellation in y − m.
            return Ok(normal_log_pdf(x, mu, 1.0));
        }
        Ok(sigma.ln() + self.exact_log_pdf(y, m, sigma2)?)
    }

    /// Limit constant at μ₀. The order is raised from 3 to 4 at points
    /// where the third derivative vanishes.
    pub fn limit_constant(&self, mu0: f64, beta: f64) -> Result<LimitConstant> {
        if !self.omega().contains(mu0) {
            return Err(Error::domain(
                "limit_constant",
                format!("{}: mu0 = {mu0} is outside {}", self.name(), self.omega()),
            ));
        }
        let d2 = self.d2(mu0);
        let d3 = self.d3(mu0);
        let d4 = self.d4(mu0);
        let k = self.limit_order();
        if k == 3 && d3.abs() > ZERO_DERIVATIVE_TOLERANCE * d2.powf(1.5) {
            return LimitConstant::new(3, beta, d3);
        }
        if d4.abs() > ZERO_DERIVATIVE_TOLERANCE * d2 * d2 || self.family == Family::Normal {
            let mut c = LimitConstant::new(4, beta, d4)?;
            c.elevated = k == 3;
            return Ok(c);
        }
        Err(Error::DegeneratePoint { mu0 })
    }

    /// Constant derived from the deviance as a formula in μ₀ and β.
    pub fn derived_formula(&self) -> &'static str {
        match self.family {
            Family::TransformedLeipnik => "exp(-beta*(2*mu0-1)/(2*(mu0*(1-mu0))^2))",
            Family::Hyperbolic => "exp(a*beta/16)",
            Family::Normal => "1",
            _ => self
                .printed_formula()
                .expect("every other family is tabulated"),
        }
    }

    /// The per-family constant as printed in the source table.
    pub fn printed_formula(&self) -> Option<&'static str> {
        Some(match self.family {
            Family::Normal => return None,
            Family::StudentT => "exp(beta/4)",
            Family::GeneralizedStudentT => "exp(beta/(4*s^2))",
            Family::Gamma => "exp(beta/(3*mu0^3))",
            Family::ReciprocalGamma => "exp(2*beta/(3*mu0^3))",
            Family::LogGamma => "exp(-beta/6)",
            Family::Ghs => "exp(beta*mu0/(3*(1+mu0^2)^2))",
            Family::InverseGaussian => "exp(beta/(2*mu0^4))",
            Family::ReciprocalInverseGaussian => "exp(beta/(2*mu0^2))",
            Family::Hyperbola => "exp(beta/(2*mu0^3))",
            Family::Hyperbolic => "exp(a*beta/4)",
            Family::Simplex => "exp(-beta*(mu0-0.5)/(mu0*(1-mu0))^4)",
            Family::VonMises => "exp(beta/24)",
            Family::Leipnik => "exp(-beta*mu0/(1-mu0^2)^2)",
            Family::TransformedLeipnik => "exp(-beta*(2*mu0-1)/(12*(mu0*(1-mu0))^2))",
            Family::GigModified => "exp((3-a)*beta/(6*mu0^3))",
        })
    }

    /// Value of [`printed_formula`](Self::printed_formula).
    pub fn printed_constant(&self, mu0: f64, beta: f64) -> Option<f64> {
        let m = mu0;
        let exponent = match self.family {
            Family::Normal => return None,
            Family::StudentT => beta / 4.0,
            Family::GeneralizedStudentT => beta / (4.0 * self.shapes.s * self.shapes.s),
            Family::Gamma => beta / (3.0 * m.powi(3)),
            Family::ReciprocalGamma => 2.0 * beta / (3.0 * m.powi(3)),
            Family::LogGamma => -beta / 6.0,
            Family::Ghs => beta * m / (3.0 * (1.0 + m * m).powi(2)),
            Family::InverseGaussian => beta / (2.0 * m.powi(4)),
            Family::ReciprocalInverseGaussian => beta / (2.0 * m * m),
            Family::Hyperbola => beta / (2.0 * m.powi(3)),
            Family::Hyperbolic => self.hyperbolic_a() * beta / 4.0,
            Family::Simplex => -beta * (m - 0.5) / (m * (1.0 - m)).powi(4),
            Family::VonMises => beta / 24.0,
            Family::Leipnik => -beta * m / (1.0 - m * m).powi(2),
            Family::TransformedLeipnik => {
                -beta * (2.0 * m - 1.0) / (12.0 * (m * (1.0 - m)).powi(2))
            }
            Family::GigModified => (3.0 - self.shapes.a) * beta / (6.0 * m.powi(3)),
        };
        Some(exponent.exp())
    }

    /// Compare the printed constant with the derived one; the derived value
    /// is authoritative.
    pub fn verify_against_printed_table(&self, mu0: f64, beta: f64) -> Result<TableComparison> {
        let derived = self.limit_constant(mu0, beta)?;
        let printed_value = self.printed_constant(mu0, beta);
        let status = match printed_value {
            None => TableStatus::NotTabulated,
            Some(p) if (p - derived.value).abs() <= 1e-12 * p.abs().max(derived.value.abs()) => {
                TableStatus::Match
            }
            Some(_) => TableStatus::Discrepancy,
        };
        Ok(TableComparison {
            entry: self.name(),
            mu0,
            beta,
            status,
            derived,
            derived_formula: self.derived_formula(),
            printed_formula: self.printed_formula(),
            printed_value,
        })
    }

    /// Integration range of the exact density.
    pub fn integration_interval(&self) -> IntervalKind {
        self.support()
    }
}

fn ghs_log_normalizer(y: f64, lambda: f64) -> Result<f64> {
    let ln1y2 = (y * y).ln_1p();
    if lambda < GHS_STIRLING_MIN_LAMBDA {
        let ln_mod = ln_abs_gamma_complex_sq(0.5 * lambda, 0.5 * lambda * y)?;
        Ok(
            lambda.ln() + (lambda - 2.0) * 2f64.ln() + ln_mod
                - PI.ln()
                - ln_gamma_unchecked(lambda)
                + lambda * (y * y.atan() - 0.5 * ln1y2),
        )
    } else {
        let corr = ln_gamma_complex_correction(0.5 * lambda, 0.5 * lambda * y)?;
        Ok(0.5 * (lambda / (2.0 * PI)).ln() - 0.5 * ln1y2 + 2.0 * corr
            - ln_gamma_correction_unchecked(lambda))
    }
}

fn gig_log_normalizer(y: f64, lambda: f64, a: f64) -> f64 {
    if a == 1.0 || a == -1.0 {
        return ln_gamma_family_constant(lambda) - y.ln();
    }
    let nu = lambda * a;
    let z = lambda * ((1.0 - a) * (1.0 + a)).sqrt();
    let ln_k_scaled = ln_bessel_k_scaled_unchecked(nu, z);
    0.5 * nu * ((1.0 + a) / (1.0 - a)).ln() - (lambda - z) - 2f64.ln() - ln_k_scaled - y.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deviance::{check_unit_deviance, diagonal_derivative_fd, variance_function};
    use crate::quadrature::integrate;
    use approx::assert_relative_eq;

    #[test]
    fn lookup_examples() {
        let t = lookup("student_t").unwrap();
        assert_eq!(t.limit_order(), 4);
        assert_eq!(t.variance(0.3), 1.0);
        assert_eq!(t.d4(0.0), -12.0);
        assert_relative_eq!(
            t.deviance().eval(1.0, 0.0).unwrap(),
            2f64.ln(),
            max_relative = 1e-15
        );

        let g = lookup("gamma").unwrap();
        assert_eq!(g.limit_order(), 3);
        assert_eq!(g.variance(2.0), 4.0);
        assert_eq!(g.d3(1.0), -4.0);
        let y: f64 = 3.0;
        let mu: f64 = 1.7;
        let printed = 2.0 * (y / mu - (y / mu).ln() - 1.0);
        assert_relative_eq!(
            g.deviance().eval(y, mu).unwrap(),
            printed,
            max_relative = 1e-14
        );
    }

    #[test]
    fn unknown_names_list_valid_entries() {
        match lookup("cauchy") {
            Err(Error::UnknownEntry { valid, .. }) => {
                assert!(valid.contains("student_t") && valid.contains("gig_modified"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_ranges_are_enforced() {
        let bad_a = ShapeParams {
            a: 1.5,
            ..ShapeParams::default()
        };
        assert!(lookup_with("gig_modified", bad_a).is_err());
        let bad_s = ShapeParams {
            s: 0.0,
            ..ShapeParams::default()
        };
        assert!(lookup_with("generalized_student_t", bad_s).is_err());
        let bad_b = ShapeParams {
            b: 0.5,
            ..ShapeParams::default()
        };
        assert!(lookup_with("hyperbolic", bad_b).is_err());
    }

    #[test]
    fn gig_with_a_one_is_gamma() {
        let gig = lookup_with(
            "gig_modified",
            ShapeParams {
                a: 1.0,
                ..ShapeParams::default()
            },
        )
        .unwrap();
        let gamma = lookup("gamma").unwrap();
        for &(y, mu, s2) in &[(0.3, 1.0, 0.1), (2.5, 1.7, 1e-3), (1.0, 1.0, 1e-8)] {
            assert_eq!(
                gig.deviance().eval(y, mu).unwrap(),
                gamma.deviance().eval(y, mu).unwrap()
            );
            assert_eq!(
                gig.exact_log_pdf(y, mu, s2).unwrap(),
                gamma.exact_log_pdf(y, mu, s2).unwrap()
            );
        }
        for &m in &[0.4, 1.0, 3.0] {
            assert_eq!(gig.d2(m), gamma.d2(m));
            assert_eq!(gig.d3(m), gamma.d3(m));
            assert_eq!(gig.d4(m), gamma.d4(m));
        }
    }

    #[test]
    fn normal_density_is_normal() {
        let n = lookup("normal").unwrap();
        assert_relative_eq!(
            n.exact_log_pdf(0.4, 0.4, 0.3).unwrap(),
            -0.5 * (2.0 * PI * 0.3f64).ln(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn student_t_with_one_degree_of_freedom_is_cauchy() {
        let t = lookup("student_t").unwrap();
        let sigma2 = ParameterMap::DegreesOfFreedom
            .sigma2_from_native(1.0)
            .unwrap();
        for &y in &[-3.0, 0.0, 0.7, 10.0] {
            let cauchy = 1.0 / (PI * (1.0 + (y - 0.5f64).powi(2)));
            assert_relative_eq!(
                t.exact_log_pdf(y, 0.5, sigma2).unwrap(),
                cauchy.ln(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for entry in all_entries() {
            let mu0 = entry.default_mu0();
            for &s2 in &[0.1, 0.02] {
                let r = integrate(
                    |y| {
                        entry
                            .exact_log_pdf(y, mu0, s2)
                            .map(f64::exp)
                            .unwrap_or(f64::NAN)
                    },
                    entry.integration_interval(),
                    1e-11,
                    1e-11,
                )
                .unwrap();
                assert!(
                    (r.value - 1.0).abs() < 1e-8,
                    "{} at {s2}: {}",
                    entry.name(),
                    r.value
                );
            }
        }
    }

    #[test]
    fn gamma_normalization_example() {
        let g = lookup("gamma").unwrap();
        let r = integrate(
            |y| g.exact_log_pdf(y, 2.0, 0.1).unwrap().exp(),
            IntervalKind::SemiInfinite { a: 0.0 },
            1e-12,
            1e-12,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ghs_normalizer_branches_agree() {
        for &y in &[-3.0, -0.2, 0.0, 0.5, 4.0] {
            let lambda = GHS_STIRLING_MIN_LAMBDA;
            let direct = {
                let ln_mod = ln_abs_gamma_complex_sq(0.5 * lambda, 0.5 * lambda * y).unwrap();
                lambda.ln() + (lambda - 2.0) * 2f64.ln() + ln_mod
                    - PI.ln()
                    - ln_gamma_unchecked(lambda)
                    + lambda * (y * f64::atan(y) - 0.5 * (y * y).ln_1p())
            };
            let stable = ghs_log_normalizer(y, lambda).unwrap();
            assert!(
                (direct - stable).abs() < 1e-11,
                "y = {y}: {direct} vs {stable}"
            );
        }
    }

    #[test]
    fn ghs_deviance_matches_printed_form() {
        let g = lookup("ghs").unwrap();
        for &(y, mu) in &[(0.5, -1.0), (3.0, 0.5), (-2.0, 2.0), (0.0, 4.0)] {
            let printed =
                2.0 * y * (f64::atan(y) - f64::atan(mu)) + ((1.0 + mu * mu) / (1.0 + y * y)).ln();
            assert_relative_eq!(
                g.deviance().eval(y, mu).unwrap(),
                printed,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        for entry in all_entries() {
            for mu0 in entry.family().interior_mu0_grid() {
                let d2 = entry.d2(mu0);
                for order in 2..=4 {
                    let closed = entry.deviance().closed_form_diagonal(order, mu0).unwrap();
                    let fd = diagonal_derivative_fd(entry.deviance(), mu0, order).unwrap();
                    let scale = closed.abs().max(d2.powf(order as f64 / 2.0));
                    assert!(
                        (closed - fd).abs() <= 1e-6 * scale,
                        "{} mu0={mu0} order {order}: {closed} vs {fd}",
                        entry.name()
                    );
                }
                assert_relative_eq!(
                    variance_function(entry.deviance(), mu0).unwrap(),
                    entry.variance(mu0),
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn axioms_hold_on_compacts() {
        for entry in all_entries() {
            let (lo, hi) = entry.family().compact();
            let pts: Vec<f64> = (0..12).map(|i| lo + (hi - lo) * i as f64 / 11.0).collect();
            let grid: Vec<(f64, f64)> = pts
                .iter()
                .flat_map(|&y| pts.iter().map(move |&m| (y, m)))
                .collect();
            let report = check_unit_deviance(entry.deviance(), &grid).unwrap();
            assert!(report.passed(), "{}: {:?}", entry.name(), report.violations);
        }
    }

    #[test]
    fn limit_constant_examples() {
        let t = lookup("student_t")
            .unwrap()
            .limit_constant(0.0, 1.0)
            .unwrap();
        assert_relative_eq!(t.value, 0.25f64.exp(), max_relative = 1e-15);
        let g = lookup("gamma").unwrap().limit_constant(1.0, 12.0).unwrap();
        assert_relative_eq!(g.value, 4f64.exp(), max_relative = 1e-15);
        let v = lookup("von_mises")
            .unwrap()
            .limit_constant(1.0, 24.0)
            .unwrap();
        assert_relative_eq!(v.value, 1f64.exp(), max_relative = 1e-15);
        assert_eq!(
            lookup("gamma")
                .unwrap()
                .limit_constant(1.0, 0.0)
                .unwrap()
                .value,
            1.0
        );
        assert!(lookup("gamma").unwrap().limit_constant(1.0, -1.0).is_err());
    }

    #[test]
    fn order_is_elevated_at_zero_crossings() {
        let s = lookup("simplex").unwrap().limit_constant(0.5, 1.0).unwrap();
        assert_eq!(s.k, 4);
        assert!(s.elevated);
        assert_eq!(s.dkd, 24.0 * 0.25 / 0.25f64.powi(5));
        let g = lookup("ghs").unwrap().limit_constant(0.0, 1.0).unwrap();
        assert_eq!((g.k, g.dkd), (4, -4.0));
        let n = lookup("normal").unwrap().limit_constant(0.0, 3.0).unwrap();
        assert_eq!(n.value, 1.0);
    }

    #[test]
    fn printed_table_examples() {
        let ig = lookup("inverse_gaussian")
            .unwrap()
            .verify_against_printed_table(1.0, 1.0)
            .unwrap();
        assert_eq!(ig.status, TableStatus::Match);
        assert_relative_eq!(ig.derived.value, 0.5f64.exp(), max_relative = 1e-15);

        let tl = lookup("transformed_leipnik")
            .unwrap()
            .verify_against_printed_table(0.25, 1.0)
            .unwrap();
        assert_eq!(tl.status, TableStatus::Discrepancy);
        let m: f64 = 0.25;
        let derived = (-(2.0 * m - 1.0) / (2.0 * (m * (1.0 - m)).powi(2))).exp();
        assert_relative_eq!(tl.derived.value, derived, max_relative = 1e-14);

        let hb = lookup("hyperbolic")
            .unwrap()
            .verify_against_printed_table(0.0, 1.0)
            .unwrap();
        assert_eq!(hb.status, TableStatus::Discrepancy);
        assert_relative_eq!(
            hb.derived.value,
            (1.0f64 / 16.0).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            hb.printed_value.unwrap(),
            0.25f64.exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn standardized_density_examples() {
        let n = lookup("normal").unwrap();
        let s2: f64 = 0.04;
        for &x in &[-2.0, 0.0, 1.3] {
            let v: f64 = 1.0;
            let expected = -0.5 * (2.0 * PI * v).ln() - x * x / (2.0 * v);
            assert_relative_eq!(
                n.standardized_log_pdf(x, 0.0, 0.7, s2).unwrap(),
                expected,
                max_relative = 1e-13
            );
        }
        let g = lookup("gamma").unwrap();
        let direct = 0.1f64.ln() + g.exact_log_pdf(1.0, 1.0, 0.01).unwrap();
        assert_eq!(g.standardized_log_pdf(0.0, 0.0, 1.0, 0.01).unwrap(), direct);
        assert!(g.standardized_log_pdf(-20.0, 0.0, 1.0, 0.01).is_err());
    }

    #[test]
    fn class_flags() {
        for name in [
            "simplex",
            "von_mises",
            "leipnik",
            "reciprocal_inverse_gaussian",
        ] {
            assert!(lookup(name).unwrap().class_flags().proper_dm, "{name}");
        }
        for name in ["gamma", "inverse_gaussian", "ghs"] {
            assert!(lookup(name).unwrap().class_flags().exponential_dm, "{name}");
        }
    }

    #[test]
    fn metadata_json_shape() {
        let json = lookup("student_t").unwrap().metadata_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in [
            "name",
            "support",
            "parameter_map",
            "variance_formula_text",
            "k",
            "class_flags",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["k"], 4);
        assert_eq!(v["variance_formula_text"], "1");
    }

    #[test]
    fn parameter_maps_round_trip() {
        for map in [
            ParameterMap::Sigma2,
            ParameterMap::Precision,
            ParameterMap::DegreesOfFreedom,
            ParameterMap::ShapeR,
            ParameterMap::HalfPrecision,
        ] {
            let s2 = map.sigma2_from_native(7.0).unwrap();
            assert_relative_eq!(map.native_from_sigma2(s2), 7.0, max_relative = 1e-15);
        }
        assert!(ParameterMap::Precision.sigma2_from_native(0.0).is_err());
        assert!(lookup("student_t")
            .unwrap()
            .exact_log_pdf(0.0, 0.0, 1.0)
            .is_err());
    }
}
