//! Unit deviances: evaluation, axiom checks, diagonal derivatives, the unit
//! variance function and the saddlepoint density.
//!
//! Deviances are treated as black boxes. Closed-form diagonal derivatives
//! may be attached; every operation falls back to Richardson-extrapolated
//! central differences when they are absent.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::IntervalKind;

/// Support C of a dispersion model.
pub type Support = IntervalKind;

type DevianceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type DiagonalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Open interval (lower, upper); either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpenInterval {
    pub lower: f64,
    pub upper: f64,
}

impl OpenInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower < upper && !lower.is_nan() && !upper.is_nan() {
            Ok(Self { lower, upper })
        } else {
            Err(Error::domain(
                "OpenInterval::new",
                format!("need lower < upper, got ({lower}, {upper})"),
            ))
        }
    }

    pub const REAL_LINE: OpenInterval = OpenInterval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub const POSITIVE: OpenInterval = OpenInterval {
        lower: 0.0,
        upper: f64::INFINITY,
    };

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// A unit deviance d(y; μ) on C × Ω.
#[derive(Clone)]
pub struct UnitDeviance {
    name: String,
    support: Support,
    omega: OpenInterval,
    d: DevianceFn,
    diagonal: BTreeMap<u32, DiagonalFn>,
}

impl fmt::Debug for UnitDeviance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitDeviance")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("omega", &self.omega)
            .field(
                "closed_form_orders",
                &self.diagonal.keys().collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl UnitDeviance {
    /// Ω must lie inside C.
    pub fn new<F>(
        name: impl Into<String>,
        support: Support,
        omega: OpenInterval,
        d: F,
    ) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if omega.lower < support.lower() || omega.upper > support.upper() {
            return Err(Error::domain(
                "UnitDeviance::new",
                format!("parameter interval {omega} is not inside the support {support}"),
            ));
        }
        Ok(Self {
            name: name.into(),
            support,
            omega,
            d: Arc::new(d),
            diagonal: BTreeMap::new(),
        })
    }

    /// Attach the closed form of ∂ⁿ_y d(μ₀; μ₀) as a function of μ₀.
    pub fn with_diagonal<F>(mut self, order: u32, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.diagonal.insert(order, Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn omega(&self) -> OpenInterval {
        self.omega
    }

    /// Whether `y` lies in C. The lower end of a bounded support is
    /// included so that circular supports such as [0, 2π) behave.
    pub fn in_support(&self, y: f64) -> bool {
        match self.support {
            IntervalKind::Finite { a, b } => {
                y >= a && y < b && (y > a || self.support_closed_below())
            }
            _ => self.support.contains(y),
        }
    }

    fn support_closed_below(&self) -> bool {
        // A deviance finite at the lower end of a bounded support accepts it.
        let a = self.support.lower();
        let mu = self.mid_omega();
        (self.d)(a, mu).is_finite()
    }

    fn mid_omega(&self) -> f64 {
        match (self.omega.lower.is_finite(), self.omega.upper.is_finite()) {
            (true, true) => 0.5 * (self.omega.lower + self.omega.upper),
            (true, false) => self.omega.lower + 1.0,
            (false, true) => self.omega.upper - 1.0,
            (false, false) => 0.0,
        }
    }

    /// d(y; μ), checking y ∈ C and μ ∈ Ω.
    pub fn eval(&self, y: f64, mu: f64) -> Result<f64> {
        if !self.in_support(y) {
            return Err(Error::domain(
                "deviance",
                format!(
                    "{}: y = {y} is outside the support {}",
                    self.name, self.support
                ),
            ));
        }
        if !self.omega.contains(mu) {
            return Err(Error::domain(
                "deviance",
                format!(
                    "{}: mu = {mu} is outside the parameter interval {}",
                    self.name, self.omega
                ),
            ));
        }
        Ok((self.d)(y, mu))
    }

    pub(crate) fn eval_unchecked(&self, y: f64, mu: f64) -> f64 {
        (self.d)(y, mu)
    }

    pub fn closed_form_orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.diagonal.keys().copied()
    }

    /// Closed-form ∂ⁿ_y d(μ₀; μ₀) when attached.
    pub fn closed_form_diagonal(&self, order: u32, mu0: f64) -> Option<f64> {
        self.diagonal.get(&order).map(|f| f(mu0))
    }

    /// ∂ⁿ_y d(μ₀; μ₀) from the closed form, else by finite differences.
    pub fn diagonal_derivative(&self, order: u32, mu0: f64) -> Result<f64> {
        match self.closed_form_diagonal(order, mu0) {
            Some(v) => Ok(v),
            None => diagonal_derivative_fd(self, mu0, order),
        }
    }

    /// Diagonal derivatives of orders 2..=max_order together with V(μ₀).
    pub fn diagonal_derivatives(&self, mu0: f64, max_order: u32) -> Result<DiagonalDerivatives> {
        self.require_omega("diagonal_derivatives", mu0)?;
        let mut orders = BTreeMap::new();
        for order in 2..=max_order.max(2) {
            orders.insert(order, self.diagonal_derivative(order, mu0)?);
        }
        let d2 = orders[&2];
        if !(d2 > 0.0) {
            return Err(Error::Regularity {
                identity: "positive curvature",
                detail: format!(
                    "{}: second diagonal derivative {d2} at mu0 = {mu0}",
                    self.name
                ),
            });
        }
        Ok(DiagonalDerivatives {
            mu0,
            orders,
            variance: 2.0 / d2,
        })
    }

    fn require_omega(&self, operation: &'static str, mu: f64) -> Result<()> {
        if self.omega.contains(mu) {
            Ok(())
        } else {
            Err(Error::domain(
                operation,
                format!(
                    "{}: {mu} is outside the parameter interval {}",
                    self.name, self.omega
                ),
            ))
        }
    }
}

/// Diagonal derivatives ∂ⁿ_y d(μ₀; μ₀) for n = 2..k_max and V(μ₀) = 2/∂²d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalDerivatives {
    pub mu0: f64,
    pub orders: BTreeMap<u32, f64>,
    pub variance: f64,
}

impl DiagonalDerivatives {
    pub fn get(&self, order: u32) -> Option<f64> {
        self.orders.get(&order).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// |d(y; y)| exceeded the curvature-scaled zero tolerance.
    NonzeroOnDiagonal,
    /// d(y; μ) <= 0 with y != μ.
    NonPositiveOffDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub y: f64,
    pub mu: f64,
    pub value: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DevianceReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl DevianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check d(y; y) = 0 and d(y; μ) > 0 for y != μ on every grid pair.
pub fn check_unit_deviance(dev: &UnitDeviance, grid: &[(f64, f64)]) -> Result<DevianceReport> {
    let mut violations = Vec::new();
    for &(y, mu) in grid {
        let value = dev.eval(y, mu)?;
        if y == mu {
            let curvature = dev.diagonal_derivative(2, mu)?.abs();
            if !(value.abs() <= 1e-12 * (1.0 + curvature)) {
                violations.push(Violation {
                    y,
                    mu,
                    value,
                    kind: ViolationKind::NonzeroOnDiagonal,
                });
            }
        } else if !(value > 0.0) {
            violations.push(Violation {
                y,
                mu,
                value,
                kind: ViolationKind::NonPositiveOffDiagonal,
            });
        }
    }
    Ok(DevianceReport {
        checked: grid.len(),
        violations,
    })
}

/// n-th central difference h⁻ⁿ Σ (-1)^j C(n, j) f(x + (n/2 - j) h).
fn central_difference<F: Fn(f64) -> f64>(f: &F, x: f64, order: u32, h: f64) -> f64 {
    let n = order as i32;
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..=n {
        let offset = (0.5 * n as f64 - j as f64) * h;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f(x + offset);
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    sum / h.powi(n)
}

/// Two Richardson levels over steps h, 2h, 4h of an O(h²) estimator.
fn richardson<E: Fn(f64) -> f64>(estimate: E, h: f64) -> f64 {
    let d1 = estimate(h);
    let d2 = estimate(2.0 * h);
    let d4 = estimate(4.0 * h);
    let r1 = (4.0 * d1 - d2) / 3.0;
    let r2 = (4.0 * d2 - d4) / 3.0;
    (16.0 * r1 - r2) / 15.0
}

fn base_step(order: u32, x: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * (1.0 + x.abs())
}

const MAX_STEP_HALVINGS: u32 = 12;

/// Fraction of the distance to a support edge the widest stencil may span.
const EDGE_MARGIN: f64 = 0.125;

/// Largest step h = h₀/2ʲ whose widest stencil x ± reach·h spans at most
/// [`EDGE_MARGIN`] of the distance to each finite edge of (lower, upper).
fn feasible_step(
    operation: &'static str,
    x: f64,
    h0: f64,
    reach: f64,
    lower: f64,
    upper: f64,
) -> Result<f64> {
    let mut h = h0;
    for _ in 0..=MAX_STEP_HALVINGS {
        let span = reach * h;
        if span <= EDGE_MARGIN * (x - lower) && span <= EDGE_MARGIN * (upper - x) {
            return Ok(h);
        }
        h *= 0.5;
    }
    Err(Error::domain(
        operation,
        format!("no finite-difference stencil around {x} fits inside ({lower}, {upper})"),
    ))
}

/// Extent of the widest stencil used by [`richardson`], in units of h.
fn stencil_reach(order: u32) -> f64 {
    2.0 * order.max(1) as f64
}

/// ∂ⁿ_y d(y; μ₀) at y = μ₀ by central differences with Richardson
/// extrapolation. The step shrinks when the stencil would leave C.
pub fn diagonal_derivative_fd(dev: &UnitDeviance, mu0: f64, order: u32) -> Result<f64> {
    if order == 0 {
        return Err(Error::domain(
            "diagonal_derivative_fd",
            "order must be at least 1",
        ));
    }
    dev.require_omega("diagonal_derivative_fd", mu0)?;
    let support = dev.support();
    let h = feasible_step(
        "diagonal_derivative_fd",
        mu0,
        base_step(order, mu0),
        stencil_reach(order),
        support.lower(),
        support.upper(),
    )?;
    let f = |y: f64| dev.eval_unchecked(y, mu0);
    Ok(richardson(
        |step| central_difference(&f, mu0, order, step),
        h,
    ))
}

fn mu_derivative_fd(dev: &UnitDeviance, y: f64, mu0: f64, order: u32) -> Result<f64> {
    let omega = dev.omega();
    let h = feasible_step(
        "check_regularity",
        mu0,
        base_step(order, mu0),
        stencil_reach(order),
        omega.lower,
        omega.upper,
    )?;
    let f = |mu: f64| dev.eval_unchecked(y, mu);
    Ok(richardson(
        |step| central_difference(&f, mu0, order, step),
        h,
    ))
}

fn mixed_derivative_fd(dev: &UnitDeviance, mu0: f64) -> Result<f64> {
    let omega = dev.omega();
    let support = dev.support();
    let lower = omega.lower.max(support.lower());
    let upper = omega.upper.min(support.upper());
    let h = feasible_step(
        "check_regularity",
        mu0,
        base_step(2, mu0),
        stencil_reach(2),
        lower,
        upper,
    )?;
    let d = |y: f64, mu: f64| dev.eval_unchecked(y, mu);
    let estimate = |s: f64| {
        let half = 0.5 * s;
        (d(mu0 + half, mu0 + half) - d(mu0 + half, mu0 - half) - d(mu0 - half, mu0 + half)
            + d(mu0 - half, mu0 - half))
            / (s * s)
    };
    Ok(richardson(estimate, h))
}

/// V(μ₀) = 2 / ∂²d(μ₀; μ₀).
pub fn variance_function(dev: &UnitDeviance, mu0: f64) -> Result<f64> {
    dev.require_omega("variance_function", mu0)?;
    let d2 = dev.diagonal_derivative(2, mu0)?;
    if d2 > 0.0 && d2.is_finite() {
        Ok(2.0 / d2)
    } else {
        Err(Error::Regularity {
            identity: "positive curvature",
            detail: format!(
                "{}: second diagonal derivative {d2} at mu0 = {mu0}",
                dev.name()
            ),
        })
    }
}

pub const REGULARITY_RELATIVE_TOLERANCE: f64 = 1e-5;
pub const REGULARITY_FIRST_ORDER_TOLERANCE: f64 = 1e-8;

/// Finite-difference estimates of the diagonal identities of a regular
/// unit deviance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport {
    pub mu0: f64,
    pub d2_yy: f64,
    pub d2_mumu: f64,
    /// −∂²_{μy} d(μ₀; μ₀)
    pub neg_d2_muy: f64,
    pub d1_y: f64,
    pub d1_mu: f64,
    pub max_relative_gap: f64,
}

/// Check ∂²_yy = ∂²_μμ = −∂²_μy and ∂_y = ∂_μ = 0 on the diagonal.
pub fn check_regularity(dev: &UnitDeviance, mu0: f64) -> Result<RegularityReport> {
    dev.require_omega("check_regularity", mu0)?;
    let d2_yy = diagonal_derivative_fd(dev, mu0, 2)?;
    let d2_mumu = mu_derivative_fd(dev, mu0, mu0, 2)?;
    let neg_d2_muy = -mixed_derivative_fd(dev, mu0)?;
    let d1_y = diagonal_derivative_fd(dev, mu0, 1)?;
    let d1_mu = mu_derivative_fd(dev, mu0, mu0, 1)?;

    if !(d2_yy > 0.0) {
        return Err(Error::Regularity {
            identity: "positive curvature",
            detail: format!("{}: d2_yy = {d2_yy} at mu0 = {mu0}", dev.name()),
        });
    }
    let gap = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let gap_mumu = gap(d2_yy, d2_mumu);
    let gap_muy = gap(d2_yy, neg_d2_muy);
    if !(gap_mumu <= REGULARITY_RELATIVE_TOLERANCE) {
        return Err(Error::Regularity {
            identity: "d2_yy = d2_mumu",
            detail: format!("{}: {d2_yy} vs {d2_mumu} at mu0 = {mu0}", dev.name()),
        });
    }
    if !(gap_muy <= REGULARITY_RELATIVE_TOLERANCE) {
        return Err(Error::Regularity {
            identity: "d2_yy = -d2_muy",
            detail: format!("{}: {d2_yy} vs {neg_d2_muy} at mu0 = {mu0}", dev.name()),
        });
    }
    if !(d1_y.abs() <= REGULARITY_FIRST_ORDER_TOLERANCE) {
        return Err(Error::Regularity {
            identity: "d1_y = 0",
            detail: format!("{}: {d1_y} at mu0 = {mu0}", dev.name()),
        });
    }
    if !(d1_mu.abs() <= REGULARITY_FIRST_ORDER_TOLERANCE) {
        return Err(Error::Regularity {
            identity: "d1_mu = 0",
            detail: format!("{}: {d1_mu} at mu0 = {mu0}", dev.name()),
        });
    }
    Ok(RegularityReport {
        mu0,
        d2_yy,
        d2_mumu,
        neg_d2_muy,
        d1_y,
        d1_mu,
        max_relative_gap: gap_mumu.max(gap_muy),
    })
}

/// −½ ln(2πσ² V(y)) − d(y; μ)/(2σ²), defined for y ∈ Ω only.
pub fn saddlepoint_log_pdf(dev: &UnitDeviance, y: f64, mu: f64, sigma2: f64) -> Result<f64> {
    if !dev.omega().contains(y) {
        return Err(Error::domain(
            "saddlepoint_log_pdf",
            format!(
                "{}: y = {y} is outside the parameter interval {}; the approximation is defined on it only",
                dev.name(),
                dev.omega()
            ),
        ));
    }
    dev.require_omega("saddlepoint_log_pdf", mu)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::domain(
            "saddlepoint_log_pdf",
            format!("sigma2 = {sigma2} must be finite and positive"),
        ));
    }
    let v = variance_function(dev, y)?;
    let d = dev.eval_unchecked(y, mu);
    Ok(-0.5 * (2.0 * std::f64::consts::PI * sigma2 * v).ln() - d / (2.0 * sigma2))
}
