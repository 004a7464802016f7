//! Moderate-deviation sequences x_σ and the density-to-normal ratios
//! along them.
//!
//! For a scenario (k, β, μ, μ₀) the sequence is
//! x_σ = μ + β^{1/k} σ^{(2−k)/k}, so that (x_σ − μ)ᵏ σ^{k−2} = β, and the
//! ratio f(x_σ; μ, σ²)/φ(x_σ; μ, V(μ₀)) of the standardized density to the
//! normal limit should tend to exp(−β ∂ᵏd(μ₀; μ₀) / (2·k!)).

use serde::Serialize;
use std::io::{self, Write};

use crate::catalog::{CatalogEntry, LimitConstant};
use crate::deviance::saddlepoint_log_pdf;
use crate::error::{Error, Result};
use crate::numeric::{normal_cdf, normal_log_pdf};
use crate::quadrature::{cdf_on_grid, IntervalKind};

/// Relative tolerance on the final ratio used when none is given.
pub const DEFAULT_LIMIT_TOLERANCE: f64 = 0.02;

/// Smallest σ² a schedule may reach.
pub const MIN_SIGMA2: f64 = 1e-10;

pub const LIMIT_CSV_HEADER: &str = "sigma2,x_sigma,ratio,predicted,abs_log_gap";

/// Number of trailing schedule points whose |log-gap| must not increase.
const TREND_WINDOW: usize = 4;

/// Grid size for [`saddlepoint_uniformity`].
pub const UNIFORMITY_GRID: usize = 200;

/// σ² = 10⁻¹, 10⁻², …, 10⁻⁸.
pub fn default_schedule() -> Vec<f64> {
    (1..=8).map(|e| 10f64.powi(-e)).collect()
}

/// Side of μ on which x_σ is placed. Only `Upper` is covered by the limit results;
/// `Lower` is an unverified extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticScenario {
    pub k: u32,
    pub beta: f64,
    pub mu: f64,
    pub mu0: f64,
    pub sigma2_schedule: Vec<f64>,
    pub branch: Branch,
}

impl AsymptoticScenario {
    pub fn new(k: u32, beta: f64, mu: f64, mu0: f64, sigma2_schedule: Vec<f64>) -> Result<Self> {
        if k < 3 {
            return Err(Error::domain(
                "AsymptoticScenario",
                format!("k = {k} must be at least 3"),
            ));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(
                "AsymptoticScenario",
                format!("beta = {beta} must be finite and nonnegative"),
            ));
        }
        if !mu.is_finite() || !mu0.is_finite() {
            return Err(Error::domain(
                "AsymptoticScenario",
                format!("mu = {mu}, mu0 = {mu0} must be finite"),
            ));
        }
        check_schedule(&sigma2_schedule)?;
        Ok(Self {
            k,
            beta,
            mu,
            mu0,
            sigma2_schedule,
            branch: Branch::Upper,
        })
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn x_sigma(&self, sigma2: f64) -> Result<f64> {
        x_sigma(self, sigma2)
    }
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::domain("sigma2 schedule", "schedule is empty"));
    }
    if let Some(bad) = schedule
        .iter()
        .find(|&&s| !(s.is_finite() && s >= MIN_SIGMA2))
    {
        return Err(Error::domain(
            "sigma2 schedule",
            format!("{bad} is not a finite value >= {MIN_SIGMA2}"),
        ));
    }
    for w in schedule.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::domain(
                "sigma2 schedule",
                format!(
                    "schedule must be strictly decreasing, found {} then {}",
                    w[0], w[1]
                ),
            ));
        }
    }
    Ok(())
}

/// x_σ = μ ± β^{1/k} σ^{(2−k)/k}.
pub fn x_sigma(scenario: &AsymptoticScenario, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::domain(
            "x_sigma",
            format!("sigma2 = {sigma2} must be finite and positive"),
        ));
    }
    if !(scenario.beta >= 0.0 && scenario.beta.is_finite()) {
        return Err(Error::domain(
            "x_sigma",
            format!("beta = {} must be finite and nonnegative", scenario.beta),
        ));
    }
    let k = f64::from(scenario.k);
    // (β / σ^{k−2})^{1/k} with σ^{k−2} = (σ²)^{(k−2)/2}
    let offset = (scenario.beta / sigma2.powf(0.5 * (k - 2.0))).powf(1.0 / k);
    Ok(match scenario.branch {
        Branch::Upper => scenario.mu + offset,
        Branch::Lower => scenario.mu - offset,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRatio {
    pub sigma2: f64,
    pub x_sigma: f64,
    pub log_ratio: f64,
    pub ratio: f64,
    /// `ratio` over- or underflowed; `log_ratio` is authoritative.
    pub overflow: bool,
}

/// f(x_σ; μ, σ²)/φ(x_σ; μ, V(μ₀)), formed as a log difference.
pub fn density_ratio(
    entry: &CatalogEntry,
    scenario: &AsymptoticScenario,
    sigma2: f64,
) -> Result<DensityRatio> {
    let x = x_sigma(scenario, sigma2)?;
    let log_ratio = log_density_ratio(entry, x, scenario.mu, scenario.mu0, sigma2)?;
    let ratio = log_ratio.exp();
    Ok(DensityRatio {
        sigma2,
        x_sigma: x,
        log_ratio,
        ratio,
        overflow: !ratio.is_finite() || (ratio == 0.0 && log_ratio.is_finite()),
    })
}

fn log_density_ratio(entry: &CatalogEntry, x: f64, mu: f64, mu0: f64, sigma2: f64) -> Result<f64> {
    let log_f = entry.standardized_log_pdf(x, mu, mu0, sigma2)?;
    let v = entry.variance(mu0);
    Ok(log_f - normal_log_pdf(x, mu, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub sigma2: f64,
    pub x_sigma: f64,
    pub ratio: f64,
    pub predicted: f64,
    pub abs_log_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub entry: String,
    pub scenario: AsymptoticScenario,
    pub predicted: LimitConstant,
    pub rows: Vec<LimitRow>,
    pub tolerance: f64,
    /// |ratio/predicted − 1| at the last schedule point.
    pub final_relative_gap: f64,
    /// |log-gap| is non-increasing over the last four schedule points.
    pub trend: bool,
    pub converged: bool,
}

impl LimitReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{LIMIT_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}",
                r.sigma2, r.x_sigma, r.ratio, r.predicted, r.abs_log_gap
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn predicted_constant(
    entry: &CatalogEntry,
    scenario: &AsymptoticScenario,
) -> Result<LimitConstant> {
    let base = entry.limit_constant(scenario.mu0, scenario.beta)?;
    if scenario.branch == Branch::Lower && scenario.k % 2 == 1 {
        // (x_σ − μ)ᵏ σ^{k−2} → −β for odd k on the lower branch.
        let mut c = LimitConstant::new(base.k, scenario.beta, -base.dkd)?;
        c.dkd = base.dkd;
        c.elevated = base.elevated;
        return Ok(c);
    }
    Ok(base)
}

fn check_hypotheses(
    entry: &CatalogEntry,
    scenario: &AsymptoticScenario,
    predicted: &LimitConstant,
) -> Result<()> {
    if scenario.k != predicted.k {
        return Err(Error::Configuration(format!(
            "{} at mu0 = {}: the lowest nonvanishing diagonal derivative has order {}, scenario asks for k = {}",
            entry.name(),
            scenario.mu0,
            predicted.k,
            scenario.k
        )));
    }
    if scenario.k >= 4 {
        for &s2 in &scenario.sigma2_schedule {
            let m = scenario.mu0 + s2.sqrt() * scenario.mu;
            if !entry.omega().contains(m) {
                continue;
            }
            let d3 = entry.d3(m);
            if d3.abs() > 1e-10 * entry.d2(m).powf(1.5) {
                return Err(Error::Configuration(format!(
                    "{}: k = {} needs a vanishing third derivative near mu0, but it is {d3} at {m}",
                    entry.name(),
                    scenario.k
                )));
            }
        }
    }
    Ok(())
}

/// Ratios along the schedule against the predicted constant.
pub fn verify_limit(
    entry: &CatalogEntry,
    scenario: &AsymptoticScenario,
    tolerance: f64,
) -> Result<LimitReport> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::domain(
            "verify_limit",
            format!("tolerance {tolerance} must be positive"),
        ));
    }
    check_schedule(&scenario.sigma2_schedule)?;
    let predicted = predicted_constant(entry, scenario)?;
    check_hypotheses(entry, scenario, &predicted)?;
    let log_predicted = predicted.value.ln();

    let rows = scenario
        .sigma2_schedule
        .iter()
        .map(|&s2| {
            let r = density_ratio(entry, scenario, s2)?;
            Ok(LimitRow {
                sigma2: s2,
                x_sigma: r.x_sigma,
                ratio: r.ratio,
                predicted: predicted.value,
                abs_log_gap: (r.log_ratio - log_predicted).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let last = rows.last().expect("schedule is nonempty");
    let final_relative_gap = (last.ratio / predicted.value - 1.0).abs();
    let tail = &rows[rows.len().saturating_sub(TREND_WINDOW)..];
    let trend = tail
        .windows(2)
        .all(|w| w[1].abs_log_gap <= w[0].abs_log_gap);
    Ok(LimitReport {
        entry: entry.name().to_string(),
        scenario: scenario.clone(),
        predicted,
        rows,
        tolerance,
        final_relative_gap,
        trend,
        converged: final_relative_gap <= tolerance && trend,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    ToZero,
    ToInfinity,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfiniteBetaReport {
    pub entry: String,
    pub k: u32,
    pub dkd: f64,
    /// (σ², x, log ratio) along x − μ = σ^{−(k−1)/k}.
    pub rows: Vec<(f64, f64, f64)>,
    /// Direction implied by the sign of ∂ᵏd(μ₀; μ₀).
    pub expected: Divergence,
    /// Direction of the last log ratios.
    pub observed: Divergence,
}

/// Diagnostic for β = ∞: along x − μ = σ^{−(k−1)/k} the product
/// (x − μ)ᵏ σ^{k−2} = σ^{−1} diverges and no finite constant exists.
pub fn infinite_beta_diagnostic(
    entry: &CatalogEntry,
    mu: f64,
    mu0: f64,
    schedule: &[f64],
) -> Result<InfiniteBetaReport> {
    check_schedule(schedule)?;
    let c = entry.limit_constant(mu0, 1.0)?;
    let k = f64::from(c.k);
    let rows = schedule
        .iter()
        .map(|&s2| {
            let x = mu + s2.powf(-0.5 * (k - 1.0) / k);
            Ok((s2, x, log_density_ratio(entry, x, mu, mu0, s2)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let expected = if c.dkd > 0.0 {
        Divergence::ToZero
    } else if c.dkd < 0.0 {
        Divergence::ToInfinity
    } else {
        Divergence::Undetermined
    };
    let tail = &rows[rows.len().saturating_sub(TREND_WINDOW)..];
    let observed = if tail.len() >= 2
        && tail.windows(2).all(|w| w[1].2 < w[0].2)
        && tail[tail.len() - 1].2 < 0.0
    {
        Divergence::ToZero
    } else if tail.len() >= 2
        && tail.windows(2).all(|w| w[1].2 > w[0].2)
        && tail[tail.len() - 1].2 > 0.0
    {
        Divergence::ToInfinity
    } else {
        Divergence::Undetermined
    };
    Ok(InfiniteBetaReport {
        entry: entry.name().to_string(),
        k: c.k,
        dkd: c.dkd,
        rows,
        expected,
        observed,
    })
}

/// Support of Z = (Y − μ₀)/σ.
fn z_interval(entry: &CatalogEntry, mu0: f64, sigma: f64) -> IntervalKind {
    let support = entry.support();
    let lo = (support.lower() - mu0) / sigma;
    let hi = (support.upper() - mu0) / sigma;
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => IntervalKind::Finite { a: lo, b: hi },
        (true, false) => IntervalKind::SemiInfinite { a: lo },
        _ => IntervalKind::Infinite,
    }
}

/// sup over a grid on μ ± 6√V(μ₀) of |CDF_Z(x) − Φ((x − μ)/√V(μ₀))|, with
/// Z = (Y − μ₀)/σ and Y ~ DM(μ₀ + σμ, σ²).
pub fn normal_cdf_distance(
    entry: &CatalogEntry,
    mu: f64,
    mu0: f64,
    sigma2: f64,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::domain(
            "normal_cdf_distance",
            "grid needs at least two points",
        ));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::domain(
            "normal_cdf_distance",
            format!("sigma2 = {sigma2} must be positive"),
        ));
    }
    let sigma = sigma2.sqrt();
    let sd = entry.variance(mu0).sqrt();
    let interval = z_interval(entry, mu0, sigma);
    let (z_lo, z_hi) = (interval.lower(), interval.upper());
    let mut lo = mu - 6.0 * sd;
    let mut hi = mu + 6.0 * sd;
    if lo <= z_lo {
        lo = z_lo + 1e-6 * (hi.min(z_hi) - z_lo);
    }
    if hi >= z_hi {
        hi = z_hi - 1e-6 * (z_hi - lo);
    }
    if !(lo < hi) {
        return Err(Error::domain(
            "normal_cdf_distance",
            "grid range is empty after clipping to the support",
        ));
    }
    let grid: Vec<f64> = (0..grid_size)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_size - 1) as f64)
        .collect();
    let density = |x: f64| {
        entry
            .standardized_log_pdf(x, mu, mu0, sigma2)
            .map(f64::exp)
            .unwrap_or(f64::NAN)
    };
    let cdf = cdf_on_grid(density, interval, &grid).map_err(|e| match e {
        Error::QuadratureNotConverged {
            context,
            value,
            error_estimate,
        } => Error::QuadratureNotConverged {
            context: format!(
                "{context} for the {} CDF at sigma2 = {sigma2}",
                entry.name()
            ),
            value,
            error_estimate,
        },
        other => other,
    })?;
    Ok(grid
        .iter()
        .zip(&cdf)
        .map(|(&x, &c)| (c - normal_cdf((x - mu) / sd)).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformityRow {
    pub sigma2: f64,
    pub sup_relative_gap: f64,
}

/// For each σ², sup over a 200-point grid on `compact` of
/// |f_exact / f_saddlepoint − 1| at position μ₀.
pub fn saddlepoint_uniformity(
    entry: &CatalogEntry,
    mu0: f64,
    compact: (f64, f64),
    schedule: &[f64],
) -> Result<Vec<UniformityRow>> {
    let (a, b) = compact;
    let omega = entry.omega();
    if !(a < b && omega.contains(a) && omega.contains(b)) {
        return Err(Error::domain(
            "saddlepoint_uniformity",
            format!("compact [{a}, {b}] must lie strictly inside {omega}"),
        ));
    }
    schedule
        .iter()
        .map(|&s2| {
            let mut sup: f64 = 0.0;
            for i in 0..UNIFORMITY_GRID {
                let y = a + (b - a) * i as f64 / (UNIFORMITY_GRID - 1) as f64;
                let exact = entry.exact_log_pdf(y, mu0, s2)?;
                let approx = saddlepoint_log_pdf(entry.deviance(), y, mu0, s2)?;
                sup = sup.max((exact - approx).exp_m1().abs());
            }
            Ok(UniformityRow {
                sigma2: s2,
                sup_relative_gap: sup,
            })
        })
        .collect()
}
