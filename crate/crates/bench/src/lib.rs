//! Workloads shared by the criterion benches and their smoke tests.

use dispersia::asymptotics::{default_schedule, verify_limit, AsymptoticScenario};
use dispersia::catalog::{lookup, CatalogEntry};
use dispersia::quadrature::integrate;
use dispersia::specfun::{bessel_k, ln_abs_gamma_complex_sq, ln_gamma};

/// Sum of ln Γ over a log-spaced grid on [1e-3, 1e8].
pub fn ln_gamma_sweep(n: usize) -> f64 {
    (0..n)
        .map(|i| {
            ln_gamma(1e-3 * 1e11f64.powf(i as f64 / (n - 1) as f64)).expect("positive argument")
        })
        .sum()
}

/// ln K_ν(x) at small, Debye-range and large arguments.
pub fn bessel_k_mix() -> f64 {
    [(0.0, 0.3), (1.0, 2.0), (0.5, 40.0), (30.0, 5.0), (1e4, 1e4)]
        .iter()
        .map(|&(nu, x)| bessel_k(nu, x).expect("x > 0").log_value)
        .sum()
}

pub fn complex_gamma_at_large_precision() -> f64 {
    ln_abs_gamma_complex_sq(5e7, 2.5e7).expect("not a pole")
}

/// ∫ exp(exact_log_pdf) for one entry at σ² = 0.1.
pub fn normalization(entry: &CatalogEntry) -> f64 {
    let mu0 = entry.default_mu0();
    let f = |y: f64| {
        entry
            .exact_log_pdf(y, mu0, 0.1)
            .map(f64::exp)
            .unwrap_or(f64::NAN)
    };
    integrate(f, entry.integration_interval(), 1e-12, 1e-10)
        .expect("finite integrand")
        .value
}

/// Final ratio of the gamma k = 3 run at μ₀ = 1, β = 1.
pub fn gamma_limit_run() -> f64 {
    let entry = lookup("gamma").expect("catalog entry");
    let scenario =
        AsymptoticScenario::new(3, 1.0, 0.0, 1.0, default_schedule()).expect("valid scenario");
    let report = verify_limit(&entry, &scenario, 0.02).expect("hypotheses hold");
    report.rows.last().expect("nonempty schedule").ratio
}
