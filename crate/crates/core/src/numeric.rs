//! Small cancellation-free building blocks for deviance formulas.

/// x - ln(1 + x), accurate for small |x|.
pub(crate) fn x_minus_ln1p(x: f64) -> f64 {
    if x.abs() < 0.05 {
        // Σ_{k>=2} (-1)^k x^k / k
        let mut sum = 0.0;
        let mut power = x;
        for k in 2..40 {
            power *= -x;
            let term = power / k as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        -sum
    } else {
        x - x.ln_1p()
    }
}

/// e^x - 1 - x, accurate for small |x|.
pub(crate) fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.05 {
        let mut sum = 0.0;
        let mut term = x;
        for k in 2..40 {
            term *= x / k as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// x - sin(x), accurate for small |x|.
pub(crate) fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // Σ_{k>=1} (-1)^{k+1} x^{2k+1} / (2k+1)!
        let x2 = x * x;
        let mut term = x;
        let mut sum = 0.0;
        for k in 1..30 {
            term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum -= term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x - x.sin()
    }
}

/// Normal log-density with mean `mean` and variance `variance`.
pub(crate) fn normal_log_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let z = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - z * z / (2.0 * variance)
}

/// Standard normal CDF.
pub(crate) fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}
