//! Modified Bessel functions I₀ and K_ν for real order.
//!
//! K_ν is split by order. Below [`DEBYE_MIN_ORDER`] the fractional part
//! μ ∈ [-1/2, 1/2) is evaluated with Temme's series (x <= 2) or Steed's
//! continued fraction (x > 2), and the integer part is reached by upward
//! recurrence, which is stable for K. At and above that order Debye's
//! uniform expansion is used; it is uniform in x, so there is no second
//! crossover.

use std::f64::consts::PI;

use super::gamma::temme_gammas;
use super::SpecialValue;
use crate::error::{Error, Result};

/// Orders at or above this use the uniform asymptotic expansion.
pub const DEBYE_MIN_ORDER: f64 = 25.0;

/// Crossover between Temme's series and the continued fraction.
const TEMME_SERIES_MAX_X: f64 = 2.0;

/// Crossover between the I₀ power series and its asymptotic expansion.
const I0_SERIES_MAX_X: f64 = 30.0;

const MAX_ITER: usize = 10_000;

/// Debye polynomials u_k(t), coefficients in ascending powers of t.
const DEBYE_U: [&[f64]; 11] = [
    &[1.0],
    &[0.0, 0.125, 0.0, -0.208_333_333_333_333_34],
    &[
        0.0,
        0.0,
        0.070_312_5,
        0.0,
        -0.401_041_666_666_666_7,
        0.0,
        0.334_201_388_888_888_9,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.073_242_187_5,
        0.0,
        -0.891_210_937_5,
        0.0,
        1.846_462_673_611_111_2,
        0.0,
        -1.025_812_596_450_617_3,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.112_152_099_609_375,
        0.0,
        -2.364_086_914_062_5,
        0.0,
        8.789_123_535_156_25,
        0.0,
        -11.207_002_616_222_994,
        0.0,
        4.669_584_423_426_247,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.227_108_001_708_984_38,
        0.0,
        -7.368_794_359_479_632,
        0.0,
        42.534_998_745_388_46,
        0.0,
        -91.818_241_543_240_02,
        0.0,
        84.636_217_674_600_73,
        0.0,
        -28.212_072_558_200_244,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.572_501_420_974_731_4,
        0.0,
        -26.491_430_486_951_554,
        0.0,
        218.190_511_744_211_6,
        0.0,
        -699.579_627_376_132_5,
        0.0,
        1_059.990_452_528,
        0.0,
        -765.252_468_141_181_7,
        0.0,
        212.570_130_039_217_13,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.727_727_502_584_457_4,
        0.0,
        -108.090_919_788_394_66,
        0.0,
        1_200.902_913_216_352_5,
        0.0,
        -5_305.646_978_613_403,
        0.0,
        11_655.393_336_864_534,
        0.0,
        -13_586.550_006_434_138,
        0.0,
        8_061.722_181_737_309,
        0.0,
        -1_919.457_662_318_407,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        6.074_042_001_273_483,
        0.0,
        -493.915_304_773_088,
        0.0,
        7_109.514_302_489_364,
        0.0,
        -41_192.654_968_897_55,
        0.0,
        122_200.464_983_017_46,
        0.0,
        -203_400.177_280_415_55,
        0.0,
        192_547.001_232_531_53,
        0.0,
        -96_980.598_388_637_52,
        0.0,
        20_204.291_330_966_15,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        24.380_529_699_556_064,
        0.0,
        -2_499.830_481_811_209_7,
        0.0,
        45_218.768_981_362_73,
        0.0,
        -331_645.172_484_563_6,
        0.0,
        1_268_365.273_321_624_8,
        0.0,
        -2_813_563.226_586_534,
        0.0,
        3_763_271.297_656_404,
        0.0,
        -2_998_015.918_538_106_6,
        0.0,
        1_311_763.614_662_977_2,
        0.0,
        -242_919.187_900_551_33,
    ],
    &[
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        110.017_140_269_246_74,
        0.0,
        -13_886.089_753_717_04,
        0.0,
        308_186.404_612_662_4,
        0.0,
        -2_785_618.128_086_454_7,
        0.0,
        13_288_767.166_421_818,
        0.0,
        -37_567_176.660_763_35,
        0.0,
        66_344_512.274_729_03,
        0.0,
        -74_105_148.211_532_65,
        0.0,
        50_952_602.492_664_64,
        0.0,
        -19_706_819.118_432_228,
        0.0,
        3_284_469.853_072_038,
    ],
];

fn check_argument(operation: &'static str, x: f64, allow_zero: bool) -> Result<()> {
    let ok = x.is_finite() && (x > 0.0 || (allow_zero && x == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::domain(
            operation,
            format!("invalid argument x = {x}"),
        ))
    }
}

/// ln(e^{-x} I₀(x)) for x >= 0.
pub(crate) fn ln_bessel_i0_scaled_unchecked(x: f64) -> f64 {
    if x <= I0_SERIES_MAX_X {
        ln_i0_scaled_series(x)
    } else {
        ln_i0_scaled_asymptotic(x)
    }
}

fn ln_i0_scaled_series(x: f64) -> f64 {
    {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..MAX_ITER {
            let mf = m as f64;
            term *= q / (mf * mf);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum.ln() - x
    }
}

fn ln_i0_scaled_asymptotic(x: f64) -> f64 {
    {
        // e^x / sqrt(2πx) Σ ((2k-1)!!)^2 / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_ITER {
            let odd = (2 * k - 1) as f64;
            let next = term * odd * odd / (k as f64 * 8.0 * x);
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum.ln() - 0.5 * (2.0 * PI * x).ln()
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<SpecialValue> {
    check_argument("bessel_i0", x, true)?;
    Ok(SpecialValue::from_log(ln_bessel_i0_scaled_unchecked(x) + x))
}

/// ln(e^{-x} I₀(x)).
pub fn ln_bessel_i0_scaled(x: f64) -> Result<f64> {
    check_argument("ln_bessel_i0_scaled", x, true)?;
    Ok(ln_bessel_i0_scaled_unchecked(x))
}

/// Scaled K_μ(x) and K_{μ+1}(x), both multiplied by e^x, for |μ| <= 1/2,
/// returned together with an extra log scale factor.
fn temme_pair_scaled(mu: f64, x: f64) -> (f64, f64, f64) {
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    if x <= TEMME_SERIES_MAX_X {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < f64::EPSILON {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < f64::EPSILON {
            1.0
        } else {
            e.sinh() / e
        };
        let (gam1, gam2) = temme_gammas(mu);
        let gampl = gam2 - mu * gam1;
        let gammi = gam2 + mu * gam1;
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * f64::EPSILON {
                break;
            }
        }
        let scale = x.exp();
        if xi2 > 1e100 {
            (sum * scale / xi2, sum1 * scale, xi2.ln())
        } else {
            (sum * scale, sum1 * xi2 * scale, 0.0)
        }
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * fi;
            c = -a * c / (fi + 1.0);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < f64::EPSILON {
                break;
            }
        }
        let h = a1 * h;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) * xi;
        (kmu, k1, 0.0)
    }
}

fn debye_sum(t: f64, nu: f64) -> f64 {
    let mut sum = 0.0;
    let mut inv_power = 1.0;
    let mut sign = 1.0;
    for coeffs in DEBYE_U {
        let mut poly = 0.0;
        for &c in coeffs.iter().rev() {
            poly = poly * t + c;
        }
        sum += sign * poly * inv_power;
        inv_power /= nu;
        sign = -sign;
    }
    sum
}

/// ln(e^x K_ν(x)) via Debye's uniform expansion, ν > 0.
fn ln_k_scaled_debye(nu: f64, x: f64) -> f64 {
    let z = x / nu;
    let root = z.hypot(1.0);
    let t = 1.0 / root;
    // x - ν η(z) with η = sqrt(1+z²) - asinh(1/z)
    let exponent = nu * ((1.0 / z).asinh() - 1.0 / (z + root));
    exponent + 0.5 * (PI / (2.0 * nu)).ln() - 0.5 * root.ln() + debye_sum(t, nu).ln()
}

pub(crate) fn ln_bessel_k_scaled_unchecked(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    if nu >= DEBYE_MIN_ORDER {
        ln_k_scaled_debye(nu, x)
    } else {
        ln_k_scaled_recurrence(nu, x)
    }
}

fn ln_k_scaled_recurrence(nu: f64, x: f64) -> f64 {
    let steps = (nu + 0.5).floor();
    let mu = nu - steps;
    let (mut kmu, mut k1, mut log_scale) = temme_pair_scaled(mu, x);
    let xi2 = 2.0 / x;
    for i in 1..=(steps as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
        if k1 > 1e250 {
            kmu /= k1;
            log_scale += k1.ln();
            k1 = 1.0;
        }
    }
    kmu.ln() + log_scale
}

/// ln(e^x K_ν(x)) for x > 0 and any finite real order.
pub fn ln_bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    check_argument("ln_bessel_k_scaled", x, false)?;
    if !nu.is_finite() {
        return Err(Error::domain(
            "ln_bessel_k_scaled",
            format!("non-finite order {nu}"),
        ));
    }
    Ok(ln_bessel_k_scaled_unchecked(nu, x))
}

/// Modified Bessel function of the second kind K_ν(x), x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<SpecialValue> {
    let scaled = ln_bessel_k_scaled(nu, x)?;
    Ok(SpecialValue::from_log(scaled - x))
}
