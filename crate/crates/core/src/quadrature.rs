//! Adaptive one-dimensional quadrature.
//!
//! Each panel is integrated with the 15-point Kronrod rule and its embedded
//! 7-point Gauss rule; the panel error is |K15 - G7|. The panel with the
//! largest error is bisected until the summed error meets the tolerance or
//! the panel budget is spent. Both rules are open, so integrands that are
//! singular at an endpoint are never evaluated there.
//!
//! Infinite ranges are mapped onto finite ones before integration:
//!
//! * `[a, ∞)`: x = a + t / (1 - t), t ∈ [0, 1)
//! * `(-∞, ∞)`: x = t / (1 - t²), t ∈ (-1, 1)
//! * `(-∞, b]` (cumulative integrals only): x = b - t / (1 - t)

use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Panel budget used when [`PANEL_BUDGET_ENV`] is not set.
pub const DEFAULT_PANEL_BUDGET: usize = 10_000;

/// Environment variable overriding the default panel budget.
pub const PANEL_BUDGET_ENV: &str = "DISPERSIA_PANEL_BUDGET";

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalKind {
    Finite { a: f64, b: f64 },
    SemiInfinite { a: f64 },
    Infinite,
}

impl IntervalKind {
    pub fn finite(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(IntervalKind::Finite { a, b })
        } else {
            Err(Error::domain(
                "IntervalKind::finite",
                format!("endpoints must be finite with a < b, got [{a}, {b}]"),
            ))
        }
    }

    pub fn semi_infinite(a: f64) -> Result<Self> {
        if a.is_finite() {
            Ok(IntervalKind::SemiInfinite { a })
        } else {
            Err(Error::domain(
                "IntervalKind::semi_infinite",
                format!("endpoint {a} must be finite"),
            ))
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            IntervalKind::Finite { a, .. } | IntervalKind::SemiInfinite { a } => a,
            IntervalKind::Infinite => f64::NEG_INFINITY,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            IntervalKind::Finite { b, .. } => b,
            _ => f64::INFINITY,
        }
    }

    /// Open-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lower() && x < self.upper()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            IntervalKind::Finite { a, b } => IntervalKind::finite(a, b).map(|_| ()),
            IntervalKind::SemiInfinite { a } => IntervalKind::semi_infinite(a).map(|_| ()),
            IntervalKind::Infinite => Ok(()),
        }
    }
}

impl std::fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            IntervalKind::Finite { a, b } => write!(f, "({a}, {b})"),
            IntervalKind::SemiInfinite { a } => write!(f, "({a}, inf)"),
            IntervalKind::Infinite => write!(f, "(-inf, inf)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl QuadratureOptions {
    /// Tolerances with the default panel budget (see [`default_panel_budget`]).
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_panels: default_panel_budget(),
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_panels > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(
                "integrate",
                format!(
                    "tolerances must be positive and the budget nonzero, got abs {} rel {} panels {}",
                    self.abs_tol, self.rel_tol, self.max_panels
                ),
            ))
        }
    }
}

/// [`DEFAULT_PANEL_BUDGET`], unless overridden through [`PANEL_BUDGET_ENV`].
pub fn default_panel_budget() -> usize {
    std::env::var(PANEL_BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_PANEL_BUDGET)
}

#[derive(Debug, Clone, Copy)]
enum Mapping {
    Identity,
    Upper { a: f64 },
    Lower { b: f64 },
    Both,
}

impl Mapping {
    /// Returns (x, dx/dt).
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Mapping::Identity => (t, 1.0),
            Mapping::Upper { a } => {
                let s = 1.0 - t;
                (a + t / s, 1.0 / (s * s))
            }
            Mapping::Lower { b } => {
                let s = 1.0 - t;
                (b - t / s, 1.0 / (s * s))
            }
            Mapping::Both => {
                let s = 1.0 - t * t;
                (t / s, (1.0 + t * t) / (s * s))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

struct Integrand<'f, F> {
    f: &'f F,
    mapping: Mapping,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Integrand<'_, F> {
    fn eval(&mut self, t: f64) -> Result<f64> {
        self.evaluations += 1;
        let (x, jac) = self.mapping.apply(t);
        let fx = (self.f)(x);
        if !fx.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                abscissa: x,
                value: fx,
            });
        }
        if fx == 0.0 {
            return Ok(0.0);
        }
        let v = fx * jac;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand {
                abscissa: x,
                value: v,
            })
        }
    }

    fn panel(&mut self, a: f64, b: f64) -> Result<Panel> {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = self.eval(center)?;
        let mut kronrod = fc * WGK[7];
        let mut gauss = fc * WG[3];
        for j in 0..7 {
            let dx = half * XGK[j];
            let pair = self.eval(center - dx)? + self.eval(center + dx)?;
            kronrod += WGK[j] * pair;
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        Ok(Panel {
            a,
            b,
            value: kronrod * half,
            error: ((kronrod - gauss) * half).abs(),
        })
    }
}

const INITIAL_PANELS: usize = 4;

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    mapping: Mapping,
    ta: f64,
    tb: f64,
    options: &QuadratureOptions,
) -> Result<QuadratureResult> {
    options.validate()?;
    let mut integrand = Integrand {
        f,
        mapping,
        evaluations: 0,
    };
    let mut heap = BinaryHeap::new();
    let width = (tb - ta) / INITIAL_PANELS as f64;
    for i in 0..INITIAL_PANELS {
        let a = ta + i as f64 * width;
        let b = if i + 1 == INITIAL_PANELS {
            tb
        } else {
            a + width
        };
        heap.push(integrand.panel(a, b)?);
    }
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = options.abs_tol.max(options.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                converged: true,
                evaluations: integrand.evaluations,
            });
        }
        let worst = *heap.peek().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let exhausted = heap.len() >= options.max_panels.max(INITIAL_PANELS)
            || mid <= worst.a
            || mid >= worst.b;
        if exhausted {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                converged: false,
                evaluations: integrand.evaluations,
            });
        }
        heap.pop();
        heap.push(integrand.panel(worst.a, mid)?);
        heap.push(integrand.panel(mid, worst.b)?);
    }
}

/// Integrate `f` over `interval` with the default panel budget.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    interval: IntervalKind,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_with(f, interval, &QuadratureOptions::new(abs_tol, rel_tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    interval: IntervalKind,
    options: &QuadratureOptions,
) -> Result<QuadratureResult> {
    interval.validate()?;
    match interval {
        IntervalKind::Finite { a, b } => adaptive(&f, Mapping::Identity, a, b, options),
        IntervalKind::SemiInfinite { a } => adaptive(&f, Mapping::Upper { a }, 0.0, 1.0, options),
        IntervalKind::Infinite => adaptive(&f, Mapping::Both, -1.0, 1.0, options),
    }
}

/// Oriented integral ∫_a^b f over finite endpoints; `a > b` yields the
/// exact negation of ∫_b^a f.
pub fn integrate_oriented<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    options: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if a == b && a.is_finite() {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        });
    }
    if a < b {
        integrate_with(f, IntervalKind::finite(a, b)?, options)
    } else {
        let r = integrate_with(f, IntervalKind::finite(b, a)?, options)?;
        Ok(QuadratureResult {
            value: -r.value,
            ..r
        })
    }
}

const CDF_ABS_TOL: f64 = 1e-13;
const CDF_REL_TOL: f64 = 1e-11;

/// Cumulative integrals of `f` from the lower end of `interval` to each
/// point of an ascending grid.
pub fn cdf_on_grid<F: Fn(f64) -> f64>(
    f: F,
    interval: IntervalKind,
    grid: &[f64],
) -> Result<Vec<f64>> {
    interval.validate()?;
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::domain(
                "cdf_on_grid",
                format!(
                    "grid must be strictly ascending, found {} then {}",
                    w[0], w[1]
                ),
            ));
        }
    }
    if let Some(bad) = grid.iter().find(|&&x| !interval.contains(x)) {
        return Err(Error::domain(
            "cdf_on_grid",
            format!("grid point {bad} lies outside {interval}"),
        ));
    }
    let options = QuadratureOptions::new(CDF_ABS_TOL, CDF_REL_TOL);
    let check = |r: QuadratureResult, lo: f64, hi: f64| -> Result<f64> {
        if r.converged {
            Ok(r.value)
        } else {
            Err(Error::QuadratureNotConverged {
                context: format!("integrating the cumulative piece ({lo}, {hi})"),
                value: r.value,
                error_estimate: r.error_estimate,
            })
        }
    };

    let mut out = Vec::with_capacity(grid.len());
    let Some(&first) = grid.first() else {
        return Ok(out);
    };
    let lower = interval.lower();
    let head = if lower.is_finite() {
        adaptive(&f, Mapping::Identity, lower, first, &options)?
    } else {
        adaptive(&f, Mapping::Lower { b: first }, 0.0, 1.0, &options)?
    };
    let mut acc = check(head, lower, first)?;
    out.push(acc);
    for w in grid.windows(2) {
        let piece = adaptive(&f, Mapping::Identity, w[0], w[1], &options)?;
        acc += check(piece, w[0], w[1])?;
        out.push(acc);
    }
    Ok(out)
}
