//! Least-squares fits of measured oracle calls against the target accuracy.

use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {need} distinct eps values, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("eps values span {decades:.2} decades; at least {need} are required")]
    NarrowSpan { decades: f64, need: f64 },
    #[error("non-positive or non-finite value in fit data")]
    BadData,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// 95% confidence interval for the slope; infinite with two points.
    pub slope_ci: (f64, f64),
    pub n: usize,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit, FitError> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(FitError::TooFewPoints { need: 2, got: n });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(FitError::BadData);
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::TooFewPoints { need: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let slope_ci = if n > 2 {
        let se = (sse / (nf - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, nf - 2.0)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        (slope - t * se, slope + t * se)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_ci,
        n,
    })
}

pub const MIN_EPS_VALUES: usize = 4;
pub const MIN_DECADES: f64 = 1.5;

/// Fit `log(calls) = intercept + slope log(1/eps)`. `points` are
/// `(eps, calls)` pairs, typically median calls per eps.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<LinearFit, FitError> {
    if points.iter().any(|&(e, c)| !(e > 0.0 && c > 0.0)) {
        return Err(FitError::BadData);
    }
    let mut eps: Vec<f64> = points.iter().map(|p| p.0).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < MIN_EPS_VALUES {
        return Err(FitError::TooFewPoints {
            need: MIN_EPS_VALUES,
            got: eps.len(),
        });
    }
    let decades = (eps[eps.len() - 1] / eps[0]).log10();
    if decades < MIN_DECADES - 1e-9 {
        return Err(FitError::NarrowSpan {
            decades,
            need: MIN_DECADES,
        });
    }
    let x: Vec<f64> = points.iter().map(|p| (1.0 / p.0).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    ols(&x, &y)
}

/// Fit `calls = intercept + slope log(1/eps)`, the signature of linear
/// convergence.
pub fn fit_log_linear(points: &[(f64, f64)]) -> Result<LinearFit, FitError> {
    if points.iter().any(|&(e, _)| !(e > 0.0)) {
        return Err(FitError::BadData);
    }
    let x: Vec<f64> = points.iter().map(|p| (1.0 / p.0).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    ols(&x, &y)
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];

    #[test]
    fn exact_power_laws() {
        let rows: Vec<_> = SWEEP.iter().map(|&e| (e, 3.0 * e.powf(-2.0))).collect();
        let fit = fit_scaling(&rows).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let rows: Vec<_> = SWEEP.iter().map(|&e| (e, 0.5 * e.powf(-1.75))).collect();
        assert!((fit_scaling(&rows).unwrap().slope - 1.75).abs() < 1e-9);
    }

    #[test]
    fn refuses_thin_sweeps() {
        let three: Vec<_> = SWEEP[..3].iter().map(|&e| (e, 1.0 / e)).collect();
        assert!(matches!(fit_scaling(&three), Err(FitError::TooFewPoints { .. })));
        let narrow: Vec<_> = [1e-2, 8e-3, 6e-3, 4e-3].iter().map(|&e| (e, 1.0 / e)).collect();
        assert!(matches!(fit_scaling(&narrow), Err(FitError::NarrowSpan { .. })));
    }

    #[test]
    fn confidence_interval_brackets_the_slope() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.1, 0.9, 2.2, 2.8, 4.1];
        let fit = ols(&x, &y).unwrap();
        assert!(fit.slope_ci.0 < fit.slope && fit.slope < fit.slope_ci.1);
        // Reference values from a direct computation.
        assert!((fit.slope - 0.99).abs() < 1e-12);
        assert!((fit.intercept - 0.04).abs() < 1e-12);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&mut []), None);
    }
}
