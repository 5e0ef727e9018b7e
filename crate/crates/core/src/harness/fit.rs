use serde::Serialize;

use crate::{Error, Result};

/// Least-squares slope of `log(error)` against `log(abscissa)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFit {
    pub abscissa: String,
    pub slope: f64,
    pub intercept: f64,
    /// `log(error) - (intercept + slope·log(x))` per point.
    pub residuals: Vec<f64>,
    pub n_points: usize,
}

pub fn fit_order(abscissa: &str, points: &[(f64, f64)]) -> Result<OrderFit> {
    if points.len() < 3 {
        return Err(Error::arg(format!(
            "an order fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some((x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::arg(format!(
            "order fit needs positive finite values, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::arg("order fit needs at least two distinct abscissae"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(OrderFit {
        abscissa: abscissa.to_string(),
        slope,
        intercept,
        residuals: logs.iter().map(|(x, y)| y - (intercept + slope * x)).collect(),
        n_points: points.len(),
    })
}
