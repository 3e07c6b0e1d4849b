//! Power-law and exponential fits to path counts per hop level.
//!
//! Both models are fitted by ordinary least squares on `ln(count)`; the
//! residuals, RMSE and AIC are computed on raw counts. Levels with a zero
//! count have no logarithm and are left out of the fit.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::model::ArbitragePath;

/// Minimum number of nonzero levels for a two-parameter fit.
pub const MIN_FIT_POINTS: usize = 3;

/// Both models have an amplitude and a decay parameter.
const PARAMS: f64 = 2.0;

const AIC_TIE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least {MIN_FIT_POINTS} hop levels with nonzero counts, got {usable}")]
    InsufficientPoints { usable: usize },
    #[error("hop levels must be positive and strictly increasing")]
    BadLevels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    PowerLaw,
    Exponential,
}

/// Counts of detected paths per hop level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopCountDistribution {
    points: Vec<(usize, u64)>,
}

impl HopCountDistribution {
    pub fn new(points: Vec<(usize, u64)>) -> Result<Self, FitError> {
        let increasing = points.windows(2).all(|w| w[0].0 < w[1].0);
        if !increasing || points.first().is_some_and(|&(h, _)| h == 0) {
            return Err(FitError::BadLevels);
        }
        Ok(HopCountDistribution { points })
    }

    /// Counts every level in `levels`, including empty ones.
    pub fn from_paths(paths: &[ArbitragePath], levels: std::ops::RangeInclusive<usize>) -> Self {
        let points = levels
            .filter(|&h| h > 0)
            .map(|h| (h, paths.iter().filter(|p| p.hops() == h).count() as u64))
            .collect();
        HopCountDistribution { points }
    }

    /// Sets the count at `hops`, adding the level if absent.
    pub fn with_count(mut self, hops: usize, count: u64) -> Result<Self, FitError> {
        if hops == 0 {
            return Err(FitError::BadLevels);
        }
        match self.points.binary_search_by_key(&hops, |&(h, _)| h) {
            Ok(i) => self.points[i].1 = count,
            Err(i) => self.points.insert(i, (hops, count)),
        }
        Ok(self)
    }

    pub fn points(&self) -> &[(usize, u64)] {
        &self.points
    }

    pub fn count(&self, hops: usize) -> Option<u64> {
        self.points.iter().find(|&&(h, _)| h == hops).map(|&(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub amplitude: f64,
    /// `k` for the power law, `λ` for the exponential.
    pub exponent: f64,
    pub rss: f64,
    pub rmse: f64,
    pub aic: f64,
    pub points_used: usize,
    pub excluded_zero_levels: Vec<usize>,
}

impl FitResult {
    pub fn predict(&self, hops: usize) -> f64 {
        let n = hops as f64;
        match self.model {
            ModelKind::PowerLaw => self.amplitude * n.powf(-self.exponent),
            ModelKind::Exponential => self.amplitude * (-self.exponent * n).exp(),
        }
    }
}

pub fn fit_model(dist: &HopCountDistribution, model: ModelKind) -> Result<FitResult, FitError> {
    let (used, zeros): (Vec<_>, Vec<_>) =
        dist.points.iter().copied().partition(|&(_, c)| c > 0);
    if used.len() < MIN_FIT_POINTS {
        return Err(FitError::InsufficientPoints { usable: used.len() });
    }

    let xs: Vec<f64> = used
        .iter()
        .map(|&(h, _)| match model {
            ModelKind::PowerLaw => (h as f64).ln(),
            ModelKind::Exponential => h as f64,
        })
        .collect();
    let ys: Vec<f64> = used.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let (intercept, slope) = least_squares(&xs, &ys);

    let mut fit = FitResult {
        model,
        amplitude: intercept.exp(),
        exponent: -slope,
        rss: 0.0,
        rmse: 0.0,
        aic: 0.0,
        points_used: used.len(),
        excluded_zero_levels: zeros.iter().map(|&(h, _)| h).collect(),
    };
    let m = used.len() as f64;
    fit.rss = used
        .iter()
        .map(|&(h, c)| {
            let r = c as f64 - fit.predict(h);
            r * r
        })
        .sum();
    fit.rmse = (fit.rss / m).sqrt();
    // A perfect fit gives ln(0) = -inf, which is the correct limit.
    fit.aic = m * (fit.rss / m).ln() + 2.0 * PARAMS;
    Ok(fit)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub power_law: FitResult,
    pub exponential: FitResult,
    /// Lower AIC wins. On a tie the power law is reported and `tie` is set.
    pub preferred: ModelKind,
    pub tie: bool,
    pub delta_aic: f64,
}

pub fn compare_models(dist: &HopCountDistribution) -> Result<ModelComparison, FitError> {
    let power_law = fit_model(dist, ModelKind::PowerLaw)?;
    let exponential = fit_model(dist, ModelKind::Exponential)?;
    let delta_aic = exponential.aic - power_law.aic;
    let tie = power_law.aic == exponential.aic || delta_aic.abs() <= AIC_TIE;
    let preferred = if tie || power_law.aic < exponential.aic {
        ModelKind::PowerLaw
    } else {
        ModelKind::Exponential
    };
    Ok(ModelComparison {
        power_law,
        exponential,
        preferred,
        tie,
        delta_aic,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRow {
    pub hops: usize,
    pub count: u64,
    pub fitted_powerlaw: f64,
    pub fitted_exponential: f64,
}

pub fn plot_rows(dist: &HopCountDistribution, cmp: &ModelComparison) -> Vec<PlotRow> {
    dist.points
        .iter()
        .map(|&(hops, count)| PlotRow {
            hops,
            count,
            fitted_powerlaw: cmp.power_law.predict(hops),
            fitted_exponential: cmp.exponential.predict(hops),
        })
        .collect()
}

pub fn write_plot_csv<W: Write>(writer: W, rows: &[PlotRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
