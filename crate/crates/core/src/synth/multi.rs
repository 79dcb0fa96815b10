//! Two-channel generators: correlation, cross-correlation with a lag, and
//! correlation confined to one half of the series.

use rand::Rng;

use super::{normal, normals, uniform, Draft};
use crate::error::{Error, Result};
use crate::numeric::{lagged_correlation, pearson};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Whole,
    FirstHalf,
    SecondHalf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpec {
    pub rho: f64,
    pub lag: usize,
    pub regime: Regime,
}

impl PairSpec {
    pub fn check(&self, n: usize) -> Result<()> {
        if !(self.rho.abs() <= 1.0) {
            return Err(Error::Domain(format!("correlation {} outside [-1, 1]", self.rho)));
        }
        if self.lag > 0 && 4 * self.lag >= n {
            return Err(Error::Domain(format!(
                "lag {} must be below a quarter of length {n}",
                self.lag
            )));
        }
        Ok(())
    }
}

/// `|rho|` in [0.3, 0.95] with a random sign.
pub fn draw_rho<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    super::sign(rng) * uniform(rng, 0.3, 0.95)
}

fn mix(rho: f64, x: f64, z: f64) -> f64 {
    rho * x + (1.0 - rho * rho).sqrt() * z
}

/// Redraws allowed so the realized correlation carries the sign of `rho`.
const SIGN_ATTEMPTS: usize = 1000;

/// Run `draw` until `measure` of its output has the sign of `rho`.
/// Short series at small `|rho|` occasionally realize the opposite sign,
/// which would contradict the label.
fn with_matching_sign<R: Rng + ?Sized, T>(
    rho: f64,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> T,
    measure: impl Fn(&T) -> f64,
) -> Result<T> {
    for _ in 0..SIGN_ATTEMPTS {
        let out = draw(rng);
        if rho == 0.0 || measure(&out).signum() == rho.signum() {
            return Ok(out);
        }
    }
    Err(Error::Generation(format!(
        "no draw realized the sign of rho = {rho} in {SIGN_ATTEMPTS} attempts"
    )))
}

pub fn gen_correlated_pair<R: Rng + ?Sized>(rho: f64, n: usize, rng: &mut R) -> Result<Draft> {
    PairSpec {
        rho,
        lag: 0,
        regime: Regime::Whole,
    }
    .check(n)?;
    let sub = if rho > 0.0 {
        SubFeature::Positive
    } else if rho < 0.0 {
        SubFeature::Negative
    } else {
        SubFeature::None
    };
    let (x, y) = with_matching_sign(
        rho,
        rng,
        |rng| {
            let x = normals(rng, n);
            let y: Vec<f64> = x.iter().map(|&x| mix(rho, x, normal(rng))).collect();
            (x, y)
        },
        |(x, y)| pearson(x, y),
    )?;
    let label = FeatureLabel::new(Feature::Correlation, sub, sub.as_str()).with("rho", rho);
    Ok(Draft::pair(x, y, label))
}

/// Channel 2 at `t` follows channel 1 at `t - lag`.
pub fn gen_cross_correlated_pair<R: Rng + ?Sized>(
    rho: f64,
    lag: usize,
    n: usize,
    rng: &mut R,
) -> Result<Draft> {
    PairSpec {
        rho,
        lag,
        regime: Regime::Whole,
    }
    .check(n)?;
    let sub = match (rho.partial_cmp(&0.0), lag > 0) {
        (Some(std::cmp::Ordering::Greater), false) => SubFeature::Direct,
        (Some(std::cmp::Ordering::Greater), true) => SubFeature::DirectLagged,
        (Some(std::cmp::Ordering::Less), false) => SubFeature::Inverse,
        (Some(std::cmp::Ordering::Less), true) => SubFeature::InverseLagged,
        _ => SubFeature::None,
    };
    // extended driver so channel 2 has a predecessor for every t
    let (first, second) = with_matching_sign(
        rho,
        rng,
        |rng| {
            let ext = normals(rng, n + lag);
            let second: Vec<f64> = (0..n).map(|t| mix(rho, ext[t], normal(rng))).collect();
            (ext[lag..].to_vec(), second)
        },
        |(a, b)| lagged_correlation(a, b, lag),
    )?;
    let label = FeatureLabel::new(Feature::CrossCorrelation, sub, sub.as_str())
        .with("rho", rho)
        .with("lag", lag as f64);
    Ok(Draft::pair(first, second, label))
}

/// Correlated with `rho` inside one half (split at `k` in [0.4n, 0.6n]),
/// independent with the same marginals outside.
pub fn gen_dcc_pair<R: Rng + ?Sized>(regime: Regime, rho: f64, n: usize, rng: &mut R) -> Result<Draft> {
    PairSpec { rho, lag: 0, regime }.check(n)?;
    if n < 40 {
        return Err(Error::Generation(format!("dynamic correlation needs n >= 40, got {n}")));
    }
    let sub = match regime {
        Regime::FirstHalf => SubFeature::FirstHalf,
        Regime::SecondHalf => SubFeature::SecondHalf,
        Regime::Whole => {
            return Err(Error::Domain("dynamic correlation needs a first or second half regime".into()))
        }
    };
    let lo = (0.4 * n as f64).ceil() as usize;
    let hi = (0.6 * n as f64).floor() as usize;
    let k = rng.random_range(lo..=hi);
    let segment = if regime == Regime::FirstHalf { 0..k } else { k..n };
    let (x, y) = with_matching_sign(
        rho,
        rng,
        |rng| {
            let x = normals(rng, n);
            let y: Vec<f64> = (0..n)
                .map(|t| {
                    let z = normal(rng);
                    if segment.contains(&t) {
                        mix(rho, x[t], z)
                    } else {
                        z
                    }
                })
                .collect();
            (x, y)
        },
        |(x, y)| pearson(&x[segment.clone()], &y[segment.clone()]),
    )?;
    let label = FeatureLabel::new(Feature::DynamicCorrelation, sub, sub.as_str())
        .with("rho", rho)
        .with("k", k as f64);
    Ok(Draft::pair(x, y, label))
}
