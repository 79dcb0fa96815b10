//! Small descriptive-statistics helpers shared by generators, descriptions and baselines.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

/// Excess kurtosis (population moments).
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return 0.0;
    }
    let (xs, ys) = (&xs[..n], &ys[..n]);
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Correlation of `second[t]` with `first[t - lag]` over the overlap.
pub fn lagged_correlation(first: &[f64], second: &[f64], lag: usize) -> f64 {
    let n = first.len().min(second.len());
    if lag + 2 > n {
        return 0.0;
    }
    pearson(&first[..n - lag], &second[lag..n])
}

/// Sample autocorrelation at `lag` (biased estimator, as in most ACF plots).
pub fn autocorrelation(xs: &[f64], lag: usize) -> f64 {
    let n = xs.len();
    if lag >= n {
        return 0.0;
    }
    let m = mean(xs);
    let denom: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let num: f64 = (lag..n).map(|t| (xs[t] - m) * (xs[t - lag] - m)).sum();
    num / denom
}

/// Ordinary least squares fit of `ys` on `0..n`.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_se: f64,
    pub residual_std: f64,
}

impl LinearFit {
    pub fn t_stat(&self) -> f64 {
        if self.slope_se == 0.0 {
            if self.slope == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(self.slope)
            }
        } else {
            self.slope / self.slope_se
        }
    }
}

pub fn linear_fit(ys: &[f64]) -> LinearFit {
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    linear_fit_xy(&xs, ys)
}

pub fn linear_fit_xy(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len().min(ys.len());
    let mx = mean(&xs[..n]);
    let my = mean(&ys[..n]);
    let sxx: f64 = xs[..n].iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs[..n]
        .iter()
        .zip(&ys[..n])
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let sse: f64 = xs[..n]
        .iter()
        .zip(&ys[..n])
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = n.saturating_sub(2).max(1) as f64;
    let residual_var = sse / dof;
    // Exact fits leave round-off residue; treat it as zero.
    let scale = ys[..n].iter().map(|y| y.abs()).fold(1.0, f64::max);
    let residual_var = if residual_var.sqrt() <= 1e-12 * scale {
        0.0
    } else {
        residual_var
    };
    let slope_se = if sxx == 0.0 {
        0.0
    } else {
        (residual_var / sxx).sqrt()
    };
    LinearFit {
        slope,
        intercept,
        slope_se,
        residual_std: residual_var.sqrt(),
    }
}

/// Centered moving average of width 3; output has `n - 2` points
/// (index `j` is centred on input index `j + 1`).
pub fn moving_average3(xs: &[f64]) -> Vec<f64> {
    xs.windows(3).map(|w| (w[0] + w[1] + w[2]) / 3.0).collect()
}

/// Indices of strict interior local maxima and minima.
pub fn strict_extrema(xs: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut peaks = Vec::new();
    let mut troughs = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        if xs[i] > xs[i - 1] && xs[i] > xs[i + 1] {
            peaks.push(i);
        } else if xs[i] < xs[i - 1] && xs[i] < xs[i + 1] {
            troughs.push(i);
        }
    }
    (peaks, troughs)
}

/// Differences `x[t+1] - x[t]`.
pub fn diff(xs: &[f64]) -> Vec<f64> {
    xs.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Z-scores; zero when the input has no spread.
pub fn z_scores(xs: &[f64]) -> Vec<f64> {
    let m = mean(xs);
    let s = std_dev(xs);
    if s == 0.0 {
        return vec![0.0; xs.len()];
    }
    xs.iter().map(|x| (x - m) / s).collect()
}

/// Index of the first maximum.
pub fn argmax(xs: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in xs.iter().enumerate() {
        if best.is_none_or(|b| *x > xs[b]) {
            best = Some(i);
        }
    }
    best
}

/// Index of the first minimum.
pub fn argmin(xs: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in xs.iter().enumerate() {
        if best.is_none_or(|b| *x < xs[b]) {
            best = Some(i);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line_has_infinite_t() {
        let ys: Vec<f64> = (0..20).map(|t| 100.0 + 0.5 * t as f64).collect();
        let fit = linear_fit(&ys);
        assert_relative_eq!(fit.slope, 0.5, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 100.0, epsilon = 1e-10);
        assert!(fit.t_stat().is_infinite() && fit.t_stat() > 0.0);
    }

    #[test]
    fn acf_of_sine_peaks_at_period() {
        let xs: Vec<f64> = (0..140)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 / 7.0).sin())
            .collect();
        let r7 = autocorrelation(&xs, 7);
        assert!(r7 > 0.9);
        assert!(autocorrelation(&xs, 3) < 0.0);
    }

    #[test]
    fn extrema_and_args() {
        let xs = [0.0, 2.0, 1.0, 3.0, 3.0, -1.0, 0.5];
        let (p, t) = strict_extrema(&xs);
        assert_eq!(p, vec![1]);
        assert_eq!(t, vec![2, 5]);
        assert_eq!(argmax(&xs), Some(3));
        assert_eq!(argmin(&xs), Some(5));
    }

    #[test]
    fn lagged_correlation_detects_shift() {
        let a: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64).collect();
        let mut b = vec![0.0; 2];
        b.extend_from_slice(&a[..48]);
        assert_relative_eq!(lagged_correlation(&a, &b, 2), 1.0, epsilon = 1e-12);
    }
}
