//! Linear and quadratic trends.

use rand::Rng;

use super::{normal, uniform, Draft};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }

    fn sub_feature(self) -> SubFeature {
        match self {
            Direction::Up => SubFeature::Up,
            Direction::Down => SubFeature::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendShape {
    Linear,
    Quadratic,
}

/// Fixed values for parameters that would otherwise be drawn.
/// `a` is a magnitude; the direction supplies its sign.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrendOverrides {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
}

/// Linear: `a*t + b` with `|a|` in [0.1, 1] and `b` in [100, 110].
/// Quadratic: `a*t^2 + b*t + c` with `|a|` in [0.01, 0.05], `|b|` in [0, 1],
/// `c` in [0, 10]; a quadratic that would dip below zero is lifted so its
/// minimum equals `c`. Both `a` and `b` take the direction's sign so the
/// series is monotone in the labeled direction.
pub fn gen_trend<R: Rng + ?Sized>(
    direction: Direction,
    shape: TrendShape,
    n: usize,
    overrides: TrendOverrides,
    noise_std: f64,
    rng: &mut R,
) -> Draft {
    let dir = direction.sign();
    let mut label = FeatureLabel::new(
        Feature::Trend,
        direction.sub_feature(),
        match shape {
            TrendShape::Linear => "linear",
            TrendShape::Quadratic => "quadratic",
        },
    );
    let mut values: Vec<f64> = match shape {
        TrendShape::Linear => {
            let a = overrides.a.unwrap_or_else(|| uniform(rng, 0.1, 1.0)) * dir;
            let b = overrides.b.unwrap_or_else(|| uniform(rng, 100.0, 110.0));
            label.set("a", a);
            label.set("b", b);
            (0..n).map(|t| a * t as f64 + b).collect()
        }
        TrendShape::Quadratic => {
            let a = overrides.a.unwrap_or_else(|| uniform(rng, 0.01, 0.05)) * dir;
            let b = overrides.b.unwrap_or_else(|| uniform(rng, 0.0, 1.0)) * dir;
            let c = overrides.c.unwrap_or_else(|| uniform(rng, 0.0, 10.0));
            label.set("a", a);
            label.set("b", b);
            label.set("c", c);
            let mut v: Vec<f64> = (0..n)
                .map(|t| {
                    let t = t as f64;
                    a * t * t + b * t + c
                })
                .collect();
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let shift = if min < 0.0 { c - min } else { 0.0 };
            if shift > 0.0 {
                v.iter_mut().for_each(|x| *x += shift);
            }
            label.set("shift", shift);
            v
        }
    };
    if noise_std > 0.0 {
        values.iter_mut().for_each(|x| *x += noise_std * normal(rng));
    }
    label.set("noise_std", noise_std);
    Draft::dense(values, label)
}

/// Control series: a level in [100, 110] plus Gaussian noise.
pub fn gen_no_trend<R: Rng + ?Sized>(n: usize, noise_std: f64, rng: &mut R) -> Draft {
    let level = uniform(rng, 100.0, 110.0);
    let values = (0..n).map(|_| level + noise_std * normal(rng)).collect();
    let label = FeatureLabel::new(Feature::Trend, SubFeature::None, "flat")
        .with("level", level)
        .with("noise_std", noise_std);
    Draft::dense(values, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;

    fn fixed(a: f64, b: f64, c: Option<f64>) -> TrendOverrides {
        TrendOverrides {
            a: Some(a),
            b: Some(b),
            c,
        }
    }

    #[test]
    fn linear_formula() {
        let mut rng = rng_from(1);
        let d = gen_trend(Direction::Up, TrendShape::Linear, 4, fixed(0.5, 100.0, None), 0.0, &mut rng);
        assert_eq!(d.observed(), vec![100.0, 100.5, 101.0, 101.5]);
        assert_eq!(d.label.sub_feature, SubFeature::Up);
        assert_eq!(d.label.param("a"), Some(0.5));
    }

    #[test]
    fn down_linear_strictly_decreases() {
        let mut rng = rng_from(1);
        let d = gen_trend(Direction::Down, TrendShape::Linear, 30, fixed(0.5, 100.0, None), 0.0, &mut rng);
        let v = d.observed();
        assert_eq!(v[0], 100.0);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn quadratic_hand_evaluation() {
        let mut rng = rng_from(1);
        let d = gen_trend(
            Direction::Up,
            TrendShape::Quadratic,
            3,
            fixed(0.01, 0.0, Some(10.0)),
            0.0,
            &mut rng,
        );
        let v = d.observed();
        let expected = [10.0, 10.01, 10.04];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn down_quadratic_is_lifted_non_negative() {
        for seed in 0..200 {
            let mut rng = rng_from(seed);
            let d = gen_trend(
                Direction::Down,
                TrendShape::Quadratic,
                150,
                TrendOverrides::default(),
                0.0,
                &mut rng,
            );
            let v = d.observed();
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-9);
            let c = d.label.param("c").unwrap();
            assert!((min - c).abs() < 1e-9 || d.label.param("shift") == Some(0.0));
        }
    }

    #[test]
    fn quadratic_moves_in_labeled_direction() {
        for seed in 0..200 {
            let mut rng = rng_from(seed);
            let d = gen_trend(Direction::Down, TrendShape::Quadratic, 30, TrendOverrides::default(), 0.0, &mut rng);
            assert!(d.observed().windows(2).all(|w| w[1] <= w[0]), "seed {seed}");
        }
    }

    #[test]
    fn drawn_params_stay_in_range() {
        for seed in 0..300 {
            let mut rng = rng_from(seed);
            let d = gen_trend(Direction::Down, TrendShape::Linear, 40, TrendOverrides::default(), 0.0, &mut rng);
            let a = d.label.param("a").unwrap();
            let b = d.label.param("b").unwrap();
            assert!((-1.0..=-0.1).contains(&a));
            assert!((100.0..=110.0).contains(&b));
        }
    }
}
