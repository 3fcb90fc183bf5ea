//! Affine standardization helpers shared by the model trainers.

/// An affine map `v -> (v - shift) / scale` with exact inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AffineScaler {
    pub shift: f64,
    pub scale: f64,
}

impl AffineScaler {
    /// Z-score fit: shift by the mean, divide by the sample std.
    pub fn standardize(values: impl Iterator<Item = f64> + Clone) -> Self {
        let (mean, std) = mean_std(values);
        Self {
            shift: mean,
            scale: guard(std),
        }
    }

    /// Spread-only fit: divide by the sample std without shifting, so sign
    /// and zero are preserved (used for half-ranges, which must stay >= 0).
    pub fn spread_only(values: impl Iterator<Item = f64> + Clone) -> Self {
        let (_, std) = mean_std(values);
        Self {
            shift: 0.0,
            scale: guard(std),
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        (v - self.shift) / self.scale
    }

    pub fn invert(&self, v: f64) -> f64 {
        self.shift + self.scale * v
    }
}

/// Near-constant columns would divide by ~0; leave them unscaled instead.
fn guard(std: f64) -> f64 {
    if std > 1e-12 {
        std
    } else {
        1.0
    }
}

/// Sample mean and std (n - 1 denominator; std is 0 for n < 2).
pub(crate) fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss = values.map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, (ss / (n as f64 - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardize_round_trips() {
        let values = [1.0, 2.0, 3.0, 10.0];
        let s = AffineScaler::standardize(values.iter().copied());
        for v in values {
            assert!((s.invert(s.apply(v)) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn spread_only_keeps_zero_fixed() {
        let s = AffineScaler::spread_only([0.5, 1.0, 2.0].into_iter());
        assert_eq!(s.apply(0.0), 0.0);
        assert!(s.apply(1.0) > 0.0);
    }

    #[test]
    fn constant_column_is_left_unscaled() {
        let s = AffineScaler::standardize([4.0, 4.0, 4.0].into_iter());
        assert_eq!(s.scale, 1.0);
        assert_eq!(s.apply(5.0), 1.0);
    }
}
