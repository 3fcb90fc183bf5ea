//! Interval values and the center/half-range parameterization.

use crate::error::{Error, Result};

/// A closed real interval `[lower, upper]` with finite, ordered bounds.
///
/// This is the type for *data*: the ordering invariant is enforced at
/// construction. Model outputs, which may violate it, are carried by
/// [`PredictedInterval`] instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || lower > upper {
            return Err(Error::InvalidInterval {
                lower,
                upper,
                row: None,
            });
        }
        Ok(Self { lower, upper })
    }

    /// Builds `[center - half_range, center + half_range]`.
    pub fn from_center_range(center: f64, half_range: f64) -> Result<Self> {
        if !center.is_finite() || !half_range.is_finite() || half_range < 0.0 {
            return Err(Error::InvalidInterval {
                lower: center - half_range,
                upper: center + half_range,
                row: None,
            });
        }
        Self::new(center - half_range, center + half_range)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_range(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn to_center_range(self) -> CenterRange {
        CenterRange {
            center: self.center(),
            half_range: self.half_range(),
        }
    }
}

/// Equivalent interval parameterization: midpoint and half the width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterRange {
    pub center: f64,
    pub half_range: f64,
}

impl CenterRange {
    pub fn to_interval(self) -> Result<Interval> {
        Interval::from_center_range(self.center, self.half_range)
    }
}

/// A model's predicted bounds. Unlike [`Interval`], the bounds are free to
/// cross; `crossed` records whether they do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedInterval {
    pub lower_hat: f64,
    pub upper_hat: f64,
    pub crossed: bool,
}

impl PredictedInterval {
    pub fn new(lower_hat: f64, upper_hat: f64) -> Self {
        Self {
            lower_hat,
            upper_hat,
            crossed: lower_hat > upper_hat,
        }
    }

    /// Bounds reordered into a valid interval; crossed predictions are
    /// swapped so they span the same point set.
    pub fn canonical_bounds(&self) -> (f64, f64) {
        if self.crossed {
            (self.upper_hat, self.lower_hat)
        } else {
            (self.lower_hat, self.upper_hat)
        }
    }
}
