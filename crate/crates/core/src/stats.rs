//! Single-pass summary statistics.

use crate::error::{Error, Result};

/// Running count, mean, sum of squared deviations and range of a stream of
/// finite reals (Welford's recurrence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineStats {
    n: usize,
    mean: f64,
    m2: f64,
    lo: f64,
    hi: f64,
}

impl Default for OnlineStats {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineStats {
    pub fn new() -> Self {
        OnlineStats {
            n: 0,
            mean: 0.0,
            m2: 0.0,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    pub fn add(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
        // rounding can push m2 a hair below zero on constant streams
        if self.m2 < 0.0 {
            self.m2 = 0.0;
        }
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
        Ok(())
    }

    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Result<Self> {
        let mut s = Self::new();
        for x in values {
            s.add(x)?;
        }
        Ok(s)
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Sample (n-1) variance; `None` below two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.m2 / (self.n - 1) as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }

    /// `(lo, hi)` once at least one value has been seen.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        (self.n > 0).then_some((self.lo, self.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn batch(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        (mean, ss / (n - 1.0))
    }

    #[test]
    fn one_two_three() {
        let s = OnlineStats::from_values([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean(), 2.0);
        assert_eq!(s.variance(), Some(1.0));
        assert_eq!(s.bounds(), Some((1.0, 3.0)));
    }

    #[test]
    fn single_value_has_no_variance() {
        let s = OnlineStats::from_values([5.0]).unwrap();
        assert_eq!(s.count(), 1);
        assert_eq!(s.mean(), 5.0);
        assert_eq!(s.variance(), None);
    }

    #[test]
    fn textbook_sequence_matches_two_pass() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        let (mean, var) = batch(&xs);
        let s = OnlineStats::from_values(xs).unwrap();
        assert!((s.mean() - mean).abs() < 1e-12);
        assert!((s.variance().unwrap() - var).abs() < 1e-12);
        assert_eq!(mean, 5.0);
        assert!((var - 4.571_428_571_428_571).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut s = OnlineStats::new();
        assert!(s.add(f64::NAN).is_err());
        assert!(s.add(f64::INFINITY).is_err());
        assert_eq!(s.count(), 0);
        assert_eq!(s.bounds(), None);
    }
}
