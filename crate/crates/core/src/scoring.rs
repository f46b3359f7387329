//! Distance from an objective vector to the ideal point.

use crate::dataset::Goal;
use crate::error::{Error, Result};

/// Maps `value` onto `[0, 1]` relative to `[lo, hi]`, clamping values outside
/// the range. Degenerate ranges map to 0.5.
pub fn norm(value: f64, lo: f64, hi: f64) -> Result<f64> {
    for x in [value, lo, hi] {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
    }
    Ok(norm_unchecked(value, lo, hi))
}

#[inline]
pub(crate) fn norm_unchecked(value: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        0.5
    } else {
        ((value - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

/// Ideal normalized coordinate for each goal: 0 when minimizing, 1 when
/// maximizing.
pub fn heaven(goals: &[Goal]) -> Vec<f64> {
    goals
        .iter()
        .map(|g| match g {
            Goal::Minimize => 0.0,
            Goal::Maximize => 1.0,
        })
        .collect()
}

/// Euclidean distance of the normalized objectives to heaven, divided by
/// `sqrt(|objectives|)` so the result lies in `[0, 1]`. Smaller is better.
pub fn distance_to_heaven(objectives: &[f64], bounds: &[(f64, f64)], goals: &[Goal]) -> Result<f64> {
    if objectives.is_empty() {
        return Err(Error::NoObjectiveValues);
    }
    for len in [bounds.len(), goals.len()] {
        if len != objectives.len() {
            return Err(Error::LengthMismatch {
                expected: len,
                found: objectives.len(),
            });
        }
    }
    let mut sum = 0.0;
    for ((&y, &(lo, hi)), goal) in objectives.iter().zip(bounds).zip(goals) {
        if lo > hi {
            return Err(Error::Config(format!("invalid bounds ({lo}, {hi})")));
        }
        let n = norm(y, lo, hi)?;
        let ideal = match goal {
            Goal::Minimize => 0.0,
            Goal::Maximize => 1.0,
        };
        sum += (n - ideal).powi(2);
    }
    Ok((sum / objectives.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MIN: Goal = Goal::Minimize;
    const MAX: Goal = Goal::Maximize;

    #[test]
    fn norm_examples() {
        assert_eq!(norm(5.0, 0.0, 10.0).unwrap(), 0.5);
        assert_eq!(norm(7.0, 7.0, 7.0).unwrap(), 0.5);
        assert_eq!(norm(-3.0, 0.0, 10.0).unwrap(), 0.0);
        assert_eq!(norm(13.0, 0.0, 10.0).unwrap(), 1.0);
        assert!(norm(f64::NAN, 0.0, 1.0).is_err());
        assert!(norm(0.5, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn heaven_and_hell() {
        let b = [(0.0, 10.0), (0.0, 10.0)];
        assert_eq!(distance_to_heaven(&[0.0, 10.0], &b, &[MIN, MAX]).unwrap(), 0.0);
        assert_eq!(distance_to_heaven(&[10.0, 0.0], &b, &[MIN, MAX]).unwrap(), 1.0);
    }

    #[test]
    fn two_minimized_objectives() {
        let d = distance_to_heaven(&[0.6, 0.8], &[(0.0, 1.0), (0.0, 1.0)], &[MIN, MIN]).unwrap();
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(distance_to_heaven(&[], &[], &[]), Err(Error::NoObjectiveValues)));
        assert!(matches!(
            distance_to_heaven(&[1.0], &[(0.0, 1.0), (0.0, 1.0)], &[MIN]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    fn objective() -> impl Strategy<Value = (f64, (f64, f64), Goal)> {
        (-1e3..1e3f64, -1e3..1e3f64, 0.0..1e3f64, any::<bool>())
            .prop_map(|(y, lo, w, max)| (y, (lo, lo + w), if max { MAX } else { MIN }))
    }

    fn split(v: &[(f64, (f64, f64), Goal)]) -> (Vec<f64>, Vec<(f64, f64)>, Vec<Goal>) {
        (
            v.iter().map(|t| t.0).collect(),
            v.iter().map(|t| t.1).collect(),
            v.iter().map(|t| t.2).collect(),
        )
    }

    proptest! {
        #[test]
        fn stays_in_unit_interval(v in prop::collection::vec(objective(), 1..8)) {
            let (y, b, g) = split(&v);
            let d = distance_to_heaven(&y, &b, &g).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
        }

        #[test]
        fn worsening_never_helps(v in prop::collection::vec(objective(), 1..8), i in 0usize..8, step in 0.0..100.0f64) {
            let (mut y, b, g) = split(&v);
            let i = i % y.len();
            let before = distance_to_heaven(&y, &b, &g).unwrap();
            match g[i] {
                Goal::Minimize => y[i] += step,
                Goal::Maximize => y[i] -= step,
            }
            let after = distance_to_heaven(&y, &b, &g).unwrap();
            prop_assert!(after >= before);
        }

        #[test]
        fn permutation_invariant(v in prop::collection::vec(objective(), 1..8), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let (y, b, g) = split(&v);
            let mut p = v.clone();
            p.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let (py, pb, pg) = split(&p);
            let a = distance_to_heaven(&y, &b, &g).unwrap();
            let c = distance_to_heaven(&py, &pb, &pg).unwrap();
            prop_assert!((a - c).abs() < 1e-12);
        }

        #[test]
        fn goal_flip_symmetry(v in prop::collection::vec(objective(), 1..8), i in 0usize..8) {
            let (y, b, g) = split(&v);
            let i = i % y.len();
            let (mut fy, mut fb, mut fg) = (y.clone(), b.clone(), g.clone());
            fy[i] = -y[i];
            fb[i] = (-b[i].1, -b[i].0);
            fg[i] = match g[i] { Goal::Minimize => MAX, Goal::Maximize => MIN };
            let a = distance_to_heaven(&y, &b, &g).unwrap();
            let c = distance_to_heaven(&fy, &fb, &fg).unwrap();
            prop_assert!((a - c).abs() < 1e-12);
        }
    }
}
