//! Competition scoring arithmetic: accuracy ratio and multiplier, time
//! multiplier, per-kind submission points, challenge totals, and the
//! leaderboard rubric.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{ScoreComponents, ScoreInputs};
use crate::time::DurationMillis;

#[derive(Debug, Error, PartialEq)]
pub enum ScoringError {
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
}

/// Ratio of accurate submissions, `acc / (acc + inacc)`.
///
/// With no submissions at all the ratio is defined as 1.0: no inaccuracy has
/// been demonstrated, which keeps the accuracy multiplier neutral.
pub fn accuracy_ratio(acc: u64, inacc: u64) -> f64 {
    let total = acc + inacc;
    if total == 0 {
        return 1.0;
    }
    acc as f64 / total as f64
}

/// Accuracy multiplier `1 - (1 - r) / 4`, mapping r in [0, 1] to [0.75, 1].
pub fn accuracy_multiplier(r: f64) -> Result<f64, ScoringError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(ScoringError::OutOfRange {
            what: "accuracy ratio",
            value: r,
        });
    }
    Ok(1.0 - (1.0 - r) / 4.0)
}

/// Time multiplier `0.5 + time_rem / (2 * time_window)`, decaying from 1.0
/// at task start to a 0.5 floor at the deadline.
pub fn time_multiplier(
    time_rem: DurationMillis,
    time_window: DurationMillis,
) -> Result<f64, ScoringError> {
    if time_window.is_zero() {
        return Err(ScoringError::OutOfRange {
            what: "time window",
            value: 0.0,
        });
    }
    if time_rem > time_window {
        return Err(ScoringError::OutOfRange {
            what: "time remaining",
            value: time_rem.as_millis() as f64,
        });
    }
    Ok(0.5 + time_rem.as_millis() as f64 / (2.0 * time_window.as_millis() as f64))
}

/// What kind of submission is being scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmissionKind {
    Pov,
    Patch,
    Sarif,
    Bundle,
}

impl SubmissionKind {
    /// Base point value before time decay.
    pub fn base_points(self) -> f64 {
        match self {
            SubmissionKind::Pov => 2.0,
            SubmissionKind::Patch => 6.0,
            SubmissionKind::Sarif => 1.0,
            SubmissionKind::Bundle => 1.0,
        }
    }
}

/// Points earned by one submission: the kind's base value scaled by tau when
/// it passed, zero otherwise.
pub fn component_points(kind: SubmissionKind, passed: bool, tau: f64) -> f64 {
    if passed {
        kind.base_points() * tau
    } else {
        0.0
    }
}

/// Per-kind component sums for one challenge, each already tau-scaled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentSums {
    pub vds: f64,
    pub prs: f64,
    pub sas: f64,
    pub bdl: f64,
}

/// Combines component sums with the accuracy inputs into the final score,
/// `AM x (VDS + PRS + SAS + BDL)`.
pub fn challenge_score(
    components: ComponentSums,
    inputs: &ScoreInputs,
) -> Result<ScoreComponents, ScoringError> {
    let am = accuracy_multiplier(accuracy_ratio(inputs.acc, inputs.inacc))?;
    let total = am * (components.vds + components.prs + components.sas + components.bdl);
    Ok(ScoreComponents {
        vds: components.vds,
        prs: components.prs,
        sas: components.sas,
        bdl: components.bdl,
        am,
        total,
    })
}

/// Leaderboard rubric: 2 points per POV, 6 per patch, no decay.
pub fn leaderboard_score(pov_count: u64, patch_count: u64) -> u64 {
    2 * pov_count + 6 * patch_count
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn accuracy_ratio_values() {
        assert!((accuracy_ratio(3, 1) - 0.75).abs() < TOL);
        assert!((accuracy_ratio(0, 0) - 1.0).abs() < TOL);
        assert!((accuracy_ratio(5, 0) - 1.0).abs() < TOL);
    }

    #[test]
    fn accuracy_multiplier_values() {
        assert!((accuracy_multiplier(1.0).unwrap() - 1.0).abs() < TOL);
        assert!((accuracy_multiplier(0.0).unwrap() - 0.75).abs() < TOL);
        assert!((accuracy_multiplier(0.75).unwrap() - 0.9375).abs() < TOL);
        assert!(accuracy_multiplier(1.5).is_err());
        assert!(accuracy_multiplier(-0.1).is_err());
    }

    #[test]
    fn time_multiplier_values() {
        let window = DurationMillis::from_minutes(240);
        assert!((time_multiplier(DurationMillis::ZERO, window).unwrap() - 0.5).abs() < TOL);
        assert!((time_multiplier(window, window).unwrap() - 1.0).abs() < TOL);
        assert!((time_multiplier(window.halved(), window).unwrap() - 0.75).abs() < TOL);
        assert!(time_multiplier(window + DurationMillis(1), window).is_err());
        assert!(time_multiplier(DurationMillis(1), DurationMillis::ZERO).is_err());
    }

    #[test]
    fn component_point_values() {
        assert!((component_points(SubmissionKind::Patch, true, 1.0) - 6.0).abs() < TOL);
        assert_eq!(component_points(SubmissionKind::Pov, false, 0.9), 0.0);
        assert!((component_points(SubmissionKind::Sarif, true, 0.5) - 0.5).abs() < TOL);
        assert!((component_points(SubmissionKind::Bundle, true, 0.5) - 0.5).abs() < TOL);
    }

    #[test]
    fn challenge_score_values() {
        let window = DurationMillis::from_minutes(240);
        let perfect = challenge_score(
            ComponentSums {
                vds: 2.0,
                prs: 6.0,
                sas: 1.0,
                bdl: 1.0,
            },
            &ScoreInputs {
                acc: 4,
                inacc: 0,
                time_rem: window,
                time_window: window,
            },
        )
        .unwrap();
        assert!((perfect.total - 10.0).abs() < TOL);

        let empty = challenge_score(
            ComponentSums::default(),
            &ScoreInputs {
                acc: 0,
                inacc: 0,
                time_rem: window,
                time_window: window,
            },
        )
        .unwrap();
        assert_eq!(empty.total, 0.0);

        // r = 0.5 gives AM = 0.875; a lone POV worth 2.0 scores 1.75.
        let half = challenge_score(
            ComponentSums {
                vds: 2.0,
                ..ComponentSums::default()
            },
            &ScoreInputs {
                acc: 1,
                inacc: 1,
                time_rem: window,
                time_window: window,
            },
        )
        .unwrap();
        assert!((half.am - 0.875).abs() < TOL);
        assert!((half.total - 1.75).abs() < TOL);
    }

    #[test]
    fn leaderboard_values() {
        assert_eq!(leaderboard_score(1, 1), 8);
        assert_eq!(leaderboard_score(0, 0), 0);
        assert_eq!(leaderboard_score(3, 2), 18);
    }

    #[test]
    fn multipliers_stay_in_bounds_and_monotonic() {
        let window = DurationMillis::from_secs(1_000);
        let mut previous = 0.0;
        for rem_ms in (0..=1_000_000).step_by(50_000) {
            let tau = time_multiplier(DurationMillis(rem_ms), window).unwrap();
            assert!((0.5..=1.0).contains(&tau));
            assert!(tau >= previous);
            previous = tau;
        }

        let mut previous_am = 0.0;
        for acc in 0..50 {
            let am = accuracy_multiplier(accuracy_ratio(acc, 10)).unwrap();
            assert!((0.75..=1.0).contains(&am));
            if acc > 0 {
                assert!(am >= previous_am);
            }
            previous_am = am;
        }
    }
}
