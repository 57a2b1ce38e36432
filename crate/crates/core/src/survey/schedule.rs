//! Bracket schedules for the additional-spending question.
//!
//! A schedule is an ordered list of half-open NT$ intervals: bracket 0 is the
//! degenerate "no additional spending" answer, interior brackets are
//! inclusive integer ranges exactly as printed on the questionnaire
//! (`1–50`, `51–100`, …), and the last bracket is open-ended ("more than L").
//! Midpoint imputation maps bracket 0 to 0, interior brackets to the
//! arithmetic mean of their bounds, and the open top bracket to its lower
//! bound.

use super::SurveyError;
use serde::{Deserialize, Serialize};

/// Bracket schedule, stored as the increasing boundary list
/// `[lo₁, hi₁, hi₂, …, hiₘ]`: the first element is the lower edge of the
/// first paid bracket and each later element closes one interior bracket.
/// The open top bracket starts at `hiₘ + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BracketSchedule {
    bounds: Vec<u64>,
}

impl BracketSchedule {
    pub fn from_bounds(bounds: &[u64]) -> Result<Self, SurveyError> {
        if bounds.is_empty() {
            return Err(SurveyError::Schedule("boundary list is empty".into()));
        }
        if bounds[0] == 0 {
            return Err(SurveyError::Schedule(
                "first boundary must be ≥ 1 (bracket 0 is the no-spending answer)".into(),
            ));
        }
        for pair in bounds.windows(2) {
            if pair[1] <= pair[0] {
                return Err(SurveyError::Schedule(format!(
                    "boundaries must be strictly increasing, got {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        Ok(Self { bounds: bounds.to_vec() })
    }

    /// Total number of brackets `C` (no-spending + interiors + open top).
    pub fn bracket_count(&self) -> usize {
        self.bounds.len() + 1
    }

    pub fn contains_index(&self, c: usize) -> bool {
        c < self.bracket_count()
    }

    /// Lower bound of the open-ended top bracket ("more than L" ⇒ `L`).
    pub fn top_lower_bound(&self) -> u64 {
        self.bounds[self.bounds.len() - 1] + 1
    }

    /// Midpoint imputation for bracket `c`.
    pub fn midpoint(&self, c: usize) -> Result<f64, SurveyError> {
        if !self.contains_index(c) {
            return Err(SurveyError::Schedule(format!(
                "bracket index {c} out of range (schedule has {} brackets)",
                self.bracket_count()
            )));
        }
        Ok(self.midpoint_unchecked(c))
    }

    fn midpoint_unchecked(&self, c: usize) -> f64 {
        if c == 0 {
            return 0.0;
        }
        if c == self.bounds.len() {
            return self.top_lower_bound() as f64;
        }
        let lo = if c == 1 { self.bounds[0] } else { self.bounds[c - 1] + 1 };
        let hi = self.bounds[c];
        (lo as f64 + hi as f64) / 2.0
    }

    /// All midpoints in bracket order.
    pub fn midpoints(&self) -> Vec<f64> {
        (0..self.bracket_count()).map(|c| self.midpoint_unchecked(c)).collect()
    }

    pub fn max_midpoint(&self) -> f64 {
        self.top_lower_bound() as f64
    }

    /// Human-readable bracket label.
    pub fn label(&self, c: usize) -> String {
        if c == 0 {
            "none".into()
        } else if c == self.bounds.len() {
            format!(">{}", self.top_lower_bound())
        } else {
            let lo = if c == 1 { self.bounds[0] } else { self.bounds[c - 1] + 1 };
            format!("{}-{}", lo, self.bounds[c])
        }
    }

    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dining() -> BracketSchedule {
        BracketSchedule::from_bounds(&[1, 50, 100, 250, 500, 1000, 2000]).unwrap()
    }

    fn accommodation() -> BracketSchedule {
        BracketSchedule::from_bounds(&[1, 1000, 3000, 5000, 8000, 10000, 20000]).unwrap()
    }

    #[test]
    fn bracket_zero_maps_to_zero() {
        assert_eq!(dining().midpoint(0).unwrap(), 0.0);
        assert_eq!(accommodation().midpoint(0).unwrap(), 0.0);
    }

    #[test]
    fn interior_midpoint_is_arithmetic_mean_of_printed_bounds() {
        // "NT$251–500"
        assert_eq!(dining().midpoint(4).unwrap(), 375.5);
        assert_eq!(dining().midpoint(1).unwrap(), 25.5);
        assert_eq!(dining().midpoint(5).unwrap(), 750.5);
    }

    #[test]
    fn open_top_bracket_maps_to_its_lower_bound() {
        // "More than NT$20,001"
        assert_eq!(accommodation().midpoint(7).unwrap(), 20001.0);
        assert_eq!(dining().midpoint(7).unwrap(), 2001.0);
    }

    #[test]
    fn midpoints_strictly_increase_after_zero() {
        for sched in [dining(), accommodation()] {
            let m = sched.midpoints();
            assert_eq!(m[0], 0.0);
            for w in m[1..].windows(2) {
                assert!(w[0] < w[1]);
            }
            assert!(m[1] > 0.0);
            assert_eq!(*m.last().unwrap(), sched.max_midpoint());
        }
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        assert!(dining().midpoint(8).is_err());
        assert!(dining().contains_index(7));
        assert!(!dining().contains_index(8));
    }

    #[test]
    fn degenerate_two_bracket_schedule_is_valid() {
        let s = BracketSchedule::from_bounds(&[2000]).unwrap();
        assert_eq!(s.bracket_count(), 2);
        assert_eq!(s.midpoint(1).unwrap(), 2001.0);
    }

    #[test]
    fn invalid_boundary_lists_are_rejected() {
        assert!(BracketSchedule::from_bounds(&[]).is_err());
        assert!(BracketSchedule::from_bounds(&[0, 50]).is_err());
        assert!(BracketSchedule::from_bounds(&[1, 50, 50]).is_err());
        assert!(BracketSchedule::from_bounds(&[1, 100, 50]).is_err());
    }

    #[test]
    fn labels_match_printed_intervals() {
        let s = dining();
        assert_eq!(s.label(0), "none");
        assert_eq!(s.label(1), "1-50");
        assert_eq!(s.label(2), "51-100");
        assert_eq!(s.label(7), ">2001");
    }
}
