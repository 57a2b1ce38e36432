//! Core enumerations and the per-response record.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The six program voucher types, in their fixed reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoucherKind {
    Accommodation,
    Dining,
    Cultural,
    Sports,
    Market,
    Agricultural,
}

impl VoucherKind {
    pub const ALL: [VoucherKind; 6] = [
        VoucherKind::Accommodation,
        VoucherKind::Dining,
        VoucherKind::Cultural,
        VoucherKind::Sports,
        VoucherKind::Market,
        VoucherKind::Agricultural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VoucherKind::Accommodation => "accommodation",
            VoucherKind::Dining => "dining",
            VoucherKind::Cultural => "cultural",
            VoucherKind::Sports => "sports",
            VoucherKind::Market => "market",
            VoucherKind::Agricultural => "agricultural",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.as_str() == token)
    }

    /// Position in the fixed order, 0-based.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|k| *k == self).unwrap()
    }
}

impl fmt::Display for VoucherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Survey wave: the first-round voucher set or the later small bonus set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wave {
    Original,
    Extra,
}

impl Wave {
    pub fn as_str(self) -> &'static str {
        match self {
            Wave::Original => "original",
            Wave::Extra => "extra",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "original" => Some(Wave::Original),
            "extra" => Some(Wave::Extra),
            _ => None,
        }
    }
}

impl fmt::Display for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Male, Gender::Female];

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|g| g.as_str() == token)
    }
}

/// Residence as collected: Taipei, the three adjacent northern cities, or
/// anywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Residence {
    Taipei,
    NorthernAdjacent,
    Other,
}

impl Residence {
    pub const ALL: [Residence; 3] = [Residence::Taipei, Residence::NorthernAdjacent, Residence::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Residence::Taipei => "taipei",
            Residence::NorthernAdjacent => "northern_adjacent",
            Residence::Other => "other",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|r| r.as_str() == token)
    }

    /// Two-way coarsening used in the headline tables.
    pub fn coarse(self) -> ResidenceGroup {
        match self {
            Residence::Taipei => ResidenceGroup::Taipei,
            Residence::NorthernAdjacent | Residence::Other => ResidenceGroup::OtherCities,
        }
    }
}

/// Coarsened residence: Taipei vs everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidenceGroup {
    Taipei,
    OtherCities,
}

impl ResidenceGroup {
    pub const ALL: [ResidenceGroup; 2] = [ResidenceGroup::Taipei, ResidenceGroup::OtherCities];

    pub fn as_str(self) -> &'static str {
        match self {
            ResidenceGroup::Taipei => "taipei",
            ResidenceGroup::OtherCities => "other_cities",
        }
    }
}

/// Age band as collected (six options).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AgeBand {
    #[serde(rename = "under_20")]
    Under20,
    #[serde(rename = "20_29")]
    From20To29,
    #[serde(rename = "30_39")]
    From30To39,
    #[serde(rename = "40_49")]
    From40To49,
    #[serde(rename = "50_59")]
    From50To59,
    #[serde(rename = "60_plus")]
    Over60,
}

impl AgeBand {
    pub const ALL: [AgeBand; 6] = [
        AgeBand::Under20,
        AgeBand::From20To29,
        AgeBand::From30To39,
        AgeBand::From40To49,
        AgeBand::From50To59,
        AgeBand::Over60,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AgeBand::Under20 => "under_20",
            AgeBand::From20To29 => "20_29",
            AgeBand::From30To39 => "30_39",
            AgeBand::From40To49 => "40_49",
            AgeBand::From50To59 => "50_59",
            AgeBand::Over60 => "60_plus",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|a| a.as_str() == token)
    }

    /// Three-way coarsening used in the headline tables.
    pub fn coarse(self) -> AgeGroup {
        match self {
            AgeBand::Under20 | AgeBand::From20To29 => AgeGroup::Under30,
            AgeBand::From30To39 | AgeBand::From40To49 => AgeGroup::From30To49,
            AgeBand::From50To59 | AgeBand::Over60 => AgeGroup::Over49,
        }
    }
}

/// Coarsened age: under 30, 30–49, over 49.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AgeGroup {
    #[serde(rename = "under_30")]
    Under30,
    #[serde(rename = "30_49")]
    From30To49,
    #[serde(rename = "over_49")]
    Over49,
}

impl AgeGroup {
    pub const ALL: [AgeGroup; 3] = [AgeGroup::Under30, AgeGroup::From30To49, AgeGroup::Over49];

    pub fn as_str(self) -> &'static str {
        match self {
            AgeGroup::Under30 => "under_30",
            AgeGroup::From30To49 => "30_49",
            AgeGroup::Over49 => "over_49",
        }
    }
}

/// Respondent demographics. Every field is required; rows with missing
/// demographics are rejected at ingest rather than repaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DemographicProfile {
    pub gender: Gender,
    pub residence: Residence,
    pub age_band: AgeBand,
}

/// One respondent × voucher observation.
///
/// `triggered` is the answer to the substitution question ("did you make this
/// consumption because you received the voucher?"): `true` means "Yes", i.e.
/// the spending was newly generated. The substitution indicator is its
/// negation, see [`SurveyRecord::substituted`]. `bracket_index` points into
/// the voucher's bracket schedule and encodes the reported additional
/// out-of-pocket spending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub respondent_id: String,
    pub voucher: VoucherKind,
    pub profile: DemographicProfile,
    pub triggered: bool,
    pub bracket_index: usize,
    pub wave: Wave,
}

impl SurveyRecord {
    /// The substitution indicator: `true` when the respondent answered "No",
    /// meaning the spending would have happened anyway.
    pub fn substituted(&self) -> bool {
        !self.triggered
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn voucher_kinds_are_six_distinct_and_totally_ordered() {
        assert_eq!(VoucherKind::ALL.len(), 6);
        for w in VoucherKind::ALL.windows(2) {
            assert!(w[0] < w[1]);
        }
        for k in VoucherKind::ALL {
            assert_eq!(VoucherKind::parse(k.as_str()), Some(k));
            assert_eq!(VoucherKind::ALL[k.index()], k);
        }
        assert_eq!(VoucherKind::parse("lottery"), None);
    }

    #[test]
    fn substitution_indicator_negates_triggered() {
        let mut rec = SurveyRecord {
            respondent_id: "r1".into(),
            voucher: VoucherKind::Dining,
            profile: DemographicProfile {
                gender: Gender::Male,
                residence: Residence::Taipei,
                age_band: AgeBand::From30To39,
            },
            triggered: true,
            bracket_index: 0,
            wave: Wave::Original,
        };
        assert!(!rec.substituted());
        rec.triggered = false;
        assert!(rec.substituted());
    }

    #[test]
    fn coarsenings_cover_all_raw_levels() {
        assert_eq!(Residence::Taipei.coarse(), ResidenceGroup::Taipei);
        assert_eq!(Residence::NorthernAdjacent.coarse(), ResidenceGroup::OtherCities);
        assert_eq!(Residence::Other.coarse(), ResidenceGroup::OtherCities);
        assert_eq!(AgeBand::Under20.coarse(), AgeGroup::Under30);
        assert_eq!(AgeBand::From40To49.coarse(), AgeGroup::From30To49);
        assert_eq!(AgeBand::Over60.coarse(), AgeGroup::Over49);
    }
}
