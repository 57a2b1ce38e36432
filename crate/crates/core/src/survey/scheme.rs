//! Demographic stratification.
//!
//! A scheme is an ordered list of demographic dimensions; its groups are the
//! full cross of the dimension levels, so every record of a voucher type
//! falls in exactly one group. Dimensions come in raw and coarsened flavors
//! (`residence` is the two-way Taipei/other split, `residence_raw` the
//! three-way answer as collected; likewise `age` vs `age_raw`), which is how
//! coarsening stays configurable while records keep their raw granularity.

use super::types::{AgeBand, AgeGroup, DemographicProfile, Gender, Residence, ResidenceGroup, SurveyRecord, VoucherKind};
use super::{Dataset, SurveyError};
use std::fmt;

/// One stratification dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Gender,
    Residence,
    ResidenceRaw,
    Age,
    AgeRaw,
}

impl Dimension {
    pub const ALL: [Dimension; 5] = [
        Dimension::Gender,
        Dimension::Residence,
        Dimension::ResidenceRaw,
        Dimension::Age,
        Dimension::AgeRaw,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Dimension::Gender => "gender",
            Dimension::Residence => "residence",
            Dimension::ResidenceRaw => "residence_raw",
            Dimension::Age => "age",
            Dimension::AgeRaw => "age_raw",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|d| d.token() == token)
    }

    pub fn level_count(self) -> usize {
        match self {
            Dimension::Gender => Gender::ALL.len(),
            Dimension::Residence => ResidenceGroup::ALL.len(),
            Dimension::ResidenceRaw => Residence::ALL.len(),
            Dimension::Age => AgeGroup::ALL.len(),
            Dimension::AgeRaw => AgeBand::ALL.len(),
        }
    }

    pub fn level_label(self, level: usize) -> &'static str {
        match self {
            Dimension::Gender => Gender::ALL[level].as_str(),
            Dimension::Residence => ResidenceGroup::ALL[level].as_str(),
            Dimension::ResidenceRaw => Residence::ALL[level].as_str(),
            Dimension::Age => AgeGroup::ALL[level].as_str(),
            Dimension::AgeRaw => AgeBand::ALL[level].as_str(),
        }
    }

    pub fn level_of(self, profile: &DemographicProfile) -> usize {
        match self {
            Dimension::Gender => profile.gender as usize,
            Dimension::Residence => profile.residence.coarse() as usize,
            Dimension::ResidenceRaw => profile.residence as usize,
            Dimension::Age => profile.age_band.coarse() as usize,
            Dimension::AgeRaw => profile.age_band as usize,
        }
    }

    /// Whether groups of `self` can be formed by merging groups of `finer`:
    /// a dimension refines itself, and each raw dimension refines its
    /// coarsened counterpart.
    pub fn is_refined_by(self, finer: Dimension) -> bool {
        finer == self
            || matches!(
                (self, finer),
                (Dimension::Residence, Dimension::ResidenceRaw) | (Dimension::Age, Dimension::AgeRaw)
            )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Identifies one stratum, e.g. `female/taipei/30_49`. The special key
/// `overall` labels whole-sample estimates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey(String);

impl GroupKey {
    pub const OVERALL: &'static str = "overall";

    pub fn overall() -> Self {
        GroupKey(Self::OVERALL.into())
    }

    pub fn is_overall(&self) -> bool {
        self.0 == Self::OVERALL
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for GroupKey {
    fn from(s: String) -> Self {
        GroupKey(s)
    }
}

/// An ordered cross of demographic dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratificationScheme {
    dims: Vec<Dimension>,
}

impl StratificationScheme {
    pub fn new(dims: Vec<Dimension>) -> Result<Self, SurveyError> {
        if dims.is_empty() {
            return Err(SurveyError::Scheme("at least one dimension is required".into()));
        }
        for (i, d) in dims.iter().enumerate() {
            if dims[..i].contains(d) {
                return Err(SurveyError::Scheme(format!("duplicate dimension `{d}`")));
            }
            // gender×residence×residence_raw would double-count one trait
            for prev in &dims[..i] {
                if prev.is_refined_by(*d) || d.is_refined_by(*prev) {
                    return Err(SurveyError::Scheme(format!(
                        "dimensions `{prev}` and `{d}` describe the same trait"
                    )));
                }
            }
        }
        Ok(Self { dims })
    }

    /// Parse a comma-separated dimension list, e.g. `gender,residence,age`.
    pub fn parse(text: &str) -> Result<Self, SurveyError> {
        let dims = text
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                Dimension::parse(t).ok_or_else(|| {
                    SurveyError::Scheme(format!(
                        "unknown dimension `{t}` (expected one of gender, residence, residence_raw, age, age_raw)"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims)
    }

    /// The default finest stratification: gender × residence × age, coarsened.
    pub fn finest_default() -> Self {
        Self::new(vec![Dimension::Gender, Dimension::Residence, Dimension::Age]).unwrap()
    }

    pub fn dimensions(&self) -> &[Dimension] {
        &self.dims
    }

    /// Number of groups `J` (the full cross of all dimension levels).
    pub fn group_count(&self) -> usize {
        self.dims.iter().map(|d| d.level_count()).product()
    }

    /// Mixed-radix group index of a profile; groups are ordered
    /// lexicographically by dimension level.
    pub fn group_index(&self, profile: &DemographicProfile) -> usize {
        let mut idx = 0;
        for d in &self.dims {
            idx = idx * d.level_count() + d.level_of(profile);
        }
        idx
    }

    pub fn group_key(&self, mut index: usize) -> GroupKey {
        let mut levels = vec![0usize; self.dims.len()];
        for (i, d) in self.dims.iter().enumerate().rev() {
            levels[i] = index % d.level_count();
            index /= d.level_count();
        }
        let label = self
            .dims
            .iter()
            .zip(&levels)
            .map(|(d, &l)| d.level_label(l))
            .collect::<Vec<_>>()
            .join("/");
        GroupKey(label)
    }

    pub fn group_keys(&self) -> Vec<GroupKey> {
        (0..self.group_count()).map(|i| self.group_key(i)).collect()
    }

    /// Whether every group of `self` is a union of groups of `finer`, so
    /// that estimates reported on `self` aggregate `finer`'s cells.
    pub fn is_coarsening_of(&self, finer: &StratificationScheme) -> bool {
        self.dims
            .iter()
            .all(|d| finer.dims.iter().any(|f| d.is_refined_by(*f)))
    }

    /// A profile that falls into group `index`. Traits not covered by the
    /// scheme take arbitrary fixed values, so the result is only meaningful
    /// under this scheme or one of its coarsenings.
    pub fn representative_profile(&self, mut index: usize) -> DemographicProfile {
        let mut profile = DemographicProfile {
            gender: Gender::Male,
            residence: Residence::Taipei,
            age_band: AgeBand::From30To39,
        };
        let mut levels = vec![0usize; self.dims.len()];
        for (i, d) in self.dims.iter().enumerate().rev() {
            levels[i] = index % d.level_count();
            index /= d.level_count();
        }
        for (d, &l) in self.dims.iter().zip(&levels) {
            match d {
                Dimension::Gender => profile.gender = Gender::ALL[l],
                Dimension::ResidenceRaw => profile.residence = Residence::ALL[l],
                Dimension::Residence => {
                    profile.residence = match ResidenceGroup::ALL[l] {
                        ResidenceGroup::Taipei => Residence::Taipei,
                        ResidenceGroup::OtherCities => Residence::Other,
                    }
                }
                Dimension::AgeRaw => profile.age_band = AgeBand::ALL[l],
                Dimension::Age => {
                    profile.age_band = match AgeGroup::ALL[l] {
                        AgeGroup::Under30 => AgeBand::From20To29,
                        AgeGroup::From30To49 => AgeBand::From30To39,
                        AgeGroup::Over49 => AgeBand::From50To59,
                    }
                }
            }
        }
        profile
    }
}

impl fmt::Display for StratificationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<_> = self.dims.iter().map(|d| d.token()).collect();
        f.write_str(&tokens.join(","))
    }
}

/// Partition the voucher-`kind` records of `ds` into the scheme's groups.
/// Every group of the cross is returned, including empty ones, in fixed
/// group order; subset sizes sum to `n_k`.
pub fn stratify<'a>(
    ds: &'a Dataset,
    scheme: &StratificationScheme,
    kind: VoucherKind,
) -> Vec<(GroupKey, Vec<&'a SurveyRecord>)> {
    stratify_records(ds.records().iter().filter(|r| r.voucher == kind), scheme)
}

/// Partition an arbitrary record subset (already filtered by voucher/wave).
pub fn stratify_records<'a>(
    records: impl IntoIterator<Item = &'a SurveyRecord>,
    scheme: &StratificationScheme,
) -> Vec<(GroupKey, Vec<&'a SurveyRecord>)> {
    let mut groups: Vec<Vec<&SurveyRecord>> = vec![Vec::new(); scheme.group_count()];
    for rec in records {
        groups[scheme.group_index(&rec.profile)].push(rec);
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(i, subset)| (scheme.group_key(i), subset))
        .collect()
}
