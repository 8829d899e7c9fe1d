use serde::{Deserialize, Serialize};

/// Outcome of a (semi)stability test.
///
/// `Borderline` is only produced by numerical tests whose evidence falls inside the
/// tolerance band; exact tests never return it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    Stable,
    StrictlySemistable,
    Unstable,
    Borderline,
}

impl StabilityVerdict {
    pub fn is_semistable(self) -> Option<bool> {
        match self {
            StabilityVerdict::Stable | StabilityVerdict::StrictlySemistable => Some(true),
            StabilityVerdict::Unstable => Some(false),
            StabilityVerdict::Borderline => None,
        }
    }
}

impl std::fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityVerdict::Stable => "stable",
            StabilityVerdict::StrictlySemistable => "strictly_semistable",
            StabilityVerdict::Unstable => "unstable",
            StabilityVerdict::Borderline => "borderline",
        })
    }
}
