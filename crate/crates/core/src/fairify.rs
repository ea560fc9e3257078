//! Entry point choosing between the equal-size and the arbitrary-ratio pipelines.

use std::str::FromStr;

use crate::equi::fair_equi;
use crate::error::Result;
use crate::fairness::ColorAssignment;
use crate::general::fair_general;
use crate::partition::Clustering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FairifyMode {
    Equi,
    General,
    /// `Equi` when all color classes have the same size, `General` otherwise.
    #[default]
    Auto,
}

impl FromStr for FairifyMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "equi" => Ok(FairifyMode::Equi),
            "general" => Ok(FairifyMode::General),
            "auto" => Ok(FairifyMode::Auto),
            other => Err(format!("unknown mode `{other}` (expected equi, general or auto)")),
        }
    }
}

/// A fair clustering close to `d`.
pub fn fairify(d: &Clustering, colors: &ColorAssignment, mode: FairifyMode) -> Result<Clustering> {
    match mode {
        FairifyMode::Equi => fair_equi(d, colors),
        FairifyMode::General => fair_general(d, colors),
        FairifyMode::Auto if colors.is_equi() => fair_equi(d, colors),
        FairifyMode::Auto => fair_general(d, colors),
    }
}
