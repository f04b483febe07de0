//! PSL(2,Z) and its free congruence subgroup Gamma(2).

mod enumerate;
mod free;
mod magnus;
mod orbit;
mod reduce;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moebius::{GroupElement, Letter, MoebiusError, Point};

pub use enumerate::{ENUMERATION_CAP, enumerate_by_entry, enumerate_group};
pub use free::{FreeWord, gamma2_decompose};
pub use magnus::{MAGNUS_DEGREES, MagnusSeries, magnus_cmp, magnus_less};
pub use orbit::{
    DEDUP_DISTANCE, OrbitBudget, OrbitEntry, OrbitSample, certified_entry_bound,
    certified_radius, orbit_sample,
};
pub use reduce::{reduce_to_fundamental_domain, stabilizer_order};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("enumeration exceeded the cap of {cap} elements")]
    BudgetOverflow { cap: usize },
    #[error("{0} is not congruent to the identity modulo 2")]
    NotInGamma2(GroupElement),
    #[error("word contains letters outside {{A, B}}: {0}")]
    NotFreeLetter(String),
    #[error("Magnus comparison unresolved up to degree {0}")]
    UnresolvedTie(usize),
    #[error("observed image multiplicity {observed} exceeds the stabilizer order {expected}")]
    InconsistentStabilizer { observed: usize, expected: u32 },
    #[error("unknown group preset {0:?} (expected pslz or gamma2)")]
    UnknownPreset(String),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "PSL2Z")]
    Psl2z,
    #[serde(rename = "Gamma2")]
    Gamma2,
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetName::Psl2z => "PSL2Z",
            PresetName::Gamma2 => "Gamma2",
        })
    }
}

impl FromStr for PresetName {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pslz" | "psl2z" | "psl(2,z)" | "modular" => Ok(PresetName::Psl2z),
            "gamma2" | "gamma(2)" | "g2" => Ok(PresetName::Gamma2),
            _ => Err(GroupError::UnknownPreset(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub point: Point,
    pub order: u32,
}

/// A Fuchsian group preset with its generators and covolume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPreset {
    pub name: PresetName,
    pub generators: Vec<GroupElement>,
    /// Covolume divided by π.
    pub covolume_over_pi: Ratio<i64>,
    pub elliptic: Vec<EllipticPoint>,
}

impl GroupPreset {
    pub fn psl2z() -> Self {
        let rho = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        GroupPreset {
            name: PresetName::Psl2z,
            generators: vec![GroupElement::s(), GroupElement::t()],
            covolume_over_pi: Ratio::new(1, 3),
            elliptic: vec![
                EllipticPoint { point: Point::i(), order: 2 },
                EllipticPoint { point: Point::half_plane(rho).expect("interior"), order: 3 },
            ],
        }
    }

    pub fn gamma2() -> Self {
        GroupPreset {
            name: PresetName::Gamma2,
            generators: vec![GroupElement::generator(Letter::A), GroupElement::generator(Letter::B)],
            covolume_over_pi: Ratio::new(2, 1),
            elliptic: Vec::new(),
        }
    }

    pub fn from_name(name: PresetName) -> Self {
        match name {
            PresetName::Psl2z => Self::psl2z(),
            PresetName::Gamma2 => Self::gamma2(),
        }
    }

    pub fn covolume(&self) -> f64 {
        *self.covolume_over_pi.numer() as f64 / *self.covolume_over_pi.denom() as f64
            * std::f64::consts::PI
    }

    /// Generators together with their inverses, as BFS letters.
    pub fn letters(&self) -> &'static [Letter] {
        match self.name {
            PresetName::Psl2z => &[Letter::S, Letter::T, Letter::TInv],
            PresetName::Gamma2 => &[Letter::A, Letter::AInv, Letter::B, Letter::BInv],
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self.name {
            PresetName::Psl2z => true,
            PresetName::Gamma2 => g.in_gamma2(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_six_covolume() {
        assert_eq!(
            GroupPreset::gamma2().covolume_over_pi,
            GroupPreset::psl2z().covolume_over_pi * 6
        );
    }

    #[test]
    fn preset_names_parse() {
        assert_eq!("pslz".parse::<PresetName>().unwrap(), PresetName::Psl2z);
        assert_eq!("Gamma2".parse::<PresetName>().unwrap(), PresetName::Gamma2);
        assert!("sl3z".parse::<PresetName>().is_err());
    }
}
