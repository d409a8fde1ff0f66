//! The measure registry and the classical 2D aesthetic measures.
//!
//! Every measure reports a raw value plus its polarity. The 2D measures work
//! on node centers and edge centerlines only; tube thickness is the concern
//! of [`crate::overlap`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub mod crossings;
pub mod layout2d;
pub mod stress;
pub mod symmetry;

pub use crossings::{crossings, measure_car, measure_cr, Crossing, CrossingSet};
pub use layout2d::{
    measure_angular_resolution, measure_area_aspect, measure_concentration, measure_edge_length_deviation,
    measure_edge_orthogonality, measure_gabriel, measure_node_orthogonality,
};
pub use stress::{measure_stress, measure_stress_with, GraphDistances};
pub use symmetry::{measure_symmetry, SymmetryKind, SymmetryParams};

/// Version tag of the measure registry; bumped whenever a definition changes.
pub const REGISTRY_VERSION: &str = "vantage-measures/1";

/// Identifiers of the 21 measures, in registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureId {
    CR,
    ST,
    CAR,
    AR,
    ASP,
    CON,
    NO,
    GR,
    ANGR,
    EO,
    ELD,
    ESR,
    ESO,
    EST,
    NNO,
    ENO,
    NEO,
    NNOA,
    ENOA,
    NEOA,
    ISO,
}

pub const MEASURE_COUNT: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    LowerBetter,
    HigherBetter,
}

impl MeasureId {
    pub const ALL: [MeasureId; MEASURE_COUNT] = [
        MeasureId::CR,
        MeasureId::ST,
        MeasureId::CAR,
        MeasureId::AR,
        MeasureId::ASP,
        MeasureId::CON,
        MeasureId::NO,
        MeasureId::GR,
        MeasureId::ANGR,
        MeasureId::EO,
        MeasureId::ELD,
        MeasureId::ESR,
        MeasureId::ESO,
        MeasureId::EST,
        MeasureId::NNO,
        MeasureId::ENO,
        MeasureId::NEO,
        MeasureId::NNOA,
        MeasureId::ENOA,
        MeasureId::NEOA,
        MeasureId::ISO,
    ];

    /// The six depth-aware overlap measures.
    pub const OVERLAP: [MeasureId; 6] = [
        MeasureId::NNO,
        MeasureId::ENO,
        MeasureId::NEO,
        MeasureId::NNOA,
        MeasureId::ENOA,
        MeasureId::NEOA,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureId::CR => "CR",
            MeasureId::ST => "ST",
            MeasureId::CAR => "CAR",
            MeasureId::AR => "AR",
            MeasureId::ASP => "ASP",
            MeasureId::CON => "CON",
            MeasureId::NO => "NO",
            MeasureId::GR => "GR",
            MeasureId::ANGR => "ANGR",
            MeasureId::EO => "EO",
            MeasureId::ELD => "ELD",
            MeasureId::ESR => "ESR",
            MeasureId::ESO => "ESO",
            MeasureId::EST => "EST",
            MeasureId::NNO => "NNO",
            MeasureId::ENO => "ENO",
            MeasureId::NEO => "NEO",
            MeasureId::NNOA => "NNOA",
            MeasureId::ENOA => "ENOA",
            MeasureId::NEOA => "NEOA",
            MeasureId::ISO => "ISO",
        }
    }

    pub fn polarity(self) -> Polarity {
        use MeasureId::*;
        match self {
            CR | ST | CON | ELD | NNO | ENO | NEO | NNOA | ENOA | NEOA => Polarity::LowerBetter,
            CAR | AR | ASP | NO | GR | ANGR | EO | ESR | ESO | EST | ISO => Polarity::HigherBetter,
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MeasureId::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown measure `{s}`")))
    }
}

/// A raw measure value with its registry polarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMeasure {
    pub id: MeasureId,
    pub value: f64,
    pub polarity: Polarity,
}

impl RawMeasure {
    pub fn new(id: MeasureId, value: f64) -> Self {
        RawMeasure {
            id,
            value,
            polarity: id.polarity(),
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use crate::projection::{ProjectedDrawing, Vec2, Viewport};

    pub fn drawing_from(points: &[(f64, f64)], edges: &[(usize, usize)]) -> ProjectedDrawing {
        let centers: Vec<Vec2> = points.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        ProjectedDrawing::flat(&centers, edges, 0.05, 0.01, Viewport { width: 2.0, height: 2.0 })
    }
}
