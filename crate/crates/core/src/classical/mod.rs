//! The classical open baker's map: partition bookkeeping, symbolic dynamics,
//! escape sets, trapped-set covers and thermodynamic quantities.

mod escape;
mod map;
mod spec;
mod thermo;

use num_rational::BigRational;
use serde::Serialize;

use crate::rational::{self, ExactRational};

pub use escape::{escape_report, trapped_cover, Cover, EscapeReport, Rect, Tail, INTERVAL_RECORD_LIMIT};
pub use map::{escape_time, itinerary, step, step_exact, Direction, Word};
pub use spec::{BakerSpec, SpecSummary};
pub use thermo::{pressure, thermo_report, thermo_report_on, PressureMethod, PressureReport};

/// Half-open interval `[lo, hi)` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn unit() -> Self {
        Self { lo: rational::rat(0, 1), hi: rational::rat(1, 1) }
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        rational::to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rational::to_f64(&self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Interval", 2)?;
        s.serialize_field("lo", &ExactRational(self.lo.clone()))?;
        s.serialize_field("hi", &ExactRational(self.hi.clone()))?;
        s.end()
    }
}
