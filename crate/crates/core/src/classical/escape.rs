use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::spec::BakerSpec;
use super::Interval;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Maximum number of interval/rectangle records a single call may materialize.
pub const INTERVAL_RECORD_LIMIT: usize = 10_000_000;

/// Escape statistics up to a finite horizon.
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub horizon: usize,
    /// `Vol(D_m)` for `m = 1..=horizon`: mass escaping before completing `m` steps.
    pub escaped_volumes: Vec<BigRational>,
    /// `Vol(∁D_n)` obtained by summing the survivor intervals.
    pub survivor_volume: BigRational,
    /// Level-`n` cylinder intervals of points surviving `n` forward steps, ascending.
    pub survivors: Vec<Interval>,
}

impl Serialize for EscapeReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("EscapeReport", 4)?;
        s.serialize_field("horizon", &self.horizon)?;
        let vols: Vec<ExactRational> = self.escaped_volumes.iter().cloned().map(ExactRational).collect();
        s.serialize_field("escaped_volumes", &vols)?;
        s.serialize_field("survivor_volume", &ExactRational(self.survivor_volume.clone()))?;
        s.serialize_field("survivors", &self.survivors)?;
        s.end()
    }
}

fn guard(spec: &BakerSpec, horizon: usize, factor: usize) -> Result<()> {
    let records = (spec.keep().len() as f64).powi((horizon * factor) as i32);
    if records > INTERVAL_RECORD_LIMIT as f64 {
        return Err(Error::HorizonTooLarge { horizon, records, limit: INTERVAL_RECORD_LIMIT });
    }
    Ok(())
}

/// Level-`m` cylinder intervals, built by prepending kept symbols to level `m-1`.
/// Returns every level `0..=m` so callers can read off the intermediate volumes.
fn cylinder_levels(spec: &BakerSpec, m: usize) -> Vec<Vec<Interval>> {
    let pts = spec.partition();
    let lens = spec.lengths();
    let mut levels = vec![vec![Interval::unit()]];
    for _ in 0..m {
        let prev = levels.last().expect("level 0 present");
        let mut next = Vec::with_capacity(prev.len() * spec.keep().len());
        for &i in spec.keep() {
            for iv in prev {
                next.push(Interval { lo: &pts[i] + &lens[i] * &iv.lo, hi: &pts[i] + &lens[i] * &iv.hi });
            }
        }
        levels.push(next);
    }
    levels
}

fn cylinders(spec: &BakerSpec, m: usize) -> Vec<Interval> {
    cylinder_levels(spec, m).pop().expect("nonempty")
}

fn total_length(intervals: &[Interval]) -> BigRational {
    intervals.iter().fold(BigRational::zero(), |acc, iv| acc + iv.length())
}

pub fn escape_report(spec: &BakerSpec, horizon: usize) -> Result<EscapeReport> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("escape horizon must be at least 1".into()));
    }
    guard(spec, horizon, 1)?;
    let mut levels = cylinder_levels(spec, horizon);
    let escaped_volumes: Vec<BigRational> =
        levels[1..].iter().map(|lvl| BigRational::one() - total_length(lvl)).collect();
    let survivors = levels.pop().expect("nonempty");
    let survivor_volume = BigRational::one() - escaped_volumes.last().expect("horizon >= 1");
    Ok(EscapeReport { horizon, escaped_volumes, survivor_volume, survivors })
}

/// Which part of the trapped set a cover approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tail {
    /// Trapped in both time directions: `Can × Can`.
    K,
    /// Incoming tail (forward trapped): vertical strips `Can × [0,1)`.
    KMinus,
    /// Outgoing tail (backward trapped): horizontal strips `[0,1) × Can`.
    KPlus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rect {
    pub x: Interval,
    pub xi: Interval,
}

impl Rect {
    pub fn area(&self) -> BigRational {
        self.x.length() * self.xi.length()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cover {
    pub tail: Tail,
    pub level: usize,
    pub rects: Vec<Rect>,
}

impl Cover {
    pub fn measure(&self) -> BigRational {
        self.rects.iter().fold(BigRational::zero(), |acc, r| acc + r.area())
    }

    /// The distinct x-footprints (for `KMinus`) or ξ-footprints (for `KPlus`).
    pub fn strips(&self) -> Vec<Interval> {
        let mut v: Vec<Interval> = self
            .rects
            .iter()
            .map(|r| match self.tail {
                Tail::KPlus => r.xi.clone(),
                _ => r.x.clone(),
            })
            .collect();
        v.dedup();
        v
    }
}

/// Level-`m` cover of the trapped set or one of its tails. Level 0 is the whole torus.
pub fn trapped_cover(spec: &BakerSpec, level: usize, tail: Tail) -> Result<Cover> {
    let factor = if tail == Tail::K { 2 } else { 1 };
    guard(spec, level, factor)?;
    let cyl = cylinders(spec, level);
    let rects = match tail {
        Tail::KMinus => cyl.into_iter().map(|x| Rect { x, xi: Interval::unit() }).collect(),
        Tail::KPlus => cyl.into_iter().map(|xi| Rect { x: Interval::unit(), xi }).collect(),
        Tail::K => cyl
            .iter()
            .flat_map(|x| cyl.iter().map(move |xi| Rect { x: x.clone(), xi: xi.clone() }))
            .collect(),
    };
    Ok(Cover { tail, level, rects })
}
