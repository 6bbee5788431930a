use num_rational::BigRational;
use num_traits::{One, Zero};

use super::spec::BakerSpec;
use super::Interval;
use crate::error::{Error, Result};
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Largest double strictly below 1; images are clamped here so rounding never leaves the torus chart.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// One iterate of the open map. `None` means the point fell into the hole.
///
/// Forward: `(x, ξ) ∈ R_i ↦ ((x - x_i)/ℓ_i, ℓ_i ξ + x_i)`. Backward is keyed on the
/// rectangle containing `ξ`.
pub fn step(spec: &BakerSpec, point: (f64, f64), direction: Direction) -> Result<Option<(f64, f64)>> {
    let (x, xi) = point;
    if !(0.0..1.0).contains(&x) || !(0.0..1.0).contains(&xi) {
        return Err(Error::OutOfDomain { x, xi });
    }
    let pts = spec.partition_f64();
    let lens = spec.lengths_f64();
    Ok(match direction {
        Direction::Forward => {
            let i = spec.rectangle_of(x);
            spec.is_kept(i).then(|| {
                (((x - pts[i]) / lens[i]).min(BELOW_ONE), (lens[i] * xi + pts[i]).min(BELOW_ONE))
            })
        }
        Direction::Backward => {
            let i = spec.rectangle_of(xi);
            spec.is_kept(i).then(|| {
                ((lens[i] * x + pts[i]).min(BELOW_ONE), ((xi - pts[i]) / lens[i]).min(BELOW_ONE))
            })
        }
    })
}

/// Exact-arithmetic variant of [`step`].
pub fn step_exact(
    spec: &BakerSpec,
    point: (&BigRational, &BigRational),
    direction: Direction,
) -> Result<Option<(BigRational, BigRational)>> {
    let (x, xi) = point;
    if !rational::is_in_unit_interval(x) || !rational::is_in_unit_interval(xi) {
        return Err(Error::OutOfDomain { x: rational::to_f64(x), xi: rational::to_f64(xi) });
    }
    let pts = spec.partition();
    let lens = spec.lengths();
    Ok(match direction {
        Direction::Forward => {
            let i = spec.rectangle_of_exact(x);
            spec.is_kept(i).then(|| ((x - &pts[i]) / &lens[i], &lens[i] * xi + &pts[i]))
        }
        Direction::Backward => {
            let i = spec.rectangle_of_exact(xi);
            spec.is_kept(i).then(|| (&lens[i] * x + &pts[i], (xi - &pts[i]) / &lens[i]))
        }
    })
}

/// Number of completed forward steps before escape, capped at `max_steps`.
/// A point already in the hole has escape time 0.
pub fn escape_time(spec: &BakerSpec, mut point: (f64, f64), max_steps: usize) -> Result<usize> {
    for t in 0..max_steps {
        match step(spec, point, Direction::Forward)? {
            Some(p) => point = p,
            None => return Ok(t),
        }
    }
    Ok(max_steps)
}

/// A finite itinerary over the kept symbols. Forward words describe the
/// `x`-coordinate (future), backward words the `ξ`-coordinate (past).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<usize>,
    role: Direction,
}

impl Word {
    pub fn new(spec: &BakerSpec, symbols: Vec<usize>, role: Direction) -> Result<Self> {
        if let Some(&symbol) = symbols.iter().find(|&&s| !spec.is_kept(s)) {
            return Err(Error::InadmissibleWord { symbol });
        }
        Ok(Self { symbols, role })
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn role(&self) -> Direction {
        self.role
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The cylinder interval of this word: the `x`-interval (forward) or
    /// `ξ`-interval (backward) of points following the itinerary. Both roles give
    /// the same nested-affine formula `x_{ε0} + ℓ_{ε0}(x_{ε1} + ℓ_{ε1}(…))`.
    pub fn interval(&self, spec: &BakerSpec) -> Interval {
        let pts = spec.partition();
        let lens = spec.lengths();
        let mut lo = BigRational::zero();
        let mut hi = BigRational::one();
        for &s in self.symbols.iter().rev() {
            lo = &pts[s] + &lens[s] * lo;
            hi = &pts[s] + &lens[s] * hi;
        }
        Interval { lo, hi }
    }
}

/// Symbolic itinerary of length `len` (the symbols of the rectangles visited),
/// or `None` if the orbit escapes first.
pub fn itinerary(spec: &BakerSpec, mut point: (f64, f64), len: usize, direction: Direction) -> Result<Option<Word>> {
    let mut symbols = Vec::with_capacity(len);
    for _ in 0..len {
        let coord = match direction {
            Direction::Forward => point.0,
            Direction::Backward => point.1,
        };
        symbols.push(spec.rectangle_of(coord));
        match step(spec, point, direction)? {
            Some(p) => point = p,
            None => return Ok(None),
        }
    }
    Ok(Some(Word { symbols, role: direction }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn asym() -> BakerSpec {
        BakerSpec::new(vec![rat(0, 1), rat(1, 2), rat(3, 4), rat(1, 1)], &[0, 2]).unwrap()
    }

    #[test]
    fn forward_step_symmetric() {
        let s = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        let (x, xi) = step(&s, (0.1, 0.2), Direction::Forward).unwrap().unwrap();
        assert!((x - 0.3).abs() < 1e-15);
        assert!((xi - 0.2 / 3.0).abs() < 1e-15);
        assert_eq!(step(&s, (0.5, 0.2), Direction::Forward).unwrap(), None);
    }

    #[test]
    fn forward_step_asymmetric() {
        let s = asym();
        assert_eq!(step(&s, (0.25, 0.0), Direction::Forward).unwrap(), Some((0.5, 0.0)));
        let exact = step_exact(&s, (&rat(1, 4), &rat(0, 1)), Direction::Forward).unwrap();
        assert_eq!(exact, Some((rat(1, 2), rat(0, 1))));
    }

    #[test]
    fn out_of_domain() {
        let s = asym();
        assert!(matches!(step(&s, (1.0, 0.2), Direction::Forward), Err(Error::OutOfDomain { .. })));
        assert!(matches!(step(&s, (0.2, -0.1), Direction::Backward), Err(Error::OutOfDomain { .. })));
        assert!(step_exact(&s, (&rat(1, 1), &rat(0, 1)), Direction::Forward).is_err());
    }

    #[test]
    fn boundary_belongs_to_right_rectangle() {
        let s = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        // x = 1/3 starts the removed middle rectangle.
        assert_eq!(step_exact(&s, (&rat(1, 3), &rat(1, 2)), Direction::Forward).unwrap(), None);
        assert!(step_exact(&s, (&rat(2, 3), &rat(1, 2)), Direction::Forward).unwrap().is_some());
    }

    #[test]
    fn escape_time_zero_in_hole() {
        let s = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        assert_eq!(escape_time(&s, (0.5, 0.5), 10).unwrap(), 0);
        assert_eq!(escape_time(&s, (0.0, 0.5), 10).unwrap(), 10);
        // 0.1 -> 0.3 -> 0.9 -> 0.7 -> 0.1 is a kept cycle
        assert_eq!(escape_time(&s, (0.1, 0.5), 3).unwrap(), 3);
        // 0.12 -> 0.36 lands in the hole
        assert_eq!(escape_time(&s, (0.12, 0.5), 5).unwrap(), 1);
    }

    #[test]
    fn words_and_intervals() {
        let s = BakerSpec::symmetric(3, &[0, 2]).unwrap();
        let w = Word::new(&s, vec![2, 0], Direction::Forward).unwrap();
        let iv = w.interval(&s);
        assert_eq!((iv.lo, iv.hi), (rat(2, 3), rat(7, 9)));
        assert_eq!(Word::new(&s, vec![0, 1], Direction::Forward), Err(Error::InadmissibleWord { symbol: 1 }));
        let it = itinerary(&s, (0.7, 0.5), 2, Direction::Forward).unwrap().unwrap();
        assert_eq!(it.symbols(), &[2, 0]);
        assert!(itinerary(&s, (0.4, 0.5), 2, Direction::Forward).unwrap().is_none());
        let back = itinerary(&s, (0.5, 0.7), 2, Direction::Backward).unwrap().unwrap();
        assert_eq!(back.symbols(), &[2, 0]);
    }

    #[test]
    fn exact_round_trip() {
        let s = asym();
        let p = (rat(5, 8), rat(1, 3));
        let q = step_exact(&s, (&p.0, &p.1), Direction::Forward).unwrap();
        assert!(q.is_none(), "5/8 lies in the removed rectangle");
        let p = (rat(7, 8), rat(1, 3));
        let q = step_exact(&s, (&p.0, &p.1), Direction::Forward).unwrap().unwrap();
        let back = step_exact(&s, (&q.0, &q.1), Direction::Backward).unwrap().unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn float_round_trip_on_kept_rectangles(x in 0.0f64..1.0, xi in 0.0f64..1.0) {
            let s = asym();
            if let Some(q) = step(&s, (x, xi), Direction::Forward).unwrap() {
                let back = step(&s, q, Direction::Backward).unwrap().expect("image of a kept point is backward-admissible");
                prop_assert!((back.0 - x).abs() <= 1e-14);
                prop_assert!((back.1 - xi).abs() <= 1e-14);
            }
        }
    }
}
