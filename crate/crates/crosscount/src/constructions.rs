//! Extremal polygon pairs for every admissible `(m, n)`.
//!
//! Both polygons are thin serpentine bands: `P` runs horizontally through
//! the box `[-1, 1]²`, `Q` is the same shape with coordinates swapped. Every
//! band side of `P` crosses every band side of `Q` inside the box, and the
//! sides that close each polygon are routed around so that they add exactly
//! the crossings the family needs:
//!
//! * even/even: both bands have all sides spanning the box, `mn` crossings;
//! * even/odd: `Q` closes with a short apex side that crosses nothing,
//!   `m(n - 1)` crossings;
//! * odd/odd: each polygon has `k - 2` band sides plus a two-side tail; the
//!   tails cross the other band once per side and meet each other in two
//!   extra crossings, `(m - 1)(n - 1) + 2` in total.
//!
//! Vertices are then moved by tiny deterministic offsets until the pair is in
//! general position, and the count is verified exactly before returning.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{check_general_position, GpViolation, Point, Scalar};
use crate::polygon::{crossing_total_unchecked, validate_simple};
use crate::{Point2, Polygon, Rational};

/// Perturbation attempts before giving up.
pub const MAX_ATTEMPTS: u64 = 100;

/// Prime denominator shared by all perturbation offsets.
const OFFSET_DENOMINATOR: i64 = 1_000_003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    EvenEven,
    /// `m` even, `n` odd.
    EvenOdd,
    OddOdd,
}

impl Family {
    /// The family matching the parities of `(m, n)`, if any.
    pub fn for_sizes(m: usize, n: usize) -> Option<Family> {
        match (m % 2, n % 2) {
            (0, 0) => Some(Family::EvenEven),
            (0, 1) => Some(Family::EvenOdd),
            (1, 1) => Some(Family::OddOdd),
            _ => None,
        }
    }

    pub fn expected_crossings(self, m: usize, n: usize) -> usize {
        match self {
            Family::EvenEven => m * n,
            Family::EvenOdd => m * (n - 1),
            Family::OddOdd => m * n + 3 - (m + n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::EvenEven => "even-even",
            Family::EvenOdd => "even-odd",
            Family::OddOdd => "odd-odd",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "eveneven" => Ok(Family::EvenEven),
            "evenodd" => Ok(Family::EvenOdd),
            "oddodd" => Ok(Family::OddOdd),
            _ => Err(format!("unknown family {s:?}; expected even-even, even-odd or odd-odd")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("family {family} does not match sizes m={m}, n={n}")]
    ParityMismatch { m: usize, n: usize, family: Family },
    #[error("polygons need at least 3 sides (m={m}, n={n})")]
    TooFewSides { m: usize, n: usize },
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("construction failed: expected {expected} crossings, last attempt gave {actual:?}")]
    ConstructionFailed { expected: usize, actual: Option<usize> },
    #[error("crossing count mismatch: expected {expected}, found {actual}")]
    Mismatch { expected: usize, actual: usize },
    #[error("general position violated: {0}")]
    GeneralPosition(GpViolation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub m: usize,
    pub n: usize,
    pub family: Family,
    pub scale: Rational,
}

impl ConstructionSpec {
    pub fn new(m: usize, n: usize, family: Family) -> Result<Self, ConstructionError> {
        Self::with_scale(m, n, family, Rational::one())
    }

    pub fn with_scale(m: usize, n: usize, family: Family, scale: Rational) -> Result<Self, ConstructionError> {
        if m < 3 || n < 3 {
            return Err(ConstructionError::TooFewSides { m, n });
        }
        if Family::for_sizes(m, n) != Some(family) {
            return Err(ConstructionError::ParityMismatch { m, n, family });
        }
        if !scale.is_positive() {
            return Err(ConstructionError::NonPositiveScale);
        }
        Ok(ConstructionSpec { m, n, family, scale })
    }

    /// Spec with the family inferred from the parities.
    pub fn infer(m: usize, n: usize) -> Result<Self, ConstructionError> {
        if m < 3 || n < 3 {
            return Err(ConstructionError::TooFewSides { m, n });
        }
        // An odd m with an even n has no family; report it against the
        // nearest one so the message suggests swapping the roles.
        let family = Family::for_sizes(m, n).unwrap_or(Family::EvenOdd);
        Self::new(m, n, family)
    }

    pub fn expected_crossings(&self) -> usize {
        self.family.expected_crossings(self.m, self.n)
    }
}

fn q(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den)
}

/// Turning points of a band with `k` sides alternating across the box.
fn serpentine(k: usize, eps: &Rational) -> Vec<Point2> {
    (0..k.saturating_sub(1))
        .map(|i| {
            let x = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            Point::new(x, -q(2 * i as i64 + 1, 2) * eps.clone())
        })
        .collect()
}

fn band_middle(k: usize, eps: &Rational) -> Rational {
    -q(k as i64 - 1, 2) * eps.clone()
}

/// Even band: `k` spanning sides closed at an apex far to the left.
fn closed_band(k: usize, eps: &Rational) -> Vec<Point2> {
    let apex = Point::new(-Rational::from_int(k as i64 + 1), band_middle(k, eps));
    std::iter::once(apex).chain(serpentine(k, eps)).collect()
}

/// `k` spanning sides plus one short apex side that crosses nothing.
fn split_band(k: usize, eps: &Rational) -> Vec<Point2> {
    let x = -Rational::from_int(k as i64 + 2);
    let mid = band_middle(k, eps);
    let quarter = eps.clone() / Rational::from_int(4);
    let mut v = vec![Point::new(x.clone(), mid.clone() + quarter.clone())];
    v.extend(serpentine(k, eps));
    v.push(Point::new(x, mid - quarter));
    v
}

/// `k` (odd) spanning sides, then a side from the last right turn down to
/// `B` and the closing side from `B` back up to `A`.
fn tailed_band(k: usize, eps: &Rational) -> Vec<Point2> {
    let a = Point::new(q(-13, 10), eps.clone() / Rational::from_int(2));
    let r = Point::new(Rational::one(), -q(2 * k as i64 - 1, 2) * eps.clone());
    let b = Point::new(q(-4, 5), q(-11, 10));
    let mut v = vec![a];
    v.extend(serpentine(k, eps));
    v.push(r);
    v.push(b);
    v
}

fn transposed(v: &[Point2]) -> Vec<Point2> {
    v.iter().map(|p| Point::new(p.y.clone(), p.x.clone())).collect()
}

fn base_layout(m: usize, n: usize, family: Family) -> (Vec<Point2>, Vec<Point2>) {
    let eps = |k: usize, f: usize| q(1, (f * k) as i64);
    match family {
        Family::EvenEven => (closed_band(m, &eps(m, 2)), transposed(&closed_band(n, &eps(n, 2)))),
        Family::EvenOdd => (closed_band(m, &eps(m, 2)), transposed(&split_band(n - 1, &eps(n, 2)))),
        Family::OddOdd => (tailed_band(m - 2, &eps(m, 4)), transposed(&tailed_band(n - 2, &eps(n, 4)))),
    }
}

/// Moves every coordinate by a distinct offset of magnitude below
/// `1 / (1000 m n)`, drawn from a generator seeded by the attempt number.
fn perturbed(v: &[Point2], m: usize, n: usize, attempt: u64, stream: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(((m as u64) << 48) ^ ((n as u64) << 32) ^ (attempt << 8) ^ stream);
    let unit = Rational::new(BigInt::one(), BigInt::from(1000 * m * n) * BigInt::from(OFFSET_DENOMINATOR));
    let mut offset = || unit.clone() * Rational::from_int(rng.gen_range(1..OFFSET_DENOMINATOR));
    v.iter().map(|p| Point::new(p.x.clone() + offset(), p.y.clone() + offset())).collect()
}

/// Builds the extremal pair for `spec`, verified to be simple, in general
/// position and to have exactly the family's crossing count.
pub fn build_extremal(spec: &ConstructionSpec) -> Result<(Polygon, Polygon), ConstructionError> {
    let (m, n) = (spec.m, spec.n);
    let expected = spec.expected_crossings();
    let (base_p, base_q) = base_layout(m, n, spec.family);
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let scale = |v: Vec<Point2>| -> Vec<Point2> { v.iter().map(|pt| pt.scaled(&spec.scale)).collect() };
        let (Ok(p), Ok(q)) = (
            validate_simple(scale(perturbed(&base_p, m, n, attempt, 0))),
            validate_simple(scale(perturbed(&base_q, m, n, attempt, 1))),
        ) else {
            continue;
        };
        if check_general_position(&p, &q).is_err() {
            continue;
        }
        let actual = crossing_total_unchecked(&p, &q);
        if actual == expected {
            return Ok((p, q));
        }
        last = Some(actual);
    }
    Err(ConstructionError::ConstructionFailed { expected, actual: last })
}

/// Recounts the crossings of `(p, q)` and compares with the family formula.
pub fn verify_construction(p: &Polygon, q: &Polygon, family: Family) -> Result<usize, ConstructionError> {
    let (m, n) = (p.len(), q.len());
    if Family::for_sizes(m, n) != Some(family) {
        return Err(ConstructionError::ParityMismatch { m, n, family });
    }
    check_general_position(p, q).map_err(ConstructionError::GeneralPosition)?;
    let expected = family.expected_crossings(m, n);
    let actual = crossing_total_unchecked(p, q);
    if actual == expected {
        Ok(actual)
    } else {
        Err(ConstructionError::Mismatch { expected, actual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(m: usize, n: usize) -> usize {
        let (p, q) = build_extremal(&ConstructionSpec::infer(m, n).unwrap()).unwrap();
        crate::polygon::crossing_count(&p, &q).unwrap().total
    }

    #[test]
    fn figure_anchors() {
        assert_eq!(count(8, 8), 64);
        assert_eq!(count(8, 7), 48);
        assert_eq!(count(9, 7), 50);
    }

    #[test]
    fn small_cases() {
        assert_eq!(count(4, 4), 16);
        assert_eq!(count(3, 3), 6);
        assert_eq!(count(4, 3), 8);
        assert_eq!(count(3, 5), 10);
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        assert_eq!(
            ConstructionSpec::new(9, 7, Family::EvenEven),
            Err(ConstructionError::ParityMismatch { m: 9, n: 7, family: Family::EvenEven })
        );
        assert!(ConstructionSpec::infer(7, 8).is_err());
        assert!(ConstructionSpec::new(2, 4, Family::EvenEven).is_err());
    }

    #[test]
    fn scaling_preserves_count() {
        let spec = ConstructionSpec::with_scale(6, 5, Family::EvenOdd, q(7, 3)).unwrap();
        let (p, q) = build_extremal(&spec).unwrap();
        assert_eq!(verify_construction(&p, &q, Family::EvenOdd), Ok(24));
    }

    #[test]
    fn verify_flags_wrong_family_count() {
        let (p, q) = build_extremal(&ConstructionSpec::infer(5, 5).unwrap()).unwrap();
        assert_eq!(verify_construction(&p, &q, Family::OddOdd), Ok(18));
        let (p4, q4) = build_extremal(&ConstructionSpec::infer(4, 4).unwrap()).unwrap();
        assert_eq!(verify_construction(&p4, &q4, Family::EvenEven), Ok(16));
        assert!(matches!(verify_construction(&p4, &q4, Family::OddOdd), Err(ConstructionError::ParityMismatch { .. })));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("odd-odd".parse::<Family>(), Ok(Family::OddOdd));
        assert_eq!("EvenOdd".parse::<Family>(), Ok(Family::EvenOdd));
        assert!("diagonal".parse::<Family>().is_err());
    }
}
