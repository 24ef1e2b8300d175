//! Lattice vectors and exact planar points.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// An integral vector in the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };
    pub const E1: LatticeVector = LatticeVector { x: 1, y: 0 };
    pub const E2: LatticeVector = LatticeVector { x: 0, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn det(&self, other: &LatticeVector) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn component(&self, direction: usize) -> i64 {
        match direction {
            0 => self.x,
            1 => self.y,
            _ => panic!("direction index {direction} out of range"),
        }
    }

    pub fn swapped(&self) -> LatticeVector {
        LatticeVector::new(self.y, self.x)
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y) == 1
    }

    /// Counterclockwise angular comparison starting from the positive x-axis,
    /// angles taken in `[0, 2π)`. Exact.
    pub fn angle_cmp(&self, other: &LatticeVector) -> Ordering {
        fn half(v: &LatticeVector) -> u8 {
            if v.y > 0 || (v.y == 0 && v.x > 0) {
                0
            } else {
                1
            }
        }
        half(self)
            .cmp(&half(other))
            .then_with(|| 0.cmp(&self.det(other)))
    }
}

impl From<[i64; 2]> for LatticeVector {
    fn from(a: [i64; 2]) -> Self {
        LatticeVector::new(a[0], a[1])
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl Mul<i64> for LatticeVector {
    type Output = LatticeVector;
    fn mul(self, k: i64) -> LatticeVector {
        LatticeVector::new(self.x * k, self.y * k)
    }
}

/// Splits `v` into a primitive direction and a multiplicity, `v = multiplicity * direction`.
/// The zero vector gives `((0,0), 0)`.
pub fn primitive(v: LatticeVector) -> (LatticeVector, u64) {
    let g = v.x.gcd(&v.y);
    if g == 0 {
        return (LatticeVector::ZERO, 0);
    }
    (LatticeVector::new(v.x / g, v.y / g), g as u64)
}

/// A point of the plane with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn origin() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn coordinate(&self, direction: usize) -> &Rational {
        match direction {
            0 => &self.x,
            1 => &self.y,
            _ => panic!("direction index {direction} out of range"),
        }
    }

    /// `self + t * v`.
    pub fn offset(&self, t: &Rational, v: LatticeVector) -> Point {
        Point {
            x: &self.x + &(t * v.x),
            y: &self.y + &(t * v.y),
        }
    }

    /// Sign of `det(v, self)`: positive when `self` lies counterclockwise of `v`.
    pub fn side_of(&self, v: LatticeVector) -> i32 {
        Rational::linear_sign(-v.y, &self.x, v.x, &self.y)
    }

    /// Sign of `self · v`.
    pub fn dot_sign(&self, v: LatticeVector) -> i32 {
        Rational::linear_sign(v.x, &self.x, v.y, &self.y)
    }

    pub fn dot(&self, v: LatticeVector) -> Rational {
        &(&self.x * v.x) + &(&self.y * v.y)
    }

    pub fn swapped(&self) -> Point {
        Point {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// Sup-norm distance.
    pub fn sup_distance(&self, other: &Point) -> Rational {
        (&self.x - &other.x).abs().max((&self.y - &other.y).abs())
    }
}

impl From<LatticeVector> for Point {
    fn from(v: LatticeVector) -> Self {
        Point::new(v.x, v.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A point of the tropical quadrant `[0,∞)²`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct QuadrantPoint(Point);

impl QuadrantPoint {
    pub fn new(x: Rational, y: Rational) -> Option<Self> {
        if x.is_negative() || y.is_negative() {
            None
        } else {
            Some(QuadrantPoint(Point { x, y }))
        }
    }

    pub fn x(&self) -> &Rational {
        &self.0.x
    }

    pub fn y(&self) -> &Rational {
        &self.0.y
    }

    pub fn point(&self) -> &Point {
        &self.0
    }

    pub fn into_point(self) -> Point {
        self.0
    }
}
