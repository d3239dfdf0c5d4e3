use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::Rational;

/// A product of nonempty intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GBox {
    sides: Vec<Interval>,
}

impl GBox {
    pub fn new(sides: Vec<Interval>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(GBox { sides })
    }

    pub fn point(coords: &[Rational]) -> Self {
        GBox { sides: coords.iter().cloned().map(Interval::point).collect() }
    }

    /// The whole space `Q^dim`.
    pub fn full(dim: usize) -> Self {
        GBox { sides: vec![Interval::line(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[Interval] {
        &self.sides
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && self.sides.iter().zip(x).all(|(s, v)| s.contains(v))
    }

    pub fn closure(&self) -> GBox {
        GBox { sides: self.sides.iter().map(Interval::closure).collect() }
    }

    pub fn is_bounded(&self) -> bool {
        self.sides.iter().all(Interval::is_bounded)
    }

    pub fn sample_point(&self) -> Vec<Rational> {
        self.sides.iter().map(Interval::sample).collect()
    }

    /// L-infinity distance from `x` to the closure of the box.
    pub fn distance(&self, x: &[Rational]) -> Rational {
        self.sides
            .iter()
            .zip(x)
            .map(|(s, v)| s.distance(v))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// L-infinity distance between the closures of two boxes.
    pub fn gap(&self, other: &GBox) -> Rational {
        self.sides
            .iter()
            .zip(&other.sides)
            .map(|(a, b)| a.gap(b))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Open L-infinity `delta`-neighbourhood of the box.
    pub fn expand_open(&self, delta: &Rational) -> GBox {
        GBox { sides: self.sides.iter().map(|s| s.expand_open(delta)).collect() }
    }
}

impl fmt::Display for GBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sides.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
