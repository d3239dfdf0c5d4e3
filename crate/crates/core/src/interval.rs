use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, parse_rational, Rational};

/// One end of an [`Interval`]. Infinite ends are always open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

impl Bound {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Bound::Unbounded => None,
            Bound::Open(v) | Bound::Closed(v) => Some(v),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Bound::Closed(_))
    }

    fn closed(&self) -> Bound {
        match self {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Open(v) | Bound::Closed(v) => Bound::Closed(v.clone()),
        }
    }
}

/// A nonempty interval of the rational line with per-end open/closed flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self> {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            match a.cmp(b) {
                Ordering::Greater => {
                    return Err(Error::InvalidInterval(format!("lower end {a} exceeds upper end {b}")))
                }
                Ordering::Equal if !(lo.is_closed() && hi.is_closed()) => {
                    return Err(Error::InvalidInterval(format!("degenerate interval at {a} must be closed")))
                }
                _ => {}
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn open(a: Rational, b: Rational) -> Result<Self> {
        Self::new(Bound::Open(a), Bound::Open(b))
    }

    pub fn closed(a: Rational, b: Rational) -> Result<Self> {
        Self::new(Bound::Closed(a), Bound::Closed(b))
    }

    pub fn point(a: Rational) -> Self {
        Interval { lo: Bound::Closed(a.clone()), hi: Bound::Closed(a) }
    }

    pub fn line() -> Self {
        Interval { lo: Bound::Unbounded, hi: Bound::Unbounded }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::Closed(a), Bound::Closed(b)) if a == b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value().is_some() && self.hi.value().is_some()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Bound::Unbounded => true,
            Bound::Open(a) => x > a,
            Bound::Closed(a) => x >= a,
        };
        let below = match &self.hi {
            Bound::Unbounded => true,
            Bound::Open(b) => x < b,
            Bound::Closed(b) => x <= b,
        };
        above && below
    }

    pub fn closure(&self) -> Interval {
        Interval { lo: self.lo.closed(), hi: self.hi.closed() }
    }

    /// Distance from `x` to the closure of the interval.
    pub fn distance(&self, x: &Rational) -> Rational {
        if let Some(a) = self.lo.value() {
            if x < a {
                return a - x;
            }
        }
        if let Some(b) = self.hi.value() {
            if x > b {
                return x - b;
            }
        }
        Rational::zero()
    }

    /// Gap between the closures of two intervals (zero when they touch).
    pub fn gap(&self, other: &Interval) -> Rational {
        let mut g = Rational::zero();
        if let (Some(h), Some(l)) = (self.hi.value(), other.lo.value()) {
            if l > h {
                g = l - h;
            }
        }
        if let (Some(h), Some(l)) = (other.hi.value(), self.lo.value()) {
            if l > h && l - h > g {
                g = l - h;
            }
        }
        g
    }

    /// The open interval of points at distance `< delta` from the closure.
    pub fn expand_open(&self, delta: &Rational) -> Interval {
        let lo = match self.lo.value() {
            None => Bound::Unbounded,
            Some(a) => Bound::Open(a - delta),
        };
        let hi = match self.hi.value() {
            None => Bound::Unbounded,
            Some(b) => Bound::Open(b + delta),
        };
        Interval { lo, hi }
    }

    /// Image under `t -> coef * t + offset` (`coef != 0`).
    pub fn affine_image(&self, coef: &Rational, offset: &Rational) -> Interval {
        let f = |b: &Bound| match b {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Open(v) => Bound::Open(coef * v + offset),
            Bound::Closed(v) => Bound::Closed(coef * v + offset),
        };
        if coef.is_positive() {
            Interval { lo: f(&self.lo), hi: f(&self.hi) }
        } else {
            Interval { lo: f(&self.hi), hi: f(&self.lo) }
        }
    }

    /// Preimage under `t -> coef * t + offset` (`coef != 0`).
    pub fn affine_preimage(&self, coef: &Rational, offset: &Rational) -> Interval {
        let inv = Rational::from_integer(1.into()) / coef;
        self.affine_image(&inv, &(-(offset * &inv)))
    }

    /// A rational point inside the interval (midpoint when bounded).
    pub fn sample(&self) -> Rational {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => (a + b) / int(2),
            (Some(a), None) => a + int(1),
            (None, Some(b)) => b - int(1),
            (None, None) => Rational::zero(),
        }
    }

    /// A second interior point distinct from [`Interval::sample`] unless the
    /// interval is a single point.
    pub fn sample_alt(&self) -> Rational {
        match (self.lo.value(), self.hi.value()) {
            (Some(a), Some(b)) => (int(3) * a + b) / int(4),
            (Some(a), None) => a + int(2),
            (None, Some(b)) => b - int(2),
            (None, None) => int(1),
        }
    }

    pub fn parse(s: &str) -> Result<Interval> {
        let t = s.trim();
        let bad = |why: &str| Error::InvalidInterval(format!("`{s}`: {why}"));
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return Ok(Interval::point(parse_rational(inner)?.0));
        }
        if t.len() < 2 {
            return Err(bad("too short"));
        }
        let open_lo = match &t[..1] {
            "(" => true,
            "[" => false,
            _ => return Err(bad("expected ( or [")),
        };
        let open_hi = match &t[t.len() - 1..] {
            ")" => true,
            "]" => false,
            _ => return Err(bad("expected ) or ]")),
        };
        let (a, b) = t[1..t.len() - 1].split_once(',').ok_or_else(|| bad("missing comma"))?;
        let lo = match a.trim() {
            "-inf" | "-oo" => Bound::Unbounded,
            v => {
                let r = parse_rational(v)?.0;
                if open_lo { Bound::Open(r) } else { Bound::Closed(r) }
            }
        };
        let hi = match b.trim() {
            "inf" | "+inf" | "oo" | "+oo" => Bound::Unbounded,
            v => {
                let r = parse_rational(v)?.0;
                if open_hi { Bound::Open(r) } else { Bound::Closed(r) }
            }
        };
        if (lo == Bound::Unbounded && !open_lo) || (hi == Bound::Unbounded && !open_hi) {
            return Err(bad("infinite ends must be open"));
        }
        Interval::new(lo, hi)
    }

    /// True when at least one of the literal's rationals was not reduced.
    pub fn literal_unreduced(s: &str) -> bool {
        s.split([',', '(', ')', '[', ']', '{', '}'])
            .filter(|p| !p.trim().is_empty() && !p.contains("inf") && !p.contains("oo"))
            .any(|p| parse_rational(p).map(|(_, u)| u).unwrap_or(false))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo.value().unwrap());
        }
        match &self.lo {
            Bound::Unbounded => write!(f, "(-inf,")?,
            Bound::Open(a) => write!(f, "({a},")?,
            Bound::Closed(a) => write!(f, "[{a},")?,
        }
        match &self.hi {
            Bound::Unbounded => write!(f, "+inf)"),
            Bound::Open(b) => write!(f, "{b})"),
            Bound::Closed(b) => write!(f, "{b}]"),
        }
    }
}
