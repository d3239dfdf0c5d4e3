//! Componentwise ("box-affine") rational maps.
//!
//! Every output coordinate is either a constant or `coef * x[src] + offset`
//! with `coef != 0`, and no source coordinate feeds two outputs. Such a map
//! sends boxes to boxes and pulls boxes back to boxes, so images and
//! preimages of [`BoxSet`]s stay exact. The map is injective iff every
//! source coordinate is used.

use std::fmt;

use num_traits::{One, Zero};

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Affine { coef: Rational, src: usize, offset: Rational },
    Const(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxAffineMap {
    src_dim: usize,
    outputs: Vec<Coord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Image,
    Preimage,
}

/// Outcome of [`maps_agree_on`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// A point of the set where the two maps differ.
    Disagree(Vec<Rational>),
}

impl Agreement {
    pub fn holds(&self) -> bool {
        matches!(self, Agreement::Agree)
    }
}

impl BoxAffineMap {
    pub fn new(src_dim: usize, outputs: Vec<Coord>) -> Result<Self> {
        if src_dim == 0 || outputs.is_empty() {
            return Err(Error::InvalidMap("dimensions must be positive".into()));
        }
        let mut used = vec![false; src_dim];
        for (j, c) in outputs.iter().enumerate() {
            if let Coord::Affine { coef, src, .. } = c {
                if coef.is_zero() {
                    return Err(Error::InvalidMap(format!("output {j} has zero coefficient")));
                }
                if *src >= src_dim {
                    return Err(Error::InvalidMap(format!("output {j} reads coordinate {src} of a {src_dim}-dimensional source")));
                }
                if used[*src] {
                    return Err(Error::InvalidMap(format!("source coordinate {src} feeds more than one output")));
                }
                used[*src] = true;
            }
        }
        Ok(BoxAffineMap { src_dim, outputs })
    }

    pub fn identity(dim: usize) -> Self {
        let outputs = (0..dim)
            .map(|i| Coord::Affine { coef: Rational::one(), src: i, offset: Rational::zero() })
            .collect();
        BoxAffineMap { src_dim: dim, outputs }
    }

    /// `x -> coef * x + offset` on the line.
    pub fn line(coef: Rational, offset: Rational) -> Result<Self> {
        Self::new(1, vec![Coord::Affine { coef, src: 0, offset }])
    }

    pub fn src_dim(&self) -> usize {
        self.src_dim
    }

    pub fn dst_dim(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[Coord] {
        &self.outputs
    }

    pub fn is_injective(&self) -> bool {
        let mut used = vec![false; self.src_dim];
        for c in &self.outputs {
            if let Coord::Affine { src, .. } = c {
                used[*src] = true;
            }
        }
        used.into_iter().all(|u| u)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.src_dim)
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.outputs
            .iter()
            .map(|c| match c {
                Coord::Affine { coef, src, offset } => coef * &x[*src] + offset,
                Coord::Const(v) => v.clone(),
            })
            .collect()
    }

    pub fn image_box(&self, b: &GBox) -> GBox {
        let sides = self
            .outputs
            .iter()
            .map(|c| match c {
                Coord::Affine { coef, src, offset } => b.sides()[*src].affine_image(coef, offset),
                Coord::Const(v) => Interval::point(v.clone()),
            })
            .collect();
        GBox::new(sides).expect("maps have positive target dimension")
    }

    pub fn preimage_box(&self, b: &GBox) -> Option<GBox> {
        let mut sides = vec![Interval::line(); self.src_dim];
        for (c, side) in self.outputs.iter().zip(b.sides()) {
            match c {
                Coord::Affine { coef, src, offset } => sides[*src] = side.affine_preimage(coef, offset),
                Coord::Const(v) => {
                    if !side.contains(v) {
                        return None;
                    }
                }
            }
        }
        Some(GBox::new(sides).expect("maps have positive source dimension"))
    }

    pub fn image(&self, a: &BoxSet) -> Result<BoxSet> {
        self.expect_src(a)?;
        BoxSet::from_boxes(self.dst_dim(), a.cells().iter().map(|c| self.image_box(c)))
    }

    pub fn preimage(&self, a: &BoxSet) -> Result<BoxSet> {
        if a.dim() != self.dst_dim() {
            return Err(Error::DimensionMismatch { expected: self.dst_dim(), found: a.dim() });
        }
        BoxSet::from_boxes(self.src_dim, a.cells().iter().filter_map(|c| self.preimage_box(c)))
    }

    /// `{x in domain : self(x) in target}`.
    pub fn preimage_within(&self, target: &BoxSet, domain: &BoxSet) -> Result<BoxSet> {
        self.preimage(target)?.intersection(domain)
    }

    fn expect_src(&self, a: &BoxSet) -> Result<()> {
        if a.dim() != self.src_dim {
            return Err(Error::DimensionMismatch { expected: self.src_dim, found: a.dim() });
        }
        Ok(())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BoxAffineMap) -> Result<BoxAffineMap> {
        if inner.dst_dim() != self.src_dim {
            return Err(Error::DimensionMismatch { expected: self.src_dim, found: inner.dst_dim() });
        }
        let outputs = self
            .outputs
            .iter()
            .map(|c| match c {
                Coord::Const(v) => Coord::Const(v.clone()),
                Coord::Affine { coef, src, offset } => match &inner.outputs[*src] {
                    Coord::Const(w) => Coord::Const(coef * w + offset),
                    Coord::Affine { coef: c2, src: s2, offset: o2 } => {
                        Coord::Affine { coef: coef * c2, src: *s2, offset: coef * o2 + offset }
                    }
                },
            })
            .collect();
        BoxAffineMap::new(inner.src_dim, outputs)
    }

    /// The map `y -> x` that undoes `self` on its image. Requires injectivity.
    pub fn left_inverse(&self) -> Result<BoxAffineMap> {
        if !self.is_injective() {
            return Err(Error::InvalidMap("left inverse of a non-injective map".into()));
        }
        let mut outputs = vec![Coord::Const(Rational::zero()); self.src_dim];
        for (j, c) in self.outputs.iter().enumerate() {
            if let Coord::Affine { coef, src, offset } = c {
                let inv = Rational::one() / coef;
                outputs[*src] = Coord::Affine { offset: -(offset * &inv), coef: inv, src: j };
            }
        }
        BoxAffineMap::new(self.dst_dim(), outputs)
    }

    /// Largest `|coef|`, at least one. Bounds the L-infinity Lipschitz constant.
    pub fn lipschitz(&self) -> Rational {
        self.outputs
            .iter()
            .filter_map(|c| match c {
                Coord::Affine { coef, .. } => Some(num_traits::Signed::abs(coef)),
                Coord::Const(_) => None,
            })
            .fold(Rational::one(), |a, b| if b > a { b } else { a })
    }
}

impl fmt::Display for BoxAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.outputs.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            match c {
                Coord::Const(v) => write!(f, "{v}")?,
                Coord::Affine { coef, src, offset } => {
                    write!(f, "{coef}*x{src}")?;
                    if !offset.is_zero() {
                        write!(f, "+{offset}")?;
                    }
                }
            }
        }
        write!(f, ")")
    }
}

pub fn transport(m: &BoxAffineMap, a: &BoxSet, direction: Direction) -> Result<BoxSet> {
    match direction {
        Direction::Image => m.image(a),
        Direction::Preimage => m.preimage(a),
    }
}

/// Decides `f = g` pointwise on `a`.
///
/// On a single box `f - g` is componentwise affine, so it vanishes on the box
/// iff it vanishes at the sample point and at the sample point moved along
/// each non-degenerate side.
pub fn maps_agree_on(f: &BoxAffineMap, g: &BoxAffineMap, a: &BoxSet) -> Result<Agreement> {
    if f.src_dim() != g.src_dim() || f.dst_dim() != g.dst_dim() {
        return Err(Error::DimensionMismatch { expected: f.dst_dim(), found: g.dst_dim() });
    }
    f.expect_src(a)?;
    if f == g {
        return Ok(Agreement::Agree);
    }
    for cell in a.cells() {
        let mid = cell.sample_point();
        if f.apply(&mid) != g.apply(&mid) {
            return Ok(Agreement::Disagree(mid));
        }
        for (i, side) in cell.sides().iter().enumerate() {
            if side.is_point() {
                continue;
            }
            let mut p = mid.clone();
            p[i] = side.sample_alt();
            if f.apply(&p) != g.apply(&p) {
                return Ok(Agreement::Disagree(p));
            }
        }
    }
    Ok(Agreement::Agree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn iv(s: &str) -> BoxSet {
        BoxSet::from_box(GBox::new(vec![Interval::parse(s).unwrap()]).unwrap())
    }

    #[test]
    fn construction_checks() {
        assert!(BoxAffineMap::line(int(0), int(1)).is_err());
        let dup = vec![
            Coord::Affine { coef: int(1), src: 0, offset: int(0) },
            Coord::Affine { coef: int(1), src: 0, offset: int(0) },
        ];
        assert!(BoxAffineMap::new(1, dup).is_err());
        let proj = BoxAffineMap::new(2, vec![Coord::Affine { coef: int(1), src: 0, offset: int(0) }]).unwrap();
        assert!(!proj.is_injective());
    }

    #[test]
    fn transport_examples() {
        let id = BoxAffineMap::identity(1);
        let a = iv("(-1,1)");
        assert_eq!(transport(&id, &a, Direction::Image).unwrap(), a);
        let m = BoxAffineMap::line(int(2), int(1)).unwrap();
        assert_eq!(transport(&m, &iv("(1,3)"), Direction::Preimage).unwrap(), iv("(0,1)"));
        let flip = BoxAffineMap::line(int(-1), int(0)).unwrap();
        assert_eq!(flip.image(&iv("[0,1)")).unwrap(), iv("(-1,0]"));
    }

    #[test]
    fn composition_examples() {
        let f = BoxAffineMap::line(int(2), int(0)).unwrap();
        let g = BoxAffineMap::line(int(1), int(1)).unwrap();
        assert_eq!(f.compose(&BoxAffineMap::identity(1)).unwrap(), f);
        assert_eq!(f.compose(&g).unwrap(), BoxAffineMap::line(int(2), int(2)).unwrap());
        let inv = g.left_inverse().unwrap();
        assert!(inv.compose(&g).unwrap().is_identity());
    }

    #[test]
    fn agreement_examples() {
        let f = BoxAffineMap::identity(1);
        let g = BoxAffineMap::line(int(2), int(0)).unwrap();
        assert!(maps_agree_on(&f, &f, &iv("(0,1)")).unwrap().holds());
        assert!(maps_agree_on(&f, &g, &iv("{0}")).unwrap().holds());
        assert_eq!(maps_agree_on(&f, &g, &iv("(0,1)")).unwrap(), Agreement::Disagree(vec![rat(1, 2)]));
    }

    #[test]
    fn embedding_with_constant_coordinate() {
        let up = BoxAffineMap::new(1, vec![
            Coord::Affine { coef: int(1), src: 0, offset: int(0) },
            Coord::Const(int(0)),
        ])
        .unwrap();
        assert!(up.is_injective());
        let img = up.image(&iv("(0,1)")).unwrap();
        assert_eq!(img.to_string(), "(0,1)x{0}");
        assert_eq!(up.preimage(&img).unwrap(), iv("(0,1)"));
        let down = up.left_inverse().unwrap();
        assert_eq!((down.src_dim(), down.dst_dim()), (2, 1));
        assert!(down.compose(&up).unwrap().is_identity());
    }
}
