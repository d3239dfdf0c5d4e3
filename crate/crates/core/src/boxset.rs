//! Finite unions of rational boxes in canonical form.
//!
//! A [`BoxSet`] is stored as a grid: per axis a strictly increasing list of
//! breakpoints `b_0 < ... < b_{m-1}`, which cuts the line into `2m + 1`
//! pieces `(-inf,b_0), {b_0}, (b_0,b_1), ..., {b_{m-1}}, (b_{m-1},+inf)`,
//! together with one membership bit per product of pieces (an elementary
//! cell). Every set operation refines both operands onto a common grid,
//! combines the bits and then drops each breakpoint across which the
//! indicator function is constant. Whether a breakpoint can be dropped does
//! not depend on the grid it was tested on, so the surviving grid is a
//! function of the point set alone; two sets are equal iff their grids and
//! bits are identical.
//!
//! The cell list exposed by [`BoxSet::cells`] is the slab decomposition of
//! that minimal grid: along axis 0 consecutive pieces with identical
//! cross-sections are merged into one interval, and the cross-section is
//! decomposed recursively.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::{Bound, Interval};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoxSet {
    dim: usize,
    axes: Vec<Vec<Rational>>,
    bits: Vec<bool>,
}

fn shape_of(axes: &[Vec<Rational>]) -> Vec<usize> {
    axes.iter().map(|a| 2 * a.len() + 1).collect()
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

/// Calls `f(multi_index)` for every multi-index in `lo[k]..=hi[k]`, in
/// row-major order.
fn for_each_in(lo: &[usize], hi: &[usize], mut f: impl FnMut(&[usize])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut idx = lo.to_vec();
    loop {
        f(&idx);
        let mut k = idx.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] < hi[k] {
                idx[k] += 1;
                break;
            }
            idx[k] = lo[k];
        }
    }
}

fn merge_sorted(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j == b.len() || (i < a.len() && a[i] < b[j]) {
            i += 1;
            &a[i - 1]
        } else if i == a.len() || b[j] < a[i] {
            j += 1;
            &b[j - 1]
        } else {
            i += 1;
            j += 1;
            &a[i - 1]
        };
        out.push(next.clone());
    }
    out
}

/// For a fine breakpoint list containing every coarse breakpoint, maps each
/// fine piece index to the coarse piece containing it.
fn piece_map(fine: &[Rational], coarse: &[Rational]) -> Vec<usize> {
    let mut map = Vec::with_capacity(2 * fine.len() + 1);
    let mut below = 0; // coarse breakpoints <= previous fine breakpoint
    for f in fine {
        // open piece before f
        map.push(2 * below);
        if below < coarse.len() && coarse[below] == *f {
            map.push(2 * below + 1);
            below += 1;
        } else {
            map.push(2 * below);
        }
    }
    map.push(2 * below);
    map
}

impl BoxSet {
    pub fn empty(dim: usize) -> Self {
        BoxSet { dim, axes: vec![Vec::new(); dim], bits: vec![false] }
    }

    pub fn full(dim: usize) -> Self {
        BoxSet { dim, axes: vec![Vec::new(); dim], bits: vec![true] }
    }

    pub fn from_box(b: GBox) -> Self {
        let dim = b.dim();
        Self::from_boxes(dim, [b]).expect("single box has consistent dimension")
    }

    pub fn point(coords: &[Rational]) -> Self {
        Self::from_box(GBox::point(coords))
    }

    /// Canonical form of a finite union of boxes.
    pub fn from_boxes(dim: usize, boxes: impl IntoIterator<Item = GBox>) -> Result<Self> {
        let boxes: Vec<GBox> = boxes.into_iter().collect();
        for b in &boxes {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
            }
        }
        let mut axes: Vec<Vec<Rational>> = vec![Vec::new(); dim];
        for b in &boxes {
            for (k, s) in b.sides().iter().enumerate() {
                axes[k].extend(s.lo().value().cloned());
                axes[k].extend(s.hi().value().cloned());
            }
        }
        for a in &mut axes {
            a.sort();
            a.dedup();
        }
        let shape = shape_of(&axes);
        let strides = strides_of(&shape);
        let mut bits = vec![false; shape.iter().product()];
        let locate = |axis: &[Rational], v: &Rational| axis.binary_search(v).expect("endpoint is a breakpoint");
        for b in &boxes {
            let mut lo = Vec::with_capacity(dim);
            let mut hi = Vec::with_capacity(dim);
            for (k, s) in b.sides().iter().enumerate() {
                lo.push(match s.lo() {
                    Bound::Unbounded => 0,
                    Bound::Closed(a) => 2 * locate(&axes[k], a) + 1,
                    Bound::Open(a) => 2 * locate(&axes[k], a) + 2,
                });
                hi.push(match s.hi() {
                    Bound::Unbounded => shape[k] - 1,
                    Bound::Closed(a) => 2 * locate(&axes[k], a) + 1,
                    Bound::Open(a) => 2 * locate(&axes[k], a),
                });
            }
            for_each_in(&lo, &hi, |idx| {
                let lin: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                bits[lin] = true;
            });
        }
        Ok(Self::normalized(dim, axes, bits))
    }

    /// Drops every breakpoint across which membership is constant.
    fn normalized(dim: usize, axes: Vec<Vec<Rational>>, bits: Vec<bool>) -> Self {
        let shape = shape_of(&axes);
        let strides = strides_of(&shape);
        let total = bits.len();
        let mut keep: Vec<Vec<bool>> = Vec::with_capacity(dim);
        for k in 0..dim {
            let (n, s) = (shape[k], strides[k]);
            let outer = total / (n * s);
            let slice = |o: usize, t: usize| {
                let start = o * n * s + t * s;
                &bits[start..start + s]
            };
            keep.push(
                (0..axes[k].len())
                    .map(|i| {
                        !(0..outer).all(|o| {
                            let mid = slice(o, 2 * i + 1);
                            slice(o, 2 * i) == mid && slice(o, 2 * i + 2) == mid
                        })
                    })
                    .collect(),
            );
        }
        if keep.iter().all(|k| k.iter().all(|&b| b)) {
            return BoxSet { dim, axes, bits };
        }
        let mut new_axes = Vec::with_capacity(dim);
        let mut maps = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut axis = Vec::new();
            let mut map = vec![0usize];
            for (i, b) in axes[k].iter().enumerate() {
                if keep[k][i] {
                    axis.push(b.clone());
                    map.push(2 * i + 1);
                    map.push(2 * i + 2);
                }
            }
            new_axes.push(axis);
            maps.push(map);
        }
        let new_shape = shape_of(&new_axes);
        let mut new_bits = Vec::with_capacity(new_shape.iter().product());
        let hi: Vec<usize> = new_shape.iter().map(|n| n - 1).collect();
        for_each_in(&vec![0; dim], &hi, |idx| {
            let lin: usize = idx.iter().enumerate().map(|(k, &i)| maps[k][i] * strides[k]).sum();
            new_bits.push(bits[lin]);
        });
        BoxSet { dim, axes: new_axes, bits: new_bits }
    }

    /// Membership bits of `self` on a finer grid.
    fn refined_bits(&self, fine: &[Vec<Rational>]) -> Vec<bool> {
        let maps: Vec<Vec<usize>> =
            fine.iter().zip(&self.axes).map(|(f, c)| piece_map(f, c)).collect();
        let strides = strides_of(&shape_of(&self.axes));
        let hi: Vec<usize> = shape_of(fine).iter().map(|n| n - 1).collect();
        let mut out = Vec::with_capacity(hi.iter().map(|h| h + 1).product());
        for_each_in(&vec![0; self.dim], &hi, |idx| {
            let lin: usize = idx.iter().enumerate().map(|(k, &i)| maps[k][i] * strides[k]).sum();
            out.push(self.bits[lin]);
        });
        out
    }

    fn check_dim(&self, other: &BoxSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    fn combine(&self, other: &BoxSet, op: impl Fn(bool, bool) -> bool) -> Result<BoxSet> {
        self.check_dim(other)?;
        let axes: Vec<Vec<Rational>> =
            self.axes.iter().zip(&other.axes).map(|(a, b)| merge_sorted(a, b)).collect();
        let a = self.refined_bits(&axes);
        let b = other.refined_bits(&axes);
        let bits = a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect();
        Ok(Self::normalized(self.dim, axes, bits))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Breakpoints of the minimal grid along `axis`.
    pub fn breakpoints(&self, axis: usize) -> &[Rational] {
        &self.axes[axis]
    }

    pub fn union(&self, other: &BoxSet) -> Result<BoxSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &BoxSet) -> Result<BoxSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &BoxSet) -> Result<BoxSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &BoxSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &BoxSet) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    pub fn complement(&self) -> BoxSet {
        BoxSet { dim: self.dim, axes: self.axes.clone(), bits: self.bits.iter().map(|b| !b).collect() }
    }

    fn piece_index(&self, axis: usize, x: &Rational) -> usize {
        let a = &self.axes[axis];
        let p = a.partition_point(|b| b < x);
        if p < a.len() && a[p] == *x {
            2 * p + 1
        } else {
            2 * p
        }
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let strides = strides_of(&shape_of(&self.axes));
        let lin: usize = (0..self.dim).map(|k| self.piece_index(k, &x[k]) * strides[k]).sum();
        self.bits[lin]
    }

    /// Topological closure: every open piece adjoins its end points.
    pub fn closure(&self) -> BoxSet {
        let shape = shape_of(&self.axes);
        let strides = strides_of(&shape);
        let mut bits = self.bits.clone();
        let total = bits.len();
        for k in 0..self.dim {
            let (n, s) = (shape[k], strides[k]);
            for o in 0..total / (n * s) {
                for t in (1..n).step_by(2) {
                    for inner in 0..s {
                        let i = o * n * s + t * s + inner;
                        if !bits[i] && (bits[i - s] || bits[i + s]) {
                            bits[i] = true;
                        }
                    }
                }
            }
        }
        Self::normalized(self.dim, self.axes.clone(), bits)
    }

    pub fn interior(&self) -> BoxSet {
        self.complement().closure().complement()
    }

    /// Largest subset of `self` that is open in `ambient`.
    pub fn interior_rel(&self, ambient: &BoxSet) -> Result<BoxSet> {
        if !self.is_subset(ambient)? {
            return Err(Error::Containment("set is not contained in its ambient".into()));
        }
        ambient.difference(&ambient.difference(self)?.closure())
    }

    pub fn is_open_in(&self, ambient: &BoxSet) -> Result<bool> {
        Ok(self.is_subset(ambient)? && self.interior_rel(ambient)? == *self)
    }

    pub fn is_closed_in(&self, ambient: &BoxSet) -> Result<bool> {
        Ok(self.is_subset(ambient)? && self.closure().intersection(ambient)? == *self)
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_bounded(&self) -> bool {
        let shape = shape_of(&self.axes);
        let hi: Vec<usize> = shape.iter().map(|n| n - 1).collect();
        let mut bounded = true;
        let mut lin = 0;
        for_each_in(&vec![0; self.dim], &hi, |idx| {
            if self.bits[lin] && idx.iter().zip(&shape).any(|(&i, &n)| i == 0 || i == n - 1) {
                bounded = false;
            }
            lin += 1;
        });
        bounded
    }

    pub fn is_compact(&self) -> bool {
        self.is_bounded() && self.is_closed()
    }

    /// `closure(self)` is compact and contained in `u`. A compact set that is
    /// open in `u` is relatively compact in itself.
    pub fn is_relatively_compact_in(&self, u: &BoxSet) -> Result<bool> {
        self.check_dim(u)?;
        let c = self.closure();
        Ok(c.is_bounded() && c.is_subset(u)?)
    }

    /// Locally compact subsets of `Q^d` are exactly the locally closed ones.
    pub fn is_locally_compact(&self) -> bool {
        self.missing_frontier().is_closed()
    }

    /// `closure(self) \ self`.
    pub fn missing_frontier(&self) -> BoxSet {
        self.closure().difference(self).expect("same dimension")
    }

    /// Exact L-infinity distance from `x` to the closure of the set.
    pub fn linf_distance(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        self.cells().iter().map(|c| c.distance(x)).min().ok_or(Error::EmptySet)
    }

    /// L-infinity distance between the closures, `None` if either is empty.
    pub fn linf_gap(&self, other: &BoxSet) -> Result<Option<Rational>> {
        self.check_dim(other)?;
        let theirs = other.cells();
        Ok(self.cells().iter().flat_map(|a| theirs.iter().map(move |b| a.gap(b))).min())
    }

    /// `{x in ambient : d(x, self) < delta}` for the L-infinity metric.
    pub fn dilate_lt_delta(&self, delta: &Rational, ambient: &BoxSet) -> Result<BoxSet> {
        self.check_dim(ambient)?;
        if !delta.is_positive() {
            return Err(Error::NonPositive(format!("delta = {delta}")));
        }
        let grown = BoxSet::from_boxes(self.dim, self.cells().iter().map(|c| c.expand_open(delta)))?;
        grown.intersection(ambient)
    }

    pub fn sample_point(&self) -> Option<Vec<Rational>> {
        self.cells().first().map(GBox::sample_point)
    }

    /// Smallest closed box containing the set, `None` if empty or unbounded.
    pub fn bounding_box(&self) -> Option<GBox> {
        if self.is_empty() || !self.is_bounded() {
            return None;
        }
        let cells = self.closure().cells();
        let sides = (0..self.dim)
            .map(|k| {
                let lo = cells.iter().filter_map(|c| c.sides()[k].lo().value()).min().unwrap().clone();
                let hi = cells.iter().filter_map(|c| c.sides()[k].hi().value()).max().unwrap().clone();
                Interval::closed(lo, hi).expect("ordered")
            })
            .collect();
        GBox::new(sides).ok()
    }

    fn piece_interval(&self, axis: usize, first: usize, last: usize) -> Interval {
        let a = &self.axes[axis];
        let lo = if first % 2 == 1 {
            Bound::Closed(a[first / 2].clone())
        } else if first == 0 {
            Bound::Unbounded
        } else {
            Bound::Open(a[first / 2 - 1].clone())
        };
        let hi = if last % 2 == 1 {
            Bound::Closed(a[last / 2].clone())
        } else if last / 2 == a.len() {
            Bound::Unbounded
        } else {
            Bound::Open(a[last / 2].clone())
        };
        Interval::new(lo, hi).expect("pieces are ordered")
    }

    /// Canonical pairwise-disjoint cell list (slab decomposition).
    pub fn cells(&self) -> Vec<GBox> {
        let mut out = Vec::new();
        if self.dim == 0 || self.is_empty() {
            return out;
        }
        let shape = shape_of(&self.axes);
        let strides = strides_of(&shape);
        let mut prefix = Vec::with_capacity(self.dim);
        self.emit(0, 0, &shape, &strides, &mut prefix, &mut out);
        out
    }

    fn emit(
        &self,
        axis: usize,
        base: usize,
        shape: &[usize],
        strides: &[usize],
        prefix: &mut Vec<Interval>,
        out: &mut Vec<GBox>,
    ) {
        let (n, s) = (shape[axis], strides[axis]);
        let slice = |t: usize| &self.bits[base + t * s..base + t * s + s];
        let mut t = 0;
        while t < n {
            let sl = slice(t);
            if !sl.iter().any(|&b| b) {
                t += 1;
                continue;
            }
            let mut u = t;
            while u + 1 < n && slice(u + 1) == sl {
                u += 1;
            }
            prefix.push(self.piece_interval(axis, t, u));
            if axis + 1 == self.dim {
                out.push(GBox::new(prefix.clone()).expect("nonempty"));
            } else {
                self.emit(axis + 1, base + t * s, shape, strides, prefix, out);
            }
            prefix.pop();
            t = u + 1;
        }
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.cells();
        if cells.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoxSet[{}]({self})", self.dim)
    }
}
