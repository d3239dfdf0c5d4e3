//! The gluing relation on the disjoint union of charts, its saturation,
//! and the transitivity and Hausdorff checks with witnesses.
//!
//! A gluing `a -> c` identifies `x` in its domain (a subset of chart `a`)
//! with `map(x)` in chart `c`. Base gluings come straight from the
//! coordinate changes: `q -> p` on `U_pq`, and `p -> q` on `phi(U_pq)` via
//! the left inverse. Saturated gluings are compositions along chains, with
//! entries sharing `(from, to, map)` merged by union of domains.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atlas::Atlas;
use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::map::{maps_agree_on, Agreement, BoxAffineMap, Coord};
use crate::rational::{dyadic, format_point, int, rat, Rational};
use crate::validate::validate_weak_gcs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub from: usize,
    pub to: usize,
    pub domain: BoxSet,
    pub map: BoxAffineMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationModel {
    pub labels: Vec<String>,
    /// The chart spaces the relation lives on.
    pub spaces: Vec<BoxSet>,
    pub base: Vec<Gluing>,
    pub saturated: Vec<Gluing>,
}

/// `x ~ y`, `y ~ z`, but not `x ~ z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityWitness {
    pub charts: [usize; 3],
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub z: Vec<Rational>,
}

/// A pair of distinct classes without separating neighbourhoods.
///
/// `boundary` lies in the closure of the domain `V` of saturated gluing
/// `gluing` but not in `V`; `image` is the affine extension of that gluing
/// at `boundary`; `inner` is a point of `V` in a cell whose closure contains
/// `boundary`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    pub boundary: (usize, Vec<Rational>),
    pub image: (usize, Vec<Rational>),
    pub gluing: usize,
    pub inner: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HausdorffReport {
    pub witnesses: Vec<SeparationWitness>,
    pub falsifier_depth: u32,
    /// Non-separated pairs found by random sampling.
    pub falsifier_hits: Vec<((usize, Vec<Rational>), (usize, Vec<Rational>))>,
}

impl HausdorffReport {
    pub fn pass(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// True when the falsifier contradicts the exact verdict.
    pub fn discrepancy(&self) -> bool {
        self.pass() && !self.falsifier_hits.is_empty()
    }
}

/// Neighbourhood family: one subset per chart.
pub type Family = Vec<BoxSet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationOutcome {
    Identified,
    Separated(Family, Family),
    NotSeparated(SeparationWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub transitivity: Vec<TransitivityWitness>,
    /// Present only when transitivity passes.
    pub hausdorff: Option<HausdorffReport>,
}

impl Analysis {
    pub fn strong(&self) -> bool {
        self.transitivity.is_empty() && self.hausdorff.as_ref().is_some_and(|h| h.pass() && !h.discrepancy())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub falsifier_depth: u32,
    pub falsifier_samples: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { seed: 0, falsifier_depth: 10, falsifier_samples: 4 }
    }
}

/// Validates `a` and builds its saturated relation.
pub fn saturate_relation(a: &Atlas) -> Result<RelationModel> {
    let r = validate_weak_gcs(a);
    if !r.pass() {
        return Err(Error::NotWeak(r.violations.len()));
    }
    RelationModel::from_atlas(a)
}

impl RelationModel {
    /// The relation of `a` without validating it first.
    pub fn from_atlas(a: &Atlas) -> Result<RelationModel> {
        let forward = a
            .strict_changes()
            .map(|(p, q, ch)| Gluing { from: q, to: p, domain: ch.domain.clone(), map: ch.map.clone() })
            .collect();
        Self::from_parts(a.charts.iter().map(|c| c.label.clone()).collect(), a.charts.iter().map(|c| c.u.clone()).collect(), forward)
    }

    /// Builds the relation generated by forward gluings `q -> p` on the
    /// given chart spaces.
    pub fn from_parts(labels: Vec<String>, spaces: Vec<BoxSet>, forward: Vec<Gluing>) -> Result<RelationModel> {
        let mut base = Vec::new();
        for g in forward {
            if g.domain.is_empty() {
                continue;
            }
            let inv = Gluing { from: g.to, to: g.from, domain: g.map.image(&g.domain)?, map: g.map.left_inverse()? };
            base.push(g);
            base.push(inv);
        }
        let mut rm = RelationModel { labels, spaces, base, saturated: Vec::new() };
        rm.saturate()?;
        Ok(rm)
    }

    fn saturate(&mut self) -> Result<()> {
        let mut sat: Vec<Gluing> = Vec::new();
        let mut frontier = Vec::new();
        for g in &self.base {
            if let Some(delta) = merge(&mut sat, g.clone())? {
                frontier.push(delta);
            }
        }
        for _ in 0..self.labels.len().max(2) {
            let mut next = Vec::new();
            for g in &frontier {
                for h in self.base.iter().filter(|h| h.from == g.to) {
                    let map = h.map.compose(&g.map)?;
                    if h.to == g.from && map.is_identity() {
                        continue;
                    }
                    let domain = g.map.preimage_within(&h.domain, &g.domain)?;
                    if domain.is_empty() {
                        continue;
                    }
                    if let Some(delta) = merge(&mut sat, Gluing { from: g.from, to: h.to, domain, map })? {
                        next.push(delta);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        self.saturated = sat;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `x ~ z` for the unsaturated relation (identity or one base gluing).
    pub fn related_base(&self, a: usize, x: &[Rational], c: usize, z: &[Rational]) -> bool {
        (a == c && x == z) || self.base.iter().any(|g| g.from == a && g.to == c && g.domain.contains_point(x) && g.map.apply(x) == z)
    }

    /// `x ~ z` for the saturated relation.
    pub fn related(&self, a: usize, x: &[Rational], c: usize, z: &[Rational]) -> bool {
        (a == c && x == z)
            || self.saturated.iter().any(|g| g.from == a && g.to == c && g.domain.contains_point(x) && g.map.apply(x) == z)
    }

    /// The saturated class of `x` in chart `a`, one representative per chart
    /// and image, sorted.
    pub fn class_of(&self, a: usize, x: &[Rational]) -> Vec<(usize, Vec<Rational>)> {
        let mut out = vec![(a, x.to_vec())];
        for g in self.saturated.iter().filter(|g| g.from == a && g.domain.contains_point(x)) {
            out.push((g.to, g.map.apply(x)));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Smallest family containing `w` that is closed under all base gluings.
    /// `None` when no fixpoint is reached within the round budget.
    pub fn saturate_family(&self, w: &Family) -> Result<Option<Family>> {
        let mut fam = w.clone();
        for _ in 0..4 * self.len() + 4 {
            let mut changed = false;
            for g in &self.base {
                let img = g.map.image(&fam[g.from].intersection(&g.domain)?)?;
                if !img.is_subset(&fam[g.to])? {
                    fam[g.to] = fam[g.to].union(&img)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(Some(fam));
            }
        }
        Ok(None)
    }

    fn gluing_label(&self, g: &Gluing) -> String {
        format!("{}->{}", self.labels[g.from], self.labels[g.to])
    }
}

/// Inserts `g`, merging with an entry of equal `(from, to, map)`. Returns the
/// part of the domain that is new, if any.
fn merge(sat: &mut Vec<Gluing>, g: Gluing) -> Result<Option<Gluing>> {
    if let Some(e) = sat.iter_mut().find(|e| e.from == g.from && e.to == g.to && e.map == g.map) {
        let fresh = g.domain.difference(&e.domain)?;
        if fresh.is_empty() {
            return Ok(None);
        }
        e.domain = e.domain.union(&fresh)?;
        return Ok(Some(Gluing { domain: fresh, ..g }));
    }
    sat.push(g.clone());
    Ok(Some(g))
}

pub fn check_transitivity(rm: &RelationModel) -> Result<Vec<TransitivityWitness>> {
    let mut out = Vec::new();
    for g1 in &rm.base {
        for g2 in rm.base.iter().filter(|g| g.from == g1.to) {
            let e = g1.map.preimage_within(&g2.domain, &g1.domain)?;
            if e.is_empty() {
                continue;
            }
            let comp = g2.map.compose(&g1.map)?;
            let (a, b, c) = (g1.from, g1.to, g2.to);
            let bad = if a == c {
                match maps_agree_on(&comp, &BoxAffineMap::identity(comp.src_dim()), &e)? {
                    Agreement::Agree => None,
                    Agreement::Disagree(x) => Some(x),
                }
            } else {
                match rm.base.iter().find(|h| h.from == a && h.to == c) {
                    None => e.sample_point(),
                    Some(h) => match e.difference(&h.domain)?.sample_point() {
                        Some(x) => Some(x),
                        None => match maps_agree_on(&h.map, &comp, &e)? {
                            Agreement::Agree => None,
                            Agreement::Disagree(x) => Some(x),
                        },
                    },
                }
            };
            if let Some(x) = bad {
                let y = g1.map.apply(&x);
                let z = g2.map.apply(&y);
                out.push(TransitivityWitness { charts: [a, b, c], x, y, z });
            }
        }
    }
    out.sort_by(|u, v| u.charts.cmp(&v.charts).then_with(|| u.x.cmp(&v.x)));
    Ok(out)
}

impl TransitivityWitness {
    /// Re-checks the three relation claims by evaluating the base gluings.
    pub fn verify(&self, rm: &RelationModel) -> bool {
        let [a, b, c] = self.charts;
        rm.related_base(a, &self.x, b, &self.y) && rm.related_base(b, &self.y, c, &self.z) && !rm.related_base(a, &self.x, c, &self.z)
    }

    pub fn describe(&self, rm: &RelationModel) -> String {
        let [a, b, c] = self.charts;
        format!(
            "({}, {}) ~ ({}, {}) ~ ({}, {}) but the ends are not related",
            rm.labels[a],
            format_point(&self.x),
            rm.labels[b],
            format_point(&self.y),
            rm.labels[c],
            format_point(&self.z)
        )
    }
}

/// `{x in cell : f(x) = g(x)}` when it is a box; `None` when the agreement
/// locus is a diagonal and so not a union of boxes.
fn agreement_box(f: &BoxAffineMap, g: &BoxAffineMap, cell: &GBox) -> Option<Option<GBox>> {
    let mut sides = cell.sides().to_vec();
    let pin = |s: usize, v: Rational, sides: &mut Vec<Interval>| -> bool {
        if sides[s].contains(&v) {
            sides[s] = Interval::point(v);
            true
        } else {
            false
        }
    };
    for (fj, gj) in f.outputs().iter().zip(g.outputs()) {
        let ok = match (fj, gj) {
            (Coord::Const(u), Coord::Const(v)) => u == v,
            (Coord::Const(k), Coord::Affine { coef, src, offset }) | (Coord::Affine { coef, src, offset }, Coord::Const(k)) => {
                pin(*src, (k - offset) / coef, &mut sides)
            }
            (Coord::Affine { coef: c1, src: s1, offset: o1 }, Coord::Affine { coef: c2, src: s2, offset: o2 }) => {
                if s1 == s2 {
                    if c1 == c2 {
                        o1 == o2
                    } else {
                        pin(*s1, (o2 - o1) / (c1 - c2), &mut sides)
                    }
                } else if sides[*s1].is_point() {
                    let v = sides[*s1].sample();
                    pin(*s2, (c1 * v + o1 - o2) / c2, &mut sides)
                } else if sides[*s2].is_point() {
                    let w = sides[*s2].sample();
                    pin(*s1, (c2 * w + o2 - o1) / c1, &mut sides)
                } else {
                    return None;
                }
            }
        };
        if !ok {
            return Some(None);
        }
    }
    Some(Some(GBox::new(sides).unwrap()))
}

/// Candidate points of a box: the sample point, then variants moving one or
/// all coordinates to the alternate sample.
fn candidates(cell: &GBox) -> Vec<Vec<Rational>> {
    let mid = cell.sample_point();
    let mut out = vec![mid.clone()];
    let mut all = mid.clone();
    for (i, s) in cell.sides().iter().enumerate() {
        if !s.is_point() {
            let mut p = mid.clone();
            p[i] = s.sample_alt();
            all[i] = s.sample_alt();
            out.push(p);
        }
    }
    out.push(all);
    out
}

impl SeparationWitness {
    /// `(x_k, y_k)` with `x_k` in the gluing domain, `y_k` its image, both
    /// within `2^-k` of the witness pair.
    pub fn approach(&self, rm: &RelationModel, k: u32) -> (Vec<Rational>, Vec<Rational>) {
        let g = &rm.saturated[self.gluing];
        let b = &self.boundary.1;
        let span = b.iter().zip(&self.inner).map(|(u, v)| crate::rational::abs(&(v - u))).max().unwrap_or_else(Rational::zero);
        let mut t = dyadic(k) / (int(2) * g.map.lipschitz() * &span);
        if t > Rational::one() {
            t = Rational::one();
        }
        let xk: Vec<Rational> = b.iter().zip(&self.inner).map(|(u, v)| u + &t * (v - u)).collect();
        let yk = g.map.apply(&xk);
        (xk, yk)
    }

    /// Re-checks the witness: distinct classes, and approach sequences of
    /// related pairs converging to it for `k = 1..=depth`.
    pub fn verify(&self, rm: &RelationModel, depth: u32) -> bool {
        let (a, x) = (&self.boundary.0, &self.boundary.1);
        let (c, y) = (&self.image.0, &self.image.1);
        if !rm.spaces[*a].contains_point(x) || !rm.spaces[*c].contains_point(y) || rm.related(*a, x, *c, y) {
            return false;
        }
        (1..=depth).all(|k| {
            let (xk, yk) = self.approach(rm, k);
            let close = |p: &[Rational], q: &[Rational]| p.iter().zip(q).all(|(u, v)| crate::rational::abs(&(u - v)) < dyadic(k));
            rm.related(*a, &xk, *c, &yk) && close(&xk, x) && close(&yk, y)
        })
    }

    /// The unordered pair with the smaller chart index first.
    pub fn key(&self) -> ((usize, Vec<Rational>), (usize, Vec<Rational>)) {
        let (u, v) = (self.boundary.clone(), self.image.clone());
        if u <= v { (u, v) } else { (v, u) }
    }

    pub fn describe(&self, rm: &RelationModel) -> String {
        let ((a, x), (c, y)) = self.key();
        format!(
            "(({}, {}), ({}, {})) via {}",
            rm.labels[a],
            format_point(&x),
            rm.labels[c],
            format_point(&y),
            rm.gluing_label(&rm.saturated[self.gluing])
        )
    }
}

/// Boundary points of one saturated gluing whose image lands in the target
/// chart without being identified with them.
fn limit_locus(rm: &RelationModel, gi: usize) -> Result<BoxSet> {
    let g = &rm.saturated[gi];
    let ua = &rm.spaces[g.from];
    let boundary = g.domain.closure().intersection(ua)?.difference(&g.domain)?;
    let mut l = g.map.preimage_within(&rm.spaces[g.to], &boundary)?;
    if l.is_empty() {
        return Ok(l);
    }
    for h in rm.saturated.iter().filter(|h| h.from == g.from && h.to == g.to) {
        let part = l.intersection(&h.domain)?;
        let mut agreed = Vec::new();
        for cell in part.cells() {
            if let Some(Some(b)) = agreement_box(&h.map, &g.map, &cell) { agreed.push(b) }
        }
        l = l.difference(&BoxSet::from_boxes(l.dim(), agreed)?)?;
    }
    Ok(l)
}

fn witness_in(rm: &RelationModel, gi: usize, cell: &GBox) -> Option<SeparationWitness> {
    let g = &rm.saturated[gi];
    for b in candidates(cell) {
        let y = g.map.apply(&b);
        if !rm.spaces[g.from].contains_point(&b) || !rm.spaces[g.to].contains_point(&y) || rm.related(g.from, &b, g.to, &y) {
            continue;
        }
        let inner = g.domain.cells().into_iter().find(|c| c.closure().contains(&b))?.sample_point();
        return Some(SeparationWitness { boundary: (g.from, b), image: (g.to, y), gluing: gi, inner });
    }
    None
}

/// The exact boundary-extension test plus the random falsifier.
pub fn check_hausdorff(rm: &RelationModel, opts: &AnalyzeOptions) -> Result<HausdorffReport> {
    let t = check_transitivity(rm)?;
    if !t.is_empty() {
        return Err(Error::NotTransitive(t.len()));
    }
    let mut witnesses: Vec<SeparationWitness> = Vec::new();
    for gi in 0..rm.saturated.len() {
        for cell in limit_locus(rm, gi)?.cells() {
            if let Some(w) = witness_in(rm, gi, &cell) {
                if !witnesses.iter().any(|v| v.key() == w.key()) {
                    witnesses.push(w);
                }
            }
        }
    }
    witnesses.sort_by(|u, v| {
        let (ku, kv) = (u.key(), v.key());
        (ku.0 .0, ku.1 .0).cmp(&(kv.0 .0, kv.1 .0)).then_with(|| ku.cmp(&kv))
    });
    let falsifier_hits = falsify(rm, opts)?;
    Ok(HausdorffReport { witnesses, falsifier_depth: opts.falsifier_depth, falsifier_hits })
}

pub fn analyze(rm: &RelationModel, opts: &AnalyzeOptions) -> Result<Analysis> {
    let transitivity = check_transitivity(rm)?;
    let hausdorff = if transitivity.is_empty() { Some(check_hausdorff(rm, opts)?) } else { None };
    Ok(Analysis { transitivity, hausdorff })
}

fn random_in(rng: &mut ChaCha8Rng, s: &Interval) -> Rational {
    if s.is_point() {
        return s.sample();
    }
    let j = rat(rng.gen_range(1..16), 16);
    match (s.lo().value(), s.hi().value()) {
        (Some(a), Some(b)) => a + (b - a) * j,
        (Some(a), None) => a + j * int(4),
        (None, Some(b)) => b - j * int(4),
        (None, None) => (j - rat(1, 2)) * int(8),
    }
}

/// A point of the closed side, landing on an end two times out of five each.
fn random_target(rng: &mut ChaCha8Rng, s: &Interval) -> Rational {
    let roll = rng.gen_range(0..5);
    match (roll, s.lo().value(), s.hi().value()) {
        (0 | 1, Some(a), _) => a.clone(),
        (2 | 3, _, Some(b)) => b.clone(),
        _ => random_in(rng, s),
    }
}

/// Samples sequences marching to boundary points of gluing domains and
/// reports pairs that are approached by related pairs yet not related.
pub fn falsify(rm: &RelationModel, opts: &AnalyzeOptions) -> Result<Vec<((usize, Vec<Rational>), (usize, Vec<Rational>))>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut hits = Vec::new();
    for g in &rm.saturated {
        for cell in g.domain.cells() {
            for _ in 0..opts.falsifier_samples {
                let t: Vec<Rational> = cell.sides().iter().map(|s| random_target(&mut rng, s)).collect();
                let v: Vec<Rational> = cell.sides().iter().map(|s| random_in(&mut rng, s)).collect();
                let y = g.map.apply(&t);
                if !rm.spaces[g.from].contains_point(&t) || !rm.spaces[g.to].contains_point(&y) || rm.related(g.from, &t, g.to, &y) {
                    continue;
                }
                let converges = (1..=opts.falsifier_depth).all(|k| {
                    let xk: Vec<Rational> = t.iter().zip(&v).map(|(a, b)| a + dyadic(k) * (b - a)).collect();
                    g.domain.contains_point(&xk) && rm.related(g.from, &xk, g.to, &g.map.apply(&xk))
                });
                if converges {
                    let pair = if (g.from, &t) <= (g.to, &y) { ((g.from, t), (g.to, y)) } else { ((g.to, y), (g.from, t)) };
                    if !hits.contains(&pair) {
                        hits.push(pair);
                    }
                }
            }
        }
    }
    hits.sort();
    Ok(hits)
}

pub(crate) fn ball(x: &[Rational], r: &Rational) -> BoxSet {
    let sides = x.iter().map(|v| Interval::open(v - r, v + r).unwrap()).collect();
    BoxSet::from_box(GBox::new(sides).unwrap())
}

/// Saturated family containing `seed`, enlarged until every member is open
/// in its chart. `None` if that does not settle.
fn open_saturation(rm: &RelationModel, seed: Family, r: &Rational) -> Result<Option<Family>> {
    let mut fam = seed;
    let mut radius = r.clone();
    for _ in 0..8 {
        let Some(sat) = rm.saturate_family(&fam)? else { return Ok(None) };
        let mut open = true;
        let mut next = sat.clone();
        for (c, w) in sat.iter().enumerate() {
            if !w.is_open_in(&rm.spaces[c])? {
                open = false;
                next[c] = w.dilate_lt_delta(&radius, &rm.spaces[c])?;
            }
        }
        if open {
            return Ok(Some(sat));
        }
        fam = next;
        radius /= int(2);
    }
    Ok(None)
}

fn families_disjoint(u: &Family, v: &Family) -> Result<bool> {
    for (a, b) in u.iter().zip(v) {
        if !a.is_disjoint(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides the relationship of two points of the disjoint union.
pub fn separation_query(rm: &RelationModel, p: usize, x: &[Rational], q: usize, y: &[Rational]) -> Result<SeparationOutcome> {
    for (c, z) in [(p, x), (q, y)] {
        if c >= rm.len() {
            return Err(Error::UnknownLabel(c.to_string()));
        }
        if z.len() != rm.spaces[c].dim() || !rm.spaces[c].contains_point(z) {
            return Err(Error::PointOutsideChart(rm.labels[c].clone()));
        }
    }
    if rm.related(p, x, q, y) {
        return Ok(SeparationOutcome::Identified);
    }
    let cx = rm.class_of(p, x);
    let cy = rm.class_of(q, y);
    for gi in 0..rm.saturated.len() {
        let g = &rm.saturated[gi];
        for (a, u) in cx.iter().chain(&cy) {
            if *a != g.from || g.domain.contains_point(u) || !g.domain.closure().contains_point(u) {
                continue;
            }
            let img = (g.to, g.map.apply(u));
            let other = if cx.contains(&(*a, u.clone())) { &cy } else { &cx };
            if other.contains(&img) {
                let cell = GBox::point(u);
                if let Some(w) = witness_in(rm, gi, &cell) {
                    return Ok(SeparationOutcome::NotSeparated(w));
                }
            }
        }
    }
    let mut r = rat(1, 2);
    for _ in 0..12 {
        let seed = |c: usize, z: &[Rational]| -> Result<Family> {
            let mut fam: Family = rm.spaces.iter().map(|s| BoxSet::empty(s.dim())).collect();
            fam[c] = ball(z, &r).intersection(&rm.spaces[c])?;
            Ok(fam)
        };
        if let (Some(nx), Some(ny)) = (open_saturation(rm, seed(p, x)?, &r)?, open_saturation(rm, seed(q, y)?, &r)?) {
            if families_disjoint(&nx, &ny)? {
                return Ok(SeparationOutcome::Separated(nx, ny));
            }
        }
        r /= int(2);
    }
    Err(Error::Inconclusive(format!("no separating neighbourhoods of ({}, {}) and ({}, {}) found", rm.labels[p], format_point(x), rm.labels[q], format_point(y))))
}

impl fmt::Display for Gluing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.map, self.domain)
    }
}

/// Orders witness pairs by chart labels, then by the points.
pub fn compare_pairs(u: &((usize, Vec<Rational>), (usize, Vec<Rational>)), v: &((usize, Vec<Rational>), (usize, Vec<Rational>))) -> Ordering {
    (u.0 .0, u.1 .0).cmp(&(v.0 .0, v.1 .0)).then_with(|| u.cmp(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{glued_lines, transitivity_gap, single_chart};

    fn pt(v: i64) -> Vec<Rational> {
        vec![int(v)]
    }

    #[test]
    fn glued_lines_relation() {
        let rm = saturate_relation(&glued_lines()).unwrap();
        assert_eq!(rm.base.len(), 2);
        assert_eq!(rm.saturated.len(), 2);
        assert!(check_transitivity(&rm).unwrap().is_empty());
        let h = check_hausdorff(&rm, &AnalyzeOptions::default()).unwrap();
        let keys: Vec<_> = h.witnesses.iter().map(|w| w.key()).collect();
        assert_eq!(keys, vec![((0, pt(-1)), (1, pt(-1))), ((0, pt(1)), (1, pt(1)))]);
        for w in &h.witnesses {
            assert!(w.verify(&rm, 10));
        }
        assert!(!h.falsifier_hits.is_empty());
    }

    #[test]
    fn single_chart_is_strong() {
        let rm = saturate_relation(&single_chart()).unwrap();
        assert!(rm.saturated.is_empty());
        assert!(analyze(&rm, &AnalyzeOptions::default()).unwrap().strong());
    }

    #[test]
    fn transitivity_gap_witness() {
        let rm = saturate_relation(&transitivity_gap()).unwrap();
        let t = check_transitivity(&rm).unwrap();
        assert!(!t.is_empty());
        assert!(t.iter().all(|w| w.verify(&rm)));
        assert!(matches!(check_hausdorff(&rm, &AnalyzeOptions::default()), Err(Error::NotTransitive(_))));
    }

    #[test]
    fn separation_queries() {
        let rm = saturate_relation(&glued_lines()).unwrap();
        assert!(matches!(separation_query(&rm, 0, &pt(1), 1, &pt(1)).unwrap(), SeparationOutcome::NotSeparated(_)));
        assert_eq!(separation_query(&rm, 0, &pt(0), 1, &pt(0)).unwrap(), SeparationOutcome::Identified);
        match separation_query(&rm, 0, &pt(1), 1, &pt(3)).unwrap() {
            SeparationOutcome::Separated(u, v) => {
                assert!(u[0].contains_point(&pt(1)) && v[1].contains_point(&pt(3)));
                assert!(families_disjoint(&u, &v).unwrap());
                assert_eq!(rm.saturate_family(&u).unwrap().unwrap(), u);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(separation_query(&rm, 0, &pt(0), 5, &pt(0)), Err(Error::UnknownLabel(_))));
    }
}
