//! The compact model `K = ∐ K_p / ~` of a strong system and finite dyadic
//! truncations of its candidate countable basis.
//!
//! Subsets of `K` are represented by saturated families (one set per chart,
//! `W_p ⊆ K_p`). A saturated family is open in `K` iff every member is
//! relatively open in its `K_p`, and closed iff every member is closed.

use num_bigint::BigInt;
use num_traits::One;

use crate::atlas::Atlas;
use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::quotient::{analyze, ball, AnalyzeOptions, Family, Gluing, RelationModel};
use crate::rational::{dyadic, int, Rational};

/// A point of `K`, given by a representative in some chart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KPoint {
    pub chart: usize,
    pub x: Vec<Rational>,
}

impl KPoint {
    pub fn new(chart: usize, x: Vec<Rational>) -> Self {
        KPoint { chart, x }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactModel {
    /// `K_p = closure(U'_p)`.
    pub k: Vec<BoxSet>,
    /// The atlas relation restricted to `∐ K_p`.
    pub rm: RelationModel,
}

const FIXPOINT_ROUNDS: usize = 64;

/// Builds `K` from a strong atlas and sets `U'_p` relatively compact in `U_p`.
pub fn build_compact_model(strong: &Atlas, uprime: &[BoxSet]) -> Result<CompactModel> {
    if uprime.len() != strong.len() {
        return Err(Error::InvalidAtlas("compact model needs one set per chart".into()));
    }
    let an = analyze(&RelationModel::from_atlas(strong)?, &AnalyzeOptions::default())?;
    if !an.strong() {
        return Err(Error::NotStrong(format!(
            "{} transitivity witnesses, {} separation witnesses",
            an.transitivity.len(),
            an.hausdorff.map_or(0, |h| h.witnesses.len())
        )));
    }
    let mut k = Vec::new();
    for (c, w) in strong.charts.iter().zip(uprime) {
        if !w.is_relatively_compact_in(&c.u)? {
            return Err(Error::Containment(format!("U' of chart `{}` is not relatively compact in U", c.label)));
        }
        k.push(w.closure());
    }
    let forward = strong
        .strict_changes()
        .map(|(p, q, ch)| {
            let domain = ch.map.preimage_within(&k[p], &ch.domain.intersection(&k[q])?)?;
            Ok(Gluing { from: q, to: p, domain, map: ch.map.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    let rm = RelationModel::from_parts(strong.charts.iter().map(|c| c.label.clone()).collect(), k.clone(), forward)?;
    if let Some(g) = rm.saturated.iter().find(|g| g.from == g.to) {
        return Err(Error::Assertion(format!("chart `{}` does not embed in K: {g}", rm.labels[g.from])));
    }
    Ok(CompactModel { k, rm })
}

impl CompactModel {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn empty_family(&self) -> Family {
        self.k.iter().map(|s| BoxSet::empty(s.dim())).collect()
    }

    pub fn whole(&self) -> Family {
        self.k.clone()
    }

    pub fn saturate(&self, w: &Family) -> Result<Family> {
        self.rm.saturate_family(w)?.ok_or_else(|| Error::Inconclusive("saturation did not settle".into()))
    }

    /// `Pi_p(a)` for `a ⊆ K_p`.
    pub fn project(&self, p: usize, a: &BoxSet) -> Result<Family> {
        let mut w = self.empty_family();
        w[p] = a.intersection(&self.k[p])?;
        self.saturate(&w)
    }

    pub fn complement(&self, w: &Family) -> Result<Family> {
        self.k.iter().zip(w).map(|(k, a)| k.difference(a)).collect()
    }

    pub fn union(&self, a: &Family, b: &Family) -> Result<Family> {
        a.iter().zip(b).map(|(x, y)| x.union(y)).collect()
    }

    pub fn is_subset(&self, a: &Family, b: &Family) -> Result<bool> {
        for (x, y) in a.iter().zip(b) {
            if !x.is_subset(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_disjoint(&self, a: &Family, b: &Family) -> Result<bool> {
        for (x, y) in a.iter().zip(b) {
            if !x.is_disjoint(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_saturated(&self, w: &Family) -> Result<bool> {
        Ok(self.saturate(w)? == *w)
    }

    pub fn is_open(&self, w: &Family) -> Result<bool> {
        if !self.is_saturated(w)? {
            return Ok(false);
        }
        for (a, k) in w.iter().zip(&self.k) {
            if !a.is_open_in(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_closed(&self, w: &Family) -> Result<bool> {
        Ok(self.is_saturated(w)? && w.iter().all(BoxSet::is_closed))
    }

    /// Largest open saturated family inside `w`.
    pub fn interior(&self, w: &Family) -> Result<Family> {
        let mut cur = w.clone();
        for _ in 0..FIXPOINT_ROUNDS {
            let rel: Family = cur.iter().zip(&self.k).map(|(a, k)| a.interior_rel(k)).collect::<Result<_>>()?;
            let next = self.complement(&self.saturate(&self.complement(&rel)?)?)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::Inconclusive("interior in K did not settle".into()))
    }

    /// Smallest closed saturated family containing `w`. Images of the compact
    /// closures are compact, so one saturation suffices.
    pub fn closure(&self, w: &Family) -> Result<Family> {
        self.saturate(&w.iter().map(BoxSet::closure).collect())
    }

    pub fn contains(&self, w: &Family, q: &KPoint) -> bool {
        w[q.chart].contains_point(&q.x)
    }

    pub fn check_point(&self, q: &KPoint) -> Result<()> {
        if q.chart >= self.len() || q.x.len() != self.k[q.chart].dim() || !self.k[q.chart].contains_point(&q.x) {
            return Err(Error::PointOutsideChart(self.rm.labels.get(q.chart).cloned().unwrap_or_else(|| q.chart.to_string())));
        }
        Ok(())
    }

    /// All representatives of `q`, one per chart in `P(q)`, sorted by chart.
    pub fn representatives(&self, q: &KPoint) -> Result<Vec<KPoint>> {
        self.check_point(q)?;
        Ok(self.rm.class_of(q.chart, &q.x).into_iter().map(|(c, x)| KPoint::new(c, x)).collect())
    }

    /// `P(q)`.
    pub fn charts_of(&self, q: &KPoint) -> Result<Vec<usize>> {
        Ok(self.representatives(q)?.into_iter().map(|r| r.chart).collect())
    }

    /// Saturated open neighbourhood of `q` built from radius-`r` balls around
    /// every representative.
    pub fn ball_open(&self, q: &KPoint, r: &Rational) -> Result<Family> {
        let mut w = self.empty_family();
        for rep in self.representatives(q)? {
            w[rep.chart] = ball(&rep.x, r).intersection(&self.k[rep.chart])?;
        }
        let open = self.interior(&self.saturate(&w)?)?;
        if !self.contains(&open, q) {
            return Err(Error::Assertion("ball neighbourhood misses its centre".into()));
        }
        Ok(open)
    }

    /// Disjoint open families around `q` and around the closed `c`, found by
    /// shrinking a ball around `q` until its closure misses `c`.
    pub fn separate_from_closed(&self, q: &KPoint, c: &Family) -> Result<(Family, Family)> {
        if !self.is_closed(c)? {
            return Err(Error::Containment("set to separate from is not closed in K".into()));
        }
        if self.contains(c, q) {
            return Err(Error::Containment("point lies in the closed set".into()));
        }
        let mut r = Rational::new(BigInt::one(), BigInt::from(2));
        for _ in 0..24 {
            let v = self.ball_open(q, &r)?;
            let cv = self.closure(&v)?;
            if self.is_disjoint(&cv, c)? {
                return Ok((v, self.complement(&cv)?));
            }
            r /= int(2);
        }
        Err(Error::Inconclusive("no separating neighbourhoods found".into()))
    }
}

/// Index of one basis member: `None` is the empty member, otherwise the
/// lower corner `j` of the open box `prod (j_i h, (j_i + 2) h)`, `h = 2^-L`.
pub type MemberIndex = Option<Vec<BigInt>>;

/// The dyadic family at level `L`: traces on `K_p` of open boxes of side
/// `2h` with corners on the grid `h Z^d`, plus the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    pub level: u32,
}

/// `U^+(i) = ⋃ Pi_p(U_{p,i_p})` and its interior `U(i)` in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub index: Vec<MemberIndex>,
    pub upper: Family,
    pub open: Family,
}

pub fn basis_family(level: u32) -> Result<BasisFamily> {
    if level == 0 {
        return Err(Error::NonPositive("level must be at least 1".into()));
    }
    Ok(BasisFamily { level })
}

fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

impl BasisFamily {
    pub fn step(&self) -> Rational {
        dyadic(self.level)
    }

    pub fn cell(&self, j: &[BigInt]) -> GBox {
        let h = self.step();
        let sides = j
            .iter()
            .map(|j| {
                let lo = Rational::from_integer(j.clone()) * &h;
                Interval::open(lo.clone(), lo + &h * int(2)).unwrap()
            })
            .collect();
        GBox::new(sides).unwrap()
    }

    pub fn member(&self, cm: &CompactModel, p: usize, i: &MemberIndex) -> Result<BoxSet> {
        match i {
            None => Ok(BoxSet::empty(cm.k[p].dim())),
            Some(j) => BoxSet::from_box(self.cell(j)).intersection(&cm.k[p]),
        }
    }

    /// `I_p(x)`: indices of members of chart `p` containing `x`.
    pub fn indices_containing(&self, x: &[Rational]) -> Vec<Vec<BigInt>> {
        let h = self.step();
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for v in x {
            let t = v / &h;
            let f = floor(&t);
            let opts: Vec<BigInt> = if t.is_integer() { vec![f - 1] } else { vec![&f - 1, f] };
            out = out.into_iter().flat_map(|pre| opts.iter().map(move |o| [pre.clone(), vec![o.clone()]].concat())).collect();
        }
        out
    }

    /// The non-empty members of chart `p`, failing past `cap`.
    pub fn members(&self, cm: &CompactModel, p: usize, cap: usize) -> Result<Vec<(Vec<BigInt>, BoxSet)>> {
        let Some(bb) = cm.k[p].bounding_box() else { return Ok(Vec::new()) };
        let h = self.step();
        let mut ranges: Vec<(BigInt, BigInt)> = Vec::new();
        for s in bb.sides() {
            let (Some(lo), Some(hi)) = (s.lo().value(), s.hi().value()) else {
                return Err(Error::Containment("K_p is unbounded".into()));
            };
            ranges.push((floor(&(lo / &h)) - 1, floor(&(hi / &h))));
        }
        let total = ranges.iter().try_fold(BigInt::one(), |acc, (a, b): &(BigInt, BigInt)| {
            let n = acc * (b - a + 1);
            if n > BigInt::from(cap) { None } else { Some(n) }
        });
        if total.is_none() {
            return Err(Error::TooManyElements(cap));
        }
        let mut idx: Vec<Vec<BigInt>> = vec![Vec::new()];
        for (a, b) in &ranges {
            let mut next = Vec::new();
            for pre in &idx {
                let mut j = a.clone();
                while &j <= b {
                    next.push([pre.clone(), vec![j.clone()]].concat());
                    j += 1;
                }
            }
            idx = next;
        }
        let mut out = Vec::new();
        for j in idx {
            let m = self.member(cm, p, &Some(j.clone()))?;
            if !m.is_empty() {
                out.push((j, m));
            }
        }
        Ok(out)
    }

    pub fn element(&self, cm: &CompactModel, index: Vec<MemberIndex>) -> Result<BasisElement> {
        let mut upper = cm.empty_family();
        for (p, i) in index.iter().enumerate() {
            upper = cm.union(&upper, &cm.project(p, &self.member(cm, p, i)?)?)?;
        }
        let open = cm.interior(&upper)?;
        Ok(BasisElement { index, upper, open })
    }

    /// Every element `U(i)`, failing past `cap` elements.
    pub fn elements(&self, cm: &CompactModel, cap: usize) -> Result<Vec<BasisElement>> {
        let mut choices: Vec<Vec<MemberIndex>> = Vec::new();
        for p in 0..cm.len() {
            let mut c: Vec<MemberIndex> = vec![None];
            c.extend(self.members(cm, p, cap)?.into_iter().map(|(j, _)| Some(j)));
            choices.push(c);
        }
        let count = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|n| *n <= cap));
        if count.is_none() {
            return Err(Error::TooManyElements(cap));
        }
        product(&choices).into_iter().map(|ix| self.element(cm, ix)).collect()
    }
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for c in choices {
        out = out.into_iter().flat_map(|pre| c.iter().map(move |x| [pre.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

/// Exact check that `U^+(i)` is a neighbourhood of `q` for one index
/// choice: the closed set `K_0` misses `q` and its complement lies in
/// `U^+(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodCheck {
    pub index: Vec<MemberIndex>,
    pub k0: Family,
    pub k0_closed: bool,
    pub q_outside_k0: bool,
    pub complement_inside_upper: bool,
    pub q_in_open: bool,
}

impl NeighbourhoodCheck {
    pub fn holds(&self) -> bool {
        self.k0_closed && self.q_outside_k0 && self.complement_inside_upper && self.q_in_open
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbbReport {
    pub level: u32,
    pub representatives: Vec<KPoint>,
    /// `I_p(q)` per chart of `P(q)`, in the order of `representatives`.
    pub indices: Vec<Vec<Vec<BigInt>>>,
    pub neighbourhoods: Vec<NeighbourhoodCheck>,
    /// Per test open: an index with `U^+(i)` inside it, if one exists.
    pub refinements: Vec<Option<Vec<MemberIndex>>>,
}

impl NbbReport {
    pub fn neighbourhoods_hold(&self) -> bool {
        !self.neighbourhoods.is_empty() && self.neighbourhoods.iter().all(NeighbourhoodCheck::holds)
    }

    pub fn refinements_hold(&self) -> bool {
        self.refinements.iter().all(Option::is_some)
    }

    /// Test opens not yet refined at this level; a higher level may help.
    pub fn unrefined(&self) -> Vec<usize> {
        self.refinements.iter().enumerate().filter(|(_, r)| r.is_none()).map(|(i, _)| i).collect()
    }
}

/// Index choices over `I_p(q)`, at most `cap` of them.
fn index_choices(cm: &CompactModel, reps: &[KPoint], indices: &[Vec<Vec<BigInt>>], cap: usize) -> Vec<Vec<MemberIndex>> {
    let per_chart: Vec<Vec<MemberIndex>> = (0..cm.len())
        .map(|p| match reps.iter().position(|r| r.chart == p) {
            Some(i) => indices[i].iter().cloned().map(Some).collect(),
            None => vec![None],
        })
        .collect();
    let mut all = product(&per_chart);
    all.truncate(cap);
    all
}

pub fn verify_nbb(cm: &CompactModel, q: &KPoint, fam: &BasisFamily, test_opens: &[Family]) -> Result<NbbReport> {
    const CHOICES: usize = 64;
    let reps = cm.representatives(q)?;
    let indices: Vec<Vec<Vec<BigInt>>> = reps.iter().map(|r| fam.indices_containing(&r.x)).collect();
    let mut neighbourhoods = Vec::new();
    for index in index_choices(cm, &reps, &indices, CHOICES) {
        let mut k0 = cm.empty_family();
        for (p, i) in index.iter().enumerate() {
            let rest = match i {
                Some(_) => cm.k[p].difference(&fam.member(cm, p, i)?)?,
                None => cm.k[p].clone(),
            };
            k0 = cm.union(&k0, &cm.project(p, &rest)?)?;
        }
        let el = fam.element(cm, index.clone())?;
        neighbourhoods.push(NeighbourhoodCheck {
            k0_closed: cm.is_closed(&k0)?,
            q_outside_k0: !cm.contains(&k0, q),
            complement_inside_upper: cm.is_subset(&cm.complement(&k0)?, &el.upper)?,
            q_in_open: cm.contains(&el.open, q),
            index,
            k0,
        });
    }
    let mut refinements = Vec::new();
    for t in test_opens {
        if !cm.contains(t, q) {
            return Err(Error::Containment("test open does not contain the point".into()));
        }
        let mut found = None;
        for index in index_choices(cm, &reps, &indices, CHOICES) {
            if cm.is_subset(&fam.element(cm, index.clone())?.upper, t)? {
                found = Some(index);
                break;
            }
        }
        refinements.push(found);
    }
    Ok(NbbReport { level: fam.level, representatives: reps, indices, neighbourhoods, refinements })
}

/// Distinct points of `K` among grid points of spacing `2^-level` in the
/// charts, counted by class.
pub fn count_classes_on_grid(cm: &CompactModel, level: u32) -> Result<usize> {
    let h = dyadic(level);
    let mut seen = std::collections::BTreeSet::new();
    for (p, k) in cm.k.iter().enumerate() {
        let Some(bb) = k.bounding_box() else { continue };
        let mut pts: Vec<Vec<Rational>> = vec![Vec::new()];
        for s in bb.sides() {
            let (Some(lo), Some(hi)) = (s.lo().value(), s.hi().value()) else {
                return Err(Error::Containment("K_p is unbounded".into()));
            };
            let mut vals = Vec::new();
            let mut t = Rational::from_integer(floor(&(lo / &h))) * &h;
            while &t <= hi {
                vals.push(t.clone());
                t += &h;
            }
            pts = pts.into_iter().flat_map(|pre| vals.iter().map(move |v| [pre.clone(), vec![v.clone()]].concat())).collect();
        }
        for x in pts.into_iter().filter(|x| k.contains_point(x)) {
            let class = cm.rm.class_of(p, &x);
            seen.insert(class[0].clone());
        }
    }
    Ok(seen.len())
}

impl BasisElement {
    pub fn is_empty(&self) -> bool {
        self.upper.iter().all(BoxSet::is_empty)
    }
}

/// `true` when every member of the coarse family is a union of members of
/// the fine one, on every chart.
pub fn refines(cm: &CompactModel, coarse: &BasisFamily, fine: &BasisFamily, cap: usize) -> Result<bool> {
    if fine.level < coarse.level {
        return Ok(false);
    }
    for p in 0..cm.len() {
        let fine_members = fine.members(cm, p, cap)?;
        for (_, m) in coarse.members(cm, p, cap)? {
            let mut cover = BoxSet::empty(m.dim());
            for (_, f) in &fine_members {
                if f.is_subset(&m)? {
                    cover = cover.union(f)?;
                }
            }
            if cover != m {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
