//! Shrinking a weak good coordinate system until its gluing relation is an
//! equivalence relation with Hausdorff quotient.
//!
//! Pipeline: support compacta `K_p` covering `Z`, an initial shrinking
//! (stage 1), then metric shrinkings `U^delta_p` of stage 1 around
//! `psi_p^{-1}(K_p)` for `delta_n = delta0 * 2^-n` until both the open stage
//! and its closure model pass the analyzer. Every intermediate invariant is
//! checked exactly; a failure there is an [`Error::Assertion`].

use std::collections::BTreeMap;

use num_traits::One;

use crate::atlas::Atlas;
use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::map::{maps_agree_on, Agreement};
use crate::quotient::{analyze, Analysis, AnalyzeOptions, Gluing, RelationModel};
use crate::rational::{dyadic, half, int, Rational};
use crate::validate::{validate_weak_gcs, ValidationReport, Violation, Witness};

pub type PairMap<T> = BTreeMap<(usize, usize), T>;

/// Per chart, a compact subset `K_p` of the footprint, jointly covering `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCompacta {
    pub k: Vec<BoxSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairShrink {
    /// Closure of `S_q ∩ phi^{-1}(U^0_p) ∩ U^0_q`.
    pub a: BoxSet,
    pub margin: Rational,
    pub v0: BoxSet,
    /// Whether `phi^{-1}(U^0_p) ∩ U^0_q ∩ U_pq` is relatively compact in `U_pq`.
    pub naive_relatively_compact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialShrink {
    pub stage1: Atlas,
    /// `psi_p^{-1}(K_p)` in each chart.
    pub core: Vec<BoxSet>,
    pub margins: Vec<Rational>,
    pub pairs: PairMap<PairShrink>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkStage {
    pub delta: Rational,
    pub u: Vec<BoxSet>,
    pub upq: PairMap<BoxSet>,
    pub c: Vec<BoxSet>,
    pub cpq: PairMap<BoxSet>,
    pub atlas: Atlas,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkSchedule {
    /// `None` picks [`auto_delta0`].
    pub delta0: Option<Rational>,
    pub max_n: u32,
    pub analyze: AnalyzeOptions,
}

impl Default for ShrinkSchedule {
    fn default() -> Self {
        ShrinkSchedule { delta0: None, max_n: 32, analyze: AnalyzeOptions::default() }
    }
}

impl ShrinkSchedule {
    pub fn with_delta0(delta0: Rational) -> Self {
        ShrinkSchedule { delta0: Some(delta0), ..Default::default() }
    }
}

/// Containment of a stage's pair domains in chosen neighbourhoods `W_pq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainReport {
    /// `(p, q)` and the part of `U^n_pq` outside `W_pq` (empty when contained).
    pub pairs: Vec<((usize, usize), BoxSet)>,
}

impl DomainReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|(_, s)| s.is_empty())
    }

    /// The offending cells, per pair.
    pub fn offending_cells(&self) -> Vec<((usize, usize), GBox)> {
        self.pairs.iter().flat_map(|(k, s)| s.cells().into_iter().map(move |c| (*k, c))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub n: u32,
    pub delta: Rational,
    pub transitivity_witnesses: usize,
    pub separation_witnesses: Option<usize>,
    pub closure_transitivity_witnesses: usize,
    pub closure_separation_witnesses: Option<usize>,
    pub pair_closures_compact: bool,
    pub domains_contained: bool,
    /// Pairs whose naive domain `phi^{-1}(U^n_p) ∩ U^n_q ∩ U_pq` fails to be
    /// relatively compact in `U_pq`.
    pub naive_not_relatively_compact: Vec<(usize, usize)>,
    pub strong: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongCertificate {
    pub n: u32,
    pub delta: Rational,
    pub open: Analysis,
    pub closure: Analysis,
    /// The open stage relation equals the closure model restricted to it.
    pub relations_agree: bool,
    pub pair_closures_compact: bool,
    pub domains: DomainReport,
    /// Limit points of pair domains over the compacta stay in the domains.
    pub limits: ValidationReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkOutcome {
    pub compacta: SupportCompacta,
    pub initial: InitialShrink,
    pub delta0: Rational,
    pub stage: ShrinkStage,
    pub certificate: StrongCertificate,
    pub trace: Vec<StageRecord>,
}

impl ShrinkOutcome {
    pub fn atlas(&self) -> &Atlas {
        &self.stage.atlas
    }

    /// `U'_p`: the `delta/2` neighbourhood of `psi_p^{-1}(K_p)`, relatively
    /// compact in the certified chart because `U^delta_p` is.
    pub fn inner_sets(&self) -> Result<Vec<BoxSet>> {
        let h = half(&self.stage.delta);
        self.initial.core.iter().zip(&self.stage.u).map(|(c, u)| c.dilate_lt_delta(&h, u)).collect()
    }
}

fn bisect(b: &GBox) -> Vec<GBox> {
    let mut out = vec![Vec::new()];
    for s in b.sides() {
        let halves = match (s.lo().value(), s.hi().value()) {
            (Some(a), Some(c)) if !s.is_point() => {
                let m = half(&(a + c));
                vec![Interval::closed(a.clone(), m.clone()).unwrap(), Interval::closed(m, c.clone()).unwrap()]
            }
            _ => vec![s.clone()],
        };
        out = out.into_iter().flat_map(|pre: Vec<Interval>| halves.iter().map(move |h| [pre.clone(), vec![h.clone()]].concat())).collect();
    }
    out.into_iter().map(|s| GBox::new(s).unwrap()).collect()
}

const MAX_BISECTIONS: usize = 24;

/// Covers `Z` by closed boxes, each inside some footprint, bisecting until
/// that holds. A box goes to every chart whose footprint contains it.
pub fn support_compacta(a: &Atlas) -> Result<SupportCompacta> {
    if !a.z.is_compact() {
        return Err(Error::Containment("Z is not compact".into()));
    }
    let feet = a.footprints()?;
    let d = a.ambient_dim;
    let mut k: Vec<Vec<GBox>> = vec![Vec::new(); a.len()];
    let mut queue: Vec<(GBox, usize)> = a.z.cells().iter().map(|c| (c.closure(), 0)).collect();
    while let Some((b, depth)) = queue.pop() {
        let bs = BoxSet::from_box(b.clone());
        let mut placed = false;
        for (p, f) in feet.iter().enumerate() {
            if bs.is_subset(f)? {
                k[p].push(b.clone());
                placed = true;
            }
        }
        if placed {
            continue;
        }
        if depth >= MAX_BISECTIONS {
            return Err(Error::Containment(format!("Z near {b} is not covered by the footprints")));
        }
        queue.extend(bisect(&b).into_iter().map(|c| (c, depth + 1)));
    }
    Ok(SupportCompacta { k: k.into_iter().map(|v| BoxSet::from_boxes(d, v)).collect::<Result<_>>()? })
}

/// Checks that `k` covers `Z` and sits inside the footprints.
pub fn check_compacta(a: &Atlas, k: &SupportCompacta) -> Result<ValidationReport> {
    let mut r = ValidationReport::default();
    let feet = a.footprints()?;
    let mut cover = BoxSet::empty(a.ambient_dim);
    for (p, kp) in k.k.iter().enumerate() {
        if !kp.is_compact() {
            r.violations.push(violation("compacta", &[a.label(p)], Witness::Set(kp.clone()), "K_p is not compact"));
        }
        let out = kp.difference(&feet[p])?;
        if let Some(x) = out.sample_point() {
            r.violations.push(violation("compacta", &[a.label(p)], Witness::Point(x), "K_p leaves the footprint"));
        }
        cover = cover.union(kp)?;
    }
    if let Some(x) = a.z.difference(&cover)?.sample_point() {
        r.violations.push(violation("compacta", &[], Witness::Point(x), "Z is not covered by the compacta"));
    }
    Ok(r)
}

fn violation(axiom: &str, labels: &[&str], witness: Witness, detail: &str) -> Violation {
    Violation { axiom: axiom.into(), labels: labels.iter().map(|s| s.to_string()).collect(), witness, detail: detail.into() }
}

/// Half the gap between `core` and the points missing from the closure of
/// `space`; one when nothing is missing or `core` is empty.
fn margin(core: &BoxSet, space: &BoxSet) -> Result<Rational> {
    let frontier = space.missing_frontier();
    Ok(match core.linf_gap(&frontier)? {
        None => Rational::one(),
        Some(g) => half(&g),
    })
}

fn cores(a: &Atlas, k: &SupportCompacta) -> Result<Vec<BoxSet>> {
    a.charts.iter().zip(&k.k).map(|(c, kp)| c.footprint_preimage(kp)).collect()
}

pub fn initial_shrink(a: &Atlas, k: &SupportCompacta) -> Result<InitialShrink> {
    let core = cores(a, k)?;
    let mut margins = Vec::new();
    let mut u0 = Vec::new();
    for (c, kp) in a.charts.iter().zip(&core) {
        let e = margin(kp, &c.u)?;
        u0.push(kp.dilate_lt_delta(&e, &c.u)?);
        margins.push(e);
    }
    let mut pairs = BTreeMap::new();
    let mut u0pq = BTreeMap::new();
    for (p, q, ch) in a.strict_changes() {
        let lbl = format!("({},{})", a.label(p), a.label(q));
        let inside = ch.map.preimage_within(&u0[p], &ch.domain)?.intersection(&u0[q])?;
        let a0 = a.charts[q].s.intersection(&inside)?;
        let closed = a0.closure();
        if !closed.is_compact() || !closed.is_subset(&ch.domain)? {
            return Err(Error::Assertion(format!("closure of the footprint part of pair {lbl} leaves U_pq or is not compact")));
        }
        let e = margin(&closed, &ch.domain)?;
        let v0 = closed.dilate_lt_delta(&e, &ch.domain)?;
        u0pq.insert((p, q), v0.intersection(&inside)?);
        pairs.insert(
            (p, q),
            PairShrink { a: closed, margin: e, v0, naive_relatively_compact: inside.is_relatively_compact_in(&ch.domain)? },
        );
    }
    let report = verify_restriction(a, &u0, &u0pq)?;
    if !report.pass() {
        return Err(Error::Assertion(format!("initial shrinking is not a valid restriction: {}", report.violations[0])));
    }
    let stage1 = a.restrict(&u0, &u0pq)?;
    let sh = check_shrinking(a, &stage1)?;
    if !sh.pass() {
        return Err(Error::Assertion(format!("initial shrinking is not a shrinking: {}", sh.violations[0])));
    }
    Ok(InitialShrink { stage1, core, margins, pairs })
}

/// Checks that `u0`, `u0pq` restrict `a` to a weak system: each pair domain
/// is squeezed between its footprint part and `phi^{-1}(U0_p) ∩ U0_q`,
/// the restricted footprints cover `Z`, and the restricted atlas validates.
pub fn verify_restriction(a: &Atlas, u0: &[BoxSet], u0pq: &PairMap<BoxSet>) -> Result<ValidationReport> {
    let mut r = ValidationReport::default();
    if u0.len() != a.len() {
        return Err(Error::InvalidAtlas("restriction needs one set per chart".into()));
    }
    for (p, (c, w)) in a.charts.iter().zip(u0).enumerate() {
        if let Some(x) = w.difference(&c.u)?.sample_point() {
            r.violations.push(violation("restriction", &[a.label(p)], Witness::Point(x), "U0_p is not contained in U_p"));
        } else if let Some(x) = w.difference(&w.interior_rel(&c.u)?)?.sample_point() {
            r.violations.push(violation("restriction", &[a.label(p)], Witness::Point(x), "U0_p is not open in U_p"));
        }
    }
    for (p, q, ch) in a.strict_changes() {
        let labels = [a.label(p), a.label(q)];
        let Some(w) = u0pq.get(&(p, q)) else {
            r.violations.push(violation("restriction", &labels, Witness::None, "missing restricted pair domain"));
            continue;
        };
        let upper = ch.map.preimage_within(&u0[p], &ch.domain)?.intersection(&u0[q])?;
        let lower = upper.intersection(&a.charts[q].s)?;
        if let Some(x) = lower.difference(w)?.sample_point() {
            r.violations.push(violation("restriction", &labels, Witness::Point(x), "footprint point of phi^-1(U0_p) ∩ U0_q missing from U0_pq"));
        }
        if let Some(x) = w.difference(&upper)?.sample_point() {
            r.violations.push(violation("restriction", &labels, Witness::Point(x), "U0_pq leaves phi^-1(U0_p) ∩ U0_q"));
        }
    }
    let mut cover = BoxSet::empty(a.ambient_dim);
    for (c, w) in a.charts.iter().zip(u0) {
        if w.dim() == c.dim {
            cover = cover.union(&c.psi.image(&c.s.intersection(w)?)?)?;
        }
    }
    if let Some(x) = a.z.difference(&cover)?.sample_point() {
        r.violations.push(violation("restriction", &[], Witness::Point(x), "restricted footprints do not cover Z"));
    }
    if r.pass() {
        let restricted = a.restrict(u0, u0pq)?;
        for v in validate_weak_gcs(&restricted).violations {
            r.violations.push(Violation { detail: format!("restricted atlas: {}", v.detail), ..v });
        }
    }
    Ok(r)
}

/// Checks that `s` is a shrinking of `a`: same charts and order, every
/// chart and pair domain relatively compact in the original, maps and
/// `psi` unchanged, `S` restricted.
pub fn check_shrinking(a: &Atlas, s: &Atlas) -> Result<ValidationReport> {
    let mut r = ValidationReport::default();
    let mut push = |labels: &[&str], w: Witness, d: &str| r.violations.push(violation("Def2.8", labels, w, d));
    if a.len() != s.len() || a.leq != s.leq || a.x != s.x || a.z != s.z {
        push(&[], Witness::None, "charts, order, X or Z differ");
        return Ok(r);
    }
    for (p, (c, d)) in a.charts.iter().zip(&s.charts).enumerate() {
        let l = [a.label(p)];
        if c.label != d.label || c.psi != d.psi {
            push(&l, Witness::None, "chart label or psi differs");
        }
        if !d.u.is_relatively_compact_in(&c.u)? || !d.u.is_open_in(&c.u)? {
            push(&l, Witness::Set(d.u.clone()), "chart is not a shrinking");
        }
        if d.s != c.s.intersection(&d.u)? {
            push(&l, Witness::Set(d.s.clone()), "S is not restricted");
        }
    }
    for (&(p, q), ch) in &a.changes {
        let l = [a.label(p), a.label(q)];
        match s.changes.get(&(p, q)) {
            None => push(&l, Witness::None, "coordinate change dropped"),
            Some(d) => {
                if d.map != ch.map {
                    push(&l, Witness::None, "map is not a restriction");
                }
                if !d.domain.is_subset(&ch.domain)? || !d.domain.is_relatively_compact_in(&ch.domain)? {
                    push(&l, Witness::Set(d.domain.clone()), "pair domain is not a shrinking");
                }
            }
        }
    }
    Ok(r)
}

/// Largest `delta0` of the form `margin / 2` that keeps every `U^delta0_p`
/// relatively compact in stage 1.
pub fn auto_delta0(init: &InitialShrink) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for (c, kp) in init.stage1.charts.iter().zip(&init.core) {
        let m = margin(kp, &c.u)?;
        if best.as_ref().is_none_or(|b| &m < b) {
            best = Some(m);
        }
    }
    Ok(best.unwrap_or_else(Rational::one))
}

/// `U^delta_p`, pair domains inside stage 1, and the closure model.
pub fn delta_stage(init: &InitialShrink, delta: &Rational) -> Result<ShrinkStage> {
    if *delta <= int(0) {
        return Err(Error::NonPositive(format!("delta = {delta}")));
    }
    let s1 = &init.stage1;
    let mut u = Vec::new();
    for (c, kp) in s1.charts.iter().zip(&init.core) {
        let ud = kp.dilate_lt_delta(delta, &c.u)?;
        if !ud.is_relatively_compact_in(&c.u)? {
            return Err(Error::DeltaTooLarge(format!("U^delta of chart `{}` is not relatively compact in stage 1 for delta = {delta}", c.label)));
        }
        u.push(ud);
    }
    let c: Vec<BoxSet> = u.iter().map(BoxSet::closure).collect();
    let mut upq = BTreeMap::new();
    let mut cpq = BTreeMap::new();
    for (p, q, ch) in s1.strict_changes() {
        upq.insert((p, q), ch.map.preimage_within(&u[p], &ch.domain)?.intersection(&u[q])?);
        cpq.insert((p, q), ch.map.preimage_within(&c[p], &ch.domain)?.intersection(&c[q])?);
    }
    let atlas = s1.restrict(&u, &upq)?;
    Ok(ShrinkStage { delta: delta.clone(), u, upq, c, cpq, atlas })
}

impl ShrinkStage {
    /// The closure-model relation on the closures `C_p`.
    pub fn closure_model(&self) -> Result<RelationModel> {
        let forward = self
            .atlas
            .strict_changes()
            .map(|(p, q, ch)| Gluing { from: q, to: p, domain: self.cpq[&(p, q)].clone(), map: ch.map.clone() })
            .collect();
        RelationModel::from_parts(self.atlas.charts.iter().map(|c| c.label.clone()).collect(), self.c.clone(), forward)
    }

    /// `x ~ y` on the open stage iff `x ~' y`, checked as set equality of
    /// every pair domain with the closure-model domain cut down to the stage.
    pub fn relations_agree(&self) -> Result<bool> {
        for (p, q, ch) in self.atlas.strict_changes() {
            let cut = self.cpq[&(p, q)].intersection(&self.u[q])?.intersection(&ch.map.preimage(&self.u[p])?)?;
            if cut != ch.domain {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn pair_closures_compact(&self) -> bool {
        self.cpq.values().all(BoxSet::is_compact)
    }

    fn is_within(&self, prev: &ShrinkStage) -> Result<bool> {
        for (a, b) in self.u.iter().zip(&prev.u) {
            if !a.is_subset(b)? {
                return Ok(false);
            }
        }
        for (k, a) in &self.upq {
            if !a.is_subset(&prev.upq[k])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `W_pq`: stage-1 pair domain minus a closed neighbourhood of its missing
/// frontier, thin enough to keep `psi_q^{-1}(K_p ∩ K_q)` inside.
pub fn default_neighbourhoods(init: &InitialShrink, k: &SupportCompacta) -> Result<PairMap<BoxSet>> {
    let s1 = &init.stage1;
    let mut out = BTreeMap::new();
    for (p, q, ch) in s1.strict_changes() {
        let core = s1.charts[q].footprint_preimage(&k.k[p].intersection(&k.k[q])?)?;
        let frontier = ch.domain.missing_frontier();
        let w = match core.linf_gap(&frontier)? {
            None if frontier.is_empty() => ch.domain.clone(),
            None => BoxSet::empty(ch.domain.dim()),
            Some(g) => {
                let band = frontier.dilate_lt_delta(&half(&g), &BoxSet::full(frontier.dim()))?.closure();
                ch.domain.difference(&band)?
            }
        };
        out.insert((p, q), w);
    }
    Ok(out)
}

/// Which stage pair domains lie inside the given `W_pq`.
pub fn domain_diagnostics(stage: &ShrinkStage, w: &PairMap<BoxSet>) -> Result<DomainReport> {
    let mut pairs = Vec::new();
    for (k, d) in &stage.upq {
        let out = match w.get(k) {
            Some(wk) => d.difference(wk)?,
            None => d.clone(),
        };
        pairs.push((*k, out));
    }
    Ok(DomainReport { pairs })
}

/// Points of `psi_q^{-1}(K_q)` in the closure of the stage-1 pair domain
/// whose affine image lies in `psi_p^{-1}(K_p)` must already be in the pair
/// domain, with `psi_p(phi(x)) = psi_q(x)` there.
pub fn limit_diagnostics(init: &InitialShrink) -> Result<ValidationReport> {
    let s1 = &init.stage1;
    let mut r = ValidationReport::default();
    for (p, q, ch) in s1.strict_changes() {
        let labels = [s1.label(p), s1.label(q)];
        let lim = ch.map.preimage_within(&init.core[p], &init.core[q].intersection(&ch.domain.closure())?)?;
        if let Some(x) = lim.difference(&ch.domain)?.sample_point() {
            r.violations.push(violation("limits", &labels, Witness::Point(x), "limit point outside the stage-1 pair domain"));
        }
        let psi = s1.charts[p].psi.compose(&ch.map)?;
        if let Agreement::Disagree(x) = maps_agree_on(&psi, &s1.charts[q].psi, &lim)? {
            r.violations.push(violation("limits", &labels, Witness::Point(x), "footprints of a limit pair differ"));
        }
    }
    Ok(r)
}

/// Runs the whole pipeline from freshly computed support compacta.
pub fn shrink_to_strong(a: &Atlas, s: &ShrinkSchedule) -> Result<ShrinkOutcome> {
    let r = validate_weak_gcs(a);
    if !r.pass() {
        return Err(Error::NotWeak(r.violations.len()));
    }
    let k = support_compacta(a)?;
    shrink_to_strong_with(a, k, s)
}

pub fn shrink_to_strong_with(a: &Atlas, k: SupportCompacta, s: &ShrinkSchedule) -> Result<ShrinkOutcome> {
    let kr = check_compacta(a, &k)?;
    if !kr.pass() {
        return Err(Error::Containment(kr.violations[0].to_string()));
    }
    let init = initial_shrink(a, &k)?;
    let delta0 = match &s.delta0 {
        Some(d) => d.clone(),
        None => auto_delta0(&init)?,
    };
    delta_stage(&init, &delta0)?;
    let w = default_neighbourhoods(&init, &k)?;
    let limits = limit_diagnostics(&init)?;
    let mut trace = Vec::new();
    let mut prev: Option<ShrinkStage> = None;
    for n in 1..=s.max_n {
        let delta = &delta0 * dyadic(n);
        let stage = delta_stage(&init, &delta)?;
        let restr = verify_restriction(&init.stage1, &stage.u, &stage.upq)?;
        if !restr.pass() {
            return Err(Error::Assertion(format!("stage {n} is not a valid restriction of stage 1: {}", restr.violations[0])));
        }
        let sh = check_shrinking(a, &stage.atlas)?;
        if !sh.pass() {
            return Err(Error::Assertion(format!("stage {n} is not a shrinking: {}", sh.violations[0])));
        }
        if let Some(pv) = &prev {
            if !stage.is_within(pv)? {
                return Err(Error::Assertion(format!("stage {n} is not contained in stage {}", n - 1)));
            }
        }
        if !stage.relations_agree()? {
            return Err(Error::Assertion(format!("stage {n}: open relation differs from the closure model")));
        }
        let open = analyze(&RelationModel::from_atlas(&stage.atlas)?, &s.analyze)?;
        let closure = analyze(&stage.closure_model()?, &s.analyze)?;
        let compact = stage.pair_closures_compact();
        let domains = domain_diagnostics(&stage, &w)?;
        let mut naive = Vec::new();
        for (p, q, ch) in a.strict_changes() {
            let nd = ch.map.preimage_within(&stage.u[p], &ch.domain)?.intersection(&stage.u[q])?;
            if !nd.is_relatively_compact_in(&ch.domain)? {
                naive.push((p, q));
            }
        }
        let strong = open.strong() && closure.strong() && compact;
        trace.push(StageRecord {
            n,
            delta: delta.clone(),
            transitivity_witnesses: open.transitivity.len(),
            separation_witnesses: open.hausdorff.as_ref().map(|h| h.witnesses.len()),
            closure_transitivity_witnesses: closure.transitivity.len(),
            closure_separation_witnesses: closure.hausdorff.as_ref().map(|h| h.witnesses.len()),
            pair_closures_compact: compact,
            domains_contained: domains.holds(),
            naive_not_relatively_compact: naive,
            strong,
        });
        if strong {
            let certificate = StrongCertificate {
                n,
                delta,
                open,
                closure,
                relations_agree: true,
                pair_closures_compact: compact,
                domains,
                limits,
            };
            return Ok(ShrinkOutcome { compacta: k, initial: init, delta0, stage, certificate, trace });
        }
        prev = Some(stage);
    }
    Err(Error::MaxNExhausted { max_n: s.max_n })
}
