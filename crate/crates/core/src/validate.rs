//! Axiom checks for charts, coordinate changes and weak good coordinate
//! systems. Every failure becomes a [`Violation`] carrying a witness that
//! exhibits the failure on its own.

use std::fmt;

use crate::atlas::{Atlas, CoordinateChange, KChart};
use crate::boxset::BoxSet;
use crate::error::Result;
use crate::map::{maps_agree_on, Agreement, BoxAffineMap};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    Point(Vec<Rational>),
    Set(BoxSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub labels: Vec<String>,
    pub witness: Witness,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: &str, labels: &[&str], witness: Witness, detail: impl Into<String>) {
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            witness,
            detail: detail.into(),
        });
    }

    /// Records a violation witnessed by a point of `bad` when `bad` is nonempty.
    fn push_if(&mut self, axiom: &str, labels: &[&str], bad: &BoxSet, detail: &str) -> bool {
        match bad.sample_point() {
            Some(x) => {
                self.push(axiom, labels, Witness::Point(x), detail);
                true
            }
            None => false,
        }
    }

    fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => write!(f, "-"),
            Witness::Point(x) => write!(f, "{}", crate::rational::format_point(x)),
            Witness::Set(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {} (witness {})", self.axiom, self.labels.join(","), self.detail, self.witness)
    }
}

pub fn validate_chart(c: &KChart, x: &BoxSet) -> ValidationReport {
    let mut r = ValidationReport::default();
    let l = [c.label.as_str()];
    if c.u.dim() != c.dim || c.s.dim() != c.dim || c.psi.src_dim() != c.dim || c.psi.dst_dim() != x.dim() {
        r.push("Def2.1", &l, Witness::None, "inconsistent dimensions");
        return r;
    }
    (|| -> Result<()> {
        if r.push_if("Def2.1", &l, &c.s.difference(&c.u)?, "S is not contained in U") {
            return Ok(());
        }
        let missing = c.s.closure().intersection(&c.u)?.difference(&c.s)?;
        r.push_if("Def2.1", &l, &missing, "S is not closed in U");
        if !c.u.is_locally_compact() {
            let frontier = c.u.missing_frontier();
            let bad = frontier.closure().difference(&frontier)?.intersection(&c.u)?;
            r.push("Def2.1", &l, point_or_set(bad), "U is not locally compact");
        }
        if !c.psi.is_injective() {
            r.push("Def2.1", &l, Witness::None, "psi is not injective");
            return Ok(());
        }
        let foot = c.footprint()?;
        let outside = foot.difference(x)?;
        if outside.is_empty() {
            let not_open = foot.difference(&foot.interior_rel(x)?)?;
            r.push_if("Def2.1", &l, &not_open, "psi(S) is not open in X");
        } else {
            r.push_if("Def2.1", &l, &c.psi.preimage_within(&outside, &c.s)?, "psi(S) is not contained in X");
        }
        Ok(())
    })()
    .expect("dimensions checked");
    r
}

fn point_or_set(s: BoxSet) -> Witness {
    match s.sample_point() {
        Some(x) => Witness::Point(x),
        None => Witness::Set(s),
    }
}

/// Checks `Phi = (U_pq, phi)` from chart `src` (q) to chart `dst` (p).
pub fn validate_change(ch: &CoordinateChange, src: &KChart, dst: &KChart) -> ValidationReport {
    let mut r = ValidationReport::default();
    let l = [dst.label.as_str(), src.label.as_str()];
    if ch.domain.dim() != src.dim || ch.map.src_dim() != src.dim || ch.map.dst_dim() != dst.dim {
        r.push("Def2.2", &l, Witness::None, "inconsistent dimensions");
        return r;
    }
    (|| -> Result<()> {
        let d = &ch.domain;
        if r.push_if("Def2.2(1)", &l, &d.difference(&src.u)?, "domain is not contained in U_q") {
            return Ok(());
        }
        r.push_if("Def2.2(1)", &l, &d.difference(&d.interior_rel(&src.u)?)?, "domain is not open in U_q");
        if !ch.map.is_injective() {
            r.push("Def2.2(2)", &l, Witness::None, "phi is not injective");
            return Ok(());
        }
        let escapes = d.difference(&ch.map.preimage(&dst.u)?)?;
        r.push_if("Def2.2(2)", &l, &escapes, "phi(domain) is not contained in U_p");
        let lhs = src.s.intersection(d)?;
        let rhs = ch.map.preimage_within(&dst.s, d)?;
        r.push_if("Def2.2(3)", &l, &lhs.difference(&rhs)?, "point of S_q ∩ U_pq not mapped into S_p");
        r.push_if("Def2.2(3)", &l, &rhs.difference(&lhs)?, "point of phi^-1(S_p) outside S_q");
        let both = lhs.intersection(&rhs)?;
        if let Agreement::Disagree(x) = maps_agree_on(&dst.psi.compose(&ch.map)?, &src.psi, &both)? {
            r.push("Def2.2(3)", &l, Witness::Point(x), "psi_p ∘ phi differs from psi_q");
        }
        let f_lhs = src.psi.image(&lhs)?;
        let f_rhs = src.footprint()?.intersection(&dst.footprint()?)?;
        r.push_if("Def2.2(4)", &l, &f_rhs.difference(&f_lhs)?, "footprint overlap point not covered by the domain");
        r.push_if("Def2.2(4)", &l, &f_lhs.difference(&f_rhs)?, "domain footprint leaves the footprint overlap");
        Ok(())
    })()
    .expect("dimensions checked");
    r
}

pub fn validate_weak_gcs(a: &Atlas) -> ValidationReport {
    let mut r = ValidationReport::default();
    let n = a.len();
    let lab = |i: usize| a.label(i);
    for i in 0..n {
        for j in 0..n {
            if i < j && a.leq(i, j) && a.leq(j, i) {
                r.push("Def2.3(1)", &[lab(i), lab(j)], Witness::None, "order is not antisymmetric");
            }
            for k in 0..n {
                if a.leq(i, j) && a.leq(j, k) && !a.leq(i, k) {
                    r.push("Def2.3(1)", &[lab(i), lab(j), lab(k)], Witness::None, "order is not transitive");
                }
            }
        }
    }
    for c in &a.charts {
        r.extend(validate_chart(c, &a.x));
    }
    for p in 0..n {
        for q in 0..n {
            let ch = a.change(p, q);
            match (a.leq(q, p), ch) {
                (true, None) => r.push("Def2.3(3)", &[lab(p), lab(q)], Witness::None, "missing coordinate change"),
                (false, Some(_)) => r.push("Def2.3(3)", &[lab(p), lab(q)], Witness::None, "coordinate change between charts not ordered q <= p"),
                (true, Some(ch)) if p == q => {
                    if ch.domain != a.charts[p].u {
                        r.push("Def2.3(3)", &[lab(p), lab(p)], Witness::Set(ch.domain.clone()), "U_pp differs from U_p");
                    }
                    if !ch.map.is_identity() {
                        r.push("Def2.3(3)", &[lab(p), lab(p)], Witness::None, "phi_pp is not the identity");
                    }
                }
                (true, Some(ch)) => {
                    let sub = validate_change(ch, &a.charts[q], &a.charts[p]);
                    r.extend(sub);
                }
                (false, None) => {}
            }
        }
    }
    check_cocycles(a, &mut r).expect("dimensions checked");
    (|| -> Result<()> {
        let feet = a.footprints()?;
        for p in 0..n {
            for q in p + 1..n {
                if !a.comparable(p, q) {
                    let common = feet[p].intersection(&feet[q])?;
                    r.push_if("Def2.3(5)", &[lab(p), lab(q)], &common, "overlapping footprints of incomparable charts");
                }
            }
        }
        let covered = feet.iter().try_fold(BoxSet::empty(a.ambient_dim), |acc, f| acc.union(f))?;
        r.push_if("Def2.3(6)", &[], &a.z.difference(&covered)?, "Z is not covered by the footprints");
        if !a.z.is_compact() {
            r.push("Def2.3", &[], Witness::Set(a.z.clone()), "Z is not compact");
        }
        r.push_if("Def2.3", &[], &a.z.difference(&a.x)?, "Z is not contained in X");
        Ok(())
    })()
    .expect("dimensions checked");
    r
}

/// `U_pqr = phi_qr^{-1}(U_pq) ∩ U_pr`, taken inside `U_qr`.
pub fn triple_domain(a: &Atlas, p: usize, q: usize, r: usize) -> Result<Option<BoxSet>> {
    let (Some(pq), Some(qr), Some(pr)) = (a.change(p, q), a.change(q, r), a.change(p, r)) else {
        return Ok(None);
    };
    Ok(Some(qr.map.preimage_within(&pq.domain, &qr.domain)?.intersection(&pr.domain)?))
}

fn check_cocycles(a: &Atlas, rep: &mut ValidationReport) -> Result<()> {
    let n = a.len();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if p == q || q == r || p == r || !a.leq(r, q) || !a.leq(q, p) {
                    continue;
                }
                let Some(dom) = triple_domain(a, p, q, r)? else { continue };
                let via: BoxAffineMap = a.change(p, q).unwrap().map.compose(&a.change(q, r).unwrap().map)?;
                if let Agreement::Disagree(x) = maps_agree_on(&a.change(p, r).unwrap().map, &via, &dom)? {
                    rep.push("Def2.3(4)", &[a.label(p), a.label(q), a.label(r)], Witness::Point(x), "phi_pr differs from phi_pq ∘ phi_qr");
                }
            }
        }
    }
    Ok(())
}
