//! Charts, coordinate changes and the atlas that bundles them.
//!
//! The atlas stores the order as a reflexive relation matrix exactly as
//! supplied; whether it is a partial order, and whether every required
//! coordinate change is present, are questions for the validator.

use std::collections::BTreeMap;

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::map::BoxAffineMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KChart {
    pub label: String,
    pub dim: usize,
    pub u: BoxSet,
    pub s: BoxSet,
    pub psi: BoxAffineMap,
}

impl KChart {
    pub fn new(label: impl Into<String>, u: BoxSet, s: BoxSet, psi: BoxAffineMap) -> Self {
        KChart { label: label.into(), dim: u.dim(), u, s, psi }
    }

    /// `psi(S)`, the footprint in `X`.
    pub fn footprint(&self) -> Result<BoxSet> {
        self.psi.image(&self.s)
    }

    /// `psi^{-1}(K) ∩ S` for a subset `K` of the ambient space.
    pub fn footprint_preimage(&self, k: &BoxSet) -> Result<BoxSet> {
        self.psi.preimage_within(k, &self.s)
    }

    /// `U|_{U0} = (U0, S ∩ U0, psi)`.
    pub fn restrict(&self, u0: &BoxSet) -> Result<KChart> {
        Ok(KChart { label: self.label.clone(), dim: self.dim, u: u0.clone(), s: self.s.intersection(u0)?, psi: self.psi.clone() })
    }
}

/// `Phi_pq = (U_pq, phi_pq)` from chart `q` to chart `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub p: String,
    pub q: String,
    pub domain: BoxSet,
    pub map: BoxAffineMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub ambient_dim: usize,
    pub x: BoxSet,
    pub z: BoxSet,
    pub charts: Vec<KChart>,
    /// `leq[i][j]` iff `charts[i] <= charts[j]`; always reflexive.
    pub leq: Vec<Vec<bool>>,
    /// Keyed by `(index of p, index of q)` with `q <= p`.
    pub changes: BTreeMap<(usize, usize), CoordinateChange>,
}

impl Atlas {
    /// Builds an atlas after structural checks (labels, dimensions).
    ///
    /// `order` lists strict pairs `(q, p)` meaning `q < p`.
    pub fn new(
        ambient_dim: usize,
        x: BoxSet,
        z: BoxSet,
        charts: Vec<KChart>,
        order: &[(String, String)],
        changes: Vec<CoordinateChange>,
    ) -> Result<Atlas> {
        if ambient_dim == 0 {
            return Err(Error::InvalidAtlas("ambient dimension must be positive".into()));
        }
        for (name, set) in [("X", &x), ("Z", &z)] {
            if set.dim() != ambient_dim {
                return Err(Error::InvalidAtlas(format!("{name} has dimension {} but the ambient dimension is {ambient_dim}", set.dim())));
            }
        }
        for (i, c) in charts.iter().enumerate() {
            if charts[..i].iter().any(|d| d.label == c.label) {
                return Err(Error::InvalidAtlas(format!("duplicate chart label `{}`", c.label)));
            }
            if c.dim == 0 || c.u.dim() != c.dim || c.s.dim() != c.dim || c.psi.src_dim() != c.dim {
                return Err(Error::InvalidAtlas(format!("chart `{}` has inconsistent dimensions", c.label)));
            }
            if c.psi.dst_dim() != ambient_dim {
                return Err(Error::InvalidAtlas(format!("psi of chart `{}` does not land in the ambient space", c.label)));
            }
        }
        let n = charts.len();
        let mut atlas = Atlas {
            ambient_dim,
            x,
            z,
            leq: (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect(),
            charts,
            changes: BTreeMap::new(),
        };
        for (q, p) in order {
            let (qi, pi) = (atlas.index(q)?, atlas.index(p)?);
            if qi == pi {
                return Err(Error::InvalidAtlas(format!("order pair ({q},{p}) is not strict")));
            }
            atlas.leq[qi][pi] = true;
        }
        for ch in changes {
            let (pi, qi) = (atlas.index(&ch.p)?, atlas.index(&ch.q)?);
            let (dq, dp) = (atlas.charts[qi].dim, atlas.charts[pi].dim);
            if ch.domain.dim() != dq || ch.map.src_dim() != dq || ch.map.dst_dim() != dp {
                return Err(Error::InvalidAtlas(format!("change ({},{}) has inconsistent dimensions", ch.p, ch.q)));
            }
            if atlas.changes.insert((pi, qi), ch).is_some() {
                let c = &atlas.changes[&(pi, qi)];
                return Err(Error::InvalidAtlas(format!("duplicate change ({},{})", c.p, c.q)));
            }
        }
        Ok(atlas)
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.charts.iter().position(|c| c.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.charts[i].label
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq[i][j] || self.leq[j][i]
    }

    /// `Phi_pq` for `q <= p`, when present.
    pub fn change(&self, p: usize, q: usize) -> Option<&CoordinateChange> {
        self.changes.get(&(p, q))
    }

    /// Strict order pairs `(q, p)` with `q < p`, in index order.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for q in 0..n {
            for p in 0..n {
                if q != p && self.leq[q][p] {
                    out.push((q, p));
                }
            }
        }
        out
    }

    /// Off-diagonal changes `(p, q)` with `q < p`.
    pub fn strict_changes(&self) -> impl Iterator<Item = (usize, usize, &CoordinateChange)> {
        self.changes.iter().filter(|((p, q), _)| p != q).map(|(&(p, q), c)| (p, q, c))
    }

    pub fn footprints(&self) -> Result<Vec<BoxSet>> {
        self.charts.iter().map(KChart::footprint).collect()
    }

    /// Restriction by per-chart sets `u0` and per-pair sets `u0pq` (keyed like
    /// `changes`; missing off-diagonal keys keep the original domain
    /// intersected with `u0_q`). Diagonal changes become `(U0_p, id)`.
    pub fn restrict(&self, u0: &[BoxSet], u0pq: &BTreeMap<(usize, usize), BoxSet>) -> Result<Atlas> {
        if u0.len() != self.len() {
            return Err(Error::InvalidAtlas("restriction needs one set per chart".into()));
        }
        let charts = self.charts.iter().zip(u0).map(|(c, u)| c.restrict(u)).collect::<Result<Vec<_>>>()?;
        let mut changes = BTreeMap::new();
        for (&(p, q), ch) in &self.changes {
            let domain = if p == q {
                u0[p].clone()
            } else {
                match u0pq.get(&(p, q)) {
                    Some(d) => d.clone(),
                    None => ch.domain.intersection(&u0[q])?,
                }
            };
            changes.insert((p, q), CoordinateChange { domain, ..ch.clone() });
        }
        Ok(Atlas { ambient_dim: self.ambient_dim, x: self.x.clone(), z: self.z.clone(), charts, leq: self.leq.clone(), changes })
    }
}
