//! Seeded random weak good coordinate systems.
//!
//! Instances are valid by construction. Chart `p` sees the coordinates
//! `A_p` of the ambient space, with `A_q ⊆ A_p` whenever `q <= p`, and
//! `psi_p` is a signed scaled permutation onto those coordinates (the rest
//! are the constant 0). Every coordinate change is `psi_p^{-1} ∘ psi_q`, so
//! the cocycle identity holds everywhere. `X` is a closed union of boxes,
//! each lying in a coordinate flat, and footprints are `X ∩ O_p` for open
//! sets `O_p` trimmed so that incomparable footprints are disjoint and each
//! footprint stays inside its chart's flat.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atlas::{Atlas, CoordinateChange, KChart};
use crate::boxset::BoxSet;
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::map::{BoxAffineMap, Coord};
use crate::rational::{int, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_ambient_dim: usize,
    pub max_charts: usize,
    pub max_cells: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_ambient_dim: 3, max_charts: 5, max_cells: 6 }
    }
}

/// A reproducible instance for `seed`.
pub fn generate(seed: u64, params: &GenParams) -> Atlas {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(a) = attempt(&mut rng, params) {
            return a;
        }
    }
}

fn half_grid(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    rat(rng.gen_range(2 * lo..=2 * hi), 2)
}

fn closed_side(rng: &mut ChaCha8Rng) -> Interval {
    let a = half_grid(rng, -3, 2);
    if rng.gen_bool(0.15) {
        return Interval::point(a);
    }
    let b = &a + rat(rng.gen_range(1..=4), 2);
    Interval::closed(a, b).unwrap()
}

fn open_side(rng: &mut ChaCha8Rng) -> Interval {
    if rng.gen_bool(0.2) {
        return Interval::line();
    }
    let a = half_grid(rng, -4, 2);
    let b = &a + rat(rng.gen_range(2..=6), 2);
    Interval::open(a, b).unwrap()
}

fn random_subset(rng: &mut ChaCha8Rng, d: usize) -> Vec<bool> {
    (0..d).map(|_| rng.gen_bool(0.6)).collect()
}

/// `psi` sending chart coordinates onto the active ambient coordinates.
fn random_psi(rng: &mut ChaCha8Rng, active: &[bool]) -> BoxAffineMap {
    let idx: Vec<usize> = (0..active.len()).filter(|&i| active[i]).collect();
    let mut perm: Vec<usize> = (0..idx.len()).collect();
    perm.shuffle(rng);
    let coefs = [int(1), int(-1), int(2), rat(1, 2)];
    let offsets = [int(0), int(0), int(1), int(-1), rat(1, 2)];
    let mut outputs = vec![Coord::Const(int(0)); active.len()];
    for (k, &i) in idx.iter().enumerate() {
        outputs[i] = Coord::Affine {
            coef: coefs.choose(rng).unwrap().clone(),
            src: perm[k],
            offset: offsets.choose(rng).unwrap().clone(),
        };
    }
    BoxAffineMap::new(idx.len(), outputs).unwrap()
}

/// The flat `{x_i = 0 : i inactive}`.
fn flat(active: &[bool]) -> BoxSet {
    let sides = active.iter().map(|&a| if a { Interval::line() } else { Interval::point(int(0)) }).collect();
    BoxSet::from_box(GBox::new(sides).unwrap())
}

/// A nonempty compact subset of `f` (one closed sub-box of one cell).
fn compact_piece(rng: &mut ChaCha8Rng, f: &BoxSet) -> Option<BoxSet> {
    let cells = f.cells();
    let cell = cells.choose(rng)?;
    let sides = cell
        .sides()
        .iter()
        .map(|s| {
            if s.is_point() {
                s.clone()
            } else {
                let (u, v) = (s.sample(), s.sample_alt());
                if u < v { Interval::closed(u, v) } else { Interval::closed(v, u) }.unwrap()
            }
        })
        .collect();
    Some(BoxSet::from_box(GBox::new(sides).unwrap()))
}

fn attempt(rng: &mut ChaCha8Rng, params: &GenParams) -> Option<Atlas> {
    let d = rng.gen_range(1..=params.max_ambient_dim.max(1));
    let n = rng.gen_range(1..=params.max_charts.max(1));
    let ok = |s: &BoxSet| s.cells().len() <= params.max_cells;

    // X: closed boxes, each inside a coordinate flat.
    let mut x_boxes: Vec<BoxSet> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let active = random_subset(rng, d);
        let sides = active.iter().map(|&a| if a { closed_side(rng) } else { Interval::point(int(0)) }).collect();
        x_boxes.push(BoxSet::from_box(GBox::new(sides).unwrap()));
    }
    let x = x_boxes.iter().try_fold(BoxSet::empty(d), |acc, b| acc.union(b)).ok()?;
    if !ok(&x) {
        return None;
    }

    // Order: a random relation compatible with index order, closed transitively.
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = rng.gen_bool(0.5);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }

    let mut actives: Vec<Vec<bool>> = Vec::new();
    let mut psis = Vec::new();
    let mut feet: Vec<BoxSet> = Vec::new();
    let mut charts = Vec::new();
    for p in 0..n {
        let mut active = random_subset(rng, d);
        for q in 0..p {
            if leq[q][p] {
                for i in 0..d {
                    active[i] |= actives[q][i];
                }
            }
        }
        if !active.iter().any(|&a| a) {
            active[rng.gen_range(0..d)] = true;
        }
        let psi = random_psi(rng, &active);
        let h = flat(&active);

        let mut o = BoxSet::empty(d);
        for _ in 0..rng.gen_range(1..=2) {
            let b = GBox::new((0..d).map(|_| open_side(rng)).collect()).unwrap();
            o = o.union(&BoxSet::from_box(b)).ok()?;
        }
        for b in &x_boxes {
            if !b.is_subset(&h).ok()? {
                o = o.difference(b).ok()?;
            }
        }
        for q in 0..p {
            if !leq[q][p] {
                o = o.difference(&feet[q].closure()).ok()?;
            }
        }
        let f = x.intersection(&o).ok()?;
        let r_p = if rng.gen_bool(0.35) { BoxSet::full(d) } else { o.dilate_lt_delta(&rat(1, 2), &BoxSet::full(d)).ok()? };
        let u = psi.preimage(&r_p).ok()?.difference(&psi.preimage(&x.difference(&f).ok()?).ok()?).ok()?;
        let s = psi.preimage(&f).ok()?;
        if u.is_empty() || !ok(&u) || !ok(&s) {
            return None;
        }
        charts.push(KChart::new(format!("c{p}"), u, s, psi.clone()));
        actives.push(active);
        psis.push(psi);
        feet.push(f);
    }

    let mut z = BoxSet::empty(d);
    for f in &feet {
        if rng.gen_bool(0.7) {
            if let Some(piece) = compact_piece(rng, f) {
                z = z.union(&piece).ok()?;
            }
        }
    }
    if !ok(&z) {
        return None;
    }

    let mut changes: Vec<CoordinateChange> = charts
        .iter()
        .map(|c| CoordinateChange { p: c.label.clone(), q: c.label.clone(), domain: c.u.clone(), map: BoxAffineMap::identity(c.dim) })
        .collect();
    let mut order = Vec::new();
    for q in 0..n {
        for p in 0..n {
            if q == p || !leq[q][p] {
                continue;
            }
            order.push((charts[q].label.clone(), charts[p].label.clone()));
            let phi = psis[p].left_inverse().ok()?.compose(&psis[q]).ok()?;
            let overlap = feet[p].intersection(&feet[q]).ok()?;
            let o_pq = if rng.gen_bool(0.3) {
                BoxSet::full(d)
            } else {
                let r = if rng.gen_bool(0.5) { rat(1, 2) } else { int(1) };
                let mut o = overlap.dilate_lt_delta(&r, &BoxSet::full(d)).ok()?;
                if rng.gen_bool(0.5) {
                    o = o.union(&BoxSet::from_box(GBox::new((0..d).map(|_| open_side(rng)).collect()).unwrap())).ok()?;
                }
                o
            };
            let domain = charts[q]
                .u
                .intersection(&phi.preimage(&charts[p].u).ok()?)
                .ok()?
                .intersection(&psis[q].preimage(&o_pq).ok()?)
                .ok()?;
            if !ok(&domain) {
                return None;
            }
            changes.push(CoordinateChange { p: charts[p].label.clone(), q: charts[q].label.clone(), domain, map: phi });
        }
    }
    Atlas::new(d, x, z, charts, &order, changes).ok()
}
