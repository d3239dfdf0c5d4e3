//! Brute-force oracles shared by the integration tests.
//!
//! Raw box lists are evaluated pointwise without touching the kernel's
//! canonical form, and relations are evaluated from raw atlas data.

#![allow(dead_code)]

use goodcoord::atlas::Atlas;
use goodcoord::{BoxSet, GBox, Interval, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn iv(s: &str) -> Interval {
    Interval::parse(s).unwrap()
}

pub fn set(dim: usize, boxes: &[&[&str]]) -> BoxSet {
    BoxSet::from_boxes(dim, boxes.iter().map(|b| GBox::new(b.iter().map(|s| iv(s)).collect()).unwrap())).unwrap()
}

pub fn line(parts: &[&str]) -> BoxSet {
    BoxSet::from_boxes(1, parts.iter().map(|p| GBox::new(vec![iv(p)]).unwrap())).unwrap()
}

/// A union of boxes kept as given.
#[derive(Clone, Debug)]
pub struct RawSet {
    pub dim: usize,
    pub boxes: Vec<GBox>,
}

impl RawSet {
    pub fn to_boxset(&self) -> BoxSet {
        BoxSet::from_boxes(self.dim, self.boxes.clone()).unwrap()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.boxes.iter().any(|b| in_box(b, x))
    }

    /// Closure of a finite union is the union of the box closures.
    pub fn in_closure(&self, x: &[Rational]) -> bool {
        self.boxes.iter().any(|b| b.sides().iter().zip(x).all(|(s, v)| in_closed_side(s, v)))
    }

    /// Whether every point `x + eps * s`, `s in {-1,0,1}^d`, lies in the set.
    /// For `eps` below the distance from `x` to every other breakpoint this
    /// decides `x in interior`.
    pub fn all_probes_inside(&self, x: &[Rational], eps: &Rational) -> bool {
        let shifted: Vec<[Rational; 3]> = x.iter().map(|v| [v - eps, v.clone(), v + eps]).collect();
        let flags: Vec<Vec<[bool; 3]>> = self
            .boxes
            .iter()
            .map(|b| b.sides().iter().zip(&shifted).map(|(s, vs)| [in_side(s, &vs[0]), in_side(s, &vs[1]), in_side(s, &vs[2])]).collect())
            .collect();
        sign_vectors(x.len()).iter().all(|sv| flags.iter().any(|f| f.iter().zip(sv).all(|(fl, k)| fl[(k + 1) as usize])))
    }

    /// L-infinity distance to the closure, `None` when empty.
    pub fn distance(&self, x: &[Rational]) -> Option<Rational> {
        self.boxes.iter().map(|b| b.sides().iter().zip(x).map(|(s, v)| side_distance(s, v)).max().unwrap_or_else(Rational::zero)).min()
    }
}

pub fn in_side(s: &Interval, v: &Rational) -> bool {
    use goodcoord::Bound;
    let lo = match s.lo() {
        Bound::Unbounded => true,
        Bound::Open(a) => v > a,
        Bound::Closed(a) => v >= a,
    };
    let hi = match s.hi() {
        Bound::Unbounded => true,
        Bound::Open(b) => v < b,
        Bound::Closed(b) => v <= b,
    };
    lo && hi
}

fn in_closed_side(s: &Interval, v: &Rational) -> bool {
    s.lo().value().is_none_or(|a| v >= a) && s.hi().value().is_none_or(|b| v <= b)
}

fn side_distance(s: &Interval, v: &Rational) -> Rational {
    if let Some(a) = s.lo().value() {
        if v < a {
            return a - v;
        }
    }
    if let Some(b) = s.hi().value() {
        if v > b {
            return v - b;
        }
    }
    Rational::zero()
}

pub fn in_box(b: &GBox, x: &[Rational]) -> bool {
    b.sides().iter().zip(x).all(|(s, v)| in_side(s, v))
}

/// Signs `{-1, 0, 1}^d`.
pub fn sign_vectors(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p: Vec<i64>| [-1, 0, 1].into_iter().map(move |s| [p.clone(), vec![s]].concat())).collect();
    }
    out
}

/// Points `x + eps * s` for every sign vector `s`.
pub fn probes(x: &[Rational], eps: &Rational) -> Vec<Vec<Rational>> {
    sign_vectors(x.len()).into_iter().map(|s| x.iter().zip(&s).map(|(v, k)| v + eps * int(*k)).collect()).collect()
}

/// Random side with endpoints on the grid `2^-3 Z` inside `[-2, 2]`.
pub fn random_side(rng: &mut ChaCha8Rng) -> Interval {
    let a = rat(rng.gen_range(-16..=15), 8);
    match rng.gen_range(0..10) {
        0 => Interval::point(a),
        1 => Interval::line(),
        2 => Interval::new(goodcoord::Bound::Unbounded, goodcoord::Bound::Open(a)).unwrap(),
        _ => {
            let b = &a + rat(rng.gen_range(1..=12), 8);
            let lo = if rng.gen_bool(0.5) { goodcoord::Bound::Open(a) } else { goodcoord::Bound::Closed(a) };
            let hi = if rng.gen_bool(0.5) { goodcoord::Bound::Open(b) } else { goodcoord::Bound::Closed(b) };
            Interval::new(lo, hi).unwrap()
        }
    }
}

pub fn random_raw(rng: &mut ChaCha8Rng, dim: usize, max_boxes: usize) -> RawSet {
    let n = rng.gen_range(0..=max_boxes);
    RawSet { dim, boxes: (0..n).map(|_| GBox::new((0..dim).map(|_| random_side(rng)).collect()).unwrap()).collect() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sample points on the grid `2^-level Z^d` in `[-3, 3]^d`: the whole grid
/// in dimension one, otherwise `count` random grid points plus every
/// combination of grid values adjacent to the given breakpoints.
pub fn grid_sample(rng: &mut ChaCha8Rng, dim: usize, level: u32, count: usize, breakpoints: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let h = dyadic(level);
    let n = 3i64 << level;
    if dim == 1 {
        return (-n..=n).map(|k| vec![int(k) * &h]).collect();
    }
    let mut out: Vec<Vec<Rational>> = (0..count).map(|_| (0..dim).map(|_| int(rng.gen_range(-n..=n)) * &h).collect()).collect();
    let near: Vec<Vec<Rational>> = (0..dim)
        .map(|a| {
            let mut v: Vec<Rational> = breakpoints.get(a).into_iter().flatten().flat_map(|b| [b - &h, b.clone(), b + &h]).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    const CAP: usize = 512;
    let total = near.iter().try_fold(1usize, |acc, v| acc.checked_mul(v.len()).filter(|n| *n <= CAP));
    let combos: Vec<Vec<Rational>> = match total {
        Some(_) => {
            let mut combos = vec![Vec::new()];
            for axis in &near {
                combos = combos.into_iter().flat_map(|p: Vec<Rational>| axis.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
            }
            combos
        }
        None => (0..CAP).map(|_| near.iter().map(|v| v[rng.gen_range(0..v.len())].clone()).collect()).collect(),
    };
    out.extend(combos.into_iter().filter(|c: &Vec<Rational>| c.len() == dim));
    out
}

/// `x ~ z` by a single coordinate change of the raw atlas, or equality.
pub fn related_direct(a: &Atlas, p: usize, x: &[Rational], q: usize, z: &[Rational]) -> bool {
    if p == q && x == z {
        return true;
    }
    if let Some(ch) = a.change(q, p) {
        if ch.domain.cells().iter().any(|c| in_box(c, x)) && ch.map.apply(x) == z {
            return true;
        }
    }
    if let Some(ch) = a.change(p, q) {
        if ch.domain.cells().iter().any(|c| in_box(c, z)) && ch.map.apply(z) == x {
            return true;
        }
    }
    false
}

/// Direct neighbours of `(p, x)` under the raw coordinate changes.
pub fn direct_orbit(a: &Atlas, p: usize, x: &[Rational]) -> Vec<(usize, Vec<Rational>)> {
    let mut out = vec![(p, x.to_vec())];
    for (&(r, s), ch) in &a.changes {
        if r == s {
            continue;
        }
        if s == p && ch.domain.cells().iter().any(|c| in_box(c, x)) {
            out.push((r, ch.map.apply(x)));
        }
        if r == p {
            let image = ch.map.image(&ch.domain).unwrap();
            if image.contains_point(x) {
                let inv = ch.map.left_inverse().unwrap();
                let y = inv.apply(x);
                if ch.map.apply(&y) == x && ch.domain.contains_point(&y) {
                    out.push((s, y));
                }
            }
        }
    }
    out
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub mod kernel;

/// Grid points of spacing `2^-level` in the closure of a cell, plus points
/// snapped to its faces.
pub fn cell_sample(rng: &mut ChaCha8Rng, cell: &GBox, level: u32, count: usize) -> Vec<Vec<Rational>> {
    let h = dyadic(level);
    let mut out = Vec::new();
    for i in 0..count {
        let snap_any = i % 2 == 0;
        let mut x = Vec::new();
        for s in cell.sides() {
            let (lo, hi) = match (s.lo().value(), s.hi().value()) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                (Some(a), None) => (a.clone(), a + int(2)),
                (None, Some(b)) => (b - int(2), b.clone()),
                (None, None) => (int(-2), int(2)),
            };
            let v = match rng.gen_range(0..4) {
                0 if snap_any => lo.clone(),
                1 if snap_any => hi.clone(),
                _ => {
                    let k0 = (&lo / &h).ceil().to_integer();
                    let k1 = (&hi / &h).floor().to_integer();
                    if k1 < k0 {
                        lo.clone()
                    } else {
                        let span: i64 = (&k1 - &k0).try_into().unwrap_or(i64::MAX);
                        let off = rng.gen_range(0..=span.min(1 << 20));
                        Rational::from_integer(k0 + off) * &h
                    }
                }
            };
            x.push(v);
        }
        out.push(x);
    }
    out
}

/// Pointwise search for failures of transitivity and of the Hausdorff
/// property of the relation generated by the raw coordinate changes.
/// Returns one description per discrepancy found.
pub fn relation_oracle(a: &Atlas, seed: u64, level: u32) -> Vec<String> {
    let mut r = rng(seed);
    let mut bad = Vec::new();
    let mut samples: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (p, c) in a.charts.iter().enumerate() {
        for cell in c.u.cells() {
            samples.extend(cell_sample(&mut r, &cell, level, 24).into_iter().map(|x| (p, x)));
        }
    }
    for ch in a.changes.values() {
        let q = a.index(&ch.q).unwrap();
        for cell in ch.domain.cells() {
            samples.extend(cell_sample(&mut r, &cell, level, 24).into_iter().map(|x| (q, x)));
        }
    }
    for (p, x) in &samples {
        if !a.charts[*p].u.cells().iter().any(|c| in_box(c, x)) {
            continue;
        }
        let orbit = direct_orbit(a, *p, x);
        for (i, (q, y)) in orbit.iter().enumerate() {
            for (s, z) in &orbit[i + 1..] {
                if !related_direct(a, *q, y, *s, z) {
                    bad.push(format!("transitivity: {} {:?} ~ {} {:?} ~ {} {:?}", a.label(*p), x, a.label(*q), y, a.label(*s), z));
                }
            }
        }
    }
    for (&(pr, ps), ch) in &a.changes {
        if pr == ps {
            continue;
        }
        for cell in ch.domain.cells() {
            for x in cell_sample(&mut r, &cell, level, 32) {
                let in_domain = ch.domain.cells().iter().any(|c| in_box(c, &x));
                let in_closure = ch.domain.cells().iter().any(|c| c.sides().iter().zip(&x).all(|(s, v)| in_closed_side(s, v)));
                let in_source = a.charts[ps].u.cells().iter().any(|c| in_box(c, &x));
                if in_closure && !in_domain && in_source {
                    let y = ch.map.apply(&x);
                    if a.charts[pr].u.cells().iter().any(|c| in_box(c, &y)) {
                        bad.push(format!("separation: {} {:?} and {} {:?}", a.label(ps), x, a.label(pr), y));
                    }
                }
            }
        }
    }
    bad
}
