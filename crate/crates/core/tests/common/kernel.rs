//! One random set-algebra instance checked against pointwise oracles.

use goodcoord::{BoxSet, Rational};
use rand::Rng;

use super::{dyadic, grid_sample, rat, rng, RawSet};

fn endpoints(sets: &[&RawSet], dim: usize) -> Vec<Vec<Rational>> {
    (0..dim)
        .map(|a| {
            let mut v: Vec<Rational> = sets
                .iter()
                .flat_map(|s| s.boxes.iter())
                .flat_map(|b| [b.sides()[a].lo().value().cloned(), b.sides()[a].hi().value().cloned()])
                .flatten()
                .collect();
            v.sort();
            v.dedup();
            v
        })
        .collect()
}

/// Checks union, intersection, difference, complement, closure, interior
/// and dilation of random sets at sampled grid points of spacing `2^-6`.
/// Returns the number of point checks.
pub fn kernel_instance(seed: u64) -> Result<usize, String> {
    let mut r = rng(seed);
    let dim = r.gen_range(1..=3);
    let a = super::random_raw(&mut r, dim, 3);
    let b = super::random_raw(&mut r, dim, 3);
    let c = super::random_raw(&mut r, dim, 2);
    let delta = rat(r.gen_range(1..=8), 8);
    let (ka, kb, kc) = (a.to_boxset(), b.to_boxset(), c.to_boxset());
    let fail = |op: &str, x: &[Rational]| format!("seed {seed}: {op} disagrees at {x:?}; A = {ka}, B = {kb}, C = {kc}, delta = {delta}");
    let union = ka.union(&kb).unwrap();
    let inter = ka.intersection(&kb).unwrap();
    let diff = ka.difference(&kb).unwrap();
    let comp = ka.complement();
    let clos = ka.closure();
    let int = ka.interior();
    let dil = ka.dilate_lt_delta(&delta, &kc).unwrap();
    let mut bps = endpoints(&[&a, &b, &c], dim);
    for (axis, v) in bps.iter_mut().enumerate() {
        let grown: Vec<Rational> = v.iter().flat_map(|e| [e - &delta, e + &delta]).collect();
        v.extend(grown);
        let _ = axis;
    }
    let eps = dyadic(10);
    let mut checks = 0;
    for x in grid_sample(&mut r, dim, 6, 300, &bps) {
        let (ia, ib) = (a.contains(&x), b.contains(&x));
        let expect = [
            ("union", union.contains_point(&x), ia || ib),
            ("intersection", inter.contains_point(&x), ia && ib),
            ("difference", diff.contains_point(&x), ia && !ib),
            ("complement", comp.contains_point(&x), !ia),
            ("closure", clos.contains_point(&x), a.in_closure(&x)),
            ("interior", int.contains_point(&x), a.all_probes_inside(&x, &eps)),
            ("dilate", dil.contains_point(&x), c.contains(&x) && a.distance(&x).is_some_and(|d| d < delta)),
        ];
        for (op, got, want) in expect {
            if got != want {
                return Err(fail(op, &x));
            }
            checks += 1;
        }
    }
    if (ka.is_subset(&kb).unwrap()) != (ka.difference(&kb).unwrap().is_empty()) {
        return Err(format!("seed {seed}: subset test disagrees with difference"));
    }
    let _: &BoxSet = &union;
    Ok(checks)
}
