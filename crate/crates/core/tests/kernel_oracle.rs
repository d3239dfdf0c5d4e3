mod common;

use common::kernel::kernel_instance;
use common::{dyadic, grid_sample, in_box, int, line, probes, rat, rng, RawSet};
use goodcoord::map::{BoxAffineMap, Coord};
use goodcoord::BoxSet;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn random_instances_match_grid_oracle() {
    let mut checks = 0;
    for seed in 0..200 {
        checks += kernel_instance(seed).unwrap();
    }
    assert!(checks > 100_000);
}

#[test]
fn canonical_form_is_structural() {
    let a = line(&["(0,1)", "{1}", "(1,2]"]);
    assert_eq!(a, line(&["(0,2]"]));
    assert_eq!(a.closure(), line(&["[0,2]"]));
    assert_eq!(line(&["[0,1]"]).interior(), line(&["(0,1)"]));
    assert_eq!(line(&["(0,1)"]).missing_frontier(), line(&["{0}", "{1}"]));
}

fn random_map(r: &mut rand_chacha::ChaCha8Rng, src: usize, dst: usize) -> BoxAffineMap {
    let mut srcs: Vec<usize> = (0..src).collect();
    for i in (1..srcs.len()).rev() {
        srcs.swap(i, r.gen_range(0..=i));
    }
    let coefs = [int(1), int(-1), int(2), rat(1, 2), rat(-3, 2)];
    let outputs = (0..dst)
        .map(|i| match srcs.get(i) {
            Some(&s) => Coord::Affine { coef: coefs[r.gen_range(0..coefs.len())].clone(), src: s, offset: rat(r.gen_range(-4..=4), 4) },
            None => Coord::Const(rat(r.gen_range(-4..=4), 4)),
        })
        .collect();
    BoxAffineMap::new(src, outputs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn preimage_matches_pointwise_evaluation(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let src = r.gen_range(1..=2);
        let dst = r.gen_range(src..=3);
        let f = random_map(&mut r, src, dst);
        let target = common::random_raw(&mut r, dst, 3);
        let pre = f.preimage(&target.to_boxset()).unwrap();
        for x in grid_sample(&mut r, src, 4, 300, &[]) {
            prop_assert_eq!(pre.contains_point(&x), target.contains(&f.apply(&x)), "x = {:?}", x);
        }
    }

    #[test]
    fn image_is_covered_pointwise(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let src = r.gen_range(1..=2);
        let dst = r.gen_range(src..=3);
        let f = random_map(&mut r, src, dst);
        let domain: RawSet = common::random_raw(&mut r, src, 2);
        let img = f.image(&domain.to_boxset()).unwrap();
        for x in grid_sample(&mut r, src, 4, 200, &[]) {
            if domain.contains(&x) {
                prop_assert!(img.contains_point(&f.apply(&x)));
            }
        }
        // Every image point has a preimage in the domain.
        for y in grid_sample(&mut r, dst, 3, 200, &[]) {
            if img.contains_point(&y) {
                let pre = f.preimage_within(&BoxSet::point(&y), &domain.to_boxset()).unwrap();
                prop_assert!(!pre.is_empty());
            }
        }
    }

    #[test]
    fn interior_and_closure_are_dual(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=2);
        let a = common::random_raw(&mut r, dim, 3).to_boxset();
        prop_assert_eq!(a.interior(), a.complement().closure().complement());
        prop_assert!(a.interior().is_subset(&a).unwrap() && a.is_subset(&a.closure()).unwrap());
        let eps = dyadic(9);
        for x in grid_sample(&mut r, dim, 5, 200, &[]) {
            let inside = probes(&x, &eps).iter().all(|y| a.contains_point(y));
            prop_assert_eq!(a.interior().contains_point(&x), inside);
        }
        let _ = in_box;
    }
}
