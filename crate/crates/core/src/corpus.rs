//! Builtin instances and the seeded random generator of weak systems.

use crate::atlas::{Atlas, CoordinateChange, KChart};
use crate::boxset::BoxSet;
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::map::BoxAffineMap;
use crate::rational::int;

pub use crate::generate::{generate, GenParams};

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["example-2-7", "transitivity-gap", "naive-domain", "single-chart", "disjoint-charts", "missing-diagonal"];

pub fn builtin(name: &str) -> Option<Atlas> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    let stem = stem.rsplit('/').next().unwrap_or(stem);
    match stem {
        "example-2-7" => Some(glued_lines()),
        "transitivity-gap" => Some(transitivity_gap()),
        "naive-domain" => Some(naive_domain()),
        "single-chart" => Some(single_chart()),
        "disjoint-charts" => Some(disjoint_charts()),
        "missing-diagonal" => Some(missing_diagonal()),
        _ => None,
    }
}

/// A union of intervals on the line, from literals such as `"(0,1]"`.
pub fn line_set(parts: &[&str]) -> BoxSet {
    BoxSet::from_boxes(
        1,
        parts.iter().map(|p| GBox::new(vec![Interval::parse(p).expect("builtin literal")]).unwrap()),
    )
    .unwrap()
}

fn id_change(c: &KChart) -> CoordinateChange {
    CoordinateChange { p: c.label.clone(), q: c.label.clone(), domain: c.u.clone(), map: BoxAffineMap::identity(c.dim) }
}

fn change(p: &str, q: &str, domain: BoxSet, map: BoxAffineMap) -> CoordinateChange {
    CoordinateChange { p: p.into(), q: q.into(), domain, map }
}

fn assemble(x: BoxSet, z: BoxSet, charts: Vec<KChart>, order: &[(&str, &str)], changes: Vec<CoordinateChange>) -> Atlas {
    let mut all: Vec<CoordinateChange> = charts.iter().map(id_change).collect();
    all.extend(changes);
    let order: Vec<(String, String)> = order.iter().map(|(q, p)| (q.to_string(), p.to_string())).collect();
    Atlas::new(x.dim(), x, z, charts, &order, all).expect("builtin atlas is well formed")
}

const R: &str = "(-inf,+inf)";

/// Two copies of the line glued along `(-1,1)`: weak, transitive, not Hausdorff.
pub fn glued_lines() -> Atlas {
    let c = |l: &str| KChart::new(l, line_set(&[R]), line_set(&["{0}"]), BoxAffineMap::identity(1));
    assemble(
        line_set(&["{0}"]),
        line_set(&["{0}"]),
        vec![c("1"), c("2")],
        &[("1", "2")],
        vec![change("2", "1", line_set(&["(-1,1)"]), BoxAffineMap::identity(1))],
    )
}

/// Three lines `1 < 2 < 3` where `U_32` is too small for transitivity.
pub fn transitivity_gap() -> Atlas {
    let c = |l: &str| KChart::new(l, line_set(&[R]), line_set(&["{0}"]), BoxAffineMap::identity(1));
    let id = BoxAffineMap::identity(1);
    assemble(
        line_set(&["{0}"]),
        line_set(&["{0}"]),
        vec![c("1"), c("2"), c("3")],
        &[("1", "2"), ("1", "3"), ("2", "3")],
        vec![
            change("2", "1", line_set(&[R]), id.clone()),
            change("3", "1", line_set(&[R]), id.clone()),
            change("3", "2", line_set(&["(-1/2,1/2)"]), id),
        ],
    )
}

/// `q < p` with footprints `{0,1}` and `{0,2}` meeting only at 0, and
/// `U_pq = (-1/2,1)`. Near 1 the naive pair domain runs into the edge of
/// `U_pq`.
pub fn naive_domain() -> Atlas {
    let s = line_set(&["{0}", "{1}"]);
    let q = KChart::new("q", line_set(&[R]), s.clone(), BoxAffineMap::identity(1));
    let p = KChart::new("p", line_set(&[R]), s, BoxAffineMap::line(int(2), int(0)).unwrap());
    let x = line_set(&["{0}", "{1}", "{2}"]);
    assemble(
        x.clone(),
        x,
        vec![q, p],
        &[("q", "p")],
        vec![change("p", "q", line_set(&["(-1/2,1)"]), BoxAffineMap::identity(1))],
    )
}

pub fn single_chart() -> Atlas {
    let k = line_set(&["[0,1]"]);
    assemble(k.clone(), k.clone(), vec![KChart::new("1", line_set(&[R]), k, BoxAffineMap::identity(1))], &[], vec![])
}

/// Two incomparable charts with disjoint footprints `[0,1]` and `[2,3]`.
pub fn disjoint_charts() -> Atlas {
    let a = line_set(&["[0,1]"]);
    let b = line_set(&["[2,3]"]);
    let x = line_set(&["[0,1]", "[2,3]"]);
    assemble(
        x.clone(),
        x,
        vec![
            KChart::new("a", line_set(&[R]), a, BoxAffineMap::identity(1)),
            KChart::new("b", line_set(&[R]), b, BoxAffineMap::identity(1)),
        ],
        &[],
        vec![],
    )
}

/// The glued lines without `Phi_11`.
pub fn missing_diagonal() -> Atlas {
    let mut a = glued_lines();
    a.changes.remove(&(0, 0));
    a
}
