//! JSON documents for atlases and JSON renderings of every report.
//!
//! Rationals are strings (`"3/4"`), intervals are literals (`"(0,1]"`,
//! `"{2}"`, `"(-inf,+inf)"`), a box is an array of interval literals and a
//! box set is an array of boxes. Order pairs `[q, p]` mean `q < p`.

use serde_json::{json, Map, Value};

use crate::atlas::{Atlas, CoordinateChange, KChart};
use crate::basis::{KPoint, MemberIndex, NbbReport};
use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::map::{BoxAffineMap, Coord};
use crate::quotient::{Analysis, Family, RelationModel, SeparationOutcome, SeparationWitness, TransitivityWitness};
use crate::rational::{parse_rational, Rational};
use crate::shrink::{ShrinkOutcome, StageRecord};
use crate::validate::{ValidationReport, Violation, Witness};

pub const SCHEMA: &str = "goodcoord/1";

/// A parsed atlas plus non-fatal remarks about the input.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub atlas: Atlas,
    pub warnings: Vec<String>,
}

struct Ctx {
    warnings: Vec<String>,
}

fn err(path: &str, msg: impl Into<String>) -> Error {
    Error::Document { path: if path.is_empty() { "$".into() } else { path.into() }, msg: msg.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing key `{key}`")))
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
}

impl Ctx {
    fn rational(&mut self, v: &Value, path: &str) -> Result<Rational> {
        let s = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => return Err(err(path, "expected a rational string")),
        };
        let (r, unreduced) = parse_rational(&s).map_err(|e| err(path, e.to_string()))?;
        if unreduced {
            self.warnings.push(format!("{path}: `{s}` reduced to {r}"));
        }
        Ok(r)
    }

    fn interval(&mut self, v: &Value, path: &str) -> Result<Interval> {
        let s = as_str(v, path)?;
        let iv = Interval::parse(s).map_err(|e| err(path, e.to_string()))?;
        if Interval::literal_unreduced(s) {
            self.warnings.push(format!("{path}: `{s}` reduced to {iv}"));
        }
        Ok(iv)
    }

    fn boxset(&mut self, v: &Value, dim: usize, path: &str) -> Result<BoxSet> {
        let mut boxes = Vec::new();
        for (i, b) in as_arr(v, path)?.iter().enumerate() {
            let bp = format!("{path}[{i}]");
            let sides = as_arr(b, &bp)?
                .iter()
                .enumerate()
                .map(|(j, s)| self.interval(s, &format!("{bp}[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            if sides.len() != dim {
                return Err(err(&bp, format!("box has {} sides, expected {dim}", sides.len())));
            }
            boxes.push(GBox::new(sides).map_err(|e| err(&bp, e.to_string()))?);
        }
        BoxSet::from_boxes(dim, boxes).map_err(|e| err(path, e.to_string()))
    }

    fn map(&mut self, v: &Value, path: &str) -> Result<BoxAffineMap> {
        let o = as_obj(v, path)?;
        let src_dim = as_usize(field(o, path, "src_dim")?, &format!("{path}.src_dim"))?;
        let dst_dim = as_usize(field(o, path, "dst_dim")?, &format!("{path}.dst_dim"))?;
        let outs = as_arr(field(o, path, "outputs")?, &format!("{path}.outputs"))?;
        if outs.len() != dst_dim {
            return Err(err(&format!("{path}.outputs"), format!("{} outputs, expected {dst_dim}", outs.len())));
        }
        let mut coords = Vec::new();
        for (i, c) in outs.iter().enumerate() {
            let cp = format!("{path}.outputs[{i}]");
            let co = as_obj(c, &cp)?;
            if let Some(k) = co.get("const") {
                coords.push(Coord::Const(self.rational(k, &format!("{cp}.const"))?));
            } else {
                coords.push(Coord::Affine {
                    coef: self.rational(field(co, &cp, "coef")?, &format!("{cp}.coef"))?,
                    src: as_usize(field(co, &cp, "src")?, &format!("{cp}.src"))?,
                    offset: match co.get("offset") {
                        Some(v) => self.rational(v, &format!("{cp}.offset"))?,
                        None => Rational::from_integer(0.into()),
                    },
                });
            }
        }
        BoxAffineMap::new(src_dim, coords).map_err(|e| err(path, e.to_string()))
    }
}

/// Parses a JSON document into an atlas.
pub fn parse_atlas(text: &str) -> Result<Parsed> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    parse_value(&doc)
}

pub fn parse_value(doc: &Value) -> Result<Parsed> {
    let mut cx = Ctx { warnings: Vec::new() };
    let root = as_obj(doc, "")?;
    match root.get("schema") {
        Some(Value::String(s)) if s == SCHEMA => {}
        Some(Value::String(s)) => return Err(err("schema", format!("unsupported schema `{s}`"))),
        Some(_) => return Err(err("schema", "expected a string")),
        None => cx.warnings.push(format!("schema: missing, assuming `{SCHEMA}`")),
    }
    let d = as_usize(field(root, "", "ambient_dim")?, "ambient_dim")?;
    let x = cx.boxset(field(root, "", "X")?, d, "X")?;
    let z = cx.boxset(field(root, "", "Z")?, d, "Z")?;
    let mut charts = Vec::new();
    let mut dims = std::collections::BTreeMap::new();
    for (i, c) in as_arr(field(root, "", "charts")?, "charts")?.iter().enumerate() {
        let cp = format!("charts[{i}]");
        let o = as_obj(c, &cp)?;
        let label = as_str(field(o, &cp, "label")?, &format!("{cp}.label"))?.to_string();
        let dim = as_usize(field(o, &cp, "dim")?, &format!("{cp}.dim"))?;
        let u = cx.boxset(field(o, &cp, "U")?, dim, &format!("{cp}.U"))?;
        let s = cx.boxset(field(o, &cp, "S")?, dim, &format!("{cp}.S"))?;
        let psi = cx.map(field(o, &cp, "psi")?, &format!("{cp}.psi"))?;
        dims.insert(label.clone(), dim);
        charts.push(KChart::new(label, u, s, psi));
    }
    let mut order = Vec::new();
    for (i, pr) in as_arr(root.get("order").unwrap_or(&json!([])), "order")?.iter().enumerate() {
        let pp = format!("order[{i}]");
        let a = as_arr(pr, &pp)?;
        if a.len() != 2 {
            return Err(err(&pp, "expected [q, p]"));
        }
        order.push((as_str(&a[0], &format!("{pp}[0]"))?.to_string(), as_str(&a[1], &format!("{pp}[1]"))?.to_string()));
    }
    let mut changes = Vec::new();
    for (i, c) in as_arr(root.get("changes").unwrap_or(&json!([])), "changes")?.iter().enumerate() {
        let cp = format!("changes[{i}]");
        let o = as_obj(c, &cp)?;
        let p = as_str(field(o, &cp, "p")?, &format!("{cp}.p"))?.to_string();
        let q = as_str(field(o, &cp, "q")?, &format!("{cp}.q"))?.to_string();
        let dq = *dims.get(&q).ok_or_else(|| err(&format!("{cp}.q"), format!("unknown chart label `{q}`")))?;
        if !dims.contains_key(&p) {
            return Err(err(&format!("{cp}.p"), format!("unknown chart label `{p}`")));
        }
        let domain = cx.boxset(field(o, &cp, "domain")?, dq, &format!("{cp}.domain"))?;
        let map = cx.map(field(o, &cp, "map")?, &format!("{cp}.map"))?;
        changes.push(CoordinateChange { p, q, domain, map });
    }
    let atlas = Atlas::new(d, x, z, charts, &order, changes).map_err(|e| err("", e.to_string()))?;
    Ok(Parsed { atlas, warnings: cx.warnings })
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn point_json(x: &[Rational]) -> Value {
    Value::Array(x.iter().map(rational_json).collect())
}

pub fn boxset_json(s: &BoxSet) -> Value {
    Value::Array(s.cells().iter().map(|b| Value::Array(b.sides().iter().map(|i| Value::String(i.to_string())).collect())).collect())
}

pub fn map_json(m: &BoxAffineMap) -> Value {
    let outputs: Vec<Value> = m
        .outputs()
        .iter()
        .map(|c| match c {
            Coord::Affine { coef, src, offset } => json!({"coef": rational_json(coef), "src": src, "offset": rational_json(offset)}),
            Coord::Const(k) => json!({"const": rational_json(k)}),
        })
        .collect();
    json!({"src_dim": m.src_dim(), "dst_dim": m.dst_dim(), "outputs": outputs})
}

/// The canonical document of an atlas.
pub fn atlas_json(a: &Atlas) -> Value {
    let charts: Vec<Value> = a
        .charts
        .iter()
        .map(|c| json!({"label": c.label, "dim": c.dim, "U": boxset_json(&c.u), "S": boxset_json(&c.s), "psi": map_json(&c.psi)}))
        .collect();
    let order: Vec<Value> = a.order_pairs().into_iter().map(|(q, p)| json!([a.label(q), a.label(p)])).collect();
    let changes: Vec<Value> = a
        .changes
        .values()
        .map(|c| json!({"p": c.p, "q": c.q, "domain": boxset_json(&c.domain), "map": map_json(&c.map)}))
        .collect();
    json!({
        "schema": SCHEMA,
        "ambient_dim": a.ambient_dim,
        "X": boxset_json(&a.x),
        "Z": boxset_json(&a.z),
        "charts": charts,
        "order": order,
        "changes": changes,
    })
}

pub fn serialize_atlas(a: &Atlas) -> String {
    to_text(&atlas_json(a))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Point(x) => json!({"point": point_json(x)}),
        Witness::Set(s) => json!({"set": boxset_json(s)}),
    }
}

fn violation_json(v: &Violation) -> Value {
    json!({"axiom": v.axiom, "labels": v.labels, "witness": witness_json(&v.witness), "detail": v.detail})
}

pub fn validation_json(r: &ValidationReport) -> Value {
    json!({"pass": r.pass(), "violations": r.violations.iter().map(violation_json).collect::<Vec<_>>()})
}

fn chart_point(rm: &RelationModel, c: usize, x: &[Rational]) -> Value {
    json!({"chart": rm.labels[c], "point": point_json(x)})
}

fn transitivity_json(rm: &RelationModel, w: &TransitivityWitness) -> Value {
    let [a, b, c] = w.charts;
    json!({
        "x": chart_point(rm, a, &w.x),
        "y": chart_point(rm, b, &w.y),
        "z": chart_point(rm, c, &w.z),
        "verified": w.verify(rm),
    })
}

fn separation_json(rm: &RelationModel, w: &SeparationWitness, depth: u32) -> Value {
    let g = &rm.saturated[w.gluing];
    json!({
        "boundary": chart_point(rm, w.boundary.0, &w.boundary.1),
        "image": chart_point(rm, w.image.0, &w.image.1),
        "gluing": {"from": rm.labels[g.from], "to": rm.labels[g.to], "map": g.map.to_string(), "domain": boxset_json(&g.domain)},
        "inner": point_json(&w.inner),
        "verified": w.verify(rm, depth),
    })
}

pub fn analysis_json(rm: &RelationModel, an: &Analysis) -> Value {
    let hausdorff = an.hausdorff.as_ref().map(|h| {
        json!({
            "pass": h.pass(),
            "witnesses": h.witnesses.iter().map(|w| separation_json(rm, w, h.falsifier_depth)).collect::<Vec<_>>(),
            "falsifier_depth": h.falsifier_depth,
            "falsifier_hits": h.falsifier_hits.iter().map(|(a, b)| json!([chart_point(rm, a.0, &a.1), chart_point(rm, b.0, &b.1)])).collect::<Vec<_>>(),
            "discrepancy": h.discrepancy(),
        })
    });
    json!({
        "transitivity": {
            "pass": an.transitivity.is_empty(),
            "witnesses": an.transitivity.iter().map(|w| transitivity_json(rm, w)).collect::<Vec<_>>(),
        },
        "hausdorff": hausdorff,
        "strong": an.strong(),
    })
}

pub fn family_json(rm: &RelationModel, f: &Family) -> Value {
    Value::Object(rm.labels.iter().zip(f).map(|(l, s)| (l.clone(), boxset_json(s))).collect())
}

pub fn separation_outcome_json(rm: &RelationModel, o: &SeparationOutcome) -> Value {
    match o {
        SeparationOutcome::Identified => json!({"outcome": "identified"}),
        SeparationOutcome::Separated(a, b) => json!({"outcome": "separated", "first": family_json(rm, a), "second": family_json(rm, b)}),
        SeparationOutcome::NotSeparated(w) => json!({"outcome": "not_separated", "witness": separation_json(rm, w, 10)}),
    }
}

fn stage_json(t: &StageRecord) -> Value {
    json!({
        "n": t.n,
        "delta": rational_json(&t.delta),
        "transitivity_witnesses": t.transitivity_witnesses,
        "separation_witnesses": t.separation_witnesses,
        "closure_transitivity_witnesses": t.closure_transitivity_witnesses,
        "closure_separation_witnesses": t.closure_separation_witnesses,
        "pair_closures_compact": t.pair_closures_compact,
        "domains_contained": t.domains_contained,
        "naive_not_relatively_compact": t.naive_not_relatively_compact,
        "strong": t.strong,
    })
}

pub fn shrink_json(a: &Atlas, out: &ShrinkOutcome) -> Result<Value> {
    let c = &out.certificate;
    let open_rm = RelationModel::from_atlas(out.atlas())?;
    let closure_rm = out.stage.closure_model()?;
    let pair = |m: &std::collections::BTreeMap<(usize, usize), BoxSet>| -> Value {
        Value::Array(m.iter().map(|(&(p, q), s)| json!({"p": a.label(p), "q": a.label(q), "set": boxset_json(s)})).collect())
    };
    Ok(json!({
        "delta0": rational_json(&out.delta0),
        "compacta": out.compacta.k.iter().map(boxset_json).collect::<Vec<_>>(),
        "certificate": {
            "n": c.n,
            "delta": rational_json(&c.delta),
            "open": analysis_json(&open_rm, &c.open),
            "closure": analysis_json(&closure_rm, &c.closure),
            "relations_agree": c.relations_agree,
            "pair_closures_compact": c.pair_closures_compact,
            "domains_contained": c.domains.holds(),
            "domain_excess": c.domains.pairs.iter().filter(|(_, s)| !s.is_empty()).map(|((p, q), s)| json!({"p": a.label(*p), "q": a.label(*q), "set": boxset_json(s)})).collect::<Vec<_>>(),
            "limits": validation_json(&c.limits),
            "closure_pair_domains": pair(&out.stage.cpq),
        },
        "trace": out.trace.iter().map(stage_json).collect::<Vec<_>>(),
        "atlas": atlas_json(out.atlas()),
    }))
}

fn index_json(i: &MemberIndex) -> Value {
    match i {
        None => Value::Null,
        Some(j) => Value::Array(j.iter().map(|v| Value::String(v.to_string())).collect()),
    }
}

pub fn kpoint_json(rm: &RelationModel, q: &KPoint) -> Value {
    chart_point(rm, q.chart, &q.x)
}

pub fn nbb_json(rm: &RelationModel, r: &NbbReport) -> Value {
    json!({
        "level": r.level,
        "representatives": r.representatives.iter().map(|q| kpoint_json(rm, q)).collect::<Vec<_>>(),
        "indices": r.indices.iter().map(|v| v.iter().map(|j| index_json(&Some(j.clone()))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "neighbourhoods": r.neighbourhoods.iter().map(|n| json!({
            "index": n.index.iter().map(index_json).collect::<Vec<_>>(),
            "k0": family_json(rm, &n.k0),
            "k0_closed": n.k0_closed,
            "q_outside_k0": n.q_outside_k0,
            "complement_inside_upper": n.complement_inside_upper,
            "q_in_open": n.q_in_open,
        })).collect::<Vec<_>>(),
        "neighbourhoods_hold": r.neighbourhoods_hold(),
        "refinements": r.refinements.iter().map(|o| o.as_ref().map(|ix| ix.iter().map(index_json).collect::<Vec<_>>())).collect::<Vec<_>>(),
        "unrefined": r.unrefined(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{builtin, generate, GenParams, BUILTINS};

    #[test]
    fn round_trip_builtins_and_generated() {
        for name in BUILTINS {
            let a = builtin(name).unwrap();
            let text = serialize_atlas(&a);
            let back = parse_atlas(&text).unwrap();
            assert!(back.warnings.is_empty());
            assert_eq!(back.atlas, a, "{name}");
            assert_eq!(serialize_atlas(&back.atlas), text);
        }
        for seed in 0..20 {
            let a = generate(seed, &GenParams::default());
            assert_eq!(parse_atlas(&serialize_atlas(&a)).unwrap().atlas, a);
        }
    }

    #[test]
    fn empty_atlas() {
        let p = parse_atlas(r#"{"schema":"goodcoord/1","ambient_dim":2,"X":[],"Z":[],"charts":[],"order":[],"changes":[]}"#).unwrap();
        assert!(p.atlas.is_empty() && p.atlas.z.is_empty());
        assert!(crate::validate::validate_weak_gcs(&p.atlas).pass());
    }

    #[test]
    fn errors_and_warnings() {
        let base = atlas_json(&builtin("example-2-7").unwrap());
        let mut bad = base.clone();
        bad["charts"][1]["U"][0][0] = json!("(0,");
        match parse_value(&bad) {
            Err(Error::Document { path, .. }) => assert_eq!(path, "charts[1].U[0][0]"),
            other => panic!("{other:?}"),
        }
        let mut unreduced = base.clone();
        unreduced["changes"][1]["domain"][0][0] = json!("(-2/2,1)");
        let p = parse_value(&unreduced).unwrap();
        assert_eq!(p.atlas, builtin("example-2-7").unwrap());
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].starts_with("changes[1].domain[0][0]"));
        match parse_atlas("{\"schema\": ") {
            Err(Error::Document { path, .. }) => assert!(path.starts_with("line 1")),
            other => panic!("{other:?}"),
        }
        let mut wrong_dim = base;
        wrong_dim["X"] = json!([["{0}", "{0}"]]);
        assert!(matches!(parse_value(&wrong_dim), Err(Error::Document { .. })));
    }
}
