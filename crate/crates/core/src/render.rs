//! SVG 1.1 pictures of charts, footprints, pair domains and witnesses.
//!
//! One panel per chart. Charts of dimension one are drawn as stacked bars
//! (chart space, `S`, then one row per pair domain leaving the chart);
//! higher-dimensional charts are projected onto two chosen axes.

use std::fmt::Write;

use crate::atlas::Atlas;
use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::gbox::GBox;
use crate::interval::Interval;
use crate::quotient::{Analysis, RelationModel};
use crate::rational::{to_f64, Rational};

const PANEL_W: f64 = 480.0;
const MARGIN: f64 = 40.0;
const ROW_H: f64 = 18.0;
const PLANE_H: f64 = 240.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    /// Axes projected onto for charts of dimension three and more.
    pub axes: (usize, usize),
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { axes: (0, 1) }
    }
}

/// Marks drawn on top of a chart panel.
#[derive(Clone, Debug, Default)]
struct Marks {
    points: Vec<(Vec<Rational>, &'static str, String)>,
}

fn finite_range(sets: &[&BoxSet], axis: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in sets {
        for c in s.cells() {
            let side = &c.sides()[axis];
            for v in [side.lo().value(), side.hi().value()].into_iter().flatten() {
                lo = lo.min(to_f64(v));
                hi = hi.max(to_f64(v));
            }
        }
    }
    if lo > hi {
        return (-1.0, 1.0);
    }
    let pad = ((hi - lo) * 0.25).max(1.0);
    (lo - pad, hi + pad)
}

fn side_range(s: &Interval, window: (f64, f64)) -> (f64, f64) {
    let lo = s.lo().value().map_or(window.0, |v| to_f64(v).max(window.0));
    let hi = s.hi().value().map_or(window.1, |v| to_f64(v).min(window.1));
    (lo, hi)
}

struct Frame {
    x0: f64,
    y0: f64,
    wx: (f64, f64),
    wy: (f64, f64),
    h: f64,
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.x0 + (v - self.wx.0) / (self.wx.1 - self.wx.0) * PANEL_W
    }

    fn py(&self, v: f64) -> f64 {
        self.y0 + self.h - (v - self.wy.0) / (self.wy.1 - self.wy.0) * self.h
    }
}

fn bar(svg: &mut String, f: &Frame, c: &GBox, y: f64, color: &str) {
    let (a, b) = side_range(&c.sides()[0], f.wx);
    if c.sides()[0].is_point() {
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, f.px(a), y + ROW_H / 2.0);
    } else {
        let _ = writeln!(svg, r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.6"/>"#, f.px(a), y + 3.0, (f.px(b) - f.px(a)).max(0.5), ROW_H - 6.0);
    }
}

fn plane_cell(svg: &mut String, f: &Frame, c: &GBox, axes: (usize, usize), color: &str) {
    let (sx, sy) = (&c.sides()[axes.0], &c.sides()[axes.1]);
    let (a, b) = side_range(sx, f.wx);
    let (lo, hi) = side_range(sy, f.wy);
    match (sx.is_point(), sy.is_point()) {
        (true, true) => {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, f.px(a), f.py(lo));
        }
        (true, false) | (false, true) => {
            let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#, f.px(a), f.py(lo), f.px(b), f.py(hi));
        }
        (false, false) => {
            let _ = writeln!(svg, r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.35"/>"#, f.px(a), f.py(hi), f.px(b) - f.px(a), f.py(lo) - f.py(hi));
        }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const PALETTE: [&str; 6] = ["#4477aa", "#228833", "#ccbb44", "#aa3377", "#66ccee", "#ee6677"];

/// Renders an atlas, optionally with the witnesses of an analysis.
pub fn render_svg(a: &Atlas, analysis: Option<(&RelationModel, &Analysis)>, opts: &RenderOptions) -> Result<String> {
    let mut marks: Vec<Marks> = vec![Marks::default(); a.len()];
    if let Some((rm, an)) = analysis {
        for w in &an.transitivity {
            for (c, x, tag) in [(w.charts[0], &w.x, "x"), (w.charts[1], &w.y, "y"), (w.charts[2], &w.z, "z")] {
                marks[c].points.push((x.clone(), "#cc3311", format!("transitivity {tag}")));
            }
        }
        for w in an.hausdorff.iter().flat_map(|h| &h.witnesses) {
            let other = &rm.labels[w.image.0];
            marks[w.boundary.0].points.push((w.boundary.1.clone(), "#cc3311", format!("not separated from {other}")));
            let back = &rm.labels[w.boundary.0];
            marks[w.image.0].points.push((w.image.1.clone(), "#cc3311", format!("not separated from {back}")));
        }
    }
    let mut body = String::new();
    let mut y = MARGIN;
    for (q, c) in a.charts.iter().enumerate() {
        if c.dim >= 3 && (opts.axes.0 >= c.dim || opts.axes.1 >= c.dim || opts.axes.0 == opts.axes.1) {
            return Err(Error::InvalidAtlas(format!("axes {:?} do not fit chart `{}` of dimension {}", opts.axes, c.label, c.dim)));
        }
        let out: Vec<(usize, &BoxSet)> = a.strict_changes().filter(|(_, qq, _)| *qq == q).map(|(p, _, ch)| (p, &ch.domain)).collect();
        let mut sets = vec![&c.u, &c.s];
        sets.extend(out.iter().map(|(_, d)| *d));
        let _ = writeln!(body, r#"<text x="{MARGIN}" y="{:.2}" font-size="13" font-family="monospace">chart {} (dim {})</text>"#, y - 6.0, esc(&c.label), c.dim);
        if c.dim == 1 {
            let rows = 2 + out.len();
            let f = Frame { x0: MARGIN, y0: y, wx: finite_range(&sets, 0), wy: (0.0, 1.0), h: rows as f64 * ROW_H };
            let labels = ["U".to_string(), "S".to_string()].into_iter().chain(out.iter().map(|(p, _)| format!("U_{},{}", a.label(*p), c.label)));
            let rowsets = [&c.u, &c.s].into_iter().chain(out.iter().map(|(_, d)| *d));
            for (i, (set, label)) in rowsets.zip(labels).enumerate() {
                let ry = y + i as f64 * ROW_H;
                for cell in set.cells() {
                    bar(&mut body, &f, &cell, ry, PALETTE[i % PALETTE.len()]);
                }
                let _ = writeln!(body, r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="monospace">{}</text>"#, MARGIN + PANEL_W + 8.0, ry + ROW_H - 5.0, esc(&label));
            }
            for (x, color, label) in &marks[q].points {
                let px = f.px(to_f64(&x[0]));
                let _ = writeln!(body, r#"<line x1="{px:.2}" y1="{y:.2}" x2="{px:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"><title>{}</title></line>"#, y + f.h, esc(label));
            }
            y += f.h + MARGIN;
        } else {
            let axes = if c.dim == 2 { (0, 1) } else { opts.axes };
            let f = Frame { x0: MARGIN, y0: y, wx: finite_range(&sets, axes.0), wy: finite_range(&sets, axes.1), h: PLANE_H };
            let _ = writeln!(body, r##"<rect x="{MARGIN}" y="{y:.2}" width="{PANEL_W}" height="{PLANE_H}" fill="none" stroke="#999"/>"##);
            for (i, set) in sets.iter().enumerate() {
                for cell in set.cells() {
                    plane_cell(&mut body, &f, &cell, axes, PALETTE[i % PALETTE.len()]);
                }
            }
            for (x, color, label) in &marks[q].points {
                let _ = writeln!(body, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="none" stroke="{color}" stroke-width="2"><title>{}</title></circle>"#, f.px(to_f64(&x[axes.0])), f.py(to_f64(&x[axes.1])), esc(label));
            }
            y += PLANE_H + MARGIN;
        }
    }
    let width = PANEL_W + 2.0 * MARGIN + 120.0;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{y:.0}" viewBox="0 0 {width:.0} {y:.0}">"#);
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(svg)
}
