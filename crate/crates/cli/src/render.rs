//! Plain SVG drawings of planar instances.

use std::fmt::Write;

use hamburger::{ColoredInstance, CutResult, PartitionResult, RationalHyperplane};

use crate::Failure;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 3] = ["#d62728", "#1f77b4", "#2ca02c"];

pub enum Overlay<'a> {
    None,
    Cut(&'a CutResult),
    Partition(&'a PartitionResult),
}

struct View {
    lo: [f64; 2],
    scale: f64,
}

impl View {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.lo[0]) * self.scale,
            SIZE - MARGIN - (p[1] - self.lo[1]) * self.scale,
        )
    }
}

fn xy(p: &hamburger::PointD) -> [f64; 2] {
    let v = p.to_f64();
    [v[0], v[1]]
}

/// Clips `n · x = o` to the box `[lo, hi]`.
fn clip_line(h: &RationalHyperplane, lo: [f64; 2], hi: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    let f = hamburger::Halfspace::from(h);
    let (a, b, o) = (f.normal[0], f.normal[1], f.offset);
    let mut hits = Vec::new();
    if b != 0.0 {
        for x in [lo[0], hi[0]] {
            let y = (o - a * x) / b;
            if y >= lo[1] && y <= hi[1] {
                hits.push([x, y]);
            }
        }
    }
    if a != 0.0 {
        for y in [lo[1], hi[1]] {
            let x = (o - b * y) / a;
            if x >= lo[0] && x <= hi[0] {
                hits.push([x, y]);
            }
        }
    }
    let first = *hits.first()?;
    let far = hits
        .iter()
        .copied()
        .max_by(|p, q| {
            let d = |r: &[f64; 2]| (r[0] - first[0]).powi(2) + (r[1] - first[1]).powi(2);
            d(p).total_cmp(&d(q))
        })?;
    Some((first, far))
}

pub fn render_svg(inst: &ColoredInstance, overlay: Overlay<'_>) -> Result<String, Failure> {
    if inst.d() != 2 {
        return Err(Failure::Input(format!("render supports d = 2 only, got d = {}", inst.d())));
    }
    let pts: Vec<(usize, [f64; 2])> = inst.points().map(|(c, p)| (c, xy(p))).collect();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (_, p) in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if pts.is_empty() {
        lo = [0.0, 0.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * span;
    let (lo, hi) = ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad]);
    let view = View { lo, scale: (SIZE - 2.0 * MARGIN) / (span + 2.0 * pad) };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let line = |svg: &mut String, h: &RationalHyperplane, class: &str, width: f64| {
        if let Some((a, b)) = clip_line(h, lo, hi) {
            let (x1, y1) = view.map(a);
            let (x2, y2) = view.map(b);
            let _ = writeln!(
                svg,
                r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="gray" stroke-width="{width}" stroke-dasharray="6 4"/>"#
            );
        }
    };
    match overlay {
        Overlay::None => {}
        Overlay::Cut(cut) => line(&mut svg, &cut.separator, "separator", 1.5),
        Overlay::Partition(pr) => {
            let mut stack = vec![&pr.cut_tree];
            while let Some(t) = stack.pop() {
                if let hamburger::CutTree::Node { cut, negative, positive } = t {
                    line(&mut svg, &cut.separator, "separator", 0.8);
                    stack.push(negative);
                    stack.push(positive);
                }
            }
            for s in &pr.simplices {
                let ends: Vec<(f64, f64)> = s.vertices.iter().map(|v| view.map(xy(&v.point))).collect();
                if let [(x1, y1), (x2, y2)] = ends[..] {
                    let _ = writeln!(
                        svg,
                        r#"<line class="segment" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="2"/>"#
                    );
                }
            }
        }
    }
    for (c, p) in &pts {
        let (x, y) = view.map(*p);
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}"/>"#, PALETTE[*c % 3]);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
