//! Deterministic SVG figures of the moment polytope.
//!
//! The polytope is drawn at a fixed scale in an 800x480 viewbox so that equal
//! inputs give byte-identical files.

use std::fmt::Write;

use f1_mirror::aside::Locus;
use f1_mirror::geometry::polytope;
use f1_mirror::numerics::{integrate_flow, stable_manifold_probe, Direction, FlowOptions};
use f1_mirror::{GradientTree, IntersectionComponent, LineBundleLabel, Point, SurfaceParams};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;
const SCALE: f64 = 180.0;
/// Centers the two-unit-high polytope vertically.
const OFFSET_Y: f64 = 60.0;

const DEGREE_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
const MUTED: &str = "#9a9a9a";
const TREE_COLOR: &str = "#6a3d9a";

fn to_px(p: &[f64; 2]) -> (f64, f64) {
    (MARGIN + SCALE * p[0], HEIGHT - OFFSET_Y - SCALE * p[1])
}

fn color(c: &IntersectionComponent) -> &'static str {
    match c.morse_index {
        Some(d) if c.is_generator => DEGREE_COLORS[d as usize],
        _ => MUTED,
    }
}

fn classes(c: &IntersectionComponent) -> String {
    let degree = c
        .morse_index
        .map_or("degenerate".to_string(), |d| format!("degree-{d}"));
    let role = if c.is_generator { "generator" } else { "other" };
    format!("locus {degree} {role}")
}

/// Pixel coordinates, skipping points that round to the previous one.
fn polyline_points(points: &[Point]) -> String {
    let mut out: Vec<String> = Vec::new();
    for p in points {
        let (x, y) = to_px(&p.to_array());
        let pt = format!("{x:.2},{y:.2}");
        if out.last() != Some(&pt) {
            out.push(pt);
        }
    }
    out.join(" ")
}

/// What to draw on top of the polytope.
#[derive(Default)]
pub struct Figure<'a> {
    pub title: String,
    pub components: &'a [IntersectionComponent],
    pub trees: &'a [GradientTree],
    pub stable_manifolds: bool,
}

pub fn render(fig: &Figure<'_>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    s.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#6a3d9a\"/></marker></defs>\n"
    ));
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="470" font-family="sans-serif" font-size="14">{}</text>"#,
        fig.title
    );
    draw_polytope(&mut s);
    for c in fig.components {
        draw_component(&mut s, c);
    }
    if fig.stable_manifolds {
        for c in fig.components {
            draw_stable_manifold(&mut s, c);
        }
    }
    for t in fig.trees {
        draw_tree(&mut s, t);
    }
    draw_legend(&mut s);
    s.push_str("</svg>\n");
    s
}

fn draw_polytope(s: &mut String) {
    let poly = polytope(&SurfaceParams::<f64>::f1());
    let vertices = poly.vertices();
    let _ = writeln!(
        s,
        r##"<polygon class="polytope" points="{}" fill="#f5f2e9" stroke="#333333" stroke-width="1.5"/>"##,
        polyline_points(&vertices)
    );
    // facet i runs from vertex i-1 to vertex i
    let n = vertices.len();
    for (i, facet) in poly.facets().iter().enumerate() {
        let (a, b) = (vertices[(i + n - 1) % n].to_array(), vertices[i].to_array());
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        // push the label outward along the inner normal
        let nrm = facet.normal.map(|v| v as f64);
        let len = nrm[0].hypot(nrm[1]);
        let (x, y) = to_px(&[mid[0] - 0.14 * nrm[0] / len, mid[1] - 0.14 * nrm[1] / len]);
        let _ = writeln!(
            s,
            r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" fill="#555555" text-anchor="middle">{}</text>"##,
            facet.divisor
        );
    }
}

fn draw_component(s: &mut String, c: &IntersectionComponent) {
    let col = color(c);
    let cls = classes(c);
    let index = c.index;
    match &c.locus {
        Locus::Point(p) => {
            let (x, y) = to_px(&p.to_f64().to_array());
            let fill = if c.is_generator { col } else { "white" };
            let _ = writeln!(
                s,
                r#"<circle class="{cls}" data-index="{index}" cx="{x:.2}" cy="{y:.2}" r="6" fill="{fill}" stroke="{col}" stroke-width="2"/>"#
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{col}">{index}</text>"#,
                x + 8.0,
                y - 8.0
            );
        }
        Locus::Segment { start, end, .. } => {
            let (x1, y1) = to_px(&start.to_f64().to_array());
            let (x2, y2) = to_px(&end.to_f64().to_array());
            let _ = writeln!(
                s,
                r#"<line class="{cls}" data-index="{index}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{col}" stroke-width="6" stroke-linecap="round"/>"#
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{col}">{index}</text>"#,
                (x1 + x2) / 2.0 + 8.0,
                (y1 + y2) / 2.0 - 8.0
            );
        }
        // the polytope itself is already drawn
        Locus::WholePolytope => {}
    }
}

fn draw_stable_manifold(s: &mut String, c: &IntersectionComponent) {
    let Locus::Point(p) = &c.locus else {
        return;
    };
    if !c.is_generator || c.morse_index != Some(1) {
        return;
    }
    let v = p.to_f64();
    let field = c.field();
    let Ok(probe) = stable_manifold_probe(&field, &v) else {
        return;
    };
    let poly = polytope(&SurfaceParams::<f64>::f1());
    let opts = FlowOptions {
        t_max: 40.0,
        ..FlowOptions::default()
    };
    for e in &probe.directions {
        for sign in [1.0, -1.0] {
            let start = Point::new(v.x1 + sign * 1e-3 * e[0], v.x2 + sign * 1e-3 * e[1]);
            if !poly.contains(&start) {
                continue;
            }
            let tr = integrate_flow(&field, &poly, &start, Direction::Backward, &opts);
            let mut pts = vec![v.clone()];
            pts.extend(tr.points.iter().cloned());
            let _ = writeln!(
                s,
                r#"<polyline class="stable-manifold" data-index="{}" points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                c.index,
                polyline_points(&pts),
                color(c)
            );
        }
    }
}

fn draw_tree(s: &mut String, t: &GradientTree) {
    let (x, y) = to_px(&t.z.to_array());
    let _ = writeln!(
        s,
        r#"<circle class="tree-root" data-target="{}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{TREE_COLOR}"/>"#,
        t.target.index
    );
    for edge in &t.edges[..2] {
        if edge.len() < 2 {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<polyline class="tree-edge" points="{}" fill="none" stroke="{TREE_COLOR}" stroke-width="2" marker-end="url(#arrow)"/>"#,
            polyline_points(edge)
        );
    }
}

fn draw_legend(s: &mut String) {
    let x = WIDTH - MARGIN - 120.0;
    for (d, col) in DEGREE_COLORS.iter().enumerate() {
        let y = MARGIN + 20.0 * d as f64;
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{col}"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">degree {d}</text>"#,
            x + 12.0,
            y + 4.0
        );
    }
}

pub fn title_for(
    from: LineBundleLabel,
    to: LineBundleLabel,
    via: Option<LineBundleLabel>,
) -> String {
    match via {
        Some(m) => format!("O{from} -&gt; O{m} -&gt; O{to}"),
        None => format!("O{from} -&gt; O{to}, difference {}", to - from),
    }
}
