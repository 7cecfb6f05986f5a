//! SVG rendering of two-dimensional session views.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::session::{Geometry, SessionView};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 24.0;

pub const BACKGROUND_FILL: &str = "#c8c8c8";
pub const OPTIONS_SEARCHING_FILL: &str = "#ffe24a";
pub const OPTIONS_FOUND_FILL: &str = "#ff9a1f";
pub const SELECTION_STROKE: &str = "#d62020";
pub const CANDIDATE_FILL: &str = "#1f5fd6";

/// Corners of the set clipped to `clip_length` along rays and lines, in
/// counter-clockwise order.
pub fn clipped_polygon(g: &Geometry) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let mut dirs: Vec<[f64; 2]> = g.rays.iter().map(|r| [r[0], r[1]]).collect();
    for l in &g.lines {
        dirs.push([l[0], l[1]]);
        dirs.push([-l[0], -l[1]]);
    }
    for v in &g.vertices {
        let p = [v[0], v[1]];
        pts.push(p);
        for d in &dirs {
            pts.push([p[0] + g.clip_length * d[0], p[1] + g.clip_length * d[1]]);
        }
    }
    convex_hull(pts)
}

fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

struct Viewport {
    min: [f64; 2],
    scale: f64,
}

impl Viewport {
    fn fit(points: &[[f64; 2]]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        if !min[0].is_finite() {
            return Self { min: [0.0, 0.0], scale: 1.0 };
        }
        let span_x = (max[0] - min[0]).max(1e-9);
        let span_y = (max[1] - min[1]).max(1e-9);
        let scale = ((WIDTH - 2.0 * MARGIN) / span_x).min((HEIGHT - 2.0 * MARGIN) / span_y);
        Self { min, scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.min[0]) * self.scale,
            HEIGHT - MARGIN - (p[1] - self.min[1]) * self.scale,
        )
    }
}

fn polygon(out: &mut String, vp: &Viewport, pts: &[[f64; 2]], fill: &str, class: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = vp.map(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polygon class="{class}" points="{}" fill="{fill}" stroke="dimgray" stroke-width="1"/>"#,
        coords.join(" ")
    );
}

/// Draws background, options, candidates and selections of a view with `q = 2`.
pub fn render_view(view: &SessionView) -> Result<String> {
    if view.q != 2 {
        return Err(Error::Unsupported(format!("rendering needs q = 2, got {}", view.q)));
    }
    let background = clipped_polygon(&view.background);
    let options = clipped_polygon(&view.options.geometry);
    let vp = Viewport::fit(&background);
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    out.push('\n');
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    polygon(&mut out, &vp, &background, BACKGROUND_FILL, "background");
    if !options.is_empty() {
        let fill = if view.options.found {
            OPTIONS_FOUND_FILL
        } else {
            OPTIONS_SEARCHING_FILL
        };
        polygon(&mut out, &vp, &options, fill, "options");
    }
    for c in &view.candidates {
        let (x, y) = vp.map([c.point[0], c.point[1]]);
        let _ = writeln!(
            out,
            r#"  <circle class="candidate" cx="{x:.2}" cy="{y:.2}" r="3" fill="{CANDIDATE_FILL}"/>"#
        );
    }
    for s in &view.selections {
        let (x, y) = vp.map([s.point[0], s.point[1]]);
        let _ = writeln!(
            out,
            r#"  <circle class="selection" data-id="{}" cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="{SELECTION_STROKE}" stroke-width="2"/>"#,
            s.id
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
