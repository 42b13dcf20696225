//! Static SVG 1.1 plots of a run.

use std::fmt::Write as _;

use crate::engine::SimResult;
use crate::geometry::{convex_hull, ConvexPolygon, Point2};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Tick whose cells are drawn; `None` draws the last tick.
    pub cells_at: Option<usize>,
    pub show_cells: bool,
    pub show_obstacles: bool,
    pub show_hull: bool,
    /// Canvas width in pixels; the height follows the aspect ratio.
    pub width_px: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            cells_at: None,
            show_cells: true,
            show_obstacles: true,
            show_hull: true,
            width_px: 800.0,
        }
    }
}

const PURSUER_COLORS: [&str; 8] = [
    "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];
const EVADER_COLOR: &str = "#d62728";
const MARGIN_PX: f64 = 40.0;

struct Frame {
    min: Point2,
    max: Point2,
    scale: f64,
    height: f64,
    width: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = Point2>, width: f64) -> Self {
        let (mut min, mut max) = (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points.filter(|p| p.is_finite()) {
            min = Point2::new(min.x.min(p.x), min.y.min(p.y));
            max = Point2::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.is_finite() {
            min = Point2::new(-1.0, -1.0);
            max = Point2::new(1.0, 1.0);
        }
        let pad = 1.0;
        min = min - Point2::new(pad, pad);
        max += Point2::new(pad, pad);
        let span_x = (max.x - min.x).max(1e-6);
        let span_y = (max.y - min.y).max(1e-6);
        let scale = (width - 2.0 * MARGIN_PX) / span_x;
        Self {
            min,
            max,
            scale,
            height: span_y * scale + 2.0 * MARGIN_PX,
            width,
        }
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN_PX + (x - self.min.x) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN_PX + (self.max.y - y) * self.scale
    }

    fn pt(&self, p: Point2) -> String {
        format!("{:.2},{:.2}", self.x(p.x), self.y(p.y))
    }

    fn points(&self, ps: &[Point2]) -> String {
        ps.iter().map(|&p| self.pt(p)).collect::<Vec<_>>().join(" ")
    }
}

fn polygon(out: &mut String, frame: &Frame, poly: &ConvexPolygon, class: &str, style: &str) {
    if poly.len() >= 3 {
        let _ = writeln!(
            out,
            r#"  <polygon class="{class}" points="{}" {style}/>"#,
            frame.points(poly.vertices())
        );
    }
}

fn axes(out: &mut String, f: &Frame) {
    let _ = writeln!(
        out,
        r##"  <g class="axes" stroke="#999999" stroke-width="1" font-family="sans-serif" font-size="10" fill="#555555">"##
    );
    let (x0, y0) = (f.x(f.min.x), f.y(f.min.y));
    let _ = writeln!(
        out,
        r#"    <line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/>"#,
        f.x(f.max.x)
    );
    let _ = writeln!(
        out,
        r#"    <line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}"/>"#,
        f.y(f.max.y)
    );
    let span = (f.max.x - f.min.x).max(f.max.y - f.min.y);
    let step = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
        .into_iter()
        .find(|s| span / s <= 12.0)
        .unwrap_or(200.0);
    let mut t = (f.min.x / step).ceil() * step;
    while t <= f.max.x {
        let x = f.x(t);
        let _ = writeln!(
            out,
            r#"    <line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            y0 + 4.0
        );
        let _ = writeln!(
            out,
            r#"    <text x="{x:.2}" y="{:.2}" text-anchor="middle" stroke="none">{}</text>"#,
            y0 + 16.0,
            t
        );
        t += step;
    }
    let mut t = (f.min.y / step).ceil() * step;
    while t <= f.max.y {
        let y = f.y(t);
        let _ = writeln!(
            out,
            r#"    <line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/>"#,
            x0 - 4.0
        );
        let _ = writeln!(
            out,
            r#"    <text x="{:.2}" y="{:.2}" text-anchor="end" stroke="none">{}</text>"#,
            x0 - 6.0,
            y + 3.0,
            t
        );
        t += step;
    }
    let _ = writeln!(out, "  </g>");
}

/// Renders obstacles, trajectories, the cells and pursuer hull at one tick,
/// and the capture disc around the final evader position.
pub fn render_svg(result: &SimResult, options: &SvgOptions) -> String {
    let sc = &result.scenario;
    let trace = &result.trace;
    let points = trace
        .iter()
        .flat_map(|s| s.pursuers.iter().map(|p| p.p).chain(std::iter::once(s.evader.p)))
        .chain(
            sc.obstacles
                .iter()
                .flat_map(|o| o.hull().vertices().iter().copied()),
        )
        .chain(sc.pursuer_starts.iter().copied())
        .chain(std::iter::once(sc.evader_start));
    let f = Frame::new(points, options.width_px);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.2} {:.2}">"#,
        f.width, f.height, f.width, f.height
    );
    let _ = writeln!(
        out,
        r##"  <rect x="0" y="0" width="{:.2}" height="{:.2}" fill="#ffffff"/>"##,
        f.width, f.height
    );
    axes(&mut out, &f);

    if options.show_obstacles {
        for o in &sc.obstacles {
            polygon(
                &mut out,
                &f,
                o.hull(),
                "obstacle",
                r##"fill="#555555" stroke="#333333" stroke-width="1""##,
            );
        }
    }

    let tick = options
        .cells_at
        .map(|k| k.min(trace.len().saturating_sub(1)))
        .or(trace.len().checked_sub(1));
    if let Some(snap) = tick.map(|k| &trace[k]) {
        if options.show_cells {
            for (i, cell) in snap.cells.iter().enumerate() {
                let color = PURSUER_COLORS[i % PURSUER_COLORS.len()];
                polygon(
                    &mut out,
                    &f,
                    cell,
                    "cell",
                    &format!(r#"fill="{color}" fill-opacity="0.2" stroke="{color}" stroke-width="1""#),
                );
            }
            if let Some(region) = snap.region {
                polygon(
                    &mut out,
                    &f,
                    &region.polygon(),
                    "region",
                    r##"fill="none" stroke="#444444" stroke-dasharray="6,3" stroke-width="1""##,
                );
            }
        }
        if options.show_hull {
            let ps: Vec<Point2> = snap.pursuers.iter().map(|s| s.p).collect();
            polygon(
                &mut out,
                &f,
                &convex_hull(&ps),
                "hull",
                r##"fill="none" stroke="#888888" stroke-dasharray="2,3" stroke-width="1.5""##,
            );
        }
    }

    let n = sc.pursuer_count();
    for i in 0..n {
        let path: Vec<Point2> = trace.iter().map(|s| s.pursuers[i].p).collect();
        let color = PURSUER_COLORS[i % PURSUER_COLORS.len()];
        if path.len() > 1 {
            let _ = writeln!(
                out,
                r#"  <polyline class="trajectory pursuer" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                f.points(&path)
            );
        }
        if let Some(last) = path.last() {
            let r = sc.pursuer_radii[i] * f.scale;
            let _ = writeln!(
                out,
                r#"  <circle class="pursuer" cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="{color}"/>"#,
                f.x(last.x),
                f.y(last.y)
            );
        }
    }
    let path: Vec<Point2> = trace.iter().map(|s| s.evader.p).collect();
    if path.len() > 1 {
        let _ = writeln!(
            out,
            r#"  <polyline class="trajectory evader" points="{}" fill="none" stroke="{EVADER_COLOR}" stroke-width="1.5"/>"#,
            f.points(&path)
        );
    }
    if let Some(last) = path.last() {
        let _ = writeln!(
            out,
            r#"  <circle class="capture" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="{EVADER_COLOR}" stroke-dasharray="4,2"/>"#,
            f.x(last.x),
            f.y(last.y),
            sc.capture_radius * f.scale
        );
        let _ = writeln!(
            out,
            r#"  <circle class="evader" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{EVADER_COLOR}"/>"#,
            f.x(last.x),
            f.y(last.y),
            sc.evader_radius * f.scale
        );
    }
    out.push_str("</svg>\n");
    out
}
