//! Static SVG figures.

use std::fmt::Write;

use newton_forge::lattice::{LatticeBall, VertexSet};
use newton_forge::synthesis::Decomposition;
use newton_forge::{CpwlFn, Polytope, Rat, Scalar, Vector};

const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];

struct Svg {
    w: f64,
    h: f64,
    body: String,
}

impl Svg {
    fn new(w: f64, h: f64) -> Self {
        Svg { w, h, body: String::new() }
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="{stroke}"/>"#);
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="1"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, opacity: f64) {
        let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.body,
            r##"<polygon points="{}" fill="{fill}" fill-opacity="{opacity}" stroke="#333" stroke-width="1"/>"##,
            list.join(" ")
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(self.body, r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#);
    }

    fn text(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(self.body, r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12">{s}</text>"#);
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.w, self.h, self.w, self.h, self.body
        )
    }
}

fn xy(v: &Vector) -> (f64, f64) {
    (v[0].to_f64_lossy(), v[1].to_f64_lossy())
}

/// One step of a game: the black set, the selected vertex and its ball.
pub struct Frame {
    pub black: VertexSet,
    pub selected: Option<usize>,
}

pub fn ball_frames(g: &LatticeBall, frames: &[Frame]) -> String {
    let unit = 28.0;
    let side = (2 * g.r + 2) as f64 * unit;
    let mut svg = Svg::new(side * frames.len().max(1) as f64, side + 20.0);
    let pos: Vec<(f64, f64)> = (0..g.vertex_count()).map(|v| xy(&g.embedding::<Rat>(v))).collect();
    for (k, f) in frames.iter().enumerate() {
        let ox = k as f64 * side + side / 2.0;
        let oy = side / 2.0 + 20.0;
        let at = |v: usize| (ox + pos[v].0 * unit, oy - pos[v].1 * unit);
        svg.text(ox - side / 2.0 + 6.0, 14.0, &format!("step {}", k + 1));
        for &(a, b) in &g.edges {
            svg.line(at(a), at(b), "#ccc");
        }
        let ball = f.selected.map(|q| g.ball1(q));
        for v in 0..g.vertex_count() {
            let (x, y) = at(v);
            let fill = if Some(v) == f.selected {
                "#e15759"
            } else if ball.as_ref().is_some_and(|b| b.contains(v) && f.black.contains(v)) {
                "#f1a340"
            } else if f.black.contains(v) {
                "#222"
            } else {
                "#fff"
            };
            svg.circle(x, y, 6.0, fill, "#555");
        }
    }
    svg.finish()
}

fn fit(polys: &[&Polytope], w: f64, h: f64) -> impl Fn(&Vector) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = polys.iter().flat_map(|p| p.vertices().iter().map(xy)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let s = 0.8 * w.min(h) / span;
    move |v: &Vector| {
        let (x, y) = xy(v);
        (0.1 * w + (x - x0) * s, h - 0.1 * h - (y - y0) * s)
    }
}

fn ring(p: &Polytope) -> Vec<Vector> {
    let vs = p.vertices();
    if vs.len() < 3 {
        return vs.to_vec();
    }
    // Counter-clockwise around the centroid.
    let n = vs.len() as f64;
    let c = vs.iter().map(xy).fold((0.0, 0.0), |a, b| (a.0 + b.0 / n, a.1 + b.1 / n));
    let mut out = vs.to_vec();
    out.sort_by(|a, b| {
        let (ax, ay) = xy(a);
        let (bx, by) = xy(b);
        (ay - c.1).atan2(ax - c.0).total_cmp(&(by - c.1).atan2(bx - c.0))
    });
    out
}

pub fn decomposition(p: &Polytope, d: &Decomposition) -> String {
    let panel = 220.0;
    let mut svg = Svg::new(panel * (1 + d.parts.len()) as f64, panel + 20.0);
    let mut all: Vec<&Polytope> = vec![p];
    all.extend(d.parts.iter().map(|x| x.polytope()));
    let map = fit(&all, panel, panel);
    for (k, poly) in all.iter().enumerate() {
        let ox = k as f64 * panel;
        let pts: Vec<(f64, f64)> = ring(poly).iter().map(|v| map(v)).map(|(x, y)| (x + ox, y + 20.0)).collect();
        let label = if k == 0 { "input".to_string() } else { format!("part {k}") };
        svg.text(ox + 6.0, 14.0, &label);
        svg.polygon(&pts, PALETTE[k % PALETTE.len()], 0.5);
        for (x, y) in pts {
            svg.circle(x, y, 2.5, "#333", "#333");
        }
    }
    svg.finish()
}

/// Linearity regions of a planar function over `[-1, 1]^2`, one colour per
/// generator.
pub fn regions(f: &CpwlFn) -> String {
    let cells = 80;
    let px = 4.0;
    let mut svg = Svg::new(cells as f64 * px, cells as f64 * px);
    let gens = f.generators();
    for i in 0..cells {
        for j in 0..cells {
            let x = Rat::from_ratio(2 * i as i64 + 1 - cells as i64, cells as i64);
            let y = Rat::from_ratio(cells as i64 - 2 * j as i64 - 1, cells as i64);
            let pt = Vector::new(vec![x, y]);
            let best = (0..gens.len()).max_by(|&a, &b| gens[a].dot(&pt).cmp(&gens[b].dot(&pt)).then(b.cmp(&a))).unwrap_or(0);
            svg.rect(i as f64 * px, j as f64 * px, px, px, PALETTE[best % PALETTE.len()]);
        }
    }
    let mid = cells as f64 * px / 2.0;
    svg.line((0.0, mid), (2.0 * mid, mid), "#000");
    svg.line((mid, 0.0), (mid, 2.0 * mid), "#000");
    svg.finish()
}
