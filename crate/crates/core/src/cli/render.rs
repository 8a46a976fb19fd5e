//! SVG pictures of the real trace: the curve, incident and reflected rays, envelope points.
//!
//! The affine chart is `x = x0/x2`, `y = x1/x2`.

use std::fmt::Write;

use serde::Serialize;

use crate::caustic::{envelope_point, CurveSample};
use crate::error::{Error, Result};
use crate::euclid::{to_cx, Curve};
use crate::poly::{Cx, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let ok = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) && xmin < xmax && ymin < ymax;
        if !ok {
            return Err(Error::InvalidInput("viewport must satisfy xmin < xmax and ymin < ymax".into()));
        }
        Ok(Viewport { xmin, xmax, ymin, ymax })
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        (self.xmin..=self.xmax).contains(&p[0]) && (self.ymin..=self.ymax).contains(&p[1])
    }

    fn diameter(&self) -> f64 {
        (self.xmax - self.xmin).hypot(self.ymax - self.ymin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Layers {
    pub curve: bool,
    pub incident: bool,
    pub reflected: bool,
    pub envelope: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers { curve: true, incident: true, reflected: true, envelope: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenderSpec {
    pub viewport: Viewport,
    pub rays: usize,
    /// Cells per side of the marching-squares grid.
    pub grid: usize,
    pub curve_width: f64,
    pub ray_width: f64,
    pub layers: Layers,
}

impl RenderSpec {
    pub fn new(viewport: Viewport, rays: usize) -> Self {
        RenderSpec { viewport, rays, grid: 240, curve_width: 2.0, ray_width: 0.6, layers: Layers::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Rendering {
    pub svg: String,
    pub real_points: usize,
    pub envelope_points: Vec<[f64; 2]>,
}

const WIDTH: f64 = 600.0;

struct Affine<'a> {
    curve: &'a Curve,
}

impl Affine<'_> {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.curve.numeric().eval(&pt(x, y)).re
    }

    fn grad(&self, x: f64, y: f64) -> [f64; 2] {
        let g = self.curve.numeric().gradient_at(&pt(x, y));
        [g[0].re, g[1].re]
    }

    /// Newton steps along the gradient.
    fn refine(&self, mut p: [f64; 2]) -> Option<[f64; 2]> {
        for _ in 0..6 {
            let v = self.value(p[0], p[1]);
            let g = self.grad(p[0], p[1]);
            let n2 = g[0] * g[0] + g[1] * g[1];
            if n2 == 0.0 || !n2.is_finite() {
                return None;
            }
            p = [p[0] - v * g[0] / n2, p[1] - v * g[1] / n2];
        }
        Some(p)
    }
}

fn pt(x: f64, y: f64) -> [Cx; 3] {
    [Cx::new(x, 0.0), Cx::new(y, 0.0), Cx::new(1.0, 0.0)]
}

fn lerp(a: [f64; 2], b: [f64; 2], fa: f64, fb: f64) -> [f64; 2] {
    let s = fa / (fa - fb);
    [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
}

/// Zero-level segments of `f` on a regular grid, and the edge crossings they join.
fn marching_squares(f: &Affine, vp: &Viewport, n: usize) -> (Vec<[[f64; 2]; 2]>, Vec<[f64; 2]>) {
    let dx = (vp.xmax - vp.xmin) / n as f64;
    let dy = (vp.ymax - vp.ymin) / n as f64;
    let at = |i: usize, j: usize| [vp.xmin + i as f64 * dx, vp.ymin + j as f64 * dy];
    let vals: Vec<Vec<f64>> = (0..=n).map(|i| (0..=n).map(|j| {
        let p = at(i, j);
        f.value(p[0], p[1])
    }).collect()).collect();
    let mut segments = Vec::new();
    let mut crossings = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut hits = Vec::with_capacity(4);
            for k in 0..4 {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                let (fa, fb) = (vals[a.0][a.1], vals[b.0][b.1]);
                if (fa < 0.0) != (fb < 0.0) {
                    hits.push(lerp(at(a.0, a.1), at(b.0, b.1), fa, fb));
                }
            }
            match hits.len() {
                2 => segments.push([hits[0], hits[1]]),
                4 => {
                    let c = at(i, j);
                    let centre = f.value(c[0] + dx / 2.0, c[1] + dy / 2.0);
                    if (centre < 0.0) == (vals[i][j] < 0.0) {
                        segments.push([hits[0], hits[3]]);
                        segments.push([hits[1], hits[2]]);
                    } else {
                        segments.push([hits[0], hits[1]]);
                        segments.push([hits[2], hits[3]]);
                    }
                }
                _ => {}
            }
            // bottom and left edges only, so each crossing is seen once
            for (a, b) in [((i, j), (i + 1, j)), ((i, j), (i, j + 1))] {
                let (fa, fb) = (vals[a.0][a.1], vals[b.0][b.1]);
                if (fa < 0.0) != (fb < 0.0) {
                    crossings.push(lerp(at(a.0, a.1), at(b.0, b.1), fa, fb));
                }
            }
        }
    }
    (segments, crossings)
}

struct Canvas {
    vp: Viewport,
    height: f64,
}

impl Canvas {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let x = (p[0] - self.vp.xmin) / (self.vp.xmax - self.vp.xmin) * WIDTH;
        let y = (self.vp.ymax - p[1]) / (self.vp.ymax - self.vp.ymin) * self.height;
        (x, y)
    }

    fn line(&self, out: &mut String, a: [f64; 2], b: [f64; 2]) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(out, r#"    <line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
}

/// Real sample points of the curve inside the viewport, in grid order.
fn real_points(f: &Affine, vp: &Viewport, crossings: &[[f64; 2]], min_sep: f64) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for c in crossings {
        let Some(p) = f.refine(*c) else { continue };
        let g = f.grad(p[0], p[1]);
        if !vp.contains(p) || g[0].hypot(g[1]) < 1e-9 {
            continue;
        }
        if out.iter().all(|q| (q[0] - p[0]).hypot(q[1] - p[1]) > min_sep) {
            out.push(p);
        }
    }
    out
}

/// The SVG picture. Deterministic: no randomness is involved.
pub fn render(curve: &Curve, source: &[Rat; 3], spec: &RenderSpec) -> Result<Rendering> {
    let vp = spec.viewport;
    let f = Affine { curve };
    let (segments, crossings) = marching_squares(&f, &vp, spec.grid.max(2));
    let pts = real_points(&f, &vp, &crossings, vp.diameter() / spec.grid as f64 / 4.0);
    if pts.is_empty() {
        return Err(Error::Degenerate("no real curve points in the viewport".into()));
    }
    let chosen: Vec<[f64; 2]> = if spec.rays == 0 {
        Vec::new()
    } else {
        (0..spec.rays.min(pts.len())).map(|k| pts[k * pts.len() / spec.rays.min(pts.len())]).collect()
    };
    let sc = to_cx(source);
    let s = [sc[0].re, sc[1].re, sc[2].re];
    let reach = 2.0 * vp.diameter();
    let height = WIDTH * (vp.ymax - vp.ymin) / (vp.xmax - vp.xmin);
    let canvas = Canvas { vp, height };

    let mut incident = String::new();
    let mut reflected = String::new();
    let mut envelope: Vec<[f64; 2]> = Vec::new();
    for p in &chosen {
        // direction of travel towards P
        let (start, d) = if s[2] != 0.0 {
            let sa = [s[0] / s[2], s[1] / s[2]];
            (sa, [p[0] - sa[0], p[1] - sa[1]])
        } else {
            let d = [s[0], s[1]];
            let l = d[0].hypot(d[1]);
            ([p[0] - reach * d[0] / l, p[1] - reach * d[1] / l], d)
        };
        let dl = d[0].hypot(d[1]);
        if dl < 1e-12 {
            continue;
        }
        canvas.line(&mut incident, start, *p);
        let g = f.grad(p[0], p[1]);
        let gl = g[0].hypot(g[1]);
        let n = [g[0] / gl, g[1] / gl];
        let dn = d[0] * n[0] + d[1] * n[1];
        let r = [d[0] - 2.0 * dn * n[0], d[1] - 2.0 * dn * n[1]];
        let rl = r[0].hypot(r[1]);
        canvas.line(&mut reflected, *p, [p[0] + reach * r[0] / rl, p[1] + reach * r[1] / rl]);

        let sample = CurveSample { point: pt(p[0], p[1]), tangent_dir: [Cx::new(-g[1], 0.0), Cx::new(g[0], 0.0), Cx::new(0.0, 0.0)], line: 0 };
        if let Ok(c) = envelope_point(curve, &sc, &sample) {
            if c[2].norm() > 1e-12 * (c[0].norm() + c[1].norm()) {
                let e = [(c[0] / c[2]).re, (c[1] / c[2]).re];
                let tol = 1e-9 * vp.diameter();
                if vp.contains(e) && envelope.iter().all(|q| (q[0] - e[0]).hypot(q[1] - e[1]) > tol) {
                    envelope.push(e);
                }
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.3}">"#
    );
    let _ = writeln!(svg, r#"  <defs><clipPath id="view"><rect x="0" y="0" width="{WIDTH:.0}" height="{height:.3}"/></clipPath></defs>"#);
    let _ = writeln!(svg, r#"  <rect x="0" y="0" width="{WIDTH:.0}" height="{height:.3}" fill="white"/>"#);
    if spec.layers.incident {
        let _ = writeln!(svg, r##"  <g id="incident" stroke="#e0a030" stroke-width="{}" clip-path="url(#view)">"##, spec.ray_width);
        svg.push_str(&incident);
        let _ = writeln!(svg, "  </g>");
    }
    if spec.layers.reflected {
        let _ = writeln!(svg, r##"  <g id="reflected" stroke="#3070d0" stroke-width="{}" clip-path="url(#view)">"##, spec.ray_width);
        svg.push_str(&reflected);
        let _ = writeln!(svg, "  </g>");
    }
    if spec.layers.curve {
        let _ = writeln!(svg, r#"  <g id="curve" stroke="black" stroke-width="{}" stroke-linecap="round">"#, spec.curve_width);
        for [a, b] in &segments {
            canvas.line(&mut svg, *a, *b);
        }
        let _ = writeln!(svg, "  </g>");
    }
    if spec.layers.envelope {
        let _ = writeln!(svg, r##"  <g id="envelope" fill="#c02020">"##);
        for e in &envelope {
            let (x, y) = canvas.map(*e);
            let _ = writeln!(svg, r#"    <circle cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
        }
        let _ = writeln!(svg, "  </g>");
    }
    let _ = writeln!(svg, "</svg>");
    Ok(Rendering { svg, real_points: pts.len(), envelope_points: envelope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, MPoly};

    fn circle() -> Curve {
        Curve::new(MPoly::from_terms([([2, 0, 0], rat(1)), ([0, 2, 0], rat(1)), ([0, 0, 2], rat(-1))]).unwrap()).unwrap()
    }

    #[test]
    fn viewport_must_be_nondegenerate() {
        assert!(Viewport::new(0.0, 0.0, -1.0, 1.0).is_err());
        assert!(Viewport::new(-1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn circle_from_centre_focuses_at_origin() {
        let spec = RenderSpec::new(Viewport::new(-2.0, 2.0, -2.0, 2.0).unwrap(), 16);
        let r = render(&circle(), &[rat(0), rat(0), rat(1)], &spec).unwrap();
        assert_eq!(r.envelope_points.len(), 1);
        let e = r.envelope_points[0];
        assert!(e[0].abs() < 1e-9 && e[1].abs() < 1e-9);
        assert!(r.svg.contains("<g id=\"curve\""));
    }

    #[test]
    fn empty_viewport_is_an_error() {
        let spec = RenderSpec::new(Viewport::new(5.0, 6.0, 5.0, 6.0).unwrap(), 8);
        assert!(matches!(render(&circle(), &[rat(2), rat(0), rat(1)], &spec), Err(Error::Degenerate(_))));
    }
}
