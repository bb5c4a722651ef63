//! SVG drawings of tilings and of their pseudoline arrangements.
//!
//! Geometry here is floating point and uses the regular `k*pi/n` star; none
//! of it feeds back into combinatorics.

use std::fmt::Write;

use crate::arrangement::render_directions;
use crate::tiling::{TilePlacement, Tiling};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Length of a rhombus edge in SVG units.
    pub scale: f64,
    pub tiles: bool,
    /// Ribbon midlines, one polyline piece per tile and pseudoline.
    pub pseudolines: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 40.0,
            tiles: true,
            pseudolines: false,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#e6b89c", "#9cc3e6", "#b5dba0", "#e6dc9c", "#c9a6e0", "#e0a6b7", "#a6e0d9", "#d0d0d0",
];

const LINE_COLORS: [&str; 8] = [
    "#b03a2e", "#1f618d", "#1e8449", "#b7950b", "#6c3483", "#a93226", "#117a65", "#515a5a",
];

type P = (f64, f64);

fn point(dirs: &[P], coords: &[f64]) -> P {
    coords
        .iter()
        .zip(dirs)
        .fold((0.0, 0.0), |(x, y), (&m, &(dx, dy))| (x + m * dx, y + m * dy))
}

pub fn render_svg(tiling: &Tiling, opts: &RenderOptions) -> String {
    let spec = tiling.spec();
    let n = spec.bundle_count();
    let dirs = render_directions(n);
    let placements = tiling.placements();

    let corner = |p: &TilePlacement, a: f64, b: f64| -> P {
        let (i, j) = (p.pair.0.bundle as usize - 1, p.pair.1.bundle as usize - 1);
        let mut c: Vec<f64> = p.coords.iter().map(|&m| m as f64).collect();
        c[i] += a;
        c[j] += b;
        point(&dirs, &c)
    };

    // bounding box from the zonotope corners
    let full: Vec<f64> = spec.sizes().iter().map(|&a| a as f64).collect();
    let mut xs = vec![0.0];
    let mut ys = vec![0.0];
    for k in 0..=n {
        let mut lo = vec![0.0; n];
        let mut hi = full.clone();
        for i in 0..k {
            lo[i] = full[i];
            hi[i] = 0.0;
        }
        for q in [point(&dirs, &lo), point(&dirs, &hi)] {
            xs.push(q.0);
            ys.push(q.1);
        }
    }
    let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
    let (x0, x1) = (fold(&xs, f64::min, f64::MAX), fold(&xs, f64::max, f64::MIN));
    let (y0, y1) = (fold(&ys, f64::min, f64::MAX), fold(&ys, f64::max, f64::MIN));
    let s = opts.scale;
    let pad = s * 0.5;
    let (w, h) = ((x1 - x0) * s + 2.0 * pad, (y1 - y0) * s + 2.0 * pad);
    // flip y so the drawing has the usual orientation
    let tx = |q: P| ((q.0 - x0) * s + pad, (y1 - q.1) * s + pad);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(out, "<!-- zonotope {spec} -->");
    if opts.tiles {
        let _ = writeln!(out, r##"<g stroke="#333" stroke-width="1" stroke-linejoin="round">"##);
        for p in &placements {
            let kind = (p.pair.0.bundle as usize - 1) * n + p.pair.1.bundle as usize - 1;
            let pts: Vec<String> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = tx(corner(p, a, b));
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{}"><title>{} {}</title></polygon>"#,
                pts.join(" "),
                PALETTE[kind % PALETTE.len()],
                p.pair.0,
                p.pair.1
            );
        }
        let _ = writeln!(out, "</g>");
    }
    if opts.pseudolines {
        let _ = writeln!(out, r#"<g stroke-width="2" stroke-linecap="round" fill="none">"#);
        for p in &placements {
            let pieces = [
                (p.pair.0, corner(p, 0.5, 0.0), corner(p, 0.5, 1.0)),
                (p.pair.1, corner(p, 0.0, 0.5), corner(p, 1.0, 0.5)),
            ];
            for (line, a, b) in pieces {
                let ((ax, ay), (bx, by)) = (tx(a), tx(b));
                let _ = writeln!(
                    out,
                    r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{}"/>"#,
                    LINE_COLORS[(line.bundle as usize - 1) % LINE_COLORS.len()]
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
