//! SVG pictures in the Poincaré disc: the octagon tessellation, closed geodesics drawn
//! through the fundamental octagon as exact circular arcs, and the Weierstrass points.

use std::fmt::Write as _;

use crate::crossings::chords_of_word;
use crate::error::{Error, Result};
use crate::hyp::{cabs, BoundaryPoint, Geodesic, Isometry, C};
use crate::model::Bolza;
use crate::real::Real;
use crate::systems::CurveSystem;
use crate::walk::Walker;

pub const MAX_DEPTH: usize = 6;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone)]
pub struct Layer {
    pub system: CurveSystem,
    /// Stroke colour; `None` picks from a fixed palette by layer index.
    pub color: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub layers: Vec<Layer>,
    /// Tiles reached by at most this many generator steps from the fundamental octagon.
    pub depth: usize,
    pub size: u32,
    pub weierstrass: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { layers: Vec::new(), depth: 0, size: 800, weierstrass: true }
    }
}

struct Canvas {
    out: String,
    half: f64,
}

impl Canvas {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (self.half * (1.0 + x), self.half * (1.0 - y))
    }

    /// Geodesic arc between two disc points.
    fn arc(&mut self, p: (f64, f64), q: (f64, f64), circle: Option<((f64, f64), f64)>, style: &str) {
        let (x0, y0) = self.px(p.0, p.1);
        let (x1, y1) = self.px(q.0, q.1);
        match circle {
            Some((c, r)) if r * self.half < 1e6 => {
                let cross = (p.0 - c.0) * (q.1 - c.1) - (p.1 - c.1) * (q.0 - c.0);
                let sweep = u8::from(cross > 0.0);
                let rr = r * self.half;
                let _ = writeln!(self.out, "<path d=\"M {x0:.3} {y0:.3} A {rr:.3} {rr:.3} 0 0 {sweep} {x1:.3} {y1:.3}\" {style}/>");
            }
            _ => {
                let _ = writeln!(self.out, "<path d=\"M {x0:.3} {y0:.3} L {x1:.3} {y1:.3}\" {style}/>");
            }
        }
    }
}

fn carrier<R: Real>(p: C<R>, q: C<R>) -> Option<((f64, f64), f64)> {
    let g = Geodesic::through(p, q).ok()?;
    g.circle().map(|(c, r)| ((c.re.to_f64(), c.im.to_f64()), r.to_f64()))
}

fn f2<R: Real>(z: C<R>) -> (f64, f64) {
    (z.re.to_f64(), z.im.to_f64())
}

/// Deterministic SVG 1.1 document for the spec.
pub fn render_svg<R: Real>(model: &Bolza<R>, spec: &RenderSpec) -> Result<String> {
    if spec.depth > MAX_DEPTH {
        return Err(Error::Domain(format!("tile depth {} exceeds {MAX_DEPTH}", spec.depth)));
    }
    let size = spec.size;
    let mut cv = Canvas { out: String::new(), half: size as f64 / 2.0 };
    let _ = writeln!(
        cv.out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let h = cv.half;
    let _ = writeln!(cv.out, "<circle cx=\"{h:.3}\" cy=\"{h:.3}\" r=\"{h:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>");

    // Tiles: breadth-first over generator steps, deduplicated by the image of the origin.
    let oct = &model.octagon.poly.vertices;
    let mut tiles = vec![Isometry::identity()];
    let mut layer = tiles.clone();
    for _ in 0..spec.depth {
        let mut next = Vec::new();
        for t in &layer {
            for g in &model.gens {
                let n = *t * *g;
                let o = n.apply_c(C::new(R::zero(), R::zero()));
                if cabs(o).to_f64() > 1.0 - 1e-6 {
                    continue;
                }
                if !tiles.iter().chain(&next).any(|s: &Isometry<R>| cabs(s.apply_c(C::new(R::zero(), R::zero())) - o).to_f64() < 1e-9) {
                    next.push(n);
                }
            }
        }
        tiles.extend(next.iter().copied());
        layer = next;
    }
    let _ = writeln!(cv.out, "<g id=\"tiles\">");
    for (k, t) in tiles.iter().enumerate() {
        let style = if k == 0 { "fill=\"none\" stroke=\"#444\" stroke-width=\"1.2\"" } else { "fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.6\"" };
        for i in 0..oct.len() {
            let (p, q) = (t.apply_c(oct[i]), t.apply_c(oct[(i + 1) % oct.len()]));
            cv.arc(f2(p), f2(q), carrier(p, q), style);
        }
    }
    let _ = writeln!(cv.out, "</g>");

    let walker = Walker::new(model);
    for (li, l) in spec.layers.iter().enumerate() {
        let color = l.color.clone().unwrap_or_else(|| PALETTE[li % PALETTE.len()].to_string());
        let style = format!("fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"");
        let _ = writeln!(cv.out, "<g id=\"{}\">", l.system.name);
        for (name, c) in l.system.names.iter().zip(&l.system.classes) {
            let _ = writeln!(cv.out, "<g class=\"curve\" data-name=\"{name}\" data-word=\"{}\">", c.word);
            for ch in chords_of_word(&walker, &c.word)? {
                let (p, q) = ch.endpoints();
                if cabs(p - q).to_f64() < 1e-12 {
                    continue;
                }
                let circle = Geodesic::new(
                    BoundaryPoint::from_unit(ch.frame.u),
                    BoundaryPoint::from_unit(ch.frame.v),
                    1e-14,
                )?
                .circle()
                .map(|(c, r)| (f2(c), r.to_f64()));
                cv.arc(f2(p), f2(q), circle, &style);
            }
            let _ = writeln!(cv.out, "</g>");
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if spec.weierstrass {
        let _ = writeln!(cv.out, "<g id=\"weierstrass\">");
        for &w in &model.weierstrass {
            for z in model.domain_images(w)? {
                let (x, y) = cv.px(z.re.to_f64(), z.im.to_f64());
                let _ = writeln!(cv.out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"black\"/>");
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }
    cv.out.push_str("</svg>\n");
    Ok(cv.out)
}
