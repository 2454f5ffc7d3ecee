//! Arrangements of simple curve systems on the surface: vertices are crossing points,
//! edges are the geodesic segments between them, and faces are traced from the rotation
//! system (counterclockwise order of edge-ends at each vertex).

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::Serialize;

use crate::crossings::{chord_crossing_heights, chords_of_word, Chord};
use crate::error::{Error, Result};
use crate::hyp::{arg, cabs, direction_on, C};
use crate::model::Bolza;
use crate::real::Real;
use crate::spectrum::CurveClass;
use crate::systems::CurveSystem;
use crate::walk::Walker;
use crate::word::min_rotation;

#[derive(Debug, Clone, Serialize)]
pub struct GraphVertex {
    /// Representative in the closed fundamental octagon.
    pub point: (f64, f64),
    pub weierstrass: Option<usize>,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Name of the member carrying the edge.
    pub carrier: String,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Corner {
    pub vertex: usize,
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Face {
    /// Half-edges in boundary order; half-edge `2e` runs along edge `e`, `2e + 1` against it.
    pub half_edges: Vec<usize>,
    pub corners: Vec<Corner>,
    /// Gauss-Bonnet area of the face as a disc: `(n - 2) pi - sum of angles`.
    pub area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceGraph {
    pub system: String,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub faces: Vec<Face>,
    /// Outgoing direction of every half-edge at its vertex, in radians.
    pub half_edge_angles: Vec<f64>,
}

impl SurfaceGraph {
    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn total_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    /// Largest deviation of a vertex's corner-angle sum from `2 pi`.
    pub fn angle_defect(&self) -> f64 {
        let mut sums = vec![0.0; self.vertices.len()];
        for c in self.faces.iter().flat_map(|f| &f.corners) {
            sums[c.vertex] += c.angle;
        }
        sums.iter().map(|s| (s - TAU).abs()).fold(0.0, f64::max)
    }

    /// Abstract graph in Graphviz DOT syntax.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph \"{}\" {{\n", self.system);
        for (i, v) in self.vertices.iter().enumerate() {
            let label = match v.weierstrass {
                Some(w) => format!("v{i} (w{w})"),
                None => format!("v{i}"),
            };
            let _ = writeln!(s, "  v{i} [label=\"{label}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.from, e.to, e.carrier);
        }
        s.push_str("}\n");
        s
    }
}

/// A passage of a member through a vertex.
#[derive(Debug, Clone, Copy)]
struct Event {
    param: f64,
    vertex: usize,
    /// Forward direction of the member at the vertex, in the vertex's chart.
    angle: f64,
}

struct Builder<'a, R: Real> {
    model: &'a Bolza<R>,
    points: Vec<C<R>>,
}

impl<R: Real> Builder<'_, R> {
    fn vertex_of(&mut self, z: C<R>) -> Result<(usize, C<R>)> {
        let tol = self.model.cfg.tol.vertex;
        let (w, g) = self.model.canonical_in_domain(z);
        for (i, &p) in self.points.iter().enumerate() {
            let d = self.model.quotient_distance(p, w)?.to_f64();
            if d < tol {
                if cabs(p - w).to_f64() > tol {
                    return Err(Error::Precision(format!("vertex at ({:.6}, {:.6}) has two representatives", p.re.to_f64(), p.im.to_f64())));
                }
                return Ok((i, g.derivative(z)));
            }
            if d < 100.0 * tol {
                return Err(Error::Precision(format!("vertex merge ambiguous at distance {d:e}")));
            }
        }
        self.points.push(w);
        Ok((self.points.len() - 1, g.derivative(z)))
    }
}

/// Arclength offsets of the chords along their curve.
fn chord_offsets<R: Real>(ch: &[Chord<R>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ch.len());
    let mut s = 0.0;
    for c in ch {
        out.push(s);
        s += 0.5 * (c.y2_out / c.y2_in).to_f64().ln();
    }
    out
}

fn param<R: Real>(offset: f64, c: &Chord<R>, y2: R) -> f64 {
    offset + 0.5 * (y2 / c.y2_in).to_f64().ln()
}

fn norm_angle(a: f64) -> f64 {
    let t = a.rem_euclid(TAU);
    if TAU - t < 1e-12 {
        0.0
    } else {
        t
    }
}

/// Vertices, edges and angles of the arrangement, before faces are traced.
fn skeleton<R: Real>(model: &Bolza<R>, s: &CurveSystem) -> Result<(SurfaceGraph, Vec<usize>)> {
    for c in &s.classes {
        if !c.simple {
            return Err(Error::Domain(format!("{} is not simple", c.word)));
        }
    }
    let walker = Walker::new(model);
    let chords: Vec<Vec<Chord<R>>> = s.classes.iter().map(|c| chords_of_word(&walker, &c.word)).collect::<Result<_>>()?;
    let offsets: Vec<Vec<f64>> = chords.iter().map(|c| chord_offsets(c)).collect();
    let lengths: Vec<f64> = s.classes.iter().map(|c| c.length).collect();
    let tol = model.cfg.tol.merge;
    let mut b = Builder { model, points: Vec::new() };
    let mut events: Vec<Vec<Event>> = vec![Vec::new(); s.len()];
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for (ka, ca) in chords[i].iter().enumerate() {
                for (kb, cb) in chords[j].iter().enumerate() {
                    let Some((z, ya, yb)) = chord_crossing_heights(ca, cb, tol) else { continue };
                    let (v, dg) = b.vertex_of(z)?;
                    let da = arg(dg * direction_on(ca.frame.u, ca.frame.v, z)).to_f64();
                    let db = arg(dg * direction_on(cb.frame.u, cb.frame.v, z)).to_f64();
                    events[i].push(Event { param: param(offsets[i][ka], ca, ya), vertex: v, angle: norm_angle(da) });
                    events[j].push(Event { param: param(offsets[j][kb], cb, yb), vertex: v, angle: norm_angle(db) });
                }
            }
        }
    }
    // One event per passage: the same passage is seen from each partner through the vertex
    // and from both tiles when the vertex sits on the octagon boundary.
    let ptol = 1e3 * model.cfg.tol.vertex.max(1e-9);
    let mut edges = Vec::new();
    let mut angles = Vec::new();
    let mut lonely = Vec::new();
    for (i, ev) in events.iter_mut().enumerate() {
        let len = lengths[i];
        for e in ev.iter_mut() {
            e.param = e.param.rem_euclid(len);
            if len - e.param < ptol {
                e.param = 0.0;
            }
        }
        ev.sort_by(|a, b| a.param.total_cmp(&b.param));
        let mut passes: Vec<Event> = Vec::new();
        for e in ev.iter() {
            match passes.iter().find(|p| (p.param - e.param).abs() < ptol) {
                Some(p) if p.vertex == e.vertex => {}
                Some(_) => return Err(Error::Precision(format!("{}: two vertices at one point", s.names[i]))),
                None => passes.push(*e),
            }
        }
        if passes.is_empty() {
            lonely.push(i);
            continue;
        }
        for k in 0..passes.len() {
            let (p, q) = (passes[k], passes[(k + 1) % passes.len()]);
            let mut l = q.param - p.param;
            if l <= 0.0 {
                l += len;
            }
            edges.push(GraphEdge { from: p.vertex, to: q.vertex, carrier: s.names[i].clone(), length: l });
            angles.push(p.angle);
            angles.push(norm_angle(q.angle + PI));
        }
    }
    let mut vertices: Vec<GraphVertex> = b
        .points
        .iter()
        .map(|&p| {
            Ok(GraphVertex {
                point: (p.re.to_f64(), p.im.to_f64()),
                weierstrass: model.weierstrass_index(p, model.cfg.tol.vertex)?,
                degree: 0,
            })
        })
        .collect::<Result<_>>()?;
    for e in &edges {
        vertices[e.from].degree += 1;
        vertices[e.to].degree += 1;
    }
    Ok((SurfaceGraph { system: s.name.clone(), vertices, edges, faces: Vec::new(), half_edge_angles: angles }, lonely))
}

fn half_edge_vertex(g: &SurfaceGraph, h: usize) -> usize {
    let e = &g.edges[h / 2];
    if h.is_multiple_of(2) {
        e.from
    } else {
        e.to
    }
}

/// Boundary cycles of the complementary regions, each traced with the region on its left.
fn trace_faces(g: &mut SurfaceGraph) -> Result<()> {
    let n = g.half_edge_angles.len();
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
    for h in 0..n {
        around[half_edge_vertex(g, h)].push(h);
    }
    // Position of each half-edge in the counterclockwise order at its vertex.
    let mut pos = vec![0; n];
    for hs in &mut around {
        hs.sort_by(|&a, &b| g.half_edge_angles[a].total_cmp(&g.half_edge_angles[b]));
        for w in 0..hs.len() {
            let (a, b) = (hs[w], hs[(w + 1) % hs.len()]);
            let gap = norm_angle(g.half_edge_angles[b] - g.half_edge_angles[a]);
            if hs.len() > 1 && (gap < 1e-9 || TAU - gap < 1e-9) {
                return Err(Error::Precision(format!("two edges leave vertex {} in the same direction", half_edge_vertex(g, a))));
            }
        }
        for (k, &h) in hs.iter().enumerate() {
            pos[h] = k;
        }
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut face = Face { half_edges: Vec::new(), corners: Vec::new(), area: 0.0 };
        let mut h = start;
        loop {
            if seen[h] {
                return Err(Error::Topology("face traversal revisited a half-edge".into()));
            }
            seen[h] = true;
            face.half_edges.push(h);
            // Arrive at the far end and turn to the first edge clockwise from the way back.
            let back = h ^ 1;
            let v = half_edge_vertex(g, back);
            let hs = &around[v];
            let next = hs[(pos[back] + hs.len() - 1) % hs.len()];
            let angle = if next == back { TAU } else { norm_angle(g.half_edge_angles[back] - g.half_edge_angles[next]) };
            face.corners.push(Corner { vertex: v, angle });
            h = next;
            if h == start {
                break;
            }
        }
        let k = face.corners.len() as f64;
        face.area = (k - 2.0) * PI - face.corners.iter().map(|c| c.angle).sum::<f64>();
        g.faces.push(face);
    }
    Ok(())
}

/// Arrangement of a system of simple closed geodesics, checked to be a cellular embedding:
/// Euler characteristic -2, full angle at every vertex and total area `4 pi`.
pub fn build_arrangement<R: Real>(model: &Bolza<R>, s: &CurveSystem) -> Result<SurfaceGraph> {
    let (mut g, lonely) = skeleton(model, s)?;
    if g.vertices.is_empty() {
        return Err(Error::Construction(format!("{} has no crossings", s.name)));
    }
    if let Some(&i) = lonely.first() {
        return Err(Error::Construction(format!("{} meets no other member", s.names[i])));
    }
    trace_faces(&mut g)?;
    if g.euler() != -2 {
        return Err(Error::Construction(format!("{}: V - E + F = {}, complementary regions are not all discs", s.name, g.euler())));
    }
    let tol = 1e-6;
    if g.angle_defect() > tol {
        return Err(Error::Construction(format!("{}: angle sum off by {:e} at a vertex", s.name, g.angle_defect())));
    }
    if (g.total_area() - 4.0 * PI).abs() > tol {
        return Err(Error::Construction(format!("{}: total area {} differs from 4 pi", s.name, g.total_area())));
    }
    Ok(g)
}

/// Whether every complementary region of the system is a disc.
pub fn is_filling<R: Real>(model: &Bolza<R>, s: &CurveSystem) -> Result<bool> {
    let (mut g, lonely) = skeleton(model, s)?;
    if g.vertices.is_empty() || !lonely.is_empty() {
        return Ok(false);
    }
    trace_faces(&mut g)?;
    // A region of genus h with b boundary cycles contributes 2 - 2h - b to the Euler
    // characteristic, so counting cycles as faces overshoots -2 unless all are discs.
    Ok(g.euler() == -2)
}

/// Face types by corner angles snapped to `pi / p`.
#[derive(Debug, Clone, Serialize)]
pub struct FaceCensus {
    /// Signature (the `p` values, largest first) with its face count.
    pub entries: Vec<(Vec<u32>, usize)>,
    pub unclassified: usize,
    pub triangulation: bool,
}

impl FaceCensus {
    pub fn count(&self, sig: &[u32]) -> usize {
        self.entries.iter().find(|e| e.0 == sig).map_or(0, |e| e.1)
    }

    pub fn faces(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum::<usize>() + self.unclassified
    }
}

pub fn signature_string(sig: &[u32]) -> String {
    let parts: Vec<String> = sig.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(","))
}

fn snap_angle(a: f64) -> Option<u32> {
    (2..=12).find(|&p| (a - PI / p as f64).abs() < 1e-6)
}

pub fn face_census(g: &SurfaceGraph) -> FaceCensus {
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut unclassified = 0;
    for f in &g.faces {
        match f.corners.iter().map(|c| snap_angle(c.angle)).collect::<Option<Vec<u32>>>() {
            Some(mut sig) => {
                sig.sort_unstable_by(|a, b| b.cmp(a));
                *counts.entry(sig).or_default() += 1;
            }
            None => unclassified += 1,
        }
    }
    let triangulation = !g.faces.is_empty() && g.faces.iter().all(|f| f.corners.len() == 3);
    FaceCensus { entries: counts.into_iter().collect(), unclassified, triangulation }
}

/// Weierstrass points (indices into the model's list) lying on a closed geodesic.
pub fn weierstrass_points_on<R: Real>(model: &Bolza<R>, c: &CurveClass) -> Result<Vec<usize>> {
    let walker = Walker::new(model);
    let chords = chords_of_word(&walker, &c.word)?;
    let tol = model.cfg.tol.vertex;
    let mut reps: Vec<(usize, C<R>)> = Vec::new();
    for (i, &w) in model.weierstrass.iter().enumerate() {
        for z in model.domain_images(w)? {
            reps.push((i, z));
        }
    }
    let mut out = Vec::new();
    for ch in &chords {
        for &(i, z) in &reps {
            let h = ch.frame.to_h(z);
            let y2 = h.norm_sqr();
            let on_line = (h.re.abs() / y2.sqrt()).to_f64() < tol;
            let t = R::from_f64(tol);
            if on_line && y2 >= ch.y2_in * (R::one() - t) && y2 <= ch.y2_out * (R::one() + t) && !out.contains(&i) {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Action of the hyperelliptic involution on a simple class.
#[derive(Debug, Clone, Serialize)]
pub struct InvolutionRecord {
    pub word: String,
    /// The image is the same unoriented class.
    pub fixed: bool,
    /// The image is the same oriented class.
    pub orientation_preserved: bool,
    pub separating: bool,
}

pub fn involution_check<R: Real>(model: &Bolza<R>, c: &CurveClass) -> Result<InvolutionRecord> {
    if !c.simple {
        return Err(Error::Domain(format!("{} is not simple", c.word)));
    }
    let walker = Walker::new(model);
    let image = model.inv_word(&c.word);
    let fixed = walker.conjugacy_key(&image)?.word == walker.conjugacy_key(&c.word)?.word;
    // Oriented cutting sequences agree up to rotation exactly for oriented conjugates.
    let a = walker.walk(&c.word)?;
    let b = walker.walk(&image)?;
    let orientation_preserved = min_rotation(&a.letters) == min_rotation(&b.letters);
    Ok(InvolutionRecord { word: c.word.to_string(), fixed, orientation_preserved, separating: c.word.abelianize() == [0; 4] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::systems::Systems;
    use std::sync::OnceLock;

    fn model() -> &'static Bolza<f64> {
        static M: OnceLock<Bolza<f64>> = OnceLock::new();
        M.get_or_init(|| Bolza::new(Config::default()).unwrap())
    }

    fn systems() -> &'static Systems {
        static S: OnceLock<Systems> = OnceLock::new();
        S.get_or_init(|| Systems::load(model()).unwrap())
    }

    #[test]
    fn systolic_triangulation() {
        let g = build_arrangement(model(), &systems().sys).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len(), g.faces.len()), (6, 24, 16));
        assert!(g.vertices.iter().all(|v| v.weierstrass.is_some() && v.degree == 8));
        let census = face_census(&g);
        assert_eq!(census.count(&[4, 4, 4]), 16);
        assert!(census.triangulation);
        for f in &g.faces {
            assert!((f.area - PI / 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn second_systolic_triangulation() {
        let g = build_arrangement(model(), &systems().second).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len(), g.faces.len()), (22, 72, 48));
        let census = face_census(&g);
        assert_eq!(census.count(&[4, 3, 3]), 48);
        let by_degree = g.vertices.iter().fold(BTreeMap::new(), |mut m, v| {
            *m.entry(v.degree).or_insert(0) += 1;
            m
        });
        assert_eq!(by_degree, BTreeMap::from([(6, 16), (8, 6)]));
    }

    #[test]
    fn first_quadruple_cuts_right_angled_octagons() {
        let g = build_arrangement(model(), &systems().omega1).unwrap();
        let census = face_census(&g);
        assert_eq!(census.entries, vec![(vec![2; 8], 2)]);
        assert_eq!((g.vertices.len(), g.edges.len()), (4, 8));
    }

    #[test]
    fn filling() {
        let m = model();
        let s = systems();
        assert!(is_filling(m, &s.omega1).unwrap());
        assert!(is_filling(m, &s.sys).unwrap());
        assert!(!is_filling(m, &s.omega1.subset("ab", &["a", "b"]).unwrap()).unwrap());
        assert!(build_arrangement(m, &s.omega1.subset("a", &["a"]).unwrap()).is_err());
    }

    #[test]
    fn second_systoles_pass_two_weierstrass_points() {
        let m = model();
        for c in &systems().second.classes {
            assert_eq!(weierstrass_points_on(m, c).unwrap().len(), 2, "{}", c.word);
        }
        for c in &systems().sys.classes {
            assert_eq!(weierstrass_points_on(m, c).unwrap().len(), 2, "{}", c.word);
        }
    }

    #[test]
    fn involution_fixes_simple_classes() {
        let m = model();
        for c in systems().sys.classes.iter().chain(&systems().second.classes) {
            let r = involution_check(m, c).unwrap();
            assert!(r.fixed && !r.orientation_preserved && !r.separating, "{r:?}");
        }
    }

    #[test]
    fn dot_export_lists_every_edge() {
        let g = build_arrangement(model(), &systems().sys).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 24);
        assert!(dot.starts_with("graph \"sys\""));
    }

    #[test]
    fn involution_theorem_to_length_eight() {
        let m = model();
        let e = crate::spectrum::enumerate_classes(m, 8.0, Default::default()).unwrap();
        let mut separating = 0;
        for c in e.classes.iter().filter(|c| c.simple) {
            let r = involution_check(m, c).unwrap();
            assert!(r.fixed, "{r:?}");
            assert_eq!(r.orientation_preserved, r.separating, "{r:?}");
            separating += r.separating as usize;
        }
        assert!(separating > 0);
    }
}
