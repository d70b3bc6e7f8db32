//! Uniform rectangular partitions of a box domain.
//!
//! Elements are indexed row-major (`j * nx + i`, `i` along x). Edges are
//! enumerated as vertical interior edges, horizontal interior edges, then
//! boundary edges counterclockwise starting at the bottom-left corner.
//!
//! Every edge carries a designated plus element and the unit normal `nu_plus`
//! pointing out of it. On interior edges the plus element is the lower-indexed
//! neighbor, so `nu_plus` points toward the higher-indexed one.

use std::io::Write;

use crate::error::{Error, Result};
use crate::exponent::ExponentField;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        [(self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0]
    }
}

/// The rectangular domain Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain(Rect);

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_min < x_max
            && y_min < y_max;
        if !ok {
            return Err(Error::InvalidDomain { x_min, x_max, y_min, y_max });
        }
        Ok(Self(Rect { x_min, x_max, y_min, y_max }))
    }

    /// `[-1, 1] x [-1, 1]`
    pub fn reference_square() -> Self {
        Self(Rect { x_min: -1.0, x_max: 1.0, y_min: -1.0, y_max: 1.0 })
    }

    pub fn rect(&self) -> &Rect {
        &self.0
    }

    pub fn area(&self) -> f64 {
        self.0.area()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub index: usize,
    pub bounds: Rect,
    pub area: f64,
    pub barycenter: Point,
    /// Diagonal length of the rectangle.
    pub diameter: f64,
    /// Indices of the four edges bounding this element.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub index: usize,
    pub kind: EdgeKind,
    pub endpoints: [Point; 2],
    pub length: f64,
    pub diameter: f64,
    pub plus: usize,
    pub minus: Option<usize>,
    /// Outward unit normal of the plus element.
    pub nu_plus: [f64; 2],
}

impl Edge {
    pub fn is_interior(&self) -> bool {
        self.kind == EdgeKind::Interior
    }

    pub fn midpoint(&self) -> Point {
        let [a, b] = self.endpoints;
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
    }

    /// Penalty weight `h^(-2/p')` with `p` sampled at the edge midpoint.
    pub fn weight(&self, exponent: &ExponentField) -> f64 {
        edge_weight(self, exponent)
    }
}

/// `diam(e)^(-2/p'(x_e))`, constant along the edge.
pub fn edge_weight(edge: &Edge, exponent: &ExponentField) -> f64 {
    let p = exponent.eval(edge.midpoint());
    let p_conj = p / (p - 1.0);
    edge.diameter.powf(-2.0 / p_conj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    domain: Domain,
    nx: usize,
    ny: usize,
    elements: Vec<Element>,
    edges: Vec<Edge>,
    n_interior: usize,
}

impl Mesh {
    pub fn uniform(domain: Domain, nx: usize, ny: usize) -> Result<Self> {
        build_uniform_mesh(domain, nx, ny)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &Element {
        &self.elements[k]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn interior_edges(&self) -> &[Edge] {
        &self.edges[..self.n_interior]
    }

    pub fn boundary_edges(&self) -> &[Edge] {
        &self.edges[self.n_interior..]
    }

    pub fn element_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Write a two-section CSV: elements, then edges.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "element_index,x_min,x_max,y_min,y_max")?;
        for el in &self.elements {
            let r = el.bounds;
            writeln!(w, "{},{:.12e},{:.12e},{:.12e},{:.12e}", el.index, r.x_min, r.x_max, r.y_min, r.y_max)?;
        }
        writeln!(w, "edge_index,kind,plus,minus,length")?;
        for e in &self.edges {
            let kind = match e.kind {
                EdgeKind::Interior => "interior",
                EdgeKind::Boundary => "boundary",
            };
            let minus = e.minus.map(|m| m.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{},{:.12e}", e.index, kind, e.plus, minus, e.length)?;
        }
        Ok(())
    }
}

pub fn build_uniform_mesh(domain: Domain, nx: usize, ny: usize) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidCounts { nx, ny });
    }
    let r = *domain.rect();
    let dx = r.width() / nx as f64;
    let dy = r.height() / ny as f64;
    // Grid lines are computed from the index so the last one lands exactly on the boundary.
    let xs: Vec<f64> = (0..=nx)
        .map(|i| if i == nx { r.x_max } else { r.x_min + i as f64 * dx })
        .collect();
    let ys: Vec<f64> = (0..=ny)
        .map(|j| if j == ny { r.y_max } else { r.y_min + j as f64 * dy })
        .collect();
    let idx = |i: usize, j: usize| j * nx + i;

    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let bounds = Rect { x_min: xs[i], x_max: xs[i + 1], y_min: ys[j], y_max: ys[j + 1] };
            elements.push(Element {
                index: idx(i, j),
                bounds,
                area: bounds.area(),
                barycenter: bounds.center(),
                diameter: bounds.width().hypot(bounds.height()),
                edges: Vec::with_capacity(4),
            });
        }
    }

    let mut edges = Vec::with_capacity(nx * (ny - 1) + ny * (nx - 1) + 2 * (nx + ny));
    let push = |edges: &mut Vec<Edge>, kind, a: Point, b: Point, plus: usize, minus: Option<usize>, nu| {
        let length = (b[0] - a[0]).hypot(b[1] - a[1]);
        let index = edges.len();
        edges.push(Edge { index, kind, endpoints: [a, b], length, diameter: length, plus, minus, nu_plus: nu });
    };

    for j in 0..ny {
        for i in 0..nx - 1 {
            let x = xs[i + 1];
            push(&mut edges, EdgeKind::Interior, [x, ys[j]], [x, ys[j + 1]], idx(i, j), Some(idx(i + 1, j)), [1.0, 0.0]);
        }
    }
    for j in 0..ny - 1 {
        for i in 0..nx {
            let y = ys[j + 1];
            push(&mut edges, EdgeKind::Interior, [xs[i], y], [xs[i + 1], y], idx(i, j), Some(idx(i, j + 1)), [0.0, 1.0]);
        }
    }
    let n_interior = edges.len();
    for i in 0..nx {
        push(&mut edges, EdgeKind::Boundary, [xs[i], r.y_min], [xs[i + 1], r.y_min], idx(i, 0), None, [0.0, -1.0]);
    }
    for j in 0..ny {
        push(&mut edges, EdgeKind::Boundary, [r.x_max, ys[j]], [r.x_max, ys[j + 1]], idx(nx - 1, j), None, [1.0, 0.0]);
    }
    for i in (0..nx).rev() {
        push(&mut edges, EdgeKind::Boundary, [xs[i + 1], r.y_max], [xs[i], r.y_max], idx(i, ny - 1), None, [0.0, 1.0]);
    }
    for j in (0..ny).rev() {
        push(&mut edges, EdgeKind::Boundary, [r.x_min, ys[j + 1]], [r.x_min, ys[j]], idx(0, j), None, [-1.0, 0.0]);
    }

    for e in &edges {
        elements[e.plus].edges.push(e.index);
        if let Some(m) = e.minus {
            elements[m].edges.push(e.index);
        }
    }

    Ok(Mesh { domain, nx, ny, elements, edges, n_interior })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(nx: usize, ny: usize) -> Mesh {
        build_uniform_mesh(Domain::reference_square(), nx, ny).unwrap()
    }

    #[test]
    fn counts_ten_by_ten() {
        let m = square(10, 10);
        assert_eq!(m.n_elements(), 100);
        assert_eq!(m.interior_edges().len(), 180);
        assert_eq!(m.boundary_edges().len(), 40);
    }

    #[test]
    fn single_cell() {
        let m = square(1, 1);
        assert_eq!(m.n_elements(), 1);
        assert!(m.interior_edges().is_empty());
        assert_eq!(m.boundary_edges().len(), 4);
        assert_eq!(m.element(0).edges.len(), 4);
        assert!((m.element(0).diameter - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_cells() {
        let m = square(2, 1);
        assert_eq!(m.n_elements(), 2);
        assert_eq!(m.interior_edges().len(), 1);
        assert_eq!(m.boundary_edges().len(), 6);
        let e = &m.interior_edges()[0];
        assert_eq!(e.length, 2.0);
        assert_eq!(e.diameter, 2.0);
        assert_eq!((e.plus, e.minus), (0, Some(1)));
        assert_eq!(e.nu_plus, [1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Domain::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Domain::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(Domain::new(0.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(matches!(
            build_uniform_mesh(Domain::reference_square(), 0, 3),
            Err(Error::InvalidCounts { .. })
        ));
    }

    #[test]
    fn edge_weights() {
        let p2 = ExponentField::constant(2.0).unwrap();
        let m = square(2, 1);
        assert!((edge_weight(&m.interior_edges()[0], &p2) - 0.5).abs() < 1e-15);
        let fine = square(10, 10);
        assert!((edge_weight(&fine.edges()[0], &p2) - 5.0).abs() < 1e-12);
        let unit = build_uniform_mesh(Domain::new(0.0, 1.0, 0.0, 1.0).unwrap(), 1, 1).unwrap();
        let p = ExponentField::manufactured(0.5).unwrap();
        for e in unit.edges() {
            assert!((edge_weight(e, &p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_normals_point_outward() {
        let m = square(3, 2);
        for e in m.boundary_edges() {
            let c = m.element(e.plus).barycenter;
            let mid = e.midpoint();
            let d = (mid[0] - c[0]) * e.nu_plus[0] + (mid[1] - c[1]) * e.nu_plus[1];
            assert!(d > 0.0);
        }
    }

    #[test]
    fn csv_dump_sections() {
        let m = square(2, 1);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "element_index,x_min,x_max,y_min,y_max");
        assert_eq!(lines[3], "edge_index,kind,plus,minus,length");
        assert!(lines[4].starts_with("0,interior,0,1,"));
        assert!(lines[5].starts_with("1,boundary,0,,"));
        assert_eq!(lines.len(), 3 + 1 + 7);
    }
}
