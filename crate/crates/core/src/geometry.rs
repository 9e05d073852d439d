//! Planar primitives for the `(β1, β2)` plane.

use serde::{Deserialize, Serialize};

/// Orientation slack for hull construction.
pub const TOL_ORIENT: f64 = 1e-12;
/// Boundary slack for point-in-polygon tests; the boundary counts as inside.
pub const TOL_INSIDE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub beta1: f64,
    pub beta2: f64,
}

impl Point2 {
    pub const fn new(beta1: f64, beta2: f64) -> Self {
        Point2 { beta1, beta2 }
    }

    /// Image under `β1 -> -β1`.
    pub fn reflect(self) -> Self {
        Point2::new(-self.beta1, self.beta2)
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.beta1 * o.beta1 + self.beta2 * o.beta2
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.beta1.is_finite() && self.beta2.is_finite()
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.beta1 - o.beta1, self.beta2 - o.beta2)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.beta1 + o.beta1, self.beta2 + o.beta2)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.beta1 * s, self.beta2 * s)
    }
}

/// `(b - a) × (c - a)`; positive for a left turn.
pub fn cross(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.beta1 - a.beta1) * (c.beta2 - a.beta2) - (b.beta2 - a.beta2) * (c.beta1 - a.beta1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    /// Counterclockwise, no repeated closing vertex.
    pub vertices: Vec<Point2>,
    /// Input was collinear (or had fewer than three distinct points); the
    /// vertices then describe a segment or a single point.
    pub degenerate: bool,
}

/// Andrew's monotone chain. Points within `TOL_ORIENT` of an edge are
/// dropped.
pub fn convex_hull(points: &[Point2]) -> Hull {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.beta1.total_cmp(&b.beta1).then(a.beta2.total_cmp(&b.beta2)));
    pts.dedup();
    if pts.len() < 3 {
        return Hull {
            vertices: pts,
            degenerate: true,
        };
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= TOL_ORIENT {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= TOL_ORIENT {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let degenerate = lower.len() < 3;
    Hull {
        vertices: lower,
        degenerate,
    }
}

/// Shoelace area; positive for counterclockwise order.
pub fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross(Point2::default(), poly[i], poly[(i + 1) % n])).sum::<f64>() / 2.0
}

pub fn area(poly: &[Point2]) -> f64 {
    signed_area(poly).abs()
}

/// Signed distance from the line through `a`, `b` (positive on the left).
fn edge_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let len = a.distance(b);
    if len == 0.0 {
        return -p.distance(a);
    }
    cross(a, b, p) / len
}

/// `p` lies in the counterclockwise convex polygon, allowing it to sit up to
/// `tol` outside any edge. A negative `tol` shrinks the polygon.
pub fn point_in_convex_polygon(poly: &[Point2], p: Point2, tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => p.distance(poly[0]) <= tol,
        n => (0..n).all(|i| edge_distance(poly[i], poly[(i + 1) % n], p) >= -tol),
    }
}

/// Largest distance by which `p` violates any edge of the polygon; `<= 0`
/// means inside.
pub fn outside_distance(poly: &[Point2], p: Point2) -> f64 {
    let n = poly.len();
    (0..n).map(|i| -edge_distance(poly[i], poly[(i + 1) % n], p)).fold(f64::NEG_INFINITY, f64::max)
}

/// Nearest point of the polygon boundary to `p`.
pub fn nearest_boundary_point(poly: &[Point2], p: Point2) -> Point2 {
    let n = poly.len();
    let mut best = poly[0];
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let ab = b - a;
        let len2 = ab.dot(ab);
        let t = if len2 == 0.0 { 0.0 } else { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) };
        let q = a + ab * t;
        let d = q.distance(p);
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

/// Sutherland–Hodgman: `subject` clipped against the convex counterclockwise
/// polygon `clip`.
pub fn clip_polygon(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut output = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if output.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % n]);
        let input = std::mem::take(&mut output);
        let m = input.len();
        for k in 0..m {
            let cur = input[k];
            let prev = input[(k + m - 1) % m];
            let cur_in = cross(a, b, cur) >= 0.0;
            let prev_in = cross(a, b, prev) >= 0.0;
            if cur_in {
                if !prev_in {
                    output.push(intersect(prev, cur, a, b));
                }
                output.push(cur);
            } else if prev_in {
                output.push(intersect(prev, cur, a, b));
            }
        }
    }
    output
}

fn intersect(p: Point2, q: Point2, a: Point2, b: Point2) -> Point2 {
    let d1 = cross(a, b, p);
    let d2 = cross(a, b, q);
    let t = d1 / (d1 - d2);
    p + (q - p) * t
}

/// Drops vertices closer than `tol` to their predecessor and collinear
/// interior vertices.
pub fn simplify(poly: &[Point2], tol: f64) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(poly.len());
    for &p in poly {
        if out.last().is_none_or(|q: &Point2| q.distance(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].distance(*out.last().unwrap()) <= tol {
        out.pop();
    }
    let mut changed = true;
    while changed && out.len() > 3 {
        changed = false;
        for i in 0..out.len() {
            let n = out.len();
            let (a, b, c) = (out[(i + n - 1) % n], out[i], out[(i + 1) % n]);
            if edge_distance(a, c, b).abs() <= tol {
                out.remove(i);
                changed = true;
                break;
            }
        }
    }
    out
}

/// Hausdorff-style vertex match: every vertex of `a` is within `tol` of some
/// vertex of `b` and vice versa.
pub fn same_vertex_set(a: &[Point2], b: &[Point2], tol: f64) -> bool {
    let covered = |x: &[Point2], y: &[Point2]| x.iter().all(|p| y.iter().any(|q| p.distance(*q) <= tol));
    covered(a, b) && covered(b, a)
}
