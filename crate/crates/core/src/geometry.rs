//! Planar convex geometry kernel.
//!
//! Everything here works on `f64` meters. Polygons are stored as
//! counterclockwise vertex lists; the empty polygon (no vertices) is an
//! ordinary value so that a chain of clips can end in "nothing left"
//! without an error path. Polygons with one or two vertices are
//! representable and reported as degenerate.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Vertex dedup and convexity tolerance (m).
pub const GEOM_TOL: f64 = 1e-9;

/// Polygons with area at or below this are treated as degenerate (m²).
pub const MIN_AREA: f64 = 1e-12;

// Points within this distance outside a clipping line are kept, which makes
// repeated clipping by the same half-plane a no-op.
const CLIP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate polygon: area {area:.3e} m^2 is not above {MIN_AREA:.0e}")]
    DegeneratePolygon { area: f64 },
    #[error("degenerate hull with {vertices} effective vertices (need at least 3)")]
    DegenerateHull { vertices: usize },
    #[error("half-plane normal has zero length")]
    ZeroNormal,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("vertex list is not convex (turn {cross:.3e} at vertex {index})")]
    NotConvex { index: usize, cross: f64 },
}

/// A point (or a displacement) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Free vectors share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self / n)
    }

    /// Rescales the vector so that its norm does not exceed `max_norm`.
    pub fn clamp_norm(self, max_norm: f64) -> Self {
        let n = self.norm();
        if n > max_norm && n > 0.0 {
            self * (max_norm / n)
        } else {
            self
        }
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }
}

impl Add for Point2 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point2 {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.x / s, self.y / s)
    }
}

/// Closed half-plane `normal · p <= offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Vec2, offset: f64) -> Result<Self, GeometryError> {
        if !normal.is_finite() || !offset.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if normal.norm() <= 0.0 {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    /// Half-plane whose boundary passes through `point` with the given
    /// outward normal.
    pub fn through(point: Point2, outward: Vec2) -> Result<Self, GeometryError> {
        Self::new(outward, outward.dot(point))
    }

    /// `normal · p - offset`; non-positive inside.
    #[inline]
    pub fn value(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Signed metric distance from `p` to the boundary, positive inside.
    #[inline]
    pub fn slack(&self, p: Point2) -> f64 {
        -self.value(p) / self.normal.norm()
    }

    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        self.slack(p) >= -GEOM_TOL
    }

    /// Same half-plane with a unit normal.
    pub fn normalized(&self) -> Self {
        let n = self.normal.norm();
        Self {
            normal: self.normal / n,
            offset: self.offset / n,
        }
    }

    /// Moves the boundary inward by `distance` meters.
    pub fn retracted(&self, distance: f64) -> Self {
        Self {
            normal: self.normal,
            offset: self.offset - distance * self.normal.norm(),
        }
    }
}

/// Convex polygon with counterclockwise vertices. May be empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates a vertex list: finite, convex, either orientation (stored
    /// counterclockwise), near-duplicate vertices merged.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut vertices = dedup_ring(vertices);
        if signed_area_of(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        if n >= 3 {
            for i in 0..n {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                let cross = (b - a).cross(c - b);
                if cross < -GEOM_TOL {
                    return Err(GeometryError::NotConvex {
                        index: (i + 1) % n,
                        cross,
                    });
                }
            }
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rectangle(min: Point2, max: Point2) -> Self {
        if !(max.x > min.x && max.y > min.y) {
            return Self::empty();
        }
        Self {
            vertices: vec![min, Point2::new(max.x, min.y), max, Point2::new(min.x, max.y)],
        }
    }

    /// Square of half-width `half` centred on `center`.
    pub fn square(center: Point2, half: f64) -> Self {
        let d = Point2::new(half, half);
        Self::rectangle(center - d, center + d)
    }

    /// Regular `sides`-gon with circumradius `radius`, first vertex at angle
    /// `phase` (rad).
    pub fn regular(center: Point2, radius: f64, sides: usize, phase: f64) -> Self {
        let sides = sides.max(3);
        let vertices = (0..sides)
            .map(|k| {
                let ang = phase + std::f64::consts::TAU * k as f64 / sides as f64;
                center + Point2::new(ang.cos(), ang.sin()) * radius
            })
            .collect();
        Self { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Fewer than three vertices or (numerically) zero area.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3 || self.area() <= MIN_AREA
    }

    pub fn area(&self) -> f64 {
        signed_area_of(&self.vertices).abs()
    }

    /// Directed edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Outward edge half-planes; their intersection is the polygon.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        if self.vertices.len() < 3 {
            return Vec::new();
        }
        self.edges()
            .filter_map(|(a, b)| {
                let outward = Vec2::new(b.y - a.y, a.x - b.x);
                HalfPlane::through(a, outward).ok()
            })
            .collect()
    }

    /// Closed containment with tolerance [`GEOM_TOL`].
    pub fn contains(&self, p: Point2) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0].distance(p) <= GEOM_TOL,
            2 => point_segment_distance(p, self.vertices[0], self.vertices[1]) <= GEOM_TOL,
            _ => self.edges().all(|(a, b)| edge_slack(a, b, p) >= -GEOM_TOL),
        }
    }

    /// Interior membership: every edge at least `margin` away.
    pub fn strictly_contains(&self, p: Point2, margin: f64) -> bool {
        self.vertices.len() >= 3 && self.edges().all(|(a, b)| edge_slack(a, b, p) > margin)
    }

    pub fn translated(&self, offset: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }
}

/// Metric distance of `p` to the left of the directed edge `a → b`.
fn edge_slack(a: Point2, b: Point2, p: Point2) -> f64 {
    let e = b - a;
    let len = e.norm();
    if len == 0.0 {
        return -p.distance(a);
    }
    e.cross(p - a) / len
}

fn signed_area_of(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let o = vertices[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (vertices[i] - o).cross(vertices[i + 1] - o);
    }
    0.5 * twice
}

/// Drops consecutive near-duplicates (including across the wrap).
fn dedup_ring(mut vertices: Vec<Point2>) -> Vec<Point2> {
    vertices.dedup_by(|b, a| a.distance(*b) <= GEOM_TOL);
    while vertices.len() > 1 && vertices[0].distance(vertices[vertices.len() - 1]) <= GEOM_TOL {
        vertices.pop();
    }
    vertices
}

/// Removes vertices that do not turn.
fn drop_collinear(vertices: Vec<Point2>) -> Vec<Point2> {
    let mut out = vertices;
    loop {
        let n = out.len();
        if n < 3 {
            return out;
        }
        let mut removed = false;
        let mut i = 0;
        while i < out.len() && out.len() >= 3 {
            let n = out.len();
            let a = out[(i + n - 1) % n];
            let b = out[i];
            let c = out[(i + 1) % n];
            let (ab, bc) = (b - a, c - b);
            if ab.cross(bc).abs() <= 1e-12 * ab.norm() * bc.norm() {
                out.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            return out;
        }
    }
}

/// Intersection of a convex polygon with a half-plane.
///
/// Vertices within 1e-12 m outside the boundary are kept. Results with
/// fewer than three vertices collapse to the empty polygon.
pub fn clip_halfplane(poly: &ConvexPolygon, h: &HalfPlane) -> ConvexPolygon {
    let verts = poly.vertices();
    let n = verts.len();
    if n == 0 {
        return ConvexPolygon::empty();
    }
    let tol = CLIP_TOL * h.normal.norm();
    let values: Vec<f64> = verts.iter().map(|&v| h.value(v)).collect();
    if values.iter().all(|&v| v <= tol) {
        return poly.clone();
    }
    if values.iter().all(|&v| v > tol) {
        return ConvexPolygon::empty();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (verts[i], verts[j]);
        let (va, vb) = (values[i], values[j]);
        let a_in = va <= tol;
        let b_in = vb <= tol;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            let t = va / (va - vb);
            out.push(a + (b - a) * t.clamp(0.0, 1.0));
        }
    }
    let out = drop_collinear(dedup_ring(out));
    if out.len() < 3 {
        ConvexPolygon::empty()
    } else {
        ConvexPolygon { vertices: out }
    }
}

/// Area and centroid of a polygon of unit density.
pub fn polygon_mass_centroid(poly: &ConvexPolygon) -> Result<(f64, Point2), GeometryError> {
    let v = poly.vertices();
    let area = poly.area();
    if v.len() < 3 || area <= MIN_AREA {
        return Err(GeometryError::DegeneratePolygon { area });
    }
    let o = v[0];
    let mut twice_area = 0.0;
    let mut moment = Point2::ZERO;
    for i in 1..v.len() - 1 {
        let (b, c) = (v[i] - o, v[i + 1] - o);
        let cr = b.cross(c);
        twice_area += cr;
        moment += (b + c) * cr;
    }
    let centroid = o + moment / (3.0 * twice_area);
    Ok((0.5 * twice_area.abs(), centroid))
}

/// Polar second moment `∫_poly ‖q − p‖² dq` by fan triangulation.
pub fn polygon_second_moment(poly: &ConvexPolygon, p: Point2) -> Result<f64, GeometryError> {
    let v = poly.vertices();
    let area = poly.area();
    if v.len() < 3 || area <= MIN_AREA {
        return Err(GeometryError::DegeneratePolygon { area });
    }
    let a = v[0] - p;
    let mut total = 0.0;
    for i in 1..v.len() - 1 {
        let (b, c) = (v[i] - p, v[i + 1] - p);
        let tri_area = 0.5 * (b - a).cross(c - a);
        let s = a.norm_sq() + b.norm_sq() + c.norm_sq() + a.dot(b) + b.dot(c) + c.dot(a);
        total += tri_area * s / 6.0;
    }
    Ok(total.abs())
}

/// Convex hull by monotone chain. Collinear points are dropped; one or two
/// surviving vertices give a degenerate hull.
pub fn convex_hull(points: &[Point2]) -> ConvexPolygon {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|b, a| a.distance(*b) <= GEOM_TOL);
    if pts.len() <= 2 {
        return ConvexPolygon { vertices: pts };
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    ConvexPolygon {
        vertices: dedup_ring(hull),
    }
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    p.distance(closest_point_on_segment(p, a, b))
}

pub fn closest_point_on_segment(p: Point2, a: Point2, b: Point2) -> Point2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}

/// Euclidean projection of `p` onto `poly`; `None` when `poly` is empty.
pub fn closest_point_convex(p: Point2, poly: &ConvexPolygon) -> Option<Point2> {
    match poly.len() {
        0 => None,
        1 => Some(poly.vertices[0]),
        _ if dist_point_convex(p, poly) == 0.0 => Some(p),
        _ => poly
            .edges()
            .map(|(a, b)| closest_point_on_segment(p, a, b))
            .min_by(|x, y| x.distance(p).total_cmp(&y.distance(p))),
    }
}

fn boundary_distance(poly: &ConvexPolygon, p: Point2) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => p.distance(poly.vertices[0]),
        _ => poly
            .edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Signed distance to the hull boundary: negative strictly inside, zero on
/// the boundary, positive outside.
pub fn signed_hull_distance(hull: &ConvexPolygon, p: Point2) -> Result<f64, GeometryError> {
    if hull.is_degenerate() {
        return Err(GeometryError::DegenerateHull { vertices: hull.len() });
    }
    let d = boundary_distance(hull, p);
    if d == 0.0 {
        return Ok(0.0);
    }
    let inside = hull.edges().all(|(a, b)| (b - a).cross(p - a) >= 0.0);
    Ok(if inside { -d } else { d })
}

/// Euclidean distance from `p` to the polygon (zero inside).
pub fn dist_point_convex(p: Point2, poly: &ConvexPolygon) -> f64 {
    if poly.len() >= 3 && poly.edges().all(|(a, b)| (b - a).cross(p - a) >= 0.0) {
        return 0.0;
    }
    boundary_distance(poly, p)
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection test.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Minimum distance between two convex polygons; zero when they touch or
/// overlap. Infinite if either is empty.
pub fn polytope_min_distance(a: &ConvexPolygon, b: &ConvexPolygon) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let inside = |poly: &ConvexPolygon, p: Point2| {
        poly.len() >= 3 && poly.edges().all(|(s, e)| (e - s).cross(p - s) >= 0.0)
    };
    if a.vertices.iter().any(|&v| inside(b, v)) || b.vertices.iter().any(|&v| inside(a, v)) {
        return 0.0;
    }
    let edges = |poly: &ConvexPolygon| -> Vec<(Point2, Point2)> {
        if poly.len() == 1 {
            vec![(poly.vertices[0], poly.vertices[0])]
        } else {
            poly.edges().collect()
        }
    };
    let (ea, eb) = (edges(a), edges(b));
    for &(p, q) in &ea {
        for &(r, s) in &eb {
            if segments_intersect(p, q, r, s) {
                return 0.0;
            }
        }
    }
    let mut best = f64::INFINITY;
    for &v in &a.vertices {
        for &(r, s) in &eb {
            best = best.min(point_segment_distance(v, r, s));
        }
    }
    for &v in &b.vertices {
        for &(p, q) in &ea {
            best = best.min(point_segment_distance(v, p, q));
        }
    }
    best
}
