//! Lattice polygons in the plane: chart restriction, Minkowski sums, areas
//! and the two-dimensional mixed volume.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{BoundaryError, Face, NewtonBoundary};
use crate::lattice::{Axis, ExponentVector, Rational};
use crate::parser::{Coefficient, Support};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixedVolumeError {
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("face {0} carries support points that are not vertices")]
    NotVertexSupported(usize),
    #[error("face {face} has dimension {dim}, expected 2")]
    NotAFacet { face: usize, dim: usize },
    #[error("chart restriction needs a 3-dimensional support")]
    NotThreeDimensional,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point2(pub Rational, pub Rational);

impl Point2 {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Point2 {
        Point2(x.into(), y.into())
    }

    fn sub(&self, o: &Point2) -> Point2 {
        Point2(&self.0 - &o.0, &self.1 - &o.1)
    }

    fn add(&self, o: &Point2) -> Point2 {
        Point2(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn cross(&self, o: &Point2) -> Rational {
        &(&self.0 * &o.1) - &(&self.1 * &o.0)
    }
}

impl std::fmt::Display for Point2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

fn turn(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    b.sub(a).cross(&c.sub(a))
}

/// A convex polygon, possibly degenerate (a segment or a point). Vertices
/// run counterclockwise from the lexicographically smallest one, with no
/// three consecutive vertices collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    /// Convex hull of a non-empty point set.
    pub fn hull(points: impl IntoIterator<Item = Point2>) -> Polygon2 {
        let mut pts: Vec<Point2> = points.into_iter().collect();
        assert!(!pts.is_empty(), "hull of an empty point set");
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Polygon2 { vertices: pts };
        }
        let chain = |iter: &mut dyn Iterator<Item = &Point2>| {
            let mut h: Vec<Point2> = Vec::new();
            for p in iter {
                while h.len() >= 2 && !turn(&h[h.len() - 2], &h[h.len() - 1], p).is_positive() {
                    h.pop();
                }
                h.push(p.clone());
            }
            h
        };
        let mut lower = chain(&mut pts.iter());
        let mut upper = chain(&mut pts.iter().rev());
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Polygon2 { vertices: lower }
    }

    /// Newton polygon of a 2-dimensional support.
    pub fn newton(s: &Support) -> Polygon2 {
        assert_eq!(s.dim(), 2, "Newton polygon of a non-planar support");
        Polygon2::hull(s.points().map(|p| Point2::new(p.coords()[0] as i64, p.coords()[1] as i64)))
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn translated(&self, by: &Point2) -> Polygon2 {
        Polygon2 { vertices: self.vertices.iter().map(|p| p.add(by)).collect() }
    }

    pub fn scaled(&self, k: i64) -> Polygon2 {
        let k = Rational::from(k);
        Polygon2::hull(self.vertices.iter().map(|p| Point2(&p.0 * &k, &p.1 * &k)))
    }

    /// Edge vectors in counterclockwise order, starting from the vertex
    /// with the smallest (y, x). A segment contributes both orientations.
    fn edge_walk(&self) -> (Point2, Vec<Point2>) {
        let n = self.vertices.len();
        let start = (0..n).min_by(|&a, &b| {
            let (p, q) = (&self.vertices[a], &self.vertices[b]);
            (&p.1, &p.0).cmp(&(&q.1, &q.0))
        });
        let start = start.expect("non-empty polygon");
        let edges = if n == 1 {
            Vec::new()
        } else {
            (0..n)
                .map(|i| {
                    let a = &self.vertices[(start + i) % n];
                    let b = &self.vertices[(start + i + 1) % n];
                    b.sub(a)
                })
                .collect()
        };
        (self.vertices[start].clone(), edges)
    }
}

fn angle_cmp(a: &Point2, b: &Point2) -> Ordering {
    let half = |v: &Point2| if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.cross(b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Minkowski sum by merging the edge sequences of both operands by angle.
pub fn minkowski_sum(p: &Polygon2, q: &Polygon2) -> Polygon2 {
    let (p0, pe) = p.edge_walk();
    let (q0, qe) = q.edge_walk();
    let mut cur = p0.add(&q0);
    let mut points = vec![cur.clone()];
    let (mut i, mut j) = (0, 0);
    while i < pe.len() || j < qe.len() {
        let take_p = j >= qe.len() || (i < pe.len() && angle_cmp(&pe[i], &qe[j]) != Ordering::Greater);
        let e = if take_p {
            i += 1;
            &pe[i - 1]
        } else {
            j += 1;
            &qe[j - 1]
        };
        cur = cur.add(e);
        points.push(cur.clone());
    }
    Polygon2::hull(points)
}

/// Exact shoelace area; zero for segments and points.
pub fn area2(p: &Polygon2) -> Rational {
    let v = &p.vertices;
    if v.len() < 3 {
        return Rational::zero();
    }
    let twice: Rational = (0..v.len()).map(|i| v[i].cross(&v[(i + 1) % v.len()])).sum();
    twice / Rational::from(2)
}

/// MV(P, Q) = area(P + Q) − area(P) − area(Q).
pub fn mixed_volume_2(p: &Polygon2, q: &Polygon2) -> Rational {
    area2(&minkowski_sum(p, q)) - area2(p) - area2(q)
}

/// Why a mixed volume vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MvZeroReason {
    None,
    ParallelSegments,
    PointFactor,
}

pub fn mv_zero_reason(p: &Polygon2, q: &Polygon2) -> Result<MvZeroReason, MixedVolumeError> {
    let reason = if p.is_point() || q.is_point() {
        MvZeroReason::PointFactor
    } else if p.is_segment()
        && q.is_segment()
        && p.vertices[1].sub(&p.vertices[0]).cross(&q.vertices[1].sub(&q.vertices[0])).is_zero()
    {
        MvZeroReason::ParallelSegments
    } else {
        MvZeroReason::None
    };
    let mv = mixed_volume_2(p, q);
    if (reason == MvZeroReason::None) != mv.is_positive() {
        return Err(MixedVolumeError::CrossCheck(format!("zero-reason {reason:?} disagrees with mixed volume {mv}")));
    }
    Ok(reason)
}

/// Sets the `axis` variable to 1: deletes that coordinate, combining terms
/// that become equal.
pub fn restrict_to_chart(s: &Support, axis: Axis) -> Result<Support, MixedVolumeError> {
    if s.dim() != 3 {
        return Err(MixedVolumeError::NotThreeDimensional);
    }
    let mut out = Support::new(2);
    for (e, c) in s.iter() {
        out.insert(e.without(axis), c.clone());
    }
    Ok(out)
}

/// The mixed volume of the chart forms of the two off-axis partials of f_S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceMixedVolume {
    pub face: usize,
    pub axis: Axis,
    /// Chart forms of ∂f_S/∂a and ∂f_S/∂b for the off-axis variables a < b.
    pub charts: [Vec<(ExponentVector, Coefficient)>; 2],
    pub polygons: [Polygon2; 2],
    pub minkowski: Polygon2,
    pub areas: [Rational; 3],
    pub mixed_volume: Rational,
    pub zero_reason: MvZeroReason,
}

pub fn face_mixed_volume(b: &NewtonBoundary, face_id: usize, axis: Axis) -> Result<FaceMixedVolume, MixedVolumeError> {
    let face = b.face(face_id)?;
    if b.dim() != 3 || face.dim != 2 {
        return Err(MixedVolumeError::NotAFacet { face: face_id, dim: face.dim });
    }
    let fs = b.support().restricted(&face.points);
    let [a, c] = axis.others();
    let ca = restrict_to_chart(&fs.derivative(a), axis)?;
    let cb = restrict_to_chart(&fs.derivative(c), axis)?;
    let (p, q) = (Polygon2::newton(&ca), Polygon2::newton(&cb));
    let sum = minkowski_sum(&p, &q);
    let areas = [area2(&sum), area2(&p), area2(&q)];
    let mixed_volume = &(&areas[0] - &areas[1]) - &areas[2];
    let zero_reason = mv_zero_reason(&p, &q)?;
    let listing = |s: &Support| s.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
    Ok(FaceMixedVolume {
        face: face_id,
        axis,
        charts: [listing(&ca), listing(&cb)],
        polygons: [p, q],
        minkowski: sum,
        areas,
        mixed_volume,
        zero_reason,
    })
}

/// Combinatorial Bernstein non-degeneracy of the chart system of a 2-face
/// for generic coefficients on its vertices. Fails exactly when two vertices
/// away from both coordinate planes containing the axis span a line that,
/// after the axis variable is set to 1, passes through the origin.
pub fn generic_b_nondegenerate(face: &Face, axis: Axis) -> Result<bool, MixedVolumeError> {
    if face.dim != 2 {
        return Err(MixedVolumeError::NotAFacet { face: face.id, dim: face.dim });
    }
    if face.points != face.vertices {
        return Err(MixedVolumeError::NotVertexSupported(face.id));
    }
    let [a, b] = axis.others();
    let inner: Vec<(i64, i64)> = face
        .vertices
        .iter()
        .filter(|v| v.get(a) >= 1 && v.get(b) >= 1)
        .map(|v| (v.get(a) as i64, v.get(b) as i64))
        .collect();
    for (i, p) in inner.iter().enumerate() {
        for q in &inner[i + 1..] {
            if p.0 * q.1 == p.1 * q.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
