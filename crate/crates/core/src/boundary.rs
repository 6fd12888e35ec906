//! The Newton polyhedron Γ₊ = conv(supp) + Rⁿ₊ and its compact faces.
//!
//! Construction works on the minimal (non-dominated) support points, since a
//! dominated point never lies on a compact face:
//!
//! 1. compact facets come from point triples whose plane has a strictly
//!    positive normal and supports every minimal point;
//! 2. unbounded facets come from the 2-dimensional Newton polygons of the
//!    coordinate projections, plus the coordinate directions themselves;
//! 3. a compact edge is the face cut out by `u + w` for two facet normals
//!    whose supports together cover every coordinate;
//! 4. vertices are the endpoints of compact edges.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    self, affine_dim, cross, dot, make_primitive, sub, weighted_min, Axis, ExponentVector, LatticeError,
    Rational, WeightVector,
};
use crate::par::{self, Execution};
use crate::parser::Support;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("no face with id {0}")]
    UnknownFace(usize),
    #[error("face {0} is not a facet")]
    NotAFacet(usize),
    #[error("empty support")]
    EmptySupport,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("no compact face is cut out by {0}")]
    NoFace(WeightVector),
}

/// A compact face of the Newton polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    /// Vertices in ascending lexicographic order.
    pub vertices: Vec<ExponentVector>,
    /// Vertices in boundary order (a polygon cycle for 2-faces).
    pub cycle: Vec<ExponentVector>,
    /// Every support point on the face, vertices included.
    pub points: Vec<ExponentVector>,
    /// Primitive strictly positive normal; present for facets only.
    pub normal: Option<WeightVector>,
    pub level: Option<i64>,
    /// `level / normal_ω` per axis (facets only).
    pub intercepts: Vec<Rational>,
    /// Largest intercept.
    pub m: Option<Rational>,
    /// A strictly positive vector whose minimizing face is exactly this one.
    pub supporting: WeightVector,
}

impl Face {
    pub fn intercept(&self, axis: Axis) -> Option<&Rational> {
        self.intercepts.get(axis.index())
    }

    /// Boundary edges of a polygon, as consecutive pairs of the cycle.
    pub fn polygon_edges(&self) -> Vec<(ExponentVector, ExponentVector)> {
        match self.cycle.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.cycle[0].clone(), self.cycle[1].clone())],
            n => (0..n).map(|i| (self.cycle[i].clone(), self.cycle[(i + 1) % n].clone())).collect(),
        }
    }

    pub fn has_vertex(&self, p: &ExponentVector) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    /// Comparison that ignores the (non-unique) supporting vector.
    pub fn same_face(&self, other: &Face) -> bool {
        self.id == other.id
            && self.dim == other.dim
            && self.vertices == other.vertices
            && self.points == other.points
            && self.normal == other.normal
            && self.level == other.level
            && self.intercepts == other.intercepts
            && self.m == other.m
    }
}

/// Face data before ids and derived quantities are assigned.
#[derive(Debug, Clone)]
pub(crate) struct RawFace {
    pub points: Vec<ExponentVector>,
    pub vertices: Vec<ExponentVector>,
    pub normal: Option<WeightVector>,
    pub supporting: WeightVector,
}

/// The compact faces of Γ₊, grouped by dimension, with edge-facet incidences.
#[derive(Debug, Clone)]
pub struct NewtonBoundary {
    dim: usize,
    support: Support,
    faces: Vec<Face>,
    adjacency: BTreeMap<usize, Vec<usize>>,
}

impl NewtonBoundary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// All compact faces, ordered by (dimension, vertex list).
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    /// Faces of dimension `n − 1`.
    pub fn facets(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces_of_dim(self.dim - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces_of_dim(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces_of_dim(1)
    }

    pub fn face(&self, id: usize) -> Result<&Face, BoundaryError> {
        self.faces.get(id).ok_or(BoundaryError::UnknownFace(id))
    }

    /// Compact 2-faces containing the given edge (3D only).
    pub fn incident_facets(&self, edge_id: usize) -> &[usize] {
        self.adjacency.get(&edge_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn adjacency(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.adjacency
    }

    /// Face-lattice equality, ignoring supporting vectors.
    pub fn same_lattice(&self, other: &NewtonBoundary) -> bool {
        self.dim == other.dim
            && self.faces.len() == other.faces.len()
            && self.faces.iter().zip(&other.faces).all(|(a, b)| a.same_face(b))
            && self.adjacency == other.adjacency
    }

    pub(crate) fn assemble(support: &Support, raw: Vec<RawFace>) -> NewtonBoundary {
        let dim = support.dim();
        let mut raw = raw;
        for r in raw.iter_mut() {
            r.points.sort();
            r.vertices.sort();
        }
        let mut keyed: Vec<(usize, RawFace)> = raw
            .into_iter()
            .map(|r| {
                let pts: Vec<[i128; 3]> = r.vertices.iter().map(ExponentVector::lift).collect();
                (affine_dim(&pts, &[]), r)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1.vertices).cmp(&(b.0, &b.1.vertices)));

        let faces: Vec<Face> = keyed
            .into_iter()
            .enumerate()
            .map(|(id, (fdim, r))| {
                let level = r.normal.as_ref().map(|n| {
                    let l = lattice::inner_product(n, &r.vertices[0]).expect("dimension");
                    i64::try_from(l).expect("level out of range")
                });
                let intercepts: Vec<Rational> = match (&r.normal, level) {
                    (Some(n), Some(l)) => n.coords().iter().map(|&c| Rational::new(l, c)).collect(),
                    _ => Vec::new(),
                };
                let m = intercepts.iter().max().cloned();
                let cycle = if fdim == 2 { polygon_cycle(&r.vertices) } else { r.vertices.clone() };
                Face {
                    id,
                    dim: fdim,
                    vertices: r.vertices,
                    cycle,
                    points: r.points,
                    normal: r.normal,
                    level,
                    intercepts,
                    m,
                    supporting: r.supporting,
                }
            })
            .collect();

        let mut adjacency = BTreeMap::new();
        if dim == 3 {
            for e in faces.iter().filter(|f| f.dim == 1) {
                let incident: Vec<usize> = faces
                    .iter()
                    .filter(|f| f.dim == 2 && e.vertices.iter().all(|v| f.points.binary_search(v).is_ok()))
                    .map(|f| f.id)
                    .collect();
                adjacency.insert(e.id, incident);
            }
        }
        NewtonBoundary { dim, support: support.clone(), faces, adjacency }
    }
}

/// Orders the vertices of a convex lattice polygon in R³ cyclically,
/// counterclockwise in the projection to the first two coordinates.
fn polygon_cycle(vertices: &[ExponentVector]) -> Vec<ExponentVector> {
    let n = vertices.len() as i128;
    let pts: Vec<[i128; 3]> = vertices.iter().map(ExponentVector::lift).collect();
    // a face with a positive normal projects bijectively along any axis;
    // centroid-relative vectors scaled by n stay integral
    let sum = pts.iter().fold([0i128; 3], |a, p| [a[0] + p[0], a[1] + p[1], a[2] + p[2]]);
    let rel: Vec<(i128, i128)> = pts.iter().map(|p| (n * p[0] - sum[0], n * p[1] - sum[1])).collect();
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&a, &b| angle_cmp(rel[a], rel[b]));
    // start at the lexicographically smallest vertex
    let start = idx.iter().position(|&i| i == 0).unwrap_or(0);
    idx.rotate_left(start);
    idx.into_iter().map(|i| vertices[i].clone()).collect()
}

pub(crate) fn angle_cmp(a: (i128, i128), b: (i128, i128)) -> std::cmp::Ordering {
    let half = |v: (i128, i128)| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// Points of `pts` not dominating any other point (duplicates removed).
fn minimal_points(pts: &[ExponentVector]) -> Vec<ExponentVector> {
    let mut uniq: Vec<ExponentVector> = pts.to_vec();
    uniq.sort();
    uniq.dedup();
    uniq.iter()
        .filter(|p| !uniq.iter().any(|q| q != *p && p.dominates(q)))
        .cloned()
        .collect()
}

/// Lower-left chain of a planar point set: the compact edges of its
/// 2-dimensional Newton polygon. Each edge is returned with every input
/// index lying on it and its primitive positive normal.
fn newton_chain(points: &[(i128, i128)]) -> Vec<(Vec<usize>, (i128, i128))> {
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| {
            let p = points[i];
            !points.iter().any(|&q| q != p && p.0 >= q.0 && p.1 >= q.1)
        })
        .collect();
    idx.sort_by_key(|&i| points[i]);
    idx.dedup_by_key(|i| points[*i]);
    // x increasing, y decreasing along the antichain; keep the lower hull
    let mut hull: Vec<usize> = Vec::new();
    for &i in &idx {
        while hull.len() >= 2 {
            let a = points[hull[hull.len() - 2]];
            let b = points[hull[hull.len() - 1]];
            let c = points[i];
            let turn = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            if turn <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull.windows(2)
        .map(|w| {
            let (a, b) = (points[w[0]], points[w[1]]);
            let n = make_primitive(&[a.1 - b.1, b.0 - a.0]);
            let normal = (n[0], n[1]);
            let level = normal.0 * a.0 + normal.1 * a.1;
            let on: Vec<usize> = (0..points.len())
                .filter(|&k| normal.0 * points[k].0 + normal.1 * points[k].1 == level)
                .collect();
            (on, normal)
        })
        .collect()
}

/// Convex hull vertices (indices) of planar points; collinear points dropped.
fn hull_vertices(points: &[(i128, i128)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&i| points[i]);
    idx.dedup_by_key(|i| points[*i]);
    if idx.len() <= 2 {
        return idx;
    }
    let turn = |a: (i128, i128), b: (i128, i128), c: (i128, i128)| {
        (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
    };
    let chain = |order: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in order {
            while h.len() >= 2 && turn(points[h[h.len() - 2]], points[h[h.len() - 1]], points[i]) <= 0 {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let mut lower = chain(&mut idx.iter().copied());
    let mut upper = chain(&mut idx.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn argmin_indices(v: &[i128; 3], pts: &[[i128; 3]]) -> (i128, Vec<usize>) {
    let mut best = i128::MAX;
    let mut out = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let d = dot(v, p);
        if d < best {
            best = d;
            out.clear();
            out.push(i);
        } else if d == best {
            out.push(i);
        }
    }
    (best, out)
}

fn weight_of(v: &[i128], dim: usize) -> WeightVector {
    WeightVector::from_i128(&make_primitive(&v[..dim])).expect("non-zero weight")
}

pub fn build_boundary(s: &Support) -> NewtonBoundary {
    build_boundary_with(s, Execution::default())
}

pub fn build_boundary_with(s: &Support, exec: Execution) -> NewtonBoundary {
    assert!(!s.is_empty(), "build_boundary needs a non-empty support");
    let minimal = minimal_points(&s.point_vec());
    let raw = if minimal.len() == 1 {
        vec![RawFace {
            points: minimal.clone(),
            vertices: minimal.clone(),
            normal: None,
            supporting: WeightVector::new(vec![1; s.dim()]).expect("non-zero"),
        }]
    } else if s.dim() == 3 {
        raw_faces_3d(&minimal, exec)
    } else {
        raw_faces_2d(&minimal)
    };
    NewtonBoundary::assemble(s, raw)
}

fn raw_faces_2d(minimal: &[ExponentVector]) -> Vec<RawFace> {
    let pts: Vec<(i128, i128)> = minimal.iter().map(|p| (p.coords()[0] as i128, p.coords()[1] as i128)).collect();
    let chain = newton_chain(&pts);
    let mut faces = Vec::new();
    // unbounded facet normals e₁, e₂ join the chain normals at the ends
    let mut facet_normals: Vec<((i128, i128), Vec<usize>)> =
        chain.iter().map(|(on, n)| (*n, on.clone())).collect();
    for n in [(1i128, 0i128), (0, 1)] {
        let level = pts.iter().map(|p| n.0 * p.0 + n.1 * p.1).min().expect("non-empty");
        let on = (0..pts.len()).filter(|&k| n.0 * pts[k].0 + n.1 * pts[k].1 == level).collect();
        facet_normals.push((n, on));
    }
    let mut vertex_set = BTreeSet::new();
    for (on, n) in &chain {
        let ends = [*on.iter().min_by_key(|&&k| pts[k]).unwrap(), *on.iter().max_by_key(|&&k| pts[k]).unwrap()];
        vertex_set.extend(ends);
        let normal = weight_of(&[n.0, n.1], 2);
        faces.push(RawFace {
            points: on.iter().map(|&k| minimal[k].clone()).collect(),
            vertices: ends.iter().map(|&k| minimal[k].clone()).collect(),
            normal: Some(normal.clone()),
            supporting: normal,
        });
    }
    for k in vertex_set {
        let sum = facet_normals
            .iter()
            .filter(|(_, on)| on.contains(&k))
            .fold((0i128, 0i128), |a, (n, _)| (a.0 + n.0, a.1 + n.1));
        faces.push(RawFace {
            points: vec![minimal[k].clone()],
            vertices: vec![minimal[k].clone()],
            normal: None,
            supporting: weight_of(&[sum.0, sum.1], 2),
        });
    }
    faces
}

fn raw_faces_3d(minimal: &[ExponentVector], exec: Execution) -> Vec<RawFace> {
    let pts: Vec<[i128; 3]> = minimal.iter().map(ExponentVector::lift).collect();
    let n = pts.len();

    // compact facets from triples
    let per_first: Vec<Vec<[i128; 3]>> = par::map_range(exec, n, |i| {
        let mut found = Vec::new();
        for j in i + 1..n {
            for k in j + 1..n {
                let c = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                let sign = if c.iter().all(|&x| x > 0) {
                    1
                } else if c.iter().all(|&x| x < 0) {
                    -1
                } else {
                    continue;
                };
                let c = make_primitive(&[sign * c[0], sign * c[1], sign * c[2]]);
                let c = [c[0], c[1], c[2]];
                let level = dot(&c, &pts[i]);
                if pts.iter().all(|p| dot(&c, p) >= level) {
                    found.push(c);
                }
            }
        }
        found
    });
    let compact: BTreeSet<[i128; 3]> = per_first.into_iter().flatten().collect();

    let mut faces = Vec::new();
    for c in &compact {
        let (_, on) = argmin_indices(c, &pts);
        let proj: Vec<(i128, i128)> = on.iter().map(|&k| (pts[k][0], pts[k][1])).collect();
        let hull = hull_vertices(&proj);
        let normal = weight_of(c, 3);
        faces.push(RawFace {
            points: on.iter().map(|&k| minimal[k].clone()).collect(),
            vertices: hull.iter().map(|&h| minimal[on[h]].clone()).collect(),
            normal: Some(normal.clone()),
            supporting: normal,
        });
    }

    // every facet normal of Γ₊, bounded or not
    let mut facets: Vec<[i128; 3]> = compact.iter().copied().collect();
    for drop in 0..3 {
        let keep: Vec<usize> = (0..3).filter(|&a| a != drop).collect();
        let proj: Vec<(i128, i128)> = pts.iter().map(|p| (p[keep[0]], p[keep[1]])).collect();
        for (_, (a, b)) in newton_chain(&proj) {
            let mut v = [0i128; 3];
            v[keep[0]] = a;
            v[keep[1]] = b;
            facets.push(v);
        }
        let mut e = [0i128; 3];
        e[drop] = 1;
        facets.push(e);
    }
    let facet_on: Vec<Vec<usize>> = facets.iter().map(|u| argmin_indices(u, &pts).1).collect();

    // compact edges: faces cut out by sums of two facet normals
    let mut edges: BTreeMap<Vec<usize>, [i128; 3]> = BTreeMap::new();
    for a in 0..facets.len() {
        for b in a + 1..facets.len() {
            let (u, w) = (facets[a], facets[b]);
            if (0..3).any(|i| u[i] == 0 && w[i] == 0) {
                continue;
            }
            let v = [u[0] + w[0], u[1] + w[1], u[2] + w[2]];
            let (_, on) = argmin_indices(&v, &pts);
            let on_pts: Vec<[i128; 3]> = on.iter().map(|&k| pts[k]).collect();
            if affine_dim(&on_pts, &[]) == 1 {
                edges.entry(on).or_insert(v);
            }
        }
    }
    let mut vertex_set = BTreeSet::new();
    for (on, v) in &edges {
        let ends = [*on.iter().min_by_key(|&&k| pts[k]).unwrap(), *on.iter().max_by_key(|&&k| pts[k]).unwrap()];
        vertex_set.extend(ends);
        faces.push(RawFace {
            points: on.iter().map(|&k| minimal[k].clone()).collect(),
            vertices: ends.iter().map(|&k| minimal[k].clone()).collect(),
            normal: None,
            supporting: weight_of(v, 3),
        });
    }
    for k in vertex_set {
        let sum = facets
            .iter()
            .zip(&facet_on)
            .filter(|(_, on)| on.contains(&k))
            .fold([0i128; 3], |acc, (u, _)| [acc[0] + u[0], acc[1] + u[1], acc[2] + u[2]]);
        debug_assert!(sum.iter().all(|&c| c > 0));
        faces.push(RawFace {
            points: vec![minimal[k].clone()],
            vertices: vec![minimal[k].clone()],
            normal: None,
            supporting: weight_of(&sum, 3),
        });
    }
    faces
}

pub fn face_data(b: &NewtonBoundary, id: usize) -> Result<&Face, BoundaryError> {
    b.face(id)
}

/// Per-axis convenience of a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisConvenience {
    pub axis: Axis,
    /// Some pure power of the axis variable is present.
    pub convenient: bool,
    /// A monomial `z_i^m` or `z_i^m z_j` (`j ≠ i`) is present.
    pub nearly_convenient: bool,
}

pub fn convenience_flags(s: &Support) -> Vec<AxisConvenience> {
    Axis::all(s.dim())
        .iter()
        .map(|&axis| {
            let convenient = s
                .points()
                .any(|p| Axis::all(s.dim()).iter().all(|&o| o == axis || p.get(o) == 0));
            let near = s.points().any(|p| {
                p.get(axis) >= 1 && {
                    let off: Vec<u32> =
                        Axis::all(s.dim()).iter().filter(|&&o| o != axis).map(|&o| p.get(o)).collect();
                    off.iter().sum::<u32>() <= 1
                }
            });
            AxisConvenience { axis, convenient, nearly_convenient: convenient || near }
        })
        .collect()
}

/// The compact face on which `w` attains its minimum over Γ₊.
pub fn supported_face<'a>(b: &'a NewtonBoundary, w: &WeightVector) -> Result<&'a Face, BoundaryError> {
    let (_, argmin) = weighted_min(w, b.support().points())?;
    b.faces()
        .iter()
        .find(|f| f.points == argmin)
        .ok_or_else(|| BoundaryError::NoFace(w.clone()))
}
