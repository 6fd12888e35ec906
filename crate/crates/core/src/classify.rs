//! Exceptional and proximate faces, the hyperbolic-edge special case, and
//! audits of the structural facts the exponent formulas rely on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{Face, NewtonBoundary};
use crate::lattice::{Axis, ExponentVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("face {face} has dimension {dim}, expected {expected}")]
    WrongDimension { face: usize, dim: usize, expected: usize },
    #[error("face {face} is not proximate for the {axis} axis")]
    NotProximate { face: usize, axis: Axis },
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

/// How a proximate face reaches its axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProximityKind {
    /// The face has a vertex on the axis.
    Convenient,
    /// The face misses the axis; `edge` joins a point `k·e_ω + e_b` (k ≥ 1)
    /// to a point `m·e_ω + n·e_a` (n ≥ 1) with `{a, b}` the other two axes.
    NonConvenient { edge: (ExponentVector, ExponentVector) },
    NotProximate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceClassification {
    pub face: usize,
    pub exceptional_axes: Vec<Axis>,
    pub proximity_axes: Vec<Axis>,
    pub proximity_kind: Vec<(Axis, ProximityKind)>,
}

/// An edge of Γ¹ joining `e_i + e_j` and `α·e_k`, with `axis = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicEdge {
    pub face: usize,
    pub axis: Axis,
    pub alpha: u32,
}

fn require_dim(face: &Face, expected: usize) -> Result<(), ClassifyError> {
    if face.dim == expected {
        Ok(())
    } else {
        Err(ClassifyError::WrongDimension { face: face.id, dim: face.dim, expected })
    }
}

fn ambient_dim(face: &Face) -> usize {
    face.vertices.first().map_or(3, ExponentVector::dim)
}

/// Sum of the coordinates of `p` other than `axis`.
fn off_axis(p: &ExponentVector, axis: Axis) -> u32 {
    Axis::all(p.dim()).iter().filter(|&&a| a != axis).map(|&a| p.get(a)).sum()
}

fn is_on_axis(p: &ExponentVector, axis: Axis) -> bool {
    off_axis(p, axis) == 0
}

/// `p = k·e_axis + e_other` with `k ≥ 1`.
fn is_axis_times(p: &ExponentVector, axis: Axis, other: Axis) -> bool {
    p.get(axis) >= 1 && p.get(other) == 1 && off_axis(p, axis) == 1
}

/// Axes for which the facet is exceptional: some other variable occurs in
/// exactly one point of the face, and that point is `m·e_i + e_j`, m ≥ 1.
pub fn exceptional_axes(face: &Face) -> Result<Vec<Axis>, ClassifyError> {
    let n = ambient_dim(face);
    require_dim(face, n - 1)?;
    Ok(Axis::all(n)
        .iter()
        .copied()
        .filter(|&i| {
            Axis::all(n).iter().any(|&j| {
                if j == i {
                    return false;
                }
                let mut carrying = face.points.iter().filter(|p| p.get(j) >= 1);
                match (carrying.next(), carrying.next()) {
                    (Some(p), None) => is_axis_times(p, i, j),
                    _ => false,
                }
            })
        })
        .collect())
}

fn is_proximate(face: &Face, axis: Axis, exceptional: &[Axis]) -> bool {
    if exceptional.contains(&axis) {
        return false;
    }
    let near = face.vertices.iter().any(|v| off_axis(v, axis) <= 1);
    let touches = axis.others().iter().all(|&o| face.vertices.iter().any(|v| v.get(o) == 0));
    near && touches
}

/// Axes for which a 2-face is proximate: not exceptional for the axis, a
/// vertex within distance 1 of it, and a vertex in each coordinate plane
/// containing it.
pub fn proximity_axes(face: &Face) -> Result<Vec<Axis>, ClassifyError> {
    require_dim(face, 2)?;
    if ambient_dim(face) != 3 {
        return Err(ClassifyError::WrongDimension { face: face.id, dim: face.dim, expected: 1 });
    }
    let exc = exceptional_axes(face)?;
    Ok(Axis::ALL.iter().copied().filter(|&a| is_proximate(face, a, &exc)).collect())
}

/// All 2-faces proximate for `axis`, in id order. The list is empty exactly
/// when every 2-face is exceptional for the axis; anything else is reported
/// as a cross-check failure.
pub fn proximate_faces(b: &NewtonBoundary, axis: Axis) -> Result<Vec<&Face>, ClassifyError> {
    if b.dim() != 3 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut non_exceptional = 0;
    for f in b.facets() {
        let exc = exceptional_axes(f)?;
        if !exc.contains(&axis) {
            non_exceptional += 1;
        }
        if is_proximate(f, axis, &exc) {
            out.push(f);
        }
    }
    if out.is_empty() != (non_exceptional == 0) {
        return Err(ClassifyError::CrossCheck(format!(
            "{non_exceptional} faces are non-exceptional for the {axis} axis but {} are proximate",
            out.len()
        )));
    }
    Ok(out)
}

/// Finds a vertex pair `(p, q)` with `p = k·e_ω + e_b` and `q = m·e_ω + n·e_a`.
fn characteristic_pair<'a>(
    pairs: impl Iterator<Item = (&'a ExponentVector, &'a ExponentVector)>,
    axis: Axis,
) -> Option<(ExponentVector, ExponentVector)> {
    let [a1, a2] = axis.others();
    let matches = |p: &ExponentVector, q: &ExponentVector| {
        [(a1, a2), (a2, a1)]
            .iter()
            .any(|&(a, b)| is_axis_times(p, axis, b) && q.get(a) >= 1 && q.get(b) == 0)
    };
    for (p, q) in pairs {
        if matches(p, q) {
            return Some((p.clone(), q.clone()));
        }
        if matches(q, p) {
            return Some((q.clone(), p.clone()));
        }
    }
    None
}

pub fn proximity_kind(face: &Face, axis: Axis) -> Result<ProximityKind, ClassifyError> {
    if !proximity_axes(face)?.contains(&axis) {
        return Err(ClassifyError::NotProximate { face: face.id, axis });
    }
    if face.vertices.iter().any(|v| is_on_axis(v, axis)) {
        return Ok(ProximityKind::Convenient);
    }
    let edges = face.polygon_edges();
    match characteristic_pair(edges.iter().map(|(p, q)| (p, q)), axis) {
        Some(edge) => Ok(ProximityKind::NonConvenient { edge }),
        None => Err(ClassifyError::CrossCheck(format!(
            "face {} is proximate for the {axis} axis but has no characteristic edge",
            face.id
        ))),
    }
}

/// Every edge of Γ¹ joining `e_i + e_j` and `α·e_k` with `α ≥ 2`.
pub fn hyperbolic_edges(b: &NewtonBoundary) -> Vec<HyperbolicEdge> {
    if b.dim() != 3 {
        return Vec::new();
    }
    b.edges()
        .filter_map(|e| {
            let [p, q] = [&e.vertices[0], &e.vertices[1]];
            [(p, q), (q, p)].iter().find_map(|&(u, w)| {
                let k = Axis::ALL.iter().copied().find(|&k| is_on_axis(w, k) && w.get(k) >= 2)?;
                let [i, j] = k.others();
                (u.get(i) == 1 && u.get(j) == 1 && u.get(k) == 0)
                    .then_some(HyperbolicEdge { face: e.id, axis: k, alpha: w.get(k) })
            })
        })
        .collect()
}

pub fn detect_hyperbolic_edge(b: &NewtonBoundary) -> Option<HyperbolicEdge> {
    hyperbolic_edges(b).into_iter().next()
}

/// Checks that every boundary edge of the 2-face whose line meets the axis
/// has an endpoint in one of the two coordinate planes containing the axis.
pub fn axis_edge_audit(face: &Face, axis: Axis) -> bool {
    let [a, b] = axis.others();
    face.polygon_edges().iter().all(|(p, q)| {
        let (pa, pb) = (p.get(a) as i64, p.get(b) as i64);
        let (da, db) = (q.get(a) as i64 - pa, q.get(b) as i64 - pb);
        // p + t(q − p) has both off-axis coordinates zero for some t
        let meets = match (da, db) {
            (0, 0) => pa == 0 && pb == 0,
            (0, _) => pa == 0,
            (_, 0) => pb == 0,
            _ => pa * db == pb * da,
        };
        let in_plane = |v: &ExponentVector| v.get(a) == 0 || v.get(b) == 0;
        !meets || in_plane(p) || in_plane(q)
    })
}

pub fn classify_face(face: &Face) -> Result<FaceClassification, ClassifyError> {
    let exceptional_axes = exceptional_axes(face)?;
    let n = ambient_dim(face);
    let (proximity_axes, proximity_kind) = if n == 3 {
        let prox = proximity_axes(face)?;
        let kinds = Axis::ALL
            .iter()
            .map(|&a| {
                let kind =
                    if prox.contains(&a) { proximity_kind(face, a)? } else { ProximityKind::NotProximate };
                Ok((a, kind))
            })
            .collect::<Result<Vec<_>, ClassifyError>>()?;
        (prox, kinds)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(FaceClassification { face: face.id, exceptional_axes, proximity_axes, proximity_kind })
}

/// Classifies every facet (2-faces in 3D, segments in 2D), in id order.
pub fn classify_all(b: &NewtonBoundary) -> Result<Vec<FaceClassification>, ClassifyError> {
    b.facets().map(classify_face).collect()
}

/// Runs the structural checks on a boundary:
///
/// - no facet is exceptional for two axes;
/// - an axis has proximate faces iff some facet is non-exceptional for it;
/// - every proximate face passes [`axis_edge_audit`];
/// - the largest intercept with an axis among faces non-exceptional for it
///   is attained by a proximate face;
/// - proximate faces meeting the axis share the vertex on that axis;
/// - a proximate face meeting the axis and containing a characteristic
///   diagonal is the only proximate face for that axis.
pub fn structural_audit(b: &NewtonBoundary) -> Result<(), ClassifyError> {
    let fail = |msg: String| Err(ClassifyError::CrossCheck(msg));
    for f in b.facets() {
        if exceptional_axes(f)?.len() > 1 {
            return fail(format!("face {} is exceptional for several axes", f.id));
        }
    }
    if b.dim() != 3 {
        return Ok(());
    }
    for &axis in &Axis::ALL {
        let prox = proximate_faces(b, axis)?;
        if prox.is_empty() {
            continue;
        }
        for f in &prox {
            if !axis_edge_audit(f, axis) {
                return fail(format!("face {} has an edge whose line meets the {axis} axis", f.id));
            }
        }
        let intercept = |f: &Face| f.intercept(axis).cloned().unwrap_or_else(Rational::zero);
        let mut best = None;
        for f in b.facets() {
            if !exceptional_axes(f)?.contains(&axis) {
                let m = intercept(f);
                if best.as_ref().is_none_or(|b| &m > b) {
                    best = Some(m);
                }
            }
        }
        if !prox.iter().any(|f| Some(intercept(f)) == best) {
            return fail(format!("largest {axis}-intercept is not attained by a proximate face"));
        }
        let meeting: Vec<&&Face> = prox.iter().filter(|f| f.vertices.iter().any(|v| is_on_axis(v, axis))).collect();
        let on_axis: Vec<&ExponentVector> = meeting
            .iter()
            .map(|f| f.vertices.iter().find(|v| is_on_axis(v, axis)).expect("filtered"))
            .collect();
        if on_axis.windows(2).any(|w| w[0] != w[1]) {
            return fail(format!("proximate faces meet the {axis} axis at different vertices"));
        }
        for f in &meeting {
            let pairs: Vec<(&ExponentVector, &ExponentVector)> = f
                .vertices
                .iter()
                .enumerate()
                .flat_map(|(i, p)| f.vertices[i + 1..].iter().map(move |q| (p, q)))
                .filter(|(p, q)| {
                    let edges = f.polygon_edges();
                    !edges.iter().any(|(u, w)| (u == *p && w == *q) || (u == *q && w == *p))
                })
                .collect();
            if characteristic_pair(pairs.into_iter(), axis).is_some() && prox.len() > 1 {
                return fail(format!("face {} has a characteristic diagonal but is not the only proximate face", f.id));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::build_boundary;
    use crate::parser::{parse_polynomial, Support};

    fn ev(a: [u32; 3]) -> ExponentVector {
        ExponentVector::from(a)
    }

    fn worked() -> NewtonBoundary {
        build_boundary(&parse_polynomial("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5", 3).unwrap())
    }

    fn facet_with(b: &NewtonBoundary, v: [u32; 3]) -> Vec<&Face> {
        b.facets().filter(|f| f.has_vertex(&ev(v))).collect()
    }

    fn only_facet(b: &NewtonBoundary) -> &Face {
        let fs: Vec<&Face> = b.facets().collect();
        assert_eq!(fs.len(), 1);
        fs[0]
    }

    #[test]
    fn example_one_face() {
        let b = build_boundary(&Support::from_points(3, [[1, 0, 1], [0, 1, 1], [0, 3, 0]]));
        let f = only_facet(&b);
        assert_eq!(exceptional_axes(f).unwrap(), vec![Axis::Z]);
        assert_eq!(proximity_axes(f).unwrap(), vec![Axis::X, Axis::Y]);
        assert!(proximate_faces(&b, Axis::Z).unwrap().is_empty());
        assert!(axis_edge_audit(f, Axis::X));
        assert_eq!(
            proximity_kind(f, Axis::X).unwrap(),
            ProximityKind::NonConvenient { edge: (ev([1, 0, 1]), ev([0, 3, 0])) }
        );
        assert_eq!(
            detect_hyperbolic_edge(&b),
            Some(HyperbolicEdge { face: detect_hyperbolic_edge(&b).unwrap().face, axis: Axis::Y, alpha: 3 })
        );
        assert_eq!(hyperbolic_edges(&b).len(), 1);
    }

    #[test]
    fn worked_example_faces() {
        let b = worked();
        let tri = b.facets().find(|f| f.has_vertex(&ev([6, 0, 0]))).unwrap();
        assert_eq!(exceptional_axes(tri).unwrap(), vec![Axis::X]);
        let s1 = b.facets().find(|f| f.vertices.len() == 4).unwrap();
        let s3 = b.facets().find(|f| f.has_vertex(&ev([0, 0, 5]))).unwrap();
        assert!(exceptional_axes(s1).unwrap().is_empty());
        assert!(exceptional_axes(s3).unwrap().is_empty());
        assert!(proximity_axes(s1).unwrap().contains(&Axis::X));
        let px: Vec<usize> = proximate_faces(&b, Axis::X).unwrap().iter().map(|f| f.id).collect();
        assert_eq!(px, vec![s1.id]);
        assert_eq!(
            proximity_kind(s1, Axis::X).unwrap(),
            ProximityKind::NonConvenient { edge: (ev([4, 0, 1]), ev([4, 1, 0])) }
        );
        assert!(axis_edge_audit(s1, Axis::X));
        assert!(matches!(proximity_kind(s3, Axis::X), Err(ClassifyError::NotProximate { .. })));
        assert_eq!(facet_with(&b, [4, 0, 1]).len(), 3);
        structural_audit(&b).unwrap();
    }

    #[test]
    fn coordinate_triangle() {
        let b = build_boundary(&Support::from_points(3, [[2, 0, 0], [0, 3, 0], [0, 0, 6]]));
        let f = only_facet(&b);
        assert!(exceptional_axes(f).unwrap().is_empty());
        assert_eq!(proximity_axes(f).unwrap(), Axis::ALL.to_vec());
        assert_eq!(proximity_kind(f, Axis::X).unwrap(), ProximityKind::Convenient);
        assert_eq!(detect_hyperbolic_edge(&b), None);
        for a in Axis::ALL {
            assert_eq!(proximate_faces(&b, a).unwrap().len(), 1);
        }
    }

    #[test]
    fn hyperbolic_edges_found() {
        let b = build_boundary(&Support::from_points(3, [[1, 1, 0], [0, 0, 5]]));
        let h = detect_hyperbolic_edge(&b).unwrap();
        assert_eq!((h.axis, h.alpha), (Axis::Z, 5));
        let b = build_boundary(&Support::from_points(3, [[0, 1, 1], [4, 0, 0]]));
        let h = detect_hyperbolic_edge(&b).unwrap();
        assert_eq!((h.axis, h.alpha), (Axis::X, 4));
        assert!(classify_all(&b).unwrap().is_empty());
    }

    #[test]
    fn two_dim_exceptional_segments() {
        let b = build_boundary(&Support::from_points(2, [[5, 0], [2, 1], [0, 3]]));
        let exc: Vec<Vec<Axis>> = b.facets().map(|f| exceptional_axes(f).unwrap()).collect();
        assert_eq!(exc.iter().filter(|e| e.as_slice() == [Axis::X]).count(), 1);
        assert_eq!(exc.iter().filter(|e| e.is_empty()).count(), 1);
        let c = classify_all(&b).unwrap();
        assert!(c.iter().all(|c| c.proximity_axes.is_empty()));
    }

    #[test]
    fn wrong_dimension() {
        let b = worked();
        let v = b.vertices().next().unwrap();
        assert!(matches!(exceptional_axes(v), Err(ClassifyError::WrongDimension { .. })));
        assert!(matches!(proximity_axes(v), Err(ClassifyError::WrongDimension { .. })));
    }

    #[test]
    fn axis_edge_audit_detects_crossing_edge() {
        // a hand-built polygon whose edge (0,1,1)-(0,2,2) lies on a line through the x axis
        let f = Face {
            id: 0,
            dim: 2,
            vertices: vec![ev([0, 1, 1]), ev([0, 2, 2]), ev([3, 0, 0])],
            cycle: vec![ev([0, 1, 1]), ev([3, 0, 0]), ev([0, 2, 2])],
            points: vec![],
            normal: None,
            level: None,
            intercepts: vec![],
            m: None,
            supporting: crate::lattice::WeightVector::from([1, 1, 1]),
        };
        assert!(!axis_edge_audit(&f, Axis::X));
        assert!(axis_edge_audit(&f, Axis::Y));
    }
}
