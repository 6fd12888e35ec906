//! The Łojasiewicz exponent of an isolated singularity read off the Newton
//! boundary: the isolatedness criterion, the face formula in three variables
//! with its hyperbolic-edge fallback, the plane-curve formula, and the
//! proximate-face shortcut.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{build_boundary_with, convenience_flags, Face, NewtonBoundary};
use crate::classify::{classify_face, hyperbolic_edges, proximate_faces, ClassifyError, FaceClassification, HyperbolicEdge};
use crate::lattice::{Axis, Rational};
use crate::par::{self, Execution};
use crate::parser::Support;

/// Printed with every report.
pub const STANDING_ASSUMPTION: &str =
    "f is assumed non-degenerate on every compact face of its Newton polyhedron; the exponent then depends only on the support";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("not an isolated singularity: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
    NotIsolated(Vec<Violation>),
    #[error("malformed boundary: {0}")]
    MalformedBoundary(String),
    #[error("no proximate face for the {0} axis")]
    NoProximateFace(Axis),
    #[error("exponent {0} is below 1")]
    BelowOne(Rational),
    #[error("expected a {expected}-dimensional support, found dimension {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinatePlane {
    Xy,
    Xz,
    Yz,
}

impl CoordinatePlane {
    pub const ALL: [CoordinatePlane; 3] = [CoordinatePlane::Xy, CoordinatePlane::Xz, CoordinatePlane::Yz];

    /// The coordinate vanishing on the plane.
    pub fn normal_axis(self) -> Axis {
        match self {
            CoordinatePlane::Xy => Axis::Z,
            CoordinatePlane::Xz => Axis::Y,
            CoordinatePlane::Yz => Axis::X,
        }
    }
}

impl std::fmt::Display for CoordinatePlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CoordinatePlane::Xy => "0xy",
            CoordinatePlane::Xz => "0xz",
            CoordinatePlane::Yz => "0yz",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "at", rename_all = "snake_case")]
pub enum Violation {
    NotSingularAtZero,
    ConstantTermPresent,
    NotNearlyConvenient(Axis),
    MissingCoordinatePlane(CoordinatePlane),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotSingularAtZero => write!(f, "a linear term is present"),
            Violation::ConstantTermPresent => write!(f, "a constant term is present"),
            Violation::NotNearlyConvenient(a) => write!(f, "not nearly convenient for the {a} axis"),
            Violation::MissingCoordinatePlane(p) => write!(f, "no support point in the plane {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedVerdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl IsolatedVerdict {
    fn from_violations(violations: Vec<Violation>) -> IsolatedVerdict {
        IsolatedVerdict { ok: violations.is_empty(), violations }
    }
}

fn low_degree_violations(s: &Support) -> Vec<Violation> {
    let mut v = Vec::new();
    if s.points().any(|p| p.degree() == 0) {
        v.push(Violation::ConstantTermPresent);
    }
    if s.points().any(|p| p.degree() == 1) {
        v.push(Violation::NotSingularAtZero);
    }
    v
}

fn nearly_convenient_violations(s: &Support) -> Vec<Violation> {
    convenience_flags(s)
        .into_iter()
        .filter(|c| !c.nearly_convenient)
        .map(|c| Violation::NotNearlyConvenient(c.axis))
        .collect()
}

/// Combinatorial isolatedness test. In three variables: no constant or
/// linear term, nearly convenient for every axis, and a support point in
/// every coordinate plane. In two variables only the first two conditions
/// are checked.
pub fn check_isolated(s: &Support) -> IsolatedVerdict {
    let mut v = low_degree_violations(s);
    if s.dim() == 3 {
        v.extend(nearly_convenient_violations(s));
        for plane in CoordinatePlane::ALL {
            if !s.points().any(|p| p.get(plane.normal_axis()) == 0) {
                v.push(Violation::MissingCoordinatePlane(plane));
            }
        }
    }
    IsolatedVerdict::from_violations(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentCase {
    Generic,
    HyperbolicEdge,
    TwoDimDefault,
}

/// A face attaining the maximum, with the axis of its largest intercept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attaining {
    pub face: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub face: Face,
    pub classification: FaceClassification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub dimension: usize,
    pub exponent: Rational,
    pub case: ExponentCase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperbolic_edge: Option<HyperbolicEdge>,
    pub attaining: Vec<Attaining>,
    pub sufficiency_degree: u64,
    pub faces: Vec<FaceEntry>,
    pub assumption: String,
}

/// `floor(L) + 1`.
pub fn sufficiency_degree(l: &Rational) -> Result<u64, EngineError> {
    if *l < Rational::one() {
        return Err(EngineError::BelowOne(l.clone()));
    }
    Ok(l.floor().to_u64().expect("exponent fits in u64") + 1)
}

fn face_table(b: &NewtonBoundary) -> Result<Vec<FaceEntry>, EngineError> {
    b.facets()
        .map(|f| Ok(FaceEntry { face: f.clone(), classification: classify_face(f)? }))
        .collect()
}

/// Largest `m(S)` over facets exceptional for no axis, with every
/// (face, axis) pair where it is attained.
fn max_over_non_exceptional(table: &[FaceEntry]) -> Option<(Rational, Vec<Attaining>)> {
    let candidates: Vec<&Face> =
        table.iter().filter(|e| e.classification.exceptional_axes.is_empty()).map(|e| &e.face).collect();
    let best = candidates.iter().filter_map(|f| f.m.clone()).max()?;
    let mut attaining: Vec<Attaining> = candidates
        .iter()
        .flat_map(|f| {
            let best = &best;
            f.intercepts
                .iter()
                .enumerate()
                .filter(move |(_, m)| *m == best)
                .map(move |(i, _)| Attaining { face: f.id, axis: Axis::from_index(i).expect("axis") })
        })
        .collect();
    attaining.sort();
    Some((best, attaining))
}

fn report(
    b: &NewtonBoundary,
    exponent: Rational,
    case: ExponentCase,
    hyperbolic_edge: Option<HyperbolicEdge>,
    attaining: Vec<Attaining>,
    faces: Vec<FaceEntry>,
) -> Result<ExponentReport, EngineError> {
    Ok(ExponentReport {
        dimension: b.dim(),
        sufficiency_degree: sufficiency_degree(&exponent)?,
        exponent,
        case,
        hyperbolic_edge,
        attaining,
        faces,
        assumption: STANDING_ASSUMPTION.to_string(),
    })
}

pub fn lojasiewicz_3d(s: &Support) -> Result<ExponentReport, EngineError> {
    lojasiewicz_3d_with(s, Execution::default())
}

pub fn lojasiewicz_3d_with(s: &Support, exec: Execution) -> Result<ExponentReport, EngineError> {
    if s.dim() != 3 {
        return Err(EngineError::WrongDimension { expected: 3, found: s.dim() });
    }
    let verdict = check_isolated(s);
    if !verdict.ok {
        return Err(EngineError::NotIsolated(verdict.violations));
    }
    let b = build_boundary_with(s, exec);
    exponent_on_boundary_3d(&b)
}

pub(crate) fn exponent_on_boundary_3d(b: &NewtonBoundary) -> Result<ExponentReport, EngineError> {
    let table = face_table(b)?;
    if let Some((m, attaining)) = max_over_non_exceptional(&table) {
        return report(b, m - Rational::one(), ExponentCase::Generic, None, attaining, table);
    }
    let edges = hyperbolic_edges(b);
    match edges.as_slice() {
        [h] => report(
            b,
            Rational::from(h.alpha as i64 - 1),
            ExponentCase::HyperbolicEdge,
            Some(*h),
            vec![Attaining { face: h.face, axis: h.axis }],
            table,
        ),
        [] => Err(EngineError::MalformedBoundary(
            "every 2-face is exceptional but no edge joins a product of two variables to a power of the third".into(),
        )),
        more => Err(EngineError::MalformedBoundary(format!(
            "every 2-face is exceptional and {} candidate hyperbolic edges exist",
            more.len()
        ))),
    }
}

/// The plane-curve formula: the largest `m(S) − 1` over segments not
/// exceptional for either axis, or 1 when every segment is exceptional.
pub fn lojasiewicz_2d(s: &Support) -> Result<ExponentReport, EngineError> {
    if s.dim() != 2 {
        return Err(EngineError::WrongDimension { expected: 2, found: s.dim() });
    }
    let mut violations = low_degree_violations(s);
    violations.extend(nearly_convenient_violations(s));
    if !violations.is_empty() {
        return Err(EngineError::NotIsolated(violations));
    }
    let b = build_boundary_with(s, Execution::Sequential);
    let table = face_table(&b)?;
    match max_over_non_exceptional(&table) {
        Some((m, attaining)) => report(&b, m - Rational::one(), ExponentCase::Generic, None, attaining, table),
        None => report(&b, Rational::one(), ExponentCase::TwoDimDefault, None, Vec::new(), table),
    }
}

/// Dispatches on the dimension of the support.
pub fn lojasiewicz(s: &Support) -> Result<ExponentReport, EngineError> {
    match s.dim() {
        2 => lojasiewicz_2d(s),
        _ => lojasiewicz_3d(s),
    }
}

/// Evaluates independent supports, keeping input order.
pub fn lojasiewicz_batch(supports: &[Support], exec: Execution) -> Vec<Result<ExponentReport, EngineError>> {
    par::map(exec, supports, |s| match s.dim() {
        2 => lojasiewicz_2d(s),
        _ => lojasiewicz_3d_with(s, Execution::Sequential),
    })
}

/// The face chosen for an axis by the proximate-face route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximateChoice {
    pub axis: Axis,
    pub face: usize,
    pub intercept: Rational,
}

/// Per axis, the proximate face with the smallest id and its intercept.
pub fn proximate_choices(b: &NewtonBoundary) -> Result<Vec<ProximateChoice>, EngineError> {
    Axis::ALL
        .iter()
        .map(|&axis| {
            let faces = proximate_faces(b, axis)?;
            let f = faces.first().ok_or(EngineError::NoProximateFace(axis))?;
            let intercept = f.intercept(axis).cloned().expect("facet intercept");
            Ok(ProximateChoice { axis, face: f.id, intercept })
        })
        .collect()
}

/// `max_ω m(S_ω)_ω − 1` over one proximate face `S_ω` per axis.
pub fn exponent_via_proximate(s: &Support) -> Result<Rational, EngineError> {
    if s.dim() != 3 {
        return Err(EngineError::WrongDimension { expected: 3, found: s.dim() });
    }
    let verdict = check_isolated(s);
    if !verdict.ok {
        return Err(EngineError::NotIsolated(verdict.violations));
    }
    exponent_via_proximate_on(&build_boundary_with(s, Execution::Sequential))
}

pub(crate) fn exponent_via_proximate_on(b: &NewtonBoundary) -> Result<Rational, EngineError> {
    let best = proximate_choices(b)?.into_iter().map(|c| c.intercept).max().expect("three axes");
    Ok(best - Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;

    fn worked() -> Support {
        parse_polynomial("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5", 3).unwrap()
    }

    #[test]
    fn isolated_checks() {
        assert!(check_isolated(&worked()).ok);
        let v = check_isolated(&Support::from_points(3, [[2, 2, 0], [0, 0, 3]]));
        assert!(v.violations.contains(&Violation::NotNearlyConvenient(Axis::X)));
        assert!(v.violations.contains(&Violation::NotNearlyConvenient(Axis::Y)));
        assert!(!v.violations.contains(&Violation::NotNearlyConvenient(Axis::Z)));
        let v = check_isolated(&Support::from_points(3, [[1, 0, 0], [0, 2, 0], [0, 0, 2]]));
        assert_eq!(v.violations, vec![Violation::NotSingularAtZero]);
        let v = check_isolated(&Support::from_points(3, [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2]]));
        assert_eq!(v.violations, vec![Violation::ConstantTermPresent]);
        let v = check_isolated(&Support::from_points(3, [[3, 1, 1], [1, 3, 1], [1, 1, 3]]));
        assert!(v.violations.contains(&Violation::MissingCoordinatePlane(CoordinatePlane::Xy)));
        assert!(!v.ok);
    }

    #[test]
    fn hyperbolic_case() {
        for k in 2..10u32 {
            let r = lojasiewicz_3d(&Support::from_points(3, [[1, 1, 0], [0, 0, k]])).unwrap();
            assert_eq!(r.exponent, Rational::from(k as i64 - 1));
            assert_eq!(r.case, ExponentCase::HyperbolicEdge);
            assert_eq!(r.hyperbolic_edge.unwrap().axis, Axis::Z);
        }
        let r = lojasiewicz_3d(&Support::from_points(3, [[1, 1, 0], [0, 0, 5]])).unwrap();
        assert_eq!(r.sufficiency_degree, 5);
        assert!(matches!(
            exponent_via_proximate(&Support::from_points(3, [[1, 1, 0], [0, 0, 5]])),
            Err(EngineError::NoProximateFace(Axis::X))
        ));
    }

    #[test]
    fn brieskorn() {
        let r = lojasiewicz_3d(&Support::from_points(3, [[2, 0, 0], [0, 3, 0], [0, 0, 6]])).unwrap();
        assert_eq!(r.exponent, Rational::from(5));
        assert_eq!(r.case, ExponentCase::Generic);
        let s = Support::from_points(3, [[2, 0, 0], [0, 3, 0], [0, 0, 6]]);
        assert_eq!(exponent_via_proximate(&s).unwrap(), Rational::from(5));
    }

    #[test]
    fn worked_example() {
        let r = lojasiewicz_3d(&worked()).unwrap();
        assert_eq!(r.exponent, Rational::new(13, 3));
        assert_eq!(r.sufficiency_degree, 5);
        assert_eq!(r.attaining.len(), 1);
        assert_eq!(r.attaining[0].axis, Axis::X);
        let f = &r.faces.iter().find(|e| e.face.id == r.attaining[0].face).unwrap().face;
        assert_eq!(f.vertices.len(), 4);
        assert_eq!(exponent_via_proximate(&worked()).unwrap(), Rational::new(13, 3));
        let b = crate::boundary::build_boundary(&worked());
        let c = proximate_choices(&b).unwrap();
        let got: Vec<Rational> = c.iter().map(|c| c.intercept.clone()).collect();
        assert_eq!(got, vec![Rational::new(16, 3), Rational::from(4), Rational::from(5)]);
    }

    #[test]
    fn two_dim() {
        let cases: [(&[[u32; 2]], Rational, ExponentCase); 3] = [
            (&[[3, 0], [0, 2]], Rational::from(2), ExponentCase::Generic),
            (&[[1, 1]], Rational::from(1), ExponentCase::TwoDimDefault),
            (&[[5, 0], [2, 1], [0, 3]], Rational::from(2), ExponentCase::Generic),
        ];
        for (pts, l, case) in cases {
            let r = lojasiewicz_2d(&Support::from_points(2, pts.iter().copied())).unwrap();
            assert_eq!((r.exponent, r.case), (l, case));
        }
        assert!(matches!(
            lojasiewicz_2d(&Support::from_points(2, [[2, 2]])),
            Err(EngineError::NotIsolated(_))
        ));
    }

    #[test]
    fn sufficiency() {
        assert_eq!(sufficiency_degree(&Rational::new(13, 3)).unwrap(), 5);
        assert_eq!(sufficiency_degree(&Rational::from(4)).unwrap(), 5);
        assert_eq!(sufficiency_degree(&Rational::from(2)).unwrap(), 3);
        assert!(sufficiency_degree(&Rational::new(1, 2)).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            lojasiewicz_3d(&Support::from_points(3, [[2, 2, 0], [0, 0, 3]])),
            Err(EngineError::NotIsolated(_))
        ));
        assert!(matches!(
            lojasiewicz_3d(&Support::from_points(2, [[2, 0], [0, 2]])),
            Err(EngineError::WrongDimension { .. })
        ));
    }

    #[test]
    fn batch_keeps_order() {
        let inputs: Vec<Support> = (2..8u32).map(|k| Support::from_points(3, [[1, 1, 0], [0, 0, k]])).collect();
        let seq = lojasiewicz_batch(&inputs, Execution::Sequential);
        let par = lojasiewicz_batch(&inputs, Execution::Parallel);
        assert_eq!(seq, par);
        assert_eq!(seq[3].as_ref().unwrap().exponent, Rational::from(4));
    }
}
