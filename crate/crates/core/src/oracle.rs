//! Independent checks: a definition-level boundary construction and lower
//! bounds for the exponent from monomial curves `z_i = c_i t^{v_i}`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{build_boundary, NewtonBoundary, RawFace};
use crate::lattice::{affine_dim, cross, dot, make_primitive, rank, sub, Axis, ExponentVector, Rational, WeightVector};
use crate::par::{self, Execution};
use crate::parser::{Coefficient, Support};

/// Default point cap for [`brute_force_boundary`].
pub const BRUTE_FORCE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute-force construction is capped at {cap} points, got {found}")]
    TooManyPoints { found: usize, cap: usize },
    #[error("path evaluation needs concrete coefficients")]
    GenericCoefficient,
    #[error("path has {found} coordinates, support has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("path has no finite exponent, or a zero exponent")]
    InvalidPath,
}

/// A curve `z_i = c_i t^{v_i}`; `None` marks a coordinate that vanishes
/// identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialPath {
    pub exponents: Vec<Option<u64>>,
    pub coefficients: Vec<Rational>,
}

impl MonomialPath {
    pub fn new(exponents: Vec<Option<u64>>, coefficients: Vec<Rational>) -> Result<MonomialPath, OracleError> {
        if exponents.len() != coefficients.len()
            || exponents.iter().all(Option::is_none)
            || exponents.contains(&Some(0))
            || coefficients.iter().any(Rational::is_zero)
        {
            return Err(OracleError::InvalidPath);
        }
        Ok(MonomialPath { exponents, coefficients })
    }

    /// `t ↦ (…, t, …)` along one axis.
    pub fn axis(dim: usize, axis: Axis) -> MonomialPath {
        let exponents = (0..dim).map(|i| (i == axis.index()).then_some(1)).collect();
        MonomialPath { exponents, coefficients: vec![Rational::one(); dim] }
    }

    pub fn order(&self) -> u64 {
        self.exponents.iter().flatten().copied().min().expect("finite exponent")
    }

    fn sort_key(&self) -> Vec<u64> {
        self.exponents.iter().map(|e| e.unwrap_or(u64::MAX)).collect()
    }
}

impl std::fmt::Display for MonomialPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(e, c)| match e {
                None => "0".to_string(),
                Some(1) => format!("{c}*t"),
                Some(e) => format!("{c}*t^{e}"),
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Orders along a path. `None` stands for infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathOrders {
    pub gradient_order: Option<u64>,
    pub path_order: u64,
    pub ratio: Option<Rational>,
}

/// Exact expansion of `g ∘ Φ` as `order ↦ coefficient`, zero terms dropped.
fn compose(g: &Support, path: &MonomialPath) -> Result<BTreeMap<u64, Rational>, OracleError> {
    let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
    for (e, c) in g.iter() {
        let Coefficient::Exact(c) = c else {
            return Err(OracleError::GenericCoefficient);
        };
        let mut order = 0u64;
        let mut coeff = c.clone();
        let mut vanishes = false;
        for (i, &k) in e.coords().iter().enumerate() {
            if k == 0 {
                continue;
            }
            match path.exponents[i] {
                None => {
                    vanishes = true;
                    break;
                }
                Some(v) => {
                    order += v * k as u64;
                    coeff = coeff * path.coefficients[i].pow(k);
                }
            }
        }
        if vanishes {
            continue;
        }
        let slot = out.entry(order).or_insert_with(Rational::zero);
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            out.remove(&order);
        }
    }
    Ok(out)
}

/// Lowest order each term of `g ∘ Φ` could have, ignoring cancellation.
fn symbolic_order(g: &Support, path: &MonomialPath) -> Option<u64> {
    g.points()
        .filter_map(|e| {
            e.coords().iter().enumerate().try_fold(0u64, |acc, (i, &k)| match (k, path.exponents[i]) {
                (0, _) => Some(acc),
                (_, None) => None,
                (k, Some(v)) => Some(acc + v * k as u64),
            })
        })
        .min()
}

/// `ord(∇f ∘ Φ)`, `ord Φ` and their ratio for a support with concrete
/// coefficients.
pub fn path_orders(s: &Support, path: &MonomialPath) -> Result<PathOrders, OracleError> {
    if path.exponents.len() != s.dim() {
        return Err(OracleError::DimensionMismatch { expected: s.dim(), found: path.exponents.len() });
    }
    let mut gradient_order: Option<u64> = None;
    for &axis in Axis::all(s.dim()) {
        let expansion = compose(&s.derivative(axis), path)?;
        if let Some((&o, _)) = expansion.iter().next() {
            gradient_order = Some(gradient_order.map_or(o, |g| g.min(o)));
        }
    }
    let path_order = path.order();
    let ratio = gradient_order.map(|g| Rational::new(g as i64, path_order as i64));
    Ok(PathOrders { gradient_order, path_order, ratio })
}

fn generic_value(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1i64..=1_000_000), rng.gen_range(1i64..=1_000))
}

/// Replaces every generic coefficient by a seeded random rational.
pub fn instantiate(s: &Support, seed: u64) -> Support {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Support::new(s.dim());
    for (e, c) in s.iter() {
        let c = match c {
            Coefficient::Generic => Coefficient::Exact(generic_value(&mut rng)),
            exact => exact.clone(),
        };
        out.insert(e.clone(), c);
    }
    out
}

/// Replaces every coefficient, exact or generic, by a seeded random
/// non-zero rational of random sign.
pub fn randomize_coefficients(s: &Support, seed: u64) -> Support {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Support::new(s.dim());
    for e in s.points() {
        let v = generic_value(&mut rng);
        let v = if rng.gen_bool(0.5) { -v } else { v };
        out.insert(e.clone(), Coefficient::Exact(v));
    }
    out
}

const PATH_REDRAWS: usize = 8;

/// Evaluates a path shape with seeded coefficients, redrawing them when a
/// partial derivative loses its leading term to cancellation.
fn evaluate_shape(f: &Support, exponents: &[Option<u64>], seed: u64, stream: u64) -> Result<(PathOrders, MonomialPath), OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let partials: Vec<Support> = Axis::all(f.dim()).iter().map(|&a| f.derivative(a)).collect();
    let mut last = None;
    for attempt in 0..PATH_REDRAWS {
        let coefficients = exponents
            .iter()
            .map(|_| {
                let v = generic_value(&mut rng);
                if attempt > 0 && rng.gen_bool(0.5) {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let path = MonomialPath::new(exponents.to_vec(), coefficients)?;
        let clean = partials.iter().all(|g| {
            let actual = compose(g, &path).ok().and_then(|m| m.keys().next().copied());
            actual == symbolic_order(g, &path)
        });
        let orders = path_orders(f, &path)?;
        if clean {
            return Ok((orders, path));
        }
        last = Some((orders, path));
    }
    Ok(last.expect("at least one draw"))
}

/// Result of [`sweep_lower_bound`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub bound: Rational,
    pub witness: MonomialPath,
    pub paths_tested: usize,
}

/// Path shapes tried by the sweep: the coordinate axes, every facet normal,
/// and a positive supporting vector of every codimension-2 face.
pub fn sweep_family(b: &NewtonBoundary) -> Vec<Vec<Option<u64>>> {
    let n = b.dim();
    let mut shapes: Vec<Vec<Option<u64>>> =
        Axis::all(n).iter().map(|&a| MonomialPath::axis(n, a).exponents).collect();
    let weight = |w: &WeightVector| w.coords().iter().map(|&c| Some(c as u64)).collect::<Vec<_>>();
    for f in b.faces() {
        if f.dim == n - 1 {
            shapes.push(weight(f.normal.as_ref().expect("facet normal")));
        } else if f.dim + 2 == n {
            shapes.push(weight(&f.supporting));
        }
    }
    let mut seen = BTreeSet::new();
    shapes.retain(|s| seen.insert(s.clone()));
    shapes
}

/// Largest ratio over the sweep family; a certified lower bound for the
/// exponent. Ties go to the lexicographically smallest exponent vector.
pub fn sweep_lower_bound(s: &Support, seed: u64) -> Result<SweepResult, OracleError> {
    sweep_lower_bound_with(s, seed, Execution::default())
}

pub fn sweep_lower_bound_with(s: &Support, seed: u64, exec: Execution) -> Result<SweepResult, OracleError> {
    let f = instantiate(s, seed);
    let b = build_boundary(s);
    let shapes = sweep_family(&b);
    let results = par::map_range(exec, shapes.len(), |i| evaluate_shape(&f, &shapes[i], seed, i as u64 + 1));
    let mut best: Option<(Rational, MonomialPath)> = None;
    for r in results {
        let (orders, path) = r?;
        let Some(ratio) = orders.ratio else { continue };
        let better = match &best {
            None => true,
            Some((b, w)) => ratio > *b || (ratio == *b && path.sort_key() < w.sort_key()),
        };
        if better {
            best = Some((ratio, path));
        }
    }
    let (bound, witness) = best.expect("axis paths always have finite ratio on an isolated singularity");
    Ok(SweepResult { bound, witness, paths_tested: shapes.len() })
}

/// Face lattice straight from the definition: candidate normals from all
/// pairs of point differences and coordinate directions, facets of Γ₊ among
/// them, and compact faces cut out by positive sums of at most `n` facet
/// normals.
pub fn brute_force_boundary(s: &Support) -> Result<NewtonBoundary, OracleError> {
    brute_force_boundary_with(s, BRUTE_FORCE_CAP, Execution::default())
}

pub fn brute_force_boundary_with(s: &Support, cap: usize, exec: Execution) -> Result<NewtonBoundary, OracleError> {
    if s.len() > cap {
        return Err(OracleError::TooManyPoints { found: s.len(), cap });
    }
    let n = s.dim();
    let support: Vec<ExponentVector> = s.point_vec();
    let pts: Vec<[i128; 3]> = support.iter().map(ExponentVector::lift).collect();
    let units: Vec<[i128; 3]> = (0..n)
        .map(|i| {
            let mut e = [0i128; 3];
            e[i] = 1;
            e
        })
        .collect();
    let mut dirs: Vec<[i128; 3]> = units.clone();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            dirs.push(sub(&pts[j], &pts[i]));
        }
    }

    let candidates: Vec<Vec<[i128; 3]>> = par::map_range(exec, dirs.len(), |i| {
        let raw: Vec<[i128; 3]> = if n == 2 {
            vec![[-dirs[i][1], dirs[i][0], 0]]
        } else {
            dirs[i + 1..].iter().map(|d| cross(&dirs[i], d)).collect()
        };
        raw.into_iter()
            .filter_map(|c| {
                let c = if c.iter().all(|&x| x <= 0) { [-c[0], -c[1], -c[2]] } else { c };
                if c.iter().any(|&x| x < 0) || c.iter().all(|&x| x == 0) {
                    return None;
                }
                let p = make_primitive(&c);
                Some([p[0], p[1], p[2]])
            })
            .collect()
    });
    let candidates: BTreeSet<[i128; 3]> = candidates.into_iter().flatten().collect();

    let argmin = |v: &[i128; 3]| -> Vec<usize> {
        let best = pts.iter().map(|p| dot(v, p)).min().expect("non-empty support");
        (0..pts.len()).filter(|&k| dot(v, &pts[k]) == best).collect()
    };

    // facets of Γ₊: faces of dimension n − 1, bounded or not
    let facets: Vec<[i128; 3]> = candidates
        .iter()
        .filter(|v| {
            let on = argmin(v);
            let mut spanning: Vec<[i128; 3]> = on.iter().map(|&k| sub(&pts[k], &pts[on[0]])).collect();
            spanning.extend((0..n).filter(|&i| v[i] == 0).map(|i| units[i]));
            rank(&spanning) == n - 1
        })
        .copied()
        .collect();

    let mut sums: Vec<[i128; 3]> = Vec::new();
    let m = facets.len();
    for a in 0..m {
        sums.push(facets[a]);
        for b in a + 1..m {
            let ab = add(&facets[a], &facets[b]);
            sums.push(ab);
            if n == 3 {
                for fc in &facets[b + 1..] {
                    sums.push(add(&ab, fc));
                }
            }
        }
    }
    let mut faces: BTreeMap<Vec<usize>, [i128; 3]> = BTreeMap::new();
    for w in sums.into_iter().filter(|w| w[..n].iter().all(|&x| x > 0)) {
        faces.entry(argmin(&w)).or_insert(w);
    }

    let vertex_ids: Vec<usize> = faces.keys().filter(|on| on.len() == 1).map(|on| on[0]).collect();
    let raw = faces
        .into_iter()
        .map(|(on, w)| {
            let on_pts: Vec<[i128; 3]> = on.iter().map(|&k| pts[k]).collect();
            let weight = WeightVector::new(make_primitive(&w[..n]).iter().map(|&x| x as i64).collect())
                .expect("positive weight");
            RawFace {
                points: on.iter().map(|&k| support[k].clone()).collect(),
                vertices: vertex_ids.iter().filter(|k| on.contains(k)).map(|&k| support[k].clone()).collect(),
                normal: (affine_dim(&on_pts, &[]) == n - 1).then(|| weight.clone()),
                supporting: weight,
            }
        })
        .collect();
    Ok(NewtonBoundary::assemble(s, raw))
}

fn add(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;

    fn p3(text: &str) -> Support {
        parse_polynomial(text, 3).unwrap()
    }

    #[test]
    fn axis_path_orders() {
        let z = MonomialPath::axis(3, Axis::Z);
        let r = path_orders(&p3("x^2 + y^3 + z^6"), &z).unwrap();
        assert_eq!((r.gradient_order, r.path_order, r.ratio), (Some(5), 1, Some(Rational::from(5))));
        let r = path_orders(&p3("x*y + z^5"), &z).unwrap();
        assert_eq!(r.ratio, Some(Rational::from(4)));
        let r = path_orders(&p3("x^2 + y^2 + z^2"), &MonomialPath::axis(3, Axis::X)).unwrap();
        assert_eq!(r.ratio, Some(Rational::one()));
    }

    #[test]
    fn vanishing_gradient_is_infinite() {
        // the gradient of (x − y)² vanishes on x = y
        let f = p3("x^2 - 2*x*y + y^2");
        let path = MonomialPath::new(vec![Some(1), Some(1), None], vec![Rational::one(); 3]).unwrap();
        let r = path_orders(&f, &path).unwrap();
        assert_eq!((r.gradient_order, r.ratio), (None, None));
    }

    #[test]
    fn invalid_inputs() {
        assert!(MonomialPath::new(vec![None, None], vec![Rational::one(); 2]).is_err());
        assert!(MonomialPath::new(vec![Some(0), Some(1)], vec![Rational::one(); 2]).is_err());
        let generic = Support::from_points(3, [[2, 0, 0]]);
        assert_eq!(path_orders(&generic, &MonomialPath::axis(3, Axis::X)), Err(OracleError::GenericCoefficient));
        assert!(matches!(
            path_orders(&p3("x^2"), &MonomialPath::axis(2, Axis::X)),
            Err(OracleError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sweeps() {
        let r = sweep_lower_bound(&Support::from_points(3, [[2, 0, 0], [0, 3, 0], [0, 0, 6]]), 0).unwrap();
        assert_eq!(r.bound, Rational::from(5));
        assert_eq!(r.witness.exponents, vec![None, None, Some(1)]);
        let r = sweep_lower_bound(&Support::from_points(3, [[1, 1, 0], [0, 0, 5]]), 0).unwrap();
        assert_eq!(r.bound, Rational::from(4));
        assert_eq!(r.witness.exponents, vec![None, None, Some(1)]);
        let r = sweep_lower_bound(&p3("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5"), 7).unwrap();
        assert!(r.bound >= Rational::from(4) && r.bound <= Rational::new(13, 3));
    }

    #[test]
    fn sweep_is_deterministic() {
        let s = p3("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5").generic();
        let a = sweep_lower_bound_with(&s, 3, Execution::Sequential).unwrap();
        let b = sweep_lower_bound_with(&s, 3, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normal_path_order() {
        // generic coefficients: ord ∇f∘Φ = l − max v for Φ along a facet normal
        let s = instantiate(&p3("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5").generic(), 11);
        let path = MonomialPath::new(vec![Some(3), Some(4), Some(4)], vec![Rational::new(2, 7); 3]).unwrap();
        assert_eq!(path_orders(&s, &path).unwrap().gradient_order, Some(16 - 4));
    }

    #[test]
    fn brute_force_matches_examples() {
        let s = p3("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5");
        let a = build_boundary(&s);
        let b = brute_force_boundary(&s).unwrap();
        assert_eq!(b.facets().count(), 3);
        assert!(a.same_lattice(&b), "{:#?}\n{:#?}", a.faces(), b.faces());
        let s = Support::from_points(3, [[1, 1, 0], [0, 0, 5]]);
        let b = brute_force_boundary(&s).unwrap();
        assert_eq!((b.edges().count(), b.facets().count()), (1, 0));
        assert!(build_boundary(&s).same_lattice(&b));
        let s = Support::from_points(2, [[5, 0], [2, 1], [0, 3], [4, 4]]);
        assert!(build_boundary(&s).same_lattice(&brute_force_boundary(&s).unwrap()));
        let big = Support::from_points(3, (1..=17u32).map(|k| [k, 17 - k, 1]));
        assert!(matches!(brute_force_boundary(&big), Err(OracleError::TooManyPoints { found: 17, cap: 16 })));
    }

    #[test]
    fn coefficient_helpers() {
        let s = Support::from_points(3, [[2, 0, 0], [0, 2, 0]]);
        let a = instantiate(&s, 5);
        assert_eq!(a, instantiate(&s, 5));
        assert!(!a.has_generic());
        let r = randomize_coefficients(&p3("x^2 + y^2"), 9);
        assert_eq!(r.point_vec(), p3("x^2 + y^2").point_vec());
    }
}
