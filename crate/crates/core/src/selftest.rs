//! The built-in acceptance suite behind `newtloj selftest`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::build_boundary;
use crate::classify::{exceptional_axes, axis_edge_audit, proximate_faces, proximity_axes, structural_audit};
use crate::engine::{exponent_via_proximate, lojasiewicz_2d, lojasiewicz_3d, ExponentCase};
use crate::lattice::{Axis, ExponentVector, Rational, WeightVector};
use crate::mixed_volume::{
    area2, face_mixed_volume, minkowski_sum, mixed_volume_2, mv_zero_reason, MvZeroReason, Point2, Polygon2,
};
use crate::oracle::{
    brute_force_boundary, instantiate, path_orders, randomize_coefficients, sweep_lower_bound, MonomialPath,
};
use crate::par::{self, Execution};
use crate::parser::{parse_json, parse_polynomial, serialize_support, support_to_json, Coefficient, Support};
use crate::sample::{random_isolated_support, SampleBounds};
use crate::Error;

/// The worked example with a parallelogram face.
pub const WORKED_EXAMPLE: &str = "(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5";
/// A surface whose only 2-face is exceptional for the z axis.
pub const EXCEPTIONAL_EXAMPLE: &str = "x*z + y*z + y^3";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Only the deterministic fixture criteria.
    pub quick: bool,
    /// Deliberately corrupts one expected constant (negative control).
    pub corrupt: bool,
    pub exec: Execution,
}

type Check = fn(&SelftestConfig) -> Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
    /// Part of the quick run.
    pub fixture: bool,
    check: Check,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.3}s, limit {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, fixture, check| Criterion { id, name, limit: Duration::from_secs(secs), fixture, check };
    vec![
        c(1, "hyperbolic-edge family", 1, true, hyperbolic_family as Check),
        c(2, "Brieskorn sweep", 5, true, brieskorn_sweep),
        c(3, "worked example", 1, true, worked_example),
        c(4, "exceptional example", 1, true, exceptional_example),
        c(5, "plane curves", 1, true, plane_curves),
        c(6, "random property suite", 60, false, property_suite),
        c(7, "mixed-volume identities", 10, false, mixed_volume_identities),
        c(8, "parser round-trip", 5, false, parser_round_trip),
    ]
}

pub fn run_criterion(c: &Criterion, cfg: &SelftestConfig) -> Outcome {
    let start = Instant::now();
    let result = (c.check)(cfg);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > c.limit {
        passed = false;
        detail = format!("{detail}; exceeded the time limit");
    }
    Outcome { id: c.id, name: c.name, passed, detail, elapsed, limit: c.limit }
}

pub fn run(cfg: &SelftestConfig) -> Vec<Outcome> {
    criteria().iter().filter(|c| c.fixture || !cfg.quick).map(|c| run_criterion(c, cfg)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn hyperbolic_family(_: &SelftestConfig) -> Result<String, String> {
    for k in 2..=9u32 {
        let r = lojasiewicz_3d(&Support::from_points(3, [[1, 1, 0], [0, 0, k]])).map_err(fmt_err)?;
        let want = Rational::from(k as i64 - 1);
        ensure(r.exponent == want && r.case == ExponentCase::HyperbolicEdge, || {
            format!("{{xy, z^{k}}}: got {} ({:?}), expected {want}", r.exponent, r.case)
        })?;
    }
    Ok("k = 2..9 give k - 1".into())
}

fn brieskorn_sweep(cfg: &SelftestConfig) -> Result<String, String> {
    let mut triples = Vec::new();
    for m in 2..=6u32 {
        for n in 2..=6u32 {
            for k in 2..=6u32 {
                triples.push([m, n, k]);
            }
        }
    }
    let results = par::map(cfg.exec, &triples, |&[m, n, k]| -> Result<(), String> {
        let s = Support::from_points(3, [[m, 0, 0], [0, n, 0], [0, 0, k]]);
        let want = Rational::from(m.max(n).max(k) as i64 - 1);
        let r = lojasiewicz_3d(&s).map_err(fmt_err)?;
        ensure(r.exponent == want, || format!("({m},{n},{k}): exponent {} != {want}", r.exponent))?;
        let sw = sweep_lower_bound(&s, cfg.seed).map_err(fmt_err)?;
        ensure(sw.bound == want, || format!("({m},{n},{k}): sweep bound {} via {}", sw.bound, sw.witness))?;
        let f = instantiate(&s, cfg.seed);
        let on_axis = Axis::ALL
            .iter()
            .filter_map(|&a| path_orders(&f, &MonomialPath::axis(3, a)).ok().and_then(|o| o.ratio))
            .max();
        ensure(on_axis.as_ref() == Some(&want), || format!("({m},{n},{k}): best axis path gives {on_axis:?}"))
    });
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} triples, exponent and axis-path bound equal max - 1", triples.len()))
}

fn worked_example(cfg: &SelftestConfig) -> Result<String, String> {
    let expected = if cfg.corrupt { Rational::new(14, 3) } else { Rational::new(13, 3) };
    let s = parse_polynomial(WORKED_EXAMPLE, 3).map_err(fmt_err)?;
    let b = build_boundary(&s);
    let facets: Vec<_> = b.facets().collect();
    ensure(facets.len() == 3, || format!("{} 2-faces, expected 3", facets.len()))?;
    let exceptional = facets.iter().filter(|f| !exceptional_axes(f).map(|e| e.is_empty()).unwrap_or(true)).count();
    ensure(exceptional == 1, || format!("{exceptional} exceptional faces, expected 1"))?;
    let s1 = facets.iter().find(|f| f.normal == Some(WeightVector::from([3, 4, 4])));
    let s1 = s1.ok_or("no face with normal (3,4,4)")?;
    let p = Polygon2::newton(&parse_polynomial("1 + x^3 + 3*x^2*y", 2).map_err(fmt_err)?);
    let q = Polygon2::newton(&parse_polynomial("1 + x^3", 2).map_err(fmt_err)?);
    let mv = mixed_volume_2(&p, &q);
    ensure(mv == Rational::from(3), || format!("MV = {mv}, expected 3"))?;
    let face_mv = face_mixed_volume(&b, s1.id, Axis::X).map_err(fmt_err)?;
    ensure(face_mv.mixed_volume == Rational::from(3), || format!("face MV = {}", face_mv.mixed_volume))?;
    let r = lojasiewicz_3d(&s).map_err(fmt_err)?;
    ensure(r.exponent == expected, || format!("exponent {} != expected {expected}", r.exponent))?;
    Ok(format!("3 faces (1 exceptional), normal (3,4,4), MV 3, exponent {}", r.exponent))
}

fn exceptional_example(_: &SelftestConfig) -> Result<String, String> {
    let b = build_boundary(&parse_polynomial(EXCEPTIONAL_EXAMPLE, 3).map_err(fmt_err)?);
    let facets: Vec<_> = b.facets().collect();
    ensure(facets.len() == 1, || format!("{} 2-faces, expected 1", facets.len()))?;
    let f = facets[0];
    let exc = exceptional_axes(f).map_err(fmt_err)?;
    ensure(exc == [Axis::Z], || format!("exceptional axes {exc:?}, expected [z]"))?;
    let prox = proximity_axes(f).map_err(fmt_err)?;
    ensure(prox.contains(&Axis::X), || format!("proximity axes {prox:?} miss x"))?;
    let pz = proximate_faces(&b, Axis::Z).map_err(fmt_err)?;
    ensure(pz.is_empty(), || format!("{} proximate faces for z", pz.len()))?;
    Ok("exceptional for z, proximate for x, no proximate face for z".into())
}

fn plane_curves(_: &SelftestConfig) -> Result<String, String> {
    let cases: [(&[[u32; 2]], i64); 3] = [(&[[3, 0], [0, 2]], 2), (&[[1, 1]], 1), (&[[5, 0], [2, 1], [0, 3]], 2)];
    for (pts, want) in cases {
        let r = lojasiewicz_2d(&Support::from_points(2, pts.iter().copied())).map_err(fmt_err)?;
        ensure(r.exponent == Rational::from(want), || format!("{pts:?}: {} != {want}", r.exponent))?;
    }
    Ok("2, 1, 2".into())
}

/// The random instances of the property suite.
pub fn property_instances(seed: u64, count: usize) -> Vec<Support> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let points = rng.gen_range(3..=12);
            random_isolated_support(&mut rng, 3, SampleBounds { points, max_exponent: 12 })
                .expect("isolated supports are plentiful at these bounds")
        })
        .collect()
}

/// Checks properties (a)-(h) on one support.
pub fn check_instance(s: &Support, seed: u64) -> Result<(), String> {
    let text = serialize_support(s);
    let fail = |tag: &str, msg: String| format!("({tag}) {text}: {msg}");
    let b = build_boundary(s);
    let brute = brute_force_boundary(s).map_err(|e| fail("a", e.to_string()))?;
    ensure(b.same_lattice(&brute), || fail("a", "boundary differs from brute force".into()))?;

    let report = lojasiewicz_3d(s).map_err(|e| fail("b", e.to_string()))?;
    if report.case == ExponentCase::Generic {
        let via = exponent_via_proximate(s).map_err(|e| fail("b", e.to_string()))?;
        ensure(via == report.exponent, || fail("b", format!("proximate route {via} != {}", report.exponent)))?;
    }

    for f in b.facets() {
        let exc = exceptional_axes(f).map_err(|e| fail("d", e.to_string()))?;
        ensure(exc.len() <= 1, || fail("d", format!("face {} exceptional for {exc:?}", f.id)))?;
    }
    for axis in Axis::ALL {
        let prox = proximate_faces(&b, axis).map_err(|e| fail("c", e.to_string()))?;
        let mut non_exc = Vec::new();
        for f in b.facets() {
            if !exceptional_axes(f).map_err(|e| fail("c", e.to_string()))?.contains(&axis) {
                non_exc.push(f);
            }
        }
        ensure(prox.is_empty() == non_exc.is_empty(), || fail("c", format!("axis {axis}")))?;
        if let Some(best) = non_exc.iter().filter_map(|f| f.intercept(axis)).max() {
            ensure(prox.iter().any(|f| f.intercept(axis) == Some(best)), || {
                fail("e", format!("largest {axis}-intercept {best} not on a proximate face"))
            })?;
        }
        for f in &prox {
            ensure(axis_edge_audit(f, axis), || fail("f", format!("face {} axis {axis}", f.id)))?;
        }
    }
    structural_audit(&b).map_err(|e| fail("c-f", e.to_string()))?;

    let sweep = sweep_lower_bound(s, seed).map_err(|e| fail("g", e.to_string()))?;
    ensure(sweep.bound <= report.exponent, || {
        fail("g", format!("path {} gives {} > {}", sweep.witness, sweep.bound, report.exponent))
    })?;

    let again = lojasiewicz_3d(&randomize_coefficients(s, seed)).map_err(|e| fail("h", e.to_string()))?;
    ensure(again == report, || fail("h", "report depends on coefficients".into()))?;
    Ok(())
}

fn property_suite(cfg: &SelftestConfig) -> Result<String, String> {
    let instances = property_instances(cfg.seed, 300);
    let results = par::map_range(cfg.exec, instances.len(), |i| check_instance(&instances[i], cfg.seed ^ i as u64));
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok("300 instances satisfy (a)-(h)".into())
}

/// A random lattice polygon: a point, a segment, or the hull of a few points.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> Polygon2 {
    let pt = |rng: &mut ChaCha8Rng| Point2::new(rng.gen_range(-8i64..=8), rng.gen_range(-8i64..=8));
    match rng.gen_range(0..6) {
        0 => Polygon2::hull([pt(rng)]),
        1 => Polygon2::hull([pt(rng), pt(rng)]),
        _ => {
            let k = rng.gen_range(3..=7);
            Polygon2::hull((0..k).map(|_| pt(rng)).collect::<Vec<_>>())
        }
    }
}

/// A segment parallel to `p` (which must be a segment).
fn parallel_segment(p: &Polygon2, rng: &mut ChaCha8Rng) -> Polygon2 {
    let v = p.vertices();
    let d = Point2(&v[1].0 - &v[0].0, &v[1].1 - &v[0].1);
    let k = Rational::from(rng.gen_range(1i64..=3));
    let o = Point2::new(rng.gen_range(-8i64..=8), rng.gen_range(-8i64..=8));
    Polygon2::hull([o.clone(), Point2(&o.0 + &(&d.0 * &k), &o.1 + &(&d.1 * &k))])
}

fn mixed_volume_identities(cfg: &SelftestConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d76);
    let mut zero = 0;
    for i in 0..200 {
        let p = random_polygon(&mut rng);
        let q = if p.is_segment() && rng.gen_bool(0.3) { parallel_segment(&p, &mut rng) } else { random_polygon(&mut rng) };
        let tag = |msg: &str| format!("pair {i} ({:?}, {:?}): {msg}", p.vertices(), q.vertices());
        let mv = mixed_volume_2(&p, &q);
        ensure(mv == mixed_volume_2(&q, &p), || tag("not symmetric"))?;
        ensure(!mv.is_negative(), || tag("negative"))?;
        let t = Point2::new(rng.gen_range(-5i64..=5), rng.gen_range(-5i64..=5));
        ensure(mixed_volume_2(&p.translated(&t), &q) == mv, || tag("not translation invariant"))?;
        let lambda = rng.gen_range(0i64..=4);
        ensure(mixed_volume_2(&p.scaled(lambda), &q) == &mv * &Rational::from(lambda), || tag("not linear"))?;
        ensure(area2(&minkowski_sum(&p, &q)) == &(&area2(&p) + &area2(&q)) + &mv, || tag("area identity"))?;
        let reason = mv_zero_reason(&p, &q).map_err(|e| tag(&e.to_string()))?;
        ensure((reason == MvZeroReason::None) == mv.is_positive(), || tag("zero reason"))?;
        if !mv.is_positive() {
            zero += 1;
        }
    }
    Ok(format!("200 pairs ({zero} with zero mixed volume)"))
}

fn random_exact_support(rng: &mut ChaCha8Rng) -> Support {
    let dim = if rng.gen_bool(0.5) { 2 } else { 3 };
    let mut s = Support::new(dim);
    let target = rng.gen_range(1..=10);
    while s.len() < target {
        let e: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=12)).collect();
        let num = rng.gen_range(1i64..=50) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let c = Rational::new(num, rng.gen_range(1i64..=20));
        s.insert(ExponentVector::new(e).expect("small exponent"), Coefficient::Exact(c));
    }
    s
}

/// Fixture polynomials used in the documentation and the suites.
pub const FIXTURES: [(&str, usize); 7] = [
    (WORKED_EXAMPLE, 3),
    (EXCEPTIONAL_EXAMPLE, 3),
    ("x*y + z^5", 3),
    ("x^2 + y^3 + z^6", 3),
    ("x^5 + x^2*y + y^3", 2),
    ("x^3 + y^2", 2),
    ("x*y", 2),
];

fn parser_round_trip(cfg: &SelftestConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7061);
    let mut supports: Vec<Support> = (0..300).map(|_| random_exact_support(&mut rng)).collect();
    for (text, dim) in FIXTURES {
        supports.push(parse_polynomial(text, dim).map_err(fmt_err)?);
    }
    for s in &supports {
        let text = serialize_support(s);
        let back = parse_polynomial(&text, s.dim()).map_err(|e| format!("{text}: {e}"))?;
        ensure(&back == s, || format!("text round-trip changed {text}"))?;
        let json = support_to_json(s);
        let back = parse_json(&json, Some(s.dim())).map_err(|e| format!("{json}: {e}"))?;
        ensure(&back == s, || format!("JSON round-trip changed {json}"))?;
    }
    for bad in ["", "x^2 - x^2", "x^2 +", "2x", "x^2 + w"] {
        match parse_polynomial(bad, 3) {
            Ok(_) => return Err(format!("{bad:?} parsed")),
            Err(e) => {
                let code = Error::from(e).exit_code();
                ensure(code == 2, || format!("{bad:?} maps to exit code {code}"))?;
            }
        }
    }
    Ok(format!("{} supports round-trip; 5 malformed inputs rejected", supports.len()))
}
