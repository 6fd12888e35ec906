//! Acceptance criteria, one line of output per criterion.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newtloj::boundary::build_boundary;
use newtloj::classify::{exceptional_axes, axis_edge_audit, proximate_faces, proximity_axes};
use newtloj::engine::{exponent_via_proximate, lojasiewicz_2d, lojasiewicz_3d, ExponentCase};
use newtloj::mixed_volume::{area2, minkowski_sum, mixed_volume_2, mv_zero_reason, MvZeroReason, Point2, Polygon2};
use newtloj::oracle::{brute_force_boundary, instantiate, path_orders, randomize_coefficients, sweep_lower_bound, MonomialPath};
use newtloj::parser::{parse_json, parse_polynomial, serialize_support, support_to_json, Coefficient};
use newtloj::sample::{random_isolated_support, SampleBounds};
use newtloj::selftest::{random_polygon, FIXTURES};
use newtloj::{Axis, ExponentVector, Rational, Support, WeightVector};

type Outcome = Result<String, String>;
type Entry = (u8, &'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(n: i64) -> Rational {
    Rational::from(n)
}

fn criterion_1() -> Outcome {
    for k in 2..=9u32 {
        let r = lojasiewicz_3d(&Support::from_points(3, [[1, 1, 0], [0, 0, k]])).map_err(|e| e.to_string())?;
        check(r.exponent == int(k as i64 - 1), || format!("k = {k}: {}", r.exponent))?;
        check(r.case == ExponentCase::HyperbolicEdge, || format!("k = {k}: case {:?}", r.case))?;
    }
    Ok("{xy, z^k} -> k - 1 for k = 2..9".into())
}

fn criterion_2() -> Outcome {
    for m in 2..=6u32 {
        for n in 2..=6u32 {
            for k in 2..=6u32 {
                let s = Support::from_points(3, [[m, 0, 0], [0, n, 0], [0, 0, k]]);
                let want = int(m.max(n).max(k) as i64 - 1);
                let r = lojasiewicz_3d(&s).map_err(|e| e.to_string())?;
                check(r.exponent == want, || format!("({m},{n},{k}): {}", r.exponent))?;
                let sweep = sweep_lower_bound(&s, 0).map_err(|e| e.to_string())?;
                check(sweep.bound == want, || format!("({m},{n},{k}): sweep {}", sweep.bound))?;
                // the axis of the largest exponent carries a path attaining the bound
                let f = instantiate(&s, 0);
                let axis = [(m, Axis::X), (n, Axis::Y), (k, Axis::Z)].iter().max_by_key(|p| p.0).unwrap().1;
                let ratio = path_orders(&f, &MonomialPath::axis(3, axis)).unwrap().ratio;
                check(ratio.as_ref() == Some(&want), || format!("({m},{n},{k}): axis path {ratio:?}"))?;
            }
        }
    }
    Ok("125 triples: exponent and axis-path bound equal max(m,n,k) - 1".into())
}

fn criterion_3() -> Outcome {
    let s = parse_polynomial("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5", 3).map_err(|e| e.to_string())?;
    let b = build_boundary(&s);
    let facets: Vec<_> = b.facets().collect();
    check(facets.len() == 3, || format!("{} 2-faces", facets.len()))?;
    let exceptional = facets.iter().filter(|f| !exceptional_axes(f).unwrap().is_empty()).count();
    check(exceptional == 1, || format!("{exceptional} exceptional faces"))?;
    check(facets.iter().any(|f| f.normal == Some(WeightVector::from([3, 4, 4]))), || "no normal (3,4,4)".into())?;
    // N(1 + y^3 + 3y^2 z) and N(1 + y^3) in the (y, z) chart
    let p = Polygon2::hull([Point2::new(0, 0), Point2::new(3, 0), Point2::new(2, 1)]);
    let q = Polygon2::hull([Point2::new(0, 0), Point2::new(3, 0)]);
    let mv = mixed_volume_2(&p, &q);
    check(mv == int(3), || format!("MV {mv}"))?;
    // hand enumeration: non-exceptional faces have m = 16/3 and 5
    let expected = Rational::new(16, 3) - Rational::one();
    let r = lojasiewicz_3d(&s).map_err(|e| e.to_string())?;
    check(r.exponent == expected, || format!("exponent {}", r.exponent))?;
    Ok("3 faces, 1 exceptional, normal (3,4,4), MV 3, exponent 13/3".into())
}

fn criterion_4() -> Outcome {
    let b = build_boundary(&parse_polynomial("x*z + y*z + y^3", 3).unwrap());
    let facets: Vec<_> = b.facets().collect();
    check(facets.len() == 1, || format!("{} 2-faces", facets.len()))?;
    check(exceptional_axes(facets[0]).unwrap() == [Axis::Z], || "not exceptional for z".into())?;
    check(proximity_axes(facets[0]).unwrap().contains(&Axis::X), || "not proximate for x".into())?;
    check(proximate_faces(&b, Axis::Z).unwrap().is_empty(), || "proximate face for z".into())?;
    Ok("exceptional for z, proximate for x, none proximate for z".into())
}

fn criterion_5() -> Outcome {
    let cases: [(&[[u32; 2]], i64); 3] = [(&[[3, 0], [0, 2]], 2), (&[[1, 1]], 1), (&[[5, 0], [2, 1], [0, 3]], 2)];
    for (pts, want) in cases {
        let r = lojasiewicz_2d(&Support::from_points(2, pts.iter().copied())).map_err(|e| e.to_string())?;
        check(r.exponent == int(want), || format!("{pts:?}: {}", r.exponent))?;
    }
    Ok("{(3,0),(0,2)} -> 2, {(1,1)} -> 1, {(5,0),(2,1),(0,3)} -> 2".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut generic_cases = 0;
    for i in 0..300u64 {
        let points = rng.gen_range(3..=12);
        let s = random_isolated_support(&mut rng, 3, SampleBounds { points, max_exponent: 12 }).map_err(|e| e.to_string())?;
        let tag = serialize_support(&s);
        let b = build_boundary(&s);
        // (a)
        check(b.same_lattice(&brute_force_boundary(&s).unwrap()), || format!("(a) {tag}"))?;
        // (b)
        let r = lojasiewicz_3d(&s).map_err(|e| format!("{tag}: {e}"))?;
        let non_exceptional: Vec<_> = b.facets().filter(|f| exceptional_axes(f).unwrap().is_empty()).collect();
        if !non_exceptional.is_empty() {
            generic_cases += 1;
            let via = exponent_via_proximate(&s).map_err(|e| format!("(b) {tag}: {e}"))?;
            check(via == r.exponent, || format!("(b) {tag}: {via} vs {}", r.exponent))?;
        }
        for f in b.facets() {
            // (d)
            check(exceptional_axes(f).unwrap().len() <= 1, || format!("(d) {tag}"))?;
        }
        for axis in Axis::ALL {
            let prox = proximate_faces(&b, axis).map_err(|e| format!("(c) {tag}: {e}"))?;
            let candidates: Vec<_> = b.facets().filter(|f| !exceptional_axes(f).unwrap().contains(&axis)).collect();
            // (c)
            check(prox.is_empty() == candidates.is_empty(), || format!("(c) {tag} axis {axis}"))?;
            // (e)
            if let Some(best) = candidates.iter().map(|f| f.intercept(axis).unwrap()).max() {
                check(prox.iter().any(|f| f.intercept(axis) == Some(best)), || format!("(e) {tag} axis {axis}"))?;
            }
            // (f)
            for f in &prox {
                check(axis_edge_audit(f, axis), || format!("(f) {tag} face {}", f.id))?;
            }
        }
        // (g)
        let sweep = sweep_lower_bound(&s, i).unwrap();
        check(sweep.bound <= r.exponent, || format!("(g) {tag}: {} > {}", sweep.bound, r.exponent))?;
        // (h)
        let again = lojasiewicz_3d(&randomize_coefficients(&s, i)).map_err(|e| format!("(h) {tag}: {e}"))?;
        check(again == r, || format!("(h) {tag}"))?;
    }
    Ok(format!("300 instances ({generic_cases} with non-exceptional faces) satisfy (a)-(h)"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let p = random_polygon(&mut rng);
        let q = random_polygon(&mut rng);
        let mv = mixed_volume_2(&p, &q);
        let tag = || format!("pair {i}: {:?} / {:?}", p.vertices(), q.vertices());
        check(mv == mixed_volume_2(&q, &p), || format!("symmetry, {}", tag()))?;
        check(!mv.is_negative(), || format!("sign, {}", tag()))?;
        let t = Point2::new(rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9));
        check(mixed_volume_2(&p, &q.translated(&t)) == mv, || format!("translation, {}", tag()))?;
        let lambda = rng.gen_range(0i64..=5);
        check(mixed_volume_2(&p.scaled(lambda), &q) == &mv * &int(lambda), || format!("scaling, {}", tag()))?;
        check(area2(&minkowski_sum(&p, &q)) == &(&area2(&p) + &area2(&q)) + &mv, || format!("area, {}", tag()))?;
        let reason = mv_zero_reason(&p, &q).map_err(|e| e.to_string())?;
        check((reason == MvZeroReason::None) == !mv.is_zero(), || format!("zero reason, {}", tag()))?;
    }
    // both degenerate cases
    let seg = |a: (i64, i64), b: (i64, i64)| Polygon2::hull([Point2::new(a.0, a.1), Point2::new(b.0, b.1)]);
    check(
        mv_zero_reason(&seg((0, 0), (2, 1)), &seg((5, 5), (9, 7))).unwrap() == MvZeroReason::ParallelSegments,
        || "parallel segments".into(),
    )?;
    check(
        mv_zero_reason(&seg((0, 0), (2, 1)), &Polygon2::hull([Point2::new(3, 3)])).unwrap() == MvZeroReason::PointFactor,
        || "point factor".into(),
    )?;
    Ok("200 pairs satisfy symmetry, sign, translation, scaling, area identity, zero test".into())
}

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_newtloj")).args(args).output().ok()?.status.code()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut supports = Vec::new();
    for _ in 0..300 {
        let dim = rng.gen_range(2..=3);
        let mut s = Support::new(dim);
        for _ in 0..rng.gen_range(1..=8) {
            let e: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=15)).collect();
            let c = Rational::new(rng.gen_range(-99i64..=99).max(1) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1i64..=9));
            s.insert(ExponentVector::new(e).unwrap(), Coefficient::Exact(c));
        }
        if !s.is_empty() {
            supports.push(s);
        }
    }
    for (text, dim) in FIXTURES {
        supports.push(parse_polynomial(text, dim).unwrap());
    }
    for s in &supports {
        let text = serialize_support(s);
        check(parse_polynomial(&text, s.dim()).as_ref() == Ok(s), || format!("text {text}"))?;
        let json = support_to_json(s);
        check(parse_json(&json, None).as_ref() == Ok(s), || format!("json {json}"))?;
    }
    for poly in ["x^2 - x^2", "x^2 +", "3 x", "x^^2", "x + w"] {
        let code = exit_code(&["compute", "--poly", poly]);
        check(code == Some(2), || format!("{poly:?} exits with {code:?}"))?;
    }
    Ok(format!("{} supports round-trip; EmptySupport and syntax errors exit with 2", supports.len()))
}

#[test]
fn acceptance() {
    let criteria: [Entry; 8] = [
        (1, "hyperbolic-edge family", 1, criterion_1),
        (2, "Brieskorn sweep", 5, criterion_2),
        (3, "worked example", 1, criterion_3),
        (4, "exceptional example", 1, criterion_4),
        (5, "plane curves", 1, criterion_5),
        (6, "random property suite", 60, criterion_6),
        (7, "mixed-volume identities", 10, criterion_7),
        (8, "parser round-trip and exit codes", 5, criterion_8),
    ];
    let mut failures = Vec::new();
    for (id, name, secs, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(secs);
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        let line = format!(
            "acceptance {id} {}: {name} ({:.3}s of {secs}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        // written past the test harness capture so the summary always shows
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
        if !ok {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
