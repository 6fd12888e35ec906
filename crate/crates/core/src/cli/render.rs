//! Plain-text reports.

use std::fmt::Write;

use newtloj::classify::ProximityKind;
use newtloj::engine::{ExponentCase, FaceEntry};
use newtloj::mixed_volume::{FaceMixedVolume, Polygon2};
use newtloj::parser::Coefficient;
use newtloj::{Axis, ExponentVector};

use super::{ClassifyOutput, ComputeOutput};

fn list<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn axes(a: &[Axis]) -> String {
    if a.is_empty() {
        "-".into()
    } else {
        list(a)
    }
}

pub fn compute(out: &ComputeOutput) -> String {
    let r = &out.report;
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", out.input);
    let _ = writeln!(s, "exponent: {}", r.exponent);
    let case = match (r.case, &r.hyperbolic_edge) {
        (ExponentCase::HyperbolicEdge, Some(h)) => {
            let [i, j] = h.axis.others();
            format!("hyperbolic edge {i}{j} - {}^{}", h.axis, h.alpha)
        }
        (ExponentCase::TwoDimDefault, _) => "every segment exceptional".into(),
        _ => "largest non-exceptional face".into(),
    };
    let _ = writeln!(s, "case: {case}");
    let _ = writeln!(s, "sufficiency degree: {}", r.sufficiency_degree);
    if !r.attaining.is_empty() {
        let at: Vec<String> = r.attaining.iter().map(|a| format!("face {} (axis {})", a.face, a.axis)).collect();
        let _ = writeln!(s, "attained at: {}", at.join(", "));
    }
    if let Some(o) = &out.oracle {
        let bf = if o.brute_force_checked { "brute-force boundary agrees; " } else { "" };
        let _ = writeln!(s, "oracle: {bf}best of {} paths gives {} via {}", o.paths_tested, o.bound, o.witness);
    }
    let _ = writeln!(s, "assumption: {}", r.assumption);
    s
}

fn kind(k: &ProximityKind) -> String {
    match k {
        ProximityKind::Convenient => "convenient".into(),
        ProximityKind::NonConvenient { edge: (p, q) } => format!("edge {p}-{q}"),
        ProximityKind::NotProximate => "-".into(),
    }
}

fn face_block(e: &FaceEntry, s: &mut String) {
    let f = &e.face;
    let c = &e.classification;
    let _ = writeln!(s, "face {}: {}", f.id, list(&f.cycle));
    if f.points.len() > f.vertices.len() {
        let extra: Vec<&ExponentVector> = f.points.iter().filter(|p| !f.has_vertex(p)).collect();
        let _ = writeln!(s, "  also on face: {}", list(&extra));
    }
    if let (Some(n), Some(l)) = (&f.normal, f.level) {
        let _ = writeln!(s, "  normal {n}, level {l}, intercepts ({}), m = {}", list(&f.intercepts), f.m.as_ref().expect("m"));
    }
    let _ = writeln!(s, "  exceptional: {}", axes(&c.exceptional_axes));
    if !c.proximity_kind.is_empty() {
        let prox: Vec<String> = c
            .proximity_kind
            .iter()
            .filter(|(_, k)| *k != ProximityKind::NotProximate)
            .map(|(a, k)| format!("{a} ({})", kind(k)))
            .collect();
        let _ = writeln!(s, "  proximate: {}", if prox.is_empty() { "-".into() } else { prox.join(", ") });
    }
}

pub fn classify(out: &ClassifyOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", out.input);
    if out.isolated.ok {
        let _ = writeln!(s, "isolated: yes");
    } else {
        let _ = writeln!(s, "isolated: no ({})", list(&out.isolated.violations));
    }
    let _ = writeln!(s, "{} compact facets", out.faces.len());
    for e in &out.faces {
        face_block(e, &mut s);
    }
    for h in &out.hyperbolic_edges {
        let [i, j] = h.axis.others();
        let _ = writeln!(s, "hyperbolic edge {}: {i}{j} - {}^{}", h.face, h.axis, h.alpha);
    }
    let _ = writeln!(s, "assumption: {}", out.assumption);
    s
}

fn chart(terms: &[(ExponentVector, Coefficient)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .map(|(e, c)| match c {
            Coefficient::Exact(r) => format!("{r}*{e}"),
            Coefficient::Generic => format!("c*{e}"),
        })
        .collect();
    parts.join(" + ")
}

fn polygon(p: &Polygon2) -> String {
    list(p.vertices())
}

pub fn mixed_volume(mv: &FaceMixedVolume) -> String {
    let [a, b] = mv.axis.others();
    let mut s = String::new();
    let _ = writeln!(s, "face {}, chart {} = 1", mv.face, mv.axis);
    let _ = writeln!(s, "d/d{a}: {}", chart(&mv.charts[0]));
    let _ = writeln!(s, "d/d{b}: {}", chart(&mv.charts[1]));
    let _ = writeln!(s, "P = {}", polygon(&mv.polygons[0]));
    let _ = writeln!(s, "Q = {}", polygon(&mv.polygons[1]));
    let _ = writeln!(s, "P + Q = {}", polygon(&mv.minkowski));
    let _ = writeln!(s, "area(P + Q) = {}, area(P) = {}, area(Q) = {}", mv.areas[0], mv.areas[1], mv.areas[2]);
    let _ = writeln!(s, "mixed volume: {}", mv.mixed_volume);
    let _ = writeln!(s, "zero reason: {}", serde_json::to_value(mv.zero_reason).expect("tag").as_str().unwrap_or("-"));
    s
}
