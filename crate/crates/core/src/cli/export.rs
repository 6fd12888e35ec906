//! OFF export of the compact boundary.

use std::collections::BTreeMap;
use std::fmt::Write;

use newtloj::{ExponentVector, NewtonBoundary};

/// `%.12g`-style formatting.
fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Vertices of Γ⁰, polygons for the 2-faces, and standalone compact edges
/// as trailing comments.
pub fn to_off(b: &NewtonBoundary) -> String {
    let index: BTreeMap<&ExponentVector, usize> =
        b.vertices().enumerate().map(|(i, f)| (&f.vertices[0], i)).collect();
    let polygons: Vec<Vec<usize>> = b.facets().map(|f| f.cycle.iter().map(|v| index[v]).collect()).collect();
    let mut s = String::from("OFF\n");
    let _ = writeln!(s, "{} {} 0", index.len(), polygons.len());
    for f in b.vertices() {
        let coords: Vec<String> = f.vertices[0].coords().iter().map(|&c| g12(c as f64)).collect();
        let _ = writeln!(s, "{}", coords.join(" "));
    }
    for p in &polygons {
        let ids: Vec<String> = p.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{} {}", p.len(), ids.join(" "));
    }
    for e in b.edges() {
        if b.incident_facets(e.id).is_empty() {
            let _ = writeln!(s, "# edge {} {}", index[&e.vertices[0]], index[&e.vertices[1]]);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use newtloj::{build_boundary, parse_polynomial};

    fn off(text: &str) -> String {
        to_off(&build_boundary(&parse_polynomial(text, 3).unwrap()))
    }

    #[test]
    fn formatting() {
        assert_eq!(g12(4.0), "4");
        assert_eq!(g12(0.5), "0.5");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(123456.0), "123456");
    }

    #[test]
    fn brieskorn_triangle() {
        assert_eq!(off("x^2 + y^2 + z^2"), "OFF\n3 1 0\n0 0 2\n0 2 0\n2 0 0\n3 0 2 1\n");
    }

    #[test]
    fn worked_example_mesh() {
        let text = off("(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("6 3 0"));
        assert!(!text.contains("# edge"));
    }

    #[test]
    fn lone_edge_is_a_comment() {
        assert_eq!(off("x*y + z^5"), "OFF\n2 0 0\n0 0 5\n1 1 0\n# edge 0 1\n");
    }
}
