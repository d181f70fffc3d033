//! Built-in charts used by the examples and tests.

use std::collections::BTreeMap;

use super::chart::{ChartSpec, ExpansionSpec};

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn metric(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| strs(r)).collect()
}

/// A2 singularity (3-spin) chart, expanded in `t1` at `t1 = 0`.
pub fn a2() -> ChartSpec {
    ChartSpec {
        name: "A2".into(),
        dimension: 2,
        coordinates: strs(&["t0", "t1"]),
        metric: metric(&[&["0", "1"], &["1", "0"]]),
        potential: "1/2*t0^2*t1 + 1/24*t1^4".into(),
        unit_index: Some(0),
        unit: None,
        expansion_point: None,
    }
}

fn a3_base(name: &str, param: &str, coordinates: &[&str]) -> ChartSpec {
    let s2 = "(-3/8*z3^2 - 1/8*phi^2)";
    let s1 = "(-1/4*z3^3 + 1/4*z3*phi^2)";
    let mut subst = BTreeMap::new();
    subst.insert("s0".to_string(), format!("t0 - 1/2*{s2}^2"));
    subst.insert("s1".to_string(), s1.to_string());
    subst.insert("s2".to_string(), s2.to_string());
    ChartSpec {
        name: name.into(),
        dimension: 3,
        coordinates: strs(&["s0", "s1", "s2"]),
        metric: metric(&[&["0", "0", "1"], &["0", "1", "0"], &["1", "0", "0"]]),
        potential: "1/2*s0^2*s2 + 1/2*s0*s1^2 - 1/4*s1^2*s2^2 + 1/60*s2^5".into(),
        unit_index: Some(0),
        unit: None,
        expansion_point: Some(ExpansionSpec { parameter: param.into(), coordinates: strs(coordinates), substitution: subst }),
    }
}

/// A3 singularity in the coordinates `(phi, z3, t0)`, where `x^4/4 + s2 x^2 + s1 x`
/// has critical points `z3` and `(-z3 +- phi)/2`. Expanded in `phi`.
pub fn a3_phi() -> ChartSpec {
    a3_base("A3-phi", "phi", &["phi", "z3", "t0"])
}

/// Same chart expanded in `z3` with `phi` kept as a coefficient symbol.
pub fn a3_z3() -> ChartSpec {
    a3_base("A3-z3", "z3", &["z3", "phi", "t0"])
}

/// Product of the A2 chart with a one-dimensional semisimple factor.
pub fn a2_x_a1() -> ChartSpec {
    ChartSpec {
        name: "A2xA1".into(),
        dimension: 3,
        coordinates: strs(&["t0", "t1", "w"]),
        metric: metric(&[&["0", "1", "0"], &["1", "0", "0"], &["0", "0", "1"]]),
        potential: "1/2*t0^2*t1 + 1/24*t1^4 + 1/6*w^3".into(),
        unit_index: None,
        unit: Some(strs(&["1", "0", "1"])),
        expansion_point: Some(ExpansionSpec {
            parameter: "t1".into(),
            coordinates: strs(&["t1", "t0", "w"]),
            substitution: BTreeMap::new(),
        }),
    }
}

/// Two-dimensional chart with `eta(1, 1) = b != 0`: metric `[[b, 1], [1, 0]]`
/// and `d1 * d1 = t1 (d0 - b d1)`.
pub fn eta0_chart(b: &str) -> ChartSpec {
    ChartSpec {
        name: format!("eta0-{b}"),
        dimension: 2,
        coordinates: strs(&["t0", "t1"]),
        metric: metric(&[&[b, "1"], &["1", "0"]]),
        potential: format!("{b}/6*t0^3 + 1/2*t0^2*t1 + 1/24*t1^4"),
        unit_index: Some(0),
        unit: None,
        expansion_point: None,
    }
}

pub fn trivial() -> ChartSpec {
    ChartSpec {
        name: "trivial".into(),
        dimension: 1,
        coordinates: strs(&["t0"]),
        metric: metric(&[&["1"]]),
        potential: "1/6*t0^3".into(),
        unit_index: Some(0),
        unit: None,
        expansion_point: None,
    }
}

/// Constant semisimple product: two orthogonal idempotents with norms 1 and 1/2.
pub fn tqft2() -> ChartSpec {
    ChartSpec {
        name: "tqft2".into(),
        dimension: 2,
        coordinates: strs(&["t0", "t1"]),
        metric: metric(&[&["1", "0"], &["0", "2"]]),
        potential: "1/6*t0^3 + 1/3*t1^3".into(),
        unit: Some(strs(&["1", "1"])),
        unit_index: None,
        expansion_point: None,
    }
}

pub fn builtin(name: &str) -> Option<ChartSpec> {
    Some(match name {
        "A2" => a2(),
        "A3-phi" => a3_phi(),
        "A3-z3" => a3_z3(),
        "A2xA1" => a2_x_a1(),
        "trivial" => trivial(),
        "tqft2" => tqft2(),
        _ => return name.strip_prefix("eta0-").map(eta0_chart),
    })
}

pub const BUILTIN_NAMES: &[&str] = &["A2", "A3-phi", "A3-z3", "A2xA1", "eta0-2", "trivial", "tqft2"];
