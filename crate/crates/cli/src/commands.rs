use std::path::Path;

use serde_json::{json, Value};
use tautrel::exactalg::{parse_poly, Series};
use tautrel::frobenius::{local_structure_probe, psi0_frame, FrameOptions, FrobeniusChart, IdempotentFrame};
use tautrel::reconstruct::{genus_one_correlator, genus_one_potential, reconstruct_class, CohFT, Insertion};
use tautrel::relations::{self, close_relations, compare_spans, extract_relations, verify_relations, RelationSet};
use tautrel::rmatrix::family::FamilyOptions;
use tautrel::rmatrix::{flatness_residual_check, known_orders, solve_2d_family, solve_flatness};

use crate::config::{load_chart, parse_vector, RunConfig};
use crate::CliError;

fn texts(v: &[Series]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `u_i - u_j` for `i < j`, keyed `"i-j"`.
fn differences(u: &[Series]) -> serde_json::Map<String, Value> {
    let mut out = serde_json::Map::new();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            out.insert(format!("{}-{}", i + 1, j + 1), json!((&u[i] - &u[j]).to_string()));
        }
    }
    out
}

fn envelope(kind: &str, cfg: &RunConfig, body: Value) -> Value {
    let mut out = json!({ "schema_version": format!("tautrel.{kind}/1"), "config": cfg.echo() });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn frame_of(cfg: &RunConfig) -> Result<IdempotentFrame, CliError> {
    let chart = FrobeniusChart::from_spec(cfg.chart_spec()?)?;
    let opts = FrameOptions { precision: cfg.precision_frac()?, probe: cfg.probe_vec()?, ..Default::default() };
    Ok(IdempotentFrame::new(&chart, &opts)?)
}

fn cohft_of(cfg: &RunConfig) -> Result<CohFT, CliError> {
    Ok(CohFT::from_chart(&cfg.chart_spec()?, &cfg.cohft_options()?)?)
}

pub fn frame(cfg: &RunConfig) -> Result<Value, CliError> {
    let f = frame_of(cfg)?;
    let structure = match local_structure_probe(&f) {
        Ok(r) => serde_json::to_value(r).expect("report"),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let psi0 = match psi0_frame(&f) {
        Ok(p) => json!({
            "pair": p.pair,
            "sqrt_t": p.sqrt_t.to_string(),
            "eta0": p.eta0.to_string(),
            "eta1": p.eta1.to_string(),
            "a": p.a.to_string(),
            "c": p.c.to_string(),
            "psi0": p.psi0.to_text(),
        }),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    Ok(envelope(
        "frame",
        cfg,
        json!({
            "chart": f.chart.name(),
            "parameter": f.param().to_string(),
            "probe": f.probe.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "idempotents": f.idempotents.iter().map(|e| texts(e)).collect::<Vec<_>>(),
            "canonical_coordinates": texts(&f.u),
            "canonical_differences": differences(&f.u),
            "delta": texts(&f.delta),
            "sqrt_delta": texts(&f.sqrt_delta),
            "normalized_idempotents": f.psi.to_text(),
            "structure": structure,
            "psi0_frame": psi0,
        }),
    ))
}

pub fn rmatrix(cfg: &RunConfig, family: Option<&str>) -> Result<Value, CliError> {
    if let Some(f) = family {
        let f = f.trim();
        let f = f.strip_prefix("f=").or_else(|| f.strip_prefix("f =")).unwrap_or(f);
        let fp = parse_poly(f).map_err(|e| CliError::Input(format!("family: {e}")))?;
        let opts = FamilyOptions { z_order: cfg.z_order, precision: cfg.precision_frac()?, ..Default::default() };
        let rep = solve_2d_family(&fp, &opts)?;
        let gamma = match &rep.global_meromorphic {
            Some(g) => json!(g),
            None => json!(rep.points.iter().map(|p| (p.point.clone(), p.gamma.exact.clone())).collect::<Vec<_>>()),
        };
        return Ok(envelope("rmatrix", cfg, json!({ "family": rep, "diagnostics": { "gamma": gamma } })));
    }
    let f = frame_of(cfg)?;
    let opts = cfg.cohft_options()?;
    let r = solve_flatness(&f, cfg.z_order, &opts.policy)?;
    let flat = flatness_residual_check(&f, &r).is_ok();
    let symplectic = r.is_symplectic()?;
    let orders: Vec<Option<String>> = known_orders(&r).into_iter().map(|o| o.map(|x| x.to_string())).collect();
    let rj: Value = serde_json::from_str(&r.to_json()).expect("r json");
    Ok(envelope(
        "rmatrix",
        cfg,
        json!({
            "chart": f.chart.name(),
            "r_matrix": rj,
            "known_orders": orders,
            "diagnostics": { "flatness_residual_zero": flat, "symplectic": symplectic },
        }),
    ))
}

pub fn reconstruct(cfg: &RunConfig, g: u32, n: usize, inputs: &[String]) -> Result<Value, CliError> {
    if inputs.len() != n {
        return Err(CliError::Input(format!("{} inputs given for n = {n}", inputs.len())));
    }
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(CliError::Input(format!("(g,n) = ({g},{n}) is not stable")));
    }
    let c = cohft_of(cfg)?;
    let vs = inputs.iter().map(|s| parse_vector(s)).collect::<Result<Vec<_>, _>>()?;
    let ins: Vec<Insertion> = vs.iter().map(|v| Insertion::flat(c.param(), v)).collect();
    let codim = cfg.max_codim.min(3 * g + n as u32 - 3);
    let cls = reconstruct_class(&c, g, n, &ins, codim)?;
    Ok(envelope("reconstruct", cfg, json!({ "codim": codim, "class": cls.to_json_value() })))
}

fn relation_set(cfg: &RunConfig, close: bool) -> Result<RelationSet, CliError> {
    let spec = cfg.chart_spec()?;
    let c = CohFT::from_chart(&spec, &cfg.cohft_options()?)?;
    let rs = extract_relations(&c, &spec.name, &cfg.bounds()?)?;
    Ok(if close { close_relations(&rs)? } else { rs })
}

pub fn relations(cfg: &RunConfig, close: bool) -> Result<Value, CliError> {
    Ok(relation_set(cfg, close)?.to_json(Some(&cfg.echo())))
}

fn read_relations(path: &Path) -> Result<Option<RelationSet>, CliError> {
    let Ok(text) = std::fs::read_to_string(path) else { return Ok(None) };
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if v.get("schema_version").and_then(Value::as_str) != Some(relations::SCHEMA_VERSION) {
        return Ok(None);
    }
    Ok(Some(RelationSet::from_json(&v)?))
}

/// A relation file, or a chart whose closed relations are computed with the config.
fn span_of(cfg: &RunConfig, what: &str) -> Result<RelationSet, CliError> {
    if let Some(rs) = read_relations(Path::new(what))? {
        return Ok(rs);
    }
    load_chart(what)?;
    let mut c = cfg.clone();
    c.chart = Some(what.to_string());
    relation_set(&c, true)
}

pub fn compare(cfg: &RunConfig, first: &str, second: &str) -> Result<Value, CliError> {
    let a = span_of(cfg, first)?;
    let b = span_of(cfg, second)?;
    let cells = compare_spans(&a, &b);
    let all_equal = cells.iter().all(|c| c.verdict == relations::Verdict::Equal);
    Ok(envelope(
        "compare",
        cfg,
        json!({ "first": a.source, "second": b.source, "equal": all_equal, "cells": cells }),
    ))
}

pub fn verify(cfg: &RunConfig, file: &Path) -> Result<(Value, bool), CliError> {
    let rs = read_relations(file)?.ok_or_else(|| CliError::Input(format!("{} is not a relation file", file.display())))?;
    let rep = verify_relations(&rs)?;
    let ok = rep.ok();
    Ok((envelope("verify", cfg, json!({ "source": rs.source, "ok": ok, "report": rep })), ok))
}

pub fn genus1(cfg: &RunConfig, direction: &str) -> Result<Value, CliError> {
    let c = cohft_of(cfg)?;
    let x = parse_vector(direction)?;
    if x.len() != c.dim() {
        return Err(CliError::Input(format!("direction has {} entries, chart has dimension {}", x.len(), c.dim())));
    }
    let pot = genus_one_potential(&c, &x)?;
    let corr = genus_one_correlator(&c, &x)?;
    let agree = (&pot - &corr).is_zero();
    Ok(envelope(
        "genus1",
        cfg,
        json!({ "potential": pot.to_string(), "correlator": corr.to_string(), "agree": agree }),
    ))
}
