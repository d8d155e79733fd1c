//! Full-pipeline report: JSON (deterministic) and a text rendering with the convergence table.

use crate::error::{CoreError, Result};
use crate::instance::{self, SdoInstance};
use crate::limits::{self, LimitCertificate};
use crate::linalg::RMat;
use crate::rate::{self, RateOptions};
use crate::tracer::{self, TableRow, TraceLog};
use crate::urs::{self, Urs};
use exactalg::bipoly;
use exactalg::rat::{fmt_rat, rat, rat_frac};
use serde_json::{json, Value};
use std::time::Instant;

/// Number of rows of the convergence table.
pub const TABLE_ROWS: usize = 6;

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub precision: u32,
    /// Trace from μ = 1 down to 10^-decades in steps of 1/10.
    pub decades: u32,
    pub window: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { precision: tracer::DEFAULT_PRECISION, decades: 14, window: 6 }
    }
}

pub struct Report {
    pub json: Value,
    pub trace: Option<TraceLog>,
    pub limit: Option<(RMat, RMat)>,
    /// Stage name and wall time in seconds, in execution order.
    pub timings: Vec<(String, f64)>,
    /// Exit status of the first failing stage.
    pub status: i32,
}

fn err_json(e: &CoreError) -> Value {
    json!({ "error": e.to_string(), "kind": e.kind() })
}

fn timed<T>(timings: &mut Vec<(String, f64)>, name: &str, f: impl FnOnce() -> T) -> T {
    let t0 = Instant::now();
    let out = f();
    timings.push((name.to_string(), t0.elapsed().as_secs_f64()));
    out
}

fn urs_inventory(inst: &SdoInstance, reps: &[Urs]) -> Value {
    let classified = urs::classify_all(inst, reps, &rat(1));
    let reps_json: Vec<Value> = reps
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let branches: Value = match &classified {
                Ok(cl) => cl.iter().filter(|c| c.rep == i).map(|c| json!({ "thom": c.tag.thom, "tag": c.tag.tag, "detail": c.tag.detail })).collect(),
                Err(e) => err_json(e),
            };
            json!({
                "deg_t": u.f.deg(),
                "deg_mu": bipoly::deg_mu(&u.f),
                "f": bipoly::to_text(&u.f),
                "separating_form": u.sep,
                "branches": branches,
            })
        })
        .collect();
    json!({ "representations": reps_json, "mu_star": "1", "provenance": "symbolic-exact" })
}

fn table_json(rows: &[TableRow]) -> Value {
    rows.iter().map(|r| serde_json::to_value(r).expect("table row serializes")).collect()
}

/// Last `TABLE_ROWS` scheduled points.
pub fn table_rows(log: &TraceLog, limit: Option<(&RMat, &RMat)>) -> Vec<TableRow> {
    let k = log.points.len().saturating_sub(TABLE_ROWS);
    log.points[k..].iter().map(|p| tracer::table_row(p, limit)).collect()
}

/// Runs validation, elimination, limit point, trace and rate analysis.
pub fn build_report(inst: &SdoInstance, opts: &ReportOptions) -> Report {
    let mut timings = vec![];
    let mut status = 0;
    let fail = |e: &CoreError, status: &mut i32| {
        if *status == 0 {
            *status = e.exit_code();
        }
        err_json(e)
    };
    let validation = timed(&mut timings, "validate", || instance::validate(inst));
    let reps = timed(&mut timings, "eliminate", || urs::eliminate_to_urs(inst));
    let urs_json = match &reps {
        Ok(r) => timed(&mut timings, "classify", || urs_inventory(inst, r)),
        Err(e) => fail(e, &mut status),
    };
    let cert: Option<Result<LimitCertificate>> =
        reps.as_ref().ok().map(|r| timed(&mut timings, "limit_point", || limits::limit_point(inst, r, &rat(1))));
    let limit_json = match &cert {
        Some(Ok(c)) => c.to_json(),
        Some(Err(e)) => fail(e, &mut status),
        None => json!({ "error": "no representation", "kind": "skipped" }),
    };
    let limit = match &cert {
        Some(Ok(c)) => c.point.x_rat().zip(c.point.s_rat()),
        _ => None,
    };
    let log = timed(&mut timings, "trace", || {
        tracer::trace(inst, &rat(1), &tracer::pow10_neg(opts.decades), &rat_frac(1, 10), None, opts.precision)
    });
    let lim_ref = limit.as_ref().map(|(x, s)| (x, s));
    let trace_json = match &log {
        Ok(l) => {
            let mut v = json!({
                "schedule": l.schedule,
                "points": l.points.len(),
                "refinements": l.refinements,
                "table": table_json(&table_rows(l, lim_ref)),
                "provenance": format!("numeric at {} bits", opts.precision),
            });
            if let (Some((x, s)), Some(Ok(c))) = (&limit, &cert) {
                if let Ok(fit) = tracer::fit_rate(l, x, s, opts.window) {
                    v["fit"] = json!(fit);
                }
                let n = inst.n;
                let ranks = (c.rank_x, c.rank_s, n.saturating_sub(c.rank_x + c.rank_s));
                if ranks.0 + ranks.1 <= n {
                    if let Ok(p) = tracer::eigen_profile(l, ranks, opts.window) {
                        v["eigen_profile"] = json!(p);
                    }
                }
            }
            v
        }
        Err(e) => fail(e, &mut status),
    };
    let rate_json = match (&reps, &cert) {
        (Ok(r), Some(Ok(c))) => {
            let ro = RateOptions { decades: opts.decades, precision: opts.precision, window: opts.window, ..Default::default() };
            match timed(&mut timings, "rate", || rate::rate_from_parts(r, c, log.as_ref().ok(), &ro)) {
                Ok(rr) => rr.to_json(),
                Err(e) => fail(&e, &mut status),
            }
        }
        _ => json!({ "error": "no limit point", "kind": "skipped" }),
    };
    let json = json!({
        "tool": { "name": "centralpath", "version": env!("CARGO_PKG_VERSION") },
        "instance": { "name": inst.name, "n": inst.n, "m": inst.m, "t": inst.t(), "nbar": inst.nbar() },
        "validation": validation,
        "urs": urs_json,
        "limit_point": limit_json,
        "trace": trace_json,
        "rate": rate_json,
        "precision": { "trace_bits": opts.precision, "symbolic": "exact rational" },
        "separating_form_seed": urs::SEP_SEED,
    });
    Report { json, trace: log.ok(), limit, timings, status }
}

impl Report {
    pub fn timings_json(&self) -> Value {
        let stages: Vec<Value> = self.timings.iter().map(|(k, v)| json!({ "stage": k, "seconds": v })).collect();
        let total: f64 = self.timings.iter().map(|t| t.1).sum();
        json!({ "stages": stages, "total_seconds": total })
    }

    pub fn to_text(&self) -> String {
        let j = &self.json;
        let mut s = String::new();
        s += &format!("instance {} (n = {}, m = {})\n", j["instance"]["name"].as_str().unwrap_or("?"), j["instance"]["n"], j["instance"]["m"]);
        s += "\nunivariate representations (exact, mu* = 1)\n";
        match j["urs"]["representations"].as_array() {
            Some(reps) => {
                for (i, r) in reps.iter().enumerate() {
                    s += &format!("  [{i}] deg_T f = {}, deg_mu f = {}\n", r["deg_t"], r["deg_mu"]);
                    if let Some(bs) = r["branches"].as_array() {
                        for b in bs {
                            s += &format!("      {} {}\n", b["thom"].as_str().unwrap_or("?"), b["tag"].as_str().unwrap_or("?"));
                        }
                    }
                }
            }
            None => s += &format!("  {}\n", j["urs"]["error"].as_str().unwrap_or("unavailable")),
        }
        s += "\nlimit point (exact)\n";
        match &self.limit {
            Some((x, sm)) => {
                s += &format!("  X** = {}\n", fmt_mat(x));
                if let Some(y) = j["limit_point"]["point"]["coordinates"].as_array() {
                    let t = j["instance"]["t"].as_u64().unwrap_or(0) as usize;
                    let m = j["instance"]["m"].as_u64().unwrap_or(0) as usize;
                    let ys: Vec<&str> = y[t..t + m].iter().map(|v| v.as_str().unwrap_or("?")).collect();
                    s += &format!("  y** = ({})\n", ys.join(", "));
                }
                s += &format!("  S** = {}\n", fmt_mat(sm));
            }
            None => match j["limit_point"]["error"].as_str() {
                Some(e) => s += &format!("  {e}\n"),
                None => s += &format!("  algebraic: {}\n", j["limit_point"]["point"]),
            },
        }
        s += "\nrate\n";
        for b in ["x", "s"] {
            let r = &j["rate"][b];
            if r.is_object() && r.get("valuation").is_some() {
                s += &format!(
                    "  {}: valuation {} (distance exponent {}, lower bound {}), fitted {}\n",
                    b.to_uppercase(),
                    r["valuation"].as_str().unwrap_or("?"),
                    r["distance_exponent"].as_str().unwrap_or("?"),
                    r["generic_lower_bound"].as_str().unwrap_or("?"),
                    r["empirical_exponent"].as_f64().map_or("-".to_string(), |v| format!("{v:.4}")),
                );
            }
        }
        if let Some(e) = j["rate"]["error"].as_str() {
            s += &format!("  {e}\n");
        }
        s += &format!("\nconvergence table (numeric, {} bits)\n", j["precision"]["trace_bits"]);
        match &self.trace {
            Some(log) => {
                let lim = self.limit.as_ref().map(|(x, s)| (x, s));
                s += &format!(
                    "  {:>9} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}\n",
                    "mu", "lam_n(X)", "lam_n-1(X)", "lam_n(S)", "lam_n-1(S)", "|X-X**|", "|S-S**|"
                );
                for r in table_rows(log, lim) {
                    let d = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3e}"));
                    s += &format!(
                        "  {:>9.1e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11} {:>11}\n",
                        r.mu,
                        r.lam_x_min,
                        r.lam_x_next,
                        r.lam_s_min,
                        r.lam_s_next,
                        d(r.dist_x),
                        d(r.dist_s)
                    );
                }
            }
            None => s += &format!("  {}\n", j["trace"]["error"].as_str().unwrap_or("unavailable")),
        }
        s
    }
}

fn fmt_mat(m: &RMat) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}
