//! Convergence-rate exponents from the Newton polygon of the distance eliminant R(μ, D).

use crate::error::{CoreError, Result};
use crate::instance::SdoInstance;
use crate::limits::{self, LimitCertificate, LimitRep};
use crate::tracer::{self, TraceLog};
use crate::urs::{self, Urs};
use exactalg::bipoly;
use exactalg::rat::{fmt_rat, rat, rat_frac, to_f64, Rat};
use exactalg::resultant::resultant_mpoly_capped;
use exactalg::roots::isolate_real_roots;
use exactalg::{BiPoly, MPoly, QPoly};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub const RATE_CAP: usize = 64;

/// Variable slots of the distance polynomials.
pub const MU: usize = 0;
pub const D: usize = 1;
pub const T1: usize = 2;
pub const T2: usize = 3;

fn lift(b: &BiPoly, t: usize) -> MPoly {
    bipoly::to_mpoly(b, MU, t)
}

fn lift_q(q: &QPoly, v: usize) -> MPoly {
    MPoly::from_qpoly(q, v)
}

/// `D·(g₀ḡ₀)² − Σ_{i∈idx} (g_i ḡ₀ − ḡ_i g₀)²` for one coordinate block.
fn distance_poly(u: &Urs, l: &LimitRep, idx: std::ops::Range<usize>) -> MPoly {
    let g0 = lift(&u.g[0], T1);
    let gb0 = lift_q(&l.gbar[0], T2);
    let mut p = MPoly::var(D).mul(&g0.mul(&gb0).pow(2));
    for i in idx {
        let diff = lift(&u.g[i], T1).mul(&gb0).sub(&lift_q(&l.gbar[i], T2).mul(&g0));
        p = p.sub(&diff.pow(2));
    }
    p
}

/// P_x and P_s in ℤ[μ, D, T₁, T₂] (slots `MU`, `D`, `T1`, `T2`).
pub fn build_distance_polys(u: &Urs, l: &LimitRep) -> (MPoly, MPoly) {
    let (t, m) = (u.t(), u.m);
    (distance_poly(u, l, 1..1 + t), distance_poly(u, l, 1 + t + m..1 + 2 * t + m))
}

/// R(μ, D): Res_{T₂} against the limit's minimal polynomial, then Res_{T₁} against f,
/// squarefree in D with μ-content removed. Returned with D in the `T` slot.
pub fn eliminate_rate_poly(p: &MPoly, f: &BiPoly, pbar: &QPoly) -> Result<BiPoly> {
    let r2 = resultant_mpoly_capped(p, &lift_q(pbar, T2), T2, RATE_CAP)?;
    let r1 = resultant_mpoly_capped(&r2, &lift(f, T1), T1, RATE_CAP)?;
    if r1.is_zero() {
        return Err(CoreError::Validation("distance eliminant vanishes identically".into()));
    }
    let b = bipoly::from_mpoly(&r1, MU, D).ok_or_else(|| CoreError::Validation("distance eliminant has stray unknowns".into()))?;
    let mut r = bipoly::squarefree_t(&b);
    // a zero distance branch contributes a factor D; the polygon only sees the others
    while r.deg() > 0 && r.coeff(0).is_zero() {
        r = BiPoly::new(r.coeffs()[1..].to_vec());
    }
    if r.deg() == 0 {
        return Err(CoreError::NoPositiveValuation("eliminant has no nonzero D-roots".into()));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon {
    /// (deg_D, deg_μ) of every monomial.
    pub support: Vec<(u32, u32)>,
    pub hull: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub from: (u32, u32),
    pub to: (u32, u32),
    /// Negated slope: the μ-valuation of the D-roots on this edge.
    pub valuation: Rat,
}

impl NewtonPolygon {
    pub fn of(r: &BiPoly) -> Self {
        let mut support = vec![];
        for (i, c) in r.coeffs().iter().enumerate() {
            for (j, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    support.push((i as u32, j as u32));
                }
            }
        }
        support.sort();
        let mut lowest: Vec<(u32, u32)> = vec![];
        for &(i, j) in &support {
            match lowest.last() {
                Some(&(li, _)) if li == i => {}
                _ => lowest.push((i, j)),
            }
        }
        let cross = |o: (u32, u32), a: (u32, u32), b: (u32, u32)| -> i64 {
            (a.0 as i64 - o.0 as i64) * (b.1 as i64 - o.1 as i64) - (a.1 as i64 - o.1 as i64) * (b.0 as i64 - o.0 as i64)
        };
        let mut hull: Vec<(u32, u32)> = vec![];
        for p in lowest {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        NewtonPolygon { support, hull }
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.hull
            .windows(2)
            .map(|w| Segment {
                from: w[0],
                to: w[1],
                valuation: rat_frac(w[0].1 as i64 - w[1].1 as i64, w[1].0 as i64 - w[0].0 as i64),
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rat> {
        self.segments().into_iter().map(|s| -s.valuation).collect()
    }

    pub fn deg_d(&self) -> u32 {
        self.support.iter().map(|p| p.0).max().unwrap_or(0)
    }

    /// Plot-ready point list: `kind,deg_d,deg_mu`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,deg_d,deg_mu\n");
        for p in &self.support {
            s += &format!("support,{},{}\n", p.0, p.1);
        }
        for p in &self.hull {
            s += &format!("hull,{},{}\n", p.0, p.1);
        }
        s
    }
}

/// Positive real roots c of the edge polynomial: leading coefficients of D ≈ c·μ^v.
pub fn edge_coefficients(r: &BiPoly, seg: &Segment) -> Vec<f64> {
    let (i0, i1) = (seg.from.0 as usize, seg.to.0 as usize);
    let vn = seg.valuation.numer().to_i64().expect("valuation numerator fits i64");
    let vd = seg.valuation.denom().to_i64().expect("valuation denominator fits i64");
    let base = seg.from.1 as i64 * vd;
    let mut coeffs = vec![Rat::zero(); i1 - i0 + 1];
    for i in i0..=i1 {
        // on the edge: j + i·v = j0 + i0·v
        let num = base + (i0 as i64 - i as i64) * vn;
        if num % vd != 0 || num < 0 {
            continue;
        }
        let j = (num / vd) as usize;
        coeffs[i - i0] = r.coeff(i).coeff(j);
    }
    isolate_real_roots(&QPoly::new(coeffs))
        .into_iter()
        .map(|mut rt| {
            rt.refine_bits(64);
            rt.to_f64()
        })
        .filter(|&c| c > 0.0)
        .collect()
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub valuation: Rat,
    pub coefficient: f64,
    /// Mean |ln(d/(c μ^v))| over the hint samples.
    pub mismatch: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub valuation: Rat,
    pub coefficient: Option<f64>,
    pub generic_lower_bound: Rat,
    pub candidates: Vec<Candidate>,
}

/// Selects the branch of R matching `(μ, d)` samples; without samples, the leftmost positive segment.
pub fn newton_polygon_valuation(r: &BiPoly, hint: &[(f64, f64)]) -> Result<Selection> {
    let poly = NewtonPolygon::of(r);
    let deg = poly.deg_d();
    if deg == 0 {
        return Err(CoreError::Validation("R has degree 0 in D".into()));
    }
    let mut candidates = vec![];
    for seg in poly.segments() {
        if !seg.valuation.is_positive() {
            continue;
        }
        let cs = edge_coefficients(r, &seg);
        let v = to_f64(&seg.valuation);
        if cs.is_empty() {
            candidates.push(Candidate { valuation: seg.valuation.clone(), coefficient: f64::NAN, mismatch: None });
        }
        for c in cs {
            let mismatch = (!hint.is_empty()).then(|| {
                hint.iter().map(|&(mu, d)| (d.ln() - c.ln() - v * mu.ln()).abs()).sum::<f64>() / hint.len() as f64
            });
            candidates.push(Candidate { valuation: seg.valuation.clone(), coefficient: c, mismatch });
        }
    }
    if candidates.is_empty() {
        return Err(CoreError::NoPositiveValuation("every Newton-polygon segment has nonpositive slope magnitude".into()));
    }
    let chosen = if hint.is_empty() {
        candidates.iter().max_by(|a, b| a.valuation.cmp(&b.valuation)).unwrap().clone()
    } else {
        candidates
            .iter()
            .min_by(|a, b| {
                let ka = a.mismatch.unwrap_or(f64::INFINITY);
                let kb = b.mismatch.unwrap_or(f64::INFINITY);
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap()
            .clone()
    };
    Ok(Selection {
        valuation: chosen.valuation,
        coefficient: chosen.coefficient.is_finite().then_some(chosen.coefficient),
        generic_lower_bound: rat_frac(1, deg as i64),
        candidates,
    })
}

#[derive(Clone, Debug)]
pub struct RateSide {
    pub block: &'static str,
    pub r: BiPoly,
    pub polygon: NewtonPolygon,
    pub valuation: Rat,
    pub distance_exponent: Rat,
    pub generic_lower_bound: Rat,
    pub coefficient: Option<f64>,
    pub empirical_exponent: Option<f64>,
    pub gap: Option<f64>,
    pub candidates: Vec<Candidate>,
}

impl RateSide {
    pub fn to_json(&self) -> Value {
        json!({
            "block": self.block,
            "r": bipoly::to_text(&self.r).replace('T', "D"),
            "deg_d": self.r.deg(),
            "newton_polygon": {
                "support": self.polygon.support,
                "hull": self.polygon.hull,
            },
            "valuation": fmt_rat(&self.valuation),
            "distance_exponent": fmt_rat(&self.distance_exponent),
            "generic_lower_bound": fmt_rat(&self.generic_lower_bound),
            "leading_coefficient": self.coefficient,
            "empirical_exponent": self.empirical_exponent,
            "gap": self.gap,
            "provenance": { "valuation": "symbolic-exact", "empirical_exponent": "numeric" },
        })
    }
}

#[derive(Clone, Debug)]
pub struct RateReport {
    pub x: RateSide,
    pub s: RateSide,
    pub trace_precision: u32,
    pub trace_points: usize,
}

impl RateReport {
    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x.to_json(),
            "s": self.s.to_json(),
            "trace_precision": self.trace_precision,
            "trace_points": self.trace_points,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RateOptions {
    /// Trace down to μ = 10^-k.
    pub decades: u32,
    pub precision: u32,
    pub window: u32,
    /// Number of final trace points used to select the branch.
    pub hint_points: usize,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions { decades: 14, precision: tracer::DEFAULT_PRECISION, window: 6, hint_points: 4 }
    }
}

/// Squared distances Σ_k (c_k − c**_k)² of the traced points in the final window.
fn squared_distances(log: &TraceLog, star: &[f64], range: std::ops::Range<usize>, count: usize) -> Vec<(f64, f64)> {
    let pts = &log.points;
    pts[pts.len().saturating_sub(count)..]
        .iter()
        .map(|p| {
            let c = p.coordinates();
            let d: f64 = range.clone().map(|k| (c[k].to_f64() - star[k]).powi(2)).sum();
            (p.mu.to_f64(), d)
        })
        .filter(|&(_, d)| d > 0.0)
        .collect()
}

fn side(
    block: &'static str,
    p: &MPoly,
    u: &Urs,
    cert: &LimitCertificate,
    hint: &[(f64, f64)],
    empirical: Option<f64>,
) -> Result<RateSide> {
    let r = eliminate_rate_poly(p, &u.f, &cert.point.minpoly)?;
    let sel = newton_polygon_valuation(&r, hint)?;
    let distance_exponent = &sel.valuation / rat(2);
    let gap = empirical.map(|g| (g - to_f64(&distance_exponent)).abs());
    Ok(RateSide {
        block,
        polygon: NewtonPolygon::of(&r),
        r,
        valuation: sel.valuation,
        distance_exponent,
        generic_lower_bound: sel.generic_lower_bound,
        coefficient: sel.coefficient,
        empirical_exponent: empirical,
        gap,
        candidates: sel.candidates,
    })
}

/// Rate report from precomputed representations, limit certificate and trace.
pub fn rate_from_parts(reps: &[Urs], cert: &LimitCertificate, log: Option<&TraceLog>, opts: &RateOptions) -> Result<RateReport> {
    let u = &reps[cert.rep_index];
    let (px, ps) = build_distance_polys(u, &cert.limit);
    let (t, m) = (u.t(), u.m);
    let star = cert.point.approx();
    let (hx, hs, fit) = match log {
        Some(log) => {
            let hx = squared_distances(log, &star, 0..t, opts.hint_points);
            let hs = squared_distances(log, &star, t + m..2 * t + m, opts.hint_points);
            let approx = |r: std::ops::Range<usize>| {
                let v: Vec<Rat> = star[r].iter().map(|&v| exactalg::rat::from_float(&rug::Float::with_val(64, v))).collect();
                crate::instance::smat(u.n, &v)
            };
            let x = cert.point.x_rat().unwrap_or_else(|| approx(0..t));
            let s = cert.point.s_rat().unwrap_or_else(|| approx(t + m..2 * t + m));
            let fit = tracer::fit_rate(log, &x, &s, opts.window).ok();
            (hx, hs, fit)
        }
        None => (vec![], vec![], None),
    };
    Ok(RateReport {
        x: side("x", &px, u, cert, &hx, fit.as_ref().map(|f| f.gamma_x))?,
        s: side("s", &ps, u, cert, &hs, fit.as_ref().map(|f| f.gamma_s))?,
        trace_precision: opts.precision,
        trace_points: log.map_or(0, |l| l.points.len()),
    })
}

/// Full pipeline: representations, limit point, trace, distance eliminants and polygons.
pub fn rate_report_with(inst: &SdoInstance, opts: &RateOptions) -> Result<RateReport> {
    let reps = urs::eliminate_to_urs(inst)?;
    let cert = limits::limit_point(inst, &reps, &rat(1))?;
    let log = tracer::trace(inst, &rat(1), &tracer::pow10_neg(opts.decades), &rat_frac(1, 10), None, opts.precision)?;
    rate_from_parts(&reps, &cert, Some(&log), opts)
}

pub fn rate_report(inst: &SdoInstance) -> Result<RateReport> {
    rate_report_with(inst, &RateOptions::default())
}
