//! Arbitrary-precision central-path following on the symmetrized system
//! XS + SX = 2μI, with X restricted to the primal affine subspace and
//! S = C − Σ y_i A^i.

use crate::error::{CoreError, Result};
use crate::instance::{svec_pairs, SdoInstance};
use crate::linalg::{self, fzero, FMat, RMat};
use exactalg::rat::{fmt_rat, to_float, Rat};
use num_traits::One;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;
use serde_json::json;

pub const DEFAULT_PRECISION: u32 = 256;

/// Corrector tolerance: 10⁻³⁰ at 256 bits, scaled by 2^{−(P−256)/2}.
pub fn default_tol(prec: u32) -> Float {
    let base = Float::with_val(prec, Float::parse("1e-30").unwrap());
    let shift = (prec as i32 - 256) / 2;
    base * Float::with_val(prec, Float::i_exp(1, -shift))
}

#[derive(Clone, Debug)]
pub struct CentralPoint {
    pub mu: Float,
    /// Set when μ came from the exact schedule.
    pub mu_exact: Option<Rat>,
    pub x: FMat,
    pub y: Vec<Float>,
    pub s: FMat,
    pub res_primal: Float,
    pub res_dual: Float,
    pub res_central: Float,
    pub iterations: usize,
    pub precision: u32,
}

impl CentralPoint {
    pub fn eig_x(&self) -> Vec<Float> {
        linalg::sym_eigenvalues(&self.x)
    }
    pub fn eig_s(&self) -> Vec<Float> {
        linalg::sym_eigenvalues(&self.s)
    }
    pub fn duality_gap(&self) -> Float {
        linalg::inner(&self.x, &self.s)
    }
    /// Coordinates (x; y; s) in svec order.
    pub fn coordinates(&self) -> Vec<Float> {
        let n = self.x.len();
        let mut v: Vec<Float> = svec_pairs(n).iter().map(|&(i, j)| self.x[i][j].clone()).collect();
        v.extend(self.y.iter().cloned());
        v.extend(svec_pairs(n).iter().map(|&(i, j)| self.s[i][j].clone()));
        v
    }
    pub fn dist_x(&self, xstar: &RMat) -> Float {
        linalg::frobenius(&linalg::sub(&self.x, &linalg::to_fmat(xstar, self.precision)))
    }
    pub fn dist_s(&self, sstar: &RMat) -> Float {
        linalg::frobenius(&linalg::sub(&self.s, &linalg::to_fmat(sstar, self.precision)))
    }
}

/// Floating-point data of an instance with the primal subspace parametrized.
struct Model {
    n: usize,
    prec: u32,
    x0: FMat,
    basis: Vec<FMat>,
    free: Vec<usize>,
    a: Vec<FMat>,
    c: FMat,
    b: Vec<Float>,
    pairs: Vec<(usize, usize)>,
}

impl Model {
    fn new(inst: &SdoInstance, prec: u32) -> Result<Self> {
        let param = linalg::affine_solve(&inst.primal_matrix(), &inst.b_rat())
            .ok_or_else(|| CoreError::Validation("primal constraints are inconsistent".into()))?;
        let n = inst.n;
        let smat = |v: &[Rat]| linalg::to_fmat(&crate::instance::smat(n, v), prec);
        Ok(Model {
            n,
            prec,
            x0: smat(&param.x0),
            basis: param.basis.iter().map(|v| smat(v)).collect(),
            free: param.free.clone(),
            a: inst.a.iter().map(|a| linalg::to_fmat(&a.to_rmat(), prec)).collect(),
            c: linalg::to_fmat(&inst.c.to_rmat(), prec),
            b: inst.b_rat().iter().map(|v| to_float(v, prec)).collect(),
            pairs: svec_pairs(n),
        })
    }

    fn x_of(&self, z: &[Float]) -> FMat {
        let mut x = self.x0.clone();
        for (zj, e) in z.iter().zip(&self.basis) {
            x = linalg::add(&x, &linalg::scale(e, zj));
        }
        x
    }

    fn s_of(&self, y: &[Float]) -> FMat {
        let mut s = self.c.clone();
        for (yi, a) in y.iter().zip(&self.a) {
            s = linalg::sub(&s, &linalg::scale(a, yi));
        }
        s
    }

    fn z_of(&self, x: &FMat) -> Vec<Float> {
        let pairs = &self.pairs;
        self.free.iter().map(|&k| x[pairs[k].0][pairs[k].1].clone()).collect()
    }

    fn sym_prod(&self, a: &FMat, b: &FMat) -> FMat {
        let ab = linalg::matmul(a, b);
        let ba = linalg::matmul(b, a);
        linalg::add(&ab, &ba)
    }

    fn central_matrix(&self, x: &FMat, s: &FMat, mu: &Float) -> FMat {
        let mut r = self.sym_prod(x, s);
        let two_mu = Float::with_val(self.prec, mu * 2u32);
        for i in 0..self.n {
            r[i][i] -= &two_mu;
        }
        r
    }

    fn upper(&self, m: &FMat) -> Vec<Float> {
        self.pairs.iter().map(|&(i, j)| m[i][j].clone()).collect()
    }

    fn jacobian(&self, x: &FMat, s: &FMat) -> FMat {
        let t = self.pairs.len();
        let mut cols: Vec<Vec<Float>> = Vec::with_capacity(t);
        for e in &self.basis {
            cols.push(self.upper(&self.sym_prod(e, s)));
        }
        for a in &self.a {
            let v = self.upper(&self.sym_prod(x, a));
            cols.push(v.into_iter().map(|f| -f).collect());
        }
        (0..t).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    }

    fn primal_residual(&self, x: &FMat) -> Float {
        let mut tot = fzero(self.prec);
        for (a, b) in self.a.iter().zip(&self.b) {
            let r = linalg::inner(a, x) - b;
            tot += r.square();
        }
        tot.sqrt()
    }
}

fn norm(v: &[Float], prec: u32) -> Float {
    let mut s = fzero(prec);
    for x in v {
        s += Float::with_val(prec, x.square_ref());
    }
    s.sqrt()
}

/// Damped Newton on the square system in the unknowns (z, y).
fn correct(model: &Model, x: &FMat, y: &[Float], mu: &Float, tol: &Float) -> Result<CentralPoint> {
    let prec = model.prec;
    let mut z = model.z_of(x);
    let mut y = y.to_vec();
    let mut xm = model.x_of(&z);
    let mut sm = model.s_of(&y);
    if !linalg::is_pd(&xm) || !linalg::is_pd(&sm) {
        return Err(CoreError::Numeric("starting point is not positive definite".into()));
    }
    let mut r = model.upper(&model.central_matrix(&xm, &sm, mu));
    let mut rn = norm(&r, prec);
    let mut iterations = 0;
    while rn >= *tol {
        if iterations == 50 {
            return Err(CoreError::Numeric(format!("corrector did not converge in 50 iterations (residual {})", rn.to_f64())));
        }
        iterations += 1;
        let j = model.jacobian(&xm, &sm);
        let rhs: Vec<Float> = r.iter().map(|v| Float::with_val(prec, -v)).collect();
        let d = linalg::solve(&j, &rhs).ok_or_else(|| CoreError::Numeric("singular Newton system".into()))?;
        let (dz, dy) = d.split_at(z.len());
        let mut alpha = Float::with_val(prec, 1);
        loop {
            let zn: Vec<Float> = z.iter().zip(dz).map(|(a, b)| Float::with_val(prec, a + &alpha * b)).collect();
            let yn: Vec<Float> = y.iter().zip(dy).map(|(a, b)| Float::with_val(prec, a + &alpha * b)).collect();
            let xn = model.x_of(&zn);
            let sn = model.s_of(&yn);
            if linalg::is_pd(&xn) && linalg::is_pd(&sn) {
                let rnew = model.upper(&model.central_matrix(&xn, &sn, mu));
                let nn = norm(&rnew, prec);
                if nn < rn {
                    z = zn;
                    y = yn;
                    xm = xn;
                    sm = sn;
                    r = rnew;
                    rn = nn;
                    break;
                }
            }
            alpha /= 2u32;
            if alpha < Float::with_val(prec, Float::i_exp(1, -40)) {
                return Err(CoreError::Numeric("line search failed to keep X, S positive definite".into()));
            }
        }
    }
    let res_central = linalg::frobenius(&model.central_matrix(&xm, &sm, mu));
    let res_primal = model.primal_residual(&xm);
    Ok(CentralPoint {
        mu: mu.clone(),
        mu_exact: None,
        x: xm,
        y,
        s: sm,
        res_primal,
        res_dual: fzero(prec),
        res_central,
        iterations,
        precision: prec,
    })
}

/// Newton corrector towards the central point at `mu_target` from `(x, y)`.
pub fn newton_correct(inst: &SdoInstance, x: &RMat, y: &[Rat], mu_target: &Rat, tol: &Float, prec: u32) -> Result<CentralPoint> {
    let model = Model::new(inst, prec)?;
    let xf = linalg::to_fmat(x, prec);
    let yf: Vec<Float> = y.iter().map(|v| to_float(v, prec)).collect();
    let mut p = correct(&model, &xf, &yf, &to_float(mu_target, prec), tol)?;
    p.mu_exact = Some(mu_target.clone());
    Ok(p)
}

#[derive(Clone, Debug, Serialize)]
pub struct Schedule {
    pub mu_from: String,
    pub mu_to: String,
    pub ratio: String,
    pub precision: u32,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct TraceLog {
    pub points: Vec<CentralPoint>,
    pub schedule: Schedule,
    /// Number of inserted intermediate μ values.
    pub refinements: usize,
}

fn geometric_mid(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec(), a * b).sqrt()
}

fn advance(model: &Model, from: &CentralPoint, mu: &Float, tol: &Float, depth: usize, refinements: &mut usize) -> Result<CentralPoint> {
    match correct(model, &from.x, &from.y, mu, tol) {
        Ok(p) => Ok(p),
        Err(e) => {
            if depth == 10 {
                return Err(CoreError::Numeric(format!("corrector failed after 10 step halvings: {e}")));
            }
            *refinements += 1;
            let mid = geometric_mid(&from.mu, mu);
            let pm = advance(model, from, &mid, tol, depth + 1, refinements)?;
            advance(model, &pm, mu, tol, depth + 1, refinements)
        }
    }
}

/// Follows the central path along μ_k = μ_from·ρ^k until μ_to (inclusive when hit).
pub fn trace(inst: &SdoInstance, mu_from: &Rat, mu_to: &Rat, ratio: &Rat, tol: Option<Float>, prec: u32) -> Result<TraceLog> {
    if !(mu_to.is_positive_r() && mu_to < mu_from && *mu_from <= Rat::one()) {
        return Err(CoreError::Validation("require 0 < mu_to < mu_from <= 1".into()));
    }
    if !(ratio.is_positive_r() && *ratio < Rat::one()) {
        return Err(CoreError::Validation("require 0 < ratio < 1".into()));
    }
    let start = inst.start.as_ref().ok_or(CoreError::NoStart)?;
    let tol = tol.unwrap_or_else(|| default_tol(prec));
    let model = Model::new(inst, prec)?;
    let mut refinements = 0;
    let first = {
        let xf = linalg::to_fmat(&start.x, prec);
        let yf: Vec<Float> = start.y.iter().map(|v| to_float(v, prec)).collect();
        let seed = CentralPoint {
            mu: Float::with_val(prec, 1),
            mu_exact: None,
            x: xf,
            y: yf,
            s: start.s.iter().map(|r| r.iter().map(|v| to_float(v, prec)).collect()).collect(),
            res_primal: fzero(prec),
            res_dual: fzero(prec),
            res_central: fzero(prec),
            iterations: 0,
            precision: prec,
        };
        let mut p = advance(&model, &seed, &to_float(mu_from, prec), &tol, 0, &mut refinements)?;
        p.mu_exact = Some(mu_from.clone());
        p
    };
    let mut points = vec![first];
    let mut mu = mu_from.clone();
    loop {
        mu = &mu * ratio;
        if mu < *mu_to {
            break;
        }
        let prev = points.last().unwrap();
        let mut p = advance(&model, prev, &to_float(&mu, prec), &tol, 0, &mut refinements)?;
        p.mu_exact = Some(mu.clone());
        points.push(p);
    }
    Ok(TraceLog {
        points,
        schedule: Schedule {
            mu_from: fmt_rat(mu_from),
            mu_to: fmt_rat(mu_to),
            ratio: fmt_rat(ratio),
            precision: prec,
            tol: tol.to_f64(),
        },
        refinements,
    })
}

trait PosR {
    fn is_positive_r(&self) -> bool;
}

impl PosR for Rat {
    fn is_positive_r(&self) -> bool {
        exactalg::rat::sign(self) > 0
    }
}

/// Least-squares slope of log(v) against log(μ).
pub fn loglog_slope(mus: &[Float], vals: &[Float]) -> f64 {
    let xs: Vec<f64> = mus.iter().map(|m| Float::with_val(m.prec(), m.ln_ref()).to_f64()).collect();
    let ys: Vec<f64> = vals.iter().map(|v| Float::with_val(v.prec(), v.ln_ref()).to_f64()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Points whose μ lies within `decades` decades of the last point.
fn window(log: &TraceLog, decades: u32) -> &[CentralPoint] {
    let last = log.points.last().unwrap().mu.to_f64().log10();
    let start = log
        .points
        .iter()
        .position(|p| p.mu.to_f64().log10() <= last + decades as f64 + 1e-9)
        .unwrap_or(0);
    &log.points[start..]
}

#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub gamma_x: f64,
    pub gamma_s: f64,
    pub points: usize,
    pub window_decades: u32,
}

/// Fitted exponents of ∥X(μ)−X**∥ and ∥S(μ)−S**∥ over the final window.
pub fn fit_rate(log: &TraceLog, xstar: &RMat, sstar: &RMat, window_decades: u32) -> Result<RateFit> {
    let pts = window(log, window_decades);
    if pts.len() < 2 {
        return Err(CoreError::Validation("trace too short for a rate fit".into()));
    }
    let prec = pts[0].precision;
    let floor = Float::with_val(prec, default_tol(prec) * 1_000_000u32);
    let mus: Vec<Float> = pts.iter().map(|p| p.mu.clone()).collect();
    let dx: Vec<Float> = pts.iter().map(|p| p.dist_x(xstar)).collect();
    let ds: Vec<Float> = pts.iter().map(|p| p.dist_s(sstar)).collect();
    if dx.iter().chain(&ds).any(|d| *d < floor) {
        return Err(CoreError::Numeric("distance below numeric floor, increase precision".into()));
    }
    Ok(RateFit {
        gamma_x: loglog_slope(&mus, &dx),
        gamma_s: loglog_slope(&mus, &ds),
        points: pts.len(),
        window_decades,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenClass {
    pub matrix: String,
    /// 1-based index in descending order.
    pub index: usize,
    pub class: String,
    pub exponent: f64,
    pub window: (f64, f64),
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenProfile {
    pub ranks: (usize, usize, usize),
    pub classes: Vec<EigenClass>,
    pub pass: bool,
}

pub const EIGEN_TOL: f64 = 0.05;

/// Decay exponents of the eigenvalues of X(μ), S(μ) against the Θ(1), middle and O(μ) windows.
pub fn eigen_profile(log: &TraceLog, ranks: (usize, usize, usize), window_decades: u32) -> Result<EigenProfile> {
    let (nb, nn, nt) = ranks;
    let n = log.points[0].x.len();
    if nb + nn + nt != n {
        return Err(CoreError::Validation(format!("ranks {ranks:?} do not sum to n = {n}")));
    }
    let pts = window(log, window_decades);
    let mus: Vec<Float> = pts.iter().map(|p| p.mu.clone()).collect();
    let ex: Vec<Vec<Float>> = pts.iter().map(|p| p.eig_x()).collect();
    let es: Vec<Vec<Float>> = pts.iter().map(|p| p.eig_s()).collect();
    let lo_mid = 2f64.powi(1 - n as i32);
    let tol = EIGEN_TOL;
    let mut classes = vec![];
    for (name, eigs, big) in [("X", &ex, nb), ("S", &es, nn)] {
        for i in 0..n {
            let vals: Vec<Float> = eigs.iter().map(|e| e[i].clone()).collect();
            if vals.iter().any(|v| *v <= 0) {
                return Err(CoreError::Numeric(format!("nonpositive eigenvalue of {name}")));
            }
            let e = loglog_slope(&mus, &vals);
            let (class, w) = if i < big {
                ("bounded", (-tol, tol))
            } else if i < big + nt {
                ("middle", (lo_mid - tol, 1.0 - lo_mid + tol))
            } else {
                ("vanishing", (1.0 - tol, f64::INFINITY))
            };
            classes.push(EigenClass {
                matrix: name.into(),
                index: i + 1,
                class: class.into(),
                exponent: e,
                window: w,
                pass: e >= w.0 && e <= w.1,
            });
        }
    }
    let pass = classes.iter().all(|c| c.pass);
    Ok(EigenProfile { ranks, classes, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    pub exponent: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Fitted exponent of the distance to the solution set against 2^{1−n}.
pub fn holder_check(log: &TraceLog, dist: impl Fn(&CentralPoint) -> Float, window_decades: u32) -> HolderReport {
    let pts = window(log, window_decades);
    let n = pts[0].x.len();
    let mus: Vec<Float> = pts.iter().map(|p| p.mu.clone()).collect();
    let d: Vec<Float> = pts.iter().map(&dist).collect();
    let exponent = loglog_slope(&mus, &d);
    let bound = 2f64.powi(1 - n as i32);
    HolderReport { exponent, bound, pass: exponent >= bound - EIGEN_TOL }
}

/// One row of the convergence table: μ, λ_[n](X), λ_[n−1](X), λ_[n](S), λ_[n−1](S), dist_X, dist_S.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub mu: f64,
    pub lam_x_min: f64,
    pub lam_x_next: f64,
    pub lam_s_min: f64,
    pub lam_s_next: f64,
    pub dist_x: Option<f64>,
    pub dist_s: Option<f64>,
}

pub fn table_row(p: &CentralPoint, limit: Option<(&RMat, &RMat)>) -> TableRow {
    let ex = p.eig_x();
    let es = p.eig_s();
    let n = ex.len();
    let next = |e: &[Float]| if n >= 2 { e[n - 2].to_f64() } else { f64::NAN };
    TableRow {
        mu: p.mu.to_f64(),
        lam_x_min: ex[n - 1].to_f64(),
        lam_x_next: next(&ex),
        lam_s_min: es[n - 1].to_f64(),
        lam_s_next: next(&es),
        dist_x: limit.map(|(x, _)| p.dist_x(x).to_f64()),
        dist_s: limit.map(|(_, s)| p.dist_s(s).to_f64()),
    }
}

/// Trace CSV with a JSON header line.
pub fn to_csv(log: &TraceLog, limit: Option<(&RMat, &RMat)>) -> String {
    let n = log.points.first().map_or(0, |p| p.x.len());
    let header = json!({ "schedule": log.schedule, "refinements": log.refinements, "points": log.points.len() });
    let mut out = format!("# {header}\n");
    let mut cols = vec!["mu".to_string()];
    for i in 1..=n {
        cols.push(format!("lambda{i}_X"));
    }
    for i in 1..=n {
        cols.push(format!("lambda{i}_S"));
    }
    cols.extend(["dist_X", "dist_S", "res_primal", "res_central", "gap"].map(String::from));
    out.push_str(&cols.join(","));
    out.push('\n');
    let e = |f: &Float| format!("{:.6e}", f.to_f64());
    for p in &log.points {
        let mut row = vec![match &p.mu_exact {
            Some(m) => format!("{:.6e}", exactalg::rat::to_f64(m)),
            None => e(&p.mu),
        }];
        row.extend(p.eig_x().iter().map(e));
        row.extend(p.eig_s().iter().map(e));
        match limit {
            Some((x, s)) => {
                row.push(e(&p.dist_x(x)));
                row.push(e(&p.dist_s(s)));
            }
            None => row.extend(["".to_string(), "".to_string()]),
        }
        row.push(e(&p.res_primal));
        row.push(e(&p.res_central));
        row.push(e(&p.duality_gap()));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// 10^{-k} as an exact rational.
pub fn pow10_neg(k: u32) -> Rat {
    Rat::new(1.into(), num_bigint::BigInt::from(10u32).pow(k))
}

pub fn float_pow10(prec: u32, k: i32) -> Float {
    Float::with_val(prec, 10).pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_diag_lp, gen_elliptope3};
    use exactalg::rat::{rat, rat_frac};

    fn diag_lp_y(mu: f64) -> f64 {
        // mu/(1-y) + mu/(-y) = 1 with y < 0, by bisection
        let g = |y: f64| mu / (1.0 - y) - mu / y - 1.0;
        let (mut lo, mut hi) = (-1e6, -1e-300);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn diag_lp_closed_form() {
        let inst = gen_diag_lp();
        let log = trace(&inst, &rat(1), &rat_frac(1, 1000), &rat_frac(1, 10), None, 128).unwrap();
        for p in &log.points {
            let mu = p.mu.to_f64();
            let y = diag_lp_y(mu);
            assert!((p.y[0].to_f64() - y).abs() < 1e-9 * (1.0 + y.abs()), "mu {mu}");
            assert!((p.x[0][0].to_f64() - mu / (1.0 - y)).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_point_when_already_central() {
        let inst = gen_diag_lp();
        let log = trace(&inst, &rat(1), &rat_frac(1, 10), &rat_frac(1, 10), None, 128).unwrap();
        let p = &log.points[1];
        let x = p.x.iter().map(|r| r.iter().map(exactalg::rat::from_float).collect()).collect::<RMat>();
        let y: Vec<Rat> = p.y.iter().map(exactalg::rat::from_float).collect();
        let q = newton_correct(&inst, &x, &y, &rat_frac(1, 10), &default_tol(128), 128).unwrap();
        assert!(q.iterations <= 1);
    }

    #[test]
    fn elliptope_mu_one() {
        let inst = gen_elliptope3();
        let log = trace(&inst, &rat(1), &rat_frac(1, 100), &rat_frac(1, 10), None, 256).unwrap();
        let p = &log.points[0];
        // 2T^3 + (3/2)T^2 - 3T - 2 = 0 at mu = 1, central root in (-1, 0)
        let t = p.x[0][1].to_f64();
        assert!((2.0 * t * t * t + 1.5 * t * t - 3.0 * t - 2.0).abs() < 1e-12);
        assert!(p.res_central < default_tol(256));
        let gap = p.duality_gap().to_f64();
        assert!((gap - 3.0).abs() < 1e-20);
    }

    #[test]
    fn synthetic_power_law() {
        let prec = 128;
        let mus: Vec<Float> = (0..10).map(|k| float_pow10(prec, -k)).collect();
        let d: Vec<Float> = mus.iter().map(|m| Float::with_val(prec, m.sqrt_ref())).collect();
        assert!((loglog_slope(&mus, &d) - 0.5).abs() < 1e-6);
    }
}
