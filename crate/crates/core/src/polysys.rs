//! Exact polynomial systems of the central path, optimality conditions,
//! the sum-of-squares Q, its deformation, and the strict-complementarity system.

use crate::error::{CoreError, Result};
use crate::instance::{svec_index, svec_pairs, SdoInstance};
use crate::linalg::{self, RMat};
use exactalg::rat::{rat, sign, Rat};
use exactalg::resultant::det_bareiss;
use exactalg::MPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Variable layout shared by every system: index 0 is μ, then x (t), y (m), s (t).
#[derive(Clone, Debug)]
pub struct Layout {
    pub n: usize,
    pub m: usize,
    pub t: usize,
}

impl Layout {
    pub fn of(inst: &SdoInstance) -> Self {
        Layout { n: inst.n, m: inst.m, t: inst.t() }
    }
    pub const MU: usize = 0;
    pub fn nbar(&self) -> usize {
        self.m + 2 * self.t
    }
    pub fn x(&self, k: usize) -> usize {
        1 + k
    }
    pub fn y(&self, i: usize) -> usize {
        1 + self.t + i
    }
    pub fn s(&self, k: usize) -> usize {
        1 + self.t + self.m + k
    }
    pub fn xm(&self, i: usize, j: usize) -> MPoly {
        MPoly::var(self.x(svec_index(self.n, i, j)))
    }
    pub fn sm(&self, i: usize, j: usize) -> MPoly {
        MPoly::var(self.s(svec_index(self.n, i, j)))
    }
    pub fn names(&self) -> Vec<String> {
        let pair = |i: usize, j: usize| {
            if self.n < 10 {
                format!("{}{}", i + 1, j + 1)
            } else {
                format!("{}_{}", i + 1, j + 1)
            }
        };
        let mut v = vec!["mu".to_string()];
        for (i, j) in svec_pairs(self.n) {
            v.push(format!("x{}", pair(i, j)));
        }
        for i in 0..self.m {
            v.push(format!("y{}", i + 1));
        }
        for (i, j) in svec_pairs(self.n) {
            v.push(format!("s{}", pair(i, j)));
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct PolySystem {
    pub vars: Vec<String>,
    pub polys: Vec<MPoly>,
    pub labels: Vec<String>,
}

impl PolySystem {
    pub fn to_text(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        self.polys
            .iter()
            .zip(&self.labels)
            .map(|(p, l)| format!("{l}: {}", p.to_text(&names)))
            .collect::<Vec<_>>()
            .join("\n")
    }
    pub fn eval(&self, point: &[Rat]) -> Vec<Rat> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }
}

fn int(x: &BigInt) -> Rat {
    Rat::from_integer(x.clone())
}

fn primal_polys(inst: &SdoInstance, l: &Layout) -> Vec<MPoly> {
    (0..inst.m)
        .map(|i| {
            let mut p = MPoly::constant(-int(&inst.b[i]));
            for (k, c) in inst.primal_row(i).into_iter().enumerate() {
                p = p.add(&MPoly::var(l.x(k)).scale(&c));
            }
            p
        })
        .collect()
}

fn dual_polys(inst: &SdoInstance, l: &Layout) -> Vec<MPoly> {
    svec_pairs(inst.n)
        .into_iter()
        .map(|(j, k)| {
            let mut p = l.sm(j, k).sub(&MPoly::constant(inst.c.get(j, k)));
            for i in 0..inst.m {
                p = p.add(&MPoly::var(l.y(i)).scale(&inst.a[i].get(j, k)));
            }
            p
        })
        .collect()
}

fn mat_x(l: &Layout) -> Vec<Vec<MPoly>> {
    (0..l.n).map(|i| (0..l.n).map(|j| l.xm(i, j)).collect()).collect()
}

fn mat_s(l: &Layout) -> Vec<Vec<MPoly>> {
    (0..l.n).map(|i| (0..l.n).map(|j| l.sm(i, j)).collect()).collect()
}

fn mat_mul(a: &[Vec<MPoly>], b: &[Vec<MPoly>]) -> Vec<Vec<MPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(MPoly::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn centrality_polys(l: &Layout, with_mu: bool) -> Vec<MPoly> {
    let x = mat_x(l);
    let s = mat_s(l);
    let xs = mat_mul(&x, &s);
    svec_pairs(l.n)
        .into_iter()
        .map(|(i, j)| {
            let mut p = xs[i][j].add(&xs[j][i]);
            if i == j && with_mu {
                p = p.sub(&MPoly::var(Layout::MU).scale(&rat(2)));
            }
            p
        })
        .collect()
}

fn labels(inst: &SdoInstance, central: &str) -> Vec<String> {
    let mut v: Vec<String> = (0..inst.m).map(|i| format!("primal{}", i + 1)).collect();
    for (i, j) in svec_pairs(inst.n) {
        v.push(format!("dual{}{}", i + 1, j + 1));
    }
    for (i, j) in svec_pairs(inst.n) {
        v.push(format!("{central}{}{}", i + 1, j + 1));
    }
    v
}

/// m primal, t(n) dual and t(n) symmetrized centrality polynomials.
pub fn central_path_system(inst: &SdoInstance) -> PolySystem {
    let l = Layout::of(inst);
    let mut polys = primal_polys(inst, &l);
    polys.extend(dual_polys(inst, &l));
    polys.extend(centrality_polys(&l, true));
    PolySystem { vars: l.names(), polys, labels: labels(inst, "central") }
}

/// The central-path system at μ = 0.
pub fn optimality_system(inst: &SdoInstance) -> PolySystem {
    let l = Layout::of(inst);
    let mut polys = primal_polys(inst, &l);
    polys.extend(dual_polys(inst, &l));
    polys.extend(centrality_polys(&l, false));
    PolySystem { vars: l.names(), polys, labels: labels(inst, "compl") }
}

pub fn sos_q(inst: &SdoInstance) -> MPoly {
    central_path_system(inst).polys.iter().fold(MPoly::zero(), |acc, p| acc.add(&p.mul(p)))
}

#[derive(Clone, Debug)]
pub struct QTilde {
    pub eps: Rat,
    pub q_tilde: MPoly,
    pub deformation: MPoly,
    pub g_k: MPoly,
    /// Degree bounds (d_1, …, d_{n̄+1}).
    pub d: Vec<u32>,
    pub dbar: Vec<u32>,
    /// Measured deg(Q̃) in V and tdeg_{V_i}(Q̃).
    pub deg_v: u32,
    pub tdeg_v: Vec<u32>,
    pub tdeg_mu: u32,
    /// Index of V_{n̄+1} and of ξ.
    pub v_extra: usize,
    pub xi: usize,
}

fn smallest_even_at_least(d: u32) -> u32 {
    d + d % 2
}

/// Q̃ = Q² + (ε²ΣV² − 1)², G_k and ξG_k + (1−ξ)Q̃ over V_1…V_{n̄+1}.
pub fn q_tilde_and_deformation(inst: &SdoInstance, eps: &Rat) -> Result<QTilde> {
    if sign(eps) <= 0 {
        return Err(CoreError::Validation("epsilon must be positive".into()));
    }
    let l = Layout::of(inst);
    let nb = l.nbar();
    let v_extra = nb + 1;
    let xi = nb + 2;
    let q = sos_q(inst);
    let mut sumsq = MPoly::zero();
    for v in 1..=v_extra {
        sumsq = sumsq.add(&MPoly::var(v).pow(2));
    }
    let ball = sumsq.scale(&(eps * eps)).sub(&MPoly::int(1));
    let q_tilde = q.mul(&q).add(&ball.mul(&ball));
    let deg_v = q_tilde.tdeg_without(Layout::MU);
    let tdeg_v: Vec<u32> = (1..=v_extra).map(|v| tdeg_containing(&q_tilde, v)).collect();
    let tdeg_mu = q_tilde.tdeg_with(Layout::MU);
    let d = vec![8u32; nb + 1];
    if deg_v > d[0] || tdeg_v.iter().any(|&x| x > 8) {
        return Err(CoreError::Validation(format!("degree bound 8 violated: deg {deg_v}, tdeg {tdeg_v:?}")));
    }
    let dbar: Vec<u32> = d.iter().map(|&x| smallest_even_at_least(x)).collect();
    let ebar = eps / rat(2);
    let mut inner = MPoly::zero();
    for v in 1..=v_extra {
        inner = inner.add(&MPoly::var(v).pow(dbar[v - 1]));
    }
    for v in 2..=v_extra {
        inner = inner.add(&MPoly::var(v).pow(2));
    }
    let ebar_pow = num_traits::pow(ebar, dbar[0] as usize);
    let g_k = inner.scale(&ebar_pow).sub(&MPoly::int(2 * nb as i64 + 1));
    let xiv = MPoly::var(xi);
    let deformation = xiv.mul(&g_k).add(&MPoly::int(1).sub(&xiv).mul(&q_tilde));
    Ok(QTilde { eps: eps.clone(), q_tilde, deformation, g_k, d, dbar, deg_v, tdeg_v, tdeg_mu, v_extra, xi })
}

/// Largest total degree in the V-variables (μ excluded) of monomials containing `v`.
fn tdeg_containing(p: &MPoly, v: usize) -> u32 {
    p.terms()
        .filter(|(e, _)| e.get(v).copied().unwrap_or(0) > 0)
        .map(|(e, _)| e.iter().enumerate().filter(|(i, _)| *i != Layout::MU).map(|(_, d)| *d).sum())
        .max()
        .unwrap_or(0)
}

/// Partial derivatives with respect to V_1…V_n̄.
pub fn jacobian(sys: &PolySystem) -> Vec<Vec<MPoly>> {
    let nb = sys.vars.len() - 1;
    sys.polys.iter().map(|p| (1..=nb).map(|v| p.derivative(v)).collect()).collect()
}

/// Primal, dual, the n² entries of XS and the leading minors det(X_[i] + S_[i]).
pub fn strict_complementarity_system(inst: &SdoInstance) -> PolySystem {
    let l = Layout::of(inst);
    let mut polys = primal_polys(inst, &l);
    polys.extend(dual_polys(inst, &l));
    let mut lab = labels(inst, "unused");
    lab.truncate(inst.m + l.t);
    let xs = mat_mul(&mat_x(&l), &mat_s(&l));
    for i in 0..l.n {
        for j in 0..l.n {
            polys.push(xs[i][j].clone());
            lab.push(format!("xs{}{}", i + 1, j + 1));
        }
    }
    let sum: Vec<Vec<MPoly>> = (0..l.n).map(|i| (0..l.n).map(|j| l.xm(i, j).add(&l.sm(i, j))).collect()).collect();
    for k in 1..=l.n {
        let sub: Vec<Vec<MPoly>> = sum[..k].iter().map(|r| r[..k].to_vec()).collect();
        polys.push(det_bareiss(&sub));
        lab.push(format!("minor{k}"));
    }
    PolySystem { vars: l.names(), polys, labels: lab }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScMembership {
    pub equations_vanish: bool,
    pub failing_equation: Option<String>,
    pub minors: Vec<String>,
    pub minors_positive: bool,
    pub strictly_complementary: bool,
}

/// Evaluates the strict-complementarity system at an exact point (μ coordinate ignored).
pub fn sc_membership(inst: &SdoInstance, x: &[Rat], y: &[Rat], s: &[Rat]) -> ScMembership {
    let sys = strict_complementarity_system(inst);
    let mut point = vec![Rat::zero()];
    point.extend_from_slice(x);
    point.extend_from_slice(y);
    point.extend_from_slice(s);
    let n_eq = sys.polys.len() - inst.n;
    let mut failing = None;
    for (p, lab) in sys.polys[..n_eq].iter().zip(&sys.labels) {
        if !p.eval(&point).is_zero() {
            failing = Some(lab.clone());
            break;
        }
    }
    let minors: Vec<Rat> = sys.polys[n_eq..].iter().map(|p| p.eval(&point)).collect();
    let pos = minors.iter().all(|m| m.is_positive());
    ScMembership {
        equations_vanish: failing.is_none(),
        failing_equation: failing.clone(),
        minors: minors.iter().map(exactalg::rat::fmt_rat).collect(),
        minors_positive: pos,
        strictly_complementary: failing.is_none() && pos,
    }
}

/// Certified lower bound on the smallest eigenvalue of a rational symmetric matrix.
pub fn certified_lambda_min(a: &RMat) -> Result<Rat> {
    let ev = linalg::sym_eigenvalues(&linalg::to_fmat(a, 128));
    let lam = ev.last().unwrap().to_f64();
    if lam <= 0.0 || !linalg::is_pd_exact(a) {
        return Err(CoreError::Validation("matrix is not positive definite".into()));
    }
    let mut cand = exactalg::rat::from_float(&rug::Float::with_val(64, lam * (1.0 - 1e-9)));
    loop {
        let shifted: RMat = a
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { x - &cand } else { x.clone() }).collect())
            .collect();
        if linalg::is_pd_exact(&shifted) {
            return Ok(cand);
        }
        cand /= rat(2);
    }
}

fn ceil_div(num: &Rat, den: &Rat) -> BigInt {
    exactalg::rat::ceil(&(num / den))
}

/// ε = 1 / max(⌈2n/λ_min(S(1))⌉, ⌈2n/λ_min(X(1))⌉) from certified eigenvalue bounds.
pub fn epsilon_bound(n: usize, x1: &RMat, s1: &RMat) -> Result<Rat> {
    let lx = certified_lambda_min(x1)?;
    let ls = certified_lambda_min(s1)?;
    let two_n = rat(2 * n as i64);
    let k = ceil_div(&two_n, &lx).max(ceil_div(&two_n, &ls)).max(BigInt::one());
    Ok(Rat::new(BigInt::one(), k))
}

/// ε from the central point at μ = 1, traced from the instance's start.
pub fn epsilon_from_start(inst: &SdoInstance) -> Result<Rat> {
    let st = inst.start.as_ref().ok_or(CoreError::NoStart)?;
    let p = crate::tracer::newton_correct(inst, &st.x, &st.y, &rat(1), &crate::tracer::default_tol(128), 128)?;
    let exact = |m: &crate::linalg::FMat| -> RMat { m.iter().map(|r| r.iter().map(exactalg::rat::from_float).collect()).collect() };
    epsilon_bound(inst.n, &exact(&p.x), &exact(&p.s))
}
