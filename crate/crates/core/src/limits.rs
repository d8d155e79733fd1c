//! Limits as μ → 0⁺ of bounded branches of a parametrized univariate
//! representation, and certification of the limit point.

use crate::error::{CoreError, Result};
use crate::instance::{svec_pairs, SdoInstance};
use crate::linalg;
use crate::polysys::optimality_system;
use crate::urs::{self, eval_in, minor_sum_signs, Urs};
use exactalg::bipoly;
use exactalg::quotient::Quotient;
use exactalg::rat::{fmt_rat, rat, to_f64, Rat};
use exactalg::roots::{count_roots, isolate_real_roots, root_by_thom, root_multiplicity, sign_at_root, thom_encoding, IsolatedRoot};
use exactalg::{Field, QPoly, Ring, ThomEncoding};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::sync::Arc;

/// Smallest grid value 10⁻³⁰.
pub fn grid_floor() -> Rat {
    Rat::new(BigInt::from(1), BigInt::from(10).pow(30))
}

/// μ_j = 10⁻¹·2^{−j}.
pub fn grid(j: u32) -> Rat {
    Rat::new(BigInt::from(1), BigInt::from(10) * (BigInt::from(1) << j as usize))
}

#[derive(Clone, Debug)]
pub struct LimitRep {
    pub fbar: QPoly,
    pub gbar: Vec<QPoly>,
    pub sigma_bar: ThomEncoding,
    pub k: usize,
    pub root: IsolatedRoot,
    pub order_f: usize,
    /// Common μ-order used for all g_i.
    pub order_g: usize,
    pub n: usize,
    pub m: usize,
    /// Branch value at the smallest grid point reached.
    pub tracked: f64,
}

fn value(r: &IsolatedRoot) -> f64 {
    let mut r = r.clone();
    r.refine_bits(64 + r.hi.clone().max(-r.lo.clone()).ceil().to_integer().bits() as u32);
    r.to_f64()
}

fn nearest(roots: &[IsolatedRoot], t: f64) -> Option<(usize, f64, f64)> {
    let mut d: Vec<(usize, f64)> = roots.iter().enumerate().map(|(i, r)| (i, (value(r) - t).abs())).collect();
    d.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (i, d1) = *d.first()?;
    let d2 = d.get(1).map_or(f64::INFINITY, |x| x.1);
    Some((i, d1, d2))
}

/// Follows the root t_σ(μ) from μ* down to 10⁻³⁰ and returns its approximate final value.
fn track(u: &Urs, sigma: &ThomEncoding, mu_star: &Rat) -> Result<f64> {
    let f = &u.f;
    let crit = bipoly::discriminant(f).map(|d| d.mul(&f.lc())).unwrap_or_else(|_| f.lc());
    let roots_at = |mu: &Rat| isolate_real_roots(&bipoly::specialize(f, mu));
    let start = roots_at(mu_star);
    let mut idx = start
        .iter()
        .position(|r| &r.thom == sigma)
        .ok_or_else(|| CoreError::Alg(exactalg::AlgError::ThomNotRealized(sigma.signs.clone())))?;
    let mut count = start.len();
    let mut t = value(&start[idx]);
    let mut mu = mu_star.clone();
    let floor = grid_floor();
    let mut j = 0u32;
    loop {
        if count_roots(&crit, &Rat::zero(), &mu) == 0 {
            let rs = roots_at(&floor);
            if rs.len() != count {
                return Err(CoreError::TrackingAmbiguity("real root count changed without a critical value".into()));
            }
            return Ok(value(&rs[idx]));
        }
        let mut next = grid(j);
        while next >= mu {
            j += 1;
            next = grid(j);
        }
        if next < floor {
            return Ok(t);
        }
        let rs = roots_at(&next);
        if count_roots(&crit, &next, &mu) == 0 && rs.len() == count {
            t = value(&rs[idx]);
        } else {
            let (i, d1, d2) = nearest(&rs, t).ok_or_else(|| CoreError::TrackingAmbiguity("branch leaves the real line".into()))?;
            if d2 <= d1 * 1.01 {
                return Err(CoreError::TrackingAmbiguity(format!("two roots equally close near mu = {}", to_f64(&next))));
            }
            idx = i;
            count = rs.len();
            t = value(&rs[i]);
        }
        mu = next;
    }
}

/// Limit representation of the branch σ (selected at μ*).
pub fn limit_urs(u: &Urs, sigma: &ThomEncoding, mu_star: &Rat) -> Result<LimitRep> {
    root_by_thom(&bipoly::specialize(&u.f, mu_star), sigma)?;
    let tracked = track(u, sigma, mu_star)?;
    let order_f = bipoly::mu_order(&u.f)?;
    let fbar = bipoly::limit_at_order(&u.f, order_f);
    let roots = isolate_real_roots(&fbar);
    let (i, d1, _) = nearest(&roots, tracked).ok_or(CoreError::Unbounded)?;
    let root = roots[i].clone();
    if !(d1 <= 1e-3 * (1.0 + value(&root).abs())) {
        return Err(CoreError::Unbounded);
    }
    let k = root_multiplicity(&fbar, &root);
    let sigma_bar = thom_encoding(&fbar, &root);
    let order_g = u
        .g
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| bipoly::mu_order(g))
        .collect::<exactalg::Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);
    let gbar = u
        .g
        .iter()
        .map(|g| {
            let mut q = bipoly::limit_at_order(g, order_g);
            for _ in 1..k {
                q = q.derivative();
            }
            q
        })
        .collect();
    Ok(LimitRep { fbar, gbar, sigma_bar, k, root, order_f, order_g, n: u.n, m: u.m, tracked })
}

/// Limit coordinates in ℚ[t]/(p̄) with p̄ the irreducible factor of f̄ vanishing at t_σ̄.
#[derive(Clone, Debug)]
pub struct LimitPoint {
    pub minpoly: QPoly,
    pub root: IsolatedRoot,
    /// Reduced representatives; constants when `minpoly` is linear.
    pub coords: Vec<QPoly>,
    pub n: usize,
    pub m: usize,
}

impl LimitPoint {
    pub fn t(&self) -> usize {
        self.n * (self.n + 1) / 2
    }
    pub fn rational(&self) -> Option<Vec<Rat>> {
        (self.minpoly.deg() == 1).then(|| self.coords.iter().map(|c| c.coeff(0)).collect())
    }
    fn block(&self, off: usize) -> Vec<Vec<QPoly>> {
        let mut m = vec![vec![QPoly::zero(); self.n]; self.n];
        for (k, (a, b)) in svec_pairs(self.n).into_iter().enumerate() {
            m[a][b] = self.coords[off + k].clone();
            m[b][a] = self.coords[off + k].clone();
        }
        m
    }
    pub fn x_polys(&self) -> Vec<Vec<QPoly>> {
        self.block(0)
    }
    pub fn s_polys(&self) -> Vec<Vec<QPoly>> {
        self.block(self.t() + self.m)
    }
    /// Exact X**, S** and y** when the coordinates are rational.
    pub fn x_rat(&self) -> Option<linalg::RMat> {
        self.rational().map(|v| crate::instance::smat(self.n, &v[..self.t()]))
    }
    pub fn y_rat(&self) -> Option<Vec<Rat>> {
        self.rational().map(|v| v[self.t()..self.t() + self.m].to_vec())
    }
    pub fn s_rat(&self) -> Option<linalg::RMat> {
        self.rational().map(|v| crate::instance::smat(self.n, &v[self.t() + self.m..]))
    }
    pub fn approx(&self) -> Vec<f64> {
        let t = value(&self.root);
        self.coords.iter().map(|c| c.eval_f64(t)).collect()
    }
    pub fn to_json(&self) -> Value {
        match self.rational() {
            Some(v) => json!({ "kind": "rational", "coordinates": v.iter().map(fmt_rat).collect::<Vec<_>>() }),
            None => json!({
                "kind": "algebraic",
                "minpoly": self.minpoly.to_string(),
                "interval": [fmt_rat(&self.root.lo), fmt_rat(&self.root.hi)],
                "coordinates": self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "approx": self.approx(),
            }),
        }
    }
}

pub fn limit_coordinates(l: &LimitRep) -> Result<LimitPoint> {
    if sign_at_root(&l.gbar[0], &l.root) == 0 {
        return Err(CoreError::Unbounded);
    }
    let minpoly = exactalg::factor::factor_univariate(&l.fbar)
        .into_iter()
        .map(|(q, _)| q)
        .find(|q| sign_at_root(q, &l.root) == 0)
        .ok_or_else(|| CoreError::Certification("no factor of the limit polynomial vanishes at the root".into()))?
        .primitive_integer();
    let md = Arc::new(minpoly.clone());
    let g0 = Quotient::new(&l.gbar[0], &md).inv();
    let coords = l.gbar[1..].iter().map(|g| Quotient::new(g, &md).mul(&g0).value().clone()).collect();
    Ok(LimitPoint { minpoly, root: l.root.clone(), coords, n: l.n, m: l.m })
}

/// Label of the first optimality polynomial not vanishing at the point.
pub fn check_optimality(inst: &SdoInstance, pt: &LimitPoint) -> Option<String> {
    let sys = optimality_system(inst);
    let md = Arc::new(pt.minpoly.clone());
    let mut vals: Vec<Option<Quotient<Rat>>> = vec![None];
    vals.extend(pt.coords.iter().map(|c| Some(Quotient::new(c, &md))));
    for (p, lab) in sys.polys.iter().zip(&sys.labels) {
        let v = eval_in(p, &vals, |c, d| if d == 0 { Quotient::constant(c.clone()) } else { Quotient::zero_r() });
        if !v.is_zero_r() {
            return Some(lab.clone());
        }
    }
    None
}

/// Signs of e_1…e_n of X** and S**.
pub fn psd_signs(pt: &LimitPoint) -> (Vec<i8>, Vec<i8>) {
    let one = QPoly::constant(rat(1));
    let md = pt.minpoly.clone();
    let sgn = |q: &QPoly| sign_at_root(&q.rem(&md), &pt.root);
    (minor_sum_signs(&pt.x_polys(), &one, sgn), minor_sum_signs(&pt.s_polys(), &one, sgn))
}

fn rank_from_signs(s: &[i8]) -> usize {
    s.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1)
}

#[derive(Clone, Debug)]
pub struct LimitCertificate {
    pub rep_index: usize,
    pub sigma: ThomEncoding,
    pub mu_star: Rat,
    pub limit: LimitRep,
    pub point: LimitPoint,
    pub rank_x: usize,
    pub rank_s: usize,
}

impl LimitCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "representation": self.rep_index,
            "sigma": self.sigma.signs,
            "mu_star": fmt_rat(&self.mu_star),
            "fbar": self.limit.fbar.to_string(),
            "sigma_bar": self.limit.sigma_bar.signs,
            "multiplicity": self.limit.k,
            "t_bar": value(&self.limit.root),
            "order_f": self.limit.order_f,
            "order_g": self.limit.order_g,
            "point": self.point.to_json(),
            "rank_x": self.rank_x,
            "rank_s": self.rank_s,
            "certified": true,
        })
    }
}

/// Limit of branch σ of representation `rep`, certified as an optimal solution.
pub fn certify_branch(inst: &SdoInstance, reps: &[Urs], rep: usize, sigma: &ThomEncoding, mu_star: &Rat) -> Result<LimitCertificate> {
    let u = &reps[rep];
    let limit = limit_urs(u, sigma, mu_star)?;
    let point = limit_coordinates(&limit)?;
    if let Some(bad) = check_optimality(inst, &point) {
        return Err(CoreError::Certification(format!("limit does not satisfy {bad}")));
    }
    let (sx, ss) = psd_signs(&point);
    for (name, s) in [("X", &sx), ("S", &ss)] {
        if let Some(k) = s.iter().position(|&v| v < 0) {
            return Err(CoreError::Certification(format!(
                "{name} is not positive semidefinite: e_{}({name}) < 0 (sum of {}x{} principal minors)",
                k + 1,
                k + 1,
                k + 1
            )));
        }
    }
    Ok(LimitCertificate {
        rep_index: rep,
        sigma: sigma.clone(),
        mu_star: mu_star.clone(),
        limit,
        point,
        rank_x: rank_from_signs(&sx),
        rank_s: rank_from_signs(&ss),
    })
}

/// Limit point of the central path.
pub fn limit_point(inst: &SdoInstance, reps: &[Urs], mu_star: &Rat) -> Result<LimitCertificate> {
    let (rep, sigma) = urs::central_branch(inst, reps, mu_star)?;
    certify_branch(inst, reps, rep, &sigma, mu_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::urs::SeparatingForm;

    #[test]
    fn line_limit_is_zero() {
        let u = Urs {
            n: 1,
            m: 0,
            f: bipoly::parse("T - mu").unwrap(),
            g: vec![bipoly::parse("1").unwrap(), bipoly::parse("mu").unwrap()],
            sep: SeparatingForm { kind: "coordinate".into(), weights: vec![1], seed: None, attempt: 0 },
        };
        let sigma = u.branches(&rat(1))[0].clone();
        let l = limit_urs(&u, &sigma, &rat(1)).unwrap();
        assert_eq!(l.k, 1);
        let pt = limit_coordinates(&l).unwrap();
        assert_eq!(pt.rational().unwrap(), vec![rat(0)]);
    }

    #[test]
    fn grid_values() {
        assert_eq!(grid(0), exactalg::rat::rat_frac(1, 10));
        assert_eq!(grid(2), exactalg::rat::rat_frac(1, 40));
    }
}
