//! Factorization over ℚ (numerical roots + exact recombination) and over
//! ℚ(μ) (specialization, Hensel lifting in μ − μ₀, recombination).

use crate::bipoly::{self, BiPoly};
use crate::error::{AlgError, Result};
use crate::rat::{from_float, rat, to_float, Rat};
use crate::ring::Field;
use crate::upoly::QPoly;
use num_traits::{Signed, Zero};
use rug::Float;

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(prec: u32, re: f64, im: f64) -> Self {
        Cx { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), &self.re + &o.re), im: Float::with_val(self.re.prec(), &self.im + &o.im) }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: Float::with_val(self.re.prec(), &self.re - &o.re), im: Float::with_val(self.re.prec(), &self.im - &o.im) }
    }
    fn mul(&self, o: &Cx) -> Cx {
        let p = self.re.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx { re, im }
    }
    fn norm2(&self) -> Float {
        let p = self.re.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }
    fn div(&self, o: &Cx) -> Cx {
        let p = self.re.prec();
        let d = o.norm2();
        let re = (Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im)) / &d;
        let im = (Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im)) / &d;
        Cx { re, im }
    }
    fn abs(&self) -> Float {
        self.norm2().sqrt()
    }
}

fn horner(c: &[Float], z: &Cx) -> (Cx, Cx) {
    let p = z.re.prec();
    let mut v = Cx::new(p, 0.0, 0.0);
    let mut d = Cx::new(p, 0.0, 0.0);
    for a in c.iter().rev() {
        d = d.mul(z).add(&v);
        v = v.mul(z);
        v.re += a;
    }
    (v, d)
}

/// All complex roots of a squarefree polynomial by Aberth iteration.
fn aberth(p: &QPoly, prec: u32) -> Vec<Cx> {
    let n = p.deg();
    let c: Vec<Float> = p.coeffs().iter().map(|a| to_float(a, prec)).collect();
    let r = crate::rat::to_f64(&crate::roots::cauchy_bound(p)).min(1e6);
    let mut z: Vec<Cx> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Cx::new(prec, 0.5 * r * th.cos(), 0.5 * r * th.sin())
        })
        .collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 24));
    for _ in 0..(200 + 20 * prec as usize) {
        let mut maxw = Float::with_val(prec, 0);
        for i in 0..n {
            let (v, d) = horner(&c, &z[i]);
            if v.norm2().is_zero() {
                continue;
            }
            let ratio = v.div(&d);
            let mut s = Cx::new(prec, 0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = s.add(&Cx::new(prec, 1.0, 0.0).div(&z[i].sub(&z[j])));
                }
            }
            let one = Cx::new(prec, 1.0, 0.0);
            let w = ratio.div(&one.sub(&ratio.mul(&s)));
            let scale = Float::with_val(prec, z[i].abs() + 1u32);
            let rel = Float::with_val(prec, w.abs() / &scale);
            if rel > maxw {
                maxw = rel;
            }
            z[i] = z[i].sub(&w);
        }
        if maxw < tol {
            break;
        }
    }
    z
}

fn round_to_int(x: &Float) -> Option<Rat> {
    let r = Float::with_val(x.prec(), x.round_ref());
    let diff = Float::with_val(x.prec(), x - &r).abs();
    if diff > 1e-6 {
        return None;
    }
    Some(from_float(&r))
}

/// Factors a squarefree primitive integer polynomial into irreducibles over ℚ.
fn factor_sqf(p: &QPoly) -> Vec<QPoly> {
    let p = p.primitive_integer();
    if p.deg() <= 1 {
        return vec![p];
    }
    let bits = p
        .coeffs()
        .iter()
        .map(|c| c.numer().bits() as u32)
        .max()
        .unwrap_or(1);
    let prec = 128 + 2 * bits + 8 * p.deg() as u32;
    let roots = aberth(&p, prec);
    let mut remaining: Vec<usize> = (0..roots.len()).collect();
    let mut q = p.clone();
    let mut out = vec![];
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for_each_subset(remaining.len(), s, &mut |sub: &[usize]| {
            if found.is_some() {
                return;
            }
            let idx: Vec<usize> = sub.iter().map(|&k| remaining[k]).collect();
            let lc = to_float(&q.lc(), prec);
            // cheap test on the constant term first
            let mut c0 = Cx { re: lc.clone(), im: Float::with_val(prec, 0) };
            for &i in &idx {
                c0 = c0.mul(&Cx::new(prec, 0.0, 0.0).sub(&roots[i]));
            }
            if round_to_int(&c0.re).is_none() || Float::with_val(prec, c0.im.abs_ref()) > 1e-6 {
                return;
            }
            let mut poly: Vec<Cx> = vec![Cx { re: lc, im: Float::with_val(prec, 0) }];
            for &i in &idx {
                let mut next = vec![Cx::new(prec, 0.0, 0.0); poly.len() + 1];
                for (k, a) in poly.iter().enumerate() {
                    next[k + 1] = next[k + 1].add(a);
                    next[k] = next[k].sub(&a.mul(&roots[i]));
                }
                poly = next;
            }
            let mut cs = vec![];
            for a in &poly {
                if Float::with_val(prec, a.im.abs_ref()) > 1e-6 {
                    return;
                }
                match round_to_int(&a.re) {
                    Some(v) => cs.push(v),
                    None => return,
                }
            }
            let g = QPoly::new(cs).primitive_integer();
            if g.deg() != s {
                return;
            }
            if let Some(h) = q.div_exact_poly(&g) {
                found = Some((sub.to_vec(), g, h));
            }
        });
        match found {
            Some((sub, g, h)) => {
                out.push(g);
                q = h;
                let drop: Vec<usize> = sub.iter().map(|&k| remaining[k]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => s += 1,
        }
    }
    if q.deg() >= 1 {
        out.push(q.primitive_integer());
    }
    out
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut vec![], f);
}

/// Irreducible factors over ℚ with multiplicities (primitive integer, positive lc).
pub fn factor_univariate(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = vec![];
    for (s, m) in p.squarefree_decomposition() {
        for g in factor_sqf(&s) {
            out.push((g, m));
        }
    }
    out
}

fn shift_mu(b: &BiPoly, mu0: &Rat) -> BiPoly {
    let lin = QPoly::new(vec![mu0.clone(), rat(1)]);
    BiPoly::new(b.coeffs().iter().map(|c| c.compose(&lin)).collect())
}

fn trunc(p: &QPoly, n: usize) -> QPoly {
    QPoly::new(p.coeffs().iter().take(n).cloned().collect())
}

fn trunc_bi(b: &BiPoly, n: usize) -> BiPoly {
    BiPoly::new(b.coeffs().iter().map(|c| trunc(c, n)).collect())
}

fn series_inv(c: &QPoly, n: usize) -> QPoly {
    let c0 = c.coeff(0);
    let ic0 = c0.inv();
    let mut b = vec![ic0.clone()];
    for k in 1..n {
        let mut s = Rat::zero();
        for j in 1..=k {
            s += c.coeff(j) * &b[k - j];
        }
        b.push(-(&ic0 * s));
    }
    QPoly::new(b)
}

fn mul_trunc(a: &BiPoly, b: &BiPoly, n: usize) -> BiPoly {
    trunc_bi(&a.mul(b), n)
}

/// Irreducible factors over ℚ(μ) of a polynomial squarefree in `T`
/// (each primitive in ℤ[μ][T]; factors of degree 0 in `T` are dropped).
pub fn factor_bivariate(f: &BiPoly) -> Result<Vec<BiPoly>> {
    let f = bipoly::normalize(f);
    let d = f.deg();
    if d <= 1 {
        return Ok(if d == 1 { vec![f] } else { vec![] });
    }
    // choose a specialization point
    let mut best: Option<(Rat, Vec<QPoly>)> = None;
    let mut valid = 0;
    for k in 0..60i64 {
        let mu0 = rat(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let f0 = bipoly::specialize(&f, &mu0);
        if f0.deg() != d || !f0.gcd(&f0.derivative()).is_constant() {
            continue;
        }
        let fs: Vec<QPoly> = factor_sqf(&f0);
        valid += 1;
        let better = best.as_ref().map_or(true, |(_, b)| fs.len() < b.len());
        if better {
            best = Some((mu0, fs));
        }
        if valid >= 4 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (mu0, uni) = best.ok_or_else(|| AlgError::Factorization("no squarefree specialization found".into()))?;
    if uni.len() == 1 {
        return Ok(vec![f]);
    }
    let n = 2 * bipoly::deg_mu(&f) + 1;
    let fs = shift_mu(&f, &mu0);
    let ilc = series_inv(&fs.lc(), n);
    let monic = BiPoly::new(fs.coeffs().iter().map(|c| trunc(&c.mul(&ilc), n)).collect());
    let h0: Vec<QPoly> = uni.iter().map(|g| g.monic()).collect();
    // cofactor inverses for the partial-fraction correction
    let r = h0.len();
    let mut sinv = vec![];
    for i in 0..r {
        let mut prod = QPoly::constant(rat(1));
        for (j, h) in h0.iter().enumerate() {
            if j != i {
                prod = prod.mul(h);
            }
        }
        sinv.push(
            prod.inv_mod(&h0[i])
                .ok_or_else(|| AlgError::Factorization("specialized factors not coprime".into()))?,
        );
    }
    let as_bi = |p: &QPoly| BiPoly::new(p.coeffs().iter().map(|c| QPoly::constant(c.clone())).collect());
    let mut h: Vec<BiPoly> = h0.iter().map(as_bi).collect();
    for k in 1..n {
        let mut prod = BiPoly::constant(QPoly::constant(rat(1)));
        for hi in &h {
            prod = mul_trunc(&prod, hi, k + 1);
        }
        let err = monic.sub(&prod);
        let ek = QPoly::new(err.coeffs().iter().map(|c| c.coeff(k)).collect());
        if ek.is_zero() {
            continue;
        }
        for i in 0..r {
            let delta = ek.mul(&sinv[i]).rem(&h0[i]);
            let upd = BiPoly::new(delta.coeffs().iter().map(|c| QPoly::monomial(c.clone(), k)).collect());
            h[i] = h[i].add(&upd);
        }
    }
    // recombination
    let back = -mu0.clone();
    let mut remaining: Vec<usize> = (0..r).collect();
    let mut cur = f.clone();
    let mut out = vec![];
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        let lc_cur = shift_mu(&cur, &mu0).lc();
        for_each_subset(remaining.len(), s, &mut |sub: &[usize]| {
            if found.is_some() {
                return;
            }
            let mut g = BiPoly::constant(trunc(&lc_cur, n));
            for &k in sub {
                g = mul_trunc(&g, &h[remaining[k]], n);
            }
            let g = bipoly::normalize(&shift_mu(&g, &back));
            if g.deg() == 0 {
                return;
            }
            if let Some(q) = cur.div_exact_poly(&g) {
                found = Some((sub.to_vec(), g, q));
            }
        });
        match found {
            Some((sub, g, q)) => {
                out.push(g);
                cur = bipoly::normalize(&q);
                let drop: Vec<usize> = sub.iter().map(|&k| remaining[k]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => s += 1,
        }
    }
    if cur.deg() >= 1 {
        out.push(cur);
    }
    Ok(out)
}

/// Rational approximation helper used by callers checking factor signs.
pub fn abs_rat(r: &Rat) -> Rat {
    r.abs()
}
