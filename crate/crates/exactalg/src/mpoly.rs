//! Sparse multivariate polynomials over the rationals.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so `Vec` ordering
//! coincides with lexicographic monomial order (variable 0 most significant).

use crate::error::{AlgError, Result};
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::ring::{Field, Ring};
use crate::upoly::{QPoly, UPoly};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub type Exp = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash, PartialOrd, Ord)]
pub struct MPoly {
    terms: BTreeMap<Exp, Rat>,
}

fn trim(mut e: Exp) -> Exp {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_add(a: &[u32], b: &[u32]) -> Exp {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn exp_div(a: &[u32], b: &[u32]) -> Option<Exp> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (i, &x) in b.iter().enumerate() {
        out[i] = out[i].checked_sub(x)?;
    }
    Some(trim(out))
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![], c);
        p
    }
    pub fn int(n: i64) -> Self {
        Self::constant(crate::rat::rat(n))
    }
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }
    pub fn monomial(e: Exp, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }
    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let v = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![]).cloned().unwrap_or_else(Rat::zero)
    }
    /// Number of variables actually referenced (max index + 1).
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }
    pub fn leading(&self) -> Option<(&Exp, &Rat)> {
        self.terms.iter().next_back()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
    pub fn sub(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }
    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
    pub fn scale(&self, a: &Rat) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * a)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Exp, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = exp_add(ea, eb);
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::int(1);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
    /// Largest total degree in the variables other than `v`, over monomials
    /// where `v` actually occurs.
    pub fn tdeg_with(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .filter(|e| e.get(v).copied().unwrap_or(0) > 0)
            .map(|e| e.iter().enumerate().filter(|(i, _)| *i != v).map(|(_, d)| *d).sum())
            .max()
            .unwrap_or(0)
    }
    /// Total degree ignoring variable `v`.
    pub fn tdeg_without(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().enumerate().filter(|(i, _)| *i != v).map(|(_, d)| *d).sum())
            .max()
            .unwrap_or(0)
    }
    pub fn uses_var(&self, v: usize) -> bool {
        self.degree_in(v) > 0
    }
    pub fn derivative(&self, v: usize) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            let d = e.get(v).copied().unwrap_or(0);
            if d == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            p.add_term(e2, c * Rat::from_integer(d.into()));
        }
        p
    }
    /// Coefficients of `v^k`, `k = 0..=deg`, with `v` removed.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (e, c) in &self.terms {
            let k = e.get(v).copied().unwrap_or(0) as usize;
            let mut e2 = e.clone();
            if v < e2.len() {
                e2[v] = 0;
            }
            out[k].add_term(e2, c.clone());
        }
        out
    }
    pub fn to_upoly_in(&self, v: usize) -> UPoly<MPoly> {
        UPoly::new(self.coeffs_in(v))
    }
    pub fn from_upoly_in(p: &UPoly<MPoly>, v: usize) -> Self {
        let mut acc = Self::zero();
        let x = Self::var(v);
        for (k, c) in p.coeffs().iter().enumerate() {
            acc = acc.add(&c.mul(&x.pow(k as u32)));
        }
        acc
    }
    /// Univariate polynomial in `v` when no other variable occurs.
    pub fn to_qpoly(&self, v: usize) -> Option<QPoly> {
        let cs = self.coeffs_in(v);
        let mut out = vec![];
        for c in cs {
            if !c.is_constant() {
                return None;
            }
            out.push(c.constant_term());
        }
        Some(QPoly::new(out))
    }
    pub fn from_qpoly(p: &QPoly, v: usize) -> Self {
        let mut acc = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; v + 1];
            e[v] = k as u32;
            acc.add_term(e, c.clone());
        }
        acc
    }
    /// Substitute `v := q`.
    pub fn substitute(&self, v: usize, q: &MPoly) -> Self {
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(q).add(c);
        }
        acc
    }
    /// Simultaneous substitution of every variable `i` by `vals[i]`
    /// (variables beyond `vals.len()` are kept).
    pub fn substitute_all(&self, vals: &[MPoly]) -> Self {
        let mut acc = Self::zero();
        let mut cache: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &d) in e.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                if i < vals.len() {
                    let pw = cache.entry((i, d)).or_insert_with(|| vals[i].pow(d)).clone();
                    t = t.mul(&pw);
                } else {
                    let mut ee = vec![0; i + 1];
                    ee[i] = d;
                    t = t.mul(&MPoly::monomial(ee, Rat::one()));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
    /// Rename variable `i` to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            let n = map.iter().copied().max().map_or(0, |m| m + 1);
            let mut e2 = vec![0u32; n.max(1)];
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    let j = map[i];
                    if j >= e2.len() {
                        e2.resize(j + 1, 0);
                    }
                    e2[j] += d;
                }
            }
            p.add_term(e2, c.clone());
        }
        p
    }
    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    t *= num_traits::pow(x[i].clone(), d as usize);
                }
            }
            acc += t;
        }
        acc
    }
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = crate::rat::to_f64(c);
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    t *= x[i].powi(d as i32);
                }
            }
            acc += t;
        }
        acc
    }
    pub fn eval_float(&self, x: &[rug::Float], prec: u32) -> rug::Float {
        let mut acc = rug::Float::with_val(prec, 0);
        for (e, c) in &self.terms {
            let mut t = crate::rat::to_float(c, prec);
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    t *= rug::ops::Pow::pow(x[i].clone(), d);
                }
            }
            acc += t;
        }
        acc
    }
    /// Exact division (lex order), `None` if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        let (le, lc) = o.leading()?;
        let (le, lc) = (le.clone(), lc.clone());
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((e, c)) = r.leading() {
            let m = exp_div(e, &le)?;
            let t = MPoly::monomial(m, c / &lc);
            r = r.sub(&t.mul(o));
            q = q.add(&t);
        }
        Some(q)
    }
    /// Scale to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = crate::rat::denom_lcm(self.terms.values());
        let p = self.scale(&Rat::from_integer(l));
        let g = crate::rat::numer_gcd(p.terms.values());
        let mut p = p.scale(&Rat::from_integer(g).recip());
        if crate::rat::sign(p.leading().unwrap().1) < 0 {
            p = p.neg();
        }
        p
    }
    pub fn is_integer(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
    pub fn max_abs_coeff(&self) -> Rat {
        self.terms.values().map(|c| crate::rat::abs(c)).max().unwrap_or_else(Rat::zero)
    }

    /// Sparse text form, e.g. `3 * mu^2 * T + -1/2`.
    pub fn to_text(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in self.terms.iter().rev() {
            let mut s = fmt_rat(c);
            for (i, &d) in e.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let name = names.get(i).copied().map(String::from).unwrap_or_else(|| format!("v{i}"));
                if d == 1 {
                    s.push_str(&format!(" * {name}"));
                } else {
                    s.push_str(&format!(" * {name}^{d}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    /// Parses the sparse text form. Terms may be joined by `+` or `-`.
    pub fn parse(s: &str, names: &[&str]) -> Result<Self> {
        let mut p = Self::zero();
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(AlgError::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = vec![];
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in src.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev, None | Some('*') | Some('^') | Some('+') | Some('-')) {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' && matches!(prev, None | Some('+') | Some('-')) {
                neg = !neg;
            } else if ch == '+' && matches!(prev, None | Some('+') | Some('-')) {
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        terms.push((neg, cur));
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(AlgError::Parse(format!("empty term in {s:?}")));
            }
            let mut c = Rat::one();
            let mut e: Exp = vec![];
            for f in t.split('*') {
                if f.is_empty() {
                    return Err(AlgError::Parse(format!("empty factor in {s:?}")));
                }
                if f.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
                    c *= parse_rat(f)?;
                    continue;
                }
                let (name, pw) = match f.split_once('^') {
                    Some((n, k)) => (
                        n,
                        k.parse::<u32>().map_err(|_| AlgError::Parse(format!("bad exponent in {f:?}")))?,
                    ),
                    None => (f, 1),
                };
                let i = names
                    .iter()
                    .position(|x| *x == name)
                    .or_else(|| name.strip_prefix('v').and_then(|k| k.parse().ok()))
                    .ok_or_else(|| AlgError::Parse(format!("unknown variable {name:?}")))?;
                if e.len() <= i {
                    e.resize(i + 1, 0);
                }
                e[i] += pw;
            }
            if neg {
                c = -c;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Ring for MPoly {
    fn zero_r() -> Self {
        MPoly::zero()
    }
    fn one_r() -> Self {
        MPoly::int(1)
    }
    fn is_zero_r(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        MPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        MPoly::int(n)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        MPoly::div_exact(self, o)
    }
}

/// Rational-coefficient linear form helper: `Σ c_i x_i`.
pub fn linear_form(coeffs: &[(usize, Rat)]) -> MPoly {
    let mut p = MPoly::zero();
    for (i, c) in coeffs {
        p = p.add(&MPoly::var(*i).scale(c));
    }
    p
}

/// Inverse of a rational in field form, used by callers building Cramer solutions.
pub fn rat_inv(r: &Rat) -> Rat {
    r.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_frac};

    const N: &[&str] = &["mu", "T"];

    #[test]
    fn text_round_trip() {
        let p = MPoly::parse("3 * mu^2 * T - 1/2 + T^3 - mu", N).unwrap();
        assert_eq!(p.nterms(), 4);
        let s = p.to_text(N);
        assert_eq!(MPoly::parse(&s, N).unwrap(), p);
        assert_eq!(p.eval(&[rat(2), rat(1)]), rat_frac(21, 2));
        assert!(MPoly::parse("x + 1", N).is_err());
        assert_eq!(MPoly::parse("-T", N).unwrap(), MPoly::var(1).neg());
        assert_eq!(MPoly::parse("2 * T^2 * -1", N).unwrap(), MPoly::var(1).pow(2).scale(&rat(-2)));
    }

    #[test]
    fn division_and_substitution() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let a = x.add(&y.scale(&rat(2))).add(&MPoly::int(1));
        let b = x.mul(&y).sub(&MPoly::int(3));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&x.add(&MPoly::int(5))).is_none());
        let s = p.substitute(1, &x);
        assert_eq!(s.eval(&[rat(2)]), p.eval(&[rat(2), rat(2)]));
        assert_eq!(p.derivative(0).eval(&[rat(1), rat(1)]), rat(1 * 1 - 3 + 4));
    }

    #[test]
    fn degree_queries() {
        let p = MPoly::parse("mu * v2^3 * v3^3 + v2^4 + mu", N).unwrap();
        assert_eq!(p.degree_in(2), 4);
        assert_eq!(p.tdeg_with(0), 6);
        assert_eq!(p.tdeg_without(0), 6);
        assert_eq!(p.total_degree(), 7);
    }
}
