//! Dense univariate polynomials over a generic ring, coefficients low to high.

use crate::rat::Rat;
use crate::ring::{Field, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<R: Ring> {
    c: Vec<R>,
}

pub type QPoly = UPoly<Rat>;

impl<R: Ring> UPoly<R> {
    pub fn new(mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero_r()) {
            c.pop();
        }
        UPoly { c }
    }
    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }
    pub fn constant(a: R) -> Self {
        Self::new(vec![a])
    }
    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![R::zero_r(), R::one_r()])
    }
    pub fn monomial(a: R, d: usize) -> Self {
        let mut c = vec![R::zero_r(); d + 1];
        c[d] = a;
        Self::new(c)
    }
    pub fn coeffs(&self) -> &[R] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with the convention deg 0 = 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(R::zero_r)
    }
    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(R::zero_r)
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn scale(&self, a: &R) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(a)).collect())
    }
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![R::zero_r(); k];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|x| x.neg()).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![R::zero_r(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero_r() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(c)
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(R::one_r());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.mul(&R::from_i64(i as i64)))
                .collect(),
        )
    }
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_r();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }
    /// Composition `self(q)`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(a.clone()));
        }
        acc
    }
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.c.iter().map(f).collect())
    }
    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "prem by zero");
        let db = b.deg();
        let lb = b.lc();
        let mut r = self.clone();
        if r.is_zero() || r.deg() < db {
            return r;
        }
        let mut e = r.deg() - db + 1;
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let t = Self::monomial(r.lc(), k);
            r = r.scale(&lb).sub(&t.mul(b));
            e -= 1;
        }
        r.scale(&lb.pow(e as u32))
    }
    /// Exact division in the coefficient ring, `None` if not exact.
    pub fn div_exact_poly(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let db = b.deg();
        let lb = b.lc();
        let mut r = self.clone();
        let mut q = vec![R::zero_r(); self.deg() - db + 1];
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let a = r.lc().div_exact(&lb)?;
            let t = Self::monomial(a.clone(), k);
            q[k] = a;
            r = r.sub(&t.mul(b));
        }
        if r.is_zero() {
            Some(Self::new(q))
        } else {
            None
        }
    }
}

impl<F: Field> UPoly<F> {
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial");
        let db = b.deg();
        let ilb = b.lc().inv();
        let mut r = self.clone();
        if r.is_zero() || r.deg() < db {
            return (Self::zero(), r);
        }
        let mut q = vec![F::zero_r(); r.deg() - db + 1];
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let a = r.lc().mul(&ilb);
            r = r.sub(&b.scale(&a).shift(k));
            q[k] = a;
        }
        (Self::new(q), r)
    }
    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().inv())
    }
    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, b: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), b.clone());
        F::rescale_poly(&mut a.c);
        F::rescale_poly(&mut b.c);
        while !b.is_zero() {
            let mut r = a.rem(&b);
            F::rescale_poly(&mut r.c);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Returns `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn xgcd(&self, b: &Self) -> (Self, Self, Self) {
        let one = Self::constant(F::one_r());
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let il = r0.lc().inv();
        (r0.scale(&il), s0.scale(&il), t0.scale(&il))
    }
    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        if g.degree() == Some(0) {
            Some(s.rem(m))
        } else {
            None
        }
    }
    /// Squarefree part (monic).
    pub fn squarefree(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
    /// Squarefree decomposition: pairs (factor, multiplicity), factors monic.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = vec![];
        if self.is_constant() {
            return out;
        }
        // Yun's algorithm (characteristic zero).
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }
}

impl<R: Ring> Ring for UPoly<R> {
    fn zero_r() -> Self {
        UPoly::zero()
    }
    fn one_r() -> Self {
        UPoly::constant(R::one_r())
    }
    fn is_zero_r(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        UPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        UPoly::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        UPoly::constant(R::from_i64(n))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.div_exact_poly(o)
    }
}

impl QPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| crate::rat::rat(x)).collect())
    }
    /// Order of vanishing at 0 (`None` for zero).
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero_r())
    }
    /// Scale to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = crate::rat::denom_lcm(self.c.iter());
        let scaled: Vec<Rat> = self.c.iter().map(|a| a * Rat::from_integer(l.clone())).collect();
        let g = crate::rat::numer_gcd(scaled.iter());
        let mut p = Self::new(scaled.into_iter().map(|a| a / Rat::from_integer(g.clone())).collect());
        if crate::rat::sign(&p.lc()) < 0 {
            p = p.neg();
        }
        p
    }
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.c.iter().rev() {
            acc = acc * x + crate::rat::to_f64(a);
        }
        acc
    }
    pub fn eval_float(&self, x: &rug::Float) -> rug::Float {
        let p = x.prec();
        let mut acc = rug::Float::with_val(p, 0);
        for a in self.c.iter().rev() {
            acc *= x;
            acc += crate::rat::to_float(a, p);
        }
        acc
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero_r() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", crate::rat::fmt_rat(a))?,
                1 => write!(f, "{}*x", crate::rat::fmt_rat(a))?,
                _ => write!(f, "{}*x^{}", crate::rat::fmt_rat(a), i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn div_rem_reconstructs() {
        let a = QPoly::from_ints(&[1, -3, 0, 2, 5]);
        let b = QPoly::from_ints(&[2, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_and_xgcd() {
        let f = QPoly::from_ints(&[-1, 1]).mul(&QPoly::from_ints(&[2, 0, 1]));
        let g = QPoly::from_ints(&[-1, 1]).mul(&QPoly::from_ints(&[3, 1]));
        assert_eq!(f.gcd(&g), QPoly::from_ints(&[-1, 1]));
        let (h, s, t) = f.xgcd(&g);
        assert_eq!(s.mul(&f).add(&t.mul(&g)), h);
    }

    #[test]
    fn inverse_mod() {
        let m = QPoly::from_ints(&[-2, 0, 1]);
        let a = QPoly::from_ints(&[1, 1]);
        let i = a.inv_mod(&m).unwrap();
        assert_eq!(a.mul(&i).rem(&m), QPoly::from_ints(&[1]));
        assert!(QPoly::from_ints(&[0, 0, 1]).inv_mod(&QPoly::from_ints(&[0, 1])).is_none());
    }

    #[test]
    fn prem_identity() {
        let a = QPoly::from_ints(&[1, 2, 3, 4]);
        let b = QPoly::from_ints(&[1, 0, 2]);
        let r = a.prem(&b);
        let lb = rat(2);
        let scaled = a.scale(&Ring::pow(&lb, 2));
        assert_eq!(scaled.rem(&b), r);
    }

    #[test]
    fn yun() {
        let x1 = QPoly::from_ints(&[-1, 1]);
        let x2 = QPoly::from_ints(&[2, 1]);
        let f = x1.pow(3).mul(&x2).scale(&rat(5));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(x2.clone(), 1), (x1.clone(), 3)]);
        assert_eq!(f.squarefree(), x1.mul(&x2));
    }

    #[test]
    fn exact_division_over_nested_ring() {
        type B = UPoly<QPoly>;
        let mu = QPoly::from_ints(&[0, 1]);
        let a = B::new(vec![mu.clone(), QPoly::from_ints(&[1])]);
        let b = B::new(vec![QPoly::from_ints(&[-1]), mu.clone()]);
        let p = a.mul(&b);
        assert_eq!(p.div_exact_poly(&b).unwrap(), a);
        assert!(p.div_exact_poly(&B::new(vec![QPoly::from_ints(&[3]), mu])).is_none());
    }
}
