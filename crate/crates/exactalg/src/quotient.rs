//! Residue-class field F[T]/(m) for an irreducible modulus m.

use crate::ring::{Field, Ring};
use crate::upoly::UPoly;
use std::sync::Arc;

/// An element of F[T]/(m). Elements built without a modulus (constants from
/// `from_i64`, `zero_r`, `one_r`) adopt the modulus of the first operand that has one.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    v: UPoly<F>,
    m: Option<Arc<UPoly<F>>>,
}

impl<F: Field> Quotient<F> {
    pub fn new(v: &UPoly<F>, m: &Arc<UPoly<F>>) -> Self {
        Quotient { v: v.rem(m), m: Some(m.clone()) }
    }
    pub fn constant(c: F) -> Self {
        Quotient { v: UPoly::constant(c), m: None }
    }
    /// The class of T.
    pub fn generator(m: &Arc<UPoly<F>>) -> Self {
        Self::new(&UPoly::x(), m)
    }
    /// Reduced representative of degree < deg m.
    pub fn value(&self) -> &UPoly<F> {
        &self.v
    }
    pub fn modulus(&self) -> Option<&Arc<UPoly<F>>> {
        self.m.as_ref()
    }
    fn join(&self, o: &Self) -> Option<Arc<UPoly<F>>> {
        self.m.clone().or_else(|| o.m.clone())
    }
    fn wrap(v: UPoly<F>, m: Option<Arc<UPoly<F>>>) -> Self {
        match &m {
            Some(mm) if v.deg() >= mm.deg() => Quotient { v: v.rem(mm), m },
            _ => Quotient { v, m },
        }
    }
}

impl<F: Field> PartialEq for Quotient<F> {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl<F: Field> Ring for Quotient<F> {
    fn zero_r() -> Self {
        Quotient { v: UPoly::zero(), m: None }
    }
    fn one_r() -> Self {
        Quotient { v: UPoly::constant(F::one_r()), m: None }
    }
    fn is_zero_r(&self) -> bool {
        self.v.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self::wrap(self.v.add(&o.v), self.join(o))
    }
    fn sub(&self, o: &Self) -> Self {
        Self::wrap(self.v.sub(&o.v), self.join(o))
    }
    fn mul(&self, o: &Self) -> Self {
        Self::wrap(self.v.mul(&o.v), self.join(o))
    }
    fn neg(&self) -> Self {
        Quotient { v: self.v.neg(), m: self.m.clone() }
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero_r() {
            None
        } else {
            Some(self.mul(&o.inv()))
        }
    }
}

impl<F: Field> Field for Quotient<F> {
    /// Panics on zero; a non-unit nonzero element means the modulus was reducible.
    fn inv(&self) -> Self {
        assert!(!self.v.is_zero(), "inverse of zero");
        match &self.m {
            None => Quotient { v: UPoly::constant(self.v.lc().inv()), m: None },
            Some(m) => {
                let (g, s, _) = self.v.xgcd(m);
                assert!(g.deg() == 0, "modulus is reducible");
                Self::wrap(s.scale(&g.lc().inv()), Some(m.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::upoly::QPoly;

    #[test]
    fn sqrt_two_field() {
        let m = Arc::new(QPoly::from_ints(&[-2, 0, 1]));
        let a = Quotient::generator(&m);
        assert_eq!(a.mul(&a), Quotient::from_i64(2));
        let b = a.add(&Quotient::from_i64(1));
        let bi = b.inv();
        assert!(b.mul(&bi).is_one_r());
        let p: UPoly<Quotient<crate::rat::Rat>> = UPoly::new(vec![Quotient::from_i64(-2), Quotient::zero_r(), Quotient::one_r()]);
        let q = UPoly::new(vec![a.neg(), Quotient::one_r()]);
        let g = p.gcd(&q);
        assert_eq!(g.deg(), 1);
        assert_eq!(g.coeff(0).mul(&g.lc().inv()), a.neg());
        let _ = rat(0);
    }
}
