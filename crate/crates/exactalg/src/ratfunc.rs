//! Rational functions in one variable over the rationals.

use crate::rat::Rat;
use crate::ring::{Field, Ring};
use crate::upoly::QPoly;

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: QPoly::constant(Rat::one()) };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let l = d.lc();
        n = n.scale(&l.inv());
        d = d.scale(&l.inv());
        RatFunc { num: n, den: d }
    }
    pub fn from_poly(p: QPoly) -> Self {
        RatFunc { num: p, den: QPoly::constant(Rat::one()) }
    }
    pub fn num(&self) -> &QPoly {
        &self.num
    }
    pub fn den(&self) -> &QPoly {
        &self.den
    }
    pub fn as_poly(&self) -> Option<&QPoly> {
        if self.den.is_constant() {
            Some(&self.num)
        } else {
            None
        }
    }
}

impl Ring for RatFunc {
    fn zero_r() -> Self {
        Self::from_poly(QPoly::zero())
    }
    fn one_r() -> Self {
        Self::from_poly(QPoly::constant(Rat::one()))
    }
    fn is_zero_r(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_poly(QPoly::constant(Rat::from_i64(n)))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero_r() {
            None
        } else {
            Some(self.mul(&o.inv()))
        }
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
}

use num_traits::One;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let mu = QPoly::from_ints(&[0, 1]);
        let a = RatFunc::new(mu.mul(&mu).scale(&crate::rat::rat(2)), mu.scale(&crate::rat::rat(4)));
        assert_eq!(a.num(), &QPoly::from_ints(&[0, 1]).scale(&crate::rat::rat_frac(1, 2)));
        assert!(a.den().is_constant());
        let b = a.inv();
        assert_eq!(b.mul(&a), RatFunc::one_r());
        assert_eq!(b.add(&b.neg()), RatFunc::zero_r());
    }
}
