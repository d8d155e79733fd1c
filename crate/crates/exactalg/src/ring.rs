//! Minimal commutative ring / field abstraction.

use crate::rat::Rat;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug {
    fn zero_r() -> Self;
    fn one_r() -> Self;
    fn is_zero_r(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// `self / o` when the division is exact in the ring.
    fn div_exact(&self, o: &Self) -> Option<Self>;

    fn is_one_r(&self) -> bool {
        *self == Self::one_r()
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one_r();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Self;
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    /// Rescales a nonzero polynomial by a unit to keep coefficients small
    /// during Euclidean remainder sequences (no-op by default).
    fn rescale_poly(_c: &mut [Self]) {}
}

impl Ring for Rat {
    fn zero_r() -> Self {
        Zero::zero()
    }
    fn one_r() -> Self {
        One::one()
    }
    fn is_zero_r(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        crate::rat::rat(n)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        self.recip()
    }
    fn rescale_poly(c: &mut [Self]) {
        if c.iter().all(Zero::is_zero) {
            return;
        }
        let l = crate::rat::denom_lcm(c.iter());
        let g = crate::rat::numer_gcd(c.iter().map(|a| a * Rat::from_integer(l.clone())).collect::<Vec<_>>().iter());
        let f = Rat::new(l, g);
        for a in c.iter_mut() {
            *a = &*a * &f;
        }
    }
}
