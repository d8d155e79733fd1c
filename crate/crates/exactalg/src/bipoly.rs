//! Polynomials in `T` whose coefficients are polynomials in `μ`.

use crate::error::{AlgError, Result};
use crate::mpoly::MPoly;
use crate::rat::{sign, Rat};
use crate::ratfunc::RatFunc;
use crate::resultant::resultant;
use crate::ring::{Field, Ring};
use crate::upoly::{QPoly, UPoly};
use num_traits::{One, Zero};

pub type BiPoly = UPoly<QPoly>;
pub type RfPoly = UPoly<RatFunc>;

pub const MU_T: [&str; 2] = ["mu", "T"];

/// Reads an `MPoly` in variables `mu` (index `mu`) and `T` (index `t`).
pub fn from_mpoly(p: &MPoly, mu: usize, t: usize) -> Option<BiPoly> {
    let cs = p.coeffs_in(t);
    let mut out = vec![];
    for c in cs {
        out.push(c.to_qpoly(mu)?);
    }
    Some(BiPoly::new(out))
}

pub fn to_mpoly(b: &BiPoly, mu: usize, t: usize) -> MPoly {
    let mut acc = MPoly::zero();
    for (k, c) in b.coeffs().iter().enumerate() {
        for (j, a) in c.coeffs().iter().enumerate() {
            let mut e = vec![0u32; mu.max(t) + 1];
            e[mu] = j as u32;
            e[t] = k as u32;
            acc.add_term(e, a.clone());
        }
    }
    acc
}

pub fn parse(s: &str) -> Result<BiPoly> {
    let m = MPoly::parse(s, &MU_T)?;
    from_mpoly(&m, 0, 1).ok_or_else(|| AlgError::Parse(format!("not a polynomial in mu, T: {s:?}")))
}

pub fn to_text(b: &BiPoly) -> String {
    to_mpoly(b, 0, 1).to_text(&MU_T)
}

pub fn deg_mu(b: &BiPoly) -> usize {
    b.coeffs().iter().map(|c| c.deg()).max().unwrap_or(0)
}

/// Minimum μ-valuation over the coefficients.
pub fn mu_order(b: &BiPoly) -> Result<usize> {
    b.coeffs()
        .iter()
        .filter_map(|c| c.order())
        .min()
        .ok_or(AlgError::ZeroPolynomial("mu_order"))
}

/// Coefficientwise `μ^o`-coefficient: `lim μ^{-o} b` when `o ≤ mu_order(b)`.
pub fn limit_at_order(b: &BiPoly, o: usize) -> QPoly {
    QPoly::new(b.coeffs().iter().map(|c| c.coeff(o)).collect())
}

/// `lim_{μ→0} μ^{-o(b)} b`.
pub fn normalized_limit(b: &BiPoly) -> Result<QPoly> {
    Ok(limit_at_order(b, mu_order(b)?))
}

pub fn specialize(b: &BiPoly, mu0: &Rat) -> QPoly {
    QPoly::new(b.coeffs().iter().map(|c| c.eval(mu0)).collect())
}

pub fn eval(b: &BiPoly, mu0: &Rat, t: &Rat) -> Rat {
    specialize(b, mu0).eval(t)
}

pub fn eval_float(b: &BiPoly, mu: &rug::Float, t: &rug::Float) -> rug::Float {
    let p = t.prec();
    let mut acc = rug::Float::with_val(p, 0);
    for c in b.coeffs().iter().rev() {
        acc *= t;
        acc += c.eval_float(mu);
    }
    acc
}

pub fn derivative_t(b: &BiPoly) -> BiPoly {
    b.derivative()
}

/// `Res_T(b, ∂b/∂T) / lc_T(b)`.
pub fn discriminant(b: &BiPoly) -> Result<QPoly> {
    if b.deg() < 1 {
        return Err(AlgError::ConstantInVariable);
    }
    let r = resultant(b, &b.derivative());
    r.div_exact_poly(&b.lc())
        .ok_or_else(|| AlgError::Factorization("leading coefficient does not divide the resultant".into()))
}

/// Monic gcd over ℚ of all coefficients.
pub fn mu_content(b: &BiPoly) -> QPoly {
    let mut g = QPoly::zero();
    for c in b.coeffs() {
        g = g.gcd(c);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Primitive integer form: μ-content removed, integer coefficients with gcd 1,
/// leading coefficient (in `T`, then in `μ`) positive.
pub fn normalize(b: &BiPoly) -> BiPoly {
    if b.is_zero() {
        return BiPoly::zero();
    }
    let g = mu_content(b);
    let b: BiPoly = if g.is_constant() {
        b.clone()
    } else {
        BiPoly::new(b.coeffs().iter().map(|c| c.div_rem(&g).0).collect())
    };
    integer_normalize(&b)
}

/// Scale by a rational so coefficients are coprime integers with positive leading coefficient.
pub fn integer_normalize(b: &BiPoly) -> BiPoly {
    if b.is_zero() {
        return BiPoly::zero();
    }
    let all: Vec<Rat> = b.coeffs().iter().flat_map(|c| c.coeffs().iter().cloned()).collect();
    let l = crate::rat::denom_lcm(all.iter());
    let scaled: Vec<Rat> = all.iter().map(|a| a * Rat::from_integer(l.clone())).collect();
    let gg = crate::rat::numer_gcd(scaled.iter());
    let mut f = Rat::new(l, gg);
    if sign(&b.lc().lc()) < 0 {
        f = -f;
    }
    BiPoly::new(b.coeffs().iter().map(|c| c.scale(&f)).collect())
}

pub fn to_rf(b: &BiPoly) -> RfPoly {
    RfPoly::new(b.coeffs().iter().map(|c| RatFunc::from_poly(c.clone())).collect())
}

/// Clears denominators of a ℚ(μ)[T] polynomial (result not normalized).
pub fn from_rf(p: &RfPoly) -> BiPoly {
    let mut l = QPoly::constant(Rat::one());
    for c in p.coeffs() {
        let g = l.gcd(c.den());
        l = l.mul(&c.den().div_rem(&g).0);
    }
    BiPoly::new(
        p.coeffs()
            .iter()
            .map(|c| c.num().mul(&l.div_rem(c.den()).0))
            .collect(),
    )
}

/// gcd over ℚ(μ), returned normalized (subresultant remainder sequence).
pub fn gcd_t(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let (mut a, mut b) = (normalize(a), normalize(b));
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    let one = QPoly::constant(Rat::one());
    let (mut g, mut h) = (one.clone(), one.clone());
    loop {
        if b.deg() == 0 {
            return BiPoly::constant(one);
        }
        let delta = (a.deg() - b.deg()) as u32;
        let r = a.prem(&b);
        if r.is_zero() {
            return normalize(&b);
        }
        let den = g.mul(&h.pow(delta));
        a = b;
        b = BiPoly::new(r.coeffs().iter().map(|c| c.div_rem(&den).0).collect());
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_rem(&h.pow(delta - 1)).0
        };
    }
}

/// Squarefree part over ℚ(μ), normalized.
pub fn squarefree_t(b: &BiPoly) -> BiPoly {
    if b.deg() == 0 {
        return normalize(b);
    }
    let g = gcd_t(b, &derivative_t(b));
    if g.deg() == 0 {
        return normalize(b);
    }
    div_t(b, &g).expect("gcd divides its argument")
}

/// Exact quotient over ℚ(μ), normalized; `None` if `d` does not divide `a`.
pub fn div_t(a: &BiPoly, d: &BiPoly) -> Option<BiPoly> {
    let (a, d) = (normalize(a), normalize(d));
    a.div_exact_poly(&d).map(|q| normalize(&q))
}

/// `a mod m` over ℚ(μ).
pub fn rem_rf(a: &RfPoly, m: &RfPoly) -> RfPoly {
    a.div_rem(m).1
}

/// True when `a` and `b` agree up to a nonzero rational factor.
pub fn associates(a: &BiPoly, b: &BiPoly) -> bool {
    integer_normalize(a) == integer_normalize(b)
}

/// Multiplies by `μ^k`.
pub fn mul_mu_pow(b: &BiPoly, k: usize) -> BiPoly {
    BiPoly::new(b.coeffs().iter().map(|c| c.shift(k)).collect())
}

pub fn is_zero_rf(p: &RfPoly) -> bool {
    p.coeffs().iter().all(|c| c.is_zero_r())
}

pub fn rf_inv(c: &RatFunc) -> RatFunc {
    c.inv()
}

pub fn zero_rat() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_frac};

    fn cubic() -> BiPoly {
        parse("2*T^3 + 2*T^2 - 1/2*mu*T^2 - mu*T - 2*T - 2").unwrap()
    }

    #[test]
    fn discriminant_of_example_cubic() {
        let d = discriminant(&cubic()).unwrap();
        // classical discriminant times (-1)^{d(d-1)/2} = -1 for a cubic
        let classical = QPoly::new(vec![rat(0), rat(128), rat(21), rat(6), rat_frac(1, 4)]);
        assert_eq!(d, classical.neg());
        assert_eq!(d.eval(&rat(1)), rat_frac(-621, 4));
    }

    #[test]
    fn quadratic_and_repeated() {
        let d = discriminant(&parse("T^2 - mu").unwrap()).unwrap();
        assert_eq!(d, QPoly::from_ints(&[0, -4]));
        let r = discriminant(&parse("T^2 - 2*T + 1").unwrap()).unwrap();
        assert!(r.is_zero());
        assert!(discriminant(&parse("mu + 1").unwrap()).is_err());
    }

    #[test]
    fn orders_and_limits() {
        assert_eq!(mu_order(&cubic()).unwrap(), 0);
        let p = parse("mu^2*T + mu^3").unwrap();
        assert_eq!(mu_order(&p).unwrap(), 2);
        assert_eq!(mu_order(&mul_mu_pow(&cubic(), 3)).unwrap(), 3);
        assert_eq!(normalized_limit(&cubic()).unwrap(), QPoly::from_ints(&[-2, -2, 2, 2]));
        assert!(mu_order(&BiPoly::zero()).is_err());
    }

    #[test]
    fn normalization_and_gcd() {
        let c = cubic();
        let scaled = BiPoly::new(c.coeffs().iter().map(|x| x.mul(&QPoly::from_ints(&[3, -6]))).collect());
        let n = normalize(&scaled);
        assert_eq!(n, normalize(&c));
        assert_eq!(n.lc(), QPoly::from_ints(&[4]));
        let f = parse("T - mu").unwrap();
        let g = parse("T^2 + mu").unwrap();
        let h = gcd_t(&f.mul(&g), &f.mul(&parse("T + 1").unwrap()));
        assert_eq!(h, f);
        assert_eq!(squarefree_t(&f.mul(&f).mul(&g)), normalize(&f.mul(&g)));
        assert_eq!(div_t(&f.mul(&g), &g).unwrap(), f);
    }

    #[test]
    fn text_round_trip() {
        let c = cubic();
        assert_eq!(parse(&to_text(&c)).unwrap(), c);
    }
}
