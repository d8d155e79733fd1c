//! Resultants, Sylvester matrices, subresultants and determinants over a ring
//! with exact division.

use crate::error::{AlgError, Result};
use crate::mpoly::MPoly;
use crate::ring::Ring;
use crate::upoly::UPoly;

fn exact<R: Ring>(a: &R, b: &R) -> R {
    a.div_exact(b).expect("subresultant division must be exact")
}

/// Resultant by the subresultant PRS (Cohen, Alg. 3.3.7, without the content step).
pub fn resultant<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> R {
    if a.is_zero() || b.is_zero() {
        return R::zero_r();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = R::one_r();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = s.neg();
        }
    }
    if b.deg() == 0 {
        return s.mul(&b.lc().pow(a.deg() as u32));
    }
    let mut g = R::one_r();
    let mut h = R::one_r();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = s.neg();
        }
        let r = a.prem(&b);
        a = b;
        if r.is_zero() {
            return R::zero_r();
        }
        let den = g.mul(&h.pow(delta as u32));
        b = UPoly::new(r.coeffs().iter().map(|c| exact(c, &den)).collect());
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            exact(&g.pow(delta as u32), &h.pow(delta as u32 - 1))
        };
        if b.deg() == 0 {
            break;
        }
    }
    let da = a.deg() as u32;
    let hh = exact(&b.lc().pow(da), &h.pow(da - 1));
    s.mul(&hh)
}

/// Sylvester matrix of `a` (degree m) and `b` (degree n), size (m+n)².
pub fn sylvester<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> Vec<Vec<R>> {
    let (m, n) = (a.deg(), b.deg());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for k in (0..n).rev() {
        rows.push(row_of(a, k, size));
    }
    for k in (0..m).rev() {
        rows.push(row_of(b, k, size));
    }
    rows
}

// coefficients of x^k p as a row indexed by descending degree size-1 .. 0
fn row_of<R: Ring>(p: &UPoly<R>, k: usize, size: usize) -> Vec<R> {
    (0..size)
        .map(|col| {
            let d = size - 1 - col;
            if d >= k {
                p.coeff(d - k)
            } else {
                R::zero_r()
            }
        })
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_bareiss<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    if n == 0 {
        return R::one_r();
    }
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut sign_neg = false;
    let mut prev = R::one_r();
    for k in 0..n - 1 {
        if a[k][k].is_zero_r() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero_r()) else {
                return R::zero_r();
            };
            a.swap(k, p);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = exact(&v, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_neg {
        d.neg()
    } else {
        d
    }
}

/// j-th subresultant polynomial (degree ≤ j) via determinants of Sylvester submatrices.
pub fn subresultant<R: Ring>(a: &UPoly<R>, b: &UPoly<R>, j: usize) -> UPoly<R> {
    let (m, n) = (a.deg(), b.deg());
    assert!(j < m.min(n), "subresultant index must be below both degrees");
    let size = m + n - j;
    let mut rows = vec![];
    for k in (0..n - j).rev() {
        rows.push(row_of(a, k, size));
    }
    for k in (0..m - j).rev() {
        rows.push(row_of(b, k, size));
    }
    // columns 0..nfix are degrees size-1 .. j+1; the last column is swapped per coefficient
    let nfix = m + n - 2 * j - 1;
    let mut coeffs = vec![];
    for i in 0..=j {
        let col = size - 1 - i;
        let mat: Vec<Vec<R>> = rows
            .iter()
            .map(|r| {
                let mut v: Vec<R> = r[..nfix].to_vec();
                v.push(r[col].clone());
                v
            })
            .collect();
        coeffs.push(det_bareiss(&mat));
    }
    UPoly::new(coeffs)
}

/// Resultant of two multivariate polynomials with respect to variable `v`.
pub fn resultant_mpoly(p: &MPoly, q: &MPoly, v: usize) -> Result<MPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgError::ZeroPolynomial("resultant"));
    }
    let a = p.to_upoly_in(v);
    let b = q.to_upoly_in(v);
    Ok(resultant(&a, &b))
}

/// Resultant with a cap on the degree of the result in every variable.
pub fn resultant_mpoly_capped(p: &MPoly, q: &MPoly, v: usize, cap: usize) -> Result<MPoly> {
    let r = resultant_mpoly(p, q, v)?;
    let deg = r.total_degree() as usize;
    if deg > cap {
        return Err(AlgError::EliminationBlowup { degree: deg, cap });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::upoly::QPoly;

    #[test]
    fn resultant_matches_sylvester_det() {
        let a = QPoly::from_ints(&[3, -1, 0, 2, 1]);
        let b = QPoly::from_ints(&[-2, 5, 1]);
        let r = resultant(&a, &b);
        assert_eq!(r, det_bareiss(&sylvester(&a, &b)));
        assert_eq!(resultant(&b, &a), r);
        let c = QPoly::from_ints(&[1, 1, 1, 1]);
        let d = QPoly::from_ints(&[0, 2, 0, 1]);
        assert_eq!(resultant(&c, &d), det_bareiss(&sylvester(&c, &d)));
        assert_eq!(resultant(&d, &c), -det_bareiss(&sylvester(&c, &d)));
    }

    #[test]
    fn t_squared_minus_mu() {
        let n = ["mu", "T"];
        let p = MPoly::parse("T^2 - mu", &n).unwrap();
        let q = MPoly::parse("T - 1", &n).unwrap();
        let r = resultant_mpoly(&p, &q, 1).unwrap();
        assert_eq!(r, MPoly::parse("1 - mu", &n).unwrap());
        let pq = p.mul(&q);
        assert!(resultant_mpoly(&pq, &q, 1).unwrap().is_zero());
    }

    #[test]
    fn first_subresultant_gives_common_root() {
        // (x-2)(x+1) and (x-2)(x-5): S1 is proportional to x-2
        let a = QPoly::from_ints(&[-2, -1, 1]);
        let b = QPoly::from_ints(&[10, -7, 1]);
        let s1 = subresultant(&a, &b, 1);
        assert_eq!(s1.deg(), 1);
        assert_eq!(s1.coeff(0) / s1.coeff(1), rat(-2));
    }

    #[test]
    fn bareiss_small() {
        let m = vec![
            vec![rat(0), rat(2), rat(1)],
            vec![rat(1), rat(1), rat(1)],
            vec![rat(3), rat(0), rat(4)],
        ];
        // 0*(4-0) - 2*(4-3) + 1*(0-3) = -5
        assert_eq!(det_bareiss(&m), rat(-5));
    }
}
