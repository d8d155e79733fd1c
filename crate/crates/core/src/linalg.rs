//! Dense linear algebra: exact over ℚ and numeric over `rug::Float`.

use exactalg::rat::{sign, Rat};
use num_traits::{One, Zero};
use rug::Float;

pub type RMat = Vec<Vec<Rat>>;
pub type FMat = Vec<Vec<Float>>;

/// Reduced row echelon form and pivot columns.
pub fn rref(a: &RMat) -> (RMat, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RMat) -> usize {
    rref(a).1.len()
}

/// Affine parametrization of `{x : a x = b}` as `x = x0 + Σ z_j basis[j]`.
/// Free coordinates carry `x0 = 0` and unit basis vectors.
#[derive(Clone, Debug)]
pub struct AffineParam {
    pub x0: Vec<Rat>,
    pub free: Vec<usize>,
    pub basis: Vec<Vec<Rat>>,
}

pub fn affine_solve(a: &RMat, b: &[Rat]) -> Option<AffineParam> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: RMat = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let (m, piv) = rref(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    let mut x0 = vec![Rat::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x0[c] = m[r][cols].clone();
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect();
    Some(AffineParam { x0, free, basis })
}

/// Exact positive-definiteness test by symmetric Gaussian elimination.
pub fn is_pd_exact(a: &RMat) -> bool {
    let n = a.len();
    let mut m = a.clone();
    for k in 0..n {
        if sign(&m[k][k]) <= 0 {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    true
}

pub fn to_fmat(a: &RMat, prec: u32) -> FMat {
    a.iter().map(|r| r.iter().map(|x| exactalg::rat::to_float(x, prec)).collect()).collect()
}

pub fn fzero(prec: u32) -> Float {
    Float::with_val(prec, 0)
}

pub fn fmat_zero(n: usize, prec: u32) -> FMat {
    vec![vec![fzero(prec); n]; n]
}

pub fn matmul(a: &FMat, b: &FMat) -> FMat {
    let prec = a[0][0].prec();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![fzero(prec); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += Float::with_val(prec, &a[i][l] * &b[l][j]);
            }
        }
    }
    c
}

pub fn add(a: &FMat, b: &FMat) -> FMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| Float::with_val(x.prec(), x + y)).collect())
        .collect()
}

pub fn sub(a: &FMat, b: &FMat) -> FMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| Float::with_val(x.prec(), x - y)).collect())
        .collect()
}

pub fn scale(a: &FMat, s: &Float) -> FMat {
    a.iter().map(|r| r.iter().map(|x| Float::with_val(x.prec(), x * s)).collect()).collect()
}

pub fn frobenius(a: &FMat) -> Float {
    let prec = a[0][0].prec();
    let mut s = fzero(prec);
    for r in a {
        for x in r {
            s += Float::with_val(prec, x.square_ref());
        }
    }
    s.sqrt()
}

pub fn inner(a: &FMat, b: &FMat) -> Float {
    let prec = a[0][0].prec();
    let mut s = fzero(prec);
    for (r, q) in a.iter().zip(b) {
        for (x, y) in r.iter().zip(q) {
            s += Float::with_val(prec, x * y);
        }
    }
    s
}

/// Cholesky test for positive definiteness.
pub fn is_pd(a: &FMat) -> bool {
    let n = a.len();
    let prec = a[0][0].prec();
    let mut l = fmat_zero(n, prec);
    for j in 0..n {
        let mut d = a[j][j].clone();
        for k in 0..j {
            d -= Float::with_val(prec, l[j][k].square_ref());
        }
        if d <= 0 || d.is_nan() {
            return false;
        }
        let dj = d.sqrt();
        for i in j + 1..n {
            let mut s = a[i][j].clone();
            for k in 0..j {
                s -= Float::with_val(prec, &l[i][k] * &l[j][k]);
            }
            l[i][j] = s / &dj;
        }
        l[j][j] = dj;
    }
    true
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted descending.
pub fn sym_eigenvalues(a: &FMat) -> Vec<Float> {
    let n = a.len();
    let prec = a[0][0].prec();
    let mut m = a.clone();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    for _sweep in 0..100 {
        let mut off = fzero(prec);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += Float::with_val(prec, m[i][j].square_ref());
                }
            }
        }
        let mut diag = fzero(prec);
        for i in 0..n {
            diag += Float::with_val(prec, m[i][i].square_ref());
        }
        if off <= Float::with_val(prec, &eps * &eps) * Float::with_val(prec, &diag + 1u32) * 1e-4 || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].is_zero() {
                    continue;
                }
                let theta = Float::with_val(prec, &m[q][q] - &m[p][p]) / Float::with_val(prec, &m[p][q] * 2u32);
                let sgn = if theta >= 0 { 1 } else { -1 };
                let denom = Float::with_val(prec, theta.abs_ref()) + (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let t = Float::with_val(prec, sgn) / denom;
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                for k in 0..n {
                    let mkp = m[k][p].clone();
                    let mkq = m[k][q].clone();
                    m[k][p] = Float::with_val(prec, &c * &mkp) - Float::with_val(prec, &s * &mkq);
                    m[k][q] = Float::with_val(prec, &s * &mkp) + Float::with_val(prec, &c * &mkq);
                }
                for k in 0..n {
                    let mpk = m[p][k].clone();
                    let mqk = m[q][k].clone();
                    m[p][k] = Float::with_val(prec, &c * &mpk) - Float::with_val(prec, &s * &mqk);
                    m[q][k] = Float::with_val(prec, &s * &mpk) + Float::with_val(prec, &c * &mqk);
                }
            }
        }
    }
    let mut ev: Vec<Float> = (0..n).map(|i| m[i][i].clone()).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &FMat, b: &[Float]) -> Option<Vec<Float>> {
    let n = a.len();
    let prec = b[0].prec();
    let mut m: Vec<Vec<Float>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| {
            Float::with_val(prec, m[i][k].abs_ref())
                .partial_cmp(&Float::with_val(prec, m[j][k].abs_ref()))
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[p][k].is_zero() {
            return None;
        }
        m.swap(k, p);
        for i in k + 1..n {
            let f = Float::with_val(prec, &m[i][k] / &m[k][k]);
            if f.is_zero() {
                continue;
            }
            for j in k..=n {
                let t = Float::with_val(prec, &f * &m[k][j]);
                m[i][j] -= t;
            }
        }
    }
    let mut x = vec![fzero(prec); n];
    for k in (0..n).rev() {
        let mut s = m[k][n].clone();
        for j in k + 1..n {
            s -= Float::with_val(prec, &m[k][j] * &x[j]);
        }
        x[k] = s / &m[k][k];
    }
    Some(x)
}

/// Smallest singular value of a square matrix via eigenvalues of `aᵀa`.
pub fn min_singular_value(a: &FMat) -> Float {
    let at: FMat = (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    let ata = matmul(&at, a);
    let ev = sym_eigenvalues(&ata);
    let last = ev.last().cloned().unwrap();
    if last < 0 {
        fzero(last.prec())
    } else {
        last.sqrt()
    }
}
