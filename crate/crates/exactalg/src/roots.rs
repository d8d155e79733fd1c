//! Real root isolation by Sturm sequences, Thom encodings and sign
//! determination at real algebraic numbers.

use crate::error::{AlgError, Result};
use crate::rat::{abs, rat, rat_frac, sign, Rat};
use crate::upoly::QPoly;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Sign sequence of the derivatives `p, p', …, p^(deg)` at a root (entry 0 is 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThomEncoding {
    pub signs: Vec<i8>,
}

impl ThomEncoding {
    pub fn as_string(&self) -> String {
        self.signs
            .iter()
            .map(|s| match s {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }
}

/// Orders two roots of the same polynomial from their Thom encodings.
///
/// Compares from the highest derivative down; at the first disagreement the
/// sign of the next higher derivative decides.
pub fn thom_cmp(a: &ThomEncoding, b: &ThomEncoding) -> Ordering {
    let n = a.signs.len().min(b.signs.len());
    for k in (0..n).rev() {
        if a.signs[k] != b.signs[k] {
            let up = if k + 1 < n { a.signs[k + 1] } else { 1 };
            let c = a.signs[k].cmp(&b.signs[k]);
            return if up > 0 { c } else { c.reverse() };
        }
    }
    Ordering::Equal
}

/// A real root of `poly`, isolated in `(lo, hi)` or given exactly when `lo == hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedRoot {
    /// Squarefree polynomial the interval is certified against.
    pub sqf: QPoly,
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity: usize,
    pub thom: ThomEncoding,
}

pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone()];
    if p.is_constant() {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn variations(seq: &[QPoly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in seq {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots of the squarefree `p` (with Sturm sequence `seq`) in `(a, b]`.
fn count_in(seq: &[QPoly], a: &Rat, b: &Rat) -> usize {
    variations(seq, a).saturating_sub(variations(seq, b))
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn count_roots(p: &QPoly, a: &Rat, b: &Rat) -> usize {
    let s = sturm_sequence(&p.squarefree());
    count_in(&s, a, b)
}

/// Strict bound: all roots lie in `(-B, B)`.
pub fn cauchy_bound(p: &QPoly) -> Rat {
    let lc = abs(&p.lc());
    let m = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| abs(c) / &lc)
        .max()
        .unwrap_or_else(Rat::zero);
    rat(1) + m
}

/// Isolating intervals for the distinct real roots of the squarefree `q`.
/// Endpoints of open intervals are never roots.
fn isolate_sqf(q: &QPoly) -> Vec<(Rat, Rat)> {
    if q.is_constant() {
        return vec![];
    }
    let seq = sturm_sequence(q);
    let b = cauchy_bound(q);
    let mut out = vec![];
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = count_in(&seq, &lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        if q.eval(&mid).is_zero() {
            let mut eps = (&hi - &lo) / rat(4);
            loop {
                let a = &mid - &eps;
                let b = &mid + &eps;
                if count_in(&seq, &a, &b) == 1 && !q.eval(&a).is_zero() && !q.eval(&b).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                    stack.push((lo, a));
                    stack.push((b, hi));
                    break;
                }
                eps /= rat(2);
            }
        } else {
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Isolates all real roots of `p` in ascending order, with multiplicities and Thom encodings.
pub fn isolate_real_roots(p: &QPoly) -> Vec<IsolatedRoot> {
    if p.is_zero() {
        return vec![];
    }
    let q = p.squarefree();
    let mut roots: Vec<IsolatedRoot> = isolate_sqf(&q)
        .into_iter()
        .map(|(lo, hi)| {
            let mut r = IsolatedRoot {
                sqf: q.clone(),
                lo,
                hi,
                multiplicity: 1,
                thom: ThomEncoding { signs: vec![] },
            };
            if r.lo != r.hi && r.sqf.eval(&r.hi).is_zero() {
                r.lo = r.hi.clone();
            }
            r
        })
        .collect();
    for r in roots.iter_mut() {
        r.multiplicity = root_multiplicity(p, r);
        r.thom = thom_encoding(p, r);
    }
    roots
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat(2)
    }
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = self.midpoint();
        let sm = sign(&self.sqf.eval(&mid));
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let slo = sign(&self.sqf.eval(&self.lo));
        if sm == slo {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
    /// Refine until the width is at most `w`.
    pub fn refine_to(&mut self, w: &Rat) {
        while !self.is_exact() && &self.width() > w {
            self.bisect();
        }
    }
    /// Refine until the interval width is below `2^-bits`.
    pub fn refine_bits(&mut self, bits: u32) {
        let w = Rat::new(One::one(), num_bigint::BigInt::one() << bits as usize);
        self.refine_to(&w);
    }
    /// Rational approximation at the midpoint.
    pub fn approx(&self) -> Rat {
        self.midpoint()
    }
    pub fn to_f64(&self) -> f64 {
        crate::rat::to_f64(&self.midpoint())
    }
    pub fn to_float(&self, prec: u32) -> rug::Float {
        let mut r = self.clone();
        r.refine_bits(prec + 8);
        crate::rat::to_float(&r.midpoint(), prec)
    }
    pub fn contains(&self, x: &Rat) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }
}

/// Exact sign of `q` at the root.
pub fn sign_at_root(q: &QPoly, root: &IsolatedRoot) -> i8 {
    if root.is_exact() {
        return sign(&q.eval(&root.lo));
    }
    if q.is_zero() {
        return 0;
    }
    let g = q.gcd(&root.sqf);
    if !g.is_constant() {
        // g is squarefree since root.sqf is; it vanishes at the root iff it changes sign on the interval
        let a = sign(&g.eval(&root.lo));
        let b = sign(&g.eval(&root.hi));
        if a != 0 && b != 0 && a != b {
            return 0;
        }
    }
    let mut r = root.clone();
    let seq = sturm_sequence(&q.squarefree());
    loop {
        if r.is_exact() {
            return sign(&q.eval(&r.lo));
        }
        if count_in(&seq, &r.lo, &r.hi) == 0 && !q.eval(&r.hi).is_zero() {
            return sign(&q.eval(&r.hi));
        }
        r.bisect();
    }
}

/// Multiplicity of the root as a root of `p`: the first derivative not vanishing there.
pub fn root_multiplicity(p: &QPoly, root: &IsolatedRoot) -> usize {
    let mut d = p.clone();
    let mut k = 0;
    while !d.is_zero() && sign_at_root(&d, root) == 0 {
        d = d.derivative();
        k += 1;
    }
    k
}

pub fn thom_encoding(p: &QPoly, root: &IsolatedRoot) -> ThomEncoding {
    let mut signs = vec![];
    let mut d = p.clone();
    for _ in 0..=p.deg() {
        signs.push(sign_at_root(&d, root));
        d = d.derivative();
    }
    ThomEncoding { signs }
}

/// The root of `p` realizing the encoding.
pub fn root_by_thom(p: &QPoly, enc: &ThomEncoding) -> Result<IsolatedRoot> {
    isolate_real_roots(p)
        .into_iter()
        .find(|r| &r.thom == enc)
        .ok_or_else(|| AlgError::ThomNotRealized(enc.signs.clone()))
}

/// A rational strictly inside `(a, b)` with small denominator.
pub fn simple_rational_between(a: &Rat, b: &Rat) -> Rat {
    let mut d = rat(1);
    loop {
        let c = (a * &d).floor() + rat(1);
        let x = &c / &d;
        if &x < b && &x > a {
            return x;
        }
        d *= rat(2);
    }
}

pub fn half() -> Rat {
    rat_frac(1, 2)
}
