//! Parametrized univariate representations of the central-path system by
//! linear reduction and iterated resultants, and branch classification.

use crate::error::{CoreError, Result};
use crate::instance::{svec_pairs, SdoInstance};
use crate::linalg;
use crate::tracer;
use exactalg::bipoly::{self, BiPoly, RfPoly};
use exactalg::quotient::Quotient;
use exactalg::rat::{fmt_rat, parse_rat, rat, sign, to_float, Rat};
use exactalg::ratfunc::RatFunc;
use exactalg::resultant::{det_bareiss, resultant, resultant_mpoly_capped};
use exactalg::roots::{isolate_real_roots, root_by_thom, sign_at_root, IsolatedRoot};
use exactalg::{Field, MPoly, QPoly, Ring, ThomEncoding, UPoly};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::sync::Arc;

pub const ELIM_CAP: usize = 64;
pub const MAX_CORE: usize = 4;
pub const SEP_SEED: u64 = 0x5eed_0001;
pub const RANDOM_FORMS: usize = 32;
pub const ZARISKI_SEED: u64 = 0x5eed_0002;

type K = Quotient<RatFunc>;

/// T = Σ_k w_k x_k over the svec x-coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatingForm {
    pub kind: String,
    pub weights: Vec<i64>,
    pub seed: Option<u64>,
    pub attempt: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Urs {
    pub n: usize,
    pub m: usize,
    pub f: BiPoly,
    /// g_0 followed by one numerator per coordinate of (x; y; s).
    pub g: Vec<BiPoly>,
    pub sep: SeparatingForm,
}

impl Urs {
    pub fn t(&self) -> usize {
        self.n * (self.n + 1) / 2
    }
    pub fn nbar(&self) -> usize {
        self.g.len() - 1
    }
    /// Index into `g` of the x-coordinate with svec index k.
    pub fn gx(&self, k: usize) -> usize {
        1 + k
    }
    pub fn gy(&self, i: usize) -> usize {
        1 + self.t() + i
    }
    pub fn gs(&self, k: usize) -> usize {
        1 + self.t() + self.m + k
    }
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "m": self.m,
            "f": bipoly::to_text(&self.f),
            "g": self.g.iter().map(bipoly::to_text).collect::<Vec<_>>(),
            "sep": self.sep,
        })
    }
    pub fn from_json(v: &Value) -> Result<Self> {
        let err = |k: &str| CoreError::Parse(format!("urs: missing or invalid '{k}'"));
        let n = v["n"].as_u64().ok_or_else(|| err("n"))? as usize;
        let m = v["m"].as_u64().ok_or_else(|| err("m"))? as usize;
        let f = bipoly::parse(v["f"].as_str().ok_or_else(|| err("f"))?)?;
        let g = v["g"]
            .as_array()
            .ok_or_else(|| err("g"))?
            .iter()
            .map(|x| x.as_str().ok_or_else(|| err("g")).and_then(|s| Ok(bipoly::parse(s)?)))
            .collect::<Result<Vec<_>>>()?;
        let sv = &v["sep"];
        let sep = SeparatingForm {
            kind: sv["kind"].as_str().ok_or_else(|| err("sep.kind"))?.to_string(),
            weights: sv["weights"]
                .as_array()
                .ok_or_else(|| err("sep.weights"))?
                .iter()
                .map(|w| w.as_i64().ok_or_else(|| err("sep.weights")))
                .collect::<Result<_>>()?,
            seed: sv["seed"].as_u64(),
            attempt: sv["attempt"].as_u64().unwrap_or(0) as usize,
        };
        Ok(Urs { n, m, f, g, sep })
    }
    /// Real roots of f(μ*, ·) as Thom encodings, ascending.
    pub fn branches(&self, mu: &Rat) -> Vec<ThomEncoding> {
        isolate_real_roots(&bipoly::specialize(&self.f, mu)).into_iter().map(|r| r.thom).collect()
    }
}

/// Evaluates a polynomial with rational coefficients in any ring via `lift`.
pub(crate) fn eval_in<R: Ring>(p: &MPoly, vals: &[Option<R>], mu: impl Fn(&Rat, u32) -> R) -> R {
    let mut acc = R::zero_r();
    for (e, c) in p.terms() {
        let mut term = mu(c, e.first().copied().unwrap_or(0));
        for (i, &d) in e.iter().enumerate().skip(1) {
            if d > 0 {
                let v = vals[i].as_ref().expect("unassigned variable");
                term = term.mul(&v.pow(d));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn eval_k(p: &MPoly, vals: &[Option<K>]) -> K {
    eval_in(p, vals, |c, d| K::constant(RatFunc::from_poly(QPoly::monomial(c.clone(), d as usize))))
}

/// Linear reduction of the central-path system. Variables: μ = 0, z_j = 1 + j, y_i = 1 + p + i.
#[derive(Clone)]
struct Reduced {
    n: usize,
    m: usize,
    p: usize,
    x0: Vec<Rat>,
    free: Vec<usize>,
    basis: Vec<Vec<Rat>>,
    xz: Vec<MPoly>,
    s_entries: Vec<MPoly>,
    rows: Vec<MPoly>,
    y_num: Vec<MPoly>,
    d: MPoly,
    core: Vec<MPoly>,
    /// x-coordinates that must not vanish identically on a returned branch.
    nonzero: Vec<usize>,
}

fn strip_mu(p: &MPoly) -> MPoly {
    let k = p.terms().map(|(e, _)| e.first().copied().unwrap_or(0)).min().unwrap_or(0);
    if k == 0 {
        return p.primitive_integer();
    }
    let mut q = MPoly::zero();
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[0] -= k;
        q.add_term(e2, c.clone());
    }
    q.primitive_integer()
}

/// Divides out `d` as often as it divides exactly (saturation by the Cramer denominator).
fn saturate(p: &MPoly, d: &MPoly) -> MPoly {
    let mut p = p.clone();
    if d.is_constant() {
        return p;
    }
    while let Some(q) = p.div_exact(d) {
        p = q;
    }
    p
}

fn combinations(t: usize, m: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.clone());
        if out.len() >= cap {
            return out;
        }
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + t - m {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        if idx[i] == i + t - m {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Free coordinates of the central point at μ = 1, when a start is available.
fn central_hint(inst: &SdoInstance, free: &[usize]) -> Option<Vec<f64>> {
    let st = inst.start.as_ref()?;
    let p = tracer::newton_correct(inst, &st.x, &st.y, &Rat::one(), &tracer::default_tol(128), 128).ok()?;
    let pairs = svec_pairs(inst.n);
    Some(free.iter().map(|&k| p.x[pairs[k].0][pairs[k].1].to_f64()).collect())
}

fn reduce(inst: &SdoInstance) -> Result<Reduced> {
    let (n, m, t) = (inst.n, inst.m, inst.t());
    let param = linalg::affine_solve(&inst.primal_matrix(), &inst.b_rat())
        .ok_or_else(|| CoreError::Validation("primal constraints are inconsistent".into()))?;
    let p = param.free.len();
    if p > MAX_CORE {
        return Err(CoreError::TooLarge(p));
    }
    let yv = |i: usize| 1 + p + i;
    let xz: Vec<MPoly> = (0..t)
        .map(|k| {
            let mut e = MPoly::constant(param.x0[k].clone());
            for (j, b) in param.basis.iter().enumerate() {
                e = e.add(&MPoly::var(1 + j).scale(&b[k]));
            }
            e
        })
        .collect();
    let s_entries: Vec<MPoly> = svec_pairs(n)
        .into_iter()
        .map(|(a, b)| {
            let mut e = MPoly::constant(inst.c.get(a, b));
            for i in 0..m {
                e = e.sub(&MPoly::var(yv(i)).scale(&inst.a[i].get(a, b)));
            }
            e
        })
        .collect();
    let pairs = svec_pairs(n);
    let at = |v: &[MPoly], a: usize, b: usize| v[crate::instance::svec_index(n, a, b)].clone();
    let rows: Vec<MPoly> = pairs
        .iter()
        .map(|&(a, b)| {
            let mut r = MPoly::zero();
            for k in 0..n {
                r = r.add(&at(&xz, a, k).mul(&at(&s_entries, k, b)));
                r = r.add(&at(&s_entries, a, k).mul(&at(&xz, k, b)));
            }
            if a == b {
                r = r.sub(&MPoly::var(0).scale(&rat(2)));
            }
            r
        })
        .collect();
    let mut zero_y: Vec<MPoly> = (0..=p).map(MPoly::var).collect();
    zero_y.extend((0..m).map(|_| MPoly::zero()));
    let r0: Vec<MPoly> = rows.iter().map(|r| r.substitute_all(&zero_y)).collect();
    let coef: Vec<Vec<MPoly>> = rows.iter().map(|r| (0..m).map(|i| r.derivative(yv(i)).neg()).collect()).collect();

    let hint = central_hint(inst, &param.free);
    let mut best: Option<((u8, u32, usize), Vec<usize>, MPoly)> = None;
    for sub in combinations(t, m, 5000) {
        let mat: Vec<Vec<MPoly>> = sub.iter().map(|&r| coef[r].clone()).collect();
        let d = det_bareiss(&mat);
        if d.is_zero() {
            continue;
        }
        let ok = match &hint {
            Some(z) => {
                let mut pt = vec![1.0];
                pt.extend(z.iter().copied());
                pt.extend(std::iter::repeat(0.0).take(m));
                let scale = d.max_abs_coeff().to_f64().unwrap_or(1.0).max(1.0);
                d.eval_f64(&pt).abs() > 1e-9 * scale
            }
            None => true,
        };
        let key = (u8::from(!ok), d.total_degree(), d.nterms());
        if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
            best = Some((key, sub, d));
        }
    }
    let (_, sub, d) = best.ok_or_else(|| CoreError::Validation("y is not determined by the centrality rows".into()))?;
    let y_num: Vec<MPoly> = (0..m)
        .map(|i| {
            let mat: Vec<Vec<MPoly>> = sub
                .iter()
                .map(|&r| (0..m).map(|c| if c == i { r0[r].clone() } else { coef[r][c].clone() }).collect())
                .collect();
            det_bareiss(&mat)
        })
        .collect();
    let core: Vec<MPoly> = (0..t)
        .filter(|r| !sub.contains(r))
        .map(|r| {
            let mut e = d.mul(&r0[r]);
            for i in 0..m {
                e = e.sub(&coef[r][i].mul(&y_num[i]));
            }
            e
        })
        .filter(|e| !e.is_zero())
        .map(|e| strip_mu(&saturate(&strip_mu(&e), &d)))
        .filter(|e| !e.is_constant())
        .collect();
    if core.len() > MAX_CORE {
        return Err(CoreError::TooLarge(core.len()));
    }
    Ok(Reduced { n, m, p, x0: param.x0, free: param.free, basis: param.basis, xz, s_entries, rows, y_num, d, core, nonzero: vec![] })
}

/// Nonzero for generic μ when no unknown occurs.
fn mu_only(p: &MPoly) -> bool {
    p.terms().all(|(e, _)| e.iter().skip(1).all(|&k| k == 0))
}

fn var_content(p: &MPoly, v: usize) -> u32 {
    p.terms().map(|(e, _)| e.get(v).copied().unwrap_or(0)).min().unwrap_or(0)
}

fn divide_var(p: &MPoly, v: usize) -> MPoly {
    let k = var_content(p, v);
    if k == 0 {
        return p.clone();
    }
    let mut q = MPoly::zero();
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[v] -= k;
        q.add_term(e2, c.clone());
    }
    q
}

/// Core polynomials after a substitution: nonzero, μ-stripped, saturated by `d`.
/// `None` when some polynomial became a nonzero constant.
fn clean_core(polys: impl Iterator<Item = MPoly>, d: &MPoly) -> Option<Vec<MPoly>> {
    let mut out: Vec<MPoly> = vec![];
    for e in polys.filter(|e| !e.is_zero()) {
        let q = strip_mu(&saturate(&strip_mu(&e), d));
        if mu_only(&q) {
            return None;
        }
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Some(out)
}

/// The case z_j = 0, with the remaining unknowns renumbered.
fn restrict(red: &Reduced, j: usize) -> Option<Reduced> {
    let (p, m) = (red.p, red.m);
    if red.nonzero.contains(&red.free[j]) {
        return None;
    }
    let mut vals = vec![MPoly::var(0)];
    for k in 0..p {
        vals.push(match k.cmp(&j) {
            std::cmp::Ordering::Less => MPoly::var(1 + k),
            std::cmp::Ordering::Equal => MPoly::zero(),
            std::cmp::Ordering::Greater => MPoly::var(k),
        });
    }
    vals.extend((0..m).map(|i| MPoly::var(p + i)));
    let sub = |q: &MPoly| q.substitute_all(&vals);
    let d = sub(&red.d);
    if d.is_zero() {
        return None;
    }
    let core = clean_core(red.core.iter().map(sub), &d)?;
    let mut free = red.free.clone();
    free.remove(j);
    let mut basis = red.basis.clone();
    basis.remove(j);
    Some(Reduced {
        p: p - 1,
        free,
        basis,
        xz: red.xz.iter().map(sub).collect(),
        s_entries: red.s_entries.iter().map(sub).collect(),
        rows: red.rows.iter().map(sub).collect(),
        y_num: red.y_num.iter().map(sub).collect(),
        d,
        core,
        ..red.clone()
    })
}

/// Splits on unknowns that factor out of a core polynomial: z_j = 0, or z_j ≠ 0 with z_j divided out.
fn split_cases(red: &Reduced) -> Vec<Reduced> {
    for q in &red.core {
        for j in 0..red.p {
            if var_content(q, 1 + j) == 0 {
                continue;
            }
            let mut out = vec![];
            if let Some(r) = restrict(red, j) {
                out.extend(split_cases(&r));
            }
            if let Some(core) = clean_core(red.core.iter().map(|c| divide_var(c, 1 + j)), &red.d) {
                let mut b = red.clone();
                b.core = core;
                b.nonzero.push(red.free[j]);
                out.extend(split_cases(&b));
            }
            return out;
        }
    }
    vec![red.clone()]
}

fn candidate_forms(red: &Reduced) -> Vec<SeparatingForm> {
    let t = red.xz.len();
    let mut out = vec![];
    for k in 0..t {
        if !red.xz[k].is_constant() {
            let mut w = vec![0; t];
            w[k] = 1;
            out.push(SeparatingForm { kind: "coordinate".into(), weights: w, seed: None, attempt: out.len() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEP_SEED);
    let free = &red.free;
    for a in 0..RANDOM_FORMS {
        let mut w = vec![0i64; t];
        loop {
            for &k in free {
                w[k] = rng.gen_range(-9..=9);
            }
            if w.iter().any(|&x| x != 0) || free.is_empty() {
                break;
            }
        }
        out.push(SeparatingForm { kind: "random".into(), weights: w, seed: Some(SEP_SEED), attempt: a });
    }
    out
}

fn dedupe(v: Vec<MPoly>) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = vec![];
    for p in v {
        if !p.is_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn sep_err(msg: &str) -> CoreError {
    CoreError::SeparationFailure(msg.to_string())
}

/// Joint clearing of denominators and common content of RUR numerators.
fn normalize_joint(ps: &[RfPoly]) -> Vec<BiPoly> {
    let mut l = QPoly::constant(Rat::one());
    for p in ps {
        for c in p.coeffs() {
            let g = l.gcd(c.den());
            l = l.mul(&c.den().div_rem(&g).0);
        }
    }
    let mut bs: Vec<BiPoly> = ps
        .iter()
        .map(|p| BiPoly::new(p.coeffs().iter().map(|c| c.num().mul(&l.div_rem(c.den()).0)).collect()))
        .collect();
    let mut g = QPoly::zero();
    for b in &bs {
        for c in b.coeffs() {
            g = g.gcd(c);
        }
    }
    if !g.is_constant() {
        bs = bs.iter().map(|b| BiPoly::new(b.coeffs().iter().map(|c| c.div_rem(&g).0).collect())).collect();
    }
    let all: Vec<Rat> = bs.iter().flat_map(|b| b.coeffs().iter().flat_map(|c| c.coeffs().iter().cloned())).collect();
    let den = exactalg::rat::denom_lcm(all.iter());
    let scaled: Vec<Rat> = all.iter().map(|a| a * Rat::from_integer(den.clone())).collect();
    let num = exactalg::rat::numer_gcd(scaled.iter());
    let mut f = Rat::new(den, num);
    if let Some(b0) = bs.first() {
        if !b0.is_zero() && sign(&b0.lc().lc()) < 0 {
            f = -f;
        }
    }
    bs.iter().map(|b| BiPoly::new(b.coeffs().iter().map(|c| c.scale(&f)).collect())).collect()
}

fn try_form(red: &Reduced, form: &SeparatingForm) -> Result<Vec<Urs>> {
    let p = red.p;
    let c: Rat = form.weights.iter().zip(&red.x0).map(|(w, x)| rat(*w) * x).sum();
    let lam: Vec<Rat> = (0..p)
        .map(|j| form.weights.iter().zip(&red.basis[j]).map(|(w, b)| rat(*w) * b).sum())
        .collect();
    let jstar = lam.iter().position(|l| !l.is_zero()).ok_or_else(|| sep_err("form is constant"))?;
    // new layout: μ = 0, T = 1, remaining z at 2..
    let slot: Vec<Option<usize>> = {
        let mut k = 2;
        (0..p)
            .map(|j| {
                if j == jstar {
                    None
                } else {
                    k += 1;
                    Some(k - 1)
                }
            })
            .collect()
    };
    let mut expr = MPoly::var(1).sub(&MPoly::constant(c.clone()));
    for j in 0..p {
        if let Some(s) = slot[j] {
            expr = expr.sub(&MPoly::var(s).scale(&lam[j]));
        }
    }
    let zstar = expr.scale(&lam[jstar].recip());
    let mut vals = vec![MPoly::var(0)];
    for j in 0..p {
        vals.push(match slot[j] {
            Some(s) => MPoly::var(s),
            None => zstar.clone(),
        });
    }
    let mut cur: Vec<MPoly> = dedupe(red.core.iter().map(|q| strip_mu(&q.substitute_all(&vals))).collect());
    let mut remaining: Vec<usize> = (2..2 + p - 1).collect();
    let mut levels: Vec<(usize, Vec<MPoly>)> = vec![];
    while !remaining.is_empty() {
        let mut best: Option<((u32, u32, usize), usize, usize)> = None;
        for &v in &remaining {
            for (i, q) in cur.iter().enumerate() {
                let d = q.degree_in(v);
                if d > 0 {
                    let key = (d, q.total_degree(), q.nterms());
                    if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                        best = Some((key, v, i));
                    }
                }
            }
        }
        let (_, v, pi) = best.ok_or_else(|| sep_err("solution set is not zero-dimensional"))?;
        levels.push((v, cur.clone()));
        let pivot = cur[pi].clone();
        let mut next = vec![];
        for (i, q) in cur.iter().enumerate() {
            if i == pi {
                continue;
            }
            if q.degree_in(v) == 0 {
                next.push(q.clone());
            } else {
                let r = resultant_mpoly_capped(&pivot, q, v, ELIM_CAP)?;
                if !r.is_zero() {
                    next.push(strip_mu(&r));
                }
            }
        }
        cur = dedupe(next);
        remaining.retain(|&x| x != v);
    }
    if cur.iter().any(mu_only) {
        return Err(CoreError::Validation("central-path system has no solution for generic mu".into()));
    }
    let mut elim: Option<BiPoly> = None;
    for q in &cur {
        if q.degree_in(1) == 0 {
            continue;
        }
        let b = bipoly::from_mpoly(q, 0, 1).ok_or_else(|| sep_err("eliminant still has unknowns"))?;
        elim = Some(match elim {
            None => bipoly::normalize(&b),
            Some(e) => bipoly::gcd_t(&e, &b),
        });
    }
    let elim = elim.ok_or_else(|| sep_err("no eliminant in T"))?;
    if elim.deg() == 0 {
        return Err(CoreError::Validation("central-path system has no solution for generic mu".into()));
    }
    let sqf = bipoly::squarefree_t(&elim);
    let factors = exactalg::factor::factor_bivariate(&sqf)?;
    let mut out = vec![];
    'factor: for f in factors {
        let f = bipoly::normalize(&f);
        let fr = Arc::new(bipoly::to_rf(&f));
        let mut known: Vec<Option<K>> = vec![None; 1 + p];
        known[1] = Some(K::generator(&fr));
        for (v, polys) in levels.iter().rev() {
            let mut g: Option<UPoly<K>> = None;
            for q in polys {
                if q.degree_in(*v) == 0 {
                    continue;
                }
                let up = UPoly::new(q.coeffs_in(*v).iter().map(|c| eval_k(c, &known)).collect());
                if up.is_zero() {
                    continue;
                }
                g = Some(match g {
                    None => up,
                    Some(g0) => g0.gcd(&up),
                });
            }
            let Some(g) = g else {
                return Err(sep_err("coordinate not determined by the eliminant"));
            };
            match g.deg() {
                0 => continue 'factor,
                1 => known[*v] = Some(g.coeff(0).neg().div(&g.coeff(1))),
                _ => return Err(sep_err("form does not separate the solutions")),
            }
        }
        // z in the reduced layout
        let mut z: Vec<Option<K>> = vec![None];
        let tk = known[1].clone().unwrap();
        let mut zs = tk.sub(&K::constant(RatFunc::from_poly(QPoly::constant(c.clone()))));
        for j in 0..p {
            if let Some(s) = slot[j] {
                zs = zs.sub(&known[s].clone().unwrap().mul(&K::constant(RatFunc::from_poly(QPoly::constant(lam[j].clone())))));
            }
        }
        zs = zs.mul(&K::constant(RatFunc::from_poly(QPoly::constant(lam[jstar].recip()))));
        for j in 0..p {
            z.push(Some(match slot[j] {
                Some(s) => known[s].clone().unwrap(),
                None => zs.clone(),
            }));
        }
        let dk = eval_k(&red.d, &z);
        if dk.is_zero_r() {
            continue;
        }
        let dinv = dk.inv();
        let ys: Vec<K> = red.y_num.iter().map(|nm| eval_k(nm, &z).mul(&dinv)).collect();
        let mut full = z.clone();
        full.extend(ys.iter().cloned().map(Some));
        if red.rows.iter().any(|r| !eval_k(r, &full).is_zero_r()) {
            continue;
        }
        let mut coords: Vec<K> = red.xz.iter().map(|x| eval_k(x, &z)).collect();
        if red.nonzero.iter().any(|&k| coords[k].is_zero_r()) {
            continue;
        }
        coords.extend(ys);
        coords.extend(red.s_entries.iter().map(|s| eval_k(s, &full)));
        let fp = fr.derivative();
        let mut nums: Vec<RfPoly> = vec![fp.clone()];
        for h in &coords {
            nums.push(h.value().mul(&fp).div_rem(&fr).1);
        }
        let g = normalize_joint(&nums);
        out.push(Urs { n: red.n, m: red.m, f, g, sep: form.clone() });
    }
    if out.is_empty() {
        return Err(CoreError::Validation("no solution branch survived back-substitution".into()));
    }
    Ok(out)
}

/// Parametrized univariate representations covering the real zero branches of the central-path system.
pub fn eliminate_to_urs(inst: &SdoInstance) -> Result<Vec<Urs>> {
    let red = reduce(inst)?;
    let mut out = vec![];
    let mut empty = None;
    for case in split_cases(&red) {
        match urs_for_case(&case) {
            Ok(v) => out.extend(v),
            // a case without solutions for generic μ contributes nothing
            Err(CoreError::Validation(msg)) => empty = Some(CoreError::Validation(msg)),
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(empty.unwrap_or_else(|| CoreError::Validation("central-path system has no solution branch".into())));
    }
    Ok(out)
}

fn urs_for_case(red: &Reduced) -> Result<Vec<Urs>> {
    if red.core.is_empty() {
        return Err(sep_err("solution set is not zero-dimensional"));
    }
    let mut last = None;
    for form in candidate_forms(red) {
        match try_form(red, &form) {
            Ok(v) => return Ok(v),
            Err(CoreError::SeparationFailure(msg)) => last = Some(msg),
            Err(e) => return Err(e),
        }
    }
    Err(CoreError::SeparationFailure(format!(
        "no coordinate or random form separates the solutions (last: {})",
        last.unwrap_or_default()
    )))
}

fn specialize_all(u: &Urs, mu: &Rat) -> Vec<QPoly> {
    u.g.iter().map(|g| bipoly::specialize(g, mu)).collect()
}

#[derive(Clone, Debug)]
pub struct AssociatedPoint {
    pub mu: Rat,
    pub root: IsolatedRoot,
    pub coords: Vec<rug::Float>,
    pub error_bound: f64,
}

impl AssociatedPoint {
    pub fn x(&self, u: &Urs) -> Vec<Vec<rug::Float>> {
        let n = u.n;
        let mut x = vec![vec![rug::Float::new(self.coords[0].prec()); n]; n];
        for (k, (a, b)) in svec_pairs(n).into_iter().enumerate() {
            x[a][b] = self.coords[k].clone();
            x[b][a] = self.coords[k].clone();
        }
        x
    }
    pub fn s(&self, u: &Urs) -> Vec<Vec<rug::Float>> {
        let n = u.n;
        let off = u.t() + u.m;
        let mut s = vec![vec![rug::Float::new(self.coords[0].prec()); n]; n];
        for (k, (a, b)) in svec_pairs(n).into_iter().enumerate() {
            s[a][b] = self.coords[off + k].clone();
            s[b][a] = self.coords[off + k].clone();
        }
        s
    }
}

fn deriv_bound(p: &QPoly, r: f64) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| j as f64 * exactalg::rat::to_f64(c).abs() * r.powi(j as i32 - 1))
        .sum()
}

/// Coordinates g_i(μ*, t_σ)/g_0(μ*, t_σ) at `prec` bits with an error bound.
pub fn associated_point(u: &Urs, sigma: &ThomEncoding, mu: &Rat, prec: u32) -> Result<AssociatedPoint> {
    let fq = bipoly::specialize(&u.f, mu);
    let mut root = root_by_thom(&fq, sigma)?;
    let gs = specialize_all(u, mu);
    if sign_at_root(&gs[0], &root) == 0 {
        return Err(CoreError::Certification("g0 vanishes at the root".into()));
    }
    root.refine_bits(prec + 32);
    let mid = root.midpoint();
    let vals: Vec<Rat> = gs.iter().map(|g| g.eval(&mid)).collect();
    let w = exactalg::rat::to_f64(&root.width());
    let r = exactalg::rat::to_f64(&root.lo).abs().max(exactalg::rat::to_f64(&root.hi).abs());
    let d0 = deriv_bound(&gs[0], r) * w;
    let v0 = exactalg::rat::to_f64(&vals[0]).abs();
    let mut err: f64 = 0.0;
    let mut coords = vec![];
    for (g, v) in gs.iter().zip(&vals).skip(1) {
        let q = v / &vals[0];
        let di = deriv_bound(g, r) * w;
        let e = 2.0 * (di + exactalg::rat::to_f64(&q).abs() * d0) / (v0 - d0).max(f64::MIN_POSITIVE);
        err = err.max(e);
        coords.push(to_float(&q, prec));
    }
    Ok(AssociatedPoint { mu: mu.clone(), root, coords, error_bound: err })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Central,
    Exterior,
    InfeasibleSpurious,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchTag {
    pub tag: Tag,
    pub thom: String,
    /// Signs of e_1…e_n (sums of principal minors) of X and S at μ*.
    pub signs_x: Vec<i8>,
    pub signs_s: Vec<i8>,
    pub detail: String,
}

/// Signs of e_k(M), k = 1..n, for a symmetric matrix with entries h/g0 at a root.
pub(crate) fn minor_sum_signs<F>(entries: &[Vec<QPoly>], g0: &QPoly, sign_of: F) -> Vec<i8>
where
    F: Fn(&QPoly) -> i8,
{
    let n = entries.len();
    let s0 = sign_of(g0);
    let mut out = vec![];
    for k in 1..=n {
        let mut ek = QPoly::zero();
        for sub in combinations(n, k, usize::MAX) {
            let mat: Vec<Vec<QPoly>> = sub.iter().map(|&a| sub.iter().map(|&b| entries[a][b].clone()).collect()).collect();
            ek = ek.add(&det_bareiss(&mat));
        }
        let s = sign_of(&ek);
        out.push(if k % 2 == 1 { s * s0 } else { s });
    }
    out
}

fn matrix_polys(gs: &[QPoly], n: usize, offset: usize) -> Vec<Vec<QPoly>> {
    let mut m = vec![vec![QPoly::zero(); n]; n];
    for (k, (a, b)) in svec_pairs(n).into_iter().enumerate() {
        m[a][b] = gs[offset + k].clone();
        m[b][a] = gs[offset + k].clone();
    }
    m
}

/// Exact eigenvalue-sign summary of X and S on branch σ at μ*.
pub fn spectrum_signs(u: &Urs, sigma: &ThomEncoding, mu: &Rat) -> Result<(Vec<i8>, Vec<i8>)> {
    let fq = bipoly::specialize(&u.f, mu);
    let root = root_by_thom(&fq, sigma)?;
    let gs = specialize_all(u, mu);
    if sign_at_root(&gs[0], &root) == 0 {
        return Err(CoreError::Certification("g0 vanishes at the root".into()));
    }
    let sx = minor_sum_signs(&matrix_polys(&gs, u.n, 1), &gs[0], |q| sign_at_root(q, &root));
    let ss = minor_sum_signs(&matrix_polys(&gs, u.n, 1 + u.t() + u.m), &gs[0], |q| sign_at_root(q, &root));
    Ok((sx, ss))
}

/// Central when both spectra are positive; otherwise exterior when the branch limit solves the
/// optimality conditions, and infeasible-spurious when it does not or is unbounded.
pub fn classify_branch(inst: &SdoInstance, u: &Urs, sigma: &ThomEncoding, mu: &Rat) -> Result<BranchTag> {
    let (sx, ss) = spectrum_signs(u, sigma, mu)?;
    let thom = sigma.as_string();
    if sx.iter().chain(&ss).all(|&s| s > 0) {
        return Ok(BranchTag { tag: Tag::Central, thom, signs_x: sx, signs_s: ss, detail: "X, S positive definite".into() });
    }
    let (tag, detail) = match crate::limits::limit_urs(u, sigma, mu) {
        Ok(l) => match crate::limits::limit_coordinates(&l) {
            Ok(pt) => match crate::limits::check_optimality(inst, &pt) {
                None => (Tag::Exterior, "limit solves the optimality conditions".to_string()),
                Some(bad) => (Tag::InfeasibleSpurious, format!("limit violates {bad}")),
            },
            Err(e) => (Tag::InfeasibleSpurious, e.to_string()),
        },
        Err(e) => (Tag::InfeasibleSpurious, e.to_string()),
    };
    Ok(BranchTag { tag, thom, signs_x: sx, signs_s: ss, detail })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedBranch {
    pub rep: usize,
    pub thom: Vec<i8>,
    pub tag: BranchTag,
}

/// Classifies every real branch of every representation at μ*.
pub fn classify_all(inst: &SdoInstance, reps: &[Urs], mu: &Rat) -> Result<Vec<ClassifiedBranch>> {
    let mut out = vec![];
    for (i, u) in reps.iter().enumerate() {
        for sigma in u.branches(mu) {
            let tag = classify_branch(inst, u, &sigma, mu)?;
            out.push(ClassifiedBranch { rep: i, thom: sigma.signs.clone(), tag });
        }
    }
    Ok(out)
}

/// The unique central branch at μ*.
pub fn central_branch(inst: &SdoInstance, reps: &[Urs], mu: &Rat) -> Result<(usize, ThomEncoding)> {
    let mut found = vec![];
    for (i, u) in reps.iter().enumerate() {
        for sigma in u.branches(mu) {
            let (sx, ss) = spectrum_signs(u, &sigma, mu)?;
            if sx.iter().chain(&ss).all(|&s| s > 0) {
                found.push((i, sigma));
            }
        }
    }
    let _ = inst;
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(CoreError::Certification(format!("no central branch at mu = {}", fmt_rat(mu)))),
        k => Err(CoreError::Certification(format!("{k} branches tagged central at mu = {}", fmt_rat(mu)))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZariskiReport {
    pub degree: usize,
    pub draws: Vec<usize>,
    pub bound: usize,
    pub seed: u64,
}

/// μ-degree of the squarefree part of Res_T(Σ a_i g_i, f), maximized over random integer draws.
pub fn zariski_degree(u: &Urs) -> Result<ZariskiReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(ZARISKI_SEED);
    let mut draws = vec![];
    let mut total = 5;
    let mut k = 0;
    while k < total {
        let mut h = BiPoly::zero();
        for g in &u.g {
            let a: i64 = rng.gen_range(-99..=99);
            h = h.add(&g.scale(&QPoly::constant(rat(a))));
        }
        k += 1;
        if h.is_zero() {
            continue;
        }
        let r = resultant(&u.f, &h);
        if r.is_zero() {
            return Err(CoreError::Validation("f and the hyperplane section share a factor".into()));
        }
        let deg = if r.deg() == 0 { 0 } else { r.squarefree().deg() };
        if draws.len() > 0 && draws.iter().any(|&d| d != deg) && total < 15 {
            total += 1;
        }
        draws.push(deg);
    }
    let deg_mu = bipoly::deg_mu(&u.f).max(u.g.iter().map(bipoly::deg_mu).max().unwrap_or(0));
    let bound = deg_mu * (u.f.deg() + u.g.iter().map(|g| g.deg()).max().unwrap_or(0));
    Ok(ZariskiReport { degree: draws.iter().copied().max().unwrap_or(0), draws, bound, seed: ZARISKI_SEED })
}

pub fn parse_mu(s: &str) -> Result<Rat> {
    let r = parse_rat(s).map_err(|e| CoreError::Parse(e.to_string()))?;
    if !(r.is_positive() && r <= Rat::one()) {
        return Err(CoreError::Validation(format!("mu must lie in (0, 1], got {s}")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_diag_lp, gen_elliptope3};

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2, 100).len(), 6);
        assert_eq!(combinations(3, 3, 100), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(6, 3, 100).len(), 20);
    }

    #[test]
    fn elliptope_cubic() {
        let e = gen_elliptope3();
        let reps = eliminate_to_urs(&e).unwrap();
        let cubic = bipoly::parse("2*T^3 + 2*T^2 - 1/2*mu*T^2 - mu*T - 2*T - 2").unwrap();
        let u = reps.iter().find(|u| bipoly::associates(&u.f, &cubic)).expect("cubic factor");
        assert_eq!(u.sep.weights, vec![0, 1, 0, 0, 0, 0]);
        let rf = Arc::new(bipoly::to_rf(&u.f));
        let g0 = Quotient::new(&bipoly::to_rf(&u.g[0]), &rf);
        let coord = |k: usize| Quotient::new(&bipoly::to_rf(&u.g[k]), &rf).mul(&g0.inv());
        let tk = Quotient::generator(&rf);
        assert_eq!(coord(1), Quotient::one_r());
        assert_eq!(coord(2), tk);
        assert_eq!(coord(3), tk.neg());
        let mu = Quotient::constant(RatFunc::from_poly(QPoly::from_ints(&[0, 1])));
        let x23 = tk.mul(&tk).mul(&Quotient::from_i64(-2)).add(&mu.mul(&tk).mul(&Quotient::constant(RatFunc::from_poly(QPoly::constant(exactalg::rat::rat_frac(1, 2)))))).add(&Quotient::one_r());
        assert_eq!(coord(5), x23);
        for k in 0..u.g.len() {
            let _ = coord(k);
        }
        let g0f = bipoly::gcd_t(&u.f, &u.g[0]);
        assert_eq!(g0f.deg(), 0);
    }

    #[test]
    fn diag_lp_quadratic() {
        let d = gen_diag_lp();
        let reps = eliminate_to_urs(&d).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].f.deg(), 2);
        let tags = classify_all(&d, &reps, &rat(1)).unwrap();
        assert_eq!(tags.iter().filter(|b| b.tag.tag == Tag::Central).count(), 1);
    }

    #[test]
    fn line_zariski() {
        let u = Urs {
            n: 1,
            m: 0,
            f: bipoly::parse("T - mu").unwrap(),
            g: vec![bipoly::parse("1").unwrap(), bipoly::parse("mu").unwrap()],
            sep: SeparatingForm { kind: "coordinate".into(), weights: vec![1], seed: None, attempt: 0 },
        };
        assert_eq!(zariski_degree(&u).unwrap().degree, 1);
        let j = u.to_json();
        assert_eq!(Urs::from_json(&j).unwrap(), u);
    }
}
