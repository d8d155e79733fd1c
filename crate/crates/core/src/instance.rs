//! SDO instances with exact integer data: generators, validation, JSON and SDPA I/O.

use crate::error::{CoreError, Result};
use crate::linalg::{self, RMat};
use exactalg::rat::{fmt_rat, parse_rat, rat, rat_frac, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

pub fn t(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `(i, j)` (any order) in the svec listing.
pub fn svec_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// `(i, j)` pairs with `i ≤ j` in svec order.
pub fn svec_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = vec![];
    for i in 0..n {
        for j in i..n {
            v.push((i, j));
        }
    }
    v
}

pub fn svec(x: &RMat) -> Result<Vec<Rat>> {
    let n = x.len();
    for i in 0..n {
        for j in 0..n {
            if x[i][j] != x[j][i] {
                return Err(CoreError::Validation(format!("matrix not symmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    Ok(svec_pairs(n).into_iter().map(|(i, j)| x[i][j].clone()).collect())
}

pub fn smat(n: usize, v: &[Rat]) -> RMat {
    let mut m = vec![vec![Rat::zero(); n]; n];
    for (k, (i, j)) in svec_pairs(n).into_iter().enumerate() {
        m[i][j] = v[k].clone();
        m[j][i] = v[k].clone();
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymIntMat {
    pub n: usize,
    pub entries: Vec<Vec<BigInt>>,
}

impl SymIntMat {
    pub fn zero(n: usize) -> Self {
        SymIntMat { n, entries: vec![vec![BigInt::zero(); n]; n] }
    }
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        SymIntMat { n: rows.len(), entries: rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect() }
    }
    /// `E_ij + E_ji` (or `E_ii`) scaled by `c`.
    pub fn unit(n: usize, i: usize, j: usize, c: i64) -> Self {
        let mut m = Self::zero(n);
        m.entries[i][j] += c;
        if i != j {
            m.entries[j][i] += c;
        }
        m
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i][j] += &o.entries[i][j];
            }
        }
        m
    }
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
    pub fn get(&self, i: usize, j: usize) -> Rat {
        Rat::from_integer(self.entries[i][j].clone())
    }
    pub fn to_rmat(&self) -> RMat {
        self.entries.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Start {
    pub x: RMat,
    pub y: Vec<Rat>,
    pub s: RMat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdoInstance {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub a: Vec<SymIntMat>,
    pub b: Vec<BigInt>,
    pub c: SymIntMat,
    pub start: Option<Start>,
}

impl SdoInstance {
    pub fn t(&self) -> usize {
        t(self.n)
    }
    pub fn nbar(&self) -> usize {
        self.m + 2 * self.t()
    }
    /// Row `i` of the primal constraint map on svec coordinates (off-diagonals doubled).
    pub fn primal_row(&self, i: usize) -> Vec<Rat> {
        svec_pairs(self.n)
            .into_iter()
            .map(|(j, l)| {
                let a = self.a[i].get(j, l);
                if j == l {
                    a
                } else {
                    a * rat(2)
                }
            })
            .collect()
    }
    pub fn primal_matrix(&self) -> RMat {
        (0..self.m).map(|i| self.primal_row(i)).collect()
    }
    pub fn b_rat(&self) -> Vec<Rat> {
        self.b.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }
    /// `C − Σ y_i A^i`.
    pub fn dual_slack(&self, y: &[Rat]) -> RMat {
        let mut s = self.c.to_rmat();
        for (i, yi) in y.iter().enumerate() {
            for j in 0..self.n {
                for l in 0..self.n {
                    s[j][l] -= yi * self.a[i].get(j, l);
                }
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub symmetric: bool,
    pub rank: usize,
    pub m: usize,
    pub has_start: bool,
    pub primal_residuals: Vec<String>,
    pub dual_residual_max: String,
    pub min_eig_x: Option<f64>,
    pub min_eig_s: Option<f64>,
    pub passed: bool,
    pub failures: Vec<String>,
}

pub fn validate(inst: &SdoInstance) -> ValidationReport {
    let mut failures = vec![];
    let mut symmetric = inst.c.is_symmetric() && inst.c.n == inst.n;
    for (i, a) in inst.a.iter().enumerate() {
        if a.n != inst.n || !a.is_symmetric() {
            symmetric = false;
            failures.push(format!("A{} is not a symmetric {}x{} matrix", i + 1, inst.n, inst.n));
        }
    }
    if !inst.c.is_symmetric() {
        failures.push("C is not symmetric".into());
    }
    if inst.a.len() != inst.m || inst.b.len() != inst.m {
        failures.push(format!("expected m = {} constraint matrices and right-hand sides", inst.m));
    }
    let rank = if symmetric && inst.a.len() == inst.m { linalg::rank(&inst.primal_matrix()) } else { 0 };
    if rank < inst.m {
        failures.push(format!("svec(A^i) have rank {} < m = {}", rank, inst.m));
    }
    let mut primal_residuals = vec![];
    let mut dual_residual_max = Rat::zero();
    let (mut min_eig_x, mut min_eig_s) = (None, None);
    if let Some(st) = &inst.start {
        if symmetric && st.x.len() == inst.n && st.s.len() == inst.n && st.y.len() == inst.m {
            for i in 0..inst.m {
                let mut r = -Rat::from_integer(inst.b[i].clone());
                for j in 0..inst.n {
                    for l in 0..inst.n {
                        r += inst.a[i].get(j, l) * &st.x[j][l];
                    }
                }
                if !r.is_zero() {
                    failures.push(format!("start violates <A{},X0> = b{} by {}", i + 1, i + 1, fmt_rat(&r)));
                }
                primal_residuals.push(fmt_rat(&r));
            }
            let s = inst.dual_slack(&st.y);
            for j in 0..inst.n {
                for l in 0..inst.n {
                    let d = (&st.s[j][l] - &s[j][l]).abs();
                    if d > dual_residual_max {
                        dual_residual_max = d;
                    }
                }
            }
            if !dual_residual_max.is_zero() {
                failures.push(format!("start violates sum y_i A^i + S0 = C by {}", fmt_rat(&dual_residual_max)));
            }
            let ex = linalg::sym_eigenvalues(&linalg::to_fmat(&st.x, 128));
            let es = linalg::sym_eigenvalues(&linalg::to_fmat(&st.s, 128));
            let mx = ex.last().unwrap().to_f64();
            let ms = es.last().unwrap().to_f64();
            if !linalg::is_pd_exact(&st.x) {
                failures.push(format!("start X0 is not positive definite (min eigenvalue {mx:.3e})"));
            }
            if !linalg::is_pd_exact(&st.s) {
                failures.push(format!("start S0 is not positive definite (min eigenvalue {ms:.3e})"));
            }
            min_eig_x = Some(mx);
            min_eig_s = Some(ms);
        } else {
            failures.push("start has wrong dimensions".into());
        }
    }
    ValidationReport {
        symmetric,
        rank,
        m: inst.m,
        has_start: inst.start.is_some(),
        primal_residuals,
        dual_residual_max: fmt_rat(&dual_residual_max),
        min_eig_x,
        min_eig_s,
        passed: failures.is_empty(),
        failures,
    }
}

fn eye(n: usize) -> RMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect()
}

pub fn gen_elliptope3() -> SdoInstance {
    let n = 3;
    let a = (0..3).map(|i| SymIntMat::unit(n, i, i, 1)).collect();
    let c = SymIntMat::from_i64(&[vec![0, 2, -2], vec![2, 0, -1], vec![-2, -1, 0]]);
    let mut inst = SdoInstance {
        name: "elliptope3".into(),
        n,
        m: 3,
        a,
        b: vec![BigInt::from(1); 3],
        c,
        start: None,
    };
    let y = vec![rat(-5); 3];
    let s = inst.dual_slack(&y);
    inst.start = Some(Start { x: eye(3), y, s });
    inst
}

pub fn gen_khachiyan(n: usize) -> Result<SdoInstance> {
    if n < 2 {
        return Err(CoreError::Validation(format!("khachiyan instance needs n >= 2, got {n}")));
    }
    let mut a = vec![SymIntMat::unit(n, 0, 1, -1)];
    for i in 2..n {
        // y_i sits at (1, i+1) and on the diagonal entry (i, i)
        a.push(SymIntMat::unit(n, 0, i, -1).add(&SymIntMat::unit(n, i - 1, i - 1, -1)));
    }
    a.push(SymIntMat::unit(n, n - 1, n - 1, -1));
    let mut b = vec![BigInt::zero(); n];
    b[n - 1] = BigInt::from(-1);
    let c = SymIntMat::unit(n, 0, 0, 1);
    let mut x = eye(n);
    x[0][0] = rat(n as i64);
    for i in 2..n {
        x[0][i] = rat_frac(-1, 2);
        x[i][0] = rat_frac(-1, 2);
    }
    let mut y = vec![rat(0)];
    for _ in 2..n {
        y.push(rat_frac(1, 4 * n as i64));
    }
    y.push(rat(1));
    let mut inst = SdoInstance { name: format!("khachiyan{n}"), n, m: n, a, b, c, start: None };
    let s = inst.dual_slack(&y);
    inst.start = Some(Start { x, y, s });
    Ok(inst)
}

pub fn gen_diag_lp() -> SdoInstance {
    let n = 2;
    let mut inst = SdoInstance {
        name: "diag-lp".into(),
        n,
        m: 1,
        a: vec![SymIntMat::unit(n, 0, 0, 1).add(&SymIntMat::unit(n, 1, 1, 1))],
        b: vec![BigInt::from(1)],
        c: SymIntMat::unit(n, 0, 0, 1),
        start: None,
    };
    let y = vec![rat(-1)];
    let s = inst.dual_slack(&y);
    let x = vec![vec![rat_frac(1, 2), rat(0)], vec![rat(0), rat_frac(1, 2)]];
    inst.start = Some(Start { x, y, s });
    inst
}

// ---------- JSON ----------

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < (1 << 53) => json!(v),
        _ => json!(x.to_string()),
    }
}

fn mat_json(m: &SymIntMat) -> Value {
    Value::Array(m.entries.iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

fn rmat_json(m: &RMat) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| json!(fmt_rat(x))).collect())).collect())
}

pub fn to_json(inst: &SdoInstance) -> Value {
    let mut v = json!({
        "name": inst.name,
        "n": inst.n,
        "m": inst.m,
        "A": inst.a.iter().map(mat_json).collect::<Vec<_>>(),
        "b": inst.b.iter().map(int_json).collect::<Vec<_>>(),
        "C": mat_json(&inst.c),
    });
    if let Some(st) = &inst.start {
        v["start"] = json!({
            "X": rmat_json(&st.x),
            "y": st.y.iter().map(|x| json!(fmt_rat(x))).collect::<Vec<_>>(),
            "S": rmat_json(&st.s),
        });
    }
    v
}

fn perr(key: &str, msg: &str) -> CoreError {
    CoreError::Parse(format!("key {key:?}: {msg}"))
}

fn get_int(v: &Value, key: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(perr(key, &format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| perr(key, &format!("{s:?} is not an integer"))),
        _ => Err(perr(key, "expected an integer")),
    }
}

fn get_rat(v: &Value, key: &str) -> Result<Rat> {
    match v {
        Value::Number(_) => Ok(Rat::from_integer(get_int(v, key)?)),
        Value::String(s) => parse_rat(s).map_err(|_| perr(key, &format!("{s:?} is not a rational"))),
        _ => Err(perr(key, "expected a rational")),
    }
}

fn get_usize(obj: &Value, key: &str) -> Result<usize> {
    let v = obj.get(key).ok_or_else(|| perr(key, "missing"))?;
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(key, "expected a nonnegative integer"))
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(key, "expected an array"))
}

fn int_mat(v: &Value, n: usize, key: &str) -> Result<SymIntMat> {
    let rows = get_array(v, key)?;
    if rows.len() != n {
        return Err(perr(key, &format!("expected {n} rows")));
    }
    let mut entries = vec![];
    for (i, r) in rows.iter().enumerate() {
        let k = format!("{key}[{i}]");
        let r = get_array(r, &k)?;
        if r.len() != n {
            return Err(perr(&k, &format!("expected {n} entries")));
        }
        entries.push(r.iter().enumerate().map(|(j, x)| get_int(x, &format!("{k}[{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    Ok(SymIntMat { n, entries })
}

fn rat_mat(v: &Value, n: usize, key: &str) -> Result<RMat> {
    let rows = get_array(v, key)?;
    if rows.len() != n {
        return Err(perr(key, &format!("expected {n} rows")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let k = format!("{key}[{i}]");
            let r = get_array(r, &k)?;
            if r.len() != n {
                return Err(perr(&k, &format!("expected {n} entries")));
            }
            r.iter().enumerate().map(|(j, x)| get_rat(x, &format!("{k}[{j}]"))).collect()
        })
        .collect()
}

pub fn from_json(v: &Value) -> Result<SdoInstance> {
    if !v.is_object() {
        return Err(CoreError::Parse("instance must be a JSON object".into()));
    }
    let n = get_usize(v, "n")?;
    let m = get_usize(v, "m")?;
    if n == 0 || m == 0 {
        return Err(perr(if n == 0 { "n" } else { "m" }, "must be positive"));
    }
    let aa = get_array(v.get("A").ok_or_else(|| perr("A", "missing"))?, "A")?;
    if aa.len() != m {
        return Err(perr("A", &format!("expected {m} matrices")));
    }
    let a = aa.iter().enumerate().map(|(i, x)| int_mat(x, n, &format!("A[{i}]"))).collect::<Result<Vec<_>>>()?;
    let bb = get_array(v.get("b").ok_or_else(|| perr("b", "missing"))?, "b")?;
    if bb.len() != m {
        return Err(perr("b", &format!("expected {m} entries")));
    }
    let b = bb.iter().enumerate().map(|(i, x)| get_int(x, &format!("b[{i}]"))).collect::<Result<Vec<_>>>()?;
    let c = int_mat(v.get("C").ok_or_else(|| perr("C", "missing"))?, n, "C")?;
    let start = match v.get("start") {
        None | Some(Value::Null) => None,
        Some(st) => {
            let x = rat_mat(st.get("X").ok_or_else(|| perr("start.X", "missing"))?, n, "start.X")?;
            let yy = get_array(st.get("y").ok_or_else(|| perr("start.y", "missing"))?, "start.y")?;
            if yy.len() != m {
                return Err(perr("start.y", &format!("expected {m} entries")));
            }
            let y = yy.iter().enumerate().map(|(i, x)| get_rat(x, &format!("start.y[{i}]"))).collect::<Result<Vec<_>>>()?;
            let s = rat_mat(st.get("S").ok_or_else(|| perr("start.S", "missing"))?, n, "start.S")?;
            Some(Start { x, y, s })
        }
    };
    let name = v.get("name").and_then(|x| x.as_str()).unwrap_or("instance").to_string();
    Ok(SdoInstance { name, n, m, a, b, c, start })
}

pub fn parse_json_str(s: &str) -> Result<SdoInstance> {
    let v: Value = serde_json::from_str(s)
        .map_err(|e| CoreError::Parse(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))?;
    from_json(&v)
}

// ---------- SDPA ----------

/// Reads a single-block SDPA sparse file. The SDPA dual `max F0•Y, Fi•Y = ci`
/// maps to `C = −F0`, `A^i = Fi`, `b = c`.
pub fn parse_sdpa(src: &str) -> Result<SdoInstance> {
    let mut tokens_lines: Vec<(usize, Vec<String>)> = vec![];
    for (ln, line) in src.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('"') || l.starts_with('*') {
            continue;
        }
        let cleaned: String = l.chars().map(|c| if "{}(),".contains(c) { ' ' } else { c }).collect();
        tokens_lines.push((ln + 1, cleaned.split_whitespace().map(String::from).collect()));
    }
    let err = |ln: usize, msg: &str| CoreError::Parse(format!("SDPA line {ln}: {msg}"));
    let mut it = tokens_lines.into_iter();
    let (l1, t1) = it.next().ok_or_else(|| err(0, "missing m"))?;
    let m: usize = t1.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(l1, "bad m"))?;
    let (l2, t2) = it.next().ok_or_else(|| err(l1, "missing nBlocks"))?;
    let nb: usize = t2.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(l2, "bad nBlocks"))?;
    if nb != 1 {
        return Err(err(l2, "only single-block instances are supported"));
    }
    let (l3, t3) = it.next().ok_or_else(|| err(l2, "missing block structure"))?;
    let n: i64 = t3.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(l3, "bad block size"))?;
    if n <= 0 {
        return Err(err(l3, "block must be a positive semidefinite block"));
    }
    let n = n as usize;
    let int_of = |s: &str, ln: usize| -> Result<BigInt> {
        if let Ok(v) = s.parse::<BigInt>() {
            return Ok(v);
        }
        let f: f64 = s.parse().map_err(|_| err(ln, &format!("bad number {s:?}")))?;
        if f.fract() != 0.0 || !f.is_finite() {
            return Err(err(ln, &format!("non-integer coefficient {s:?}")));
        }
        Ok(BigInt::from(f as i64))
    };
    let (l4, t4) = it.next().ok_or_else(|| err(l3, "missing objective vector"))?;
    if t4.len() < m {
        return Err(err(l4, "objective vector too short"));
    }
    let b = t4[..m].iter().map(|s| int_of(s, l4)).collect::<Result<Vec<_>>>()?;
    let mut mats = vec![SymIntMat::zero(n); m + 1];
    for (ln, t) in it {
        if t.len() < 5 {
            return Err(err(ln, "entry line needs 5 fields"));
        }
        let k: usize = t[0].parse().map_err(|_| err(ln, "bad matrix number"))?;
        let blk: usize = t[1].parse().map_err(|_| err(ln, "bad block number"))?;
        let i: usize = t[2].parse().map_err(|_| err(ln, "bad row"))?;
        let j: usize = t[3].parse().map_err(|_| err(ln, "bad column"))?;
        if k > m || blk != 1 || i == 0 || j == 0 || i > n || j > n {
            return Err(err(ln, "entry index out of range"));
        }
        let v = int_of(&t[4], ln)?;
        mats[k].entries[i - 1][j - 1] = v.clone();
        mats[k].entries[j - 1][i - 1] = v;
    }
    let mut c = mats[0].clone();
    for r in c.entries.iter_mut() {
        for x in r.iter_mut() {
            *x = -x.clone();
        }
    }
    Ok(SdoInstance { name: "sdpa".into(), n, m, a: mats[1..].to_vec(), b, c, start: None })
}

pub fn to_sdpa(inst: &SdoInstance) -> String {
    let mut s = format!("\"{}\"\n{}\n1\n{}\n", inst.name, inst.m, inst.n);
    s.push_str(&inst.b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    s.push('\n');
    let mut emit = |k: usize, m: &SymIntMat, neg: bool| {
        for i in 0..inst.n {
            for j in i..inst.n {
                let v = &m.entries[i][j];
                if !v.is_zero() {
                    let v = if neg { -v.clone() } else { v.clone() };
                    s.push_str(&format!("{} 1 {} {} {}\n", k, i + 1, j + 1, v));
                }
            }
        }
    };
    emit(0, &inst.c, true);
    for (k, a) in inst.a.iter().enumerate() {
        emit(k + 1, a, false);
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Sdpa,
}

/// Loads and validates an instance. The SDPA format carries no start point.
pub fn load_str(src: &str, format: Format) -> Result<SdoInstance> {
    let inst = match format {
        Format::Json => parse_json_str(src)?,
        Format::Sdpa => parse_sdpa(src)?,
    };
    let rep = validate(&inst);
    if !rep.passed {
        return Err(CoreError::Validation(rep.failures.join("; ")));
    }
    Ok(inst)
}

pub fn load(path: &std::path::Path, format: Format) -> Result<SdoInstance> {
    let src = std::fs::read_to_string(path)?;
    load_str(&src, format)
}

/// Format guess from the file name (`.dat-s`, `.sdpa` → SDPA; otherwise JSON).
pub fn format_for(path: &str) -> Format {
    if path.ends_with(".dat-s") || path.ends_with(".sdpa") || path.ends_with(".dat") {
        Format::Sdpa
    } else {
        Format::Json
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_layout() {
        assert_eq!(svec(&eye(2)).unwrap(), vec![rat(1), rat(0), rat(1)]);
        assert_eq!(svec_pairs(3).len(), 6);
        for (k, (i, j)) in svec_pairs(4).into_iter().enumerate() {
            assert_eq!(svec_index(4, i, j), k);
            assert_eq!(svec_index(4, j, i), k);
        }
        let xs = vec![
            vec![rat(1), rat(-1), rat(1)],
            vec![rat(-1), rat(1), rat(-1)],
            vec![rat(1), rat(-1), rat(1)],
        ];
        assert_eq!(svec(&xs).unwrap(), [1, -1, 1, 1, -1, 1].map(rat).to_vec());
        assert_eq!(smat(3, &svec(&xs).unwrap()), xs);
        let bad = vec![vec![rat(1), rat(2)], vec![rat(3), rat(1)]];
        assert!(svec(&bad).is_err());
    }

    #[test]
    fn generators_validate() {
        for inst in [gen_elliptope3(), gen_diag_lp(), gen_khachiyan(2).unwrap(), gen_khachiyan(5).unwrap()] {
            let r = validate(&inst);
            assert!(r.passed, "{}: {:?}", inst.name, r.failures);
            assert_eq!(r.rank, inst.m);
        }
        assert!(gen_khachiyan(1).is_err());
    }

    #[test]
    fn elliptope_data() {
        let e = gen_elliptope3();
        assert_eq!(e.c.get(0, 1), rat(2));
        assert_eq!(e.c.get(0, 2), rat(-2));
        assert_eq!(e.c.get(1, 2), rat(-1));
        let xs = [[1, -1, 1], [-1, 1, -1], [1, -1, 1]];
        let mut obj = rat(0);
        for i in 0..3 {
            for j in 0..3 {
                obj += e.c.get(i, j) * rat(xs[i][j]);
            }
        }
        // strong duality with y** = (-4,-1,-1), b = (1,1,1)
        assert_eq!(obj, rat(-6));
    }

    #[test]
    fn validation_failures() {
        let mut e = gen_elliptope3();
        e.a[1] = e.a[0].clone();
        let r = validate(&e);
        assert!(!r.passed && r.rank < 3);
        let mut e = gen_elliptope3();
        e.start.as_mut().unwrap().x[0][0] = rat(2);
        let r = validate(&e);
        assert!(!r.passed);
        assert_eq!(r.primal_residuals[0], "1");
    }

    #[test]
    fn json_round_trip_and_errors() {
        let e = gen_elliptope3();
        let s = serde_json::to_string(&to_json(&e)).unwrap();
        assert_eq!(parse_json_str(&s).unwrap(), e);
        let mut v = to_json(&e);
        v["b"] = json!([1, "x", 1]);
        let msg = from_json(&v).unwrap_err().to_string();
        assert!(msg.contains("b[1]"), "{msg}");
        let msg = parse_json_str("{\"n\": 3,").unwrap_err().to_string();
        assert!(msg.contains("line"), "{msg}");
        let mut v = to_json(&e);
        v.as_object_mut().unwrap().remove("C");
        assert!(from_json(&v).unwrap_err().to_string().contains("\"C\""));
    }

    #[test]
    fn sdpa_round_trip() {
        let d = gen_diag_lp();
        let s = to_sdpa(&d);
        let back = load_str(&s, Format::Sdpa).unwrap();
        assert_eq!(back.a, d.a);
        assert_eq!(back.c, d.c);
        assert_eq!(back.b, d.b);
        assert!(parse_sdpa("1\n1\n2\n1\n0 1 1 1 0.5\n").is_err());
    }
}
