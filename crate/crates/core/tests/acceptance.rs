//! Acceptance criteria on the 3-elliptope, diagonal LP and Khachiyan fixtures.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

use centralpath::instance::{gen_diag_lp, gen_elliptope3, gen_khachiyan, svec, SdoInstance};
use centralpath::linalg::{self, FMat, RMat};
use centralpath::rate::{self, NewtonPolygon, RateReport};
use centralpath::report;
use centralpath::tracer::{self, TraceLog};
use centralpath::urs::{self, Tag, Urs};
use centralpath::{limits, polysys};
use exactalg::bipoly;
use exactalg::rat::{from_float, rat, rat_frac, to_f64, to_float, Rat};
use exactalg::roots::isolate_real_roots;
use exactalg::{BiPoly, QPoly};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

type Check = Result<String, String>;

// Frozen reference data for the 3-elliptope.
const CUBIC: &str = "2*T^3 + 2*T^2 - 1/2*mu*T^2 - mu*T - 2*T - 2";
const X_STAR: [[i64; 3]; 3] = [[1, -1, 1], [-1, 1, -1], [1, -1, 1]];
const Y_STAR: [i64; 3] = [-4, -1, -1];
const S_STAR: [[i64; 3]; 3] = [[4, 2, -2], [2, 1, -1], [-2, -1, 1]];
/// μ, λ_[3](X), λ_[2](X), λ_[3](S), λ_[2](S), ∥X−X**∥, ∥S−S**∥.
const TABLE1: [[f64; 7]; 6] = [
    [1.00e-09, 1.66e-10, 4.48e-05, 3.33e-10, 2.24e-05, 6.72e-05, 5.49e-05],
    [1.00e-10, 1.66e-11, 1.42e-05, 3.33e-11, 7.08e-06, 2.13e-05, 1.74e-05],
    [1.00e-11, 1.66e-12, 4.48e-06, 3.33e-12, 2.24e-06, 6.72e-06, 5.49e-06],
    [1.00e-12, 1.66e-13, 1.42e-06, 3.33e-13, 7.08e-07, 2.13e-06, 1.74e-06],
    [1.00e-13, 1.70e-14, 4.48e-07, 3.30e-14, 2.24e-07, 6.72e-07, 5.49e-07],
    [1.00e-14, 2.00e-15, 1.42e-07, 4.00e-15, 7.12e-08, 2.14e-07, 1.74e-07],
];
const TABLE_COLS: [&str; 7] = ["mu", "lam3(X)", "lam2(X)", "lam3(S)", "lam2(S)", "|X-X**|", "|S-S**|"];
const TABLE_TOL: f64 = 0.02;

fn disc_target() -> QPoly {
    QPoly::new(vec![rat(0), rat(128), rat(21), rat(6), rat_frac(1, 4)])
}

fn imat<const N: usize>(m: &[[i64; N]; N]) -> RMat {
    m.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
}

fn elliptope() -> &'static SdoInstance {
    static I: OnceLock<SdoInstance> = OnceLock::new();
    I.get_or_init(gen_elliptope3)
}

fn elliptope_reps() -> &'static [Urs] {
    static R: OnceLock<Vec<Urs>> = OnceLock::new();
    R.get_or_init(|| urs::eliminate_to_urs(elliptope()).expect("elliptope elimination"))
}

fn cubic_rep() -> Result<&'static Urs, String> {
    let cubic = bipoly::parse(CUBIC).unwrap();
    elliptope_reps()
        .iter()
        .find(|u| bipoly::associates(&u.f, &cubic))
        .ok_or_else(|| format!("no representation is associated to the cubic ({} found)", elliptope_reps().len()))
}

fn trace_to(inst: &SdoInstance, decades: u32, prec: u32) -> TraceLog {
    tracer::trace(inst, &rat(1), &tracer::pow10_neg(decades), &rat_frac(1, 10), None, prec).expect("trace")
}

fn elliptope_trace() -> &'static TraceLog {
    static T: OnceLock<TraceLog> = OnceLock::new();
    T.get_or_init(|| trace_to(elliptope(), 14, 256))
}

fn elliptope_rate() -> &'static RateReport {
    static R: OnceLock<RateReport> = OnceLock::new();
    R.get_or_init(|| rate::rate_report(elliptope()).expect("elliptope rate report"))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1() -> Check {
    let u = cubic_rep()?;
    Ok(format!("f = {}", bipoly::to_text(&u.f)))
}

fn c2() -> Check {
    let u = cubic_rep()?;
    let d = bipoly::discriminant(&u.f).map_err(|e| e.to_string())?;
    let lc = u.f.lc();
    if !lc.is_constant() {
        return Err(format!("leading coefficient depends on mu: {lc}"));
    }
    // the target is the discriminant -Res_T(f, f')/lc(f) of the cubic with leading coefficient 2;
    // scaling f by l/2 scales it by (l/2)^4
    let l = lc.coeff(0) / rat(2);
    let factor = -(&l * &l * &l * &l);
    let expected = disc_target().scale(&factor);
    if d == expected {
        Ok(format!("Res(f, f')/lc(f) = {} * (mu^4/4 + 6mu^3 + 21mu^2 + 128mu)", factor))
    } else {
        Err(format!("discriminant {d} is not {factor} times the target"))
    }
}

fn c3() -> Check {
    let cert = limits::limit_point(elliptope(), elliptope_reps(), &rat(1)).map_err(|e| e.to_string())?;
    let (x, y, s) = (cert.point.x_rat(), cert.point.y_rat(), cert.point.s_rat());
    let want_y: Vec<Rat> = Y_STAR.iter().map(|&v| rat(v)).collect();
    if x.as_ref() != Some(&imat(&X_STAR)) || y.as_ref() != Some(&want_y) || s.as_ref() != Some(&imat(&S_STAR)) {
        return Err(format!("limit point differs: {}", cert.point.to_json()));
    }
    let fbar = &cert.limit.fbar;
    let d1 = fbar.derivative();
    let d2 = d1.derivative();
    let (one, m1) = (rat(1), rat(-1));
    let roots_ok = fbar.deg() == 3
        && fbar.eval(&one).is_zero()
        && !d1.eval(&one).is_zero()
        && fbar.eval(&m1).is_zero()
        && d1.eval(&m1).is_zero()
        && !d2.eval(&m1).is_zero();
    if !roots_ok {
        return Err(format!("fbar = {fbar} does not have roots 1 (simple) and -1 (double)"));
    }
    Ok(format!("exact X**, y** = (-4, -1, -1), S**; fbar = {fbar}"))
}

/// X(μ), S(μ) from the closed form in X12, the root of the cubic keeping both matrices positive definite.
fn closed_form(mu: &Rat, prec: u32) -> Option<(FMat, FMat)> {
    let f = bipoly::specialize(&bipoly::parse(CUBIC).unwrap(), mu);
    let m = to_float(mu, prec);
    for mut r in isolate_real_roots(&f) {
        r.refine_bits(prec + 32);
        let t = to_float(&r.midpoint(), prec);
        let one = Float::with_val(prec, 1);
        let x23 = Float::with_val(prec, -2 * Float::with_val(prec, &t * &t)) + Float::with_val(prec, &m * &t) / 2u32 + 1u32;
        let x = vec![
            vec![one.clone(), t.clone(), Float::with_val(prec, -&t)],
            vec![t.clone(), one.clone(), x23.clone()],
            vec![Float::with_val(prec, -&t), x23, one.clone()],
        ];
        let d = Float::with_val(prec, -2 / &t) - 1u32;
        let c = |v: i32| Float::with_val(prec, v);
        let s = vec![
            vec![Float::with_val(prec, &m - 4 * t.clone()), c(2), c(-2)],
            vec![c(2), d.clone(), c(-1)],
            vec![c(-2), c(-1), d],
        ];
        if linalg::is_pd(&x) && linalg::is_pd(&s) {
            return Some((x, s));
        }
    }
    None
}

fn table_values(x: &FMat, s: &FMat, xs: &RMat, ss: &RMat, mu: f64) -> [f64; 7] {
    let prec = x[0][0].prec();
    let ex = linalg::sym_eigenvalues(x);
    let es = linalg::sym_eigenvalues(s);
    let dx = linalg::frobenius(&linalg::sub(x, &linalg::to_fmat(xs, prec))).to_f64();
    let ds = linalg::frobenius(&linalg::sub(s, &linalg::to_fmat(ss, prec))).to_f64();
    [mu, ex[2].to_f64(), ex[1].to_f64(), es[2].to_f64(), es[1].to_f64(), dx, ds]
}

fn c4() -> Check {
    let log = elliptope_trace();
    let (xs, ss) = (imat(&X_STAR), imat(&S_STAR));
    let pts = &log.points[log.points.len() - 6..];
    let mut bad = vec![];
    let mut oracle_gap: f64 = 0.0;
    for (row, (p, want)) in pts.iter().zip(TABLE1.iter()).enumerate() {
        let mu_exact = p.mu_exact.clone().ok_or("table point is not on the exact schedule")?;
        if rel(p.mu.to_f64(), want[0]) > 1e-12 {
            return Err(format!("row {row} has mu = {:e}", p.mu.to_f64()));
        }
        let got = table_values(&p.x, &p.s, &xs, &ss, want[0]);
        let (cx, cs) = closed_form(&mu_exact, 256).ok_or("closed form has no positive definite root")?;
        let oracle = table_values(&cx, &cs, &xs, &ss, want[0]);
        for k in 1..7 {
            oracle_gap = oracle_gap.max(rel(got[k], oracle[k]));
            let e = rel(got[k], want[k]);
            if e > TABLE_TOL {
                bad.push(format!(
                    "mu={:.0e} {}: {:.4e} (closed form {:.4e}) vs {:.2e}, {:.1}%",
                    want[0],
                    TABLE_COLS[k],
                    got[k],
                    oracle[k],
                    want[k],
                    100.0 * e
                ));
            }
        }
    }
    let head = format!("{}/36 cells within 2%, max deviation from closed form {:.1e}", 36 - bad.len(), oracle_gap);
    if bad.is_empty() {
        Ok(head)
    } else {
        Err(format!("{head}; off: {}", bad.join("; ")))
    }
}

/// Coefficients a with T = t0 + a μ^{1/2} + O(μ) from f(s², t0 + a s) = O(s³).
fn puiseux_half(f: &BiPoly, t0: &Rat) -> Result<Vec<f64>, String> {
    let mut c = vec![QPoly::zero(); 3];
    for j in 0..=f.deg() {
        let cj = f.coeff(j);
        for i in 0..=cj.deg() {
            let a = cj.coeff(i);
            if a.is_zero() {
                continue;
            }
            for l in 0..=j {
                let k = 2 * i + l;
                if k > 2 {
                    continue;
                }
                let binom = (0..l).fold(Rat::one(), |acc, q| acc * rat((j - q) as i64) / rat(q as i64 + 1));
                let tp = num_traits::pow(t0.clone(), j - l);
                c[k] = c[k].add(&QPoly::monomial(&a * &binom * tp, l));
            }
        }
    }
    if !c[0].is_zero() || !c[1].is_zero() {
        return Err("t0 is not a double root of f(0, T)".into());
    }
    Ok(isolate_real_roots(&c[2])
        .into_iter()
        .map(|mut r| {
            r.refine_bits(64);
            r.to_f64()
        })
        .collect())
}

fn x_map(mu: f64, t: f64) -> [f64; 6] {
    let x23 = -2.0 * t * t + mu * t / 2.0 + 1.0;
    [1.0, t, -t, 1.0, x23, 1.0]
}

fn s_map(mu: f64, t: f64) -> [f64; 6] {
    let d = -2.0 / t - 1.0;
    [mu - 4.0 * t, 2.0, -2.0, d, -1.0, d]
}

/// Sum of squared T-derivatives of the svec coordinates at (μ, T) = (0, t0).
fn squared_speed(map: fn(f64, f64) -> [f64; 6], t0: f64) -> f64 {
    let h = 1e-6;
    let (a, b) = (map(0.0, t0 + h), map(0.0, t0 - h));
    a.iter().zip(&b).map(|(p, q)| ((p - q) / (2.0 * h)).powi(2)).sum()
}

fn c5() -> Check {
    let rr = elliptope_rate();
    let half = rat_frac(1, 2);
    let f = bipoly::parse(CUBIC).unwrap();
    // the central branch approaches -1 from above (|X12| < 1)
    let a = puiseux_half(&f, &rat(-1))?.into_iter().find(|&a| a > 0.0).ok_or("no positive Puiseux coefficient")?;
    let mut notes = vec![];
    let mut ok = true;
    for (side, map) in [(&rr.x, x_map as fn(f64, f64) -> [f64; 6]), (&rr.s, s_map)] {
        let c_oracle = a * a * squared_speed(map, -1.0);
        let g = side.empirical_exponent.unwrap_or(f64::NAN);
        let c = side.coefficient.unwrap_or(f64::NAN);
        let good = side.valuation == Rat::one()
            && side.distance_exponent == half
            && (0.49..=0.51).contains(&g)
            && rel(c, c_oracle) < 0.01;
        ok &= good;
        notes.push(format!(
            "{}: valuation {}, exponent {}, fitted {:.4}, d ~ {:.4} mu (Puiseux {:.4} mu)",
            side.block, side.valuation, side.distance_exponent, g, c, c_oracle
        ));
    }
    let s = notes.join("; ");
    if ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn c6() -> Check {
    let k3 = gen_khachiyan(3).map_err(|e| e.to_string())?;
    let others = [("diag-lp", gen_diag_lp()), ("khachiyan3", k3)];
    let mut reports: Vec<(&str, RateReport)> = vec![("elliptope3", elliptope_rate().clone())];
    for (name, inst) in others {
        reports.push((name, rate::rate_report(&inst).map_err(|e| format!("{name}: {e}"))?));
    }
    let mut notes = vec![];
    let mut ok = true;
    for (name, r) in &reports {
        for side in [&r.x, &r.s] {
            let bound = rat_frac(1, side.r.deg() as i64);
            let good = side.generic_lower_bound == bound && side.valuation >= bound;
            ok &= good;
            notes.push(format!("{name}.{} {} >= {}", side.block, side.valuation, bound));
        }
    }
    let s = notes.join(", ");
    if ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn khachiyan_exponent(n: usize) -> Result<f64, String> {
    let inst = gen_khachiyan(n).map_err(|e| e.to_string())?;
    let log = tracer::trace(&inst, &rat(1), &tracer::pow10_neg(14), &rat_frac(1, 10), None, 512).map_err(|e| e.to_string())?;
    // y** = 0, so S** = C = E11
    let mut sstar = vec![vec![Rat::zero(); n]; n];
    sstar[0][0] = rat(1);
    let pts: Vec<_> = log.points.iter().filter(|p| p.mu_exact.is_some() && p.mu.to_f64() <= 1.01e-8).collect();
    let mus: Vec<Float> = pts.iter().map(|p| p.mu.clone()).collect();
    let ds: Vec<Float> = pts.iter().map(|p| p.dist_s(&sstar)).collect();
    Ok(tracer::loglog_slope(&mus, &ds))
}

fn c7() -> Check {
    let mut notes = vec![];
    let mut ok = true;
    let mut prev = f64::INFINITY;
    for n in [3usize, 4] {
        let g = khachiyan_exponent(n)?;
        let lo = 2f64.powi(-(n as i32)) / 1.2;
        let hi = 2f64.powi(1 - n as i32) * 1.2;
        let good = g >= lo && g <= hi && g < prev;
        ok &= good;
        prev = g;
        notes.push(format!("n={n}: fitted {g:.4} in [{lo:.4}, {hi:.4}]: {}", if good { "yes" } else { "no" }));
    }
    let s = notes.join("; ");
    if ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn c8() -> Check {
    let d = gen_diag_lp();
    let reps = urs::eliminate_to_urs(&d).map_err(|e| e.to_string())?;
    let cert = limits::limit_point(&d, &reps, &rat(1)).map_err(|e| e.to_string())?;
    let (x, y, s) = match (cert.point.x_rat(), cert.point.y_rat(), cert.point.s_rat()) {
        (Some(x), Some(y), Some(s)) => (x, y, s),
        _ => return Err("diagonal LP limit is not rational".into()),
    };
    let sc = polysys::sc_membership(&d, &svec(&x).unwrap(), &y, &svec(&s).unwrap());
    let log = trace_to(&d, 14, 256);
    let fit = tracer::fit_rate(&log, &x, &s, 6).map_err(|e| e.to_string())?;
    let lp_ok = sc.strictly_complementary && [fit.gamma_x, fit.gamma_s].iter().all(|g| (0.98..=1.02).contains(g));
    let e = elliptope();
    let ys: Vec<Rat> = Y_STAR.iter().map(|&v| rat(v)).collect();
    let esc = polysys::sc_membership(e, &svec(&imat(&X_STAR)).unwrap(), &ys, &svec(&imat(&S_STAR)).unwrap());
    let ell_ok = esc.equations_vanish && !esc.minors_positive;
    let s = format!(
        "diag-lp minors {:?}, fitted ({:.4}, {:.4}); elliptope minors {:?}",
        sc.minors, fit.gamma_x, fit.gamma_s, esc.minors
    );
    if lp_ok && ell_ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn c9() -> Check {
    let log = elliptope_trace();
    let prof = tracer::eigen_profile(log, (1, 1, 1), 6).map_err(|e| e.to_string())?;
    let rows = report::table_rows(log, None);
    let ratios: Vec<f64> = rows.iter().map(|r| r.lam_x_min / r.mu).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| rel(*r, mean)).fold(0.0, f64::max);
    let exps: Vec<String> = prof.classes.iter().map(|c| format!("{}{}={:.3}", c.matrix, c.index, c.exponent)).collect();
    let s = format!("exponents {}; lam3(X)/mu = {:.4} +- {:.2}%", exps.join(" "), mean, 100.0 * spread);
    if prof.pass && spread <= 0.05 {
        Ok(s)
    } else {
        Err(s)
    }
}

fn c10() -> Check {
    let mut insts = vec![elliptope().clone(), gen_diag_lp()];
    for n in 2..=4 {
        insts.push(gen_khachiyan(n).map_err(|e| e.to_string())?);
    }
    let mut notes = vec![];
    let mut ok = true;
    for inst in &insts {
        let eps = polysys::epsilon_from_start(inst).map_err(|e| format!("{}: {e}", inst.name))?;
        let q = polysys::q_tilde_and_deformation(inst, &eps).map_err(|e| format!("{}: {e}", inst.name))?;
        let good = q.tdeg_mu == 6 && q.dbar.iter().all(|&d| d == 8) && q.dbar.len() == inst.nbar() + 1;
        ok &= good;
        notes.push(format!("{} tdeg_mu {}", inst.name, q.tdeg_mu));
    }
    let u = cubic_rep()?;
    let z = urs::zariski_degree(u).map_err(|e| e.to_string())?;
    let deg_mu = u.g.iter().map(bipoly::deg_mu).chain([bipoly::deg_mu(&u.f)]).max().unwrap();
    let deg_t = u.f.deg() + u.g.iter().map(|g| g.deg()).max().unwrap();
    let bound = deg_mu * deg_t;
    ok &= z.degree <= bound && z.bound == bound;
    notes.push(format!("zariski degree {} <= {}", z.degree, bound));
    let s = notes.join(", ");
    if ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn hull_is_convex(p: &NewtonPolygon) -> bool {
    let slopes = p.slopes();
    let increasing = slopes.windows(2).all(|w| w[0] < w[1]);
    let above = p.support.iter().all(|&(i, j)| {
        p.hull.windows(2).all(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if i < x0 || i > x1 {
                return true;
            }
            // (j - y0)(x1 - x0) >= (y1 - y0)(i - x0)
            (j as i64 - y0 as i64) * (x1 as i64 - x0 as i64) >= (y1 as i64 - y0 as i64) * (i as i64 - x0 as i64)
        })
    });
    increasing && above
}

fn c11() -> Check {
    let e = elliptope();
    let reps = elliptope_reps();
    let mut notes = vec![];
    let coprime = reps.iter().all(|u| bipoly::gcd_t(&u.f, &u.g[0]).deg() == 0 && bipoly::gcd_t(&u.f, &bipoly::derivative_t(&u.f)).deg() == 0);
    notes.push(format!("coprime {coprime}"));
    let sys = polysys::central_path_system(e);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    let mut unique = true;
    for _ in 0..10 {
        let mu = rat_frac(rng.gen_range(1..=1000), 1000);
        let tags = urs::classify_all(e, reps, &mu).map_err(|e| e.to_string())?;
        unique &= tags.iter().filter(|t| t.tag.tag == Tag::Central).count() == 1;
        let (ri, sigma) = urs::central_branch(e, reps, &mu).map_err(|e| e.to_string())?;
        let ap = urs::associated_point(&reps[ri], &sigma, &mu, 256).map_err(|e| e.to_string())?;
        let mut pt = vec![mu.clone()];
        pt.extend(ap.coords.iter().map(from_float));
        for r in sys.eval(&pt) {
            worst = worst.max(to_f64(&r).abs());
        }
    }
    notes.push(format!("residual {worst:.1e}"));
    notes.push(format!("unique central {unique}"));
    let mut hom = true;
    for _ in 0..50 {
        let mut mk = || BiPoly::new((0..3).map(|_| QPoly::from_ints(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)])).collect());
        let (p, q) = (mk(), mk());
        let (lp, lq) = (bipoly::limit_at_order(&p, 0), bipoly::limit_at_order(&q, 0));
        hom &= bipoly::limit_at_order(&p.mul(&q), 0) == lp.mul(&lq) && bipoly::limit_at_order(&p.add(&q), 0) == lp.add(&lq);
    }
    notes.push(format!("lim homomorphism {hom}"));
    let rr = elliptope_rate();
    let convex = [&rr.x.polygon, &rr.s.polygon].iter().all(|p| hull_is_convex(p));
    notes.push(format!("polygon convex {convex}"));
    let log = elliptope_trace();
    let gap = log
        .points
        .iter()
        .map(|p| (p.duality_gap().to_f64() - 3.0 * p.mu.to_f64()).abs() / p.mu.to_f64())
        .fold(0.0, f64::max);
    notes.push(format!("gap rel {gap:.1e}"));
    let s = notes.join(", ");
    if coprime && worst < 1e-20 && unique && hom && convex && gap < 1e-12 {
        Ok(s)
    } else {
        Err(s)
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit_secs: f64,
    run: fn() -> Check,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "exact cubic recovery", limit_secs: 60.0, run: c1 },
    Criterion { id: 2, name: "discriminant identity", limit_secs: 5.0, run: c2 },
    Criterion { id: 3, name: "limit point exactness", limit_secs: 30.0, run: c3 },
    Criterion { id: 4, name: "convergence table reproduction", limit_secs: 300.0, run: c4 },
    Criterion { id: 5, name: "rate agreement", limit_secs: 300.0, run: c5 },
    Criterion { id: 6, name: "generic lower bound", limit_secs: 600.0, run: c6 },
    Criterion { id: 7, name: "khachiyan decay", limit_secs: 900.0, run: c7 },
    Criterion { id: 8, name: "strict complementarity contrast", limit_secs: 120.0, run: c8 },
    Criterion { id: 9, name: "eigenvalue classes", limit_secs: 120.0, run: c9 },
    Criterion { id: 10, name: "degree accounting", limit_secs: 120.0, run: c10 },
    Criterion { id: 11, name: "invariant suites", limit_secs: 600.0, run: c11 },
];

fn main() {
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in CRITERIA.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let t0 = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        let (pass, detail) = match out {
            Ok(d) if secs <= c.limit_secs => (true, d),
            Ok(d) => (false, format!("{d} (over the {}s limit)", c.limit_secs)),
            Err(d) => (false, d),
        };
        ran += 1;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {} [{:.1}s]: {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            secs,
            detail
        );
    }
    println!("acceptance: {} of {} criteria passed", ran - failed, ran);
    if failed > 0 {
        std::process::exit(1);
    }
}
