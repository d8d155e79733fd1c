use exactalg::bipoly::{self, BiPoly};
use exactalg::rat::{rat, sign};
use exactalg::resultant::{det_bareiss, resultant, sylvester};
use exactalg::roots::{isolate_real_roots, thom_cmp};
use exactalg::{QPoly, Rat};
use proptest::prelude::*;
use rug::Float;
use std::cmp::Ordering;

const PREC: u32 = 256;

fn qpoly(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

// Weierstrass/Durand-Kerner iteration, kept separate from the library's root finder.
fn numeric_roots(p: &QPoly) -> Vec<(Float, Float)> {
    let n = p.deg();
    let lc = exactalg::rat::to_float(&p.lc(), PREC);
    let c: Vec<Float> = p.coeffs().iter().map(|a| exactalg::rat::to_float(a, PREC) / &lc).collect();
    let mut z: Vec<(Float, Float)> = (0..n)
        .map(|k| {
            let ang = 0.7 + 6.283185307179586 * k as f64 / n as f64;
            let r = 1.3f64;
            (Float::with_val(PREC, r * ang.cos()), Float::with_val(PREC, r * ang.sin()))
        })
        .collect();
    let mul = |a: &(Float, Float), b: &(Float, Float)| {
        (
            Float::with_val(PREC, &a.0 * &b.0) - Float::with_val(PREC, &a.1 * &b.1),
            Float::with_val(PREC, &a.0 * &b.1) + Float::with_val(PREC, &a.1 * &b.0),
        )
    };
    for _ in 0..3000 {
        let mut delta = Float::with_val(PREC, 0);
        for i in 0..n {
            let mut v = (Float::with_val(PREC, 1), Float::with_val(PREC, 0));
            // monic evaluation
            let mut acc = (Float::with_val(PREC, 1), Float::with_val(PREC, 0));
            for a in c[..n].iter().rev() {
                acc = mul(&acc, &z[i]);
                acc.0 += a;
            }
            for j in 0..n {
                if j != i {
                    let d = (Float::with_val(PREC, &z[i].0 - &z[j].0), Float::with_val(PREC, &z[i].1 - &z[j].1));
                    v = mul(&v, &d);
                }
            }
            let den = Float::with_val(PREC, v.0.square_ref()) + Float::with_val(PREC, v.1.square_ref());
            let q = (
                (Float::with_val(PREC, &acc.0 * &v.0) + Float::with_val(PREC, &acc.1 * &v.1)) / &den,
                (Float::with_val(PREC, &acc.1 * &v.0) - Float::with_val(PREC, &acc.0 * &v.1)) / &den,
            );
            let m = Float::with_val(PREC, q.0.abs_ref()) + Float::with_val(PREC, q.1.abs_ref());
            if m > delta {
                delta = m;
            }
            z[i].0 -= &q.0;
            z[i].1 -= &q.1;
        }
        if delta < 1e-70 {
            break;
        }
    }
    z
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
    (1..=max_deg)
        .prop_flat_map(|d| (prop::collection::vec(-9i64..=9, d), 1i64..=9, any::<bool>()))
        .prop_map(|(mut c, l, neg)| {
            c.push(if neg { -l } else { l });
            qpoly(&c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_root_count_matches_numeric(p in nonzero_poly(8)) {
        prop_assume!(p.gcd(&p.derivative()).is_constant());
        let roots = isolate_real_roots(&p);
        let num = numeric_roots(&p);
        let real = num.iter().filter(|(_, im)| Float::with_val(PREC, im.abs_ref()) < 1e-40).count();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, real);
        prop_assert_eq!((p.deg() - real) % 2, 0);
    }

    #[test]
    fn thom_order_agrees_with_interval_order(p in nonzero_poly(8)) {
        let roots = isolate_real_roots(&p);
        for w in roots.windows(2) {
            prop_assert!(w[0].hi <= w[1].lo);
            prop_assert_eq!(thom_cmp(&w[0].thom, &w[1].thom), Ordering::Less);
        }
        let encs: std::collections::HashSet<_> = roots.iter().map(|r| r.thom.signs.clone()).collect();
        prop_assert_eq!(encs.len(), roots.len());
        for r in &roots {
            prop_assert_eq!(r.thom.signs[0], 0);
        }
    }

    #[test]
    fn squarefree_is_idempotent(a in nonzero_poly(4), b in nonzero_poly(3)) {
        let p = a.mul(&a).mul(&b);
        let s = p.squarefree();
        prop_assert_eq!(s.squarefree(), s.clone());
        prop_assert_eq!(isolate_real_roots(&s).len(), isolate_real_roots(&p).len());
    }

    #[test]
    fn resultant_equals_sylvester_determinant(a in nonzero_poly(5), b in nonzero_poly(5)) {
        prop_assert_eq!(resultant(&a, &b), det_bareiss(&sylvester(&a, &b)));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        c in prop::collection::vec(-5i64..=5, 4),
        d in prop::collection::vec(-5i64..=5, 4),
        mu0 in -6i64..=6,
        share in any::<bool>(),
    ) {
        // p = (T - c0 - c1 mu)(T^2 + c2 T + c3 mu), q = (T - d0 - d1 mu or shared)(T + d2 + d3 mu)
        let lin = |a: i64, b: i64| BiPoly::new(vec![QPoly::from_ints(&[-a, -b]), QPoly::from_ints(&[1])]);
        let p1 = lin(c[0], c[1]);
        let p2 = BiPoly::new(vec![QPoly::from_ints(&[0, c[3]]), QPoly::from_ints(&[c[2]]), QPoly::from_ints(&[1])]);
        let q1 = if share { p1.clone() } else { lin(d[0], d[1]) };
        let q2 = lin(-d[2], -d[3]);
        let p = p1.mul(&p2);
        let q = q1.mul(&q2);
        let r = resultant(&p, &q);
        let m = rat(mu0);
        let ps = bipoly::specialize(&p, &m);
        let qs = bipoly::specialize(&q, &m);
        let common = !ps.gcd(&qs).is_constant();
        prop_assert_eq!(sign(&r.eval(&m)) == 0, common);
    }

    #[test]
    fn limit_is_ring_homomorphism(
        a in prop::collection::vec(-4i64..=4, 6),
        b in prop::collection::vec(-4i64..=4, 6),
    ) {
        let mk = |v: &[i64]| BiPoly::new(vec![
            QPoly::from_ints(&v[0..2]), QPoly::from_ints(&v[2..4]), QPoly::from_ints(&v[4..6]),
        ]);
        let (p, q) = (mk(&a), mk(&b));
        prop_assume!(!p.is_zero() && !q.is_zero());
        let lp = bipoly::limit_at_order(&p, 0);
        let lq = bipoly::limit_at_order(&q, 0);
        prop_assert_eq!(bipoly::limit_at_order(&p.mul(&q), 0), lp.mul(&lq));
        prop_assert_eq!(bipoly::limit_at_order(&p.add(&q), 0), lp.add(&lq));
        let op = bipoly::mu_order(&p).unwrap();
        let oq = bipoly::mu_order(&q).unwrap();
        prop_assert_eq!(bipoly::mu_order(&p.mul(&q)).unwrap(), op + oq);
        prop_assert_eq!(
            bipoly::normalized_limit(&p.mul(&q)).unwrap(),
            bipoly::normalized_limit(&p).unwrap().mul(&bipoly::normalized_limit(&q).unwrap())
        );
    }
}

#[test]
fn example_cubic_resultant_is_discriminant_multiple() {
    let f = bipoly::parse("2*T^3 + 2*T^2 - 1/2*mu*T^2 - mu*T - 2*T - 2").unwrap();
    let r = resultant(&f, &f.derivative());
    let target = QPoly::new(vec![rat(0), rat(128), rat(21), rat(6), Rat::new(1.into(), 4.into())]);
    let (q, rem) = r.div_rem(&target);
    assert!(rem.is_zero() && q.is_constant());
}
