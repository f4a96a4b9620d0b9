use mockperiods::eichler::GroupElement;
use mockperiods::kernel::{laplace_fd, pi, Complex, PrecisionContext};
use mockperiods::poincare::{
    laplace_eigenvalue, phi_seed, q_seed, truncated_poincare, verify_termwise_dipoincare, verify_termwise_xi,
    verify_xi_chain, CosetTruncation, Level,
};
use mockperiods::qforms::{cusp_form, delta};
use mockperiods::report::scaled_residual;
use mockperiods::special::cal_m;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn c(re: f64, im: f64) -> Complex {
    Complex::from_f64(ctx().prec(), re, im)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn truncation_enumerates_coprime_pairs() {
    for bound in [0u32, 1, 2, 7, 12] {
        let t = CosetTruncation::new(bound);
        let cb = bound as i64;
        let mut expected = vec![(0, 1)];
        for cc in 1..=cb {
            for d in -cb..=cb {
                if gcd(cc, d) == 1 {
                    expected.push((cc, d));
                }
            }
        }
        let got: Vec<_> = t.bottom_rows().collect();
        assert_eq!(got, expected, "bound {bound}");
        for g in t.representatives() {
            let [a, b, cc, d] = g.entries();
            assert_eq!(a * d - b * cc, 1);
        }
    }
}

#[test]
fn identity_only_truncation_returns_the_seed() {
    let ctx = ctx();
    let t = CosetTruncation::new(0);
    assert_eq!(t.len(), 1);
    let s = ctx.float(6.0);
    let z = c(0.3, 1.2);
    let seed = |w: &Complex| phi_seed(-10, 1, &s, w, &ctx);
    let sum = truncated_poincare(-10, seed, &z, &t).unwrap();
    assert_eq!(sum, seed(&z).unwrap());
}

#[test]
fn seed_is_a_laplace_eigenfunction() {
    let ctx = ctx();
    for (k, s, m, z) in [(-10, 6.0, 1, c(0.0, 1.0)), (-10, 3.5, 1, c(0.2, 1.1)), (4, 2.75, -2, c(-0.4, 0.9))] {
        let s = ctx.float(s);
        let f = |w: &Complex| phi_seed(k, m, &s, w, &ctx);
        let lap = laplace_fd(f, k, &z, &ctx).unwrap();
        let rhs = f(&z).unwrap().scale(&laplace_eigenvalue(k, &s));
        let r = scaled_residual(&lap, &rhs);
        assert!(r <= ctx.tol_fd, "k = {k}, m = {m}: {r:e}");
    }
}

#[test]
fn seed_is_periodic() {
    let ctx = ctx();
    let s = ctx.float(6.0);
    for m in [-2i64, 1, 3] {
        let z = c(0.37, 0.8);
        let a = phi_seed(-10, m, &s, &z, &ctx).unwrap();
        let b = phi_seed(-10, m, &s, &z.add_real(&ctx.float(1.0)), &ctx).unwrap();
        assert!((&a - &b).abs_f64() <= 1e-40 * a.abs_f64().max(1.0));
    }
}

// 𝓜^{2−k}_{k/2}(u) = u^{k−1} e^{−u/2} (k−1) ∫₀¹ t^{k−2} e^{ut} dt, the integral
// by the finite recursion I_n = (e^u − n I_{n−1})/u.
fn collapsed_cal_m(k: i32, u: f64, prec: u32) -> Float {
    let u = Float::with_val(prec, u);
    let eu = Float::with_val(prec, u.exp_ref());
    let mut i = Float::with_val(prec, &eu - 1u32) / &u;
    for n in 1..=(k - 2) {
        i = (Float::with_val(prec, &eu) - i * n) / &u;
    }
    let pw = Float::with_val(prec, u.clone().pow(k - 1));
    let ex = Float::with_val(prec, (-Float::with_val(prec, &u / 2u32)).exp_ref());
    pw * ex * i * (k - 1)
}

#[test]
fn positive_index_seed_collapses_to_elementary_form() {
    let ctx = ctx();
    for k in [4, 12, 16] {
        for u in [0.5, 1.0, 3.0, 12.0] {
            let got = cal_m(2 - k, &(ctx.float(k as f64) / 2u32), &ctx.float(u), &ctx).unwrap();
            let want = collapsed_cal_m(k, u, ctx.prec() + 200);
            let rel = (Float::with_val(ctx.prec(), &got - &want) / &want).abs().to_f64();
            assert!(rel < 1e-40, "k = {k}, u = {u}: {rel:e}");
        }
    }
}

#[test]
fn maass_poincare_truncations_stabilize() {
    let ctx = ctx();
    let s = ctx.float(6.0);
    let z = c(0.0, 2.0);
    let seed = |w: &Complex| phi_seed(-10, 1, &s, w, &ctx);
    let sums: Vec<Complex> = [10u32, 20, 40]
        .iter()
        .map(|&b| truncated_poincare(-10, seed, &z, &CosetTruncation::new(b)).unwrap())
        .collect();
    let d1 = (&sums[0] - &sums[1]).abs_f64();
    let d2 = (&sums[1] - &sums[2]).abs_f64();
    assert!(d2 < d1, "{d1:e} then {d2:e}");
    // |term| ≤ (4πy)^{11} e^{2π Im γz} |cz+d|^{−12}, from 1F1(11; 12; u) ≤ e^u.
    let y = 2.0f64;
    let bound = |lo: u32, hi: u32| -> f64 {
        let inner = CosetTruncation::new(lo);
        let inner: std::collections::HashSet<_> = inner.bottom_rows().collect();
        CosetTruncation::new(hi)
            .bottom_rows()
            .filter(|r| !inner.contains(r))
            .map(|(cc, d)| {
                let j2 = (cc * cc) as f64 * y * y + (d * d) as f64;
                (4.0 * std::f64::consts::PI * y).powi(11) * (2.0 * std::f64::consts::PI * y / j2).exp() * j2.powi(-6)
            })
            .sum()
    };
    assert!(d1 <= bound(10, 20), "{d1:e} vs {:e}", bound(10, 20));
    assert!(d2 <= bound(20, 40), "{d2:e} vs {:e}", bound(20, 40));
}

#[test]
fn truncated_sum_is_coset_stable() {
    let ctx = ctx();
    let s = ctx.float(6.0);
    let t = CosetTruncation::new(6);
    let seed = |w: &Complex| phi_seed(-10, 1, &s, w, &ctx);
    let z = c(0.21, 0.7);
    let a = truncated_poincare(-10, seed, &z, &t).unwrap();
    // Left translates T^n γ pick other representatives of the same cosets.
    let moved = t
        .representatives()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let h = GroupElement::translation(i as i64 % 5 - 2) * *g;
            &seed(&h.act(&z)).unwrap() * &h.j(&z).powi(10)
        })
        .fold(Complex::zero(ctx.prec()), |acc, v| acc + v);
    assert!(scaled_residual(&a, &moved) < 1e-40);
    // z ↦ z + 1 shifts the d-window by c: the sum over {γT} at z.
    let shifted = t
        .representatives()
        .iter()
        .map(|g| {
            let h = *g * GroupElement::T;
            &seed(&h.act(&z)).unwrap() * &h.j(&z).powi(10)
        })
        .fold(Complex::zero(ctx.prec()), |acc, v| acc + v);
    let b = truncated_poincare(-10, seed, &z.add_real(&ctx.float(1.0)), &t).unwrap();
    assert!(scaled_residual(&b, &shifted) < 1e-40);
}

#[test]
fn truncated_sum_growth_is_sane() {
    let ctx = ctx();
    let s = ctx.float(6.0);
    let t = CosetTruncation::new(8);
    let cb = t.bound() as f64;
    let seed = |w: &Complex| phi_seed(-10, 1, &s, w, &ctx);
    for y in 1..=5 {
        let z = c(0.0, y as f64);
        let sum = truncated_poincare(-10, seed, &z, &t).unwrap();
        let own = seed(&z).unwrap().abs_f64();
        let max_term = t.representatives()[1..]
            .iter()
            .map(|g| (&seed(&g.act(&z)).unwrap() * &g.j(&z).powi(10)).abs_f64())
            .fold(0.0, f64::max);
        assert!(sum.abs_f64() <= own + cb * cb * max_term, "y = {y}");
    }
}

#[test]
fn classical_poincare_seed_is_q_power() {
    let ctx = ctx();
    let z = c(0.1, 0.9);
    let q = q_seed(3, &z);
    let two_pi = Float::with_val(ctx.prec(), pi(ctx.prec()) * 2u32);
    let modulus = Float::with_val(ctx.prec(), -Float::with_val(ctx.prec(), &two_pi * 3u32) * 0.9f64).exp();
    assert!((q.abs() - modulus).abs().to_f64() < 1e-45);
}

#[test]
fn xi_of_psi_is_the_weight_2_minus_k_seed() {
    let ctx = ctx();
    let pts = [c(0.0, 1.0), c(0.3, 0.8), c(-0.45, 1.7)];
    for (k, m) in [(12, 1), (12, 2), (4, 1), (16, 3)] {
        let r = verify_termwise_xi(k, m, Level::Seed, &pts, &ctx).unwrap();
        assert!(r.pass, "{} {:e}", r.identity, r.max_residual);
    }
}

#[test]
fn xi_of_psi_matches_after_truncation() {
    let ctx = ctx();
    let t = CosetTruncation::new(10);
    let r = verify_termwise_xi(12, 1, Level::Truncated(&t), &[c(0.0, 2.0)], &ctx).unwrap();
    assert!(r.pass, "{:e}", r.max_residual);
}

#[test]
fn xi_of_negative_index_seed_is_q_power() {
    let ctx = ctx();
    let pts = [c(0.0, 1.0), c(0.25, 0.6), c(-0.3, 1.4)];
    for m in [1, 3] {
        let r = verify_termwise_dipoincare(12, m, Level::Seed, &pts, &ctx).unwrap();
        assert!(r.pass, "m = {m}: {:e}", r.max_residual);
    }
    let t = CosetTruncation::new(10);
    let r = verify_termwise_dipoincare(12, 1, Level::Truncated(&t), &[c(0.0, 1.5)], &ctx).unwrap();
    assert!(r.pass, "{:e}", r.max_residual);
}

#[test]
fn termwise_checks_reject_bad_indices() {
    let ctx = ctx();
    let pts = [c(0.0, 1.0)];
    assert!(verify_termwise_xi(12, 0, Level::Seed, &pts, &ctx).is_err());
    assert!(verify_termwise_dipoincare(11, 1, Level::Seed, &pts, &ctx).is_err());
    assert!(phi_seed(12, 0, &ctx.float(6.0), &pts[0], &ctx).is_err());
}

#[test]
fn bol_of_xi_image_is_scaled_conjugate_form() {
    let ctx = ctx();
    let pts = [c(0.0, 1.0), c(0.3, 0.8), c(-0.2, 1.3), c(0.45, 0.6), c(0.1, 2.0)];
    for f in [delta(60).unwrap(), cusp_form(16, 60).unwrap()] {
        for r in verify_xi_chain(&f, &pts, &ctx).unwrap() {
            assert!(r.pass, "{}: {:e}", r.identity, r.max_residual);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn seed_eigenvalue_holds_off_the_axis(x in -0.5f64..0.5, y in 0.7f64..2.0, s in 1.6f64..4.0) {
        let ctx = ctx();
        let z = c(x, y);
        let s = ctx.float(s);
        let f = |w: &Complex| phi_seed(-2, 1, &s, w, &ctx);
        let lap = laplace_fd(f, -2, &z, &ctx).unwrap();
        let rhs = f(&z).unwrap().scale(&laplace_eigenvalue(-2, &s));
        prop_assert!(scaled_residual(&lap, &rhs) <= ctx.tol_fd);
    }

    #[test]
    fn truncation_has_one_rep_per_coset(bound in 1u32..15) {
        let rows: Vec<_> = CosetTruncation::new(bound).bottom_rows().collect();
        let set: std::collections::HashSet<_> = rows.iter().flat_map(|&(a, b)| [(a, b), (-a, -b)]).collect();
        prop_assert_eq!(set.len(), 2 * rows.len());
    }
}
