use std::sync::OnceLock;

use mockperiods::eichler::{slash_sum, GroupElement, PolynomialC};
use mockperiods::kernel::xi_fd;
use mockperiods::lfun::{l_completed, l_dirichlet};
use mockperiods::mockcore::{F2Method, MockPeriods, TildeMethod};
use mockperiods::qforms::{cusp_form, delta, GaussRational, QSeries};
use mockperiods::{Complex, Error, PrecisionContext};
use rug::Float;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn c(re: f64, im: f64) -> Complex {
    Complex::from_f64(ctx().prec(), re, im)
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    (a - b).abs_f64() / 1f64.max(a.abs_f64()).max(b.abs_f64())
}

fn delta_periods() -> &'static MockPeriods {
    static M: OnceLock<MockPeriods> = OnceLock::new();
    M.get_or_init(|| MockPeriods::new(&delta(100).unwrap(), &ctx()).unwrap())
}

fn generic_points() -> Vec<Complex> {
    [(0.1, 0.5), (0.9, 0.5), (0.35, 0.8), (0.6, 1.1), (0.2, 1.4), (0.75, 1.7), (0.45, 2.0), (0.15, 2.4), (0.85, 2.7), (0.5, 3.0)]
        .iter()
        .map(|&(x, y)| c(x, y))
        .collect()
}

#[test]
fn f2_termwise_matches_quadrature() {
    let ctx = ctx();
    let m = delta_periods();
    for z in [c(0.0, 1.0), c(0.3, 0.7)] {
        let a = m.f_f2(&z, F2Method::Termwise, &ctx).unwrap();
        let b = m.f_f2(&z, F2Method::Quadrature, &ctx).unwrap();
        assert!(rel(&a, &b) <= ctx.tol_tight, "z = {z}: {a} vs {b}");
    }
}

#[test]
fn f2_is_translation_invariant() {
    let ctx = ctx();
    let m = delta_periods();
    let z = c(0.3, 1.0);
    let z1 = z.add_real(&Float::with_val(ctx.prec(), 1));
    let a = m.f_f2(&z, F2Method::Termwise, &ctx).unwrap();
    let b = m.f_f2(&z1, F2Method::Termwise, &ctx).unwrap();
    assert!(rel(&a, &b) <= ctx.tol_tight);
    let b = m.f_f2(&z1, F2Method::Quadrature, &ctx).unwrap();
    assert!(rel(&a, &b) <= ctx.tol_tight);
}

#[test]
fn zero_form_gives_zero_everywhere() {
    let ctx = ctx();
    let m = MockPeriods::new(&QSeries::zero(12), &ctx).unwrap();
    let z = c(0.2, 1.3);
    assert!(m.f_f2(&z, F2Method::Termwise, &ctx).unwrap().is_zero());
    assert!(m.f_f2(&z, F2Method::Quadrature, &ctx).unwrap().is_zero());
    assert!(m.r_f2(&z, &ctx).unwrap().is_zero());
    for method in [TildeMethod::Closed, TildeMethod::Quadrature] {
        assert!(m.tilde_r_f2(&z, method, &ctx).unwrap().is_zero());
    }
    assert!(m.hat(&z, &ctx).unwrap().is_zero());
    assert!(m.noncritical_lvalue(2, &ctx).unwrap().value.is_zero());
    let pts = [c(0.3, 0.9), c(0.0, 1.5)];
    let r = m.verify_superm(&pts, &ctx).unwrap();
    assert!(r.pass && r.max_residual == 0.0);
    for r in m.verify_mock_es(&pts, &ctx).unwrap() {
        assert!(r.pass && r.max_residual == 0.0);
    }
}

#[test]
fn r_f2_is_holomorphic() {
    let ctx = ctx();
    let m = delta_periods();
    let z = c(1.0, 1.0);
    let f = |w: &Complex| m.r_f2(w, &ctx);
    let xi = xi_fd(f, 12, &z, &ctx).unwrap();
    assert!(xi.abs_f64() <= ctx.tol_fd * 1f64.max(f(&z).unwrap().abs_f64()), "{xi}");
}

#[test]
fn r_f2_rejects_lower_half_plane() {
    let ctx = ctx();
    let e = delta_periods().r_f2(&c(0.1, -1.0), &ctx);
    assert!(matches!(e, Err(Error::DomainError(_))));
}

#[test]
fn tilde_closed_form_matches_quadrature() {
    let ctx = ctx();
    let m = delta_periods();
    for z in [c(0.0, 1.0), c(1.0, 1.0), c(0.5, 2.0), c(-0.3, 0.6), c(0.8, 0.4)] {
        let a = m.tilde_r_f2(&z, TildeMethod::Closed, &ctx).unwrap();
        let b = m.tilde_r_f2(&z, TildeMethod::Quadrature, &ctx).unwrap();
        assert!(rel(&a, &b) <= ctx.tol_tight, "z = {z}: {a} vs {b}");
    }
}

#[test]
fn tilde_decays_like_one_over_y() {
    // At z = iy row n of the double sum is O(y^{−1−n}):
    // y·r̃(iy) = L(1)/(4π) Σ_ℓ C(k−2,ℓ)(−½)^ℓ/(ℓ+1) − (k−2)L(2)/(16π²y) Σ_ℓ C(k−3,ℓ)(−½)^ℓ/(ℓ+2) + O(y^{−2}).
    let ctx = ctx();
    let p = ctx.prec();
    let m = delta_periods();
    let f = delta(100).unwrap();
    let l1 = l_completed(&f, &Complex::from_int(p, 1), &ctx).unwrap().value.re.to_f64();
    let l2 = l_completed(&f, &Complex::from_int(p, 2), &ctx).unwrap().value.re.to_f64();
    let k = 12;
    let binom = |n: i32, j: i32| (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let row = |n: i32, shift: i32| (0..=n).map(|j| binom(n, j) * (-0.5f64).powi(j) / (j + shift) as f64).sum::<f64>();
    let pi = std::f64::consts::PI;
    let lead = l1 / (4.0 * pi) * row(k - 2, 1);
    let next = -((k - 2) as f64) * l2 / (16.0 * pi * pi) * row(k - 3, 2);
    let y_tilde = |y: f64| m.tilde_r_f2(&c(0.0, y), TildeMethod::Closed, &ctx).unwrap().re.to_f64() * y;
    assert!((y_tilde(50.0) - (lead + next / 50.0)).abs() <= 0.01 * lead.abs());
    assert!((y_tilde(5000.0) - lead).abs() <= 0.01 * lead.abs());
    // The leading coefficient is a closed form: Σ_ℓ C(n,ℓ)(−½)^ℓ/(ℓ+1) = 2(1 − 2^{−n−1})/(n+1).
    assert!((row(k - 2, 1) - 2.0 * (1.0 - 2f64.powi(1 - k)) / (k - 1) as f64).abs() < 1e-15);
}

#[test]
fn completion_is_harmonic_with_polynomial_xi_image() {
    let ctx = ctx();
    let m = delta_periods();
    let pts = [c(1.0, 1.0), c(0.2, 0.7), c(-0.4, 1.3), c(0.5, 2.2), c(0.0, 0.9)];
    let harm = m.verify_harmonic(&pts, &ctx).unwrap();
    assert!(harm.pass, "{harm:?}");
    let fams = m.verify_w_k2(&pts, &ctx).unwrap();
    assert!(fams[2].pass, "{:?}", fams[2]);
}

#[test]
fn xi_image_is_rf_for_real_forms() {
    let ctx = ctx();
    let m = delta_periods();
    assert_eq!(m.conjugate_period(), m.period());
    // For i·Δ the ξ-image picks up conj(i) = −i.
    let p = ctx.prec();
    let i_delta = delta(100).unwrap().scale(&GaussRational::i());
    let mi = MockPeriods::new(&i_delta, &ctx).unwrap();
    let z = c(0.3, 1.1);
    let expected = m.xi_image(&z).scale(&Float::with_val(p, -1)).mul_i();
    assert!(rel(&mi.xi_image(&z), &expected) < 1e-40);
    let xi = xi_fd(|w: &Complex| mi.hat(w, &ctx), 12, &z, &ctx).unwrap();
    assert!(rel(&xi, &expected) <= ctx.tol_fd);
}

#[test]
fn xi_image_has_degree_at_most_k_minus_2() {
    // Interpolate ξ(r̂) through k−1 points, check 3 holdouts.
    let ctx = ctx();
    let m = delta_periods();
    let k = 12usize;
    let nodes: Vec<Complex> = (0..k - 1).map(|j| c(-0.5 + 0.1 * j as f64, 1.0 + 0.05 * j as f64)).collect();
    let holdout = [c(0.05, 1.2), c(0.33, 1.5), c(-0.2, 0.9)];
    let xi = |z: &Complex| xi_fd(|w: &Complex| m.hat(w, &ctx), 12, z, &ctx).unwrap();
    let vals: Vec<Complex> = nodes.iter().map(xi).collect();
    let p = ctx.prec();
    let lagrange = |z: &Complex| -> Complex {
        let mut acc = Complex::zero(p);
        for (i, (xi_, vi)) in nodes.iter().zip(&vals).enumerate() {
            let mut basis = Complex::one(p);
            for (j, xj) in nodes.iter().enumerate() {
                if i != j {
                    basis = &basis * &(&(z - xj) / &(xi_ - xj));
                }
            }
            acc += &basis * vi;
        }
        acc
    };
    for z in holdout {
        assert!(rel(&lagrange(&z), &xi(&z)) <= ctx.tol_fd, "{z}");
    }
}

#[test]
fn noncritical_values_match_dirichlet() {
    let ctx = ctx();
    let p = ctx.prec();
    let big = delta(10_000).unwrap();
    let m = delta_periods();
    for order in [0u32, 3] {
        let got = m.noncritical_lvalue(order, &ctx).unwrap();
        let want = l_dirichlet(&big, &Complex::from_int(p, 12 + order as i64), &ctx).unwrap();
        let err = (&got.value - &want.value).abs_f64() / want.value.abs_f64();
        assert!(err <= 1e-8, "m = {order}: {} vs {} ({err:e})", got.value, want.value);
    }
}

#[test]
fn noncritical_order_bound() {
    let ctx = ctx();
    let e = delta_periods().noncritical_lvalue(7, &ctx);
    assert!(matches!(e, Err(Error::DomainError(_))));
}

#[test]
fn superm_holds_for_delta() {
    let ctx = ctx();
    let m = delta_periods();
    let r = m.verify_superm(&generic_points(), &ctx).unwrap();
    assert!(r.pass, "{r:?}");
    let axis = [c(0.0, 0.7), c(0.0, 1.0), c(0.0, 2.5)];
    let r = m.verify_superm(&axis, &ctx).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn completion_lies_in_w() {
    let ctx = ctx();
    let pts = generic_points();
    for fams in [
        delta_periods().verify_w_k2(&pts[..4], &ctx).unwrap(),
        MockPeriods::new(&cusp_form(16, 100).unwrap(), &ctx).unwrap().verify_w_k2(&pts[4..8], &ctx).unwrap(),
    ] {
        assert_eq!(fams.len(), 3);
        for r in fams {
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn mock_es_relations() {
    let ctx = ctx();
    let m = delta_periods();
    let pts = [c(0.0, 1.0), c(1.0, 1.0), c(-0.5, 1.5)];
    for r in m.verify_mock_es(&pts, &ctx).unwrap() {
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn correction_term_carries_the_s_relation() {
    // r_{f,2}|(1+S) = r̃|(1+S) since r̂|(1+S) = 0, so r̃|(1+S) = ∫_0^{i∞} r_f(w)/(w+z)^k dw.
    let ctx = ctx();
    let m = delta_periods();
    let tilde = |z: &Complex| m.tilde_r_f2(z, TildeMethod::Closed, &ctx);
    for z in [c(0.0, 1.0), c(0.4, 0.8)] {
        let (lhs, _) = slash_sum(&tilde, 12, &[GroupElement::IDENTITY, GroupElement::S], &z).unwrap();
        let rhs = m.es_rhs_s(&z, &ctx).unwrap();
        assert!(rel(&lhs, &rhs) <= ctx.tol_tight, "{lhs} vs {rhs}");
    }
}

#[test]
fn pipeline_is_linear_in_f() {
    let ctx = ctx();
    let p = ctx.prec();
    let m = delta_periods();
    let two = MockPeriods::new(&delta(100).unwrap().scale(&GaussRational::from(2)), &ctx).unwrap();
    let double = |x: Complex| x.scale(&Float::with_val(p, 2));
    let z = c(0.25, 0.9);
    let pairs = [
        (two.f_f2(&z, F2Method::Termwise, &ctx).unwrap(), m.f_f2(&z, F2Method::Termwise, &ctx).unwrap()),
        (two.r_f2(&z, &ctx).unwrap(), m.r_f2(&z, &ctx).unwrap()),
        (two.hat(&z, &ctx).unwrap(), m.hat(&z, &ctx).unwrap()),
    ];
    for (a, b) in pairs {
        assert!(rel(&a, &double(b)) <= 2.0 * ctx.tol_tight);
    }
    let pa = two.period();
    let pb: PolynomialC = m.period().scale(&Complex::from_int(p, 2));
    assert!(pa.sub(&pb).max_norm() <= 2.0 * ctx.tol_tight * pb.max_norm());
}
