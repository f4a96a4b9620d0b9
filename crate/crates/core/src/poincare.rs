//! Seeds of Maass–Poincaré series, truncated coset sums, and the termwise
//! checks that follow because `ξ` and `D^{k−1}` commute with the slash action.

use rug::Float;

use crate::eichler::{pointwise_report, GroupElement};
use crate::error::{Error, Result};
use crate::kernel::complex::powi_real;
use crate::kernel::{laplace_fd, pi, xi_fd, Complex, PrecisionContext};
use crate::mockcore::{F2Method, MockPeriods};
use crate::qforms::{NumericSeries, QSeries};
use crate::report::{scaled_residual, RelationReport};
use crate::special::{cal_m, e_of, psi_seed};

/// Representatives of `Γ_∞\Γ` with bottom row `(c, d)`, `0 < c ≤ C`, `|d| ≤ C`,
/// plus the identity.
///
/// Weights are even throughout, so `±γ` act alike and only `c ≥ 0` is kept.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetTruncation {
    bound: u32,
    reps: Vec<GroupElement>,
}

impl CosetTruncation {
    pub fn new(bound: u32) -> Self {
        let cb = bound as i64;
        let mut reps = vec![GroupElement::IDENTITY];
        for c in 1..=cb {
            for d in -cb..=cb {
                if let Some(g) = completion(c, d) {
                    reps.push(g);
                }
            }
        }
        Self { bound, reps }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn representatives(&self) -> &[GroupElement] {
        &self.reps
    }

    /// Bottom rows `(c, d)` in enumeration order.
    pub fn bottom_rows(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.reps.iter().map(|g| {
            let [_, _, c, d] = g.entries();
            (c, d)
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Some `[[a, b], [c, d]] ∈ SL₂(ℤ)`, or `None` when `gcd(c, d) ≠ 1`.
fn completion(c: i64, d: i64) -> Option<GroupElement> {
    // Extended Euclid on (d, c): a·d − b·c = 1.
    let (mut r0, mut r1) = (d, c);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    // s0·d + t0·c = r0 = ±1.
    match r0 {
        1 => GroupElement::new(s0, -t0, c, d).ok(),
        -1 => GroupElement::new(-s0, t0, c, d).ok(),
        _ => None,
    }
}

fn check_upper(z: &Complex) -> Result<()> {
    if z.im <= 0 {
        return Err(Error::DomainError(format!("Im z must be positive, got {z:.6}")));
    }
    Ok(())
}

/// `φ_{m,s}(z) = 𝓜^k_s(4πmy) e(mx)`.
pub fn phi_seed(k: i32, m: i64, s: &Float, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if m == 0 {
        return Err(Error::DomainError("phi_seed needs m != 0".into()));
    }
    check_upper(z)?;
    let p = ctx.prec();
    let u = Float::with_val(p, &z.im * pi(p)) * (4 * m);
    let radial = cal_m(k, s, &u, ctx)?;
    Ok(e_of(&Float::with_val(p, &z.re * m)).scale(&radial))
}

/// `qᵐ`, the seed of the classical Poincaré series.
pub fn q_seed(m: i64, z: &Complex) -> Complex {
    let p = z.prec();
    let two_pi_i = Complex::new(Float::new(p), pi(p) * 2u32);
    (&two_pi_i * &z.scale_int(m)).exp()
}

/// `Σ_γ seed|_weight γ (z)` over the representatives of `trunc`.
pub fn truncated_poincare<F>(weight: i32, seed: F, z: &Complex, trunc: &CosetTruncation) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    check_upper(z)?;
    trunc.reps.iter().try_fold(Complex::zero(z.prec()), |acc, g| {
        Ok(acc + &seed(&g.act(z))? * &g.j(z).powi(-(weight as i64)))
    })
}

/// Whether an identity is checked on seeds or on matched truncated sums.
#[derive(Clone, Copy, Debug)]
pub enum Level<'a> {
    Seed,
    Truncated(&'a CosetTruncation),
}

impl Level<'_> {
    fn lift<'s, F>(self, weight: i32, seed: F) -> impl Fn(&Complex) -> Result<Complex> + 's
    where
        F: Fn(&Complex) -> Result<Complex> + 's,
        Self: 's,
    {
        move |z: &Complex| match self {
            Level::Seed => seed(z),
            Level::Truncated(t) => truncated_poincare(weight, &seed, z, t),
        }
    }

    fn tag(&self) -> String {
        match self {
            Level::Seed => "seed".into(),
            Level::Truncated(t) => format!("C = {}", t.bound),
        }
    }
}

fn check_index(k: i32, m: i64) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    if m <= 0 {
        return Err(Error::DomainError(format!("index m must be positive, got {m}")));
    }
    Ok(())
}

/// Context for differentiating a function of size `10^e` by finite
/// differences: the step shrinks by `10^{−e}` and the precision grows by `3e`
/// digits, so both the truncation error `h²|f|` and the rounding error stay
/// where they are for functions of size 1.
fn boosted(ctx: &PrecisionContext, size: f64) -> PrecisionContext {
    let extra = size.log10().max(0.0).ceil() as u32;
    PrecisionContext {
        digits: ctx.digits + 3 * extra,
        fd_step: ctx.fd_step * 10f64.powi(-(extra as i32)),
        ..ctx.clone()
    }
}

/// `D_weight(lhs)(z) = rhs(z)` at every point, with `D` a finite-difference
/// operator and both sides lifted to `level`.
#[allow(clippy::too_many_arguments)]
fn fd_identity<D, L, R>(
    identity: String,
    op: D,
    lhs_weight: i32,
    rhs_weight: i32,
    level: Level<'_>,
    lhs: L,
    rhs: R,
    pts: &[Complex],
    ctx: &PrecisionContext,
) -> Result<RelationReport>
where
    D: Fn(&dyn Fn(&Complex) -> Result<Complex>, &Complex, &PrecisionContext) -> Result<Complex>,
    L: Fn(&Complex, &PrecisionContext) -> Result<Complex>,
    R: Fn(&Complex, &PrecisionContext) -> Result<Complex>,
{
    let residuals = pts
        .iter()
        .map(|z| {
            let size = level.lift(lhs_weight, |w: &Complex| lhs(w, ctx))(z)?.abs_f64().max(lhs(z, ctx)?.abs_f64());
            let inner = boosted(ctx, size);
            let z = z.with_prec(inner.prec());
            let f = level.lift(lhs_weight, |w: &Complex| lhs(w, &inner));
            let l = op(&f, &z, &inner)?;
            let r = level.lift(rhs_weight, |w: &Complex| rhs(w, &inner))(&z)?;
            Ok(scaled_residual(&l, &r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationReport::new(identity, pts.to_vec(), residuals, ctx.tol_fd))
}

/// `ξ_k ψ_{−m} = (4πm)^{1−k} φ_{m,k/2}` at weight `2−k`, seedwise or after
/// summing both sides over the same cosets.
pub fn verify_termwise_xi(k: i32, m: i64, level: Level<'_>, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    check_index(k, m)?;
    fd_identity(
        format!("xi_{k} P_{{{k},2}}(-{m}) = (4 pi {m})^{} P_{{{}}}({m}, {k}/2) [{}]", 1 - k, 2 - k, level.tag()),
        |f, z, c| xi_fd(f, k, z, c),
        k,
        2 - k,
        level,
        |w, c| psi_seed(k, -m, w, c),
        |w, c| {
            let p = c.prec();
            let factor = powi_real(&Float::with_val(p, pi(p) * (4 * m)), 1 - k);
            Ok(phi_seed(2 - k, m, &(Float::with_val(p, k) / 2u32), w, c)?.scale(&factor))
        },
        pts,
        ctx,
    )
}

/// `ξ_{2−k} φ_{−m,k/2} = (k−1)(4πm)^{k−1} qᵐ`, seedwise or after summing both
/// sides over the same cosets.
pub fn verify_termwise_dipoincare(k: i32, m: i64, level: Level<'_>, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    check_index(k, m)?;
    fd_identity(
        format!("xi_{} P_{{{}}}(-{m}, {k}/2) = {}(4 pi {m})^{} P_{k}({m}) [{}]", 2 - k, 2 - k, k - 1, k - 1, level.tag()),
        |f, z, c| xi_fd(f, 2 - k, z, c),
        2 - k,
        k,
        level,
        |w, c| phi_seed(2 - k, -m, &(Float::with_val(c.prec(), k) / 2u32), w, c),
        |w, c| {
            let p = c.prec();
            let factor = powi_real(&Float::with_val(p, pi(p) * (4 * m)), k - 1) * (k - 1);
            Ok(q_seed(m, w).scale(&factor))
        },
        pts,
        ctx,
    )
}

/// The laplacian eigenvalue `s(1−s) + (k² − 2k)/4` of `φ_{m,s}` at weight `k`.
pub fn laplace_eigenvalue(k: i32, s: &Float) -> Float {
    let p = s.prec();
    let ss = Float::with_val(p, s * Float::with_val(p, 1 - s.clone()));
    ss + Float::with_val(p, k * k - 2 * k) / 4u32
}

/// `Δ_k φ_{m,s} = (s(1−s) + (k² − 2k)/4) φ_{m,s}` by finite differences.
pub fn verify_laplace_eigen(k: i32, m: i64, s: &Float, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    let lambda = laplace_eigenvalue(k, s);
    fd_identity(
        format!("Delta_{k} phi_{{{m},{}}} = {} phi", s.to_f64(), lambda.to_f64()),
        |f, z, c| laplace_fd(f, k, z, c),
        k,
        k,
        Level::Seed,
        |w, c| phi_seed(k, m, &Float::with_val(c.prec(), s), w, c),
        |w, c| {
            let s = Float::with_val(c.prec(), s);
            Ok(phi_seed(k, m, &s, w, c)?.scale(&laplace_eigenvalue(k, &s)))
        },
        pts,
        ctx,
    )
}

/// `ξ_k F_{f,2} = Σ −conj(b(n)) (4πn)^{1−k} qⁿ` read off the expansion
/// `F_{f,2} = Σ b(n) Γ(1−k, 4πny) q^{−n}` with `b(n) = (k−2)! a(n)`.
pub fn xi_image_series(f: &QSeries, ctx: &PrecisionContext) -> Result<NumericSeries> {
    let k = f.weight();
    if !f.is_cuspidal() || k < 4 {
        return Err(Error::DomainError("xi image series needs a cusp form".into()));
    }
    let p = ctx.prec();
    let s = f.numeric(ctx);
    let fact = factorial(k as u32 - 2, p);
    let four_pi = Float::with_val(p, pi(p) * 4u32);
    let coeffs = (s.n_min..)
        .zip(&s.coeffs)
        .map(|(n, a)| {
            let w = powi_real(&Float::with_val(p, &four_pi * n), 1 - k) * &fact;
            -a.conj().scale(&w)
        })
        .collect();
    let bound = fact.to_f64() * (4.0 * std::f64::consts::PI).powi(1 - k);
    let tail = s.tail.rescaled(bound, (1 - k) as f64);
    Ok(NumericSeries::new(2 - k, s.n_min, coeffs, tail, false))
}

/// The chain `ξ_k F_{f,2} = (2i)^{1−k} F^c_f` followed by the symbolic
/// `D^{k−1}`, ending at `−(k−2)!/(4π)^{k−1} f^c`.
///
/// Three reports: the finite-difference `ξ_k` of `F_{f,2}` against the
/// symbolic image, that image against `(2i)^{1−k} conj(F_f(−z̄))`, and its
/// `D^{k−1}` against the scaled `f^c`.
pub fn verify_xi_chain(f: &QSeries, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
    let k = f.weight();
    let p = ctx.prec();
    let image = xi_image_series(f, ctx)?;
    let periods = MockPeriods::new(f, ctx)?;
    let two_i = Complex::new(Float::new(p), Float::with_val(p, 2));
    let pref = two_i.powi(1 - k as i64);
    let fd = pointwise_report(
        "xi_k F_{f,2} (finite differences) = symbolic q-series image",
        |z| xi_fd(|w: &Complex| periods.f_f2(w, F2Method::Termwise, ctx), k, z, ctx),
        |z| image.sum_at(z, ctx),
        pts,
        ctx.tol_fd,
    )?;
    let eichler = pointwise_report(
        "symbolic xi_k F_{f,2} = (2i)^(1-k) F^c_f",
        |z| image.sum_at(z, ctx),
        |z| Ok(&periods.eichler().evaluate(&-z.conj(), ctx)?.conj() * &pref),
        pts,
        ctx.tol_fd,
    )?;
    let bol = image.bol()?;
    let fc = f.numeric(ctx).conjugate();
    let scale = factorial(k as u32 - 2, p) / powi_real(&Float::with_val(p, pi(p) * 4u32), k - 1);
    let chain = pointwise_report(
        "D^(k-1) xi_k F_{f,2} = -(k-2)!/(4 pi)^(k-1) f^c",
        |z| bol.sum_at(z, ctx),
        |z| Ok(-fc.sum_at(z, ctx)?.scale(&scale)),
        pts,
        ctx.tol_fd,
    )?;
    Ok(vec![fd, eichler, chain])
}

fn factorial(n: u32, p: u32) -> Float {
    Float::with_val(p, Float::factorial(n))
}
