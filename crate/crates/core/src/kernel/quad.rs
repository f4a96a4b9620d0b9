//! Quadrature along segments and vertical rays in the upper half-plane.
//!
//! Finite pieces use tanh-sinh nodes (clustered at both endpoints, with the
//! endpoint distance stored directly so nothing cancels near an endpoint).
//! The part of a vertical ray above `tail_height` uses Gauss-Legendre panels
//! truncated once the declared exponential decay makes the remainder
//! negligible; with no decay the tail is mapped onto a finite interval.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use super::complex::{pi, Complex};
use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// An integration path.
#[derive(Clone, Debug, PartialEq)]
pub enum RayPath {
    /// From `start` straight up to `i∞`.
    Vertical { start: Complex },
    /// Straight segment between two points.
    Segment { from: Complex, to: Complex },
    /// Consecutive straight segments through the listed vertices.
    Polyline { vertices: Vec<Complex> },
}

impl RayPath {
    pub fn vertical(start: Complex) -> Self {
        RayPath::Vertical { start }
    }

    pub fn segment(from: Complex, to: Complex) -> Self {
        RayPath::Segment { from, to }
    }

    pub fn polyline(vertices: Vec<Complex>) -> Self {
        RayPath::Polyline { vertices }
    }

    /// Checks that every interior point has positive imaginary part.
    pub fn validate(&self) -> Result<()> {
        let seg_ok = |a: &Complex, b: &Complex| {
            let ok = a.im >= 0 && b.im >= 0 && !(a.im.is_zero() && b.im.is_zero());
            if ok {
                Ok(())
            } else {
                Err(Error::BadPath(format!("segment {a:.6} -> {b:.6}")))
            }
        };
        match self {
            RayPath::Vertical { start } => {
                if start.im < 0 || !start.is_finite() {
                    return Err(Error::BadPath(format!("ray start {start:.6}")));
                }
                Ok(())
            }
            RayPath::Segment { from, to } => seg_ok(from, to),
            RayPath::Polyline { vertices } => {
                if vertices.len() < 2 {
                    return Err(Error::BadPath("polyline needs two vertices".into()));
                }
                vertices.windows(2).try_for_each(|w| seg_ok(&w[0], &w[1]))
            }
        }
    }
}

struct TsNode {
    /// Distance 1 − x_j from the node to the nearer endpoint of [−1, 1].
    c: Float,
    /// Weight without the step factor.
    w: Float,
}

type NodeCache = Mutex<HashMap<(u32, u32), Arc<Vec<TsNode>>>>;

fn ts_cache() -> &'static NodeCache {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes first appearing at `level` (step 2^−level); level 0 includes t = 0.
fn ts_nodes(prec: u32, level: u32) -> Arc<Vec<TsNode>> {
    if let Some(v) = ts_cache().lock().unwrap().get(&(prec, level)) {
        return v.clone();
    }
    let half_pi = pi(prec) / 2u32;
    let cutoff = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 16));
    let h = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
    let mut out = Vec::new();
    let (start, stride) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let t = Float::with_val(prec, &h * j);
        let v = Float::with_val(prec, t.sinh_ref()) * &half_pi;
        // 1 − tanh v = 2 / (1 + e^{2v})
        let e2v = Float::with_val(prec, &v * 2u32).exp();
        let c = Float::with_val(prec, 2u32 / Float::with_val(prec, &e2v + 1u32));
        let ch_v = Float::with_val(prec, v.cosh_ref());
        let w = Float::with_val(prec, t.cosh_ref()) * &half_pi / ch_v.square();
        if j > 0 && w < cutoff {
            break;
        }
        out.push(TsNode { c, w });
        j += stride;
        if j > 1 << 22 {
            break;
        }
    }
    let arc = Arc::new(out);
    ts_cache().lock().unwrap().insert((prec, level), arc.clone());
    arc
}

type Integrand<'a> = &'a dyn Fn(&Complex) -> Result<Complex>;

const TS_MIN_LEVEL: u32 = 4;
const TS_MAX_LEVEL: u32 = 12;

/// Tanh-sinh quadrature of `g` over the straight segment [a, b].
fn tanh_sinh(g: Integrand, a: &Complex, b: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let half = (b - a).div_real(&Float::with_val(prec, 2));
    let mid = (a + b).div_real(&Float::with_val(prec, 2));
    let eps = ctx.quad_eps();
    let mut sum = Complex::zero(prec);
    let mut prev: Option<Complex> = None;
    let mut prev_err = f64::INFINITY;
    let mut last_err = f64::INFINITY;
    for level in 0..=TS_MAX_LEVEL {
        for (idx, node) in ts_nodes(prec, level).iter().enumerate() {
            if level == 0 && idx == 0 {
                sum += g(&mid)?.scale(&node.w);
                continue;
            }
            let d = half.scale(&node.c);
            let left = g(&(a + &d))?;
            let right = g(&(b - &d))?;
            sum += (left + right).scale(&node.w);
        }
        let step = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
        let cur = (&sum * &half).scale(&step);
        if !cur.is_finite() {
            return Err(Error::NonConvergent("non-finite tanh-sinh sum".into()));
        }
        if let Some(p) = &prev {
            let err = (&cur - p).abs_f64();
            let scale = 1.0 + cur.abs_f64();
            // Quadratic convergence: the next error is about err²/prev_err.
            let est = if prev_err.is_finite() && prev_err > 0.0 && err < prev_err {
                err.min(err * err / prev_err)
            } else {
                err
            };
            last_err = est / scale;
            if level >= TS_MIN_LEVEL && (err <= eps * scale || est <= eps * 1e-3 * scale) {
                return Ok(cur);
            }
            prev_err = err;
        }
        prev = Some(cur);
    }
    let cur = prev.expect("at least one level");
    if last_err <= ctx.tol_tight {
        Ok(cur)
    } else {
        Err(Error::NonConvergent(format!(
            "tanh-sinh on [{a:.6}, {b:.6}] stalled at relative error {last_err:e}"
        )))
    }
}

type GlCache = Mutex<HashMap<(usize, u32), Arc<Vec<(Float, Float)>>>>;

fn gl_cache() -> &'static GlCache {
    static CACHE: OnceLock<GlCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_n and P_{n−1} at x.
fn legendre_pair(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for j in 2..=n {
        let jf = j as u32;
        let t = Float::with_val(prec, x * &p1) * (2 * jf - 1);
        let p2 = (t - Float::with_val(prec, &p0 * (jf - 1))) / jf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Gauss-Legendre nodes (positive half, with weights) for order `n`.
fn gl_nodes(n: usize, prec: u32) -> Arc<Vec<(Float, Float)>> {
    if let Some(v) = gl_cache().lock().unwrap().get(&(n, prec)) {
        return v.clone();
    }
    let wp = prec + 32;
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let mut out = Vec::with_capacity(n / 2 + 1);
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        for _ in 0..200 {
            let (pn, pm) = legendre_pair(n, &x);
            let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
            let dp = (Float::with_val(wp, &x * &pn) - &pm) * (n as u32) / &x2m1;
            let dx = pn / &dp;
            x -= &dx;
            if dx.abs() < tol {
                break;
            }
        }
        let (pn, pm) = legendre_pair(n, &x);
        let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
        let dp = (Float::with_val(wp, &x * &pn) - &pm) * (n as u32) / &x2m1;
        let one_m = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32 / (one_m * dp.square()));
        out.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    let arc = Arc::new(out);
    gl_cache().lock().unwrap().insert((n, prec), arc.clone());
    arc
}

/// Gauss-Legendre rule for `i ∫_lo^hi g(x0 + i t) dt`.
fn gl_vertical(g: Integrand, x0: &Float, lo: &Float, hi: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let n = ctx.quad_order;
    let half = Float::with_val(prec, hi - lo) / 2u32;
    let mid = Float::with_val(prec, hi + lo) / 2u32;
    let mut sum = Complex::zero(prec);
    let eval = |t: Float| g(&Complex::new(x0.clone(), t));
    for (k, (x, w)) in gl_nodes(n, prec).iter().enumerate() {
        let dx = Float::with_val(prec, &half * x);
        if n % 2 == 1 && k == n / 2 {
            sum += eval(mid.clone())?.scale(w);
            continue;
        }
        let up = eval(Float::with_val(prec, &mid + &dx))?;
        let dn = eval(Float::with_val(prec, &mid - &dx))?;
        sum += (up + dn).scale(w);
    }
    Ok(sum.scale(&half).mul_i())
}

const GL_MAX_DEPTH: u32 = 14;

#[allow(clippy::too_many_arguments)]
fn gl_adaptive(
    g: Integrand,
    x0: &Float,
    lo: &Float,
    hi: &Float,
    whole: Complex,
    tol: f64,
    depth: u32,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let prec = ctx.prec();
    let mid = Float::with_val(prec, hi + lo) / 2u32;
    let left = gl_vertical(g, x0, lo, &mid, ctx)?;
    let right = gl_vertical(g, x0, &mid, hi, ctx)?;
    let halves = &left + &right;
    let diff = (&halves - &whole).abs_f64();
    if diff <= tol {
        return Ok(halves);
    }
    if depth >= GL_MAX_DEPTH {
        return Err(Error::NonConvergent(format!(
            "Gauss-Legendre panel [{}, {}] did not settle (diff {diff:e})",
            lo.to_f64(),
            hi.to_f64()
        )));
    }
    let l = gl_adaptive(g, x0, lo, &mid, left, tol / 2.0, depth + 1, ctx)?;
    let r = gl_adaptive(g, x0, &mid, hi, right, tol / 2.0, depth + 1, ctx)?;
    Ok(l + r)
}

/// `i ∫_h^∞ g(x0 + i t) dt` for an integrand decaying like e^{−d t}.
fn decaying_tail(g: Integrand, x0: &Float, h: &Float, d: f64, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let panel = (4.0 / d).clamp(0.25, 4.0);
    let tol = ctx.quad_eps();
    let trunc = ctx.trunc_eps();
    let max_height = h.to_f64() + 10.0 * (ctx.digits as f64 + 20.0) / d + 200.0;
    let mut total = Complex::zero(prec);
    let mut lo = h.clone();
    loop {
        let hi = Float::with_val(prec, &lo + panel);
        let whole = gl_vertical(g, x0, &lo, &hi, ctx)?;
        let piece = gl_adaptive(g, x0, &lo, &hi, whole, tol * (1.0 + total.abs_f64()), 0, ctx)?;
        total += &piece;
        if hi.to_f64() >= ctx.tail_height {
            let top = g(&Complex::new(x0.clone(), hi.clone()))?.abs_f64();
            let remainder = 2.0 * top / d;
            if remainder <= trunc * (1.0 + total.abs_f64()) && piece.abs_f64() <= tol * (1.0 + total.abs_f64()).max(1.0) {
                return Ok(total);
            }
        }
        if hi.to_f64() > max_height {
            return Err(Error::NonConvergent(format!(
                "tail above {} still significant at height {}",
                h.to_f64(),
                hi.to_f64()
            )));
        }
        lo = hi;
    }
}

/// `i ∫_h^∞ g(x0 + i t) dt` via t = h/u on u ∈ (0, 1].
fn algebraic_tail(g: Integrand, x0: &Float, h: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let mapped = |u: &Complex| -> Result<Complex> {
        // u runs over the real segment (0, 1]
        if u.re.is_zero() {
            return Ok(Complex::zero(prec));
        }
        let t = Float::with_val(prec, h / &u.re);
        let jac = Float::with_val(prec, &t / &u.re);
        Ok(g(&Complex::new(x0.clone(), t))?.scale(&jac))
    };
    let r = tanh_sinh(&mapped, &Complex::zero(prec), &Complex::one(prec), ctx)?;
    Ok(r.mul_i())
}

fn integrate_vertical(g: Integrand, start: &Complex, decay_rate: f64, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let x0 = start.re.clone();
    let split = Float::with_val(prec, ctx.tail_height);
    let mut total = Complex::zero(prec);
    let tail_from = if start.im < split {
        let top = Complex::new(x0.clone(), split.clone());
        total += tanh_sinh(g, start, &top, ctx)?;
        split
    } else {
        start.im.clone()
    };
    let tail = if decay_rate > 0.0 {
        decaying_tail(g, &x0, &tail_from, decay_rate, ctx)?
    } else {
        algebraic_tail(g, &x0, &tail_from, ctx)?
    };
    Ok(total + tail)
}

/// Integrates `integrand` along `path`.
///
/// `decay_rate = d > 0` promises `|integrand(x+iy)| ≤ C e^{−d y}` above
/// `ctx.tail_height`; `d = 0` requires at least `O(y^{−2})` decay.
pub fn quad_ray<F>(integrand: F, path: &RayPath, decay_rate: f64, ctx: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    path.validate()?;
    if decay_rate.is_nan() || decay_rate < 0.0 {
        return Err(Error::DomainError(format!("decay rate {decay_rate}")));
    }
    let prec = ctx.prec();
    let g = |w: &Complex| -> Result<Complex> {
        let v = integrand(w)?;
        if v.is_finite() {
            Ok(v.with_prec(prec))
        } else {
            Err(Error::PoleOnPath(format!("integrand not finite at {w:.6}")))
        }
    };
    match path {
        RayPath::Vertical { start } => integrate_vertical(&g, &start.with_prec(prec), decay_rate, ctx),
        RayPath::Segment { from, to } => tanh_sinh(&g, &from.with_prec(prec), &to.with_prec(prec), ctx),
        RayPath::Polyline { vertices } => vertices.windows(2).try_fold(Complex::zero(prec), |acc, w| {
            Ok(acc + tanh_sinh(&g, &w[0].with_prec(prec), &w[1].with_prec(prec), ctx)?)
        }),
    }
}
