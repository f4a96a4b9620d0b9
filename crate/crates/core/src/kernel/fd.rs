//! Finite-difference ξ_k and Δ_k on black-box functions.

use rug::Float;

use super::complex::Complex;
use super::context::PrecisionContext;
use crate::error::{Error, Result};

fn check_step(z: &Complex, h: &Float) -> Result<()> {
    if z.im <= 0 {
        return Err(Error::DomainError(format!("Im z must be positive, got {z:.6}")));
    }
    if Float::with_val(h.prec(), h * 10u32) >= z.im {
        return Err(Error::StepTooLarge(format!(
            "step {} against Im z = {}",
            h.to_f64(),
            z.im.to_f64()
        )));
    }
    Ok(())
}

struct Stencil {
    h: Float,
    dx: Complex,
    dy: Complex,
}

impl Stencil {
    fn new(z: &Complex, ctx: &PrecisionContext) -> Result<Self> {
        let h = ctx.fd_step_float();
        check_step(z, &h)?;
        let p = ctx.prec();
        Ok(Self {
            dx: Complex::new(h.clone(), Float::new(p)),
            dy: Complex::new(Float::new(p), h.clone()),
            h,
        })
    }

    /// Central first differences (F_x, F_y).
    fn gradient<F>(&self, f: &F, z: &Complex) -> Result<(Complex, Complex)>
    where
        F: Fn(&Complex) -> Result<Complex>,
    {
        let two_h = Float::with_val(self.h.prec(), &self.h * 2u32);
        let fx = (f(&(z + &self.dx))? - f(&(z - &self.dx))?).div_real(&two_h);
        let fy = (f(&(z + &self.dy))? - f(&(z - &self.dy))?).div_real(&two_h);
        Ok((fx, fy))
    }
}

/// `ξ_k F(z) = 2i y^k conj(∂F/∂z̄)` by central differences.
pub fn xi_fd<F>(f: F, k: i32, z: &Complex, ctx: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    let st = Stencil::new(z, ctx)?;
    let (fx, fy) = st.gradient(&f, z)?;
    let dzbar = (fx + fy.mul_i()).div_real(&Float::with_val(ctx.prec(), 2));
    let yk = Float::with_val(ctx.prec(), z.im.pow_ref_i32(k));
    Ok(dzbar.conj().scale(&yk).scale_int(2).mul_i())
}

/// `Δ_k F(z) = −y²(F_xx + F_yy) + i k y (F_x + i F_y)` by five-point stencils.
pub fn laplace_fd<F>(f: F, k: i32, z: &Complex, ctx: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    let st = Stencil::new(z, ctx)?;
    let p = ctx.prec();
    let f0 = f(z)?;
    let fxp = f(&(z + &st.dx))?;
    let fxm = f(&(z - &st.dx))?;
    let fyp = f(&(z + &st.dy))?;
    let fym = f(&(z - &st.dy))?;
    let h2 = Float::with_val(p, st.h.square_ref());
    let two_h = Float::with_val(p, &st.h * 2u32);
    let lap = (&fxp + &fxm + &fyp + &fym - f0.scale_int(4)).div_real(&h2);
    let fx = (&fxp - &fxm).div_real(&two_h);
    let fy = (&fyp - &fym).div_real(&two_h);
    let y = &z.im;
    let y2 = Float::with_val(p, y.square_ref());
    let first = (fx + fy.mul_i()).mul_i().scale(&Float::with_val(p, y * k));
    Ok(first - lap.scale(&y2))
}

trait PowRefI32 {
    fn pow_ref_i32(&self, k: i32) -> Float;
}

impl PowRefI32 for Float {
    fn pow_ref_i32(&self, k: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(k))
    }
}
