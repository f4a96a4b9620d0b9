//! Verification suites: each maps a configuration to a list of reports.

use mockperiods::kernel::{Complex, PrecisionContext};
use mockperiods::mockcore::MockPeriods;
use mockperiods::poincare::{
    verify_laplace_eigen, verify_termwise_dipoincare, verify_termwise_xi, verify_xi_chain, CosetTruncation, Level,
};
use mockperiods::qforms::QSeries;
use mockperiods::regint::{verify_base_point_independence, verify_per_star, verify_star_holomorphic, ExponentialQExpansion};
use mockperiods::special::whittaker_derivative_identity_check;
use mockperiods::RelationReport;
use rayon::prelude::*;

use crate::config::{Suite, SuiteConfig};
use crate::error::CliError;
use crate::forms::FormId;

/// Coset bound of the matched-truncation checks.
pub const MATCHED_BOUND: u32 = 10;

type Reports = Result<Vec<RelationReport>, CliError>;

pub struct Runner<'a> {
    pub cfg: &'a SuiteConfig,
    pub ctx: PrecisionContext,
    pub pts: Vec<Complex>,
    forms: Vec<(String, QSeries)>,
}

fn tagged(form: &str, mut reports: Vec<RelationReport>) -> Vec<RelationReport> {
    for r in &mut reports {
        r.identity = format!("{form}: {}", r.identity);
    }
    reports
}

impl<'a> Runner<'a> {
    pub fn new(cfg: &'a SuiteConfig) -> Result<Self, CliError> {
        let ctx = cfg.context()?;
        let pts = cfg.points.resolve(ctx.prec())?;
        let mut forms = Vec::new();
        for id in cfg.form_ids()? {
            let f = match id.load(cfg.terms)? {
                Some(f) => f,
                None => match id {
                    FormId::Cusp(k) => QSeries::zero(k),
                    _ => unreachable!("only cusp spaces can be empty"),
                },
            };
            if !f.is_cuspidal() {
                return Err(CliError::Config(format!("form `{id}` is not a cusp form")));
            }
            forms.push((id.to_string(), f));
        }
        Ok(Self { cfg, ctx, pts, forms })
    }

    pub fn run(&self, suite: Suite) -> Reports {
        match suite {
            Suite::All => {
                let mut out = Vec::new();
                for s in Suite::EACH {
                    out.extend(self.run(s)?);
                }
                Ok(out)
            }
            Suite::Superm => self.per_form(|m| Ok(vec![m.verify_superm(&self.pts, &self.ctx)?])),
            Suite::Wk2 => self.per_form(|m| {
                let mut v = m.verify_w_k2(&self.pts, &self.ctx)?;
                v.push(m.verify_harmonic(&self.pts, &self.ctx)?);
                Ok(v)
            }),
            Suite::Mockes => self.per_form(|m| Ok(m.verify_mock_es(&self.pts, &self.ctx)?)),
            Suite::Perstar => self.perstar(),
            Suite::Poincare => self.poincare(),
            Suite::Special => self.special(),
        }
    }

    fn per_form<F>(&self, check: F) -> Reports
    where
        F: Fn(&MockPeriods) -> Reports + Sync,
    {
        // Forms run in parallel; collecting keeps the configured order.
        let parts = self
            .forms
            .par_iter()
            .map(|(name, f)| Ok(tagged(name, check(&MockPeriods::new(f, &self.ctx)?)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(parts.concat())
    }

    fn perstar(&self) -> Reports {
        let ctx = &self.ctx;
        let g = FormId::M10.load(self.cfg.terms.max(200))?.expect("m10 is never empty");
        let g = ExponentialQExpansion::modular(&g, ctx)?;
        let mut out = verify_per_star(&g, &self.pts, ctx)?;
        out.push(verify_star_holomorphic(&g, &self.pts, ctx)?);
        let a = Complex::from_f64(ctx.prec(), 0.0, 1.0);
        let b = Complex::from_f64(ctx.prec(), 1.0, 2.0);
        out.push(verify_base_point_independence(&g, &self.pts, &a, &b, ctx)?);
        Ok(tagged("m10", out))
    }

    fn poincare(&self) -> Reports {
        let ctx = &self.ctx;
        let p = ctx.prec();
        let trunc = CosetTruncation::new(MATCHED_BOUND);
        let mut out = Vec::new();
        let mut weights: Vec<i32> = self.forms.iter().map(|(_, f)| f.weight()).collect();
        weights.dedup();
        for k in weights {
            let half = ctx.float(k as f64 / 2.0);
            out.push(verify_laplace_eigen(2 - k, 1, &half, &self.pts, ctx)?);
            out.push(verify_laplace_eigen(k, -1, &ctx.float(k as f64 / 2.0 + 0.5), &self.pts, ctx)?);
            for m in [1, 2] {
                out.push(verify_termwise_xi(k, m, Level::Seed, &self.pts, ctx)?);
            }
            out.push(verify_termwise_xi(k, 1, Level::Truncated(&trunc), &[Complex::from_f64(p, 0.0, 2.0)], ctx)?);
            for m in [1, 3] {
                out.push(verify_termwise_dipoincare(k, m, Level::Seed, &self.pts, ctx)?);
            }
            out.push(verify_termwise_dipoincare(k, 1, Level::Truncated(&trunc), &[Complex::from_f64(p, 0.0, 1.5)], ctx)?);
        }
        for (name, f) in &self.forms {
            out.extend(tagged(name, verify_xi_chain(f, &self.pts, ctx)?));
        }
        Ok(out)
    }

    fn special(&self) -> Reports {
        let ctx = &self.ctx;
        let mut parts = Vec::new();
        for k in [4, 12] {
            for y in [0.5, 1.0, 2.0, 5.0] {
                parts.push(whittaker_derivative_identity_check(k, &ctx.float(y), ctx)?);
            }
        }
        let tol = parts.iter().map(|r| r.tolerance).fold(0.0, f64::max);
        Ok(vec![RelationReport::combine("Whittaker derivative identity, k in {4, 12}", &parts, tol)])
    }
}
