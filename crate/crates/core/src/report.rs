//! Residual reports for numerical identities.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::kernel::Complex;

/// Significant digits used when rendering points in reports.
pub const REPORT_DIGITS: usize = 30;

/// Outcome of checking one identity at a set of points.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub identity: String,
    pub points: Vec<Complex>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RelationReport {
    /// Builds a report; NaN residuals count as failures.
    pub fn new(identity: impl Into<String>, points: Vec<Complex>, residuals: Vec<f64>, tolerance: f64) -> Self {
        let max_residual = residuals
            .iter()
            .fold(0.0f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        let pass = !max_residual.is_nan() && max_residual <= tolerance;
        Self {
            identity: identity.into(),
            points,
            residuals,
            max_residual,
            tolerance,
            pass,
        }
    }

    /// Merges reports checked against one tolerance into a single report.
    pub fn combine(identity: impl Into<String>, parts: &[RelationReport], tolerance: f64) -> Self {
        let points = parts.iter().flat_map(|r| r.points.iter().cloned()).collect();
        let residuals = parts.iter().flat_map(|r| r.residuals.iter().copied()).collect();
        Self::new(identity, points, residuals, tolerance)
    }

    /// CSV rows `identity,re,im,residual`; point-free reports use empty coordinates.
    pub fn csv_rows(&self) -> Vec<String> {
        let ident = self.identity.replace('"', "'");
        self.residuals
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (re, im) = self
                    .points
                    .get(i)
                    .map(|p| p.to_decimal(REPORT_DIGITS))
                    .unwrap_or_default();
                format!("\"{ident}\",{re},{im},{}", fmt_residual(*r))
            })
            .collect()
    }
}

/// Residual rendering shared by JSON and CSV output.
pub fn fmt_residual(r: f64) -> String {
    format!("{r:.6e}")
}

/// Relative residual `|lhs − rhs| / max(1, |lhs|, |rhs|)`.
pub fn scaled_residual(lhs: &Complex, rhs: &Complex) -> f64 {
    let scale = 1f64.max(lhs.abs_f64()).max(rhs.abs_f64());
    (lhs - rhs).abs_f64() / scale
}

/// Relative difference `|a − b| / |b|`, falling back to absolute when `b = 0`.
pub fn relative_diff(a: &Complex, b: &Complex) -> f64 {
    let d = (a - b).abs_f64();
    let s = b.abs_f64();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

impl Serialize for RelationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let points: Vec<[String; 2]> = self
            .points
            .iter()
            .map(|p| {
                let (re, im) = p.to_decimal(REPORT_DIGITS);
                [re, im]
            })
            .collect();
        let residuals: Vec<String> = self.residuals.iter().map(|r| fmt_residual(*r)).collect();
        let mut st = s.serialize_struct("RelationReport", 6)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("points", &points)?;
        st.serialize_field("residuals", &residuals)?;
        st.serialize_field("max_residual", &fmt_residual(self.max_residual))?;
        st.serialize_field("tolerance", &fmt_residual(self.tolerance))?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}
