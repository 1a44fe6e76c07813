//! Published radical expressions for the roots of `P_3..P_7`, checked against
//! the certified eigenvalue roots.
//!
//! The expressions are evaluated exactly as printed. Mirrored roots
//! (`x_(n+1-i) = -x_i`) are defined through the printed ones, so only the
//! printed entries are reported. Each value is compared with the nearest
//! certified root; a deviation above [`ERRATUM_TOL`] marks the expression as
//! a suspected erratum. That is a finding, not a failure. A value that hits a
//! root other than the one its label names is reported through
//! `nearest_index` without being flagged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::F17;
use crate::hermite::solve_extrema;

pub const ERRATUM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormRoot {
    /// Label such as `x64`: dimension followed by the one-based root index.
    pub label: String,
    /// One-based position named by the label.
    pub index: usize,
    /// One-based position of the certified root nearest to `printed`.
    pub nearest_index: usize,
    pub printed: f64,
    /// The certified root at `nearest_index`.
    pub certified: f64,
    pub deviation: f64,
    pub suspected_erratum: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormReport {
    pub n: usize,
    pub roots: Vec<ClosedFormRoot>,
}

impl ClosedFormReport {
    pub fn errata(&self) -> impl Iterator<Item = &ClosedFormRoot> {
        self.roots.iter().filter(|r| r.suspected_erratum)
    }
}

#[derive(Serialize)]
struct ClosedFormRootJson<'a> {
    label: &'a str,
    nearest_index: usize,
    printed: F17,
    certified: F17,
    deviation: F17,
    suspected_erratum: bool,
}

impl Serialize for ClosedFormRoot {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ClosedFormRootJson {
            label: &self.label,
            nearest_index: self.nearest_index,
            printed: F17(self.printed),
            certified: F17(self.certified),
            deviation: F17(self.deviation),
            suspected_erratum: self.suspected_erratum,
        }
        .serialize(serializer)
    }
}

/// Trigonometric constants used by the printed `n = 6, 7` roots.
#[derive(Debug, Clone, Copy)]
pub struct TrigConstants {
    pub k6: f64,
    pub l6: f64,
    pub k7: f64,
    pub l7: f64,
}

impl TrigConstants {
    pub fn new() -> Self {
        let a6 = 1.5f64.sqrt().atan() / 3.0;
        let a7 = 2.5f64.sqrt().atan() / 3.0;
        Self {
            k6: a6.cos(),
            l6: a6.sin(),
            k7: a7.cos(),
            l7: a7.sin(),
        }
    }
}

impl Default for TrigConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Printed expressions as `(one-based index, value)`.
fn printed_roots(n: usize) -> Vec<(usize, f64)> {
    let s3 = 3f64.sqrt();
    let TrigConstants { k6, l6, k7, l7 } = TrigConstants::new();
    match n {
        3 => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            vec![(1, -r), (2, 0.0), (3, r)]
        }
        4 => {
            let q = (2.0f64 / 3.0).sqrt();
            vec![
                (1, -0.5 * (1.0 + q).sqrt()),
                (2, -0.5 * (1.0 - q).sqrt()),
                (3, 0.5 * (1.0 - q).sqrt()),
                (4, 0.5 * (1.0 + q).sqrt()),
            ]
        }
        5 => {
            let q = (2.0f64 / 5.0).sqrt();
            vec![(3, 0.0), (4, 0.5 * (1.0 - q).sqrt()), (5, 0.5 * (1.0 + q).sqrt())]
        }
        6 => {
            let pre = 1.0 / (2.0 * 15f64.sqrt());
            let r10 = 10f64.sqrt();
            vec![
                (4, pre * (10.0 - 2.0 * r10 * (s3 * l6 - k6)).sqrt()),
                (5, pre * (10.0 - 2.0 * r10 * (s3 * l6 + k6)).sqrt()),
                (6, ((2.0 * r10 * k6 + 5.0) / 30.0).sqrt()),
            ]
        }
        7 => {
            let pre = 1.0 / (2.0 * 21f64.sqrt());
            let r14 = 14f64.sqrt();
            vec![
                (4, 0.0),
                (5, pre * (14.0 - 2.0 * r14 * (s3 * l6 - k6)).sqrt()),
                (6, pre * (14.0 - 2.0 * r14 * (s3 * l7 + k7)).sqrt()),
                (7, ((2.0 * r14 * k7 + 5.0) / 42.0).sqrt()),
            ]
        }
        _ => Vec::new(),
    }
}

/// Evaluates the printed closed forms for `3 <= n <= 7` and compares each
/// with the nearest certified root.
pub fn closed_form_roots(n: usize) -> Result<ClosedFormReport> {
    if !(3..=7).contains(&n) {
        return Err(Error::UnsupportedDimension { n });
    }
    let certified = solve_extrema(n)?.roots;
    let roots = printed_roots(n)
        .into_iter()
        .map(|(index, printed)| {
            let (nearest, truth) = certified
                .iter()
                .copied()
                .enumerate()
                .min_by(|a, b| (a.1 - printed).abs().total_cmp(&(b.1 - printed).abs()))
                .expect("n >= 3 roots");
            let deviation = (printed - truth).abs();
            ClosedFormRoot {
                label: format!("x{n}{index}"),
                index,
                nearest_index: nearest + 1,
                printed,
                certified: truth,
                deviation,
                suspected_erratum: !(deviation <= ERRATUM_TOL),
            }
        })
        .collect();
    Ok(ClosedFormReport { n, roots })
}
