//! Rescaled Hermite polynomials whose roots are the extreme points of `v_n`
//! on the unit sphere.
//!
//! `P_n(x) = (2n(n-1))^(-n/2) H_n(sqrt(n(n-1)/2) x)` is monic; its `n` real
//! roots, in any order, are the coordinates of an extreme point. Roots are
//! found as eigenvalues of the Hermite Jacobi matrix, polished with Newton
//! steps on the three-term recurrence, then rescaled.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{f17_vec, F17};
use crate::optimizer::equi_residual;
use crate::tridiag::symmetric_tridiagonal_eigenvalues;
use crate::vandermonde::{det_vandermonde, log10_abs_det_vandermonde, log_gradient, pair_count};

/// Largest dimension [`solve_extrema`] accepts.
pub const MAX_EXTREMA_DIM: usize = 50;

/// Tolerance on the algebraic root identities (sum, sum of squares, symmetry).
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Tolerance on the scale-free Lagrange stationarity residual.
pub const STATIONARITY_TOL: f64 = 1e-8;

/// Exact integer coefficients of the physicists' Hermite polynomial `H_n`,
/// lowest degree first.
pub fn hermite_coeffs_exact(n: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let factorial = |k: usize| -> BigInt { (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) };
    let n_fact = factorial(n);
    for i in 0..=n / 2 {
        let power = n - 2 * i;
        let mut c = &n_fact / (factorial(i) * factorial(power));
        c <<= power;
        if i % 2 == 1 {
            c = -c;
        }
        coeffs[power] = c;
    }
    coeffs
}

/// Coefficients of `H_n` as floats, lowest degree first.
pub fn hermite_coeffs(n: usize) -> Vec<f64> {
    hermite_coeffs_exact(n)
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// A real polynomial with leading coefficient one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonicPolynomial {
    /// `a_0..a_n` in the monomial basis.
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.last() {
            Some(1.0) => Ok(Self { coeffs }),
            Some(&lead) => Err(Error::InvalidConfig(format!("leading coefficient {lead} is not 1"))),
            None => Err(Error::EmptyVector),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    Ok(())
}

/// Exact coefficients of `P_n`, lowest degree first.
///
/// With `c = n(n-1)/2` the rescaling collapses to `a_k = h_k / (2^n c^((n-k)/2))`,
/// where `h_k` are the coefficients of `H_n`; `n - k` is always even for
/// nonzero `h_k`, so the result is rational.
pub fn pn_exact(n: usize) -> Result<Vec<BigRational>> {
    check_dimension(n)?;
    let h = hermite_coeffs_exact(n);
    let c = BigInt::from(pair_count(n));
    let two_n = BigInt::one() << n;
    Ok(h.into_iter()
        .enumerate()
        .map(|(k, hk)| {
            if hk.is_zero() {
                return BigRational::zero();
            }
            let half = (n - k) / 2;
            let denom = &two_n * num::pow(c.clone(), half);
            BigRational::new(hk, denom)
        })
        .collect())
}

/// `P_n` built by rescaling the explicit Hermite expansion.
pub fn pn_from_hermite(n: usize) -> Result<MonicPolynomial> {
    let exact = pn_exact(n)?;
    MonicPolynomial::new(exact.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect())
}

/// `P_n` built from the downward coefficient recursion
/// `a_k = -(k+1)(k+2) / (n(n-1)(n-k)) a_(k+2)`, seeded with
/// `a_n = 1`, `a_(n-1) = 0`, `a_(n-2) = -1/2`.
pub fn pn_recursive(n: usize) -> Result<MonicPolynomial> {
    check_dimension(n)?;
    let mut a = vec![0.0; n + 1];
    a[n] = 1.0;
    a[n - 2] = -0.5;
    let nn = (n * (n - 1)) as f64;
    for k in (0..n.saturating_sub(2)).rev() {
        let num = ((k + 1) * (k + 2)) as f64;
        a[k] = -num / (nn * (n - k) as f64) * a[k + 2];
    }
    MonicPolynomial::new(a)
}

/// Formats an exact coefficient as `p/q` (or `p` when integral).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `(H_n(z), H_(n-1)(z))` by the three-term recurrence.
fn hermite_pair(n: usize, z: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if n == 0 {
        return (prev, 0.0);
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Roots of the unscaled `H_n`, ascending.
pub fn hermite_roots(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut roots = symmetric_tridiagonal_eigenvalues(&vec![0.0; n], &off)?;
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (h, h_prev) = hermite_pair(n, *z);
            let dh = 2.0 * n as f64 * h_prev;
            if dh == 0.0 {
                break;
            }
            let step = h / dh;
            *z -= step;
            if step.abs() <= f64::EPSILON * z.abs().max(1e-300) {
                break;
            }
        }
    }
    if n % 2 == 1 {
        let mid = n / 2;
        if roots[mid].abs() > 1e-12 {
            return Err(Error::RootFindingFailure {
                check: "odd-degree center root".into(),
                residual: roots[mid].abs(),
                tolerance: 1e-12,
            });
        }
        // P_n is odd for odd n, so 0 is an exact root
        roots[mid] = 0.0;
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Certified extreme-point coordinates of `v_n` on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePointSet {
    pub n: usize,
    /// Roots of `P_n`, ascending.
    pub roots: Vec<f64>,
    /// `|v_n(roots)|`; underflows to zero for `n` beyond roughly 27.
    pub extreme_value: f64,
    pub log10_extreme_value: f64,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct ExtremePointSetJson<'a> {
    n: usize,
    roots: Vec<F17>,
    extreme_value: F17,
    log10_extreme_value: F17,
    residuals: BTreeMap<&'a str, F17>,
}

impl Serialize for ExtremePointSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExtremePointSetJson {
            n: self.n,
            roots: f17_vec(&self.roots),
            extreme_value: F17(self.extreme_value),
            log10_extreme_value: F17(self.log10_extreme_value),
            residuals: self.residuals.iter().map(|(k, &v)| (k.as_str(), F17(v))).collect(),
        }
        .serialize(serializer)
    }
}

impl ExtremePointSet {
    pub fn residual(&self, name: &str) -> f64 {
        self.residuals.get(name).copied().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite residuals serialize")
    }
}

/// Scale-free stationarity: `|| grad v / v - (n(n-1)/2) x || / (n(n-1)/2)`.
pub fn stationarity_residual(x: &[f64]) -> Result<f64> {
    let s = log_gradient(x)?;
    let m = pair_count(x.len()) as f64;
    let norm = s
        .iter()
        .zip(x)
        .map(|(sk, xk)| (sk - m * xk).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(norm / m)
}

/// Absolute stationarity: `|| grad v - (n(n-1)/2) v x ||`.
pub fn stationarity_residual_abs(x: &[f64]) -> Result<f64> {
    let g = crate::vandermonde::grad_vn(x)?;
    let v = det_vandermonde(x);
    let m = pair_count(x.len()) as f64;
    Ok(g.iter()
        .zip(x)
        .map(|(gk, xk)| (gk - m * v * xk).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Roots of `P_n` with every certification residual populated.
pub fn solve_extrema(n: usize) -> Result<ExtremePointSet> {
    check_dimension(n)?;
    if n > MAX_EXTREMA_DIM {
        return Err(Error::DimensionGuard {
            n,
            max: MAX_EXTREMA_DIM,
        });
    }
    let z = hermite_roots(n)?;
    let m = pair_count(n) as f64;
    let scale = (1.0 / m).sqrt();
    let roots: Vec<f64> = z.iter().map(|zi| zi * scale).collect();

    let sum: f64 = roots.iter().sum();
    let sum_sq: f64 = roots.iter().map(|r| r * r).sum();
    let symmetry = (0..n)
        .map(|i| (roots[i] + roots[n - 1 - i]).abs())
        .fold(0.0, f64::max);
    let min_gap = roots.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let hermite_sum_sq: f64 = z.iter().map(|zi| zi * zi).sum();

    let mut residuals = BTreeMap::new();
    residuals.insert("sum".to_string(), sum.abs());
    residuals.insert("sum_squares".to_string(), (sum_sq - 1.0).abs());
    residuals.insert("symmetry".to_string(), symmetry);
    residuals.insert("min_gap".to_string(), min_gap);
    residuals.insert("hermite_sum_squares".to_string(), (hermite_sum_sq - m).abs());
    residuals.insert("stationarity".to_string(), stationarity_residual(&roots)?);
    residuals.insert("stationarity_abs".to_string(), stationarity_residual_abs(&roots)?);
    residuals.insert("equi".to_string(), equi_residual(&roots)?);

    let set = ExtremePointSet {
        n,
        extreme_value: det_vandermonde(&roots).abs(),
        log10_extreme_value: log10_abs_det_vandermonde(&roots),
        roots,
        residuals,
    };
    certify(&set)?;
    Ok(set)
}

fn certify(set: &ExtremePointSet) -> Result<()> {
    let checks = [
        ("sum", ALGEBRAIC_TOL),
        ("sum_squares", ALGEBRAIC_TOL),
        ("symmetry", ALGEBRAIC_TOL),
        ("stationarity", STATIONARITY_TOL),
    ];
    for (name, tol) in checks {
        let r = set.residual(name);
        if !(r < tol) {
            return Err(Error::RootFindingFailure {
                check: name.to_string(),
                residual: r,
                tolerance: tol,
            });
        }
    }
    if !(set.residual("min_gap") > 0.0) {
        return Err(Error::RootFindingFailure {
            check: "distinct roots".into(),
            residual: set.residual("min_gap"),
            tolerance: 0.0,
        });
    }
    Ok(())
}

/// One permutation of the extreme-point coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePoint {
    pub coords: Vec<f64>,
    /// `+1` for a maximum of `v_n`, `-1` for a minimum.
    pub sign: i8,
}

fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

/// Lazily yields all `n!` permutations of the sorted roots in lexicographic
/// index order, tagged with the sign of `v_n`.
///
/// Without an explicit cap, dimensions above 10 are refused.
pub fn enumerate_extrema(set: &ExtremePointSet, cap: Option<u128>) -> Result<ExtremaIter> {
    let count = factorial_u128(set.n);
    let cap = cap.unwrap_or_else(|| factorial_u128(10));
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(ExtremaIter {
        roots: set.roots.clone(),
        perm: (0..set.n).collect(),
        odd: false,
        done: false,
    })
}

pub struct ExtremaIter {
    roots: Vec<f64>,
    perm: Vec<usize>,
    odd: bool,
    done: bool,
}

impl ExtremaIter {
    /// Advances `perm` to its lexicographic successor, tracking parity.
    fn advance(&mut self) -> bool {
        let p = &mut self.perm;
        let n = p.len();
        if n < 2 {
            return false;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
            return false;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
        let suffix = n - i - 1;
        let swaps = 1 + suffix / 2;
        if swaps % 2 == 1 {
            self.odd = !self.odd;
        }
        true
    }
}

impl Iterator for ExtremaIter {
    type Item = ExtremePoint;

    fn next(&mut self) -> Option<ExtremePoint> {
        if self.done {
            return None;
        }
        let point = ExtremePoint {
            coords: self.perm.iter().map(|&i| self.roots[i]).collect(),
            sign: if self.odd { -1 } else { 1 },
        };
        if !self.advance() {
            self.done = true;
        }
        Some(point)
    }
}
