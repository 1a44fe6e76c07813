//! Limits relating generalized and ordinary Vandermonde matrices.
//!
//! * `G_mn(x, a)` is the entrywise limit of `V_km(a)^T D_k V_kn(log x)` as
//!   `k` grows, with `D_k = diag(1/0!, ..., 1/(k-1)!)`.
//! * By Cauchy-Binet, `g_n(x, a)` is a series over index combinations of
//!   products of minors of those three factors.
//! * `g_n(x, a t) / v_n(a t)` tends to `prod 1/(k-1)! * v_n(log x)` as `t -> 0`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::matrix::{det_general, DenseMatrix};
use crate::scalar::{is_zero, Scalar};
use crate::vandermonde::{build_generalized, det_vandermonde, ExponentVector, LogBranch, NodeVector};

/// Largest `n` accepted by [`minor_series_gn`]; `|Q_kn| = C(k-1, n-1)` grows fast.
pub const MINOR_SERIES_MAX_DIM: usize = 4;

/// Above this `max |a_i t log x_j|` the ratio falls back to elimination.
pub const SERIES_CROSSOVER: f64 = 4.0;

/// `D_k = diag(1/0!, 1/1!, ..., 1/(k-1)!)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorialDiagonal {
    entries: Vec<f64>,
}

impl FactorialDiagonal {
    pub fn new(k: usize) -> Self {
        let mut entries = Vec::with_capacity(k);
        let mut fact = 1.0f64;
        for i in 0..k {
            if i > 0 {
                fact *= i as f64;
            }
            entries.push(1.0 / fact);
        }
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.entries.iter().map(|&d| Complex64::new(d, 0.0)).collect()
    }
}

/// Strictly increasing one-based indices `p_1 < ... < p_n <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCombination(Vec<usize>);

impl IndexCombination {
    pub fn new(entries: Vec<usize>, k: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCombination(format!("{entries:?} is not strictly increasing")));
        }
        if entries[0] < 1 || *entries.last().unwrap() > k {
            return Err(Error::InvalidCombination(format!("{entries:?} leaves [1, {k}]")));
        }
        Ok(Self(entries))
    }

    /// `(1, 2, ..., n)`.
    pub fn leading(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p - 1).collect()
    }
}

/// `E(q) = sum_j (q_j - 1)`, the power of `t` carried by the `q` minor of `V(a t)^T`.
pub fn exponent_sum(q: &IndexCombination) -> usize {
    q.0.iter().map(|p| p - 1).sum()
}

/// Members of `Q_kn = { p : p_n = k }` in lexicographic order.
pub fn q_combinations(k: usize, n: usize) -> impl Iterator<Item = IndexCombination> {
    let mut head: Option<Vec<usize>> = if n >= 1 && k >= n {
        Some((1..n).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let current = head.as_mut()?;
        let mut out = current.clone();
        out.push(k);
        // advance the (n-1)-subset of 1..k-1
        let r = current.len();
        let top = k - 1;
        let mut i = r;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if current[i] < top - (r - 1 - i) {
                current[i] += 1;
                for j in i + 1..r {
                    current[j] = current[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            head = None;
        }
        Some(IndexCombination(out))
    })
}

/// Determinant of the submatrix picked by one-based row and column combinations.
pub fn minor<T: Scalar>(m: &DenseMatrix<T>, rows: &IndexCombination, cols: &IndexCombination) -> Result<T> {
    if rows.len() != cols.len() {
        return Err(Error::LengthMismatch {
            left: rows.len(),
            right: cols.len(),
        });
    }
    det_general(&m.select(&rows.zero_based(), &cols.zero_based())?)
}

fn logs_of(x: &[Complex64], branch: LogBranch) -> Result<Vec<Complex64>> {
    x.iter()
        .enumerate()
        .map(|(index, &xj)| {
            if is_zero(xj) {
                Err(Error::ZeroNode { index })
            } else {
                Ok(branch.log(xj))
            }
        })
        .collect()
}

/// `rows x len(v)` matrix with entries `v_j^i`, `i = 0..rows`.
fn power_rows(v: &[Complex64], rows: usize) -> DenseMatrix<Complex64> {
    DenseMatrix::from_fn(rows, v.len(), |i, j| v[j].powu(i as u32))
}

/// `V_km(a)^T D_k V_kn(log x)`; entry `(i, j)` is the `k`-term Taylor partial
/// sum of `exp(a_i log x_j)`.
pub fn truncated_factorization(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    k: usize,
    branch: LogBranch,
) -> Result<DenseMatrix<Complex64>> {
    if k == 0 {
        return Err(Error::InvalidConfig("truncation k must be at least 1".into()));
    }
    let logs = logs_of(x, branch)?;
    let va_t = power_rows(a, k).transpose();
    let d = FactorialDiagonal::new(k).to_complex();
    let vl = power_rows(&logs, k);
    va_t.scale_columns(&d)?.matmul(&vl)
}

/// `sum_{l >= k} z^l / l!` for `z >= 0`, the remainder of the exponential
/// series after `k` terms.
pub fn exp_tail_bound(z: f64, k: usize) -> f64 {
    if z == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_z = z.ln();
    let mut ln_fact = (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    let mut sum = 0.0;
    let mut l = k;
    loop {
        let term = (l as f64 * ln_z - ln_fact).exp();
        sum += term;
        if l as f64 > z && term <= 1e-17 * sum {
            break;
        }
        if l > k + 2000 {
            break;
        }
        l += 1;
        ln_fact += (l as f64).ln();
    }
    sum
}

/// Entrywise bound `sum_{l >= k} |a_i log x_j|^l / l!` on the truncation error.
pub fn factorization_error_bound(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    k: usize,
    branch: LogBranch,
) -> Result<DenseMatrix<f64>> {
    let logs = logs_of(x, branch)?;
    Ok(DenseMatrix::from_fn(a.len(), x.len(), |i, j| exp_tail_bound((a[i] * logs[j]).norm(), k)))
}

fn check_square_pair(x: &[Complex64], a: &[Complex64]) -> Result<()> {
    if x.len() != a.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: a.len(),
        });
    }
    Ok(())
}

/// Partial sums `S_n, S_(n+1), ..., S_K` of the Cauchy-Binet minor series
/// for `g_n(x, a)`; `S_k` includes every `q` with `q_n <= k`.
pub fn minor_series_gn(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    max_k: usize,
    branch: LogBranch,
) -> Result<Vec<Complex64>> {
    check_square_pair(x, a)?;
    let n = x.len();
    if n > MINOR_SERIES_MAX_DIM {
        return Err(Error::DimensionGuard {
            n,
            max: MINOR_SERIES_MAX_DIM,
        });
    }
    if max_k < n {
        return Err(Error::InvalidConfig(format!("truncation {max_k} is below n = {n}")));
    }
    let logs = logs_of(x, branch)?;
    let va = power_rows(a, max_k);
    let vl = power_rows(&logs, max_k);
    let d = FactorialDiagonal::new(max_k);
    let all: Vec<usize> = (0..n).collect();

    let mut partial = Vec::with_capacity(max_k + 1 - n);
    let mut acc = Complex64::zero();
    for k in n..=max_k {
        for q in q_combinations(k, n) {
            let rows = q.zero_based();
            // V(a)^T[i_n | q] = det of the q rows of V(a)
            let a_minor = det_general(&va.select(&rows, &all)?)?;
            let l_minor = det_general(&vl.select(&rows, &all)?)?;
            let d_minor: f64 = rows.iter().map(|&r| d.entries()[r]).product();
            acc += a_minor * l_minor * d_minor;
        }
        partial.push(acc);
    }
    Ok(partial)
}

/// `(prod_{k=1}^n 1/(k-1)!) * prod_{i<j} (log x_j - log x_i)`.
pub fn ratio_limit_rhs(x: &NodeVector<Complex64>, branch: LogBranch) -> Result<Complex64> {
    let logs = logs_of(x, branch)?;
    let d: f64 = FactorialDiagonal::new(x.len()).entries().iter().product();
    Ok(det_vandermonde(&logs) * d)
}

/// Divided difference `exp[z_1, ..., z_k]` via
/// `sum_{m >= k-1} h_(m-k+1)(z) / m!` with complete homogeneous `h_p`.
fn exp_divided_difference(z: &[Complex64]) -> Complex64 {
    const TERMS: usize = 120;
    let k = z.len();
    let mut h = vec![Complex64::zero(); TERMS];
    h[0] = Complex64::one();
    for &zj in z {
        for p in 1..TERMS {
            let prev = h[p - 1];
            h[p] += zj * prev;
        }
    }
    // 1 / (k - 1)!
    let mut inv_fact = (1..k).fold(1.0f64, |acc, i| acc / i as f64);
    let mut sum = Complex64::zero();
    for (p, hp) in h.iter().enumerate() {
        if p > 0 {
            inv_fact /= (p + k - 1) as f64;
        }
        sum += hp * inv_fact;
    }
    sum
}

/// `g_n(x, a t) / v_n(a t)` as the determinant of the divided differences
/// `f_j[a_1 t, ..., a_i t]` of `f_j(s) = exp(s log x_j)`. Free of the
/// `t^(n(n-1)/2)` cancellation that elimination on `G(x, a t)` suffers.
pub fn ratio_divided_differences(logs: &[Complex64], a: &[Complex64], t: f64) -> Result<Complex64> {
    let n = logs.len();
    let alpha: Vec<Complex64> = a.iter().map(|&ai| ai * t).collect();
    let m = DenseMatrix::from_fn(n, n, |i, j| {
        let z: Vec<Complex64> = alpha[..=i].iter().map(|&s| s * logs[j]).collect();
        logs[j].powu(i as u32) * exp_divided_difference(&z)
    });
    det_general(&m)
}

/// `g_n(x, a t) / v_n(a t)` by elimination on the generalized matrix.
pub fn ratio_direct(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    t: f64,
    branch: LogBranch,
) -> Result<Complex64> {
    let at = ExponentVector::new(a.iter().map(|&ai| ai * t).collect())?;
    let g = det_general(&build_generalized(x, &at, branch)?)?;
    Ok(g / det_vandermonde(&at))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioMethod {
    DividedDifferences,
    Elimination,
}

impl RatioMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioMethod::DividedDifferences => "divided_differences",
            RatioMethod::Elimination => "elimination",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub t: f64,
    pub ratio: Complex64,
    pub abs_error: f64,
    pub method: RatioMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub rhs: Complex64,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn ratios(&self) -> Vec<Complex64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    /// `error(t_i) / error(t_(i+1))` for consecutive schedule entries.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].abs_error / w[1].abs_error).collect()
    }

    pub fn final_relative_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.abs_error / self.rhs.norm())
    }

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| ConvergenceRow {
            key: r.t,
            approximation: r.ratio,
            reference: self.rhs,
            abs_error: r.abs_error,
        });
        convergence_csv("t", rows)
    }
}

/// `1, 1/2, 1/4, ..., 2^-20`.
pub fn default_t_schedule() -> Vec<f64> {
    (0..=20).map(|i| 0.5f64.powi(i)).collect()
}

/// Evaluates `g_n(x, a t) / v_n(a t)` along `t_schedule` together with its
/// limit as `t -> 0`.
pub fn ratio_limit(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    t_schedule: &[f64],
    branch: LogBranch,
) -> Result<RatioReport> {
    check_square_pair(x, a)?;
    let n = x.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if det_vandermonde(a).norm() == 0.0 {
        return Err(Error::DegenerateExponents);
    }
    if t_schedule.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidConfig("t schedule must be positive".into()));
    }
    let logs = logs_of(x, branch)?;
    let rhs = ratio_limit_rhs(x, branch)?;
    let scale = a
        .iter()
        .flat_map(|ai| logs.iter().map(move |lj| (ai * lj).norm()))
        .fold(0.0, f64::max);

    let rows = t_schedule
        .iter()
        .map(|&t| {
            let (ratio, method) = if scale * t <= SERIES_CROSSOVER {
                (ratio_divided_differences(&logs, a, t)?, RatioMethod::DividedDifferences)
            } else {
                (ratio_direct(x, a, t, branch)?, RatioMethod::Elimination)
            };
            Ok(RatioRow {
                t,
                ratio,
                abs_error: (ratio - rhs).norm(),
                method,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport { rhs, rows })
}

/// One line of a convergence report.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub key: f64,
    pub approximation: Complex64,
    pub reference: Complex64,
    pub abs_error: f64,
}

/// CSV with columns `<key>,approximation,reference,abs_error`. Values are
/// real parts; `abs_error` is the complex modulus.
pub fn convergence_csv(key: &str, rows: impl IntoIterator<Item = ConvergenceRow>) -> String {
    let mut out = format!("{key},approximation,reference,abs_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g17(r.key),
            fmt_g17(r.approximation.re),
            fmt_g17(r.reference.re),
            fmt_g17(r.abs_error)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn cx(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    fn nodes(v: &[f64]) -> NodeVector<Complex64> {
        NodeVector::new(cx(v)).unwrap()
    }

    fn exps(v: &[f64]) -> ExponentVector<Complex64> {
        ExponentVector::new(cx(v)).unwrap()
    }

    #[test]
    fn factorial_diagonal_entries() {
        let d = FactorialDiagonal::new(22);
        let mut f = 1u64;
        for i in 0..21 {
            if i > 0 {
                f *= i as u64;
            }
            assert_eq!(d.entries()[i], 1.0 / f as f64);
        }
        assert!(d.entries()[1..].windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn combination_validation() {
        assert!(IndexCombination::new(vec![1, 3, 3], 5).is_err());
        assert!(IndexCombination::new(vec![0, 2], 5).is_err());
        assert!(IndexCombination::new(vec![2, 6], 5).is_err());
        assert!(IndexCombination::new(vec![2, 5], 5).is_ok());
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sum(&IndexCombination::leading(3)), 3);
        assert_eq!(exponent_sum(&IndexCombination::new(vec![1], 1).unwrap()), 0);
        assert_eq!(exponent_sum(&IndexCombination::new(vec![2, 4], 4).unwrap()), 4);
    }

    #[test]
    fn q_sets_are_lexicographic_and_complete() {
        let q: Vec<Vec<usize>> = q_combinations(5, 3).map(|c| c.entries().to_vec()).collect();
        assert_eq!(
            q,
            vec![
                vec![1, 2, 5],
                vec![1, 3, 5],
                vec![1, 4, 5],
                vec![2, 3, 5],
                vec![2, 4, 5],
                vec![3, 4, 5]
            ]
        );
        assert_eq!(q_combinations(3, 3).count(), 1);
        assert_eq!(q_combinations(7, 1).count(), 1);
        assert_eq!(q_combinations(2, 3).count(), 0);
        // |Q_kn| = C(k-1, n-1)
        assert_eq!(q_combinations(30, 3).count(), 29 * 28 / 2);
    }

    #[test]
    fn unit_nodes_give_all_ones() {
        let x = nodes(&[1.0, 1.0, 1.0]);
        let a = exps(&[0.3, -2.0]);
        for k in [1, 2, 7] {
            let m = truncated_factorization(&x, &a, k, LogBranch::PRINCIPAL).unwrap();
            assert!(m.as_slice().iter().all(|&v| v == Complex64::one()));
        }
    }

    #[test]
    fn partial_sum_of_e() {
        let m = truncated_factorization(&nodes(&[E]), &exps(&[1.0]), 3, LogBranch::PRINCIPAL).unwrap();
        assert!((m[(0, 0)].re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn factorization_error_within_tail_bound() {
        let x = nodes(&[0.7, 2.0, 2.9]);
        let a = exps(&[0.5, -1.5, 2.0]);
        let exact = build_generalized(&x, &a, LogBranch::PRINCIPAL).unwrap();
        for k in [2, 5, 10, 20] {
            let approx = truncated_factorization(&x, &a, k, LogBranch::PRINCIPAL).unwrap();
            let bound = factorization_error_bound(&x, &a, k, LogBranch::PRINCIPAL).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let err = (approx[(i, j)] - exact[(i, j)]).norm();
                    // rounding in the partial sum sits on top of the analytic tail
                    let slack = 1e-14 * k as f64 * exact[(i, j)].norm();
                    assert!(err <= bound[(i, j)] + slack, "k={k} ({i},{j}) err {err} bound {}", bound[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn tail_bound_values() {
        // e - (1 + 1 + 1/2)
        assert!((exp_tail_bound(1.0, 3) - (E - 2.5)).abs() < 1e-15);
        assert_eq!(exp_tail_bound(0.0, 2), 0.0);
        assert!((exp_tail_bound(2.0, 0) - 2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn zero_node_is_rejected() {
        let err = truncated_factorization(&nodes(&[1.0, 0.0]), &exps(&[1.0]), 3, LogBranch::PRINCIPAL);
        assert!(matches!(err, Err(Error::ZeroNode { index: 1 })));
    }

    #[test]
    fn minor_basics() {
        let m = DenseMatrix::from_row_major(2, 2, vec![3.0, 1.0, 4.0, 1.5]).unwrap();
        let full = IndexCombination::leading(2);
        assert_eq!(minor(&m, &full, &full).unwrap(), det_general(&m).unwrap());
        let r = IndexCombination::new(vec![2], 2).unwrap();
        let c = IndexCombination::new(vec![1], 2).unwrap();
        assert_eq!(minor(&m, &r, &c).unwrap(), 4.0);
        assert!(matches!(minor(&m, &full, &c), Err(Error::LengthMismatch { .. })));
        let out = IndexCombination::new(vec![3], 3).unwrap();
        assert!(matches!(minor(&m, &out, &c), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn cauchy_binet_two_by_three() {
        let a = DenseMatrix::from_row_major(2, 3, vec![1.0, -2.0, 0.5, 3.0, 1.0, -1.0]).unwrap();
        let b = DenseMatrix::from_row_major(3, 2, vec![2.0, 0.0, 1.0, 4.0, -3.0, 1.5]).unwrap();
        let direct = det_general(&a.matmul(&b).unwrap()).unwrap();
        let rows = IndexCombination::leading(2);
        let mut sum = 0.0;
        for p in [vec![1, 2], vec![1, 3], vec![2, 3]] {
            let p = IndexCombination::new(p, 3).unwrap();
            sum += minor(&a, &rows, &p).unwrap() * minor(&b, &p, &rows).unwrap();
        }
        assert!((direct - sum).abs() < 1e-12, "{direct} vs {sum}");
    }

    #[test]
    fn minor_series_n2_converges_to_e_minus_one() {
        let s = minor_series_gn(&nodes(&[1.0, E]), &exps(&[0.0, 1.0]), 30, LogBranch::PRINCIPAL).unwrap();
        assert_eq!(s.len(), 29);
        assert!((s.last().unwrap().re - (E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn minor_series_equal_nodes_vanish() {
        let s = minor_series_gn(&nodes(&[1.0, 1.0]), &exps(&[0.0, 1.0]), 12, LogBranch::PRINCIPAL).unwrap();
        assert!(s.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn minor_series_n3_recovers_vandermonde() {
        let s = minor_series_gn(&nodes(&[1.0, 2.0, 3.0]), &exps(&[0.0, 1.0, 2.0]), 30, LogBranch::PRINCIPAL).unwrap();
        assert!((s.last().unwrap().re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn minor_series_guards() {
        let x = nodes(&[1.1, 1.2, 1.3, 1.4, 1.5]);
        let a = exps(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(minor_series_gn(&x, &a, 10, LogBranch::PRINCIPAL), Err(Error::DimensionGuard { .. })));
        assert!(minor_series_gn(&nodes(&[1.0, 2.0]), &exps(&[0.0]), 10, LogBranch::PRINCIPAL).is_err());
        assert!(minor_series_gn(&nodes(&[1.0, 2.0]), &exps(&[0.0, 1.0]), 1, LogBranch::PRINCIPAL).is_err());
    }

    #[test]
    fn divided_difference_of_exp_small_cases() {
        let z = cx(&[0.3]);
        assert!((exp_divided_difference(&z).re - 0.3f64.exp()).abs() < 1e-15);
        let z = cx(&[0.2, 0.9]);
        let expected = (0.9f64.exp() - 0.2f64.exp()) / 0.7;
        assert!((exp_divided_difference(&z).re - expected).abs() < 1e-15);
        // confluent limit exp[0,0,0] = 1/2
        let z = cx(&[0.0, 0.0, 0.0]);
        assert!((exp_divided_difference(&z).re - 0.5).abs() < 1e-16);
    }

    #[test]
    fn ratio_routes_agree_at_moderate_t() {
        let x = nodes(&[1.0, 2.0, 4.0]);
        let a = exps(&[0.0, 1.0, 2.0]);
        let logs: Vec<Complex64> = x.iter().map(|v| v.ln()).collect();
        for t in [1.0, 0.5, 0.1] {
            let dd = ratio_divided_differences(&logs, &a, t).unwrap();
            let direct = ratio_direct(&x, &a, t, LogBranch::PRINCIPAL).unwrap();
            assert!((dd - direct).norm() < 1e-10 * direct.norm(), "t={t}: {dd} vs {direct}");
        }
    }

    #[test]
    fn ratio_rhs_values() {
        let rhs = ratio_limit_rhs(&nodes(&[1.0, E]), LogBranch::PRINCIPAL).unwrap();
        assert!((rhs.re - 1.0).abs() < 1e-15);
        let rhs = ratio_limit_rhs(&nodes(&[1.0, 4.0]), LogBranch::PRINCIPAL).unwrap();
        assert!((rhs.re - 4f64.ln()).abs() < 1e-15);
        let rhs = ratio_limit_rhs(&nodes(&[1.0, 2.0, 4.0]), LogBranch::PRINCIPAL).unwrap();
        assert!((rhs.re - 2f64.ln().powi(3)).abs() < 1e-15);
    }

    #[test]
    fn ratio_n2_matches_hand_expansion() {
        let report = ratio_limit(&nodes(&[1.0, E]), &exps(&[0.0, 1.0]), &default_t_schedule(), LogBranch::PRINCIPAL).unwrap();
        for row in &report.rows {
            let expected = row.t.exp_m1() / row.t;
            assert!((row.ratio.re - expected).abs() < 1e-14, "t={}", row.t);
        }
    }

    #[test]
    fn ratio_errors() {
        let sched = default_t_schedule();
        assert!(matches!(
            ratio_limit(&nodes(&[1.0, 2.0]), &exps(&[1.0, 1.0]), &sched, LogBranch::PRINCIPAL),
            Err(Error::DegenerateExponents)
        ));
        assert!(matches!(
            ratio_limit(&nodes(&[0.0, 2.0]), &exps(&[0.0, 1.0]), &sched, LogBranch::PRINCIPAL),
            Err(Error::ZeroNode { index: 0 })
        ));
        assert!(matches!(
            ratio_limit(&nodes(&[2.0]), &exps(&[1.0]), &sched, LogBranch::PRINCIPAL),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let report = ratio_limit(&nodes(&[1.0, E]), &exps(&[0.0, 1.0]), &[1.0, 0.5], LogBranch::PRINCIPAL).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,approximation,reference,abs_error"));
        assert!(lines.next().unwrap().starts_with("1,1.7182818284590"));
    }
}
