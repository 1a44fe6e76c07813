//! Projected gradient ascent of `|v_n|` on the unit sphere, and the
//! reciprocal-square identity satisfied by its maximizers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::vandermonde::{det_vandermonde, grad_vn, log_gradient, pair_count};

/// Dimensions the ascent accepts; beyond this `v_n` leaves the f64 range.
pub const MAX_OPT_DIM: usize = 20;

const MIN_STEP: f64 = 1e-18;
const MAX_STEP: f64 = 1.0;
const GAP_FLOOR: f64 = 1e-13;
const GAP_KICK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n: usize,
    /// Initial step along the normalized ascent direction.
    pub step: f64,
    pub max_iters: usize,
    /// Threshold on the scale-free gradient norm `|grad_S v_n| / |v_n|`.
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
}

impl OptimizerConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            step: 0.1,
            max_iters: 100_000,
            tol: 1e-10,
            seed: 0,
            restarts: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n, min: 2 });
        }
        if self.n > MAX_OPT_DIM {
            return Err(Error::DimensionGuard {
                n: self.n,
                max: MAX_OPT_DIM,
            });
        }
        if !(self.step > 0.0) || !(self.tol > 0.0) || self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidConfig(format!(
                "step {} and tol {} must be positive, restarts {} and max_iters {} at least one",
                self.step, self.tol, self.restarts, self.max_iters
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub point: Vec<f64>,
    pub value: f64,
    /// Norm of the Riemannian gradient of `v_n`.
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub seed: u64,
    pub iterates: Vec<Iterate>,
    pub converged: bool,
    pub final_point: Vec<f64>,
    pub final_value: f64,
}

impl OptimizationTrace {
    /// CSV with columns `iteration,v_n,gradient_norm`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,v_n,gradient_norm\n");
        for (i, it) in self.iterates.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i, fmt_g17(it.value), fmt_g17(it.gradient_norm)));
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let r = norm(a);
    a.iter_mut().for_each(|v| *v /= r);
}

fn center(a: &mut [f64]) {
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    a.iter_mut().for_each(|v| *v -= mean);
}

/// `grad v_n(x) - (x . grad v_n(x)) x`, the tangential part of the gradient.
pub fn riemannian_grad(x: &[f64]) -> Result<Vec<f64>> {
    let g = grad_vn(x)?;
    let radial = dot(x, &g);
    Ok(g.iter().zip(x).map(|(gk, xk)| gk - radial * xk).collect())
}

/// Tangential part of `grad log|v_n|`; equals `riemannian_grad / v_n`.
fn riemannian_log_grad(x: &[f64]) -> Result<Vec<f64>> {
    let g = log_gradient(x)?;
    let radial = dot(x, &g);
    Ok(g.iter().zip(x).map(|(gk, xk)| gk - radial * xk).collect())
}

/// `|sum_{i<j} (x_j - x_i)^-2 - (1/2)(n(n-1)/2)^2|`; zero exactly on the
/// stationary points of `v_n` on the unit sphere.
pub fn equi_residual(x: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for j in 1..x.len() {
        for i in 0..j {
            let d = x[j] - x[i];
            if d == 0.0 {
                return Err(Error::RepeatedNodes { i, j });
            }
            s += 1.0 / (d * d);
        }
    }
    let m = pair_count(x.len()) as f64;
    Ok((s - 0.5 * m * m).abs())
}

fn min_gap(x: &[f64]) -> f64 {
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// `log|v_n(c)| - log|v_n(x)|` for the degree-zero extension
/// `log|v_n(y)| - (n(n-1)/2) log|y|`, computed from `c - x` so that gains
/// far below the rounding level of `v_n` itself keep their sign.
pub fn log_abs_gain(x: &[f64], c: &[f64]) -> f64 {
    let delta: Vec<f64> = c.iter().zip(x).map(|(ci, xi)| ci - xi).collect();
    let mut gain = 0.0;
    for j in 1..x.len() {
        for i in 0..j {
            let q = (delta[j] - delta[i]) / (x[j] - x[i]);
            gain += if q > -0.5 { q.ln_1p() } else { (1.0 + q).abs().ln() };
        }
    }
    let m = pair_count(x.len()) as f64;
    let radial = x.iter().zip(&delta).map(|(xi, di)| (2.0 * xi + di) * di).sum::<f64>() / dot(x, x);
    gain - 0.5 * m * radial.ln_1p()
}

struct Ascent<'a> {
    cfg: &'a OptimizerConfig,
    hyperplane: bool,
    rng: ChaCha8Rng,
}

impl Ascent<'_> {
    fn project(&self, x: &mut [f64]) {
        if self.hyperplane {
            center(x);
        }
        normalize(x);
    }

    fn start_point(&mut self) -> Vec<f64> {
        loop {
            let mut x: Vec<f64> = (0..self.cfg.n).map(|_| self.rng.sample(StandardNormal)).collect();
            x.sort_by(f64::total_cmp);
            if self.hyperplane {
                center(&mut x);
            }
            if norm(&x) == 0.0 {
                continue;
            }
            normalize(&mut x);
            if det_vandermonde(&x) != 0.0 {
                return x;
            }
        }
    }

    /// Moves off a near-coincidence along a random tangent direction.
    fn kick(&mut self, x: &mut [f64]) {
        let mut u: Vec<f64> = (0..x.len()).map(|_| self.rng.sample(StandardNormal)).collect();
        if self.hyperplane {
            center(&mut u);
        }
        let radial = dot(&u, x);
        u.iter_mut().zip(x.iter()).for_each(|(ui, xi)| *ui -= radial * xi);
        normalize(&mut u);
        x.iter_mut().zip(&u).for_each(|(xi, ui)| *xi += GAP_KICK * ui);
        self.project(x);
    }

    fn run(mut self) -> OptimizationTrace {
        let seed = self.cfg.seed;
        let mut x = self.start_point();
        let mut step = self.cfg.step;
        let mut iterates = Vec::new();
        let mut converged = false;
        let mut recorded_final = false;

        for _ in 0..self.cfg.max_iters {
            while min_gap(&x) < GAP_FLOOR {
                self.kick(&mut x);
            }
            let value = det_vandermonde(&x);
            let mut dir = riemannian_log_grad(&x).expect("nodes kept distinct");
            if self.hyperplane {
                center(&mut dir);
            }
            let rel_norm = norm(&dir);
            iterates.push(Iterate {
                point: x.clone(),
                value,
                gradient_norm: rel_norm * value.abs(),
            });
            recorded_final = true;
            if rel_norm < self.cfg.tol {
                converged = true;
                break;
            }

            let mut accepted = false;
            while step >= MIN_STEP {
                let mut cand: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
                self.project(&mut cand);
                if log_abs_gain(&x, &cand) > 0.0 {
                    x = cand;
                    accepted = true;
                    step = (2.0 * step).min(MAX_STEP);
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                // no representable ascent left along the gradient
                break;
            }
            recorded_final = false;
        }
        if !recorded_final {
            let value = det_vandermonde(&x);
            let gradient_norm = riemannian_grad(&x).map(|g| norm(&g)).unwrap_or(f64::NAN);
            iterates.push(Iterate {
                point: x.clone(),
                value,
                gradient_norm,
            });
        }
        OptimizationTrace {
            seed,
            final_value: det_vandermonde(&x),
            final_point: x,
            iterates,
            converged,
        }
    }
}

impl OptimizerConfig {
    fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

fn single_run(cfg: &OptimizerConfig, hyperplane: bool) -> OptimizationTrace {
    Ascent {
        cfg,
        hyperplane,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    }
    .run()
}

/// Runs `cfg.restarts` independent ascents with seeds `seed, seed + 1, ...`.
///
/// Restarts execute on scoped threads; the result order is by seed.
pub fn run_restarts(cfg: &OptimizerConfig, hyperplane: bool) -> Result<Vec<OptimizationTrace>> {
    cfg.validate()?;
    let configs: Vec<OptimizerConfig> = (0..cfg.restarts as u64)
        .map(|r| cfg.with_seed(cfg.seed.wrapping_add(r)))
        .collect();
    let traces = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| scope.spawn(move || single_run(c, hyperplane)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ascent thread panicked"))
            .collect()
    });
    Ok(traces)
}

/// Best trace by final `|v_n|`; ties go to the lower seed.
pub fn best_trace(traces: &[OptimizationTrace]) -> Option<&OptimizationTrace> {
    traces.iter().fold(None, |best: Option<&OptimizationTrace>, t| match best {
        Some(b) if b.final_value.abs() >= t.final_value.abs() => Some(b),
        _ => Some(t),
    })
}

/// Best converged trace, or [`Error::MaxItersExceeded`] carrying the best unconverged one.
pub fn best_converged(traces: Vec<OptimizationTrace>) -> Result<OptimizationTrace> {
    let converged: Vec<OptimizationTrace> = traces.iter().filter(|t| t.converged).cloned().collect();
    match best_trace(&converged) {
        Some(best) => Ok(best.clone()),
        None => Err(Error::MaxItersExceeded {
            best: Box::new(best_trace(&traces).expect("at least one restart").clone()),
        }),
    }
}

/// Maximizes `|v_n|` over the unit sphere by projected gradient ascent with
/// backtracking; returns the best converged restart.
pub fn maximize_vn(cfg: &OptimizerConfig) -> Result<OptimizationTrace> {
    best_converged(run_restarts(cfg, false)?)
}

/// As [`maximize_vn`], with every iterate also projected onto `sum x_i = 0`.
pub fn hyperplane_restricted_maximize(cfg: &OptimizerConfig) -> Result<OptimizationTrace> {
    best_converged(run_restarts(cfg, true)?)
}
