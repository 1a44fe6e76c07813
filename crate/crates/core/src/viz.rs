//! Sphere grids of `v_n` over 2-spheres embedded in `R^n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{f17_vec, fmt_g17, F17};
use crate::matrix::{det_general, DenseMatrix};
use crate::vandermonde::{build_integer_exponent, det_vandermonde};

pub const DEFAULT_THETA_COUNT: usize = 720;
pub const DEFAULT_PHI_COUNT: usize = 360;

/// Column-orthonormal `n x 3` map from `t` to `x` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTransform {
    pub n: usize,
    pub matrix: DenseMatrix<f64>,
    pub label: &'static str,
}

impl EmbeddingTransform {
    pub fn for_dim(n: usize) -> Result<Self> {
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        // integer columns with their normalizing factors
        let (cols, scales, label): (Vec<[i8; 3]>, [f64; 3], &'static str) = match n {
            3 => (
                vec![[2, 0, 1], [-1, 1, 1], [-1, -1, 1]],
                [1.0 / 6f64.sqrt(), r2, 1.0 / 3f64.sqrt()],
                "t-basis",
            ),
            4 => (
                vec![[-1, -1, 0], [-1, 1, 0], [1, 0, -1], [1, 0, 1]],
                [0.5, r2, r2],
                "hyperplane",
            ),
            5 => (
                vec![[-1, 0, 1], [0, -1, 1], [0, 0, 1], [0, 1, 1], [1, 0, 1]],
                [r2, r2, 1.0 / 5f64.sqrt()],
                "symmetric-pairs",
            ),
            6 => (
                vec![[-1, 0, 0], [0, -1, 0], [0, 0, -1], [0, 0, 1], [0, 1, 0], [1, 0, 0]],
                [r2, r2, r2],
                "symmetric-pairs",
            ),
            7 => (
                vec![[-1, 0, 0], [0, -1, 0], [0, 0, -1], [0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]],
                [r2, r2, r2],
                "symmetric-pairs-center-zero",
            ),
            _ => return Err(Error::UnsupportedDimension { n }),
        };
        let matrix = DenseMatrix::from_fn(n, 3, |i, j| cols[i][j] as f64 * scales[j]);
        Ok(Self { n, matrix, label })
    }

    /// `max |M^T M - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.matrix.transpose().matmul(&self.matrix).expect("n x 3 product");
        gram.max_abs_diff(&DenseMatrix::identity(3)).expect("3 x 3")
    }
}

/// `(cos phi sin theta, sin phi, cos phi cos theta)`.
pub fn spherical_to_t(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [cp * st, sp, cp * ct]
}

pub fn embed(transform: &EmbeddingTransform, t: [f64; 3]) -> Vec<f64> {
    (0..transform.n)
        .map(|i| (0..3).map(|j| transform.matrix[(i, j)] * t[j]).sum())
        .collect()
}

/// `theta_i = 2 pi i / theta_count`, half-open.
pub fn theta_at(i: usize, theta_count: usize) -> f64 {
    std::f64::consts::TAU * i as f64 / theta_count as f64
}

/// `phi_j = -pi/2 + pi j / (phi_count - 1)`, both poles included.
pub fn phi_at(j: usize, phi_count: usize) -> f64 {
    -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * j as f64 / (phi_count - 1) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub n: usize,
    pub transform: EmbeddingTransform,
    pub exponents: Option<Vec<u32>>,
    pub theta_count: usize,
    pub phi_count: usize,
    /// Row-major by `phi` row, then `theta` column.
    pub values: Vec<f64>,
}

/// A lattice point with its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub theta_index: usize,
    pub phi_index: usize,
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

#[derive(Serialize)]
struct GridJson<'a> {
    n: usize,
    transform_label: &'a str,
    exponents: Option<&'a [u32]>,
    theta_count: usize,
    phi_count: usize,
    values: Vec<F17>,
}

impl SphereGrid {
    pub fn value(&self, theta_index: usize, phi_index: usize) -> f64 {
        self.values[phi_index * self.theta_count + theta_index]
    }

    pub fn point(&self, theta_index: usize, phi_index: usize) -> GridPoint {
        GridPoint {
            theta_index,
            phi_index,
            theta: theta_at(theta_index, self.theta_count),
            phi: phi_at(phi_index, self.phi_count),
            value: self.value(theta_index, phi_index),
        }
    }

    /// Ambient coordinates of a lattice point.
    pub fn coords(&self, theta_index: usize, phi_index: usize) -> Vec<f64> {
        let t = spherical_to_t(theta_at(theta_index, self.theta_count), phi_at(phi_index, self.phi_count));
        embed(&self.transform, t)
    }

    fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.phi_count).flat_map(move |j| (0..self.theta_count).map(move |i| self.point(i, j)))
    }

    /// First maximum in row-major order.
    pub fn max(&self) -> GridPoint {
        self.points()
            .reduce(|best, p| if p.value > best.value { p } else { best })
            .expect("non-empty grid")
    }

    /// First minimum in row-major order.
    pub fn min(&self) -> GridPoint {
        self.points()
            .reduce(|best, p| if p.value < best.value { p } else { best })
            .expect("non-empty grid")
    }

    /// Lattice index of the antipode `(theta + pi, -phi)`; needs an even `theta_count`.
    pub fn antipode(&self, theta_index: usize, phi_index: usize) -> Option<(usize, usize)> {
        if !self.theta_count.is_multiple_of(2) {
            return None;
        }
        Some((
            (theta_index + self.theta_count / 2) % self.theta_count,
            self.phi_count - 1 - phi_index,
        ))
    }

    /// Interior lattice points whose `|value|` strictly exceeds all eight
    /// neighbours, with `theta` wrapping around.
    pub fn local_abs_maxima(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for j in 1..self.phi_count.saturating_sub(1) {
            for i in 0..self.theta_count {
                let centre = self.value(i, j).abs();
                let mut strict = true;
                'nb: for dj in [-1i64, 0, 1] {
                    for di in [-1i64, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let ni = (i as i64 + di).rem_euclid(self.theta_count as i64) as usize;
                        let nj = (j as i64 + dj) as usize;
                        if self.value(ni, nj).abs() >= centre {
                            strict = false;
                            break 'nb;
                        }
                    }
                }
                if strict {
                    out.push(self.point(i, j));
                }
            }
        }
        out
    }

    /// Lattice edges, horizontal and vertical, whose endpoint values have
    /// strictly opposite signs. Returned as index pairs.
    pub fn sign_change_edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for j in 0..self.phi_count {
            for i in 0..self.theta_count {
                let v = self.value(i, j);
                let right = ((i + 1) % self.theta_count, j);
                if v * self.value(right.0, right.1) < 0.0 {
                    out.push(((i, j), right));
                }
                if j + 1 < self.phi_count && v * self.value(i, j + 1) < 0.0 {
                    out.push(((i, j), (i, j + 1)));
                }
            }
        }
        out
    }

    /// Zero-crossing bands not explained by a sign change of the ordinary
    /// `v_n`, as the mean `sum x_i` of each cluster of crossing edges.
    pub fn extra_zero_bands(&self) -> Vec<ZeroBand> {
        let mut sums: Vec<f64> = Vec::new();
        for (p, q) in self.sign_change_edges() {
            let xp = self.coords(p.0, p.1);
            let xq = self.coords(q.0, q.1);
            if det_vandermonde(&xp) * det_vandermonde(&xq) < 0.0 {
                continue;
            }
            let mid: f64 = xp.iter().zip(&xq).map(|(a, b)| 0.5 * (a + b)).sum();
            sums.push(mid);
        }
        sums.sort_by(f64::total_cmp);
        let mut bands: Vec<ZeroBand> = Vec::new();
        let mut start = 0;
        for k in 0..sums.len() {
            let last = k + 1 == sums.len();
            if last || sums[k + 1] - sums[k] > BAND_GAP {
                let members = &sums[start..=k];
                bands.push(ZeroBand {
                    mean_sum: members.iter().sum::<f64>() / members.len() as f64,
                    spread: members[members.len() - 1] - members[0],
                    edges: members.len(),
                });
                start = k + 1;
            }
        }
        bands
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48 + 16);
        out.push_str("theta,phi,value\n");
        for p in self.points() {
            out.push_str(&fmt_g17(p.theta));
            out.push(',');
            out.push_str(&fmt_g17(p.phi));
            out.push(',');
            out.push_str(&fmt_g17(p.value));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = GridJson {
            n: self.n,
            transform_label: self.transform.label,
            exponents: self.exponents.as_deref(),
            theta_count: self.theta_count,
            phi_count: self.phi_count,
            values: f17_vec(&self.values),
        };
        serde_json::to_string(&doc).expect("grid serializes")
    }
}

/// Gap in `sum x_i` separating two zero bands.
const BAND_GAP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBand {
    pub mean_sum: f64,
    pub spread: f64,
    pub edges: usize,
}

/// Evaluates `v_n`, or `g_3(x, a)` for integer `a`, over the `(theta, phi)` lattice.
pub fn grid_eval(n: usize, theta_count: usize, phi_count: usize, exponents: Option<Vec<u32>>) -> Result<SphereGrid> {
    let transform = EmbeddingTransform::for_dim(n)?;
    if theta_count < 2 || phi_count < 2 {
        return Err(Error::InvalidConfig(format!(
            "resolution {theta_count}x{phi_count} is below 2x2"
        )));
    }
    if let Some(a) = &exponents {
        if n != 3 {
            return Err(Error::GeneralizedOnlyFor3D { n });
        }
        if a.len() != 3 {
            return Err(Error::LengthMismatch { left: a.len(), right: 3 });
        }
    }

    let row = |j: usize| -> Result<Vec<f64>> {
        let phi = phi_at(j, phi_count);
        (0..theta_count)
            .map(|i| {
                let x = embed(&transform, spherical_to_t(theta_at(i, theta_count), phi));
                match &exponents {
                    None => Ok(det_vandermonde(&x)),
                    Some(a) => det_general(&build_integer_exponent(&x, a)),
                }
            })
            .collect()
    };

    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(phi_count);
    let chunk = phi_count.div_ceil(workers);
    let rows: Vec<Result<Vec<f64>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let row = &row;
                s.spawn(move || (w * chunk..((w + 1) * chunk).min(phi_count)).map(row).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("grid worker panicked"))
            .collect()
    });
    let mut values = Vec::with_capacity(theta_count * phi_count);
    for r in rows {
        values.extend(r?);
    }

    Ok(SphereGrid {
        n,
        transform,
        exponents,
        theta_count,
        phi_count,
        values,
    })
}

/// Rotation by `theta` about `(1, 1, 1)/sqrt 3`.
pub fn rodrigues_matrix(theta: f64) -> DenseMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let s3 = 3f64.sqrt() * s;
    let d = (2.0 * c + 1.0) / 3.0;
    let p = (1.0 - c + s3) / 3.0;
    let m = (1.0 - c - s3) / 3.0;
    DenseMatrix::from_row_major(3, 3, vec![d, m, p, p, d, m, m, p, d]).expect("3 x 3")
}

/// `R_theta (-1, 0, 1)/sqrt 2` and `v_3` there, which equals `cos(3 theta)/sqrt 2`.
pub fn rodrigues_circle(theta: f64) -> (Vec<f64>, f64) {
    let r = rodrigues_matrix(theta);
    let x0 = [-std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2];
    let x: Vec<f64> = (0..3).map(|i| (0..3).map(|j| r[(i, j)] * x0[j]).sum()).collect();
    let v = det_vandermonde(&x);
    (x, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn spherical_examples() {
        let t = spherical_to_t(0.0, 0.0);
        assert_eq!(t, [0.0, 0.0, 1.0]);
        let t = spherical_to_t(PI / 2.0, 0.0);
        assert!((t[0] - 1.0).abs() < 1e-16 && t[2].abs() < 1e-16);
    }

    #[test]
    fn transforms_are_orthonormal() {
        for n in 3..=7 {
            assert!(EmbeddingTransform::for_dim(n).unwrap().orthonormality_defect() < 1e-12, "n={n}");
        }
        assert!(EmbeddingTransform::for_dim(8).is_err());
        assert!(EmbeddingTransform::for_dim(2).is_err());
    }

    #[test]
    fn embed_pole_in_three_dims() {
        let tr = EmbeddingTransform::for_dim(3).unwrap();
        let x = embed(&tr, [0.0, 0.0, 1.0]);
        for xi in x {
            assert!((xi - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn five_dim_structure() {
        let tr = EmbeddingTransform::for_dim(5).unwrap();
        let t = spherical_to_t(0.7, 0.3);
        let x = embed(&tr, t);
        let sum: f64 = x.iter().sum();
        assert!((sum - 5f64.sqrt() * t[2]).abs() < 1e-14);
        let x = embed(&tr, spherical_to_t(PI / 2.0, 0.4));
        assert!(x[2].abs() < 1e-15);
        assert!((x[0] + x[4]).abs() < 1e-15 && (x[1] + x[3]).abs() < 1e-15);
    }

    #[test]
    fn lattice_layout() {
        let g = grid_eval(3, 8, 5, None).unwrap();
        assert_eq!(g.values.len(), 40);
        assert_eq!(phi_at(0, 5), -PI / 2.0);
        assert_eq!(phi_at(4, 5), PI / 2.0);
        assert!(theta_at(7, 8) < 2.0 * PI);
        let csv = g.to_csv();
        assert!(csv.starts_with("theta,phi,value\n"));
        assert_eq!(csv.lines().count(), 41);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(grid_eval(8, 4, 4, None), Err(Error::UnsupportedDimension { n: 8 })));
        assert!(matches!(grid_eval(4, 4, 4, Some(vec![0, 1, 2, 3])), Err(Error::GeneralizedOnlyFor3D { n: 4 })));
        assert!(grid_eval(3, 1, 4, None).is_err());
        assert!(grid_eval(3, 4, 4, Some(vec![0, 1])).is_err());
    }

    #[test]
    fn json_layout() {
        let g = grid_eval(3, 4, 3, Some(vec![0, 1, 3])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["exponents"], serde_json::json!([0, 1, 3]));
        assert_eq!(v["values"].as_array().unwrap().len(), 12);
        let g = grid_eval(4, 4, 3, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert!(v["exponents"].is_null());
    }

    #[test]
    fn rodrigues_examples() {
        let (x, v) = rodrigues_circle(0.0);
        assert!((x[0] + FRAC_1_SQRT_2).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-15);
        let (_, v) = rodrigues_circle(PI / 3.0);
        assert!((v + FRAC_1_SQRT_2).abs() < 1e-14);
        let (x, _) = rodrigues_circle(0.4);
        let (s, c) = 0.4f64.sin_cos();
        // first entry is -sqrt3 cos + sin so that the image stays in sum x = 0
        let expected = [-(3f64.sqrt()) * c + s, -2.0 * s, 3f64.sqrt() * c + s];
        for i in 0..3 {
            assert!((x[i] - expected[i] / 6f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn antipode_indices() {
        let g = grid_eval(4, 8, 5, None).unwrap();
        assert_eq!(g.antipode(1, 0), Some((5, 4)));
        assert_eq!(g.antipode(6, 2), Some((2, 2)));
        let odd = grid_eval(4, 7, 5, None).unwrap();
        assert_eq!(odd.antipode(0, 0), None);
    }
}
