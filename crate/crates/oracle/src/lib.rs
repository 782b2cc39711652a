//! Slow, independent reference computations. Nothing here shares code with
//! the solver crate: the stencil is rebuilt from the raw mask and all
//! eigenproblems are solved densely.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// A raw masked grid: `inside[j * nx + i]`, spacing `h`.
pub struct RawMask<'a> {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub inside: &'a [bool],
}

impl RawMask<'_> {
    /// Interior cell indices in row-major order.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.nx * self.ny).filter(|&k| self.inside[k]).collect()
    }

    /// Dense `−Δ_h + diag(v)` on the interior cells, Dirichlet outside.
    pub fn operator(&self, v: &[f64]) -> DMatrix<f64> {
        let cells = self.interior();
        let n = cells.len();
        let mut pos = vec![usize::MAX; self.nx * self.ny];
        for (s, &k) in cells.iter().enumerate() {
            pos[k] = s;
        }
        let inv_h2 = 1.0 / (self.h * self.h);
        let mut a = DMatrix::zeros(n, n);
        for (s, &k) in cells.iter().enumerate() {
            a[(s, s)] = 4.0 * inv_h2 + v[s];
            let (i, j) = ((k % self.nx) as i64, (k / self.nx) as i64);
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ii, jj) = (i + di, j + dj);
                if ii < 0 || jj < 0 || ii >= self.nx as i64 || jj >= self.ny as i64 {
                    continue;
                }
                let t = pos[jj as usize * self.nx + ii as usize];
                if t != usize::MAX {
                    a[(s, t)] = -inv_h2;
                }
            }
        }
        a
    }
}

/// Principal eigenpair of `A φ = Λ diag(g) φ` by a dense solve of the
/// Cholesky-reduced pencil. Returns `(Λ, φ)` with `‖φ‖₂ = 1`, `Σφ > 0`, or
/// `None` if `A` is not positive definite or `g` has no positive part.
pub fn dense_principal(mask: &RawMask, v: &[f64], g: &[f64]) -> Option<(f64, Vec<f64>)> {
    let a = mask.operator(v);
    let n = a.nrows();
    let chol = a.cholesky()?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse()?;
    let b = DMatrix::from_diagonal(&DVector::from_column_slice(g));
    let c = &l_inv * b * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let (k, mu) = eig.eigenvalues.iter().copied().enumerate().max_by(|x, y| x.1.total_cmp(&y.1))?;
    if mu <= 0.0 {
        return None;
    }
    let y = eig.eigenvectors.column(k).into_owned();
    let z = l_inv.transpose() * y;
    let norm = z.norm();
    let sign = if z.sum() < 0.0 { -1.0 } else { 1.0 };
    let phi = (0..n).map(|s| sign * z[s] / norm).collect();
    Some((1.0 / mu, phi))
}

/// All eigenvalues of `−Δ_h + diag(v)`, ascending.
pub fn dense_spectrum(mask: &RawMask, v: &[f64]) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(mask.operator(v)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Closed-form eigenvalue `(4/h²)(sin²(pπh/2) + sin²(qπh/2))` of the 5-point
/// Laplacian on the unit square with spacing `h = 1/n`.
pub fn unit_square_eigenvalue(n: usize, p: usize, q: usize) -> f64 {
    let h = 1.0 / n as f64;
    let s = |k: usize| (k as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2);
    4.0 / (h * h) * (s(p) + s(q))
}

/// First positive zero of the Bessel function J0, squared: the principal
/// Dirichlet eigenvalue of the unit disk. Found by bisection on the power
/// series of J0.
pub fn bessel_j0_first_zero_squared() -> f64 {
    fn j0(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let q = -(x * x) / 4.0;
        for k in 1..60 {
            term *= q / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0(lo) * j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    z * z
}

/// Every distinct ordering of a multiset, generated in lexicographic order.
pub fn distinct_permutations(values: &[f64]) -> Vec<Vec<f64>> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out = vec![v.clone()];
    loop {
        let n = v.len();
        if n < 2 {
            return out;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| v[i].total_cmp(&v[i + 1]).is_lt()) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| v[i].total_cmp(&v[j]).is_lt()).expect("exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

/// `(min, max)` of `Σ f·h` over every ordering `f` of `values`.
pub fn pairing_extremes(values: &[f64], h: &[f64]) -> (f64, f64) {
    distinct_permutations(values)
        .iter()
        .map(|f| f.iter().zip(h).map(|(a, b)| a * b).sum::<f64>())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
}
