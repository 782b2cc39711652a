//! Principal eigenpair of `A φ = Λ B φ` with `A = −Δ_h + diag(V)` and
//! `B = diag(g)`.
//!
//! `A` is symmetric positive definite once coercivity is established, so the
//! solver works with `T = A⁻¹B`, which is self-adjoint in the `A` inner
//! product. Its largest eigenvalue `μ` gives `Λ = 1/μ`. Each outer step
//! applies `A⁻¹` by Jacobi-preconditioned conjugate gradients, and the next
//! iterate is the Rayleigh–Ritz maximizer of `zᵀBz / zᵀAz` over
//! `{current, T·current − μ·current, previous step}`. Without the third
//! vector this is plain power iteration on `T`; with it, thin domains whose
//! first two eigenvalues nearly coincide converge in a few hundred steps
//! rather than tens of thousands.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::DomainMask;

const NONE: u32 = u32::MAX;

/// Five-point `−Δ_h` plus `diag(V)` on the interior cells of a mask.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    mask: Arc<DomainMask>,
    inv_h2: f64,
    potential: Vec<f64>,
    nbrs: Vec<[u32; 4]>,
}

impl SparseOperator {
    pub fn new(potential: &ScalarField) -> Self {
        let mask = potential.mask().clone();
        let nbrs = (0..mask.len()).map(|s| mask.neighbors(s).map(|n| n.map_or(NONE, |t| t as u32))).collect();
        let h = mask.grid().h;
        Self { inv_h2: 1.0 / (h * h), potential: potential.values().to_vec(), nbrs, mask }
    }

    pub fn mask(&self) -> &Arc<DomainMask> {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.nbrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbrs.is_empty()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn diagonal(&self, s: usize) -> f64 {
        4.0 * self.inv_h2 + self.potential[s]
    }

    /// `y = A x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (s, nb) in self.nbrs.iter().enumerate() {
            let mut off = 0.0;
            for &t in nb {
                if t != NONE {
                    off += x[t as usize];
                }
            }
            y[s] = (4.0 * x[s] - off) * self.inv_h2 + self.potential[s] * x[s];
        }
    }

    /// Operator with the same mask and stencil but `V = 0`.
    pub fn laplacian(&self) -> Self {
        Self { potential: vec![0.0; self.len()], ..self.clone() }
    }

    /// `xᵀAx`, summed link by link so that it matches the Dirichlet energy.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let grad = self.mask.link_energy(x) / (self.mask.grid().h * self.mask.grid().h);
        grad + self.potential.iter().zip(x).map(|(v, a)| v * a * a).sum::<f64>()
    }
}

/// Operator `A` for potential `V` together with the weight diagonal `g`.
pub fn assemble(potential: &ScalarField, weight: &ScalarField) -> Result<(SparseOperator, Vec<f64>)> {
    if !potential.same_mask(weight) {
        return Err(Error::MaskMismatch);
    }
    Ok((SparseOperator::new(potential), weight.values().to_vec()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned CG for `A x = b`, warm-started from `x`.
/// Returns the iteration count, or an error on non-positive curvature.
fn conjugate_gradient(op: &SparseOperator, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<usize> {
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let inv_diag: Vec<f64> = (0..n).map(|s| 1.0 / op.diagonal(s)).collect();
    let mut ax = vec![0.0; n];
    op.apply(x, &mut ax);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        if norm(&r) <= rel_tol * bnorm {
            return Ok(it);
        }
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::NonCoercive { lambda_min: pap / dot(&p, &p) });
        }
        let alpha = rz / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        for k in 0..n {
            z[k] = r[k] * inv_diag[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    Ok(max_iter)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Target for `‖Aφ − ΛBφ‖₂ / ‖Aφ‖₂`.
    pub tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_outer: 5000, max_inner: 20_000, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda: f64,
    /// `‖φ‖₂ = 1` in the plain cell sum, strictly positive.
    pub phi: ScalarField,
    pub residual: f64,
    pub outer_iters: usize,
    pub inner_cg_iters: usize,
}

/// Raw outcome of the pencil iteration before sign fixing.
struct PencilSolution {
    mu: f64,
    x: Vec<f64>,
    residual: f64,
    outer: usize,
    inner: usize,
}

fn random_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.5..1.5)).collect()
}

/// Largest `μ` of `B z = μ A z` for diagonal `B = diag(w)`.
fn largest_pencil_eigen(op: &SparseOperator, w: &[f64], start: &[f64], opts: &EigenOptions) -> Result<PencilSolution> {
    let n = op.len();
    let mut x = start.to_vec();
    let mut ax = vec![0.0; n];
    let mut p: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut inner = 0;
    let mut sol = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut mu = f64::NAN;
    let mut seen_positive = false;

    for outer in 0..=opts.max_outer {
        op.apply(&x, &mut ax);
        let xax = dot(&x, &ax);
        if xax <= 0.0 {
            return Err(Error::NonCoercive { lambda_min: xax / dot(&x, &x) });
        }
        let s = 1.0 / xax.sqrt();
        x.iter_mut().for_each(|v| *v *= s);
        ax.iter_mut().for_each(|v| *v *= s);
        let bx: Vec<f64> = w.iter().zip(&x).map(|(g, v)| g * v).collect();
        mu = dot(&x, &bx);
        if mu > 0.0 {
            seen_positive = true;
            let lam = 1.0 / mu;
            let r: f64 = ax.iter().zip(&bx).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            residual = r / norm(&ax);
            if residual <= opts.tol {
                return Ok(PencilSolution { mu, x, residual, outer, inner });
            }
        }
        if outer == opts.max_outer {
            break;
        }

        // T x − μ x, with T x = A⁻¹ B x from a warm-started CG solve
        let cg_tol = if residual.is_finite() { (0.01 * residual).clamp(1e-14, 1e-2) } else { 1e-2 };
        inner += conjugate_gradient(op, &bx, &mut sol, cg_tol, opts.max_inner)?;
        let mut d: Vec<f64> = sol.iter().zip(&x).map(|(t, v)| t - mu * v).collect();
        let mut ad = vec![0.0; n];
        op.apply(&d, &mut ad);

        // A-orthonormal basis of span{x, d, p}
        let mut basis: Vec<(Vec<f64>, Vec<f64>)> = vec![(x.clone(), ax.clone())];
        let mut cands = vec![(std::mem::take(&mut d), std::mem::take(&mut ad))];
        if let Some(prev) = p.take() {
            cands.push(prev);
        }
        for (mut v, mut av) in cands {
            let before = dot(&v, &av);
            if before <= 0.0 || !before.is_finite() {
                if before < 0.0 {
                    return Err(Error::NonCoercive { lambda_min: before / dot(&v, &v) });
                }
                continue;
            }
            for _ in 0..2 {
                for (q, aq) in &basis {
                    let c = dot(aq, &v);
                    for k in 0..n {
                        v[k] -= c * q[k];
                        av[k] -= c * aq[k];
                    }
                }
            }
            let after = dot(&v, &av);
            if after <= 1e-20 * before {
                continue;
            }
            let s = 1.0 / after.sqrt();
            v.iter_mut().for_each(|a| *a *= s);
            av.iter_mut().for_each(|a| *a *= s);
            basis.push((v, av));
        }

        let k = basis.len();
        let bq: Vec<Vec<f64>> = basis.iter().map(|(q, _)| w.iter().zip(q).map(|(g, v)| g * v).collect()).collect();
        let m = DMatrix::from_fn(k, k, |a, b| 0.5 * (dot(&basis[a].0, &bq[b]) + dot(&basis[b].0, &bq[a])));
        let eig = SymmetricEigen::new(m);
        let (best, _) = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty basis");
        let c = eig.eigenvectors.column(best);

        let mut xn = vec![0.0; n];
        let mut pn = vec![0.0; n];
        let mut apn = vec![0.0; n];
        for (a, (q, aq)) in basis.iter().enumerate() {
            for t in 0..n {
                xn[t] += c[a] * q[t];
            }
            if a > 0 {
                for t in 0..n {
                    pn[t] += c[a] * q[t];
                    apn[t] += c[a] * aq[t];
                }
            }
        }
        if k > 1 {
            p = Some((pn, apn));
        }
        // keep the warm start aligned with the new iterate
        if c[0] < 0.0 {
            xn.iter_mut().for_each(|v| *v = -*v);
            if let Some((pv, apv)) = p.as_mut() {
                pv.iter_mut().for_each(|v| *v = -*v);
                apv.iter_mut().for_each(|v| *v = -*v);
            }
        }
        x = xn;
        let sx = sol.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().signum();
        if sx < 0.0 {
            sol.iter_mut().for_each(|v| *v = -*v);
        }
    }
    if !seen_positive {
        return Err(Error::NoPositiveDirection);
    }
    Err(Error::NotConverged { iters: opts.max_outer, residual: if mu > 0.0 { residual } else { f64::INFINITY } })
}

/// `‖φ‖₂ = 1` and `Σφ > 0`.
fn normalize_sign(x: &mut [f64]) {
    let s = norm(x);
    let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    x.iter_mut().for_each(|v| *v *= sign / s);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityReport {
    pub lambda_min_a: f64,
    pub lambda_min_laplacian: f64,
    /// `λ_min(A) / λ_min(−Δ_h)`
    pub delta0: f64,
}

/// Smallest admissible coercivity margin.
pub const MIN_DELTA0: f64 = 1e-6;

fn smallest_eigenvalue(op: &SparseOperator, tol: f64) -> Result<(f64, Vec<f64>)> {
    let n = op.len();
    let opts = EigenOptions { tol, ..EigenOptions::default() };
    let sol = largest_pencil_eigen(op, &vec![1.0; n], &random_start(n, 0x5eed), &opts)?;
    let mut x = sol.x;
    normalize_sign(&mut x);
    Ok((1.0 / sol.mu, x))
}

/// Estimates `λ_min(A)` by inverse iteration and compares it with
/// `λ_min(−Δ_h)`. A ground state of `A` that changes sign means the iteration
/// settled on an interior eigenvalue of an indefinite operator.
pub fn coercivity_check(op: &SparseOperator) -> Result<CoercivityReport> {
    let (lap, _) = smallest_eigenvalue(&op.laplacian(), 1e-10)?;
    let (lam, x) = match smallest_eigenvalue(op, 1e-10) {
        Ok(v) => v,
        Err(Error::NonCoercive { lambda_min }) => return Err(Error::NonCoercive { lambda_min }),
        Err(Error::NotConverged { .. }) => return Err(Error::NonCoercive { lambda_min: f64::NAN }),
        Err(e) => return Err(e),
    };
    let peak = x.iter().copied().fold(0.0, f64::max);
    if x.iter().any(|&v| v < -POSITIVITY_RTOL * peak) {
        return Err(Error::NonCoercive { lambda_min: lam });
    }
    if lam <= MIN_DELTA0 * lap {
        return Err(Error::NonCoercive { lambda_min: lam });
    }
    Ok(CoercivityReport { lambda_min_a: lam, lambda_min_laplacian: lap, delta0: lam / lap })
}

/// Entries of a returned eigenvector may dip below zero by at most this
/// fraction of its peak.
pub const POSITIVITY_RTOL: f64 = 1e-8;

pub fn solve_first(op: &SparseOperator, g: &[f64], opts: &EigenOptions) -> Result<EigenResult> {
    solve_first_from(op, g, opts, None)
}

/// As [`solve_first`], starting from `start` when given (e.g. the previous
/// eigenvector of a nearby problem) instead of a seeded random field.
pub fn solve_first_from(
    op: &SparseOperator,
    g: &[f64],
    opts: &EigenOptions,
    start: Option<&[f64]>,
) -> Result<EigenResult> {
    let n = op.len();
    if g.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: g.len() });
    }
    if let Some(k) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(k));
    }
    if !g.iter().any(|&v| v > 0.0) {
        return Err(Error::NoPositiveWeight);
    }
    let x0 = match start {
        Some(s) if s.len() == n && s.iter().any(|&v| v != 0.0) => s.to_vec(),
        _ => random_start(n, opts.seed),
    };
    let sol = largest_pencil_eigen(op, g, &x0, opts)?;
    let mut phi = sol.x;
    normalize_sign(&mut phi);
    // far from the support of g the true φ can sit below round-off, where
    // the iterate carries sign noise; only a clear sign change is an error
    let peak = phi.iter().copied().fold(0.0, f64::max);
    let positive = peak > 0.0;
    if !positive || phi.iter().any(|&v| v < -POSITIVITY_RTOL * peak) {
        return Err(Error::NotPositive);
    }
    let phi = ScalarField::new(op.mask().clone(), phi)?;
    let lambda = rayleigh(op, g, &phi)?;
    Ok(EigenResult { lambda, phi, residual: sol.residual, outer_iters: sol.outer, inner_cg_iters: sol.inner })
}

/// `φᵀAφ / φᵀBφ`
pub fn rayleigh(op: &SparseOperator, g: &[f64], phi: &ScalarField) -> Result<f64> {
    let x = phi.values();
    let den: f64 = g.iter().zip(x).map(|(w, v)| w * v * v).sum();
    // NaN lands here too
    let positive = den > 0.0;
    if !positive {
        return Err(Error::NonPositiveDenominator);
    }
    Ok(op.quadratic_form(x) / den)
}

/// `‖Aφ − λBφ‖₂ / ‖Aφ‖₂`
pub fn relative_residual(op: &SparseOperator, g: &[f64], lambda: f64, phi: &[f64]) -> f64 {
    let mut ax = vec![0.0; phi.len()];
    op.apply(phi, &mut ax);
    let r: f64 = ax.iter().zip(g.iter().zip(phi)).map(|(a, (w, v))| (a - lambda * w * v).powi(2)).sum::<f64>().sqrt();
    r / norm(&ax)
}

#[derive(Debug, Clone)]
pub struct SimplicityReport {
    pub lambdas: Vec<f64>,
    /// Smallest `|cos|` between any two normalized eigenvectors.
    pub min_abs_cos: f64,
    /// `(max Λ − min Λ) / min Λ`
    pub relative_spread: f64,
    pub simple: bool,
}

/// Solves from `trials` independent random starts and compares the results.
pub fn simplicity_check(
    op: &SparseOperator,
    g: &[f64],
    trials: usize,
    opts: &EigenOptions,
) -> Result<SimplicityReport> {
    let mut phis: Vec<Vec<f64>> = Vec::with_capacity(trials);
    let mut lambdas = Vec::with_capacity(trials);
    for t in 0..trials {
        let o = EigenOptions { seed: opts.seed.wrapping_add(t as u64 * 0x9e37_79b9), ..*opts };
        let r = solve_first(op, g, &o)?;
        lambdas.push(r.lambda);
        phis.push(r.phi.into_values());
    }
    let mut min_abs_cos: f64 = 1.0;
    for a in 0..phis.len() {
        for b in a + 1..phis.len() {
            min_abs_cos = min_abs_cos.min(dot(&phis[a], &phis[b]).abs());
        }
    }
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let relative_spread = if lambdas.is_empty() { 0.0 } else { (hi - lo) / lo };
    let simple = min_abs_cos >= 1.0 - 1e-8 && relative_spread <= 1e-8;
    Ok(SimplicityReport { lambdas, min_abs_cos, relative_spread, simple })
}

/// Strict positivity of every interior value.
pub fn positivity_check(phi: &ScalarField) -> bool {
    !phi.is_empty() && phi.values().iter().all(|&v| v > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_disk_mask, Grid2D};

    fn unit_square(n: usize) -> Arc<DomainMask> {
        Arc::new(DomainMask::full(Grid2D::unit_square(n).unwrap()).unwrap())
    }

    fn closed_form(n: usize) -> f64 {
        let h = 1.0 / n as f64;
        8.0 / (h * h) * (std::f64::consts::PI * h / 2.0).sin().powi(2)
    }

    #[test]
    fn single_cell_operator() {
        let m = Arc::new(DomainMask::full(Grid2D::new(3, 3, 1.0, [0.0, 0.0]).unwrap()).unwrap());
        let (op, _) =
            assemble(&ScalarField::zeros(m.clone()), &ScalarField::constant(m.clone(), 1.0).unwrap()).unwrap();
        let mut y = [0.0];
        op.apply(&[1.0], &mut y);
        assert_eq!(y, [4.0]);
        let shifted = SparseOperator::new(&ScalarField::constant(m, 2.5).unwrap());
        shifted.apply(&[1.0], &mut y);
        assert_eq!(y, [6.5]);
        let r = solve_first(&shifted, &[1.0], &EigenOptions::default()).unwrap();
        assert!((r.lambda - 6.5).abs() < 1e-12);
    }

    #[test]
    fn three_by_three_square() {
        let m = unit_square(4);
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let r = solve_first(&op, &[1.0; 9], &EigenOptions { tol: 1e-13, ..Default::default() }).unwrap();
        let exact = 128.0 * (std::f64::consts::PI / 8.0).sin().powi(2);
        assert!((exact - closed_form(4)).abs() < 1e-12);
        assert!((r.lambda - exact).abs() < 1e-10 * exact, "{}", r.lambda);
        assert!(positivity_check(&r.phi));
        let c = coercivity_check(&op).unwrap();
        assert!((c.lambda_min_a - exact).abs() < 1e-8 * exact);
        assert!((c.delta0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn weight_scaling() {
        let m = unit_square(8);
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let n = m.len();
        let a = solve_first(&op, &vec![1.0; n], &EigenOptions::default()).unwrap();
        let b = solve_first(&op, &vec![3.0; n], &EigenOptions::default()).unwrap();
        assert!((a.lambda / 3.0 - b.lambda).abs() < 1e-9 * a.lambda);
    }

    #[test]
    fn non_coercive_potential() {
        let m = unit_square(4);
        let lap = closed_form(4);
        let op = SparseOperator::new(&ScalarField::constant(m, -1.5 * lap).unwrap());
        assert!(matches!(coercivity_check(&op), Err(Error::NonCoercive { .. })));
    }

    #[test]
    fn nonnegative_potential_margin() {
        let m = unit_square(6);
        let v = ScalarField::from_fn(m, |_, x| 10.0 * x[0]).unwrap();
        let c = coercivity_check(&SparseOperator::new(&v)).unwrap();
        assert!(c.delta0 >= 1.0);
    }

    #[test]
    fn weight_without_positive_part() {
        let m = unit_square(4);
        let op = SparseOperator::new(&ScalarField::zeros(m));
        assert_eq!(solve_first(&op, &[-1.0; 9], &EigenOptions::default()).unwrap_err(), Error::NoPositiveWeight);
        assert_eq!(solve_first(&op, &[0.0; 9], &EigenOptions::default()).unwrap_err(), Error::NoPositiveWeight);
    }

    #[test]
    fn sign_changing_weight() {
        let m = unit_square(10);
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let g = ScalarField::from_fn(m, |_, x| if x[0] < 0.5 { 1.0 } else { -2.0 }).unwrap();
        let r = solve_first(&op, g.values(), &EigenOptions::default()).unwrap();
        assert!(r.lambda > 0.0);
        let m2: f64 = g.values().iter().zip(r.phi.values()).map(|(w, p)| w * p * p).sum();
        assert!(m2 > 0.0);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn rayleigh_properties() {
        let g = Grid2D::covering(16, 1.0).unwrap();
        let m = Arc::new(make_disk_mask(g, [0.0, 0.0], 1.0).unwrap());
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let w = vec![1.0; m.len()];
        let r = solve_first(&op, &w, &EigenOptions::default()).unwrap();
        assert!((rayleigh(&op, &w, &r.phi).unwrap() - r.lambda).abs() < 1e-14 * r.lambda);
        let scaled = r.phi.with_values(r.phi.values().iter().map(|v| 7.0 * v).collect()).unwrap();
        assert!((rayleigh(&op, &w, &scaled).unwrap() - r.lambda).abs() < 1e-12 * r.lambda);
        let z = ScalarField::zeros(m);
        assert_eq!(rayleigh(&op, &w, &z).unwrap_err(), Error::NonPositiveDenominator);
    }

    #[test]
    fn simplicity_on_square_and_single_cell() {
        let m = unit_square(12);
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let rep =
            simplicity_check(&op, &vec![1.0; m.len()], 5, &EigenOptions { tol: 1e-12, ..Default::default() }).unwrap();
        assert!(rep.simple, "{rep:?}");
        let one = Arc::new(DomainMask::full(Grid2D::new(3, 3, 1.0, [0.0, 0.0]).unwrap()).unwrap());
        let op1 = SparseOperator::new(&ScalarField::zeros(one));
        assert!(simplicity_check(&op1, &[1.0], 3, &EigenOptions::default()).unwrap().simple);
    }

    #[test]
    fn positivity() {
        let m = unit_square(4);
        let op = SparseOperator::new(&ScalarField::zeros(m.clone()));
        let r = solve_first(&op, &[1.0; 9], &EigenOptions::default()).unwrap();
        assert!(positivity_check(&r.phi));
        let neg = r.phi.with_values(r.phi.values().iter().map(|v| -v).collect()).unwrap();
        assert!(!positivity_check(&neg));
        assert!(!positivity_check(&ScalarField::zeros(m)));
    }
}
