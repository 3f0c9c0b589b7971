//! Fiedler vectors by restarted Krylov iteration on the graph Laplacian.
//!
//! The all-ones kernel is projected out of every basis vector, so the
//! smallest Ritz value of the projected operator approximates the
//! second-smallest Laplacian eigenvalue. Each cycle extends an orthonormal
//! basis to `max_basis` vectors with full reorthogonalization, then restarts
//! from the smallest few Ritz vectors plus the latest residual direction
//! (Krylov-Schur style thick restart).

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Relative residual target `|Lv - lv| <= tol * |Lv|`.
    pub tol: f64,
    /// Budget of Laplacian products; `None` means `10 n + 500`.
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub max_basis: usize,
    pub keep: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: DEFAULT_TOL, max_iter: None, seed: 0, max_basis: 40, keep: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerPair {
    /// Unit norm, orthogonal to the all-ones vector.
    pub vector: Vec<f64>,
    /// Rayleigh quotient of `vector`.
    pub value: f64,
    /// `|Lv - value v| / |Lv|`.
    pub relative_residual: f64,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for xi in x.iter_mut() {
        *xi -= mean;
    }
}

/// Orthogonalizes `w` against the ones vector and `basis` (two passes),
/// returning the accumulated projection coefficients.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        remove_mean(w);
        for (c, b) in coeffs.iter_mut().zip(basis) {
            let h = dot(b, w);
            axpy(-h, b, w);
            *c += h;
        }
    }
    coeffs
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut x: Vec<f64> = (0..n).map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5).collect();
        orthogonalize(&mut x, basis);
        let nx = norm(&x);
        if nx > 1e-10 {
            x.iter_mut().for_each(|xi| *xi /= nx);
            return Some(x);
        }
    }
    None
}

/// Flips the sign so that the entry of largest magnitude (first on ties) is positive.
fn normalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if libm::fabs(v[i]) > libm::fabs(v[best]) {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Eigenvector for the second-smallest eigenvalue of the Laplacian of a
/// connected graph with at least two vertices.
pub fn fiedler_vector(g: &WeightedGraph, opts: &EigenOptions) -> Result<FiedlerPair> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(alloc::format!("Fiedler vector needs n >= 2, got {n}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let budget = opts.max_iter.unwrap_or(10 * n + 500);
    let dim = n - 1;
    let max_basis = opts.max_basis.clamp(2, dim.max(2)).min(dim);
    let keep = opts.keep.clamp(1, max_basis.saturating_sub(1).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut matvecs = 0usize;
    let mut lw = vec![0.0; n];

    let start = random_unit(n, &mut rng, &[]).ok_or(Error::NoConvergence(0))?;
    let mut basis: Vec<Vec<f64>> = vec![start];
    // Ritz values carried over from the last restart (diagonal of the kept block)
    let mut kept_values: Vec<f64> = Vec::new();
    // columns[j] holds <v_i, L v_j> for i <= j, j >= kept
    let mut columns: Vec<Vec<f64>> = Vec::new();

    loop {
        let kept = kept_values.len();
        let mut residual: Option<Vec<f64>> = None;
        let mut j = basis.len() - 1;
        loop {
            g.laplacian_apply(&basis[j], &mut lw);
            matvecs += 1;
            let mut w = lw.clone();
            let coeffs = orthogonalize(&mut w, &basis);
            columns.push(coeffs);
            let beta = norm(&w);
            let scale = columns.last().map_or(1.0, |c| c.iter().fold(0.0f64, |m, x| m.max(libm::fabs(*x))));
            if beta <= 1e-12 * scale.max(1e-300) {
                break;
            }
            w.iter_mut().for_each(|x| *x /= beta);
            if basis.len() >= max_basis {
                residual = Some(w);
                break;
            }
            basis.push(w);
            j += 1;
        }

        let m = basis.len();
        let mut h = DMatrix::<f64>::zeros(m, m);
        for (i, &theta) in kept_values.iter().enumerate() {
            h[(i, i)] = theta;
        }
        for (offset, col) in columns.iter().enumerate() {
            let jj = kept + offset;
            for (i, &x) in col.iter().enumerate().take(jj + 1) {
                h[(i, jj)] = x;
                h[(jj, i)] = x;
            }
        }
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let ritz = |idx: usize| -> Vec<f64> {
            let mut y = vec![0.0; n];
            for (i, b) in basis.iter().enumerate() {
                axpy(eig.eigenvectors[(i, idx)], b, &mut y);
            }
            y
        };
        let mut y = ritz(order[0]);
        remove_mean(&mut y);
        let ny = norm(&y);
        if ny > 0.0 {
            y.iter_mut().for_each(|x| *x /= ny);
        }
        g.laplacian_apply(&y, &mut lw);
        matvecs += 1;
        let value = dot(&y, &lw);
        let mut r = lw.clone();
        axpy(-value, &y, &mut r);
        let ly_norm = norm(&lw);
        let rel = if ly_norm > 0.0 { norm(&r) / ly_norm } else { f64::INFINITY };
        if rel <= opts.tol {
            normalize_sign(&mut y);
            return Ok(FiedlerPair { vector: y, value, relative_residual: rel, matvecs });
        }
        if matvecs >= budget {
            return Err(Error::NoConvergence(matvecs));
        }

        // thick restart
        let p = keep.min(m);
        let mut new_basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
        let mut new_values = Vec::with_capacity(p);
        for &idx in order.iter().take(p) {
            let mut v = ritz(idx);
            orthogonalize(&mut v, &new_basis);
            let nv = norm(&v);
            if nv > 1e-10 {
                v.iter_mut().for_each(|x| *x /= nv);
                new_basis.push(v);
                new_values.push(eig.eigenvalues[idx]);
            }
        }
        let next = match residual {
            Some(mut w) => {
                orthogonalize(&mut w, &new_basis);
                let nw = norm(&w);
                if nw > 1e-10 {
                    w.iter_mut().for_each(|x| *x /= nw);
                    Some(w)
                } else {
                    random_unit(n, &mut rng, &new_basis)
                }
            }
            None => random_unit(n, &mut rng, &new_basis),
        };
        match next {
            Some(w) if new_basis.len() < dim => new_basis.push(w),
            _ => {
                // basis already spans the whole complement of the kernel
                return Err(Error::NoConvergence(matvecs));
            }
        }
        basis = new_basis;
        kept_values = new_values;
        columns.clear();
    }
}
