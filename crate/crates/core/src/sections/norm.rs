use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::FiniteSection;
use crate::scalar::{self, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Auto,
    DenseSvd,
    PowerIteration,
}

#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    pub method: NormMethod,
    /// Largest dimension handled by dense SVD under `Auto`.
    pub dense_limit: usize,
    /// Relative change of the Rayleigh quotient that stops power iteration.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            method: NormMethod::Auto,
            dense_limit: 512,
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
    pub converged: bool,
}

enum Dense {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

fn to_dense<R: Real>(a: &FiniteSection<R>) -> Dense {
    let (rows, cols) = (a.rows(), a.cols());
    let real = a.entries().iter().all(|v| v.im.is_zero());
    if real {
        Dense::Real(DMatrix::from_fn(rows, cols, |m, l| a.get(m, l).re.to_f64()))
    } else {
        Dense::Complex(DMatrix::from_fn(rows, cols, |m, l| {
            scalar::to_c64(a.get(m, l))
        }))
    }
}

/// Singular values in descending order (dense SVD).
pub fn singular_values<R: Real>(a: &FiniteSection<R>) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = match to_dense(a) {
        Dense::Real(m) => m.singular_values().iter().copied().collect(),
        Dense::Complex(m) => m.singular_values().iter().copied().collect(),
    };
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value of the section.
pub fn op_norm<R: Real>(a: &FiniteSection<R>) -> f64 {
    op_norm_with(a, &NormOptions::default()).value
}

pub fn op_norm_with<R: Real>(a: &FiniteSection<R>, opts: &NormOptions) -> NormEstimate {
    if a.rows() == 0 || a.cols() == 0 || a.is_zero() {
        return NormEstimate {
            value: 0.0,
            method: NormMethod::DenseSvd,
            iterations: 0,
            converged: true,
        };
    }
    let dense = match opts.method {
        NormMethod::DenseSvd => true,
        NormMethod::PowerIteration => false,
        NormMethod::Auto => a.rows().max(a.cols()) <= opts.dense_limit,
    };
    if dense {
        return NormEstimate {
            value: singular_values(a)[0],
            method: NormMethod::DenseSvd,
            iterations: 0,
            converged: true,
        };
    }
    let (value, iterations, converged) = match to_dense(a) {
        Dense::Real(m) => power_iteration(&m, opts),
        Dense::Complex(m) => power_iteration(&m, opts),
    };
    NormEstimate {
        value,
        method: NormMethod::PowerIteration,
        iterations,
        converged,
    }
}

/// Power iteration on `AᴴA` from the all-ones start vector.
fn power_iteration<T: ComplexField<RealField = f64>>(
    a: &DMatrix<T>,
    opts: &NormOptions,
) -> (f64, usize, bool) {
    let n = a.ncols();
    let mut v = DVector::<T>::from_element(n, T::one());
    v.unscale_mut(v.norm());
    let mut lambda = 0.0;
    for it in 1..=opts.max_iter {
        let u = a * &v;
        let next = u.norm_squared();
        let w = a.ad_mul(&u);
        let wn = w.norm();
        if wn == 0.0 {
            return (0.0, it, true);
        }
        v = w.unscale(wn);
        if (next - lambda).abs() <= opts.tol * next {
            return (next.sqrt(), it, true);
        }
        lambda = next;
    }
    (lambda.sqrt(), opts.max_iter, false)
}
