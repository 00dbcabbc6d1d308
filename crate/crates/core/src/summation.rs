//! Fixed-order reductions.
//!
//! Every quadrature sum in the crate goes through [`pairwise_sum`], which
//! splits the slice at the midpoint recursively. The combining tree depends
//! only on the slice length, so results are bit-identical across runs and
//! thread schedules.

use std::ops::Add;

const BLOCK: usize = 16;

pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    if xs.len() <= BLOCK {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Composite trapezoid rule on a uniform grid with spacing `h`.
pub fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let mut terms = values.to_vec();
            terms[0] *= 0.5;
            terms[n - 1] *= 0.5;
            pairwise_sum(&terms) * h
        }
    }
}

/// Composite trapezoid rule on a sorted, possibly non-uniform grid.
pub fn trapezoid(xs: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), values.len());
    let terms: Vec<f64> = xs
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
        .collect();
    pairwise_sum(&terms)
}
