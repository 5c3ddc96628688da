use super::function::{Grid, RealFunction};
use crate::{Error, Result};

const WIDTH: usize = 9;

/// Fornberg's finite-difference weights: `w[m][j]` approximates the `m`-th
/// derivative at `z` from samples at `xs[j]`, for `m = 0..=max_order`.
pub fn fornberg_weights(z: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn start(n: usize, w: usize, i: usize) -> usize {
    i.saturating_sub(w / 2).min(n - w)
}

pub(crate) fn derivative_samples(grid: &Grid, order: usize) -> Result<Vec<f64>> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidParameter(format!("derivative order {order} not in 1..=3")));
    }
    let n = grid.len();
    let w = WIDTH.min(n);
    if w < order + 2 {
        return Err(Error::GridTooCoarse(format!("{n} nodes for order {order}")));
    }
    let x = grid.nodes();
    let y = grid.values();
    let mut out = vec![0.0; n];
    if let Some(h) = grid.uniform_spacing() {
        let local: Vec<f64> = (0..w).map(|j| j as f64 * h).collect();
        let mut cache: Vec<Option<Vec<f64>>> = vec![None; w];
        for i in 0..n {
            let s = start(n, w, i);
            let off = i - s;
            let wts = cache[off].get_or_insert_with(|| fornberg_weights(local[off], &local, order)[order].clone());
            out[i] = wts.iter().zip(&y[s..s + w]).map(|(a, b)| a * (b - y[i])).sum();
        }
    } else {
        for i in 0..n {
            let s = start(n, w, i);
            let wts = &fornberg_weights(x[i], &x[s..s + w], order)[order];
            out[i] = wts.iter().zip(&y[s..s + w]).map(|(a, b)| a * (b - y[i])).sum();
        }
    }
    Ok(out)
}

/// Derivative of order 1, 2 or 3 on the same nodes using nine-point
/// stencils, one-sided near the ends.
pub fn differentiate(f: &RealFunction, order: usize) -> Result<RealFunction> {
    let values = derivative_samples(f.grid(), order)?;
    let (left, right) = f.derivative_tails(order);
    RealFunction::from_samples(f.nodes().to_vec(), values, left, right)
}
