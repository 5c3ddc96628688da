use super::function::{lagrange_eval, Grid, Interval, RealFunction, Tail};
use crate::{Error, Result};

/// Eight-point Gauss–Legendre rule on [-1, 1] as (node, weight) pairs.
pub const GAUSS_LEGENDRE_8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    GAUSS_LEGENDRE_8.iter().map(|&(x, w)| w * f(m + r * x)).sum::<f64>() * r
}

/// Integral over `[a, b] ⊂ [x_k, x_{k+1}]` of the exact evaluator if present,
/// otherwise of the local eight-point interpolant.
fn panel(f: &RealFunction, k: usize, a: f64, b: f64) -> f64 {
    match f.exact() {
        Some(ev) => gl(|x| ev(x), a, b),
        None => gl(|x| lagrange_eval(f.nodes(), f.values(), k, x), a, b),
    }
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let simpson_even = |v: &[f64]| -> f64 {
        let m = v.len() - 1;
        let mut s = v[0] + v[m];
        for (i, &y) in v.iter().enumerate().take(m).skip(1) {
            s += if i % 2 == 1 { 4.0 * y } else { 2.0 * y };
        }
        s * h / 3.0
    };
    if n.is_multiple_of(2) {
        simpson_even(values)
    } else {
        let m = n - 3;
        let tail = &values[m..];
        simpson_even(&values[..=m]) + 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3])
    }
}

/// Composite Simpson over the full sample set of a uniform grid, Gauss–Legendre
/// panels on the local interpolant otherwise.
pub fn integrate_samples(grid: &Grid) -> f64 {
    match grid.uniform_spacing() {
        Some(h) => simpson(grid.values(), h),
        None => {
            let f = RealFunction::from_grid(grid.clone());
            (0..grid.len() - 1).map(|k| panel(&f, k, grid.nodes()[k], grid.nodes()[k + 1])).sum()
        }
    }
}

/// Integral of `f` over `iv`, with contributions beyond the grid span taken in
/// closed form from the declared tail models.
pub fn integrate(f: &RealFunction, iv: Interval) -> Result<f64> {
    if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo >= iv.hi {
        return Err(Error::InvalidInterval { lo: iv.lo, hi: iv.hi });
    }
    let g = f.grid();
    let (x0, xn) = (g.lo(), g.hi());
    let n = g.len();
    let mut total = 0.0;

    if iv.lo < x0 {
        let end = iv.hi.min(x0);
        let tail = g.left_tail();
        let fb = g.values()[0];
        total += tail.integral(x0, fb, end)? - tail.integral(x0, fb, iv.lo)?;
    }
    if iv.hi > xn {
        let start = iv.lo.max(xn);
        let tail = g.right_tail();
        let fb = g.values()[n - 1];
        total += tail.integral(xn, fb, iv.hi)? - tail.integral(xn, fb, start)?;
    }

    let a = iv.lo.max(x0);
    let b = iv.hi.min(xn);
    if a < b {
        if a == x0 && b == xn && g.uniform_spacing().is_some() {
            total += integrate_samples(g);
        } else {
            let ka = g.locate(a);
            let kb = g.locate(b);
            for k in ka..=kb {
                let lo = a.max(g.nodes()[k]);
                let hi = b.min(g.nodes()[k + 1]);
                if hi > lo {
                    total += panel(f, k, lo, hi);
                }
            }
        }
    }
    Ok(total)
}

/// `F(x) = ∫_base^x f` sampled on the nodes of `f`.
///
/// Tails of `F`: a zero tail of `f` gives a constant tail, a constant tail of
/// `f` gives an affine one, and a power-decay tail gives the constant limit.
pub fn cumulative_integral(f: &RealFunction, base: f64) -> Result<RealFunction> {
    let g = f.grid();
    let nodes = g.nodes();
    let n = nodes.len();
    let mut prefix = vec![0.0; n];
    for k in 0..n - 1 {
        prefix[k + 1] = prefix[k] + panel(f, k, nodes[k], nodes[k + 1]);
    }
    let offset = if base < nodes[0] {
        g.left_tail().integral(nodes[0], g.values()[0], base)?
    } else if base > nodes[n - 1] {
        prefix[n - 1] + g.right_tail().integral(nodes[n - 1], g.values()[n - 1], base)?
    } else {
        let k = g.locate(base);
        prefix[k] + panel(f, k, nodes[k], base)
    };
    let values: Vec<f64> = prefix.iter().map(|p| p - offset).collect();
    let tail_of = |tail: Tail, edge: f64, fe: f64, fv: f64, right: bool| -> Result<Tail> {
        Ok(match tail {
            Tail::Zero => Tail::Affine { slope: 0.0, intercept: fv },
            Tail::Affine { slope, intercept } if slope == 0.0 => Tail::Affine { slope: intercept, intercept: fv - intercept * edge },
            Tail::PowerDecay { .. } => {
                let inf = if right { f64::INFINITY } else { f64::NEG_INFINITY };
                Tail::Affine { slope: 0.0, intercept: fv + tail.integral(edge, fe, inf)? }
            }
            Tail::Affine { .. } => {
                return Err(Error::InvalidGrid("cumulative integral of a non-constant affine tail".into()))
            }
        })
    };
    let left = tail_of(g.left_tail(), nodes[0], g.values()[0], values[0], false)?;
    let right = tail_of(g.right_tail(), nodes[n - 1], g.values()[n - 1], values[n - 1], true)?;
    RealFunction::from_samples(nodes.to_vec(), values, left, right)
}
