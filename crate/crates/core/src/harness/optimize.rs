//! Grid-then-refine maximisation over one or two drive axes.

use rayon::prelude::*;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    /// Best value on the coarse grid.
    pub grid_value: f64,
}

fn spacing(axis: &[f64], i: usize) -> f64 {
    if axis.len() < 2 {
        return 0.0;
    }
    let lo = if i > 0 { axis[i] - axis[i - 1] } else { f64::INFINITY };
    let hi = if i + 1 < axis.len() { axis[i + 1] - axis[i] } else { f64::INFINITY };
    lo.min(hi)
}

fn bounds(axis: &[f64]) -> (f64, f64) {
    axis.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
}

/// Evaluates `f` on the full `xs × ys` grid in parallel, then runs `rounds`
/// rounds of per-axis three-point quadratic refinement around the best
/// point, halving the step each round. Refinement only accepts
/// improvements and stays inside the grid's bounding box.
///
/// Returns the optimum and the grid values in `x`-major order.
pub fn maximize_2d<F>(f: F, xs: &[f64], ys: &[f64], rounds: usize) -> Result<(Optimum, Vec<f64>)>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let points: Vec<(usize, usize)> = (0..xs.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect();
    let values: Vec<f64> = points.par_iter().map(|&(i, j)| f(xs[i], ys[j])).collect::<Result<_>>()?;
    let best = (0..values.len()).fold(0, |b, k| if values[k] > values[b] { k } else { b });
    let (bi, bj) = points[best];
    let grid_value = values[best];

    let mut p = [xs[bi], ys[bj]];
    let mut value = grid_value;
    let mut h = [spacing(xs, bi), spacing(ys, bj)];
    let limits = [bounds(xs), bounds(ys)];
    let eval = |q: [f64; 2]| f(q[0], q[1]);
    for _ in 0..rounds {
        for axis in 0..2 {
            if h[axis] == 0.0 {
                continue;
            }
            let (lo, hi) = limits[axis];
            let shifted = |d: f64| {
                let mut q = p;
                q[axis] = (p[axis] + d).clamp(lo, hi);
                q
            };
            let (qm, qp) = (shifted(-h[axis]), shifted(h[axis]));
            let (fm, fp) = (eval(qm)?, eval(qp)?);
            let mut cands = vec![(qm, fm), (qp, fp)];
            let curv = fm - 2.0 * value + fp;
            if curv < 0.0 {
                let d = (0.5 * h[axis] * (fm - fp) / curv).clamp(-h[axis], h[axis]);
                let qv = shifted(d);
                cands.push((qv, eval(qv)?));
            }
            for (q, v) in cands {
                if v > value {
                    p = q;
                    value = v;
                }
            }
        }
        h = [h[0] / 2.0, h[1] / 2.0];
    }
    Ok((Optimum { x: p[0], y: p[1], value, grid_value }, values))
}

/// One-dimensional version of [`maximize_2d`].
pub fn maximize_1d<F>(f: F, xs: &[f64], rounds: usize) -> Result<(Optimum, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    maximize_2d(|x, _| f(x), xs, &[0.0], rounds)
}

/// Vertex of the parabola through the grid maximum and its neighbours.
/// Falls back to the grid point at the edges or when the data are not
/// locally concave.
pub fn parabolic_peak(xs: &[f64], ys: &[f64]) -> (f64, f64, bool) {
    let i = (0..ys.len()).fold(0, |b, k| if ys[k] > ys[b] { k } else { b });
    if i == 0 || i + 1 >= ys.len() {
        return (xs[i], ys[i], false);
    }
    let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a >= 0.0 {
        return (x1, y1, true);
    }
    let xv = 0.5 * (x0 + x1) - d01 / (2.0 * a);
    let yv = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
    (xv, yv, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn quadratic_maximum_found_exactly() {
        let f = |x: f64, y: f64| Ok(1.0 - (x - 0.37).powi(2) - 2.0 * (y + 0.21).powi(2));
        let (opt, vals) = maximize_2d(f, &grid(-1.0, 1.0, 21), &grid(-1.0, 1.0, 21), 3).unwrap();
        assert_eq!(vals.len(), 441);
        assert!((opt.x - 0.37).abs() < 1e-9 && (opt.y + 0.21).abs() < 1e-9, "{opt:?}");
        assert!(opt.value >= opt.grid_value);
    }

    #[test]
    fn refinement_never_degrades() {
        let f = |x: f64, y: f64| Ok((5.0 * x).sin() * (3.0 * y).cos() + 0.1 * x);
        for rounds in 0..5 {
            let (opt, vals) = maximize_2d(f, &grid(-2.0, 2.0, 21), &grid(-2.0, 2.0, 21), rounds).unwrap();
            let best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(opt.grid_value, best);
            assert!(opt.value >= best);
        }
    }

    #[test]
    fn stays_inside_the_box() {
        let f = |x: f64, _y: f64| Ok(x);
        let (opt, _) = maximize_2d(f, &grid(0.0, 1.0, 5), &[0.0], 3).unwrap();
        assert_eq!(opt.x, 1.0);
    }

    #[test]
    fn parabolic_peak_of_parabola() {
        let xs = grid(0.0, 4.0, 9);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - (x - 1.8).powi(2)).collect();
        let (x, y, interior) = parabolic_peak(&xs, &ys);
        assert!(interior && (x - 1.8).abs() < 1e-12 && (y - 2.0).abs() < 1e-12);
        let (_, _, interior) = parabolic_peak(&xs, &xs);
        assert!(!interior);
    }
}
