//! Small dense minimizers: Nelder–Mead for locating a basin and BFGS for
//! polishing with an analytic gradient.

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// Initial edge length along each axis.
    pub step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            f_tol: 1e-10,
            step: 0.25,
        }
    }
}

/// Nelder–Mead with the standard coefficients (1, 2, 1/2, 1/2). Non-finite
/// values are treated as +inf, so the simplex backs away from them.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: NelderMeadOptions) -> Minimum {
    let dim = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut evaluations = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    evaluations += dim + 1;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if (worst - best).abs() <= opts.f_tol * (1.0 + best.abs()) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|p| p.0[j]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + coef * (w - c))
                .collect()
        };

        let xr = towards(-1.0);
        let fr = eval(&xr);
        evaluations += 1;
        if fr < best {
            let xe = towards(-2.0);
            let fe = eval(&xe);
            evaluations += 1;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let x = towards(-0.5);
            let v = eval(&x);
            (x, v)
        } else {
            let x = towards(0.5);
            let v = eval(&x);
            (x, v)
        };
        evaluations += 1;
        if fc < worst.min(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let x_best = simplex[0].0.clone();
        for p in simplex.iter_mut().skip(1) {
            for (xj, bj) in p.0.iter_mut().zip(&x_best) {
                *xj = bj + 0.5 * (*xj - bj);
            }
            p.1 = eval(&p.0);
        }
        evaluations += dim;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Minimum {
        x,
        f,
        iterations,
        evaluations,
        converged,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Converged when the gradient's ∞-norm falls below this...
    pub grad_tol: f64,
    /// ...and the last relative change in f is below this.
    pub f_rel_tol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            grad_tol: 1e-6,
            f_rel_tol: 1e-10,
        }
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS on the inverse Hessian with a backtracking Armijo line search.
/// `fg` returns the value and the gradient together.
pub fn bfgs<F: Fn(&[f64]) -> (f64, Vec<f64>)>(fg: F, x0: &[f64], opts: BfgsOptions) -> Minimum {
    let dim = x0.len();
    let mut x = x0.to_vec();
    let (mut f, mut g) = fg(&x);
    let mut evaluations = 1;
    let mut h = identity(dim);
    let mut last_rel_change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        if !f.is_finite() {
            break;
        }
        if inf_norm(&g) < opts.grad_tol
            && (last_rel_change < opts.f_rel_tol || inf_norm(&g) < 1e-3 * opts.grad_tol)
        {
            converged = true;
            break;
        }
        iterations += 1;

        let mut dir: Vec<f64> = (0..dim).map(|i| -dot(&h[i], &g)).collect();
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            // not a descent direction; restart from steepest descent
            h = identity(dim);
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&dir, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = fg(&trial);
            evaluations += 1;
            if !ft.is_finite() {
                step *= 0.5;
                continue;
            }
            // Near the optimum of a large objective the decrease drops below
            // rounding in f; then accept on curvature alone (approximate
            // Wolfe conditions of Hager and Zhang).
            let noise = 64.0 * f64::EPSILON * (1.0 + f.abs());
            let slope_t = dot(&gt, &dir);
            let approx_wolfe = ft <= f + noise && slope_t >= 0.9 * slope && slope_t <= -0.8 * slope;
            if ft <= f + 1e-4 * step * slope || approx_wolfe {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            // no progress possible along any tried step
            converged = inf_norm(&g) < opts.grad_tol;
            break;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if iterations == 1 {
                // scale the initial inverse Hessian
                let scale = sy / dot(&y, &y);
                for (i, row) in h.iter_mut().enumerate() {
                    row.iter_mut().for_each(|v| *v = 0.0);
                    row[i] = scale;
                }
            }
            let hy: Vec<f64> = (0..dim).map(|i| dot(&h[i], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..dim {
                for j in 0..dim {
                    h[i][j] +=
                        (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        last_rel_change = (f - f_new).abs() / (1.0 + f.abs());
        x = x_new;
        f = f_new;
        g = g_new;
    }
    if !converged && inf_norm(&g) < opts.grad_tol && last_rel_change < opts.f_rel_tol {
        converged = true;
    }
    Minimum {
        x,
        f,
        iterations,
        evaluations,
        converged,
    }
}

fn identity(dim: usize) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > x_tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    fn rosenbrock_grad(x: &[f64]) -> (f64, Vec<f64>) {
        (
            rosenbrock(x),
            vec![
                -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
                200.0 * (x[1] - x[0] * x[0]),
            ],
        )
    }

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let m = nelder_mead(
            rosenbrock,
            &[-1.2, 1.0],
            NelderMeadOptions {
                max_iter: 2000,
                f_tol: 1e-14,
                step: 0.5,
            },
        );
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn bfgs_polishes_to_tight_gradient() {
        let m = bfgs(rosenbrock_grad, &[-1.2, 1.0], BfgsOptions::default());
        assert!(m.converged, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bfgs_on_quadratic() {
        let fg = |x: &[f64]| {
            let f = 3.0 * x[0] * x[0] + x[0] * x[1] + 2.0 * x[1] * x[1] - x[0] + 5.0;
            (f, vec![6.0 * x[0] + x[1] - 1.0, x[0] + 4.0 * x[1]])
        };
        let m = bfgs(fg, &[3.0, -2.0], BfgsOptions::default());
        assert!(m.converged);
        // solve [[6,1],[1,4]] x = [1,0]
        assert!((m.x[0] - 4.0 / 23.0).abs() < 1e-8);
        assert!((m.x[1] + 1.0 / 23.0).abs() < 1e-8);
    }

    #[test]
    fn bfgs_converges_when_f_differences_are_below_rounding() {
        // A large offset and curvature, as in a likelihood over many points.
        let fg = |x: &[f64]| {
            let (a, b) = (x[0] - 1.0, x[1] + 2.0);
            let f = 1e4 + 1e3 * (a * a + 10.0 * b * b + a * b);
            (f, vec![1e3 * (2.0 * a + b), 1e3 * (20.0 * b + a)])
        };
        let m = bfgs(fg, &[0.3, -1.1], BfgsOptions::default());
        assert!(m.converged, "{m:?}");
        assert!(
            (m.x[0] - 1.0).abs() < 1e-9 && (m.x[1] + 2.0).abs() < 1e-9,
            "{m:?}"
        );
    }

    #[test]
    fn golden_section() {
        let (x, fx) = golden_max(|x| -(x - 0.3f64).powi(2) + 2.0, -4.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }
}
