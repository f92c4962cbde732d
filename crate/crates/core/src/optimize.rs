//! Derivative-free minimization: Nelder–Mead with adaptive coefficients,
//! followed by an optional finite-difference descent polish.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// initial simplex edge
    pub step: f64,
    /// stop when the spread of simplex values falls below this
    pub ftol: f64,
    /// and the simplex diameter below this
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            step: 0.1,
            ftol: 1e-12,
            xtol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Nelder–Mead with the dimension-dependent coefficients of Gao and Han,
/// which behave better than the classical ones above a handful of variables.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(x0),
            evals: 1,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += if x[i] == 0.0 { opts.step } else { opts.step * x[i].abs().max(1.0) };
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut converged = false;
    let mut last_restart_value: Option<f64> = None;
    while evals.get() < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.ftol * (1.0 + best.abs()) && diameter <= opts.xtol {
            // a collapsed simplex can stall on kinks: rebuild it once around the
            // best point and stop only if that brings no improvement
            if last_restart_value.is_some_and(|v| best >= v) {
                converged = true;
                break;
            }
            last_restart_value = Some(best);
            let x0 = simplex[0].0.clone();
            for (i, entry) in simplex.iter_mut().skip(1).enumerate() {
                let mut x = x0.clone();
                x[i] += opts.step;
                let v = eval(&x);
                *entry = (x, v);
            }
            continue;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(rho);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = x_best
                        .iter()
                        .zip(&entry.0)
                        .map(|(b, xi)| b + sigma * (xi - b))
                        .collect();
                    let v = eval(&x);
                    *entry = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evals: evals.get(),
        converged,
    }
}

/// Steepest descent on central-difference gradients with backtracking.
/// Never returns a worse point than `x0`.
pub fn fd_refine<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], iterations: usize, h: f64) -> Minimum {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evals = 1;
    for _ in 0..iterations {
        let mut grad = vec![0.0; x.len()];
        for i in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            grad[i] = (f(&xp) - f(&xm)) / (2.0 * h);
            evals += 2;
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        let mut step = 0.1;
        let mut improved = false;
        while step > 1e-12 {
            let trial: Vec<f64> = x.iter().zip(&grad).map(|(xi, g)| xi - step * g / norm).collect();
            let ft = f(&trial);
            evals += 1;
            if ft < fx {
                x = trial;
                fx = ft;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Minimum {
        x,
        value: fx,
        evals,
        converged: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_evals: 5000,
            ..Default::default()
        };
        let m = nelder_mead(rosen, &[-1.2, 1.0], &opts);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn handles_kinks_and_higher_dimension() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64).abs()).sum::<f64>();
        let m = nelder_mead(f, &[0.5; 8], &NelderMeadOptions { max_evals: 20000, ..Default::default() });
        assert!(m.value < 1e-6, "{}", m.value);
    }

    #[test]
    fn refinement_never_worsens() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2);
        let m = fd_refine(f, &[0.0, 0.0], 50, 1e-6);
        assert!(m.value < 1e-6);
        let g = |x: &[f64]| x[0].abs();
        let m = fd_refine(g, &[0.0], 10, 1e-6);
        assert_eq!(m.value, 0.0);
    }
}
