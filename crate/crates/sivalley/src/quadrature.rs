//! Gauss–Legendre quadrature used as an independent oracle for the
//! closed-form matrix elements. Deliberately kept free of any dependence on
//! the analytic integral code it checks.

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrates a complex-valued function over [a, b] with panelled 16-point
/// Gauss–Legendre. `freq` is the highest angular frequency present in the
/// integrand (rad per unit length); panels are chosen to place at least 40
/// sample points per oscillation period.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, freq: f64) -> Complex64 {
    const ORDER: usize = 16;
    let span = (b - a).abs();
    let periods = span * freq.abs() / (2.0 * std::f64::consts::PI);
    let panels = ((periods * 40.0 / ORDER as f64).ceil() as usize).max(4);
    let (nodes, weights) = gauss_legendre(ORDER);
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            total += f(mid + half * x) * (w * half);
        }
    }
    total
}

/// Real-valued convenience wrapper around [`integrate_complex`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, freq: f64) -> f64 {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, freq).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_symmetric_weights_sum_to_two() {
        for n in [2, 5, 16, 31] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for i in 0..n {
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // 16-point rule integrates x^31 exactly
        let v = integrate(|x| x.powi(31) + 3.0 * x.powi(4), -1.0, 1.0, 1.0);
        assert!((v - 6.0 / 5.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn oscillatory_sine_integral() {
        let q = 50.0;
        let v = integrate_complex(|x| Complex64::new(0.0, q * x).exp(), 0.0, 1.0, q);
        let exact = (Complex64::new(0.0, q).exp() - 1.0) / Complex64::new(0.0, q);
        assert!((v - exact).norm() < 1e-12);
    }
}
