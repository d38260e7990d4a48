//! Product sine basis on a centered box and the closed-form 1D integrals
//! used to assemble every Hamiltonian matrix element.
//!
//! Basis functions per axis: φ_n(u) = √(2/L)·sin(nπ(u + L/2)/L) on
//! u ∈ [−L/2, L/2], n = 1..N. All matrix elements, including the violently
//! oscillatory inter-valley ones (e^{iqz} with q ≈ 19.7 nm⁻¹, period 0.32 nm),
//! reduce to integrals of e^{iαu} and u·e^{iαu} over subintervals, which are
//! evaluated in closed form here.

use num_complex::Complex64;

/// Per-axis basis description: mode count and embedding-box length (nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBasis {
    pub n_modes: usize,
    pub length: f64,
}

/// Three-axis basis with the fixed lexicographic (n_x, n_y, n_z) index map.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub axes: [AxisBasis; 3],
}

impl BasisSet {
    pub fn new(n_modes: [usize; 3], lengths: [f64; 3]) -> Self {
        BasisSet {
            axes: [
                AxisBasis {
                    n_modes: n_modes[0],
                    length: lengths[0],
                },
                AxisBasis {
                    n_modes: n_modes[1],
                    length: lengths[1],
                },
                AxisBasis {
                    n_modes: n_modes[2],
                    length: lengths[2],
                },
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.axes[0].n_modes * self.axes[1].n_modes * self.axes[2].n_modes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of the mode triple (1-based per axis), lexicographic in
    /// (n_x, n_y, n_z). This ordering is part of the file-format contract.
    pub fn flat_index(&self, modes: [usize; 3]) -> usize {
        let [_, ny, nz] = [
            self.axes[0].n_modes,
            self.axes[1].n_modes,
            self.axes[2].n_modes,
        ];
        (modes[0] - 1) * ny * nz + (modes[1] - 1) * nz + (modes[2] - 1)
    }

    /// Mode triple for a flat index (inverse of [`flat_index`]).
    pub fn modes(&self, flat: usize) -> [usize; 3] {
        let ny = self.axes[1].n_modes;
        let nz = self.axes[2].n_modes;
        [flat / (ny * nz) + 1, (flat / nz) % ny + 1, flat % nz + 1]
    }
}

/// φ_n evaluated at u on a centered box of length `l`.
pub fn phi(n: usize, l: f64, u: f64) -> f64 {
    (2.0 / l).sqrt() * (n as f64 * std::f64::consts::PI * (u + 0.5 * l) / l).sin()
}

/// dφ_n/du at u.
pub fn dphi(n: usize, l: f64, u: f64) -> f64 {
    let k = n as f64 * std::f64::consts::PI / l;
    (2.0 / l).sqrt() * k * (k * (u + 0.5 * l)).cos()
}

/// ∫_{z1}^{z2} e^{iαu} du.
pub fn int_exp(alpha: f64, z1: f64, z2: f64) -> Complex64 {
    let scale = alpha.abs() * (z1.abs() + z2.abs() + (z2 - z1).abs());
    if scale < 1e-4 {
        // Taylor series in α; relative truncation error below 1e-25 here.
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pk = Complex64::new(1.0, 0.0); // (iα)^k / k!
        let ia = Complex64::new(0.0, alpha);
        let mut p1 = z1;
        let mut p2 = z2;
        for k in 0..=6 {
            sum += pk * ((p2 - p1) / (k as f64 + 1.0));
            pk *= ia / (k as f64 + 1.0);
            p1 *= z1;
            p2 *= z2;
        }
        sum
    } else {
        let ia = Complex64::new(0.0, alpha);
        ((ia * z2).exp() - (ia * z1).exp()) / ia
    }
}

/// ∫_{z1}^{z2} u·e^{iαu} du.
pub fn int_z_exp(alpha: f64, z1: f64, z2: f64) -> Complex64 {
    let scale = alpha.abs() * (z1.abs() + z2.abs() + (z2 - z1).abs());
    if scale < 1e-4 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pk = Complex64::new(1.0, 0.0);
        let ia = Complex64::new(0.0, alpha);
        let mut p1 = z1 * z1;
        let mut p2 = z2 * z2;
        for k in 0..=6 {
            sum += pk * ((p2 - p1) / (k as f64 + 2.0));
            pk *= ia / (k as f64 + 1.0);
            p1 *= z1;
            p2 *= z2;
        }
        sum
    } else {
        let ia = Complex64::new(0.0, alpha);
        let f = |z: f64| (ia * z).exp() * (Complex64::new(0.0, -z / alpha) + 1.0 / (alpha * alpha));
        f(z2) - f(z1)
    }
}

/// Weight function inside the 1D kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    /// The coordinate u itself (centered on the box).
    Linear,
}

/// The generic 1D kernel:
/// ∫_{z1}^{z2} φ_m^{(dm)}(u) · e^{−iqu} · w(u) · φ_n^{(dn)}(u) du
/// with dm, dn ∈ {0, 1} and w ∈ {1, u}, in closed form.
pub fn sine_exp_element(
    m: usize,
    n: usize,
    dm: u8,
    dn: u8,
    q: f64,
    l: f64,
    weight: Weight,
    z1: f64,
    z2: f64,
) -> Complex64 {
    let km = m as f64 * std::f64::consts::PI / l;
    let kn = n as f64 * std::f64::consts::PI / l;
    // sin(k(u+L/2)) = Σ_{t=±1} (t/2i)·e^{itkL/2}·e^{itku};
    // each derivative multiplies the t-term by (itk).
    let coeff = |k: f64, t: f64, d: u8| -> Complex64 {
        let base = Complex64::new(0.0, -0.5 * t); // t/(2i)
        let phase = Complex64::new(0.0, t * k * 0.5 * l).exp();
        let deriv = match d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, t * k),
            _ => unreachable!("derivative order above 1 is never needed"),
        };
        base * phase * deriv
    };
    let mut sum = Complex64::new(0.0, 0.0);
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            let alpha = s * km + t * kn - q;
            let base = match weight {
                Weight::One => int_exp(alpha, z1, z2),
                Weight::Linear => int_z_exp(alpha, z1, z2),
            };
            sum += coeff(km, s, dm) * coeff(kn, t, dn) * base;
        }
    }
    sum * (2.0 / l)
}

/// ⟨φ_m| u |φ_n⟩ over the full centered box, exact formula.
/// Nonzero only for m + n odd: −8Lmn/(π²(m² − n²)²).
pub fn dipole_element(m: usize, n: usize, l: f64) -> f64 {
    if (m + n) % 2 == 0 {
        return 0.0;
    }
    let (mf, nf) = (m as f64, n as f64);
    let d = mf * mf - nf * nf;
    -8.0 * l * mf * nf / (std::f64::consts::PI.powi(2) * d * d)
}

/// ⟨φ_m| u² |φ_n⟩ over the full centered box, exact formula.
pub fn second_moment_element(m: usize, n: usize, l: f64) -> f64 {
    if m == n {
        let nf = n as f64;
        l * l * (1.0 / 12.0 - 0.5 / (std::f64::consts::PI * nf).powi(2))
    } else if (m + n) % 2 == 0 {
        let (mf, nf) = (m as f64, n as f64);
        2.0 * l * l / std::f64::consts::PI.powi(2)
            * (1.0 / (mf - nf).powi(2) - 1.0 / (mf + nf).powi(2))
    } else {
        0.0
    }
}

/// ⟨φ_m| d/du |φ_n⟩ over the full box, exact formula: 4mn/(L(m² − n²)) for
/// m + n odd, zero otherwise. Antisymmetric in (m, n).
pub fn deriv_element(m: usize, n: usize, l: f64) -> f64 {
    if (m + n) % 2 == 0 {
        return 0.0;
    }
    let (mf, nf) = (m as f64, n as f64);
    4.0 * mf * nf / (l * (mf * mf - nf * nf))
}

/// ⟨φ_m|φ_n⟩ restricted to the centered subinterval [−a/2, a/2].
pub fn interior_overlap(m: usize, n: usize, l: f64, a: f64) -> f64 {
    sine_exp_element(m, n, 0, 0, 0.0, l, Weight::One, -0.5 * a, 0.5 * a).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_complex;

    #[test]
    fn flat_index_is_lexicographic_and_invertible() {
        let b = BasisSet::new([3, 4, 5], [8.0, 12.0, 6.0]);
        let mut prev = None;
        for nx in 1..=3 {
            for ny in 1..=4 {
                for nz in 1..=5 {
                    let f = b.flat_index([nx, ny, nz]);
                    if let Some(p) = prev {
                        assert_eq!(f, p + 1);
                    }
                    prev = Some(f);
                    assert_eq!(b.modes(f), [nx, ny, nz]);
                }
            }
        }
        assert_eq!(b.len(), 60);
    }

    #[test]
    fn dipole_one_two_standard_value() {
        let l = 6.0;
        let v = dipole_element(1, 2, l);
        let expected = -16.0 * l / (9.0 * std::f64::consts::PI.powi(2));
        assert!((v - expected).abs() < 1e-15, "{v} vs {expected}");
        assert_eq!(dipole_element(1, 1, l), 0.0);
        assert_eq!(dipole_element(1, 3, l), 0.0);
    }

    #[test]
    fn deriv_element_antisymmetric() {
        let l = 7.3;
        for m in 1..=6 {
            for n in 1..=6 {
                assert_eq!(deriv_element(m, n, l), -deriv_element(n, m, l));
            }
        }
    }

    #[test]
    fn orthonormality_via_kernel() {
        let l = 9.1;
        for m in 1..=5 {
            for n in 1..=5 {
                let v = sine_exp_element(m, n, 0, 0, 0.0, l, Weight::One, -0.5 * l, 0.5 * l);
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((v.re - expect).abs() < 1e-13 && v.im.abs() < 1e-13);
            }
        }
    }

    fn quad_check(m: usize, n: usize, dm: u8, dn: u8, q: f64, l: f64, w: Weight, z1: f64, z2: f64) {
        let closed = sine_exp_element(m, n, dm, dn, q, l, w, z1, z2);
        let f = |u: f64| {
            let a = if dm == 0 { phi(m, l, u) } else { dphi(m, l, u) };
            let b = if dn == 0 { phi(n, l, u) } else { dphi(n, l, u) };
            let wv = match w {
                Weight::One => 1.0,
                Weight::Linear => u,
            };
            Complex64::new(0.0, -q * u).exp() * (a * wv * b)
        };
        let freq = q.abs() + (m + n) as f64 * std::f64::consts::PI / l;
        let quad = integrate_complex(f, z1, z2, freq);
        let scale = closed.norm().max(1.0 / l);
        assert!(
            (closed - quad).norm() / scale < 1e-8,
            "m={m} n={n} dm={dm} dn={dn} q={q} w={w:?}: {closed} vs {quad}"
        );
    }

    #[test]
    fn kernel_matches_quadrature_across_regimes() {
        let l = 10.0;
        let q = 19.672;
        for (m, n) in [(1, 1), (1, 2), (3, 5), (8, 8), (2, 7)] {
            quad_check(m, n, 0, 0, q, l, Weight::One, -0.5 * l, 0.5 * l);
            quad_check(m, n, 0, 0, q, l, Weight::Linear, -0.5 * l, 0.5 * l);
            quad_check(m, n, 0, 1, q, l, Weight::Linear, -0.5 * l, 0.5 * l);
            quad_check(m, n, 1, 0, q, l, Weight::One, -3.0, 3.0);
            quad_check(m, n, 0, 0, 0.0, l, Weight::Linear, -2.0, 2.0);
        }
    }

    #[test]
    fn second_moment_matches_quadrature() {
        let l = 8.0;
        for m in 1..=6 {
            for n in 1..=6 {
                let closed = second_moment_element(m, n, l);
                let f = |u: f64| Complex64::new(phi(m, l, u) * u * u * phi(n, l, u), 0.0);
                let quad = integrate_complex(f, -0.5 * l, 0.5 * l, (m + n) as f64 / l).re;
                assert!((closed - quad).abs() < 1e-10 * l * l, "({m},{n}): {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn interior_overlap_limits() {
        let l = 10.0;
        // full interval recovers orthonormality
        assert!((interior_overlap(2, 2, l, l) - 1.0).abs() < 1e-13);
        // odd-parity pairs vanish on the symmetric subinterval
        assert!(interior_overlap(1, 2, l, 6.0).abs() < 1e-14);
    }

    #[test]
    fn small_alpha_series_continuity() {
        // The series and closed-form branches must agree near the threshold.
        for &alpha in &[5e-6, 2e-5, 1e-4, 3e-4] {
            let a = int_exp(alpha, -4.0, 3.0);
            let b = {
                let ia = Complex64::new(0.0, alpha);
                ((ia * 3.0).exp() - (ia * -4.0).exp()) / ia
            };
            assert!((a - b).norm() < 1e-11, "alpha={alpha}: {a} vs {b}");
            let c = int_z_exp(alpha, -4.0, 3.0);
            let d = {
                let f = |z: f64| {
                    (Complex64::new(0.0, alpha) * z).exp()
                        * (Complex64::new(0.0, -z / alpha) + 1.0 / (alpha * alpha))
                };
                f(3.0) - f(-4.0)
            };
            assert!((c - d).norm() < 1e-9, "alpha={alpha}: {c} vs {d}");
        }
    }
}
