//! Two-qubit coupled-dot gate algebra: the 4×4 Hamiltonian in the
//! |11⟩, |10⟩, |01⟩, |00⟩ basis, a closed-form evolution operator implemented
//! verbatim (it is not exactly unitary away from the uncoupled limit, and its
//! unitarity defect is reported rather than corrected), an exact
//! eigendecomposition oracle, and the SWAP protocol variants.
//!
//! The default sign convention is U = exp(+iHt) with ħ = 1, i.e. `t` carries
//! units of 1/eV when energies are in eV; [`SignConvention::Physical`]
//! switches to exp(−iHt/ħ) with `t` in seconds.

use crate::units::HBAR_EV_S;
use num_complex::Complex64;

pub type Mat4 = [[Complex64; 4]; 4];

/// Phase convention of the evolution operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// U = exp(+iHt), ħ = 1, t in 1/eV.
    #[default]
    PositivePhase,
    /// U = exp(−iHt/ħ), t in seconds.
    Physical,
}

impl SignConvention {
    /// Maps (E, t) to the phase angle θ in e^{iθ}.
    fn theta(&self, energy_ev: f64, t: f64) -> f64 {
        match self {
            SignConvention::PositivePhase => energy_ev * t,
            SignConvention::Physical => -energy_ev * t / HBAR_EV_S,
        }
    }
}

/// Two-electron model: diagonal energies and the |10⟩↔|01⟩ coupling, eV.
#[derive(Debug, Clone, Copy)]
pub struct TwoQubitModel {
    pub e_11: f64,
    pub e_10: f64,
    pub e_01: f64,
    pub e_00: f64,
    pub e_c: f64,
}

/// The symmetric special case E_11 = 3Δ, E_10 = E_01 = Δ, E_00 = −Δ,
/// E_c = δ, for which the closed-form operator is written.
#[derive(Debug, Clone, Copy)]
pub struct SpecialCase {
    /// Δ, eV.
    pub delta: f64,
    /// δ, eV.
    pub delta_c: f64,
}

impl SpecialCase {
    /// Δ = (4 + √13)δ, the protocol's tuning point where Ω₂ = 2Ω₃.
    pub fn tuned(delta_c: f64) -> Self {
        SpecialCase {
            delta: (4.0 + 13.0f64.sqrt()) * delta_c,
            delta_c,
        }
    }

    pub fn omega1(&self) -> f64 {
        self.delta.hypot(self.delta_c)
    }

    pub fn omega2(&self) -> f64 {
        (self.delta * self.delta + 3.0 * self.delta_c * self.delta_c).sqrt()
    }

    pub fn omega3(&self) -> f64 {
        (2.0 * self.delta_c * self.delta).sqrt()
    }

    pub fn model(&self) -> TwoQubitModel {
        TwoQubitModel {
            e_11: 3.0 * self.delta,
            e_10: self.delta,
            e_01: self.delta,
            e_00: -self.delta,
            e_c: self.delta_c,
        }
    }
}

/// 4×4 Hermitian Hamiltonian, eV.
pub fn hamiltonian4(model: &TwoQubitModel) -> [[f64; 4]; 4] {
    let mut h = [[0.0; 4]; 4];
    h[0][0] = model.e_11;
    h[1][1] = model.e_10;
    h[2][2] = model.e_01;
    h[3][3] = model.e_00;
    h[1][2] = model.e_c;
    h[2][1] = model.e_c;
    h
}

fn zero4() -> Mat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn identity4() -> Mat4 {
    let mut m = zero4();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = zero4();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, bk) in b.iter().enumerate() {
                s += a[i][k] * bk[j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Frobenius norm of U†U − I.
pub fn unitarity_defect(u: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let mut dot = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                dot += u[k][i].conj() * u[k][j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            s += (dot - target).norm_sqr();
        }
    }
    s.sqrt()
}

/// Closed-form evolution operator with its unitarity defect.
#[derive(Debug, Clone)]
pub struct ClosedFormEvolution {
    pub matrix: Mat4,
    pub unitarity_defect: f64,
}

/// The closed-form evolution operator evaluated verbatim:
/// e^{3iΔt} on |11⟩, e^{−iΔt} on |00⟩, cos Ω₁t + i(Δ/Ω₂) sin Ω₂t on the
/// middle diagonal and cos Ω₃t − 1 + i(δ/Ω₂) sin Ω₂t on the middle
/// off-diagonal. No unitarity correction is applied.
pub fn evolve_closed_form(case: &SpecialCase, t: f64, sign: SignConvention) -> ClosedFormEvolution {
    // the formula is written for θ = E·t; map t through the sign convention
    // by evaluating at the equivalent positive-phase time
    let tau = sign.theta(1.0, t);
    let o1 = case.omega1();
    let o2 = case.omega2();
    let o3 = case.omega3();
    let mut u = zero4();
    u[0][0] = Complex64::new(0.0, 3.0 * case.delta * tau).exp();
    u[3][3] = Complex64::new(0.0, -case.delta * tau).exp();
    let (diag, off) = if o2 == 0.0 {
        (
            Complex64::new((o1 * tau).cos(), 0.0),
            Complex64::new((o3 * tau).cos() - 1.0, 0.0),
        )
    } else {
        (
            Complex64::new((o1 * tau).cos(), case.delta / o2 * (o2 * tau).sin()),
            Complex64::new(
                (o3 * tau).cos() - 1.0,
                case.delta_c / o2 * (o2 * tau).sin(),
            ),
        )
    };
    u[1][1] = diag;
    u[2][2] = diag;
    u[1][2] = off;
    u[2][1] = off;
    let defect = unitarity_defect(&u);
    ClosedFormEvolution {
        matrix: u,
        unitarity_defect: defect,
    }
}

/// Exact evolution operator from the analytic eigendecomposition of the 4×4
/// Hamiltonian (the middle 2×2 block diagonalizes in closed form).
pub fn evolve_exact(model: &TwoQubitModel, t: f64, sign: SignConvention) -> Mat4 {
    let mut u = zero4();
    u[0][0] = Complex64::new(0.0, sign.theta(model.e_11, t)).exp();
    u[3][3] = Complex64::new(0.0, sign.theta(model.e_00, t)).exp();
    // middle block [[E10, Ec], [Ec, E01]] = mean·I + b(n_z σ_z + n_x σ_x)
    let mean = 0.5 * (model.e_10 + model.e_01);
    let vz = 0.5 * (model.e_10 - model.e_01);
    let vx = model.e_c;
    let b = vx.hypot(vz);
    let phase = Complex64::new(0.0, sign.theta(mean, t)).exp();
    if b == 0.0 {
        u[1][1] = phase;
        u[2][2] = phase;
    } else {
        let theta = sign.theta(b, t);
        let (s, c) = theta.sin_cos();
        let nx = vx / b;
        let nz = vz / b;
        u[1][1] = phase * Complex64::new(c, s * nz);
        u[2][2] = phase * Complex64::new(c, -s * nz);
        u[1][2] = phase * Complex64::new(0.0, s * nx);
        u[2][1] = u[1][2];
    }
    u
}

/// Which gate time the SWAP protocol uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapVariant {
    /// t = π/(2Ω₃).
    PiOverTwoOmega3,
    /// t = π/(2Ω₂).
    PiOverTwoOmega2,
    /// t = π/(2δ), the perfect-swap time of the exact dynamics.
    ExactPiOverTwoDelta,
}

/// SWAP protocol evaluation for one time variant.
#[derive(Debug, Clone)]
pub struct SwapReport {
    pub case: SpecialCase,
    pub variant: SwapVariant,
    /// Gate time in 1/eV (ħ = 1 units).
    pub t: f64,
    pub amp_01_closed: Complex64,
    pub amp_10_closed: Complex64,
    pub fidelity_closed: f64,
    pub amp_01_exact: Complex64,
    pub amp_10_exact: Complex64,
    pub fidelity_exact: f64,
    pub unitarity_defect_closed: f64,
    /// Leftover factor cos(πΩ₁/(2Ω₂)) on |10⟩ under the closed form.
    pub residual_10: f64,
}

/// Evolves |10⟩ under both evolution operators at the variant's gate time and
/// reports the |01⟩/|10⟩ amplitudes and swap fidelities.
pub fn swap_protocol(delta_c: f64, variant: SwapVariant, delta_override: Option<f64>) -> SwapReport {
    let case = match delta_override {
        Some(delta) => SpecialCase { delta, delta_c },
        None => SpecialCase::tuned(delta_c),
    };
    let t = match variant {
        SwapVariant::PiOverTwoOmega3 => std::f64::consts::PI / (2.0 * case.omega3()),
        SwapVariant::PiOverTwoOmega2 => std::f64::consts::PI / (2.0 * case.omega2()),
        SwapVariant::ExactPiOverTwoDelta => std::f64::consts::PI / (2.0 * case.delta_c),
    };
    let closed = evolve_closed_form(&case, t, SignConvention::PositivePhase);
    let exact = evolve_exact(&case.model(), t, SignConvention::PositivePhase);
    // initial state |10⟩ is basis index 1; |01⟩ is index 2
    SwapReport {
        case,
        variant,
        t,
        amp_01_closed: closed.matrix[2][1],
        amp_10_closed: closed.matrix[1][1],
        fidelity_closed: closed.matrix[2][1].norm_sqr(),
        amp_01_exact: exact[2][1],
        amp_10_exact: exact[1][1],
        fidelity_exact: exact[2][1].norm_sqr(),
        unitarity_defect_closed: closed.unitarity_defect,
        residual_10: (std::f64::consts::PI * case.omega1() / (2.0 * case.omega2())).cos(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_dev(a: &Mat4, b: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((a[i][j] - b[i][j]).norm());
            }
        }
        worst
    }

    #[test]
    fn hamiltonian_structure_and_eigenvalues() {
        let case = SpecialCase {
            delta: 2.0,
            delta_c: 0.5,
        };
        let h = hamiltonian4(&case.model());
        // coupling only between |10⟩ and |01⟩
        assert_eq!(h[0][1], 0.0);
        assert_eq!(h[0][3], 0.0);
        assert_eq!(h[1][3], 0.0);
        assert_eq!(h[1][2], 0.5);
        // eigenvalues {3Δ, Δ+δ, Δ−δ, −Δ} from the 2×2 block
        let evs = [h[0][0], 2.0 + 0.5, 2.0 - 0.5, h[3][3]];
        assert_eq!(evs, [6.0, 2.5, 1.5, -2.0]);
    }

    #[test]
    fn omega_identities() {
        let case = SpecialCase {
            delta: 3.0,
            delta_c: 1.2,
        };
        assert!(
            (case.omega2().powi(2) - case.omega1().powi(2) - 2.0 * case.delta_c.powi(2)).abs()
                < 1e-12
        );
        let tuned = SpecialCase::tuned(0.7);
        assert!((tuned.omega2() - 2.0 * tuned.omega3()).abs() < 1e-14 * tuned.omega2());
        let other = SpecialCase {
            delta: (4.0 - 13.0f64.sqrt()) * 0.7,
            delta_c: 0.7,
        };
        // Δ = (4 − √13)δ also solves Δ² − 8δΔ + 3δ² = 0
        assert!((other.omega2() - 2.0 * other.omega3()).abs() < 1e-14 * other.omega2());
    }

    #[test]
    fn both_evolutions_are_identity_at_zero_time() {
        let case = SpecialCase {
            delta: 1.3,
            delta_c: 0.4,
        };
        let closed = evolve_closed_form(&case, 0.0, SignConvention::PositivePhase);
        assert_eq!(max_dev(&closed.matrix, &identity4()), 0.0);
        assert!(closed.unitarity_defect < 1e-15);
        let exact = evolve_exact(&case.model(), 0.0, SignConvention::PositivePhase);
        assert_eq!(max_dev(&exact, &identity4()), 0.0);
    }

    #[test]
    fn closed_form_matches_exact_in_uncoupled_limit() {
        let case = SpecialCase {
            delta: 1.7,
            delta_c: 0.0,
        };
        for &t in &[0.3, 1.1, 4.9] {
            let closed = evolve_closed_form(&case, t, SignConvention::PositivePhase);
            let exact = evolve_exact(&case.model(), t, SignConvention::PositivePhase);
            assert!(max_dev(&closed.matrix, &exact) < 1e-10);
            assert!((closed.matrix[1][1] - Complex64::new(0.0, 1.7 * t).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_first_order_agreement_in_small_coupling() {
        for &ratio in &[1e-3, 5e-3, 1e-2] {
            let case = SpecialCase {
                delta: 1.0,
                delta_c: ratio,
            };
            // the off-diagonal term cos Ω₃t − 1 grows like δΔt², so the
            // first-order bound only holds for Δt² well below 10
            for &t in &[0.5, 1.0, 2.0] {
                let closed = evolve_closed_form(&case, t, SignConvention::PositivePhase);
                let exact = evolve_exact(&case.model(), t, SignConvention::PositivePhase);
                assert!(
                    max_dev(&closed.matrix, &exact) <= 10.0 * ratio,
                    "ratio {ratio} t {t}: {}",
                    max_dev(&closed.matrix, &exact)
                );
            }
        }
    }

    #[test]
    fn exact_middle_block_analytic() {
        // exp(iHt) middle block = e^{iΔt}[[cos δt, i sin δt], [i sin δt, cos δt]]
        let case = SpecialCase {
            delta: 2.3,
            delta_c: 0.9,
        };
        let t = 1.37;
        let u = evolve_exact(&case.model(), t, SignConvention::PositivePhase);
        let ph = Complex64::new(0.0, case.delta * t).exp();
        let d = case.delta_c * t;
        assert!((u[1][1] - ph * Complex64::new(d.cos(), 0.0)).norm() < 1e-13);
        assert!((u[1][2] - ph * Complex64::new(0.0, d.sin())).norm() < 1e-13);
        assert!((u[2][1] - u[1][2]).norm() == 0.0);
    }

    #[test]
    fn pure_phases_on_corner_states() {
        let case = SpecialCase {
            delta: 1.1,
            delta_c: 0.6,
        };
        let closed = evolve_closed_form(&case, 2.7, SignConvention::PositivePhase);
        let exact = evolve_exact(&case.model(), 2.7, SignConvention::PositivePhase);
        for u in [&closed.matrix, &exact] {
            assert!((u[0][0].norm() - 1.0).abs() < 1e-14);
            assert!((u[3][3].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn physical_convention_is_conjugate_time_scaling() {
        let case = SpecialCase {
            delta: 1e-4,
            delta_c: 3e-5,
        };
        let t_s = 2.0e-11;
        let phys = evolve_exact(&case.model(), t_s, SignConvention::Physical);
        let plus = evolve_exact(&case.model(), -t_s / crate::units::HBAR_EV_S, SignConvention::PositivePhase);
        assert!(max_dev(&phys, &plus) < 1e-13);
    }

    #[test]
    fn swap_protocol_omega3_time() {
        let r = swap_protocol(1.0, SwapVariant::PiOverTwoOmega3, None);
        // closed form: cos Ω₃t = 0 and sin Ω₂t = 0 at the tuned point
        assert!((r.amp_01_closed - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((r.residual_10 - 0.0260).abs() < 0.001);
        // exact dynamics only reaches |sin δt| = 0.3919 at this time
        assert!((r.amp_01_exact.norm() - 0.3919).abs() < 1e-3);
        assert!((r.fidelity_closed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_protocol_exact_time_is_perfect_swap() {
        let r = swap_protocol(0.5, SwapVariant::ExactPiOverTwoDelta, None);
        assert!((r.amp_01_exact.norm() - 1.0).abs() < 1e-12);
        assert!((r.amp_10_exact.norm()) < 1e-12);
    }

    #[test]
    fn swap_protocol_omega2_variant_halves_time() {
        let r = swap_protocol(1.0, SwapVariant::PiOverTwoOmega2, None);
        let full = swap_protocol(1.0, SwapVariant::PiOverTwoOmega3, None);
        assert!((r.t - 0.5 * full.t).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn exact_is_unitary_and_composes(
            delta in -3.0f64..3.0,
            delta_c in 0.0f64..2.0,
            t1 in -4.0f64..4.0,
            t2 in -4.0f64..4.0,
        ) {
            let case = SpecialCase { delta, delta_c };
            let m = case.model();
            let u1 = evolve_exact(&m, t1, SignConvention::PositivePhase);
            prop_assert!(unitarity_defect(&u1) < 1e-13);
            let u2 = evolve_exact(&m, t2, SignConvention::PositivePhase);
            let u12 = evolve_exact(&m, t1 + t2, SignConvention::PositivePhase);
            prop_assert!(max_dev(&mat_mul(&u1, &u2), &u12) < 1e-12);
        }
    }
}
