//! Reduced two-level qubit model: effective Hamiltonian, pseudo-spin states,
//! Rabi dynamics, pulse-protocol timing checks, parity-selective tunneling
//! and the coherent-operation budget.
//!
//! Two readings of the effective Hamiltonian are provided. The default keeps
//! equal diagonal entries ([[ε, Δ], [Δ, ε]]); the detuning variant places
//! ±ε/2 on the diagonal. The Rabi formula √(ε² + Δ²)/ħ is used in either
//! case. Frequencies quoted in GHz are cyclic (E/h, not E/ħ).

use crate::solver::Parity;
use crate::units::{HBAR_EV_S, PLANCK_EV_S};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QubitError {
    #[error("coupling Δ at the operating field is zero: no gate possible")]
    NoGate,
    #[error("pulse fields must satisfy F_low < F_high, got {0} and {1}")]
    FieldOrder(f64, f64),
}

/// Which diagonal structure the 2×2 effective Hamiltonian uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HamiltonianForm {
    /// Equal diagonals: [[ε, Δ], [Δ, ε]].
    #[default]
    EqualDiagonal,
    /// Detuning split: [[ε/2, Δ], [Δ, −ε/2]].
    Detuning,
}

/// Two-level model with splitting ε and coupling Δ, both in eV.
#[derive(Debug, Clone, Copy)]
pub struct QubitModel {
    pub eps_ev: f64,
    pub delta_ev: f64,
    pub form: HamiltonianForm,
}

impl QubitModel {
    pub fn new(eps_ev: f64, delta_ev: f64) -> Self {
        QubitModel {
            eps_ev,
            delta_ev,
            form: HamiltonianForm::EqualDiagonal,
        }
    }

    /// Angular Rabi frequency √(ε² + Δ²)/ħ in rad/s.
    pub fn omega_rad_per_s(&self) -> f64 {
        self.eps_ev.hypot(self.delta_ev) / HBAR_EV_S
    }

    /// The 2×2 effective Hamiltonian in eV (real symmetric).
    pub fn effective_hamiltonian(&self) -> [[f64; 2]; 2] {
        match self.form {
            HamiltonianForm::EqualDiagonal => [
                [self.eps_ev, self.delta_ev],
                [self.delta_ev, self.eps_ev],
            ],
            HamiltonianForm::Detuning => [
                [0.5 * self.eps_ev, self.delta_ev],
                [self.delta_ev, -0.5 * self.eps_ev],
            ],
        }
    }

    /// Cyclic Rabi frequency √(ε² + Δ²)/h in GHz.
    pub fn rabi_frequency_ghz(&self) -> f64 {
        self.eps_ev.hypot(self.delta_ev) / PLANCK_EV_S * 1e-9
    }

    /// Applies exp(−iHt/ħ) through the analytic 2×2 exponential.
    pub fn evolve(&self, state: [Complex64; 2], t_s: f64) -> [Complex64; 2] {
        let h = self.effective_hamiltonian();
        let mean = 0.5 * (h[0][0] + h[1][1]);
        let vx = h[0][1];
        let vz = 0.5 * (h[0][0] - h[1][1]);
        let b = vx.hypot(vz);
        let phase = Complex64::new(0.0, -mean * t_s / HBAR_EV_S).exp();
        if b == 0.0 {
            return [phase * state[0], phase * state[1]];
        }
        let theta = b * t_s / HBAR_EV_S;
        let (s, c) = theta.sin_cos();
        let nx = vx / b;
        let nz = vz / b;
        // exp(−iθ n·σ) = cos θ · I − i sin θ (n_x σ_x + n_z σ_z)
        let u00 = Complex64::new(c, -s * nz);
        let u01 = Complex64::new(0.0, -s * nx);
        let u11 = Complex64::new(c, s * nz);
        [
            phase * (u00 * state[0] + u01 * state[1]),
            phase * (u01 * state[0] + u11 * state[1]),
        ]
    }
}

/// Valley-superposition pseudo-spin carrying the parity selection rule.
#[derive(Debug, Clone, Copy)]
pub struct PseudoSpinState {
    pub parity: Parity,
}

impl PseudoSpinState {
    pub fn new(parity: Parity) -> Self {
        PseudoSpinState { parity }
    }

    /// The spinor χ = (1, ±1)/√2.
    pub fn chi(&self) -> [Complex64; 2] {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self.parity {
            Parity::Symmetric => [s, s],
            Parity::Antisymmetric => [s, -s],
        }
    }
}

/// Inter-dot tunneling factorized as energy scale × orbital overlap.
#[derive(Debug, Clone, Copy)]
pub struct TunnelingModel {
    pub t0_ev: f64,
    /// Orbital overlap factor O_ab, dimensionless.
    pub overlap: f64,
}

/// t₀ · O_ab · P_ab with the exact parity factor P_ab = χ_a†χ_b ∈ {0, 1}.
pub fn tunneling_amplitude(a: PseudoSpinState, b: PseudoSpinState, model: TunnelingModel) -> f64 {
    if a.parity == b.parity {
        model.t0_ev * model.overlap
    } else {
        0.0
    }
}

/// Coherent operations achievable before decoherence: floor(τ · Δ/ħ).
pub fn operation_budget(delta_ev: f64, tau_s: f64) -> u64 {
    let ops = tau_s * delta_ev / HBAR_EV_S;
    if ops.is_finite() && ops > 0.0 {
        ops.floor() as u64
    } else {
        0
    }
}

/// Qubit parameters at one operating field.
#[derive(Debug, Clone, Copy)]
pub struct FieldPoint {
    pub field_kv_cm: f64,
    pub eps_ev: f64,
    pub delta_ev: f64,
}

/// Timing-check report for a low-field/high-field gate pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolReport {
    /// ħ/Δ at the low field (rise time must stay below this), seconds.
    pub bound_low_s: f64,
    /// ħ/Δ at the high field (rise time must stay above this), seconds.
    pub bound_high_s: f64,
    pub fast_at_low: bool,
    pub slow_at_high: bool,
    pub valid: bool,
    /// Basis populations after hold_time at the high field, starting in the
    /// first basis state.
    pub final_populations: [f64; 2],
}

/// Checks the pulse-timing inequalities and evolves the initial basis state
/// through the hold segment at the high field.
pub fn pulse_protocol(
    low: FieldPoint,
    high: FieldPoint,
    hold_time_s: f64,
    rise_time_s: f64,
) -> Result<ProtocolReport, QubitError> {
    if low.field_kv_cm >= high.field_kv_cm {
        return Err(QubitError::FieldOrder(low.field_kv_cm, high.field_kv_cm));
    }
    if high.delta_ev == 0.0 {
        return Err(QubitError::NoGate);
    }
    let bound_low_s = if low.delta_ev == 0.0 {
        f64::INFINITY
    } else {
        HBAR_EV_S / low.delta_ev.abs()
    };
    let bound_high_s = HBAR_EV_S / high.delta_ev.abs();
    let fast_at_low = rise_time_s < bound_low_s;
    let slow_at_high = rise_time_s > bound_high_s;
    let model = QubitModel::new(high.eps_ev, high.delta_ev);
    let fin = model.evolve([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], hold_time_s);
    Ok(ProtocolReport {
        bound_low_s,
        bound_high_s,
        fast_at_low,
        slow_at_high,
        valid: fast_at_low && slow_at_high,
        final_populations: [fin[0].norm_sqr(), fin[1].norm_sqr()],
    })
}
