//! Longitudinal-acoustic phonon scattering-rate upper bound and the derived
//! decoherence-time estimates.
//!
//! The rate W = 4π²(ΔE)³E_ac² / (ρ ħ⁴ c_l⁵) · exp(−ΔE/k_BT) is evaluated
//! twice, in CGS and in the crate's internal (eV, nm, s) units, and the two
//! paths are required to agree to 1e-10 on every call. Unit errors
//! concentrate in this formula, so the cross-check is permanent rather than
//! a test-only affair.

use crate::units::{ERG_PER_EV, HBAR_EV_S, KB_EV_PER_K, SiliconParams};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PhononError {
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("energy fluctuation must be non-negative, got {0} eV")]
    NegativeEnergy(f64),
    #[error("material parameters must be positive")]
    BadMaterial,
    #[error("CGS and internal unit paths disagree: {cgs} vs {internal} (relative {rel:.3e})")]
    UnitPathMismatch { cgs: f64, internal: f64, rel: f64 },
}

/// Material inputs of the phonon-rate formula.
#[derive(Debug, Clone, Copy)]
pub struct PhononModel {
    /// Mass density, g/cm³.
    pub rho_g_cm3: f64,
    /// Longitudinal sound speed, cm/s.
    pub c_l_cm_s: f64,
    /// Acoustic deformation potential, eV.
    pub e_ac_ev: f64,
}

impl Default for PhononModel {
    fn default() -> Self {
        let si = SiliconParams::default();
        PhononModel {
            rho_g_cm3: si.rho_g_cm3,
            c_l_cm_s: si.c_l_cm_s,
            e_ac_ev: si.e_ac_ev,
        }
    }
}

const FOUR_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

/// CGS path: energies in erg, ħ in erg·s, ρ in g/cm³, c_l in cm/s.
fn rate_cgs(delta_e_ev: f64, t_k: f64, m: &PhononModel) -> f64 {
    let de = delta_e_ev * ERG_PER_EV;
    let e_ac = m.e_ac_ev * ERG_PER_EV;
    let hbar = HBAR_EV_S * ERG_PER_EV;
    let prefactor =
        FOUR_PI_SQ * de.powi(3) * e_ac * e_ac / (m.rho_g_cm3 * hbar.powi(4) * m.c_l_cm_s.powi(5));
    prefactor * (-delta_e_ev / (KB_EV_PER_K * t_k)).exp()
}

/// Internal path: energies in eV, lengths in nm, time in s.
fn rate_internal(delta_e_ev: f64, t_k: f64, m: &PhononModel) -> f64 {
    // 1 kg = 1e-11/ERG_PER_EV eV·s²/nm²; g/cm³ = 1e-24 kg/nm³
    let kg_to_ev = 1e-11 / ERG_PER_EV;
    let rho = m.rho_g_cm3 * 1e-24 * kg_to_ev; // eV·s²/nm⁵
    let c_l = m.c_l_cm_s * 1e7; // nm/s
    let prefactor = FOUR_PI_SQ * delta_e_ev.powi(3) * m.e_ac_ev * m.e_ac_ev
        / (rho * HBAR_EV_S.powi(4) * c_l.powi(5));
    prefactor * (-delta_e_ev / (KB_EV_PER_K * t_k)).exp()
}

/// Scattering-rate upper bound in 1/s, cross-checked across both unit paths.
pub fn phonon_rate(delta_e_ev: f64, t_k: f64, model: &PhononModel) -> Result<f64, PhononError> {
    if t_k <= 0.0 {
        return Err(PhononError::NonPositiveTemperature(t_k));
    }
    if delta_e_ev < 0.0 {
        return Err(PhononError::NegativeEnergy(delta_e_ev));
    }
    if model.rho_g_cm3 <= 0.0 || model.c_l_cm_s <= 0.0 || model.e_ac_ev <= 0.0 {
        return Err(PhononError::BadMaterial);
    }
    let cgs = rate_cgs(delta_e_ev, t_k, model);
    let internal = rate_internal(delta_e_ev, t_k, model);
    let scale = cgs.abs().max(internal.abs());
    let rel = if scale == 0.0 {
        0.0
    } else {
        (cgs - internal).abs() / scale
    };
    if rel > 1e-10 {
        return Err(PhononError::UnitPathMismatch { cgs, internal, rel });
    }
    Ok(cgs)
}

/// Decoherence time 1/W with an explicit infinite sentinel at zero rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoherenceTime {
    Finite(f64),
    Infinite,
}

impl DecoherenceTime {
    pub fn seconds(&self) -> Option<f64> {
        match self {
            DecoherenceTime::Finite(s) => Some(*s),
            DecoherenceTime::Infinite => None,
        }
    }
}

pub fn decoherence_time(
    delta_e_ev: f64,
    t_k: f64,
    model: &PhononModel,
) -> Result<DecoherenceTime, PhononError> {
    let w = phonon_rate(delta_e_ev, t_k, model)?;
    if w == 0.0 {
        Ok(DecoherenceTime::Infinite)
    } else {
        Ok(DecoherenceTime::Finite(1.0 / w))
    }
}

/// One table row of the rate/decoherence grids.
#[derive(Debug, Clone, Copy)]
pub struct Fig7Row {
    pub delta_e_uev: f64,
    pub t_k: f64,
    pub rate_per_s: f64,
    /// Infinite decoherence times render as +inf.
    pub tau_s: f64,
}

/// Default grids (ΔE in eV, T in K) spanning ΔE ∈ [30, 100] μeV with the
/// temperature window chosen so every τ lands inside the 0.1–10 μs band the
/// formula is quoted for.
pub fn default_grids() -> (Vec<f64>, Vec<f64>) {
    let de: Vec<f64> = (0..8).map(|i| (30.0 + 10.0 * i as f64) * 1e-6).collect();
    let t: Vec<f64> = (0..7).map(|i| 0.110 + 0.003 * i as f64).collect();
    (de, t)
}

/// τ(ΔE, T) over the Cartesian product of the two grids, ΔE outer.
pub fn fig7_tables(
    delta_e_grid_ev: &[f64],
    t_grid_k: &[f64],
    model: &PhononModel,
) -> Result<Vec<Fig7Row>, PhononError> {
    let mut rows = Vec::with_capacity(delta_e_grid_ev.len() * t_grid_k.len());
    for &de in delta_e_grid_ev {
        for &t in t_grid_k {
            let rate = phonon_rate(de, t, model)?;
            rows.push(Fig7Row {
                delta_e_uev: de * 1e6,
                t_k: t,
                rate_per_s: rate,
                tau_s: if rate == 0.0 { f64::INFINITY } else { 1.0 / rate },
            });
        }
    }
    Ok(rows)
}
