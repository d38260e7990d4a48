//! Physical constants, silicon material parameters and unit conversions.
//!
//! Internal unit system: energies in eV, lengths in nm, masses in units of
//! the free-electron mass, times in seconds. All constants are fixed at the
//! values below for deterministic output; nothing here is mutable at runtime.

use thiserror::Error;

/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = 6.582120e-16;
/// Planck constant h = 2π·ħ, eV·s.
pub const PLANCK_EV_S: f64 = 2.0 * std::f64::consts::PI * HBAR_EV_S;
/// Boltzmann constant, eV/K.
pub const KB_EV_PER_K: f64 = 8.617333e-5;
/// ħ²/(2m₀), eV·nm².
pub const HBAR2_OVER_2M0: f64 = 0.0380998;
/// Rydberg energy, eV.
pub const RYDBERG_EV: f64 = 13.605693;
/// Hartree energy, eV.
pub const HARTREE_EV: f64 = 2.0 * RYDBERG_EV;
/// Bohr radius, nm.
pub const BOHR_NM: f64 = 0.0529177;
/// Elementary charge, C. Used to tie the CGS and internal unit paths together.
pub const E_CHARGE_C: f64 = 1.602177e-19;
/// One eV in erg (CGS energy unit); derived from the elementary charge so the
/// CGS and internal unit paths share a single conversion constant.
pub const ERG_PER_EV: f64 = E_CHARGE_C * 1.0e7;
/// Bohr magneton ħe/(2m₀), eV/T.
pub const MU_B_EV_PER_T: f64 = 5.7883818e-5;
/// Coulomb constant e²/(4πε₀), eV·nm.
pub const COULOMB_EV_NM: f64 = 1.4399645;

/// One kV/cm expressed as eV/nm per elementary charge (e·F energy gradient).
pub const KV_PER_CM_TO_EV_PER_NM: f64 = 1.0e-4;

/// Silicon material parameters.
///
/// The effective masses are not stated in the source data for this model;
/// the standard bulk values below put the z-valleys lowest for the default
/// 8×12×6 nm dot. Both are overridable through the run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SiliconParams {
    /// Lattice constant, nm.
    pub lattice_nm: f64,
    /// Longitudinal effective mass, units of m₀.
    pub m_l: f64,
    /// Transverse effective mass, units of m₀.
    pub m_t: f64,
    /// Mass density, g/cm³.
    pub rho_g_cm3: f64,
    /// Longitudinal sound speed, cm/s.
    pub c_l_cm_s: f64,
    /// Acoustic deformation potential, eV.
    pub e_ac_ev: f64,
    /// Relative permittivity.
    pub eps_r: f64,
    /// Conduction-band offset to SiO₂, eV.
    pub barrier_ev: f64,
}

impl Default for SiliconParams {
    fn default() -> Self {
        SiliconParams {
            lattice_nm: 0.543,
            m_l: 0.916,
            m_t: 0.190,
            rho_g_cm3: 2.33,
            c_l_cm_s: 9.01e5,
            e_ac_ev: 4.7,
            eps_r: 11.7,
            barrier_ev: 3.1,
        }
    }
}

impl SiliconParams {
    pub fn validate(&self) -> Result<(), UnitError> {
        if !(self.m_l > self.m_t && self.m_t > 0.0) {
            return Err(UnitError::InvalidMasses {
                m_l: self.m_l,
                m_t: self.m_t,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Length,
    ElectricField,
    MagneticField,
    Temperature,
    Time,
    Frequency,
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Dimension::Energy => "energy",
            Dimension::Length => "length",
            Dimension::ElectricField => "electric field",
            Dimension::MagneticField => "magnetic field",
            Dimension::Temperature => "temperature",
            Dimension::Time => "time",
            Dimension::Frequency => "frequency",
        };
        f.write_str(s)
    }
}

/// Unit tags accepted by [`convert`]. Internal units: eV, nm, kV/cm, T, K, s, GHz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    // energy
    ElectronVolt,
    MilliElectronVolt,
    MicroElectronVolt,
    Rydberg,
    Hartree,
    // length
    Nanometer,
    Bohr,
    Angstrom,
    Meter,
    // electric field
    KiloVoltPerCm,
    VoltPerNm,
    MegaVoltPerCm,
    // magnetic field
    Tesla,
    MilliTesla,
    // temperature
    Kelvin,
    MilliKelvin,
    // time
    Second,
    Nanosecond,
    Picosecond,
    Microsecond,
    // frequency
    Hertz,
    Gigahertz,
    Terahertz,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            ElectronVolt | MilliElectronVolt | MicroElectronVolt | Rydberg | Hartree => {
                Dimension::Energy
            }
            Nanometer | Bohr | Angstrom | Meter => Dimension::Length,
            KiloVoltPerCm | VoltPerNm | MegaVoltPerCm => Dimension::ElectricField,
            Tesla | MilliTesla => Dimension::MagneticField,
            Kelvin | MilliKelvin => Dimension::Temperature,
            Second | Nanosecond | Picosecond | Microsecond => Dimension::Time,
            Hertz | Gigahertz | Terahertz => Dimension::Frequency,
        }
    }

    /// Factor to the internal unit of this tag's dimension.
    pub fn to_internal(self) -> f64 {
        use Unit::*;
        match self {
            ElectronVolt => 1.0,
            MilliElectronVolt => 1.0e-3,
            MicroElectronVolt => 1.0e-6,
            Rydberg => RYDBERG_EV,
            Hartree => HARTREE_EV,
            Nanometer => 1.0,
            Bohr => BOHR_NM,
            Angstrom => 0.1,
            Meter => 1.0e9,
            KiloVoltPerCm => 1.0,
            VoltPerNm => 1.0e4,
            MegaVoltPerCm => 1.0e3,
            Tesla => 1.0,
            MilliTesla => 1.0e-3,
            Kelvin => 1.0,
            MilliKelvin => 1.0e-3,
            Second => 1.0,
            Nanosecond => 1.0e-9,
            Picosecond => 1.0e-12,
            Microsecond => 1.0e-6,
            Hertz => 1.0e-9,
            Gigahertz => 1.0,
            Terahertz => 1.0e3,
        }
    }

    /// Parses a unit suffix as written in configuration files.
    pub fn parse(tag: &str) -> Option<Unit> {
        use Unit::*;
        Some(match tag {
            "eV" => ElectronVolt,
            "meV" => MilliElectronVolt,
            "ueV" | "µeV" => MicroElectronVolt,
            "Ry" => Rydberg,
            "Ha" | "hartree" => Hartree,
            "nm" => Nanometer,
            "bohr" => Bohr,
            "A" | "angstrom" => Angstrom,
            "m" => Meter,
            "kV/cm" => KiloVoltPerCm,
            "V/nm" => VoltPerNm,
            "MV/cm" => MegaVoltPerCm,
            "T" => Tesla,
            "mT" => MilliTesla,
            "K" => Kelvin,
            "mK" => MilliKelvin,
            "s" => Second,
            "ns" => Nanosecond,
            "ps" => Picosecond,
            "us" | "µs" => Microsecond,
            "Hz" => Hertz,
            "GHz" => Gigahertz,
            "THz" => Terahertz,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum UnitError {
    #[error("dimension mismatch: cannot convert {from} to {to}")]
    DimensionMismatch { from: Dimension, to: Dimension },
    #[error("effective masses must satisfy m_l > m_t > 0, got m_l = {m_l}, m_t = {m_t}")]
    InvalidMasses { m_l: f64, m_t: f64 },
}

/// Converts `value` from one unit tag to another of the same dimension.
///
/// The conversion goes through the internal unit, so chained conversions are
/// associative by construction.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64, UnitError> {
    if from.dimension() != to.dimension() {
        return Err(UnitError::DimensionMismatch {
            from: from.dimension(),
            to: to.dimension(),
        });
    }
    Ok(value * from.to_internal() / to.to_internal())
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: &[Unit] = &[
        Unit::ElectronVolt,
        Unit::MilliElectronVolt,
        Unit::MicroElectronVolt,
        Unit::Rydberg,
        Unit::Hartree,
        Unit::Nanometer,
        Unit::Bohr,
        Unit::Angstrom,
        Unit::Meter,
        Unit::KiloVoltPerCm,
        Unit::VoltPerNm,
        Unit::MegaVoltPerCm,
        Unit::Tesla,
        Unit::MilliTesla,
        Unit::Kelvin,
        Unit::MilliKelvin,
        Unit::Second,
        Unit::Nanosecond,
        Unit::Picosecond,
        Unit::Microsecond,
        Unit::Hertz,
        Unit::Gigahertz,
        Unit::Terahertz,
    ];

    #[test]
    fn rydberg_to_ev_is_defining_constant() {
        assert_eq!(
            convert(1.0, Unit::Rydberg, Unit::ElectronVolt).unwrap(),
            13.605693
        );
    }

    #[test]
    fn lattice_constant_in_bohr() {
        let v = convert(0.543, Unit::Nanometer, Unit::Bohr).unwrap();
        assert!((v - 10.2612).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn band_gap_in_ev() {
        let v = convert(0.268, Unit::Rydberg, Unit::ElectronVolt).unwrap();
        assert!((v - 3.6463).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn round_trip_all_same_dimension_pairs() {
        let x = 0.731204963;
        for &u in ALL {
            for &v in ALL {
                if u.dimension() != v.dimension() {
                    continue;
                }
                let back = convert(convert(x, u, v).unwrap(), v, u).unwrap();
                assert!(
                    ((back - x) / x).abs() < 1e-12,
                    "round trip {u:?} -> {v:?} gave {back}"
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_names_both_dimensions() {
        let err = convert(1.0, Unit::ElectronVolt, Unit::Nanometer).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("energy") && msg.contains("length"), "{msg}");
    }

    #[test]
    fn silicon_defaults_match_material_table() {
        let p = SiliconParams::default();
        assert_eq!(p.rho_g_cm3, 2.33);
        assert_eq!(p.c_l_cm_s, 9.01e5);
        assert_eq!(p.e_ac_ev, 4.7);
        assert_eq!(p.lattice_nm, 0.543);
        p.validate().unwrap();
    }

    #[test]
    fn mass_ordering_enforced() {
        let p = SiliconParams {
            m_l: 0.1,
            m_t: 0.2,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn unit_tag_parsing() {
        assert_eq!(Unit::parse("kV/cm"), Some(Unit::KiloVoltPerCm));
        assert_eq!(Unit::parse("ueV"), Some(Unit::MicroElectronVolt));
        assert_eq!(Unit::parse("furlong"), None);
    }
}
