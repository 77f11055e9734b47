//! Transfer functions of the opto-electronic primitives that make up a
//! photonic neuron: PIN attenuator, photodiode, trans-impedance amplifier,
//! and the micro-ring modulator acting as an electro-optic ReLU.
//!
//! All functions are pure; parameters are plain copyable values so they can
//! be evaluated from any number of threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Forward-biased PIN junction over a waveguide; injected carriers absorb
/// light, so transmission falls exponentially (linearly in dB) with drive
/// current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttenuatorParams {
    /// Junction length in micrometers.
    pub length_um: f64,
    /// Attenuation slope in dB per mA of injected current.
    pub atten_db_per_ma: f64,
    /// Maximum drive current in mA.
    pub max_current_ma: f64,
}

impl Default for AttenuatorParams {
    fn default() -> Self {
        Self {
            length_um: 500.0,
            atten_db_per_ma: 8.0,
            max_current_ma: 5.0,
        }
    }
}

impl AttenuatorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_um > 0.0) {
            return Err(Error::InvalidParams("attenuator length must be > 0".into()));
        }
        if !(self.atten_db_per_ma > 0.0) {
            return Err(Error::InvalidParams(
                "attenuation coefficient must be > 0".into(),
            ));
        }
        if !(self.max_current_ma > 0.0) {
            return Err(Error::InvalidParams("max current must be > 0".into()));
        }
        Ok(())
    }

    /// Smallest reachable transmission (at max drive current).
    pub fn floor_transmission(&self) -> f64 {
        10f64.powf(-self.atten_db_per_ma * self.max_current_ma / 10.0)
    }
}

/// SiGe photodiode converting optical power to current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotodiodeParams {
    /// Responsivity in A/W.
    pub responsivity_a_per_w: f64,
    /// Dark current in A.
    pub dark_current_a: f64,
}

impl Default for PhotodiodeParams {
    fn default() -> Self {
        Self {
            responsivity_a_per_w: 0.8,
            dark_current_a: 0.0,
        }
    }
}

impl PhotodiodeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.responsivity_a_per_w > 0.0 && self.responsivity_a_per_w <= 1.5) {
            return Err(Error::InvalidParams(
                "photodiode responsivity must lie in (0, 1.5] A/W".into(),
            ));
        }
        Ok(())
    }
}

/// Linear trans-impedance amplifier with output saturation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiaParams {
    /// Trans-impedance gain in V/A.
    pub gain_v_per_a: f64,
    /// Output saturation voltage in V.
    pub v_out_max: f64,
}

impl Default for TiaParams {
    fn default() -> Self {
        Self {
            gain_v_per_a: 1.0e5,
            v_out_max: 10.0,
        }
    }
}

impl TiaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain_v_per_a > 0.0) {
            return Err(Error::InvalidParams("TIA gain must be > 0".into()));
        }
        Ok(())
    }
}

/// PN-junction micro-ring modulator with a thermal phase-shifter.
///
/// The notch sits at `lambda_res0_nm` when cold; heater power and carrier
/// injection both move it to longer wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    /// Cold (unheated, junction off) resonance wavelength in nm.
    pub lambda_res0_nm: f64,
    /// Full width at half maximum of the notch, nm.
    pub fwhm_nm: f64,
    /// Minimum (on-resonance) power transmission.
    pub t_min: f64,
    /// Junction turn-on voltage, V.
    pub v_th: f64,
    /// Resonance shift per volt above `v_th`, nm/V.
    pub eo_shift_nm_per_v: f64,
    /// Heater resistance, ohm.
    pub heater_resistance_ohm: f64,
    /// Thermal resonance shift per mW of heater power, nm/mW.
    pub thermo_coeff_nm_per_mw: f64,
    /// Maximum allowed heater voltage, V.
    pub v_heater_max: f64,
}

/// Supply-laser wavelength the rings are tuned to, nm.
pub const DEFAULT_LASER_LAMBDA_NM: f64 = 1559.93;

/// Nominal thermal shift budgeted for ring alignment; cold resonances sit
/// this far below the laser so fabrication spread is correctable both ways.
pub const NOMINAL_THERMAL_SHIFT_NM: f64 = 1.6;

impl Default for RingParams {
    fn default() -> Self {
        Self {
            lambda_res0_nm: DEFAULT_LASER_LAMBDA_NM - NOMINAL_THERMAL_SHIFT_NM,
            fwhm_nm: 0.1,
            t_min: 0.01,
            v_th: 0.7,
            eo_shift_nm_per_v: 0.5,
            heater_resistance_ohm: 1900.0,
            thermo_coeff_nm_per_mw: 0.25,
            v_heater_max: 5.0,
        }
    }
}

impl RingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm_nm > 0.0) {
            return Err(Error::InvalidParams("ring FWHM must be > 0".into()));
        }
        if !(self.t_min >= 0.0 && self.t_min < 0.5) {
            return Err(Error::InvalidParams("ring T_min must lie in [0, 0.5)".into()));
        }
        if !(self.eo_shift_nm_per_v > 0.0) {
            return Err(Error::InvalidParams("electro-optic shift must be > 0".into()));
        }
        if !(self.heater_resistance_ohm > 0.0) {
            return Err(Error::InvalidParams("heater resistance must be > 0".into()));
        }
        Ok(())
    }

    /// Heater power in mW at a given drive voltage.
    pub fn heater_power_mw(&self, v_heater: f64) -> f64 {
        v_heater * v_heater / self.heater_resistance_ohm * 1e3
    }
}

/// DC bias added to the TIA output to place the ReLU knee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronBias {
    pub v_b: f64,
}

impl Default for NeuronBias {
    fn default() -> Self {
        Self { v_b: 0.7 }
    }
}

/// Selects between the device-level curves and their idealizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Lorentzian ring response driven by the detuning model.
    Physical,
    /// Exact clipped ReLU sharing the physical knee.
    Ideal,
}

/// Power transmission of a PIN attenuator at drive current `i_ma`.
///
/// `T = 10^(-slope * i / 10)`; unity at zero injection, strictly decreasing.
pub fn attenuator_transmission(i_ma: f64, p: &AttenuatorParams) -> Result<f64> {
    if !(i_ma >= 0.0 && i_ma <= p.max_current_ma) {
        return Err(Error::CurrentOutOfRange {
            current_ma: i_ma,
            max_ma: p.max_current_ma,
        });
    }
    Ok(10f64.powf(-p.atten_db_per_ma * i_ma / 10.0))
}

/// Photocurrent for incident optical power `p_opt_w`.
pub fn pd_current(p_opt_w: f64, pd: &PhotodiodeParams) -> Result<f64> {
    if !(p_opt_w >= 0.0) {
        return Err(Error::NegativePower(p_opt_w));
    }
    Ok(pd.responsivity_a_per_w * p_opt_w + pd.dark_current_a)
}

/// TIA output voltage for summed photocurrent `i_sum_a`, clipped to
/// `[0, v_out_max]`.
pub fn tia_voltage(i_sum_a: f64, t: &TiaParams) -> f64 {
    (t.gain_v_per_a * i_sum_a).clamp(0.0, t.v_out_max)
}

/// Lorentzian notch transmission at detuning `delta_lambda_nm` from the
/// ring resonance.
pub fn ring_transmission(delta_lambda_nm: f64, r: &RingParams) -> f64 {
    let x = 2.0 * delta_lambda_nm / r.fwhm_nm;
    let x2 = x * x;
    r.t_min + (1.0 - r.t_min) * x2 / (1.0 + x2)
}

/// Detuning of the ring resonance from the supply laser, nm.
///
/// Thermal tuning follows heater power `V^2/R`; carrier injection adds a
/// piecewise-linear shift once the junction voltage exceeds `v_th`.
pub fn ring_detuning(
    v_m: f64,
    v_heater: f64,
    laser_lambda_nm: f64,
    r: &RingParams,
) -> Result<f64> {
    if !(v_heater >= 0.0 && v_heater <= r.v_heater_max) {
        return Err(Error::HeaterOverLimit {
            voltage: v_heater,
            max: r.v_heater_max,
        });
    }
    let thermal = r.thermo_coeff_nm_per_mw * r.heater_power_mw(v_heater);
    let electro_optic = r.eo_shift_nm_per_v * (v_m - r.v_th).max(0.0);
    Ok(r.lambda_res0_nm + thermal + electro_optic - laser_lambda_nm)
}

/// Optical output power of the ring ReLU stage.
///
/// Physical mode gates the supply light through the detuned notch; ideal
/// mode is `p_supply * min(1, g_ideal * max(0, v_m - v_th))`.
pub fn neuron_activation(
    v_m: f64,
    v_heater: f64,
    p_supply_w: f64,
    laser_lambda_nm: f64,
    g_ideal: f64,
    mode: EvalMode,
    r: &RingParams,
) -> Result<f64> {
    if !(p_supply_w >= 0.0) {
        return Err(Error::NegativePower(p_supply_w));
    }
    match mode {
        EvalMode::Physical => {
            let dl = ring_detuning(v_m, v_heater, laser_lambda_nm, r)?;
            Ok(p_supply_w * ring_transmission(dl, r))
        }
        EvalMode::Ideal => {
            let drive = (v_m - r.v_th).max(0.0);
            Ok(p_supply_w * (g_ideal * drive).min(1.0))
        }
    }
}
