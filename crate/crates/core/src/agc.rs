//! Area control error, the secondary (PI) controller acting on it and the
//! split of its command among the area's participants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the participation-factor sum.
pub const FACTOR_SUM_TOL: f64 = 1e-9;

/// `ACE = delta_p_tie + B delta_f`.
pub fn compute_ace(delta_p_tie: f64, bias: f64, delta_f_hz: f64) -> f64 {
    delta_p_tie + bias * delta_f_hz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgcParams {
    pub kp: f64,
    /// Integral gain, 1/s.
    pub ki: f64,
    /// Integrator clamp, pu.
    pub anti_windup: f64,
    /// Frequency bias, pu per Hz. Derived from the area when absent.
    pub bias: Option<f64>,
}

impl Default for AgcParams {
    fn default() -> Self {
        Self {
            kp: 0.1,
            ki: 0.2,
            anti_windup: 0.3,
            bias: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgcController {
    pub bias: f64,
    pub kp: f64,
    pub ki: f64,
    pub anti_windup: f64,
    integ: f64,
}

impl AgcController {
    pub fn new(bias: f64, kp: f64, ki: f64, anti_windup: f64) -> Result<Self> {
        let finite = [bias, kp, ki, anti_windup].iter().all(|v| v.is_finite());
        if !finite || bias <= 0.0 || ki <= 0.0 || kp < 0.0 || anti_windup <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "secondary controller needs B > 0, ki > 0, kp >= 0, anti-windup > 0 \
                 (got B = {bias}, kp = {kp}, ki = {ki}, limit = {anti_windup})"
            )));
        }
        Ok(Self {
            bias,
            kp,
            ki,
            anti_windup,
            integ: 0.0,
        })
    }

    pub fn integrator(&self) -> f64 {
        self.integ
    }

    /// Advances the integrator and returns the total secondary command
    /// `-(kp ace + integ)`, pu.
    pub fn step(&mut self, ace: f64, dt: f64) -> f64 {
        self.integ = (self.integ + self.ki * ace * dt).clamp(-self.anti_windup, self.anti_windup);
        -(self.kp * ace + self.integ)
    }
}

/// Splits `command` by `factors`. The last participant takes the residual so
/// the parts add back up to the command.
pub fn allocate_sfc(command: f64, factors: &[f64]) -> Result<Vec<f64>> {
    validate_factors(factors)?;
    let mut parts: Vec<f64> = factors.iter().map(|k| command * k).collect();
    let n = parts.len();
    let head: f64 = parts[..n - 1].iter().sum();
    parts[n - 1] = command - head;
    Ok(parts)
}

pub fn validate_factors(factors: &[f64]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::Config("no secondary-control participants".into()));
    }
    if let Some(k) = factors.iter().find(|k| !(0.0..=1.0).contains(*k)) {
        return Err(Error::Config(format!(
            "participation factor {k} outside [0, 1]"
        )));
    }
    let sum: f64 = factors.iter().sum();
    if (sum - 1.0).abs() > FACTOR_SUM_TOL {
        return Err(Error::Config(format!(
            "participation factors sum to {sum}, expected 1"
        )));
    }
    Ok(())
}
