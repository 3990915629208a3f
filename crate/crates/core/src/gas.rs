//! Jump algebra across a shock of arbitrary strength and the ray-tube
//! geometry shared by every method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Polytropic gas described by its ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    gamma: f64,
}

impl GasParams {
    pub const AIR: GasParams = GasParams { gamma: 1.4 };

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(domain("gamma", gamma));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(γ+1)`, the factor that sets the nonlinear steepening rate.
    #[inline]
    pub fn gp1(&self) -> f64 {
        self.gamma + 1.0
    }
}

impl Default for GasParams {
    fn default() -> Self {
        Self::AIR
    }
}

/// Symmetry of the flow: `j = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Planar,
    Cylindrical,
    Spherical,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Planar, Geometry::Cylindrical, Geometry::Spherical];

    pub fn from_index(j: u32) -> Result<Self> {
        match j {
            0 => Ok(Geometry::Planar),
            1 => Ok(Geometry::Cylindrical),
            2 => Ok(Geometry::Spherical),
            _ => Err(domain("symmetry index j", j as f64)),
        }
    }

    #[inline]
    pub fn j(self) -> u32 {
        match self {
            Geometry::Planar => 0,
            Geometry::Cylindrical => 1,
            Geometry::Spherical => 2,
        }
    }

    #[inline]
    pub fn jf(self) -> f64 {
        self.j() as f64
    }

    /// Front curvature `Ω = j/x`.
    #[inline]
    pub fn curvature(self, x: f64) -> f64 {
        self.jf() / x
    }

    /// `dΩ/dx = -j/x²`.
    #[inline]
    pub fn curvature_derivative(self, x: f64) -> f64 {
        -self.jf() / (x * x)
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Planar => "planar",
            Geometry::Cylindrical => "cylindrical",
            Geometry::Spherical => "spherical",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "planar" | "plane" | "0" => Ok(Geometry::Planar),
            "cylindrical" | "cylinder" | "1" => Ok(Geometry::Cylindrical),
            "spherical" | "sphere" | "2" => Ok(Geometry::Spherical),
            other => Err(Error::Invalid(format!("unknown geometry `{other}`"))),
        }
    }
}

/// Jumps `[f] = f₋ - f₊` across a shock moving into gas at rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpSet {
    pub u_jump: f64,
    pub p_jump: f64,
    pub rho_jump: f64,
    pub mach: f64,
}

/// Jumps behind a shock of Mach number `mach`.
pub fn jumps_from_mach(mach: f64, gas: GasParams) -> Result<JumpSet> {
    if !(mach >= 1.0) || !mach.is_finite() {
        return Err(domain("shock Mach number", mach));
    }
    let u_jump = 2.0 * (mach * mach - 1.0) / (gas.gp1() * mach);
    let p_jump = mach * u_jump;
    let rho_jump = u_jump / (mach - u_jump);
    Ok(JumpSet {
        u_jump,
        p_jump,
        rho_jump,
        mach,
    })
}

/// Inverse of [`jumps_from_mach`] on the pressure jump.
pub fn mach_from_p_jump(p_jump: f64, gas: GasParams) -> Result<f64> {
    if !(p_jump >= 0.0) || !p_jump.is_finite() {
        return Err(domain("pressure jump", p_jump));
    }
    Ok((1.0 + 0.5 * gas.gp1() * p_jump).sqrt())
}

/// `μ = 2 + (γ-1)U²`, `ν = 2γU² + 1 - γ`.
#[inline]
pub fn mu_nu(mach: f64, gas: GasParams) -> (f64, f64) {
    let g = gas.gamma();
    let u2 = mach * mach;
    (2.0 + (g - 1.0) * u2, 2.0 * g * u2 + 1.0 - g)
}

/// Ray-tube amplitude factor `ψ(x) = x^(-j/2)`.
pub fn psi(x: f64, geom: Geometry) -> Result<f64> {
    check_position(x)?;
    Ok(psi_unchecked(x, geom))
}

#[inline]
pub(crate) fn psi_unchecked(x: f64, geom: Geometry) -> f64 {
    match geom {
        Geometry::Planar => 1.0,
        Geometry::Cylindrical => 1.0 / x.sqrt(),
        Geometry::Spherical => 1.0 / x,
    }
}

/// `J(x) = ∫₁ˣ ψ(s) ds`.
pub fn ray_integral(x: f64, geom: Geometry) -> Result<f64> {
    check_position(x)?;
    Ok(ray_integral_unchecked(x, geom))
}

#[inline]
pub(crate) fn ray_integral_unchecked(x: f64, geom: Geometry) -> f64 {
    match geom {
        Geometry::Planar => x - 1.0,
        Geometry::Cylindrical => 2.0 * (x.sqrt() - 1.0),
        Geometry::Spherical => x.ln(),
    }
}

/// Position at which `J(x)` reaches `value`.
pub fn ray_integral_inverse(value: f64, geom: Geometry) -> Result<f64> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(domain("ray integral", value));
    }
    Ok(match geom {
        Geometry::Planar => 1.0 + value,
        Geometry::Cylindrical => (1.0 + 0.5 * value).powi(2),
        Geometry::Spherical => value.exp(),
    })
}

fn check_position(x: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain("position x", x));
    }
    Ok(())
}
