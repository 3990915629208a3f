//! Shock ODE `U g(U)/(U²-1) dU/dx + j/x = 0` in two flavours: the classic
//! characteristic rule and the form obtained from the shock-strength
//! transport equation when the gradient behind the shock is dropped.

use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::csvio;
use crate::error::{domain, Error, Result};
use crate::gas::{jumps_from_mach, mu_nu, GasParams, Geometry};
use crate::ode::{Dopri5, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CcwVariant {
    #[default]
    Classic,
    Generalized,
}

impl FromStr for CcwVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classic" => Ok(Self::Classic),
            "generalized" | "generalised" => Ok(Self::Generalized),
            other => Err(Error::Invalid(format!("unknown CCW variant `{other}`"))),
        }
    }
}

/// `(1 + 2(μ/ν)^(1/2) + U⁻²)(1 + (U²-1)/(μν)^(1/2))`
pub fn g_classic(mach: f64, gas: GasParams) -> Result<f64> {
    if !(mach >= 1.0) {
        return Err(domain("shock Mach number", mach));
    }
    let (mu, nu) = mu_nu(mach, gas);
    let u2 = mach * mach;
    Ok((1.0 + 2.0 * (mu / nu).sqrt() + 1.0 / u2) * (1.0 + (u2 - 1.0) / (mu * nu).sqrt()))
}

/// `(γ+1)(2U²/ν + (U²+1)/μ)`
pub fn g_generalized(mach: f64, gas: GasParams) -> Result<f64> {
    if !(mach >= 1.0) {
        return Err(domain("shock Mach number", mach));
    }
    let (mu, nu) = mu_nu(mach, gas);
    let u2 = mach * mach;
    Ok(gas.gp1() * (2.0 * u2 / nu + (u2 + 1.0) / mu))
}

fn g_of(variant: CcwVariant, mach: f64, gas: GasParams) -> f64 {
    let r = match variant {
        CcwVariant::Classic => g_classic(mach, gas),
        CcwVariant::Generalized => g_generalized(mach, gas),
    };
    r.unwrap_or(f64::NAN)
}

/// Integration stops once `U - 1` falls to this level.
pub const SONIC_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcwSample {
    pub x: f64,
    pub mach: f64,
    pub p_jump: f64,
}

pub const CCW_HEADER: [&str; 3] = ["x", "U", "p_jump"];

pub fn write_ccw_csv<W: Write>(samples: &[CcwSample], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", CCW_HEADER.join(","))?;
    for s in samples {
        csvio::write_row(&mut w, &[s.x, s.mach, s.p_jump])?;
    }
    Ok(())
}

pub fn read_ccw_csv<R: io::Read>(r: R) -> Result<Vec<CcwSample>> {
    Ok(csvio::read_rows(r, &CCW_HEADER)?
        .into_iter()
        .map(|v| CcwSample {
            x: v[0],
            mach: v[1],
            p_jump: v[2],
        })
        .collect())
}

/// Integrate `dU/dx = -(j/x)(U²-1)/(U g(U))` from `x = 1` on a log grid of
/// `samples` points, stopping early if the shock becomes sonic.
pub fn integrate_ccw(
    mach0: f64,
    gas: GasParams,
    geom: Geometry,
    x_end: f64,
    variant: CcwVariant,
    samples: usize,
) -> Result<Vec<CcwSample>> {
    if !(mach0 > 1.0) || !mach0.is_finite() {
        return Err(domain("initial Mach number", mach0));
    }
    if !(x_end > 1.0) || !x_end.is_finite() {
        return Err(domain("x_end", x_end));
    }
    if samples < 2 {
        return Err(Error::Invalid("at least two samples are required".into()));
    }
    let grid = crate::decay::log_grid(1.0, x_end, samples);
    let jf = geom.jf();
    let rhs = |x: f64, y: &[f64; 1]| {
        let u = y[0].max(1.0);
        [-(jf / x) * (u * u - 1.0) / (u * g_of(variant, u, gas))]
    };
    let sol = Dopri5::new(1e-11, 1e-15).solve(
        rhs,
        1.0,
        [mach0],
        x_end,
        &grid,
        |_, y| y[0] - 1.0 <= SONIC_CUTOFF,
    )?;
    let mut out = Vec::with_capacity(sol.samples.len() + 1);
    for (x, y) in &sol.samples {
        out.push(sample(*x, y[0], gas)?);
    }
    if let Termination::Stopped { x } = sol.termination {
        let u = sol.nodes.last().map_or(1.0, |n| n.y[0]);
        if out.last().is_none_or(|s| s.x < x) {
            out.push(sample(x, u, gas)?);
        }
    }
    Ok(out)
}

fn sample(x: f64, mach: f64, gas: GasParams) -> Result<CcwSample> {
    let mach = mach.max(1.0);
    Ok(CcwSample {
        x,
        mach,
        p_jump: jumps_from_mach(mach, gas)?.p_jump,
    })
}
