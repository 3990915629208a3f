//! Singular-surface transport of the shock strength `[p]` and of the
//! first-order discontinuity `[p_x]` carried behind the shock.
//!
//! The coefficient functions hold at arbitrary shock strength. The weak-shock
//! system
//!
//! ```text
//! d[p]/dx   = -(γ+1)/4 [p][p_x] - j/(2x) [p]
//! d[p_x]/dx = -(γ+1)/2 [p_x]²   - j/(2x) [p_x]
//! ```
//!
//! is the leading-order truncation with `[p_xx] = 0`; it is integrated
//! numerically by [`integrate_truncated`] and in closed form by
//! [`closed_form`].

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::csvio;
use crate::error::{domain, Error, Result};
use crate::gas::{mu_nu, psi_unchecked, ray_integral_inverse, ray_integral_unchecked, GasParams, Geometry};
use crate::ode::{Dopri5, Termination};
use crate::reference::TABLE1_X;

/// Coefficients of `d[p]/dx = k11 [p_x] + k12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrderCoefficients {
    pub k11: f64,
    pub k12: f64,
}

/// `([u_x], [ρ_x])ᵀ = T ([p_x], 1)ᵀ` behind the shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TMatrix {
    pub t11: f64,
    pub t12: f64,
    pub t21: f64,
    pub t22: f64,
}

/// Derivatives of `T` entering the second transport equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TMatrixDerivatives {
    /// `dT11/dU`
    pub dt11_du: f64,
    /// `∂T12/∂U` at fixed `x`
    pub dt12_du: f64,
    /// `∂T12/∂x` at fixed `U`
    pub dt12_dx: f64,
}

/// Coefficients of
/// `d[p_x]/dx + k21 [p_xx] + k22 [p_x]² + k23 [p_x] + k24 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondOrderCoefficients {
    pub k21: f64,
    pub k22: f64,
    pub k23: f64,
    pub k24: f64,
    pub eta: f64,
}

fn check_mach(mach: f64) -> Result<()> {
    if !(mach >= 1.0) || !mach.is_finite() {
        return Err(domain("shock Mach number", mach));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain("position x", x));
    }
    Ok(())
}

/// `U²(2μ+ν) + ν`, the common denominator of the first-order coefficients.
#[inline]
fn denom(mach: f64, mu: f64, nu: f64) -> f64 {
    mach * mach * (2.0 * mu + nu) + nu
}

pub fn first_order_coefficients(
    mach: f64,
    gas: GasParams,
    omega: f64,
) -> Result<FirstOrderCoefficients> {
    check_mach(mach)?;
    if !(omega >= 0.0) {
        return Err(domain("curvature Ω", omega));
    }
    let (mu, nu) = mu_nu(mach, gas);
    let d = denom(mach, mu, nu);
    let s = mach * mach - 1.0;
    let gp1 = gas.gp1();
    Ok(FirstOrderCoefficients {
        k11: -2.0 * s * mu / d,
        k12: -4.0 * s * mu * nu / d * (omega / (gp1 * gp1)),
    })
}

/// `ν(U⁴-1)/(U D)`; `T12 = -2Ω/(γ+1)` times this.
fn t12_shape(mach: f64, gas: GasParams) -> (f64, f64) {
    let g = gas.gamma();
    let (mu, nu) = mu_nu(mach, gas);
    let d = denom(mach, mu, nu);
    let dmu = 2.0 * (g - 1.0) * mach;
    let dnu = 4.0 * g * mach;
    let dd = 2.0 * mach * (2.0 * mu + nu) + mach * mach * (2.0 * dmu + dnu) + dnu;
    let q = mach.powi(4) - 1.0;
    let num = nu * q;
    let den = mach * d;
    let dnum = dnu * q + 4.0 * mach.powi(3) * nu;
    let dden = d + mach * dd;
    (num / den, (dnum * den - num * dden) / (den * den))
}

/// Entries of `T`.
///
/// `T12` is evaluated with `k12/k11 = 2νΩ/(γ+1)²` cancelled, so it is regular
/// (and zero) at `U = 1`. `T21`, `T22` are the exact solution of the
/// continuity jump relation given `[u_x] = T11[p_x] + T12`.
pub fn t_matrix(mach: f64, gas: GasParams, geom: Geometry, x: f64) -> Result<TMatrix> {
    check_mach(mach)?;
    check_x(x)?;
    let omega = geom.curvature(x);
    let FirstOrderCoefficients { k11, k12 } = first_order_coefficients(mach, gas, omega)?;
    let (mu, nu) = mu_nu(mach, gas);
    let gp1 = gas.gp1();
    let u2 = mach * mach;

    let t11 = (mu - gp1 * k11 * u2) / (nu * mach);
    let t12 = -2.0 * omega / gp1 * t12_shape(mach, gas).0;
    let lead = gp1 * gp1 * u2 / mu.powi(3);
    let t21 = lead * (mu * mu - gp1 * (mu * u2 - nu) * k11) / nu;
    let t22 = lead * (gp1 * k12 + mach * mu * t12 + 2.0 * omega * (u2 - 1.0) * mu / gp1);
    Ok(TMatrix { t11, t12, t21, t22 })
}

/// Analytic `dT11/dU`, `∂_U T12|_x`, `∂_x T12|_U`.
pub fn t_matrix_derivatives(
    mach: f64,
    gas: GasParams,
    geom: Geometry,
    x: f64,
) -> Result<TMatrixDerivatives> {
    check_mach(mach)?;
    check_x(x)?;
    let g = gas.gamma();
    let gp1 = gas.gp1();
    let (mu, nu) = mu_nu(mach, gas);
    let d = denom(mach, mu, nu);
    let dmu = 2.0 * (g - 1.0) * mach;
    let dnu = 4.0 * g * mach;
    let dd = 2.0 * mach * (2.0 * mu + nu) + mach * mach * (2.0 * dmu + dnu) + dnu;
    let s = mach * mach - 1.0;

    let k11 = -2.0 * s * mu / d;
    let dk11 = -2.0 * ((2.0 * mach * mu + s * dmu) * d - s * mu * dd) / (d * d);
    let n = mu - gp1 * mach * mach * k11;
    let dn = dmu - gp1 * (2.0 * mach * k11 + mach * mach * dk11);
    let den = nu * mach;
    let dden = dnu * mach + nu;
    let dt11_du = (dn * den - n * dden) / (den * den);

    let (f, df) = t12_shape(mach, gas);
    let omega = geom.curvature(x);
    Ok(TMatrixDerivatives {
        dt11_du,
        dt12_du: -2.0 * omega / gp1 * df,
        dt12_dx: -2.0 / gp1 * f * geom.curvature_derivative(x),
    })
}

/// Coefficients of the second transport equation, evaluated as printed.
pub fn second_order_coefficients(
    mach: f64,
    gas: GasParams,
    geom: Geometry,
    x: f64,
) -> Result<SecondOrderCoefficients> {
    check_mach(mach)?;
    check_x(x)?;
    let gp1 = gas.gp1();
    let g = gas.gamma();
    let (mu, nu) = mu_nu(mach, gas);
    let omega = geom.curvature(x);
    let domega = geom.curvature_derivative(x);
    let FirstOrderCoefficients { k11, k12 } = first_order_coefficients(mach, gas, omega)?;
    let t = t_matrix(mach, gas, geom, x)?;
    let dt = t_matrix_derivatives(mach, gas, geom, x)?;
    let u = mach;
    let u2 = u * u;
    let u4 = u2 * u2;

    let eta = mu / (2.0 * mu - gp1 * u * k11);
    let k21 = (u2 - 1.0) * eta / u2;

    let k22 = (gp1 * eta / (u * mu))
        * (t.t11 * (mu + nu * u * t.t11 / gp1) + (nu * k11 / 4.0) * dt.dt11_du)
        - mu * nu * eta * t.t21 / (gp1 * gp1 * u4);

    // k11·(k12/k11 · dT11/dU + ∂_U T12) written without the division
    let k23 = (t.t12 * eta / mu) * (mu * gp1 + 2.0 * nu * u * t.t11) / u
        + eta * omega * gp1 / u * (nu * t.t11 + (2.0 * g / u) * (u2 - 1.0))
        - mu * nu * eta * t.t22 / (u4 * gp1 * gp1)
        + (eta * nu / (4.0 * mu)) * (gp1 / u) * (k12 * dt.dt11_du + k11 * dt.dt12_du);

    let k24 = 2.0 * eta * (nu / u2) * (u2 - 1.0) * domega / (gp1 * gp1)
        + eta * nu * t.t12 * omega / (u * gp1)
        + (nu * u * eta / (u * mu))
            * (t.t12 * t.t12 + u * dt.dt12_dx + gp1 * (k12 / (4.0 * u)) * dt.dt12_du);

    Ok(SecondOrderCoefficients {
        k21,
        k22,
        k23,
        k24,
        eta,
    })
}

/// Which printed asymptote is attached to a history.
///
/// Case 1 assumes `[p_x] = O(1)`, Case 2 assumes `[p_x] = O([p])`. The
/// unscaled dynamics are the same in both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    #[default]
    Case1,
    Case2,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "case1" | "1" => Ok(Regime::Case1),
            "case2" | "2" => Ok(Regime::Case2),
            other => Err(Error::Invalid(format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub gas: GasParams,
    pub geom: Geometry,
    /// `[p]` at `x = 1`.
    pub h: f64,
    /// `[p_x]` at `x = 1`.
    pub k: f64,
    pub x_end: f64,
    pub rtol: f64,
    pub atol: f64,
    pub regime: Regime,
    /// Number of logarithmically spaced samples on `[1, x_end]`.
    pub samples: usize,
}

impl Scenario {
    pub fn new(geom: Geometry, h: f64, k: f64, x_end: f64) -> Self {
        Self {
            gas: GasParams::AIR,
            geom,
            h,
            k,
            x_end,
            rtol: 1e-10,
            atol: 1e-14,
            regime: Regime::Case1,
            samples: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h >= 0.0) || !self.h.is_finite() {
            return Err(domain("initial pressure jump h", self.h));
        }
        if !self.k.is_finite() {
            return Err(domain("initial gradient jump k", self.k));
        }
        if !(self.x_end > 1.0) || !self.x_end.is_finite() {
            return Err(domain("x_end", self.x_end));
        }
        if !(self.rtol > 0.0) {
            return Err(domain("rtol", self.rtol));
        }
        if !(self.atol >= 0.0) {
            return Err(domain("atol", self.atol));
        }
        if self.samples < 2 {
            return Err(Error::Invalid("at least two samples are required".into()));
        }
        Ok(())
    }

    /// Non-fatal concerns about the scenario.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.h.abs() > 0.5 {
            w.push(format!(
                "|h| = {} exceeds 0.5; the weak-shock truncation may be inaccurate",
                self.h.abs()
            ));
        }
        w
    }

    /// Log-spaced samples merged with the benchmark abscissae inside range.
    pub fn sample_grid(&self) -> Vec<f64> {
        let mut grid = crate::decay::log_grid(1.0, self.x_end, self.samples);
        grid.extend(TABLE1_X.iter().copied().filter(|&x| x <= self.x_end));
        grid.sort_by(|a, b| a.total_cmp(b));
        grid.dedup();
        grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockSample {
    pub x: f64,
    pub p_jump: f64,
    pub px_jump: f64,
    pub p_asym: f64,
    pub px_asym: f64,
    pub p_err: f64,
    pub px_err: f64,
}

impl ShockSample {
    fn new(x: f64, p_jump: f64, px_jump: f64, asym: Option<(f64, f64)>) -> Self {
        let (p_asym, px_asym) = asym.unwrap_or((f64::NAN, f64::NAN));
        Self {
            x,
            p_jump,
            px_jump,
            p_asym,
            px_asym,
            p_err: (p_jump - p_asym).abs(),
            px_err: (px_jump - px_asym).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockHistory {
    pub samples: Vec<ShockSample>,
    /// Position where `[p_x]` blew up, if it did.
    pub breakdown: Option<f64>,
}

pub const SHOCK_HISTORY_HEADER: [&str; 7] =
    ["x", "p_jump", "px_jump", "p_asym", "px_asym", "p_err", "px_err"];

impl ShockHistory {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", SHOCK_HISTORY_HEADER.join(","))?;
        for s in &self.samples {
            csvio::write_row(
                &mut w,
                &[s.x, s.p_jump, s.px_jump, s.p_asym, s.px_asym, s.p_err, s.px_err],
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// Parse a history written by [`ShockHistory::write_csv`].
    pub fn read_csv<R: io::Read>(r: R) -> Result<Self> {
        let rows = csvio::read_rows(r, &SHOCK_HISTORY_HEADER)?;
        let samples = rows
            .into_iter()
            .map(|v| ShockSample {
                x: v[0],
                p_jump: v[1],
                px_jump: v[2],
                p_asym: v[3],
                px_asym: v[4],
                p_err: v[5],
                px_err: v[6],
            })
            .collect();
        Ok(Self {
            samples,
            breakdown: None,
        })
    }

    /// Sample at exactly `x`, if present.
    pub fn at(&self, x: f64) -> Option<&ShockSample> {
        self.samples.iter().find(|s| s.x == x)
    }

    pub fn last(&self) -> Option<&ShockSample> {
        self.samples.last()
    }
}

/// Right-hand side of the truncated weak-shock system.
#[inline]
fn truncated_rhs(gas: GasParams, geom: Geometry, x: f64, y: &[f64; 2]) -> [f64; 2] {
    let gp1 = gas.gp1();
    let spread = 0.5 * geom.jf() / x;
    let (p, px) = (y[0], y[1]);
    [
        -0.25 * gp1 * p * px - spread * p,
        -0.5 * gp1 * px * px - spread * px,
    ]
}

/// `|[p_x]|` beyond this multiple of `max(1, |k|)` counts as blow-up.
const BLOWUP_FACTOR: f64 = 1e12;

/// Near `x*` the gradient behaves like `2/((γ+1)(x* - x))`, so steps must
/// shrink with `1/|[p_x]|`. The threshold is capped where those steps would
/// approach the solver's floor of a few ulps of `x`.
fn blowup_limit(k: f64, x: f64) -> f64 {
    (BLOWUP_FACTOR * k.abs().max(1.0)).min(1e-5 / (f64::EPSILON * x))
}

/// Integrate the truncated system (`[p_xx] = 0`) from `x = 1` to `x_end`.
pub fn integrate_truncated(scen: &Scenario) -> Result<ShockHistory> {
    scen.validate()?;
    for w in scen.warnings() {
        log::warn!("{w}");
    }
    let (gas, geom) = (scen.gas, scen.geom);
    let grid = scen.sample_grid();
    let solver = Dopri5::new(scen.rtol, scen.atol);
    let sol = solver.solve(
        |x, y| truncated_rhs(gas, geom, x, y),
        1.0,
        [scen.h, scen.k],
        scen.x_end,
        &grid,
        |x, y| {
            let limit = blowup_limit(scen.k, x);
            y[1].abs() > limit || y[0].abs() > limit
        },
    )?;

    let breakdown = match sol.termination {
        Termination::Completed => None,
        Termination::Stopped { x } => Some(x),
    };
    let mut samples: Vec<ShockSample> = sol
        .samples
        .iter()
        .map(|(x, y)| {
            let asym = asymptotic_law(*x, scen.h, scen.k, gas, geom, scen.regime).ok();
            ShockSample::new(*x, y[0], y[1], asym)
        })
        .collect();
    if let Some(xb) = breakdown {
        let last = sol.nodes.last().expect("solution has nodes");
        if samples.last().is_none_or(|s| s.x < xb) {
            samples.push(ShockSample::new(xb, last.y[0], last.y[1], None));
        }
    }
    Ok(ShockHistory { samples, breakdown })
}

/// `I(x) = 1 + (γ+1)k J(x)/2`.
fn growth_factor(x: f64, k: f64, gas: GasParams, geom: Geometry) -> f64 {
    1.0 + 0.5 * gas.gp1() * k * ray_integral_unchecked(x, geom)
}

/// Exact solution of the truncated system:
/// `[p] = h I^(-1/2) ψ(x)`, `[p_x] = k I^(-1) ψ(x)`.
pub fn closed_form(x: f64, h: f64, k: f64, gas: GasParams, geom: Geometry) -> Result<(f64, f64)> {
    check_x(x)?;
    let i = growth_factor(x, k, gas, geom);
    if !(i > 0.0) {
        let x_star = breakdown_distance(k, gas, geom).unwrap_or(f64::NAN);
        return Err(Error::Breakdown { x, x_star });
    }
    let psi = psi_unchecked(x, geom);
    Ok((h * psi / i.sqrt(), k * psi / i))
}

/// Large-`x` decay laws of `[p]` and `[p_x]` for `k > 0`.
///
/// The `[p_x]` law is independent of both `h` and `k`.
pub fn asymptotic_law(
    x: f64,
    h: f64,
    k: f64,
    gas: GasParams,
    geom: Geometry,
    regime: Regime,
) -> Result<(f64, f64)> {
    check_x(x)?;
    if !(k > 0.0) {
        return Err(domain("gradient jump k (asymptotics need k > 0)", k));
    }
    let gp1 = gas.gp1();
    let lx = x.ln();
    let out = match regime {
        Regime::Case1 => {
            let amp = h * (2.0 / (gp1 * k)).sqrt();
            let grad = 2.0 / gp1;
            match geom {
                Geometry::Planar => (amp / x.sqrt(), grad / x),
                Geometry::Cylindrical => (amp * x.powf(-0.75) / 2f64.sqrt(), 0.5 * grad / x),
                Geometry::Spherical => (amp / (x * lx.sqrt()), grad / (x * lx)),
            }
        }
        // multiple-scales results, one slow variable per geometry
        Regime::Case2 => match geom {
            Geometry::Planar => (h * (2.0 / (gp1 * k)).sqrt() / x.sqrt(), 2.0 / (gp1 * x)),
            Geometry::Cylindrical => (h * (1.0 / (k * gp1)).sqrt() * x.powf(-0.75), 1.0 / (gp1 * x)),
            Geometry::Spherical => (
                h * (2.0 / (k * gp1)).sqrt() / (x * lx.sqrt()),
                2.0 / (gp1 * x * lx),
            ),
        },
    };
    Ok(out)
}

/// Position where `I(x*) = 0`, i.e. where `[p_x] → -∞`. `None` for `k >= 0`.
pub fn breakdown_distance(k: f64, gas: GasParams, geom: Geometry) -> Option<f64> {
    if !(k < 0.0) {
        return None;
    }
    ray_integral_inverse(-2.0 / (gas.gp1() * k), geom).ok()
}
