//! Characteristic-based descriptions of the same decaying shock: weakly
//! nonlinear geometrical optics with shock fitting, the simple wave built on
//! the Riemann invariant `r⁻`, and relatively undistorted wave states.
//!
//! Boundary data enter through a [`BoundaryPulse`]: the gas velocity `v(τ)`
//! imposed at `x = 1` for `0 ≤ τ ≤ τ0`. In the modulated simple wave,
//! `u x^(j/2) = v(τ)` is carried along the wavelets
//! `t = τ + (x-1) - (γ+1)/2 v(τ) J(x)`.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::csvio;
use crate::error::{domain, Error, Result};
use crate::gas::{psi_unchecked, ray_integral_inverse, ray_integral_unchecked, GasParams, Geometry};
use crate::quad::{gauss_legendre5, integrate};
use crate::roots::{bisect, safeguarded_newton};

/// Number of cumulative-integral nodes for analytic pulse shapes.
const CACHE_NODES: usize = 256;
const QUAD_TOL: f64 = 1e-12;

/// Shape of the boundary velocity history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseShape {
    /// `v0 sin(πτ/τ0)`
    HalfSine { v0: f64 },
    /// `m τ (1 - τ/τ0)`
    Ramp { m: f64 },
    /// Monotone cubic through `(tau[i], v[i])`; `tau[0] = 0`, last knot is `τ0`.
    Table { tau: Vec<f64>, v: Vec<f64> },
}

/// Boundary velocity `v(τ)` on `[0, τ0]`, with `∫₀^τ v` tabulated eagerly.
#[derive(Debug, Clone)]
pub struct BoundaryPulse {
    shape: PulseShape,
    tau0: f64,
    slopes: Vec<f64>,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    b: f64,
    vdot0: f64,
}

impl BoundaryPulse {
    pub fn half_sine(v0: f64, tau0: f64) -> Result<Self> {
        if !(v0 >= 0.0) || !v0.is_finite() {
            return Err(domain("pulse amplitude v0", v0));
        }
        Self::build(PulseShape::HalfSine { v0 }, tau0)
    }

    pub fn ramp(m: f64, tau0: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(domain("ramp slope m", m));
        }
        Self::build(PulseShape::Ramp { m }, tau0)
    }

    /// Pulse interpolating samples; `tau` starts at 0 and increases strictly,
    /// `v` vanishes at both ends.
    pub fn table(tau: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if tau.len() != v.len() || tau.len() < 2 {
            return Err(Error::Invalid(
                "pulse table needs at least two (tau, v) pairs of equal length".into(),
            ));
        }
        if tau[0] != 0.0 {
            return Err(Error::Invalid(format!("pulse table must start at tau = 0, got {}", tau[0])));
        }
        if tau.windows(2).any(|w| !(w[1] > w[0])) || tau.iter().chain(&v).any(|t| !t.is_finite()) {
            return Err(Error::Invalid("pulse table tau must be finite and strictly increasing".into()));
        }
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let eps = 1e-12 * vmax.max(f64::MIN_POSITIVE);
        if v[0].abs() > eps || v[v.len() - 1].abs() > eps {
            return Err(Error::Invalid("pulse table must have v = 0 at both ends".into()));
        }
        let tau0 = tau[tau.len() - 1];
        Self::build(PulseShape::Table { tau, v }, tau0)
    }

    /// Read a two-column `tau,v` CSV.
    pub fn from_csv<R: io::Read>(r: R) -> Result<Self> {
        let rows = csvio::read_rows(r, &["tau", "v"])?;
        let (tau, v) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
        Self::table(tau, v)
    }

    fn build(shape: PulseShape, tau0: f64) -> Result<Self> {
        if !(tau0 > 0.0) || !tau0.is_finite() {
            return Err(domain("pulse duration tau0", tau0));
        }
        let slopes = match &shape {
            PulseShape::Table { tau, v } => pchip_slopes(tau, v),
            _ => Vec::new(),
        };
        let mut pulse = Self {
            shape,
            tau0,
            slopes,
            nodes: Vec::new(),
            cumulative: Vec::new(),
            b: 0.0,
            vdot0: 0.0,
        };
        pulse.vdot0 = match &pulse.shape {
            PulseShape::HalfSine { v0 } => v0 * PI / tau0,
            PulseShape::Ramp { m } => *m,
            PulseShape::Table { .. } => pulse.slopes[0],
        };
        let nodes: Vec<f64> = match &pulse.shape {
            PulseShape::Table { tau, .. } => tau.clone(),
            _ => (0..=CACHE_NODES)
                .map(|i| tau0 * i as f64 / CACHE_NODES as f64)
                .collect(),
        };
        let mut cumulative = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in nodes.windows(2) {
            acc += integrate(|t| pulse.v(t), w[0], w[1], QUAD_TOL / nodes.len() as f64)?;
            cumulative.push(acc);
        }
        pulse.b = acc;
        pulse.nodes = nodes;
        pulse.cumulative = cumulative;
        Ok(pulse)
    }

    pub fn shape(&self) -> &PulseShape {
        &self.shape
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// `∫₀^τ0 v`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `v̇(0)`.
    pub fn vdot0(&self) -> f64 {
        self.vdot0
    }

    /// Boundary velocity; zero outside `[0, τ0]`.
    pub fn v(&self, tau: f64) -> f64 {
        if !(0.0..=self.tau0).contains(&tau) {
            return 0.0;
        }
        match &self.shape {
            PulseShape::HalfSine { v0 } => v0 * (PI * tau / self.tau0).sin(),
            PulseShape::Ramp { m } => m * tau * (1.0 - tau / self.tau0),
            PulseShape::Table { tau: t, v } => hermite_eval(t, v, &self.slopes, tau),
        }
    }

    /// `∫₀^τ v`, clamped to `[0, τ0]`.
    pub fn integral(&self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, self.tau0);
        let i = self.nodes.partition_point(|&n| n <= tau).saturating_sub(1);
        let base = self.cumulative[i];
        if tau == self.nodes[i] {
            return base;
        }
        // a single interval of a smooth integrand; the adaptive rule only
        // refines if needed
        base + integrate(|t| self.v(t), self.nodes[i], tau, QUAD_TOL / self.nodes.len() as f64)
            .unwrap_or(f64::NAN)
    }
}

/// Fritsch–Carlson monotone cubic slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = pchip_end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point end slope, shape-preserving.
fn pchip_end(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

fn hermite_eval(x: &[f64], y: &[f64], d: &[f64], t: f64) -> f64 {
    let i = x.partition_point(|&xi| xi <= t).clamp(1, x.len() - 1) - 1;
    let h = x[i + 1] - x[i];
    let s = (t - x[i]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y[i]
        + (s3 - 2.0 * s2 + s) * h * d[i]
        + (-2.0 * s3 + 3.0 * s2) * y[i + 1]
        + (s3 - s2) * h * d[i + 1]
}

/// Arrival time at `x` of the wavelet leaving the boundary at `τ`.
pub fn wavelet_time(
    x: f64,
    tau: f64,
    pulse: &BoundaryPulse,
    gas: GasParams,
    geom: Geometry,
) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(domain("position x", x));
    }
    if !(0.0..=pulse.tau0()).contains(&tau) {
        return Err(domain("wavelet label tau", tau));
    }
    Ok(tau + (x - 1.0) - 0.5 * gas.gp1() * pulse.v(tau) * ray_integral_unchecked(x, geom))
}

/// Position where neighbouring wavelets first cross at the pulse head,
/// `J(x_f) = 2/((γ+1) v̇(0))`.
pub fn formation_distance(pulse: &BoundaryPulse, gas: GasParams, geom: Geometry) -> Result<f64> {
    if !(pulse.vdot0() > 0.0) {
        return Err(Error::Fitting {
            x: 1.0,
            reason: "v'(0) <= 0: no shock forms at the pulse head".into(),
        });
    }
    ray_integral_inverse(2.0 / (gas.gp1() * pulse.vdot0()), geom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedSample {
    pub x: f64,
    pub tau_minus: f64,
    pub u_jump: f64,
    /// `NaN` outside the asymptotic range `x ≥ 10 x_f`.
    pub ux_jump: f64,
    pub shock_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedShock {
    pub samples: Vec<FittedSample>,
    pub formation: f64,
    pub b: f64,
    pub tau0: f64,
}

pub const FITTED_SHOCK_HEADER: [&str; 5] = ["x", "tau_minus", "u_jump", "ux_jump", "shock_time"];
pub const FITTED_SHOCK_REFERENCE_HEADER: [&str; 7] =
    ["x", "tau_minus", "u_jump", "ux_jump", "shock_time", "u_asym", "ux_asym"];

impl FittedShock {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", FITTED_SHOCK_HEADER.join(","))?;
        for s in &self.samples {
            csvio::write_row(&mut w, &[s.x, s.tau_minus, s.u_jump, s.ux_jump, s.shock_time])?;
        }
        Ok(())
    }

    /// As [`FittedShock::write_csv`] with the large-distance laws appended.
    pub fn write_csv_with_reference<W: Write>(
        &self,
        mut w: W,
        gas: GasParams,
        geom: Geometry,
    ) -> io::Result<()> {
        writeln!(w, "{}", FITTED_SHOCK_REFERENCE_HEADER.join(","))?;
        for s in &self.samples {
            let (ua, uxa) = wngo_decay(self.b, gas, geom, s.x).unwrap_or((f64::NAN, f64::NAN));
            csvio::write_row(
                &mut w,
                &[s.x, s.tau_minus, s.u_jump, s.ux_jump, s.shock_time, ua, uxa],
            )?;
        }
        Ok(())
    }

    /// Parse the five leading columns of either CSV layout.
    pub fn read_csv<R: io::Read>(mut r: R) -> Result<Vec<FittedSample>> {
        let mut data = Vec::new();
        r.read_to_end(&mut data).map_err(|e| Error::Csv(e.to_string()))?;
        let first = data.split(|&c| c == b'\n').next().unwrap_or_default();
        let header: &[&str] = if first == FITTED_SHOCK_REFERENCE_HEADER.join(",").as_bytes() {
            &FITTED_SHOCK_REFERENCE_HEADER
        } else {
            &FITTED_SHOCK_HEADER
        };
        let rows = csvio::read_rows(data.as_slice(), header)?;
        Ok(rows
            .into_iter()
            .map(|v| FittedSample {
                x: v[0],
                tau_minus: v[1],
                u_jump: v[2],
                ux_jump: v[3],
                shock_time: v[4],
            })
            .collect())
    }
}

/// `F(τ) = (γ+1)/4 v²(τ) J - ∫₀^τ v`, whose smallest positive root is the
/// wavelet just behind the shock.
struct FitFunction<'a> {
    pulse: &'a BoundaryPulse,
    gas: GasParams,
    geom: Geometry,
}

impl FitFunction<'_> {
    fn eval(&self, tau: f64, x: f64) -> f64 {
        let v = self.pulse.v(tau);
        0.25 * self.gas.gp1() * v * v * ray_integral_unchecked(x, self.geom) - self.pulse.integral(tau)
    }

    /// Root of `F(·; x)` on `[lo, hi]` where `F(lo) ≥ 0 ≥ F(hi)`.
    fn root(&self, x: f64, lo: f64, hi: f64) -> Result<f64> {
        if lo == hi {
            return Ok(lo);
        }
        bisect(|t| self.eval(t, x), lo, hi, 0.0).map_err(|e| Error::Fitting {
            x,
            reason: e.to_string(),
        })
    }

    /// First `+ → -` crossing of `F(·; x)` above `from`, with `F(from) ≥ 0`.
    fn first_root_after(&self, x: f64, from: f64) -> Result<f64> {
        let nodes = &self.pulse.nodes;
        let mut lo = from;
        for &t in nodes.iter().filter(|&&t| t > from) {
            if self.eval(t, x) <= 0.0 {
                return self.root(x, lo, t);
            }
            lo = t;
        }
        Err(Error::Fitting {
            x,
            reason: "F stays positive up to tau0".into(),
        })
    }

    /// Smallest positive root at the first grid point.
    fn initial_root(&self, x: f64) -> Result<f64> {
        let tau0 = self.pulse.tau0();
        let first_node = self.pulse.nodes[1];
        // geometric probes resolve roots far below the first cache node
        let mut probes: Vec<f64> = (1..=50).rev().map(|i| first_node * 0.5f64.powi(i)).collect();
        probes.push(first_node);
        let start = probes.into_iter().find(|&t| self.eval(t, x) > 0.0 && t < tau0);
        let Some(start) = start else {
            return Err(Error::Fitting {
                x,
                reason: "no shock: F(tau) <= 0 next to the pulse head".into(),
            });
        };
        // a sign change before `start` would be at or below the probe scale
        self.first_root_after(x, start)
    }
}

/// Wavelet curvature term `K(x)` and its derivative.
fn k_term(x: f64, geom: Geometry) -> (f64, f64) {
    match geom {
        Geometry::Planar => (1.0 / x, -1.0 / (x * x)),
        Geometry::Cylindrical => (0.5 / x, -0.5 / (x * x)),
        Geometry::Spherical => {
            let l = x.ln();
            (1.0 / (x * l), -(l + 1.0) / (x * l).powi(2))
        }
    }
}

/// Shock fitting on `x_grid` (increasing, beyond the formation distance).
pub fn fit_shock(
    pulse: &BoundaryPulse,
    gas: GasParams,
    geom: Geometry,
    x_grid: &[f64],
) -> Result<FittedShock> {
    let formation = formation_distance(pulse, gas, geom)?;
    if x_grid.is_empty() {
        return Err(Error::Invalid("empty x grid".into()));
    }
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("x grid must be strictly increasing".into()));
    }
    if !(x_grid[0] > 1.0) || !x_grid[x_grid.len() - 1].is_finite() {
        return Err(domain("first fitting position", x_grid[0]));
    }
    let fit = FitFunction { pulse, gas, geom };
    let gp1 = gas.gp1();

    let mut taus = Vec::with_capacity(x_grid.len());
    for (i, &x) in x_grid.iter().enumerate() {
        let tau = match taus.last() {
            None => fit.initial_root(x)?,
            Some(&prev) => {
                debug_assert!(i > 0);
                // F(prev; x) ≥ 0 because J grew
                fit.first_root_after(x, prev)?
            }
        };
        if let Some(&prev) = taus.last() {
            if tau < prev {
                return Err(Error::Consistency(format!(
                    "tau_minus decreased from {prev} to {tau} at x = {x}"
                )));
            }
        }
        taus.push(tau);
    }

    let slope = |xi: f64, tau: f64| 1.0 - 0.25 * gp1 * pulse.v(tau) * psi_unchecked(xi, geom);
    let x0 = x_grid[0];
    let mut s = taus[0] + (x0 - 1.0) - 0.5 * gp1 * pulse.v(taus[0]) * ray_integral_unchecked(x0, geom);
    let mut samples = Vec::with_capacity(x_grid.len());
    for (i, &x) in x_grid.iter().enumerate() {
        if i > 0 {
            let (xa, ta, tb) = (x_grid[i - 1], taus[i - 1], taus[i]);
            const PIECES: usize = 4;
            let mut err = None;
            for p in 0..PIECES {
                let a = xa + (x - xa) * p as f64 / PIECES as f64;
                let b = xa + (x - xa) * (p + 1) as f64 / PIECES as f64;
                s += gauss_legendre5(
                    |xi| match fit.root(xi, ta, tb) {
                        Ok(t) => slope(xi, t),
                        Err(e) => {
                            err.get_or_insert(e);
                            f64::NAN
                        }
                    },
                    a,
                    b,
                );
            }
            if let Some(e) = err {
                return Err(e);
            }
        }
        let tau = taus[i];
        let ux = if x >= 10.0 * formation {
            let (k, dk) = k_term(x, geom);
            2.0 / gp1 * (k + (x - s + pulse.tau0()) * dk)
        } else {
            f64::NAN
        };
        samples.push(FittedSample {
            x,
            tau_minus: tau,
            u_jump: pulse.v(tau) * psi_unchecked(x, geom),
            ux_jump: ux,
            shock_time: s,
        });
    }
    Ok(FittedShock {
        samples,
        formation,
        b: pulse.b(),
        tau0: pulse.tau0(),
    })
}

/// Large-distance laws `[u] ~ (4b/((γ+1)J))^(1/2) ψ` and `[u_x] ~ 2/(γ+1) K`.
pub fn wngo_decay(b: f64, gas: GasParams, geom: Geometry, x: f64) -> Result<(f64, f64)> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("pulse integral b", b));
    }
    if !(x > 1.0) || !x.is_finite() {
        return Err(domain("position x", x));
    }
    let gp1 = gas.gp1();
    let j = ray_integral_unchecked(x, geom);
    let u = (4.0 * b / (gp1 * j)).sqrt() * psi_unchecked(x, geom);
    Ok((u, 2.0 / gp1 * k_term(x, geom).0))
}

/// Isentropic state on `r⁻ = 2/(γ-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuwState {
    pub rho: f64,
    pub p: f64,
    pub a: f64,
}

pub fn ruw_state(u: f64, gas: GasParams) -> Result<RuwState> {
    let gm1 = gas.gamma() - 1.0;
    let a = 1.0 + 0.5 * gm1 * u;
    // rounding in 2/(γ-1) must not leave a sliver of positive sound speed
    if !(a > 4.0 * f64::EPSILON) {
        return Err(Error::Vacuum { u });
    }
    Ok(RuwState {
        rho: a.powf(2.0 / gm1),
        p: a.powf(2.0 * gas.gamma() / gm1) / gas.gamma(),
        a,
    })
}

/// Nonnegative `u` with `u (1 + (γ-1)u/2)^(2/(γ-1)) = rhs`.
pub fn simple_wave_u(rhs: f64, gas: GasParams) -> Result<f64> {
    if !(rhs >= 0.0) || !rhs.is_finite() {
        return Err(domain("simple-wave right-hand side", rhs));
    }
    if rhs == 0.0 {
        return Ok(0.0);
    }
    let gm1 = gas.gamma() - 1.0;
    let e = 2.0 / gm1;
    let fdf = |u: f64| {
        let a = 1.0 + 0.5 * gm1 * u;
        let ae = a.powf(e);
        (u * ae - rhs, ae + u * ae / a)
    };
    // the map exceeds u itself, so the root lies in [0, rhs]
    safeguarded_newton(fdf, 0.0, rhs, rhs, 1e-13 * rhs.clamp(1e-300, 1.0))
}
