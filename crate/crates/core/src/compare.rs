//! Cross-method comparison: decay exponents from the transport equations,
//! shock fitting and the CCW rule, the second-order gap between the exact
//! simple wave and its linearization, and the two CCW variants against each
//! other.

use serde::{Deserialize, Serialize};

use crate::ccw::{integrate_ccw, CcwSample, CcwVariant};
use crate::decay::{log_correction, log_grid, loglog_slope};
use crate::error::{domain, Error, Result};
use crate::gas::{mach_from_p_jump, psi_unchecked, GasParams, Geometry};
use crate::transport::{integrate_truncated, Scenario};
use crate::wavefront::{fit_shock, formation_distance, simple_wave_u, BoundaryPulse};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub gamma: f64,
    /// Initial shock strength for the transport and CCW pipelines.
    pub h: f64,
    pub k: f64,
    /// Half-sine boundary pulse `v0 sin(πτ/τ0)` for shock fitting.
    pub pulse_v0: f64,
    pub pulse_tau0: f64,
    /// Fitting window for the exponents.
    pub x_lo: f64,
    pub x_hi: f64,
    /// Pulse amplitudes for the simple-wave linearization check.
    pub amplitudes: Vec<f64>,
    /// Relative agreement demanded of exponents.
    pub tolerance: f64,
    pub geometries: Vec<Geometry>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            h: 0.05,
            k: 10.0,
            pulse_v0: 0.05,
            pulse_tau0: 0.1,
            x_lo: 1e3,
            x_hi: 1e5,
            amplitudes: vec![1e-2, 1e-3],
            tolerance: 0.02,
            geometries: Geometry::ALL.to_vec(),
        }
    }
}

impl CompareConfig {
    pub fn validate(&self) -> Result<()> {
        GasParams::new(self.gamma)?;
        if !(self.h > 0.0 && self.h <= 0.1) {
            return Err(domain("h (comparison needs 0 < h <= 0.1)", self.h));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(domain("k (comparison needs k > 0)", self.k));
        }
        if !(self.pulse_v0 > 0.0 && self.pulse_v0 <= 0.1) {
            return Err(domain("pulse_v0 (comparison needs 0 < v0 <= 0.1)", self.pulse_v0));
        }
        if !(self.pulse_tau0 > 0.0) || !self.pulse_tau0.is_finite() {
            return Err(domain("pulse_tau0", self.pulse_tau0));
        }
        if !(self.x_lo > 1.0 && self.x_hi > self.x_lo && self.x_hi.is_finite()) {
            return Err(Error::Invalid(format!(
                "need 1 < x_lo < x_hi, got [{}, {}]",
                self.x_lo, self.x_hi
            )));
        }
        if self.amplitudes.len() < 2 || self.amplitudes.iter().any(|a| !(*a > 0.0 && *a <= 0.1)) {
            return Err(Error::Invalid(
                "need at least two amplitudes in (0, 0.1]".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(domain("tolerance", self.tolerance));
        }
        if self.geometries.is_empty() {
            return Err(Error::Invalid("no geometries selected".into()));
        }
        Ok(())
    }
}

/// Exponent of `[p]` (or `[u]`, `U-1`) with the spherical logarithm removed.
pub fn expected_exponent(geom: Geometry) -> f64 {
    match geom {
        Geometry::Planar => -0.5,
        Geometry::Cylindrical => -0.75,
        Geometry::Spherical => -1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDeviation {
    pub methods: [&'static str; 2],
    /// `|a - b| / |expected|`
    pub deviation: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentRow {
    pub geometry: Geometry,
    pub expected: f64,
    pub transport: Option<f64>,
    pub wngo: Option<f64>,
    pub ccw: Option<f64>,
    pub pairs: Vec<PairDeviation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearizationCheck {
    pub amplitudes: Vec<f64>,
    /// `max |u_exact - v ψ|` on the sampling grid, per amplitude.
    pub deviations: Vec<f64>,
    /// `deviation / amplitude²`
    pub constants: Vec<f64>,
    /// Deviation ratio of the first two amplitudes.
    pub ratio: f64,
    /// `(a₀/a₁)²`
    pub ideal_ratio: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcwVariantCheck {
    pub geometry: Geometry,
    pub mach0: f64,
    /// Largest relative gap in `U - 1` between the two variants.
    pub max_deviation: f64,
    pub within_half_percent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub config: CompareConfig,
    pub exponents: Vec<ExponentRow>,
    pub linearization: Option<LinearizationCheck>,
    pub ccw_variants: Vec<CcwVariantCheck>,
    /// Pipelines that failed, with their errors.
    pub failures: Vec<String>,
    pub all_agree: bool,
}

impl CompareReport {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

fn window<'a>(xs: impl Iterator<Item = (f64, f64)> + 'a, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    xs.filter(|(x, _)| *x >= lo * (1.0 - 1e-12) && *x <= hi * (1.0 + 1e-12))
        .unzip()
}

fn corrected_slope(xs: &[f64], ys: &[f64], geom: Geometry) -> Result<f64> {
    let ys: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y * log_correction(*x, geom)).collect();
    let s = loglog_slope(xs, &ys);
    if s.is_finite() {
        Ok(s)
    } else {
        Err(Error::Consistency("too few positive samples for a slope fit".into()))
    }
}

fn transport_exponent(cfg: &CompareConfig, gas: GasParams, geom: Geometry) -> Result<f64> {
    let mut scen = Scenario::new(geom, cfg.h, cfg.k, cfg.x_hi);
    scen.gas = gas;
    scen.samples = 400;
    let hist = integrate_truncated(&scen)?;
    let (xs, ys) = window(hist.samples.iter().map(|s| (s.x, s.p_jump)), cfg.x_lo, cfg.x_hi);
    corrected_slope(&xs, &ys, geom)
}

fn wngo_exponent(cfg: &CompareConfig, gas: GasParams, geom: Geometry) -> Result<f64> {
    let pulse = BoundaryPulse::half_sine(cfg.pulse_v0, cfg.pulse_tau0)?;
    let xf = formation_distance(&pulse, gas, geom)?;
    let start = (1.01 * xf).min(0.5 * cfg.x_lo).max(1.0 + 1e-9);
    let mut grid = log_grid(start, cfg.x_lo, 20);
    grid.pop();
    grid.extend(log_grid(cfg.x_lo, cfg.x_hi, 60));
    let fit = fit_shock(&pulse, gas, geom, &grid)?;
    let (xs, ys) = window(fit.samples.iter().map(|s| (s.x, s.u_jump)), cfg.x_lo, cfg.x_hi);
    corrected_slope(&xs, &ys, geom)
}

fn ccw_run(mach0: f64, gas: GasParams, geom: Geometry, x_hi: f64, v: CcwVariant) -> Result<Vec<CcwSample>> {
    integrate_ccw(mach0, gas, geom, x_hi, v, 300)
}

fn ccw_exponent(cfg: &CompareConfig, geom: Geometry, run: &[CcwSample]) -> Result<f64> {
    let (xs, ys) = window(run.iter().map(|s| (s.x, s.p_jump)), cfg.x_lo, cfg.x_hi);
    corrected_slope(&xs, &ys, geom)
}

/// `max |simple_wave_u(vψ) - vψ|` for a half-sine pulse of amplitude `amp`.
pub fn linearization_gap(amp: f64, gas: GasParams, geom: Geometry, x_hi: f64) -> Result<f64> {
    let pulse = BoundaryPulse::half_sine(amp, 1.0)?;
    let mut worst = 0.0f64;
    for &x in &log_grid(1.0, x_hi, 40) {
        for i in 0..=64 {
            let rhs = pulse.v(i as f64 / 64.0) * psi_unchecked(x, geom);
            let u = simple_wave_u(rhs.max(0.0), gas)?;
            worst = worst.max((u - rhs).abs());
        }
    }
    Ok(worst)
}

fn linearization(cfg: &CompareConfig, gas: GasParams) -> Result<LinearizationCheck> {
    let deviations = cfg
        .amplitudes
        .iter()
        .map(|&a| linearization_gap(a, gas, Geometry::Planar, cfg.x_hi))
        .collect::<Result<Vec<_>>>()?;
    let constants = deviations
        .iter()
        .zip(&cfg.amplitudes)
        .map(|(d, a)| d / (a * a))
        .collect();
    let ratio = deviations[0] / deviations[1];
    let ideal_ratio = (cfg.amplitudes[0] / cfg.amplitudes[1]).powi(2);
    Ok(LinearizationCheck {
        amplitudes: cfg.amplitudes.clone(),
        deviations,
        constants,
        ratio,
        ideal_ratio,
        within_band: (ratio / ideal_ratio - 1.0).abs() <= 0.3,
    })
}

fn variant_gap(a: &[CcwSample], b: &[CcwSample]) -> f64 {
    a.iter()
        .zip(b)
        .filter(|(p, q)| p.x == q.x)
        .map(|(p, q)| ((p.mach - 1.0) / (q.mach - 1.0) - 1.0).abs())
        .fold(0.0, f64::max)
}

struct GeometryOutcome {
    transport: Result<f64>,
    wngo: Result<f64>,
    ccw: Result<(f64, CcwVariantCheck)>,
}

fn run_geometry(cfg: &CompareConfig, gas: GasParams, geom: Geometry, mach0: f64) -> GeometryOutcome {
    std::thread::scope(|s| {
        let t = s.spawn(|| transport_exponent(cfg, gas, geom));
        let w = s.spawn(|| wngo_exponent(cfg, gas, geom));
        let c = s.spawn(|| -> Result<(f64, CcwVariantCheck)> {
            let classic = ccw_run(mach0, gas, geom, cfg.x_hi, CcwVariant::Classic)?;
            let general = ccw_run(mach0, gas, geom, cfg.x_hi, CcwVariant::Generalized)?;
            let gap = variant_gap(&classic, &general);
            let exp = ccw_exponent(cfg, geom, &general)?;
            Ok((
                exp,
                CcwVariantCheck {
                    geometry: geom,
                    mach0,
                    max_deviation: gap,
                    within_half_percent: gap <= 5e-3,
                },
            ))
        });
        GeometryOutcome {
            transport: t.join().unwrap_or_else(|_| Err(Error::Consistency("transport pipeline panicked".into()))),
            wngo: w.join().unwrap_or_else(|_| Err(Error::Consistency("WNGO pipeline panicked".into()))),
            ccw: c.join().unwrap_or_else(|_| Err(Error::Consistency("CCW pipeline panicked".into()))),
        }
    })
}

/// Run every pipeline; failures are collected rather than propagated.
pub fn compare_methods(cfg: &CompareConfig) -> Result<CompareReport> {
    cfg.validate()?;
    let gas = GasParams::new(cfg.gamma)?;
    let mach0 = mach_from_p_jump(cfg.h, gas)?;
    let mut failures = Vec::new();

    let (outcomes, lin) = std::thread::scope(|s| {
        let lin = s.spawn(|| linearization(cfg, gas));
        let handles: Vec<_> = cfg
            .geometries
            .iter()
            .map(|&g| (g, s.spawn(move || run_geometry(cfg, gas, g, mach0))))
            .collect();
        let outcomes: Vec<_> = handles
            .into_iter()
            .map(|(g, h)| (g, h.join().expect("geometry worker panicked")))
            .collect();
        let lin = lin
            .join()
            .unwrap_or_else(|_| Err(Error::Consistency("linearization check panicked".into())));
        (outcomes, lin)
    });

    let mut exponents = Vec::new();
    let mut ccw_variants = Vec::new();
    let mut all_agree = true;
    for (geom, out) in outcomes {
        let mut keep = |name: &str, r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                failures.push(format!("{name} ({geom}): {e}"));
                None
            }
        };
        let transport = keep("transport", out.transport);
        let wngo = keep("wngo", out.wngo);
        let ccw = match out.ccw {
            Ok((e, check)) => {
                all_agree &= check.within_half_percent;
                ccw_variants.push(check);
                Some(e)
            }
            Err(e) => {
                failures.push(format!("ccw ({geom}): {e}"));
                None
            }
        };
        let expected = expected_exponent(geom);
        let named = [("transport", transport), ("wngo", wngo), ("ccw", ccw)];
        let mut pairs = Vec::new();
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                if let (Some(a), Some(b)) = (named[i].1, named[j].1) {
                    let deviation = (a - b).abs() / expected.abs();
                    let agree = deviation <= cfg.tolerance;
                    all_agree &= agree;
                    pairs.push(PairDeviation {
                        methods: [named[i].0, named[j].0],
                        deviation,
                        agree,
                    });
                }
            }
        }
        exponents.push(ExponentRow {
            geometry: geom,
            expected,
            transport,
            wngo,
            ccw,
            pairs,
        });
    }
    let linearization = match lin {
        Ok(l) => {
            all_agree &= l.within_band;
            Some(l)
        }
        Err(e) => {
            failures.push(format!("linearization: {e}"));
            None
        }
    };
    all_agree &= failures.is_empty();
    Ok(CompareReport {
        config: cfg.clone(),
        exponents,
        linearization,
        ccw_variants,
        failures,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_strong_data() {
        let cfg = CompareConfig {
            h: 0.3,
            ..Default::default()
        };
        assert!(compare_methods(&cfg).is_err());
    }

    #[test]
    fn linearization_gap_is_quadratic() {
        let a = linearization_gap(1e-2, GasParams::AIR, Geometry::Planar, 100.0).unwrap();
        let b = linearization_gap(1e-3, GasParams::AIR, Geometry::Planar, 100.0).unwrap();
        assert!((a / b / 100.0 - 1.0).abs() < 0.3);
        // u + u² to leading order for γ = 1.4
        assert!((a / 1e-4 - 1.0).abs() < 0.05);
    }

    #[test]
    fn planar_report() {
        let cfg = CompareConfig {
            geometries: vec![Geometry::Planar],
            ..Default::default()
        };
        let r = compare_methods(&cfg).unwrap();
        assert!(!r.is_partial(), "{:?}", r.failures);
        let row = &r.exponents[0];
        assert!((row.transport.unwrap() + 0.5).abs() < 0.01);
        assert!((row.wngo.unwrap() + 0.5).abs() < 0.01);
        assert!(row.ccw.unwrap().abs() < 1e-9);
        assert_eq!(r.ccw_variants[0].max_deviation, 0.0);
        assert!(r.linearization.as_ref().unwrap().within_band);
    }
}
