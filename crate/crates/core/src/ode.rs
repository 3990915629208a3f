//! Embedded Dormand–Prince 5(4) integrator with step-size control.
//!
//! Steps are forced to end exactly on the requested sample abscissae, and a
//! cubic Hermite interpolant over the accepted steps gives dense output
//! anywhere inside the integrated span.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub max_step: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            max_steps: 1_000_000,
            max_step: f64::INFINITY,
        }
    }
}

/// One accepted state with its derivative.
#[derive(Debug, Clone, Copy)]
pub struct Node<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached the end of the interval.
    Completed,
    /// The stop predicate fired after the step ending at `x`.
    Stopped { x: f64 },
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub nodes: Vec<Node<N>>,
    /// States at the requested sample abscissae that were reached.
    pub samples: Vec<(f64, [f64; N])>,
    pub termination: Termination,
    pub rejected: usize,
}

impl<const N: usize> Solution<N> {
    pub fn x_last(&self) -> f64 {
        self.nodes.last().map(|n| n.x).unwrap_or(f64::NAN)
    }

    /// Cubic Hermite dense output; `None` outside the integrated span.
    pub fn eval(&self, x: f64) -> Option<[f64; N]> {
        let first = self.nodes.first()?;
        let last = self.nodes.last()?;
        if x < first.x || x > last.x {
            return None;
        }
        let i = self.nodes.partition_point(|n| n.x <= x);
        if i == 0 {
            return Some(first.y);
        }
        if i >= self.nodes.len() {
            return Some(last.y);
        }
        let (a, b) = (&self.nodes[i - 1], &self.nodes[i]);
        let h = b.x - a.x;
        let t = (x - a.x) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = h00 * a.y[k] + h10 * h * a.dy[k] + h01 * b.y[k] + h11 * h * b.dy[k];
        }
        Some(out)
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for k in 0..N {
        let mut s = 0.0;
        for (c, v) in terms {
            s += c * v[k];
        }
        out[k] += h * s;
    }
    out
}

fn all_finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|z| z.is_finite())
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// Integrate `y' = f(x, y)` from `x0` to `x_end > x0`.
    ///
    /// `samples` must be increasing; those inside `(x0, x_end]` become step
    /// endpoints and are reported in [`Solution::samples`] (`x0` itself is
    /// reported if listed). `stop` is checked after every accepted step.
    pub fn solve<const N: usize, F, S>(
        &self,
        mut f: F,
        x0: f64,
        y0: [f64; N],
        x_end: f64,
        samples: &[f64],
        mut stop: S,
    ) -> Result<Solution<N>>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        S: FnMut(f64, &[f64; N]) -> bool,
    {
        if !(x_end > x0) {
            return Err(Error::Invalid(format!(
                "integration interval [{x0}, {x_end}] is empty"
            )));
        }
        if !(self.rtol > 0.0) || !(self.atol >= 0.0) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        if samples.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("sample abscissae must increase".into()));
        }

        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);
        if !all_finite(&k1) || !all_finite(&y) {
            return Err(Error::Solver {
                x,
                reason: "non-finite initial state".into(),
            });
        }

        let mut nodes = vec![Node { x, y, dy: k1 }];
        let mut out_samples = Vec::new();
        let mut next_sample = samples.partition_point(|&s| s < x0);
        if next_sample < samples.len() && samples[next_sample] == x0 {
            out_samples.push((x0, y0));
            next_sample += 1;
        }

        let mut h = self.initial_step(&mut f, x0, &y0, &k1, x_end);
        let mut rejected = 0usize;
        let mut last_rejected = false;

        for _ in 0..self.max_steps {
            let target = if next_sample < samples.len() && samples[next_sample] < x_end {
                samples[next_sample]
            } else {
                x_end
            };
            let mut step = h.min(self.max_step);
            let lands = x + step >= target;
            if lands {
                step = target - x;
            }
            if step <= 16.0 * f64::EPSILON * x.abs().max(1.0) {
                return Err(Error::Solver {
                    x,
                    reason: format!("step size underflow (h = {step:e})"),
                });
            }

            let k2 = f(x + C2 * step, &axpy(&y, step, &[(A21, &k1)]));
            let k3 = f(x + C3 * step, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                x + C4 * step,
                &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                x + C5 * step,
                &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                x + step,
                &axpy(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                step,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let x_new = if lands { target } else { x + step };
            let k7 = f(x_new, &y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            err = (err / N as f64).sqrt();
            if !err.is_finite() || !all_finite(&y_new) || !all_finite(&k7) {
                err = f64::INFINITY;
            }

            if err <= 1.0 {
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                let factor = if last_rejected { factor.min(1.0) } else { factor };
                // a step shortened to land on a sample should not shrink the next one
                let base = if lands { h.max(step) } else { step };
                h = base * factor;
                last_rejected = false;

                x = x_new;
                y = y_new;
                k1 = k7;
                nodes.push(Node { x, y, dy: k1 });

                if lands && target < x_end {
                    out_samples.push((x, y));
                    next_sample += 1;
                }
                if x >= x_end {
                    if next_sample < samples.len() && samples[next_sample] == x_end {
                        out_samples.push((x, y));
                    }
                    return Ok(Solution {
                        nodes,
                        samples: out_samples,
                        termination: Termination::Completed,
                        rejected,
                    });
                }
                if stop(x, &y) {
                    return Ok(Solution {
                        nodes,
                        samples: out_samples,
                        termination: Termination::Stopped { x },
                        rejected,
                    });
                }
            } else {
                rejected += 1;
                last_rejected = true;
                let factor = if err.is_finite() {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
                } else {
                    MIN_FACTOR
                };
                h = step * factor;
            }
        }
        Err(Error::Solver {
            x,
            reason: format!("exceeded {} steps", self.max_steps),
        })
    }

    fn initial_step<const N: usize, F>(
        &self,
        f: &mut F,
        x0: f64,
        y0: &[f64; N],
        f0: &[f64; N],
        x_end: f64,
    ) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let norm = |v: &[f64; N]| {
            let mut s = 0.0;
            for i in 0..N {
                let sc = self.atol + self.rtol * y0[i].abs();
                s += (v[i] / sc).powi(2);
            }
            (s / N as f64).sqrt()
        };
        let d0 = norm(y0);
        let d1 = norm(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let span = x_end - x0;
        let h0 = h0.min(span);
        let y1 = axpy(y0, h0, &[(1.0, f0)]);
        let f1 = f(x0 + h0, &y1);
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = f1[i] - f0[i];
        }
        let d2 = norm(&diff) / h0;
        let h1 = if !d2.is_finite() {
            h0 * 1e-3
        } else if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span).min(self.max_step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let s = Dopri5::new(1e-10, 1e-14)
            .solve(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, &[1.0, 2.5, 5.0], |_, _| false)
            .unwrap();
        assert_eq!(s.termination, Termination::Completed);
        assert_eq!(s.samples.len(), 3);
        for (x, y) in &s.samples {
            assert!(((y[0] - (-x).exp()) / (-x).exp()).abs() < 1e-9, "x={x}");
        }
        assert_eq!(s.samples[1].0, 2.5);
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let s = Dopri5::new(1e-11, 1e-13)
            .solve(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [0.0, 1.0],
                10.0,
                &[],
                |_, _| false,
            )
            .unwrap();
        for i in 0..200 {
            let x = 0.05 * i as f64;
            let y = s.eval(x).unwrap();
            assert!((y[0] - x.sin()).abs() < 1e-6, "x={x}");
        }
        assert!(s.eval(10.5).is_none());
    }

    #[test]
    fn stop_predicate_fires() {
        // y' = y², y(0) = 1 blows up at x = 1
        let s = Dopri5::new(1e-10, 1e-14)
            .solve(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &[], |_, y| y[0] > 1e10)
            .unwrap();
        match s.termination {
            Termination::Stopped { x } => assert!((x - 1.0).abs() < 1e-9),
            t => panic!("unexpected {t:?}"),
        }
    }

    #[test]
    fn rejects_bad_interval() {
        let r = Dopri5::default().solve(|_, y: &[f64; 1]| *y, 1.0, [1.0], 1.0, &[], |_, _| false);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn singularity_without_stop_is_solver_error() {
        let r = Dopri5::new(1e-10, 1e-14).solve(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &[],
            |_, _| false,
        );
        assert!(matches!(r, Err(Error::Solver { .. })));
    }
}
