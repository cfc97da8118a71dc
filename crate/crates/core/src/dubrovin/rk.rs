//! Adaptive Dormand–Prince 5(4) integration of the divisor flows with
//! per-step projection back onto the curve.

use super::flow::{lifted_t_rhs, lifted_x_rhs, FlowKind, FlowSpec};
use super::{DubrovinError, EllipticState, LiftedState};
use crate::curve::PeriodData;
use num_complex::Complex64;

/// Controls of the adaptive integrator.
#[derive(Debug, Clone)]
pub struct FlowOptions {
    pub rtol: f64,
    pub atol: f64,
    /// collision margin relative to the curve scale
    pub collision_margin_rel: f64,
    pub max_steps: usize,
    /// smallest admissible step relative to the span
    pub min_step_rel: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            rtol: 1e-9,
            atol: 1e-9,
            collision_margin_rel: 1e-6,
            max_steps: 200_000,
            min_step_rel: 1e-12,
        }
    }
}

/// One stored sample of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    /// value of the flowing coordinate
    pub coord: f64,
    pub state: EllipticState,
    /// Abel increments of the leading n points per family, accumulated
    /// from the start of the trajectory
    pub rho1: Vec<Complex64>,
    pub rho2: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub kind: FlowKind,
    pub samples: Vec<TrajectorySample>,
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Driver<'a> {
    pd: &'a PeriodData,
    kind: FlowKind,
    spec: Option<&'a FlowSpec>,
    margin: f64,
    points: usize,
    genus: usize,
}

impl Driver<'_> {
    fn rhs(&self, v: &[Complex64]) -> Result<Vec<Complex64>, DubrovinError> {
        let s = LiftedState::unpack(v, self.points, self.genus);
        let d = match self.kind {
            FlowKind::X => lifted_x_rhs(&s, self.pd, self.margin)?,
            FlowKind::T => lifted_t_rhs(&s, self.pd, self.spec.expect("flow spec"), self.margin)?,
        };
        Ok(d.pack())
    }

    /// Snap the lift values back onto the curve after an accepted step.
    fn project(&self, v: &mut [Complex64]) -> Result<(), DubrovinError> {
        let points = self.points;
        let spec = &self.pd.spec;
        let mut worst = 0.0f64;
        for k in 0..points {
            let (lam, g) = (v[k], v[points + k]);
            let y2 = spec.r_eval(lam);
            let root = y2.sqrt();
            let pick = if (root - g).norm() <= (root + g).norm() {
                root
            } else {
                -root
            };
            worst = worst.max((pick - g).norm() / (1.0 + root.norm()));
            v[points + k] = pick;
            let (lam, h) = (v[2 * points + k], v[3 * points + k]);
            let y2 = spec.r_eval(lam);
            let root = y2.sqrt();
            let pick = if (root - h).norm() <= (root + h).norm() {
                root
            } else {
                -root
            };
            worst = worst.max((pick - h).norm() / (1.0 + root.norm()));
            v[3 * points + k] = pick;
        }
        if worst > 1e-3 {
            return Err(DubrovinError::OffCurve(worst));
        }
        Ok(())
    }
}

/// Integrate a divisor flow from `s0` over `span`, emitting states at the
/// requested sample coordinates (which must be increasing and start at
/// `span.0`). A zero-length span returns the initial state unchanged.
pub fn integrate_flow(
    s0: &EllipticState,
    pd: &PeriodData,
    kind: FlowKind,
    spec: Option<&FlowSpec>,
    samples: &[f64],
    opts: &FlowOptions,
) -> Result<Trajectory, DubrovinError> {
    assert!(!samples.is_empty(), "need at least one sample coordinate");
    let genus = pd.genus();
    let points = genus + 1;
    if kind == FlowKind::T {
        assert!(spec.is_some(), "time flows need a FlowSpec");
    }
    let driver = Driver {
        pd,
        kind,
        spec,
        margin: opts.collision_margin_rel * pd.spec.scale(),
        points,
        genus,
    };
    let lifted = LiftedState::from_state(s0, &pd.spec, &pd.cuts, genus)?;
    let mut v = lifted.pack();
    let mut coord = samples[0];
    let span_len = (samples[samples.len() - 1] - samples[0]).abs().max(1e-30);
    let mut h = 1e-3 * span_len.max(1e-6);
    let mut out = Vec::with_capacity(samples.len());
    let push_sample =
        |out: &mut Vec<TrajectorySample>, v: &[Complex64], coord: f64| -> Result<(), DubrovinError> {
            let s = LiftedState::unpack(v, points, genus);
            let (x, t) = match kind {
                FlowKind::X => (coord, s0.t),
                FlowKind::T => (s0.x, coord),
            };
            let state = s.to_state(&pd.cuts, x, t)?;
            out.push(TrajectorySample {
                coord,
                state,
                rho1: s.rho1.clone(),
                rho2: s.rho2.clone(),
            });
            Ok(())
        };
    push_sample(&mut out, &v, coord)?;

    let mut steps = 0usize;
    for target in samples.iter().skip(1) {
        let dir = (target - coord).signum();
        while (target - coord) * dir > 1e-14 * span_len {
            steps += 1;
            if steps > opts.max_steps {
                return Err(DubrovinError::StepFloor(coord));
            }
            let mut hs = h.min((target - coord).abs()) * dir;
            // attempt one adaptive step
            loop {
                match dp_step(&driver, &v, hs, opts.rtol, opts.atol) {
                    Ok((vnew, err)) => {
                        if err <= 1.0 {
                            let mut vnew = vnew;
                            driver.project(&mut vnew)?;
                            v = vnew;
                            coord += hs;
                            let grow = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
                            h = (hs.abs() * grow).min(span_len);
                            break;
                        }
                        let shrink = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                        hs *= shrink;
                    }
                    Err(DubrovinError::Collision { .. }) if hs.abs() > opts.min_step_rel * span_len => {
                        // approaching a collision: retreat and try smaller
                        hs *= 0.5;
                    }
                    Err(e) => return Err(e),
                }
                if hs.abs() < opts.min_step_rel * span_len {
                    return Err(DubrovinError::StepFloor(coord));
                }
            }
        }
        coord = *target;
        push_sample(&mut out, &v, coord)?;
    }
    Ok(Trajectory { kind, samples: out })
}

/// One Dormand–Prince step; returns the 5th-order update and the scaled
/// error estimate.
fn dp_step(
    driver: &Driver<'_>,
    v: &[Complex64],
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<(Vec<Complex64>, f64), DubrovinError> {
    let n = v.len();
    let mut k: Vec<Vec<Complex64>> = Vec::with_capacity(7);
    k.push(driver.rhs(v)?);
    for stage in 0..6 {
        let mut vs = v.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let a = A[stage][j];
            if a == 0.0 {
                continue;
            }
            for (vi, ki) in vs.iter_mut().zip(kj) {
                *vi += ki * (a * h);
            }
        }
        k.push(driver.rhs(&vs)?);
    }
    let mut v5 = v.to_vec();
    let mut v4 = v.to_vec();
    for (j, kj) in k.iter().enumerate() {
        for i in 0..n {
            v5[i] += kj[i] * (B5[j] * h);
            v4[i] += kj[i] * (B4[j] * h);
        }
    }
    // weighted rms error
    let mut acc = 0.0f64;
    for i in 0..n {
        let scale = atol + rtol * v[i].norm().max(v5[i].norm());
        let e = (v5[i] - v4[i]).norm() / scale;
        acc += e * e;
    }
    let err = (acc / n as f64).sqrt();
    Ok((v5, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{period_matrices, CurveSpec, SurfacePoint, Tolerances};
    use crate::oracles::euler_integrate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus1_pd() -> PeriodData {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        period_matrices(&spec, &Tolerances::default()).unwrap()
    }

    fn demo_state() -> EllipticState {
        EllipticState::new(
            vec![
                SurfacePoint::new(c(0.3, 0.45), 1),
                SurfacePoint::new(c(0.3, -0.45), -1),
            ],
            vec![
                SurfacePoint::new(c(-0.2, 0.5), -1),
                SurfacePoint::new(c(2.6, 0.3), 1),
            ],
        )
    }

    #[test]
    fn zero_span_returns_initial_state() {
        let pd = genus1_pd();
        let s = demo_state();
        let traj = integrate_flow(
            &s,
            &pd,
            FlowKind::X,
            None,
            &[0.0],
            &FlowOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.samples.len(), 1);
        let out = &traj.samples[0].state;
        for k in 0..2 {
            assert!((out.mu[k].lambda - s.mu[k].lambda).norm() < 1e-14);
            assert_eq!(out.mu[k].sheet, s.mu[k].sheet);
        }
    }

    #[test]
    fn short_time_against_euler_oracle() {
        let pd = genus1_pd();
        let s = demo_state();
        let span = 0.02;
        let traj = integrate_flow(
            &s,
            &pd,
            FlowKind::X,
            None,
            &[0.0, span],
            &FlowOptions::default(),
        )
        .unwrap();
        let fine = &traj.samples[1].state;

        // oracle: tiny-step explicit Euler on (μ, ν) with the same speeds,
        // lifts recomputed from the sheet-tracked square root each step
        let spec = pd.spec.clone();
        let cuts = pd.cuts.clone();
        let y0: Vec<Complex64> = s
            .mu
            .iter()
            .map(|p| p.lambda)
            .chain(s.nu.iter().map(|p| p.lambda))
            .chain(
                s.mu
                    .iter()
                    .map(|p| -crate::curve::sqrt_r(&spec, &cuts, *p)),
            )
            .chain(s.nu.iter().map(|p| crate::curve::sqrt_r(&spec, &cuts, *p)))
            .collect();
        let rp = |lam: Complex64| spec.r_prime(lam);
        let result = euler_integrate(y0, 0.0, span, 200_000, |_, y| {
            let mu = &y[0..2];
            let nu = &y[2..4];
            let g = &y[4..6];
            let h = &y[6..8];
            let mut d = vec![Complex64::new(0.0, 0.0); 8];
            for k in 0..2 {
                let sep = mu[k] - mu[1 - k];
                let dmu = mu[k] * 2.0 * g[k] / sep;
                d[k] = dmu;
                d[4 + k] = rp(mu[k]) * dmu / (g[k] * 2.0);
                let sepn = nu[k] - nu[1 - k];
                let dnu = -nu[k] * 2.0 * h[k] / sepn;
                d[2 + k] = dnu;
                d[6 + k] = rp(nu[k]) * dnu / (h[k] * 2.0);
            }
            d
        });
        for k in 0..2 {
            assert!(
                (fine.mu[k].lambda - result[k]).norm() < 1e-6,
                "mu[{k}]: {} vs {}",
                fine.mu[k].lambda,
                result[k]
            );
            assert!(
                (fine.nu[k].lambda - result[2 + k]).norm() < 1e-6,
                "nu[{k}]"
            );
        }
    }

    #[test]
    fn trajectory_points_stay_on_curve() {
        let pd = genus1_pd();
        let s = demo_state();
        let samples: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
        let traj = integrate_flow(
            &s,
            &pd,
            FlowKind::X,
            None,
            &samples,
            &FlowOptions::default(),
        )
        .unwrap();
        for sm in &traj.samples {
            for p in sm.state.mu.iter().chain(sm.state.nu.iter()) {
                // the stored sheet must reproduce a y with y² = R
                let y = crate::curve::sqrt_r(&pd.spec, &pd.cuts, *p);
                let r = pd.spec.r_eval(p.lambda);
                assert!((y * y - r).norm() <= 1e-9 * (1.0 + r.norm()));
            }
        }
    }
}
