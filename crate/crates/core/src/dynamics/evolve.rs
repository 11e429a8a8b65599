use super::{liouvillian, LindbladModel, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{cr, hermitian_part, unvectorize, vectorize, CMatrix, CVector, DensityMatrix, QOperator};

/// Settings for the adaptive integrator.
#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Positivity/trace tolerance for each output state.
    pub state_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 5_000_000,
            state_tol: 1e-8,
        }
    }
}

fn check_grid(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<()> {
    if rho0.dims() != model.dims() {
        return Err(Error::arg(format!(
            "initial state dims {:?} do not match model dims {:?}",
            rho0.dims(),
            model.dims()
        )));
    }
    if times.is_empty() {
        return Err(Error::arg("time grid is empty"));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("time grid must be finite and strictly increasing"));
    }
    if times[0] < 0.0 {
        return Err(Error::arg("time grid must start at t >= 0"));
    }
    Ok(())
}

fn to_state(v: &CVector, model: &LindbladModel, tol: f64, t: f64) -> Result<DensityMatrix> {
    let n = model.dim();
    let m = hermitian_part(&unvectorize(v, n));
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol {
        return Err(Error::Solver(format!("trace drifted to {tr} at t = {t}")));
    }
    let op = QOperator::new(m / tr, model.dims().to_vec())?;
    DensityMatrix::with_tolerance(op, tol)
        .map_err(|e| Error::Solver(format!("state at t = {t} is unphysical: {e}")))
}

// Dormand–Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Dopri<'a> {
    rhs: &'a dyn Fn(f64, &CVector) -> CVector,
    opts: EvolveOptions,
    h: f64,
    steps: usize,
}

fn initial_step(l: &CMatrix) -> f64 {
    0.1 / l.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12)
}

impl<'a> Dopri<'a> {
    fn new(rhs: &'a dyn Fn(f64, &CVector) -> CVector, opts: EvolveOptions, h: f64) -> Self {
        Self { rhs, opts, h, steps: 0 }
    }

    fn f(&self, t: f64, y: &CVector) -> CVector {
        (self.rhs)(t, y)
    }

    fn lin(y: &CVector, h: f64, terms: &[(f64, &CVector)]) -> CVector {
        let mut out = y.clone();
        for &(a, k) in terms {
            out.axpy(cr(h * a), k, cr(1.0));
        }
        out
    }

    /// Advances `y` from `t0` to `t1` exactly hitting `t1`.
    fn advance(&mut self, y: &mut CVector, t0: f64, t1: f64) -> Result<()> {
        let mut t = t0;
        let mut k1 = self.f(t, y);
        while t < t1 {
            if self.steps >= self.opts.max_steps {
                return Err(Error::Solver(format!(
                    "adaptive integrator exceeded {} steps at t = {t} (step {:.3e})",
                    self.opts.max_steps, self.h
                )));
            }
            let h = self.h.min(t1 - t);
            let k2 = self.f(t + C2 * h, &Self::lin(y, h, &[(A21, &k1)]));
            let k3 = self.f(t + C3 * h, &Self::lin(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = self.f(t + C4 * h, &Self::lin(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = self.f(t + C5 * h, &Self::lin(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = self.f(t + h, &Self::lin(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y_new = Self::lin(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = self.f(t + h, &y_new);
            let err_vec = Self::lin(
                &CVector::zeros(y.len()),
                h,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let mut err: f64 = 0.0;
            for i in 0..y.len() {
                let scale = self.opts.atol + self.opts.rtol * y[i].norm().max(y_new[i].norm());
                err = err.max(err_vec[i].norm() / scale);
            }
            self.steps += 1;
            if !err.is_finite() {
                return Err(Error::Solver(format!("non-finite error estimate at t = {t}")));
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                let clipped = h < self.h;
                t = if t1 - t <= h { t1 } else { t + h };
                *y = y_new;
                k1 = k7;
                // A step shortened to land on t1 says nothing about growth.
                if !clipped {
                    self.h = h * factor;
                } else if factor < 1.0 {
                    self.h = self.h.min(h * factor);
                }
            } else {
                self.h = h * factor.min(1.0);
                if self.h < 1e-14 * t1.abs().max(1.0) {
                    return Err(Error::Solver(format!(
                        "step size underflow at t = {t} (error ratio {err:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Integrates from `rho0` at `times[0]` and records a state at every time.
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    evolve_with(model, rho0, times, EvolveOptions::default())
}

pub fn evolve_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    times: &[f64],
    opts: EvolveOptions,
) -> Result<Trajectory> {
    check_grid(model, rho0, times)?;
    let l = liouvillian(model);
    let rhs = |_t: f64, y: &CVector| &l * y;
    let mut dp = Dopri::new(&rhs, opts, initial_step(&l));
    let mut y = vectorize(rho0.data());
    let mut states = Vec::with_capacity(times.len());
    states.push(to_state(&y, model, opts.state_tol, times[0])?);
    for w in times.windows(2) {
        dp.advance(&mut y, w[0], w[1])?;
        states.push(to_state(&y, model, opts.state_tol, w[1])?);
    }
    Trajectory::new(times.to_vec(), states)
}

/// Evolves with exact propagators `exp(𝓛 Δt)` between grid points.
pub fn evolve_exact(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    check_grid(model, rho0, times)?;
    let l = liouvillian(model);
    let mut y = vectorize(rho0.data());
    let tol = EvolveOptions::default().state_tol;
    let mut states = Vec::with_capacity(times.len());
    states.push(to_state(&y, model, tol, times[0])?);
    for w in times.windows(2) {
        let prop = (&l * cr(w[1] - w[0])).exp();
        y = prop * y;
        states.push(to_state(&y, model, tol, w[1])?);
    }
    Trajectory::new(times.to_vec(), states)
}

/// State after time `t` under the adaptive integrator.
pub fn propagate(model: &LindbladModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let traj = evolve(model, rho0, &[0.0, t])?;
    Ok(traj.states().last().cloned().expect("two states"))
}

/// State after time `t` via the matrix exponential.
pub fn propagate_exact(model: &LindbladModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let traj = evolve_exact(model, rho0, &[0.0, t])?;
    Ok(traj.states().last().cloned().expect("two states"))
}

/// Integrates a time-dependent linear system `dy/dt = rhs(t, y)` from `t0`
/// to `t1`. `scale` bounds the generator norm and sets the first step.
pub(crate) fn integrate(
    rhs: &dyn Fn(f64, &CVector) -> CVector,
    y0: &CVector,
    t0: f64,
    t1: f64,
    scale: f64,
    opts: EvolveOptions,
) -> Result<CVector> {
    let mut y = y0.clone();
    let mut dp = Dopri::new(rhs, opts, 0.1 / scale.max(1e-12));
    dp.advance(&mut y, t0, t1)?;
    Ok(y)
}
