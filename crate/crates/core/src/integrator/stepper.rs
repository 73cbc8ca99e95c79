use super::RngStream;
use crate::error::{Error, Result};

/// Autonomous or time-dependent right-hand side `dy/dt = f(t, y)` on a
/// flat real state vector.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Adapts a closure into a [`VectorField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

fn ensure_finite(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Diverged { step: 0 })
    }
}

/// Classical fourth-order Runge–Kutta with reusable scratch space.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `y` in place. The slope at the start point stays available
    /// through [`Rk4::slope`].
    pub fn step<F: VectorField + ?Sized>(&mut self, field: &F, t: f64, y: &mut [f64], dt: f64) -> Result<()> {
        let half = 0.5 * dt;
        field.eval(t, y, &mut self.k1);
        for ((tmp, yi), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *tmp = yi + half * k;
        }
        field.eval(t + half, &self.tmp, &mut self.k2);
        for ((tmp, yi), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *tmp = yi + half * k;
        }
        field.eval(t + half, &self.tmp, &mut self.k3);
        for ((tmp, yi), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *tmp = yi + dt * k;
        }
        field.eval(t + dt, &self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
        ensure_finite(y)
    }

    /// `f(t, y)` evaluated at the start of the last step.
    pub fn slope(&self) -> &[f64] {
        &self.k1
    }
}

/// Euler–Maruyama with additive noise on the leading `noisy_dims`
/// components.
#[derive(Debug, Clone)]
pub struct EulerMaruyama {
    drift: Vec<f64>,
}

impl EulerMaruyama {
    pub fn new(dim: usize) -> Self {
        EulerMaruyama { drift: vec![0.0; dim] }
    }

    /// One step. Each noisy component receives an increment with standard
    /// deviation `sigma·√dt`; with `sigma == 0` no random numbers are drawn
    /// and the step is plain explicit Euler.
    #[allow(clippy::too_many_arguments)]
    pub fn step<F: VectorField + ?Sized>(
        &mut self,
        field: &F,
        t: f64,
        y: &mut [f64],
        dt: f64,
        sigma: f64,
        noisy_dims: usize,
        rng: &mut RngStream,
    ) -> Result<()> {
        field.eval(t, y, &mut self.drift);
        for (yi, d) in y.iter_mut().zip(&self.drift) {
            *yi += dt * d;
        }
        if sigma > 0.0 {
            let scale = sigma * dt.sqrt();
            for yi in y.iter_mut().take(noisy_dims) {
                *yi += scale * rng.gaussian();
            }
        }
        ensure_finite(y)
    }

    pub fn slope(&self) -> &[f64] {
        &self.drift
    }
}

/// One RK4 step from `state`, returning the new state.
pub fn step_deterministic<F: VectorField + ?Sized>(field: &F, t: f64, state: &[f64], dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt must be positive"));
    }
    let mut y = state.to_vec();
    Rk4::new(state.len()).step(field, t, &mut y, dt)?;
    Ok(y)
}

/// One Euler–Maruyama step from `state` with noise on every component.
pub fn step_stochastic<F: VectorField + ?Sized>(
    field: &F,
    t: f64,
    state: &[f64],
    dt: f64,
    sigma: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt must be positive"));
    }
    if !(sigma >= 0.0) {
        return Err(Error::invalid("sigma must be non-negative"));
    }
    let mut y = state.to_vec();
    EulerMaruyama::new(state.len()).step(field, t, &mut y, dt, sigma, state.len(), rng)?;
    Ok(y)
}
