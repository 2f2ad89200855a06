//! Particle swarm optimization with a linearly decreasing inertia weight.
//!
//! Each particle is a full layout. Per iteration `t = 1..=t_max`:
//!
//! ```text
//! w_t  = w_max − (w_max − w_min) · t / t_max
//! c1_t = c1_0 · U[0,1],  c2_t = c2_0 · U[0,1]
//! v    = w_t v + c1_t U[0,1] (pbest − x) + c2_t U[0,1] (gbest − x)
//! x    = x + v
//! ```
//!
//! then `x` is clamped to the waveguide, sorted and projected back onto the
//! spacing constraint; velocity components that were clamped or repaired
//! are zeroed. Personal bests update whenever the new fitness is strictly
//! better; the global best is the best personal best after the whole swarm
//! has moved.
//!
//! Random stream order (single ChaCha8 generator per run):
//! initialization draws every position coordinate then every velocity
//! coordinate, particle by particle; each iteration draws `c1_t`, then
//! `c2_t`, then for each particle and each dimension the cognitive and the
//! social factor, in that order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::repair::repair_spacing;
use super::{FitnessValue, PositionProblem};
use crate::error::{Error, Result};
use crate::system::PaLayout;

/// Source of uniform draws in `[0, 1]`.
pub trait UnitDraw {
    fn draw(&mut self) -> f64;
}

impl<R: Rng + ?Sized> UnitDraw for R {
    fn draw(&mut self) -> f64 {
        self.random::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    /// `P`.
    pub swarm_size: usize,
    /// `t_max`.
    pub max_iters: usize,
    pub w_max: f64,
    pub w_min: f64,
    pub c1_0: f64,
    pub c2_0: f64,
    /// Velocity clamp in meters; `None` means `0.2 · D_w`.
    pub v_max: Option<f64>,
    pub rng_seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 10,
            max_iters: 300,
            w_max: 0.9,
            w_min: 0.4,
            c1_0: 2.0,
            c2_0: 2.0,
            v_max: None,
            rng_seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn velocity_limit(&self, waveguide_length: f64) -> f64 {
        self.v_max.unwrap_or(0.2 * waveguide_length)
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 1 {
            return Err(Error::InvalidConfig("swarm_size must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.w_max >= self.w_min && self.w_min >= 0.0) {
            return Err(Error::InvalidConfig("need w_max >= w_min >= 0".into()));
        }
        if !(self.c1_0 >= 0.0 && self.c2_0 >= 0.0) {
            return Err(Error::InvalidConfig(
                "acceleration weights must be >= 0".into(),
            ));
        }
        if let Some(v) = self.v_max {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig("v_max must be finite and > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: FitnessValue,
}

pub fn inertia_schedule(t: usize, t_max: usize, w_max: f64, w_min: f64) -> f64 {
    w_max - (w_max - w_min) * t as f64 / t_max as f64
}

pub fn weight_draw<R: UnitDraw + ?Sized>(c0: f64, rng: &mut R) -> f64 {
    c0 * rng.draw()
}

/// New velocity of `particle`, clamped to `±v_max`.
pub fn pso_velocity_update<R: UnitDraw + ?Sized>(
    particle: &Particle,
    global_best: &[f64],
    w: f64,
    c1: f64,
    c2: f64,
    v_max: f64,
    rng: &mut R,
) -> Vec<f64> {
    particle
        .position
        .iter()
        .zip(&particle.velocity)
        .zip(particle.best_position.iter().zip(global_best))
        .map(|((&x, &v), (&pb, &gb))| {
            let r1 = rng.draw();
            let r2 = rng.draw();
            (w * v + c1 * r1 * (pb - x) + c2 * r2 * (gb - x)).clamp(-v_max, v_max)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoOutcome {
    /// Global best layout (sorted ascending).
    pub layout: PaLayout,
    /// Σ_j E_j at `layout`, watts.
    pub objective: f64,
    pub fitness: FitnessValue,
    /// False when no particle ever reached a feasible layout.
    pub feasible: bool,
    /// Global-best fitness after initialization and after every iteration.
    pub history: Vec<FitnessValue>,
}

/// A swarm together with its global best.
#[derive(Debug, Clone)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub best_position: Vec<f64>,
    pub best_fitness: FitnessValue,
}

/// Sorts `x` ascending carrying `v` along, clamps to `[0, length]` and
/// repairs spacing. Velocity components that were clamped or moved by the
/// repair are zeroed.
fn project(x: &mut [f64], v: &mut [f64], min_spacing: f64, length: f64) {
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(v.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (k, (px, pv)) in pairs.into_iter().enumerate() {
        x[k] = px;
        v[k] = pv;
    }
    for (xi, vi) in x.iter_mut().zip(v.iter_mut()) {
        if *xi < 0.0 || *xi > length {
            *xi = xi.clamp(0.0, length);
            *vi = 0.0;
        }
    }
    let moved = repair_spacing(x, min_spacing, length);
    for (vi, m) in v.iter_mut().zip(moved) {
        if m {
            *vi = 0.0;
        }
    }
}

impl Swarm {
    /// Builds a swarm from explicit particles; the global best is the best
    /// personal best.
    pub fn from_particles(particles: Vec<Particle>) -> Result<Self> {
        let first = particles
            .first()
            .ok_or_else(|| Error::InvalidConfig("swarm needs at least one particle".into()))?;
        let mut best_position = first.best_position.clone();
        let mut best_fitness = first.best_fitness;
        for p in &particles[1..] {
            if p.best_fitness.better_than(&best_fitness) {
                best_fitness = p.best_fitness;
                best_position = p.best_position.clone();
            }
        }
        Ok(Self {
            particles,
            best_position,
            best_fitness,
        })
    }

    /// Random initialization. With an incumbent, particle 0 starts there at
    /// rest and draws nothing from the stream.
    pub fn initialize<R: UnitDraw + ?Sized>(
        problem: &PositionProblem<'_>,
        cfg: &PsoConfig,
        incumbent: Option<&PaLayout>,
        rng: &mut R,
    ) -> Result<Self> {
        let s = problem.scenario;
        let (m, d_w, delta) = (s.num_antennas, s.waveguide_length, s.min_spacing);
        let v_max = cfg.velocity_limit(d_w);
        let mut particles = Vec::with_capacity(cfg.swarm_size);
        for i in 0..cfg.swarm_size {
            let (mut x, mut v) = match (i, incumbent) {
                (0, Some(inc)) => (inc.to_vec(), vec![0.0; m]),
                _ => {
                    let x: Vec<f64> = (0..m).map(|_| rng.draw() * d_w).collect();
                    let v: Vec<f64> = (0..m).map(|_| (2.0 * rng.draw() - 1.0) * v_max).collect();
                    (x, v)
                }
            };
            project(&mut x, &mut v, delta, d_w);
            let f = problem.fitness(&PaLayout::new(x.clone()))?;
            particles.push(Particle {
                best_position: x.clone(),
                position: x,
                velocity: v,
                best_fitness: f,
            });
        }
        Self::from_particles(particles)
    }

    /// Runs `cfg.max_iters` synchronous iterations.
    pub fn run<R: UnitDraw + ?Sized>(
        mut self,
        problem: &PositionProblem<'_>,
        cfg: &PsoConfig,
        rng: &mut R,
    ) -> Result<PsoOutcome> {
        cfg.validate()?;
        let s = problem.scenario;
        let (d_w, delta) = (s.waveguide_length, s.min_spacing);
        let v_max = cfg.velocity_limit(d_w);
        let mut history = Vec::with_capacity(cfg.max_iters + 1);
        history.push(self.best_fitness);

        for t in 1..=cfg.max_iters {
            let w = inertia_schedule(t, cfg.max_iters, cfg.w_max, cfg.w_min);
            let c1 = weight_draw(cfg.c1_0, rng);
            let c2 = weight_draw(cfg.c2_0, rng);
            for p in self.particles.iter_mut() {
                let mut v = pso_velocity_update(p, &self.best_position, w, c1, c2, v_max, rng);
                let mut x: Vec<f64> = p.position.iter().zip(&v).map(|(x, v)| x + v).collect();
                project(&mut x, &mut v, delta, d_w);
                let f = problem.fitness(&PaLayout::new(x.clone()))?;
                if f.better_than(&p.best_fitness) {
                    p.best_fitness = f;
                    p.best_position = x.clone();
                }
                p.position = x;
                p.velocity = v;
            }
            for p in &self.particles {
                if p.best_fitness.better_than(&self.best_fitness) {
                    self.best_fitness = p.best_fitness;
                    self.best_position = p.best_position.clone();
                }
            }
            history.push(self.best_fitness);
        }

        Ok(PsoOutcome {
            layout: PaLayout::new(self.best_position),
            objective: self.best_fitness.objective,
            feasible: self.best_fitness.feasible,
            fitness: self.best_fitness,
            history,
        })
    }
}

/// LDW-PSO over layouts at fixed powers. When `incumbent` is given it seeds
/// particle 0, so the result is never worse than the incumbent.
pub fn pso_optimize(
    problem: &PositionProblem<'_>,
    cfg: &PsoConfig,
    incumbent: Option<&PaLayout>,
) -> Result<PsoOutcome> {
    cfg.validate()?;
    if let Some(inc) = incumbent {
        inc.check(problem.scenario)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    Swarm::initialize(problem, cfg, incumbent, &mut rng)?.run(problem, cfg, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed(f64);

    impl UnitDraw for Fixed {
        fn draw(&mut self) -> f64 {
            self.0
        }
    }

    fn particle(x: Vec<f64>, v: Vec<f64>, pbest: Vec<f64>) -> Particle {
        Particle {
            position: x,
            velocity: v,
            best_position: pbest,
            best_fitness: FitnessValue::WORST,
        }
    }

    #[test]
    fn inertia_endpoints_and_midpoint() {
        assert_eq!(inertia_schedule(0, 300, 0.9, 0.4), 0.9);
        assert_eq!(inertia_schedule(300, 300, 0.9, 0.4), 0.4);
        assert!((inertia_schedule(150, 300, 0.9, 0.4) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn weight_draw_extremes() {
        assert_eq!(weight_draw(2.0, &mut Fixed(0.0)), 0.0);
        assert_eq!(weight_draw(2.0, &mut Fixed(1.0)), 2.0);
    }

    #[test]
    fn velocity_fixed_point() {
        let p = particle(vec![1.0, 2.0], vec![0.0, 0.0], vec![1.0, 2.0]);
        let v = pso_velocity_update(&p, &[1.0, 2.0], 0.9, 2.0, 2.0, 2.0, &mut Fixed(0.7));
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn velocity_cognitive_term_only() {
        let p = particle(vec![1.0, 2.0], vec![0.3, -0.3], vec![1.5, 1.0]);
        let v = pso_velocity_update(&p, &[9.0, 9.0], 0.0, 1.5, 0.0, 10.0, &mut Fixed(1.0));
        assert_eq!(v, vec![1.5 * 0.5, 1.5 * -1.0]);
    }

    #[test]
    fn velocity_is_clamped() {
        let p = particle(vec![0.0], vec![0.0], vec![10.0]);
        let v = pso_velocity_update(&p, &[10.0], 0.0, 2.0, 2.0, 2.0, &mut Fixed(1.0));
        assert_eq!(v, vec![2.0]);
    }

    #[test]
    fn projection_zeroes_velocity_on_boundary_hit() {
        let mut x = vec![10.5, 3.0];
        let mut v = vec![1.0, 0.5];
        project(&mut x, &mut v, 0.1, 10.0);
        assert_eq!(x, vec![3.0, 10.0]);
        assert_eq!(v, vec![0.5, 0.0]);
    }
}
