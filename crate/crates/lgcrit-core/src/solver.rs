//! Numerical solving of the critical systems: damped log-Newton refinement,
//! complete root finding from asymptotic seeds (with a deterministic
//! multistart fallback) and parameter sweeps with adaptive continuation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, LGFamily};
use crate::toric::{RDivisor, ToricModel};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("Newton iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("singular Jacobian at the current iterate")]
    SingularJacobian,
    #[error("two trajectories collided near t = {0} (path jump)")]
    PathJump(f64),
    #[error("continuation step underflow near t = {0}")]
    StepUnderflow(f64),
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
}

/// A Laurent-polynomial critical system `g_i(z) = sum_F c_F (v_F)_i z^{v_F}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentSystem {
    pub dim: usize,
    /// Monomial exponent vectors (the rays).
    pub exponents: Vec<Vec<i64>>,
    pub coefficients: Vec<Complex64>,
}

impl LaurentSystem {
    /// Critical system of the LG potential with the given ray coefficients.
    pub fn from_coefficients(model: &ToricModel, coefficients: Vec<Complex64>) -> LaurentSystem {
        assert_eq!(coefficients.len(), model.ray_count);
        LaurentSystem {
            dim: model.dim(),
            exponents: model.principal_matrix.clone(),
            coefficients,
        }
    }

    pub fn from_family(model: &ToricModel, family: &LGFamily, t: f64) -> LaurentSystem {
        LaurentSystem::from_coefficients(model, family.coefficients(t))
    }

    /// Values `z^{v_F}` of every monomial.
    pub fn monomials(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|v| {
                v.iter()
                    .zip(z)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zi)| {
                        acc * zi.powi(e as i32)
                    })
            })
            .collect()
    }

    /// Residual vector `g_i(z)`.
    pub fn residual(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mono = self.monomials(z);
        (0..self.dim)
            .map(|i| {
                self.exponents
                    .iter()
                    .zip(&self.coefficients)
                    .zip(&mono)
                    .map(|((v, &c), &m)| c * v[i] as f64 * m)
                    .sum()
            })
            .collect()
    }

    /// Largest monomial magnitude `max_F |c_F z^{v_F}|`, used as the natural
    /// residual scale of the system at `z`.
    pub fn scale(&self, z: &[Complex64]) -> f64 {
        self.monomials(z)
            .iter()
            .zip(&self.coefficients)
            .map(|(&m, &c)| (c * m).norm())
            .fold(f64::MIN_POSITIVE, f64::max)
    }

    fn residual_and_log_jacobian(&self, z: &[Complex64]) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        let mono = self.monomials(z);
        let terms: Vec<Complex64> = mono
            .iter()
            .zip(&self.coefficients)
            .map(|(&m, &c)| c * m)
            .collect();
        let mut g = vec![Complex64::default(); self.dim];
        let mut j = vec![vec![Complex64::default(); self.dim]; self.dim];
        for (v, &term) in self.exponents.iter().zip(&terms) {
            for i in 0..self.dim {
                let vi = v[i] as f64;
                if vi == 0.0 {
                    continue;
                }
                g[i] += vi * term;
                for k in 0..self.dim {
                    j[i][k] += vi * v[k] as f64 * term;
                }
            }
        }
        (g, j)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold, relative to the largest monomial magnitude.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Relative distance under which two points are considered equal.
    pub dedup_tol: f64,
    /// Multistart budget as a multiple of the expected solution count.
    pub multistart_factor: usize,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            newton_tol: 1e-12,
            max_iter: 50,
            dedup_tol: 1e-8,
            multistart_factor: 200,
            rng_seed: 0x4C47,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionPoint {
    pub label: String,
    pub coords: Vec<Complex64>,
    /// Final residual, relative to the system scale at the point.
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionSet {
    pub t: f64,
    pub points: Vec<SolutionPoint>,
    /// Whether the number of distinct solutions equals the Euler
    /// characteristic (the expected Bernstein count).
    pub complete: bool,
    /// How many multistart attempts were needed beyond the seeds.
    pub multistart_attempts: usize,
}

impl SolutionSet {
    pub fn by_label(&self, label: &str) -> Option<&SolutionPoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

/// Gaussian elimination with partial pivoting over `Complex64`.
fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.len();
    if a.iter().flatten().any(|x| !x.is_finite()) || b.iter().any(|x| !x.is_finite()) {
        return None;
    }
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&x, &y| a[x][col].norm_sqr().total_cmp(&a[y][col].norm_sqr()))?;
        if !(a[pivot][col].norm_sqr() >= 1e-300) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let sub = f * a[col][k];
                a[row][k] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![Complex64::default(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Largest allowed log-coordinate step per Newton update; larger corrections
/// are scaled down to stay inside the basin.
const MAX_LOG_STEP: f64 = 0.5;

/// Damped Newton iteration in logarithmic coordinates: the update solves
/// `J delta = -g` with `J_ik = d g_i / d log z_k` and applies
/// `z <- z * exp(delta)`, keeping the iterate on the torus.
pub fn newton_refine(
    system: &LaurentSystem,
    start: &[Complex64],
    config: &SolverConfig,
) -> Result<Vec<Complex64>, SolverError> {
    let mut z = start.to_vec();
    for _ in 0..config.max_iter {
        let (g, jac) = system.residual_and_log_jacobian(&z);
        let scale = system.scale(&z);
        let gnorm = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if gnorm <= config.newton_tol * scale {
            return Ok(z);
        }
        let delta = solve_complex(jac, g.iter().map(|&x| -x).collect())
            .ok_or(SolverError::SingularJacobian)?;
        let dmax = delta.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let damp = if dmax > MAX_LOG_STEP {
            MAX_LOG_STEP / dmax
        } else {
            1.0
        };
        for (zi, d) in z.iter_mut().zip(&delta) {
            *zi *= (d * damp).exp();
        }
    }
    // accept late convergence on the final iterate
    let g = system.residual(&z);
    let gnorm = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if gnorm <= config.newton_tol * system.scale(&z) {
        Ok(z)
    } else {
        Err(SolverError::NoConvergence(config.max_iter))
    }
}

pub fn relative_residual(system: &LaurentSystem, z: &[Complex64]) -> f64 {
    let g = system.residual(z);
    g.iter().map(|x| x.norm()).fold(0.0, f64::max) / system.scale(z)
}

/// Relative distance between two torus points.
pub fn point_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).norm() / x.norm().max(y.norm()).max(1e-300))
        .fold(0.0, f64::max)
}

/// `splitmix64` pseudo-random step (public-domain reference constants).
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn uniform01(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Solve the critical system completely: refine every asymptotic seed,
/// deduplicate, and if solutions are still missing run a deterministic
/// multistart over the seed magnitude window.
pub fn solve_all(
    model: &ToricModel,
    family: &LGFamily,
    t: f64,
    config: &SolverConfig,
) -> Result<SolutionSet, SolverError> {
    let system = LaurentSystem::from_family(model, family, t);
    let seeds = catalog::asymptotic_seeds(&family.spec, t)?;
    let mut points: Vec<SolutionPoint> = Vec::new();
    let push_unique = |points: &mut Vec<SolutionPoint>, label: String, z: Vec<Complex64>| {
        if points
            .iter()
            .any(|p| point_distance(&p.coords, &z) < config.dedup_tol)
        {
            return false;
        }
        let rr = relative_residual(&system, &z);
        points.push(SolutionPoint {
            label,
            coords: z,
            relative_residual: rr,
        });
        true
    };
    for seed in &seeds {
        if let Ok(z) = newton_refine(&system, &seed.point, config) {
            push_unique(&mut points, seed.label.clone(), z);
        }
    }
    // Multistart fallback within (a slightly widened version of) the seed
    // log-magnitude window.
    let mut attempts = 0;
    if points.len() < model.euler {
        let n = model.dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for s in &seeds {
            for (i, z) in s.point.iter().enumerate() {
                let l = z.norm().ln();
                lo[i] = lo[i].min(l);
                hi[i] = hi[i].max(l);
            }
        }
        let mut rng = config.rng_seed;
        let budget = config.multistart_factor * model.euler;
        let mut extra = 0usize;
        while points.len() < model.euler && attempts < budget {
            attempts += 1;
            let z: Vec<Complex64> = (0..n)
                .map(|i| {
                    let logmod = lo[i] - 1.0 + (hi[i] - lo[i] + 2.0) * uniform01(&mut rng);
                    let arg = 2.0 * std::f64::consts::PI * uniform01(&mut rng);
                    Complex64::from_polar(logmod.exp(), arg)
                })
                .collect();
            if let Ok(z) = newton_refine(&system, &z, config) {
                if push_unique(&mut points, format!("extra{extra}"), z) {
                    extra += 1;
                }
            }
        }
    }
    points.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(SolutionSet {
        t,
        complete: points.len() == model.euler,
        points,
        multistart_attempts: attempts,
    })
}

/// Coefficient-free argument profile: entry `F` is
/// `frac(sum_i (v_F)_i arg(z_i) / 2pi)`, the argument fraction of the
/// monomial `z^{v_F}` (coefficients excluded).
pub fn argument_profile(model: &ToricModel, point: &[Complex64]) -> RDivisor {
    let args: Vec<f64> = point
        .iter()
        .map(|z| z.arg() / (2.0 * std::f64::consts::PI))
        .collect();
    model
        .principal_matrix
        .iter()
        .map(|v| {
            let a: f64 = v.iter().zip(&args).map(|(&e, &x)| e as f64 * x).sum();
            a.rem_euclid(1.0)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub label: String,
    /// Sample parameter values (the uniform grid, start to end inclusive).
    pub ts: Vec<f64>,
    /// Coordinates at each sample.
    pub samples: Vec<Vec<Complex64>>,
    pub start_profile: RDivisor,
    pub end_profile: RDivisor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sweep {
    pub t_start: f64,
    pub t_end: f64,
    pub trajectories: Vec<Trajectory>,
}

/// Minimum continuation substep, relative to the sweep length.
const MIN_REL_STEP: f64 = 1e-9;

/// Track every labelled solution from `t_start` to `t_end` over a uniform
/// grid of `steps` intervals, with adaptive substepping between grid points.
/// Fails with [`SolverError::PathJump`] if two trajectories collide.
pub fn sweep_parameter(
    model: &ToricModel,
    family: &LGFamily,
    t_start: f64,
    t_end: f64,
    steps: usize,
    config: &SolverConfig,
) -> Result<Sweep, SolverError> {
    let start = solve_all(model, family, t_start, config)?;
    let mut current: Vec<(String, Vec<Complex64>)> = start
        .points
        .iter()
        .map(|p| (p.label.clone(), p.coords.clone()))
        .collect();
    let mut trajectories: Vec<Trajectory> = current
        .iter()
        .map(|(label, z)| Trajectory {
            label: label.clone(),
            ts: vec![t_start],
            samples: vec![z.clone()],
            start_profile: argument_profile(model, z),
            end_profile: argument_profile(model, z),
        })
        .collect();
    let steps = steps.max(1);
    let span = t_end - t_start;
    let min_step = (span.abs() * MIN_REL_STEP).max(f64::MIN_POSITIVE);
    for k in 1..=steps {
        let target = t_start + span * k as f64 / steps as f64;
        for (idx, (_, z)) in current.iter_mut().enumerate() {
            let mut t = t_start + span * (k - 1) as f64 / steps as f64;
            let mut dt = target - t;
            while (target - t).abs() > 0.0 {
                if dt.abs() > (target - t).abs() {
                    dt = target - t;
                }
                let system = LaurentSystem::from_family(model, family, t + dt);
                match newton_refine(&system, z, config) {
                    Ok(next) => {
                        *z = next;
                        t += dt;
                    }
                    Err(_) => {
                        dt *= 0.5;
                        if dt.abs() < min_step {
                            return Err(SolverError::StepUnderflow(t));
                        }
                    }
                }
            }
            trajectories[idx].ts.push(target);
            trajectories[idx].samples.push(z.clone());
        }
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                if point_distance(&current[i].1, &current[j].1) < config.dedup_tol {
                    return Err(SolverError::PathJump(target));
                }
            }
        }
    }
    for (traj, (_, z)) in trajectories.iter_mut().zip(&current) {
        traj.end_profile = argument_profile(model, z);
    }
    Ok(Sweep {
        t_start,
        t_end,
        trajectories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lg_family, make_model, ModelSpec};

    fn arg_frac(z: Complex64) -> f64 {
        (z.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0)
    }

    #[test]
    fn splitmix64_reference_values() {
        // reference sequence for seed 1234567 (public-domain test vector)
        let mut s = 1234567u64;
        assert_eq!(splitmix64(&mut s), 6457827717110365317);
        assert_eq!(splitmix64(&mut s), 3203168211198807973);
        assert_eq!(splitmix64(&mut s), 9817491932198370423);
    }

    #[test]
    fn projective_space_roots_of_unity() {
        let spec = ModelSpec::ProjectiveSpace { s: 2 };
        let model = make_model(&spec).unwrap();
        let fam = lg_family(&spec).unwrap();
        let sol = solve_all(&model, &fam, 0.0, &SolverConfig::default()).unwrap();
        assert!(sol.complete);
        assert_eq!(sol.points.len(), 3);
        for p in &sol.points {
            assert!(p.relative_residual < 1e-12);
            assert!((p.coords[0].norm() - 1.0).abs() < 1e-12);
            assert!((p.coords[0] - p.coords[1]).norm() < 1e-12);
        }
        let mut args: Vec<f64> = sol.points.iter().map(|p| arg_frac(p.coords[0])).collect();
        args.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, e) in args.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn hirzebruch_complete_at_default_t() {
        let spec = ModelSpec::Bundle { s: 1, a: vec![1] };
        let model = make_model(&spec).unwrap();
        let fam = lg_family(&spec).unwrap();
        let sol = solve_all(&model, &fam, -24.0, &SolverConfig::default()).unwrap();
        assert!(sol.complete, "got {} points", sol.points.len());
        assert_eq!(sol.multistart_attempts, 0);
        for p in &sol.points {
            assert!(p.relative_residual < 1e-12, "{}", p.relative_residual);
        }
        let labels: Vec<_> = sol.points.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["E(0,0)", "E(0,1)", "E(1,0)", "E(1,1)"]);
    }

    #[test]
    fn desk_models_complete() {
        for (spec, t) in [
            (ModelSpec::Bundle { s: 3, a: vec![1, 2] }, -24.0),
            (ModelSpec::BlowupProduct { n: 4, r: 2 }, 30.0),
            (ModelSpec::BlowupBundle { n: 5, b: 0 }, 40.0),
        ] {
            let model = make_model(&spec).unwrap();
            let fam = lg_family(&spec).unwrap();
            let sol = solve_all(&model, &fam, t, &SolverConfig::default()).unwrap();
            assert!(
                sol.complete,
                "{spec:?}: {} of {}",
                sol.points.len(),
                model.euler
            );
            for p in &sol.points {
                assert!(p.relative_residual < 1e-10, "{spec:?} {}", p.label);
            }
        }
    }

    #[test]
    fn profile_of_known_point() {
        let spec = ModelSpec::Bundle { s: 1, a: vec![1] };
        let model = make_model(&spec).unwrap();
        // z = i, w = -1: profile over rays (v0, v1, e0, e1):
        // v0 = (-1,1): -1/4 + 1/2 = 1/4; v1 = (1,0): 1/4;
        // e0 = (0,-1): 1/2; e1 = (0,1): 1/2
        let p = vec![Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)];
        let prof = argument_profile(&model, &p);
        for (got, want) in prof.iter().zip([0.25, 0.25, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn newton_rejects_singular_start() {
        // A single monomial in two variables has a rank-one log-Jacobian and
        // a residual that never vanishes on the torus.
        let sys = LaurentSystem {
            dim: 2,
            exponents: vec![vec![1, 1]],
            coefficients: vec![Complex64::new(1.0, 0.0)],
        };
        let r = newton_refine(
            &sys,
            &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            &SolverConfig::default(),
        );
        assert!(matches!(r, Err(SolverError::SingularJacobian)));
    }

    #[test]
    fn sweep_tracks_and_keeps_labels() {
        let spec = ModelSpec::Bundle { s: 1, a: vec![1] };
        let model = make_model(&spec).unwrap();
        let fam = lg_family(&spec).unwrap();
        let sweep = sweep_parameter(&model, &fam, -24.0, -12.0, 12, &SolverConfig::default())
            .unwrap();
        assert_eq!(sweep.trajectories.len(), 4);
        for traj in &sweep.trajectories {
            assert_eq!(traj.ts.len(), 13);
            let sys = LaurentSystem::from_family(&model, &fam, -12.0);
            assert!(relative_residual(&sys, traj.samples.last().unwrap()) < 1e-10);
        }
    }

    #[test]
    fn zero_length_sweep() {
        let spec = ModelSpec::Bundle { s: 1, a: vec![1] };
        let model = make_model(&spec).unwrap();
        let fam = lg_family(&spec).unwrap();
        let sweep =
            sweep_parameter(&model, &fam, -24.0, -24.0, 4, &SolverConfig::default()).unwrap();
        for traj in &sweep.trajectories {
            let first = &traj.samples[0];
            for s in &traj.samples {
                assert!(point_distance(first, s) < 1e-10);
            }
        }
    }
}
