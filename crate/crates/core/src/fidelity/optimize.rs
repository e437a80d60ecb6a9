//! Optimizers over unit vectors `c ∈ C^k` for quartic objectives
//! `f(c) = s·c†Gc + Σ_a |c†M_a c|²` (`s ∈ {0, −1}`).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::random::{random_unit_vector, rng};
use crate::linalg::{basis_vector, inner, norm, ComplexMatrix};
use crate::{Result, C64};

use super::FidelityConfig;

/// How an extremum was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMethod {
    /// One-dimensional code: the objective is a constant.
    ClosedForm,
    /// Two-dimensional code: Bloch-sphere grid, then coordinate descent.
    GridRefine,
    /// Larger codes: seeded random restarts of projected gradient descent.
    RandomRestart,
}

/// Summary of an optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    /// Objective evaluations, including grid points.
    pub evaluations: usize,
    /// Descent iterations summed over all starts.
    pub iterations: usize,
    /// Number of starting points refined.
    pub starts: usize,
    /// Index of the start that produced the reported extremum.
    pub best_start: usize,
    /// Best value seen on the grid or among the starts, before refinement.
    pub initial_value: f64,
    /// Step size (grid refine) or projected-gradient norm (restarts) at termination.
    pub final_step: f64,
}

/// `s·c†Gc + Σ_a |c†M_a c|²`, with every matrix expressed in code coordinates.
pub(crate) struct Quartic {
    pub gram: Option<ComplexMatrix>,
    pub gram_sign: f64,
    pub terms: Vec<ComplexMatrix>,
    pub scale: f64,
}

impl Quartic {
    pub fn dim(&self) -> usize {
        self.terms.first().map_or_else(|| self.gram.as_ref().map_or(0, ComplexMatrix::rows), ComplexMatrix::rows)
    }

    fn quadratic(m: &ComplexMatrix, c: &[C64]) -> C64 {
        inner(c, &m.mul_vec(c).expect("code-sized"))
    }

    pub fn value(&self, c: &[C64]) -> f64 {
        let quartic: f64 = self.terms.iter().map(|m| Self::quadratic(m, c).norm_sqr()).sum();
        let quad = self.gram.as_ref().map_or(0.0, |g| Self::quadratic(g, c).re);
        self.scale * (quartic + self.gram_sign * quad)
    }

    /// `2 ∂f/∂c̄`, the steepest-ascent direction for the real objective.
    pub fn gradient(&self, c: &[C64]) -> Vec<C64> {
        let k = c.len();
        let mut g = vec![C64::new(0.0, 0.0); k];
        for m in &self.terms {
            let mc = m.mul_vec(c).expect("code-sized");
            let t = inner(c, &mc);
            let mdc = m.adjoint().mul_vec(c).expect("code-sized");
            for i in 0..k {
                g[i] += t.conj() * mc[i] + t * mdc[i];
            }
        }
        if let Some(gm) = &self.gram {
            let gc = gm.mul_vec(c).expect("code-sized");
            for i in 0..k {
                g[i] += gc[i] * self.gram_sign;
            }
        }
        g.iter().map(|x| x * (2.0 * self.scale)).collect()
    }
}

pub(crate) struct Extremum {
    pub coefficients: Vec<C64>,
    pub method: FidelityMethod,
    pub trace: OptimizerTrace,
}

pub(crate) fn minimize(f: &Quartic, cfg: &FidelityConfig) -> Result<Extremum> {
    match f.dim() {
        1 => {
            let c = vec![C64::new(1.0, 0.0)];
            let value = f.value(&c);
            Ok(Extremum {
                coefficients: c,
                method: FidelityMethod::ClosedForm,
                trace: OptimizerTrace {
                    evaluations: 1,
                    iterations: 0,
                    starts: 1,
                    best_start: 0,
                    initial_value: value,
                    final_step: 0.0,
                },
            })
        }
        2 => Ok(grid_refine(&|c: &[C64]| f.value(c), cfg)),
        k => Ok(random_restarts(f, k, cfg)),
    }
}

fn bloch(theta: f64, phi: f64) -> Vec<C64> {
    vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Number of best grid points handed to the local refinement.
const REFINED_GRID_POINTS: usize = 4;

/// Minimize any objective over the Bloch sphere of a two-dimensional code.
pub(crate) fn grid_refine(f: &dyn Fn(&[C64]) -> f64, cfg: &FidelityConfig) -> Extremum {
    let nt = cfg.grid_theta.max(2);
    let np = cfg.grid_phi.max(1);
    let dt = std::f64::consts::PI / (nt - 1) as f64;
    let dp = 2.0 * std::f64::consts::PI / np as f64;
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = i as f64 * dt;
        for j in 0..np {
            let phi = j as f64 * dp;
            grid.push((f(&bloch(theta, phi)), theta, phi));
        }
    }
    let mut evaluations = grid.len();
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let initial_value = grid[0].0;

    let mut best: Option<(f64, f64, f64, usize)> = None;
    let mut iterations = 0;
    let mut final_step = 0.0;
    for (start, &(v0, t0, p0)) in grid.iter().take(REFINED_GRID_POINTS).enumerate() {
        let (mut v, mut t, mut p) = (v0, t0, p0);
        let mut step_t = dt;
        let mut step_p = dp;
        while step_t.max(step_p) > cfg.refine_tol {
            iterations += 1;
            let mut moved = false;
            for (dtheta, dphi) in [(step_t, 0.0), (-step_t, 0.0), (0.0, step_p), (0.0, -step_p)] {
                let cand = f(&bloch(t + dtheta, p + dphi));
                evaluations += 1;
                if cand < v {
                    v = cand;
                    t += dtheta;
                    p += dphi;
                    moved = true;
                    break;
                }
            }
            if !moved {
                step_t /= 2.0;
                step_p /= 2.0;
            }
        }
        final_step = step_t.max(step_p);
        if best.map_or(true, |b| v < b.0) {
            best = Some((v, t, p, start));
        }
    }
    let (_, t, p, best_start) = best.expect("grid is non-empty");
    Extremum {
        coefficients: bloch(t, p),
        method: FidelityMethod::GridRefine,
        trace: OptimizerTrace {
            evaluations,
            iterations,
            starts: REFINED_GRID_POINTS.min(grid.len()),
            best_start,
            initial_value,
            final_step,
        },
    }
}

const MAX_DESCENT_ITERATIONS: usize = 5000;

fn tangent_gradient(f: &Quartic, c: &[C64]) -> Vec<C64> {
    let g = f.gradient(c);
    let along = inner(c, &g).re;
    g.iter().zip(c).map(|(gi, ci)| gi - ci * along).collect()
}

fn normalized(v: Vec<C64>) -> Vec<C64> {
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Projected gradient descent on the unit sphere with Armijo backtracking.
fn descend(f: &Quartic, start: Vec<C64>, tol: f64) -> (Vec<C64>, f64, usize, usize, f64) {
    let mut c = normalized(start);
    let mut v = f.value(&c);
    let mut evals = 1;
    let mut step = 1.0f64;
    let mut iters = 0;
    let mut gnorm = f64::INFINITY;
    while iters < MAX_DESCENT_ITERATIONS {
        iters += 1;
        let g = tangent_gradient(f, &c);
        gnorm = norm(&g);
        if gnorm < tol {
            break;
        }
        step = (step * 2.0).min(1.0);
        let mut accepted = false;
        while step > 1e-16 {
            let cand = normalized(c.iter().zip(&g).map(|(x, d)| x - d * step).collect());
            let cv = f.value(&cand);
            evals += 1;
            if cv <= v - 1e-4 * step * gnorm * gnorm {
                c = cand;
                v = cv;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    (c, v, iters, evals, gnorm)
}

fn random_restarts(f: &Quartic, k: usize, cfg: &FidelityConfig) -> Extremum {
    let mut generator = rng(cfg.seed);
    // Logical basis states first (deterministic), then seeded random starts.
    let mut starts: Vec<Vec<C64>> = (0..k).map(|i| basis_vector(k, i)).collect();
    for _ in 0..cfg.restarts {
        starts.push(random_start(&mut generator, k));
    }
    let mut best: Option<(Vec<C64>, f64, usize, f64)> = None;
    let mut iterations = 0;
    let mut evaluations = 0;
    let mut initial_value = f64::INFINITY;
    for (idx, s) in starts.into_iter().enumerate() {
        initial_value = initial_value.min(f.value(&s));
        let (c, v, it, ev, gnorm) = descend(f, s, cfg.refine_tol);
        iterations += it;
        evaluations += ev + 1;
        if best.as_ref().map_or(true, |b| v < b.1) {
            best = Some((c, v, idx, gnorm));
        }
    }
    let (coefficients, _, best_start, final_step) = best.expect("at least one start");
    Extremum {
        coefficients,
        method: FidelityMethod::RandomRestart,
        trace: OptimizerTrace {
            evaluations,
            iterations,
            starts: k + cfg.restarts,
            best_start,
            initial_value,
            final_step,
        },
    }
}

fn random_start<R: Rng + ?Sized>(r: &mut R, k: usize) -> Vec<C64> {
    random_unit_vector(r, k)
}
