//! Nonlinear conjugate-gradient minimization.
//!
//! The first search direction is the steepest-descent direction; each step
//! length comes from a bracketed line search, and each following direction
//! combines the new negative gradient with the previous direction through a
//! Polak-Ribiere-plus mixing coefficient. The direction restarts to pure
//! steepest descent on a fixed schedule and whenever the mixed direction
//! stops being a descent direction.

use crate::classifier::mlp::{batch_loss, loss_and_gradient, LabeledVector, MlpModel};
use crate::error::{Error, Result};

/// Training hyperparameters. There is deliberately no learning-rate field:
/// step lengths come from the line search.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Hard iteration cap.
    pub max_iters: usize,
    /// Stop when the gradient l2 norm drops below this.
    pub grad_tol: f64,
    /// Forced steepest-descent restart period; 0 means "parameter count".
    pub restart_every: usize,
    /// Line-search bracket width tolerance (absolute, in step units).
    pub line_search_tol: f64,
    /// Line-search evaluation budget per iteration.
    pub line_search_max_evals: usize,
    /// Seed for weight initialization.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_iters: 500,
            grad_tol: 1e-6,
            restart_every: 0,
            line_search_tol: 1e-6,
            line_search_max_evals: 48,
            seed: 0,
        }
    }
}

/// Optimizer state after an iteration: parameter vector, gradient, search
/// direction, last step length and mixing coefficient.
#[derive(Debug, Clone)]
pub struct CgState {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub p: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub iter: usize,
}

/// One trace record per iteration.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub iter: usize,
    pub loss: f64,
    pub grad_norm: f64,
    /// Whether the direction chosen at this iteration was a steepest-descent
    /// restart (always true at iteration 0).
    pub restarted: bool,
    /// max |p_i + g_i| for the direction chosen at this iteration; exactly
    /// zero at iteration 0 and at every restart.
    pub direction_residual: f64,
}

/// A differentiable objective. `value` must agree with the first component
/// of `value_and_grad`; the split exists because line searches only need
/// values.
pub trait Objective {
    fn value(&self, x: &[f64]) -> f64;
    fn value_and_grad(&self, x: &[f64]) -> (f64, Vec<f64>);
}

const INVPHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
const INVPHI2: f64 = 0.381_966_011_250_105_2; // 1 - INVPHI
const ALPHA_MAX_CAP: f64 = 1024.0; // 2^10

struct Sampler<F: FnMut(f64) -> f64> {
    f: F,
    evals: usize,
    best_alpha: f64,
    best_value: f64,
}

impl<F: FnMut(f64) -> f64> Sampler<F> {
    fn eval(&mut self, alpha: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(alpha);
        if !v.is_finite() {
            return Err(Error::DivergentObjective);
        }
        if v < self.best_value {
            self.best_value = v;
            self.best_alpha = alpha;
        }
        Ok(v)
    }
}

/// Minimizes a one-dimensional function over [0, alpha_max] by golden-section
/// bracket shrinking, with a final parabolic refinement through well-spread
/// sample points. Returns the best sampled step; the result always satisfies
/// f(alpha) <= f(0), falling back to 0 when no sampled step improves on it.
pub fn line_search(
    f: impl FnMut(f64) -> f64,
    alpha_max: f64,
    cfg: &TrainConfig,
) -> Result<f64> {
    debug_assert!(alpha_max > 0.0);
    let budget = cfg.line_search_max_evals.max(6);
    let mut s = Sampler {
        f,
        evals: 0,
        best_alpha: 0.0,
        best_value: f64::INFINITY,
    };

    let mut a = 0.0;
    let mut d = alpha_max;
    let mut fa = s.eval(a)?;
    let f0 = fa;
    let mut fd = s.eval(d)?;
    let mut b = a + INVPHI2 * (d - a);
    let mut c = a + INVPHI * (d - a);
    let mut fb = s.eval(b)?;
    let mut fc = s.eval(c)?;

    // Snapshot a moderately-shrunk triple for the parabolic fit: points from
    // the final, nearly-degenerate bracket would lose the fit to rounding.
    let mut fit: Option<[(f64, f64); 3]> = None;
    let snap = |a: f64, fa: f64, b: f64, fb: f64, c: f64, fc: f64, d: f64, fd: f64| {
        if fb <= fc {
            [(a, fa), (b, fb), (c, fc)]
        } else {
            [(b, fb), (c, fc), (d, fd)]
        }
    };

    while d - a > cfg.line_search_tol && s.evals < budget {
        if fb < fc {
            d = c;
            fd = fc;
            c = b;
            fc = fb;
            b = a + INVPHI2 * (d - a);
            fb = s.eval(b)?;
        } else {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            c = a + INVPHI * (d - a);
            fc = s.eval(c)?;
        }
        if fit.is_none() && d - a <= 0.05 * alpha_max {
            fit = Some(snap(a, fa, b, fb, c, fc, d, fd));
        }
    }

    let triple = fit.unwrap_or_else(|| snap(a, fa, b, fb, c, fc, d, fd));
    if s.evals < budget {
        if let Some(vertex) = parabola_vertex(triple) {
            if vertex > 0.0 && vertex < alpha_max {
                s.eval(vertex)?;
            }
        }
    }

    if s.best_value <= f0 {
        Ok(s.best_alpha)
    } else {
        Ok(0.0)
    }
}

/// Vertex of the parabola through three points, or None when degenerate.
fn parabola_vertex([(x1, f1), (x2, f2), (x3, f3)]: [(f64, f64); 3]) -> Option<f64> {
    let num = (x2 - x1).powi(2) * (f2 - f3) - (x2 - x3).powi(2) * (f2 - f1);
    let den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1);
    if den == 0.0 {
        return None;
    }
    let vertex = x2 - 0.5 * num / den;
    vertex.is_finite().then_some(vertex)
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn negated(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

fn max_abs_sum(p: &[f64], g: &[f64]) -> f64 {
    p.iter()
        .zip(g)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max)
}

/// Runs full-batch conjugate-gradient minimization from `x0`. Returns the
/// final state and the per-iteration trace; entry 0 records the start point,
/// where the direction is exactly the negative gradient.
pub fn cg_minimize<O: Objective>(
    obj: &O,
    x0: Vec<f64>,
    cfg: &TrainConfig,
) -> Result<(CgState, Vec<TraceEntry>)> {
    let n = x0.len();
    let restart_every = if cfg.restart_every == 0 {
        n
    } else {
        cfg.restart_every
    };

    let (mut loss, mut g) = obj.value_and_grad(&x0);
    if !loss.is_finite() {
        return Err(Error::TrainingDiverged);
    }
    let mut state = CgState {
        p: negated(&g),
        x: x0,
        alpha: 0.0,
        beta: 0.0,
        iter: 0,
        g: g.clone(),
    };
    let mut trace = vec![TraceEntry {
        iter: 0,
        loss,
        grad_norm: l2_norm(&g),
        restarted: true,
        direction_residual: max_abs_sum(&state.p, &g),
    }];
    let mut just_restarted = true;

    for k in 1..=cfg.max_iters {
        if l2_norm(&g) < cfg.grad_tol {
            break;
        }

        // Step length along p, with the search interval doubled while the
        // objective keeps decreasing at its far edge.
        let alpha = {
            let x = &state.x;
            let p = &state.p;
            let probe = |alpha: f64| {
                let trial: Vec<f64> = x.iter().zip(p).map(|(xi, pi)| xi + alpha * pi).collect();
                obj.value(&trial)
            };
            let mut alpha_max = 1.0;
            let mut f_edge = probe(alpha_max);
            if !f_edge.is_finite() {
                return Err(Error::TrainingDiverged);
            }
            while alpha_max < ALPHA_MAX_CAP {
                let f_next = probe(2.0 * alpha_max);
                if !f_next.is_finite() {
                    return Err(Error::TrainingDiverged);
                }
                if f_next < f_edge {
                    alpha_max *= 2.0;
                    f_edge = f_next;
                } else {
                    break;
                }
            }
            line_search(probe, alpha_max, cfg).map_err(|e| match e {
                Error::DivergentObjective => Error::TrainingDiverged,
                other => other,
            })?
        };

        if alpha == 0.0 && just_restarted {
            // steepest descent cannot improve at line-search resolution
            break;
        }

        let g_prev_dot = dot(&g, &g);
        if alpha > 0.0 {
            for (xi, pi) in state.x.iter_mut().zip(&state.p) {
                *xi += alpha * pi;
            }
            let (new_loss, new_g) = obj.value_and_grad(&state.x);
            if !new_loss.is_finite() {
                return Err(Error::TrainingDiverged);
            }
            loss = new_loss;
            g = new_g;
        }

        // Next direction: p = -g + beta * p_prev with Polak-Ribiere-plus
        // beta, zeroed on the restart schedule, after a zero step, and
        // whenever the result is not a descent direction.
        let scheduled_restart = k % restart_every == 0;
        let mut beta = if scheduled_restart || alpha == 0.0 || g_prev_dot == 0.0 {
            0.0
        } else {
            let prev_g = &state.g;
            let pr = g
                .iter()
                .zip(prev_g)
                .map(|(gi, pg)| gi * (gi - pg))
                .sum::<f64>()
                / g_prev_dot;
            pr.max(0.0)
        };
        let mut p_new = if beta == 0.0 {
            negated(&g)
        } else {
            g.iter()
                .zip(&state.p)
                .map(|(gi, pi)| -gi + beta * pi)
                .collect()
        };
        if beta != 0.0 && dot(&p_new, &g) >= 0.0 {
            beta = 0.0;
            p_new = negated(&g);
        }
        let restarted = beta == 0.0;

        state.g = g.clone();
        state.p = p_new;
        state.alpha = alpha;
        state.beta = beta;
        state.iter = k;
        trace.push(TraceEntry {
            iter: k,
            loss,
            grad_norm: l2_norm(&g),
            restarted,
            direction_residual: max_abs_sum(&state.p, &g),
        });
        just_restarted = restarted;
    }

    Ok((state, trace))
}

struct MlpObjective<'a> {
    n_in: usize,
    n_hidden: usize,
    n_out: usize,
    data: &'a [LabeledVector],
}

impl Objective for MlpObjective<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        let m = MlpModel::from_flat(self.n_in, self.n_hidden, self.n_out, x)
            .expect("parameter vector length fixed by construction");
        batch_loss(&m, self.data).expect("batch validated before training")
    }

    fn value_and_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let m = MlpModel::from_flat(self.n_in, self.n_hidden, self.n_out, x)
            .expect("parameter vector length fixed by construction");
        loss_and_gradient(&m, self.data).expect("batch validated before training")
    }
}

/// Trains the model on the full batch until the gradient tolerance or the
/// iteration cap is reached. Returns the trained model and the trace.
pub fn cg_train(
    m: &MlpModel,
    data: &[LabeledVector],
    cfg: &TrainConfig,
) -> Result<(MlpModel, Vec<TraceEntry>)> {
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    for sample in data {
        if sample.features.len() != m.n_in {
            return Err(Error::DimensionMismatch {
                expected: m.n_in,
                actual: sample.features.len(),
            });
        }
        if sample.target.len() != m.n_out {
            return Err(Error::DimensionMismatch {
                expected: m.n_out,
                actual: sample.target.len(),
            });
        }
    }
    let obj = MlpObjective {
        n_in: m.n_in,
        n_hidden: m.n_hidden,
        n_out: m.n_out,
        data,
    };
    let (state, trace) = cg_minimize(&obj, m.flatten(), cfg)?;
    let trained = MlpModel::from_flat(m.n_in, m.n_hidden, m.n_out, &state.x)?;
    if !trained.all_finite() {
        return Err(Error::TrainingDiverged);
    }
    Ok((trained, trace))
}
