//! Nelder–Mead simplex search over a two-part objective
//! `distance + λ·penalty`, where λ may be updated between iterations
//! (dynamic penalty) or held fixed (one stage of a sequential schedule).

/// The two components of a penalized objective evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BiObjective {
    pub distance: f64,
    pub penalty: f64,
}

impl BiObjective {
    pub(crate) fn combined(&self, lambda: f64) -> f64 {
        self.distance + lambda * self.penalty
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum PenaltySchedule {
    /// λ_k := h_{k-1}, the best vertex's penalty at the end of the
    /// previous iteration; λ_0 is given.
    Dynamic { lambda0: f64 },
    /// λ held constant for the whole run.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    pub max_iter: usize,
    /// Stop when the combined-objective spread over the simplex drops
    /// below this.
    pub tol: f64,
    /// Relative per-coordinate perturbation building the initial simplex.
    pub rel_step: f64,
    /// Absolute fallback step for coordinates at zero.
    pub abs_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct TraceEntry {
    pub lambda: f64,
    pub best_objective: f64,
    pub best_penalty: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexOutcome {
    pub best_x: Vec<f64>,
    pub best: BiObjective,
    pub lambda_final: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub(crate) fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    schedule: PenaltySchedule,
    opts: &SimplexOptions,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> BiObjective,
{
    nelder_mead_round(&mut f, x0, schedule, opts, opts.max_iter)
}

fn nelder_mead_round<F>(
    f: &mut F,
    x0: &[f64],
    schedule: PenaltySchedule,
    opts: &SimplexOptions,
    budget: usize,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> BiObjective,
{
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> BiObjective {
        *evals += 1;
        let v = f(x);
        BiObjective {
            distance: if v.distance.is_finite() { v.distance } else { f64::MAX / 4.0 },
            penalty: if v.penalty.is_finite() { v.penalty } else { f64::MAX / 4.0 },
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += if v[i] != 0.0 {
            opts.rel_step * v[i].abs()
        } else {
            opts.abs_step
        };
        simplex.push(v);
    }
    let mut values: Vec<BiObjective> = simplex.iter().map(|v| eval(v, &mut evaluations)).collect();

    let mut lambda = match schedule {
        PenaltySchedule::Dynamic { lambda0 } => lambda0,
        PenaltySchedule::Fixed(l) => l,
    };
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0usize;

    if budget == 0 {
        // zero-iteration budget: report the start point as-is
        return SimplexOutcome {
            best_x: simplex[0].clone(),
            best: values[0],
            lambda_final: lambda,
            iterations: 0,
            evaluations,
            converged: false,
            trace,
        };
    }

    let mut best_seen = f64::INFINITY;
    let mut since_improvement = 0usize;
    let stall_limit = 120 + 20 * dim;
    for iter in 0..budget {
        iterations = iter + 1;

        // order by the current combined objective
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .combined(lambda)
                .partial_cmp(&values[b].combined(lambda))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let simplex_sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let values_sorted: Vec<BiObjective> = order.iter().map(|&i| values[i]).collect();
        simplex = simplex_sorted;
        values = values_sorted;

        let best = values[0].combined(lambda);
        let worst = values[dim].combined(lambda);
        trace.push(TraceEntry {
            lambda,
            best_objective: best,
            best_penalty: values[0].penalty,
        });
        if (worst - best).abs() < opts.tol {
            converged = true;
            break;
        }
        if best < best_seen - 1e-15 {
            best_seen = best;
            since_improvement = 0;
        } else {
            since_improvement += 1;
            if since_improvement > stall_limit {
                break; // collapsed simplex; the driver restarts around the best point
            }
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for v in simplex.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let point_at = |coef: f64, centroid: &[f64], worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = point_at(REFLECT, &centroid, &simplex[dim]);
        let f_r = eval(&reflected, &mut evaluations);

        if f_r.combined(lambda) < values[0].combined(lambda) {
            let expanded = point_at(EXPAND, &centroid, &simplex[dim]);
            let f_e = eval(&expanded, &mut evaluations);
            if f_e.combined(lambda) < f_r.combined(lambda) {
                simplex[dim] = expanded;
                values[dim] = f_e;
            } else {
                simplex[dim] = reflected;
                values[dim] = f_r;
            }
        } else if f_r.combined(lambda) < values[dim - 1].combined(lambda) {
            simplex[dim] = reflected;
            values[dim] = f_r;
        } else {
            let (candidate, f_c) = if f_r.combined(lambda) < values[dim].combined(lambda) {
                // outside contraction
                let c = point_at(CONTRACT, &centroid, &simplex[dim]);
                let f_c = eval(&c, &mut evaluations);
                (c, f_c)
            } else {
                // inside contraction
                let c = point_at(-CONTRACT, &centroid, &simplex[dim]);
                let f_c = eval(&c, &mut evaluations);
                (c, f_c)
            };
            if f_c.combined(lambda)
                < f_r.combined(lambda).min(values[dim].combined(lambda))
            {
                simplex[dim] = candidate;
                values[dim] = f_c;
            } else {
                // shrink towards the best vertex
                let best_vertex = simplex[0].clone();
                for i in 1..=dim {
                    for (x, b) in simplex[i].iter_mut().zip(&best_vertex) {
                        *x = b + SHRINK * (*x - *b);
                    }
                    values[i] = eval(&simplex[i].clone(), &mut evaluations);
                }
            }
        }

        if let PenaltySchedule::Dynamic { .. } = schedule {
            // λ_k := h_{k-1} evaluated at the incumbent best vertex
            let mut best_idx = 0;
            for i in 1..=dim {
                if values[i].combined(lambda) < values[best_idx].combined(lambda) {
                    best_idx = i;
                }
            }
            lambda = values[best_idx].penalty;
        }
    }

    let mut best_idx = 0;
    for i in 1..values.len() {
        if values[i].combined(lambda) < values[best_idx].combined(lambda) {
            best_idx = i;
        }
    }
    SimplexOutcome {
        best_x: simplex[best_idx].clone(),
        best: values[best_idx],
        lambda_final: lambda,
        iterations,
        evaluations,
        converged,
        trace,
    }
}
