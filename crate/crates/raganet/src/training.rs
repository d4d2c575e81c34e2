//! Full-batch gradient descent with momentum, random restarts and
//! patience-based early stopping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{gradient, mse, NetworkConfig, NetworkWeights};
use crate::scalar::Scalar;
use crate::series::LagDataset;

/// Hyperparameters for [`train`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig<F> {
    /// Learning rate.
    pub eta: F,
    /// Momentum coefficient.
    pub delta: F,
    /// Hard cap on epochs per restart.
    pub max_epochs: usize,
    /// Epochs without improvement before a restart stops.
    pub patience: usize,
    /// Loss decrease below this does not count as improvement.
    pub min_improvement: F,
    /// Seed of the first restart; restart `r` uses `seed + r`.
    pub seed: u64,
    /// Number of independently initialised runs.
    pub restarts: usize,
}

impl<F: Scalar> Default for TrainConfig<F> {
    fn default() -> Self {
        TrainConfig {
            eta: F::from_f64(0.05),
            delta: F::from_f64(0.9),
            max_epochs: 5000,
            patience: 200,
            min_improvement: F::from_f64(1e-8),
            seed: 1,
            restarts: 10,
        }
    }
}

/// Outcome of the best restart.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport<F> {
    /// Weights at the epoch training stopped.
    pub final_weights: NetworkWeights<F>,
    /// Epochs actually run by the winning restart.
    pub epochs_run: usize,
    /// Training-set MSE after each epoch of the winning restart.
    pub loss_history: Vec<F>,
    /// Seed of the winning restart.
    pub best_restart_seed: u64,
}

impl<F: Scalar> TrainReport<F> {
    /// MSE at the last epoch.
    pub fn final_mse(&self) -> F {
        *self.loss_history.last().expect("training runs at least one epoch")
    }
}

/// Draw initial weights uniformly from `[-0.5, 0.5)`.
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`, consumed in a fixed
/// order: hidden rows bias-first, then the output row. Draws are made as
/// `f64` and converted, so `f32` and `f64` networks see the same values.
pub fn init_weights<F: Scalar>(cfg: &NetworkConfig, seed: u64) -> NetworkWeights<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || F::from_f64(rng.gen::<f64>() - 0.5);
    let w_in = (0..cfg.q)
        .map(|_| (0..=cfg.p).map(|_| draw()).collect())
        .collect();
    let w_out = (0..=cfg.q).map(|_| draw()).collect();
    NetworkWeights { w_in, w_out }
}

/// One momentum update, applied in place:
///
/// ```text
/// v <- -eta * grad + delta * v
/// w <- w + v
/// ```
pub fn momentum_step<F: Scalar>(
    weights: &mut NetworkWeights<F>,
    velocity: &mut NetworkWeights<F>,
    grad: &NetworkWeights<F>,
    eta: F,
    delta: F,
) {
    for ((w_row, v_row), g_row) in weights
        .w_in
        .iter_mut()
        .zip(&mut velocity.w_in)
        .zip(&grad.w_in)
    {
        for ((w, v), g) in w_row.iter_mut().zip(v_row.iter_mut()).zip(g_row) {
            *v = delta * *v - eta * *g;
            *w = *w + *v;
        }
    }
    for ((w, v), g) in weights
        .w_out
        .iter_mut()
        .zip(&mut velocity.w_out)
        .zip(&grad.w_out)
    {
        *v = delta * *v - eta * *g;
        *w = *w + *v;
    }
}

enum RestartOutcome<F> {
    Finished(TrainReport<F>),
    Diverged { epoch: usize },
}

fn run_restart<F: Scalar>(
    net: &NetworkConfig,
    cfg: &TrainConfig<F>,
    data: &LagDataset<F>,
    seed: u64,
) -> Result<RestartOutcome<F>> {
    let mut weights = init_weights::<F>(net, seed);
    let mut velocity = NetworkWeights::zeros(net);
    let mut loss_history = Vec::new();
    let mut best = F::infinity();
    let mut stale = 0usize;

    for epoch in 1..=cfg.max_epochs {
        let grad = gradient(&weights, net, data)?;
        momentum_step(&mut weights, &mut velocity, &grad, cfg.eta, cfg.delta);
        let loss = mse(&weights, net, data)?;
        if !loss.is_finite() || weights.flat().any(|w| !w.is_finite()) {
            return Ok(RestartOutcome::Diverged { epoch });
        }
        loss_history.push(loss);
        if loss < best - cfg.min_improvement {
            best = loss;
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        }
    }

    let epochs_run = loss_history.len();
    Ok(RestartOutcome::Finished(TrainReport {
        final_weights: weights,
        epochs_run,
        loss_history,
        best_restart_seed: seed,
    }))
}

/// Train with `cfg.restarts` independent initialisations and return the
/// restart with the lowest final MSE (ties go to the earlier restart).
///
/// Restarts that blow up to non-finite loss or weights are skipped; if
/// every restart diverges the error names the epoch and learning rate of
/// the last failure.
pub fn train<F: Scalar>(
    net: &NetworkConfig,
    cfg: &TrainConfig<F>,
    data: &LagDataset<F>,
) -> Result<TrainReport<F>> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    if cfg.max_epochs == 0 {
        return Err(Error::InvalidArgument("max_epochs must be at least 1".into()));
    }
    let mut best: Option<TrainReport<F>> = None;
    let mut last_divergence = 0usize;
    for r in 0..cfg.restarts {
        let seed = cfg.seed.wrapping_add(r as u64);
        match run_restart(net, cfg, data, seed)? {
            RestartOutcome::Diverged { epoch } => last_divergence = epoch,
            RestartOutcome::Finished(report) => {
                let better = match &best {
                    None => true,
                    Some(b) => report.final_mse() < b.final_mse(),
                };
                if better {
                    best = Some(report);
                }
            }
        }
    }
    best.ok_or(Error::Divergence {
        epoch: last_divergence,
        eta: cfg.eta.as_f64(),
    })
}
