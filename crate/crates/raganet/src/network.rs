//! Single-hidden-layer autoregressive network: forward pass, mean squared
//! error, and the analytic gradient used by momentum training.
//!
//! The network maps the `p` previous notes to a prediction of the next one
//! through `q` hidden units:
//!
//! ```text
//! h_j   = w_in[j][0] + sum_i w_in[j][i] * y_{t-i}      (i = 1..p)
//! out   = f( w_out[0] + sum_j w_out[j] * g(h_j) )
//! ```
//!
//! with `g` the hidden activation and `f` the output activation. All
//! weights carry an explicit bias in slot 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notation::NoteSequence;
use crate::scalar::Scalar;
use crate::series::{embed_lags, LagDataset, Scaler};

/// Unit activation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Identity,
    Tanh,
    Sigmoid,
}

impl Activation {
    pub const ALL: [Activation; 3] = [Activation::Identity, Activation::Tanh, Activation::Sigmoid];

    pub fn apply<F: Scalar>(self, x: F) -> F {
        match self {
            Activation::Identity => x,
            Activation::Tanh => x.tanh(),
            // Split by sign so exp never overflows for large |x|.
            Activation::Sigmoid => {
                if x >= F::zero() {
                    F::one() / (F::one() + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (F::one() + e)
                }
            }
        }
    }

    /// Derivative evaluated at the pre-activation `x`.
    pub fn derivative<F: Scalar>(self, x: F) -> F {
        match self {
            Activation::Identity => F::one(),
            Activation::Tanh => {
                let t = x.tanh();
                F::one() - t * t
            }
            Activation::Sigmoid => {
                let s = self.apply(x);
                s * (F::one() - s)
            }
        }
    }

    /// Interval targets are scaled into when this is the output activation.
    ///
    /// Sigmoid saturates in `(0, 1)`, so targets go to `[0, 1]`; the
    /// unbounded outputs use `[-1, 1]`.
    pub fn target_bounds<F: Scalar>(self) -> (F, F) {
        match self {
            Activation::Sigmoid => (F::zero(), F::one()),
            Activation::Identity | Activation::Tanh => (-F::one(), F::one()),
        }
    }
}

impl std::fmt::Display for Activation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Activation::Identity => write!(f, "identity"),
            Activation::Tanh => write!(f, "tanh"),
            Activation::Sigmoid => write!(f, "sigmoid"),
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Activation::Identity),
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            _ => Err(Error::InvalidArgument(format!("unknown activation `{s}`"))),
        }
    }
}

/// Architecture of an `N^{p-q-1}` network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Autoregressive order: number of lagged inputs.
    pub p: usize,
    /// Hidden units.
    pub q: usize,
    #[serde(rename = "hidden_act")]
    pub hidden: Activation,
    #[serde(rename = "output_act")]
    pub output: Activation,
}

impl NetworkConfig {
    pub fn new(p: usize, q: usize, hidden: Activation, output: Activation) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidArgument(format!(
                "network needs p >= 1 and q >= 1, got p={p} q={q}"
            )));
        }
        Ok(NetworkConfig { p, q, hidden, output })
    }

    /// Architecture label in the `N^{p-q-1}` convention.
    pub fn label(&self) -> String {
        format!("N^{{{}-{}-1}}", self.p, self.q)
    }

    /// Total trainable weights: `q(p+1)` hidden plus `q+1` output.
    pub fn param_count(&self) -> usize {
        self.q * (self.p + 1) + self.q + 1
    }
}

/// Weights of a network, bias-first in every row.
///
/// `w_in` has one row per hidden unit: `[bias, w_1, ..., w_p]`.
/// `w_out` is `[bias, v_1, ..., v_q]`. The same container carries
/// gradients and momentum velocities, which share this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkWeights<F> {
    pub w_in: Vec<Vec<F>>,
    pub w_out: Vec<F>,
}

impl<F: Scalar> NetworkWeights<F> {
    pub fn zeros(cfg: &NetworkConfig) -> Self {
        NetworkWeights {
            w_in: vec![vec![F::zero(); cfg.p + 1]; cfg.q],
            w_out: vec![F::zero(); cfg.q + 1],
        }
    }

    /// Check the container matches the architecture.
    pub fn validate(&self, cfg: &NetworkConfig) -> Result<()> {
        if self.w_in.len() != cfg.q {
            return Err(Error::Shape {
                context: "hidden weight rows",
                expected: cfg.q,
                got: self.w_in.len(),
            });
        }
        for row in &self.w_in {
            if row.len() != cfg.p + 1 {
                return Err(Error::Shape {
                    context: "hidden weight row width",
                    expected: cfg.p + 1,
                    got: row.len(),
                });
            }
        }
        if self.w_out.len() != cfg.q + 1 {
            return Err(Error::Shape {
                context: "output weight length",
                expected: cfg.q + 1,
                got: self.w_out.len(),
            });
        }
        Ok(())
    }

    /// Iterate over all weights in a fixed order (hidden rows, then output).
    pub fn flat(&self) -> impl Iterator<Item = F> + '_ {
        self.w_in
            .iter()
            .flatten()
            .chain(self.w_out.iter())
            .copied()
    }
}

/// Intermediate values of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace<F> {
    pub hidden_pre: Vec<F>,
    pub hidden_post: Vec<F>,
    pub output_pre: F,
    pub output: F,
}

/// Run the network on one (already scaled) input row.
pub fn forward<F: Scalar>(
    weights: &NetworkWeights<F>,
    cfg: &NetworkConfig,
    input: &[F],
) -> Result<ForwardTrace<F>> {
    weights.validate(cfg)?;
    if input.len() != cfg.p {
        return Err(Error::Shape {
            context: "input length",
            expected: cfg.p,
            got: input.len(),
        });
    }
    let mut hidden_pre = Vec::with_capacity(cfg.q);
    let mut hidden_post = Vec::with_capacity(cfg.q);
    for row in &weights.w_in {
        let mut acc = row[0];
        for (w, x) in row[1..].iter().zip(input) {
            acc = acc + *w * *x;
        }
        hidden_pre.push(acc);
        hidden_post.push(cfg.hidden.apply(acc));
    }
    let mut output_pre = weights.w_out[0];
    for (v, h) in weights.w_out[1..].iter().zip(&hidden_post) {
        output_pre = output_pre + *v * *h;
    }
    let output = cfg.output.apply(output_pre);
    Ok(ForwardTrace { hidden_pre, hidden_post, output_pre, output })
}

fn check_dataset<F: Scalar>(
    weights: &NetworkWeights<F>,
    cfg: &NetworkConfig,
    data: &LagDataset<F>,
    context: &'static str,
) -> Result<()> {
    weights.validate(cfg)?;
    if data.p != cfg.p {
        return Err(Error::Shape { context: "dataset lag order", expected: cfg.p, got: data.p });
    }
    if data.is_empty() {
        return Err(Error::EmptyData(context));
    }
    Ok(())
}

/// Mean squared error over a (scaled) dataset: `(1/N) sum (out - y)^2`.
pub fn mse<F: Scalar>(
    weights: &NetworkWeights<F>,
    cfg: &NetworkConfig,
    data: &LagDataset<F>,
) -> Result<F> {
    check_dataset(weights, cfg, data, "mse")?;
    let mut sum = F::zero();
    for row in &data.rows {
        let trace = forward(weights, cfg, &row.input)?;
        let e = trace.output - row.target;
        sum = sum + e * e;
    }
    Ok(sum / F::from_usize(data.len()))
}

/// Analytic gradient of [`mse`] with respect to every weight, returned in
/// the same container shape as the weights.
pub fn gradient<F: Scalar>(
    weights: &NetworkWeights<F>,
    cfg: &NetworkConfig,
    data: &LagDataset<F>,
) -> Result<NetworkWeights<F>> {
    check_dataset(weights, cfg, data, "gradient")?;
    let mut grad = NetworkWeights::zeros(cfg);
    let inv_n = F::one() / F::from_usize(data.len());
    let two = F::from_f64(2.0);
    let mut hidden_pre = vec![F::zero(); cfg.q];
    let mut hidden_post = vec![F::zero(); cfg.q];

    for row in &data.rows {
        for (j, w_row) in weights.w_in.iter().enumerate() {
            let mut acc = w_row[0];
            for (w, x) in w_row[1..].iter().zip(&row.input) {
                acc = acc + *w * *x;
            }
            hidden_pre[j] = acc;
            hidden_post[j] = cfg.hidden.apply(acc);
        }
        let mut output_pre = weights.w_out[0];
        for (v, h) in weights.w_out[1..].iter().zip(&hidden_post) {
            output_pre = output_pre + *v * *h;
        }
        let output = cfg.output.apply(output_pre);

        // d(mse)/d(output_pre) for this row
        let d_out = two * inv_n * (output - row.target) * cfg.output.derivative(output_pre);
        grad.w_out[0] = grad.w_out[0] + d_out;
        for j in 0..cfg.q {
            grad.w_out[j + 1] = grad.w_out[j + 1] + d_out * hidden_post[j];
            let d_hidden = d_out * weights.w_out[j + 1] * cfg.hidden.derivative(hidden_pre[j]);
            grad.w_in[j][0] = grad.w_in[j][0] + d_hidden;
            for (slot, x) in grad.w_in[j][1..].iter_mut().zip(&row.input) {
                *slot = *slot + d_hidden * *x;
            }
        }
    }
    Ok(grad)
}

/// One prediction aligned to the source sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<F> {
    /// 1-based serial position of the predicted note.
    pub t: usize,
    /// The actual note, in raw pitch units.
    pub observed: F,
    /// Network output mapped back to raw pitch units.
    pub predicted: F,
}

/// Predict every note of `seq` that has `p` predecessors.
///
/// Inputs pass through `scaler_in`; the network output is inverse-mapped
/// through `scaler_out`, so observed and predicted are both in raw pitch
/// units.
pub fn predict_series<F: Scalar>(
    weights: &NetworkWeights<F>,
    cfg: &NetworkConfig,
    seq: &NoteSequence,
    scaler_in: &Scaler<F>,
    scaler_out: &Scaler<F>,
) -> Result<Vec<Prediction<F>>> {
    let data = embed_lags::<F>(seq, cfg.p)?;
    let mut out = Vec::with_capacity(data.len());
    for row in &data.rows {
        let scaled: Vec<F> = row.input.iter().map(|&x| scaler_in.apply(x)).collect();
        let trace = forward(weights, cfg, &scaled)?;
        out.push(Prediction {
            t: row.t,
            observed: row.target,
            predicted: scaler_out.invert(trace.output),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::NoteSequence;
    use crate::series::LagRow;

    fn cfg(p: usize, q: usize, hidden: Activation, output: Activation) -> NetworkConfig {
        NetworkConfig::new(p, q, hidden, output).unwrap()
    }

    fn dataset(p: usize, rows: &[(&[f64], f64)]) -> LagDataset<f64> {
        LagDataset {
            p,
            rows: rows
                .iter()
                .enumerate()
                .map(|(i, (input, target))| LagRow {
                    input: input.to_vec(),
                    target: *target,
                    t: p + i + 1,
                })
                .collect(),
        }
    }

    #[test]
    fn tanh_matches_exponential_form() {
        let mut x = -20.0f64;
        while x <= 20.0 {
            let direct = Activation::Tanh.apply(x);
            let via_exp = (1.0 - (-2.0 * x).exp()) / (1.0 + (-2.0 * x).exp());
            assert!(
                (direct - via_exp).abs() <= 1e-12,
                "tanh mismatch at {x}: {direct} vs {via_exp}"
            );
            x += 0.125;
        }
        assert!((Activation::Tanh.apply(1.0f64) - 0.7615941559557649).abs() < 1e-15);
    }

    #[test]
    fn sigmoid_values_and_stability() {
        assert!((Activation::Sigmoid.apply(0.0f64) - 0.5).abs() < 1e-15);
        // rises with x: sigmoid(2) ~ 0.8808
        assert!((Activation::Sigmoid.apply(2.0f64) - 0.8807970779778823).abs() < 1e-15);
        for x in [-1e3f64, -700.0, 700.0, 1e3] {
            let s = Activation::Sigmoid.apply(x);
            assert!(s.is_finite());
            assert!((0.0..=1.0).contains(&s));
        }
        assert_eq!(Activation::Sigmoid.apply(1e3f64), 1.0);
        assert_eq!(Activation::Sigmoid.apply(-1e3f64), 0.0);
    }

    #[test]
    fn activation_derivatives() {
        assert_eq!(Activation::Identity.derivative(3.7f64), 1.0);
        assert!((Activation::Tanh.derivative(1.0f64) - 0.41997434161402614).abs() < 1e-15);
        let s = Activation::Sigmoid.apply(0.3f64);
        assert!((Activation::Sigmoid.derivative(0.3f64) - s * (1.0 - s)).abs() < 1e-15);
    }

    #[test]
    fn activation_names_round_trip() {
        for act in Activation::ALL {
            assert_eq!(act.to_string().parse::<Activation>().unwrap(), act);
        }
        assert!("relu".parse::<Activation>().is_err());
    }

    #[test]
    fn target_bounds_by_output() {
        assert_eq!(Activation::Sigmoid.target_bounds::<f64>(), (0.0, 1.0));
        assert_eq!(Activation::Tanh.target_bounds::<f64>(), (-1.0, 1.0));
        assert_eq!(Activation::Identity.target_bounds::<f64>(), (-1.0, 1.0));
    }

    #[test]
    fn label_and_param_count() {
        let c = cfg(2, 4, Activation::Sigmoid, Activation::Identity);
        assert_eq!(c.label(), "N^{2-4-1}");
        assert_eq!(c.param_count(), 17);
        let c = cfg(3, 5, Activation::Tanh, Activation::Tanh);
        assert_eq!(c.label(), "N^{3-5-1}");
        assert_eq!(c.param_count(), 26);
        assert!(NetworkConfig::new(0, 1, Activation::Tanh, Activation::Identity).is_err());
    }

    #[test]
    fn forward_hand_computed() {
        // N^{2-2-1}, identity everywhere: pure affine composition.
        let c = cfg(2, 2, Activation::Identity, Activation::Identity);
        let w = NetworkWeights {
            w_in: vec![vec![0.5, 1.0, -1.0], vec![-0.25, 0.5, 0.5]],
            w_out: vec![1.0, 2.0, -2.0],
        };
        let trace = forward(&w, &c, &[3.0, 2.0]).unwrap();
        // h1 = 0.5 + 3 - 2 = 1.5 ; h2 = -0.25 + 1.5 + 1.0 = 2.25
        assert_eq!(trace.hidden_pre, vec![1.5, 2.25]);
        // out = 1 + 2*1.5 - 2*2.25 = -0.5
        assert_eq!(trace.output, -0.5);
    }

    #[test]
    fn forward_with_tanh_hidden() {
        let c = cfg(1, 1, Activation::Tanh, Activation::Identity);
        let w = NetworkWeights::<f64> {
            w_in: vec![vec![0.0, 1.0]],
            w_out: vec![0.0, 2.0],
        };
        let trace = forward(&w, &c, &[1.0]).unwrap();
        assert!((trace.output - 2.0 * 0.7615941559557649).abs() < 1e-15);
    }

    #[test]
    fn forward_shape_errors() {
        let c = cfg(2, 2, Activation::Tanh, Activation::Identity);
        let w = NetworkWeights::<f64>::zeros(&c);
        assert!(matches!(
            forward(&w, &c, &[1.0]),
            Err(Error::Shape { context: "input length", expected: 2, got: 1 })
        ));
        let bad = NetworkWeights { w_in: vec![vec![0.0; 3]], w_out: vec![0.0; 3] };
        assert!(matches!(
            forward(&bad, &c, &[1.0, 2.0]),
            Err(Error::Shape { context: "hidden weight rows", .. })
        ));
        let bad = NetworkWeights { w_in: vec![vec![0.0; 2]; 2], w_out: vec![0.0; 3] };
        assert!(matches!(
            forward(&bad, &c, &[1.0, 2.0]),
            Err(Error::Shape { context: "hidden weight row width", .. })
        ));
        let bad = NetworkWeights { w_in: vec![vec![0.0; 3]; 2], w_out: vec![0.0; 2] };
        assert!(matches!(
            forward(&bad, &c, &[1.0, 2.0]),
            Err(Error::Shape { context: "output weight length", .. })
        ));
    }

    #[test]
    fn mse_brute_force() {
        let c = cfg(1, 1, Activation::Identity, Activation::Identity);
        // output = 1 * x (identity chain with unit weights)
        let w = NetworkWeights { w_in: vec![vec![0.0, 1.0]], w_out: vec![0.0, 1.0] };
        let data = dataset(1, &[(&[1.0], 2.0), (&[2.0], 2.0), (&[3.0], 3.0)]);
        // errors: -1, 0, 0 -> mse 1/3
        let e = mse(&w, &c, &data).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-15);
        let empty = LagDataset::<f64> { p: 1, rows: vec![] };
        assert!(matches!(mse(&w, &c, &empty), Err(Error::EmptyData("mse"))));
    }

    #[test]
    fn gradient_linear_closed_form() {
        // Identity everywhere, q=1: out = v0 + v1*(b + w*x).
        // mse = (1/N) sum e^2, e = out - y. d/dv1 = (2/N) sum e*(b + w*x), etc.
        let c = cfg(1, 1, Activation::Identity, Activation::Identity);
        let w = NetworkWeights { w_in: vec![vec![0.5, 2.0]], w_out: vec![-1.0, 1.5] };
        let data = dataset(1, &[(&[1.0], 1.0), (&[-2.0], 0.0)]);
        let g = gradient(&w, &c, &data).unwrap();
        let e1 = (-1.0 + 1.5 * (0.5 + 2.0)) - 1.0; // 1.75
        let e2 = (-1.0 + 1.5 * (0.5 - 4.0)) - 0.0; // -6.25
        let n = 2.0;
        assert!((g.w_out[0] - 2.0 / n * (e1 + e2)).abs() < 1e-12);
        assert!((g.w_out[1] - 2.0 / n * (e1 * 2.5 + e2 * -3.5)).abs() < 1e-12);
        assert!((g.w_in[0][0] - 2.0 / n * 1.5 * (e1 + e2)).abs() < 1e-12);
        assert!((g.w_in[0][1] - 2.0 / n * 1.5 * (e1 * 1.0 + e2 * -2.0)).abs() < 1e-12);
    }

    /// Central finite difference of [`mse`] in every weight slot.
    fn numeric_gradient(
        w: &NetworkWeights<f64>,
        c: &NetworkConfig,
        data: &LagDataset<f64>,
        h: f64,
    ) -> NetworkWeights<f64> {
        let mut out = NetworkWeights::zeros(c);
        let mut probe = w.clone();
        for j in 0..c.q {
            for i in 0..=c.p {
                let orig = probe.w_in[j][i];
                probe.w_in[j][i] = orig + h;
                let up = mse(&probe, c, data).unwrap();
                probe.w_in[j][i] = orig - h;
                let down = mse(&probe, c, data).unwrap();
                probe.w_in[j][i] = orig;
                out.w_in[j][i] = (up - down) / (2.0 * h);
            }
        }
        for k in 0..=c.q {
            let orig = probe.w_out[k];
            probe.w_out[k] = orig + h;
            let up = mse(&probe, c, data).unwrap();
            probe.w_out[k] = orig - h;
            let down = mse(&probe, c, data).unwrap();
            probe.w_out[k] = orig;
            out.w_out[k] = (up - down) / (2.0 * h);
        }
        out
    }

    #[test]
    fn gradient_matches_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for hidden in Activation::ALL {
            for output in Activation::ALL {
                let c = cfg(2, 3, hidden, output);
                let mut w = NetworkWeights::zeros(&c);
                for row in &mut w.w_in {
                    for slot in row {
                        *slot = rng.gen_range(-1.0..1.0);
                    }
                }
                for slot in &mut w.w_out {
                    *slot = rng.gen_range(-1.0..1.0);
                }
                let rows: Vec<(Vec<f64>, f64)> = (0..6)
                    .map(|_| {
                        (
                            vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                            rng.gen_range(-1.0..1.0),
                        )
                    })
                    .collect();
                let data = LagDataset {
                    p: 2,
                    rows: rows
                        .iter()
                        .enumerate()
                        .map(|(i, (input, target))| LagRow {
                            input: input.clone(),
                            target: *target,
                            t: i + 3,
                        })
                        .collect(),
                };
                let g = gradient(&w, &c, &data).unwrap();
                let fd = numeric_gradient(&w, &c, &data, 1e-6);
                for (a, b) in g.flat().zip(fd.flat()) {
                    let tol = 1e-8 + 1e-6 * b.abs();
                    assert!(
                        (a - b).abs() <= tol,
                        "{hidden}/{output}: analytic {a} vs numeric {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn predict_series_inverse_scales() {
        let c = cfg(1, 1, Activation::Identity, Activation::Identity);
        // network computes identity on its scaled input
        let w = NetworkWeights::<f64> { w_in: vec![vec![0.0, 1.0]], w_out: vec![0.0, 1.0] };
        let seq = NoteSequence::from_values([0, 10, 0, 10]).unwrap();
        let scaler = Scaler::MinMax { lo: -1.0, hi: 1.0, src_min: 0.0, src_max: 10.0 };
        let preds = predict_series(&w, &c, &seq, &scaler, &scaler).unwrap();
        assert_eq!(preds.len(), 3);
        assert_eq!(preds[0].t, 2);
        assert_eq!(preds[0].observed, 10.0);
        // scale(0) = -1, identity net, invert(-1) = 0
        assert!((preds[0].predicted - 0.0).abs() < 1e-12);
        assert!((preds[1].predicted - 10.0).abs() < 1e-12);
    }
}
