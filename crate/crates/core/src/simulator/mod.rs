//! Exact Monte Carlo for the risk process under every observation scheme:
//! Poisson inspections, the hybrid scheme, excursion-clock Parisian ruin and
//! continuous two-sided exit.
//!
//! Replications are split over independent ChaCha8 streams that run in
//! parallel and are reduced in stream order, so estimates depend only on
//! `(seed, streams, config)`.

mod brownian;
mod cramer_lundberg;
mod sampling;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, require_finite, require_non_negative, require_positive, Error, Result};
use crate::levy_models::LevyModel;
use crate::scale_functions::ScaleEvaluator;
use brownian::Brownian;
use cramer_lundberg::CramerLundberg;

pub const DEFAULT_HORIZON: f64 = 200.0;
pub const DEFAULT_STREAMS: u32 = 64;
pub const DEFAULT_SEED: u64 = 0x5eed_2017;
/// Paths above this many `ln`-units of classical ruin probability are treated as escaped.
const ESCAPE_LN_PROBABILITY: f64 = -23.0;

/// One Monte Carlo experiment. Levels are in the original coordinates; the
/// recovery barrier `a` is the critical level and is removed by a shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub model: LevyModel,
    pub x0: f64,
    pub a: f64,
    pub r: f64,
    pub lambda: f64,
    pub b: Option<f64>,
    pub horizon: f64,
    pub replications: u64,
    pub seed: u64,
    pub streams: u32,
}

impl SimConfig {
    pub fn new(model: LevyModel, x0: f64) -> Self {
        Self {
            model,
            x0,
            a: 0.0,
            r: 1.0,
            lambda: 1.0,
            b: None,
            horizon: DEFAULT_HORIZON,
            replications: 100_000,
            seed: DEFAULT_SEED,
            streams: DEFAULT_STREAMS,
        }
    }

    pub fn grace(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn rate(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn upper(mut self, b: f64) -> Self {
        self.b = Some(b);
        self
    }

    pub fn recovery(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn horizon(mut self, t: f64) -> Self {
        self.horizon = t;
        self
    }

    pub fn paths(mut self, n: u64) -> Self {
        self.replications = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn streams(mut self, streams: u32) -> Self {
        self.streams = streams;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        require_finite("x0", self.x0)?;
        require_non_negative("a", self.a)?;
        require_positive("r", self.r)?;
        require_positive("lambda", self.lambda)?;
        require_positive("horizon", self.horizon)?;
        if self.replications == 0 {
            return Err(invalid("replications", "must be at least 1"));
        }
        if self.streams == 0 {
            return Err(invalid("streams", "must be at least 1"));
        }
        if let Some(b) = self.b {
            require_finite("b", b)?;
            if self.x0 > b {
                return Err(invalid("x0", format!("must not exceed b = {b}, got {}", self.x0)));
            }
        }
        Ok(())
    }

    fn shifted(&self) -> (f64, Bounds) {
        let bounds = Bounds {
            b: self.b.map(|b| b - self.a),
            escape: None,
            horizon: self.horizon,
        };
        (self.x0 - self.a, bounds)
    }

    /// Shifted start and bounds with an escape level when there is no upper barrier.
    fn shifted_with_escape(&self) -> (f64, Bounds) {
        let (x, mut bounds) = self.shifted();
        if bounds.b.is_none() {
            bounds.escape = escape_level(&self.model);
        }
        (x, bounds)
    }

    fn require_upper(&self) -> Result<f64> {
        self.b.ok_or_else(|| invalid("b", "this functional needs an upper barrier"))
    }
}

/// Mean, standard error and truncation accounting of one functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub truncated_fraction: f64,
    pub seed: u64,
}

impl McEstimate {
    /// `(value - mean) / std_error`; infinite when the estimate has no spread and disagrees.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = value - self.mean;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds {
    b: Option<f64>,
    escape: Option<f64>,
    horizon: f64,
}

impl Bounds {
    fn escaped(&self, x: f64) -> bool {
        self.escape.is_some_and(|l| x >= l)
    }

    fn before_horizon(&self, event: Inspected, t: f64) -> Inspected {
        if t > self.horizon {
            Inspected::Truncated
        } else {
            event
        }
    }
}

pub(crate) enum Inspected {
    Negative { t: f64, x: f64 },
    Exit { t: f64 },
    Escape,
    Truncated,
}

pub(crate) enum Stopped {
    Ruin,
    Exit { t: f64 },
    Escape,
    Truncated,
}

pub(crate) enum Classical {
    Below { t: f64, x: f64 },
    Above,
    Truncated,
}

/// Fate of one path under the hybrid scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathOutcome {
    /// Parisian ruin at `inspection + r`, where `inspection` found the surplus negative.
    Ruin { inspection: f64 },
    /// The upper barrier was reached first.
    Exit { time: f64 },
    /// The path reached a level from which ruin has negligible probability.
    Escape,
    /// Unresolved at the horizon.
    Truncated,
}

#[derive(Debug, Clone, Copy)]
enum Engine {
    Brownian(Brownian),
    CramerLundberg(CramerLundberg),
}

impl Engine {
    fn new(model: &LevyModel) -> Self {
        match *model {
            LevyModel::Brownian { c, sigma } => Self::Brownian(Brownian { c, sigma }),
            LevyModel::CramerLundberg { c, eta, mu } => Self::CramerLundberg(CramerLundberg { c, eta, mu }),
        }
    }

    fn inspect(&self, rng: &mut ChaCha8Rng, t: f64, x: f64, lambda: f64, bounds: &Bounds) -> Inspected {
        match self {
            Self::Brownian(e) => e.inspect(rng, t, x, lambda, bounds),
            Self::CramerLundberg(e) => e.inspect(rng, t, x, lambda, bounds),
        }
    }

    fn recover(&self, rng: &mut ChaCha8Rng, x: f64, r: f64) -> Option<f64> {
        match self {
            Self::Brownian(e) => e.recover(rng, x, r),
            Self::CramerLundberg(e) => e.recover(rng, x, r),
        }
    }

    fn parisian(&self, rng: &mut ChaCha8Rng, x: f64, r: f64, lambda: Option<f64>, bounds: &Bounds) -> Stopped {
        match self {
            Self::Brownian(e) => e.parisian(rng, x, r, lambda, bounds),
            Self::CramerLundberg(e) => e.parisian(rng, x, r, lambda, bounds),
        }
    }

    fn hybrid(&self, rng: &mut ChaCha8Rng, x0: f64, r: f64, lambda: f64, bounds: &Bounds) -> PathOutcome {
        let (mut t, mut x) = (0.0, x0);
        loop {
            match self.inspect(rng, t, x, lambda, bounds) {
                Inspected::Negative { t: tn, x: xn } => match self.recover(rng, xn, r) {
                    None => return PathOutcome::Ruin { inspection: tn },
                    Some(s) => {
                        t = tn + s;
                        x = 0.0;
                    }
                },
                Inspected::Exit { t } => return PathOutcome::Exit { time: t },
                Inspected::Escape => return PathOutcome::Escape,
                Inspected::Truncated => return PathOutcome::Truncated,
            }
        }
    }
}

/// Level above which the probability of ever going below 0 is below `e^{-23}`.
fn escape_level(model: &LevyModel) -> Option<f64> {
    if model.mean() <= 0.0 {
        return None;
    }
    match *model {
        LevyModel::Brownian { c, sigma } => Some(-ESCAPE_LN_PROBABILITY * sigma * sigma / (2.0 * c)),
        LevyModel::CramerLundberg { c, eta, mu } => {
            let adjustment = mu - eta / c;
            Some(((eta / (c * mu)).ln() - ESCAPE_LN_PROBABILITY).max(0.0) / adjustment)
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(splitmix64(stream));
    rng
}

fn stream_sizes(n: u64, streams: u32) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let s = u64::from(streams);
    (0..streams).into_par_iter().map(move |i| {
        let i = u64::from(i);
        (i, n / s + u64::from(i < n % s))
    })
}

#[derive(Clone)]
struct Accumulator {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    n: u64,
    truncated: u64,
}

impl Accumulator {
    fn new(width: usize) -> Self {
        Self {
            sum: vec![0.0; width],
            sum_sq: vec![0.0; width],
            n: 0,
            truncated: 0,
        }
    }

    fn merge(&mut self, other: &Self) {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self.n += other.n;
        self.truncated += other.truncated;
    }

    fn finish(&self, seed: u64) -> Vec<McEstimate> {
        let n = self.n as f64;
        let truncated_fraction = self.truncated as f64 / n;
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(&s, &ss)| {
                let mean = s / n;
                let var = if self.n > 1 { ((ss - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
                McEstimate {
                    mean,
                    std_error: (var / n).sqrt(),
                    n: self.n,
                    truncated_fraction,
                    seed,
                }
            })
            .collect()
    }
}

/// Runs `path` once per replication. It writes `width` functional values and
/// returns whether the path was truncated at the horizon.
fn run<F>(cfg: &SimConfig, width: usize, path: F) -> Vec<McEstimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) -> bool + Sync,
{
    let parts: Vec<Accumulator> = stream_sizes(cfg.replications, cfg.streams)
        .map(|(stream, count)| {
            let mut rng = stream_rng(cfg.seed, stream);
            let mut acc = Accumulator::new(width);
            let mut values = vec![0.0; width];
            for _ in 0..count {
                values.fill(0.0);
                if path(&mut rng, &mut values) {
                    acc.truncated += 1;
                }
                for (k, &v) in values.iter().enumerate() {
                    acc.sum[k] += v;
                    acc.sum_sq[k] += v * v;
                }
                acc.n += 1;
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new(width);
    for part in &parts {
        total.merge(part);
    }
    total.finish(cfg.seed)
}

/// Ruin under the hybrid scheme, before the upper barrier if there is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridEstimate {
    /// `P(κ̃ < τ_b^+ ∧ T_max)`.
    pub ruin: McEstimate,
    /// `E[e^{-q(κ̃ - r)}; κ̃ < τ_b^+ ∧ T_max]`.
    pub ruin_laplace: McEstimate,
}

pub fn simulate_hybrid(cfg: &SimConfig, q: f64) -> Result<HybridEstimate> {
    cfg.validate()?;
    require_non_negative("q", q)?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted_with_escape();
    let est = run(cfg, 2, |rng, v| match engine.hybrid(rng, x0, cfg.r, cfg.lambda, &bounds) {
        PathOutcome::Ruin { inspection } => {
            v[0] = 1.0;
            v[1] = (-q * inspection).exp();
            false
        }
        PathOutcome::Truncated => true,
        _ => false,
    });
    Ok(HybridEstimate {
        ruin: est[0],
        ruin_laplace: est[1],
    })
}

/// Outcomes of the first `cfg.replications` hybrid paths, in stream order.
pub fn hybrid_paths(cfg: &SimConfig) -> Result<Vec<PathOutcome>> {
    cfg.validate()?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted_with_escape();
    let parts: Vec<Vec<PathOutcome>> = stream_sizes(cfg.replications, cfg.streams)
        .map(|(stream, count)| {
            let mut rng = stream_rng(cfg.seed, stream);
            (0..count)
                .map(|_| engine.hybrid(&mut rng, x0, cfg.r, cfg.lambda, &bounds))
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// The three functionals of the two-sided hybrid exit problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedEstimate {
    /// `P(τ_b^+ < κ̃)`.
    pub exit: McEstimate,
    /// `E[e^{-q τ_b^+}; τ_b^+ < κ̃]`.
    pub exit_laplace: McEstimate,
    /// `E[e^{-q(κ̃ - r)}; κ̃ < τ_b^+]`.
    pub ruin_laplace: McEstimate,
}

pub fn simulate_two_sided(cfg: &SimConfig, q: f64) -> Result<TwoSidedEstimate> {
    cfg.validate()?;
    cfg.require_upper()?;
    require_non_negative("q", q)?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted();
    let est = run(cfg, 3, |rng, v| match engine.hybrid(rng, x0, cfg.r, cfg.lambda, &bounds) {
        PathOutcome::Exit { time } => {
            v[0] = 1.0;
            v[1] = (-q * time).exp();
            false
        }
        PathOutcome::Ruin { inspection } => {
            v[2] = (-q * inspection).exp();
            false
        }
        PathOutcome::Escape => false,
        PathOutcome::Truncated => true,
    });
    Ok(TwoSidedEstimate {
        exit: est[0],
        exit_laplace: est[1],
        ruin_laplace: est[2],
    })
}

/// Bins of width `-lower / bins` covering `[lower, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub lower: f64,
    pub bins: usize,
}

/// Discounted density estimate of `X_{T_0^-}` on `{T_0^- < τ_b^+}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<McEstimate>,
}

/// Arguments of the functionals evaluated at the first negative inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T0Request {
    pub q: f64,
    pub p: f64,
    pub z: f64,
    pub histogram: Option<HistogramSpec>,
}

impl T0Request {
    pub fn new(q: f64) -> Self {
        Self {
            q,
            p: 0.0,
            z: 1.0,
            histogram: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct T0Estimates {
    /// `E[e^{-q T_0^-}; T_0^- < τ_b^+]`.
    pub ruin_laplace: McEstimate,
    /// `E[e^{-q τ_b^+}; τ_b^+ < T_0^-]`.
    pub exit_laplace: McEstimate,
    /// `E[e^{-q T_0^-} W_p(X_{T_0^-} + z); T_0^- < τ_b^+]`.
    pub w_functional: McEstimate,
    /// `E[e^{-q T_0^-} Λ(X_{T_0^-}, r); T_0^- < τ_b^+]`.
    pub lambda_functional: McEstimate,
    /// `E[e^{-q T_0^-} Λ^{(q)}(X_{T_0^-}, r); T_0^- < τ_b^+]`.
    pub lambda_q_functional: McEstimate,
    pub histogram: Option<Histogram>,
}

/// Functionals at `T_0^-`, the first Poisson inspection that finds the surplus negative.
///
/// `Λ^{(q)}(y, r) = e^{q r} E_y[e^{-q τ_0^+}; τ_0^+ < r]` for `y <= 0`, so
/// both `Λ` functionals are estimated by continuing each path from
/// `X_{T_0^-}` until it recovers or `r` elapses.
pub fn simulate_t0_functionals(cfg: &SimConfig, req: &T0Request) -> Result<T0Estimates> {
    cfg.validate()?;
    let T0Request { q, p, z, histogram } = *req;
    require_non_negative("q", q)?;
    require_non_negative("p", p)?;
    require_finite("z", z)?;
    if let Some(h) = histogram {
        if !(h.lower < 0.0 && h.lower.is_finite()) || h.bins == 0 {
            return Err(invalid("histogram", "needs lower < 0 and at least one bin"));
        }
    }
    let wp = ScaleEvaluator::new(cfg.model, p)?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted_with_escape();
    let bins = histogram.map_or(0, |h| h.bins);
    let width = histogram.map_or(1.0, |h| -h.lower / h.bins as f64);
    let r = cfg.r;
    let est = run(cfg, 5 + bins, |rng, v| match engine.inspect(rng, 0.0, x0, cfg.lambda, &bounds) {
        Inspected::Negative { t, x } => {
            let d = (-q * t).exp();
            v[0] = d;
            v[2] = d * wp.w(x + z);
            if let Some(s) = engine.recover(rng, x, r) {
                v[3] = d;
                v[4] = d * (q * (r - s)).exp();
            }
            if let Some(h) = histogram {
                let k = ((x - h.lower) / width).floor();
                if k >= 0.0 && (k as usize) < bins {
                    v[5 + k as usize] = d / width;
                }
            }
            false
        }
        Inspected::Exit { t } => {
            v[1] = (-q * t).exp();
            false
        }
        Inspected::Escape => false,
        Inspected::Truncated => true,
    });
    let histogram = histogram.map(|h| Histogram {
        edges: (0..=h.bins).map(|k| h.lower + k as f64 * width).collect(),
        density: est[5..].to_vec(),
    });
    Ok(T0Estimates {
        ruin_laplace: est[0],
        exit_laplace: est[1],
        w_functional: est[2],
        lambda_functional: est[3],
        lambda_q_functional: est[4],
        histogram,
    })
}

/// `P(κ_r < τ_b^+ ∧ T_max)` for the excursion-clock Parisian time `κ_r`.
pub fn simulate_classical_parisian(cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted_with_escape();
    let est = run(cfg, 1, |rng, v| match engine.parisian(rng, x0, cfg.r, None, &bounds) {
        Stopped::Ruin => {
            v[0] = 1.0;
            false
        }
        Stopped::Truncated => true,
        _ => false,
    });
    Ok(est[0])
}

/// `E[e^{-p τ_b^+}; τ_b^+ < κ_r^λ]` with `κ_r^λ = T_0^- ∧ κ_r`.
pub fn simulate_mixed_exit(cfg: &SimConfig, p: f64) -> Result<McEstimate> {
    cfg.validate()?;
    cfg.require_upper()?;
    require_non_negative("p", p)?;
    let engine = Engine::new(&cfg.model);
    let (x0, bounds) = cfg.shifted();
    let est = run(cfg, 1, |rng, v| match engine.parisian(rng, x0, cfg.r, Some(cfg.lambda), &bounds) {
        Stopped::Exit { t } => {
            v[0] = (-p * t).exp();
            false
        }
        Stopped::Truncated => true,
        _ => false,
    });
    Ok(est[0])
}

/// `E_x[e^{-q τ_0^+}; τ_0^+ < r]` for `x0 <= a`.
pub fn simulate_creeping(cfg: &SimConfig, q: f64) -> Result<McEstimate> {
    cfg.validate()?;
    require_non_negative("q", q)?;
    let (x0, _) = cfg.shifted();
    if x0 > 0.0 {
        return Err(invalid("x0", format!("must not exceed the recovery barrier {}, got {}", cfg.a, cfg.x0)));
    }
    let engine = Engine::new(&cfg.model);
    let est = run(cfg, 1, |rng, v| {
        if x0 == 0.0 {
            v[0] = 1.0;
        } else if let Some(s) = engine.recover(rng, x0, cfg.r) {
            v[0] = (-q * s).exp();
        }
        false
    });
    Ok(est[0])
}

/// `E_x[e^{-q τ_a^-} W_p(X_{τ_a^-} + z); τ_a^- < τ_b^+]` under continuous monitoring.
///
/// Only the Cramér–Lundberg model is supported; Brownian paths creep
/// downward, which makes the functional a plain two-sided exit transform.
pub fn simulate_classical_exit(cfg: &SimConfig, p: f64, q: f64, a_low: f64, z: f64) -> Result<McEstimate> {
    cfg.validate()?;
    let b = cfg.require_upper()?;
    require_non_negative("p", p)?;
    require_non_negative("q", q)?;
    require_finite("a_low", a_low)?;
    require_finite("z", z)?;
    if cfg.x0 < a_low {
        return Err(invalid("x0", format!("must be at least a_low = {a_low}, got {}", cfg.x0)));
    }
    let LevyModel::CramerLundberg { c, eta, mu } = cfg.model else {
        return Err(Error::Unsupported("continuous two-sided exit is simulated for the Cramér–Lundberg model only"));
    };
    let engine = CramerLundberg { c, eta, mu };
    let wp = ScaleEvaluator::new(cfg.model, p)?;
    let est = run(cfg, 1, |rng, v| match engine.two_sided(rng, cfg.x0, a_low, b, cfg.horizon) {
        Classical::Below { t, x } => {
            v[0] = (-q * t).exp() * wp.w(x + z);
            false
        }
        Classical::Above => false,
        Classical::Truncated => true,
    });
    Ok(est[0])
}
