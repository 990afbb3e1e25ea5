//! Seeded sampling of full-grid threads and their flow increments.
//!
//! A thread is one outcome of the global grid space; its cells are
//! independent by construction, so a draw samples each adjacent cell from
//! its interval measure and every increment `X(u,v)` is then computed by
//! applying the global connecting morphism. Rows therefore satisfy the flow
//! composition law exactly; only the empirical frequencies are statistical.
//!
//! The generator is ChaCha8 seeded from a user integer; the algorithm
//! identifier is recorded in the output header so trajectories are bit-exact
//! within this implementation. Cell outcomes are drawn by exact inverse CDF
//! over a common denominator, so the sampled law matches the rational
//! weights exactly.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convsys::ConvolutionSystem;
use crate::error::Error;
use crate::finprob::{rat_to_string, FinProbSpace, ProductShape, Rat};
use crate::order::{full_grid, Partition};
use crate::projective::build_x;

pub const SAMPLER_ALGORITHM: &str = "chacha8";

/// Exact categorical sampler: outcome `i` has probability `num[i] / total`.
struct ExactSampler {
    cumulative: Vec<u64>,
    total: u64,
}

impl ExactSampler {
    fn for_space(space: &FinProbSpace) -> Result<Self, Error> {
        let mut lcm: u64 = 1;
        for w in space.weights() {
            let d = w
                .denom()
                .to_u64()
                .ok_or_else(|| Error::Prob("weight denominator exceeds u64".into()))?;
            lcm = num_integer::lcm(lcm, d);
        }
        let mut cumulative = Vec::with_capacity(space.len());
        let mut acc: u64 = 0;
        for w in space.weights() {
            let num = (w * Rat::from_integer(lcm.into()))
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::Prob("weight numerator exceeds u64".into()))?;
            acc = acc
                .checked_add(num)
                .ok_or_else(|| Error::Prob("weight scale exceeds u64".into()))?;
            cumulative.push(acc);
        }
        Ok(ExactSampler {
            cumulative,
            total: lcm,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u = rng.gen_range(0..self.total);
        self.cumulative.partition_point(|&c| c <= u)
    }
}

/// Empirical-versus-exact comparison of one increment's law.
#[derive(Debug, Clone)]
pub struct SampleSummary {
    /// Window endpoints as labels.
    pub from: String,
    pub to: String,
    /// Outcome labels of the increment space.
    pub outcomes: Vec<String>,
    pub counts: Vec<u64>,
    pub exact: Vec<Rat>,
    pub n: u64,
}

impl SampleSummary {
    pub fn empirical(&self, idx: usize) -> f64 {
        self.counts[idx] as f64 / self.n as f64
    }
}

/// Output of one sampling run: the trajectory table as CSV text (with the
/// sampler identity in `#` header lines and the summary in `#` trailer
/// lines) plus the structured summary.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub csv: String,
    pub summary: SampleSummary,
}

/// Draws `n` independent full-grid threads and tabulates every increment.
/// The summary compares the empirical law of `X(s,t)` with the exact one.
pub fn sample_trajectories(
    sys: &Arc<ConvolutionSystem>,
    s: usize,
    t: usize,
    n: u64,
    seed: u64,
) -> Result<SampleRun, Error> {
    if n < 1 {
        return Err(Error::System("sample count must be at least 1".into()));
    }
    let times = sys.times();
    if s >= t || t >= times.len() {
        return Err(Error::Order("sample window endpoints out of order".into()));
    }
    let last = times.len() - 1;
    let top = full_grid(times, 0, last);
    let base = sys.partition_space(&top);
    let cells: Vec<(usize, usize)> = top.cells().collect();
    let shape = ProductShape::new(cells.iter().map(|&(a, b)| sys.space(a, b).len()).collect());

    let samplers = cells
        .iter()
        .map(|&(a, b)| ExactSampler::for_space(sys.space(a, b)))
        .collect::<Result<Vec<_>, _>>()?;

    // Increments over every window, in column order.
    let mut windows = Vec::new();
    let mut increments = Vec::new();
    for u in 0..times.len() {
        for v in u + 1..times.len() {
            let w = Partition::new(times, vec![u, v])?;
            increments.push(build_x(&w, &top, sys)?);
            windows.push((u, v));
        }
    }
    let summary_col = windows
        .iter()
        .position(|&(u, v)| (u, v) == (s, t))
        .expect("summary window is enumerated");

    let mut csv = String::new();
    writeln!(csv, "# sampler: {SAMPLER_ALGORITHM}, seed: {seed}, n: {n}").unwrap();
    let mut header = vec!["thread_index".to_string()];
    for &(a, b) in &cells {
        header.push(format!("cell({},{})", times.label(a), times.label(b)));
    }
    for &(u, v) in &windows {
        header.push(format!("X({},{})", times.label(u), times.label(v)));
    }
    writeln!(csv, "{}", header.join(", ")).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; increments[summary_col].codomain().len()];
    let mut coords = vec![0usize; cells.len()];
    for _ in 0..n {
        for (k, sampler) in samplers.iter().enumerate() {
            coords[k] = sampler.draw(&mut rng);
        }
        let x = shape.encode(&coords);
        let mut row = vec![x.to_string()];
        for (k, &(a, b)) in cells.iter().enumerate() {
            row.push(sys.space(a, b).outcome(coords[k]).to_string());
        }
        for (col, inc) in increments.iter().enumerate() {
            let y = inc.apply(x);
            if col == summary_col {
                counts[y] += 1;
            }
            row.push(inc.codomain().outcome(y).to_string());
        }
        writeln!(csv, "{}", row.join(", ")).unwrap();
    }

    let exact: Vec<Rat> = {
        let inc = &increments[summary_col];
        crate::finprob::pushforward(inc.map(), &base, inc.codomain().len())
    };
    let summary = SampleSummary {
        from: times.label(s).to_string(),
        to: times.label(t).to_string(),
        outcomes: increments[summary_col].codomain().outcomes().to_vec(),
        counts,
        exact,
        n,
    };

    writeln!(csv, "# summary: law of X({},{})", summary.from, summary.to).unwrap();
    writeln!(csv, "# outcome, count, empirical, exact").unwrap();
    for (i, o) in summary.outcomes.iter().enumerate() {
        writeln!(
            csv,
            "# {o}, {}, {}/{}, {}",
            summary.counts[i],
            summary.counts[i],
            n,
            rat_to_string(&summary.exact[i])
        )
        .unwrap();
    }

    Ok(SampleRun { csv, summary })
}
