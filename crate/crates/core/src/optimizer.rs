//! Girth-maximizing search over circulant shifts with a compact genetic
//! algorithm, and the keyed `(N, R, seed)` code construction built on it.
//!
//! The genome is the concatenation of one `bits_per_shift`-bit field per
//! protograph edge copy (most significant bit first). Values are reduced
//! modulo the lifting order, and parallel edges that land on the same shift
//! are repaired by stepping the later shift forward until it is free.
//!
//! Fitness is `(girth, -count of shortest cycles)` compared lexicographically,
//! with girth capped at [`CgaParams::girth_cap`].

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::protograph::{
    additional_nodes_for_rate, extend_for_rate, family_rate, lift, lifting_order, LiftingOrder,
    ProtoMatrix, QcParityCheck, RateFamily, ShiftAssignment,
};
use crate::tanner::{self, CirculantGraph, Girth, Scratch, TannerGraph};
use crate::{Error, Rate, Result};

/// Control parameters of the compact GA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgaParams {
    /// Virtual population size `n`; probabilities move in steps of `1/n`.
    pub virtual_population: u32,
    /// Total fitness evaluations across all restarts.
    pub max_evaluations: usize,
    /// Bits per shift; `None` means `ceil(log2 v)`.
    pub bits_per_shift: Option<u32>,
    pub restarts: usize,
    /// Girth values above this are treated as equal.
    pub girth_cap: u32,
    pub seed: u64,
    /// Initial probabilities are drawn from `0.5 ± k/n` with `k` uniform in
    /// `0..=init_perturbation`. Zero starts every bit at exactly 0.5.
    pub init_perturbation: u32,
    /// Evaluation budget for re-optimizing a truncated code in
    /// [`construct`]. Truncation breaks the circulant symmetry, so each
    /// evaluation searches from every variable node.
    pub reoptimize_evaluations: usize,
    /// Stop as soon as this girth is reached; fail if it never is.
    pub girth_target: Option<u32>,
}

impl Default for CgaParams {
    fn default() -> Self {
        CgaParams {
            virtual_population: 255,
            max_evaluations: 200_000,
            bits_per_shift: None,
            restarts: 4,
            girth_cap: tanner::DEFAULT_MAX_LEN,
            seed: 0,
            init_perturbation: 0,
            reoptimize_evaluations: 4_000,
            girth_target: None,
        }
    }
}

impl CgaParams {
    fn validate(&self) -> Result<()> {
        if self.virtual_population < 2 {
            return Err(Error::InvalidInput("virtual population must be at least 2".to_string()));
        }
        if self.max_evaluations < 2 {
            return Err(Error::InvalidInput("evaluation budget must be at least 2".to_string()));
        }
        if self.girth_cap < 4 {
            return Err(Error::InvalidInput("girth cap must be at least 4".to_string()));
        }
        Ok(())
    }
}

/// Ordered by girth first, then by fewer shortest cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fitness {
    pub girth: u32,
    pub neg_multiplicity: i64,
}

impl Fitness {
    fn new(girth: Girth, multiplicity: u64) -> Self {
        Fitness {
            girth: girth.rank(),
            neg_multiplicity: -(multiplicity.min(i64::MAX as u64) as i64),
        }
    }

    pub fn multiplicity(&self) -> u64 {
        self.neg_multiplicity.unsigned_abs()
    }
}

/// One fitness evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalRecord {
    pub index: usize,
    pub girth: Girth,
    pub multiplicity: u64,
    /// Best fitness over evaluations `0..=index`.
    pub best: Fitness,
}

/// Probability vector of a compact GA, kept as exact integer counters.
///
/// Component `i` is `counts[i] / (2n)`; it starts at `n` (probability 0.5)
/// and moves by 2 (probability `1/n`). A move that would leave `[0, 1]` is
/// dropped, so every change is exactly `1/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityVector {
    population: u32,
    counts: Vec<u32>,
}

impl ProbabilityVector {
    pub fn new(len: usize, population: u32) -> Self {
        ProbabilityVector {
            population,
            counts: vec![population; len],
        }
    }

    /// Starts each component at `0.5 ± k/n`, `k` uniform in `0..=spread`.
    pub fn perturbed<R: Rng + ?Sized>(len: usize, population: u32, spread: u32, rng: &mut R) -> Self {
        let mut pv = Self::new(len, population);
        if spread > 0 {
            let top = 2 * population;
            for c in &mut pv.counts {
                let k = 2 * rng.random_range(0..=spread);
                *c = if rng.random::<bool>() {
                    (*c + k).min(top - (top - *c) % 2)
                } else {
                    c.saturating_sub(k).max(*c % 2)
                };
            }
        }
        pv
    }

    /// Starts each component at 3/4 or 1/4, leaning toward `genome`.
    pub fn leaning_toward(genome: &[bool], population: u32) -> Self {
        let (hi, lo) = (population + population / 2, population / 2);
        ProbabilityVector {
            population,
            counts: genome.iter().map(|&b| if b { hi } else { lo }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.counts[i] as f64 / (2 * self.population) as f64
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.probability(i)).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [bool]) {
        let top = 2 * self.population;
        for (bit, &c) in out.iter_mut().zip(&self.counts) {
            *bit = rng.random_range(0..top) < c;
        }
    }

    /// Moves every component where `winner` and `loser` differ one step
    /// toward the winner.
    pub fn update(&mut self, winner: &[bool], loser: &[bool]) {
        let top = 2 * self.population;
        for ((c, &w), &l) in self.counts.iter_mut().zip(winner).zip(loser) {
            if w != l {
                if w {
                    if *c + 2 <= top {
                        *c += 2;
                    }
                } else if *c >= 2 {
                    *c -= 2;
                }
            }
        }
    }

    /// Every component is within one step of 0 or 1.
    pub fn is_converged(&self) -> bool {
        let top = 2 * self.population;
        self.counts.iter().all(|&c| c < 2 || c + 2 > top)
    }
}

/// Which edge copies the genome controls and how they group into cells.
struct Layout {
    lifting: usize,
    bits_per_shift: u32,
    /// Contiguous edge-copy ranges, one per non-empty cell.
    cells: Vec<Range<usize>>,
    /// Edge copies encoded in the genome, in genome order.
    active: Vec<usize>,
}

impl Layout {
    fn new(p: &ProtoMatrix, v: usize, params: &CgaParams, active_cols: usize) -> Result<Self> {
        let mut cells = Vec::new();
        let mut active = Vec::new();
        let mut start = 0;
        for r in 0..p.rows() {
            for c in 0..p.cols() {
                let m = p.mult(r, c) as usize;
                if m > v {
                    return Err(Error::ConstructionFailure(format!(
                        "cell ({r}, {c}) needs {m} distinct shifts but v = {v}"
                    )));
                }
                if m > 0 {
                    cells.push(start..start + m);
                    if c < active_cols {
                        active.extend(start..start + m);
                    }
                }
                start += m;
            }
        }
        let bits_per_shift = params
            .bits_per_shift
            .unwrap_or_else(|| usize::BITS - (v - 1).leading_zeros());
        Ok(Layout {
            lifting: v,
            bits_per_shift,
            cells,
            active,
        })
    }

    fn genome_len(&self) -> usize {
        self.active.len() * self.bits_per_shift as usize
    }

    fn decode(&self, genome: &[bool], base: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(base);
        let bps = self.bits_per_shift as usize;
        for (g, &e) in self.active.iter().enumerate() {
            let value = genome[g * bps..(g + 1) * bps]
                .iter()
                .fold(0usize, |acc, &b| (acc << 1) | b as usize);
            out[e] = (value % self.lifting) as u32;
        }
        self.repair(out);
    }

    fn encode(&self, shifts: &[u32]) -> Vec<bool> {
        let bps = self.bits_per_shift;
        self.active
            .iter()
            .flat_map(|&e| (0..bps).rev().map(move |b| (shifts[e] >> b) & 1 == 1))
            .collect()
    }

    fn repair(&self, shifts: &mut [u32]) {
        let v = self.lifting as u32;
        for cell in &self.cells {
            for k in cell.clone() {
                while shifts[cell.start..k].contains(&shifts[k]) {
                    shifts[k] = (shifts[k] + 1) % v;
                }
            }
        }
    }
}

fn to_assignment(p: &ProtoMatrix, v: usize, shifts: &[u32]) -> ShiftAssignment {
    let mut it = shifts.iter().copied();
    let cells = (0..p.rows())
        .flat_map(|r| (0..p.cols()).map(move |c| (r, c)))
        .map(|(r, c)| it.by_ref().take(p.mult(r, c) as usize).collect())
        .collect();
    ShiftAssignment::from_shifts(v, p.cols(), cells)
}

fn from_assignment(p: &ProtoMatrix, s: &ShiftAssignment) -> Result<Vec<u32>> {
    let mut out = Vec::with_capacity(p.edge_count());
    for r in 0..p.rows() {
        for c in 0..p.cols() {
            out.extend(s.shifts(r, c).ok_or_else(|| {
                Error::UnsupportedStructure("explicit permutations cannot be re-optimized".to_string())
            })?);
        }
    }
    Ok(out)
}

struct Outcome {
    shifts: Vec<u32>,
    fitness: Fitness,
    log: Vec<EvalRecord>,
}

/// The compact GA loop shared by fresh construction and re-optimization.
/// `base` is evaluated first and seeds the best-ever record. With `lean`,
/// every restart starts biased toward `base` instead of at 1/2.
fn run_cga(
    layout: &Layout,
    base: &[u32],
    lean: bool,
    params: &CgaParams,
    mut evaluate: impl FnMut(&[u32]) -> (Girth, u64),
) -> Result<Outcome> {
    params.validate()?;
    let mut log = Vec::new();
    let mut best_shifts = base.to_vec();
    layout.repair(&mut best_shifts);
    let (g0, m0) = evaluate(&best_shifts);
    let mut best = Fitness::new(g0, m0);
    log.push(EvalRecord {
        index: 0,
        girth: g0,
        multiplicity: m0,
        best,
    });
    let reached = |f: &Fitness| params.girth_target.is_some_and(|t| f.girth >= t);

    let len = layout.genome_len();
    if len > 0 && !reached(&best) {
        let restarts = params.restarts.max(1);
        let per_restart = ((params.max_evaluations - 1) / restarts).max(2);
        let mut a = vec![false; len];
        let mut b = vec![false; len];
        let mut sa = Vec::with_capacity(base.len());
        let mut sb = Vec::with_capacity(base.len());
        'restarts: for restart in 0..restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(restart as u64);
            let mut pv = if lean {
                ProbabilityVector::leaning_toward(&layout.encode(&best_shifts), params.virtual_population)
            } else {
                ProbabilityVector::perturbed(
                    len,
                    params.virtual_population,
                    params.init_perturbation,
                    &mut rng,
                )
            };
            let stop = (log.len() + per_restart).min(params.max_evaluations);
            while log.len() + 2 <= stop {
                pv.sample(&mut rng, &mut a);
                pv.sample(&mut rng, &mut b);
                layout.decode(&a, base, &mut sa);
                layout.decode(&b, base, &mut sb);
                let mut scores = [Fitness::new(Girth::Acyclic, 0); 2];
                for (slot, shifts) in [&sa, &sb].into_iter().enumerate() {
                    let (g, m) = evaluate(shifts);
                    let f = Fitness::new(g, m);
                    scores[slot] = f;
                    if f > best {
                        best = f;
                        best_shifts.clone_from(shifts);
                    }
                    log.push(EvalRecord {
                        index: log.len(),
                        girth: g,
                        multiplicity: m,
                        best,
                    });
                }
                if scores[0] >= scores[1] {
                    pv.update(&a, &b);
                } else {
                    pv.update(&b, &a);
                }
                if reached(&best) {
                    break 'restarts;
                }
                if pv.is_converged() {
                    break;
                }
            }
        }
    }
    if let Some(target) = params.girth_target {
        if best.girth < target {
            return Err(Error::ConstructionFailure(format!(
                "best girth {} is below the target {target}",
                best.girth
            )));
        }
    }
    Ok(Outcome {
        shifts: best_shifts,
        fitness: best,
        log,
    })
}

fn circulant_evaluator(
    p: &ProtoMatrix,
    v: usize,
    n_live: usize,
    cap: u32,
) -> impl FnMut(&[u32]) -> (Girth, u64) {
    let mut graph = CirculantGraph::new(p, v);
    graph.set_live(n_live);
    let mut scratch = Scratch::default();
    move |shifts| {
        graph.set_shifts(shifts);
        match graph.search(cap & !1, &mut scratch) {
            Some((g, m)) => (Girth::Cycle(g), m),
            None => (Girth::AtLeast((cap & !1) + 2), 0),
        }
    }
}

/// Result of [`optimize_shifts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimized {
    pub shifts: ShiftAssignment,
    pub fitness: Fitness,
    /// Every evaluation in order; entry 0 is the all-zero baseline.
    pub log: Vec<EvalRecord>,
}

/// Searches circulant shifts of `p` at lifting order `v` for the largest
/// girth. Deterministic in `(p, v, params)`.
pub fn optimize_shifts(p: &ProtoMatrix, v: usize, params: &CgaParams) -> Result<Optimized> {
    if v < 2 {
        return Err(Error::InvalidInput(format!("lifting order {v} is below 2")));
    }
    let layout = Layout::new(p, v, params, p.cols())?;
    let base = vec![0u32; p.edge_count()];
    let out = run_cga(&layout, &base, false, params, circulant_evaluator(p, v, p.cols() * v, params.girth_cap))?;
    Ok(Optimized {
        shifts: to_assignment(p, v, &out.shifts),
        fitness: out.fitness,
        log: out.log,
    })
}

/// The parameters two parties share to build the same code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    /// Target transmitted block length in bits.
    pub n: usize,
    pub rate: Rate,
    pub seed: u64,
    pub girth_target: Option<u32>,
}

/// A constructed code together with its search record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub code: QcParityCheck,
    pub fitness: Fitness,
    pub log: Vec<EvalRecord>,
}

/// Builds the parity-check matrix for `spec`.
///
/// Rates of the form `(n+1)/(n+3)` use the appended protograph directly at
/// lifting order `floor(N / (n+3))`. Other rates start from the next family
/// member above the target (or the rate-1/3 core below 1/3), lifted so that
/// the truncated code has about `N` transmitted bits, and then truncate and
/// re-optimize.
pub fn construct(spec: &CodeSpec, params: &CgaParams) -> Result<Construction> {
    let rate = spec.rate;
    if !rate.is_proper() {
        return Err(Error::InvalidSpec(format!("rate {rate} is not in (0, 1)")));
    }
    let params = CgaParams {
        seed: spec.seed,
        girth_target: spec.girth_target.or(params.girth_target),
        ..params.clone()
    };
    let family = RateFamily::ar4ja()?;
    let in_family = additional_nodes_for_rate(rate)
        .ok()
        .filter(|&n_r| family_rate(n_r) == rate);

    if let Some(n_r) = in_family {
        let p = extend_for_rate(&family, rate)?;
        let LiftingOrder { v, .. } = lifting_order(spec.n, n_r)
            .map_err(|e| Error::InvalidSpec(format!("{e}")))?;
        if v < 2 || spec.n < p.cols() {
            return Err(Error::InvalidSpec(format!(
                "block length {} is too short for rate {rate}",
                spec.n
            )));
        }
        let opt = optimize_shifts(&p, v, &params)?;
        return Ok(Construction {
            code: lift(&p, &opt.shifts)?,
            fitness: opt.fitness,
            log: opt.log,
        });
    }

    let n_src = if rate < Rate::new(1, 3) {
        0
    } else {
        additional_nodes_for_rate(rate)? + 1
    };
    let p = family.with_additional_nodes(n_src)?;
    // The family sends 2v parity bits, so the truncated length is 2v / (1 - R).
    let (num, den) = (rate.numer() as u128, rate.denom() as u128);
    let v = (spec.n as u128 * (den - num) / (2 * den)) as usize;
    if v < 2 || spec.n < p.cols() {
        return Err(Error::InvalidSpec(format!(
            "block length {} is too short for rate {rate}",
            spec.n
        )));
    }
    let source_params = CgaParams {
        girth_target: None,
        ..params.clone()
    };
    let opt = optimize_shifts(&p, v, &source_params)?;
    let source = lift(&p, &opt.shifts)?;
    let reopt = CgaParams {
        max_evaluations: params.reoptimize_evaluations,
        ..params
    };
    truncate_and_reoptimize(&source, rate, &reopt)
}

/// Removes trailing information columns of `h` (one lifted column at a time)
/// until its rate is as close as possible to `target`, then re-runs the
/// compact GA over the shifts of every block column that still has columns,
/// starting from the current shifts. Uses `params.max_evaluations`.
pub fn truncate_and_reoptimize(
    h: &QcParityCheck,
    target: Rate,
    params: &CgaParams,
) -> Result<Construction> {
    let source = h.rate();
    let cap = params.girth_cap;
    let explicit_eval = |code: &QcParityCheck| -> Result<(Girth, u64)> {
        let r = tanner::girth_capped(&TannerGraph::from_parity_check(code.matrix()), cap)?;
        Ok((r.girth, r.multiplicity))
    };
    if target == source {
        let (g, m) = explicit_eval(h)?;
        return Ok(Construction {
            code: h.clone(),
            fitness: Fitness::new(g, m),
            log: Vec::new(),
        });
    }
    if target.numer() == 0 || target > source {
        return Err(Error::UnsupportedRate(target));
    }
    // Nearest t with (K - t) / (N - t) = p / q, i.e. t = (qK - pN) / (q - p).
    let (p_, q_) = (target.numer() as u128, target.denom() as u128);
    let (k, n) = (h.k() as u128, h.n_tx() as u128);
    let num = q_ * k - p_ * n;
    let den = q_ - p_;
    let t = ((2 * num + den) / (2 * den)) as usize;
    if t == 0 {
        let (g, m) = explicit_eval(h)?;
        return Ok(Construction {
            code: h.clone(),
            fitness: Fitness::new(g, m),
            log: Vec::new(),
        });
    }
    if t >= h.info_cols() {
        return Err(Error::UnsupportedRate(target));
    }
    let truncated = h.truncate(t)?;
    if truncated.matrix().rows().iter().any(Vec::is_empty) {
        return Err(Error::UnsupportedRate(target));
    }

    let p = h.proto();
    let v = h.lifting();
    let live_cols = truncated.n_total().div_ceil(v);
    let layout = Layout::new(p, v, params, live_cols)?;
    let base = from_assignment(p, h.shifts())?;
    let evaluate = circulant_evaluator(p, v, truncated.n_total(), cap);
    let out = run_cga(&layout, &base, true, params, evaluate)?;
    Ok(Construction {
        code: truncated.relifted(&to_assignment(p, v, &out.shifts))?,
        fitness: out.fitness,
        log: out.log,
    })
}
