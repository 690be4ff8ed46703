//! Monte Carlo BER campaigns over the beamforming channel.
//!
//! A campaign is a flat `key = value` file:
//!
//! ```text
//! code = construct          # or: uncoded, or a path to an .alist / shift table
//! n = 480
//! rate = 1/2
//! code_seed = 7             # construction seed (defaults to `seed`)
//! seed = 1                  # simulation seed
//! m_list = 2,4,6,8,10
//! ebn0_list = -3,-2
//! min_bit_errors = 100
//! min_frame_errors = 30
//! max_frames = 100000
//! max_iter = 50
//! workers = 4
//! out = results.csv
//! ```
//!
//! Frames run in parallel, but their outcomes are folded in frame order and
//! every frame owns a random stream keyed by `(seed, frame)`, so the counts
//! do not depend on the worker count.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use pldpc_core::codec::DEFAULT_MAX_ITER;
use pldpc_core::optimizer::{construct, CgaParams, CodeSpec};
use pldpc_core::protograph::QcParityCheck;
use pldpc_core::sim::{CodedLink, FrameOutcome, Link};
use pldpc_core::sparse::SparseMatrix;
use pldpc_core::Rate;
use rayon::prelude::*;

use crate::formats::{alist, shift_table};
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "code_id,M,ebn0_db,frames,bits,bit_errors,frame_errors,ber,fer,avg_iterations,seed,wall_seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_bit_errors: 100,
            min_frame_errors: 30,
            max_frames: 1_000_000,
        }
    }
}

impl StopRule {
    fn validate(&self) -> Result<()> {
        if self.min_bit_errors == 0 || self.min_frame_errors == 0 || self.max_frames == 0 {
            return Err(Error::Campaign("stop thresholds must be positive".into()));
        }
        Ok(())
    }

    fn done(&self, frames: u64, bit_errors: u64, frame_errors: u64) -> bool {
        frames >= self.max_frames
            || (bit_errors >= self.min_bit_errors && frame_errors >= self.min_frame_errors)
    }
}

/// One measured operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub code_id: String,
    pub nodes: usize,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub avg_iterations: f64,
    pub seed: u64,
    pub wall_seconds: f64,
}

impl BerRecord {
    /// No errors were seen, so `ber` only bounds the true error rate.
    pub fn upper_bound_only(&self) -> bool {
        self.bit_errors == 0
    }

    /// Rough 95% upper bound on the BER when no errors were seen
    /// (`3 / bits`), otherwise the estimate itself.
    pub fn ber_bound(&self) -> f64 {
        if self.upper_bound_only() {
            3.0 / self.bits.max(1) as f64
        } else {
            self.ber
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6e},{:.6e},{:.3},{},{:.3}",
            self.code_id,
            self.nodes,
            self.ebn0_db,
            self.frames,
            self.bits,
            self.bit_errors,
            self.frame_errors,
            self.ber,
            self.fer,
            self.avg_iterations,
            self.seed,
            self.wall_seconds
        )
    }
}

/// A link and the name it is reported under.
#[derive(Debug, Clone)]
pub struct CodeUnderTest {
    pub id: String,
    pub link: Link,
}

impl CodeUnderTest {
    pub fn uncoded() -> Self {
        CodeUnderTest {
            id: "uncoded".into(),
            link: Link::uncoded(),
        }
    }

    pub fn from_matrix(
        id: impl Into<String>,
        h: &SparseMatrix,
        punctured: &[usize],
        max_iter: usize,
    ) -> Result<Self> {
        Ok(CodeUnderTest {
            id: id.into(),
            link: Link::coded(CodedLink::new(h, punctured, max_iter)?),
        })
    }

    /// Named `pldpc_<N_tx>_<K>`.
    pub fn from_code(code: &QcParityCheck, max_iter: usize) -> Result<Self> {
        let id = format!("pldpc_{}_{}", code.n_tx(), code.k());
        Self::from_matrix(id, code.matrix(), code.punctured_cols(), max_iter)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Campaign(format!("worker pool: {e}")))
}

/// Runs frames until the stop rule fires. `workers = 0` uses every core.
pub fn run_point(
    code: &CodeUnderTest,
    nodes: usize,
    ebn0_db: f64,
    stop: &StopRule,
    seed: u64,
    workers: usize,
) -> Result<BerRecord> {
    stop.validate()?;
    let pool = pool(workers)?;
    let chunk = 16 * pool.current_num_threads() as u64;
    let start = Instant::now();
    let (mut frames, mut bits, mut bit_errors, mut frame_errors, mut iterations) = (0u64, 0, 0, 0, 0);
    'run: while !stop.done(frames, bit_errors, frame_errors) {
        let end = (frames + chunk).min(stop.max_frames);
        let outcomes: Vec<FrameOutcome> = pool.install(|| {
            (frames..end)
                .into_par_iter()
                .map(|f| code.link.run_frame(nodes, ebn0_db, seed, f))
                .collect::<pldpc_core::Result<_>>()
        })?;
        for o in outcomes {
            frames += 1;
            bits += o.bits;
            bit_errors += o.bit_errors;
            frame_errors += o.frame_error() as u64;
            iterations += o.iterations;
            if stop.done(frames, bit_errors, frame_errors) {
                break 'run;
            }
        }
    }
    let record = BerRecord {
        code_id: code.id.clone(),
        nodes,
        ebn0_db,
        frames,
        bits,
        bit_errors,
        frame_errors,
        ber: bit_errors as f64 / bits.max(1) as f64,
        fer: frame_errors as f64 / frames.max(1) as f64,
        avg_iterations: iterations as f64 / frames.max(1) as f64,
        seed,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    if record.upper_bound_only() {
        log::warn!(
            "{} M={nodes} {ebn0_db} dB: no errors in {bits} bits, BER is an upper bound only",
            code.id
        );
    }
    Ok(record)
}

/// Where the code under test comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeSource {
    Uncoded,
    Construct(CodeSpec),
    Alist(PathBuf),
    ShiftTable(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub code: CodeSource,
    pub nodes: Vec<usize>,
    pub ebn0_db: Vec<f64>,
    pub stop: StopRule,
    pub max_iter: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Campaign(format!("{key}: bad value {s:?}"))))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Campaign(format!("{key} is empty")));
    }
    Ok(items)
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Campaign(format!("{key}: bad value {value:?}")))
}

impl Campaign {
    /// Parses a campaign file. Relative code and output paths resolve
    /// against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut code = None;
        let (mut n, mut rate, mut code_seed, mut girth_target) = (None, None, None, None);
        let mut nodes = None;
        let mut ebn0 = None;
        let mut stop = StopRule::default();
        let mut max_iter = DEFAULT_MAX_ITER;
        let mut seed = 0;
        let mut workers = 0;
        let mut out = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Campaign(format!("line {}: expected key = value", i + 1)))?;
            match key {
                "code" => code = Some(value.to_string()),
                "n" => n = Some(scalar::<usize>(key, value)?),
                "rate" => rate = Some(scalar::<Rate>(key, value)?),
                "code_seed" => code_seed = Some(scalar(key, value)?),
                "girth_target" => girth_target = Some(scalar(key, value)?),
                "seed" => seed = scalar(key, value)?,
                "m_list" => nodes = Some(list::<usize>(key, value)?),
                "ebn0_list" => ebn0 = Some(list::<f64>(key, value)?),
                "min_bit_errors" => stop.min_bit_errors = scalar(key, value)?,
                "min_frame_errors" => stop.min_frame_errors = scalar(key, value)?,
                "max_frames" => stop.max_frames = scalar(key, value)?,
                "max_iter" => max_iter = scalar(key, value)?,
                "workers" => workers = scalar(key, value)?,
                "out" => out = Some(base_dir.join(value)),
                _ => return Err(Error::Campaign(format!("line {}: unknown key {key:?}", i + 1))),
            }
        }
        let code = match code.as_deref() {
            None => return Err(Error::Campaign("missing `code`".into())),
            Some("uncoded") => CodeSource::Uncoded,
            Some("construct") => CodeSource::Construct(CodeSpec {
                n: n.ok_or_else(|| Error::Campaign("code = construct needs `n`".into()))?,
                rate: rate.ok_or_else(|| Error::Campaign("code = construct needs `rate`".into()))?,
                seed: code_seed.unwrap_or(seed),
                girth_target,
            }),
            Some(path) if path.ends_with(".alist") => CodeSource::Alist(base_dir.join(path)),
            Some(path) => CodeSource::ShiftTable(base_dir.join(path)),
        };
        let campaign = Campaign {
            code,
            nodes: nodes.ok_or_else(|| Error::Campaign("missing `m_list`".into()))?,
            ebn0_db: ebn0.ok_or_else(|| Error::Campaign("missing `ebn0_list`".into()))?,
            stop,
            max_iter,
            seed,
            workers,
            out,
        };
        campaign.validate()?;
        Ok(campaign)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        self.stop.validate()?;
        if self.nodes.is_empty() || self.ebn0_db.is_empty() {
            return Err(Error::Campaign("sweep lists must be non-empty".into()));
        }
        if self.nodes.contains(&0) {
            return Err(Error::Campaign("node counts must be positive".into()));
        }
        if self.ebn0_db.iter().any(|e| !e.is_finite()) {
            return Err(Error::Campaign("Eb/N0 values must be finite".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Campaign("max_iter must be positive".into()));
        }
        Ok(())
    }

    pub fn build_code(&self) -> Result<CodeUnderTest> {
        match &self.code {
            CodeSource::Uncoded => Ok(CodeUnderTest::uncoded()),
            CodeSource::Construct(spec) => {
                let c = construct(spec, &CgaParams::default())?;
                CodeUnderTest::from_code(&c.code, self.max_iter)
            }
            CodeSource::ShiftTable(path) => {
                CodeUnderTest::from_code(&shift_table::read(path)?, self.max_iter)
            }
            CodeSource::Alist(path) => {
                let h = alist::read(path)?;
                let id = path
                    .file_stem()
                    .map_or_else(|| "alist".into(), |s| s.to_string_lossy().replace(',', "_"));
                CodeUnderTest::from_matrix(id, &h, &[], self.max_iter)
            }
        }
    }
}

/// Point key used to skip rows that an earlier, interrupted run finished.
fn point_key(code_id: &str, nodes: usize, ebn0_db: f64) -> String {
    format!("{code_id},{nodes},{ebn0_db}")
}

fn completed_points(path: &Path) -> Result<(HashSet<String>, Vec<String>)> {
    let mut done = HashSet::new();
    let mut rows = Vec::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((done, rows)),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    match lines.next().transpose().map_err(|e| Error::io(path, e))? {
        None => return Ok((done, rows)),
        Some(h) if h == CSV_HEADER => {}
        Some(_) => {
            return Err(Error::Campaign(format!(
                "{} exists but is not a results file",
                path.display()
            )))
        }
    }
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        let fields: Vec<&str> = line.split(',').collect();
        // A torn final line from an interrupted run is dropped.
        if fields.len() != CSV_HEADER.split(',').count() {
            continue;
        }
        let (Ok(m), Ok(e)) = (fields[1].parse::<usize>(), fields[2].parse::<f64>()) else {
            continue;
        };
        done.insert(point_key(fields[0], m, e));
        rows.push(line);
    }
    Ok((done, rows))
}

/// Sidecar notes describing how the numbers were produced.
fn metadata(c: &Campaign, code: &CodeUnderTest) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "code_id = {}", code.id);
    let _ = writeln!(s, "code_rate = {}", code.link.rate());
    let _ = writeln!(s, "ebn0_convention = energy per information bit; punctured bits are not sent");
    let _ = writeln!(s, "ber_counts = message bits only");
    let _ = writeln!(
        s,
        "stop_rule = {} bit errors and {} frame errors, or {} frames",
        c.stop.min_bit_errors, c.stop.min_frame_errors, c.stop.max_frames
    );
    let _ = writeln!(s, "zero_error_rows = upper bound only (bit_errors = 0)");
    let _ = writeln!(s, "frame_streams = ChaCha8(seed) with stream = frame index");
    let _ = writeln!(s, "max_iter = {}", c.max_iter);
    s
}

/// Runs every `(M, Eb/N0)` point, appending each finished row to `out`
/// (if set) before starting the next. Rows already present in `out` are
/// kept and not re-run.
pub fn run_campaign(c: &Campaign) -> Result<Vec<BerRecord>> {
    c.validate()?;
    let (done, _) = match &c.out {
        Some(path) => completed_points(path)?,
        None => Default::default(),
    };
    let mut sink = match &c.out {
        Some(path) => {
            let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Error::io(path, e))?;
            if fresh {
                writeln!(f, "{CSV_HEADER}").map_err(|e| Error::io(path, e))?;
            }
            Some((path.clone(), f))
        }
        None => None,
    };
    let code = c.build_code()?;
    if let Some((path, _)) = &sink {
        let meta = path.with_extension("meta");
        std::fs::write(&meta, metadata(c, &code)).map_err(|e| Error::io(&meta, e))?;
    }
    let mut records = Vec::new();
    for &m in &c.nodes {
        for &e in &c.ebn0_db {
            if done.contains(&point_key(&code.id, m, e)) {
                log::info!("{} M={m} {e} dB already done", code.id);
                continue;
            }
            let rec = run_point(&code, m, e, &c.stop, c.seed, c.workers)?;
            log::info!(
                "{} M={m} {e} dB: ber {:.3e} ({} errors / {} bits)",
                code.id,
                rec.ber,
                rec.bit_errors,
                rec.bits
            );
            if let Some((path, f)) = &mut sink {
                writeln!(f, "{}", rec.csv_row())
                    .and_then(|_| f.flush())
                    .map_err(|e| Error::io(&*path, e))?;
            }
            records.push(rec);
        }
    }
    Ok(records)
}
