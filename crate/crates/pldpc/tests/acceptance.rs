//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any of them fails.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use pldpc::campaign::{run_point, BerRecord, CodeUnderTest, StopRule};
use pldpc::formats::{alist, shift_table};
use pldpc_core::analytics::{min_nodes, siso_rayleigh_ber, uncoded_dtb_ber};
use pldpc_core::codec::{build_encoder, channel_llr, encode, BpDecoder, LlrVector};
use pldpc_core::optimizer::{construct, CgaParams, CodeSpec};
use pldpc_core::protograph::{lift, ProtoMatrix, QcParityCheck, ShiftAssignment};
use pldpc_core::tanner::{girth, qc_girth, Girth, TannerGraph};
use pldpc_core::Rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Eb/N0 where the asymptotic ten-node BER is 1e-3, found by bisection.
const M10_AT_1E3_DB: f64 = -0.848225601011643;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn simulate(code: &CodeUnderTest, nodes: usize, ebn0_db: f64, stop: StopRule, seed: u64) -> BerRecord {
    run_point(code, nodes, ebn0_db, &stop, seed, 0).expect("simulation")
}

fn analytic_anchor() -> Verdict {
    let ber = uncoded_dtb_ber(28, -3.0);
    let nodes = min_nodes(-3.0, 1e-5);
    verdict(
        (0.8e-5..=1.2e-5).contains(&ber) && nodes == 28,
        format!("BER(28 nodes, -3 dB) = {ber:.4e}, fewest nodes for 1e-5 = {nodes} (want 28)"),
    )
}

fn siso_validation() -> Verdict {
    let stop = StopRule {
        min_bit_errors: 10_000,
        min_frame_errors: 30,
        max_frames: 1_000_000,
    };
    let uncoded = CodeUnderTest::uncoded();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, db) in [5.0, 10.0, 15.0].into_iter().enumerate() {
        let r = simulate(&uncoded, 1, db, stop, 100 + i as u64);
        let exact = siso_rayleigh_ber(db);
        let rel = (r.ber / exact - 1.0).abs();
        pass &= r.bit_errors >= 100 && rel <= 0.05;
        parts.push(format!("{db} dB: {:.4e} vs {exact:.4e} ({:.1}%)", r.ber, 100.0 * rel));
    }
    verdict(pass, parts.join(", "))
}

fn asymptotic_consistency() -> Verdict {
    let stop = StopRule {
        min_bit_errors: 2_000,
        min_frame_errors: 30,
        max_frames: 1_000_000,
    };
    let r = simulate(&CodeUnderTest::uncoded(), 10, M10_AT_1E3_DB, stop, 200);
    let ratio = r.ber / 1e-3;
    verdict(
        r.bit_errors >= 100 && (1.0 / 1.3..=1.3).contains(&ratio),
        format!("10 nodes at {M10_AT_1E3_DB:.3} dB: BER {:.4e} ({} errors)", r.ber, r.bit_errors),
    )
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pldpc")
}

fn construct_cli(prefix: &Path) -> std::process::Output {
    Command::new(bin())
        .args(["construct", "--n", "480", "--rate", "1/2", "--seed", "0", "--out-prefix"])
        .arg(prefix)
        .output()
        .expect("run pldpc")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Every `v x v` block of `h` is the sum of the circulants its shifts name.
fn blocks_are_circulant(h: &QcParityCheck) -> bool {
    let (p, v, m) = (h.proto(), h.lifting(), h.matrix());
    (0..p.rows()).all(|r| {
        (0..p.cols()).all(|c| {
            let Some(shifts) = h.shifts().shifts(r, c) else {
                return false;
            };
            (0..v).all(|i| {
                let row = m.row(r * v + i);
                let mut got: Vec<usize> = row
                    .iter()
                    .filter(|&&col| col / v == c)
                    .map(|&col| (col % v + v - i) % v)
                    .collect();
                let mut want: Vec<usize> = shifts.iter().map(|&s| s as usize).collect();
                got.sort_unstable();
                want.sort_unstable();
                got == want
            })
        })
    })
}

fn code_construction(dir: &Path) -> Verdict {
    let (a, b) = (dir.join("a"), dir.join("b"));
    let (out_a, out_b) = (construct_cli(&a), construct_cli(&b));
    if !out_a.status.success() || !out_b.status.success() {
        return verdict(false, String::from_utf8_lossy(&out_a.stderr).into_owned());
    }
    let same = [".shifts", ".alist", ".log.csv"].iter().all(|s| {
        std::fs::read(with_suffix(&a, s)).unwrap() == std::fs::read(with_suffix(&b, s)).unwrap()
    });
    let code = shift_table::read(&with_suffix(&a, ".shifts")).unwrap();
    let h = alist::read(&with_suffix(&a, ".alist")).unwrap();
    let g = girth(&TannerGraph::from_parity_check(&h)).girth;
    let dims = (code.lifting(), code.n_tx(), code.k());
    let pass = dims == (120, 480, 240)
        && &h == code.matrix()
        && blocks_are_circulant(&code)
        && g.rank() >= 6
        && same;
    verdict(
        pass,
        format!(
            "v={} N_tx={} K={}, girth {g:?}, circulant blocks {}, identical reruns {same}",
            dims.0,
            dims.1,
            dims.2,
            blocks_are_circulant(&code)
        ),
    )
}

fn coded_waterfall(dir: &Path) -> Verdict {
    let spec = CodeSpec {
        n: 480,
        rate: Rate::new(1, 2),
        seed: 0,
        girth_target: None,
    };
    let code = construct(&spec, &CgaParams::default()).unwrap().code;
    shift_table::write(&dir.join("waterfall.shifts"), &code).unwrap();
    let coded = CodeUnderTest::from_code(&code, 50).unwrap();

    let point = simulate(&coded, 6, -3.0, StopRule::default(), 1);
    let certified_zero = point.bit_errors == 0 && point.bits >= 5_000_000 && point.ber_bound() <= 1e-4;
    let waterfall = (point.frame_errors >= 30 && point.ber <= 1e-4) || certified_zero;

    let sweep = StopRule {
        max_frames: 4_000,
        ..StopRule::default()
    };
    let mut ordered = true;
    let mut sweep_notes = Vec::new();
    for db in [-5.0, -4.0] {
        let bers: Vec<f64> = (2..=10).map(|m| simulate(&coded, m, db, sweep, 2).ber).collect();
        ordered &= bers.windows(2).all(|w| w[1] <= w[0]);
        sweep_notes.push(format!(
            "{db} dB [{}]",
            bers.iter().map(|b| format!("{b:.1e}")).collect::<Vec<_>>().join(" ")
        ));
    }

    let uncoded = simulate(&CodeUnderTest::uncoded(), 28, -3.0, StopRule::default(), 1);
    let beats_uncoded = point.ber < uncoded.ber;
    verdict(
        waterfall && ordered && beats_uncoded,
        format!(
            "6 nodes at -3 dB: BER {:.3e} ({} frame errors, <= 1e-4: {waterfall}); \
             ordered in M: {ordered} ({}); uncoded 28 nodes {:.3e}, coded better: {beats_uncoded}",
            point.ber,
            point.frame_errors,
            sweep_notes.join(", "),
            uncoded.ber
        ),
    )
}

fn decoder_matches_ml() -> Verdict {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/hamming74.alist");
    let h = alist::read(Path::new(path)).unwrap();
    let dense = h.to_dense();
    let tables = build_encoder(&h, &[]).unwrap();
    let decoder = BpDecoder::new(&h);
    let rate = tables.k() as f64 / tables.n() as f64;
    let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(0.8));
    let noise = Normal::new(0.0, sigma2.sqrt()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 10_000;
    let mut agree = 0;
    for _ in 0..trials {
        let msg: Vec<u8> = (0..tables.k()).map(|_| rng.random::<bool>() as u8).collect();
        let cw = encode(&tables, &msg).unwrap();
        let llr: Vec<f64> = cw
            .full
            .iter()
            .map(|&b| channel_llr(1.0 - 2.0 * b as f64 + noise.sample(&mut rng), 1.0, sigma2).unwrap())
            .collect();
        let ml = oracle::ml_decode(&dense, &llr);
        agree += (decoder.decode(&LlrVector::new(llr, &[]).unwrap(), 50).hard == ml) as usize;
    }
    let share = agree as f64 / trials as f64;
    verdict(share >= 0.99, format!("{agree} / {trials} trials agree at 8 dB"))
}

fn random_qc(rng: &mut ChaCha8Rng) -> QcParityCheck {
    let (rows, cols, v) = (rng.random_range(2..4), rng.random_range(2..5), rng.random_range(2..8));
    loop {
        let mult: Vec<Vec<u32>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(0..3u32).min(v as u32)).collect())
            .collect();
        if mult.iter().any(|r| r.iter().all(|&m| m == 0))
            || (0..cols).any(|c| mult.iter().all(|r| r[c] == 0))
        {
            continue;
        }
        let cells = mult
            .iter()
            .flatten()
            .map(|&m| {
                let mut pool: Vec<u32> = (0..v as u32).collect();
                (0..m).map(|_| pool.remove(rng.random_range(0..pool.len()))).collect()
            })
            .collect();
        let p = ProtoMatrix::new_graph("random", mult, vec![]).unwrap();
        return lift(&p, &ShiftAssignment::from_shifts(v, cols, cells)).unwrap();
    }
}

fn girth_matches_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bfs_agree = 0;
    for _ in 0..100 {
        let n_var = rng.random_range(2..=24);
        let n_check = rng.random_range(2..=16);
        let n_edges = rng.random_range(0..=(n_var + n_check) * 3 / 2);
        let edges: Vec<(usize, usize)> = (0..n_edges)
            .map(|_| (rng.random_range(0..n_var), rng.random_range(0..n_check)))
            .collect();
        let r = girth(&TannerGraph::from_edges(n_var, n_check, &edges));
        let ours = r.girth.cycle_len().map(|l| (l, r.multiplicity));
        bfs_agree += (ours == oracle::brute_girth(n_var, n_check, &edges)) as usize;
    }
    let mut qc_agree = 0;
    for _ in 0..50 {
        let h = random_qc(&mut rng);
        let full = girth(&TannerGraph::from_parity_check(h.matrix()));
        // No simple cycle is longer than the node count.
        let cap = (h.matrix().n_rows() + h.matrix().n_cols()) as u32;
        let fast = qc_girth(&h, cap).unwrap();
        let same_girth = match (fast.girth, full.girth) {
            (Girth::AtLeast(_), Girth::Acyclic) => true,
            (a, b) => a == b,
        };
        qc_agree += (same_girth && fast.multiplicity == full.multiplicity) as usize;
    }
    verdict(
        bfs_agree == 100 && qc_agree == 50,
        format!("BFS vs enumeration {bfs_agree}/100, QC vs BFS {qc_agree}/50"),
    )
}

fn syndrome_suite() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, rate) in [Rate::new(1, 3), Rate::new(1, 2), Rate::new(1, 4)].into_iter().enumerate() {
        let spec = CodeSpec {
            n: 480,
            rate,
            seed: i as u64,
            girth_target: None,
        };
        let code = construct(&spec, &CgaParams::default()).unwrap().code;
        let h = code.matrix();
        let dense = h.to_dense();
        let tables = build_encoder(h, code.punctured_cols()).unwrap();
        let decoder = BpDecoder::new(h);
        let mut rng = ChaCha8Rng::seed_from_u64(80 + i as u64);
        let mut ok = 0;
        for _ in 0..1000 {
            let msg: Vec<u8> = (0..tables.k()).map(|_| rng.random::<bool>() as u8).collect();
            let cw = encode(&tables, &msg).unwrap();
            let tx: Vec<f64> = cw.tx.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
            let llr = LlrVector::from_transmitted(&tx, code.n_total(), code.punctured_cols()).unwrap();
            let out = decoder.decode(&llr, 50);
            let good = oracle::syndrome_is_zero(&dense, &cw.full)
                && out.converged
                && out.hard == cw.full
                && tables.extract_message(&out.hard) == msg;
            ok += good as usize;
        }
        pass &= ok == 1000 && (code.rate() < Rate::new(1, 3)) == (rate < Rate::new(1, 3));
        parts.push(format!("rate {} ({}, {}): {ok}/1000", code.rate(), code.n_tx(), code.k()));
    }
    verdict(pass, parts.join(", "))
}

type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Check)> = vec![
        ("analytic anchor", Box::new(analytic_anchor)),
        ("single-antenna channel", Box::new(siso_validation)),
        ("asymptotic formula", Box::new(asymptotic_consistency)),
        ("code construction", Box::new(|| code_construction(dir.path()))),
        ("coded waterfall", Box::new(|| coded_waterfall(dir.path()))),
        ("decoder vs ML", Box::new(decoder_matches_ml)),
        ("girth oracles", Box::new(girth_matches_oracles)),
        ("syndrome suite", Box::new(syndrome_suite)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        failed += !v.pass as usize;
        println!(
            "criterion {} {name}: {} [{:.1}s] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
