mod oracle;

use pldpc_core::codec::{
    bp_decode, build_encoder, channel_llr, encode, hard_decision, BpDecoder, LlrVector,
};
use pldpc_core::protograph::{ar4ja_base, lift, QcParityCheck, ShiftAssignment};
use pldpc_core::sparse::SparseMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn hamming() -> Vec<Vec<u8>> {
    vec![
        vec![1, 0, 1, 1, 1, 0, 0],
        vec![1, 1, 1, 0, 0, 1, 0],
        vec![0, 0, 1, 1, 0, 0, 1],
    ]
}

/// AR4JA lifted with shifts drawn from `seed`, distinct within each cell.
fn ar4ja_code(v: usize, seed: u64) -> QcParityCheck {
    let p = ar4ja_base().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (0..p.rows())
        .flat_map(|r| (0..p.cols()).map(move |c| (r, c)))
        .map(|(r, c)| {
            let mut pool: Vec<u32> = (0..v as u32).collect();
            (0..p.mult(r, c))
                .map(|_| pool.remove(rng.random_range(0..pool.len())))
                .collect()
        })
        .collect();
    lift(&p, &ShiftAssignment::from_shifts(v, p.cols(), cells)).unwrap()
}

fn noiseless_llr(full: &[u8], punctured: &[usize]) -> LlrVector {
    let values = full.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
    LlrVector::new(values, punctured).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_then_decode_noiseless(v in 3usize..12, seed in any::<u64>(), msg_seed in any::<u64>()) {
        let code = ar4ja_code(v, seed);
        let h = code.matrix();
        let tables = build_encoder(h, code.punctured_cols()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(msg_seed);
        let msg: Vec<u8> = (0..tables.k()).map(|_| rng.random::<bool>() as u8).collect();
        let cw = encode(&tables, &msg).unwrap();
        prop_assert!(oracle::syndrome_is_zero(&h.to_dense(), &cw.full));
        prop_assert_eq!(cw.tx.len(), tables.n_tx());
        let out = bp_decode(h, &noiseless_llr(&cw.full, code.punctured_cols()), 50);
        prop_assert!(out.converged);
        prop_assert_eq!(&out.hard, &cw.full);
        prop_assert_eq!(tables.extract_message(&out.hard), msg);
    }

    #[test]
    fn codewords_add(seed in any::<u64>()) {
        let code = ar4ja_code(5, 11);
        let tables = build_encoder(code.matrix(), code.punctured_cols()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || (0..tables.k()).map(|_| rng.random::<bool>() as u8).collect::<Vec<u8>>();
        let (a, b) = (draw(), draw());
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ca = encode(&tables, &a).unwrap().full;
        let cb = encode(&tables, &b).unwrap().full;
        let cs: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(encode(&tables, &sum).unwrap().full, cs);
    }

    #[test]
    fn scaling_keeps_channel_decisions(llr in proptest::collection::vec(-50.0f64..50.0, 1..40), scale in 0.01f64..100.0) {
        let v = LlrVector::new(llr, &[]).unwrap();
        prop_assert_eq!(hard_decision(v.values()), hard_decision(v.scaled(scale).values()));
    }

    #[test]
    fn llr_sign_symmetry(r in -5.0f64..5.0, a in 0.0f64..4.0, s2 in 0.01f64..4.0) {
        prop_assert_eq!(channel_llr(-r, a, s2).unwrap(), -channel_llr(r, a, s2).unwrap());
    }
}

#[test]
fn converged_means_zero_syndrome() {
    let code = ar4ja_code(16, 3);
    let h = code.matrix();
    let dense = h.to_dense();
    let tables = build_encoder(h, code.punctured_cols()).unwrap();
    let decoder = BpDecoder::new(h);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let (mut converged, mut failed) = (0, 0);
    for _ in 0..300 {
        let msg: Vec<u8> = (0..tables.k()).map(|_| rng.random::<bool>() as u8).collect();
        let cw = encode(&tables, &msg).unwrap();
        let llr: Vec<f64> = cw
            .full
            .iter()
            .map(|&b| 2.0 * ((1.0 - 2.0 * b as f64) + noise.sample(&mut rng)) / 1.0)
            .collect();
        let out = decoder.decode(&LlrVector::new(llr, code.punctured_cols()).unwrap(), 20);
        assert_eq!(out.converged, oracle::syndrome_is_zero(&dense, &out.hard));
        if out.converged {
            converged += 1;
        } else {
            failed += 1;
        }
    }
    // Both outcomes occur at this noise level.
    assert!(converged > 0 && failed > 0, "{converged} / {failed}");
}

#[test]
fn bp_agrees_with_ml_on_hamming() {
    let dense = hamming();
    let h = SparseMatrix::from_dense(&dense).unwrap();
    let tables = build_encoder(&h, &[]).unwrap();
    assert_eq!(tables.k(), 4);
    let decoder = BpDecoder::new(&h);
    // 8 dB at rate 4/7.
    let sigma2 = 1.0 / (2.0 * 4.0 / 7.0 * 10f64.powf(0.8));
    let noise = Normal::new(0.0, sigma2.sqrt()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 2000;
    let mut agree = 0;
    for _ in 0..trials {
        let msg: Vec<u8> = (0..4).map(|_| rng.random::<bool>() as u8).collect();
        let cw = encode(&tables, &msg).unwrap();
        let llr: Vec<f64> = cw
            .full
            .iter()
            .map(|&b| {
                let r = (1.0 - 2.0 * b as f64) + noise.sample(&mut rng);
                channel_llr(r, 1.0, sigma2).unwrap()
            })
            .collect();
        let ml = oracle::ml_decode(&dense, &llr);
        let bp = decoder.decode(&LlrVector::new(llr, &[]).unwrap(), 50);
        agree += (bp.hard == ml) as usize;
    }
    assert!(agree * 100 >= trials * 99, "{agree} / {trials}");
}

#[test]
fn single_weak_error_is_corrected() {
    let dense = hamming();
    let h = SparseMatrix::from_dense(&dense).unwrap();
    let tables = build_encoder(&h, &[]).unwrap();
    for m in 0..16u8 {
        let msg: Vec<u8> = (0..4).map(|i| (m >> i) & 1).collect();
        let cw = encode(&tables, &msg).unwrap();
        for flip in 0..7 {
            let llr: Vec<f64> = cw
                .full
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let mag = if i == flip { -0.5 } else { 6.0 };
                    if b == 0 { mag } else { -mag }
                })
                .collect();
            let ml = oracle::ml_decode(&dense, &llr);
            assert_eq!(ml, cw.full);
            let out = bp_decode(&h, &LlrVector::new(llr, &[]).unwrap(), 50);
            assert_eq!(out.hard, ml, "message {m}, flipped {flip}");
        }
    }
}

#[test]
fn punctured_bits_are_recovered() {
    let code = ar4ja_code(20, 5);
    let tables = build_encoder(code.matrix(), code.punctured_cols()).unwrap();
    assert_eq!(tables.k(), 40);
    assert_eq!(tables.n_tx(), 80);
    let msg: Vec<u8> = (0..40).map(|i| (i % 3 == 0) as u8).collect();
    let cw = encode(&tables, &msg).unwrap();
    let tx: Vec<f64> = cw.tx.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
    let llr = LlrVector::from_transmitted(&tx, code.n_total(), code.punctured_cols()).unwrap();
    assert!(code.punctured_cols().iter().all(|&p| llr.values()[p] == 0.0));
    let out = bp_decode(code.matrix(), &llr, 50);
    assert!(out.converged && out.iterations <= 2);
    assert_eq!(out.hard, cw.full);
}
