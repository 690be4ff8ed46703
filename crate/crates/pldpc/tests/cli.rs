use std::path::Path;
use std::process::{Command, Output};

fn pldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pldpc"))
        .args(args)
        .output()
        .expect("run pldpc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn min_nodes_prints_a_count() {
    let o = pldpc(&["min-nodes", "--ebn0", "-3", "--target-ber", "1e-5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "29");
}

#[test]
fn girth_of_shipped_matrix() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/hamming74.alist");
    let o = pldpc(&["girth", "--alist", path]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("girth,multiplicity,elapsed"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..2], ["4", "2"]);
}

#[test]
fn construct_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let prefix = dir.path().join(name);
        let o = pldpc(&[
            "construct",
            "--n",
            "96",
            "--rate",
            "1/2",
            "--seed",
            "5",
            "--max-evaluations",
            "3000",
            "--out-prefix",
            prefix.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("n_tx 96"));
        std::fs::read(dir.path().join(format!("{name}.shifts"))).unwrap()
    };
    assert_eq!(run("a"), run("b"));
    let log = std::fs::read_to_string(dir.path().join("a.log.csv")).unwrap();
    assert!(log.starts_with("eval_index,girth,multiplicity,best_so_far\n"));
}

#[test]
fn analytic_and_siso_tables() {
    let o = pldpc(&["analytic", "--m-list", "10,28", "--ebn0-list", "-3,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = pldpc(&["siso", "--ebn0-list", "10"]);
    let out = stdout(&o);
    let ber: f64 = out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((ber - 0.0233).abs() < 1e-4, "{ber}");
}

#[test]
fn simulate_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "code = uncoded\nseed = 4\nm_list = 1,2\nebn0_list = 0\nmax_frames = 3\nout = out.csv\n",
    )
    .unwrap();
    let o = pldpc(&["simulate", "--config", cfg.to_str().unwrap(), "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(Path::new(&dir.path().join("out.meta")).exists());
}

#[test]
fn exit_codes() {
    // Usage errors come from the argument parser.
    assert_eq!(pldpc(&["construct", "--n", "480"]).status.code(), Some(2));
    assert_eq!(pldpc(&["frobnicate"]).status.code(), Some(2));
    // Runtime errors.
    assert_eq!(pldpc(&["girth", "--alist", "/nonexistent.alist"]).status.code(), Some(1));
    let o = pldpc(&["min-nodes", "--ebn0", "0", "--target-ber", "0.7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("x");
    let o = pldpc(&["construct", "--n", "4", "--rate", "1/2", "--out-prefix", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
