//! Per-evaluation CSV trace of a shift search.

use std::fmt::Write as _;
use std::path::Path;

use pldpc_core::optimizer::EvalRecord;

use super::write_text;
use crate::Result;

pub const HEADER: &str = "eval_index,girth,multiplicity,best_so_far";

/// `best_so_far` is the girth of the best assignment seen up to and
/// including that evaluation.
pub fn to_csv(log: &[EvalRecord]) -> String {
    let mut s = String::with_capacity(24 * (log.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for rec in log {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            rec.index, rec.girth, rec.multiplicity, rec.best.girth
        );
    }
    s
}

pub fn write(path: &Path, log: &[EvalRecord]) -> Result<()> {
    write_text(path, &to_csv(log))
}
