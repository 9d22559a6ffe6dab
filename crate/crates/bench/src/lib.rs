//! Benchmark fixtures shared by the criterion benches.

use ilm_core::{generate, named, Graph, Limits, Sequence};

/// `ILM_t(g0, S)` for a sequence in the usual text form.
pub fn build(g0: &Graph, seq: &str, t: usize) -> Graph {
    let seq = Sequence::parse(seq).expect("valid sequence");
    generate(g0, &seq, t, &Limits::default()).expect("within limits").0
}

/// The alternating run on `C4` used across benches.
pub fn alternating_c4(t: usize) -> Graph {
    build(&named::cycle(4), "(01)*", t)
}
