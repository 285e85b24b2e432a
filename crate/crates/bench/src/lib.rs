//! Inputs shared by the benchmarks.

use atomata::automata::reverse_dfa;
use atomata::speclang::ln_family;
use atomata::{Dfa, Rel};

/// `L_n` with its reverse DFA.
pub fn ln_pair(n: usize) -> (Dfa, Dfa) {
    let a = ln_family(n).expect("n >= 2");
    let b = reverse_dfa(&a);
    (a, b)
}

/// The `n × n` relation `i ≠ j`, whose bipartite dimension grows slowly with `n`.
pub fn crown(n: usize) -> Rel {
    Rel::from_fn(n, n, |i, j| i != j)
}
