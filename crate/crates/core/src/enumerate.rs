//! Exhaustive enumeration of small automata and relations.

use crate::automata::{state_equivalence, Alphabet, Dfa};
use crate::dep::Rel;

/// Every DFA with exactly `n` states that is minimal and in canonical BFS order,
/// one per language. Ordered by transition table, then final set.
pub fn minimal_dfas(n: usize, alphabet: &Alphabet) -> Vec<Dfa> {
    let k = alphabet.len();
    let cells = n * k;
    let mut out = Vec::new();
    let mut table = vec![0usize; cells];
    loop {
        let rows: Vec<Vec<usize>> = table.chunks(k).map(<[usize]>::to_vec).collect();
        if is_bfs_canonical(&rows) {
            for mask in 0..1u32 << n {
                let finals = (0..n).filter(|&q| mask >> q & 1 == 1);
                let d = Dfa::new(alphabet.clone(), 0, finals, rows.clone()).expect("in range");
                let classes = state_equivalence(&d);
                if classes.iter().max().map_or(0, |m| m + 1) == n {
                    out.push(d);
                }
            }
        }
        // odometer, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < n {
                break;
            }
            table[i] = 0;
        }
    }
}

/// All minimal DFAs with at most `max_states` states.
pub fn minimal_dfas_upto(max_states: usize, alphabet: &Alphabet) -> Vec<Dfa> {
    (1..=max_states).flat_map(|n| minimal_dfas(n, alphabet)).collect()
}

/// States are numbered in the order a BFS from state 0 discovers them.
fn is_bfs_canonical(rows: &[Vec<usize>]) -> bool {
    let mut next = 1;
    for (q, row) in rows.iter().enumerate() {
        if q >= next {
            return false;
        }
        for &t in row {
            if t > next {
                return false;
            }
            if t == next {
                next += 1;
            }
        }
    }
    next == rows.len()
}

/// All `2^(rows·cols)` relations of the given shape, in order of their bit encoding
/// (cell `(i, j)` is bit `i·cols + j`).
pub fn all_relations(rows: usize, cols: usize) -> impl Iterator<Item = Rel> {
    let cells = rows * cols;
    (0..1u64 << cells).map(move |code| Rel::from_fn(rows, cols, |i, j| code >> (i * cols + j) & 1 == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_minimal_dfa_counts() {
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        // languages with a minimal DFA of 1 and 2 states over two letters
        assert_eq!(minimal_dfas(1, &sigma).len(), 2);
        assert_eq!(minimal_dfas(2, &sigma).len(), 24);
        let unary = Alphabet::new(["a"]).unwrap();
        assert_eq!(minimal_dfas(2, &unary).len(), 4);
    }
}
