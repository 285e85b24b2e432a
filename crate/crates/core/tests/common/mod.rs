//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use atomata::automata::{minimize_dfa, reverse_dfa};
use atomata::langalg::{derivative_system, DerivativeSystem};
use atomata::semilattice::FinLattice;
use atomata::{Alphabet, Dfa, Nfa, Rel};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ab_alphabet() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

/// Minimal DFA of a*b: states L, {ε}, ∅.
pub fn fix_ab() -> Dfa {
    Dfa::new(ab_alphabet(), 0, [1], vec![vec![0, 1], vec![2, 2], vec![2, 2]]).unwrap()
}

/// A DFA of b a*, built by hand.
pub fn ba_star() -> Dfa {
    Dfa::new(ab_alphabet(), 0, [1], vec![vec![2, 1], vec![1, 2], vec![2, 2]]).unwrap()
}

pub fn sigma_star() -> Dfa {
    Dfa::new(ab_alphabet(), 0, [0], vec![vec![0, 0]]).unwrap()
}

pub fn empty_language() -> Dfa {
    Dfa::new(ab_alphabet(), 0, Vec::<usize>::new(), vec![vec![0, 0]]).unwrap()
}

/// (aa)* over {a}.
pub fn even_a() -> Dfa {
    Dfa::new(Alphabet::new(["a"]).unwrap(), 0, [0], vec![vec![1], vec![0]]).unwrap()
}

/// ⊥ < x < ⊤.
pub fn fix_c3() -> FinLattice {
    FinLattice::chain(3)
}

/// ⊥ = 0, a = 1, b = 2, ⊤ = 3.
pub fn fix_m2() -> FinLattice {
    FinLattice::from_leq_fn(4, |i, j| i == j || i == 0 || j == 3).unwrap()
}

/// ⊥, three atoms, ⊤.
pub fn m3() -> FinLattice {
    FinLattice::from_leq_fn(5, |i, j| i == j || i == 0 || j == 4).unwrap()
}

/// {(0,0),(0,1),(1,1)}.
pub fn fix_r0() -> Rel {
    Rel::from_fn(2, 2, |i, j| (i, j) != (1, 0))
}

pub fn ds_of(a: &Dfa) -> DerivativeSystem {
    derivative_system(a, &minimize_dfa(&reverse_dfa(a))).unwrap()
}

/// All words of length at most `n`, shortlex.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Direct NFA simulation by depth-first search over paths.
pub fn nfa_accepts_by_paths(n: &Nfa, word: &[usize]) -> bool {
    fn go(n: &Nfa, q: usize, word: &[usize]) -> bool {
        match word.split_first() {
            None => n.finals().contains(q),
            Some((&a, rest)) => n.successors(q, a).ones().any(|p| go(n, p, rest)),
        }
    }
    n.inits().ones().any(|q| go(n, q, word))
}

pub fn random_nfa(rng: &mut ChaCha8Rng, sigma: &Alphabet, max_states: usize, density: f64) -> Nfa {
    let n = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..sigma.len() {
            for q in 0..n {
                if rng.gen_bool(density) {
                    edges.push((p, a, q));
                }
            }
        }
    }
    let inits: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    Nfa::new(sigma.clone(), n, inits, finals, edges).unwrap()
}

pub fn random_dfa(rng: &mut ChaCha8Rng, sigma: &Alphabet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let trans = (0..n).map(|_| (0..sigma.len()).map(|_| rng.gen_range(0..n)).collect()).collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(sigma.clone(), 0, finals, trans).unwrap()
}

pub fn random_rel(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize) -> Rel {
    let (r, c) = (rng.gen_range(1..=max_rows), rng.gen_range(1..=max_cols));
    Rel::from_fn(r, c, |_, _| rng.gen_bool(0.5))
}

/// Every NFA with exactly `n` states over the alphabet, in a fixed order.
pub fn all_nfas(sigma: &Alphabet, n: usize) -> impl Iterator<Item = Nfa> + '_ {
    let k = sigma.len();
    let cells = n * k * n;
    let total: u64 = 1 << (cells + 2 * n);
    (0..total).map(move |code| {
        let edges: Vec<(usize, usize, usize)> = (0..cells)
            .filter(|&b| code >> b & 1 == 1)
            .map(|b| (b / (k * n), b / n % k, b % n))
            .collect();
        let inits: Vec<usize> = (0..n).filter(|&q| code >> (cells + q) & 1 == 1).collect();
        let finals: Vec<usize> = (0..n).filter(|&q| code >> (cells + n + q) & 1 == 1).collect();
        Nfa::new(sigma.clone(), n, inits, finals, edges).unwrap()
    })
}
