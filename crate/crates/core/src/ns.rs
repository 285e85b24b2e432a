//! Exhaustive search for the nondeterministic state complexity of small languages.
//!
//! Candidates with `k` states are enumerated in a fixed order: initial sets containing
//! state 0, then final sets, then one transition relation per symbol. Each relation is
//! first filtered on the single-letter words `a^n`; the surviving combinations are
//! compared with the minimal DFA by a product search.

use crate::automata::{minimize_dfa, Dfa, Nfa};
use crate::error::{Error, Result};

pub const DEFAULT_NS_BUDGET: u64 = 1 << 30;

/// Largest state count the enumeration supports.
pub const NS_MAX_STATES: usize = 6;

/// Least `k ≤ kmax` such that some `k`-state NFA accepts `L(a)`.
pub fn ns_bruteforce(a: &Dfa, kmax: usize, budget: u64) -> Result<Option<usize>> {
    Ok(ns_search(a, kmax, budget)?.map(|n| n.state_count()))
}

/// As [`ns_bruteforce`], returning the first NFA found.
pub fn ns_search(a: &Dfa, kmax: usize, budget: u64) -> Result<Option<Nfa>> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let d = minimize_dfa(a);
    let mut spent = 0u64;
    for k in 1..=kmax {
        if k > NS_MAX_STATES {
            return Err(Error::BudgetExceeded { lower: k, upper: None });
        }
        match search_k(&d, k, budget, &mut spent) {
            Ok(Some(n)) => return Ok(Some(n)),
            Ok(None) => {}
            Err(()) => return Err(Error::BudgetExceeded { lower: k, upper: None }),
        }
    }
    Ok(None)
}

struct Target<'a> {
    d: &'a Dfa,
    /// `unary[a][n]`: whether `a^n` is accepted, for `n < unary_len`.
    unary: Vec<Vec<bool>>,
}

fn image(rows: &[u64], set: u64) -> u64 {
    let mut out = 0;
    let mut s = set;
    while s != 0 {
        let q = s.trailing_zeros() as usize;
        out |= rows[q];
        s &= s - 1;
    }
    out
}

fn decode(code: u64, k: usize) -> Vec<u64> {
    let mask = (1u64 << k) - 1;
    (0..k).map(|q| (code >> (q * k)) & mask).collect()
}

fn search_k(d: &Dfa, k: usize, budget: u64, spent: &mut u64) -> std::result::Result<Option<Nfa>, ()> {
    let sigma = d.alphabet().len();
    let unary_len = ((1usize << k) * d.state_count()).min(24) + 1;
    let unary = (0..sigma)
        .map(|a| {
            let mut q = d.init();
            (0..unary_len)
                .map(|i| {
                    if i > 0 {
                        q = d.next(q, a);
                    }
                    d.is_final(q)
                })
                .collect()
        })
        .collect();
    let target = Target { d, unary };
    let eps = d.is_final(d.init());
    let relations = 1u64 << (k * k);
    for rest in 0..(1u64 << (k - 1)) {
        let inits = 1 | (rest << 1);
        for finals in 0..(1u64 << k) {
            if (inits & finals != 0) != eps {
                continue;
            }
            let mut survivors: Vec<Vec<Vec<u64>>> = Vec::with_capacity(sigma);
            for a in 0..sigma {
                *spent += relations;
                if *spent > budget {
                    return Err(());
                }
                let list: Vec<Vec<u64>> = (0..relations)
                    .map(|code| decode(code, k))
                    .filter(|rows| unary_consistent(&target, a, rows, inits, finals))
                    .collect();
                if list.is_empty() {
                    break;
                }
                survivors.push(list);
            }
            if survivors.len() < sigma {
                continue;
            }
            let mut choice = vec![0usize; sigma];
            'combos: loop {
                *spent += 1;
                if *spent > budget {
                    return Err(());
                }
                let rels: Vec<&Vec<u64>> = (0..sigma).map(|a| &survivors[a][choice[a]]).collect();
                if product_agrees(&target, k, &rels, inits, finals) {
                    return Ok(Some(build_nfa(d, k, &rels, inits, finals)));
                }
                // odometer over the survivor lists, last symbol fastest
                let mut pos = sigma;
                loop {
                    if pos == 0 {
                        break 'combos;
                    }
                    pos -= 1;
                    choice[pos] += 1;
                    if choice[pos] < survivors[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                }
            }
        }
    }
    Ok(None)
}

fn unary_consistent(t: &Target<'_>, a: usize, rows: &[u64], inits: u64, finals: u64) -> bool {
    let mut set = inits;
    for &expected in &t.unary[a][1..] {
        set = image(rows, set);
        if (set & finals != 0) != expected {
            return false;
        }
    }
    true
}

fn product_agrees(t: &Target<'_>, k: usize, rels: &[&Vec<u64>], inits: u64, finals: u64) -> bool {
    let nd = t.d.state_count();
    let mut seen = vec![false; (1usize << k) * nd];
    let mut stack = vec![(inits, t.d.init())];
    seen[(inits as usize) * nd + t.d.init()] = true;
    while let Some((set, q)) = stack.pop() {
        if (set & finals != 0) != t.d.is_final(q) {
            return false;
        }
        for (a, rows) in rels.iter().enumerate() {
            let s2 = image(rows, set);
            let q2 = t.d.next(q, a);
            let idx = (s2 as usize) * nd + q2;
            if !seen[idx] {
                seen[idx] = true;
                stack.push((s2, q2));
            }
        }
    }
    true
}

fn build_nfa(d: &Dfa, k: usize, rels: &[&Vec<u64>], inits: u64, finals: u64) -> Nfa {
    let ones = |m: u64| (0..k).filter(move |&q| m >> q & 1 == 1);
    let mut edges = Vec::new();
    for (a, rows) in rels.iter().enumerate() {
        for (p, &row) in rows.iter().enumerate() {
            edges.extend(ones(row).map(|q| (p, a, q)));
        }
    }
    Nfa::new(d.alphabet().clone(), k, ones(inits), ones(finals), edges).expect("enumerated NFA is well formed")
}
