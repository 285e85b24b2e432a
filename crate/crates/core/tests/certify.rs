mod common;

use std::collections::HashMap;

use atomata::automata::{determinize_reachable, equivalent, is_atomic, is_subatomic, minimize_dfa, reverse_dfa};
use atomata::biclique::exact_dim;
use atomata::certify::{
    certificate_to_nfa, extract_certificate, extract_subatomic_certificate, instance_paths, na_oracle,
    na_oracle_witness, nmu_oracle, verify_atomic_certificate, verify_diagram, verify_subatomic_certificate,
    Certificate, CertificateKind,
};
use atomata::dep::pirr_of;
use atomata::enumerate::minimal_dfas_upto;
use atomata::langalg::{atomaton, canonical_rfsa, syntactic_monoid};
use atomata::semilattice::enumerate_lattices;
use atomata::speclang::{lattice_language_instance, ln_family};
use atomata::{Alphabet, BitMatrix, Dfa, Error, Nfa, Rel};
use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 26;

/// Left Nerode class of `u`: the states of the minimal DFA from which `u` is accepted.
fn nerode_key(d: &Dfa, u: &[usize]) -> Vec<bool> {
    (0..d.state_count()).map(|q| d.is_final(d.run_from(q, u))).collect()
}

/// Syntactic class of `u`: its transformation of the minimal DFA.
fn syntactic_key(d: &Dfa, u: &[usize]) -> Vec<bool> {
    (0..d.state_count()).flat_map(|q| (0..d.state_count()).map(move |p| d.run_from(q, u) == p)).collect()
}

/// Every state language is saturated by the classes given by `key` (checked on short words).
fn saturated(n: &Nfa, d: &Dfa, key: impl Fn(&Dfa, &[usize]) -> Vec<bool>) -> bool {
    let ws = words(n.alphabet().len(), 6);
    (0..n.state_count()).all(|q| {
        let mut seen: HashMap<Vec<bool>, bool> = HashMap::new();
        ws.iter().all(|w| {
            let acc = n.accepts_from(q, w);
            *seen.entry(key(d, w)).or_insert(acc) == acc
        })
    })
}

/// For every language with an NFA of at most 2 states: the least atomic and subatomic sizes found.
fn small_nfa_table(sigma: &Alphabet) -> HashMap<Dfa, (Option<usize>, Option<usize>)> {
    let mut table: HashMap<Dfa, (Option<usize>, Option<usize>)> = HashMap::new();
    for size in 1..=2 {
        for n in all_nfas(sigma, size) {
            let d = minimize_dfa(&determinize_reachable(&n)).canonical();
            let atomic = saturated(&n, &d, nerode_key);
            let sub = atomic || saturated(&n, &d, syntactic_key);
            let e = table.entry(d).or_insert((None, None));
            if atomic && e.0.is_none() {
                e.0 = Some(size);
            }
            if sub && e.1.is_none() {
                e.1 = Some(size);
            }
        }
    }
    table
}

#[test]
fn oracles_match_exhaustive_two_state_scan() {
    let sigma = Alphabet::new(["a", "b"]).unwrap();
    let table = small_nfa_table(&sigma);
    for d in minimal_dfas_upto(3, &sigma) {
        let d = d.canonical();
        let rev = reverse_dfa(&d);
        let na = na_oracle(&d, &rev, 2, BUDGET).unwrap();
        let nmu = nmu_oracle(&syntactic_monoid(&d), 2, BUDGET).unwrap();
        let (ea, es) = match table.get(&d) {
            _ if d.is_empty_language() => (Some(0), Some(0)),
            Some(&(a, s)) => (a, s),
            None => (None, None),
        };
        assert_eq!(na, ea, "nα of {:?}", d.transitions());
        assert_eq!(nmu, es, "nμ of {:?}", d.transitions());
    }
}

#[test]
fn oracles_match_exhaustive_scan_over_one_letter() {
    let sigma = Alphabet::new(["a"]).unwrap();
    let mut least: HashMap<Dfa, usize> = HashMap::new();
    for size in 1..=3 {
        for n in all_nfas(&sigma, size) {
            let d = minimize_dfa(&determinize_reachable(&n)).canonical();
            if saturated(&n, &d, nerode_key) {
                least.entry(d).or_insert(size);
            }
        }
    }
    for d in minimal_dfas_upto(4, &sigma) {
        let d = d.canonical();
        let na = na_oracle(&d, &reverse_dfa(&d), 3, BUDGET).unwrap();
        let nmu = nmu_oracle(&syntactic_monoid(&d), 3, BUDGET).unwrap();
        let expected = if d.is_empty_language() { Some(0) } else { least.get(&d).copied() };
        assert_eq!(na, expected);
        assert_eq!(nmu, na);
    }
}

#[test]
fn oracles_bound_random_three_state_nfas() {
    let sigma = ab_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..300 {
        let n = random_nfa(&mut rng, &sigma, 3, 0.3);
        let d = minimize_dfa(&determinize_reachable(&n));
        if d.state_count() > 6 {
            continue;
        }
        let k = n.state_count();
        if is_atomic(&n) {
            assert!(na_oracle(&d, &reverse_dfa(&d), k, BUDGET).unwrap().is_some());
        }
        if is_subatomic(&n, &d).unwrap() {
            assert!(nmu_oracle(&syntactic_monoid(&d), k, BUDGET).unwrap().is_some());
        }
    }
}

#[test]
fn oracle_examples() {
    assert_eq!(na_oracle(&fix_ab(), &ba_star(), 3, BUDGET).unwrap(), Some(2));
    assert_eq!(na_oracle(&sigma_star(), &sigma_star(), 1, BUDGET).unwrap(), Some(1));
    assert_eq!(nmu_oracle(&syntactic_monoid(&sigma_star()), 1, BUDGET).unwrap(), Some(1));
    let even = even_a();
    assert_eq!(
        nmu_oracle(&syntactic_monoid(&even), 3, BUDGET).unwrap(),
        na_oracle(&even, &reverse_dfa(&even), 3, BUDGET).unwrap()
    );
    let l3 = ln_family(3).unwrap();
    let na3 = na_oracle(&l3, &reverse_dfa(&l3), 4, BUDGET).unwrap();
    assert_eq!(nmu_oracle(&syntactic_monoid(&l3), 4, BUDGET).unwrap(), na3);
    assert_eq!(na3, Some(3));
}

#[test]
fn lattice_languages_have_na_equal_to_dim() {
    for s in enumerate_lattices(5).into_iter().filter(|s| s.size() > 1) {
        let r = pirr_of(&s);
        let dim = exact_dim(&r, 4).unwrap().unwrap().len();
        let inst = lattice_language_instance(&r, dim).unwrap();
        let na = na_oracle(&inst.dfa_l, &inst.dfa_rl, 4, BUDGET).unwrap();
        assert_eq!(na, Some(dim));
        assert_eq!(nmu_oracle(&inst.monoid, 4, BUDGET).unwrap(), Some(dim));
    }
}

fn ab_rfsa_certificate() -> Certificate {
    let n = canonical_rfsa(&ds_of(&fix_ab()));
    extract_certificate(&n, &fix_ab(), &ba_star()).unwrap()
}

#[test]
fn rfsa_certificate_of_a_star_b() {
    let c = ab_rfsa_certificate();
    assert_eq!(c.s.rows(), 2);
    assert!(verify_atomic_certificate(&fix_ab(), &ba_star(), &c, 2).unwrap());
    assert!(!verify_atomic_certificate(&fix_ab(), &ba_star(), &c, 1).unwrap());
    let (lower, upper) = instance_paths(&ds_of(&fix_ab()), CertificateKind::Atomic);
    let n = certificate_to_nfa(&c, &lower, &upper).unwrap();
    assert_eq!(n.state_count(), 2);
    assert!(equivalent(&n, &fix_ab()).unwrap());
    assert!(is_atomic(&n));
}

#[test]
fn flipped_transition_bits_never_yield_wrong_nfas() {
    let c = ab_rfsa_certificate();
    let (lower, upper) = instance_paths(&ds_of(&fix_ab()), CertificateKind::Atomic);
    let mut rejected = 0;
    for a in 0..c.t.len() {
        for (i, j) in (0..c.t[a].rows()).flat_map(|i| (0..c.t[a].cols()).map(move |j| (i, j))) {
            let mut m = c.clone();
            m.t[a].toggle(i, j);
            if verify_diagram(&lower, &upper, &m, 2).unwrap() {
                let n = certificate_to_nfa(&m, &lower, &upper).unwrap();
                assert!(equivalent(&n, &fix_ab()).unwrap() && is_atomic(&n));
            } else {
                rejected += 1;
            }
        }
    }
    assert!(rejected > 0);
}

#[test]
fn corrupted_q_row_is_rejected() {
    let mut c = ab_rfsa_certificate();
    for x in 0..c.q.cols() {
        c.q.set(0, x, false);
    }
    assert!(!verify_atomic_certificate(&fix_ab(), &ba_star(), &c, 2).unwrap());

    let n = canonical_rfsa(&ds_of(&fix_ab()));
    let m = syntactic_monoid(&fix_ab());
    let mut c = extract_subatomic_certificate(&n, &m).unwrap();
    assert!(verify_subatomic_certificate(&m, &c, 2).unwrap());
    for x in 0..c.q.cols() {
        c.q.set(0, x, false);
    }
    assert!(!verify_subatomic_certificate(&m, &c, 2).unwrap());
}

#[test]
fn trivial_language_certificates() {
    let one = Nfa::new(ab_alphabet(), 1, [0], [0], [(0, 0, 0), (0, 1, 0)]).unwrap();
    let c = extract_certificate(&one, &sigma_star(), &sigma_star()).unwrap();
    assert_eq!(*c.s.bits(), BitMatrix::full(1, 1));
    assert!(c.t.iter().all(|t| *t == BitMatrix::full(1, 1)));
    assert!(verify_atomic_certificate(&sigma_star(), &sigma_star(), &c, 1).unwrap());
    assert!(!verify_atomic_certificate(&sigma_star(), &sigma_star(), &c, 0).unwrap());
    let (lower, upper) = instance_paths(&ds_of(&sigma_star()), CertificateKind::Atomic);
    let n = certificate_to_nfa(&c, &lower, &upper).unwrap();
    assert_eq!(n.state_count(), 1);
    assert!(n.inits().contains(0) && n.finals().contains(0));

    let m = syntactic_monoid(&sigma_star());
    let c = extract_subatomic_certificate(&one, &m).unwrap();
    assert!(verify_subatomic_certificate(&m, &c, 1).unwrap());
}

#[test]
fn k_zero_only_for_the_empty_language() {
    let e = empty_language();
    let none = Nfa::new(ab_alphabet(), 0, Vec::<usize>::new(), Vec::<usize>::new(), Vec::new()).unwrap();
    let c = extract_certificate(&none, &e, &e).unwrap();
    assert_eq!(c.s.rows(), 0);
    assert!(verify_atomic_certificate(&e, &e, &c, 0).unwrap());
    assert_eq!(na_oracle(&e, &e, 3, BUDGET).unwrap(), Some(0));
}

#[test]
fn atomaton_certificate_uses_three_states() {
    let ds = ds_of(&fix_ab());
    let c = extract_certificate(&atomaton(&ds), &fix_ab(), &ba_star()).unwrap();
    assert_eq!(c.s.rows(), 3);
    assert!(verify_atomic_certificate(&fix_ab(), &ba_star(), &c, 3).unwrap());
    assert!(!verify_atomic_certificate(&fix_ab(), &ba_star(), &c, 2).unwrap());
}

#[test]
fn l3_certificate_from_rfsa() {
    let l3 = ln_family(3).unwrap();
    let r = reverse_dfa(&l3);
    let ds = ds_of(&l3);
    let c = extract_certificate(&canonical_rfsa(&ds), &l3, &r).unwrap();
    assert!(verify_atomic_certificate(&l3, &r, &c, 3).unwrap());
    let (lower, upper) = instance_paths(&ds, CertificateKind::Atomic);
    let n = certificate_to_nfa(&c, &lower, &upper).unwrap();
    assert_eq!(n.state_count(), 3);
    assert!(equivalent(&n, &l3).unwrap());
}

#[test]
fn subatomic_certificate_for_even_a() {
    let even = even_a();
    let m = syntactic_monoid(&even);
    let n = canonical_rfsa(&ds_of(&even));
    let c = extract_subatomic_certificate(&n, &m).unwrap();
    assert!(verify_subatomic_certificate(&m, &c, 2).unwrap());
    let (lower, upper) = instance_paths(&m.derivative_system(), CertificateKind::Subatomic);
    let out = certificate_to_nfa(&c, &lower, &upper).unwrap();
    assert!(out.state_count() <= 2);
    assert!(equivalent(&out, &even).unwrap());
    assert!(is_subatomic(&out, &even).unwrap());
}

#[test]
fn extraction_errors() {
    let rfsa = canonical_rfsa(&ds_of(&fix_ab()));
    assert_eq!(extract_certificate(&rfsa, &sigma_star(), &sigma_star()), Err(Error::LanguageMismatch));
    // a non-atomic NFA for Σ*: the second initial state accepts only aΣ*
    let non_atomic = Nfa::new(ab_alphabet(), 2, [0, 1], [0], [(0, 0, 0), (0, 1, 0), (1, 0, 0)]).unwrap();
    assert!(equivalent(&non_atomic, &sigma_star()).unwrap());
    assert_eq!(extract_certificate(&non_atomic, &sigma_star(), &sigma_star()), Err(Error::NotAtomic));
    let c = ab_rfsa_certificate();
    let m = syntactic_monoid(&fix_ab());
    assert!(matches!(verify_subatomic_certificate(&m, &c, 2), Err(Error::InvalidCertificate(_))));
    let mut bad = c.clone();
    bad.p = BitMatrix::new(1, 1);
    assert!(matches!(verify_atomic_certificate(&fix_ab(), &ba_star(), &bad, 2), Err(Error::ShapeMismatch(_))));
    assert_eq!(verify_atomic_certificate(&fix_ab(), &fix_ab(), &c, 2), Err(Error::NotReversePair));
}

fn permute(c: &Certificate, rp: &[usize], cp: &[usize]) -> Certificate {
    // new row i is old row rp[i]; new column j is old column cp[j]
    let s = c.s.permuted(rp, cp);
    let p = BitMatrix::from_fn(c.p.rows(), cp.len(), |r, j| c.p.get(r, cp[j]));
    let q = BitMatrix::from_fn(rp.len(), c.q.cols(), |i, x| c.q.get(rp[i], x));
    let t = c.t.iter().map(|t| BitMatrix::from_fn(rp.len(), cp.len(), |i, j| t.get(rp[i], cp[j]))).collect();
    Certificate { kind: c.kind, s, p, q, t }
}

#[test]
fn certificates_are_invariant_under_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..60 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 4));
        let rev = reverse_dfa(&d);
        let Some(w) = na_oracle_witness(&d, &rev, 4, BUDGET).unwrap() else { continue };
        let ds = ds_of(&d);
        let n = w.nfa(&ds.nerode_action());
        let c = extract_certificate(&n, &d, &rev).unwrap();
        let k = c.s.rows();
        assert!(verify_atomic_certificate(&d, &rev, &c, k).unwrap());
        let mut rp: Vec<usize> = (0..c.s.rows()).collect();
        let mut cp: Vec<usize> = (0..c.s.cols()).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let pc = permute(&c, &rp, &cp);
        assert!(verify_atomic_certificate(&d, &rev, &pc, k).unwrap());
        let (lower, upper) = instance_paths(&ds, CertificateKind::Atomic);
        let out = certificate_to_nfa(&pc, &lower, &upper).unwrap();
        assert!(equivalent(&out, &d).unwrap() && is_atomic(&out));
    }
}

#[test]
fn identity_object_is_not_a_valid_shortcut() {
    // the unit relation is the right shape for Σ* but a wrong P breaks the diagram
    let c = Certificate {
        kind: CertificateKind::Atomic,
        s: Rel::identity(1),
        p: BitMatrix::new(1, 1),
        q: BitMatrix::full(1, 1),
        t: vec![BitMatrix::full(1, 1); 2],
    };
    assert!(!verify_atomic_certificate(&sigma_star(), &sigma_star(), &c, 1).unwrap());
}
