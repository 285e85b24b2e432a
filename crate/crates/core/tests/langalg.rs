mod common;

use std::collections::{HashSet, VecDeque};

use atomata::automata::{equivalent, is_atomic, minimize_dfa, reverse_dfa};
use atomata::biclique::exact_dim;
use atomata::certify::{na_oracle, nmu_oracle};
use atomata::dep::open_of;
use atomata::enumerate::minimal_dfas_upto;
use atomata::langalg::{
    atomaton, canonical_rfsa, derivative_system, drl_iso, lower_path, nerode_upper_path, nfa_of_join_irreducibles,
    sld_family, sld_lattice, syntactic_monoid,
};
use atomata::ns::ns_bruteforce;
use atomata::speclang::ln_family;
use atomata::{Dfa, Error, FinLattice};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rev(w: &[usize]) -> Vec<usize> {
    w.iter().rev().copied().collect()
}

/// Closure of the letter maps of `d` under composition, identity included.
fn transition_monoid_size(d: &Dfa) -> usize {
    let n = d.state_count();
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(f) = queue.pop_front() {
        for a in 0..d.alphabet().len() {
            let g: Vec<usize> = f.iter().map(|&q| d.next(q, a)).collect();
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    seen.len()
}

#[test]
fn representatives_of_a_star_b() {
    let ds = derivative_system(&fix_ab(), &ba_star()).unwrap();
    let sigma = ab_alphabet();
    let render = |ws: &[Vec<usize>]| ws.iter().map(|w| sigma.render(w)).collect::<Vec<_>>();
    // shortlex-least access words: the sink is first reached by "ba"
    assert_eq!(render(ds.reps_left()), vec!["ε", "b", "ba"]);
    let mut right = render(ds.reps_right());
    right.sort();
    assert_eq!(right, vec!["a", "b", "ε"]);
    let s = derivative_system(&sigma_star(), &sigma_star()).unwrap();
    assert_eq!((s.reps_left().len(), s.reps_right().len()), (1, 1));
    let l3 = ln_family(3).unwrap();
    let ds3 = derivative_system(&l3, &reverse_dfa(&l3)).unwrap();
    assert_eq!((ds3.reps_left().len(), ds3.reps_right().len()), (3, 3));
    assert_eq!(derivative_system(&fix_ab(), &fix_ab()), Err(Error::NotReversePair));
}

#[test]
fn dependency_relation_of_a_star_b() {
    let ds = ds_of(&fix_ab());
    let lp = lower_path(&ds);
    let sigma = ab_alphabet();
    let pairs: Vec<(String, String)> = lp
        .object
        .bits()
        .ones()
        .map(|(p, q)| (sigma.render(&ds.reps_left()[p]), sigma.render(&ds.reps_right()[q])))
        .collect();
    assert_eq!(pairs.len(), 2);
    assert!(pairs.contains(&("ε".into(), "b".into())));
    assert!(pairs.contains(&("b".into(), "ε".into())));
    let s = lower_path(&ds_of(&sigma_star()));
    assert_eq!(s.object.bits().count_ones(), 1);
}

#[test]
fn lower_path_bits_match_word_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..150 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 5));
        let ds = ds_of(&d);
        let lp = lower_path(&ds);
        for (p, u) in ds.reps_left().iter().enumerate() {
            for (q, v) in ds.reps_right().iter().enumerate() {
                let w = [u.clone(), rev(v)].concat();
                assert_eq!(lp.object.get(p, q), d.accepts(&w));
                for a in 0..2 {
                    let w = [u.clone(), vec![a], rev(v)].concat();
                    assert_eq!(lp.trans[a].get(p, q), d.accepts(&w));
                }
            }
            assert_eq!(lp.fin.get(p, 0), d.accepts(u));
        }
        for (q, v) in ds.reps_right().iter().enumerate() {
            assert_eq!(lp.init.get(0, q), d.accepts(&rev(v)));
        }
        for w in words(2, 3) {
            assert_eq!(lp.accepts(&w).unwrap(), d.accepts(&w));
        }
    }
}

#[test]
fn drl_iso_satisfies_disjointness_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut cases: Vec<Dfa> = vec![fix_ab(), sigma_star(), ln_family(3).unwrap()];
    cases.extend((0..100).map(|_| minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 5))));
    for d in cases {
        let ds = ds_of(&d);
        let lp = lower_path(&ds);
        let family = sld_family(&ds);
        let lds = ds.nerode_action().left_derivatives(ds.reps_left());
        let iso = drl_iso(&ds);
        for (p, ld) in lds.iter().enumerate() {
            for (q, &k) in iso.iter().enumerate() {
                assert_eq!(!ld.is_subset(&family[k]), lp.object.get(p, q));
            }
        }
        let mut distinct = iso.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), iso.len());
    }
}

#[test]
fn open_of_dependency_relation_is_sld() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..150 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 5));
        let ds = ds_of(&d);
        let o = open_of(&lower_path(&ds).object);
        assert!(o.is_isomorphic(sld_lattice(&ds).lattice()));
    }
}

#[test]
fn nerode_classes() {
    let ds = ds_of(&fix_ab());
    assert_eq!(ds.class_count(), 3);
    let up = nerode_upper_path(&ds);
    // F'([u], *) holds only for the class of ε
    let eps = ds.class_of(&[]);
    assert_eq!(up.fin.ones().map(|(x, _)| x).collect::<Vec<_>>(), vec![eps]);
    // classes: {ε}, a*b, the rest
    assert_eq!(ds.class_of(&[1]), ds.class_of(&[0, 0, 1]));
    assert_ne!(ds.class_of(&[1]), ds.class_of(&[1, 0]));
    assert_eq!(ds.class_of(&[0]), ds.class_of(&[1, 1]));
    assert_eq!(ds_of(&sigma_star()).class_count(), 1);
    // Nerode: u ~ v iff Lu⁻¹ = Lv⁻¹, tested on all short continuations
    let d = fix_ab();
    for u in words(2, 3) {
        for v in words(2, 3) {
            let same = words(2, 4).iter().all(|x| d.accepts(&[x.clone(), u.clone()].concat()) == d.accepts(&[x.clone(), v.clone()].concat()));
            assert_eq!(same, ds.class_of(&u) == ds.class_of(&v), "{u:?} {v:?}");
        }
    }
}

#[test]
fn syntactic_monoid_sizes() {
    assert_eq!(syntactic_monoid(&ln_family(3).unwrap()).size(), 6);
    assert_eq!(syntactic_monoid(&sigma_star()).size(), 1);
    assert_eq!(syntactic_monoid(&fix_ab()).size(), transition_monoid_size(&fix_ab()));
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..100 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 4));
        let m = syntactic_monoid(&d);
        assert_eq!(m.size(), transition_monoid_size(&d));
        for x in 0..m.size() {
            assert_eq!(m.mul(0, x), x);
            assert_eq!(m.mul(x, 0), x);
            for y in 0..m.size() {
                for z in 0..m.size() {
                    assert_eq!(m.mul(m.mul(x, y), z), m.mul(x, m.mul(y, z)));
                }
            }
        }
        for w in words(2, 4) {
            assert_eq!(m.accepts(&w), d.accepts(&w));
        }
    }
}

#[test]
fn sld_examples() {
    let ab = sld_lattice(&ds_of(&fix_ab()));
    assert_eq!(ab.lattice().size(), 4);
    assert_eq!(ab.lattice().join_irreducibles().len(), 2);
    assert!(ab.is_reachable() && ab.is_simple());
    assert_eq!(sld_lattice(&ds_of(&sigma_star())).lattice().size(), 2);
    let l3 = sld_lattice(&ds_of(&ln_family(3).unwrap()));
    assert!(l3.lattice().is_isomorphic(&FinLattice::powerset(3)));
}

#[test]
fn sld_is_union_closure_of_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..100 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 4));
        let ds = ds_of(&d);
        let fam = sld_family(&ds);
        let lds = ds.nerode_action().left_derivatives(ds.reps_left());
        // every subset union of derivatives appears, and nothing else
        let mut expected: HashSet<Vec<usize>> = HashSet::new();
        for mask in 0u32..1 << lds.len() {
            let mut k = fixedbitset::FixedBitSet::with_capacity(ds.class_count());
            for (i, l) in lds.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    k.union_with(l);
                }
            }
            expected.insert(k.ones().collect());
        }
        let got: HashSet<Vec<usize>> = fam.iter().map(|k| k.ones().collect()).collect();
        assert_eq!(got, expected);
        let m = sld_lattice(&ds);
        assert!(m.is_reachable() && m.is_simple());
        assert!(equivalent(&m.as_dfa(), &d).unwrap());
    }
}

#[test]
fn atomaton_examples() {
    let a = atomaton(&ds_of(&fix_ab()));
    assert_eq!(a.state_count(), 3);
    assert!(equivalent(&a, &fix_ab()).unwrap());
    let s = atomaton(&ds_of(&sigma_star()));
    assert_eq!(s.state_count(), 1);
    assert!(s.finals().contains(0));
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..100 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 4));
        assert!(is_atomic(&atomaton(&ds_of(&d))));
    }
}

#[test]
fn join_irreducible_nfas() {
    let ds = ds_of(&fix_ab());
    let j = nfa_of_join_irreducibles(&sld_lattice(&ds));
    assert_eq!(j.state_count(), 2);
    assert!(equivalent(&j, &fix_ab()).unwrap());
    assert_eq!(j, canonical_rfsa(&ds));
    let l3 = ln_family(3).unwrap();
    let j3 = nfa_of_join_irreducibles(&sld_lattice(&ds_of(&l3)));
    assert_eq!(j3.state_count(), 3);
    assert!(equivalent(&j3, &l3).unwrap());
}

#[test]
fn join_irreducible_states_keep_their_languages() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..100 {
        let d = minimize_dfa(&random_dfa(&mut rng, &ab_alphabet(), 4));
        let ds = ds_of(&d);
        let m = sld_lattice(&ds);
        let n = nfa_of_join_irreducibles(&m);
        let md = m.as_dfa();
        for (q, &j) in m.lattice().join_irreducibles().iter().enumerate() {
            for w in words(2, 4) {
                assert_eq!(n.accepts_from(q, &w), md.is_final(md.run_from(j, &w)));
            }
        }
    }
}

#[test]
fn complexity_chain_on_two_state_languages() {
    for d in minimal_dfas_upto(2, &ab_alphabet()) {
        let ds = ds_of(&d);
        let dim = exact_dim(&lower_path(&ds).object, 4).unwrap().unwrap().len();
        // ns(∅) = 0: the NFA without states accepts nothing
        let ns = if d.is_empty_language() { 0 } else { ns_bruteforce(&d, 3, 1 << 30).unwrap().unwrap() };
        let nmu = nmu_oracle(&syntactic_monoid(&d), 4, 1 << 26).unwrap().unwrap();
        let na = na_oracle(&d, &reverse_dfa(&d), 4, 1 << 26).unwrap().unwrap();
        assert!(dim <= ns && ns <= nmu && nmu <= na, "{dim} {ns} {nmu} {na}");
    }
}
