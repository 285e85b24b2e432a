//! Deterministic and nondeterministic finite automata.
//!
//! Symbols are indices into an [`Alphabet`]; words are slices of indices.
//! DFAs are always complete.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::bits::bitset;
use crate::error::{Error, Result};

pub type StateId = usize;
pub type Symbol = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAutomaton(format!("bad symbol name `{s}`")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, a: Symbol) -> &str {
        &self.symbols[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Parses a word. Single-character alphabets may be written without separators
    /// (`"aab"`); otherwise symbols are separated by whitespace or `·`. `""` and `ε` are
    /// the empty word.
    pub fn word(&self, text: &str) -> Result<Vec<Symbol>> {
        let lookup = |s: &str| self.index_of(s).ok_or_else(|| Error::InvalidArgument(format!("unknown symbol `{s}`")));
        if text == "ε" && self.index_of("ε").is_none() {
            return Ok(Vec::new());
        }
        let separated = |c: char| c.is_whitespace() || c == '·';
        if text.contains(separated) || !self.symbols.iter().all(|s| s.chars().count() == 1) {
            text.split(separated).filter(|s| !s.is_empty()).map(lookup).collect()
        } else {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        }
    }

    /// Renders a word without whitespace; `ε` for the empty word.
    pub fn render(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let compact = self.symbols.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&a| self.name(a)).collect();
        parts.join(if compact { "" } else { "·" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    init: StateId,
    finals: FixedBitSet,
    trans: Vec<StateId>,
}

impl Dfa {
    /// `trans[q][a]` is the successor of `q` on symbol `a`.
    pub fn new(
        alphabet: Alphabet,
        init: StateId,
        finals: impl IntoIterator<Item = StateId>,
        trans: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let n = trans.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("a DFA needs at least one state".into()));
        }
        if init >= n {
            return Err(Error::InvalidAutomaton(format!("initial state {init} out of range")));
        }
        let k = alphabet.len();
        let mut flat = Vec::with_capacity(n * k);
        for (q, row) in trans.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidAutomaton(format!("state {q} has {} transitions, expected {k}", row.len())));
            }
            for &t in row {
                if t >= n {
                    return Err(Error::InvalidAutomaton(format!("transition target {t} out of range")));
                }
                flat.push(t);
            }
        }
        let mut fin = FixedBitSet::with_capacity(n);
        for f in finals {
            if f >= n {
                return Err(Error::InvalidAutomaton(format!("final state {f} out of range")));
            }
            fin.insert(f);
        }
        Ok(Dfa { alphabet, init, finals: fin, trans: flat })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(q)
    }

    pub fn next(&self, q: StateId, a: Symbol) -> StateId {
        self.trans[q * self.alphabet.len() + a]
    }

    pub fn run_from(&self, q: StateId, word: &[Symbol]) -> StateId {
        word.iter().fold(q, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.is_final(self.run_from(self.init, word))
    }

    pub fn transitions(&self) -> Vec<Vec<StateId>> {
        self.trans.chunks(self.alphabet.len()).map(<[StateId]>::to_vec).collect()
    }

    pub fn to_nfa(&self) -> Nfa {
        let n = self.state_count();
        let k = self.alphabet.len();
        let trans = (0..n * k).map(|i| bitset(n, [self.trans[i]])).collect();
        Nfa { alphabet: self.alphabet.clone(), inits: bitset(n, [self.init]), finals: self.finals.clone(), trans }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.finals.toggle_range(..);
        d
    }

    /// True iff the language is empty, i.e. no final state is reachable.
    pub fn is_empty_language(&self) -> bool {
        self.reachable_order().iter().all(|&q| !self.is_final(q))
    }

    /// Reachable states in BFS order with symbol order as tie-break.
    pub fn reachable_order(&self) -> Vec<StateId> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut order = vec![self.init];
        seen[self.init] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// BFS-shortest, lexicographically least word reaching each state (reachable states only).
    pub fn access_words(&self) -> Vec<Option<Vec<Symbol>>> {
        let n = self.state_count();
        let mut words: Vec<Option<Vec<Symbol>>> = vec![None; n];
        words[self.init] = Some(Vec::new());
        let mut queue = VecDeque::from([self.init]);
        while let Some(q) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                if words[t].is_none() {
                    let mut w = words[q].clone().unwrap();
                    w.push(a);
                    words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        words
    }

    /// Renumbers the reachable part in canonical BFS order.
    pub fn canonical(&self) -> Dfa {
        let order = self.reachable_order();
        let mut index = vec![usize::MAX; self.state_count()];
        for (i, &q) in order.iter().enumerate() {
            index[q] = i;
        }
        let k = self.alphabet.len();
        let mut trans = Vec::with_capacity(order.len() * k);
        let mut finals = FixedBitSet::with_capacity(order.len());
        for (i, &q) in order.iter().enumerate() {
            for a in 0..k {
                trans.push(index[self.next(q, a)]);
            }
            if self.is_final(q) {
                finals.insert(i);
            }
        }
        Dfa { alphabet: self.alphabet.clone(), init: 0, finals, trans }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    inits: FixedBitSet,
    finals: FixedBitSet,
    trans: Vec<FixedBitSet>,
}

impl Nfa {
    /// `trans` lists edges `(src, symbol, dst)`.
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        inits: impl IntoIterator<Item = StateId>,
        finals: impl IntoIterator<Item = StateId>,
        trans: impl IntoIterator<Item = (StateId, Symbol, StateId)>,
    ) -> Result<Self> {
        let k = alphabet.len();
        let check = |q: StateId, what: &str| {
            if q >= state_count {
                Err(Error::InvalidAutomaton(format!("{what} state {q} out of range")))
            } else {
                Ok(q)
            }
        };
        let mut i = FixedBitSet::with_capacity(state_count);
        for q in inits {
            i.insert(check(q, "initial")?);
        }
        let mut f = FixedBitSet::with_capacity(state_count);
        for q in finals {
            f.insert(check(q, "final")?);
        }
        let mut t = vec![FixedBitSet::with_capacity(state_count); state_count * k];
        for (p, a, q) in trans {
            check(p, "source")?;
            check(q, "target")?;
            if a >= k {
                return Err(Error::InvalidAutomaton(format!("symbol {a} out of range")));
            }
            t[p * k + a].insert(q);
        }
        Ok(Nfa { alphabet, inits: i, finals: f, trans: t })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.inits.len()
    }

    pub fn inits(&self) -> &FixedBitSet {
        &self.inits
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn successors(&self, q: StateId, a: Symbol) -> &FixedBitSet {
        &self.trans[q * self.alphabet.len() + a]
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        let k = self.alphabet.len();
        self.trans.iter().enumerate().flat_map(move |(i, s)| s.ones().map(move |q| (i / k, i % k, q)))
    }

    pub fn step(&self, set: &FixedBitSet, a: Symbol) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.state_count());
        for q in set.ones() {
            out.union_with(self.successors(q, a));
        }
        out
    }

    pub fn run_from(&self, set: &FixedBitSet, word: &[Symbol]) -> FixedBitSet {
        word.iter().fold(set.clone(), |s, &a| self.step(&s, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        !self.run_from(&self.inits, word).is_disjoint(&self.finals)
    }

    /// Membership in `L(N, q)`, the language accepted from state `q`.
    pub fn accepts_from(&self, q: StateId, word: &[Symbol]) -> bool {
        let start = bitset(self.state_count(), [q]);
        !self.run_from(&start, word).is_disjoint(&self.finals)
    }

    /// The same automaton with a different initial set.
    pub fn with_inits(&self, inits: FixedBitSet) -> Nfa {
        assert_eq!(inits.len(), self.state_count());
        Nfa { inits, ..self.clone() }
    }

    pub fn with_finals(&self, finals: FixedBitSet) -> Nfa {
        assert_eq!(finals.len(), self.state_count());
        Nfa { finals, ..self.clone() }
    }

    /// True iff every transition set is a singleton and there is exactly one initial state.
    pub fn is_deterministic(&self) -> bool {
        self.inits.count_ones(..) == 1 && self.trans.iter().all(|s| s.count_ones(..) == 1)
    }
}

/// Anything that can be turned into a DFA for comparison.
pub trait Acceptor {
    fn alphabet(&self) -> &Alphabet;
    fn to_dfa(&self) -> Dfa;
}

impl Acceptor for Dfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn to_dfa(&self) -> Dfa {
        self.clone()
    }
}

impl Acceptor for Nfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn to_dfa(&self) -> Dfa {
        determinize_reachable(self)
    }
}

/// Language equivalence of states: `class[p] == class[q]` iff `L(d, p) = L(d, q)`.
/// Classes are numbered in order of first occurrence.
pub fn state_equivalence(d: &Dfa) -> Vec<usize> {
    let n = d.state_count();
    let k = d.alphabet.len();
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.is_final(q))).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend((0..k).map(|a| class[d.next(q, a)]));
            let fresh = ids.len();
            next[q] = *ids.entry(sig).or_insert(fresh);
        }
        let c = ids.len();
        class = next;
        if c == count {
            return class;
        }
        count = c;
    }
}

/// Minimal complete DFA in canonical BFS order.
pub fn minimize_dfa(d: &Dfa) -> Dfa {
    let d = d.canonical();
    let class = state_equivalence(&d);
    let count = class.iter().max().map_or(0, |m| m + 1);
    let k = d.alphabet.len();
    let mut trans = vec![vec![0; k]; count];
    let mut finals = Vec::new();
    for q in 0..d.state_count() {
        for a in 0..k {
            trans[class[q]][a] = class[d.next(q, a)];
        }
        if d.is_final(q) {
            finals.push(class[q]);
        }
    }
    Dfa::new(d.alphabet.clone(), class[d.init], finals, trans).expect("quotient is well formed").canonical()
}

/// Reverses every edge and swaps initial and final states.
pub fn reverse(n: &Nfa) -> Nfa {
    let count = n.state_count();
    let k = n.alphabet.len();
    let mut trans = vec![FixedBitSet::with_capacity(count); count * k];
    for (p, a, q) in n.edges() {
        trans[q * k + a].insert(p);
    }
    Nfa { alphabet: n.alphabet.clone(), inits: n.finals.clone(), finals: n.inits.clone(), trans }
}

/// Subset construction restricted to reachable subsets, states in BFS discovery order.
pub fn determinize_reachable(n: &Nfa) -> Dfa {
    determinize_with_subsets(n).0
}

/// As [`determinize_reachable`], also returning the subset behind each state.
pub fn determinize_with_subsets(n: &Nfa) -> (Dfa, Vec<FixedBitSet>) {
    let k = n.alphabet.len();
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut subsets = vec![n.inits.clone()];
    index.insert(n.inits.clone(), 0);
    let mut trans: Vec<Vec<StateId>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let t = n.step(&subsets[i], a);
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    index.insert(t.clone(), id);
                    subsets.push(t);
                    id
                }
            };
            row.push(id);
        }
        trans.push(row);
        i += 1;
    }
    let finals: Vec<usize> = (0..subsets.len()).filter(|&s| !subsets[s].is_disjoint(&n.finals)).collect();
    (Dfa::new(n.alphabet.clone(), 0, finals, trans).expect("subset automaton is well formed"), subsets)
}

/// Language equality.
pub fn equivalent(x: &impl Acceptor, y: &impl Acceptor) -> Result<bool> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(distinguishing_word(&x.to_dfa(), &y.to_dfa()).is_none())
}

/// A shortest word on which the two DFAs disagree, if any. Alphabets must agree.
pub fn distinguishing_word(x: &Dfa, y: &Dfa) -> Option<Vec<Symbol>> {
    let k = x.alphabet.len();
    type Pair = (StateId, StateId);
    let mut parent: HashMap<Pair, Option<(Pair, Symbol)>> = HashMap::new();
    let start = (x.init, y.init);
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some((p, q)) = queue.pop_front() {
        if x.is_final(p) != y.is_final(q) {
            let mut word = Vec::new();
            let mut cur = (p, q);
            while let Some(Some((prev, a))) = parent.get(&cur) {
                word.push(*a);
                cur = *prev;
            }
            word.reverse();
            return Some(word);
        }
        for a in 0..k {
            let t = (x.next(p, a), y.next(q, a));
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                e.insert(Some(((p, q), a)));
                queue.push_back(t);
            }
        }
    }
    None
}

/// True iff `L(b) = r(L(a))`, decided by the two emptiness tests
/// `complement(L(a)) ∩ r(L(b)) = ∅` and `complement(L(b)) ∩ r(L(a)) = ∅`.
pub fn check_reverse_pair(a: &Dfa, b: &Dfa) -> Result<bool> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(complement_misses_reverse(a, b) && complement_misses_reverse(b, a))
}

/// Emptiness of `complement(L(a)) ∩ r(L(b))` by search in the product of `a` with `reverse(b)`.
fn complement_misses_reverse(a: &Dfa, b: &Dfa) -> bool {
    let k = a.alphabet.len();
    let nb = b.state_count();
    let mut pred: Vec<Vec<StateId>> = vec![Vec::new(); nb * k];
    for q in 0..nb {
        for s in 0..k {
            pred[b.next(q, s) * k + s].push(q);
        }
    }
    let mut seen = vec![false; a.state_count() * nb];
    let mut stack = Vec::new();
    for q in b.finals.ones() {
        seen[a.init * nb + q] = true;
        stack.push((a.init, q));
    }
    while let Some((p, q)) = stack.pop() {
        if !a.is_final(p) && q == b.init {
            return false;
        }
        for s in 0..k {
            let p2 = a.next(p, s);
            for &q2 in &pred[q * k + s] {
                if !seen[p2 * nb + q2] {
                    seen[p2 * nb + q2] = true;
                    stack.push((p2, q2));
                }
            }
        }
    }
    true
}

/// Minimal DFA of the reverse language.
pub fn reverse_dfa(a: &Dfa) -> Dfa {
    minimize_dfa(&determinize_reachable(&reverse(&a.to_nfa())))
}

/// An NFA is atomic iff the reachable subset construction of its reverse is minimal.
pub fn is_atomic(n: &Nfa) -> bool {
    let d = determinize_reachable(&reverse(n));
    minimize_dfa(&d).state_count() == d.state_count()
}

/// True iff every state language of `n` is a union of syntactic congruence classes of `L(min_dfa)`.
pub fn is_subatomic(n: &Nfa, min_dfa: &Dfa) -> Result<bool> {
    if !equivalent(n, min_dfa)? {
        return Err(Error::LanguageMismatch);
    }
    let monoid = crate::langalg::syntactic_monoid(min_dfa);
    let k = n.alphabet.len();
    for q in 0..n.state_count() {
        // product of the monoid's right action with the subset automaton started at {q}
        let mut verdict: Vec<Option<bool>> = vec![None; monoid.size()];
        let mut seen: HashSet<(usize, FixedBitSet)> = HashSet::new();
        let start = (0usize, bitset(n.state_count(), [q]));
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some((m, set)) = stack.pop() {
            let acc = !set.is_disjoint(&n.finals);
            match verdict[m] {
                Some(v) if v != acc => return Ok(false),
                _ => verdict[m] = Some(acc),
            }
            for a in 0..k {
                let t = (monoid.mul(m, monoid.letter(a)), n.step(&set, a));
                if seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
    }
    Ok(true)
}
