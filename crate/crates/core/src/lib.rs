//! Automata, finite join-semilattices and the relational category `Dep`, with
//! tools for atomic and subatomic NFA minimization at small scale.

pub mod automata;
pub mod biclique;
pub mod bits;
pub mod certify;
pub mod dep;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod langalg;
pub mod ns;
pub mod semilattice;
pub mod speclang;

pub use automata::{Acceptor, Alphabet, Dfa, Nfa, StateId, Symbol};
pub use bits::BitMatrix;
pub use dep::{DepMorphism, Rel};
pub use error::{Error, Result};
pub use langalg::{DerivativeSystem, JslDfa, MonoidRecognizer};
pub use semilattice::{FinLattice, JslMorphism};
