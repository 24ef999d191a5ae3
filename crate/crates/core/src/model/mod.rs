//! Concepts, roles, axioms, rules and knowledge bases, plus compilation of
//! the supported fragment into datalog.

mod axiom;
mod concept;
mod kb;
pub mod normalize;
pub mod validate;

pub use axiom::{Atom, Axiom, Rule, Term};
pub(crate) use axiom::quote;
pub use concept::{ConceptExpr, RoleExpr};
pub use kb::{Cumulativity, Declarations, EventTraits, KnowledgeBase, Sign};
pub use normalize::{normalize_kb, CheckOnly, NormalizedProgram, Origin, PAtom, PTerm, Pred, ProgramRule};
pub use validate::{is_assertable, validate_kb, IssueKind, Subject, ValidationIssue};
