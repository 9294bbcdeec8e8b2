//! Monadic second-order logic with a parity predicate, evaluated by brute
//! force, and the formulas that express vertex-minors through Eulerian
//! vectors of isotropic systems.

pub mod eulerian;
pub mod eval;
pub mod family;
pub mod formula;
pub mod methods;

pub use eulerian::{
    eulerian_vectors, graph_from_eulerian, graph_from_eulerian_bruteforce, is_eulerian, is_eulerian_bruteforce,
    is_member, is_member_bruteforce, switch, switching_sequence, EulerianVector, Part,
};
pub use eval::{
    count_bruteforce, evaluate, evaluate_naive, list_bruteforce, optimize_bruteforce, selection_bruteforce, Compiled,
    Evaluator, Goal, OpenQuery, Program, DEFAULT_BRUTEFORCE_LIMIT,
};
pub use family::{
    adj_formula, base, build_complete_vm, build_formula_family, build_prop_vm, build_vm_formula,
    build_vm_prime_formula, complete_sentence, disjoint, eul, even_inter, family_formula, identity_assignment,
    member, part, relativize, subset, vertex_var, NamedFormula, EULERIAN_VARS,
};
pub use formula::{Assignment, Formula, Kind, Value, Var};
pub use methods::{method1_sequence, method2_sequence, VmFormulaBank};
