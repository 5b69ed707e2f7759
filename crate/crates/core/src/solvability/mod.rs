//! Policies, closed-loop solutions, solvability and causality, and the
//! three-factor decomposition of solution maps.

mod causality;
mod factorization;
mod policy;
mod solve;

pub use causality::{
    check_causal_ordering, find_causal_ordering, CausalOrdering, CausalityCheck, CausalityLimits, CausalityViolation,
};
pub use factorization::{verify_factorization, DependencyCheck, FactorizationReport};
pub use policy::{Policy, PolicyProfile};
pub use solve::{
    enumerate_policies, is_model_solvable, is_model_solvable_with, policy_count, reparametrize, sample_policies,
    sample_profile, solve, solve_with, PolicyIter, SampleStrategy, SolutionMap, SolvabilityVerdict,
    DEFAULT_PROFILE_BUDGET,
};
