//! Exact probability on configuration spaces: pushforward laws of solution
//! maps, conditional tables, conditional independence and do-calculus checks.

mod dist;
mod docalc;
mod rational;
mod table1;

pub use dist::{
    cond_independent, conditional, conditional_dropping, pushforward, pushforward_with, CiOutcome, CiWitness,
    CondQuery, CondTable, DropOutcome, DropWitness, ExactDist,
};
pub use docalc::{
    context_in_scope, verify_docalculus, verify_docalculus_with, verify_rule1_tikka, DocalcOptions, DocalcReport,
};
pub use rational::{format_rational, parse_rational, rat, round_half_up, to_f64, truncate_decimal, Rational};
pub use table1::{reproduce_table1, Table1Cell, Table1Report};
