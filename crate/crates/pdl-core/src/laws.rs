//! The identity suite: algebraic laws relating `fix`, `Fix`, `~`,
//! intersection, difference, and loop forms, checked as exact truth-set or
//! relation equalities over seeded random models.
//!
//! Two of the laws assume the compared programs denote partial functions;
//! they run only on deterministic models, over a pool of programs closed
//! under that property.

use crate::semantics::{
    check_prog_identity, check_prop_identity, random_model, KripkeModel, ProgIdentity,
    PropIdentity,
};
use crate::syntax::{Program, Proposition};

/// `p ~ q` spelled with diamonds and intersection: the two programs agree
/// exactly when they reach a common successor or both reach nothing. Sound
/// for partial functions only.
pub fn tie_via_diamonds(p: Program, q: Program) -> Proposition {
    Proposition::or(
        Proposition::diamond(Program::inter(p.clone(), q.clone()), Proposition::True),
        Proposition::not(Proposition::or(
            Proposition::diamond(p, Proposition::True),
            Proposition::diamond(q, Proposition::True),
        )),
    )
}

/// `p ∩ q` spelled with a tie test: run p only where p and q agree. Sound
/// for partial functions only.
pub fn inter_via_tie(p: Program, q: Program) -> Program {
    Program::seq(Program::test(Proposition::tie(p.clone(), q)), p)
}

enum Claim {
    Props(Proposition, Proposition),
    Progs(Program, Program),
}

struct Law {
    name: &'static str,
    deterministic_only: bool,
    instances: fn() -> Vec<Claim>,
}

fn prog_pool() -> Vec<Program> {
    let a = Program::atom("a");
    let b = Program::atom("b");
    let x = Proposition::atom("x");
    vec![
        a.clone(),
        b.clone(),
        Program::Skip,
        Program::seq(a.clone(), b.clone()),
        Program::test(x.clone()),
        Program::if_then_else(x, a.clone(), b.clone()),
        Program::union(a, b),
    ]
}

/// Like [`prog_pool`] but every member denotes a partial function whenever
/// the atomic programs do — so no union.
fn det_prog_pool() -> Vec<Program> {
    prog_pool()
        .into_iter()
        .filter(|p| !matches!(p, Program::Union(..)))
        .collect()
}

fn prop_pool() -> Vec<Proposition> {
    let x = Proposition::atom("x");
    let y = Proposition::atom("y");
    vec![
        x.clone(),
        Proposition::not(y.clone()),
        Proposition::and(x.clone(), y.clone()),
        Proposition::diamond(Program::atom("a"), x),
    ]
}

fn unary<F: Fn(Program) -> Claim>(f: F) -> Vec<Claim> {
    prog_pool().into_iter().map(f).collect()
}

fn binary<F: Fn(Program, Program) -> Claim>(pool: Vec<Program>, f: F) -> Vec<Claim> {
    pool.iter()
        .flat_map(|p| pool.iter().map(|q| f(p.clone(), q.clone())))
        .collect()
}

fn with_props<F: Fn(Program, Proposition) -> Claim>(f: F) -> Vec<Claim> {
    prog_pool()
        .iter()
        .flat_map(|p| prop_pool().into_iter().map(|a| f(p.clone(), a)))
        .collect()
}

fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "Fix is fix-or-stuck",
            deterministic_only: false,
            instances: || {
                unary(|p| {
                    Claim::Props(
                        Proposition::big_fix(p.clone()),
                        Proposition::or(
                            Proposition::fix(p.clone()),
                            Proposition::box_(p, Proposition::False),
                        ),
                    )
                })
            },
        },
        Law {
            name: "fix is Fix-and-total",
            deterministic_only: false,
            instances: || {
                unary(|p| {
                    Claim::Props(
                        Proposition::fix(p.clone()),
                        Proposition::and(
                            Proposition::big_fix(p.clone()),
                            Proposition::diamond(p, Proposition::True),
                        ),
                    )
                })
            },
        },
        Law {
            name: "fix is tie-with-skip",
            deterministic_only: false,
            instances: || {
                unary(|p| {
                    Claim::Props(
                        Proposition::fix(p.clone()),
                        Proposition::tie(p, Program::Skip),
                    )
                })
            },
        },
        Law {
            name: "intersection is double difference",
            deterministic_only: false,
            instances: || {
                binary(prog_pool(), |p, q| {
                    Claim::Progs(
                        Program::inter(p.clone(), q.clone()),
                        Program::diff(p.clone(), Program::diff(p, q)),
                    )
                })
            },
        },
        Law {
            name: "fix by differencing away the loop",
            deterministic_only: false,
            instances: || {
                unary(|p| {
                    Claim::Props(
                        Proposition::fix(p.clone()),
                        Proposition::and(
                            Proposition::diamond(p.clone(), Proposition::True),
                            Proposition::box_(
                                Program::diff(
                                    p.clone(),
                                    Program::inter(p, Program::Skip),
                                ),
                                Proposition::False,
                            ),
                        ),
                    )
                })
            },
        },
        Law {
            name: "box-star is a while loop",
            deterministic_only: false,
            instances: || {
                with_props(|p, a| {
                    Claim::Props(
                        Proposition::box_(Program::star(p.clone()), a.clone()),
                        Proposition::box_(Program::while_do(a, p), Proposition::False),
                    )
                })
            },
        },
        Law {
            name: "diamond-star is a while loop",
            deterministic_only: false,
            instances: || {
                with_props(|p, a| {
                    Claim::Props(
                        Proposition::diamond(Program::star(p.clone()), a.clone()),
                        Proposition::diamond(
                            Program::while_do(Proposition::not(a), p),
                            Proposition::True,
                        ),
                    )
                })
            },
        },
        Law {
            name: "tie by diamonds on partial functions",
            deterministic_only: true,
            instances: || {
                binary(det_prog_pool(), |p, q| {
                    Claim::Props(
                        Proposition::tie(p.clone(), q.clone()),
                        tie_via_diamonds(p, q),
                    )
                })
            },
        },
        Law {
            name: "intersection by tie test on partial functions",
            deterministic_only: true,
            instances: || {
                binary(det_prog_pool(), |p, q| {
                    Claim::Progs(Program::inter(p.clone(), q.clone()), inter_via_tie(p, q))
                })
            },
        },
    ]
}

#[derive(Debug, Clone)]
pub struct LawResult {
    pub name: String,
    pub deterministic_only: bool,
    pub checked: u64,
    pub failures: u64,
    /// First few failure descriptions, for reporting.
    pub samples: Vec<String>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const SAMPLE_CAP: usize = 5;

/// Runs every law over `models` random models derived from `seed` (five or
/// fewer states, two atomic programs, two atomic propositions). Half the
/// models are deterministic unless `only_deterministic` makes them all so.
pub fn run_identity_suite(seed: u64, models: usize, only_deterministic: bool) -> Vec<LawResult> {
    let suite = laws();
    let mut results: Vec<LawResult> = suite
        .iter()
        .map(|l| LawResult {
            name: l.name.to_string(),
            deterministic_only: l.deterministic_only,
            checked: 0,
            failures: 0,
            samples: Vec::new(),
        })
        .collect();
    for i in 0..models {
        let deterministic = only_deterministic || i % 2 == 1;
        let n_states = 1 + (i % 5);
        let density = [0.2, 0.4, 0.6][i % 3];
        let m = random_model(
            seed.wrapping_add(i as u64),
            n_states,
            &["a", "b"],
            &["x", "y"],
            deterministic,
            density,
        );
        for (law, result) in suite.iter().zip(results.iter_mut()) {
            if law.deterministic_only && !deterministic {
                continue;
            }
            for claim in (law.instances)() {
                result.checked += 1;
                if let Some(witness) = check_claim(&m, &claim) {
                    result.failures += 1;
                    if result.samples.len() < SAMPLE_CAP {
                        result.samples.push(format!("model #{i}: differs at {witness}"));
                    }
                }
            }
        }
    }
    results
}

fn check_claim(m: &KripkeModel, claim: &Claim) -> Option<String> {
    match claim {
        Claim::Props(lhs, rhs) => {
            match check_prop_identity(m, lhs, rhs).expect("random models evaluate") {
                PropIdentity::Equal => None,
                PropIdentity::Counterexample(s) => Some(s),
            }
        }
        Claim::Progs(lhs, rhs) => {
            match check_prog_identity(m, lhs, rhs).expect("random models evaluate") {
                ProgIdentity::Equal => None,
                ProgIdentity::Counterexample(a, b) => Some(format!("({a}, {b})")),
            }
        }
    }
}
