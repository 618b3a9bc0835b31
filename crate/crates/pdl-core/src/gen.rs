//! Seeded random formula and program generators, used to drive print/parse
//! round-trip and rewrite-equivalence tests reproducibly.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Program, Proposition};

const PROP_ATOMS: &[&str] = &["x", "y", "z", "neon"];
const PROG_ATOMS: &[&str] = &["a", "b", "N", "E"];

pub fn random_prop(seed: u64, max_depth: usize) -> Proposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    prop(&mut rng, max_depth)
}

pub fn random_prog(seed: u64, max_depth: usize) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    prog(&mut rng, max_depth)
}

fn prop(rng: &mut ChaCha8Rng, depth: usize) -> Proposition {
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Proposition::True,
            1 => Proposition::False,
            _ => Proposition::atom(*PROP_ATOMS.choose(rng).expect("nonempty pool")),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Proposition::atom(*PROP_ATOMS.choose(rng).expect("nonempty pool")),
        1 => Proposition::not(prop(rng, d)),
        2 => Proposition::and(prop(rng, d), prop(rng, d)),
        3 => Proposition::or(prop(rng, d), prop(rng, d)),
        4 => Proposition::implies(prop(rng, d), prop(rng, d)),
        5 => Proposition::diamond(prog(rng, d), prop(rng, d)),
        6 => Proposition::box_(prog(rng, d), prop(rng, d)),
        7 => Proposition::fix(prog(rng, d)),
        8 => Proposition::big_fix(prog(rng, d)),
        _ => Proposition::tie(prog(rng, d), prog(rng, d)),
    }
}

fn prog(rng: &mut ChaCha8Rng, depth: usize) -> Program {
    if depth == 0 {
        return if rng.gen_bool(0.25) {
            Program::Skip
        } else {
            Program::atom(*PROG_ATOMS.choose(rng).expect("nonempty pool"))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Program::atom(*PROG_ATOMS.choose(rng).expect("nonempty pool")),
        1 => Program::Skip,
        2 => Program::test(prop(rng, d)),
        3 => Program::seq(prog(rng, d), prog(rng, d)),
        4 => Program::union(prog(rng, d), prog(rng, d)),
        5 => Program::inter(prog(rng, d), prog(rng, d)),
        6 => Program::diff(prog(rng, d), prog(rng, d)),
        7 => Program::star(prog(rng, d)),
        8 => Program::if_then_else(prop(rng, d), prog(rng, d), prog(rng, d)),
        _ => Program::while_do(prop(rng, d), prog(rng, d)),
    }
}
