//! The star form and the while form of each grid formula must have the same
//! truth set on every model. Exhaustive over all two-state models for the
//! formulas that mention only N and E; seeded random models otherwise.

use std::collections::BTreeSet;

use pdl_core::reduction::{gamma, rho1, rho2, rho3, Encoding, Form};
use pdl_core::semantics::{random_model, truth_set, KripkeModel, Relation};
use pdl_core::tiling::TileSet;
use pdl_core::Proposition;

fn one_tile() -> TileSet {
    TileSet {
        tiles: vec!["T0".into()],
        h: [("T0".to_string(), "T0".to_string())].into(),
        v: [("T0".to_string(), "T0".to_string())].into(),
        neon: ["T0".to_string()].into(),
        start: "T0".into(),
    }
}

fn checkerboard() -> TileSet {
    let pairs = |xs: &[(&str, &str)]| -> BTreeSet<(String, String)> {
        xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    TileSet {
        tiles: vec!["A".into(), "B".into()],
        h: pairs(&[("A", "B"), ("B", "A")]),
        v: pairs(&[("A", "B"), ("B", "A")]),
        neon: ["A".to_string()].into(),
        start: "A".into(),
    }
}

/// Every model with two states, relations for N and E, and one atom T0:
/// 2^(2*4) relation choices times 2^2 valuations.
fn all_two_state_models() -> impl Iterator<Item = KripkeModel> {
    (0u32..1 << 10).map(|bits| {
        let mut m = KripkeModel::new(["0", "1"], false);
        let pair = |ix: u32| ((ix / 2) as usize, (ix % 2) as usize);
        for (p, base) in [("N", 0u32), ("E", 4)] {
            let pairs: BTreeSet<(usize, usize)> = (0..4)
                .filter(|i| bits >> (base + i) & 1 == 1)
                .map(pair)
                .collect();
            m.programs.insert(p.to_string(), Relation { pairs });
        }
        let val: BTreeSet<usize> = (0..2).filter(|s| bits >> (8 + s) & 1 == 1).collect();
        m.valuation.insert("T0".to_string(), val);
        m
    })
}

fn assert_same_truth(m: &KripkeModel, star: &Proposition, while_form: &Proposition, what: &str) {
    let a = truth_set(m, star).expect("evaluates");
    let b = truth_set(m, while_form).expect("evaluates");
    assert_eq!(a, b, "{what} differs on {m:?}");
}

#[test]
fn north_east_formulas_agree_on_every_two_state_model() {
    let ts = one_tile();
    let pairs = [
        (rho1(Encoding::Tie, Form::Star), rho1(Encoding::Tie, Form::While), "rho1/tie"),
        (rho2(&ts, Form::Star), rho2(&ts, Form::While), "rho2"),
        (rho3(&ts, Form::Star), rho3(&ts, Form::While), "rho3"),
    ];
    for m in all_two_state_models() {
        for (star, while_form, what) in &pairs {
            assert_same_truth(&m, star, while_form, what);
        }
    }
}

#[test]
fn four_program_formulas_agree_on_random_models() {
    let ts = checkerboard();
    let fix = gamma(&ts, Encoding::Fix, Form::Star);
    let fix_loop = gamma(&ts, Encoding::Fix, Form::While);
    let tie = gamma(&ts, Encoding::Tie, Form::Star);
    let tie_loop = gamma(&ts, Encoding::Tie, Form::While);
    let progs = ["N", "E", "S", "W"];
    let props = ["A", "B"];
    for seed in 0..300u64 {
        let n_states = 1 + (seed % 4) as usize;
        let density = [0.25, 0.5, 0.75][(seed % 3) as usize];
        let m = random_model(seed, n_states, &progs, &props, seed % 2 == 0, density);
        assert_same_truth(&m, &fix.rho1, &fix_loop.rho1, "rho1/fix");
        assert_same_truth(&m, &fix.rho2, &fix_loop.rho2, "rho2/fix");
        assert_same_truth(&m, &fix.rho3, &fix_loop.rho3, "rho3/fix");
        assert_same_truth(&m, &fix.gamma, &fix_loop.gamma, "gamma/fix");
        assert_same_truth(&m, &fix.gamma_t, &fix_loop.gamma_t, "gamma_t/fix");
        assert_same_truth(&m, &tie.gamma, &tie_loop.gamma, "gamma/tie");
        assert_same_truth(&m, &tie.gamma_t, &tie_loop.gamma_t, "gamma_t/tie");
    }
}
