//! Finite witnesses: Kripke models built from periodic tilings, exhaustive
//! bounded model search, and the combined torus-shaped satisfiability loop.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::reduction::{gamma, Encoding, Form};
use crate::semantics::{truth_set, truth_set_named, KripkeModel, Relation};
use crate::syntax::Proposition;
use crate::tiling::{
    diagonal_neon_states, search_tiling_counted, verify_tiling, Shape, TileSet, Tiling,
    TilingVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("not a usable torus tiling: {0}")]
    InvalidTiling(String),
}

/// Wraps a valid torus tiling into a model: states are the torus positions
/// (named "i,j", row by row), E/N/W/S step around the torus, and each
/// position carries its tile's atom. All four relations are bijections.
pub fn torus_model(ts: &TileSet, t: &Tiling) -> Result<KripkeModel, WitnessError> {
    let shape = t.shape();
    let Shape::Torus { width: n, height: m } = shape else {
        return Err(WitnessError::InvalidTiling("shape is a rectangle".into()));
    };
    match verify_tiling(ts, t) {
        Ok(TilingVerdict::Valid) => {}
        Ok(TilingVerdict::Violation { position, .. }) => {
            return Err(WitnessError::InvalidTiling(format!(
                "adjacency violated at {position:?}"
            )))
        }
        Err(e) => return Err(WitnessError::InvalidTiling(e.to_string())),
    }
    let ix = |i: usize, j: usize| j * n + i;
    let states: Vec<String> = (0..m)
        .flat_map(|j| (0..n).map(move |i| format!("{i},{j}")))
        .collect();
    let mut model = KripkeModel::new(states, true);
    let mut east = BTreeSet::new();
    let mut north = BTreeSet::new();
    let mut west = BTreeSet::new();
    let mut south = BTreeSet::new();
    for j in 0..m {
        for i in 0..n {
            let here = ix(i, j);
            east.insert((here, ix((i + 1) % n, j)));
            west.insert((ix((i + 1) % n, j), here));
            north.insert((here, ix(i, (j + 1) % m)));
            south.insert((ix(i, (j + 1) % m), here));
        }
    }
    model.programs.insert("E".into(), Relation { pairs: east });
    model.programs.insert("N".into(), Relation { pairs: north });
    model.programs.insert("W".into(), Relation { pairs: west });
    model.programs.insert("S".into(), Relation { pairs: south });
    for tile in &ts.tiles {
        model.valuation.insert(tile.clone(), BTreeSet::new());
    }
    for j in 0..m {
        for i in 0..n {
            model
                .valuation
                .get_mut(t.get(i, j))
                .expect("verified tilings use declared tiles")
                .insert(ix(i, j));
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedSat {
    /// A model whose state "0" satisfies the formula.
    Found(KripkeModel),
    NoneUpTo(usize),
}

#[derive(Debug, Clone)]
pub struct BoundedSearch {
    pub outcome: BoundedSat,
    /// Candidate models examined.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model search budget of {budget} candidates exhausted at {states} states after {nodes} candidates")]
pub struct BudgetExceeded {
    pub budget: u64,
    pub nodes: u64,
    pub states: usize,
}

/// Rightmost-digit-fastest counter over mixed radices; enumerates every
/// combination exactly once.
struct Odometer {
    radices: Vec<u64>,
    digits: Vec<u64>,
    fresh: bool,
}

impl Odometer {
    fn new(radices: Vec<u64>) -> Odometer {
        let digits = vec![0; radices.len()];
        Odometer { radices, digits, fresh: true }
    }

    fn next(&mut self) -> Option<&[u64]> {
        if self.fresh {
            self.fresh = false;
            return Some(&self.digits);
        }
        for pos in (0..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.radices[pos] {
                return Some(&self.digits);
            }
            self.digits[pos] = 0;
        }
        None
    }
}

/// Exhaustively enumerates models over the formula's atomic names, smallest
/// state count first, and returns the first whose state "0" satisfies the
/// formula. Requiring the witness state to be state 0 canonicalizes away
/// state renamings. The deterministic flag restricts every atomic program
/// to a partial function.
pub fn bounded_sat(
    f: &Proposition,
    max_states: usize,
    deterministic: bool,
    budget: Option<u64>,
) -> Result<BoundedSearch, BudgetExceeded> {
    let names = f.atomic_names();
    let progs: Vec<String> = names.progs.into_iter().collect();
    let props: Vec<String> = names.props.into_iter().collect();
    let mut nodes: u64 = 0;
    for k in 1..=max_states {
        let kk = k as u64;
        let radices: Vec<u64> = if deterministic {
            let rel = std::iter::repeat_n(kk + 1, progs.len() * k);
            rel.chain(std::iter::repeat_n(2, props.len() * k)).collect()
        } else {
            vec![2; progs.len() * k * k + props.len() * k]
        };
        let mut odo = Odometer::new(radices);
        while let Some(digits) = odo.next() {
            if let Some(b) = budget {
                if nodes >= b {
                    return Err(BudgetExceeded { budget: b, nodes, states: k });
                }
            }
            nodes += 1;
            let m = decode_candidate(k, &progs, &props, deterministic, digits);
            let sat = truth_set(&m, f).expect("enumerated models are valid");
            if sat.contains(&0) {
                return Ok(BoundedSearch { outcome: BoundedSat::Found(m), nodes });
            }
        }
    }
    Ok(BoundedSearch { outcome: BoundedSat::NoneUpTo(max_states), nodes })
}

fn decode_candidate(
    k: usize,
    progs: &[String],
    props: &[String],
    deterministic: bool,
    digits: &[u64],
) -> KripkeModel {
    let mut m = KripkeModel::new((0..k).map(|i| i.to_string()), deterministic);
    let mut pos = 0;
    for name in progs {
        let mut pairs = BTreeSet::new();
        if deterministic {
            for from in 0..k {
                let d = digits[pos];
                pos += 1;
                if d > 0 {
                    pairs.insert((from, (d - 1) as usize));
                }
            }
        } else {
            for from in 0..k {
                for to in 0..k {
                    if digits[pos] == 1 {
                        pairs.insert((from, to));
                    }
                    pos += 1;
                }
            }
        }
        m.programs.insert(name.clone(), Relation { pairs });
    }
    for name in props {
        let mut set = BTreeSet::new();
        for state in 0..k {
            if digits[pos] == 1 {
                set.insert(state);
            }
            pos += 1;
        }
        m.valuation.insert(name.clone(), set);
    }
    m
}

/// Which formula the torus search must satisfy: the two grid constraints at
/// every state, or the full formula (start pin and recurrence included) at
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    GammaT,
    FullGamma,
}

#[derive(Debug, Clone)]
pub enum TorusSat {
    Found {
        n: usize,
        m: usize,
        tiling: Tiling,
        model: KripkeModel,
        formula: Proposition,
        satisfying: BTreeSet<String>,
    },
    NoneUpTo {
        max_n: usize,
        max_m: usize,
    },
}

#[derive(Debug, Clone)]
pub struct TorusSearch {
    pub outcome: TorusSat,
    /// Tiling-search placements across all attempted shapes.
    pub nodes: u64,
}

/// Tries torus shapes in increasing area (ties by width), tiling each and
/// model-checking the requested formula on the wrapped model. For the full
/// formula the origin is pinned to the start tile and shapes whose found
/// tiling has no neon on the stepping diagonal are skipped — on a torus the
/// recurrence constraint holds exactly when that orbit hits neon.
pub fn torus_sat(
    ts: &TileSet,
    max_n: usize,
    max_m: usize,
    kind: WitnessKind,
    encoding: Encoding,
) -> TorusSearch {
    let mut shapes: Vec<(usize, usize)> = (1..=max_n)
        .flat_map(|n| (1..=max_m).map(move |m| (n, m)))
        .collect();
    shapes.sort_by_key(|&(n, m)| (n * m, n));
    let out = gamma(ts, encoding, Form::Star);
    let mut nodes = 0u64;
    for (n, m) in shapes {
        let shape = Shape::Torus { width: n, height: m };
        let origin = match kind {
            WitnessKind::FullGamma => Some(ts.start.as_str()),
            WitnessKind::GammaT => None,
        };
        let (tiling, searched) = search_tiling_counted(ts, shape, origin);
        nodes += searched;
        let Some(tiling) = tiling else { continue };
        if kind == WitnessKind::FullGamma {
            let orbit = diagonal_neon_states(ts, &tiling).expect("search output is a torus");
            if orbit.is_empty() {
                continue;
            }
        }
        let model = torus_model(ts, &tiling).expect("search output verifies");
        let formula = match kind {
            WitnessKind::GammaT => out.gamma_t.clone(),
            WitnessKind::FullGamma => out.gamma.clone(),
        };
        let satisfying = truth_set_named(&model, &formula).expect("torus models are valid");
        let good = match kind {
            WitnessKind::GammaT => satisfying.len() == model.states.len(),
            WitnessKind::FullGamma => satisfying.contains("0,0"),
        };
        if good {
            return TorusSearch {
                outcome: TorusSat::Found { n, m, tiling, model, formula, satisfying },
                nodes,
            };
        }
    }
    TorusSearch { outcome: TorusSat::NoneUpTo { max_n, max_m }, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::square_prop;
    use crate::semantics::{denote, validate_model};
    use crate::syntax::Program;
    use crate::tiling::search_tiling;

    fn tileset(
        tiles: &[&str],
        h: &[(&str, &str)],
        v: &[(&str, &str)],
        neon: &[&str],
        start: &str,
    ) -> TileSet {
        TileSet {
            tiles: tiles.iter().map(|s| s.to_string()).collect(),
            h: h.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            v: v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            neon: neon.iter().map(|s| s.to_string()).collect(),
            start: start.to_string(),
        }
    }

    fn one_tile() -> TileSet {
        tileset(&["T0"], &[("T0", "T0")], &[("T0", "T0")], &["T0"], "T0")
    }

    fn checkerboard() -> TileSet {
        tileset(
            &["A", "B"],
            &[("A", "B"), ("B", "A")],
            &[("A", "B"), ("B", "A")],
            &["A"],
            "A",
        )
    }

    #[test]
    fn one_tile_torus_is_the_identity_loop_model() {
        let ts = one_tile();
        let t = search_tiling(&ts, Shape::Torus { width: 1, height: 1 }, Some("T0")).unwrap();
        let m = torus_model(&ts, &t).unwrap();
        assert_eq!(m.states, vec!["0,0"]);
        for p in ["N", "E", "S", "W"] {
            assert_eq!(m.programs[p].pairs, BTreeSet::from([(0, 0)]));
        }
        assert_eq!(m.valuation["T0"], BTreeSet::from([0]));
        assert!(validate_model(&m).iter().all(|d| !d.is_error()));
    }

    #[test]
    fn round_trips_compose_to_the_identity() {
        let ts = checkerboard();
        let t = search_tiling(&ts, Shape::Torus { width: 2, height: 2 }, Some("A")).unwrap();
        let m = torus_model(&ts, &t).unwrap();
        let skip = denote(&m, &Program::Skip).unwrap();
        for path in [["N", "S"], ["S", "N"], ["E", "W"], ["W", "E"]] {
            let prog = Program::seq(Program::atom(path[0]), Program::atom(path[1]));
            assert_eq!(denote(&m, &prog).unwrap(), skip, "{path:?}");
        }
        let around =
            Program::seq_all(["N", "E", "S", "W"].iter().map(|p| Program::atom(*p)));
        assert_eq!(denote(&m, &around).unwrap(), skip);
    }

    #[test]
    fn torus_models_saturate_the_square_everywhere() {
        let sets = [one_tile(), checkerboard()];
        let shapes = [(1usize, 1usize), (2, 2), (2, 1)];
        for ts in &sets {
            for &(n, m) in &shapes {
                let Some(t) = search_tiling(ts, Shape::Torus { width: n, height: m }, None)
                else {
                    continue;
                };
                let model = torus_model(ts, &t).unwrap();
                for encoding in [Encoding::Fix, Encoding::Tie] {
                    let sat = truth_set(&model, &square_prop(encoding)).unwrap();
                    assert_eq!(sat.len(), model.states.len(), "{encoding:?} on {n}x{m}");
                }
            }
        }
    }

    #[test]
    fn rejects_rectangles_and_broken_tilings() {
        let ts = one_tile();
        let rect = Tiling::new(Shape::Rect { width: 1, height: 1 }, vec!["T0".into()]).unwrap();
        assert!(torus_model(&ts, &rect).is_err());
        let mut no_h = ts.clone();
        no_h.h.clear();
        let t = Tiling::new(Shape::Torus { width: 1, height: 1 }, vec!["T0".into()]).unwrap();
        assert!(torus_model(&no_h, &t).is_err());
    }

    #[test]
    fn bounded_sat_finds_the_trivial_and_rejects_the_absurd() {
        let valid = Proposition::fix(Program::Skip);
        let found = bounded_sat(&valid, 2, false, None).unwrap();
        assert!(matches!(found.outcome, BoundedSat::Found(ref m) if m.states.len() == 1));

        let p = Program::atom("p");
        let absurd = Proposition::and(
            Proposition::diamond(p.clone(), Proposition::True),
            Proposition::box_(p, Proposition::False),
        );
        let missed = bounded_sat(&absurd, 2, false, None).unwrap();
        assert!(matches!(missed.outcome, BoundedSat::NoneUpTo(2)));
    }

    #[test]
    fn bounded_sat_finds_the_identity_torus_for_the_one_tile_constraints() {
        let out = gamma(&one_tile(), Encoding::Fix, Form::Star);
        let found = bounded_sat(&out.gamma_t, 1, true, None).unwrap();
        let BoundedSat::Found(m) = found.outcome else {
            panic!("one-state witness expected");
        };
        for p in ["N", "E", "S", "W"] {
            assert_eq!(m.programs[p].pairs, BTreeSet::from([(0, 0)]), "{p}");
        }
        assert_eq!(m.valuation["T0"], BTreeSet::from([0]));
    }

    #[test]
    fn bounded_sat_budget_is_a_distinct_outcome() {
        let out = gamma(&checkerboard(), Encoding::Fix, Form::Star);
        let err = bounded_sat(&out.gamma_t, 2, false, Some(10)).unwrap_err();
        assert_eq!(err.budget, 10);
        assert!(err.nodes >= 10);
    }

    #[test]
    fn torus_search_finds_the_smallest_checkerboard() {
        let search = torus_sat(&checkerboard(), 4, 4, WitnessKind::GammaT, Encoding::Fix);
        let TorusSat::Found { n, m, model, satisfying, .. } = search.outcome else {
            panic!("checkerboard should wrap at 2x2");
        };
        assert_eq!((n, m), (2, 2));
        assert_eq!(satisfying.len(), model.states.len());
    }

    #[test]
    fn full_formula_needs_neon_on_the_diagonal() {
        let search = torus_sat(&checkerboard(), 4, 4, WitnessKind::FullGamma, Encoding::Fix);
        let TorusSat::Found { n, m, satisfying, .. } = search.outcome else {
            panic!("neon checkerboard should satisfy the full formula");
        };
        assert_eq!((n, m), (2, 2));
        assert!(satisfying.contains("0,0"));

        let mut no_neon = checkerboard();
        no_neon.neon.clear();
        let search = torus_sat(&no_neon, 3, 3, WitnessKind::FullGamma, Encoding::Fix);
        assert!(matches!(search.outcome, TorusSat::NoneUpTo { max_n: 3, max_m: 3 }));
    }

    #[test]
    fn no_horizontal_pairs_means_no_witness() {
        let ts = tileset(&["T0"], &[], &[("T0", "T0")], &["T0"], "T0");
        let search = torus_sat(&ts, 3, 3, WitnessKind::GammaT, Encoding::Fix);
        assert!(matches!(search.outcome, TorusSat::NoneUpTo { .. }));
    }

    #[test]
    fn recurrence_verdict_matches_the_orbit_oracle() {
        // vary the neon subset over a fixed 2x2 checkerboard tiling; the
        // model checker's verdict at the origin must equal "the diagonal
        // orbit carries a neon tile"
        let base = checkerboard();
        let t = search_tiling(&base, Shape::Torus { width: 2, height: 2 }, Some("A")).unwrap();
        for neon in [vec![], vec!["A"], vec!["B"], vec!["A", "B"]] {
            let mut ts = base.clone();
            ts.neon = neon.iter().map(|s| s.to_string()).collect();
            let model = torus_model(&ts, &t).unwrap();
            let rho3 = crate::reduction::rho3(&ts, Form::Star);
            let holds = truth_set_named(&model, &rho3).unwrap().contains("0,0");
            let orbit = diagonal_neon_states(&ts, &t).unwrap();
            assert_eq!(holds, !orbit.is_empty(), "neon = {neon:?}");
        }
    }
}
