//! Compiles a tile set into the grid formulas: a square-commutation
//! constraint, adjacency constraints over the tile atoms, and a recurring
//! neon-tile constraint, in star or loop form, with the square expressed
//! either through fix conjuncts or through one program-agreement atom.

use crate::syntax::{Program, Proposition};
use crate::tiling::TileSet;

/// How the grid's commutation square is expressed: `Fix` spells it as ten
/// fix conjuncts over N, E, S, W; `Tie` as the single agreement `(N;E) ~
/// (E;N)` over N, E only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Fix,
    Tie,
}

/// Whether iteration appears as star or as compiled while loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Star,
    While,
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub square: Proposition,
    pub rho1: Proposition,
    pub rho2: Proposition,
    pub rho3: Proposition,
    pub gamma: Proposition,
    pub gamma_t: Proposition,
    pub encoding: Encoding,
    pub form: Form,
}

fn n() -> Program {
    Program::atom("N")
}
fn e() -> Program {
    Program::atom("E")
}
fn s() -> Program {
    Program::atom("S")
}
fn w() -> Program {
    Program::atom("W")
}

fn fix_seq(progs: Vec<Program>) -> Proposition {
    Proposition::fix(Program::seq_all(progs))
}

fn boxed_fix(path: Vec<Program>, inner: Vec<Program>) -> Proposition {
    Proposition::box_(Program::seq_all(path), fix_seq(inner))
}

/// States from which one grid cell commutes: stepping around it in either
/// rotation returns exactly to the start.
pub fn square_prop(encoding: Encoding) -> Proposition {
    match encoding {
        Encoding::Fix => {
            let clockwise = Proposition::and_all(vec![
                fix_seq(vec![n(), s()]),
                boxed_fix(vec![n()], vec![e(), w()]),
                boxed_fix(vec![n(), e()], vec![s(), n()]),
                boxed_fix(vec![n(), e(), s()], vec![w(), e()]),
                fix_seq(vec![n(), e(), s(), w()]),
            ]);
            let anticlockwise = Proposition::and_all(vec![
                fix_seq(vec![e(), w()]),
                boxed_fix(vec![e()], vec![n(), s()]),
                boxed_fix(vec![e(), n()], vec![w(), e()]),
                boxed_fix(vec![e(), n(), w()], vec![s(), n()]),
                fix_seq(vec![e(), n(), w(), s()]),
            ]);
            Proposition::and(clockwise, anticlockwise)
        }
        Encoding::Tie => Proposition::tie(
            Program::seq(n(), e()),
            Program::seq(e(), n()),
        ),
    }
}

fn grid_boxed(body: Proposition, form: Form) -> Proposition {
    let star = Proposition::box_(
        Program::star(n()),
        Proposition::box_(Program::star(e()), body),
    );
    finish(star, form)
}

fn finish(star_form: Proposition, form: Form) -> Proposition {
    match form {
        Form::Star => star_form,
        Form::While => star_form
            .destar()
            .expect("reduction formulas keep every star under a modality"),
    }
}

/// The commutation constraint everywhere on the reachable grid.
pub fn rho1(encoding: Encoding, form: Form) -> Proposition {
    grid_boxed(square_prop(encoding), form)
}

fn tile_atom(name: &str) -> Proposition {
    Proposition::atom(name)
}

/// Adjacency constraints: each reachable state carries exactly one tile
/// atom, and east/north neighbors carry a horizontally/vertically
/// compatible one.
pub fn rho2(ts: &TileSet, form: Form) -> Proposition {
    let atoms: Vec<Proposition> = ts.tiles.iter().map(|t| tile_atom(t)).collect();
    let mut exactly_one = vec![Proposition::or_all(atoms.clone())];
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            exactly_one.push(Proposition::not(Proposition::and(
                atoms[i].clone(),
                atoms[j].clone(),
            )));
        }
    }
    let compatible = |rel: &std::collections::BTreeSet<(String, String)>, from: usize| {
        Proposition::or_all(
            ts.tiles
                .iter()
                .enumerate()
                .filter(|(_, t)| rel.contains(&(ts.tiles[from].clone(), (*t).clone())))
                .map(|(j, _)| atoms[j].clone())
                .collect::<Vec<_>>(),
        )
    };
    let mut parts = vec![Proposition::and_all(exactly_one)];
    for (i, atom) in atoms.iter().enumerate() {
        let east_ok = compatible(&ts.h, i);
        let north_ok = compatible(&ts.v, i);
        parts.push(Proposition::implies(
            atom.clone(),
            Proposition::and(
                Proposition::box_(e(), east_ok),
                Proposition::box_(n(), north_ok),
            ),
        ));
    }
    grid_boxed(Proposition::and_all(parts), form)
}

/// The recurrence constraint: from everywhere on the northeast diagonal, a
/// neon tile is still ahead.
pub fn rho3(ts: &TileSet, form: Form) -> Proposition {
    let neon = Proposition::or_all(
        ts.tiles
            .iter()
            .filter(|t| ts.neon.contains(*t))
            .map(|t| tile_atom(t))
            .collect::<Vec<_>>(),
    );
    let diag = || Program::seq(n(), e());
    let star = Proposition::box_(
        Program::star(diag()),
        Proposition::diamond(Program::star(diag()), neon),
    );
    finish(star, form)
}

/// Builds every formula for the tile set. `gamma` pins the start tile at
/// the evaluation state and conjoins all three constraints; `gamma_t` drops
/// the start pin and the recurrence.
pub fn gamma(ts: &TileSet, encoding: Encoding, form: Form) -> ReductionOutput {
    let square = square_prop(encoding);
    let rho1 = rho1(encoding, form);
    let rho2 = rho2(ts, form);
    let rho3 = rho3(ts, form);
    let gamma = Proposition::and_all(vec![
        tile_atom(&ts.start),
        rho1.clone(),
        rho2.clone(),
        rho3.clone(),
    ]);
    let gamma_t = Proposition::and_all(vec![rho1.clone(), rho2.clone()]);
    ReductionOutput { square, rho1, rho2, rho3, gamma, gamma_t, encoding, form }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::AtomicNames;

    fn flatten_and(f: &Proposition) -> Vec<&Proposition> {
        match f {
            Proposition::And(a, b) => {
                let mut out = flatten_and(a);
                out.extend(flatten_and(b));
                out
            }
            other => vec![other],
        }
    }

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
        let pairs = |xs: &[(&str, &str)]| {
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

    #[test]
    fn fix_square_has_ten_conjuncts_starting_with_north_south() {
        let sq = square_prop(Encoding::Fix);
        let parts = flatten_and(&sq);
        assert_eq!(parts.len(), 10);
        assert_eq!(
            parts[0],
            &Proposition::fix(Program::seq(Program::atom("N"), Program::atom("S")))
        );
        assert_eq!(sq.to_string(), "fix(N;S) & [N]fix(E;W) & [N;E]fix(S;N) & [N;E;S]fix(W;E) & fix(N;E;S;W) & (fix(E;W) & [E]fix(N;S) & [E;N]fix(W;E) & [E;N;W]fix(S;N) & fix(E;N;W;S))");
    }

    #[test]
    fn tie_square_is_one_agreement() {
        let sq = square_prop(Encoding::Tie);
        assert_eq!(sq.to_string(), "(N;E) ~ (E;N)");
    }

    #[test]
    fn rho1_wraps_the_square_in_grid_boxes() {
        let f = rho1(Encoding::Tie, Form::Star);
        assert!(f.to_string().starts_with("[N*][E*]"));
        let lf = rho1(Encoding::Tie, Form::While);
        let sq = square_prop(Encoding::Tie);
        let expected = Proposition::box_(
            Program::while_do(
                Proposition::box_(
                    Program::while_do(sq, Program::atom("E")),
                    Proposition::False,
                ),
                Program::atom("N"),
            ),
            Proposition::False,
        );
        assert_eq!(lf, expected);
    }

    #[test]
    fn rho2_single_tile_keeps_alpha_bare() {
        let f = rho2(&one_tile(), Form::Star);
        let t0 = Proposition::atom("T0");
        let body = Proposition::and(
            t0.clone(),
            Proposition::implies(
                t0.clone(),
                Proposition::and(
                    Proposition::box_(Program::atom("E"), t0.clone()),
                    Proposition::box_(Program::atom("N"), t0),
                ),
            ),
        );
        assert_eq!(
            f,
            Proposition::box_(
                Program::star(Program::atom("N")),
                Proposition::box_(Program::star(Program::atom("E")), body)
            )
        );
    }

    #[test]
    fn rho2_empty_adjacency_forbids_stepping() {
        let mut ts = one_tile();
        ts.h.clear();
        let text = rho2(&ts, Form::Star).to_string();
        assert!(text.contains("[E]false"), "got {text}");
    }

    #[test]
    fn rho2_checkerboard_swaps_the_atoms() {
        let text = rho2(&checkerboard(), Form::Star).to_string();
        assert!(text.contains("(A | B) & !(A & B)"), "got {text}");
        assert!(text.contains("A -> [E]B & [N]B"), "got {text}");
        assert!(text.contains("B -> [E]A & [N]A"), "got {text}");
    }

    #[test]
    fn rho3_shapes() {
        let star = rho3(&one_tile(), Form::Star);
        assert_eq!(star.to_string(), "[(N;E)*]<(N;E)*>T0");
        let while_form = rho3(&one_tile(), Form::While);
        assert_eq!(
            while_form.to_string(),
            "[while <while !T0 do N;E od>true do N;E od]false"
        );
        let mut no_neon = one_tile();
        no_neon.neon.clear();
        assert_eq!(rho3(&no_neon, Form::Star).to_string(), "[(N;E)*]<(N;E)*>false");
    }

    #[test]
    fn gamma_conjunct_counts() {
        let out = gamma(&checkerboard(), Encoding::Fix, Form::Star);
        // the grid-boxed parts flatten no further than their outer boxes
        let gamma_parts = flatten_and(&out.gamma);
        assert_eq!(gamma_parts.len(), 4);
        assert_eq!(gamma_parts[0], &Proposition::atom("A"));
        assert_eq!(flatten_and(&out.gamma_t).len(), 2);
        assert_eq!(gamma_parts[1], &out.rho1);
        assert_eq!(gamma_parts[2], &out.rho2);
        assert_eq!(gamma_parts[3], &out.rho3);
    }

    #[test]
    fn while_forms_are_star_free_and_strict() {
        let out = gamma(&checkerboard(), Encoding::Fix, Form::While);
        for f in [&out.rho1, &out.rho2, &out.rho3, &out.gamma, &out.gamma_t] {
            assert!(!f.contains_star());
            assert!(f.is_strict());
        }
        let starry = gamma(&checkerboard(), Encoding::Fix, Form::Star);
        assert!(starry.rho1.contains_star());
        assert!(!starry.rho1.is_strict());
    }

    #[test]
    fn atom_hygiene_per_encoding() {
        let fix = gamma(&checkerboard(), Encoding::Fix, Form::Star);
        let AtomicNames { props, progs } = fix.gamma.atomic_names();
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        assert_eq!(progs, set(&["E", "N", "S", "W"]));
        assert_eq!(props, set(&["A", "B"]));
        let tie = gamma(&checkerboard(), Encoding::Tie, Form::Star);
        let AtomicNames { props, progs } = tie.gamma.atomic_names();
        assert_eq!(progs, set(&["E", "N"]));
        assert_eq!(props, set(&["A", "B"]));
    }

    #[test]
    fn outputs_round_trip_through_the_surface() {
        for encoding in [Encoding::Fix, Encoding::Tie] {
            for form in [Form::Star, Form::While] {
                let out = gamma(&checkerboard(), encoding, form);
                for f in [&out.square, &out.rho1, &out.rho2, &out.rho3, &out.gamma, &out.gamma_t]
                {
                    let text = crate::surface::print_prop(f);
                    let back = crate::surface::parse_prop(
                        &crate::surface::SourceText::inline(&text),
                    )
                    .unwrap_or_else(|e| panic!("reparse of {text:?}: {e}"));
                    assert_eq!(&back, f);
                }
            }
        }
    }
}
