//! Nondeterministic Turing machines over a one-way infinite tape, a bounded
//! simulator, and the compilation of a machine into a Wang tile set whose
//! rows replay the machine's configurations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::lexer::is_atom_name;
use crate::tiling::{Shape, TileSet, Tiling};

/// Head movement. `Left` orders before `Right`, which fixes the
/// lexicographic transition order used by the simulation policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: String,
    pub read: String,
    pub write: String,
    pub movement: Move,
    pub to: String,
}

/// Machine with designated initial state and blank symbol; the tape is
/// one-way infinite and starts all blank with the head on cell 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub initial: String,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub transitions: Vec<Transition>,
}

/// Tape prefix (cells beyond it are blank), head index into it, and state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub tape: Vec<String>,
    pub head: usize,
    pub state: String,
}

impl Configuration {
    /// Drops trailing blanks while keeping the head inside the prefix, so
    /// configurations compare by value regardless of padding.
    pub fn canonical(mut self, blank: &str) -> Configuration {
        while self.tape.len() > self.head + 1 && self.tape.last().map(String::as_str) == Some(blank)
        {
            self.tape.pop();
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("name {0:?} is not a plain identifier")]
    BadName(String),
    #[error("{0:?} is declared twice")]
    DuplicateDeclaration(String),
    #[error("state {0:?} is not declared")]
    UndeclaredState(String),
    #[error("symbol {0:?} is not declared")]
    UndeclaredSymbol(String),
    #[error("generated tile names collide at {0:?}; rename states or symbols")]
    NameCollision(String),
}

/// Checks declaredness and that every state and symbol is a plain
/// identifier, so generated tile names survive the formula grammar.
pub fn validate(tm: &TuringMachine) -> Result<(), TmError> {
    let mut seen = BTreeSet::new();
    for name in tm.states.iter().chain(tm.alphabet.iter()) {
        if !is_atom_name(name) {
            return Err(TmError::BadName(name.clone()));
        }
        if !seen.insert(name.clone()) {
            return Err(TmError::DuplicateDeclaration(name.clone()));
        }
    }
    let state = |s: &String| -> Result<(), TmError> {
        if tm.states.contains(s) {
            Ok(())
        } else {
            Err(TmError::UndeclaredState(s.clone()))
        }
    };
    let symbol = |s: &String| -> Result<(), TmError> {
        if tm.alphabet.contains(s) {
            Ok(())
        } else {
            Err(TmError::UndeclaredSymbol(s.clone()))
        }
    };
    state(&tm.initial)?;
    symbol(&tm.blank)?;
    for t in &tm.transitions {
        state(&t.from)?;
        state(&t.to)?;
        symbol(&t.read)?;
        symbol(&t.write)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimPolicy {
    /// Follow the lexicographically least applicable transition each step.
    FirstTransition,
    /// Explore every choice; collect each run that reaches the step bound or
    /// dies earlier.
    AllBranchesBounded,
}

pub fn initial_configuration(tm: &TuringMachine) -> Configuration {
    Configuration {
        tape: vec![tm.blank.clone()],
        head: 0,
        state: tm.initial.clone(),
    }
}

/// Transitions that can fire in `c`, in lexicographic order. A left move
/// with the head already on cell 0 is not applicable: the tape has no cell
/// to the west, so that branch of the run simply dies.
fn applicable<'a>(sorted: &[&'a Transition], c: &Configuration) -> Vec<&'a Transition> {
    sorted
        .iter()
        .filter(|t| {
            t.from == c.state
                && t.read == c.tape[c.head]
                && !(t.movement == Move::Left && c.head == 0)
        })
        .copied()
        .collect()
}

fn step(tm: &TuringMachine, c: &Configuration, t: &Transition) -> Configuration {
    let mut tape = c.tape.clone();
    tape[c.head] = t.write.clone();
    let head = match t.movement {
        Move::Left => c.head - 1,
        Move::Right => c.head + 1,
    };
    if head == tape.len() {
        tape.push(tm.blank.clone());
    }
    Configuration { tape, head, state: t.to.clone() }.canonical(&tm.blank)
}

/// Runs the machine for at most `steps` steps. Each returned run is a
/// configuration sequence starting from the initial configuration; a run
/// shorter than requested halted (no applicable transition).
pub fn simulate(tm: &TuringMachine, steps: usize, policy: SimPolicy) -> Vec<Vec<Configuration>> {
    let mut sorted: Vec<&Transition> = tm.transitions.iter().collect();
    sorted.sort();
    let start = initial_configuration(tm).canonical(&tm.blank);
    match policy {
        SimPolicy::FirstTransition => {
            let mut run = vec![start];
            for _ in 0..steps {
                let apps = applicable(&sorted, run.last().expect("run is nonempty"));
                match apps.first() {
                    Some(t) => {
                        let next = step(tm, run.last().unwrap(), t);
                        run.push(next);
                    }
                    None => break,
                }
            }
            vec![run]
        }
        SimPolicy::AllBranchesBounded => {
            let mut out = Vec::new();
            let mut run = vec![start];
            branch(tm, &sorted, steps, &mut run, &mut out);
            out
        }
    }
}

fn branch(
    tm: &TuringMachine,
    sorted: &[&Transition],
    left: usize,
    run: &mut Vec<Configuration>,
    out: &mut Vec<Vec<Configuration>>,
) {
    if left == 0 {
        out.push(run.clone());
        return;
    }
    let apps = applicable(sorted, run.last().expect("run is nonempty"));
    if apps.is_empty() {
        out.push(run.clone());
        return;
    }
    for t in apps {
        run.push(step(tm, run.last().unwrap(), t));
        branch(tm, sorted, left - 1, run, out);
        run.pop();
    }
}

/// Vertical edge colors: a tape symbol, or the head on a symbol in a state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum VColor {
    Sym(String),
    Head(String, String),
}

/// Horizontal edge colors. `Init` chains the bottom row together; `Wall` is
/// the start tile's west edge and is never produced on any right edge, so
/// the start tile fits only against the west boundary. `Left`/`Right` carry
/// the next state sideways from an action tile to the merge tile beside it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum HColor {
    Plain,
    Wall,
    Init,
    Left(String),
    Right(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TileKind {
    Initial,
    Alphabet,
    Action { transition: usize },
    Merge,
}

/// A colored tile. Horizontal matching also compares the neon flag (the
/// flag is part of the side colors); vertical matching ignores it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangTile {
    pub name: String,
    pub left: HColor,
    pub right: HColor,
    pub bottom: VColor,
    pub top: VColor,
    pub kind: TileKind,
    pub neon: bool,
}

/// What a tile contributes to the row above it; decoding a row reads these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopColor {
    Head { state: String, sym: String },
    Sym { sym: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeTables {
    pub blank: String,
    pub initial_state: String,
    pub tops: BTreeMap<String, TopColor>,
    pub action_targets: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileMeta {
    pub tile_kinds: BTreeMap<String, String>,
    pub decode: DecodeTables,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub tileset: TileSet,
    pub tiles: Vec<WangTile>,
    pub meta: CompileMeta,
}

/// Compiles a machine into tiles whose valid rectangle tilings, with the
/// start tile pinned at the origin, replay runs row by row: row 0 encodes
/// the initial configuration and row j+1 a one-step successor of row j.
///
/// Tile inventory: two initial tiles fix the bottom row; alphabet tiles copy
/// a symbol upward; an action tile consumes the head cell, writes the new
/// symbol, and sends the next state sideways; a merge tile catches that
/// signal and raises the head one cell over. Tiles other than initial and
/// action tiles also exist as neon copies, actions into the initial state
/// exist only as neon, and other actions only plain — so a row is neon
/// exactly when its action re-enters the initial state, and neon spreads
/// through a whole row because the flag rides on the horizontal colors.
///
/// Caveat: a left move with the head on column 0 would leak its signal off
/// the west boundary; the simulator treats such a move as not applicable
/// and the corpus machines never attempt one.
pub fn compile_tm(tm: &TuringMachine) -> Result<Compiled, TmError> {
    validate(tm)?;
    let mut tiles: Vec<WangTile> = Vec::new();
    tiles.push(WangTile {
        name: "T0".into(),
        left: HColor::Wall,
        right: HColor::Init,
        bottom: VColor::Sym(tm.blank.clone()),
        top: VColor::Head(tm.initial.clone(), tm.blank.clone()),
        kind: TileKind::Initial,
        neon: false,
    });
    tiles.push(WangTile {
        name: format!("I_{}", tm.blank),
        left: HColor::Init,
        right: HColor::Init,
        bottom: VColor::Sym(tm.blank.clone()),
        top: VColor::Sym(tm.blank.clone()),
        kind: TileKind::Initial,
        neon: false,
    });
    for s in &tm.alphabet {
        for neon in [false, true] {
            tiles.push(WangTile {
                name: format!("A_{}{}", s, if neon { "_n" } else { "" }),
                left: HColor::Plain,
                right: HColor::Plain,
                bottom: VColor::Sym(s.clone()),
                top: VColor::Sym(s.clone()),
                kind: TileKind::Alphabet,
                neon,
            });
        }
    }
    for (i, t) in tm.transitions.iter().enumerate() {
        let neon = t.to == tm.initial;
        let (left, right) = match t.movement {
            Move::Right => (HColor::Plain, HColor::Right(t.to.clone())),
            Move::Left => (HColor::Left(t.to.clone()), HColor::Plain),
        };
        tiles.push(WangTile {
            name: format!("t{}_{}_{}{}", i, t.from, t.read, if neon { "_n" } else { "" }),
            left,
            right,
            bottom: VColor::Head(t.from.clone(), t.read.clone()),
            top: VColor::Sym(t.write.clone()),
            kind: TileKind::Action { transition: i },
            neon,
        });
    }
    let entered: BTreeSet<(Move, &String)> =
        tm.transitions.iter().map(|t| (t.movement, &t.to)).collect();
    for (movement, q) in entered {
        for s in &tm.alphabet {
            for neon in [false, true] {
                let (prefix, left, right) = match movement {
                    Move::Right => ("mr", HColor::Right(q.clone()), HColor::Plain),
                    Move::Left => ("ml", HColor::Plain, HColor::Left(q.clone())),
                };
                tiles.push(WangTile {
                    name: format!("{}_{}_{}{}", prefix, q, s, if neon { "_n" } else { "" }),
                    left,
                    right,
                    bottom: VColor::Sym(s.clone()),
                    top: VColor::Head(q.clone(), s.clone()),
                    kind: TileKind::Merge,
                    neon,
                });
            }
        }
    }

    let mut names = BTreeSet::new();
    for t in &tiles {
        if !names.insert(t.name.clone()) {
            return Err(TmError::NameCollision(t.name.clone()));
        }
    }

    let mut h = BTreeSet::new();
    let mut v = BTreeSet::new();
    for a in &tiles {
        for b in &tiles {
            if a.right == b.left && a.neon == b.neon {
                h.insert((a.name.clone(), b.name.clone()));
            }
            if a.top == b.bottom {
                v.insert((a.name.clone(), b.name.clone()));
            }
        }
    }
    let tileset = TileSet {
        tiles: tiles.iter().map(|t| t.name.clone()).collect(),
        h,
        v,
        neon: tiles.iter().filter(|t| t.neon).map(|t| t.name.clone()).collect(),
        start: "T0".into(),
    };

    let mut tile_kinds = BTreeMap::new();
    let mut tops = BTreeMap::new();
    let mut action_targets = BTreeMap::new();
    for t in &tiles {
        let kind = match t.kind {
            TileKind::Initial => "initial",
            TileKind::Alphabet => "alphabet",
            TileKind::Action { .. } => "action",
            TileKind::Merge => "merge",
        };
        tile_kinds.insert(t.name.clone(), kind.to_string());
        let top = match &t.top {
            VColor::Sym(s) => TopColor::Sym { sym: s.clone() },
            VColor::Head(q, s) => TopColor::Head { state: q.clone(), sym: s.clone() },
        };
        tops.insert(t.name.clone(), top);
        if let TileKind::Action { transition } = t.kind {
            action_targets.insert(t.name.clone(), tm.transitions[transition].to.clone());
        }
    }
    let meta = CompileMeta {
        tile_kinds,
        decode: DecodeTables {
            blank: tm.blank.clone(),
            initial_state: tm.initial.clone(),
            tops,
            action_targets,
        },
    };
    Ok(Compiled { tileset, tiles, meta })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("only rectangle tilings decode to runs")]
    NotARect,
    #[error("tile {name:?} has no decode entry")]
    UnknownTile { name: String },
    #[error("row {row} carries {count} head cells instead of one")]
    BadHeadCount { row: usize, count: usize },
}

/// Reads each row of a compiled-set tiling back into the configuration its
/// top edge spells out; row 0 comes first.
pub fn decode_rows(
    _ts: &TileSet,
    meta: &CompileMeta,
    t: &Tiling,
) -> Result<Vec<Configuration>, DecodeError> {
    let shape = t.shape();
    if shape.is_torus() {
        return Err(DecodeError::NotARect);
    }
    let Shape::Rect { width, height } = shape else {
        return Err(DecodeError::NotARect);
    };
    let mut out = Vec::with_capacity(height);
    for j in 0..height {
        let mut tape = Vec::with_capacity(width);
        let mut head: Option<(usize, String)> = None;
        let mut heads = 0usize;
        for i in 0..width {
            let name = t.get(i, j);
            let top = meta
                .decode
                .tops
                .get(name)
                .ok_or_else(|| DecodeError::UnknownTile { name: name.to_string() })?;
            match top {
                TopColor::Sym { sym } => tape.push(sym.clone()),
                TopColor::Head { state, sym } => {
                    heads += 1;
                    head = Some((i, state.clone()));
                    tape.push(sym.clone());
                }
            }
        }
        let Some((head, state)) = head.filter(|_| heads == 1) else {
            return Err(DecodeError::BadHeadCount { row: j, count: heads });
        };
        out.push(Configuration { tape, head, state }.canonical(&meta.decode.blank));
    }
    Ok(out)
}
