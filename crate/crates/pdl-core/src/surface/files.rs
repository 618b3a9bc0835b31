//! JSON document formats for models, tile sets, machines, tilings, compiled
//! metadata, and witness bundles. Encoding is canonical: two-space pretty
//! JSON with sorted keys and a trailing newline, so re-encoding a parsed
//! document reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{validate_model, Diagnostic, KripkeModel, Relation};
use crate::surface::lexer::is_atom_name;
use crate::surface::print_prop;
use crate::syntax::Proposition;
use crate::tiling::{Shape, TileSet, Tiling};
use crate::tm::{CompileMeta, Move, Transition, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    /// The text is not well-formed JSON.
    #[error("parse error: {0}")]
    Parse(String),
    /// The JSON shape does not match the document format.
    #[error("schema error: {0}")]
    Schema(String),
    /// Well-shaped but violates the target type's invariants.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

fn invariant(msg: impl Into<String>) -> DataError {
    DataError::Invariant(msg.into())
}

fn decode<T: DeserializeOwned>(src: &str) -> Result<T, DataError> {
    serde_json::from_str(src).map_err(|e| match e.classify() {
        serde_json::error::Category::Syntax
        | serde_json::error::Category::Eof
        | serde_json::error::Category::Io => DataError::Parse(e.to_string()),
        serde_json::error::Category::Data => DataError::Schema(e.to_string()),
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Models

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    states: Vec<String>,
    deterministic: bool,
    programs: BTreeMap<String, Vec<(String, String)>>,
    valuation: BTreeMap<String, Vec<String>>,
}

fn describe(d: &Diagnostic) -> String {
    match d {
        Diagnostic::DanglingState { context, index } => {
            format!("{context} references missing state index {index}")
        }
        Diagnostic::NondeterministicAt { program, state, successors } => format!(
            "model is declared deterministic but program {program:?} branches at {state:?} (to {successors:?})"
        ),
        Diagnostic::InjectivePartialFunction { program, holds } => {
            format!("program {program:?} injective partial function: {holds}")
        }
    }
}

pub fn parse_model(src: &str) -> Result<KripkeModel, DataError> {
    let doc: ModelDoc = decode(src)?;
    let mut seen = BTreeSet::new();
    for s in &doc.states {
        if !seen.insert(s) {
            return Err(invariant(format!("state {s:?} is declared twice")));
        }
    }
    let ix = |name: &str, what: &str| {
        doc.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| invariant(format!("{what} references undeclared state {name:?}")))
    };
    let mut m = KripkeModel::new(doc.states.clone(), doc.deterministic);
    for (name, pairs) in &doc.programs {
        if !is_atom_name(name) {
            return Err(invariant(format!(
                "program name {name:?} is not a plain identifier"
            )));
        }
        let what = format!("program {name:?}");
        let mut rel = BTreeSet::new();
        for (a, b) in pairs {
            rel.insert((ix(a, &what)?, ix(b, &what)?));
        }
        m.programs.insert(name.clone(), Relation { pairs: rel });
    }
    for (name, states) in &doc.valuation {
        if !is_atom_name(name) {
            return Err(invariant(format!(
                "proposition name {name:?} is not a plain identifier"
            )));
        }
        let what = format!("proposition {name:?}");
        let mut set = BTreeSet::new();
        for s in states {
            set.insert(ix(s, &what)?);
        }
        m.valuation.insert(name.clone(), set);
    }
    if let Some(err) = validate_model(&m).iter().find(|d| d.is_error()) {
        return Err(invariant(describe(err)));
    }
    Ok(m)
}

fn model_doc(m: &KripkeModel) -> ModelDoc {
    let name = |ix: usize| m.state_name(ix).to_string();
    ModelDoc {
        states: m.states.clone(),
        deterministic: m.deterministic,
        programs: m
            .programs
            .iter()
            .map(|(k, rel)| {
                (
                    k.clone(),
                    rel.pairs.iter().map(|&(a, b)| (name(a), name(b))).collect(),
                )
            })
            .collect(),
        valuation: m
            .valuation
            .iter()
            .map(|(k, set)| (k.clone(), set.iter().map(|&s| name(s)).collect()))
            .collect(),
    }
}

pub fn encode_model(m: &KripkeModel) -> String {
    pretty(&model_doc(m))
}

// ---------------------------------------------------------------------------
// Tile sets

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TileSetDoc {
    tiles: Vec<String>,
    h: Vec<(String, String)>,
    v: Vec<(String, String)>,
    neon: Vec<String>,
    start: String,
}

pub fn parse_tileset(src: &str) -> Result<TileSet, DataError> {
    let doc: TileSetDoc = decode(src)?;
    let declared: BTreeSet<&String> = doc.tiles.iter().collect();
    if declared.len() != doc.tiles.len() {
        return Err(invariant("a tile is declared twice".to_string()));
    }
    for t in &doc.tiles {
        if !is_atom_name(t) {
            return Err(invariant(format!(
                "tile name {t:?} is not a plain identifier (tile names become formula atoms)"
            )));
        }
    }
    let check = |name: &String, what: &str| {
        if declared.contains(name) {
            Ok(())
        } else {
            Err(invariant(format!("{what} references unknown tile {name:?}")))
        }
    };
    for (a, b) in doc.h.iter().chain(doc.v.iter()) {
        check(a, "an adjacency pair")?;
        check(b, "an adjacency pair")?;
    }
    for t in &doc.neon {
        check(t, "the neon list")?;
    }
    check(&doc.start, "the start tile")?;
    Ok(TileSet {
        tiles: doc.tiles,
        h: doc.h.into_iter().collect(),
        v: doc.v.into_iter().collect(),
        neon: doc.neon.into_iter().collect(),
        start: doc.start,
    })
}

pub fn encode_tileset(ts: &TileSet) -> String {
    pretty(&TileSetDoc {
        tiles: ts.tiles.clone(),
        h: ts.h.iter().cloned().collect(),
        v: ts.v.iter().cloned().collect(),
        neon: ts.neon.iter().cloned().collect(),
        start: ts.start.clone(),
    })
}

// ---------------------------------------------------------------------------
// Turing machines

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    read: String,
    write: String,
    #[serde(rename = "move")]
    movement: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TmDoc {
    states: Vec<String>,
    initial: String,
    alphabet: Vec<String>,
    blank: String,
    transitions: Vec<TransitionDoc>,
}

pub fn parse_tm(src: &str) -> Result<TuringMachine, DataError> {
    let doc: TmDoc = decode(src)?;
    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for t in &doc.transitions {
        let movement = match t.movement.as_str() {
            "L" => Move::Left,
            "R" => Move::Right,
            other => {
                return Err(DataError::Schema(format!(
                    "move must be \"L\" or \"R\", not {other:?}"
                )))
            }
        };
        transitions.push(Transition {
            from: t.from.clone(),
            read: t.read.clone(),
            write: t.write.clone(),
            movement,
            to: t.to.clone(),
        });
    }
    let tm = TuringMachine {
        states: doc.states,
        initial: doc.initial,
        alphabet: doc.alphabet,
        blank: doc.blank,
        transitions,
    };
    crate::tm::validate(&tm).map_err(|e| invariant(e.to_string()))?;
    Ok(tm)
}

pub fn encode_tm(tm: &TuringMachine) -> String {
    pretty(&TmDoc {
        states: tm.states.clone(),
        initial: tm.initial.clone(),
        alphabet: tm.alphabet.clone(),
        blank: tm.blank.clone(),
        transitions: tm
            .transitions
            .iter()
            .map(|t| TransitionDoc {
                from: t.from.clone(),
                read: t.read.clone(),
                write: t.write.clone(),
                movement: match t.movement {
                    Move::Left => "L".to_string(),
                    Move::Right => "R".to_string(),
                },
                to: t.to.clone(),
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Tilings

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeDoc {
    kind: String,
    width: usize,
    height: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    shape: ShapeDoc,
    assign: Vec<(usize, usize, String)>,
}

pub fn parse_tiling(src: &str) -> Result<Tiling, DataError> {
    let doc: TilingDoc = decode(src)?;
    let shape = match doc.shape.kind.as_str() {
        "rect" => Shape::Rect { width: doc.shape.width, height: doc.shape.height },
        "torus" => Shape::Torus { width: doc.shape.width, height: doc.shape.height },
        other => {
            return Err(DataError::Schema(format!(
                "shape kind must be \"rect\" or \"torus\", not {other:?}"
            )))
        }
    };
    let (w, h) = (shape.width(), shape.height());
    let mut cells: Vec<Option<String>> = vec![None; w * h];
    for (i, j, tile) in doc.assign {
        if i >= w || j >= h {
            return Err(invariant(format!("position ({i},{j}) is outside the shape")));
        }
        if cells[j * w + i].replace(tile).is_some() {
            return Err(invariant(format!("position ({i},{j}) is assigned twice")));
        }
    }
    let cells: Vec<String> = cells
        .into_iter()
        .enumerate()
        .map(|(k, c)| c.ok_or_else(|| invariant(format!("position ({},{}) is unassigned", k % w, k / w))))
        .collect::<Result<_, _>>()?;
    Tiling::new(shape, cells).map_err(|e| invariant(e.to_string()))
}

pub fn encode_tiling(t: &Tiling) -> String {
    let shape = t.shape();
    let (w, h) = (shape.width(), shape.height());
    let mut assign = Vec::with_capacity(w * h);
    for j in 0..h {
        for i in 0..w {
            assign.push((i, j, t.get(i, j).to_string()));
        }
    }
    pretty(&TilingDoc {
        shape: ShapeDoc {
            kind: if shape.is_torus() { "torus" } else { "rect" }.to_string(),
            width: w,
            height: h,
        },
        assign,
    })
}

// ---------------------------------------------------------------------------
// Compiled-machine metadata and witness bundles

pub fn parse_meta(src: &str) -> Result<CompileMeta, DataError> {
    decode(src)
}

pub fn encode_meta(meta: &CompileMeta) -> String {
    pretty(meta)
}

/// Everything a satisfiability run produces, in one document.
#[derive(Debug, Clone)]
pub struct WitnessBundle {
    pub tileset: TileSet,
    pub tiling: Tiling,
    pub model: KripkeModel,
    pub formula: Proposition,
    pub satisfying_states: Vec<String>,
}

pub fn encode_witness(b: &WitnessBundle) -> String {
    let reparse = |s: String| -> serde_json::Value {
        serde_json::from_str(&s).expect("component encoders emit valid JSON")
    };
    let mut map = serde_json::Map::new();
    map.insert("tileset".into(), reparse(encode_tileset(&b.tileset)));
    map.insert("tiling".into(), reparse(encode_tiling(&b.tiling)));
    map.insert("model".into(), reparse(encode_model(&b.model)));
    map.insert("formula".into(), print_prop(&b.formula).into());
    map.insert(
        "satisfying_states".into(),
        b.satisfying_states.to_vec().into(),
    );
    pretty(&serde_json::Value::Object(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{search_tiling, TilingVerdict};

    const MODEL: &str = r#"{
  "states": ["a", "b"],
  "deterministic": false,
  "programs": {"p": [["a", "b"], ["a", "a"]]},
  "valuation": {"q": ["b"]}
}"#;

    #[test]
    fn model_documents_round_trip() {
        let m = parse_model(MODEL).unwrap();
        assert_eq!(m.states, vec!["a", "b"]);
        assert_eq!(m.programs["p"].pairs.len(), 2);
        assert_eq!(m.valuation["q"].len(), 1);
        let encoded = encode_model(&m);
        let again = parse_model(&encoded).unwrap();
        assert_eq!(m, again);
        assert_eq!(encoded, encode_model(&again), "canonical form is a fixed point");
    }

    #[test]
    fn model_errors_carry_their_category() {
        assert!(matches!(parse_model("{"), Err(DataError::Parse(_))));
        assert!(matches!(
            parse_model(r#"{"states": 3}"#),
            Err(DataError::Schema(_))
        ));
        let dangling = MODEL.replace("[\"a\", \"b\"]", "[\"a\", \"z\"]");
        assert!(matches!(parse_model(&dangling), Err(DataError::Invariant(_))));
        let branching = MODEL.replace("\"deterministic\": false", "\"deterministic\": true");
        let err = parse_model(&branching).unwrap_err();
        assert!(matches!(err, DataError::Invariant(_)), "declared deterministic: {err}");
    }

    const ONE_TILE: &str = r#"{
  "tiles": ["T0"],
  "h": [["T0", "T0"]],
  "v": [["T0", "T0"]],
  "neon": ["T0"],
  "start": "T0"
}"#;

    #[test]
    fn tileset_documents_round_trip() {
        let ts = parse_tileset(ONE_TILE).unwrap();
        assert_eq!(ts.tiles, vec!["T0"]);
        assert!(ts.h.contains(&("T0".into(), "T0".into())));
        let encoded = encode_tileset(&ts);
        assert_eq!(parse_tileset(&encoded).unwrap(), ts);
    }

    #[test]
    fn tileset_rejects_unknown_and_unnameable_tiles() {
        let bad = ONE_TILE.replace("\"start\": \"T0\"", "\"start\": \"T9\"");
        assert!(matches!(parse_tileset(&bad), Err(DataError::Invariant(_))));
        let unnameable = ONE_TILE.replace("T0", "T 0");
        assert!(matches!(parse_tileset(&unnameable), Err(DataError::Invariant(_))));
    }

    #[test]
    fn tm_documents_round_trip() {
        let src = r#"{
  "states": ["q0"],
  "initial": "q0",
  "alphabet": ["b"],
  "blank": "b",
  "transitions": [{"from": "q0", "read": "b", "write": "b", "move": "R", "to": "q0"}]
}"#;
        let tm = parse_tm(src).unwrap();
        assert_eq!(tm.states, vec!["q0"]);
        assert_eq!(tm.transitions.len(), 1);
        assert_eq!(tm.transitions[0].movement, Move::Right);
        let encoded = encode_tm(&tm);
        assert_eq!(parse_tm(&encoded).unwrap(), tm);
        let bad_move = src.replace("\"R\"", "\"U\"");
        assert!(matches!(parse_tm(&bad_move), Err(DataError::Schema(_))));
        let bad_state = src.replace("\"to\": \"q0\"", "\"to\": \"q7\"");
        assert!(matches!(parse_tm(&bad_state), Err(DataError::Invariant(_))));
    }

    #[test]
    fn tiling_documents_round_trip() {
        let ts = parse_tileset(ONE_TILE).unwrap();
        let t = search_tiling(&ts, Shape::Torus { width: 2, height: 1 }, Some("T0")).unwrap();
        let encoded = encode_tiling(&t);
        let again = parse_tiling(&encoded).unwrap();
        assert_eq!(t, again);
        assert_eq!(crate::tiling::verify_tiling(&ts, &again).unwrap(), TilingVerdict::Valid);
    }

    #[test]
    fn tiling_documents_must_cover_the_shape() {
        let missing = r#"{
  "shape": {"kind": "rect", "width": 2, "height": 1},
  "assign": [[0, 0, "T0"]]
}"#;
        assert!(matches!(parse_tiling(missing), Err(DataError::Invariant(_))));
        let out_of_range = r#"{
  "shape": {"kind": "rect", "width": 1, "height": 1},
  "assign": [[0, 0, "T0"], [5, 0, "T0"]]
}"#;
        assert!(matches!(parse_tiling(out_of_range), Err(DataError::Invariant(_))));
    }

    #[test]
    fn witness_bundles_embed_components_verbatim() {
        let ts = parse_tileset(ONE_TILE).unwrap();
        let tiling = search_tiling(&ts, Shape::Torus { width: 1, height: 1 }, Some("T0")).unwrap();
        let model = parse_model(MODEL).unwrap();
        let bundle = WitnessBundle {
            tileset: ts,
            tiling,
            model,
            formula: Proposition::fix(crate::syntax::Program::Skip),
            satisfying_states: vec!["a".into()],
        };
        let text = encode_witness(&bundle);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["formula"], "fix(skip)");
        assert_eq!(value["tileset"]["start"], "T0");
        assert_eq!(value["satisfying_states"], serde_json::json!(["a"]));
    }
}
