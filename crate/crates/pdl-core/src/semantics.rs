//! Kripke models and the evaluator: program denotations as binary relations,
//! proposition truth sets, model validation, identity checking, and seeded
//! random model generation.

use crate::syntax::{Program, Proposition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// States are referred to by index into [`KripkeModel::states`]; the name
/// table exists for files, diagnostics and display.
pub type StateIx = usize;

/// A binary relation over state indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relation {
    pub pairs: BTreeSet<(StateIx, StateIx)>,
}

impl Relation {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (StateIx, StateIx)>) -> Relation {
        Relation {
            pairs: pairs.into_iter().collect(),
        }
    }
}

/// A finite Kripke model. Program atoms and proposition atoms that have no
/// entry denote the empty relation / empty set; `deterministic` is a claim
/// that [`validate_model`] checks, not something evaluation enforces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub states: Vec<String>,
    pub deterministic: bool,
    pub programs: BTreeMap<String, Relation>,
    pub valuation: BTreeMap<String, BTreeSet<StateIx>>,
}

impl KripkeModel {
    pub fn new(states: impl IntoIterator<Item = impl Into<String>>, deterministic: bool) -> Self {
        KripkeModel {
            states: states.into_iter().map(Into::into).collect(),
            deterministic,
            programs: BTreeMap::new(),
            valuation: BTreeMap::new(),
        }
    }

    pub fn state_ix(&self, name: &str) -> Option<StateIx> {
        self.states.iter().position(|s| s == name)
    }

    pub fn state_name(&self, ix: StateIx) -> &str {
        &self.states[ix]
    }
}

/// Builds a model from state names; panics on an undeclared name, so this is
/// meant for fixtures and tests, not for decoding untrusted input.
pub fn build_model(
    states: &[&str],
    deterministic: bool,
    programs: &[(&str, &[(&str, &str)])],
    valuation: &[(&str, &[&str])],
) -> KripkeModel {
    let mut m = KripkeModel::new(states.iter().copied(), deterministic);
    let ix = |name: &str| {
        states
            .iter()
            .position(|s| *s == name)
            .unwrap_or_else(|| panic!("undeclared state {name:?}"))
    };
    for (prog, pairs) in programs {
        let rel = Relation::from_pairs(pairs.iter().map(|(a, b)| (ix(a), ix(b))));
        m.programs.insert((*prog).to_string(), rel);
    }
    for (prop, names) in valuation {
        let set = names.iter().map(|s| ix(s)).collect();
        m.valuation.insert((*prop).to_string(), set);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{context} references state index {index}, but the model has {states} states")]
    UnknownState {
        context: String,
        index: StateIx,
        states: usize,
    },
}

/// Validation findings. Dangling references and determinism violations are
/// errors; the injectivity report is informational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DanglingState { context: String, index: StateIx },
    NondeterministicAt { program: String, state: String, successors: Vec<String> },
    InjectivePartialFunction { program: String, holds: bool },
}

impl Diagnostic {
    pub fn is_error(&self) -> bool {
        !matches!(self, Diagnostic::InjectivePartialFunction { .. })
    }
}

/// Checks every stored index, the determinism claim, and reports for each
/// atomic relation whether it is an injective partial function.
pub fn validate_model(m: &KripkeModel) -> Vec<Diagnostic> {
    let n = m.states.len();
    let mut out = Vec::new();
    for (name, rel) in &m.programs {
        for &(a, b) in &rel.pairs {
            for ix in [a, b] {
                if ix >= n {
                    out.push(Diagnostic::DanglingState {
                        context: format!("program {name:?}"),
                        index: ix,
                    });
                }
            }
        }
    }
    for (name, set) in &m.valuation {
        for &ix in set {
            if ix >= n {
                out.push(Diagnostic::DanglingState {
                    context: format!("proposition {name:?}"),
                    index: ix,
                });
            }
        }
    }
    if m.deterministic {
        for (name, rel) in &m.programs {
            for i in 0..n {
                let succs: Vec<&str> = rel
                    .pairs
                    .iter()
                    .filter(|&&(a, b)| a == i && b < n)
                    .map(|&(_, b)| m.state_name(b))
                    .collect();
                if succs.len() > 1 {
                    out.push(Diagnostic::NondeterministicAt {
                        program: name.clone(),
                        state: m.state_name(i).to_string(),
                        successors: succs.iter().map(|s| s.to_string()).collect(),
                    });
                }
            }
        }
    }
    for (name, rel) in &m.programs {
        let in_range = rel.pairs.iter().filter(|&&(a, b)| a < n && b < n);
        let mut out_deg = vec![0usize; n];
        let mut in_deg = vec![0usize; n];
        for &(a, b) in in_range {
            out_deg[a] += 1;
            in_deg[b] += 1;
        }
        let holds = out_deg.iter().all(|&d| d <= 1) && in_deg.iter().all(|&d| d <= 1);
        out.push(Diagnostic::InjectivePartialFunction {
            program: name.clone(),
            holds,
        });
    }
    out
}

// ---------------------------------------------------------------------------
// Bitset evaluator. Relations are n rows of ceil(n/64) words; truth sets are
// one such row. This keeps exhaustive searches over small models cheap.

#[derive(Clone, PartialEq, Eq)]
struct RelBits {
    n: usize,
    w: usize,
    bits: Vec<u64>,
}

fn for_each_bit(row: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in row.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            f(wi * 64 + b);
            rest &= rest - 1;
        }
    }
}

fn or_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= *s;
    }
}

impl RelBits {
    fn empty(n: usize) -> RelBits {
        let w = n.div_ceil(64);
        RelBits { n, w, bits: vec![0; n * w] }
    }

    fn identity(n: usize) -> RelBits {
        let mut r = RelBits::empty(n);
        for i in 0..n {
            r.set(i, i);
        }
        r
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.w..(i + 1) * self.w]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.w..(i + 1) * self.w]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.w + j / 64] |= 1 << (j % 64);
    }

    fn compose(&self, other: &RelBits) -> RelBits {
        let mut out = RelBits::empty(self.n);
        for i in 0..self.n {
            let mut acc = vec![0u64; self.w];
            for_each_bit(self.row(i), |j| or_into(&mut acc, other.row(j)));
            out.row_mut(i).copy_from_slice(&acc);
        }
        out
    }

    fn pointwise(&self, other: &RelBits, f: impl Fn(u64, u64) -> u64) -> RelBits {
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| f(a, b))
            .collect();
        RelBits { n: self.n, w: self.w, bits }
    }

    /// Reflexive-transitive closure by saturation: start from identity plus
    /// the relation and keep merging successor rows until nothing changes.
    fn closure(&self) -> RelBits {
        let mut c = self.pointwise(&RelBits::identity(self.n), |a, b| a | b);
        loop {
            let mut changed = false;
            for i in 0..c.n {
                let mut acc = c.row(i).to_vec();
                for_each_bit(c.row(i), |j| or_into(&mut acc, c.row(j)));
                if acc != c.row(i) {
                    c.row_mut(i).copy_from_slice(&acc);
                    changed = true;
                }
            }
            if !changed {
                return c;
            }
        }
    }

    fn to_relation(&self) -> Relation {
        let mut pairs = BTreeSet::new();
        for i in 0..self.n {
            for_each_bit(self.row(i), |j| {
                pairs.insert((i, j));
            });
        }
        Relation { pairs }
    }
}

struct Evaluator<'m> {
    m: &'m KripkeModel,
    n: usize,
    w: usize,
}

impl<'m> Evaluator<'m> {
    fn new(m: &'m KripkeModel) -> Evaluator<'m> {
        let n = m.states.len();
        Evaluator { m, n, w: n.div_ceil(64) }
    }

    fn tail_mask(&self) -> u64 {
        match self.n % 64 {
            0 => !0,
            r => (1u64 << r) - 1,
        }
    }

    fn mask_tail(&self, row: &mut [u64]) {
        if self.w > 0 {
            row[self.w - 1] &= self.tail_mask();
        }
    }

    fn atom_rel(&self, name: &str) -> Result<RelBits, EvalError> {
        let mut r = RelBits::empty(self.n);
        if let Some(rel) = self.m.programs.get(name) {
            for &(a, b) in &rel.pairs {
                if a >= self.n || b >= self.n {
                    return Err(EvalError::UnknownState {
                        context: format!("program {name:?}"),
                        index: a.max(b),
                        states: self.n,
                    });
                }
                r.set(a, b);
            }
        }
        Ok(r)
    }

    fn diag(&self, truth: &[u64]) -> RelBits {
        let mut r = RelBits::empty(self.n);
        for_each_bit(truth, |i| r.set(i, i));
        r
    }

    fn denote(&self, p: &Program) -> Result<RelBits, EvalError> {
        Ok(match p {
            Program::Atom(name) => self.atom_rel(name)?,
            Program::Skip => RelBits::identity(self.n),
            Program::Test(a) => self.diag(&self.truth(a)?),
            Program::Seq(p, q) => self.denote(p)?.compose(&self.denote(q)?),
            Program::Union(p, q) => self.denote(p)?.pointwise(&self.denote(q)?, |a, b| a | b),
            Program::Inter(p, q) => self.denote(p)?.pointwise(&self.denote(q)?, |a, b| a & b),
            Program::Diff(p, q) => self.denote(p)?.pointwise(&self.denote(q)?, |a, b| a & !b),
            Program::Star(p) => self.denote(p)?.closure(),
            Program::IfThenElse(cond, p, q) => {
                let t = self.truth(cond)?;
                let mut not_t = self.complement(&t);
                self.mask_tail(&mut not_t);
                let taken = self.diag(&t).compose(&self.denote(p)?);
                let skipped = self.diag(&not_t).compose(&self.denote(q)?);
                taken.pointwise(&skipped, |a, b| a | b)
            }
            Program::WhileDo(cond, p) => {
                let t = self.truth(cond)?;
                let mut not_t = self.complement(&t);
                self.mask_tail(&mut not_t);
                let body = self.diag(&t).compose(&self.denote(p)?);
                body.closure().compose(&self.diag(&not_t))
            }
        })
    }

    fn complement(&self, t: &[u64]) -> Vec<u64> {
        t.iter().map(|&word| !word).collect()
    }

    fn truth(&self, f: &Proposition) -> Result<Vec<u64>, EvalError> {
        Ok(match f {
            Proposition::True => {
                let mut t = vec![!0u64; self.w];
                self.mask_tail(&mut t);
                t
            }
            Proposition::False => vec![0; self.w],
            Proposition::Atom(name) => {
                let mut t = vec![0u64; self.w];
                if let Some(set) = self.m.valuation.get(name) {
                    for &i in set {
                        if i >= self.n {
                            return Err(EvalError::UnknownState {
                                context: format!("proposition {name:?}"),
                                index: i,
                                states: self.n,
                            });
                        }
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
            Proposition::Not(a) => {
                let mut t = self.complement(&self.truth(a)?);
                self.mask_tail(&mut t);
                t
            }
            Proposition::And(a, b) => {
                let mut t = self.truth(a)?;
                for (x, y) in t.iter_mut().zip(self.truth(b)?) {
                    *x &= y;
                }
                t
            }
            Proposition::Or(a, b) => {
                let mut t = self.truth(a)?;
                for (x, y) in t.iter_mut().zip(self.truth(b)?) {
                    *x |= y;
                }
                t
            }
            Proposition::Implies(a, b) => {
                let ta = self.truth(a)?;
                let tb = self.truth(b)?;
                let mut t: Vec<u64> = ta.iter().zip(&tb).map(|(&x, &y)| !x | y).collect();
                self.mask_tail(&mut t);
                t
            }
            Proposition::Diamond(p, a) => {
                let r = self.denote(p)?;
                let ta = self.truth(a)?;
                let mut t = vec![0u64; self.w];
                for i in 0..self.n {
                    if r.row(i).iter().zip(&ta).any(|(&x, &y)| x & y != 0) {
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
            Proposition::Box(p, a) => {
                let r = self.denote(p)?;
                let ta = self.truth(a)?;
                let mut t = vec![0u64; self.w];
                for i in 0..self.n {
                    if r.row(i).iter().zip(&ta).all(|(&x, &y)| x & !y == 0) {
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
            Proposition::FixPoint(p) => {
                let r = self.denote(p)?;
                let mut t = vec![0u64; self.w];
                for i in 0..self.n {
                    if self.only_self_loops(&r, i) && r.row(i).iter().any(|&x| x != 0) {
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
            Proposition::BigFix(p) => {
                let r = self.denote(p)?;
                let mut t = vec![0u64; self.w];
                for i in 0..self.n {
                    if self.only_self_loops(&r, i) {
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
            Proposition::Tie(p, q) => {
                let rp = self.denote(p)?;
                let rq = self.denote(q)?;
                let mut t = vec![0u64; self.w];
                for i in 0..self.n {
                    if rp.row(i) == rq.row(i) {
                        t[i / 64] |= 1 << (i % 64);
                    }
                }
                t
            }
        })
    }

    /// Every successor of `i` (if any) is `i` itself.
    fn only_self_loops(&self, r: &RelBits, i: usize) -> bool {
        let row = r.row(i);
        for (wi, &word) in row.iter().enumerate() {
            let allowed = if wi == i / 64 { 1u64 << (i % 64) } else { 0 };
            if word & !allowed != 0 {
                return false;
            }
        }
        true
    }

    fn bits_to_set(&self, t: &[u64]) -> BTreeSet<StateIx> {
        let mut out = BTreeSet::new();
        for_each_bit(t, |i| {
            out.insert(i);
        });
        out
    }
}

/// The relation a program denotes on a model.
pub fn denote(m: &KripkeModel, p: &Program) -> Result<Relation, EvalError> {
    Ok(Evaluator::new(m).denote(p)?.to_relation())
}

/// The set of states (as indices) where a proposition holds.
pub fn truth_set(m: &KripkeModel, f: &Proposition) -> Result<BTreeSet<StateIx>, EvalError> {
    let ev = Evaluator::new(m);
    let t = ev.truth(f)?;
    Ok(ev.bits_to_set(&t))
}

/// Like [`truth_set`] but mapped through the state name table.
pub fn truth_set_named(m: &KripkeModel, f: &Proposition) -> Result<BTreeSet<String>, EvalError> {
    Ok(truth_set(m, f)?
        .into_iter()
        .map(|i| m.state_name(i).to_string())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropIdentity {
    Equal,
    /// One state (the least in declared state order) where the sides differ.
    Counterexample(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgIdentity {
    Equal,
    /// One pair (least in declared state order) in the symmetric difference.
    Counterexample(String, String),
}

pub fn check_prop_identity(
    m: &KripkeModel,
    lhs: &Proposition,
    rhs: &Proposition,
) -> Result<PropIdentity, EvalError> {
    let a = truth_set(m, lhs)?;
    let b = truth_set(m, rhs)?;
    match a.symmetric_difference(&b).next() {
        None => Ok(PropIdentity::Equal),
        Some(&i) => Ok(PropIdentity::Counterexample(m.state_name(i).to_string())),
    }
}

pub fn check_prog_identity(
    m: &KripkeModel,
    lhs: &Program,
    rhs: &Program,
) -> Result<ProgIdentity, EvalError> {
    let a = denote(m, lhs)?;
    let b = denote(m, rhs)?;
    match a.pairs.symmetric_difference(&b.pairs).next() {
        None => Ok(ProgIdentity::Equal),
        Some(&(i, j)) => Ok(ProgIdentity::Counterexample(
            m.state_name(i).to_string(),
            m.state_name(j).to_string(),
        )),
    }
}

/// Seeded random model over states `s0..s{n-1}`. In deterministic mode each
/// (program, state) draws at most one successor (none with probability
/// `1 - density`); otherwise each pair is included independently with
/// probability `density`. The same arguments always produce the same model.
pub fn random_model(
    seed: u64,
    n_states: usize,
    prog_names: &[&str],
    prop_names: &[&str],
    deterministic: bool,
    density: f64,
) -> KripkeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut m = KripkeModel::new(states, deterministic);
    for &prog in prog_names {
        let mut rel = Relation::default();
        if deterministic {
            for i in 0..n_states {
                if rng.gen::<f64>() < density {
                    let j = rng.gen_range(0..n_states);
                    rel.pairs.insert((i, j));
                }
            }
        } else {
            for i in 0..n_states {
                for j in 0..n_states {
                    if rng.gen::<f64>() < density {
                        rel.pairs.insert((i, j));
                    }
                }
            }
        }
        m.programs.insert(prog.to_string(), rel);
    }
    for &prop in prop_names {
        let mut set = BTreeSet::new();
        for i in 0..n_states {
            if rng.gen::<f64>() < density {
                set.insert(i);
            }
        }
        m.valuation.insert(prop.to_string(), set);
    }
    m
}
