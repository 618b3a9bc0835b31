//! Abstract syntax for the logic: propositions over strict programs, plus the
//! star-elimination rewrite and the strictness check.

use std::collections::BTreeSet;
use thiserror::Error;

/// A proposition. Modalities take a [`Program`]; `Tie` compares two programs
/// pointwise (it holds where both programs have identical successor sets).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Proposition {
    True,
    False,
    Atom(String),
    Not(Box<Proposition>),
    And(Box<Proposition>, Box<Proposition>),
    Or(Box<Proposition>, Box<Proposition>),
    Implies(Box<Proposition>, Box<Proposition>),
    Diamond(Box<Program>, Box<Proposition>),
    Box(Box<Program>, Box<Proposition>),
    /// Holds where the program has at least one successor and every successor
    /// is the current state itself.
    FixPoint(Box<Program>),
    /// Holds where every successor (possibly none) is the current state.
    BigFix(Box<Program>),
    /// Holds where the two programs have exactly the same successors.
    Tie(Box<Program>, Box<Program>),
}

/// A program term. The strict fragment excludes `Union`, `Inter`, `Diff` and
/// `Star`; those exist so the workbench can talk about the richer dialects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Atom(String),
    Skip,
    Test(Box<Proposition>),
    Seq(Box<Program>, Box<Program>),
    Union(Box<Program>, Box<Program>),
    Inter(Box<Program>, Box<Program>),
    Diff(Box<Program>, Box<Program>),
    Star(Box<Program>),
    IfThenElse(Box<Proposition>, Box<Program>, Box<Program>),
    WhileDo(Box<Proposition>, Box<Program>),
}

/// Atom inventory of a term: proposition atoms and program atoms are separate
/// namespaces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomicNames {
    pub props: BTreeSet<String>,
    pub progs: BTreeSet<String>,
}

impl AtomicNames {
    pub fn union(mut self, other: AtomicNames) -> AtomicNames {
        self.props.extend(other.props);
        self.progs.extend(other.progs);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DestarError {
    /// A `Star` that is not the immediate program of a modality has no
    /// while-loop equivalent; the offending subterm is reported verbatim.
    #[error("star cannot be eliminated at this position: {0}")]
    NonEliminableStar(String),
}

impl Proposition {
    pub fn atom(name: impl Into<String>) -> Proposition {
        Proposition::Atom(name.into())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Proposition) -> Proposition {
        Proposition::Not(Box::new(p))
    }
    pub fn and(a: Proposition, b: Proposition) -> Proposition {
        Proposition::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Proposition, b: Proposition) -> Proposition {
        Proposition::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Proposition, b: Proposition) -> Proposition {
        Proposition::Implies(Box::new(a), Box::new(b))
    }
    pub fn diamond(p: Program, a: Proposition) -> Proposition {
        Proposition::Diamond(Box::new(p), Box::new(a))
    }
    pub fn box_(p: Program, a: Proposition) -> Proposition {
        Proposition::Box(Box::new(p), Box::new(a))
    }
    pub fn fix(p: Program) -> Proposition {
        Proposition::FixPoint(Box::new(p))
    }
    pub fn big_fix(p: Program) -> Proposition {
        Proposition::BigFix(Box::new(p))
    }
    pub fn tie(p: Program, q: Program) -> Proposition {
        Proposition::Tie(Box::new(p), Box::new(q))
    }

    /// Left-associated conjunction; empty input is `True`.
    pub fn and_all(parts: impl IntoIterator<Item = Proposition>) -> Proposition {
        let mut it = parts.into_iter();
        match it.next() {
            None => Proposition::True,
            Some(first) => it.fold(first, Proposition::and),
        }
    }

    /// Left-associated disjunction; empty input is `False`.
    pub fn or_all(parts: impl IntoIterator<Item = Proposition>) -> Proposition {
        let mut it = parts.into_iter();
        match it.next() {
            None => Proposition::False,
            Some(first) => it.fold(first, Proposition::or),
        }
    }

    pub fn atomic_names(&self) -> AtomicNames {
        let mut names = AtomicNames::default();
        self.collect_names(&mut names);
        names
    }

    fn collect_names(&self, names: &mut AtomicNames) {
        match self {
            Proposition::True | Proposition::False => {}
            Proposition::Atom(name) => {
                names.props.insert(name.clone());
            }
            Proposition::Not(a) => a.collect_names(names),
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Implies(a, b) => {
                a.collect_names(names);
                b.collect_names(names);
            }
            Proposition::Diamond(p, a) | Proposition::Box(p, a) => {
                p.collect_names(names);
                a.collect_names(names);
            }
            Proposition::FixPoint(p) | Proposition::BigFix(p) => p.collect_names(names),
            Proposition::Tie(p, q) => {
                p.collect_names(names);
                q.collect_names(names);
            }
        }
    }

    /// True when no `Union`, `Inter`, `Diff` or `Star` occurs anywhere in the
    /// term, including inside tests and modalities.
    pub fn is_strict(&self) -> bool {
        match self {
            Proposition::True | Proposition::False | Proposition::Atom(_) => true,
            Proposition::Not(a) => a.is_strict(),
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Implies(a, b) => {
                a.is_strict() && b.is_strict()
            }
            Proposition::Diamond(p, a) | Proposition::Box(p, a) => p.is_strict() && a.is_strict(),
            Proposition::FixPoint(p) | Proposition::BigFix(p) => p.is_strict(),
            Proposition::Tie(p, q) => p.is_strict() && q.is_strict(),
        }
    }

    /// Rewrites every star into a while loop. Only stars that sit directly
    /// under a modality can be eliminated:
    ///
    /// * `[x*]a` becomes `[while a do x od]false`
    /// * `<x*>a` becomes `<while !a do x od>true`
    ///
    /// Both rewrites preserve the truth set on every model. A star anywhere
    /// else is an error.
    pub fn destar(&self) -> Result<Proposition, DestarError> {
        Ok(match self {
            Proposition::True => Proposition::True,
            Proposition::False => Proposition::False,
            Proposition::Atom(name) => Proposition::Atom(name.clone()),
            Proposition::Not(a) => Proposition::not(a.destar()?),
            Proposition::And(a, b) => Proposition::and(a.destar()?, b.destar()?),
            Proposition::Or(a, b) => Proposition::or(a.destar()?, b.destar()?),
            Proposition::Implies(a, b) => Proposition::implies(a.destar()?, b.destar()?),
            Proposition::Box(p, a) => {
                let body = a.destar()?;
                match p.as_ref() {
                    Program::Star(x) => Proposition::box_(
                        Program::while_do(body, x.destar()?),
                        Proposition::False,
                    ),
                    other => Proposition::box_(other.destar()?, body),
                }
            }
            Proposition::Diamond(p, a) => {
                let body = a.destar()?;
                match p.as_ref() {
                    Program::Star(x) => Proposition::diamond(
                        Program::while_do(Proposition::not(body), x.destar()?),
                        Proposition::True,
                    ),
                    other => Proposition::diamond(other.destar()?, body),
                }
            }
            Proposition::FixPoint(p) => Proposition::fix(p.destar()?),
            Proposition::BigFix(p) => Proposition::big_fix(p.destar()?),
            Proposition::Tie(p, q) => Proposition::tie(p.destar()?, q.destar()?),
        })
    }
}

impl Program {
    pub fn atom(name: impl Into<String>) -> Program {
        Program::Atom(name.into())
    }
    pub fn test(a: Proposition) -> Program {
        Program::Test(Box::new(a))
    }
    pub fn seq(p: Program, q: Program) -> Program {
        Program::Seq(Box::new(p), Box::new(q))
    }
    pub fn union(p: Program, q: Program) -> Program {
        Program::Union(Box::new(p), Box::new(q))
    }
    pub fn inter(p: Program, q: Program) -> Program {
        Program::Inter(Box::new(p), Box::new(q))
    }
    pub fn diff(p: Program, q: Program) -> Program {
        Program::Diff(Box::new(p), Box::new(q))
    }
    pub fn star(p: Program) -> Program {
        Program::Star(Box::new(p))
    }
    pub fn if_then_else(cond: Proposition, p: Program, q: Program) -> Program {
        Program::IfThenElse(Box::new(cond), Box::new(p), Box::new(q))
    }
    pub fn while_do(cond: Proposition, p: Program) -> Program {
        Program::WhileDo(Box::new(cond), Box::new(p))
    }

    /// Left-associated composition of a nonempty sequence of programs.
    pub fn seq_all(parts: impl IntoIterator<Item = Program>) -> Program {
        let mut it = parts.into_iter();
        let first = it.next().expect("seq_all needs at least one program");
        it.fold(first, Program::seq)
    }

    pub fn atomic_names(&self) -> AtomicNames {
        let mut names = AtomicNames::default();
        self.collect_names(&mut names);
        names
    }

    fn collect_names(&self, names: &mut AtomicNames) {
        match self {
            Program::Atom(name) => {
                names.progs.insert(name.clone());
            }
            Program::Skip => {}
            Program::Test(a) => a.collect_names(names),
            Program::Seq(p, q)
            | Program::Union(p, q)
            | Program::Inter(p, q)
            | Program::Diff(p, q) => {
                p.collect_names(names);
                q.collect_names(names);
            }
            Program::Star(p) => p.collect_names(names),
            Program::IfThenElse(cond, p, q) => {
                cond.collect_names(names);
                p.collect_names(names);
                q.collect_names(names);
            }
            Program::WhileDo(cond, p) => {
                cond.collect_names(names);
                p.collect_names(names);
            }
        }
    }

    pub fn is_strict(&self) -> bool {
        match self {
            Program::Atom(_) | Program::Skip => true,
            Program::Test(a) => a.is_strict(),
            Program::Union(_, _) | Program::Inter(_, _) | Program::Diff(_, _)
            | Program::Star(_) => false,
            Program::Seq(p, q) => p.is_strict() && q.is_strict(),
            Program::IfThenElse(cond, p, q) => {
                cond.is_strict() && p.is_strict() && q.is_strict()
            }
            Program::WhileDo(cond, p) => cond.is_strict() && p.is_strict(),
        }
    }

    /// Star elimination inside a program: stars cannot be rewritten at
    /// program positions, so any remaining one is an error, but tests and
    /// loop/branch conditions may still contain eliminable modal stars.
    fn destar(&self) -> Result<Program, DestarError> {
        Ok(match self {
            Program::Atom(name) => Program::Atom(name.clone()),
            Program::Skip => Program::Skip,
            Program::Test(a) => Program::test(a.destar()?),
            Program::Seq(p, q) => Program::seq(p.destar()?, q.destar()?),
            Program::Union(p, q) => Program::union(p.destar()?, q.destar()?),
            Program::Inter(p, q) => Program::inter(p.destar()?, q.destar()?),
            Program::Diff(p, q) => Program::diff(p.destar()?, q.destar()?),
            Program::Star(_) => {
                return Err(DestarError::NonEliminableStar(self.to_string()));
            }
            Program::IfThenElse(cond, p, q) => {
                Program::if_then_else(cond.destar()?, p.destar()?, q.destar()?)
            }
            Program::WhileDo(cond, p) => Program::while_do(cond.destar()?, p.destar()?),
        })
    }

    /// True when a `Star` node occurs anywhere in the term.
    pub fn contains_star(&self) -> bool {
        match self {
            Program::Atom(_) | Program::Skip => false,
            Program::Test(a) => a.contains_star(),
            Program::Seq(p, q)
            | Program::Union(p, q)
            | Program::Inter(p, q)
            | Program::Diff(p, q) => p.contains_star() || q.contains_star(),
            Program::Star(_) => true,
            Program::IfThenElse(cond, p, q) => {
                cond.contains_star() || p.contains_star() || q.contains_star()
            }
            Program::WhileDo(cond, p) => cond.contains_star() || p.contains_star(),
        }
    }
}

impl Proposition {
    pub fn contains_star(&self) -> bool {
        match self {
            Proposition::True | Proposition::False | Proposition::Atom(_) => false,
            Proposition::Not(a) => a.contains_star(),
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Implies(a, b) => {
                a.contains_star() || b.contains_star()
            }
            Proposition::Diamond(p, a) | Proposition::Box(p, a) => {
                p.contains_star() || a.contains_star()
            }
            Proposition::FixPoint(p) | Proposition::BigFix(p) => p.contains_star(),
            Proposition::Tie(p, q) => p.contains_star() || q.contains_star(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Program as Pg;
    use super::Proposition as Pr;
    use super::*;

    fn ne() -> Pg {
        Pg::seq(Pg::atom("N"), Pg::atom("E"))
    }

    #[test]
    fn names_are_split_by_namespace() {
        let f = Pr::and(
            Pr::diamond(Pg::seq(Pg::atom("N"), Pg::test(Pr::atom("t"))), Pr::atom("u")),
            Pr::tie(Pg::atom("E"), Pg::Skip),
        );
        let names = f.atomic_names();
        assert_eq!(
            names.props.iter().collect::<Vec<_>>(),
            vec!["t", "u"],
        );
        assert_eq!(
            names.progs.iter().collect::<Vec<_>>(),
            vec!["E", "N"],
        );
    }

    #[test]
    fn box_star_becomes_while_false() {
        let f = Pr::box_(Pg::star(Pg::atom("x")), Pr::atom("a"));
        let d = f.destar().unwrap();
        assert_eq!(
            d,
            Pr::box_(
                Pg::while_do(Pr::atom("a"), Pg::atom("x")),
                Pr::False
            )
        );
    }

    #[test]
    fn diamond_star_becomes_while_true() {
        let f = Pr::diamond(Pg::star(ne()), Pr::atom("neon"));
        let d = f.destar().unwrap();
        assert_eq!(
            d,
            Pr::diamond(
                Pg::while_do(Pr::not(Pr::atom("neon")), ne()),
                Pr::True
            )
        );
    }

    #[test]
    fn rewrite_applies_to_already_rewritten_bodies() {
        // [N*][E*]a: the inner box is rewritten first and the result feeds
        // the outer loop condition.
        let f = Pr::box_(
            Pg::star(Pg::atom("N")),
            Pr::box_(Pg::star(Pg::atom("E")), Pr::atom("a")),
        );
        let inner = Pr::box_(Pg::while_do(Pr::atom("a"), Pg::atom("E")), Pr::False);
        assert_eq!(
            f.destar().unwrap(),
            Pr::box_(Pg::while_do(inner, Pg::atom("N")), Pr::False)
        );
    }

    #[test]
    fn star_outside_modality_is_rejected() {
        let f = Pr::diamond(Pg::seq(Pg::star(Pg::atom("x")), Pg::atom("y")), Pr::True);
        match f.destar() {
            Err(DestarError::NonEliminableStar(term)) => assert!(term.contains('*')),
            other => panic!("expected NonEliminableStar, got {other:?}"),
        }
    }

    #[test]
    fn nested_star_under_star_is_rejected() {
        let f = Pr::box_(Pg::star(Pg::star(Pg::atom("x"))), Pr::True);
        assert!(f.destar().is_err());
    }

    #[test]
    fn destar_is_idempotent_and_star_free() {
        let f = Pr::and(
            Pr::box_(Pg::star(Pg::atom("N")), Pr::atom("a")),
            Pr::diamond(Pg::star(ne()), Pr::atom("b")),
        );
        let once = f.destar().unwrap();
        assert!(!once.contains_star());
        assert_eq!(once.destar().unwrap(), once);
        assert_eq!(once.atomic_names(), f.atomic_names());
    }

    #[test]
    fn strictness_rejects_set_operators_everywhere() {
        assert!(Pr::tie(ne(), Pg::Skip).is_strict());
        assert!(!Pr::diamond(Pg::union(Pg::atom("p"), Pg::atom("q")), Pr::True).is_strict());
        assert!(!Pr::fix(Pg::diff(Pg::atom("p"), Pg::atom("q"))).is_strict());
        // inside a test inside a modality
        let buried = Pr::box_(
            Pg::test(Pr::diamond(Pg::star(Pg::atom("p")), Pr::True)),
            Pr::True,
        );
        assert!(!buried.is_strict());
    }

    #[test]
    fn while_and_if_are_strict_when_components_are() {
        let p = Pg::if_then_else(
            Pr::atom("c"),
            Pg::while_do(Pr::atom("d"), Pg::atom("x")),
            Pg::Skip,
        );
        assert!(p.is_strict());
    }
}
