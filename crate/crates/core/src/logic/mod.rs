//! Modal formulas: syntax tree, parser, printer, the axiom catalog and rules.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub use parser::ParseError;

/// A modal formula. `Box` is kept as a primitive so axioms print as written;
/// `□φ = ¬◇¬φ` is enforced by the evaluator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Diamond(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn parse(text: &str) -> std::result::Result<Formula, ParseError> {
        parser::parse(text)
    }

    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn diamond(a: Formula) -> Formula {
        Formula::Diamond(Box::new(a))
    }

    /// `□a`.
    pub fn necessarily(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    /// Distinct variable names in order of first occurrence (preorder).
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_vars(&mut |name| {
            if !out.iter().any(|v| v == name) {
                out.push(name.to_string());
            }
        });
        out
    }

    fn visit_vars(&self, visit: &mut impl FnMut(&str)) {
        match self {
            Formula::Var(name) => visit(name),
            Formula::Top | Formula::Bottom => {}
            Formula::Not(a) | Formula::Diamond(a) | Formula::Box(a) => a.visit_vars(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_vars(visit);
                b.visit_vars(visit);
            }
        }
    }

    /// Replaces variables according to `map`; unmapped names are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Formula {
        self.substitute(&|name| {
            Formula::Var(map.get(name).cloned().unwrap_or_else(|| name.to_string()))
        })
    }

    /// Replaces every variable `x` by `sub(x)`.
    pub fn substitute(&self, sub: &impl Fn(&str) -> Formula) -> Formula {
        let go = |a: &Formula| Box::new(a.substitute(sub));
        match self {
            Formula::Var(name) => sub(name),
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Not(a) => Formula::Not(go(a)),
            Formula::Diamond(a) => Formula::Diamond(go(a)),
            Formula::Box(a) => Formula::Box(go(a)),
            Formula::And(a, b) => Formula::And(go(a), go(b)),
            Formula::Or(a, b) => Formula::Or(go(a), go(b)),
            Formula::Implies(a, b) => Formula::Implies(go(a), go(b)),
            Formula::Iff(a, b) => Formula::Iff(go(a), go(b)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bottom => 1,
            Formula::Not(a) | Formula::Diamond(a) | Formula::Box(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bottom => 0,
            Formula::Not(a) | Formula::Diamond(a) | Formula::Box(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) | Formula::Diamond(_) | Formula::Box(_) => 5,
            Formula::Var(_) | Formula::Top | Formula::Bottom => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        // Left operand, operator, right operand with the minimum precedence each side needs.
        let (a, op, b, left, right) = match self {
            Formula::Var(name) => return f.write_str(name),
            Formula::Top => return f.write_str("1"),
            Formula::Bottom => return f.write_str("0"),
            Formula::Not(a) => return write_prefix(f, "~", a),
            Formula::Diamond(a) => return write_prefix(f, "<>", a),
            Formula::Box(a) => return write_prefix(f, "[]", a),
            Formula::And(a, b) => (a, "&", b, 4, 5),
            Formula::Or(a, b) => (a, "|", b, 3, 4),
            Formula::Implies(a, b) => (a, "->", b, 3, 2),
            Formula::Iff(a, b) => (a, "<->", b, 1, 2),
        };
        a.write_at(f, left)?;
        write!(f, " {op} ")?;
        b.write_at(f, right)
    }
}

fn write_prefix(f: &mut fmt::Formatter<'_>, op: &str, a: &Formula) -> fmt::Result {
    f.write_str(op)?;
    a.write_at(f, 5)
}

/// Minimal-parenthesis rendering in the ASCII syntax.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        Formula::parse(s)
    }
}

/// The axiom catalog as written, keyed by name.
pub const AXIOMS: [(&str, &str); 12] = [
    ("K", "[](p -> q) -> ([]p -> []q)"),
    ("D", "[]p -> <>p"),
    ("T", "p -> <>p"),
    ("4", "<><>p -> <>p"),
    ("B", "p -> []<>p"),
    ("B2", "<>([]q & <>[]p & ~p) -> q"),
    ("Dum", "[]([](p -> []p) -> p) & <>[]p -> p"),
    ("Grz", "[](<>(p & <>~p) | p) -> p"),
    ("M", "[]<>p -> <>[]p"),
    ("G2", "<>[]p -> []<>p"),
    ("H3", "[]([]p -> q) | []([]q -> p)"),
    ("R1", "p & <>[]p -> []p"),
];

/// Canonical catalog name, accepting `.2`/`.3` and any letter case.
pub fn axiom_name(name: &str) -> Result<&'static str> {
    let wanted = match name {
        ".2" => "G2",
        ".3" => "H3",
        other => other,
    };
    AXIOMS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(wanted))
        .map(|(n, _)| *n)
        .ok_or_else(|| Error::Lookup {
            kind: "axiom",
            name: name.to_string(),
        })
}

pub fn axiom(name: &str) -> Result<Formula> {
    let key = axiom_name(name)?;
    let text = AXIOMS.iter().find(|(n, _)| *n == key).expect("catalog entry").1;
    Ok(Formula::parse(text).expect("catalog formulas parse"))
}

/// `□φ′ ∨ □ψ′` where `φ′`, `ψ′` rename the variables of `φ`, `ψ` to
/// `v0, v1, …` in order of first occurrence, `ψ′` continuing the count.
pub fn meet_axiom(phi: &Formula, psi: &Formula) -> Formula {
    let mut next = 0usize;
    let mut fresh = |f: &Formula| {
        let map: BTreeMap<String, String> = f
            .variables()
            .into_iter()
            .map(|v| {
                let name = format!("v{next}");
                next += 1;
                (v, name)
            })
            .collect();
        f.rename(&map)
    };
    let a = fresh(phi);
    let b = fresh(psi);
    Formula::or(Formula::necessarily(a), Formula::necessarily(b))
}

/// An inference rule `φ₁, …, φₙ / ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " / {}", self.conclusion)
    }
}

/// `◇p ∧ ◇¬p / ⊥`.
pub fn rule_p2() -> Rule {
    Rule {
        premises: vec![Formula::parse("<>p & <>~p").expect("fixed text")],
        conclusion: Formula::Bottom,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("p -> <>p"), Formula::implies(Formula::var("p"), Formula::diamond(Formula::var("p"))));
        assert_eq!(
            p("~<>p & q"),
            Formula::and(Formula::not(Formula::diamond(Formula::var("p"))), Formula::var("q"))
        );
        assert_eq!(p("a -> b -> c"), p("a -> (b -> c)"));
        assert_eq!(p("a <-> b <-> c"), p("(a <-> b) <-> c"));
        assert_eq!(p("a & b | c"), p("(a & b) | c"));
        assert_eq!(p("x_1 & yZ9"), Formula::and(Formula::var("x_1"), Formula::var("yZ9")));
    }

    #[test]
    fn print_examples() {
        assert_eq!(Formula::diamond(Formula::var("p")).to_string(), "<>p");
        assert_eq!(p("[]p -> <>p").to_string(), "[]p -> <>p");
        assert_eq!(p("a <-> (b <-> c)").to_string(), "a <-> (b <-> c)");
        assert_eq!(p("(a <-> b) <-> c").to_string(), "a <-> b <-> c");
        assert_eq!(p("(a -> b) -> c").to_string(), "(a -> b) -> c");
        assert_eq!(p("~(a & b)").to_string(), "~(a & b)");
        assert_eq!(p("  ((p))  ").to_string(), "p");
    }

    #[test]
    fn catalog() {
        assert_eq!(axiom("T").unwrap(), p("p -> <>p"));
        assert_eq!(axiom("B2").unwrap().to_string(), "<>([]q & <>[]p & ~p) -> q");
        assert_eq!(axiom(".3").unwrap(), axiom("H3").unwrap());
        assert_eq!(axiom("grz").unwrap(), axiom("Grz").unwrap());
        assert!(matches!(axiom("X9"), Err(Error::Lookup { .. })));
        for (name, text) in AXIOMS {
            let printed = axiom(name).unwrap().to_string();
            assert_eq!(p(&printed), p(text));
            if name != "K" {
                assert_eq!(printed, text);
            }
        }
        assert_eq!(axiom("K").unwrap().to_string(), "[](p -> q) -> []p -> []q");
    }

    #[test]
    fn meet_examples() {
        let m = meet_axiom(&axiom("T").unwrap(), &axiom("4").unwrap());
        assert_eq!(m.to_string(), "[](v0 -> <>v0) | [](<><>v1 -> <>v1)");
        assert_eq!(meet_axiom(&Formula::Top, &Formula::Top).to_string(), "[]1 | []1");
        let k = axiom("K").unwrap();
        assert_eq!(meet_axiom(&k, &k).variables(), vec!["v0", "v1", "v2", "v3"]);
    }

    #[test]
    fn rule_rendering() {
        let r = rule_p2();
        assert_eq!(r.premises, vec![p("<>p & <>~p")]);
        assert_eq!(r.conclusion, Formula::Bottom);
        assert_eq!(r.to_string(), "<>p & <>~p / 0");
    }

    #[test]
    fn variables_in_first_occurrence_order() {
        assert_eq!(p("q & (p | q) -> r").variables(), vec!["q", "p", "r"]);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            4 => prop::sample::select(vec!["p", "q", "r", "x1"]).prop_map(Formula::var),
            1 => Just(Formula::Top),
            1 => Just(Formula::Bottom),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::diamond),
                inner.clone().prop_map(Formula::necessarily),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            prop_assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn meet_variables_disjoint(f in arb_formula(), g in arb_formula()) {
            let m = meet_axiom(&f, &g);
            let Formula::Or(a, b) = m else { panic!("meet is a disjunction") };
            let va = a.variables();
            prop_assert!(b.variables().iter().all(|v| !va.contains(v)));
        }
    }
}
