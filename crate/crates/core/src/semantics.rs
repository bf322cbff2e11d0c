//! Evaluation of formulas in Kripke models and modal algebras, with
//! brute-force validity, quasiidentity and satisfiability checks.
//!
//! The diamond follows the complex-algebra convention:
//! `v(◇φ) = {w : R(w) ∩ v(φ) ≠ ∅}`, so a world satisfies `◇φ` when it sees a
//! `φ`-world. Frame validity and validity in the complex algebra then agree.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ba::Element;
use crate::error::{Error, Result};
use crate::frames::{Frame, FrameCondition, WorldSet};
use crate::logic::{axiom_name, Formula};
use crate::operators::ModalAlgebra;
use crate::verdict::Verdict;

/// World sets per variable.
pub type Valuation = BTreeMap<String, WorldSet>;
/// Algebra elements per variable.
pub type Assignment = BTreeMap<String, Element>;

/// Upper bound on the number of valuations or assignments a search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_candidates: u64,
}

impl Budget {
    pub const DEFAULT: Budget = Budget {
        max_candidates: 1 << 24,
    };

    pub fn new(max_candidates: u64) -> Self {
        Budget { max_candidates }
    }

    /// Fails unless `2^log2_required` fits in the budget.
    pub fn admit(&self, log2_required: u32) -> Result<u64> {
        if log2_required >= 64 || (1u64 << log2_required) > self.max_candidates {
            return Err(Error::Budget {
                log2_required,
                budget: self.max_candidates,
            });
        }
        Ok(1u64 << log2_required)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Diamond,
    Box,
}

/// A formula in postfix form with variables resolved to slots.
#[derive(Clone, Debug)]
struct Program {
    ops: Vec<Op>,
}

impl Program {
    fn compile(formula: &Formula, vars: &[String]) -> Result<Program> {
        let mut ops = Vec::with_capacity(formula.size());
        emit(formula, vars, &mut ops)?;
        Ok(Program { ops })
    }

    /// Runs the program with `dia` as the diamond on sets below `full`.
    fn run(&self, values: &[u32], full: u32, dia: &impl Fn(u32) -> u32, stack: &mut Vec<u32>) -> u32 {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => values[i],
                Op::Top => full,
                Op::Bottom => 0,
                Op::Not => full & !stack.pop().unwrap(),
                Op::Diamond => dia(stack.pop().unwrap()),
                Op::Box => full & !dia(full & !stack.pop().unwrap()),
                binary => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    match binary {
                        Op::And => a & b,
                        Op::Or => a | b,
                        Op::Implies => (full & !a) | b,
                        _ => full & !(a ^ b),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}

fn emit(f: &Formula, vars: &[String], ops: &mut Vec<Op>) -> Result<()> {
    let op = match f {
        Formula::Var(name) => Op::Var(
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Binding(name.clone()))?,
        ),
        Formula::Top => Op::Top,
        Formula::Bottom => Op::Bottom,
        Formula::Not(a) | Formula::Diamond(a) | Formula::Box(a) => {
            emit(a, vars, ops)?;
            match f {
                Formula::Not(_) => Op::Not,
                Formula::Diamond(_) => Op::Diamond,
                _ => Op::Box,
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            emit(a, vars, ops)?;
            emit(b, vars, ops)?;
            match f {
                Formula::And(..) => Op::And,
                Formula::Or(..) => Op::Or,
                Formula::Implies(..) => Op::Implies,
                _ => Op::Iff,
            }
        }
    };
    ops.push(op);
    Ok(())
}

/// Sorted union of the variables of all formulas.
fn collect_vars<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut vars: Vec<String> = formulas.into_iter().flat_map(|f| f.variables()).collect();
    vars.sort();
    vars.dedup();
    vars
}

fn frame_diamond(frame: &Frame) -> impl Fn(u32) -> u32 + Sync + '_ {
    move |x| {
        frame
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, &row)| row & x != 0)
            .fold(0, |acc, (w, _)| acc | 1 << w)
    }
}

fn algebra_diamond(a: &ModalAlgebra) -> impl Fn(u32) -> u32 + Sync {
    let table: Vec<u32> = a.table().values().iter().map(|e| e.bits()).collect();
    move |x| table[x as usize]
}

/// Decodes candidate `index`: variable `j` receives bits `n·j .. n·j+n`.
fn decode(index: u64, width: usize, k: usize, full: u32) -> Vec<u32> {
    (0..k).map(|j| (index >> (width * j)) as u32 & full).collect()
}

/// Lowest candidate index satisfying `bad`, searched in parallel.
fn first_index(total: u64, bad: impl Fn(u64, &mut Vec<u32>) -> bool + Sync) -> Option<u64> {
    (0..total)
        .into_par_iter()
        .map_init(Vec::new, |stack, i| (i, bad(i, stack)))
        .find_first(|&(_, b)| b)
        .map(|(i, _)| i)
}

pub fn eval_in_model(frame: &Frame, v: &Valuation, formula: &Formula) -> Result<WorldSet> {
    let vars = collect_vars([formula]);
    let full = frame.all_worlds();
    let values = vars
        .iter()
        .map(|name| match v.get(name) {
            Some(&set) if set & !full == 0 => Ok(set),
            Some(&set) => Err(Error::Domain(format!("world set {set:#b} for `{name}` exceeds the frame"))),
            None => Err(Error::Binding(name.clone())),
        })
        .collect::<Result<Vec<u32>>>()?;
    let prog = Program::compile(formula, &vars)?;
    Ok(prog.run(&values, full, &frame_diamond(frame), &mut Vec::new()))
}

pub fn eval_in_algebra(a: &ModalAlgebra, s: &Assignment, formula: &Formula) -> Result<Element> {
    let vars = collect_vars([formula]);
    let values = vars
        .iter()
        .map(|name| match s.get(name) {
            Some(&x) if a.base().contains(x) => Ok(x.bits()),
            Some(&x) => Err(Error::Domain(format!("{x} is not an element of the algebra"))),
            None => Err(Error::Binding(name.clone())),
        })
        .collect::<Result<Vec<u32>>>()?;
    let prog = Program::compile(formula, &vars)?;
    let out = prog.run(&values, a.base().top().bits(), &algebra_diamond(a), &mut Vec::new());
    Ok(Element::new(out))
}

/// Checks `φ` under every valuation; the witness is the first falsifying one.
pub fn frame_validates(frame: &Frame, formula: &Formula, budget: Budget) -> Result<Verdict<Valuation>> {
    let vars = collect_vars([formula]);
    let n = frame.n_worlds();
    let total = budget.admit((n * vars.len()) as u32)?;
    let prog = Program::compile(formula, &vars)?;
    let full = frame.all_worlds();
    let dia = frame_diamond(frame);
    let k = vars.len();
    let hit = first_index(total, |i, stack| {
        prog.run(&decode(i, n, k, full), full, &dia, stack) != full
    });
    Ok(Verdict::from(hit.map(|i| {
        vars.iter().cloned().zip(decode(i, n, k, full)).collect::<Valuation>()
    })))
}

fn assignment(vars: &[String], values: Vec<u32>) -> Assignment {
    vars.iter()
        .cloned()
        .zip(values.into_iter().map(Element::new))
        .collect()
}

/// Checks that `φ` evaluates to top under every assignment.
pub fn algebra_validates(a: &ModalAlgebra, formula: &Formula, budget: Budget) -> Result<Verdict<Assignment>> {
    quasiidentity_holds(a, &[], formula, budget)
}

/// `(φ₁ = 1 & … & φₙ = 1) ⇒ ψ = 1` under every assignment.
pub fn quasiidentity_holds(
    a: &ModalAlgebra,
    premises: &[Formula],
    conclusion: &Formula,
    budget: Budget,
) -> Result<Verdict<Assignment>> {
    let vars = collect_vars(premises.iter().chain([conclusion]));
    let n = a.n_atoms();
    let total = budget.admit((n * vars.len()) as u32)?;
    let prem: Vec<Program> = premises
        .iter()
        .map(|p| Program::compile(p, &vars))
        .collect::<Result<_>>()?;
    let concl = Program::compile(conclusion, &vars)?;
    let full = a.base().top().bits();
    let dia = algebra_diamond(a);
    let k = vars.len();
    let hit = first_index(total, |i, stack| {
        let values = decode(i, n, k, full);
        prem.iter().all(|p| p.run(&values, full, &dia, stack) == full)
            && concl.run(&values, full, &dia, stack) != full
    });
    Ok(Verdict::from(hit.map(|i| assignment(&vars, decode(i, n, k, full)))))
}

/// Some assignment makes every premise equal to top. This is activeness
/// relative to one finite algebra, not the logic-level notion.
pub fn premises_active(a: &ModalAlgebra, premises: &[Formula], budget: Budget) -> Result<Option<Assignment>> {
    Ok(quasiidentity_holds(a, premises, &Formula::Bottom, budget)?.into_witness())
}

/// The frame condition matching a catalog axiom, if it has one.
pub fn correspondent(axiom: &str) -> Result<Option<FrameCondition>> {
    Ok(match axiom_name(axiom)? {
        "D" => Some(FrameCondition::Serial),
        "T" => Some(FrameCondition::Reflexive),
        "4" => Some(FrameCondition::Transitive),
        "B" => Some(FrameCondition::Symmetric),
        "B2" => Some(FrameCondition::B2),
        "Dum" => Some(FrameCondition::Dum),
        "Grz" => Some(FrameCondition::Grz),
        "M" => Some(FrameCondition::M),
        "G2" => Some(FrameCondition::Convergent),
        "H3" => Some(FrameCondition::Dot3),
        "R1" => Some(FrameCondition::R1),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::complex_algebra;
    use crate::frames::{all_quasiorders, all_relations};
    use crate::logic::{axiom, AXIOMS};
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn f2() -> Frame {
        Frame::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    fn val(pairs: &[(&str, u32)]) -> Valuation {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    fn asg(pairs: &[(&str, u32)]) -> Assignment {
        pairs.iter().map(|&(k, v)| (k.to_string(), Element::new(v))).collect()
    }

    /// Direct clause-by-clause evaluation without compilation.
    fn naive(frame: &Frame, v: &Valuation, f: &Formula) -> u32 {
        let full = frame.all_worlds();
        let dia = |x: u32| (0..frame.n_worlds()).filter(|&w| frame.successors(w) & x != 0).fold(0, |a, w| a | 1 << w);
        match f {
            Formula::Var(n) => v[n],
            Formula::Top => full,
            Formula::Bottom => 0,
            Formula::Not(a) => full & !naive(frame, v, a),
            Formula::Diamond(a) => dia(naive(frame, v, a)),
            Formula::Box(a) => {
                let x = naive(frame, v, a);
                (0..frame.n_worlds()).filter(|&w| frame.successors(w) & !x == 0).fold(0, |a, w| a | 1 << w)
            }
            Formula::And(a, b) => naive(frame, v, a) & naive(frame, v, b),
            Formula::Or(a, b) => naive(frame, v, a) | naive(frame, v, b),
            Formula::Implies(a, b) => (full & !naive(frame, v, a)) | naive(frame, v, b),
            Formula::Iff(a, b) => full & !(naive(frame, v, a) ^ naive(frame, v, b)),
        }
    }

    #[test]
    fn model_examples() {
        assert_eq!(eval_in_model(&f2(), &val(&[("p", 0b01)]), &p("<>p")).unwrap(), 0b01);
        assert_eq!(eval_in_model(&f2(), &Valuation::new(), &p("1")).unwrap(), 0b11);
        let u2 = Frame::universal(2).unwrap();
        assert_eq!(eval_in_model(&u2, &val(&[("p", 0b01)]), &p("<>p")).unwrap(), 0b11);
        assert!(matches!(
            eval_in_model(&f2(), &Valuation::new(), &p("q")),
            Err(Error::Binding(name)) if name == "q"
        ));
        assert!(matches!(eval_in_model(&f2(), &val(&[("p", 4)]), &p("p")), Err(Error::Domain(_))));
    }

    #[test]
    fn frame_validity_examples() {
        let t = axiom("T").unwrap();
        assert!(frame_validates(&Frame::identity(3).unwrap(), &t, Budget::DEFAULT).unwrap().holds());
        let b = axiom("B").unwrap();
        assert_eq!(
            frame_validates(&f2(), &b, Budget::DEFAULT).unwrap(),
            Verdict::Fails(val(&[("p", 0b01)]))
        );
        assert!(frame_validates(&Frame::universal(3).unwrap(), &b, Budget::DEFAULT).unwrap().holds());
    }

    #[test]
    fn budget_guard() {
        let k = axiom("K").unwrap();
        let big = Frame::identity(12).unwrap();
        assert_eq!(Budget::DEFAULT.admit(24).unwrap(), 1 << 24);
        assert!(Budget::DEFAULT.admit(25).is_err());
        let three = p("p & q & r");
        assert!(matches!(
            frame_validates(&big, &three, Budget::DEFAULT),
            Err(Error::Budget { log2_required: 36, .. })
        ));
        assert!(frame_validates(&f2(), &k, Budget::new(15)).is_err());
        assert!(frame_validates(&f2(), &k, Budget::new(16)).is_ok());
    }

    #[test]
    fn algebra_validity_examples() {
        let f2plus = ModalAlgebra::from_atom_values(2, &[0b01, 0b11]).unwrap();
        let disc = ModalAlgebra::from_atom_values(2, &[0b11, 0b11]).unwrap();
        assert!(algebra_validates(&f2plus, &p("p | ~p"), Budget::DEFAULT).unwrap().holds());
        assert!(algebra_validates(&f2plus, &axiom("B2").unwrap(), Budget::DEFAULT).unwrap().holds());
        assert!(algebra_validates(&disc, &axiom("B").unwrap(), Budget::DEFAULT).unwrap().holds());
        assert_eq!(
            eval_in_algebra(&f2plus, &asg(&[("p", 0b10)]), &p("<>p")).unwrap(),
            Element::new(0b11)
        );
    }

    #[test]
    fn quasiidentity_examples() {
        let prem = [p("<>x & <>~x")];
        let two = ModalAlgebra::two();
        assert!(quasiidentity_holds(&two, &prem, &Formula::Bottom, Budget::DEFAULT).unwrap().holds());
        let disc = ModalAlgebra::from_atom_values(2, &[0b11, 0b11]).unwrap();
        assert_eq!(
            quasiidentity_holds(&disc, &prem, &Formula::Bottom, Budget::DEFAULT).unwrap(),
            Verdict::Fails(asg(&[("x", 0b01)]))
        );
        let phi = p("[]x -> y");
        assert!(quasiidentity_holds(&disc, &[phi.clone()], &phi, Budget::DEFAULT).unwrap().holds());
    }

    #[test]
    fn activeness_examples() {
        let prem = [p("<>x & <>~x")];
        let disc = ModalAlgebra::from_atom_values(2, &[0b11, 0b11]).unwrap();
        assert_eq!(premises_active(&disc, &prem, Budget::DEFAULT).unwrap(), Some(asg(&[("x", 0b01)])));
        assert_eq!(premises_active(&ModalAlgebra::two(), &prem, Budget::DEFAULT).unwrap(), None);
        assert!(premises_active(&disc, &[Formula::Top], Budget::DEFAULT).unwrap().is_some());
    }

    #[test]
    fn bridge_on_small_frames() {
        for n in 1..=3 {
            for frame in all_relations(n).unwrap() {
                let cm = complex_algebra(&frame).unwrap();
                for (name, _) in AXIOMS {
                    let f = axiom(name).unwrap();
                    let by_frame = frame_validates(&frame, &f, Budget::DEFAULT).unwrap();
                    let by_alg = algebra_validates(&cm, &f, Budget::DEFAULT).unwrap();
                    assert_eq!(by_frame.holds(), by_alg.holds(), "{name} on {frame}");
                }
            }
        }
    }

    #[test]
    fn correspondence_on_three_worlds() {
        let check = |frame: &Frame, name: &str| {
            let cond = correspondent(name).unwrap().unwrap();
            let c = frame.condition(cond).unwrap().holds();
            let v = frame_validates(frame, &axiom(name).unwrap(), Budget::DEFAULT).unwrap().holds();
            assert_eq!(c, v, "{name} on {frame}");
        };
        for frame in all_relations(3).unwrap() {
            for name in ["D", "T", "4", "B"] {
                check(&frame, name);
            }
        }
        for n in 1..=4 {
            for frame in all_quasiorders(n).unwrap() {
                for name in ["B2", "G2", "H3", "R1", "Dum", "Grz", "M"] {
                    check(&frame, name);
                }
            }
        }
    }

    #[test]
    fn correspondents() {
        assert_eq!(correspondent("K").unwrap(), None);
        assert_eq!(correspondent(".2").unwrap(), Some(FrameCondition::Convergent));
        assert!(correspondent("Q").is_err());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["p", "q"]).prop_map(Formula::var),
            Just(Formula::Top),
            Just(Formula::Bottom),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::diamond),
                inner.clone().prop_map(Formula::necessarily),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn box_is_dual_of_diamond(f in arb_formula(), code in 0u64..65536, vp in 0u32..16, vq in 0u32..16) {
            let rows: Vec<u32> = (0..4).map(|x| (code >> (4 * x)) as u32 & 0xf).collect();
            let frame = Frame::from_rows(rows).unwrap();
            let v = val(&[("p", vp), ("q", vq)]);
            let boxed = eval_in_model(&frame, &v, &Formula::necessarily(f.clone())).unwrap();
            let dual = eval_in_model(&frame, &v, &Formula::not(Formula::diamond(Formula::not(f.clone())))).unwrap();
            prop_assert_eq!(boxed, dual);
            prop_assert_eq!(eval_in_model(&frame, &v, &f).unwrap(), naive(&frame, &v, &f));
        }
    }
}
