//! Frame validity against algebraic validity of the complex algebra, with an
//! independent evaluator over explicit world lists.

use std::collections::BTreeMap;

use depth2_core::duality::complex_algebra;
use depth2_core::frames::all_relations;
use depth2_core::logic::AXIOMS;
use depth2_core::semantics::{algebra_validates, eval_in_model, frame_validates, Budget};
use depth2_core::{Formula, Frame};

fn naive(frame: &Frame, v: &BTreeMap<String, Vec<bool>>, f: &Formula) -> Vec<bool> {
    let n = frame.n_worlds();
    let un = |a: &Formula, op: &dyn Fn(&[bool], usize) -> bool| {
        let x = naive(frame, v, a);
        (0..n).map(|w| op(&x, w)).collect()
    };
    let bin = |a: &Formula, b: &Formula, op: fn(bool, bool) -> bool| {
        let (x, y) = (naive(frame, v, a), naive(frame, v, b));
        (0..n).map(|w| op(x[w], y[w])).collect()
    };
    match f {
        Formula::Var(p) => v[p].clone(),
        Formula::Top => vec![true; n],
        Formula::Bottom => vec![false; n],
        Formula::Not(a) => un(a, &|x, w| !x[w]),
        Formula::Diamond(a) => un(a, &|x, w| (0..n).any(|u| frame.related(w, u) && x[u])),
        Formula::Box(a) => un(a, &|x, w| (0..n).all(|u| !frame.related(w, u) || x[u])),
        Formula::And(a, b) => bin(a, b, |x, y| x && y),
        Formula::Or(a, b) => bin(a, b, |x, y| x || y),
        Formula::Implies(a, b) => bin(a, b, |x, y| !x || y),
        Formula::Iff(a, b) => bin(a, b, |x, y| x == y),
    }
}

fn naive_valid(frame: &Frame, f: &Formula) -> bool {
    let vars = f.variables();
    let n = frame.n_worlds();
    let total = 1usize << (n * vars.len());
    (0..total).all(|i| {
        let v: BTreeMap<String, Vec<bool>> = vars
            .iter()
            .enumerate()
            .map(|(j, p)| (p.clone(), (0..n).map(|w| i >> (j * n + w) & 1 == 1).collect()))
            .collect();
        naive(frame, &v, f).iter().all(|&b| b)
    })
}

#[test]
fn catalog_validity_agrees_three_ways() {
    for n in 1..=3 {
        for frame in all_relations(n).unwrap() {
            let cm = complex_algebra(&frame).unwrap();
            for (name, text) in AXIOMS {
                let f = Formula::parse(text).unwrap();
                let by_frame = frame_validates(&frame, &f, Budget::DEFAULT).unwrap().holds();
                let by_algebra = algebra_validates(&cm, &f, Budget::DEFAULT).unwrap().holds();
                let by_oracle = naive_valid(&frame, &f);
                assert_eq!(by_frame, by_oracle, "{name} on {frame}");
                assert_eq!(by_algebra, by_oracle, "{name} on Cm({frame})");
            }
        }
    }
}

#[test]
fn model_evaluation_matches_the_oracle() {
    let frame = Frame::new(3, &[(0, 1), (1, 2), (2, 2), (2, 0)]).unwrap();
    let f = Formula::parse("[](p -> <>q) & ~<>[]p | (q <-> []0)").unwrap();
    for p in 0u32..8 {
        for q in 0u32..8 {
            let v = BTreeMap::from([("p".to_string(), p), ("q".to_string(), q)]);
            let bits = |s: u32| (0..3).map(|w| s >> w & 1 == 1).collect::<Vec<_>>();
            let oracle = BTreeMap::from([("p".to_string(), bits(p)), ("q".to_string(), bits(q))]);
            let got = eval_in_model(&frame, &v, &f).unwrap();
            assert_eq!(bits(got), naive(&frame, &oracle, &f));
        }
    }
}
