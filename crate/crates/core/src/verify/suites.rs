use super::{Suite, Tally, VerifyParams};
use crate::ba::{Element, FiniteBa};
use crate::duality::{algebras_isomorphic, canonical_frame, complex_algebra};
use crate::error::{Error, Result};
use crate::frames::{
    all_quasiorders, all_relations, enumerate_frames, extremal_relation, EnumConstraints, Frame,
    FrameCondition, MAX_ENUM_QUASIORDER_WORLDS, MAX_ENUM_RELATION_WORLDS,
};
use crate::logic::{axiom, meet_axiom, rule_p2, Formula};
use crate::operators::{
    all_algebras, build_kn, embeds, extremal_operator, ClassLabel, ExtremalKind, ModalAlgebra,
    MAX_SUBALGEBRA_ATOMS,
};
use crate::semantics::{
    algebra_validates, correspondent, frame_validates, premises_active, quasiidentity_holds, Budget,
};

pub(super) const SUITES: [Suite; 12] = [
    Suite {
        name: "duality_roundtrip",
        citation: "every modal algebra is isomorphic to some Cm(Ult(A)); Ult(Cm(F)) ≅ F",
        run: duality_roundtrip,
    },
    Suite {
        name: "table1",
        citation: "frame conditions of the modal axiom table",
        run: table1,
    },
    Suite {
        name: "s42_equals_s43_depth2",
        citation: "S4.2B2 = S4.3B2: convergence and .3 agree on depth-two quasiorders",
        run: s42_equals_s43,
    },
    Suite {
        name: "canonical_shapes",
        citation: "canonical relations of ideal, filter, MaxId and ii algebras",
        run: canonical_shapes,
    },
    Suite {
        name: "si_characterizations",
        citation: "subdirectly irreducible members of IMA, FMA, MMA and GMA",
        run: si_characterizations,
    },
    Suite {
        name: "closure_properties",
        citation: "homomorphic images and finite subalgebras stay in the family",
        run: closure_properties,
    },
    Suite {
        name: "sum_and_union",
        citation: "f^iu(x) + f^ui(x) = f^uu(x) and R^iu ∪ R^ui = R^uu",
        run: sum_and_union,
    },
    Suite {
        name: "conjugacy",
        citation: "⟨R⟩ and ⟨R̆⟩ are conjugate; ui-relations are converses of iu-relations",
        run: conjugacy,
    },
    Suite {
        name: "meets",
        citation: "f = f^uu_a = f^ui_b forces a = b antiatom; F₂⁺ lies in all four classes",
        run: meets,
    },
    Suite {
        name: "lmeet_soundness",
        citation: "frames of L1 or L2 validate □φ ⊻ □ψ",
        run: lmeet_soundness,
    },
    Suite {
        name: "kn_embedding",
        citation: "K₃ is not a subalgebra of a proper filter algebra, K₄ not of a GMA algebra",
        run: kn_embedding,
    },
    Suite {
        name: "p2_quasiidentity",
        citation: "(◇x ∧ ◇¬x = 1) ⇒ 0 = 1 and activeness of P₂",
        run: p2_quasiidentity,
    },
];

fn bound(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got == 0 {
        return Err(Error::Parameter(format!("{what} must be positive")));
    }
    if got > limit {
        return Err(Error::Size { what, got, limit });
    }
    Ok(())
}

fn atoms(p: &VerifyParams) -> Result<usize> {
    bound("atoms", p.atoms, MAX_SUBALGEBRA_ATOMS)?;
    Ok(p.atoms)
}

fn relation_worlds(p: &VerifyParams) -> Result<usize> {
    bound("worlds", p.worlds, MAX_ENUM_RELATION_WORLDS)?;
    Ok(p.worlds)
}

fn quasiorder_worlds(p: &VerifyParams) -> Result<usize> {
    bound("worlds", p.worlds, MAX_ENUM_QUASIORDER_WORLDS)?;
    Ok(p.worlds)
}

fn extremal(kind: ExtremalKind, ba: FiniteBa, param: Element) -> Result<ModalAlgebra> {
    ModalAlgebra::new(ba, extremal_operator(kind, &ba, param)?)
}

/// Every `(n, a)` with `1 ≤ n ≤ max` and `a` an element of `2^n`.
fn parameters(max: usize) -> Result<Vec<(FiniteBa, Element)>> {
    let mut out = Vec::new();
    for n in 1..=max {
        let ba = FiniteBa::new(n)?;
        out.extend(ba.elements().map(|a| (ba, a)));
    }
    Ok(out)
}

fn proper(ba: &FiniteBa, a: Element) -> bool {
    !a.is_zero() && a != ba.top()
}

fn closure_algebras(max: usize) -> Result<Vec<ModalAlgebra>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(all_algebras(n)?.into_iter().filter(|a| a.is_closure()));
    }
    Ok(out)
}

fn every_algebra(max: usize) -> Result<Vec<ModalAlgebra>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(all_algebras(n)?);
    }
    Ok(out)
}

fn labelled<F: Fn(usize) -> Result<Vec<Frame>>>(max: usize, gen: F) -> Result<Vec<Frame>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(gen(n)?);
    }
    Ok(out)
}

fn duality_roundtrip(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let algebras = every_algebra(atoms(p)?)?;
    t.each(&algebras, |a, t| {
        let back = complex_algebra(&canonical_frame(a)?)?;
        let iso = algebras_isomorphic(&back, a)?;
        t.check(iso.is_some(), || format!("Cm(Ult({a}))"), "isomorphic", || "not isomorphic".into());
        Ok(())
    })?;
    let frames = labelled(quasiorder_worlds(p)?, all_quasiorders)?;
    t.each(&frames, |f, t| {
        let back = canonical_frame(&complex_algebra(f)?)?;
        let same = back.canonical_form()? == f.canonical_form()?;
        t.check(same, || format!("Ult(Cm({f}))"), "isomorphic", || back.to_string());
        Ok(())
    })
}

fn table1(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let n = relation_worlds(p)?;
    let check = |frame: &Frame, name: &str, t: &mut Tally| -> Result<()> {
        let cond = correspondent(name)?.expect("catalog axiom with a frame condition");
        let by_condition = frame.condition(cond)?.holds();
        let by_validity = frame_validates(frame, &axiom(name)?, Budget::DEFAULT)?.holds();
        t.check(
            by_condition == by_validity,
            || format!("{name} on {frame}"),
            format!("{cond} = {by_condition}"),
            || format!("validity = {by_validity}"),
        );
        Ok(())
    };
    let relations = labelled(n, all_relations)?;
    t.each(&relations, |f, t| {
        for name in ["D", "T", "4", "B"] {
            check(f, name, t)?;
        }
        Ok(())
    })?;
    let quasiorders = labelled(n, all_quasiorders)?;
    t.each(&quasiorders, |f, t| {
        for name in ["B2", "G2", "H3", "R1", "Dum", "Grz", "M"] {
            check(f, name, t)?;
        }
        Ok(())
    })
}

fn s42_equals_s43(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let frames = labelled(quasiorder_worlds(p)?, all_quasiorders)?;
    let mut shallow = Vec::new();
    let mut deep = Vec::new();
    for f in frames {
        if f.cluster_poset()?.depth <= 2 {
            shallow.push(f);
        } else {
            deep.push(f);
        }
    }
    t.each(&shallow, |f, t| {
        let g2 = f.condition(FrameCondition::Convergent)?.holds();
        let h3 = f.condition(FrameCondition::Dot3)?.holds();
        t.check(g2 == h3, || f.to_string(), format!("convergent = {g2}"), || format!(".3 = {h3}"));
        Ok(())
    })?;
    let mut separating = None;
    for f in &deep {
        let g2 = f.condition(FrameCondition::Convergent)?.holds();
        let h3 = f.condition(FrameCondition::Dot3)?.holds();
        if g2 != h3 {
            separating = Some((f.canonical_form()?, g2, h3));
            break;
        }
    }
    match separating {
        Some((f, g2, h3)) => t.note(format!(
            "depth ≥ 3 separates the conditions: {f} (convergent = {g2}, .3 = {h3})"
        )),
        None => t.note("no separating frame of depth ≥ 3 within the bound"),
    }
    Ok(())
}

fn level_sets(f: &Frame) -> Result<(u32, u32, usize)> {
    let poset = f.cluster_poset()?;
    Ok((poset.level_worlds(1), poset.level_worlds(2), poset.depth))
}

fn canonical_shapes(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let params = parameters(atoms(p)?)?;
    t.each(&params, |&(ba, a), t| {
        let n = ba.n_atoms();
        let u = a.bits();
        let v = ba.complement(a).bits();
        let is_proper = proper(&ba, a);

        // Ideal algebras: simple clusters below one cluster.
        let frame = canonical_frame(&extremal(ExtremalKind::Iu, ba, a)?)?;
        let shape = extremal_relation(ExtremalKind::Iu, n, u, v)?;
        t.check(frame == shape, || format!("iu_{a} on {n} atoms"), &shape, || frame.to_string());
        if is_proper {
            let poset = frame.cluster_poset()?;
            let lower_simple = (0..poset.clusters.len())
                .filter(|&c| poset.levels[c] == 1)
                .all(|c| poset.is_simple(c));
            let upper: Vec<usize> = (0..poset.clusters.len()).filter(|&c| poset.levels[c] == 2).collect();
            let ok = poset.depth == 2 && lower_simple && upper.len() == 1 && poset.clusters[upper[0]] == v;
            t.check(ok, || format!("iu_{a} levels"), "simple clusters under one cluster", || format!("{poset:?}"));
        }

        // Proper filter algebras: one cluster below simple clusters, M and B2.
        if is_proper {
            let frame = canonical_frame(&extremal(ExtremalKind::Ui, ba, a)?)?;
            let shape = extremal_relation(ExtremalKind::Ui, n, u, v)?;
            t.check(frame == shape, || format!("ui_{a} on {n} atoms"), &shape, || frame.to_string());
            for cond in [FrameCondition::M, FrameCondition::B2] {
                let holds = frame.condition(cond)?.holds();
                t.check(holds, || format!("ui_{a} canonical frame, {cond}"), "holds", || "fails".into());
            }
            let (lower, upper, depth) = level_sets(&frame)?;
            let poset = frame.cluster_poset()?;
            let one_lower = poset.levels.iter().filter(|&&l| l == 1).count() == 1;
            let upper_simple = (0..poset.clusters.len())
                .filter(|&c| poset.levels[c] == 2)
                .all(|c| poset.is_simple(c));
            t.check(
                depth == 2 && lower == u && upper == v && one_lower && upper_simple,
                || format!("ui_{a} levels"),
                "one cluster under simple clusters",
                || format!("{poset:?}"),
            );
        }

        // MaxId algebras: a chain of at most two clusters.
        if !a.is_zero() {
            let frame = canonical_frame(&extremal(ExtremalKind::Uu, ba, a)?)?;
            let poset = frame.cluster_poset()?;
            let ok = poset.is_chain() && poset.clusters.len() <= 2 && poset.depth <= 2;
            t.check(ok, || format!("uu_{a} on {n} atoms"), "chain of ≤ 2 clusters", || format!("{poset:?}"));
            let shape = extremal_relation(ExtremalKind::Uu, n, u, v)?;
            t.check(frame == shape, || format!("uu_{a} relation"), &shape, || frame.to_string());
        }

        // ii algebras: R = (U × V) ∪ 1'.
        if is_proper {
            let frame = canonical_frame(&extremal(ExtremalKind::Ii, ba, a)?)?;
            let shape = extremal_relation(ExtremalKind::Ii, n, u, v)?;
            t.check(frame == shape, || format!("ii_{a} on {n} atoms"), &shape, || frame.to_string());
            let found = frame
                .classify_extremal()
                .iter()
                .any(|m| m.kind == ExtremalKind::Ii && m.u == u && m.v == v);
            t.check(found, || format!("ii_{a} classification"), "ii with U = a", || "missing".into());
        }
        Ok(())
    })
}

/// Least nonzero closed element by scanning all elements.
fn si_oracle(a: &ModalAlgebra) -> bool {
    let closed: Vec<Element> = a
        .base()
        .elements()
        .filter(|&x| !x.is_zero() && a.f(x) == x)
        .collect();
    closed.iter().any(|&c| closed.iter().all(|&d| c.leq(d)))
}

fn si_characterizations(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let params = parameters(atoms(p)?)?;
    t.each(&params, |&(ba, a), t| {
        let two = ba.n_atoms() == 1;
        let expect = |kind: ExtremalKind, predicted: bool, t: &mut Tally| -> Result<()> {
            let alg = extremal(kind, ba, a)?;
            let by_witness = alg.irreducibility()?.is_si();
            let by_scan = si_oracle(&alg);
            t.check(
                by_witness == predicted && by_scan == predicted,
                || format!("{kind}_{a} on {} atoms", ba.n_atoms()),
                format!("SI = {predicted}"),
                || format!("witness says {by_witness}, scan says {by_scan}"),
            );
            Ok(())
        };
        expect(ExtremalKind::Iu, a.is_zero() || ba.is_atom(a), t)?;
        if a != ba.top() || two {
            expect(ExtremalKind::Ui, two || !a.is_zero(), t)?;
        }
        if !a.is_zero() {
            expect(ExtremalKind::Uu, true, t)?;
        }
        expect(ExtremalKind::Ii, two || ba.is_atom(a), t)?;
        Ok(())
    })
}

fn in_family(labels: &std::collections::BTreeSet<ClassLabel>, kind: ExtremalKind) -> bool {
    labels.iter().any(|l| l.matches_kind(kind))
}

fn closure_properties(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let params = parameters(atoms(p)?)?;
    t.each(&params, |&(ba, a), t| {
        for kind in ExtremalKind::ALL {
            let valid = match kind {
                ExtremalKind::Uu => !a.is_zero(),
                ExtremalKind::Ui => a != ba.top() || ba.n_atoms() == 1,
                _ => true,
            };
            if !valid {
                continue;
            }
            let alg = extremal(kind, ba, a)?;
            for c in alg.closed_elements().iter().filter(|&c| c != ba.top()) {
                let q = alg.quotient(c)?;
                let labels = q.classify();
                t.check(
                    in_family(&labels, kind),
                    || format!("{kind}_{a} / ↓{c}"),
                    format!("{kind} family"),
                    || format!("{q} with labels {labels:?}"),
                );
            }
            for sub in alg.subalgebras()? {
                let labels = sub.algebra.classify();
                t.check(
                    in_family(&labels, kind),
                    || format!("subalgebra {} of {kind}_{a}", sub.carrier()),
                    format!("{kind} family"),
                    || format!("{} with labels {labels:?}", sub.algebra),
                );
            }
        }
        Ok(())
    })
}

fn sum_and_union(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let params: Vec<_> = parameters(atoms(p)?)?
        .into_iter()
        .filter(|(ba, a)| proper(ba, *a))
        .collect();
    t.each(&params, |&(ba, a), t| {
        let iu = extremal(ExtremalKind::Iu, ba, a)?;
        let ui = extremal(ExtremalKind::Ui, ba, a)?;
        let uu = extremal(ExtremalKind::Uu, ba, a)?;
        for x in ba.elements() {
            let sum = iu.f(x) | ui.f(x);
            t.expect_eq(sum, uu.f(x), || format!("f^iu_{a}({x}) + f^ui_{a}({x})"));
        }
        let union = canonical_frame(&iu)?.union(&canonical_frame(&ui)?)?;
        let whole = canonical_frame(&uu)?;
        t.expect_eq(union, whole, || format!("R^iu_{a} ∪ R^ui_{a}"));
        Ok(())
    })
}

fn conjugacy(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let frames = labelled(relation_worlds(p)?, all_relations)?;
    t.each(&frames, |f, t| {
        let cm = complex_algebra(f)?;
        let conv = complex_algebra(&f.converse())?;
        let verdict = cm.conjugate_check(conv.op())?;
        t.check(verdict.holds(), || format!("⟨R⟩, ⟨R̆⟩ on {f}"), "conjugate", || format!("{verdict:?}"));
        Ok(())
    })?;
    let params = parameters(atoms(p)?)?;
    t.each(&params, |&(ba, a), t| {
        let iu = extremal(ExtremalKind::Iu, ba, a)?;
        let ui = extremal(ExtremalKind::Ui, ba, ba.complement(a))?;
        let verdict = iu.conjugate_check(ui.op())?;
        t.check(
            verdict.holds(),
            || format!("f^iu_{a}, f^ui_{} on {} atoms", ba.complement(a), ba.n_atoms()),
            "conjugate",
            || format!("{verdict:?}"),
        );
        let converse = canonical_frame(&iu)?.converse();
        t.expect_eq(converse, canonical_frame(&ui)?, || format!("converse of R^iu_{a}"));
        Ok(())
    })?;
    // The same-parameter pairing is not conjugate in general.
    let mut refuted = 0usize;
    let mut first = None;
    for &(ba, a) in &params {
        let iu = extremal(ExtremalKind::Iu, ba, a)?;
        let ui = extremal(ExtremalKind::Ui, ba, a)?;
        if let Some(w) = iu.conjugate_check(ui.op())?.into_witness() {
            refuted += 1;
            first.get_or_insert((ba.n_atoms(), a, w));
        }
    }
    if let Some((n, a, (x, y))) = first {
        t.note(format!(
            "f^iu_a and f^ui_a with the same a are not conjugate for {refuted} parameters; first: n = {n}, a = {a}, pair ({x}, {y})"
        ));
    }
    Ok(())
}

fn meets(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let f2plus = complex_algebra(&Frame::chain(2)?)?;
    let labels = f2plus.classify();
    for kind in ExtremalKind::ALL {
        t.check(
            in_family(&labels, kind),
            || format!("F₂⁺ in the {kind} family"),
            "member",
            || format!("{labels:?}"),
        );
    }
    let n = atoms(p)?;
    let params = parameters(n)?;
    t.each(&params, |&(ba, a), t| {
        if !proper(&ba, a) {
            return Ok(());
        }
        let uu = extremal(ExtremalKind::Uu, ba, a)?;
        if !uu.irreducibility()?.is_si() {
            return Ok(());
        }
        for b in ba.elements().filter(|&b| proper(&ba, b)) {
            let ui = extremal(ExtremalKind::Ui, ba, b)?;
            if ui.op() == uu.op() {
                t.check(
                    a == b && ba.is_antiatom(b),
                    || format!("f^uu_{a} = f^ui_{b}"),
                    "a = b, an antiatom",
                    || format!("a = {a}, b = {b}"),
                );
            }
        }
        Ok(())
    })?;
    // SI algebras in GMA ∩ MMA or IMA ∩ FMA with at least four elements are F₂⁺.
    let algebras = closure_algebras(n)?;
    t.each(&algebras, |alg, t| {
        if alg.n_atoms() < 2 || !alg.irreducibility()?.is_si() {
            return Ok(());
        }
        let labels = alg.classify();
        let pairs = [
            (ExtremalKind::Ii, ExtremalKind::Uu),
            (ExtremalKind::Iu, ExtremalKind::Ui),
        ];
        for (k1, k2) in pairs {
            if in_family(&labels, k1) && in_family(&labels, k2) {
                let iso = algebras_isomorphic(alg, &f2plus)?.is_some();
                t.check(iso, || format!("{alg} in {k1} ∩ {k2}"), "≅ F₂⁺", || "not isomorphic".into());
            }
        }
        Ok(())
    })
}

fn lmeet_soundness(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let n = quasiorder_worlds(p)?;
    let mut frames = Vec::new();
    for k in 1..=n {
        frames.extend(enumerate_frames(k, EnumConstraints { quasiorder: true, max_depth: None })?);
    }
    let pairs = [("M", "R1"), ("M", "Dum"), ("M", "H3")];
    let formulas: Vec<(String, Formula, Formula, Formula)> = pairs
        .iter()
        .map(|&(a, b)| Ok((format!("{a} ⊻ {b}"), axiom(a)?, axiom(b)?, meet_axiom(&axiom(a)?, &axiom(b)?))))
        .collect::<Result<_>>()?;
    t.each(&frames, |f, t| {
        for (name, phi, psi, meet) in &formulas {
            let in_either = frame_validates(f, phi, Budget::DEFAULT)?.holds()
                || frame_validates(f, psi, Budget::DEFAULT)?.holds();
            if in_either {
                let v = frame_validates(f, meet, Budget::DEFAULT)?;
                t.check(v.holds(), || format!("{name} on {f}"), "valid", || format!("{v:?}"));
            }
        }
        Ok(())
    })
}

fn kn_embedding(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let k2 = build_kn(2)?;
    let k3 = build_kn(3)?;
    let k4 = build_kn(4)?;
    for (k, kn) in [(2, &k2), (3, &k3), (4, &k4)] {
        let found = embeds(kn, kn)?.is_some();
        t.check(found, || format!("K{k} into itself"), "embeds", || "no embedding".into());
    }
    let params = parameters(atoms(p)?)?;
    t.each(&params, |&(ba, a), t| {
        let n = ba.n_atoms();
        if proper(&ba, a) {
            let ui = extremal(ExtremalKind::Ui, ba, a)?;
            let h = embeds(&k3, &ui)?;
            t.check(h.is_none(), || format!("K3 into ui_{a} on {n} atoms"), "no embedding", || format!("{h:?}"));
            let uu = extremal(ExtremalKind::Uu, ba, a)?;
            let h = embeds(&k2, &uu)?;
            t.check(h.is_some(), || format!("K2 into uu_{a} on {n} atoms"), "embeds", || "no embedding".into());
        }
        let ii = extremal(ExtremalKind::Ii, ba, a)?;
        let h = embeds(&k4, &ii)?;
        t.check(h.is_none(), || format!("K4 into ii_{a} on {n} atoms"), "no embedding", || format!("{h:?}"));
        Ok(())
    })
}

fn p2_quasiidentity(p: &VerifyParams, t: &mut Tally) -> Result<()> {
    let rule = rule_p2();
    let two = ModalAlgebra::two();
    let v = quasiidentity_holds(&two, &rule.premises, &rule.conclusion, Budget::DEFAULT)?;
    t.check(v.holds(), || "2".into(), "holds (vacuously)", || format!("{v:?}"));

    let n = atoms(p)?;
    let algebras = closure_algebras(n)?;
    let m = axiom("M")?;
    t.each(&algebras, |alg, t| {
        let v = quasiidentity_holds(alg, &rule.premises, &rule.conclusion, Budget::DEFAULT)?;
        if alg.n_atoms() >= 2 && alg.irreducibility()?.is_simple() {
            let witnessed = v.witness().is_some_and(|w| {
                let x = w.values().next().copied().unwrap_or(Element::ZERO);
                alg.f(x) & alg.f(alg.base().complement(x)) == alg.base().top()
            });
            t.check(witnessed, || format!("simple {alg}"), "fails with a witness", || format!("{v:?}"));
        }
        if algebra_validates(alg, &m, Budget::DEFAULT)?.holds() {
            t.check(v.holds(), || format!("{alg} validates M"), "quasiidentity holds", || format!("{v:?}"));
        }
        Ok(())
    })?;

    let algebras = every_algebra(n.min(3))?;
    t.each(&algebras, |alg, t| {
        let top = alg.base().top();
        let oracle = alg.base().elements().any(|x| alg.f(x) & alg.f(alg.base().complement(x)) == top);
        let active = premises_active(alg, &rule.premises, Budget::DEFAULT)?.is_some();
        t.check(oracle == active, || format!("P₂ on {alg}"), format!("active = {oracle}"), || active.to_string());
        Ok(())
    })
}
