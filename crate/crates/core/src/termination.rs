//! Local strategies: the witness data making a graph terminating.
//!
//! A local strategy on a graph `R` over a filtered object `E` is a map
//! `h : E -> R + E` choosing one step (or the unit) per element, together
//! with stage-wise maps `htau_i : E_i -> E_{<i}` recording that the chosen
//! target sits strictly lower in the filtration. The axioms are checkable
//! equations between finite maps:
//!
//! * TG1 - the index poset terminates (automatic here: it is finite);
//! * TG2 - the source of the chosen step is the element itself;
//! * TG3 - on minimal stages the choice is the unit;
//! * TG4 - the chosen target factors through the stages strictly below.
//!
//! Verification reports each axiom separately with the first violating
//! element as a witness.

use std::fmt;

use crate::carrier::{CarrierMap, CarrierObject, Element, Kind};
use crate::filtration::{filtration_from_terminating_relation, Filtration};
use crate::graph::{GraphMorphism, GraphSum, InternalGraph};
use crate::linear::AlgebraicRelation;
use crate::{Error, Result};

/// The checkable axioms of a local strategy, plus the derived conditions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TgAxiom {
    /// The index order terminates.
    Tg1,
    /// `src . h = id`.
    Tg2,
    /// `h` is the unit on minimal stages.
    Tg3,
    /// `tgt . h . inj_i = inj_below_i . htau_i`.
    Tg4,
    /// `htau` commutes with the stage inclusions.
    HtauNaturality,
    /// On minimal stages `htau` is the identity (consequence of TG3/TG4).
    HtauMinimalIdentity,
}

impl fmt::Display for TgAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TgAxiom::Tg1 => "TG1",
            TgAxiom::Tg2 => "TG2",
            TgAxiom::Tg3 => "TG3",
            TgAxiom::Tg4 => "TG4",
            TgAxiom::HtauNaturality => "htau-naturality",
            TgAxiom::HtauMinimalIdentity => "htau-minimal-identity",
        };
        f.write_str(s)
    }
}

/// Result of one axiom check.
#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub axiom: TgAxiom,
    pub ok: bool,
    pub witness: Option<String>,
}

/// Per-axiom verification report.
#[derive(Clone, Debug)]
pub struct StrategyReport {
    pub checks: Vec<AxiomCheck>,
}

impl StrategyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

/// The value of the strategy map at a set element.
#[derive(Clone, PartialEq, Debug)]
pub enum StrategyChoice {
    /// A rewrite step: an edge element of the graph.
    Step(Element),
    /// The unit at an element of the base.
    Unit(Element),
}

/// A local strategy `(h, htau)` on a graph over a filtered object.
#[derive(Clone, Debug)]
pub struct LocalStrategy {
    graph: InternalGraph,
    filtration: Filtration,
    step_sum: GraphSum,
    h: CarrierMap,
    htau: Vec<CarrierMap>,
}

impl LocalStrategy {
    pub fn new(
        graph: InternalGraph,
        filtration: Filtration,
        h: CarrierMap,
        htau: Vec<CarrierMap>,
    ) -> Result<Self> {
        if graph.base() != filtration.ambient() {
            return Err(Error::BaseMismatch);
        }
        let step_sum = graph.sum(&InternalGraph::identity_graph(graph.base()))?;
        if h.dom() != graph.base() || h.cod() != step_sum.graph.edges() {
            return Err(Error::Malformed(
                "h must map the base into the step-or-unit object".into(),
            ));
        }
        if htau.len() != filtration.index().len() {
            return Err(Error::Malformed("one htau component per index".into()));
        }
        for (i, m) in htau.iter().enumerate() {
            let (below, _) = filtration.below(i)?;
            if m.dom() != filtration.stage(i) || m.cod() != &below {
                return Err(Error::Malformed(format!(
                    "htau component {i} has the wrong shape"
                )));
            }
        }
        Ok(LocalStrategy {
            graph,
            filtration,
            step_sum,
            h,
            htau,
        })
    }

    pub fn graph(&self) -> &InternalGraph {
        &self.graph
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn h(&self) -> &CarrierMap {
        &self.h
    }

    pub fn htau(&self, i: usize) -> &CarrierMap {
        &self.htau[i]
    }

    /// The materialized sum `R + E` with its injections.
    pub fn step_sum(&self) -> &GraphSum {
        &self.step_sum
    }

    /// Source map of `R + E`.
    pub fn sum_src(&self) -> &CarrierMap {
        self.step_sum.graph.src()
    }

    /// Target map of `R + E`.
    pub fn sum_tgt(&self) -> &CarrierMap {
        self.step_sum.graph.tgt()
    }

    /// The unit `E -> R + E`.
    pub fn unit_map(&self) -> &CarrierMap {
        &self.step_sum.summands.right
    }

    /// Splits the strategy value at an element into its step and unit parts.
    pub fn h_split(&self, x: &Element) -> Result<(Option<Element>, Option<Element>)> {
        let image = self.h.apply(x)?;
        self.step_sum.summands.split(&image)
    }

    /// The strategy value at a set element, as a step or unit.
    pub fn choice_at(&self, x: &Element) -> Result<StrategyChoice> {
        match self.h_split(x)? {
            (Some(step), None) => Ok(StrategyChoice::Step(step)),
            (None, Some(unit)) => Ok(StrategyChoice::Unit(unit)),
            _ => Err(Error::KindMismatch),
        }
    }

    /// The chosen lower target of `x`, read off `htau` at its entry stage.
    pub fn descent_target(&self, label: &str) -> Result<Element> {
        let i = self
            .filtration
            .entry_stage(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let x = self.filtration.stage(i).generator(label)?;
        self.htau[i].apply(&x)
    }

    /// Runs all axiom checks and reports per-axiom outcomes with witnesses.
    pub fn verify(&self) -> Result<StrategyReport> {
        let mut checks = Vec::new();
        let base = self.graph.base();
        let filt = &self.filtration;

        // TG1: the index poset is finite, hence terminating by construction.
        checks.push(AxiomCheck {
            axiom: TgAxiom::Tg1,
            ok: true,
            witness: None,
        });

        // TG2: src . h = id.
        let src_h = self.sum_src().compose(&self.h)?;
        let id = CarrierMap::identity(base);
        checks.push(disagreement_check(TgAxiom::Tg2, &src_h, &id, None)?);

        // TG3: h restricted to a minimal stage is the unit.
        let mut tg3 = AxiomCheck {
            axiom: TgAxiom::Tg3,
            ok: true,
            witness: None,
        };
        for i in filt.index().minimal_indices() {
            let inj = filt.injection(i)?;
            let lhs = self.h.compose(&inj)?;
            let rhs = self.unit_map().compose(&inj)?;
            if let Some(w) = lhs.first_disagreement(&rhs)? {
                tg3.ok = false;
                tg3.witness = Some(format!("stage {}: {w}", filt.index().name(i)));
                break;
            }
        }
        checks.push(tg3);

        // TG4: tgt . h . inj_i = inj_below . htau_i, for every i.
        let mut tg4 = AxiomCheck {
            axiom: TgAxiom::Tg4,
            ok: true,
            witness: None,
        };
        for i in 0..filt.index().len() {
            let inj = filt.injection(i)?;
            let lhs = self.sum_tgt().compose(&self.h.compose(&inj)?)?;
            let (_, inj_below) = filt.below(i)?;
            let rhs = inj_below.compose(&self.htau[i])?;
            if let Some(w) = lhs.first_disagreement(&rhs)? {
                tg4.ok = false;
                tg4.witness = Some(format!("stage {}: {w}", filt.index().name(i)));
                break;
            }
        }
        checks.push(tg4);

        // htau commutes with the stage inclusions, checked on covers.
        let mut nat = AxiomCheck {
            axiom: TgAxiom::HtauNaturality,
            ok: true,
            witness: None,
        };
        for (i, j) in filt.index().covers() {
            let link = CarrierMap::inclusion(filt.stage(i), filt.stage(j))?;
            let (bi, _) = filt.below(i)?;
            let (bj, _) = filt.below(j)?;
            let below_link = CarrierMap::inclusion(&bi, &bj)?;
            let lhs = self.htau[j].compose(&link)?;
            let rhs = below_link.compose(&self.htau[i])?;
            if let Some(w) = lhs.first_disagreement(&rhs)? {
                nat.ok = false;
                nat.witness = Some(format!(
                    "cover {} -> {}: {w}",
                    filt.index().name(i),
                    filt.index().name(j)
                ));
                break;
            }
        }
        checks.push(nat);

        // Derived: htau is the identity on minimal stages.
        let mut min_id = AxiomCheck {
            axiom: TgAxiom::HtauMinimalIdentity,
            ok: true,
            witness: None,
        };
        for i in filt.index().minimal_indices() {
            let id_stage = CarrierMap::identity(filt.stage(i));
            if let Some(w) = self.htau[i].first_disagreement(&id_stage)? {
                min_id.ok = false;
                min_id.witness = Some(format!("stage {}: {w}", filt.index().name(i)));
                break;
            }
        }
        checks.push(min_id);

        Ok(StrategyReport { checks })
    }
}

fn disagreement_check(
    axiom: TgAxiom,
    lhs: &CarrierMap,
    rhs: &CarrierMap,
    prefix: Option<&str>,
) -> Result<AxiomCheck> {
    let witness = lhs.first_disagreement(rhs)?;
    Ok(AxiomCheck {
        axiom,
        ok: witness.is_none(),
        witness: witness.map(|w| match prefix {
            Some(p) => format!("{p}: {w}"),
            None => w,
        }),
    })
}

/// Builds the canonical local strategy of a terminating relation on a finite
/// set. Edges are the distinct pairs of the relation, and the chosen step at
/// each reducible element is the one with the lowest-entering target, ties
/// broken by base position.
pub fn strategy_from_set_relation(
    base: &CarrierObject,
    rel: &[(String, String)],
) -> Result<LocalStrategy> {
    if base.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    let filtration = filtration_from_terminating_relation(base, rel)?;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (x, y) in rel {
        if !pairs.contains(&(x.clone(), y.clone())) {
            pairs.push((x.clone(), y.clone()));
        }
    }
    let edge_labels: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
    let edges = CarrierObject::new(Kind::Set, edge_labels.clone())?;
    let src = CarrierMap::from_table(
        edges.clone(),
        base.clone(),
        pairs
            .iter()
            .map(|(x, _)| base.index_of(x).expect("validated"))
            .collect(),
    )?;
    let tgt = CarrierMap::from_table(
        edges.clone(),
        base.clone(),
        pairs
            .iter()
            .map(|(_, y)| base.index_of(y).expect("validated"))
            .collect(),
    )?;
    let graph = InternalGraph::new(base.clone(), edges, src, tgt)?;

    // Chosen target per non-normal element.
    let entry = |l: &str| filtration.entry_stage(l).expect("stage covers base");
    let mut target: Vec<Option<String>> = vec![None; base.size()];
    for (xi, x) in base.labels().iter().enumerate() {
        let mut candidates: Vec<&String> = pairs
            .iter()
            .filter(|(a, b)| a == x && entry(b) < entry(x))
            .map(|(_, b)| b)
            .collect();
        candidates.sort_by_key(|b| (entry(b), base.index_of(b)));
        target[xi] = candidates.first().map(|s| (*s).clone());
    }

    build_strategy_from_targets(graph, filtration, |label| {
        let xi = base.index_of(label).expect("own label");
        target[xi]
            .as_ref()
            .map(|y| (format!("{label}->{y}"), y.clone()))
    })
}

/// Shared assembly for set strategies: `choose` maps a label to its chosen
/// edge label and target label, or `None` at normal forms.
fn build_strategy_from_targets(
    graph: InternalGraph,
    filtration: Filtration,
    choose: impl Fn(&str) -> Option<(String, String)>,
) -> Result<LocalStrategy> {
    let base = graph.base().clone();
    let step_sum = graph.sum(&InternalGraph::identity_graph(&base))?;
    let mut h_images = Vec::with_capacity(base.size());
    for l in base.labels() {
        match choose(l) {
            Some((edge, _)) => {
                let e = graph.edges().generator(&edge)?;
                h_images.push(step_sum.summands.left.apply(&e)?);
            }
            None => {
                h_images.push(step_sum.summands.right.apply(&Element::point(l))?);
            }
        }
    }
    let h = CarrierMap::from_generator_images(
        base.clone(),
        step_sum.graph.edges().clone(),
        &h_images,
    )?;
    let mut htau = Vec::new();
    for i in 0..filtration.index().len() {
        let stage = filtration.stage(i);
        let (below, _) = filtration.below(i)?;
        let images: Result<Vec<Element>> = stage
            .labels()
            .iter()
            .map(|l| match choose(l) {
                Some((_, y)) => below.generator(&y),
                None => below.generator(l),
            })
            .collect();
        htau.push(CarrierMap::from_generator_images(
            stage.clone(),
            below.clone(),
            &images?,
        )?);
    }
    let ls = LocalStrategy::new(graph, filtration, h, htau)?;
    let report = ls.verify()?;
    if !report.passed() {
        let f = report.first_failure().expect("failed");
        return Err(Error::InternalInvariant(format!(
            "built strategy violates {}: {:?}",
            f.axiom, f.witness
        )));
    }
    Ok(ls)
}

/// Builds the canonical local strategy of a decreasing algebraic relation:
/// the height filtration, the induced reflexive graph, and the basis-wise
/// choice of rule extended linearly.
pub fn strategy_from_algebraic_relation(ar: &AlgebraicRelation) -> Result<LocalStrategy> {
    ar.ensure_decreasing()?;
    let filtration =
        crate::filtration::filtration_from_height(ar.basis(), ar.order(), ar.rules())?;
    let graph = ar.internal_graph()?;
    let base = ar.basis().clone();
    let step_sum = graph.sum(&InternalGraph::identity_graph(&base))?;

    // Strategy value per basis label.
    let mut h_images = Vec::with_capacity(base.size());
    let mut htau_value: Vec<Element> = Vec::with_capacity(base.size());
    for l in base.labels() {
        match ar.chosen_rule(l)? {
            Some(rule) => {
                let edge = Element::basis(&ar.rule_labels()[rule]);
                h_images.push(step_sum.summands.left.apply(&edge)?);
                htau_value.push(ar.rule(rule).rhs.clone());
            }
            None => {
                h_images.push(step_sum.summands.right.apply(&Element::basis(l))?);
                htau_value.push(Element::basis(l));
            }
        }
    }
    let h = CarrierMap::from_generator_images(
        base.clone(),
        step_sum.graph.edges().clone(),
        &h_images,
    )?;
    let mut htau = Vec::new();
    for i in 0..filtration.index().len() {
        let stage = filtration.stage(i);
        let (below, _) = filtration.below(i)?;
        let images: Vec<Element> = stage
            .labels()
            .iter()
            .map(|l| htau_value[base.index_of(l).expect("own label")].clone())
            .collect();
        htau.push(CarrierMap::from_generator_images(
            stage.clone(),
            below.clone(),
            &images,
        )?);
    }
    let ls = LocalStrategy::new(graph, filtration, h, htau)?;
    let report = ls.verify()?;
    if !report.passed() {
        let f = report.first_failure().expect("failed");
        return Err(Error::InternalInvariant(format!(
            "built strategy violates {}: {:?}",
            f.axiom, f.witness
        )));
    }
    Ok(ls)
}

/// Transports a strategy along a graph morphism `f : R -> S`: the new
/// strategy chooses `f(h(x))` via `(f + id) . h`, with the same filtration
/// and `htau`. The axioms survive transport because `f` commutes with the
/// structure maps.
pub fn transport_strategy(ls: &LocalStrategy, f: &GraphMorphism) -> Result<LocalStrategy> {
    if f.dom() != ls.graph() {
        return Err(Error::DomainMismatch);
    }
    let target = f.cod().clone();
    let new_sum = target.sum(&InternalGraph::identity_graph(target.base()))?;
    let old_sum = ls.step_sum();
    // (f + id) : R + E -> S + E, built generator-wise.
    let old_obj = old_sum.graph.edges();
    let mut images = Vec::with_capacity(old_obj.size());
    for g in old_obj.generators() {
        let (left, right) = old_sum.summands.split(&g)?;
        let image = match old_obj.kind() {
            Kind::Set => match (left, right) {
                (Some(r), None) => new_sum.summands.left.apply(&f.map().apply(&r)?)?,
                (None, Some(e)) => new_sum.summands.right.apply(&e)?,
                _ => return Err(Error::KindMismatch),
            },
            Kind::Vect => {
                let r = left.expect("vector split");
                let e = right.expect("vector split");
                new_sum
                    .summands
                    .left
                    .apply(&f.map().apply(&r)?)?
                    .add(&new_sum.summands.right.apply(&e)?)
            }
        };
        images.push(image);
    }
    let f_plus_id = CarrierMap::from_generator_images(
        old_obj.clone(),
        new_sum.graph.edges().clone(),
        &images,
    )?;
    let h2 = f_plus_id.compose(ls.h())?;
    let htau: Vec<CarrierMap> = (0..ls.filtration().index().len())
        .map(|i| ls.htau(i).clone())
        .collect();
    let transported = LocalStrategy::new(target, ls.filtration().clone(), h2, htau)?;
    let report = transported.verify()?;
    if !report.passed() {
        let fail = report.first_failure().expect("failed");
        return Err(Error::InternalInvariant(format!(
            "transported strategy violates {}: {:?}",
            fail.axiom, fail.witness
        )));
    }
    Ok(transported)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::Element;

    fn chain_strategy() -> LocalStrategy {
        let base = CarrierObject::set(&["a", "b", "c"]).unwrap();
        strategy_from_set_relation(
            &base,
            &[
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn chain_strategy_descends() {
        let ls = chain_strategy();
        assert_eq!(ls.descent_target("a").unwrap(), Element::point("b"));
        assert_eq!(ls.descent_target("b").unwrap(), Element::point("c"));
        assert_eq!(ls.descent_target("c").unwrap(), Element::point("c"));
        assert!(ls.verify().unwrap().passed());
        match ls.choice_at(&Element::point("a")).unwrap() {
            StrategyChoice::Step(e) => assert_eq!(e, Element::point("a->b")),
            other => panic!("expected a step, got {other:?}"),
        }
        match ls.choice_at(&Element::point("c")).unwrap() {
            StrategyChoice::Unit(e) => assert_eq!(e, Element::point("c")),
            other => panic!("expected a unit, got {other:?}"),
        }
    }

    #[test]
    fn empty_relation_gives_unit_strategy() {
        let base = CarrierObject::set(&["a", "b"]).unwrap();
        let ls = strategy_from_set_relation(&base, &[]).unwrap();
        for l in ["a", "b"] {
            match ls.choice_at(&Element::point(l)).unwrap() {
                StrategyChoice::Unit(e) => assert_eq!(e, Element::point(l)),
                other => panic!("expected a unit, got {other:?}"),
            }
        }
    }

    #[test]
    fn tie_break_picks_least_target() {
        // a -> b and a -> b2 with both targets normal forms: the strategy
        // picks the earlier label.
        let base = CarrierObject::set(&["a", "b", "b2"]).unwrap();
        let ls = strategy_from_set_relation(
            &base,
            &[
                ("a".to_string(), "b2".to_string()),
                ("a".to_string(), "b".to_string()),
            ],
        )
        .unwrap();
        assert_eq!(ls.descent_target("a").unwrap(), Element::point("b"));
    }

    #[test]
    fn non_terminating_relation_is_rejected() {
        let base = CarrierObject::set(&["a", "b", "c", "d"]).unwrap();
        let rel = vec![
            ("a".to_string(), "c".to_string()),
            ("b".to_string(), "d".to_string()),
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "a".to_string()),
        ];
        assert!(matches!(
            strategy_from_set_relation(&base, &rel),
            Err(Error::NotTerminating(_))
        ));
    }

    /// The set builder's descent targets are witnessed by relation steps.
    #[test]
    fn set_builder_descends_along_the_relation() {
        let base = CarrierObject::set(&["p", "q", "r", "s"]).unwrap();
        let rel = vec![
            ("p".to_string(), "q".to_string()),
            ("p".to_string(), "r".to_string()),
            ("q".to_string(), "s".to_string()),
            ("r".to_string(), "s".to_string()),
        ];
        let ls = strategy_from_set_relation(&base, &rel).unwrap();
        for x in base.labels() {
            let target = ls.descent_target(x).unwrap();
            let Element::Point(t) = &target else {
                panic!()
            };
            if t != x {
                assert!(rel.contains(&(x.clone(), t.clone())), "{x} -> {t}");
            } else {
                // Fixed points of htau are exactly the normal forms.
                assert!(rel.iter().all(|(a, _)| a != x));
            }
        }
    }

    /// The linear builder sends every basis element to the unit or to a rule
    /// with that exact source.
    #[test]
    fn vect_builder_choices_are_basis_pure() {
        use crate::filtration::{AlgebraicRule, TermOrder};
        use crate::linalg::rat;
        use crate::linear::AlgebraicRelation;

        let basis = CarrierObject::vect(&["1", "x", "x^2", "x^3"]).unwrap();
        let order = TermOrder::from_ranks(&[("1", 0), ("x", 1), ("x^2", 2), ("x^3", 3)]);
        let rules = vec![
            AlgebraicRule {
                lhs: "x^2".to_string(),
                rhs: Element::vector(&[("1", rat(-1))]),
            },
            AlgebraicRule {
                lhs: "x^3".to_string(),
                rhs: Element::vector(&[("x", rat(-1))]),
            },
        ];
        let ar = AlgebraicRelation::from_rules(basis.clone(), order, rules).unwrap();
        let ls = strategy_from_algebraic_relation(&ar).unwrap();
        assert!(ls.verify().unwrap().passed());
        for l in basis.labels() {
            let (step, unit) = ls.h_split(&Element::basis(l)).unwrap();
            let step = step.unwrap();
            let unit = unit.unwrap();
            if step.is_zero() {
                assert_eq!(unit, Element::basis(l));
            } else {
                assert!(unit.is_zero());
                assert_eq!(
                    ls.graph().src().apply(&step).unwrap(),
                    Element::basis(l)
                );
            }
        }
    }

    #[test]
    fn vect_builder_descent_values() {
        use crate::filtration::{AlgebraicRule, TermOrder};
        use crate::linalg::rat;
        use crate::linear::AlgebraicRelation;

        let basis = CarrierObject::vect(&["1", "x", "x^2", "x^3"]).unwrap();
        let order = TermOrder::from_ranks(&[("1", 0), ("x", 1), ("x^2", 2), ("x^3", 3)]);
        let rules = vec![
            AlgebraicRule {
                lhs: "x^2".to_string(),
                rhs: Element::vector(&[("1", rat(-1))]),
            },
            AlgebraicRule {
                lhs: "x^3".to_string(),
                rhs: Element::vector(&[("x", rat(-1))]),
            },
        ];
        let ar = AlgebraicRelation::from_rules(basis, order, rules).unwrap();
        let ls = strategy_from_algebraic_relation(&ar).unwrap();
        assert_eq!(
            ls.descent_target("x^2").unwrap(),
            Element::vector(&[("1", rat(-1))])
        );
        assert_eq!(
            ls.descent_target("x^3").unwrap(),
            Element::vector(&[("x", rat(-1))])
        );
        assert_eq!(ls.descent_target("1").unwrap(), Element::basis("1"));
        // Linearity: htau(x^2 + 3x) = -1 + 3x at the top stage.
        let top = ls.filtration().index().len() - 1;
        let out = ls
            .htau(top)
            .apply(&Element::vector(&[("x^2", rat(1)), ("x", rat(3))]))
            .unwrap();
        assert_eq!(out, Element::vector(&[("1", rat(-1)), ("x", rat(3))]));
    }

    #[test]
    fn transport_along_identity_is_identity() {
        let ls = chain_strategy();
        let id = GraphMorphism::new(
            ls.graph(),
            ls.graph(),
            CarrierMap::identity(ls.graph().edges()),
        )
        .unwrap();
        let t = transport_strategy(&ls, &id).unwrap();
        assert!(t.h().equal_maps(ls.h()).unwrap());
        assert!(t.verify().unwrap().passed());
    }

    #[test]
    fn transport_vect_strategy_into_symmetric_sum() {
        use crate::filtration::{AlgebraicRule, TermOrder};
        use crate::linalg::rat;
        use crate::linear::AlgebraicRelation;

        let basis = CarrierObject::vect(&["1", "x", "x^2"]).unwrap();
        let order = TermOrder::from_ranks(&[("1", 0), ("x", 1), ("x^2", 2)]);
        let ar = AlgebraicRelation::from_rules(
            basis,
            order,
            vec![AlgebraicRule {
                lhs: "x^2".to_string(),
                rhs: Element::vector(&[("1", rat(-1))]),
            }],
        )
        .unwrap();
        let ls = strategy_from_algebraic_relation(&ar).unwrap();
        let graph = ls.graph().clone();
        let sym = graph.sum(&graph.opposite()).unwrap();
        let f = GraphMorphism::new(&graph, &sym.graph, sym.summands.left.clone()).unwrap();
        let t = transport_strategy(&ls, &f).unwrap();
        assert!(t.verify().unwrap().passed());
        // The transported choice at x^2 is the left copy of the rule.
        let (step, unit) = t.h_split(&Element::basis("x^2")).unwrap();
        assert!(unit.unwrap().is_zero());
        assert_eq!(
            t.graph().src().apply(&step.unwrap()).unwrap(),
            Element::basis("x^2")
        );
    }

    /// A strategy over a diamond-shaped index poset: naturality is checked
    /// on all four covers.
    #[test]
    fn strategy_over_a_diamond_poset() {
        use crate::filtration::DirectedPoset;

        let base = CarrierObject::set(&["m", "p", "q", "t"]).unwrap();
        // p -> m, q -> m, t -> p.
        let edges = CarrierObject::set(&["e1", "e2", "e3"]).unwrap();
        let src = CarrierMap::from_assignments(
            edges.clone(),
            base.clone(),
            &[("e1", "p"), ("e2", "q"), ("e3", "t")],
        )
        .unwrap();
        let tgt = CarrierMap::from_assignments(
            edges.clone(),
            base.clone(),
            &[("e1", "m"), ("e2", "m"), ("e3", "p")],
        )
        .unwrap();
        let graph = InternalGraph::new(base.clone(), edges, src, tgt).unwrap();
        let index = DirectedPoset::from_covers(
            &["bot", "left", "right", "top"],
            &[("bot", "left"), ("bot", "right"), ("left", "top"), ("right", "top")],
        )
        .unwrap();
        let stages = vec![
            CarrierObject::set(&["m"]).unwrap(),
            CarrierObject::set(&["m", "p"]).unwrap(),
            CarrierObject::set(&["m", "q"]).unwrap(),
            CarrierObject::set(&["m", "p", "q", "t"]).unwrap(),
        ];
        let filt = Filtration::new(index, base.clone(), stages).unwrap();
        let sum = graph.sum(&InternalGraph::identity_graph(&base)).unwrap();
        let choose = |l: &str| match l {
            "p" => Some(("e1", "m")),
            "q" => Some(("e2", "m")),
            "t" => Some(("e3", "p")),
            _ => None,
        };
        let mut h_images = Vec::new();
        for l in base.labels() {
            match choose(l) {
                Some((edge, _)) => {
                    let e = graph.edges().generator(edge).unwrap();
                    h_images.push(sum.summands.left.apply(&e).unwrap());
                }
                None => h_images.push(sum.summands.right.apply(&Element::point(l)).unwrap()),
            }
        }
        let h = CarrierMap::from_generator_images(
            base.clone(),
            sum.graph.edges().clone(),
            &h_images,
        )
        .unwrap();
        let mut htau = Vec::new();
        for i in 0..filt.index().len() {
            let stage = filt.stage(i);
            let (below, _) = filt.below(i).unwrap();
            let images: Vec<Element> = stage
                .labels()
                .iter()
                .map(|l| match choose(l) {
                    Some((_, y)) => below.generator(y).unwrap(),
                    None => below.generator(l).unwrap(),
                })
                .collect();
            htau.push(
                CarrierMap::from_generator_images(stage.clone(), below.clone(), &images)
                    .unwrap(),
            );
        }
        let ls = LocalStrategy::new(graph, filt, h, htau).unwrap();
        let report = ls.verify().unwrap();
        assert!(report.passed(), "{:?}", report.first_failure());
    }

    /// Transport along the inclusions into the symmetric and
    /// reflexive-symmetric enrichments keeps all axioms.
    #[test]
    fn transport_into_closure_sums() {
        let ls = chain_strategy();
        let graph = ls.graph().clone();

        let sym = graph.sum(&graph.opposite()).unwrap();
        let f = GraphMorphism::new(&graph, &sym.graph, sym.summands.left.clone()).unwrap();
        let t = transport_strategy(&ls, &f).unwrap();
        assert!(t.verify().unwrap().passed());

        let refl_sym = sym
            .graph
            .sum(&InternalGraph::identity_graph(graph.base()))
            .unwrap();
        let g = GraphMorphism::new(
            &sym.graph,
            &refl_sym.graph,
            refl_sym.summands.left.clone(),
        )
        .unwrap();
        let t2 = transport_strategy(&t, &g).unwrap();
        assert!(t2.verify().unwrap().passed());
    }
}
