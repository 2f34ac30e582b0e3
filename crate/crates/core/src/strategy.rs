//! Global strategies: full reduction paths and the normal-form assignment.
//!
//! A local strategy induces a global one by well-founded recursion over the
//! filtration: elements of minimal stages get unit paths, and everything
//! else prepends its chosen step onto the path of its descent target. The
//! result is a pair `(H, Htau)` where `H` assigns each element a path into
//! the symmetric closure and `Htau` the normal form it lands on. For vector
//! spaces both are defined on the basis and extended linearly; paths of
//! non-basis vectors are formal combinations of basis paths and are never
//! materialized beyond endpoint evaluation.
//!
//! Confluence of a strategy is a single equation, `Htau . src = Htau . tgt`,
//! checked on the generating edges. A confluent strategy makes the quotient
//! diagram a split coequalizer; the certificate re-verifies its four
//! equations and compares the quotient with the object of normal forms.

use crate::carrier::{CarrierMap, CarrierObject, Element, Kind};
use crate::graph::Path;
use crate::termination::{LocalStrategy, StrategyChoice};
use crate::{Error, Result};

/// A global strategy: reduction paths and the normal-form retraction.
#[derive(Clone, Debug)]
pub struct GlobalStrategy {
    base: LocalStrategy,
    min_object: CarrierObject,
    min_injection: CarrierMap,
    htau: CarrierMap,
    paths: Vec<Path>,
}

/// Outcome of the confluence equation on the generating edges.
#[derive(Clone, PartialEq, Debug)]
pub enum ConfluenceStatus {
    Confluent,
    Violated { witness: String },
}

impl ConfluenceStatus {
    pub fn is_confluent(&self) -> bool {
        matches!(self, ConfluenceStatus::Confluent)
    }
}

/// The verified split-coequalizer data of a confluent strategy.
#[derive(Clone, Debug)]
pub struct SplitCertificate {
    /// `Htau . min_injection = id` on normal forms.
    pub retraction: bool,
    /// `min_injection . Htau = tgt . H` on every element.
    pub section_square: bool,
    /// `src . H = id` on every element.
    pub source_section: bool,
    /// `Htau . src = Htau . tgt`, on edges and on all constructed paths.
    pub coequalizes: bool,
    /// Cardinality or dimension of the quotient by the graph.
    pub quotient_size: usize,
    /// Cardinality or dimension of the object of normal forms.
    pub min_size: usize,
    /// Whether the canonical map from normal forms to the quotient is an
    /// isomorphism.
    pub canonical_iso: bool,
}

impl SplitCertificate {
    pub fn holds(&self) -> bool {
        self.retraction
            && self.section_square
            && self.source_section
            && self.coequalizes
            && self.canonical_iso
            && self.quotient_size == self.min_size
    }
}

/// Induces the global strategy of a verified local strategy by recursion
/// over the filtration stages.
pub fn induce_global_strategy(ls: &LocalStrategy) -> Result<GlobalStrategy> {
    let report = ls.verify()?;
    if !report.passed() {
        let f = report.first_failure().expect("failed");
        return Err(Error::Malformed(format!(
            "local strategy violates {}{}",
            f.axiom,
            f.witness
                .as_ref()
                .map(|w| format!(" at {w}"))
                .unwrap_or_default()
        )));
    }
    let (min_object, min_injection) = ls.filtration().min_object()?;
    match ls.graph().kind() {
        Kind::Set => induce_set(ls, min_object, min_injection),
        Kind::Vect => induce_vect(ls, min_object, min_injection),
    }
}

/// Position of a base label inside the minimal object. With one minimal
/// stage labels carry over; with several they are tagged by stage name.
fn min_label_of(
    ls: &LocalStrategy,
    min_object: &CarrierObject,
    entry_stage: usize,
    label: &str,
) -> Result<String> {
    if min_object.contains_label(label) {
        return Ok(label.to_string());
    }
    let tagged = format!("{}.{label}", ls.filtration().index().name(entry_stage));
    if min_object.contains_label(&tagged) {
        return Ok(tagged);
    }
    Err(Error::InternalInvariant(format!(
        "label '{label}' not found in the object of normal forms"
    )))
}

fn induce_set(
    ls: &LocalStrategy,
    min_object: CarrierObject,
    min_injection: CarrierMap,
) -> Result<GlobalStrategy> {
    let base = ls.graph().base();
    let filt = ls.filtration();
    let n = base.size();
    let mut paths: Vec<Option<Path>> = vec![None; n];
    let mut nf: Vec<Option<String>> = vec![None; n];

    // Process by entry stage along a linear extension, so descent targets
    // are always resolved first.
    let order = filt.index().linear_extension();
    for &stage in &order {
        for label in filt.stage(stage).labels() {
            let xi = base.index_of(label).expect("stage within base");
            if paths[xi].is_some() {
                continue;
            }
            let entry = filt.entry_stage(label).expect("covered");
            let x = Element::point(label);
            if filt.index().is_minimal(entry) {
                paths[xi] = Some(ls.graph().unit_path(&x)?);
                nf[xi] = Some(min_label_of(ls, &min_object, entry, label)?);
                continue;
            }
            let target = ls.descent_target(label)?;
            let Element::Point(tl) = &target else {
                return Err(Error::KindMismatch);
            };
            let ti = base.index_of(tl).expect("target in base");
            let (tail, tnf) = match (&paths[ti], &nf[ti]) {
                (Some(p), Some(v)) => (p.clone(), v.clone()),
                _ => {
                    return Err(Error::InternalInvariant(format!(
                        "descent target '{tl}' of '{label}' resolved out of order"
                    )))
                }
            };
            let step = match ls.choice_at(&x)? {
                StrategyChoice::Step(e) => e,
                StrategyChoice::Unit(_) => {
                    return Err(Error::InternalInvariant(format!(
                        "unit choice at non-minimal entry '{label}'"
                    )))
                }
            };
            paths[xi] = Some(ls.graph().prepend_step(&step, &tail)?);
            nf[xi] = Some(tnf);
        }
    }
    let paths: Vec<Path> = paths
        .into_iter()
        .map(|p| p.expect("all elements reached"))
        .collect();
    let images: Result<Vec<Element>> = nf
        .iter()
        .map(|v| min_object.generator(v.as_ref().expect("assigned")))
        .collect();
    let htau = CarrierMap::from_generator_images(base.clone(), min_object.clone(), &images?)?;
    let gs = GlobalStrategy {
        base: ls.clone(),
        min_object,
        min_injection,
        htau,
        paths,
    };
    gs.verify_equations()?;
    Ok(gs)
}

fn induce_vect(
    ls: &LocalStrategy,
    min_object: CarrierObject,
    min_injection: CarrierMap,
) -> Result<GlobalStrategy> {
    let base = ls.graph().base();
    let filt = ls.filtration();
    let n = base.size();
    let mut paths: Vec<Option<Path>> = vec![None; n];
    let mut nf: Vec<Option<Element>> = vec![None; n];

    let order = filt.index().linear_extension();
    for &stage in &order {
        for label in filt.stage(stage).labels() {
            let xi = base.index_of(label).expect("stage within base");
            if paths[xi].is_some() {
                continue;
            }
            let entry = filt.entry_stage(label).expect("covered");
            let x = Element::basis(label);
            if filt.index().is_minimal(entry) {
                paths[xi] = Some(ls.graph().unit_path(&x)?);
                let ml = min_label_of(ls, &min_object, entry, label)?;
                nf[xi] = Some(Element::basis(&ml));
                continue;
            }
            // Split h(x) into its step part and unit part; the descent
            // target is the combined image under the sum's target map.
            let (step_part, unit_part) = ls.h_split(&x)?;
            let rho = step_part.unwrap_or_else(Element::zero);
            let unit = unit_part.unwrap_or_else(Element::zero);
            let tau = ls.htau(entry).apply(&filt.stage(entry).generator(label)?)?;
            // Tail path: the formal combination of basis paths over tau.
            let (tail, tail_nf) = combine_basis_paths(ls, base, &paths, &nf, &tau)?;
            if rho.is_zero() {
                return Err(Error::InternalInvariant(format!(
                    "unit choice at non-minimal entry '{label}'"
                )));
            }
            let path = if unit.is_zero() {
                ls.graph().prepend_step(&rho, &tail)?
            } else {
                ls.graph().splice_step(&rho, &tail)?
            };
            paths[xi] = Some(path);
            nf[xi] = Some(tail_nf);
        }
    }
    let paths: Vec<Path> = paths
        .into_iter()
        .map(|p| p.expect("all basis labels reached"))
        .collect();
    let images: Vec<Element> = nf.into_iter().map(|v| v.expect("assigned")).collect();
    let htau = CarrierMap::from_generator_images(base.clone(), min_object.clone(), &images)?;
    let gs = GlobalStrategy {
        base: ls.clone(),
        min_object,
        min_injection,
        htau,
        paths,
    };
    gs.verify_equations()?;
    Ok(gs)
}

/// The formal combination `sum of v_y * (H(y), Htau(y))` over the support of
/// a vector whose basis paths are already resolved.
fn combine_basis_paths(
    ls: &LocalStrategy,
    base: &CarrierObject,
    paths: &[Option<Path>],
    nf: &[Option<Element>],
    v: &Element,
) -> Result<(Path, Element)> {
    let graph = ls.graph();
    let mut acc = graph.unit_path(&Element::zero())?;
    let mut acc_nf = Element::zero();
    if let Element::Vector(m) = v {
        for (label, coeff) in m {
            let yi = base
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            let (p, pnf) = match (&paths[yi], &nf[yi]) {
                (Some(p), Some(e)) => (p, e),
                _ => {
                    return Err(Error::InternalInvariant(format!(
                        "basis path for '{label}' resolved out of order"
                    )))
                }
            };
            acc = graph.add_paths(&acc, &graph.scale_path(p, coeff)?)?;
            acc_nf = acc_nf.add(&pnf.scale(coeff));
        }
    } else {
        return Err(Error::KindMismatch);
    }
    Ok((acc, acc_nf))
}

impl GlobalStrategy {
    pub fn local(&self) -> &LocalStrategy {
        &self.base
    }

    pub fn min_object(&self) -> &CarrierObject {
        &self.min_object
    }

    pub fn min_injection(&self) -> &CarrierMap {
        &self.min_injection
    }

    /// The normal-form assignment `Htau : E -> min(E)`.
    pub fn htau(&self) -> &CarrierMap {
        &self.htau
    }

    /// The reduction path of a generator (element or basis label).
    pub fn path_of(&self, label: &str) -> Result<&Path> {
        let i = self
            .base
            .graph()
            .base()
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        Ok(&self.paths[i])
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// The normal form of an element, i.e. `Htau` applied to it.
    pub fn normal_form(&self, x: &Element) -> Result<Element> {
        self.htau.apply(x)
    }

    /// The normal form seen back inside the base object.
    pub fn normal_form_in_base(&self, x: &Element) -> Result<Element> {
        self.min_injection.apply(&self.normal_form(x)?)
    }

    /// Verifies the strategy equations exactly:
    /// source and target of every path, the retraction law, and the two
    /// recursion equations that define the induction.
    pub fn verify_equations(&self) -> Result<()> {
        let graph = self.base.graph();
        let base = graph.base();
        // src . H = id and tgt . H = inj . Htau, generator-wise.
        for (i, label) in base.labels().iter().enumerate() {
            let x = base.generator(label)?;
            let p = &self.paths[i];
            let s = graph.path_source(p)?;
            if s != x {
                return Err(Error::InternalInvariant(format!(
                    "path source of '{label}' is {s}"
                )));
            }
            let t = graph.path_target(p)?;
            let expected = self.min_injection.apply(&self.htau.apply(&x)?)?;
            if t != expected {
                return Err(Error::InternalInvariant(format!(
                    "path target of '{label}' is {t}, expected {expected}"
                )));
            }
        }
        // Htau . inj = id on the object of normal forms.
        let retr = self.htau.compose(&self.min_injection)?;
        if !retr.equal_maps(&CarrierMap::identity(&self.min_object))? {
            return Err(Error::InternalInvariant(
                "normal-form retraction fails".into(),
            ));
        }
        // Htau = Htau . tgt . h, the normal-form recursion.
        let tgt_h = self.base.sum_tgt().compose(self.base.h())?;
        let rhs = self.htau.compose(&tgt_h)?;
        if !rhs.equal_maps(&self.htau)? {
            return Err(Error::InternalInvariant(
                "normal-form recursion fails".into(),
            ));
        }
        Ok(())
    }

    /// The confluence equation `Htau . src = Htau . tgt`, checked on the
    /// generating edges; equality there extends to the whole closure along
    /// the strategy recursion.
    pub fn confluence_check(&self) -> Result<ConfluenceStatus> {
        let graph = self.base.graph();
        let lhs = self.htau.compose(graph.src())?;
        let rhs = self.htau.compose(graph.tgt())?;
        Ok(match lhs.first_disagreement(&rhs)? {
            None => ConfluenceStatus::Confluent,
            Some(witness) => ConfluenceStatus::Violated { witness },
        })
    }

    /// Builds and verifies the split-coequalizer certificate of a confluent
    /// strategy; errors if the strategy is not confluent.
    pub fn split_coequalizer_certificate(&self) -> Result<SplitCertificate> {
        if let ConfluenceStatus::Violated { witness } = self.confluence_check()? {
            return Err(Error::NotConfluent(witness));
        }
        let graph = self.base.graph();
        let base = graph.base();

        let retraction = self
            .htau
            .compose(&self.min_injection)?
            .equal_maps(&CarrierMap::identity(&self.min_object))?;

        let mut section_square = true;
        let mut source_section = true;
        let mut coequalizes = true;
        for (i, label) in base.labels().iter().enumerate() {
            let x = base.generator(label)?;
            let p = &self.paths[i];
            if graph.path_source(p)? != x {
                source_section = false;
            }
            let lhs = self.min_injection.apply(&self.htau.apply(&x)?)?;
            if graph.path_target(p)? != lhs {
                section_square = false;
            }
            // Htau coequalizes the endpoints of every constructed path.
            let s_nf = self.htau.apply(&graph.path_source(p)?)?;
            let t_nf = self.htau.apply(&graph.path_target(p)?)?;
            if s_nf != t_nf {
                coequalizes = false;
            }
        }
        let on_edges = self
            .htau
            .compose(graph.src())?
            .equal_maps(&self.htau.compose(graph.tgt())?)?;
        coequalizes = coequalizes && on_edges;

        let quotient = graph.quotient()?;
        let canonical = quotient.projection.compose(&self.min_injection)?;
        Ok(SplitCertificate {
            retraction,
            section_square,
            source_section,
            coequalizes,
            quotient_size: quotient.object.size(),
            min_size: self.min_object.size(),
            canonical_iso: canonical.is_isomorphism(),
        })
    }
}
