//! Internal graphs over a carrier object and the closure operations on them.
//!
//! A graph is an object of rewrite steps `R` with source and target maps into
//! a base object `E`. Products of graphs are pullbacks, sums are coproducts,
//! and the reflexive / symmetric / transitive closures are characterized by
//! universal properties that can be checked exhaustively at desk scale.
//!
//! The transitive closure is a countable coproduct and is never materialized:
//! paths are first-class symbolic values whose endpoints are evaluated
//! against the source and target maps. For vector-space carriers a path is a
//! formal rational combination of step tuples; every tuple satisfies the
//! consecutive endpoint equations exactly and is validated on construction.

use num_traits::{One, Zero};

use crate::carrier::{
    coequalizer, coproduct, pullback, CarrierMap, CarrierObject, Coequalizer, Coproduct, Element,
    Kind, Pullback,
};
use crate::linalg::Rat;
use crate::{Error, Result};

/// A graph internal to one of the carriers: steps `R` with `src, tgt : R -> E`.
#[derive(Clone, PartialEq, Debug)]
pub struct InternalGraph {
    base: CarrierObject,
    edges: CarrierObject,
    src: CarrierMap,
    tgt: CarrierMap,
}

impl InternalGraph {
    pub fn new(
        base: CarrierObject,
        edges: CarrierObject,
        src: CarrierMap,
        tgt: CarrierMap,
    ) -> Result<Self> {
        if src.dom() != &edges || tgt.dom() != &edges {
            return Err(Error::DomainMismatch);
        }
        if src.cod() != &base || tgt.cod() != &base {
            return Err(Error::CodomainMismatch);
        }
        Ok(InternalGraph {
            base,
            edges,
            src,
            tgt,
        })
    }

    /// The base object seen as a graph: both structure maps are the identity.
    pub fn identity_graph(base: &CarrierObject) -> Self {
        let id = CarrierMap::identity(base);
        InternalGraph {
            base: base.clone(),
            edges: base.clone(),
            src: id.clone(),
            tgt: id,
        }
    }

    pub fn base(&self) -> &CarrierObject {
        &self.base
    }

    pub fn edges(&self) -> &CarrierObject {
        &self.edges
    }

    pub fn src(&self) -> &CarrierMap {
        &self.src
    }

    pub fn tgt(&self) -> &CarrierMap {
        &self.tgt
    }

    pub fn kind(&self) -> Kind {
        self.base.kind()
    }

    /// Source and target of an edge element, honoring direction.
    pub fn step_endpoints(&self, step: &PathStep) -> Result<(Element, Element)> {
        let s = self.src.apply(&step.step)?;
        let t = self.tgt.apply(&step.step)?;
        Ok(match step.dir {
            Direction::Forward => (s, t),
            Direction::Backward => (t, s),
        })
    }

    /// The opposite graph, with source and target reversed.
    pub fn opposite(&self) -> InternalGraph {
        InternalGraph {
            base: self.base.clone(),
            edges: self.edges.clone(),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
        }
    }

    /// The product graph `RS` on the pullback of `tgt_R` and `src_S`,
    /// together with the pullback projections.
    pub fn product_with_projections(&self, other: &InternalGraph) -> Result<(InternalGraph, Pullback)> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let pb = pullback(&self.tgt, &other.src)?;
        let src = self.src.compose(&pb.proj1)?;
        let tgt = other.tgt.compose(&pb.proj2)?;
        let graph = InternalGraph::new(self.base.clone(), pb.object.clone(), src, tgt)?;
        Ok((graph, pb))
    }

    pub fn product(&self, other: &InternalGraph) -> Result<InternalGraph> {
        Ok(self.product_with_projections(other)?.0)
    }

    /// The sum graph `R + S` with copaired structure maps.
    pub fn sum(&self, other: &InternalGraph) -> Result<GraphSum> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let cop = coproduct(&self.edges, &other.edges)?;
        let src = cop.copair(&self.src, &other.src)?;
        let tgt = cop.copair(&self.tgt, &other.tgt)?;
        let graph = InternalGraph::new(self.base.clone(), cop.object.clone(), src, tgt)?;
        Ok(GraphSum {
            graph,
            summands: cop,
        })
    }

    /// The quotient of the base by the graph: the coequalizer of `src, tgt`.
    pub fn quotient(&self) -> Result<Coequalizer> {
        coequalizer(&self.src, &self.tgt)
    }

    /// The empty path at `x`, the unit of path composition.
    pub fn unit_path(&self, x: &Element) -> Result<Path> {
        if !self.base.contains(x) {
            return Err(Error::Malformed(format!("{x} is not in the base object")));
        }
        Ok(Path {
            anchor: x.clone(),
            chains: Vec::new(),
        })
    }

    /// The length-one path on a single edge element.
    pub fn embed_step(&self, step: &Element, dir: Direction) -> Result<Path> {
        if !self.edges.contains(step) {
            return Err(Error::Malformed(format!("{step} is not an edge element")));
        }
        let path = match self.kind() {
            Kind::Set => Path {
                anchor: self.step_endpoints(&PathStep {
                    step: step.clone(),
                    dir,
                })?.0,
                chains: vec![Chain {
                    coeff: Rat::one(),
                    steps: vec![PathStep {
                        step: step.clone(),
                        dir,
                    }],
                }],
            },
            Kind::Vect => Path {
                anchor: Element::zero(),
                chains: vec![Chain {
                    coeff: Rat::one(),
                    steps: vec![PathStep {
                        step: step.clone(),
                        dir,
                    }],
                }],
            },
        };
        self.validate_path(&path)?;
        Ok(path)
    }

    pub fn path_source(&self, p: &Path) -> Result<Element> {
        match self.kind() {
            Kind::Set => match p.chains.first() {
                None => Ok(p.anchor.clone()),
                Some(c) => Ok(self.step_endpoints(&c.steps[0])?.0),
            },
            Kind::Vect => {
                let mut out = p.anchor.clone();
                for c in &p.chains {
                    let (s, _) = self.step_endpoints(&c.steps[0])?;
                    out = out.add(&s.scale(&c.coeff));
                }
                Ok(out)
            }
        }
    }

    pub fn path_target(&self, p: &Path) -> Result<Element> {
        match self.kind() {
            Kind::Set => match p.chains.first() {
                None => Ok(p.anchor.clone()),
                Some(c) => Ok(self.step_endpoints(c.steps.last().expect("nonempty"))?.1),
            },
            Kind::Vect => {
                let mut out = p.anchor.clone();
                for c in &p.chains {
                    let (_, t) = self.step_endpoints(c.steps.last().expect("nonempty"))?;
                    out = out.add(&t.scale(&c.coeff));
                }
                Ok(out)
            }
        }
    }

    /// Checks the path invariants: membership of anchor and steps, and the
    /// consecutive endpoint equations inside every chain.
    pub fn validate_path(&self, p: &Path) -> Result<()> {
        if !self.base.contains(&p.anchor) {
            return Err(Error::Malformed("path anchor outside the base".into()));
        }
        if self.kind() == Kind::Set {
            if p.chains.len() > 1 {
                return Err(Error::Malformed(
                    "set paths have at most one chain".into(),
                ));
            }
            if let Some(c) = p.chains.first() {
                if !c.coeff.is_one() {
                    return Err(Error::Malformed("set chains carry coefficient 1".into()));
                }
            }
        }
        for c in &p.chains {
            if c.steps.is_empty() {
                return Err(Error::Malformed("empty chain".into()));
            }
            if self.kind() == Kind::Vect && c.coeff.is_zero() {
                return Err(Error::Malformed("zero-coefficient chain".into()));
            }
            for step in &c.steps {
                if !self.edges.contains(&step.step) {
                    return Err(Error::Malformed("step outside the edge object".into()));
                }
            }
            for w in c.steps.windows(2) {
                let (_, t) = self.step_endpoints(&w[0])?;
                let (s, _) = self.step_endpoints(&w[1])?;
                if t != s {
                    return Err(Error::NotComposable(format!(
                        "chain endpoints disagree: {t} vs {s}"
                    )));
                }
            }
        }
        if self.kind() == Kind::Set {
            if let Some(c) = p.chains.first() {
                let (s, _) = self.step_endpoints(&c.steps[0])?;
                if s != p.anchor {
                    return Err(Error::Malformed(
                        "set path anchor must be the source of its first step".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Path composition, the transitive structure of the closure.
    ///
    /// Set paths concatenate. Vector-space paths combine formally: the chains
    /// of both sides are kept and the unit components absorb the join, which
    /// keeps every stored tuple's endpoint equations intact.
    pub fn compose_paths(&self, p: &Path, q: &Path) -> Result<Path> {
        let t = self.path_target(p)?;
        let s = self.path_source(q)?;
        if t != s {
            return Err(Error::NotComposable(format!("target {t} != source {s}")));
        }
        match self.kind() {
            Kind::Set => {
                if p.chains.is_empty() {
                    return Ok(q.clone());
                }
                if q.chains.is_empty() {
                    return Ok(p.clone());
                }
                let mut steps = p.chains[0].steps.clone();
                steps.extend(q.chains[0].steps.iter().cloned());
                Ok(Path {
                    anchor: p.anchor.clone(),
                    chains: vec![Chain {
                        coeff: Rat::one(),
                        steps,
                    }],
                })
            }
            Kind::Vect => {
                let anchor = p.anchor.add(&q.anchor).sub(&t);
                let mut chains = p.chains.clone();
                chains.extend(q.chains.iter().cloned());
                Ok(Path { anchor, chains })
            }
        }
    }

    /// Prepends a single forward step to a path; this is the composition map
    /// used by strategy induction. When the tail is a single chain the step
    /// is concatenated onto it, so reduction paths of basis elements stay
    /// honest step sequences.
    pub fn prepend_step(&self, step: &Element, tail: &Path) -> Result<Path> {
        let ps = PathStep {
            step: step.clone(),
            dir: Direction::Forward,
        };
        let (_, t) = self.step_endpoints(&ps)?;
        let tail_src = self.path_source(tail)?;
        if t != tail_src {
            return Err(Error::NotComposable(format!(
                "step target {t} != tail source {tail_src}"
            )));
        }
        match self.kind() {
            Kind::Set => self.compose_paths(&self.embed_step(step, Direction::Forward)?, tail),
            Kind::Vect => {
                let path = if tail.chains.is_empty() {
                    // Tail is a pure unit at the step target.
                    Path {
                        anchor: Element::zero(),
                        chains: vec![Chain {
                            coeff: Rat::one(),
                            steps: vec![ps],
                        }],
                    }
                } else if tail.anchor.is_zero() && tail.chains.len() == 1 {
                    let chain = &tail.chains[0];
                    let mut steps = vec![ps];
                    steps.extend(chain.steps.iter().map(|s| PathStep {
                        step: s.step.scale(&chain.coeff),
                        dir: s.dir,
                    }));
                    Path {
                        anchor: Element::zero(),
                        chains: vec![Chain {
                            coeff: Rat::one(),
                            steps,
                        }],
                    }
                } else {
                    let mut chains = vec![Chain {
                        coeff: Rat::one(),
                        steps: vec![ps],
                    }];
                    chains.extend(tail.chains.iter().cloned());
                    Path {
                        anchor: tail.anchor.sub(&t),
                        chains,
                    }
                };
                self.validate_path(&path)?;
                Ok(path)
            }
        }
    }

    /// A single-chain path from an explicit step sequence, validated.
    pub fn chain_path(&self, steps: Vec<PathStep>) -> Result<Path> {
        if steps.is_empty() {
            return Err(Error::Malformed("chain_path needs at least one step".into()));
        }
        let anchor = match self.kind() {
            Kind::Set => self.step_endpoints(&steps[0])?.0,
            Kind::Vect => Element::zero(),
        };
        let path = Path {
            anchor,
            chains: vec![Chain {
                coeff: Rat::one(),
                steps,
            }],
        };
        self.validate_path(&path)?;
        Ok(path)
    }

    /// Splices a step whose target may differ from the tail source by a unit
    /// component: the mixed-step composition used when a strategy value has
    /// both a step part and a unit part. The source of the result is
    /// `src(step) + (source(tail) - tgt(step))`.
    pub fn splice_step(&self, step: &Element, tail: &Path) -> Result<Path> {
        if self.kind() != Kind::Vect {
            return Err(Error::KindMismatch);
        }
        let ps = PathStep {
            step: step.clone(),
            dir: Direction::Forward,
        };
        let (_, t) = self.step_endpoints(&ps)?;
        let mut chains = vec![Chain {
            coeff: Rat::one(),
            steps: vec![ps],
        }];
        chains.extend(tail.chains.iter().cloned());
        let path = Path {
            anchor: tail.anchor.sub(&t),
            chains,
        };
        self.validate_path(&path)?;
        Ok(path)
    }

    /// Reverses a path inside the symmetric closure.
    pub fn invert_path(&self, p: &Path) -> Result<Path> {
        let anchor = match self.kind() {
            Kind::Set => self.path_target(p)?,
            Kind::Vect => p.anchor.clone(),
        };
        let chains = p
            .chains
            .iter()
            .map(|c| Chain {
                coeff: c.coeff.clone(),
                steps: c
                    .steps
                    .iter()
                    .rev()
                    .map(|s| PathStep {
                        step: s.step.clone(),
                        dir: s.dir.flip(),
                    })
                    .collect(),
            })
            .collect();
        let out = Path { anchor, chains };
        self.validate_path(&out)?;
        Ok(out)
    }

    /// Formal sum of two vector-space paths.
    pub fn add_paths(&self, p: &Path, q: &Path) -> Result<Path> {
        if self.kind() != Kind::Vect {
            return Err(Error::KindMismatch);
        }
        let mut chains = p.chains.clone();
        chains.extend(q.chains.iter().cloned());
        Ok(Path {
            anchor: p.anchor.add(&q.anchor),
            chains,
        })
    }

    /// Scales a vector-space path.
    pub fn scale_path(&self, p: &Path, s: &Rat) -> Result<Path> {
        if self.kind() != Kind::Vect {
            return Err(Error::KindMismatch);
        }
        if s.is_zero() {
            return Ok(Path {
                anchor: Element::zero(),
                chains: Vec::new(),
            });
        }
        Ok(Path {
            anchor: p.anchor.scale(s),
            chains: p
                .chains
                .iter()
                .map(|c| Chain {
                    coeff: &c.coeff * s,
                    steps: c.steps.clone(),
                })
                .collect(),
        })
    }
}

/// The sum of two graphs together with the coproduct injections.
#[derive(Clone, Debug)]
pub struct GraphSum {
    pub graph: InternalGraph,
    pub summands: Coproduct,
}

/// Orientation of a step inside the symmetric closure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A directed occurrence of an edge element.
#[derive(Clone, PartialEq, Debug)]
pub struct PathStep {
    pub step: Element,
    pub dir: Direction,
}

/// One tuple of a formal path, with its rational weight.
#[derive(Clone, PartialEq, Debug)]
pub struct Chain {
    pub coeff: Rat,
    pub steps: Vec<PathStep>,
}

/// A symbolic element of the reflexive-symmetric-transitive closure.
///
/// For sets: an anchor point plus at most one chain of composable steps; the
/// empty path is the reflexive unit. For vector spaces: a unit component in
/// the base plus a formal rational combination of step tuples, with source
/// and target evaluated linearly.
#[derive(Clone, PartialEq, Debug)]
pub struct Path {
    anchor: Element,
    chains: Vec<Chain>,
}

impl Path {
    pub fn anchor(&self) -> &Element {
        &self.anchor
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Number of steps: for formal combinations, the longest tuple.
    pub fn len(&self) -> usize {
        self.chains.iter().map(|c| c.steps.len()).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// The steps of a set path.
    pub fn steps(&self) -> &[PathStep] {
        self.chains.first().map_or(&[], |c| &c.steps)
    }
}

/// A morphism of graphs over a shared base: a map on edges commuting with
/// source and target. The commuting conditions are checked at construction.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    dom: InternalGraph,
    cod: InternalGraph,
    map: CarrierMap,
}

impl GraphMorphism {
    pub fn new(dom: &InternalGraph, cod: &InternalGraph, map: CarrierMap) -> Result<Self> {
        if dom.base() != cod.base() {
            return Err(Error::BaseMismatch);
        }
        if map.dom() != dom.edges() || map.cod() != cod.edges() {
            return Err(Error::DomainMismatch);
        }
        let src_ok = cod
            .src()
            .compose(&map)?
            .equal_maps(dom.src())?;
        let tgt_ok = cod
            .tgt()
            .compose(&map)?
            .equal_maps(dom.tgt())?;
        if !src_ok || !tgt_ok {
            return Err(Error::Malformed(
                "map does not commute with source and target".into(),
            ));
        }
        Ok(GraphMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            map,
        })
    }

    pub fn dom(&self) -> &InternalGraph {
        &self.dom
    }

    pub fn cod(&self) -> &InternalGraph {
        &self.cod
    }

    pub fn map(&self) -> &CarrierMap {
        &self.map
    }
}

/// The composable edge pairs of a set graph: the elements of the pullback
/// underlying the product `RR`, as pairs of edge labels.
pub fn pullback_pairs(graph: &InternalGraph) -> Result<Vec<(String, String)>> {
    if graph.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    let (_, pb) = graph.product_with_projections(graph)?;
    let p1 = pb.proj1.table().expect("set");
    let p2 = pb.proj2.table().expect("set");
    Ok((0..pb.object.size())
        .map(|k| {
            (
                graph.edges().labels()[p1[k]].clone(),
                graph.edges().labels()[p2[k]].clone(),
            )
        })
        .collect())
}

/// Enumerates candidate tables of length `n` with entries below `m`,
/// collecting those accepted by the predicate. `None` when over budget.
fn enumerate_tables(
    n: usize,
    m: usize,
    budget: u64,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> Option<Vec<Vec<usize>>> {
    if n == 0 {
        return Some(if accept(&[]) { vec![Vec::new()] } else { Vec::new() });
    }
    if m == 0 {
        return Some(Vec::new());
    }
    let total = (m as u64).checked_pow(n as u32)?;
    if total > budget {
        return None;
    }
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in table.iter_mut() {
            *slot = (c % m as u64) as usize;
            c /= m as u64;
        }
        if accept(&table) {
            out.push(table.clone());
        }
    }
    Some(out)
}

/// All graph morphisms between two small set graphs, by brute force over
/// edge tables.
pub fn enumerate_graph_morphisms(
    dom: &InternalGraph,
    cod: &InternalGraph,
) -> Result<Vec<GraphMorphism>> {
    if dom.kind() != Kind::Set || cod.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    if dom.base() != cod.base() {
        return Err(Error::BaseMismatch);
    }
    let n = dom.edges().size();
    let m = cod.edges().size();
    let d_src = dom.src().table().expect("set");
    let d_tgt = dom.tgt().table().expect("set");
    let c_src = cod.src().table().expect("set");
    let c_tgt = cod.tgt().table().expect("set");
    let commutes = |table: &[usize]| {
        table
            .iter()
            .enumerate()
            .all(|(e, &img)| c_src[img] == d_src[e] && c_tgt[img] == d_tgt[e])
    };
    let tables = enumerate_tables(n, m, 5_000_000, commutes)
        .ok_or_else(|| Error::BoundExceeded("too many candidate morphisms".into()))?;
    tables
        .into_iter()
        .map(|t| {
            let map = CarrierMap::from_table(dom.edges().clone(), cod.edges().clone(), t)?;
            GraphMorphism::new(dom, cod, map)
        })
        .collect()
}

/// Which closure a universal-property check targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureKind {
    Reflexive,
    Symmetric,
    Transitive,
    ReflexiveTransitive,
    ReflexiveSymmetricTransitive,
}

/// Composition structure on a graph: a map from the object of composable
/// pairs (the pullback of target and source) back into the edges.
#[derive(Clone, Debug)]
pub struct MultStructure {
    pub pairs: Pullback,
    pub map: CarrierMap,
}

/// A graph equipped with whichever of the unit / composition / symmetry
/// structure maps it carries. Structure maps are validated on construction.
#[derive(Clone, Debug)]
pub struct StructuredGraph {
    pub graph: InternalGraph,
    pub unit: Option<CarrierMap>,
    pub mult: Option<MultStructure>,
    pub sym: Option<CarrierMap>,
}

impl StructuredGraph {
    pub fn bare(graph: InternalGraph) -> Self {
        StructuredGraph {
            graph,
            unit: None,
            mult: None,
            sym: None,
        }
    }

    pub fn with_unit(mut self, unit: CarrierMap) -> Result<Self> {
        let id = CarrierMap::identity(self.graph.base());
        if !self.graph.src().compose(&unit)?.equal_maps(&id)?
            || !self.graph.tgt().compose(&unit)?.equal_maps(&id)?
        {
            return Err(Error::Malformed("unit is not a loop assignment".into()));
        }
        self.unit = Some(unit);
        Ok(self)
    }

    pub fn with_sym(mut self, sym: CarrierMap) -> Result<Self> {
        if !self.graph.src().compose(&sym)?.equal_maps(self.graph.tgt())?
            || !self.graph.tgt().compose(&sym)?.equal_maps(self.graph.src())?
        {
            return Err(Error::Malformed("sym does not swap endpoints".into()));
        }
        self.sym = Some(sym);
        Ok(self)
    }

    pub fn with_mult(mut self, map: CarrierMap) -> Result<Self> {
        let pairs = pullback(self.graph.tgt(), self.graph.src())?;
        if map.dom() != &pairs.object || map.cod() != self.graph.edges() {
            return Err(Error::DomainMismatch);
        }
        let src_ok = self
            .graph
            .src()
            .compose(&map)?
            .equal_maps(&self.graph.src().compose(&pairs.proj1)?)?;
        let tgt_ok = self
            .graph
            .tgt()
            .compose(&map)?
            .equal_maps(&self.graph.tgt().compose(&pairs.proj2)?)?;
        if !src_ok || !tgt_ok {
            return Err(Error::Malformed(
                "composition does not respect endpoints".into(),
            ));
        }
        self.mult = Some(MultStructure { pairs, map });
        Ok(self)
    }

    /// Builds a relation graph on `base` from a list of ordered pairs and
    /// derives whichever canonical structure maps the relation supports:
    /// the diagonal unit when it is reflexive, the swap when it is symmetric,
    /// and pair composition when it is transitively closed.
    pub fn relation_graph(base: &CarrierObject, pairs: &[(String, String)]) -> Result<Self> {
        if base.kind() != Kind::Set {
            return Err(Error::KindMismatch);
        }
        let mut dedup: Vec<(usize, usize)> = Vec::new();
        for (a, b) in pairs {
            let i = base
                .index_of(a)
                .ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let j = base
                .index_of(b)
                .ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            if !dedup.contains(&(i, j)) {
                dedup.push((i, j));
            }
        }
        let labels: Vec<String> = dedup
            .iter()
            .map(|&(i, j)| format!("({},{})", base.labels()[i], base.labels()[j]))
            .collect();
        let edges = CarrierObject::new(Kind::Set, labels)?;
        let src = CarrierMap::from_table(
            edges.clone(),
            base.clone(),
            dedup.iter().map(|&(i, _)| i).collect(),
        )?;
        let tgt = CarrierMap::from_table(
            edges.clone(),
            base.clone(),
            dedup.iter().map(|&(_, j)| j).collect(),
        )?;
        let graph = InternalGraph::new(base.clone(), edges, src, tgt)?;

        let edge_index = |i: usize, j: usize| dedup.iter().position(|&p| p == (i, j));

        let mut out = StructuredGraph::bare(graph);
        if (0..base.size()).all(|i| edge_index(i, i).is_some()) {
            let unit = CarrierMap::from_table(
                base.clone(),
                out.graph.edges().clone(),
                (0..base.size()).map(|i| edge_index(i, i).unwrap()).collect(),
            )?;
            out = out.with_unit(unit)?;
        }
        if dedup.iter().all(|&(i, j)| edge_index(j, i).is_some()) {
            let sym = CarrierMap::from_table(
                out.graph.edges().clone(),
                out.graph.edges().clone(),
                dedup.iter().map(|&(i, j)| edge_index(j, i).unwrap()).collect(),
            )?;
            out = out.with_sym(sym)?;
        }
        // Composition exists exactly when the relation is transitively closed.
        let pairs_pb = pullback(out.graph.tgt(), out.graph.src())?;
        let mut mult_table = Vec::with_capacity(pairs_pb.object.size());
        let mut transitive = true;
        let p1 = pairs_pb.proj1.table().expect("set").to_vec();
        let p2 = pairs_pb.proj2.table().expect("set").to_vec();
        for k in 0..pairs_pb.object.size() {
            let (i, _) = dedup[p1[k]];
            let (_, l) = dedup[p2[k]];
            match edge_index(i, l) {
                Some(e) => mult_table.push(e),
                None => {
                    transitive = false;
                    break;
                }
            }
        }
        if transitive {
            let map = CarrierMap::from_table(
                pairs_pb.object.clone(),
                out.graph.edges().clone(),
                mult_table,
            )?;
            out = out.with_mult(map)?;
        }
        Ok(out)
    }

    /// Dense composition table indexed by edge pairs, `None` off the
    /// composable locus.
    fn compose_table(&self) -> Option<Vec<Vec<Option<usize>>>> {
        let mult = self.mult.as_ref()?;
        let n = self.graph.edges().size();
        let mut table = vec![vec![None; n]; n];
        let p1 = mult.pairs.proj1.table().expect("set");
        let p2 = mult.pairs.proj2.table().expect("set");
        let values = mult.map.table().expect("set");
        for k in 0..mult.pairs.object.size() {
            table[p1[k]][p2[k]] = Some(values[k]);
        }
        Some(table)
    }
}

/// Bounds for the closure universal-property check.
#[derive(Clone, Copy, Debug)]
pub struct CheckBounds {
    /// Maximum number of edges in the target graph.
    pub max_target_edges: usize,
    /// Maximum chain length enumerated.
    pub max_chain_len: usize,
    /// Budget for full map enumeration in the uniqueness check.
    pub enumeration_budget: u64,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds {
            max_target_edges: 5,
            max_chain_len: 4,
            enumeration_budget: 1_000_000,
        }
    }
}

/// Decides whether `f : R -> S` extends uniquely through the named closure of
/// `R` to a structure-preserving map into `S`.
///
/// The extension is built explicitly: paths are mapped step-wise through `f`
/// and folded with the structure maps of `S`. Existence amounts to the fold
/// being independent of bracketing (and compatible with units and symmetry),
/// which is checked on all chains up to the configured length; uniqueness is
/// checked by full enumeration for the finite closures when the budget
/// allows, and is forced by the fold recursion otherwise.
pub fn closure_universal_check(
    r: &InternalGraph,
    s: &StructuredGraph,
    f: &GraphMorphism,
    which: ClosureKind,
    bounds: &CheckBounds,
) -> Result<bool> {
    if r.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    if s.graph.edges().size() > bounds.max_target_edges {
        return Err(Error::BoundExceeded(format!(
            "target has {} edges, bound is {}",
            s.graph.edges().size(),
            bounds.max_target_edges
        )));
    }
    if f.map().dom() != r.edges() || f.map().cod() != s.graph.edges() {
        return Err(Error::DomainMismatch);
    }
    let need_unit = matches!(
        which,
        ClosureKind::Reflexive
            | ClosureKind::ReflexiveTransitive
            | ClosureKind::ReflexiveSymmetricTransitive
    );
    let need_mult = matches!(
        which,
        ClosureKind::Transitive
            | ClosureKind::ReflexiveTransitive
            | ClosureKind::ReflexiveSymmetricTransitive
    );
    let need_sym = matches!(
        which,
        ClosureKind::Symmetric | ClosureKind::ReflexiveSymmetricTransitive
    );
    if need_unit && s.unit.is_none() {
        return Err(Error::MissingStructure("reflexive unit".into()));
    }
    if need_mult && s.mult.is_none() {
        return Err(Error::MissingStructure("composition".into()));
    }
    if need_sym && s.sym.is_none() {
        return Err(Error::MissingStructure("symmetry".into()));
    }

    match which {
        ClosureKind::Reflexive => check_reflexive_extension(r, s, f, bounds),
        ClosureKind::Symmetric => check_symmetric_extension(r, s, f, bounds),
        _ => check_chain_extension(r, s, f, which, bounds),
    }
}

fn check_reflexive_extension(
    r: &InternalGraph,
    s: &StructuredGraph,
    f: &GraphMorphism,
    bounds: &CheckBounds,
) -> Result<bool> {
    let unit = s.unit.as_ref().expect("checked");
    let sum = r.sum(&InternalGraph::identity_graph(r.base()))?;
    let candidate = sum.summands.copair(f.map(), unit)?;
    // The copair is automatically a graph morphism preserving the unit; the
    // content of the check is uniqueness.
    if GraphMorphism::new(&sum.graph, &s.graph, candidate).is_err() {
        return Ok(false);
    }
    // Uniqueness: a structure-preserving extension is forced on both
    // summands, which the enumeration confirms whenever it fits the budget.
    let ftab = f.map().table().expect("set").to_vec();
    let unit_tab = unit.table().expect("set").to_vec();
    let left = sum.summands.left.table().expect("set").to_vec();
    let right = sum.summands.right.table().expect("set").to_vec();
    let count = count_structure_maps(&sum.graph, s, bounds, move |cand| {
        left.iter().enumerate().all(|(j, &p)| cand[p] == ftab[j])
            && right.iter().enumerate().all(|(e, &p)| cand[p] == unit_tab[e])
    })?;
    Ok(count.is_none_or(|c| c == 1))
}

fn check_symmetric_extension(
    r: &InternalGraph,
    s: &StructuredGraph,
    f: &GraphMorphism,
    bounds: &CheckBounds,
) -> Result<bool> {
    let sym = s.sym.as_ref().expect("checked");
    let sum = r.sum(&r.opposite())?;
    let mirrored = sym.compose(f.map())?;
    let candidate = sum.summands.copair(f.map(), &mirrored)?;
    if GraphMorphism::new(&sum.graph, &s.graph, candidate).is_err() {
        return Ok(false);
    }
    // Preservation on the mirrored copy forces sym . sym = id on the image.
    let double = sym.compose(&mirrored)?;
    if !double.equal_maps(f.map())? {
        return Ok(false);
    }
    let ftab = f.map().table().expect("set").to_vec();
    let sym_tab = sym.table().expect("set").to_vec();
    let left = sum.summands.left.table().expect("set").to_vec();
    let right = sum.summands.right.table().expect("set").to_vec();
    let count = count_structure_maps(&sum.graph, s, bounds, move |cand| {
        left.iter().enumerate().all(|(j, &p)| cand[p] == ftab[j])
            && left
                .iter()
                .zip(&right)
                .all(|(&p, &q)| cand[q] == sym_tab[cand[p]] && cand[p] == sym_tab[cand[q]])
    })?;
    Ok(count.is_none_or(|c| c == 1))
}

/// Enumerates edge tables `dom -> S` within budget and counts those that
/// are graph morphisms satisfying `extra`. Returns `None` over budget.
fn count_structure_maps(
    dom: &InternalGraph,
    s: &StructuredGraph,
    bounds: &CheckBounds,
    extra: impl Fn(&[usize]) -> bool,
) -> Result<Option<usize>> {
    let d_src = dom.src().table().expect("set").to_vec();
    let d_tgt = dom.tgt().table().expect("set").to_vec();
    let c_src = s.graph.src().table().expect("set").to_vec();
    let c_tgt = s.graph.tgt().table().expect("set").to_vec();
    let pred = move |table: &[usize]| {
        table
            .iter()
            .enumerate()
            .all(|(e, &img)| c_src[img] == d_src[e] && c_tgt[img] == d_tgt[e])
            && extra(table)
    };
    Ok(enumerate_tables(
        dom.edges().size(),
        s.graph.edges().size(),
        bounds.enumeration_budget,
        pred,
    )
    .map(|found| found.len()))
}

/// Chain-based check for the transitive-flavored closures.
fn check_chain_extension(
    r: &InternalGraph,
    s: &StructuredGraph,
    f: &GraphMorphism,
    which: ClosureKind,
    bounds: &CheckBounds,
) -> Result<bool> {
    let directed = which == ClosureKind::ReflexiveSymmetricTransitive;
    let with_units = which != ClosureKind::Transitive;
    let ftab = f.map().table().expect("set").to_vec();
    let src = r.src().table().expect("set").to_vec();
    let tgt = r.tgt().table().expect("set").to_vec();
    let s_src = s.graph.src().table().expect("set").to_vec();
    let s_tgt = s.graph.tgt().table().expect("set").to_vec();
    let sym_tab = s.sym.as_ref().map(|m| m.table().expect("set").to_vec());
    let unit_tab = s.unit.as_ref().map(|m| m.table().expect("set").to_vec());
    let compose = s.compose_table().expect("checked");
    let compose = move |x: usize, y: usize| compose[x][y];

    // One directed step of R, as (edge, forward?) with its endpoints and image.
    struct Step {
        from: usize,
        to: usize,
        image: usize,
    }
    let mut steps: Vec<Step> = Vec::new();
    for e in 0..r.edges().size() {
        steps.push(Step {
            from: src[e],
            to: tgt[e],
            image: ftab[e],
        });
    }
    if directed {
        for e in 0..r.edges().size() {
            steps.push(Step {
                from: tgt[e],
                to: src[e],
                image: sym_tab.as_ref().expect("checked")[ftab[e]],
            });
        }
    }

    // Enumerate chains (as step index sequences) up to the length bound,
    // mapping each through the left fold as we go.
    let mut frontier: Vec<(Vec<usize>, usize)> = Vec::new(); // (chain, folded image)
    let mut all: std::collections::HashMap<Vec<usize>, usize> = std::collections::HashMap::new();
    for (i, st) in steps.iter().enumerate() {
        // Endpoint conditions on single steps.
        if s_src[st.image] != st.from || s_tgt[st.image] != st.to {
            return Ok(false);
        }
        frontier.push((vec![i], st.image));
    }
    all.extend(frontier.iter().cloned());
    for _ in 1..bounds.max_chain_len {
        let mut next = Vec::new();
        for (chain, img) in &frontier {
            let last = &steps[*chain.last().unwrap()];
            for (i, st) in steps.iter().enumerate() {
                if st.from != last.to {
                    continue;
                }
                // Left fold extends on the right: fold(c ++ [s]) =
                // mult(fold(c), f(s)).
                let Some(folded) = compose(*img, st.image) else {
                    return Ok(false);
                };
                let mut chain2 = chain.clone();
                chain2.push(i);
                next.push((chain2, folded));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }

    let value_of = |chain: &[usize]| -> Option<usize> { all.get(chain).copied() };

    for (chain, img) in &all {
        // Endpoints of the whole chain.
        let from = steps[chain[0]].from;
        let to = steps[*chain.last().unwrap()].to;
        if s_src[*img] != from || s_tgt[*img] != to {
            return Ok(false);
        }
        // Structure preservation under every split.
        for cut in 1..chain.len() {
            let (a, b) = chain.split_at(cut);
            let (Some(va), Some(vb)) = (value_of(a), value_of(b)) else {
                continue;
            };
            match compose(va, vb) {
                Some(v) if v == *img => {}
                _ => return Ok(false),
            }
        }
        if with_units {
            let u = unit_tab.as_ref().expect("checked");
            // Units are two-sided identities for the extension.
            if compose(u[from], *img) != Some(*img)
                || compose(*img, u[to]) != Some(*img)
            {
                return Ok(false);
            }
        }
        if directed {
            // The extension must commute with reversal.
            let half = steps.len() / 2;
            let reversed: Vec<usize> = chain
                .iter()
                .rev()
                .map(|&i| if i < half { i + half } else { i - half })
                .collect();
            let Some(vr) = value_of(&reversed) else {
                continue;
            };
            if sym_tab.as_ref().expect("checked")[*img] != vr {
                return Ok(false);
            }
        }
    }
    if with_units {
        let u = unit_tab.as_ref().expect("checked");
        for e in 0..r.base().size() {
            if compose(u[e], u[e]) != Some(u[e]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
