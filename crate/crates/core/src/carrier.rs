//! The two concrete carriers the engine computes in: finite sets and
//! finite-dimensional vector spaces over the rationals.
//!
//! Objects are label lists (element labels for sets, basis labels for vector
//! spaces), maps are element tables or rational matrices, and the module
//! provides the (co)limits everything downstream is built from: composition,
//! coproducts with copairing, pullbacks, and coequalizers. All vector-space
//! arithmetic is exact; there is no floating point anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::linalg::{Mat, Rat};
use crate::{Error, Result};

/// Which carrier an object lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    /// Finite sets and functions.
    Set,
    /// Finite-dimensional rational vector spaces and linear maps.
    Vect,
}

/// A finite set with named elements, or a vector space with a named basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarrierObject {
    kind: Kind,
    labels: Vec<String>,
}

impl CarrierObject {
    pub fn new(kind: Kind, labels: Vec<String>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(CarrierObject { kind, labels })
    }

    pub fn set(labels: &[&str]) -> Result<Self> {
        Self::new(Kind::Set, labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn vect(labels: &[&str]) -> Result<Self> {
        Self::new(Kind::Vect, labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Cardinality (Set) or dimension (Vect).
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    /// Whether `elem` is a well-formed element of this object.
    pub fn contains(&self, elem: &Element) -> bool {
        match (self.kind, elem) {
            (Kind::Set, Element::Point(l)) => self.contains_label(l),
            (Kind::Vect, Element::Vector(coeffs)) => {
                coeffs.keys().all(|l| self.contains_label(l))
            }
            _ => false,
        }
    }

    /// The element given by a single label: the point itself, or the basis
    /// vector it names.
    pub fn generator(&self, label: &str) -> Result<Element> {
        if !self.contains_label(label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        Ok(match self.kind {
            Kind::Set => Element::point(label),
            Kind::Vect => Element::basis(label),
        })
    }

    /// All points (Set) or basis vectors (Vect), in label order.
    pub fn generators(&self) -> Vec<Element> {
        self.labels
            .iter()
            .map(|l| self.generator(l).expect("own label"))
            .collect()
    }

    /// Coordinates of `elem` with respect to this object's labels.
    pub fn coordinates(&self, elem: &Element) -> Result<Vec<Rat>> {
        match elem {
            Element::Point(_) => Err(Error::Malformed(
                "coordinates are only defined for vector elements".into(),
            )),
            Element::Vector(coeffs) => {
                let mut v = vec![Rat::zero(); self.size()];
                for (l, c) in coeffs {
                    let i = self
                        .index_of(l)
                        .ok_or_else(|| Error::UnknownLabel(l.clone()))?;
                    v[i] = c.clone();
                }
                Ok(v)
            }
        }
    }

    pub fn from_coordinates(&self, coords: &[Rat]) -> Element {
        assert_eq!(coords.len(), self.size());
        let mut m = BTreeMap::new();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m.insert(self.labels[i].clone(), c.clone());
            }
        }
        Element::Vector(m)
    }
}

/// An element of a carrier object: a point of a set, or a rational linear
/// combination of basis vectors stored sparsely by label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Element {
    Point(String),
    Vector(BTreeMap<String, Rat>),
}

impl Element {
    pub fn point(label: &str) -> Self {
        Element::Point(label.to_string())
    }

    pub fn zero() -> Self {
        Element::Vector(BTreeMap::new())
    }

    pub fn basis(label: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(label.to_string(), Rat::from_integer(1.into()));
        Element::Vector(m)
    }

    pub fn vector(coeffs: &[(&str, Rat)]) -> Self {
        let mut m = BTreeMap::new();
        for (l, c) in coeffs {
            if !c.is_zero() {
                let e = m.entry(l.to_string()).or_insert_with(Rat::zero);
                *e += c;
            }
        }
        m.retain(|_, c: &mut Rat| !c.is_zero());
        Element::Vector(m)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Element::Vector(m) if m.is_empty())
    }

    /// The support of a vector: the labels with nonzero coefficient.
    pub fn support(&self) -> Vec<&str> {
        match self {
            Element::Point(_) => Vec::new(),
            Element::Vector(m) => m.keys().map(String::as_str).collect(),
        }
    }

    pub fn coeff(&self, label: &str) -> Rat {
        match self {
            Element::Point(_) => Rat::zero(),
            Element::Vector(m) => m.get(label).cloned().unwrap_or_else(Rat::zero),
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Vector(a), Element::Vector(b)) => {
                let mut m = a.clone();
                for (l, c) in b {
                    let e = m.entry(l.clone()).or_insert_with(Rat::zero);
                    *e += c;
                }
                m.retain(|_, c| !c.is_zero());
                Element::Vector(m)
            }
            _ => panic!("add is only defined for vector elements"),
        }
    }

    pub fn scale(&self, s: &Rat) -> Element {
        match self {
            Element::Vector(m) => {
                if s.is_zero() {
                    return Element::zero();
                }
                Element::Vector(m.iter().map(|(l, c)| (l.clone(), c * s)).collect())
            }
            Element::Point(_) => panic!("scale is only defined for vector elements"),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(l) => write!(f, "{l}"),
            Element::Vector(m) if m.is_empty() => write!(f, "0"),
            Element::Vector(m) => {
                let mut first = true;
                for (l, c) in m {
                    if first {
                        if *c == Rat::from_integer(1.into()) {
                            write!(f, "{l}")?;
                        } else if *c == -Rat::from_integer(1.into()) {
                            write!(f, "-{l}")?;
                        } else {
                            write!(f, "{c}*{l}")?;
                        }
                        first = false;
                    } else if *c == Rat::from_integer(1.into()) {
                        write!(f, " + {l}")?;
                    } else if *c == -Rat::from_integer(1.into()) {
                        write!(f, " - {l}")?;
                    } else if c > &Rat::zero() {
                        write!(f, " + {c}*{l}")?;
                    } else {
                        write!(f, " - {}*{l}", -c)?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum MapData {
    /// Per-domain-element codomain index.
    Table(Vec<usize>),
    /// Codomain-dim x domain-dim rational matrix; column `j` is the image of
    /// the `j`-th basis vector.
    Matrix(Mat),
}

/// A map between carrier objects of the same kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarrierMap {
    dom: CarrierObject,
    cod: CarrierObject,
    data: MapData,
}

impl CarrierMap {
    /// A set map given per-element by label assignments.
    pub fn from_assignments(
        dom: CarrierObject,
        cod: CarrierObject,
        assign: &[(&str, &str)],
    ) -> Result<Self> {
        if dom.kind() != Kind::Set || cod.kind() != Kind::Set {
            return Err(Error::KindMismatch);
        }
        let mut table = vec![usize::MAX; dom.size()];
        for (from, to) in assign {
            let i = dom
                .index_of(from)
                .ok_or_else(|| Error::UnknownLabel(from.to_string()))?;
            let j = cod
                .index_of(to)
                .ok_or_else(|| Error::UnknownLabel(to.to_string()))?;
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Malformed(format!(
                "no image assigned for element '{}'",
                dom.labels()[i]
            )));
        }
        Ok(CarrierMap {
            dom,
            cod,
            data: MapData::Table(table),
        })
    }

    pub fn from_table(dom: CarrierObject, cod: CarrierObject, table: Vec<usize>) -> Result<Self> {
        if dom.kind() != Kind::Set || cod.kind() != Kind::Set {
            return Err(Error::KindMismatch);
        }
        if table.len() != dom.size() || table.iter().any(|&j| j >= cod.size()) {
            return Err(Error::Malformed("table shape does not match objects".into()));
        }
        Ok(CarrierMap {
            dom,
            cod,
            data: MapData::Table(table),
        })
    }

    pub fn from_matrix(dom: CarrierObject, cod: CarrierObject, mat: Mat) -> Result<Self> {
        if dom.kind() != Kind::Vect || cod.kind() != Kind::Vect {
            return Err(Error::KindMismatch);
        }
        if mat.rows() != cod.size() || mat.cols() != dom.size() {
            return Err(Error::Malformed(format!(
                "matrix is {}x{} but objects require {}x{}",
                mat.rows(),
                mat.cols(),
                cod.size(),
                dom.size()
            )));
        }
        Ok(CarrierMap {
            dom,
            cod,
            data: MapData::Matrix(mat),
        })
    }

    /// A map defined by its value on every generator, in label order.
    pub fn from_generator_images(
        dom: CarrierObject,
        cod: CarrierObject,
        images: &[Element],
    ) -> Result<Self> {
        if images.len() != dom.size() {
            return Err(Error::Malformed("one image per generator required".into()));
        }
        match dom.kind() {
            Kind::Set => {
                let mut table = Vec::with_capacity(images.len());
                for img in images {
                    match img {
                        Element::Point(l) => table.push(
                            cod.index_of(l)
                                .ok_or_else(|| Error::UnknownLabel(l.clone()))?,
                        ),
                        _ => return Err(Error::KindMismatch),
                    }
                }
                CarrierMap::from_table(dom, cod, table)
            }
            Kind::Vect => {
                let mut mat = Mat::zeros(cod.size(), dom.size());
                for (j, img) in images.iter().enumerate() {
                    for (i, c) in cod.coordinates(img)?.into_iter().enumerate() {
                        mat.set(i, j, c);
                    }
                }
                CarrierMap::from_matrix(dom, cod, mat)
            }
        }
    }

    pub fn identity(obj: &CarrierObject) -> Self {
        match obj.kind() {
            Kind::Set => CarrierMap {
                dom: obj.clone(),
                cod: obj.clone(),
                data: MapData::Table((0..obj.size()).collect()),
            },
            Kind::Vect => CarrierMap {
                dom: obj.clone(),
                cod: obj.clone(),
                data: MapData::Matrix(Mat::identity(obj.size())),
            },
        }
    }

    /// The zero map between vector spaces.
    pub fn zero(dom: &CarrierObject, cod: &CarrierObject) -> Result<Self> {
        if dom.kind() != Kind::Vect || cod.kind() != Kind::Vect {
            return Err(Error::KindMismatch);
        }
        Ok(CarrierMap {
            dom: dom.clone(),
            cod: cod.clone(),
            data: MapData::Matrix(Mat::zeros(cod.size(), dom.size())),
        })
    }

    /// The inclusion of a subobject (labels of `sub` must appear in `sup`).
    pub fn inclusion(sub: &CarrierObject, sup: &CarrierObject) -> Result<Self> {
        if sub.kind() != sup.kind() {
            return Err(Error::KindMismatch);
        }
        let images: Result<Vec<Element>> = sub.labels().iter().map(|l| sup.generator(l)).collect();
        CarrierMap::from_generator_images(sub.clone(), sup.clone(), &images?)
    }

    pub fn dom(&self) -> &CarrierObject {
        &self.dom
    }

    pub fn cod(&self) -> &CarrierObject {
        &self.cod
    }

    pub fn kind(&self) -> Kind {
        self.dom.kind()
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.data {
            MapData::Table(t) => Some(t),
            MapData::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&Mat> {
        match &self.data {
            MapData::Matrix(m) => Some(m),
            MapData::Table(_) => None,
        }
    }

    /// The image of the `j`-th generator of the domain.
    pub fn generator_image(&self, j: usize) -> Element {
        match &self.data {
            MapData::Table(t) => Element::point(&self.cod.labels()[t[j]]),
            MapData::Matrix(m) => self.cod.from_coordinates(&m.column(j)),
        }
    }

    pub fn apply(&self, elem: &Element) -> Result<Element> {
        if !self.dom.contains(elem) {
            return Err(Error::Malformed(format!(
                "element {elem} does not belong to the domain"
            )));
        }
        match (&self.data, elem) {
            (MapData::Table(t), Element::Point(l)) => {
                let i = self.dom.index_of(l).expect("checked");
                Ok(Element::point(&self.cod.labels()[t[i]]))
            }
            (MapData::Matrix(m), Element::Vector(_)) => {
                let coords = self.dom.coordinates(elem)?;
                Ok(self.cod.from_coordinates(&m.apply(&coords)))
            }
            _ => Err(Error::KindMismatch),
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &CarrierMap) -> Result<CarrierMap> {
        if other.cod != self.dom {
            return Err(Error::DomainMismatch);
        }
        let data = match (&self.data, &other.data) {
            (MapData::Table(f), MapData::Table(g)) => {
                MapData::Table(g.iter().map(|&i| f[i]).collect())
            }
            (MapData::Matrix(f), MapData::Matrix(g)) => MapData::Matrix(f.mul(g)),
            _ => return Err(Error::KindMismatch),
        };
        Ok(CarrierMap {
            dom: other.dom.clone(),
            cod: self.cod.clone(),
            data,
        })
    }

    fn check_parallel(&self, other: &CarrierMap) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::NotParallel);
        }
        Ok(())
    }

    /// Exact equality of parallel maps.
    pub fn equal_maps(&self, other: &CarrierMap) -> Result<bool> {
        self.check_parallel(other)?;
        Ok(self.data == other.data)
    }

    /// Bijectivity (Set) or invertibility (Vect).
    pub fn is_isomorphism(&self) -> bool {
        match &self.data {
            MapData::Table(t) => {
                if self.dom.size() != self.cod.size() {
                    return false;
                }
                let mut seen = vec![false; self.cod.size()];
                for &j in t {
                    if seen[j] {
                        return false;
                    }
                    seen[j] = true;
                }
                true
            }
            MapData::Matrix(m) => m.rows() == m.cols() && m.rank() == m.rows(),
        }
    }

    /// First generator on which two parallel maps disagree, if any.
    pub fn first_disagreement(&self, other: &CarrierMap) -> Result<Option<String>> {
        self.check_parallel(other)?;
        for (j, label) in self.dom.labels().iter().enumerate() {
            if self.generator_image(j) != other.generator_image(j) {
                return Ok(Some(label.clone()));
            }
        }
        Ok(None)
    }
}

/// A binary coproduct with its injections. Set labels are tagged `L.`/`R.`
/// so disjointness never depends on the inputs.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub object: CarrierObject,
    pub left: CarrierMap,
    pub right: CarrierMap,
}

pub fn coproduct(a: &CarrierObject, b: &CarrierObject) -> Result<Coproduct> {
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch);
    }
    let mut labels: Vec<String> = a.labels().iter().map(|l| format!("L.{l}")).collect();
    labels.extend(b.labels().iter().map(|l| format!("R.{l}")));
    let object = CarrierObject::new(a.kind(), labels)?;
    let (left, right) = match a.kind() {
        Kind::Set => (
            CarrierMap::from_table(a.clone(), object.clone(), (0..a.size()).collect())?,
            CarrierMap::from_table(
                b.clone(),
                object.clone(),
                (0..b.size()).map(|i| a.size() + i).collect(),
            )?,
        ),
        Kind::Vect => {
            let n = object.size();
            let mut ml = Mat::zeros(n, a.size());
            for j in 0..a.size() {
                ml.set(j, j, Rat::from_integer(1.into()));
            }
            let mut mr = Mat::zeros(n, b.size());
            for j in 0..b.size() {
                mr.set(a.size() + j, j, Rat::from_integer(1.into()));
            }
            (
                CarrierMap::from_matrix(a.clone(), object.clone(), ml)?,
                CarrierMap::from_matrix(b.clone(), object.clone(), mr)?,
            )
        }
    };
    Ok(Coproduct {
        object,
        left,
        right,
    })
}

impl Coproduct {
    /// Splits an element of the coproduct into its left and right parts,
    /// expressed in the summand objects. A set element lands entirely on one
    /// side; a vector splits coordinate-wise.
    pub fn split(&self, elem: &Element) -> Result<(Option<Element>, Option<Element>)> {
        if !self.object.contains(elem) {
            return Err(Error::Malformed(format!(
                "{elem} is not in the coproduct object"
            )));
        }
        let strip = |l: &str| -> Option<(bool, String)> {
            l.strip_prefix("L.")
                .map(|rest| (true, rest.to_string()))
                .or_else(|| l.strip_prefix("R.").map(|rest| (false, rest.to_string())))
        };
        match elem {
            Element::Point(l) => {
                let (is_left, name) = strip(l).expect("coproduct labels are tagged");
                Ok(if is_left {
                    (Some(Element::point(&name)), None)
                } else {
                    (None, Some(Element::point(&name)))
                })
            }
            Element::Vector(m) => {
                let mut left = Element::zero();
                let mut right = Element::zero();
                for (l, c) in m {
                    let (is_left, name) = strip(l).expect("coproduct labels are tagged");
                    let part = Element::vector(&[(name.as_str(), c.clone())]);
                    if is_left {
                        left = left.add(&part);
                    } else {
                        right = right.add(&part);
                    }
                }
                Ok((Some(left), Some(right)))
            }
        }
    }

    /// The unique map out of the coproduct restricting to `f` and `g`.
    pub fn copair(&self, f: &CarrierMap, g: &CarrierMap) -> Result<CarrierMap> {
        if f.dom() != self.left.dom() || g.dom() != self.right.dom() {
            return Err(Error::DomainMismatch);
        }
        if f.cod() != g.cod() {
            return Err(Error::CodomainMismatch);
        }
        let mut images = Vec::with_capacity(self.object.size());
        for j in 0..f.dom().size() {
            images.push(f.generator_image(j));
        }
        for j in 0..g.dom().size() {
            images.push(g.generator_image(j));
        }
        CarrierMap::from_generator_images(self.object.clone(), f.cod().clone(), &images)
    }
}

/// An n-ary coproduct. With a single summand the object is returned as-is;
/// otherwise labels are tagged with the given prefixes.
pub fn coproduct_many(parts: &[(&str, &CarrierObject)]) -> Result<(CarrierObject, Vec<CarrierMap>)> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::Malformed("empty coproduct".into()));
    };
    if parts.len() == 1 {
        let obj = (*first).clone();
        return Ok((obj.clone(), vec![CarrierMap::identity(&obj)]));
    }
    if parts.iter().any(|(_, o)| o.kind() != first.kind()) {
        return Err(Error::KindMismatch);
    }
    let mut labels = Vec::new();
    for (tag, obj) in parts {
        labels.extend(obj.labels().iter().map(|l| format!("{tag}.{l}")));
    }
    let object = CarrierObject::new(first.kind(), labels)?;
    let mut injections = Vec::new();
    let mut offset = 0;
    for (_, obj) in parts {
        let images: Vec<Element> = (offset..offset + obj.size())
            .map(|i| object.generator(&object.labels()[i]).expect("own label"))
            .collect();
        injections.push(CarrierMap::from_generator_images(
            (*obj).clone(),
            object.clone(),
            &images,
        )?);
        offset += obj.size();
    }
    Ok((object, injections))
}

/// A pullback with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: CarrierObject,
    pub proj1: CarrierMap,
    pub proj2: CarrierMap,
}

/// The pullback of `f : A -> C` and `g : B -> C`.
///
/// For sets this is the set of pairs on which `f` and `g` agree; for vector
/// spaces it is the kernel of `f . pi1 - g . pi2` on the direct sum,
/// presented by the canonical kernel basis of the reduced matrix.
pub fn pullback(f: &CarrierMap, g: &CarrierMap) -> Result<Pullback> {
    if f.kind() != g.kind() {
        return Err(Error::KindMismatch);
    }
    if f.cod() != g.cod() {
        return Err(Error::CodomainMismatch);
    }
    let a = f.dom();
    let b = g.dom();
    match f.kind() {
        Kind::Set => {
            let mut labels = Vec::new();
            let mut t1 = Vec::new();
            let mut t2 = Vec::new();
            let ft = f.table().expect("set map");
            let gt = g.table().expect("set map");
            for (i, la) in a.labels().iter().enumerate() {
                for (j, lb) in b.labels().iter().enumerate() {
                    if ft[i] == gt[j] {
                        labels.push(format!("({la},{lb})"));
                        t1.push(i);
                        t2.push(j);
                    }
                }
            }
            let object = CarrierObject::new(Kind::Set, labels)?;
            Ok(Pullback {
                proj1: CarrierMap::from_table(object.clone(), a.clone(), t1)?,
                proj2: CarrierMap::from_table(object.clone(), b.clone(), t2)?,
                object,
            })
        }
        Kind::Vect => {
            let fm = f.matrix().expect("vect map");
            let gm = g.matrix().expect("vect map");
            let neg = Mat::from_fn(gm.rows(), gm.cols(), |r, c| -gm.get(r, c).clone());
            let kernel = fm.hcat(&neg).kernel_basis();
            let labels: Vec<String> = (0..kernel.len()).map(|i| format!("p{i}")).collect();
            let object = CarrierObject::new(Kind::Vect, labels)?;
            let mut m1 = Mat::zeros(a.size(), kernel.len());
            let mut m2 = Mat::zeros(b.size(), kernel.len());
            for (j, v) in kernel.iter().enumerate() {
                for i in 0..a.size() {
                    m1.set(i, j, v[i].clone());
                }
                for i in 0..b.size() {
                    m2.set(i, j, v[a.size() + i].clone());
                }
            }
            Ok(Pullback {
                proj1: CarrierMap::from_matrix(object.clone(), a.clone(), m1)?,
                proj2: CarrierMap::from_matrix(object.clone(), b.clone(), m2)?,
                object,
            })
        }
    }
}

/// A coequalizer: the quotient object together with the projection.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub object: CarrierObject,
    pub projection: CarrierMap,
}

/// The coequalizer of a parallel pair `f, g : A -> B`.
///
/// Sets: the quotient of `B` by the equivalence generated by `f(x) ~ g(x)`,
/// with the earliest label of each class as canonical representative.
/// Vector spaces: `B / im(f - g)`, presented on the non-pivot columns of the
/// reduced relation matrix.
pub fn coequalizer(f: &CarrierMap, g: &CarrierMap) -> Result<Coequalizer> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(Error::NotParallel);
    }
    let b = f.cod();
    match f.kind() {
        Kind::Set => {
            let ft = f.table().expect("set map");
            let gt = g.table().expect("set map");
            let pairs: Vec<(usize, usize)> = ft.iter().copied().zip(gt.iter().copied()).collect();
            let class = merge_classes(b.size(), &pairs);
            // Representative = least index in the class.
            let mut reps: Vec<usize> = Vec::new();
            let mut rep_index = vec![usize::MAX; b.size()];
            for i in 0..b.size() {
                let c = class[i];
                if rep_index[c] == usize::MAX {
                    rep_index[c] = reps.len();
                    reps.push(c);
                }
            }
            let labels: Vec<String> = reps.iter().map(|&r| b.labels()[r].clone()).collect();
            let object = CarrierObject::new(Kind::Set, labels)?;
            let table: Vec<usize> = (0..b.size()).map(|i| rep_index[class[i]]).collect();
            Ok(Coequalizer {
                projection: CarrierMap::from_table(b.clone(), object.clone(), table)?,
                object,
            })
        }
        Kind::Vect => {
            let d = f
                .matrix()
                .expect("vect map")
                .sub(g.matrix().expect("vect map"));
            quotient_by_columns(b, &d)
        }
    }
}

/// The quotient of `b` by the span of the columns of `rel` (a `|b| x k`
/// matrix of relation vectors).
pub fn quotient_by_columns(b: &CarrierObject, rel: &Mat) -> Result<Coequalizer> {
    assert_eq!(rel.rows(), b.size());
    let (r, pivots) = rel.transpose().rref();
    let free: Vec<usize> = (0..b.size()).filter(|c| !pivots.contains(c)).collect();
    let labels: Vec<String> = free.iter().map(|&j| b.labels()[j].clone()).collect();
    let object = CarrierObject::new(Kind::Vect, labels)?;
    let mut q = Mat::zeros(object.size(), b.size());
    for (pos, &j) in free.iter().enumerate() {
        q.set(pos, j, Rat::from_integer(1.into()));
    }
    // Each reduced relation row rewrites its pivot basis vector as minus the
    // combination of free columns.
    for (i, &p) in pivots.iter().enumerate() {
        for (pos, &j) in free.iter().enumerate() {
            q.set(pos, p, -r.get(i, j).clone());
        }
    }
    Ok(Coequalizer {
        projection: CarrierMap::from_matrix(b.clone(), object.clone(), q)?,
        object,
    })
}

/// Union-find style merge: returns, per index, the least index of its class.
fn merge_classes(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut class: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(x, y) in pairs {
            let (cx, cy) = (class[x], class[y]);
            if cx != cy {
                let m = cx.min(cy);
                for c in class.iter_mut() {
                    if *c == cx || *c == cy {
                        *c = m;
                    }
                }
                changed = true;
            }
        }
    }
    class
}

impl Coequalizer {
    /// Factors `h` through the projection when `h` coequalizes the defining
    /// pair; returns `None` when it does not.
    pub fn factor(&self, h: &CarrierMap) -> Result<Option<CarrierMap>> {
        if h.dom() != self.projection.dom() {
            return Err(Error::DomainMismatch);
        }
        match (&self.projection.data, &h.data) {
            (MapData::Table(q), MapData::Table(ht)) => {
                let mut table = vec![usize::MAX; self.object.size()];
                for i in 0..q.len() {
                    let c = q[i];
                    if table[c] == usize::MAX {
                        table[c] = ht[i];
                    } else if table[c] != ht[i] {
                        return Ok(None);
                    }
                }
                Ok(Some(CarrierMap::from_table(
                    self.object.clone(),
                    h.cod().clone(),
                    table,
                )?))
            }
            (MapData::Matrix(q), MapData::Matrix(hm)) => {
                // Solve x . q = h, i.e. q^T x^T = h^T.
                let Some(xt) = q.transpose().solve(&hm.transpose()) else {
                    return Ok(None);
                };
                let x = xt.transpose();
                if x.mul(q) != *hm {
                    return Ok(None);
                }
                Ok(Some(CarrierMap::from_matrix(
                    self.object.clone(),
                    h.cod().clone(),
                    x,
                )?))
            }
            _ => Err(Error::KindMismatch),
        }
    }
}
