//! The two concrete base categories: exact-rational vector spaces with
//! chosen bases (`VectQ`) and finite sets (`FinSet`).
//!
//! Objects carry an ordered list of distinct basis labels; morphisms carry an
//! exact-rational matrix or a total function on basis elements. Tensor,
//! coproduct, coequalizer, Σ-coinvariants and internal hom are implemented
//! for both categories. All values are immutable after construction and all
//! operations are pure.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec, SpanReducer};
use crate::perm::{self, Perm};
use crate::rational::Q;

/// Base category tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cat {
    VectQ,
    FinSet,
}

#[derive(Debug, PartialEq, Eq)]
struct ObjInner {
    cat: Cat,
    basis: Vec<String>,
}

/// An object of one of the base categories: a based ℚ-vector space or a
/// finite set. `dim` is the basis length (cardinality for `FinSet`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obj(Arc<ObjInner>);

impl Obj {
    pub fn new(cat: Cat, basis: Vec<String>) -> Result<Obj> {
        let mut seen = alloc::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.clone()) {
                return Err(Error::Invalid(format!("duplicate basis label {b:?}")));
            }
        }
        Ok(Obj(Arc::new(ObjInner { cat, basis })))
    }

    /// ℚ-vector space with anonymous labels `x0, x1, …`.
    pub fn vect(dim: usize) -> Obj {
        Obj::new(Cat::VectQ, (0..dim).map(|i| format!("x{i}")).collect()).unwrap()
    }

    pub fn finset(card: usize) -> Obj {
        Obj::new(Cat::FinSet, (0..card).map(|i| format!("s{i}")).collect()).unwrap()
    }

    /// The monoidal unit: a fresh one-element basis `"1"`.
    pub fn unit(cat: Cat) -> Obj {
        Obj::new(cat, vec![String::from("1")]).unwrap()
    }

    /// The initial object: dimension 0 / empty set.
    pub fn initial(cat: Cat) -> Obj {
        Obj::new(cat, Vec::new()).unwrap()
    }

    pub fn cat(&self) -> Cat {
        self.0.cat
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.0.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.basis[i]
    }
}

/// An element of an object: a vector (`VectQ`) or a point (`FinSet`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elem {
    Vec(SparseVec),
    Pt(usize),
}

impl Elem {
    pub fn basis(cat: Cat, i: usize) -> Elem {
        match cat {
            Cat::VectQ => Elem::Vec(SparseVec::unit(i)),
            Cat::FinSet => Elem::Pt(i),
        }
    }
}

/// Morphism data: an exact matrix or a total function on basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorData {
    Matrix(SparseMat),
    Func(Vec<usize>),
}

/// A morphism of the base category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    dom: Obj,
    cod: Obj,
    data: MorData,
}

impl Morphism {
    pub fn from_matrix(dom: Obj, cod: Obj, m: SparseMat) -> Result<Morphism> {
        if dom.cat() != Cat::VectQ || cod.cat() != Cat::VectQ {
            return Err(Error::CategoryMismatch);
        }
        if m.ncols() != dom.dim() || m.nrows != cod.dim() {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected {}x{}",
                m.nrows,
                m.ncols(),
                cod.dim(),
                dom.dim()
            )));
        }
        for col in &m.cols {
            if let Some((lead, _)) = col.lead() {
                if lead >= cod.dim() {
                    return Err(Error::Shape(format!("row index {lead} out of range")));
                }
            }
        }
        Ok(Morphism { dom, cod, data: MorData::Matrix(m) })
    }

    pub fn from_func(dom: Obj, cod: Obj, f: Vec<usize>) -> Result<Morphism> {
        if dom.cat() != Cat::FinSet || cod.cat() != Cat::FinSet {
            return Err(Error::CategoryMismatch);
        }
        if f.len() != dom.dim() {
            return Err(Error::Shape(format!(
                "function table has {} entries, domain has {}",
                f.len(),
                dom.dim()
            )));
        }
        if f.iter().any(|&y| y >= cod.dim()) {
            return Err(Error::Shape(String::from("function value out of codomain")));
        }
        Ok(Morphism { dom, cod, data: MorData::Func(f) })
    }

    /// Morphism sending basis element `i` to basis element `map[i]`, in
    /// either category.
    pub fn from_basis_map(dom: Obj, cod: Obj, map: Vec<usize>) -> Result<Morphism> {
        match dom.cat() {
            Cat::FinSet => Morphism::from_func(dom, cod, map),
            Cat::VectQ => {
                let m = SparseMat::from_cols(
                    cod.dim(),
                    map.iter().map(|&i| SparseVec::unit(i)).collect(),
                );
                Morphism::from_matrix(dom, cod, m)
            }
        }
    }

    pub fn identity(x: &Obj) -> Morphism {
        match x.cat() {
            Cat::VectQ => Morphism {
                dom: x.clone(),
                cod: x.clone(),
                data: MorData::Matrix(SparseMat::identity(x.dim())),
            },
            Cat::FinSet => Morphism {
                dom: x.clone(),
                cod: x.clone(),
                data: MorData::Func((0..x.dim()).collect()),
            },
        }
    }

    /// The zero morphism (`VectQ` only).
    pub fn zero(dom: Obj, cod: Obj) -> Result<Morphism> {
        if dom.cat() != Cat::VectQ || cod.cat() != Cat::VectQ {
            return Err(Error::CategoryMismatch);
        }
        let m = SparseMat::zero(cod.dim(), dom.dim());
        Ok(Morphism { dom, cod, data: MorData::Matrix(m) })
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn cat(&self) -> Cat {
        self.dom.cat()
    }

    pub fn matrix(&self) -> Option<&SparseMat> {
        match &self.data {
            MorData::Matrix(m) => Some(m),
            MorData::Func(_) => None,
        }
    }

    pub fn func(&self) -> Option<&[usize]> {
        match &self.data {
            MorData::Func(f) => Some(f),
            MorData::Matrix(_) => None,
        }
    }

    pub fn apply_basis(&self, i: usize) -> Elem {
        match &self.data {
            MorData::Matrix(m) => Elem::Vec(m.col(i).clone()),
            MorData::Func(f) => Elem::Pt(f[i]),
        }
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        match (&self.data, e) {
            (MorData::Matrix(m), Elem::Vec(v)) => Elem::Vec(m.apply(v)),
            (MorData::Func(f), Elem::Pt(p)) => Elem::Pt(f[*p]),
            _ => panic!("element/morphism category mismatch"),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.cod != self.dom {
            return Err(Error::Shape(String::from("composition domain mismatch")));
        }
        let data = match (&self.data, &other.data) {
            (MorData::Matrix(a), MorData::Matrix(b)) => MorData::Matrix(a.compose(b)),
            (MorData::Func(a), MorData::Func(b)) => {
                MorData::Func(b.iter().map(|&i| a[i]).collect())
            }
            _ => return Err(Error::CategoryMismatch),
        };
        Ok(Morphism { dom: other.dom.clone(), cod: self.cod.clone(), data })
    }

    /// Bifunctorial tensor of morphisms.
    pub fn tensor(&self, other: &Morphism) -> Result<Morphism> {
        if self.cat() != other.cat() {
            return Err(Error::CategoryMismatch);
        }
        let dom = tensor(&self.dom, &other.dom)?;
        let cod = tensor(&self.cod, &other.cod)?;
        let data = match (&self.data, &other.data) {
            (MorData::Matrix(a), MorData::Matrix(b)) => MorData::Matrix(a.kron(b)),
            (MorData::Func(a), MorData::Func(b)) => {
                let bd = other.dom.dim();
                let bc = other.cod.dim();
                let mut f = Vec::with_capacity(self.dom.dim() * bd);
                for i in 0..self.dom.dim() {
                    for j in 0..bd {
                        f.push(a[i] * bc + b[j]);
                    }
                }
                MorData::Func(f)
            }
            _ => unreachable!(),
        };
        Ok(Morphism { dom, cod, data })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        match (&self.data, &other.data) {
            (MorData::Matrix(a), MorData::Matrix(b))
                if self.dom == other.dom && self.cod == other.cod =>
            {
                Ok(Morphism {
                    dom: self.dom.clone(),
                    cod: self.cod.clone(),
                    data: MorData::Matrix(a.add(b)),
                })
            }
            _ => Err(Error::Shape(String::from("sum needs parallel VectQ morphisms"))),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if self.dom.dim() != self.cod.dim() {
            return None;
        }
        match &self.data {
            MorData::Matrix(m) => m.inverse().map(|inv| Morphism {
                dom: self.cod.clone(),
                cod: self.dom.clone(),
                data: MorData::Matrix(inv),
            }),
            MorData::Func(f) => {
                if !perm::is_permutation(f) {
                    return None;
                }
                Some(Morphism {
                    dom: self.cod.clone(),
                    cod: self.dom.clone(),
                    data: MorData::Func(perm::inverse(f)),
                })
            }
        }
    }
}

/// Mixed-radix index of a tuple over factor dimensions (left factor most
/// significant, matching the lexicographic Kronecker convention).
pub fn tuple_index(tuple: &[usize], dims: &[usize]) -> usize {
    debug_assert_eq!(tuple.len(), dims.len());
    let mut idx = 0;
    for (t, d) in tuple.iter().zip(dims) {
        debug_assert!(t < d);
        idx = idx * d + t;
    }
    idx
}

pub fn index_tuple(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, d) in out.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

/// Iterate all tuples over the given dimensions in lexicographic order.
pub fn tuples(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    let empty_factor = dims.iter().any(|&d| d == 0);
    (0..if empty_factor { 0 } else { total }).map(move |i| index_tuple(i, dims))
}

fn tensor_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Monoidal product of objects: Kronecker basis in lexicographic order for
/// `VectQ`, cartesian product for `FinSet`.
pub fn tensor(x: &Obj, y: &Obj) -> Result<Obj> {
    if x.cat() != y.cat() {
        return Err(Error::CategoryMismatch);
    }
    let mut basis = Vec::with_capacity(x.dim() * y.dim());
    for a in x.basis() {
        for b in y.basis() {
            basis.push(tensor_label(a, b));
        }
    }
    Obj::new(x.cat(), basis)
}

/// n-fold tensor power; the empty product is the unit object.
pub fn tensor_many(cat: Cat, factors: &[Obj]) -> Result<Obj> {
    let mut acc = Obj::unit(cat);
    if factors.is_empty() {
        return Ok(acc);
    }
    acc = factors[0].clone();
    for f in &factors[1..] {
        acc = tensor(&acc, f)?;
    }
    Ok(acc)
}

/// The symmetry `X ⊗ Y → Y ⊗ X`.
pub fn swap(x: &Obj, y: &Obj) -> Result<Morphism> {
    let dom = tensor(x, y)?;
    let cod = tensor(y, x)?;
    let (dx, dy) = (x.dim(), y.dim());
    let mut map = Vec::with_capacity(dx * dy);
    for i in 0..dx {
        for j in 0..dy {
            let _ = i;
            map.push(j * dx + i);
        }
    }
    Morphism::from_basis_map(dom, cod, map)
}

/// Coherence morphism permuting tensor factors: factor at source position
/// `b` moves to target position `p[b]`.
pub fn permute_factors(factors: &[Obj], p: &Perm) -> Result<Morphism> {
    debug_assert_eq!(factors.len(), p.len());
    let cat = factors.first().map_or(Cat::VectQ, Obj::cat);
    let dom = tensor_many(cat, factors)?;
    let inv = perm::inverse(p);
    let permuted: Vec<Obj> = inv.iter().map(|&b| factors[b].clone()).collect();
    let cod = tensor_many(cat, &permuted)?;
    let dims: Vec<usize> = factors.iter().map(Obj::dim).collect();
    let cod_dims: Vec<usize> = permuted.iter().map(Obj::dim).collect();
    let mut map = Vec::with_capacity(dom.dim());
    for t in tuples(&dims) {
        let mut u = vec![0usize; t.len()];
        for (b, &v) in t.iter().enumerate() {
            u[p[b]] = v;
        }
        map.push(tuple_index(&u, &cod_dims));
    }
    Morphism::from_basis_map(dom, cod, map)
}

/// Coproduct with injections: direct sum with block injections (`VectQ`),
/// tagged disjoint union (`FinSet`). The empty coproduct is the initial
/// object.
pub fn coproduct(cat: Cat, parts: &[Obj]) -> Result<(Obj, Vec<Morphism>)> {
    let mut basis = Vec::new();
    for (t, p) in parts.iter().enumerate() {
        if p.cat() != cat {
            return Err(Error::CategoryMismatch);
        }
        for b in p.basis() {
            basis.push(format!("{t}:{b}"));
        }
    }
    let total = Obj::new(cat, basis)?;
    let mut injections = Vec::with_capacity(parts.len());
    let mut offset = 0usize;
    for p in parts {
        let map: Vec<usize> = (0..p.dim()).map(|i| offset + i).collect();
        injections.push(Morphism::from_basis_map(p.clone(), total.clone(), map)?);
        offset += p.dim();
    }
    Ok((total, injections))
}

/// Universal property of the coproduct: the unique map out of the coproduct
/// restricting to each `fs[i]` along the injections.
pub fn cotuple(total: &Obj, parts: &[Obj], fs: &[Morphism], target: &Obj) -> Result<Morphism> {
    if fs.len() != parts.len() {
        return Err(Error::Shape(String::from("cotuple arity mismatch")));
    }
    for (p, f) in parts.iter().zip(fs) {
        if f.dom() != p || f.cod() != target {
            return Err(Error::Shape(String::from("cotuple leg mismatch")));
        }
    }
    match total.cat() {
        Cat::FinSet => {
            let mut table = Vec::with_capacity(total.dim());
            for f in fs {
                table.extend_from_slice(f.func().unwrap());
            }
            Morphism::from_func(total.clone(), target.clone(), table)
        }
        Cat::VectQ => {
            let mut cols = Vec::with_capacity(total.dim());
            for f in fs {
                cols.extend(f.matrix().unwrap().cols.iter().cloned());
            }
            Morphism::from_matrix(
                total.clone(),
                target.clone(),
                SparseMat::from_cols(target.dim(), cols),
            )
        }
    }
}

/// Deterministic union-find with least-element representatives.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        // Least element stays the root, so representatives are canonical.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
    }

    /// Map every element to its class index; classes ordered by least member.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut reps = Vec::new();
        let mut class_of = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            if r == x {
                class_of[x] = reps.len();
                reps.push(x);
            } else {
                class_of[x] = class_of[r];
            }
        }
        (reps, class_of)
    }
}

/// Quotient data returned by [`coequalizer`] and [`coinvariants`].
#[derive(Debug, Clone)]
pub struct QuotientObj {
    pub obj: Obj,
    pub projection: Morphism,
    /// For each quotient basis element, a canonical representative index in
    /// the ambient object.
    pub reps: Vec<usize>,
}

/// Quotient of a `VectQ` object by an accumulated relation span.
pub fn quotient_of(ambient: &Obj, red: SpanReducer) -> Result<QuotientObj> {
    quotient_vectq(ambient, red)
}

fn quotient_vectq(ambient: &Obj, red: SpanReducer) -> Result<QuotientObj> {
    let q = red.into_quotient();
    let labels: Vec<String> = q.basis.iter().map(|&i| ambient.label(i).into()).collect();
    let obj = Obj::new(Cat::VectQ, labels)?;
    let projection = Morphism::from_matrix(ambient.clone(), obj.clone(), q.projection)?;
    Ok(QuotientObj { obj, projection, reps: q.basis })
}

fn quotient_finset(ambient: &Obj, mut uf: UnionFind) -> Result<QuotientObj> {
    let (reps, class_of) = uf.classes();
    let labels: Vec<String> = reps.iter().map(|&i| ambient.label(i).into()).collect();
    let obj = Obj::new(Cat::FinSet, labels)?;
    let projection = Morphism::from_func(ambient.clone(), obj.clone(), class_of)?;
    Ok(QuotientObj { obj, projection, reps })
}

/// Coequalizer of a parallel pair. `VectQ`: codomain modulo the column space
/// of `f - g`, by exact row reduction. `FinSet`: quotient by the equivalence
/// relation generated by `f(x) ~ g(x)`, by union-find.
pub fn coequalizer(f: &Morphism, g: &Morphism) -> Result<QuotientObj> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(Error::NotParallel);
    }
    let y = f.cod();
    match y.cat() {
        Cat::VectQ => {
            let mut red = SpanReducer::new(y.dim());
            let (mf, mg) = (f.matrix().unwrap(), g.matrix().unwrap());
            for j in 0..f.dom().dim() {
                red.insert(mf.col(j).sub(mg.col(j)));
            }
            quotient_vectq(y, red)
        }
        Cat::FinSet => {
            let mut uf = UnionFind::new(y.dim());
            let (ff, fg) = (f.func().unwrap(), g.func().unwrap());
            for x in 0..f.dom().dim() {
                uf.union(ff[x], fg[x]);
            }
            quotient_finset(y, uf)
        }
    }
}

impl QuotientObj {
    /// Factor `h` through the projection: the unique `u` with
    /// `u ∘ projection = h`, which exists iff `h` kills the quotient kernel.
    pub fn factor(&self, h: &Morphism) -> Result<Morphism> {
        if h.dom() != self.projection.dom() {
            return Err(Error::Shape(String::from("factorization domain mismatch")));
        }
        let u = match h.cat() {
            Cat::VectQ => {
                let cols = self
                    .reps
                    .iter()
                    .map(|&r| h.matrix().unwrap().col(r).clone())
                    .collect();
                Morphism::from_matrix(
                    self.obj.clone(),
                    h.cod().clone(),
                    SparseMat::from_cols(h.cod().dim(), cols),
                )?
            }
            Cat::FinSet => {
                let table = self.reps.iter().map(|&r| h.func().unwrap()[r]).collect();
                Morphism::from_func(self.obj.clone(), h.cod().clone(), table)?
            }
        };
        if u.compose(&self.projection)? != *h {
            return Err(Error::DoesNotFactor);
        }
        Ok(u)
    }
}

/// An object with a Σ_n-action stored through the adjacent transpositions
/// `s_0, …, s_{n-2}` (`s_i` swaps inputs `i` and `i+1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymObj {
    pub obj: Obj,
    pub degree: usize,
    gens: Vec<Morphism>,
}

impl SymObj {
    /// Validates invertibility and the Coxeter relations exactly.
    pub fn new(obj: Obj, degree: usize, gens: Vec<Morphism>) -> Result<SymObj> {
        if gens.len() != degree.saturating_sub(1) {
            return Err(Error::BadAction(format!(
                "degree {degree} needs {} generators, got {}",
                degree.saturating_sub(1),
                gens.len()
            )));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.dom() != &obj || g.cod() != &obj {
                return Err(Error::BadAction(format!("generator {i} is not an endomorphism")));
            }
        }
        let id = Morphism::identity(&obj);
        for (i, g) in gens.iter().enumerate() {
            if g.compose(g)? != id {
                return Err(Error::BadAction(format!("s_{i}^2 != id")));
            }
        }
        for i in 0..gens.len().saturating_sub(1) {
            let a = &gens[i];
            let b = &gens[i + 1];
            let aba = a.compose(&b.compose(a)?)?;
            let bab = b.compose(&a.compose(b)?)?;
            if aba != bab {
                return Err(Error::BadAction(format!("braid relation fails at {i}")));
            }
        }
        for i in 0..gens.len() {
            for j in i + 2..gens.len() {
                let ab = gens[i].compose(&gens[j])?;
                let ba = gens[j].compose(&gens[i])?;
                if ab != ba {
                    return Err(Error::BadAction(format!("s_{i} and s_{j} do not commute")));
                }
            }
        }
        Ok(SymObj { obj, degree, gens })
    }

    pub fn trivial(obj: Obj, degree: usize) -> SymObj {
        let gens = (0..degree.saturating_sub(1))
            .map(|_| Morphism::identity(&obj))
            .collect();
        SymObj { obj: obj.clone(), degree, gens }
    }

    pub fn gens(&self) -> &[Morphism] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Morphism {
        &self.gens[i]
    }

    /// The action of an arbitrary permutation, via its adjacent word.
    pub fn action(&self, p: &Perm) -> Result<Morphism> {
        debug_assert_eq!(p.len(), self.degree);
        let mut acc = Morphism::identity(&self.obj);
        // action is a homomorphism: apply the rightmost factor first.
        for &i in perm::adjacent_word(p).iter().rev() {
            acc = self.gens[i].compose(&acc)?;
        }
        Ok(acc)
    }

    /// Apply the action of `p` to an element without materializing the full
    /// matrix.
    pub fn apply_perm(&self, p: &Perm, e: &Elem) -> Elem {
        let mut acc = e.clone();
        for &i in perm::adjacent_word(p).iter().rev() {
            acc = self.gens[i].apply(&acc);
        }
        acc
    }
}

/// Σ-coinvariants of a [`SymObj`]: quotient by `span{v - s_i·v}` (`VectQ`)
/// or the orbit set (`FinSet`).
pub fn coinvariants(x: &SymObj) -> Result<QuotientObj> {
    match x.obj.cat() {
        Cat::VectQ => {
            let mut red = SpanReducer::new(x.obj.dim());
            for g in x.gens() {
                let m = g.matrix().unwrap();
                for v in 0..x.obj.dim() {
                    red.insert(SparseVec::unit(v).sub(m.col(v)));
                }
            }
            quotient_vectq(&x.obj, red)
        }
        Cat::FinSet => {
            let mut uf = UnionFind::new(x.obj.dim());
            for g in x.gens() {
                for (v, &gv) in g.func().unwrap().iter().enumerate() {
                    uf.union(v, gv);
                }
            }
            quotient_finset(&x.obj, uf)
        }
    }
}

/// Internal hom object. `VectQ`: matrix space with elementary-matrix basis,
/// index `(x, y) ↦ x·dim Y + y`. `FinSet`: the set of all functions
/// `X → Y` in lexicographic order of value tables.
pub fn internal_hom(x: &Obj, y: &Obj) -> Result<Obj> {
    if x.cat() != y.cat() {
        return Err(Error::CategoryMismatch);
    }
    match x.cat() {
        Cat::VectQ => {
            let mut basis = Vec::with_capacity(x.dim() * y.dim());
            for a in x.basis() {
                for b in y.basis() {
                    basis.push(format!("[{a}->{b}]"));
                }
            }
            Obj::new(Cat::VectQ, basis)
        }
        Cat::FinSet => {
            let card = y.dim().checked_pow(x.dim() as u32).ok_or_else(|| Error::Shape(
                String::from("function set too large"),
            ))?;
            let dims = vec![y.dim(); x.dim()];
            let mut basis = Vec::with_capacity(card);
            if x.dim() == 0 {
                basis.push(String::from("[]"));
            } else {
                for t in tuples(&dims) {
                    let parts: Vec<String> =
                        t.iter().map(|&v| String::from(y.label(v))).collect();
                    basis.push(format!("[{}]", parts.join(",")));
                }
            }
            Obj::new(Cat::FinSet, basis)
        }
    }
}

/// Evaluation `Hom(X,Y) ⊗ X → Y`.
pub fn eval_morphism(x: &Obj, y: &Obj) -> Result<Morphism> {
    let hom = internal_hom(x, y)?;
    let dom = tensor(&hom, x)?;
    match x.cat() {
        Cat::VectQ => {
            let mut cols = Vec::with_capacity(dom.dim());
            for h in 0..hom.dim() {
                let (hx, hy) = (h / y.dim(), h % y.dim());
                for a in 0..x.dim() {
                    cols.push(if a == hx {
                        SparseVec::unit(hy)
                    } else {
                        SparseVec::zero()
                    });
                }
            }
            Morphism::from_matrix(dom, y.clone(), SparseMat::from_cols(y.dim(), cols))
        }
        Cat::FinSet => {
            let dims = vec![y.dim(); x.dim()];
            let mut table = Vec::with_capacity(dom.dim());
            for h in 0..hom.dim() {
                let t = index_tuple(h, &dims);
                for a in 0..x.dim() {
                    table.push(t[a]);
                }
            }
            Morphism::from_func(dom, y.clone(), table)
        }
    }
}

/// Tensor-hom adjunction, forward direction: `f : Z ⊗ X → Y` to
/// `curry(f) : Z → Hom(X, Y)` (`VectQ` only; `FinSet` currying is handled
/// pointwise by [`eval_morphism`] tables).
pub fn curry(f: &Morphism, z: &Obj, x: &Obj) -> Result<Morphism> {
    let y = f.cod();
    let hom = internal_hom(x, y)?;
    match f.cat() {
        Cat::VectQ => {
            let m = f.matrix().unwrap();
            let mut cols = Vec::with_capacity(z.dim());
            for zi in 0..z.dim() {
                let mut entries = Vec::new();
                for xi in 0..x.dim() {
                    let col = m.col(zi * x.dim() + xi);
                    for (yi, c) in &col.entries {
                        entries.push((xi * y.dim() + yi, c.clone()));
                    }
                }
                cols.push(SparseVec::from_entries(entries));
            }
            Morphism::from_matrix(z.clone(), hom, SparseMat::from_cols(x.dim() * y.dim(), cols))
        }
        Cat::FinSet => {
            let table = f.func().unwrap();
            let mut out = Vec::with_capacity(z.dim());
            for zi in 0..z.dim() {
                let mut idx = 0usize;
                for xi in 0..x.dim() {
                    idx = idx * y.dim() + table[zi * x.dim() + xi];
                }
                out.push(idx);
            }
            Morphism::from_func(z.clone(), hom, out)
        }
    }
}

/// Inverse of [`curry`].
pub fn uncurry(g: &Morphism, x: &Obj, y: &Obj) -> Result<Morphism> {
    let ev = eval_morphism(x, y)?;
    ev.compose(&g.tensor(&Morphism::identity(x))?)
}

/// Scalar multiplication embedding: the coherence `I ⊗ X ≅ X`.
pub fn left_unitor(x: &Obj) -> Result<Morphism> {
    let i = Obj::unit(x.cat());
    let dom = tensor(&i, x)?;
    Morphism::from_basis_map(dom, x.clone(), (0..x.dim()).collect())
}

/// The coherence `X ⊗ I ≅ X`.
pub fn right_unitor(x: &Obj) -> Result<Morphism> {
    let i = Obj::unit(x.cat());
    let dom = tensor(x, &i)?;
    Morphism::from_basis_map(dom, x.clone(), (0..x.dim()).collect())
}

/// Express a `VectQ` element in coordinates.
pub fn elem_vec(e: &Elem) -> &SparseVec {
    match e {
        Elem::Vec(v) => v,
        Elem::Pt(_) => panic!("expected a VectQ element"),
    }
}

/// Build a morphism column-by-column from basis-element images.
pub fn morphism_from_images(dom: &Obj, cod: &Obj, images: Vec<Elem>) -> Result<Morphism> {
    match dom.cat() {
        Cat::VectQ => {
            let cols = images
                .into_iter()
                .map(|e| match e {
                    Elem::Vec(v) => v,
                    Elem::Pt(_) => panic!("category mismatch"),
                })
                .collect();
            Morphism::from_matrix(dom.clone(), cod.clone(), SparseMat::from_cols(cod.dim(), cols))
        }
        Cat::FinSet => {
            let table = images
                .into_iter()
                .map(|e| match e {
                    Elem::Pt(p) => p,
                    Elem::Vec(_) => panic!("category mismatch"),
                })
                .collect();
            Morphism::from_func(dom.clone(), cod.clone(), table)
        }
    }
}

/// A linear map given by where it sends each basis element, as a dense list
/// of sparse images (used by tests and the JSON layer).
pub fn matrix_from_dense_rows(dom: &Obj, cod: &Obj, rows: &[Vec<Q>]) -> Result<Morphism> {
    Morphism::from_matrix(dom.clone(), cod.clone(), SparseMat::from_rows(rows))
}

pub fn q_entry(m: &Morphism, row: usize, col: usize) -> Q {
    m.matrix()
        .and_then(|mat| mat.col(col).get(row).cloned())
        .unwrap_or_else(Q::zero)
}

pub fn scalar_times(m: &Morphism, c: &Q) -> Morphism {
    let mat = m.matrix().expect("VectQ morphism");
    let cols = mat.cols.iter().map(|v| v.scale(c)).collect();
    Morphism::from_matrix(
        m.dom().clone(),
        m.cod().clone(),
        SparseMat::from_cols(mat.nrows, cols),
    )
    .unwrap()
}

pub fn is_one(q: &Q) -> bool {
    q.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    #[test]
    fn tensor_dims_multiply_and_unit_is_coherent() {
        let x = Obj::vect(2);
        let y = Obj::vect(3);
        assert_eq!(tensor(&x, &y).unwrap().dim(), 6);
        let r = right_unitor(&x).unwrap();
        assert!(r.is_invertible());
    }

    #[test]
    fn mixed_category_tensor_fails() {
        let x = Obj::vect(2);
        let y = Obj::finset(2);
        assert_eq!(tensor(&x, &y).unwrap_err(), Error::CategoryMismatch);
    }

    #[test]
    fn swap_squares_to_identity_on_q2_q2() {
        let x = Obj::vect(2);
        let s = swap(&x, &x).unwrap();
        let id = Morphism::identity(s.dom());
        assert_eq!(s.compose(&s).unwrap(), id);
        // Brute force on the 4-element Kronecker basis: (i,j) -> (j,i).
        for i in 0..2 {
            for j in 0..2 {
                let e = Elem::basis(Cat::VectQ, i * 2 + j);
                assert_eq!(s.apply(&e), Elem::basis(Cat::VectQ, j * 2 + i));
            }
        }
    }

    #[test]
    fn coproduct_block_structure() {
        let (total, injs) = coproduct(Cat::VectQ, &[Obj::vect(1), Obj::vect(2)]).unwrap();
        assert_eq!(total.dim(), 3);
        assert_eq!(injs[0].apply_basis(0), Elem::basis(Cat::VectQ, 0));
        assert_eq!(injs[1].apply_basis(1), Elem::basis(Cat::VectQ, 2));
        let (empty, _) = coproduct(Cat::VectQ, &[]).unwrap();
        assert_eq!(empty.dim(), 0);
    }

    #[test]
    fn cotuple_restricts_to_legs() {
        let a = Obj::vect(2);
        let b = Obj::vect(1);
        let c = Obj::vect(2);
        let (total, injs) = coproduct(Cat::VectQ, &[a.clone(), b.clone()]).unwrap();
        let f = matrix_from_dense_rows(&a, &c, &[
            vec![q_int(1), q_int(2)],
            vec![q_int(3), q_int(4)],
        ])
        .unwrap();
        let g = matrix_from_dense_rows(&b, &c, &[vec![q_int(5)], vec![q_int(6)]]).unwrap();
        let u = cotuple(&total, &[a, b], &[f.clone(), g.clone()], &c).unwrap();
        assert_eq!(u.compose(&injs[0]).unwrap(), f);
        assert_eq!(u.compose(&injs[1]).unwrap(), g);
    }

    #[test]
    fn coequalizer_of_plus_minus_one_is_zero() {
        let q1 = Obj::vect(1);
        let f = matrix_from_dense_rows(&q1, &q1, &[vec![q_int(1)]]).unwrap();
        let g = matrix_from_dense_rows(&q1, &q1, &[vec![q_int(-1)]]).unwrap();
        let coeq = coequalizer(&f, &g).unwrap();
        assert_eq!(coeq.obj.dim(), 0);
    }

    #[test]
    fn coequalizer_equal_maps_is_identity() {
        let x = Obj::vect(2);
        let f = Morphism::identity(&x);
        let coeq = coequalizer(&f, &f).unwrap();
        assert_eq!(coeq.obj.dim(), 2);
        assert_eq!(coeq.projection, Morphism::identity(&x));
    }

    #[test]
    fn finset_coequalizer_union_find() {
        let a = Obj::finset(2);
        let b = Obj::finset(2);
        let f = Morphism::from_func(a.clone(), b.clone(), vec![0, 1]).unwrap();
        let g = Morphism::from_func(a, b.clone(), vec![1, 1]).unwrap();
        let coeq = coequalizer(&f, &g).unwrap();
        assert_eq!(coeq.obj.dim(), 1);
    }

    #[test]
    fn coequalizer_universal_property_exact() {
        // f, g: Q^2 -> Q^3 with f - g of rank 1; h constructed to equalize.
        let x = Obj::vect(2);
        let y = Obj::vect(3);
        let z = Obj::vect(2);
        let f = matrix_from_dense_rows(&x, &y, &[
            vec![q_int(1), q_int(0)],
            vec![q_int(0), q_int(1)],
            vec![q_int(1), q_int(1)],
        ])
        .unwrap();
        let g = matrix_from_dense_rows(&x, &y, &[
            vec![q_int(0), q_int(-1)],
            vec![q_int(1), q_int(2)],
            vec![q_int(1), q_int(1)],
        ])
        .unwrap();
        let coeq = coequalizer(&f, &g).unwrap();
        // h := u0 ∘ projection for a random-ish u0 equalizes by construction.
        let u0 = matrix_from_dense_rows(&coeq.obj, &z, &[
            vec![q_int(2); coeq.obj.dim()],
            (0..coeq.obj.dim()).map(|i| q_int(i as i64 - 1)).collect(),
        ])
        .unwrap();
        let h = u0.compose(&coeq.projection).unwrap();
        let u = coeq.factor(&h).unwrap();
        assert_eq!(u.compose(&coeq.projection).unwrap(), h);
        assert_eq!(u, u0);
    }

    #[test]
    fn coinvariants_trivial_and_swap() {
        let x = Obj::vect(3);
        let triv = SymObj::trivial(x.clone(), 2);
        let q = coinvariants(&triv).unwrap();
        assert_eq!(q.obj.dim(), 3);
        assert_eq!(q.projection, Morphism::identity(&x));

        // Regular Σ2 on Q^2 by swap: coinvariants have dim 1.
        let v2 = Obj::vect(2);
        let sw = Morphism::from_basis_map(v2.clone(), v2.clone(), vec![1, 0]).unwrap();
        let sym = SymObj::new(v2, 2, vec![sw]).unwrap();
        assert_eq!(coinvariants(&sym).unwrap().obj.dim(), 1);

        // Σ2 on a 2-element set by swap: one orbit.
        let s2 = Obj::finset(2);
        let swf = Morphism::from_func(s2.clone(), s2.clone(), vec![1, 0]).unwrap();
        let symf = SymObj::new(s2, 2, vec![swf]).unwrap();
        assert_eq!(coinvariants(&symf).unwrap().obj.dim(), 1);
    }

    #[test]
    fn coinvariants_idempotent() {
        let v2 = Obj::vect(2);
        let sw = Morphism::from_basis_map(v2.clone(), v2.clone(), vec![1, 0]).unwrap();
        let sym = SymObj::new(v2, 2, vec![sw]).unwrap();
        let q = coinvariants(&sym).unwrap();
        let again = coinvariants(&SymObj::trivial(q.obj.clone(), 2)).unwrap();
        assert_eq!(again.obj.dim(), q.obj.dim());
        assert_eq!(again.projection, Morphism::identity(&q.obj));
    }

    #[test]
    fn internal_hom_dims_and_triangle() {
        let x = Obj::vect(2);
        let y = Obj::vect(3);
        let hom = internal_hom(&x, &y).unwrap();
        assert_eq!(hom.dim(), 6);
        let ev = eval_morphism(&x, &y).unwrap();
        let c = curry(&ev, &hom, &x).unwrap();
        assert_eq!(c, Morphism::identity(&hom));

        let f2 = Obj::finset(2);
        let f3 = Obj::finset(3);
        assert_eq!(internal_hom(&f2, &f3).unwrap().dim(), 9);
    }

    #[test]
    fn curry_uncurry_roundtrip() {
        let z = Obj::vect(2);
        let x = Obj::vect(2);
        let y = Obj::vect(2);
        let zx = tensor(&z, &x).unwrap();
        let f = matrix_from_dense_rows(&zx, &y, &[
            vec![q_int(1), q_int(2), q_int(0), q_int(1)],
            vec![q_int(0), q_int(1), q_int(3), q_int(0)],
        ])
        .unwrap();
        let g = curry(&f, &z, &x).unwrap();
        assert_eq!(uncurry(&g, &x, &y).unwrap(), f);
    }

    #[test]
    fn hexagon_instance_on_triple_tensor() {
        // (X⊗Y)⊗Z -> Y⊗(Z⊗X) two ways around the hexagon agree.
        let x = Obj::vect(2);
        let y = Obj::vect(1);
        let z = Obj::vect(2);
        let factors = [x, y, z];
        // rotate left: positions (0,1,2) -> (2,0,1): factor 0 moves to 2, etc.
        let rot = permute_factors(&factors, &vec![2, 0, 1]).unwrap();
        let s01 = permute_factors(&factors, &vec![1, 0, 2]).unwrap();
        let after = [factors[1].clone(), factors[0].clone(), factors[2].clone()];
        let s12 = permute_factors(&after, &vec![0, 2, 1]).unwrap();
        assert_eq!(s12.compose(&s01).unwrap(), rot);
    }

    #[test]
    fn symobj_rejects_broken_coxeter() {
        let v = Obj::vect(2);
        let not_inv = matrix_from_dense_rows(&v, &v, &[
            vec![q_int(1), q_int(1)],
            vec![q_int(0), q_int(0)],
        ])
        .unwrap();
        assert!(SymObj::new(v, 2, vec![not_inv]).is_err());
    }

    #[test]
    fn action_is_homomorphism() {
        use crate::perm::all_perms;
        let v = Obj::vect(6);
        // Regular-ish action of Σ3 permuting 6 = 3! basis slots via words.
        let perms = all_perms(3);
        let mut gens = Vec::new();
        for g in 0..2 {
            let s = perm::adjacent(3, g);
            let map: Vec<usize> = perms
                .iter()
                .map(|w| {
                    let relabeled: Vec<usize> = w.iter().map(|&l| s[l]).collect();
                    perm::lex_rank(&relabeled)
                })
                .collect();
            gens.push(Morphism::from_basis_map(v.clone(), v.clone(), map).unwrap());
        }
        let sym = SymObj::new(v, 3, gens).unwrap();
        for p in all_perms(3) {
            for q in all_perms(3) {
                let pq = perm::compose(&p, &q);
                let lhs = sym.action(&pq).unwrap();
                let rhs = sym.action(&p).unwrap().compose(&sym.action(&q).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
