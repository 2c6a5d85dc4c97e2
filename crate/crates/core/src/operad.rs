//! Truncated symmetric operads.
//!
//! An operad stores its Σ-collection (one [`SymObj`] per arity `0..=N`), the
//! unit `I → P(1)` and the partial compositions `∘_i : P(n) ⊗ P(m) →
//! P(n+m-1)` as primitive data; the total composition γ is derived. The
//! truncation `N` is a hard parameter: anything that would need an arity
//! beyond `N` fails loudly with [`Error::Truncation`].
//!
//! Slot indices are 0-based throughout: `∘_i` grafts into input `i` of the
//! left operand, `0 ≤ i < n`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cat::{
    coinvariants, index_tuple, left_unitor, permute_factors, right_unitor, tensor, tensor_many,
    tuple_index, Cat, Elem, Morphism, Obj, SymObj,
};
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::perm::{self, Perm};

/// Arity-indexed family of Σ-objects, truncated at `max_arity`.
#[derive(Debug, Clone)]
pub struct SymCollection {
    pub cat: Cat,
    pub layers: Vec<SymObj>,
}

impl SymCollection {
    pub fn new(cat: Cat, layers: Vec<SymObj>) -> Result<SymCollection> {
        for (n, l) in layers.iter().enumerate() {
            if l.degree != n {
                return Err(Error::Invalid(format!(
                    "layer {n} has degree {}, expected {n}",
                    l.degree
                )));
            }
            if l.obj.cat() != cat {
                return Err(Error::CategoryMismatch);
            }
        }
        Ok(SymCollection { cat, layers })
    }

    pub fn max_arity(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, n: usize) -> Result<&SymObj> {
        self.layers.get(n).ok_or(Error::Truncation {
            what: String::from("collection layer"),
            needed: n,
            cap: self.max_arity(),
        })
    }
}

/// A truncated symmetric operad.
///
/// `comp` may omit entries (quotient operads built at a summand cap cannot
/// always fill the whole table); every present entry is validated by
/// [`Operad::check_axioms`], and absent entries surface as truncation
/// errors, never as silently wrong data.
#[derive(Debug, Clone)]
pub struct Operad {
    pub collection: SymCollection,
    pub unit: Morphism,
    comp: BTreeMap<(usize, usize, usize), Morphism>,
}

/// Outcome of a successful operad axiom check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OperadCertificate {
    pub unit_checks: usize,
    pub assoc_checks: usize,
    pub equivariance_checks: usize,
    /// Composition entries absent because of the truncation/summand caps.
    pub missing_compositions: Vec<(usize, usize, usize)>,
}

/// First axiom violation found, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperadViolation {
    Unit { n: usize, slot: usize },
    Assoc { n: usize, m: usize, l: usize, i: usize, j: usize, witness: usize },
    Equivariance { n: usize, m: usize, i: usize, generator: usize },
}

impl core::fmt::Display for OperadViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OperadViolation::Unit { n, slot } => {
                write!(f, "unit law fails at arity {n}, slot {slot}")
            }
            OperadViolation::Assoc { n, m, l, i, j, witness } => write!(
                f,
                "associativity fails at ({n},{m},{l}) slots ({i},{j}), basis witness {witness}"
            ),
            OperadViolation::Equivariance { n, m, i, generator } => write!(
                f,
                "equivariance fails for comp({n},{m},{i}) against generator s_{generator}"
            ),
        }
    }
}

impl Operad {
    /// Assemble an operad from parts without checking the axioms; callers
    /// that construct new operads must run [`Operad::check_axioms`] before
    /// releasing the value.
    pub fn from_parts(
        collection: SymCollection,
        unit: Morphism,
        comp: BTreeMap<(usize, usize, usize), Morphism>,
    ) -> Result<Operad> {
        let one = Obj::unit(collection.cat);
        if unit.dom() != &one || unit.cod() != &collection.layer(1)?.obj {
            return Err(Error::Shape(String::from("operad unit must be I -> P(1)")));
        }
        for (&(n, m, i), c) in &comp {
            if i >= n || n + m == 0 || n + m - 1 > collection.max_arity() {
                return Err(Error::Invalid(format!("composition key ({n},{m},{i}) out of range")));
            }
            let dom = tensor(&collection.layer(n)?.obj, &collection.layer(m)?.obj)?;
            if c.dom() != &dom || c.cod() != &collection.layer(n + m - 1)?.obj {
                return Err(Error::Shape(format!("composition ({n},{m},{i}) has wrong shape")));
            }
        }
        Ok(Operad { collection, unit, comp })
    }

    pub fn cat(&self) -> Cat {
        self.collection.cat
    }

    pub fn max_arity(&self) -> usize {
        self.collection.max_arity()
    }

    pub fn layer(&self, n: usize) -> Result<&SymObj> {
        self.collection.layer(n)
    }

    pub fn layer_obj(&self, n: usize) -> Result<&Obj> {
        Ok(&self.collection.layer(n)?.obj)
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.collection.layer(n)?.obj.dim())
    }

    pub fn comp(&self, n: usize, m: usize, i: usize) -> Result<&Morphism> {
        self.comp.get(&(n, m, i)).ok_or(Error::Truncation {
            what: format!("composition ({n},{m},{i})"),
            needed: n + m,
            cap: self.max_arity() + 1,
        })
    }

    pub fn has_comp(&self, n: usize, m: usize, i: usize) -> bool {
        self.comp.contains_key(&(n, m, i))
    }

    pub fn comp_keys(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.comp.keys().copied()
    }

    /// Replace one composition entry; used by fault-injection tests.
    pub fn with_comp_entry(mut self, n: usize, m: usize, i: usize, c: Morphism) -> Operad {
        self.comp.insert((n, m, i), c);
        self
    }

    /// The operad unit as an element of `P(1)`.
    pub fn unit_elem(&self) -> Elem {
        self.unit.apply_basis(0)
    }

    /// `v ∘_i w` on elements.
    pub fn compose_elem(&self, n: usize, m: usize, i: usize, v: &Elem, w: &Elem) -> Result<Elem> {
        let c = self.comp(n, m, i)?;
        match (v, w) {
            (Elem::Vec(a), Elem::Vec(b)) => {
                let mat = c.matrix().unwrap();
                let dm = self.dim(m)?;
                let mut out = SparseVec::zero();
                for (ai, ac) in &a.entries {
                    for (bi, bc) in &b.entries {
                        out = out.axpy(&(ac * bc), mat.col(ai * dm + bi));
                    }
                }
                Ok(Elem::Vec(out))
            }
            (Elem::Pt(a), Elem::Pt(b)) => {
                let f = c.func().unwrap();
                Ok(Elem::Pt(f[a * self.dim(m)? + b]))
            }
            _ => Err(Error::CategoryMismatch),
        }
    }

    /// Total composition `γ : P(s) ⊗ P(n_1) ⊗ … ⊗ P(n_s) → P(n)`, assembled
    /// from partial compositions right-to-left. Assembly order does not
    /// matter; the integration tests check independence explicitly.
    pub fn total_composition(&self, s: usize, ns: &[usize]) -> Result<Morphism> {
        if ns.len() != s {
            return Err(Error::Invalid(format!("total composition expects {s} inner arities")));
        }
        let n: usize = ns.iter().sum();
        if n > self.max_arity() {
            return Err(Error::Truncation {
                what: String::from("total composition"),
                needed: n,
                cap: self.max_arity(),
            });
        }
        let mut factors = vec![self.layer_obj(s)?.clone()];
        for &k in ns {
            factors.push(self.layer_obj(k)?.clone());
        }
        let dom = tensor_many(self.cat(), &factors)?;
        let cod = self.layer_obj(n)?.clone();
        let dims: Vec<usize> = factors.iter().map(Obj::dim).collect();
        let mut images = Vec::with_capacity(dom.dim());
        for t in crate::cat::tuples(&dims) {
            images.push(self.total_compose_tuple(s, ns, t[0], &t[1..])?);
        }
        crate::cat::morphism_from_images(&dom, &cod, images)
    }

    /// γ on a single basis tuple: `p` grafted with inner basis elements.
    /// Grafts ascending by inner arity so intermediate arities stay within
    /// `max(s, Σ ns)` and never trip the truncation spuriously.
    pub fn total_compose_tuple(
        &self,
        s: usize,
        ns: &[usize],
        p: usize,
        inner: &[usize],
    ) -> Result<Elem> {
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by_key(|&j| (ns[j], j));
        let mut positions: Vec<usize> = (0..s).collect();
        let mut acc = Elem::basis(self.cat(), p);
        let mut arity = s;
        for &j in &order {
            let q = Elem::basis(self.cat(), inner[j]);
            let pos = positions[j];
            acc = self.compose_elem(arity, ns[j], pos, &acc, &q)?;
            for (jj, pp) in positions.iter_mut().enumerate() {
                if jj != j && *pp > pos {
                    *pp = *pp + ns[j] - 1;
                }
            }
            arity = arity + ns[j] - 1;
        }
        Ok(acc)
    }

    /// Exhaustive axiom check on basis elements within the truncation.
    pub fn check_axioms(&self) -> core::result::Result<OperadCertificate, Box<OperadViolation>> {
        let mut cert = OperadCertificate::default();
        let nmax = self.max_arity();

        // Unit laws. Right: p ∘_i 1 = p. Left: 1 ∘_0 p = p.
        for n in 0..=nmax {
            if n >= 1 {
                for i in 0..n {
                    match self.comp.get(&(n, 1, i)) {
                        None => cert.missing_compositions.push((n, 1, i)),
                        Some(c) => {
                            let layer = self.layer_obj(n).unwrap();
                            let ru = right_unitor(layer).unwrap();
                            let rhs = c
                                .compose(&Morphism::identity(layer).tensor(&self.unit).unwrap())
                                .unwrap();
                            cert.unit_checks += 1;
                            if rhs != ru {
                                return Err(Box::new(OperadViolation::Unit { n, slot: i }));
                            }
                        }
                    }
                }
            }
            match self.comp.get(&(1, n, 0)) {
                None => cert.missing_compositions.push((1, n, 0)),
                Some(c) => {
                    let layer = self.layer_obj(n).unwrap();
                    let lu = left_unitor(layer).unwrap();
                    let rhs = c
                        .compose(&self.unit.tensor(&Morphism::identity(layer)).unwrap())
                        .unwrap();
                    cert.unit_checks += 1;
                    if rhs != lu {
                        return Err(Box::new(OperadViolation::Unit { n, slot: 0 }));
                    }
                }
            }
        }

        // Associativity, nested and disjoint, on basis elements.
        for n in 1..=nmax {
            for m in 0..=nmax {
                if n + m == 0 || n + m - 1 > nmax {
                    continue;
                }
                for l in 0..=nmax {
                    if n + m + l < 2 || n + m + l - 2 > nmax {
                        continue;
                    }
                    for i in 0..n {
                        for j in 0..m {
                            match self.assoc_nested_witness(n, m, l, i, j) {
                                None => cert.assoc_checks += 1,
                                Some(w) => {
                                    if w == usize::MAX {
                                        continue; // missing entries, skipped
                                    }
                                    return Err(Box::new(OperadViolation::Assoc {
                                        n,
                                        m,
                                        l,
                                        i,
                                        j,
                                        witness: w,
                                    }));
                                }
                            }
                        }
                        for ip in i + 1..n {
                            match self.assoc_disjoint_witness(n, m, l, i, ip) {
                                None => cert.assoc_checks += 1,
                                Some(w) => {
                                    if w == usize::MAX {
                                        continue;
                                    }
                                    return Err(Box::new(OperadViolation::Assoc {
                                        n,
                                        m,
                                        l,
                                        i,
                                        j: ip,
                                        witness: w,
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }

        // Σ-equivariance against the stored generators.
        for n in 1..=nmax {
            for m in 0..=nmax {
                if n + m == 0 || n + m - 1 > nmax {
                    continue;
                }
                for i in 0..n {
                    if !self.has_comp(n, m, i) {
                        continue;
                    }
                    for g in 0..n.saturating_sub(1) {
                        match self.equivariance_top_holds(n, m, i, g) {
                            None => continue,
                            Some(true) => cert.equivariance_checks += 1,
                            Some(false) => {
                                return Err(Box::new(OperadViolation::Equivariance {
                                    n,
                                    m,
                                    i,
                                    generator: g,
                                }))
                            }
                        }
                    }
                    for g in 0..m.saturating_sub(1) {
                        if self.equivariance_bottom_holds(n, m, i, g) {
                            cert.equivariance_checks += 1;
                        } else {
                            return Err(Box::new(OperadViolation::Equivariance {
                                n,
                                m,
                                i,
                                generator: g,
                            }));
                        }
                    }
                }
            }
        }
        cert.missing_compositions.sort_unstable();
        cert.missing_compositions.dedup();
        Ok(cert)
    }

    /// None = holds; Some(usize::MAX) = skipped for missing entries.
    fn assoc_nested_witness(&self, n: usize, m: usize, l: usize, i: usize, j: usize) -> Option<usize> {
        if m == 0 {
            return None;
        }
        if !(self.has_comp(n, m, i)
            && self.has_comp(n + m - 1, l, i + j)
            && self.has_comp(m, l, j)
            && self.has_comp(n, m + l - 1, i))
        {
            return Some(usize::MAX);
        }
        let (dn, dm, dl) = (self.dim(n).unwrap(), self.dim(m).unwrap(), self.dim(l).unwrap());
        let mut idx = 0;
        for a in 0..dn {
            for b in 0..dm {
                for c in 0..dl {
                    let pa = Elem::basis(self.cat(), a);
                    let pb = Elem::basis(self.cat(), b);
                    let pc = Elem::basis(self.cat(), c);
                    let ab = self.compose_elem(n, m, i, &pa, &pb).unwrap();
                    let lhs = self.compose_elem(n + m - 1, l, i + j, &ab, &pc).unwrap();
                    let bc = self.compose_elem(m, l, j, &pb, &pc).unwrap();
                    let rhs = self.compose_elem(n, m + l - 1, i, &pa, &bc).unwrap();
                    if lhs != rhs {
                        return Some(idx);
                    }
                    idx += 1;
                }
            }
        }
        None
    }

    fn assoc_disjoint_witness(&self, n: usize, m: usize, l: usize, i: usize, ip: usize) -> Option<usize> {
        if !(self.has_comp(n, m, i)
            && self.has_comp(n + m - 1, l, ip + m - 1)
            && self.has_comp(n, l, ip)
            && self.has_comp(n + l - 1, m, i))
        {
            return Some(usize::MAX);
        }
        let (dn, dm, dl) = (self.dim(n).unwrap(), self.dim(m).unwrap(), self.dim(l).unwrap());
        let mut idx = 0;
        for a in 0..dn {
            for b in 0..dm {
                for c in 0..dl {
                    let pa = Elem::basis(self.cat(), a);
                    let pb = Elem::basis(self.cat(), b);
                    let pc = Elem::basis(self.cat(), c);
                    let ab = self.compose_elem(n, m, i, &pa, &pb).unwrap();
                    let lhs = self.compose_elem(n + m - 1, l, ip + m - 1, &ab, &pc).unwrap();
                    let ac = self.compose_elem(n, l, ip, &pa, &pc).unwrap();
                    let rhs = self.compose_elem(n + l - 1, m, i, &ac, &pb).unwrap();
                    if lhs != rhs {
                        return Some(idx);
                    }
                    idx += 1;
                }
            }
        }
        None
    }

    /// `p^σ ∘_i q = (p ∘_{σ(i)} q)^{expand(σ, i, m)}` for `σ = s_g ∈ Σ_n`
    /// (adjacent transpositions are self-inverse). None = skipped.
    fn equivariance_top_holds(&self, n: usize, m: usize, i: usize, g: usize) -> Option<bool> {
        let sigma = perm::adjacent(n, g);
        let u = sigma[i];
        if !self.has_comp(n, m, u) {
            return None;
        }
        let tau = expand_perm(&sigma, i, m);
        let c_i = self.comp(n, m, i).unwrap();
        let c_u = self.comp(n, m, u).unwrap();
        let act_p = self.layer(n).unwrap().gen(g);
        let idm = Morphism::identity(self.layer_obj(m).unwrap());
        let lhs = c_i.compose(&act_p.tensor(&idm).unwrap()).unwrap();
        let act_out = self.layer(n + m - 1).unwrap().action(&tau).unwrap();
        let rhs = act_out.compose(c_u).unwrap();
        Some(lhs == rhs)
    }

    /// `p ∘_i q^ρ = (p ∘_i q)^{ρ[i]}` for `ρ = s_g ∈ Σ_m`.
    fn equivariance_bottom_holds(&self, n: usize, m: usize, i: usize, g: usize) -> bool {
        let rho = perm::adjacent(m, g);
        let shifted = shift_perm(&rho, i, n + m - 1);
        let c = self.comp(n, m, i).unwrap();
        let idn = Morphism::identity(self.layer_obj(n).unwrap());
        let act_q = self.layer(m).unwrap().gen(g);
        let lhs = c.compose(&idn.tensor(act_q).unwrap()).unwrap();
        let act_out = self.layer(n + m - 1).unwrap().action(&shifted).unwrap();
        let rhs = act_out.compose(c).unwrap();
        lhs == rhs
    }
}

/// Block expansion of `σ ∈ S_n` at slot `i` with inner arity `m`:
/// the permutation `τ ∈ S_{n+m-1}` with `p^σ ∘_i q = (p ∘_{σ^{-1}(i)} q)^τ`.
pub fn expand_perm(sigma: &Perm, i: usize, m: usize) -> Perm {
    let n = sigma.len();
    let u = perm::inverse(sigma)[i];
    let adj = |x: usize| if x < i { x } else { x + m - 1 };
    let mut tau = vec![0usize; n + m - 1];
    for (pos, slot) in tau.iter_mut().enumerate() {
        *slot = if pos < u {
            adj(sigma[pos])
        } else if pos < u + m {
            i + (pos - u)
        } else {
            adj(sigma[pos - m + 1])
        };
    }
    tau
}

/// `ρ ∈ S_m` acting inside the block `[i, i+m)` of `S_total`.
pub fn shift_perm(rho: &Perm, i: usize, total: usize) -> Perm {
    let mut out = perm::identity(total);
    for (j, &r) in rho.iter().enumerate() {
        out[i + j] = i + r;
    }
    out
}

fn word_label(w: &[usize]) -> String {
    if w.is_empty() {
        return String::from("()");
    }
    let parts: Vec<String> = w.iter().map(|x| format!("{}", x + 1)).collect();
    parts.join("")
}

/// The unital associative operad: `P(n)` is spanned by `Σ_n` in
/// lexicographic one-line order; composition is substitution of words.
pub fn builtin_uass(cat: Cat, max_arity: usize) -> Result<Operad> {
    let mut layers = Vec::with_capacity(max_arity + 1);
    let mut words: Vec<Vec<Perm>> = Vec::with_capacity(max_arity + 1);
    for n in 0..=max_arity {
        let perms = perm::all_perms(n);
        let labels: Vec<String> = perms.iter().map(|w| word_label(w)).collect();
        let obj = Obj::new(cat, labels)?;
        let mut gens = Vec::new();
        for g in 0..n.saturating_sub(1) {
            let s = perm::adjacent(n, g);
            // p^σ has its word letters relabelled through σ.
            let map: Vec<usize> = perms
                .iter()
                .map(|w| {
                    let relabeled: Vec<usize> = w.iter().map(|&l| s[l]).collect();
                    perm::lex_rank(&relabeled)
                })
                .collect();
            gens.push(Morphism::from_basis_map(obj.clone(), obj.clone(), map)?);
        }
        layers.push(SymObj::new(obj, n, gens)?);
        words.push(perms);
    }
    let collection = SymCollection::new(cat, layers)?;
    let unit = Morphism::from_basis_map(Obj::unit(cat), collection.layer(1)?.obj.clone(), vec![0])?;
    let mut comp = BTreeMap::new();
    for n in 1..=max_arity {
        for m in 0..=max_arity {
            if n + m - 1 > max_arity {
                continue;
            }
            let dom = tensor(&collection.layer(n)?.obj, &collection.layer(m)?.obj)?;
            let cod = collection.layer(n + m - 1)?.obj.clone();
            for i in 0..n {
                let mut map = Vec::with_capacity(dom.dim());
                for wp in &words[n] {
                    for wq in &words[m] {
                        map.push(perm::lex_rank(&substitute_word(wp, i, wq)));
                    }
                }
                comp.insert((n, m, i), Morphism::from_basis_map(dom.clone(), cod.clone(), map)?);
            }
        }
    }
    Operad::from_parts(collection, unit, comp)
}

/// Substitute word `wq` into letter `i` of word `wp` (block substitution of
/// permutations; the independent oracle used by the uAss tests).
pub fn substitute_word(wp: &[usize], i: usize, wq: &[usize]) -> Vec<usize> {
    let m = wq.len();
    let mut out = Vec::with_capacity(wp.len() + m.max(1) - 1);
    for &l in wp {
        if l < i {
            out.push(l);
        } else if l == i {
            out.extend(wq.iter().map(|&x| x + i));
        } else {
            out.push(l + m - 1);
        }
    }
    out
}

/// The unital commutative operad: every layer is the unit object with the
/// trivial action.
pub fn builtin_ucom(cat: Cat, max_arity: usize) -> Result<Operad> {
    let mut layers = Vec::with_capacity(max_arity + 1);
    for n in 0..=max_arity {
        let obj = Obj::new(cat, vec![String::from("e")])?;
        layers.push(SymObj::trivial(obj, n));
    }
    let collection = SymCollection::new(cat, layers)?;
    let unit = Morphism::from_basis_map(Obj::unit(cat), collection.layer(1)?.obj.clone(), vec![0])?;
    let mut comp = BTreeMap::new();
    for n in 1..=max_arity {
        for m in 0..=max_arity {
            if n + m - 1 > max_arity {
                continue;
            }
            let dom = tensor(&collection.layer(n)?.obj, &collection.layer(m)?.obj)?;
            let cod = collection.layer(n + m - 1)?.obj.clone();
            for i in 0..n {
                comp.insert((n, m, i), Morphism::from_basis_map(dom.clone(), cod.clone(), vec![0])?);
            }
        }
    }
    Operad::from_parts(collection, unit, comp)
}

/// Built-in operads addressable by name.
pub fn builtin(name: &str, cat: Cat, max_arity: usize) -> Result<Operad> {
    if max_arity < 1 {
        return Err(Error::Invalid(String::from("builtin operads need max arity >= 1")));
    }
    match name {
        "uAss" => builtin_uass(cat, max_arity),
        "uCom" => builtin_ucom(cat, max_arity),
        _ => Err(Error::UnknownBuiltin(String::from(name))),
    }
}

/// Endomorphism operad `End_A(n) = Hom(A^{⊗n}, A)` with composition by
/// substitution and the action by permutation of the domain factors.
/// `guard` bounds the total basis size (relevant for `FinSet` carriers,
/// where hom sets grow doubly exponentially).
pub fn endomorphism_operad(a: &Obj, max_arity: usize, guard: usize) -> Result<Operad> {
    let cat = a.cat();
    let mut total = 0usize;
    let mut layers = Vec::with_capacity(max_arity + 1);
    for n in 0..=max_arity {
        let power = tensor_power(a, n)?;
        let hom = crate::cat::internal_hom(&power, a)?;
        total = total.saturating_add(hom.dim());
        if total > guard {
            return Err(Error::CapGuard {
                what: String::from("endomorphism operad"),
                size: total,
                guard,
            });
        }
        let mut gens = Vec::new();
        for g in 0..n.saturating_sub(1) {
            gens.push(end_layer_action(a, n, g, &hom)?);
        }
        layers.push(SymObj::new(hom, n, gens)?);
    }
    let collection = SymCollection::new(cat, layers)?;
    let unit = end_unit(a, &collection)?;
    let mut comp = BTreeMap::new();
    for n in 1..=max_arity {
        for m in 0..=max_arity {
            if n + m - 1 > max_arity {
                continue;
            }
            for i in 0..n {
                comp.insert((n, m, i), end_comp(a, &collection, n, m, i)?);
            }
        }
    }
    Operad::from_parts(collection, unit, comp)
}

pub fn tensor_power(a: &Obj, n: usize) -> Result<Obj> {
    tensor_many(a.cat(), &vec![a.clone(); n])
}

fn end_unit(a: &Obj, collection: &SymCollection) -> Result<Morphism> {
    let hom1 = &collection.layer(1)?.obj;
    let d = a.dim();
    match a.cat() {
        Cat::VectQ => {
            let entries: Vec<(usize, crate::rational::Q)> =
                (0..d).map(|r| (r * d + r, crate::rational::q_one())).collect();
            let col = SparseVec::from_entries(entries);
            Morphism::from_matrix(
                Obj::unit(Cat::VectQ),
                hom1.clone(),
                SparseMat::from_cols(hom1.dim(), vec![col]),
            )
        }
        Cat::FinSet => {
            // The identity function's table [0, 1, …, d-1] in lex encoding.
            let mut idx = 0usize;
            for x in 0..d {
                idx = idx * d + x;
            }
            Morphism::from_func(Obj::unit(Cat::FinSet), hom1.clone(), vec![idx])
        }
    }
}

fn end_layer_action(a: &Obj, n: usize, g: usize, hom: &Obj) -> Result<Morphism> {
    let d = a.dim();
    let dims = vec![d; n];
    match a.cat() {
        Cat::VectQ => {
            // E_{r,c}^σ swaps tuple slots g, g+1 for adjacent σ.
            let mut map = Vec::with_capacity(hom.dim());
            for h in 0..hom.dim() {
                let (c, r) = (h / d, h % d);
                let mut t = index_tuple(c, &dims);
                t.swap(g, g + 1);
                map.push(tuple_index(&t, &dims) * d + r);
            }
            Morphism::from_basis_map(hom.clone(), hom.clone(), map)
        }
        Cat::FinSet => {
            let card = d.pow(n as u32);
            let value_dims = vec![d; card];
            let mut map = Vec::with_capacity(hom.dim());
            for h in 0..hom.dim() {
                let table = index_tuple(h, &value_dims);
                let mut new_table = vec![0usize; card];
                for (x, slot) in new_table.iter_mut().enumerate() {
                    let mut t = index_tuple(x, &dims);
                    t.swap(g, g + 1);
                    *slot = table[tuple_index(&t, &dims)];
                }
                map.push(tuple_index(&new_table, &value_dims));
            }
            Morphism::from_basis_map(hom.clone(), hom.clone(), map)
        }
    }
}

fn end_comp(a: &Obj, collection: &SymCollection, n: usize, m: usize, i: usize) -> Result<Morphism> {
    let d = a.dim();
    let hn = &collection.layer(n)?.obj;
    let hm = &collection.layer(m)?.obj;
    let hout = &collection.layer(n + m - 1)?.obj;
    let dom = tensor(hn, hm)?;
    let n_dims = vec![d; n];
    let m_dims = vec![d; m];
    let out_dims = vec![d; n + m - 1];
    match a.cat() {
        Cat::VectQ => {
            let mut cols = Vec::with_capacity(dom.dim());
            for hf in 0..hn.dim() {
                let (cf, rf) = (hf / d, hf % d);
                let tf = index_tuple(cf, &n_dims);
                for hg in 0..hm.dim() {
                    let (cg, rg) = (hg / d, hg % d);
                    if tf[i] != rg {
                        cols.push(SparseVec::zero());
                        continue;
                    }
                    let tg = index_tuple(cg, &m_dims);
                    let mut t = Vec::with_capacity(n + m - 1);
                    t.extend_from_slice(&tf[..i]);
                    t.extend_from_slice(&tg);
                    t.extend_from_slice(&tf[i + 1..]);
                    cols.push(SparseVec::unit(tuple_index(&t, &out_dims) * d + rf));
                }
            }
            Morphism::from_matrix(dom, hout.clone(), SparseMat::from_cols(hout.dim(), cols))
        }
        Cat::FinSet => {
            let card_n = d.pow(n as u32);
            let card_m = d.pow(m as u32);
            let card_out = d.pow((n + m - 1) as u32);
            let fdims = vec![d; card_n];
            let gdims = vec![d; card_m];
            let odims = vec![d; card_out];
            let mut table = Vec::with_capacity(dom.dim());
            for hf in 0..hn.dim() {
                let f = index_tuple(hf, &fdims);
                for hg in 0..hm.dim() {
                    let g = index_tuple(hg, &gdims);
                    let mut out = vec![0usize; card_out];
                    for (x, slot) in out.iter_mut().enumerate() {
                        let t = index_tuple(x, &out_dims);
                        let gv = g[tuple_index(&t[i..i + m], &m_dims)];
                        let mut ft = Vec::with_capacity(n);
                        ft.extend_from_slice(&t[..i]);
                        ft.push(gv);
                        ft.extend_from_slice(&t[i + m..]);
                        *slot = f[tuple_index(&ft, &n_dims)];
                    }
                    table.push(tuple_index(&out, &odims));
                }
            }
            Morphism::from_func(dom, hout.clone(), table)
        }
    }
}

/// Tensor product of operads: `(P ⊗ Q)(n) = P(n) ⊗ Q(n)` with the diagonal
/// action and componentwise composition.
pub fn tensor_operads(p: &Operad, q: &Operad) -> Result<Operad> {
    if p.cat() != q.cat() {
        return Err(Error::CategoryMismatch);
    }
    if p.max_arity() != q.max_arity() {
        return Err(Error::Invalid(String::from("tensor of operads needs equal truncations")));
    }
    let cat = p.cat();
    let nmax = p.max_arity();
    let mut layers = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let obj = tensor(p.layer_obj(n)?, q.layer_obj(n)?)?;
        let mut gens = Vec::new();
        for g in 0..n.saturating_sub(1) {
            gens.push(p.layer(n)?.gen(g).tensor(q.layer(n)?.gen(g))?);
        }
        layers.push(SymObj::new(obj, n, gens)?);
    }
    let collection = SymCollection::new(cat, layers)?;
    let unit = {
        let up = p.unit.apply_basis(0);
        let uq = q.unit.apply_basis(0);
        let img = match (up, uq) {
            (Elem::Vec(a), Elem::Vec(b)) => {
                let dq = q.dim(1)?;
                let mut entries = Vec::new();
                for (i, ci) in &a.entries {
                    for (j, cj) in &b.entries {
                        entries.push((i * dq + j, ci * cj));
                    }
                }
                Elem::Vec(SparseVec::from_entries(entries))
            }
            (Elem::Pt(a), Elem::Pt(b)) => Elem::Pt(a * q.dim(1)? + b),
            _ => return Err(Error::CategoryMismatch),
        };
        crate::cat::morphism_from_images(&Obj::unit(cat), &collection.layer(1)?.obj, vec![img])?
    };
    let mut comp = BTreeMap::new();
    for n in 1..=nmax {
        for m in 0..=nmax {
            if n + m - 1 > nmax {
                continue;
            }
            for i in 0..n {
                if !(p.has_comp(n, m, i) && q.has_comp(n, m, i)) {
                    continue;
                }
                let dom = tensor(
                    &tensor(p.layer_obj(n)?, q.layer_obj(n)?)?,
                    &tensor(p.layer_obj(m)?, q.layer_obj(m)?)?,
                )?;
                let cod = tensor(p.layer_obj(n + m - 1)?, q.layer_obj(n + m - 1)?)?;
                let (dpn, dqn, dpm, dqm) = (p.dim(n)?, q.dim(n)?, p.dim(m)?, q.dim(m)?);
                let dq_out = q.dim(n + m - 1)?;
                let mut images = Vec::with_capacity(dom.dim());
                for pn in 0..dpn {
                    for qn in 0..dqn {
                        for pm in 0..dpm {
                            for qm in 0..dqm {
                                let cp = p.compose_elem(
                                    n,
                                    m,
                                    i,
                                    &Elem::basis(cat, pn),
                                    &Elem::basis(cat, pm),
                                )?;
                                let cq = q.compose_elem(
                                    n,
                                    m,
                                    i,
                                    &Elem::basis(cat, qn),
                                    &Elem::basis(cat, qm),
                                )?;
                                let img = match (cp, cq) {
                                    (Elem::Vec(a), Elem::Vec(b)) => {
                                        let mut entries = Vec::new();
                                        for (x, cx) in &a.entries {
                                            for (y, cy) in &b.entries {
                                                entries.push((x * dq_out + y, cx * cy));
                                            }
                                        }
                                        Elem::Vec(SparseVec::from_entries(entries))
                                    }
                                    (Elem::Pt(a), Elem::Pt(b)) => Elem::Pt(a * dq_out + b),
                                    _ => return Err(Error::CategoryMismatch),
                                };
                                images.push(img);
                            }
                        }
                    }
                }
                comp.insert(
                    (n, m, i),
                    crate::cat::morphism_from_images(&dom, &cod, images)?,
                );
            }
        }
    }
    Operad::from_parts(collection, unit, comp)
}

/// A morphism of operads: equivariant layer maps commuting with units and
/// all stored compositions, validated exactly.
#[derive(Debug, Clone)]
pub struct OperadMorphism {
    pub layer_maps: Vec<Morphism>,
}

impl OperadMorphism {
    pub fn new(source: &Operad, target: &Operad, layer_maps: Vec<Morphism>) -> Result<OperadMorphism> {
        let m = OperadMorphism { layer_maps };
        m.validate(source, target)?;
        Ok(m)
    }

    pub fn identity(p: &Operad) -> OperadMorphism {
        OperadMorphism {
            layer_maps: (0..=p.max_arity())
                .map(|n| Morphism::identity(p.layer_obj(n).unwrap()))
                .collect(),
        }
    }

    pub fn max_arity(&self) -> usize {
        self.layer_maps.len() - 1
    }

    pub fn map(&self, n: usize) -> Result<&Morphism> {
        self.layer_maps.get(n).ok_or(Error::Truncation {
            what: String::from("operad morphism layer"),
            needed: n,
            cap: self.layer_maps.len().saturating_sub(1),
        })
    }

    pub fn apply(&self, n: usize, e: &Elem) -> Result<Elem> {
        Ok(self.map(n)?.apply(e))
    }

    /// Check unit, composition and equivariance compatibility on every layer
    /// and on every stored composition present in both operads.
    pub fn validate(&self, source: &Operad, target: &Operad) -> Result<()> {
        let nmax = self.layer_maps.len().saturating_sub(1);
        if nmax > source.max_arity() || nmax > target.max_arity() {
            return Err(Error::Invalid(String::from("operad morphism exceeds truncations")));
        }
        for n in 0..=nmax {
            let f = &self.layer_maps[n];
            if f.dom() != source.layer_obj(n)? || f.cod() != target.layer_obj(n)? {
                return Err(Error::Shape(format!("layer map {n} has wrong endpoints")));
            }
            for g in 0..n.saturating_sub(1) {
                let lhs = f.compose(source.layer(n)?.gen(g))?;
                let rhs = target.layer(n)?.gen(g).compose(f)?;
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "operad morphism not equivariant at layer {n}, generator {g}"
                    )));
                }
            }
        }
        if nmax >= 1 {
            let lhs = self.layer_maps[1].compose(&source.unit)?;
            if lhs != target.unit {
                return Err(Error::Invalid(String::from("operad morphism does not preserve unit")));
            }
        }
        for (n, m, i) in source.comp_keys() {
            if n > nmax || m > nmax || n + m - 1 > nmax || !target.has_comp(n, m, i) {
                continue;
            }
            let lhs = self.layer_maps[n + m - 1].compose(source.comp(n, m, i)?)?;
            let rhs = target
                .comp(n, m, i)?
                .compose(&self.layer_maps[n].tensor(&self.layer_maps[m])?)?;
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "operad morphism does not commute with comp({n},{m},{i})"
                )));
            }
        }
        Ok(())
    }

    pub fn compose(&self, other: &OperadMorphism) -> Result<OperadMorphism> {
        let len = self.layer_maps.len().min(other.layer_maps.len());
        let mut maps = Vec::with_capacity(len);
        for n in 0..len {
            maps.push(self.layer_maps[n].compose(&other.layer_maps[n])?);
        }
        Ok(OperadMorphism { layer_maps: maps })
    }
}

/// The abelianization `uAss → uCom`: every permutation maps to the point of
/// the commutative operad.
pub fn abelianization(uass: &Operad, ucom: &Operad) -> Result<OperadMorphism> {
    let nmax = uass.max_arity().min(ucom.max_arity());
    let mut maps = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        maps.push(Morphism::from_basis_map(
            uass.layer_obj(n)?.clone(),
            ucom.layer_obj(n)?.clone(),
            vec![0; uass.dim(n)?],
        )?);
    }
    OperadMorphism::new(uass, ucom, maps)
}

/// Σ_k-coinvariants of `P(n+k) ⊗ X^{⊗k}`, where Σ_k permutes the last `k`
/// inputs of `P(n+k)` and the `X`-factors diagonally. This is the layer
/// building block of free algebras and enveloping operads.
pub fn layer_coinvariants(p: &Operad, n: usize, k: usize, x: &Obj) -> Result<crate::cat::QuotientObj> {
    let layer = p.layer(n + k)?;
    let xk = tensor_power(x, k)?;
    let space = tensor(&layer.obj, &xk)?;
    let mut gens = Vec::new();
    for g in 0..k.saturating_sub(1) {
        let act_p = layer.gen(n + g);
        let swap_x = swap_factors_power(x, k, g)?;
        gens.push(act_p.tensor(&swap_x)?);
    }
    let sym = SymObj::new(space, k, gens)?;
    coinvariants(&sym)
}

/// Swap of adjacent factors `g, g+1` in `X^{⊗k}`.
pub fn swap_factors_power(x: &Obj, k: usize, g: usize) -> Result<Morphism> {
    let factors = vec![x.clone(); k];
    let p = perm::adjacent(k, g);
    permute_factors(&factors, &p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uass_dimensions_and_axioms() {
        let p = builtin_uass(Cat::VectQ, 4).unwrap();
        assert_eq!(p.dim(0).unwrap(), 1);
        assert_eq!(p.dim(3).unwrap(), 6);
        assert_eq!(p.dim(4).unwrap(), 24);
        let cert = p.check_axioms().unwrap();
        assert!(cert.missing_compositions.is_empty());
        assert!(cert.assoc_checks > 0);
    }

    #[test]
    fn ucom_layers_are_unit_objects() {
        let p = builtin_ucom(Cat::VectQ, 6).unwrap();
        assert_eq!(p.dim(0).unwrap(), 1);
        assert_eq!(p.dim(6).unwrap(), 1);
        p.check_axioms().unwrap();
    }

    #[test]
    fn uass_finset_substitution() {
        let p = builtin_uass(Cat::FinSet, 3).unwrap();
        p.check_axioms().unwrap();
    }

    #[test]
    fn unknown_builtin_rejected() {
        assert!(matches!(
            builtin("Lie", Cat::VectQ, 3),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn substitution_matches_block_oracle() {
        // (12) ∘_0 (12) in Σ2: expanding letter 0 of [1,0] into block (1,0).
        let w = substitute_word(&[1, 0], 0, &[1, 0]);
        assert_eq!(w, vec![2, 1, 0]);
    }

    #[test]
    fn endomorphism_operad_axioms_dim2() {
        let a = Obj::vect(2);
        let e = endomorphism_operad(&a, 3, 1_000_000).unwrap();
        assert_eq!(e.dim(2).unwrap(), 8);
        e.check_axioms().unwrap();
    }

    #[test]
    fn endomorphism_operad_dim1_is_scalars() {
        let a = Obj::vect(1);
        let e = endomorphism_operad(&a, 3, 1_000_000).unwrap();
        for n in 0..=3 {
            assert_eq!(e.dim(n).unwrap(), 1);
        }
        e.check_axioms().unwrap();
    }

    #[test]
    fn endomorphism_operad_finset_guard() {
        let a = Obj::finset(3);
        assert!(matches!(endomorphism_operad(&a, 4, 1000), Err(Error::CapGuard { .. })));
        let small = endomorphism_operad(&Obj::finset(2), 2, 1_000_000).unwrap();
        small.check_axioms().unwrap();
    }

    #[test]
    fn tensor_operads_dims_and_axioms() {
        let p = builtin_uass(Cat::VectQ, 3).unwrap();
        let q = builtin_uass(Cat::VectQ, 3).unwrap();
        let t = tensor_operads(&p, &q).unwrap();
        assert_eq!(t.dim(2).unwrap(), 4);
        t.check_axioms().unwrap();
    }

    #[test]
    fn tensor_with_ucom_is_identity_on_dims() {
        let p = builtin_uass(Cat::VectQ, 3).unwrap();
        let c = builtin_ucom(Cat::VectQ, 3).unwrap();
        let t = tensor_operads(&p, &c).unwrap();
        for n in 0..=3 {
            assert_eq!(t.dim(n).unwrap(), p.dim(n).unwrap());
            // Unit-coherence iso is the identity basis map under the
            // canonical ordering.
            let map: Vec<usize> = (0..t.dim(n).unwrap()).collect();
            let iso = Morphism::from_basis_map(
                t.layer_obj(n).unwrap().clone(),
                p.layer_obj(n).unwrap().clone(),
                map,
            )
            .unwrap();
            assert!(iso.is_invertible());
        }
        t.check_axioms().unwrap();
    }

    #[test]
    fn total_composition_ucom_unit_arities() {
        let p = builtin_ucom(Cat::VectQ, 3).unwrap();
        let g = p.total_composition(2, &[1, 1]).unwrap();
        assert_eq!(g.dom().dim(), 1);
        assert_eq!(g.cod().dim(), 1);
        assert_eq!(g.apply_basis(0), Elem::basis(Cat::VectQ, 0));
    }

    #[test]
    fn total_composition_uass_arity_one() {
        let p = builtin_uass(Cat::VectQ, 2).unwrap();
        let g = p.total_composition(1, &[1]).unwrap();
        assert_eq!(g.dom().dim(), 1);
        assert_eq!(g.apply_basis(0), Elem::basis(Cat::VectQ, 0));
    }

    #[test]
    fn total_composition_truncation_error() {
        let p = builtin_ucom(Cat::VectQ, 3).unwrap();
        assert!(matches!(p.total_composition(2, &[2, 2]), Err(Error::Truncation { .. })));
    }

    #[test]
    fn corrupted_composition_detected() {
        let p = builtin_uass(Cat::VectQ, 3).unwrap();
        let key = (2usize, 2usize, 0usize);
        let c = p.comp(2, 2, 0).unwrap().clone();
        let mut map = c.matrix().unwrap().as_basis_map().unwrap();
        map.swap(0, 1);
        let bad = Morphism::from_basis_map(c.dom().clone(), c.cod().clone(), map).unwrap();
        let corrupted = p.with_comp_entry(key.0, key.1, key.2, bad);
        assert!(corrupted.check_axioms().is_err());
    }

    #[test]
    fn operad_morphism_abelianization_validates() {
        let p = builtin_uass(Cat::VectQ, 3).unwrap();
        let c = builtin_ucom(Cat::VectQ, 3).unwrap();
        abelianization(&p, &c).unwrap();
    }

    #[test]
    fn expand_perm_consistency_via_end_operad() {
        // End_A has independently defined composition and action, so its
        // axiom check exercises the block-expansion formula.
        let a = Obj::vect(2);
        let e = endomorphism_operad(&a, 4, 10_000_000).unwrap();
        e.check_axioms().unwrap();
    }

    #[test]
    fn layer_coinvariants_regular_times_power() {
        // dim Q[Σ2] ⊗_{Σ2} (Q^2)^{⊗2} = 4.
        let p = builtin_uass(Cat::VectQ, 2).unwrap();
        let x = Obj::vect(2);
        let q = layer_coinvariants(&p, 0, 2, &x).unwrap();
        assert_eq!(q.obj.dim(), 4);
    }
}
