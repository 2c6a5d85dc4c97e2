//! Algebras over an operad: free algebras with weight truncation,
//! presentations by generators and relations, cellular extensions, and the
//! exhaustive axiom checker.
//!
//! All algebras here live in `VectQ` and inside a weight-truncated universe:
//! generators have weight 1, the weight-`k` part of a free algebra is
//! `P(k) ⊗_{Σ_k} X^{⊗k}`, and every γ that would land beyond the cap either
//! reports overflow or is skipped, never silently truncated.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::cat::{
    coproduct, index_tuple, quotient_of, tuple_index, tuples, Cat, Elem, Morphism, Obj,
    QuotientObj,
};
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec, SpanReducer};
use crate::operad::{layer_coinvariants, Operad};
use crate::rational::Q;

/// A weight-truncated free algebra `⊕_{k ≤ W} P(k) ⊗_{Σ_k} X^{⊗k}`.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub operad: Arc<Operad>,
    pub generators: Obj,
    pub weight_cap: usize,
    pub carrier: Obj,
    /// Per-weight coinvariant quotients of `P(k) ⊗ X^{⊗k}`.
    pub layers: Vec<QuotientObj>,
    /// Start of the weight-`k` block in the carrier.
    pub offsets: Vec<usize>,
}

/// Result of a γ evaluation: the value plus a flag reporting whether any
/// component overflowed the weight cap and was dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaValue {
    pub value: SparseVec,
    pub overflow: bool,
}

impl FreeAlgebra {
    pub fn new(operad: &Arc<Operad>, generators: &Obj, weight_cap: usize) -> Result<FreeAlgebra> {
        if operad.cat() != Cat::VectQ || generators.cat() != Cat::VectQ {
            return Err(Error::Invalid(String::from("free algebras are VectQ-only")));
        }
        if weight_cap > operad.max_arity() {
            return Err(Error::Truncation {
                what: String::from("free algebra weight cap"),
                needed: weight_cap,
                cap: operad.max_arity(),
            });
        }
        let mut layers = Vec::with_capacity(weight_cap + 1);
        for k in 0..=weight_cap {
            layers.push(layer_coinvariants(operad, 0, k, generators)?);
        }
        let parts: Vec<Obj> = layers.iter().map(|l| l.obj.clone()).collect();
        let (carrier, _) = coproduct(Cat::VectQ, &parts)?;
        let mut offsets = Vec::with_capacity(weight_cap + 1);
        let mut acc = 0;
        for l in &layers {
            offsets.push(acc);
            acc += l.obj.dim();
        }
        Ok(FreeAlgebra {
            operad: operad.clone(),
            generators: generators.clone(),
            weight_cap,
            carrier,
            layers,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// Weight of a carrier basis element.
    pub fn weight(&self, global: usize) -> usize {
        self.decode(global).0
    }

    pub fn weights(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.weight(i)).collect()
    }

    /// Global basis index of a weight-`k` class.
    pub fn class_index(&self, k: usize, local: usize) -> usize {
        self.offsets[k] + local
    }

    pub fn decode(&self, global: usize) -> (usize, usize) {
        let mut k = self.offsets.len() - 1;
        while self.offsets[k] > global {
            k -= 1;
        }
        (k, global - self.offsets[k])
    }

    /// Canonical representative `(k, p index, X-tuple)` of a basis class.
    pub fn rep(&self, global: usize) -> (usize, usize, Vec<usize>) {
        let (k, local) = self.decode(global);
        let ambient = self.layers[k].reps[local];
        let xk = self.generators.dim().pow(k as u32).max(1);
        let p_idx = ambient / xk;
        let t_idx = ambient % xk;
        let dims = vec![self.generators.dim(); k];
        (k, p_idx, index_tuple(t_idx, &dims))
    }

    /// Project a raw element of `P(k) ⊗ X^{⊗k}` into the carrier.
    pub fn project_layer(&self, k: usize, v: &SparseVec) -> SparseVec {
        let off = self.offsets[k];
        self.layers[k]
            .projection
            .matrix()
            .unwrap()
            .apply(v)
            .map_indices(|i| Some(i + off))
    }

    /// The weight-1 embedding `X → F(X)`.
    pub fn generator_embedding(&self) -> Morphism {
        let cols: Vec<SparseVec> = (0..self.generators.dim())
            .map(|x| self.project_layer(1, &SparseVec::unit(x)))
            .collect();
        Morphism::from_matrix(
            self.generators.clone(),
            self.carrier.clone(),
            SparseMat::from_cols(self.dim(), cols),
        )
        .unwrap()
    }

    /// The unit of the free algebra, from `P(0)` (requires `dim P(0) = 1`).
    pub fn unit_vector(&self) -> SparseVec {
        self.project_layer(0, &SparseVec::unit(0))
    }

    /// γ on a basis tuple: graft every argument's representative into `p`,
    /// collect the X-tuples in slot order, project back to the carrier.
    /// Overflow means the total weight exceeds the cap; the value is then 0.
    pub fn gamma_basis(&self, n: usize, p_idx: usize, args: &[usize]) -> Result<GammaValue> {
        debug_assert_eq!(args.len(), n);
        let reps: Vec<(usize, usize, Vec<usize>)> = args.iter().map(|&a| self.rep(a)).collect();
        let total: usize = reps.iter().map(|(k, _, _)| *k).sum();
        if total > self.weight_cap {
            return Ok(GammaValue { value: SparseVec::zero(), overflow: true });
        }
        // Graft ascending by inner arity so intermediate arities stay within
        // max(n, total) ≤ operad truncation.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (reps[j].0, j));
        let mut positions: Vec<usize> = (0..n).collect();
        let mut acc = Elem::Vec(SparseVec::unit(p_idx));
        let mut arity = n;
        for &j in &order {
            let (k, q_idx, _) = &reps[j];
            let pos = positions[j];
            acc = self.operad.compose_elem(
                arity,
                *k,
                pos,
                &acc,
                &Elem::Vec(SparseVec::unit(*q_idx)),
            )?;
            for (jj, pp) in positions.iter_mut().enumerate() {
                if jj != j && *pp > pos {
                    *pp = *pp + k - 1;
                }
            }
            arity = arity + k - 1;
        }
        // X-tuple: blocks keep the original slot order under grafting.
        let mut xt = Vec::with_capacity(total);
        for (_, _, t) in &reps {
            xt.extend_from_slice(t);
        }
        let dims = vec![self.generators.dim(); total];
        let t_idx = if total == 0 { 0 } else { tuple_index(&xt, &dims) };
        let xdim = self.generators.dim().pow(total as u32).max(1);
        let raw = match acc {
            Elem::Vec(v) => v.map_indices(|pi| Some(pi * xdim + t_idx)),
            Elem::Pt(_) => unreachable!(),
        };
        Ok(GammaValue { value: self.project_layer(total, &raw), overflow: false })
    }

    /// Multilinear extension of [`FreeAlgebra::gamma_basis`].
    pub fn gamma_vec(&self, n: usize, p: &SparseVec, args: &[SparseVec]) -> Result<GammaValue> {
        let mut out = SparseVec::zero();
        let mut overflow = false;
        let supports: Vec<&[(usize, Q)]> = args.iter().map(|a| a.entries.as_slice()).collect();
        for (p_idx, pc) in &p.entries {
            let mut stack = vec![(0usize, pc.clone(), Vec::<usize>::with_capacity(n))];
            while let Some((slot, coef, tuple)) = stack.pop() {
                if slot == n {
                    let g = self.gamma_basis(n, *p_idx, &tuple)?;
                    overflow |= g.overflow;
                    out = out.axpy(&coef, &g.value);
                    continue;
                }
                for (ai, ac) in supports[slot] {
                    let mut t = tuple.clone();
                    t.push(*ai);
                    stack.push((slot + 1, &coef * ac, t));
                }
            }
        }
        Ok(GammaValue { value: out, overflow })
    }
}

/// How an algebra evaluates its structure maps.
#[derive(Debug, Clone)]
enum AlgebraKind {
    /// Explicit γ_n matrices `P(n) ⊗ A^{⊗n} → A` for `0 ≤ n ≤ max_arity`.
    Explicit(Vec<Morphism>),
    /// A weight-truncated free algebra.
    Free(FreeAlgebra),
    /// A quotient of a free algebra by a saturated relation span.
    Presented {
        free: FreeAlgebra,
        /// free carrier → quotient carrier.
        projection: SparseMat,
        /// free-basis representative of each quotient basis element.
        reps: Vec<usize>,
    },
}

/// An algebra over an operad: a carrier with action maps `γ_n : P(n) ⊗
/// A^{⊗n} → A` for `0 ≤ n ≤ max_arity`, evaluated exactly.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub operad: Arc<Operad>,
    pub carrier: Obj,
    pub max_arity: usize,
    kind: AlgebraKind,
    /// Weight of each carrier basis element, when the algebra is graded.
    pub weights: Option<Vec<usize>>,
}

/// Certificate from a successful algebra axiom check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraCertificate {
    pub unit_checks: usize,
    pub assoc_checks: usize,
    pub equivariance_checks: usize,
    /// Checks skipped because a route overflowed the weight cap.
    pub overflow_skips: usize,
}

/// First algebra axiom violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    Unit { basis: usize },
    Assoc { outer: usize, inner: Vec<usize>, witness: usize },
    Equivariance { arity: usize, generator: usize, witness: usize },
}

impl core::fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AlgebraViolation::Unit { basis } => write!(f, "unit axiom fails on basis {basis}"),
            AlgebraViolation::Assoc { outer, inner, witness } => write!(
                f,
                "associativity fails for s={outer}, inner arities {inner:?}, witness {witness}"
            ),
            AlgebraViolation::Equivariance { arity, generator, witness } => write!(
                f,
                "equivariance fails at arity {arity}, generator {generator}, witness {witness}"
            ),
        }
    }
}

impl Algebra {
    /// Algebra from explicit action matrices.
    pub fn explicit(operad: &Arc<Operad>, carrier: Obj, actions: Vec<Morphism>) -> Result<Algebra> {
        if carrier.cat() != Cat::VectQ {
            return Err(Error::Invalid(String::from("algebras are VectQ-only")));
        }
        let max_arity = actions.len().saturating_sub(1);
        if max_arity > operad.max_arity() {
            return Err(Error::Truncation {
                what: String::from("algebra actions"),
                needed: max_arity,
                cap: operad.max_arity(),
            });
        }
        for (n, g) in actions.iter().enumerate() {
            let dom = crate::cat::tensor(
                operad.layer_obj(n)?,
                &crate::operad::tensor_power(&carrier, n)?,
            )?;
            if g.dom() != &dom || g.cod() != &carrier {
                return Err(Error::Shape(format!("gamma_{n} has wrong shape")));
            }
        }
        Ok(Algebra {
            operad: operad.clone(),
            carrier,
            max_arity,
            kind: AlgebraKind::Explicit(actions),
            weights: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// The free algebra this algebra is built from, if any.
    pub fn free_data(&self) -> Option<&FreeAlgebra> {
        match &self.kind {
            AlgebraKind::Free(f) => Some(f),
            AlgebraKind::Presented { free, .. } => Some(free),
            AlgebraKind::Explicit(_) => None,
        }
    }

    /// Whether this algebra is free on its generators (no relations).
    pub fn is_free(&self) -> bool {
        matches!(self.kind, AlgebraKind::Free(_))
    }

    /// Projection from the free carrier (identity for free algebras).
    pub fn presentation_projection(&self) -> Option<Morphism> {
        match &self.kind {
            AlgebraKind::Presented { free, projection, .. } => Some(
                Morphism::from_matrix(
                    free.carrier.clone(),
                    self.carrier.clone(),
                    projection.clone(),
                )
                .unwrap(),
            ),
            AlgebraKind::Free(free) => Some(Morphism::identity(&free.carrier)),
            AlgebraKind::Explicit(_) => None,
        }
    }

    /// Free-basis representative of a carrier basis element.
    pub fn free_rep(&self, i: usize) -> Option<usize> {
        match &self.kind {
            AlgebraKind::Free(_) => Some(i),
            AlgebraKind::Presented { reps, .. } => Some(reps[i]),
            AlgebraKind::Explicit(_) => None,
        }
    }

    /// γ on a basis tuple.
    pub fn gamma_basis(&self, n: usize, p_idx: usize, args: &[usize]) -> Result<GammaValue> {
        if n > self.max_arity {
            return Err(Error::Truncation {
                what: String::from("algebra action"),
                needed: n,
                cap: self.max_arity,
            });
        }
        match &self.kind {
            AlgebraKind::Explicit(actions) => {
                let d = self.carrier.dim();
                let mut col = p_idx;
                for &a in args {
                    col = col * d + a;
                }
                Ok(GammaValue {
                    value: actions[n].matrix().unwrap().col(col).clone(),
                    overflow: false,
                })
            }
            AlgebraKind::Free(f) => f.gamma_basis(n, p_idx, args),
            AlgebraKind::Presented { free, projection, reps } => {
                let lifted: Vec<usize> = args.iter().map(|&a| reps[a]).collect();
                let g = free.gamma_basis(n, p_idx, &lifted)?;
                Ok(GammaValue { value: projection.apply(&g.value), overflow: g.overflow })
            }
        }
    }

    /// Multilinear γ.
    pub fn gamma_vec(&self, n: usize, p: &SparseVec, args: &[SparseVec]) -> Result<GammaValue> {
        let mut out = SparseVec::zero();
        let mut overflow = false;
        for (p_idx, pc) in &p.entries {
            let mut stack = vec![(0usize, pc.clone(), Vec::<usize>::with_capacity(n))];
            while let Some((slot, coef, tuple)) = stack.pop() {
                if slot == n {
                    let g = self.gamma_basis(n, *p_idx, &tuple)?;
                    overflow |= g.overflow;
                    out = out.axpy(&coef, &g.value);
                    continue;
                }
                for (ai, ac) in &args[slot].entries {
                    let mut t = tuple.clone();
                    t.push(*ai);
                    stack.push((slot + 1, &coef * ac, t));
                }
            }
        }
        Ok(GammaValue { value: out, overflow })
    }

    /// Materialize γ_n as a morphism (only sensible at small dimensions).
    pub fn gamma_morphism(&self, n: usize) -> Result<Morphism> {
        let dom = crate::cat::tensor(
            self.operad.layer_obj(n)?,
            &crate::operad::tensor_power(&self.carrier, n)?,
        )?;
        let d = self.carrier.dim();
        let dims = vec![d; n];
        let mut cols = Vec::with_capacity(dom.dim());
        for p_idx in 0..self.operad.dim(n)? {
            if n == 0 {
                cols.push(self.gamma_basis(0, p_idx, &[])?.value);
            } else {
                for t in tuples(&dims) {
                    cols.push(self.gamma_basis(n, p_idx, &t)?.value);
                }
            }
        }
        Morphism::from_matrix(dom, self.carrier.clone(), SparseMat::from_cols(d, cols))
    }

    /// The algebra unit `γ_0 : P(0) → A`.
    pub fn unit_morphism(&self) -> Result<Morphism> {
        self.gamma_morphism(0)
    }

    /// The unit element when `dim P(0) = 1`.
    pub fn unit_vector(&self) -> Result<SparseVec> {
        if self.operad.dim(0)? != 1 {
            return Err(Error::Invalid(String::from("operad has no canonical constant")));
        }
        Ok(self.gamma_basis(0, 0, &[])?.value)
    }

    /// Binary product through the first basis operation of `P(2)` (the
    /// word `12` for uAss, the unique point for uCom).
    pub fn product(&self, a: &SparseVec, b: &SparseVec) -> Result<SparseVec> {
        Ok(self.gamma_vec(2, &SparseVec::unit(0), &[a.clone(), b.clone()])?.value)
    }

    /// Exhaustive axiom check on basis elements within `max_arity`.
    /// Violations are return values; `Err` means the check could not run.
    pub fn check_axioms(
        &self,
    ) -> Result<core::result::Result<AlgebraCertificate, AlgebraViolation>> {
        let mut cert = AlgebraCertificate::default();
        let d = self.carrier.dim();
        let unit = match self.operad.unit_elem() {
            Elem::Vec(v) => v,
            Elem::Pt(_) => return Err(Error::CategoryMismatch),
        };
        if self.max_arity >= 1 {
            for a in 0..d {
                let g = self.gamma_vec(1, &unit, &[SparseVec::unit(a)])?;
                cert.unit_checks += 1;
                if g.value != SparseVec::unit(a) {
                    return Ok(Err(AlgebraViolation::Unit { basis: a }));
                }
            }
        }
        for s in 1..=self.max_arity {
            for ns in compositions(self.max_arity, s) {
                if let Some(viol) = self.check_assoc_decomposition(s, &ns, &mut cert)? {
                    return Ok(Err(viol));
                }
            }
        }
        for n in 2..=self.max_arity {
            let dims = vec![d; n];
            for g in 0..n - 1 {
                let act = self.operad.layer(n)?.gen(g);
                for p_idx in 0..self.operad.dim(n)? {
                    let p_sigma = match act.apply_basis(p_idx) {
                        Elem::Vec(v) => v,
                        Elem::Pt(_) => unreachable!(),
                    };
                    for (w, t) in tuples(&dims).enumerate() {
                        let args: Vec<SparseVec> =
                            t.iter().map(|&a| SparseVec::unit(a)).collect();
                        let lhs = self.gamma_vec(n, &p_sigma, &args)?;
                        let mut ts = t.clone();
                        ts.swap(g, g + 1);
                        let args_s: Vec<SparseVec> =
                            ts.iter().map(|&a| SparseVec::unit(a)).collect();
                        let rhs = self.gamma_vec(n, &SparseVec::unit(p_idx), &args_s)?;
                        if lhs.overflow || rhs.overflow {
                            cert.overflow_skips += 1;
                            continue;
                        }
                        cert.equivariance_checks += 1;
                        if lhs.value != rhs.value {
                            return Ok(Err(AlgebraViolation::Equivariance {
                                arity: n,
                                generator: g,
                                witness: w,
                            }));
                        }
                    }
                }
            }
        }
        Ok(Ok(cert))
    }

    fn check_assoc_decomposition(
        &self,
        s: usize,
        ns: &[usize],
        cert: &mut AlgebraCertificate,
    ) -> Result<Option<AlgebraViolation>> {
        let n: usize = ns.iter().sum();
        if n > self.max_arity {
            return Ok(None);
        }
        let d = self.carrier.dim();
        let inner_dims: Vec<usize> =
            ns.iter().map(|&k| self.operad.dim(k)).collect::<Result<_>>()?;
        let arg_dims = vec![d; n];
        let mut witness = 0usize;
        for p in 0..self.operad.dim(s)? {
            for qs in tuples(&inner_dims) {
                for args in tuples(&arg_dims) {
                    // Route 1: evaluate inner blocks, then the outer γ_s.
                    let mut blocks = Vec::with_capacity(s);
                    let mut offset = 0;
                    let mut overflow = false;
                    for (j, &k) in ns.iter().enumerate() {
                        let g = self.gamma_basis(k, qs[j], &args[offset..offset + k])?;
                        overflow |= g.overflow;
                        blocks.push(g.value);
                        offset += k;
                    }
                    let route1 = if overflow {
                        None
                    } else {
                        let g = self.gamma_vec(s, &SparseVec::unit(p), &blocks)?;
                        (!g.overflow).then_some(g.value)
                    };
                    // Route 2: compose in the operad, then act once.
                    let composite = self.operad.total_compose_tuple(s, ns, p, &qs)?;
                    let comp_vec = match composite {
                        Elem::Vec(v) => v,
                        Elem::Pt(_) => unreachable!(),
                    };
                    let arg_vecs: Vec<SparseVec> =
                        args.iter().map(|&a| SparseVec::unit(a)).collect();
                    let g2 = self.gamma_vec(n, &comp_vec, &arg_vecs)?;
                    let route2 = (!g2.overflow).then_some(g2.value);
                    match (route1, route2) {
                        (Some(a), Some(b)) => {
                            cert.assoc_checks += 1;
                            if a != b {
                                return Ok(Some(AlgebraViolation::Assoc {
                                    outer: s,
                                    inner: ns.to_vec(),
                                    witness,
                                }));
                            }
                        }
                        _ => cert.overflow_skips += 1,
                    }
                    witness += 1;
                }
            }
        }
        Ok(None)
    }
}

/// All length-`s` tuples of nonnegative integers with sum ≤ `cap`.
fn compositions(cap: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; s];
    loop {
        if cur.iter().sum::<usize>() <= cap {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == s {
                return out;
            }
            cur[i] += 1;
            if cur.iter().sum::<usize>() <= cap {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// The free `P`-algebra on `X`, truncated at weight `W`.
pub fn free_algebra(operad: &Arc<Operad>, generators: &Obj, weight_cap: usize) -> Result<Algebra> {
    let f = FreeAlgebra::new(operad, generators, weight_cap)?;
    let weights = f.weights();
    Ok(Algebra {
        operad: operad.clone(),
        carrier: f.carrier.clone(),
        max_arity: operad.max_arity(),
        kind: AlgebraKind::Free(f),
        weights: Some(weights),
    })
}

/// A presentation of an algebra: weight-1 generators and relation pairs as
/// coordinate vectors over the weight-truncated free carrier.
#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    pub operad: Arc<Operad>,
    pub generators: Obj,
    pub relations: Vec<(SparseVec, SparseVec)>,
    pub weight_cap: usize,
}

impl AlgebraPresentation {
    pub fn new(
        operad: &Arc<Operad>,
        generators: Obj,
        relations: Vec<(SparseVec, SparseVec)>,
        weight_cap: usize,
    ) -> AlgebraPresentation {
        AlgebraPresentation { operad: operad.clone(), generators, relations, weight_cap }
    }

    /// The same presentation with a larger weight cap; relation vectors are
    /// re-indexed along the canonical inclusion of free carriers.
    pub fn extend_cap(&self, new_cap: usize) -> Result<AlgebraPresentation> {
        if new_cap < self.weight_cap {
            return Err(Error::Invalid(String::from("extend_cap cannot shrink the cap")));
        }
        if new_cap == self.weight_cap {
            return Ok(self.clone());
        }
        let old = FreeAlgebra::new(&self.operad, &self.generators, self.weight_cap)?;
        let new = FreeAlgebra::new(&self.operad, &self.generators, new_cap)?;
        let remap = |v: &SparseVec| -> SparseVec {
            v.map_indices(|i| {
                let (k, local) = old.decode(i);
                Some(new.class_index(k, local))
            })
        };
        Ok(AlgebraPresentation {
            operad: self.operad.clone(),
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|(l, r)| (remap(l), remap(r))).collect(),
            weight_cap: new_cap,
        })
    }
}

/// Saturate the relation span inside the truncated free algebra: close
/// `span{l_i - r_i}` under γ-contexts until the dimension stabilizes.
/// Pure-generator co-arguments suffice: by associativity any composite
/// co-argument is reached through a larger pure-generator context.
fn saturate_relations(
    free: &FreeAlgebra,
    relations: &[(SparseVec, SparseVec)],
) -> Result<SpanReducer> {
    let mut red = SpanReducer::new(free.dim());
    let mut queue: Vec<SparseVec> = Vec::new();
    for (l, r) in relations {
        let v = red.reduce(l.sub(r));
        if !v.is_zero() {
            red.insert(v.clone());
            queue.push(v);
        }
    }
    let xdim = free.generators.dim();
    let nmax = free.weight_cap.min(free.operad.max_arity()).max(1);
    while let Some(v) = queue.pop() {
        let vmax = v.entries.iter().map(|(i, _)| free.weight(*i)).max().unwrap_or(0);
        for n in 1..=nmax {
            if vmax + n - 1 > free.weight_cap {
                continue;
            }
            let gen_dims = vec![xdim; n - 1];
            for p in 0..free.operad.dim(n)? {
                for pos in 0..n {
                    for gens in tuples(&gen_dims) {
                        let mut args: Vec<SparseVec> = Vec::with_capacity(n);
                        for (gi, &g) in gens.iter().enumerate() {
                            if gi == pos {
                                args.push(v.clone());
                            }
                            args.push(free.project_layer(1, &SparseVec::unit(g)));
                        }
                        if pos == n - 1 {
                            args.push(v.clone());
                        }
                        let g = free.gamma_vec(n, &SparseVec::unit(p), &args)?;
                        debug_assert!(!g.overflow);
                        let reduced = red.reduce(g.value);
                        if !reduced.is_zero() {
                            red.insert(reduced.clone());
                            queue.push(reduced);
                        }
                    }
                }
            }
        }
    }
    Ok(red)
}

/// Quotient of the truncated free algebra by the saturated relation span.
/// Descent of γ to the quotient is re-verified on the spanning rows with
/// arbitrary carrier co-arguments in binary contexts; a failure is fatal.
pub fn algebra_from_presentation(pres: &AlgebraPresentation) -> Result<Algebra> {
    let free = FreeAlgebra::new(&pres.operad, &pres.generators, pres.weight_cap)?;
    for (l, r) in &pres.relations {
        for v in [l, r] {
            if let Some((lead, _)) = v.lead() {
                if lead >= free.dim() {
                    return Err(Error::Shape(String::from("relation vector out of range")));
                }
            }
        }
    }
    let red = saturate_relations(&free, &pres.relations)?;
    let pivot_list: Vec<usize> = red.pivots().collect();
    let rows: Vec<SparseVec> = pivot_list
        .iter()
        .map(|&p| {
            let canon = red.reduce(SparseVec::unit(p));
            SparseVec::unit(p).sub(&canon)
        })
        .collect();
    if free.operad.max_arity() >= 2 {
        for row in &rows {
            let rmax = row.entries.iter().map(|(i, _)| free.weight(*i)).max().unwrap_or(0);
            for b in 0..free.dim() {
                if rmax + free.weight(b) > free.weight_cap {
                    continue;
                }
                for p in 0..free.operad.dim(2)? {
                    for (lhs, rhs) in [
                        (row.clone(), SparseVec::unit(b)),
                        (SparseVec::unit(b), row.clone()),
                    ] {
                        let g = free.gamma_vec(2, &SparseVec::unit(p), &[lhs, rhs])?;
                        if !g.overflow && !red.contains(&g.value) {
                            return Err(Error::NoDescent(format!(
                                "binary context p={p} with co-argument {b}"
                            )));
                        }
                    }
                }
            }
        }
    }
    let q = quotient_of(&free.carrier, red)?;
    let weights: Vec<usize> = q.reps.iter().map(|&r| free.weight(r)).collect();
    let projection = q.projection.matrix().unwrap().clone();
    Ok(Algebra {
        operad: pres.operad.clone(),
        carrier: q.obj.clone(),
        max_arity: pres.operad.max_arity(),
        kind: AlgebraKind::Presented { free, projection, reps: q.reps },
        weights: Some(weights),
    })
}

/// Attachment data for a cellular extension: fresh generators, some glued
/// to values in the algebra.
#[derive(Debug, Clone)]
pub struct Attachment {
    pub generators: Obj,
    /// `(generator index, value in A)`; unlisted generators stay free.
    pub values: Vec<(usize, SparseVec)>,
}

/// Cellular extension `A → A[u]`: re-present `A` on its basis elements as
/// weight-1 generators, adjoin the fresh generators, identify the old
/// structure, and glue the attached generators to their values.
pub fn cellular_extension(
    algebra: &Algebra,
    attach: &Attachment,
    weight_cap: usize,
) -> Result<(Algebra, Morphism)> {
    let p = &algebra.operad;
    let d = algebra.dim();
    let mut labels: Vec<String> =
        algebra.carrier.basis().iter().map(|b| format!("g({b})")).collect();
    for b in attach.generators.basis() {
        labels.push(format!("u({b})"));
    }
    let gens = Obj::new(Cat::VectQ, labels)?;
    let free = FreeAlgebra::new(p, &gens, weight_cap)?;
    let embed = |i: usize| free.project_layer(1, &SparseVec::unit(i));
    let as_gen_combination = |v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::zero();
        for (i, c) in &v.entries {
            out = out.axpy(c, &embed(*i));
        }
        out
    };
    let mut relations: Vec<(SparseVec, SparseVec)> = Vec::new();
    let nmax = weight_cap.min(p.max_arity()).min(algebra.max_arity);
    for n in 0..=nmax {
        let dims = vec![d; n];
        for p_idx in 0..p.dim(n)? {
            for t in tuples(&dims) {
                let args: Vec<SparseVec> = t.iter().map(|&a| embed(a)).collect();
                let lhs = free.gamma_vec(n, &SparseVec::unit(p_idx), &args)?;
                if lhs.overflow {
                    continue;
                }
                let value = algebra.gamma_basis(n, p_idx, &t)?;
                if value.overflow {
                    continue;
                }
                relations.push((lhs.value, as_gen_combination(&value.value)));
            }
        }
    }
    for (j, v) in &attach.values {
        relations.push((embed(d + j), as_gen_combination(v)));
    }
    let pres = AlgebraPresentation::new(p, gens, relations, weight_cap);
    let extended = algebra_from_presentation(&pres)?;
    let proj = extended.presentation_projection().unwrap();
    let cols: Vec<SparseVec> =
        (0..d).map(|i| proj.matrix().unwrap().apply(&embed(i))).collect();
    let map = Morphism::from_matrix(
        algebra.carrier.clone(),
        extended.carrier.clone(),
        SparseMat::from_cols(extended.dim(), cols),
    )?;
    // The canonical map must be an algebra map; verify on binary products.
    if algebra.max_arity >= 2 && extended.max_arity >= 2 {
        let m = map.matrix().unwrap();
        for p_idx in 0..p.dim(2)? {
            for a in 0..d {
                for b in 0..d {
                    let down = algebra.gamma_basis(2, p_idx, &[a, b])?;
                    if down.overflow {
                        continue;
                    }
                    let up = extended.gamma_vec(
                        2,
                        &SparseVec::unit(p_idx),
                        &[m.col(a).clone(), m.col(b).clone()],
                    )?;
                    if up.overflow {
                        continue;
                    }
                    if m.apply(&down.value) != up.value {
                        return Err(Error::NoDescent(String::from(
                            "cellular extension map is not an algebra map",
                        )));
                    }
                }
            }
        }
    }
    Ok((extended, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{builtin_uass, builtin_ucom};

    fn ucom(n: usize) -> Arc<Operad> {
        Arc::new(builtin_ucom(Cat::VectQ, n).unwrap())
    }

    fn uass(n: usize) -> Arc<Operad> {
        Arc::new(builtin_uass(Cat::VectQ, n).unwrap())
    }

    fn gen1() -> Obj {
        Obj::new(Cat::VectQ, vec![String::from("x")]).unwrap()
    }

    #[test]
    fn free_ucom_rank1_is_truncated_polynomials() {
        let a = free_algebra(&ucom(4), &gen1(), 3).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(matches!(a.check_axioms().unwrap(), Ok(_)));
    }

    #[test]
    fn free_uass_rank1_dims() {
        let a = free_algebra(&uass(4), &gen1(), 3).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(matches!(a.check_axioms().unwrap(), Ok(_)));
    }

    #[test]
    fn free_uass_rank2_weight_two_layer() {
        let x = Obj::new(Cat::VectQ, vec![String::from("x"), String::from("y")]).unwrap();
        let a = free_algebra(&uass(4), &x, 2).unwrap();
        // weights 0,1,2 → dims 1, 2, 4 (words of length 2).
        assert_eq!(a.dim(), 7);
        let w = a.weights.as_ref().unwrap();
        assert_eq!(w.iter().filter(|&&k| k == 2).count(), 4);
    }

    #[test]
    fn presented_dual_numbers() {
        let op = ucom(4);
        let free = FreeAlgebra::new(&op, &gen1(), 4).unwrap();
        let x2 = free.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::zero())],
            4,
        );
        let a = algebra_from_presentation(&pres).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(matches!(a.check_axioms().unwrap(), Ok(_)));
        let prod = a.product(&SparseVec::unit(1), &SparseVec::unit(1)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn presented_no_relations_is_free() {
        let op = ucom(4);
        let pres = AlgebraPresentation::new(&op, gen1(), Vec::new(), 3);
        let a = algebra_from_presentation(&pres).unwrap();
        let f = free_algebra(&op, &gen1(), 3).unwrap();
        assert_eq!(a.dim(), f.dim());
        let proj = a.presentation_projection().unwrap();
        assert_eq!(proj.matrix().unwrap(), &SparseMat::identity(4));
    }

    #[test]
    fn presented_idempotent_over_uass() {
        let op = uass(4);
        let free = FreeAlgebra::new(&op, &gen1(), 4).unwrap();
        let x1 = free.class_index(1, 0);
        let x2 = free.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::unit(x1))],
            4,
        );
        let a = algebra_from_presentation(&pres).unwrap();
        assert_eq!(a.dim(), 2);
        let x = SparseVec::unit(1);
        assert_eq!(a.product(&x, &x).unwrap(), x);
    }

    #[test]
    fn presentation_reflexive_section_splits() {
        let op = ucom(3);
        let free = FreeAlgebra::new(&op, &gen1(), 3).unwrap();
        let x2 = free.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::zero())],
            3,
        );
        let a = algebra_from_presentation(&pres).unwrap();
        let proj = a.presentation_projection().unwrap();
        for i in 0..a.dim() {
            let rep = a.free_rep(i).unwrap();
            assert_eq!(proj.matrix().unwrap().col(rep), &SparseVec::unit(i));
        }
    }

    #[test]
    fn cellular_extension_fresh_generator() {
        let op = ucom(4);
        let free = FreeAlgebra::new(&op, &gen1(), 2).unwrap();
        let x2 = free.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::zero())],
            2,
        );
        let a = algebra_from_presentation(&pres).unwrap();
        let attach = Attachment {
            generators: Obj::new(Cat::VectQ, vec![String::from("y")]).unwrap(),
            values: Vec::new(),
        };
        let (ext, map) = cellular_extension(&a, &attach, 2).unwrap();
        // 1, x, y, xy, y² survive (x² = 0).
        assert_eq!(ext.dim(), 5);
        assert!(matches!(ext.check_axioms().unwrap(), Ok(_)));
        assert_eq!(map.matrix().unwrap().rank(), a.dim());
    }

    #[test]
    fn cellular_extension_glue_to_existing() {
        let op = ucom(4);
        let free = FreeAlgebra::new(&op, &gen1(), 2).unwrap();
        let x2 = free.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::zero())],
            2,
        );
        let a = algebra_from_presentation(&pres).unwrap();
        let attach = Attachment {
            generators: Obj::new(Cat::VectQ, vec![String::from("y")]).unwrap(),
            values: vec![(0, SparseVec::unit(1))],
        };
        let (ext, map) = cellular_extension(&a, &attach, 2).unwrap();
        assert_eq!(ext.dim(), a.dim());
        assert!(map.is_invertible());
    }

    #[test]
    fn corrupted_action_detected() {
        let op = ucom(3);
        let a = free_algebra(&op, &gen1(), 2).unwrap();
        let mut actions = Vec::new();
        for n in 0..=2 {
            actions.push(a.gamma_morphism(n).unwrap());
        }
        let g2 = &actions[2];
        let mut cols = g2.matrix().unwrap().cols.clone();
        cols[0] = SparseVec::unit(2); // 1·1 ↦ x² instead of 1
        let bad = Morphism::from_matrix(
            g2.dom().clone(),
            g2.cod().clone(),
            SparseMat::from_cols(a.dim(), cols),
        )
        .unwrap();
        actions[2] = bad;
        let broken = Algebra::explicit(&op, a.carrier.clone(), actions).unwrap();
        assert!(matches!(broken.check_axioms().unwrap(), Err(_)));
    }

    #[test]
    fn compositions_enumerate_small() {
        let c = compositions(2, 2);
        assert!(c.contains(&vec![0, 0]));
        assert!(c.contains(&vec![2, 0]));
        assert!(c.contains(&vec![1, 1]));
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn extend_cap_reindexes_relations() {
        let op = ucom(5);
        let free2 = FreeAlgebra::new(&op, &gen1(), 2).unwrap();
        let x2 = free2.class_index(2, 0);
        let pres = AlgebraPresentation::new(
            &op,
            gen1(),
            vec![(SparseVec::unit(x2), SparseVec::zero())],
            2,
        );
        let wide = pres.extend_cap(4).unwrap();
        let a = algebra_from_presentation(&wide).unwrap();
        assert_eq!(a.dim(), 2);
    }
}
