use super::CatalgError;
use crate::algebra::SparseVec;
use crate::exactla::{kernel_basis, solve, RatMatrix};
use crate::fincat::FiniteCategory;
use num::Zero;
use std::sync::Arc;

/// Covariant functors are left ℚ𝒞-modules, contravariant ones right
/// modules. Contravariant actions are stored already reversed
/// (action(f): M(dst f) → M(src f)) so that one Hom/tensor engine serves
/// both variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    /// Object whose value space the action of f consumes.
    pub fn in_obj(&self, cat: &FiniteCategory, f: usize) -> usize {
        let m = cat.morphism(f);
        match self {
            Variance::Covariant => m.src,
            Variance::Contravariant => m.dst,
        }
    }

    /// Object whose value space the action of f produces.
    pub fn out_obj(&self, cat: &FiniteCategory, f: usize) -> usize {
        let m = cat.morphism(f);
        match self {
            Variance::Covariant => m.dst,
            Variance::Contravariant => m.src,
        }
    }

    /// Hom-set underlying the representable at `obj`, evaluated at `at`.
    pub fn rep_hom<'a>(&self, cat: &'a FiniteCategory, obj: usize, at: usize) -> &'a [usize] {
        match self {
            Variance::Covariant => cat.hom(obj, at),
            Variance::Contravariant => cat.hom(at, obj),
        }
    }
}

pub fn same_category(a: &FiniteCategory, b: &FiniteCategory) -> bool {
    std::ptr::eq(a, b)
        || (a.object_names() == b.object_names()
            && a.morphism_count() == b.morphism_count()
            && (0..a.morphism_count()).all(|i| a.morphism(i) == b.morphism(i)))
}

/// A functor 𝒞 → Vect_ℚ (or 𝒞ᵒᵖ → Vect_ℚ) given by one matrix per
/// morphism. Identities act as identity matrices and the action respects
/// composition; `validate` checks both.
#[derive(Debug, Clone)]
pub struct CatModule {
    pub cat: Arc<FiniteCategory>,
    pub variance: Variance,
    pub dims: Vec<usize>,
    pub action: Vec<RatMatrix>,
}

impl CatModule {
    pub fn new(
        cat: Arc<FiniteCategory>,
        variance: Variance,
        dims: Vec<usize>,
        action: Vec<RatMatrix>,
    ) -> Result<Self, CatalgError> {
        let m = CatModule { cat, variance, dims, action };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), CatalgError> {
        let cat = &*self.cat;
        if self.dims.len() != cat.object_count() || self.action.len() != cat.morphism_count() {
            return Err(CatalgError::Invalid("dimension tables have wrong length".into()));
        }
        for f in 0..cat.morphism_count() {
            let a = &self.action[f];
            let (i, o) = (self.variance.in_obj(cat, f), self.variance.out_obj(cat, f));
            if a.rows() != self.dims[o] || a.cols() != self.dims[i] {
                return Err(CatalgError::Invalid(format!(
                    "action of `{}` has shape {}x{}, expected {}x{}",
                    cat.morphism(f).id,
                    a.rows(),
                    a.cols(),
                    self.dims[o],
                    self.dims[i]
                )));
            }
        }
        for (obj, &idm) in (0..cat.object_count()).zip(
            (0..cat.object_count()).map(|o| cat.identity(o)).collect::<Vec<_>>().iter(),
        ) {
            if self.action[idm] != RatMatrix::identity(self.dims[obj]) {
                return Err(CatalgError::Invalid(format!(
                    "identity of `{}` does not act as the identity",
                    cat.object_name(obj)
                )));
            }
        }
        for g in 0..cat.morphism_count() {
            for f in 0..cat.morphism_count() {
                let Some(gf) = cat.compose(g, f) else { continue };
                let composite = match self.variance {
                    Variance::Covariant => self.action[g].mul(&self.action[f]),
                    Variance::Contravariant => self.action[f].mul(&self.action[g]),
                };
                if composite != self.action[gf] {
                    return Err(CatalgError::Invalid(format!(
                        "functoriality fails on ({}, {})",
                        cat.morphism(g).id,
                        cat.morphism(f).id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(cat: Arc<FiniteCategory>, variance: Variance) -> Self {
        let dims = vec![0; cat.object_count()];
        let action = (0..cat.morphism_count()).map(|_| RatMatrix::zeros(0, 0)).collect();
        CatModule { cat, variance, dims, action }
    }

    /// The linearised representable ℚHom(obj, −) (covariant) or
    /// ℚHom(−, obj) (contravariant), acting by post-/pre-composition.
    pub fn representable(cat: Arc<FiniteCategory>, obj: usize, variance: Variance) -> Self {
        let dims: Vec<usize> =
            (0..cat.object_count()).map(|c| variance.rep_hom(&cat, obj, c).len()).collect();
        let mut action = Vec::with_capacity(cat.morphism_count());
        for f in 0..cat.morphism_count() {
            let (i, o) = (variance.in_obj(&cat, f), variance.out_obj(&cat, f));
            let in_basis = variance.rep_hom(&cat, obj, i);
            let out_basis = variance.rep_hom(&cat, obj, o);
            let mut m = RatMatrix::zeros(out_basis.len(), in_basis.len());
            for (col, &u) in in_basis.iter().enumerate() {
                let fu = match variance {
                    Variance::Covariant => cat.compose(f, u),
                    Variance::Contravariant => cat.compose(u, f),
                }
                .expect("representable action composes");
                let row = out_basis.iter().position(|&w| w == fu).expect("closed hom basis");
                m.set(row, col, crate::exactla::rat(1, 1));
            }
            action.push(m);
        }
        CatModule { cat, variance, dims, action }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero_module(&self) -> bool {
        self.total_dim() == 0
    }

    /// Offset of each object's block inside the flattened total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            off.push(acc);
            acc += d;
        }
        off
    }

    /// Total-space matrix of the action of an algebra element (a rational
    /// combination of morphisms).
    pub fn algebra_action(&self, elt: &SparseVec) -> RatMatrix {
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = RatMatrix::zeros(n, n);
        for (f, c) in elt {
            let (i, o) = (
                self.variance.in_obj(&self.cat, *f),
                self.variance.out_obj(&self.cat, *f),
            );
            let a = &self.action[*f];
            for r in 0..a.rows() {
                for s in 0..a.cols() {
                    if !a.get(r, s).is_zero() {
                        let cur = out.get(off[o] + r, off[i] + s).clone();
                        out.set(off[o] + r, off[i] + s, cur + c * a.get(r, s));
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(parts: &[&CatModule]) -> CatModule {
        assert!(!parts.is_empty());
        let cat = parts[0].cat.clone();
        let variance = parts[0].variance;
        assert!(parts.iter().all(|p| p.variance == variance && same_category(&p.cat, &cat)));
        let dims = (0..cat.object_count())
            .map(|c| parts.iter().map(|p| p.dims[c]).sum())
            .collect();
        let action = (0..cat.morphism_count())
            .map(|f| {
                RatMatrix::block_diag(&parts.iter().map(|p| &p.action[f]).collect::<Vec<_>>())
            })
            .collect();
        CatModule { cat, variance, dims, action }
    }
}

/// A natural transformation between two modules of equal variance; one
/// component matrix per object.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: CatModule,
    pub target: CatModule,
    pub comps: Vec<RatMatrix>,
}

impl ModuleMap {
    pub fn new(source: CatModule, target: CatModule, comps: Vec<RatMatrix>) -> Result<Self, CatalgError> {
        let m = ModuleMap { source, target, comps };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), CatalgError> {
        if !same_category(&self.source.cat, &self.target.cat) {
            return Err(CatalgError::CategoryMismatch);
        }
        if self.source.variance != self.target.variance {
            return Err(CatalgError::VarianceMismatch);
        }
        let cat = &*self.source.cat;
        for c in 0..cat.object_count() {
            if self.comps[c].rows() != self.target.dims[c] || self.comps[c].cols() != self.source.dims[c]
            {
                return Err(CatalgError::Invalid(format!(
                    "component at `{}` has the wrong shape",
                    cat.object_name(c)
                )));
            }
        }
        let v = self.source.variance;
        for f in 0..cat.morphism_count() {
            let (i, o) = (v.in_obj(cat, f), v.out_obj(cat, f));
            let lhs = self.comps[o].mul(&self.source.action[f]);
            let rhs = self.target.action[f].mul(&self.comps[i]);
            if lhs != rhs {
                return Err(CatalgError::Invalid(format!(
                    "naturality fails at `{}`",
                    cat.morphism(f).id
                )));
            }
        }
        Ok(())
    }

    pub fn zero(source: CatModule, target: CatModule) -> Self {
        let comps = (0..source.cat.object_count())
            .map(|c| RatMatrix::zeros(target.dims[c], source.dims[c]))
            .collect();
        ModuleMap { source, target, comps }
    }

    pub fn identity(m: &CatModule) -> Self {
        let comps = m.dims.iter().map(|&d| RatMatrix::identity(d)).collect();
        ModuleMap { source: m.clone(), target: m.clone(), comps }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        let comps = (0..self.comps.len()).map(|c| self.comps[c].mul(&other.comps[c])).collect();
        ModuleMap { source: other.source.clone(), target: self.target.clone(), comps }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let comps = (0..self.comps.len()).map(|c| self.comps[c].add(&other.comps[c])).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn scale(&self, c: &crate::exactla::Rational) -> ModuleMap {
        let comps = self.comps.iter().map(|m| m.scale(c)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn neg(&self) -> ModuleMap {
        let comps = self.comps.iter().map(|m| m.neg()).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    /// Kernel with its inclusion. Per object the kernel basis, with the
    /// induced action solved exactly (the kernel is a submodule, so the
    /// solve always succeeds).
    pub fn kernel(&self) -> (CatModule, ModuleMap) {
        let cat = self.source.cat.clone();
        let v = self.source.variance;
        let incls: Vec<RatMatrix> = self.comps.iter().map(kernel_basis).collect();
        let dims: Vec<usize> = incls.iter().map(|k| k.cols()).collect();
        let mut action = Vec::with_capacity(cat.object_count().max(self.source.action.len()));
        for f in 0..cat.morphism_count() {
            let (i, o) = (v.in_obj(&cat, f), v.out_obj(&cat, f));
            let rhs = self.source.action[f].mul(&incls[i]);
            let a = solve(&incls[o], &rhs).expect("kernel is a submodule");
            action.push(a);
        }
        let kernel = CatModule { cat, variance: v, dims, action };
        let incl = ModuleMap { source: kernel.clone(), target: self.source.clone(), comps: incls };
        (kernel, incl)
    }

    /// Cokernel with its projection, realised by exact cokernel
    /// projections per object.
    pub fn cokernel(&self) -> (CatModule, ModuleMap) {
        let cat = self.target.cat.clone();
        let v = self.target.variance;
        let projs: Vec<RatMatrix> =
            self.comps.iter().map(|m| crate::exactla::cokernel_projection(m).0).collect();
        let dims: Vec<usize> = projs.iter().map(|p| p.rows()).collect();
        let mut action = Vec::with_capacity(cat.morphism_count());
        for f in 0..cat.morphism_count() {
            let (i, o) = (v.in_obj(&cat, f), v.out_obj(&cat, f));
            // act_Q(f) · p_i = p_o · act_N(f), solved via transposes
            let rhs = projs[o].mul(&self.target.action[f]);
            let x = solve(&projs[i].transpose(), &rhs.transpose())
                .expect("image is a submodule; induced map exists");
            action.push(x.transpose());
        }
        let quotient = CatModule { cat, variance: v, dims, action };
        let proj = ModuleMap { source: self.target.clone(), target: quotient.clone(), comps: projs };
        (quotient, proj)
    }
}

/// A finite direct sum of representables, remembering the object of each
/// summand. This is the shape of projective covers and cellular chain
/// modules.
#[derive(Debug, Clone)]
pub struct FreeModule {
    pub module: CatModule,
    pub gens: Vec<usize>,
}

impl FreeModule {
    /// Block offset of summand `g` inside the value space at `obj`.
    pub fn block_offset(&self, g: usize, obj: usize) -> usize {
        let cat = &*self.module.cat;
        let v = self.module.variance;
        self.gens[..g].iter().map(|&o| v.rep_hom(cat, o, obj).len()).sum()
    }
}

pub fn free_module(cat: Arc<FiniteCategory>, variance: Variance, gens: Vec<usize>) -> FreeModule {
    if gens.is_empty() {
        return FreeModule { module: CatModule::zero(cat, variance), gens };
    }
    let parts: Vec<CatModule> =
        gens.iter().map(|&o| CatModule::representable(cat.clone(), o, variance)).collect();
    let module = CatModule::direct_sum(&parts.iter().collect::<Vec<_>>());
    FreeModule { module, gens }
}

/// The map out of a free module determined by the images of the summand
/// generators (Yoneda): summand at object g with image v ∈ m(g) sends the
/// hom basis vector u to act(u)·v.
pub fn map_from_generators(free: &FreeModule, target: &CatModule, images: &[Vec<crate::exactla::Rational>]) -> ModuleMap {
    let cat = &*target.cat;
    let v = target.variance;
    assert_eq!(images.len(), free.gens.len());
    let mut comps = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let mut m = RatMatrix::zeros(target.dims[c], free.module.dims[c]);
        let mut col = 0;
        for (gi, &gobj) in free.gens.iter().enumerate() {
            debug_assert_eq!(images[gi].len(), target.dims[gobj]);
            for &u in v.rep_hom(cat, gobj, c) {
                // act(u): m(gobj) → m(c) for either variance
                let a = &target.action[u];
                for r in 0..a.rows() {
                    let mut acc = crate::exactla::Rational::from_integer(0.into());
                    for s in 0..a.cols() {
                        acc += a.get(r, s) * &images[gi][s];
                    }
                    m.set(r, col, acc);
                }
                col += 1;
            }
        }
        comps.push(m);
    }
    ModuleMap { source: free.module.clone(), target: target.clone(), comps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn arrow() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::quiver(&["0", "1"], &[("a", 0, 1)]))
    }

    #[test]
    fn representable_dims_on_arrow() {
        let cat = arrow();
        let p0 = CatModule::representable(cat.clone(), 0, Variance::Covariant);
        assert_eq!(p0.dims, vec![1, 1]);
        p0.validate().unwrap();
        let p1 = CatModule::representable(cat.clone(), 1, Variance::Covariant);
        assert_eq!(p1.dims, vec![0, 1]);
        let q0 = CatModule::representable(cat.clone(), 0, Variance::Contravariant);
        assert_eq!(q0.dims, vec![1, 0]);
        q0.validate().unwrap();
    }

    #[test]
    fn kernel_and_cokernel_of_cover_of_simple() {
        let cat = arrow();
        // simple at object 0, covariant: dims (1, 0)
        let s0 = CatModule::new(
            cat.clone(),
            Variance::Covariant,
            vec![1, 0],
            vec![RatMatrix::identity(1), RatMatrix::zeros(0, 0), RatMatrix::zeros(0, 1)],
        )
        .unwrap();
        let free = free_module(cat.clone(), Variance::Covariant, vec![0]);
        let p = map_from_generators(&free, &s0, &[vec![rat(1, 1)]]);
        p.validate().unwrap();
        let (k, incl) = p.kernel();
        assert_eq!(k.dims, vec![0, 1]);
        incl.validate().unwrap();
        let (q, proj) = p.cokernel();
        assert_eq!(q.total_dim(), 0);
        proj.validate().unwrap();
    }
}
