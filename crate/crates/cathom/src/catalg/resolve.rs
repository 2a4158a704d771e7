use super::homtensor::{hom_over_c, tensor_over_c};
use super::module::{
    free_module, map_from_generators, CatModule, FreeModule, ModuleMap, Variance,
};
use super::CatalgError;
use crate::algebra::MultTable;
use crate::exactla::{pivot_columns, rank, solve, RatMatrix, Rational, SparseMat};
use crate::fincat::FiniteCategory;
use num::Zero;
use std::sync::Arc;

pub const DEFAULT_MAX_RESOLUTION: usize = 32;

/// ℚ𝒞: basis all morphisms, product composition-or-zero, unit Σ id_c.
#[derive(Debug, Clone)]
pub struct CategoryAlgebra {
    pub cat: Arc<FiniteCategory>,
}

pub fn category_algebra(cat: Arc<FiniteCategory>) -> CategoryAlgebra {
    CategoryAlgebra { cat }
}

impl CategoryAlgebra {
    pub fn dimension(&self) -> usize {
        self.cat.morphism_count()
    }

    pub fn mult_table(&self) -> MultTable {
        let n = self.cat.morphism_count();
        let one = || Rational::from_integer(1.into());
        let prod = (0..n)
            .map(|g| {
                (0..n)
                    .map(|f| match self.cat.compose(g, f) {
                        Some(gf) => vec![(gf, one())],
                        None => vec![],
                    })
                    .collect()
            })
            .collect();
        let unit = {
            let mut ids: Vec<usize> =
                (0..self.cat.object_count()).map(|c| self.cat.identity(c)).collect();
            ids.sort_unstable();
            ids.into_iter().map(|i| (i, one())).collect()
        };
        MultTable { dim: n, prod, unit }
    }

    /// The left regular representation as a covariant module:
    /// value at c is spanned by the morphisms with target c, morphisms act
    /// by post-composition. Returns the module and, per object, the list
    /// of morphism indices forming its basis.
    pub fn left_regular(&self) -> (CatModule, Vec<Vec<usize>>) {
        let cat = &self.cat;
        let basis: Vec<Vec<usize>> = (0..cat.object_count())
            .map(|c| (0..cat.morphism_count()).filter(|&f| cat.morphism(f).dst == c).collect())
            .collect();
        let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
        let mut action = Vec::with_capacity(cat.morphism_count());
        for g in 0..cat.morphism_count() {
            let (c, d) = (cat.morphism(g).src, cat.morphism(g).dst);
            let mut m = RatMatrix::zeros(dims[d], dims[c]);
            for (col, &f) in basis[c].iter().enumerate() {
                let gf = cat.compose(g, f).expect("dst f = src g");
                let row = basis[d].iter().position(|&w| w == gf).expect("closed basis");
                m.set(row, col, Rational::from_integer(1.into()));
            }
            action.push(m);
        }
        let module =
            CatModule { cat: self.cat.clone(), variance: Variance::Covariant, dims, action };
        (module, basis)
    }
}

/// Columns span the Jacobson radical in morphism coordinates, computed as
/// the kernel of the trace form of the left regular representation.
pub fn jacobson_radical(alg: &CategoryAlgebra) -> RatMatrix {
    alg.mult_table().jacobson_radical_basis()
}

/// The radical as a left module (covariant functor) together with its
/// inclusion into the left regular module.
pub fn radical_left_module(alg: &CategoryAlgebra) -> (CatModule, ModuleMap) {
    let rad = jacobson_radical(alg);
    let (reg, reg_basis) = alg.left_regular();
    let cat = &*alg.cat;
    // restrict each radical vector to the coordinates at each object
    let mut incls = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let restricted = RatMatrix::from_fn(reg_basis[c].len(), rad.cols(), |i, j| {
            rad.get(reg_basis[c][i], j).clone()
        });
        let pivots = pivot_columns(&restricted);
        incls.push(restricted.select_columns(&pivots));
    }
    let dims: Vec<usize> = incls.iter().map(|m| m.cols()).collect();
    let mut action = Vec::with_capacity(cat.morphism_count());
    for g in 0..cat.morphism_count() {
        let (c, d) = (cat.morphism(g).src, cat.morphism(g).dst);
        let rhs = reg.action[g].mul(&incls[c]);
        let a = solve(&incls[d], &rhs).expect("radical is a left ideal");
        action.push(a);
        let _ = dims[d];
    }
    let module =
        CatModule { cat: alg.cat.clone(), variance: Variance::Covariant, dims, action };
    let incl = ModuleMap { source: module.clone(), target: reg, comps: incls };
    (module, incl)
}

/// One generator per basis vector of m / J·m, lifted to standard basis
/// vectors of the value spaces; the resulting map from the sum of
/// representables is surjective by Nakayama.
pub fn cover(m: &CatModule, radical: &RatMatrix) -> (FreeModule, ModuleMap) {
    let cat = &*m.cat;
    let v = m.variance;
    // J·m per object: graded pieces of the radical acting on m
    let mut jm_cols: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); cat.object_count()];
    for j in 0..radical.cols() {
        // split the radical vector by (in, out) object pairs
        for cin in 0..cat.object_count() {
            let mut per_out: Vec<Option<RatMatrix>> = vec![None; cat.object_count()];
            for f in 0..cat.morphism_count() {
                if radical.get(f, j).is_zero() || v.in_obj(cat, f) != cin {
                    continue;
                }
                let co = v.out_obj(cat, f);
                let entry =
                    per_out[co].get_or_insert_with(|| RatMatrix::zeros(m.dims[co], m.dims[cin]));
                *entry = entry.add(&m.action[f].scale(radical.get(f, j)));
            }
            for (co, block) in per_out.into_iter().enumerate() {
                if let Some(b) = block {
                    for col in 0..b.cols() {
                        jm_cols[co].push(b.column(col));
                    }
                }
            }
        }
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut images: Vec<Vec<Rational>> = Vec::new();
    for c in 0..cat.object_count() {
        if m.dims[c] == 0 {
            continue;
        }
        // pivot completion of the span of J·m(c) by standard basis vectors
        let w = RatMatrix::from_fn(m.dims[c], jm_cols[c].len(), |i, k| jm_cols[c][k][i].clone());
        let aug = w.hstack(&RatMatrix::identity(m.dims[c]));
        let completing: Vec<usize> = pivot_columns(&aug)
            .into_iter()
            .filter(|&p| p >= w.cols())
            .map(|p| p - w.cols())
            .collect();
        for e in completing {
            gens.push(c);
            let mut img = vec![Rational::zero(); m.dims[c]];
            img[e] = Rational::from_integer(1.into());
            images.push(img);
        }
    }
    let free = free_module(m.cat.clone(), v, gens);
    let p = map_from_generators(&free, m, &images);
    (free, p)
}

#[derive(Debug, Clone)]
pub struct ProjectivityWitness {
    pub cover: FreeModule,
    pub projection: ModuleMap,
    pub section: ModuleMap,
}

/// Decides projectivity by building the representable cover P ↠ m and
/// solving p∘s = id for a natural s: m → P; the witness is the section.
pub fn is_projective(
    m: &CatModule,
    radical: &RatMatrix,
) -> (bool, Option<ProjectivityWitness>) {
    if m.is_zero_module() {
        let free = free_module(m.cat.clone(), m.variance, vec![]);
        let p = ModuleMap::zero(free.module.clone(), m.clone());
        let s = ModuleMap::zero(m.clone(), free.module.clone());
        return (true, Some(ProjectivityWitness { cover: free, projection: p, section: s }));
    }
    let (free, p) = cover(m, radical);
    match splitting_section(&p) {
        Some(s) => (true, Some(ProjectivityWitness { cover: free, projection: p, section: s })),
        None => (false, None),
    }
}

/// Solves p∘s = id together with naturality of s, as one sparse affine
/// system. Returns None when no section exists.
pub fn splitting_section(p: &ModuleMap) -> Option<ModuleMap> {
    let m = &p.target;
    let big = &p.source;
    let cat = &*m.cat;
    let v = m.variance;
    let mut offsets = Vec::with_capacity(cat.object_count());
    let mut total = 0usize;
    for c in 0..cat.object_count() {
        offsets.push(total);
        total += big.dims[c] * m.dims[c];
    }
    let idx = |c: usize, i: usize, j: usize| offsets[c] + i * m.dims[c] + j;
    let rhs_col = total;
    let mut sys = SparseMat::new(total + 1);
    // naturality: s_out·m(f) − P(f)·s_in = 0
    for f in 0..cat.morphism_count() {
        let (ci, co) = (v.in_obj(cat, f), v.out_obj(cat, f));
        let mf = &m.action[f];
        let pf = &big.action[f];
        for r in 0..big.dims[co] {
            for s in 0..m.dims[ci] {
                let mut row: Vec<(usize, Rational)> = Vec::new();
                for k in 0..m.dims[co] {
                    if !mf.get(k, s).is_zero() {
                        row.push((idx(co, r, k), mf.get(k, s).clone()));
                    }
                }
                for k in 0..big.dims[ci] {
                    if !pf.get(r, k).is_zero() {
                        row.push((idx(ci, k, s), -pf.get(r, k).clone()));
                    }
                }
                sys.push_row(row);
            }
        }
    }
    // p∘s = id per object
    for c in 0..cat.object_count() {
        let pc = &p.comps[c];
        for r in 0..m.dims[c] {
            for s in 0..m.dims[c] {
                let mut row: Vec<(usize, Rational)> = Vec::new();
                for k in 0..big.dims[c] {
                    if !pc.get(r, k).is_zero() {
                        row.push((idx(c, k, s), pc.get(r, k).clone()));
                    }
                }
                if r == s {
                    row.push((rhs_col, Rational::from_integer(1.into())));
                }
                sys.push_row(row);
            }
        }
    }
    let x = sys.solve_affine()?;
    let comps = (0..cat.object_count())
        .map(|c| RatMatrix::from_fn(big.dims[c], m.dims[c], |i, j| x[idx(c, i, j)].clone()))
        .collect();
    Some(ModuleMap { source: m.clone(), target: big.clone(), comps })
}

/// An exact complex of projectives over m: terms[0] ← terms[1] ← …, all
/// terms sums of representables except possibly the last, which may be a
/// projective kernel split off early.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub target: CatModule,
    pub terms: Vec<CatModule>,
    pub diffs: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
}

impl Resolution {
    /// Length = highest homological degree present, i.e. terms.len() − 1.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }
}

/// Iterated kernel-and-cover. Stops when the kernel vanishes or is itself
/// projective (the kernel is then spliced in as the final term). Errors
/// with `ResolutionTooLong` past max_len.
pub fn projective_resolution(
    m: &CatModule,
    radical: &RatMatrix,
    max_len: usize,
) -> Result<Resolution, CatalgError> {
    if m.is_zero_module() {
        return Ok(Resolution {
            target: m.clone(),
            terms: vec![m.clone()],
            diffs: vec![],
            augmentation: ModuleMap::identity(m),
        });
    }
    if let (true, Some(_)) = is_projective(m, radical) {
        return Ok(Resolution {
            target: m.clone(),
            terms: vec![m.clone()],
            diffs: vec![],
            augmentation: ModuleMap::identity(m),
        });
    }
    let (p0, aug) = cover(m, radical);
    let mut terms = vec![p0.module.clone()];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let (mut k, mut incl) = aug.kernel();
    loop {
        if k.is_zero_module() {
            break;
        }
        if diffs.len() + 1 > max_len {
            return Err(CatalgError::ResolutionTooLong(max_len));
        }
        if let (true, Some(_)) = is_projective(&k, radical) {
            terms.push(k.clone());
            diffs.push(incl);
            break;
        }
        let (pi, cov) = cover(&k, radical);
        terms.push(pi.module.clone());
        diffs.push(incl.compose(&cov));
        let (k2, incl2) = cov.kernel();
        k = k2;
        incl = incl2;
    }
    Ok(Resolution { target: m.clone(), terms, diffs, augmentation: aug })
}

/// dim Ext^i(m, n) for 0 ≤ i ≤ degree_max, via Hom(P_•, n).
pub fn ext_groups(
    m: &CatModule,
    n: &CatModule,
    radical: &RatMatrix,
    degree_max: usize,
    max_len: usize,
) -> Result<Vec<usize>, CatalgError> {
    if m.variance != n.variance {
        return Err(CatalgError::VarianceMismatch);
    }
    let res = projective_resolution(m, radical, max_len)?;
    let spaces: Vec<_> = res
        .terms
        .iter()
        .map(|p| hom_over_c(p, n))
        .collect::<Result<Vec<_>, _>>()?;
    // δ_i: Hom(P_{i−1}, n) → Hom(P_i, n), φ ↦ φ∘d_i
    let mut deltas: Vec<RatMatrix> = Vec::new();
    for i in 1..res.terms.len() {
        let src = &spaces[i - 1];
        let dst = &spaces[i];
        let mut mat = RatMatrix::zeros(dst.dim(), src.dim());
        for (col, phi) in src.basis.iter().enumerate() {
            let composed = phi.compose(&res.diffs[i - 1]);
            let coords = dst.coords(&composed).expect("composition stays natural");
            for (row, v) in coords.into_iter().enumerate() {
                mat.set(row, col, v);
            }
        }
        deltas.push(mat);
    }
    let mut out = Vec::with_capacity(degree_max + 1);
    for i in 0..=degree_max {
        if i >= res.terms.len() {
            out.push(0);
            continue;
        }
        let total = spaces[i].dim();
        let rank_in = if i >= 1 { rank(&deltas[i - 1]) } else { 0 };
        let rank_out = if i < deltas.len() { rank(&deltas[i]) } else { 0 };
        out.push(total - rank_in - rank_out);
    }
    Ok(out)
}

/// dim Tor_i(x, y) for 0 ≤ i ≤ degree_max, via P_•(x) ⊗_𝒞 y.
pub fn tor_groups(
    x: &CatModule,
    y: &CatModule,
    radical: &RatMatrix,
    degree_max: usize,
    max_len: usize,
) -> Result<Vec<usize>, CatalgError> {
    if x.variance != Variance::Contravariant || y.variance != Variance::Covariant {
        return Err(CatalgError::VarianceMismatch);
    }
    let res = projective_resolution(x, radical, max_len)?;
    let tensors: Vec<_> = res
        .terms
        .iter()
        .map(|p| tensor_over_c(p, y))
        .collect::<Result<Vec<_>, _>>()?;
    let maps: Vec<RatMatrix> = (1..res.terms.len())
        .map(|i| tensors[i - 1].induced_from_left_map(&tensors[i], &res.diffs[i - 1]))
        .collect();
    let mut out = Vec::with_capacity(degree_max + 1);
    for i in 0..=degree_max {
        if i >= res.terms.len() {
            out.push(0);
            continue;
        }
        let total = tensors[i].dim;
        let rank_out = if i < maps.len() { rank(&maps[i]) } else { 0 };
        let rank_in = if i >= 1 { rank(&maps[i - 1]) } else { 0 };
        out.push(total - rank_in - rank_out);
    }
    Ok(out)
}

/// Hereditary ⟺ the radical is projective as a left module (global
/// dimension ≤ 1 for finite-dimensional algebras). Requires EI.
pub fn is_hereditary(alg: &CategoryAlgebra) -> Result<bool, CatalgError> {
    if !alg.cat.is_ei() {
        return Err(CatalgError::NotEI);
    }
    let rad = jacobson_radical(alg);
    let (j_module, _) = radical_left_module(alg);
    Ok(is_projective(&j_module, &rad).0)
}

/// Checks that the span of the radical equals the span of the
/// non-isomorphisms; holds for every EI category and is validated as an
/// invariant rather than assumed.
pub fn radical_is_noniso_span(alg: &CategoryAlgebra) -> bool {
    let rad = jacobson_radical(alg);
    let cat = &*alg.cat;
    let nonisos: Vec<usize> =
        (0..cat.morphism_count()).filter(|&f| !cat.is_iso(f)).collect();
    if rad.cols() != nonisos.len() {
        return false;
    }
    let mut nm = RatMatrix::zeros(cat.morphism_count(), nonisos.len());
    for (j, &f) in nonisos.iter().enumerate() {
        nm.set(f, j, Rational::from_integer(1.into()));
    }
    // equal span: ranks agree and the union has the same rank
    let r = rank(&rad);
    rank(&nm) == r && rank(&rad.hstack(&nm)) == r
}
