use super::complex::ModuleComplex;
use super::BredonError;
use crate::catalg::{free_module, same_category, CatModule, ModuleMap, Variance};
use crate::exactla::{RatMatrix, Rational};
use crate::fincat::FiniteCategory;
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// An element of ℚ·Hom(d, c): sorted (morphism, coefficient) pairs.
pub type HomElt = Vec<(usize, Rational)>;

/// Composite of hom elements: v ∈ ℚHom(d, c), u ∈ ℚHom(e, d) gives
/// v∘u ∈ ℚHom(e, c), extended bilinearly.
pub fn hom_elt_compose(cat: &FiniteCategory, v: &HomElt, u: &HomElt) -> HomElt {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (mv, cv) in v {
        for (mu, cu) in u {
            let w = cat.compose(*mv, *mu).expect("hom elements compose");
            let entry = acc.entry(w).or_insert_with(Rational::zero);
            *entry += cv * cu;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn hom_elt_add(a: &HomElt, b: &HomElt) -> HomElt {
    let mut acc: BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (m, c) in b {
        let e = acc.entry(*m).or_insert_with(Rational::zero);
        *e += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn hom_elt_neg(a: &HomElt) -> HomElt {
    a.iter().map(|(m, c)| (*m, -c.clone())).collect()
}

/// One cell of a free based complex: an id label and the object carrying
/// its representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub obj: usize,
}

/// Per-degree dimension table of a homology computation.
pub type GradedDims = BTreeMap<i64, usize>;

/// The cellular chain complex of a finite 𝒞-CW complex: each degree a
/// finite sum of covariant representables listed by cells, boundaries
/// given by matrices of ℚ·Hom elements. boundary[n][j][i] is the
/// component from cell i of degree n to cell j of degree n−1, an element
/// of ℚHom(obj_j, obj_i).
#[derive(Debug, Clone)]
pub struct FreeBasedComplex {
    pub cat: Arc<FiniteCategory>,
    pub cells: BTreeMap<i64, Vec<Cell>>,
    pub boundary: BTreeMap<i64, Vec<Vec<HomElt>>>,
}

impl FreeBasedComplex {
    pub fn new(
        cat: Arc<FiniteCategory>,
        cells: BTreeMap<i64, Vec<Cell>>,
        boundary: BTreeMap<i64, Vec<Vec<HomElt>>>,
    ) -> Result<Self, BredonError> {
        let c = FreeBasedComplex { cat, cells, boundary };
        c.validate()?;
        Ok(c)
    }

    pub fn cells_at(&self, n: i64) -> &[Cell] {
        self.cells.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn boundary_at(&self, n: i64) -> Vec<Vec<HomElt>> {
        match self.boundary.get(&n) {
            Some(b) => b.clone(),
            None => {
                let rows = self.cells_at(n - 1).len();
                let cols = self.cells_at(n).len();
                vec![vec![HomElt::new(); cols]; rows]
            }
        }
    }

    pub fn validate(&self) -> Result<(), BredonError> {
        for (n, b) in &self.boundary {
            let rows = self.cells_at(n - 1);
            let cols = self.cells_at(*n);
            if b.len() != rows.len() || b.iter().any(|r| r.len() != cols.len()) {
                return Err(BredonError::Invalid(format!(
                    "boundary at degree {n} has the wrong shape"
                )));
            }
            for (j, row) in b.iter().enumerate() {
                for (i, e) in row.iter().enumerate() {
                    for (m, _) in e {
                        let mor = self.cat.morphism(*m);
                        if mor.src != rows[j].obj || mor.dst != cols[i].obj {
                            return Err(BredonError::Invalid(format!(
                                "boundary entry ({j}, {i}) at degree {n} is not in Hom({}, {})",
                                self.cat.object_name(rows[j].obj),
                                self.cat.object_name(cols[i].obj),
                            )));
                        }
                    }
                }
            }
        }
        // ∂² = 0 on hom-element matrices
        let degrees: Vec<i64> = self.boundary.keys().copied().collect();
        for n in degrees {
            if self.boundary.contains_key(&(n + 1)) {
                let b_n = self.boundary_at(n);
                let b_up = self.boundary_at(n + 1);
                let rows = self.cells_at(n - 1).len();
                let cols = self.cells_at(n + 1).len();
                for k in 0..rows {
                    for i in 0..cols {
                        let mut acc = HomElt::new();
                        for (j, _) in self.cells_at(n).iter().enumerate() {
                            let term = hom_elt_compose(&self.cat, &b_up[j][i], &b_n[k][j]);
                            acc = hom_elt_add(&acc, &term);
                        }
                        if !acc.is_empty() {
                            return Err(BredonError::NotAComplex(n));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Expansion into an honest complex of covariant modules.
    pub fn to_module_complex(&self) -> ModuleComplex {
        let cat = &self.cat;
        let mut modules: BTreeMap<i64, CatModule> = BTreeMap::new();
        let mut frees = BTreeMap::new();
        let mut degrees: Vec<i64> = self.cells.keys().copied().collect();
        degrees.sort_unstable();
        for &n in &degrees {
            let gens: Vec<usize> = self.cells_at(n).iter().map(|c| c.obj).collect();
            let f = free_module(cat.clone(), Variance::Covariant, gens);
            modules.insert(n, f.module.clone());
            frees.insert(n, f);
        }
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            if !self.boundary.contains_key(&n) {
                continue;
            }
            let b = self.boundary_at(n);
            let source = modules.get(&n).cloned().unwrap();
            let target = modules
                .get(&(n - 1))
                .cloned()
                .unwrap_or_else(|| CatModule::zero(cat.clone(), Variance::Covariant));
            let src_free = &frees[&n];
            let tgt_cells = self.cells_at(n - 1);
            let src_cells = self.cells_at(n);
            let comps = (0..cat.object_count())
                .map(|z| {
                    let mut m = RatMatrix::zeros(target.dims[z], source.dims[z]);
                    for (i, ci) in src_cells.iter().enumerate() {
                        let col_off = src_free.block_offset(i, z);
                        let in_basis = cat.hom(ci.obj, z);
                        for (j, cj) in tgt_cells.iter().enumerate() {
                            let row_off = frees[&(n - 1)].block_offset(j, z);
                            let out_basis = cat.hom(cj.obj, z);
                            for (w, coeff) in &b[j][i] {
                                // precomposition with w: Hom(ci,z) → Hom(cj,z)
                                for (col, &v) in in_basis.iter().enumerate() {
                                    let vw = cat.compose(v, *w).expect("composable");
                                    let row =
                                        out_basis.iter().position(|&x| x == vw).expect("closed");
                                    let cur = m.get(row_off + row, col_off + col).clone();
                                    m.set(row_off + row, col_off + col, cur + coeff);
                                }
                            }
                        }
                    }
                    m
                })
                .collect();
            diffs.insert(n, ModuleMap { source, target, comps });
        }
        ModuleComplex { cat: cat.clone(), variance: Variance::Covariant, modules, diffs }
    }
}

/// Bredon homology H_n(m ⊗_𝒞 x): by the Yoneda lemma the tensored complex
/// has ⊕_cells m(obj) in each degree, with boundaries given by applying m
/// to the hom-element entries. Returns per-degree ℚ-dimensions.
pub fn bredon_homology(x: &FreeBasedComplex, m: &CatModule) -> Result<GradedDims, BredonError> {
    if !same_category(&x.cat, &m.cat) {
        return Err(BredonError::CategoryMismatch);
    }
    if m.variance != Variance::Contravariant {
        return Err(BredonError::VarianceMismatch);
    }
    let dims_at = |n: i64| -> usize { x.cells_at(n).iter().map(|c| m.dims[c.obj]).sum() };
    let matrix_at = |n: i64| -> RatMatrix {
        let src = x.cells_at(n);
        let tgt = x.cells_at(n - 1);
        let b = x.boundary_at(n);
        let mut out = RatMatrix::zeros(dims_at(n - 1), dims_at(n));
        let mut col_off = 0;
        for (i, ci) in src.iter().enumerate() {
            let mut row_off = 0;
            for (j, cj) in tgt.iter().enumerate() {
                for (w, coeff) in &b[j][i] {
                    let a = &m.action[*w]; // m(c_i) → m(d_j)
                    for r in 0..a.rows() {
                        for s in 0..a.cols() {
                            if !a.get(r, s).is_zero() {
                                let cur = out.get(row_off + r, col_off + s).clone();
                                out.set(row_off + r, col_off + s, cur + coeff * a.get(r, s));
                            }
                        }
                    }
                }
                row_off += m.dims[cj.obj];
            }
            col_off += m.dims[ci.obj];
        }
        out
    };
    let mut out = GradedDims::new();
    let degrees: Vec<i64> = x.cells.keys().copied().collect();
    for &n in &degrees {
        let d_n = matrix_at(n);
        let d_up = matrix_at(n + 1);
        let h = (dims_at(n) - crate::exactla::rank(&d_n)) - crate::exactla::rank(&d_up);
        out.insert(n, h);
    }
    Ok(out)
}

/// Degree shift by +1; Bredon homology shifts along.
pub fn suspension(x: &FreeBasedComplex) -> FreeBasedComplex {
    FreeBasedComplex {
        cat: x.cat.clone(),
        cells: x.cells.iter().map(|(n, c)| (n + 1, c.clone())).collect(),
        boundary: x.boundary.iter().map(|(n, b)| (n + 1, b.clone())).collect(),
    }
}

/// Degreewise disjoint union of cells with block boundaries. The wedge of
/// nothing over a category is the zero complex.
pub fn wedge(cat: Arc<FiniteCategory>, xs: &[&FreeBasedComplex]) -> Result<FreeBasedComplex, BredonError> {
    for x in xs {
        if !same_category(&x.cat, &cat) {
            return Err(BredonError::CategoryMismatch);
        }
    }
    let mut degrees: Vec<i64> = Vec::new();
    for x in xs {
        degrees.extend(x.cells.keys().copied());
        degrees.extend(x.boundary.keys().copied());
    }
    degrees.sort_unstable();
    degrees.dedup();
    let mut cells: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
    let mut boundary: BTreeMap<i64, Vec<Vec<HomElt>>> = BTreeMap::new();
    for &n in &degrees {
        let mut cs = Vec::new();
        for (k, x) in xs.iter().enumerate() {
            for c in x.cells_at(n) {
                cs.push(Cell { id: format!("w{k}.{}", c.id), obj: c.obj });
            }
        }
        if !cs.is_empty() {
            cells.insert(n, cs);
        }
    }
    for &n in &degrees {
        let rows: usize = xs.iter().map(|x| x.cells_at(n - 1).len()).sum();
        let cols: usize = xs.iter().map(|x| x.cells_at(n).len()).sum();
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut b = vec![vec![HomElt::new(); cols]; rows];
        let (mut ro, mut co) = (0, 0);
        for x in xs {
            let bx = x.boundary_at(n);
            for (j, row) in bx.iter().enumerate() {
                for (i, e) in row.iter().enumerate() {
                    b[ro + j][co + i] = e.clone();
                }
            }
            ro += x.cells_at(n - 1).len();
            co += x.cells_at(n).len();
        }
        boundary.insert(n, b);
    }
    FreeBasedComplex::new(cat, cells, boundary)
}

/// A chain map between free based complexes given by hom-element matrices
/// per degree: comps[n][j][i] ∈ ℚHom(target cell j, source cell i).
#[derive(Debug, Clone)]
pub struct FreeChainMap {
    pub source: FreeBasedComplex,
    pub target: FreeBasedComplex,
    pub comps: BTreeMap<i64, Vec<Vec<HomElt>>>,
}

impl FreeChainMap {
    fn comps_at(&self, n: i64) -> Vec<Vec<HomElt>> {
        match self.comps.get(&n) {
            Some(c) => c.clone(),
            None => {
                vec![vec![HomElt::new(); self.source.cells_at(n).len()]; self.target.cells_at(n).len()]
            }
        }
    }

    pub fn validate(&self) -> Result<(), BredonError> {
        if !same_category(&self.source.cat, &self.target.cat) {
            return Err(BredonError::CategoryMismatch);
        }
        let cat = &*self.source.cat;
        let mut degrees: Vec<i64> = self.source.cells.keys().copied().collect();
        degrees.extend(self.target.cells.keys());
        degrees.sort_unstable();
        degrees.dedup();
        for &n in &degrees {
            // ∂ᵀ f_n = f_{n−1} ∂ˢ as hom-element matrices
            let f_n = self.comps_at(n);
            let f_down = self.comps_at(n - 1);
            let bs = self.source.boundary_at(n);
            let bt = self.target.boundary_at(n);
            let rows = self.target.cells_at(n - 1).len();
            let cols = self.source.cells_at(n).len();
            for k in 0..rows {
                for i in 0..cols {
                    let mut lhs = HomElt::new();
                    for j in 0..self.target.cells_at(n).len() {
                        lhs = hom_elt_add(&lhs, &hom_elt_compose(cat, &f_n[j][i], &bt[k][j]));
                    }
                    let mut rhs = HomElt::new();
                    for j in 0..self.source.cells_at(n - 1).len() {
                        rhs = hom_elt_add(&rhs, &hom_elt_compose(cat, &bs[j][i], &f_down[k][j]));
                    }
                    if lhs != rhs {
                        return Err(BredonError::NotChainMap(n));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Mapping cone of f: A → X: Cone_n = X_n ⊕ A_{n−1} with differential
/// (x, a) ↦ (∂x + f(a), −∂a). Revalidates ∂² = 0.
pub fn algebraic_cone(f: &FreeChainMap) -> Result<FreeBasedComplex, BredonError> {
    f.validate()?;
    let a = &f.source;
    let x = &f.target;
    let cat = x.cat.clone();
    let mut degrees: Vec<i64> = x.cells.keys().copied().collect();
    degrees.extend(a.cells.keys().map(|n| n + 1));
    degrees.sort_unstable();
    degrees.dedup();
    let mut cells: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
    for &n in &degrees {
        let mut cs: Vec<Cell> = x
            .cells_at(n)
            .iter()
            .map(|c| Cell { id: format!("x.{}", c.id), obj: c.obj })
            .collect();
        cs.extend(
            a.cells_at(n - 1).iter().map(|c| Cell { id: format!("a.{}", c.id), obj: c.obj }),
        );
        if !cs.is_empty() {
            cells.insert(n, cs);
        }
    }
    let mut boundary: BTreeMap<i64, Vec<Vec<HomElt>>> = BTreeMap::new();
    for &n in &degrees {
        let xr = x.cells_at(n - 1).len();
        let ar = a.cells_at(n - 2).len();
        let xc = x.cells_at(n).len();
        let ac = a.cells_at(n - 1).len();
        let rows = xr + ar;
        let cols = xc + ac;
        if rows == 0 || cols == 0 {
            continue;
        }
        let bx = x.boundary_at(n);
        let ba = a.boundary_at(n - 1);
        let fc = f.comps_at(n - 1);
        let mut b = vec![vec![HomElt::new(); cols]; rows];
        for j in 0..xr {
            for i in 0..xc {
                b[j][i] = bx[j][i].clone();
            }
            for i in 0..ac {
                b[j][xc + i] = fc[j][i].clone();
            }
        }
        for j in 0..ar {
            for i in 0..ac {
                b[xr + j][xc + i] = hom_elt_neg(&ba[j][i]);
            }
        }
        boundary.insert(n, b);
    }
    FreeBasedComplex::new(cat, cells, boundary)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactla::rat;
    use crate::orbitcat::{orbit_category, FiniteGroup, SubgroupFamily};

    pub(crate) fn or_z2() -> Arc<FiniteCategory> {
        let g = FiniteGroup::cyclic(2);
        let fam = SubgroupFamily::all(&g).unwrap();
        Arc::new(orbit_category(&g, &fam).category)
    }

    /// One 0-cell and one 1-cell at G/1 with boundary id − φ(s).
    pub(crate) fn free_circle(cat: &Arc<FiniteCategory>) -> FreeBasedComplex {
        let id = cat.identity(0);
        let phi_s = cat
            .hom(0, 0)
            .iter()
            .copied()
            .find(|&m| m != id)
            .expect("free automorphism exists");
        let mut cells = BTreeMap::new();
        cells.insert(0, vec![Cell { id: "v".into(), obj: 0 }]);
        cells.insert(1, vec![Cell { id: "e".into(), obj: 0 }]);
        let mut boundary = BTreeMap::new();
        boundary.insert(1, vec![vec![vec![(id, rat(1, 1)), (phi_s, rat(-1, 1))]]]);
        FreeBasedComplex::new(cat.clone(), cells, boundary).unwrap()
    }

    fn coeff_trivial(cat: &Arc<FiniteCategory>) -> CatModule {
        // M(G/1) = ℚ with trivial action, M(G/G) = ℚ, projection acts as 1
        let dims = vec![1, 1];
        let action = (0..cat.morphism_count()).map(|_| RatMatrix::identity(1)).collect();
        CatModule::new(cat.clone(), Variance::Contravariant, dims, action).unwrap()
    }

    fn coeff_sign(cat: &Arc<FiniteCategory>) -> CatModule {
        // M(G/1) = ℚ with φ(s) acting by −1, M(G/G) = 0
        let dims = vec![1, 0];
        let id0 = cat.identity(0);
        let action = (0..cat.morphism_count())
            .map(|f| {
                let m = cat.morphism(f);
                if m.src == 0 && m.dst == 0 {
                    if f == id0 {
                        RatMatrix::identity(1)
                    } else {
                        RatMatrix::identity(1).neg()
                    }
                } else if m.src == 0 && m.dst == 1 {
                    RatMatrix::zeros(1, 0)
                } else {
                    RatMatrix::zeros(0, 0)
                }
            })
            .collect();
        CatModule::new(cat.clone(), Variance::Contravariant, dims, action).unwrap()
    }

    #[test]
    fn point_complex_computes_yoneda() {
        let cat = or_z2();
        let mut cells = BTreeMap::new();
        cells.insert(0, vec![Cell { id: "pt".into(), obj: 0 }]);
        let x = FreeBasedComplex::new(cat.clone(), cells, BTreeMap::new()).unwrap();
        let m = coeff_trivial(&cat);
        let h = bredon_homology(&x, &m).unwrap();
        assert_eq!(h[&0], m.dims[0]);
    }

    #[test]
    fn free_circle_homology() {
        let cat = or_z2();
        let x = free_circle(&cat);
        let h = bredon_homology(&x, &coeff_trivial(&cat)).unwrap();
        assert_eq!(h[&0], 1);
        assert_eq!(h[&1], 1);
        // sign coefficients: the boundary becomes multiplication by 2
        let h = bredon_homology(&x, &coeff_sign(&cat)).unwrap();
        assert_eq!(h[&0], 0);
        assert_eq!(h[&1], 0);
    }

    #[test]
    fn suspension_shifts_homology() {
        let cat = or_z2();
        let x = free_circle(&cat);
        let m = coeff_trivial(&cat);
        let hx = bredon_homology(&x, &m).unwrap();
        let hs = bredon_homology(&suspension(&x), &m).unwrap();
        for (n, d) in &hx {
            assert_eq!(hs[&(n + 1)], *d);
        }
        let hss = bredon_homology(&suspension(&suspension(&x)), &m).unwrap();
        assert_eq!(hss[&2], hx[&0]);
        assert_eq!(hss[&3], hx[&1]);
    }

    #[test]
    fn wedge_adds_homology() {
        let cat = or_z2();
        let x = free_circle(&cat);
        let m = coeff_trivial(&cat);
        let empty = wedge(cat.clone(), &[]).unwrap();
        assert!(bredon_homology(&empty, &m).unwrap().values().all(|&d| d == 0));
        let w = wedge(cat.clone(), &[&x, &x, &x]).unwrap();
        let hx = bredon_homology(&x, &m).unwrap();
        let hw = bredon_homology(&w, &m).unwrap();
        for (n, d) in &hx {
            assert_eq!(hw[n], 3 * d);
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_cone_rebuilds_circle() {
        let cat = or_z2();
        // cone of (id − φ(s)) on the 0-cell reproduces the free circle
        let mut cells = BTreeMap::new();
        cells.insert(0, vec![Cell { id: "pt".into(), obj: 0 }]);
        let pt = FreeBasedComplex::new(cat.clone(), cells, BTreeMap::new()).unwrap();
        let id = cat.identity(0);
        let phi_s = cat.hom(0, 0).iter().copied().find(|&m| m != id).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert(0, vec![vec![vec![(id, rat(1, 1)), (phi_s, rat(-1, 1))]]]);
        let f = FreeChainMap { source: pt.clone(), target: pt.clone(), comps };
        let cone = algebraic_cone(&f).unwrap();
        let m = coeff_trivial(&cat);
        let hc = bredon_homology(&cone, &m).unwrap();
        let circle = free_circle(&cat);
        let hx = bredon_homology(&circle, &m).unwrap();
        assert_eq!(hc, hx);
        // cone of the identity is acyclic
        let mut comps = BTreeMap::new();
        comps.insert(0, vec![vec![vec![(id, rat(1, 1))]]]);
        let idmap = FreeChainMap { source: pt.clone(), target: pt.clone(), comps };
        let cone = algebraic_cone(&idmap).unwrap();
        let h = bredon_homology(&cone, &m).unwrap();
        assert!(h.values().all(|&d| d == 0));
    }

    #[test]
    fn chain_map_validation_rejects_non_chain_maps() {
        let cat = or_z2();
        let circle = free_circle(&cat);
        let mut cells = BTreeMap::new();
        cells.insert(0, vec![Cell { id: "pt".into(), obj: 0 }]);
        let pt = FreeBasedComplex::new(cat.clone(), cells, BTreeMap::new()).unwrap();
        // a map circle → pt must kill the 1-cell boundary; sending the
        // 0-cell identically and nothing else is a chain map only if
        // f∘∂ = 0, which fails for f = id on the 0-cell
        let id = cat.identity(0);
        let mut comps = BTreeMap::new();
        comps.insert(0, vec![vec![vec![(id, rat(1, 1))]]]);
        let f = FreeChainMap { source: circle.clone(), target: pt.clone(), comps };
        assert!(matches!(f.validate(), Err(BredonError::NotChainMap(1))));
    }

    #[test]
    fn to_module_complex_matches_direct_bredon() {
        let cat = or_z2();
        let x = free_circle(&cat);
        let mc = x.to_module_complex();
        mc.validate().unwrap();
        // homology of the module complex evaluated blockwise must agree
        // with the free-based computation degreewise for the coefficient
        // tensor; here we just check the module expansion is a complex and
        // the degree-0 module has the representable dimensions (2, 1)
        assert_eq!(mc.module_at(0).dims, vec![2, 1]);
        assert_eq!(mc.module_at(1).dims, vec![2, 1]);
    }
}
