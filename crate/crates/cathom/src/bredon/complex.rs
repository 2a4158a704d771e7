use super::BredonError;
use crate::catalg::{same_category, CatModule, ModuleMap, Variance};
use crate::exactla::{kernel_basis, solve, RatMatrix};
use crate::fincat::FiniteCategory;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A bounded chain complex of 𝒞-modules of one variance. Missing degrees
/// are zero; diffs[n] maps degree n to degree n−1 and ∂² = 0 is checked on
/// construction.
#[derive(Debug, Clone)]
pub struct ModuleComplex {
    pub cat: Arc<FiniteCategory>,
    pub variance: Variance,
    pub modules: BTreeMap<i64, CatModule>,
    pub diffs: BTreeMap<i64, ModuleMap>,
}

impl ModuleComplex {
    pub fn new(
        cat: Arc<FiniteCategory>,
        variance: Variance,
        modules: BTreeMap<i64, CatModule>,
        diffs: BTreeMap<i64, ModuleMap>,
    ) -> Result<Self, BredonError> {
        let c = ModuleComplex { cat, variance, modules, diffs };
        c.validate()?;
        Ok(c)
    }

    pub fn zero(cat: Arc<FiniteCategory>, variance: Variance) -> Self {
        ModuleComplex { cat, variance, modules: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn validate(&self) -> Result<(), BredonError> {
        for (n, m) in &self.modules {
            if !same_category(&m.cat, &self.cat) {
                return Err(BredonError::CategoryMismatch);
            }
            if m.variance != self.variance {
                return Err(BredonError::VarianceMismatch);
            }
            m.validate().map_err(|e| BredonError::Invalid(format!("degree {n}: {e}")))?;
        }
        for (n, d) in &self.diffs {
            d.validate().map_err(|e| BredonError::Invalid(format!("differential {n}: {e}")))?;
            if d.source.dims != self.module_at(*n).dims || d.target.dims != self.module_at(n - 1).dims
            {
                return Err(BredonError::Invalid(format!(
                    "differential {n} does not match the modules at degrees {n} and {}",
                    n - 1
                )));
            }
        }
        for n in self.diffs.keys() {
            if let Some(up) = self.diffs.get(&(n + 1)) {
                let comp = self.diffs[n].compose(up);
                if !comp.is_zero() {
                    return Err(BredonError::NotAComplex(*n));
                }
            }
        }
        Ok(())
    }

    pub fn module_at(&self, n: i64) -> CatModule {
        self.modules
            .get(&n)
            .cloned()
            .unwrap_or_else(|| CatModule::zero(self.cat.clone(), self.variance))
    }

    pub fn diff_at(&self, n: i64) -> ModuleMap {
        self.diffs.get(&n).cloned().unwrap_or_else(|| {
            ModuleMap::zero(self.module_at(n), self.module_at(n - 1))
        })
    }

    pub fn degree_support(&self) -> Vec<i64> {
        self.modules
            .iter()
            .filter(|(_, m)| !m.is_zero_module())
            .map(|(n, _)| *n)
            .collect()
    }

    /// Degree shift by +k (suspension for positive k).
    pub fn shift(&self, k: i64) -> ModuleComplex {
        ModuleComplex {
            cat: self.cat.clone(),
            variance: self.variance,
            modules: self.modules.iter().map(|(n, m)| (n + k, m.clone())).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (n + k, d.clone())).collect(),
        }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(parts: &[&ModuleComplex]) -> ModuleComplex {
        assert!(!parts.is_empty());
        let cat = parts[0].cat.clone();
        let variance = parts[0].variance;
        let mut degrees: Vec<i64> = Vec::new();
        for p in parts {
            degrees.extend(p.modules.keys().copied());
        }
        degrees.sort_unstable();
        degrees.dedup();
        let mut modules = BTreeMap::new();
        for &n in &degrees {
            let ms: Vec<CatModule> = parts.iter().map(|p| p.module_at(n)).collect();
            modules.insert(n, CatModule::direct_sum(&ms.iter().collect::<Vec<_>>()));
        }
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            let srcs: Vec<ModuleMap> = parts.iter().map(|p| p.diff_at(n)).collect();
            let source = modules.get(&n).cloned().unwrap();
            let target = modules
                .get(&(n - 1))
                .cloned()
                .unwrap_or_else(|| CatModule::zero(cat.clone(), variance));
            let comps = (0..cat.object_count())
                .map(|c| {
                    RatMatrix::block_diag(
                        &srcs.iter().map(|d| &d.comps[c]).collect::<Vec<_>>(),
                    )
                })
                .collect();
            diffs.insert(n, ModuleMap { source, target, comps });
        }
        ModuleComplex { cat, variance, modules, diffs }
    }
}

/// Homology at one degree: the homology module with, per object, the
/// cycle basis Z (columns in the chain module's coordinates), the
/// projection Z-coordinates → H, and a section H → chain module.
#[derive(Debug, Clone)]
pub struct HomologyData {
    pub module: CatModule,
    pub cycles: Vec<RatMatrix>,
    pub proj_from_cycles: Vec<RatMatrix>,
    pub section: Vec<RatMatrix>,
}

impl HomologyData {
    /// Class of a chain vector (must be a cycle) in homology coordinates.
    pub fn class_of(&self, obj: usize, v: &RatMatrix) -> RatMatrix {
        let coords = solve(&self.cycles[obj], v).expect("vector is a cycle");
        self.proj_from_cycles[obj].mul(&coords)
    }
}

/// H_n = ker ∂_n / im ∂_{n+1} with the induced 𝒞-action, for every degree
/// in the support of the complex.
pub fn homology(c: &ModuleComplex) -> BTreeMap<i64, HomologyData> {
    let mut out = BTreeMap::new();
    let degrees: Vec<i64> = c.modules.keys().copied().collect();
    for &n in &degrees {
        let m = c.module_at(n);
        let d_n = c.diff_at(n);
        let d_up = c.diff_at(n + 1);
        let cat = &*c.cat;
        let mut cycles = Vec::with_capacity(cat.object_count());
        let mut projs = Vec::with_capacity(cat.object_count());
        let mut sections = Vec::with_capacity(cat.object_count());
        let mut dims = Vec::with_capacity(cat.object_count());
        for obj in 0..cat.object_count() {
            let z = kernel_basis(&d_n.comps[obj]);
            // boundaries in cycle coordinates
            let b = solve(&z, &d_up.comps[obj]).expect("boundaries are cycles");
            let (q, hdim) = crate::exactla::cokernel_projection(&b);
            let section_coords =
                solve(&q, &RatMatrix::identity(hdim)).expect("projection is surjective");
            sections.push(z.mul(&section_coords));
            cycles.push(z);
            projs.push(q);
            dims.push(hdim);
        }
        // induced action: h ↦ class of act(f)(section(h))
        let v = c.variance;
        let mut action = Vec::with_capacity(cat.morphism_count());
        for f in 0..cat.morphism_count() {
            let (ci, co) = (v.in_obj(cat, f), v.out_obj(cat, f));
            let moved = m.action[f].mul(&sections[ci]);
            let in_cycles = solve(&cycles[co], &moved).expect("action preserves cycles");
            action.push(projs[co].mul(&in_cycles));
        }
        let module = CatModule { cat: c.cat.clone(), variance: v, dims, action };
        out.insert(
            n,
            HomologyData { module, cycles, proj_from_cycles: projs, section: sections },
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalg::Variance;

    fn arrow() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::quiver(&["0", "1"], &[("a", 0, 1)]))
    }

    #[test]
    fn zero_differential_complex_has_itself_as_homology() {
        let cat = arrow();
        let p = CatModule::representable(cat.clone(), 0, Variance::Contravariant);
        let mut modules = BTreeMap::new();
        modules.insert(0, p.clone());
        modules.insert(1, p.clone());
        let c = ModuleComplex::new(cat, Variance::Contravariant, modules, BTreeMap::new()).unwrap();
        let h = homology(&c);
        assert_eq!(h[&0].module.dims, p.dims);
        assert_eq!(h[&1].module.dims, p.dims);
    }

    #[test]
    fn identity_differential_complex_is_acyclic() {
        let cat = arrow();
        let p = CatModule::representable(cat.clone(), 0, Variance::Contravariant);
        let mut modules = BTreeMap::new();
        modules.insert(0, p.clone());
        modules.insert(1, p.clone());
        let mut diffs = BTreeMap::new();
        diffs.insert(1, ModuleMap::identity(&p));
        let c = ModuleComplex::new(cat, Variance::Contravariant, modules, diffs).unwrap();
        for (_, h) in homology(&c) {
            assert!(h.module.is_zero_module());
        }
    }

    #[test]
    fn non_complex_is_rejected() {
        let cat = arrow();
        let p = CatModule::representable(cat.clone(), 0, Variance::Contravariant);
        let mut modules = BTreeMap::new();
        for n in 0..3 {
            modules.insert(n, p.clone());
        }
        let mut diffs = BTreeMap::new();
        diffs.insert(1, ModuleMap::identity(&p));
        diffs.insert(2, ModuleMap::identity(&p));
        assert!(matches!(
            ModuleComplex::new(cat, Variance::Contravariant, modules, diffs),
            Err(BredonError::NotAComplex(1))
        ));
    }

    #[test]
    fn homology_action_is_functorial() {
        // complex with nontrivial induced action: the representable at 0
        // in degree 0 only, over the arrow category
        let cat = arrow();
        let p = CatModule::representable(cat.clone(), 0, Variance::Covariant);
        let mut modules = BTreeMap::new();
        modules.insert(0, p.clone());
        let c = ModuleComplex::new(cat, Variance::Covariant, modules, BTreeMap::new()).unwrap();
        let h = homology(&c);
        h[&0].module.validate().unwrap();
        assert_eq!(h[&0].module.dims, p.dims);
    }
}
