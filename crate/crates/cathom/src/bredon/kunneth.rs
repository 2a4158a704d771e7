use super::complex::{homology, ModuleComplex};
use super::free::{bredon_homology, FreeBasedComplex};
use super::BredonError;
use crate::catalg::{
    category_algebra, ext_groups, hom_over_c, is_projective, jacobson_radical, same_category,
    tor_groups, Variance, DEFAULT_MAX_RESOLUTION,
};
use crate::exactla::{rank, RatMatrix};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KunnethMode {
    /// Homological: H(e ⊗_𝒞 x̄) against ⊕ Tor_p(H_s e, H_t x̄).
    Tor,
    /// Cohomological mirror: H(Hom_𝒞(x̄, e)) against ⊕ Ext^p(H_t x̄, H_s e).
    Ext,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethRow {
    pub lhs: usize,
    pub rhs0: usize,
    pub rhs1: usize,
}

#[derive(Debug, Clone)]
pub struct KunnethReport {
    pub mode: KunnethMode,
    pub rows: BTreeMap<i64, KunnethRow>,
    /// lhs = rhs0 in every degree (flat/projective coefficients collapse).
    pub flat_collapse: bool,
    /// lhs = rhs0 + rhs1 in every degree (hereditary identity).
    pub hereditary_identity: bool,
}

/// Dimensions of the homology of the total complex of e ⊗_𝒞 x̄. Since x̄
/// is degreewise a sum of representables, e_s ⊗_𝒞 x̄_t = ⊕_cells e_s(c_i)
/// by the Yoneda lemma, and the horizontal differential applies e_s to the
/// boundary entries.
fn tensor_total_homology(e: &ModuleComplex, x: &FreeBasedComplex) -> BTreeMap<i64, usize> {
    let e_degrees: Vec<i64> = e.modules.keys().copied().collect();
    let x_degrees: Vec<i64> = x.cells.keys().copied().collect();
    if e_degrees.is_empty() || x_degrees.is_empty() {
        return BTreeMap::new();
    }
    let lo = e_degrees.iter().min().unwrap() + x_degrees.iter().min().unwrap();
    let hi = e_degrees.iter().max().unwrap() + x_degrees.iter().max().unwrap();
    // block (s, t) has one slot of dim e_s(c_i) per cell i of x_t
    let block_dim = |s: i64, t: i64| -> usize {
        let es = e.module_at(s);
        x.cells_at(t).iter().map(|c| es.dims[c.obj]).sum()
    };
    let total_dim = |n: i64| -> usize {
        (lo..=hi).map(|s| block_dim(s, n - s)).sum::<usize>()
    };
    // offsets of (s, t)-blocks inside degree n, ordered by s; one degree
    // of slack below so vertical blocks out of the bottom row resolve
    let offsets = |n: i64| -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let mut acc = 0usize;
        for s in (lo - 1)..=hi {
            out.insert(s, acc);
            acc += block_dim(s, n - s);
        }
        out
    };
    let differential = |n: i64| -> RatMatrix {
        let rows = total_dim(n - 1);
        let cols = total_dim(n);
        let mut m = RatMatrix::zeros(rows, cols);
        let off_src = offsets(n);
        let off_dst = offsets(n - 1);
        for s in lo..=hi {
            let t = n - s;
            let es = e.module_at(s);
            let cells = x.cells_at(t);
            if cells.is_empty() || es.total_dim() == 0 {
                continue;
            }
            // vertical: d^e at each cell object, block (s−1, t)
            let de = e.diff_at(s);
            let mut src_off = off_src[&s];
            let mut dst_off = off_dst[&(s - 1)];
            for c in cells {
                let comp = &de.comps[c.obj];
                for r in 0..comp.rows() {
                    for cc in 0..comp.cols() {
                        if !comp.get(r, cc).is_zero() {
                            m.set(dst_off + r, src_off + cc, comp.get(r, cc).clone());
                        }
                    }
                }
                src_off += es.dims[c.obj];
                dst_off += de.target.dims[c.obj];
            }
            // horizontal: (−1)^s e_s(w) along the cellular boundary,
            // block (s, t−1)
            let sign = if s.rem_euclid(2) == 0 { 1i64 } else { -1i64 };
            let b = x.boundary.get(&t).cloned().unwrap_or_else(|| {
                vec![vec![Vec::new(); cells.len()]; x.cells_at(t - 1).len()]
            });
            let tgt_cells = x.cells_at(t - 1);
            let mut src_off = off_src[&s];
            for (i, ci) in cells.iter().enumerate() {
                let mut dst_off = off_dst[&s];
                for (j, cj) in tgt_cells.iter().enumerate() {
                    for (w, coeff) in &b[j][i] {
                        let a = &es.action[*w]; // e_s(c_i) → e_s(d_j)
                        for r in 0..a.rows() {
                            for cc in 0..a.cols() {
                                if !a.get(r, cc).is_zero() {
                                    let cur = m.get(dst_off + r, src_off + cc).clone();
                                    m.set(
                                        dst_off + r,
                                        src_off + cc,
                                        cur + coeff * a.get(r, cc) * crate::exactla::rat(sign, 1),
                                    );
                                }
                            }
                        }
                    }
                    dst_off += es.dims[cj.obj];
                }
                src_off += es.dims[ci.obj];
            }
        }
        m
    };
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let d_n = differential(n);
        let d_up = differential(n + 1);
        out.insert(n, total_dim(n) - rank(&d_n) - rank(&d_up));
    }
    out
}

/// Dimensions of the homology of the Hom total complex Hom_𝒞(x̄, e) for a
/// covariant coefficient complex e: degree n holds ⊕_t Hom(x̄_t, e_{t+n}).
fn hom_total_homology(e: &ModuleComplex, x: &FreeBasedComplex) -> Result<BTreeMap<i64, usize>, BredonError> {
    let xc = x.to_module_complex();
    let e_degrees: Vec<i64> = e.modules.keys().copied().collect();
    let x_degrees: Vec<i64> = xc.modules.keys().copied().collect();
    if e_degrees.is_empty() || x_degrees.is_empty() {
        return Ok(BTreeMap::new());
    }
    let lo = e_degrees.iter().min().unwrap() - x_degrees.iter().max().unwrap();
    let hi = e_degrees.iter().max().unwrap() - x_degrees.iter().min().unwrap();
    // hom spaces per (t, n): Hom(x_t, e_{t+n}); one degree of slack on
    // both sides so the outgoing differential at the boundary exists
    let mut spaces: BTreeMap<(i64, i64), crate::catalg::HomSpace> = BTreeMap::new();
    for &t in &x_degrees {
        for n in (lo - 1)..=(hi + 1) {
            let hs = hom_over_c(&xc.module_at(t), &e.module_at(t + n))?;
            spaces.insert((t, n), hs);
        }
    }
    let dim_at = |n: i64, spaces: &BTreeMap<(i64, i64), crate::catalg::HomSpace>| -> usize {
        x_degrees.iter().map(|&t| spaces[&(t, n)].dim()).sum()
    };
    let differential = |n: i64| -> RatMatrix {
        let rows = dim_at(n - 1, &spaces);
        let cols = dim_at(n, &spaces);
        let mut m = RatMatrix::zeros(rows, cols);
        let sign = if n.rem_euclid(2) == 0 { 1i64 } else { -1i64 };
        let mut col_off = 0usize;
        for &t in &x_degrees {
            let src = &spaces[&(t, n)];
            for (k, phi) in src.basis.iter().enumerate() {
                // component (Dφ)_t = d^e ∘ φ_t at the same t
                let de = e.diff_at(t + n);
                let post = ModuleCompose::post(&de, phi);
                let mut row_off = 0usize;
                for &t2 in &x_degrees {
                    let dst = &spaces[&(t2, n - 1)];
                    if t2 == t {
                        if let Some(coords) = dst.coords(&post) {
                            for (r, v) in coords.into_iter().enumerate() {
                                if !v.is_zero() {
                                    m.set(row_off + r, col_off + k, v);
                                }
                            }
                        }
                    }
                    // component −(−1)^n φ_{t} ∘ d^x_{t+1} lands at t2 = t+1
                    if t2 == t + 1 {
                        let dx = xc.diff_at(t + 1);
                        let pre = ModuleCompose::pre(phi, &dx)
                            .scale(&crate::exactla::rat(-sign, 1));
                        if let Some(coords) = dst.coords(&pre) {
                            for (r, v) in coords.into_iter().enumerate() {
                                if !v.is_zero() {
                                    m.set(row_off + r, col_off + k, v);
                                }
                            }
                        }
                    }
                    row_off += dst.dim();
                }
            }
            col_off += src.dim();
        }
        m
    };
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let d_n = differential(n);
        let d_up = differential(n + 1);
        out.insert(n, dim_at(n, &spaces) - rank(&d_n) - rank(&d_up));
    }
    Ok(out)
}

/// Helper for composing module maps without cloning modules by hand.
struct ModuleCompose;

impl ModuleCompose {
    fn post(
        after: &crate::catalg::ModuleMap,
        first: &crate::catalg::ModuleMap,
    ) -> crate::catalg::ModuleMap {
        after.compose(first)
    }

    fn pre(
        second: &crate::catalg::ModuleMap,
        before: &crate::catalg::ModuleMap,
    ) -> crate::catalg::ModuleMap {
        second.compose(before)
    }
}

/// Compares H(e ⊗ x̄) (or the Hom mirror) against the degree-0 and
/// degree-1 Künneth terms. rhs0 collects Tor₀ over s+t = n, rhs1 collects
/// Tor₁ over s+t = n−1 (for Ext: Ext⁰ over s−t = n, Ext¹ over s−t = n+1).
pub fn kunneth_check(
    e: &ModuleComplex,
    x: &FreeBasedComplex,
    mode: KunnethMode,
) -> Result<KunnethReport, BredonError> {
    if !same_category(&e.cat, &x.cat) {
        return Err(BredonError::CategoryMismatch);
    }
    match mode {
        KunnethMode::Tor => {
            if e.variance != Variance::Contravariant {
                return Err(BredonError::VarianceMismatch);
            }
        }
        KunnethMode::Ext => {
            if e.variance != Variance::Covariant {
                return Err(BredonError::VarianceMismatch);
            }
        }
    }
    let radical = jacobson_radical(&category_algebra(e.cat.clone()));
    let he = homology(e);
    let hx = homology(&x.to_module_complex());
    let lhs = match mode {
        KunnethMode::Tor => tensor_total_homology(e, x),
        KunnethMode::Ext => hom_total_homology(e, x)?,
    };
    let mut rows: BTreeMap<i64, KunnethRow> = BTreeMap::new();
    let degrees: Vec<i64> = lhs.keys().copied().collect();
    for &n in &degrees {
        let mut rhs0 = 0usize;
        let mut rhs1 = 0usize;
        for (s, hse) in &he {
            for (t, htx) in &hx {
                if hse.module.is_zero_module() || htx.module.is_zero_module() {
                    continue;
                }
                match mode {
                    KunnethMode::Tor => {
                        let tors = tor_groups(
                            &hse.module,
                            &htx.module,
                            &radical,
                            1,
                            DEFAULT_MAX_RESOLUTION,
                        )?;
                        if s + t == n {
                            rhs0 += tors[0];
                        }
                        if s + t == n - 1 {
                            rhs1 += tors[1];
                        }
                    }
                    KunnethMode::Ext => {
                        let exts = ext_groups(
                            &htx.module,
                            &hse.module,
                            &radical,
                            1,
                            DEFAULT_MAX_RESOLUTION,
                        )?;
                        if s - t == n {
                            rhs0 += exts[0];
                        }
                        if s - t == n + 1 {
                            rhs1 += exts[1];
                        }
                    }
                }
            }
        }
        rows.insert(n, KunnethRow { lhs: lhs[&n], rhs0, rhs1 });
    }
    let flat_collapse = rows.values().all(|r| r.lhs == r.rhs0);
    let hereditary_identity = rows.values().all(|r| r.lhs == r.rhs0 + r.rhs1);
    Ok(KunnethReport { mode, rows, flat_collapse, hereditary_identity })
}

#[derive(Debug, Clone)]
pub struct ChernSummand {
    pub coefficient_degree: i64,
    pub bredon_degree: i64,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct ChernReport {
    /// For each total degree, the shifted Bredon homology summands
    /// h_t(x; H_s(e)) with s + t = n.
    pub summands: BTreeMap<i64, Vec<ChernSummand>>,
    pub totals: BTreeMap<i64, usize>,
    pub lhs: BTreeMap<i64, usize>,
    pub verified: bool,
}

/// The Chern character decomposition: requires every homology module of
/// the coefficient complex to be projective, then verifies degreewise
/// that Σ_{s+t=n} dim h_t(x; H_s e) equals dim H_n(e ⊗ x̄).
pub fn chern_character(
    e: &ModuleComplex,
    x: &FreeBasedComplex,
) -> Result<ChernReport, BredonError> {
    if !same_category(&e.cat, &x.cat) {
        return Err(BredonError::CategoryMismatch);
    }
    if e.variance != Variance::Contravariant {
        return Err(BredonError::VarianceMismatch);
    }
    let radical = jacobson_radical(&category_algebra(e.cat.clone()));
    let he = homology(e);
    for (s, h) in &he {
        if h.module.is_zero_module() {
            continue;
        }
        if !is_projective(&h.module, &radical).0 {
            return Err(BredonError::CoefficientsNotFlat(*s));
        }
    }
    let mut summands: BTreeMap<i64, Vec<ChernSummand>> = BTreeMap::new();
    let mut totals: BTreeMap<i64, usize> = BTreeMap::new();
    for (s, h) in &he {
        if h.module.is_zero_module() {
            continue;
        }
        let br = bredon_homology(x, &h.module)?;
        for (t, d) in br {
            let n = s + t;
            summands.entry(n).or_default().push(ChernSummand {
                coefficient_degree: *s,
                bredon_degree: t,
                dim: d,
            });
            *totals.entry(n).or_insert(0) += d;
        }
    }
    let lhs = tensor_total_homology(e, x);
    let verified = lhs.iter().all(|(n, d)| totals.get(n).copied().unwrap_or(0) == *d)
        && totals.iter().all(|(n, d)| lhs.get(n).copied().unwrap_or(0) == *d);
    Ok(ChernReport { summands, totals, lhs, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bredon::free::tests::{free_circle, or_z2};
    use crate::catalg::CatModule;
    use crate::exactla::RatMatrix;
    use std::collections::BTreeMap as Map;

    fn trivial_coeff(cat: &std::sync::Arc<crate::fincat::FiniteCategory>) -> CatModule {
        let dims = vec![1, 1];
        let action = (0..cat.morphism_count()).map(|_| RatMatrix::identity(1)).collect();
        CatModule::new(cat.clone(), Variance::Contravariant, dims, action).unwrap()
    }

    #[test]
    fn degree_zero_coefficients_reduce_to_bredon() {
        let cat = or_z2();
        let x = free_circle(&cat);
        let m = trivial_coeff(&cat);
        let mut modules = Map::new();
        modules.insert(0, m.clone());
        let e = ModuleComplex::new(cat.clone(), Variance::Contravariant, modules, Map::new())
            .unwrap();
        let report = kunneth_check(&e, &x, KunnethMode::Tor).unwrap();
        let br = bredon_homology(&x, &m).unwrap();
        for (n, d) in &br {
            assert_eq!(report.rows[n].lhs, *d);
        }
        assert!(report.hereditary_identity);
    }

    #[test]
    fn projective_coefficients_collapse() {
        let cat = or_z2();
        let x = free_circle(&cat);
        // e = representable contravariant in degree 0: projective homology
        let p = CatModule::representable(cat.clone(), 1, Variance::Contravariant);
        let mut modules = Map::new();
        modules.insert(0, p);
        let e = ModuleComplex::new(cat.clone(), Variance::Contravariant, modules, Map::new())
            .unwrap();
        let report = kunneth_check(&e, &x, KunnethMode::Tor).unwrap();
        assert!(report.flat_collapse);
        let chern = chern_character(&e, &x).unwrap();
        assert!(chern.verified);
    }

    #[test]
    fn non_flat_coefficients_are_rejected_by_chern() {
        // over the diamond poset, the simple at the top is not projective
        let leq = |x: usize, y: usize| x == y || (x == 0 && y > 0) || (y == 3 && x < 3);
        let dia = std::sync::Arc::new(crate::fincat::FiniteCategory::poset(
            &["a", "b", "c", "d"],
            leq,
        ));
        let mut dims = vec![0; 4];
        dims[3] = 1;
        let action = (0..dia.morphism_count())
            .map(|f| {
                let v = Variance::Contravariant;
                let (i, o) = (v.in_obj(&dia, f), v.out_obj(&dia, f));
                if i == 3 && o == 3 {
                    RatMatrix::identity(1)
                } else {
                    RatMatrix::zeros(dims[o], dims[i])
                }
            })
            .collect();
        let s_top = CatModule::new(dia.clone(), Variance::Contravariant, dims, action).unwrap();
        let mut modules = Map::new();
        modules.insert(0, s_top);
        let e =
            ModuleComplex::new(dia.clone(), Variance::Contravariant, modules, Map::new()).unwrap();
        let mut cells = Map::new();
        cells.insert(0, vec![crate::bredon::Cell { id: "pt".into(), obj: 0 }]);
        let x = FreeBasedComplex::new(dia.clone(), cells, Map::new()).unwrap();
        assert!(matches!(
            chern_character(&e, &x),
            Err(BredonError::CoefficientsNotFlat(0))
        ));
    }
}
