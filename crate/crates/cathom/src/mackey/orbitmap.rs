use super::basis::MackeyAlgebra;
use super::MackeyError;
use crate::catalg::{is_projective, jacobson_radical, CatModule, Variance};
use crate::exactla::{rank, solve, RatMatrix, Rational, SparseMat};
use crate::orbitcat::{orbit_category, FiniteGroup, OrbitCategory, SubgroupFamily};
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Images of the orbit category morphisms in μ_ℚ(G) under
/// I(φ(g)) = I^K_{gHg⁻¹} c_g, with functoriality verified on every
/// composable pair.
pub fn functor_i(mu: &MackeyAlgebra, orb: &OrbitCategory) -> Result<Vec<usize>, MackeyError> {
    if orb.members != mu.subgroups {
        return Err(MackeyError::CategoryMismatch);
    }
    let mut images = Vec::with_capacity(orb.morphism_data.len());
    for &(h, k, rep) in &orb.morphism_data {
        let full_h = mu.subgroups[h].clone();
        let nf = mu.normalize(h, k, &full_h, rep);
        let idx = mu
            .element_index(&nf)
            .ok_or_else(|| MackeyError::Internal("image element missing from basis".into()))?;
        images.push(idx);
    }
    // functoriality: I(φ(g'))·I(φ(g)) = I(φ(g'g)) on all composable pairs
    let cat = &orb.category;
    for g2 in 0..cat.morphism_count() {
        for g1 in 0..cat.morphism_count() {
            let Some(c) = cat.compose(g2, g1) else { continue };
            let prod = &mu.table.prod[images[g2]][images[g1]];
            let expected = vec![(images[c], Rational::from_integer(1.into()))];
            if prod != &expected {
                return Err(MackeyError::Internal(format!(
                    "functoriality fails on ({}, {})",
                    cat.morphism(g2).id,
                    cat.morphism(g1).id
                )));
            }
        }
    }
    Ok(images)
}

#[derive(Debug, Clone)]
pub struct FReport {
    /// (H index, L index set) pairs: L ≤ H up to H-conjugacy.
    pub pairs: Vec<(usize, Vec<usize>)>,
    /// Total dimension of each domain summand.
    pub summand_dims: Vec<usize>,
    pub domain_dim: usize,
    pub mu_dim: usize,
    pub bijective: bool,
    pub well_defined: bool,
    pub orbit_linear: bool,
    /// μ projective as a left module over ℚOr(G): follows from
    /// bijectivity since every domain summand is a summand of a
    /// representable.
    pub left_projective: bool,
    /// Direct projectivity tests of μ as a left / right ℚOr(G)-module
    /// (the right-hand case has no expected answer).
    pub left_projective_direct: Option<bool>,
    pub right_projective_direct: Option<bool>,
}

/// μ_ℚ(G) as a left ℚOr(G)-module: value at G/K is spanned by the basis
/// elements landing in K, orbit morphisms act by left multiplication with
/// their I-images.
pub fn mu_as_left_orbit_module(
    mu: &MackeyAlgebra,
    orb: &OrbitCategory,
    images: &[usize],
) -> CatModule {
    let cat = Arc::new(orb.category.clone());
    let basis_at: Vec<Vec<usize>> = (0..mu.subgroups.len())
        .map(|k| (0..mu.dim()).filter(|&i| mu.basis[i].k == k).collect())
        .collect();
    let dims: Vec<usize> = basis_at.iter().map(|b| b.len()).collect();
    let mut action = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (src, dst) = (cat.morphism(f).src, cat.morphism(f).dst);
        let mut m = RatMatrix::zeros(dims[dst], dims[src]);
        for (col, &b) in basis_at[src].iter().enumerate() {
            for (t, c) in &mu.table.prod[images[f]][b] {
                let row = basis_at[dst].iter().position(|&x| x == *t).expect("block closed");
                m.set(row, col, c.clone());
            }
        }
        action.push(m);
    }
    CatModule { cat, variance: Variance::Covariant, dims, action }
}

/// μ_ℚ(G) as a right ℚOr(G)-module: value at G/H is spanned by the basis
/// elements leaving H, morphisms act by right multiplication.
pub fn mu_as_right_orbit_module(
    mu: &MackeyAlgebra,
    orb: &OrbitCategory,
    images: &[usize],
) -> CatModule {
    let cat = Arc::new(orb.category.clone());
    let basis_at: Vec<Vec<usize>> = (0..mu.subgroups.len())
        .map(|h| (0..mu.dim()).filter(|&i| mu.basis[i].h == h).collect())
        .collect();
    let dims: Vec<usize> = basis_at.iter().map(|b| b.len()).collect();
    let mut action = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (src, dst) = (cat.morphism(f).src, cat.morphism(f).dst);
        // contravariant: value(G/dst) → value(G/src), b ↦ b·I(φ)
        let mut m = RatMatrix::zeros(dims[src], dims[dst]);
        for (col, &b) in basis_at[dst].iter().enumerate() {
            for (t, c) in &mu.table.prod[b][images[f]] {
                let row = basis_at[src].iter().position(|&x| x == *t).expect("block closed");
                m.set(row, col, c.clone());
            }
        }
        action.push(m);
    }
    CatModule { cat, variance: Variance::Contravariant, dims, action }
}

/// Builds the explicit map
/// F: ⊕_{(H,L)} ℚHom_{Or}(G/L, −) ⊗_{ℚN(L)} ℚ[N(L)/(H∩N(L))] → μ_ℚ(G),
/// φ(g) ⊗ n ↦ I(φ(gn)) R^H_L, and verifies well-definedness, orbit
/// linearity and exact bijectivity. With `direct_checks`, additionally
/// runs the projectivity decision on μ as a left and as a right orbit
/// module.
pub fn verify_f_isomorphism(
    group: &FiniteGroup,
    direct_checks: bool,
) -> Result<FReport, MackeyError> {
    let mu = super::basis::mackey_algebra(group)?;
    let fam = SubgroupFamily::all(group)?;
    let orb = orbit_category(group, &fam);
    let images = functor_i(&mu, &orb)?;
    let subs = &mu.subgroups;
    let contains = |big: &[usize], small: &[usize]| small.iter().all(|x| big.binary_search(x).is_ok());
    // pairs (H, L) with L ≤ H modulo conjugation of L inside H
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (h, hs) in subs.iter().enumerate() {
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for l in subs.iter().filter(|l| contains(hs, l)) {
            let orbit_min = hs
                .iter()
                .map(|&x| group.conj_set(x, l))
                .min()
                .expect("nonempty subgroup");
            if &orbit_min == l && !reps.contains(l) {
                reps.push(l.clone());
            }
        }
        for l in reps {
            let li = subs.iter().position(|s| *s == l).expect("subgroup is listed");
            pairs.push((h, li));
        }
    }
    let coset_rep = |k: &[usize], x: usize| -> usize {
        k.iter().map(|&a| group.mul(a, x)).min().expect("nonempty")
    };
    // per pair data: normalizer cosets N/(H∩N)
    struct PairData {
        h: usize,
        l: usize,
        normalizer: Vec<usize>,
        coset_reps: Vec<usize>,
    }
    let pair_data: Vec<PairData> = pairs
        .iter()
        .map(|&(h, li)| {
            let n = group.normalizer(&subs[li]);
            let hn: Vec<usize> =
                n.iter().copied().filter(|x| subs[h].binary_search(x).is_ok()).collect();
            let mut reps: Vec<usize> = n
                .iter()
                .map(|&x| hn.iter().map(|&u| group.mul(x, u)).min().expect("nonempty"))
                .collect();
            reps.sort_unstable();
            reps.dedup();
            PairData { h, l: li, normalizer: n, coset_reps: reps }
        })
        .collect();
    // rows of μ(G/K): basis elements with target K, in basis order
    let mu_rows: Vec<Vec<usize>> = (0..subs.len())
        .map(|k| (0..mu.dim()).filter(|&i| mu.basis[i].k == k).collect())
        .collect();
    let mut well_defined = true;
    let mut bijective = true;
    let mut summand_dims = vec![0usize; pairs.len()];
    // per object: quotient projections and F matrices for the linearity check
    let mut f_q_per_object: Vec<RatMatrix> = Vec::new();
    let mut proj_per_object: Vec<Vec<RatMatrix>> = Vec::new();
    let mut section_per_object: Vec<Vec<RatMatrix>> = Vec::new();
    let mut pre_data: Vec<Vec<(Vec<usize>, Vec<usize>)>> = Vec::new(); // (hom reps, coset reps)
    for k in 0..subs.len() {
        let mut f_blocks: Vec<RatMatrix> = Vec::new();
        let mut projs: Vec<RatMatrix> = Vec::new();
        let mut sections: Vec<RatMatrix> = Vec::new();
        let mut pres: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (pi, pd) in pair_data.iter().enumerate() {
            let trans = group.trans_set(&subs[pd.l], &subs[k]);
            let mut hom_reps: Vec<usize> = trans.iter().map(|&x| coset_rep(&subs[k], x)).collect();
            hom_reps.sort_unstable();
            hom_reps.dedup();
            let nw = pd.coset_reps.len();
            let pre_dim = hom_reps.len() * nw;
            let idx = |r: usize, w: usize| r * nw + w;
            // relations (φ(g)·φ(n)) ⊗ w = φ(g) ⊗ (n·w) for n ∈ N(L)
            let mut rel = SparseMat::new(pre_dim.max(1));
            let hn: Vec<usize> = pd
                .normalizer
                .iter()
                .copied()
                .filter(|x| subs[pd.h].binary_search(x).is_ok())
                .collect();
            for (r, &g) in hom_reps.iter().enumerate() {
                for &n in &pd.normalizer {
                    for (w, &wrep) in pd.coset_reps.iter().enumerate() {
                        let gn = coset_rep(&subs[k], group.mul(g, n));
                        let r2 = hom_reps.binary_search(&gn).expect("coset closed");
                        let nw_elt = group.mul(n, wrep);
                        let nw_rep =
                            hn.iter().map(|&u| group.mul(nw_elt, u)).min().expect("nonempty");
                        let w2 = pd
                            .coset_reps
                            .binary_search(&nw_rep)
                            .expect("normaliser coset closed");
                        if (r2, w) == (r, w2) {
                            continue;
                        }
                        rel.push_row(vec![
                            (idx(r2, w), Rational::from_integer(1.into())),
                            (idx(r, w2), -Rational::from_integer(1.into())),
                        ]);
                    }
                }
            }
            let proj = if pre_dim == 0 {
                RatMatrix::zeros(0, 0)
            } else {
                rel.kernel_basis().transpose()
            };
            let qdim = proj.rows();
            summand_dims[pi] += qdim;
            // F on the pre-basis: (g, w) ↦ I(φ(g·w)) R^H_L
            let mut f_pre = RatMatrix::zeros(mu_rows[k].len(), pre_dim);
            for (r, &g) in hom_reps.iter().enumerate() {
                for (w, &wrep) in pd.coset_reps.iter().enumerate() {
                    let gval = group.mul(g, wrep);
                    let nf = mu.normalize(pd.h, k, &subs[pd.l], gval);
                    let bi = mu.element_index(&nf).expect("basis element");
                    let row = mu_rows[k].iter().position(|&x| x == bi).expect("row");
                    f_pre.set(row, idx(r, w), Rational::from_integer(1.into()));
                }
            }
            // well-definedness: F kills the relations, i.e. equal columns
            // along each relation pair
            for (r, &g) in hom_reps.iter().enumerate() {
                for &n in &pd.normalizer {
                    for (w, &wrep) in pd.coset_reps.iter().enumerate() {
                        let gn = coset_rep(&subs[k], group.mul(g, n));
                        let r2 = hom_reps.binary_search(&gn).expect("closed");
                        let nw_elt = group.mul(n, wrep);
                        let nw_rep =
                            hn.iter().map(|&u| group.mul(nw_elt, u)).min().expect("nonempty");
                        let w2 = pd.coset_reps.binary_search(&nw_rep).expect("closed");
                        for row in 0..f_pre.rows() {
                            if f_pre.get(row, idx(r2, w)) != f_pre.get(row, idx(r, w2)) {
                                well_defined = false;
                            }
                        }
                    }
                }
            }
            let section = if qdim == 0 {
                RatMatrix::zeros(pre_dim, 0)
            } else {
                solve(&proj, &RatMatrix::identity(qdim)).expect("projection is surjective")
            };
            f_blocks.push(f_pre.mul(&section));
            projs.push(proj);
            sections.push(section);
            pres.push((hom_reps, pd.coset_reps.clone()));
        }
        // stack the pair blocks horizontally: F_K: D(G/K) → μ(G/K)
        let mut f_k = RatMatrix::zeros(mu_rows[k].len(), 0);
        for b in &f_blocks {
            f_k = f_k.hstack(b);
        }
        if f_k.rows() != f_k.cols() || rank(&f_k) != f_k.rows() {
            bijective = false;
        }
        f_q_per_object.push(f_k);
        proj_per_object.push(projs);
        section_per_object.push(sections);
        pre_data.push(pres);
    }
    // orbit linearity: F ∘ (postcomposition action) = (left μ action) ∘ F
    let mut orbit_linear = true;
    let cat = &orb.category;
    for f in 0..cat.morphism_count() {
        let (src, dst) = (cat.morphism(f).src, cat.morphism(f).dst);
        let (_, _, u) = orb.morphism_data[f];
        // domain action on quotient coordinates, blockwise per pair
        let mut blocks: Vec<RatMatrix> = Vec::new();
        for (pi, _) in pair_data.iter().enumerate() {
            let (src_homs, src_ws) = &pre_data[src][pi];
            let (dst_homs, dst_ws) = &pre_data[dst][pi];
            let mut pre = RatMatrix::zeros(dst_homs.len() * dst_ws.len(), src_homs.len() * src_ws.len());
            for (r, &g) in src_homs.iter().enumerate() {
                let ug = coset_rep(&subs[dst], group.mul(u, g));
                let r2 = dst_homs.binary_search(&ug).expect("closed");
                for w in 0..src_ws.len() {
                    pre.set(r2 * dst_ws.len() + w, r * src_ws.len() + w, Rational::from_integer(1.into()));
                }
            }
            blocks.push(
                proj_per_object[dst][pi].mul(&pre).mul(&section_per_object[src][pi]),
            );
        }
        let dom_action = RatMatrix::block_diag(&blocks.iter().collect::<Vec<_>>());
        // μ left action in block coordinates
        let mut mu_action =
            RatMatrix::zeros(mu_rows[dst].len(), mu_rows[src].len());
        for (col, &b) in mu_rows[src].iter().enumerate() {
            for (t, c) in &mu.table.prod[images[f]][b] {
                let row = mu_rows[dst].iter().position(|&x| x == *t).expect("closed");
                mu_action.set(row, col, c.clone());
            }
        }
        let lhs = f_q_per_object[dst].mul(&dom_action);
        let rhs = mu_action.mul(&f_q_per_object[src]);
        if lhs != rhs {
            orbit_linear = false;
        }
    }
    let domain_dim: usize = summand_dims.iter().sum();
    let (left_direct, right_direct) = if direct_checks {
        let cat = Arc::new(orb.category.clone());
        let radical = jacobson_radical(&crate::catalg::category_algebra(cat));
        let left = mu_as_left_orbit_module(&mu, &orb, &images);
        let right = mu_as_right_orbit_module(&mu, &orb, &images);
        (Some(is_projective(&left, &radical).0), Some(is_projective(&right, &radical).0))
    } else {
        (None, None)
    };
    Ok(FReport {
        pairs: pairs.iter().map(|&(h, l)| (h, subs[l].clone())).collect(),
        summand_dims,
        domain_dim,
        mu_dim: mu.dim(),
        bijective,
        well_defined,
        orbit_linear,
        left_projective: bijective,
        left_projective_direct: left_direct,
        right_projective_direct: right_direct,
    })
}

/// Convenience: block dimension table keyed by subgroup orders, used by
/// reports.
pub fn block_dim_table(mu: &MackeyAlgebra) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for ((h, k), d) in mu.block_dims() {
        out.insert(format!("H{h}->H{k}"), d);
    }
    let _ = Rational::zero();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::basis::mackey_algebra;

    #[test]
    fn functor_i_on_z2() {
        let g = FiniteGroup::cyclic(2);
        let mu = mackey_algebra(&g).unwrap();
        let fam = SubgroupFamily::all(&g).unwrap();
        let orb = orbit_category(&g, &fam);
        let images = functor_i(&mu, &orb).unwrap();
        assert_eq!(images.len(), 4);
        // identities map to identity basis elements
        for h in 0..2 {
            let idm = orb.category.identity(h);
            let e = mu.identity_element(h);
            assert_eq!(mu.basis[images[idm]], e);
        }
        // the free automorphism φ(s) maps to the normal form of c_s at 1
        let phi_s = orb
            .category
            .hom(0, 0)
            .iter()
            .copied()
            .find(|&m| m != orb.category.identity(0))
            .unwrap();
        let img = &mu.basis[images[phi_s]];
        assert_eq!((img.h, img.k), (0, 0));
        assert_eq!(img.l, vec![0]);
    }

    #[test]
    fn f_isomorphism_z2() {
        let g = FiniteGroup::cyclic(2);
        let r = verify_f_isomorphism(&g, true).unwrap();
        assert_eq!(r.summand_dims, vec![3, 2, 1]);
        assert_eq!(r.domain_dim, 6);
        assert_eq!(r.mu_dim, 6);
        assert!(r.bijective && r.well_defined && r.orbit_linear);
        assert_eq!(r.left_projective_direct, Some(true));
        // right-module projectivity: reported, no asserted expectation
        assert!(r.right_projective_direct.is_some());
    }

    #[test]
    fn f_isomorphism_trivial_and_s3() {
        let g = FiniteGroup::cyclic(1);
        let r = verify_f_isomorphism(&g, false).unwrap();
        assert_eq!(r.domain_dim, 1);
        assert_eq!(r.mu_dim, 1);
        assert!(r.bijective);
        let s3 = FiniteGroup::symmetric(3);
        let r = verify_f_isomorphism(&s3, false).unwrap();
        assert_eq!(r.domain_dim, r.mu_dim);
        assert!(r.bijective && r.well_defined && r.orbit_linear);
    }
}
