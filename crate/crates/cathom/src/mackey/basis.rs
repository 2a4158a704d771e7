use super::MackeyError;
use crate::algebra::{sparse_add, MultTable, SparseVec};
use crate::exactla::Rational;
use crate::orbitcat::{FiniteGroup, OrbitError, DEFAULT_GROUP_BOUND};
use std::collections::BTreeMap;

/// A basis element I^K_{gLg⁻¹} c_g R^H_L of the Mackey algebra in normal
/// form: a morphism from H to K, determined by a subgroup L ≤ H and
/// g ∈ Trans(L, K) up to the simultaneous action (L, g) ↦ (xLx⁻¹, kgx⁻¹)
/// for x ∈ H, k ∈ K.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwElement {
    pub h: usize,
    pub k: usize,
    pub l: Vec<usize>,
    pub g: usize,
}

/// μ_ℚ(G) on the normal-form basis, with the multiplication table built
/// from transitivity, conjugation equivariance and the double coset
/// formula, then validated exhaustively.
#[derive(Debug, Clone)]
pub struct MackeyAlgebra {
    pub group: FiniteGroup,
    pub subgroups: Vec<Vec<usize>>,
    pub basis: Vec<TwElement>,
    index: BTreeMap<TwElement, usize>,
    pub table: MultTable,
}

impl MackeyAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn subgroup_index(&self, set: &[usize]) -> Option<usize> {
        self.subgroups.iter().position(|s| s == set)
    }

    /// Dimension of the (h, k) block Hom_Ω(H, K).
    pub fn block_dim(&self, h: usize, k: usize) -> usize {
        self.basis.iter().filter(|b| b.h == h && b.k == k).count()
    }

    pub fn block_dims(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.h, b.k)).or_insert(0) += 1;
        }
        out
    }

    pub fn element_index(&self, e: &TwElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn normalize(&self, h: usize, k: usize, l: &[usize], g: usize) -> TwElement {
        normal_form(&self.group, &self.subgroups[h], &self.subgroups[k], l, g, h, k)
    }

    pub fn identity_element(&self, h: usize) -> TwElement {
        self.normalize(h, h, &self.subgroups[h].clone(), self.group.identity())
    }

    pub fn is_semisimple(&self) -> bool {
        self.table.is_semisimple()
    }

    /// The raw identification: (l, g) and (l2, g2) name the same element of
    /// Hom(H, K) iff some x ∈ H ∩ g2⁻¹Kg conjugates l to l2.
    pub fn identified(&self, h: usize, k: usize, l: &[usize], g: usize, l2: &[usize], g2: usize) -> bool {
        let grp = &self.group;
        let hs = &self.subgroups[h];
        let ks = &self.subgroups[k];
        hs.iter().any(|&x| {
            // x ∈ g2⁻¹ K g  ⟺  g2 x g⁻¹ ∈ K
            let witness = grp.mul(grp.mul(g2, x), grp.inv(g));
            ks.binary_search(&witness).is_ok() && grp.conj_set(x, l) == l2
        })
    }
}

fn normal_form(
    grp: &FiniteGroup,
    hs: &[usize],
    ks: &[usize],
    l: &[usize],
    g: usize,
    h: usize,
    k: usize,
) -> TwElement {
    let mut best: Option<(Vec<usize>, usize)> = None;
    for &x in hs {
        let lx = grp.conj_set(x, l);
        let gx = grp.mul(g, grp.inv(x));
        for &kk in ks {
            let cand = (lx.clone(), grp.mul(kk, gx));
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let (l, g) = best.expect("subgroups are nonempty");
    TwElement { h, k, l, g }
}

/// Builds μ_ℚ(G): enumerates normal forms per (H, K) block, computes the
/// multiplication via the double coset expansion, and validates
/// associativity and the unit exhaustively.
pub fn mackey_algebra(group: &FiniteGroup) -> Result<MackeyAlgebra, MackeyError> {
    mackey_algebra_bounded(group, DEFAULT_GROUP_BOUND)
}

pub fn mackey_algebra_bounded(
    group: &FiniteGroup,
    bound: usize,
) -> Result<MackeyAlgebra, MackeyError> {
    if group.order() > bound {
        return Err(MackeyError::Orbit(OrbitError::GroupTooLarge(group.order(), bound)));
    }
    let subgroups = group.subgroups_bounded(bound)?;
    let contains = |big: &[usize], small: &[usize]| small.iter().all(|x| big.binary_search(x).is_ok());
    let mut basis: Vec<TwElement> = Vec::new();
    for (h, hs) in subgroups.iter().enumerate() {
        for (k, ks) in subgroups.iter().enumerate() {
            let mut seen: Vec<TwElement> = Vec::new();
            for l in subgroups.iter().filter(|l| contains(hs, l)) {
                for g in group.trans_set(l, ks) {
                    let nf = normal_form(group, hs, ks, l, g, h, k);
                    if !seen.contains(&nf) {
                        seen.push(nf);
                    }
                }
            }
            seen.sort();
            basis.extend(seen);
        }
    }
    let index: BTreeMap<TwElement, usize> =
        basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    // multiplication: a∘b for a: H_a → K_a, b: H_b → K_b with K_b = H_a,
    // expanded over double cosets L_a\H_a/(g_b L_b g_b⁻¹)
    let one = || Rational::from_integer(1.into());
    let dim = basis.len();
    let mut prod: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); dim]; dim];
    for (ai, a) in basis.iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            if b.k != a.h {
                continue;
            }
            let ha = &subgroups[a.h];
            let j: Vec<usize> = group.conj_set(b.g, &b.l);
            // double coset representatives of L_a\H_a/J
            let mut reps: Vec<usize> = Vec::new();
            let mut covered: Vec<bool> = vec![false; group.order()];
            for &x in ha {
                if covered[x] {
                    continue;
                }
                reps.push(x);
                for &la in &a.l {
                    for &jj in &j {
                        covered[group.mul(group.mul(la, x), jj)] = true;
                    }
                }
            }
            let mut acc = SparseVec::new();
            for x in reps {
                // L'' = g_b⁻¹ (J ∩ x⁻¹ L_a x) g_b, g'' = g_a · x · g_b
                let xinv = group.inv(x);
                let mid: Vec<usize> = j
                    .iter()
                    .copied()
                    .filter(|&jj| a.l.binary_search(&group.conj(x, jj)).is_ok())
                    .collect();
                let l2 = group.conj_set(group.inv(b.g), &mid);
                let _ = xinv;
                let g2 = group.mul(group.mul(a.g, x), b.g);
                let nf = normal_form(group, &subgroups[b.h], &subgroups[a.k], &l2, g2, b.h, a.k);
                let idx = index[&nf];
                acc = sparse_add(&acc, &vec![(idx, one())]);
            }
            prod[ai][bi] = acc;
        }
    }
    let unit: SparseVec = {
        let mut ids: Vec<usize> = (0..subgroups.len())
            .map(|h| {
                let nf = normal_form(
                    group,
                    &subgroups[h],
                    &subgroups[h],
                    &subgroups[h],
                    group.identity(),
                    h,
                    h,
                );
                index[&nf]
            })
            .collect();
        ids.sort_unstable();
        ids.into_iter().map(|i| (i, one())).collect()
    };
    let table = MultTable { dim, prod, unit };
    table.validate().map_err(MackeyError::Internal)?;
    Ok(MackeyAlgebra { group: group.clone(), subgroups, basis, index, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_of_trivial_group() {
        let g = FiniteGroup::cyclic(1);
        let mu = mackey_algebra(&g).unwrap();
        assert_eq!(mu.dim(), 1);
    }

    #[test]
    fn dimension_and_blocks_of_z2() {
        let g = FiniteGroup::cyclic(2);
        let mu = mackey_algebra(&g).unwrap();
        assert_eq!(mu.dim(), 6);
        let blocks = mu.block_dims();
        // (1,1), (1,G), (G,1), (G,G)
        assert_eq!(blocks[&(0, 0)], 2);
        assert_eq!(blocks[&(0, 1)], 1);
        assert_eq!(blocks[&(1, 0)], 1);
        assert_eq!(blocks[&(1, 1)], 2);
    }

    #[test]
    fn block_multiplication_respects_objects() {
        let g = FiniteGroup::cyclic(2);
        let mu = mackey_algebra(&g).unwrap();
        for (ai, a) in mu.basis.iter().enumerate() {
            for (bi, b) in mu.basis.iter().enumerate() {
                let p = &mu.table.prod[ai][bi];
                if b.k != a.h {
                    assert!(p.is_empty());
                } else {
                    for (t, _) in p {
                        assert_eq!(mu.basis[*t].h, b.h);
                        assert_eq!(mu.basis[*t].k, a.k);
                    }
                }
            }
        }
    }

    #[test]
    fn identification_is_an_equivalence_relation() {
        // reflexivity, symmetry and transitivity of the raw identification,
        // checked exhaustively on small groups
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
            let mu = mackey_algebra(&g).unwrap();
            let contains =
                |big: &[usize], small: &[usize]| small.iter().all(|x| big.binary_search(x).is_ok());
            for h in 0..mu.subgroups.len() {
                for k in 0..mu.subgroups.len() {
                    let mut raw: Vec<(Vec<usize>, usize)> = Vec::new();
                    for l in mu.subgroups.iter().filter(|l| contains(&mu.subgroups[h], l)) {
                        for gg in g.trans_set(l, &mu.subgroups[k]) {
                            raw.push((l.clone(), gg));
                        }
                    }
                    for (l1, g1) in &raw {
                        assert!(mu.identified(h, k, l1, *g1, l1, *g1));
                        for (l2, g2) in &raw {
                            let ab = mu.identified(h, k, l1, *g1, l2, *g2);
                            let ba = mu.identified(h, k, l2, *g2, l1, *g1);
                            assert_eq!(ab, ba);
                            // identified pairs share a normal form and
                            // conversely
                            let nf1 = mu.normalize(h, k, l1, *g1);
                            let nf2 = mu.normalize(h, k, l2, *g2);
                            assert_eq!(ab, nf1 == nf2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn semisimple_for_small_groups() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
            let mu = mackey_algebra(&g).unwrap();
            assert!(mu.is_semisimple(), "μ(ℚ) of {} must be semisimple", g.label());
        }
    }

    #[test]
    fn group_too_large_is_reported() {
        let g = FiniteGroup::cyclic(4);
        assert!(matches!(
            mackey_algebra_bounded(&g, 2),
            Err(MackeyError::Orbit(OrbitError::GroupTooLarge(4, 2)))
        ));
    }
}
