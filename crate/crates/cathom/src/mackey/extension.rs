use super::MackeyError;
use crate::catalg::{CatModule, Variance};
use crate::exactla::{RatMatrix, Rational, SparseMat};
use crate::orbitcat::OrbitCategory;
use num::Zero;
use std::collections::BTreeMap;

/// Result of the Mackey extension test. `probabilistic_false` marks the
/// one-sided case: the linear part of the axiom system is solvable but no
/// solution passing the quadratic induction-transitivity check was found.
#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub extends: bool,
    pub witness: Option<BTreeMap<(usize, usize), RatMatrix>>,
    pub probabilistic_false: bool,
}

struct Knowns {
    /// restriction[k][h]: M(G/K) → M(G/H) for H ⊆ K, from φ^{H,K}(e)
    restriction: BTreeMap<(usize, usize), RatMatrix>,
    /// conj[(g, h)]: M(G/gHg⁻¹) → M(G/H), from φ^{H,gHg⁻¹}(g)
    conj: BTreeMap<(usize, usize), RatMatrix>,
}

fn collect_knowns(orb: &OrbitCategory, m: &CatModule) -> Result<Knowns, MackeyError> {
    let group = &orb.group;
    let members = &orb.members;
    let mor_index: BTreeMap<(usize, usize, usize), usize> = orb
        .morphism_data
        .iter()
        .enumerate()
        .map(|(i, &(h, k, r))| ((h, k, r), i))
        .collect();
    let coset_rep = |k: usize, x: usize| -> usize {
        members[k].iter().map(|&a| group.mul(a, x)).min().expect("nonempty")
    };
    let member_index = |set: &[usize]| -> Result<usize, MackeyError> {
        members
            .iter()
            .position(|s| s == set)
            .ok_or_else(|| MackeyError::Internal("family is not subgroup-closed".into()))
    };
    let mut restriction = BTreeMap::new();
    let mut conj = BTreeMap::new();
    for h in 0..members.len() {
        for k in 0..members.len() {
            let contains = members[h].iter().all(|x| members[k].binary_search(x).is_ok());
            if contains {
                let rep = coset_rep(k, group.identity());
                let mi = mor_index[&(h, k, rep)];
                restriction.insert((k, h), m.action[mi].clone());
            }
        }
        for g in 0..group.order() {
            let conj_set = group.conj_set(g, &members[h]);
            let ch = member_index(&conj_set)?;
            let rep = coset_rep(ch, g);
            let mi = mor_index[&(h, ch, rep)];
            conj.insert((g, h), m.action[mi].clone());
        }
    }
    Ok(Knowns { restriction, conj })
}

struct UnknownLayout {
    pairs: Vec<(usize, usize)>,
    offsets: BTreeMap<(usize, usize), usize>,
    total: usize,
}

fn unknown_layout(orb: &OrbitCategory, dims: &[usize]) -> UnknownLayout {
    let members = &orb.members;
    let mut pairs = Vec::new();
    let mut offsets = BTreeMap::new();
    let mut total = 0usize;
    for h in 0..members.len() {
        for l in 0..members.len() {
            if l == h {
                continue;
            }
            let proper = members[l].iter().all(|x| members[h].binary_search(x).is_ok());
            if proper {
                pairs.push((h, l));
                offsets.insert((h, l), total);
                total += dims[h] * dims[l];
            }
        }
    }
    UnknownLayout { pairs, offsets, total }
}

/// One linear term: coefficient × unknown I'^{pair} entry, or a constant.
enum Term {
    Unknown { pair: (usize, usize), left: RatMatrix, right: RatMatrix, sign: i64 },
    Constant { value: RatMatrix, sign: i64 },
}

/// Encodes matrix equations Σ terms = 0 where each unknown term is
/// left·U·right.
fn push_equation(
    sys: &mut SparseMat,
    layout: &UnknownLayout,
    dims: &[usize],
    rows: usize,
    cols: usize,
    terms: &[Term],
    rhs_col: usize,
) {
    for r in 0..rows {
        for s in 0..cols {
            let mut row: Vec<(usize, Rational)> = Vec::new();
            let mut constant = Rational::zero();
            for term in terms {
                match term {
                    Term::Unknown { pair, left, right, sign } => {
                        let off = layout.offsets[pair];
                        let (hr, lc) = (dims[pair.0], dims[pair.1]);
                        // (left · U · right)[r][s] = Σ_{a,b} left[r][a] U[a][b] right[b][s]
                        for a in 0..hr {
                            if left.get(r, a).is_zero() {
                                continue;
                            }
                            for b in 0..lc {
                                if right.get(b, s).is_zero() {
                                    continue;
                                }
                                let c = left.get(r, a) * right.get(b, s) * crate::exactla::rat(*sign, 1);
                                row.push((off + a * lc + b, c));
                            }
                        }
                    }
                    Term::Constant { value, sign } => {
                        constant += value.get(r, s) * crate::exactla::rat(*sign, 1);
                    }
                }
            }
            if !constant.is_zero() {
                // move constants to the right-hand side
                row.push((rhs_col, -constant));
            }
            sys.push_row(row);
        }
    }
}

fn axioms_system(
    orb: &OrbitCategory,
    dims: &[usize],
    knowns: &Knowns,
    layout: &UnknownLayout,
    extra_rows: &[(usize, usize, usize)], // relinearised transitivity triples (h, k, l)
    current: Option<&BTreeMap<(usize, usize), RatMatrix>>,
) -> SparseMat {
    let group = &orb.group;
    let members = &orb.members;
    let rhs_col = layout.total;
    let mut sys = SparseMat::new(layout.total + 1);
    let contains = |big: usize, small: usize| {
        members[small].iter().all(|x| members[big].binary_search(x).is_ok())
    };
    let member_index =
        |set: &[usize]| members.iter().position(|s| s == set).expect("family closed");
    // conjugation equivariance: I'^H_L · Γ(g, L) = Γ(g, H) · I'^{gHg⁻¹}_{gLg⁻¹}
    for &(h, l) in &layout.pairs {
        for g in 0..group.order() {
            let hc = member_index(&group.conj_set(g, &members[h]));
            let lc = member_index(&group.conj_set(g, &members[l]));
            let gamma_l = &knowns.conj[&(g, l)];
            let gamma_h = &knowns.conj[&(g, h)];
            let terms = [
                Term::Unknown {
                    pair: (h, l),
                    left: RatMatrix::identity(dims[h]),
                    right: gamma_l.clone(),
                    sign: 1,
                },
                Term::Unknown {
                    pair: (hc, lc),
                    left: gamma_h.clone(),
                    right: RatMatrix::identity(dims[lc]),
                    sign: -1,
                },
            ];
            push_equation(&mut sys, layout, dims, dims[h], dims[lc], &terms, rhs_col);
        }
    }
    // double coset: R'^H_J I'^H_L = Σ_x I'^J_B Γ(x, B) R'^L_A
    for h in 0..members.len() {
        for l in 0..members.len() {
            if !contains(h, l) {
                continue;
            }
            for j in 0..members.len() {
                if !contains(h, j) {
                    continue;
                }
                let mut terms: Vec<Term> = Vec::new();
                let r_hj = &knowns.restriction[&(h, j)];
                if l == h {
                    terms.push(Term::Constant { value: r_hj.clone(), sign: 1 });
                } else {
                    terms.push(Term::Unknown {
                        pair: (h, l),
                        left: r_hj.clone(),
                        right: RatMatrix::identity(dims[l]),
                        sign: 1,
                    });
                }
                // double coset reps of L\H/J
                let mut covered = vec![false; group.order()];
                for &x in &members[h] {
                    if covered[x] {
                        continue;
                    }
                    for &a in &members[l] {
                        for &b in &members[j] {
                            covered[group.mul(group.mul(a, x), b)] = true;
                        }
                    }
                    let a_set: Vec<usize> = members[l]
                        .iter()
                        .copied()
                        .filter(|&e| {
                            members[j].binary_search(&group.conj(group.inv(x), e)).is_ok()
                        })
                        .collect();
                    let b_set = group.conj_set(group.inv(x), &a_set);
                    let a_idx = member_index(&a_set);
                    let b_idx = member_index(&b_set);
                    let r_la = &knowns.restriction[&(l, a_idx)];
                    let gamma = &knowns.conj[&(x, b_idx)]; // M(A) → M(B)
                    let known_part = gamma.mul(r_la);
                    if b_idx == j {
                        terms.push(Term::Constant { value: known_part, sign: -1 });
                    } else {
                        terms.push(Term::Unknown {
                            pair: (j, b_idx),
                            left: RatMatrix::identity(dims[j]),
                            right: known_part,
                            sign: -1,
                        });
                    }
                }
                push_equation(&mut sys, layout, dims, dims[j], dims[l], &terms, rhs_col);
            }
        }
    }
    // relinearised transitivity rows: U^H_L = U^H_K·[U^K_L] and
    // U^H_L = [U^H_K]·U^K_L with the bracketed factor frozen
    if let Some(cur) = current {
        for &(h, k, l) in extra_rows {
            let terms = [
                Term::Unknown {
                    pair: (h, l),
                    left: RatMatrix::identity(dims[h]),
                    right: RatMatrix::identity(dims[l]),
                    sign: 1,
                },
                Term::Unknown {
                    pair: (h, k),
                    left: RatMatrix::identity(dims[h]),
                    right: cur[&(k, l)].clone(),
                    sign: -1,
                },
            ];
            push_equation(&mut sys, layout, dims, dims[h], dims[l], &terms, rhs_col);
            let terms = [
                Term::Unknown {
                    pair: (h, l),
                    left: RatMatrix::identity(dims[h]),
                    right: RatMatrix::identity(dims[l]),
                    sign: 1,
                },
                Term::Unknown {
                    pair: (k, l),
                    left: cur[&(h, k)].clone(),
                    right: RatMatrix::identity(dims[l]),
                    sign: -1,
                },
            ];
            push_equation(&mut sys, layout, dims, dims[h], dims[l], &terms, rhs_col);
        }
    }
    sys
}

fn unpack(
    layout: &UnknownLayout,
    dims: &[usize],
    x: &[Rational],
) -> BTreeMap<(usize, usize), RatMatrix> {
    let mut out = BTreeMap::new();
    for &(h, l) in &layout.pairs {
        let off = layout.offsets[&(h, l)];
        out.insert(
            (h, l),
            RatMatrix::from_fn(dims[h], dims[l], |a, b| x[off + a * dims[l] + b].clone()),
        );
    }
    out
}

fn proper_triples(orb: &OrbitCategory) -> Vec<(usize, usize, usize)> {
    let members = &orb.members;
    let contains = |big: usize, small: usize| {
        members[small].iter().all(|x| members[big].binary_search(x).is_ok())
    };
    let mut out = Vec::new();
    for h in 0..members.len() {
        for k in 0..members.len() {
            if k == h || !contains(h, k) {
                continue;
            }
            for l in 0..members.len() {
                if l == k || l == h || !contains(k, l) {
                    continue;
                }
                out.push((h, k, l));
            }
        }
    }
    out
}

fn transitivity_holds(
    triples: &[(usize, usize, usize)],
    u: &BTreeMap<(usize, usize), RatMatrix>,
) -> bool {
    triples.iter().all(|&(h, k, l)| u[&(h, k)].mul(&u[&(k, l)]) == u[&(h, l)])
}

/// Decides whether a contravariant module over the full orbit category of
/// a finite group extends to a Mackey functor. The structure maps of the
/// module are read as restrictions-with-conjugations; one unknown
/// induction per proper inclusion is solved for against the conjugation
/// equivariance and double coset axioms (a sparse affine system), and the
/// induction transitivity axiom is then verified on the solution, with a
/// few relinearisation rounds if needed. An infeasible linear system is a
/// certain "no"; a feasible system without a verified witness is reported
/// as probabilistic.
pub fn mackey_extension_exists(
    orb: &OrbitCategory,
    m: &CatModule,
) -> Result<ExtensionReport, MackeyError> {
    let all = orb.group.subgroups()?;
    if orb.members != all {
        return Err(MackeyError::CategoryMismatch);
    }
    if m.variance != Variance::Contravariant
        || m.cat.object_count() != orb.members.len()
        || m.cat.morphism_count() != orb.category.morphism_count()
    {
        return Err(MackeyError::CategoryMismatch);
    }
    let dims = m.dims.clone();
    let knowns = collect_knowns(orb, m)?;
    let layout = unknown_layout(orb, &dims);
    let triples = proper_triples(orb);
    let base = axioms_system(orb, &dims, &knowns, &layout, &[], None);
    let Some(x) = base.solve_affine() else {
        return Ok(ExtensionReport { extends: false, witness: None, probabilistic_false: false });
    };
    let mut current = unpack(&layout, &dims, &x);
    for _round in 0..4 {
        if transitivity_holds(&triples, &current) {
            return Ok(ExtensionReport {
                extends: true,
                witness: Some(current),
                probabilistic_false: false,
            });
        }
        let sys = axioms_system(orb, &dims, &knowns, &layout, &triples, Some(&current));
        match sys.solve_affine() {
            Some(x) => current = unpack(&layout, &dims, &x),
            None => break,
        }
    }
    if transitivity_holds(&triples, &current) {
        return Ok(ExtensionReport {
            extends: true,
            witness: Some(current),
            probabilistic_false: false,
        });
    }
    Ok(ExtensionReport { extends: false, witness: None, probabilistic_false: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::basis::mackey_algebra;
    use crate::mackey::orbitmap::{functor_i, mu_as_right_orbit_module};
    use crate::orbitcat::{orbit_category, FiniteGroup, SubgroupFamily};
    use std::sync::Arc;

    fn full_orbit(g: &FiniteGroup) -> OrbitCategory {
        orbit_category(g, &SubgroupFamily::all(g).unwrap())
    }

    #[test]
    fn zero_module_extends() {
        let g = FiniteGroup::cyclic(2);
        let orb = full_orbit(&g);
        let cat = Arc::new(orb.category.clone());
        let zero = CatModule::zero(cat, Variance::Contravariant);
        let r = mackey_extension_exists(&orb, &zero).unwrap();
        assert!(r.extends);
    }

    #[test]
    fn restriction_of_representable_mackey_module_extends() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)] {
            let orb = full_orbit(&g);
            let mu = mackey_algebra(&g).unwrap();
            let images = functor_i(&mu, &orb).unwrap();
            let m = mu_as_right_orbit_module(&mu, &orb, &images);
            m.validate().unwrap();
            let r = mackey_extension_exists(&orb, &m).unwrap();
            assert!(r.extends, "restricted μ-module must extend for {}", g.label());
            assert!(r.witness.is_some());
        }
    }

    #[test]
    fn trivial_one_dimensional_module_without_top_level_fails() {
        // M(G/1) = ℚ with trivial action, M(G/G) = 0: the double coset
        // axiom forces ρ∘I' = γ_e + γ_s = 2·id on a space that factors
        // through 0, which is infeasible
        let g = FiniteGroup::cyclic(2);
        let orb = full_orbit(&g);
        let cat = Arc::new(orb.category.clone());
        let dims = vec![1, 0];
        let v = Variance::Contravariant;
        let action = (0..cat.morphism_count())
            .map(|f| {
                let (i, o) = (v.in_obj(&cat, f), v.out_obj(&cat, f));
                if i == 0 && o == 0 {
                    RatMatrix::identity(1)
                } else {
                    RatMatrix::zeros(dims[o], dims[i])
                }
            })
            .collect();
        let m = CatModule::new(cat, v, dims, action).unwrap();
        let r = mackey_extension_exists(&orb, &m).unwrap();
        assert!(!r.extends);
        assert!(!r.probabilistic_false, "infeasibility is certain");
    }

    #[test]
    fn sign_module_extends_with_zero_induction() {
        // M(G/1) = ℚ with φ(s) acting by −1, M(G/G) = 0: the double coset
        // right-hand side is γ_e + γ_s = 0, so the zero induction works
        let g = FiniteGroup::cyclic(2);
        let orb = full_orbit(&g);
        let cat = Arc::new(orb.category.clone());
        let dims = vec![1, 0];
        let v = Variance::Contravariant;
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
                } else {
                    let (i, o) = (v.in_obj(&cat, f), v.out_obj(&cat, f));
                    RatMatrix::zeros(dims[o], dims[i])
                }
            })
            .collect();
        let m = CatModule::new(cat, v, dims, action).unwrap();
        let r = mackey_extension_exists(&orb, &m).unwrap();
        assert!(r.extends);
    }
}
