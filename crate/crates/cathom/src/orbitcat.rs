//! Finite groups given by Cayley tables, subgroup enumeration, subgroup
//! families closed under subconjugation, and the orbit category
//! Or(G, 𝔽) with Hom(G/H, G/K) = K\Trans_G(H, K).

use crate::fincat::{CategoryBuilder, FiniteCategory};
use std::collections::BTreeSet;
use thiserror::Error;

/// Subgroup enumeration refuses groups above this order.
pub const DEFAULT_GROUP_BOUND: usize = 48;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("group of order {0} exceeds the bound {1}")]
    GroupTooLarge(usize, usize),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup family: {0}")]
    InvalidFamily(String),
}

/// A finite group presented by its multiplication table. Associativity,
/// identity and inverses are checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    label: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(label: &str, table: Vec<Vec<usize>>) -> Result<Self, OrbitError> {
        let n = table.len();
        if n == 0 {
            return Err(OrbitError::InvalidGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(OrbitError::InvalidGroup("table is not square over 0..n".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| OrbitError::InvalidGroup("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| OrbitError::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(OrbitError::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { label: label.to_string(), table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&format!("cyclic:{n}"), table).expect("cyclic group is valid")
    }

    /// Dihedral group of order 2n; elements 0..n are rotations rᵏ,
    /// n..2n are reflections rᵏs, with s·r = r⁻¹·s.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let idx = |rot: usize, refl: bool| if refl { n + rot } else { rot };
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (i, p) = (a % n, a >= n);
                let (j, q) = (b % n, b >= n);
                // rⁱsᵖ · rʲs^q = r^(i∓j) s^(p xor q) since s·r = r⁻¹·s
                let rot = if p { (2 * n + i - j) % n } else { (i + j) % n };
                table[a][b] = idx(rot, p ^ q);
            }
        }
        Self::from_table(&format!("dihedral:{n}"), table).expect("dihedral group is valid")
    }

    /// Symmetric group on n letters, n ≤ 4 is plenty at desk scale.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=4).contains(&n));
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                        index(&pq)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&format!("sym:{n}"), table).expect("symmetric group is valid")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| {
                        let (xa, xb) = (x / nb, x % nb);
                        let (ya, yb) = (y / nb, y % nb);
                        a.mul(xa, ya) * nb + b.mul(xb, yb)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&format!("{}x{}", a.label, b.label), table).expect("product group is valid")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn conj_set(&self, g: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&h| self.conj(g, h)).collect();
        out.sort_unstable();
        out
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    fn closure(&self, gens: &BTreeSet<usize>) -> Vec<usize> {
        let mut set: BTreeSet<usize> = gens.clone();
        set.insert(self.identity);
        loop {
            let mut new = Vec::new();
            for &a in &set {
                for &b in &set {
                    let p = self.mul(a, b);
                    if !set.contains(&p) {
                        new.push(p);
                    }
                }
            }
            if new.is_empty() {
                break;
            }
            set.extend(new);
        }
        set.into_iter().collect()
    }

    /// All subgroups, each a sorted element set, ordered by (size, elements).
    /// Cyclic subgroups first, then closure under pairwise joins.
    pub fn subgroups(&self) -> Result<Vec<Vec<usize>>, OrbitError> {
        self.subgroups_bounded(DEFAULT_GROUP_BOUND)
    }

    pub fn subgroups_bounded(&self, bound: usize) -> Result<Vec<Vec<usize>>, OrbitError> {
        if self.order() > bound {
            return Err(OrbitError::GroupTooLarge(self.order(), bound));
        }
        let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
        for x in 0..self.order() {
            subs.insert(self.closure(&BTreeSet::from([x])));
        }
        loop {
            let snapshot: Vec<Vec<usize>> = subs.iter().cloned().collect();
            let before = subs.len();
            for i in 0..snapshot.len() {
                for j in (i + 1)..snapshot.len() {
                    let gens: BTreeSet<usize> =
                        snapshot[i].iter().chain(snapshot[j].iter()).copied().collect();
                    subs.insert(self.closure(&gens));
                }
            }
            if subs.len() == before {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = subs.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        Ok(out)
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if set.is_empty() || !set.contains(&self.identity) {
            return false;
        }
        set.iter().all(|&a| {
            set.binary_search(&self.inv(a)).is_ok()
                && set.iter().all(|&b| set.binary_search(&self.mul(a, b)).is_ok())
        })
    }

    /// Trans_G(H, K) = { x ∈ G : xHx⁻¹ ⊆ K }.
    pub fn trans_set(&self, h: &[usize], k: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&x| h.iter().all(|&a| k.binary_search(&self.conj(x, a)).is_ok()))
            .collect()
    }

    pub fn normalizer(&self, h: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&x| self.conj_set(x, h) == h).collect()
    }

    /// True iff the subgroup is cyclic of prime power order (order 1
    /// counts as p⁰).
    pub fn is_cyclic_prime_power(&self, h: &[usize]) -> bool {
        if !is_prime_power_or_one(h.len()) {
            return false;
        }
        h.iter().any(|&x| self.closure(&BTreeSet::from([x])) == h)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for x in 0..n {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

pub fn is_prime_power_or_one(n: usize) -> bool {
    if n == 1 {
        return true;
    }
    let mut m = n;
    let mut p = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return true; // n prime
    }
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// A nonempty set of subgroups closed under subconjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupFamily {
    pub members: Vec<Vec<usize>>,
}

impl SubgroupFamily {
    /// Validates closure: for every member H and every g ∈ G, every
    /// subgroup contained in gHg⁻¹ is again a member.
    pub fn new(group: &FiniteGroup, mut members: Vec<Vec<usize>>) -> Result<Self, OrbitError> {
        for m in members.iter_mut() {
            m.sort_unstable();
            m.dedup();
        }
        members.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        members.dedup();
        if members.is_empty() {
            return Err(OrbitError::InvalidFamily("family is empty".into()));
        }
        for m in &members {
            if !group.is_subgroup(m) {
                return Err(OrbitError::InvalidFamily(format!("{m:?} is not a subgroup")));
            }
        }
        let all = group.subgroups()?;
        for h in &members {
            for g in 0..group.order() {
                let conj = group.conj_set(g, h);
                for s in &all {
                    if s.iter().all(|x| conj.binary_search(x).is_ok()) && !members.contains(s) {
                        return Err(OrbitError::InvalidFamily(format!(
                            "not closed under subconjugation: missing {s:?}"
                        )));
                    }
                }
            }
        }
        Ok(SubgroupFamily { members })
    }

    pub fn all(group: &FiniteGroup) -> Result<Self, OrbitError> {
        Self::new(group, group.subgroups()?)
    }

    /// True iff every member is cyclic of prime power order.
    pub fn orbit_ufp_criterion(&self, group: &FiniteGroup) -> bool {
        self.members.iter().all(|h| group.is_cyclic_prime_power(h))
    }
}

/// The orbit category together with the data needed to map its morphisms
/// back to group elements: morphism i corresponds to φ(rep): G/H → G/K.
#[derive(Debug, Clone)]
pub struct OrbitCategory {
    pub category: FiniteCategory,
    pub group: FiniteGroup,
    pub members: Vec<Vec<usize>>,
    /// (source member index, target member index, coset representative)
    pub morphism_data: Vec<(usize, usize, usize)>,
}

/// Objects are G/H for H in the family; Hom(G/H, G/K) is the set of left
/// cosets K\Trans_G(H, K) with φ(g') ∘ φ(g) = φ(g'g). Coset
/// representatives are the minimal element ids.
pub fn orbit_category(group: &FiniteGroup, family: &SubgroupFamily) -> OrbitCategory {
    let members = family.members.clone();
    let obj_name = |i: usize| format!("G/H{i}");
    // K\Trans(H,K): partition into cosets K·x, canonical representative = min.
    let coset_rep = |k: &[usize], x: usize| -> usize {
        k.iter().map(|&a| group.mul(a, x)).min().expect("nonempty subgroup")
    };
    let mut b = CategoryBuilder::default();
    b.objects = (0..members.len()).map(obj_name).collect();
    let mut morphism_data = Vec::new();
    let mor_name = |h: usize, k: usize, rep: usize| format!("phi{rep}_{h}to{k}");
    for (hi, h) in members.iter().enumerate() {
        for (ki, k) in members.iter().enumerate() {
            let trans = group.trans_set(h, k);
            let mut reps: Vec<usize> = trans.iter().map(|&x| coset_rep(k, x)).collect();
            reps.sort_unstable();
            reps.dedup();
            for rep in reps {
                b.morphisms.push((mor_name(hi, ki, rep), obj_name(hi), obj_name(ki)));
                morphism_data.push((hi, ki, rep));
            }
        }
    }
    for (gi, &(h1, k1, r1)) in morphism_data.iter().enumerate() {
        let _ = gi;
        for &(h2, k2, r2) in morphism_data.iter() {
            // compose φ(r1): H1→K1 after φ(r2): H2→K2 when K2 = H1
            if k2 == h1 {
                let prod = group.mul(r1, r2);
                let rep = coset_rep(&members[k1], prod);
                b.compositions.push((
                    mor_name(h1, k1, r1),
                    mor_name(h2, k2, r2),
                    mor_name(h2, k1, rep),
                ));
            }
        }
    }
    for (hi, h) in members.iter().enumerate() {
        let rep = coset_rep(h, group.identity());
        b.identities.insert(obj_name(hi), mor_name(hi, hi, rep));
    }
    let category = b.build().expect("orbit category construction is valid");
    OrbitCategory { category, group: group.clone(), members, morphism_data }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(2).subgroups().unwrap().len(), 2);
        // divisor lattice of the cyclic group: orders 1, 2, 3, 6
        let z6 = FiniteGroup::cyclic(6);
        let subs = z6.subgroups().unwrap();
        assert_eq!(subs.len(), 4);
        let orders: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        // classical enumeration: 1, three ⟨transposition⟩, ⟨3-cycle⟩, S₃
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.subgroups().unwrap().len(), 6);
    }

    #[test]
    fn group_too_large() {
        let g = FiniteGroup::cyclic(10);
        assert!(matches!(g.subgroups_bounded(8), Err(OrbitError::GroupTooLarge(10, 8))));
    }

    #[test]
    fn trans_set_examples() {
        let z2 = FiniteGroup::cyclic(2);
        let triv = vec![0];
        let full = vec![0, 1];
        assert_eq!(z2.trans_set(&triv, &full), vec![0, 1]);
        assert_eq!(z2.trans_set(&triv, &triv), vec![0, 1]);
        assert_eq!(z2.trans_set(&full, &triv), Vec::<usize>::new());
        assert_eq!(z2.trans_set(&full, &full), vec![0, 1]);
        let s3 = FiniteGroup::symmetric(3);
        let subs = s3.subgroups().unwrap();
        let trivial = &subs[0];
        let whole = subs.last().unwrap();
        assert_eq!(s3.trans_set(trivial, whole).len(), 6);
        assert!(s3.trans_set(whole, trivial).is_empty());
    }

    #[test]
    fn orbit_category_z2() {
        let g = FiniteGroup::cyclic(2);
        let fam = SubgroupFamily::all(&g).unwrap();
        let orb = orbit_category(&g, &fam);
        let c = &orb.category;
        assert_eq!(c.object_count(), 2);
        // hom sizes per the explicit coset description
        assert_eq!(c.hom(0, 0).len(), 2); // Hom(G/1, G/1)
        assert_eq!(c.hom(0, 1).len(), 1); // Hom(G/1, G/G)
        assert_eq!(c.hom(1, 0).len(), 0); // Hom(G/G, G/1)
        assert_eq!(c.hom(1, 1).len(), 1); // Hom(G/G, G/G)
        assert_eq!(c.morphism_count(), 4);
        assert!(c.is_ei());
    }

    #[test]
    fn orbit_category_trivial_group() {
        let g = FiniteGroup::cyclic(1);
        let fam = SubgroupFamily::all(&g).unwrap();
        let orb = orbit_category(&g, &fam);
        assert_eq!(orb.category.object_count(), 1);
        assert_eq!(orb.category.morphism_count(), 1);
    }

    #[test]
    fn orbit_category_s3_free_hom() {
        let g = FiniteGroup::symmetric(3);
        let fam = SubgroupFamily::all(&g).unwrap();
        let orb = orbit_category(&g, &fam);
        assert_eq!(orb.category.hom(0, 0).len(), 6); // 1\Trans(1,1) = G
        assert!(orb.category.is_ei());
    }

    #[test]
    fn hom_size_times_order_is_trans_size() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)] {
            let fam = SubgroupFamily::all(&g).unwrap();
            let orb = orbit_category(&g, &fam);
            for (hi, h) in orb.members.iter().enumerate() {
                for (ki, k) in orb.members.iter().enumerate() {
                    let trans = g.trans_set(h, k);
                    assert_eq!(orb.category.hom(hi, ki).len() * k.len(), trans.len());
                }
            }
        }
    }

    #[test]
    fn ufp_criterion_examples() {
        let z8 = FiniteGroup::cyclic(8);
        assert!(SubgroupFamily::all(&z8).unwrap().orbit_ufp_criterion(&z8));
        let z6 = FiniteGroup::cyclic(6);
        assert!(!SubgroupFamily::all(&z6).unwrap().orbit_ufp_criterion(&z6));
        // S₃ family missing only the full group: orders 1, 2, 3 are all
        // cyclic prime power
        let s3 = FiniteGroup::symmetric(3);
        let mut subs = s3.subgroups().unwrap();
        subs.pop();
        let fam = SubgroupFamily::new(&s3, subs).unwrap();
        assert!(fam.orbit_ufp_criterion(&s3));
    }

    #[test]
    fn family_validation() {
        let z4 = FiniteGroup::cyclic(4);
        let subs = z4.subgroups().unwrap();
        // {1, Z/4} without the middle Z/2 is not closed under subgroups
        let bad = vec![subs[0].clone(), subs[2].clone()];
        assert!(SubgroupFamily::new(&z4, bad).is_err());
        assert!(SubgroupFamily::new(&z4, vec![]).is_err());
        assert!(SubgroupFamily::new(&z4, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn dihedral_and_products() {
        assert_eq!(FiniteGroup::dihedral(3).order(), 6);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.subgroups().unwrap().len(), 5);
        // D3 ≅ S3: same subgroup count
        assert_eq!(FiniteGroup::dihedral(3).subgroups().unwrap().len(), 6);
    }
}
