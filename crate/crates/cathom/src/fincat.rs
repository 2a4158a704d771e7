//! Finite categories as data: objects, morphisms, a validated composition
//! table, EI detection, unfactorisable morphisms and the unique
//! factorisation property (UFP) decision procedure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FincatError {
    #[error("category is not EI: endomorphism `{0}` is not invertible")]
    NotEI(String),
    #[error("morphism `{0}` is an isomorphism")]
    IsIsomorphism(String),
    #[error("invalid category: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with a total composition table. Validated on
/// construction: identities are two-sided units, comp(g,f) is defined
/// exactly when target(f) = source(g), and composition is associative.
/// Immutable afterwards.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    comp: Vec<Vec<Option<usize>>>,
    identities: Vec<usize>,
    hom: Vec<Vec<Vec<usize>>>,
    inverses: Vec<Option<usize>>,
}

/// A consecutively composable list of morphisms, first arrow first.
pub type MorphismChain = Vec<usize>;

/// Unvalidated category data; `build` runs all checks.
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub compositions: Vec<(String, String, String)>,
    pub identities: BTreeMap<String, String>,
}

impl CategoryBuilder {
    pub fn build(self) -> Result<FiniteCategory, FincatError> {
        let obj_index: BTreeMap<&str, usize> =
            self.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj_index.len() != self.objects.len() {
            return Err(FincatError::Invalid("duplicate object name".into()));
        }
        let mut morphisms = Vec::new();
        let mut mor_index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, (id, src, dst)) in self.morphisms.iter().enumerate() {
            let s = *obj_index
                .get(src.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown source object `{src}`")))?;
            let d = *obj_index
                .get(dst.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown target object `{dst}`")))?;
            if mor_index.insert(id.as_str(), i).is_some() {
                return Err(FincatError::Invalid(format!("duplicate morphism id `{id}`")));
            }
            morphisms.push(Morphism { id: id.clone(), src: s, dst: d });
        }
        let n = morphisms.len();
        let mut comp = vec![vec![None; n]; n];
        for (g, f, gf) in &self.compositions {
            let gi = *mor_index
                .get(g.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown morphism `{g}`")))?;
            let fi = *mor_index
                .get(f.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown morphism `{f}`")))?;
            let gfi = *mor_index
                .get(gf.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown morphism `{gf}`")))?;
            if comp[gi][fi].replace(gfi).is_some() {
                return Err(FincatError::Invalid(format!("duplicate composition entry ({g}, {f})")));
            }
        }
        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, o) in self.objects.iter().enumerate() {
            let id = self
                .identities
                .get(o)
                .ok_or_else(|| FincatError::Invalid(format!("object `{o}` has no identity")))?;
            let mi = *mor_index
                .get(id.as_str())
                .ok_or_else(|| FincatError::Invalid(format!("unknown identity morphism `{id}`")))?;
            if morphisms[mi].src != i || morphisms[mi].dst != i {
                return Err(FincatError::Invalid(format!("identity of `{o}` is not an endomorphism")));
            }
            identities.push(mi);
        }
        FiniteCategory::from_validated_parts(self.objects, morphisms, comp, identities)
    }
}

impl FiniteCategory {
    fn from_validated_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        comp: Vec<Vec<Option<usize>>>,
        identities: Vec<usize>,
    ) -> Result<Self, FincatError> {
        let n = morphisms.len();
        // comp(g,f) defined iff target(f) = source(g), with matching endpoints.
        for g in 0..n {
            for f in 0..n {
                let composable = morphisms[f].dst == morphisms[g].src;
                match comp[g][f] {
                    Some(gf) => {
                        if !composable {
                            return Err(FincatError::Invalid(format!(
                                "composition ({}, {}) defined but not composable",
                                morphisms[g].id, morphisms[f].id
                            )));
                        }
                        if morphisms[gf].src != morphisms[f].src || morphisms[gf].dst != morphisms[g].dst
                        {
                            return Err(FincatError::Invalid(format!(
                                "composite of ({}, {}) has wrong endpoints",
                                morphisms[g].id, morphisms[f].id
                            )));
                        }
                    }
                    None => {
                        if composable {
                            return Err(FincatError::Invalid(format!(
                                "missing composition entry ({}, {})",
                                morphisms[g].id, morphisms[f].id
                            )));
                        }
                    }
                }
            }
        }
        // Two-sided unit law.
        for f in 0..n {
            let ids = identities[morphisms[f].src];
            let idt = identities[morphisms[f].dst];
            if comp[f][ids] != Some(f) || comp[idt][f] != Some(f) {
                return Err(FincatError::Invalid(format!(
                    "identity law fails at morphism `{}`",
                    morphisms[f].id
                )));
            }
        }
        // Associativity on all composable triples.
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = comp[g][f] else { continue };
                for h in 0..n {
                    let Some(hg) = comp[h][g] else { continue };
                    if comp[h][gf] != comp[hg][f] {
                        return Err(FincatError::Invalid(format!(
                            "associativity fails on ({}, {}, {})",
                            morphisms[h].id, morphisms[g].id, morphisms[f].id
                        )));
                    }
                }
            }
        }
        let mut hom = vec![vec![Vec::new(); objects.len()]; objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.src][m.dst].push(i);
        }
        let mut inverses = vec![None; n];
        for f in 0..n {
            let m = &morphisms[f];
            for &g in &hom[m.dst][m.src] {
                if comp[g][f] == Some(identities[m.src]) && comp[f][g] == Some(identities[m.dst]) {
                    inverses[f] = Some(g);
                    break;
                }
            }
        }
        Ok(FiniteCategory { objects, morphisms, comp, identities, hom, inverses })
    }

    // -- basic accessors ----------------------------------------------------

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, i: usize) -> &Morphism {
        &self.morphisms[i]
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.id == id)
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identities[obj]
    }

    pub fn hom(&self, src: usize, dst: usize) -> &[usize] {
        &self.hom[src][dst]
    }

    /// g ∘ f, defined when target(f) = source(g).
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    pub fn compose_chain(&self, chain: &[usize]) -> Option<usize> {
        let mut acc = *chain.first()?;
        for &next in &chain[1..] {
            acc = self.compose(next, acc)?;
        }
        Some(acc)
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverses[f].is_some()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.inverses[f]
    }

    pub fn isos_between(&self, x: usize, y: usize) -> Vec<usize> {
        self.hom[x][y].iter().copied().filter(|&f| self.is_iso(f)).collect()
    }

    /// The opposite category; morphism ids are reused with src/dst swapped.
    pub fn opposite(&self) -> FiniteCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism { id: m.id.clone(), src: m.dst, dst: m.src })
            .collect::<Vec<_>>();
        let n = morphisms.len();
        let mut comp = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                comp[f][g] = self.comp[g][f];
            }
        }
        FiniteCategory::from_validated_parts(
            self.objects.clone(),
            morphisms,
            comp,
            self.identities.clone(),
        )
        .expect("opposite of a valid category is valid")
    }

    // -- constructions ------------------------------------------------------

    /// The category of a finite poset: one morphism x → y whenever leq(x, y).
    pub fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> FiniteCategory {
        let mut b = CategoryBuilder::default();
        b.objects = names.iter().map(|s| s.to_string()).collect();
        let mut arrows: Vec<(usize, usize)> = Vec::new();
        for x in 0..names.len() {
            for y in 0..names.len() {
                if leq(x, y) {
                    arrows.push((x, y));
                }
            }
        }
        let mor_name = |x: usize, y: usize| {
            if x == y {
                format!("id_{}", names[x])
            } else {
                format!("{}to{}", names[x], names[y])
            }
        };
        for &(x, y) in &arrows {
            b.morphisms.push((mor_name(x, y), names[x].into(), names[y].into()));
        }
        for &(x, y) in &arrows {
            for &(y2, z) in &arrows {
                if y == y2 {
                    b.compositions.push((mor_name(y, z), mor_name(x, y), mor_name(x, z)));
                }
            }
        }
        for (i, n) in names.iter().enumerate() {
            b.identities.insert(n.to_string(), mor_name(i, i));
        }
        b.build().expect("poset category is valid")
    }

    /// The free category on a quiver without loops or composable pairs of
    /// arrows, so the only composites involve identities.
    pub fn quiver(names: &[&str], arrows: &[(&str, usize, usize)]) -> FiniteCategory {
        let mut b = CategoryBuilder::default();
        b.objects = names.iter().map(|s| s.to_string()).collect();
        let mut all: Vec<(String, usize, usize)> = Vec::new();
        for (i, n) in names.iter().enumerate() {
            b.morphisms.push((format!("id_{n}"), names[i].into(), names[i].into()));
            b.identities.insert(n.to_string(), format!("id_{n}"));
            all.push((format!("id_{n}"), i, i));
        }
        for (a, s, d) in arrows {
            assert!(s != d, "quiver constructor does not take loops");
            b.morphisms.push((a.to_string(), names[*s].into(), names[*d].into()));
            all.push((a.to_string(), *s, *d));
        }
        for (a, _, d) in arrows {
            for (a2, s2, _) in arrows {
                assert!(d != s2, "quiver constructor does not take composable arrows ({a}, {a2})");
            }
        }
        for (g, gs, _) in &all {
            for (f, _, fd) in &all {
                if fd == gs {
                    let gf = if g.starts_with("id_") { f.clone() } else { g.clone() };
                    b.compositions.push((g.clone(), f.clone(), gf));
                }
            }
        }
        b.build().expect("free quiver category is valid")
    }

    // -- EI structure and factorisation --------------------------------------

    /// True iff every endomorphism has a two-sided inverse.
    pub fn is_ei(&self) -> bool {
        (0..self.morphisms.len())
            .all(|f| self.morphisms[f].src != self.morphisms[f].dst || self.is_iso(f))
    }

    fn require_ei(&self) -> Result<(), FincatError> {
        for f in 0..self.morphisms.len() {
            if self.morphisms[f].src == self.morphisms[f].dst && !self.is_iso(f) {
                return Err(FincatError::NotEI(self.morphisms[f].id.clone()));
            }
        }
        Ok(())
    }

    /// All non-isomorphisms f such that in every factorisation f = g∘h one
    /// of g, h is an isomorphism.
    pub fn unfactorisables(&self) -> Result<BTreeSet<usize>, FincatError> {
        self.require_ei()?;
        let n = self.morphisms.len();
        let mut out = BTreeSet::new();
        'outer: for f in 0..n {
            if self.is_iso(f) {
                continue;
            }
            for h in 0..n {
                if self.is_iso(h) || self.morphisms[h].src != self.morphisms[f].src {
                    continue;
                }
                for g in 0..n {
                    if self.comp[g][h] == Some(f) && !self.is_iso(g) {
                        continue 'outer;
                    }
                }
            }
            out.insert(f);
        }
        Ok(out)
    }

    /// All chains of unfactorisable morphisms composing to f, raw (no
    /// identification). Chains cannot revisit an object iso-class, so the
    /// search terminates.
    pub fn enumerate_factorizations(&self, f: usize) -> Result<Vec<MorphismChain>, FincatError> {
        self.require_ei()?;
        if self.is_iso(f) {
            return Err(FincatError::IsIsomorphism(self.morphisms[f].id.clone()));
        }
        let unf = self.unfactorisables()?;
        let mut memo: HashMap<usize, Vec<MorphismChain>> = HashMap::new();
        Ok(self.chains_of(f, &unf, &mut memo))
    }

    fn chains_of(
        &self,
        f: usize,
        unf: &BTreeSet<usize>,
        memo: &mut HashMap<usize, Vec<MorphismChain>>,
    ) -> Vec<MorphismChain> {
        if let Some(c) = memo.get(&f) {
            return c.clone();
        }
        let mut out: Vec<MorphismChain> = Vec::new();
        if unf.contains(&f) {
            out.push(vec![f]);
        } else {
            for &h in unf {
                if self.morphisms[h].src != self.morphisms[f].src {
                    continue;
                }
                for g in 0..self.morphisms.len() {
                    if self.is_iso(g) || self.comp[g][h] != Some(f) {
                        continue;
                    }
                    for mut tail in self.chains_of(g, unf, memo) {
                        let mut chain = vec![h];
                        chain.append(&mut tail);
                        out.push(chain);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        memo.insert(f, out.clone());
        out
    }

    fn ladder_exists(&self, a: &[usize], b: &[usize]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let n = a.len();
        if n == 1 {
            return a == b;
        }
        // h_i : x_i → x'_i for 1 ≤ i ≤ n−1, found left to right with
        // backtracking. h₁α₁ = α'₁, h_iα_i = α'_ih_{i−1}, α'_n h_{n−1} = α_n.
        fn search(cat: &FiniteCategory, a: &[usize], b: &[usize], i: usize, prev: Option<usize>) -> bool {
            let n = a.len();
            if i == n {
                let h = prev.expect("n >= 2");
                return cat.compose(b[n - 1], h) == Some(a[n - 1]);
            }
            let xi = cat.morphisms[a[i - 1]].dst;
            let xpi = cat.morphisms[b[i - 1]].dst;
            let target = match prev {
                None => Some(b[0]),
                Some(h_prev) => cat.compose(b[i - 1], h_prev),
            };
            let Some(target) = target else { return false };
            for h in cat.isos_between(xi, xpi) {
                if cat.compose(h, a[i - 1]) == Some(target) {
                    if search(cat, a, b, i + 1, Some(h)) {
                        return true;
                    }
                }
            }
            false
        }
        search(self, a, b, 1, None)
    }

    /// The unique factorisation property: any two unfactorisable chains
    /// with the same composite are related by a commuting ladder of object
    /// isomorphisms. On failure, returns the first witness pair in
    /// deterministic morphism-id order.
    pub fn ufp_check(&self) -> Result<(bool, Option<(MorphismChain, MorphismChain)>), FincatError> {
        self.require_ei()?;
        let unf = self.unfactorisables()?;
        let mut memo: HashMap<usize, Vec<MorphismChain>> = HashMap::new();
        for f in 0..self.morphisms.len() {
            if self.is_iso(f) {
                continue;
            }
            let chains = self.chains_of(f, &unf, &mut memo);
            for i in 0..chains.len() {
                for j in (i + 1)..chains.len() {
                    if !self.ladder_exists(&chains[i], &chains[j]) {
                        return Ok((false, Some((chains[i].clone(), chains[j].clone()))));
                    }
                }
            }
        }
        Ok((true, None))
    }

    pub fn morphism_ids(&self, chain: &[usize]) -> Vec<String> {
        chain.iter().map(|&m| self.morphisms[m].id.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn arrow_category() -> FiniteCategory {
        FiniteCategory::quiver(&["0", "1"], &[("a", 0, 1)])
    }

    fn one_object_monoid_nonei() -> FiniteCategory {
        // {id, e} with e·e = e and e ≠ id.
        let mut b = CategoryBuilder::default();
        b.objects = vec!["x".into()];
        b.morphisms = vec![("id_x".into(), "x".into(), "x".into()), ("e".into(), "x".into(), "x".into())];
        b.compositions = vec![
            ("id_x".into(), "id_x".into(), "id_x".into()),
            ("id_x".into(), "e".into(), "e".into()),
            ("e".into(), "id_x".into(), "e".into()),
            ("e".into(), "e".into(), "e".into()),
        ];
        b.identities.insert("x".into(), "id_x".into());
        b.build().unwrap()
    }

    fn chain3() -> FiniteCategory {
        FiniteCategory::poset(&["0", "1", "2"], |x, y| x <= y)
    }

    pub(crate) fn diamond() -> FiniteCategory {
        // a < b, a < c, b < d, c < d with b and c incomparable.
        let leq = |x: usize, y: usize| x == y || (x == 0 && y > 0) || (y == 3 && x < 3);
        FiniteCategory::poset(&["a", "b", "c", "d"], leq)
    }

    fn group_z2() -> FiniteCategory {
        let mut b = CategoryBuilder::default();
        b.objects = vec!["*".into()];
        b.morphisms = vec![("e".into(), "*".into(), "*".into()), ("s".into(), "*".into(), "*".into())];
        b.compositions = vec![
            ("e".into(), "e".into(), "e".into()),
            ("e".into(), "s".into(), "s".into()),
            ("s".into(), "e".into(), "s".into()),
            ("s".into(), "s".into(), "e".into()),
        ];
        b.identities.insert("*".into(), "e".into());
        b.build().unwrap()
    }

    #[test]
    fn validation_rejects_broken_tables() {
        let mut b = CategoryBuilder::default();
        b.objects = vec!["x".into()];
        b.morphisms = vec![("id_x".into(), "x".into(), "x".into())];
        b.identities.insert("x".into(), "id_x".into());
        // missing composition entry (id, id)
        assert!(matches!(b.build(), Err(FincatError::Invalid(_))));
    }

    #[test]
    fn validation_rejects_non_associative() {
        // Two-element "monoid" with a deliberately broken table:
        // e·e = id makes (e·e)·e = e but e·(e·e) must then also be checked;
        // we break associativity via a three-element table instead.
        let mut b = CategoryBuilder::default();
        b.objects = vec!["x".into()];
        b.morphisms = vec![
            ("id_x".into(), "x".into(), "x".into()),
            ("u".into(), "x".into(), "x".into()),
            ("v".into(), "x".into(), "x".into()),
        ];
        // u·u = v, u·v = id, v·u = id, v·v = u  (not associative:
        // (u·u)·u = v·u = id, u·(u·u) = u·v = id; break it differently)
        b.compositions = vec![
            ("id_x".into(), "id_x".into(), "id_x".into()),
            ("id_x".into(), "u".into(), "u".into()),
            ("id_x".into(), "v".into(), "v".into()),
            ("u".into(), "id_x".into(), "u".into()),
            ("v".into(), "id_x".into(), "v".into()),
            ("u".into(), "u".into(), "v".into()),
            ("u".into(), "v".into(), "id_x".into()),
            ("v".into(), "u".into(), "u".into()),
            ("v".into(), "v".into(), "v".into()),
        ];
        b.identities.insert("x".into(), "id_x".into());
        assert!(matches!(b.build(), Err(FincatError::Invalid(_))));
    }

    #[test]
    fn is_ei_examples() {
        let point = FiniteCategory::poset(&["x"], |_, _| true);
        assert!(point.is_ei());
        assert!(arrow_category().is_ei());
        assert!(!one_object_monoid_nonei().is_ei());
    }

    #[test]
    fn unfactorisables_examples() {
        let arrow = arrow_category();
        let a = arrow.morphism_index("a").unwrap();
        assert_eq!(arrow.unfactorisables().unwrap(), BTreeSet::from([a]));

        let c3 = chain3();
        let unf = c3.unfactorisables().unwrap();
        let names: BTreeSet<String> =
            unf.iter().map(|&m| c3.morphism(m).id.clone()).collect();
        assert_eq!(names, BTreeSet::from(["0to1".to_string(), "1to2".to_string()]));

        assert!(group_z2().unfactorisables().unwrap().is_empty());

        assert_eq!(
            one_object_monoid_nonei().unfactorisables(),
            Err(FincatError::NotEI("e".into()))
        );
    }

    #[test]
    fn enumerate_factorizations_examples() {
        let c3 = chain3();
        let f = c3.morphism_index("0to2").unwrap();
        let chains = c3.enumerate_factorizations(f).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(c3.morphism_ids(&chains[0]), vec!["0to1", "1to2"]);

        let d = diamond();
        let f = d.morphism_index("atod").unwrap();
        assert_eq!(d.enumerate_factorizations(f).unwrap().len(), 2);

        let arrow = arrow_category();
        let a = arrow.morphism_index("a").unwrap();
        assert_eq!(arrow.enumerate_factorizations(a).unwrap(), vec![vec![a]]);

        let id0 = arrow.identity(0);
        assert!(matches!(arrow.enumerate_factorizations(id0), Err(FincatError::IsIsomorphism(_))));
    }

    #[test]
    fn ufp_examples() {
        assert_eq!(chain3().ufp_check().unwrap(), (true, None));

        let d = diamond();
        let (ok, witness) = d.ufp_check().unwrap();
        assert!(!ok);
        let (w1, w2) = witness.unwrap();
        // the witness chains must have equal composite
        assert_eq!(d.compose_chain(&w1), d.compose_chain(&w2));
        assert_eq!(d.compose_chain(&w1), d.morphism_index("atod"));

        assert_eq!(group_z2().ufp_check().unwrap(), (true, None));
    }

    #[test]
    fn ufp_invariant_under_relabelling() {
        // Same diamond with objects listed in a different order and other
        // morphism names.
        let leq = |x: usize, y: usize| x == y || (x == 3 && y != 3) || (y == 0 && x != 0);
        // here object 3 is the bottom and object 0 the top
        let d2 = FiniteCategory::poset(&["t", "p", "q", "s"], leq);
        assert!(d2.is_ei());
        let (ok, _) = d2.ufp_check().unwrap();
        assert!(!ok);
    }

    #[test]
    fn opposite_preserves_ufp() {
        let d = diamond();
        let (ok, _) = d.opposite().ufp_check().unwrap();
        assert!(!ok);
        let c3 = chain3();
        assert!(c3.opposite().ufp_check().unwrap().0);
    }
}
