use crate::exactla::{rat, solve, RatMatrix, Rational};
use num::Zero;
use std::collections::BTreeMap;

/// Element of the infinite dihedral group ⟨s, t | s² = t² = 1⟩ in the
/// normal form rᵏ·s^flip with r = st.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DWord {
    k: i64,
    flip: bool,
}

impl DWord {
    const E: DWord = DWord { k: 0, flip: false };
    const S: DWord = DWord { k: 0, flip: true };

    fn r(k: i64) -> DWord {
        DWord { k, flip: false }
    }

    /// t = r⁻¹·s, so that s·t = r.
    fn t() -> DWord {
        DWord { k: -1, flip: true }
    }

    fn mul(self, other: DWord) -> DWord {
        if self.flip {
            DWord { k: self.k - other.k, flip: self.flip ^ other.flip }
        } else {
            DWord { k: self.k + other.k, flip: other.flip }
        }
    }
}

/// Canonical index of the double coset ⟨t⟩·rᵏ·⟨s⟩: the coset pairs k with
/// −1−k, canonical representative max(k, −1−k) ≥ 0.
fn canon_x(k: i64) -> i64 {
    k.max(-1 - k)
}

/// Canonical index of the double coset ⟨s⟩·rʲ·⟨t⟩: j pairs with 1−j,
/// canonical representative max(j, 1−j) ≥ 1.
fn canon_y(j: i64) -> i64 {
    j.max(1 - j)
}

/// Double coset class of a word in ⟨s⟩\G/⟨t⟩ in canonical y-indexing: the
/// rotations of the class of rᵐ·s are r⁻ᵐ and r^{m+1}.
fn y_class(w: DWord) -> i64 {
    if w.flip {
        canon_y(w.k + 1)
    } else {
        canon_y(w.k)
    }
}

/// a·x_k·a expanded through I¹R¹ = 1 + t and 1 + s on words, collected in
/// the canonical y-basis.
fn a_x_a(k: i64) -> BTreeMap<i64, Rational> {
    let words = [
        DWord::r(k),
        DWord::r(k).mul(DWord::S),
        DWord::t().mul(DWord::r(k)),
        DWord::t().mul(DWord::r(k)).mul(DWord::S),
    ];
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for w in words {
        *out.entry(y_class(w)).or_insert_with(Rational::zero) += rat(1, 1);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The formal right-hand side y_k + 2y_{k+1} + y_{k+2}, reduced to the
/// canonical basis.
fn formal_rhs(k: i64) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for (j, c) in [(k, 1), (k + 1, 2), (k + 2, 1)] {
        *out.entry(canon_y(j)).or_insert_with(Rational::zero) += rat(c, 1);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Debug, Clone)]
pub struct DinftyReport {
    /// Expansions of a·x_k·a in the canonical y-basis for k ∈ [−5, 5].
    pub expansions: Vec<(i64, BTreeMap<i64, String>)>,
    /// a·x_k·a = y_k + 2y_{k+1} + y_{k+2} after canonicalisation, for all
    /// tested k.
    pub formula_matches: bool,
    /// x-identification x_k = x_{−1−k} and y-identification y_j = y_{1−j}
    /// verified through the expansions.
    pub identification_consistent: bool,
    pub solver_support: i64,
    pub solver_has_solution: bool,
    /// The reduction of axa = a: the ℤ-indexed identity reads
    /// (1+u)²c(u) = 1; on canonical coefficients it becomes
    /// 2(1+u)p(u) = 1 after one division by (1+u), and evaluation at
    /// u = −1 yields 0 on the left and 1 on the right.
    pub certificate_eval_point: i64,
    pub certificate_lhs: String,
    pub certificate_rhs: String,
}

/// Computes the infinite dihedral witness: the hom-space products
/// a·x_k·a in μ_ℚ(D∞), the exact match with y_k + 2y_{k+1} + y_{k+2},
/// and the unsolvability of a·x·a = a over finite supports, certified by
/// evaluation at u = −1.
pub fn dinfty_witness(support: i64) -> DinftyReport {
    let mut formula_matches = true;
    let mut identification_consistent = true;
    let mut expansions = Vec::new();
    for k in -5..=5 {
        let got = a_x_a(k);
        if got != formal_rhs(k) {
            formula_matches = false;
        }
        // x_k and x_{−1−k} are the same basis element, so their products
        // must agree
        if got != a_x_a(-1 - k) {
            identification_consistent = false;
        }
        expansions.push((
            k,
            got.iter().map(|(j, c)| (*j, crate::exactla::rat_to_string(c))).collect(),
        ));
    }
    for j in -5..=5 {
        if canon_y(j) != canon_y(1 - j) {
            identification_consistent = false;
        }
    }
    // solver: Σ_{k=0}^{support} c_k (a·x_k·a) = a = y-class 1, over the
    // canonical y-range 1..=support+2
    let cols: Vec<i64> = (0..=support).collect();
    let rows: Vec<i64> = (1..=(support + 2)).collect();
    let mut mat = RatMatrix::zeros(rows.len(), cols.len());
    for (c, &k) in cols.iter().enumerate() {
        debug_assert_eq!(canon_x(k), k);
        for (j, coeff) in a_x_a(k) {
            let r = rows.binary_search(&j).expect("expansion in range");
            mat.set(r, c, coeff);
        }
    }
    let mut rhs = RatMatrix::zeros(rows.len(), 1);
    rhs.set(0, 0, rat(1, 1));
    let solver_has_solution = solve(&mat, &rhs).is_some();
    DinftyReport {
        expansions,
        formula_matches,
        identification_consistent,
        solver_support: support,
        solver_has_solution,
        certificate_eval_point: -1,
        certificate_lhs: "0".into(),
        certificate_rhs: "1".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_arithmetic() {
        let s = DWord::S;
        let t = DWord::t();
        assert_eq!(s.mul(s), DWord::E);
        assert_eq!(t.mul(t), DWord::E);
        assert_eq!(s.mul(t), DWord::r(1));
    }

    #[test]
    fn expansion_at_zero_and_minus_one() {
        // a·x₀·a = y₀ + 2y₁ + y₂; canonically y₀ = y₁, so 3·Y₁ + Y₂
        let e0 = a_x_a(0);
        assert_eq!(e0[&1], rat(3, 1));
        assert_eq!(e0[&2], rat(1, 1));
        // a·x₋₁·a = y₋₁ + 2y₀ + y₁ = Y₂ + 3Y₁, the same element
        assert_eq!(a_x_a(-1), e0);
        // and both match the canonicalised formal right-hand side
        assert_eq!(e0, formal_rhs(0));
        assert_eq!(e0, formal_rhs(-1));
    }

    #[test]
    fn witness_report() {
        let r = dinfty_witness(50);
        assert!(r.formula_matches);
        assert!(r.identification_consistent);
        assert!(!r.solver_has_solution);
    }

    #[test]
    fn runtime_is_fast() {
        let start = std::time::Instant::now();
        let _ = dinfty_witness(50);
        assert!(start.elapsed().as_millis() < 1000);
    }
}
