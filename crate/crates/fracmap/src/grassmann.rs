//! Exact exterior algebra over ℝ^m.
//!
//! Elements of ⋀(ℝ^m) are stored on the basis {ε_I : I ⊆ {1..m}} with one
//! coefficient per subset, the subset encoded as a bitmask (bit i−1 for
//! index i, so ε_I with I = {i₁ < … < i_p} sits at mask Σ 2^{iⱼ−1}).  All
//! three products are signed permutations of basis elements, so the
//! arithmetic is exact for integer inputs and introduces no rounding
//! beyond the coefficient multiplications themselves.
//!
//! Sign conventions.  The wedge obeys ε_I ∧ ε_J = ±ε_{I∪J} with the sign
//! counting inversions (pairs i ∈ I, j ∈ J with i > j).  Interior
//! multiplication follows the rule
//!
//!   ε_I ⌐ ε_J = 0 if I ⊄ J,   otherwise (−1)^M ε_{J∖I},
//!
//! where M is the number of pairs (i, j) ∈ I × J with j > i — note the
//! count runs over all of J, including the elements of I itself, which
//! makes this ⌐ differ from the metric adjoint of the wedge by a fixed
//! sign per grade pair (a tested invariant, not an accident).  The Hodge
//! star is ∗β = β ⌐ (ε₁∧…∧ε_m); under the M-count convention this gives
//! ∗∗ = (−1)^{m(m−1)/2} on every grade, rather than the textbook
//! (−1)^{p(m−p)}.
//!
//! Orthogonal projectors.  For an orthonormal frame e₁..e_k, n_{k+1}..n_m
//! with tangent blade e = e₁∧…∧e_k and normal blade n = n_{k+1}∧…∧n_m,
//! the tangent / normal parts of a vector v are recovered from
//!
//!   P^T v ∝ ∗((v ⌐ e) ∧ n),    P^N v ∝ ∗(e ∧ (v ⌐ n)).
//!
//! The proportionality sign depends on (m, k) through the conventions
//! above and on the orientation of the combined frame (each of e and n
//! appears linearly, so flipping one frame vector flips both outputs).
//! Rather than ship a closed-form sign table, [`projector_from_frame`]
//! resolves the sign once per (m, k) against the Gram projector
//! Σ eᵢ⟨eᵢ, v⟩ on the coordinate frame — where every quantity is exact —
//! caches it, and folds in the orientation of e ∧ n per call.  The Gram
//! form is convention-independent ground truth; the blade formulas are
//! the objects under test elsewhere, so both are kept.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::tolerances;

/// Ambient dimensions are capped so a full component table (2^m entries)
/// stays a small flat vector.
pub const MAX_AMBIENT_DIMENSION: usize = 8;

/// A general element of ⋀(ℝ^m): one coefficient per subset of {1..m}.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector {
    m: usize,
    components: Vec<f64>,
}

fn check_dimension(m: usize) -> Result<()> {
    if m == 0 || m > MAX_AMBIENT_DIMENSION {
        return Err(Error::config(format!(
            "ambient dimension {m} outside the supported range 1..={MAX_AMBIENT_DIMENSION}"
        )));
    }
    Ok(())
}

fn sign_of(exponent: u32) -> f64 {
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl MultiVector {
    pub fn zero(m: usize) -> Result<Self> {
        check_dimension(m)?;
        Ok(MultiVector {
            m,
            components: vec![0.0; 1 << m],
        })
    }

    pub fn scalar(m: usize, value: f64) -> Result<Self> {
        let mut out = Self::zero(m)?;
        out.components[0] = value;
        Ok(out)
    }

    /// The basis 1-vector ε_i, indexed from 1 as in ε₁..ε_m.
    pub fn basis_vector(m: usize, i: usize) -> Result<Self> {
        check_dimension(m)?;
        if i == 0 || i > m {
            return Err(Error::config(format!(
                "basis index {i} outside 1..={m}"
            )));
        }
        let mut out = Self::zero(m)?;
        out.components[1 << (i - 1)] = 1.0;
        Ok(out)
    }

    /// The 1-vector with the given coordinates; the ambient dimension is
    /// the coordinate count.
    pub fn from_vector(coords: &[f64]) -> Result<Self> {
        let m = coords.len();
        let mut out = Self::zero(m)?;
        for (i, &c) in coords.iter().enumerate() {
            out.components[1 << i] = c;
        }
        Ok(out)
    }

    /// ε_{i₁}∧…∧ε_{i_p} for the listed (1-based) indices, with the sign
    /// of the permutation that sorts them; repeated indices give zero.
    pub fn basis_blade(m: usize, indices: &[usize]) -> Result<Self> {
        let mut out = Self::scalar(m, 1.0)?;
        for &i in indices {
            out = wedge(&out, &Self::basis_vector(m, i)?)?;
        }
        Ok(out)
    }

    pub fn ambient_dimension(&self) -> usize {
        self.m
    }

    /// Coefficient of ε_I for the listed indices (any order; the sign of
    /// the sorting permutation is applied, repeats give 0).
    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        let mut mask = 0u32;
        let mut sign = 1.0;
        for &i in indices {
            if i == 0 || i > self.m {
                return 0.0;
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return 0.0;
            }
            // Count already-placed indices larger than i: each is one
            // transposition when sorting.
            sign *= sign_of((mask >> i).count_ones());
            mask |= bit;
        }
        sign * self.components[mask as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0.0)
    }

    /// The grade-p component.
    pub fn grade_part(&self, p: usize) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.components.iter_mut().enumerate() {
            if mask.count_ones() as usize != p {
                *c = 0.0;
            }
        }
        out
    }

    /// Some(p) if every nonzero coefficient has grade p; None for mixed
    /// elements.  The zero element reports Some(0).
    pub fn grade(&self) -> Option<usize> {
        let mut found: Option<usize> = None;
        for (mask, &c) in self.components.iter().enumerate() {
            if c != 0.0 {
                let p = mask.count_ones() as usize;
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(0))
    }

    /// Inner product induced by declaring {ε_I} orthonormal.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Extract the coordinates of a grade-1 element.
    pub fn as_vector(&self) -> Result<Vec<f64>> {
        for (mask, &c) in self.components.iter().enumerate() {
            if c != 0.0 && mask.count_ones() != 1 {
                return Err(Error::GradeError {
                    detail: format!(
                        "element is not a 1-vector: nonzero coefficient at grade {}",
                        mask.count_ones()
                    ),
                });
            }
        }
        Ok((0..self.m).map(|i| self.components[1 << i]).collect())
    }

    fn scaled(&self, factor: f64) -> Self {
        MultiVector {
            m: self.m,
            components: self.components.iter().map(|c| c * factor).collect(),
        }
    }
}

macro_rules! multivector_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &MultiVector {
            type Output = MultiVector;
            fn $method(self, rhs: &MultiVector) -> MultiVector {
                assert_eq!(self.m, rhs.m, "multivectors in different dimensions");
                MultiVector {
                    m: self.m,
                    components: self
                        .components
                        .iter()
                        .zip(&rhs.components)
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}

multivector_binop!(Add, add, +);
multivector_binop!(Sub, sub, -);

impl std::ops::Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.scaled(-1.0)
    }
}

impl std::ops::Mul<f64> for &MultiVector {
    type Output = MultiVector;
    fn mul(self, rhs: f64) -> MultiVector {
        self.scaled(rhs)
    }
}

/// Inversions between two disjoint masks: pairs i ∈ a, j ∈ b with i > j.
fn wedge_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    sign_of(inversions)
}

/// Exterior product.  Bilinear, associative, ε_I ∧ ε_J = ±ε_{I∪J} for
/// disjoint I, J and zero otherwise.
pub fn wedge(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    if a.m != b.m {
        return Err(Error::DimensionMismatch {
            left: a.m,
            right: b.m,
        });
    }
    let mut out = MultiVector::zero(a.m)?;
    for (ma, &ca) in a.components.iter().enumerate() {
        if ca == 0.0 {
            continue;
        }
        for (mb, &cb) in b.components.iter().enumerate() {
            if cb == 0.0 || (ma & mb) != 0 {
                continue;
            }
            out.components[ma | mb] += wedge_sign(ma as u32, mb as u32) * ca * cb;
        }
    }
    Ok(out)
}

/// M-count of the interior-multiplication rule: pairs (i, j) ∈ I × J with
/// j > i, the count running over all of J (elements of I included).
fn interior_sign(i_mask: u32, j_mask: u32) -> f64 {
    let mut count = 0u32;
    let mut rest = i_mask;
    while rest != 0 {
        let i = rest.trailing_zeros();
        count += (j_mask >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    sign_of(count)
}

/// Interior multiplication ⌐ of a grade-p element into a grade-q element,
/// q ≥ p, producing grade q−p.  On the basis, ε_I ⌐ ε_J = 0 when I ⊄ J
/// and (−1)^M ε_{J∖I} otherwise, M as in [`interior_sign`]; both inputs
/// must be grade-homogeneous for the grade bookkeeping to be meaningful.
pub fn interior_mult(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    if a.m != b.m {
        return Err(Error::DimensionMismatch {
            left: a.m,
            right: b.m,
        });
    }
    if a.is_zero() || b.is_zero() {
        return MultiVector::zero(a.m);
    }
    let p = a.grade().ok_or_else(|| Error::GradeError {
        detail: "left factor of ⌐ is not grade-homogeneous".into(),
    })?;
    let q = b.grade().ok_or_else(|| Error::GradeError {
        detail: "right factor of ⌐ is not grade-homogeneous".into(),
    })?;
    if p > q {
        return Err(Error::GradeError {
            detail: format!("interior multiplication needs grade {p} ≤ grade {q}"),
        });
    }
    let mut out = MultiVector::zero(a.m)?;
    for (ma, &ca) in a.components.iter().enumerate() {
        if ca == 0.0 {
            continue;
        }
        for (mb, &cb) in b.components.iter().enumerate() {
            if cb == 0.0 || (ma & mb) != ma {
                continue;
            }
            let target = mb & !ma;
            out.components[target] += interior_sign(ma as u32, mb as u32) * ca * cb;
        }
    }
    Ok(out)
}

/// Hodge star ∗β = β ⌐ (ε₁∧…∧ε_m), extended linearly to mixed-grade
/// elements (each grade-p part lands in grade m−p).
pub fn hodge_star(a: &MultiVector) -> MultiVector {
    let top = (1u32 << a.m) - 1;
    let mut out = MultiVector {
        m: a.m,
        components: vec![0.0; 1 << a.m],
    };
    for (mask, &c) in a.components.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mask = mask as u32;
        out.components[(top & !mask) as usize] += interior_sign(mask, top) * c;
    }
    out
}

/// Global projector signs per (m, k), resolved once on the coordinate
/// frame where the answer is known exactly, then reused for every frame.
static PROJECTOR_SIGNS: OnceLock<Mutex<HashMap<(usize, usize), (f64, f64)>>> = OnceLock::new();

fn raw_tangent(v: &MultiVector, e: &MultiVector, n: &MultiVector, m: usize) -> Result<MultiVector> {
    let pulled = interior_mult(v, e)?;
    let wedged = wedge(&pulled, n)?;
    Ok(hodge_star(&wedged).scaled(sign_of((m - 1) as u32)))
}

fn raw_normal(v: &MultiVector, e: &MultiVector, n: &MultiVector, k: usize) -> Result<MultiVector> {
    let pulled = interior_mult(v, n)?;
    let wedged = wedge(e, &pulled)?;
    Ok(hodge_star(&wedged).scaled(sign_of((k - 1) as u32)))
}

fn resolved_signs(m: usize, k: usize) -> Result<(f64, f64)> {
    let cache = PROJECTOR_SIGNS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("projector sign cache poisoned");
    if let Some(&signs) = cache.get(&(m, k)) {
        return Ok(signs);
    }
    let e = MultiVector::basis_blade(m, &(1..=k).collect::<Vec<_>>())?;
    let n = MultiVector::basis_blade(m, &(k + 1..=m).collect::<Vec<_>>())?;
    // Probe with ε₁ (a tangent direction) and ε_m (a normal one): the
    // Gram projector returns the probe itself, so the raw formula's
    // coefficient there is the sign — and it is ±1 exactly, because on
    // the coordinate frame every step permutes basis elements.
    let probe_t = MultiVector::basis_vector(m, 1)?;
    let got_t = raw_tangent(&probe_t, &e, &n, m)?;
    let coeff_t = got_t.coefficient(&[1]);
    assert!(
        (coeff_t.abs() - 1.0).abs() < 1e-9,
        "tangent sign resolution must yield a unit coefficient, got {coeff_t}"
    );
    let probe_n = MultiVector::basis_vector(m, m)?;
    let got_n = raw_normal(&probe_n, &e, &n, k)?;
    let coeff_n = got_n.coefficient(&[m]);
    assert!(
        (coeff_n.abs() - 1.0).abs() < 1e-9,
        "normal sign resolution must yield a unit coefficient, got {coeff_n}"
    );
    let signs = (coeff_t.signum(), coeff_n.signum());
    cache.insert((m, k), signs);
    Ok(signs)
}

/// Split a vector into tangent and normal parts using the blade formulas
/// ∗((v⌐e)∧n) and ∗(e∧(v⌐n)).  The frame (tangent vectors first, then
/// normal ones) must be orthonormal; the combined orientation sign of
/// e ∧ n is folded in, so frames of either orientation work and the
/// output always agrees with the Gram projector.
pub fn projector_from_frame(
    tangent: &[Vec<f64>],
    normal: &[Vec<f64>],
    v: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = v.len();
    check_dimension(m)?;
    let k = tangent.len();
    if k + normal.len() != m {
        return Err(Error::DimensionMismatch {
            left: k + normal.len(),
            right: m,
        });
    }
    let frame: Vec<&Vec<f64>> = tangent.iter().chain(normal.iter()).collect();
    for vec in &frame {
        if vec.len() != m {
            return Err(Error::DimensionMismatch {
                left: vec.len(),
                right: m,
            });
        }
    }
    let mut deviation: f64 = 0.0;
    for (i, a) in frame.iter().enumerate() {
        for (j, b) in frame.iter().enumerate().skip(i) {
            let dot: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((dot - target).abs());
        }
    }
    if deviation > tolerances::FRAME_ORTHONORMAL {
        return Err(Error::NonOrthonormalFrame {
            deviation,
            limit: tolerances::FRAME_ORTHONORMAL,
        });
    }

    // Degenerate splits need no algebra: a complete orthonormal frame
    // with no tangent (normal) directions projects everything onto the
    // normal (tangent) side.
    if k == 0 {
        return Ok((vec![0.0; m], v.to_vec()));
    }
    if k == m {
        return Ok((v.to_vec(), vec![0.0; m]));
    }

    let mut e = MultiVector::scalar(m, 1.0)?;
    for t in tangent {
        e = wedge(&e, &MultiVector::from_vector(t)?)?;
    }
    let mut n = MultiVector::scalar(m, 1.0)?;
    for q in normal {
        n = wedge(&n, &MultiVector::from_vector(q)?)?;
    }
    // For an orthonormal frame e ∧ n = ±(ε₁∧…∧ε_m); the sign is the
    // frame's orientation and scales both formulas linearly.
    let orient = wedge(&e, &n)?.components[(1usize << m) - 1].signum();
    let (sign_t, sign_n) = resolved_signs(m, k)?;

    let v_mv = MultiVector::from_vector(v)?;
    let tangent_part = raw_tangent(&v_mv, &e, &n, m)?.scaled(sign_t * orient);
    let normal_part = raw_normal(&v_mv, &e, &n, k)?.scaled(sign_n * orient);
    Ok((tangent_part.as_vector()?, normal_part.as_vector()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn eps(m: usize, indices: &[usize]) -> MultiVector {
        MultiVector::basis_blade(m, indices).unwrap()
    }

    /// Enumeration oracle for ⌐ on sorted index lists, following the
    /// stated rule letter by letter: zero unless I ⊆ J, otherwise
    /// (−1)^M ε_{J∖I} with M = #{(i, j) ∈ I × J : j > i}.
    fn interior_oracle(i_set: &[usize], j_set: &[usize]) -> Option<(f64, Vec<usize>)> {
        if !i_set.iter().all(|i| j_set.contains(i)) {
            return None;
        }
        let mut m_count = 0usize;
        for i in i_set {
            for j in j_set {
                if j > i {
                    m_count += 1;
                }
            }
        }
        let rest: Vec<usize> = j_set.iter().copied().filter(|j| !i_set.contains(j)).collect();
        Some((if m_count % 2 == 0 { 1.0 } else { -1.0 }, rest))
    }

    fn mask_to_set(mask: usize) -> Vec<usize> {
        (0..8).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
    }

    #[test]
    fn wedge_on_basis_vectors() {
        let m = 3;
        let e1 = eps(m, &[1]);
        let e2 = eps(m, &[2]);
        let wedge12 = wedge(&e1, &e2).unwrap();
        assert_eq!(wedge12.coefficient(&[1, 2]), 1.0);
        assert_eq!(wedge(&e2, &e1).unwrap().coefficient(&[1, 2]), -1.0);

        // (ε₁+ε₂)∧(ε₁−ε₂) expands to ε₁∧ε₁ − ε₁∧ε₂ + ε₂∧ε₁ − ε₂∧ε₂
        // = −2 ε₁∧ε₂.
        let sum = &e1 + &e2;
        let diff = &e1 - &e2;
        let product = wedge(&sum, &diff).unwrap();
        assert_eq!(product.coefficient(&[1, 2]), -2.0);
        assert_eq!(product.grade(), Some(2));

        let v = MultiVector::from_vector(&[0.5, -1.5, 2.0]).unwrap();
        assert!(wedge(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn interior_mult_matches_the_enumeration_oracle() {
        // Exhaustive comparison of the bitmask implementation against the
        // sorted-list oracle, all 2^5 × 2^5 basis pairs in m = 5.
        let m = 5;
        for i_mask in 0usize..(1 << m) {
            for j_mask in 0usize..(1 << m) {
                let i_set = mask_to_set(i_mask);
                let j_set = mask_to_set(j_mask);
                if i_set.len() > j_set.len() {
                    continue;
                }
                let got = interior_mult(&eps(m, &i_set), &eps(m, &j_set)).unwrap();
                match interior_oracle(&i_set, &j_set) {
                    None => assert!(got.is_zero(), "I={i_set:?} J={j_set:?}"),
                    Some((sign, rest)) => {
                        assert_eq!(got.coefficient(&rest), sign, "I={i_set:?} J={j_set:?}");
                        assert_eq!(got.norm(), 1.0);
                    }
                }
            }
        }

        // The worked examples, spelled out.
        assert_eq!(
            interior_mult(&eps(3, &[1]), &eps(3, &[1, 2]))
                .unwrap()
                .coefficient(&[2]),
            -1.0,
            "M = 1 from the pair (1,2)"
        );
        assert!(interior_mult(&eps(3, &[3]), &eps(3, &[1, 2])).unwrap().is_zero());
        assert_eq!(
            interior_mult(&eps(3, &[1, 2]), &eps(3, &[1, 2]))
                .unwrap()
                .coefficient(&[]),
            -1.0,
            "M = 1 from the pair (1,2) alone"
        );
    }

    #[test]
    fn interior_mult_grade_contracts() {
        let m = 3;
        let mixed = &eps(m, &[1]) + &eps(m, &[1, 2]);
        assert!(matches!(
            interior_mult(&mixed, &eps(m, &[1, 2, 3])),
            Err(Error::GradeError { .. })
        ));
        assert!(matches!(
            interior_mult(&eps(m, &[1, 2]), &eps(m, &[3])),
            Err(Error::GradeError { .. })
        ));
        let zero = MultiVector::zero(m).unwrap();
        assert!(interior_mult(&zero, &eps(m, &[1, 2])).unwrap().is_zero());
        assert!(matches!(
            interior_mult(&eps(2, &[1]), &eps(3, &[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hodge_star_table() {
        // ∗ε₁ in m = 3: M counts (1,2) and (1,3), so the sign is +.
        let star_e1 = hodge_star(&eps(3, &[1]));
        assert_eq!(star_e1.coefficient(&[2, 3]), 1.0);
        assert_eq!(star_e1.grade(), Some(2));

        // ∗1 is the top form.
        let star_one = hodge_star(&MultiVector::scalar(3, 1.0).unwrap());
        assert_eq!(star_one.coefficient(&[1, 2, 3]), 1.0);

        // ∗∗ on every basis element, m ≤ 6, against the enumeration
        // oracle applied twice; the observed sign depends only on m (a
        // consequence of the M-count convention: the two exponents sum
        // to Σ_{i=1}^{m} (m−i) regardless of the starting grade).
        for m in 2..=6usize {
            let mut signs_by_grade: Vec<Option<f64>> = vec![None; m + 1];
            for mask in 0usize..(1 << m) {
                let set = mask_to_set(mask);
                let top: Vec<usize> = (1..=m).collect();
                let (s1, rest) = interior_oracle(&set, &top).unwrap();
                let (s2, back) = interior_oracle(&rest, &top).unwrap();
                assert_eq!(back, set);
                let oracle_sign = s1 * s2;

                let twice = hodge_star(&hodge_star(&eps(m, &set)));
                assert_eq!(twice.coefficient(&set), oracle_sign, "m={m} I={set:?}");

                let grade = set.len();
                match signs_by_grade[grade] {
                    None => signs_by_grade[grade] = Some(oracle_sign),
                    Some(s) => assert_eq!(s, oracle_sign, "sign must not depend on the mask"),
                }
            }
            let first = signs_by_grade[0].unwrap();
            assert!(
                signs_by_grade.iter().all(|s| s.unwrap() == first),
                "m={m}: ∗∗ sign must be grade-independent, got {signs_by_grade:?}"
            );
        }
    }

    #[test]
    fn interior_is_adjoint_to_wedge_up_to_one_sign_per_grade_pair() {
        // ⟨ε_I ⌐ ε_J, ε_K⟩ = s(p,q) ⟨ε_J, ε_I ∧ ε_K⟩ with a single sign
        // for all basis elements of fixed grades.
        let m = 4;
        for p in 0..=m {
            for q in p..=m {
                let mut sign: Option<f64> = None;
                for i_mask in 0usize..(1 << m) {
                    if i_mask.count_ones() as usize != p {
                        continue;
                    }
                    for j_mask in 0usize..(1 << m) {
                        if j_mask.count_ones() as usize != q {
                            continue;
                        }
                        for k_mask in 0usize..(1 << m) {
                            if k_mask.count_ones() as usize != q - p {
                                continue;
                            }
                            let i_set = mask_to_set(i_mask);
                            let lhs = interior_mult(&eps(m, &i_set), &eps(m, &mask_to_set(j_mask)))
                                .unwrap()
                                .inner(&eps(m, &mask_to_set(k_mask)))
                                .unwrap();
                            let rhs = eps(m, &mask_to_set(j_mask))
                                .inner(&wedge(&eps(m, &i_set), &eps(m, &mask_to_set(k_mask))).unwrap())
                                .unwrap();
                            if lhs == 0.0 && rhs == 0.0 {
                                continue;
                            }
                            assert!(lhs != 0.0 && rhs != 0.0, "pairings must vanish together");
                            let s = lhs / rhs;
                            match sign {
                                None => sign = Some(s),
                                Some(prev) => assert_eq!(prev, s, "p={p} q={q}"),
                            }
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn wedge_is_associative_and_graded_anticommutative(
            m in 2usize..=5,
            seeds in prop::array::uniform3(0u64..1_000),
        ) {
            // Integer coefficients keep every product exact, so the laws
            // hold with equality, not tolerance.
            let draw = |seed: u64, m: usize| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut mv = MultiVector::zero(m).unwrap();
                for c in 0..(1usize << m) {
                    mv.components[c] = rng.gen_range(-3i32..=3) as f64;
                }
                mv
            };
            let a = draw(seeds[0], m);
            let b = draw(seeds[1], m);
            let c = draw(seeds[2], m);
            let left = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
            let right = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left.components, right.components);

            // Anticommutativity is graded, so test it on homogeneous
            // parts: a_p ∧ b_q = (−1)^{pq} b_q ∧ a_p.
            for p in 0..=m {
                for q in 0..=m {
                    let ap = a.grade_part(p);
                    let bq = b.grade_part(q);
                    let fwd = wedge(&ap, &bq).unwrap();
                    let rev = wedge(&bq, &ap).unwrap();
                    let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
                    prop_assert_eq!(fwd.components, (&rev * sign).components);
                }
            }
        }
    }

    #[test]
    fn coordinate_frame_projectors_are_exact() {
        let tangent = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let normal = vec![vec![0.0, 0.0, 1.0]];
        let (t, n) = projector_from_frame(&tangent, &normal, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t, vec![1.0, 2.0, 0.0]);
        assert_eq!(n, vec![0.0, 0.0, 3.0]);

        // A vector already in the tangent span has no normal part.
        let (t, n) = projector_from_frame(&tangent, &normal, &[-4.0, 7.0, 0.0]).unwrap();
        assert_eq!(t, vec![-4.0, 7.0, 0.0]);
        assert_eq!(n, vec![0.0, 0.0, 0.0]);

        // Degenerate splits.
        let (t, n) = projector_from_frame(&[], &[vec![1.0, 0.0], vec![0.0, 1.0]], &[2.0, 5.0])
            .unwrap();
        assert_eq!(t, vec![0.0, 0.0]);
        assert_eq!(n, vec![2.0, 5.0]);
    }

    /// Gram–Schmidt an m×m seeded random matrix into an orthonormal frame.
    fn random_frame(m: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut frame: Vec<Vec<f64>> = Vec::new();
        while frame.len() < m {
            let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for prev in &frame {
                let dot: f64 = v.iter().zip(prev.iter()).map(|(a, b)| a * b).sum();
                for (vi, pi) in v.iter_mut().zip(prev.iter()) {
                    *vi -= dot * pi;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                frame.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        frame
    }

    fn gram_projection(frame: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for e in frame {
            let dot: f64 = e.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            for (o, ei) in out.iter_mut().zip(e.iter()) {
                *o += dot * ei;
            }
        }
        out
    }

    #[test]
    fn rotated_frames_match_the_gram_projector() {
        for (m, k, seed) in [(5usize, 3usize, 11u64), (3, 1, 12), (4, 2, 13), (6, 5, 14)] {
            let frame = random_frame(m, seed);
            let (tangent, normal) = frame.split_at(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            for _ in 0..5 {
                let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let (t, n) = projector_from_frame(tangent, normal, &v).unwrap();
                let gram_t = gram_projection(tangent, &v);
                for i in 0..m {
                    assert!(
                        (t[i] - gram_t[i]).abs() <= tolerances::PROJECTOR_ALGEBRA,
                        "m={m} k={k}: tangent part off by {}",
                        (t[i] - gram_t[i]).abs()
                    );
                    assert!((t[i] + n[i] - v[i]).abs() <= tolerances::PROJECTOR_ALGEBRA);
                }
                // Idempotence and annihilation through a second pass.
                let (tt, tn) = projector_from_frame(tangent, normal, &t).unwrap();
                for i in 0..m {
                    assert!((tt[i] - t[i]).abs() <= tolerances::PROJECTOR_ALGEBRA);
                    assert!(tn[i].abs() <= tolerances::PROJECTOR_ALGEBRA);
                }
            }

            // Reversing one tangent vector flips the frame orientation;
            // the projector must not notice.
            let mut flipped: Vec<Vec<f64>> = tangent.to_vec();
            for x in flipped[0].iter_mut() {
                *x = -*x;
            }
            let v: Vec<f64> = (0..m).map(|i| 1.0 + i as f64).collect();
            let (t_flip, _) = projector_from_frame(&flipped, normal, &v).unwrap();
            let gram_t = gram_projection(tangent, &v);
            for i in 0..m {
                assert!((t_flip[i] - gram_t[i]).abs() <= tolerances::PROJECTOR_ALGEBRA);
            }
        }
    }

    #[test]
    fn frame_validation() {
        let tangent = vec![vec![2.0, 0.0, 0.0]];
        let normal = vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!(matches!(
            projector_from_frame(&tangent, &normal, &[1.0, 1.0, 1.0]),
            Err(Error::NonOrthonormalFrame { .. })
        ));
        assert!(matches!(
            projector_from_frame(&normal, &[], &[1.0, 1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(MultiVector::zero(9).is_err());
        assert!(MultiVector::basis_vector(3, 4).is_err());
    }
}
