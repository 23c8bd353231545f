//! The explicit monodromy data of the Dwork family and its classifier.
//!
//! The residual monodromy group `MD_n(k)` attached to the family of
//! hypersurfaces `x₁^{n+1} + ⋯ + x_{n+1}^{n+1} − (n+1)·t·x₁⋯x_{n+1}` is
//! generated, in a suitable basis of the middle cohomology, by two explicit
//! companion matrices:
//!
//! * [`dwork_a`] — the companion matrix of `(X−1)ⁿ`, the local monodromy at
//!   `t = ∞`;
//! * [`dwork_b`] — the companion matrix of the "middle window" product
//!   `∏ (X − ζ_N^j)` over the `n` consecutive exponents centred at `(N±…)/2`,
//!   the inverse local monodromy at `t = 0`.
//!
//! Here `N` is an odd modulus with `N ≥ n+1` and the matrices are reduced
//! modulo a prime `λ | p` of the real cyclotomic field `Q(ζ_N)⁺`, landing in
//! the residue field `k_λ = F_{p^f}`.
//!
//! [`classify_md`] identifies the group `⟨Ā, B̄⟩` exactly — symplectic,
//! orthogonal (split or non-split), symmetric, or dihedral — by combining
//! three kinds of hard evidence: the space of invariant quadratic forms, the
//! exact group order, and (for the symmetric verdicts) containment in the
//! image of the standard representation [`theta_standard`] after aligning
//! the invariant forms in a common frame.
//!
//! ```
//! use dworklab::dwork::{classify_md, DworkParams, Verdict};
//!
//! // Two dimensions up from the quintic point: n = 2, N = 7 is dihedral.
//! let params = DworkParams::new(2, 7, 2).unwrap();
//! let class = classify_md(&params).unwrap();
//! assert_eq!(class.verdict, Verdict::Dihedral(14));
//!
//! // At n = 4, N = 7 the group fills out a split orthogonal group over F_8.
//! let params = DworkParams::new(4, 7, 2).unwrap();
//! let class = classify_md(&params).unwrap();
//! assert_eq!(class.verdict, Verdict::OrthPlus { q: 8 });
//! assert_eq!(class.order.to_string(), "508032");
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::ff::{
    field_make, residue_degree, splitting_degree, FieldCtx, FieldElem, FieldError, SubfieldMap,
    MAX_Q,
};
use crate::grp::{
    factorial, generate_bfs, orth_order, sp_order, GrpError, MatGroup, BSGS_DEGREE_MAX, FLAT_LIMIT,
};
use crate::linalg::{Mat, Poly};
use crate::qform::{invariant_forms, FormType, QuadForm};

/// Errors from parameter validation, construction, and classification.
#[derive(Debug, Error)]
pub enum DworkError {
    /// Parameters outside the domain (parity, size, primality, ramification).
    #[error("invalid parameters: {0}")]
    BadParams(String),
    /// `dwork_b` needs the `N`-th roots of unity in the coefficient field.
    #[error("no primitive {n}-th root of unity in a field of order {q} (and N ≠ n+1)")]
    MissingRoots { n: u64, q: u64 },
    /// The symmetric-group embedding exists only for matching parities.
    #[error(
        "parity mismatch: the embedding needs k = n+1 with n ≡ 0 (mod 4) \
         or k = n+2 with n ≡ 2 (mod 4), got k = {k}, n = {n}"
    )]
    ParityMismatch { k: usize, n: usize },
    /// The requested classification exceeds the supported problem sizes.
    #[error("classification out of supported scale: {0}")]
    OutOfScale(String),
    /// Evidence did not settle on a verdict; never guessed.
    #[error("verdict unresolved: {0}")]
    Unresolved(String),
    /// Finite-field layer failure.
    #[error(transparent)]
    Field(#[from] FieldError),
    /// Group-computation layer failure.
    #[error(transparent)]
    Group(#[from] GrpError),
}

/// The parameters (n, N, p) of one member of the classification problem.
///
/// Invariants enforced by [`DworkParams::new`]: `n` even and ≥ 2, `N` odd
/// with `N ≥ n+1`, `p` prime with `gcd(p, N) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DworkParams {
    /// Dimension of the representation (degree of the hypersurface minus 1).
    pub n: usize,
    /// The odd modulus whose roots of unity cut out the window.
    pub big_n: u64,
    /// Residue characteristic.
    pub p: u64,
    /// Residue degree: the least `f` with `p^f ≡ ±1 (mod N)`, so that the
    /// residue field of `Q(ζ_N)⁺` at a place over `p` is `F_{p^f}`.
    pub f: u32,
}

impl DworkParams {
    /// Validate and normalize the triple `(n, N, p)`.
    pub fn new(n: usize, big_n: u64, p: u64) -> Result<DworkParams, DworkError> {
        if n < 2 || n % 2 != 0 {
            return Err(DworkError::BadParams(format!(
                "n must be even and ≥ 2, got {n}"
            )));
        }
        if big_n % 2 == 0 || big_n < n as u64 + 1 {
            return Err(DworkError::BadParams(format!(
                "N must be odd and ≥ n+1, got N = {big_n}, n = {n}"
            )));
        }
        if p > MAX_Q {
            return Err(DworkError::BadParams(format!(
                "characteristic {p} exceeds the field-table bound {MAX_Q}"
            )));
        }
        if !is_prime(p) {
            return Err(DworkError::BadParams(format!("p must be prime, got {p}")));
        }
        if big_n % p == 0 {
            return Err(DworkError::BadParams(format!(
                "p = {p} divides N = {big_n} (ramified case excluded)"
            )));
        }
        let f = residue_degree(big_n, p)?;
        Ok(DworkParams { n, big_n, p, f })
    }

    /// The residue field `k_λ = F_{p^f}`.
    pub fn residue_field(&self) -> Result<Arc<FieldCtx>, DworkError> {
        field_make(self.p, self.f).map_err(DworkError::from)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The generator `A`: companion matrix of `(X−1)ⁿ`, i.e. the matrix with
/// ones on the subdiagonal and last column `(−Aₙ, …, −A₁)ᵀ` where
/// `A_i = (−1)^i·C(n,i)`, reduced into the given field.
pub fn dwork_a(n: usize, ctx: &Arc<FieldCtx>) -> Mat {
    assert!(n >= 2, "dwork_a needs n ≥ 2");
    let x_minus_1 = Poly::from_ints(ctx, &[-1, 1]);
    let mut poly = Poly::one(ctx);
    for _ in 0..n {
        poly = poly.mul(&x_minus_1);
    }
    Mat::companion(&poly)
}

/// The generator `B`: companion matrix of the middle-window product
/// `∏_{j=(N−n+1)/2}^{(N+n−1)/2} (X − ζ_N^j)`.
///
/// When `N = n+1` the window is every non-trivial `(n+1)`-th root of unity
/// and the product collapses to `1 + X + ⋯ + Xⁿ`, which has integer
/// coefficients and reduces into any field. Otherwise the field must
/// contain the `N`-th roots of unity (`N | q−1`).
pub fn dwork_b(n: usize, big_n: u64, ctx: &Arc<FieldCtx>) -> Result<Mat, DworkError> {
    assert!(n >= 2, "dwork_b needs n ≥ 2");
    if big_n % 2 == 0 || big_n < n as u64 + 1 {
        return Err(DworkError::BadParams(format!(
            "N must be odd and ≥ n+1, got N = {big_n}, n = {n}"
        )));
    }
    if big_n == n as u64 + 1 {
        let poly = Poly::new(ctx, vec![FieldElem::ONE; n + 1]);
        return Ok(Mat::companion(&poly));
    }
    if (ctx.q - 1) % big_n != 0 {
        return Err(DworkError::MissingRoots {
            n: big_n,
            q: ctx.q,
        });
    }
    let z = ctx.cyclotomic_element(big_n)?;
    let lo = (big_n - n as u64 + 1) / 2;
    let hi = (big_n + n as u64 - 1) / 2;
    let mut poly = Poly::one(ctx);
    for j in lo..=hi {
        let root = ctx.pow(z, j);
        let factor = Poly::new(ctx, vec![ctx.sub(FieldElem::ZERO, root), FieldElem::ONE]);
        poly = poly.mul(&factor);
    }
    Ok(Mat::companion(&poly))
}

/// The integer conjugator `P` with `P⁻¹AP` the upper unitriangular Jordan
/// block: `p_{ij} = (−1)^{i+j}·C(n−j, i−1)` for `i+j−1 ≤ n` (1-indexed),
/// zero otherwise, reduced into the given field. `det P = ±1`, so the
/// reduction is invertible over every field.
pub fn conjugator_p(n: usize, ctx: &Arc<FieldCtx>) -> Mat {
    assert!(n >= 2, "conjugator_p needs n ≥ 2");
    Mat::from_fn(ctx, n, n, |i, j| {
        let (i1, j1) = (i + 1, j + 1);
        if i1 + j1 - 1 <= n {
            let c = binomial(n - j1, i1 - 1);
            let signed = if (i1 + j1) % 2 == 0 { c } else { -c };
            ctx.elem_from_int(signed)
        } else {
            FieldElem::ZERO
        }
    })
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(acc).expect("binomial coefficient out of range")
}

/// The matrix over `F₂` of a permutation of `k` letters in the standard
/// representation.
///
/// The module is `V = W/L` where `W ⊂ F₂^{n+2}` is the sum-zero hyperplane
/// and `L` the line spanned by the all-ones vector; `dim V = n`. For even
/// `k` the permutation acts on all `k = n+2` letters; for odd `k` it is the
/// restriction to the stabilizer of the last letter, so `k = n+1` and the
/// permutation is extended by fixing letter `n+2`. The fixed basis is
/// `v_i = [e_i + e_{i+1}]`, `i = 1..n` (deterministic, so matrices are
/// reproducible).
///
/// `perm` maps positions to images: letter `i` goes to `perm[i]`
/// (0-indexed). The result is a group homomorphism:
/// `theta(σ)·theta(τ) = theta(σ∘τ)` with `(σ∘τ)(i) = σ(τ(i))`.
pub fn theta_standard(k: usize, perm: &[usize]) -> Result<Mat, DworkError> {
    if k < 3 {
        return Err(DworkError::BadParams(format!(
            "theta_standard needs k ≥ 3, got {k}"
        )));
    }
    if perm.len() != k {
        return Err(DworkError::BadParams(format!(
            "permutation length {} does not match k = {k}",
            perm.len()
        )));
    }
    let mut seen = vec![false; k];
    for &image in perm {
        if image >= k || seen[image] {
            return Err(DworkError::BadParams(
                "perm is not a permutation".to_string(),
            ));
        }
        seen[image] = true;
    }
    // Ambient letter count n+2 and module dimension n.
    let (n, letters) = if k % 2 == 0 { (k - 2, k) } else { (k - 1, k + 1) };
    let f2 = field_make(2, 1)?;
    let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(n);
    for i in 0..n {
        // Image of v_i = [e_i + e_{i+1}] under the permutation (letters
        // beyond k are fixed).
        let im = |letter: usize| if letter < k { perm[letter] } else { letter };
        let mut w = vec![0u8; letters];
        w[im(i)] ^= 1;
        w[im(i + 1)] ^= 1;
        // Reduce to the representative with last coordinate zero by adding
        // the all-ones vector if necessary.
        if w[letters - 1] == 1 {
            for bit in w.iter_mut() {
                *bit ^= 1;
            }
        }
        // w = Σ c_j (e_j + e_{j+1}) has telescoping coordinates, so the
        // coefficients are the prefix sums of w.
        let mut acc = 0u8;
        let mut coeffs = Vec::with_capacity(n);
        for &bit in w.iter().take(n) {
            acc ^= bit;
            coeffs.push(FieldElem(acc as u32));
        }
        debug_assert_eq!(acc, w[n], "image not in the span of the basis");
        cols.push(coeffs);
    }
    Ok(Mat::from_cols(&f2, &cols))
}

/// The image of the full symmetric group `S_k` under [`theta_standard`],
/// generated by the transposition `(0 1)` and the `k`-cycle.
pub fn theta_image(k: usize) -> Result<MatGroup, DworkError> {
    let mut transposition: Vec<usize> = (0..k).collect();
    transposition.swap(0, 1);
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let t = theta_standard(k, &transposition)?;
    let c = theta_standard(k, &cycle)?;
    MatGroup::new(vec![t, c]).map_err(DworkError::from)
}

/// The quadratic form on `F₂ⁿ` preserved by the image of [`theta_standard`]:
/// the tridiagonal form `Q(a) = Σ a_i² + Σ a_i·a_{i+1}`, which computes the
/// parity of the number of runs of ones.
///
/// It exists exactly when the parities match the two constructions that
/// descend `F(x) = Σ_{i≤j} x_i x_j` to the representation space: `k = n+2`
/// with `n ≡ 2 (mod 4)` (quotient construction) or `k = n+1` with
/// `n ≡ 0 (mod 4)` (restriction to the sum-zero hyperplane on `n+1`
/// letters). For other parities the descent breaks down and the call errors.
pub fn s_embedding_form(k: usize, n: usize) -> Result<QuadForm, DworkError> {
    let matches = (k == n + 1 && n % 4 == 0) || (k == n + 2 && n % 4 == 2);
    if !matches {
        return Err(DworkError::ParityMismatch { k, n });
    }
    let f2 = field_make(2, 1)?;
    let mut q = QuadForm::zero(&f2, n);
    for i in 0..n {
        q.set_coeff(i, i, FieldElem::ONE);
    }
    for i in 0..n - 1 {
        q.set_coeff(i, i + 1, FieldElem::ONE);
    }
    Ok(q)
}

/// The possible identifications of `MD_n(k_λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The full symplectic group `Sp_n(F_q)`.
    Sp { q: u64 },
    /// The split orthogonal group `O⁺_n(F_q)`.
    OrthPlus { q: u64 },
    /// The non-split orthogonal group `O⁻_n(F_q)`.
    OrthMinus { q: u64 },
    /// The symmetric group `S_k` in its standard representation over `F₂`.
    Symmetric(usize),
    /// The dihedral group of the given order `2N` (the case `n = 2`,
    /// residue characteristic 2).
    Dihedral(u64),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sp { q } => write!(f, "Sp(F_{q})"),
            Verdict::OrthPlus { q } => write!(f, "O^+(F_{q})"),
            Verdict::OrthMinus { q } => write!(f, "O^-(F_{q})"),
            Verdict::Symmetric(k) => write!(f, "S_{k}"),
            Verdict::Dihedral(m) => write!(f, "D_{m}"),
        }
    }
}

/// The classification of one residual monodromy group, with the evidence
/// that produced it.
#[derive(Debug, Clone)]
pub struct MDClass {
    /// The identified group.
    pub verdict: Verdict,
    /// Its exact order.
    pub order: BigUint,
    /// Dimension of the space of invariant quadratic forms.
    pub inv_form_dim: usize,
    /// Type of the invariant form when the space is a line spanned by a
    /// nondegenerate form.
    pub form_type: Option<FormType>,
    /// Degree over `F_p` of the field generated by the matrix entries (the
    /// field the classification is carried out over).
    pub coefficient_subfield_degree: u32,
}

/// Build `A` and `B` over the smallest field containing their entries and
/// report that field's degree over `F_p`.
///
/// For `N = n+1` the entries are rational integers, so the field is `F_p`
/// itself. Otherwise `B` is built over the splitting field `F_{p^e}` of the
/// `N`-th roots of unity, its entries are descended into the residue field
/// `F_{p^f}` (they always lie there: the window is stable under
/// `ζ ↦ ζ⁻¹`), and finally the true coefficient field is detected
/// entry-by-entry and the matrices re-based onto it.
fn build_generators(params: &DworkParams) -> Result<(Mat, Mat, u32), DworkError> {
    let n = params.n;
    let big_n = params.big_n;
    let p = params.p;
    if big_n == n as u64 + 1 {
        let ctx = field_make(p, 1)?;
        let b = dwork_b(n, big_n, &ctx)?;
        return Ok((dwork_a(n, &ctx), b, 1));
    }
    let e = splitting_degree(big_n, p)?;
    let big = field_make(p, e).map_err(|err| match err {
        FieldError::TooLarge { .. } => DworkError::OutOfScale(format!(
            "splitting field F_{{{p}^{e}}} exceeds the field-table bound"
        )),
        other => DworkError::from(other),
    })?;
    let b_big = dwork_b(n, big_n, &big)?;
    let f = params.f;
    let (residue, b_residue) = if e == f {
        (big, b_big)
    } else {
        let small = field_make(p, f)?;
        let map = SubfieldMap::new(&small, &big)?;
        let b = descend_matrix(&b_big, &small, &map).ok_or_else(|| {
            DworkError::Unresolved(
                "window coefficients escaped the residue field".to_string(),
            )
        })?;
        (small, b)
    };
    // Detect the true coefficient field inside the residue field.
    let mut degree = 1u32;
    for i in 0..n {
        for j in 0..n {
            degree = lcm_u32(degree, residue.min_subfield_degree(b_residue.get(i, j)));
        }
    }
    if degree == f {
        return Ok((dwork_a(n, &residue), b_residue, f));
    }
    let sub = field_make(p, degree)?;
    let map = SubfieldMap::new(&sub, &residue)?;
    let b = descend_matrix(&b_residue, &sub, &map)
        .expect("entries lie in the detected subfield by construction");
    Ok((dwork_a(n, &sub), b, degree))
}

fn descend_matrix(m: &Mat, small: &Arc<FieldCtx>, map: &SubfieldMap) -> Option<Mat> {
    let mut entries = vec![vec![FieldElem::ZERO; m.cols()]; m.rows()];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = map.down(m.get(i, j))?;
        }
    }
    Some(Mat::from_fn(small, m.rows(), m.cols(), |i, j| entries[i][j]))
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

/// Identify `MD_n(k_λ) = ⟨Ā, B̄⟩` exactly.
///
/// The decision tree, on hard evidence only (a verdict is never guessed —
/// inconsistent evidence reports [`DworkError::Unresolved`]):
///
/// 1. build the generators over the detected coefficient field `F_q`;
/// 2. `n = 2`, `p = 2`: enumerate the group and match the dihedral
///    presentation `ord Ā = 2`, `ord B̄ = N`, `ĀB̄Ā⁻¹ = B̄⁻¹`;
/// 3. otherwise compute the space of invariant quadratic forms and the
///    exact group order (deterministic stabilizer chain when the projective
///    degree allows it, randomized chain certified against the candidate
///    bound beyond that);
/// 4. no invariant form and the order of `Sp_n(F_q)` → symplectic;
///    an invariant line of nondegenerate type and a factorial order over
///    `F₂` → symmetric group, confirmed through [`theta_image`] (order,
///    form type, and — when the image is the full orthogonal group of its
///    form — frame-aligned containment of the generators); an invariant
///    line with the order of `O^±_n(F_q)` → the orthogonal group of that
///    type.
pub fn classify_md(params: &DworkParams) -> Result<MDClass, DworkError> {
    let n = params.n;
    let (a, b, coeff_degree) = build_generators(params)?;
    let ctx = a.ctx().clone();
    let q = ctx.q;

    // Dihedral branch: n = 2 in residue characteristic 2.
    if n == 2 && params.p == 2 {
        return classify_dihedral(params, &a, &b, coeff_degree);
    }

    let forms = invariant_forms(&[a.clone(), b.clone()]);
    let inv_form_dim = forms.len();
    let mut form_type = None;
    if inv_form_dim == 1 {
        let (ty, _) = forms[0].classify_type();
        if ty != FormType::Degenerate {
            form_type = Some(ty);
        }
    }

    let group = MatGroup::new(vec![a, b])?;
    let order = exact_order(&group, n, q, inv_form_dim, form_type)?;

    let verdict = if inv_form_dim == 0 {
        if order == sp_order(n, q) {
            Verdict::Sp { q }
        } else {
            return Err(DworkError::Unresolved(format!(
                "no invariant form but order {order} ≠ |Sp_{n}(F_{q})|"
            )));
        }
    } else if inv_form_dim == 1 && form_type.is_some() {
        let ty = form_type.expect("checked above");
        let plus = ty == FormType::Plus;
        if q == 2 && n % 4 == 0 && order == factorial(n as u64 + 1) {
            confirm_symmetric(n + 1, n, &group, &forms[0], ty)?;
            Verdict::Symmetric(n + 1)
        } else if q == 2 && n % 4 == 2 && order == factorial(n as u64 + 2) {
            confirm_symmetric(n + 2, n, &group, &forms[0], ty)?;
            Verdict::Symmetric(n + 2)
        } else if order == orth_order(n, q, plus) {
            if plus {
                Verdict::OrthPlus { q }
            } else {
                Verdict::OrthMinus { q }
            }
        } else {
            return Err(DworkError::Unresolved(format!(
                "one invariant {ty} form but order {order} matches neither the \
                 orthogonal group nor a symmetric group"
            )));
        }
    } else {
        return Err(DworkError::Unresolved(format!(
            "invariant-form evidence out of the expected range \
             (dim {inv_form_dim}, type {form_type:?})"
        )));
    };

    Ok(MDClass {
        verdict,
        order,
        inv_form_dim,
        form_type,
        coefficient_subfield_degree: coeff_degree,
    })
}

fn classify_dihedral(
    params: &DworkParams,
    a: &Mat,
    b: &Mat,
    coeff_degree: u32,
) -> Result<MDClass, DworkError> {
    let big_n = params.big_n;
    let relations_hold = a.order(4) == Some(2)
        && b.order(big_n + 1) == Some(big_n)
        && a.mul(b).mul(&a.inv().expect("A is invertible")) == b.inv().expect("B is invertible");
    if !relations_hold {
        return Err(DworkError::Unresolved(
            "dihedral presentation failed for n = 2 in characteristic 2".to_string(),
        ));
    }
    let elements = generate_bfs(&[a.clone(), b.clone()], 4 * big_n as usize + 4)?;
    if elements.len() as u64 != 2 * big_n {
        return Err(DworkError::Unresolved(format!(
            "dihedral relations hold but the group has order {} ≠ 2N = {}",
            elements.len(),
            2 * big_n
        )));
    }
    let forms = invariant_forms(&[a.clone(), b.clone()]);
    let mut form_type = None;
    if forms.len() == 1 {
        let (ty, _) = forms[0].classify_type();
        if ty != FormType::Degenerate {
            form_type = Some(ty);
        }
    }
    Ok(MDClass {
        verdict: Verdict::Dihedral(2 * big_n),
        order: BigUint::from(2 * big_n),
        inv_form_dim: forms.len(),
        form_type,
        coefficient_subfield_degree: coeff_degree,
    })
}

/// The exact order of the group, by deterministic stabilizer chain when the
/// projective degree is within bounds, and otherwise by a randomized chain
/// certified against the full isometry group of the invariant-form evidence.
fn exact_order(
    group: &MatGroup,
    n: usize,
    q: u64,
    inv_form_dim: usize,
    form_type: Option<FormType>,
) -> Result<BigUint, DworkError> {
    let degree = group.action_degree();
    if degree <= BSGS_DEGREE_MAX {
        return group.bsgs_order().map_err(DworkError::from);
    }
    if (q as u128).pow(n as u32) > FLAT_LIMIT {
        return Err(DworkError::OutOfScale(format!(
            "point space {q}^{n} exceeds the randomized-chain bound"
        )));
    }
    let upper = match (inv_form_dim, form_type) {
        (0, _) => sp_order(n, q),
        (1, Some(FormType::Plus)) => orth_order(n, q, true),
        (1, Some(FormType::Minus)) => orth_order(n, q, false),
        _ => {
            return Err(DworkError::Unresolved(
                "projective degree too large for a deterministic chain and \
                 the invariant-form evidence gives no candidate bound"
                    .to_string(),
            ))
        }
    };
    group
        .order_certified(&upper, 0x5EED_CAFE, 96)
        .ok_or_else(|| {
            DworkError::Unresolved(format!(
                "randomized chain did not certify the candidate order {upper}"
            ))
        })
}

/// Confirm that a group with factorial order and a one-dimensional space of
/// invariant forms really is the symmetric group in its standard
/// representation, not an accidental order match.
///
/// Hard evidence collected: the image of `S_k` under [`theta_standard`] has
/// order `k!` (so the representation is faithful) and preserves a unique
/// quadratic form of the same type as the group's. When `k!` equals the
/// order of the full orthogonal group of that form, form-preserving maps
/// are aligned in a common frame and every generator is tested for
/// membership in the θ-image — which is then decisive.
fn confirm_symmetric(
    k: usize,
    n: usize,
    group: &MatGroup,
    md_form: &QuadForm,
    ty: FormType,
) -> Result<(), DworkError> {
    let theta = theta_image(k)?;
    let theta_order = theta.bsgs_order()?;
    if theta_order != factorial(k as u64) {
        return Err(DworkError::Unresolved(format!(
            "standard representation of S_{k} is not faithful (order {theta_order})"
        )));
    }
    let theta_forms = invariant_forms(theta.generators());
    if theta_forms.len() != 1 {
        return Err(DworkError::Unresolved(format!(
            "θ-image preserves a {}-dimensional space of forms",
            theta_forms.len()
        )));
    }
    let (theta_ty, _) = theta_forms[0].classify_type();
    if theta_ty != ty {
        return Err(DworkError::Unresolved(format!(
            "θ-image form type {theta_ty} does not match the group's {ty}"
        )));
    }
    let plus = ty == FormType::Plus;
    if factorial(k as u64) == orth_order(n, 2, plus) {
        // The θ-image is the full orthogonal group of its form; after
        // aligning both invariant forms to the standard frame, membership
        // of the generators settles containment exactly.
        let to_std_md = md_form
            .standardize()
            .expect("nondegenerate by classified type");
        let to_std_theta = theta_forms[0]
            .standardize()
            .expect("nondegenerate by classified type");
        let bridge = to_std_md.mul(&to_std_theta.inv().expect("change of basis"));
        let bridge_inv = bridge.inv().expect("change of basis");
        for g in group.generators() {
            let h = bridge_inv.mul(g).mul(&bridge);
            if !theta.contains(&h)? {
                return Err(DworkError::Unresolved(format!(
                    "order and form type match S_{k} but a generator escapes \
                     the θ-image"
                )));
            }
        }
    }
    Ok(())
}
