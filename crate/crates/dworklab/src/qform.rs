//! Quadratic forms on `k^n` in characteristic 2.
//!
//! A quadratic map `F(x) = Σ_{i≤j} c_{ij} x_i x_j` in even characteristic is
//! *not* determined by its polar bilinear form `B(x,y) = F(x+y)−F(x)−F(y)`
//! (the diagonal coefficients vanish from `B`), which is exactly why the
//! orthogonal groups `O^±_n(k) ⊊ Sp_n(k)` are proper subgroups: preserving
//! `F` is strictly stronger than preserving `B`.
//!
//! Nondegenerate forms in even dimension fall into two equivalence classes,
//! *plus* (hyperbolic) and *minus* (elliptic), distinguished here by their
//! exact number of zeros: `q^{n−1} + ε(q^{n/2} − q^{n/2−1})`.
//!
//! ```
//! use dworklab::ff::field_make;
//! use dworklab::qform::{standard_form, FormSign, FormType};
//!
//! let f2 = field_make(2, 1).unwrap();
//! let f = standard_form(FormSign::Minus, 4, &f2).unwrap();
//! let (ty, zeros) = f.classify_type();
//! assert_eq!(ty, FormType::Minus);
//! assert_eq!(zeros.unwrap().to_string(), "6"); // 2³ − 2² + 2
//! ```

use crate::ff::{FieldCtx, FieldElem};
use crate::linalg::{solve_linear, symplectic_basis, Mat};
use num_bigint::BigUint;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QFormError {
    #[error("quadratic forms require even dimension, got {0}")]
    OddDimension(usize),
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    OddCharacteristic(u64),
}

/// Requested sign for a standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSign {
    Plus,
    Minus,
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormType {
    Plus,
    Minus,
    Degenerate,
}

impl std::fmt::Display for FormType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormType::Plus => write!(f, "plus"),
            FormType::Minus => write!(f, "minus"),
            FormType::Degenerate => write!(f, "degenerate"),
        }
    }
}

/// A quadratic map with upper-triangular coefficients `c_{ij}`, `i ≤ j`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadForm {
    ctx: Arc<FieldCtx>,
    n: usize,
    /// Row-major upper triangle: entry for `(i, j)` with `i ≤ j` lives at
    /// `i*n − i(i−1)/2 + (j − i)`.
    coeffs: Vec<FieldElem>,
}

impl QuadForm {
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.n);
        i * (2 * self.n - i + 1) / 2 + (j - i)
    }

    pub fn zero(ctx: &Arc<FieldCtx>, n: usize) -> QuadForm {
        QuadForm {
            ctx: Arc::clone(ctx),
            n,
            coeffs: vec![FieldElem::ZERO; n * (n + 1) / 2],
        }
    }

    /// Build from a coefficient function on pairs `i ≤ j`.
    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        n: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> QuadForm {
        let mut q = QuadForm::zero(ctx, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                let k = q.idx(i, j);
                q.coeffs[k] = v;
            }
        }
        q
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient `c_{ij}` for `i ≤ j` (arguments in either order).
    pub fn coeff(&self, i: usize, j: usize) -> FieldElem {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[self.idx(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: FieldElem) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let k = self.idx(i, j);
        self.coeffs[k] = v;
    }

    /// Evaluate `F(x)`.
    pub fn eval(&self, x: &[FieldElem]) -> FieldElem {
        assert_eq!(x.len(), self.n);
        let ctx = &self.ctx;
        let mut acc = FieldElem::ZERO;
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in i..self.n {
                if x[j].is_zero() {
                    continue;
                }
                let c = self.coeffs[self.idx(i, j)];
                if !c.is_zero() {
                    acc = ctx.add(acc, ctx.mul(c, ctx.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// Gram matrix of the polar form `B(x,y) = F(x+y) − F(x) − F(y)`:
    /// `C + Cᵀ` for the coefficient matrix `C`. In characteristic 2 the
    /// diagonal vanishes and `B` is alternating.
    pub fn polar(&self) -> Mat {
        let ctx = &self.ctx;
        Mat::from_fn(ctx, self.n, self.n, |i, j| {
            if i == j {
                // 2·c_ii
                ctx.add(self.coeff(i, i), self.coeff(i, i))
            } else {
                self.coeff(i, j)
            }
        })
    }

    /// Polar bilinear value `B(x, y)`.
    pub fn polar_eval(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let ctx = &self.ctx;
        let sum: Vec<FieldElem> = x.iter().zip(y).map(|(&a, &b)| ctx.add(a, b)).collect();
        let fx = self.eval(x);
        let fy = self.eval(y);
        ctx.sub(ctx.sub(self.eval(&sum), fx), fy)
    }

    /// Is the polar form nonsingular?
    pub fn is_nondegenerate(&self) -> bool {
        self.polar().rank() == self.n
    }

    /// The pulled-back form `F∘s`, i.e. `x ↦ F(s·x)`. Coefficients are
    /// recovered exactly from evaluations: `c'_{ii} = F(s e_i)` and
    /// `c'_{ij} = B'(e_i, e_j)` for `i < j`.
    pub fn transform(&self, s: &Mat) -> QuadForm {
        assert_eq!(s.rows(), self.n);
        assert_eq!(s.cols(), self.n);
        let cols: Vec<Vec<FieldElem>> = (0..self.n).map(|j| s.col(j)).collect();
        let diag: Vec<FieldElem> = cols.iter().map(|c| self.eval(c)).collect();
        let ctx = Arc::clone(&self.ctx);
        QuadForm::from_fn(&self.ctx, self.n, |i, j| {
            if i == j {
                diag[i]
            } else {
                let sum: Vec<FieldElem> = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(&a, &b)| ctx.add(a, b))
                    .collect();
                ctx.sub(ctx.sub(self.eval(&sum), diag[i]), diag[j])
            }
        })
    }

    /// Does `g` preserve the form: `F(g·x) = F(x)` as a coefficient identity?
    pub fn is_invariant_under(&self, g: &Mat) -> bool {
        self.transform(g) == *self
    }

    /// Classify as plus/minus/degenerate, with the exact number of zeros on
    /// `k^n` (including the origin). Counted by enumeration when `q^n ≤ 10⁷`;
    /// otherwise the form is split into polar-orthogonal planes and the count
    /// follows from the closed formula `q^{n−1} + ε(q^{n/2} − q^{n/2−1})`.
    /// Degenerate forms get a count only in the enumerable range.
    pub fn classify_type(&self) -> (FormType, Option<BigUint>) {
        assert_eq!(self.ctx.p, 2, "type classification is a characteristic-2 notion");
        let q = self.ctx.q as u128;
        let space = q.checked_pow(self.n as u32);
        let enumerable = matches!(space, Some(s) if s <= 10_000_000);
        let degenerate = !self.is_nondegenerate();
        let count = if enumerable {
            Some(BigUint::from(self.count_zeros_enumerated()))
        } else if degenerate {
            None
        } else {
            None // filled in below from the split type
        };
        if degenerate {
            return (FormType::Degenerate, count);
        }
        if self.n % 2 != 0 {
            // Odd dimension with nonsingular polar cannot happen in char 2
            // (alternating forms have even rank), so this is unreachable;
            // kept as a guard.
            return (FormType::Degenerate, count);
        }
        let ty = match self.split_planes() {
            Some((planes, _)) => {
                let minus_count = planes
                    .iter()
                    .filter(|p| self.ctx.abs_trace(self.ctx.mul(p.alpha, p.beta)) == 1)
                    .count();
                if minus_count % 2 == 0 {
                    FormType::Plus
                } else {
                    FormType::Minus
                }
            }
            None => return (FormType::Degenerate, count),
        };
        let count = match count {
            Some(c) => {
                // Cross-check the closed formula against the enumeration.
                debug_assert_eq!(c, zero_count_formula(self.ctx.q, self.n, ty));
                Some(c)
            }
            None => Some(zero_count_formula(self.ctx.q, self.n, ty)),
        };
        (ty, count)
    }

    fn count_zeros_enumerated(&self) -> u64 {
        let q = self.ctx.q;
        let total = (q as u128).pow(self.n as u32) as u64;
        let mut zeros = 0u64;
        let mut x = vec![FieldElem::ZERO; self.n];
        for code in 0..total {
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = FieldElem((c % q) as u32);
                c /= q;
            }
            if self.eval(&x).is_zero() {
                zeros += 1;
            }
        }
        zeros
    }

    /// Split a nondegenerate char-2 form into polar-orthogonal planes
    /// `(x, y)` with `B(x,y) = 1`, returning plane data and the basis
    /// vectors. `None` when the polar form is degenerate.
    fn split_planes(&self) -> Option<(Vec<Plane>, ())> {
        let p = self.polar();
        let s = symplectic_basis(&p)?;
        // Columns are (v_1..v_m, u_m..u_1): plane i pairs columns (i, n−1−i).
        let m = self.n / 2;
        let mut planes = Vec::with_capacity(m);
        for i in 0..m {
            let x = s.col(i);
            let y = s.col(self.n - 1 - i);
            planes.push(Plane {
                alpha: self.eval(&x),
                beta: self.eval(&y),
                x,
                y,
            });
        }
        Some((planes, ()))
    }

    /// A basis change `S` with `F(S·x) = F_std(x)` where `F_std` is the
    /// standard form of this form's type ([`standard_form`]). `None` when the
    /// form is degenerate. Characteristic 2 only.
    pub fn standardize(&self) -> Option<Mat> {
        assert_eq!(self.ctx.p, 2, "standardization is implemented for characteristic 2");
        let ctx = &self.ctx;
        let n = self.n;
        if n % 2 != 0 {
            return None;
        }
        let m = n / 2;
        let (mut planes, ()) = self.split_planes()?;

        // Pair up minus-type planes and merge each pair into plus planes.
        let minus_idx: Vec<usize> = (0..planes.len())
            .filter(|&i| self.plane_is_minus(&planes[i]))
            .collect();
        for pair in minus_idx.chunks(2) {
            if let [a, b] = *pair {
                let (p1, p2) = (planes[a].clone(), planes[b].clone());
                let (new_a, new_b) = self.merge_minus_planes(&p1, &p2);
                planes[a] = new_a;
                planes[b] = new_b;
            }
        }

        // Normalize: every plus plane to the hyperbolic (0, 0) shape; the
        // lone minus plane (if any) to (1, μ_std).
        let mut hyperbolic: Vec<Plane> = Vec::new();
        let mut minus_plane: Option<Plane> = None;
        for plane in planes {
            if self.plane_is_minus(&plane) {
                debug_assert!(minus_plane.is_none(), "more than one minus plane after merging");
                minus_plane = Some(self.normalize_minus(&plane));
            } else {
                hyperbolic.push(self.normalize_plus(&plane));
            }
        }

        // Assemble columns in the standard layout: hyperbolic pair j at
        // columns (j, n−1−j); the minus plane at the middle (m−1, m).
        let mut cols: Vec<Option<Vec<FieldElem>>> = vec![None; n];
        let mut slots: Vec<usize> = (0..m).collect();
        if minus_plane.is_some() {
            slots.pop(); // middle slot (m−1, m) is reserved for the minus plane
        }
        for (plane, slot) in hyperbolic.iter().zip(&slots) {
            cols[*slot] = Some(plane.x.clone());
            cols[n - 1 - slot] = Some(plane.y.clone());
        }
        if let Some(p) = &minus_plane {
            cols[m - 1] = Some(p.x.clone());
            cols[m] = Some(p.y.clone());
        }
        let cols: Vec<Vec<FieldElem>> = cols.into_iter().map(|c| c.unwrap()).collect();
        let s = Mat::from_cols(ctx, &cols);
        // Defensive: the pulled-back form must be the literal standard form.
        let sign = if minus_plane.is_some() {
            FormSign::Minus
        } else {
            FormSign::Plus
        };
        debug_assert_eq!(
            self.transform(&s),
            standard_form(sign, n, ctx).expect("standard form exists"),
        );
        Some(s)
    }

    fn plane_is_minus(&self, p: &Plane) -> bool {
        self.ctx.abs_trace(self.ctx.mul(p.alpha, p.beta)) == 1
    }

    /// Witt step: two anisotropic planes combine into a hyperbolic plane and
    /// a plus plane. Given minus planes (x₁,y₁) and (x₂,y₂) with values
    /// (α₁,β₁), (α₂,β₂): `v = α₁^{-1/2}x₁ + α₂^{-1/2}x₂` is isotropic,
    /// `u = α₁^{1/2}y₁ + α₁β₁·v` completes a hyperbolic pair, and the
    /// orthogonal complement inside the 4-space is spanned by `x₂` and
    /// `(α₂/α₁)^{1/2}y₁ + y₂` (rescaled to unit pairing).
    fn merge_minus_planes(&self, p1: &Plane, p2: &Plane) -> (Plane, Plane) {
        let ctx = &self.ctx;
        let a1 = ctx.inv(ctx.sqrt_char2(p1.alpha));
        let a2 = ctx.inv(ctx.sqrt_char2(p2.alpha));
        let v = add_scaled(ctx, &scale(ctx, &p1.x, a1), &p2.x, a2);
        let mut u = scale(ctx, &p1.y, ctx.sqrt_char2(p1.alpha));
        let fu = self.eval(&u);
        u = add_scaled(ctx, &u, &v, fu);
        debug_assert!(self.eval(&v).is_zero() && self.eval(&u).is_zero());
        debug_assert_eq!(self.polar_eval(&v, &u), FieldElem::ONE);

        let w1 = p2.x.clone();
        // w₂ = a₂·y₁ + a₁·y₂ has pairing a₁ with w₁; scale to unit pairing.
        let w2_raw = add_scaled(ctx, &scale(ctx, &p1.y, a2), &p2.y, a1);
        let w2 = scale(ctx, &w2_raw, ctx.inv(a1));
        debug_assert_eq!(self.polar_eval(&w1, &w2), FieldElem::ONE);
        let hyper = Plane {
            alpha: FieldElem::ZERO,
            beta: FieldElem::ZERO,
            x: v,
            y: u,
        };
        let rest = Plane {
            alpha: self.eval(&w1),
            beta: self.eval(&w2),
            x: w1,
            y: w2,
        };
        debug_assert!(!self.plane_is_minus(&rest), "residual plane must be plus type");
        (hyper, rest)
    }

    /// Bring a plus plane (Tr(αβ) = 0) to the hyperbolic shape F(x)=F(y)=0,
    /// B(x,y)=1.
    fn normalize_plus(&self, p: &Plane) -> Plane {
        let ctx = &self.ctx;
        let (iso, other) = if p.alpha.is_zero() {
            (p.x.clone(), p.y.clone())
        } else if p.beta.is_zero() {
            (p.y.clone(), p.x.clone())
        } else {
            // F(y + c·x) = β + c²α + c = 0 ⟺ (cα)² + (cα) = αβ.
            let s = ctx
                .artin_schreier_root(ctx.mul(p.alpha, p.beta))
                .expect("plus plane has trace-zero αβ");
            let c = ctx.div(s, p.alpha);
            (add_scaled(ctx, &p.y, &p.x, c), p.x.clone())
        };
        // Partner: other + F(other)·iso is isotropic with unit pairing.
        let scale_pair = self.polar_eval(&iso, &other);
        let other = scale(ctx, &other, ctx.inv(scale_pair));
        let fo = self.eval(&other);
        let partner = add_scaled(ctx, &other, &iso, fo);
        debug_assert!(self.eval(&iso).is_zero() && self.eval(&partner).is_zero());
        debug_assert_eq!(self.polar_eval(&iso, &partner), FieldElem::ONE);
        Plane {
            alpha: FieldElem::ZERO,
            beta: FieldElem::ZERO,
            x: iso,
            y: partner,
        }
    }

    /// Bring a minus plane to the standard shape (α, β) = (1, μ_std).
    fn normalize_minus(&self, p: &Plane) -> Plane {
        let ctx = &self.ctx;
        let mu = minus_constant(ctx);
        // e' = α^{-1/2}·x has F = 1; f₀ = α^{1/2}·y has unit pairing with e'.
        let e = scale(ctx, &p.x, ctx.inv(ctx.sqrt_char2(p.alpha)));
        let f0 = scale(ctx, &p.y, ctx.sqrt_char2(p.alpha));
        // f' = f₀ + c·e' with c² + c = μ + αβ (trace 0, always solvable).
        let target = ctx.add(mu, ctx.mul(p.alpha, p.beta));
        let c = ctx
            .artin_schreier_root(target)
            .expect("μ + αβ has absolute trace 0");
        let f = add_scaled(ctx, &f0, &e, c);
        debug_assert_eq!(self.eval(&e), FieldElem::ONE);
        debug_assert_eq!(self.eval(&f), mu);
        debug_assert_eq!(self.polar_eval(&e, &f), FieldElem::ONE);
        Plane {
            alpha: FieldElem::ONE,
            beta: mu,
            x: e,
            y: f,
        }
    }
}

impl std::fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let var = if i == j {
                    format!("x{}^2", i + 1)
                } else {
                    format!("x{}*x{}", i + 1, j + 1)
                };
                if c == FieldElem::ONE {
                    terms.push(var);
                } else {
                    terms.push(format!("[{}]{}", c.0, var));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Clone)]
struct Plane {
    alpha: FieldElem,
    beta: FieldElem,
    x: Vec<FieldElem>,
    y: Vec<FieldElem>,
}

fn scale(ctx: &Arc<FieldCtx>, v: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    v.iter().map(|&a| ctx.mul(a, c)).collect()
}

fn add_scaled(
    ctx: &Arc<FieldCtx>,
    v: &[FieldElem],
    w: &[FieldElem],
    c: FieldElem,
) -> Vec<FieldElem> {
    v.iter()
        .zip(w)
        .map(|(&a, &b)| ctx.add(a, ctx.mul(c, b)))
        .collect()
}

/// Zero count of a nondegenerate form: `q^{n−1} + ε(q^{n/2} − q^{n/2−1})`.
fn zero_count_formula(q: u64, n: usize, ty: FormType) -> BigUint {
    let q = BigUint::from(q);
    let base = q.pow(n as u32 - 1);
    let bump = q.pow(n as u32 / 2) - q.pow(n as u32 / 2 - 1);
    match ty {
        FormType::Plus => base + bump,
        FormType::Minus => base - bump,
        FormType::Degenerate => unreachable!("no closed count for degenerate forms"),
    }
}

/// The least field element of absolute trace 1 — the constant making
/// `x² + x + μ` irreducible, used by the minus-type standard form.
pub fn minus_constant(ctx: &Arc<FieldCtx>) -> FieldElem {
    ctx.elements()
        .find(|&e| ctx.abs_trace(e) == 1)
        .expect("the absolute trace is surjective onto F_2")
}

/// The standard plus/minus form on `ctx^n` (n even, characteristic 2):
/// `F⁺ = Σ_{i=1}^{m} x_i x_{n+1−i}` and
/// `F⁻ = Σ_{i=1}^{m−1} x_i x_{n+1−i} + x_m² + x_m x_{m+1} + μ x_{m+1}²`.
pub fn standard_form(
    sign: FormSign,
    n: usize,
    ctx: &Arc<FieldCtx>,
) -> Result<QuadForm, QFormError> {
    if n % 2 != 0 || n == 0 {
        return Err(QFormError::OddDimension(n));
    }
    if ctx.p != 2 {
        return Err(QFormError::OddCharacteristic(ctx.p));
    }
    let m = n / 2;
    let mut f = QuadForm::zero(ctx, n);
    match sign {
        FormSign::Plus => {
            for i in 0..m {
                f.set_coeff(i, n - 1 - i, FieldElem::ONE);
            }
        }
        FormSign::Minus => {
            for i in 0..m - 1 {
                f.set_coeff(i, n - 1 - i, FieldElem::ONE);
            }
            f.set_coeff(m - 1, m - 1, FieldElem::ONE);
            f.set_coeff(m - 1, m, FieldElem::ONE);
            f.set_coeff(m, m, minus_constant(ctx));
        }
    }
    Ok(f)
}

/// Basis of the space of quadratic forms invariant under every generator:
/// `{F : F(g·x) = F(x) for all g}`, solved exactly on the `n(n+1)/2`
/// coefficients.
pub fn invariant_forms(gens: &[Mat]) -> Vec<QuadForm> {
    assert!(!gens.is_empty());
    let n = gens[0].rows();
    let ctx = gens[0].ctx();
    // Variables: (i, j) with i ≤ j, lexicographic.
    let vars: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    let var_pos = |i: usize, j: usize| -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * (2 * n - i + 1) / 2 + (j - i)
    };
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for g in gens {
        // The transform of the basis monomial x_i x_j under g contributes
        // g_{ik}g_{jl} + g_{il}g_{jk} to the (k<l) coefficient and
        // g_{ik}g_{jk} to the (k,k) coefficient.
        for &(k, l) in &vars {
            let mut row = vec![FieldElem::ZERO; vars.len()];
            for &(i, j) in &vars {
                let c = if k == l {
                    ctx.mul(g.get(i, k), g.get(j, k))
                } else if i == j {
                    // x_i² pulls back with coefficient 2·g_{ik}g_{il} on x_k x_l
                    // (which vanishes in characteristic 2).
                    let a = ctx.mul(g.get(i, k), g.get(i, l));
                    ctx.add(a, a)
                } else {
                    let a = ctx.mul(g.get(i, k), g.get(j, l));
                    let b = ctx.mul(g.get(i, l), g.get(j, k));
                    ctx.add(a, b)
                };
                if !c.is_zero() {
                    row[var_pos(i, j)] = ctx.add(row[var_pos(i, j)], c);
                }
            }
            // Subtract the identity transform.
            let p = var_pos(k, l);
            row[p] = ctx.sub(row[p], FieldElem::ONE);
            rows.push(row);
        }
    }
    let m = Mat::from_fn(ctx, rows.len(), vars.len(), |i, j| rows[i][j]);
    let sol = solve_linear(&m, &vec![FieldElem::ZERO; rows.len()]);
    sol.kernel
        .iter()
        .map(|coeffs| {
            let mut f = QuadForm::zero(ctx, n);
            for (k, &(i, j)) in vars.iter().enumerate() {
                f.set_coeff(i, j, coeffs[k]);
            }
            f
        })
        .collect()
}
