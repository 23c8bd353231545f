//! Matrices and polynomials over the small finite fields of [`crate::ff`].
//!
//! [`Mat`] is a rectangular matrix with two interchangeable storage layouts:
//! a generic row-major layout for every field, and a bit-packed layout (one
//! `u64` word per row) that switches on automatically over `F_2` when the
//! matrix has at most 64 columns. Equality and hashing are *logical* — two
//! matrices with the same entries compare equal regardless of layout.
//!
//! ```
//! use dworklab::ff::field_make;
//! use dworklab::linalg::Mat;
//!
//! let f2 = field_make(2, 1).unwrap();
//! let a = Mat::from_int_rows(&f2, &[vec![1, 1], vec![0, 1]]);
//! assert_eq!(a.pow(2), Mat::from_int_rows(&f2, &[vec![1, 0], vec![0, 1]]));
//! ```
//!
//! The module also houses the symplectic toolkit used by the monodromy
//! classifier: the block anti-diagonal Gram matrix [`symplectic_j`], the
//! similitude test [`is_symplectic`], a symplectic-basis construction
//! [`symplectic_basis`], and the solver [`invariant_alternating_forms`] for
//! the alternating bilinear forms preserved by a set of generators.

use crate::ff::{FieldCtx, FieldElem};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Mat
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum Repr {
    /// Row-major entries, length rows × cols.
    Dense(Vec<FieldElem>),
    /// One word per row; bit `j` of word `i` is entry `(i, j)`. Only for
    /// `p = 2`, `r = 1`, `cols ≤ 64`.
    Packed(Vec<u64>),
}

/// A matrix over a fixed [`FieldCtx`]. Immutable value semantics: all
/// operations return new matrices.
#[derive(Clone)]
pub struct Mat {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    repr: Repr,
}

impl Mat {
    fn packable(ctx: &FieldCtx, cols: usize) -> bool {
        ctx.p == 2 && ctx.r == 1 && cols <= 64
    }

    /// All-zero matrix.
    pub fn zero(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Mat {
        assert!(rows >= 1 && cols >= 1, "matrices must be at least 1x1");
        let repr = if Self::packable(ctx, cols) {
            Repr::Packed(vec![0u64; rows])
        } else {
            Repr::Dense(vec![FieldElem::ZERO; rows * cols])
        };
        Mat {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            repr,
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Mat {
        let mut m = Mat::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Matrix from integer rows (entries reduced into the prime field).
    pub fn from_int_rows(ctx: &Arc<FieldCtx>, rows: &[Vec<i64>]) -> Mat {
        assert!(!rows.is_empty(), "need at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let mut m = Mat::zero(ctx, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ctx.elem_from_int(v));
            }
        }
        m
    }

    /// Matrix with entry `(i, j)` given by `f(i, j)`.
    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Mat {
        let mut m = Mat::zero(ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Square matrix of the permutation sending `e_i` to `e_{perm[i]}`
    /// (so column `i` has its 1 in row `perm[i]`).
    pub fn perm_matrix(ctx: &Arc<FieldCtx>, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zero(ctx, n, n);
        for (i, &pi) in perm.iter().enumerate() {
            assert!(pi < n, "permutation image out of range");
            m.set(pi, i, FieldElem::ONE);
        }
        m
    }

    /// Companion matrix of a monic polynomial of degree ≥ 1: ones on the
    /// subdiagonal and the negated coefficients down the last column, so its
    /// characteristic polynomial is the given polynomial.
    pub fn companion(poly: &Poly) -> Mat {
        let n = poly.degree().expect("companion of the zero polynomial");
        assert!(n >= 1, "companion needs degree ≥ 1");
        assert!(poly.is_monic(), "companion needs a monic polynomial");
        let ctx = poly.ctx().clone();
        Mat::from_fn(&ctx, n, n, |i, j| {
            if j + 1 == n {
                ctx.sub(FieldElem::ZERO, poly.coeff(i))
            } else if i == j + 1 {
                FieldElem::ONE
            } else {
                FieldElem::ZERO
            }
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Is this matrix in the bit-packed layout?
    pub fn is_packed(&self) -> bool {
        matches!(self.repr, Repr::Packed(_))
    }

    /// The packed row words, when in packed layout.
    pub fn packed_rows(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Packed(w) => Some(w),
            Repr::Dense(_) => None,
        }
    }

    /// Re-encode into the generic layout (for exercising the generic code
    /// paths; the packed layout is the default whenever it applies).
    pub fn to_dense_forced(&self) -> Mat {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries.push(self.get(i, j));
            }
        }
        Mat {
            ctx: Arc::clone(&self.ctx),
            rows: self.rows,
            cols: self.cols,
            repr: Repr::Dense(entries),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        debug_assert!(i < self.rows && j < self.cols);
        match &self.repr {
            Repr::Dense(e) => e[i * self.cols + j],
            Repr::Packed(w) => FieldElem(((w[i] >> j) & 1) as u32),
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!((v.0 as u64) < self.ctx.q);
        match &mut self.repr {
            Repr::Dense(e) => e[i * self.cols + j] = v,
            Repr::Packed(w) => {
                if v.0 & 1 == 1 {
                    w[i] |= 1u64 << j;
               } else {
                    w[i] &= !(1u64 << j);
                }
            }
        }
    }

    fn assert_same_field(&self, other: &Mat) {
        assert!(
            self.ctx.p == other.ctx.p
                && self.ctx.r == other.ctx.r
                && self.ctx.modulus == other.ctx.modulus,
            "matrices over different fields"
        );
    }

    /// Matrix product.
    pub fn mul(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        if let (Repr::Packed(a), Repr::Packed(b)) = (&self.repr, &other.repr) {
            let mut words = vec![0u64; self.rows];
            for (i, w) in words.iter_mut().enumerate() {
                let mut bits = a[i];
                let mut acc = 0u64;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= b[j];
                    bits &= bits - 1;
                }
                *w = acc;
            }
            return Mat {
                ctx: Arc::clone(&self.ctx),
                rows: self.rows,
                cols: other.cols,
                repr: Repr::Packed(words),
            };
        }
        let ctx = &self.ctx;
        let mut out = Mat::zero(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = ctx.mul(aik, other.get(k, j));
                    if !prod.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, ctx.add(cur, prod));
                    }
                }
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols);
        if let (Repr::Packed(a), Repr::Packed(b)) = (&self.repr, &other.repr) {
            let words = a.iter().zip(b).map(|(x, y)| x ^ y).collect();
            return Mat {
                ctx: Arc::clone(&self.ctx),
                rows: self.rows,
                cols: self.cols,
                repr: Repr::Packed(words),
            };
        }
        Mat::from_fn(&self.ctx, self.rows, self.cols, |i, j| {
            self.ctx.add(self.get(i, j), other.get(i, j))
        })
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Mat) -> Mat {
        if self.ctx.p == 2 {
            return self.add(other);
        }
        self.assert_same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat::from_fn(&self.ctx, self.rows, self.cols, |i, j| {
            self.ctx.sub(self.get(i, j), other.get(i, j))
        })
    }

    /// Scalar multiple.
    pub fn scalar_mul(&self, c: FieldElem) -> Mat {
        Mat::from_fn(&self.ctx, self.rows, self.cols, |i, j| {
            self.ctx.mul(c, self.get(i, j))
        })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `self^e` by binary exponentiation (`e = 0` gives the identity).
    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square(), "powers need a square matrix");
        let mut result = Mat::identity(&self.ctx, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Packed(w) => w.iter().all(|&x| x == 0),
            Repr::Dense(e) => e.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { FieldElem::ONE } else { FieldElem::ZERO };
                if self.get(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Multiplicative order by iterated multiplication, `None` if it exceeds
    /// `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        assert!(self.is_square());
        let mut g = self.clone();
        for k in 1..=cap {
            if g.is_identity() {
                return Some(k);
            }
            g = g.mul(self);
        }
        None
    }

    /// Apply to a coordinate vector: `self · v`.
    pub fn apply(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = FieldElem::ZERO;
                for (j, &vj) in v.iter().enumerate() {
                    if !vj.is_zero() {
                        acc = ctx.add(acc, ctx.mul(self.get(i, j), vj));
                    }
                }
                acc
            })
            .collect()
    }

    /// Apply a packed matrix to a bit-packed vector (`bit j` = coordinate `j`).
    pub fn apply_bits(&self, v: u64) -> u64 {
        match &self.repr {
            Repr::Packed(w) => {
                let mut out = 0u64;
                for (i, &row) in w.iter().enumerate() {
                    out |= (((row & v).count_ones() & 1) as u64) << i;
                }
                out
            }
            Repr::Dense(_) => panic!("apply_bits requires the packed layout"),
        }
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ctx: &Arc<FieldCtx>, cols: &[Vec<FieldElem>]) -> Mat {
        assert!(!cols.is_empty());
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        Mat::from_fn(ctx, rows, cols.len(), |i, j| cols[j][i])
    }

    /// Inverse, or `None` when singular.
    pub fn inv(&self) -> Option<Mat> {
        assert!(self.is_square(), "only square matrices invert");
        let n = self.rows;
        if let Repr::Packed(w) = &self.repr {
            // Gauss-Jordan on row words, mirroring every operation on an
            // identity block.
            let mut left = w.clone();
            let mut right: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            for j in 0..n {
                let pivot = (j..n).find(|&i| left[i] >> j & 1 == 1)?;
                left.swap(j, pivot);
                right.swap(j, pivot);
                for i in 0..n {
                    if i != j && left[i] >> j & 1 == 1 {
                        left[i] ^= left[j];
                        right[i] ^= right[j];
                    }
                }
            }
            return Some(Mat {
                ctx: Arc::clone(&self.ctx),
                rows: n,
                cols: n,
                repr: Repr::Packed(right),
            });
        }
        // Generic Gauss-Jordan.
        let ctx = &self.ctx;
        let mut a: Vec<Vec<FieldElem>> = (0..n).map(|i| self.col_major_row(i)).collect();
        let mut b: Vec<Vec<FieldElem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO })
                    .collect()
            })
            .collect();
        for j in 0..n {
            let pivot = (j..n).find(|&i| !a[i][j].is_zero())?;
            a.swap(j, pivot);
            b.swap(j, pivot);
            let inv_p = ctx.inv(a[j][j]);
            for c in 0..n {
                a[j][c] = ctx.mul(a[j][c], inv_p);
                b[j][c] = ctx.mul(b[j][c], inv_p);
            }
            for i in 0..n {
                if i != j && !a[i][j].is_zero() {
                    let f = a[i][j];
                    for c in 0..n {
                        let s = ctx.mul(f, a[j][c]);
                        a[i][c] = ctx.sub(a[i][c], s);
                        let s = ctx.mul(f, b[j][c]);
                        b[i][c] = ctx.sub(b[i][c], s);
                    }
                }
            }
        }
        let mut out = Mat::zero(ctx, n, n);
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }

    fn col_major_row(&self, i: usize) -> Vec<FieldElem> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// Determinant by elimination.
    pub fn det(&self) -> FieldElem {
        assert!(self.is_square());
        let ctx = &self.ctx;
        let n = self.rows;
        let mut a: Vec<Vec<FieldElem>> = (0..n).map(|i| self.col_major_row(i)).collect();
        let mut det = FieldElem::ONE;
        for j in 0..n {
            let pivot = match (j..n).find(|&i| !a[i][j].is_zero()) {
                Some(p) => p,
                None => return FieldElem::ZERO,
            };
            if pivot != j {
                a.swap(j, pivot);
                det = ctx.neg(det);
            }
            det = ctx.mul(det, a[j][j]);
            let inv_p = ctx.inv(a[j][j]);
            for i in j + 1..n {
                if !a[i][j].is_zero() {
                    let f = ctx.mul(a[i][j], inv_p);
                    for c in j..n {
                        let s = ctx.mul(f, a[j][c]);
                        a[i][c] = ctx.sub(a[i][c], s);
                    }
                }
            }
        }
        det
    }

    /// Rank by elimination.
    pub fn rank(&self) -> usize {
        let ctx = &self.ctx;
        let mut a: Vec<Vec<FieldElem>> = (0..self.rows).map(|i| self.col_major_row(i)).collect();
        let mut rank = 0;
        for j in 0..self.cols {
            let pivot = match (rank..self.rows).find(|&i| !a[i][j].is_zero()) {
                Some(p) => p,
                None => continue,
            };
            a.swap(rank, pivot);
            let inv_p = ctx.inv(a[rank][j]);
            for i in 0..self.rows {
                if i != rank && !a[i][j].is_zero() {
                    let f = ctx.mul(a[i][j], inv_p);
                    for c in 0..self.cols {
                        let s = ctx.mul(f, a[rank][c]);
                        a[i][c] = ctx.sub(a[i][c], s);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Characteristic polynomial `det(xI − g)`, monic of degree `n`, via
    /// similarity reduction to upper Hessenberg form and the standard
    /// last-column expansion recurrence (division-free except by pivots,
    /// valid over every field).
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let ctx = &self.ctx;
        let n = self.rows;
        let mut h: Vec<Vec<FieldElem>> = (0..n).map(|i| self.col_major_row(i)).collect();

        // Reduce to upper Hessenberg by similarity transformations.
        for j in 0..n.saturating_sub(2) {
            let pivot = match (j + 1..n).find(|&i| !h[i][j].is_zero()) {
                Some(p) => p,
                None => continue,
            };
            if pivot != j + 1 {
                h.swap(j + 1, pivot);
                for row in h.iter_mut() {
                    row.swap(j + 1, pivot);
                }
            }
            let inv_p = ctx.inv(h[j + 1][j]);
            for i in j + 2..n {
                if h[i][j].is_zero() {
                    continue;
                }
                let f = ctx.mul(h[i][j], inv_p);
                // row_i -= f * row_{j+1}
                for c in 0..n {
                    let s = ctx.mul(f, h[j + 1][c]);
                    h[i][c] = ctx.sub(h[i][c], s);
                }
                // col_{j+1} += f * col_i  (the compensating similarity)
                for r in 0..n {
                    let s = ctx.mul(f, h[r][i]);
                    h[r][j + 1] = ctx.add(h[r][j + 1], s);
                }
            }
        }

        // p_k = charpoly of the leading k×k block.
        let mut p: Vec<Poly> = vec![Poly::one(ctx)];
        for k in 1..=n {
            let lin = Poly::new(ctx, vec![ctx.neg(h[k - 1][k - 1]), FieldElem::ONE]);
            let mut acc = p[k - 1].mul(&lin);
            let mut prod = FieldElem::ONE;
            for m in 1..k {
                prod = ctx.mul(prod, h[k - m][k - m - 1]);
                if prod.is_zero() {
                    break;
                }
                let coef = ctx.mul(h[k - 1 - m][k - 1], prod);
                if !coef.is_zero() {
                    acc = acc.sub(&p[k - 1 - m].scalar_mul(coef));
                }
            }
            p.push(acc);
        }
        p.pop().unwrap()
    }

    /// Is this a transvection: `rank(g − I) = 1` and `(g − I)² = 0`?
    pub fn is_transvection(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let d = self.sub(&Mat::identity(&self.ctx, self.rows));
        d.rank() == 1 && d.mul(&d).is_zero()
    }
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows
            || self.cols != other.cols
            || self.ctx.p != other.ctx.p
            || self.ctx.r != other.ctx.r
            || self.ctx.modulus != other.ctx.modulus
        {
            return false;
        }
        if let (Repr::Packed(a), Repr::Packed(b)) = (&self.repr, &other.repr) {
            return a == b;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) != other.get(i, j) {
                    return false;
                }
            }
        }
        true
    }
}
impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        if Self::packable(&self.ctx, self.cols) {
            // Canonical word-per-row hashing, layout-independent.
            match &self.repr {
                Repr::Packed(w) => {
                    for &word in w {
                        word.hash(state);
                    }
                }
                Repr::Dense(_) => {
                    for i in 0..self.rows {
                        let mut word = 0u64;
                        for j in 0..self.cols {
                            word |= ((self.get(i, j).0 & 1) as u64) << j;
                        }
                        word.hash(state);
                    }
                }
            }
        } else {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    self.get(i, j).0.hash(state);
                }
            }
        }
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}^{} [", self.rows, self.cols, self.ctx.p, self.ctx.r)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j).0)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Symplectic toolkit
// ---------------------------------------------------------------------------

/// The standard Gram matrix `J_{2m}`: block anti-diagonal with the
/// anti-identity `s_m` in the upper-right block and `−s_m` in the lower-left
/// block. Over `F_2` this is the full anti-diagonal of ones.
pub fn symplectic_j(ctx: &Arc<FieldCtx>, m: usize) -> Mat {
    let n = 2 * m;
    let mut j = Mat::zero(ctx, n, n);
    for i in 0..m {
        // upper-right s_m: rows 0..m, columns m..2m, anti-diagonal.
        j.set(i, n - 1 - i, FieldElem::ONE);
        // lower-left −s_m.
        j.set(n - 1 - i, i, ctx.neg(FieldElem::ONE));
    }
    j
}

/// Does `g` preserve the alternating Gram matrix `j` up to a scalar?
/// Returns the similitude multiplier `μ` with `gᵀ j g = μ j` (`μ = 1` means
/// `g` is symplectic), or `None` when no such nonzero scalar exists.
pub fn is_symplectic(g: &Mat, j: &Mat) -> Option<FieldElem> {
    assert!(g.is_square() && j.is_square() && g.rows() == j.rows());
    let ctx = g.ctx();
    let m = g.transpose().mul(j).mul(g);
    // Locate a nonzero reference entry of j.
    let mut mu = None;
    for a in 0..j.rows() {
        for b in 0..j.cols() {
            let jv = j.get(a, b);
            if !jv.is_zero() {
                let found = ctx.div(m.get(a, b), jv);
                if found.is_zero() {
                    return None;
                }
                mu = Some(found);
                break;
            }
        }
        if mu.is_some() {
            break;
        }
    }
    let mu = mu?;
    if m == j.scalar_mul(mu) {
        Some(mu)
    } else {
        None
    }
}

/// For a nondegenerate alternating bilinear form with Gram matrix `x`,
/// produce `s` with `sᵀ x s = J` (the convention of [`symplectic_j`]).
/// Returns `None` when `x` is not alternating or is degenerate.
pub fn symplectic_basis(x: &Mat) -> Option<Mat> {
    assert!(x.is_square());
    let n = x.rows();
    if n % 2 != 0 {
        return None;
    }
    let ctx = x.ctx();
    // Alternating: zero diagonal and skew-symmetry.
    for i in 0..n {
        if !x.get(i, i).is_zero() {
            return None;
        }
        for j in 0..n {
            if x.get(i, j) != ctx.neg(x.get(j, i)) {
                return None;
            }
        }
    }
    let form = |u: &[FieldElem], v: &[FieldElem]| -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for (i, &ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc = ctx.add(acc, ctx.mul(ctx.mul(ui, x.get(i, j)), vj));
                }
            }
        }
        acc
    };
    let mut working: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO })
                .collect()
        })
        .collect();
    let mut vs: Vec<Vec<FieldElem>> = Vec::new();
    let mut us: Vec<Vec<FieldElem>> = Vec::new();
    while !working.is_empty() {
        // Find a hyperbolic pair inside the working set.
        let mut pair = None;
        'outer: for a in 0..working.len() {
            for b in 0..working.len() {
                if a != b && !form(&working[a], &working[b]).is_zero() {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = pair?; // all-zero pairing on a nonempty set: degenerate
        let v = working[a].clone();
        let mut u = working[b].clone();
        let scale = ctx.inv(form(&v, &u));
        for e in u.iter_mut() {
            *e = ctx.mul(*e, scale);
        }
        // Project the rest into the orthogonal complement of span(v, u):
        // w ← w − ⟨w,u⟩v + ⟨w,v⟩u   (using ⟨v,u⟩ = 1).
        let keep: Vec<Vec<FieldElem>> = working
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, w)| {
                let wu = form(w, &u);
                let wv = form(w, &v);
                let mut out = w.clone();
                for i in 0..n {
                    let t1 = ctx.mul(wu, v[i]);
                    let t2 = ctx.mul(wv, u[i]);
                    out[i] = ctx.add(ctx.sub(out[i], t1), t2);
                }
                out
            })
            .collect();
        vs.push(v);
        us.push(u);
        working = keep;
    }
    // Column order (v_1, ..., v_m, u_m, ..., u_1) matches the J convention.
    let mut cols = vs;
    let us_rev: Vec<Vec<FieldElem>> = us.into_iter().rev().collect();
    cols.extend(us_rev);
    let s = Mat::from_cols(ctx, &cols);
    // The construction guarantees the Gram identity; verify defensively.
    let j = symplectic_j(ctx, n / 2);
    debug_assert_eq!(s.transpose().mul(x).mul(&s), j);
    Some(s)
}

/// Basis of the space of alternating bilinear forms `X` (zero diagonal,
/// `Xᵀ = −X`) with `gᵀ X g = X` for every generator.
pub fn invariant_alternating_forms(gens: &[Mat]) -> Vec<Mat> {
    assert!(!gens.is_empty());
    let n = gens[0].rows();
    assert!(gens.iter().all(|g| g.is_square() && g.rows() == n));
    let ctx = gens[0].ctx();
    // Unknowns: x_{ij} for i < j, in lexicographic order.
    let vars: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let var_index = |i: usize, j: usize| -> (usize, bool) {
        // Returns (index, negated): X[i][j] = ±x_{min,max}.
        if i < j {
            (vars.iter().position(|&(a, b)| (a, b) == (i, j)).unwrap(), false)
        } else {
            (vars.iter().position(|&(a, b)| (a, b) == (j, i)).unwrap(), true)
        }
    };
    // One equation per generator per (a < b): (gᵀXg)[a][b] − X[a][b] = 0.
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for g in gens {
        for &(a, b) in &vars {
            let mut row = vec![FieldElem::ZERO; vars.len()];
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    // Coefficient of X[i][j] in (gᵀXg)[a][b] is g[i][a]·g[j][b].
                    let c = ctx.mul(g.get(i, a), g.get(j, b));
                    if c.is_zero() {
                        continue;
                    }
                    let (idx, negated) = var_index(i, j);
                    let signed = if negated { ctx.neg(c) } else { c };
                    row[idx] = ctx.add(row[idx], signed);
                }
            }
            let (idx, negated) = var_index(a, b);
            debug_assert!(!negated);
            row[idx] = ctx.sub(row[idx], FieldElem::ONE);
            rows.push(row);
        }
    }
    let m = Mat::from_fn(ctx, rows.len(), vars.len(), |i, j| rows[i][j]);
    let sol = solve_linear(&m, &vec![FieldElem::ZERO; rows.len()]);
    sol.kernel
        .iter()
        .map(|coeffs| {
            let mut x = Mat::zero(ctx, n, n);
            for (k, &(i, j)) in vars.iter().enumerate() {
                x.set(i, j, coeffs[k]);
                x.set(j, i, ctx.neg(coeffs[k]));
            }
            x
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Linear systems
// ---------------------------------------------------------------------------

/// The solution set of `M·x = b`: a particular solution (if consistent) and a
/// basis of the kernel of `M`. The full solution set is
/// `particular + span(kernel)`.
pub struct LinearSolution {
    pub particular: Option<Vec<FieldElem>>,
    pub kernel: Vec<Vec<FieldElem>>,
}

impl LinearSolution {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.kernel.is_empty()
    }
}

/// Solve the (possibly rectangular) system `M·x = b` by Gaussian elimination.
pub fn solve_linear(m: &Mat, b: &[FieldElem]) -> LinearSolution {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let ctx = m.ctx();
    let rows = m.rows();
    let cols = m.cols();
    // Augmented matrix.
    let mut a: Vec<Vec<FieldElem>> = (0..rows)
        .map(|i| {
            let mut row: Vec<FieldElem> = (0..cols).map(|j| m.get(i, j)).collect();
            row.push(b[i]);
            row
        })
        .collect();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for j in 0..cols {
        let pivot = match (r..rows).find(|&i| !a[i][j].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(r, pivot);
        let inv_p = ctx.inv(a[r][j]);
        for c in j..=cols {
            a[r][c] = ctx.mul(a[r][c], inv_p);
        }
        for i in 0..rows {
            if i != r && !a[i][j].is_zero() {
                let f = a[i][j];
                for c in j..=cols {
                    let s = ctx.mul(f, a[r][c]);
                    a[i][c] = ctx.sub(a[i][c], s);
                }
            }
        }
        pivot_col_of_row.push(j);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Consistency: a zero row with nonzero RHS means no solution.
    let consistent = (r..rows).all(|i| a[i][cols].is_zero());
    let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();

    let particular = if consistent {
        let mut x = vec![FieldElem::ZERO; cols];
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            x[pc] = a[row][cols];
        }
        Some(x)
    } else {
        None
    };

    let kernel = free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![FieldElem::ZERO; cols];
            v[fc] = FieldElem::ONE;
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = ctx.neg(a[row][fc]);
            }
            v
        })
        .collect();

    LinearSolution { particular, kernel }
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

/// A univariate polynomial over a [`FieldCtx`], coefficients low-to-high with
/// no trailing zeros (the zero polynomial has an empty coefficient list).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::new(ctx, Vec::new())
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::new(ctx, vec![FieldElem::ONE])
    }

    /// The monomial `x`.
    pub fn x(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::new(ctx, vec![FieldElem::ZERO, FieldElem::ONE])
    }

    /// Polynomial from integer coefficients (low-to-high), reduced mod `p`.
    pub fn from_ints(ctx: &Arc<FieldCtx>, ints: &[i64]) -> Poly {
        Poly::new(ctx, ints.iter().map(|&c| ctx.elem_from_int(c)).collect())
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElem::ONE
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.ctx.add(self.coeff(i), other.coeff(i)));
        }
        Poly::new(&self.ctx, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.ctx.sub(self.coeff(i), other.coeff(i)));
        }
        Poly::new(&self.ctx, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            &self.ctx,
            self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect(),
        )
    }

    pub fn scalar_mul(&self, c: FieldElem) -> Poly {
        Poly::new(
            &self.ctx,
            self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = self.ctx.add(out[i + j], self.ctx.mul(a, b));
                }
            }
        }
        Poly::new(&self.ctx, out)
    }

    /// Quotient and remainder (`other` nonzero).
    pub fn divmod(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let d = other.degree().unwrap();
        if self.degree().map_or(true, |sd| sd < d) {
            return (Poly::zero(&self.ctx), self.clone());
        }
        let ctx = &self.ctx;
        let lead_inv = ctx.inv(other.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElem::ZERO; rem.len() - d];
        for k in (d..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = ctx.mul(rem[k], lead_inv);
            quot[k - d] = f;
            for (i, &c) in other.coeffs.iter().enumerate() {
                let s = ctx.mul(f, c);
                rem[k - d + i] = ctx.sub(rem[k - d + i], s);
            }
        }
        (Poly::new(ctx, quot), Poly::new(ctx, rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to a monic polynomial (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scalar_mul(self.ctx.inv(self.leading()))
    }

    /// `self^e mod m` by binary exponentiation.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut result = Poly::one(&self.ctx);
        let (_, mut base) = self.divmod(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).divmod(m).1;
            }
            base = base.mul(&base).divmod(m).1;
            e >>= 1;
        }
        result
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.ctx);
        }
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                // multiply by (i+1) in the prime field
                self.ctx
                    .mul(c, self.ctx.elem_from_int((i + 1) as i64))
            })
            .collect();
        Poly::new(&self.ctx, out)
    }

    /// Evaluate at a point by Horner's rule.
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = self.ctx.add(self.ctx.mul(acc, x), c);
        }
        acc
    }

    /// Is the polynomial squarefree (coprime to its derivative, with the
    /// characteristic-p caveat handled: a vanishing derivative means a `p`-th
    /// power, hence not squarefree unless constant)?
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return false;
                }
                self.gcd(&d).degree() == Some(0)
            }
        }
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.0)?,
                1 => {
                    if c == FieldElem::ONE {
                        write!(f, "x")?
                    } else {
                        write!(f, "{}x", c.0)?
                    }
                }
                _ => {
                    if c == FieldElem::ONE {
                        write!(f, "x^{}", i)?
                    } else {
                        write!(f, "{}x^{}", c.0, i)?
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::field_make;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Arc<FieldCtx> {
        field_make(2, 1).unwrap()
    }

    /// The n = 4 companion matrix of (X−1)^4 over F_2 (a 4-cycle on basis
    /// vectors) and the companion matrix of 1 + X + X² + X³ + X⁴.
    fn dwork_pair_f2() -> (Mat, Mat) {
        let ctx = f2();
        let a = Mat::from_int_rows(
            &ctx,
            &[
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
            ],
        );
        let b = Mat::from_int_rows(
            &ctx,
            &[
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 1],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
            ],
        );
        (a, b)
    }

    #[test]
    fn identity_and_inverse() {
        let ctx = f2();
        let i4 = Mat::identity(&ctx, 4);
        assert_eq!(i4.mul(&i4), i4);

        let (a, _) = dwork_pair_f2();
        let a_inv = a.inv().unwrap();
        assert_eq!(a.mul(&a_inv), i4);
        assert_eq!(a_inv.mul(&a), i4);
        // A is a 4-cycle on basis vectors: its 4th power is the identity.
        assert_eq!(a.pow(4), i4);
        assert_eq!(a.order(100), Some(4));

        // Singular matrices have no inverse.
        let z = Mat::zero(&ctx, 3, 3);
        assert!(z.inv().is_none());
        let f5 = field_make(5, 1).unwrap();
        let s = Mat::from_int_rows(&f5, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inv().is_none());
        assert_eq!(s.rank(), 1);
        assert!(s.det().is_zero());
    }

    #[test]
    fn charpoly_examples() {
        // charpoly(I_2) = (x − 1)² over F_7: x² − 2x + 1.
        let f7 = field_make(7, 1).unwrap();
        let i2 = Mat::identity(&f7, 2);
        assert_eq!(i2.charpoly(), Poly::from_ints(&f7, &[1, -2, 1]));

        // Companion of (X−1)^4 over F_2: characteristic polynomial x⁴ + 1.
        let (a, b) = dwork_pair_f2();
        let ctx = f2();
        assert_eq!(a.charpoly(), Poly::from_ints(&ctx, &[1, 0, 0, 0, 1]));
        // Companion of the degree-4 all-ones polynomial: x⁴+x³+x²+x+1, the
        // characteristic polynomial of any 5-cycle in a 4-dimensional
        // standard representation.
        assert_eq!(b.charpoly(), Poly::from_ints(&ctx, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn companion_charpoly_round_trip() {
        // charpoly(companion(p)) = p for every monic p, including degree 1.
        let f4 = field_make(2, 2).unwrap();
        for code in 0..64u32 {
            let coeffs = vec![
                FieldElem(code & 3),
                FieldElem((code >> 2) & 3),
                FieldElem((code >> 4) & 3),
                FieldElem::ONE,
            ];
            let p = Poly::new(&f4, coeffs);
            assert_eq!(Mat::companion(&p).charpoly(), p);
        }
        let f7 = field_make(7, 1).unwrap();
        let linear = Poly::from_ints(&f7, &[3, 1]); // x + 3
        assert_eq!(Mat::companion(&linear), Mat::from_int_rows(&f7, &[vec![-3]]));
    }

    #[test]
    fn charpoly_of_permutation_matrices() {
        // The characteristic polynomial of a permutation matrix is the
        // product of x^c − 1 over its cycle lengths — an independent oracle
        // for the Hessenberg computation.
        let cases: Vec<(Vec<usize>, Vec<usize>)> = vec![
            (vec![1, 2, 0, 3, 4], vec![3, 1, 1]),         // 3-cycle
            (vec![1, 0, 3, 2, 5, 4], vec![2, 2, 2]),      // three swaps
            (vec![1, 2, 3, 4, 5, 6, 0], vec![7]),         // 7-cycle
            (vec![0, 1, 2], vec![1, 1, 1]),               // identity
        ];
        for ctx in [f2(), field_make(3, 1).unwrap(), field_make(2, 2).unwrap()] {
            for (perm, cycles) in &cases {
                let m = Mat::perm_matrix(&ctx, perm);
                let mut expect = Poly::one(&ctx);
                for &c in cycles {
                    let mut coeffs = vec![0i64; c + 1];
                    coeffs[0] = -1;
                    coeffs[c] = 1;
                    expect = expect.mul(&Poly::from_ints(&ctx, &coeffs));
                }
                assert_eq!(m.charpoly(), expect, "perm {:?} over F_{}^{}", perm, ctx.p, ctx.r);
            }
        }
    }

    #[test]
    fn charpoly_reversal_for_inverses() {
        // charpoly(g⁻¹)(x) = x^n · charpoly(g)(1/x) / (±det g): the
        // coefficient sequence reverses up to the unit det(g).
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ctx in [f2(), field_make(3, 1).unwrap(), field_make(2, 3).unwrap()] {
            for _ in 0..40 {
                let n = rng.gen_range(1..=6);
                let g = random_invertible(&ctx, n, &mut rng);
                let p = g.charpoly();
                let q = g.inv().unwrap().charpoly();
                let det = g.det();
                // q(x) should equal (−1)^n det(g)^{-1} · reverse(p).
                let sign = ctx.pow_signed(ctx.neg(FieldElem::ONE), n as i64);
                let unit = ctx.mul(sign, ctx.inv(det));
                let reversed: Vec<FieldElem> =
                    p.coeffs().iter().rev().map(|&c| ctx.mul(c, unit)).collect();
                assert_eq!(q, Poly::new(&ctx, reversed));
            }
        }
    }

    fn random_invertible(ctx: &Arc<FieldCtx>, n: usize, rng: &mut ChaCha8Rng) -> Mat {
        loop {
            let m = Mat::from_fn(ctx, n, n, |_, _| {
                FieldElem(rng.gen_range(0..ctx.q as u32))
            });
            if m.inv().is_some() {
                return m;
            }
        }
    }

    #[test]
    fn symplectic_j_shape() {
        let f5 = field_make(5, 1).unwrap();
        let j = symplectic_j(&f5, 2);
        let expect = Mat::from_int_rows(
            &f5,
            &[
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, -1, 0, 0],
                vec![-1, 0, 0, 0],
            ],
        );
        assert_eq!(j, expect);
        // J itself is a symplectic similitude with μ = det-related scalar;
        // at minimum the identity is symplectic.
        assert_eq!(is_symplectic(&Mat::identity(&f5, 4), &j), Some(FieldElem::ONE));
    }

    #[test]
    fn symplectic_checks() {
        let f5 = field_make(5, 1).unwrap();
        let j = symplectic_j(&f5, 2);
        // A diagonal similitude: diag(c, c, 1, 1) has gᵀJg with mixed scalars
        // → not a similitude; diag(c, 1, 1, c⁻¹)… simplest true case:
        // diag(c, c, 1, 1) pairs (1,4) and (2,3) scale by c — so it IS a
        // similitude with μ = c.
        let g = Mat::from_int_rows(
            &f5,
            &[
                vec![2, 0, 0, 0],
                vec![0, 2, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        );
        assert_eq!(is_symplectic(&g, &j), Some(f5.elem_from_int(2)));
        // diag(2,1,1,1): pair (1,4) scales by 2, pair (2,3) by 1 → no scalar.
        let h = Mat::from_int_rows(
            &f5,
            &[
                vec![2, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        );
        assert_eq!(is_symplectic(&h, &j), None);
    }

    #[test]
    fn dwork_generators_transport_into_sp4() {
        // The pair A, B preserves a common alternating form; transporting by
        // a symplectic basis of that form lands both generators in Sp_4(F_2)
        // with multiplier 1.
        let ctx = f2();
        let (a, b) = dwork_pair_f2();
        let forms = invariant_alternating_forms(&[a.clone(), b.clone()]);
        // The standard representation is absolutely irreducible, so the
        // invariant bilinear form is unique up to scalar: dimension 1.
        assert_eq!(forms.len(), 1);
        let x = &forms[0];
        assert!(!x.det().is_zero(), "invariant form must be nondegenerate");
        let s = symplectic_basis(x).unwrap();
        let j = symplectic_j(&ctx, 2);
        let s_inv = s.inv().unwrap();
        let a_t = s_inv.mul(&a).mul(&s);
        let b_t = s_inv.mul(&b).mul(&s);
        assert_eq!(is_symplectic(&a_t, &j), Some(FieldElem::ONE));
        assert_eq!(is_symplectic(&b_t, &j), Some(FieldElem::ONE));

        // Symplectic elements share eigenvalues with their inverses:
        // charpoly(g) = charpoly(g⁻¹) for g in the group they generate.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut g = Mat::identity(&ctx, 4);
        for _ in 0..50 {
            g = if rng.gen_bool(0.5) { g.mul(&a_t) } else { g.mul(&b_t) };
            assert_eq!(g.charpoly(), g.inv().unwrap().charpoly());
        }
    }

    #[test]
    fn symplectic_basis_roundtrip() {
        // Build X = Sᵀ J S for random invertible S: symplectic_basis must
        // recover a T with Tᵀ X T = J.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ctx in [f2(), field_make(3, 1).unwrap(), field_make(2, 2).unwrap()] {
            for m in 1..=3usize {
                let j = symplectic_j(&ctx, m);
                for _ in 0..10 {
                    let s = random_invertible(&ctx, 2 * m, &mut rng);
                    let x = s.transpose().mul(&j).mul(&s);
                    let t = symplectic_basis(&x).expect("nondegenerate by construction");
                    assert_eq!(t.transpose().mul(&x).mul(&t), j);
                }
            }
        }
        // Degenerate and non-alternating inputs are rejected.
        let ctx = f2();
        assert!(symplectic_basis(&Mat::zero(&ctx, 4, 4)).is_none());
        assert!(symplectic_basis(&Mat::identity(&ctx, 4)).is_none());
    }

    #[test]
    fn transvections() {
        let ctx = f2();
        let mut t = Mat::identity(&ctx, 4);
        t.set(0, 1, FieldElem::ONE); // I + E_{12}
        assert!(t.is_transvection());
        assert!(!Mat::identity(&ctx, 4).is_transvection());
        // Rank-2 unipotent: not a transvection.
        let mut u = Mat::identity(&ctx, 4);
        u.set(0, 1, FieldElem::ONE);
        u.set(2, 3, FieldElem::ONE);
        assert!(!u.is_transvection());
        // Rank-1 but not unipotent over F_5 (diag(2,1): (g−I)² ≠ 0).
        let f5 = field_make(5, 1).unwrap();
        let d = Mat::from_int_rows(&f5, &[vec![2, 0], vec![0, 1]]);
        assert!(!d.is_transvection());
    }

    #[test]
    fn solve_linear_cases() {
        let ctx = f2();
        // M = I, b = e1: unique solution e1.
        let i3 = Mat::identity(&ctx, 3);
        let e1 = vec![FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO];
        let sol = solve_linear(&i3, &e1);
        assert!(sol.is_unique());
        assert_eq!(sol.particular.unwrap(), e1);

        // M = 0, b = 0: kernel is the whole space.
        let z = Mat::zero(&ctx, 3, 3);
        let sol = solve_linear(&z, &vec![FieldElem::ZERO; 3]);
        assert_eq!(sol.kernel_dim(), 3);
        assert!(sol.particular.is_some());

        // Inconsistent: 0·x = 1.
        let sol = solve_linear(&z, &[FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO]);
        assert!(sol.particular.is_none());

        // Rectangular over F_5: x + y = 3 has a 1-dimensional solution set.
        let f5 = field_make(5, 1).unwrap();
        let m = Mat::from_int_rows(&f5, &[vec![1, 1]]);
        let sol = solve_linear(&m, &[f5.elem_from_int(3)]);
        let part = sol.particular.unwrap();
        assert_eq!(sol.kernel.len(), 1);
        // Verify the particular solution and that kernel vectors annihilate M.
        assert_eq!(f5.add(part[0], part[1]), f5.elem_from_int(3));
        let k = &sol.kernel[0];
        assert_eq!(f5.add(k[0], k[1]), f5.zero());
    }

    #[test]
    fn invariant_alternating_form_dimensions() {
        // For the cyclic group generated by the 4-cycle A alone over F_2 the
        // space of invariant alternating forms is larger; adding B cuts it to
        // exactly the symplectic pairing.
        let (a, b) = dwork_pair_f2();
        let only_a = invariant_alternating_forms(&[a.clone()]);
        assert!(only_a.len() > 1);
        let both = invariant_alternating_forms(&[a, b]);
        assert_eq!(both.len(), 1);
        // Every returned form is preserved by construction — spot-check.
        let x = &both[0];
        let (a, b) = dwork_pair_f2();
        for g in [a, b] {
            assert_eq!(g.transpose().mul(x).mul(&g), *x);
        }
    }

    #[test]
    fn packed_and_dense_paths_agree() {
        // 1000 seeded random F_2 matrices, n ≤ 16: the packed fast path and
        // the generic path must agree on every operation.
        let ctx = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=16usize);
            let a = Mat::from_fn(&ctx, n, n, |_, _| FieldElem(rng.gen_range(0..2)));
            let b = Mat::from_fn(&ctx, n, n, |_, _| FieldElem(rng.gen_range(0..2)));
            assert!(a.is_packed() && b.is_packed());
            let (ad, bd) = (a.to_dense_forced(), b.to_dense_forced());
            assert!(!ad.is_packed());

            assert_eq!(a.mul(&b), ad.mul(&bd));
            assert_eq!(a.add(&b), ad.add(&bd));
            assert_eq!(a.transpose(), ad.transpose());
            assert_eq!(a.det(), ad.det());
            assert_eq!(a.rank(), ad.rank());
            assert_eq!(a.charpoly(), ad.charpoly());
            match (a.inv(), ad.inv()) {
                (Some(x), Some(y)) => assert_eq!(x, y),
                (None, None) => {}
                _ => panic!("inverse disagreement between layouts"),
            }
            // Logical equality and hashing straddle layouts.
            assert_eq!(a, ad);
            use std::collections::hash_map::DefaultHasher;
            let mut h1 = DefaultHasher::new();
            let mut h2 = DefaultHasher::new();
            a.hash(&mut h1);
            ad.hash(&mut h2);
            assert_eq!(h1.finish(), h2.finish());
        }
    }

    #[test]
    fn apply_matches_mul() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ctx = field_make(3, 2).unwrap();
        for _ in 0..50 {
            let n = rng.gen_range(1..=6usize);
            let m = Mat::from_fn(&ctx, n, n, |_, _| FieldElem(rng.gen_range(0..9)));
            let v: Vec<FieldElem> = (0..n).map(|_| FieldElem(rng.gen_range(0..9))).collect();
            let direct = m.apply(&v);
            let as_col = Mat::from_cols(&ctx, &[v.clone()]);
            let via_mul = m.mul(&as_col);
            for i in 0..n {
                assert_eq!(direct[i], via_mul.get(i, 0));
            }
        }
        // Packed bit application agrees with the generic one.
        let f2 = f2();
        for _ in 0..200 {
            let n = rng.gen_range(1..=16usize);
            let m = Mat::from_fn(&f2, n, n, |_, _| FieldElem(rng.gen_range(0..2)));
            let bits: u64 = rng.gen_range(0..(1u64 << n));
            let v: Vec<FieldElem> = (0..n).map(|j| FieldElem((bits >> j & 1) as u32)).collect();
            let direct = m.apply(&v);
            let packed = m.apply_bits(bits);
            for (j, &d) in direct.iter().enumerate() {
                assert_eq!(d.0 as u64, packed >> j & 1);
            }
        }
    }

    #[test]
    fn poly_arithmetic() {
        let ctx = field_make(5, 1).unwrap();
        let f = Poly::from_ints(&ctx, &[-1, 0, 1]); // x² − 1
        let g = Poly::from_ints(&ctx, &[-1, 1]); // x − 1
        assert_eq!(f.gcd(&g), g.monic());
        let (q, r) = f.divmod(&g);
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&ctx, &[1, 1]));
        // divmod roundtrip with a non-monic divisor.
        let h = Poly::from_ints(&ctx, &[2, 0, 3]);
        let (q, r) = f.divmod(&h);
        assert_eq!(h.mul(&q).add(&r), f);

        // Derivative in characteristic 2: d/dx (x²) = 0, d/dx (x³) = x².
        let f2 = f2();
        assert!(Poly::from_ints(&f2, &[0, 0, 1]).derivative().is_zero());
        assert_eq!(
            Poly::from_ints(&f2, &[0, 0, 0, 1]).derivative(),
            Poly::from_ints(&f2, &[0, 0, 1])
        );

        // x⁴ + x² over F_2 = (x² + x)² is not squarefree; x² + x is.
        assert!(!Poly::from_ints(&f2, &[0, 0, 1, 0, 1]).is_squarefree());
        assert!(Poly::from_ints(&f2, &[0, 1, 1]).is_squarefree());

        // Evaluation.
        let p = Poly::from_ints(&ctx, &[1, 2, 3]); // 3x² + 2x + 1
        assert_eq!(p.eval(ctx.elem_from_int(2)), ctx.elem_from_int(17));

        // pow_mod: x^5 mod (x² + 1) over F_5 — x² ≡ −1, so x⁵ ≡ x.
        let m = Poly::from_ints(&ctx, &[1, 0, 1]);
        assert_eq!(Poly::x(&ctx).pow_mod(5, &m), Poly::x(&ctx));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn poly_divmod_roundtrip(seed in 0u64..1000) {
            let ctx = field_make(7, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let da = rng.gen_range(0..8usize);
            let db = rng.gen_range(0..5usize);
            let a = Poly::new(&ctx, (0..=da).map(|_| FieldElem(rng.gen_range(0..7))).collect());
            let mut bv: Vec<FieldElem> = (0..=db).map(|_| FieldElem(rng.gen_range(0..7))).collect();
            bv[db] = FieldElem(rng.gen_range(1..7));
            let b = Poly::new(&ctx, bv);
            let (q, r) = a.divmod(&b);
            prop_assert_eq!(b.mul(&q).add(&r), a);
            if !r.is_zero() {
                prop_assert!(r.degree().unwrap() < b.degree().unwrap());
            }
        }

        #[test]
        fn mat_mul_associative(seed in 0u64..500) {
            let ctx = field_make(2, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=5usize);
            let mk = |rng: &mut ChaCha8Rng| Mat::from_fn(&ctx, n, n, |_, _| FieldElem(rng.gen_range(0..4)));
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            // Transpose anti-homomorphism.
            prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
        }
    }
}
