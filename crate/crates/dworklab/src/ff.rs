//! Small finite fields `F_{p^r}` (`q = p^r ≤ 2^16`) with table-driven
//! arithmetic.
//!
//! A field is built once via [`field_make`] and shared behind an [`Arc`];
//! elements are plain [`FieldElem`] indices into the context's tables, so all
//! arithmetic goes through the context:
//!
//! ```
//! use dworklab::ff::field_make;
//!
//! let f9 = field_make(3, 2).unwrap();
//! let a = f9.elem_from_int(2);
//! assert_eq!(f9.mul(a, f9.inv(a)), f9.one());
//! ```
//!
//! Design notes:
//!
//! * The modulus is the lexicographically least monic irreducible polynomial
//!   of degree `r`, compared by coefficient tuple from the highest non-leading
//!   coefficient down to the constant term. This makes element encodings
//!   reproducible across runs and machines (`F_4`: `x^2+x+1`, `F_8`:
//!   `x^3+x+1`).
//! * An element's index packs the residue's coefficients in base `p`, least
//!   significant digit = constant term. For `p = 2` the index is the
//!   coefficient bit pattern, so addition is XOR.
//! * Multiplication, inversion, and powering go through discrete-log tables
//!   over a canonical generator (the least index that generates `F_q^×`),
//!   giving O(1) operations for every supported `q`.

use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 16;

/// Errors from field construction and element operations.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{r} exceeds 2^16")]
    TooLarge { p: u64, r: u32 },
    #[error("the zero element has no multiplicative order")]
    ZeroOrder,
    #[error("{n} does not divide |F_q^x| = {qm1}: no root of unity of that order")]
    NoRootOfUnity { n: u64, qm1: u64 },
    #[error("p = {p} divides N = {n}")]
    RamifiedPrime { p: u64, n: u64 },
    #[error("N must be odd and at least 3, got {0}")]
    BadConductor(u64),
    #[error("degree {small} does not divide degree {big}: not a subfield")]
    NotASubfield { small: u32, big: u32 },
    #[error("the two contexts have different characteristics")]
    CharMismatch,
}

/// An element of `F_{p^r}`, stored as a packed index (base-`p` digits of the
/// index are the coefficients of the polynomial residue, constant term in the
/// least significant digit). Elements only make sense together with the
/// [`FieldCtx`] that created them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    /// The additive identity (in every field context).
    pub const ZERO: FieldElem = FieldElem(0);
    /// The multiplicative identity (in every field context).
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field `F_{p^r}` with all lookup tables built.
pub struct FieldCtx {
    /// Characteristic.
    pub p: u64,
    /// Extension degree over the prime field.
    pub r: u32,
    /// Field size `p^r`.
    pub q: u64,
    /// Monic modulus, low-to-high coefficients, length `r + 1`, entries in `[0, p)`.
    pub modulus: Vec<u64>,
    /// `exp[i] = g^i`, doubled to length `2(q-1)` so sums of two logs need no reduction.
    exp: Vec<u32>,
    /// Discrete log base `g`; entry for 0 is unused.
    log: Vec<u32>,
    /// Absolute trace to `F_p`, one value in `[0, p)` per element index.
    trace_tbl: Vec<u32>,
    /// Quadratic character for odd `q` (`+1` square, `-1` non-square, `0` at zero); empty for `p = 2`.
    chi_tbl: Vec<i8>,
    /// Frobenius `a -> a^p` per element index.
    frob_tbl: Vec<u32>,
    /// Full addition table for small odd extension fields; empty otherwise.
    add_tbl: Vec<u32>,
    /// Canonical generator of `F_q^×` (least generating index).
    gen: u32,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(F_{}^{}, modulus {:?})", self.p, self.r, self.modulus)
    }
}

/// Build `F_{p^r}`. Fails on non-prime `p`, `r = 0`, or `p^r > 2^16`.
pub fn field_make(p: u64, r: u32) -> Result<Arc<FieldCtx>, FieldError> {
    FieldCtx::new(p, r).map(Arc::new)
}

/// The residue degree `f` of the prime `p` in the real cyclotomic field of
/// conductor `N`: the least `f ≥ 1` with `p^f ≡ ±1 (mod N)`.
///
/// ```
/// use dworklab::ff::residue_degree;
/// assert_eq!(residue_degree(5, 2).unwrap(), 2);
/// assert_eq!(residue_degree(7, 2).unwrap(), 3);
/// assert_eq!(residue_degree(3, 2).unwrap(), 1);
/// ```
pub fn residue_degree(n: u64, p: u64) -> Result<u32, FieldError> {
    if n < 3 || n % 2 == 0 {
        return Err(FieldError::BadConductor(n));
    }
    if gcd(p, n) != 1 {
        return Err(FieldError::RamifiedPrime { p, n });
    }
    let t = p % n;
    let mut acc = t;
    let mut d = 1u32;
    while acc != 1 && acc != n - 1 {
        acc = acc * t % n;
        d += 1;
    }
    Ok(d)
}

/// The multiplicative order of `p` modulo `N` (the degree of the field in
/// which a primitive `N`-th root of unity first lives).
pub fn splitting_degree(n: u64, p: u64) -> Result<u32, FieldError> {
    if n < 3 || n % 2 == 0 {
        return Err(FieldError::BadConductor(n));
    }
    if gcd(p, n) != 1 {
        return Err(FieldError::RamifiedPrime { p, n });
    }
    let t = p % n;
    let mut acc = t;
    let mut d = 1u32;
    while acc != 1 {
        acc = acc * t % n;
        d += 1;
    }
    Ok(d)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Prime-field polynomial helpers used only during construction.
// Polynomials are Vec<u64> with low-to-high coefficients in [0, p).
// ---------------------------------------------------------------------------

mod pp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Remainder of `a` by monic `f`.
    pub fn rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
        let df = f.len() - 1;
        while a.len() > df {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - df;
            if lead != 0 {
                for (i, &c) in f.iter().enumerate() {
                    let sub = lead * c % p;
                    a[shift + i] = (a[shift + i] + p - sub) % p;
                }
            }
            a.pop();
        }
        trim(&mut a);
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(prod, f, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base.to_vec(), f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let lead = *b.last().unwrap();
            if lead != 1 {
                let inv = super::mod_inverse(lead, p);
                for c in b.iter_mut() {
                    *c = *c * inv % p;
                }
            }
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a nonzero mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    // f monic of degree r >= 1 over F_p. Frobenius criterion:
    // x^{p^r} = x mod f, and gcd(x^{p^{r/l}} - x, f) = 1 for every prime l | r.
    let r = (f.len() - 1) as u32;
    if r == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frob[k] = x^{p^{k+1}} mod f for k = 0 .. r-1.
    let mut frob = Vec::with_capacity(r as usize);
    let mut h = pp::powmod(&x, p, f, p);
    frob.push(h.clone());
    for _ in 1..r {
        h = pp::powmod(&h, p, f, p);
        frob.push(h.clone());
    }
    if frob[(r - 1) as usize] != x {
        return false;
    }
    for l in prime_factors(r as u64) {
        let k = r / l as u32;
        let diff = pp::sub(&frob[(k - 1) as usize], &x, p);
        let g = pp::gcd(f.to_vec(), diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    fn new(p: u64, r: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if r == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..r {
            q = q.checked_mul(p).ok_or(FieldError::TooLarge { p, r })?;
            if q > MAX_Q {
                return Err(FieldError::TooLarge { p, r });
            }
        }

        let modulus = Self::least_irreducible(p, r);
        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            trace_tbl: Vec::new(),
            chi_tbl: Vec::new(),
            frob_tbl: Vec::new(),
            add_tbl: Vec::new(),
            gen: 1,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// Lexicographically least monic irreducible polynomial of degree `r`:
    /// iterate the non-leading coefficient tuple `(c_{r-1}, ..., c_0)` in
    /// ascending numeric order and take the first irreducible hit.
    fn least_irreducible(p: u64, r: u32) -> Vec<u64> {
        if r == 1 {
            return vec![0, 1]; // x itself
        }
        let total = pow_u64(p, r);
        for m in 0..total {
            let mut coeffs = vec![0u64; r as usize + 1];
            coeffs[r as usize] = 1;
            let mut mm = m;
            for i in (0..r).rev() {
                let place = pow_u64(p, i);
                coeffs[i as usize] = mm / place;
                mm %= place;
            }
            if is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let qm1 = q - 1;

        // Canonical generator: least index generating the multiplicative group.
        let factors = prime_factors(qm1.max(1));
        self.gen = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&cand| factors.iter().all(|&l| self.raw_pow(cand, qm1 / l) != 1))
                .expect("F_q^x is cyclic; a generator exists") as u32
        };

        // exp/log tables (doubled exp so a sum of two logs indexes directly).
        if q == 2 {
            self.exp = vec![1, 1];
            self.log = vec![u32::MAX, 0];
        } else {
            self.exp = vec![0u32; 2 * qm1 as usize];
            self.log = vec![u32::MAX; q as usize];
            let mut e = 1u64;
            for i in 0..qm1 {
                self.exp[i as usize] = e as u32;
                self.log[e as usize] = i as u32;
                e = self.raw_mul(e, self.gen as u64);
            }
            debug_assert_eq!(e, 1, "generator order must be exactly q-1");
            for i in 0..qm1 {
                self.exp[(qm1 + i) as usize] = self.exp[i as usize];
            }
        }

        // Addition table for odd extension fields small enough to afford q^2 words.
        if self.p > 2 && self.r > 1 && q <= 2048 {
            let mut tbl = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tbl[(a * q + b) as usize] = self.digit_add(a as u32, b as u32);
                }
            }
            self.add_tbl = tbl;
        }

        // Frobenius table.
        self.frob_tbl = (0..q).map(|a| self.raw_pow(a, self.p) as u32).collect();

        // Absolute trace: Tr(a) = a + a^p + ... + a^{p^{r-1}}.
        self.trace_tbl = (0..q as u32)
            .map(|a| {
                let mut sum = a;
                let mut s = a;
                for _ in 1..self.r {
                    s = self.frob_tbl[s as usize];
                    sum = self.digit_add(sum, s);
                }
                debug_assert!((sum as u64) < self.p, "trace lands in the prime field");
                sum
            })
            .collect();

        // Quadratic character (odd q): chi(g^i) = (-1)^i.
        if self.p != 2 {
            let mut chi = vec![0i8; q as usize];
            for i in 0..qm1 {
                chi[self.exp[i as usize] as usize] = if i % 2 == 0 { 1 } else { -1 };
            }
            self.chi_tbl = chi;
        }
    }

    /// Product computed through the polynomial representation; used during
    /// table construction and as a test oracle.
    fn raw_mul(&self, a: u64, b: u64) -> u64 {
        let pa = self.idx_to_poly(a);
        let pb = self.idx_to_poly(b);
        self.poly_to_idx(&pp::mulmod(&pa, &pb, &self.modulus, self.p))
    }

    /// Power computed through the polynomial representation; used during
    /// table construction.
    fn raw_pow(&self, a: u64, e: u64) -> u64 {
        let pa = self.idx_to_poly(a);
        self.poly_to_idx(&pp::powmod(&pa, e, &self.modulus, self.p))
    }

    fn idx_to_poly(&self, idx: u64) -> Vec<u64> {
        let mut digits = Vec::with_capacity(self.r as usize);
        let mut v = idx;
        for _ in 0..self.r {
            digits.push(v % self.p);
            v /= self.p;
        }
        pp::trim(&mut digits);
        digits
    }

    fn poly_to_idx(&self, poly: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (i, &c) in poly.iter().enumerate() {
            idx += c * pow_u64(self.p, i as u32);
        }
        idx
    }

    #[inline]
    fn digit_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u64;
        let mut pa = a as u64;
        let mut pb = b as u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            let da = pa % self.p;
            let db = pb % self.p;
            out += (da + db) % self.p * place;
            pa /= self.p;
            pb /= self.p;
            place *= self.p;
        }
        out as u32
    }

    // -- element constructors ---------------------------------------------------

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of an integer under `Z -> F_p ⊂ F_q`.
    #[inline]
    pub fn elem_from_int(&self, i: i64) -> FieldElem {
        FieldElem(i.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given base-`p` digits (constant term first).
    pub fn elem_from_digits(&self, digits: &[u64]) -> FieldElem {
        assert!(digits.len() <= self.r as usize, "too many digits");
        let mut idx = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            assert!(d < self.p, "digit out of range");
            idx += d * pow_u64(self.p, i as u32);
        }
        FieldElem(idx as u32)
    }

    /// Base-`p` digits of an element (constant term first, length `r`).
    pub fn digits(&self, a: FieldElem) -> Vec<u64> {
        let mut v = a.0 as u64;
        let mut out = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// The canonical generator of `F_q^×`.
    #[inline]
    pub fn generator(&self) -> FieldElem {
        FieldElem(self.gen)
    }

    /// Iterate over all `q` elements, in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    /// Iterate over the `q - 1` nonzero elements, in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q as u32).map(FieldElem)
    }

    // -- arithmetic ---------------------------------------------------------------

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            FieldElem(a.0 ^ b.0)
        } else if self.r == 1 {
            FieldElem(((a.0 as u64 + b.0 as u64) % self.p) as u32)
        } else if !self.add_tbl.is_empty() {
            FieldElem(self.add_tbl[(a.0 as u64 * self.q + b.0 as u64) as usize])
        } else {
            FieldElem(self.digit_add(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            a
        } else if self.r == 1 {
            FieldElem((self.p - a.0 as u64) as u32)
        } else {
            self.mul(a, FieldElem((self.p - 1) as u32))
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            FieldElem(0)
        } else {
            let la = self.log[a.0 as usize] as usize;
            let lb = self.log[b.0 as usize] as usize;
            FieldElem(self.exp[la + lb])
        }
    }

    #[inline]
    pub fn sqr(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Multiplicative inverse. Panics on zero (callers guard).
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "division by zero in F_{}^{}", self.p, self.r);
        let qm1 = ((self.q - 1).max(1)) as usize;
        let la = self.log[a.0 as usize] as usize;
        FieldElem(self.exp[(qm1 - la) % qm1])
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// `a^e` for `e ≥ 0` (`0^0 = 1`).
    #[inline]
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem(1);
        }
        if a.0 == 0 {
            return FieldElem(0);
        }
        let qm1 = self.q - 1;
        if qm1 == 0 {
            return FieldElem(1);
        }
        let la = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[(la * (e % qm1) % qm1) as usize])
    }

    /// `a^e` for signed `e` (negative exponents invert; the base must be
    /// nonzero when `e < 0`).
    pub fn pow_signed(&self, a: FieldElem, e: i64) -> FieldElem {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.pow(self.inv(a), e.unsigned_abs())
        }
    }

    /// Frobenius `a -> a^p`.
    #[inline]
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.frob_tbl[a.0 as usize])
    }

    /// The unique square root in characteristic 2 (`a -> a^{2^{r-1}}`).
    pub fn sqrt_char2(&self, a: FieldElem) -> FieldElem {
        assert_eq!(self.p, 2, "unique square roots require characteristic 2");
        let mut x = a;
        for _ in 1..self.r {
            x = self.frobenius(x);
        }
        x
    }

    /// Quadratic character for odd `q`: `+1` nonzero square, `-1` non-square, `0` at zero.
    #[inline]
    pub fn chi(&self, a: FieldElem) -> i8 {
        debug_assert!(self.p != 2, "quadratic character needs odd characteristic");
        self.chi_tbl[a.0 as usize]
    }

    /// Absolute trace to `F_p`, returned as an integer in `[0, p)`.
    #[inline]
    pub fn abs_trace(&self, a: FieldElem) -> u64 {
        self.trace_tbl[a.0 as usize] as u64
    }

    /// Exact multiplicative order of a nonzero element (divides `q - 1`).
    pub fn elem_order(&self, a: FieldElem) -> Result<u64, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let mut d = self.q - 1;
        if d == 0 {
            return Ok(1);
        }
        for l in prime_factors(d) {
            while d % l == 0 && self.pow(a, d / l) == FieldElem(1) {
                d /= l;
            }
        }
        Ok(d)
    }

    /// Deterministic primitive `N`-th root of unity: `g^{(q-1)/N}` for the
    /// canonical generator `g`. Requires `N | q - 1`.
    pub fn cyclotomic_element(&self, n: u64) -> Result<FieldElem, FieldError> {
        let qm1 = self.q - 1;
        if n == 0 || qm1 % n != 0 {
            return Err(FieldError::NoRootOfUnity { n, qm1 });
        }
        Ok(self.pow(self.generator(), qm1 / n))
    }

    /// Does `a` lie in the subfield `F_{p^s}`? (`s` must divide `r`.)
    pub fn is_in_subfield(&self, a: FieldElem, s: u32) -> bool {
        if s == 0 || self.r % s != 0 {
            return false;
        }
        let mut x = a;
        for _ in 0..s {
            x = self.frobenius(x);
        }
        x == a
    }

    /// The least `s | r` with `a ∈ F_{p^s}`.
    pub fn min_subfield_degree(&self, a: FieldElem) -> u32 {
        for s in 1..=self.r {
            if self.r % s == 0 && self.is_in_subfield(a, s) {
                return s;
            }
        }
        self.r
    }

    /// Least solution `y` of the Artin–Schreier equation `y^2 + y = c`
    /// (characteristic 2). `None` when `Tr(c) = 1`.
    pub fn artin_schreier_root(&self, c: FieldElem) -> Option<FieldElem> {
        assert_eq!(self.p, 2, "Artin-Schreier roots are a characteristic-2 tool");
        if self.abs_trace(c) != 0 {
            return None;
        }
        self.elements().find(|&y| self.add(self.sqr(y), y) == c)
    }
}

#[inline]
pub(crate) fn pow_u64(b: u64, e: u32) -> u64 {
    let mut out = 1u64;
    for _ in 0..e {
        out *= b;
    }
    out
}

/// The canonical embedding of a subfield: `F_{p^s} -> F_{p^e}` with `s | e`,
/// sending the small field's modulus root to its least root in the big field.
pub struct SubfieldMap {
    fwd: Vec<u32>,
    back: HashMap<u32, u32>,
}

impl SubfieldMap {
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<SubfieldMap, FieldError> {
        if small.p != big.p {
            return Err(FieldError::CharMismatch);
        }
        if big.r % small.r != 0 {
            return Err(FieldError::NotASubfield {
                small: small.r,
                big: big.r,
            });
        }
        // Least root of the small modulus inside the big field.
        let root = big
            .elements()
            .find(|&x| {
                let mut acc = big.zero();
                let mut xp = big.one();
                for &c in &small.modulus {
                    if c != 0 {
                        acc = big.add(acc, big.mul(big.elem_from_int(c as i64), xp));
                    }
                    xp = big.mul(xp, x);
                }
                acc.is_zero()
            })
            .expect("a subfield modulus splits in the big field");
        let mut fwd = vec![0u32; small.q as usize];
        let mut back = HashMap::with_capacity(small.q as usize);
        for a in small.elements() {
            let digits = small.digits(a);
            let mut acc = big.zero();
            let mut xp = big.one();
            for &d in &digits {
                if d != 0 {
                    acc = big.add(acc, big.mul(big.elem_from_int(d as i64), xp));
                }
                xp = big.mul(xp, root);
            }
            fwd[a.0 as usize] = acc.0;
            back.insert(acc.0, a.0);
        }
        Ok(SubfieldMap { fwd, back })
    }

    /// Image of a small-field element in the big field.
    #[inline]
    pub fn up(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.fwd[a.0 as usize])
    }

    /// Preimage of a big-field element, if it lies in the embedded subfield.
    #[inline]
    pub fn down(&self, a: FieldElem) -> Option<FieldElem> {
        self.back.get(&a.0).map(|&i| FieldElem(i))
    }
}

// ---------------------------------------------------------------------------
