//! Exact point counting over small finite fields.
//!
//! Every function here evaluates a finite sum — coordinates are swept, fibers
//! are resolved by quadratic/quintic root counts, and the answers are exact
//! integers.  Nothing is sampled or estimated.  Counts that would exceed a
//! hard work budget are refused with a structured skip rather than attempted.
//!
//! The varieties covered are the ones the verification layer needs:
//!
//! * the mirror-family hypersurface `Z_t`: `x_1 + … + x_n + 1/(x_1⋯x_n) = (n+1)t`
//!   inside the torus `(F_q^×)^n`, together with the virtual Frobenius trace
//!   attached to its count,
//! * the trinomial `f_t(x) = n·x^{n+1} − (n+1)t·x^n + 1` (distinct roots in `F_q`),
//! * hyperelliptic curves `y² + h(x)·y = f(x)` of genus ≤ 3 (smooth projective
//!   models, both odd and even characteristic),
//! * superelliptic quintic covers `y⁵ = f(x)` (smooth projective models),
//! * the plane quartic `4xy³ + x³z − 7t·xy²z + 2yz³ = 0`,
//! * the quintic threefold `X_1⁵ + … + X_5⁵ = 5t·X_1X_2X_3X_4X_5` in `P⁴`.
//!
//! Counts of the named curves attached to a parameter `t ∈ Q` (`count_dt`,
//! `count_ct`, `count_at`, `count_bt`) first reduce `t` into the field and skip
//! with a reason when the reduction does not exist or the fiber degenerates.
//!
//! All sweeps that run in parallel reduce with integer addition, so results
//! are identical for every thread count.

use crate::ff::{FieldCtx, FieldElem, FieldError};
use crate::linalg::Poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Budget for the `Z_t` coordinate sweep: `(q-1)^(n-1)` must not exceed this.
pub const SWEEP_BUDGET: u128 = 200_000_000;
/// Largest field size accepted by the `O(q⁴)` quintic-threefold sweep.
pub const QUINTIC_Q_MAX: u64 = 37;
/// Largest field size accepted by the `O(q²)` plane-quartic sweep.
pub const QUARTIC_Q_MAX: u64 = 2048;

/// Errors from the counting layer.
#[derive(Debug, Error)]
pub enum CountError {
    /// A parameter was malformed (bad rational literal, zero denominator, …).
    #[error("bad parameter: {0}")]
    BadParam(String),
    /// A value that a computation depends on was skipped; the payload is the
    /// skip reason of the underlying count.
    #[error("count unavailable: {0}")]
    Unavailable(String),
    /// Field construction failed.
    #[error(transparent)]
    Field(#[from] FieldError),
}

// -- rational parameters -------------------------------------------------------

/// A rational parameter `t ∈ Q`, with the valuation and reduction helpers the
/// counting and verification layers need.
///
/// ```
/// use dworklab::count::RationalParam;
///
/// let t: RationalParam = "3/2".parse().unwrap();
/// let u = t.pow_minus_one(5); // (3/2)^5 - 1 = 211/32
/// assert_eq!(u.to_string(), "211/32");
/// assert_eq!(u.ord_at(2), Some(-5));
/// assert_eq!(u.ord_at(211), Some(1));
/// assert_eq!(u.ord_at(7), Some(0));
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalParam {
    value: BigRational,
}

impl RationalParam {
    /// Construct `num/den`; fails if `den = 0`.
    pub fn new(num: i64, den: i64) -> Result<RationalParam, CountError> {
        if den == 0 {
            return Err(CountError::BadParam("denominator must be nonzero".into()));
        }
        Ok(RationalParam {
            value: BigRational::new(BigInt::from(num), BigInt::from(den)),
        })
    }

    /// The integer `n` as a rational parameter.
    pub fn from_int(n: i64) -> RationalParam {
        RationalParam {
            value: BigRational::from(BigInt::from(n)),
        }
    }

    /// Numerator of the reduced fraction (sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    /// Denominator of the reduced fraction (always positive).
    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    /// Whether the value is 0.
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `t^k − 1`, as a new parameter.
    pub fn pow_minus_one(&self, k: u32) -> RationalParam {
        let one = BigRational::from(BigInt::from(1));
        RationalParam {
            value: self.value.pow(k as i32) - one,
        }
    }

    /// The `p`-adic valuation `ord_p(t)`, or `None` for `t = 0` (valuation +∞).
    pub fn ord_at(&self, p: u64) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        let count = |x: &BigInt| -> i64 {
            let m = BigInt::from(p);
            let mut z = x.abs();
            let mut c = 0i64;
            while (&z % &m).is_zero() {
                z /= &m;
                c += 1;
            }
            c
        };
        Some(count(self.value.numer()) - count(self.value.denom()))
    }

    /// Reduce into the prime subfield of `ctx`: `None` iff `p` divides the
    /// denominator (i.e. `t` has a pole at `p`).
    pub fn reduce_in(&self, ctx: &FieldCtx) -> Option<FieldElem> {
        let m = BigInt::from(ctx.p);
        let den = self.value.denom().mod_floor(&m);
        if den.is_zero() {
            return None;
        }
        let num = self.value.numer().mod_floor(&m);
        let nf = ctx.elem_from_int(num.to_i64().expect("residue fits i64"));
        let df = ctx.elem_from_int(den.to_i64().expect("residue fits i64"));
        Some(ctx.div(nf, df))
    }
}

impl FromStr for RationalParam {
    type Err = CountError;

    /// Parse `"a"` or `"a/b"` with integer `a`, `b` (arbitrary size, `b ≠ 0`).
    fn from_str(s: &str) -> Result<RationalParam, CountError> {
        let s = s.trim();
        let bad = || CountError::BadParam(format!("cannot parse {s:?} as a rational number"));
        let (ns, ds) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(ns).map_err(|_| bad())?;
        let den = BigInt::from_str(ds).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(CountError::BadParam("denominator must be nonzero".into()));
        }
        Ok(RationalParam {
            value: BigRational::new(num, den),
        })
    }
}

impl fmt::Display for RationalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.denom() == &BigInt::from(1) {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

// -- count results --------------------------------------------------------------

/// Outcome of one point count: either an exact count (`good = true`) or a
/// structured skip with a human-readable reason.
#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    /// Which variety was counted (`"zt"`, `"quintic"`, `"hyperD"`, …).
    pub variety: String,
    /// Dimension parameter `n`, where applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Genus of the curve, where applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    /// The parameter `t`, as a rational literal.
    pub t: String,
    /// Field size.
    pub q: u64,
    /// The exact point count, present iff `good`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    /// Whether the count was performed.
    pub good: bool,
    /// Why the count was skipped, present iff `!good`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    /// Whether the skip was a resource refusal (drives the CLI exit code);
    /// not part of the serialized report.
    #[serde(skip)]
    pub resource_bound: bool,
}

impl CountResult {
    /// A successful exact count.
    pub fn counted(variety: &str, t_label: &str, q: u64, count: u64) -> CountResult {
        CountResult {
            variety: variety.into(),
            n: None,
            genus: None,
            t: t_label.into(),
            q,
            count: Some(count),
            good: true,
            skip_reason: None,
            resource_bound: false,
        }
    }

    /// A skip for a mathematical reason (bad reduction, degenerate fiber, …).
    pub fn skipped(variety: &str, t_label: &str, q: u64, reason: &str) -> CountResult {
        CountResult {
            variety: variety.into(),
            n: None,
            genus: None,
            t: t_label.into(),
            q,
            count: None,
            good: false,
            skip_reason: Some(reason.into()),
            resource_bound: false,
        }
    }

    /// A skip because the requested sweep exceeds the work budget.
    pub fn resource_skipped(variety: &str, t_label: &str, q: u64, reason: &str) -> CountResult {
        let mut r = CountResult::skipped(variety, t_label, q, reason);
        r.resource_bound = true;
        r
    }

    /// Attach the dimension parameter.
    pub fn with_n(mut self, n: u32) -> CountResult {
        self.n = Some(n);
        self
    }

    /// Attach the genus.
    pub fn with_genus(mut self, g: u32) -> CountResult {
        self.genus = Some(g);
        self
    }

    /// Rename the variety tag (used by the named-curve wrappers).
    fn retag(mut self, variety: &str, t_label: &str) -> CountResult {
        self.variety = variety.into();
        self.t = t_label.into();
        self
    }
}

// -- the torus hypersurface Z_t ---------------------------------------------------

/// Number of roots in `F_q` of `a·x² + b·x + 1` with `a ≠ 0`.
fn quadratic_roots_monic_const(ctx: &FieldCtx, a: FieldElem, b: FieldElem) -> u64 {
    debug_assert!(!a.is_zero());
    if ctx.p == 2 {
        if b.is_zero() {
            // x² = 1/a: Frobenius is bijective, one (double) root.
            1
        } else {
            // Roots exist iff Tr(a·1/b²) = 0, and then there are two.
            let w = ctx.div(a, ctx.sqr(b));
            if ctx.abs_trace(w) == 0 {
                2
            } else {
                0
            }
        }
    } else {
        let four_a = ctx.mul(ctx.elem_from_int(4), a);
        let disc = ctx.sub(ctx.sqr(b), four_a);
        (1 + ctx.chi(disc) as i64) as u64
    }
}

/// Count fiber solutions of the `Z_t` equation over the last coordinate, given
/// the partial sum `u` and partial product `prod` of the first `n-1`
/// coordinates: solutions `x ∈ F_q^×` of `u + x + 1/(prod·x) = c`, i.e. roots
/// of `prod·x² + prod(u−c)·x + 1` (the constant term 1 forces `x ≠ 0`).
fn zt_fiber(ctx: &FieldCtx, u: FieldElem, prod: FieldElem, c: FieldElem) -> u64 {
    quadratic_roots_monic_const(ctx, prod, ctx.mul(prod, ctx.sub(u, c)))
}

fn zt_sweep_rec(ctx: &FieldCtx, depth: u32, u: FieldElem, prod: FieldElem, c: FieldElem) -> u64 {
    if depth == 0 {
        return zt_fiber(ctx, u, prod, c);
    }
    let mut acc = 0u64;
    for x in ctx.nonzero_elements() {
        acc += zt_sweep_rec(ctx, depth - 1, ctx.add(u, x), ctx.mul(prod, x), c);
    }
    acc
}

/// Exact count of `Z_t(F_q)`: solutions of
/// `x_1 + … + x_n + 1/(x_1⋯x_n) = (n+1)·t` with all `x_i ∈ F_q^×`.
///
/// Sweeps the first `n−1` coordinates and resolves the last by a quadratic
/// root count, so the work is `O((q-1)^(n-1))`; requests beyond
/// [`SWEEP_BUDGET`] are refused with a resource skip.
///
/// ```
/// use dworklab::count::{count_zt, RationalParam};
/// use dworklab::ff::field_make;
///
/// let f3 = field_make(3, 1).unwrap();
/// let t = RationalParam::from_int(2);
/// assert_eq!(count_zt(4, &t, &f3).count, Some(10));
/// ```
pub fn count_zt(n: u32, t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    assert!(n >= 2, "the torus hypersurface needs n >= 2");
    let q = ctx.q;
    let label = t.to_string();
    let Some(tbar) = t.reduce_in(ctx) else {
        return CountResult::skipped("zt", &label, q, "the denominator of t vanishes in F_q")
            .with_n(n);
    };
    let work = ((q - 1) as u128).pow(n - 1);
    if work > SWEEP_BUDGET {
        return CountResult::resource_skipped(
            "zt",
            &label,
            q,
            &format!("sweep size (q-1)^(n-1) = {work} exceeds the budget {SWEEP_BUDGET}"),
        )
        .with_n(n);
    }
    let c = ctx.mul(ctx.elem_from_int(n as i64 + 1), tbar);
    let nz: Vec<FieldElem> = ctx.nonzero_elements().collect();
    let total: u64 = nz
        .par_iter()
        .map(|&x1| zt_sweep_rec(ctx, n - 2, x1, x1, c))
        .sum();
    CountResult::counted("zt", &label, q, total).with_n(n)
}

/// Oracle for [`count_zt`]: sweep all `n` coordinates and test the equation
/// directly.  `O((q-1)^n)` — only for small inputs.
pub fn count_zt_naive(n: u32, t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    assert!(n >= 2);
    let q = ctx.q;
    let label = t.to_string();
    let Some(tbar) = t.reduce_in(ctx) else {
        return CountResult::skipped("zt", &label, q, "the denominator of t vanishes in F_q")
            .with_n(n);
    };
    let work = ((q - 1) as u128).pow(n);
    if work > SWEEP_BUDGET {
        return CountResult::resource_skipped("zt", &label, q, "naive sweep exceeds the budget")
            .with_n(n);
    }
    let c = ctx.mul(ctx.elem_from_int(n as i64 + 1), tbar);
    fn rec(ctx: &FieldCtx, depth: u32, u: FieldElem, prod: FieldElem, c: FieldElem) -> u64 {
        if depth == 0 {
            let lhs = ctx.add(u, ctx.inv(prod));
            return (lhs == c) as u64;
        }
        let mut acc = 0u64;
        for x in ctx.nonzero_elements() {
            acc += rec(ctx, depth - 1, ctx.add(u, x), ctx.mul(prod, x), c);
        }
        acc
    }
    let total: u64 = ctx
        .nonzero_elements()
        .map(|x1| rec(ctx, n - 1, x1, x1, c))
        .sum();
    CountResult::counted("zt", &label, q, total).with_n(n)
}

/// The trace value determined by a known count `#Z_t(F_q)`:
/// `tr = ((q−1)^n − (−1)^n)/q − count`.  The division is exact because
/// `(q−1)^n ≡ (−1)^n (mod q)`.
pub fn trace_from_count(n: u32, q: u64, count: u64) -> i128 {
    let q = q as i128;
    let mut pw: i128 = 1;
    for _ in 0..n {
        pw = pw.checked_mul(q - 1).expect("(q-1)^n fits i128 for counted sweeps");
    }
    let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
    debug_assert_eq!((pw - sign) % q, 0);
    (pw - sign) / q - count as i128
}

/// The virtual Frobenius trace attached to the middle cohomology of the
/// mirror fiber: `tr = ((q−1)^n − (−1)^n)/q − #Z_t(F_q)`.
///
/// For `n = 2` the formula collapses to `q − 2 − #Z_t(F_q)`.
pub fn mirror_trace(n: u32, t: &RationalParam, ctx: &Arc<FieldCtx>) -> Result<i128, CountError> {
    let res = count_zt(n, t, ctx);
    let Some(cnt) = res.count else {
        return Err(CountError::Unavailable(
            res.skip_reason.unwrap_or_else(|| "count skipped".into()),
        ));
    };
    Ok(trace_from_count(n, ctx.q, cnt))
}

// -- the trinomial ---------------------------------------------------------------

/// The trinomial `f_t(x) = n·x^{n+1} − (n+1)·t·x^n + 1` over `F_q`, or `None`
/// if `t` does not reduce.
pub fn trinomial_poly(n: u32, t: &RationalParam, ctx: &Arc<FieldCtx>) -> Option<Poly> {
    let tb = t.reduce_in(ctx)?;
    let deg = n as usize + 1;
    let mut coeffs = vec![FieldElem::ZERO; deg + 1];
    coeffs[0] = FieldElem::ONE;
    coeffs[n as usize] = ctx.neg(ctx.mul(ctx.elem_from_int(n as i64 + 1), tb));
    coeffs[deg] = ctx.elem_from_int(n as i64);
    Some(Poly::new(ctx, coeffs))
}

/// Number of distinct roots of the trinomial `f_t` in `F_q`, by evaluation.
///
/// ```
/// use dworklab::count::{trinomial_root_count, RationalParam};
/// use dworklab::ff::field_make;
///
/// let f3 = field_make(3, 1).unwrap();
/// let t = RationalParam::from_int(0);
/// assert_eq!(trinomial_root_count(4, &t, &f3).count, Some(1)); // x⁵ + 1 has the root 2
/// ```
pub fn trinomial_root_count(n: u32, t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let label = t.to_string();
    let Some(f) = trinomial_poly(n, t, ctx) else {
        return CountResult::skipped(
            "trinomial",
            &label,
            ctx.q,
            "the denominator of t vanishes in F_q",
        )
        .with_n(n);
    };
    let roots = ctx.elements().filter(|&x| f.eval(x).is_zero()).count() as u64;
    CountResult::counted("trinomial", &label, ctx.q, roots).with_n(n)
}

// -- hyperelliptic curves ----------------------------------------------------------

/// Validate a hyperelliptic model `y² + h(x)·y = f(x)` and return
/// `(genus, points at infinity)` of its smooth projective model, or a skip
/// reason.
fn hyperelliptic_shape(h: &Poly, f: &Poly, ctx: &FieldCtx) -> Result<(u32, u64), String> {
    if ctx.p == 2 {
        if h.is_zero() {
            return Err("the model y² = f(x) is inseparable in characteristic 2".into());
        }
        let Some(df) = f.degree() else {
            return Err("f = 0 gives a degenerate model".into());
        };
        let dh = h.degree().unwrap_or(0);
        if df % 2 == 0 || df < 3 || df <= 2 * dh {
            return Err(
                "only odd-degree models with deg f > 2·deg h are supported in characteristic 2"
                    .into(),
            );
        }
        // Affine singular point ⟺ h and f'² + h'²·f share a root in F̄_q.
        let fp = f.derivative();
        let hp = h.derivative();
        let crit = fp.mul(&fp).add(&hp.mul(&hp).mul(f));
        if h.gcd(&crit).degree().unwrap_or(0) >= 1 {
            return Err("the model is singular".into());
        }
        let g = ((df - 1) / 2) as u32;
        if g == 0 || g > 3 {
            return Err(format!("genus {g} is outside the supported range 1..=3"));
        }
        Ok((g, 1))
    } else {
        // Complete the square: y² + hy = f ⟺ (2y + h)² = 4f + h².
        let four = ctx.elem_from_int(4);
        let s = f.scalar_mul(four).add(&h.mul(h));
        let Some(ds) = s.degree() else {
            return Err("4f + h² = 0 gives a degenerate model".into());
        };
        if ds < 3 {
            return Err("deg(4f + h²) < 3 gives genus 0".into());
        }
        if !s.is_squarefree() {
            return Err("the model is singular (4f + h² is not squarefree)".into());
        }
        let (g, inf) = if ds % 2 == 1 {
            (((ds - 1) / 2) as u32, 1)
        } else {
            ((ds / 2 - 1) as u32, (1 + ctx.chi(s.leading()) as i64) as u64)
        };
        if g == 0 || g > 3 {
            return Err(format!("genus {g} is outside the supported range 1..=3"));
        }
        Ok((g, inf))
    }
}

/// Exact count of the smooth projective hyperelliptic curve
/// `y² + h(x)·y = f(x)` over `F_q`, by a per-`x` character/trace evaluation.
///
/// Returns a skip when the model is singular, degenerate, or of genus
/// outside `1..=3`.
pub fn count_hyperelliptic(h: &Poly, f: &Poly, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    let (g, inf) = match hyperelliptic_shape(h, f, ctx) {
        Ok(v) => v,
        Err(reason) => return CountResult::skipped("hyperelliptic", "-", q, &reason),
    };
    let affine: u64 = if ctx.p == 2 {
        ctx.elements()
            .map(|x| {
                let hx = h.eval(x);
                if hx.is_zero() {
                    1 // unique y = sqrt(f(x))
                } else {
                    let w = ctx.div(f.eval(x), ctx.sqr(hx));
                    if ctx.abs_trace(w) == 0 {
                        2
                    } else {
                        0
                    }
                }
            })
            .sum()
    } else {
        let four = ctx.elem_from_int(4);
        let s = f.scalar_mul(four).add(&h.mul(h));
        ctx.elements()
            .map(|x| (1 + ctx.chi(s.eval(x)) as i64) as u64)
            .sum()
    };
    CountResult::counted("hyperelliptic", "-", q, affine + inf).with_genus(g)
}

/// Oracle for [`count_hyperelliptic`]: double loop over `(x, y)`.
pub fn count_hyperelliptic_naive(h: &Poly, f: &Poly, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    let (g, inf) = match hyperelliptic_shape(h, f, ctx) {
        Ok(v) => v,
        Err(reason) => return CountResult::skipped("hyperelliptic", "-", q, &reason),
    };
    let mut affine = 0u64;
    for x in ctx.elements() {
        let hx = h.eval(x);
        let fx = f.eval(x);
        for y in ctx.elements() {
            let lhs = ctx.add(ctx.sqr(y), ctx.mul(hx, y));
            if lhs == fx {
                affine += 1;
            }
        }
    }
    CountResult::counted("hyperelliptic", "-", q, affine + inf).with_genus(g)
}

/// `(h, f)` for the pentagonal curve `D_t: y² + (3 + 5t·x)·y = x⁵`, or `None`
/// if `t` does not reduce.
pub fn poly_dt(t: &RationalParam, ctx: &Arc<FieldCtx>) -> Option<(Poly, Poly)> {
    let tb = t.reduce_in(ctx)?;
    let h = Poly::new(
        ctx,
        vec![ctx.elem_from_int(3), ctx.mul(ctx.elem_from_int(5), tb)],
    );
    let f = Poly::new(
        ctx,
        vec![
            FieldElem::ZERO,
            FieldElem::ZERO,
            FieldElem::ZERO,
            FieldElem::ZERO,
            FieldElem::ZERO,
            FieldElem::ONE,
        ],
    );
    Some((h, f))
}

/// `P_t(x) = 4(t⁵−1)x⁵ + 25t⁶x⁴ + 50t⁷x³ + 35t⁸x² + 10t⁹x + t¹⁰`, the
/// right-hand side of the genus-2 quotient curve `C_t: y² = P_t(x)`; `None`
/// if `t` does not reduce.
pub fn poly_ct(t: &RationalParam, ctx: &Arc<FieldCtx>) -> Option<Poly> {
    let tb = t.reduce_in(ctx)?;
    let tp = |k: u64| ctx.pow(tb, k);
    let ci = |c: i64| ctx.elem_from_int(c);
    let coeffs = vec![
        tp(10),
        ctx.mul(ci(10), tp(9)),
        ctx.mul(ci(35), tp(8)),
        ctx.mul(ci(50), tp(7)),
        ctx.mul(ci(25), tp(6)),
        ctx.mul(ci(4), ctx.sub(tp(5), FieldElem::ONE)),
    ];
    Some(Poly::new(ctx, coeffs))
}

/// Count the curve `D_t: y² + (3 + 5t·x)y = x⁵`.
pub fn count_dt(t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let label = t.to_string();
    let Some((h, f)) = poly_dt(t, ctx) else {
        return CountResult::skipped("hyperD", &label, ctx.q, "the denominator of t vanishes in F_q");
    };
    count_hyperelliptic(&h, &f, ctx).retag("hyperD", &label)
}

/// Count the genus-2 curve `C_t: y² = P_t(x)`.
pub fn count_ct(t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let label = t.to_string();
    let Some(p) = poly_ct(t, ctx) else {
        return CountResult::skipped("hyperC", &label, ctx.q, "the denominator of t vanishes in F_q");
    };
    let h = Poly::zero(ctx);
    count_hyperelliptic(&h, &p, ctx).retag("hyperC", &label)
}

// -- superelliptic quintic covers ---------------------------------------------------

/// Multiplicity of `a` as a root of `f`, together with the value at `a` of the
/// cofactor: returns `(m, g(a))` where `f = (x−a)^m · g` and `g(a) ≠ 0`.
fn root_multiplicity(f: &Poly, a: FieldElem) -> (u32, FieldElem) {
    let ctx = f.ctx();
    let lin = Poly::new(ctx, vec![ctx.neg(a), FieldElem::ONE]);
    let mut g = f.clone();
    let mut m = 0u32;
    loop {
        let (quot, rem) = g.divmod(&lin);
        if rem.is_zero() {
            g = quot;
            m += 1;
        } else {
            break;
        }
    }
    (m, g.eval(a))
}

/// Exact count of the smooth projective model of the quintic superelliptic
/// cover `y⁵ = f(x)` over `F_q` (`p ≠ 5`).
///
/// Per finite `x`, the fiber of the smooth model has `N₅(f(x))` points when
/// `f(x) ≠ 0`, where `N₅(v) = #{y : y⁵ = v}`; above a root of `f` of
/// multiplicity `m` it has one point if `5 ∤ m` (total ramification) and
/// `N₅(g(a))` points if `5 | m`, with `g` the cofactor.  The same rule with
/// `m = deg f` and the leading coefficient handles the places above `x = ∞`.
pub fn count_superelliptic(f: &Poly, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    if ctx.p == 5 {
        return CountResult::skipped(
            "superelliptic",
            "-",
            q,
            "the covering degree 5 equals the characteristic",
        );
    }
    let Some(d) = f.degree() else {
        return CountResult::skipped("superelliptic", "-", q, "f = 0 gives a degenerate model");
    };
    if d == 0 {
        return CountResult::skipped("superelliptic", "-", q, "deg f = 0 gives a degenerate model");
    }
    let split = (q - 1) % 5 == 0;
    let e = (q - 1) / 5;
    let n5 = |v: FieldElem| -> u64 {
        debug_assert!(!v.is_zero());
        if !split {
            1
        } else if ctx.pow(v, e) == FieldElem::ONE {
            5
        } else {
            0
        }
    };
    let mut total: u64 = if d % 5 != 0 { 1 } else { n5(f.leading()) };
    for x in ctx.elements() {
        let v = f.eval(x);
        if !v.is_zero() {
            total += n5(v);
        } else {
            let (m, unit) = root_multiplicity(f, x);
            total += if m % 5 != 0 { 1 } else { n5(unit) };
        }
    }
    CountResult::counted("superelliptic", "-", q, total)
}

/// Oracle for [`count_superelliptic`]: resolve nonzero fibers by an explicit
/// `y`-loop instead of a fifth-power character.
pub fn count_superelliptic_naive(f: &Poly, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    if ctx.p == 5 {
        return CountResult::skipped(
            "superelliptic",
            "-",
            q,
            "the covering degree 5 equals the characteristic",
        );
    }
    let Some(d) = f.degree() else {
        return CountResult::skipped("superelliptic", "-", q, "f = 0 gives a degenerate model");
    };
    if d == 0 {
        return CountResult::skipped("superelliptic", "-", q, "deg f = 0 gives a degenerate model");
    }
    let fifth = |v: FieldElem| -> u64 {
        ctx.elements().filter(|&y| ctx.pow(y, 5) == v).count() as u64
    };
    let mut total: u64 = if d % 5 != 0 { 1 } else { fifth(f.leading()) };
    for x in ctx.elements() {
        let v = f.eval(x);
        if !v.is_zero() {
            total += fifth(v);
        } else {
            let (m, unit) = root_multiplicity(f, x);
            total += if m % 5 != 0 { 1 } else { fifth(unit) };
        }
    }
    CountResult::counted("superelliptic", "-", q, total)
}

/// Which power of `t` appears in the third branch point of the first quotient
/// curve: `x²(1−x)³(x−t³)²` or `x²(1−x)³(x−t⁵)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AExponent {
    /// Branch point `t³`.
    T3,
    /// Branch point `t⁵`.
    T5,
}

/// `f` for the genus-4 quintic cover `𝒜: y⁵ = x²(1−x)³(x−t^e)²`, with
/// `e ∈ {3, 5}` chosen by `exp`; `None` if `t` does not reduce.
pub fn poly_at(t: &RationalParam, exp: AExponent, ctx: &Arc<FieldCtx>) -> Option<Poly> {
    let tb = t.reduce_in(ctx)?;
    let e = match exp {
        AExponent::T3 => 3,
        AExponent::T5 => 5,
    };
    let b = ctx.pow(tb, e);
    let x2 = Poly::from_ints(ctx, &[0, 0, 1]);
    let one_minus_x = Poly::from_ints(ctx, &[1, -1]);
    let x_minus_b = Poly::new(ctx, vec![ctx.neg(b), FieldElem::ONE]);
    let cube = one_minus_x.mul(&one_minus_x).mul(&one_minus_x);
    Some(x2.mul(&cube).mul(&x_minus_b.mul(&x_minus_b)))
}

/// `f` for the genus-4 quintic cover `ℬ: y⁵ = x²(1−x)⁴(x−t⁵)`; `None` if `t`
/// does not reduce.
pub fn poly_bt(t: &RationalParam, ctx: &Arc<FieldCtx>) -> Option<Poly> {
    let tb = t.reduce_in(ctx)?;
    let b = ctx.pow(tb, 5);
    let x2 = Poly::from_ints(ctx, &[0, 0, 1]);
    let one_minus_x = Poly::from_ints(ctx, &[1, -1]);
    let quart = {
        let sq = one_minus_x.mul(&one_minus_x);
        sq.mul(&sq)
    };
    let x_minus_b = Poly::new(ctx, vec![ctx.neg(b), FieldElem::ONE]);
    Some(x2.mul(&quart).mul(&x_minus_b))
}

fn branch_gate(tb: FieldElem, e: u64, ctx: &FieldCtx) -> Option<String> {
    if tb.is_zero() {
        return Some("t = 0 collapses the branch locus".into());
    }
    if ctx.pow(tb, e) == FieldElem::ONE {
        return Some(format!("t^{e} = 1 in F_q collapses the branch locus"));
    }
    None
}

/// Count the genus-4 curve `𝒜: y⁵ = x²(1−x)³(x−t^e)²`, `e ∈ {3, 5}`.
pub fn count_at(t: &RationalParam, exp: AExponent, ctx: &Arc<FieldCtx>) -> CountResult {
    let label = t.to_string();
    let q = ctx.q;
    if ctx.p == 5 {
        return CountResult::skipped("superA", &label, q, "the covering degree 5 equals the characteristic");
    }
    let Some(tb) = t.reduce_in(ctx) else {
        return CountResult::skipped("superA", &label, q, "the denominator of t vanishes in F_q");
    };
    let e = match exp {
        AExponent::T3 => 3,
        AExponent::T5 => 5,
    };
    if let Some(reason) = branch_gate(tb, e, ctx) {
        return CountResult::skipped("superA", &label, q, &reason);
    }
    let f = poly_at(t, exp, ctx).expect("t reduces");
    count_superelliptic(&f, ctx)
        .retag("superA", &label)
        .with_genus(4)
}

/// Count the genus-4 curve `ℬ: y⁵ = x²(1−x)⁴(x−t⁵)`.
pub fn count_bt(t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let label = t.to_string();
    let q = ctx.q;
    if ctx.p == 5 {
        return CountResult::skipped("superB", &label, q, "the covering degree 5 equals the characteristic");
    }
    let Some(tb) = t.reduce_in(ctx) else {
        return CountResult::skipped("superB", &label, q, "the denominator of t vanishes in F_q");
    };
    if let Some(reason) = branch_gate(tb, 5, ctx) {
        return CountResult::skipped("superB", &label, q, &reason);
    }
    let f = poly_bt(t, ctx).expect("t reduces");
    count_superelliptic(&f, ctx)
        .retag("superB", &label)
        .with_genus(4)
}

// -- the plane quartic --------------------------------------------------------------

/// Exact count of the plane quartic
/// `C_t: 4xy³ + x³z − 7t·xy²z + 2yz³ = 0` in `P²(F_q)`.
///
/// Skips when the residue characteristic divides 14 (degenerate coefficients),
/// when `t⁷ = 1` in `F_q` (singular fiber), or when `q` exceeds
/// [`QUARTIC_Q_MAX`].
pub fn count_plane_quartic(t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    let label = t.to_string();
    if ctx.p == 2 || ctx.p == 7 {
        return CountResult::skipped("quartic", &label, q, "the residue characteristic divides 14");
    }
    let Some(tb) = t.reduce_in(ctx) else {
        return CountResult::skipped("quartic", &label, q, "the denominator of t vanishes in F_q");
    };
    if ctx.pow(tb, 7) == FieldElem::ONE {
        return CountResult::skipped("quartic", &label, q, "t^7 = 1 in F_q (singular fiber)");
    }
    if q > QUARTIC_Q_MAX {
        return CountResult::resource_skipped(
            "quartic",
            &label,
            q,
            &format!("q exceeds the plane sweep budget {QUARTIC_Q_MAX}"),
        );
    }
    let four = ctx.elem_from_int(4);
    let two = ctx.elem_from_int(2);
    let seven_t = ctx.mul(ctx.elem_from_int(7), tb);
    // F(x, y, z) = 4xy³ + x³z − 7t·xy²z + 2yz³
    let eval = |x: FieldElem, y: FieldElem, z: FieldElem| -> FieldElem {
        let y2 = ctx.sqr(y);
        let t1 = ctx.mul(four, ctx.mul(x, ctx.mul(y2, y)));
        let t2 = ctx.mul(ctx.mul(ctx.sqr(x), x), z);
        let t3 = ctx.mul(seven_t, ctx.mul(x, ctx.mul(y2, z)));
        let t4 = ctx.mul(two, ctx.mul(y, ctx.mul(ctx.sqr(z), z)));
        ctx.add(ctx.sub(ctx.add(t1, t2), t3), t4)
    };
    let mut total = 0u64;
    for x in ctx.elements() {
        for y in ctx.elements() {
            if eval(x, y, FieldElem::ONE).is_zero() {
                total += 1;
            }
        }
    }
    for x in ctx.elements() {
        if eval(x, FieldElem::ONE, FieldElem::ZERO).is_zero() {
            total += 1;
        }
    }
    if eval(FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO).is_zero() {
        total += 1;
    }
    CountResult::counted("quartic", &label, q, total)
}

// -- the quintic threefold -------------------------------------------------------------

/// Exact count of the quintic threefold
/// `Y_t: X₁⁵ + X₂⁵ + X₃⁵ + X₄⁵ + X₅⁵ = 5t·X₁X₂X₃X₄X₅` in `P⁴(F_q)`.
///
/// Sweeps four affine-cone coordinates and resolves the fifth through a
/// precomputed fiber histogram, so the work is `O(q⁴)`; fields larger than
/// [`QUINTIC_Q_MAX`] are refused with a resource skip.
pub fn count_quintic_threefold(t: &RationalParam, ctx: &Arc<FieldCtx>) -> CountResult {
    let q = ctx.q;
    let label = t.to_string();
    let Some(tb) = t.reduce_in(ctx) else {
        return CountResult::skipped("quintic", &label, q, "the denominator of t vanishes in F_q");
    };
    if q > QUINTIC_Q_MAX {
        return CountResult::resource_skipped(
            "quintic",
            &label,
            q,
            &format!("q exceeds the O(q^4) sweep budget {QUINTIC_Q_MAX}"),
        );
    }
    let qs = q as usize;
    let elems: Vec<FieldElem> = ctx.elements().collect();
    // pw[i] = (element i)⁵
    let pw: Vec<FieldElem> = elems.iter().map(|&x| ctx.pow(x, 5)).collect();
    // hist[c·q + s] = #{x₅ : x₅⁵ − c·x₅ + s = 0}
    let mut hist = vec![0u32; qs * qs];
    for &c in &elems {
        for (i, &x5) in elems.iter().enumerate() {
            let s = ctx.sub(ctx.mul(c, x5), pw[i]);
            hist[c.0 as usize * qs + s.0 as usize] += 1;
        }
    }
    let c5t = ctx.mul(ctx.elem_from_int(5), tb);
    let cone: u64 = elems
        .par_iter()
        .map(|&x1| {
            let mut acc = 0u64;
            let s1 = pw[x1.0 as usize];
            for &x2 in &elems {
                let s2 = ctx.add(s1, pw[x2.0 as usize]);
                let p2 = ctx.mul(x1, x2);
                for &x3 in &elems {
                    let s3 = ctx.add(s2, pw[x3.0 as usize]);
                    let p3 = ctx.mul(p2, x3);
                    for &x4 in &elems {
                        let s = ctx.add(s3, pw[x4.0 as usize]);
                        let c = ctx.mul(c5t, ctx.mul(p3, x4));
                        acc += hist[c.0 as usize * qs + s.0 as usize] as u64;
                    }
                }
            }
            acc
        })
        .sum();
    debug_assert_eq!((cone - 1) % (q - 1), 0);
    let projective = (cone - 1) / (q - 1);
    CountResult::counted("quintic", &label, q, projective)
}

// -- genus-2 L-polynomials -------------------------------------------------------------

/// The numerator `L(T) = 1 + c₁T + c₂T² + q·c₁T³ + q²T⁴` of the zeta function
/// of a genus-2 curve, reconstructed from its counts over `F_q` and `F_{q²}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPoly {
    /// Base field size.
    pub q: u64,
    /// Coefficients `[1, c₁, c₂, q·c₁, q²]`, constant term first.
    pub coeffs: [i128; 5],
}

impl LPoly {
    /// The trace of Frobenius `a₁ = q + 1 − #C(F_q) = −c₁`.
    pub fn a1(&self) -> i128 {
        -self.coeffs[1]
    }

    /// Check the Riemann hypothesis for the curve: all reciprocal roots of
    /// `L` have absolute value `√q`.  Uses the palindromic substitution
    /// `w = α + q/α`, which reduces the condition to a real quadratic having
    /// both roots in `[−2√q, 2√q]` (tolerance `1e-6`).
    pub fn weil_ok(&self) -> bool {
        let c1 = self.coeffs[1] as f64;
        let c2 = self.coeffs[2] as f64;
        let q = self.q as f64;
        // Reciprocal roots α satisfy α⁴ + c₁α³ + c₂α² + qc₁α + q² = 0;
        // dividing by α² gives (w² − 2q) + c₁w + c₂ = 0 with w = α + q/α.
        let disc = c1 * c1 - 4.0 * (c2 - 2.0 * q);
        if disc < -1e-6 {
            return false;
        }
        let sd = disc.max(0.0).sqrt();
        let bound = 2.0 * q.sqrt() + 1e-6;
        let w1 = (-c1 - sd) / 2.0;
        let w2 = (-c1 + sd) / 2.0;
        w1.abs() <= bound && w2.abs() <= bound
    }
}

/// Reconstruct the genus-2 L-polynomial from `n1 = #C(F_q)` and
/// `n2 = #C(F_{q²})`.
pub fn genus2_lpoly(n1: u64, n2: u64, q: u64) -> Result<LPoly, CountError> {
    let qi = q as i128;
    let a1 = qi + 1 - n1 as i128;
    let p2 = qi * qi + 1 - n2 as i128;
    let num = a1 * a1 - p2;
    if num % 2 != 0 {
        return Err(CountError::BadParam(format!(
            "inconsistent counts: a₁² − p₂ = {num} is odd"
        )));
    }
    let c1 = -a1;
    let c2 = num / 2;
    Ok(LPoly {
        q,
        coeffs: [1, c1, c2, qi * c1, qi * qi],
    })
}

// -- tests ------------------------------------------------------------------------------
