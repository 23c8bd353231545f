//! Residual monodromy of the Dwork family, computed and verified exactly.
//!
//! The Dwork family `x_1 + ... + x_n + 1/(x_1 ... x_n) = (n+1) t` carries, at
//! each prime of its coefficient field, a residual monodromy group generated
//! by two explicit integer companion matrices reduced into a small finite
//! field. This crate rebuilds those generators, identifies the group they
//! generate (symplectic, orthogonal of either type, a symmetric group in its
//! standard representation, or dihedral for `n = 2`), and verifies — by raw
//! point counting over finite fields — the trace congruences and exact count
//! identities that the family satisfies.
//!
//! # Modules
//!
//! * [`ff`] — small finite fields `F_{p^r}` (`q ≤ 2^16`) with table-driven
//!   arithmetic, traces, and roots of unity.
//! * [`linalg`] — dense and bit-packed matrices over those fields:
//!   characteristic polynomials, symplectic tests, linear solving.
//! * [`grp`] — matrix-group machinery: BFS enumeration, deterministic
//!   Schreier–Sims orders, certified large-group orders, order histograms.
//! * [`qform`] — quadratic forms in characteristic 2: plus/minus standard
//!   forms, type classification, invariant forms of a matrix group.
//! * [`dwork`] — the generators `A`, `B`, the unipotent conjugator `P`, the
//!   standard representations of symmetric groups, and the classifier
//!   [`dwork::classify_md`].
//! * [`count`] — exact point counts: the family's affine fibers, hyperelliptic
//!   and superelliptic curves, a plane quartic, the quintic threefold, and
//!   genus-2 L-polynomials.
//! * [`verify`] — the identity suite tying counts together (parity, mod-3,
//!   exact total, isogeny, discriminants, Galois degree patterns, image
//!   containment).
//! * [`cli`] — the `dworklab` command line: `classify`, `verify`, `count`,
//!   JSON-lines output, deterministic under `--threads`.
//!
//! # Quick start
//!
//! ```
//! use dworklab::dwork::{classify_md, DworkParams, Verdict};
//!
//! // n = 4, N = 5: the residual monodromy is S_5 in its 4-dimensional
//! // standard representation over F_2, of order 120.
//! let params = DworkParams::new(4, 5, 2).unwrap();
//! let class = classify_md(&params).unwrap();
//! assert_eq!(class.verdict, Verdict::Symmetric(5));
//! assert_eq!(class.order.to_string(), "120");
//! ```

pub mod cli;
pub mod count;
pub mod dwork;
pub mod ff;
pub mod grp;
pub mod linalg;
pub mod qform;
pub mod verify;
