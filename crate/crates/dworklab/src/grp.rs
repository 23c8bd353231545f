//! Finitely generated matrix groups over small finite fields.
//!
//! Three complementary tools, each with its own scale:
//!
//! * [`generate_bfs`] — exact closure enumeration for groups of at most a
//!   few million elements.
//! * [`MatGroup::bsgs_order`] — a deterministic Schreier–Sims computation on
//!   the action on nonzero vectors, for action degrees up to 10⁶. Every
//!   Schreier generator is processed, so the resulting order
//!   (the product of orbit lengths along the stabilizer chain) is exact.
//! * [`MatGroup::order_certified`] — for degrees beyond the deterministic
//!   bound: a randomized stabilizer chain whose orbit-length product is
//!   always a true *lower* bound, certified exact when it meets an
//!   independently derived upper bound.
//!
//! ```
//! use dworklab::ff::field_make;
//! use dworklab::linalg::Mat;
//! use dworklab::grp::MatGroup;
//!
//! let f2 = field_make(2, 1).unwrap();
//! let swap = Mat::from_int_rows(&f2, &[vec![0, 1], vec![1, 0]]);
//! let g = MatGroup::new(vec![swap]).unwrap();
//! assert_eq!(g.bsgs_order().unwrap().to_string(), "2");
//! ```

use crate::ff::{FieldCtx, FieldElem};
use crate::linalg::Mat;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;
use std::sync::OnceLock;
use thiserror::Error;

/// Hard budget for exact BFS enumeration.
pub const BFS_CAP_MAX: usize = 10_000_000;
/// Largest action degree (number of nonzero vectors) accepted by the
/// deterministic Schreier–Sims path.
pub const BSGS_DEGREE_MAX: u128 = 1_000_000;
/// Orbits are stored in flat arrays when the ambient point space `q^n` is at
/// most this large; beyond it a hash map is used per level.
/// Hard bound on the point space for the randomized stabilizer chain
/// (vectors are enumerated in a flat table).
pub const FLAT_LIMIT: u128 = 1 << 26;

#[derive(Debug, Error)]
pub enum GrpError {
    #[error("generator set is empty")]
    Empty,
    #[error("generators live over different fields")]
    MixedFields,
    #[error("generator {0} is not square")]
    NotSquare(usize),
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("element budget {cap} exceeded during enumeration")]
    Overflow { cap: usize },
    #[error("action degree {degree} exceeds the supported bound {bound}")]
    DegreeTooLarge { degree: u128, bound: u128 },
}

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

/// Closure of `gens` under multiplication, by breadth-first search with
/// hashing of the packed matrix representation. Returns the elements in
/// discovery order (identity first), or an overflow error past `cap`.
pub fn generate_bfs(gens: &[Mat], cap: usize) -> Result<Vec<Mat>, GrpError> {
    validate(gens)?;
    assert!(cap <= BFS_CAP_MAX, "enumeration budget above the supported cap");
    let ctx = gens[0].ctx();
    let n = gens[0].rows();
    let identity = Mat::identity(ctx, n);
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut out: Vec<Mat> = Vec::new();
    let mut queue: VecDeque<Mat> = VecDeque::new();
    seen.insert(identity.clone());
    out.push(identity.clone());
    queue.push_back(identity);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.mul(h);
            if !seen.contains(&gh) {
                if out.len() >= cap {
                    return Err(GrpError::Overflow { cap });
                }
                seen.insert(gh.clone());
                out.push(gh.clone());
                queue.push_back(gh);
            }
        }
    }
    Ok(out)
}

fn validate(gens: &[Mat]) -> Result<(), GrpError> {
    if gens.is_empty() {
        return Err(GrpError::Empty);
    }
    let ctx = gens[0].ctx();
    let n = gens[0].rows();
    for (i, g) in gens.iter().enumerate() {
        if !g.is_square() {
            return Err(GrpError::NotSquare(i));
        }
        if g.rows() != n || g.ctx().p != ctx.p || g.ctx().r != ctx.r || g.ctx().modulus != ctx.modulus
        {
            return Err(GrpError::MixedFields);
        }
        if g.inv().is_none() {
            return Err(GrpError::NotInvertible(i));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Point codec: vectors of k^n as integers 0..q^n
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct PointCodec {
    ctx: Arc<FieldCtx>,
    n: usize,
    q: u64,
    /// Fast path: over F_2 with packed matrices, a point code *is* the bit
    /// vector expected by `apply_bits`.
    bits: bool,
}

impl PointCodec {
    fn new(ctx: &Arc<FieldCtx>, n: usize) -> PointCodec {
        PointCodec {
            ctx: Arc::clone(ctx),
            n,
            q: ctx.q,
            bits: ctx.p == 2 && ctx.r == 1 && n <= 64,
        }
    }

    /// Code of the basis vector `e_i`.
    fn basis(&self, i: usize) -> u64 {
        self.q.pow(i as u32)
    }

    fn decode(&self, mut code: u64) -> Vec<FieldElem> {
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push(FieldElem((code % self.q) as u32));
            code /= self.q;
        }
        v
    }

    fn apply(&self, g: &Mat, code: u64) -> u64 {
        if self.bits && g.is_packed() {
            return g.apply_bits(code);
        }
        let v = self.decode(code);
        let w = g.apply(&v);
        w.iter()
            .rev()
            .fold(0u64, |acc, x| acc * self.q + x.0 as u64)
    }
}

// ---------------------------------------------------------------------------
// Deterministic Schreier–Sims
// ---------------------------------------------------------------------------

struct Level {
    base: u64,
    index: HashMap<u64, u32>,
    pts: Vec<u64>,
    /// trans[i] maps the base point to pts[i]; trans_inv[i] is its inverse.
    trans: Vec<Mat>,
    trans_inv: Vec<Mat>,
}

impl Level {
    fn new(ctx: &Arc<FieldCtx>, n: usize, base: u64) -> Level {
        let id = Mat::identity(ctx, n);
        let mut index = HashMap::new();
        index.insert(base, 0);
        Level {
            base,
            index,
            pts: vec![base],
            trans: vec![id.clone()],
            trans_inv: vec![id],
        }
    }
}

struct Bsgs {
    codec: PointCodec,
    n: usize,
    levels: Vec<Level>,
    /// Effective generator list per level: every stored strong generator
    /// fixing that level's predecessors, as `(g, g⁻¹)` pairs.
    eff: Vec<Vec<(Mat, Mat)>>,
    order: BigUint,
}

impl Bsgs {
    fn build(gens: &[Mat]) -> Bsgs {
        let ctx = gens[0].ctx();
        let n = gens[0].rows();
        let mut b = Bsgs {
            codec: PointCodec::new(ctx, n),
            n,
            levels: Vec::new(),
            eff: Vec::new(),
            order: BigUint::from(1u32),
        };
        // Schreier pairs awaiting processing: (level, orbit position, gen id).
        let mut queue: VecDeque<(usize, u32, u32)> = VecDeque::new();
        for g in gens {
            if !g.is_identity() {
                b.store(0, g.clone(), &mut queue);
            }
        }
        while let Some((lvl, pos, gid)) = queue.pop_front() {
            let p = b.levels[lvl].pts[pos as usize];
            let g = b.eff[lvl][gid as usize].0.clone();
            let img = b.codec.apply(&g, p);
            let ipos = b.levels[lvl].index[&img] as usize;
            // Schreier generator: u_img⁻¹ · g · u_p fixes this level's base.
            let schreier = b.levels[lvl].trans_inv[ipos]
                .mul(&g)
                .mul(&b.levels[lvl].trans[pos as usize]);
            if schreier.is_identity() {
                continue;
            }
            // Strip through deeper levels; store the residue where it falls out.
            let mut h = schreier;
            let mut j = lvl + 1;
            loop {
                if h.is_identity() {
                    break;
                }
                if j == b.levels.len() {
                    b.store(j, h, &mut queue);
                    break;
                }
                let img2 = b.codec.apply(&h, b.levels[j].base);
                match b.levels[j].index.get(&img2) {
                    Some(&pos2) => {
                        h = b.levels[j].trans_inv[pos2 as usize].mul(&h);
                        j += 1;
                    }
                    None => {
                        b.store(j, h, &mut queue);
                        break;
                    }
                }
            }
        }
        b.order = b
            .levels
            .iter()
            .map(|l| BigUint::from(l.pts.len() as u64))
            .product();
        b
    }

    /// Store a strong generator at `lvl` (it fixes the bases of all earlier
    /// levels), creating the level if needed, and extend every affected orbit.
    fn store(&mut self, lvl: usize, g: Mat, queue: &mut VecDeque<(usize, u32, u32)>) {
        if lvl == self.levels.len() {
            // New level: base is the first basis vector the generator moves.
            let base = (0..self.n)
                .map(|i| self.codec.basis(i))
                .find(|&pt| self.codec.apply(&g, pt) != pt)
                .expect("non-identity generator fixes every basis vector");
            self.levels.push(Level::new(g.ctx(), self.n, base));
            self.eff.push(Vec::new());
        }
        let ginv = g.inv().expect("strong generators are invertible");
        for j in (0..=lvl).rev() {
            self.eff[j].push((g.clone(), ginv.clone()));
            let gid = (self.eff[j].len() - 1) as u32;
            self.extend(j, gid, queue);
        }
    }

    /// A new generator `gid` joined level `lvl`: enqueue Schreier pairs for
    /// the existing orbit, then grow the orbit and enqueue pairs for every
    /// newly reached point.
    fn extend(&mut self, lvl: usize, gid: u32, queue: &mut VecDeque<(usize, u32, u32)>) {
        let existing = self.levels[lvl].pts.len();
        for pos in 0..existing {
            queue.push_back((lvl, pos as u32, gid));
        }
        // Reach new points: first sweep old points with the new generator,
        // then breadth-first with all generators from whatever was added.
        let mut cursor_new = self.levels[lvl].pts.len();
        for pos in 0..existing {
            self.reach(lvl, pos, gid as usize, queue);
        }
        while cursor_new < self.levels[lvl].pts.len() {
            for g in 0..self.eff[lvl].len() {
                self.reach(lvl, cursor_new, g, queue);
            }
            cursor_new += 1;
        }
    }

    fn reach(
        &mut self,
        lvl: usize,
        pos: usize,
        gid: usize,
        queue: &mut VecDeque<(usize, u32, u32)>,
    ) {
        let p = self.levels[lvl].pts[pos];
        let (g, ginv) = (&self.eff[lvl][gid].0, &self.eff[lvl][gid].1);
        let img = self.codec.apply(g, p);
        if self.levels[lvl].index.contains_key(&img) {
            return;
        }
        let t = g.mul(&self.levels[lvl].trans[pos]);
        let tinv = self.levels[lvl].trans_inv[pos].mul(ginv);
        let level = &mut self.levels[lvl];
        let new_pos = level.pts.len() as u32;
        level.index.insert(img, new_pos);
        level.pts.push(img);
        level.trans.push(t);
        level.trans_inv.push(tinv);
        // Schreier pairs for the newcomer against every current generator.
        for g2 in 0..self.eff[lvl].len() {
            queue.push_back((lvl, new_pos, g2 as u32));
        }
    }

    /// Sift a matrix through the chain: `true` iff it reduces to the identity.
    fn member(&self, g: &Mat) -> bool {
        let mut h = g.clone();
        for j in 0..self.levels.len() {
            if h.is_identity() {
                return true;
            }
            let img = self.codec.apply(&h, self.levels[j].base);
            match self.levels[j].index.get(&img) {
                Some(&pos) => h = self.levels[j].trans_inv[pos as usize].mul(&h),
                None => return false,
            }
        }
        h.is_identity()
    }
}

// ---------------------------------------------------------------------------
// MatGroup
// ---------------------------------------------------------------------------

/// A matrix group given by generators, with cached Schreier–Sims data.
pub struct MatGroup {
    ctx: Arc<FieldCtx>,
    n: usize,
    gens: Vec<Mat>,
    bsgs: OnceLock<Bsgs>,
}

impl MatGroup {
    pub fn new(gens: Vec<Mat>) -> Result<MatGroup, GrpError> {
        validate(&gens)?;
        let ctx = Arc::clone(gens[0].ctx());
        let n = gens[0].rows();
        Ok(MatGroup {
            ctx,
            n,
            gens,
            bsgs: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }

    /// The number of nonzero vectors acted on.
    pub fn action_degree(&self) -> u128 {
        (self.ctx.q as u128).pow(self.n as u32) - 1
    }

    fn bsgs(&self) -> Result<&Bsgs, GrpError> {
        let degree = self.action_degree();
        if degree > BSGS_DEGREE_MAX {
            return Err(GrpError::DegreeTooLarge {
                degree,
                bound: BSGS_DEGREE_MAX,
            });
        }
        Ok(self.bsgs.get_or_init(|| Bsgs::build(&self.gens)))
    }

    /// Exact group order by deterministic Schreier–Sims on the vector action.
    /// Cached after the first call.
    pub fn bsgs_order(&self) -> Result<BigUint, GrpError> {
        Ok(self.bsgs()?.order.clone())
    }

    /// Membership test by sifting through the stabilizer chain.
    pub fn contains(&self, g: &Mat) -> Result<bool, GrpError> {
        if g.rows() != self.n || !g.is_square() {
            return Ok(false);
        }
        Ok(self.bsgs()?.member(g))
    }

    /// Exact (when the group enumerates within `10⁶` elements) or sampled
    /// histogram of element orders.
    pub fn element_order_histogram(&self, sample: usize, seed: u64) -> OrderHistogram {
        match generate_bfs(&self.gens, 1_000_000) {
            Ok(elements) => {
                let cap = elements.len() as u64 + 1;
                let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
                for g in &elements {
                    let o = g.order(cap).expect("element order bounded by group order");
                    *counts.entry(o).or_insert(0) += 1;
                }
                OrderHistogram {
                    counts,
                    exact: true,
                    sample: None,
                }
            }
            Err(_) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pool = self.replacement_pool(&mut rng);
                let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
                for _ in 0..sample {
                    let g = draw(&mut pool, &mut rng);
                    let o = g
                        .order(10_000_000)
                        .expect("element order beyond the iteration budget");
                    *counts.entry(o).or_insert(0) += 1;
                }
                OrderHistogram {
                    counts,
                    exact: false,
                    sample: Some(sample as u64),
                }
            }
        }
    }

    fn replacement_pool(&self, rng: &mut ChaCha8Rng) -> Vec<Mat> {
        let mut pool: Vec<Mat> = Vec::new();
        while pool.len() < 8 {
            pool.extend(self.gens.iter().cloned());
        }
        // Burn-in mixing.
        for _ in 0..50 {
            let _ = draw(&mut pool, rng);
        }
        pool
    }

    /// Certified exact order for degrees beyond the deterministic bound.
    ///
    /// Builds a randomized stabilizer chain from sifted random subproducts of
    /// the generators. Every transversal element is a true group element, so
    /// the product of orbit lengths never exceeds the order; when it reaches
    /// `upper` — an upper bound established by independent means (typically
    /// the order of the full isometry group of an invariant form) — the order
    /// is exactly `upper`. Returns `None` when the budget runs out before the
    /// bounds meet (never a guess).
    pub fn order_certified(&self, upper: &BigUint, seed: u64, rounds: usize) -> Option<BigUint> {
        let space = (self.ctx.q as u128).pow(self.n as u32);
        assert!(
            space <= FLAT_LIMIT,
            "point space too large for the randomized chain"
        );
        let mut chain = RandChain::new(&self.ctx, self.n);
        for g in &self.gens {
            chain.feed(g.clone());
            if &chain.order() == upper {
                return Some(upper.clone());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool = self.replacement_pool(&mut rng);
        for _ in 0..rounds {
            let w = draw(&mut pool, &mut rng);
            chain.feed(w);
            let lower = chain.order();
            debug_assert!(&lower <= upper, "lower bound passed the upper bound");
            if &lower == upper {
                return Some(upper.clone());
            }
        }
        None
    }
}

/// One product-replacement step: replace a random pool slot with its product
/// by another slot (possibly inverted) and return the result.
fn draw(pool: &mut Vec<Mat>, rng: &mut ChaCha8Rng) -> Mat {
    let i = rng.gen_range(0..pool.len());
    let j = rng.gen_range(0..pool.len());
    let rhs = if rng.gen_bool(0.5) {
        pool[j].clone()
    } else {
        pool[j].inv().expect("pool elements are invertible")
    };
    let w = pool[i].mul(&rhs);
    pool[i] = w.clone();
    w
}

/// Element-order statistics for a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderHistogram {
    pub counts: BTreeMap<u64, u64>,
    pub exact: bool,
    pub sample: Option<u64>,
}

// ---------------------------------------------------------------------------
// Randomized chain (lower bounds for large degrees)
// ---------------------------------------------------------------------------

enum Transversal {
    /// Indexed by point code: 0 = absent, 1 = base, k ≥ 2 = reached via
    /// generator k−2 from `prev[code]`.
    Flat { tag: Vec<u8>, prev: Vec<u32> },
    Hash(HashMap<u64, (u32, u64)>),
}

struct RLevel {
    base: u64,
    t: Transversal,
    pts: Vec<u64>,
    orbit_len: u64,
}

impl RLevel {
    fn new(space: u128, base: u64) -> RLevel {
        // The first level of a large action gets the flat layout; deeper
        // stabilizer orbits are small and hash well.
        let t = if space <= (1 << 22) as u128 {
            Transversal::Flat {
                tag: vec![0u8; space as usize],
                prev: vec![0u32; space as usize],
            }
        } else {
            Transversal::Hash(HashMap::new())
        };
        let mut lvl = RLevel {
            base,
            t,
            pts: Vec::new(),
            orbit_len: 0,
        };
        lvl.insert(base, 0, 0, true);
        lvl
    }

    fn new_flat(space: u128, base: u64) -> RLevel {
        let t = Transversal::Flat {
            tag: vec![0u8; space as usize],
            prev: vec![0u32; space as usize],
        };
        let mut lvl = RLevel {
            base,
            t,
            pts: Vec::new(),
            orbit_len: 0,
        };
        lvl.insert(base, 0, 0, true);
        lvl
    }

    fn contains(&self, pt: u64) -> bool {
        match &self.t {
            Transversal::Flat { tag, .. } => tag[pt as usize] != 0,
            Transversal::Hash(m) => m.contains_key(&pt),
        }
    }

    /// Record `pt` reached from `prev` by generator `gid`.
    fn insert(&mut self, pt: u64, gid: u32, prev: u64, is_base: bool) {
        match &mut self.t {
            Transversal::Flat { tag, prev: pv } => {
                tag[pt as usize] = if is_base { 1 } else { (gid + 2) as u8 };
                pv[pt as usize] = prev as u32;
            }
            Transversal::Hash(m) => {
                m.insert(pt, (if is_base { u32::MAX } else { gid }, prev));
            }
        }
        self.pts.push(pt);
        self.orbit_len += 1;
    }

    /// Walk back to the base, collecting generator ids (nearest first).
    fn path(&self, mut pt: u64) -> Vec<u32> {
        let mut ids = Vec::new();
        loop {
            match &self.t {
                Transversal::Flat { tag, prev } => {
                    let t = tag[pt as usize];
                    debug_assert!(t != 0);
                    if t == 1 {
                        break;
                    }
                    ids.push((t - 2) as u32);
                    pt = prev[pt as usize] as u64;
                }
                Transversal::Hash(m) => {
                    let &(gid, prev) = m.get(&pt).expect("point not in orbit");
                    if gid == u32::MAX {
                        break;
                    }
                    ids.push(gid);
                    pt = prev;
                }
            }
        }
        ids
    }
}

struct RandChain {
    codec: PointCodec,
    n: usize,
    space: u128,
    levels: Vec<RLevel>,
    /// eff[j]: generators fixing the bases of levels < j, as (g, g⁻¹).
    eff: Vec<Vec<(Mat, Mat)>>,
}

impl RandChain {
    fn new(ctx: &Arc<FieldCtx>, n: usize) -> RandChain {
        RandChain {
            codec: PointCodec::new(ctx, n),
            n,
            space: (ctx.q as u128).pow(n as u32),
            levels: Vec::new(),
            eff: Vec::new(),
        }
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.orbit_len))
            .product()
    }

    /// `u⁻¹` for the transversal element mapping the level's base to `pt`.
    fn trans_inv(&self, lvl: usize, pt: u64) -> Mat {
        let ids = self.levels[lvl].path(pt);
        let ctx = self.codec.ctx.clone();
        let mut u_inv = Mat::identity(&ctx, self.n);
        // u = g_m ⋯ g_1 (ids are collected nearest-to-pt first, i.e.
        // [g_m, …, g_1]); u⁻¹ = g_1⁻¹ ⋯ g_m⁻¹.
        for &id in ids.iter().rev() {
            u_inv = u_inv.mul(&self.eff[lvl][id as usize].1);
        }
        u_inv
    }

    /// Sift a group element; non-identity residues extend the chain.
    fn feed(&mut self, g: Mat) {
        let mut h = g;
        let mut j = 0usize;
        loop {
            if h.is_identity() {
                return;
            }
            if j == self.levels.len() {
                let base = (0..self.n)
                    .map(|i| self.codec.basis(i))
                    .find(|&pt| self.codec.apply(&h, pt) != pt)
                    .expect("non-identity element fixes every basis vector");
                let lvl = if j == 0 && self.space > (1 << 22) as u128 {
                    RLevel::new_flat(self.space, base)
                } else {
                    RLevel::new(self.space, base)
                };
                self.levels.push(lvl);
                self.eff.push(Vec::new());
                self.add_gen(j, h);
                return;
            }
            let img = self.codec.apply(&h, self.levels[j].base);
            if self.levels[j].contains(img) {
                h = self.trans_inv(j, img).mul(&h);
                j += 1;
            } else {
                self.add_gen(j, h);
                return;
            }
        }
    }

    /// Add a generator at level `lvl` (suffix semantics: it joins every level
    /// up to `lvl`) and grow the affected orbits.
    fn add_gen(&mut self, lvl: usize, g: Mat) {
        let ginv = g.inv().expect("chain elements are invertible");
        for j in (0..=lvl).rev() {
            self.eff[j].push((g.clone(), ginv.clone()));
            let gid = (self.eff[j].len() - 1) as u32;
            // Sweep existing points with the new generator, then BFS.
            let existing = self.levels[j].pts.len();
            for pos in 0..existing {
                let p = self.levels[j].pts[pos];
                let img = self.codec.apply(&self.eff[j][gid as usize].0, p);
                if !self.levels[j].contains(img) {
                    self.levels[j].insert(img, gid, p, false);
                }
            }
            let mut cursor = existing;
            while cursor < self.levels[j].pts.len() {
                let p = self.levels[j].pts[cursor];
                for k in 0..self.eff[j].len() {
                    let img = self.codec.apply(&self.eff[j][k].0, p);
                    if !self.levels[j].contains(img) {
                        self.levels[j].insert(img, k as u32, p, false);
                    }
                }
                cursor += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Classical group orders
// ---------------------------------------------------------------------------

/// `|GL_n(q)| = ∏_{i=0}^{n−1} (q^n − q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    (0..n)
        .map(|i| &qn - BigUint::from(q).pow(i as u32))
        .product()
}

/// `|Sp_{2m}(q)| = q^{m²} ∏_{i=1}^{m} (q^{2i} − 1)` for even dimension `n = 2m`.
pub fn sp_order(n: usize, q: u64) -> BigUint {
    assert!(n % 2 == 0 && n > 0, "symplectic groups have even dimension");
    let m = (n / 2) as u32;
    let q = BigUint::from(q);
    let mut o = q.pow(m * m);
    for i in 1..=m {
        o *= q.pow(2 * i) - BigUint::from(1u32);
    }
    o
}

/// `|O^ε_{2m}(q)| = 2 q^{m(m−1)} (q^m − ε) ∏_{i=1}^{m−1} (q^{2i} − 1)`,
/// with `ε = +1` for `plus` and `−1` otherwise.
pub fn orth_order(n: usize, q: u64, plus: bool) -> BigUint {
    assert!(n % 2 == 0 && n > 0, "even-dimensional orthogonal groups only");
    let m = (n / 2) as u32;
    let q = BigUint::from(q);
    let qm = q.pow(m);
    let middle = if plus {
        qm - BigUint::from(1u32)
    } else {
        qm + BigUint::from(1u32)
    };
    let mut o = BigUint::from(2u32) * q.pow(m * (m - 1)) * middle;
    for i in 1..m {
        o *= q.pow(2 * i) - BigUint::from(1u32);
    }
    o
}

/// `k!` as a big integer.
pub fn factorial(k: u64) -> BigUint {
    (1..=k).map(BigUint::from).product::<BigUint>().max(BigUint::from(1u32))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::field_make;
    use crate::linalg::symplectic_j;

    fn f2() -> Arc<FieldCtx> {
        field_make(2, 1).unwrap()
    }

    /// Companion matrices of (X−1)^n mod 2 and of 1 + X + ⋯ + X^n.
    fn dwork_gens_f2(n: usize) -> (Mat, Mat) {
        let ctx = f2();
        let binom = |n: usize, k: usize| -> i64 {
            let mut c: u128 = 1;
            for i in 0..k {
                c = c * (n - i) as u128 / (i + 1) as u128;
            }
            (c % 2) as i64
        };
        let mut a = Mat::zero(&ctx, n, n);
        let mut b = Mat::zero(&ctx, n, n);
        for i in 1..n {
            a.set(i, i - 1, FieldElem::ONE);
            b.set(i, i - 1, FieldElem::ONE);
        }
        for i in 0..n {
            // (X−1)^n has coefficients ±C(n, k); mod 2 the signs vanish.
            a.set(i, n - 1, ctx.elem_from_int(binom(n, n - i)));
            b.set(i, n - 1, FieldElem::ONE);
        }
        (a, b)
    }

    #[test]
    fn trivial_group() {
        let ctx = f2();
        let id = Mat::identity(&ctx, 3);
        let els = generate_bfs(&[id.clone()], 10).unwrap();
        assert_eq!(els.len(), 1);
        let g = MatGroup::new(vec![id]).unwrap();
        assert_eq!(g.bsgs_order().unwrap(), BigUint::from(1u32));
        let h = g.element_order_histogram(0, 0);
        assert!(h.exact);
        assert_eq!(h.counts, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn s5_image_enumerates_to_120() {
        let (a, b) = dwork_gens_f2(4);
        let els = generate_bfs(&[a.clone(), b.clone()], 1000).unwrap();
        assert_eq!(els.len(), 120);
        let g = MatGroup::new(vec![a, b]).unwrap();
        assert_eq!(g.bsgs_order().unwrap(), BigUint::from(120u32));
        // Exact element-order histogram matches the conjugacy data of S_5.
        let h = g.element_order_histogram(0, 0);
        assert!(h.exact);
        assert_eq!(
            h.counts,
            BTreeMap::from([(1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20)])
        );
    }

    #[test]
    fn s8_image_order_40320() {
        let (a, b) = dwork_gens_f2(6);
        let g = MatGroup::new(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(g.bsgs_order().unwrap(), BigUint::from(40320u32));
        let els = generate_bfs(&[a, b], 100_000).unwrap();
        assert_eq!(els.len(), 40320);
    }

    #[test]
    fn symplectic_transvections_generate_sp4() {
        // x ↦ x + ⟨x, v⟩v for all nonzero v generates Sp_4(F_2), of order
        // 2⁴·(2²−1)(2⁴−1) = 720.
        let ctx = f2();
        let j = symplectic_j(&ctx, 2);
        let mut gens = Vec::new();
        for code in 1u64..16 {
            let v: Vec<FieldElem> = (0..4).map(|i| FieldElem((code >> i & 1) as u32)).collect();
            let jv = j.apply(&v);
            let t = Mat::from_fn(&ctx, 4, 4, |r, c| {
                let outer = ctx.mul(v[r], jv[c]);
                if r == c {
                    ctx.add(FieldElem::ONE, outer)
                } else {
                    outer
                }
            });
            gens.push(t);
        }
        let els = generate_bfs(&gens, 10_000).unwrap();
        assert_eq!(els.len(), 720);
        assert_eq!(sp_order(4, 2), BigUint::from(720u32));
        let g = MatGroup::new(gens).unwrap();
        assert_eq!(g.bsgs_order().unwrap(), BigUint::from(720u32));
        // The certified path agrees when handed the true order as the bound,
        // and refuses to certify a wrong bound.
        assert_eq!(
            g.order_certified(&BigUint::from(720u32), 42, 200),
            Some(BigUint::from(720u32))
        );
        assert_eq!(g.order_certified(&BigUint::from(1440u32), 42, 50), None);
    }

    #[test]
    fn dihedral_image_over_f4() {
        // n = 2, N = 5: Ā = [[0,1],[1,0]], B̄ = [[0,1],[1,w]] with w a cube
        // root of unity; the image is dihedral of order 10.
        let f4 = field_make(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.elem_order(w).unwrap(), 3);
        let a = Mat::from_int_rows(&f4, &[vec![0, 1], vec![1, 0]]);
        let mut b = Mat::zero(&f4, 2, 2);
        b.set(0, 1, FieldElem::ONE);
        b.set(1, 0, FieldElem::ONE);
        b.set(1, 1, w);
        let els = generate_bfs(&[a.clone(), b.clone()], 100).unwrap();
        assert_eq!(els.len(), 10);
        let g = MatGroup::new(vec![a, b]).unwrap();
        assert_eq!(g.bsgs_order().unwrap(), BigUint::from(10u32));
        let h = g.element_order_histogram(0, 0);
        assert!(h.exact);
        assert_eq!(h.counts, BTreeMap::from([(1, 1), (2, 5), (5, 4)]));
        // Certified path on the dense (non-packed) layout.
        assert_eq!(
            g.order_certified(&BigUint::from(10u32), 7, 200),
            Some(BigUint::from(10u32))
        );
    }

    #[test]
    fn lagrange_sanity() {
        for (n, group_order) in [(4usize, 120u64), (6, 40320)] {
            let (a, b) = dwork_gens_f2(n);
            let g = MatGroup::new(vec![a, b]).unwrap();
            let o = g.bsgs_order().unwrap();
            assert_eq!(o, BigUint::from(group_order));
            assert_eq!(&gl_order(n, 2) % &o, BigUint::from(0u32));
        }
    }

    #[test]
    fn membership_matches_enumeration() {
        let (a, b) = dwork_gens_f2(4);
        let g = MatGroup::new(vec![a.clone(), b.clone()]).unwrap();
        // Every short word in the generators is a member.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let mut w = Mat::identity(&f2(), 4);
            for _ in 0..rng.gen_range(1..=6) {
                w = if rng.gen_bool(0.5) { w.mul(&a) } else { w.mul(&b) };
            }
            assert!(g.contains(&w).unwrap());
        }
        // Oracle agreement on arbitrary invertible matrices.
        let els: HashSet<Mat> = generate_bfs(&[a, b], 1000).unwrap().into_iter().collect();
        let ctx = f2();
        for _ in 0..50 {
            let m = loop {
                let c = Mat::from_fn(&ctx, 4, 4, |_, _| FieldElem(rng.gen_range(0..2)));
                if c.inv().is_some() {
                    break c;
                }
            };
            assert_eq!(g.contains(&m).unwrap(), els.contains(&m));
        }
    }

    #[test]
    fn degree_bound_enforced() {
        let f32x = field_make(2, 5).unwrap();
        let g = MatGroup::new(vec![Mat::identity(&f32x, 4)]).unwrap();
        match g.bsgs_order() {
            Err(GrpError::DegreeTooLarge { degree, .. }) => {
                assert_eq!(degree, 32u128.pow(4) - 1);
            }
            other => panic!("expected a degree bound error, got {:?}", other.map(|o| o.to_string())),
        }
    }

    #[test]
    fn order_formulas() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(sp_order(2, 3), BigUint::from(24u32)); // Sp_2 = SL_2
        assert_eq!(sp_order(4, 8), BigUint::from(1_056_706_560u64));
        assert_eq!(orth_order(4, 2, false), BigUint::from(120u32)); // O⁻₄(2) ≅ S_5
        assert_eq!(orth_order(4, 2, true), BigUint::from(72u32));
        assert_eq!(orth_order(6, 2, true), BigUint::from(40320u32)); // O⁺₆(2) ≅ S_8
        assert_eq!(orth_order(6, 2, false), BigUint::from(51840u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(16), BigUint::from(20_922_789_888_000u64));
    }

    #[test]
    fn bfs_overflow_and_validation() {
        let (a, b) = dwork_gens_f2(4);
        match generate_bfs(&[a.clone(), b.clone()], 50) {
            Err(GrpError::Overflow { cap: 50 }) => {}
            other => panic!("expected overflow, got {:?}", other.map(|v| v.len())),
        }
        assert!(matches!(generate_bfs(&[], 10), Err(GrpError::Empty)));
        let singular = Mat::zero(&f2(), 2, 2);
        assert!(matches!(
            generate_bfs(&[singular], 10),
            Err(GrpError::NotInvertible(0))
        ));
    }
}
