//! Lattice-path enumeration and the recursive path multiplicities `μ₊`, `μ₋`.
//!
//! Since the λ-order is total, a λ-increasing path is determined by its set of
//! lattice points. Paths are therefore handled internally as bitmasks over the
//! λ-ordered points of `Δ_d`, which makes the memo keys for the recursion a
//! single `u128`.

use std::rc::Rc;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_integer::Integer;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::geometry::{
    boundary_paths, turn, DegreeTriangle, GeometryError, LatticeParallelogram, LatticePath, LatticePoint,
    LatticeTriangle, Turn,
};
use crate::gw::{GwElement, SquareClass};
use crate::multiplicity::{vertex_mult_gw, BranchCount, PathWeight, VertexData};
use crate::subdivision::DualSubdivision;

type Mask = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("worker count must be at least 1")]
    NoWorkers,
}

/// Which boundary path the recursion runs towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Towards `δ₊`, resolving left turns; fills the region above the path.
    Plus,
    /// Towards `δ₋`, resolving right turns; fills the region below the path.
    Minus,
}

impl Side {
    fn turn(self) -> Turn {
        match self {
            Side::Plus => Turn::Left,
            Side::Minus => Turn::Right,
        }
    }
}

/// Lattice points of `Δ_d` in λ-order and mask conversions.
#[derive(Debug, Clone)]
struct Lattice {
    triangle: DegreeTriangle,
    points: Vec<LatticePoint>,
    delta_plus: Mask,
    delta_minus: Mask,
}

impl Lattice {
    fn new(d: u32) -> Result<Self, GeometryError> {
        let triangle = DegreeTriangle::new(d)?;
        let (plus, minus) = boundary_paths(d)?;
        let mut lattice = Lattice { triangle, points: triangle.points(), delta_plus: 0, delta_minus: 0 };
        lattice.delta_plus = lattice.mask_of(plus.points());
        lattice.delta_minus = lattice.mask_of(minus.points());
        Ok(lattice)
    }

    fn bit(&self, p: LatticePoint) -> Option<Mask> {
        self.triangle.index_of(p).map(|k| 1 << k)
    }

    fn mask_of(&self, points: &[LatticePoint]) -> Mask {
        points.iter().map(|p| self.bit(*p).expect("point inside triangle")).fold(0, |m, b| m | b)
    }

    fn indices(mask: Mask) -> impl Iterator<Item = usize> {
        let mut rest = mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(k)
        })
    }

    fn path_points(&self, mask: Mask) -> Vec<LatticePoint> {
        Lattice::indices(mask).map(|k| self.points[k]).collect()
    }

    fn delta(&self, side: Side) -> Mask {
        match side {
            Side::Plus => self.delta_plus,
            Side::Minus => self.delta_minus,
        }
    }

    /// Normalized area enclosed between the path and `δ±`.
    fn enclosed_area(&self, mask: Mask, side: Side) -> u64 {
        let pts = self.path_points(mask);
        // the path closed by the hypotenuse chord bounds the region above it
        let twice: i64 = pts
            .iter()
            .zip(pts.iter().cycle().skip(1))
            .map(|(p, q)| p.i * q.j - p.j * q.i)
            .sum();
        let above = twice.unsigned_abs();
        match side {
            Side::Plus => above,
            Side::Minus => (self.triangle.degree() as u64).pow(2) - above,
        }
    }
}

/// The corner resolved at the first left (resp. right) turn of a path.
struct Corner {
    /// Position of the step entering the corner.
    step: usize,
    prev: usize,
    at: usize,
    next: usize,
    /// `γ'`: the corner cut off.
    cut: Mask,
    /// `γ''`: the corner completed to a parallelogram, if that stays in `Δ_d`.
    completed: Option<Mask>,
}

impl Lattice {
    fn first_corner(&self, mask: Mask, side: Side) -> Option<Corner> {
        let want = side.turn();
        let mut it = Lattice::indices(mask);
        let (mut a, mut b) = (it.next()?, it.next()?);
        for (step, c) in it.enumerate() {
            if turn(self.points[a], self.points[b], self.points[c]) == want {
                let cut = mask & !(1 << b);
                let (pa, pb, pc) = (self.points[a], self.points[b], self.points[c]);
                let q = LatticePoint::new(pa.i + pc.i - pb.i, pa.j + pc.j - pb.j);
                let completed = self.bit(q).map(|bit| cut | bit);
                return Some(Corner { step, prev: a, at: b, next: c, cut, completed });
            }
            (a, b) = (b, c);
        }
        None
    }
}

const MAX_STEPS: usize = 3 * DegreeTriangle::MAX_DEGREE as usize - 1;

/// A set partition of the steps of a path, in restricted-growth form.
///
/// Two steps share a block when the edges of the dual curve through them are
/// joined by the cells on one side of the path.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct StepPartition {
    len: u8,
    labels: [u8; MAX_STEPS],
}

impl StepPartition {
    fn discrete(len: usize) -> Self {
        let mut labels = [0; MAX_STEPS];
        for (k, l) in labels.iter_mut().enumerate().take(len) {
            *l = k as u8;
        }
        StepPartition { len: len as u8, labels }
    }

    /// Pulls a partition back along `source`, which maps each step of the
    /// longer path to a step of this one.
    fn pull_back(&self, len: usize, source: impl Fn(usize) -> usize) -> Self {
        let mut relabel = [u8::MAX; MAX_STEPS];
        let mut next = 0u8;
        let mut labels = [0; MAX_STEPS];
        for (s, out) in labels.iter_mut().enumerate().take(len) {
            let old = self.labels[source(s)] as usize;
            if relabel[old] == u8::MAX {
                relabel[old] = next;
                next += 1;
            }
            *out = relabel[old];
        }
        StepPartition { len: len as u8, labels }
    }

    /// Whether joining with `other` leaves a single block.
    fn joins_to_one(&self, other: &Self) -> bool {
        let n = self.len as usize;
        let mut parent: [u8; MAX_STEPS] = [0; MAX_STEPS];
        for (k, p) in parent.iter_mut().enumerate() {
            *p = k as u8;
        }
        fn root(parent: &mut [u8], mut x: usize) -> usize {
            while parent[x] as usize != x {
                parent[x] = parent[parent[x] as usize];
                x = parent[x] as usize;
            }
            x
        }
        let mut blocks = n;
        let mut first_a = [u8::MAX; MAX_STEPS];
        let mut first_b = [u8::MAX; MAX_STEPS];
        for s in 0..n {
            for (labels, first) in [(&self.labels, &mut first_a), (&other.labels, &mut first_b)] {
                let l = labels[s] as usize;
                if first[l] == u8::MAX {
                    first[l] = s as u8;
                } else {
                    let (x, y) = (root(&mut parent, s), root(&mut parent, first[l] as usize));
                    if x != y {
                        parent[x] = y as u8;
                        blocks -= 1;
                    }
                }
            }
        }
        blocks == 1
    }
}

/// Branch values of the recursion grouped by the step partition they induce.
type Strands<W> = Rc<Vec<(StepPartition, W)>>;

fn add_strand<W: PathWeight>(out: &mut Vec<(StepPartition, W)>, part: StepPartition, w: W) {
    match out.iter_mut().find(|(p, _)| *p == part) {
        Some((_, acc)) => *acc = acc.add(&w),
        None => out.push((part, w)),
    }
}

/// Default bound on cached strand lists per evaluator; the cache is dropped
/// when it fills up.
pub const DEFAULT_MEMO_LIMIT: usize = 1 << 22;

/// Memoized evaluator of `μ±` with values in a [`PathWeight`] semiring.
pub struct PathEvaluator<W: PathWeight> {
    lattice: Lattice,
    memo: [FxHashMap<Mask, W>; 2],
    strand_memo: [FxHashMap<Mask, Strands<W>>; 2],
    vertex_memo: FxHashMap<(usize, usize, usize), W>,
    memo_limit: usize,
}

impl<W: PathWeight> PathEvaluator<W> {
    pub fn new(d: u32) -> Result<Self, GeometryError> {
        Ok(PathEvaluator {
            lattice: Lattice::new(d)?,
            memo: [FxHashMap::default(), FxHashMap::default()],
            strand_memo: [FxHashMap::default(), FxHashMap::default()],
            vertex_memo: FxHashMap::default(),
            memo_limit: DEFAULT_MEMO_LIMIT,
        })
    }

    /// Caps the number of cached strand lists.
    pub fn with_memo_limit(mut self, limit: usize) -> Self {
        self.memo_limit = limit.max(1);
        self
    }

    pub fn degree(&self) -> u32 {
        self.lattice.triangle.degree()
    }

    /// `μ₊(γ)` or `μ₋(γ)`.
    pub fn mu(&mut self, path: &LatticePath, side: Side) -> W {
        assert_eq!(path.degree(), self.degree(), "path degree differs from evaluator degree");
        let mask = self.lattice.mask_of(path.points());
        self.mu_mask(mask, side)
    }

    fn vertex(&mut self, prev: usize, at: usize, next: usize) -> W {
        let pts = &self.lattice.points;
        let tri = LatticeTriangle::new(pts[prev], pts[at], pts[next]);
        self.vertex_memo
            .entry((prev, at, next))
            .or_insert_with(|| W::of_vertex(&VertexData::new(tri).expect("genuine turns span a triangle")))
            .clone()
    }

    fn mu_mask(&mut self, mask: Mask, side: Side) -> W {
        if mask == self.lattice.delta(side) {
            return W::one();
        }
        let slot = side as usize;
        if let Some(v) = self.memo[slot].get(&mask) {
            return v.clone();
        }
        let value = match self.lattice.first_corner(mask, side) {
            None => W::zero(),
            Some(corner) => {
                debug_assert!(self.shrinks(mask, &corner, side));
                let mut value = W::zero();
                let tail = self.mu_mask(corner.cut, side);
                if !tail.is_zero() {
                    value = self.vertex(corner.prev, corner.at, corner.next).mul(&tail);
                }
                if let Some(completed) = corner.completed {
                    value = value.add(&self.mu_mask(completed, side));
                }
                value
            }
        };
        self.memo[slot].insert(mask, value.clone());
        value
    }

    fn strands(&mut self, mask: Mask, side: Side) -> Strands<W> {
        if let Some(v) = self.strand_memo[side as usize].get(&mask) {
            return v.clone();
        }
        let out = self.strands_uncached(mask, side);
        let total: usize = self.strand_memo.iter().map(|m| m.len()).sum();
        if total >= self.memo_limit {
            self.strand_memo.iter_mut().for_each(|m| m.clear());
        }
        self.strand_memo[side as usize].insert(mask, out.clone());
        out
    }

    /// Like [`Self::mu_mask`], keeping track of which steps of the path the
    /// cells of each branch connect. Empty exactly when `μ±` vanishes.
    fn strands_uncached(&mut self, mask: Mask, side: Side) -> Strands<W> {
        let steps = mask.count_ones() as usize - 1;
        let mut out = Vec::new();
        if mask == self.lattice.delta(side) {
            out.push((StepPartition::discrete(steps), W::one()));
        } else if let Some(corner) = self.lattice.first_corner(mask, side) {
            debug_assert!(self.shrinks(mask, &corner, side));
            let k = corner.step;
            let tail = self.strands(corner.cut, side);
            if !tail.is_empty() {
                let vertex = self.vertex(corner.prev, corner.at, corner.next);
                // the triangle joins both corner steps to the chord replacing them
                let source = |s: usize| if s <= k { s } else { s - 1 };
                for (part, w) in tail.iter() {
                    add_strand(&mut out, part.pull_back(steps, source), vertex.mul(w));
                }
            }
            if let Some(completed) = corner.completed {
                // each corner step continues through the parallelogram to the
                // opposite, parallel side
                let source = |s: usize| match s {
                    s if s == k => k + 1,
                    s if s == k + 1 => k,
                    s => s,
                };
                for (part, w) in self.strands(completed, side).iter() {
                    add_strand(&mut out, part.pull_back(steps, source), w.clone());
                }
            }
        }
        Rc::new(out)
    }

    /// `(μ₊, μ₋, irreducible part of μ₊·μ₋)` of a path given as a mask.
    fn evaluate_mask(&mut self, mask: Mask) -> (W, W, W) {
        let upper = self.strands_uncached(mask, Side::Plus);
        if upper.is_empty() {
            return (W::zero(), W::zero(), W::zero());
        }
        let lower = self.strands_uncached(mask, Side::Minus);
        let total = |list: &[(StepPartition, W)]| list.iter().fold(W::zero(), |acc, (_, w)| acc.add(w));
        let mut irreducible = W::zero();
        for (pu, wu) in upper.iter() {
            for (pl, wl) in lower.iter() {
                if pu.joins_to_one(pl) {
                    irreducible = irreducible.add(&wu.mul(wl));
                }
            }
        }
        (total(&upper), total(&lower), irreducible)
    }

    /// Contribution of a path to the count of irreducible curves.
    pub fn irreducible(&mut self, path: &LatticePath) -> W {
        assert_eq!(path.degree(), self.degree(), "path degree differs from evaluator degree");
        let mask = self.lattice.mask_of(path.points());
        self.evaluate_mask(mask).2
    }

    fn shrinks(&self, mask: Mask, corner: &Corner, side: Side) -> bool {
        let before = self.lattice.enclosed_area(mask, side);
        self.lattice.enclosed_area(corner.cut, side) < before
            && corner.completed.map_or(true, |m| self.lattice.enclosed_area(m, side) < before)
    }

    /// Number of cached path values.
    pub fn cache_len(&self) -> usize {
        self.memo.iter().map(|m| m.len()).sum::<usize>()
            + self.strand_memo.iter().map(|m| m.len()).sum::<usize>()
    }
}

/// `μ₊(γ)` or `μ₋(γ)` with a fresh evaluator.
pub fn mu(path: &LatticePath, side: Side) -> GwElement {
    PathEvaluator::<GwElement>::new(path.degree()).expect("path degree is valid").mu(path, side)
}

/// Normalized area between `path` and `δ₊` (resp. `δ₋`); strictly decreases
/// along every step of the recursion.
pub fn enclosed_area(path: &LatticePath, side: Side) -> u64 {
    let lattice = Lattice::new(path.degree()).expect("path degree is valid");
    lattice.enclosed_area(lattice.mask_of(path.points()), side)
}

/// Binomial coefficient; `None` on overflow.
fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.checked_mul((n - t) as u128)? / (t as u128 + 1);
    }
    Some(acc)
}

/// Lexicographic `k`-subsets of `{0, …, n−1}` starting from a given rank.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn from_rank(n: usize, k: usize, mut rank: u128) -> Self {
        let total = binomial(n, k).expect("path count fits in 128 bits");
        if rank >= total {
            return Combinations { n, current: None };
        }
        let mut out = Vec::with_capacity(k);
        let mut next = 0usize;
        for slot in 0..k {
            loop {
                let with_next = binomial(n - next - 1, k - slot - 1).unwrap();
                if rank < with_next {
                    out.push(next);
                    next += 1;
                    break;
                }
                rank -= with_next;
                next += 1;
            }
        }
        Combinations { n, current: Some(out) }
    }

    fn advance(&mut self) {
        let Some(c) = self.current.as_mut() else { return };
        let k = c.len();
        let mut slot = k;
        while slot > 0 {
            slot -= 1;
            if c[slot] < self.n - k + slot {
                c[slot] += 1;
                for t in slot + 1..k {
                    c[t] = c[t - 1] + 1;
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// All λ-increasing paths of exactly `3d − 1` steps, as masks, in
/// lexicographic order of their point sequences, from rank `start` onward.
fn path_masks(lattice: &Lattice, start: u128) -> impl Iterator<Item = Mask> + '_ {
    let n = lattice.points.len();
    let d = lattice.triangle.degree() as usize;
    let ends: Mask = 1 | (1 << (n - 1));
    Combinations::from_rank(n - 2, 3 * d - 2, start)
        .map(move |c| c.iter().fold(ends, |m, &k| m | (1 << (k + 1))))
}

fn path_total(d: u32) -> u128 {
    let n = DegreeTriangle::new(d).map(|t| t.num_points()).unwrap_or(0);
    binomial(n - 2, 3 * d as usize - 2).expect("path count fits in 128 bits")
}

/// Every λ-increasing path `γ: [0, 3d−1] → Δ_d`, each once, in lexicographic order.
pub fn enumerate_paths(d: u32) -> Result<impl Iterator<Item = LatticePath>, GeometryError> {
    let lattice = Lattice::new(d)?;
    let masks: Vec<Mask> = path_masks(&lattice, 0).collect();
    Ok(masks
        .into_iter()
        .map(move |mask| LatticePath::from_trusted(lattice.triangle, lattice.path_points(mask))))
}

/// `(μ₊, μ₋, μ = μ₊·μ₋)` of one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMultiplicity {
    pub mu_plus: GwElement,
    pub mu_minus: GwElement,
    pub mu: GwElement,
    /// The part of `μ` whose dual curves are connected.
    pub irreducible: GwElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRecord {
    pub path: LatticePath,
    pub multiplicity: PathMultiplicity,
}

/// The enriched count and its complex/real specializations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub degree: u32,
    /// Count of irreducible rational curves.
    pub quadratic: GwElement,
    /// `Σ μ₊·μ₋`, which also counts reducible curves of arithmetic genus 0
    /// (a line and a smooth cubic for `d = 4`, and so on).
    pub including_reducible: GwElement,
    pub complex_count: i64,
    pub real_count: i64,
    /// Paths with nonzero `μ` (or all paths with [`CountOptions::keep_zero_paths`]),
    /// in enumeration order. Empty unless [`CountOptions::record_paths`] is set.
    pub per_path: Vec<PathRecord>,
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub workers: usize,
    pub record_paths: bool,
    pub keep_zero_paths: bool,
    /// Cache bound shared out among the workers.
    pub memo_limit: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { workers: 1, record_paths: true, keep_zero_paths: false, memo_limit: DEFAULT_MEMO_LIMIT }
    }
}

/// `N^paths_{A¹,d}` with per-path records, single worker.
pub fn count(d: u32) -> Result<CountResult, CountError> {
    count_with(d, &CountOptions::default())
}

/// Splits the lexicographic path range into chunks evaluated by `workers`
/// threads, each with its own memo. Chunk results are merged in chunk order,
/// so the output does not depend on scheduling.
fn run_chunks<W, R, F>(d: u32, workers: usize, memo_limit: usize, per_chunk: F) -> Result<Vec<R>, CountError>
where
    W: PathWeight,
    R: Send,
    F: Fn(&mut PathEvaluator<W>, &mut dyn Iterator<Item = Mask>) -> R + Sync,
{
    if workers == 0 {
        return Err(CountError::NoWorkers);
    }
    let lattice = Lattice::new(d)?;
    let total = path_total(d);
    let chunks: u128 = if workers == 1 { 1 } else { (workers as u128 * 16).min(total.max(1)) };
    let bounds: Vec<(u128, u128)> =
        (0..chunks).map(|c| (total * c / chunks, total * (c + 1) / chunks)).collect();
    let results: Mutex<Vec<Option<R>>> = Mutex::new((0..bounds.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(bounds.len()) {
            scope.spawn(|| {
                let mut eval = PathEvaluator::<W>::new(d)
                    .expect("degree already validated")
                    .with_memo_limit(memo_limit / workers);
                loop {
                    let c = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(lo, hi)) = bounds.get(c) else { break };
                    let mut masks = path_masks(&lattice, lo).take((hi - lo) as usize);
                    let r = per_chunk(&mut eval, &mut masks);
                    results.lock().unwrap()[c] = Some(r);
                }
            });
        }
    });
    Ok(results.into_inner().unwrap().into_iter().map(|r| r.expect("every chunk evaluated")).collect())
}

pub fn count_with(d: u32, opts: &CountOptions) -> Result<CountResult, CountError> {
    let lattice = Lattice::new(d)?;
    let chunks = run_chunks::<Enriched, _, _>(d, opts.workers, opts.memo_limit, |eval, masks| {
        let mut sum = Enriched::zero();
        let mut all = Enriched::zero();
        let mut records = Vec::new();
        for mask in masks {
            let (plus, minus, irreducible) = eval.evaluate_mask(mask);
            let mu = plus.mul(&minus);
            sum = sum.add(&irreducible);
            all = all.add(&mu);
            if opts.record_paths && (opts.keep_zero_paths || !mu.is_zero()) {
                let multiplicity = PathMultiplicity {
                    mu_plus: plus.to_gw(),
                    mu_minus: minus.to_gw(),
                    mu: mu.to_gw(),
                    irreducible: irreducible.to_gw(),
                };
                records.push((mask, multiplicity));
            }
        }
        (sum.to_gw(), all.to_gw(), records)
    })?;
    let mut quadratic = GwElement::zero();
    let mut including_reducible = GwElement::zero();
    let mut per_path = Vec::new();
    for (sum, all, records) in chunks {
        quadratic += sum;
        including_reducible += all;
        per_path.extend(records.into_iter().map(|(mask, multiplicity)| PathRecord {
            path: LatticePath::from_trusted(lattice.triangle, lattice.path_points(mask)),
            multiplicity,
        }));
    }
    Ok(CountResult {
        degree: d,
        complex_count: quadratic.rank(),
        real_count: quadratic.real_signature().expect("path counts carry no generators"),
        quadratic,
        including_reducible,
        per_path,
    })
}

/// The irreducible path count evaluated in an arbitrary weight semiring.
pub fn count_weighted<W: PathWeight>(d: u32, workers: usize) -> Result<W, CountError> {
    let chunks = run_chunks::<W, _, _>(d, workers, DEFAULT_MEMO_LIMIT, |eval, masks| {
        let mut sum = W::zero();
        for mask in masks {
            sum = sum.add(&eval.evaluate_mask(mask).2);
        }
        sum
    })?;
    Ok(chunks.iter().fold(W::zero(), |acc, x| acc.add(x)))
}

/// Compact effective element `h·ℍ + Σ mᵢ⟨aᵢ⟩` of GW(ℚ) with integer
/// squarefree `aᵢ`, used inside the counting loop in place of [`GwElement`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Enriched {
    hyperbolic: u64,
    /// Sorted by class, positive multiplicities.
    classes: Vec<(i64, u64)>,
}

impl Enriched {
    fn rank(&self) -> u64 {
        2 * self.hyperbolic + self.classes.iter().map(|(_, m)| m).sum::<u64>()
    }

    fn push(&mut self, class: i64, m: u64) {
        match self.classes.binary_search_by_key(&class, |(c, _)| *c) {
            Ok(k) => self.classes[k].1 += m,
            Err(k) => self.classes.insert(k, (class, m)),
        }
    }

    /// Folds `⟨a⟩ + ⟨−a⟩` into `ℍ`.
    fn normalize(mut self) -> Self {
        let mut k = 0;
        while k < self.classes.len() {
            let (c, m) = self.classes[k];
            if c > 0 {
                if let Ok(n) = self.classes.binary_search_by_key(&-c, |(x, _)| *x) {
                    let folded = m.min(self.classes[n].1);
                    self.hyperbolic += folded;
                    self.classes[n].1 -= folded;
                    self.classes[k].1 -= folded;
                }
            }
            k += 1;
        }
        self.classes.retain(|(_, m)| *m > 0);
        self
    }

    fn to_gw(&self) -> GwElement {
        let mut out = GwElement::hyperbolic(self.hyperbolic as i64);
        for &(c, m) in &self.classes {
            out += GwElement::from_class(SquareClass::from_integer(c).expect("nonzero class"), m as i64);
        }
        out
    }
}

fn squarefree_product(a: i64, b: i64) -> i64 {
    let g = a.gcd(&b);
    (a / g) * (b / g)
}

impl PathWeight for Enriched {
    fn zero() -> Self {
        Enriched::default()
    }
    fn one() -> Self {
        Enriched { hyperbolic: 0, classes: vec![(1, 1)] }
    }
    fn is_zero(&self) -> bool {
        self.hyperbolic == 0 && self.classes.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.hyperbolic += other.hyperbolic;
        for &(c, m) in &other.classes {
            out.push(c, m);
        }
        out.normalize()
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Enriched {
            hyperbolic: self.hyperbolic * other.rank() + other.hyperbolic * (self.rank() - 2 * self.hyperbolic),
            classes: Vec::new(),
        };
        for &(a, m) in &self.classes {
            for &(b, n) in &other.classes {
                out.push(squarefree_product(a, b), m * n);
            }
        }
        out.normalize()
    }
    fn of_vertex(v: &VertexData) -> Self {
        let half = v.area / 2;
        if v.area % 2 == 0 {
            return Enriched { hyperbolic: half, classes: Vec::new() };
        }
        let w = v.weight_product() as i64;
        let class = SquareClass::from_integer(if v.interior % 2 == 0 { w } else { -w })
            .ok()
            .and_then(|c| c.rational_value())
            .expect("weights are nonzero") as i64;
        Enriched { hyperbolic: half, classes: vec![(class, 1)] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cell {
    Triangle(LatticeTriangle),
    Parallelogram(LatticeParallelogram),
}

/// Follows every branch of the `μ±` recursion that ends at `δ±`, recording
/// the cells it cuts off. Branches evaluating to zero are pruned.
fn trace_branches(
    eval: &mut PathEvaluator<BranchCount>,
    mask: Mask,
    side: Side,
    acc: &mut Vec<Cell>,
    out: &mut Vec<Vec<Cell>>,
) {
    if mask == eval.lattice.delta(side) {
        out.push(acc.clone());
        return;
    }
    if eval.mu_mask(mask, side).is_zero() {
        return;
    }
    let corner = eval.lattice.first_corner(mask, side).expect("nonzero paths have a corner");
    let pts = &eval.lattice.points;
    let (a, b, c) = (pts[corner.prev], pts[corner.at], pts[corner.next]);
    acc.push(Cell::Triangle(LatticeTriangle::new(a, b, c)));
    trace_branches(eval, corner.cut, side, acc, out);
    acc.pop();
    if let Some(completed) = corner.completed {
        acc.push(Cell::Parallelogram(LatticeParallelogram::complete(a, b, c)));
        trace_branches(eval, completed, side, acc, out);
        acc.pop();
    }
}

/// The possible Newton subdivisions of a path, each with its enriched
/// multiplicity (the product over its triangle cells).
pub fn possible_subdivisions(path: &LatticePath) -> Vec<(DualSubdivision, GwElement)> {
    let mut eval = PathEvaluator::<BranchCount>::new(path.degree()).expect("path degree is valid");
    possible_subdivisions_with(&mut eval, path)
}

/// As [`possible_subdivisions`], reusing an evaluator's pruning memo.
pub fn possible_subdivisions_with(
    eval: &mut PathEvaluator<BranchCount>,
    path: &LatticePath,
) -> Vec<(DualSubdivision, GwElement)> {
    assert_eq!(path.degree(), eval.degree(), "path degree differs from evaluator degree");
    let mask = eval.lattice.mask_of(path.points());
    let mut upper = Vec::new();
    trace_branches(eval, mask, Side::Plus, &mut Vec::new(), &mut upper);
    let mut lower = Vec::new();
    if !upper.is_empty() {
        trace_branches(eval, mask, Side::Minus, &mut Vec::new(), &mut lower);
    }
    let mut out = Vec::with_capacity(upper.len() * lower.len());
    for up in &upper {
        for low in &lower {
            let mut triangles = Vec::new();
            let mut parallelograms = Vec::new();
            for cell in up.iter().chain(low) {
                match cell {
                    Cell::Triangle(t) => triangles.push(*t),
                    Cell::Parallelogram(p) => parallelograms.push(*p),
                }
            }
            let mult = triangles
                .iter()
                .map(|t| vertex_mult_gw(&VertexData::new(*t).expect("recursion triangles are non-degenerate")))
                .product();
            out.push((DualSubdivision::from_trusted(path.degree(), triangles, parallelograms), mult));
        }
    }
    out
}

/// Number of possible Newton subdivisions of a path.
pub fn subdivision_count(eval: &mut PathEvaluator<BranchCount>, path: &LatticePath) -> u128 {
    let plus = eval.mu(path, Side::Plus);
    if plus.is_zero() {
        return 0;
    }
    plus.0 * eval.mu(path, Side::Minus).0
}
