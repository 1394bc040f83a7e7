//! Brute-force oracles: orbit enumeration by breadth-first search over the
//! packed tensor codes, full censuses, and the cross-checks tying the
//! invariant-based classifier to the orbits it is supposed to name.
//!
//! The BFS oracle knows nothing about invariants; it only applies group
//! generators. Agreement between the two is the main correctness evidence.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{canonical_form, classify_223, classify_h, OrbitLabel, LABELS_223};
use crate::format::format_233;
use crate::gf::{Field, Fq};
use crate::linalg::{Mat2, Mat3, Matrix, Subspace};
use crate::tensor::{GroupElement, Tensor223, Tensor233};

/// Environment variable bounding oracle memory, in MiB.
pub const MEMORY_CAP_ENV: &str = "TOK_MEMORY_CAP_MB";
const DEFAULT_MEMORY_CAP_MB: u64 = 2048;
/// Counterexamples kept per report.
const MAX_FAILURES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("space of {size} tensors is too large to enumerate (q = {q})")]
    SpaceTooLarge { q: u32, size: u128 },
    #[error("orbit exceeds {limit} elements; raise {MEMORY_CAP_ENV} or use a smaller q")]
    OrbitTooLarge { limit: u64 },
}

/// Memory budget for dense bitsets and sparse visited sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryCap {
    pub bytes: u64,
}

impl MemoryCap {
    pub fn from_mb(mb: u64) -> Self {
        MemoryCap { bytes: mb << 20 }
    }

    /// Reads [`MEMORY_CAP_ENV`], falling back to 2 GiB.
    pub fn from_env() -> Self {
        let mb = std::env::var(MEMORY_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MEMORY_CAP_MB);
        Self::from_mb(mb)
    }

    /// Whether `count` dense bitsets over `bits` positions fit.
    pub fn fits_bitsets(&self, bits: u64, count: u64) -> bool {
        bits.div_ceil(8).saturating_mul(count) <= self.bytes
    }
}

impl Default for MemoryCap {
    fn default() -> Self {
        Self::from_env()
    }
}

/// Fixed-size bitset that can be updated concurrently.
pub struct AtomicBitset {
    words: Vec<AtomicU64>,
    len: u64,
}

impl AtomicBitset {
    pub fn new(len: u64) -> Self {
        let n = len.div_ceil(64) as usize;
        AtomicBitset { words: (0..n).map(|_| AtomicU64::new(0)).collect(), len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize].load(Ordering::Relaxed) & (1 << (i % 64)) != 0
    }

    /// Sets bit `i`; returns its previous value.
    pub fn test_and_set(&self, i: u64) -> bool {
        let bit = 1u64 << (i % 64);
        self.words[(i / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit != 0
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.load(Ordering::Relaxed).count_ones() as u64).sum()
    }

    fn word_count(&self) -> usize {
        self.words.len()
    }

    fn take_word(&self, w: usize) -> u64 {
        self.words[w].swap(0, Ordering::Relaxed)
    }

    fn load_word(&self, w: usize) -> u64 {
        self.words[w].load(Ordering::Relaxed)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.words.len()).flat_map(move |w| {
            let mut bits = self.load_word(w);
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(w as u64 * 64 + b)
            })
        })
    }
}

/// Standard generators of `GL(N, q)`: the transvection `I + E_01`, the
/// diagonal `diag(w, 1, ..)` for a primitive `w`, and the cyclic shift of
/// coordinates (a swap when `N = 2`).
pub fn gl_generators<const N: usize>(field: &Field) -> Vec<Matrix<N, N>> {
    let transvection = Matrix::<N, N>::identity().add(field, &Matrix::unit(0, 1));
    let mut diag = Matrix::<N, N>::identity();
    diag.entries[0][0] = field.primitive();
    let mut cycle = Matrix::<N, N>::zero();
    for i in 0..N {
        cycle.entries[(i + 1) % N][i] = Fq::ONE;
    }
    let mut gens = vec![transvection, cycle];
    if field.q() > 2 {
        gens.push(diag);
    }
    gens
}

/// Order of the matrix group generated by `gens`, by closure.
pub fn generated_order<const N: usize>(field: &Field, gens: &[Matrix<N, N>]) -> u64 {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(Matrix::<N, N>::identity());
    queue.push_back(Matrix::<N, N>::identity());
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = g.mul(field, &m);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len() as u64
}

/// `|GL(n, q)|`.
pub fn gl_order(n: u32, q: u32) -> u64 {
    let qn = (q as u64).pow(n);
    (0..n).map(|i| qn - (q as u64).pow(i)).product()
}

/// Generators of `H = GL2 x GL3 x GL3` (optionally with `T`), factor by factor.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub first: Vec<Mat2>,
    pub second: Vec<Mat3>,
    pub third: Vec<Mat3>,
    pub transpose: bool,
}

impl GeneratorSet {
    pub fn standard(field: &Field, with_transpose: bool) -> Self {
        GeneratorSet {
            first: gl_generators::<2>(field),
            second: gl_generators::<3>(field),
            third: gl_generators::<3>(field),
            transpose: with_transpose,
        }
    }
}

/// A finite set of packed tensor codes with a group acting by generators.
pub trait OrbitSpace: Sync {
    fn field(&self) -> &Field;
    /// Number of codes, `q^len`.
    fn size(&self) -> u64;
    fn generator_count(&self) -> usize;
    fn apply(&self, generator: usize, code: u64) -> u64;
    /// Classifier label of a code.
    fn label(&self, code: u64) -> OrbitLabel;
}

#[derive(Debug, Clone, Copy)]
enum Gen233 {
    First(Mat2),
    Second(Mat3),
    Third(Mat3),
    Swap,
}

/// `F^2 (x) F^3 (x) F^3` under `H`, or under `G` when `T` is included.
pub struct Space233 {
    field: Field,
    gens: Vec<Gen233>,
}

impl Space233 {
    pub fn new(field: &Field, gens: &GeneratorSet) -> Self {
        let mut v: Vec<Gen233> = gens.first.iter().map(|&g| Gen233::First(g)).collect();
        v.extend(gens.second.iter().map(|&g| Gen233::Second(g)));
        v.extend(gens.third.iter().map(|&g| Gen233::Third(g)));
        if gens.transpose {
            v.push(Gen233::Swap);
        }
        Space233 { field: field.clone(), gens: v }
    }

    pub fn standard(field: &Field, with_transpose: bool) -> Self {
        Self::new(field, &GeneratorSet::standard(field, with_transpose))
    }
}

impl OrbitSpace for Space233 {
    fn field(&self) -> &Field {
        &self.field
    }

    fn size(&self) -> u64 {
        (self.field.q() as u64).pow(18)
    }

    fn generator_count(&self) -> usize {
        self.gens.len()
    }

    fn apply(&self, generator: usize, code: u64) -> u64 {
        let q = self.field.q();
        let t = Tensor233::decode(code, q);
        let out = match &self.gens[generator] {
            Gen233::First(g) => t.transform_first(&self.field, g),
            Gen233::Second(g) => t.transform_second(&self.field, g),
            Gen233::Third(g) => t.transform_third(&self.field, g),
            Gen233::Swap => t.transpose(),
        };
        out.encode(q)
    }

    fn label(&self, code: u64) -> OrbitLabel {
        classify_h(&self.field, &Tensor233::decode(code, self.field.q()))
    }
}

#[derive(Debug, Clone, Copy)]
enum Gen223 {
    First(Mat2),
    Second(Mat2),
    Third(Mat3),
    Swap,
}

/// `F^2 (x) F^2 (x) F^3` under `GL2 x GL2 x GL3`, optionally with the swap of
/// the two 2-dimensional factors.
pub struct Space223 {
    field: Field,
    gens: Vec<Gen223>,
}

impl Space223 {
    pub fn standard(field: &Field, with_swap: bool) -> Self {
        let mut gens: Vec<Gen223> = gl_generators::<2>(field).into_iter().map(Gen223::First).collect();
        gens.extend(gl_generators::<2>(field).into_iter().map(Gen223::Second));
        gens.extend(gl_generators::<3>(field).into_iter().map(Gen223::Third));
        if with_swap {
            gens.push(Gen223::Swap);
        }
        Space223 { field: field.clone(), gens }
    }
}

fn act_223(field: &Field, t: &Tensor223, g: &Gen223) -> Tensor223 {
    let mut out = Tensor223::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..3 {
                let v = match g {
                    Gen223::First(m) => (0..2).fold(Fq::ZERO, |acc, s| field.mul_add(m.entries[i][s], t.get(s, j, k), acc)),
                    Gen223::Second(m) => (0..2).fold(Fq::ZERO, |acc, s| field.mul_add(m.entries[j][s], t.get(i, s, k), acc)),
                    Gen223::Third(m) => (0..3).fold(Fq::ZERO, |acc, s| field.mul_add(m.entries[k][s], t.get(i, j, s), acc)),
                    Gen223::Swap => t.get(j, i, k),
                };
                out.a[6 * i + 3 * j + k] = v;
            }
        }
    }
    out
}

impl OrbitSpace for Space223 {
    fn field(&self) -> &Field {
        &self.field
    }

    fn size(&self) -> u64 {
        (self.field.q() as u64).pow(12)
    }

    fn generator_count(&self) -> usize {
        self.gens.len()
    }

    fn apply(&self, generator: usize, code: u64) -> u64 {
        let q = self.field.q();
        act_223(&self.field, &Tensor223::decode(code, q), &self.gens[generator]).encode(q)
    }

    fn label(&self, code: u64) -> OrbitLabel {
        let t = Tensor223::decode(code, self.field.q());
        classify_223(&self.field, &t).expect("2x2x3 tensor has a 2x2x3 label").0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitRecord {
    pub representative: u64,
    pub size: u64,
    pub label: OrbitLabel,
}

/// Level-synchronous parallel BFS over dense bitsets. Every newly reached
/// code (including the seed) is marked in `visited` and passed to `visit`.
/// Returns the orbit size.
pub fn dense_bfs<S, F>(space: &S, seed: u64, visited: &AtomicBitset, visit: F) -> u64
where
    S: OrbitSpace + ?Sized,
    F: Fn(u64) + Sync,
{
    if visited.test_and_set(seed) {
        return 0;
    }
    visit(seed);
    let mut frontier = AtomicBitset::new(space.size());
    let mut next = AtomicBitset::new(space.size());
    frontier.test_and_set(seed);
    let mut size = 1u64;
    let gens = space.generator_count();
    loop {
        let added: u64 = (0..frontier.word_count())
            .into_par_iter()
            .with_min_len(64)
            .map(|w| {
                let mut bits = frontier.take_word(w);
                let mut added = 0;
                while bits != 0 {
                    let code = w as u64 * 64 + bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    for g in 0..gens {
                        let image = space.apply(g, code);
                        if !visited.test_and_set(image) {
                            next.test_and_set(image);
                            visit(image);
                            added += 1;
                        }
                    }
                }
                added
            })
            .sum();
        if added == 0 {
            return size;
        }
        size += added;
        std::mem::swap(&mut frontier, &mut next);
    }
}

/// Serial BFS with a hash set, for spaces too large for bitsets. Fails once
/// the orbit exceeds `limit` elements.
pub fn sparse_bfs<S>(space: &S, seed: u64, limit: u64) -> Result<HashSet<u64>, OracleError>
where
    S: OrbitSpace + ?Sized,
{
    let mut seen = HashSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    while let Some(code) = queue.pop_front() {
        for g in 0..space.generator_count() {
            let image = space.apply(g, code);
            if seen.insert(image) {
                if seen.len() as u64 > limit {
                    return Err(OracleError::OrbitTooLarge { limit });
                }
                queue.push_back(image);
            }
        }
    }
    Ok(seen)
}

/// Size and label of the orbit through `seed`: dense when the bitsets fit
/// under `cap`, sparse otherwise.
pub fn orbit_bfs<S>(space: &S, seed: u64, cap: MemoryCap) -> Result<OrbitRecord, OracleError>
where
    S: OrbitSpace + ?Sized,
{
    let label = space.label(seed);
    let size = if cap.fits_bitsets(space.size(), 3) {
        let visited = AtomicBitset::new(space.size());
        dense_bfs(space, seed, &visited, |_| {})
    } else {
        // Roughly 32 bytes per hash-set entry.
        sparse_bfs(space, seed, cap.bytes / 32)?.len() as u64
    };
    Ok(OrbitRecord { representative: seed, size, label })
}

/// Partition of a small space into orbits, in order of first element.
pub struct Partition {
    /// Orbit index of every code.
    pub ids: Vec<u32>,
    pub orbits: Vec<OrbitRecord>,
}

impl Partition {
    pub fn orbit_of(&self, code: u64) -> u32 {
        self.ids[code as usize]
    }
}

/// Orbit partition of the whole space by repeated serial BFS.
pub fn orbit_partition<S>(space: &S, cap: MemoryCap) -> Result<Partition, OracleError>
where
    S: OrbitSpace + ?Sized,
{
    let size = space.size();
    if size.saturating_mul(4) > cap.bytes {
        return Err(OracleError::SpaceTooLarge { q: space.field().q(), size: size as u128 });
    }
    let mut ids = vec![u32::MAX; size as usize];
    let mut orbits = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..size {
        if ids[start as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        ids[start as usize] = id;
        queue.push_back(start);
        let mut count = 1;
        while let Some(code) = queue.pop_front() {
            for g in 0..space.generator_count() {
                let image = space.apply(g, code);
                if ids[image as usize] == u32::MAX {
                    ids[image as usize] = id;
                    count += 1;
                    queue.push_back(image);
                }
            }
        }
        orbits.push(OrbitRecord { representative: start, size: count, label: space.label(start) });
    }
    Ok(Partition { ids, orbits })
}

/// Label counts of a census, indexed by [`OrbitLabel::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusCounts {
    pub q: u32,
    pub counts: [u64; 21],
}

impl CensusCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, label: OrbitLabel) -> u64 {
        self.counts[label.index()]
    }

    /// Labels that occur at least once.
    pub fn labels(&self) -> Vec<OrbitLabel> {
        OrbitLabel::ALL.into_iter().filter(|l| self.get(*l) > 0).collect()
    }

    /// Counts merged along `project`, e.g. [`OrbitLabel::g_projection`].
    pub fn projected(&self, project: impl Fn(OrbitLabel) -> OrbitLabel) -> CensusCounts {
        let mut counts = [0; 21];
        for l in OrbitLabel::ALL {
            counts[project(l).index()] += self.get(l);
        }
        CensusCounts { q: self.q, counts }
    }
}

/// Largest space we are willing to enumerate exhaustively.
const MAX_CENSUS: u64 = 3u64.pow(18);
const CHUNK: u64 = 1 << 14;

fn census_codes<F>(q: u32, len: u32, classify: F) -> Result<CensusCounts, OracleError>
where
    F: Fn(&[Fq]) -> OrbitLabel + Sync,
{
    let size = (q as u128).pow(len);
    if size > MAX_CENSUS as u128 {
        return Err(OracleError::SpaceTooLarge { q, size });
    }
    let size = size as u64;
    let chunks = size.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(size);
            let mut digits = vec![Fq::ZERO; len as usize];
            let mut rest = start;
            for d in digits.iter_mut() {
                *d = Fq((rest % q as u64) as u8);
                rest /= q as u64;
            }
            let mut counts = [0u64; 21];
            for _ in start..end {
                counts[classify(&digits).index()] += 1;
                // Odometer increment, least significant digit first.
                for d in digits.iter_mut() {
                    if d.0 as u32 + 1 < q {
                        d.0 += 1;
                        break;
                    }
                    d.0 = 0;
                }
            }
            counts
        })
        .reduce(
            || [0u64; 21],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(CensusCounts { q, counts })
}

/// Classifies every tensor of `F_q^2 (x) F_q^3 (x) F_q^3` with `classify`.
pub fn full_census_with<F>(field: &Field, classify: F) -> Result<CensusCounts, OracleError>
where
    F: Fn(&Field, &Tensor233) -> OrbitLabel + Sync,
{
    census_codes(field.q(), 18, |d| {
        let mut t = Tensor233::zero();
        t.a.copy_from_slice(d);
        classify(field, &t)
    })
}

/// `H`-label census of `F_q^2 (x) F_q^3 (x) F_q^3` (q <= 3).
pub fn full_census(field: &Field) -> Result<CensusCounts, OracleError> {
    full_census_with(field, classify_h)
}

/// `(H, G)`-label censuses of `F_q^2 (x) F_q^2 (x) F_q^3`.
pub fn census_223(field: &Field) -> Result<(CensusCounts, CensusCounts), OracleError> {
    let label = |d: &[Fq]| {
        let mut t = Tensor223::zero();
        t.a.copy_from_slice(d);
        classify_223(field, &t).expect("2x2x3 tensor has a 2x2x3 label")
    };
    let h = census_codes(field.q(), 12, |d| label(d).0)?;
    let g = census_codes(field.q(), 12, |d| label(d).1)?;
    Ok((h, g))
}

/// Per-label line of a cross-check report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCheck {
    pub label: OrbitLabel,
    pub census: u64,
    pub orbit_size: u64,
    pub seed_label: OrbitLabel,
    pub foreign_elements: u64,
}

impl OrbitCheck {
    pub fn ok(&self) -> bool {
        self.seed_label == self.label && self.foreign_elements == 0 && self.census == self.orbit_size
    }
}

/// Outcome of [`census_matches_bfs`].
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub q: u32,
    pub total: u64,
    pub covered: u64,
    pub h_orbits: Vec<OrbitCheck>,
    /// `(G-label, BFS size under G, census count of the fused H-orbits)`.
    pub g_orbits: Vec<(OrbitLabel, u64, u64)>,
    pub disjoint: bool,
    pub group_order: u64,
    /// Size of the kernel of the `H`-action (scalar triples with product 1).
    pub kernel: u64,
    pub failures: Vec<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Number of scalar triples `(a, b, c)` with `abc = 1`; these act trivially.
pub fn scalar_kernel_size(field: &Field) -> u64 {
    let nz: Vec<Fq> = field.elements().filter(|x| !x.is_zero()).collect();
    let mut n = 0;
    for &a in &nz {
        for &b in &nz {
            for &c in &nz {
                if field.mul(field.mul(a, b), c) == field.one() {
                    n += 1;
                }
            }
        }
    }
    n
}

/// BFS from every canonical form, checked against a census computed with the
/// same `classify`: seeds carry their own label, orbits are label-homogeneous,
/// pairwise disjoint, cover the space and have the census sizes; `G`-orbits
/// (BFS with `T`) fuse exactly the transposed pairs; every orbit size divides
/// `|H| / |kernel|`.
pub fn census_matches_bfs_with<F>(field: &Field, classify: F, cap: MemoryCap) -> Result<CrossCheckReport, OracleError>
where
    F: Fn(&Field, &Tensor233) -> OrbitLabel + Sync,
{
    let q = field.q();
    let h_space = Space233::standard(field, false);
    let size = h_space.size();
    if size > MAX_CENSUS || !cap.fits_bitsets(size, 4) {
        return Err(OracleError::SpaceTooLarge { q, size: size as u128 });
    }
    let census = full_census_with(field, &classify)?;
    let group_order = gl_order(2, q) * gl_order(3, q) * gl_order(3, q);
    let kernel = scalar_kernel_size(field);
    let effective = group_order / kernel;

    let mut failures = Vec::new();
    let union = AtomicBitset::new(size);
    let mut h_orbits = Vec::new();
    let mut disjoint = true;
    for label in OrbitLabel::ALL {
        let seed = canonical_form(field, label);
        let seed_label = classify(field, &seed);
        let visited = AtomicBitset::new(size);
        let foreign = AtomicU64::new(0);
        let examples = Mutex::new(Vec::new());
        let clashes = AtomicUsize::new(0);
        let orbit_size = dense_bfs(&h_space, seed.encode(q), &visited, |code| {
            let t = Tensor233::decode(code, q);
            let l = classify(field, &t);
            if l != label {
                foreign.fetch_add(1, Ordering::Relaxed);
                let mut ex = examples.lock().unwrap();
                if ex.len() < 3 {
                    ex.push(format!("{} classified {l}, orbit of {label}", format_233(field, &t)));
                }
            }
            if union.test_and_set(code) {
                clashes.fetch_add(1, Ordering::Relaxed);
            }
        });
        let check = OrbitCheck {
            label,
            census: census.get(label),
            orbit_size,
            seed_label,
            foreign_elements: foreign.load(Ordering::Relaxed),
        };
        if seed_label != label {
            failures.push(format!(
                "canonical form of {label} classified {seed_label}: {}",
                format_233(field, &seed)
            ));
        }
        if check.foreign_elements > 0 {
            failures.push(format!("orbit of {label} has {} foreign elements", check.foreign_elements));
            failures.extend(examples.into_inner().unwrap());
        }
        if check.census != orbit_size {
            failures.push(format!("{label}: census {} vs orbit {orbit_size}", check.census));
        }
        if effective % orbit_size != 0 {
            failures.push(format!("{label}: orbit size {orbit_size} does not divide {effective}"));
        }
        if clashes.load(Ordering::Relaxed) > 0 {
            disjoint = false;
            failures.push(format!("orbit of {label} meets an earlier orbit"));
        }
        h_orbits.push(check);
    }
    let covered = union.count();
    if covered != size {
        failures.push(format!("orbits cover {covered} of {size} tensors"));
    }

    let g_space = Space233::standard(field, true);
    let mut g_orbits = Vec::new();
    for label in OrbitLabel::g_labels() {
        let visited = AtomicBitset::new(size);
        let g_size = dense_bfs(&g_space, canonical_form(field, label).encode(q), &visited, |_| {});
        let partner = label.transposed();
        let expected = census.get(label) + if partner != label { census.get(partner) } else { 0 };
        if g_size != expected {
            failures.push(format!("G-orbit of {label}: BFS {g_size} vs census {expected}"));
        }
        g_orbits.push((label, g_size, expected));
    }

    failures.truncate(MAX_FAILURES);
    Ok(CrossCheckReport { q, total: size, covered, h_orbits, g_orbits, disjoint, group_order, kernel, failures })
}

pub fn census_matches_bfs(field: &Field, cap: MemoryCap) -> Result<CrossCheckReport, OracleError> {
    census_matches_bfs_with(field, classify_h, cap)
}

/// Kernel of the `H`-action, found by enumerating all of `H`. Only feasible
/// for `q = 2`.
pub fn h_action_kernel(field: &Field) -> Vec<GroupElement> {
    let all2 = group_elements(field, &gl_generators::<2>(field));
    let all3 = group_elements(field, &gl_generators::<3>(field));
    let basis: Vec<Tensor233> = (0..18).map(|n| Tensor233::basis(n / 9, (n / 3) % 3, n % 3)).collect();
    let mut kernel = Vec::new();
    for g1 in &all2 {
        for g2 in &all3 {
            for g3 in &all3 {
                let h = GroupElement { g1: *g1, g2: *g2, g3: *g3, transpose: false };
                if basis.iter().all(|t| t.act(field, &h) == *t) {
                    kernel.push(h);
                }
            }
        }
    }
    kernel
}

fn group_elements<const N: usize>(field: &Field, gens: &[Matrix<N, N>]) -> Vec<Matrix<N, N>> {
    let mut seen = HashSet::from([Matrix::<N, N>::identity()]);
    let mut queue = VecDeque::from([Matrix::<N, N>::identity()]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = g.mul(field, &m);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, Copy)]
enum SideGen {
    Left(Mat3),
    Right(Mat3),
}

/// Orbits of subspaces of `M_3(F_q)` under `X -> g X h^T`, discovered lazily.
pub struct SubspaceOrbits {
    field: Field,
    gens: Vec<SideGen>,
    ids: HashMap<Subspace, u32>,
    next_id: u32,
}

impl SubspaceOrbits {
    pub fn new(field: &Field) -> Self {
        let mut gens: Vec<SideGen> = gl_generators::<3>(field).into_iter().map(SideGen::Left).collect();
        gens.extend(gl_generators::<3>(field).into_iter().map(SideGen::Right));
        SubspaceOrbits { field: field.clone(), gens, ids: HashMap::new(), next_id: 0 }
    }

    fn apply(&self, s: &Subspace, g: &SideGen) -> Subspace {
        let images: Vec<[Fq; 9]> = s
            .basis()
            .map(|v| {
                let x = Mat3::from_padded(v);
                let y = match g {
                    SideGen::Left(m) => m.mul(&self.field, &x),
                    SideGen::Right(m) => x.mul(&self.field, &m.transpose()),
                };
                let p = y.to_padded();
                let mut out = [Fq::ZERO; 9];
                out.copy_from_slice(&p[..9]);
                out
            })
            .collect();
        Subspace::span(&self.field, 9, images.iter().map(|v| &v[..]))
    }

    /// Orbit index of `s`, exploring its orbit on first sight.
    pub fn orbit_id(&mut self, s: &Subspace) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.ids.insert(*s, id);
        let mut queue = VecDeque::from([*s]);
        while let Some(cur) = queue.pop_front() {
            for g in &self.gens {
                let image = self.apply(&cur, g);
                if !self.ids.contains_key(&image) {
                    self.ids.insert(image, id);
                    queue.push_back(image);
                }
            }
        }
        id
    }
}

/// Result of [`contraction_equivalence_check`].
#[derive(Debug, Clone, Default)]
pub struct ContractionCheck {
    pub pairs: usize,
    pub same_orbit: usize,
    pub agreements: usize,
    pub mismatches: Vec<(u64, u64)>,
}

/// Samples `pairs` tensor pairs (half of them related by a random group
/// element) and compares "same `H`-orbit" from the BFS partition with "same
/// `GL3 x GL3`-orbit of the first contraction spaces".
pub fn contraction_equivalence_check<R: Rng>(
    field: &Field,
    partition: &Partition,
    pairs: usize,
    rng: &mut R,
) -> ContractionCheck {
    let q = field.q();
    let mut subspaces = SubspaceOrbits::new(field);
    let mut out = ContractionCheck { pairs, ..Default::default() };
    for n in 0..pairs {
        let t = Tensor233::random(field, rng);
        let u = if n % 2 == 0 {
            t.act(field, &GroupElement::random(field, rng, false))
        } else {
            Tensor233::random(field, rng)
        };
        let (ct, cu) = (t.encode(q), u.encode(q));
        let same_orbit = partition.orbit_of(ct) == partition.orbit_of(cu);
        let a = subspaces.orbit_id(&t.contraction(field, crate::tensor::Axis::First).space);
        let b = subspaces.orbit_id(&u.contraction(field, crate::tensor::Axis::First).space);
        out.same_orbit += same_orbit as usize;
        if same_orbit == (a == b) {
            out.agreements += 1;
        } else {
            out.mismatches.push((ct, cu));
        }
    }
    out
}

/// Checks the 2x2x3 classifier against BFS partitions with and without the
/// factor swap; returns human-readable failures.
pub fn check_223_against_bfs(field: &Field, cap: MemoryCap) -> Result<Vec<String>, OracleError> {
    let (h_census, g_census) = census_223(field)?;
    let mut failures = Vec::new();
    for (with_swap, census) in [(false, &h_census), (true, &g_census)] {
        let space = Space223::standard(field, with_swap);
        let partition = orbit_partition(&space, cap)?;
        let mut seen = HashSet::new();
        for orbit in &partition.orbits {
            let (h, g) = classify_223(field, &Tensor223::decode(orbit.representative, field.q()))
                .expect("2x2x3 tensor has a 2x2x3 label");
            let label = if with_swap { g } else { h };
            if !seen.insert(label) {
                failures.push(format!("label {label} names two orbits (swap = {with_swap})"));
            }
            if census.get(label) != orbit.size {
                failures.push(format!(
                    "label {label}: census {} vs orbit {} (swap = {with_swap})",
                    census.get(label),
                    orbit.size
                ));
            }
        }
        if partition.orbits.len() != census.labels().len() {
            failures.push(format!(
                "{} orbits vs {} labels (swap = {with_swap})",
                partition.orbits.len(),
                census.labels().len()
            ));
        }
    }
    debug_assert!(h_census.labels().iter().all(|l| LABELS_223.contains(l)));
    Ok(failures)
}
