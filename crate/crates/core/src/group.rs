//! Finite matrix groups over ℤ/nℤ: closure, conjugacy, normal and derived
//! subgroups, quotients as multiplication tables, and small-group
//! identification.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::modarith::{divisors, gl2_order, mod_inverse, units, ResidueMatrix};

/// Largest quotient materialized as a multiplication table.
pub const QUOTIENT_TABLE_BOUND: usize = 4096;

/// Enumeration bound for [`AbstractQuotient::automorphism_group`].
pub const AUTOMORPHISM_BOUND: usize = 64;

/// Membership set for matrix codes at a fixed level: a bitset when the code
/// space is small, a hash set otherwise.
pub(crate) enum CodeSet {
    Bits { words: Vec<u64>, len: usize },
    Hash(FxHashSet<u64>),
}

impl CodeSet {
    pub(crate) fn for_level(level: u32) -> Self {
        let space = (level as u64).pow(4);
        if space <= 1 << 24 {
            CodeSet::Bits {
                words: vec![0; (space as usize).div_ceil(64)],
                len: 0,
            }
        } else {
            CodeSet::Hash(FxHashSet::default())
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, code: u64) -> bool {
        match self {
            CodeSet::Bits { words, len } => {
                let (w, b) = ((code >> 6) as usize, code & 63);
                let fresh = words[w] & (1 << b) == 0;
                if fresh {
                    words[w] |= 1 << b;
                    *len += 1;
                }
                fresh
            }
            CodeSet::Hash(h) => h.insert(code),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, code: u64) -> bool {
        match self {
            CodeSet::Bits { words, .. } => words[(code >> 6) as usize] & (1 << (code & 63)) != 0,
            CodeSet::Hash(h) => h.contains(&code),
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            CodeSet::Bits { len, .. } => *len,
            CodeSet::Hash(h) => h.len(),
        }
    }
}

/// Breadth-first closure; returns sorted codes.
fn closure_codes(level: u32, gens: &[ResidueMatrix], expected: Option<usize>) -> Vec<u64> {
    let id = ResidueMatrix::identity(level);
    let mut seen = CodeSet::for_level(level);
    seen.insert(id.code());
    let mut queue = vec![id];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for g in gens {
            let y = x.mul_same(g);
            if seen.insert(y.code()) {
                queue.push(y);
            }
        }
        if expected == Some(queue.len()) {
            break;
        }
    }
    let mut codes: Vec<u64> = queue.iter().map(|m| m.code()).collect();
    codes.sort_unstable();
    codes
}

/// A finitely generated subgroup of GL₂(ℤ/nℤ) with its cached sorted closure.
#[derive(Clone)]
pub struct MatGroup {
    level: u32,
    generators: Vec<ResidueMatrix>,
    elements: Arc<[u64]>,
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.elements == other.elements
    }
}

impl Eq for MatGroup {}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("level", &self.level)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// The group generated by `generators` at `level`.
pub fn close_group(level: u32, generators: &[ResidueMatrix]) -> Result<MatGroup> {
    MatGroup::generated(level, generators)
}

impl MatGroup {
    pub fn generated(level: u32, generators: &[ResidueMatrix]) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(0));
        }
        for g in generators {
            if g.level() != level {
                return Err(Error::LevelMismatch {
                    left: level,
                    right: g.level(),
                });
            }
            if !g.is_invertible() {
                return Err(Error::NonInvertibleGenerator {
                    det: g.det(),
                    level,
                });
            }
        }
        Ok(Self::generated_unchecked(level, generators.to_vec()))
    }

    /// Build from integer entry quadruples.
    pub fn from_entries(level: u32, generators: &[[i64; 4]]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|&e| ResidueMatrix::new(level, e))
            .collect::<Result<Vec<_>>>()?;
        Self::generated(level, &gens)
    }

    pub(crate) fn generated_unchecked(level: u32, mut generators: Vec<ResidueMatrix>) -> Self {
        generators.retain(|g| !g.is_identity());
        generators.sort_unstable();
        generators.dedup();
        let elements = closure_codes(level, &generators, None);
        Self {
            level,
            generators,
            elements: elements.into(),
        }
    }

    /// Wrap a sorted list of codes already known to form a group, choosing a
    /// small generating set.
    pub(crate) fn from_sorted_codes(level: u32, codes: Vec<u64>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        let total = codes.len();
        let mut gens: Vec<ResidueMatrix> = Vec::new();
        let mut current = CodeSet::for_level(level);
        current.insert(ResidueMatrix::identity(level).code());
        if total > 1 {
            // A fixed stride walks the elements in a scattered order, which
            // tends to find a generating set in two or three picks.
            let stride = pick_stride(total);
            let mut idx = 0usize;
            for _ in 0..total {
                idx = (idx + stride) % total;
                if current.len() == total {
                    break;
                }
                let code = codes[idx];
                if current.contains(code) {
                    continue;
                }
                gens.push(ResidueMatrix::from_code(level, code));
                current = CodeSet::for_level(level);
                for c in closure_codes(level, &gens, Some(total)) {
                    current.insert(c);
                }
            }
        }
        gens.sort_unstable();
        Self {
            level,
            generators: gens,
            elements: codes.into(),
        }
    }

    pub fn trivial(level: u32) -> Self {
        Self::generated_unchecked(level, vec![])
    }

    /// GL₂(ℤ/nℤ), cached per level.
    pub fn gl2(level: u32) -> Arc<MatGroup> {
        static CACHE: OnceLock<Mutex<FxHashMap<u32, Arc<MatGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&level) {
            return g.clone();
        }
        let g = Arc::new(Self::build_gl2(level));
        cache.lock().unwrap().entry(level).or_insert(g).clone()
    }

    /// SL₂(ℤ/nℤ), cached per level.
    pub fn sl2(level: u32) -> Arc<MatGroup> {
        static CACHE: OnceLock<Mutex<FxHashMap<u32, Arc<MatGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&level) {
            return g.clone();
        }
        let g = Arc::new(Self::gl2(level).intersect_sl2());
        cache.lock().unwrap().entry(level).or_insert(g).clone()
    }

    fn build_gl2(level: u32) -> Self {
        let n = level as u64;
        let space = n.pow(4);
        let mut codes = Vec::with_capacity(gl2_order(level) as usize);
        for code in 0..space {
            if ResidueMatrix::from_code(level, code).is_invertible() {
                codes.push(code);
            }
        }
        let mut gens = vec![
            ResidueMatrix::new(level, [1, 1, 0, 1]).unwrap(),
            ResidueMatrix::new(level, [1, 0, 1, 1]).unwrap(),
        ];
        for u in unit_generators(level, 1) {
            gens.push(ResidueMatrix::diagonal(level, u as i64, 1));
        }
        gens.retain(|g| !g.is_identity());
        gens.sort_unstable();
        gens.dedup();
        Self {
            level,
            generators: gens,
            elements: codes.into(),
        }
    }

    /// Classes of GL₂(ℤ/nℤ) modulo scalars: conjugation by a scalar is trivial,
    /// so these suffice as conjugators.
    pub fn projective_conjugators(level: u32) -> Arc<Vec<ResidueMatrix>> {
        static CACHE: OnceLock<Mutex<FxHashMap<u32, Arc<Vec<ResidueMatrix>>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&level) {
            return g.clone();
        }
        let gl = Self::gl2(level);
        let scalars: Vec<ResidueMatrix> = units(level)
            .into_iter()
            .map(|u| ResidueMatrix::scalar(level, u as i64))
            .collect();
        let reps: Vec<ResidueMatrix> = gl
            .iter()
            .filter(|g| {
                let c = g.code();
                scalars.iter().all(|s| s.mul_same(g).code() >= c)
            })
            .collect();
        let reps = Arc::new(reps);
        cache.lock().unwrap().entry(level).or_insert(reps).clone()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn codes(&self) -> &[u64] {
        &self.elements
    }

    /// Shared handle to the sorted codes, usable as a hash key.
    pub fn codes_arc(&self) -> Arc<[u64]> {
        self.elements.clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = ResidueMatrix> + '_ {
        let n = self.level;
        self.elements
            .iter()
            .map(move |&c| ResidueMatrix::from_code(n, c))
    }

    pub fn element(&self, index: usize) -> ResidueMatrix {
        ResidueMatrix::from_code(self.level, self.elements[index])
    }

    #[inline]
    pub fn index_of(&self, x: &ResidueMatrix) -> Option<usize> {
        if x.level() != self.level {
            return None;
        }
        self.elements.binary_search(&x.code()).ok()
    }

    #[inline]
    pub fn contains(&self, x: &ResidueMatrix) -> bool {
        x.level() == self.level && self.elements.binary_search(&x.code()).is_ok()
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.contains(&ResidueMatrix::minus_identity(self.level))
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.level == other.level
            && self.order() <= other.order()
            && other.order().is_multiple_of(self.order())
            && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.mul_same(b) == b.mul_same(a))
        })
    }

    /// Index in GL₂(ℤ/nℤ).
    pub fn gl2_index(&self) -> u64 {
        gl2_order(self.level) / self.order() as u64
    }

    /// `level.order.<16 hex digits of SHA-256 over the sorted codes>`.
    pub fn label(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.level.to_le_bytes());
        for c in self.elements.iter() {
            h.update(c.to_le_bytes());
        }
        let digest = h.finalize();
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("{}.{}.{}", self.level, self.order(), hex)
    }

    /// Subgroup of elements satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&ResidueMatrix) -> bool) -> MatGroup {
        let codes: Vec<u64> = self
            .elements
            .iter()
            .copied()
            .filter(|&c| keep(&ResidueMatrix::from_code(self.level, c)))
            .collect();
        Self::from_sorted_codes(self.level, codes)
    }

    pub fn intersect(&self, other: &MatGroup) -> Result<MatGroup> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_subgroup_of(big) {
            return Ok(small.clone());
        }
        Ok(small.filter(|x| big.contains(x)))
    }

    /// Determinant-one elements.
    pub fn intersect_sl2(&self) -> MatGroup {
        let one = 1 % self.level;
        if self.generators.iter().all(|g| g.det() == one) {
            return self.clone();
        }
        self.filter(|x| x.det() == one)
    }

    /// `⟨G, −I⟩`.
    pub fn adjoin_minus_identity(&self) -> MatGroup {
        if self.contains_minus_identity() {
            return self.clone();
        }
        self.extend(&ResidueMatrix::minus_identity(self.level))
    }

    /// `⟨G, x⟩`.
    pub fn extend(&self, x: &ResidueMatrix) -> MatGroup {
        if self.contains(x) {
            return self.clone();
        }
        let mut gens = self.generators.clone();
        gens.push(*x);
        Self::generated_unchecked(self.level, gens)
    }

    /// `⟨G, H⟩` for groups at the same level.
    pub fn join(&self, other: &MatGroup) -> MatGroup {
        if other.is_subgroup_of(self) {
            return self.clone();
        }
        if self.is_subgroup_of(other) {
            return other.clone();
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().filter(|g| !self.contains(g)));
        Self::generated_unchecked(self.level, gens)
    }

    /// Image under reduction modulo a divisor `d` of the level.
    pub fn reduce(&self, d: u32) -> Result<MatGroup> {
        if d == 0 || !self.level.is_multiple_of(d) {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: d,
            });
        }
        if d == self.level {
            return Ok(self.clone());
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.reduce_unchecked(d))
            .collect();
        Ok(Self::generated_unchecked(d, gens))
    }

    /// Full preimage at a multiple `target` of the level.
    pub fn preimage(&self, target: u32) -> Result<MatGroup> {
        if target == 0 || !target.is_multiple_of(self.level) {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: target,
            });
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let mut gens = self
            .generators
            .iter()
            .map(|g| g.lift_invertible(target))
            .collect::<Result<Vec<_>>>()?;
        gens.extend(kernel_generators(target, self.level));
        Ok(Self::generated_unchecked(target, gens))
    }

    /// `gGg⁻¹`.
    pub fn conjugate_by(&self, g: &ResidueMatrix) -> MatGroup {
        let gi = g.inv();
        let codes: Vec<u64> = {
            let mut v: Vec<u64> = self
                .iter()
                .map(|x| g.mul_same(&x).mul_same(&gi).code())
                .collect();
            v.sort_unstable();
            v
        };
        let mut gens: Vec<ResidueMatrix> = self
            .generators
            .iter()
            .map(|x| g.mul_same(x).mul_same(&gi))
            .collect();
        gens.sort_unstable();
        Self {
            level: self.level,
            generators: gens,
            elements: codes.into(),
        }
    }

    pub fn transpose(&self) -> MatGroup {
        let gens = self.generators.iter().map(|g| g.transpose()).collect();
        Self::generated_unchecked(self.level, gens)
    }

    /// `g · gens · g⁻¹ ⊆ target`.
    #[inline]
    pub(crate) fn conjugated_gens_inside(
        &self,
        g: &ResidueMatrix,
        gi: &ResidueMatrix,
        target: &MatGroup,
    ) -> bool {
        self.generators
            .iter()
            .all(|h| target.contains(&g.mul_same(h).mul_same(gi)))
    }

    pub fn is_normal_in(&self, ambient: &MatGroup) -> bool {
        self.is_subgroup_of(ambient)
            && ambient.generators.iter().all(|g| {
                let gi = g.inv();
                self.conjugated_gens_inside(g, &gi, self)
            })
    }

    /// Smallest subgroup of `self` containing `seeds` and normal in `self`.
    pub fn normal_closure(&self, seeds: &[ResidueMatrix]) -> MatGroup {
        let mut h = Self::generated_unchecked(self.level, seeds.to_vec());
        let inverses: Vec<ResidueMatrix> = self.generators.iter().map(|g| g.inv()).collect();
        loop {
            let mut missing = None;
            'scan: for s in h.generators.iter() {
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    let c = g.mul_same(s).mul_same(gi);
                    if !h.contains(&c) {
                        missing = Some(c);
                        break 'scan;
                    }
                }
            }
            match missing {
                Some(c) => h = h.extend(&c),
                None => return h,
            }
        }
    }

    /// `[A, B]` for subgroups of `self` with B normal: normal closure of the
    /// generator commutators.
    pub fn commutator_with(&self, a: &MatGroup, b: &MatGroup) -> MatGroup {
        let mut seeds = Vec::new();
        for x in a.generators() {
            for y in b.generators() {
                let c = commutator(x, y);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    pub fn derived_subgroup(&self) -> MatGroup {
        self.commutator_with(self, self)
    }

    /// Normalizer inside `ambient`.
    pub fn normalizer_in(&self, ambient: &MatGroup) -> MatGroup {
        ambient.filter(|g| {
            let gi = g.inv();
            self.conjugated_gens_inside(g, &gi, self)
        })
    }

    pub fn centralizer_of_generators(&self, ambient: &MatGroup) -> MatGroup {
        ambient.filter(|g| {
            self.generators
                .iter()
                .all(|h| g.mul_same(h) == h.mul_same(g))
        })
    }

    /// Center of `self`.
    pub fn center(&self) -> MatGroup {
        self.centralizer_of_generators(self)
    }

    /// Number of distinct determinants.
    pub fn det_image_order(&self) -> usize {
        // The determinant image is generated by the generator determinants.
        let n = self.level as u64;
        let mut img: Vec<u64> = vec![1 % n];
        let gens: Vec<u64> = self.generators.iter().map(|g| g.det() as u64).collect();
        let mut mark = vec![false; self.level as usize];
        mark[(1 % n) as usize] = true;
        let mut i = 0;
        while i < img.len() {
            let x = img[i];
            i += 1;
            for &d in &gens {
                let y = x * d % n;
                if !mark[y as usize] {
                    mark[y as usize] = true;
                    img.push(y);
                }
            }
        }
        img.len()
    }

    pub fn det_image(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.iter().map(|g| g.det()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Multiset of element orders as `order → count`.
    pub fn order_profile(&self) -> BTreeMap<u64, usize> {
        let mut p = BTreeMap::new();
        for x in self.iter() {
            *p.entry(x.order()).or_insert(0) += 1;
        }
        p
    }

    /// Element conjugacy classes, each a sorted list of element indices; the
    /// classes are ordered by their smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let inverses: Vec<ResidueMatrix> = self.generators.iter().map(|g| g.inv()).collect();
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[start] = id;
            let mut members = vec![start];
            let mut i = 0;
            while i < members.len() {
                let x = self.element(members[i]);
                i += 1;
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    let y = g.mul_same(&x).mul_same(gi);
                    let j = self.index_of(&y).expect("closed under conjugation");
                    if class_of[j] == u32::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// All normal subgroups, sorted by (order, codes); includes trivial and full.
    pub fn normal_subgroups(&self) -> Vec<MatGroup> {
        let mut found: FxHashMap<Arc<[u64]>, MatGroup> = FxHashMap::default();
        let mut list: Vec<MatGroup> = Vec::new();
        let mut push = |g: MatGroup, list: &mut Vec<MatGroup>| {
            if !found.contains_key(&g.elements) {
                found.insert(g.elements.clone(), g.clone());
                list.push(g);
            }
        };
        push(Self::trivial(self.level), &mut list);
        for class in self.conjugacy_classes() {
            let x = self.element(class[0]);
            if x.is_identity() {
                continue;
            }
            push(self.normal_closure(&[x]), &mut list);
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..i {
                let (a, b) = (&list[i], &list[j]);
                if a.is_subgroup_of(b) || b.is_subgroup_of(a) {
                    continue;
                }
                let p = a.join(b);
                push(p, &mut list);
            }
            i += 1;
        }
        list.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        list
    }

    /// Quotient by a normal subgroup, with the coset map.
    pub fn quotient(&self, normal: &MatGroup) -> Result<(AbstractQuotient, QuotientMap)> {
        if !normal.is_normal_in(self) {
            return Err(Error::NotNormal);
        }
        let k = self.order() / normal.order();
        if k > QUOTIENT_TABLE_BOUND {
            return Err(Error::TooLarge {
                order: k,
                bound: QUOTIENT_TABLE_BOUND,
            });
        }
        let map = QuotientMap::new(self, normal);
        let reps: Vec<ResidueMatrix> = map.reps.iter().map(|&i| self.element(i as usize)).collect();
        let mut table = vec![0u32; k * k];
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                table[i * k + j] = map.coset_of_element(self, &a.mul_same(b));
            }
        }
        let q = AbstractQuotient::from_table(k, table)?;
        Ok((q, map))
    }
}

/// Coset labels for `G / N`: cosets are numbered by their smallest member.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// Coset index per element index of G.
    pub coset_of: Vec<u32>,
    /// Element index (in G) of the smallest member of each coset.
    pub reps: Vec<u32>,
}

impl QuotientMap {
    pub(crate) fn new(g: &MatGroup, n: &MatGroup) -> Self {
        let mut coset_of = vec![u32::MAX; g.order()];
        let mut reps = Vec::with_capacity(g.order() / n.order());
        let nelems: Vec<ResidueMatrix> = n.iter().collect();
        for i in 0..g.order() {
            if coset_of[i] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(i as u32);
            let x = g.element(i);
            for y in &nelems {
                let j = g.index_of(&x.mul_same(y)).expect("N ⊆ G");
                coset_of[j] = c;
            }
        }
        Self { coset_of, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    #[inline]
    pub fn coset_of_element(&self, g: &MatGroup, x: &ResidueMatrix) -> u32 {
        self.coset_of[g.index_of(x).expect("element of G")]
    }
}

/// `x y x⁻¹ y⁻¹`.
pub fn commutator(x: &ResidueMatrix, y: &ResidueMatrix) -> ResidueMatrix {
    x.mul_same(y).mul_same(&x.inv()).mul_same(&y.inv())
}

/// Greedy generators of `{u ∈ (ℤ/mℤ)^× : u ≡ 1 mod d}`.
pub(crate) fn unit_generators(m: u32, d: u32) -> Vec<u32> {
    let n = m as u64;
    let members: Vec<u32> = units(m).into_iter().filter(|&u| u % d == 1 % d).collect();
    let mut covered = FxHashSet::default();
    covered.insert(1 % m);
    let mut gens = Vec::new();
    for &u in &members {
        if covered.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut list: Vec<u32> = covered.iter().copied().collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i] as u64;
            i += 1;
            for &g in &gens {
                let y = (x * g as u64 % n) as u32;
                if covered.insert(y) {
                    list.push(y);
                }
            }
        }
    }
    gens
}

/// Generators of `ker(GL₂(ℤ/mℤ) → GL₂(ℤ/dℤ))`.
pub fn kernel_generators(m: u32, d: u32) -> Vec<ResidueMatrix> {
    let d64 = d as i64;
    let mut gens = vec![
        ResidueMatrix::new(m, [1, d64, 0, 1]).unwrap(),
        ResidueMatrix::new(m, [1, 0, d64, 1]).unwrap(),
    ];
    for u in unit_generators(m, d) {
        gens.push(ResidueMatrix::diagonal(m, u as i64, 1));
        gens.push(ResidueMatrix::diagonal(m, 1, u as i64));
    }
    gens.retain(|g| !g.is_identity());
    gens
}

/// Generators of `ker(SL₂(ℤ/mℤ) → SL₂(ℤ/dℤ))`.
pub fn sl2_kernel_generators(m: u32, d: u32) -> Vec<ResidueMatrix> {
    let d64 = d as i64;
    let mut gens = vec![
        ResidueMatrix::new(m, [1, d64, 0, 1]).unwrap(),
        ResidueMatrix::new(m, [1, 0, d64, 1]).unwrap(),
    ];
    for u in unit_generators(m, d) {
        let ui = mod_inverse(u as u64, m as u64).unwrap() as i64;
        gens.push(ResidueMatrix::diagonal(m, u as i64, ui));
    }
    gens.retain(|g| !g.is_identity());
    gens
}

/// Smallest divisor `d` of the level with `ker(GL₂(ℤ/m) → GL₂(ℤ/d)) ⊆ G`.
pub fn gl2_level_of(g: &MatGroup) -> u32 {
    let m = g.level();
    divisors(m)
        .into_iter()
        .find(|&d| kernel_generators(m, d).iter().all(|k| g.contains(k)))
        .unwrap_or(m)
}

/// Smallest divisor `d` of the level with `ker(SL₂(ℤ/m) → SL₂(ℤ/d)) ⊆ G`.
pub fn sl2_level_of(g: &MatGroup) -> u32 {
    let m = g.level();
    divisors(m)
        .into_iter()
        .find(|&d| sl2_kernel_generators(m, d).iter().all(|k| g.contains(k)))
        .unwrap_or(m)
}

/// Some `g ∈ conjugators` with `g H g⁻¹ = K`.
pub fn find_conjugator(
    h: &MatGroup,
    k: &MatGroup,
    conjugators: &[ResidueMatrix],
) -> Option<ResidueMatrix> {
    if h.level() != k.level() || h.order() != k.order() {
        return None;
    }
    if h == k {
        return Some(ResidueMatrix::identity(h.level()));
    }
    conjugators.iter().copied().find(|g| {
        let gi = g.inv();
        h.conjugated_gens_inside(g, &gi, k)
    })
}

/// Cheap conjugation invariants used to rule out conjugacy before scanning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub order: usize,
    pub det_image: usize,
    pub sl2_order: usize,
    pub profile: Vec<(u64, usize)>,
}

impl Fingerprint {
    pub fn of(g: &MatGroup) -> Self {
        let one = 1 % g.level();
        let mut sl2 = 0;
        let mut profile = BTreeMap::new();
        for x in g.iter() {
            if x.det() == one {
                sl2 += 1;
            }
            *profile.entry(x.order()).or_insert(0) += 1;
        }
        Self {
            order: g.order(),
            det_image: g.det_image_order(),
            sl2_order: sl2,
            profile: profile.into_iter().collect(),
        }
    }
}

/// `g` with `g H g⁻¹ = K` in GL₂(ℤ/nℤ).
pub fn subgroup_conjugate(h: &MatGroup, k: &MatGroup) -> Result<Option<ResidueMatrix>> {
    if h.level() != k.level() {
        return Err(Error::LevelMismatch {
            left: h.level(),
            right: k.level(),
        });
    }
    if h.order() != k.order() {
        return Ok(None);
    }
    if h == k {
        return Ok(Some(ResidueMatrix::identity(h.level())));
    }
    if Fingerprint::of(h) != Fingerprint::of(k) {
        return Ok(None);
    }
    let conj = MatGroup::projective_conjugators(h.level());
    Ok(find_conjugator(h, k, &conj))
}

/// `g` with `H ⊆ g G g⁻¹` in GL₂(ℤ/nℤ).
pub fn contains_up_to_conjugacy(h: &MatGroup, g: &MatGroup) -> Result<Option<ResidueMatrix>> {
    if h.level() != g.level() {
        return Err(Error::LevelMismatch {
            left: h.level(),
            right: g.level(),
        });
    }
    if !g.order().is_multiple_of(h.order()) {
        return Ok(None);
    }
    if h.is_subgroup_of(g) {
        return Ok(Some(ResidueMatrix::identity(h.level())));
    }
    let conj = MatGroup::projective_conjugators(h.level());
    // H ⊆ xGx⁻¹ ⇔ x⁻¹Hx ⊆ G.
    Ok(conj
        .iter()
        .copied()
        .find(|x| h.conjugated_gens_inside(&x.inv(), x, g)))
}

/// Serialized group: `{"level": n, "generators": [[a,b,c,d], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub level: u32,
    pub generators: Vec<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GroupFile {
    pub fn of(g: &MatGroup) -> Self {
        Self {
            level: g.level(),
            generators: g
                .generators()
                .iter()
                .map(|x| x.entries().map(|v| v as i64))
                .collect(),
            order: None,
            label: None,
        }
    }

    /// Catalog form with order and label.
    pub fn catalog_entry(g: &MatGroup) -> Self {
        Self {
            order: Some(g.order()),
            label: Some(g.label()),
            ..Self::of(g)
        }
    }

    pub fn to_group(&self) -> Result<MatGroup> {
        MatGroup::from_entries(self.level, &self.generators)
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractQuotient {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    abelian: bool,
    generators: Vec<u32>,
}

/// Isomorphism types distinguished here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SmallGroup {
    Trivial,
    Cyclic(usize),
    D3,
    D6,
    Dic3,
    A4,
    Other { order: usize, abelian: bool },
}

impl SmallGroup {
    pub fn is_abelian(&self) -> bool {
        match self {
            SmallGroup::Trivial | SmallGroup::Cyclic(_) => true,
            SmallGroup::D3 | SmallGroup::D6 | SmallGroup::Dic3 | SmallGroup::A4 => false,
            SmallGroup::Other { abelian, .. } => *abelian,
        }
    }
}

impl fmt::Display for SmallGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallGroup::Trivial => write!(f, "trivial"),
            SmallGroup::Cyclic(k) => write!(f, "C{k}"),
            SmallGroup::D3 => write!(f, "D3"),
            SmallGroup::D6 => write!(f, "D6"),
            SmallGroup::Dic3 => write!(f, "Dic3"),
            SmallGroup::A4 => write!(f, "A4"),
            SmallGroup::Other { order, abelian } => {
                write!(
                    f,
                    "other({order},{})",
                    if *abelian { "abelian" } else { "nonabelian" }
                )
            }
        }
    }
}

impl AbstractQuotient {
    /// Validate a table (identity, inverses, sampled associativity) and cache
    /// element orders.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self> {
        let bad = |s: &str| Error::InvalidInput(format!("not a group table: {s}"));
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x as usize >= order)
        {
            return Err(bad("shape"));
        }
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| bad("no identity"))?;
        let mut inverses = vec![0u32; order];
        for (x, inv) in inverses.iter_mut().enumerate() {
            let y = (0..order)
                .find(|&y| mul(x, y) == identity)
                .ok_or_else(|| bad("missing inverse"))?;
            *inv = y as u32;
        }
        let step = (order / 17).max(1);
        for a in (0..order).step_by(step) {
            for b in (0..order).step_by(step) {
                for c in (0..order).step_by(step) {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        let mut element_orders = vec![0u32; order];
        for (x, o) in element_orders.iter_mut().enumerate() {
            let mut y = x;
            let mut k = 1;
            while y != identity {
                y = mul(y, x);
                k += 1;
            }
            *o = k;
        }
        let abelian = (0..order).all(|a| (a + 1..order).all(|b| mul(a, b) == mul(b, a)));
        let mut q = Self {
            order,
            table,
            identity: identity as u32,
            inverses,
            element_orders,
            abelian,
            generators: Vec::new(),
        };
        q.generators = q.greedy_generators();
        Ok(q)
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut by_order: Vec<u32> = (0..self.order as u32).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_orders[x as usize]), x));
        let mut gens = Vec::new();
        let mut sub = vec![self.identity];
        for x in by_order {
            if sub.len() == self.order {
                break;
            }
            if sub.contains(&x) {
                continue;
            }
            gens.push(x);
            sub = self.subgroup_generated(&gens);
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn element_order(&self, a: u32) -> u32 {
        self.element_orders[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn order_profile(&self) -> BTreeMap<u32, usize> {
        let mut p = BTreeMap::new();
        for &o in &self.element_orders {
            *p.entry(o).or_insert(0) += 1;
        }
        p
    }

    pub fn involution_count(&self) -> usize {
        self.element_orders.iter().filter(|&&o| o == 2).count()
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    pub fn identify(&self) -> SmallGroup {
        let n = self.order;
        if n == 1 {
            return SmallGroup::Trivial;
        }
        if self.element_orders.iter().any(|&o| o as usize == n) {
            return SmallGroup::Cyclic(n);
        }
        if !self.abelian && n == 6 {
            return SmallGroup::D3;
        }
        if !self.abelian && n == 12 {
            match self.involution_count() {
                7 => return SmallGroup::D6,
                1 => return SmallGroup::Dic3,
                3 => return SmallGroup::A4,
                _ => {}
            }
        }
        SmallGroup::Other {
            order: n,
            abelian: self.abelian,
        }
    }

    /// Homomorphisms `self → target` by generator-image backtracking. `allowed`
    /// restricts the image of each generator; `injective` keeps only
    /// embeddings. Each map is returned as the image of every element.
    pub fn homomorphisms(
        &self,
        target: &AbstractQuotient,
        allowed: &dyn Fn(usize, u32) -> bool,
        injective: bool,
        limit: Option<usize>,
    ) -> Vec<Vec<u32>> {
        let gens = &self.generators;
        let mut out = Vec::new();
        let mut images: Vec<u32> = Vec::with_capacity(gens.len());
        self.hom_search(target, allowed, injective, limit, &mut images, &mut out);
        out
    }

    fn hom_search(
        &self,
        target: &AbstractQuotient,
        allowed: &dyn Fn(usize, u32) -> bool,
        injective: bool,
        limit: Option<usize>,
        images: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let j = images.len();
        if j == self.generators.len() {
            if let Some(map) = self.extend_map(target, images) {
                if injective {
                    let mut seen = vec![false; target.order];
                    for &y in &map {
                        if seen[y as usize] {
                            return;
                        }
                        seen[y as usize] = true;
                    }
                }
                out.push(map);
            }
            return;
        }
        let g = self.generators[j];
        let og = self.element_orders[g as usize];
        for y in 0..target.order as u32 {
            let oy = target.element_orders[y as usize];
            if !og.is_multiple_of(oy) || (injective && oy != og) || !allowed(j, y) {
                continue;
            }
            images.push(y);
            if self.extend_map(target, images).is_some() {
                self.hom_search(target, allowed, injective, limit, images, out);
            }
            images.pop();
        }
    }

    /// The homomorphism on `⟨gens[..k]⟩` sending `gens[i] ↦ images[i]`, if
    /// consistent; entries outside the subgroup are `u32::MAX`.
    fn extend_map(&self, target: &AbstractQuotient, images: &[u32]) -> Option<Vec<u32>> {
        let gens = &self.generators[..images.len()];
        let mut map = vec![u32::MAX; self.order];
        map[self.identity as usize] = target.identity;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            let fx = map[x as usize];
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(fx, h);
                match map[y as usize] {
                    u32::MAX => {
                        map[y as usize] = fy;
                        list.push(y);
                    }
                    v if v != fy => return None,
                    _ => {}
                }
            }
        }
        Some(map)
    }

    /// All isomorphisms `self → other`.
    pub fn isomorphisms(&self, other: &AbstractQuotient, limit: Option<usize>) -> Vec<Vec<u32>> {
        if self.order != other.order
            || self.abelian != other.abelian
            || self.order_profile() != other.order_profile()
        {
            return Vec::new();
        }
        self.homomorphisms(other, &|_, _| true, true, limit)
    }

    pub fn is_isomorphic(&self, other: &AbstractQuotient) -> bool {
        !self.isomorphisms(other, Some(1)).is_empty()
    }

    /// Automorphisms as element permutations; the identity comes first.
    pub fn automorphism_group(&self) -> Result<Vec<Vec<u32>>> {
        if self.order > AUTOMORPHISM_BOUND {
            return Err(Error::TooLarge {
                order: self.order,
                bound: AUTOMORPHISM_BOUND,
            });
        }
        Ok(self.automorphisms_unbounded())
    }

    pub(crate) fn automorphisms_unbounded(&self) -> Vec<Vec<u32>> {
        let mut auts = self.isomorphisms(self, None);
        auts.sort();
        let id: Vec<u32> = (0..self.order as u32).collect();
        if let Some(pos) = auts.iter().position(|a| *a == id) {
            let a = auts.remove(pos);
            auts.insert(0, a);
        }
        auts
    }

    /// Inner automorphisms (conjugation maps), deduplicated.
    pub fn inner_automorphisms(&self) -> Vec<Vec<u32>> {
        let mut set: Vec<Vec<u32>> = (0..self.order as u32)
            .map(|g| {
                let gi = self.inv(g);
                (0..self.order as u32)
                    .map(|x| self.mul(self.mul(g, x), gi))
                    .collect()
            })
            .collect();
        set.sort();
        set.dedup();
        set
    }

    /// All subgroups contained in `within` (a subgroup, as element indices),
    /// each as a sorted element list; ordered by (size, elements).
    pub fn subgroups_within(&self, within: &[u32]) -> Vec<Vec<u32>> {
        let mut found: FxHashSet<Vec<u32>> = FxHashSet::default();
        let trivial = vec![self.identity];
        found.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for &x in within {
                    if h.binary_search(&x).is_ok() {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.push(x);
                    let k = self.subgroup_generated(&gens);
                    if found.insert(k.clone()) {
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Vec<u32>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }
}

fn pick_stride(total: usize) -> usize {
    // A prime near the golden-ratio point of the list, coprime to its length.
    let mut s = ((total as f64) * 0.618_033_988_75) as usize | 1;
    while s.gcd(&total) != 1 {
        s += 2;
    }
    s.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::sl2_order;

    fn m(n: u32, e: [i64; 4]) -> ResidueMatrix {
        ResidueMatrix::new(n, e).unwrap()
    }

    fn borel(p: u32) -> MatGroup {
        MatGroup::gl2(p).filter(|g| g.entries()[2] == 0)
    }

    #[test]
    fn closure_examples() {
        let g = MatGroup::from_entries(6, &[[1, 1, 0, 1]]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        let g6 = MatGroup::from_entries(6, &[[1, 1, 0, 5], [5, 1, 3, 2], [5, 4, 4, 1]]).unwrap();
        assert_eq!(g6.order(), 48);
        assert!(matches!(
            MatGroup::from_entries(6, &[[2, 0, 0, 1]]),
            Err(Error::NonInvertibleGenerator { .. })
        ));
    }

    #[test]
    fn ambient_orders_and_kernels() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 9, 10, 12] {
            assert_eq!(MatGroup::gl2(n).order() as u64, gl2_order(n));
            assert_eq!(MatGroup::sl2(n).order() as u64, sl2_order(n));
            let regen = MatGroup::generated(n, MatGroup::gl2(n).generators()).unwrap();
            assert_eq!(regen.order() as u64, gl2_order(n));
        }
        for mlev in [2u32, 4, 6, 8, 9, 12, 18, 20, 24, 36] {
            for d in divisors(mlev) {
                let k = MatGroup::generated(mlev, &kernel_generators(mlev, d)).unwrap();
                assert_eq!(
                    k.order() as u64,
                    gl2_order(mlev) / gl2_order(d),
                    "m={mlev} d={d}"
                );
                assert!(k.iter().all(|x| x.reduce(d).unwrap().is_identity()));
                let s = MatGroup::generated(mlev, &sl2_kernel_generators(mlev, d)).unwrap();
                assert_eq!(s.order() as u64, sl2_order(mlev) / sl2_order(d));
                assert!(s.iter().all(|x| x.det() == 1 % mlev));
            }
        }
    }

    #[test]
    fn conjugacy_examples() {
        let b = borel(3);
        assert_eq!(
            subgroup_conjugate(&b, &b).unwrap(),
            Some(ResidueMatrix::identity(3))
        );
        let lower = b.transpose();
        let w = subgroup_conjugate(&b, &lower).unwrap().unwrap();
        assert_eq!(b.conjugate_by(&w), lower);
        let swap = m(3, [0, 1, 1, 0]);
        assert_eq!(b.conjugate_by(&swap), lower);

        let torus = MatGroup::gl2(5).filter(|g| g.entries()[1] == 0 && g.entries()[2] == 0);
        assert!(contains_up_to_conjugacy(&torus, &borel(5))
            .unwrap()
            .is_some());
        let gl6 = MatGroup::gl2(6);
        assert_eq!(
            contains_up_to_conjugacy(&torus.reduce(5).unwrap(), &MatGroup::gl2(5)).unwrap(),
            Some(ResidueMatrix::identity(5))
        );
        assert!(subgroup_conjugate(&b, &gl6).is_err());
    }

    #[test]
    fn different_profiles_are_not_conjugate() {
        let g6 = MatGroup::from_entries(6, &[[1, 1, 0, 5], [5, 1, 3, 2], [5, 4, 4, 1]]).unwrap();
        // GL₂(ℤ/2) × Q₈ with Q₈ ⊂ SL₂(ℤ/3).
        let q8 = MatGroup::sl2(3)
            .normal_subgroups()
            .into_iter()
            .find(|n| n.order() == 8)
            .unwrap();
        let other = MatGroup::gl2(6).filter(|g| q8.contains(&g.reduce(3).unwrap()));
        assert_eq!(other.order(), 48);
        assert_ne!(Fingerprint::of(&g6), Fingerprint::of(&other));
        let conj = MatGroup::projective_conjugators(6);
        assert!(find_conjugator(&g6, &other, &conj).is_none());
        // Same profile, still not conjugate: the kernel of reduction mod 2.
        let kernel = MatGroup::gl2(6).filter(|g| g.reduce(2).unwrap().is_identity());
        assert_eq!(Fingerprint::of(&g6), Fingerprint::of(&kernel));
        assert_eq!(subgroup_conjugate(&g6, &kernel).unwrap(), None);
        assert_eq!(subgroup_conjugate(&g6, &other).unwrap(), None);
    }

    #[test]
    fn normal_subgroups_examples() {
        assert_eq!(MatGroup::gl2(2).normal_subgroups().len(), 3);
        let sl3 = MatGroup::sl2(3);
        let ns = sl3.normal_subgroups();
        assert!(ns
            .iter()
            .any(|n| n.order() == 2 && n.contains_minus_identity()));
        let q8 = ns.iter().find(|n| n.order() == 8).unwrap();
        assert!(!q8.is_abelian());
        assert_eq!(q8.order_profile().get(&4), Some(&6));
        let c6 = MatGroup::from_entries(6, &[[1, 1, 0, 1]]).unwrap();
        assert_eq!(c6.normal_subgroups().len(), 4);
        for n in sl3.normal_subgroups() {
            assert!(n.is_normal_in(&sl3));
        }
    }

    #[test]
    fn derived_examples() {
        let c6 = MatGroup::from_entries(6, &[[1, 1, 0, 1]]).unwrap();
        assert_eq!(c6.derived_subgroup().order(), 1);
        assert_eq!(MatGroup::gl2(2).derived_subgroup().order(), 3);
        for g in [
            MatGroup::gl2(3).as_ref().clone(),
            borel(5),
            MatGroup::gl2(4).as_ref().clone(),
        ] {
            let d = g.derived_subgroup();
            assert!(d.is_subgroup_of(&g.intersect_sl2()));
            let (q, _) = g.quotient(&d).unwrap();
            assert!(q.is_abelian());
        }
    }

    #[test]
    fn quotient_examples() {
        let gl3 = MatGroup::gl2(3);
        let (q, _) = gl3.quotient(&gl3).unwrap();
        assert_eq!(q.identify(), SmallGroup::Trivial);
        let (q, _) = gl3.quotient(&MatGroup::sl2(3)).unwrap();
        assert_eq!(q.identify(), SmallGroup::Cyclic(2));
        assert_eq!(gl3.quotient(&borel(3)).map(|_| ()), Err(Error::NotNormal));
    }

    /// Cayley table of ⟨a, b | a⁶, b² = a³, b a b⁻¹ = a⁻¹⟩ on pairs (i, j) ↦ aⁱbʲ.
    fn dicyclic3() -> AbstractQuotient {
        let idx = |i: usize, j: usize| (i % 6) * 2 + j;
        let mut t = vec![0u32; 144];
        for i in 0..6 {
            for j in 0..2 {
                for k in 0..6 {
                    for l in 0..2 {
                        // aⁱ bʲ aᵏ bˡ = aⁱ a^{±k} bʲ bˡ
                        let k2 = if j == 1 { 6 - k } else { k };
                        let (mut e, mut f) = (i + k2, j + l);
                        if f == 2 {
                            e += 3;
                            f = 0;
                        }
                        t[idx(i, j) * 12 + idx(k, l)] = idx(e, f) as u32;
                    }
                }
            }
        }
        AbstractQuotient::from_table(12, t).unwrap()
    }

    fn table_of(g: &MatGroup) -> AbstractQuotient {
        g.quotient(&MatGroup::trivial(g.level())).unwrap().0
    }

    #[test]
    fn identification_and_automorphisms() {
        let s3 = table_of(&MatGroup::gl2(2));
        assert_eq!(s3.identify(), SmallGroup::D3);
        let auts = s3.automorphism_group().unwrap();
        assert_eq!(auts.len(), 6);
        assert_eq!(s3.inner_automorphisms().len(), 6);

        let dic = dicyclic3();
        assert_eq!(dic.involution_count(), 1);
        assert_eq!(dic.identify(), SmallGroup::Dic3);

        // D₆ ≅ S₃ × C₂ realized at level 6 as GL₂(ℤ/2) × ⟨−I mod 3⟩.
        let d6 = MatGroup::gl2(6).filter(|g| {
            let r = g.reduce(3).unwrap();
            r.is_identity() || r == ResidueMatrix::minus_identity(3)
        });
        let d6t = table_of(&d6);
        assert_eq!(d6t.involution_count(), 7);
        assert_eq!(d6t.identify(), SmallGroup::D6);
        assert!(!d6t.is_isomorphic(&dic));

        let c2 = table_of(&MatGroup::from_entries(3, &[[2, 0, 0, 2]]).unwrap());
        assert_eq!(c2.automorphism_group().unwrap().len(), 1);
        let v4 = table_of(&MatGroup::from_entries(3, &[[2, 0, 0, 1], [1, 0, 0, 2]]).unwrap());
        assert_eq!(v4.automorphism_group().unwrap().len(), 6);
        let big = table_of(&MatGroup::gl2(4));
        assert!(matches!(
            big.automorphism_group(),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sl2_and_minus_identity() {
        let s = MatGroup::sl2(6);
        assert_eq!(s.intersect_sl2(), *s);
        let z = MatGroup::from_entries(6, &[[5, 0, 0, 5]]).unwrap();
        assert_eq!(z.adjoin_minus_identity(), z);
        let t = MatGroup::from_entries(6, &[[1, 1, 0, 1]]).unwrap();
        assert_eq!(t.adjoin_minus_identity().order(), 12);
    }

    #[test]
    fn levels_of_simple_groups() {
        let gl = MatGroup::gl2(6);
        assert_eq!(gl2_level_of(&gl), 1);
        assert_eq!(sl2_level_of(&gl), 1);
        let b6 = borel(3).preimage(6).unwrap();
        assert_eq!(b6.order(), 12 * 6);
        assert_eq!(gl2_level_of(&b6), 3);
        assert_eq!(b6.reduce(3).unwrap(), borel(3));
    }

    #[test]
    fn labels_are_stable_under_regeneration() {
        let g = MatGroup::from_entries(10, &[[5, 6, 4, 5], [4, 9, 9, 6], [7, 3, 9, 4]]).unwrap();
        let again = MatGroup::from_sorted_codes(10, g.codes().to_vec());
        assert_eq!(g.label(), again.label());
        assert_eq!(MatGroup::generated(10, again.generators()).unwrap(), g);
    }
}
