//! Fibered products over a common quotient: decomposition of subgroups of
//! GL₂(ℤ/m₁m₂) into Goursat data, reconstruction, projection, SL₂
//! contraction, and enumeration of all subgroup classes of a product from
//! the two factor lattices.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbstractQuotient, MatGroup, QuotientMap};
use crate::modarith::ResidueMatrix;

/// A subgroup of GL₂(ℤ/m₁) × GL₂(ℤ/m₂) written as `G₁ ×_ψ G₂`.
#[derive(Clone, Debug)]
pub struct FiberedProductData {
    pub m1: u32,
    pub m2: u32,
    pub g1: MatGroup,
    pub g2: MatGroup,
    pub n1: MatGroup,
    pub n2: MatGroup,
    /// Γ, realized as `G₁/N₁` with cosets numbered by smallest member.
    pub quotient: AbstractQuotient,
    pub q1: QuotientMap,
    pub q2: QuotientMap,
    /// Coset of N₂ in G₂ paired with each coset of N₁ in G₁.
    pub pairing: Vec<u32>,
}

/// JSON summary of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub m1: u32,
    pub m2: u32,
    pub quotient_label: String,
    pub orders: [usize; 4],
}

fn check_split(m: u32, m1: u32, m2: u32) -> Result<()> {
    if m1 == 0 || m2 == 0 || m1 as u64 * m2 as u64 != m as u64 || m1.gcd(&m2) != 1 {
        return Err(Error::BadSplit { m, m1, m2 });
    }
    Ok(())
}

/// Goursat decomposition of `g` along `m = m1·m2`.
pub fn decompose(g: &MatGroup, m1: u32, m2: u32) -> Result<FiberedProductData> {
    check_split(g.level(), m1, m2)?;
    let g1 = g.reduce(m1)?;
    let g2 = g.reduce(m2)?;
    let id1 = ResidueMatrix::identity(m1);
    let id2 = ResidueMatrix::identity(m2);
    let mut n1c = Vec::new();
    let mut n2c = Vec::new();
    for x in g.iter() {
        let (a, b) = (x.reduce_unchecked(m1), x.reduce_unchecked(m2));
        if b == id2 {
            n1c.push(a.code());
        }
        if a == id1 {
            n2c.push(b.code());
        }
    }
    n1c.sort_unstable();
    n2c.sort_unstable();
    let n1 = MatGroup::from_sorted_codes(m1, n1c);
    let n2 = MatGroup::from_sorted_codes(m2, n2c);
    let (quotient, q1) = g1.quotient(&n1)?;
    let q2 = QuotientMap::new(&g2, &n2);
    let mut pairing = vec![u32::MAX; q1.len()];
    for x in g.iter() {
        let c1 = q1.coset_of_element(&g1, &x.reduce_unchecked(m1));
        let c2 = q2.coset_of_element(&g2, &x.reduce_unchecked(m2));
        pairing[c1 as usize] = c2;
    }
    Ok(FiberedProductData {
        m1,
        m2,
        g1,
        g2,
        n1,
        n2,
        quotient,
        q1,
        q2,
        pairing,
    })
}

/// `G₁ ×_ψ G₂` for a pairing of coset indices `G₁/N₁ → G₂/N₂`.
pub fn fibered_product(
    g1: &MatGroup,
    g2: &MatGroup,
    n1: &MatGroup,
    n2: &MatGroup,
    pairing: &[u32],
) -> Result<MatGroup> {
    Ok(FiberedProductData::new(
        g1.clone(),
        g2.clone(),
        n1.clone(),
        n2.clone(),
        pairing.to_vec(),
    )?
    .reconstruct())
}

/// `A × B` inside GL₂(ℤ/m₁m₂) for subgroups at coprime levels.
pub fn direct_product(a: &MatGroup, b: &MatGroup) -> MatGroup {
    FiberedProductData::new(a.clone(), b.clone(), a.clone(), b.clone(), vec![0])
        .expect("coprime levels")
        .reconstruct()
}

impl FiberedProductData {
    /// Validate that `pairing` is an isomorphism `G₁/N₁ → G₂/N₂`.
    pub fn new(
        g1: MatGroup,
        g2: MatGroup,
        n1: MatGroup,
        n2: MatGroup,
        pairing: Vec<u32>,
    ) -> Result<Self> {
        let (m1, m2) = (g1.level(), g2.level());
        if m1.gcd(&m2) != 1 {
            return Err(Error::BadSplit { m: m1 * m2, m1, m2 });
        }
        if !n1.is_normal_in(&g1) || !n2.is_normal_in(&g2) {
            return Err(Error::NotNormal);
        }
        let (quotient, q1) = g1.quotient(&n1)?;
        let (other, q2) = g2.quotient(&n2)?;
        if other.order() != quotient.order() || pairing.len() != quotient.order() {
            return Err(Error::QuotientMismatch(format!(
                "quotient orders {} and {}",
                quotient.order(),
                other.order()
            )));
        }
        let mut seen = vec![false; other.order()];
        for &p in &pairing {
            if p as usize >= other.order() || seen[p as usize] {
                return Err(Error::QuotientMismatch("pairing is not a bijection".into()));
            }
            seen[p as usize] = true;
        }
        let k = quotient.order() as u32;
        for a in 0..k {
            for b in 0..k {
                let lhs = pairing[quotient.mul(a, b) as usize];
                let rhs = other.mul(pairing[a as usize], pairing[b as usize]);
                if lhs != rhs {
                    return Err(Error::QuotientMismatch(
                        "pairing is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(Self {
            m1,
            m2,
            g1,
            g2,
            n1,
            n2,
            quotient,
            q1,
            q2,
            pairing,
        })
    }

    pub fn level(&self) -> u32 {
        self.m1 * self.m2
    }

    /// Order of the fibered product, `|G₁|·|G₂|/|Γ|`.
    pub fn order(&self) -> usize {
        self.g1.order() * self.g2.order() / self.quotient.order()
    }

    /// Element of G₂ representing the coset paired with the coset of `a`.
    fn partner(&self, a: &ResidueMatrix) -> ResidueMatrix {
        let c1 = self.q1.coset_of_element(&self.g1, a);
        let c2 = self.pairing[c1 as usize];
        self.g2.element(self.q2.reps[c2 as usize] as usize)
    }

    /// Generators of the fibered product at level m₁m₂.
    pub fn generators(&self) -> Vec<ResidueMatrix> {
        let mut gens: Vec<ResidueMatrix> = self
            .g1
            .generators()
            .iter()
            .map(|a| ResidueMatrix::crt_pair(a, &self.partner(a)).unwrap())
            .collect();
        let id1 = ResidueMatrix::identity(self.m1);
        gens.extend(
            self.n2
                .generators()
                .iter()
                .map(|b| ResidueMatrix::crt_pair(&id1, b).unwrap()),
        );
        gens
    }

    pub fn reconstruct(&self) -> MatGroup {
        MatGroup::generated_unchecked(self.level(), self.generators())
    }

    /// Coset of Γ paired with a coset of N₂ in G₂.
    fn gamma_of_g2_coset(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.pairing.len()];
        for (c1, &c2) in self.pairing.iter().enumerate() {
            inv[c2 as usize] = c1 as u32;
        }
        inv
    }

    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            m1: self.m1,
            m2: self.m2,
            quotient_label: self.quotient.identify().to_string(),
            orders: [
                self.g1.order(),
                self.g2.order(),
                self.n1.order(),
                self.n2.order(),
            ],
        }
    }
}

/// Induced data for the reduction of the fibered product modulo `d1·d2`,
/// with `d1 | m1` and `d2 | m2`.
pub fn induced_projection(f: &FiberedProductData, d1: u32, d2: u32) -> Result<FiberedProductData> {
    if d1 == 0 || d2 == 0 || !f.m1.is_multiple_of(d1) || !f.m2.is_multiple_of(d2) {
        return Err(Error::BadSplit {
            m: f.level(),
            m1: d1,
            m2: d2,
        });
    }
    let gamma = &f.quotient;
    let back = f.gamma_of_g2_coset();
    // K = ψ₁(ker π₁)·ψ₂(ker π₂) inside Γ.
    let mut seeds: Vec<u32> = Vec::new();
    for (i, x) in f.g1.iter().enumerate() {
        if x.reduce_unchecked(d1).is_identity() {
            seeds.push(f.q1.coset_of[i]);
        }
    }
    for (i, y) in f.g2.iter().enumerate() {
        if y.reduce_unchecked(d2).is_identity() {
            seeds.push(back[f.q2.coset_of[i] as usize]);
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    let k = gamma.subgroup_generated(&seeds);
    let in_k = |c: u32| k.binary_search(&c).is_ok();

    let g1bar = f.g1.reduce(d1)?;
    let g2bar = f.g2.reduce(d2)?;
    let collect = |g: &MatGroup, d: u32, keep: &dyn Fn(usize) -> bool| {
        let mut codes: Vec<u64> = g
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, x)| x.reduce_unchecked(d).code())
            .collect();
        codes.sort_unstable();
        codes.dedup();
        MatGroup::from_sorted_codes(d, codes)
    };
    let n1bar = collect(&f.g1, d1, &|i| in_k(f.q1.coset_of[i]));
    let n2bar = collect(&f.g2, d2, &|i| in_k(back[f.q2.coset_of[i] as usize]));
    let q1bar = QuotientMap::new(&g1bar, &n1bar);
    let q2bar = QuotientMap::new(&g2bar, &n2bar);
    let mut pairing = vec![u32::MAX; q1bar.len()];
    for (i, x) in f.g1.iter().enumerate() {
        let c1bar = q1bar.coset_of_element(&g1bar, &x.reduce_unchecked(d1));
        if pairing[c1bar as usize] != u32::MAX {
            continue;
        }
        let c2 = f.pairing[f.q1.coset_of[i] as usize];
        let y = f.g2.element(f.q2.reps[c2 as usize] as usize);
        pairing[c1bar as usize] = q2bar.coset_of_element(&g2bar, &y.reduce_unchecked(d2));
    }
    FiberedProductData::new(g1bar, g2bar, n1bar, n2bar, pairing)
}

/// Restriction to SL₂ × SL₂ over `Γ_S = ψ₁(S₁) ∩ ψ₂(S₂)`.
pub fn sl2_contract(f: &FiberedProductData) -> Result<FiberedProductData> {
    let s1 = f.g1.intersect_sl2();
    let s2 = f.g2.intersect_sl2();
    let back = f.gamma_of_g2_coset();
    let mut img1 = vec![false; f.quotient.order()];
    for x in s1.iter() {
        img1[f.q1.coset_of_element(&f.g1, &x) as usize] = true;
    }
    let mut img2 = vec![false; f.quotient.order()];
    for y in s2.iter() {
        img2[back[f.q2.coset_of_element(&f.g2, &y) as usize] as usize] = true;
    }
    let in_gs = |c: usize| img1[c] && img2[c];
    let h1 = s1.filter(|x| in_gs(f.q1.coset_of_element(&f.g1, x) as usize));
    let h2 = s2.filter(|y| in_gs(back[f.q2.coset_of_element(&f.g2, y) as usize] as usize));
    let k1 = f.n1.intersect_sl2();
    let k2 = f.n2.intersect_sl2();
    let q1s = QuotientMap::new(&h1, &k1);
    let q2s = QuotientMap::new(&h2, &k2);
    let mut pairing = vec![u32::MAX; q1s.len()];
    for x in h1.iter() {
        let c = q1s.coset_of_element(&h1, &x);
        if pairing[c as usize] != u32::MAX {
            continue;
        }
        let target = f.pairing[f.q1.coset_of_element(&f.g1, &x) as usize];
        let y = h2
            .iter()
            .find(|y| f.q2.coset_of_element(&f.g2, y) == target)
            .expect("Γ_S is in the image of S₂");
        pairing[c as usize] = q2s.coset_of_element(&h2, &y);
    }
    FiberedProductData::new(h1, h2, k1, k2, pairing)
}

/// `ker(GL₂(ℤ/m) → GL₂(ℤ/(m/p))) ⊆ N` for some prime `p | m`.
pub fn contains_prime_layer_kernel(n: &MatGroup) -> bool {
    let m = n.level();
    crate::modarith::prime_divisors(m).into_iter().any(|p| {
        crate::group::kernel_generators(m, m / p)
            .iter()
            .all(|k| n.contains(k))
    })
}

/// Information passed to filters during product enumeration.
pub struct TripleView<'a> {
    pub a: &'a MatGroup,
    pub na: &'a MatGroup,
    pub b: &'a MatGroup,
    pub nb: &'a MatGroup,
    pub quotient: &'a AbstractQuotient,
}

type PairFilter<'a> = dyn Fn(&MatGroup, &MatGroup) -> bool + Sync + 'a;
type SideFilter<'a> = dyn Fn(&MatGroup, &MatGroup) -> bool + Sync + 'a;
type QuotientFilter<'a> = dyn Fn(&TripleView<'_>) -> bool + Sync + 'a;

/// Restrictions applied while enumerating fibered products; everything is
/// accepted by default.
pub struct ProductFilter<'a> {
    /// On projection classes `(A, B)`.
    pub pair: Box<PairFilter<'a>>,
    /// On `(A, N_A)`.
    pub kernel_a: Box<SideFilter<'a>>,
    /// On `(B, N_B)`.
    pub kernel_b: Box<SideFilter<'a>>,
    /// On the common quotient.
    pub quotient: Box<QuotientFilter<'a>>,
}

impl Default for ProductFilter<'_> {
    fn default() -> Self {
        Self {
            pair: Box::new(|_, _| true),
            kernel_a: Box::new(|_, _| true),
            kernel_b: Box::new(|_, _| true),
            quotient: Box::new(|_| true),
        }
    }
}

impl<'a> ProductFilter<'a> {
    /// Only fibered products whose level is exactly `m1·m2`.
    pub fn exact_level() -> Self {
        Self {
            kernel_a: Box::new(|_, n| !contains_prime_layer_kernel(n)),
            kernel_b: Box::new(|_, n| !contains_prime_layer_kernel(n)),
            ..Self::default()
        }
    }
}

/// Normal subgroup of a projection class, one per orbit under its normalizer.
struct NormalEntry {
    n: MatGroup,
    index: usize,
    stabilizer: MatGroup,
    quotient: std::sync::OnceLock<Option<QuotientData>>,
}

struct QuotientData {
    quotient: AbstractQuotient,
    map: QuotientMap,
    /// Action of the stabilizer on the quotient, closed into a group.
    induced: Vec<Vec<u32>>,
    automorphisms: std::sync::OnceLock<Vec<Vec<u32>>>,
}

struct SideData {
    group: MatGroup,
    entries: Vec<NormalEntry>,
}

fn side_data(a: &MatGroup, ambient: &MatGroup, keep: &SideFilter<'_>) -> SideData {
    let normalizer = a.normalizer_in(ambient);
    let normals = a.normal_subgroups();
    let mut seen: FxHashSet<Arc<[u64]>> = FxHashSet::default();
    let mut entries = Vec::new();
    let key = |g: &MatGroup| -> Arc<[u64]> { g.codes().into() };
    for n in normals {
        if seen.contains(&key(&n)) {
            continue;
        }
        // Orbit under the normalizer.
        let mut orbit = vec![n.clone()];
        seen.insert(key(&n));
        let mut i = 0;
        while i < orbit.len() {
            let cur = orbit[i].clone();
            i += 1;
            for g in normalizer.generators() {
                let c = cur.conjugate_by(g);
                if seen.insert(key(&c)) {
                    orbit.push(c);
                }
            }
        }
        if !keep(a, &n) {
            continue;
        }
        let stabilizer = normalizer.filter(|g| {
            let gi = g.inv();
            n.conjugated_gens_inside(g, &gi, &n)
        });
        entries.push(NormalEntry {
            index: a.order() / n.order(),
            n,
            stabilizer,
            quotient: std::sync::OnceLock::new(),
        });
    }
    SideData {
        group: a.clone(),
        entries,
    }
}

fn perm_group_closure(order: usize, gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let id: Vec<u32> = (0..order as u32).collect();
    let mut seen: FxHashSet<Vec<u32>> = FxHashSet::default();
    seen.insert(id.clone());
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        let x = list[i].clone();
        i += 1;
        for g in gens {
            let y: Vec<u32> = x.iter().map(|&v| g[v as usize]).collect();
            if seen.insert(y.clone()) {
                list.push(y);
            }
        }
    }
    list
}

impl NormalEntry {
    fn quotient_data(&self, group: &MatGroup) -> Option<&QuotientData> {
        self.quotient
            .get_or_init(|| {
                let (quotient, map) = group.quotient(&self.n).ok()?;
                let gens: Vec<Vec<u32>> = self
                    .stabilizer
                    .generators()
                    .iter()
                    .map(|s| {
                        let si = s.inv();
                        map.reps
                            .iter()
                            .map(|&r| {
                                let x = group.element(r as usize);
                                map.coset_of_element(group, &s.mul_same(&x).mul_same(&si))
                            })
                            .collect()
                    })
                    .collect();
                let induced = perm_group_closure(quotient.order(), &gens);
                Some(QuotientData {
                    quotient,
                    map,
                    induced,
                    automorphisms: std::sync::OnceLock::new(),
                })
            })
            .as_ref()
    }
}

impl QuotientData {
    fn automorphisms(&self) -> &[Vec<u32>] {
        self.automorphisms
            .get_or_init(|| self.quotient.automorphisms_unbounded())
    }
}

/// Representatives of `H \ G / K` inside a permutation group `G` given as a
/// list, for subgroups `H` (left) and `K` (right).
fn double_coset_reps(all: &[Vec<u32>], left: &[Vec<u32>], right: &[Vec<u32>]) -> Vec<usize> {
    let index: FxHashMap<&Vec<u32>, usize> = all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut marked = vec![false; all.len()];
    let mut reps = Vec::new();
    for (i, tau) in all.iter().enumerate() {
        if marked[i] {
            continue;
        }
        reps.push(i);
        for beta in left {
            let bt: Vec<u32> = tau.iter().map(|&v| beta[v as usize]).collect();
            for alpha in right {
                let p: Vec<u32> = alpha.iter().map(|&v| bt[v as usize]).collect();
                if let Some(&j) = index.get(&p) {
                    marked[j] = true;
                }
            }
        }
    }
    reps
}

fn invert_perm(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u32;
    }
    inv
}

/// All fibered products `A ×_ψ B` with `A` from `lattice_a` and `B` from
/// `lattice_b`, one per conjugacy class of GL₂(ℤ/m₁) × GL₂(ℤ/m₂), subject to
/// `filter`. Output order follows the input class order.
pub fn enumerate_fibered(
    lattice_a: &[MatGroup],
    lattice_b: &[MatGroup],
    filter: &ProductFilter<'_>,
) -> Result<Vec<FiberedProductData>> {
    let (m1, m2) = match (lattice_a.first(), lattice_b.first()) {
        (Some(a), Some(b)) => (a.level(), b.level()),
        _ => return Ok(Vec::new()),
    };
    check_split(m1 * m2, m1, m2)?;
    let amb_a = MatGroup::gl2(m1);
    let amb_b = MatGroup::gl2(m2);

    let pairs: Vec<(usize, usize)> = (0..lattice_a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..lattice_b.len())
                .filter(move |&j| (filter.pair)(&lattice_a[i], &lattice_b[j]))
                .map(move |j| (i, j))
        })
        .collect();
    let used_a: Vec<usize> = {
        let mut v: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let used_b: Vec<usize> = {
        let mut v: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let side_a: FxHashMap<usize, SideData> = used_a
        .par_iter()
        .map(|&i| (i, side_data(&lattice_a[i], &amb_a, &*filter.kernel_a)))
        .collect();
    let side_b: FxHashMap<usize, SideData> = used_b
        .par_iter()
        .map(|&j| (j, side_data(&lattice_b[j], &amb_b, &*filter.kernel_b)))
        .collect();

    let chunks: Vec<Vec<FiberedProductData>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_products(&side_a[&i], &side_b[&j], filter))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn pair_products(
    sa: &SideData,
    sb: &SideData,
    filter: &ProductFilter<'_>,
) -> Vec<FiberedProductData> {
    let mut out = Vec::new();
    for ea in &sa.entries {
        for eb in &sb.entries {
            if ea.index != eb.index {
                continue;
            }
            let Some(qa) = ea.quotient_data(&sa.group) else {
                continue;
            };
            let Some(qb) = eb.quotient_data(&sb.group) else {
                continue;
            };
            let view = TripleView {
                a: &sa.group,
                na: &ea.n,
                b: &sb.group,
                nb: &eb.n,
                quotient: &qa.quotient,
            };
            if !(filter.quotient)(&view) {
                continue;
            }
            let Some(phi0) = qa.quotient.isomorphisms(&qb.quotient, Some(1)).pop() else {
                continue;
            };
            let phi0_inv = invert_perm(&phi0);
            let auts = qa.automorphisms();
            // Aut_B transported to Q_A: φ₀⁻¹ ∘ β ∘ φ₀.
            let left: Vec<Vec<u32>> = qb
                .induced
                .iter()
                .map(|beta| {
                    phi0.iter()
                        .map(|&v| phi0_inv[beta[v as usize] as usize])
                        .collect()
                })
                .collect();
            for r in double_coset_reps(auts, &left, &qa.induced) {
                let tau = &auts[r];
                let pairing: Vec<u32> = tau.iter().map(|&v| phi0[v as usize]).collect();
                out.push(FiberedProductData {
                    m1: sa.group.level(),
                    m2: sb.group.level(),
                    g1: sa.group.clone(),
                    g2: sb.group.clone(),
                    n1: ea.n.clone(),
                    n2: eb.n.clone(),
                    quotient: qa.quotient.clone(),
                    q1: qa.map.clone(),
                    q2: qb.map.clone(),
                    pairing,
                });
            }
        }
    }
    out
}

/// Every subgroup class of `GL₂(ℤ/m₁) × GL₂(ℤ/m₂)` from the factor lattices,
/// sorted by (order, label).
pub fn enumerate_product_subgroups(
    lattice_a: &[MatGroup],
    lattice_b: &[MatGroup],
) -> Result<Vec<MatGroup>> {
    let data = enumerate_fibered(lattice_a, lattice_b, &ProductFilter::default())?;
    let mut groups: Vec<(usize, String, MatGroup)> = data
        .par_iter()
        .map(|f| {
            let g = f.reconstruct();
            (g.order(), g.label(), g)
        })
        .collect();
    groups.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(groups.into_iter().map(|t| t.2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Fingerprint;

    fn g6() -> MatGroup {
        MatGroup::from_entries(6, &[[1, 1, 0, 5], [5, 1, 3, 2], [5, 4, 4, 1]]).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let gl6 = MatGroup::gl2(6);
        let f = decompose(&gl6, 2, 3).unwrap();
        assert_eq!(f.quotient.order(), 1);
        assert_eq!(f.reconstruct(), *gl6);

        let f = decompose(&g6(), 2, 3).unwrap();
        assert_eq!(f.g1, *MatGroup::gl2(2));
        assert_eq!(f.g2, *MatGroup::gl2(3));
        assert_eq!(f.quotient.identify(), crate::group::SmallGroup::D3);
        assert_eq!(f.reconstruct(), g6());
        assert_eq!(f.order(), 48);
        assert!(decompose(&g6(), 6, 1).is_ok());
        assert!(matches!(
            decompose(&MatGroup::gl2(12), 2, 6),
            Err(Error::BadSplit { .. })
        ));
    }

    #[test]
    fn trivial_pairing_gives_direct_product() {
        let a = MatGroup::gl2(2);
        let b = MatGroup::gl2(3);
        let g = fibered_product(&a, &b, &a, &b, &[0]).unwrap();
        assert_eq!(g, *MatGroup::gl2(6));
    }

    #[test]
    fn bad_pairings_are_rejected() {
        let a = MatGroup::gl2(2);
        let b = MatGroup::gl2(3);
        let sl = MatGroup::sl2(3);
        let a3 = a.derived_subgroup();
        // C₂ on one side against C₂ on the other, but with a non-bijective map.
        assert!(matches!(
            fibered_product(&a, &b, &a3, &sl, &[0, 0]),
            Err(Error::QuotientMismatch(_))
        ));
        assert!(matches!(
            fibered_product(&a, &b, &a3, &MatGroup::trivial(3), &[0, 1]),
            Err(Error::QuotientMismatch(_))
        ));
    }

    #[test]
    fn projection_matches_reduction() {
        let g18 =
            MatGroup::from_entries(18, &[[7, 17, 0, 5], [17, 3, 3, 14], [4, 3, 3, 14]]).unwrap();
        let f = decompose(&g18, 2, 9).unwrap();
        let p = induced_projection(&f, 2, 3).unwrap();
        assert_eq!(p.reconstruct(), g18.reduce(6).unwrap());
        let same = induced_projection(&f, 2, 9).unwrap();
        assert_eq!(same.reconstruct(), g18);
        assert_eq!(same.pairing, f.pairing);
        let one = induced_projection(&f, 1, 1).unwrap();
        assert_eq!(one.quotient.order(), 1);
        assert_eq!(one.reconstruct().order(), 1);
    }

    #[test]
    fn sl2_contraction_matches_intersection() {
        let f = decompose(&g6(), 2, 3).unwrap();
        let s = sl2_contract(&f).unwrap();
        assert_eq!(s.reconstruct(), g6().intersect_sl2());
        // SL₂(ℤ/3) maps onto A₃ only, so Γ_S = A₃.
        assert_eq!(s.quotient.order(), 3);
        let full = decompose(&MatGroup::gl2(6), 2, 3).unwrap();
        let s = sl2_contract(&full).unwrap();
        assert_eq!(s.quotient.order(), 1);
        assert_eq!(s.reconstruct(), *MatGroup::sl2(6));
    }

    #[test]
    fn product_enumeration_trivial_inputs() {
        let a = vec![MatGroup::trivial(2)];
        let b = vec![MatGroup::trivial(3)];
        let out = enumerate_product_subgroups(&a, &b).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].order(), 1);
    }

    #[test]
    fn sign_quotient_gives_index_two() {
        let a = MatGroup::gl2(2);
        let b = MatGroup::gl2(3);
        let a3 = a.derived_subgroup();
        let sl = MatGroup::sl2(3);
        let (qa, _) = a.quotient(&a3).unwrap();
        let (qb, _) = b.quotient(&sl).unwrap();
        let iso = qa.isomorphisms(&qb, Some(1)).pop().unwrap();
        let g = fibered_product(&a, &b, &a3, &sl, &iso).unwrap();
        assert_eq!(g.order(), 144);
        assert_eq!(Fingerprint::of(&g).order, 144);
    }
}
