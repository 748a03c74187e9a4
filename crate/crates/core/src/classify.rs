//! Detection and classification of non-abelian entanglement groups: named
//! groups, genus-zero enumeration per level, maximality, the search for
//! pre-twist groups, and the D₆ family `G_{6,D}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goursat::{decompose, FiberedProductData};
use crate::group::{
    contains_up_to_conjugacy, subgroup_conjugate, AbstractQuotient, GroupFile, MatGroup,
    QuotientMap, SmallGroup,
};
use crate::invariants::{curve_invariants, gl2_level, is_twist_independent, sl2_level};
use crate::lattice::genus0_exact_level;
use crate::modarith::{is_fundamental_discriminant, kronecker, prime_powers, ResidueMatrix};

fn named(level: u32, gens: &[[i64; 4]]) -> MatGroup {
    MatGroup::from_entries(level, gens).expect("invertible generators")
}

/// The four maximal genus-zero non-abelian entanglement groups, keyed by level.
pub fn maximal_groups() -> Vec<(u32, MatGroup)> {
    vec![
        (6, g6()),
        (10, named(10, &[[5, 6, 4, 5], [4, 9, 9, 6], [7, 3, 9, 4]])),
        (
            15,
            named(15, &[[2, 3, 14, 14], [4, 0, 0, 1], [0, 2, 14, 0]]),
        ),
        (18, g18()),
    ]
}

pub fn g6() -> MatGroup {
    named(6, &[[1, 1, 0, 5], [5, 1, 3, 2], [5, 4, 4, 1]])
}

pub fn g18() -> MatGroup {
    named(18, &[[7, 17, 0, 5], [17, 3, 3, 14], [4, 3, 3, 14]])
}

/// Upper-triangular invertible matrices mod `n`.
pub fn borel(n: u32) -> MatGroup {
    MatGroup::gl2(n).filter(|g| g.entries()[2] == 0)
}

/// Normalizer of the non-split Cartan subgroup mod an odd prime `p`, for
/// the non-residue `-1` (valid for `p ≡ 3 mod 4`).
pub fn normalizer_nonsplit(p: u32) -> MatGroup {
    MatGroup::gl2(p).filter(|g| {
        let [a, b, c, d] = g.entries();
        (a == d && (b + c) % p == 0) || (b == c && (a + d) % p == 0)
    })
}

/// `GL₂(ℤ/2) ×_ψ B(3)` over `{±1}`, pairing the sign character with the
/// determinant mod 3.
pub fn serre_level6_group() -> MatGroup {
    MatGroup::gl2(6).filter(|g| {
        let g3 = g.reduce_unchecked(3);
        g3.entries()[2] == 0 && (g.reduce_unchecked(2).order() == 2) == (g3.det() == 2)
    })
}

/// The ten detection groups at their defining levels, by name.
pub fn detection_groups() -> Vec<(&'static str, MatGroup)> {
    vec![
        ("G2,1", borel(2)),
        ("G3,1", normalizer_nonsplit(3)),
        (
            "G4,1",
            named(4, &[[1, 1, 1, 2], [0, 1, 3, 0], [1, 1, 0, 3]]),
        ),
        ("G6,1", g6()),
        (
            "G9,1",
            named(9, &[[4, 2, 3, 4], [2, 0, 0, 5], [1, 0, 0, 2]]),
        ),
        (
            "G9,2",
            named(9, &[[1, 1, 0, 1], [2, 0, 0, 5], [1, 0, 0, 2]]),
        ),
        (
            "G9,3",
            named(9, &[[2, 2, 0, 4], [4, 7, 0, 8], [5, 4, 3, 4]]),
        ),
        ("G18,1", g18()),
        (
            "G18,2",
            named(18, &[[1, 10, 3, 11], [16, 3, 9, 8], [11, 4, 12, 11]]),
        ),
        (
            "G18,3",
            named(18, &[[16, 9, 9, 8], [5, 16, 6, 5], [7, 13, 3, 10]]),
        ),
    ]
}

/// `H ∩ G` at the least common level.
pub fn intersect_lifted(h: &MatGroup, g: &MatGroup) -> Result<MatGroup> {
    let l = h.level().lcm(&g.level());
    h.preimage(l)?.intersect(&g.preimage(l)?)
}

/// The D₆-family group `G_{6,D}` at level `lcm(6, |D|)`: elements whose
/// reduction mod 3 is upper triangular, with the mod-3 image modulo `±I`
/// matched to the mod-2 reduction and the top-left entry mod 3 matched to
/// the Kronecker character of the determinant.
pub fn construct_g6d(d: i64) -> Result<MatGroup> {
    if d == 1 || !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let level = 6u32.lcm(&(d.unsigned_abs() as u32));
    let phi = borel3_to_gl2_2();
    Ok(MatGroup::gl2(level).filter(|g| {
        let g3 = g.reduce_unchecked(3);
        if g3.entries()[2] != 0 {
            return false;
        }
        let g2 = g.reduce_unchecked(2);
        if phi[&g3.code()] != g2.code() {
            return false;
        }
        let eta = if g3.entries()[0] == 1 { 1 } else { -1 };
        kronecker(d, g.det() as i64) == eta
    }))
}

/// The surjection `B(3) → B(3)/{±I} ≅ GL₂(ℤ/2)` sending `T ↦ [[0,1],[1,1]]`
/// and `diag(1,2) ↦ [[1,1],[0,1]]`, as a code table.
fn borel3_to_gl2_2() -> BTreeMap<u64, u64> {
    let gens = [
        (
            ResidueMatrix::new(3, [1, 1, 0, 1]).unwrap(),
            ResidueMatrix::new(2, [0, 1, 1, 1]).unwrap(),
        ),
        (
            ResidueMatrix::new(3, [1, 0, 0, 2]).unwrap(),
            ResidueMatrix::new(2, [1, 1, 0, 1]).unwrap(),
        ),
        (
            ResidueMatrix::new(3, [2, 0, 0, 2]).unwrap(),
            ResidueMatrix::identity(2),
        ),
    ];
    let mut map = BTreeMap::new();
    let mut stack = vec![(ResidueMatrix::identity(3), ResidueMatrix::identity(2))];
    map.insert(stack[0].0.code(), stack[0].1.code());
    while let Some((x, y)) = stack.pop() {
        for (g, h) in &gens {
            let (x2, y2) = (x.mul_same(g), y.mul_same(h));
            match map.get(&x2.code()) {
                None => {
                    map.insert(x2.code(), y2.code());
                    stack.push((x2, y2));
                }
                Some(&v) => debug_assert_eq!(v, y2.code()),
            }
        }
    }
    debug_assert_eq!(map.len(), 12);
    map
}

/// Coprime `(m1, m2)` with `m1·m2 = m`, `1 < m1 < m2`.
pub fn permissible_splits(m: u32) -> Vec<(u32, u32)> {
    let parts = prime_powers(m);
    let k = parts.len();
    let mut out = Vec::new();
    for mask in 1..(1u32 << k) {
        if mask == (1 << k) - 1 {
            continue;
        }
        let m1: u32 = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| parts[i])
            .product();
        let m2 = m / m1;
        if m1 < m2 {
            out.push((m1, m2));
        }
    }
    out.sort_unstable();
    out
}

fn check_permissible(m: u32, m1: u32, m2: u32) -> Result<()> {
    if m1 <= 1 || m2 <= 1 || m1 as u64 * m2 as u64 != m as u64 || m1.gcd(&m2) != 1 {
        return Err(Error::BadSplit { m, m1, m2 });
    }
    Ok(())
}

/// Common quotient at one split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub m1: u32,
    pub m2: u32,
    pub quotient: SmallGroup,
}

/// A group with at least one non-abelian common quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglementRecord {
    pub label: String,
    pub order: usize,
    pub generators: Vec<[i64; 4]>,
    pub gl2_level: u32,
    pub sl2_level: u32,
    pub genus: u64,
    pub factorizations: Vec<Factorization>,
    pub twist_independent: bool,
    pub maximal: bool,
}

impl EntanglementRecord {
    /// The non-abelian quotient at `(m1, m2)`, if any.
    pub fn quotient_at(&self, m1: u32, m2: u32) -> Option<&SmallGroup> {
        self.factorizations
            .iter()
            .find(|f| (f.m1, f.m2) == (m1, m2) || (f.m1, f.m2) == (m2, m1))
            .map(|f| &f.quotient)
            .filter(|q| !q.is_abelian())
    }

    pub fn group(&self) -> Result<MatGroup> {
        MatGroup::from_entries(self.gl2_level, &self.generators)
    }
}

/// Reduce to the GL₂-level, decompose at every permissible split and report
/// when some common quotient is non-abelian.
pub fn detect_entanglement(g: &MatGroup) -> Result<Option<EntanglementRecord>> {
    let m = gl2_level(g);
    let g = g.reduce(m)?;
    let mut factorizations = Vec::new();
    for (m1, m2) in permissible_splits(m) {
        let f = decompose(&g, m1, m2)?;
        factorizations.push(Factorization {
            m1,
            m2,
            quotient: f.quotient.identify(),
        });
    }
    if factorizations.iter().all(|f| f.quotient.is_abelian()) {
        return Ok(None);
    }
    Ok(Some(EntanglementRecord {
        label: g.label(),
        order: g.order(),
        generators: GroupFile::of(&g).generators,
        gl2_level: m,
        sl2_level: sl2_level(&g),
        genus: curve_invariants(&g).genus,
        factorizations,
        twist_independent: is_twist_independent(&g),
        maximal: false,
    }))
}

/// A classified group with its record.
#[derive(Clone, Debug)]
pub struct Classified {
    pub group: MatGroup,
    pub record: EntanglementRecord,
}

/// All conjugacy classes of exact GL₂-level `m` with genus zero and a
/// non-abelian common quotient, sorted by (order, label).
pub fn enumerate_nonab_genus0(m: u32, budget: u64) -> Result<Vec<Classified>> {
    if prime_powers(m).len() < 2 {
        return Ok(Vec::new());
    }
    classify_groups(&genus0_exact_level(m, budget)?)
}

/// Entanglement records for the given classes, in input order.
pub fn classify_groups(classes: &[MatGroup]) -> Result<Vec<Classified>> {
    let found: Vec<Option<Classified>> = classes
        .par_iter()
        .map(|g| {
            Ok(detect_entanglement(g)?.map(|record| Classified {
                group: g.clone(),
                record,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Strict containment `G ⊊ xHx⁻¹` for some `x`, compared at `G`'s level.
pub fn strictly_contained(g: &MatGroup, h: &MatGroup) -> Result<Option<ResidueMatrix>> {
    if !g.level().is_multiple_of(h.level()) {
        return Ok(None);
    }
    let hl = h.preimage(g.level())?;
    if hl.order() <= g.order() {
        return Ok(None);
    }
    contains_up_to_conjugacy(g, &hl)
}

/// Mark records not strictly contained, up to conjugacy, in another record.
/// A strict supergroup has level dividing the subgroup's level, so the input
/// must cover every relevant divisor level.
pub fn maximal_filter(items: &mut [Classified]) -> Result<()> {
    let flags: Vec<bool> = (0..items.len())
        .into_par_iter()
        .map(|i| {
            for (j, other) in items.iter().enumerate() {
                if i != j && strictly_contained(&items[i].group, &other.group)?.is_some() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    for (item, flag) in items.iter_mut().zip(flags) {
        item.record.maximal = flag;
    }
    Ok(())
}

/// One row of a frequency table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u32,
    pub m1: u32,
    pub m2: u32,
    pub count_total: usize,
    pub count_d3: usize,
    pub count_d6: usize,
    pub count_dic3: usize,
}

/// Per-split counts of records with a non-abelian quotient at that split.
pub fn table_rows(m: u32, records: &[EntanglementRecord]) -> Vec<TableRow> {
    permissible_splits(m)
        .into_iter()
        .map(|(m1, m2)| {
            let qs: Vec<&SmallGroup> = records
                .iter()
                .filter_map(|r| r.quotient_at(m1, m2))
                .collect();
            TableRow {
                m,
                m1,
                m2,
                count_total: qs.len(),
                count_d3: qs.iter().filter(|q| ***q == SmallGroup::D3).count(),
                count_d6: qs.iter().filter(|q| ***q == SmallGroup::D6).count(),
                count_dic3: qs.iter().filter(|q| ***q == SmallGroup::Dic3).count(),
            }
        })
        .collect()
}

/// A matched maximal class and the conjugator onto the reference group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaximalMatch {
    pub record: EntanglementRecord,
    pub reference_level: Option<u32>,
    pub conjugator: Option<[u32; 4]>,
}

/// Maximal records matched against [`maximal_groups`].
pub fn match_maximal(items: &[Classified]) -> Result<Vec<MaximalMatch>> {
    let refs = maximal_groups();
    items
        .iter()
        .filter(|c| c.record.maximal)
        .map(|c| {
            for (lvl, r) in &refs {
                if r.level() == c.group.level() {
                    if let Some(x) = subgroup_conjugate(r, &c.group)? {
                        return Ok(MaximalMatch {
                            record: c.record.clone(),
                            reference_level: Some(*lvl),
                            conjugator: Some(x.entries()),
                        });
                    }
                }
            }
            Ok(MaximalMatch {
                record: c.record.clone(),
                reference_level: None,
                conjugator: None,
            })
        })
        .collect()
}

/// A glued SL₂-side group from the pre-twist search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PretwistCandidate {
    pub base: String,
    pub m1: u32,
    pub m2: u32,
    pub n1_order: usize,
    pub n2_order: usize,
    pub b_order: usize,
    pub s_prime: GroupFile,
    pub genus: u64,
}

/// Stage counts and survivors of the pre-twist search at one split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PretwistReport {
    pub level: u32,
    pub m1: u32,
    pub m2: u32,
    pub genus0_groups: usize,
    pub abelian_quotient_groups: usize,
    pub kernel_triples: usize,
    pub glued_groups: usize,
    pub survivors: Vec<PretwistCandidate>,
}

/// Subgroup of an abstract group, re-indexed as a standalone table.
fn sub_table(q: &AbstractQuotient, elems: &[u32]) -> Result<AbstractQuotient> {
    let mut local = vec![u32::MAX; q.order()];
    for (i, &e) in elems.iter().enumerate() {
        local[e as usize] = i as u32;
    }
    let k = elems.len();
    let mut table = vec![0u32; k * k];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            table[i * k + j] = local[q.mul(a, b) as usize];
        }
    }
    AbstractQuotient::from_table(k, table)
}

/// Candidate kernels `Ñ ⊴ Ḡ(m̄ᵢ)` inside `N ∩ SL₂`, properly, containing
/// `[Ḡ(m̄ᵢ), N]` and not containing `[Ḡ(m̄ᵢ), Ḡ(m̄ᵢ)]`.
pub fn twist_kernels(g: &MatGroup, n: &MatGroup) -> Vec<MatGroup> {
    let nsl = n.intersect_sl2();
    let gn = g.commutator_with(g, n);
    let gg = g.derived_subgroup();
    g.normal_subgroups()
        .into_iter()
        .filter(|k| {
            k.is_subgroup_of(&nsl)
                && k.order() < nsl.order()
                && gn.is_subgroup_of(k)
                && !gg.is_subgroup_of(k)
        })
        .collect()
}

struct TwistSide {
    /// `Ḡ(m̄ᵢ)/Ñᵢ`.
    quotient: AbstractQuotient,
    map: QuotientMap,
    group: MatGroup,
    /// ϖ̃ᵢ as a table `Γ̃ᵢ → Γ̄` (side-1 coset numbering).
    to_gamma: Vec<u32>,
    /// Elements of `ψ̃ᵢ(Ḡ_SL₂(m̄ᵢ))`.
    sl2_image: Vec<u32>,
    /// `Ḡ_SL₂(m̄ᵢ)`.
    sl2_part: MatGroup,
}

fn twist_side(
    f: &FiberedProductData,
    side: usize,
    kernel: &MatGroup,
    sl2_part: &MatGroup,
) -> Result<TwistSide> {
    let (g, qbar) = if side == 1 {
        (&f.g1, &f.q1)
    } else {
        (&f.g2, &f.q2)
    };
    let (quotient, map) = g.quotient(kernel)?;
    let mut inv_pairing = vec![0u32; f.pairing.len()];
    for (c1, &c2) in f.pairing.iter().enumerate() {
        inv_pairing[c2 as usize] = c1 as u32;
    }
    let mut to_gamma = vec![u32::MAX; quotient.order()];
    for (i, x) in g.iter().enumerate() {
        let c = map.coset_of[i] as usize;
        let gbar = qbar.coset_of_element(g, &x);
        to_gamma[c] = if side == 1 {
            gbar
        } else {
            inv_pairing[gbar as usize]
        };
    }
    let mut sl2_image: Vec<u32> = sl2_part
        .iter()
        .map(|x| map.coset_of_element(g, &x))
        .collect();
    sl2_image.sort_unstable();
    sl2_image.dedup();
    Ok(TwistSide {
        quotient,
        map,
        group: g.clone(),
        to_gamma,
        sl2_image,
        sl2_part: sl2_part.clone(),
    })
}

/// `S′`: pairs in `Ḡ_SL₂(m̄₁) × Ḡ_SL₂(m̄₂)` whose images lie in `θ₁(B)` and
/// `θ₂(B)` and agree through θ.
fn glue(s1: &TwistSide, s2: &TwistSide, b1: &[u32], theta: &[u32], level: u32) -> Result<MatGroup> {
    let pick = |s: &TwistSide, c: u32| -> ResidueMatrix {
        s.sl2_part
            .iter()
            .find(|x| s.map.coset_of_element(&s.group, x) == c)
            .expect("coset in the SL₂ image")
    };
    let mut gens = Vec::new();
    for (i, &b) in b1.iter().enumerate() {
        let x1 = pick(s1, b);
        let x2 = pick(s2, theta[i]);
        gens.push(ResidueMatrix::crt_pair(&x1, &x2)?);
    }
    let id1 = ResidueMatrix::identity(s1.group.level());
    let id2 = ResidueMatrix::identity(s2.group.level());
    let e1 = s1.quotient.identity();
    let e2 = s2.quotient.identity();
    for x in s1.sl2_part.iter() {
        if s1.map.coset_of_element(&s1.group, &x) == e1 {
            gens.push(ResidueMatrix::crt_pair(&x, &id2)?);
        }
    }
    for x in s2.sl2_part.iter() {
        if s2.map.coset_of_element(&s2.group, &x) == e2 {
            gens.push(ResidueMatrix::crt_pair(&id1, &x)?);
        }
    }
    MatGroup::generated(level, &gens)
}

/// The four-step search for pre-twist groups at level `m̄` and split
/// `(m̄₁, m̄₂)`, returning stage counts and genus-zero survivors.
pub fn pretwist_search(level: u32, m1: u32, m2: u32, budget: u64) -> Result<PretwistReport> {
    check_permissible(level, m1, m2)?;
    pretwist_search_on(&genus0_exact_level(level, budget)?, level, m1, m2)
}

/// [`pretwist_search`] over a precomputed list of the genus-zero classes of
/// exact level `level`.
pub fn pretwist_search_on(
    groups: &[MatGroup],
    level: u32,
    m1: u32,
    m2: u32,
) -> Result<PretwistReport> {
    check_permissible(level, m1, m2)?;
    let decomposed: Vec<(MatGroup, FiberedProductData)> = groups
        .par_iter()
        .map(|g| Ok((g.clone(), decompose(g, m1, m2)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, f)| f.quotient.order() > 1 && f.quotient.is_abelian())
        .collect();
    let triples: Vec<(usize, MatGroup, MatGroup)> = decomposed
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (_, f))| {
            let k1 = twist_kernels(&f.g1, &f.n1);
            let k2 = twist_kernels(&f.g2, &f.n2);
            let mut out = Vec::new();
            for a in &k1 {
                for b in &k2 {
                    out.push((i, a.clone(), b.clone()));
                }
            }
            out
        })
        .collect();
    let results: Vec<(usize, Vec<PretwistCandidate>)> = triples
        .par_iter()
        .map(|(i, k1, k2)| {
            let (g, f) = &decomposed[*i];
            let sl = g.intersect_sl2();
            let s1 = twist_side(f, 1, k1, &sl.reduce(m1)?)?;
            let s2 = twist_side(f, 2, k2, &sl.reduce(m2)?)?;
            let p2 = sub_table(&s2.quotient, &s2.sl2_image)?;
            let mut glued = 0usize;
            let mut found = Vec::new();
            for b1 in s1.quotient.subgroups_within(&s1.sl2_image) {
                let bq = sub_table(&s1.quotient, &b1)?;
                let allowed = |gi: usize, y: u32| {
                    let b = b1[bq.generators()[gi] as usize];
                    s1.to_gamma[b as usize] == s2.to_gamma[s2.sl2_image[y as usize] as usize]
                };
                for theta in bq.homomorphisms(&p2, &allowed, true, None) {
                    let images: Vec<u32> =
                        theta.iter().map(|&y| s2.sl2_image[y as usize]).collect();
                    if b1
                        .iter()
                        .zip(&images)
                        .any(|(&b, &t)| s1.to_gamma[b as usize] != s2.to_gamma[t as usize])
                    {
                        continue;
                    }
                    let s = glue(&s1, &s2, &b1, &images, level)?;
                    glued += 1;
                    let genus = curve_invariants(&s).genus;
                    if genus == 0 {
                        found.push(PretwistCandidate {
                            base: g.label(),
                            m1,
                            m2,
                            n1_order: k1.order(),
                            n2_order: k2.order(),
                            b_order: b1.len(),
                            s_prime: GroupFile::catalog_entry(&s),
                            genus,
                        });
                    }
                }
            }
            Ok((glued, found))
        })
        .collect::<Result<_>>()?;
    let glued_groups = results.iter().map(|r| r.0).sum();
    let survivors = results.into_iter().flat_map(|r| r.1).collect();
    Ok(PretwistReport {
        level,
        m1,
        m2,
        genus0_groups: groups.len(),
        abelian_quotient_groups: decomposed.len(),
        kernel_triples: triples.len(),
        glued_groups,
        survivors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits() {
        assert_eq!(permissible_splits(6), vec![(2, 3)]);
        assert_eq!(permissible_splits(30), vec![(2, 15), (3, 10), (5, 6)]);
        assert!(permissible_splits(8).is_empty());
        assert!(matches!(
            pretwist_search(6, 1, 6, 1000),
            Err(Error::BadSplit { .. })
        ));
    }

    #[test]
    fn named_group_orders() {
        assert_eq!(g6().order(), 48);
        assert_eq!(serre_level6_group().order(), 36);
        assert_eq!(serre_level6_group().gl2_index(), 8);
        assert_eq!(normalizer_nonsplit(3).order(), 16);
        assert_eq!(borel(2).order(), 2);
    }

    #[test]
    fn ambient_has_no_entanglement() {
        assert!(detect_entanglement(&MatGroup::gl2(6)).unwrap().is_none());
        let r = detect_entanglement(&g6()).unwrap().unwrap();
        assert_eq!(r.quotient_at(2, 3), Some(&SmallGroup::D3));
    }

    #[test]
    fn g6d_rejects_bad_discriminants() {
        assert_eq!(construct_g6d(1), Err(Error::NotFundamental(1)));
        assert_eq!(construct_g6d(12 * 3), Err(Error::NotFundamental(36)));
    }
}
