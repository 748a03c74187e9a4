//! Subgroup classes of GL₂(ℤ/p^kℤ) up to conjugacy by generator
//! augmentation, and composite-level lattices assembled through fibered
//! products.

use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::goursat::{
    direct_product, enumerate_fibered, enumerate_product_subgroups, ProductFilter,
};
use crate::group::{find_conjugator, CodeSet, MatGroup};
use crate::invariants::{curve_invariants, gl2_level};
use crate::modarith::{prime_powers, ResidueMatrix};

/// Default bound on the ambient order for [`subgroup_classes`].
pub const DEFAULT_BUDGET: u64 = 25_000;

/// Conjugation data for a fixed ambient group.
pub struct ConjugacyContext {
    ambient: MatGroup,
    /// One element per coset of the center; conjugation by the center is trivial.
    conjugators: Vec<ResidueMatrix>,
    /// Conjugacy class id of each ambient element, by element index.
    class_of: Vec<u32>,
}

/// Conjugation invariants of a subgroup relative to an ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub order: usize,
    pub det_image: usize,
    pub sl2_order: usize,
    /// Sorted `(ambient class, count)` pairs.
    pub classes: Vec<(u32, u32)>,
}

impl ConjugacyContext {
    pub fn new(ambient: &MatGroup) -> Self {
        let center = ambient.center();
        let mut covered = CodeSet::for_level(ambient.level());
        let mut conjugators = Vec::new();
        for g in ambient.iter() {
            if covered.contains(g.code()) {
                continue;
            }
            conjugators.push(g);
            for z in center.iter() {
                covered.insert(g.mul_same(&z).code());
            }
        }
        let mut class_of = vec![0u32; ambient.order()];
        for (id, class) in ambient.conjugacy_classes().into_iter().enumerate() {
            for i in class {
                class_of[i] = id as u32;
            }
        }
        Self {
            ambient: ambient.clone(),
            conjugators,
            class_of,
        }
    }

    pub fn ambient(&self) -> &MatGroup {
        &self.ambient
    }

    pub fn key(&self, h: &MatGroup) -> ClassKey {
        let one = 1 % h.level();
        let mut hist: FxHashMap<u32, u32> = FxHashMap::default();
        let mut sl2 = 0;
        for x in h.iter() {
            if x.det() == one {
                sl2 += 1;
            }
            let i = self.ambient.index_of(&x).expect("subgroup of the ambient");
            *hist.entry(self.class_of[i]).or_insert(0) += 1;
        }
        let mut classes: Vec<(u32, u32)> = hist.into_iter().collect();
        classes.sort_unstable();
        ClassKey {
            order: h.order(),
            det_image: h.det_image_order(),
            sl2_order: sl2,
            classes,
        }
    }

    /// Some ambient `g` with `g H g⁻¹ = K`.
    pub fn conjugator(&self, h: &MatGroup, k: &MatGroup) -> Option<ResidueMatrix> {
        find_conjugator(h, k, &self.conjugators)
    }

    /// Candidate subgroups `⟨H, x⟩`, one `x` per orbit of the moves that
    /// preserve the conjugacy class of the result.
    fn extensions(&self, h: &MatGroup) -> Vec<MatGroup> {
        let level = h.level();
        let normalizer = h.normalizer_in(&self.ambient);
        let mut covered = CodeSet::for_level(level);
        for c in h.codes() {
            covered.insert(*c);
        }
        let norm_inv: Vec<(ResidueMatrix, ResidueMatrix)> = normalizer
            .generators()
            .iter()
            .map(|g| (*g, g.inv()))
            .collect();
        let mut out = Vec::new();
        for x in self.ambient.iter() {
            if covered.contains(x.code()) {
                continue;
            }
            covered.insert(x.code());
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                let mut push = |z: ResidueMatrix, stack: &mut Vec<ResidueMatrix>| {
                    if covered.insert(z.code()) {
                        stack.push(z);
                    }
                };
                for g in h.generators() {
                    push(y.mul_same(g), &mut stack);
                }
                for (g, gi) in &norm_inv {
                    push(g.mul_same(&y).mul_same(gi), &mut stack);
                }
                let ord = y.order();
                let mut p = y;
                for k in 2..ord {
                    p = p.mul_same(&y);
                    if num_integer::gcd(k, ord) == 1 {
                        push(p, &mut stack);
                    }
                }
            }
            out.push(h.extend(&x));
        }
        out
    }
}

/// One representative per conjugacy class of subgroups of `ambient`,
/// sorted by (order, label).
pub fn subgroup_classes(ambient: &MatGroup, budget: u64) -> Result<Vec<MatGroup>> {
    if ambient.order() as u64 > budget {
        return Err(Error::BudgetExceeded {
            order: ambient.order() as u64,
            budget,
        });
    }
    let ctx = ConjugacyContext::new(ambient);
    let trivial = MatGroup::trivial(ambient.level());
    let mut classes: Vec<MatGroup> = vec![trivial.clone()];
    let mut buckets: FxHashMap<ClassKey, Vec<usize>> = FxHashMap::default();
    buckets.entry(ctx.key(&trivial)).or_default().push(0);
    let mut frontier = vec![trivial];
    while !frontier.is_empty() {
        let candidates: Vec<Vec<(ClassKey, MatGroup)>> = frontier
            .par_iter()
            .map(|h| {
                let mut seen = rustc_hash::FxHashSet::default();
                ctx.extensions(h)
                    .into_iter()
                    .filter(|k| seen.insert(k.codes_arc()))
                    .map(|k| (ctx.key(&k), k))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (key, k) in candidates.into_iter().flatten() {
            let bucket = buckets.entry(key).or_default();
            if bucket
                .iter()
                .any(|&i| ctx.conjugator(&classes[i], &k).is_some())
            {
                continue;
            }
            bucket.push(classes.len());
            classes.push(k.clone());
            next.push(k);
        }
        frontier = next;
    }
    let mut labeled: Vec<(usize, String, MatGroup)> = classes
        .into_par_iter()
        .map(|g| (g.order(), g.label(), g))
        .collect();
    labeled.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    for (order, _, _) in &labeled {
        debug_assert_eq!(ambient.order() % order, 0);
    }
    Ok(labeled.into_iter().map(|t| t.2).collect())
}

/// Subgroup classes of GL₂(ℤ/qℤ), cached per (level, budget).
pub fn gl2_subgroup_classes(q: u32, budget: u64) -> Result<Arc<Vec<MatGroup>>> {
    type Cache = Mutex<FxHashMap<(u32, u64), Arc<Vec<MatGroup>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(q, budget)) {
        return Ok(v.clone());
    }
    let v = Arc::new(subgroup_classes(&MatGroup::gl2(q), budget)?);
    Ok(cache
        .lock()
        .unwrap()
        .entry((q, budget))
        .or_insert(v)
        .clone())
}

/// Complete class list of GL₂(ℤ/mℤ), assembled prime by prime in increasing
/// prime order.
pub fn subgroup_classes_composite(m: u32, budget: u64) -> Result<Vec<MatGroup>> {
    if m == 0 {
        return Err(Error::InvalidLevel(0));
    }
    if m == 1 {
        return Ok(vec![MatGroup::trivial(1)]);
    }
    let parts = prime_powers(m);
    let mut acc = gl2_subgroup_classes(parts[0], budget)?.as_ref().clone();
    for &q in &parts[1..] {
        let next = gl2_subgroup_classes(q, budget)?;
        acc = enumerate_product_subgroups(&acc, &next)?;
    }
    Ok(acc)
}

/// Subgroup classes of GL₂(ℤ/nℤ) whose modular curve has genus zero, cached
/// per (level, budget). Composite levels are built from the genus-zero
/// lattices of the factors, since projections of a genus-zero group have
/// genus zero.
pub fn genus0_subgroup_classes(n: u32, budget: u64) -> Result<Arc<Vec<MatGroup>>> {
    type Cache = Mutex<FxHashMap<(u32, u64), Arc<Vec<MatGroup>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, budget)) {
        return Ok(v.clone());
    }
    if n == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let parts = prime_powers(n);
    let v = if parts.len() <= 1 {
        let all = if n == 1 {
            vec![MatGroup::trivial(1)]
        } else {
            gl2_subgroup_classes(n, budget)?.as_ref().clone()
        };
        filter_genus0(&all)
    } else {
        let a = genus0_subgroup_classes(parts[0], budget)?;
        let b = genus0_subgroup_classes(n / parts[0], budget)?;
        let filter = ProductFilter {
            pair: Box::new(|x, y| curve_invariants(&direct_product(x, y)).genus == 0),
            ..ProductFilter::default()
        };
        let data = enumerate_fibered(&a, &b, &filter)?;
        let mut groups: Vec<(usize, String, MatGroup)> = data
            .par_iter()
            .map(|f| f.reconstruct())
            .filter(|g| curve_invariants(g).genus == 0)
            .map(|g| (g.order(), g.label(), g))
            .collect();
        groups.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        groups.into_iter().map(|t| t.2).collect()
    };
    let v = Arc::new(v);
    Ok(cache
        .lock()
        .unwrap()
        .entry((n, budget))
        .or_insert(v)
        .clone())
}

/// Genus-zero classes of GL₂-level exactly `m`.
pub fn genus0_exact_level(m: u32, budget: u64) -> Result<Vec<MatGroup>> {
    Ok(filter_exact_level(&genus0_subgroup_classes(m, budget)?, m))
}

/// Classes whose GL₂-level is exactly `m`.
pub fn filter_exact_level(classes: &[MatGroup], m: u32) -> Vec<MatGroup> {
    classes
        .par_iter()
        .filter(|g| g.level() == m && gl2_level(g) == m)
        .cloned()
        .collect()
}

/// Classes whose modular curve has genus zero.
pub fn filter_genus0(classes: &[MatGroup]) -> Vec<MatGroup> {
    classes
        .par_iter()
        .filter(|g| curve_invariants(g).genus == 0)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_mod_2_has_four_classes() {
        let classes = subgroup_classes(&MatGroup::gl2(2), DEFAULT_BUDGET).unwrap();
        let orders: Vec<usize> = classes.iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            subgroup_classes(&MatGroup::gl2(5), 100),
            Err(Error::BudgetExceeded {
                order: 480,
                budget: 100
            })
        );
    }

    #[test]
    fn level_one_is_trivial() {
        let c = subgroup_classes_composite(1, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].order(), 1);
    }
}

#[cfg(test)]
mod oracle_tests {
    use super::*;
    use crate::group::subgroup_conjugate;
    use rustc_hash::FxHashSet;

    /// Every subgroup by unpruned closure, then classes by pairwise scans.
    fn naive_classes(ambient: &MatGroup) -> Vec<MatGroup> {
        let mut all: FxHashSet<Arc<[u64]>> = FxHashSet::default();
        let trivial = MatGroup::trivial(ambient.level());
        all.insert(trivial.codes_arc());
        let mut frontier = vec![trivial];
        let mut subgroups = vec![];
        while let Some(h) = frontier.pop() {
            for x in ambient.iter() {
                if h.contains(&x) {
                    continue;
                }
                let k = h.extend(&x);
                if all.insert(k.codes_arc()) {
                    frontier.push(k);
                }
            }
            subgroups.push(h);
        }
        let mut reps: Vec<MatGroup> = vec![];
        for h in subgroups {
            if !reps
                .iter()
                .any(|r| r.order() == h.order() && subgroup_conjugate(r, &h).unwrap().is_some())
            {
                reps.push(h);
            }
        }
        reps
    }

    #[test]
    fn matches_naive_oracle() {
        for q in [2u32, 3, 4, 5] {
            let fast = subgroup_classes(&MatGroup::gl2(q), DEFAULT_BUDGET).unwrap();
            let slow = naive_classes(&MatGroup::gl2(q));
            assert_eq!(fast.len(), slow.len(), "q = {q}");
            for s in &slow {
                assert_eq!(
                    fast.iter()
                        .filter(|f| f.order() == s.order()
                            && subgroup_conjugate(f, s).unwrap().is_some())
                        .count(),
                    1
                );
            }
        }
    }

    #[test]
    fn composite_matches_naive_oracle() {
        let fast = subgroup_classes_composite(6, DEFAULT_BUDGET).unwrap();
        let slow = naive_classes(&MatGroup::gl2(6));
        assert_eq!(fast.len(), slow.len());
        for f in &fast {
            assert_eq!(f.level(), 6);
            assert!(slow
                .iter()
                .any(|s| s.order() == f.order() && subgroup_conjugate(f, s).unwrap().is_some()));
        }
    }
}
