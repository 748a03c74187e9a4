//! GL₂- and SL₂-levels, modular-curve invariants and genus, twist
//! independence, admissibility and commutator predicates.

use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{gl2_level_of, sl2_level_of, CodeSet, MatGroup};
use crate::modarith::ResidueMatrix;

/// Index, elliptic point counts, cusp count and genus of `X_G̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub d: u64,
    pub c2: u64,
    pub c3: u64,
    pub cinf: u64,
    pub genus: u64,
}

impl CurveInvariants {
    pub fn tuple(&self) -> (u64, u64, u64, u64) {
        (self.d, self.c2, self.c3, self.cinf)
    }
}

/// Smallest `d | m` such that `G` contains `ker(GL₂(ℤ/m) → GL₂(ℤ/d))`.
pub fn gl2_level(g: &MatGroup) -> u32 {
    gl2_level_of(g)
}

/// Smallest `d | m` such that `G` contains `ker(SL₂(ℤ/m) → SL₂(ℤ/d))`.
pub fn sl2_level(g: &MatGroup) -> u32 {
    sl2_level_of(g)
}

pub fn is_twist_independent(g: &MatGroup) -> bool {
    g.contains_minus_identity()
}

/// `±(G ∩ SL₂)` reduced to its SL₂-level.
fn reduced_sl2_part(g: &MatGroup) -> MatGroup {
    let gt = g.adjoin_minus_identity();
    let n = sl2_level_of(&gt);
    let s = gt.intersect_sl2();
    if n == s.level() {
        return s;
    }
    let mut codes: Vec<u64> = s.iter().map(|x| x.reduce_unchecked(n).code()).collect();
    codes.sort_unstable();
    codes.dedup();
    MatGroup::from_sorted_codes(n, codes)
}

/// Invariants of `X_G̃` from the coset action of SL₂(ℤ/N) on `±(G ∩ SL₂)`
/// with `N = sl2_level(G̃)`.
pub fn curve_invariants(g: &MatGroup) -> CurveInvariants {
    curve_invariants_of_sl2_part(&reduced_sl2_part(g))
}

fn curve_invariants_of_sl2_part(s: &MatGroup) -> CurveInvariants {
    let n = s.level();
    let sl = MatGroup::sl2(n);
    let total = sl.order();
    let mut label = vec![u32::MAX; total];
    let mut reps: Vec<ResidueMatrix> = Vec::new();
    let selems: Vec<ResidueMatrix> = s.iter().collect();
    for i in 0..total {
        if label[i] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        let g = sl.element(i);
        reps.push(g);
        for h in &selems {
            let j = sl.index_of(&h.mul_same(&g)).expect("S ⊆ SL₂");
            label[j] = c;
        }
    }
    let coset = |x: &ResidueMatrix| label[sl.index_of(x).expect("SL₂ element")];
    let sigma = ResidueMatrix::new(n, [0, 1, -1, 0]).unwrap();
    let rho = ResidueMatrix::new(n, [0, 1, -1, -1]).unwrap();
    let t = ResidueMatrix::new(n, [1, 1, 0, 1]).unwrap();
    let d = reps.len();
    let mut c2 = 0u64;
    let mut c3 = 0u64;
    let mut tmap = vec![0u32; d];
    for (c, g) in reps.iter().enumerate() {
        if coset(&g.mul_same(&sigma)) == c as u32 {
            c2 += 1;
        }
        if coset(&g.mul_same(&rho)) == c as u32 {
            c3 += 1;
        }
        tmap[c] = coset(&g.mul_same(&t));
    }
    let mut seen = vec![false; d];
    let mut cinf = 0u64;
    for start in 0..d {
        if seen[start] {
            continue;
        }
        cinf += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = tmap[x] as usize;
        }
    }
    let d = d as u64;
    let twelve_g = 12 + d as i64 - 3 * c2 as i64 - 4 * c3 as i64 - 6 * cinf as i64;
    assert!(
        twelve_g >= 0 && twelve_g % 12 == 0,
        "genus formula is not integral: d={d} c2={c2} c3={c3} cinf={cinf}"
    );
    CurveInvariants {
        d,
        c2,
        c3,
        cinf,
        genus: (twelve_g / 12) as u64,
    }
}

/// Genus of `X_G̃`.
pub fn genus(g: &MatGroup) -> u64 {
    curve_invariants(g).genus
}

/// Outcome of the two admissibility conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub det_surjective: bool,
    pub has_complex_conjugation: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.det_surjective && self.has_complex_conjugation
    }
}

/// Codes of the GL₂(ℤ/L)-conjugacy classes of `[[1,0],[0,−1]]` and
/// `[[1,1],[0,−1]]`, cached per level.
fn complex_conjugation_classes(level: u32) -> Arc<CodeSet> {
    static CACHE: OnceLock<Mutex<FxHashMap<u32, Arc<CodeSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&level) {
        return s.clone();
    }
    let gl = MatGroup::gl2(level);
    let gens: Vec<(ResidueMatrix, ResidueMatrix)> =
        gl.generators().iter().map(|g| (*g, g.inv())).collect();
    let mut set = CodeSet::for_level(level);
    for start in [[1, 0, 0, -1], [1, 1, 0, -1]] {
        let x = ResidueMatrix::new(level, start).unwrap();
        if !set.insert(x.code()) {
            continue;
        }
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for (g, gi) in &gens {
                let z = g.mul_same(&y).mul_same(gi);
                if set.insert(z.code()) {
                    stack.push(z);
                }
            }
        }
    }
    let set = Arc::new(set);
    cache.lock().unwrap().entry(level).or_insert(set).clone()
}

/// Determinant surjectivity, and an element of `G(L)`, `L = lcm(m, 2)`,
/// conjugate in GL₂(ℤ/L) to one of the two standard complex conjugations.
pub fn is_admissible(g: &MatGroup) -> Admissibility {
    let m = g.level();
    let det_surjective = g.det_image_order() as u64 == crate::modarith::euler_phi(m);
    let l = m.lcm(&2);
    let gl = g.preimage(l).expect("multiple of the level");
    let classes = complex_conjugation_classes(l);
    let minus_one = l - 1;
    let has_complex_conjugation = gl
        .iter()
        .any(|x| x.det() == minus_one && classes.contains(x.code()));
    Admissibility {
        det_surjective,
        has_complex_conjugation,
    }
}

fn lift_to(g: &MatGroup, l: u32) -> Result<MatGroup> {
    if !l.is_multiple_of(g.level()) {
        return Err(Error::LevelMismatch {
            left: g.level(),
            right: l,
        });
    }
    g.preimage(l)
}

/// Level at which commutator predicates are checked.
pub fn commutator_check_level(m: u32) -> u32 {
    m.lcm(&24)
}

/// `[G(L), G(L)] = G(L) ∩ SL₂(ℤ/L)` at `L = lcm(m, 24)`.
pub fn is_commutator_thick(g: &MatGroup) -> bool {
    let l = commutator_check_level(g.level());
    let gl = g.preimage(l).expect("multiple of the level");
    gl.derived_subgroup().order() == gl.intersect_sl2().order()
}

/// Index of `[G(L), G(L)]` in `G(L) ∩ SL₂(ℤ/L)`.
pub fn commutator_index(g: &MatGroup, l: u32) -> Result<usize> {
    let gl = lift_to(g, l)?;
    Ok(gl.intersect_sl2().order() / gl.derived_subgroup().order())
}

/// `[H(L), H(L)] = [G(L), G(L)]` for `H ⊆ G`, both lifted to `L`.
pub fn is_commutator_maximal(h: &MatGroup, g: &MatGroup, l: u32) -> Result<bool> {
    let hl = lift_to(h, l)?;
    let gl = lift_to(g, l)?;
    if !hl.is_subgroup_of(&gl) {
        return Err(Error::InvalidInput("H is not contained in G".into()));
    }
    Ok(hl.derived_subgroup() == gl.derived_subgroup())
}

/// JSON report for `groups invariants`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub gl2_level: u32,
    pub sl2_level: u32,
    pub d: u64,
    pub c2: u64,
    pub c3: u64,
    pub cinf: u64,
    pub genus: u64,
    pub twist_independent: bool,
    pub admissible: bool,
}

pub fn invariants_report(g: &MatGroup) -> InvariantsReport {
    let inv = curve_invariants(g);
    InvariantsReport {
        gl2_level: gl2_level(g),
        sl2_level: sl2_level(g),
        d: inv.d,
        c2: inv.c2,
        c3: inv.c3,
        cinf: inv.cinf,
        genus: inv.genus,
        twist_independent: is_twist_independent(g),
        admissible: is_admissible(g).admissible(),
    }
}
