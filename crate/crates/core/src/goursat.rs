//! Subgroups of direct products `G × H` as Goursat tuples, and explicit
//! semidirect decompositions `U ≅ G₂ ⋊ H₁`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{are_isomorphic, order_statistics, DirectProduct, FiniteGroup, Group, GroupMap, SemidirectProduct};

/// `(G₁, G₂, H₁, H₂, φ)` with `φ: G₁/G₂ → H₁/H₂`. Sets are sorted element
/// indices in the factors; `phi` maps each element of `G₁` to the least
/// element of the corresponding `H₂`-coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoursatTuple {
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    pub phi: BTreeMap<usize, usize>,
}

fn sorted_dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn least_in_coset(g: &FiniteGroup, x: usize, sub: &[usize]) -> usize {
    sub.iter().map(|&n| g.mul(x, n)).min().expect("nonempty subgroup")
}

/// Decompose `U ≤ G × H` (given as a sorted element set of the product).
pub fn goursat_decompose(dp: &DirectProduct, u: &[usize]) -> Result<GoursatTuple> {
    let uset: HashSet<usize> = u.iter().copied().collect();
    if !uset.contains(&0) || u.iter().any(|&x| x >= dp.group.order()) {
        return Err(Error::Structure("U is not a subset of the product containing the identity".into()));
    }
    for &x in u {
        for &y in u {
            if !uset.contains(&dp.group.mul(x, y)) {
                return Err(Error::Structure("U is not closed under multiplication".into()));
            }
        }
    }
    let g1 = sorted_dedup(u.iter().map(|&x| dp.split(x).0).collect());
    let h1 = sorted_dedup(u.iter().map(|&x| dp.split(x).1).collect());
    let g2 = sorted_dedup(u.iter().filter(|&&x| dp.split(x).1 == 0).map(|&x| dp.split(x).0).collect());
    let h2 = sorted_dedup(u.iter().filter(|&&x| dp.split(x).0 == 0).map(|&x| dp.split(x).1).collect());
    let mut phi = BTreeMap::new();
    for &x in u {
        let (a, b) = dp.split(x);
        let target = least_in_coset(&dp.right, b, &h2);
        if let Some(&old) = phi.get(&a) {
            if old != target {
                return Err(Error::Internal("induced section map is not well defined".into()));
            }
        }
        phi.insert(a, target);
    }
    let t = GoursatTuple { g1, g2, h1, h2, phi };
    verify_phi(dp, &t)?;
    Ok(t)
}

/// Check that `φ` is constant on `G₂`-cosets, multiplicative, and bijective
/// onto `H₁/H₂`.
fn verify_phi(dp: &DirectProduct, t: &GoursatTuple) -> Result<()> {
    let (g, h) = (&dp.left, &dp.right);
    for &x in &t.g1 {
        for &n in &t.g2 {
            if t.phi[&g.mul(x, n)] != t.phi[&x] {
                return Err(Error::Internal("φ not constant on G₂-cosets".into()));
            }
        }
        for &y in &t.g1 {
            let lhs = t.phi[&g.mul(x, y)];
            let rhs = least_in_coset(h, h.mul(t.phi[&x], t.phi[&y]), &t.h2);
            if lhs != rhs {
                return Err(Error::Internal("φ is not a homomorphism".into()));
            }
        }
    }
    let images: HashSet<usize> = t.phi.values().copied().collect();
    let h_cosets: HashSet<usize> = t.h1.iter().map(|&y| least_in_coset(h, y, &t.h2)).collect();
    let g_cosets: HashSet<usize> = t.g1.iter().map(|&x| least_in_coset(g, x, &t.g2)).collect();
    if images != h_cosets || g_cosets.len() != h_cosets.len() {
        return Err(Error::Internal("φ is not bijective".into()));
    }
    Ok(())
}

/// Rebuild `U = {(g, h) ∈ G₁ × H₁ : φ(gG₂) = hH₂}`.
pub fn reconstruct(dp: &DirectProduct, t: &GoursatTuple) -> Vec<usize> {
    let mut out = Vec::new();
    for &a in &t.g1 {
        for &b in &t.h1 {
            if least_in_coset(&dp.right, b, &t.h2) == t.phi[&a] {
                out.push(dp.pair(a, b));
            }
        }
    }
    sorted_dedup(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WitnessStatus {
    /// Section built from a complement `K` of `G₂` in `G₁`; the map
    /// `(n, h) ↦ s(h)·(n, 1)` was checked to be an isomorphism elementwise.
    SectionIsomorphism { complement_order: usize },
    /// No complement, but some `G₂ ⋊ H₁` (for an action of a cyclic `H₁`)
    /// is isomorphic to `U` by generator search.
    AbstractIsomorphism,
    /// No complement and no semidirect product of `G₂` by `H₁` is isomorphic to `U`.
    HypothesisFailure { reason: String },
}

/// Attempt the decomposition `U ≅ G₂ ⋊ H₁`; failures are reports, not errors.
pub fn semidirect_witness(dp: &DirectProduct, u: &[usize], t: &GoursatTuple) -> Result<WitnessStatus> {
    let g = &dp.left;
    let (g1, g2, h1) = (&t.g1, &t.g2, &t.h1);
    let target = g1.len() / g2.len();
    let g2set: HashSet<usize> = g2.iter().copied().collect();
    // complement search among subgroups of G₁
    let g1_group = g.subgroup_from_set("G1", g1);
    let g1_local = g1_group.subgroups(u64::MAX)?;
    let to_g = g.embed(&g1_group)?;
    for k_local in g1_local.iter().filter(|s| s.len() == target) {
        let k: Vec<usize> = sorted_dedup(k_local.iter().map(|&x| to_g[x]).collect());
        if k.iter().filter(|x| g2set.contains(x)).count() != 1 {
            continue;
        }
        if verify_section(dp, u, t, &k)? {
            return Ok(WitnessStatus::SectionIsomorphism { complement_order: k.len() });
        }
    }
    // fallback: some action of H₁ on G₂ giving a group isomorphic to U
    let g2g = Arc::new(g.subgroup_from_set("G2", g2));
    let h1g = Arc::new(dp.right.subgroup_from_set("H1", h1));
    let ug: Group = Arc::new(dp.group.subgroup_from_set("U", u));
    if h1g.gen_indices().len() <= 1 && ug.order() <= crate::group::ISOMORPHISM_BOUND && g2g.order() <= crate::group::AUTOMORPHISM_BOUND {
        let auts = crate::group::automorphisms(&g2g)?;
        let e = h1g.order() as u64;
        for a in &auts {
            let action: Vec<GroupMap> = if h1g.gen_indices().is_empty() {
                vec![]
            } else {
                let mut p = GroupMap::identity(&g2g);
                for _ in 0..e {
                    p = p.then(a);
                }
                if p.images() != GroupMap::identity(&g2g).images() {
                    continue;
                }
                vec![a.clone()]
            };
            let sd = SemidirectProduct::new(&g2g, &h1g, &action)?;
            if are_isomorphic(&sd.group, &ug)? {
                return Ok(WitnessStatus::AbstractIsomorphism);
            }
        }
    }
    Ok(WitnessStatus::HypothesisFailure {
        reason: format!(
            "G2 (order {}) has no complement in G1 (order {}) and no semidirect product G2 ⋊ H1 is isomorphic to U (order {})",
            g2.len(),
            g1.len(),
            u.len()
        ),
    })
}

/// Build the section `s(h) = (k, h)` from complement `K` and verify that
/// `(n, h) ↦ s(h)·(n, 1)` is an isomorphism `G₂ ⋊ H₁ → U`.
fn verify_section(dp: &DirectProduct, u: &[usize], t: &GoursatTuple, k: &[usize]) -> Result<bool> {
    let (g, h, pg) = (&dp.left, &dp.right, &dp.group);
    // φ restricted to K is a bijection onto H₁/H₂
    let mut sec: HashMap<usize, usize> = HashMap::new();
    for &y in &t.h1 {
        let coset = least_in_coset(h, y, &t.h2);
        let Some(&kk) = k.iter().find(|&&x| t.phi[&x] == coset) else { return Ok(false) };
        sec.insert(y, pg_pair(dp, kk, y));
    }
    let g2g = Arc::new(g.subgroup_from_set("G2", &t.g2));
    let h1g = Arc::new(h.subgroup_from_set("H1", &t.h1));
    let g2_emb = g.embed(&g2g)?;
    let h1_emb = h.embed(&h1g)?;
    // action of H₁'s generators on G₂ by conjugation through the section
    let mut action = Vec::new();
    for &hg in h1g.gen_indices() {
        let s = sec[&h1_emb[hg]];
        let images: Vec<usize> = (0..g2g.order())
            .map(|n| {
                let x = pg.conj(dp.pair(g2_emb[n], 0), s);
                let (a, b) = dp.split(x);
                debug_assert_eq!(b, 0);
                g2g.index_of(g.element(a)).expect("G₂ normal in U")
            })
            .collect();
        action.push(GroupMap::from_images(&g2g, &g2g, images)?);
    }
    let sd = SemidirectProduct::new(&g2g, &h1g, &action)?;
    let uset: HashSet<usize> = u.iter().copied().collect();
    let psi: Vec<usize> = (0..sd.group.order())
        .map(|x| {
            let (n, hh) = sd.split(x);
            pg.mul(sec[&h1_emb[hh]], dp.pair(g2_emb[n], 0))
        })
        .collect();
    if psi.iter().any(|y| !uset.contains(y)) || sorted_dedup(psi.clone()).len() != u.len() {
        return Ok(false);
    }
    let sdg = &sd.group;
    for x in 0..sdg.order() {
        for &y in sdg.gen_indices() {
            if psi[sdg.mul(x, y)] != pg.mul(psi[x], psi[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn pg_pair(dp: &DirectProduct, a: usize, b: usize) -> usize {
    dp.pair(a, b)
}

/// Human-readable structure name for small groups (by order statistics).
pub fn structure_name(g: &FiniteGroup) -> String {
    let stats = order_statistics(g);
    let count = |o: u64| stats.iter().find(|(k, _)| *k == o).map_or(0, |(_, c)| *c);
    let n = g.order();
    let abelian = g.is_abelian();
    let name = match n {
        1 => Some("1"),
        2 => Some("C2"),
        3 => Some("C3"),
        4 if count(4) > 0 => Some("C4"),
        4 => Some("V4"),
        6 if abelian => Some("C6"),
        6 => Some("S3"),
        8 if !abelian && count(2) == 5 => Some("D8"),
        8 if !abelian => Some("Q8"),
        8 if count(8) > 0 => Some("C8"),
        8 if count(4) > 0 => Some("C4xC2"),
        8 => Some("C2^3"),
        12 if !abelian && count(6) == 0 && count(4) == 0 && count(2) == 3 => Some("A4"),
        12 if !abelian && count(2) == 7 => Some("D12"),
        24 if count(4) == 6 && count(3) == 8 && count(2) == 9 => Some("S4"),
        _ => None,
    };
    match name {
        Some(s) => s.to_string(),
        None => {
            let parts: Vec<String> = stats.iter().map(|(o, c)| format!("{o}:{c}")).collect();
            format!("order{n}[{}]", parts.join(","))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRecord {
    pub subgroup_id: usize,
    pub order: usize,
    pub tuple_orders: [usize; 4],
    pub g1_type: String,
    pub g2_type: String,
    #[serde(flatten)]
    pub decomposition: WitnessStatus,
    pub witness_checked: bool,
    pub reconstruction_ok: bool,
    /// `Some(ok)` when `A₄ ≤ G₁`: whether `V₄ × 1 ⊴ U`.
    pub v4_normal: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub a: usize,
    pub subgroups: usize,
    pub failures: usize,
    pub counts: BTreeMap<String, usize>,
    pub records: Vec<SubgroupRecord>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Audit every subgroup of `S₄ × C_a`.
pub fn check_corollary_s4(a: usize) -> Result<CorollaryReport> {
    if !(1..=6).contains(&a) {
        return Err(Error::Resource { what: "cyclic factor order", value: a as u64, bound: 6 });
    }
    let s4 = crate::builtins::builtin("S4")?.group.clone();
    let ca: Group = Arc::new(crate::builtins::cyclic(a));
    audit_product(&s4, &ca, a)
}

/// Audit every subgroup of `G × H` (the Goursat half applies to any `H`).
pub fn audit_product(g: &Group, h: &Group, a: usize) -> Result<CorollaryReport> {
    let dp = DirectProduct::new(g, h)?;
    let subs = dp.group.subgroups(crate::group::DEFAULT_SUBGROUP_BOUND)?;
    let a4_sets: Vec<Vec<usize>> = g
        .subgroups(u64::MAX)?
        .into_iter()
        .filter(|s| s.len() == 12 && structure_name(&g.subgroup_from_set("x", s)) == "A4")
        .collect();
    let mut records = Vec::new();
    let mut counts = BTreeMap::new();
    let mut failures = 0;
    for (id, u) in subs.iter().enumerate() {
        let t = goursat_decompose(&dp, u)?;
        let reconstruction_ok = reconstruct(&dp, &t) == *u;
        let status = semidirect_witness(&dp, u, &t)?;
        let witness_checked = !matches!(status, WitnessStatus::HypothesisFailure { .. });
        let g1s: HashSet<usize> = t.g1.iter().copied().collect();
        let v4_normal = if a4_sets.iter().any(|s| s.iter().all(|x| g1s.contains(x))) {
            Some(v4_normal_in(&dp, u))
        } else {
            None
        };
        let g1_type = structure_name(&g.subgroup_from_set("G1", &t.g1));
        let g2_type = structure_name(&g.subgroup_from_set("G2", &t.g2));
        *counts.entry(format!("({g1_type}, {g2_type})")).or_insert(0) += 1;
        let ok = reconstruction_ok && witness_checked && v4_normal != Some(false) && u.len() == t.g2.len() * t.h1.len();
        if !ok {
            failures += 1;
        }
        records.push(SubgroupRecord {
            subgroup_id: id,
            order: u.len(),
            tuple_orders: [t.g1.len(), t.g2.len(), t.h1.len(), t.h2.len()],
            g1_type,
            g2_type,
            decomposition: status,
            witness_checked,
            reconstruction_ok,
            v4_normal,
        });
    }
    Ok(CorollaryReport { a, subgroups: subs.len(), failures, counts, records })
}

/// Whether the normal Klein four subgroup of `S₄` (times 1) is a normal
/// subgroup of `U`.
fn v4_normal_in(dp: &DirectProduct, u: &[usize]) -> bool {
    let g = &dp.left;
    let v4: Vec<usize> = (0..g.order())
        .filter(|&x| g.elt_order(x) <= 2 && g.element(x).cycles().iter().all(|c| c.len() == 2) && g.element(x).cycles().len() != 1)
        .collect();
    let uset: HashSet<usize> = u.iter().copied().collect();
    let v4u: Vec<usize> = v4.iter().map(|&x| dp.pair(x, 0)).collect();
    v4u.iter().all(|x| uset.contains(x)) && u.iter().all(|&y| v4u.iter().all(|&x| v4u.contains(&dp.group.conj(x, y))))
}
