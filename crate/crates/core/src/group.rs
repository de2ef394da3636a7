//! Finite permutation groups with enumerated elements.
//!
//! Elements are listed in lexicographic order of their image vectors and
//! addressed by index; the identity is always index 0. Subgroups, quotients
//! and products are themselves [`FiniteGroup`]s, linked to their parents by
//! index maps.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::{Perm, StabChain};

/// Default bound on group orders; overridden by `BT_MAX_ORDER`.
pub const DEFAULT_MAX_ORDER: u64 = 10_000;

/// Default bound for exhaustive subgroup listing.
pub const DEFAULT_SUBGROUP_BOUND: u64 = 200;

/// Largest order for which a full multiplication table is cached.
const TABLE_LIMIT: usize = 2048;

pub fn max_order() -> u64 {
    std::env::var("BT_MAX_ORDER").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub rep: usize,
    pub size: usize,
    pub order: u64,
    pub elements: Vec<usize>,
}

#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inverses: Vec<usize>,
    orders: Vec<u64>,
    gen_idx: Vec<usize>,
    table: OnceLock<Option<Vec<u32>>>,
    classes: OnceLock<(Vec<ConjClass>, Vec<usize>)>,
}

pub type Group = Arc<FiniteGroup>;

impl FiniteGroup {
    /// Build from generators; fails if the order exceeds [`max_order`].
    pub fn new(name: impl Into<String>, degree: usize, gens: Vec<Perm>) -> Result<FiniteGroup> {
        Self::with_bound(name, degree, gens, max_order())
    }

    pub fn with_bound(name: impl Into<String>, degree: usize, gens: Vec<Perm>, bound: u64) -> Result<FiniteGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::Structure(format!("generator {g} is not on {degree} points")));
            }
        }
        let chain = StabChain::new(degree, &gens);
        let order = chain.order();
        if order > bound as u128 {
            return Err(Error::Resource { what: "group order", value: order.min(u64::MAX as u128) as u64, bound });
        }
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let mut elements = vec![Perm::identity(degree)];
        let mut seen: HashSet<Perm> = elements.iter().cloned().collect();
        let mut k = 0;
        while k < elements.len() {
            for g in &gens {
                let h = elements[k].mul(g);
                if seen.insert(h.clone()) {
                    elements.push(h);
                }
            }
            k += 1;
        }
        debug_assert_eq!(elements.len() as u128, order, "stabilizer chain disagrees with enumeration");
        if elements.len() as u128 != order {
            return Err(Error::Internal("stabilizer chain order disagrees with enumeration".into()));
        }
        elements.sort();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverses = elements.iter().map(|p| index[&p.inv()]).collect();
        let orders = elements.iter().map(|p| p.order()).collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(FiniteGroup {
            name: name.into(),
            degree,
            gens,
            elements,
            index,
            inverses,
            orders,
            gen_idx,
            table: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> FiniteGroup {
        FiniteGroup::new("1", degree, vec![]).expect("trivial group")
    }

    /// Right regular representation of an abstract group given by its
    /// multiplication table `table[a][b] = a·b` with identity 0.
    pub fn from_multiplication(name: impl Into<String>, table: &[Vec<usize>], gens: &[usize]) -> Result<FiniteGroup> {
        let n = table.len();
        let perms = gens
            .iter()
            .map(|&g| Perm::from_images((0..n).map(|x| table[x][g] as u32).collect()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Structure("multiplication table is not a Latin square".into()))?;
        FiniteGroup::new(name, n, perms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }
    /// Indices of the generators.
    pub fn gen_indices(&self) -> &[usize] {
        &self.gen_idx
    }
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }
    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }
    pub fn identity(&self) -> usize {
        0
    }

    fn table(&self) -> Option<&Vec<u32>> {
        self.table
            .get_or_init(|| {
                let n = self.order();
                if n > TABLE_LIMIT {
                    return None;
                }
                let mut t = vec![0u32; n * n];
                for a in 0..n {
                    for b in 0..n {
                        t[a * n + b] = self.index[&self.elements[a].mul(&self.elements[b])] as u32;
                    }
                }
                Some(t)
            })
            .as_ref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].mul(&self.elements[b])],
        }
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
    /// `h⁻¹ a h`.
    #[inline]
    pub fn conj(&self, a: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), a), h)
    }
    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }
    pub fn elt_order(&self, a: usize) -> u64 {
        self.orders[a]
    }
    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        self.gen_idx.iter().all(|&a| self.gen_idx.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Element indices of the subgroup generated by `gens` (sorted).
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut list = vec![0];
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut k = 0;
        while k < list.len() {
            for &g in &gens {
                let h = self.mul(list[k], g);
                if !inside[h] {
                    inside[h] = true;
                    list.push(h);
                }
            }
            k += 1;
        }
        list.sort_unstable();
        list
    }

    /// Subgroup generated by the given elements, as a group on the same points.
    pub fn subgroup(&self, name: impl Into<String>, gens: &[usize]) -> FiniteGroup {
        let perms = gens.iter().map(|&g| self.elements[g].clone()).collect();
        FiniteGroup::with_bound(name, self.degree, perms, u64::MAX).expect("subgroup of an enumerated group")
    }

    /// Subgroup given by its element set; generators are picked greedily.
    pub fn subgroup_from_set(&self, name: impl Into<String>, set: &[usize]) -> FiniteGroup {
        let gens = self.generators_of_set(set);
        self.subgroup(name, &gens)
    }

    /// A small generating set for a subgroup given by its elements, preferring
    /// elements of large order.
    pub fn generators_of_set(&self, set: &[usize]) -> Vec<usize> {
        let mut cand: Vec<usize> = set.to_vec();
        cand.sort_by_key(|&x| (std::cmp::Reverse(self.orders[x]), x));
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = [0].into_iter().collect();
        for x in cand {
            if span.len() == set.len() {
                break;
            }
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// Indices in `self` of the elements of `sub`; error if `sub ⊄ self`.
    pub fn embed(&self, sub: &FiniteGroup) -> Result<Vec<usize>> {
        if sub.degree != self.degree {
            return Err(Error::Structure("groups act on different point sets".into()));
        }
        sub.elements
            .iter()
            .map(|p| self.index_of(p).ok_or_else(|| Error::Structure(format!("{} is not a subgroup of {}", sub.name, self.name))))
            .collect()
    }

    pub fn contains_group(&self, sub: &FiniteGroup) -> bool {
        sub.degree == self.degree && sub.gens.iter().all(|g| self.index.contains_key(g))
    }

    /// Whether `sub` (on the same points) is normal in `self`.
    pub fn is_normal(&self, sub: &FiniteGroup) -> bool {
        self.contains_group(sub)
            && self.gens.iter().all(|g| {
                let gi = g.inv();
                sub.gens.iter().all(|n| sub.index.contains_key(&gi.mul(n).mul(g)))
            })
    }

    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.class_data().0
    }

    /// Class index of each element.
    pub fn class_of(&self, a: usize) -> usize {
        self.class_data().1[a]
    }

    pub fn num_classes(&self) -> usize {
        self.conjugacy_classes().len()
    }

    fn class_data(&self) -> &(Vec<ConjClass>, Vec<usize>) {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut assigned = vec![false; n];
            let mut classes = Vec::new();
            for s in 0..n {
                if assigned[s] {
                    continue;
                }
                assigned[s] = true;
                let mut orbit = vec![s];
                let mut k = 0;
                while k < orbit.len() {
                    for &g in &self.gen_idx {
                        let y = self.conj(orbit[k], g);
                        if !assigned[y] {
                            assigned[y] = true;
                            orbit.push(y);
                        }
                    }
                    k += 1;
                }
                orbit.sort_unstable();
                classes.push(ConjClass { rep: orbit[0], size: orbit.len(), order: self.orders[s], elements: orbit });
            }
            classes.sort_by_key(|c| (c.order, c.size, c.rep));
            let mut class_of = vec![0; n];
            for (i, c) in classes.iter().enumerate() {
                for &x in &c.elements {
                    class_of[x] = i;
                }
            }
            (classes, class_of)
        })
    }

    /// Class indices whose elements have order coprime to `l`.
    pub fn ell_regular_classes(&self, l: u64) -> Vec<usize> {
        self.conjugacy_classes().iter().enumerate().filter(|(_, c)| c.order.gcd(&l) == 1).map(|(i, _)| i).collect()
    }

    /// Class of `a^k`, for the power map.
    pub fn power_class(&self, class: usize, k: i64) -> usize {
        self.class_of(self.pow(self.conjugacy_classes()[class].rep, k))
    }

    /// Elements commuting with every element of `s`.
    pub fn centralizer_set(&self, s: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&g| s.iter().all(|&x| self.mul(g, x) == self.mul(x, g))).collect()
    }

    pub fn centralizer(&self, s: &[usize]) -> FiniteGroup {
        let set = self.centralizer_set(s);
        self.subgroup_from_set(format!("C_{}(..)", self.name), &set)
    }

    pub fn center_set(&self) -> Vec<usize> {
        self.centralizer_set(&self.gen_idx.clone())
    }

    pub fn center(&self) -> FiniteGroup {
        let set = self.center_set();
        self.subgroup_from_set(format!("Z({})", self.name), &set)
    }

    /// Stabilizer of `point` under a right action given by `act(point, g)`.
    pub fn stabilizer_in_action<P, F>(&self, point: &P, act: F) -> Vec<usize>
    where
        P: Eq + Clone,
        F: Fn(&P, usize) -> P,
    {
        (0..self.order()).filter(|&g| act(point, g) == *point).collect()
    }

    /// Normalizer of a subgroup given as a sorted element set.
    pub fn normalizer_set(&self, set: &[usize]) -> Vec<usize> {
        let member: HashSet<usize> = set.iter().copied().collect();
        let gens = self.generators_of_set(set);
        (0..self.order()).filter(|&g| gens.iter().all(|&x| member.contains(&self.conj(x, g)))).collect()
    }

    /// Quotient by a normal subgroup, acting on right cosets; returns the
    /// quotient and the projection as an element-index map.
    pub fn quotient(&self, n: &FiniteGroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::Structure(format!("{} is not normal in {}", n.name, self.name)));
        }
        let t = CosetTransversal::new(self, n)?;
        let k = t.len();
        let act = |g: usize| -> Perm {
            Perm::from_images((0..k).map(|c| t.coset_of(self.mul(t.rep(c), g)) as u32).collect()).expect("coset action")
        };
        let gens: Vec<Perm> = self.gen_idx.iter().map(|&g| act(g)).collect();
        let q = FiniteGroup::with_bound(format!("{}/{}", self.name, n.name), k, gens, u64::MAX)?;
        let proj = (0..self.order()).map(|g| q.index[&act(g)]).collect();
        Ok((q, proj))
    }

    /// Quotient by a normal subgroup given as an element set.
    pub fn quotient_by_set(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let n = self.subgroup_from_set("N", set);
        self.quotient(&n)
    }

    /// Every subgroup as a sorted element set, ordered by (order, elements);
    /// refused when `|G|` exceeds `bound`.
    pub fn subgroups(&self, bound: u64) -> Result<Vec<Vec<usize>>> {
        let n = self.order();
        if n as u64 > bound {
            return Err(Error::Resource { what: "order for subgroup listing", value: n as u64, bound });
        }
        let words = n.div_ceil(64);
        let to_bits = |s: &[usize]| {
            let mut b = vec![0u64; words];
            for &x in s {
                b[x / 64] |= 1 << (x % 64);
            }
            b
        };
        let mut cyclic: Vec<(Vec<u64>, usize)> = Vec::new();
        let mut cyc_seen = HashSet::new();
        for g in 0..n {
            let s = self.closure(&[g]);
            let b = to_bits(&s);
            if cyc_seen.insert(b.clone()) {
                cyclic.push((b, g));
            }
        }
        let mut all: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        let mut queue: VecDeque<(Vec<u64>, Vec<usize>)> = VecDeque::new();
        for (b, g) in &cyclic {
            all.insert(b.clone(), vec![*g]);
            queue.push_back((b.clone(), vec![*g]));
        }
        while let Some((b, gens)) = queue.pop_front() {
            for (cb, g) in &cyclic {
                if cb.iter().zip(&b).all(|(x, y)| x & !y == 0) {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(*g);
                let s = self.closure(&ng);
                let nb = to_bits(&s);
                if !all.contains_key(&nb) {
                    all.insert(nb.clone(), ng.clone());
                    queue.push_back((nb, ng));
                }
            }
        }
        let mut out: Vec<Vec<usize>> =
            all.keys().map(|b| (0..n).filter(|&x| b[x / 64] >> (x % 64) & 1 == 1).collect()).collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(out)
    }

    /// Sorted multiset of (element order, class size) pairs, an isomorphism invariant.
    pub fn class_signature(&self) -> Vec<(u64, usize)> {
        let mut v: Vec<(u64, usize)> = self.conjugacy_classes().iter().map(|c| (c.order, c.size)).collect();
        v.sort_unstable();
        v
    }
}

/// A homomorphism stored as the full image table.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub domain: Group,
    pub codomain: Group,
    images: Vec<usize>,
}

impl GroupMap {
    /// Extend generator images to a homomorphism; structure error if the
    /// assignment does not respect the relations.
    pub fn from_generator_images(domain: &Group, codomain: &Group, imgs: &[usize]) -> Result<GroupMap> {
        if imgs.len() != domain.gen_idx.len() {
            return Err(Error::Structure("wrong number of generator images".into()));
        }
        let images = extend_hom(domain, codomain, &domain.gen_idx, imgs, domain.order())
            .ok_or_else(|| Error::Structure("generator images do not define a homomorphism".into()))?;
        Ok(GroupMap { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    /// From a full image table, verified exhaustively.
    pub fn from_images(domain: &Group, codomain: &Group, images: Vec<usize>) -> Result<GroupMap> {
        let m = GroupMap { domain: domain.clone(), codomain: codomain.clone(), images };
        if !m.is_homomorphism() {
            return Err(Error::Structure("map is not a homomorphism".into()));
        }
        Ok(m)
    }

    pub fn identity(g: &Group) -> GroupMap {
        GroupMap { domain: g.clone(), codomain: g.clone(), images: (0..g.order()).collect() }
    }

    /// Conjugation `x ↦ h⁻¹ x h` by an element of an overgroup normalizing `g`.
    pub fn conjugation(g: &Group, over: &FiniteGroup, h: usize) -> Result<GroupMap> {
        let hp = over.element(h);
        let hi = hp.inv();
        let images = g
            .elements
            .iter()
            .map(|x| g.index_of(&hi.mul(x).mul(hp)).ok_or_else(|| Error::Structure("element does not normalize".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupMap { domain: g.clone(), codomain: g.clone(), images })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_homomorphism(&self) -> bool {
        let d = &self.domain;
        let c = &self.codomain;
        (0..d.order()).all(|a| d.gen_idx.iter().all(|&b| self.images[d.mul(a, b)] == c.mul(self.images[a], self.images[b])))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        self.domain.order() == self.codomain.order()
            && self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_automorphism(&self) -> bool {
        Arc::ptr_eq(&self.domain, &self.codomain) && self.is_bijective()
    }

    /// `self` then `o`.
    pub fn then(&self, o: &GroupMap) -> GroupMap {
        GroupMap { domain: self.domain.clone(), codomain: o.codomain.clone(), images: self.images.iter().map(|&x| o.images[x]).collect() }
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Some(GroupMap { domain: self.codomain.clone(), codomain: self.domain.clone(), images: inv })
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.domain.order()).filter(|&x| self.images[x] == 0).collect()
    }

    pub fn image_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Extend `gens ↦ imgs` over the subgroup generated by `gens`; `None` on a
/// relation clash. The result has length `domain.order()` with `usize::MAX`
/// outside the generated subgroup.
fn extend_hom(domain: &FiniteGroup, codomain: &FiniteGroup, gens: &[usize], imgs: &[usize], expect: usize) -> Option<Vec<usize>> {
    let mut img = vec![usize::MAX; domain.order()];
    img[0] = 0;
    let mut list = vec![0];
    let mut k = 0;
    while k < list.len() {
        let x = list[k];
        for (&g, &gi) in gens.iter().zip(imgs) {
            let y = domain.mul(x, g);
            let yi = codomain.mul(img[x], gi);
            if img[y] == usize::MAX {
                img[y] = yi;
                list.push(y);
            } else if img[y] != yi {
                return None;
            }
        }
        k += 1;
    }
    // BFS consistency along generator edges covers all relations of the generated subgroup
    if list.len() != expect && expect == domain.order() {
        return None;
    }
    Some(img)
}

/// A generating list for `g` that is small and deterministic.
fn small_generators(g: &FiniteGroup) -> Vec<usize> {
    let all: Vec<usize> = (0..g.order()).collect();
    g.generators_of_set(&all)
}

/// All isomorphisms `g → h` (or just the first), by generator-image search.
fn isomorphism_search(g: &Group, h: &Group, first_only: bool) -> Vec<GroupMap> {
    if g.order() != h.order() || g.class_signature() != h.class_signature() {
        return Vec::new();
    }
    let gens = small_generators(g);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(g: &Group, h: &Group, gens: &[usize], chosen: &mut Vec<usize>, out: &mut Vec<GroupMap>, first_only: bool) {
        if first_only && !out.is_empty() {
            return;
        }
        let k = chosen.len();
        if k == gens.len() {
            if let Some(img) = extend_hom(g, h, gens, chosen, g.order()) {
                let m = GroupMap { domain: g.clone(), codomain: h.clone(), images: img };
                if m.is_bijective() {
                    out.push(m);
                }
            }
            return;
        }
        let target_order = g.elt_order(gens[k]);
        let target_class = g.conjugacy_classes()[g.class_of(gens[k])].size;
        for y in 0..h.order() {
            if h.elt_order(y) != target_order || h.conjugacy_classes()[h.class_of(y)].size != target_class {
                continue;
            }
            chosen.push(y);
            // partial consistency on the subgroup generated so far
            let sub_size = g.closure(&gens[..=k]).len();
            let ok = extend_hom(g, h, &gens[..=k], chosen, usize::MAX).is_some_and(|img| {
                let mut seen = HashSet::new();
                img.iter().filter(|&&v| v != usize::MAX).all(|&v| seen.insert(v)) && seen.len() == sub_size
            });
            if ok {
                rec(g, h, gens, chosen, out, first_only);
            }
            chosen.pop();
        }
    }
    rec(g, h, &gens, &mut chosen, &mut out, first_only);
    out
}

/// Largest order accepted by [`isomorphism`].
pub const ISOMORPHISM_BOUND: usize = 200;
/// Largest order accepted by [`automorphisms`].
pub const AUTOMORPHISM_BOUND: usize = 100;

/// An isomorphism `g → h`, if one exists; refused above [`ISOMORPHISM_BOUND`].
pub fn isomorphism(g: &Group, h: &Group) -> Result<Option<GroupMap>> {
    if g.order() > ISOMORPHISM_BOUND {
        return Err(Error::Resource { what: "order for isomorphism test", value: g.order() as u64, bound: ISOMORPHISM_BOUND as u64 });
    }
    Ok(isomorphism_search(g, h, true).pop())
}

pub fn are_isomorphic(g: &Group, h: &Group) -> Result<bool> {
    Ok(isomorphism(g, h)?.is_some())
}

/// All automorphisms of `g`, identity first.
pub fn automorphisms(g: &Group) -> Result<Vec<GroupMap>> {
    if g.order() > AUTOMORPHISM_BOUND {
        return Err(Error::Resource { what: "order for automorphism enumeration", value: g.order() as u64, bound: AUTOMORPHISM_BOUND as u64 });
    }
    let mut all = isomorphism_search(g, g, false);
    all.sort_by(|a, b| a.images.cmp(&b.images));
    Ok(all)
}

/// Right coset representatives of `N` in `G`, identity first.
#[derive(Clone, Debug)]
pub struct CosetTransversal {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    /// `n_part[g]` = element `n` of N (as a G-index) with `g = rep(coset) · n`.
    n_part: Vec<usize>,
}

impl CosetTransversal {
    /// Cosets `tN`; representative = least element index in the coset.
    pub fn new(g: &FiniteGroup, n: &FiniteGroup) -> Result<CosetTransversal> {
        let nset = g.embed(n)?;
        Ok(Self::from_set(g, &nset))
    }

    pub fn from_set(g: &FiniteGroup, nset: &[usize]) -> CosetTransversal {
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut n_part = vec![0; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &m in nset {
                let y = g.mul(x, m);
                coset_of[y] = c;
                n_part[y] = m;
            }
        }
        CosetTransversal { reps, coset_of, n_part }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }
    /// The `n` with `g = rep(coset_of(g)) · n`.
    pub fn n_part(&self, g: usize) -> usize {
        self.n_part[g]
    }
}

/// `G × H` on disjoint points, with index bookkeeping.
#[derive(Debug)]
pub struct DirectProduct {
    pub group: Group,
    pub left: Group,
    pub right: Group,
    pair_to: Vec<usize>,
    split: Vec<(usize, usize)>,
}

impl DirectProduct {
    pub fn new(left: &Group, right: &Group) -> Result<DirectProduct> {
        let (n, m) = (left.degree(), right.degree());
        let mut gens: Vec<Perm> = left.generators().iter().map(|g| g.shifted(0, n + m)).collect();
        gens.extend(right.generators().iter().map(|g| g.shifted(n, n + m)));
        let group = Arc::new(FiniteGroup::new(format!("{}x{}", left.name(), right.name()), n + m, gens)?);
        let mut pair_to = vec![0; left.order() * right.order()];
        let mut split = vec![(0, 0); group.order()];
        for (i, p) in group.elements().iter().enumerate() {
            let a = left.index_of(&p.restrict(0, n).expect("block")).expect("left factor");
            let b = right.index_of(&p.restrict(n, m).expect("block")).expect("right factor");
            pair_to[a * right.order() + b] = i;
            split[i] = (a, b);
        }
        Ok(DirectProduct { group, left: left.clone(), right: right.clone(), pair_to, split })
    }

    pub fn pair(&self, a: usize, b: usize) -> usize {
        self.pair_to[a * self.right.order() + b]
    }
    pub fn split(&self, x: usize) -> (usize, usize) {
        self.split[x]
    }
}

/// `K ⋊ H` for a right action of `H` on `K`, realized in its right regular
/// representation. Pairs `(k, h)` multiply as `(k₁,h₁)(k₂,h₂) = (k₁^{h₂}k₂, h₁h₂)`.
#[derive(Debug)]
pub struct SemidirectProduct {
    pub group: Group,
    pub k: Group,
    pub h: Group,
    pair_to: Vec<usize>,
    split: Vec<(usize, usize)>,
}

impl SemidirectProduct {
    /// `action[i]` is the automorphism of `K` induced by the `i`th generator
    /// of `H`.
    pub fn new(k: &Group, h: &Group, action: &[GroupMap]) -> Result<SemidirectProduct> {
        if action.len() != h.gen_indices().len() {
            return Err(Error::Structure("one automorphism per generator of H is required".into()));
        }
        for a in action {
            if !Arc::ptr_eq(&a.domain, k) || !a.is_automorphism() || !a.is_homomorphism() {
                return Err(Error::Structure("action is not by automorphisms of K".into()));
            }
        }
        // extend to all of H; right action means phi(x·g) = phi(x) then phi(g)
        let kn = k.order();
        let mut phi: Vec<Option<Vec<usize>>> = vec![None; h.order()];
        phi[0] = Some((0..kn).collect());
        let mut list = vec![0];
        let mut idx = 0;
        while idx < list.len() {
            let x = list[idx];
            for (gi, &g) in h.gen_indices().iter().enumerate() {
                let y = h.mul(x, g);
                let px = phi[x].as_ref().unwrap();
                let cand: Vec<usize> = px.iter().map(|&v| action[gi].apply(v)).collect();
                match &phi[y] {
                    None => {
                        phi[y] = Some(cand);
                        list.push(y);
                    }
                    Some(old) if *old != cand => {
                        return Err(Error::Structure("action is not a homomorphism H → Aut(K)".into()));
                    }
                    _ => {}
                }
            }
            idx += 1;
        }
        let phi: Vec<Vec<usize>> = phi.into_iter().map(Option::unwrap).collect();
        let hn = h.order();
        let mul = |(k1, h1): (usize, usize), (k2, h2): (usize, usize)| (k.mul(phi[h2][k1], k2), h.mul(h1, h2));
        let n = kn * hn;
        let code = |(a, b): (usize, usize)| (a * hn + b) as u32;
        let gen_pairs: Vec<(usize, usize)> = k
            .gen_indices()
            .iter()
            .map(|&g| (g, 0))
            .chain(h.gen_indices().iter().map(|&g| (0, g)))
            .collect();
        let gens: Vec<Perm> = gen_pairs
            .iter()
            .map(|&gp| {
                Perm::from_images((0..n).map(|p| code(mul((p / hn, p % hn), gp))).collect()).expect("regular action")
            })
            .collect();
        let group = Arc::new(FiniteGroup::new(format!("{}:{}", k.name(), h.name()), n, gens)?);
        let mut pair_to = vec![0; n];
        let mut split = vec![(0, 0); n];
        for (i, p) in group.elements().iter().enumerate() {
            // in the right regular representation, the element is the image of the identity point
            let c = p.apply(0) as usize;
            let pr = (c / hn, c % hn);
            pair_to[c] = i;
            split[i] = pr;
        }
        Ok(SemidirectProduct { group, k: k.clone(), h: h.clone(), pair_to, split })
    }

    pub fn pair(&self, k: usize, h: usize) -> usize {
        self.pair_to[k * self.h.order() + h]
    }
    pub fn split(&self, x: usize) -> (usize, usize) {
        self.split[x]
    }
    /// Image of `K` in the product, as sorted element indices.
    pub fn k_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.k.order()).map(|a| self.pair(a, 0)).collect();
        v.sort_unstable();
        v
    }
    pub fn h_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.h.order()).map(|b| self.pair(0, b)).collect();
        v.sort_unstable();
        v
    }
    pub fn k_subgroup(&self) -> FiniteGroup {
        self.group.subgroup_from_set(self.k.name().to_string(), &self.k_set())
    }
}

/// Multiset of element orders as sorted `(order, count)` pairs; an
/// isomorphism invariant that determines finite abelian groups.
pub fn order_statistics(g: &FiniteGroup) -> Vec<(u64, usize)> {
    let mut m: HashMap<u64, usize> = HashMap::new();
    for i in 0..g.order() {
        *m.entry(g.elt_order(i)).or_default() += 1;
    }
    let mut v: Vec<_> = m.into_iter().collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Arc::new(FiniteGroup::new("S3", 3, vec![Perm::from_cycles(3, &[&[0, 1, 2]]), Perm::from_cycles(3, &[&[0, 1]])]).unwrap())
    }

    fn cyclic(n: usize) -> Group {
        let im: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Arc::new(FiniteGroup::new(format!("C{n}"), n, vec![Perm::from_images(im).unwrap()]).unwrap())
    }

    #[test]
    fn classes_of_s3() {
        let g = s3();
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(g.ell_regular_classes(3).len(), 2);
        assert_eq!(g.center_set(), vec![0]);
        let triv = FiniteGroup::trivial(2);
        assert_eq!(triv.num_classes(), 1);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(cyclic(6).subgroups(200).unwrap().len(), 4);
        assert_eq!(s3().subgroups(200).unwrap().len(), 6);
        assert!(cyclic(6).subgroups(5).is_err());
    }

    #[test]
    fn quotient_and_semidirect() {
        let c6 = cyclic(6);
        let c3 = c6.subgroup("C3", &[c6.index_of(&c6.generators()[0].pow(2)).unwrap()]);
        let (q, proj) = c6.quotient(&c3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.len(), 6);
        // C3 ⋊ C2 by inversion is S3
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        let inv = GroupMap::from_images(&c3, &c3, (0..3).map(|x| c3.inv(x)).collect()).unwrap();
        let sd = SemidirectProduct::new(&c3, &c2, &[inv]).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(are_isomorphic(&sd.group, &s3()).unwrap());
        assert!(sd.group.is_normal(&sd.k_subgroup()));
        let (q, _) = sd.group.quotient(&sd.k_subgroup()).unwrap();
        assert!(are_isomorphic(&Arc::new(q), &c2).unwrap());
        // multiplication rule for pairs
        for x in 0..6 {
            for y in 0..6 {
                let (k1, h1) = sd.split(x);
                let (k2, h2) = sd.split(y);
                let k1h = if h2 == 0 { k1 } else { c3.inv(k1) };
                assert_eq!(sd.split(sd.group.mul(x, y)), (c3.mul(k1h, k2), c2.mul(h1, h2)));
            }
        }
    }

    #[test]
    fn bad_action_rejected() {
        let c3 = cyclic(3);
        let c4 = cyclic(4);
        let zero = GroupMap { domain: c3.clone(), codomain: c3.clone(), images: vec![0, 0, 0] };
        assert!(SemidirectProduct::new(&c3, &c4, &[zero]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&s3()).unwrap().len(), 6);
        assert_eq!(automorphisms(&cyclic(5)).unwrap().len(), 4);
        let c2 = cyclic(2);
        let v4 = Arc::new(DirectProduct::new(&c2, &c2).unwrap().group.as_ref().subgroup("V4", &[1, 2]));
        assert_eq!(v4.order(), 4);
        assert_eq!(automorphisms(&v4).unwrap().len(), 6);
    }

    #[test]
    fn transversal_identity_first() {
        let g = s3();
        let t = CosetTransversal::from_set(&g, &[0, g.index_of(&Perm::from_cycles(3, &[&[0, 1]])).unwrap()]);
        assert_eq!(t.len(), 3);
        assert_eq!(t.rep(0), 0);
        for x in 0..6 {
            assert_eq!(g.mul(t.rep(t.coset_of(x)), t.n_part(x)), x);
        }
    }
}
