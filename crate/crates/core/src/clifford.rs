//! Modular character triples: stabilizers, extension of Brauer characters,
//! linear differences between characters over the same `θ`, and the
//! Clifford correspondence.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{solve_linear_congruence, Fq};
use crate::group::{CosetTransversal, FiniteGroup, Group, GroupMap};
use crate::linalg::{intertwiners, Mat};
use crate::modrep::{
    act_by_automorphism, act_on_brauer, brauer_character, induce_brauer, irr_brauer_in, lies_over, sylow_subgroup, BrauerCharacter,
    BrauerTable, MatrixRep, ModularContext, SourceModule,
};
use crate::projrep::associated_projective;

/// Elements of `over` fixing `θ` under `θ^g(x) = θ(g x g⁻¹)`.
pub fn stabilizer_of_character(over: &FiniteGroup, theta: &BrauerCharacter) -> Result<Vec<usize>> {
    for &g in over.gen_indices() {
        act_on_brauer(theta, over, g)?;
    }
    let mut out = Vec::new();
    for g in 0..over.order() {
        if act_on_brauer(theta, over, g)? == *theta {
            out.push(g);
        }
    }
    Ok(out)
}

/// Closure of a list of automorphisms of one group under composition.
pub fn automorphism_closure(autos: &[GroupMap]) -> Result<Vec<GroupMap>> {
    let Some(first) = autos.first() else { return Ok(Vec::new()) };
    let g = first.domain.clone();
    for a in autos {
        if !a.is_automorphism() || a.domain.order() != g.order() {
            return Err(Error::Structure("not an automorphism of the common group".into()));
        }
    }
    let id = GroupMap::identity(&g);
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.images().to_vec()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for a in autos {
            let y = x.then(a);
            if seen.insert(y.images().to_vec()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// The automorphisms in the group generated by `autos` that fix `θ`.
pub fn stabilizer_in_automorphisms(autos: &[GroupMap], theta: &BrauerCharacter) -> Result<Vec<GroupMap>> {
    let all = automorphism_closure(autos)?;
    let mut out = Vec::new();
    for a in all {
        if act_by_automorphism(theta, &a)? == *theta {
            out.push(a);
        }
    }
    Ok(out)
}

/// `(G, N, θ)` with `θ` a `G`-stable member of `IBr(N)`.
#[derive(Clone, Debug)]
pub struct Triple {
    /// The group the triple was requested for.
    pub overgroup: Group,
    /// `G_θ`; equal to `overgroup` unless `replaced`.
    pub group: Group,
    pub normal: Group,
    /// `IBr(N)`, computed in the overgroup's context.
    pub table: Arc<BrauerTable>,
    pub theta: usize,
    pub replaced: bool,
}

impl Triple {
    pub fn theta(&self) -> &BrauerCharacter {
        &self.table.irr[self.theta]
    }
    pub fn rep(&self) -> &MatrixRep {
        &self.table.reps[self.theta]
    }
    pub fn ctx(&self) -> &ModularContext {
        &self.table.ctx
    }
    pub fn descriptor(&self) -> TripleDescriptor {
        TripleDescriptor { group: self.group.name().to_string(), normal: self.normal.name().to_string(), theta: self.theta, ell: self.table.ctx.ell }
    }

    /// The same `N` and `G_θ` with another member of `IBr(N)` (which must be `G_θ`-stable).
    pub fn with_theta(&self, theta: usize) -> Result<Triple> {
        let t = make_triple(&self.group, &self.table, theta)?;
        if t.replaced {
            return Err(Error::Precondition("character is not stable under the triple's group".into()));
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TripleDescriptor {
    pub group: String,
    pub normal: String,
    pub theta: usize,
    pub ell: u32,
}

/// Form `(G_θ, N, θ)`, replacing `G` by the stabilizer when `θ` is not `G`-stable.
pub fn make_triple(g: &Group, table: &Arc<BrauerTable>, theta: usize) -> Result<Triple> {
    let n = &table.group;
    if !g.is_normal(n) {
        return Err(Error::Structure(format!("{} is not normal in {}", n.name(), g.name())));
    }
    let th = table.irr.get(theta).ok_or_else(|| Error::Usage(format!("no Brauer character {theta}")))?;
    let stab = stabilizer_of_character(g, th)?;
    let (group, replaced) = if stab.len() == g.order() {
        (g.clone(), false)
    } else {
        (Arc::new(g.subgroup_from_set(format!("{}_theta{}", g.name(), theta), &stab)), true)
    };
    Ok(Triple { overgroup: g.clone(), group, normal: n.clone(), table: table.clone(), theta, replaced })
}

/// Convenience: `IBr(N)` in `G`'s splitting field, then [`make_triple`].
pub fn make_triple_for(g: &Group, n: &Group, ell: u32, seed: u64, theta: usize) -> Result<Triple> {
    let ctx = ModularContext::for_group(g, ell, seed)?;
    let table = irr_brauer_in(n, &ctx, SourceModule::SylowCosets)?;
    make_triple(g, &table, theta)
}

/// A linear Brauer character together with the one-dimensional representation affording it.
#[derive(Clone, Debug)]
pub struct LinearCharacter {
    pub rep: MatrixRep,
    pub chi: BrauerCharacter,
}

impl LinearCharacter {
    pub fn value(&self, x: usize) -> Fq {
        self.rep.image(x).get(0, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.generator_images().iter().all(|m| m.get(0, 0) == 1)
    }
}

pub fn is_cyclic(g: &FiniteGroup) -> bool {
    (0..g.order()).any(|x| g.elt_order(x) as usize == g.order())
}

pub fn all_sylows_cyclic(g: &FiniteGroup) -> bool {
    let mut n = g.order() as u64;
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            let s = g.subgroup_from_set("P", &sylow_subgroup(g, p));
            if !is_cyclic(&s) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Linear Brauer characters of `G/N`, inflated to `G`.
pub fn linear_characters_of_quotient(g: &Group, n: &FiniteGroup, ctx: &ModularContext) -> Result<Vec<LinearCharacter>> {
    let (q, proj) = g.quotient(n)?;
    let q = Arc::new(q);
    let table = irr_brauer_in(&q, ctx, SourceModule::SylowCosets)?;
    let mut out = Vec::new();
    for rep in table.reps.iter().filter(|r| r.dim() == 1) {
        let gens = g.gen_indices().iter().map(|&s| rep.image(proj[s])).collect();
        let r = MatrixRep::new(g, &ctx.field, gens)?;
        let chi = brauer_character(&r, ctx)?;
        out.push(LinearCharacter { rep: r, chi });
    }
    Ok(out)
}

/// An extension of `θ` to `G_θ` with its affording representation.
#[derive(Clone, Debug)]
pub struct Extension {
    pub rep: MatrixRep,
    pub chi: BrauerCharacter,
    pub method: ExtensionMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionMethod {
    Trivial,
    CyclicIntertwiner,
    Coboundary,
}

/// Extend `θ` from `N` to the triple's group, matrix by matrix on `N`.
pub fn extend_character(t: &Triple) -> Result<Extension> {
    let ctx = t.ctx();
    let f = &ctx.field;
    let g = &t.group;
    let n = &t.normal;
    let d = t.rep();
    if g.order() == n.order() {
        let gens = g.gen_indices().iter().map(|&s| d.image(n.index_of(g.element(s)).expect("G = N"))).collect();
        let rep = MatrixRep::new(g, f, gens)?;
        let chi = brauer_character(&rep, ctx)?;
        return Ok(Extension { rep, chi, method: ExtensionMethod::Trivial });
    }
    let (q, proj) = g.quotient(n)?;
    let k = q.order();
    let rep = if is_cyclic(&q) {
        extend_cyclic(t, &proj, k)?
    } else {
        match extend_by_coboundary(t)? {
            Some(r) => r,
            None if all_sylows_cyclic(&q) => return Err(Error::Internal("no extension although every Sylow subgroup of G/N is cyclic".into())),
            None => return Err(Error::Precondition("θ does not extend: its factor set is not a coboundary".into())),
        }
    };
    for (s, &ns) in n.gen_indices().iter().enumerate() {
        let x = g.index_of(n.element(ns)).expect("N ≤ G");
        if rep.image(x) != d.generator_images()[s] {
            return Err(Error::Internal("extension does not restrict to the given representation".into()));
        }
    }
    let chi = brauer_character(&rep, ctx)?;
    let method = if is_cyclic(&q) { ExtensionMethod::CyclicIntertwiner } else { ExtensionMethod::Coboundary };
    Ok(Extension { rep, chi, method })
}

fn extend_cyclic(t: &Triple, proj: &[usize], k: usize) -> Result<MatrixRep> {
    let f = &t.ctx().field;
    let g = &t.group;
    let n = &t.normal;
    let d = t.rep();
    let tr = CosetTransversal::new(g, n)?;
    let (q, _) = g.quotient(n)?;
    let gen = (0..g.order()).find(|&x| q.elt_order(proj[x]) as usize == k).expect("cyclic quotient has a generator");
    let n_idx = |x: usize| n.index_of(g.element(x)).expect("element of N");
    let a: Vec<Mat> = d.generator_images().to_vec();
    let b: Vec<Mat> = n
        .gen_indices()
        .iter()
        .map(|&s| {
            let y = g.conj(g.index_of(n.element(s)).expect("N ≤ G"), gen);
            d.image(n_idx(y))
        })
        .collect();
    let sols = intertwiners(f, &a, &b);
    let tm = match sols.len() {
        0 => return Err(Error::Precondition("θ is not stable under the quotient generator".into())),
        1 => sols.into_iter().next().expect("one solution"),
        _ => return Err(Error::FieldExtension { field_size: f.size() as u64, reason: "θ is not absolutely irreducible".into() }),
    };
    // T^k = c·D(g^k); rescale by s with s^k = c⁻¹, least discrete log
    let c = tm.pow(f, k as u64).scalar_ratio(f, &d.image(n_idx(g.pow(gen, k as i64)))).ok_or_else(|| Error::Internal("T^k is not a multiple of D(g^k)".into()))?;
    let qm1 = f.unit_order() as u64;
    let lc = f.log(c).expect("nonzero") as u64;
    let ls = solve_linear_congruence(k as u64 % qm1, (qm1 - lc) % qm1, qm1)
        .ok_or_else(|| Error::FieldExtension { field_size: f.size() as u64, reason: format!("no {k}th root of the scaling constant") })?;
    let e = tm.scale(f, f.from_log(ls as i64));
    let powers: Vec<Mat> = (0..k).scan(Mat::identity(d.dim()), |acc, _| {
        let cur = acc.clone();
        *acc = acc.mul(f, &e);
        Some(cur)
    })
    .collect();
    let gpows: Vec<usize> = (0..k).map(|i| g.pow(gen, i as i64)).collect();
    let image = |x: usize| -> Mat {
        for (i, &p) in gpows.iter().enumerate() {
            if tr.coset_of(p) == tr.coset_of(x) {
                let rest = g.mul(g.inv(p), x);
                return powers[i].mul(f, &d.image(n_idx(rest)));
            }
        }
        unreachable!("g generates G/N")
    };
    let gens = g.gen_indices().iter().map(|&s| image(s)).collect();
    MatrixRep::new(g, f, gens)
}

/// Rescale the associated projective representation by a cochain making its
/// factor set trivial, if one exists.
fn extend_by_coboundary(t: &Triple) -> Result<Option<MatrixRep>> {
    let p = associated_projective(t)?;
    let alpha = p.factor_set()?;
    let Some(c) = alpha.trivializing_cochain() else { return Ok(None) };
    let p = p.scaled(&c.iter().map(|&x| p.field().inv(x)).collect::<Vec<_>>())?;
    let g = &t.group;
    let gens = g.gen_indices().iter().map(|&s| p.eval(s)).collect();
    Ok(Some(MatrixRep::new(g, p.field(), gens)?))
}

/// Which of the lemma's hypotheses the pair satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Hypothesis {
    AbelianQuotient,
    BothExtensions,
    Failed { reason: String },
}

#[derive(Clone, Debug)]
pub struct LinearDifference {
    pub hypothesis: Hypothesis,
    /// Every linear `λ` of `G/N` with `χ = λχ′`.
    pub lambdas: Vec<LinearCharacter>,
}

/// All linear `λ ∈ IBr(G/N)` with `χ = λ χ′`, where `χ, χ′` lie over `θ ∈ IBr(N)`.
pub fn linear_difference(chi: &BrauerCharacter, chi2: &BrauerCharacter, table: &BrauerTable, theta: usize) -> Result<LinearDifference> {
    let lins = linear_characters_of_quotient(&chi.group, &table.group, &table.ctx)?;
    linear_difference_in(chi, chi2, table, theta, &lins)
}

/// [`linear_difference`] with `lin(G/N)` precomputed by [`linear_characters_of_quotient`].
pub fn linear_difference_in(chi: &BrauerCharacter, chi2: &BrauerCharacter, table: &BrauerTable, theta: usize, lins: &[LinearCharacter]) -> Result<LinearDifference> {
    let g = &chi.group;
    let n = &table.group;
    let over = lies_over(chi, table, theta)? && lies_over(chi2, table, theta)?;
    let deg = table.irr[theta].degree();
    let hypothesis = if !over {
        Hypothesis::Failed { reason: "characters do not both lie over θ".into() }
    } else if g.quotient(n)?.0.is_abelian() {
        Hypothesis::AbelianQuotient
    } else if chi.degree() == deg && chi2.degree() == deg {
        Hypothesis::BothExtensions
    } else {
        Hypothesis::Failed { reason: "G/N is not abelian and the characters are not extensions".into() }
    };
    let lambdas: Vec<LinearCharacter> = lins.iter().filter(|l| l.chi.mul(chi2) == *chi).cloned().collect();
    if lambdas.is_empty() && !matches!(hypothesis, Hypothesis::Failed { .. }) {
        return Err(Error::Internal("no linear character relates two characters over θ".into()));
    }
    Ok(LinearDifference { hypothesis, lambdas })
}

/// The Clifford correspondent `ψ^G ∈ IBr(G | θ)` of `ψ ∈ IBr(G_θ | θ)`, as an index into `IBr(G)`.
pub fn clifford_correspondent(t: &Triple, psi: &BrauerCharacter, big: &BrauerTable) -> Result<usize> {
    if !lies_over(psi, &t.table, t.theta)? {
        return Err(Error::Precondition("ψ does not lie over θ".into()));
    }
    let ind = induce_brauer(psi, &t.overgroup)?;
    big.position(&ind).ok_or_else(|| Error::Internal("induced character is not irreducible".into()))
}

/// The member of `IBr(G_θ | θ)` inducing to `IBr(G)[chi]`, as an index into `IBr(G_θ)`.
pub fn clifford_inverse(t: &Triple, chi: usize, big: &BrauerTable, small: &BrauerTable) -> Result<usize> {
    if !lies_over(&big.irr[chi], &t.table, t.theta)? {
        return Err(Error::Precondition("χ does not lie over θ".into()));
    }
    for (i, psi) in small.irr.iter().enumerate() {
        if lies_over(psi, &t.table, t.theta)? && induce_brauer(psi, &t.overgroup)? == big.irr[chi] {
            return Ok(i);
        }
    }
    Err(Error::Internal("no Clifford correspondent".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::modrep::irr_brauer;

    #[test]
    fn stabilizers_and_triples() {
        let b = builtin("S3").unwrap();
        let a3 = b.normal_group("A3").unwrap();
        let t = make_triple_for(&b.group, &a3, 2, 0, 1).unwrap();
        assert!(t.replaced);
        assert_eq!(t.group.order(), 3);
        let triv = make_triple_for(&b.group, &a3, 2, 0, 0).unwrap();
        assert!(!triv.replaced);
        // degenerate N = G
        let s3 = &b.group;
        let whole = make_triple_for(s3, s3, 5, 0, 2).unwrap();
        assert!(!whole.replaced);
        assert_eq!(extend_character(&whole).unwrap().chi, *whole.theta());
    }

    #[test]
    fn clifford_correspondence_on_s3() {
        let b = builtin("S3").unwrap();
        let a3 = b.normal_group("A3").unwrap();
        let t = make_triple_for(&b.group, &a3, 2, 0, 1).unwrap();
        let big = irr_brauer_in(&b.group, t.ctx(), SourceModule::SylowCosets).unwrap();
        let small = irr_brauer_in(&t.group, t.ctx(), SourceModule::SylowCosets).unwrap();
        let psi = small.irr.iter().position(|p| lies_over(p, &t.table, t.theta).unwrap()).unwrap();
        let chi = clifford_correspondent(&t, &small.irr[psi], &big).unwrap();
        assert_eq!(big.irr[chi].degree(), 2);
        assert_eq!(clifford_inverse(&t, chi, &big, &small).unwrap(), psi);
    }

    #[test]
    fn extensions_over_cyclic_quotients() {
        let b = builtin("SL23_semi_C2").unwrap();
        let n = b.normal_group("SL23").unwrap();
        let table = irr_brauer_in(&n, &ModularContext::for_group(&b.group, 7, 0).unwrap(), SourceModule::SylowCosets).unwrap();
        for i in 0..table.len() {
            let t = make_triple(&b.group, &table, i).unwrap();
            let e = extend_character(&t).unwrap();
            assert_eq!(crate::modrep::restrict_brauer(&e.chi, &t.normal).unwrap(), *t.theta());
        }
        // the extensions of a stable θ over a C3 quotient differ by the three inflated linear characters
        let s = builtin("SL23").unwrap();
        let q8 = s.normal_group("Q8").unwrap();
        let t = make_triple_for(&s.group, &q8, 7, 0, 4).unwrap();
        assert_eq!(t.theta().degree(), 2);
        let big = irr_brauer_in(&s.group, t.ctx(), SourceModule::SylowCosets).unwrap();
        let exts: Vec<&BrauerCharacter> = big.irr.iter().filter(|c| c.degree() == 2).collect();
        assert_eq!(exts.len(), 3);
        for x in &exts {
            for y in &exts {
                let ld = linear_difference(x, y, &t.table, t.theta).unwrap();
                assert_eq!(ld.lambdas.len(), 1);
                assert_eq!(ld.hypothesis, Hypothesis::AbelianQuotient);
                assert_eq!(ld.lambdas[0].is_trivial(), x == y);
            }
        }
    }

    #[test]
    fn coboundary_extension_for_noncyclic_quotient() {
        // trivial θ of V4 in S4 extends over S3 = S4/V4 although S3 is not cyclic
        let b = builtin("S4").unwrap();
        let v4 = b.normal_group("V4").unwrap();
        let t = make_triple_for(&b.group, &v4, 5, 0, 0).unwrap();
        let e = extend_character(&t).unwrap();
        assert_eq!(e.method, ExtensionMethod::Coboundary);
        assert_eq!(e.chi.degree(), 1);
    }

    #[test]
    fn sign_is_the_difference_in_c2() {
        let c2 = builtin("C2").unwrap().group.clone();
        let one = Arc::new(c2.subgroup_from_set("1", &[0]));
        let t = irr_brauer(&c2, 3, 0).unwrap();
        let tn = irr_brauer_in(&one, &t.ctx, SourceModule::SylowCosets).unwrap();
        let ld = linear_difference(&t.irr[0], &t.irr[1], &tn, 0).unwrap();
        assert_eq!(ld.lambdas.len(), 1);
        assert_eq!(ld.lambdas[0].chi, t.irr[1]);
    }
}
