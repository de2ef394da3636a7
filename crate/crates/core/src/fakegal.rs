//! The `(m)`-relation between modular character triples, fake Galois maps
//! on `IBr(N)` built from `bar` and `sigma`, and the stabilizer analysis for
//! automorphism actions on abelian groups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartab::{character_table, ClassFunction};
use crate::clifford::{automorphism_closure, extend_character, is_cyclic, linear_characters_of_quotient, make_triple, Triple};
use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use crate::group::{FiniteGroup, Group, GroupMap};
use crate::linalg::Mat;
use crate::modrep::{act_on_brauer, brauer_character, irr_brauer_in, BrauerTable, MatrixRep, ModularContext, SourceModule};
use crate::projrep::{associated_projective, FactorSet, ProjectiveRep};
use crate::snf::solve_mod;

/// Scope attached to every refutation.
pub const REFUTATION_SCOPE: &str =
    "relative to the parametrization: canonical associated projective representations rescaled by functions G/N -> F^x";

/// Brute force refuses instances with more scaling functions per side than this.
pub const BRUTE_FORCE_LIMIT: u64 = 2_000_000;

/// How "`m′` roots of unity" is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    /// `ξ` and the factor-set values have order coprime to `m`.
    #[default]
    Strict,
    /// Any root of unity in the field.
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    Solver,
    Shortcut,
}

/// `P(z) = ξ·I` and `P′(z) = ξ^m·I` for one `z ∈ C_G(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarPair {
    pub element: usize,
    pub xi: Fq,
    pub xi_m: Fq,
}

#[derive(Clone, Debug)]
pub struct MApproxWitness {
    pub m: u64,
    pub p: ProjectiveRep,
    pub p2: ProjectiveRep,
    /// One pair per coset of `N` meeting `C_G(N)`.
    pub scalars: Vec<ScalarPair>,
    /// Scalings applied to the canonical representations, per coset of `N`.
    pub c: Vec<Fq>,
    pub c2: Vec<Fq>,
    pub admissibility: Admissibility,
    pub source: WitnessSource,
}

impl MApproxWitness {
    pub fn xi_orders(&self) -> Vec<u64> {
        let f = self.p.field();
        self.scalars.iter().map(|s| f.order(s.xi).expect("unit") as u64).collect()
    }

    pub fn alpha_order(&self) -> Result<u64> {
        Ok(self.p.factor_set()?.order())
    }

    pub fn export(&self) -> Result<WitnessExport> {
        let f = self.p.field();
        let g = &self.p.group;
        let log = |x: Fq| f.log(x).ok_or_else(|| Error::Internal("zero scalar in witness".into()));
        Ok(WitnessExport {
            m: self.m,
            source: self.source.clone(),
            admissibility: self.admissibility,
            dim: self.p.dim(),
            transversal: self.p.transversal.reps().iter().map(|&t| g.element(t).images().to_vec()).collect(),
            c_logs: self.c.iter().map(|&x| log(x)).collect::<Result<_>>()?,
            c2_logs: self.c2.iter().map(|&x| log(x)).collect::<Result<_>>()?,
            scalars: self
                .scalars
                .iter()
                .map(|s| Ok(ScalarExport { element: g.element(s.element).images().to_vec(), xi_log: log(s.xi)?, xi_m_log: log(s.xi_m)? }))
                .collect::<Result<_>>()?,
            alpha: self.p.factor_set()?.export(),
            alpha2: self.p2.factor_set()?.export(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarExport {
    pub element: Vec<u32>,
    pub xi_log: u32,
    pub xi_m_log: u32,
}

/// Serializable summary of a witness; field elements are discrete logs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessExport {
    pub m: u64,
    pub source: WitnessSource,
    pub admissibility: Admissibility,
    pub dim: usize,
    pub transversal: Vec<Vec<u32>>,
    pub c_logs: Vec<u32>,
    pub c2_logs: Vec<u32>,
    pub scalars: Vec<ScalarExport>,
    pub alpha: crate::projrep::FactorSetExport,
    pub alpha2: crate::projrep::FactorSetExport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub reason: String,
    pub scope: String,
}

#[derive(Clone, Debug)]
pub enum ApproxOutcome {
    Witness(Box<MApproxWitness>),
    Refuted(Refutation),
}

impl ApproxOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, ApproxOutcome::Witness(_))
    }
}

fn same_setting(t: &Triple, t2: &Triple) -> Result<()> {
    let same = |a: &FiniteGroup, b: &FiniteGroup| a.order() == b.order() && a.generators() == b.generators();
    if !same(&t.group, &t2.group) || !same(&t.normal, &t2.normal) {
        return Err(Error::Precondition("the triples must share G and N".into()));
    }
    // a triple's group is the stabilizer of its character, so both are stable
    Ok(())
}

pub fn check_coprime(m: u64, n: usize) -> Result<()> {
    if m == 0 || m.gcd(&(n as u64)) != 1 {
        return Err(Error::Precondition(format!("(m, |N|) = 1 is required, but m = {m} and |N| = {n}")));
    }
    Ok(())
}

/// Largest divisor of `q − 1` coprime to `m`.
fn coprime_part(qm1: u64, m: u64) -> u64 {
    let mut b = qm1;
    loop {
        let g = b.gcd(&m);
        if g == 1 {
            return b;
        }
        b /= g;
    }
}

/// Elements of `C_G(N)` as indices of `G`.
fn centralizer_of_normal(t: &Triple) -> Result<Vec<usize>> {
    let n_in = t.group.embed(&t.normal)?;
    Ok(t.group.centralizer_set(&n_in))
}

fn scalar_of(f: &Field, m: &Mat) -> Option<Fq> {
    m.scalar_ratio(f, &Mat::identity(m.rows())).filter(|&s| s != 0)
}

/// The `m`-independent data of one triple used by the solver and the shortcut.
pub struct ThetaData {
    pub triple: Triple,
    p0: ProjectiveRep,
    a0: FactorSet,
    cent: Vec<usize>,
    /// `P₀(z)` as a scalar, for each `z` in `cent`.
    scal0: Vec<Fq>,
    /// Extensions `E·λ` over all linear `λ` of `G/N`, when `G/N` is cyclic.
    ext: Option<Vec<ExtCandidate>>,
}

struct ExtCandidate {
    p: ProjectiveRep,
    scalars: Vec<Fq>,
}

impl ThetaData {
    pub fn new(t: &Triple) -> Result<ThetaData> {
        let p0 = associated_projective(t)?;
        let a0 = p0.factor_set()?;
        let f = p0.field().clone();
        let cent = centralizer_of_normal(t)?;
        let scal0 = cent
            .iter()
            .map(|&z| scalar_of(&f, &p0.eval(z)).ok_or_else(|| Error::Internal("P(z) is not scalar on C_G(N)".into())))
            .collect::<Result<_>>()?;
        let g = &t.group;
        let ext = if is_cyclic(&g.quotient(&t.normal)?.0) {
            let e = extend_character(t)?.rep;
            let mut out = Vec::new();
            for l in linear_characters_of_quotient(g, &t.normal, t.ctx())? {
                let gens = e.generator_images().iter().zip(l.rep.generator_images()).map(|(a, b)| a.scale(&f, b.get(0, 0))).collect();
                let r = MatrixRep::new(g, &f, gens)?;
                let scalars = cent
                    .iter()
                    .map(|&z| scalar_of(&f, &r.image(z)).ok_or_else(|| Error::Internal("extension is not scalar on C_G(N)".into())))
                    .collect::<Result<_>>()?;
                out.push(ExtCandidate { p: ProjectiveRep::from_ordinary(&r, &t.normal, t.ctx())?, scalars });
            }
            Some(out)
        } else {
            None
        };
        Ok(ThetaData { triple: t.clone(), p0, a0, cent, scal0, ext })
    }
}

/// Decide `(G, N, θ)^(m) ≈ (G, N, θ′)` over all rescalings of the canonical
/// associated projective representations, by solving the constraints on the
/// discrete logs of the scaling functions modulo `q − 1`.
pub fn check_m_approx(t: &Triple, t2: &Triple, m: u64, adm: Admissibility) -> Result<ApproxOutcome> {
    same_setting(t, t2)?;
    check_coprime(m, t.normal.order())?;
    solve(&ThetaData::new(t)?, &ThetaData::new(t2)?, m, adm)
}

fn solve(d0: &ThetaData, d1: &ThetaData, m: u64, adm: Admissibility) -> Result<ApproxOutcome> {
    let (p0, p1) = (&d0.p0, &d1.p0);
    let (a0, a1) = (&d0.a0, &d1.a0);
    let (t, t2) = (&d0.triple, &d1.triple);
    let f = p0.field().clone();
    let qm1 = f.unit_order() as u64;
    let k = a0.cosets();
    let lg = |v: Fq| f.log(v).expect("unit") as i64;
    let mm = (m % qm1) as i64;
    let b_part = coprime_part(qm1, m) as i64;
    let nvar = 2 * (k - 1);
    let mut rows: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    let mut push = |coef: Vec<i64>, rhs: i64| {
        let q = qm1 as i64;
        rows.insert((coef.iter().map(|c| c.rem_euclid(q)).collect(), rhs.rem_euclid(q)));
    };
    // u_i = log c(t_i), v_i = log c′(t_i), with u_0 = v_0 = 0
    let delta = |coef: &mut [i64], off: usize, i: usize, j: usize, ij: usize, s: i64| {
        for (x, sign) in [(i, 1), (j, 1), (ij, -1)] {
            if x > 0 {
                coef[off + x - 1] += sign * s;
            }
        }
    };
    for i in 1..k {
        for j in 1..k {
            let ij = a0.coset_product(i, j);
            // m(a0 + δu) = a1 + δv
            let mut coef = vec![0; nvar];
            delta(&mut coef, 0, i, j, ij, mm);
            delta(&mut coef, k - 1, i, j, ij, -1);
            push(coef, lg(a1.get(i, j)) - mm * lg(a0.get(i, j)));
            if adm == Admissibility::Strict {
                // B(a0 + δu) = 0 makes every α value of order coprime to m
                let mut coef = vec![0; nvar];
                delta(&mut coef, 0, i, j, ij, b_part);
                push(coef, -b_part * lg(a0.get(i, j)));
            }
        }
    }
    let cent = &d0.cent;
    for (idx, &z) in cent.iter().enumerate() {
        let kz = p0.transversal.coset_of(z);
        let (s, s1) = (d0.scal0[idx], d1.scal0[idx]);
        // c′(z)s′ = (c(z)s)^m
        let mut coef = vec![0; nvar];
        if kz > 0 {
            coef[kz - 1] = mm;
            coef[k - 1 + kz - 1] = -1;
        }
        push(coef, lg(s1) - mm * lg(s));
        if adm == Admissibility::Strict {
            let mut coef = vec![0; nvar];
            if kz > 0 {
                coef[kz - 1] = b_part;
            }
            push(coef, -b_part * lg(s));
        }
    }
    let (a, b): (Vec<Vec<BigInt>>, Vec<BigInt>) =
        rows.into_iter().map(|(c, r)| (c.into_iter().map(BigInt::from).collect(), BigInt::from(r))).unzip();
    let Some(x) = solve_mod(&a, &b, &BigInt::from(qm1)) else {
        return Ok(ApproxOutcome::Refuted(Refutation {
            reason: format!("the scaling constraints modulo {qm1} are inconsistent"),
            scope: REFUTATION_SCOPE.into(),
        }));
    };
    let val = |i: usize| f.from_log(i64::try_from(&x[i]).expect("reduced mod q-1"));
    let c: Vec<Fq> = std::iter::once(1).chain((0..k - 1).map(val)).collect();
    let c2: Vec<Fq> = std::iter::once(1).chain((k - 1..nvar).map(val)).collect();
    let w = assemble_witness(p0.scaled(&c)?, p1.scaled(&c2)?, cent, m, adm, WitnessSource::Solver, c, c2)?;
    verify_witness(&w, t, t2)?;
    Ok(ApproxOutcome::Witness(Box::new(w)))
}

#[allow(clippy::too_many_arguments)]
fn assemble_witness(
    p: ProjectiveRep,
    p2: ProjectiveRep,
    cent: &[usize],
    m: u64,
    adm: Admissibility,
    source: WitnessSource,
    c: Vec<Fq>,
    c2: Vec<Fq>,
) -> Result<MApproxWitness> {
    let f = p.field().clone();
    let mut seen = BTreeSet::new();
    let mut scalars = Vec::new();
    for &z in cent {
        if !seen.insert(p.transversal.coset_of(z)) {
            continue;
        }
        let xi = scalar_of(&f, &p.eval(z)).ok_or_else(|| Error::Internal("P(z) is not scalar".into()))?;
        let xi_m = scalar_of(&f, &p2.eval(z)).ok_or_else(|| Error::Internal("P′(z) is not scalar".into()))?;
        scalars.push(ScalarPair { element: z, xi, xi_m });
    }
    Ok(MApproxWitness { m, p, p2, scalars, c, c2, admissibility: adm, source })
}

/// Re-check a witness from the matrices alone.
pub fn verify_witness(w: &MApproxWitness, t: &Triple, t2: &Triple) -> Result<()> {
    let fail = |msg: String| Err(Error::Consistency(format!("witness rejected: {msg}")));
    let g = &t.group;
    let f = w.p.field().clone();
    let m = w.m as i64;
    let qm1 = f.unit_order() as u64;
    let admissible = |v: Fq| w.admissibility == Admissibility::Lenient || (f.order(v).expect("unit") as u64).gcd(&w.m) == 1;
    for (p, tr) in [(&w.p, t), (&w.p2, t2)] {
        if p.group.order() != g.order() || p.group.generators() != g.generators() || p.normal.order() != t.normal.order() {
            return fail("representation lives on the wrong group".into());
        }
        // P_N affords θ
        let gens = tr.normal.gen_indices().iter().map(|&s| p.eval(g.index_of(tr.normal.element(s)).expect("N ≤ G"))).collect();
        let d = MatrixRep::new(&tr.normal, &f, gens)?;
        if brauer_character(&d, tr.ctx())? != *tr.theta() {
            return fail("restriction to N does not afford θ".into());
        }
    }
    let n_in = g.embed(&t.normal)?;
    let in_n: Vec<bool> = {
        let mut v = vec![false; g.order()];
        n_in.iter().for_each(|&x| v[x] = true);
        v
    };
    // pairs: all of G×G at desk scale, otherwise transversal pairs together with N on either side
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if g.order() <= crate::projrep::EXHAUSTIVE_ORDER {
        for x in 0..g.order() {
            for y in 0..g.order() {
                pairs.push((x, y));
            }
        }
    } else {
        let reps = w.p.transversal.reps();
        for &x in reps {
            for &y in reps {
                pairs.push((x, y));
            }
            for &n in t.normal.gen_indices() {
                let n = n_in[n];
                pairs.push((x, n));
                pairs.push((n, x));
            }
        }
    }
    let images = |p: &ProjectiveRep| -> Vec<Mat> { (0..g.order()).map(|x| p.eval(x)).collect() };
    let (im, im2) = (images(&w.p), images(&w.p2));
    for (x, y) in pairs {
        let xy = g.mul(x, y);
        let ratio = |im: &[Mat]| im[x].mul(&f, &im[y]).scalar_ratio(&f, &im[xy]).filter(|&s| s != 0);
        let (Some(a), Some(a2)) = (ratio(&im), ratio(&im2)) else {
            return fail(format!("P(g)P(g′) is not a multiple of P(gg′) at ({x}, {y})"));
        };
        if (in_n[x] || in_n[y]) && (a != 1 || a2 != 1) {
            return fail(format!("factor set is not trivial against N at ({x}, {y})"));
        }
        if f.pow(a, m) != a2 {
            return fail(format!("α(g,g′)^m ≠ α′(g,g′) at ({x}, {y})"));
        }
        if !admissible(a) {
            return fail(format!("α({x}, {y}) has order sharing a factor with m"));
        }
    }
    for z in centralizer_of_normal(t)? {
        let (Some(xi), Some(xi2)) = (scalar_of(&f, &w.p.eval(z)), scalar_of(&f, &w.p2.eval(z))) else {
            return fail(format!("P({z}) or P′({z}) is not scalar"));
        };
        if f.pow(xi, m) != xi2 {
            return fail(format!("scalars at {z} are not of the form (ξ, ξ^m)"));
        }
        if !admissible(xi) {
            return fail(format!("ξ at {z} has order sharing a factor with m"));
        }
    }
    debug_assert!(qm1 > 0);
    Ok(())
}

/// Exhaustive search over all pairs of scaling functions `G/N → F^×`,
/// indexed by the coboundary each scaling produces.
pub fn brute_force_m_approx(t: &Triple, t2: &Triple, m: u64, adm: Admissibility) -> Result<bool> {
    same_setting(t, t2)?;
    check_coprime(m, t.normal.order())?;
    let p0 = associated_projective(t)?;
    let p1 = associated_projective(t2)?;
    let f = p0.field().clone();
    let qm1 = f.unit_order() as u64;
    let a0 = p0.factor_set()?;
    let a1 = p1.factor_set()?;
    let k = a0.cosets();
    let count = qm1.checked_pow((k - 1) as u32).filter(|&c| c <= BRUTE_FORCE_LIMIT).ok_or(Error::Resource {
        what: "scaling functions for brute force",
        value: qm1.saturating_pow((k - 1) as u32),
        bound: BRUTE_FORCE_LIMIT,
    })?;
    let decode = |mut idx: u64| -> Vec<Fq> {
        let mut c = vec![1];
        for _ in 1..k {
            c.push(f.from_log((idx % qm1) as i64));
            idx /= qm1;
        }
        c
    };
    let pairs: Vec<(usize, usize)> = (1..k).flat_map(|i| (1..k).map(move |j| (i, j))).collect();
    // α′ on the nontrivial pairs for every c′
    let mut by_alpha: HashMap<Vec<Fq>, Vec<u64>> = HashMap::new();
    for idx in 0..count {
        let c = decode(idx);
        let key = pairs.iter().map(|&(i, j)| f.div(f.mul(f.mul(a1.get(i, j), c[i]), c[j]), c[a1.coset_product(i, j)])).collect();
        by_alpha.entry(key).or_default().push(idx);
    }
    let cent = centralizer_of_normal(t)?;
    let zs: Vec<(usize, Fq, Fq)> = cent
        .iter()
        .map(|&z| {
            let s = scalar_of(&f, &p0.eval(z)).expect("scalar on C_G(N)");
            let s1 = scalar_of(&f, &p1.eval(z)).expect("scalar on C_G(N)");
            (p0.transversal.coset_of(z), s, s1)
        })
        .collect();
    let ok_order = |v: Fq| adm == Admissibility::Lenient || (f.order(v).expect("unit") as u64).gcd(&m) == 1;
    for idx in 0..count {
        let c = decode(idx);
        let alpha: Vec<Fq> = pairs.iter().map(|&(i, j)| f.div(f.mul(f.mul(a0.get(i, j), c[i]), c[j]), c[a0.coset_product(i, j)])).collect();
        if !alpha.iter().all(|&v| ok_order(v)) {
            continue;
        }
        let target: Vec<Fq> = alpha.iter().map(|&v| f.pow(v, m as i64)).collect();
        let Some(cands) = by_alpha.get(&target) else { continue };
        for &j in cands {
            let c2 = decode(j);
            let good = zs.iter().all(|&(kz, s, s1)| {
                let xi = f.mul(c[kz], s);
                ok_order(xi) && f.mul(c2[kz], s1) == f.pow(xi, m as i64)
            });
            if good {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug)]
pub enum Shortcut {
    Witness(Box<MApproxWitness>),
    NotApplicable(String),
}

/// When `G/N` is cyclic, both characters extend; scan pairs of extensions
/// `E·λ`, `E′·λ′` for centralizer scalars of the form `(ξ, ξ^m)`.
pub fn cyclic_outer_shortcut(t: &Triple, t2: &Triple, m: u64, adm: Admissibility) -> Result<Shortcut> {
    same_setting(t, t2)?;
    check_coprime(m, t.normal.order())?;
    shortcut(&ThetaData::new(t)?, &ThetaData::new(t2)?, m, adm)
}

fn shortcut(d0: &ThetaData, d1: &ThetaData, m: u64, adm: Admissibility) -> Result<Shortcut> {
    let (Some(e0), Some(e1)) = (&d0.ext, &d1.ext) else {
        return Ok(Shortcut::NotApplicable("G/N is not cyclic".into()));
    };
    let f = d0.p0.field().clone();
    for a in e0 {
        if adm == Admissibility::Strict && a.scalars.iter().any(|&xi| (f.order(xi).expect("unit") as u64).gcd(&m) != 1) {
            continue;
        }
        for b in e1 {
            if a.scalars.iter().zip(&b.scalars).all(|(&xi, &xi2)| f.pow(xi, m as i64) == xi2) {
                let k = a.p.transversal.len();
                let w = assemble_witness(a.p.clone(), b.p.clone(), &d0.cent, m, adm, WitnessSource::Shortcut, vec![1; k], vec![1; k])?;
                verify_witness(&w, &d0.triple, &d1.triple)?;
                return Ok(Shortcut::Witness(Box::new(w)));
            }
        }
    }
    Ok(Shortcut::NotApplicable("no pair of extensions has matching centralizer scalars".into()))
}

/// Candidate maps `IBr(N) → IBr(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum CandidateRecipe {
    Identity,
    Bar,
    Sigma,
    BarSigma,
    /// `θ` when `m ≡ 1`, `θ̄` when `m ≡ −1 (mod r_θ)`; `r: None` selects `r_θ` per character.
    PiecewiseR { r: Option<u64> },
    /// `(1,1) ↦ θ`, `(−1,1) ↦ θ^σ`, `(1,−1) ↦ θ̄`, `(−1,−1) ↦ \overline{θ^σ}` on `(m mod k₁, m mod k₂)`.
    FourCase { k1: u64, k2: u64 },
    /// First verifying member of the closure of `{id, bar, sigma}` per orbit.
    Searched,
    /// An explicit permutation; used for negative controls.
    Explicit { map: Vec<usize> },
}

impl CandidateRecipe {
    pub fn tag(&self) -> &'static str {
        match self {
            CandidateRecipe::Identity => "identity",
            CandidateRecipe::Bar => "bar",
            CandidateRecipe::Sigma => "sigma",
            CandidateRecipe::BarSigma => "bar-sigma",
            CandidateRecipe::PiecewiseR { .. } => "piecewise-r",
            CandidateRecipe::FourCase { .. } => "four-case",
            CandidateRecipe::Searched => "searched",
            CandidateRecipe::Explicit { .. } => "explicit",
        }
    }

    /// Parse a CLI recipe name: `identity`, `bar`, `sigma`, `bar-sigma`,
    /// `auto` / `piecewise-r`, `piecewise-r:R`, `four-case:K1,K2`, `search`.
    pub fn parse(s: &str) -> Result<CandidateRecipe> {
        let num = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::Usage(format!("bad number {x:?} in recipe {s:?}")));
        Ok(match s {
            "identity" => CandidateRecipe::Identity,
            "bar" => CandidateRecipe::Bar,
            "sigma" => CandidateRecipe::Sigma,
            "bar-sigma" => CandidateRecipe::BarSigma,
            "auto" | "piecewise-r" => CandidateRecipe::PiecewiseR { r: None },
            "search" | "searched" => CandidateRecipe::Searched,
            _ if s.starts_with("piecewise-r:") => CandidateRecipe::PiecewiseR { r: Some(num(&s["piecewise-r:".len()..])?) },
            _ if s.starts_with("four-case:") => {
                let (a, b) = s["four-case:".len()..].split_once(',').ok_or_else(|| Error::Usage(format!("four-case needs K1,K2: {s:?}")))?;
                CandidateRecipe::FourCase { k1: num(a)?, k2: num(b)? }
            }
            _ => return Err(Error::Usage(format!("unknown recipe {s:?}"))),
        })
    }
}

fn index_of(table: &BrauerTable, chi: &crate::modrep::BrauerCharacter) -> Result<usize> {
    table.position(chi).ok_or_else(|| Error::Internal("image of an irreducible Brauer character is not in the table".into()))
}

pub fn bar_index(table: &BrauerTable, theta: usize) -> Result<usize> {
    index_of(table, &table.irr[theta].bar())
}

pub fn sigma_index(table: &BrauerTable, theta: usize) -> Result<usize> {
    index_of(table, &table.irr[theta].sigma_twist())
}

/// The integer `r_θ`: `exp(Z(N))` when `G_θ / N·C_G(N)` is cyclic, else the
/// order of the factor set of the canonical associated projective representation.
pub fn r_theta(over: &Group, table: &Arc<BrauerTable>, theta: usize) -> Result<u64> {
    let t = make_triple(over, table, theta)?;
    let g = &t.group;
    let mut nc = g.embed(&t.normal)?;
    nc.extend(centralizer_of_normal(&t)?);
    let nc = g.closure(&nc);
    let (q, _) = g.quotient_by_set(&nc)?;
    if is_cyclic(&q) {
        Ok(t.normal.center().exponent())
    } else {
        Ok(associated_projective(&t)?.factor_set()?.order())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecipeOutcome {
    Target(usize),
    Inapplicable(String),
}

fn residue_sign(m: u64, r: u64) -> Option<i8> {
    if r == 0 {
        None
    } else if m % r == 1 % r {
        Some(1)
    } else if (m + 1).is_multiple_of(r) {
        Some(-1)
    } else {
        None
    }
}

/// Image of `θ` under a non-search recipe.
pub fn apply_recipe(recipe: &CandidateRecipe, over: &Group, table: &Arc<BrauerTable>, theta: usize, m: u64) -> Result<RecipeOutcome> {
    let t = RecipeOutcome::Target;
    Ok(match recipe {
        CandidateRecipe::Identity => t(theta),
        CandidateRecipe::Bar => t(bar_index(table, theta)?),
        CandidateRecipe::Sigma => t(sigma_index(table, theta)?),
        CandidateRecipe::BarSigma => t(bar_index(table, sigma_index(table, theta)?)?),
        CandidateRecipe::PiecewiseR { r } => {
            let r = match r {
                Some(r) => *r,
                None => r_theta(over, table, theta)?,
            };
            match residue_sign(m, r) {
                Some(1) => t(theta),
                Some(_) => t(bar_index(table, theta)?),
                None => RecipeOutcome::Inapplicable(format!("m = {m} is not ±1 modulo r = {r}")),
            }
        }
        CandidateRecipe::FourCase { k1, k2 } => match (residue_sign(m, *k1), residue_sign(m, *k2)) {
            (Some(1), Some(1)) => t(theta),
            (Some(-1), Some(1)) => t(sigma_index(table, theta)?),
            (Some(1), Some(-1)) => t(bar_index(table, theta)?),
            (Some(-1), Some(-1)) => t(bar_index(table, sigma_index(table, theta)?)?),
            _ => RecipeOutcome::Inapplicable(format!("m = {m} is not ±1 modulo both {k1} and {k2}")),
        },
        CandidateRecipe::Explicit { map } => match map.get(theta) {
            Some(&x) if x < table.len() => t(x),
            _ => RecipeOutcome::Inapplicable(format!("explicit map has no valid image for {theta}")),
        },
        CandidateRecipe::Searched => return Err(Error::Usage("a searched recipe has no closed form".into())),
    })
}

/// Permutations of `IBr(N)` generated by `bar` and `sigma`, identity first.
pub fn bar_sigma_closure(table: &BrauerTable) -> Result<Vec<Vec<usize>>> {
    let n = table.len();
    let bar: Vec<usize> = (0..n).map(|i| bar_index(table, i)).collect::<Result<_>>()?;
    let sig: Vec<usize> = (0..n).map(|i| sigma_index(table, i)).collect::<Result<_>>()?;
    let id: Vec<usize> = (0..n).collect();
    let mut seen = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for gen in [&bar, &sig] {
            let q: Vec<usize> = p.iter().map(|&i| gen[i]).collect();
            if !seen.contains(&q) {
                seen.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(seen)
}

/// `θ^g` as an index, for every `θ` and every generator `g` of the overgroup.
fn action_table(over: &Group, table: &BrauerTable) -> Result<Vec<Vec<usize>>> {
    over.gen_indices()
        .iter()
        .map(|&g| (0..table.len()).map(|i| index_of(table, &act_on_brauer(&table.irr[i], over, g)?)).collect())
        .collect()
}

fn orbits(n: usize, action: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut i = 0;
        while i < orb.len() {
            for a in action {
                let y = a[orb[i]];
                if !seen[y] {
                    seen[y] = true;
                    orb.push(y);
                }
            }
            i += 1;
        }
        out.push(orb);
    }
    out
}

/// A violation of `f(θ^g) = f(θ)^g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceViolation {
    pub theta: usize,
    /// Index of the generator in the overgroup's generator list.
    pub generator: usize,
    pub expected: usize,
    pub found: usize,
}

fn equivariance_violations(map: &[usize], action: &[Vec<usize>]) -> Vec<EquivarianceViolation> {
    let mut out = Vec::new();
    for (gi, a) in action.iter().enumerate() {
        for theta in 0..map.len() {
            let (expected, found) = (a[map[theta]], map[a[theta]]);
            if expected != found {
                out.push(EquivarianceViolation { theta, generator: gi, expected, found });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    pub theta: usize,
    pub target: Option<usize>,
    /// `witness`, `shortcut`, `refuted` or `inapplicable`.
    pub status: String,
    pub xi_orders: Vec<u64>,
    pub alpha_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub group: String,
    pub normal: String,
    pub ell: u32,
    pub m: u64,
    pub recipe: String,
    pub orbits: Vec<OrbitVerdict>,
    pub equivariant: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<EquivarianceViolation>,
    pub success: bool,
}

#[derive(Clone, Debug)]
pub struct FakeGaloisOptions {
    pub admissibility: Admissibility,
    pub seed: u64,
    pub jobs: usize,
    /// Verify every `θ` rather than one per orbit.
    pub all_thetas: bool,
}

impl Default for FakeGaloisOptions {
    fn default() -> Self {
        FakeGaloisOptions { admissibility: Admissibility::Strict, seed: 0, jobs: 1, all_thetas: false }
    }
}

/// Result of [`verify_fake_galois`]: the verdict, the map (when one was
/// assembled) and the witnesses per verified character.
#[derive(Clone, Debug)]
pub struct FakeGaloisReport {
    pub verdict: Verdict,
    pub map: Option<Vec<usize>>,
    pub witnesses: Vec<(usize, MApproxWitness)>,
}

/// Cached data for repeated fake-Galois checks on one `N ⊴ G` at one `ℓ`.
pub struct FakeGaloisSession {
    pub over: Group,
    pub normal: Group,
    pub ell: u32,
    pub table: Arc<BrauerTable>,
    pub opts: FakeGaloisOptions,
    action: Vec<Vec<usize>>,
    orbits: Vec<Vec<usize>>,
    data: Mutex<HashMap<usize, Arc<ThetaData>>>,
    r: Mutex<HashMap<usize, u64>>,
}

impl FakeGaloisSession {
    pub fn new(over: &Group, normal: &Group, ell: u32, opts: &FakeGaloisOptions) -> Result<FakeGaloisSession> {
        if !over.is_normal(normal) {
            return Err(Error::Structure(format!("{} is not normal in {}", normal.name(), over.name())));
        }
        let ctx = ModularContext::for_group(over, ell, opts.seed)?;
        let table = irr_brauer_in(normal, &ctx, SourceModule::SylowCosets)?;
        let action = action_table(over, &table)?;
        let orbits = orbits(table.len(), &action);
        Ok(FakeGaloisSession {
            over: over.clone(),
            normal: normal.clone(),
            ell,
            table,
            opts: opts.clone(),
            action,
            orbits,
            data: Mutex::new(HashMap::new()),
            r: Mutex::new(HashMap::new()),
        })
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// `θ^g` for the `i`th generator `g` of the overgroup.
    pub fn act(&self, generator: usize, theta: usize) -> usize {
        self.action[generator][theta]
    }

    pub fn theta_data(&self, theta: usize) -> Result<Arc<ThetaData>> {
        if let Some(d) = self.data.lock().expect("cache poisoned").get(&theta) {
            return Ok(d.clone());
        }
        let d = Arc::new(ThetaData::new(&make_triple(&self.over, &self.table, theta)?)?);
        self.data.lock().expect("cache poisoned").insert(theta, d.clone());
        Ok(d)
    }

    pub fn r_theta(&self, theta: usize) -> Result<u64> {
        if let Some(&r) = self.r.lock().expect("cache poisoned").get(&theta) {
            return Ok(r);
        }
        let r = r_theta(&self.over, &self.table, theta)?;
        self.r.lock().expect("cache poisoned").insert(theta, r);
        Ok(r)
    }

    fn apply(&self, recipe: &CandidateRecipe, theta: usize, m: u64) -> Result<RecipeOutcome> {
        match recipe {
            CandidateRecipe::PiecewiseR { r: None } => {
                let r = self.r_theta(theta)?;
                apply_recipe(&CandidateRecipe::PiecewiseR { r: Some(r) }, &self.over, &self.table, theta, m)
            }
            _ => apply_recipe(recipe, &self.over, &self.table, theta, m),
        }
    }

    /// Relate `θ` to `target` on `G_θ`: shortcut first, then the solver.
    pub fn verify_pair(&self, theta: usize, target: usize, m: u64) -> Result<(OrbitVerdict, Option<MApproxWitness>)> {
        let adm = self.opts.admissibility;
        let d0 = self.theta_data(theta)?;
        let d1 = self.theta_data(target)?;
        let refuted = |detail: String| OrbitVerdict { theta, target: Some(target), status: "refuted".into(), xi_orders: vec![], alpha_order: None, detail: Some(detail) };
        if same_setting(&d0.triple, &d1.triple).is_err() {
            return Ok((refuted("target has a different stabilizer".into()), None));
        }
        let (status, outcome) = match shortcut(&d0, &d1, m, adm)? {
            Shortcut::Witness(w) => ("shortcut", ApproxOutcome::Witness(w)),
            Shortcut::NotApplicable(_) => ("witness", solve(&d0, &d1, m, adm)?),
        };
        Ok(match outcome {
            ApproxOutcome::Witness(w) => {
                verify_witness(&w, &d0.triple, &d1.triple)?;
                let v = OrbitVerdict {
                    theta,
                    target: Some(target),
                    status: status.into(),
                    xi_orders: w.xi_orders(),
                    alpha_order: Some(w.alpha_order()?),
                    detail: None,
                };
                (v, Some(*w))
            }
            ApproxOutcome::Refuted(r) => (refuted(format!("{} ({})", r.reason, r.scope)), None),
        })
    }

    /// Check for a fake `m`th Galois action produced by `recipe`.
    pub fn run(&self, m: u64, recipe: &CandidateRecipe) -> Result<FakeGaloisReport> {
        check_coprime(m, self.normal.order())?;
        let n = self.table.len();
        let action = &self.action;
        let mut verdict = Verdict {
            group: self.over.name().to_string(),
            normal: self.normal.name().to_string(),
            ell: self.ell,
            m,
            recipe: recipe.tag().to_string(),
            orbits: vec![],
            equivariant: false,
            violations: vec![],
            success: false,
        };
        let orbit_reps: Vec<usize> = self.orbits.iter().map(|o| o[0]).collect();
        if *recipe == CandidateRecipe::Searched {
            return self.search(m, verdict, &orbit_reps);
        }
        let mut map = Vec::with_capacity(n);
        for theta in 0..n {
            match self.apply(recipe, theta, m)? {
                RecipeOutcome::Target(x) => map.push(x),
                RecipeOutcome::Inapplicable(why) => {
                    verdict.orbits.push(OrbitVerdict { theta, target: None, status: "inapplicable".into(), xi_orders: vec![], alpha_order: None, detail: Some(why) });
                    return Ok(FakeGaloisReport { verdict, map: None, witnesses: vec![] });
                }
            }
        }
        let mut hit = vec![false; n];
        let bijective = map.iter().all(|&x| !std::mem::replace(&mut hit[x], true));
        verdict.violations = equivariance_violations(&map, action);
        verdict.equivariant = verdict.violations.is_empty();
        if !bijective || !verdict.equivariant {
            return Ok(FakeGaloisReport { verdict, map: Some(map), witnesses: vec![] });
        }
        let reps: Vec<usize> = if self.opts.all_thetas { (0..n).collect() } else { orbit_reps };
        let results: Vec<Result<(OrbitVerdict, Option<MApproxWitness>)>> =
            run_pool(self.opts.jobs, || reps.par_iter().map(|&theta| self.verify_pair(theta, map[theta], m)).collect())?;
        let mut witnesses = Vec::new();
        let mut all_ok = true;
        for r in results {
            let (v, w) = r?;
            match w {
                Some(w) => witnesses.push((v.theta, w)),
                None => all_ok = false,
            }
            verdict.orbits.push(v);
        }
        verdict.success = all_ok;
        Ok(FakeGaloisReport { verdict, map: Some(map), witnesses })
    }

    fn search(&self, m: u64, mut verdict: Verdict, orbit_reps: &[usize]) -> Result<FakeGaloisReport> {
        let n = self.table.len();
        let closure = bar_sigma_closure(&self.table)?;
        // verified targets per orbit representative, in closure order
        let per_orbit: Vec<Result<Vec<(OrbitVerdict, MApproxWitness)>>> = run_pool(self.opts.jobs, || {
            orbit_reps
                .par_iter()
                .map(|&theta| {
                    let mut targets: Vec<usize> = Vec::new();
                    for p in &closure {
                        if !targets.contains(&p[theta]) {
                            targets.push(p[theta]);
                        }
                    }
                    let mut ok = Vec::new();
                    for target in targets {
                        if let (v, Some(w)) = self.verify_pair(theta, target, m)? {
                            ok.push((v, w));
                        }
                    }
                    Ok(ok)
                })
                .collect()
        })?;
        let per_orbit: Vec<Vec<(OrbitVerdict, MApproxWitness)>> = per_orbit.into_iter().collect::<Result<_>>()?;
        // odometer over per-orbit choices until the extension is an equivariant bijection
        let mut choice = vec![0usize; per_orbit.len()];
        let found = loop {
            if per_orbit.iter().any(|o| o.is_empty()) {
                break None;
            }
            let picks: Vec<(usize, usize)> =
                orbit_reps.iter().zip(&choice).zip(&per_orbit).map(|((&r, &c), o)| (r, o[c].0.target.expect("target"))).collect();
            if let Some(map) = extend_equivariantly(n, &self.action, &picks) {
                break Some(map);
            }
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < per_orbit[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break None;
            }
        };
        let Some(map) = found else {
            for (&r, o) in orbit_reps.iter().zip(&per_orbit) {
                verdict.orbits.push(OrbitVerdict {
                    theta: r,
                    target: None,
                    status: "refuted".into(),
                    xi_orders: vec![],
                    alpha_order: None,
                    detail: Some(format!("{} verified candidate(s); no equivariant bijection from the bar/sigma closure", o.len())),
                });
            }
            return Ok(FakeGaloisReport { verdict, map: None, witnesses: vec![] });
        };
        verdict.equivariant = true;
        verdict.success = true;
        let mut witnesses = Vec::new();
        for (o, &c) in per_orbit.into_iter().zip(&choice) {
            let (v, w) = o.into_iter().nth(c).expect("chosen");
            witnesses.push((v.theta, w));
            verdict.orbits.push(v);
        }
        Ok(FakeGaloisReport { verdict, map: Some(map), witnesses })
    }
}

/// Extend per-orbit choices to a map by `f(θ^g) = f(θ)^g`; `None` if inconsistent.
fn extend_equivariantly(n: usize, action: &[Vec<usize>], choices: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; n];
    for &(rep, target) in choices {
        map[rep] = target;
        let mut queue = VecDeque::from([rep]);
        while let Some(x) = queue.pop_front() {
            for a in action {
                let (y, fy) = (a[x], a[map[x]]);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
    }
    let mut hit = vec![false; n];
    for &x in &map {
        if x == usize::MAX || std::mem::replace(&mut hit[x], true) {
            return None;
        }
    }
    Some(map)
}

fn run_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs <= 1 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

/// Check for a fake `m`th Galois action on `IBr(N)` with respect to `N ⊴ G`.
pub fn verify_fake_galois(over: &Group, normal: &Group, ell: u32, m: u64, recipe: &CandidateRecipe, opts: &FakeGaloisOptions) -> Result<FakeGaloisReport> {
    check_coprime(m, normal.order())?;
    FakeGaloisSession::new(over, normal, ell, opts)?.run(m, recipe)
}

/// Stabilizer of one linear character `ν` of an abelian group under an automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuStabilizer {
    pub nu: usize,
    pub trivial: bool,
    pub stabilizer_order: usize,
    pub cyclic: bool,
}

fn map_order(a: &GroupMap) -> usize {
    let mut x = a.clone();
    let mut k = 1;
    while x.images().iter().enumerate().any(|(i, &y)| i != y) {
        x = x.then(a);
        k += 1;
    }
    k
}

/// For every linear character `ν` of the abelian group acted on by `autos`,
/// the stabilizer of `ν` (with `ν^φ = ν∘φ⁻¹`) in the generated automorphism group.
pub fn orbit_stabilizer_cyclicity(autos: &[GroupMap]) -> Result<Vec<NuStabilizer>> {
    let z = autos.first().ok_or_else(|| Error::Usage("no automorphisms given".into()))?.domain.clone();
    if !z.is_abelian() {
        return Err(Error::Structure(format!("{} is not abelian", z.name())));
    }
    let all = automorphism_closure(autos)?;
    let table = character_table(&z)?;
    let act = |nu: &ClassFunction, phi: &GroupMap| -> ClassFunction {
        let inv = phi.inverse().expect("automorphism");
        // abelian: classes are singletons
        let mut vals = nu.values.clone();
        for x in 0..z.order() {
            vals[z.class_of(x)] = nu.at(inv.apply(x)).clone();
        }
        ClassFunction::new(&z, vals)
    };
    let mut out = Vec::new();
    for (i, nu) in table.irr.iter().enumerate() {
        let stab: Vec<&GroupMap> = all.iter().filter(|phi| act(nu, phi) == *nu).collect();
        let cyclic = stab.iter().any(|phi| map_order(phi) == stab.len());
        out.push(NuStabilizer { nu: i, trivial: *nu == ClassFunction::trivial(&z), stabilizer_order: stab.len(), cyclic });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::clifford::make_triple_for;

    #[test]
    fn coprime_part_strips_shared_primes() {
        assert_eq!(coprime_part(48, 5), 48);
        assert_eq!(coprime_part(48, 3), 16);
        assert_eq!(coprime_part(48, 6), 1);
    }

    #[test]
    fn identity_relation_and_brute_force() {
        let b = builtin("SL23").unwrap();
        let q8 = b.normal_group("Q8").unwrap();
        for theta in 0..5 {
            let t = make_triple_for(&b.group, &q8, 7, 0, theta).unwrap();
            if t.replaced {
                continue;
            }
            let out = check_m_approx(&t, &t, 1, Admissibility::Strict).unwrap();
            let ApproxOutcome::Witness(w) = out else { panic!("m = 1 must relate θ to itself") };
            assert!(w.scalars.iter().all(|s| s.xi == s.xi_m));
            for m in [1, 5, 7, 11, 13] {
                for adm in [Admissibility::Strict, Admissibility::Lenient] {
                    let solver = check_m_approx(&t, &t, m, adm).unwrap().is_witness();
                    assert_eq!(solver, brute_force_m_approx(&t, &t, m, adm).unwrap(), "θ={theta} m={m} {adm:?}");
                }
            }
        }
    }

    #[test]
    fn gcd_hypothesis_is_enforced() {
        let b = builtin("SL23").unwrap();
        let q8 = b.normal_group("Q8").unwrap();
        let t = make_triple_for(&b.group, &q8, 7, 0, 0).unwrap();
        assert!(matches!(check_m_approx(&t, &t, 2, Admissibility::Strict), Err(Error::Precondition(_))));
    }

    #[test]
    fn shortcut_on_q8_in_sl23() {
        let b = builtin("SL23").unwrap();
        let q8 = b.normal_group("Q8").unwrap();
        let t = make_triple_for(&b.group, &q8, 7, 0, 4).unwrap();
        assert_eq!(t.theta().degree(), 2);
        assert!(matches!(cyclic_outer_shortcut(&t, &t, 5, Admissibility::Strict).unwrap(), Shortcut::Witness(_)));
        let s4 = builtin("S4").unwrap();
        let v4 = s4.normal_group("V4").unwrap();
        let t = make_triple_for(&s4.group, &v4, 5, 0, 0).unwrap();
        assert!(matches!(cyclic_outer_shortcut(&t, &t, 1, Admissibility::Strict).unwrap(), Shortcut::NotApplicable(_)));
    }

    #[test]
    fn bar_and_sigma_algebra() {
        for (name, ell) in [("SL23", 7), ("A5", 2), ("SL25", 3), ("C7", 2)] {
            let g = builtin(name).unwrap().group.clone();
            let ctx = ModularContext::for_group(&g, ell, 0).unwrap();
            let table = irr_brauer_in(&g, &ctx, SourceModule::SylowCosets).unwrap();
            let n = table.len();
            let bar: Vec<usize> = (0..n).map(|i| bar_index(&table, i).unwrap()).collect();
            let sig: Vec<usize> = (0..n).map(|i| sigma_index(&table, i).unwrap()).collect();
            assert!((0..n).all(|i| bar[bar[i]] == i));
            assert!((0..n).all(|i| bar[sig[i]] == sig[bar[i]]));
            let d = ctx.field.degree();
            assert!((0..n).all(|i| (0..d).fold(i, |x, _| sig[x]) == i));
        }
    }

    #[test]
    fn stabilizers_of_actions() {
        for name in ["S3_on_C2xC2", "D8_on_C3xC3"] {
            let inst = builtin(name).unwrap().action.clone().unwrap();
            let rep = orbit_stabilizer_cyclicity(&inst.automorphisms).unwrap();
            assert!(rep.iter().filter(|r| !r.trivial).all(|r| r.cyclic), "{name}");
        }
        let z = builtin("V4").unwrap().group.clone();
        let rep = orbit_stabilizer_cyclicity(&[GroupMap::identity(&z)]).unwrap();
        assert!(rep.iter().all(|r| r.stabilizer_order == 1));
    }

    #[test]
    fn scrambled_recipe_names_the_violation() {
        let b = builtin("SL23_semi_C2").unwrap();
        let sl = b.normal_group("SL23").unwrap();
        let ctx = ModularContext::for_group(&b.group, 7, 0).unwrap();
        let table = irr_brauer_in(&sl, &ctx, SourceModule::SylowCosets).unwrap();
        let action = action_table(&b.group, &table).unwrap();
        // swap a moved pair with a fixed point
        let moved = (0..table.len()).find(|&i| action.iter().any(|a| a[i] != i)).unwrap();
        let fixed = (0..table.len()).find(|&i| action.iter().all(|a| a[i] == i)).unwrap();
        let mut map: Vec<usize> = (0..table.len()).collect();
        map.swap(moved, fixed);
        let rep = verify_fake_galois(&b.group, &sl, 7, 5, &CandidateRecipe::Explicit { map }, &FakeGaloisOptions::default()).unwrap();
        assert!(!rep.verdict.equivariant && !rep.verdict.success);
        assert!(!rep.verdict.violations.is_empty());
    }

    #[test]
    fn sl23_semi_c2_pipeline() {
        let b = builtin("SL23_semi_C2").unwrap();
        let sl = b.normal_group("SL23").unwrap();
        for m in [1, 5, 7, 11] {
            let rep = verify_fake_galois(&b.group, &sl, 7, m, &CandidateRecipe::PiecewiseR { r: None }, &FakeGaloisOptions::default()).unwrap();
            assert!(rep.verdict.success, "m = {m}: {:?}", rep.verdict);
            let s = verify_fake_galois(&b.group, &sl, 7, m, &CandidateRecipe::Searched, &FakeGaloisOptions::default()).unwrap();
            assert!(s.verdict.success);
        }
    }
}
