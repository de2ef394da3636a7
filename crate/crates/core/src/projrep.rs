//! Projective representations normalized on a normal subgroup, their factor
//! sets, and gluing a representation of `H₁` with a projective
//! representation of `H₂` into one of `H₁H₂`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{linear_difference, LinearCharacter, Triple};
use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use crate::group::{CosetTransversal, FiniteGroup, Group};
use crate::linalg::{intertwiners, Mat};
use crate::modrep::{act_on_brauer, brauer_character, irr_brauer_in, MatrixRep, ModularContext, SourceModule};
use crate::snf::solve_mod;

/// Pairs checked exhaustively up to this group order, sampled above it.
pub const EXHAUSTIVE_ORDER: usize = 200;
const SAMPLED_PAIRS: usize = 4000;

/// A factor set on `G/N × G/N`, indexed by coset numbers of a transversal.
#[derive(Clone, Debug)]
pub struct FactorSet {
    pub field: Arc<Field>,
    k: usize,
    /// `mult[i*k + j]` is the coset of `t_i t_j`.
    mult: Vec<usize>,
    values: Vec<Fq>,
}

impl PartialEq for FactorSet {
    fn eq(&self, o: &FactorSet) -> bool {
        self.field.size() == o.field.size() && self.k == o.k && self.mult == o.mult && self.values == o.values
    }
}

impl Eq for FactorSet {}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FactorSetExport {
    pub field_size: u32,
    /// Values are powers of this primitive element, given by its discrete log 1.
    pub root: String,
    pub order: u64,
    pub logs: Vec<Vec<u32>>,
}

impl FactorSet {
    pub fn trivial(field: &Arc<Field>, mult: Vec<usize>, k: usize) -> FactorSet {
        FactorSet { field: field.clone(), k, mult, values: vec![1; k * k] }
    }

    pub fn cosets(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.values[i * self.k + j]
    }

    pub fn coset_product(&self, i: usize, j: usize) -> usize {
        self.mult[i * self.k + j]
    }

    pub fn values(&self) -> &[Fq] {
        &self.values
    }

    fn with_values(&self, values: Vec<Fq>) -> FactorSet {
        FactorSet { field: self.field.clone(), k: self.k, mult: self.mult.clone(), values }
    }

    /// `α(a,b)α(ab,c) = α(b,c)α(a,bc)` on every triple of cosets.
    pub fn check_cocycle(&self) -> bool {
        let f = &self.field;
        let k = self.k;
        (0..k).all(|a| {
            (0..k).all(|b| {
                (0..k).all(|c| {
                    let ab = self.coset_product(a, b);
                    let bc = self.coset_product(b, c);
                    f.mul(self.get(a, b), self.get(ab, c)) == f.mul(self.get(b, c), self.get(a, bc))
                })
            })
        })
    }

    /// `α(g, n) = α(n, g) = 1`, which on cosets reads: row and column of the identity coset are 1.
    pub fn is_normalized(&self) -> bool {
        (0..self.k).all(|i| self.get(0, i) == 1 && self.get(i, 0) == 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    /// Least `r ≥ 1` with `α^r ≡ 1`.
    pub fn order(&self) -> u64 {
        let qm1 = self.field.unit_order() as u64;
        self.values.iter().fold(1u64, |acc, &v| {
            let l = self.field.log(v).expect("factor set values are units") as u64;
            acc.lcm(&(qm1 / l.gcd(&qm1)))
        })
    }

    pub fn pow(&self, e: i64) -> FactorSet {
        self.with_values(self.values.iter().map(|&v| self.field.pow(v, e)).collect())
    }

    pub fn mul(&self, o: &FactorSet) -> FactorSet {
        assert_eq!(self.mult, o.mult, "factor sets on different transversals");
        self.with_values(self.values.iter().zip(&o.values).map(|(&a, &b)| self.field.mul(a, b)).collect())
    }

    pub fn map(&self, g: impl Fn(Fq) -> Fq) -> FactorSet {
        self.with_values(self.values.iter().map(|&v| g(v)).collect())
    }

    /// `δc(i,j) = c_i c_j / c_{ij}`.
    pub fn coboundary(field: &Arc<Field>, mult: &[usize], c: &[Fq]) -> FactorSet {
        let k = c.len();
        let f = field;
        let values = (0..k * k).map(|p| f.div(f.mul(c[p / k], c[p % k]), c[mult[p]])).collect();
        FactorSet { field: field.clone(), k, mult: mult.to_vec(), values }
    }

    /// A cochain `c` with `c_0 = 1` and `δc = α`, if `α` is a coboundary.
    pub fn trivializing_cochain(&self) -> Option<Vec<Fq>> {
        let f = &self.field;
        let k = self.k;
        let qm1 = BigInt::from(f.unit_order());
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 1..k {
            for j in 1..k {
                // x_i + x_j - x_{ij} = log α(i,j), with x_0 = 0
                let mut row = vec![BigInt::from(0); k - 1];
                row[i - 1] += 1;
                row[j - 1] += 1;
                let ij = self.coset_product(i, j);
                if ij > 0 {
                    row[ij - 1] -= 1;
                }
                a.push(row);
                b.push(BigInt::from(f.log(self.get(i, j)).expect("unit")));
            }
        }
        if k <= 1 {
            return Some(vec![1; k]);
        }
        let x = solve_mod(&a, &b, &qm1)?;
        let c: Vec<Fq> = std::iter::once(1).chain(x.iter().map(|v| f.from_log(i64::try_from(v.mod_floor(&qm1)).expect("small")))).collect();
        debug_assert_eq!(FactorSet::coboundary(f, &self.mult, &c), *self);
        Some(c)
    }

    pub fn logs(&self) -> Vec<Vec<u32>> {
        (0..self.k).map(|i| (0..self.k).map(|j| self.field.log(self.get(i, j)).expect("unit")).collect()).collect()
    }

    pub fn export(&self) -> FactorSetExport {
        FactorSetExport {
            field_size: self.field.size(),
            root: "primitive element of the defining polynomial".into(),
            order: self.order(),
            logs: self.logs(),
        }
    }
}

/// `P` on `G` with `P(tn) = P(t)D(n)` for transversal representatives `t` of `G/N`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub group: Group,
    pub normal: Group,
    pub ctx: ModularContext,
    pub transversal: CosetTransversal,
    /// The representation of `N` that `P` restricts to.
    pub d: MatrixRep,
    mats: Vec<Mat>,
    to_normal: Vec<Option<usize>>,
}

fn normal_index(g: &FiniteGroup, n: &FiniteGroup) -> Vec<Option<usize>> {
    (0..g.order()).map(|x| n.index_of(g.element(x))).collect()
}

impl ProjectiveRep {
    /// Assemble from one matrix per transversal representative (in transversal order).
    pub fn from_parts(group: &Group, d: &MatrixRep, ctx: &ModularContext, mats: Vec<Mat>) -> Result<ProjectiveRep> {
        let normal = d.group.clone();
        if !group.is_normal(&normal) {
            return Err(Error::Structure(format!("{} is not normal in {}", normal.name(), group.name())));
        }
        let transversal = CosetTransversal::new(group, &normal)?;
        if mats.len() != transversal.len() || mats.iter().any(|m| m.rows() != d.dim() || m.cols() != d.dim()) {
            return Err(Error::MalformedProjective("wrong number or shape of matrices".into()));
        }
        if mats[0] != Mat::identity(d.dim()) {
            return Err(Error::MalformedProjective("identity coset must map to the identity".into()));
        }
        let to_normal = normal_index(group, &normal);
        Ok(ProjectiveRep { group: group.clone(), normal, ctx: ctx.clone(), transversal, d: d.clone(), mats, to_normal })
    }

    /// An ordinary representation viewed as projective over `normal`.
    pub fn from_ordinary(rep: &MatrixRep, normal: &Group, ctx: &ModularContext) -> Result<ProjectiveRep> {
        let d = rep.restrict(normal)?;
        let tr = CosetTransversal::new(&rep.group, normal)?;
        let mats = tr.reps().iter().map(|&t| rep.image(t)).collect();
        ProjectiveRep::from_parts(&rep.group, &d, ctx, mats)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.ctx.field
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    pub fn coset_matrices(&self) -> &[Mat] {
        &self.mats
    }

    /// `P(g)` for any `g ∈ G`.
    pub fn eval(&self, g: usize) -> Mat {
        let c = self.transversal.coset_of(g);
        let n = self.to_normal[self.transversal.n_part(g)].expect("n_part lies in N");
        self.mats[c].mul(self.field(), &self.d.image(n))
    }

    fn coset_mult(&self) -> Vec<usize> {
        let k = self.transversal.len();
        let g = &self.group;
        (0..k * k).map(|p| self.transversal.coset_of(g.mul(self.transversal.rep(p / k), self.transversal.rep(p % k)))).collect()
    }

    /// Extract `α` from `P(t_i)P(t_j) = α(t_i,t_j) P(t_i t_j)`.
    pub fn factor_set(&self) -> Result<FactorSet> {
        let f = self.field();
        let k = self.transversal.len();
        let mult = self.coset_mult();
        let mut values = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (self.transversal.rep(i), self.transversal.rep(j));
                let lhs = self.mats[i].mul(f, &self.mats[j]);
                let rhs = self.eval(self.group.mul(a, b));
                let s = lhs
                    .scalar_ratio(f, &rhs)
                    .filter(|&s| s != 0)
                    .ok_or_else(|| Error::MalformedProjective(format!("P(t{i})P(t{j}) is not a multiple of P(t{i}t{j})")))?;
                values.push(s);
            }
        }
        Ok(FactorSet { field: f.clone(), k, mult, values })
    }

    /// Check `P(g)P(g′) = α(g,g′)P(gg′)` on all pairs (sampled for large groups),
    /// the cocycle and normalization identities, and `P_N = D`.
    pub fn verify(&self) -> Result<FactorSet> {
        let alpha = self.factor_set()?;
        let f = self.field();
        let g = &self.group;
        let check = |x: usize, y: usize| -> Result<()> {
            let a = alpha.get(self.transversal.coset_of(x), self.transversal.coset_of(y));
            if self.eval(x).mul(f, &self.eval(y)) != self.eval(g.mul(x, y)).scale(f, a) {
                return Err(Error::MalformedProjective(format!("relation fails on the pair ({x}, {y})")));
            }
            Ok(())
        };
        if g.order() <= EXHAUSTIVE_ORDER {
            for x in 0..g.order() {
                for y in 0..g.order() {
                    check(x, y)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.ctx.seed ^ g.order() as u64);
            for _ in 0..SAMPLED_PAIRS {
                check(rng.gen_range(0..g.order()), rng.gen_range(0..g.order()))?;
            }
        }
        if !alpha.check_cocycle() || !alpha.is_normalized() {
            return Err(Error::MalformedProjective("factor set is not a normalized 2-cocycle".into()));
        }
        for x in 0..g.order() {
            if let Some(n) = self.to_normal[x] {
                if self.eval(x) != self.d.image(n) {
                    return Err(Error::MalformedProjective("restriction to N differs from D".into()));
                }
            }
        }
        Ok(alpha)
    }

    /// `P^x(g) = P(x g x⁻¹)` for `x` in an overgroup normalizing `G` and `N`.
    pub fn conjugate(&self, over: &FiniteGroup, x: usize) -> Result<ProjectiveRep> {
        let xp = over.element(x);
        let xi = xp.inv();
        let g = &self.group;
        let mut mats = Vec::with_capacity(self.mats.len());
        for &t in self.transversal.reps() {
            let y = g.index_of(&xp.mul(g.element(t)).mul(&xi)).ok_or_else(|| Error::Structure("element does not normalize G".into()))?;
            mats.push(self.eval(y));
        }
        let d = self.d.conjugate(over, x)?;
        ProjectiveRep::from_parts(g, &d, &self.ctx, mats)
    }

    /// `P̄(g) = (P(g)ᵀ)⁻¹`; its factor set is `α⁻¹`.
    pub fn bar(&self) -> ProjectiveRep {
        let f = self.field();
        let mats = self.mats.iter().map(|m| m.inverse(f).expect("invertible").transpose()).collect();
        ProjectiveRep { mats, d: self.d.dual(), ..self.clone() }
    }

    /// Entrywise `x ↦ x^ℓ`; its factor set is `α^ℓ`.
    pub fn sigma(&self) -> ProjectiveRep {
        let f = self.field().clone();
        let mats = self.mats.iter().map(|m| m.map(|v| f.frobenius(v))).collect();
        ProjectiveRep { mats, d: self.d.frobenius_twist(), ..self.clone() }
    }

    /// `c(t)P(t)` for a function `c` on cosets with `c(N) = 1`; the factor set changes by `δc`.
    pub fn scaled(&self, c: &[Fq]) -> Result<ProjectiveRep> {
        if c.len() != self.mats.len() || c[0] != 1 || c.contains(&0) {
            return Err(Error::Structure("scaling must be a nonzero function on G/N, trivial on N".into()));
        }
        let f = self.field();
        let mats = self.mats.iter().zip(c).map(|(m, &s)| m.scale(f, s)).collect();
        Ok(ProjectiveRep { mats, ..self.clone() })
    }

    /// Ordinary representation of `G`, if the factor set is trivial.
    pub fn to_ordinary(&self) -> Result<MatrixRep> {
        if !self.factor_set()?.is_trivial() {
            return Err(Error::Precondition("factor set is not trivial".into()));
        }
        let gens = self.group.gen_indices().iter().map(|&s| self.eval(s)).collect();
        MatrixRep::new(&self.group, self.field(), gens)
    }
}

/// The projective representation of the triple's group associated to `θ`,
/// with each `P(t)` scaled so its first nonzero entry is 1.
pub fn associated_projective(t: &Triple) -> Result<ProjectiveRep> {
    let f = &t.ctx().field;
    let g = &t.group;
    let n = &t.normal;
    let d = t.rep();
    let tr = CosetTransversal::new(g, n)?;
    let to_n = normal_index(g, n);
    let mut ngens: Vec<usize> = n.gen_indices().iter().map(|&s| g.index_of(n.element(s)).expect("N ≤ G")).collect();
    // a trivial N has no generators, but the intertwiner system still needs its dimension
    if ngens.is_empty() {
        ngens.push(g.identity());
    }
    let a: Vec<Mat> = ngens.iter().map(|&s| d.image(to_n[s].expect("N ≤ G"))).collect();
    let mut mats = Vec::with_capacity(tr.len());
    for (c, &r) in tr.reps().iter().enumerate() {
        if c == 0 {
            mats.push(Mat::identity(d.dim()));
            continue;
        }
        // D(n) X = X D(r⁻¹ n r)
        let b: Vec<Mat> = ngens.iter().map(|&s| d.image(to_n[g.conj(s, r)].expect("N normal"))).collect();
        let sols = intertwiners(f, &a, &b);
        let x = match sols.len() {
            0 => return Err(Error::Structure("θ is not stable under G".into())),
            1 => sols.into_iter().next().expect("one"),
            _ => return Err(Error::FieldExtension { field_size: f.size() as u64, reason: "θ is not absolutely irreducible".into() }),
        };
        let (_, lead) = x.first_nonzero().expect("nonzero intertwiner");
        mats.push(x.scale(f, f.inv(lead)));
    }
    ProjectiveRep::from_parts(g, d, t.ctx(), mats)
}

/// The linear character `λ_{h₂}` of `H₁/H` used for one `h₂`.
#[derive(Clone, Debug)]
pub struct LambdaRecord {
    pub h2: usize,
    pub lambda: LinearCharacter,
    pub order: u64,
}

/// Output of [`glue`].
#[derive(Clone, Debug)]
pub struct Glued {
    pub rep: ProjectiveRep,
    /// Factor set extracted from the glued matrices.
    pub alpha: FactorSet,
    /// `λ_{h₂}(h₁′)·α₂(h₂,h₂′)`, evaluated from the recorded `λ`s.
    pub formula: FactorSet,
    /// `λ_{h₂}(h₁′)·α₂(h₂,h₂′)⁻¹`, the variant with inverted `α₂`.
    pub inverted_variant: FactorSet,
    pub lambdas: Vec<LambdaRecord>,
}

impl Glued {
    pub fn formula_agrees(&self) -> bool {
        self.formula == self.alpha
    }
    pub fn inverted_variant_agrees(&self) -> bool {
        self.inverted_variant == self.alpha
    }
    /// lcm of the orders of the `λ`s used.
    pub fn lambda_order(&self) -> u64 {
        self.lambdas.iter().fold(1, |a, l| a.lcm(&l.order))
    }
}

fn linear_order(f: &Field, values: &[Fq]) -> u64 {
    let qm1 = f.unit_order() as u64;
    values.iter().fold(1, |acc: u64, &v| acc.lcm(&(qm1 / (f.log(v).expect("unit") as u64).gcd(&qm1))))
}

/// `P(h₁h₂) = D₁(h₁)P₂(h₂)` on `G = H₁H₂`, with `H₁ ⊴ G` and `H = H₁ ∩ H₂ ⊴ G`.
pub fn glue(d1: &MatrixRep, p2: &ProjectiveRep, g: &Group) -> Result<Glued> {
    let ctx = &p2.ctx;
    let f = &ctx.field;
    let h1 = &d1.group;
    let h2 = &p2.group;
    let h = &p2.normal;
    if d1.field.size() != f.size() {
        return Err(Error::Precondition("D₁ and P₂ live over different fields".into()));
    }
    let h1_in = g.embed(h1).map_err(|_| Error::Structure("H₁ is not a subgroup of G".into()))?;
    let h2_in = g.embed(h2).map_err(|_| Error::Structure("H₂ is not a subgroup of G".into()))?;
    if !g.is_normal(h1) || !g.is_normal(h) {
        return Err(Error::Structure("H₁ and H must be normal in G".into()));
    }
    let mut in_h1 = vec![None; g.order()];
    for (i, &x) in h1_in.iter().enumerate() {
        in_h1[x] = Some(i);
    }
    let mut in_h2 = vec![None; g.order()];
    for (i, &x) in h2_in.iter().enumerate() {
        in_h2[x] = Some(i);
    }
    let meet = (0..g.order()).filter(|&x| in_h1[x].is_some() && in_h2[x].is_some()).count();
    if meet != h.order() || h1.order() * h2.order() != g.order() * h.order() {
        return Err(Error::Structure("need G = H₁H₂ with H₁ ∩ H₂ = H".into()));
    }
    for &s in h.gen_indices() {
        let x = g.index_of(h.element(s)).expect("H ≤ G");
        if d1.image(in_h1[x].expect("H ≤ H₁")) != p2.eval(in_h2[x].expect("H ≤ H₂")) {
            return Err(Error::Precondition("D₁ and P₂ disagree on H".into()));
        }
    }
    let p2_at = |x: usize| p2.eval(in_h2[x].expect("element of H₂"));
    let d1_at = |x: usize| d1.image(in_h1[x].expect("element of H₁"));

    let tr = CosetTransversal::new(g, h)?;
    let mut parts = Vec::with_capacity(tr.len());
    let mut mats = Vec::with_capacity(tr.len());
    for &t in tr.reps() {
        let mut value: Option<Mat> = None;
        let mut first = None;
        for &y in &h2_in {
            let x = g.mul(t, g.inv(y));
            if in_h1[x].is_none() {
                continue;
            }
            let m = d1_at(x).mul(f, &p2_at(y));
            match &value {
                None => {
                    first = Some((x, y));
                    value = Some(m);
                }
                Some(v) if *v != m => return Err(Error::Internal("glued matrix depends on the factorization".into())),
                Some(_) => {}
            }
        }
        parts.push(first.ok_or_else(|| Error::Structure("G ≠ H₁H₂".into()))?);
        mats.push(value.expect("factorization found"));
    }
    let rep = ProjectiveRep::from_parts(g, &p2.d, ctx, mats)?;
    let alpha = rep.verify()?;

    // λ_{h₂}: P₂(h₂)D₁(x)P₂(h₂)⁻¹ = λ_{h₂}(x)·D₁(h₂ x h₂⁻¹)
    let table = irr_brauer_in(h, ctx, SourceModule::SylowCosets)?;
    let theta = table
        .position(&brauer_character(&p2.d, ctx)?)
        .ok_or_else(|| Error::Precondition("P₂ does not restrict to an irreducible representation of H".into()))?;
    let theta1 = brauer_character(d1, ctx)?;
    let mut cache: HashMap<usize, LambdaRecord> = HashMap::new();
    for &(_, y) in &parts {
        if cache.contains_key(&y) {
            continue;
        }
        let py = p2_at(y);
        let pyi = py.inverse(f).expect("invertible");
        let mut vals = Vec::new();
        for &s in h1.gen_indices() {
            let x = h1_in[s];
            let nu1 = py.mul(f, &d1_at(x)).mul(f, &pyi);
            let nu2 = d1_at(g.mul(g.mul(y, x), g.inv(y)));
            vals.push(nu1.scalar_ratio(f, &nu2).ok_or_else(|| Error::Internal("no linear character relates the two extensions".into()))?);
        }
        let lrep = MatrixRep::new(h1, f, vals.iter().map(|&v| Mat::scalar(1, v)).collect())?;
        let lchi = brauer_character(&lrep, ctx)?;
        let ld = linear_difference(&theta1, &act_on_brauer(&theta1, g, y)?, &table, theta)?;
        if !ld.lambdas.iter().any(|l| l.chi == lchi) {
            return Err(Error::Internal("matrix-level λ is not among the Brauer-level linear differences".into()));
        }
        let order = linear_order(f, &vals);
        cache.insert(y, LambdaRecord { h2: y, lambda: LinearCharacter { rep: lrep, chi: lchi }, order });
    }

    let k = tr.len();
    let alpha2 = p2.factor_set()?;
    let a2 = |y: usize, y2: usize| {
        let (i, j) = (in_h2[y].expect("H₂"), in_h2[y2].expect("H₂"));
        alpha2.get(p2.transversal.coset_of(i), p2.transversal.coset_of(j))
    };
    let mut formula = Vec::with_capacity(k * k);
    let mut inverted = Vec::with_capacity(k * k);
    for &(_, y) in &parts {
        let lam = &cache[&y].lambda;
        for &(x2, y2) in &parts {
            let l = lam.value(in_h1[x2].expect("H₁"));
            let a = a2(y, y2);
            formula.push(f.mul(l, a));
            inverted.push(f.mul(l, f.inv(a)));
        }
    }
    let formula = FactorSet { field: f.clone(), k, mult: alpha.mult.clone(), values: formula };
    let inverted_variant = FactorSet { field: f.clone(), k, mult: alpha.mult.clone(), values: inverted };
    let mut lambdas: Vec<LambdaRecord> = cache.into_values().collect();
    lambdas.sort_by_key(|l| l.h2);
    Ok(Glued { rep, alpha, formula, inverted_variant, lambdas })
}

/// Left fold of [`glue`] starting from `start`; each step is `(D₁, G)`.
/// Asserts that the final factor-set order divides the product of the
/// per-step `λ` orders times the order of the starting factor set.
pub fn glue_iterated(start: &ProjectiveRep, steps: &[(MatrixRep, Group)]) -> Result<Vec<Glued>> {
    let mut out: Vec<Glued> = Vec::new();
    let mut bound = start.factor_set()?.order();
    for (d1, g) in steps {
        let cur = out.last().map_or(start, |s| &s.rep);
        let s = glue(d1, cur, g)?;
        if !s.formula_agrees() {
            return Err(Error::Internal("glue formula disagrees with the extracted factor set".into()));
        }
        bound *= s.lambda_order();
        if bound % s.alpha.order() != 0 {
            return Err(Error::Internal(format!("factor-set order {} does not divide {bound}", s.alpha.order())));
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::clifford::{extend_character, make_triple, make_triple_for};

    fn q8_in_sl23() -> Triple {
        let b = builtin("SL23").unwrap();
        let q8 = b.normal_group("Q8").unwrap();
        let t = make_triple_for(&b.group, &q8, 7, 0, 4).unwrap();
        assert_eq!(t.theta().degree(), 2);
        t
    }

    #[test]
    fn associated_projective_of_q8_in_sl23() {
        let t = q8_in_sl23();
        let p = associated_projective(&t).unwrap();
        let alpha = p.verify().unwrap();
        assert!(alpha.check_cocycle() && alpha.is_normalized());
        let f = p.field();
        // the leading-entry normalization does not bound the pointwise order;
        // a rescaling does: θ extends to SL23, so α is a coboundary
        let c = alpha.trivializing_cochain().unwrap();
        let inv: Vec<Fq> = c.iter().map(|&x| f.inv(x)).collect();
        let beta = p.scaled(&inv).unwrap().verify().unwrap();
        assert!(beta.values().iter().all(|&v| f.pow(v, 3) == 1));
        assert!(beta.is_trivial());
    }

    #[test]
    fn trivial_cases() {
        let b = builtin("S4").unwrap();
        let v4 = b.normal_group("V4").unwrap();
        let t = make_triple_for(&b.group, &v4, 5, 0, 0).unwrap();
        let p = associated_projective(&t).unwrap();
        assert!(p.verify().unwrap().is_trivial());
        assert!(p.coset_matrices().iter().all(|m| *m == Mat::identity(1)));
        let whole = make_triple_for(&b.group, &b.group, 5, 0, 3).unwrap();
        let p = associated_projective(&whole).unwrap();
        assert_eq!(p.factor_set().unwrap().order(), 1);
    }

    #[test]
    fn transforms() {
        let t = q8_in_sl23();
        let p = associated_projective(&t).unwrap();
        let alpha = p.factor_set().unwrap();
        let f = p.field().clone();
        let bar = p.bar();
        assert_eq!(bar.verify().unwrap(), alpha.pow(-1));
        assert_eq!(bar.bar().coset_matrices(), p.coset_matrices());
        let sig = p.sigma();
        assert_eq!(sig.verify().unwrap(), alpha.pow(7));
        assert_eq!(sig.factor_set().unwrap().order(), alpha.order());
        let ones = vec![1; p.coset_matrices().len()];
        assert_eq!(p.scaled(&ones).unwrap().coset_matrices(), p.coset_matrices());
        // scaling by a μ₂-valued function changes α by its coboundary
        let c: Vec<Fq> = (0..ones.len()).map(|i| if i % 2 == 1 { f.from_int(-1) } else { 1 }).collect();
        let s = p.scaled(&c).unwrap();
        let mult = p.coset_mult();
        assert_eq!(s.factor_set().unwrap(), alpha.mul(&FactorSet::coboundary(&f, &mult, &c)));
        assert_eq!(alpha.order().lcm(&2) % s.factor_set().unwrap().order(), 0);
        // conjugation by an element of N leaves P projectively unchanged
        let g = &t.group;
        for &x in &g.embed(&t.normal).unwrap() {
            let px = p.conjugate(g, x).unwrap();
            assert_eq!(px.verify().unwrap(), alpha);
        }
    }

    #[test]
    fn glue_with_trivial_pieces() {
        let t = q8_in_sl23();
        let ext = extend_character(&t).unwrap();
        let g = t.group.clone();
        // H₂ = H: P = D₁
        let p2 = ProjectiveRep::from_ordinary(t.rep(), &t.normal, t.ctx()).unwrap();
        let out = glue(&ext.rep, &p2, &g).unwrap();
        assert!(out.alpha.is_trivial() && out.formula_agrees());
        for x in 0..g.order() {
            assert_eq!(out.rep.eval(x), ext.rep.image(x));
        }
        // H₁ = H: P = P₂
        let p = associated_projective(&t).unwrap();
        let out = glue(t.rep(), &p, &g).unwrap();
        assert_eq!(out.alpha, p.factor_set().unwrap());
        assert!(out.formula_agrees() && out.lambdas.iter().all(|l| l.order == 1));
        // with α₂ of order > 2 the inverted-α₂ variant cannot match
        assert!(p.factor_set().unwrap().order() > 2);
        assert!(!out.inverted_variant_agrees());
    }

    #[test]
    fn glue_on_sl23_semi_c2() {
        let b = builtin("SL23_semi_C2").unwrap();
        let g = b.group.clone();
        let q8 = b.normal_group("Q8").unwrap();
        let sl = b.normal_group("SL23").unwrap();
        let ctx = ModularContext::for_group(&g, 7, 0).unwrap();
        let table = irr_brauer_in(&q8, &ctx, SourceModule::SylowCosets).unwrap();
        let theta = table.irr.iter().position(|c| c.degree() == 2).unwrap();
        // H₂ = ⟨Q8, t⟩ with t outside SL23, t² ∈ Q8
        let q8_in = g.embed(&q8).unwrap();
        let sl_in = g.embed(&sl).unwrap();
        let tt = (0..g.order()).find(|&x| !sl_in.contains(&x) && q8_in.contains(&g.mul(x, x))).unwrap();
        let mut gens = q8_in.clone();
        gens.push(tt);
        let h2: Group = Arc::new(g.subgroup("H2", &gens));
        assert_eq!(h2.order(), 16);
        let t1 = make_triple(&sl, &table, theta).unwrap();
        let t2 = make_triple(&h2, &table, theta).unwrap();
        let d1 = extend_character(&t1).unwrap().rep;
        let p2 = associated_projective(&t2).unwrap();
        let out = glue(&d1, &p2, &g).unwrap();
        assert!(out.formula_agrees());
        assert!([1, 2, 3, 4, 6].contains(&out.alpha.order()));
    }

    fn faithful_on_center(table: &crate::modrep::BrauerTable) -> usize {
        let f = &table.ctx.field;
        (0..table.len()).find(|&i| table.reps[i].generator_images().iter().any(|m| f.order(m.get(0, 0)).unwrap() == 4)).unwrap()
    }

    #[test]
    fn two_step_glue_on_g128() {
        let b = builtin("G128").unwrap();
        let g = b.group.clone();
        let n = b.normal_group("N").unwrap();
        let k1 = b.normal_group("K1").unwrap();
        let k2 = b.normal_group("K2").unwrap();
        let u2 = b.normal_group("U2").unwrap();
        let mut gens = g.embed(&k2).unwrap();
        gens.extend(g.embed(&u2).unwrap());
        let k2u2: Group = Arc::new(g.subgroup("K2U2", &gens));
        for ell in [3, 5] {
            let ctx = ModularContext::for_group(&g, ell, 0).unwrap();
            let table = irr_brauer_in(&n, &ctx, SourceModule::SylowCosets).unwrap();
            let theta = faithful_on_center(&table);
            let ext = |h: &Group| extend_character(&make_triple(h, &table, theta).unwrap()).unwrap().rep;
            let start = ProjectiveRep::from_ordinary(&ext(&u2), &n, &ctx).unwrap();
            let steps = glue_iterated(&start, &[(ext(&k2), k2u2.clone()), (ext(&k1), g.clone())]).unwrap();
            let last = steps.last().unwrap();
            assert!(last.formula_agrees());
            assert_eq!(4 % last.alpha.order(), 0);
            assert!(last.alpha.order() > 1);
        }
    }
}
