//! Modular representations: matrix representations over `F_{ℓ^d}`, the
//! MeatAxe, Brauer characters, the decomposition map and its matrix.
//!
//! Matrices act on row vectors from the right, matching the left-to-right
//! product of permutations: `ρ(xy) = ρ(x) ρ(y)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chartab::{class_action, class_infos, table_tsv, CharacterTable, ClassFunction, ClassInfo};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::gf::{field_tower, Field, Fq, LiftConvention};
use crate::group::{FiniteGroup, Group, GroupMap};
use crate::linalg::{poly_roots, spin, sub_and_quotient, vec_mat, Echelon, Mat};
use crate::perm::Perm;

/// Largest module the MeatAxe accepts.
pub const MAX_CHOP_DIM: usize = 500;
/// Largest group whose regular module may be chopped.
pub const MAX_REGULAR_ORDER: usize = 1000;
const MAX_TRIES: usize = 400;

/// Words reaching every element from the identity by right multiplication
/// with generators: `parent[x] = (y, s)` means `x = y · gen_s`.
fn word_tree(g: &FiniteGroup) -> Vec<Option<(usize, usize)>> {
    let gens = g.gen_indices();
    let mut parent = vec![None; g.order()];
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, &gi) in gens.iter().enumerate() {
            let y = g.mul(x, gi);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, s));
                queue.push_back(y);
            }
        }
    }
    parent
}

/// A representation of a permutation group by matrices over a finite field,
/// given by the images of the group's generators.
#[derive(Clone)]
pub struct MatrixRep {
    pub group: Group,
    pub field: Arc<Field>,
    gens: Vec<Mat>,
    tree: Arc<Vec<Option<(usize, usize)>>>,
}

impl std::fmt::Debug for MatrixRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatrixRep({}, dim {}, F_{})", self.group.name(), self.dim(), self.field.size())
    }
}

impl MatrixRep {
    /// Checked constructor: every generator image is invertible and the
    /// assignment extends to a homomorphism (checked on all Cayley graph edges).
    pub fn new(group: &Group, field: &Arc<Field>, gens: Vec<Mat>) -> Result<MatrixRep> {
        if gens.len() != group.gen_indices().len() {
            return Err(Error::Precondition("one matrix per group generator required".into()));
        }
        let n = gens.first().map_or(1, |m| m.rows());
        for m in &gens {
            if m.rows() != n || m.cols() != n || m.inverse(field).is_none() {
                return Err(Error::Structure("generator image is not an invertible square matrix of the common size".into()));
            }
        }
        let rep = MatrixRep::unchecked(group, field, gens);
        let imgs = rep.all_images();
        for x in 0..group.order() {
            for (s, &gi) in group.gen_indices().iter().enumerate() {
                if imgs[x].mul(field, &rep.gens[s]) != imgs[group.mul(x, gi)] {
                    return Err(Error::Structure("matrices do not satisfy the group's relations".into()));
                }
            }
        }
        Ok(rep)
    }

    pub(crate) fn unchecked(group: &Group, field: &Arc<Field>, gens: Vec<Mat>) -> MatrixRep {
        MatrixRep { group: group.clone(), field: field.clone(), gens, tree: Arc::new(word_tree(group)) }
    }

    pub fn dim(&self) -> usize {
        self.gens.first().map_or(1, |m| m.rows())
    }

    pub fn generator_images(&self) -> &[Mat] {
        &self.gens
    }

    /// `ρ(x)` for an element index.
    pub fn image(&self, x: usize) -> Mat {
        let mut path = Vec::new();
        let mut cur = x;
        while let Some((p, s)) = self.tree[cur] {
            path.push(s);
            cur = p;
        }
        let mut m = Mat::identity(self.dim());
        for &s in path.iter().rev() {
            m = m.mul(&self.field, &self.gens[s]);
        }
        m
    }

    /// Images of every element, in element order.
    pub fn all_images(&self) -> Vec<Mat> {
        let mut out: Vec<Option<Mat>> = vec![None; self.group.order()];
        out[0] = Some(Mat::identity(self.dim()));
        // parents precede children in BFS, but indices are not BFS-ordered
        let mut order: Vec<usize> = (0..self.group.order()).collect();
        let depth = |mut x: usize| {
            let mut d = 0;
            while let Some((p, _)) = self.tree[x] {
                x = p;
                d += 1;
            }
            d
        };
        order.sort_by_key(|&x| depth(x));
        for x in order {
            if let Some((p, s)) = self.tree[x] {
                let m = out[p].as_ref().expect("parent first").mul(&self.field, &self.gens[s]);
                out[x] = Some(m);
            }
        }
        out.into_iter().map(|m| m.expect("connected Cayley graph")).collect()
    }

    /// Permutation module of the generators acting on `points`.
    pub fn from_permutations(group: &Group, field: &Arc<Field>, perms: &[Perm]) -> MatrixRep {
        let gens = perms
            .iter()
            .map(|p| {
                let n = p.degree();
                let mut m = Mat::zeros(n, n);
                for i in 0..n {
                    m.set(i, p.apply(i as u32) as usize, 1);
                }
                m
            })
            .collect();
        MatrixRep::unchecked(group, field, gens)
    }

    /// The permutation module on the right cosets `Hx` of a subgroup given by its elements.
    pub fn coset_module(group: &Group, field: &Arc<Field>, h: &[usize]) -> MatrixRep {
        let mut coset = vec![usize::MAX; group.order()];
        let mut count = 0;
        for x in 0..group.order() {
            if coset[x] == usize::MAX {
                for &y in h {
                    coset[group.mul(y, x)] = count;
                }
                count += 1;
            }
        }
        let reps: Vec<usize> = {
            let mut r = vec![usize::MAX; count];
            for x in (0..group.order()).rev() {
                r[coset[x]] = x;
            }
            r
        };
        let perms: Vec<Perm> = group
            .gen_indices()
            .iter()
            .map(|&s| Perm::from_images(reps.iter().map(|&r| coset[group.mul(r, s)] as u32).collect()).expect("coset action"))
            .collect();
        MatrixRep::from_permutations(group, field, &perms)
    }

    pub fn regular_module(group: &Group, field: &Arc<Field>) -> MatrixRep {
        MatrixRep::coset_module(group, field, &[0])
    }

    /// Contragredient `x ↦ ρ(x⁻¹)ᵀ`, affording the complex-conjugate Brauer character.
    pub fn dual(&self) -> MatrixRep {
        let gens = self.gens.iter().map(|m| m.inverse(&self.field).expect("invertible").transpose()).collect();
        MatrixRep::unchecked(&self.group, &self.field, gens)
    }

    /// Apply `x ↦ x^ℓ` to every entry.
    pub fn frobenius_twist(&self) -> MatrixRep {
        let f = self.field.clone();
        let gens = self.gens.iter().map(|m| m.map(|x| f.frobenius(x))).collect();
        MatrixRep::unchecked(&self.group, &self.field, gens)
    }

    /// `ρ^g(x) = ρ(g x g⁻¹)` for `g` in an overgroup on the same points normalizing the group.
    pub fn conjugate(&self, over: &FiniteGroup, g: usize) -> Result<MatrixRep> {
        let gp = over.element(g);
        let gi = gp.inv();
        let gens = self
            .group
            .gen_indices()
            .iter()
            .map(|&s| {
                let y = gp.mul(self.group.element(s)).mul(&gi);
                self.group.index_of(&y).map(|i| self.image(i)).ok_or_else(|| Error::Structure("element does not normalize the group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep::unchecked(&self.group, &self.field, gens))
    }

    /// Restriction to a subgroup on the same points.
    pub fn restrict(&self, h: &Group) -> Result<MatrixRep> {
        let gens = h
            .gen_indices()
            .iter()
            .map(|&s| self.group.index_of(h.element(s)).map(|i| self.image(i)).ok_or_else(|| Error::Structure("not a subgroup".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep::unchecked(h, &self.field, gens))
    }

    /// Scalar multiple of every matrix is not a representation in general;
    /// this is the tensor product with a linear representation `λ`.
    pub fn tensor_linear(&self, lambda: &[Fq]) -> MatrixRep {
        let gens = self.gens.iter().zip(lambda).map(|(m, &c)| m.scale(&self.field, c)).collect();
        MatrixRep::unchecked(&self.group, &self.field, gens)
    }
}

/// Settings shared by the modular computations of one group (and its normal subgroups).
#[derive(Clone, Debug)]
pub struct ModularContext {
    pub ell: u32,
    pub field: Arc<Field>,
    pub conv: LiftConvention,
    pub seed: u64,
}

/// `ℓ'`-part of `n`.
pub fn ell_prime_part(mut n: u64, ell: u64) -> u64 {
    while n.is_multiple_of(ell) {
        n /= ell;
    }
    n
}

impl ModularContext {
    /// Splitting field `F_{ℓ^d}` for the `ℓ'`-part of `exp(G)` with the standard lift.
    pub fn for_group(g: &FiniteGroup, ell: u32, seed: u64) -> Result<ModularContext> {
        if !crate::gf::is_prime(ell as u64) {
            return Err(Error::Domain(format!("{ell} is not prime")));
        }
        let field = field_tower(ell, ell_prime_part(g.exponent(), ell as u64))?;
        Ok(ModularContext { ell, conv: LiftConvention::standard(&field), field, seed })
    }

    pub fn with_field(field: &Arc<Field>, seed: u64) -> ModularContext {
        ModularContext { ell: field.characteristic(), field: field.clone(), conv: LiftConvention::standard(field), seed }
    }
}

/// A recipe for an element of the group algebra: products of pool entries
/// (pool starts with the generators) and a linear combination of the pool.
#[derive(Clone, Debug)]
struct AlgebraWord {
    products: Vec<(usize, usize)>,
    coeffs: Vec<Fq>,
}

impl AlgebraWord {
    fn random(rng: &mut ChaCha8Rng, f: &Field, ngens: usize) -> AlgebraWord {
        let extra = 6;
        let mut products = Vec::with_capacity(extra);
        for k in 0..extra {
            let pool = ngens + k;
            products.push((rng.gen_range(0..pool), rng.gen_range(0..pool)));
        }
        let coeffs = (0..ngens + extra).map(|_| rng.gen_range(0..f.size())).collect();
        AlgebraWord { products, coeffs }
    }

    fn eval(&self, f: &Field, gens: &[Mat]) -> Mat {
        let mut pool: Vec<Mat> = gens.to_vec();
        for &(a, b) in &self.products {
            let m = pool[a].mul(f, &pool[b]);
            pool.push(m);
        }
        let n = gens[0].rows();
        let mut acc = Mat::zeros(n, n);
        for (m, &c) in pool.iter().zip(&self.coeffs) {
            if c != 0 {
                acc = acc.add(f, &m.scale(f, c));
            }
        }
        acc
    }
}

/// Norton witness: `word - λ` has a one-dimensional kernel on the module.
#[derive(Clone, Debug)]
struct Witness {
    word: AlgebraWord,
    lambda: Fq,
}

struct Irreducible {
    gens: Vec<Mat>,
    witness: Option<Witness>,
}

fn split_gens(f: &Field, gens: &[Mat], sub: &Echelon) -> (Vec<Mat>, Vec<Mat>) {
    sub_and_quotient(f, gens, sub)
}

fn chop_rec(f: &Field, gens: &[Mat], rng: &mut ChaCha8Rng, out: &mut Vec<Irreducible>) -> Result<()> {
    let n = gens[0].rows();
    if n == 0 {
        return Ok(());
    }
    if n == 1 {
        out.push(Irreducible { gens: gens.to_vec(), witness: None });
        return Ok(());
    }
    let transposes: Vec<Mat> = gens.iter().map(|m| m.transpose()).collect();
    for _ in 0..MAX_TRIES {
        let word = AlgebraWord::random(rng, f, gens.len());
        let a = word.eval(f, gens);
        let cp = a.charpoly(f);
        for lambda in poly_roots(f, &cp) {
            let nmat = a.sub(f, &Mat::scalar(n, lambda));
            let kernel = nmat.left_nullspace(f);
            let Some(v) = kernel.first() else { continue };
            let sub = spin(f, gens, std::slice::from_ref(v), n);
            if sub.rank() < n {
                let (s, q) = split_gens(f, gens, &sub);
                chop_rec(f, &s, rng, out)?;
                chop_rec(f, &q, rng, out)?;
                return Ok(());
            }
            if kernel.len() != 1 {
                continue;
            }
            let w = nmat.nullspace(f).into_iter().next().expect("square singular matrix");
            let dual = spin(f, &transposes, &[w], n);
            if dual.rank() < n {
                // the annihilator of a proper dual submodule is a proper submodule
                let ann = dual.to_mat().nullspace(f);
                let mut sub = Echelon::new(n);
                for v in &ann {
                    sub.insert(f, v);
                }
                let (s, q) = split_gens(f, gens, &sub);
                chop_rec(f, &s, rng, out)?;
                chop_rec(f, &q, rng, out)?;
                return Ok(());
            }
            out.push(Irreducible { gens: gens.to_vec(), witness: Some(Witness { word, lambda }) });
            return Ok(());
        }
    }
    Err(Error::Resource { what: "MeatAxe attempts", value: MAX_TRIES as u64, bound: MAX_TRIES as u64 })
}

/// Spin `v` recording which (basis vector, generator) produced each new vector.
fn spin_recorded(f: &Field, gens: &[Mat], v: &[Fq]) -> (Vec<Vec<Fq>>, Vec<(usize, usize)>) {
    let n = v.len();
    let mut ech = Echelon::new(n);
    ech.insert(f, v);
    let mut basis = vec![v.to_vec()];
    let mut steps = Vec::new();
    let mut i = 0;
    while i < basis.len() && basis.len() < n {
        for (s, g) in gens.iter().enumerate() {
            let w = vec_mat(f, &basis[i], g);
            if ech.insert(f, &w) {
                basis.push(w);
                steps.push((i, s));
            }
        }
        i += 1;
    }
    (basis, steps)
}

/// Matrices of `gens` in the basis given by the rows of `b`.
fn in_basis(f: &Field, gens: &[Mat], b: &Mat) -> Option<Vec<Mat>> {
    let bi = b.inverse(f)?;
    Some(gens.iter().map(|g| b.mul(f, g).mul(f, &bi)).collect())
}

fn isomorphic(f: &Field, a: &Irreducible, b: &[Mat]) -> bool {
    let n = a.gens[0].rows();
    if b[0].rows() != n {
        return false;
    }
    let Some(wit) = &a.witness else {
        return a.gens == b;
    };
    let ka = wit.word.eval(f, &a.gens).sub(f, &Mat::scalar(n, wit.lambda)).left_nullspace(f);
    let kb = wit.word.eval(f, b).sub(f, &Mat::scalar(n, wit.lambda)).left_nullspace(f);
    if kb.len() != 1 {
        return false;
    }
    let (ba, steps) = spin_recorded(f, &a.gens, &ka[0]);
    let mut bb = vec![kb[0].clone()];
    for &(i, s) in &steps {
        let w = vec_mat(f, &bb[i], &b[s]);
        bb.push(w);
    }
    let (Some(ma), Some(mb)) = (in_basis(f, &a.gens, &Mat::from_rows(&ba)), in_basis(f, b, &Mat::from_rows(&bb))) else {
        return false;
    };
    ma == mb
}

fn seed_for(seed: u64, group: &FiniteGroup, ell: u32, dim: usize) -> u64 {
    // fixed mixing so identical inputs replay identically across runs
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for x in [group.order() as u64, group.degree() as u64, ell as u64, dim as u64] {
        h = (h ^ x).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
    }
    h
}

/// Composition factors of a module with multiplicities, in order of first appearance.
pub fn chop(m: &MatrixRep, seed: u64) -> Result<Vec<(MatrixRep, usize)>> {
    let n = m.dim();
    if n > MAX_CHOP_DIM {
        return Err(Error::Resource { what: "module dimension", value: n as u64, bound: MAX_CHOP_DIM as u64 });
    }
    if m.gens.is_empty() {
        // trivial group: the module is a sum of n trivial modules
        let triv = MatrixRep::unchecked(&m.group, &m.field, Vec::new());
        return Ok(if n == 0 { vec![] } else { vec![(triv, n)] });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(seed, &m.group, m.field.characteristic(), n));
    let mut pieces = Vec::new();
    chop_rec(&m.field, &m.gens, &mut rng, &mut pieces)?;
    let mut classes: Vec<(Irreducible, usize)> = Vec::new();
    for p in pieces {
        match classes.iter_mut().find(|(c, _)| isomorphic(&m.field, c, &p.gens)) {
            Some((_, k)) => *k += 1,
            None => classes.push((p, 1)),
        }
    }
    Ok(classes.into_iter().map(|(c, k)| (MatrixRep::unchecked(&m.group, &m.field, c.gens), k)).collect())
}

/// Whether a module is irreducible (by chopping it).
pub fn is_irreducible(m: &MatrixRep, seed: u64) -> Result<bool> {
    let c = chop(m, seed)?;
    Ok(c.len() == 1 && c[0].1 == 1)
}

/// A Brauer character: values on the `ℓ`-regular classes, in class order.
#[derive(Clone, Debug)]
pub struct BrauerCharacter {
    pub group: Group,
    pub ell: u32,
    pub values: Vec<CycloNumber>,
}

impl PartialEq for BrauerCharacter {
    fn eq(&self, o: &Self) -> bool {
        self.ell == o.ell && self.values == o.values
    }
}

impl BrauerCharacter {
    pub fn degree(&self) -> i64 {
        self.values[0].to_i64().expect("degree is an integer")
    }

    /// `ℓ`-regular classes of the group, the index set of `values`.
    pub fn classes(&self) -> Vec<usize> {
        self.group.ell_regular_classes(self.ell as u64)
    }

    /// Value at an element (must be `ℓ`-regular).
    pub fn at(&self, x: usize) -> Option<&CycloNumber> {
        let c = self.group.class_of(x);
        self.classes().iter().position(|&k| k == c).map(|i| &self.values[i])
    }

    /// `θ̄(g) = θ(g⁻¹)`.
    pub fn bar(&self) -> BrauerCharacter {
        BrauerCharacter { group: self.group.clone(), ell: self.ell, values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// Values of the twist by `x ↦ x^ℓ`: the Galois automorphism `ζ ↦ ζ^ℓ`.
    pub fn sigma_twist(&self) -> BrauerCharacter {
        self.galois(self.ell as i64)
    }

    pub fn galois(&self, k: i64) -> BrauerCharacter {
        BrauerCharacter { group: self.group.clone(), ell: self.ell, values: self.values.iter().map(|v| v.galois(k)).collect() }
    }

    pub fn mul(&self, o: &BrauerCharacter) -> BrauerCharacter {
        BrauerCharacter { group: self.group.clone(), ell: self.ell, values: self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect() }
    }

    fn cmp_values(&self, o: &Self) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        let triv = |c: &Self| c.values.iter().all(|v| v.to_i64() == Some(1));
        match (triv(self), triv(o)) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        for (a, b) in self.values.iter().zip(&o.values) {
            match a.cmp_repr(b) {
                Ordering::Equal => continue,
                x => return x,
            }
        }
        Ordering::Equal
    }
}

/// Brauer character of a module: eigenvalues at each `ℓ`-regular
/// representative, lifted through the context's convention.
pub fn brauer_character(rep: &MatrixRep, ctx: &ModularContext) -> Result<BrauerCharacter> {
    if !Arc::ptr_eq(&rep.field, &ctx.field) {
        return Err(Error::Consistency("module and context use different fields".into()));
    }
    let g = &rep.group;
    let f = &rep.field;
    let ell = ctx.ell as u64;
    let conductor = ell_prime_part(g.exponent(), ell) as u32;
    let n = rep.dim();
    let mut values = Vec::new();
    for c in g.ell_regular_classes(ell) {
        let cl = &g.conjugacy_classes()[c];
        let o = cl.order as u32;
        if !f.unit_order().is_multiple_of(o) {
            return Err(Error::FieldExtension { field_size: f.size() as u64, reason: format!("no primitive {o}th root of unity") });
        }
        let m = rep.image(cl.rep);
        let mut counts = vec![0i64; conductor as usize];
        let mut total = 0;
        for z in f.roots_of_unity(o) {
            let k = m.sub(f, &Mat::scalar(n, z)).nullity(f);
            if k > 0 {
                counts[ctx.conv.lift_exponent(z, conductor)? as usize] += k as i64;
                total += k;
            }
        }
        if total != n {
            return Err(Error::Internal("ℓ-regular element is not diagonalizable".into()));
        }
        values.push(CycloNumber::from_root_counts(conductor, &counts));
    }
    Ok(BrauerCharacter { group: g.clone(), ell: ctx.ell, values })
}

/// `IBr(G)` with affording representations, sorted by degree then values.
#[derive(Debug)]
pub struct BrauerTable {
    pub group: Group,
    pub ctx: ModularContext,
    pub classes: Vec<usize>,
    pub irr: Vec<BrauerCharacter>,
    pub reps: Vec<MatrixRep>,
    /// Coordinate solvers for `IBr`, keyed by the conductor values are promoted to.
    solvers: Mutex<HashMap<u32, Arc<CoordinateSolver>>>,
}

/// Left inverse of the `IBr` value matrix on a set of independent rows.
#[derive(Debug)]
struct CoordinateSolver {
    /// Rows of `A`: rational coordinates of each (class, power basis) entry across `IBr`.
    a: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    inv: Vec<Vec<BigRational>>,
}

impl CoordinateSolver {
    fn new(basis: &[BrauerCharacter], cond: u32) -> CoordinateSolver {
        let k = basis.len();
        let n = basis.first().map_or(0, |b| b.values.len());
        let phi = CycloNumber::zero(cond).coeffs().len();
        let mut a = vec![vec![BigRational::zero(); k]; n * phi];
        for (j, b) in basis.iter().enumerate() {
            for (c, v) in b.values.iter().enumerate() {
                let v = v.promote(cond);
                for i in 0..phi {
                    a[c * phi + i][j] = v.coeffs()[i].clone();
                }
            }
        }
        // greedy choice of k independent rows, tracked in echelon form
        let mut ech: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut pivots = Vec::new();
        for (r, row) in a.iter().enumerate() {
            let mut v = row.clone();
            for (col, e) in &ech {
                if !v[*col].is_zero() {
                    let f = v[*col].clone();
                    for (x, y) in v.iter_mut().zip(e) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(col) = v.iter().position(|x| !x.is_zero()) {
                let p = v[col].clone();
                v.iter_mut().for_each(|x| *x /= &p);
                for (_, e) in ech.iter_mut() {
                    if !e[col].is_zero() {
                        let f = e[col].clone();
                        for (x, y) in e.iter_mut().zip(&v) {
                            *x -= &f * y;
                        }
                    }
                }
                ech.push((col, v));
                pivots.push(r);
                if pivots.len() == k {
                    break;
                }
            }
        }
        let inv = invert_rational(pivots.iter().map(|&r| a[r].clone()).collect()).unwrap_or_default();
        CoordinateSolver { a, pivots, inv }
    }

    fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        if self.inv.is_empty() && !self.a.first().is_none_or(|r| r.is_empty()) {
            return None;
        }
        let x: Vec<BigRational> = self
            .inv
            .iter()
            .map(|row| row.iter().zip(&self.pivots).fold(BigRational::zero(), |acc, (m, &p)| acc + m * &b[p]))
            .collect();
        let consistent = self.a.iter().zip(b).all(|(row, bi)| row.iter().zip(&x).fold(BigRational::zero(), |acc, (m, xi)| acc + m * xi) == *bi);
        consistent.then_some(x)
    }
}

/// Inverse of a square rational matrix, `None` if singular.
fn invert_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::from_integer(1.into()) } else { BigRational::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let d = m[c][c].clone();
        m[c].iter_mut().for_each(|x| *x /= &d);
        inv[c].iter_mut().for_each(|x| *x /= &d);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    let (mc, ic) = (m[c][j].clone(), inv[c][j].clone());
                    m[r][j] -= &f * mc;
                    inv[r][j] -= &f * ic;
                }
            }
        }
    }
    Some(inv)
}

impl BrauerTable {
    /// Exact coordinates of a value vector in the `IBr` basis, or `None`
    /// when outside the span. Same result as [`coordinates_in`], with the
    /// elimination done once per table.
    pub fn coordinates(&self, target: &[CycloNumber]) -> Option<Vec<BigRational>> {
        let cond = self.irr.iter().flat_map(|b| b.values.iter()).chain(target).fold(1u32, |acc, v| acc.lcm(&v.conductor()));
        let solver = {
            let mut cache = self.solvers.lock().expect("solver cache poisoned");
            cache.entry(cond).or_insert_with(|| Arc::new(CoordinateSolver::new(&self.irr, cond))).clone()
        };
        let phi = CycloNumber::zero(cond).coeffs().len();
        let mut b = Vec::with_capacity(target.len() * phi);
        for t in target {
            b.extend(t.promote(cond).coeffs().iter().cloned());
        }
        solver.solve(&b)
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }
    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }
    pub fn degrees(&self) -> Vec<i64> {
        self.irr.iter().map(|c| c.degree()).collect()
    }
    pub fn position(&self, chi: &BrauerCharacter) -> Option<usize> {
        self.irr.iter().position(|x| x == chi)
    }
}

/// Which module is chopped to find the simple modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceModule {
    /// Permutation module on the cosets of a Sylow `ℓ`-subgroup: every
    /// simple module is a quotient of it.
    SylowCosets,
    /// The regular module.
    Regular,
}

type TableKey = (usize, Vec<Perm>, u32, u32, u64);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<BrauerTable>>> {
    static C: OnceLock<Mutex<HashMap<TableKey, Arc<BrauerTable>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A Sylow `ℓ`-subgroup as a sorted element set.
pub fn sylow_subgroup(g: &FiniteGroup, ell: u64) -> Vec<usize> {
    let mut target = 1usize;
    let mut n = g.order();
    while n.is_multiple_of(ell as usize) {
        n /= ell as usize;
        target *= ell as usize;
    }
    let mut p = vec![0usize];
    let mut pgens: Vec<usize> = Vec::new();
    while p.len() < target {
        let inside: std::collections::HashSet<usize> = p.iter().copied().collect();
        // an ℓ-element normalizing P outside P exists until P is Sylow
        let x = (0..g.order())
            .find(|&x| {
                let o = g.elt_order(x);
                ell_prime_part(o, ell) == 1
                    && !inside.contains(&x)
                    && pgens.iter().all(|&y| inside.contains(&g.conj(y, x)))
            })
            .expect("Sylow growth step");
        pgens.push(x);
        p = g.closure(&pgens);
    }
    p
}

/// `IBr(G)` in the group's own splitting field.
pub fn irr_brauer(g: &Group, ell: u32, seed: u64) -> Result<Arc<BrauerTable>> {
    let ctx = ModularContext::for_group(g, ell, seed)?;
    irr_brauer_in(g, &ctx, SourceModule::SylowCosets)
}

/// `IBr(G)` over a given context (e.g. the splitting field of an overgroup).
pub fn irr_brauer_in(g: &Group, ctx: &ModularContext, source: SourceModule) -> Result<Arc<BrauerTable>> {
    let key = (g.degree(), g.generators().to_vec(), ctx.ell, ctx.field.size(), ctx.seed ^ (source == SourceModule::Regular) as u64);
    if let Some(t) = table_cache().lock().expect("cache poisoned").get(&key) {
        if t.group.order() == g.order() && t.group.name() == g.name() {
            return Ok(t.clone());
        }
    }
    let ell = ctx.ell as u64;
    let module = match source {
        SourceModule::SylowCosets => MatrixRep::coset_module(g, &ctx.field, &sylow_subgroup(g, ell)),
        SourceModule::Regular => {
            if g.order() > MAX_REGULAR_ORDER {
                return Err(Error::Resource { what: "group order for regular module", value: g.order() as u64, bound: MAX_REGULAR_ORDER as u64 });
            }
            MatrixRep::regular_module(g, &ctx.field)
        }
    };
    let factors = chop(&module, ctx.seed)?;
    let mut pairs = Vec::with_capacity(factors.len());
    for (rep, _) in factors {
        pairs.push((brauer_character(&rep, ctx)?, rep));
    }
    pairs.sort_by(|a, b| a.0.cmp_values(&b.0));
    let classes = g.ell_regular_classes(ell);
    if pairs.len() != classes.len() {
        return Err(Error::Consistency(format!("found {} simple modules for {} ℓ-regular classes", pairs.len(), classes.len())));
    }
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Consistency("two simple modules share a Brauer character".into()));
        }
    }
    let (irr, reps) = pairs.into_iter().unzip();
    let t = Arc::new(BrauerTable { group: g.clone(), ctx: ctx.clone(), classes, irr, reps, solvers: Mutex::default() });
    table_cache().lock().expect("cache poisoned").insert(key, t.clone());
    Ok(t)
}

/// Values of a class function on the `ℓ`-regular classes as a Brauer-style vector.
pub fn restrict_to_regular(chi: &ClassFunction, ell: u32) -> BrauerCharacter {
    let classes = chi.group.ell_regular_classes(ell as u64);
    BrauerCharacter { group: chi.group.clone(), ell, values: classes.iter().map(|&c| chi.values[c].clone()).collect() }
}

/// Exact rational coordinates of `target` in the span of `basis` (all
/// value vectors of equal length), or `None` when outside the span.
pub fn coordinates_in(basis: &[BrauerCharacter], target: &[CycloNumber]) -> Option<Vec<BigRational>> {
    let cond = basis
        .iter()
        .flat_map(|b| b.values.iter())
        .chain(target.iter())
        .fold(1u32, |acc, v| acc.lcm(&v.conductor()));
    let phi = CycloNumber::zero(cond).coeffs().len();
    let rows = target.len() * phi;
    let mut a = vec![vec![BigRational::zero(); basis.len()]; rows];
    let mut b = vec![BigRational::zero(); rows];
    for (c, t) in target.iter().enumerate() {
        let tv = t.promote(cond);
        for i in 0..phi {
            b[c * phi + i] = tv.coeffs()[i].clone();
        }
        for (j, bj) in basis.iter().enumerate() {
            let v = bj.values[c].promote(cond);
            for i in 0..phi {
                a[c * phi + i][j] = v.coeffs()[i].clone();
            }
        }
    }
    crate::linalg::solve_rational(&a, &b)
}

/// `d¹(χ)`: the restriction of `χ` to `ℓ`-regular classes in the `IBr` basis.
pub fn d1(chi: &ClassFunction, table: &BrauerTable) -> Result<Vec<i64>> {
    let r = restrict_to_regular(chi, table.ctx.ell);
    let x = table.coordinates(&r.values).ok_or_else(|| Error::Consistency("restriction is not in the span of IBr".into()))?;
    x.iter()
        .map(|q| {
            if q.is_integer() {
                q.to_integer().to_i64().ok_or_else(|| Error::Internal("coefficient overflow".into()))
            } else {
                Err(Error::Consistency(format!("non-integral decomposition coefficient {q}")))
            }
        })
        .collect()
}

/// Rows indexed by `Irr(G)`, columns by `IBr(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMatrix {
    pub ell: u32,
    pub rows: Vec<Vec<i64>>,
}

impl DecompositionMatrix {
    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x >= 0)
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<BigRational>> = self.rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
        rational_rank(m)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&parts.join("\t"));
            s.push('\n');
        }
        s
    }
}

pub(crate) fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &piv;
                for k in c..cols {
                    let d = &factor * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn decomposition_matrix(ordinary: &CharacterTable, table: &BrauerTable) -> Result<DecompositionMatrix> {
    let rows = ordinary.irr.iter().map(|chi| d1(chi, table)).collect::<Result<Vec<_>>>()?;
    Ok(DecompositionMatrix { ell: table.ctx.ell, rows })
}

/// `θ^g` for `g` in an overgroup on the same points: `θ^g(x) = θ(g x g⁻¹)`.
pub fn act_on_brauer(theta: &BrauerCharacter, over: &FiniteGroup, g: usize) -> Result<BrauerCharacter> {
    let m = class_action(&theta.group, over, g)?;
    let classes = theta.classes();
    let values = classes
        .iter()
        .map(|&c| {
            let t = m[c];
            let i = classes.iter().position(|&k| k == t).expect("conjugation preserves ℓ-regularity");
            theta.values[i].clone()
        })
        .collect();
    Ok(BrauerCharacter { group: theta.group.clone(), ell: theta.ell, values })
}

/// `θ^φ = θ ∘ φ⁻¹` for an automorphism; with `φ(x) = g⁻¹xg` this agrees with [`act_on_brauer`].
pub fn act_by_automorphism(theta: &BrauerCharacter, phi: &GroupMap) -> Result<BrauerCharacter> {
    if !phi.is_automorphism() {
        return Err(Error::Structure("map is not an automorphism".into()));
    }
    let inv = phi.inverse().ok_or_else(|| Error::Structure("map is not invertible".into()))?;
    let g = &theta.group;
    let classes = theta.classes();
    let values = classes
        .iter()
        .map(|&c| {
            let y = inv.apply(g.conjugacy_classes()[c].rep);
            let t = g.class_of(y);
            theta.values[classes.iter().position(|&k| k == t).expect("automorphisms preserve ℓ-regularity")].clone()
        })
        .collect();
    Ok(BrauerCharacter { group: g.clone(), ell: theta.ell, values })
}

/// Restriction of a Brauer character to a subgroup on the same points.
pub fn restrict_brauer(chi: &BrauerCharacter, h: &Group) -> Result<BrauerCharacter> {
    let f = crate::chartab::fusion(h, &chi.group)?;
    let big = chi.classes();
    let values = h
        .ell_regular_classes(chi.ell as u64)
        .iter()
        .map(|&c| chi.values[big.iter().position(|&k| k == f[c]).expect("regular classes fuse to regular classes")].clone())
        .collect();
    Ok(BrauerCharacter { group: h.clone(), ell: chi.ell, values })
}

/// Induction of a Brauer character from a subgroup, on the `ℓ`-regular classes.
pub fn induce_brauer(psi: &BrauerCharacter, g: &Group) -> Result<BrauerCharacter> {
    let h = &psi.group;
    let f = crate::chartab::fusion(h, g)?;
    let big = g.ell_regular_classes(psi.ell as u64);
    let mut acc = vec![CycloNumber::zero(1); big.len()];
    for (i, &c) in h.ell_regular_classes(psi.ell as u64).iter().enumerate() {
        let pos = big.iter().position(|&k| k == f[c]).expect("regular classes fuse to regular classes");
        let size = h.conjugacy_classes()[c].size;
        acc[pos] = &acc[pos] + &psi.values[i].scale(&BigRational::from_integer(BigInt::from(size)));
    }
    let values = acc
        .into_iter()
        .zip(&big)
        .map(|(v, &c)| v.scale(&BigRational::new(BigInt::from(g.order()), BigInt::from(h.order() * g.conjugacy_classes()[c].size))))
        .collect();
    Ok(BrauerCharacter { group: g.clone(), ell: psi.ell, values })
}

/// Multiplicity of `table.irr[theta]` in the restriction of `chi` to the table's group.
pub fn multiplicity_in_restriction(chi: &BrauerCharacter, table: &BrauerTable, theta: usize) -> Result<i64> {
    let r = restrict_brauer(chi, &table.group)?;
    let x = table.coordinates(&r.values).ok_or_else(|| Error::Consistency("restriction is not in the span of IBr".into()))?;
    x[theta].to_integer().to_i64().filter(|_| x[theta].is_integer()).ok_or_else(|| Error::Consistency("non-integral restriction multiplicity".into()))
}

/// `chi ∈ IBr(G | θ)`: `θ` is a constituent of the restriction.
pub fn lies_over(chi: &BrauerCharacter, table: &BrauerTable, theta: usize) -> Result<bool> {
    Ok(multiplicity_in_restriction(chi, table, theta)? > 0)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BrauerExport {
    pub group: String,
    pub order: usize,
    pub ell: u32,
    pub regular_classes: Vec<usize>,
    pub classes: Vec<ClassInfo>,
    pub characters: Vec<Vec<CycloNumber>>,
}

impl BrauerTable {
    pub fn export(&self) -> BrauerExport {
        BrauerExport {
            group: self.group.name().to_string(),
            order: self.group.order(),
            ell: self.ctx.ell,
            regular_classes: self.classes.clone(),
            classes: class_infos(&self.group, &self.classes),
            characters: self.irr.iter().map(|c| c.values.clone()).collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        table_tsv(&class_infos(&self.group, &self.classes), self.irr.iter().map(|c| c.values.as_slice()))
    }
}

/// Sum of value vectors with multiplicities (for checking a chop against a module).
pub fn weighted_sum(parts: &[(BrauerCharacter, usize)]) -> Vec<CycloNumber> {
    let n = parts.first().map_or(0, |p| p.0.values.len());
    (0..n)
        .map(|i| {
            parts.iter().fold(CycloNumber::zero(1), |acc, (c, k)| {
                &acc + &c.values[i].scale(&BigRational::from_integer(BigInt::from(*k)))
            })
        })
        .collect()
}
