//! Ordinary character tables by the Dixon–Schneider method, restriction,
//! induction, inner products and central characters.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::gf::{is_prime, Field, Fq};
use crate::group::{FiniteGroup, Group};
use crate::linalg::{poly_roots, Echelon, Mat};
use crate::perm::Perm;

/// Bound on the number of classes for table computation.
pub const MAX_CLASSES: usize = 200;

/// A class function on `G`, one value per conjugacy class.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub group: Group,
    pub values: Vec<CycloNumber>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, o: &Self) -> bool {
        self.values == o.values
    }
}

impl ClassFunction {
    pub fn new(group: &Group, values: Vec<CycloNumber>) -> ClassFunction {
        assert_eq!(values.len(), group.num_classes(), "one value per class");
        ClassFunction { group: group.clone(), values }
    }

    pub fn trivial(group: &Group) -> ClassFunction {
        let e = group.exponent() as u32;
        ClassFunction::new(group, vec![CycloNumber::one(e); group.num_classes()])
    }

    pub fn degree(&self) -> &CycloNumber {
        &self.values[0]
    }

    pub fn degree_i64(&self) -> i64 {
        self.values[0].to_i64().expect("degree is an integer")
    }

    /// Value at an element index.
    pub fn at(&self, g: usize) -> &CycloNumber {
        &self.values[self.group.class_of(g)]
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction::new(&self.group, self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn galois(&self, k: i64) -> ClassFunction {
        ClassFunction::new(&self.group, self.values.iter().map(|v| v.galois(k)).collect())
    }

    pub fn add(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction::new(&self.group, self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction::new(&self.group, self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect())
    }

    pub fn scale(&self, n: i64) -> ClassFunction {
        let c = CycloNumber::from_integer(1, n);
        ClassFunction::new(&self.group, self.values.iter().map(|v| v * &c).collect())
    }

    /// Whether every value is an algebraic integer and the degree a positive integer.
    pub fn looks_like_character(&self) -> bool {
        self.values.iter().all(|v| v.is_algebraic_integer()) && self.values[0].to_i64().is_some_and(|d| d > 0)
    }

    fn cmp_values(&self, o: &Self) -> Ordering {
        let d = self.degree_i64().cmp(&o.degree_i64());
        if d != Ordering::Equal {
            return d;
        }
        // the trivial character leads
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

/// `⟨φ, ψ⟩ = |G|⁻¹ Σ_g φ(g) ψ(g)‾`.
pub fn inner_product(phi: &ClassFunction, psi: &ClassFunction) -> CycloNumber {
    let g = &phi.group;
    let mut acc = CycloNumber::zero(1);
    for (c, cl) in g.conjugacy_classes().iter().enumerate() {
        let term = &phi.values[c] * &psi.values[c].conj();
        acc = &acc + &term.scale(&BigRational::from_integer(BigInt::from(cl.size)));
    }
    acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(g.order())))
}

/// Class map of a subgroup: class of `H` ↦ class of `G` containing it.
pub fn fusion(h: &FiniteGroup, g: &FiniteGroup) -> Result<Vec<usize>> {
    if !g.contains_group(h) {
        return Err(Error::Structure(format!("{} is not a subgroup of {}", h.name(), g.name())));
    }
    Ok(h.conjugacy_classes().iter().map(|c| g.class_of(g.index_of(h.element(c.rep)).expect("subgroup element"))).collect())
}

pub fn restrict(chi: &ClassFunction, h: &Group) -> Result<ClassFunction> {
    let f = fusion(h, &chi.group)?;
    Ok(ClassFunction::new(h, f.iter().map(|&c| chi.values[c].clone()).collect()))
}

/// `θ^G(g_t) = |G| / (|H| h_t) · Σ_{H-classes c ⊆ C_t} |c| θ(c)`.
pub fn induce(theta: &ClassFunction, g: &Group) -> Result<ClassFunction> {
    let h = &theta.group;
    let f = fusion(h, g)?;
    let mut vals = vec![CycloNumber::zero(1); g.num_classes()];
    for (c, cl) in h.conjugacy_classes().iter().enumerate() {
        let term = theta.values[c].scale(&BigRational::from_integer(BigInt::from(cl.size)));
        vals[f[c]] = &vals[f[c]] + &term;
    }
    let e = g.exponent() as u32;
    let vals = vals
        .into_iter()
        .zip(g.conjugacy_classes())
        .map(|(v, cl)| v.scale(&BigRational::new(BigInt::from(g.order()), BigInt::from(h.order() * cl.size))).promote_to_divisor(e))
        .collect();
    Ok(ClassFunction::new(g, vals))
}

/// Extension trait for bringing values into the group's standard conductor.
trait Promote {
    fn promote_to_divisor(self, e: u32) -> CycloNumber;
}

impl Promote for CycloNumber {
    fn promote_to_divisor(self, e: u32) -> CycloNumber {
        if e.is_multiple_of(self.conductor()) {
            self.promote(e)
        } else {
            self
        }
    }
}

/// For `g` in an overgroup normalizing `n` (same points): the class of
/// `g·x·g⁻¹` for each class `x` of `n`, so that `(θ^g)(x) = θ(g x g⁻¹)`.
pub fn class_action(n: &FiniteGroup, over: &FiniteGroup, g: usize) -> Result<Vec<usize>> {
    let gp = over.element(g);
    let gi = gp.inv();
    n.conjugacy_classes()
        .iter()
        .map(|c| {
            let y = gp.mul(n.element(c.rep)).mul(&gi);
            n.index_of(&y).map(|i| n.class_of(i)).ok_or_else(|| Error::Structure("element does not normalize the subgroup".into()))
        })
        .collect()
}

/// `θ^g` for `g` in an overgroup normalizing `θ`'s group.
pub fn conjugate(theta: &ClassFunction, over: &FiniteGroup, g: usize) -> Result<ClassFunction> {
    let m = class_action(&theta.group, over, g)?;
    Ok(ClassFunction::new(&theta.group, m.iter().map(|&c| theta.values[c].clone()).collect()))
}

/// The irreducible characters of a group with its class data.
#[derive(Debug)]
pub struct CharacterTable {
    pub group: Group,
    pub irr: Vec<ClassFunction>,
    /// The prime used by the modular Dixon–Schneider step.
    pub dixon_prime: u32,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.irr.len()
    }
    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }
    pub fn degrees(&self) -> Vec<i64> {
        self.irr.iter().map(|c| c.degree_i64()).collect()
    }

    /// Position of a class function in the table.
    pub fn position(&self, chi: &ClassFunction) -> Option<usize> {
        self.irr.iter().position(|x| x == chi)
    }

    /// Decompose a class function into irreducibles (exact inner products).
    pub fn decompose(&self, chi: &ClassFunction) -> Vec<CycloNumber> {
        self.irr.iter().map(|x| inner_product(chi, x)).collect()
    }
}

fn cache() -> &'static Mutex<HashMap<(usize, Vec<Perm>), Arc<CharacterTable>>> {
    static C: OnceLock<Mutex<HashMap<(usize, Vec<Perm>), Arc<CharacterTable>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Character table of `g`, memoized per generating set.
pub fn character_table(g: &Group) -> Result<Arc<CharacterTable>> {
    let key = (g.degree(), g.generators().to_vec());
    if let Some(t) = cache().lock().expect("table cache poisoned").get(&key) {
        if t.group.order() == g.order() {
            // same generators on the same points give the same element indexing
            return Ok(Arc::new(CharacterTable {
                group: g.clone(),
                irr: t.irr.iter().map(|c| ClassFunction::new(g, c.values.clone())).collect(),
                dixon_prime: t.dixon_prime,
            }));
        }
    }
    let t = Arc::new(dixon_schneider(g)?);
    cache().lock().expect("table cache poisoned").insert(key, t.clone());
    Ok(t)
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√n`.
fn dixon_prime(e: u64, n: u64) -> Result<u32> {
    let mut p = e + 1;
    loop {
        if p * p > 4 * n && is_prime(p) {
            return if p <= crate::gf::MAX_FIELD_SIZE { Ok(p as u32) } else { Err(Error::Resource { what: "Dixon prime", value: p, bound: crate::gf::MAX_FIELD_SIZE }) };
        }
        p += e;
    }
}

fn dixon_schneider(g: &Group) -> Result<CharacterTable> {
    let k = g.num_classes();
    if k > MAX_CLASSES {
        return Err(Error::Resource { what: "class count", value: k as u64, bound: MAX_CLASSES as u64 });
    }
    let n = g.order() as u64;
    let e = g.exponent();
    let p = dixon_prime(e, n)?;
    let f = Field::get(p, 1)?;
    let classes = g.conjugacy_classes();
    // N_r[t][s] = a_{rst}: central characters w satisfy w·N_r = ω_r w
    let class_mats: Vec<Mat> = (1..k)
        .map(|r| {
            let mut m = Mat::zeros(k, k);
            for (t, ct) in classes.iter().enumerate() {
                for &x in &classes[r].elements {
                    let y = g.mul(g.inv(x), ct.rep);
                    let s = g.class_of(y);
                    m.set(t, s, f.add(m.get(t, s), 1));
                }
            }
            m
        })
        .collect();
    let mut spaces: Vec<Echelon> = vec![{
        let mut e = Echelon::new(k);
        for i in 0..k {
            let mut v = vec![0; k];
            v[i] = 1;
            e.insert(&f, &v);
        }
        e
    }];
    for m in &class_mats {
        if spaces.iter().all(|s| s.rank() == 1) {
            break;
        }
        let mut next = Vec::new();
        for s in spaces {
            if s.rank() == 1 {
                next.push(s);
                continue;
            }
            next.extend(split_space(&f, &s, m));
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.rank() != 1) {
        return Err(Error::Internal("class matrices failed to split the class algebra".into()));
    }
    let inv_class: Vec<usize> = classes.iter().map(|c| g.class_of(g.inv(c.rep))).collect();
    // a fixed primitive e-th root of unity mod p stands for ζ_e
    let z = f.primitive_root_of_unity(e as u32)?;
    let mut irr = Vec::with_capacity(k);
    for s in &spaces {
        let row = &s.basis()[0];
        let w: Vec<Fq> = (0..k).map(|t| f.div(row[t], row[0])).collect();
        // Σ_t ω_t ω_{t*} / h_t = |G| / χ(1)²
        let mut sum = 0;
        for t in 0..k {
            sum = f.add(sum, f.div(f.mul(w[t], w[inv_class[t]]), f.from_int(classes[t].size as i64)));
        }
        let d2 = f.div(f.from_int(n as i64), sum);
        let deg = (1..=((n as f64).sqrt() as i64 + 1))
            .find(|&d| f.from_int(d * d) == d2)
            .ok_or_else(|| Error::Internal("no integer degree matches the Dixon norm".into()))?;
        let chi_p: Vec<Fq> = (0..k).map(|t| f.div(f.mul(w[t], f.from_int(deg)), f.from_int(classes[t].size as i64))).collect();
        let mut values = Vec::with_capacity(k);
        for t in 0..k {
            let rep = classes[t].rep;
            let o = g.elt_order(rep);
            let step = e / o;
            let zo = f.pow(z, step as i64);
            let mut counts = vec![0i64; e as usize];
            for j in 0..o {
                let mut m = 0;
                for i in 0..o {
                    let ci = g.class_of(g.pow(rep, i as i64));
                    m = f.add(m, f.mul(chi_p[ci], f.pow(zo, -((i * j) as i64))));
                }
                let m = f.div(m, f.from_int(o as i64));
                let mult = lift_small(&f, m, deg)?;
                counts[(j * step) as usize] = mult;
            }
            values.push(CycloNumber::from_root_counts(e as u32, &counts));
        }
        irr.push(ClassFunction::new(g, values));
    }
    irr.sort_by(|a, b| a.cmp_values(b));
    Ok(CharacterTable { group: g.clone(), irr, dixon_prime: p })
}

/// The integer in `[0, bound]` congruent to `x` in the prime field.
fn lift_small(f: &Field, x: Fq, bound: i64) -> Result<i64> {
    (0..=bound).find(|&m| f.from_int(m) == x).ok_or_else(|| Error::Internal("eigenvalue multiplicity out of range".into()))
}

/// Split a space (row vectors) into eigenspaces of `m` restricted to it.
fn split_space(f: &Field, s: &Echelon, m: &Mat) -> Vec<Echelon> {
    let d = s.rank();
    let mut a = Mat::zeros(d, d);
    for (i, b) in s.basis().iter().enumerate() {
        let img = crate::linalg::vec_mat(f, b, m);
        for (j, c) in s.coordinates(&img).into_iter().enumerate() {
            a.set(i, j, c);
        }
    }
    let cp = a.charpoly(f);
    let roots = poly_roots(f, &cp);
    let mut out = Vec::new();
    for lam in roots {
        let shifted = a.sub(f, &Mat::scalar(d, lam));
        let ns = shifted.left_nullspace(f);
        let mut e = Echelon::new(s.ambient_dim());
        for c in ns {
            let v = crate::linalg::vec_mat(f, &c, &s.to_mat());
            e.insert(f, &v);
        }
        out.push(e);
    }
    if out.iter().map(|e| e.rank()).sum::<usize>() != d {
        // not diagonalizable over F_p: keep unsplit (cannot happen for class algebras)
        return vec![s.clone()];
    }
    out
}

/// Central character: the `ν` on `Z` (or on `Z_{ℓ'}` when `ell` is given)
/// with `θ(z) = θ(1)·ν(z)`; returned as `(element, value)` pairs.
pub fn central_character<F>(group: &FiniteGroup, value_at: F, degree: i64, z: &[usize], ell: Option<u64>) -> Result<Vec<(usize, CycloNumber)>>
where
    F: Fn(usize) -> Option<CycloNumber>,
{
    let zc = group.center_set();
    if z.iter().any(|x| !zc.contains(x)) {
        return Err(Error::Structure("subgroup is not central".into()));
    }
    let inv_deg = BigRational::new(BigInt::from(1), BigInt::from(degree));
    z.iter()
        .filter(|&&x| ell.is_none_or(|l| num_integer::Integer::gcd(&group.elt_order(x), &l) == 1))
        .map(|&x| {
            let v = value_at(x).ok_or_else(|| Error::Domain("class function undefined on a central element".into()))?;
            Ok((x, v.scale(&inv_deg)))
        })
        .collect()
}

/// Class labels `1a, 2a, 2b, ...` in class order.
pub fn class_names(g: &FiniteGroup) -> Vec<String> {
    let mut seen: HashMap<u64, usize> = HashMap::new();
    g.conjugacy_classes()
        .iter()
        .map(|c| {
            let k = seen.entry(c.order).or_insert(0);
            let mut label = c.order.to_string();
            let mut idx = *k;
            let mut suffix = String::new();
            loop {
                suffix.insert(0, (b'a' + (idx % 26) as u8) as char);
                if idx < 26 {
                    break;
                }
                idx = idx / 26 - 1;
            }
            label.push_str(&suffix);
            *k += 1;
            label
        })
        .collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ClassInfo {
    pub name: String,
    pub rep: Vec<u32>,
    pub order: u64,
    pub size: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TableExport {
    pub group: String,
    pub order: usize,
    pub classes: Vec<ClassInfo>,
    pub characters: Vec<Vec<CycloNumber>>,
}

pub fn class_infos(g: &FiniteGroup, which: &[usize]) -> Vec<ClassInfo> {
    let names = class_names(g);
    which
        .iter()
        .map(|&i| {
            let c = &g.conjugacy_classes()[i];
            ClassInfo { name: names[i].clone(), rep: g.element(c.rep).images().to_vec(), order: c.order, size: c.size }
        })
        .collect()
}

impl CharacterTable {
    pub fn export(&self) -> TableExport {
        let all: Vec<usize> = (0..self.group.num_classes()).collect();
        TableExport {
            group: self.group.name().to_string(),
            order: self.group.order(),
            classes: class_infos(&self.group, &all),
            characters: self.irr.iter().map(|c| c.values.clone()).collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        let all: Vec<usize> = (0..self.group.num_classes()).collect();
        table_tsv(&class_infos(&self.group, &all), self.irr.iter().map(|c| c.values.as_slice()))
    }
}

/// TSV with a header of class names, a row of element orders, then one row per character.
pub fn table_tsv<'a>(classes: &[ClassInfo], rows: impl Iterator<Item = &'a [CycloNumber]>) -> String {
    let mut s = String::from("char");
    for c in classes {
        write!(s, "\t{}", c.name).unwrap();
    }
    s.push_str("\norder");
    for c in classes {
        write!(s, "\t{}", c.order).unwrap();
    }
    s.push('\n');
    for (i, row) in rows.enumerate() {
        write!(s, "X.{}", i + 1).unwrap();
        for v in row {
            write!(s, "\t{v}").unwrap();
        }
        s.push('\n');
    }
    s
}

/// Sum of squared degrees, as an exact check.
pub fn degree_square_sum(t: &CharacterTable) -> i64 {
    t.degrees().iter().map(|d| d * d).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn table(name: &str) -> Arc<CharacterTable> {
        character_table(&builtin(name).unwrap().group).unwrap()
    }

    fn check_orthogonality(t: &CharacterTable) {
        let one = CycloNumber::one(1);
        let zero = CycloNumber::zero(1);
        for (i, a) in t.irr.iter().enumerate() {
            assert!(a.looks_like_character());
            for (j, b) in t.irr.iter().enumerate() {
                let ip = inner_product(a, b);
                assert_eq!(ip, if i == j { one.clone() } else { zero.clone() });
            }
        }
        // column orthogonality: Σ_χ χ(g)χ(h)‾ = |C_G(g)| δ
        let g = &t.group;
        for (c, cl) in g.conjugacy_classes().iter().enumerate() {
            for d in 0..g.num_classes() {
                let s = t.irr.iter().fold(CycloNumber::zero(1), |acc, x| &acc + &(&x.values[c] * &x.values[d].conj()));
                let want = if c == d { (g.order() / cl.size) as i64 } else { 0 };
                assert_eq!(s, CycloNumber::from_integer(1, want));
            }
        }
        assert_eq!(degree_square_sum(t), g.order() as i64);
    }

    #[test]
    fn small_tables() {
        assert_eq!(table("C2").degrees(), vec![1, 1]);
        let t = table("C2");
        assert_eq!(t.irr[1].values[1].to_i64(), Some(-1));
        assert_eq!(table("S3").degrees(), vec![1, 1, 2]);
        assert_eq!(table("SL23").degrees(), vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(table("A5").degrees(), vec![1, 3, 3, 4, 5]);
        assert_eq!(table("C1").degrees(), vec![1]);
        for name in ["S3", "S4", "Q8", "D8", "SL23", "A5", "C6", "SL25", "GL23"] {
            check_orthogonality(&table(name));
        }
    }

    #[test]
    fn frobenius_reciprocity_and_induction() {
        let b = builtin("S3").unwrap();
        let s3 = b.group.clone();
        let a3 = b.normal_group("A3").unwrap();
        let t3 = character_table(&a3).unwrap();
        let triv = ClassFunction::trivial(&a3);
        let ind = induce(&triv, &s3).unwrap();
        let t = table("S3");
        assert_eq!(ind, t.irr[0].add(&t.irr[1]));
        for theta in &t3.irr {
            let up = induce(theta, &s3).unwrap();
            for chi in &t.irr {
                assert_eq!(inner_product(&up, chi), inner_product(theta, &restrict(chi, &a3).unwrap()));
            }
        }
        assert_eq!(restrict(&t.irr[0], &a3).unwrap(), ClassFunction::trivial(&a3));
    }

    #[test]
    fn central_character_of_q8() {
        let b = builtin("Q8").unwrap();
        let t = table("Q8");
        let faithful = t.irr.iter().find(|c| c.degree_i64() == 2).unwrap();
        let z = b.normal("Z").unwrap();
        let nu = central_character(&b.group, |x| Some(faithful.at(x).clone()), 2, z, None).unwrap();
        let minus = nu.iter().find(|(x, _)| *x != 0).unwrap();
        assert_eq!(minus.1.to_i64(), Some(-1));
        let triv = central_character(&b.group, |x| Some(t.irr[0].at(x).clone()), 1, z, None).unwrap();
        assert!(triv.iter().all(|(_, v)| v.to_i64() == Some(1)));
    }

    #[test]
    fn conjugation_permutes_rows() {
        let b = builtin("SL23_semi_C2").unwrap();
        let n = b.normal_group("SL23").unwrap();
        let t = character_table(&n).unwrap();
        for &g in b.group.gen_indices() {
            let mut perm: Vec<usize> = t.irr.iter().map(|chi| t.position(&conjugate(chi, &b.group, g).unwrap()).expect("row")).collect();
            perm.sort_unstable();
            assert_eq!(perm, (0..t.len()).collect::<Vec<_>>());
        }
    }
}
