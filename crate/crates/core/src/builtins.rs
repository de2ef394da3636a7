//! Named desk-scale groups with designated normal subgroups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::group::{DirectProduct, FiniteGroup, Group, GroupMap, SemidirectProduct};
use crate::perm::Perm;

/// A group with named normal subgroups (as sorted element sets) and, for
/// action instances `Z ⋊ A`, the automorphisms of `Z` induced by the
/// generators of `A`.
#[derive(Debug)]
pub struct Builtin {
    pub name: String,
    pub group: Group,
    pub normals: Vec<(String, Vec<usize>)>,
    pub action: Option<ActionInstance>,
}

#[derive(Debug, Clone)]
pub struct ActionInstance {
    pub target: Group,
    pub automorphisms: Vec<GroupMap>,
}

impl Builtin {
    pub fn normal(&self, name: &str) -> Result<&[usize]> {
        self.normals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
            .ok_or_else(|| Error::Usage(format!("{} has no normal subgroup named {name:?}", self.name)))
    }

    pub fn normal_group(&self, name: &str) -> Result<Group> {
        let set = self.normal(name)?;
        Ok(Arc::new(self.group.subgroup_from_set(name.to_string(), set)))
    }
}

pub const NAMES: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "S3", "S4", "A4", "A5", "V4", "Q8", "D8", "SL23", "SL25", "GL23",
    "Q8_semi_C3", "SL23_semi_C2", "SL25_semi_C2", "S4xC1", "S4xC2", "S4xC3", "S4xC4", "S4xC5", "S4xC6", "S3_on_C2xC2",
    "D8_on_C3xC3", "G128",
];

/// Names of all builtins (cyclic groups `Cn` are accepted for any `n ≥ 1`).
pub fn builtin_names() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Look up (and cache) a builtin by name.
pub fn builtin(name: &str) -> Result<Arc<Builtin>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Builtin>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("builtin cache poisoned").get(name) {
        return Ok(b.clone());
    }
    let b = Arc::new(build(name)?);
    cache.lock().expect("builtin cache poisoned").insert(name.to_string(), b.clone());
    Ok(b)
}

fn plain(name: &str, g: FiniteGroup, normals: Vec<(String, Vec<usize>)>) -> Builtin {
    Builtin { name: name.into(), group: Arc::new(g.with_name(name)), normals, action: None }
}

fn build(name: &str) -> Result<Builtin> {
    if let Some(rest) = name.strip_prefix("S4xC") {
        let a: usize = rest.parse().map_err(|_| Error::Usage(format!("unknown builtin {name:?}")))?;
        if !(1..=6).contains(&a) {
            return Err(Error::Usage(format!("S4xCa needs 1 ≤ a ≤ 6, got {a}")));
        }
        let dp = s4_times_cyclic(a)?;
        let left: Vec<usize> = (0..24).map(|x| dp.pair(x, 0)).collect();
        let right: Vec<usize> = (0..a).map(|y| dp.pair(0, y)).collect();
        let g = Arc::try_unwrap(dp.group).unwrap_or_else(|g| clone_group(&g));
        return Ok(plain(name, g, vec![("S4".into(), sorted(left)), (format!("C{a}"), sorted(right))]));
    }
    if let Some(rest) = name.strip_prefix('C') {
        if let Ok(n) = rest.parse::<usize>() {
            if n == 0 {
                return Err(Error::Usage("C0 is not a group".into()));
            }
            let g = cyclic(n);
            return Ok(plain(name, g, vec![]));
        }
    }
    match name {
        "S3" => {
            let g = sym(3)?;
            let a3 = even_part(&g);
            Ok(plain(name, g, vec![("A3".into(), a3)]))
        }
        "S4" => {
            let g = sym(4)?;
            let a4 = even_part(&g);
            let v4 = v4_in(&g);
            Ok(plain(name, g, vec![("A4".into(), a4), ("V4".into(), v4)]))
        }
        "A4" => {
            let g = FiniteGroup::new(name, 4, vec![Perm::from_cycles(4, &[&[0, 1, 2]]), Perm::from_cycles(4, &[&[0, 1], &[2, 3]])])?;
            let v4 = v4_in(&g);
            Ok(plain(name, g, vec![("V4".into(), v4)]))
        }
        "A5" => {
            let g = FiniteGroup::new(name, 5, vec![Perm::from_cycles(5, &[&[0, 1, 2]]), Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]])])?;
            Ok(plain(name, g, vec![]))
        }
        "V4" => {
            let g = FiniteGroup::new(name, 4, vec![Perm::from_cycles(4, &[&[0, 1], &[2, 3]]), Perm::from_cycles(4, &[&[0, 2], &[1, 3]])])?;
            Ok(plain(name, g, vec![]))
        }
        "D8" => {
            let g = FiniteGroup::new(name, 4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 2]])])?;
            let r = g.index_of(&Perm::from_cycles(4, &[&[0, 1, 2, 3]])).unwrap();
            let c4 = g.closure(&[r]);
            let z = g.center_set();
            Ok(plain(name, g, vec![("C4".into(), c4), ("Z".into(), z)]))
        }
        "Q8" => {
            let g = quaternion()?;
            let z = g.center_set();
            Ok(plain(name, g, vec![("Z".into(), z)]))
        }
        "SL23" | "SL25" => {
            let q = if name == "SL23" { 3 } else { 5 };
            let g = special_linear(q)?;
            let z = g.center_set();
            let mut normals = vec![("Z".into(), z)];
            if q == 3 {
                normals.push(("Q8".into(), two_power_part(&g)));
            }
            Ok(plain(name, g, normals))
        }
        "GL23" => {
            let f = Field::get(3, 1)?;
            let mut gens = sl2_generators(&f);
            gens.push(vec_perm(&f, [[f.from_int(-1), 0], [0, 1]]));
            let g = FiniteGroup::new(name, 8, gens)?;
            let sl: Vec<usize> = (0..g.order()).filter(|&x| det_of(&f, &g, x) == 1).collect();
            let z = g.center_set();
            let sl_g = g.subgroup_from_set("SL23", &sl);
            let q8: Vec<usize> = two_power_part(&sl_g).iter().map(|&x| g.index_of(sl_g.element(x)).unwrap()).collect();
            Ok(plain(name, g, vec![("SL23".into(), sl), ("Z".into(), z), ("Q8".into(), sorted(q8))]))
        }
        "Q8_semi_C3" => {
            let q8 = Arc::new(quaternion()?);
            let c3 = Arc::new(cyclic(3));
            let (i, j) = (q8.gen_indices()[0], q8.gen_indices()[1]);
            // i ↦ j ↦ k = ij
            let aut = GroupMap::from_generator_images(&q8, &q8, &[j, q8.mul(i, j)])?;
            let sd = SemidirectProduct::new(&q8, &c3, &[aut])?;
            let k = sd.k_set();
            let g = clone_group(&sd.group);
            Ok(plain(name, g, vec![("Q8".into(), k)]))
        }
        "SL23_semi_C2" | "SL25_semi_C2" => {
            let q = if name == "SL23_semi_C2" { 3 } else { 5 };
            let f = Field::get(q, 1)?;
            let sl = Arc::new(special_linear(q)?);
            // outer involution: conjugation by t, with t² scalar
            let t = if q == 3 { [[f.from_int(-1), 0], [0, 1]] } else { [[0, 1], [f.from_int(2), 0]] };
            let tp = vec_perm(&f, t);
            let ti = tp.inv();
            let images: Vec<usize> = sl.elements().iter().map(|x| sl.index_of(&ti.mul(x).mul(&tp)).expect("t normalizes SL2")).collect();
            let aut = GroupMap::from_images(&sl, &sl, images)?;
            let c2 = Arc::new(cyclic(2));
            let sd = SemidirectProduct::new(&sl, &c2, &[aut])?;
            let k = sd.k_set();
            let label = if q == 3 { "SL23" } else { "SL25" };
            let zk: Vec<usize> = sorted(sl.center_set().iter().map(|&z| sd.pair(z, 0)).collect());
            let g = clone_group(&sd.group);
            let mut normals = vec![(label.to_string(), k), ("Z".into(), zk)];
            if q == 3 {
                let q8: Vec<usize> = sorted(two_power_part(&sl).iter().map(|&x| sd.pair(x, 0)).collect());
                normals.push(("Q8".into(), q8));
            }
            Ok(plain(name, g, normals))
        }
        "S3_on_C2xC2" => action_instance(name, 2),
        "D8_on_C3xC3" => action_instance(name, 3),
        "G128" => group_128(),
        _ => Err(Error::Usage(format!("unknown builtin {name:?}; known: {}", NAMES.join(", ")))),
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn clone_group(g: &FiniteGroup) -> FiniteGroup {
    FiniteGroup::with_bound(g.name(), g.degree(), g.generators().to_vec(), u64::MAX).expect("rebuild")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let im: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    FiniteGroup::new(format!("C{n}"), n, vec![Perm::from_images(im).unwrap()]).expect("cyclic group")
}

fn sym(n: usize) -> Result<FiniteGroup> {
    let cyc: Vec<u32> = (0..n as u32).collect();
    FiniteGroup::new(format!("S{n}"), n, vec![Perm::from_cycles(n, &[&cyc]), Perm::from_cycles(n, &[&[0, 1]])])
}

fn even_part(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| g.element(x).cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0)
        .collect()
}

fn v4_in(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order()).filter(|&x| g.elt_order(x) <= 2 && g.element(x).cycles().iter().all(|c| c.len() == 2) && g.element(x).cycles().len() != 1).collect()
}

fn two_power_part(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order()).filter(|&x| g.elt_order(x).is_power_of_two()).collect()
}

fn quaternion() -> Result<FiniteGroup> {
    // units ±1, ±i, ±j, ±k encoded as sign·4 + unit; unit 0..3 = 1, i, j, k
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        const T: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        T[a][b]
    };
    let table: Vec<Vec<usize>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (neg, u) = unit_mul(x % 4, y % 4);
                    let sign = (x / 4 + y / 4 + neg as usize) % 2;
                    sign * 4 + u
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_multiplication("Q8", &table, &[1, 2])
}

/// Index of the nonzero row vector `(a, b)` among the `q² - 1` points.
fn vec_index(f: &Field, a: u32, b: u32) -> u32 {
    let q = f.size();
    f.encoding(a) * q + f.encoding(b) - 1
}

/// Permutation of nonzero row vectors induced by `v ↦ v·M` for prime `q`.
fn vec_perm(f: &Field, m: [[u32; 2]; 2]) -> Perm {
    let q = f.size();
    let mut im = vec![0; (q * q - 1) as usize];
    for a in 0..q {
        for b in 0..q {
            if a == 0 && b == 0 {
                continue;
            }
            let (x, y) = (f.from_encoding(a), f.from_encoding(b));
            let nx = f.add(f.mul(x, m[0][0]), f.mul(y, m[1][0]));
            let ny = f.add(f.mul(x, m[0][1]), f.mul(y, m[1][1]));
            im[vec_index(f, x, y) as usize] = vec_index(f, nx, ny);
        }
    }
    Perm::from_images(im).expect("invertible matrix")
}

fn sl2_generators(f: &Field) -> Vec<Perm> {
    vec![vec_perm(f, [[1, 1], [0, 1]]), vec_perm(f, [[0, 1], [f.from_int(-1), 0]])]
}

fn special_linear(q: u32) -> Result<FiniteGroup> {
    let f = Field::get(q, 1)?;
    FiniteGroup::new(format!("SL2{q}"), (q * q - 1) as usize, sl2_generators(&f))
}

/// Determinant of the matrix whose vector action is element `x` of `g`.
fn det_of(f: &Field, g: &FiniteGroup, x: usize) -> u32 {
    let p = g.element(x);
    let e1 = p.apply(vec_index(f, 1, 0));
    let e2 = p.apply(vec_index(f, 0, 1));
    let q = f.size();
    let row = |i: u32| {
        let k = i + 1;
        (f.from_encoding(k / q), f.from_encoding(k % q))
    };
    let (a, b) = row(e1);
    let (c, d) = row(e2);
    f.sub(f.mul(a, d), f.mul(b, c))
}

fn s4_times_cyclic(a: usize) -> Result<DirectProduct> {
    let s4 = Arc::new(sym(4)?);
    let ca = Arc::new(cyclic(a));
    DirectProduct::new(&s4, &ca)
}

/// `F_p² ⋊ A` for `A = GL_2(2)` (p = 2) or `A = ⟨diag(1,-1), swap⟩ ≅ D_8` (p = 3).
fn action_instance(name: &str, p: u32) -> Result<Builtin> {
    let f = Field::get(p, 1)?;
    let cp = Arc::new(cyclic(p as usize));
    let dp = DirectProduct::new(&cp, &cp)?;
    let z = dp.group.clone();
    // element (a, b) of Z = C_p × C_p ↔ vector a·e1 + b·e2 (generator of C_p ↔ 1)
    let gen = cp.gen_indices()[0];
    let coord = |x: usize| -> (u32, u32) {
        let (a, b) = dp.split(x);
        let log = |y: usize| (0..p).find(|&k| cp.pow(gen, k as i64) == y).unwrap();
        (log(a), log(b))
    };
    let elem = |a: u32, b: u32| dp.pair(cp.pow(gen, a as i64), cp.pow(gen, b as i64));
    let mats: Vec<[[u32; 2]; 2]> = if p == 2 {
        vec![[[0, 1], [1, 1]], [[0, 1], [1, 0]]]
    } else {
        vec![[[1, 0], [0, f.from_int(-1)]], [[0, 1], [1, 0]]]
    };
    let mut auts = Vec::new();
    for m in &mats {
        let images: Vec<usize> = (0..z.order())
            .map(|x| {
                let (a, b) = coord(x);
                let (fa, fb) = (f.from_int(a as i64), f.from_int(b as i64));
                let na = f.add(f.mul(fa, m[0][0]), f.mul(fb, m[1][0]));
                let nb = f.add(f.mul(fa, m[0][1]), f.mul(fb, m[1][1]));
                elem(f.encoding(na), f.encoding(nb))
            })
            .collect();
        auts.push(GroupMap::from_images(&z, &z, images)?);
    }
    // acting group as permutations of Z's elements
    let acting_gens: Vec<Perm> = auts.iter().map(|a| Perm::from_images(a.images().iter().map(|&v| v as u32).collect()).unwrap()).collect();
    let acting = Arc::new(FiniteGroup::new(if p == 2 { "S3" } else { "D8" }, z.order(), acting_gens)?);
    let action: Vec<GroupMap> = acting
        .generators()
        .iter()
        .map(|g| GroupMap::from_images(&z, &z, g.images().iter().map(|&v| v as usize).collect()))
        .collect::<Result<_>>()?;
    let sd = SemidirectProduct::new(&z, &acting, &action)?;
    let k = sd.k_set();
    let g = clone_group(&sd.group);
    Ok(Builtin {
        name: name.into(),
        group: Arc::new(g.with_name(name)),
        normals: vec![("Z".into(), k)],
        action: Some(ActionInstance { target: z, automorphisms: auts }),
    })
}

/// Order-128 group of tuples `(a, u, s, c)`, `a, u, c ∈ Z/4`, `s ∈ Z/2`, with
/// `(a,u,s,c)(a',u',s',c') = (a+a', u+u', s+s', c+c'+a·u'+2a·s')`.
fn group_128() -> Result<Builtin> {
    let enc = |a: usize, u: usize, s: usize, c: usize| ((a * 4 + u) * 2 + s) * 4 + c;
    let dec = |x: usize| (x / 32, (x / 8) % 4, (x / 4) % 2, x % 4);
    let table: Vec<Vec<usize>> = (0..128)
        .map(|x| {
            let (a, u, s, c) = dec(x);
            (0..128)
                .map(|y| {
                    let (a2, u2, s2, c2) = dec(y);
                    enc((a + a2) % 4, (u + u2) % 4, (s + s2) % 2, (c + c2 + a * u2 + 2 * a * s2) % 4)
                })
                .collect()
        })
        .collect();
    let g = FiniteGroup::from_multiplication("G128", &table, &[enc(1, 0, 0, 0), enc(0, 1, 0, 0), enc(0, 0, 1, 0), enc(0, 0, 0, 1)])?;
    // in the right regular representation an element is determined by the image of point 0
    let idx = |t: usize| (0..g.order()).find(|&i| g.element(i).apply(0) as usize == t).unwrap();
    let set = |pred: &dyn Fn(usize, usize, usize) -> bool| -> Vec<usize> {
        sorted((0..128).filter(|&t| { let (a, u, s, _) = dec(t); pred(a, u, s) }).map(idx).collect())
    };
    let normals = vec![
        ("N".to_string(), set(&|a, u, s| a == 0 && u == 0 && s == 0)),
        ("K1".to_string(), set(&|_, u, s| u == 0 && s == 0)),
        ("K2".to_string(), set(&|a, u, _| a == 0 && u == 0)),
        ("U2".to_string(), set(&|a, _, s| a == 0 && s == 0)),
        ("K1K2".to_string(), set(&|_, u, _| u == 0)),
    ];
    Ok(plain("G128", g, normals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::are_isomorphic;

    #[test]
    fn orders() {
        for (n, o) in [("A5", 60), ("SL23", 24), ("SL25", 120), ("GL23", 48), ("SL23_semi_C2", 48), ("S4xC6", 144), ("Q8", 8), ("D8", 8), ("G128", 128), ("S3_on_C2xC2", 24), ("D8_on_C3xC3", 72)] {
            assert_eq!(builtin(n).unwrap().group.order(), o, "{n}");
        }
        assert_eq!(builtin("SL25").unwrap().normal("Z").unwrap().len(), 2);
        assert_eq!(builtin("SL25_semi_C2").unwrap().group.order(), 240);
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn isomorphism_checks() {
        let sl23 = builtin("SL23").unwrap().group.clone();
        assert!(are_isomorphic(&builtin("Q8_semi_C3").unwrap().group, &sl23).unwrap());
        assert!(are_isomorphic(&builtin("SL23_semi_C2").unwrap().group, &builtin("GL23").unwrap().group).unwrap());
        // the action instance for p = 2 is C2² ⋊ GL2(2) ≅ S4
        assert!(are_isomorphic(&builtin("S3_on_C2xC2").unwrap().group, &builtin("S4").unwrap().group).unwrap());
        assert_eq!(builtin("SL23").unwrap().normal("Q8").unwrap().len(), 8);
        let b = builtin("G128").unwrap();
        for (n, size) in [("N", 4), ("K1", 16), ("K2", 8), ("U2", 16), ("K1K2", 32)] {
            let s = b.normal(n).unwrap();
            assert_eq!(s.len(), size);
            assert_eq!(b.group.closure(s), s.to_vec(), "{n} closed");
        }
        // N is central
        let z = b.group.center_set();
        assert!(b.normal("N").unwrap().iter().all(|x| z.contains(x)));
    }
}
