//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Every criterion is also held to its wall-clock budget. Oracles here are
//! written against matrices and character values directly, not against the
//! library's own verifiers.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rayon::prelude::*;

use brauer_triples::builtins::{builtin, NAMES};
use brauer_triples::chartab::character_table;
use brauer_triples::clifford::{
    automorphism_closure, extend_character, linear_characters_of_quotient, linear_difference_in, make_triple, stabilizer_of_character,
};
use brauer_triples::fakegal::{
    brute_force_m_approx, check_m_approx, orbit_stabilizer_cyclicity, verify_fake_galois, verify_witness, Admissibility, CandidateRecipe,
    FakeGaloisOptions, FakeGaloisSession,
};
use brauer_triples::gf::Fq;
use brauer_triples::goursat::check_corollary_s4;
use brauer_triples::group::Group;
use brauer_triples::linalg::Mat;
use brauer_triples::modrep::{
    act_on_brauer, brauer_character, chop, decomposition_matrix, irr_brauer, irr_brauer_in, lies_over, BrauerTable, MatrixRep, ModularContext,
    SourceModule,
};
use brauer_triples::projrep::{associated_projective, glue, glue_iterated, Glued, ProjectiveRep};
use brauer_triples::{Error, Result};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Result<Outcome>);
    let criteria: [Criterion; 9] = [
        (1, "Goursat audit of S4 x C_a", 60, criterion_1),
        (2, "stabilizers of characters of C2^2 and C3^2", 1, criterion_2),
        (3, "Brauer tables and decomposition matrices", 300, criterion_3),
        (4, "cocycle soundness", 120, criterion_4),
        (5, "glue factor-set formula", 60, criterion_5),
        (6, "fake Galois actions on SL(2,3) and SL(2,5)", 600, criterion_6),
        (7, "m-approximation solver vs brute force", 120, criterion_7),
        (8, "linear differences over abelian quotients", 60, criterion_8),
        (9, "negative controls", 60, criterion_9),
    ];
    let only: Option<u32> = std::env::var("BT_ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let (ok, detail) = match res {
            Ok(Ok(o)) => (o.ok, o.detail),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(p) => (false, format!("panic: {}", p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())),
        };
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        let over = if in_time { String::new() } else { " OVER BUDGET".into() };
        println!("criterion {n} ({name}): {} [{:.1}s / {budget}s{over}] {detail}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn normal_of(name: &str, normal: &str) -> Result<(Group, Group)> {
    let b = builtin(name)?;
    Ok((b.group.clone(), b.normal_group(normal)?))
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1() -> Result<Outcome> {
    let mut per_a = Vec::new();
    let mut total = 0;
    let mut examples = Vec::new();
    for a in 1..=6 {
        let r = check_corollary_s4(a)?;
        total += r.subgroups;
        per_a.push(format!("a={a}: {}/{}", r.failures, r.subgroups));
        for rec in r.records.iter().filter(|x| !x.reconstruction_ok || !x.witness_checked || x.v4_normal == Some(false)).take(1) {
            examples.push(format!("a={a} U#{} order {} G1={} G2={}", rec.subgroup_id, rec.order, rec.g1_type, rec.g2_type));
        }
    }
    let ok = examples.is_empty();
    let mut detail = format!("{total} subgroups; failures {}", per_a.join(", "));
    if !ok {
        detail.push_str(&format!("; e.g. {}", examples.join("; ")));
    }
    outcome(ok, detail)
}

// ---------------------------------------------------------------- criterion 2

fn criterion_2() -> Result<Outcome> {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, acting_order, stab_bound) in [("S3_on_C2xC2", 6usize, 2usize), ("D8_on_C3xC3", 8, 8)] {
        let b = builtin(name)?;
        let inst = b.action.as_ref().ok_or_else(|| Error::Usage(format!("{name} has no action")))?;
        let closure = automorphism_closure(&inst.automorphisms)?;
        let rep = orbit_stabilizer_cyclicity(&inst.automorphisms)?;
        let nontrivial: Vec<_> = rep.iter().filter(|r| !r.trivial).collect();
        let all_cyclic = nontrivial.iter().all(|r| r.cyclic && r.stabilizer_order <= stab_bound);
        // orbit counting: Σ|Stab(ν)| is |A| times the number of orbits
        let burnside = rep.iter().map(|r| r.stabilizer_order).sum::<usize>() % closure.len() == 0;
        let faithful = closure.len() == acting_order && rep.len() == inst.target.order();
        ok &= all_cyclic && burnside && faithful;
        let orders: BTreeMap<usize, usize> = nontrivial.iter().fold(BTreeMap::new(), |mut m, r| {
            *m.entry(r.stabilizer_order).or_insert(0) += 1;
            m
        });
        detail.push(format!("{name}: |A|={} nontrivial ν={} stabilizer orders {:?} all cyclic={all_cyclic}", closure.len(), nontrivial.len(), orders));
    }
    outcome(ok, detail.join("; "))
}

// ---------------------------------------------------------------- criterion 3

/// Rank over Q by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Degrees of the distinct composition factors of the regular module.
fn regular_chop_degrees(g: &Group, ell: u32) -> Result<Vec<i64>> {
    let ctx = ModularContext::for_group(g, ell, 0)?;
    let reg = MatrixRep::regular_module(g, &ctx.field);
    let mut seen = Vec::new();
    for (rep, _) in chop(&reg, 7)? {
        let chi = brauer_character(&rep, &ctx)?;
        if !seen.contains(&chi) {
            seen.push(chi);
        }
    }
    let mut d: Vec<i64> = seen.iter().map(|c| c.degree()).collect();
    d.sort();
    Ok(d)
}

fn criterion_3() -> Result<Outcome> {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for name in NAMES {
        let g = builtin(name)?.group.clone();
        for ell in [2u32, 3, 5, 7] {
            if ell as usize > g.order() {
                continue;
            }
            pairs += 1;
            let t = irr_brauer(&g, ell, 0)?;
            let regular = g.ell_regular_classes(ell as u64).len();
            let ct = character_table(&g)?;
            let d = decomposition_matrix(&ct, &t)?;
            let nonneg = d.rows.iter().flatten().all(|&x| x >= 0);
            let full = integer_rank(&d.rows) == t.len();
            if t.len() != regular || !nonneg || !full || d.rows.len() != g.num_classes() {
                bad.push(format!("{name}@{ell}: |IBr|={} regular={regular} nonneg={nonneg} full={full}", t.len()));
            }
        }
    }
    let a5 = builtin("A5")?.group.clone();
    let mut a5_deg = irr_brauer(&a5, 2, 0)?.degrees();
    a5_deg.sort();
    let a5_oracle = regular_chop_degrees(&a5, 2)?;
    let sl = builtin("SL23")?.group.clone();
    let mut sl_deg = irr_brauer(&sl, 2, 0)?.degrees();
    sl_deg.sort();
    let degrees_ok = a5_deg == [1, 2, 2, 4] && a5_oracle == a5_deg && sl_deg == [1, 1, 1];
    if !degrees_ok {
        bad.push(format!("A5@2 {a5_deg:?} (regular chop {a5_oracle:?}), SL23@2 {sl_deg:?}"));
    }
    let ok = bad.is_empty();
    outcome(ok, format!("{pairs} (G, ℓ) pairs; A5@2 degrees {a5_deg:?} = regular chop; SL23@2 degrees {sl_deg:?}{}", if ok { String::new() } else { format!("; bad: {}", bad.join("; ")) }))
}

// ---------------------------------------------------------------- criterion 4

fn scalar_between(f: &brauer_triples::gf::Field, a: &Mat, b: &Mat) -> Option<Fq> {
    let (i, &bv) = b.data().iter().enumerate().find(|(_, &x)| x != f.zero())?;
    let s = f.div(a.data()[i], bv);
    (a.data().iter().zip(b.data()).all(|(&x, &y)| x == f.mul(s, y))).then_some(s)
}

/// Exhaustive check on group elements: `P(x)P(y) = α(x,y)P(xy)`, the 2-cocycle
/// identity on all triples, and `α(x,n) = α(n,x) = 1` for `n ∈ N`. Returns `α`
/// on element pairs.
fn check_projective(p: &ProjectiveRep) -> std::result::Result<Vec<Fq>, String> {
    let g = &p.group;
    let f = p.field();
    let o = g.order();
    let imgs: Vec<Mat> = (0..o).map(|x| p.eval(x)).collect();
    let in_n: HashSet<usize> = g.embed(&p.normal).map_err(|e| e.to_string())?.into_iter().collect();
    let mut alpha = vec![f.zero(); o * o];
    for x in 0..o {
        for y in 0..o {
            let s = scalar_between(f, &imgs[x].mul(f, &imgs[y]), &imgs[g.mul(x, y)]).ok_or_else(|| format!("P({x})P({y}) not a multiple of P(xy)"))?;
            if (in_n.contains(&x) || in_n.contains(&y)) && s != f.one() {
                return Err(format!("not normalized at ({x}, {y})"));
            }
            alpha[x * o + y] = s;
        }
    }
    for x in 0..o {
        for y in 0..o {
            let xy = g.mul(x, y);
            for z in 0..o {
                let lhs = f.mul(alpha[x * o + y], alpha[xy * o + z]);
                let rhs = f.mul(alpha[x * o + g.mul(y, z)], alpha[y * o + z]);
                if lhs != rhs {
                    return Err(format!("cocycle identity fails at ({x}, {y}, {z})"));
                }
            }
        }
    }
    Ok(alpha)
}

fn criterion_4() -> Result<Outcome> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in NAMES {
        let b = builtin(name)?;
        let g = b.group.clone();
        if g.order() > 200 {
            continue;
        }
        for (nn, _) in &b.normals {
            let n = b.normal_group(nn)?;
            for ell in [2u32, 3, 5, 7] {
                if ell as usize > g.order() {
                    continue;
                }
                let ctx = ModularContext::for_group(&g, ell, 0)?;
                let table = irr_brauer_in(&n, &ctx, SourceModule::SylowCosets)?;
                for theta in 0..table.len() {
                    let t = make_triple(&g, &table, theta)?;
                    let p = associated_projective(&t)?;
                    checked += 1;
                    if let Err(e) = check_projective(&p) {
                        bad.push(format!("associated {name}/{nn}@{ell} θ{theta}: {e}"));
                    }
                }
            }
        }
    }
    let mut glued = 0;
    for inst in glue_instances()? {
        for (i, step) in inst.steps.iter().enumerate() {
            glued += 1;
            if let Err(e) = check_projective(&step.rep) {
                bad.push(format!("glue {} step {i}: {e}", inst.name));
            }
        }
    }
    let ok = bad.is_empty();
    outcome(ok, format!("{checked} associated and {glued} glued projective representations{}", if ok { String::new() } else { format!("; bad: {}", bad.join("; ")) }))
}

// ---------------------------------------------------------------- criterion 5

struct GlueInstance {
    name: String,
    steps: Vec<Glued>,
    two_step: bool,
}

/// `H = Q8`, `H₁ = SL(2,3)`, `H₂ = ⟨Q8, t⟩` for some `t ∉ SL(2,3)` with `t² ∈ Q8`.
fn sl23_shape(name: &str, ell: u32) -> Result<GlueInstance> {
    let (g, q8) = normal_of(name, "Q8")?;
    let sl = builtin(name)?.normal_group("SL23")?;
    let ctx = ModularContext::for_group(&g, ell, 0)?;
    let table = irr_brauer_in(&q8, &ctx, SourceModule::SylowCosets)?;
    let theta = table.irr.iter().position(|c| c.degree() == 2).ok_or_else(|| Error::Structure("no degree-2 character of Q8".into()))?;
    let q8_in = g.embed(&q8)?;
    let sl_in = g.embed(&sl)?;
    let t = (0..g.order()).find(|&x| !sl_in.contains(&x) && q8_in.contains(&g.mul(x, x))).ok_or_else(|| Error::Structure("no t".into()))?;
    let mut gens = q8_in.clone();
    gens.push(t);
    let h2: Group = Arc::new(g.subgroup("H2", &gens));
    let d1 = extend_character(&make_triple(&sl, &table, theta)?)?.rep;
    let p2 = associated_projective(&make_triple(&h2, &table, theta)?)?;
    Ok(GlueInstance { name: format!("{name}@{ell} H1=SL23 H2=Q8.{}", h2.order() / 8), steps: vec![glue(&d1, &p2, &g)?], two_step: false })
}

/// A Brauer character of `N` on which a central element of order 4 acts faithfully.
fn faithful_on_center(table: &BrauerTable) -> Result<usize> {
    let f = &table.ctx.field;
    (0..table.len())
        .find(|&i| table.reps[i].generator_images().iter().any(|m| f.order(m.get(0, 0)).ok() == Some(4)))
        .ok_or_else(|| Error::Structure("no faithful character of N".into()))
}

fn g128_shape(ell: u32, two_step: bool) -> Result<GlueInstance> {
    let b = builtin("G128")?;
    let g = b.group.clone();
    let n = b.normal_group("N")?;
    let k1 = b.normal_group("K1")?;
    let k2 = b.normal_group("K2")?;
    let u2 = b.normal_group("U2")?;
    let mut gens = g.embed(&k2)?;
    gens.extend(g.embed(&u2)?);
    let k2u2: Group = Arc::new(g.subgroup("K2U2", &gens));
    let ctx = ModularContext::for_group(&g, ell, 0)?;
    let table = irr_brauer_in(&n, &ctx, SourceModule::SylowCosets)?;
    let theta = faithful_on_center(&table)?;
    let ext = |h: &Group| -> Result<MatrixRep> { Ok(extend_character(&make_triple(h, &table, theta)?)?.rep) };
    if two_step {
        let start = ProjectiveRep::from_ordinary(&ext(&u2)?, &n, &ctx)?;
        let steps = glue_iterated(&start, &[(ext(&k2)?, k2u2.clone()), (ext(&k1)?, g.clone())])?;
        Ok(GlueInstance { name: format!("G128@{ell} U2 -> K2U2 -> K1K2U2"), steps, two_step: true })
    } else {
        let p2 = associated_projective(&make_triple(&k2u2, &table, theta)?)?;
        Ok(GlueInstance { name: format!("G128@{ell} H1=K1 H2=K2U2"), steps: vec![glue(&ext(&k1)?, &p2, &g)?], two_step: false })
    }
}

/// `H₁ = H` and `H₂ = H` on `Q8 ⊴ SL(2,3)`.
fn trivial_shapes() -> Result<Vec<GlueInstance>> {
    let (g, q8) = normal_of("SL23", "Q8")?;
    let ctx = ModularContext::for_group(&g, 7, 0)?;
    let table = irr_brauer_in(&q8, &ctx, SourceModule::SylowCosets)?;
    let theta = table.irr.iter().position(|c| c.degree() == 2).ok_or_else(|| Error::Structure("no degree-2 character of Q8".into()))?;
    let t = make_triple(&g, &table, theta)?;
    let h1_is_h = glue(t.rep(), &associated_projective(&t)?, &g)?;
    let h2_is_h = glue(&extend_character(&t)?.rep, &ProjectiveRep::from_ordinary(t.rep(), &t.normal, t.ctx())?, &g)?;
    Ok(vec![
        GlueInstance { name: "SL23@7 H1=H".into(), steps: vec![h1_is_h], two_step: false },
        GlueInstance { name: "SL23@7 H2=H".into(), steps: vec![h2_is_h], two_step: false },
    ])
}

fn glue_instances() -> Result<Vec<GlueInstance>> {
    let mut out = vec![sl23_shape("GL23", 7)?, sl23_shape("GL23", 5)?, sl23_shape("SL23_semi_C2", 7)?, g128_shape(5, false)?];
    out.push(g128_shape(5, true)?);
    out.push(g128_shape(3, true)?);
    out.extend(trivial_shapes()?);
    Ok(out)
}

fn criterion_5() -> Result<Outcome> {
    let insts = glue_instances()?;
    let mut bad = Vec::new();
    let (mut pairs, mut steps, mut literal) = (0usize, 0usize, 0usize);
    let mut two_step_orders = Vec::new();
    for inst in &insts {
        for (i, step) in inst.steps.iter().enumerate() {
            steps += 1;
            let g = &step.rep.group;
            let o = g.order();
            let alpha = match check_projective(&step.rep) {
                Ok(a) => a,
                Err(e) => {
                    bad.push(format!("{} step {i}: {e}", inst.name));
                    continue;
                }
            };
            let c = |x: usize| step.rep.transversal.coset_of(x);
            let mismatches = (0..o * o).filter(|&xy| alpha[xy] != step.formula.get(c(xy / o), c(xy % o))).count();
            pairs += o * o;
            if mismatches > 0 {
                bad.push(format!("{} step {i}: formula differs on {mismatches} pairs", inst.name));
            }
            if step.inverted_variant_agrees() {
                literal += 1;
            }
        }
        if inst.two_step {
            let a = inst.steps.last().map(|s| s.alpha.order()).unwrap_or(0);
            two_step_orders.push(a);
            if a == 0 || 4 % a != 0 {
                bad.push(format!("{}: α has order {a}, not dividing 4", inst.name));
            }
        }
    }
    let ok = bad.is_empty() && insts.len() >= 5 && !two_step_orders.is_empty();
    outcome(
        ok,
        format!(
            "{} instances, {steps} glue steps, {pairs} element pairs match λ·α₂; two-step α orders {two_step_orders:?}; literal λ·α₂⁻¹ form agrees on {literal}/{steps} steps{}",
            insts.len(),
            if bad.is_empty() { String::new() } else { format!("; bad: {}", bad.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Result<Outcome> {
    let mut detail = Vec::new();
    let mut bad = Vec::new();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    for (name, x, ell) in [("SL23_semi_C2", "SL23", 7u32), ("SL25_semi_C2", "SL25", 3), ("SL25_semi_C2", "SL25", 7)] {
        let (g, n) = normal_of(name, x)?;
        let opts = FakeGaloisOptions { jobs, ..FakeGaloisOptions::default() };
        let session = FakeGaloisSession::new(&g, &n, ell, &opts)?;
        let qm1 = session.table.ctx.field.unit_order() as u64;
        let modulus = qm1.lcm(&(n.order() as u64));
        let gens = g.gen_indices().len();
        let mut count = 0;
        for m in (1..=modulus).filter(|m| m.gcd(&(n.order() as u64)) == 1) {
            count += 1;
            let rep = session.run(m, &CandidateRecipe::PiecewiseR { r: None })?;
            let Some(map) = rep.map.as_ref().filter(|_| rep.verdict.success) else {
                bad.push(format!("{name}@{ell} m={m}: {:?}", rep.verdict.orbits.iter().map(|o| &o.status).collect::<Vec<_>>()));
                continue;
            };
            let equivariant = (0..gens).all(|s| (0..map.len()).all(|th| map[session.act(s, th)] == session.act(s, map[th])));
            let covered = session.orbits().iter().all(|orb| rep.witnesses.iter().any(|(th, _)| orb.contains(th)));
            if !equivariant || !covered {
                bad.push(format!("{name}@{ell} m={m}: equivariant={equivariant} covered={covered}"));
            }
            for (th, w) in &rep.witnesses {
                let (t, t2) = (session.theta_data(*th)?, session.theta_data(map[*th])?);
                if let Err(e) = verify_witness(w, &t.triple, &t2.triple) {
                    bad.push(format!("{name}@{ell} m={m} θ{th}: {e}"));
                }
            }
        }
        detail.push(format!("{name}@{ell}: {count} residues mod {modulus}, {} orbits", session.orbits().len()));
    }
    let ok = bad.is_empty();
    outcome(ok, format!("{}{}", detail.join("; "), if ok { String::new() } else { format!("; bad: {}", bad.iter().take(5).cloned().collect::<Vec<_>>().join("; ")) }))
}

// ---------------------------------------------------------------- criterion 7

const SOLVER_INSTANCES: &[(&str, &str, u32)] = &[
    ("SL23", "Q8", 7),
    ("SL23", "Q8", 5),
    ("SL23_semi_C2", "SL23", 7),
    ("GL23", "SL23", 5),
    ("S4", "A4", 5),
    ("A4", "V4", 5),
    ("D8", "C4", 3),
    ("D8", "Z", 3),
    ("Q8", "Z", 3),
    ("Q8", "Z", 5),
    ("S3", "A3", 2),
    ("Q8_semi_C3", "Q8", 7),
    ("SL25_semi_C2", "SL25", 3),
    ("GL23", "Q8", 5),
];

fn criterion_7() -> Result<Outcome> {
    let (mut cases, mut witnesses, mut disagree) = (0usize, 0usize, Vec::new());
    let mut used = Vec::new();
    for &(name, nn, ell) in SOLVER_INSTANCES {
        let (g, n) = normal_of(name, nn)?;
        if g.order() / n.order() > 4 {
            continue;
        }
        used.push(format!("{name}/{nn}@{ell}"));
        let ctx = ModularContext::for_group(&g, ell, 0)?;
        let table = irr_brauer_in(&n, &ctx, SourceModule::SylowCosets)?;
        let qm1 = ctx.field.unit_order() as u64;
        let bound = qm1.lcm(&(n.order() as u64)).min(60);
        for th in 0..table.len() {
            let t = make_triple(&g, &table, th)?;
            for th2 in 0..table.len() {
                let t2 = make_triple(&t.group, &table, th2)?;
                if t2.replaced {
                    continue;
                }
                for m in (1..=bound).filter(|m| m.gcd(&(n.order() as u64)) == 1) {
                    for adm in [Admissibility::Strict, Admissibility::Lenient] {
                        let solver = check_m_approx(&t, &t2, m, adm)?.is_witness();
                        let brute = brute_force_m_approx(&t, &t2, m, adm)?;
                        cases += 1;
                        witnesses += solver as usize;
                        if solver != brute {
                            disagree.push(format!("{name}/{nn}@{ell} θ{th}→θ{th2} m={m} {adm:?}: solver {solver} brute {brute}"));
                        }
                    }
                }
            }
        }
    }
    let ok = disagree.is_empty() && cases > 0;
    outcome(
        ok,
        format!(
            "{} instances with |G/N| ≤ 4 ({}); {cases} cases, {witnesses} witnesses, {} refuted, {} disagreements{}",
            used.len(),
            used.join(", "),
            cases - witnesses,
            disagree.len(),
            disagree.first().map(|d| format!("; first: {d}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8() -> Result<Outcome> {
    let mut jobs = Vec::new();
    for name in NAMES {
        let b = builtin(name)?;
        for (nn, _) in &b.normals {
            let n = b.normal_group(nn)?;
            if !b.group.quotient(&n)?.0.is_abelian() {
                continue;
            }
            for ell in [2u32, 3, 5, 7].into_iter().filter(|&l| l as usize <= b.group.order()) {
                jobs.push((*name, nn.clone(), n.clone(), ell));
            }
        }
    }
    // per job: (θ count, pair count, failures)
    let results: Vec<Result<(usize, usize, Vec<String>)>> = jobs
        .par_iter()
        .map(|(name, nn, n, ell)| {
            let g = builtin(name)?.group.clone();
            let ctx = ModularContext::for_group(&g, *ell, 0)?;
            let ibr_g = irr_brauer_in(&g, &ctx, SourceModule::SylowCosets)?;
            let ibr_n = irr_brauer_in(n, &ctx, SourceModule::SylowCosets)?;
            let lins = linear_characters_of_quotient(&g, n, &ctx)?;
            let (mut pairs, mut bad) = (0, Vec::new());
            for theta in 0..ibr_n.len() {
                let over: Vec<_> = ibr_g.irr.iter().filter(|c| lies_over(c, &ibr_n, theta).unwrap_or(false)).collect();
                for chi in &over {
                    for chi2 in &over {
                        pairs += 1;
                        let found = lins.iter().any(|l| l.chi.mul(chi2).values == chi.values);
                        let lib = !linear_difference_in(chi, chi2, &ibr_n, theta, &lins)?.lambdas.is_empty();
                        if !found || !lib {
                            bad.push(format!("{name}/{nn}@{ell} θ{theta}: oracle {found} library {lib}"));
                        }
                    }
                }
            }
            Ok((ibr_n.len(), pairs, bad))
        })
        .collect();
    let (mut triples, mut pairs, mut bad) = (0, 0, Vec::new());
    for r in results {
        let (t, p, b) = r?;
        triples += t;
        pairs += p;
        bad.extend(b);
    }
    let ok = bad.is_empty() && pairs > 0;
    outcome(ok, format!("{triples} (G, N, θ) with G/N abelian, {pairs} pairs χ, χ′, {} without λ{}", bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()))
}

// ---------------------------------------------------------------- criterion 9

fn criterion_9() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;

    // scrambled recipe: swap a character moved by G with one fixed by G
    let (g, sl) = normal_of("SL23_semi_C2", "SL23")?;
    let session = FakeGaloisSession::new(&g, &sl, 7, &FakeGaloisOptions::default())?;
    let orbits = session.orbits();
    let moved = orbits.iter().find(|o| o.len() > 1).map(|o| o[0]);
    let fixed = orbits.iter().find(|o| o.len() == 1).map(|o| o[0]);
    if let (Some(a), Some(b)) = (moved, fixed) {
        let mut map: Vec<usize> = (0..session.table.len()).collect();
        map.swap(a, b);
        let rep = session.run(5, &CandidateRecipe::Explicit { map })?;
        let named = rep.verdict.violations.first().map(|v| format!("θ{} under generator {}: expected θ{}, found θ{}", v.theta, v.generator, v.expected, v.found));
        let good = !rep.verdict.equivariant && !rep.verdict.success && named.is_some();
        ok &= good;
        parts.push(format!("scrambled recipe rejected={good} ({})", named.unwrap_or_default()));
    } else {
        ok = false;
        parts.push("no moved/fixed pair to scramble".into());
    }

    // (m, |N|) = 1 enforced before any work
    let mut rejected = 0;
    for m in [2u64, 3, 6] {
        let e1 = verify_fake_galois(&g, &sl, 7, m, &CandidateRecipe::Identity, &FakeGaloisOptions::default());
        let t = make_triple(&g, &session.table, 0)?;
        let e2 = check_m_approx(&t, &t, m, Admissibility::Strict);
        let cites = |r: &std::result::Result<_, Error>| matches!(r, Err(Error::Precondition(s)) if s.contains("(m, |N|) = 1"));
        if cites(&e1.map(|_| ())) && cites(&e2.map(|_| ())) {
            rejected += 1;
        }
    }
    ok &= rejected == 3;
    parts.push(format!("non-coprime m rejected {rejected}/3"));

    // a non-stable θ is routed to its stabilizer
    let mut routed = 0;
    let mut tried = 0;
    for (name, nn, ell) in [("S3", "A3", 2u32), ("SL23_semi_C2", "SL23", 7), ("S4", "V4", 3)] {
        let (g, n) = normal_of(name, nn)?;
        let ctx = ModularContext::for_group(&g, ell, 0)?;
        let table = irr_brauer_in(&n, &ctx, SourceModule::SylowCosets)?;
        for th in 0..table.len() {
            // stabilizer by brute force over all of G
            let stab: Vec<usize> = (0..g.order()).filter(|&x| act_on_brauer(&table.irr[th], &g, x).map(|c| c == table.irr[th]).unwrap_or(false)).collect();
            if stab.len() == g.order() {
                continue;
            }
            tried += 1;
            let t = make_triple(&g, &table, th)?;
            let lib = stabilizer_of_character(&g, &table.irr[th])?;
            let mut got = g.embed(&t.group)?;
            got.sort();
            if t.replaced && got == stab && lib.len() == stab.len() && t.group.is_normal(&t.normal) {
                routed += 1;
            }
        }
    }
    ok &= tried > 0 && routed == tried;
    parts.push(format!("non-stable θ routed to G_θ {routed}/{tried}"));
    outcome(ok, parts.join("; "))
}
