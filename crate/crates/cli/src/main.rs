//! `bt`: batch front end for brauer-triples.
//!
//! Exit codes: 0 computed or verified, 2 refuted or failure report, 1 usage or
//! resource error. Groups are `builtin:NAME` or a path to a `v1` group file
//! (see `brauer_triples::io`).

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use brauer_triples::builtins::NAMES;
use brauer_triples::chartab::{character_table, class_infos};
use brauer_triples::clifford::make_triple_for;
use brauer_triples::fakegal::{
    check_coprime, check_m_approx, orbit_stabilizer_cyclicity, verify_witness, Admissibility, ApproxOutcome, CandidateRecipe, FakeGaloisOptions,
    FakeGaloisSession,
};
use brauer_triples::goursat::{audit_product, check_corollary_s4, CorollaryReport};
use brauer_triples::io::{load_source, LoadedGroup};
use brauer_triples::modrep::{decomposition_matrix, irr_brauer};
use brauer_triples::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "bt", version, about = "Modular character triples and fake Galois actions on finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// `builtin:NAME` or a path to a group JSON file.
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for the randomized module chopping.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for per-orbit work.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug, Clone)]
struct TripleArgs {
    /// Name of a normal subgroup declared by the group source.
    #[arg(long)]
    normal: String,
    #[arg(long)]
    ell: u32,
    /// One or more values of m (repeat the flag or separate by commas).
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    /// Drop the m′-order constraints on factor-set values and scalars.
    #[arg(long)]
    lenient: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the builtin groups.
    Builtins,
    /// Print a group as a `v1` JSON file.
    ExportGroup {
        #[command(flatten)]
        common: Common,
    },
    /// Conjugacy classes.
    Classes {
        #[command(flatten)]
        common: Common,
    },
    /// Ordinary character table.
    Chartab {
        #[command(flatten)]
        common: Common,
    },
    /// Irreducible Brauer characters at a prime.
    Ibr {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: u32,
    },
    /// Decomposition matrix at a prime.
    Decmat {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: u32,
    },
    /// Goursat audit of every subgroup of S4 × C_a (or GROUP × C_a).
    GoursatAudit {
        /// Audit GROUP × C_a instead of S4 × C_a.
        #[arg(long)]
        group: Option<String>,
        /// Orders of the cyclic factor.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5, 6])]
        a: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include one record per subgroup in JSON output.
        #[arg(long)]
        records: bool,
    },
    /// Decide whether two triples are m-approximate.
    CheckApprox {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        triple: TripleArgs,
        /// Index of θ in IBr(N).
        #[arg(long)]
        theta: usize,
        /// Index of θ′ in IBr(N).
        #[arg(long)]
        theta2: usize,
    },
    /// Verify a candidate fake m-th Galois action on IBr(N).
    FakeGalois {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        triple: TripleArgs,
        /// identity, bar, sigma, bar-sigma, auto, piecewise-r:R, four-case:K1,K2 or search.
        #[arg(long, default_value = "auto")]
        recipe: String,
        /// Verify every character, not one per orbit.
        #[arg(long)]
        all_thetas: bool,
    },
    /// Stabilizers of the linear characters of an abelian group under automorphisms.
    StabCyclicity {
        #[command(flatten)]
        common: Common,
    },
}

/// What a subcommand produced: the report and whether it is a success.
struct Report {
    body: String,
    ok: bool,
}

fn render(format: Format, json: &Value, tsv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(json).expect("JSON values serialize"),
        Format::Tsv => tsv(),
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn check_ell(ell: u32) -> Result<()> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(Error::Usage(format!("--ell {ell} is not prime")))
    }
}

fn load(src: &str) -> Result<LoadedGroup> {
    load_source(src)
}

/// Loads `G`, `N` and validates `ℓ` and every `m` before any computation.
fn load_triple(common: &Common, t: &TripleArgs) -> Result<(LoadedGroup, brauer_triples::group::Group)> {
    check_ell(t.ell)?;
    let g = load(&common.group)?;
    let n = g.normal(&t.normal)?;
    for &m in &t.m {
        check_coprime(m, n.order())?;
    }
    Ok((g, n))
}

fn admissibility(t: &TripleArgs) -> Admissibility {
    if t.lenient {
        Admissibility::Lenient
    } else {
        Admissibility::Strict
    }
}

fn audit_tsv(reports: &[CorollaryReport]) -> String {
    let mut s = String::from("a\tsubgroups\tfailures\n");
    for r in reports {
        s.push_str(&format!("{}\t{}\t{}\n", r.a, r.subgroups, r.failures));
    }
    s
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Builtins => Ok(Report { body: NAMES.join("\n"), ok: true }),
        Command::ExportGroup { common } => {
            let g = load(&common.group)?;
            let body = serde_json::to_string_pretty(&g.to_json()).expect("group JSON serializes");
            Ok(Report { body, ok: true })
        }
        Command::Classes { common } => {
            let g = load(&common.group)?.group;
            let all: Vec<usize> = (0..g.num_classes()).collect();
            let infos = class_infos(&g, &all);
            let body = render(common.format, &json!({"group": g.name(), "order": g.order(), "classes": infos}), || {
                let mut s = String::from("name\torder\tsize\trep\n");
                for c in &infos {
                    let rep: Vec<String> = c.rep.iter().map(u32::to_string).collect();
                    s.push_str(&format!("{}\t{}\t{}\t{}\n", c.name, c.order, c.size, rep.join(",")));
                }
                s
            });
            Ok(Report { body, ok: true })
        }
        Command::Chartab { common } => {
            let g = load(&common.group)?.group;
            let t = character_table(&g)?;
            Ok(Report { body: render(common.format, &json!(t.export()), || t.to_tsv()), ok: true })
        }
        Command::Ibr { common, ell } => {
            check_ell(ell)?;
            let g = load(&common.group)?.group;
            let t = irr_brauer(&g, ell, common.seed)?;
            Ok(Report { body: render(common.format, &json!(t.export()), || t.to_tsv()), ok: true })
        }
        Command::Decmat { common, ell } => {
            check_ell(ell)?;
            let g = load(&common.group)?.group;
            let (ct, bt) = (character_table(&g)?, irr_brauer(&g, ell, common.seed)?);
            let d = decomposition_matrix(&ct, &bt)?;
            let ok = d.is_nonnegative();
            Ok(Report { body: render(common.format, &json!(d), || d.to_tsv()), ok })
        }
        Command::GoursatAudit { group, a, format, records } => {
            let mut reports = Vec::new();
            for &a in &a {
                let a = usize::try_from(a).map_err(|_| Error::Usage(format!("--a {a} out of range")))?;
                let mut r = match &group {
                    None => check_corollary_s4(a)?,
                    Some(src) => {
                        if !(1..=6).contains(&a) {
                            return Err(Error::Resource { what: "cyclic factor order", value: a as u64, bound: 6 });
                        }
                        let ca = std::sync::Arc::new(brauer_triples::builtins::cyclic(a));
                        audit_product(&load(src)?.group, &ca, a)?
                    }
                };
                if !records {
                    r.records.retain(|x| !x.reconstruction_ok || !x.witness_checked || x.v4_normal == Some(false));
                }
                reports.push(r);
            }
            let ok = reports.iter().all(CorollaryReport::passed);
            Ok(Report { body: render(format, &json!({"reports": reports, "passed": ok}), || audit_tsv(&reports)), ok })
        }
        Command::CheckApprox { common, triple, theta, theta2 } => {
            let (g, n) = load_triple(&common, &triple)?;
            let t = make_triple_for(&g.group, &n, triple.ell, common.seed, theta)?;
            let t2 = make_triple_for(&g.group, &n, triple.ell, common.seed, theta2)?;
            let adm = admissibility(&triple);
            let mut out = Vec::new();
            let mut ok = true;
            for &m in &triple.m {
                match check_m_approx(&t, &t2, m, adm)? {
                    ApproxOutcome::Witness(w) => {
                        verify_witness(&w, &t, &t2)?;
                        out.push(json!({"m": m, "status": "witness", "witness": w.export()?}));
                    }
                    ApproxOutcome::Refuted(r) => {
                        ok = false;
                        out.push(json!({"m": m, "status": "refuted", "refutation": r}));
                    }
                }
            }
            let head = json!({
                "group": g.group.name(), "normal": n.name(), "ell": triple.ell, "theta": theta, "theta2": theta2,
                "stabilizer": t.group.name(), "stabilizer_order": t.group.order(), "results": out,
            });
            let body = render(common.format, &head, || {
                let mut s = String::from("m\tstatus\n");
                for r in &out {
                    s.push_str(&format!("{}\t{}\n", r["m"], r["status"].as_str().unwrap_or("")));
                }
                s
            });
            Ok(Report { body, ok })
        }
        Command::FakeGalois { common, triple, recipe, all_thetas } => {
            let recipe = CandidateRecipe::parse(&recipe)?;
            let (g, n) = load_triple(&common, &triple)?;
            let opts = FakeGaloisOptions { admissibility: admissibility(&triple), seed: common.seed, jobs: common.jobs.max(1), all_thetas };
            let session = FakeGaloisSession::new(&g.group, &n, triple.ell, &opts)?;
            let mut out = Vec::new();
            let mut ok = true;
            for &m in &triple.m {
                let rep = session.run(m, &recipe)?;
                ok &= rep.verdict.success;
                let witnesses = rep
                    .witnesses
                    .iter()
                    .map(|(theta, w)| Ok(json!({"theta": theta, "witness": w.export()?})))
                    .collect::<Result<Vec<_>>>()?;
                out.push((rep.verdict, rep.map, witnesses));
            }
            let value = json!(out.iter().map(|(v, map, w)| json!({"verdict": v, "map": map, "witnesses": w})).collect::<Vec<_>>());
            let body = render(common.format, &value, || {
                let mut s = String::from("m\ttheta\ttarget\tstatus\talpha_order\n");
                for (v, _, _) in &out {
                    for o in &v.orbits {
                        let target = o.target.map_or("-".to_string(), |t| t.to_string());
                        let alpha = o.alpha_order.map_or("-".to_string(), |a| a.to_string());
                        s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", v.m, o.theta, target, o.status, alpha));
                    }
                }
                s
            });
            Ok(Report { body, ok })
        }
        Command::StabCyclicity { common } => {
            let (z, autos) = LoadedGroup::action(&common.group)?;
            let report = orbit_stabilizer_cyclicity(&autos)?;
            let ok = report.iter().all(|r| r.trivial || r.cyclic);
            let value = json!({"group": z.name(), "order": z.order(), "characters": report, "all_nontrivial_cyclic": ok});
            let body = render(common.format, &value, || {
                let mut s = String::from("nu\ttrivial\tstabilizer_order\tcyclic\n");
                for r in &report {
                    s.push_str(&format!("{}\t{}\t{}\t{}\n", r.nu, r.trivial, r.stabilizer_order, r.cyclic));
                }
                s
            });
            Ok(Report { body, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", r.body.trim_end());
            ExitCode::from(if r.ok { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("bt: {e}");
            ExitCode::from(1)
        }
    }
}
