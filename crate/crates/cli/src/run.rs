use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use clap::ValueEnum;
use serde_json::{json, Value};

use ipskit::booloracle::{
    anyorder_dim_oracle, chunked_parts, deg_check, el_ed_identity, lm_census, leadcoef_identities, lucas, rank_lemma_oracle,
    sweep, sym_image, Caps, DegLemma, OracleReport,
};
use ipskit::cnfbridge::{
    emit_dimacs, equisat_check, identity_suite, plain_cnf, semi_cnf, ecnf, sidecar_json, AlgCircuit, CircuitJson, EquisatMode,
};
use ipskit::dims::{coeff_dim, eval_dim, word_matrix_projected};
use ipskit::ff::Field;
use ipskit::instances::{
    e2_minus_beta, ks_modp, ks_sym_e2, multiples_system, partition_indicator, roabp_hard_anyorder, roabp_hard_fixed,
    roabp_hard_fixed_lifted, subset_sum, Instance, WithCircuit,
};
use ipskit::ipscert::{cert_from_json, cert_to_json, check_flags, fermat_refute, verify, Mode, VerifyOptions};
use ipskit::mpoly::{parse_poly, Poly, VarId};
use ipskit::roabp::{
    closure_prod, closure_sum, fermat_refutation_roabp, ml_roabp, nisan_build, partial_subst, roabp_from_json, roabp_to_json,
    width_lower, RoAbp,
};
use ipskit::wordspec::{params, pow2, Word};

use crate::report::{envelope, sha256_hex, CliResult, ConfigError, Outcome};
use crate::{Cli, Command, DimsCmd, Emit, GenArgs, GenKind, Global, ModeArg, OracleCmd, ParamsArgs, PolySource, RoabpCmd, TranslateArgs, VerifyArgs};

/// Command-specific part of the run configuration.
#[derive(Default)]
struct Cfg {
    field: Option<String>,
    args: BTreeMap<String, Value>,
}

impl Cfg {
    fn arg(&mut self, k: &str, v: impl Into<Value>) {
        self.args.insert(k.to_string(), v.into());
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Gen(_) => "gen",
        Command::Verify(_) => "verify",
        Command::Dims { cmd } => match cmd {
            DimsCmd::Coeff { .. } => "dims coeff",
            DimsCmd::Eval { .. } => "dims eval",
            DimsCmd::Relrank { .. } => "dims relrank",
        },
        Command::Roabp { cmd } => match cmd {
            RoabpCmd::Build { .. } => "roabp build",
            RoabpCmd::Width { .. } => "roabp width",
            RoabpCmd::Sum { .. } => "roabp sum",
            RoabpCmd::Prod { .. } => "roabp prod",
            RoabpCmd::Ml { .. } => "roabp ml",
            RoabpCmd::Subst { .. } => "roabp subst",
            RoabpCmd::Fermat { .. } => "roabp fermat",
        },
        Command::Oracle { cmd } => match cmd {
            OracleCmd::Run { .. } => "oracle run",
            OracleCmd::Sweep => "oracle sweep",
        },
        Command::Translate(_) => "translate",
        Command::Params(_) => "params",
    }
}

/// Whether `-o` names an artifact rather than the report.
fn has_artifact(cmd: &Command) -> bool {
    match cmd {
        Command::Gen(_) | Command::Translate(_) => true,
        Command::Roabp { cmd } => !matches!(cmd, RoabpCmd::Width { .. }),
        _ => false,
    }
}

pub fn dispatch(cli: &Cli) -> CliResult<(bool, Value)> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(ConfigError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(ConfigError::compute)?;
    }
    let g = &cli.global;
    let mut cfg = Cfg::default();
    let out = match &cli.command {
        Command::Gen(a) => gen(g, a, &mut cfg)?,
        Command::Verify(a) => verify_cmd(g, a, &mut cfg)?,
        Command::Dims { cmd } => dims(g, cmd, &mut cfg)?,
        Command::Roabp { cmd } => roabp(g, cmd, &mut cfg)?,
        Command::Oracle { cmd } => oracle(g, cmd, &mut cfg)?,
        Command::Translate(a) => translate(g, a, &mut cfg)?,
        Command::Params(a) => params_cmd(a, &mut cfg)?,
    };
    let config = json!({
        "field": cfg.field,
        "seed": g.seed,
        "cap_n": g.cap_n,
        "mode": match g.mode { ModeArg::Exact => "exact", ModeArg::Sz => "sz" },
        "trials": g.trials,
        "ext": g.ext,
        "caps": Caps::default(),
        "output": g.output,
        "args": cfg.args,
    });
    Ok((out.pass, envelope(name(&cli.command), config, &out)))
}

pub fn emit_report(cli: &Cli, text: &str) -> CliResult<()> {
    let target = if has_artifact(&cli.command) { cli.global.report.as_ref() } else { cli.global.output.as_ref() };
    match target {
        Some(path) => write(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::input(format!("{path}: {e}")))
}

fn write(path: impl AsRef<Path>, bytes: &[u8]) -> CliResult<()> {
    let p = path.as_ref();
    std::fs::write(p, bytes).map_err(|e| ConfigError::input(format!("{}: {e}", p.display())))
}

/// `dir/name.json` with the final extension replaced by `ext`.
fn sibling(path: &str, ext: &str) -> PathBuf {
    Path::new(path).with_extension(ext)
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| ConfigError::usage(format!("missing {flag}")))
}

fn field_or(g: &Global, default: &str) -> CliResult<Field> {
    let spec = g.field.as_deref().unwrap_or(default);
    Field::parse(spec).map_err(|e| ConfigError::usage(format!("--field {spec}: {e}")))
}

fn parse_vars(names: &[String]) -> CliResult<Vec<VarId>> {
    names
        .iter()
        .map(|s| s.trim().parse::<VarId>().map_err(|_| ConfigError::usage(format!("bad variable {s:?}"))))
        .collect()
}

fn load_instance(path: &str) -> CliResult<Instance> {
    Instance::from_json_str(&read(path)?).map_err(|e| ConfigError::input(format!("{path}: {e}")))
}

fn load_roabp(path: &str) -> CliResult<RoAbp> {
    roabp_from_json(&read(path)?).map_err(|e| ConfigError::input(format!("{path}: {e}")))
}

fn load_poly(g: &Global, src: &PolySource, cfg: &mut Cfg) -> CliResult<Poly> {
    match (&src.poly, &src.instance) {
        (Some(text), None) => {
            let field = field_or(g, "Q")?;
            cfg.field = Some(field.spec());
            cfg.arg("poly", text.as_str());
            parse_poly(&field, text).map_err(|e| ConfigError::usage(format!("--poly: {e}")))
        }
        (None, Some(path)) => {
            let inst = load_instance(path)?;
            if let Some(spec) = &g.field {
                if Field::parse(spec).ok().as_ref() != Some(&inst.field) {
                    return Err(ConfigError::usage(format!("--field {spec} disagrees with instance field {}", inst.field.spec())));
                }
            }
            cfg.field = Some(inst.field.spec());
            cfg.arg("instance", path.as_str());
            cfg.arg("axiom", src.axiom);
            inst.axioms
                .get(src.axiom)
                .cloned()
                .ok_or_else(|| ConfigError::usage(format!("instance has {} axioms", inst.axioms.len())))
        }
        _ => Err(ConfigError::usage("give exactly one of --poly or --instance")),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn gen(g: &Global, a: &GenArgs, cfg: &mut Cfg) -> CliResult<Outcome> {
    let field = match (a.p, &g.field) {
        (Some(p), None) => Field::prime(p).map_err(|e| ConfigError::usage(format!("--p {p}: {e}")))?,
        (None, Some(_)) => field_or(g, "")?,
        (Some(_), Some(_)) => return Err(ConfigError::usage("give --p or --field, not both")),
        (None, None) => return Err(ConfigError::usage("gen needs --field or --p")),
    };
    cfg.field = Some(field.spec());
    let path = need(&g.output, "-o")?;
    let kind = a.kind.to_possible_value().expect("named").get_name().to_string();
    cfg.arg("kind", kind.as_str());
    let beta = match &a.beta {
        Some(s) => {
            cfg.arg("beta", s.as_str());
            Some(field.parse_elem(s).map_err(|e| ConfigError::usage(format!("--beta {s}: {e}")))?)
        }
        None => None,
    };
    let word = || -> CliResult<Word> {
        let s = need(&a.word, "--word")?;
        Word::parse(&s).map_err(|e| ConfigError::usage(format!("--word {s}: {e}")))
    };
    let n = || need(&a.n, "--n");
    let beta_req = || need(&beta, "--beta");
    if let Some(w) = &a.word {
        cfg.arg("word", w.as_str());
    }
    if let Some(n) = a.n {
        cfg.arg("n", n);
    }
    let bad = |e: ipskit::instances::InstanceError| ConfigError::compute(e);
    let (inst, circuit) = match a.kind {
        GenKind::KsModp => split(ks_modp(&word()?, &field, None, beta).map_err(bad)?),
        GenKind::KsSymE2 => split(ks_sym_e2(&word()?, &field, beta).map_err(bad)?),
        GenKind::SubsetSum => (subset_sum(&field, n()?, beta_req()?).map_err(bad)?, None),
        GenKind::Partition => (partition_indicator(&field, &chunked_parts(n()?), beta_req()?).map_err(bad)?, None),
        GenKind::E2 => (e2_minus_beta(&field, n()?, beta_req()?).map_err(bad)?, None),
        GenKind::RoabpHard => (roabp_hard_fixed(&field, n()?).map_err(bad)?, None),
        GenKind::RoabpHardLifted => (roabp_hard_fixed_lifted(&field, n()?).map_err(bad)?, None),
        GenKind::Anyorder => (roabp_hard_anyorder(&field, n()?).map_err(bad)?, None),
        GenKind::Multiples => (multiples_system(&field, n()?).map_err(bad)?, None),
    };

    let inst_text = inst.to_json_string() + "\n";
    write(&path, inst_text.as_bytes())?;
    let mut result = json!({
        "generator": inst.meta.generator,
        "variables": inst.vars().len(),
        "axioms": inst.axioms.len(),
        "meta": to_value(&inst.meta),
    });
    let mut out = Outcome::new(true, Value::Null).hash("instance", inst.hash()).wrote("instance", &path, inst_text.as_bytes());

    if let Some(c) = circuit {
        let cpath = sibling(&path, "circuit.json");
        let text = ipskit::cnfbridge::circuit_to_json(&c.circuit) + "\n";
        write(&cpath, text.as_bytes())?;
        result["circuit_metrics"] = to_value(&c.metrics);
        out = out.wrote("circuit", &cpath.display().to_string(), text.as_bytes());
    }

    if !a.no_cert {
        match fermat_refute(&inst) {
            Ok(cert) => {
                let rep = verify(&cert, &inst, &VerifyOptions::default()).map_err(ConfigError::compute)?;
                out.pass = rep.passed();
                let cpath = sibling(&path, "cert.json");
                let text = cert_to_json(&cert) + "\n";
                write(&cpath, text.as_bytes())?;
                result["certificate"] = json!({ "flags": to_value(&cert.flags), "verify": to_value(&rep) });
                out = out.wrote("cert", &cpath.display().to_string(), text.as_bytes());
            }
            Err(e) => result["certificate"] = json!({ "skipped": e.to_string() }),
        }
    }
    out.result = result;
    Ok(out)
}

fn split(w: WithCircuit) -> (Instance, Option<ipskit::instances::CircuitForm>) {
    (w.instance, Some(w.circuit))
}

fn verify_cmd(g: &Global, a: &VerifyArgs, cfg: &mut Cfg) -> CliResult<Outcome> {
    let inst_text = read(&a.instance)?;
    let cert_text = read(&a.cert)?;
    let inst = Instance::from_json_str(&inst_text).map_err(|e| ConfigError::input(format!("{}: {e}", a.instance)))?;
    let cert = cert_from_json(&cert_text).map_err(|e| ConfigError::input(format!("{}: {e}", a.cert)))?;
    cfg.field = Some(inst.field.spec());
    cfg.arg("instance", a.instance.as_str());
    cfg.arg("cert", a.cert.as_str());
    let mut opts = VerifyOptions {
        mode: match g.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sz => Mode::Sz,
        },
        trials: g.trials,
        ext: g.ext,
        seed: g.seed,
        ..VerifyOptions::default()
    };
    if let Some(cap) = a.term_cap {
        opts.term_cap = cap;
        cfg.arg("term_cap", cap);
    }
    let rep = verify(&cert, &inst, &opts).map_err(ConfigError::compute)?;
    let checked = check_flags(&cert, opts.term_cap).ok();
    let result = json!({
        "report": to_value(&rep),
        "flags_claimed": to_value(&cert.flags),
        "flags_checked": checked.map(|f| to_value(&f)),
    });
    Ok(Outcome::new(rep.passed(), result)
        .hash("instance", inst.hash())
        .hash("instance_file_sha256", sha256_hex(inst_text.as_bytes()))
        .hash("cert_file_sha256", sha256_hex(cert_text.as_bytes())))
}

/// `X` and `Y` from flags; an omitted side takes the remaining variables.
fn split_vars(f: &Poly, x: &[String], y: &[String], cfg: &mut Cfg) -> CliResult<(BTreeSet<VarId>, BTreeSet<VarId>)> {
    let xs: BTreeSet<VarId> = parse_vars(x)?.into_iter().collect();
    let ys: BTreeSet<VarId> = parse_vars(y)?.into_iter().collect();
    let all = f.vars();
    let (xs, ys) = match (xs.is_empty(), ys.is_empty()) {
        (true, true) => return Err(ConfigError::usage("give --x or --y")),
        (false, true) => {
            let rest = all.difference(&xs).copied().collect();
            (xs, rest)
        }
        (true, false) => (all.difference(&ys).copied().collect(), ys),
        (false, false) => (xs, ys),
    };
    let joined = |s: &BTreeSet<VarId>| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    cfg.arg("x", joined(&xs));
    cfg.arg("y", joined(&ys));
    Ok((xs, ys))
}

fn dims(g: &Global, cmd: &DimsCmd, cfg: &mut Cfg) -> CliResult<Outcome> {
    match cmd {
        DimsCmd::Coeff { src, x, y } => {
            let f = load_poly(g, src, cfg)?;
            let (xs, ys) = split_vars(&f, x, y, cfg)?;
            let d = coeff_dim(&f, &xs, &ys).map_err(ConfigError::compute)?;
            Ok(Outcome::new(true, json!({ "coeff_dim": d })))
        }
        DimsCmd::Eval { src, x, y, points } => {
            let f = load_poly(g, src, cfg)?;
            let field = f.field().clone();
            let (xs, ys) = split_vars(&f, x, y, cfg)?;
            let s = if points.is_empty() {
                vec![field.zero(), field.one()]
            } else {
                points
                    .iter()
                    .map(|p| field.parse_elem(p.trim()).map_err(|e| ConfigError::usage(format!("--points {p}: {e}"))))
                    .collect::<CliResult<Vec<_>>>()?
            };
            cfg.arg("points", s.iter().map(|e| field.format_elem(e)).collect::<Vec<_>>().join(","));
            let e = eval_dim(&f, &xs, &ys, &s).map_err(ConfigError::compute)?;
            let c = coeff_dim(&f, &xs, &ys).map_err(ConfigError::compute)?;
            Ok(Outcome::new(e <= c, json!({ "eval_dim": e, "coeff_dim": c })))
        }
        DimsCmd::Relrank { src, word } => {
            let f = load_poly(g, src, cfg)?;
            cfg.arg("word", word.as_str());
            let w = Word::parse(word).map_err(|e| ConfigError::usage(format!("--word {word}: {e}")))?;
            let m = word_matrix_projected(&f, &w).map_err(ConfigError::compute)?;
            let r = m.relrank();
            let sq = r.squared();
            Ok(Outcome::new(
                r.at_most_one(),
                json!({
                    "rank": r.rank,
                    "rows": r.rows,
                    "cols": r.cols,
                    "relrank_squared": sq.to_string(),
                    "full_rank": r.rank as u64 == r.rows.min(r.cols),
                }),
            ))
        }
    }
}

fn program_result(a: &RoAbp) -> Value {
    json!({
        "order": a.order().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "widths": a.widths(),
        "width": a.width(),
        "size": to_value(&a.size()),
    })
}

fn save_program(g: &Global, a: &RoAbp, out: Outcome, cfg: &mut Cfg) -> CliResult<Outcome> {
    cfg.field = Some(a.field().spec());
    match &g.output {
        Some(path) => {
            let text = roabp_to_json(a) + "\n";
            write(path, text.as_bytes())?;
            Ok(out.wrote("roabp", path, text.as_bytes()))
        }
        None => {
            let mut out = out;
            out.result["program"] = serde_json::from_str(&roabp_to_json(a)).expect("valid json");
            Ok(out)
        }
    }
}

fn order_for(f: &Poly, order: &[String], cfg: &mut Cfg) -> CliResult<Vec<VarId>> {
    let ord = if order.is_empty() { f.vars().into_iter().collect() } else { parse_vars(order)? };
    cfg.arg("order", ord.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    Ok(ord)
}

fn roabp(g: &Global, cmd: &RoabpCmd, cfg: &mut Cfg) -> CliResult<Outcome> {
    let e = ConfigError::compute;
    let (program, pass, extra) = match cmd {
        RoabpCmd::Build { src, order } => {
            let f = load_poly(g, src, cfg)?;
            let ord = order_for(&f, order, cfg)?;
            let a = nisan_build(&f, &ord).map_err(e)?;
            (a, true, json!({}))
        }
        RoabpCmd::Width { src, order } => {
            let f = load_poly(g, src, cfg)?;
            let ord = order_for(&f, order, cfg)?;
            let a = nisan_build(&f, &ord).map_err(e)?;
            let lower = width_lower(&f, &ord).map_err(e)?;
            let mut r = program_result(&a);
            r["coeff_dim_bound"] = json!(lower);
            return Ok(Outcome::new(a.width() == lower, r));
        }
        RoabpCmd::Sum { a, b } => {
            cfg.arg("a", a.as_str());
            cfg.arg("b", b.as_str());
            let (pa, pb) = (load_roabp(a)?, load_roabp(b)?);
            let s = closure_sum(&pa, &pb).map_err(e)?;
            let ok = s.width() <= pa.width() + pb.width();
            (s, ok, json!({ "bound": pa.width() + pb.width() }))
        }
        RoabpCmd::Prod { a, b } => {
            cfg.arg("a", a.as_str());
            cfg.arg("b", b.as_str());
            let (pa, pb) = (load_roabp(a)?, load_roabp(b)?);
            let s = closure_prod(&pa, &pb).map_err(e)?;
            let ok = s.width() <= pa.width() * pb.width();
            (s, ok, json!({ "bound": pa.width() * pb.width() }))
        }
        RoabpCmd::Ml { a } => {
            cfg.arg("a", a.as_str());
            let pa = load_roabp(a)?;
            let m = ml_roabp(&pa);
            let ok = m.width() <= pa.width();
            (m, ok, json!({ "bound": pa.width() }))
        }
        RoabpCmd::Subst { a, assign } => {
            cfg.arg("a", a.as_str());
            cfg.arg("assign", assign.join(","));
            let pa = load_roabp(a)?;
            let field = pa.field().clone();
            let mut asg = BTreeMap::new();
            for item in assign {
                let (v, c) = item
                    .split_once('=')
                    .ok_or_else(|| ConfigError::usage(format!("--assign {item}: expected var=value")))?;
                let v: VarId = v.trim().parse().map_err(|_| ConfigError::usage(format!("bad variable {v:?}")))?;
                let c = field.parse_elem(c.trim()).map_err(|err| ConfigError::usage(format!("--assign {item}: {err}")))?;
                asg.insert(v, c);
            }
            let s = partial_subst(&pa, &asg).map_err(e)?;
            let ok = s.width() <= pa.width();
            (s, ok, json!({ "bound": pa.width() }))
        }
        RoabpCmd::Fermat { a } => {
            cfg.arg("a", a.as_str());
            let pa = load_roabp(a)?;
            let fr = fermat_refutation_roabp(&pa).map_err(e)?;
            let ok = fr.inverse.width() as u128 <= fr.width_bound;
            let extra = json!({ "width_bound": fr.width_bound.to_string(), "points_checked": fr.points_checked });
            (fr.inverse, ok, extra)
        }
    };
    let mut r = program_result(&program);
    if let (Some(m), Some(x)) = (r.as_object_mut(), extra.as_object()) {
        m.extend(x.clone());
    }
    save_program(g, &program, Outcome::new(pass, r), cfg)
}

fn oracle_params(items: &[String]) -> CliResult<BTreeMap<String, String>> {
    items
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| ConfigError::usage(format!("--param {s}: expected key=value")))
        })
        .collect()
}

fn num<T: FromStr>(p: &BTreeMap<String, String>, k: &str) -> CliResult<T> {
    let v = p.get(k).ok_or_else(|| ConfigError::usage(format!("missing --param {k}=...")))?;
    v.parse().map_err(|_| ConfigError::usage(format!("--param {k}={v}: not a number")))
}

fn run_lemma(g: &Global, lemma: &str, p: &BTreeMap<String, String>, cfg: &mut Cfg) -> CliResult<OracleReport> {
    let caps = Caps::default();
    let field = |cfg: &mut Cfg| -> CliResult<Field> {
        let f = field_or(g, "Q")?;
        cfg.field = Some(f.spec());
        Ok(f)
    };
    let elem = |f: &Field, k: &str| -> CliResult<ipskit::ff::Elem> {
        let v = p.get(k).ok_or_else(|| ConfigError::usage(format!("missing --param {k}=...")))?;
        f.parse_elem(v).map_err(|err| ConfigError::usage(format!("--param {k}={v}: {err}")))
    };
    Ok(match lemma {
        "subset-sum" => {
            let f = field(cfg)?;
            deg_check(&f, &DegLemma::SubsetSum { n: num(p, "n")?, beta: elem(&f, "beta")? }, &caps).map_err(ConfigError::compute)?
        }
        "partition" => {
            let f = field(cfg)?;
            let parts = chunked_parts(num(p, "n")?);
            deg_check(&f, &DegLemma::Partition { parts, beta: elem(&f, "beta")? }, &caps).map_err(ConfigError::compute)?
        }
        "e2" => {
            let f = field(cfg)?;
            deg_check(&f, &DegLemma::E2Char0 { n: num(p, "n")?, beta: elem(&f, "beta")? }, &caps).map_err(ConfigError::compute)?
        }
        "leadcoef" => {
            let q = Field::rationals();
            cfg.field = Some(q.spec());
            let b = elem(&q, "beta")?;
            let beta = q.lift_to_rational(&b).expect("rational element");
            leadcoef_identities(num(p, "k")?, &beta).map_err(ConfigError::compute)?
        }
        "lucas" => lucas(num(p, "bound")?, num(p, "p")?).map_err(ConfigError::compute)?,
        "sym-image" => sym_image(num(p, "d")?, num(p, "n")?, num(p, "p")?).map_err(ConfigError::compute)?,
        "el-ed" => {
            let f = field(cfg)?;
            el_ed_identity(num(p, "l")?, num(p, "d")?, num(p, "n")?, &f).map_err(ConfigError::compute)?
        }
        "rank" => {
            let s = p.get("word").ok_or_else(|| ConfigError::usage("missing --param word=..."))?;
            let w = Word::parse(s).map_err(|err| ConfigError::usage(format!("word {s}: {err}")))?;
            rank_lemma_oracle(&w, num(p, "p")?, &caps).map_err(ConfigError::compute)?
        }
        "census" => {
            let f = field(cfg)?;
            lm_census(num(p, "n")?, &f, &caps).map_err(ConfigError::compute)?
        }
        "anyorder" => {
            let f = field(cfg)?;
            anyorder_dim_oracle(num(p, "n")?, &f).map_err(ConfigError::compute)?
        }
        "ubit" => identity_suite(num(p, "q")?).map_err(ConfigError::compute)?,
        other => {
            return Err(ConfigError::usage(format!(
                "unknown lemma {other:?}; expected one of subset-sum, partition, e2, leadcoef, lucas, sym-image, el-ed, \
                 rank, census, anyorder, ubit"
            )))
        }
    })
}

fn oracle(g: &Global, cmd: &OracleCmd, cfg: &mut Cfg) -> CliResult<Outcome> {
    match cmd {
        OracleCmd::Run { lemma, params } => {
            let p = oracle_params(params)?;
            cfg.arg("lemma", lemma.as_str());
            cfg.arg("params", to_value(&p));
            let r = run_lemma(g, lemma, &p, cfg)?;
            Ok(Outcome::new(r.pass, to_value(&r)))
        }
        OracleCmd::Sweep => {
            let reports = sweep(g.cap_n, &Caps::default()).map_err(ConfigError::compute)?;
            let agg = OracleReport::aggregate("sweep", &reports);
            Ok(Outcome::new(agg.pass, json!({ "aggregate": to_value(&agg), "reports": to_value(&reports) })))
        }
    }
}

fn translate(g: &Global, a: &TranslateArgs, cfg: &mut Cfg) -> CliResult<Outcome> {
    let text = read(&a.circuit)?;
    let mut cj: CircuitJson =
        serde_json::from_str(&text).map_err(|e| ConfigError::input(format!("{}: {e}", a.circuit)))?;
    if let Some(q) = a.q {
        cj.field = q.to_string();
        cfg.arg("q", q);
    }
    let c: AlgCircuit = cj.to_circuit().map_err(|e| ConfigError::input(format!("{}: {e}", a.circuit)))?;
    cfg.field = Some(c.field().spec());
    cfg.arg("circuit", a.circuit.as_str());
    cfg.arg("emit", format!("{:?}", a.emit).to_lowercase());
    let path = need(&g.output, "-o")?;
    let e = ConfigError::compute;
    let mut out = Outcome::new(true, json!({})).hash("circuit_file_sha256", sha256_hex(text.as_bytes()));
    let mut result = json!({ "circuit_metrics": to_value(&c.metrics()) });
    match a.emit {
        Emit::Dimacs => {
            let enc = plain_cnf(&c).map_err(e)?;
            let dimacs = emit_dimacs(&enc.cnf);
            let side = sidecar_json(&enc.cnf);
            let spath = sibling(&path, "map.json");
            write(&path, dimacs.as_bytes())?;
            write(&spath, side.as_bytes())?;
            result["vars"] = json!(enc.cnf.num_vars());
            result["clauses"] = json!(enc.cnf.clauses.len());
            out = out.wrote("dimacs", &path, dimacs.as_bytes()).wrote("sidecar", &spath.display().to_string(), side.as_bytes());
        }
        Emit::Ecnf => {
            let ec = ecnf(&c).map_err(e)?;
            let eqs = ec.equations();
            let body: String = eqs.iter().map(|p| format!("{p}\n")).collect();
            write(&path, body.as_bytes())?;
            result["equations"] = json!(eqs.len());
            out = out.wrote("ecnf", &path, body.as_bytes());
        }
        Emit::Semi => {
            let sc = semi_cnf(&c).map_err(e)?;
            let mut body = String::new();
            for k in 0..sc.len() {
                body.push_str(&format!("{}\n", sc.equation_poly(k).map_err(e)?));
            }
            write(&path, body.as_bytes())?;
            result["equations"] = json!(sc.len());
            out = out.wrote("semi", &path, body.as_bytes());
        }
    }
    if a.check {
        let r = equisat_check(&c, EquisatMode::Enumerate).map_err(e)?;
        out.pass &= r.pass;
        result["equisat"] = to_value(&r);
    }
    if let Some(sp) = &a.solver_output {
        if a.emit != Emit::Dimacs {
            return Err(ConfigError::usage("--solver-output needs --emit dimacs"));
        }
        cfg.arg("solver_output", sp.as_str());
        let verdict = read(sp)?;
        let stem = sibling(&path, "");
        let r = equisat_check(&c, EquisatMode::DimacsExport { stem: &stem, solver_output: Some(&verdict) }).map_err(e)?;
        out.pass &= r.pass;
        result["solver"] = to_value(&r);
    }
    out.result = result;
    Ok(out)
}

fn params_cmd(a: &ParamsArgs, cfg: &mut Cfg) -> CliResult<Outcome> {
    let n = match (&a.n, a.log_n) {
        (Some(s), None) => {
            cfg.arg("n", s.as_str());
            BigUint::from_str(s).map_err(|_| ConfigError::usage(format!("--n {s}: not a nonnegative integer")))?
        }
        (None, Some(e)) => {
            cfg.arg("log_n", e);
            pow2(e)
        }
        _ => return Err(ConfigError::usage("give --n or --log-n")),
    };
    cfg.arg("delta", a.delta);
    let p = params(&n, a.delta).map_err(|e| ConfigError::usage(e.to_string()))?;
    Ok(Outcome::new(true, to_value(&p)))
}
