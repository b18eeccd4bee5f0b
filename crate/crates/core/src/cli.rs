//! The `steerlab` command line.
//!
//! Exit codes: 0 for an affirmative answer, 1 for a negative one (with a witness
//! on stdout), 2 for unreadable or invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{Behavior, Equivalence, ObservableRow, Policy};
use crate::dsl::{self, ParseOptions, PolicyDocument};
use crate::generate::random_universe;
use crate::laws::{check_laws, LawReport};
use crate::normalform::{normalize, NormalForm};
use crate::realization::{Admission, ApproximationSet, LoweringFailure, LoweringOptions, LoweringVerdict, Realization};
use crate::serve::{serve, ServeMode, ServedResponse};
use crate::universe::{RrType, Universe};
use crate::wire::{encode_rrsets, hex_dump, Question};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "steerlab", version, about = "Analyze DNS response-selection policies")]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Allow general behavior products, written `product(e1, e2)`.
    #[arg(long, global = true)]
    extended_algebra: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the conditional-selection normal form of a policy.
    Normalize { policy: PathBuf, universe: Option<PathBuf> },
    /// Decide observational equivalence of two policies.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        universe: Option<PathBuf>,
    },
    /// Randomized semiring law check.
    CheckLaws {
        /// Draw every triple over this universe; otherwise universes are random.
        universe: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "STEERLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Whether a realization admits a policy as written.
    Admits {
        profile: PathBuf,
        policy: PathBuf,
        universe: Option<PathBuf>,
    },
    /// Whether a policy is exactly representable under a realization.
    Represent {
        profile: PathBuf,
        policy: PathBuf,
        universe: Option<PathBuf>,
    },
    /// List admitted approximations and flag the minimal ones.
    Approx {
        profile: PathBuf,
        policy: PathBuf,
        universe: Option<PathBuf>,
    },
    /// Check whether the realization's lowering map is a homomorphism.
    Lower {
        profile: PathBuf,
        policy: PathBuf,
        universe: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, env = "STEERLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Rounds of closure under the two operations.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Serve one query and print the response.
    Serve {
        policy: PathBuf,
        universe: Option<PathBuf>,
        /// Context as `attr=value` pairs, e.g. "region=NA qtype=A".
        #[arg(long)]
        context: String,
        #[arg(long, value_enum, default_value_t = Mode::Deterministic)]
        mode: Mode,
        #[arg(long, env = "STEERLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "svc.example.com")]
        qname: String,
        #[arg(long, default_value = "A")]
        qtype: String,
    },
    /// Encode a response carrying the named candidates and hex-dump it.
    Encode {
        universe: PathBuf,
        /// Comma-separated candidate ids; empty for an empty answer.
        #[arg(long, default_value = "")]
        answer: String,
        #[arg(long, default_value = "svc.example.com")]
        qname: String,
        #[arg(long, default_value = "A")]
        qtype: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Deterministic,
    Sample,
}

/// Result of one command: exit code, text output, JSON report.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

type CliResult<T> = std::result::Result<T, String>;

fn input<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(input(path))
}

fn load_universe(path: &Path) -> CliResult<Arc<Universe>> {
    dsl::parse_universe(&read(path)?).map(Arc::new).map_err(input(path))
}

struct Loaded {
    universe: Arc<Universe>,
    policy: Policy,
}

fn load_document(path: &Path, options: ParseOptions) -> CliResult<PolicyDocument> {
    dsl::parse_policy(&read(path)?, options).map_err(input(path))
}

/// The universe comes from the command line, else from the policy's `universe` line
/// (relative to the policy file).
fn universe_for(doc: &PolicyDocument, policy_path: &Path, explicit: Option<&Path>) -> CliResult<Arc<Universe>> {
    match (explicit, &doc.universe_ref) {
        (Some(path), _) => load_universe(path),
        (None, Some(reference)) => {
            let base = policy_path.parent().unwrap_or_else(|| Path::new("."));
            load_universe(&base.join(reference))
        }
        (None, None) => Err(format!(
            "{}: no universe given and the policy has no `universe` line",
            policy_path.display()
        )),
    }
}

fn load_policy(path: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Loaded> {
    let doc = load_document(path, options)?;
    let universe = universe_for(&doc, path, universe)?;
    let policy = dsl::resolve(&doc, &universe).map_err(input(path))?;
    Ok(Loaded { universe, policy })
}

fn load_realization(profile: &Path, universe: &Arc<Universe>) -> CliResult<Realization> {
    let profile_value = dsl::parse_profile(&read(profile)?).map_err(input(profile))?;
    Realization::new(profile_value, universe.clone()).map_err(input(profile))
}

fn outcome_json(row: &ObservableRow, u: &Universe) -> Value {
    match row {
        ObservableRow::Empty => Value::Null,
        ObservableRow::Distribution(d) => Value::Array(
            d.iter()
                .map(|(s, w)| {
                    json!({
                        "answer": s.indices().map(|i| u.candidates()[i].id()).collect::<Vec<_>>(),
                        "probability": crate::rational::format_weight(w),
                    })
                })
                .collect(),
        ),
    }
}

fn normal_form_json(nf: &NormalForm) -> Value {
    let u = nf.universe();
    Value::Array(
        nf.regions()
            .iter()
            .map(|r| {
                json!({
                    "predicate": dsl::PredExpr::from_predicate(r.predicate(), u).to_string(),
                    "contexts": r.contexts().iter().map(|&i| u.format_context(&u.context_at(i))).collect::<Vec<_>>(),
                    "outcome": outcome_json(r.outcome(), u),
                })
            })
            .collect(),
    )
}

fn witness_json(e: &Equivalence, u: &Universe) -> Value {
    match e {
        Equivalence::Equivalent => Value::Null,
        Equivalence::Distinguished(w) => json!({
            "context": u.format_context(&w.context),
            "left": outcome_json(&w.left, u),
            "right": outcome_json(&w.right, u),
        }),
    }
}

fn witness_text(e: &Equivalence, u: &Universe, left: &str, right: &str) -> String {
    match e {
        Equivalence::Equivalent => String::new(),
        Equivalence::Distinguished(w) => format!(
            "witness: {}\n  {left}: {}\n  {right}: {}\n",
            u.format_context(&w.context),
            w.left.format(u),
            w.right.format(u)
        ),
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

fn cmd_normalize(policy: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let nf = normalize(&loaded.policy.to_behavior());
    Ok(Report {
        code: 0,
        text: dsl::print_normal_form(&nf),
        json: json!({ "command": "normalize", "region_count": nf.len(), "regions": normal_form_json(&nf) }),
    })
}

fn cmd_equiv(left: &Path, right: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Report> {
    let left_doc = load_document(left, options)?;
    let u = universe_for(&left_doc, left, universe)?;
    let f = dsl::resolve(&left_doc, &u).map_err(input(left))?.to_behavior();
    let right_doc = load_document(right, options)?;
    let g = dsl::resolve(&right_doc, &u).map_err(input(right))?.to_behavior();
    let verdict = f.equiv(&g).map_err(|e| e.to_string())?;
    let text = if verdict.holds() {
        "equivalent\n".to_string()
    } else {
        format!("not equivalent\n{}", witness_text(&verdict, &u, "left", "right"))
    };
    Ok(Report {
        code: if verdict.holds() { 0 } else { 1 },
        text,
        json: json!({ "command": "equiv", "equivalent": verdict.holds(), "witness": witness_json(&verdict, &u) }),
    })
}

fn law_report(report: &LawReport, seed: u64) -> Report {
    let mut text = String::new();
    let mut families = Vec::new();
    for r in &report.results {
        match &r.violation {
            None => text.push_str(&format!("PASS {} ({} instances)\n", r.family, r.checked)),
            Some(v) => {
                text.push_str(&format!("FAIL {}: {} (trial {})\n", r.family, v.equation, v.trial));
                for (name, b) in ["f", "g", "h"].iter().zip(&v.operands) {
                    text.push_str(&format!(
                        "  {name}:\n{}",
                        indent(&dsl::print_normal_form(&normalize(b)))
                    ));
                }
            }
        }
        families.push(json!({
            "name": r.family.name(),
            "checked": r.checked,
            "holds": r.violation.is_none(),
            "violation": r.violation.as_ref().map(|v| json!({ "trial": v.trial, "equation": v.equation })),
        }));
    }
    Report {
        code: if report.all_hold() { 0 } else { 1 },
        text,
        json: json!({
            "command": "check-laws",
            "trials": report.trials,
            "seed": seed,
            "all_hold": report.all_hold(),
            "families": families,
        }),
    }
}

fn cmd_check_laws(universe: Option<&Path>, trials: usize, seed: u64) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match universe {
        Some(path) => {
            let u = load_universe(path)?;
            check_laws(&mut rng, trials, |_| u.clone())
        }
        None => check_laws(&mut rng, trials, |rng| random_universe(rng, 64, 4)),
    };
    Ok(law_report(&report, seed))
}

fn cmd_admits(profile: &Path, policy: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let r = load_realization(profile, &loaded.universe)?;
    let f = loaded.policy.to_behavior();
    Ok(match r.admits(&f) {
        Admission::Admitted => Report {
            code: 0,
            text: format!("admitted by {}\n", r.profile().name),
            json: json!({ "command": "admits", "admitted": true, "diagnosis": Value::Null }),
        },
        Admission::Rejected(v) => Report {
            code: 1,
            text: format!("not admitted by {}: {v}\n", r.profile().name),
            json: json!({ "command": "admits", "admitted": false, "diagnosis": v.to_string() }),
        },
    })
}

fn cmd_represent(profile: &Path, policy: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let u = &loaded.universe;
    let r = load_realization(profile, u)?;
    let f = loaded.policy.to_behavior();
    if let Admission::Rejected(v) = r.admits(&f) {
        return Ok(Report {
            code: 1,
            text: format!("not representable: {v}\n"),
            json: json!({ "command": "represent", "representable": false, "reason": v.to_string(), "witness": Value::Null }),
        });
    }
    let collapsed = r.collapse(&f);
    let verdict = f.equiv(&collapsed).map_err(|e| e.to_string())?;
    Ok(if verdict.holds() {
        Report {
            code: 0,
            text: "exactly representable\n".into(),
            json: json!({ "command": "represent", "representable": true, "reason": Value::Null, "witness": Value::Null }),
        }
    } else {
        let reason = "the realization's congruence identifies it with a different behavior";
        Report {
            code: 1,
            text: format!(
                "not representable: {reason}\n{}",
                witness_text(&verdict, u, "policy", "collapsed")
            ),
            json: json!({ "command": "represent", "representable": false, "reason": reason, "witness": witness_json(&verdict, u) }),
        }
    })
}

fn approximations_report(set: &ApproximationSet, u: &Universe) -> Report {
    let pair_text = |(a, b): (usize, usize)| {
        format!(
            "{} | {}",
            u.format_context(&u.context_at(a)),
            u.format_context(&u.context_at(b))
        )
    };
    let mut text = format!(
        "{} approximation(s); target has {} distinction(s){}\n",
        set.len(),
        set.target_distinctions.len(),
        if set.truncated {
            "; candidate search truncated"
        } else {
            ""
        }
    );
    let mut items = Vec::new();
    for (k, a) in set.items.iter().enumerate() {
        let nf = normalize(&a.behavior);
        text.push_str(&format!(
            "approximation {}{}: preserves {} of {}\n{}",
            k + 1,
            if a.minimal { " (minimal)" } else { "" },
            a.preserved.len(),
            set.target_distinctions.len(),
            indent(&dsl::print_normal_form(&nf))
        ));
        items.push(json!({
            "minimal": a.minimal,
            "normal_form": normal_form_json(&nf),
            "preserved": a.preserved.iter().map(pair_text).collect::<Vec<_>>(),
        }));
    }
    Report {
        code: if set.is_empty() { 1 } else { 0 },
        text,
        json: json!({
            "command": "approx",
            "target_distinctions": set.target_distinctions.len(),
            "truncated": set.truncated,
            "approximations": items,
        }),
    }
}

fn cmd_approx(profile: &Path, policy: &Path, universe: Option<&Path>, options: ParseOptions) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let r = load_realization(profile, &loaded.universe)?;
    Ok(approximations_report(
        &r.approximations(&loaded.policy.to_behavior()),
        &loaded.universe,
    ))
}

fn first_difference(a: &Behavior, b: &Behavior) -> Option<usize> {
    (0..a.rows().len()).find(|&i| a.row(i) != b.row(i))
}

fn cmd_lower(
    profile: &Path,
    policy: &Path,
    universe: Option<&Path>,
    options: ParseOptions,
    lowering: LoweringOptions,
) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let u = &loaded.universe;
    let r = load_realization(profile, u)?;
    let f = loaded.policy.to_behavior();
    Ok(match r.lowerable(&f, &lowering) {
        LoweringVerdict::Yes(e) => Report {
            code: 0,
            text: format!(
                "YES: lowering is a homomorphism on {} generated behaviors ({} pairs, {})\nimage:\n{}",
                e.subalgebra_size,
                e.pairs_checked,
                if e.exhaustive { "exhaustive" } else { "sampled" },
                indent(&dsl::print_normal_form(&normalize(&e.image)))
            ),
            json: json!({
                "command": "lower",
                "verdict": "YES",
                "subalgebra_size": e.subalgebra_size,
                "pairs_checked": e.pairs_checked,
                "exhaustive": e.exhaustive,
                "image": normal_form_json(&normalize(&e.image)),
            }),
        },
        LoweringVerdict::No(LoweringFailure::Law(cx)) => {
            let at = first_difference(&cx.lowered_result, &cx.composed_images).expect("sides differ");
            let context = u.format_context(&u.context_at(at));
            let left_row = cx.lowered_result.observable_at(at);
            let right_row = cx.composed_images.observable_at(at);
            Report {
                code: 1,
                text: format!(
                    "NO: {} fails\nleft operand:\n{}right operand:\n{}witness: {context}\n  h(a ∘ b): {}\n  h(h(a) ∘ h(b)): {}\n",
                    cx.law,
                    indent(&dsl::print_normal_form(&normalize(&cx.left))),
                    indent(&dsl::print_normal_form(&normalize(&cx.right))),
                    left_row.format(u),
                    right_row.format(u)
                ),
                json: json!({
                    "command": "lower",
                    "verdict": "NO",
                    "law": cx.law.name(),
                    "left": normal_form_json(&normalize(&cx.left)),
                    "right": normal_form_json(&normalize(&cx.right)),
                    "witness": {
                        "context": context,
                        "lowered_result": outcome_json(&left_row, u),
                        "composed_images": outcome_json(&right_row, u),
                    },
                }),
            }
        }
        LoweringVerdict::No(LoweringFailure::NotAnApproximation { image }) => Report {
            code: 1,
            text: format!(
                "NO: the image is not an admitted approximation of the policy\nimage:\n{}",
                indent(&dsl::print_normal_form(&normalize(&image)))
            ),
            json: json!({
                "command": "lower",
                "verdict": "NO",
                "law": Value::Null,
                "image": normal_form_json(&normalize(&image)),
            }),
        },
    })
}

fn response_json(r: &ServedResponse, u: &Universe) -> Value {
    json!({
        "context": u.format_context(&r.context),
        "answer": r.rrsets.iter().map(|c| c.id()).collect::<Vec<_>>(),
        "on_wire": r.on_wire.indices().map(|i| u.candidates()[i].id()).collect::<Vec<_>>(),
        "ttl": r.ttl,
        "empty": r.empty,
        "truncated": r.truncated,
        "steps": r.steps,
        "wire": hex_dump(&r.wire).split_whitespace().collect::<String>(),
    })
}

fn cmd_serve(
    policy: &Path,
    universe: Option<&Path>,
    options: ParseOptions,
    context: &str,
    mode: ServeMode,
    question: &Question,
) -> CliResult<Report> {
    let loaded = load_policy(policy, universe, options)?;
    let u = &loaded.universe;
    let c = u.parse_context(context).map_err(|e| format!("--context: {e}"))?;
    let r = serve(&loaded.policy, &c, mode, question).map_err(|e| e.to_string())?;
    let text = format!(
        "context: {}\nmode: {mode}\nanswer: {}\nttl: {}\ntruncated: {}\nsteps: {}\nwire ({} bytes):\n{}",
        u.format_context(&r.context),
        u.format_answer_set(r.answer),
        r.ttl,
        r.truncated,
        r.steps,
        r.wire.len(),
        hex_dump(&r.wire)
    );
    let mut json = response_json(&r, u);
    json["command"] = json!("serve");
    json["mode"] = json!(mode.to_string());
    Ok(Report { code: 0, text, json })
}

fn cmd_encode(universe: &Path, answer: &str, question: &Question) -> CliResult<Report> {
    let u = load_universe(universe)?;
    let ids: Vec<&str> = answer.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let set = u.answer_set(ids).map_err(|e| format!("--answer: {e}"))?;
    let rrsets: Vec<_> = set.indices().map(|i| &u.candidates()[i]).collect();
    let encoded = encode_rrsets(question, &rrsets).map_err(|e| e.to_string())?;
    Ok(Report {
        code: 0,
        text: hex_dump(&encoded.bytes),
        json: json!({
            "command": "encode",
            "length": encoded.bytes.len(),
            "truncated": encoded.truncated,
            "wire": hex_dump(&encoded.bytes).split_whitespace().collect::<String>(),
        }),
    })
}

fn question(qname: &str, qtype: &str) -> CliResult<Question> {
    let qtype = RrType::parse(qtype).map_err(|e| format!("--qtype: {e}"))?;
    crate::wire::encode_name(qname).map_err(|e| format!("--qname: {e}"))?;
    Ok(Question::new(qname, qtype))
}

fn run(cli: Cli) -> CliResult<Report> {
    let options = ParseOptions {
        extended_algebra: cli.extended_algebra,
    };
    match cli.command {
        Command::Normalize { policy, universe } => cmd_normalize(&policy, universe.as_deref(), options),
        Command::Equiv { left, right, universe } => cmd_equiv(&left, &right, universe.as_deref(), options),
        Command::CheckLaws { universe, trials, seed } => cmd_check_laws(universe.as_deref(), trials, seed),
        Command::Admits {
            profile,
            policy,
            universe,
        } => cmd_admits(&profile, &policy, universe.as_deref(), options),
        Command::Represent {
            profile,
            policy,
            universe,
        } => cmd_represent(&profile, &policy, universe.as_deref(), options),
        Command::Approx {
            profile,
            policy,
            universe,
        } => cmd_approx(&profile, &policy, universe.as_deref(), options),
        Command::Lower {
            profile,
            policy,
            universe,
            trials,
            seed,
            depth,
        } => {
            let lowering = LoweringOptions {
                trials,
                seed,
                depth,
                ..LoweringOptions::default()
            };
            cmd_lower(&profile, &policy, universe.as_deref(), options, lowering)
        }
        Command::Serve {
            policy,
            universe,
            context,
            mode,
            seed,
            qname,
            qtype,
        } => {
            let mode = match mode {
                Mode::Deterministic => ServeMode::Deterministic,
                Mode::Sample => ServeMode::Sample(seed),
            };
            let q = question(&qname, &qtype)?;
            cmd_serve(&policy, universe.as_deref(), options, &context, mode, &q)
        }
        Command::Encode {
            universe,
            answer,
            qname,
            qtype,
        } => {
            let q = question(&qname, &qtype)?;
            cmd_encode(&universe, &answer, &q)
        }
    }
}

/// Runs the command line with the given arguments (the first is the program name)
/// and returns the exit code, writing reports to stdout and errors to stderr.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let out = if json {
                let mut value = json!({ "schema": SCHEMA_VERSION });
                if let (Value::Object(head), Value::Object(body)) = (&mut value, report.json) {
                    head.extend(body);
                }
                format!("{}\n", serde_json::to_string_pretty(&value).expect("report serializes"))
            } else {
                report.text
            };
            let _ = stdout.write_all(out.as_bytes());
            report.code
        }
        Err(message) => {
            if json {
                let value = json!({ "schema": SCHEMA_VERSION, "error": message });
                let _ = writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&value).expect("report serializes")
                );
            }
            let _ = writeln!(stderr, "error: {message}");
            2
        }
    }
}

pub fn main() -> i32 {
    run_with_args(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["steerlab"];
        full.extend_from_slice(args);
        let code = run_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.contains("frobnicate"));
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("normalize"));
    }

    #[test]
    fn missing_files_exit_2() {
        let (code, _, err) = run_capture(&["normalize", "/nonexistent/p.policy", "/nonexistent/u.universe"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: /nonexistent/p.policy"));
    }

    #[test]
    fn json_errors_carry_the_schema() {
        let (code, out, _) = run_capture(&["--json", "normalize", "/nonexistent/p.policy"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn law_check_on_random_universes() {
        let (code, out, _) = run_capture(&["check-laws", "--trials", "20", "--seed", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 7);
    }
}
