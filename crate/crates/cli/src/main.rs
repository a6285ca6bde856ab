mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nctower::closure::{free_normal_closure, ClosureOptions};
use nctower::tower::{
    bound_g, build_tower, inverse_limit, least_prime_divisor, lower_central_record, reduce, upper_central_record,
    LimitOptions, TowerOptions, DEFAULT_MAX_STAGES,
};
use nctower::verify::{build_corpus, run_check, run_corpus, summarize, CorpusSpec, Instance, Theorem, VerifyOptions};
use nctower::Error;
use serde::Serialize;
use serde_json::{json, Value};

use input::{parse_hom, HomInput};

#[derive(Parser)]
#[command(name = "nctower", version, about = "Normal-closures towers of finite group homomorphisms")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Successive normal closures, kernel commutators and central series.
    Series(HomArgs),
    /// The free normal closure of a homomorphism.
    Closure {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long)]
        max_cosets: Option<usize>,
        /// Build the Peiffer presentation even for onto maps.
        #[arg(long)]
        peiffer: bool,
        /// List the element of every copy generator.
        #[arg(long)]
        index: bool,
    },
    /// Stage orders of the normal-closures tower.
    Tower {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, overrides_with = "no_reduce")]
        reduce: bool,
        #[arg(long)]
        no_reduce: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGES)]
        max_stages: usize,
        #[arg(long)]
        max_cosets: Option<usize>,
    },
    /// The stable member of the reduced tower, with its bound.
    Limit {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGES)]
        max_stages: usize,
        #[arg(long)]
        max_cosets: Option<usize>,
    },
    /// Run the checkers on a corpus or on one homomorphism.
    Verify {
        #[arg(long, default_value = "small")]
        corpus: String,
        /// Run only this checker.
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, requires = "codomain")]
        domain: Option<String>,
        #[arg(long, requires = "domain")]
        codomain: Option<String>,
        #[arg(long, value_delimiter = ';')]
        images: Vec<String>,
    },
    /// The value g(t).
    Bound { t: u64 },
}

#[derive(Args)]
struct HomArgs {
    /// Preset name, JSON group, or file.
    #[arg(long)]
    domain: String,
    #[arg(long)]
    codomain: String,
    /// Images of the domain generators; repeat the flag or separate with `;`.
    #[arg(long, value_delimiter = ';')]
    images: Vec<String>,
}

impl HomArgs {
    fn parse(&self) -> nctower::Result<HomInput> {
        parse_hom(&self.domain, &self.codomain, &self.images)
    }
}

/// What a command prints, and whether it counts as a failed check.
struct Output {
    value: Value,
    text: String,
    failed: bool,
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("summaries serialize")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::NotAHomomorphism { .. } | Error::Precondition(_) => 2,
        Error::Capacity { .. } => 3,
        Error::Inconsistent(_) => 1,
    }
}

fn series(h: &HomArgs) -> nctower::Result<Output> {
    let HomInput { domain, phi, .. } = h.parse()?;
    let r = reduce(&domain, &phi)?;
    let lower = lower_central_record(domain.group());
    let upper = upper_central_record(domain.group())?;
    let value = json!({
        "closures": r.closures.summary(),
        "commutators": r.commutators.summary(),
        "lower_central": lower.summary(),
        "upper_central": upper.summary(),
        "c_order": r.c().order(),
        "k_order": r.k().order(),
    });
    let text = format!(
        "C_i: {:?}  (c of order {})\nK_i: {:?}  (K of order {})\ngamma_i: {:?}\nZ_i: {:?}",
        r.closures.orders(),
        r.c().order(),
        r.commutators.orders(),
        r.k().order(),
        lower.orders(),
        upper.orders()
    );
    Ok(Output {
        value,
        text,
        failed: false,
    })
}

fn closure(h: &HomArgs, max_cosets: Option<usize>, peiffer: bool, index: bool) -> nctower::Result<Output> {
    let HomInput { domain, phi, .. } = h.parse()?;
    let c = free_normal_closure(
        &domain,
        &phi,
        &ClosureOptions {
            max_cosets,
            force_peiffer: peiffer,
        },
    )?;
    let s = c.summary(index)?;
    let mut text = format!(
        "closure of order {} ({:?})\nboundary: image {}, kernel {}\nstructural kernel {}",
        s.closure_order, s.method, s.boundary_image_order, s.boundary_kernel_order, s.structural_kernel_order
    );
    if let Some(n) = s.cosets {
        text.push_str(&format!("\ncosets {n}"));
    }
    for g in &s.generator_index {
        text.push_str(&format!("\n  ({}, {}) = {}", g.generator, g.q, g.element));
    }
    Ok(Output {
        failed: !s.check.passed(),
        value: to_value(&s),
        text,
    })
}

fn tower(h: &HomArgs, reduce: bool, max_stages: usize, max_cosets: Option<usize>) -> nctower::Result<Output> {
    let HomInput { domain, phi, .. } = h.parse()?;
    let t = build_tower(
        &domain,
        &phi,
        &TowerOptions {
            reduce,
            max_stages,
            coset_bound: max_cosets,
        },
    )?;
    let s = t.summary();
    let mut text = String::new();
    for st in &s.stages {
        text.push_str(&format!("stage {}: order {}", st.stage, st.order));
        if let Some(k) = st.connecting_kernel_order {
            text.push_str(&format!(", connecting kernel {k}"));
        }
        text.push('\n');
    }
    match s.stabilized_at {
        Some(i) => text.push_str(&format!("stabilized at stage {i}")),
        None => text.push_str(&format!("not stabilized within {max_stages} stages")),
    }
    Ok(Output {
        value: to_value(&s),
        text,
        failed: false,
    })
}

fn limit(h: &HomArgs, max_stages: usize, max_cosets: Option<usize>) -> nctower::Result<Output> {
    let HomInput { domain, phi, .. } = h.parse()?;
    let l = inverse_limit(
        &domain,
        &phi,
        &LimitOptions {
            max_stages,
            coset_bound: max_cosets,
        },
    )?;
    let s = l.summary();
    let text = format!(
        "|Gamma_inf| = {}, stabilized at stage {}\nbound |Gamma/K| * g(|c|) = {} * {} = {} (slack {})\nphi_inf kernel {}, bijective: {}",
        s.limit_order,
        s.stabilized_at,
        s.quotient_order,
        s.g_value,
        s.bound,
        s.slack,
        s.into_limit_kernel_order,
        s.into_limit_bijective
    );
    Ok(Output {
        value: to_value(&s),
        text,
        failed: false,
    })
}

fn bound(t: u64) -> nctower::Result<Output> {
    if t == 0 {
        return Err(Error::invalid("t must be positive"));
    }
    let g = bound_g(t);
    let p = if t == 1 { Value::Null } else { json!(least_prime_divisor(t)) };
    Ok(Output {
        value: json!({ "t": t, "p": p, "g": g }),
        text: format!("{g:?}"),
        failed: false,
    })
}

fn verify(
    corpus: &str,
    theorem: Option<&str>,
    domain: Option<&str>,
    codomain: Option<&str>,
    images: &[String],
    json_lines: bool,
    out: &mut impl Write,
) -> nctower::Result<bool> {
    let theorems: Vec<Theorem> = match theorem {
        Some(t) => vec![t.parse()?],
        None => Theorem::ALL.to_vec(),
    };
    let opts = VerifyOptions::default();
    let reports = match (domain, codomain) {
        (Some(d), Some(c)) => {
            let HomInput { domain, phi, .. } = parse_hom(d, c, images)?;
            let inst = Instance::new(format!("{d} -> {c}"), domain, &phi)?;
            if theorem.is_some() {
                let r = match run_check(theorems[0], &inst, &opts) {
                    Err(e @ Error::Capacity { .. }) => return Err(e),
                    Err(e @ Error::Inconsistent(_)) => {
                        nctower::verify::CheckReport::new(theorems[0], &inst.name).fail(e.to_string())
                    }
                    other => other?,
                };
                vec![r]
            } else {
                run_corpus(std::slice::from_ref(&inst), &theorems, &opts)
            }
        }
        _ => {
            let spec: CorpusSpec = corpus.parse()?;
            run_corpus(&build_corpus(spec)?, &theorems, &opts)
        }
    };
    let summary = summarize(&reports);
    let io = |e: std::io::Error| Error::invalid(format!("cannot write output: {e}"));
    for r in &reports {
        if json_lines {
            writeln!(out, "{}", r.to_json()).map_err(io)?;
        } else {
            let status = match r.status {
                nctower::verify::Status::Pass => "PASS",
                nctower::verify::Status::Fail => "FAIL",
                nctower::verify::Status::Skipped => "SKIP",
            };
            let note = r.witness.as_deref().map(|w| format!(": {w}")).unwrap_or_default();
            writeln!(out, "{status} {} [{}]{note}", r.theorem, r.instance).map_err(io)?;
        }
    }
    if json_lines {
        writeln!(out, "{}", json!({ "summary": summary })).map_err(io)?;
    } else {
        writeln!(
            out,
            "{} checks: {} passed, {} failed, {} skipped",
            summary.total, summary.passed, summary.failed, summary.skipped
        )
        .map_err(io)?;
    }
    Ok(summary.ok())
}

fn run(cli: &Cli) -> nctower::Result<Output> {
    match &cli.command {
        Command::Series(h) => series(h),
        Command::Closure {
            hom,
            max_cosets,
            peiffer,
            index,
        } => closure(hom, *max_cosets, *peiffer, *index),
        Command::Tower {
            hom,
            no_reduce,
            max_stages,
            max_cosets,
            ..
        } => tower(hom, !no_reduce, *max_stages, *max_cosets),
        Command::Limit {
            hom,
            max_stages,
            max_cosets,
        } => limit(hom, *max_stages, *max_cosets),
        Command::Bound { t } => bound(*t),
        Command::Verify { .. } => unreachable!("verify streams its own output"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Verify {
            corpus,
            theorem,
            domain,
            codomain,
            images,
        } => verify(
            corpus,
            theorem.as_deref(),
            domain.as_deref(),
            codomain.as_deref(),
            images,
            cli.json,
            &mut out,
        )
        .map(|ok| if ok { 0 } else { 1 }),
        _ => run(&cli).map(|o| {
            let shown = if cli.json {
                serde_json::to_string_pretty(&o.value).expect("values serialize")
            } else {
                o.text
            };
            let _ = writeln!(out, "{shown}");
            if o.failed {
                1
            } else {
                0
            }
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if cli.json {
                let v = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                let _ = writeln!(out, "{v}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
