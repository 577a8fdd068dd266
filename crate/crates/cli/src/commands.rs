use std::time::{Instant, SystemTime, UNIX_EPOCH};

use chroma_core::birthday::{self, Shape, ShapeKind};
use chroma_core::canon::canonical_form;
use chroma_core::counting::{
    count_copies, count_induced_copies, count_injective_homs, enumerate_supergraph_classes, enumerate_t_joins,
    GraphSummary,
};
use chroma_core::limit::{check_second_moment, classify_er_regime, dense_mixture, sequence_mixture, PoissonMixture};
use chroma_core::moments::{exact_distribution_t, variance_t};
use chroma_core::num::{parse_rational, rational_to_f64};
use chroma_core::simulation::{mixture_pmf, mixture_pmf_for, monte_carlo, monte_carlo_er, tv_distance};
use chroma_core::{automorphism_count, Graph, Rational};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{document, emit, render_csv, render_json};
use crate::spec::{self, Loaded};
use crate::{BirthdayArgs, Command, Format, Global, PatternHost, ShapeArg, SimulateArgs};

pub fn run(global: &Global, command: Command) -> Result<(), CliError> {
    if let Some(threads) = global.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let started = Instant::now();
    let (name, result) = dispatch(global, command)?;
    let meta = (!global.no_meta).then(|| {
        let unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "seed": global.seed,
            "threads": rayon::current_num_threads(),
            "elapsed_seconds": started.elapsed().as_secs_f64(),
            "unix_time": unix,
        })
    });
    let doc = document(name, result, meta);
    let text = match global.format {
        Format::Json => render_json(&doc)?,
        Format::Csv => render_csv(&doc)?,
    };
    emit(&text, global.output.as_deref())
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Io(e.to_string()))
}

fn big(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

fn summary(g: &Graph) -> Value {
    to_value(&GraphSummary::new(None, &canonical_form(g), g)).unwrap_or(Value::Null)
}

fn host_info(host: &Loaded) -> Value {
    let mut info = json!({
        "vertices": host.graph.vertex_count(),
        "edges": host.graph.edge_count(),
    });
    if let Some(labels) = &host.labels {
        info["labels"] = json!(labels);
    }
    info
}

fn rational(text: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("{flag} expects a rational such as 1/2, got {text:?}")))
}

fn load(io: &PatternHost, global: &Global) -> Result<(Graph, Loaded), CliError> {
    Ok((spec::pattern(&io.pattern, global.labels)?, spec::host(&io.graph, global.labels)?))
}

fn dispatch(global: &Global, command: Command) -> Result<(&'static str, Value), CliError> {
    match command {
        Command::Count(io) => {
            let (h, host) = load(&io, global)?;
            let g = &host.graph;
            Ok((
                "count",
                json!({
                    "pattern": summary(&h),
                    "host": host_info(&host),
                    "copies": big(&count_copies(&h, g)?),
                    "induced_copies": big(&count_induced_copies(&h, g)),
                    "injective_homs": big(&count_injective_homs(&h, g)),
                    "pattern_automorphisms": big(&automorphism_count(&h)),
                }),
            ))
        }
        Command::Joins { pattern } => {
            let h = spec::pattern(&pattern, global.labels)?;
            let joins = if h.vertex_count() >= 3 {
                to_value(&enumerate_t_joins(&h)?)?
            } else {
                json!([])
            };
            let classes = enumerate_supergraph_classes(&h)?;
            let by_k: Vec<Value> = classes
                .by_copies()
                .iter()
                .map(|(k, reps)| {
                    json!({
                        "k": k,
                        "classes": reps.iter().map(summary).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(("joins", json!({"pattern": summary(&h), "joins": joins, "supergraph_classes": by_k})))
        }
        Command::Moments { io, colors } => {
            let (h, host) = load(&io, global)?;
            let report = variance_t(&h, &host.graph, colors)?;
            Ok((
                "moments",
                json!({"pattern": summary(&h), "host": host_info(&host), "moments": to_value(&report)?}),
            ))
        }
        Command::ExactDist { io, colors } => {
            let (h, host) = load(&io, global)?;
            let d = exact_distribution_t(&h, &host.graph, colors)?;
            let mean = d.mean();
            let variance = d.variance();
            Ok((
                "exact-dist",
                json!({
                    "pattern": summary(&h),
                    "host": host_info(&host),
                    "colors": colors,
                    "colorings": d.colorings,
                    "counts": d.counts.iter().map(|(v, k)| json!([v, k])).collect::<Vec<_>>(),
                    "pmf": to_value(&d.pmf())?,
                    "mean": rational_to_f64(&mean),
                    "variance": rational_to_f64(&variance),
                    "mean_exact": mean.to_string(),
                    "variance_exact": variance.to_string(),
                }),
            ))
        }
        Command::Classify {
            pattern,
            alpha,
            kappa,
            lambda,
        } => {
            let h = spec::pattern(&pattern, global.labels)?;
            let report = classify_er_regime(&h, rational(&alpha, "--alpha")?, kappa, lambda)?;
            Ok(("classify", to_value(&report)?))
        }
        Command::Limit {
            pattern,
            p,
            lambda,
            graph,
            colors,
            upto,
        } => {
            let h = spec::pattern(&pattern, global.labels)?;
            let (kind, mixture) = match (p, graph, colors) {
                (Some(p), None, _) => ("dense", dense_mixture(&h, p, lambda)?),
                (None, Some(graph), Some(c)) => {
                    let host = spec::host(&graph, global.labels)?;
                    ("sequence", sequence_mixture(&h, &host.graph, c)?)
                }
                _ => return Err(CliError::Usage("limit needs --p, or --graph with --colors".into())),
            };
            let pmf = mixture_pmf(&mixture, upto);
            Ok((
                "limit",
                json!({
                    "pattern": summary(&h),
                    "kind": kind,
                    "mixture": to_value(&mixture)?,
                    "mean": mixture.mean(),
                    "variance": mixture.variance(),
                    "pmf": to_value(&pmf)?,
                    "tail": pmf.tail,
                }),
            ))
        }
        Command::Simulate(args) => simulate(global, args),
        Command::Check { io, colors, epsilon } => {
            let (h, host) = load(&io, global)?;
            let report = check_second_moment(&h, &host.graph, colors, epsilon)?;
            Ok((
                "check",
                json!({"pattern": summary(&h), "host": host_info(&host), "report": to_value(&report)?}),
            ))
        }
        Command::Birthday(args) => birthday(global, args),
    }
}

fn parse_mixture(text: &str) -> Result<PoissonMixture, CliError> {
    let bad = || CliError::Usage(format!("mixture components look like 1=0.5,3=0.25, got {text:?}"));
    let mut parts = Vec::new();
    for item in text.split(',') {
        let (k, rate) = item.split_once('=').ok_or_else(bad)?;
        let k: u64 = k.trim().parse().map_err(|_| bad())?;
        let rate: f64 = rate.trim().parse().map_err(|_| bad())?;
        parts.push((k, rate));
    }
    Ok(PoissonMixture::new(parts)?)
}

fn simulate(global: &Global, args: SimulateArgs) -> Result<(&'static str, Value), CliError> {
    let h = spec::pattern(&args.pattern, global.labels)?;
    let mut host_value = Value::Null;
    let mut fixed_host = None;
    let emp = match (&args.graph, args.n) {
        (Some(graph), _) => {
            let c = args
                .colors
                .ok_or_else(|| CliError::Usage("simulate on a fixed host needs --colors".into()))?;
            let host = spec::host(graph, global.labels)?;
            host_value = host_info(&host);
            let emp = monte_carlo(&h, &host.graph, c, args.replicates, global.seed)?;
            fixed_host = Some((host.graph, c));
            emp
        }
        (None, Some(n)) => monte_carlo_er(
            &h,
            n,
            rational(&args.alpha, "--alpha")?,
            args.kappa,
            args.lambda,
            args.replicates,
            global.seed,
        )?,
        (None, None) => return Err(CliError::Usage("simulate needs --graph or --n".into())),
    };
    let reference = match args.compare.as_deref() {
        None => None,
        Some("exact") => {
            let (g, c) = fixed_host
                .as_ref()
                .ok_or_else(|| CliError::Usage("--compare exact needs a fixed host".into()))?;
            Some(("exact".to_string(), exact_distribution_t(&h, g, u64::from(*c))?.pmf(), Value::Null))
        }
        Some("realized") => {
            let rate: f64 = emp
                .params
                .get("realized_lambda")
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| CliError::Usage("--compare realized needs random hosts (--n)".into()))?;
            let m = PoissonMixture::poisson(rate)?;
            Some((format!("poisson:{rate}"), mixture_pmf_for(&m, &emp), to_value(&m)?))
        }
        Some(other) => {
            let m = if let Some(rate) = other.strip_prefix("poisson:") {
                let rate: f64 = rate
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad Poisson rate {rate:?}")))?;
                PoissonMixture::poisson(rate)?
            } else if let Some(parts) = other.strip_prefix("mixture:") {
                parse_mixture(parts)?
            } else {
                return Err(CliError::Usage(format!("unknown --compare law {other:?}")));
            };
            Some((other.to_string(), mixture_pmf_for(&m, &emp), to_value(&m)?))
        }
    };
    let mut result = json!({
        "pattern": summary(&h),
        "empirical": to_value(&emp)?,
    });
    if !host_value.is_null() {
        result["host"] = host_value;
    }
    if let Some((law, pmf, mixture)) = reference {
        result["reference"] = json!({
            "law": law,
            "mixture": mixture,
            "pmf": to_value(&pmf)?,
            "tail": pmf.tail,
        });
        result["tv"] = tv_distance(&emp, &pmf).into();
    }
    Ok(("simulate", result))
}

fn birthday(global: &Global, args: BirthdayArgs) -> Result<(&'static str, Value), CliError> {
    let kind = match args.shape {
        ShapeArg::Complete => Some(ShapeKind::Complete),
        ShapeArg::Multipartite => Some(ShapeKind::Multipartite {
            types: args.types.unwrap_or(args.s as u64),
        }),
        ShapeArg::Graph => None,
    };
    let mut result = json!({"s": args.s, "c": args.c, "approximation": true});
    match (kind, args.n, args.target) {
        (Some(kind), None, Some(target)) => {
            let n = birthday::min_group_size(kind, args.s, args.c, target)?;
            let report = birthday::match_probability(&kind.with_size(n), args.s, args.c)?;
            result["shape"] = to_value(&kind)?;
            result["target"] = target.into();
            result["n"] = n.into();
            result["match"] = to_value(&report)?;
            if kind == ShapeKind::Complete && args.s == 2 {
                result["classical_exact_n"] = birthday::min_group_size_classical(args.c, target)?.into();
            }
        }
        (Some(kind), Some(n), None) => {
            let report = birthday::match_probability(&kind.with_size(n), args.s, args.c)?;
            result["shape"] = to_value(&kind)?;
            result["n"] = n.into();
            result["match"] = to_value(&report)?;
        }
        (None, None, None) => {
            let path = args
                .graph
                .as_deref()
                .ok_or_else(|| CliError::Usage("--shape graph needs --graph".into()))?;
            let host = spec::host(path, global.labels)?;
            let report = birthday::match_probability(&Shape::Explicit(host.graph.clone()), args.s, args.c)?;
            if let Some(warning) = &report.warning {
                eprintln!("warning: {warning}");
            }
            result["shape"] = json!({"shape": "graph"});
            result["host"] = host_info(&host);
            result["match"] = to_value(&report)?;
        }
        (None, _, _) => return Err(CliError::Usage("--shape graph takes neither --n nor --target".into())),
        (Some(_), _, _) => return Err(CliError::Usage("birthday needs exactly one of --n or --target".into())),
    }
    Ok(("birthday", result))
}
