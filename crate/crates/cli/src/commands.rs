//! Subcommand implementations.

use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use hoqt_core::cones::{
    in_h, in_k, random_cone_element, ConeFamily, ConeVerdict, Decision, MembershipMethod,
};
use hoqt_core::fileformat::{load_map, save_map};
use hoqt_core::parallel::parmap;
use hoqt_core::{
    hilbert_dim, parse_type, parse_type_in, render_tree, space_dim, SystemRegistry, Type, TypedMap,
};

use crate::config::{resolve_registry, CliError};
use crate::report::{field, Report};
use crate::{Cli, Command, ConeArg, MethodArg};

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let registry = resolve_registry(&cli.dims, &cli.config)?;
    let report = match &cli.command {
        Command::Parse { expr } => cmd_parse(expr, &registry)?,
        Command::Partype { left, right, trace, pad } => {
            cmd_partype(left, right, *trace, *pad, &registry)?
        }
        Command::Parmap { left, right, output } => {
            let l = load(left)?;
            let r = load(right)?;
            check_common_registry(&l, &r)?;
            let result = parmap(&l, &r).map_err(CliError::from_core)?;
            write_result(&result, output)?
        }
        Command::Apply { map, input, output } => {
            let m = load(map)?;
            let rho = load(input)?;
            check_common_registry(&m, &rho)?;
            let result = m.apply(&rho).map_err(CliError::from_core)?;
            write_result(&result, output)?
        }
        Command::Compose { outer, inner, output } => {
            let n = load(outer)?;
            let m = load(inner)?;
            check_common_registry(&n, &m)?;
            let result = n.compose(&m).map_err(CliError::from_core)?;
            write_result(&result, output)?
        }
        Command::Check { map, cone, method, tol, probes, seed } => {
            cmd_check(map, *cone, *method, *tol, *probes, *seed)?
        }
        Command::Random { ty, cone, seed, output } => {
            cmd_random(ty, *cone, *seed, output, &registry)?
        }
    };
    report.print(cli.format);
    Ok(report.exit)
}

fn parse_expr(src: &str, registry: &Option<Arc<SystemRegistry>>) -> Result<Type, CliError> {
    let parsed = match registry {
        Some(reg) => parse_type_in(src, reg),
        None => parse_type(src),
    };
    parsed.map_err(|err| CliError::Parse { src: src.to_string(), err })
}

fn load(path: &Path) -> Result<TypedMap, CliError> {
    load_map(path).map_err(CliError::from_core)
}

fn check_common_registry(a: &TypedMap, b: &TypedMap) -> Result<(), CliError> {
    if a.same_registry(b) {
        Ok(())
    } else {
        Err(CliError::TypeMismatch(format!(
            "maps of type `{}` and `{}` were built against different registries",
            a.ty(),
            b.ty()
        )))
    }
}

fn cmd_parse(expr: &str, registry: &Option<Arc<SystemRegistry>>) -> Result<Report, CliError> {
    let ty = parse_expr(expr, registry)?;
    let tree = render_tree(&ty);

    let mut human = String::new();
    human.push_str(&field("canonical:", &ty));
    human.push_str(&field("order:", ty.order()));
    human.push_str(&field("structure:", ty.structure().notation()));
    let mut json = json!({
        "canonical": ty.to_string(),
        "order": ty.order(),
        "structure": ty.structure().notation(),
        "tree": tree,
    });
    if let Some(reg) = registry {
        let space = space_dim(&ty, reg).map_err(CliError::from_core)?;
        human.push_str(&field("space dim:", space));
        json["space_dim"] = json!(space);
        if ty.is_elementary() {
            let hilbert = hilbert_dim(&ty, reg).map_err(CliError::from_core)?;
            human.push_str(&field("hilbert dim:", hilbert));
            json["hilbert_dim"] = json!(hilbert);
        }
    }
    human.push_str("tree:\n");
    human.push_str(&tree);
    human.push('\n');
    Ok(Report::ok(human, json))
}

fn cmd_partype(
    left: &str,
    right: &str,
    trace: bool,
    pad: bool,
    registry: &Option<Arc<SystemRegistry>>,
) -> Result<Report, CliError> {
    let x = parse_expr(left, registry)?;
    let y = parse_expr(right, registry)?;
    let (result, steps) = x.partype_traced(&y);

    let mut human = String::new();
    human.push_str(&field("result:", &result));
    human.push_str(&field("order:", result.order()));
    let mut json = json!({
        "result": result.to_string(),
        "order": result.order(),
    });

    if trace {
        human.push_str("trace:\n");
        let mut trace_json = Vec::new();
        for step in &steps {
            human.push_str(&format!(
                "  [{:<16}] {}  ⊠  {}  =  {}\n",
                step.case.to_string(),
                step.left,
                step.right,
                step.result
            ));
            trace_json.push(json!({
                "case": step.case.to_string(),
                "left": step.left.to_string(),
                "right": step.right.to_string(),
                "result": step.result.to_string(),
            }));
        }
        json["trace"] = json!(trace_json);
    }

    if pad {
        let (px, py) = x.pad(&y).map_err(CliError::from_core)?;
        human.push_str(&field("padded left:", &px));
        human.push_str(&field("padded right:", &py));
        json["padded"] = json!({ "left": px.to_string(), "right": py.to_string() });
    }
    Ok(Report::ok(human, json))
}

fn write_result(result: &TypedMap, output: &Path) -> Result<Report, CliError> {
    save_map(result, output).map_err(CliError::from_core)?;
    let human = format!(
        "{}{}",
        field("result type:", result.ty()),
        field("wrote:", output.display())
    );
    let json = json!({
        "result_type": result.ty().to_string(),
        "output": output.display().to_string(),
    });
    Ok(Report::ok(human, json))
}

fn cmd_check(
    path: &Path,
    cone: ConeArg,
    method: MethodArg,
    tol: f64,
    probes: u32,
    seed: u64,
) -> Result<Report, CliError> {
    let map = load(path)?;
    let verdict = match cone {
        ConeArg::K => {
            let method = match method {
                MethodArg::Choi => MembershipMethod::Choi,
                MethodArg::Definitional => MembershipMethod::Definitional,
            };
            in_k(&map, tol, method, probes, seed).map_err(CliError::from_core)?
        }
        // The H check replays the definition over a finite generator set,
        // which decides it outright; the method field records that.
        ConeArg::H => {
            let member = in_h(&map, tol).map_err(CliError::from_core)?;
            ConeVerdict {
                decision: if member { Decision::Member } else { Decision::NonMember },
                method: MembershipMethod::Definitional,
                tolerance: tol,
                min_eigenvalue: None,
                witness: None,
            }
        }
    };

    let mut human = String::new();
    human.push_str(&field("type:", map.ty()));
    human.push_str(&field(
        "decision:",
        match verdict.decision {
            Decision::Member => "member",
            Decision::NonMember => "non_member",
            Decision::Inconclusive => "inconclusive (no violation found within the probe budget)",
        },
    ));
    human.push_str(&field(
        "method:",
        match verdict.method {
            MembershipMethod::Choi => "choi",
            MembershipMethod::Definitional => "definitional",
        },
    ));
    human.push_str(&field("tolerance:", format!("{:e}", verdict.tolerance)));
    if let Some(lambda) = verdict.min_eigenvalue {
        human.push_str(&field("min eig:", format!("{lambda:.12}")));
    }
    if let Some(w) = &verdict.witness {
        human.push_str(&field("witness:", format!("probe type `{}`, seed {}", w.probe_type, w.probe_seed)));
    }

    let exit = match verdict.decision {
        Decision::Member => 0,
        Decision::NonMember => 1,
        Decision::Inconclusive => 5,
    };
    let json = serde_json::to_value(&verdict)
        .map_err(|e| CliError::Internal(format!("verdict serialization: {e}")))?;
    Ok(Report { human, json, exit })
}

fn cmd_random(
    expr: &str,
    cone: ConeArg,
    seed: u64,
    output: &Path,
    registry: &Option<Arc<SystemRegistry>>,
) -> Result<Report, CliError> {
    let registry = registry.clone().ok_or_else(|| {
        CliError::Usage("`random` needs a registry: pass --dims or --config".to_string())
    })?;
    let ty = parse_expr(expr, &Some(registry.clone()))?;
    let family = match cone {
        ConeArg::K => ConeFamily::K,
        ConeArg::H => ConeFamily::H,
    };
    let map = random_cone_element(&ty, family, seed, &registry).map_err(CliError::from_core)?;
    save_map(&map, output).map_err(CliError::from_core)?;

    let human = format!(
        "{}{}{}{}",
        field("type:", map.ty()),
        field("cone:", if matches!(cone, ConeArg::K) { "K" } else { "H" }),
        field("seed:", seed),
        field("wrote:", output.display())
    );
    let json = json!({
        "type": map.ty().to_string(),
        "cone": if matches!(cone, ConeArg::K) { "K" } else { "H" },
        "seed": seed,
        "output": output.display().to_string(),
    });
    Ok(Report::ok(human, json))
}
