//! Subcommand implementations.

use crate::manifest::RunManifest;
use crate::{
    BlocksArgs, EvalArgs, McArgs, VerifyArgs, EXIT_CONFIG, EXIT_ERROR, EXIT_OK, EXIT_POLE_OR_ZERO,
    EXIT_USAGE,
};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;
use std::io::Write;
use toda_core::exact::{self, ScValue, ThreePointInput};
use toda_core::gmc::{self, RunConfig};
use toda_core::root_system::{TodaParams, WeightVectorJson, WEYL_GROUP};
use toda_core::special::upsilon::upsilon_log_real;
use toda_core::verify::{find, registry, VerifyConfig};
use toda_core::LogSignedReal;

fn fmt17(v: f64) -> String {
    format!("{v:.17e}")
}

fn sc_record(kind: &str, params: serde_json::Value, v: &ScValue) -> (serde_json::Value, u8) {
    let code = if v.is_finite() { EXIT_OK } else { EXIT_POLE_OR_ZERO };
    let rec = json!({
        "kind": kind,
        "input": params,
        "value_log_abs": v.value.log_abs,
        "value_log_abs_str": fmt17(v.value.log_abs),
        "sign": v.value.sign,
        "value": v.value.to_f64(),
        "value_str": fmt17(v.value.to_f64()),
        "tri": format!("{:?}", v.tri),
        "flags": v.flags,
    });
    (rec, code)
}

fn lsr_record(kind: &str, params: serde_json::Value, v: LogSignedReal) -> serde_json::Value {
    json!({
        "kind": kind,
        "input": params,
        "value_log_abs": v.log_abs,
        "value_log_abs_str": fmt17(v.log_abs),
        "sign": v.sign,
        "value": v.to_f64(),
        "value_str": fmt17(v.to_f64()),
        "tri": if v.is_zero() { "Zero" } else { "Finite" },
        "flags": serde_json::Value::Array(Vec::new()),
    })
}

#[derive(Deserialize)]
struct TodaWeights {
    alpha0: WeightVectorJson,
    kappa: f64,
    alphainf: WeightVectorJson,
}

fn parse_z(s: &str, gamma: f64) -> Result<f64, String> {
    let t = s.trim();
    if let Some(m) = t.strip_suffix('q') {
        let mult: f64 = if m.is_empty() {
            1.0
        } else {
            m.parse().map_err(|e| format!("bad multiplier in {t:?}: {e}"))?
        };
        Ok(mult * (gamma + 2.0 / gamma))
    } else {
        t.parse().map_err(|e| format!("bad number {t:?}: {e}"))
    }
}

fn mu_pair(mu: &Option<Vec<f64>>) -> Result<[f64; 2], String> {
    match mu.as_deref() {
        None => Ok([1.0, 1.0]),
        Some([m]) => Ok([*m, *m]),
        Some([a, b]) => Ok([*a, *b]),
        Some(other) => Err(format!("--mu takes one or two values, got {}", other.len())),
    }
}

pub fn eval(args: EvalArgs) -> u8 {
    match eval_inner(&args) {
        Ok((record, code)) => {
            let text = serde_json::to_string_pretty(&record).expect("serializable record");
            if crate::write_output(&args.out, &text).is_err() {
                return EXIT_ERROR;
            }
            code
        }
        Err(EvalFailure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(EvalFailure::Eval(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

enum EvalFailure {
    Usage(String),
    Eval(String),
}

fn eval_inner(args: &EvalArgs) -> Result<(serde_json::Value, u8), EvalFailure> {
    use EvalFailure as F;
    let gamma = args.gamma.unwrap_or(1.0);
    match args.kind.as_str() {
        "upsilon" => {
            let zs = args.z.as_deref().ok_or_else(|| F::Usage("--z is required".into()))?;
            let z = parse_z(zs, gamma).map_err(F::Usage)?;
            if !(gamma > 0.0 && gamma < std::f64::consts::SQRT_2) {
                return Err(F::Usage(format!("gamma = {gamma} outside (0, sqrt2)")));
            }
            let v = upsilon_log_real(z, gamma);
            let rec = lsr_record("upsilon", json!({"z": z, "gamma": gamma}), v);
            Ok((rec, if v.is_zero() { EXIT_POLE_OR_ZERO } else { EXIT_OK }))
        }
        "l" => {
            let zs = args.z.as_deref().ok_or_else(|| F::Usage("--z is required".into()))?;
            let z = parse_z(zs, gamma).map_err(F::Usage)?;
            match toda_core::special::l_func(z) {
                Ok(v) => Ok((lsr_record("l", json!({"x": z}), v), EXIT_OK)),
                Err(e) => {
                    let rec = json!({"kind": "l", "input": {"x": z}, "tri": "PoleOrZero", "flags": [format!("{e}")]});
                    Ok((rec, EXIT_POLE_OR_ZERO))
                }
            }
        }
        "dozz" => {
            let a = args
                .a
                .as_deref()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| F::Usage("--a a1,a2,a3 is required".into()))?;
            let mu = mu_pair(&args.mu).map_err(F::Usage)?;
            let v = exact::dozz_log(a[0], a[1], a[2], gamma, mu[0])
                .map_err(|e| F::Eval(format!("{e}")))?;
            Ok(sc_record(
                "dozz",
                json!({"a": a, "gamma_liouville": gamma, "mu": mu[0]}),
                &v,
            ))
        }
        "fali" => {
            let w = parse_toda_weights(args, gamma)?;
            let v = exact::fateev_litvinov(&w).map_err(|e| F::Eval(format!("{e}")))?;
            Ok(sc_record(
                "fali",
                json!({"gamma": gamma, "kappa": w.kappa, "mu": w.params.mu}),
                &v,
            ))
        }
        "reflection" => {
            let w = parse_toda_weights(args, gamma)?;
            let elem = match args.element.as_deref() {
                None => return Err(F::Usage("--element is required for reflection".into())),
                Some(name) => WEYL_GROUP
                    .into_iter()
                    .find(|s| s.name() == name)
                    .ok_or_else(|| F::Usage(format!("unknown Weyl element {name:?}")))?,
            };
            let v = exact::reflection_coeff(elem, w.alpha0, &w.params)
                .map_err(|e| F::Eval(format!("{e}")))?;
            Ok((
                lsr_record(
                    "reflection",
                    json!({"gamma": gamma, "element": elem.name(), "mu": w.params.mu}),
                    v,
                ),
                EXIT_OK,
            ))
        }
        other => Err(F::Usage(format!(
            "unknown eval kind {other:?}; expected upsilon | l | dozz | fali | reflection"
        ))),
    }
}

fn parse_toda_weights(args: &EvalArgs, gamma: f64) -> Result<ThreePointInput, EvalFailure> {
    use EvalFailure as F;
    let text = args
        .weights
        .as_deref()
        .ok_or_else(|| F::Usage("--weights JSON is required".into()))?;
    let w: TodaWeights =
        serde_json::from_str(text).map_err(|e| F::Usage(format!("malformed weights JSON: {e}")))?;
    let mu = mu_pair(&args.mu).map_err(F::Usage)?;
    if !(gamma > 0.0 && gamma < std::f64::consts::SQRT_2) {
        return Err(F::Usage(format!("gamma = {gamma} outside (0, sqrt2)")));
    }
    let params = TodaParams::new(gamma, mu);
    Ok(ThreePointInput::new(
        w.alpha0.decode().map_err(F::Usage)?,
        w.kappa,
        w.alphainf.decode().map_err(F::Usage)?,
        params,
    ))
}

pub fn verify(args: VerifyArgs) -> u8 {
    let cfg = VerifyConfig {
        gamma: args.gamma,
        mu: args.mu,
        trials: args.trials,
        seed: args.seed,
    };
    let suites = if args.suite == "all" {
        registry()
    } else {
        match find(&args.suite) {
            Some(s) => vec![s],
            None => {
                eprintln!(
                    "unknown suite {:?}; available: {}",
                    args.suite,
                    registry().iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
                );
                return EXIT_USAGE;
            }
        }
    };
    let mut all_pass = true;
    let mut reports = Vec::new();
    for s in suites {
        let rep = s.run(&cfg);
        for c in &rep.checks {
            println!(
                "{} {} :: {} residual={:.3e} tol={:.0e}",
                if c.pass { "PASS" } else { "FAIL" },
                rep.suite,
                c.name,
                c.residual,
                c.tol
            );
        }
        all_pass &= rep.pass;
        reports.push(rep);
    }
    let text = serde_json::to_string_pretty(&reports).expect("serializable reports");
    if let Some(p) = &args.out {
        if std::fs::write(p, text).is_err() {
            return EXIT_ERROR;
        }
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_ERROR
    }
}

pub fn mc(args: McArgs) -> u8 {
    let raw = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read config {:?}: {e}", args.config);
            return EXIT_CONFIG;
        }
    };
    let mut cfg: RunConfig = match toml::from_str(&raw) {
        Ok(c) => c,
        Err(toml_err) => match serde_json::from_str(&raw) {
            Ok(c) => c,
            Err(json_err) => {
                eprintln!("config parses neither as TOML ({toml_err}) nor JSON ({json_err})");
                return EXIT_CONFIG;
            }
        },
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Err(e) = cfg.grid.validate() {
        eprintln!("config validation: {e}");
        return EXIT_CONFIG;
    }

    let manifest = RunManifest::new(
        "mc",
        serde_json::to_value(&cfg).expect("config serializes"),
        Some(cfg.seed),
    );
    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("cannot create {p:?}: {e}");
                return EXIT_ERROR;
            }
        },
        None => Box::new(std::io::stdout()),
    };
    // every line is flushed immediately so an interrupted run leaves a valid
    // JSON-lines prefix on disk
    let mut emit = |value: serde_json::Value| -> bool {
        let line = serde_json::to_string(&value).expect("serializable line");
        let ok = writeln!(sink, "{line}").is_ok() && sink.flush().is_ok();
        if args.out.is_some() {
            println!("{line}");
        }
        ok
    };
    if !emit(json!({"manifest": manifest})) {
        return EXIT_ERROR;
    }

    match cfg.kind.as_str() {
        "toda" => {
            let (Some(a0), Some(kappa), Some(ainf)) = (&cfg.alpha0, cfg.kappa, &cfg.alpha_inf)
            else {
                eprintln!("kind = \"toda\" requires alpha0, kappa and alpha_inf");
                return EXIT_CONFIG;
            };
            let (a0, ainf) = match (a0.decode(), ainf.decode()) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("config validation: {e}");
                    return EXIT_CONFIG;
                }
            };
            if !(cfg.gamma > 0.0 && cfg.gamma < std::f64::consts::SQRT_2) {
                eprintln!("config validation: toda gamma must lie in (0, sqrt2)");
                return EXIT_CONFIG;
            }
            let params = TodaParams::new(cfg.gamma, cfg.mu);
            let input = ThreePointInput::new(a0, kappa, ainf, params);
            let run = match gmc::mc_three_point(&input, &cfg.grid, cfg.n_samples, cfg.seed) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("mc run failed: {e}");
                    return EXIT_ERROR;
                }
            };
            for w in &run.warnings {
                if !emit(json!({"warning": w})) {
                    return EXIT_ERROR;
                }
            }
            for lv in &run.levels {
                if !emit(json!({"level": lv, "config_hash": manifest.config_hash})) {
                    return EXIT_ERROR;
                }
            }
            if args.compare.as_deref() == Some("fali") {
                match exact::extended_three_point(&input) {
                    Ok(v) if v.is_finite() => {
                        let exact_v = v.value.to_f64();
                        let fin = run.final_level();
                        let z = (fin.estimate_f64 - exact_v) / fin.stderr_f64.max(1e-300);
                        if !emit(json!({
                            "compare": "fali",
                            "exact": exact_v,
                            "exact_str": fmt17(exact_v),
                            "estimate": fin.estimate_f64,
                            "stderr": fin.stderr_f64,
                            "z_score": z,
                            "rel_error": (fin.estimate_f64 - exact_v).abs() / exact_v.abs(),
                        })) {
                            return EXIT_ERROR;
                        }
                    }
                    Ok(v) => {
                        if !emit(json!({"compare": "fali", "tri": format!("{:?}", v.tri), "flags": v.flags})) {
                            return EXIT_ERROR;
                        }
                    }
                    Err(e) => {
                        if !emit(json!({"compare": "fali", "error": format!("{e}")})) {
                            return EXIT_ERROR;
                        }
                    }
                }
            }
        }
        "liouville" | "liouville-extended" => {
            let Some(a) = cfg.weights else {
                eprintln!("scalar kinds require weights = [a1, a2, a3]");
                return EXIT_CONFIG;
            };
            if !(cfg.gamma > 0.0 && cfg.gamma < 2.0) {
                eprintln!("config validation: Liouville gamma must lie in (0, 2)");
                return EXIT_CONFIG;
            }
            let mu = cfg.mu[0];
            if cfg.kind == "liouville" {
                let run = match gmc::mc_liouville_dozz(a, cfg.gamma, mu, &cfg.grid, cfg.n_samples, cfg.seed) {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("mc run failed: {e}");
                        return EXIT_ERROR;
                    }
                };
                for w in &run.warnings {
                    if !emit(json!({"warning": w})) {
                        return EXIT_ERROR;
                    }
                }
                for lv in &run.levels {
                    if !emit(json!({"level": lv, "config_hash": manifest.config_hash})) {
                        return EXIT_ERROR;
                    }
                }
                if args.compare.as_deref() == Some("dozz") {
                    match exact::dozz_log(a[0], a[1], a[2], cfg.gamma, mu) {
                        Ok(v) if v.is_finite() => {
                            let exact_v = v.value.to_f64();
                            let fin = run.final_level();
                            let z = (fin.estimate_f64 - exact_v) / fin.stderr_f64.max(1e-300);
                            if !emit(json!({
                                "compare": "dozz",
                                "exact": exact_v,
                                "exact_str": fmt17(exact_v),
                                "estimate": fin.estimate_f64,
                                "stderr": fin.stderr_f64,
                                "z_score": z,
                                "rel_error": (fin.estimate_f64 - exact_v).abs() / exact_v.abs(),
                            })) {
                                return EXIT_ERROR;
                            }
                        }
                        Ok(v) => {
                            if !emit(json!({"compare": "dozz", "tri": format!("{:?}", v.tri)})) {
                                return EXIT_ERROR;
                            }
                        }
                        Err(e) => {
                            if !emit(json!({"compare": "dozz", "error": format!("{e}")})) {
                                return EXIT_ERROR;
                            }
                        }
                    }
                }
            } else {
                let run = match gmc::mc_extended_liouville(
                    a,
                    cfg.gamma,
                    mu,
                    cfg.c_nodes,
                    &cfg.grid,
                    cfg.n_samples,
                    cfg.seed,
                ) {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("mc run failed: {e}");
                        return EXIT_ERROR;
                    }
                };
                if !emit(json!({"extended": run, "config_hash": manifest.config_hash})) {
                    return EXIT_ERROR;
                }
                if args.compare.as_deref() == Some("dozz") {
                    match exact::dozz_log(a[0], a[1], a[2], cfg.gamma, mu) {
                        Ok(v) if v.is_finite() => {
                            let exact_v = v.value.to_f64();
                            let z = (run.estimate - exact_v) / run.stderr.max(1e-300);
                            if !emit(json!({
                                "compare": "dozz",
                                "exact": exact_v,
                                "estimate": run.estimate,
                                "stderr": run.stderr,
                                "z_score": z,
                                "rel_error": (run.estimate - exact_v).abs() / exact_v.abs(),
                            })) {
                                return EXIT_ERROR;
                            }
                        }
                        _ => {
                            if !emit(json!({"compare": "dozz", "error": "exact value unavailable"})) {
                                return EXIT_ERROR;
                            }
                        }
                    }
                }
            }
        }
        other => {
            eprintln!("unknown run kind {other:?}; expected toda | liouville | liouville-extended");
            return EXIT_CONFIG;
        }
    }
    EXIT_OK
}

pub fn blocks(args: BlocksArgs) -> u8 {
    use toda_core::blocks::{
        block_h, crossing_coefficient, ode_residual, BlockFn, BlockParams,
    };
    if args.a.len() != 3 || args.b.len() != 2 {
        eprintln!("--a needs three values and --b two");
        return EXIT_USAGE;
    }
    let p = BlockParams::new([args.a[0], args.a[1], args.a[2]], [args.b[0], args.b[1]]);
    let (a1, a2) = match (
        crossing_coefficient(1, &p.a, &p.b),
        crossing_coefficient(2, &p.a, &p.b),
    ) {
        (Ok(x), Ok(y)) => (x.to_f64(), y.to_f64()),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("crossing coefficients unavailable: {e}");
            return EXIT_ERROR;
        }
    };
    let zs: Vec<Complex64> = if let Some(r) = args.ring {
        (0..args.ring_points)
            .map(|k| {
                Complex64::from_polar(
                    r,
                    2.0 * std::f64::consts::PI * (k as f64 + 0.5) / args.ring_points as f64,
                )
            })
            .collect()
    } else {
        if args.grid.len() != 3 {
            eprintln!("--grid needs start,stop,step");
            return EXIT_USAGE;
        }
        let (start, stop, step) = (args.grid[0], args.grid[1], args.grid[2]);
        if step <= 0.0 {
            eprintln!("--grid step must be positive");
            return EXIT_USAGE;
        }
        let mut v = Vec::new();
        let mut x = start;
        while x <= stop + 1e-12 {
            v.push(Complex64::new(x, 0.0));
            x += step;
        }
        v
    };

    let mut out = String::new();
    out.push_str(
        "z_re,z_im,H0_re,H0_im,H1_re,H1_im,H2_re,H2_im,crossing,ode_resid_H0,ode_resid_H1,ode_resid_H2,status\n",
    );
    for z in zs {
        let mut row = format!("{:.17e},{:.17e},", z.re, z.im);
        let hs: Result<Vec<Complex64>, _> = (0..=2).map(|i| block_h(i, &p, z)).collect();
        match hs {
            Ok(hs) => {
                for h in &hs {
                    row.push_str(&format!("{:.17e},{:.17e},", h.re, h.im));
                }
                let cross = hs[0].norm_sqr() + a1 * hs[1].norm_sqr() + a2 * hs[2].norm_sqr();
                row.push_str(&format!("{cross:.17e},"));
                let mut ok = true;
                for i in 0..=2 {
                    match ode_residual(&p, BlockFn::H(i), z) {
                        Ok(r) => row.push_str(&format!("{r:.3e},")),
                        Err(_) => {
                            row.push_str("nan,");
                            ok = false;
                        }
                    }
                }
                row.push_str(if ok { "ok" } else { "residual-domain" });
            }
            Err(e) => {
                row.push_str(",,,,,,,,,,");
                row.push_str(&format!("domain:{e}"));
            }
        }
        out.push_str(&row);
        out.push('\n');
    }
    match &args.out {
        Some(pth) => {
            if std::fs::write(pth, &out).is_err() {
                return EXIT_ERROR;
            }
            println!("wrote {}", pth.display());
        }
        None => print!("{out}"),
    }
    EXIT_OK
}
