use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use translen_core::bounds::{asymptotic_fit, bound_report, penner_sweep, SurfaceSig};
use translen_core::exactmat::IntMatrix;
use translen_core::homology::{
    compose_word, default_escape_cap, escape_iterate, lefschetz, psi_preset, EscapeOutcome, TwistWord,
};
use translen_core::parallel::{map_ordered, with_threads, Execution};
use translen_core::penner::{penner_upper_bound, vanishing_certificate, PennerSpec};
use translen_core::rational::{format_ratio, round_sig15, Rational};
use translen_core::symfun::{
    elementary_from_power, enumerate_bounded_reciprocal_with, newton_check, p_next, DEFAULT_ENUMERATION_DEGREE_CAP,
    DEFAULT_PARTITION_CAP,
};

use crate::sweep_csv::{points, read_table, write_sweep};
use crate::{
    BoundsCommand, CertifyArgs, CliError, Command, EnumerateArgs, EscapeArgs, FitArgs, HomologyCommand, LefschetzArgs,
    NewtonArgs, PennerCommand, ReportArgs, SweepArgs, SymfunCommand, EXIT_FAILURE, EXIT_OK,
};

type CmdResult = Result<i32, CliError>;

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Penner(PennerCommand::Certify(a)) => certify(a, out),
        Command::Penner(PennerCommand::Sweep(a)) => sweep(a, out),
        Command::Symfun(SymfunCommand::NewtonCheck(a)) => newton(a, out),
        Command::Symfun(SymfunCommand::Enumerate(a)) => enumerate(a, out),
        Command::Homology(HomologyCommand::Lefschetz(a)) => lefschetz_cmd(a, out),
        Command::Homology(HomologyCommand::Escape(a)) => escape(a, out),
        Command::Bounds(BoundsCommand::Report(a)) => report(a, out),
        Command::Bounds(BoundsCommand::Fit(a)) => fit(a, out),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string())),
    }
}

fn emit_json(path: Option<&PathBuf>, value: &Value, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    emit(path, &text, out)
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("library JSON is valid")
}

fn load_spec(path: Option<&PathBuf>) -> Result<PennerSpec, CliError> {
    match path {
        Some(p) => Ok(PennerSpec::from_json(&read_input(p)?)?),
        None => Ok(PennerSpec::default()),
    }
}

fn ratio_text(q: &Rational) -> Value {
    Value::String(format_ratio(q))
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn certify(a: CertifyArgs, out: &mut dyn Write) -> CmdResult {
    let spec = load_spec(a.config.as_ref())?;
    let cert = vanishing_certificate(&spec)?;
    let mut report = json!({
        "config": { "command": "penner certify", "spec": parse_json(&spec.to_json()) },
        "certificate": cert.to_json_value(),
    });
    if cert.certified {
        let bound = penner_upper_bound(&spec)?;
        report["upper_bound"] = json!({
            "m": bound.m,
            "exact_bound": ratio_text(&bound.exact_bound),
            "closed_form": ratio_text(&bound.closed_form),
            "closed_form_dominates": bound.closed_form_dominates(),
        });
    }
    emit_json(a.out.as_ref(), &report, out)?;
    Ok(exit_for(cert.certified))
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> CmdResult {
    if a.m_min < 4 || a.m_max < a.m_min {
        return Err(CliError::Input(format!("need 4 <= m-min <= m-max, got {}..{}", a.m_min, a.m_max)));
    }
    let mut template = match &a.config {
        Some(path) => {
            let spec = load_spec(Some(path))?;
            if a.r.is_some_and(|r| r != spec.r) {
                return Err(CliError::Input(format!("--r {} disagrees with config r = {}", a.r.unwrap(), spec.r)));
            }
            spec
        }
        None => PennerSpec::all_ones(a.r.unwrap_or(1), a.m_min),
    };
    template.m = a.m_min;
    template.validate()?;
    let ms: Vec<u64> = (a.m_min as u64..=a.m_max as u64).collect();
    let rows = with_threads(a.threads, || penner_sweep(&template, ms, a.alpha_c, Execution::Parallel))?;

    let mut spec_echo = parse_json(&template.to_json());
    if let Some(obj) = spec_echo.as_object_mut() {
        obj.remove("m");
    }
    let config = json!({
        "command": "penner sweep",
        "r": template.r,
        "m_min": a.m_min,
        "m_max": a.m_max,
        "alpha_c": a.alpha_c,
        "spec": spec_echo,
    });
    emit(a.out.as_ref(), &write_sweep(&config, &rows)?, out)?;
    Ok(EXIT_OK)
}

fn elementary_direct(mu: &[i64]) -> Vec<Rational> {
    let mut e = vec![BigInt::from(1)];
    for &m in mu {
        e.push(BigInt::from(0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1].clone();
            e[k] += prev * m;
        }
    }
    e.into_iter().map(Rational::from_integer).collect()
}

fn power_sums_direct(mu: &[i64], k: usize) -> Vec<Rational> {
    (1..=k as u32)
        .map(|j| Rational::from_integer(mu.iter().map(|&m| BigInt::from(m).pow(j)).sum()))
        .collect()
}

/// All identity checks for one multiset of size `n`.
fn newton_trial(mu: &[i64]) -> Result<bool, CliError> {
    let n = mu.len();
    let e = elementary_direct(mu);
    let p = power_sums_direct(mu, n + 1);
    for k in 1..=n {
        if !newton_check(k, &e, &p) || elementary_from_power(k, &p)? != e[k] {
            return Ok(false);
        }
    }
    let next = p_next(n, &p[..n])?;
    Ok(next.agree() && next.newton == p[n])
}

fn newton(a: NewtonArgs, out: &mut dyn Write) -> CmdResult {
    if a.degree == 0 || a.degree > DEFAULT_PARTITION_CAP {
        return Err(CliError::Input(format!("degree must be in 1..={DEFAULT_PARTITION_CAP}, got {}", a.degree)));
    }
    if a.max_entry < 0 {
        return Err(CliError::Input("max-entry must be nonnegative".into()));
    }
    let seeds: Vec<u64> = (0..a.trials).map(|i| a.seed.wrapping_add(i)).collect();
    let (degree, max) = (a.degree, a.max_entry);
    let results = with_threads(a.threads, || {
        map_ordered(seeds.clone(), Execution::Parallel, |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mu: Vec<i64> = (0..degree).map(|_| rng.random_range(-max..=max)).collect();
            newton_trial(&mu)
        })
    });

    let config = json!({
        "command": "symfun newton-check",
        "degree": a.degree,
        "trials": a.trials,
        "seed": a.seed,
        "max_entry": a.max_entry,
    });
    let mut writer = csv::Writer::from_writer(Vec::new());
    let failure = |e: csv::Error| CliError::Failure(e.to_string());
    writer.write_record(["seed", "N", "result"]).map_err(failure)?;
    let mut all_pass = true;
    for (seed, result) in seeds.iter().zip(results) {
        let pass = result?;
        all_pass &= pass;
        let verdict = if pass { "pass" } else { "fail" };
        writer.write_record([seed.to_string(), a.degree.to_string(), verdict.to_string()]).map_err(failure)?;
    }
    let body = String::from_utf8(writer.into_inner().map_err(|e| CliError::Failure(e.to_string()))?)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    emit(a.out.as_ref(), &format!("# config: {config}\n{body}"), out)?;
    Ok(exit_for(all_pass))
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let found = with_threads(a.threads, || {
        enumerate_bounded_reciprocal_with(a.degree, a.delta, DEFAULT_ENUMERATION_DEGREE_CAP, Execution::Parallel)
    })?;
    let polys: Vec<Vec<String>> =
        found.iter().map(|q| q.coefficients().iter().map(BigInt::to_string).collect()).collect();
    let report = json!({
        "config": { "command": "symfun enumerate", "degree": a.degree, "delta": a.delta },
        "count": polys.len(),
        "polynomials": polys,
    });
    emit_json(a.out.as_ref(), &report, out)?;
    Ok(EXIT_OK)
}

fn lefschetz_cmd(a: LefschetzArgs, out: &mut dyn Write) -> CmdResult {
    let (word, source) = match (&a.word, a.psi) {
        (Some(path), _) => (TwistWord::from_json(&read_input(path)?)?, Value::String("file".into())),
        (None, Some(n)) => (psi_preset(a.genus, n)?, json!({ "psi_preset": { "genus": a.genus, "punctures": n } })),
        (None, None) => return Err(CliError::Input("one of --word or --psi is required".into())),
    };
    if word.space.genus() != a.genus {
        return Err(CliError::Input(format!("word has genus {}, expected {}", word.space.genus(), a.genus)));
    }
    let f = compose_word(&word)?;
    let l = lefschetz(&f, a.genus)?;
    let report = json!({
        "config": { "command": "homology lefschetz", "genus": a.genus, "source": source, "word": parse_json(&word.to_json()) },
        "trace": f.trace().to_string(),
        "lefschetz": l.to_string(),
        "matrix": parse_json(&f.to_json()),
    });
    emit_json(a.out.as_ref(), &report, out)?;
    Ok(EXIT_OK)
}

fn escape(a: EscapeArgs, out: &mut dyn Write) -> CmdResult {
    let m = IntMatrix::from_json(&read_input(&a.matrix)?)?;
    let cap = a.cap.unwrap_or_else(|| default_escape_cap(m.rows()));
    let outcome = escape_iterate(&m, cap)?;
    let report = json!({
        "config": { "command": "homology escape", "matrix": parse_json(&m.to_json()), "cap": cap },
        "outcome": serde_json::to_value(&outcome).map_err(|e| CliError::Failure(e.to_string()))?,
    });
    emit_json(a.out.as_ref(), &report, out)?;
    Ok(exit_for(!matches!(outcome, EscapeOutcome::CapExhausted { .. })))
}

fn report(a: ReportArgs, out: &mut dyn Write) -> CmdResult {
    let sig = SurfaceSig::new(a.genus, a.punctures)?;
    let template = load_spec(a.config.as_ref())?;
    let r = bound_report(&sig, a.alpha_c, Some(&template))?;
    let mut spec_echo = parse_json(&template.to_json());
    if let Some(obj) = spec_echo.as_object_mut() {
        obj.remove("m");
    }
    let mut value = serde_json::to_value(&r).map_err(|e| CliError::Failure(e.to_string()))?;
    value["config"] = json!({
        "command": "bounds report",
        "genus": a.genus,
        "punctures": a.punctures,
        "alpha_c": a.alpha_c,
        "penner_template": spec_echo,
    });
    emit_json(a.out.as_ref(), &value, out)?;
    Ok(exit_for(r.sandwich))
}

fn fit(a: FitArgs, out: &mut dyn Write) -> CmdResult {
    let table = read_table(&read_input(&a.input)?)?;
    let pts = points(&table, &a.x, &a.y)?;
    let f = asymptotic_fit(&pts)?;
    let report = json!({
        "config": { "command": "bounds fit", "x": a.x, "y": a.y, "source_config": table.config },
        "rows_read": table.rows.len(),
        "points": f.points,
        "slope": round_sig15(f.slope),
        "intercept": round_sig15(f.intercept),
        "r_squared": round_sig15(f.r_squared),
    });
    emit_json(a.out.as_ref(), &report, out)?;
    Ok(EXIT_OK)
}
