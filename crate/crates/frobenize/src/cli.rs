//! The `frobenize` command-line tool: analyze operators, list admissible
//! primes with their Frobenius periods, certify mod-p algebraicity, and
//! expand series. Output is deterministic for identical inputs; timings go
//! to stderr as comments so stdout stays byte-stable.

use crate::certify::{certify, oracle_min_poly, CertifyOptions, CertifyProblem, HypSeries};
use crate::error::{Error, Result};
use crate::families::{hypergeometric_operator, jordan_pochhammer_operator, order_one_operator};
use crate::operator::{DiffOp, SingularPoint};
use crate::parser::{parse_operator, parse_ratfun};
use crate::primes::{
    analyze_operator_primes, hypergeometric_prime_set, prime_set, uniform_period_hypergeometric,
};
use crate::rat::Rat;
use crate::rigidity::{
    assume_semisimple_local_data, hypergeometric_local_data, katz_rigidity, pochhammer_local_data,
    RigidityReport,
};
use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::io::Write;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "frobenize",
    version,
    about = "Exact analysis of Fuchsian operators over Q(z): singular data, rigidity, Frobenius prime sets, mod-p algebraicity certificates",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (prime tables only).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Operator expression, e.g. "D^2 + ((1-2*z)/(z*(1-z)))*D - 1/(4*z*(1-z))".
    #[arg(long, value_name = "EXPR")]
    op: Option<String>,
    /// Family name: hypergeometric | pochhammer | order1.
    #[arg(long, value_name = "NAME")]
    family: Option<String>,
    /// Hypergeometric alphas, comma separated rationals (a/b).
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "RAT,..",
        allow_hyphen_values = true
    )]
    alpha: Vec<String>,
    /// Hypergeometric betas: n-1 entries (series convention, beta_n = 1
    /// implicit) or n entries (operator convention).
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "RAT,..",
        allow_hyphen_values = true
    )]
    beta: Vec<String>,
    /// Jordan-Pochhammer parameter a.
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    a: Option<String>,
    /// Jordan-Pochhammer singular points, pairwise distinct.
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "RAT,..",
        allow_hyphen_values = true
    )]
    alphas: Vec<String>,
    /// Jordan-Pochhammer residue parameters b_i.
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "RAT,..",
        allow_hyphen_values = true
    )]
    bs: Vec<String>,
    /// Order-1 coefficient Q(z) for d/dz - Q.
    #[arg(long, value_name = "EXPR")]
    q: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular points, Fuchs test, exponent table, rigidity report.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        /// For --op sources: guess semisimple local monodromy from exponents
        /// (heuristic; family constructors carry certified Jordan data).
        #[arg(long)]
        assume_semisimple: bool,
    },
    /// Admissible-prime table with uniform and minimal Frobenius periods.
    Primes {
        #[command(flatten)]
        source: SourceArgs,
        /// Largest prime tested.
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Certify mod-p algebraicity by an explicit Frobenius-semilinear relation.
    Certify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        p: u64,
        /// Maximal twist level (default n^2).
        #[arg(long)]
        jmax: Option<u32>,
        /// Coefficient-degree cap for the escalating search.
        #[arg(long, default_value_t = 512)]
        degmax: u32,
        /// Floor on the working precision (raises verified_to).
        #[arg(long, default_value_t = 0)]
        precision: usize,
        /// Cross-check with the brute-force minimal-polynomial oracle.
        #[arg(long)]
        oracle: bool,
        /// Override the refined-bound dimension r.
        #[arg(long)]
        refined_r: Option<u32>,
        /// Proceed even when p fails the admissibility test.
        #[arg(long)]
        force: bool,
    },
    /// Print series coefficients over Q and, when integral, mod p.
    Expand {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        p: Option<u64>,
        /// Number of coefficients printed.
        #[arg(long, default_value_t = 16)]
        precision: usize,
    },
}

/// A resolved input source.
enum Source {
    Op(DiffOp),
    Hypergeometric {
        alpha: Vec<Rat>,
        beta_full: Vec<Rat>,
    },
    Pochhammer {
        a: Rat,
        alphas: Vec<Rat>,
        bs: Vec<Rat>,
    },
    Order1(crate::ratfun::RatFun),
}

impl Source {
    fn echo(&self) -> String {
        fn list(v: &[Rat]) -> String {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            Source::Op(op) => format!("op {op}"),
            Source::Hypergeometric { alpha, beta_full } => {
                format!(
                    "hypergeometric alpha=[{}] beta=[{}]",
                    list(alpha),
                    list(beta_full)
                )
            }
            Source::Pochhammer { a, alphas, bs } => {
                format!(
                    "pochhammer a={a} alphas=[{}] bs=[{}]",
                    list(alphas),
                    list(bs)
                )
            }
            Source::Order1(q) => format!("order1 Q={q}"),
        }
    }

    /// The operator this source denotes, monic in the d/dz basis.
    fn operator(&self) -> Result<DiffOp> {
        match self {
            Source::Op(op) => op.ddz_monic(),
            Source::Hypergeometric { alpha, beta_full } => {
                hypergeometric_operator(alpha, beta_full)?
                    .to_ddz()?
                    .ddz_monic()
            }
            Source::Pochhammer { a, alphas, bs } => jordan_pochhammer_operator(a, alphas, bs),
            Source::Order1(q) => order_one_operator(q),
        }
    }

    /// Series-level hypergeometric parameters (n alphas, n-1 betas), when the
    /// source is a hypergeometric family whose last beta is 1.
    fn hyp_series(&self) -> Option<Result<HypSeries>> {
        match self {
            Source::Hypergeometric { alpha, beta_full } => {
                if beta_full.last() != Some(&Rat::one()) {
                    return Some(Err(Error::Input(
                        "series-level certification needs beta_n = 1 (give n-1 betas)".into(),
                    )));
                }
                let beta = beta_full[..beta_full.len() - 1].to_vec();
                Some(HypSeries::new(alpha.clone(), beta).map(|(s, _)| s))
            }
            _ => None,
        }
    }

    fn certify_problem(&self) -> Result<CertifyProblem> {
        match self.hyp_series() {
            Some(spec) => CertifyProblem::hypergeometric(spec?),
            None => CertifyProblem::from_operator(self.operator()?),
        }
    }

    /// Singular locus declared by the family itself. Degenerate parameters
    /// can cancel a point out of the monic coefficients, so the analyze
    /// report keeps the declared points alongside the computed ones.
    fn declared_points(&self) -> Option<Vec<SingularPoint>> {
        match self {
            Source::Hypergeometric { .. } => Some(vec![
                SingularPoint::Finite(Rat::zero()),
                SingularPoint::Finite(Rat::one()),
                SingularPoint::Infinity,
            ]),
            Source::Pochhammer { alphas, .. } => Some(
                alphas
                    .iter()
                    .cloned()
                    .map(SingularPoint::Finite)
                    .chain([SingularPoint::Infinity])
                    .collect(),
            ),
            _ => None,
        }
    }
}

fn parse_rats(values: &[String], what: &str) -> Result<Vec<Rat>> {
    values
        .iter()
        .map(|s| {
            s.parse::<Rat>()
                .map_err(|e| Error::Input(format!("{what}: {e}")))
        })
        .collect()
}

fn resolve_source(args: &SourceArgs) -> Result<(Source, Vec<String>)> {
    let mut warnings = Vec::new();
    match (&args.op, &args.family) {
        (Some(_), Some(_)) => Err(Error::Input("give exactly one of --op and --family".into())),
        (Some(expr), None) => Ok((Source::Op(parse_operator(expr)?), warnings)),
        (None, Some(name)) => match name.as_str() {
            "hypergeometric" => {
                let alpha = parse_rats(&args.alpha, "--alpha")?;
                let beta = parse_rats(&args.beta, "--beta")?;
                if alpha.is_empty() {
                    return Err(Error::Input("--alpha required for hypergeometric".into()));
                }
                let beta_full: Vec<Rat> = if beta.len() + 1 == alpha.len() {
                    beta.iter().cloned().chain([Rat::one()]).collect()
                } else if beta.len() == alpha.len() {
                    beta
                } else {
                    return Err(Error::Input(format!(
                        "need {} or {} betas for {} alphas",
                        alpha.len() - 1,
                        alpha.len(),
                        alpha.len()
                    )));
                };
                if !crate::families::hypergeometric_irreducible(&alpha, &beta_full) {
                    warnings.push(
                        "some alpha_i - beta_j is an integer: the operator is reducible"
                            .to_string(),
                    );
                }
                Ok((Source::Hypergeometric { alpha, beta_full }, warnings))
            }
            "pochhammer" => {
                let a = args
                    .a
                    .as_ref()
                    .ok_or_else(|| Error::Input("--a required for pochhammer".into()))?
                    .parse::<Rat>()?;
                let alphas = parse_rats(&args.alphas, "--alphas")?;
                let bs = parse_rats(&args.bs, "--bs")?;
                if alphas.is_empty() || alphas.len() != bs.len() {
                    return Err(Error::Input(
                        "--alphas and --bs must be nonempty and of equal length".into(),
                    ));
                }
                Ok((Source::Pochhammer { a, alphas, bs }, warnings))
            }
            "order1" => {
                let q = args
                    .q
                    .as_ref()
                    .ok_or_else(|| Error::Input("--q required for order1".into()))?;
                Ok((Source::Order1(parse_ratfun(q)?), warnings))
            }
            other => Err(Error::Input(format!(
                "unknown family '{other}' (expected hypergeometric | pochhammer | order1)"
            ))),
        },
        (None, None) => Err(Error::Input("give --op <expr> or --family <name>".into())),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::MixedBasis { .. }
        | Error::ZeroLeadingCoeff { .. }
        | Error::ZeroOperator => 2,
        Error::Input(_)
        | Error::SplitFailure { .. }
        | Error::IrregularPoint { .. }
        | Error::NotFuchsian { .. }
        | Error::Resonance { .. }
        | Error::UndefinedSeries { .. }
        | Error::NonIntegral { .. }
        | Error::NotInPrimeSet { .. }
        | Error::PrecisionInsufficient { .. } => 3,
        Error::NotFound { .. } => 4,
        Error::RedFlag { .. } => 5,
    }
}

fn rat_list_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn rigidity_json(rep: &RigidityReport, heuristic: bool) -> Value {
    json!({
        "applicable": rep.applicable,
        "omegas": rep.omegas,
        "sum": rep.sum,
        "target": rep.target,
        "rigid": rep.rigid,
        "heuristic": heuristic,
    })
}

fn rigidity_text(rep: &RigidityReport, heuristic: bool) -> String {
    let omegas = rep
        .omegas
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "applicable={} omegas=[{omegas}] sum={} target={} rigid={}{}",
        if rep.applicable { "yes" } else { "no" },
        rep.sum,
        rep.target,
        if rep.rigid { "yes" } else { "no" },
        if heuristic {
            " (heuristic: semisimplicity assumed)"
        } else {
            ""
        },
    )
}

/// Rigidity data for a source, when available: (report, heuristic?).
fn rigidity_for(
    source: &Source,
    op: &DiffOp,
    assume_semisimple: bool,
) -> Result<Option<(RigidityReport, bool)>> {
    match source {
        Source::Hypergeometric { alpha, beta_full } => {
            let (types, irr) = hypergeometric_local_data(alpha, beta_full)?;
            Ok(Some((katz_rigidity(&types, alpha.len(), irr)?, false)))
        }
        Source::Pochhammer { a, alphas, bs } => {
            let (types, irr) = pochhammer_local_data(a, alphas, bs)?;
            Ok(Some((katz_rigidity(&types, alphas.len(), irr)?, false)))
        }
        Source::Order1(_) => {
            // Order 1: semisimple local data is exact and a one-dimensional
            // representation is always irreducible.
            let types = assume_semisimple_local_data(op)?;
            Ok(Some((katz_rigidity(&types, 1, true)?, false)))
        }
        Source::Op(_) => {
            if assume_semisimple {
                let types = assume_semisimple_local_data(op)?;
                let n = op.order();
                Ok(Some((katz_rigidity(&types, n, false)?, true)))
            } else {
                Ok(None)
            }
        }
    }
}

fn cmd_analyze<W: Write>(
    source: &Source,
    warnings: &[String],
    assume_semisimple: bool,
    json_mode: bool,
    out: &mut W,
) -> Result<()> {
    let op = source.operator()?;
    let mut points = op.singular_points()?;
    // Keep the family's declared locus: degenerate parameters may have
    // cancelled a point out of the monic coefficients (it is then an
    // ordinary point of the reduced operator, listed with exponents 0..n-1).
    if let Some(declared) = source.declared_points() {
        for pt in declared {
            if !points.contains(&pt) {
                points.push(pt);
            }
        }
        points.sort();
    }
    let fuchs = op.is_fuchsian()?;
    let mut exponents = Vec::new();
    if fuchs.fuchsian {
        for pt in &points {
            exponents.push(op.exponents(pt)?);
        }
    }
    let rigidity = if fuchs.fuchsian {
        rigidity_for(source, &op, assume_semisimple)?
    } else {
        None
    };

    if json_mode {
        let doc = json!({
            "command": "analyze",
            "source": source.echo(),
            "operator": op.to_string(),
            "order": op.order(),
            "singular_points": points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "fuchsian": fuchs.fuchsian,
            "fuchs_report": fuchs.points.iter()
                .map(|(pt, ok)| json!({"point": pt.to_string(), "regular": ok}))
                .collect::<Vec<_>>(),
            "exponents": exponents.iter()
                .map(|e| json!({"point": e.point.to_string(), "exponents": rat_list_json(&e.exponents)}))
                .collect::<Vec<_>>(),
            "rigidity": rigidity.as_ref().map(|(rep, h)| rigidity_json(rep, *h)),
            "warnings": warnings,
        });
        writeln!(out, "{doc}").ok();
        return Ok(());
    }
    writeln!(out, "command: analyze").ok();
    writeln!(out, "source: {}", source.echo()).ok();
    writeln!(out, "operator: {op}").ok();
    writeln!(out, "order: {}", op.order()).ok();
    let pts = points
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(
        out,
        "singular points: {}",
        if pts.is_empty() { "none" } else { &pts }
    )
    .ok();
    writeln!(
        out,
        "fuchsian: {}",
        if fuchs.fuchsian { "yes" } else { "no" }
    )
    .ok();
    if !fuchs.fuchsian {
        for (pt, ok) in &fuchs.points {
            if !ok {
                writeln!(out, "  irregular at {pt}").ok();
            }
        }
    }
    if !exponents.is_empty() {
        writeln!(out, "exponents:").ok();
        for e in &exponents {
            let list = e
                .exponents
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "  {}: {}", e.point, list).ok();
        }
    }
    match &rigidity {
        Some((rep, heur)) => {
            writeln!(out, "rigidity: {}", rigidity_text(rep, *heur)).ok();
        }
        None => {
            writeln!(
                out,
                "rigidity: not computed (supply a family or --assume-semisimple)"
            )
            .ok();
        }
    }
    for w in warnings {
        writeln!(out, "warning: {w}").ok();
    }
    Ok(())
}

fn verdict_reasons(reasons: &[crate::primes::ExclusionReason]) -> String {
    reasons
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn cmd_primes<W: Write>(
    source: &Source,
    warnings: &[String],
    bound: u64,
    json_mode: bool,
    csv_mode: bool,
    out: &mut W,
) -> Result<()> {
    let op = source.operator()?;
    let data = analyze_operator_primes(&op)?;
    let general = prime_set(&data, bound)?;
    let family = match source {
        Source::Hypergeometric { alpha, beta_full } => {
            Some(hypergeometric_prime_set(alpha, beta_full, bound)?)
        }
        _ => None,
    };
    let phi_d = match source {
        Source::Hypergeometric { alpha, beta_full } => {
            Some(uniform_period_hypergeometric(alpha, beta_full)?)
        }
        _ => None,
    };

    let rows: Vec<Value> = general
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let fam = family.as_ref().map(|f| &f[i]);
            let certified = v.in_s && fam.map(|f| f.in_s).unwrap_or(true);
            let mut reasons = Vec::new();
            if !v.reasons.is_empty() {
                reasons.push(format!("thm1: {}", verdict_reasons(&v.reasons)));
            }
            if let Some(f) = fam {
                if !f.reasons.is_empty() {
                    reasons.push(format!("family: {}", verdict_reasons(&f.reasons)));
                }
            }
            json!({
                "p": v.p,
                "in_s": v.in_s,
                "family_in_s": fam.map(|f| f.in_s),
                "certified": certified,
                "h_uniform": v.h_uniform.as_ref().map(|x| x.to_string()),
                "h_min": v.h_min,
                "reasons": reasons.join("; "),
            })
        })
        .collect();

    if json_mode {
        let doc = json!({
            "command": "primes",
            "source": source.echo(),
            "bound": bound,
            "ambient_set": data.ambient.elements.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "m_shift": data.ambient.m_shift,
            "uniform_period_general": data.l_uniform.to_string(),
            "uniform_period_family_phi_d": phi_d,
            "verdicts": rows,
            "warnings": warnings,
        });
        writeln!(out, "{doc}").ok();
        return Ok(());
    }
    if csv_mode {
        if family.is_some() {
            writeln!(out, "p,thm1,family,certified,h_uniform,h_min,reasons").ok();
        } else {
            writeln!(out, "p,in_s,h_uniform,h_min,reasons").ok();
        }
        for row in &rows {
            let p = row["p"].as_u64().unwrap();
            let in_s = row["in_s"].as_bool().unwrap();
            let hu = row["h_uniform"].as_str().unwrap_or("");
            let hm = row["h_min"]
                .as_u64()
                .map(|x| x.to_string())
                .unwrap_or_default();
            let reasons = row["reasons"].as_str().unwrap_or("");
            if family.is_some() {
                let fam = row["family_in_s"].as_bool().unwrap();
                let cert = row["certified"].as_bool().unwrap();
                writeln!(out, "{p},{in_s},{fam},{cert},{hu},{hm},\"{reasons}\"").ok();
            } else {
                writeln!(out, "{p},{in_s},{hu},{hm},\"{reasons}\"").ok();
            }
        }
        return Ok(());
    }

    writeln!(out, "command: primes").ok();
    writeln!(out, "source: {}", source.echo()).ok();
    writeln!(out, "bound: {bound}").ok();
    let amb = data
        .ambient
        .elements
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(
        out,
        "ambient set: {{{amb}}} (shift m = {})",
        data.ambient.m_shift
    )
    .ok();
    writeln!(
        out,
        "uniform period (general, product of unit-group orders): {}",
        data.l_uniform
    )
    .ok();
    if let Some(phi) = phi_d {
        writeln!(out, "uniform period (family, phi(d)): {phi}").ok();
    }
    if family.is_some() {
        writeln!(
            out,
            "certified = admitted by both the general and family tests"
        )
        .ok();
        writeln!(
            out,
            "{:>5}  {:<5} {:<7} {:<10} {:<7} {:<6} reasons",
            "p", "thm1", "family", "certified", "h_unif", "h_min"
        )
        .ok();
    } else {
        writeln!(
            out,
            "{:>5}  {:<5} {:<7} {:<6} reasons",
            "p", "in_S", "h_unif", "h_min"
        )
        .ok();
    }
    for row in &rows {
        let p = row["p"].as_u64().unwrap();
        let yn = |b: bool| if b { "yes" } else { "no" };
        let in_s = row["in_s"].as_bool().unwrap();
        let hu = row["h_uniform"].as_str().unwrap_or("-").to_string();
        let hm = row["h_min"]
            .as_u64()
            .map(|x| x.to_string())
            .unwrap_or("-".into());
        let reasons = row["reasons"].as_str().unwrap_or("");
        if family.is_some() {
            let fam = row["family_in_s"].as_bool().unwrap();
            let cert = row["certified"].as_bool().unwrap();
            writeln!(
                out,
                "{p:>5}  {:<5} {:<7} {:<10} {:<7} {:<6} {reasons}",
                yn(in_s),
                yn(fam),
                yn(cert),
                hu,
                hm
            )
            .ok();
        } else {
            writeln!(out, "{p:>5}  {:<5} {:<7} {:<6} {reasons}", yn(in_s), hu, hm).ok();
        }
    }
    for w in warnings {
        writeln!(out, "warning: {w}").ok();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify<W: Write>(
    source: &Source,
    warnings: &[String],
    p: u64,
    jmax: Option<u32>,
    degmax: u32,
    precision: usize,
    oracle: bool,
    refined_r: Option<u32>,
    force: bool,
    json_mode: bool,
    out: &mut W,
) -> Result<()> {
    let problem = source.certify_problem()?;
    let opts = CertifyOptions {
        j_max: jmax,
        deg_start: 64.min(degmax.max(1)),
        deg_cap: degmax.max(1),
        min_precision: precision,
        refined_r,
        force,
    };
    let cert = certify(&problem, p, &opts)?;
    let rel = &cert.relation;
    let f = problem.series_fp(p, rel.verified_to)?;
    debug_assert!(rel.residual(&f, rel.verified_to).is_zero());

    // Optional brute-force cross-check, capped to stay desk-scale.
    let oracle_result = if oracle {
        let d_max = cert.degree_bound.to_u32().unwrap_or(16).clamp(1, 16);
        let deg_for_oracle = (2 * p as u32).clamp(16, 128);
        match oracle_min_poly(&f, d_max, deg_for_oracle, 0) {
            Ok(mp) => Some(Ok(mp)),
            Err(Error::NotFound { detail }) => Some(Err(detail)),
            Err(Error::PrecisionInsufficient { needed, .. }) => {
                let f2 = problem.series_fp(p, needed)?;
                match oracle_min_poly(&f2, d_max, deg_for_oracle, 0) {
                    Ok(mp) => Some(Ok(mp)),
                    Err(Error::NotFound { detail }) => Some(Err(detail)),
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    if json_mode {
        let doc = json!({
            "command": "certify",
            "source": source.echo(),
            "p": p,
            "h": cert.h,
            "n": cert.n,
            "relation": {
                "j": rel.j,
                "deg": rel.deg,
                "verified_to": rel.verified_to,
                "r": rel.r.iter().map(|q| q.coeffs().to_vec()).collect::<Vec<_>>(),
            },
            "degree_bound": cert.degree_bound.to_string(),
            "theorem_bound": cert.theorem_bound.to_string(),
            "refined_bound": cert.refined_bound.to_string(),
            "refined_r": cert.refined_r,
            "refined_r_heuristic": cert.refined_r_heuristic,
            "oracle": oracle_result.as_ref().map(|res| match res {
                Ok(mp) => json!({
                    "degree": mp.degree,
                    "verified_to": mp.verified_to,
                    "coeffs": mp.coeffs.iter().map(|q| q.coeffs().to_vec()).collect::<Vec<_>>(),
                }),
                Err(detail) => json!({"not_found": detail}),
            }),
            "warnings": warnings,
        });
        writeln!(out, "{doc}").ok();
        return Ok(());
    }

    writeln!(out, "command: certify").ok();
    writeln!(out, "source: {}", source.echo()).ok();
    writeln!(out, "p: {p}").ok();
    writeln!(out, "order n: {}", cert.n).ok();
    writeln!(out, "minimal period h: {}", cert.h).ok();
    writeln!(
        out,
        "relation: level j = {}, coefficient degree <= {}, verified to z^{}",
        rel.j, rel.deg, rel.verified_to
    )
    .ok();
    for (i, q) in rel.r.iter().enumerate() {
        writeln!(out, "  r_{i} = {q}").ok();
    }
    writeln!(out, "degree bound p^(j*h): {}", cert.degree_bound).ok();
    writeln!(out, "theorem bound p^(n^2*h): {}", cert.theorem_bound).ok();
    writeln!(
        out,
        "refined bound p^(n*r*h): {} (r = {}{})",
        cert.refined_bound,
        cert.refined_r,
        if cert.refined_r_heuristic {
            ", heuristic"
        } else {
            ""
        }
    )
    .ok();
    match &oracle_result {
        Some(Ok(mp)) => {
            writeln!(
                out,
                "oracle: minimal polynomial degree {} (verified to z^{})",
                mp.degree, mp.verified_to
            )
            .ok();
            for (i, q) in mp.coeffs.iter().enumerate() {
                writeln!(out, "  P_{i} = {q}").ok();
            }
        }
        Some(Err(detail)) => {
            writeln!(out, "oracle: not found ({detail})").ok();
        }
        None => {}
    }
    for w in warnings {
        writeln!(out, "warning: {w}").ok();
    }
    Ok(())
}

fn cmd_expand<W: Write>(
    source: &Source,
    warnings: &[String],
    p: Option<u64>,
    n: usize,
    json_mode: bool,
    out: &mut W,
) -> Result<()> {
    let problem = source.certify_problem()?;
    let coeffs = problem.series_coeffs(n)?;
    let reduced = match p {
        Some(p) => Some(match crate::certify::reduce_mod_p(&coeffs, p) {
            Ok(f) => Ok(f),
            Err(Error::NonIntegral { index, p }) => Err((index, p)),
            Err(e) => return Err(e),
        }),
        None => None,
    };
    if json_mode {
        let doc = json!({
            "command": "expand",
            "source": source.echo(),
            "n": n,
            "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "p": p,
            "mod_p": reduced.as_ref().map(|res| match res {
                Ok(f) => json!(f.coeffs().to_vec()),
                Err((index, p)) => json!({"non_integral_index": index, "p": p}),
            }),
            "warnings": warnings,
        });
        writeln!(out, "{doc}").ok();
        return Ok(());
    }
    writeln!(out, "command: expand").ok();
    writeln!(out, "source: {}", source.echo()).ok();
    writeln!(out, "coefficients over Q (N = {n}):").ok();
    for (k, c) in coeffs.iter().enumerate() {
        writeln!(out, "  a({k}) = {c}").ok();
    }
    match &reduced {
        Some(Ok(f)) => {
            let list = f
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "coefficients mod {}: {list}", p.unwrap()).ok();
        }
        Some(Err((index, p))) => {
            writeln!(out, "not {p}-integral: first offending index {index}").ok();
        }
        None => {}
    }
    for w in warnings {
        writeln!(out, "warning: {w}").ok();
    }
    Ok(())
}

/// Parses argv and runs one command, writing the report to `out` and errors
/// to `err`. Returns the process exit code.
pub fn run<W1: Write, W2: Write>(argv: &[String], out: &mut W1, err: &mut W2) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders --help/--version as "errors" that exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                write!(out, "{rendered}").ok();
            } else {
                write!(err, "{rendered}").ok();
            }
            return code;
        }
    };
    if cli.csv && !matches!(cli.command, Command::Primes { .. }) {
        let e = Error::Input("--csv is only available for prime tables".into());
        report_error(&e, err);
        return exit_code(&e);
    }
    let started = Instant::now();
    let result = dispatch(&cli, out);
    writeln!(err, "# elapsed: {:?}", started.elapsed()).ok();
    match result {
        Ok(()) => 0,
        Err(e) => {
            report_error(&e, err);
            exit_code(&e)
        }
    }
}

fn report_error<W: Write>(e: &Error, err: &mut W) {
    let doc = json!({
        "error": {
            "code": exit_code(e),
            "kind": e.code(),
            "message": e.to_string(),
        }
    });
    writeln!(err, "{doc}").ok();
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Analyze {
            source,
            assume_semisimple,
        } => {
            let (source, warnings) = resolve_source(source)?;
            cmd_analyze(&source, &warnings, *assume_semisimple, cli.json, out)
        }
        Command::Primes { source, bound } => {
            let (source, warnings) = resolve_source(source)?;
            cmd_primes(&source, &warnings, *bound, cli.json, cli.csv, out)
        }
        Command::Certify {
            source,
            p,
            jmax,
            degmax,
            precision,
            oracle,
            refined_r,
            force,
        } => {
            let (source, warnings) = resolve_source(source)?;
            cmd_certify(
                &source, &warnings, *p, *jmax, *degmax, *precision, *oracle, *refined_r, *force,
                cli.json, out,
            )
        }
        Command::Expand {
            source,
            p,
            precision,
        } => {
            let (source, warnings) = resolve_source(source)?;
            cmd_expand(&source, &warnings, *p, *precision, cli.json, out)
        }
    }
}
