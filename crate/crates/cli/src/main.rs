//! `atkin`: JSON front end for the verification engine.
//!
//! Exit status: 0 success, 1 usage or input error, 2 a verification
//! residual beyond tolerance.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use atkin_core::acceptance::run_all;
use atkin_core::asymptotic::{
    asymptotic_check, buv_combination, f21_degree_family, watson_rhs, AsymptoticForm,
};
use atkin_core::atkin::{atkin, atkin_normalized};
use atkin_core::genfun::{
    catalan_gen_check, fjk_check, gen0t_check, gen_at_one, gen_at_zero, gen_uy_check, BgenForm, IdentityCheck,
};
use atkin_core::jacobi::{
    assoc_family, atkin_via_representation, im_calV_explicit, wimp_V_explicit, AJParams, Representation, Variant,
};
use atkin_core::supersingular::match_report;
use atkin_core::weight::{WeightContext, GRAM_MAX_DEGREE};
use atkin_core::{Error, Execution, RatPoly, Rational};

/// Significant decimal digits carried by every real in the output: reals are
/// written in shortest round-trip form of an IEEE double.
const FLOAT_DIGITS: u32 = 17;

#[derive(Parser, Debug)]
#[command(name = "atkin", version, about = "Atkin polynomial / associated Jacobi verification engine")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Compact JSON (the default; accepted for symmetry with --pretty).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Run data-parallel kernels on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of A_n (ascending powers).
    Atkin {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Original)]
        scale: ScaleArg,
    },
    /// Associated Jacobi polynomials V_n or calV_n.
    AssocJacobi {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::V)]
        variant: VariantArg,
    },
    /// A_{n+1} through a V / calV representation, compared with the recurrence.
    RepCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        which: RepArg,
        /// Scalar for rep1 (default 455/3456).
        #[arg(long)]
        rep1_coefficient: Option<Rational>,
    },
    /// Explicit 4F3 forms against the recurrences for degrees 0..=n.
    ExplicitCheck {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Large-degree approximations.
    Asymptotic {
        #[arg(long, value_enum)]
        kind: AsymptoticKind,
        #[arg(long, default_value_t = 50)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Evaluation point for `buv`.
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long, value_enum, default_value_t = FormArg::Corrected)]
        form: FormArg,
        /// Parameters (a, b, d) of 2F1(b-n, n+a; d; sin^2 theta) for `f21`.
        #[arg(long, default_value_t = 1.1, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
        d: f64,
        /// Failure threshold (relative error for `atkin`, absolute residual for `buv`).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Generating-function identities: (lhs, rhs, residual).
    Genfun {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
        t: f64,
        /// Truncation index N.
        #[arg(long, default_value_t = 50)]
        terms: usize,
        #[command(flatten)]
        params: OptionalParamArgs,
        /// Parameters (a, b, d) of the bilinear identity.
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.1, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
        d: f64,
        #[arg(long, value_enum, default_value_t = BgenArg::Derived)]
        form: BgenArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Weight function: value at j, grid dump, or moment table.
    Weight {
        /// Evaluate w, phi, phi' at this j in (0, 1728).
        #[arg(long)]
        j: Option<f64>,
        /// Dump (j, w(j)) at this many interior equispaced points.
        #[arg(long)]
        grid: Option<usize>,
        /// Moments int j^k w dj for k = 0..=K.
        #[arg(long)]
        moments: Option<usize>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Gram matrix of A_0..A_n under w.
    Gram {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Supersingular polynomials vs reduced Atkin polynomials for 5 <= p <= pmax.
    Supersingular {
        #[arg(long, default_value_t = 97)]
        pmax: u64,
    },
    /// Run every acceptance criterion.
    Selftest,
}

#[derive(Args, Debug, Serialize)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Rational,
    #[arg(long, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, allow_hyphen_values = true)]
    c: Rational,
}

#[derive(Args, Debug, Serialize)]
struct OptionalParamArgs {
    /// Defaults to (1/2, -2/3, 7/12).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<Rational>,
}

impl ParamArgs {
    fn params(&self) -> AJParams {
        AJParams::new(self.alpha.clone(), self.beta.clone(), self.c.clone())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScaleArg {
    Original,
    Normalized,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum VariantArg {
    V,
    Calv,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum RepArg {
    Rep1,
    Rep2,
    Rep3,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum AsymptoticKind {
    Atkin,
    Buv,
    F21,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormArg {
    Corrected,
    AsPrinted,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BgenArg {
    Derived,
    AsPrinted,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum GenKind {
    Fjk,
    Uy,
    Catalan,
    Zero,
    One,
    Zerot,
}

#[derive(Serialize)]
struct Envelope {
    command: &'static str,
    inputs: Value,
    results: Value,
    provenance: Value,
    float_digits: u32,
    verified: Option<bool>,
}

struct Outcome {
    command: &'static str,
    inputs: Value,
    results: Value,
    provenance: Value,
    /// `Some(false)` maps to exit status 2.
    verified: Option<bool>,
}

fn coeffs(p: &RatPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn identity(c: &IdentityCheck) -> Value {
    json!({ "lhs": c.lhs, "rhs": c.rhs, "residual": c.residual })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    Ok(match &cli.command {
        Command::Atkin { n, scale } => {
            let p = match scale {
                ScaleArg::Original => atkin(*n),
                ScaleArg::Normalized => atkin_normalized(*n),
            };
            Outcome {
                command: "atkin",
                inputs: json!({ "n": n, "scale": scale }),
                results: json!({ "degree": n, "coefficients": coeffs(&p) }),
                provenance: json!({ "atkin": "monic three-term recurrence with seeded A_0, A_1, A_2" }),
                verified: None,
            }
        }
        Command::AssocJacobi { n, params, variant } => {
            let v = match variant {
                VariantArg::V => Variant::V,
                VariantArg::Calv => Variant::CalV,
            };
            let fam = assoc_family(&params.params(), v, *n)?;
            Outcome {
                command: "assoc-jacobi",
                inputs: json!({ "n": n, "alpha": params.alpha, "beta": params.beta, "c": params.c, "variant": variant }),
                results: json!({ "coefficients": coeffs(&fam[*n]) }),
                provenance: json!({ "assoc_jacobi": "associated Jacobi recurrence with birth-death initial step" }),
                verified: None,
            }
        }
        Command::RepCheck { n, which, rep1_coefficient } => {
            let rep = match which {
                RepArg::Rep1 => Representation::Rep1,
                RepArg::Rep2 => Representation::Rep2,
                RepArg::Rep3 => Representation::Rep3,
            };
            let got = atkin_via_representation(*n, rep, rep1_coefficient.as_ref())?;
            let want = atkin_normalized(n + 1);
            let equal = got == want;
            Outcome {
                command: "rep-check",
                inputs: json!({ "n": n, "which": which, "rep1_coefficient": rep1_coefficient }),
                results: json!({
                    "representation": coeffs(&got),
                    "recurrence": coeffs(&want),
                    "equal": equal,
                }),
                provenance: json!({ "representation": "A_{n+1} as a combination of V_n and a second associated solution" }),
                verified: Some(equal),
            }
        }
        Command::ExplicitCheck { n, params } => {
            let p = params.params();
            let v = assoc_family(&p, Variant::V, *n)?;
            let cv = assoc_family(&p, Variant::CalV, *n)?;
            let mut rows = Vec::new();
            let mut all = true;
            for k in 0..=*n {
                let wimp = wimp_V_explicit(k, &p)? == v[k];
                let im = im_calV_explicit(k, &p)? == cv[k];
                all &= wimp && im;
                rows.push(json!({ "n": k, "v_explicit_equal": wimp, "calv_explicit_equal": im }));
            }
            Outcome {
                command: "explicit-check",
                inputs: json!({ "n": n, "alpha": params.alpha, "beta": params.beta, "c": params.c }),
                results: json!({ "degrees": rows, "all_equal": all }),
                provenance: json!({
                    "v_explicit": "terminating 4F3 double sum for V_n",
                    "calv_explicit": "terminating 4F3 double sum for calV_n",
                }),
                verified: Some(all),
            }
        }
        Command::Asymptotic { kind, n, theta, x, form, a, b, d, tol } => {
            let inputs = json!({ "kind": kind, "n": n, "theta": theta, "x": x, "form": form, "a": a, "b": b, "d": d, "tol": tol });
            match kind {
                AsymptoticKind::Atkin => {
                    let f = match form {
                        FormArg::Corrected => AsymptoticForm::Corrected,
                        FormArg::AsPrinted => AsymptoticForm::AsPrinted,
                    };
                    let c = asymptotic_check(*n, *theta, f)?;
                    let tol = tol.unwrap_or(5e-2);
                    Outcome {
                        command: "asymptotic",
                        inputs,
                        results: serde_json::to_value(c).expect("serializable"),
                        provenance: json!({ "atkin_asymptotic": "U/Y combination with large-degree 2F1 asymptotics" }),
                        verified: Some(c.relative_error <= tol),
                    }
                }
                AsymptoticKind::Buv => {
                    let approx = buv_combination(*n, *x)?;
                    let exact = atkin_normalized(*n as usize + 1).eval_f64(*x);
                    let residual = (approx - exact).abs() / exact.abs().max(1.0);
                    Outcome {
                        command: "asymptotic",
                        inputs,
                        results: json!({ "combination": approx, "recurrence": exact, "scaled_residual": residual }),
                        provenance: json!({ "buv": "A_{n+1} = C(x) U~_n + D(x) Y~_n" }),
                        verified: Some(residual <= tol.unwrap_or(1e-6)),
                    }
                }
                AsymptoticKind::F21 => {
                    let s2 = theta.sin().powi(2);
                    let family = f21_degree_family(*a, *b, *d, s2, *n as usize)?;
                    let approx = watson_rhs(*a, *b, *d, *theta, *n)?;
                    let exact = family[*n as usize];
                    Outcome {
                        command: "asymptotic",
                        inputs,
                        results: json!({ "approximation": approx, "value": exact, "abs_error": (approx - exact).abs() }),
                        provenance: json!({ "f21": "large-degree cosine asymptotic of 2F1(b-n, n+a; d; sin^2 theta)" }),
                        verified: tol.map(|t| (approx - exact).abs() <= t),
                    }
                }
            }
        }
        Command::Genfun { kind, x, t, terms, params, a, b, d, form, tol } => {
            let inputs = json!({
                "kind": kind, "x": x, "t": t, "terms": terms, "a": a, "b": b, "d": d,
                "alpha": params.alpha, "beta": params.beta, "c": params.c, "form": form, "tol": tol,
            });
            let (results, residual, provenance) = match kind {
                GenKind::Fjk => {
                    let c = fjk_check(*a, *b, *d, *x, *t, *terms)?;
                    (identity(&c), c.residual, "bilinear 2F1 generating function")
                }
                GenKind::Uy => {
                    let default = atkin_core::jacobi::s_set()[1].clone();
                    let p = AJParams::new(
                        params.alpha.clone().unwrap_or(default.alpha),
                        params.beta.clone().unwrap_or(default.beta),
                        params.c.clone().unwrap_or(default.c),
                    );
                    let c = gen_uy_check(&p, *x, *t, *terms)?;
                    (json!({ "u": identity(&c.u), "y": identity(&c.y) }), c.max_residual(), "U_n / Y_n generating functions")
                }
                GenKind::Catalan => {
                    let f = match form {
                        BgenArg::Derived => BgenForm::Derived,
                        BgenArg::AsPrinted => BgenForm::AsPrinted,
                    };
                    let c = catalan_gen_check(*x, *t, *terms, f)?;
                    (identity(&c), c.residual, "Catalan-weighted generating function of A_{n+1}")
                }
                GenKind::Zero => {
                    let c = gen_at_zero(*t, *terms)?;
                    (identity(&c), c.residual, "generating function at x = 0")
                }
                GenKind::One => {
                    let c = gen_at_one(*t, *terms)?;
                    (identity(&c), c.residual, "generating function at x = 1")
                }
                GenKind::Zerot => {
                    let c = gen0t_check(*t, *terms)?;
                    (identity(&c), c.residual, "generating function at x = 0 before the Pfaff transformation")
                }
            };
            Outcome {
                command: "genfun",
                inputs,
                results,
                provenance: json!({ "genfun": provenance }),
                verified: Some(residual <= *tol),
            }
        }
        Command::Weight { j, grid, moments, tol } => {
            let ctx = WeightContext::new(*tol, 12)?;
            let mut results = serde_json::Map::new();
            results.insert("lambda".into(), json!(ctx.lambda_star));
            if let Some(j) = j {
                let jj = j / 1728.0;
                results.insert(
                    "point".into(),
                    json!({ "j": j, "w": ctx.weight_w(*j)?, "phi": ctx.phi(jj)?, "phi_prime": ctx.phi_prime(jj)? }),
                );
            }
            if let Some(points) = grid {
                let g: Vec<[f64; 2]> = ctx.grid(*points)?.into_iter().map(|(j, w)| [j, w]).collect();
                results.insert("grid".into(), json!(g));
            }
            if let Some(k) = moments {
                results.insert("moments".into(), json!(ctx.moments(*k, exec)?));
            }
            Outcome {
                command: "weight",
                inputs: json!({ "j": j, "grid": grid, "moments": moments, "tol": tol }),
                results: Value::Object(results),
                provenance: json!({ "weight": "w(j) from F, F* and the constant lambda" }),
                verified: None,
            }
        }
        Command::Gram { n, tol } => {
            if *n > GRAM_MAX_DEGREE {
                return Err(Error::DomainError(format!("--n must be <= {GRAM_MAX_DEGREE}")));
            }
            let ctx = WeightContext::new(*tol, 12)?;
            let g = ctx.gram_matrix(*n, exec)?;
            let ratios: Vec<Value> = g
                .diagonal_ratios()
                .into_iter()
                .map(|(n, r, b)| json!({ "n": n, "ratio": r, "b_n": b }))
                .collect();
            Outcome {
                command: "gram",
                inputs: json!({ "n": n, "tol": tol }),
                results: json!({
                    "entries": g.entries,
                    "max_normalized_off_diagonal": g.max_normalized_off_diagonal(),
                    "diagonal_ratios": ratios,
                    "levels": g.levels,
                }),
                provenance: json!({ "gram": "tanh-sinh quadrature of A_m A_n w over [0, 1728]" }),
                verified: None,
            }
        }
        Command::Supersingular { pmax } => {
            let records = match_report(*pmax, exec)?;
            let ok = records.iter().all(|r| r.matched() != Some(false));
            Outcome {
                command: "supersingular",
                inputs: json!({ "pmax": pmax }),
                results: json!({ "records": records }),
                provenance: json!({ "supersingular": "point counting over F_{p^2} against A_n reduced mod p" }),
                verified: Some(ok),
            }
        }
        Command::Selftest => {
            let reports = run_all(exec);
            let ok = reports.iter().all(|r| r.passed());
            for r in &reports {
                eprintln!("{r}");
            }
            let results: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "criterion": r.id, "title": r.title, "passed": r.passed(), "checks": r.checks }))
                .collect();
            Outcome {
                command: "selftest",
                inputs: json!({}),
                results: json!({ "criteria": results }),
                provenance: json!({ "selftest": "all acceptance criteria" }),
                verified: Some(ok),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let verified = outcome.verified;
    let envelope = Envelope {
        command: outcome.command,
        inputs: outcome.inputs,
        results: outcome.results,
        provenance: outcome.provenance,
        float_digits: FLOAT_DIGITS,
        verified,
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&envelope)
    } else {
        serde_json::to_string(&envelope)
    }
    .expect("JSON output");
    println!("{text}");
    if verified == Some(false) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
