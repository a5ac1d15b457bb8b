//! Command-line front end.
//!
//! Every command prints a [`Verdict`] as canonical JSON on standard output
//! and a short human-readable summary on standard error (suppressed by
//! `--json`). Exit codes: 0 accept, 1 reject, 2 usage/I-O/parse error,
//! 3 unknown.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::grading::{self, WeightMode};
use crate::holonomy::{self, Certificate, HolonomyGroup};
use crate::latpow;
use crate::liealg::LieAlgebra;
use crate::qlinalg::{rat, IntegerLattice, Matrix, Rational};
use crate::serial;
use crate::specmaps;
use crate::verdict::{Decision, Verdict};

pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nilgrade",
    version,
    about = "Gradings, expanding maps and self-covers of rational nilpotent Lie algebras"
)]
pub struct Cli {
    /// Machine output only: no summary on standard error.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Positive,
    Nonneg,
}

impl From<Mode> for WeightMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Positive => WeightMode::Positive,
            Mode::Nonneg => WeightMode::NonnegNontrivial,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an algebra: Jacobi, nilpotency, class, characteristic nilpotency.
    Check {
        /// Algebra file, or the name of a bundled fixture.
        algebra: String,
    },
    /// Search a basis-aligned positive or non-negative non-trivial grading.
    Grade {
        /// Algebra file, or the name of a bundled fixture.
        algebra: String,
        /// positive: every weight >= 1; nonneg: weights >= 0, not all 0.
        #[arg(long, value_enum, default_value = "positive")]
        mode: Mode,
    },
    /// Build the expanding automorphism scaling degree i by p^i.
    Expand {
        /// Algebra file, or the name of a bundled fixture.
        algebra: String,
        /// Prime p; degree i is scaled by p^i.
        #[arg(long)]
        prime: u64,
        /// Holonomy file {"generators": [...], "cap": n}.
        #[arg(long)]
        holonomy: Option<String>,
    },
    /// Look for a self-cover witness, or replay a certificate.
    Cohopf {
        /// Algebra file, or the name of a bundled fixture.
        algebra: String,
        /// Holonomy file {"generators": [...], "cap": n}.
        #[arg(long)]
        holonomy: Option<String>,
        /// Grading, automorphism, or a previously emitted verdict to replay.
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Norm profile of an automorphism and the grading it induces.
    Norm {
        /// Algebra file, or the name of a bundled fixture.
        algebra: String,
        /// Matrix file: a JSON array of rows of "p/q" strings.
        matrix: String,
    },
    /// Minimal power of A mapping a lattice into itself, or an orbit escape check.
    Latpow {
        /// JSON {"A": matrix, "lattice": basis, "bound": n}, or {"A", "v"} for the orbit check.
        file: String,
        /// Largest power to try; overrides "bound" in the file.
        #[arg(long)]
        bound: Option<u64>,
    },
}

/// Parses arguments, runs the command and prints the result; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(v) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", v.to_canonical_json());
            if !cli.json {
                eprintln!("{}", summary(&v));
            }
            v.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn summary(v: &Verdict) -> String {
    let decision = match v.decision {
        Decision::Accept => "accept",
        Decision::Reject => "reject",
        Decision::Unknown => "unknown",
    };
    let mut s = decision.to_string();
    if let Some(c) = &v.condition {
        s.push_str(&format!(" [{c}]"));
    }
    for d in &v.diagnostics {
        s.push_str(&format!("\n  {d}"));
    }
    s
}

/// Runs a command. Errors are the exit-code-2 class; every decided outcome,
/// including rejections, is a `Verdict`.
pub fn execute(cmd: &Command) -> Result<Verdict> {
    match cmd {
        Command::Check { algebra } => cmd_check(&load_algebra(algebra)?),
        Command::Grade { algebra, mode } => Ok(cmd_grade(&load_algebra(algebra)?, *mode)),
        Command::Expand {
            algebra,
            prime,
            holonomy,
        } => {
            let alg = load_algebra(algebra)?;
            let f = load_holonomy(holonomy.as_deref(), &alg)?;
            cmd_expand(&alg, *prime, f.as_ref())
        }
        Command::Cohopf {
            algebra,
            holonomy,
            certificate,
        } => {
            let alg = load_algebra(algebra)?;
            let f = load_holonomy(holonomy.as_deref(), &alg)?;
            let cert = certificate
                .as_deref()
                .map(|c| Certificate::from_json(&load_json(c)?, alg.dim()))
                .transpose()?;
            cmd_cohopf(&alg, f.as_ref(), cert.as_ref())
        }
        Command::Norm { algebra, matrix } => {
            let alg = load_algebra(algebra)?;
            let m = match Certificate::from_json(&load_json(matrix)?, alg.dim())? {
                Certificate::Automorphism(m) => m,
                Certificate::Grading(_) => {
                    return Err(Error::Parse("expected a matrix, found a grading".into()))
                }
            };
            cmd_norm(&alg, &m)
        }
        Command::Latpow { file, bound } => cmd_latpow(&load_json(file)?, *bound),
    }
}

/// Reads `arg` as a path, or failing that as a bundled fixture name.
pub fn load_json(arg: &str) -> Result<Value> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    } else {
        fixtures::text(arg.strip_suffix(".json").unwrap_or(arg))
            .map_err(|_| Error::Io(format!("{arg}: no such file or fixture")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

pub fn load_algebra(arg: &str) -> Result<LieAlgebra> {
    LieAlgebra::from_json(&load_json(arg)?)
}

fn load_holonomy(arg: Option<&str>, alg: &LieAlgebra) -> Result<Option<HolonomyGroup>> {
    let Some(arg) = arg else { return Ok(None) };
    let f = HolonomyGroup::from_json(&load_json(arg)?, alg.dim())?;
    f.validate_for(alg)?;
    Ok(Some(f))
}

fn invalid_algebra(alg: &LieAlgebra) -> Option<Verdict> {
    let v = alg.validate();
    (!v.is_accept()).then(|| v.with_diagnostic("input is not a nilpotent Lie algebra"))
}

pub fn cmd_check(alg: &LieAlgebra) -> Result<Verdict> {
    let v = alg.validate();
    if !v.is_accept() {
        return Ok(v);
    }
    let class = alg.nilpotency_class()?;
    let cn = alg.is_characteristically_nilpotent();
    let flag = match cn.decision {
        Decision::Accept => json!(true),
        Decision::Reject => json!(false),
        Decision::Unknown => Value::Null,
    };
    let mut cert = v.certificate.clone();
    cert["characteristically_nilpotent"] = flag.clone();
    cert["characteristic_nilpotency"] = cn.certificate.clone();
    Ok(Verdict::accept(cert)
        .with_diagnostic(format!("nilpotency class {class}"))
        .with_diagnostic(format!("characteristically nilpotent: {flag}")))
}

fn scope_reject(alg: &LieAlgebra, what: &str) -> Verdict {
    let dim = grading::weight_solution_space(alg).cols();
    Verdict::reject(json!({
        "scope": "basis-aligned",
        "solution_space_dim": dim,
    }))
    .with_diagnostic(format!(
        "reject (basis-aligned): no {what} weight system; solution space dimension {dim}"
    ))
}

fn mode_name(m: WeightMode) -> &'static str {
    match m {
        WeightMode::Positive => "positive",
        WeightMode::NonnegNontrivial => "nonneg",
    }
}

pub fn cmd_grade(alg: &LieAlgebra, mode: Mode) -> Verdict {
    if let Some(v) = invalid_algebra(alg) {
        return v;
    }
    let wm = WeightMode::from(mode);
    match grading::search_weights(alg, &[], wm) {
        None => scope_reject(alg, mode_name(wm)),
        Some(w) => {
            let g = grading::grading_from_weights(alg, &w)
                .expect("solver output satisfies constraints");
            let class = grading::classify(alg, &g).expect("grading from weights verifies");
            Verdict::accept(json!({
                "mode": mode_name(wm),
                "weights": w.weights(),
                "grading": g.to_json(),
                "class": class.label(),
            }))
            .with_diagnostic(format!(
                "weights {:?} ({})",
                w.weights(),
                class.label()
            ))
        }
    }
}

fn det_json(det: &Rational) -> Value {
    let mut v = json!({"det": serial::rational(det)});
    if let Some((p, k)) = specmaps::prime_power(det) {
        v["det_prime_power"] = json!({"prime": p.to_string(), "exponent": k});
    }
    v
}

pub fn cmd_expand(alg: &LieAlgebra, p: u64, f: Option<&HolonomyGroup>) -> Result<Verdict> {
    if !grading::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if let Some(v) = invalid_algebra(alg) {
        return Ok(v);
    }
    let group = f
        .cloned()
        .unwrap_or_else(|| HolonomyGroup::trivial(alg.dim()));
    let w = match holonomy::equivariant_weight_search(alg, &group, WeightMode::Positive) {
        Err(Error::UnsupportedSearch(why)) => {
            return Ok(Verdict::unknown(format!(
                "search unsupported, use certificate mode ({why})"
            )))
        }
        other => other?,
    };
    let Some(w) = w else {
        let what = if f.is_some() {
            "F-invariant positive"
        } else {
            "positive"
        };
        return Ok(scope_reject(alg, what));
    };
    let g = grading::grading_from_weights(alg, &w)?;
    let phi = grading::phi_p(alg, &g, p)?;
    let expanding = specmaps::is_expanding(&phi.map)?;
    let commutes = holonomy::commutes_with_all(&phi.map, &group)?;
    if !expanding || !commutes || !alg.is_automorphism(&phi.map) {
        return Err(Error::Invariant(
            "phi_p of a positive grading failed its own checks".into(),
        ));
    }
    let mut cert = det_json(&phi.det());
    cert["prime"] = json!(p);
    cert["weights"] = json!(w.weights());
    cert["grading"] = g.to_json();
    cert["automorphism"] = serial::matrix(&phi.map);
    cert["expanding"] = json!(true);
    cert["det_exponent"] = json!(phi.det_exponent);
    if f.is_some() {
        cert["commutes_with_holonomy"] = json!(true);
        cert["holonomy_order"] = json!(group.order());
    }
    let mut v = Verdict::accept(cert).with_diagnostic(format!(
        "phi_{p} has det {p}^{} and is expanding",
        phi.det_exponent
    ));
    if f.is_some() {
        v = v.with_condition("expinfra-cond-3").with_diagnostic(format!(
            "phi_{p} commutes with all {} holonomy elements",
            group.order()
        ));
    }
    Ok(v)
}

pub fn cmd_cohopf(
    alg: &LieAlgebra,
    f: Option<&HolonomyGroup>,
    cert: Option<&Certificate>,
) -> Result<Verdict> {
    if let Some(v) = invalid_algebra(alg) {
        return Ok(v);
    }
    let group = f
        .cloned()
        .unwrap_or_else(|| HolonomyGroup::trivial(alg.dim()));
    if let Some(c) = cert {
        let v = holonomy::check_covinfra(alg, &group, c)?;
        return Ok(if v.is_accept() {
            v.with_diagnostic("not co-Hopfian (witnessed)")
        } else {
            v
        });
    }
    // a positive grading is the stronger witness, so it is tried first
    let found = holonomy::equivariant_weight_search(alg, &group, WeightMode::Positive).and_then(
        |w| match w {
            Some(w) => Ok(Some(w)),
            None => holonomy::equivariant_weight_search(alg, &group, WeightMode::NonnegNontrivial),
        },
    );
    match found {
        Err(Error::UnsupportedSearch(why)) => Ok(Verdict::unknown(format!(
            "search unsupported, use certificate mode ({why})"
        ))),
        Err(e) => Err(e),
        Ok(Some(w)) => {
            let g = grading::grading_from_weights(alg, &w)?;
            let class = grading::classify(alg, &g)?;
            let phi = grading::phi_p(alg, &g, 2)?;
            let mut c = det_json(&phi.det());
            c["weights"] = json!(w.weights());
            c["grading"] = g.to_json();
            c["class"] = json!(class.label());
            c["automorphism"] = serial::matrix(&phi.map);
            Ok(Verdict::accept(c)
                .with_condition("covinfra-cond-2")
                .with_diagnostic("not co-Hopfian (witnessed)")
                .with_diagnostic(format!("self-cover of degree 2^{}", phi.det_exponent)))
        }
        Ok(None) => {
            let dim = grading::weight_solution_space(alg).cols();
            if dim == 0 {
                let cn = alg.is_characteristically_nilpotent();
                if cn.is_accept() {
                    return Ok(Verdict::reject(json!({
                        "solution_space_dim": 0,
                        "characteristic_nilpotency": cn.certificate,
                    }))
                    .with_condition("co-hopfian-certified-characteristic-nilpotency")
                    .with_diagnostic("co-Hopfian: certified via characteristic nilpotency"));
                }
            }
            Ok(scope_reject(alg, "non-negative non-trivial")
                .with_diagnostic("no basis-aligned witness"))
        }
    }
}

pub fn cmd_norm(alg: &LieAlgebra, m: &Matrix) -> Result<Verdict> {
    if let Err(e) = alg.check_automorphism(m) {
        return Ok(
            Verdict::reject(json!({"violation": e.to_string()})).with_diagnostic(e.to_string())
        );
    }
    let s = specmaps::semisimple_part(m)?;
    let profile = specmaps::norm_profile(alg, &s)?;
    let mut cert = json!({
        "semisimple": &s == m,
        "profile": profile.to_json(),
    });
    let mut v_diag = vec![format!(
        "values ({})",
        profile
            .values()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )];
    let det = m.det()?;
    let extracted = if specmaps::is_expanding(m)? {
        Some(specmaps::expanding_to_positive_grading(alg, m)?)
    } else if specmaps::is_z_charpoly(m)? && det.abs() > rat(1) {
        Some(specmaps::selfcover_to_nonneg_grading(alg, m)?)
    } else {
        None
    };
    match extracted {
        Some(g) => {
            let class = grading::classify(alg, &g)?;
            cert["grading"] = g.to_json();
            cert["class"] = json!(class.label());
            if let Some(w) = g.basis_weights() {
                cert["weights"] = json!(w);
                v_diag.push(format!("grading weights {w:?} ({})", class.label()));
            }
        }
        None => {
            v_diag.push("map is neither expanding nor a self-cover; no grading extracted".into())
        }
    }
    Ok(v_diag
        .into_iter()
        .fold(Verdict::accept(cert), |v, d| v.with_diagnostic(d)))
}

pub fn cmd_latpow(input: &Value, bound_flag: Option<u64>) -> Result<Verdict> {
    let a = serial::parse_matrix(
        input
            .get("A")
            .ok_or_else(|| Error::Parse("latpow input needs \"A\"".into()))?,
    )?;
    let bound = match bound_flag {
        Some(b) => Some(b),
        None => input
            .get("bound")
            .map(|b| {
                b.as_u64()
                    .ok_or_else(|| Error::Parse("\"bound\" must be a positive integer".into()))
            })
            .transpose()?,
    };
    if let Some(v) = input.get("v") {
        let v = serial::parse_vector(v)?;
        return latpow::orbit_escapes_lattice(&a, &v, bound.unwrap_or(64));
    }
    let lattice = match input.get("lattice") {
        Some(l) => IntegerLattice::new(serial::parse_matrix(l)?)?,
        None => IntegerLattice::standard(a.rows()),
    };
    match latpow::power_into_lattice_bounded(&a, &lattice, bound) {
        Ok(c) => Ok(Verdict::accept(c.to_json())
            .with_diagnostic(format!("A^{} maps the lattice into itself", c.k))),
        Err(Error::ObstructionPrime(p)) => {
            let (primes, m) = latpow::denominator_primes(lattice.basis())?;
            Ok(Verdict::reject(json!({
                "obstruction_prime": p,
                "primes": primes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "modulus": m.to_string(),
                "det": serial::rational(&a.det()?),
            }))
            .with_diagnostic(format!("obstruction prime {p}")))
        }
        Err(Error::Precondition(why)) if bound.is_some() => {
            Ok(Verdict::reject(json!({"bound": bound})).with_diagnostic(why))
        }
        Err(e) => Err(e),
    }
}
