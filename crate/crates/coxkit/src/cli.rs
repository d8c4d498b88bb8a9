//! The `coxkit` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 inconclusive (a cap or window
//! was exhausted), 3 counterexample or failed check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use coxkit_core::group::DEFAULT_BALL_CAP;
use coxkit_core::parabolic::parabolic_closure_finite;
use coxkit_core::refl::{generated_group, hurwitz_orbit, DEFAULT_ORBIT_CAP};
use coxkit_core::verify::{self, Conclusion};
use coxkit_core::{
    Ball, Classification, CoxeterSystem, FiniteScope, GenSet, GroupElement, GroupError, ParabolicError, ReflError,
    Reflection, ReflectionFactorization, RootError, VerifyError,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::format::{self, FormatError};

#[derive(Parser, Debug)]
#[command(name = "coxkit", version, about = "Exact computations in Coxeter groups")]
pub struct Cli {
    /// Diagram file (required by every command except example-d4tilde).
    #[arg(long, global = true)]
    pub diagram: Option<PathBuf>,
    /// Worker threads for parallel scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, field, classification and components.
    Classify,
    /// Length and deterministic reduced word.
    Length {
        #[arg(required = true)]
        word: Vec<String>,
    },
    /// The inversion set of an element.
    Inversions {
        #[arg(required = true)]
        word: Vec<String>,
    },
    /// The roots β_i of the reduced word of an element.
    Betas {
        #[arg(required = true)]
        word: Vec<String>,
    },
    /// Check that the centralizer of a Coxeter element is cyclic.
    CoxeterVerify {
        /// Ball radius for infinite groups.
        #[arg(long)]
        radius: Option<usize>,
        /// Power bound; raised as needed to cover the ball.
        #[arg(long, default_value_t = 1)]
        powers: usize,
        /// Order of the generators in the Coxeter element.
        #[arg(long)]
        perm: Option<String>,
        /// Maximum number of ball elements.
        #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
        cap: usize,
    },
    /// Whether ℓ(w^m) = m ℓ(w) for m up to --max.
    Straight {
        #[arg(required = true)]
        word: Vec<String>,
        #[arg(long, default_value_t = 10)]
        max: usize,
    },
    /// Outward-root representatives of a Coxeter element.
    Outward {
        #[arg(long, default_value_t = 10)]
        max: usize,
        #[arg(long, default_value_t = 10)]
        orbits: usize,
        #[arg(long)]
        perm: Option<String>,
    },
    /// Hurwitz orbit of a reflection factorization given as `w1; w2; ...`.
    Hurwitz {
        #[arg(required = true)]
        factorization: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// Reflection length and reduced reflection factorizations.
    Redt {
        #[arg(required = true)]
        word: Vec<String>,
        /// Finite standard parabolic to work in, e.g. {2,3,4,5}.
        #[arg(long)]
        scope: Option<String>,
    },
    /// Edges and components of the conjugacy graph of subsets.
    ConjGraph,
    /// Whether W_I and W_J are conjugate.
    Conj { i: String, j: String },
    /// Generators of the normalizer of W_I.
    Normalizer { i: String },
    /// Parabolic closure of an element in a finite scope.
    Closure {
        #[arg(required = true)]
        word: Vec<String>,
        #[arg(long)]
        scope: Option<String>,
    },
    /// Reproduce the affine D4 example.
    ExampleD4tilde,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Inconclusive(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> CliError {
        match e {
            GroupError::CapExceeded(_) => CliError::Inconclusive(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ReflError> for CliError {
    fn from(e: ReflError) -> CliError {
        match e {
            ReflError::CapExceeded(_) | ReflError::TooLong(_) => CliError::Inconclusive(e.to_string()),
            ReflError::Group(g) => g.into(),
            ReflError::Root(r) => r.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> CliError {
        match e {
            RootError::NotARoot | RootError::WrongLength { .. } => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<ParabolicError> for CliError {
    fn from(e: ParabolicError) -> CliError {
        match e {
            ParabolicError::Group(g) => g.into(),
            ParabolicError::Refl(r) => r.into(),
            ParabolicError::Inconsistent(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> CliError {
        match e {
            VerifyError::Group(g) => g.into(),
            VerifyError::Refl(r) => r.into(),
            VerifyError::Root(r) => r.into(),
            VerifyError::Parabolic(p) => p.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Lines = Vec<String>;

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Input(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    if cli.timing {
        let _ = writeln!(err, "elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(lines) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            0
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(out, "{msg}");
            3
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_system(cli: &Cli) -> Result<CoxeterSystem, CliError> {
    let path = cli.diagram.as_ref().ok_or_else(|| CliError::Input("--diagram <path> is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    format::parse_system(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn element(sys: &CoxeterSystem, word: &[String]) -> Result<GroupElement, CliError> {
    let w = format::parse_word(&word.join(" "), sys.rank())?;
    Ok(sys.element(&w)?)
}

fn coxeter_element(sys: &CoxeterSystem, perm: &Option<String>) -> Result<GroupElement, CliError> {
    match perm {
        Some(p) => Ok(sys.coxeter_element(&format::parse_permutation(p, sys.rank())?)?),
        None => Ok(sys.standard_coxeter_element()),
    }
}

fn scope_set(sys: &CoxeterSystem, scope: &Option<String>) -> Result<GenSet, CliError> {
    match scope {
        Some(s) => Ok(format::parse_subset(s, sys.rank())?),
        None => Ok(sys.all_generators()),
    }
}

fn execute(cli: &Cli) -> Result<Lines, CliError> {
    if let Command::ExampleD4tilde = cli.command {
        return example_d4tilde();
    }
    let sys = load_system(cli)?;
    match &cli.command {
        Command::Classify => Ok(classify(&sys)),
        Command::Length { word } => {
            let w = element(&sys, word)?;
            let (l, reduced) = sys.length_and_reduced(&w);
            Ok(vec![format!("length {l}"), format!("reduced {reduced}")])
        }
        Command::Inversions { word } => {
            let w = element(&sys, word)?;
            let roots = sys.inversion_set(&w)?;
            let mut lines = vec![format!("count {}", roots.len())];
            lines.extend(roots.iter().map(|r| r.to_string()));
            Ok(lines)
        }
        Command::Betas { word } => {
            let w = element(&sys, word)?;
            Ok(sys.beta_sequence(&w).iter().enumerate().map(|(i, b)| format!("beta{} {b}", i + 1)).collect())
        }
        Command::CoxeterVerify { radius, powers, perm, cap } => coxeter_verify(&sys, *radius, *powers, perm, *cap),
        Command::Straight { word, max } => straight(&sys, &element(&sys, word)?, *max),
        Command::Outward { max, orbits, perm } => {
            let c = coxeter_element(&sys, perm)?;
            let reps = verify::verify_outward(&sys, &c, *max, *orbits)?;
            let mut lines = vec![format!("c={}", verify::display_word(&sys, &c))];
            lines.extend(reps.iter().enumerate().map(|(i, b)| format!("beta{} {b}", i + 1)));
            lines.push(format!("representatives={}=rank window={max} orbits={orbits} OK", reps.len()));
            Ok(lines)
        }
        Command::Hurwitz { factorization, cap } => hurwitz(&sys, &factorization.join(" "), *cap),
        Command::Redt { word, scope } => {
            let scope = FiniteScope::new(&sys, scope_set(&sys, scope)?)?;
            let w = element(&sys, word)?;
            if !scope.contains(&w)? {
                return Err(CliError::Input("element is not in the scope".into()));
            }
            let red = scope.reduced_factorizations(&w)?;
            let mut lines = vec![format!("l_T={} |Red_T|={}", scope.reflection_length(&w)?, red.len())];
            lines.extend(red.iter().map(|f| f.to_string()));
            Ok(lines)
        }
        Command::ConjGraph => {
            let g = sys.conjugacy_graph()?;
            let mut lines: Lines = g.edges().iter().map(|e| e.to_string()).collect();
            let mut reps: Vec<GenSet> = (0..1u64 << sys.rank()).map(|m| g.component_of(GenSet(m))).collect();
            reps.sort();
            reps.dedup();
            lines.push(format!("components {}", reps.len()));
            for r in reps {
                let members: Vec<String> = g.component_members(r).iter().map(|m| m.to_string()).collect();
                lines.push(format!("component {}", members.join(" ")));
            }
            Ok(lines)
        }
        Command::Conj { i, j } => {
            let (i, j) = (format::parse_subset(i, sys.rank())?, format::parse_subset(j, sys.rank())?);
            let g = sys.conjugacy_graph()?;
            Ok(vec![match g.standard_conjugate(&sys, i, j)? {
                Some(x) => format!("conjugate x={}", x.word()),
                None if g.is_isolated(i) && g.is_isolated(j) => "not conjugate (isolated vertices)".into(),
                None => "not conjugate (different components)".into(),
            }])
        }
        Command::Normalizer { i } => {
            let i = format::parse_subset(i, sys.rank())?;
            if i.is_empty() {
                return Err(CliError::Input("the normalizer of the empty subset is not supported".into()));
            }
            let g = sys.conjugacy_graph()?;
            let norm = g.normalizer_generators(&sys, i)?;
            let mut lines: Lines = i.iter().map(|s| format!("parabolic {}", s + 1)).collect();
            for (k, l) in &norm.lambdas {
                lines.push(format!("lambda {} via {}", l.word(), g.edges()[*k]));
            }
            if norm.lambdas.is_empty() {
                lines.push(format!("N_I trivial, N_W(W_I) = W_{i}"));
            }
            Ok(lines)
        }
        Command::Closure { word, scope } => {
            let scope = FiniteScope::new(&sys, scope_set(&sys, scope)?)?;
            let w = element(&sys, word)?;
            let pc = parabolic_closure_finite(&scope, &[w])?;
            let mut lines = vec![format!(
                "|Pc|={} dim={} standard={} x={}",
                pc.group.len(),
                pc.rank,
                pc.standard,
                sys.length_and_reduced(&pc.conjugator).1
            )];
            lines.extend(pc.reflections.iter().map(|t| format!("reflection {t}")));
            Ok(lines)
        }
        Command::ExampleD4tilde => unreachable!("handled above"),
    }
}

fn classify(sys: &CoxeterSystem) -> Lines {
    let comps: Vec<String> = sys.components().iter().map(|c| c.to_string()).collect();
    vec![
        format!("rank {}", sys.rank()),
        format!("field N={} degree={}", sys.field().parameter(), sys.field().degree()),
        format!("classification {}", sys.classification()),
        format!("irreducible {}", if sys.is_irreducible() { "yes" } else { "no" }),
        format!("components {}", comps.join(" ")),
    ]
}

/// Indices of ball members centralizing `c`, scanned in parallel; the
/// result is in ball order whatever the thread count.
pub fn centralizing_indices(sys: &CoxeterSystem, ball: &Ball, c: &GroupElement) -> Vec<usize> {
    ball.members().par_iter().enumerate().filter(|(_, g)| sys.centralizes(g, c)).map(|(i, _)| i).collect()
}

fn report_lines(rep: &coxkit_core::CentralizerReport) -> Lines {
    rep.centralizing
        .iter()
        .map(|g| match g.power {
            Some(k) => format!("g={} k={k} status=ok", g.word),
            None => format!("g={} k=? status=not-power", g.word),
        })
        .collect()
}

fn coxeter_verify(sys: &CoxeterSystem, radius: Option<usize>, powers: usize, perm: &Option<String>, cap: usize) -> Result<Lines, CliError> {
    let c = coxeter_element(sys, perm)?;
    if sys.classification() == Classification::Finite {
        let rep = verify::verify_finite(sys, &c)?;
        let h = rep.coxeter_order.unwrap_or(0);
        let mut lines = match &rep.conclusion {
            Conclusion::TheoremConsistent => vec![format!("finite-exhaustive: |C|={}=|<c>| OK", rep.centralizing.len())],
            Conclusion::Counterexample(w) => {
                vec![format!("finite-exhaustive: |C|={} |<c>|={h} COUNTEREXAMPLE g={w}", rep.centralizing.len())]
            }
        };
        lines.push(format!("c={} order={h} |W|={}", rep.coxeter_word, rep.searched));
        lines.extend(report_lines(&rep));
        return finish(rep.is_consistent(), lines);
    }
    let r = radius.unwrap_or_else(|| verify::default_radius(sys.rank()));
    let ball = verify::prepare_ball(sys, &c, r, cap)?;
    let found = centralizing_indices(sys, &ball, &c);
    let rep = verify::ball_report(sys, &c, &ball, &found, powers);
    let head = format!("ball: R={r} |B|={} P={} |C∩B|={}", rep.searched, rep.power_bound, rep.centralizing.len());
    let mut lines = match &rep.conclusion {
        Conclusion::TheoremConsistent => vec![format!("{head} all powers of c OK")],
        Conclusion::Counterexample(w) => vec![format!("{head} COUNTEREXAMPLE g={w}")],
    };
    lines.push(format!("c={}", rep.coxeter_word));
    lines.extend(report_lines(&rep));
    finish(rep.is_consistent(), lines)
}

fn finish(ok: bool, lines: Lines) -> Result<Lines, CliError> {
    if ok {
        Ok(lines)
    } else {
        Err(CliError::Failed(lines.join("\n")))
    }
}

fn straight(sys: &CoxeterSystem, w: &GroupElement, max: usize) -> Result<Lines, CliError> {
    if max == 0 {
        return Err(CliError::Input("--max must be at least 1".into()));
    }
    let l = sys.length(w);
    let mut lines = Vec::new();
    let mut p = sys.identity();
    let mut bad = None;
    for m in 1..=max {
        p = sys.multiply(&p, w)?;
        let lm = sys.length(&p);
        lines.push(format!("m={m} length={lm}"));
        if lm != m * l && bad.is_none() {
            bad = Some((m, lm));
        }
    }
    lines.push(match bad {
        None => format!("straight up to {max}"),
        Some((m, lm)) => format!("not straight: l(w^{m})={lm} != {}", m * l),
    });
    Ok(lines)
}

fn hurwitz(sys: &CoxeterSystem, text: &str, cap: usize) -> Result<Lines, CliError> {
    let words = format::parse_factorization(text, sys.rank())?;
    let factors = words
        .iter()
        .map(|w| {
            let t = sys.element(w)?;
            Reflection::from_element(sys, &t).map_err(|_| CliError::Input(format!("'{w}' is not a reflection")))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let f = ReflectionFactorization::new(factors);
    let orbit = hurwitz_orbit(sys, &f, cap)?;
    let mut lines = vec![format!("product {}", sys.length_and_reduced(&f.product(sys)).1)];
    lines.push(format!("orbit {}", orbit.len()));
    lines.extend(orbit.iter().map(|g| g.to_string()));
    if sys.classification() == Classification::Finite {
        let orders = orbit
            .iter()
            .map(|g| generated_group(sys, g, cap).map(|s| s.len()))
            .collect::<Result<Vec<_>, _>>()?;
        if orders.iter().any(|&o| o != orders[0]) {
            return Err(CliError::Failed(format!("{}\ngenerated subgroup varies along the orbit", lines.join("\n"))));
        }
        lines.push(format!("generated subgroup order {} on every member", orders[0]));
    }
    Ok(lines)
}

fn example_d4tilde() -> Result<Lines, CliError> {
    let rep = verify::verify_example_d4tilde()?;
    let lines: Lines = rep
        .clauses
        .iter()
        .map(|c| format!("({}) {}: {} {}", c.label, c.statement, if c.ok { "OK" } else { "FAILED" }, c.detail))
        .collect();
    let passed = rep.clauses.iter().filter(|c| c.ok).count();
    let mut lines = lines;
    lines.push(format!("example-d4tilde: {passed}/5 clauses OK"));
    finish(rep.passed(), lines)
}
