//! Command-line front end. Every command prints one JSON document.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when `--strict` is set and
//! a certificate reports a violation.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::ball::{self, SimplexBall};
use crate::basis::GellMannBasis;
use crate::choi::ChoiFamilyMap;
use crate::config::{MapConfig, MuSpec, StateSpec};
use crate::error::{Error, Result};
use crate::hermitian::{trace_product, CMatrix, MatrixJson, SpectralState};
use crate::map::{basis_action, AffineMap, BallMap, LinearMap};
use crate::verify::{self, Certificate, CertificateKind, Tolerances};
use crate::witness::{self, Witness, WitnessJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

const CIRCLE_POINTS: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "ballmap", version, about = "Positive maps from balls of quantum states")]
pub struct Cli {
    /// Seed for every sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Eigenvalue tolerance for CP / positivity decisions.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Exit with code 3 when a certificate is violated.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal ball radius and tangency point of a faithful state.
    Ball {
        #[arg(long)]
        state: PathBuf,
    },
    /// Build φ_μ[T,t] from a config and print the images of all e_ij.
    Map {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Closed-form qutrit family at angle α (radians).
    Choi {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Witness construction, detection and coefficients.
    Witness {
        #[command(subcommand)]
        action: WitnessCommand,
    },
    /// Certify a map config (CP, positivity, ball image) or a witness (block positivity).
    Verify {
        #[arg(long, conflicts_with = "witness", required_unless_present = "witness")]
        config: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Points for re-plotting the action of φ_μ on the qutrit eigen-simplex.
    Figure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "max", allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// W = n (id ⊗ φ) P⁺ for the qutrit family or for a map config.
    Build {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "from_map")]
        alpha: Option<f64>,
        #[arg(long, conflicts_with = "from_map")]
        state: Option<PathBuf>,
        #[arg(long, conflicts_with = "alpha")]
        from_map: Option<PathBuf>,
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
    },
    /// Tr(W ρ) and verdict.
    Detect {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        rho: PathBuf,
    },
    /// a_i, b_i, c_i of the qutrit family witness.
    Coeffs {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

/// Result of a successful command.
#[derive(Debug)]
pub struct Report {
    pub document: Value,
    pub violated: bool,
}

impl Report {
    fn plain(document: Value) -> Self {
        Self { document, violated: false }
    }
}

impl Cli {
    fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(t) = self.tol {
            tol.eigen = t;
        }
        tol
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report> {
    let tol = cli.tolerances();
    match &cli.command {
        Command::Ball { state } => cmd_ball(state),
        Command::Map { config, certify, samples, restarts } => {
            cmd_map(config, *certify, *samples, *restarts, cli.seed, &tol)
        }
        Command::Choi { alpha, state } => cmd_choi(*alpha, state.as_deref()),
        Command::Witness { action } => match action {
            WitnessCommand::Build { alpha, state, from_map, certify, restarts } => cmd_witness_build(
                *alpha,
                state.as_deref(),
                from_map.as_deref(),
                certify.then_some(*restarts),
                cli.seed,
                &tol,
            ),
            WitnessCommand::Detect { witness, rho } => cmd_witness_detect(witness, rho, &tol),
            WitnessCommand::Coeffs { alpha, state } => cmd_witness_coeffs(*alpha, state.as_deref()),
        },
        Command::Verify { config, witness, samples, restarts } => match (config, witness) {
            (Some(cfg), _) => cmd_verify_map(cfg, *samples, *restarts, cli.seed, &tol),
            (None, Some(w)) => cmd_verify_witness(w, *restarts, cli.seed, &tol),
            (None, None) => Err(Error::Config("either --config or --witness is required".into())),
        },
        Command::Figure { state, mu, alpha } => cmd_figure(state, mu, *alpha),
    }
}

/// Parses `args`, runs, prints and writes `--out`; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (document, code) = match run(&cli) {
        Ok(report) => {
            let code = if cli.strict && report.violated { EXIT_VIOLATION } else { EXIT_OK };
            (report.document, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (json!({ "error": e.to_string() }), EXIT_INVALID)
        }
    };
    let text = serde_json::to_string_pretty(&document).expect("JSON values serialize");
    {
        use std::io::Write;
        // A closed pipe (e.g. `| head`) is not an error worth panicking over.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_INVALID;
        }
    }
    code
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn read_state(path: Option<&Path>) -> Result<SpectralState> {
    match path {
        None => SpectralState::maximally_mixed(3),
        Some(p) => {
            let spec: StateSpec =
                serde_json::from_str(&read_text(p)?).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            spec.resolve(None)
        }
    }
}

/// Accepts a bare map config or a `map` command output carrying `"config"`.
fn read_map_config(path: &Path) -> Result<MapConfig> {
    let value: Value = serde_json::from_str(&read_text(path)?)?;
    let inner = match value.get("config") {
        Some(cfg) if value.get("action").is_some() => cfg.clone(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn action_json(map: &dyn LinearMap) -> Value {
    let n = map.dim();
    let images = basis_action(map);
    Value::Array(
        images
            .iter()
            .enumerate()
            .map(|(k, image)| json!({ "i": k / n, "j": k % n, "image": MatrixJson::from_matrix(image) }))
            .collect(),
    )
}

fn matrix3_rows(m: &nalgebra::Matrix3<f64>) -> Value {
    json!((0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn cmd_ball(state: &Path) -> Result<Report> {
    let state = read_state(Some(state))?;
    let ball = SimplexBall::new(state.clone());
    Ok(Report::plain(json!({
        "dim": state.dim(),
        "r_max": ball.r_max(),
        "alpha_star": ball.tangency(),
        "lambda": state.shifted(),
        "lambda_tilde": state.eigenvalues(),
    })))
}

fn map_certificates(map: &BallMap, samples: usize, restarts: usize, seed: u64, tol: &Tolerances) -> Result<(Value, bool)> {
    let cp = verify::cp_check(map, tol)?;
    let positivity = verify::positivity_scan(map, samples, restarts, seed, tol)?;
    let ball = verify::ball_image_check(map, map.state(), samples, seed, tol)?;
    let violated = positivity.kind == CertificateKind::Violated || ball.certificate.kind == CertificateKind::Violated;
    Ok((json!({ "cp": cp, "positivity": positivity, "ball_image": ball }), violated))
}

fn cmd_map(config: &Path, certify: bool, samples: usize, restarts: usize, seed: u64, tol: &Tolerances) -> Result<Report> {
    let cfg = read_map_config(config)?;
    let map = cfg.build()?;
    let warning = (!map.certified_positive()).then(|| {
        format!("|mu| = {} exceeds mu_max = {}; positivity is not certified", map.mu().abs(), map.mu_max())
    });
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    let (certificates, violated) = if certify {
        let (c, v) = map_certificates(&map, samples, restarts, seed, tol)?;
        (c, v)
    } else {
        (Value::Null, false)
    };
    Ok(Report {
        document: json!({
            "config": cfg,
            "dim": map.dim(),
            "mu": map.mu(),
            "mu_max": map.mu_max(),
            "r_max": map.r_max(),
            "certified_positive": map.certified_positive(),
            "warning": warning,
            "action": action_json(&map),
            "certificates": certificates,
        }),
        violated,
    })
}

fn cmd_choi(alpha: f64, state: Option<&Path>) -> Result<Report> {
    let family = ChoiFamilyMap::new(read_state(state)?, alpha)?;
    Ok(Report::plain(json!({
        "alpha": alpha,
        "alpha_display": alpha.rem_euclid(2.0 * PI),
        "mu_max": family.mu_max(),
        "eta": family.eta(),
        "xi": family.xi(),
        "lambda": matrix3_rows(family.lambda()),
        "action_matrix": matrix3_rows(&family.action_matrix()),
        "action": action_json(&family),
    })))
}

fn cmd_witness_build(
    alpha: Option<f64>,
    state: Option<&Path>,
    from_map: Option<&Path>,
    certify_restarts: Option<usize>,
    seed: u64,
    tol: &Tolerances,
) -> Result<Report> {
    let (mut w, coefficients) = match (from_map, alpha) {
        (Some(path), _) => {
            let map = read_map_config(path)?.build()?;
            (Witness::from_map(&map)?, Value::Null)
        }
        (None, Some(alpha)) => {
            // Computational basis, so that `detect` and `--from-map` agree for
            // any state; the coefficients are eigenbasis quantities.
            let state = read_state(state)?;
            let w = Witness::from_map(&ChoiFamilyMap::new(state.clone(), alpha)?)?;
            let co = witness::coefficients(&state, alpha)?;
            (w, coefficients_json(&co))
        }
        (None, None) => return Err(Error::Config("either --alpha or --from-map is required".into())),
    };
    let mut violated = false;
    let certificate = match certify_restarts {
        Some(restarts) => {
            let cert = w.certify(restarts, seed, tol)?.clone();
            violated = cert.kind == CertificateKind::Violated;
            serde_json::to_value(cert)?
        }
        None => Value::Null,
    };
    Ok(Report {
        document: json!({
            "witness": w.to_json(),
            "coefficients": coefficients,
            "block_positivity": certificate,
        }),
        violated,
    })
}

fn coefficients_json(co: &witness::Coefficients) -> Value {
    let block = co.negativity_block();
    let min = block.symmetric_eigenvalues().min();
    json!({
        "a": co.a,
        "b": co.b,
        "c": co.c,
        "mu_max": co.mu_max,
        "inverse_mu_max": 1.0 / co.mu_max,
        "cyclic_sums": co.cyclic_sums(),
        "negativity_block": matrix3_rows(&block),
        "negativity_block_min_eigenvalue": min,
        "witness_not_positive": min < -witness::NEGATIVE_EIGEN_TOL,
    })
}

fn read_witness(path: &Path) -> Result<WitnessJson> {
    let value: Value = serde_json::from_str(&read_text(path)?)?;
    let inner = value.get("witness").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn cmd_witness_detect(witness_path: &Path, rho_path: &Path, tol: &Tolerances) -> Result<Report> {
    let wj = read_witness(witness_path)?;
    let w = Witness::from_json(&wj)?;
    let rho_json: MatrixJson = serde_json::from_str(&read_text(rho_path)?)?;
    let value = w.detect(&rho_json.to_hermitian()?)?;
    let verdict = if value >= -tol.eigen {
        "not detected"
    } else if wj.entanglement_witness == Some(true) {
        "entangled"
    } else {
        "negative (witness status not certified)"
    };
    Ok(Report::plain(json!({
        "value": value,
        "verdict": verdict,
        "witness_min_eigenvalue": w.min_eigenvalue(),
    })))
}

fn cmd_witness_coeffs(alpha: f64, state: Option<&Path>) -> Result<Report> {
    let co = witness::coefficients(&read_state(state)?, alpha)?;
    Ok(Report::plain(coefficients_json(&co)))
}

fn cmd_verify_map(config: &Path, samples: usize, restarts: usize, seed: u64, tol: &Tolerances) -> Result<Report> {
    let map = read_map_config(config)?.build()?;
    let (certificates, violated) = map_certificates(&map, samples, restarts, seed, tol)?;
    Ok(Report { document: certificates, violated })
}

fn cmd_verify_witness(path: &Path, restarts: usize, seed: u64, tol: &Tolerances) -> Result<Report> {
    let mut w = Witness::from_json(&read_witness(path)?)?;
    let cert: Certificate = w.certify(restarts, seed, tol)?.clone();
    let violated = cert.kind == CertificateKind::Violated;
    Ok(Report {
        document: json!({
            "block_positivity": cert,
            "min_eigenvalue": w.min_eigenvalue(),
            "entanglement_witness": w.is_entanglement_witness(),
        }),
        violated,
    })
}

fn cmd_figure(state: &Path, mu: &str, alpha: Option<f64>) -> Result<Report> {
    let state = read_state(Some(state))?;
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.dim() });
    }
    let mu = MuSpec::parse(mu)?.resolve(&state);
    let affine = match alpha {
        Some(a) => AffineMap::cartan_rotation(a),
        None => AffineMap::identity(8),
    };
    let map = BallMap::compose(state.clone(), mu, affine)?;
    let figure = figure_points(&map);
    Ok(Report::plain(json!({
        "mu": mu,
        "mu_max": map.mu_max(),
        "r_max": map.r_max(),
        "alpha": alpha,
        "vertices": figure.vertices,
        "images": figure.images,
        "rho_tilde": figure.centre,
        "circle": figure.circle,
    })))
}

/// Projections onto the `(d_1, d_2)` Bloch plane.
#[derive(Debug, Clone)]
pub struct FigurePoints {
    pub vertices: Vec<[f64; 2]>,
    pub images: Vec<[f64; 2]>,
    pub centre: [f64; 2],
    pub circle: Vec<[f64; 2]>,
}

pub fn figure_points(map: &BallMap) -> FigurePoints {
    let state = map.state();
    let basis = GellMannBasis::adapted(state);
    let project = |m: &CMatrix| [trace_product(basis.element(0).as_matrix(), m), trace_product(basis.element(1).as_matrix(), m)];
    let projectors = state.projectors();
    let vertices = projectors.iter().map(|p| project(p.as_matrix())).collect();
    let images = projectors.iter().map(|p| project(&map.apply(p.as_matrix()))).collect();
    let centre = project(state.density().as_matrix());
    let r = ball::r_max(state);
    let circle = (0..CIRCLE_POINTS)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / CIRCLE_POINTS as f64;
            [centre[0] + r * t.cos(), centre[1] + r * t.sin()]
        })
        .collect();
    FigurePoints { vertices, images, centre, circle }
}
