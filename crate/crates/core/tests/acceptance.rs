//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use ballmap::ball::{face_distance, r_max, tangency_point};
use ballmap::choi::{choi_angle, choi_lambda, eta, lambda_matrix, xi, ChoiFamilyMap};
use ballmap::hermitian::{matrix_unit, SpectralState};
use ballmap::map::{mu_max, AffineMap, BallMap, LinearMap};
use ballmap::sampling::{dirichlet_with, hermitian_with, random_faithful_state, random_orthogonal, seeded_rng};
use ballmap::verify::{ball_image_check, cp_check, positivity_scan, CertificateKind, Tolerances};
use ballmap::witness::{coefficients, family_witness, maximally_entangled};
use ballmap::Witness;

// Smallest eigenvalue of the classic Choi map's Choi matrix, from a separate
// LAPACK (NumPy eigvalsh) evaluation of the fixed 9×9 matrix.
const CHOI_MIN_EIGENVALUE: f64 = -0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ac1() -> Outcome {
    let worst = (2..=8)
        .map(|n| (mu_max(&SpectralState::maximally_mixed(n).unwrap()) - 1.0 / (n as f64 - 1.0)).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-12, format!("max |mu_max(I/n) - 1/(n-1)| = {worst:.3e} for n=2..8"))
}

fn ac2() -> Outcome {
    let worst = (2..=8)
        .map(|n| {
            let nf = n as f64;
            (r_max(&SpectralState::maximally_mixed(n).unwrap()) - 1.0 / (nf * (nf - 1.0)).sqrt()).abs()
        })
        .fold(0.0, f64::max);
    outcome(worst <= 1e-12, format!("max |r_max(I/n) - 1/sqrt(n(n-1))| = {worst:.3e} for n=2..8"))
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let (mut worst_gap, mut worst_radius) = (f64::INFINITY, 0.0_f64);
    for n in [3, 4, 5] {
        for k in 0..20u64 {
            let s = random_faithful_state(n, 0xAC3 + 100 * n as u64 + k).unwrap();
            let star = face_distance(&s, &tangency_point(&s)).unwrap();
            worst_radius = worst_radius.max((star - r_max(&s).powi(2)).abs());
            let mut rng = seeded_rng(k);
            let min = (0..100_000)
                .map(|_| face_distance(&s, &dirichlet_with(&mut rng, n - 1)).unwrap())
                .fold(f64::INFINITY, f64::min);
            worst_gap = worst_gap.min(min - star);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_gap > -1e-12 && worst_radius <= 1e-12 && elapsed < Duration::from_secs(30),
        format!(
            "min D(alpha) - D(alpha*) = {worst_gap:.3e}, |D(alpha*) - r_max^2| <= {worst_radius:.3e}, 60 states x 1e5 points in {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn ac4() -> Outcome {
    let mixed = SpectralState::maximally_mixed(3).unwrap();
    let matching: Vec<f64> = [1.0, -1.0]
        .into_iter()
        .filter(|s| (lambda_matrix(&mixed, s * PI / 3.0).unwrap() - choi_lambda()).abs().max() <= 1e-12)
        .collect();
    let family = ChoiFamilyMap::new(mixed, choi_angle()).unwrap();
    let mut off = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let e = matrix_unit(3, i, j);
                off = off.max((family.apply(&e) + e.scale(0.5)).camax());
            }
        }
    }
    let s = matching.first().copied();
    outcome(
        s.is_some() && off <= 1e-12,
        format!(
            "lambda_matrix(I/3, s*pi/3) = Lambda^Choi for s in {matching:?} (chosen s = {}); off-diagonal action error {off:.3e} at choi_angle = {}",
            s.map_or("none".to_string(), |v| format!("{v:+}")),
            choi_angle()
        ),
    )
}

fn ac5() -> Outcome {
    let mut rng = seeded_rng(0xAC5);
    let (mut e, mut x) = (0.0_f64, 0.0_f64);
    for k in 0..100u64 {
        let alpha = rng.random_range(-PI..PI);
        let s = random_faithful_state(3, 0xAC5 + k).unwrap();
        e = e.max(eta(alpha).iter().sum::<f64>().abs());
        x = x.max((xi(&s, alpha).unwrap().iter().sum::<f64>() - 1.0).abs());
    }
    outcome(e <= 1e-12 && x <= 1e-12, format!("max |sum eta| = {e:.3e}, max |sum xi - 1| = {x:.3e} over 100 (state, alpha)"))
}

fn ac6() -> Outcome {
    let mut rng = seeded_rng(0xAC6);
    let (mut tr, mut fix) = (0.0_f64, 0.0_f64);
    for k in 0..20u64 {
        let n = 2 + (k as usize % 4);
        let s = random_faithful_state(n, 0xAC6 + k).unwrap();
        let mu = rng.random_range(-1.0..1.0) * mu_max(&s) * 1.5;
        let map = BallMap::phi(s.clone(), mu).unwrap();
        fix = fix.max((map.apply(s.density().as_matrix()) - s.density().as_matrix()).camax());
        for _ in 0..50 {
            let a = hermitian_with(&mut rng, n);
            tr = tr.max((map.apply(a.as_matrix()).trace().re - a.trace()).abs());
        }
    }
    outcome(tr <= 1e-12 && fix <= 1e-12, format!("max |tr phi(a) - tr a| = {tr:.3e} (1000 a), max |phi(rho) - rho| = {fix:.3e} (20 states)"))
}

fn ac7() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = f64::INFINITY;
    for n in [3, 4] {
        for k in 0..10u64 {
            let s = random_faithful_state(n, 0xAC7 + 10 * n as u64 + k).unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let map = BallMap::phi(s.clone(), sign * mu_max(&s)).unwrap();
            let report = ball_image_check(&map, &s, 10_000, k, &tol).unwrap();
            worst = worst.min(report.r_max - report.max_distance);
        }
    }
    outcome(worst >= -1e-12, format!("min r_max - max ||rho~ - phi(rho)|| = {worst:.3e} over 20 states x 1e4 inputs"))
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut rng = seeded_rng(0xAC8);
    let mut worst = f64::INFINITY;
    for k in 0..10u64 {
        let s = random_faithful_state(3, 0xAC8 + k).unwrap();
        let kappa = rng.random_range(0.0..1.0);
        let delta = rng.random_range(0.0..1.0);
        let affine = AffineMap::extremal(&random_orthogonal(8, 2 * k), &random_orthogonal(8, 2 * k + 1), kappa, delta).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let map = BallMap::compose(s.clone(), sign * mu_max(&s), affine).unwrap();
        let cert = positivity_scan(&map, 10_000, 10, k, &tol).unwrap();
        worst = worst.min(cert.bound);
    }
    let elapsed = start.elapsed();
    outcome(
        worst >= -1e-10 && elapsed < Duration::from_secs(60),
        format!("min lambda_min over 10 extremal maps = {worst:.3e} (1e4 samples + refinement each) in {:.1}s", elapsed.as_secs_f64()),
    )
}

fn ac9() -> Outcome {
    let cert = cp_check(&ballmap::choi::classic_choi(), &Tolerances::default()).unwrap();
    outcome(
        cert.kind == CertificateKind::NotCp && cert.bound < -1e-3 && (cert.bound - CHOI_MIN_EIGENVALUE).abs() <= 1e-10,
        format!("Choi matrix min eigenvalue {} (pinned {CHOI_MIN_EIGENVALUE})", cert.bound),
    )
}

fn ac10() -> Outcome {
    let mixed = SpectralState::maximally_mixed(3).unwrap();
    let w = family_witness(&mixed, choi_angle()).unwrap();
    let m = w.matrix().as_matrix();
    let mu = mu_max(&mixed);
    let co = coefficients(&mixed, choi_angle()).unwrap();
    let coupled = [(0, 4), (0, 8), (4, 8)];
    let mut pattern_err = 0.0_f64;
    for r in 0..9 {
        for c in 0..9 {
            let expected = if r == c {
                let (block, pos) = (r / 3, r % 3);
                let coefficient = match (pos + 3 - block) % 3 {
                    0 => co.a[block],
                    1 => co.b[block],
                    _ => co.c[block],
                };
                coefficient * mu
            } else if coupled.contains(&(r.min(c), r.max(c))) {
                -mu
            } else {
                0.0
            };
            pattern_err = pattern_err.max((m[(r, c)] - num_complex::Complex64::new(expected, 0.0)).norm());
        }
    }
    let choi_diag_ok = co.a.iter().all(|&a| (a - 1.0).abs() < 1e-12)
        && co.b.iter().all(|&b| (b - 1.0).abs() < 1e-12)
        && co.c.iter().all(|&c| c.abs() < 1e-12);

    let mut rng = seeded_rng(0xA10);
    let mut sums = 0.0_f64;
    for k in 0..100u64 {
        let s = random_faithful_state(3, 0xA10 + k).unwrap();
        let co = coefficients(&s, rng.random_range(-PI..PI)).unwrap();
        for sum in co.cyclic_sums() {
            sums = sums.max((sum - 1.0 / co.mu_max).abs());
        }
    }
    let value = w.detect(&maximally_entangled(3)).unwrap();
    outcome(
        pattern_err < 1e-14 && choi_diag_ok && sums <= 1e-12 && (value + 0.5).abs() <= 1e-12,
        format!(
            "pattern error {pattern_err:.3e} (a=b=1, c=0 at Choi angle: {choi_diag_ok}); max |a_i+b_(i+1)+c_(i+2) - 1/mu_max| = {sums:.3e}; Tr(W P+) = {value}"
        ),
    )
}

fn ac11() -> Outcome {
    let mut w: Witness = family_witness(&SpectralState::maximally_mixed(3).unwrap(), choi_angle()).unwrap();
    let cert = w.certify(100, 0xA11, &Tolerances::default()).unwrap().clone();
    let min = w.min_eigenvalue();
    outcome(
        cert.bound >= -1e-8 && min < 0.0 && w.is_entanglement_witness(),
        format!("block-positivity bound {:.3e} over 100 restarts, min eigenvalue {min}", cert.bound),
    )
}

fn run_suite(dir: &Path) -> Vec<Vec<u8>> {
    let state = dir.join("state.json");
    let config = dir.join("map.json");
    std::fs::write(&state, r#"{"dim":3,"re":[[0.5,0.05,0],[0.05,0.3,0.01],[0,0.01,0.2]],"im":[[0,0.02,0],[-0.02,0,0],[0,0,0]]}"#).unwrap();
    std::fs::write(
        &config,
        r#"{"state":"maximally_mixed","mu":"-max","affine":{"kind":"extremal","kappa":0.3,"delta":0.6,"r1_seed":4,"r2_seed":5}}"#,
    )
    .unwrap();
    let st = state.to_str().unwrap();
    let cf = config.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["ball", "--state", st],
        vec!["map", "--config", cf, "--certify", "--samples", "2048", "--restarts", "4"],
        vec!["choi", "--alpha", "0.7", "--state", st],
        vec!["witness", "build", "--alpha", "0.7", "--state", st, "--certify", "--restarts", "16"],
        vec!["witness", "coeffs", "--alpha", "0.7", "--state", st],
        vec!["verify", "--config", cf, "--samples", "2048", "--restarts", "4"],
        vec!["figure", "--state", st, "--mu", "-max", "--alpha", "0.7"],
    ];
    runs.iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_ballmap"))
                .args(["--seed", "1234"])
                .args(args)
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{args:?} failed");
            out.stdout
        })
        .collect()
}

fn ac12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let first = run_suite(dir.path());
    let second = run_suite(dir.path());
    let bytes: usize = first.iter().map(Vec::len).sum();
    let same = first == second;
    outcome(same, format!("{} commands, {bytes} bytes of JSON, byte-identical across two runs: {same}", first.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("mu_max of maximally mixed states", ac1),
        ("r_max of maximally mixed states", ac2),
        ("tangency point oracle", ac3),
        ("Choi map recovery", ac4),
        ("eta / xi identities", ac5),
        ("trace preservation and fixed point", ac6),
        ("images stay in the ball", ac7),
        ("positivity of extremal maps", ac8),
        ("Choi map is not CP", ac9),
        ("witness structure", ac10),
        ("Choi witness is block positive", ac11),
        ("deterministic CLI output", ac12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = std::panic::catch_unwind(check).unwrap_or_else(|_| outcome(false, "panicked"));
        if !o.pass {
            failed += 1;
        }
        println!("{} AC{:<2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
