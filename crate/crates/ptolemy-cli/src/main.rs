//! Command-line surface for the Ptolemy pipeline: parse a triangulation,
//! generate and solve the variety, compute complex volumes, reconstruct
//! matrices, evaluate gluing equations, and search integer relations.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptolemy::bloch::{
    complex_volume, edge_log_sums, lambda_element, reduce_mod, ComplexVolumeClass, LiftPolicy,
};
use ptolemy::gluing::{cross_ratios, cusp_equation_eval, edge_equations};
use ptolemy::irrep::phi_n_matrix;
use ptolemy::mat::Mat;
use ptolemy::reconstruct::{reconstruct_and_verify, Cochain};
use ptolemy::relations::{find_integer_relation, RelationQuery};
use ptolemy::solver::{solve_newton_multistart, PtolemySolution, SolverConfig};
use ptolemy::triangulation::{parse_triangulation, Triangulation, Z2Cocycle};
use ptolemy::variety::{
    choose_gauge, diagonal_action_exponents, export_ideal, generate_relations, integral_points,
    ExportFormat, PolynomialSystem, VariableLookup,
};
use ptolemy::{C64, Parity};

mod json;
use json::{array, complex, digest, num, object, string};

#[derive(Parser)]
#[command(name = "ptolemy", version, about = "Ptolemy varieties and complex volumes of triangulated 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Include wall-clock timing in the report (breaks byte-identical output)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Clone)]
struct SigmaArgs {
    /// Level of the Ptolemy variety
    #[arg(long, default_value_t = 2)]
    n: u8,
    /// Obstruction class: `trivial` or an index into the H^2 enumeration
    #[arg(long, default_value = "trivial")]
    sigma: String,
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 2000)]
    starts: usize,
    /// Residual verification tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a triangulation file
    Parse { file: String },
    /// Vertex, edge and face classes
    Classes { file: String },
    /// Representatives of H^2(K; Z/2)
    H2 { file: String },
    /// Generate the Ptolemy variety
    Variety {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        /// Export format: `ideal` (algebra text) or `json`
        #[arg(long)]
        export: Option<String>,
    },
    /// Solve the gauge-fixed variety by multistart Newton
    Solve {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Complex volumes of all solutions
    Volumes {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Force the pSL reduction (volumes modulo pi^2 i)
        #[arg(long)]
        psl: bool,
    },
    /// Reconstruct the (G,N)-cocycle matrices of each solution
    Reconstruct {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Image of a 2x2 matrix under the canonical irreducible representation
    Phin {
        #[arg(long)]
        n: u8,
        /// Eight floats: re,im of the entries a, b, c, d
        #[arg(long, value_delimiter = ',')]
        matrix: Vec<f64>,
    },
    /// Edge gluing equations, evaluated on every solution's cross-ratios
    Gluing {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// LLL integer-relation search over volume values
    Relation {
        /// Target value (or an index into --from when that is given)
        #[arg(long, allow_hyphen_values = true)]
        target: Option<f64>,
        /// Basis values, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        basis: Vec<f64>,
        /// Read values from a saved `volumes` report instead
        #[arg(long)]
        from: Option<String>,
        /// Component of vol_c to read from the report: re or im
        #[arg(long, default_value = "re")]
        component: String,
        /// Index of the report entry used as the target (with --from)
        #[arg(long, default_value_t = 0)]
        target_index: usize,
        /// Report entries used as the basis (with --from); all others when
        /// omitted
        #[arg(long, value_delimiter = ',')]
        basis_indices: Option<Vec<usize>>,
        #[arg(long, default_value_t = 64)]
        bound: i64,
        #[arg(long, default_value_t = 1e8)]
        scale: f64,
    },
    /// Run the invariant suite on an input and its solutions
    Check {
        file: String,
        #[command(flatten)]
        sigma: SigmaArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Check this single assignment instead of solving: re,im pairs in
        /// variable order
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
}

struct DomainError(String, String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.push((
                    "timing_ms".into(),
                    num(started.elapsed().as_secs_f64() * 1e3),
                ));
            }
            let fields: Vec<(&str, String)> =
                report.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            println!("{}", object(&fields));
            ExitCode::SUCCESS
        }
        Err(DomainError(kind, message)) => {
            println!(
                "{}",
                object(&[
                    ("schema", "1".into()),
                    ("error", object(&[("kind", string(&kind)), ("message", string(&message))])),
                ])
            );
            ExitCode::FAILURE
        }
    }
}

type Report = Vec<(String, String)>;

fn header(command: &str, input: Option<&str>) -> Report {
    let mut r: Report = vec![
        ("schema".into(), "1".into()),
        ("command".into(), string(command)),
    ];
    if let Some(text) = input {
        r.push(("input_digest".into(), string(&digest(text))));
    }
    r
}

fn load(file: &str) -> Result<(String, Triangulation), DomainError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| DomainError("io".into(), format!("{file}: {e}")))?;
    let tri = parse_triangulation(&text)
        .map_err(|e| DomainError("triangulation".into(), e.to_string()))?;
    Ok((text, tri))
}

fn sigma_of(tri: &Triangulation, choice: &str) -> Result<Z2Cocycle, DomainError> {
    let reps = tri
        .enumerate_h2(16)
        .map_err(|e| DomainError("h2".into(), e.to_string()))?;
    if choice == "trivial" {
        return Ok(reps[0].clone());
    }
    let idx: usize = choice
        .parse()
        .map_err(|_| DomainError("usage".into(), format!("bad sigma `{choice}`")))?;
    reps.get(idx)
        .cloned()
        .ok_or_else(|| DomainError("h2".into(), format!("sigma index {idx} out of range ({} classes)", reps.len())))
}

fn build_system(tri: &Triangulation, n: u8, sigma: &Z2Cocycle) -> Result<PolynomialSystem, DomainError> {
    if !(2..=16).contains(&n) {
        return Err(DomainError("usage".into(), format!("--n must be in 2..=16, got {n}")));
    }
    let sys = generate_relations(tri, n, sigma)
        .map_err(|e| DomainError("variety".into(), e.to_string()))?;
    let action = diagonal_action_exponents(tri, n, &sys.variables);
    Ok(choose_gauge(&sys, &action))
}

fn default_seed(args: &SolveArgs) -> u64 {
    args.seed.unwrap_or_else(|| {
        std::env::var("PTOLEMY_SEED").ok().and_then(|v| v.parse().ok()).unwrap_or(0)
    })
}

fn run_solve(
    tri: &Triangulation,
    sigma: &SigmaArgs,
    solve: &SolveArgs,
) -> Result<(PolynomialSystem, Vec<PtolemySolution<f64>>, String), DomainError> {
    let sg = sigma_of(tri, &sigma.sigma)?;
    let sys = build_system(tri, sigma.n, &sg)?;
    let config = SolverConfig::<f64> {
        starts: solve.starts,
        seed: default_seed(solve),
        residual_tol: solve.tol,
        ..Default::default()
    };
    let out = solve_newton_multistart(&sys, &config);
    let stats = object(&[
        ("starts", out.stats.starts.to_string()),
        ("converged", out.stats.converged.to_string()),
        ("distinct", out.stats.distinct.to_string()),
        ("rejected_nonvanishing", out.stats.rejected_nonvanishing.to_string()),
        (
            "suspected_positive_dimensional",
            out.stats.suspected_positive_dimensional.to_string(),
        ),
    ]);
    Ok((sys, out.solutions, stats))
}

fn solution_json(sys: &PolynomialSystem, sol: &PtolemySolution<f64>) -> String {
    // ordered name -> [re, im] object
    let parts: Vec<String> = sys
        .variables
        .iter()
        .map(|v| format!("{}: {}", string(&v.name()), complex(sol.values[v.id])))
        .collect();
    object(&[
        ("variables", format!("{{{}}}", parts.join(", "))),
        ("residual", num(sol.residual)),
        ("source", string(sol.source.tag())),
    ])
}

fn lift_policy(sys: &PolynomialSystem, force_psl: bool) -> (LiftPolicy, Parity) {
    if force_psl || !sys.sigma.is_trivial() {
        (LiftPolicy::PslHalfSquare, Parity::OddAllowed)
    } else {
        (LiftPolicy::Principal, Parity::Even)
    }
}

fn run(cli: &Cli) -> Result<Report, DomainError> {
    match &cli.command {
        Command::Parse { file } => {
            let (text, tri) = load(file)?;
            let mut r = header("parse", Some(&text));
            r.push(("name".into(), string(&tri.name)));
            r.push(("simplex_count".into(), tri.simplex_count().to_string()));
            r.push((
                "signs".into(),
                array(tri.signs().iter().map(|s| s.to_string())),
            ));
            r.push((
                "curves".into(),
                array(tri.curves.iter().map(|c| string(&c.label))),
            ));
            Ok(r)
        }
        Command::Classes { file } => {
            let (text, tri) = load(file)?;
            let classes = tri.cell_classes();
            let mut r = header("classes", Some(&text));
            r.push(("vertex_classes".into(), classes.vertex_classes.len().to_string()));
            r.push(("edge_classes".into(), classes.edge_classes.len().to_string()));
            r.push(("face_classes".into(), classes.face_classes.len().to_string()));
            r.push((
                "edge_class_sizes".into(),
                array(classes.edge_classes.iter().map(|c| c.len().to_string())),
            ));
            let parity = tri
                .check_edge_parity()
                .map_err(|e| DomainError("parity".into(), e.to_string()))?;
            r.push((
                "edge_0213_counts".into(),
                array(parity.iter().map(|(_, c)| c.to_string())),
            ));
            Ok(r)
        }
        Command::H2 { file } => {
            let (text, tri) = load(file)?;
            let reps = tri
                .enumerate_h2(16)
                .map_err(|e| DomainError("h2".into(), e.to_string()))?;
            let mut r = header("h2", Some(&text));
            r.push(("count".into(), reps.len().to_string()));
            r.push((
                "representatives".into(),
                array(reps.iter().map(|rep| array(rep.values.iter().map(|v| v.to_string())))),
            ));
            Ok(r)
        }
        Command::Variety { file, sigma, export } => {
            let (text, tri) = load(file)?;
            let sg = sigma_of(&tri, &sigma.sigma)?;
            let sys = build_system(&tri, sigma.n, &sg)?;
            let mut r = header("variety", Some(&text));
            r.push(("n".into(), sigma.n.to_string()));
            r.push(("variables".into(), sys.variable_count().to_string()));
            r.push(("relations".into(), sys.relations.len().to_string()));
            r.push((
                "gauge".into(),
                array(sys.gauge.iter().map(|&v| string(&sys.variables[v].name()))),
            ));
            if let Some(fmt) = export {
                let format: ExportFormat =
                    fmt.parse().map_err(|e: ptolemy::variety::VarietyError| {
                        DomainError("usage".into(), e.to_string())
                    })?;
                r.push(("export".into(), string(&export_ideal(&sys, format))));
            }
            Ok(r)
        }
        Command::Solve { file, sigma, solve } => {
            let (text, tri) = load(file)?;
            let (sys, sols, stats) = run_solve(&tri, sigma, solve)?;
            let mut r = header("solve", Some(&text));
            r.push(("n".into(), sigma.n.to_string()));
            r.push(("solutions".into(), array(sols.iter().map(|s| solution_json(&sys, s)))));
            r.push(("stats".into(), stats));
            Ok(r)
        }
        Command::Volumes { file, sigma, solve, psl } => {
            let (text, tri) = load(file)?;
            let (sys, sols, stats) = run_solve(&tri, sigma, solve)?;
            let (policy, parity) = lift_policy(&sys, *psl);
            let mut vols = Vec::new();
            for s in &sols {
                let el = lambda_element(&tri, &sys, &s.values, &policy)
                    .map_err(|e| DomainError("bloch".into(), e.to_string()))?;
                let v = complex_volume(&el)
                    .map_err(|e| DomainError("bloch".into(), e.to_string()))?;
                vols.push(object(&[
                    ("volume", num(v.volume())),
                    ("chern_simons", num(v.chern_simons())),
                    ("vol_c", complex(v.value)),
                ]));
            }
            let mut r = header("volumes", Some(&text));
            r.push(("n".into(), sigma.n.to_string()));
            r.push((
                "modulus".into(),
                num(ComplexVolumeClass::<f64>::modulus(parity)),
            ));
            r.push(("volumes".into(), array(vols)));
            r.push(("stats".into(), stats));
            Ok(r)
        }
        Command::Reconstruct { file, sigma, solve } => {
            let (text, tri) = load(file)?;
            let (sys, sols, _) = run_solve(&tri, sigma, solve)?;
            let classes = tri.cell_classes();
            let lookup = VariableLookup::new(&tri, sys.n, &sys.variables);
            let mut items = Vec::new();
            for sol in &sols {
                let mut per_simplex = Vec::new();
                for s in 0..tri.simplex_count() {
                    let mut c = Cochain::new();
                    for t in integral_points(sys.n) {
                        let v = if t.iter().any(|&x| x == sys.n) {
                            C64::new(1.0, 0.0)
                        } else {
                            sol.values[lookup.id(s, &t)]
                        };
                        c.insert(t, v);
                    }
                    let mut fs = [1i8; 4];
                    for f in 0..4u8 {
                        fs[f as usize] = tri.sigma_on_face(&classes, &sys.sigma, s, f);
                    }
                    let cocycle = reconstruct_and_verify(&c, sys.n, fs, 1e-8)
                        .map_err(|e| DomainError("reconstruct".into(), e.to_string()))?;
                    let longs = array(cocycle.long.iter().map(|(&(i, j), m)| {
                        object(&[
                            ("edge", format!("[{i}, {j}]")),
                            ("matrix", matrix_json(m)),
                        ])
                    }));
                    let shorts = array(cocycle.short.iter().map(|(&(i, j, k), m)| {
                        object(&[
                            ("vertex", i.to_string()),
                            ("pair", format!("[{j}, {k}]")),
                            ("matrix", matrix_json(m)),
                        ])
                    }));
                    per_simplex.push(object(&[
                        ("simplex", s.to_string()),
                        ("long_edges", longs),
                        ("short_edges", shorts),
                    ]));
                }
                items.push(array(per_simplex));
            }
            let mut r = header("reconstruct", Some(&text));
            r.push(("cocycles".into(), array(items)));
            Ok(r)
        }
        Command::Phin { n, matrix } => {
            if matrix.len() != 8 {
                return Err(DomainError(
                    "usage".into(),
                    "matrix needs 8 comma-separated floats (re,im per entry)".into(),
                ));
            }
            let g = Mat::from_rows(&[
                vec![C64::new(matrix[0], matrix[1]), C64::new(matrix[2], matrix[3])],
                vec![C64::new(matrix[4], matrix[5]), C64::new(matrix[6], matrix[7])],
            ]);
            let img = phi_n_matrix(&g, *n).map_err(|e| DomainError("irrep".into(), e.to_string()))?;
            let mut r = header("phin", None);
            r.push(("n".into(), n.to_string()));
            r.push(("image".into(), matrix_json(&img)));
            Ok(r)
        }
        Command::Gluing { file, sigma, solve } => {
            let (text, tri) = load(file)?;
            let eqs = edge_equations(&tri);
            let eq_json = array(eqs.iter().map(|e| {
                object(&[
                    ("label", string(&e.label)),
                    (
                        "terms",
                        array(e.terms.iter().map(|(s, ex)| {
                            format!("[{}, {}, {}, {}]", s, ex[0], ex[1], ex[2])
                        })),
                    ),
                ])
            }));
            let mut r = header("gluing", Some(&text));
            r.push(("edge_equations".into(), eq_json));
            if sigma.n == 2 {
                let (sys, sols, _) = run_solve(&tri, sigma, solve)?;
                let mut rows = Vec::new();
                for s in &sols {
                    let shapes = cross_ratios(&tri, &sys, &s.values)
                        .map_err(|e| DomainError("gluing".into(), e.to_string()))?;
                    let products = array(eqs.iter().map(|e| complex(e.evaluate(&shapes))));
                    let curves = array(tri.curves.iter().map(|c| {
                        object(&[
                            ("label", string(&c.label)),
                            ("product", complex(cusp_equation_eval(c, &shapes))),
                        ])
                    }));
                    rows.push(object(&[
                        ("shapes", array((0..tri.simplex_count()).map(|i| complex(shapes.z(i))))),
                        ("edge_products", products),
                        ("cusp_products", curves),
                    ]));
                }
                r.push(("solutions".into(), array(rows)));
            }
            Ok(r)
        }
        Command::Relation {
            target,
            basis,
            from,
            component,
            target_index,
            basis_indices,
            bound,
            scale,
        } => {
            let (target, basis_vals) = match from {
                None => {
                    let t = target.ok_or_else(|| {
                        DomainError("usage".into(), "--target required without --from".into())
                    })?;
                    (t, basis.clone())
                }
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| DomainError("io".into(), format!("{path}: {e}")))?;
                    let values = extract_vol_c(&text, component)?;
                    let t = *values.get(*target_index).ok_or_else(|| {
                        DomainError(
                            "usage".into(),
                            format!("target index {target_index} out of range ({} entries)", values.len()),
                        )
                    })?;
                    let mut picked: Vec<f64> = match basis_indices {
                        Some(idx) => {
                            let mut v = Vec::new();
                            for &i in idx {
                                v.push(*values.get(i).ok_or_else(|| {
                                    DomainError(
                                        "usage".into(),
                                        format!("basis index {i} out of range"),
                                    )
                                })?);
                            }
                            v
                        }
                        None => values
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| i != target_index)
                            .map(|(_, &v)| v)
                            .collect(),
                    };
                    picked.extend_from_slice(basis);
                    (t, picked)
                }
            };
            let q = RelationQuery {
                target,
                basis: basis_vals.clone(),
                coefficient_bound: *bound,
                precision_scale: *scale,
            };
            let found = find_integer_relation(&q)
                .map_err(|e| DomainError("relation".into(), e.to_string()))?;
            let mut r = header("relation", None);
            match found {
                Some(coeffs) => {
                    let residual: f64 = coeffs
                        .iter()
                        .zip(std::iter::once(&target).chain(basis_vals.iter()))
                        .map(|(&c, &v)| c as f64 * v)
                        .sum();
                    r.push(("coefficients".into(), array(coeffs.iter().map(|c| c.to_string()))));
                    r.push(("residual".into(), num(residual)));
                }
                None => r.push(("coefficients".into(), "null".into())),
            }
            Ok(r)
        }
        Command::Check { file, sigma, solve, values } => {
            let (text, tri) = load(file)?;
            let (sys, sols, stats) = match values {
                None => run_solve(&tri, sigma, solve)?,
                Some(flat) => {
                    let sg = sigma_of(&tri, &sigma.sigma)?;
                    let sys = build_system(&tri, sigma.n, &sg)?;
                    if flat.len() != 2 * sys.variable_count() {
                        return Err(DomainError(
                            "usage".into(),
                            format!(
                                "expected {} re,im pairs, got {} floats",
                                sys.variable_count(),
                                flat.len()
                            ),
                        ));
                    }
                    let vals: Vec<C64> =
                        flat.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
                    let report = ptolemy::solver::verify_solution(
                        &sys,
                        &vals,
                        solve.tol,
                        1e-8,
                    )
                    .map_err(|e| DomainError("solver".into(), e.to_string()))?;
                    if !report.pass {
                        return Err(DomainError(
                            "solver".into(),
                            format!(
                                "assignment fails verification: residual {}, min modulus {}",
                                report.max_residual, report.min_modulus
                            ),
                        ));
                    }
                    let sol = PtolemySolution {
                        values: vals,
                        residual: report.max_residual,
                        source: ptolemy::solver::Source::User,
                    };
                    (sys, vec![sol], "null".to_string())
                }
            };
            let (policy, parity) = lift_policy(&sys, false);
            let modulus = ComplexVolumeClass::<f64>::modulus(parity);
            let mut checks: Vec<(String, bool, String)> = Vec::new();
            let mut worst_residual = 0.0f64;
            let mut worst_edge_sum = 0.0f64;
            let mut worst_lift = 0.0f64;
            let mut worst_gluing = 0.0f64;
            for s in &sols {
                worst_residual = worst_residual.max(s.residual);
                for (_, v) in edge_log_sums(&tri, &sys, &s.values, &policy)
                    .map_err(|e| DomainError("bloch".into(), e.to_string()))?
                {
                    worst_edge_sum = worst_edge_sum.max(v.norm());
                }
                let base = complex_volume(&lambda_element(&tri, &sys, &s.values, &policy)
                    .map_err(|e| DomainError("bloch".into(), e.to_string()))?)
                .map_err(|e| DomainError("bloch".into(), e.to_string()))?;
                for k in 0..5u64 {
                    let multiples: Vec<i32> = (0..sys.variable_count())
                        .map(|i| (((k + 1) * (i as u64 * 2654435761 % 5)) % 5) as i32 - 2)
                        .collect();
                    let moved = complex_volume(
                        &lambda_element(
                            &tri,
                            &sys,
                            &s.values,
                            &LiftPolicy::Shifted { base: Box::new(policy.clone()), multiples },
                        )
                        .map_err(|e| DomainError("bloch".into(), e.to_string()))?,
                    )
                    .map_err(|e| DomainError("bloch".into(), e.to_string()))?;
                    let d = (moved.value.re - base.value.re)
                        .abs()
                        .max(reduce_mod(moved.value.im - base.value.im, modulus).abs());
                    worst_lift = worst_lift.max(d);
                }
                if sys.n == 2 {
                    if let Ok(shapes) = cross_ratios(&tri, &sys, &s.values) {
                        for eq in edge_equations(&tri) {
                            worst_gluing = worst_gluing
                                .max((eq.evaluate(&shapes) - C64::new(1.0, 0.0)).norm());
                        }
                    }
                }
            }
            checks.push(("residuals".into(), worst_residual < solve.tol, num(worst_residual)));
            checks.push(("edge_log_sums".into(), worst_edge_sum < 1e-10, num(worst_edge_sum)));
            checks.push(("lift_independence".into(), worst_lift < 1e-9, num(worst_lift)));
            if sys.n == 2 {
                checks.push(("gluing_equations".into(), worst_gluing < 1e-9, num(worst_gluing)));
            }
            let all_pass = checks.iter().all(|(_, ok, _)| *ok);
            let mut r = header("check", Some(&text));
            r.push(("solution_count".into(), sols.len().to_string()));
            r.push((
                "checks".into(),
                array(checks.iter().map(|(name, ok, value)| {
                    object(&[
                        ("name", string(name)),
                        ("pass", ok.to_string()),
                        ("worst", value.clone()),
                    ])
                })),
            ));
            r.push(("pass".into(), all_pass.to_string()));
            r.push(("stats".into(), stats));
            Ok(r)
        }
    }
}

/// Pull the requested component of every `"vol_c": [re, im]` entry out of a
/// report emitted by the `volumes` subcommand.
fn extract_vol_c(text: &str, component: &str) -> Result<Vec<f64>, DomainError> {
    let pick = match component {
        "re" => 0,
        "im" => 1,
        other => {
            return Err(DomainError("usage".into(), format!("bad component `{other}`")));
        }
    };
    let mut out = Vec::new();
    let needle = "\"vol_c\": [";
    let mut rest = text;
    while let Some(pos) = rest.find(needle) {
        rest = &rest[pos + needle.len()..];
        let end = rest.find(']').ok_or_else(|| {
            DomainError("parse".into(), "unterminated vol_c entry".into())
        })?;
        let parts: Vec<&str> = rest[..end].split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(DomainError("parse".into(), "malformed vol_c entry".into()));
        }
        let v: f64 = parts[pick]
            .parse()
            .map_err(|_| DomainError("parse".into(), format!("bad number `{}`", parts[pick])))?;
        out.push(v);
        rest = &rest[end..];
    }
    if out.is_empty() {
        return Err(DomainError("parse".into(), "no vol_c entries in report".into()));
    }
    Ok(out)
}

fn matrix_json(m: &Mat<f64>) -> String {
    array((0..m.nrows()).map(|i| array((0..m.ncols()).map(|j| complex(m[(i, j)])))))
}
