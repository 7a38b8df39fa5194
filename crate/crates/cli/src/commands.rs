//! One function per subcommand. Each validates its arguments, runs the core
//! computation and renders every output format it supports.

use std::path::{Path, PathBuf};

use gasket::harmonic::{build_harmonic_gasket_with, HarmonicGasket, DEFAULT_RATIONAL_CAP};
use gasket::hilbert::{covariant_reach_witness, CovariantConfig, CovariantReport, CurveLengths};
use gasket::metric::{certify_vertex_agreement, gh_upper_bound_with, GasketGraph};
use gasket::spectrum::{
    count, counting_function, dimension_fit, enumerate, log_grid, zeta_partial, CountRow, DimensionFit,
};
use gasket::svg::{gasket_svg, harmonic_svg, Plot, Series};
use gasket::transport::{certify_extent, kantorovich, ExtentConfig, ExtentReport, KantorovichResult};
use gasket::{build_gasket, DiscreteMeasure, Dyadic, Field, FiniteMetricSpace, Rational, SpectrumSpec};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::args::{
    AlphaArg, CovariantArgs, DimensionArgs, ExtentArgs, GenArgs, Geometry, GhTableArgs, KantorovichArgs, Mode,
    SpectrumArgs,
};
use crate::output::{csv_document, json_document, CliError, Provenance, Rendered};

/// Largest `m` accepted by `gh-table`; `V_11` already has 265 722 vertices.
pub const GH_LEVEL_CAP: u32 = 11;
/// Largest `m` accepted by `extent`.
pub const EXTENT_LEVEL_CAP: u32 = 10;
/// Largest level whose all-pairs matrix `kantorovich` will build.
pub const KANTOROVICH_LEVEL_CAP: u32 = 6;
/// Supports up to this size are solved in exact arithmetic under `--mode auto`.
pub const EXACT_SUPPORT_LIMIT: usize = 64;
/// Eigenvalue enumeration is skipped above this many eigenvalues.
const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Outcome of a command: rendered output plus an optional error to report
/// after the output has been written.
pub struct Outcome {
    pub rendered: Rendered,
    pub deferred: Option<CliError>,
}

impl Outcome {
    fn ok(rendered: Rendered) -> Self {
        Outcome { rendered, deferred: None }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(validation(format!("--tol must be a positive number, got {tol}")))
    }
}

fn plot_with(prov: &Provenance, plot: Plot) -> Option<String> {
    Some(plot.to_svg(&prov.summary()))
}

// gen

fn harmonic_gasket(level: u32, tol: f64, cap: u32) -> Result<HarmonicGasket, CliError> {
    check_tol(tol)?;
    if level > DEFAULT_RATIONAL_CAP {
        return Err(validation(format!(
            "harmonic level {level} exceeds the exact-rational cap of {DEFAULT_RATIONAL_CAP}"
        )));
    }
    Ok(build_harmonic_gasket_with(level, tol, cap)?)
}

fn non_converged(g: &HarmonicGasket) -> Option<CliError> {
    let bad = g.curves.iter().filter(|q| !q.converged).count();
    (bad > 0).then(|| {
        CliError::NonConvergence(format!(
            "{bad} of {} curve lengths did not reach tolerance {} within the quadrature cap",
            g.curves.len(),
            g.tolerance
        ))
    })
}

pub fn gen(args: &GenArgs, prov: &Provenance) -> Result<Outcome, CliError> {
    match args.geometry {
        Geometry::Sg => {
            let complex = build_gasket(args.level)?;
            let json = complex.to_json();
            let mut csv = String::from("id,level,kind,endpoint0,endpoint1,length\n");
            for c in complex.curves() {
                csv.push_str(&format!(
                    "{},{},{:?},{},{},{}\n",
                    c.id,
                    c.level,
                    c.kind,
                    c.endpoints[0],
                    c.endpoints[1],
                    Dyadic::pow2_neg(c.level)
                ));
            }
            Ok(Outcome::ok(Rendered {
                json: Some(json_document(prov, &json)?),
                csv: Some(csv_document(prov, &csv)),
                svg: Some(gasket_svg(&complex, args.level, &prov.summary())),
            }))
        }
        Geometry::Harmonic => {
            let g = harmonic_gasket(args.level, args.tol, args.quadrature_cap)?;
            Ok(Outcome {
                rendered: Rendered {
                    json: Some(json_document(prov, &g.to_json())?),
                    csv: Some(csv_document(prov, &g.curves_csv())),
                    svg: Some(harmonic_svg(&g, &prov.summary())),
                },
                deferred: non_converged(&g),
            })
        }
    }
}

// gh-table

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GhRow {
    pub n: u32,
    pub m: u32,
    pub sample_term: Dyadic,
    pub vertex_term: Dyadic,
    pub edge_sampling_slack: Dyadic,
    pub sampling_slack: Dyadic,
    pub bound: Dyadic,
    pub reference_bound: Dyadic,
    /// `bound ≤ referenceBound + 2^{-m}`.
    pub within_reference: bool,
    pub agreement_discrepancy: Dyadic,
}

pub fn gh_table(args: &GhTableArgs, prov: &Provenance) -> Result<Outcome, CliError> {
    if args.n_min > args.n_max {
        return Err(validation(format!("--n-min {} exceeds --n-max {}", args.n_min, args.n_max)));
    }
    if args.n_max > args.m {
        return Err(validation(format!("--n-max {} exceeds the sample level --m {}", args.n_max, args.m)));
    }
    if args.m > GH_LEVEL_CAP {
        return Err(validation(format!("--m {} exceeds the gh-table level cap of {GH_LEVEL_CAP}", args.m)));
    }
    let complex = build_gasket(args.m)?;
    let g_m = GasketGraph::<Dyadic>::euclidean(&complex, args.m)?;
    let mut rows = Vec::new();
    for n in args.n_min..=args.n_max {
        let b = gh_upper_bound_with(&complex, n, args.m, args.sample_depth)?;
        let g_n = GasketGraph::<Dyadic>::euclidean(&complex, n)?;
        let agreement = certify_vertex_agreement(n, args.m, &g_n, &g_m)?;
        let slack = Dyadic::pow2_neg(args.m);
        rows.push(GhRow {
            n,
            m: args.m,
            sample_term: b.sample_term,
            vertex_term: b.vertex_term,
            edge_sampling_slack: b.edge_sampling_slack,
            sampling_slack: b.sampling_slack,
            bound: b.bound,
            reference_bound: b.reference_bound,
            within_reference: b.bound <= b.reference_bound + slack,
            agreement_discrepancy: agreement.max_discrepancy,
        });
    }
    let mut csv = String::from(
        "n,m,sampleTerm,vertexTerm,edgeSamplingSlack,samplingSlack,bound,referenceBound,withinReference,agreementDiscrepancy\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m,
            r.sample_term,
            r.vertex_term,
            r.edge_sampling_slack,
            r.sampling_slack,
            r.bound,
            r.reference_bound,
            r.within_reference,
            r.agreement_discrepancy
        ));
    }
    let series = |name: &str, f: &dyn Fn(&GhRow) -> Dyadic| Series {
        name: name.into(),
        points: rows.iter().map(|r| (r.n as f64, f(r).to_f64())).collect(),
        markers_only: false,
    };
    let plot = Plot {
        title: format!("Certified GH bound, m = {}", args.m),
        x_label: "n".into(),
        y_label: "bound".into(),
        log_x: false,
        log_y: true,
        series: vec![series("certified bound", &|r| r.bound), series("2^(1-n)", &|r| r.reference_bound)],
    };
    Ok(Outcome::ok(Rendered {
        json: Some(json_document(prov, &rows)?),
        csv: Some(csv_document(prov, &csv)),
        svg: plot_with(prov, plot),
    }))
}

// spectrum and dimension

fn spectrum_spec(geometry: Geometry, level: Option<u32>, tol: f64, cap: u32) -> Result<(SpectrumSpec, Option<CliError>), CliError> {
    match (geometry, level) {
        (Geometry::Sg, None) => Ok((SpectrumSpec::SierpinskiInfinite, None)),
        (Geometry::Sg, Some(n)) => {
            if n > gasket::gasket::DEFAULT_LEVEL_CAP {
                return Err(validation(format!(
                    "--level {n} exceeds the level cap of {}",
                    gasket::gasket::DEFAULT_LEVEL_CAP
                )));
            }
            Ok((SpectrumSpec::sierpinski(n), None))
        }
        (Geometry::Harmonic, None) => Err(validation("--geometry harmonic needs --level")),
        (Geometry::Harmonic, Some(n)) => {
            let g = harmonic_gasket(n, tol, cap)?;
            let lengths: Vec<f64> = g.curves.iter().map(|q| q.length).collect();
            Ok((SpectrumSpec::from_lengths(&lengths)?, non_converged(&g)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumerationCheck {
    pub cutoff: f64,
    pub eigenvalues: u128,
    pub contains_zero: bool,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumResult {
    pub spec: SpectrumSpec,
    pub rows: Vec<CountRow>,
    pub enumeration: Option<EnumerationCheck>,
    pub zeta: Option<ZetaValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZetaValue {
    pub s: f64,
    pub curve_cap: Option<usize>,
    pub value: f64,
}

fn count_plot(title: String, rows: &[CountRow], fit: Option<&DimensionFit>) -> Plot {
    let mut series = vec![Series {
        name: "N(Λ)".into(),
        points: rows.iter().map(|r| (r.cutoff, r.count as f64)).collect(),
        markers_only: fit.is_some(),
    }];
    if let Some(f) = fit {
        series.push(Series {
            name: format!("fit, slope {:.4}", f.slope),
            points: f.grid.iter().map(|&x| (x, (f.intercept + f.slope * x.ln()).exp())).collect(),
            markers_only: false,
        });
    }
    Plot { title, x_label: "Λ".into(), y_label: "N(Λ)".into(), log_x: true, log_y: true, series }
}

pub fn spectrum(args: &SpectrumArgs, prov: &Provenance) -> Result<Outcome, CliError> {
    let (spec, deferred) = spectrum_spec(args.geometry, args.level, args.tol, args.quadrature_cap)?;
    let grid = log_grid(args.lambda_min, args.lambda_max, args.points)?;
    let rows = counting_function(&spec, &grid)?;
    let enumeration = if count(&spec, args.lambda_max)? <= ENUMERATION_LIMIT {
        let e = enumerate(&spec, args.lambda_max)?;
        Some(EnumerationCheck {
            cutoff: args.lambda_max,
            eigenvalues: e.total(),
            contains_zero: e.contains_zero(),
            symmetric: e.is_symmetric(),
        })
    } else {
        None
    };
    let zeta = match args.zeta_s {
        Some(s) => Some(ZetaValue { s, curve_cap: args.zeta_cap, value: zeta_partial(&spec, s, args.zeta_cap)? }),
        None => None,
    };
    let mut csv = String::from("lambda,count\n");
    for r in &rows {
        csv.push_str(&format!("{:?},{}\n", r.cutoff, r.count));
    }
    let plot = count_plot("Eigenvalue counting function".into(), &rows, None);
    let result = SpectrumResult { spec, rows, enumeration, zeta };
    Ok(Outcome {
        rendered: Rendered {
            json: Some(json_document(prov, &result)?),
            csv: Some(csv_document(prov, &csv)),
            svg: plot_with(prov, plot),
        },
        deferred,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Reference {
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionResult {
    pub spec: SpectrumSpec,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub fit: DimensionFit,
    pub reference: Option<Reference>,
}

pub fn dimension(args: &DimensionArgs, prov: &Provenance) -> Result<Outcome, CliError> {
    let (spec, deferred) = spectrum_spec(args.geometry, args.level, args.tol, args.quadrature_cap)?;
    let fit = dimension_fit(&spec, args.lambda_min, args.lambda_max, args.points)?;
    let reference = matches!(spec, SpectrumSpec::SierpinskiInfinite).then(|| Reference {
        value: 3f64.log2(),
        note: "log2(3); comparing a finite-window least-squares slope against it is a toolkit choice".into(),
    });
    let mut csv = String::from("lambda,count,residual\n");
    for ((x, c), r) in fit.grid.iter().zip(&fit.counts).zip(&fit.residuals) {
        csv.push_str(&format!("{x:?},{c},{r:?}\n"));
    }
    csv.push_str(&format!("# slope={:?} intercept={:?} stderr={:?}\n", fit.slope, fit.intercept, fit.stderr));
    let rows: Vec<CountRow> =
        fit.grid.iter().zip(&fit.counts).map(|(&cutoff, &count)| CountRow { cutoff, count }).collect();
    let plot = count_plot("Spectral dimension fit".into(), &rows, Some(&fit));
    let result = DimensionResult { spec, lambda_min: args.lambda_min, lambda_max: args.lambda_max, fit, reference };
    Ok(Outcome {
        rendered: Rendered {
            json: Some(json_document(prov, &result)?),
            csv: Some(csv_document(prov, &csv)),
            svg: plot_with(prov, plot),
        },
        deferred,
    })
}

// kantorovich

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("cannot parse {s:?} as a rational number");
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 30 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i128.pow(frac.len() as u32);
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let num = whole.abs() * den + f;
        return Ok(Ratio::new(if negative { -num } else { num }, den));
    }
    s.parse::<i128>().map(Ratio::from_integer).map_err(|_| bad())
}

/// `"i:w,j:w,…"` into support indices and exact weights.
pub fn parse_measure(s: &str) -> Result<(Vec<usize>, Vec<Rational>), String> {
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (i, w) = item.split_once(':').ok_or_else(|| format!("expected index:weight, got {item:?}"))?;
        support.push(i.trim().parse::<usize>().map_err(|_| format!("bad point index {i:?}"))?);
        weights.push(parse_rational(w)?);
    }
    if support.is_empty() {
        return Err("measure has empty support".into());
    }
    Ok((support, weights))
}

enum Space {
    Exact(FiniteMetricSpace<Dyadic>),
    Float(FiniteMetricSpace<f64>),
}

fn cache_path(level: u32) -> Option<PathBuf> {
    std::env::var_os("GASKET_CACHE_DIR").map(|d| Path::new(&d).join(format!("sg-level-{level}-distances.json")))
}

/// All-pairs geodesic distances on `V_level`, through the cache directory
/// when `GASKET_CACHE_DIR` is set.
fn level_space(level: u32) -> Result<FiniteMetricSpace<Dyadic>, CliError> {
    if level > KANTOROVICH_LEVEL_CAP {
        return Err(validation(format!(
            "--level {level} exceeds the kantorovich level cap of {KANTOROVICH_LEVEL_CAP}"
        )));
    }
    let path = cache_path(level);
    let expected = gasket::gasket::vertex_count(level);
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(space) = serde_json::from_str::<FiniteMetricSpace<Dyadic>>(&text) {
                if space.len() == expected && space.d.iter().all(|r| r.len() == expected) {
                    return Ok(space);
                }
            }
        }
    }
    let complex = build_gasket(level)?;
    let g = GasketGraph::<Dyadic>::euclidean(&complex, level)?;
    let vertices: Vec<usize> = (0..g.graph.vertex_count()).collect();
    let space = FiniteMetricSpace::from_graph(&g.graph, &vertices, Vec::new())?;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(p, serde_json::to_string(&space)?)?;
    }
    Ok(space)
}

fn load_space(path: &Path) -> Result<Space, CliError> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(space) = serde_json::from_str::<FiniteMetricSpace<Dyadic>>(&text) {
        space.validate()?;
        return Ok(Space::Exact(space));
    }
    let space: FiniteMetricSpace<f64> = serde_json::from_str(&text)
        .map_err(|e| validation(format!("{} is not a finite metric space: {e}", path.display())))?;
    space.validate()?;
    Ok(Space::Float(space))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlanEntry {
    pub from: usize,
    pub to: usize,
    pub mass: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KantorovichOutput {
    pub mode: Mode,
    pub points: usize,
    /// Exact rational `p/q` in exact mode, shortest round-trip decimal otherwise.
    pub value: String,
    pub value_float: f64,
    pub dual_value: String,
    pub gap: String,
    pub plan: Vec<PlanEntry>,
    pub dual: Vec<String>,
}

fn render_result<F: Field>(mode: Mode, r: &KantorovichResult<F>, show: impl Fn(F) -> String) -> KantorovichOutput {
    KantorovichOutput {
        mode,
        points: r.dual.len(),
        value: show(r.value),
        value_float: r.value.to_f64(),
        dual_value: show(r.dual_value),
        gap: show(r.gap),
        plan: r.plan.iter().map(|&(from, to, m)| PlanEntry { from, to, mass: show(m) }).collect(),
        dual: r.dual.iter().map(|&f| show(f)).collect(),
    }
}

fn float_measure(support: &[usize], weights: &[Rational]) -> Result<DiscreteMeasure<f64>, CliError> {
    let w = weights.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
    Ok(DiscreteMeasure::new(support.to_vec(), w)?)
}

pub fn kantorovich_cmd(args: &KantorovichArgs, prov: &Provenance) -> Result<Outcome, CliError> {
    let (mu_s, mu_w) = parse_measure(&args.mu).map_err(validation)?;
    let (nu_s, nu_w) = parse_measure(&args.nu).map_err(validation)?;
    let space = match &args.space {
        Some(p) => load_space(p)?,
        None => {
            if args.geometry != Geometry::Sg {
                return Err(validation("kantorovich builds only --geometry sg; pass --space for other metrics"));
            }
            Space::Exact(level_space(args.level)?)
        }
    };
    let support_size = mu_s.len() + nu_s.len();
    let exact = match (args.mode, &space) {
        (Mode::Exact, Space::Float(_)) => {
            return Err(validation("--mode exact needs a space with dyadic distances"));
        }
        (Mode::Exact, Space::Exact(_)) => true,
        (Mode::Float, _) => false,
        (Mode::Auto, Space::Exact(_)) => support_size <= EXACT_SUPPORT_LIMIT,
        (Mode::Auto, Space::Float(_)) => false,
    };
    let out = if exact {
        let Space::Exact(s) = &space else { unreachable!() };
        let s = s.map(|d| d.to_ratio());
        let mu = DiscreteMeasure::new(mu_s, mu_w)?;
        let nu = DiscreteMeasure::new(nu_s, nu_w)?;
        render_result(Mode::Exact, &kantorovich(&s, &mu, &nu)?, |r: Rational| r.to_string())
    } else {
        let s = match &space {
            Space::Exact(s) => s.map(|d| d.to_f64()),
            Space::Float(s) => s.clone(),
        };
        let mu = float_measure(&mu_s, &mu_w)?;
        let nu = float_measure(&nu_s, &nu_w)?;
        render_result(Mode::Float, &kantorovich(&s, &mu, &nu)?, |x: f64| format!("{x:?}"))
    };
    let mut csv = String::from("from,to,mass\n");
    for p in &out.plan {
        csv.push_str(&format!("{},{},{}\n", p.from, p.to, p.mass));
    }
    csv.push_str(&format!("# value={} gap={}\n", out.value, out.gap));
    Ok(Outcome::ok(Rendered {
        json: Some(json_document(prov, &out)?),
        csv: Some(csv_document(prov, &csv)),
        svg: None,
    }))
}

// extent

pub fn extent(args: &ExtentArgs, prov: &Provenance, seed: u64) -> Result<Outcome, CliError> {
    if args.m < args.n {
        return Err(validation(format!("--m {} must be at least --n {}", args.m, args.n)));
    }
    if args.m > EXTENT_LEVEL_CAP {
        return Err(validation(format!("--m {} exceeds the extent level cap of {EXTENT_LEVEL_CAP}", args.m)));
    }
    let mut config = ExtentConfig::new(args.n, args.m);
    config.alpha = match args.alpha {
        AlphaArg::Auto => None,
        AlphaArg::Value(a) => Some(a),
    };
    config.sample_depth = args.sample_depth;
    config.epsilon_target = args.epsilon_target;
    config.mixtures = args.mixtures;
    config.seed = seed;
    let complex = build_gasket(args.m)?;
    let mut report: ExtentReport = certify_extent(&complex, &config)?;
    if !args.dirac_table {
        report.dirac_table.clear();
    }
    let premises_hold = report.premises.iter().all(|p| p.holds);
    let mixture_max = report.mixture_max.map(|r| r.to_string()).unwrap_or_default();
    let csv = format!(
        "n,m,sampleDepth,alpha,epsilon,diracBound,bound,empiricalMax,maxAToB,maxBToA,premisesHold,mixtureChecks,mixtureMax,mixtureViolations\n\
         {},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        report.n,
        report.m,
        report.sample_depth,
        report.alpha,
        report.epsilon,
        report.dirac_bound,
        report.bound,
        report.empirical_max,
        report.max_a_to_b,
        report.max_b_to_a,
        premises_hold,
        report.mixture_checks,
        mixture_max,
        report.mixture_violations
    );
    Ok(Outcome::ok(Rendered {
        json: Some(json_document(prov, &report)?),
        csv: Some(csv_document(prov, &csv)),
        svg: None,
    }))
}

// covariant

pub fn covariant(args: &CovariantArgs, prov: &Provenance, seed: u64) -> Result<Outcome, CliError> {
    let lengths = CurveLengths::Sierpinski;
    let level = match args.n {
        Some(n) => n,
        None => lengths.level_for(args.epsilon)?,
    };
    if level > 40 {
        return Err(validation(format!("--n {level} exceeds the covariant level cap of 40")));
    }
    if args.trials == 0 {
        return Err(validation("--trials must be positive"));
    }
    let mut config = CovariantConfig::new(level, args.epsilon, args.trials, seed);
    config.time_points = args.time_points;
    let report: CovariantReport = covariant_reach_witness(&config, &lengths)?;
    let csv = format!(
        "n,epsilon,trials,longestDropped,threshold,levelMeetsThreshold,maxTail,maxReach,maxReachDeviation,tailViolations,leibnizViolations,maxLeibnizRatio\n\
         {},{:?},{},{:?},{:?},{},{:?},{:?},{:?},{},{},{:?}\n",
        level,
        args.epsilon,
        args.trials,
        report.longest_dropped,
        report.threshold,
        report.level_meets_threshold,
        report.max_tail,
        report.max_reach,
        report.max_reach_deviation,
        report.tail_violations,
        report.leibniz_violations,
        report.max_leibniz_ratio
    );
    Ok(Outcome::ok(Rendered {
        json: Some(json_document(prov, &report)?),
        csv: Some(csv_document(prov, &csv)),
        svg: None,
    }))
}
