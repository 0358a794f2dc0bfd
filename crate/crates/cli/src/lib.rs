//! The `tcspace` command line: argument parsing, file loading and report
//! formatting on top of `tcspace` (the core crate).
//!
//! [`run`] never touches stdout or the process exit status; it returns the
//! exit code and the report so that tests can drive it directly.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tcspace::duality::dual_optimal;
use tcspace::l1embed::unit_coefficients;
use tcspace::quotient::parse_edge_vector;
use tcspace::sweep::cross_norm_sweep;
use tcspace::{
    extremes, family_metric, l1_norm, l1d_norm, min_weight_perfect_matching,
    nested_matching_check, parse_metric, parse_problem, parse_rational,
    quadruple_inequality_check, quotient_norm, sign_pattern_isometry_check, tc_norm,
    EdgeVector, FiniteMetricSpace, Matching, MetricFamily, NestedReport, PairSequence, Rational,
    SignPatternReport, TransportationProblem,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

const SELFTEST_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "tcspace", version, about = "Exact transportation cost norms on finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct Output {
    /// Structured JSON report instead of plain text
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check a metric file and print its size, minimum distance and diameter
    Validate {
        metric: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Transportation cost norm and an optimal plan
    Tcnorm {
        metric: PathBuf,
        problem: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// ℓ1 norm of a transportation problem
    L1norm {
        problem: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Minimum-weight perfect matching (all points unless --vertices is given)
    Matching {
        metric: PathBuf,
        #[arg(long, value_parser = parse_indices, value_name = "i,j,...")]
        vertices: Option<Indices>,
        #[command(flatten)]
        output: Output,
    },
    /// Check that every prefix of --pairs is a minimum matching
    NestedCheck {
        metric: PathBuf,
        #[arg(long, value_parser = parse_pairs, value_name = "x:y,...")]
        pairs: Pairs,
        #[command(flatten)]
        output: Output,
    },
    /// Weighted ℓ1 norm of an edge vector modulo the cycle space
    Quotient {
        metric: PathBuf,
        edges: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal 1-Lipschitz dual certificate
    Dual {
        metric: PathBuf,
        problem: PathBuf,
        #[arg(long, default_value_t = 0, value_name = "O")]
        base: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check all sign patterns of a pair sequence for isometric ℓ1 behaviour
    L1check {
        metric: PathBuf,
        #[arg(long, value_parser = parse_pairs, value_name = "x:y,...")]
        pairs: Pairs,
        #[arg(long, value_parser = parse_coeffs, value_name = "p/q,...")]
        coeffs: Option<Coeffs>,
        #[command(flatten)]
        output: Output,
    },
    /// Print a member of one of the five example families as a metric file
    Family {
        #[arg(long, value_parser = parse_family, value_name = "a|b|c|d|e")]
        family: MetricFamily,
        #[arg(long, value_name = "N")]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Strict quadruple inequalities over all indices up to --max
    QuadCheck {
        #[arg(long, value_parser = parse_family, value_name = "a|b|c|d|e")]
        family: MetricFamily,
        #[arg(long, default_value_t = 20, value_name = "N")]
        max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Compare four independent norm computations on random instances
    Selftest {
        /// Number of random instances
        #[arg(long, default_value_t = 50, value_name = "N")]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

// clap treats a bare `Vec<T>` field as a repeated argument; wrapping keeps
// each flag a single comma-separated value.
#[derive(Debug, Clone)]
struct Pairs(Vec<(usize, usize)>);

#[derive(Debug, Clone)]
struct Indices(Vec<usize>);

#[derive(Debug, Clone)]
struct Coeffs(Vec<Rational>);

fn parse_index(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a point index"))
}

fn parse_indices(s: &str) -> Result<Indices, String> {
    s.split(',').map(parse_index).collect::<Result<_, _>>().map(Indices)
}

fn parse_family(s: &str) -> Result<MetricFamily, String> {
    s.parse()
        .map_err(|_| format!("'{s}' is not one of a, b, c, d, e"))
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(',')
        .map(|p| {
            let (x, y) = p
                .split_once(':')
                .ok_or_else(|| format!("'{p}' is not of the form x:y"))?;
            Ok((parse_index(x)?, parse_index(y)?))
        })
        .collect::<Result<_, String>>()
        .map(Pairs)
}

fn parse_coeffs(s: &str) -> Result<Coeffs, String> {
    s.split(',')
        .map(|c| parse_rational(c.trim()).ok_or_else(|| format!("'{c}' is not a rational p/q")))
        .collect::<Result<_, String>>()
        .map(Coeffs)
}

/// Exit code plus the text for stdout (codes 0 and 1) or stderr (code 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub text: String,
}

struct Report {
    code: u8,
    plain: String,
    json: Value,
}

impl Report {
    fn ok(plain: String, json: Value) -> Self {
        Report {
            code: EXIT_OK,
            plain,
            json,
        }
    }

    fn verdict(passed: bool, plain: String, json: Value) -> Self {
        Report {
            code: if passed { EXIT_OK } else { EXIT_FAIL },
            plain,
            json,
        }
    }
}

/// Input error, already prefixed with the flag or file at fault.
struct InputError(String);

fn blame<E: Display>(what: impl Display) -> impl FnOnce(E) -> InputError {
    move |e| InputError(format!("{what}: {e}"))
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(blame(path.display()))
}

fn load_metric(path: &Path) -> Result<FiniteMetricSpace, InputError> {
    parse_metric(&read(path)?).map_err(blame(path.display()))
}

fn load_problem(path: &Path, space: Option<&FiniteMetricSpace>) -> Result<TransportationProblem, InputError> {
    let f = parse_problem(&read(path)?).map_err(blame(path.display()))?;
    if let Some(space) = space {
        tcspace::transport::check_support(space, &f).map_err(blame(path.display()))?;
    }
    Ok(f)
}

fn pair_sequence(space: &FiniteMetricSpace, pairs: Pairs) -> Result<PairSequence, InputError> {
    let seq = PairSequence::new(pairs.0).map_err(blame("--pairs"))?;
    seq.check_in(space).map_err(blame("--pairs"))?;
    Ok(seq)
}

fn q(r: &Rational) -> String {
    r.to_string()
}

fn edge_lines(m: &Matching) -> String {
    m.edges.iter().map(|(x, y)| format!("edge {x} {y}\n")).collect()
}

fn edges_json(m: &Matching) -> Value {
    json!(m.edges.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>())
}

fn edge_vector_json(f: &EdgeVector) -> Value {
    json!(f
        .iter()
        .map(|((i, j), v)| json!({"i": i, "j": j, "value": q(v)}))
        .collect::<Vec<_>>())
}

fn edge_vector_lines(f: &EdgeVector) -> String {
    f.iter().map(|((i, j), v)| format!("edge {i} {j} {v}\n")).collect()
}

/// Parses `argv` (program name first) and executes the verb.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome {
                code,
                text: e.render().to_string(),
            };
        }
    };
    let (result, output) = execute(cli.verb);
    let report = match result {
        Ok(r) => r,
        Err(InputError(msg)) => {
            return Outcome {
                code: EXIT_INPUT,
                text: format!("error: {msg}\n"),
            }
        }
    };
    let text = if output.json {
        let mut s = serde_json::to_string_pretty(&report.json).expect("report is valid json");
        s.push('\n');
        s
    } else {
        report.plain
    };
    match &output.out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code: report.code,
                text: String::new(),
            },
            Err(e) => Outcome {
                code: EXIT_INPUT,
                text: format!("error: --out {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code: report.code,
            text,
        },
    }
}

fn execute(verb: Verb) -> (Result<Report, InputError>, Output) {
    match verb {
        Verb::Validate { metric, output } => (validate(&metric), output),
        Verb::Tcnorm {
            metric,
            problem,
            output,
        } => (tcnorm(&metric, &problem), output),
        Verb::L1norm { problem, output } => (l1norm(&problem), output),
        Verb::Matching {
            metric,
            vertices,
            output,
        } => (matching(&metric, vertices), output),
        Verb::NestedCheck {
            metric,
            pairs,
            output,
        } => (nested_check(&metric, pairs), output),
        Verb::Quotient {
            metric,
            edges,
            output,
        } => (quotient(&metric, &edges), output),
        Verb::Dual {
            metric,
            problem,
            base,
            output,
        } => (dual(&metric, &problem, base), output),
        Verb::L1check {
            metric,
            pairs,
            coeffs,
            output,
        } => (l1check(&metric, pairs, coeffs), output),
        Verb::Family { family, n, output } => (emit_family(family, n), output),
        Verb::QuadCheck {
            family,
            max,
            output,
        } => (quad_check(family, max), output),
        Verb::Selftest { n, output } => (selftest(n), output),
    }
}

fn validate(metric: &Path) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let n = space.len();
    let mut plain = format!("valid metric on {n} points\n");
    let mut json = json!({"valid": true, "points": n});
    if n >= 2 {
        let (delta, diam) = extremes(&space).map_err(blame(metric.display()))?;
        plain.push_str(&format!("min distance {delta}\ndiameter {diam}\n"));
        json["min_distance"] = json!(q(&delta));
        json["diameter"] = json!(q(&diam));
    }
    Ok(Report::ok(plain, json))
}

fn tcnorm(metric: &Path, problem: &Path) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let f = load_problem(problem, Some(&space))?;
    let (norm, plan) = tc_norm(&space, &f).map_err(blame(problem.display()))?;
    let mut plain = format!("norm {norm}\n");
    for m in plan.moves() {
        plain.push_str(&format!("move {} -> {} {}\n", m.source, m.sink, m.amount));
    }
    let moves: Vec<Value> = plan
        .moves()
        .iter()
        .map(|m| json!({"source": m.source, "sink": m.sink, "amount": q(&m.amount)}))
        .collect();
    Ok(Report::ok(plain, json!({"norm": q(&norm), "plan": moves})))
}

fn l1norm(problem: &Path) -> Result<Report, InputError> {
    let f = load_problem(problem, None)?;
    let v = l1_norm(&f);
    Ok(Report::ok(format!("l1 {v}\n"), json!({"l1": q(&v)})))
}

fn matching(metric: &Path, vertices: Option<Indices>) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let vertices = vertices.map_or_else(|| (0..space.len()).collect(), |v| v.0);
    for &v in &vertices {
        space.check_index(v).map_err(blame("--vertices"))?;
    }
    let m = min_weight_perfect_matching(&space, &vertices).map_err(blame("--vertices"))?;
    let plain = format!("weight {}\n{}", m.weight, edge_lines(&m));
    Ok(Report::ok(
        plain,
        json!({"weight": q(&m.weight), "edges": edges_json(&m)}),
    ))
}

fn nested_check(metric: &Path, pairs: Pairs) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let seq = pair_sequence(&space, pairs)?;
    let report = nested_matching_check(&space, &seq).map_err(blame("--pairs"))?;
    Ok(match report {
        NestedReport::Pass { depth } => Report::verdict(
            true,
            format!("PASS {depth} prefixes\n"),
            json!({"result": "PASS", "depth": depth}),
        ),
        NestedReport::Fail {
            prefix,
            prescribed_weight,
            witness,
        } => Report::verdict(
            false,
            format!(
                "FAIL at n={prefix}\nprescribed weight {prescribed_weight}\nwitness weight {}\n{}",
                witness.weight,
                edge_lines(&witness)
            ),
            json!({
                "result": "FAIL",
                "prefix": prefix,
                "prescribed_weight": q(&prescribed_weight),
                "witness_weight": q(&witness.weight),
                "witness": edges_json(&witness),
            }),
        ),
    })
}

fn quotient(metric: &Path, edges: &Path) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let f = parse_edge_vector(&read(edges)?, space.len()).map_err(blame(edges.display()))?;
    let l1d = l1d_norm(&space, &f).map_err(blame(edges.display()))?;
    let (value, rep) = quotient_norm(&space, &f).map_err(blame(edges.display()))?;
    let plain = format!(
        "quotient {value}\nl1d {l1d}\nrepresentative\n{}",
        edge_vector_lines(&rep)
    );
    Ok(Report::ok(
        plain,
        json!({"quotient": q(&value), "l1d": q(&l1d), "representative": edge_vector_json(&rep)}),
    ))
}

fn dual(metric: &Path, problem: &Path, base: usize) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    space.check_index(base).map_err(blame("--base"))?;
    let f = load_problem(problem, Some(&space))?;
    let (h, value) = dual_optimal(&space, &f, base).map_err(blame(problem.display()))?;
    let mut plain = format!("dual {value}\nbase {base}\n");
    for (v, x) in h.values().iter().enumerate() {
        plain.push_str(&format!("h {v} {x}\n"));
    }
    let values: Vec<Value> = h
        .values()
        .iter()
        .enumerate()
        .map(|(v, x)| json!({"point": v, "value": q(x)}))
        .collect();
    Ok(Report::ok(
        plain,
        json!({"dual": q(&value), "base": base, "h": values}),
    ))
}

fn l1check(metric: &Path, pairs: Pairs, coeffs: Option<Coeffs>) -> Result<Report, InputError> {
    let space = load_metric(metric)?;
    let seq = pair_sequence(&space, pairs)?;
    let coeffs = coeffs.map_or_else(|| unit_coefficients(seq.len()), |c| c.0);
    let report = sign_pattern_isometry_check(&space, &seq, &coeffs).map_err(blame("--coeffs"))?;
    Ok(match report {
        SignPatternReport::Pass { patterns } => Report::verdict(
            true,
            format!("PASS {patterns} sign patterns\n"),
            json!({"result": "PASS", "patterns": patterns}),
        ),
        SignPatternReport::Fail {
            signs,
            coeffs,
            achieved,
            expected,
        } => {
            let signs: String = signs.iter().map(|s| s.to_string()).collect();
            let coeffs: Vec<String> = coeffs.iter().map(q).collect();
            Report::verdict(
                false,
                format!(
                    "FAIL signs {signs}\ncoeffs {}\nachieved {achieved}\nexpected {expected}\n",
                    coeffs.join(",")
                ),
                json!({
                    "result": "FAIL",
                    "signs": signs,
                    "coeffs": coeffs,
                    "achieved": q(&achieved),
                    "expected": q(&expected),
                }),
            )
        }
    })
}

fn emit_family(fam: MetricFamily, n: usize) -> Result<Report, InputError> {
    let space = family_metric(fam, n).map_err(blame("--n"))?;
    let plain = format!("# family {fam}, n = {n}, point i is v(i+1)\n{}", space.to_text());
    let labels = space.labels().unwrap_or_default();
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| q(space.distance(i, j))).collect())
        .collect();
    Ok(Report::ok(
        plain,
        json!({"family": fam.to_string(), "n": n, "labels": labels, "distances": rows}),
    ))
}

fn quad_check(fam: MetricFamily, max: usize) -> Result<Report, InputError> {
    let r = quadruple_inequality_check(fam, max).map_err(blame("--max"))?;
    let plain = if r.passed() {
        format!("PASS {} quadruples\n", r.checked)
    } else {
        let mut s = format!("FAIL {} of {} quadruples\n", r.violations.len(), r.checked);
        for [i, j, k, l] in &r.violations {
            s.push_str(&format!("violation v{i} v{j} v{k} v{l}\n"));
        }
        s
    };
    let json = json!({
        "result": if r.passed() { "PASS" } else { "FAIL" },
        "family": fam.to_string(),
        "checked": r.checked,
        "violations": r.violations,
    });
    Ok(Report::verdict(r.passed(), plain, json))
}

fn selftest(count: usize) -> Result<Report, InputError> {
    let r = cross_norm_sweep(SELFTEST_SEED, count).map_err(blame("selftest"))?;
    let mut plain = if r.passed() {
        format!("PASS {} instances\n", r.instances)
    } else {
        format!("FAIL {} of {} checks\n", r.failures.len(), r.instances)
    };
    for f in &r.failures {
        plain.push_str(f);
        plain.push('\n');
    }
    let json = json!({
        "result": if r.passed() { "PASS" } else { "FAIL" },
        "instances": r.instances,
        "failures": r.failures,
    });
    Ok(Report::verdict(r.passed(), plain, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_values() {
        assert_eq!(parse_pairs("0:1, 2:3").unwrap().0, vec![(0, 1), (2, 3)]);
        assert!(parse_pairs("0:1,2").is_err());
        assert!(parse_pairs("a:1").is_err());
        let c = parse_coeffs("1,-3/6,2").unwrap().0;
        assert_eq!(c, vec![tcspace::int(1), tcspace::ratio(-1, 2), tcspace::int(2)]);
        assert!(parse_coeffs("1/0").is_err());
        assert_eq!(parse_indices("3,0").unwrap().0, vec![3, 0]);
        assert_eq!(parse_family("c").unwrap(), MetricFamily::C);
        assert!(parse_family("f").is_err());
    }
}
