//! `meshpat`: batch front end for mesh pattern containment and the
//! enclosed-diagonal criterion.
//!
//! Boolean queries answer through the exit code as well as the text:
//! 0 for yes, 3 for no. Usage and parse errors exit with 2, violated
//! preconditions and resource bounds with 1, and a disagreement between the
//! criterion and brute force with 4.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use meshpat::{
    candidate_diagonals, contains_mesh, enclosed_diagonals, extremal_permutations, mesh_occurrences,
    repair_occurrence, repair_path, sup_mesh_direct, sup_mesh_ie, sup_mesh_table, verify_coincidence,
    witness, EnclosedDiagonal, Error, MeshPattern, Occurrence, Permutation, SupMeshReport,
};
use serde_json::{json, Value};

mod render;

use render::{big, Output};

const EXIT_OK: u8 = 0;
const EXIT_BOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FALSE: u8 = 3;
const EXIT_THEOREM: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "meshpat", version, about = "Mesh patterns and superfluous meshes")]
struct Cli {
    /// Output format (`verify` defaults to json, everything else to text).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "MESHPAT_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (or list) occurrences of a classical or mesh pattern.
    Occurrences {
        host: Permutation,
        pattern: PatternArg,
        /// Print every occurrence, not just the count.
        #[arg(long)]
        list: bool,
    },
    /// Does HOST contain PATTERN?
    Contains { host: Permutation, pattern: PatternArg },
    /// Enclosed diagonals of a mesh pattern, or every candidate of a permutation.
    Diagonals { pattern: PatternArg },
    /// Is the mesh superfluous?
    Superfluous { pattern: MeshPattern },
    /// Number of superfluous meshes of a permutation.
    Supmesh {
        perm: Permutation,
        /// Cross-check against exhaustive enumeration of the mesh space.
        #[arg(long)]
        oracle: bool,
    },
    /// Superfluous mesh counts for every permutation of length K.
    Table {
        k: usize,
        #[arg(long)]
        oracle: bool,
    },
    /// Permutations of length K with the fewest and most superfluous meshes.
    Extremal { k: usize },
    /// Compare avoidance of a mesh pattern and its classical pattern by brute force.
    Verify {
        pattern: MeshPattern,
        /// Longest host length to scan (default k+2).
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// A permutation of length k+1 that separates PERM from (PERM, DIAGONAL).
    Witness { perm: Permutation, diagonal: EnclosedDiagonal },
    /// Move an occurrence of a superfluous mesh pattern towards a mesh occurrence.
    Repair {
        host: Permutation,
        pattern: MeshPattern,
        occurrence: Occurrence,
        /// Keep repairing until no shaded region is occupied, printing each step.
        #[arg(long)]
        full: bool,
    },
}

/// A classical pattern (`132`) or a mesh pattern (`132:0,0;1,2`).
#[derive(Debug, Clone)]
enum PatternArg {
    Classical(Permutation),
    Mesh(MeshPattern),
}

impl FromStr for PatternArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.contains(':') {
            s.parse().map(PatternArg::Mesh)
        } else {
            s.parse().map(PatternArg::Classical)
        }
    }
}

impl PatternArg {
    fn text(&self) -> String {
        match self {
            PatternArg::Classical(p) => p.to_text(),
            PatternArg::Mesh(m) => m.to_text(),
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BoundExceeded { .. } | Error::Precondition(_) => EXIT_BOUND,
            Error::TheoremViolation(_) => EXIT_THEOREM,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<(Output, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.into()).build_global() {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(EXIT_BOUND);
        }
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Verify { .. } => Format::Json,
        _ => Format::Text,
    });
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{}", out.render(format));
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn yes_no(b: bool) -> u8 {
    if b {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn occ_json(o: &Occurrence) -> Value {
    json!(o.indices())
}

fn run(command: Command) -> Run {
    match command {
        Command::Occurrences { host, pattern, list } => {
            let occs = match &pattern {
                PatternArg::Classical(p) => host.occurrences(p),
                PatternArg::Mesh(m) => mesh_occurrences(&host, m),
            };
            let mut text = format!("{}\n", occs.len());
            if list {
                for o in &occs {
                    writeln!(text, "{o}").unwrap();
                }
            }
            let mut obj = json!({
                "host": host.to_text(),
                "pattern": pattern.text(),
                "count": occs.len(),
            });
            if list {
                obj["occurrences"] = occs.iter().map(occ_json).collect();
            }
            let mut csv = vec![vec![host.to_text(), pattern.text(), occs.len().to_string()]];
            let header = if list {
                csv = occs
                    .iter()
                    .map(|o| vec![host.to_text(), pattern.text(), o.to_string()])
                    .collect();
                &["host", "pattern", "occurrence"]
            } else {
                &["host", "pattern", "count"]
            };
            Ok((Output::new(text, vec![obj], header, csv), EXIT_OK))
        }
        Command::Contains { host, pattern } => {
            let found = match &pattern {
                PatternArg::Classical(p) => host.contains(p),
                PatternArg::Mesh(m) => contains_mesh(&host, m),
            };
            let text = format!("{}\n", if found { "yes" } else { "no" });
            let obj = json!({ "host": host.to_text(), "pattern": pattern.text(), "contains": found });
            let csv = vec![vec![host.to_text(), pattern.text(), found.to_string()]];
            Ok((
                Output::new(text, vec![obj], &["host", "pattern", "contains"], csv),
                yes_no(found),
            ))
        }
        Command::Diagonals { pattern } => {
            let diagonals = match &pattern {
                PatternArg::Classical(p) => candidate_diagonals(p),
                PatternArg::Mesh(m) => enclosed_diagonals(m),
            };
            let mut text = String::new();
            for d in &diagonals {
                writeln!(text, "{d}").unwrap();
            }
            let obj = json!({ "pattern": pattern.text(), "diagonals": diagonals });
            let csv = diagonals
                .iter()
                .map(|d| {
                    let squares: Vec<String> = d.squares().iter().map(|s| format!("{},{}", s.col, s.row)).collect();
                    vec![
                        pattern.text(),
                        d.anchor.col.to_string(),
                        d.anchor.row.to_string(),
                        d.direction.sign().to_string(),
                        d.length.to_string(),
                        squares.join(";"),
                    ]
                })
                .collect();
            Ok((
                Output::new(text, vec![obj], &["pattern", "i", "j", "eps", "h", "squares"], csv),
                EXIT_OK,
            ))
        }
        Command::Superfluous { pattern } => {
            let first = enclosed_diagonals(&pattern).into_iter().next();
            let text = match &first {
                None => "yes\n".to_string(),
                Some(d) => format!("no: enclosed diagonal {d}\n"),
            };
            let obj = json!({
                "mesh_pattern": pattern.to_text(),
                "superfluous": first.is_none(),
                "enclosed_diagonal": first.as_ref().map(|d| d.to_string()),
            });
            let csv = vec![vec![
                pattern.to_text(),
                first.is_none().to_string(),
                first.as_ref().map(|d| d.to_string()).unwrap_or_default(),
            ]];
            Ok((
                Output::new(text, vec![obj], &["mesh_pattern", "superfluous", "enclosed_diagonal"], csv),
                yes_no(first.is_none()),
            ))
        }
        Command::Supmesh { perm, oracle } => {
            let report = sup_mesh_ie(&perm)?;
            if oracle {
                cross_check(&report)?;
            }
            let text = format!("{}\n", report.sup_mesh);
            let mut obj = report_json(&report);
            if oracle {
                obj["direct_agrees"] = Value::Bool(true);
            }
            Ok((
                Output::new(text, vec![obj], TABLE_HEADER, vec![table_row(&report)]),
                EXIT_OK,
            ))
        }
        Command::Table { k, oracle } => {
            let reports = sup_mesh_table(k)?;
            if oracle {
                for r in &reports {
                    cross_check(r)?;
                }
            }
            let mut text = String::new();
            for r in &reports {
                writeln!(text, "{} {}", r.permutation.to_text(), r.sup_mesh).unwrap();
            }
            let objs = reports.iter().map(report_json).collect();
            let rows = reports.iter().map(table_row).collect();
            Ok((Output::new(text, objs, TABLE_HEADER, rows), EXIT_OK))
        }
        Command::Extremal { k } => {
            let r = extremal_permutations(k)?;
            let names = |ps: &[Permutation]| ps.iter().map(|p| p.to_text()).collect::<Vec<_>>();
            let mut text = String::new();
            writeln!(text, "min {} {}", r.min_value, names(&r.minimizers).join(" ")).unwrap();
            writeln!(text, "max {} {}", r.max_value, names(&r.maximizers).join(" ")).unwrap();
            writeln!(text, "max realized {}", r.max_realized).unwrap();
            writeln!(text, "truncated alternating sum {}", r.printed_max_sum).unwrap();
            let extreme = |e: &Option<meshpat::enumeration::TableExtreme>| {
                e.as_ref().map(|e| json!({ "value": big(&e.value), "permutations": names(&e.permutations) }))
            };
            for (label, e) in [("table min", &r.table_min), ("table max", &r.table_max)] {
                if let Some(e) = e {
                    writeln!(text, "{label} {} {}", e.value, names(&e.permutations).join(" ")).unwrap();
                }
            }
            let obj = json!({
                "k": r.k,
                "min_value": big(&r.min_value),
                "minimizers": names(&r.minimizers),
                "max_value": big(&r.max_value),
                "maximizers": names(&r.maximizers),
                "max_realized": r.max_realized,
                "truncated_alternating_sum": big(&r.printed_max_sum),
                "table_min": extreme(&r.table_min),
                "table_max": extreme(&r.table_max),
            });
            let csv = vec![
                vec!["min".into(), r.min_value.to_string(), names(&r.minimizers).join(" ")],
                vec!["max".into(), r.max_value.to_string(), names(&r.maximizers).join(" ")],
            ];
            Ok((Output::new(text, vec![obj], &["extreme", "value", "permutations"], csv), EXIT_OK))
        }
        Command::Verify { pattern, nmax } => {
            let n_max = nmax.unwrap_or(pattern.k() + 2);
            let report = verify_coincidence(&pattern, n_max)?;
            let text = match &report.witness {
                None => format!("coincident up to n={n_max}\n"),
                Some(w) => format!("witness {}\n", w.to_text()),
            };
            let obj = json!({
                "mesh_pattern": report.mesh_pattern.to_text(),
                "n_max": report.n_max,
                "per_length": report.per_length,
                "verdict": report.verdict,
                "witness": report.witness.as_ref().map(|w| w.to_text()),
            });
            let csv = report
                .per_length
                .iter()
                .map(|c| vec![c.n.to_string(), c.av_classical.to_string(), c.av_mesh.to_string()])
                .collect();
            Ok((
                Output::new(text, vec![obj], &["n", "av_classical", "av_mesh"], csv),
                yes_no(report.is_coincident()),
            ))
        }
        Command::Witness { perm, diagonal } => {
            let w = witness(&perm, &diagonal)?;
            let obj = json!({
                "pattern": perm.to_text(),
                "diagonal": diagonal.to_string(),
                "witness": w.to_text(),
            });
            let csv = vec![vec![perm.to_text(), diagonal.to_string(), w.to_text()]];
            Ok((
                Output::new(format!("{}\n", w.to_text()), vec![obj], &["pattern", "diagonal", "witness"], csv),
                EXIT_OK,
            ))
        }
        Command::Repair {
            host,
            pattern,
            occurrence,
            full,
        } => {
            let path = if full {
                repair_path(&host, &pattern, &occurrence)?
            } else {
                let start = meshpat::violations(&host, &occurrence, pattern.mesh())?;
                let next = repair_occurrence(&host, &pattern, &occurrence)?;
                let v = meshpat::violations(&host, &next, pattern.mesh())?;
                vec![(occurrence.clone(), start), (next, v)]
            };
            let steps = &path[1..];
            let mut text = String::new();
            for (o, v) in steps {
                writeln!(text, "{o} {v}").unwrap();
            }
            let obj = json!({
                "host": host.to_text(),
                "mesh_pattern": pattern.to_text(),
                "start": occ_json(&path[0].0),
                "start_violations": path[0].1,
                "steps": steps
                    .iter()
                    .map(|(o, v)| json!({ "occurrence": occ_json(o), "violations": v }))
                    .collect::<Vec<_>>(),
            });
            let csv = path
                .iter()
                .enumerate()
                .map(|(i, (o, v))| vec![i.to_string(), o.to_string(), v.to_string()])
                .collect();
            Ok((Output::new(text, vec![obj], &["step", "occurrence", "violations"], csv), EXIT_OK))
        }
    }
}

const TABLE_HEADER: &[&str] = &["perm", "k", "universe", "singletons", "candidates", "sup_mesh", "non_superfluous"];

fn table_row(r: &SupMeshReport) -> Vec<String> {
    vec![
        r.permutation.to_text(),
        r.k().to_string(),
        r.universe_size.to_string(),
        r.singleton_count.to_string(),
        r.multi_candidate_count.to_string(),
        r.sup_mesh.to_string(),
        r.non_superfluous.to_string(),
    ]
}

fn report_json(r: &SupMeshReport) -> Value {
    json!({
        "perm": r.permutation.to_text(),
        "k": r.k(),
        "universe": r.universe_size,
        "singletons": r.singleton_count,
        "candidates": r.multi_candidate_count,
        "sup_mesh": big(&r.sup_mesh),
        "non_superfluous": big(&r.non_superfluous),
    })
}

fn cross_check(r: &SupMeshReport) -> Result<(), Failure> {
    let direct = sup_mesh_direct(&r.permutation)?;
    if direct != r.sup_mesh {
        return Err(Error::TheoremViolation(format!(
            "{}: inclusion-exclusion gives {} but enumeration gives {direct}",
            r.permutation, r.sup_mesh
        ))
        .into());
    }
    Ok(())
}
