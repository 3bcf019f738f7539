//! `modvol`: exact volumes, CM degrees and cross-formula checks from the shell.
//!
//! Exit codes: 0 success, 1 malformed input or domain error, 2 size beyond
//! the configured caps, 3 the two volume formulas disagree.

mod records;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moduli_volume::lab::{anomaly_test_plan, continuity_probe_along, Direction, TrialPlan};
use moduli_volume::rational::{format_rational, int, parse_list, parse_rational};
use moduli_volume::{
    cm_multidegree, cy_reduced_volume, hassett_case, localization_volume, mcmullen_volume,
    wall_report, Error, Polarization, Rational, VolumeValue, WeightVector,
};
use serde::Serialize;

use records::{
    AnomalyReportRecord, CMDegreeRecord, ClassifyRecord, ContinuityRecord, ContinuityRowRecord,
    VolumeRecord,
};

#[derive(Parser)]
#[command(
    name = "modvol",
    version,
    about = "Exact volumes of moduli of weighted points on P^1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of the moduli space for one weight vector
    Volume {
        /// Comma-separated weights, e.g. 1/2,1/2,1/2,1/2
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, value_enum, default_value_t = Formula::Both)]
        formula: Formula,
        #[arg(long)]
        json: bool,
    },
    /// Geometry class, walls and (for four points) the collision case
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        json: bool,
    },
    /// CM line bundle degrees of a weighted hyperplane family
    CmDegree {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// anti-minus-div, anti or log-canonical
        #[arg(long)]
        polarization: Polarization,
        /// Report only this 1-based hyperplane
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Random Calabi-Yau trials comparing both formulas; prints JSON
    AnomalyTest {
        /// Range such as 4..7 (inclusive) or a list such as 4,5,8
        #[arg(long)]
        n: String,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (all cores by default)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Localization volume on a path leaving a Calabi-Yau point
    Continuity {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        epsilons: String,
        /// `uniform` or a comma-separated displacement vector
        #[arg(long, default_value = "uniform", allow_hyphen_values = true)]
        direction: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Volumes on the slice d1 = a, d2 = b, remaining weights equal, total 2
    Scan {
        #[arg(long)]
        n: usize,
        /// Grid step for a and b
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = Formula::Mcmullen)]
        formula: Formula,
        /// CSV destination (standard output when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Formula {
    Mcmullen,
    Localization,
    CyReduced,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

const ANOMALY: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::UnsupportedSize { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Volume {
            weights,
            formula,
            json,
        } => volume(&weights, formula, json),
        Command::Classify { weights, json } => classify(&weights, json),
        Command::CmDegree {
            dim,
            weights,
            polarization,
            index,
            json,
        } => cm_degree(dim, &weights, polarization, index, json),
        Command::AnomalyTest {
            n,
            trials,
            seed,
            jobs,
        } => anomaly(&n, trials, seed, jobs),
        Command::Continuity {
            weights,
            epsilons,
            direction,
            format,
        } => continuity(&weights, &epsilons, &direction, format),
        Command::Scan {
            n,
            grid,
            formula,
            output,
        } => scan(n, &grid, formula, output),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn evaluate(w: &WeightVector, formula: Formula) -> Result<Vec<(&'static str, VolumeValue)>, Error> {
    Ok(match formula {
        Formula::Mcmullen => vec![("mcmullen", mcmullen_volume(w)?)],
        Formula::Localization => vec![("localization", localization_volume(w)?)],
        Formula::CyReduced => vec![("cy-reduced", cy_reduced_volume(w)?)],
        Formula::Both => vec![
            ("mcmullen", mcmullen_volume(w)?),
            ("localization", localization_volume(w)?),
        ],
    })
}

fn volume(weights: &str, formula: Formula, json: bool) -> Outcome {
    let w = WeightVector::parse(weights)?;
    let on_wall = wall_report(&w)?.on_wall;
    let values = evaluate(&w, formula)?;
    let records: Vec<VolumeRecord> = values
        .iter()
        .map(|(tag, v)| VolumeRecord::new(&w, tag, v, on_wall))
        .collect();
    if json {
        print_json(&records)?;
    } else {
        for (r, (_, v)) in records.iter().zip(&values) {
            println!("{:<13} {}  ~ {}", r.formula, v, r.approx);
        }
    }
    if values.windows(2).any(|p| p[0].1 != p[1].1) {
        eprintln!("anomaly: formulas disagree for {w}");
        return Ok(ExitCode::from(ANOMALY));
    }
    Ok(ExitCode::SUCCESS)
}

fn classify(weights: &str, json: bool) -> Outcome {
    let w = WeightVector::parse(weights)?;
    let walls = wall_report(&w)?;
    let case = if w.len() == 4 {
        Some(hassett_case(&w)?.as_str().to_string())
    } else {
        None
    };
    let record = ClassifyRecord::new(&w, &walls, case);
    if json {
        return print_json(&record).map(|_| ExitCode::SUCCESS);
    }
    let join = |v: &[Vec<usize>]| -> String {
        let parts: Vec<String> = v
            .iter()
            .map(|s| {
                let idx: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", idx.join(","))
            })
            .collect();
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join(" ")
        }
    };
    println!("weights            {w}");
    println!("total              {}", record.total);
    println!("geometry           {}", record.geometry);
    println!("quotient nonempty  {}", record.git_nonempty);
    println!("collision walls    {}", join(&record.hassett_walls));
    println!("chamber walls      {}", join(&record.localization_walls));
    if let Some(case) = &record.hassett_case {
        println!("collision case     {case}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cm_degree(
    dim: usize,
    weights: &str,
    polarization: Polarization,
    index: Option<usize>,
    json: bool,
) -> Outcome {
    let raw = parse_list(weights)?;
    let mut report = cm_multidegree(dim, &raw, polarization)?;
    if let Some(j) = index {
        report = report.restrict_to(j)?;
    }
    let record = CMDegreeRecord::new(&report, &raw);
    if json {
        return print_json(&record).map(|_| ExitCode::SUCCESS);
    }
    println!("polarization  {}", record.polarization);
    println!("geometry      {}", record.geometry);
    if let Some(v) = &record.fiber_volume {
        println!("fiber volume  {v}");
    }
    for d in &record.degrees {
        println!("r_{:<11} {}", d.index, d.degree);
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_n_values(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Input(format!("cannot parse {text:?} as a range or list of sizes"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

fn anomaly(n: &str, trials: usize, seed: u64, jobs: Option<usize>) -> Outcome {
    let plan: Vec<TrialPlan> = parse_n_values(n)?
        .into_iter()
        .map(|n| TrialPlan { n, trials })
        .collect();
    if jobs == Some(0) {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    let report = anomaly_test_plan(&plan, seed, jobs)?;
    print_json(&AnomalyReportRecord::from(&report))?;
    eprintln!("elapsed: {:.3?}", report.elapsed);
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(ANOMALY)
    })
}

fn continuity(weights: &str, epsilons: &str, direction: &str, format: Format) -> Outcome {
    let w = WeightVector::parse(weights)?;
    let epsilons = parse_list(epsilons)?;
    let direction = if direction.trim() == "uniform" {
        Direction::UniformScaling
    } else {
        Direction::Vector(parse_list(direction)?)
    };
    let table = continuity_probe_along(&w, &direction, &epsilons)?;
    let record = ContinuityRecord::from(&table);
    match format {
        Format::Json => print_json(&record)?,
        Format::Csv => {
            let mut out = csv::Writer::from_writer(io::stdout().lock());
            for row in &record.rows {
                out.serialize::<&ContinuityRowRecord>(row)?;
            }
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ScanRow<'a> {
    n: usize,
    weights: String,
    geometry: &'a str,
    formula: &'a str,
    coefficient: &'a str,
    pi_power: u32,
    on_wall: bool,
    approx: &'a str,
}

/// Grid points `(a, b)` with `a, b` positive multiples of `step` below 1 and
/// the remaining `n - 2` weights equal to `(2 - a - b) / (n - 2)` in `(0, 1)`.
fn slice_points(n: usize, step: &Rational) -> Result<Vec<WeightVector>, Failure> {
    if *step <= int(0) || *step >= int(1) {
        return Err(Failure::Input(format!("grid step {step} outside (0, 1)")));
    }
    if n < 3 {
        return Err(Error::DimensionTooSmall(n).into());
    }
    let mut values = Vec::new();
    let mut a = step.clone();
    while a < int(1) {
        values.push(a.clone());
        a += step;
    }
    let mut points = Vec::new();
    for a in &values {
        for b in &values {
            let rest = (int(2) - a - b) / int(n as i64 - 2);
            if rest <= int(0) || rest >= int(1) {
                continue;
            }
            let mut raw = vec![a.clone(), b.clone()];
            raw.resize(n, rest);
            points.push(WeightVector::new(raw)?);
        }
    }
    Ok(points)
}

fn scan(n: usize, grid: &str, formula: Formula, output: Option<PathBuf>) -> Outcome {
    let step = parse_rational(grid)?;
    let points = slice_points(n, &step)?;
    let sink: Box<dyn Write> = match output {
        Some(path) => Box::new(
            File::create(&path)
                .map_err(|e| Failure::Input(format!("cannot create {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = csv::Writer::from_writer(sink);
    let mut disagreements = 0usize;
    for w in &points {
        let on_wall = wall_report(w)?.on_wall;
        let values = evaluate(w, formula)?;
        if values.windows(2).any(|p| p[0].1 != p[1].1) {
            eprintln!("anomaly: formulas disagree for {w}");
            disagreements += 1;
        }
        for (tag, v) in &values {
            let r = VolumeRecord::new(w, tag, v, on_wall);
            out.serialize(ScanRow {
                n: r.n,
                weights: r.weights.join(" "),
                geometry: r.geometry.as_str(),
                formula: &r.formula,
                coefficient: &r.coefficient,
                pi_power: r.pi_power,
                on_wall: r.on_wall,
                approx: &r.approx,
            })?;
        }
    }
    out.flush()?;
    eprintln!(
        "{} grid points, step {}",
        points.len(),
        format_rational(&step)
    );
    Ok(if disagreements == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(ANOMALY)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use moduli_volume::rational::rat;

    #[test]
    fn size_lists() {
        assert_eq!(parse_n_values("4..7").ok(), Some(vec![4, 5, 6, 7]));
        assert_eq!(parse_n_values("4..=5").ok(), Some(vec![4, 5]));
        assert_eq!(parse_n_values("4,9").ok(), Some(vec![4, 9]));
        assert!(parse_n_values("7..4").is_err());
        assert!(parse_n_values("x").is_err());
    }

    #[test]
    fn slice_is_calabi_yau() {
        let points = slice_points(4, &rat(1, 4)).ok().unwrap();
        // a, b in {1/4, 1/2, 3/4}; rest (2 - a - b)/2 always in (0, 1)
        assert_eq!(points.len(), 9);
        assert!(points.iter().all(|w| w.total() == int(2)));
        assert!(slice_points(4, &rat(3, 2)).is_err());
    }

    #[test]
    fn volume_record_round_trips() {
        let w = WeightVector::parse("2/5,2/5,2/5,2/5,2/5").unwrap();
        let v = mcmullen_volume(&w).unwrap();
        let record = VolumeRecord::new(&w, "mcmullen", &v, false);
        let text = serde_json::to_string(&record).unwrap();
        let back: VolumeRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, record);
        let weights: Vec<Rational> = back
            .weights
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        assert_eq!(WeightVector::new(weights).unwrap(), w);
        assert_eq!(
            VolumeValue::new(parse_rational(&back.coefficient).unwrap(), back.pi_power),
            v
        );
    }
}
