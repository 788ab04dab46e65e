use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use wlmap_core::matcher::{self, MatchError, ModelTable};
use wlmap_core::regression::{self, RegressionError};
use wlmap_core::trace_io::{
    self, format_number, parse_observations, render_matrix, ObservationTable,
    TraceError,
};
use wlmap_core::{CloudWorkload, Dataset, RegressionModel, ResourceName};

use crate::{AllocateArgs, FitArgs, ReplayArgs, ResidualsArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, malformed inputs.
    Usage(String),
    /// Well-formed input the model cannot satisfy.
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;
type Pair = (ResourceName, CloudWorkload);

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ObservationTable> {
    let bytes = read(path)?;
    parse_observations(&bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_pair(raw: &str) -> Result<Pair> {
    let (r, w) = raw
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("pair {raw:?} must be <resource>:<workload>")))?;
    let r = r.parse().map_err(|e| CliError::Usage(format!("pair {raw:?}: {e}")))?;
    let w = w.parse().map_err(|e| CliError::Usage(format!("pair {raw:?}: {e}")))?;
    Ok((r, w))
}

fn parse_list<T>(raw: &str, what: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Ord + Clone,
    T::Err: fmt::Display,
{
    let items: Vec<T> = raw
        .split(',')
        .map(|s| s.parse().map_err(|e| CliError::Usage(format!("{what} list: {e}"))))
        .collect::<Result<_>>()?;
    let mut sorted = items.clone();
    sorted.sort();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(CliError::Usage(format!("{what} list contains duplicates")));
    }
    Ok(items)
}

fn pair_label((r, w): &Pair) -> String {
    format!("{r}:{w}")
}

fn dataset<'a>(table: &'a ObservationTable, pair: &Pair) -> Result<&'a Dataset> {
    table
        .get(pair)
        .ok_or_else(|| CliError::Domain(format!("unknown pair {}", pair_label(pair))))
}

fn fit_pair(data: &Dataset, pair: &Pair) -> Result<RegressionModel> {
    regression::fit(data).map_err(|e| {
        let label = pair_label(pair);
        CliError::Domain(match e {
            RegressionError::SingularDesign => format!("singular design for {label}"),
            RegressionError::InsufficientData { n } => {
                format!("insufficient data for {label}: need at least 2 observations, got {n}")
            }
            other => format!("{label}: {other}"),
        })
    })
}

pub fn fit(args: &FitArgs, out: &mut String) -> Result<()> {
    let table = load(&args.input)?;
    let pairs: Vec<Pair> = match &args.pair {
        Some(raw) => vec![parse_pair(raw)?],
        // BTreeMap keys are already in (resource, workload) order
        None => table.keys().cloned().collect(),
    };
    let num = |x: f64| format_number(x, args.output.precision);

    let mut body = String::from("resource,workload,mu0_hat,mu1_hat,ssr,r2,n\n");
    for pair in &pairs {
        let data = dataset(&table, pair)?;
        let model = fit_pair(data, pair)?;
        let r2 = match regression::goodness_of_fit(&model, data) {
            Ok(r2) => num(r2),
            Err(_) => String::new(),
        };
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{}",
            pair.0,
            pair.1,
            num(model.mu0_hat),
            num(model.mu1_hat),
            num(model.ssr),
            r2,
            model.n
        );
    }
    out.push_str(&body);
    Ok(())
}

pub fn residuals(args: &ResidualsArgs, out: &mut String) -> Result<()> {
    let table = load(&args.input)?;
    let pair = parse_pair(&args.pair)?;
    let data = dataset(&table, &pair)?;
    let model = fit_pair(data, &pair)?;
    let num = |x: f64| format_number(x, args.output.precision);

    out.push_str("a,w,r,fitted,residual\n");
    let residuals = regression::residuals(&model, data);
    for (a, (obs, c)) in data.observations().iter().zip(residuals).enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            a + 1,
            num(obs.w),
            num(obs.r),
            num(model.predict(obs.w)),
            num(c)
        );
    }
    Ok(())
}

pub fn allocate(args: &AllocateArgs, out: &mut String) -> Result<()> {
    if !args.at.is_finite() {
        return Err(CliError::Usage("--at must be finite".into()));
    }
    let resources: Vec<ResourceName> = parse_list(&args.resources, "resource")?;
    let workloads: Vec<CloudWorkload> = parse_list(&args.workloads, "workload")?;
    let table = load(&args.input)?;

    let mut models = ModelTable::new();
    for r in &resources {
        for w in &workloads {
            let pair = (r.clone(), w.clone());
            let Some(data) = table.get(&pair) else {
                return Err(CliError::Domain(format!("no fitted model for {}", pair_label(&pair))));
            };
            let model = fit_pair(data, &pair)?;
            models.insert(pair, model);
        }
    }

    let domain = |e: MatchError| CliError::Domain(e.to_string());
    let costs = matcher::build_cost_matrix(&models, &resources, &workloads, args.at).map_err(domain)?;
    let assignment = matcher::assign(&costs).map_err(domain)?;
    let total = assignment.total_cost(&costs).map_err(domain)?;
    let state = matcher::matrix_to_state(&assignment);
    let display = matcher::state_to_matrix(&state, &resources, &workloads).map_err(domain)?;

    out.push_str(&render_matrix(&display));
    let _ = writeln!(out, "total cost: {}", format_number(total, args.output.precision));

    if let Some(path) = &args.snapshot {
        write(path, &trace_io::write_state(&state))?;
    }
    Ok(())
}

pub fn replay(args: &ReplayArgs, out: &mut String) -> Result<()> {
    let bytes = read(&args.script)?;
    let commands = trace_io::parse_script(&bytes)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.script.display())))?;
    match trace_io::run_replay(&commands) {
        Ok(run) => {
            for line in &run.lines {
                let _ = writeln!(out, "{line}");
            }
            if let Some(path) = &args.snapshot_out {
                write(path, &trace_io::write_state(&run.state))?;
            }
            Ok(())
        }
        Err(TraceError::ExpectationFailed {
            line,
            expected,
            actual,
            completed,
        }) => {
            for l in &completed {
                let _ = writeln!(out, "{l}");
            }
            Err(CliError::Domain(format!(
                "expectation failed at line {line}: expected {expected}, got {actual}"
            )))
        }
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parsing() {
        let (r, w) = parse_pair("R1:W2").unwrap();
        assert_eq!((r.as_str(), w.as_str()), ("R1", "W2"));
        assert!(matches!(parse_pair("R1W2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_pair(":W2"), Err(CliError::Usage(_))));
    }

    #[test]
    fn list_parsing() {
        let l: Vec<ResourceName> = parse_list("R2,R1", "resource").unwrap();
        assert_eq!(l.len(), 2);
        assert!(parse_list::<ResourceName>("R1,R1", "resource").is_err());
        assert!(parse_list::<ResourceName>("R1,", "resource").is_err());
        assert!(parse_list::<ResourceName>("", "resource").is_err());
    }
}
