//! Command-line front end for `cablefloer`.

pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use cablefloer::cabling::{
    cable_alexander, cable_record, hfk_cable_stabilized, tau_cable_interval, CableParams, CablingError,
    FilteredHomologyProfile,
};
use cablefloer::filtration::{staircase_complex, ComplexError, FilteredComplex, StaircaseRule};
use cablefloer::knotdb::{
    builtin_knots, load_knot_table, lookup_knot, validate_record, KnotDbError, KnotRecord,
};
use cablefloer::obstructions::{obstruction_report, ObstructionError};
use cablefloer::surgery::{
    cable_lspace_certificate, cable_surgery_decomposition, surgery_rank_lspace_knot, Slope, SurgeryError,
};
use cablefloer::verify::{run_suite, Suite, VerifyConfig};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use output::{
    AlexanderOutput, HfkOutput, HfkSource, InvalidRecord, KnotListOutput, Payload, SurgeryOutput, TauOutput,
    ValidateOutput, VerifyOutput,
};

#[derive(Debug, Parser)]
#[command(name = "cablefloer", version, about = "Heegaard Floer invariants of cable knots")]
pub struct Cli {
    /// Knot table (JSON) consulted before the builtin atlas.
    #[arg(long, global = true, value_name = "FILE")]
    pub table: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or validate knot records.
    Knots {
        #[command(subcommand)]
        action: KnotsAction,
    },
    /// Alexander polynomial of a knot or of its (iterated) cable.
    Alexander {
        #[arg(long)]
        knot: String,
        /// Cable parameters p,q.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: Option<(i64, i64)>,
        /// Several cablings applied left to right: "p1,q1;p2,q2".
        #[arg(long, allow_hyphen_values = true)]
        iterate: Option<String>,
    },
    /// tau of a knot, or bounds for tau of its (p, pn+1) cable.
    Tau {
        #[arg(long)]
        knot: String,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: Option<(i64, i64)>,
    },
    /// Knot Floer homology of an L-space knot, a certified cable, or a
    /// stabilization window.
    Hfk {
        #[arg(long)]
        knot: Option<String>,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: Option<(i64, i64)>,
        /// Predict the cable's groups for j = 0..=W from the companion.
        #[arg(long, value_name = "W")]
        window: Option<i64>,
        /// Filtered complex of the knot (or companion) as JSON.
        #[arg(long, value_name = "FILE")]
        complex: Option<PathBuf>,
    },
    /// Rank of HF-hat of a surgery on an L-space knot or a certified cable.
    Surgery {
        #[arg(long)]
        knot: String,
        /// Slope q/p.
        #[arg(long, allow_hyphen_values = true)]
        slope: Slope,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: Option<(i64, i64)>,
    },
    /// Obstructions for the (p, pn+1) cable.
    Obstruct {
        #[arg(long)]
        knot: String,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        cable: (i64, i64),
    },
    /// Gradings of the exterior points of the cabling diagram.
    Gradings {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g: i64,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, hide = true, value_enum, default_value_t = RuleArg::Standard)]
        staircase_rule: RuleArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum KnotsAction {
    List,
    /// Validate a knot table; defaults to --table.
    Validate {
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Standard,
    SwappedParity,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("verification failed")]
    VerifyFailed(Box<Payload>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Refused(_) => 3,
            CliError::VerifyFailed(_) => 4,
        }
    }
}

impl From<KnotDbError> for CliError {
    fn from(e: KnotDbError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CablingError> for CliError {
    fn from(e: CablingError) -> Self {
        match e {
            CablingError::InvalidParameters(_) | CablingError::Laurent(_) | CablingError::Complex(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Refused(e.to_string()),
        }
    }
}

impl From<SurgeryError> for CliError {
    fn from(e: SurgeryError) -> Self {
        match e {
            SurgeryError::InvalidSlope(_) | SurgeryError::InvalidParameters(_) => {
                CliError::Input(e.to_string())
            }
            SurgeryError::Cabling(c) => c.into(),
            _ => CliError::Refused(e.to_string()),
        }
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::InvalidParameters(_) => CliError::Input(e.to_string()),
            ObstructionError::Cabling(c) => c.into(),
            _ => CliError::Refused(e.to_string()),
        }
    }
}

pub fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected p,q; got {s:?}"))?;
    let p = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
    let q = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
    Ok((p, q))
}

fn parse_iterate(s: &str) -> Result<Vec<(i64, i64)>, CliError> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| parse_pair(part).map_err(CliError::Input))
        .collect()
}

/// Table records first, then any builtin not shadowed by one.
fn load_atlas(table: Option<&Path>) -> Result<Vec<KnotRecord>, CliError> {
    let mut knots = match table {
        Some(path) => {
            let file =
                fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            load_knot_table(file)?
        }
        None => Vec::new(),
    };
    for b in builtin_knots() {
        if !knots.iter().any(|k| k.name == b.name) {
            knots.push(b);
        }
    }
    Ok(knots)
}

fn cable_n(cp: &CableParams) -> Result<i64, CliError> {
    cp.n().ok_or_else(|| {
        CliError::Refused(format!("{cp} is not of the form (p, pn+1); tau bounds and stabilization need it"))
    })
}

fn read_complex(path: &Path) -> Result<FilteredComplex, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(FilteredComplex::from_json_str(&text)?)
}

pub fn run(cli: &Cli) -> Result<Payload, CliError> {
    let atlas = load_atlas(cli.table.as_deref())?;
    let find = |name: &str| -> Result<KnotRecord, CliError> { Ok(lookup_knot(name, Some(&atlas))?) };

    match &cli.command {
        Command::Knots { action: KnotsAction::List } => {
            Ok(Payload::KnotList(KnotListOutput { knots: atlas }))
        }
        Command::Knots { action: KnotsAction::Validate { file } } => {
            let path = file
                .as_deref()
                .or(cli.table.as_deref())
                .ok_or_else(|| CliError::Input("no file given and no --table".into()))?;
            validate_file(path)
        }
        Command::Alexander { knot, cable, iterate } => {
            let k = find(knot)?;
            let mut steps: Vec<(i64, i64)> = cable.iter().copied().collect();
            if let Some(list) = iterate {
                steps.extend(parse_iterate(list)?);
            }
            let mut current = k.clone();
            for &(p, q) in &steps {
                current.alexander = cable_alexander(&current, &CableParams::new(p, q)?)?;
            }
            Ok(Payload::Alexander(AlexanderOutput {
                knot: k.name,
                cables: steps.iter().map(|&(p, q)| [p, q]).collect(),
                rendered: current.alexander.to_string(),
                alexander: current.alexander,
            }))
        }
        Command::Tau { knot, cable } => {
            let k = find(knot)?;
            match cable {
                None => Ok(Payload::Tau(TauOutput { knot: k.name, cable: None, tau: k.tau, interval: None })),
                Some((p, q)) => {
                    let cp = CableParams::new(*p, *q)?;
                    let iv = tau_cable_interval(&k, *p, cable_n(&cp)?)?;
                    Ok(Payload::Tau(TauOutput {
                        knot: k.name,
                        cable: Some([*p, *q]),
                        tau: iv.exact,
                        interval: Some(iv),
                    }))
                }
            }
        }
        Command::Hfk { knot, cable, window, complex } => {
            hfk(&find, knot.as_deref(), *cable, *window, complex.as_deref())
        }
        Command::Surgery { knot, slope, cable } => {
            let k = find(knot)?;
            let (target, decomposition) = match cable {
                None => (k, None),
                Some((p, q)) => {
                    let cp = CableParams::new(*p, *q)?;
                    let d = cable_surgery_decomposition(&k, &cp)?;
                    (cable_record(&k, &cp)?, Some(d))
                }
            };
            let report = surgery_rank_lspace_knot(&target, slope.den(), slope.num())?;
            Ok(Payload::Surgery(SurgeryOutput { report, decomposition }))
        }
        Command::Obstruct { knot, cable: (p, q) } => {
            let k = find(knot)?;
            let cp = CableParams::new(*p, *q)?;
            let n = cp.n().ok_or_else(|| CliError::Input(format!("{cp} is not of the form (p, pn+1)")))?;
            Ok(Payload::Obstruct(obstruction_report(&k, *p, n)?))
        }
        Command::Gradings { p, n, g } => {
            Ok(Payload::Gradings(cablefloer::cabling::exterior_grading_table(*p, *n, *g)?))
        }
        Command::Verify { suite, staircase_rule } => {
            let config = VerifyConfig {
                staircase_rule: match staircase_rule {
                    RuleArg::Standard => StaircaseRule::Standard,
                    RuleArg::SwappedParity => StaircaseRule::SwappedParity,
                },
            };
            let outcomes = run_suite(*suite, &config);
            let passed = outcomes.iter().all(|o| o.passed);
            let payload = Payload::Verify(VerifyOutput { suite: *suite, passed, outcomes });
            if passed {
                Ok(payload)
            } else {
                Err(CliError::VerifyFailed(Box::new(payload)))
            }
        }
    }
}

fn validate_file(path: &Path) -> Result<Payload, CliError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct RawTable {
        knots: Vec<KnotRecord>,
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let raw: RawTable =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let invalid: Vec<InvalidRecord> = raw
        .knots
        .iter()
        .filter_map(|k| {
            let v = validate_record(k);
            (!v.is_empty()).then(|| InvalidRecord {
                name: k.name.clone(),
                violations: v.iter().map(ToString::to_string).collect(),
            })
        })
        .collect();
    let out = ValidateOutput { source: path.display().to_string(), records: raw.knots.len(), invalid };
    if out.invalid.is_empty() {
        Ok(Payload::Validate(out))
    } else {
        let names: Vec<&str> = out.invalid.iter().map(|r| r.name.as_str()).collect();
        let details: Vec<String> =
            out.invalid.iter().map(|r| format!("{}: {}", r.name, r.violations.join("; "))).collect();
        Err(CliError::Input(format!(
            "{} invalid record(s) [{}]\n{}",
            names.len(),
            names.join(", "),
            details.join("\n")
        )))
    }
}

fn hfk(
    find: &dyn Fn(&str) -> Result<KnotRecord, CliError>,
    knot: Option<&str>,
    cable: Option<(i64, i64)>,
    window: Option<i64>,
    complex: Option<&Path>,
) -> Result<Payload, CliError> {
    let k = knot.map(find).transpose()?;
    let name = k.as_ref().map(|k| k.name.clone());

    // the knot's own complex: supplied, or the staircase of an L-space knot
    let own = |k: Option<&KnotRecord>| -> Result<(FilteredComplex, HfkSource), CliError> {
        if let Some(path) = complex {
            return Ok((read_complex(path)?, HfkSource::ComplexFile));
        }
        match k {
            Some(k) if k.lspace_knot => Ok((staircase_complex(&k.alexander)?, HfkSource::Staircase)),
            Some(k) => Err(CliError::Refused(format!(
                "{} is not an L-space knot; supply its complex with --complex",
                k.name
            ))),
            None => Err(CliError::Input("--knot or --complex is required".into())),
        }
    };

    let Some((p, q)) = cable else {
        let (c, source) = own(k.as_ref())?;
        return Ok(Payload::Hfk(HfkOutput {
            knot: name,
            cable: None,
            source,
            tau: Some(c.tau()?),
            lowest_asserted: None,
            hfk: c.associated_graded_hfk(),
        }));
    };
    let k = k.ok_or_else(|| CliError::Input("--cable needs --knot".into()))?;
    let cp = CableParams::new(p, q)?;
    if cable_lspace_certificate(&k, &cp).is_certified() && window.is_none() {
        let c = staircase_complex(&cable_alexander(&k, &cp)?)?;
        return Ok(Payload::Hfk(HfkOutput {
            knot: name,
            cable: Some([p, q]),
            source: HfkSource::Staircase,
            tau: Some(c.tau()?),
            lowest_asserted: None,
            hfk: c.associated_graded_hfk(),
        }));
    }
    let w = window.ok_or_else(|| {
        CliError::Refused(format!(
            "the {cp} cable of {} is not L-space certified; pass --window to get the stabilized groups",
            k.name
        ))
    })?;
    let n = cable_n(&cp)?;
    if !(0..n).contains(&w) {
        return Err(CablingError::WindowViolation { j: w, min: 0, max: n - 1 }.into());
    }
    let (c, _) = own(Some(&k))?;
    let profile = FilteredHomologyProfile::from_complex(&c, k.genus)?;
    let s = hfk_cable_stabilized(&profile, p, n, w)?;
    Ok(Payload::Hfk(HfkOutput {
        knot: name,
        cable: Some([p, q]),
        source: HfkSource::Stabilization,
        tau: None,
        lowest_asserted: Some(s.lowest_asserted),
        hfk: s.table,
    }))
}
