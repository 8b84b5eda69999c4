//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests with in-memory writers.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::geometry::{passes, ScanWindow};
use crate::report;
use crate::scenario::{assess, sweep_sic_with_threads, Scenario, SicRange};
use crate::usecases::{catalog, lookup, UseCase, UseCaseId};

/// Environment variable holding the sweep worker count; 0 or unset means automatic.
pub const THREADS_ENV: &str = "FDSAT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "fdsat",
    version,
    about = "In-band full-duplex assessment for LEO satellite links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare FD against FDD for one scenario.
    Assess {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario SIC, dB.
        #[arg(long)]
        sic: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Evaluate a grid of SIC values. Writes CSV to stdout unless --csv or --svg is given.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// start:stop:step in dB, inclusive.
        #[arg(long = "sic-range")]
        sic_range: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads, 0 for automatic. Overrides FDSAT_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List passes over each node of the scenario link.
    Visibility {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "window-s")]
        window_s: f64,
        #[arg(long = "step-s", default_value_t = 10.0)]
        step_s: f64,
        #[arg(long)]
        json: bool,
    },
    /// Show the use-case catalog or one entry.
    Catalog {
        id: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Re-plot a sweep CSV as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn env_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::validation(
                THREADS_ENV,
                format!("expected a non-negative integer, got `{v}`"),
            )
        }),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Assess {
            scenario,
            sic,
            format,
        } => {
            let mut s = Scenario::load(&scenario)?;
            if let Some(sic) = sic {
                s = s.with_sic(sic);
            }
            let r = assess(&s)?;
            let text = match format {
                Format::Table => report::assessment_table(&r),
                Format::Json => report::assessment_json(&s, &r),
                Format::Csv => report::assessment_csv(&r),
            };
            emit(out, &text)
        }
        Command::Sweep {
            scenario,
            sic_range,
            csv,
            svg,
            threads,
        } => {
            let range: SicRange = sic_range.parse()?;
            let s = Scenario::load(&scenario)?;
            let threads = match threads {
                Some(t) => t,
                None => env_threads()?,
            };
            let sweep = sweep_sic_with_threads(&s, &range.values(), threads)?;
            let rows = report::sweep_rows(&sweep);
            let csv_text = report::rows_csv(&rows);
            if csv.is_none() && svg.is_none() {
                return emit(out, &csv_text);
            }
            if let Some(p) = csv {
                write_file(&p, &csv_text)?;
            }
            if let Some(p) = svg {
                write_file(&p, &report::gain_svg(&rows))?;
            }
            Ok(())
        }
        Command::Visibility {
            scenario,
            window_s,
            step_s,
            json,
        } => {
            let s = Scenario::load(&scenario)?;
            let start = s.constellation.epoch_s.unwrap_or(0.0);
            let window = ScanWindow::new(start, window_s, step_s)?;
            let spec = s.constellation_spec();
            let min_el = s.min_elevation_deg();
            let mut all = serde_json::Map::new();
            let mut text = String::new();
            for (name, pos) in s.observers() {
                let list = passes(&spec, &pos, &window, min_el)?;
                if json {
                    all.insert(
                        name.to_string(),
                        report::round_floats(
                            serde_json::to_value(&list).expect("passes serialize"),
                        ),
                    );
                } else {
                    text.push_str(&format!(
                        "{name}: {} pass(es) above {min_el} deg\n",
                        list.len()
                    ));
                    text.push_str(&report::passes_table(&list));
                    text.push('\n');
                }
            }
            if json {
                let mut t = serde_json::to_string_pretty(&serde_json::Value::Object(all))
                    .expect("JSON serializes");
                t.push('\n');
                emit(out, &t)
            } else {
                emit(out, &text)
            }
        }
        Command::Catalog { id, json } => {
            let entries: Vec<&UseCase> = match id {
                Some(id) => vec![lookup(id.parse::<UseCaseId>()?)],
                None => catalog().iter().collect(),
            };
            if json {
                emit(out, &report::catalog_json(&entries))
            } else {
                emit(out, &catalog_table(&entries))
            }
        }
        Command::Plot { csv, svg } => {
            let rows = report::read_csv(&read_file(&csv)?)?;
            write_file(&svg, &report::gain_svg(&rows))
        }
    }
}

fn catalog_table(entries: &[&UseCase]) -> String {
    let mut s = String::new();
    for u in entries {
        let bands: Vec<&str> = u.bands.iter().map(|b| b.as_str()).collect();
        s.push_str(&format!(
            "{:<7} {:<14} {}\n",
            u.id.as_str(),
            u.priority_tier.to_string(),
            u.name
        ));
        s.push_str(&format!("        bands: {}\n", bands.join(", ")));
        s.push_str(&format!("        application: {}\n", u.application));
        for a in u.advantages {
            s.push_str(&format!("        + {a}\n"));
        }
    }
    s
}
