//! The `offset-magic` command line.
//!
//! Exit codes: 0 success (or a magic square), 1 a verified square that is
//! not magic, 2 usage, parse and I/O errors.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{closed_form_row, instantiate, magic_constant, offset_grid, Order};
use crate::numeric::{parse_scalar, Scalar};
use crate::oracle::enumerate_3x3;
use crate::verify::{verify_magic, VerificationReport};

#[derive(Debug, Parser)]
#[command(
    name = "offset-magic",
    version,
    about = "Odd-order offset magic squares"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the square of the given order shifted by an offset.
    Generate {
        #[arg(long)]
        order: u64,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        offset: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Produce rows one at a time in O(order) memory.
        #[arg(long)]
        stream: bool,
    },
    /// Emit the symbolic offset grid, every cell written `N+k`.
    Table {
        #[arg(long)]
        order: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the line sum s(s²−1)/2 + s·N.
    Constant {
        #[arg(long)]
        order: u64,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        offset: String,
    },
    /// Check a CSV or JSON square and print a JSON report.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to json for `.json` files and csv otherwise.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Enumerate every 3×3 magic arrangement of nine values.
    Oracle {
        /// Nine comma-separated scalar literals.
        #[arg(long, allow_hyphen_values = true)]
        cells: String,
        /// List every square after the summary.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn usage(msg: impl ToString) -> Self {
        CliError::Usage(msg.to_string())
    }
}

/// Serialized square: every number is a scalar literal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDocument {
    pub order: usize,
    #[serde(default)]
    pub offset: Option<String>,
    pub cells: Vec<Vec<String>>,
    #[serde(default)]
    pub magic_constant: Option<String>,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate {
            order,
            offset,
            format,
            stream,
        } => cmd_generate(order, &offset, format, stream, out).map(|()| 0),
        Command::Table { order, format } => cmd_table(order, format, out).map(|()| 0),
        Command::Constant { order, offset } => cmd_constant(order, &offset, out).map(|()| 0),
        Command::Verify { input, format } => cmd_verify(&input, format, out),
        Command::Oracle { cells, full } => cmd_oracle(&cells, full, out).map(|()| 0),
    };
    let result = result.and_then(|code| out.flush().map(|()| code).map_err(CliError::from));
    match result {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn parse_order(order: u64) -> Result<Order, CliError> {
    Order::new(order).map_err(CliError::usage)
}

fn parse_offset(text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(CliError::usage)
}

/// Column width for text output: the widest of `N` and `N + s² − 1`.
///
/// Consecutive entries share the denominator and imaginary part of `N` and
/// only the real numerator moves, so no interior entry is wider than the
/// two extremes.
pub fn text_width(order: Order, offset: &Scalar) -> usize {
    let last = offset + &Scalar::from(order.cell_count() - 1);
    offset.to_string().len().max(last.to_string().len())
}

/// Writes a grid cell by cell in one of the three output formats.
struct Emitter<'w> {
    out: &'w mut dyn Write,
    format: Format,
    side: usize,
    width: usize,
    row: usize,
    col: usize,
}

impl<'w> Emitter<'w> {
    fn new(out: &'w mut dyn Write, format: Format, side: usize, width: usize) -> Self {
        Emitter {
            out,
            format,
            side,
            width,
            row: 0,
            col: 0,
        }
    }

    /// JSON preamble; each field is `(name, already-encoded value)`.
    fn begin(&mut self, fields: &[(&str, String)]) -> io::Result<()> {
        if self.format == Format::Json {
            self.out.write_all(b"{\n")?;
            for (name, value) in fields {
                writeln!(self.out, "  \"{name}\": {value},")?;
            }
            self.out.write_all(b"  \"cells\": [\n")?;
        }
        Ok(())
    }

    fn cell(&mut self, text: &str) -> io::Result<()> {
        let out = &mut *self.out;
        if self.col == 0 {
            if self.format == Format::Json {
                out.write_all(b"    [")?;
            }
        } else {
            out.write_all(match self.format {
                Format::Text => b" ",
                Format::Csv | Format::Json => b",",
            })?;
        }
        match self.format {
            Format::Text => {
                for _ in text.len()..self.width {
                    out.write_all(b" ")?;
                }
                out.write_all(text.as_bytes())?;
            }
            Format::Csv => out.write_all(text.as_bytes())?,
            Format::Json => {
                out.write_all(b"\"")?;
                out.write_all(text.as_bytes())?;
                out.write_all(b"\"")?;
            }
        }
        self.col += 1;
        if self.col == self.side {
            self.col = 0;
            self.row += 1;
            if self.format == Format::Json {
                out.write_all(if self.row == self.side {
                    b"]\n"
                } else {
                    b"],\n"
                })?;
            } else {
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    fn end(&mut self, text_footer: Option<&str>) -> io::Result<()> {
        match self.format {
            Format::Json => self.out.write_all(b"  ]\n}\n"),
            Format::Text => match text_footer {
                Some(footer) => writeln!(self.out, "{footer}"),
                None => Ok(()),
            },
            Format::Csv => Ok(()),
        }
    }
}

fn json_string(text: &str) -> String {
    serde_json::to_string(text).expect("strings always serialize")
}

pub fn cmd_generate(
    order: u64,
    offset: &str,
    format: Format,
    stream: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let order = parse_order(order)?;
    let offset = parse_offset(offset)?;
    let constant = magic_constant(order, &offset);
    let width = if format == Format::Text {
        text_width(order, &offset)
    } else {
        0
    };
    let mut emitter = Emitter::new(out, format, order.side(), width);
    emitter.begin(&[
        ("order", order.to_string()),
        ("offset", json_string(&offset.to_string())),
        ("magic_constant", json_string(&constant.to_string())),
    ])?;
    if stream {
        stream_cells(order, &offset, &mut emitter)?;
    } else {
        let square = instantiate(&offset_grid(order), &offset);
        for entry in square.entries() {
            emitter.cell(&entry.to_string())?;
        }
    }
    emitter.end(Some(&format!("constant = {constant}")))?;
    Ok(())
}

fn stream_cells(order: Order, offset: &Scalar, emitter: &mut Emitter<'_>) -> io::Result<()> {
    let mut row = Vec::with_capacity(order.side());
    let small_base = offset.as_integer().and_then(|n| i64::try_from(n).ok());
    let mut digits = itoa::Buffer::new();
    for i in 0..order.side() {
        closed_form_row(order, i, &mut row);
        match small_base {
            Some(base) => {
                for &k in &row {
                    emitter.cell(digits.format(i128::from(base) + i128::from(k)))?;
                }
            }
            None => {
                for &k in &row {
                    emitter.cell(&(offset + &Scalar::from(k)).to_string())?;
                }
            }
        }
    }
    Ok(())
}

pub fn cmd_table(order: u64, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let order = parse_order(order)?;
    let width = format!("N+{}", order.cell_count() - 1).len();
    let width = if format == Format::Text { width } else { 0 };
    let grid = offset_grid(order);
    let constant = format!("{}+{}N", order.offset_line_sum(), order);
    let mut emitter = Emitter::new(out, format, order.side(), width);
    emitter.begin(&[
        ("order", order.to_string()),
        ("symbol", json_string("N")),
        ("magic_constant", json_string(&constant)),
    ])?;
    for &k in grid.cells() {
        emitter.cell(&format!("N+{k}"))?;
    }
    emitter.end(None)?;
    Ok(())
}

pub fn cmd_constant(order: u64, offset: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let order = parse_order(order)?;
    let offset = parse_offset(offset)?;
    writeln!(out, "{}", magic_constant(order, &offset))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: VerificationReport,
    declared_offset: Option<Scalar>,
    /// Line sum implied by the declared offset.
    expected_constant: Option<Scalar>,
    offset_consistent: Option<bool>,
}

struct LoadedSquare {
    rows: Vec<Vec<Scalar>>,
    offset: Option<Scalar>,
}

/// `s(s²−1)/2 + s·n` for any side, odd or not.
fn line_sum_for_side(side: usize, n: &Scalar) -> Scalar {
    let s = BigInt::from(side);
    &Scalar::integer(&s * (&s * &s - 1) / 2) + &n.scale(&s)
}

fn load_csv(text: &str) -> Result<LoadedSquare, CliError> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(col, field)| {
                parse_scalar(field).map_err(|e| {
                    CliError::usage(format!("line {}, field {}: {e}", line_no + 1, col + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(LoadedSquare { rows, offset: None })
}

fn load_json(text: &str) -> Result<LoadedSquare, CliError> {
    let doc: SquareDocument = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("invalid document: {e}")))?;
    if doc.cells.len() != doc.order || doc.cells.iter().any(|r| r.len() != doc.order) {
        return Err(CliError::usage(format!(
            "cells do not form a {0}×{0} grid",
            doc.order
        )));
    }
    let parse = |field: &str, text: &str| {
        parse_scalar(text).map_err(|e| CliError::usage(format!("{field}: {e}")))
    };
    let rows = doc
        .cells
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(c, t)| parse(&format!("cell ({i}, {c})"), t))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let offset = doc
        .offset
        .as_deref()
        .map(|t| parse("offset", t))
        .transpose()?;
    let declared = doc
        .magic_constant
        .as_deref()
        .map(|t| parse("magic_constant", t))
        .transpose()?;
    if let (Some(n), Some(m)) = (&offset, &declared) {
        let expected = line_sum_for_side(doc.order, n);
        if expected != *m {
            return Err(CliError::usage(format!(
                "declared magic_constant {m} contradicts offset {n} (expected {expected})"
            )));
        }
    }
    Ok(LoadedSquare { rows, offset })
}

pub fn cmd_verify(
    input: &Path,
    format: Option<InputFormat>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", input.display())))?;
    let format = format.unwrap_or_else(|| match input.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
        _ => InputFormat::Csv,
    });
    let loaded = match format {
        InputFormat::Csv => load_csv(&text)?,
        InputFormat::Json => load_json(&text)?,
    };
    let report = verify_magic(&loaded.rows).map_err(CliError::usage)?;
    let expected_constant = loaded
        .offset
        .as_ref()
        .map(|n| line_sum_for_side(report.order, n));
    let offset_consistent = expected_constant
        .as_ref()
        .map(|e| report.common_constant.as_ref() == Some(e));
    let code = if report.is_magic { 0 } else { 1 };
    let output = VerifyOutput {
        report,
        declared_offset: loaded.offset,
        expected_constant,
        offset_consistent,
    };
    serde_json::to_writer_pretty(&mut *out, &output).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(code)
}

pub fn cmd_oracle(cells: &str, full: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let values = cells
        .split(',')
        .map(|t| parse_scalar(t).map_err(CliError::usage))
        .collect::<Result<Vec<_>, _>>()?;
    let result = enumerate_3x3(&values).map_err(CliError::usage)?;
    writeln!(
        out,
        "total={} classes={}",
        result.total_count, result.symmetry_class_count
    )?;
    if full {
        for square in &result.squares {
            writeln!(out)?;
            for row in square {
                let line: Vec<String> = row.iter().map(Scalar::to_string).collect();
                writeln!(out, "{}", line.join(","))?;
            }
        }
    }
    Ok(())
}
