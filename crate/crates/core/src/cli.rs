//! Command-line front end: `parse`, `generate` and `serve`.
//!
//! Exit status is 0 when every input produced at least one result, 1 when
//! some input had no parse or named an unsupported cell, and 2 on malformed
//! input.
//!
//! Structured output is one JSON [`OutputRecord`] per line:
//!
//! ```text
//! {"input":"iprus","line":null,"error":null,"elapsed_ms":0.21,
//!  "analyses":[{"root":"p-r-s","radicals":["p","r","s"],"stem":"G",
//!   "tense":"Preterite","png":"3cs","root_class":"Strong",
//!   "suffix":{"ventive":false,"dative":null,"accusative":null,"ma":false},
//!   "label":"G Preterite 3 c s",
//!   "normalized":{"ascii":"iprus","unicode":"iprus","html":"iprus"}}]}
//! ```

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analyzer::{root_text, Analysis, AnalyzerError, Engine, GenRequest};
use crate::segform::{Consonant, Display, Style};
use crate::stems::{FeatureBundle, PngCell, RootClass, Stem, Tense};
use crate::suffixes::SuffixFeatures;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_RESULT: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

/// One analysis as it appears in structured output and API responses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub root: String,
    pub radicals: [Consonant; 3],
    pub stem: Stem,
    pub tense: Tense,
    pub png: PngCell,
    pub root_class: RootClass,
    pub suffix: SuffixFeatures,
    pub label: String,
    pub normalized: Display,
}

impl From<&Analysis> for AnalysisRecord {
    fn from(a: &Analysis) -> Self {
        AnalysisRecord {
            root: a.root_text(),
            radicals: a.radicals,
            stem: a.bundle.stem,
            tense: a.bundle.tense,
            png: a.bundle.png,
            root_class: a.bundle.root_class,
            suffix: a.suffix,
            label: a.label.clone(),
            normalized: Display::of(&a.normalized).expect("analyses are wildcard-free"),
        }
    }
}

impl AnalysisRecord {
    pub fn bundle(&self) -> FeatureBundle {
        FeatureBundle { stem: self.stem, tense: self.tense, png: self.png, root_class: self.root_class }
    }

    pub fn normalized(&self, style: Style) -> &str {
        match style {
            Style::Ascii => &self.normalized.ascii,
            Style::Unicode => &self.normalized.unicode,
            Style::Html => &self.normalized.html,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub input: String,
    /// 1-based line number when reading from a file.
    pub line: Option<usize>,
    pub analyses: Vec<AnalysisRecord>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Parser)]
#[command(name = "akkad", version, about = "Akkadian finite verb parser and generator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse transliterated verb forms.
    Parse(ParseArgs),
    /// Generate forms from three radicals and a paradigm cell.
    Generate(GenerateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Ascii,
    Unicode,
    Html,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Style {
        match s {
            StyleArg::Ascii => Style::Ascii,
            StyleArg::Unicode => Style::Unicode,
            StyleArg::Html => Style::Html,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Encoding of normalized forms in text output.
    #[arg(long, value_enum, default_value_t = StyleArg::Ascii)]
    pub style: StyleArg,
    /// Directory holding g.toml, d.toml and n.toml to use instead of the
    /// built-in rules.
    #[arg(long, env = "AKKAD_RULES_DIR")]
    pub rules_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// Forms to parse; `*` after a vowel tries all three lengths.
    pub forms: Vec<String>,
    /// Read one form per line from this file (`-` for stdin).
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A feature value or `any`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wild<T>(pub Option<T>);

impl<T: FromStr> FromStr for Wild<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("any") {
            Ok(Wild(None))
        } else {
            s.parse().map(|v| Wild(Some(v))).map_err(|e: T::Err| e.to_string())
        }
    }
}

fn parse_radical(s: &str) -> Result<Consonant, String> {
    Consonant::parse(s).ok_or_else(|| format!("{s:?} is not a consonant"))
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_parser = parse_radical)]
    pub r1: Consonant,
    #[arg(value_parser = parse_radical)]
    pub r2: Consonant,
    #[arg(value_parser = parse_radical)]
    pub r3: Consonant,
    /// G, D, N or any.
    pub stem: Wild<Stem>,
    /// Preterite, Durative, Perfect, Imperative, Precative, Vetitive or any.
    pub tense: Wild<Tense>,
    /// Person, gender, number such as 3cs, or any.
    pub png: Wild<PngCell>,
    #[arg(long)]
    pub ventive: bool,
    /// Dative suffix cell, e.g. 2fs.
    #[arg(long)]
    pub dative: Option<PngCell>,
    /// Accusative suffix cell, e.g. 3fs.
    #[arg(long)]
    pub accusative: Option<PngCell>,
    /// Append conjunctive -ma.
    #[arg(long)]
    pub ma: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Listen address; defaults to AKKAD_ADDR or 127.0.0.1:8080.
    #[arg(long)]
    pub addr: Option<String>,
}

/// Runs `parse` or `generate`, writing results to `out` and diagnostics to
/// `err`. Returns the exit status. `serve` is handled by the binary.
pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let output = match command {
        Command::Parse(args) => &args.output,
        Command::Generate(args) => &args.output,
        Command::Serve(_) => {
            let _ = writeln!(err, "serve is only available from the akkad binary");
            return EXIT_MALFORMED;
        }
    };
    let custom;
    let engine = match &output.rules_dir {
        None => Engine::builtin(),
        Some(dir) => match Engine::from_dir(dir) {
            Ok(e) => {
                custom = e;
                &custom
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_MALFORMED;
            }
        },
    };
    match command {
        Command::Parse(args) => cmd_parse(engine, args, out, err),
        Command::Generate(args) => cmd_generate(engine, args, out, err),
        Command::Serve(_) => unreachable!("handled above"),
    }
}

fn read_inputs(args: &ParseArgs, err: &mut dyn Write) -> Option<Vec<(Option<usize>, String)>> {
    let mut inputs: Vec<(Option<usize>, String)> = args.forms.iter().map(|f| (None, f.clone())).collect();
    if let Some(path) = &args.file {
        let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
            Box::new(io::BufReader::new(io::stdin()))
        } else {
            match std::fs::File::open(path) {
                Ok(f) => Box::new(io::BufReader::new(f)),
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return None;
                }
            }
        };
        for (i, line) in reader.lines().enumerate() {
            match line {
                Ok(l) if l.trim().is_empty() => {}
                Ok(l) => inputs.push((Some(i + 1), l.trim().to_string())),
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return None;
                }
            }
        }
    }
    Some(inputs)
}

pub fn cmd_parse(engine: &Engine, args: &ParseArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(inputs) = read_inputs(args, err) else { return EXIT_MALFORMED };
    if inputs.is_empty() {
        let _ = writeln!(err, "error: nothing to parse");
        return EXIT_MALFORMED;
    }
    let mut status = EXIT_OK;
    let started = Instant::now();
    for (line, input) in inputs {
        let t = Instant::now();
        let result = engine.parse(&input);
        let elapsed_ms = t.elapsed().as_secs_f64() * 1000.0;
        let record = match result {
            Ok(analyses) => {
                if analyses.is_empty() {
                    status = status.max(EXIT_NO_RESULT);
                }
                OutputRecord {
                    input,
                    line,
                    analyses: analyses.iter().map(AnalysisRecord::from).collect(),
                    error: None,
                    elapsed_ms,
                }
            }
            Err(e) => {
                status = EXIT_MALFORMED;
                let at = line.map(|l| format!("line {l}: ")).unwrap_or_default();
                let _ = writeln!(err, "error: {at}{input:?}: {e}");
                OutputRecord { input, line, analyses: Vec::new(), error: Some(e.to_string()), elapsed_ms }
            }
        };
        emit(&record, &args.output, out);
    }
    if args.output.format == Format::Text {
        let _ = writeln!(err, "Computation time: {:.3} s", started.elapsed().as_secs_f64());
    }
    status
}

pub fn cmd_generate(engine: &Engine, args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let req = GenRequest {
        radicals: [args.r1, args.r2, args.r3],
        stem: args.stem.0,
        tense: args.tense.0,
        png: args.png.0,
        suffix: Some(SuffixFeatures {
            ventive: args.ventive,
            dative: args.dative,
            accusative: args.accusative,
            ma: args.ma,
        }),
    };
    let show = |o: Option<String>| o.unwrap_or_else(|| "any".into());
    let input = format!(
        "{} {} {} {}",
        root_text(req.radicals),
        show(req.stem.map(|s| s.to_string())),
        show(req.tense.map(|t| t.to_string())),
        show(req.png.map(|p| p.to_string())),
    );
    let t = Instant::now();
    let result = engine.generate(&req);
    let elapsed_ms = t.elapsed().as_secs_f64() * 1000.0;
    match result {
        Ok(generated) => {
            let record = OutputRecord {
                input,
                line: None,
                analyses: generated.iter().map(|g| AnalysisRecord::from(&g.analysis)).collect(),
                error: None,
                elapsed_ms,
            };
            emit(&record, &args.output, out);
            if record.analyses.is_empty() {
                let _ = writeln!(err, "no forms for {}", record.input);
                EXIT_NO_RESULT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                AnalyzerError::Unsupported(_) => EXIT_NO_RESULT,
                _ => EXIT_MALFORMED,
            }
        }
    }
}

fn emit(record: &OutputRecord, output: &OutputArgs, out: &mut dyn Write) {
    let _ = match output.format {
        Format::Structured => serde_json::to_string(record)
            .map_err(io::Error::other)
            .and_then(|json| writeln!(out, "{json}")),
        Format::Text => write!(out, "{}", render_text(record, output.style.into())),
    };
}

/// Text layout: Stem, Parse and Normalized form rows per analysis.
pub fn render_text(record: &OutputRecord, style: Style) -> String {
    if let Some(e) = &record.error {
        return format!("Error\t{}: {e}\n\n", record.input);
    }
    if record.analyses.is_empty() {
        return format!("No parse\t{}\n\n", record.input);
    }
    let mut s = String::new();
    for a in &record.analyses {
        s.push_str(&format!(
            "Stem\t{}\nParse\t{}\nNormalized form\t{}\n",
            a.root,
            a.label,
            a.normalized(style)
        ));
    }
    s.push('\n');
    s
}
