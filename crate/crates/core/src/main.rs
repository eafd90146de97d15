use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use seiflink::diagram::parse_diagram;
use seiflink::moves::load_fixture_pairs;
use seiflink::report::{build_full_report, render_json, render_text, Command};
use seiflink::twisted::SigmaSelector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CommandArg {
    Validate,
    Group,
    Homology,
    Class,
    Alexander,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

/// Computes link group presentations, first homology and twisted Alexander
/// polynomials of links in Seifert fibered spaces from arrow diagram files.
#[derive(Parser, Debug)]
#[command(name = "seiflink", version)]
struct Args {
    /// Input diagram file.
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = CommandArg::All)]
    command: CommandArg,

    /// Character index, or "all".
    #[arg(long, default_value = "all")]
    sigma: String,

    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Directory of <move>_<id>.before/.after pairs: checks H1 and all
    /// projected polynomials agree across each pair.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

fn run() -> Result<(), (u8, String)> {
    let args = Args::parse();

    if let Some(dir) = &args.fixtures {
        return run_fixtures(dir);
    }

    let Some(input) = &args.input else {
        return Err((2, "no input file given".to_string()));
    };
    let text = std::fs::read_to_string(input).map_err(|e| (2, format!("{}: {e}", input.display())))?;
    let diagram = parse_diagram(&text).map_err(|e| (2, format!("{}: {e}", input.display())))?;

    let violations = diagram.validate();
    if args.command == CommandArg::Validate {
        if violations.is_empty() {
            println!("valid");
            return Ok(());
        }
        for v in &violations {
            println!("violation: {v}");
        }
        return Err((1, format!("{} violation(s)", violations.len())));
    }
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Err((1, "diagram is invalid".to_string()));
    }

    let selector = if args.sigma == "all" {
        SigmaSelector::All
    } else {
        let idx: usize = args
            .sigma
            .parse()
            .map_err(|_| (2, format!("bad --sigma value '{}'", args.sigma)))?;
        SigmaSelector::Index(idx)
    };
    let command = match args.command {
        CommandArg::Validate => unreachable!(),
        CommandArg::Group => Command::Group,
        CommandArg::Homology => Command::Homology,
        CommandArg::Class => Command::Class,
        CommandArg::Alexander => Command::Alexander,
        CommandArg::All => Command::All,
    };
    let report = build_full_report(&diagram, command, selector).map_err(|e| (1, e.to_string()))?;
    match args.format {
        FormatArg::Text => print!("{}", render_text(&report)),
        FormatArg::Structured => println!("{}", render_json(&report)),
    }
    Ok(())
}

fn run_fixtures(dir: &PathBuf) -> Result<(), (u8, String)> {
    use seiflink::homology::{abelianize_full, group_of_matrix};
    use seiflink::presentation::build_presentation;
    use seiflink::twisted::twisted_alexander;

    let pairs = load_fixture_pairs(dir).map_err(|e| (2, e.to_string()))?;
    let mut failures = 0;
    for pair in &pairs {
        let check = || -> Result<bool, String> {
            let pb = build_presentation(&pair.before).map_err(|e| e.to_string())?;
            let pa = build_presentation(&pair.after).map_err(|e| e.to_string())?;
            let hb = group_of_matrix(&abelianize_full(&pb));
            let ha = group_of_matrix(&abelianize_full(&pa));
            if hb != ha {
                return Ok(false);
            }
            let tb = twisted_alexander(&pair.before, SigmaSelector::All).map_err(|e| e.to_string())?;
            let ta = twisted_alexander(&pair.after, SigmaSelector::All).map_err(|e| e.to_string())?;
            if tb.polynomials.len() != ta.polynomials.len() {
                return Ok(false);
            }
            Ok(tb
                .polynomials
                .iter()
                .zip(&ta.polynomials)
                .all(|(x, y)| x.value == y.value && x.character == y.character))
        };
        match check() {
            Ok(true) => println!("fixture {}: PASS", pair.name),
            Ok(false) => {
                println!("fixture {}: FAIL (invariants differ)", pair.name);
                failures += 1;
            }
            Err(e) => {
                println!("fixture {}: FAIL ({e})", pair.name);
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err((1, format!("{failures} fixture pair(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
