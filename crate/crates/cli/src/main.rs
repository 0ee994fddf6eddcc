use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hace::gen::Profile;
use hace::Sig;
use hace_cli::{
    exit, generate, parse, print, render, run_spec, Flags, Format, GenProfile, MethodChoice,
    RunError,
};

#[derive(Parser)]
#[command(
    name = "hace",
    about = "Higher-arity ends, coends and dinaturals on finite categories"
)]
struct Cli {
    /// Seed for generated specs and for auxiliary instances in check-all.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bound on the size of any intermediate set (default: HACE_CAP or 1000000).
    #[arg(long, global = true, value_name = "ELEMENTS")]
    cap: Option<usize>,
    /// Method for end and coend jobs that do not name one.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Equalizer)]
    method: MethodArg,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Accept explicit category tables without checking associativity.
    #[arg(long, global = true)]
    skip_assoc_check: bool,
    /// Include wall-clock timings (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate and run a spec file (`-` for stdin).
    Run { file: String },
    /// Parse a spec and print its canonical form.
    Fmt { file: String },
    /// Print a seeded random spec.
    Generate {
        /// Pin the signature of the generated functor, as `p,q`.
        #[arg(long, value_parser = parse_sig)]
        sig: Option<Sig>,
        #[arg(long, default_value_t = 4)]
        max_objects: usize,
        #[arg(long, default_value_t = 12)]
        max_morphisms: usize,
        #[arg(long, default_value_t = 3)]
        max_fiber: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Equalizer,
    Restriction,
    Twisted,
    Weighted,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn parse_sig(s: &str) -> Result<Sig, String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p = p.trim().parse().map_err(|_| "bad p")?;
    let q = q.trim().parse().map_err(|_| "bad q")?;
    Ok(Sig::new(p, q))
}

fn read(file: &str) -> Result<String, RunError> {
    let mut s = String::new();
    let r = if file == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|t| s = t)
    };
    r.map_err(|e| RunError::Io(format!("{file}: {e}")))?;
    Ok(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let method = match cli.method {
        MethodArg::All => MethodChoice::All,
        MethodArg::Equalizer => MethodChoice::parse("equalizer").unwrap(),
        MethodArg::Restriction => MethodChoice::parse("restriction").unwrap(),
        MethodArg::Twisted => MethodChoice::parse("twisted").unwrap(),
        MethodArg::Weighted => MethodChoice::parse("weighted").unwrap(),
    };
    let flags = Flags {
        seed: cli.seed,
        lim: hace_cli::run::limits(cli.cap),
        method,
        format: match cli.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        skip_assoc: cli.skip_assoc_check,
        timing: cli.timing,
    };
    let result = match cli.command {
        Command::Run { file } => read(&file)
            .and_then(|t| Ok(parse(&t)?))
            .and_then(|spec| run_spec(&spec, &flags))
            .map(|report| {
                print!("{}", render(&report, flags.format));
                report.exit_code()
            }),
        Command::Fmt { file } => read(&file).and_then(|t| Ok(parse(&t)?)).map(|spec| {
            print!("{}", print(&spec));
            exit::OK
        }),
        Command::Generate {
            sig,
            max_objects,
            max_morphisms,
            max_fiber,
            max_arity,
        } => {
            let profile = GenProfile {
                base: Profile {
                    max_objects,
                    max_morphisms,
                    max_fiber,
                    max_arity,
                },
                sig,
            };
            generate(flags.seed, &profile, &flags.lim)
                .map_err(RunError::from)
                .map(|spec| {
                    print!("{}", print(&spec));
                    exit::OK
                })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
