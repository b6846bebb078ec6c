use std::fs;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use exphull_cli::{report, Bounds, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e);
            let out = json!({ "error": { "kind": "usage", "message": e.kind().to_string() } });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            return ExitCode::from(3);
        }
    };
    if let Some(b) = cli.budget {
        exphull::set_default_budget(b);
    }
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("cannot configure thread pool: {}", e);
            return ExitCode::from(3);
        }
    }
    let bounds = Bounds { height: cli.height, word: cli.word, depth: cli.depth };
    let (value, exit) = report(&cli.command, bounds);
    let text = serde_json::to_string_pretty(&value).expect("json") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {}", path.display(), e);
                return ExitCode::from(3);
            }
        }
        None => print!("{}", text),
    }
    ExitCode::from(exit as u8)
}
