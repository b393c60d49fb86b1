use std::process::ExitCode;

use clap::Parser;

use rbu_cli::{command_name, run, Cli, EXIT_FAIL, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json_record(name)).expect("serializable"));
            } else {
                if !out.text.is_empty() {
                    println!("{}", out.text);
                }
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({ "schema": rbu_cli::SCHEMA, "command": name, "ok": false, "error": e.message });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(if e.code == EXIT_USAGE { EXIT_USAGE as u8 } else { EXIT_FAIL as u8 })
        }
    }
}
