//! Formula against simulation through the command-line runner, as CSV.

use parisian_hybrid::cli;

fn main() {
    let args: Vec<String> = [
        "parisian-hybrid", "compare", "--identity", "ruin-before-exit", "--model", "cl", "--x", "0:1.5:0.5", "--b", "2", "--q", "0.5", "--n", "200000",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let code = cli::run(&args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
