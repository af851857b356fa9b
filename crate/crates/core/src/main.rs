use clap::Parser;

use acsv_cone::cli::{error_json, exit_code, init_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    init_threads();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = run(&cli, &mut lock) {
        eprintln!("error: {e}");
        println!("{}", error_json(&e));
        std::process::exit(exit_code(&e));
    }
}
