use cracklab::{parse_cli, run_job};

fn main() {
    let job = match parse_cli(std::env::args_os()) {
        Ok(job) => job,
        // Prints the usage/help message and exits with the conventional
        // code (2 for usage errors, 0 for --help/--version).
        Err(err) => err.exit(),
    };
    if let Err(message) = run_job(&job) {
        eprintln!("error: {message}");
        std::process::exit(1);
    }
}
