use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CPICK_LOG")).init();
    let outcome = cpick::cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code);
}
