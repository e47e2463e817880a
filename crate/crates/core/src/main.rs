use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GW_LOG", "warn")).init();
    let code = guesswho::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
