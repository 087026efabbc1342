use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = bbpert::cli::Cli::parse();
    if let Err(e) = bbpert::cli::run(&cli, std::env::args().collect()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
