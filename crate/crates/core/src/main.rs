use clap::Parser;

fn main() {
    let cli = coercheck::cli::Cli::parse();
    let code = coercheck::cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
