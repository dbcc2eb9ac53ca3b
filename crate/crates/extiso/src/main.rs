use clap::Parser;

fn main() {
    let cli = extiso::Cli::parse();
    let outcome = extiso::execute(&cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
