use clap::Parser;

fn main() {
    let cli = cubic_orders::Cli::parse();
    std::process::exit(cubic_orders::run(&cli));
}
