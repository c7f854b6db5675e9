use clap::Parser;

fn main() {
    let cli = tempered_cli::Cli::parse();
    match tempered_cli::run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
