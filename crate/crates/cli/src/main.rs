use clap::Parser;
use fde_cli::error::ExitCode;

fn main() {
    let cli = match fde_cli::args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::Usage } else { ExitCode::Ok };
            let _ = e.print();
            std::process::exit(code as i32);
        }
    };
    std::process::exit(fde_cli::run(&cli) as i32);
}
