use std::io;
use std::process::ExitCode;

use akkadian::cli::{self, Cli, Command};
use akkadian::server::{self, ServerConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Serve(args) = &cli.command {
        return match serve(args.addr.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(cli::EXIT_MALFORMED as u8)
            }
        };
    }
    let code = cli::run(&cli.command, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}

fn serve(addr: Option<&str>) -> anyhow::Result<()> {
    let mut config = ServerConfig::from_env()?;
    if let Some(addr) = addr {
        config.addr = addr.parse()?;
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(server::serve(config))
}
