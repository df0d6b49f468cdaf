use std::process::ExitCode;

use clap::Parser;

use boxcluster_cli::api::router;
use boxcluster_cli::cli::{run, Cli, Command};
use boxcluster_cli::session::Store;

async fn serve(bind: &str, port: u16, state_file: Option<std::path::PathBuf>) -> anyhow::Result<()> {
    let store = Store::new(state_file)?;
    let listener = tokio::net::TcpListener::bind((bind, port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Serve { bind, port, state_file } = cli.command {
        let rt = match tokio::runtime::Runtime::new() {
            Ok(rt) => rt,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        return match rt.block_on(serve(&bind, port, state_file)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        };
    }
    match run(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
