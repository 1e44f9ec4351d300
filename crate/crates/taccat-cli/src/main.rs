use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use taccat_core::groebner::{with_gb_cache, GbCache};
use taccat_core::{parse_session, run_session, RunOptions};

#[derive(Parser)]
#[command(
    name = "taccat",
    version,
    about = "Cohomology operators and support varieties for periodic totally acyclic complexes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file and print its command outputs.
    Run {
        /// Path to the session file.
        file: PathBuf,
        /// Emit a JSON array (one object per command) instead of text.
        #[arg(long)]
        json: bool,
        /// Period multiple used for the graded-module window.
        #[arg(long, default_value_t = 1)]
        window: usize,
        /// Grid side length for crosscheck/calculus (default: p, or 5 over Q).
        #[arg(long)]
        grid_field: Option<u64>,
        /// Directory for the on-disk Groebner cache (overrides TACCAT_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Disable the cache even if TACCAT_CACHE_DIR is set.
        #[arg(long)]
        no_cache: bool,
        /// Double the window and retry when annihilator stabilization fails.
        #[arg(long)]
        window_escalate: bool,
    },
}

/// Content-addressed cache: one file per reduced basis, written atomically
/// (temp file + rename) so concurrent sessions never observe torn entries.
struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let mut name = String::with_capacity(64);
        for b in digest {
            name.push_str(&format!("{b:02x}"));
        }
        self.dir.join(format!("{name}.gb"))
    }
}

impl GbCache for DiskCache {
    fn lookup(&self, key: &str) -> Option<Vec<u8>> {
        std::fs::read(self.path_for(key)).ok()
    }

    fn store(&self, key: &str, bytes: &[u8]) {
        let path = self.path_for(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, bytes).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { file, json, window, grid_field, cache_dir, no_cache, window_escalate } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("taccat: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let session = match parse_session(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("taccat: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            let opts = RunOptions { json, window, grid_range: grid_field, window_escalate };
            let cache = if no_cache {
                None
            } else {
                cache_dir.or_else(|| std::env::var_os("TACCAT_CACHE_DIR").map(PathBuf::from))
            };
            let result = match cache {
                Some(dir) => {
                    if let Err(e) = std::fs::create_dir_all(&dir) {
                        eprintln!("taccat: cannot create cache dir {}: {e}", dir.display());
                        return ExitCode::from(2);
                    }
                    with_gb_cache(Arc::new(DiskCache { dir }), || run_session(&session, &opts))
                }
                None => run_session(&session, &opts),
            };
            match result {
                Ok(out) => {
                    print!("{out}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("taccat: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
