//! Command-line front end for `matchlattice-core`: reports in text, JSON or
//! CSV, and the verification suites behind `verify`.

pub mod commands;
pub mod emit;
pub mod store;
pub mod suites;

pub use commands::run_with;

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
