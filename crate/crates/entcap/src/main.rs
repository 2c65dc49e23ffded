use std::io::Write;

fn main() {
    let result = entcap::cli::run(std::env::args());
    let stdout = result.stdout();
    println!("{stdout}");
    if !result.is_ok() {
        let _ = writeln!(std::io::stderr(), "entcap: command failed");
    }
    std::process::exit(result.exit_code);
}
