use std::io::{self, Read, Write};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = galekit::cli::run(&args, &mut io::stdin().lock() as &mut dyn Read, &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
