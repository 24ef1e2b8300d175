use std::io::Write;

fn main() {
    let r = troplim::cli::run(std::env::args().skip(1));
    print!("{}", r.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", r.stderr);
    std::process::exit(r.code);
}
