use std::io::{self, BufWriter};

fn main() {
    let stdout = io::stdout();
    let mut out = BufWriter::with_capacity(1 << 20, stdout.lock());
    let mut err = io::stderr();
    let code = offset_magic::cli::run(std::env::args_os(), &mut out, &mut err);
    drop(out);
    std::process::exit(code);
}
