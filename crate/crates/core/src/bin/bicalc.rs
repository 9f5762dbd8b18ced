fn main() {
    let (code, out) = bicalc::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}
