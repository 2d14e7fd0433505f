fn main() {
    let out = intreg_cli::run(std::env::args_os());
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
