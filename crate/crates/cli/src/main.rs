fn main() {
    std::process::exit(translen::run(std::env::args_os()));
}
