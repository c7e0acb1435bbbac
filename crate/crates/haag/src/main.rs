fn main() {
    std::process::exit(haag::run(std::env::args_os()));
}
