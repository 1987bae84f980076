fn main() {
    std::process::exit(matchlattice::run(std::env::args_os()));
}
