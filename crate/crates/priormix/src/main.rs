fn main() {
    std::process::exit(priormix::cli::run(std::env::args_os()));
}
