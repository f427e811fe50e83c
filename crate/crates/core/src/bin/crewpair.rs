fn main() {
    crewpair::cli::init_logging();
    std::process::exit(crewpair::cli::run(std::env::args_os()));
}
