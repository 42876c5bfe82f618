fn main() {
    std::process::exit(iia_core::cli::run(std::env::args_os()));
}
