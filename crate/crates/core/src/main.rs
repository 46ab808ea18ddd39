fn main() {
    std::process::exit(anick_model::cli::run(std::env::args_os()));
}
