fn main() {
    std::process::exit(levelset_lab::cli::run(std::env::args_os()));
}
