fn main() {
    std::process::exit(bochner_core::scenario::cli_dispatch(std::env::args_os()));
}
