fn main() {
    std::process::exit(caustics::cli::main_with_args(std::env::args_os()));
}
