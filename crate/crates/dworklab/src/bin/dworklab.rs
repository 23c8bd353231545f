fn main() {
    std::process::exit(dworklab::cli::main_with(std::env::args_os()));
}
