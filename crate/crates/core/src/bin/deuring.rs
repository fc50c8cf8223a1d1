fn main() {
    std::process::exit(deuring_core::cli_table::main_with(std::env::args_os()));
}
