fn main() {
    std::process::exit(opcyc::cli::main_with(std::env::args_os()) as i32);
}
