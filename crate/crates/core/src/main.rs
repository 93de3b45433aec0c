fn main() {
    std::process::exit(kernel_factor::cli::run());
}
