fn main() {
    env_logger::init();
    std::process::exit(expint_lab::run_cli(std::env::args_os()));
}
