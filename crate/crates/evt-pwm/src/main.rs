fn main() {
    std::process::exit(evt_pwm::cli::run(std::env::args_os()));
}
