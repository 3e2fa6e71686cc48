fn main() {
    std::process::exit(econe::run(std::env::args_os()));
}
