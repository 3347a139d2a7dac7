fn main() {
    std::process::exit(sta_lab::run(std::env::args_os()));
}
