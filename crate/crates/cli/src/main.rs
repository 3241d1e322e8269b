use slant_cli::config::THREADS_ENV;

fn main() {
    let threads = std::env::var(THREADS_ENV).ok();
    std::process::exit(slant_cli::main_with_args(std::env::args_os(), threads.as_deref()));
}
