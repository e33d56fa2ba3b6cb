fn main() {
    std::process::exit(graph_vortex::cli::run(std::env::args_os()));
}
