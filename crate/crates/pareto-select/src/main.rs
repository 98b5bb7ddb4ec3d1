fn main() {
    std::process::exit(pareto_select::cli::run());
}
