fn main() {
    std::process::exit(cegio_planner::cli::main_entry());
}
