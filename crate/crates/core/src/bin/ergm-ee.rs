fn main() -> std::process::ExitCode {
    ergm_ee::cli::main()
}
