use std::process::ExitCode;

fn main() -> ExitCode {
    voucherkit::cli::main()
}
