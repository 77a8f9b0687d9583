//! Run the full verification suite and print one line per criterion.

fn main() {
    match latent_ising::verify::run_all() {
        Ok(report) => {
            for outcome in &report.outcomes {
                println!("{}", outcome.line());
            }
            if !report.all_passed() {
                std::process::exit(2);
            }
        }
        Err(e) => {
            eprintln!("verification aborted: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
