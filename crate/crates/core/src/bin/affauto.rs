fn main() {
    let (code, out) = affauto::cli::run(std::env::args_os());
    if !out.is_empty() {
        if code == 0 {
            println!("{}", out.trim_end());
        } else {
            eprintln!("{}", out.trim_end());
        }
    }
    std::process::exit(code);
}
