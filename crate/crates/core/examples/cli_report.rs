// Driving the command-line front end in-process.

use layered_cad::cli::{run, EXIT_OK};

fn main() {
    let problem = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/parabola_circle.json");
    for args in [
        vec!["lcad", "--format", "text", "order", problem, "--compare"],
        vec!["lcad", "predict", "--fulldim", "18", "--vars", "2"],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter(), &mut out, &mut err);
        assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
        print!("{}", String::from_utf8(out).unwrap());
    }
}
