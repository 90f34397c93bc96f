use enlg::linalg::HermMat;
use enlg::sdp::{self, SolveOpts};

struct StderrLog;
impl sdp::IterLog for StderrLog {
    fn line(&mut self, text: &str) {
        eprintln!("{text}");
    }
}

fn main() {
    let mut p = sdp::SdpProblem::new(vec![2]);
    let mut obj = enlg::linalg::ComplexMat::zeros(2, 2);
    obj.set(0, 0, num_complex::Complex::new(1.0, 0.0));
    p.set_block_objective(0, &HermMat::new(obj).unwrap());
    p.constraints.push(sdp::trace_constraint(0, 2, 1.0));
    let sol = sdp::solve_logged(&p, &SolveOpts::default(), &mut StderrLog).unwrap();
    eprintln!("status {:?} primal {} dual {} iters {}", sol.status, sol.primal_value, sol.dual_value, sol.iterations);
}
