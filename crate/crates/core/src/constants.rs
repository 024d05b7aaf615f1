//! Frozen regression values, produced once by dense SVD and pinned here.
//! `cargo test -p hardy-lab -- --ignored regenerate` recomputes them.

/// Schema of every JSON report; bump when a frozen value or a field changes.
pub const SCHEMA_VERSION: u32 = 1;

/// `‖S*ⁿV_gSⁿ‖` for the Cesàro symbol `g = −log(1−z)` on a 1024 × 1024
/// window at `n = 64`, the smallest value over `n ∈ {1, 2, 4, …, 64}`.
pub const CESARO_UNIFORM_FLOOR: f64 = 1.099289710657193;
pub const CESARO_UNIFORM_WINDOW: usize = 1024;
pub const CESARO_UNIFORM_MAX_N: usize = 64;

/// Column-tail norm `‖V_g P_{≥256}‖` of the Cesàro `V_g` on a 1024 window.
pub const CESARO_TAIL_FLOOR: f64 = 0.6796847989937539;
pub const CESARO_TAIL_WINDOW: usize = 1024;
pub const CESARO_TAIL_CUT: usize = 256;

/// Column-tail norm at cut 128 of `V_g − S V_g S` for `g = −log(i − z)` on a
/// 512 window.
pub const ALPHA_I_HANKEL_TAIL_FLOOR: f64 = 1.3553513723934354;
pub const ALPHA_I_HANKEL_WINDOW: usize = 512;
pub const ALPHA_I_HANKEL_CUT: usize = 128;

/// Relative tolerance the regression checks allow around a frozen value.
pub const REGRESSION_TOL: f64 = 0.02;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::toeplitz_step;
    use crate::essential::{defect, DefectKind};
    use crate::operators::volterra;
    use crate::sections::{materialize, op_norm_with, NormMethod, NormOptions, Operand};
    use crate::series::SymbolSpec;

    fn dense() -> NormOptions {
        NormOptions {
            method: NormMethod::DenseSvd,
            ..Default::default()
        }
    }

    #[test]
    #[ignore = "dense SVD of 1024 × 1024 windows; run to regenerate the frozen values"]
    fn regenerate() {
        let cesaro = volterra::<f64>(&SymbolSpec::neg_log_one_minus_z()).unwrap();
        let w = CESARO_UNIFORM_WINDOW;
        let uniform: Vec<f64> = (0..=6)
            .map(|p| op_norm_with(&toeplitz_step(&cesaro, 1 << p, w, w), &dense()).value)
            .collect();
        println!("uniform metrics {uniform:?}");
        let floor = uniform.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(floor, *uniform.last().unwrap());
        assert!((floor - CESARO_UNIFORM_FLOOR).abs() < 1e-12, "{floor:.16}");

        let a = materialize(&cesaro, CESARO_TAIL_WINDOW, CESARO_TAIL_WINDOW);
        let tail = op_norm_with(&a.column_tail(CESARO_TAIL_CUT), &dense()).value;
        println!("cesaro tail {tail:.16}");
        assert!((tail - CESARO_TAIL_FLOOR).abs() < 1e-12);

        let alpha = volterra::<f64>(&SymbolSpec::named("log_alpha_i").unwrap()).unwrap();
        let w = ALPHA_I_HANKEL_WINDOW;
        let d = defect(Operand::Rule(&alpha), DefectKind::HankelDefect, w, w).unwrap();
        let tail = op_norm_with(&d.column_tail(ALPHA_I_HANKEL_CUT), &dense()).value;
        println!("alpha tail {tail:.16}");
        assert!((tail - ALPHA_I_HANKEL_TAIL_FLOOR).abs() < 1e-12);
    }
}
