//! Tab-separated tables for the `gamma-table`, `bounds` and `opt-poly` subcommands.

use std::f64::consts::PI;
use std::fmt::Write;

use polymg::bounds::bound_row;
use polymg::optpoly::{cheb4_expansion, gamma_inv_asymptotic, opt_betas, optimal_roots, DEFAULT_TOL};

use crate::{CliError, CliResult};

pub const DEFAULT_GAMMA_KS: [usize; 7] = [1, 2, 3, 4, 5, 10, 100];

/// Rows of `k`, `γ_opt⁻¹`, the asymptotic estimate, their difference and
/// `(π²/60)(2k+1)⁻²`.
pub fn gamma_table(ks: &[usize]) -> CliResult<String> {
    let mut out = String::from("k\tgamma_inv\tasymptotic\tdifference\tcorrection\n");
    for &k in ks {
        let g = optimal_roots(k, DEFAULT_TOL)?.gamma_inv();
        let a = gamma_inv_asymptotic(k);
        let n = (2 * k + 1) as f64;
        let corr = PI * PI / 60.0 / (n * n);
        writeln!(out, "{k}\t{g:.10}\t{a:.10}\t{:.6e}\t{corr:.6e}", g - a).unwrap();
    }
    Ok(out)
}

/// Every bound variant for each `(C, k)` pair.
pub fn bounds_table(cs: &[f64], ks: &[usize]) -> CliResult<String> {
    if let Some(c) = cs.iter().find(|c| !(**c >= 1.0)) {
        return Err(CliError::Usage(format!("C = {c} must be at least 1")));
    }
    let mut out = String::from("C\tk\tw43\tw32\tcheb\tcheb_two_level\tcheb_sharp\topt\n");
    for &c in cs {
        for &k in ks {
            let r = bound_row(c, k);
            writeln!(
                out,
                "{c}\t{k}\t{:.10}\t{:.10}\t{:.10}\t{:.10}\t{:.10}\t{:.10}",
                r.simple_43, r.simple_32, r.cheb, r.cheb_two_level, r.cheb_sharp, r.opt_conjecture
            )
            .unwrap();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptPolyEmit {
    Table,
    Betas,
}

/// Roots, fourth-kind expansion coefficients and `β` of the optimal
/// degree-`k` polynomial, followed by its `γ⁻¹`. Row `i` holds `r_i`,
/// `α_i` and `β_i` (row 0 has no root and `β_0 = 1`).
pub fn opt_poly_table(k: usize, emit: OptPolyEmit) -> CliResult<String> {
    let state = optimal_roots(k, DEFAULT_TOL)?;
    let alpha = cheb4_expansion(&state.roots);
    let betas = opt_betas(&state.roots)?;
    let mut out = String::new();
    match emit {
        OptPolyEmit::Betas => {
            for b in &betas {
                writeln!(out, "{b:.15}").unwrap();
            }
        }
        OptPolyEmit::Table => {
            out.push_str("i\troot\talpha\tbeta\n");
            for i in 0..=k {
                let root = if i == 0 { "-".to_string() } else { format!("{:.15}", state.roots[i - 1]) };
                let beta = if i == 0 { 1.0 } else { betas[i - 1] };
                writeln!(out, "{i}\t{root}\t{:.15}\t{beta:.15}", alpha[i]).unwrap();
            }
            writeln!(out, "gamma_inv\t{:.10}", state.gamma_inv()).unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_rows() {
        let t = gamma_table(&[1, 2]).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1\t3.0000000000"));
        let diff: f64 = lines[2].split('\t').nth(3).unwrap().parse().unwrap();
        assert!((diff - 6.68e-3).abs() < 1e-4);
    }

    #[test]
    fn bounds_shape() {
        let t = bounds_table(&[2.0], &[1, 2, 3]).unwrap();
        assert_eq!(t.lines().count(), 4);
        assert!(t.lines().skip(1).all(|l| l.split('\t').count() == 8));
        assert!(bounds_table(&[0.5], &[1]).is_err());
    }

    #[test]
    fn opt_poly_k1() {
        let t = opt_poly_table(1, OptPolyEmit::Table).unwrap();
        assert!(t.contains("0.666666"));
        assert!(t.contains("1.125"));
        let b = opt_poly_table(3, OptPolyEmit::Betas).unwrap();
        assert_eq!(b.lines().count(), 3);
    }
}
