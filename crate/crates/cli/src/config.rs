use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use f1_mirror::LineBundleLabel;

#[derive(Parser, Debug)]
#[command(
    name = "f1mirror",
    version,
    about = "Line bundles on F1 and their mirror Morse category"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Compare Hom dimensions of E(c) on both sides.
    Dims,
    /// Sheaf cohomology of O(to - from).
    Hom,
    /// Intersection components of the pair of sections, with degrees.
    Intersections,
    /// Normalized basis functions of the generators.
    Basis,
    /// Structure constants of E(c) from sup-norms and from gradient trees.
    Products,
    /// Max-modulus certification of the basis functions.
    Verify,
    /// Render the polytope, intersection loci and trees as SVG.
    Plot {
        /// Middle object of a composable triple; draws the gradient trees.
        #[arg(long, value_parser = parse_label, allow_hyphen_values = true)]
        via: Option<LineBundleLabel>,
        /// Draw stable manifolds of isolated generators.
        #[arg(long)]
        stable_manifolds: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Hirzebruch parameter; the category commands require 1.
    #[arg(long, global = true, default_value_t = 1)]
    pub k: u32,
    /// Exceptional collection parameter.
    #[arg(long, global = true, default_value_t = 0)]
    pub c: u32,
    /// Source bundle as `a,b`.
    #[arg(long, global = true, value_parser = parse_label, allow_hyphen_values = true)]
    pub from: Option<LineBundleLabel>,
    /// Target bundle as `a,b`.
    #[arg(long, global = true, value_parser = parse_label, allow_hyphen_values = true)]
    pub to: Option<LineBundleLabel>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Residual bound for `products`, margin for `verify`.
    #[arg(long, global = true, default_value_t = 1e-4, value_parser = parse_tol)]
    pub tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Show every degree, not only degree 0.
    #[arg(long, global = true)]
    pub all_degrees: bool,
}

pub fn parse_label(s: &str) -> Result<LineBundleLabel, String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a
                .parse::<i64>()
                .map_err(|e| format!("bad first entry {a:?}: {e}"))?;
            let b = b
                .parse::<i64>()
                .map_err(|e| format!("bad second entry {b:?}: {e}"))?;
            Ok(LineBundleLabel::new(a, b))
        }
        _ => Err(format!("expected `a,b`, got {s:?}")),
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        Ok(t) => Err(format!("tolerance must be positive, got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(parse_label("2,-2").unwrap(), LineBundleLabel::new(2, -2));
        assert_eq!(parse_label("(-1, 3)").unwrap(), LineBundleLabel::new(-1, 3));
        assert!(parse_label("1").is_err());
        assert!(parse_label("1,2,3").is_err());
        assert!(parse_label("a,2").is_err());
    }

    #[test]
    fn negative_labels_parse_as_values() {
        let cli =
            Cli::try_parse_from(["f1mirror", "hom", "--from", "-1,-2", "--to", "0,0"]).unwrap();
        assert_eq!(cli.config.from, Some(LineBundleLabel::new(-1, -2)));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Cli::try_parse_from(["f1mirror", "products", "--tol", "0"]).is_err());
    }

    #[test]
    fn clap_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
