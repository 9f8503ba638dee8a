use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sk2d", version, about = "Special Kähler structures with isolated singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample w, u, the connection form and Ξ₀ of a family to CSV.
    Family(FamilyCmd),
    /// Solve Δu = |dh|² e^{2u} with the family's boundary data and compare.
    SolveKw(SolveKwCmd),
    /// Parallel transport around a circle centred on the puncture.
    Holonomy(HolonomyCmd),
    /// Conjugacy class of a monodromy matrix.
    Classify(ClassifyCmd),
    /// Fit the singularity of w and the order of Ξ₀ at the puncture.
    Asymptotics(AsymptoticsCmd),
    /// Gauss–Bonnet on an annulus, or the cone budget of a list of orders.
    GaussBonnet(GaussBonnetCmd),
    /// Construct a special Kähler metric on ℙ¹ with prescribed cone points.
    P1(P1Cmd),
    /// Run the invariant suite on a family.
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Registered family: log, liouville-zn, poincare, flat-harmonic, conical-model.
    #[arg(long)]
    pub family: String,
    /// Coefficient A of h = A log r + B (log family).
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a_coef: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b_coef: Option<f64>,
    /// Curvature of the auxiliary metric (liouville-zn), negative.
    #[arg(long = "K", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Exponent of the power map (liouville-zn).
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Coefficient of φ in the source; only families that support it accept it.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Exponent β (conical-model).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Constant C (conical-model).
    #[arg(long = "C", allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Full parameter object as JSON; merged under the individual flags.
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long = "grid-nrho")]
    pub nrho: Option<usize>,
    #[arg(long = "grid-ntheta")]
    pub ntheta: Option<usize>,
    /// Inner radius (defaults to the family domain).
    #[arg(long)]
    pub rmin: Option<f64>,
    /// Outer radius (defaults to the family domain).
    #[arg(long)]
    pub rmax: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Print the result as JSON on stdout.
    #[arg(long)]
    pub json: bool,
    /// Where to write artifacts: a JSON file, or a directory for commands
    /// that also write CSV fields.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FamilyCmd {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    /// Exact values of the family on the inner circle.
    Dirichlet,
    /// Cone condition with parameter --gamma.
    Cone,
}

#[derive(Args, Debug)]
pub struct SolveKwCmd {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value = "dirichlet")]
    pub inner: InnerKind,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Newton tolerance on the log-polar residual.
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct HolonomyCmd {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Loop radius (default: 1 when the structure extends past it).
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ClassifyCmd {
    /// JSON file with a "matrix" entry, e.g. the output of `holonomy`; "-" for stdin.
    #[arg(long, conflicts_with = "matrix")]
    pub input: Option<PathBuf>,
    /// Matrix entries a,b,c,d of [[a, b], [c, d]].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Option<Vec<f64>>,
    /// Also report the classes predicted for exponent β.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub rtol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AsymptoticsCmd {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Smallest fit radius (default: three decades inside the family domain).
    #[arg(long)]
    pub rmin: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// Contour radius for the order of Ξ₀.
    #[arg(long)]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GaussBonnetCmd {
    /// Family metric to integrate (omit with --orders).
    #[arg(long, required_unless_present = "orders")]
    pub family: Option<String>,
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a_coef: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b_coef: Option<f64>,
    #[arg(long = "K", allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    #[arg(long)]
    pub params: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Cone orders (β/2) for the budget check; "inf:" prefixes the cone at infinity.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub orders: Option<Vec<String>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct P1Cmd {
    /// JSON file with a list of [x, y] positions, or inline "x,y;x,y;…".
    #[arg(long)]
    pub punctures: String,
    /// Cone orders αⱼ/2 of the special Kähler metric, one per puncture or one for all.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required_unless_present = "alphas")]
    pub orders: Option<Vec<f64>>,
    /// Exponents αⱼ directly (alternative to --orders).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "orders")]
    pub alphas: Option<Vec<f64>>,
    #[arg(long = "grid-ntheta", default_value_t = 64)]
    pub ntheta: usize,
    /// Schwarz tolerance on the change of patch boundary data.
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
