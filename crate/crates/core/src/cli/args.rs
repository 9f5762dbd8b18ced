use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bicalc",
    version,
    about = "Double differences, double derivatives and double integrals of two-variable functions",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// Tolerance for every estimate.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Bound on the length of every iterative net.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Exit with status 3 when a computation does not converge.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// Expression in x1, x2 (aliases x, y).
    #[arg(short = 'f', long = "field", allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Debug, Args)]
pub struct IntervalArg {
    /// Double interval such as "[0,1]x(0,2]".
    #[arg(short = 'i', long, allow_hyphen_values = true)]
    pub interval: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    Midpoint,
    Corner,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    All,
    Difference,
    Derivative,
    Integral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression at a point (any number of coordinates).
    Eval {
        #[command(flatten)]
        field: FieldArg,
        /// Coordinates "r1,r2,...".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Double difference Δ_a^b(f).
    Delta {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// n-dimensional double difference; n is the number of coordinates.
    DeltaN {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// Double mean slope m_a^b(f).
    Slope {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// Double derivative f′(a), optionally signed.
    Deriv {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        /// Quadrant sign: ++, +-, -+ or --.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
        /// Domain of f; boundary points use the inward signs only.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// Also estimate f12 and f21 by nested differences.
        #[arg(long)]
        schwarz: bool,
    },
    /// Double continuity probe at a point, or over an interval with --global.
    Continuity {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
        #[arg(long, default_value_t = 8)]
        sweep: usize,
        #[arg(long, default_value_t = 20)]
        shrink_steps: usize,
        /// Probe global double continuity on this interval.
        #[arg(long = "global", allow_hyphen_values = true, value_name = "INTERVAL")]
        global: Option<String>,
        #[arg(long, default_value_t = 5)]
        grid: usize,
    },
    /// Test double constancy and split f into g(x1) + h(x2).
    Split {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<String>,
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Double Rolle point: f′(c) = 0 when Δ over the interval vanishes.
    Rolle {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
        #[arg(long, default_value_t = 40)]
        max_halvings: usize,
    },
    /// Double mean value point: f′(c) = m_a^b(f).
    Mvt {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Double Cauchy mean value point.
    CauchyMvt {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'g', long = "g-field", allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Monotonicity and critical points, or the sector test at --point.
    Classify {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Double Newton integral Δ_a^b(F).
    NewtonInt {
        /// Double primitive F.
        #[arg(short = 'F', long = "primitive", allow_hyphen_values = true)]
        primitive: String,
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// Riemann double integral by dyadic refinement.
    RiemannInt {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
        #[command(flatten)]
        riemann: RiemannArgs,
    },
    /// First fundamental theorem check.
    Ftc1 {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        interval: IntervalArg,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Second fundamental theorem check.
    Ftc2 {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'F', long = "primitive", allow_hyphen_values = true)]
        primitive: String,
        #[command(flatten)]
        interval: IntervalArg,
        #[command(flatten)]
        riemann: RiemannArgs,
    },
    /// Improper double Newton integral over an open interval.
    Improper {
        #[arg(short = 'F', long = "primitive", allow_hyphen_values = true)]
        primitive: String,
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Change of variables through x = h(u, v).
    Cov {
        #[command(flatten)]
        field: FieldArg,
        /// First component of h, in u and v.
        #[arg(long, allow_hyphen_values = true)]
        h1: String,
        /// Second component of h.
        #[arg(long, allow_hyphen_values = true)]
        h2: String,
        /// Jacobian determinant; finite differences of h when absent.
        #[arg(long, allow_hyphen_values = true)]
        jacobian: Option<String>,
        /// Relative step of the finite-difference Jacobian.
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
        /// Double primitive of (f∘h)·|J| in u and v.
        #[arg(short = 'G', long = "primitive", allow_hyphen_values = true)]
        primitive: Option<String>,
        /// Parameter interval.
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Run property suites over seeded random functions.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct RiemannArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 12)]
    pub max_refinements: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::Midpoint)]
    pub rule: RuleArg,
    /// Seed of the random sample rule.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Delta { .. } => "delta",
            Command::DeltaN { .. } => "delta-n",
            Command::Slope { .. } => "slope",
            Command::Deriv { .. } => "deriv",
            Command::Continuity { .. } => "continuity",
            Command::Split { .. } => "split",
            Command::Rolle { .. } => "rolle",
            Command::Mvt { .. } => "mvt",
            Command::CauchyMvt { .. } => "cauchy-mvt",
            Command::Classify { .. } => "classify",
            Command::NewtonInt { .. } => "newton-int",
            Command::RiemannInt { .. } => "riemann-int",
            Command::Ftc1 { .. } => "ftc1",
            Command::Ftc2 { .. } => "ftc2",
            Command::Improper { .. } => "improper",
            Command::Cov { .. } => "cov",
            Command::Verify { .. } => "verify",
        }
    }
}
