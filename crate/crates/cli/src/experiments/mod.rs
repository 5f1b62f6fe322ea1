//! The experiment registry.

mod algebra;
mod discrete;
mod gaussian;
mod series;

use chaoslab_core::Result;

use crate::config::{Kind, ParamSpec, Params};
use crate::report::Outcome;

pub type RunFn = fn(&Params, u64) -> Result<Outcome>;

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub run: RunFn,
}

const fn p(name: &'static str, kind: Kind, default: &'static str, doc: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default, doc }
}

use Kind::{Float, FloatList, Int, IntList};

static REGISTRY: &[Experiment] = &[
    Experiment {
        name: "block-independence",
        summary: "independence diagnostics for components in separate blocks",
        params: &[p("tol", Float, "1e-8", "threshold on covariance of squares and contraction norms")],
        run: algebra::block_independence,
    },
    Experiment {
        name: "breuer-major",
        summary: "central limit for Hermite partial sums of a short-memory sequence",
        params: &[
            p("rho", Float, "0.5", "lag-one correlation of the geometric covariance rho^k"),
            p("q", Int, "2", "Hermite rank"),
            p("n", IntList, "256,4096", "path lengths for the Monte Carlo variance check"),
            p("replicates", Int, "4000", "paths per length"),
            p("n_large", Int, "32768", "length for the long-run variance check"),
            p("series_tol", Float, "1e-10", "closed form vs truncated series"),
            p("long_run_rel", Float, "0.05", "relative tolerance of Var(S_n)/n against a_q^2"),
        ],
        run: series::breuer_major,
    },
    Experiment {
        name: "chi2",
        summary: "contraction criteria and target moments for centered chi-square limits",
        params: &[
            p("nu", IntList, "1,2,4", "degrees of freedom"),
            p("samples", Int, "1000000", "centered gamma draws per nu"),
        ],
        run: gaussian::chi2,
    },
    Experiment {
        name: "contraction-counterexample",
        summary: "two orthogonal kernels with vanishing symmetrized but nonzero plain contraction",
        params: &[],
        run: algebra::contraction_counterexample,
    },
    Experiment {
        name: "discrete-counterexample",
        summary: "moment gap of two Rademacher forms with vanishing mixed contractions",
        params: &[],
        run: discrete::counterexample,
    },
    Experiment {
        name: "fourth-moment",
        summary: "fourth cumulant and normal approximation for the off-diagonal second-chaos family",
        params: &[
            p("n", IntList, "1,4,16,64", "family sizes"),
            p("samples", Int, "100000", "draws per family member"),
            p("ks_small", Float, "0.02", "KS distance must fall below this at the largest n"),
            p("ks_large", Float, "0.05", "KS distance must exceed this at n = 1"),
        ],
        run: gaussian::fourth_moment,
    },
    Experiment {
        name: "gen-cs",
        summary: "generalized Cauchy-Schwarz inequality on random discrete instances",
        params: &[
            p("instances", Int, "100", "random instances"),
            p("max_vars", Int, "6", "largest number of variables"),
            p("max_atoms", Int, "5", "largest number of atoms"),
        ],
        run: algebra::gen_cs,
    },
    Experiment {
        name: "hypercontractivity",
        summary: "moment bounds (E|F|^r)^(1/r) <= (r-1)^(q/2) (E F^2)^(1/2)",
        params: &[
            p("r", FloatList, "3,4,6", "moment orders"),
            p("q", IntList, "1,2,3", "chaos orders"),
            p("tensors", Int, "10", "random kernels per order"),
            p("dim", Int, "4", "basis dimension"),
            p("samples", Int, "100000", "draws per check"),
        ],
        run: gaussian::hypercontractivity,
    },
    Experiment {
        name: "identities",
        summary: "randomized suite of contraction and symmetrization identities",
        params: &[p("trials", Int, "200", "random instances per identity")],
        run: algebra::identities,
    },
    Experiment {
        name: "joint-limits",
        summary: "joint limit of Hermite partial sums of ranks q and 2",
        params: &[
            p("D", Float, "0.8", "memory exponent D of the fractional Gaussian noise"),
            p("q", Int, "3", "higher Hermite rank (at least 3)"),
            p("n", Int, "16384", "path length"),
            p("replicates", Int, "2000", "paths"),
        ],
        run: series::joint_limits,
    },
    Experiment {
        name: "lindeberg",
        summary: "Rademacher vs Gaussian moment gaps along a refining family of forms",
        params: &[
            p("d", IntList, "10,20,50", "numbers of symbols"),
            p("samples", Int, "400000", "coupled draws per size"),
            p("m", Int, "2", "power of the first form"),
            p("n", Int, "2", "power of the second form"),
        ],
        run: discrete::lindeberg,
    },
    Experiment {
        name: "multiplication-formula",
        summary: "pathwise product formula for multiple integrals",
        params: &[
            p("pairs", Int, "50", "random kernel pairs"),
            p("draws", Int, "100", "shared Gaussian draws"),
            p("max_order", Int, "3", "largest kernel order"),
            p("dim", Int, "4", "basis dimension"),
        ],
        run: algebra::multiplication_formula,
    },
    Experiment {
        name: "rosenblatt-cumulants",
        summary: "cumulants of the Rosenblatt law by Galerkin discretization",
        params: &[
            p("hurst", Float, "0.7", "Hurst index in (1/2, 1)"),
            p("cells", Int, "512", "finest grid size"),
        ],
        run: series::rosenblatt,
    },
    Experiment {
        name: "stein-bounds",
        summary: "fourth-moment bounds on |E h(F) - E h(N)| for chaos vectors",
        params: &[p("samples", Int, "100000", "draws of F and of N")],
        run: gaussian::stein_bounds,
    },
    Experiment {
        name: "taqqu",
        summary: "non-central limit of second-order Hermite sums under long memory",
        params: &[
            p("D", Float, "0.3", "memory exponent D in (0, 1/2)"),
            p("n", Int, "16384", "path length"),
            p("replicates", Int, "200", "paths"),
            p("cells", Int, "512", "grid size for the limit cumulants"),
        ],
        run: series::taqqu,
    },
];

/// All experiments, sorted by name.
pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Parameter declarations of a named experiment.
pub fn param_specs(name: &str) -> Option<&'static [ParamSpec]> {
    find(name).map(|e| e.params)
}
