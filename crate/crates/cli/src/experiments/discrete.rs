use chaoslab_core::discrete::{
    alternating_off_diagonal, counterexample_pair, lindeberg_gap, max_influence, mixed_contraction_norm, moment_gap,
    uniform_off_diagonal, GapMode, InnovationLaw, MAX_ENUMERATION_DIM,
};
use chaoslab_core::Result;

use crate::config::Params;
use crate::report::{Metric, Outcome};

pub fn counterexample(_: &Params, _seed: u64) -> Result<Outcome> {
    let (a1, a2) = counterexample_pair();
    let law = InnovationLaw::Rademacher;
    let enumerated = moment_gap(&a1, &a2, 2, 2, &law, GapMode::Enumerate)?.value;
    let expanded = moment_gap(&a1, &a2, 2, 2, &law, GapMode::Expand)?.value;
    let gaussian = moment_gap(&a1, &a2, 2, 2, &InnovationLaw::Gaussian, GapMode::Expand)?.value;
    let mut o = Outcome::default();
    o.row(4, 0, "gap_enumerated", enumerated);
    o.row(4, 0, "gap_expanded", expanded);
    o.row(4, 0, "gap_gaussian", gaussian);
    o.metric(Metric::near("gap_enumerated", enumerated, -0.25, 0.0));
    o.metric(Metric::near("gap_expanded", expanded, -0.25, 1e-15));
    for r in 1..=2 {
        let c = mixed_contraction_norm(&a1, &a2, r)?;
        o.row(4, 0, &format!("mixed_contraction_r{r}"), c);
        o.metric(Metric::near(format!("mixed_contraction_r{r}"), c, 0.0, 0.0));
    }
    let inf = max_influence(&a1).max(max_influence(&a2));
    o.row(4, 0, "max_influence", inf);
    o.metric(Metric::near("max_influence", inf, 0.125, 0.0));
    Ok(o)
}

pub fn lindeberg(params: &Params, seed: u64) -> Result<Outcome> {
    let (samples, m, n) = (params.usize("samples"), params.int("m") as u32, params.int("n") as u32);
    let law = InnovationLaw::Rademacher;
    let mut o = Outcome::default();
    let mut deltas = Vec::new();
    for d in params.ints("d") {
        let (a1, a2) = (uniform_off_diagonal(d)?, alternating_off_diagonal(d)?);
        // same seed at every size
        let rep = lindeberg_gap(&a1, &a2, m, n, &law, samples, seed)?;
        o.row(d, 0, "gap_rademacher", rep.gap_x.value);
        o.row(d, 0, "gap_gaussian", rep.gap_g.value);
        o.row(d, 0, "delta", rep.delta.value);
        o.row(d, 0, "delta_se", rep.delta.se);
        o.row(d, 0, "max_influence", max_influence(&a1).max(max_influence(&a2)));
        o.row(d, 0, "mixed_contraction_r1", mixed_contraction_norm(&a1, &a2, 1)?);
        if d <= MAX_ENUMERATION_DIM {
            o.row(d, 0, "gap_rademacher_exact", moment_gap(&a1, &a2, m, n, &law, GapMode::Enumerate)?.value);
        }
        deltas.push((d, rep.delta));
    }
    if let (Some((d0, first)), Some((d1, last))) = (deltas.first(), deltas.last()) {
        o.metric(Metric::below(format!("abs_delta_d{d1}_below_d{d0}"), last.value.abs(), first.value.abs()));
    }

    let (c1, c2) = counterexample_pair();
    let rep = lindeberg_gap(&c1, &c2, 2, 2, &law, samples, seed)?;
    o.row(4, 0, "counterexample_delta", rep.delta.value);
    o.metric(Metric::within_se("counterexample_delta", rep.delta, -0.25, 4.0, 0.0));
    Ok(o)
}
