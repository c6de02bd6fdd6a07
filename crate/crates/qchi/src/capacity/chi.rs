//! χ-function at a fixed average input (Stiefel-manifold descent over pure
//! decompositions) and energy-constrained χ-capacity (alternating ascent over
//! ensembles with a Lagrange-multiplier search), plus the Lagrangian
//! optimality certificate for candidate maximizers.

use crate::channels::KrausChannel;
use crate::ensembles::{chi_quantity_with, Ensemble};
use crate::error::{Error, Result};
use crate::numerics::entropy::eta;
use crate::numerics::gibbs::gibbs_state;
use crate::numerics::matrix::{hermitian_eigen, hermitize, trace_re, CMatrix, CVector, C64};
use crate::numerics::states::{DensityMatrix, Hamiltonian, PureState};
use crate::sampling::{random_isometry, random_unit_vector, restart_rng};

use super::{
    sphere_tangent, unit, CapacityResult, ConstraintSpec, IterationRecord, OptimalityCertificate,
    Optimizer, SolverOptions,
};

/// ln of a PSD matrix reconstructed from known eigen-data, with eigenvalues
/// floored at `floor` so the kernel maps to `ln floor` instead of −∞.
fn log_from_eigen(vals: &[f64], vecs: &CMatrix, floor: f64) -> CMatrix {
    let d = vecs.nrows();
    let mut m = CMatrix::zeros(d, d);
    for (j, &v) in vals.iter().enumerate() {
        let lv = C64::new(v.max(floor).ln(), 0.0);
        let col = vecs.column(j);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] += lv * col[r] * col[c].conj();
            }
        }
    }
    m
}

/// Σ η(v) over a spectrum (negative round-off clipped to zero).
fn entropy_from_vals(vals: &[f64]) -> f64 {
    vals.iter().map(|&v| eta(v.max(0.0))).sum()
}

// ---------------------------------------------------------------------------
// χ-function at fixed average input: minimize the average output entropy of a
// pure-state decomposition of ρ. Decompositions are parametrized by isometries
// M (m×r, M†M = I) acting on the columns of B = [√λ_1 u_1 … √λ_r u_r]:
// the i-th unnormalized member is u_i = Σ_j M[i,j] b_j, which enumerates
// exactly the decompositions of ρ into at most m pure pieces.
// ---------------------------------------------------------------------------

/// Objective F(M) = Σ_i [η-entropy of Φ(u_i u_i†) + ‖u_i‖² ln ‖u_i‖²] and its
/// Euclidean Wirtinger gradient D[i,j] = b_j† G_i with
/// G_i = −Φ*(ln_floor Φ(u_i u_i†)) u_i + ln(‖u_i‖²) u_i.
fn stiefel_objective_grad(
    phi: &KrausChannel,
    b: &CMatrix,
    m: &CMatrix,
    floor: f64,
) -> Result<(f64, CMatrix)> {
    let u = b * m.transpose();
    let n_members = u.ncols();
    let d_in = u.nrows();
    let mut f = 0.0;
    let mut grad = CMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..n_members {
        let ui = u.column(i).into_owned();
        let nsq = ui.norm_squared();
        if nsq < 1e-16 {
            continue;
        }
        let proj = &ui * ui.adjoint();
        let a = phi.apply_op(&proj);
        let (avals, avecs) = hermitian_eigen(&a)?;
        f += entropy_from_vals(&avals) + nsq * nsq.ln();
        let log_a = log_from_eigen(&avals, &avecs, floor);
        let g_i: CVector =
            phi.adjoint_apply(&log_a) * &ui * C64::new(-1.0, 0.0) + &ui * C64::new(nsq.ln(), 0.0);
        debug_assert_eq!(g_i.len(), d_in);
        for j in 0..m.ncols() {
            grad[(i, j)] = b.column(j).dotc(&g_i);
        }
    }
    Ok((f, grad))
}

/// Thin QR retraction back onto the Stiefel manifold, with the R diagonal's
/// phases absorbed into Q so the retraction is continuous in its argument.
fn qr_retract(x: &CMatrix) -> CMatrix {
    let qr = x.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..r.ncols().min(r.nrows()) {
        let d = r[(j, j)];
        if d.norm() > 1e-14 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

struct DescentOutcome {
    f: f64,
    m: CMatrix,
    iterations: usize,
    converged: bool,
    history: Vec<IterationRecord>,
}

fn stiefel_descent(
    phi: &KrausChannel,
    b: &CMatrix,
    m0: CMatrix,
    opts: &SolverOptions,
) -> Result<DescentOutcome> {
    let floor = opts.tol.eig;
    let mut m = m0;
    let (mut f, mut d) = stiefel_objective_grad(phi, b, &m, floor)?;
    let mut step = 0.5_f64;
    let mut iterations = 0;
    let mut converged = false;
    let mut history = Vec::new();
    if opts.record_trace {
        history.push(IterationRecord { iteration: 0, objective: f });
    }
    for it in 1..=opts.max_iterations {
        let t = &d - &m * hermitize(&(m.adjoint() * &d));
        let gsq = t.norm_squared();
        if gsq.sqrt() < 1e-9 * (1.0 + f.abs()) {
            converged = true;
            break;
        }
        step = (step * 2.0).min(1.0);
        let mut accepted = false;
        while step > 1e-18 {
            let cand = qr_retract(&(&m - &t * C64::new(step, 0.0)));
            let (fc, dc) = stiefel_objective_grad(phi, b, &cand, floor)?;
            if fc <= f - 1e-4 * step * gsq {
                m = cand;
                f = fc;
                d = dc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        iterations = it;
        if opts.record_trace {
            history.push(IterationRecord { iteration: it, objective: f });
        }
        if !accepted {
            converged = gsq.sqrt() < 1e-6 * (1.0 + f.abs());
            break;
        }
    }
    Ok(DescentOutcome { f, m, iterations, converged, history })
}

/// Constrained χ-function `C̄(Φ, ρ)`: the largest χ-quantity of an output
/// ensemble whose input ensemble averages exactly to `ρ`.
///
/// The optimizer is returned as the achieving input ensemble of at most
/// `min(d², r²)` pure members (r = rank ρ); restart 0 starts from the spectral
/// decomposition of ρ, the remaining restarts from seeded random isometries.
pub fn chi_function(
    phi: &KrausChannel,
    rho: &DensityMatrix,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    if rho.dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "chi_function input state vs channel",
            expected: phi.dim_in(),
            got: rho.dim(),
        });
    }
    let floor = opts.tol.eig;
    let d = rho.dim();
    let out_avg = phi.apply(rho)?;
    let (avals, _) = out_avg.eigen();
    let h_out = entropy_from_vals(&avals);

    let (evals, evecs) = rho.eigen();
    let kept: Vec<usize> = (0..d).filter(|&j| evals[j] > floor).collect();
    let r = kept.len();
    if r <= 1 {
        // Pure input: the only decomposition is ρ itself and χ vanishes.
        let mu = Ensemble::new(vec![(1.0, rho.clone())])?;
        return Ok(CapacityResult {
            value: 0.0,
            optimizer: Optimizer::Ensemble(mu),
            lambda: 0.0,
            iterations: 0,
            certificate: None,
            converged: true,
            history: Vec::new(),
        });
    }

    let mut b = CMatrix::zeros(d, r);
    for (col, &j) in kept.iter().enumerate() {
        let scale = C64::new(evals[j].sqrt(), 0.0);
        for row in 0..d {
            b[(row, col)] = evecs[(row, j)] * scale;
        }
    }
    let m_rows = (r * r).min(d * d).max(r);

    let mut best: Option<DescentOutcome> = None;
    for k in 0..opts.restarts.max(1) {
        let m0 = if k == 0 {
            let mut m = CMatrix::zeros(m_rows, r);
            for j in 0..r {
                m[(j, j)] = C64::new(1.0, 0.0);
            }
            m
        } else {
            let mut rng = restart_rng(opts.seed, k as u64);
            random_isometry(&mut rng, m_rows, r)
        };
        let outcome = stiefel_descent(phi, &b, m0, opts)?;
        let better = match &best {
            None => true,
            Some(cur) => outcome.f < cur.f - 1e-12,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one restart ran");

    // Assemble the achieving ensemble from the winning isometry.
    let u = &b * best.m.transpose();
    let mut members = Vec::new();
    for i in 0..u.ncols() {
        let ui = u.column(i).into_owned();
        let w = ui.norm_squared();
        if w > 1e-12 {
            members.push((w, PureState::normalized(ui)?.projector()));
        }
    }
    let total: f64 = members.iter().map(|(w, _)| *w).sum();
    for m in &mut members {
        m.0 /= total;
    }
    let mu = Ensemble::new(members)?;
    let value = chi_quantity_with(&mu.map(phi)?, &opts.tol);
    // Internal consistency: the bookkeeping value must match the reported
    // optimizer's χ.
    debug_assert!((value - (h_out - best.f)).abs() < 1e-6);

    Ok(CapacityResult {
        value,
        optimizer: Optimizer::Ensemble(mu),
        lambda: 0.0,
        iterations: best.iterations,
        certificate: None,
        converged: best.converged,
        history: best.history,
    })
}

// ---------------------------------------------------------------------------
// Energy-constrained χ-capacity.
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Candidate {
    weights: Vec<f64>,
    psis: Vec<CVector>,
    chi: f64,
    energy: f64,
    lagrangian: f64,
    iterations: usize,
    converged: bool,
    history: Vec<IterationRecord>,
}

struct Eval {
    l: f64,
    chi: f64,
    energy: f64,
    scores: Vec<f64>,
    logs: Vec<CMatrix>,
    ln_avg: CMatrix,
}

/// Lagrangian L = χ(output ensemble) − λ(⟨H⟩ − E) of a pure-state ensemble,
/// with the per-member data the ascent steps need.
#[allow(clippy::too_many_arguments)]
fn evaluate_ensemble(
    phi: &KrausChannel,
    h: &Hamiltonian,
    lambda: f64,
    e_budget: f64,
    weights: &[f64],
    psis: &[CVector],
    floor: f64,
    need_logs: bool,
) -> Result<Eval> {
    let d_out = phi.dim_out();
    let n = weights.len();
    let mut outs = Vec::with_capacity(n);
    let mut avg = CMatrix::zeros(d_out, d_out);
    for (w, psi) in weights.iter().zip(psis) {
        let a = phi.apply_op(&(psi * psi.adjoint()));
        avg += &a * C64::new(*w, 0.0);
        outs.push(a);
    }
    let (avg_vals, avg_vecs) = hermitian_eigen(&avg)?;
    let ln_avg = log_from_eigen(&avg_vals, &avg_vecs, floor);

    let mut chi = 0.0;
    let mut energy = 0.0;
    let mut scores = Vec::with_capacity(n);
    let mut logs = Vec::with_capacity(n);
    for (i, (w, psi)) in weights.iter().zip(psis).enumerate() {
        let (vals, vecs) = hermitian_eigen(&outs[i])?;
        let neg_h = -entropy_from_vals(&vals);
        let rel = neg_h - trace_re(&(&outs[i] * &ln_avg));
        let e_i = (psi.adjoint() * h.matrix() * psi)[(0, 0)].re;
        chi += w * rel;
        energy += w * e_i;
        scores.push(rel - lambda * e_i);
        if need_logs {
            logs.push(log_from_eigen(&vals, &vecs, floor));
        }
    }
    let l = chi - lambda * (energy - e_budget);
    Ok(Eval { l, chi, energy, scores, logs, ln_avg })
}

/// One alternating-ascent solve of max_μ χ(Φ(μ)) − λ(E(μ) − E) from a given
/// start. Accepted steps never decrease the Lagrangian.
#[allow(clippy::too_many_arguments)]
fn inner_solve(
    phi: &KrausChannel,
    h: &Hamiltonian,
    e_budget: f64,
    lambda: f64,
    mut weights: Vec<f64>,
    mut psis: Vec<CVector>,
    max_iters: usize,
    floor: f64,
    record: bool,
) -> Result<Candidate> {
    let n = weights.len();
    let mut eval = evaluate_ensemble(phi, h, lambda, e_budget, &weights, &psis, floor, true)?;
    let mut iterations = 0;
    let mut converged = false;
    let mut state_step = 0.25_f64;
    let mut history = Vec::new();
    if record {
        history.push(IterationRecord { iteration: 0, objective: eval.l });
    }

    for it in 1..=max_iters {
        let l_start = eval.l;

        // Weight step: multiplicative (exponentiated-gradient) update with a
        // backtracked rate; the classical rate 1 is the Blahut–Arimoto update.
        let mut rate = 1.0_f64;
        let max_score = eval.scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..25 {
            let mut cand: Vec<f64> = weights
                .iter()
                .zip(&eval.scores)
                .map(|(w, s)| w * (rate * (s - max_score)).exp())
                .collect();
            let total: f64 = cand.iter().sum();
            if total > 1e-300 {
                for w in &mut cand {
                    *w /= total;
                }
                let cand_eval =
                    evaluate_ensemble(phi, h, lambda, e_budget, &cand, &psis, floor, true)?;
                if cand_eval.l >= eval.l - 1e-14 {
                    weights = cand;
                    eval = cand_eval;
                    break;
                }
            }
            rate *= 0.5;
        }

        // State step: simultaneous Riemannian ascent on the member spheres.
        let mut tangents = Vec::with_capacity(n);
        let mut total_sq = 0.0;
        for i in 0..n {
            let mut diff = eval.logs[i].clone() - &eval.ln_avg;
            diff = phi.adjoint_apply(&diff);
            let ambient: CVector = (&diff - h.matrix() * C64::new(lambda, 0.0)) * &psis[i]
                * C64::new(weights[i], 0.0);
            let t = sphere_tangent(&psis[i], &ambient);
            total_sq += t.norm_squared();
            tangents.push(t);
        }
        if total_sq.sqrt() > 1e-12 {
            state_step = (state_step * 2.0).min(1.0);
            loop {
                let cand_psis: Result<Vec<CVector>> = psis
                    .iter()
                    .zip(&tangents)
                    .map(|(psi, t)| unit(&(psi + t * C64::new(state_step, 0.0))))
                    .collect();
                let cand_psis = cand_psis?;
                let cand_eval = evaluate_ensemble(
                    phi, h, lambda, e_budget, &weights, &cand_psis, floor, true,
                )?;
                if cand_eval.l >= eval.l + 1e-4 * state_step * total_sq {
                    psis = cand_psis;
                    eval = cand_eval;
                    break;
                }
                state_step *= 0.5;
                if state_step < 1e-16 {
                    break;
                }
            }
        }

        iterations = it;
        if record {
            history.push(IterationRecord { iteration: it, objective: eval.l });
        }
        let improved = eval.l - l_start;
        if improved < 1e-12 * (1.0 + eval.l.abs()) && total_sq.sqrt() < 1e-7 {
            converged = true;
            break;
        }
    }

    Ok(Candidate {
        weights,
        psis,
        chi: eval.chi,
        energy: eval.energy,
        lagrangian: eval.l,
        iterations,
        converged,
        history,
    })
}

/// Deterministic start: spectral ensemble of the Gibbs state of (H, E),
/// padded with seeded random members at negligible weight so the
/// multiplicative weight update can recruit extra members when useful.
fn gibbs_start(
    h: &Hamiltonian,
    e_budget: f64,
    n_members: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<CVector>)> {
    let d = h.dim();
    let gibbs = gibbs_state(h, e_budget)?;
    let (gvals, gvecs) = gibbs.state.eigen();
    let mut weights = Vec::with_capacity(n_members);
    let mut psis = Vec::with_capacity(n_members);
    for (gval, gvec) in gvals.iter().zip(gvecs.column_iter()) {
        weights.push(gval.max(1e-9));
        psis.push(gvec.into_owned());
    }
    let mut rng = restart_rng(seed, 0xD1CE);
    while psis.len() < n_members {
        weights.push(1e-7);
        psis.push(random_unit_vector(&mut rng, d).vector().clone());
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok((weights, psis))
}

fn random_start(d: usize, n_members: usize, seed: u64, k: u64) -> (Vec<f64>, Vec<CVector>) {
    use rand::Rng;
    let mut rng = restart_rng(seed, 0xA000 + k);
    let mut weights: Vec<f64> = (0..n_members)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let psis = (0..n_members)
        .map(|_| random_unit_vector(&mut rng, d).vector().clone())
        .collect();
    (weights, psis)
}

/// Best-of-`restarts` inner solve at a fixed multiplier. Restart 0 uses the
/// warm start when given (the deterministic Gibbs spectral start otherwise);
/// later restarts are seeded random ensembles. Ties keep the earliest restart.
#[allow(clippy::too_many_arguments)]
fn multi_start_solve(
    phi: &KrausChannel,
    h: &Hamiltonian,
    e_budget: f64,
    lambda: f64,
    warm: Option<&Candidate>,
    restarts: usize,
    iters: usize,
    record: bool,
    seed: u64,
    floor: f64,
    counter: &mut usize,
) -> Result<Candidate> {
    let d = phi.dim_in();
    let n_members = d * d;
    let mut best: Option<Candidate> = None;
    for k in 0..restarts.max(1) {
        let (w0, p0) = match (k, warm) {
            (0, Some(c0)) => (c0.weights.clone(), c0.psis.clone()),
            (0, None) => gibbs_start(h, e_budget, n_members, seed)?,
            _ => random_start(d, n_members, seed, k as u64),
        };
        let cand = inner_solve(phi, h, e_budget, lambda, w0, p0, iters, floor, record)?;
        *counter += cand.iterations;
        let better = match &best {
            None => true,
            Some(b) => cand.lagrangian > b.lagrangian + 1e-12,
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Merge near-duplicate pure members (overlap > 1 − 1e-8) and drop weight
/// below `prune`, renormalizing. Used to keep blended ensembles at or below
/// the d² member cap.
fn consolidate(weights: &mut Vec<f64>, psis: &mut Vec<CVector>, prune: f64) {
    let mut out_w: Vec<f64> = Vec::new();
    let mut out_p: Vec<CVector> = Vec::new();
    for (w, psi) in weights.iter().zip(psis.iter()) {
        if *w <= prune {
            continue;
        }
        let mut merged = false;
        for (ow, op) in out_w.iter_mut().zip(&out_p) {
            let overlap = op.dotc(psi).norm_sqr();
            if overlap > 1.0 - 1e-8 {
                *ow += *w;
                merged = true;
                break;
            }
        }
        if !merged {
            out_w.push(*w);
            out_p.push(psi.clone());
        }
    }
    let total: f64 = out_w.iter().sum();
    if total > 0.0 {
        for w in &mut out_w {
            *w /= total;
        }
        *weights = out_w;
        *psis = out_p;
    }
}

fn candidate_to_ensemble(cand: &Candidate) -> Result<Ensemble> {
    let mut weights = cand.weights.clone();
    let mut psis = cand.psis.clone();
    consolidate(&mut weights, &mut psis, 1e-12);
    let members: Result<Vec<(f64, DensityMatrix)>> = weights
        .iter()
        .zip(&psis)
        .map(|(w, psi)| Ok((*w, PureState::normalized(psi.clone())?.projector())))
        .collect();
    Ensemble::new(members?)
}

/// Energy-constrained χ-capacity `C̄(Φ, H, E)` with a KKT-style certificate.
///
/// Strategy: maximize the Lagrangian χ − λ(⟨H⟩ − E) by alternating
/// multiplicative weight updates and Riemannian ascent on member states, and
/// drive λ by bracketing + bisection on the optimizer's average energy, warm
/// starting each solve from the neighbouring multiplier. When the bisection
/// straddles the budget, the two bracketing ensembles are blended (χ is
/// concave under ensemble mixing) to match the budget exactly.
pub fn chi_capacity(
    phi: &KrausChannel,
    c: &ConstraintSpec,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    if c.hamiltonian().dim() != phi.dim_in() {
        return Err(Error::DimMismatch {
            context: "chi_capacity Hamiltonian vs channel input",
            expected: phi.dim_in(),
            got: c.hamiltonian().dim(),
        });
    }
    let h = c.hamiltonian();
    let e_budget = c.energy();
    let floor = opts.tol.eig;
    let slack = opts.tol.energy_residual.max(1e-12);
    let mut total_iterations = 0usize;

    // Unconstrained stage: if the free maximizer already fits the budget the
    // multiplier is exactly zero.
    let free = multi_start_solve(
        phi,
        h,
        e_budget,
        0.0,
        None,
        opts.restarts,
        opts.max_iterations,
        opts.record_trace,
        opts.seed,
        floor,
        &mut total_iterations,
    )?;
    if free.energy <= e_budget + slack {
        return assemble(phi, c, 0.0, free, total_iterations, opts);
    }

    // Bracket the multiplier: the optimizer's energy is non-increasing in λ.
    let bisect_iters = (opts.max_iterations / 4).max(200);
    let mut lo = (0.0, free);
    let mut hi_lambda = 1.0;
    let mut hi: Option<(f64, Candidate)> = None;
    for _ in 0..60 {
        let cand = multi_start_solve(
            phi,
            h,
            e_budget,
            hi_lambda,
            Some(&lo.1),
            1,
            bisect_iters,
            opts.record_trace,
            opts.seed,
            floor,
            &mut total_iterations,
        )?;
        if cand.energy <= e_budget + slack {
            hi = Some((hi_lambda, cand));
            break;
        }
        lo = (hi_lambda, cand);
        hi_lambda *= 2.0;
    }
    let mut hi = hi.ok_or_else(|| Error::NoConvergence {
        detail: "failed to bracket the energy constraint multiplier".into(),
    })?;

    // Bisect λ to pin the optimizer's energy at the budget.
    for _ in 0..80 {
        if (hi.1.energy - e_budget).abs() <= slack || hi.0 - lo.0 < 1e-10 * (1.0 + hi.0) {
            break;
        }
        let mid = 0.5 * (lo.0 + hi.0);
        let warm = if (mid - lo.0) < (hi.0 - mid) { lo.1.clone() } else { hi.1.clone() };
        let cand = multi_start_solve(
            phi,
            h,
            e_budget,
            mid,
            Some(&warm),
            1,
            bisect_iters,
            opts.record_trace,
            opts.seed,
            floor,
            &mut total_iterations,
        )?;
        if cand.energy > e_budget + slack {
            lo = (mid, cand);
        } else {
            hi = (mid, cand);
        }
    }

    let lambda_star = hi.0;
    // Blend the bracketing ensembles to land on the budget exactly; concavity
    // of χ under mixing makes the blend at least as good as the chord.
    let blend = if (hi.1.energy - e_budget).abs() > slack && lo.1.energy > hi.1.energy {
        let t = ((lo.1.energy - e_budget) / (lo.1.energy - hi.1.energy)).clamp(0.0, 1.0);
        let mut weights: Vec<f64> = hi.1.weights.iter().map(|w| w * t).collect();
        weights.extend(lo.1.weights.iter().map(|w| w * (1.0 - t)));
        let mut psis = hi.1.psis.clone();
        psis.extend(lo.1.psis.iter().cloned());
        consolidate(&mut weights, &mut psis, 1e-12);
        Some(inner_solve(
            phi, h, e_budget, lambda_star, weights, psis, bisect_iters, floor, opts.record_trace,
        )?)
    } else {
        None
    };

    // Polish the winner at the final multiplier with a few extra restarts.
    let mut winner = hi.1.clone();
    if let Some(b) = blend {
        total_iterations += b.iterations;
        if b.energy <= e_budget + slack.max(1e-9) && b.chi > winner.chi {
            winner = b;
        }
    }
    let polished = multi_start_solve(
        phi,
        h,
        e_budget,
        lambda_star,
        Some(&winner.clone()),
        opts.restarts.clamp(1, 4),
        opts.max_iterations,
        opts.record_trace,
        opts.seed,
        floor,
        &mut total_iterations,
    )?;
    if polished.energy <= e_budget + slack.max(1e-9) && polished.chi >= winner.chi {
        winner = polished;
    }

    assemble(phi, c, lambda_star, winner, total_iterations, opts)
}

fn assemble(
    phi: &KrausChannel,
    c: &ConstraintSpec,
    lambda: f64,
    cand: Candidate,
    total_iterations: usize,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    let mu = candidate_to_ensemble(&cand)?;
    let value = chi_quantity_with(&mu.map(phi)?, &opts.tol);
    let certificate = certify_optimality(phi, &mu, c, lambda, opts)?;
    let feasible = c.is_satisfied_by(&mu.average_state(), opts.tol.energy_residual.max(1e-9))?;
    Ok(CapacityResult {
        value,
        lambda,
        iterations: total_iterations,
        converged: cand.converged && feasible,
        certificate: Some(certificate),
        optimizer: Optimizer::Ensemble(mu),
        history: cand.history,
    })
}

// ---------------------------------------------------------------------------
// Optimality certificate.
// ---------------------------------------------------------------------------

/// Lagrangian score of an input state against a fixed reference output:
/// f(σ) = −H(Φσ) − Tr(Φσ · ln_floor ω) − λ(Tr Hσ − E).
fn lagrangian_score(
    phi: &KrausChannel,
    ln_ref: &CMatrix,
    h: &Hamiltonian,
    lambda: f64,
    e_budget: f64,
    sigma: &CMatrix,
) -> Result<f64> {
    let a = phi.apply_op(sigma);
    let (vals, _) = hermitian_eigen(&a)?;
    let rel = -entropy_from_vals(&vals) - trace_re(&(&a * ln_ref));
    let energy = trace_re(&(h.matrix() * sigma));
    Ok(rel - lambda * (energy - e_budget))
}

/// KKT-style certificate for a candidate χ-capacity maximizer.
///
/// Every pure input must score at most the candidate's own value
/// f̄ = χ* − λ(⟨H⟩ − E); the maximum over pure inputs is estimated by
/// multi-start Riemannian ascent seeded from the candidate's members, the
/// Hamiltonian eigenbasis, and random states. Complementary slackness
/// |λ(⟨H⟩ − E)| is checked at 1e-6.
pub fn certify_optimality(
    phi: &KrausChannel,
    mu: &Ensemble,
    c: &ConstraintSpec,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<OptimalityCertificate> {
    let floor = opts.tol.eig;
    let h = c.hamiltonian();
    let e_budget = c.energy();
    let rho_bar = mu.average_state();
    let out_avg = phi.apply(&rho_bar)?;
    let (ovals, ovecs) = out_avg.eigen();
    let ln_ref = log_from_eigen(&ovals, &ovecs, floor);
    let chi_star = chi_quantity_with(&mu.map(phi)?, &opts.tol);
    let e_bar = rho_bar.expectation(h)?;
    let slackness_residual = (lambda * (e_bar - e_budget)).abs();
    let rhs = chi_star - lambda * (e_bar - e_budget);

    // Members carrying non-negligible weight must achieve the common score.
    let mut member_deviation = 0.0_f64;
    for (w, state) in mu.iter() {
        if w < 1e-6 {
            continue;
        }
        let f = lagrangian_score(phi, &ln_ref, h, lambda, e_budget, state.matrix())?;
        member_deviation = member_deviation.max((f - rhs).abs());
    }

    // Probe ascent over pure states.
    let d = phi.dim_in();
    let mut starts: Vec<CVector> = Vec::new();
    for (_, state) in mu.iter() {
        let (vals, vecs) = state.eigen();
        if vals[0] > 0.5 {
            starts.push(vecs.column(0).into_owned());
        }
    }
    let (_, h_vecs) = h.eigen();
    for j in 0..d {
        starts.push(h_vecs.column(j).into_owned());
    }
    let mut rng = restart_rng(opts.seed, 0xCE27);
    let n_probe_restarts = starts.len() + opts.restarts;
    for _ in 0..opts.restarts {
        starts.push(random_unit_vector(&mut rng, d).vector().clone());
    }

    let mut f_max = f64::NEG_INFINITY;
    for start in starts {
        let mut psi = unit(&start)?;
        let mut f = lagrangian_score(phi, &ln_ref, h, lambda, e_budget, &(&psi * psi.adjoint()))?;
        let mut step = 0.25_f64;
        for _ in 0..400 {
            let a = phi.apply_op(&(&psi * psi.adjoint()));
            let (avals, avecs) = hermitian_eigen(&a)?;
            let log_a = log_from_eigen(&avals, &avecs, floor);
            let ambient: CVector =
                (phi.adjoint_apply(&(log_a - &ln_ref)) - h.matrix() * C64::new(lambda, 0.0))
                    * &psi;
            let t = sphere_tangent(&psi, &ambient);
            let tsq = t.norm_squared();
            if tsq.sqrt() < 1e-10 {
                break;
            }
            step = (step * 2.0).min(1.0);
            let mut accepted = false;
            while step > 1e-16 {
                let cand = unit(&(&psi + &t * C64::new(step, 0.0)))?;
                let fc =
                    lagrangian_score(phi, &ln_ref, h, lambda, e_budget, &(&cand * cand.adjoint()))?;
                if fc >= f + 1e-4 * step * tsq {
                    psi = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        f_max = f_max.max(f);
    }

    let lagrangian_gap = f_max - rhs;
    let passed = lagrangian_gap <= opts.tol.cert
        && member_deviation <= opts.tol.cert
        && slackness_residual <= 1e-6;
    Ok(OptimalityCertificate {
        lagrangian_gap,
        member_deviation,
        slackness_residual,
        n_probe_restarts,
        passed,
    })
}
