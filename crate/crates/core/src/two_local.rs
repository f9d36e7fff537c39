//! 2-local derivations at window scale.
//!
//! A 2-local derivation is an arbitrary map `Delta` such that every pair `(x, y)`
//! admits a genuine derivation agreeing with `Delta` at `x` and `y`. Here `Delta`
//! is a finite table ([`TwoLocalAssignment`]) and [`reduce_by_theorem`] runs the
//! constructive reduction: subtract the witness at `(L_0, L_1)`, check that the
//! remainder kills every `L_i`, read off `lambda` from `I_0`, subtract
//! `lambda D1`, and check that nothing is left on the samples.
//!
//! Everything is certified only on the supplied keys and samples.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Basis, CocycleSign, Element};
use crate::derivation::{
    apply_outer, constraint_system, ConstraintSystem, DerivationError, DerivationParams, OuterKind,
    ParamSlot,
};
use crate::linalg::SolutionSpace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoLocalError {
    #[error("assignment has no entry for `{0}`")]
    MissingKey(String),
    #[error("no witness derivation with support inside window {window} agrees at ({x}, {y})")]
    NoWitnessAtWindow { window: i64, x: String, y: String },
    #[error("lemma kernel suite needs window >= 3, got {0}")]
    WindowTooSmall(i64),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    FromTable,
    Synthetic(String),
}

/// A finite table `x -> Delta(x)`. No linearity is assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLocalAssignment<S: Ord> {
    entries: BTreeMap<Element<S>, Element<S>>,
    pub provenance: Provenance,
}

impl<S: Scalar + Ord> TwoLocalAssignment<S> {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            entries: BTreeMap::new(),
            provenance,
        }
    }

    /// Inserts or replaces an entry, returning the previous image.
    pub fn insert(&mut self, x: Element<S>, image: Element<S>) -> Option<Element<S>> {
        self.entries.insert(x, image)
    }

    pub fn get(&self, x: &Element<S>) -> Option<&Element<S>> {
        self.entries.get(x)
    }

    pub fn contains(&self, x: &Element<S>) -> bool {
        self.entries.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element<S>, &Element<S>)> {
        self.entries.iter()
    }

    fn lookup(&self, x: &Element<S>) -> Result<&Element<S>, TwoLocalError> {
        self.get(x)
            .ok_or_else(|| TwoLocalError::MissingKey(x.to_string()))
    }
}

/// A derivation agreeing with an assignment on a pair of keys.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCertificate<S> {
    pub pair: (Element<S>, Element<S>),
    pub params: DerivationParams<S>,
    pub window: i64,
}

impl<S: Scalar + Ord> WitnessCertificate<S> {
    /// Re-checks both defining equations against the assignment.
    pub fn verify(&self, assignment: &TwoLocalAssignment<S>, sign: CocycleSign) -> bool {
        [&self.pair.0, &self.pair.1].into_iter().all(|x| {
            assignment
                .get(x)
                .is_some_and(|dx| self.params.apply(x, sign) == *dx)
        })
    }
}

/// Solution space of the witness equations at a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSearch<S> {
    pub pair: (Element<S>, Element<S>),
    pub constraints: ConstraintSystem<S>,
    pub space: SolutionSpace<S>,
}

impl<S: Scalar> WitnessSearch<S> {
    pub fn is_solved(&self) -> bool {
        self.space.is_solved()
    }

    pub fn window(&self) -> i64 {
        self.constraints.layout.window()
    }

    /// The particular solution (all free parameters zero), modulo center.
    pub fn certificate(&self) -> Option<WitnessCertificate<S>> {
        self.is_solved().then(|| WitnessCertificate {
            pair: self.pair.clone(),
            params: self
                .constraints
                .layout
                .to_params(&self.space.particular)
                .modulo_center(),
            window: self.window(),
        })
    }

    /// Kernel directions as parameter sets.
    pub fn kernel_params(&self) -> Vec<DerivationParams<S>> {
        self.space
            .kernel_basis
            .iter()
            .map(|k| self.constraints.layout.to_params(k))
            .collect()
    }
}

/// Derivations with parameters inside `window` that agree with `assignment` at
/// `x` and `y`. An inconsistent space only rules out witnesses at this window.
pub fn find_witness<S: Scalar + Ord>(
    assignment: &TwoLocalAssignment<S>,
    x: &Element<S>,
    y: &Element<S>,
    window: i64,
    sign: CocycleSign,
) -> Result<WitnessSearch<S>, TwoLocalError> {
    let dx = assignment.lookup(x)?.clone();
    let dy = assignment.lookup(y)?.clone();
    let constraints = constraint_system(&[(x.clone(), dx), (y.clone(), dy)], Some(window), sign)?;
    let space = constraints.solve();
    Ok(WitnessSearch {
        pair: (x.clone(), y.clone()),
        constraints,
        space,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityViolation<S> {
    pub factor: S,
    pub x: Element<S>,
    /// `k * Delta(x)`
    pub expected: Element<S>,
    /// `Delta(k x)`
    pub actual: Element<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport<S> {
    pub checked: usize,
    pub violations: Vec<HomogeneityViolation<S>>,
}

impl<S> HomogeneityReport<S> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `Delta(k x) = k Delta(x)` for each `(k, x)`; both `x` and `k x` must
/// be keys.
pub fn homogeneity_check<S: Scalar + Ord>(
    assignment: &TwoLocalAssignment<S>,
    samples: &[(S, Element<S>)],
) -> Result<HomogeneityReport<S>, TwoLocalError> {
    let mut violations = Vec::new();
    for (k, x) in samples {
        let dx = assignment.lookup(x)?;
        let actual = assignment.lookup(&x.scale(k))?;
        let expected = dx.scale(k);
        if *actual != expected {
            violations.push(HomogeneityViolation {
                factor: k.clone(),
                x: x.clone(),
                expected,
                actual: actual.clone(),
            });
        }
    }
    Ok(HomogeneityReport {
        checked: samples.len(),
        violations,
    })
}

/// Pipeline stage at which a reduction was refuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefutationStep {
    /// `Delta - witness` does not vanish on some `L_i`.
    VirasoroVanishing,
    /// `(Delta - witness)(I_0)` is not a multiple of `I_0`.
    ZeroModeShape,
    /// `Delta - witness - lambda D1` is nonzero on a sample.
    SampleResidual,
}

impl fmt::Display for RefutationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefutationStep::VirasoroVanishing => "virasoro-vanishing",
            RefutationStep::ZeroModeShape => "zero-mode-shape",
            RefutationStep::SampleResidual => "sample-residual",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    Certified,
    Refuted {
        step: RefutationStep,
        element: Element<S>,
        residual: Element<S>,
    },
}

impl<S> Verdict<S> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCertificate<S> {
    pub window: i64,
    pub sign: CocycleSign,
    pub witness01: WitnessCertificate<S>,
    /// `None` when the pipeline stopped before reading it off `I_0`.
    pub lambda: Option<S>,
    /// `(sample, Delta(sample) - witness(sample) - lambda D1(sample))`.
    pub residual_report: Vec<(Element<S>, Element<S>)>,
    pub verdict: Verdict<S>,
}

impl<S: Scalar> ReductionCertificate<S> {
    /// `witness01 + lambda D1` as a single parameter set.
    pub fn reconstructed(&self) -> DerivationParams<S> {
        let mut p = self.witness01.params.clone();
        if let Some(l) = &self.lambda {
            p.alpha = p.alpha + l.clone();
        }
        p
    }
}

/// Independent soundness check: the reconstructed derivation equals `Delta`
/// on every key of the assignment.
pub fn verify_reduction<S: Scalar + Ord>(
    assignment: &TwoLocalAssignment<S>,
    certificate: &ReductionCertificate<S>,
) -> bool {
    let p = certificate.reconstructed();
    certificate.verdict.is_certified()
        && assignment
            .iter()
            .all(|(x, dx)| p.apply(x, certificate.sign) == *dx)
}

/// The reduction `Delta = Delta_{L_0,L_1} + lambda D1` checked at window scale.
pub fn reduce_by_theorem<S: Scalar + Ord>(
    assignment: &TwoLocalAssignment<S>,
    window: i64,
    samples: &[Element<S>],
    sign: CocycleSign,
) -> Result<ReductionCertificate<S>, TwoLocalError> {
    let l0 = Element::l(0);
    let l1 = Element::l(1);
    let i0 = Element::i(0);
    let mut required: Vec<Element<S>> = vec![l0.clone(), l1.clone(), i0.clone()];
    required.extend(virasoro_order(window).map(Element::l));
    required.extend(samples.iter().cloned());
    for key in &required {
        assignment.lookup(key)?;
    }

    let search = find_witness(assignment, &l0, &l1, window, sign)?;
    let Some(witness01) = search.certificate() else {
        return Err(TwoLocalError::NoWitnessAtWindow {
            window,
            x: l0.to_string(),
            y: l1.to_string(),
        });
    };
    let w = &witness01.params;
    let stage1 = |x: &Element<S>| -> Result<Element<S>, TwoLocalError> {
        Ok(assignment.lookup(x)? - &w.apply(x, sign))
    };

    let mut cert = ReductionCertificate {
        window,
        sign,
        witness01: witness01.clone(),
        lambda: None,
        residual_report: Vec::new(),
        verdict: Verdict::Certified,
    };

    for i in virasoro_order(window) {
        let x = Element::l(i);
        let r = stage1(&x)?;
        if !r.is_zero() {
            cert.verdict = Verdict::Refuted {
                step: RefutationStep::VirasoroVanishing,
                element: x,
                residual: r,
            };
            return Ok(cert);
        }
    }

    let r0 = stage1(&i0)?;
    let lambda = r0.coeff(Basis::I(0));
    let shape_defect = &r0 - &i0.scale(&lambda);
    cert.lambda = Some(lambda.clone());
    if !shape_defect.is_zero() {
        cert.verdict = Verdict::Refuted {
            step: RefutationStep::ZeroModeShape,
            element: i0,
            residual: shape_defect,
        };
        return Ok(cert);
    }

    for s in samples {
        let mut r = stage1(s)?;
        r.add_scaled(&-lambda.clone(), &apply_outer(OuterKind::D1, s));
        if !r.is_zero() && cert.verdict.is_certified() {
            cert.verdict = Verdict::Refuted {
                step: RefutationStep::SampleResidual,
                element: s.clone(),
                residual: r.clone(),
            };
        }
        cert.residual_report.push((s.clone(), r));
    }
    Ok(cert)
}

/// `0, 1, -1, 2, -2, ...` up to `|i| <= window`.
fn virasoro_order(window: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=window).flat_map(|i| [i, -i]))
}

/// Which single-constraint kernel a [`KernelCheck`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelTarget {
    /// `D(L_i) = 0`
    Virasoro(i64),
    /// `D(I_0) = 0`
    ZeroMode,
    /// `D(L_{2p} + I_p) = 0`
    Mixed(i64),
}

impl KernelTarget {
    pub fn element<S: Scalar>(self) -> Element<S> {
        match self {
            KernelTarget::Virasoro(i) => Element::l(i),
            KernelTarget::ZeroMode => Element::i(0),
            KernelTarget::Mixed(p) => Element::l(2 * p) + Element::i(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCheck {
    pub target: KernelTarget,
    pub kernel_dim: usize,
    /// Outer slots (`alpha`, `beta`, `gamma`) pinned to zero by the constraint.
    pub forced_outer: Vec<ParamSlot>,
    /// Total number of unknowns pinned to zero.
    pub forced_total: usize,
    /// `(beta, gamma)` direction tied by the constraint, when there is one.
    pub outer_ratio: Option<(i64, i64)>,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub window: i64,
    pub sign: CocycleSign,
    pub unknowns: usize,
    pub checks: Vec<KernelCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.mismatches.is_empty())
    }
}

/// Kernels of `D(x) = 0` for `x = L_i` (`|i| <= M`), `I_0` and `L_{2p} + I_p`
/// (`1 <= |p|`, `2|p| <= M`), compared against the expected witness shapes.
pub fn lemma_kernel_suite<S: Scalar>(
    window: i64,
    sign: CocycleSign,
) -> Result<LemmaReport, TwoLocalError> {
    if window < 3 {
        return Err(TwoLocalError::WindowTooSmall(window));
    }
    let mut targets: Vec<KernelTarget> = (-window..=window).map(KernelTarget::Virasoro).collect();
    targets.push(KernelTarget::ZeroMode);
    targets.extend(
        (-window / 2..=window / 2)
            .filter(|&p| p != 0)
            .map(KernelTarget::Mixed),
    );

    let mut unknowns = 0;
    let mut checks = Vec::with_capacity(targets.len());
    for target in targets {
        let cs =
            constraint_system::<S>(&[(target.element(), Element::zero())], Some(window), sign)?;
        unknowns = cs.layout.len();
        let sol = cs.solve();
        let idx = |s: ParamSlot| cs.layout.index_of(s).expect("outer slots always present");
        let (alpha, beta, gamma) = (
            idx(ParamSlot::Alpha),
            idx(ParamSlot::Beta),
            idx(ParamSlot::Gamma),
        );
        let forced = sol.forced_zero();
        let forced_outer: Vec<ParamSlot> = [ParamSlot::Alpha, ParamSlot::Beta, ParamSlot::Gamma]
            .into_iter()
            .filter(|s| forced.contains(&idx(*s)))
            .collect();

        // Every kernel vector satisfies tb * beta + tg * gamma = 0 and at least one
        // of them moves (beta, gamma).
        let tie_holds = |tb: i64, tg: i64| {
            let (tb, tg) = (S::from_int(tb.into()), S::from_int(tg.into()));
            let all = sol
                .kernel_basis
                .iter()
                .all(|k| (tb.clone() * k[beta].clone() + tg.clone() * k[gamma].clone()).is_zero());
            let moves = sol
                .kernel_basis
                .iter()
                .any(|k| !k[beta].is_zero() || !k[gamma].is_zero());
            all && moves
        };

        let mut mismatches = Vec::new();
        let mut outer_ratio = None;
        match target {
            KernelTarget::Virasoro(0) => {
                if sol.nullity() != 2 {
                    mismatches.push(format!("kernel dimension {} != 2", sol.nullity()));
                }
                if !(forced.contains(&beta) && forced.contains(&gamma)) {
                    mismatches.push("beta and gamma not both forced to 0".into());
                }
            }
            KernelTarget::Virasoro(i) => {
                if sol.nullity() != 3 {
                    mismatches.push(format!("kernel dimension {} != 3", sol.nullity()));
                }
                let ratio = (-(i + 1), i);
                outer_ratio = Some(ratio);
                if !tie_holds(i, i + 1) {
                    mismatches.push(format!("beta:gamma not tied as {}:{}", ratio.0, ratio.1));
                }
            }
            KernelTarget::ZeroMode => {
                if forced != vec![alpha, beta] {
                    let names: Vec<String> = forced
                        .iter()
                        .map(|&j| cs.layout.slots()[j].to_string())
                        .collect();
                    mismatches.push(format!(
                        "forced set {{{}}} != {{alpha, beta}}",
                        names.join(", ")
                    ));
                }
                if sol.nullity() + 2 != cs.layout.len() {
                    mismatches.push(format!(
                        "kernel dimension {} != {}",
                        sol.nullity(),
                        cs.layout.len() - 2
                    ));
                }
            }
            KernelTarget::Mixed(p) => {
                if !forced.contains(&alpha) {
                    mismatches.push("alpha not forced to 0".into());
                }
                let ratio = (2 * p + 1, -2 * p);
                outer_ratio = Some(ratio);
                if !tie_holds(2 * p, 2 * p + 1) {
                    mismatches.push(format!("beta:gamma not tied as {}:{}", ratio.0, ratio.1));
                }
                let a = idx(ParamSlot::A(2 * p));
                let b = idx(ParamSlot::B(p));
                if !sol.kernel_basis.iter().all(|k| k[a] == k[b]) {
                    mismatches.push(format!("a[{}] and b[{}] not tied", 2 * p, p));
                }
            }
        }

        checks.push(KernelCheck {
            target,
            kernel_dim: sol.nullity(),
            forced_outer,
            forced_total: forced.len(),
            outer_ratio,
            mismatches,
        });
    }

    Ok(LemmaReport {
        window,
        sign,
        unknowns,
        checks,
    })
}

/// Piecewise non-additive rule: `D1(x)` if `x` has a nonzero `marker`
/// component, `2 D1(x)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonAdditiveRule {
    pub marker: Basis,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticKind<S> {
    /// `Delta = realize(params)`.
    HiddenDerivation(DerivationParams<S>),
    /// `realize(params)` multiplied by `factor` on keys with a `marker` component.
    Scaled {
        params: DerivationParams<S>,
        marker: Basis,
        factor: S,
    },
    NonAdditive(NonAdditiveRule),
}

impl<S: Scalar> SyntheticKind<S> {
    pub fn descriptor(&self) -> String {
        match self {
            SyntheticKind::HiddenDerivation(_) => "hidden-derivation".into(),
            SyntheticKind::Scaled { marker, factor, .. } => {
                format!("scaled(factor {factor} on keys containing {marker})")
            }
            SyntheticKind::NonAdditive(rule) => {
                format!("non-additive(D1 if {} present, else 2*D1)", rule.marker)
            }
        }
    }

    pub fn image(&self, x: &Element<S>, sign: CocycleSign) -> Element<S> {
        match self {
            SyntheticKind::HiddenDerivation(p) => p.apply(x, sign),
            SyntheticKind::Scaled {
                params,
                marker,
                factor,
            } => {
                let img = params.apply(x, sign);
                if x.contains(*marker) {
                    img.scale(factor)
                } else {
                    img
                }
            }
            SyntheticKind::NonAdditive(rule) => {
                let img = apply_outer(OuterKind::D1, x);
                if x.contains(rule.marker) {
                    img
                } else {
                    img.scale(&S::from_int(2))
                }
            }
        }
    }
}

pub fn synthesize_assignment<S: Scalar + Ord>(
    kind: &SyntheticKind<S>,
    keys: &[Element<S>],
    sign: CocycleSign,
) -> TwoLocalAssignment<S> {
    let mut out = TwoLocalAssignment::new(Provenance::Synthetic(kind.descriptor()));
    for k in keys {
        out.insert(k.clone(), kind.image(k, sign));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::window_basis;
    use crate::Coefficient;

    type E = Element<Coefficient>;
    type P = DerivationParams<Coefficient>;
    const S: CocycleSign = CocycleSign::Consistent;

    fn q(n: i64) -> Coefficient {
        Coefficient::from_int(n.into())
    }

    fn basis_keys(n: i64) -> Vec<E> {
        window_basis(n).into_iter().map(E::basis).collect()
    }

    #[test]
    fn witness_for_d1_at_l0_i0() {
        let a = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_alpha(q(1))),
            &basis_keys(3),
            S,
        );
        let w = find_witness(&a, &E::l(0), &E::i(0), 3, S).unwrap();
        assert!(w.is_solved());
        let cert = w.certificate().unwrap();
        assert_eq!(cert.params, P::zero().with_alpha(q(1)));
        assert!(cert.verify(&a, S));
        assert_eq!(w.space.nullity(), 1);
        assert_eq!(w.kernel_params(), vec![P::zero().with_a(0, q(1))]);
    }

    #[test]
    fn witness_for_inner_map() {
        let a = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_a(1, q(1))),
            &basis_keys(3),
            S,
        );
        let w = find_witness(&a, &E::l(0), &E::l(2), 3, S).unwrap();
        let cert = w.certificate().unwrap();
        assert!(cert.verify(&a, S));
        assert_eq!(cert.params.apply(&E::l(2), S), bracket_l1(&E::l(2)));
    }

    fn bracket_l1(x: &E) -> E {
        crate::algebra::bracket(&E::l(1), x, S)
    }

    #[test]
    fn no_witness_at_window_zero() {
        let mut a = TwoLocalAssignment::new(Provenance::FromTable);
        a.insert(E::l(0), E::l(0));
        let w = find_witness(&a, &E::l(0), &E::l(0), 0, S).unwrap();
        assert!(!w.is_solved());
        assert!(w.certificate().is_none());
    }

    #[test]
    fn missing_key() {
        let a = TwoLocalAssignment::<Coefficient>::new(Provenance::FromTable);
        assert_eq!(
            find_witness(&a, &E::l(0), &E::l(1), 2, S).unwrap_err(),
            TwoLocalError::MissingKey("L[0]".into())
        );
    }

    #[test]
    fn homogeneity() {
        let mut a = TwoLocalAssignment::new(Provenance::FromTable);
        a.insert(E::l(1), E::i(1));
        a.insert(E::term(q(2), Basis::L(1)), E::term(q(3), Basis::I(1)));
        a.insert(E::zero(), E::zero());
        let r = homogeneity_check(&a, &[(q(2), E::l(1))]).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].expected, E::term(q(2), Basis::I(1)));
        let r = homogeneity_check(&a, &[(q(0), E::l(1))]).unwrap();
        assert!(r.passed());

        let t = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_beta(q(1))),
            &[E::l(1), E::term(q(2), Basis::L(1))],
            S,
        );
        assert!(homogeneity_check(&t, &[(q(2), E::l(1))]).unwrap().passed());
        assert!(homogeneity_check(&t, &[(q(3), E::l(1))]).is_err());
    }

    #[test]
    fn d2_is_absorbed_by_witness() {
        let keys = basis_keys(4);
        let a = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_beta(q(1))),
            &keys,
            S,
        );
        let cert = reduce_by_theorem(&a, 4, &keys, S).unwrap();
        assert!(cert.verdict.is_certified());
        assert_eq!(cert.witness01.params, P::zero().with_beta(q(1)));
        assert_eq!(cert.lambda, Some(q(0)));
        assert!(verify_reduction(&a, &cert));
    }

    #[test]
    fn hidden_inner_plus_d1() {
        let keys = basis_keys(6);
        let p = P::zero().with_a(2, q(1)).with_alpha(q(3));
        let a = synthesize_assignment(&SyntheticKind::HiddenDerivation(p.clone()), &keys, S);
        let cert = reduce_by_theorem(&a, 6, &keys, S).unwrap();
        assert!(cert.verdict.is_certified());
        assert_eq!(cert.lambda, Some(q(3)));
        assert_eq!(cert.witness01.params, P::zero().with_a(2, q(1)));
        assert!(cert.reconstructed().eq_mod_center(&p));
    }

    #[test]
    fn non_additive_is_refuted() {
        let keys = basis_keys(3);
        let a = synthesize_assignment(
            &SyntheticKind::NonAdditive(NonAdditiveRule {
                marker: Basis::I(1),
            }),
            &keys,
            S,
        );
        let cert = reduce_by_theorem(&a, 3, &keys, S).unwrap();
        assert_eq!(cert.lambda, Some(q(2)));
        match &cert.verdict {
            Verdict::Refuted {
                step,
                element,
                residual,
            } => {
                assert_eq!(*step, RefutationStep::SampleResidual);
                assert_eq!(*element, E::i(1));
                assert_eq!(*residual, -E::i(1));
            }
            v => panic!("{v:?}"),
        }
        assert!(!verify_reduction(&a, &cert));
    }

    #[test]
    fn step_three_refutation() {
        let keys = basis_keys(3);
        let mut a = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_a(1, q(1))),
            &keys,
            S,
        );
        a.insert(E::l(2), E::l(5));
        let cert = reduce_by_theorem(&a, 3, &keys, S).unwrap();
        match cert.verdict {
            Verdict::Refuted { step, element, .. } => {
                assert_eq!(step, RefutationStep::VirasoroVanishing);
                assert_eq!(element, E::l(2));
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(cert.lambda, None);
    }

    #[test]
    fn zero_mode_shape_refutation() {
        let keys = basis_keys(2);
        let mut a = synthesize_assignment(&SyntheticKind::HiddenDerivation(P::zero()), &keys, S);
        a.insert(E::i(0), E::i(0) + E::i(1));
        let cert = reduce_by_theorem(&a, 2, &keys, S).unwrap();
        assert!(matches!(
            cert.verdict,
            Verdict::Refuted {
                step: RefutationStep::ZeroModeShape,
                ..
            }
        ));
    }

    #[test]
    fn no_witness_error() {
        let keys = basis_keys(2);
        let mut a = synthesize_assignment(&SyntheticKind::HiddenDerivation(P::zero()), &keys, S);
        a.insert(E::l(1), E::l(9));
        assert!(matches!(
            reduce_by_theorem(&a, 2, &keys, S),
            Err(TwoLocalError::NoWitnessAtWindow { window: 2, .. })
        ));
    }

    #[test]
    fn scaled_fixture_images() {
        let kind = SyntheticKind::Scaled {
            params: P::zero().with_alpha(q(1)),
            marker: Basis::I(1),
            factor: q(2),
        };
        let a = synthesize_assignment(&kind, &[E::i(1), E::i(2)], S);
        assert_eq!(a.get(&E::i(1)).unwrap(), &E::term(q(2), Basis::I(1)));
        assert_eq!(a.get(&E::i(2)).unwrap(), &E::i(2));
        let a = synthesize_assignment(
            &SyntheticKind::HiddenDerivation(P::zero().with_alpha(q(1))),
            &[E::l(0), E::i(0)],
            S,
        );
        assert!(a.get(&E::l(0)).unwrap().is_zero());
        assert_eq!(a.get(&E::i(0)).unwrap(), &E::i(0));
    }

    #[test]
    fn lemma_suite_window_five() {
        let r = lemma_kernel_suite::<Coefficient>(5, S).unwrap();
        assert!(
            r.passed(),
            "{:?}",
            r.checks.iter().find(|c| !c.mismatches.is_empty())
        );
        assert_eq!(r.unknowns, 24);
        let l2 = r
            .checks
            .iter()
            .find(|c| c.target == KernelTarget::Virasoro(2))
            .unwrap();
        assert_eq!(l2.kernel_dim, 3);
        assert_eq!(l2.outer_ratio, Some((-3, 2)));
        let i0 = r
            .checks
            .iter()
            .find(|c| c.target == KernelTarget::ZeroMode)
            .unwrap();
        assert_eq!(i0.kernel_dim, 22);
        assert_eq!(i0.forced_outer, vec![ParamSlot::Alpha, ParamSlot::Beta]);
        assert!(lemma_kernel_suite::<Coefficient>(2, S).is_err());
    }
}
