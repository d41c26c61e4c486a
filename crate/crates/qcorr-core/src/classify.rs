//! Full hierarchy classification: run every structure predicate, band the
//! outcomes into tri-state flags, enforce the inclusion chain
//! product ⊆ zero-disturbance ⊆ CQ/QC ⊆ strong-factorization ⊆ separable ⊆ PPT,
//! and produce a separability verdict with the reason recorded.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::criteria::{is_cq, is_ppt, is_qc, is_zero_min_a, is_zero_min_b, product_residual};
use crate::error::Error;
use crate::measures::{discord_a, discord_b, gmqd_a, gmqd_b, min_a, min_b, MeasureOpts};
use crate::sppt::{
    extract_separable_ensemble, is_ssppt, separability_2xn, SeparabilityVerdict,
    SeparableEnsemble, Side,
};
use crate::state::BipartiteState;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Three-valued verdict for a numerical predicate: `Yes` within tolerance,
/// `Marginal` within ten times the tolerance (the explicit gray zone), and
/// `No` beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    Marginal,
    No,
}

impl TriState {
    /// Band a residual against a tolerance; non-finite residuals are `No`.
    pub fn from_residual(residual: f64, tolerance: f64) -> Self {
        if residual <= tolerance {
            TriState::Yes
        } else if residual <= 10.0 * tolerance {
            TriState::Marginal
        } else {
            TriState::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }

    /// Stable lowercase token used in reports.
    pub fn token(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::Marginal => "marginal",
            TriState::No => "no",
        }
    }
}

impl core::fmt::Display for TriState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

/// Residual and tolerance behind one flag, for auditability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagEvidence {
    pub residual: f64,
    pub tolerance: f64,
}

/// Residuals behind all eight flags, in report order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evidence {
    pub product: FlagEvidence,
    pub zero_min_a: FlagEvidence,
    pub zero_min_b: FlagEvidence,
    pub cq: FlagEvidence,
    pub qc: FlagEvidence,
    pub ssppt_a: FlagEvidence,
    pub ssppt_b: FlagEvidence,
    pub ppt: FlagEvidence,
}

/// Why a state was called separable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparableReason {
    /// Pure and PPT — equivalent to being a product state.
    PurePpt,
    /// A verified strong-factorization decomposition exists.
    SspptDecomposition,
    /// PPT in 2⊗2, 2⊗3, or 3⊗2, where PPT is decisive.
    PptSmallDims,
    /// The qubit-side block-ordering construction produced a verified
    /// ensemble.
    BlockOrdering,
}

impl SeparableReason {
    pub fn token(self) -> &'static str {
        match self {
            SeparableReason::PurePpt => "pure-ppt",
            SeparableReason::SspptDecomposition => "ssppt-decomposition",
            SeparableReason::PptSmallDims => "ppt-small-dims",
            SeparableReason::BlockOrdering => "block-ordering",
        }
    }
}

/// Why a state was called entangled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntangledReason {
    /// Negative partial transpose.
    Npt,
    /// Pure with Schmidt rank above one (manifested as a negative partial
    /// transpose).
    PureNpt,
}

impl EntangledReason {
    pub fn token(self) -> &'static str {
        match self {
            EntangledReason::Npt => "npt",
            EntangledReason::PureNpt => "pure-npt",
        }
    }
}

/// Separability verdict with its justification. `Unknown` is first-class:
/// the sufficient rules not firing never implies entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparabilityCall {
    Separable(SeparableReason),
    Entangled(EntangledReason),
    Unknown,
}

impl SeparabilityCall {
    /// Coarse label: separable / entangled / unknown.
    pub fn label(self) -> &'static str {
        match self {
            SeparabilityCall::Separable(_) => "separable",
            SeparabilityCall::Entangled(_) => "entangled",
            SeparabilityCall::Unknown => "unknown",
        }
    }

    /// The justification token, empty for `Unknown`.
    pub fn reason_token(self) -> &'static str {
        match self {
            SeparabilityCall::Separable(r) => r.token(),
            SeparabilityCall::Entangled(r) => r.token(),
            SeparabilityCall::Unknown => "",
        }
    }
}

/// Optional variational-measure values attached to a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSummary {
    pub min_a: f64,
    pub min_b: f64,
    pub gmqd_a: f64,
    pub gmqd_b: f64,
    /// `None` when the measured factor exceeds the supported dimension.
    pub discord_a: Option<f64>,
    pub discord_b: Option<f64>,
}

/// Knobs for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOpts {
    /// Structure tolerance for all predicates and factorizations.
    pub tol: f64,
    /// Positivity tolerance for the partial transpose (tighter, since
    /// eigenvalues are resolved more accurately than factorizations).
    pub ppt_tol: f64,
    /// Attach variational measure values.
    pub include_measures: bool,
    /// Attach an explicit separable ensemble when one backs the verdict.
    pub include_ensemble: bool,
    /// Optimizer settings for the measures.
    pub measure_opts: MeasureOpts,
}

impl Default for ClassifyOpts {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            ppt_tol: 1e-9,
            include_measures: false,
            include_ensemble: false,
            measure_opts: MeasureOpts::default(),
        }
    }
}

/// The full classification of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Purity within the structure tolerance.
    pub pure: bool,
    pub product: TriState,
    pub zero_min_a: TriState,
    pub zero_min_b: TriState,
    pub cq: TriState,
    pub qc: TriState,
    /// Strong factorization with blocks indexed by H_B (coefficients on
    /// H_A).
    pub ssppt_a: TriState,
    /// Strong factorization with blocks indexed by H_A (coefficients on
    /// H_B).
    pub ssppt_b: TriState,
    pub ppt: TriState,
    pub evidence: Evidence,
    pub separability: SeparabilityCall,
    /// Chain-consistency downgrades applied (each also gets a warning).
    pub downgrades: usize,
    pub warnings: Vec<String>,
    pub measures: Option<MeasureSummary>,
    pub ensemble: Option<SeparableEnsemble>,
}

const FLAG_NAMES: [&str; 8] = [
    "product",
    "zero_min_a",
    "zero_min_b",
    "cq",
    "qc",
    "ssppt_a",
    "ssppt_b",
    "ppt",
];

/// Inclusion-chain edges as (stricter, weaker) flag indices: a `Yes` on
/// the stricter side with a `No` on the weaker side is a hard violation.
const CHAIN_EDGES: [(usize, usize); 8] = [
    (0, 1), // product ⇒ zero_min_a
    (0, 2), // product ⇒ zero_min_b
    (1, 3), // zero_min_a ⇒ cq
    (2, 4), // zero_min_b ⇒ qc
    (3, 5), // cq ⇒ ssppt_a
    (4, 6), // qc ⇒ ssppt_b
    (5, 7), // ssppt_a ⇒ ppt
    (6, 7), // ssppt_b ⇒ ppt
];

/// Run every predicate, band the results, repair chain inconsistencies by
/// downgrading the stricter flag to `Marginal` (with a warning), and call
/// separability by the first applicable rule:
/// negative partial transpose → entangled; pure and PPT → separable;
/// verified strong factorization on either side → separable with the
/// ensemble available; PPT in 2⊗2/2⊗3/3⊗2 → separable; qubit-side
/// block-ordering construction → separable; otherwise unknown.
pub fn classify(s: &BipartiteState, opts: &ClassifyOpts) -> Result<ClassificationReport, Error> {
    let tol = opts.tol;
    let (da, db) = (s.dim_a(), s.dim_b());
    let pure = s.is_pure(tol);

    let ppt_witness = is_ppt(s, opts.ppt_tol)?;
    let ppt_residual = (-ppt_witness.min_eigenvalue).max(0.0);

    let prod_residual = product_residual(s);
    let cq_witness = is_cq(s, tol)?;
    let qc_witness = is_qc(s, tol)?;
    let zma = is_zero_min_a(s, tol)?;
    let zmb = is_zero_min_b(s, tol)?;
    // Flag naming follows the factor the coefficients act on: `ssppt_a`
    // is the factorization whose per-row coefficient family lives on H_A.
    let ssppt_a_report = is_ssppt(s, Side::UpToA, tol)?;
    let ssppt_b_report = is_ssppt(s, Side::UpToB, tol)?;

    let zma_residual = zma.cq.max_violation.max(zma.max_sigma_distance);
    let zmb_residual = zmb.cq.max_violation.max(zmb.max_sigma_distance);
    let ssppt_a_residual = ssppt_a_report.sppt_residual.max(ssppt_a_report.max_commutator);
    let ssppt_b_residual = ssppt_b_report.sppt_residual.max(ssppt_b_report.max_commutator);

    let evidence = Evidence {
        product: FlagEvidence {
            residual: prod_residual,
            tolerance: tol,
        },
        zero_min_a: FlagEvidence {
            residual: zma_residual,
            tolerance: tol,
        },
        zero_min_b: FlagEvidence {
            residual: zmb_residual,
            tolerance: tol,
        },
        cq: FlagEvidence {
            residual: cq_witness.max_violation,
            tolerance: tol,
        },
        qc: FlagEvidence {
            residual: qc_witness.max_violation,
            tolerance: tol,
        },
        ssppt_a: FlagEvidence {
            residual: ssppt_a_residual,
            tolerance: tol,
        },
        ssppt_b: FlagEvidence {
            residual: ssppt_b_residual,
            tolerance: tol,
        },
        ppt: FlagEvidence {
            residual: ppt_residual,
            tolerance: opts.ppt_tol,
        },
    };

    let mut flags = [
        TriState::from_residual(prod_residual, tol),
        TriState::from_residual(zma_residual, tol),
        TriState::from_residual(zmb_residual, tol),
        TriState::from_residual(cq_witness.max_violation, tol),
        TriState::from_residual(qc_witness.max_violation, tol),
        TriState::from_residual(ssppt_a_residual, tol),
        TriState::from_residual(ssppt_b_residual, tol),
        TriState::from_residual(ppt_residual, opts.ppt_tol),
    ];

    // Chain repair: the inclusions hold unconditionally, so a certified-true
    // stricter flag against a certified-false weaker flag is a numerical
    // artifact. The stricter claim is the one resting on more structure;
    // demote it to the gray zone rather than silently contradicting the
    // chain. Iterate to a fixed point (downgrades only remove `Yes`es).
    let mut warnings = Vec::new();
    let mut downgrades = 0usize;
    loop {
        let mut changed = false;
        for &(stricter, weaker) in &CHAIN_EDGES {
            if flags[stricter] == TriState::Yes && flags[weaker] == TriState::No {
                flags[stricter] = TriState::Marginal;
                warnings.push(format!(
                    "chain repair: {} certified true but {} certified false; downgraded {} to marginal",
                    FLAG_NAMES[stricter], FLAG_NAMES[weaker], FLAG_NAMES[stricter]
                ));
                downgrades += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let [product, zero_min_a, zero_min_b, cq, qc, ssppt_a, ssppt_b, ppt] = flags;

    // Separability verdict, in precedence order.
    let small_dims = matches!((da, db), (2, 2) | (2, 3) | (3, 2));
    let mut ensemble = None;
    let separability = if ppt == TriState::No {
        SeparabilityCall::Entangled(if pure {
            EntangledReason::PureNpt
        } else {
            EntangledReason::Npt
        })
    } else if pure && ppt == TriState::Yes {
        if opts.include_ensemble {
            // A pure PPT state is a product state; its marginals are the
            // one-term ensemble.
            let a = s.partial_trace_b();
            let b = s.partial_trace_a();
            let terms = alloc::vec![crate::sppt::EnsembleTerm { p: 1.0, a, b }];
            let mut e = SeparableEnsemble {
                dim_a: da,
                dim_b: db,
                terms,
                residual: 0.0,
            };
            e.residual = e.reconstruct().hs_distance(s.rho());
            ensemble = Some(e);
        }
        SeparabilityCall::Separable(SeparableReason::PurePpt)
    } else if ssppt_b == TriState::Yes || ssppt_a == TriState::Yes {
        if opts.include_ensemble {
            let side = if ssppt_b == TriState::Yes {
                Side::UpToB
            } else {
                Side::UpToA
            };
            ensemble = Some(extract_separable_ensemble(s, side, tol)?);
        }
        SeparabilityCall::Separable(SeparableReason::SspptDecomposition)
    } else if ppt == TriState::Yes && small_dims {
        SeparabilityCall::Separable(SeparableReason::PptSmallDims)
    } else if da == 2 || db == 2 {
        match separability_2xn(s, tol)? {
            SeparabilityVerdict::Separable { ensemble: e, .. } => {
                if opts.include_ensemble {
                    ensemble = Some(e);
                }
                SeparabilityCall::Separable(SeparableReason::BlockOrdering)
            }
            SeparabilityVerdict::Inconclusive => SeparabilityCall::Unknown,
        }
    } else {
        SeparabilityCall::Unknown
    };

    let measures = if opts.include_measures {
        let mo = &opts.measure_opts;
        Some(MeasureSummary {
            min_a: min_a(s, mo)?.value,
            min_b: min_b(s, mo)?.value,
            gmqd_a: gmqd_a(s, mo)?.value,
            gmqd_b: gmqd_b(s, mo)?.value,
            discord_a: if da <= 3 {
                Some(discord_a(s, mo)?.value)
            } else {
                None
            },
            discord_b: if db <= 3 {
                Some(discord_b(s, mo)?.value)
            } else {
                None
            },
        })
    } else {
        None
    };

    Ok(ClassificationReport {
        dim_a: da,
        dim_b: db,
        pure,
        product,
        zero_min_a,
        zero_min_b,
        cq,
        qc,
        ssppt_a,
        ssppt_b,
        ppt,
        evidence,
        separability,
        downgrades,
        warnings,
        measures,
        ensemble,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c64, ComplexMatrix};
    use crate::state::{make_circulant, make_product, make_pure_schmidt, random_state};

    fn bell() -> BipartiteState {
        make_pure_schmidt(&[core::f64::consts::FRAC_1_SQRT_2; 2])
            .unwrap()
            .to_density()
            .unwrap()
    }

    #[test]
    fn tri_state_banding() {
        assert_eq!(TriState::from_residual(1e-9, 1e-8), TriState::Yes);
        assert_eq!(TriState::from_residual(5e-8, 1e-8), TriState::Marginal);
        assert_eq!(TriState::from_residual(5e-7, 1e-8), TriState::No);
        assert_eq!(TriState::from_residual(f64::INFINITY, 1e-8), TriState::No);
        assert_eq!(TriState::from_residual(f64::NAN, 1e-8), TriState::No);
        assert_eq!(TriState::Marginal.token(), "marginal");
    }

    #[test]
    fn bell_report() {
        let report = classify(&bell(), &ClassifyOpts::default()).unwrap();
        assert!(report.pure);
        assert_eq!(report.product, TriState::No);
        assert_eq!(report.cq, TriState::No);
        assert_eq!(report.qc, TriState::No);
        assert_eq!(report.zero_min_a, TriState::No);
        assert_eq!(report.ssppt_a, TriState::No);
        assert_eq!(report.ssppt_b, TriState::No);
        assert_eq!(report.ppt, TriState::No);
        assert_eq!(
            report.separability,
            SeparabilityCall::Entangled(EntangledReason::PureNpt)
        );
        assert_eq!(report.downgrades, 0);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn product_report_with_ensemble_and_measures() {
        let s = make_product(
            &ComplexMatrix::from_real_diag(&[0.7, 0.3]),
            &ComplexMatrix::from_real_diag(&[0.6, 0.4]),
        )
        .unwrap();
        let opts = ClassifyOpts {
            include_measures: true,
            include_ensemble: true,
            ..ClassifyOpts::default()
        };
        let report = classify(&s, &opts).unwrap();
        for flag in [
            report.product,
            report.zero_min_a,
            report.zero_min_b,
            report.cq,
            report.qc,
            report.ssppt_a,
            report.ssppt_b,
            report.ppt,
        ] {
            assert_eq!(flag, TriState::Yes);
        }
        assert!(matches!(
            report.separability,
            SeparabilityCall::Separable(SeparableReason::SspptDecomposition)
        ));
        let ensemble = report.ensemble.expect("requested ensemble");
        assert!(ensemble.residual < 1e-9);
        let measures = report.measures.expect("requested measures");
        assert!(measures.min_a < 1e-9);
        assert!(measures.gmqd_a < 1e-9);
        assert!(measures.discord_a.unwrap() < 1e-6);

        // Mixed product states are not pure.
        assert!(!report.pure);
    }

    #[test]
    fn pure_product_uses_pure_ppt_rule() {
        let report = classify(
            &make_pure_schmidt(&[1.0]).unwrap().to_density().unwrap(),
            &ClassifyOpts {
                include_ensemble: true,
                ..ClassifyOpts::default()
            },
        )
        .unwrap();
        assert!(report.pure);
        assert_eq!(
            report.separability,
            SeparabilityCall::Separable(SeparableReason::PurePpt)
        );
        assert!(report.ensemble.unwrap().residual < 1e-10);
    }

    #[test]
    fn circulant_strong_but_not_qc() {
        let s = make_circulant(0.3, 0.25, 0.25, 0.2, c64(0.08, 0.03), c64(0.03, -0.08)).unwrap();
        let report = classify(&s, &ClassifyOpts::default()).unwrap();
        assert_eq!(report.qc, TriState::No);
        assert_eq!(report.ssppt_b, TriState::Yes);
        assert!(matches!(
            report.separability,
            SeparabilityCall::Separable(SeparableReason::SspptDecomposition)
        ));
        assert_eq!(report.downgrades, 0, "warnings: {:?}", report.warnings);
    }

    #[test]
    fn ppt_small_dims_rule_applies() {
        // A separable 2⊗2 Werner state (p < 1/3): PPT, generally not
        // detected by the canonical factorization routes.
        let mixed = ComplexMatrix::identity(4).scale_re(0.8 / 4.0);
        let werner = BipartiteState::new(&bell().rho().scale_re(0.2) + &mixed, 2, 2).unwrap();
        let report = classify(&werner, &ClassifyOpts::default()).unwrap();
        assert_eq!(report.ppt, TriState::Yes);
        assert!(matches!(
            report.separability,
            SeparabilityCall::Separable(_)
        ));

        // The entangled side of the family is NPT.
        let mixed = ComplexMatrix::identity(4).scale_re(0.4 / 4.0);
        let werner = BipartiteState::new(&bell().rho().scale_re(0.6) + &mixed, 2, 2).unwrap();
        let report = classify(&werner, &ClassifyOpts::default()).unwrap();
        assert_eq!(
            report.separability,
            SeparabilityCall::Entangled(EntangledReason::Npt)
        );
    }

    #[test]
    fn larger_dims_can_be_unknown() {
        // A 3⊗3 PPT state with no structure detected stays Unknown rather
        // than being called either way.
        let s = random_state(3, 3, 9, 4).unwrap();
        let report = classify(&s, &ClassifyOpts::default()).unwrap();
        if report.ppt == TriState::Yes
            && report.ssppt_a != TriState::Yes
            && report.ssppt_b != TriState::Yes
        {
            assert_eq!(report.separability, SeparabilityCall::Unknown);
        }
        assert_eq!(report.dim_a, 3);
        assert_eq!(report.dim_b, 3);
    }

    #[test]
    fn reason_tokens_are_stable() {
        assert_eq!(SeparableReason::PurePpt.token(), "pure-ppt");
        assert_eq!(
            SeparableReason::SspptDecomposition.token(),
            "ssppt-decomposition"
        );
        assert_eq!(SeparableReason::PptSmallDims.token(), "ppt-small-dims");
        assert_eq!(SeparableReason::BlockOrdering.token(), "block-ordering");
        assert_eq!(EntangledReason::Npt.token(), "npt");
        assert_eq!(EntangledReason::PureNpt.token(), "pure-npt");
        assert_eq!(
            SeparabilityCall::Separable(SeparableReason::PurePpt).label(),
            "separable"
        );
        assert_eq!(SeparabilityCall::Unknown.label(), "unknown");
        assert_eq!(SeparabilityCall::Unknown.reason_token(), "");
    }

    #[test]
    fn block_ordering_rule_reachable() {
        // 2⊗4 (outside the small-dims rule), block-diagonal with ordered
        // singular blocks: the canonical gate fails on the singular
        // leading block, the ordering construction succeeds.
        let mut m = ComplexMatrix::zeros(8, 8);
        for (i, v) in [0.35, 0.25, 0.1, 0.0, 0.15, 0.1, 0.05, 0.0]
            .iter()
            .enumerate()
        {
            m[(i, i)] = c64(*v, 0.0);
        }
        let s = BipartiteState::new(m, 2, 4).unwrap();
        let report = classify(
            &s,
            &ClassifyOpts {
                include_ensemble: true,
                ..ClassifyOpts::default()
            },
        )
        .unwrap();
        match report.separability {
            SeparabilityCall::Separable(SeparableReason::SspptDecomposition)
            | SeparabilityCall::Separable(SeparableReason::BlockOrdering) => {}
            other => panic!("expected a constructive separability call, got {other:?}"),
        }
        if let Some(e) = report.ensemble {
            assert!(e.residual < 1e-7);
        }
    }
}
