//! End-to-end solve of a zero-cost instance.

use crate::apps::{round_cut, CutError, MultiwayCut};
use crate::descent::{self, DescentError, DescentStats};
use crate::extract::{certify, CertificateReport, HalfIntegralMultiflow};
use crate::instance::{MultiflowInstance, TreeEmbedding};
use crate::reduce::{perturb, ReduceError};
use crate::tree_space::Potential;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error("certificate failed: {0:?}")]
    Certificate(Box<CertificateReport>),
}

#[derive(Debug, Clone)]
pub struct MaxMultiflowSolution {
    pub multiflow: HalfIntegralMultiflow,
    /// Optimal potential on the star embedding.
    pub potential: Potential,
    pub star: TreeEmbedding,
    pub cut: MultiwayCut,
    pub stats: DescentStats,
    pub certificate: CertificateReport,
}

impl MaxMultiflowSolution {
    pub fn value2(&self) -> i64 {
        self.multiflow.value2()
    }
}

/// A half-integral maximum multiflow, a half-integral optimal dual on the
/// star, and the rounded multiway cut. Edge costs of `instance` are ignored.
pub fn solve_max_multiflow(instance: &MultiflowInstance) -> Result<MaxMultiflowSolution, SolveError> {
    let (pert, geo) = perturb(instance);
    let out = descent::solve(&pert, &geo.embedding)?;
    let (potential, star) = geo.recover(&pert, &out.potential)?;
    let original = instance.with_uniform_cost(0);
    let certificate = certify(&original, &star, &potential, &out.multiflow);
    if !certificate.is_optimal() {
        return Err(SolveError::Certificate(Box::new(certificate)));
    }
    let cut = round_cut(&original, &potential)?;
    Ok(MaxMultiflowSolution { multiflow: out.multiflow, potential, star, cut, stats: out.stats, certificate })
}
