// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Process tomography engines and experiment accounting.

mod chi;
mod complexity;
mod msqpt;
mod reference;

pub use chi::{tp_map, tp_map_adjoint, ChiMatrix, Provenance, HERMITIAN_TOL};
pub use complexity::{complexity, ComplexityReport, Method, MAX_COUNTED_QUBITS};
pub use msqpt::{
    chi_element, chi_from_survival, full_chi, survival, survival_from_chi, EbarTable, Estimator, EstimatorConfig,
    SurvivalEstimate, SurvivalTable,
};
pub use reference::{analytic_chi, sqpt_full, sqpt_reference, standard_qpt, standard_qpt_estimated};
