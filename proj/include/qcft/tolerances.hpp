#pragma once

// Shared tolerance table. Every invariant in the library cites one of these.

namespace qcft::tol {

/// Hermiticity: max |H_ij - conj(H_ji)| relative to max(1, max |H|).
inline constexpr double hermitian = 1e-12;
/// ||U^dag U - I||_max for a single exponential.
inline constexpr double unitary = 1e-10;
/// ||U^dag U - I||_max for a dense-assembled compiled circuit.
inline constexpr double circuit_unitary = 1e-9;
/// expm(H, a + b) vs expm(H, a) expm(H, b).
inline constexpr double group_property = 1e-9;
/// Banded vs dense code paths.
inline constexpr double banded_dense = 1e-12;
/// Closed-form vs diagonalized dispersion energies.
inline constexpr double dispersion = 1e-10;
/// Norm preservation under circuits and exact evolution.
inline constexpr double norm_preservation = 1e-10;
/// Norm drift along a physics trace.
inline constexpr double trace_norm = 1e-9;
/// Probability outside the structural light cone of a brick-wall circuit.
inline constexpr double light_cone = 1e-14;
/// Unit norm of a freshly built state.
inline constexpr double unit_norm = 1e-12;
/// position_expectation refuses states further than this from unit norm.
inline constexpr double expectation_norm = 1e-6;
/// Weight outside the one-excitation sector tolerated by extract.
inline constexpr double sector_leakage = 1e-10;
/// QCFT2 single-excitation evolution vs QCFT1 evolution.
inline constexpr double sector_evolution = 1e-8;
/// Entrywise agreement of the calibration identity and sector blocks.
inline constexpr double exact_identity = 1e-12;
/// Fit precision of the extensivity exponents.
inline constexpr double exponent_fit = 1e-6;

}  // namespace qcft::tol
