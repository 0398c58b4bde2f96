#pragma once

namespace adaptlab::tol {

// Central numeric contract constants. Library code and tests both read
// these; changing one here changes the guarantee everywhere.

// Lyapunov solve: ||A^T P + P A + Q||_F <= lyapunov_residual_rel * ||Q||_F.
inline constexpr double lyapunov_residual_rel = 1e-10;
// Symmetry check for P and for sym_eig_bounds inputs (relative).
inline constexpr double symmetry_rel = 1e-9;
// Jacobi sweep stops when off-diagonal Frobenius norm falls below this
// times the matrix Frobenius norm.
inline constexpr double jacobi_offdiag_rel = 1e-12;
// Allowed slack on V-dot against its analytic bound.
inline constexpr double vdot_slack = 1e-9;
// V must be non-increasing along trajectories up to this times V(t0).
inline constexpr double lyapunov_monotone_rel = 1e-9;
// Per-window contraction ratio may exceed r_con by at most this.
inline constexpr double contraction_slack = 1e-6;
// Gram min-eigenvalue may undershoot alpha' by at most this.
inline constexpr double gram_slack = 1e-6;
// alpha_hat above this counts as persistently exciting.
inline constexpr double pe_alpha_threshold = 1e-8;
// Region inequalities are relaxed by this (absolute) when checking that
// an integrated trajectory stays inside M0. Never used by classify.
inline constexpr double region_boundary_abs = 1e-7;
// Minimum allowed inward inner product on region boundary surfaces.
inline constexpr double flow_min = -1e-9;
// Velocity norms may exceed d_z by at most this.
inline constexpr double dz_slack = 1e-9;
// Transition-matrix determinant vs exp(-integral trace) agreement.
inline constexpr double det_identity_abs = 1e-6;

}  // namespace adaptlab::tol
