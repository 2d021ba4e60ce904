#pragma once

#include "lpoc/algebra.hpp"

namespace lpoc {

enum class RetractionKind { Cayley, Exponential };

const char* to_string(RetractionKind kind);
RetractionKind retraction_from_string(const std::string& s);

/// tau: g -> G.  Cayley is (I - X/2)^{-1} (I + X/2); Exponential is the
/// matrix exponential of hat(x).
GroupElement tau(RetractionKind kind, const LieAlgebraSpec& spec, const AlgebraVector& x);

/// Inverse of tau on its injectivity neighborhood.  Throws
/// OutsideInjectivityDomain if g is not reachable (exp: rotation angle >= pi;
/// cayley: angle pi exactly).
AlgebraVector tau_inv(RetractionKind kind, const LieAlgebraSpec& spec, const GroupElement& g);

/// Coordinate matrix of the inverse right-trivialized tangent dtau^{-1}_x.
/// Cayley: w -> vee((I - X/2) hat(w) (I + X/2)); exponential: truncated
/// Bernoulli series in ad_x.
Eigen::MatrixXd dtau_inv_matrix(RetractionKind kind, const LieAlgebraSpec& spec,
                                const AlgebraVector& x);

/// (dtau^{-1}_x)^* m, i.e. multiplication by the transpose of
/// dtau_inv_matrix in the chosen coordinates.
DualVector dtau_inv_star(RetractionKind kind, const LieAlgebraSpec& spec, const AlgebraVector& x,
                         const DualVector& m);

/// Hard-coded se(2) Cayley dtau^{-1} coordinate matrix (fast path; also the
/// cross-check target for the generic route).
Eigen::Matrix3d dcay_inv_se2(const Eigen::Vector3d& v);

}  // namespace lpoc
