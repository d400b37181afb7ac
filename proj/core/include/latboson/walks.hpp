#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latboson/lattice.hpp"

namespace latboson {

/// Time-local interaction of N discrete walks (paths[k][j] = site of walk k
/// at time j, j = 0..ntau):
///   V = 1/2 sum_{k,k'} eps sum_{j=1..ntau} v(y^k_j, y^{k'}_j),
/// including the k = k' self terms unless include_self is false.
double interaction_functional(const std::vector<std::vector<int>>& paths,
                              const InteractionOperator& v, double eps, bool include_self = true);

/// Literal sum over N-walk collections: permutation-symmetrized endpoints,
/// all intermediate sites enumerated, kinetic weight per step from
/// exp(-eps E), Boltzmann weight exp(-V).
double z_walks_enumerate(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                         int ntau);

/// The same sum contracted exactly with the transfer operator
/// T = (exp(-eps E))^{tensor N} diag(exp(-eps V_N)) on Lambda^N:
///   Z = (1/N!) sum_pi sum_x [T^ntau]_{x, pi(x)}.
/// identity_only restricts the permutation sum to the identity (a
/// deliberately wrong value, used to confirm Bose symmetrization matters).
double z_walks_transfer(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                        int ntau, bool identity_only = false);

}  // namespace latboson
