// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "twodevp/twodrqi.hpp"

namespace twodevp {

struct BackwardErrorReport {
  double gamma_a = 0.0;  // x^H A x - lambda
  double gamma_c = 0.0;  // x^H C x
  double r_norm = 0.0;   // |(A - mu C - lambda I) x|
  double eta1 = 0.0;
  double eta2 = -1.0;  // negative when not applicable
};

/// eta1 = max(|gamma_a|/|A|, |gamma_c|/|C|, |r|/(|A| + |mu| |C|)); the true
/// backward error lies in [eta1, sqrt(2) eta1].
BackwardErrorReport eta1(const HermitianPair& pair, const TwoDTriplet& t);

struct Perturbation {
  Mat delta_a;
  Mat delta_c;
  double a_norm = 0.0;  // |a|, the designed norm of delta_a
  double c_norm = 0.0;
};

/// Hermitian (delta_a, delta_c) with delta_a x - mu delta_c x = -r and
/// x^H delta_c x = -gamma_c, each a scaled Householder reflector of norm at
/// most sqrt(2) eta1 relative to the pair. Dense pairs only (n <= 2000).
Perturbation construct_perturbation(const HermitianPair& pair,
                                    const TwoDTriplet& t);

/// Adds delta (x q^H + q x^H) to delta_c, q a unit vector orthogonal to x
/// inside the null space of C + delta_c, when C + delta_c is semidefinite.
/// Returns whether a repair was applied.
bool repair_indefiniteness(const HermitianPair& pair, const Vec& x,
                           Mat& delta_c, double delta);

/// Hermitian matrix h = s (I - 2 w w^H) with h x = a and |h| = |a|; needs
/// x^H a real.
Mat hermitian_reflector(const Vec& x, const Vec& a);

struct Eta2Report {
  double eta2 = 0.0;
  Vec r1;  // ahat x2 - mu j x2 - lambda x1
  Vec r2;  // ahat^H x1 + mu j x1 - lambda x2
};

/// sqrt(2) |r| / |ahat| for a triplet on a dti-block pair.
Eta2Report eta2_dti(const DtiMatrix& ahat, double ahat_norm,
                    const TwoDTriplet& t);

}  // namespace twodevp
