// SPDX-License-Identifier: Apache-2.0
//
// rsulink - passive radar aided mmWave V2I link configuration simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef RSULINK_COVARIANCE_HPP
#define RSULINK_COVARIANCE_HPP

#include <Eigen/Dense>
#include <iosfwd>

#include "rsulink/common.hpp"

namespace rsulink {

/// Hermitian spatial covariance with an attached noise-floor estimate.
/// The flags record structural properties the producing operation
/// guarantees; consumers may rely on them instead of re-checking.
struct CovarianceMatrix {
    Eigen::MatrixXcd m;
    double noise_floor = 0.0;
    bool psd = false;
    bool toeplitz = false;

    Eigen::Index dim() const { return m.rows(); }
};

inline bool is_hermitian(const Eigen::MatrixXcd& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline void hermitianize(Eigen::MatrixXcd& a) { a = 0.5 * (a + a.adjoint().eval()); }

inline double min_eigenvalue(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Line-oriented textual dump of complex matrices, one entry per token
// formatted as "re+imj". Test fixtures only; round-trips doubles exactly.
void write_complex_matrix(std::ostream& os, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_complex_matrix(std::istream& is);

} // namespace rsulink

#endif
