#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zm {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// A spinor value in C^N, N = 2^floor(n/2).
using Spinor = CVec;

/// Hermitian product on spinors, complex-linear in the first slot:
/// <u, v> = sum_k u_k conj(v_k).
inline cplx hermitian(const CVec& u, const CVec& v) { return v.dot(u); }

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace zm
