#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace moaif {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct DimensionError : Error {
  using Error::Error;
};

struct InfeasibleTask : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
}

/// SplitMix64 finaliser. Used to derive independent stream seeds from a
/// master seed and one or more integer tags.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
  std::uint64_t s = mix_seed(master);
  ((s = mix_seed(s ^ static_cast<std::uint64_t>(tags))), ...);
  return s;
}

/// Random stream used throughout the library.
///
/// Engine is MT19937-64; variates come from Boost.Random distributions
/// (ziggurat normal, Marsaglia-Tsang gamma) whose algorithms are fixed in
/// source, so a given seed yields the same stream on every platform built
/// against the same Boost release. Multivariate draws fill coordinates in
/// index order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  std::size_t index(std::size_t n) {
    boost::random::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(engine_);
  }

  double gamma(double shape, double scale = 1.0) {
    boost::random::gamma_distribution<double> d(shape, scale);
    return d(engine_);
  }

  double chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

  Vector standard_normal(Eigen::Index n) {
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  boost::random::mt19937_64& engine() { return engine_; }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline bool is_symmetric(const Matrix& m, double tol = 1e-9) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Factor F with F F^T = m for a symmetric positive semi-definite m.
/// Falls back to an eigen-decomposition when Cholesky fails, so a zero or
/// rank-deficient covariance yields an exact (possibly zero) factor.
inline Matrix psd_factor(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw NumericError("matrix is not positive semi-definite");
  Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

/// Symmetric PSD square root via eigen-decomposition; negative eigenvalues are clamped to 0.
inline Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

inline void check_psd(const Matrix& m, const std::string& what) {
  if (!is_symmetric(m)) throw NumericError(what + ": matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw NumericError(what + ": matrix is not positive semi-definite");
}

/// Number of unique entries in vec(theta) = (mu, upper-triangular Sigma).
constexpr Eigen::Index vec_dim(Eigen::Index n) { return n * (n + 3) / 2; }

inline double log_two_pi() { return std::log(2.0 * M_PI); }

}  // namespace moaif
