// Copyright 2026 The semiflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra used by every other header. Storage is
// Eigen's column-major MatrixXcd; everything here is a pure function.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

namespace detail {

inline std::string shape_string(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

inline void require_square(const ComplexMatrix& a, std::string_view op) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(op) + ": expected a square matrix, got " + shape_string(a));
  }
}

}  // namespace detail

inline bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const Complex z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Throws DomainError when `a` holds a NaN or infinity.
inline void require_finite(const ComplexMatrix& a, std::string_view what) {
  if (!all_finite(a)) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

inline ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mat_mul: cannot multiply " + detail::shape_string(a) + " by " +
                     detail::shape_string(b));
  }
  return a * b;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// (a + a^*)/2.
inline ComplexMatrix hermitize(const ComplexMatrix& a) {
  detail::require_square(a, "hermitize");
  return (a + a.adjoint()) * 0.5;
}

/// Largest singular value, computed as sqrt of the top eigenvalue of the
/// smaller Gram matrix.
inline double op_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const ComplexMatrix gram = a.rows() >= a.cols() ? ComplexMatrix(a.adjoint() * a)
                                                  : ComplexMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns are eigenvectors
};

namespace detail {

inline ComplexMatrix checked_hermitian(const ComplexMatrix& a, double tol) {
  require_square(a, "hermitian_eigenvalues");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw DomainError("hermitian_eigenvalues: matrix is not Hermitian (asymmetry " +
                      std::to_string(asym) + ")");
  }
  return hermitize(a);
}

}  // namespace detail

/// Eigen-decomposition of a matrix that is Hermitian to `tol` (relative to
/// its largest entry). The input is symmetrized before decomposition.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& a, double tol = 1e-12) {
  if (a.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(detail::checked_hermitian(a, tol));
  return {es.eigenvalues(), es.eigenvectors()};
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, double tol = 1e-12) {
  if (a.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(detail::checked_hermitian(a, tol),
                                                  Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline constexpr double kMaxConditionNumber = 1e12;

/// Solves a·x = b with partial-pivot LU. Throws SingularityError when the
/// reciprocal condition estimate puts cond(a) above 1e12.
inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_square(a, "solve");
  if (a.rows() != b.rows()) {
    throw ShapeError("solve: right-hand side " + detail::shape_string(b) +
                     " does not conform to " + detail::shape_string(a));
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  const bool pivots_ok = (lu.matrixLU().diagonal().array().abs() > 0.0).all();
  if (!pivots_ok || !(rcond * kMaxConditionNumber >= 1.0)) {
    const double cond = (pivots_ok && rcond > 0.0) ? 1.0 / rcond : INFINITY;
    throw SingularityError("solve: matrix is singular to working precision (condition estimate " +
                               std::to_string(cond) + ")",
                           cond);
  }
  return lu.solve(b);
}

namespace detail {

// Diagonal Padé [7/7] for exp: (V+U)(V-U)^{-1}.
inline ComplexMatrix pade7(const ComplexMatrix& a) {
  static constexpr double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                 25200.0,    1512.0,    56.0,      1.0};
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
  const ComplexMatrix v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// Matrix exponential by scaling and squaring around a [7/7] Padé core. The
/// scaling brings the 1-norm to at most 0.5, well inside the region where
/// the [7/7] approximant is accurate to unit roundoff.
inline ComplexMatrix expm(const ComplexMatrix& a) {
  detail::require_square(a, "expm");
  require_finite(a, "expm");
  if (a.size() == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  ComplexMatrix e = detail::pade7(a / std::ldexp(1.0, squarings));
  for (int k = 0; k < squarings; ++k) e = e * e;
  return e;
}

// ---------------------------------------------------------------------------
// Matrix text format: "rows cols" header, then one line per row holding
// whitespace-separated "re,im" pairs printed with 17 significant digits.

inline void write_matrix(std::ostream& os, const ComplexMatrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", a(i, j).real(), a(i, j).imag());
      if (j > 0) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

inline std::string format_matrix(const ComplexMatrix& a) {
  std::ostringstream os;
  write_matrix(os, a);
  return os.str();
}

namespace detail {

inline double parse_double(const std::string& tok, std::size_t line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("matrix text line " + std::to_string(line) + ": cannot parse number '" +
                      tok + "'");
  }
  return v;
}

}  // namespace detail

inline ComplexMatrix read_matrix(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ConfigError("matrix text: missing 'rows cols' header");
  long rows = 0;
  long cols = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> rows >> cols) || (hs >> extra) || rows <= 0 || cols <= 0) {
      throw ConfigError("matrix text line " + std::to_string(line_no) +
                        ": expected positive 'rows cols' header");
    }
  }
  ComplexMatrix a(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!next_line()) {
      throw ConfigError("matrix text: expected " + std::to_string(rows) + " rows, got " +
                        std::to_string(i));
    }
    std::istringstream ls(line);
    std::string tok;
    long j = 0;
    while (ls >> tok) {
      if (j >= cols) {
        throw ConfigError("matrix text line " + std::to_string(line_no) + ": too many entries");
      }
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("matrix text line " + std::to_string(line_no) + ": entry '" + tok +
                          "' is not a 're,im' pair");
      }
      a(i, j) = Complex(detail::parse_double(tok.substr(0, comma), line_no),
                        detail::parse_double(tok.substr(comma + 1), line_no));
      ++j;
    }
    if (j != cols) {
      throw ConfigError("matrix text line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " entries, got " + std::to_string(j));
    }
  }
  if (next_line()) {
    throw ConfigError("matrix text line " + std::to_string(line_no) + ": trailing content");
  }
  if (!all_finite(a)) throw ConfigError("matrix text: non-finite entry");
  return a;
}

inline ComplexMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

inline ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void save_matrix(const std::string& path, const ComplexMatrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(out, a);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace semiflow
