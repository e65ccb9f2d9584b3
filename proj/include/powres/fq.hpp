#pragma once

// Exact linear algebra over a prime field F_q.
//
// Matrices and vectors are plain Eigen dense types holding residues in
// [0, q); the field itself travels alongside as a PrimeField value. Every
// routine reduces after each arithmetic step, so with q < 2^16 and the
// dimensions used here (<= 64) no intermediate overflows a 64-bit scalar.

#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "powres/errors.hpp"

namespace powres::fq {

template <std::signed_integral Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <std::signed_integral Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

inline constexpr std::int64_t kMaxModulus = 1 << 16;

template <std::signed_integral Scalar>
class PrimeField {
public:
  explicit PrimeField(Scalar q) : q_(q) {
    if (q < 2 || q >= kMaxModulus) {
      throw std::invalid_argument("PrimeField: modulus " + std::to_string(q) + " outside [2, 65536)");
    }
    for (Scalar d = 2; d * d <= q; ++d) {
      if (q % d == 0) {
        throw std::invalid_argument("PrimeField: modulus " + std::to_string(q) + " is not prime");
      }
    }
  }

  Scalar modulus() const { return q_; }

  Scalar reduce(Scalar x) const {
    const Scalar r = x % q_;
    return r < 0 ? r + q_ : r;
  }
  Scalar add(Scalar a, Scalar b) const { return reduce(a + b); }
  Scalar sub(Scalar a, Scalar b) const { return reduce(a - b); }
  Scalar mul(Scalar a, Scalar b) const { return reduce(a * b); }
  Scalar neg(Scalar a) const { return reduce(-a); }

  Scalar inv(Scalar a) const {
    a = reduce(a);
    if (a == 0) {
      throw std::domain_error("PrimeField: zero has no inverse");
    }
    // Fermat: a^(q-2).
    Scalar result = 1;
    Scalar base = a;
    for (Scalar e = q_ - 2; e > 0; e >>= 1) {
      if (e & 1) {
        result = mul(result, base);
      }
      base = mul(base, base);
    }
    return result;
  }

  bool contains(Scalar x) const { return 0 <= x && x < q_; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
  Scalar q_;
};

using Field = PrimeField<std::int64_t>;
using MatrixF = Matrix<std::int64_t>;
using VectorF = Vector<std::int64_t>;

/// Reduces every coefficient of an integer expression into [0, q).
template <typename Derived, std::signed_integral Scalar>
auto reduced(const Eigen::MatrixBase<Derived>& expr, const PrimeField<Scalar>& field) {
  using Plain = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  return Plain(expr.unaryExpr([&field](Scalar x) { return field.reduce(x); }));
}

template <typename Derived, std::signed_integral Scalar>
bool is_reduced(const Eigen::MatrixBase<Derived>& m, const PrimeField<Scalar>& field) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!field.contains(m(i, j))) {
        return false;
      }
    }
  }
  return true;
}

template <std::signed_integral Scalar>
Vector<Scalar> multiply(const Matrix<Scalar>& m, const Vector<Scalar>& v, const PrimeField<Scalar>& field) {
  if (m.cols() != v.size()) {
    throw std::invalid_argument("multiply: dimension mismatch");
  }
  return reduced(m * v, field);
}

/// v^T M, returned as a column vector of length cols(M).
template <std::signed_integral Scalar>
Vector<Scalar> left_multiply(const Vector<Scalar>& v, const Matrix<Scalar>& m, const PrimeField<Scalar>& field) {
  if (m.rows() != v.size()) {
    throw std::invalid_argument("left_multiply: dimension mismatch");
  }
  return reduced(m.transpose() * v, field);
}

template <std::signed_integral Scalar>
Scalar dot(const Vector<Scalar>& a, const Vector<Scalar>& b, const PrimeField<Scalar>& field) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  return field.reduce(a.dot(b));
}

template <std::signed_integral Scalar>
struct RowEchelon {
  Matrix<Scalar> reduced;
  Index rank = 0;
  std::vector<Index> pivot_columns;
};

/// Reduced row-echelon form by Gauss-Jordan elimination.
template <std::signed_integral Scalar>
RowEchelon<Scalar> rref(const Matrix<Scalar>& m, const PrimeField<Scalar>& field) {
  RowEchelon<Scalar> out{reduced(m, field), 0, {}};
  Matrix<Scalar>& r = out.reduced;
  Index row = 0;
  for (Index col = 0; col < r.cols() && row < r.rows(); ++col) {
    Index pivot = row;
    while (pivot < r.rows() && r(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == r.rows()) {
      continue;
    }
    r.row(row).swap(r.row(pivot));
    const Scalar inv = field.inv(r(row, col));
    r.row(row) = reduced(r.row(row) * inv, field);
    for (Index other = 0; other < r.rows(); ++other) {
      if (other != row && r(other, col) != 0) {
        const Scalar factor = r(other, col);
        r.row(other) = reduced(r.row(other) - factor * r.row(row), field);
      }
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.rank = row;
  return out;
}

/// Some x with M x = b, free variables set to zero; nullopt if inconsistent.
template <std::signed_integral Scalar>
std::optional<Vector<Scalar>> solve_linear(const Matrix<Scalar>& m, const Vector<Scalar>& b,
                                           const PrimeField<Scalar>& field) {
  if (b.size() != m.rows()) {
    throw std::invalid_argument("solve_linear: right-hand side length must equal row count");
  }
  Matrix<Scalar> augmented(m.rows(), m.cols() + 1);
  augmented << m, b;
  const auto echelon = rref(augmented, field);
  if (!echelon.pivot_columns.empty() && echelon.pivot_columns.back() == m.cols()) {
    return std::nullopt;
  }
  Vector<Scalar> x = Vector<Scalar>::Zero(m.cols());
  for (Index i = 0; i < echelon.rank; ++i) {
    x(echelon.pivot_columns[static_cast<std::size_t>(i)]) = echelon.reduced(i, m.cols());
  }
  return x;
}

/// Coefficients d with d^T M = v^T, if v lies in the row space of M.
template <std::signed_integral Scalar>
std::optional<Vector<Scalar>> row_space_contains(const Matrix<Scalar>& m, const Vector<Scalar>& v,
                                                 const PrimeField<Scalar>& field) {
  if (v.size() != m.cols()) {
    throw std::invalid_argument("row_space_contains: vector length must equal column count");
  }
  return solve_linear(Matrix<Scalar>(m.transpose()), v, field);
}

/// Basis of {x : M x = 0}: one vector per free column, that column set to 1.
template <std::signed_integral Scalar>
std::vector<Vector<Scalar>> null_space_basis(const Matrix<Scalar>& m, const PrimeField<Scalar>& field) {
  const auto echelon = rref(m, field);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (Index c : echelon.pivot_columns) {
    is_pivot[static_cast<std::size_t>(c)] = true;
  }
  std::vector<Vector<Scalar>> basis;
  for (Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) {
      continue;
    }
    Vector<Scalar> x = Vector<Scalar>::Zero(m.cols());
    x(free) = 1;
    for (Index i = 0; i < echelon.rank; ++i) {
      x(echelon.pivot_columns[static_cast<std::size_t>(i)]) = field.neg(echelon.reduced(i, free));
    }
    basis.push_back(std::move(x));
  }
  for (const auto& x : basis) {
    if (!multiply(m, x, field).isZero()) {
      throw InvariantViolation("null_space_basis: basis vector fails M x = 0");
    }
  }
  return basis;
}

template <std::signed_integral Scalar>
Index rank(const Matrix<Scalar>& m, const PrimeField<Scalar>& field) {
  return rref(m, field).rank;
}

}  // namespace powres::fq
