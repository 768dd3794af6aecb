#include "lostructure/linalg.hpp"

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

// Gaussian elimination in place; returns pivot columns.
std::vector<std::size_t> eliminate(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t matrix_rank(Matrix m) { return eliminate(m).size(); }

std::vector<std::size_t> independent_rows(const Matrix& m) {
  std::vector<std::size_t> chosen;
  Matrix acc;
  for (std::size_t i = 0; i < m.size(); ++i) {
    acc.push_back(m[i]);
    if (matrix_rank(acc) == acc.size()) {
      chosen.push_back(i);
    } else {
      acc.pop_back();
    }
  }
  return chosen;
}

std::optional<RatVec> solve(const Matrix& a, const RatVec& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InvalidArgument("solve: dimension mismatch");
  Matrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InvalidArgument("solve: matrix must be square");
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  auto piv = eliminate(aug);
  if (piv.size() < n || piv.back() >= n) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n] / aug[i][i];
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = a[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
  }
  auto piv = eliminate(aug);
  if (piv.size() < n || piv[n - 1] >= n) return std::nullopt;
  Matrix inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j] / aug[i][i];
  return inv;
}

Matrix transpose(const Matrix& m) {
  if (m.empty()) return {};
  Matrix t(m[0].size(), RatVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

RatVec mat_vec(const Matrix& m, const RatVec& x) {
  RatVec y(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) y[i] = dot(m[i], x);
  return y;
}

std::vector<Integer> primitive_integer(const RatVec& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& x : v) {
    Integer z = x.get_num() * (l / x.get_den());
    out.push_back(z);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  }
  if (g != 0)
    for (auto& z : out) z /= g;
  return out;
}

bool is_integral(const RatVec& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

}  // namespace lostructure
