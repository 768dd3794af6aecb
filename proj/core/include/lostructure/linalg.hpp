#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lostructure/rational.hpp"

namespace lostructure {

// Row-major dense matrix over Q.
using Matrix = std::vector<RatVec>;

std::size_t matrix_rank(Matrix m);

// Indices of a maximal set of linearly independent rows, chosen greedily.
std::vector<std::size_t> independent_rows(const Matrix& m);

// Unique solution of the square system A x = b, or nullopt if A is singular.
std::optional<RatVec> solve(const Matrix& a, const RatVec& b);
std::optional<Matrix> inverse(const Matrix& a);

Matrix transpose(const Matrix& m);
RatVec mat_vec(const Matrix& m, const RatVec& x);

// Smallest positive integer multiple with coprime integer entries.
std::vector<Integer> primitive_integer(const RatVec& v);

bool is_integral(const RatVec& v);

}  // namespace lostructure
