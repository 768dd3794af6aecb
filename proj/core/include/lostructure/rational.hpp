#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lostructure {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Rational>;

// Accepts "p/q", "p" and finite decimals such as "-0.25". Result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);
std::string to_string(const RatVec& v);

// p/q in lowest terms. The two-argument mpq_class constructor does not reduce.
Rational frac(const Integer& p, const Integer& q);
void canonicalize(RatVec& v);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
Rational abs(const Rational& x);
Rational from_double(double x);

Rational max_norm(const RatVec& v);
Rational squared_norm(const RatVec& v);
Rational dot(const RatVec& a, const RatVec& b);

// x <= sqrt(s) decided exactly, s >= 0.
bool le_sqrt(const Rational& x, const Rational& s);

Rational rational_gcd(const Rational& a, const Rational& b);
Integer binomial(unsigned n, unsigned k);

inline double to_double(const Rational& x) { return x.get_d(); }
std::vector<double> to_double(const RatVec& v);

bool is_zero(const RatVec& v);
RatVec zeros(std::size_t d);

struct RatVecLess {
  bool operator()(const RatVec& a, const RatVec& b) const;
};

}  // namespace lostructure
