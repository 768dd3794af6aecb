#include "lostructure/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidArgument("empty rational literal");
  bool neg = false;
  std::string body = s;
  if (body[0] == '+' || body[0] == '-') {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  Rational out;
  auto slash = body.find('/');
  auto dot = body.find('.');
  if (slash != std::string::npos) {
    std::string p = body.substr(0, slash);
    std::string q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw InvalidArgument("bad rational literal: " + s);
    Integer den(q);
    if (den == 0) throw InvalidArgument("zero denominator: " + s);
    out = Rational(Integer(p), den);
  } else if (dot != std::string::npos) {
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
      throw InvalidArgument("bad decimal literal: " + s);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    out = Rational(Integer(ip + fp), den);
  } else {
    if (!all_digits(body)) throw InvalidArgument("bad rational literal: " + s);
    out = Rational(Integer(body));
  }
  out.canonicalize();
  return neg ? Rational(-out) : out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value");
  Rational r(x);
  r.canonicalize();
  return r;
}

Rational max_norm(const RatVec& v) {
  Rational m = 0;
  for (const auto& x : v) {
    Rational a = abs(x);
    if (a > m) m = a;
  }
  return m;
}

Rational squared_norm(const RatVec& v) {
  Rational s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool le_sqrt(const Rational& x, const Rational& s) {
  if (s < 0) throw InvalidArgument("le_sqrt: negative radicand");
  if (x <= 0) return true;
  return x * x <= s;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  // gcd(p1/q1, p2/q2) = gcd(p1 q2, p2 q1) / (q1 q2)
  Integer n1 = a.get_num() * b.get_den();
  Integer n2 = b.get_num() * a.get_den();
  Integer g;
  mpz_gcd(g.get_mpz_t(), n1.get_mpz_t(), n2.get_mpz_t());
  Rational r(g, a.get_den() * b.get_den());
  r.canonicalize();
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<double> to_double(const RatVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

RatVec zeros(std::size_t d) { return RatVec(d, Rational(0)); }

bool RatVecLess::operator()(const RatVec& a, const RatVec& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Rational frac(const Integer& p, const Integer& q) {
  if (q == 0) throw InvalidArgument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

void canonicalize(RatVec& v) {
  for (auto& x : v) x.canonicalize();
}

}  // namespace lostructure
