#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace prs {

using Symbol = std::uint16_t;

// GF(2^m) with log/antilog tables, 3 <= m <= 16.
//
// The exp table is stored twice over (2n entries) so that a product of two
// nonzero elements is exp[log a + log b] with no reduction. Immutable once
// built; share it through FieldPtr.
class Field {
 public:
  static constexpr unsigned kMinWidth = 3;
  static constexpr unsigned kMaxWidth = 16;

  // Throws Error{UnsupportedWidth} or Error{NotPrimitive}.
  Field(unsigned m, std::uint32_t prim_poly);

  // Standard tabulated primitive polynomial for width m.
  static std::uint32_t default_poly(unsigned m);

  unsigned m() const noexcept { return m_; }
  std::uint32_t prim_poly() const noexcept { return prim_poly_; }
  // Multiplicative group order, 2^m - 1. Also the RS codeword length.
  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t size() const noexcept { return n_ + 1; }

  Symbol alpha() const noexcept { return exp_[1]; }

  static Symbol add(Symbol a, Symbol b) noexcept { return a ^ b; }
  static Symbol sub(Symbol a, Symbol b) noexcept { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  // Throws Error{DivisionByZero} for b == 0.
  Symbol div(Symbol a, Symbol b) const;
  Symbol inv(Symbol a) const;
  Symbol pow(Symbol a, std::int64_t e) const;

  // alpha^e for any integer e.
  Symbol exp(std::int64_t e) const noexcept {
    std::int64_t r = e % static_cast<std::int64_t>(n_);
    if (r < 0) r += n_;
    return exp_[static_cast<std::size_t>(r)];
  }

  // Discrete log base alpha; a must be nonzero.
  std::uint32_t log(Symbol a) const noexcept { return log_[a]; }

  // a * alpha^e for 0 <= e < n, the hot path of Horner over alpha powers.
  Symbol mul_exp(Symbol a, std::uint32_t e) const noexcept {
    if (a == 0) return 0;
    return exp_[log_[a] + e];
  }

  std::span<const Symbol> exp_table() const noexcept { return exp_; }
  std::span<const std::uint32_t> log_table() const noexcept { return log_; }

 private:
  unsigned m_;
  std::uint32_t prim_poly_;
  std::uint32_t n_;
  std::vector<Symbol> exp_;
  std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const Field>;

FieldPtr make_field(unsigned m, std::uint32_t prim_poly);
FieldPtr make_field(unsigned m);

// Univariate polynomial over GF(2^m), lowest degree first. The coefficient
// vector is kept trimmed so the leading coefficient is nonzero; the zero
// polynomial has no coefficients and degree kZeroDegree.
class Poly {
 public:
  // Below every real degree, and 1 + 2 * kZeroDegree still does not overflow.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min() / 4;

  Poly() = default;
  explicit Poly(std::vector<Symbol> coeffs);
  static Poly constant(Symbol c);

  int degree() const noexcept {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const Symbol> coeffs() const noexcept { return coeffs_; }
  Symbol coeff(std::size_t i) const noexcept {
    return i < coeffs_.size() ? coeffs_[i] : Symbol{0};
  }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim();
  std::vector<Symbol> coeffs_;
};

Symbol poly_eval(const Field& f, const Poly& p, Symbol x);
// p(x) * (x - a)
Poly poly_mul_linear(const Field& f, const Poly& p, Symbol a);
// p + s * q
Poly poly_add_scaled(const Field& f, const Poly& p, const Poly& q, Symbol s);
Poly poly_scale(const Field& f, const Poly& p, Symbol s);
Poly poly_mul(const Field& f, const Poly& p, const Poly& q);
// Formal derivative.
Poly poly_derivative(const Poly& p);

// prod_{j in exponents} (point - alpha^j); 1 for an empty set.
Symbol prod_diff(const Field& f, Symbol point,
                 std::span<const std::uint32_t> exponents);

}  // namespace prs
