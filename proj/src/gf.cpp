#include "prs/gf.hpp"

#include <bit>
#include <string>

#include "prs/error.hpp"

namespace prs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::UnsupportedWidth: return "UnsupportedWidth";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DuplicatePosition: return "DuplicatePosition";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::PositionNotErased: return "PositionNotErased";
    case ErrorCode::ExhaustedPositions: return "ExhaustedPositions";
    case ErrorCode::InsufficientLiveNodes: return "InsufficientLiveNodes";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::uint32_t Field::default_poly(unsigned m) {
  switch (m) {
    case 3: return 0xB;        // x^3+x+1
    case 4: return 0x13;       // x^4+x+1
    case 5: return 0x25;       // x^5+x^2+1
    case 6: return 0x43;       // x^6+x+1
    case 7: return 0x89;       // x^7+x^3+1
    case 8: return 0x11D;      // x^8+x^4+x^3+x^2+1
    case 9: return 0x211;      // x^9+x^4+1
    case 10: return 0x409;     // x^10+x^3+1
    case 11: return 0x805;     // x^11+x^2+1
    case 12: return 0x1053;    // x^12+x^6+x^4+x+1
    case 13: return 0x201B;    // x^13+x^4+x^3+x+1
    case 14: return 0x4443;    // x^14+x^10+x^6+x+1
    case 15: return 0x8003;    // x^15+x+1
    case 16: return 0x1100B;   // x^16+x^12+x^3+x+1
    default:
      throw Error(ErrorCode::UnsupportedWidth,
                  "no field of width " + std::to_string(m));
  }
}

Field::Field(unsigned m, std::uint32_t prim_poly) : m_(m), prim_poly_(prim_poly) {
  if (m < kMinWidth || m > kMaxWidth) {
    throw Error(ErrorCode::UnsupportedWidth,
                "field width must be in [3, 16], got " + std::to_string(m));
  }
  if (std::bit_width(prim_poly) != m + 1) {
    throw Error(ErrorCode::NotPrimitive,
                "polynomial degree does not match width " + std::to_string(m));
  }
  n_ = (1u << m) - 1;
  exp_.assign(2 * static_cast<std::size_t>(n_), 0);
  log_.assign(static_cast<std::size_t>(n_) + 1, 0);

  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (i > 0 && x == 1) {
      throw Error(ErrorCode::NotPrimitive,
                  "x has order " + std::to_string(i) + " < " + std::to_string(n_));
    }
    exp_[i] = static_cast<Symbol>(x);
    log_[x] = i;
    x <<= 1;
    if (x & (1u << m)) x ^= prim_poly;
  }
  // A reducible polynomial can revisit a value other than 1 without the
  // cycle closing at n; catch that by demanding the walk closes exactly.
  if (x != 1) {
    throw Error(ErrorCode::NotPrimitive, "power sequence does not close at n");
  }
  for (std::uint32_t i = n_; i < 2 * n_; ++i) exp_[i] = exp_[i - n_];
}

Symbol Field::div(Symbol a, Symbol b) const {
  if (b == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (a == 0) return 0;
  return exp_[log_[a] + n_ - log_[b]];
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return exp_[n_ - log_[a]];
}

Symbol Field::pow(Symbol a, std::int64_t e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw Error(ErrorCode::DivisionByZero, "negative power of zero");
    return 0;
  }
  return exp(static_cast<std::int64_t>(log_[a]) * (e % static_cast<std::int64_t>(n_)));
}

FieldPtr make_field(unsigned m, std::uint32_t prim_poly) {
  return std::make_shared<const Field>(m, prim_poly);
}

FieldPtr make_field(unsigned m) { return make_field(m, Field::default_poly(m)); }

Poly::Poly(std::vector<Symbol> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(Symbol c) { return Poly(std::vector<Symbol>{c}); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Symbol poly_eval(const Field& f, const Poly& p, Symbol x) {
  auto c = p.coeffs();
  Symbol acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.mul(acc, x) ^ *it;
  return acc;
}

Poly poly_mul_linear(const Field& f, const Poly& p, Symbol a) {
  if (p.is_zero()) return {};
  auto c = p.coeffs();
  std::vector<Symbol> out(c.size() + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i + 1] ^= c[i];
    out[i] ^= f.mul(a, c[i]);
  }
  return Poly(std::move(out));
}

Poly poly_add_scaled(const Field& f, const Poly& p, const Poly& q, Symbol s) {
  auto pc = p.coeffs();
  auto qc = q.coeffs();
  std::vector<Symbol> out(std::max(pc.size(), qc.size()), 0);
  for (std::size_t i = 0; i < pc.size(); ++i) out[i] = pc[i];
  if (s != 0) {
    for (std::size_t i = 0; i < qc.size(); ++i) out[i] ^= f.mul(s, qc[i]);
  }
  return Poly(std::move(out));
}

Poly poly_scale(const Field& f, const Poly& p, Symbol s) {
  if (s == 0) return {};
  std::vector<Symbol> out(p.coeffs().begin(), p.coeffs().end());
  for (auto& c : out) c = f.mul(s, c);
  return Poly(std::move(out));
}

Poly poly_mul(const Field& f, const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return {};
  auto pc = p.coeffs();
  auto qc = q.coeffs();
  std::vector<Symbol> out(pc.size() + qc.size() - 1, 0);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    if (pc[i] == 0) continue;
    for (std::size_t j = 0; j < qc.size(); ++j) out[i + j] ^= f.mul(pc[i], qc[j]);
  }
  return Poly(std::move(out));
}

Poly poly_derivative(const Poly& p) {
  auto c = p.coeffs();
  if (c.size() <= 1) return {};
  std::vector<Symbol> out(c.size() - 1, 0);
  // Characteristic 2: i * c_i is c_i for odd i and 0 for even i.
  for (std::size_t i = 1; i < c.size(); i += 2) out[i - 1] = c[i];
  return Poly(std::move(out));
}

Symbol prod_diff(const Field& f, Symbol point,
                 std::span<const std::uint32_t> exponents) {
  std::uint64_t log_sum = 0;
  for (std::uint32_t j : exponents) {
    Symbol d = point ^ f.exp(j);
    if (d == 0) return 0;
    log_sum += f.log(d);
  }
  return f.exp(static_cast<std::int64_t>(log_sum % f.n()));
}

}  // namespace prs
