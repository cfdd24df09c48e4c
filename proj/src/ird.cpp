#include "prs/ird.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "prs/error.hpp"
#include "timer.hpp"

namespace prs {

int wb_rank(const Poly& n, const Poly& w) noexcept {
  return std::max(2 * w.degree(), 1 + 2 * n.degree());
}

WbStep wb_update(const Field& f, WbState& s, Symbol x, Symbol y) {
  WbStep step;
  const Symbol b = poly_eval(f, s.omega, x) ^ f.mul(y, poly_eval(f, s.lambda, x));
  step.b = b;
  if (b == 0) {
    s.theta = poly_mul_linear(f, s.theta, x);
    s.phi = poly_mul_linear(f, s.phi, x);
  } else {
    const Symbol a = poly_eval(f, s.theta, x) ^ f.mul(y, poly_eval(f, s.phi, x));
    step.a = a;
    Poly theta = poly_mul_linear(f, s.omega, x);
    Poly phi = poly_mul_linear(f, s.lambda, x);
    // Characteristic 2: b*Theta - a*Omega == b*Theta + a*Omega.
    s.omega = poly_add_scaled(f, poly_scale(f, s.theta, b), s.omega, a);
    s.lambda = poly_add_scaled(f, poly_scale(f, s.phi, b), s.lambda, a);
    s.theta = std::move(theta);
    s.phi = std::move(phi);
  }
  if (wb_rank(s.omega, s.lambda) > wb_rank(s.theta, s.phi)) {
    std::swap(s.omega, s.theta);
    std::swap(s.lambda, s.phi);
    step.swapped = true;
  }
  return step;
}

std::vector<std::uint32_t> chien_count(const Field& f, const Poly& lambda,
                                       std::span<const std::uint32_t> positions) {
  std::vector<std::uint32_t> roots;
  if (lambda.degree() <= 0) return roots;
  auto c = lambda.coeffs();
  for (std::uint32_t j : positions) {
    Symbol acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.mul_exp(acc, j) ^ *it;
    if (acc == 0) roots.push_back(j);
  }
  return roots;
}

namespace {

// Chien search that gives up once deg(lambda) roots are out of reach: a
// locator of degree d must vanish at d accessed points, so more than
// |positions| - d non-roots settles the question after at most k_hat + l
// evaluations when the hypothesis is wrong.
std::optional<std::vector<std::uint32_t>> locate_errors(const Field& f, const Poly& lambda,
                                                        std::span<const std::uint32_t> positions) {
  const int deg = lambda.degree();
  std::vector<std::uint32_t> roots;
  if (deg <= 0) return roots;
  if (static_cast<std::size_t>(deg) > positions.size()) return std::nullopt;
  const std::size_t max_misses = positions.size() - static_cast<std::size_t>(deg);
  std::size_t misses = 0;
  auto c = lambda.coeffs();
  for (std::uint32_t j : positions) {
    Symbol acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.mul_exp(acc, j) ^ *it;
    if (acc == 0) {
      roots.push_back(j);
    } else if (++misses > max_misses) {
      return std::nullopt;
    }
  }
  return roots;
}

}  // namespace

namespace {

bool degree_admissible(int deg, std::uint32_t stage, Acceptance rule) {
  if (rule == Acceptance::ExactStage) return deg == static_cast<int>(stage);
  return deg >= 0 && deg <= static_cast<int>(stage);
}

// Given the located roots, picks the trusted set or rejects.
StepOutcome select_trusted(const CodeParams& params, int deg,
                           std::span<const Received> accessed,
                           std::optional<std::vector<std::uint32_t>> located) {
  StepOutcome out;
  if (!located || located->size() != static_cast<std::size_t>(deg) ||
      located->size() > params.n - params.k_hat) {
    return out;
  }
  out.error_positions = std::move(*located);

  std::vector<Received> sorted(accessed.begin(), accessed.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Received& a, const Received& b) { return a.position < b.position; });
  auto is_error = [&](std::uint32_t p) {
    return std::find(out.error_positions.begin(), out.error_positions.end(), p) !=
           out.error_positions.end();
  };
  for (const auto& r : sorted) {
    if (out.trusted.size() == params.k_hat) break;
    if (!is_error(r.position)) out.trusted.push_back(r);
  }
  if (out.trusted.size() != params.k_hat) {
    out.trusted.clear();
    out.error_positions.clear();
    return out;
  }
  out.verdict = Verdict::Success;
  return out;
}

}  // namespace

StepOutcome conclude_stage(const CodeParams& params, const Poly& lambda,
                           std::span<const Received> accessed, std::uint32_t stage,
                           Acceptance rule) {
  const int deg = lambda.degree();
  if (!degree_admissible(deg, stage, rule)) return {};
  std::vector<std::uint32_t> positions;
  positions.reserve(accessed.size());
  for (const auto& r : accessed) positions.push_back(r.position);
  return select_trusted(params, deg, accessed, locate_errors(params.gf(), lambda, positions));
}

GroupVector erasure_decode(const CodeParams& params, std::span<const Received> trusted) {
  const Field& f = params.gf();
  const std::uint32_t k = params.k_hat;
  if (trusted.size() != k) {
    throw Error(ErrorCode::WrongCount, "erasure decoding needs exactly k_hat symbols");
  }
  std::vector<std::uint8_t> seen(params.n, 0);
  std::vector<std::uint32_t> pos(k);
  std::vector<Symbol> xs(k);
  std::vector<Symbol> c(k);
  for (std::uint32_t d = 0; d < k; ++d) {
    pos[d] = trusted[d].position;
    if (pos[d] >= params.n) throw Error(ErrorCode::OutOfRange, "position outside code");
    // Distinct points make the Vandermonde system nonsingular.
    if (seen[pos[d]]++) throw Error(ErrorCode::DuplicatePosition, "repeated position");
    xs[d] = f.exp(pos[d]);
    c[d] = trusted[d].value;
  }

  const std::uint32_t n = f.n();
  const auto exp = f.exp_table();
  for (std::uint32_t level = 1; level < k; ++level) {
    for (std::uint32_t d = k - 1; d >= level; --d) {
      const Symbol num = c[d] ^ c[d - 1];
      c[d] = num == 0 ? Symbol{0}
                      : exp[f.log(num) + n - f.log(static_cast<Symbol>(xs[d] ^ xs[d - level]))];
    }
  }

  // Newton form -> monomial basis.
  GroupVector u(k, 0);
  u[0] = c[k - 1];
  for (std::uint32_t d = k - 1; d-- > 0;) {
    const std::uint32_t top = k - 1 - d;  // current degree + 1
    for (std::uint32_t i = top; i >= 1; --i) u[i] = u[i - 1] ^ f.mul_exp(u[i], pos[d]);
    u[0] = f.mul_exp(u[0], pos[d]) ^ c[d];
  }
  return u;
}

IncrementalDecoder::IncrementalDecoder(const CodeParams& params,
                                       std::span<const Received> initial)
    : params_(params) {
  const Field& f = params_.gf();
  const std::uint32_t n = params_.n;
  if (initial.size() != params_.k_hat) {
    throw Error(ErrorCode::WrongCount, "decoder needs exactly k_hat initial symbols, got " +
                                           std::to_string(initial.size()));
  }
  slot_.assign(n, Slot::Erased);
  for (const auto& r : initial) {
    if (r.position >= n) throw Error(ErrorCode::OutOfRange, "position outside code");
    if (slot_[r.position] == Slot::Initial) {
      throw Error(ErrorCode::DuplicatePosition,
                  "position " + std::to_string(r.position) + " given twice");
    }
    slot_[r.position] = Slot::Initial;
  }
  u0_.reserve(n - params_.k_hat);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (slot_[j] == Slot::Erased) {
      u0_.push_back(j);
      u0_alpha_.push_back(f.exp(j));
    }
  }
  unaccessed_ = u0_.size();

  accessed_.assign(initial.begin(), initial.end());
  lambda_at_.assign(initial.size(), 1);
  phi_at_.assign(initial.size(), 0);
  init_alpha_.reserve(initial.size());
  init_log_f_.reserve(initial.size());
  for (const auto& r : initial) {
    const Symbol a = f.exp(r.position);
    init_alpha_.push_back(a);
    if (r.value == 0) {
      init_log_f_.push_back(-1);
      continue;
    }
    // log T(alpha^j) = sum over U0 of log(alpha^j - alpha^u).
    std::uint64_t log_t = 0;
    for (Symbol au : u0_alpha_) log_t += f.log(static_cast<Symbol>(a ^ au));
    init_log_f_.push_back(static_cast<std::int64_t>(
        (log_t + f.log(r.value) + r.position) % n));
  }
}

bool IncrementalDecoder::is_unaccessed(std::uint32_t position) const {
  return position < slot_.size() && slot_[position] == Slot::Erased;
}

Symbol IncrementalDecoder::f_value(std::uint32_t position) const {
  for (std::size_t d = 0; d < params_.k_hat; ++d) {
    if (accessed_[d].position == position) {
      return init_log_f_[d] < 0 ? Symbol{0} : params_.gf().exp(init_log_f_[d]);
    }
  }
  throw Error(ErrorCode::OutOfRange, "not an initial position");
}

Symbol IncrementalDecoder::syndrome_sample(std::uint32_t position, Symbol value) const {
  if (position >= slot_.size() || slot_[position] == Slot::Initial) {
    throw Error(ErrorCode::PositionNotErased,
                "position " + std::to_string(position) + " is not in the initial erasure set");
  }
  const Field& f = params_.gf();
  const std::uint32_t n = params_.n;
  const auto exp = f.exp_table();
  const Symbol xi = f.exp(position);

  Symbol sum = 0;
  for (std::size_t d = 0; d < init_alpha_.size(); ++d) {
    const std::int64_t lf = init_log_f_[d];
    if (lf < 0) continue;
    const Symbol diff = init_alpha_[d] ^ xi;
    sum ^= exp[static_cast<std::size_t>(lf) + n - f.log(diff)];
  }
  if (value != 0) {
    // T'(alpha^i) = prod over U0 \ {i} of (alpha^i - alpha^u).
    std::uint64_t log_tp = 0;
    for (Symbol au : u0_alpha_) {
      const Symbol diff = xi ^ au;
      if (diff != 0) log_tp += f.log(diff);
    }
    sum ^= f.exp(static_cast<std::int64_t>((log_tp + f.log(value) + position) % n));
  }
  return sum;
}

void IncrementalDecoder::absorb(Received first, Received second, PhaseTimes* times) {
  const Field& f = params_.gf();
  Sample s1, s2;
  {
    detail::ScopedPhase timer(times ? &times->elp : nullptr);
    if (unaccessed_ < 2) {
      throw Error(ErrorCode::ExhaustedPositions, "fewer than two un-accessed positions remain");
    }
    if (first.position == second.position) {
      throw Error(ErrorCode::DuplicatePosition, "stage symbols share a position");
    }
    for (const Received& r : {first, second}) {
      if (!is_unaccessed(r.position)) {
        throw Error(ErrorCode::PositionNotErased,
                    "position " + std::to_string(r.position) + " is not un-accessed");
      }
    }
    s1 = {first.position, f.exp(first.position), syndrome_sample(first.position, first.value)};
    s2 = {second.position, f.exp(second.position),
          syndrome_sample(second.position, second.value)};
  }
  {
    detail::ScopedPhase timer(times ? &times->chien : nullptr);
    for (const Received& r : {first, second}) {
      slot_[r.position] = Slot::Sampled;
      accessed_.push_back(r);
      lambda_at_.push_back(poly_eval(f, wb_.lambda, f.exp(r.position)));
      phi_at_.push_back(poly_eval(f, wb_.phi, f.exp(r.position)));
    }
  }
  unaccessed_ -= 2;
  ++stage_;
  for (const Sample& s : {s1, s2}) {
    WbStep step;
    {
      detail::ScopedPhase timer(times ? &times->elp : nullptr);
      samples_.push_back(s);
      step = wb_update(f, wb_, s.x, s.y);
    }
    detail::ScopedPhase timer(times ? &times->chien : nullptr);
    for (std::size_t i = 0; i < accessed_.size(); ++i) {
      const Symbol shift = static_cast<Symbol>(f.exp(accessed_[i].position) ^ s.x);
      if (step.b == 0) {
        phi_at_[i] = f.mul(phi_at_[i], shift);
      } else {
        const Symbol lam = lambda_at_[i];
        lambda_at_[i] = f.mul(step.b, phi_at_[i]) ^ f.mul(step.a, lam);
        phi_at_[i] = f.mul(shift, lam);
      }
    }
    if (step.swapped) std::swap(lambda_at_, phi_at_);
  }
}

StepOutcome IncrementalDecoder::conclude(PhaseTimes* times) const {
  detail::ScopedPhase timer(times ? &times->chien : nullptr);
  const int deg = wb_.lambda.degree();
  if (!degree_admissible(deg, stage_, Acceptance::ExactStage)) return {};
  std::vector<std::uint32_t> roots;
  if (deg > 0) {
    for (std::size_t i = 0; i < accessed_.size(); ++i) {
      if (lambda_at_[i] == 0) roots.push_back(accessed_[i].position);
    }
  }
  return select_trusted(params_, deg, accessed_, std::move(roots));
}

StepOutcome IncrementalDecoder::step(Received first, Received second, PhaseTimes* times) {
  absorb(first, second, times);
  return conclude(times);
}

}  // namespace prs
