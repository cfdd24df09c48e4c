#include "prs/baseline.hpp"

#include <algorithm>
#include <random>

#include "prs/error.hpp"
#include "timer.hpp"

namespace prs {

RestartResult restart_decode(const CodeParams& params, std::span<const Received> accessed,
                             std::uint32_t stage, PhaseTimes* times, Acceptance rule) {
  const Field& f = params.gf();
  const std::uint32_t k = params.k_hat;
  if (accessed.size() != static_cast<std::size_t>(k) + 2 * stage) {
    throw Error(ErrorCode::WrongCount, "restart decode needs k_hat + 2 * stage symbols");
  }
  if (2 * static_cast<std::uint64_t>(stage) > params.n - k) {
    throw Error(ErrorCode::ExhaustedPositions, "stage exceeds the erasure budget");
  }

  RestartResult res;
  {
    detail::ScopedPhase timer(times ? &times->elp : nullptr);
    std::vector<std::uint8_t> initial(params.n, 0);
    for (std::uint32_t d = 0; d < k; ++d) {
      if (accessed[d].position >= params.n) {
        throw Error(ErrorCode::OutOfRange, "position outside code");
      }
      if (initial[accessed[d].position]++) {
        throw Error(ErrorCode::DuplicatePosition, "repeated initial position");
      }
    }

    // T(x) = prod over the initial erasures of (x - alpha^u).
    Poly t = Poly::constant(1);
    for (std::uint32_t u = 0; u < params.n; ++u) {
      if (!initial[u]) t = poly_mul_linear(f, t, f.exp(u));
    }
    const Poly dt = poly_derivative(t);

    std::vector<Symbol> fj(k);
    std::vector<Symbol> xj(k);
    for (std::uint32_t d = 0; d < k; ++d) {
      const auto& r = accessed[d];
      xj[d] = f.exp(r.position);
      fj[d] = f.mul(f.mul(r.value, xj[d]), poly_eval(f, t, xj[d]));
    }

    for (std::size_t s = k; s < accessed.size(); ++s) {
      const auto& r = accessed[s];
      if (r.position >= params.n || initial[r.position]) {
        throw Error(ErrorCode::PositionNotErased, "sample position is not an initial erasure");
      }
      const Symbol xi = f.exp(r.position);
      Symbol y = 0;
      for (std::uint32_t d = 0; d < k; ++d) y ^= f.div(fj[d], xj[d] ^ xi);
      y ^= f.mul(f.mul(r.value, xi), poly_eval(f, dt, xi));
      res.samples.push_back({r.position, xi, y});
    }
    for (const Sample& s : res.samples) wb_update(f, res.wb, s.x, s.y);
  }
  detail::ScopedPhase timer(times ? &times->chien : nullptr);
  res.outcome = conclude_stage(params, res.wb.lambda, accessed, stage, rule);
  return res;
}

std::optional<GroupVector> genie_decode(const CodeParams& params,
                                        std::span<const Received> access_order,
                                        std::uint32_t v, PhaseTimes* times) {
  const std::size_t need = static_cast<std::size_t>(params.k_hat) + 2 * v;
  if (need > access_order.size() || 2 * static_cast<std::uint64_t>(v) > params.n - params.k_hat) {
    return std::nullopt;
  }
  const auto used = access_order.first(need);
  std::vector<Received> trusted;
  if (v == 0) {
    trusted.assign(used.begin(), used.end());
  } else {
    RestartResult r = restart_decode(params, used, v, times, Acceptance::UpToStage);
    if (r.outcome.verdict != Verdict::Success) return std::nullopt;
    trusted = std::move(r.outcome.trusted);
  }
  detail::ScopedPhase timer(times ? &times->inv_mat : nullptr);
  return erasure_decode(params, trusted);
}

std::optional<GroupVector> genie_decode(const CodeParams& params,
                                        std::span<const Symbol> received,
                                        std::span<const std::uint32_t> live, std::uint32_t v,
                                        std::uint64_t rng_seed) {
  if (received.size() != params.n) {
    throw Error(ErrorCode::WrongCount, "received word must have n symbols");
  }
  std::vector<std::uint32_t> order(live.begin(), live.end());
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Received> access;
  access.reserve(order.size());
  for (std::uint32_t p : order) access.push_back({p, received[p]});
  return genie_decode(params, access, v);
}

}  // namespace prs
