#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prs/codec.hpp"
#include "prs/gf.hpp"

namespace prs {

// One fetched symbol: the storage position it came from and its value.
struct Received {
  std::uint32_t position = 0;
  Symbol value = 0;

  friend bool operator==(const Received&, const Received&) = default;
};

// Wall-clock seconds spent per decoding phase, accumulated across calls.
struct PhaseTimes {
  double elp = 0;      // syndrome samples, F_j, Welch-Berlekamp
  double chien = 0;    // root search and trusted-set selection
  double inv_mat = 0;  // interpolation of the information polynomial
  double crc = 0;

  double total() const noexcept { return elp + chien + inv_mat + crc; }
  PhaseTimes& operator+=(const PhaseTimes& o) noexcept {
    elp += o.elp;
    chien += o.chien;
    inv_mat += o.inv_mat;
    crc += o.crc;
    return *this;
  }
};

// Rational interpolation state. (omega, lambda) is the candidate solution of
// lambda(x_s) * y_s = omega(x_s); (theta, phi) is the companion pair.
struct WbState {
  Poly lambda = Poly::constant(1);
  Poly omega;
  Poly phi;
  Poly theta = Poly::constant(1);

  friend bool operator==(const WbState&, const WbState&) = default;
};

// max(2 deg w, 1 + 2 deg n); total thanks to the zero-polynomial sentinel.
int wb_rank(const Poly& n, const Poly& w) noexcept;

// Coefficients of one update, enough to replay it on point values:
// b == 0 leaves lambda and scales phi by (z - x); otherwise lambda becomes
// b*phi + a*lambda and phi becomes (z - x)*lambda. `swapped` then exchanges
// the two pairs.
struct WbStep {
  Symbol b = 0;
  Symbol a = 0;
  bool swapped = false;
};

// Consumes one interpolation point (x, y).
WbStep wb_update(const Field& f, WbState& state, Symbol x, Symbol y);

struct Sample {
  std::uint32_t position = 0;
  Symbol x = 0;  // alpha^position
  Symbol y = 0;  // generalized syndrome at x

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Verdict { Success, ContinueNeeded };

struct StepOutcome {
  Verdict verdict = Verdict::ContinueNeeded;
  // k_hat non-error symbols, ascending by position. Empty unless Success.
  std::vector<Received> trusted;
  // Roots of lambda among the accessed positions.
  std::vector<std::uint32_t> error_positions;
};

// How a locator is judged once the samples are in.
//   ExactStage: deg lambda must equal the stage (progressive decoding).
//   UpToStage:  deg lambda may be anything up to the stage (one-shot decoding
//               with a known error budget).
enum class Acceptance { ExactStage, UpToStage };

// Positions j in `positions` with lambda(alpha^j) == 0, in input order.
std::vector<std::uint32_t> chien_count(const Field& f, const Poly& lambda,
                                       std::span<const std::uint32_t> positions);

// Degree check, Chien search over the accessed positions and selection of
// the trusted set.
StepOutcome conclude_stage(const CodeParams& params, const Poly& lambda,
                           std::span<const Received> accessed, std::uint32_t stage,
                           Acceptance rule);

// Recovers the k_hat information symbols from k_hat error-free symbols at
// distinct positions by Newton interpolation, O(k_hat^2).
GroupVector erasure_decode(const CodeParams& params, std::span<const Received> trusted);

// Incremental error-erasure decoder for one coding group.
//
// The initial k_hat symbols fix T(x), whose roots are the n - k_hat positions
// not yet accessed (U0). Each stage takes two more symbols from U0, samples
// the generalized syndrome at their evaluation points and feeds the samples
// to the Welch-Berlekamp recursion. Nothing computed in earlier stages is
// ever recomputed.
class IncrementalDecoder {
 public:
  // Throws WrongCount, DuplicatePosition or OutOfRange.
  IncrementalDecoder(const CodeParams& params, std::span<const Received> initial);

  // Generalized syndrome at alpha^position with the given received value.
  // `position` must lie in U0. Throws PositionNotErased otherwise.
  Symbol syndrome_sample(std::uint32_t position, Symbol value) const;

  // Samples and interpolates two new symbols; advances the stage.
  void absorb(Received first, Received second, PhaseTimes* times = nullptr);
  // Judges the locator at the current stage.
  StepOutcome conclude(PhaseTimes* times = nullptr) const;
  // absorb + conclude. Throws ExhaustedPositions if fewer than two
  // un-accessed positions remain.
  StepOutcome step(Received first, Received second, PhaseTimes* times = nullptr);

  std::uint32_t stage() const noexcept { return stage_; }
  const WbState& wb() const noexcept { return wb_; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::span<const Received> accessed() const noexcept { return accessed_; }
  std::span<const std::uint32_t> initial_erasures() const noexcept { return u0_; }
  std::size_t unaccessed_count() const noexcept { return unaccessed_; }
  bool is_unaccessed(std::uint32_t position) const;
  // F_j = r_j * alpha^j * T(alpha^j) for an initial position j.
  Symbol f_value(std::uint32_t position) const;

 private:
  enum class Slot : std::uint8_t { Initial, Erased, Sampled };

  CodeParams params_;
  std::vector<Slot> slot_;
  std::vector<std::uint32_t> u0_;
  std::vector<Symbol> u0_alpha_;
  // Per initial position: alpha^j and log F_j (-1 when F_j = 0).
  std::vector<Symbol> init_alpha_;
  std::vector<std::int64_t> init_log_f_;
  std::vector<Received> accessed_;
  // lambda and phi evaluated at alpha^position for each accessed symbol,
  // replayed through every update so root search needs no evaluation.
  std::vector<Symbol> lambda_at_;
  std::vector<Symbol> phi_at_;
  std::vector<Sample> samples_;
  WbState wb_;
  std::uint32_t stage_ = 0;
  std::size_t unaccessed_ = 0;
};

}  // namespace prs
