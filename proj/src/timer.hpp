#pragma once

#include <chrono>

namespace prs::detail {

// Adds the scope's wall time (seconds) to *slot; no-op for a null slot.
class ScopedPhase {
 public:
  explicit ScopedPhase(double* slot) : slot_(slot) {
    if (slot_) start_ = std::chrono::steady_clock::now();
  }
  ~ScopedPhase() {
    if (slot_) {
      *slot_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                    .count();
    }
  }
  ScopedPhase(const ScopedPhase&) = delete;
  ScopedPhase& operator=(const ScopedPhase&) = delete;

 private:
  double* slot_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace prs::detail
