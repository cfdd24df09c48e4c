#include "prs/report_json.hpp"

#include <cmath>
#include <sstream>

namespace prs {

nlohmann::json to_json(const RetrievalReport& report) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : report.trace) {
    trace.push_back({{"group", t.group},
                     {"stage", t.stage},
                     {"fetched", t.fetched},
                     {"verdict", t.verdict}});
  }
  return {{"outcome", report.outcome == Outcome::Success ? "success" : "fail"},
          {"nodes_accessed", report.nodes_accessed},
          {"analysis_accesses", report.analysis_accesses},
          {"live_nodes", report.live_nodes},
          {"stages", report.stages},
          {"max_stage", report.max_stage()},
          {"crc_checks", report.crc_checks},
          {"trace", std::move(trace)}};
}

nlohmann::json to_json(const AnalyticResult& r) {
  nlohmann::json pmf = nlohmann::json::array();
  for (const auto& [accesses, mass] : r.success_pmf) {
    pmf.push_back({{"accesses", accesses}, {"probability", mass}});
  }
  return {{"n", r.n},
          {"k_hat", r.k_hat},
          {"p", r.p},
          {"s", r.s},
          {"avg_accesses", r.avg_accesses},
          {"pr_success", r.pr_success},
          {"decode_stages", r.avg_accesses > r.k_hat
                                ? static_cast<long>(std::ceil((r.avg_accesses - r.k_hat) / 2))
                                : 0L},
          {"access_pmf", std::move(pmf)},
          {"terminal", {{"accesses", r.effective_n()},
                        {"probability", r.fail_mass()},
                        {"order_failure", r.fail_order_mass},
                        {"excess_failure", r.fail_excess_mass}}}};
}

nlohmann::json to_json(const MonteCarloSummary& s) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [accesses, count] : s.histogram) {
    hist.push_back({{"accesses", accesses}, {"frequency", count}});
  }
  return {{"trials", s.trials},
          {"mean_accesses", s.mean_accesses},
          {"mean_raw_accesses", s.mean_raw_accesses},
          {"success_rate", s.success_rate},
          {"silent_corruptions", s.silent_corruptions},
          {"histogram", std::move(hist)},
          {"seeds", s.seeds}};
}

std::string histogram_csv(const MonteCarloSummary& s) {
  std::ostringstream out;
  out << "accesses,frequency\n";
  for (const auto& [accesses, count] : s.histogram) out << accesses << ',' << count << '\n';
  return out.str();
}

}  // namespace prs
