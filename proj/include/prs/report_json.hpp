#pragma once

#include <json.hpp>

#include "prs/analytics.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"

namespace prs {

nlohmann::json to_json(const RetrievalReport& report);
nlohmann::json to_json(const AnalyticResult& result);
nlohmann::json to_json(const MonteCarloSummary& summary);

// "accesses,frequency" rows of the normalized histogram.
std::string histogram_csv(const MonteCarloSummary& summary);

}  // namespace prs
