#pragma once

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "auxmean/adversary.hpp"
#include "auxmean/gaussian.hpp"
#include "auxmean/verify.hpp"

namespace auxmean {

/// %.17g — doubles round-trip through text losslessly.
std::string format_double17(double value);

/// Parses {"mean": [...], "cov": [[...]]} through the checked constructor.
GaussianMoments moments_from_json(const nlohmann::json& j);

/// Parses {"p": <moments>, "q": <moments>, ...} as written by the adversary
/// subcommand.
std::pair<GaussianMoments, GaussianMoments> moment_pair_from_json(const nlohmann::json& j);

std::string moments_to_json(const GaussianMoments& moments);

/// Full adversary record: p, q, budget split, weight, and construction name.
std::string adversary_to_json(const AdversaryPair& pair, double s,
                              const std::string& construction);

/// One JSON object per line, fixed key order.
std::string report_to_json_line(const OracleReport& report);

}  // namespace auxmean
