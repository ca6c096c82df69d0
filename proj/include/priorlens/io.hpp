#pragma once

// Serialization: CSV tables with a metadata header, JSON documents.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "priorlens/conditions.hpp"
#include "priorlens/estimator.hpp"
#include "priorlens/netsample.hpp"
#include "priorlens/tables.hpp"

namespace priorlens {

// Ordered key=value pairs written as "# key=value" lines ahead of CSV data and
// as a "metadata" object in JSON.
class Metadata {
 public:
  Metadata& set(const std::string& key, const std::string& value);
  Metadata& set(const std::string& key, double value);
  Metadata& set(const std::string& key, std::uint64_t value);

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }
  [[nodiscard]] std::string csv_header() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// 12 significant digits, '.' decimal, independent of locale.
std::string format_number(double v);

std::string thist_csv(const THistogram& h, const Metadata& meta);
std::string rank_csv(const RankCurve& r, const Metadata& meta);
// pattern,m,t,H,K_LZ,count,probability for every pattern, rank order.
std::string functions_csv(const FreqTable& f, const Metadata& meta);
std::string law_csv(const std::vector<double>& p, const Metadata& meta);

// Reads "rank,probability" rows, skipping '#' lines and a header row.
RankCurve read_rank_csv(const std::string& path);

nlohmann::ordered_json campaign_json(const CampaignResult& r, const Metadata& meta);
nlohmann::ordered_json network_json(const NetSpec& spec, const NetParams& params);
std::pair<NetSpec, NetParams> network_from_json(const nlohmann::json& j);
nlohmann::ordered_json tree_json(const ConditionTree& tree);
nlohmann::ordered_json zipf_json(const ZipfFit& fit, const Metadata& meta);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace priorlens
