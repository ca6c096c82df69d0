#include "priorlens/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "priorlens/complexity.hpp"
#include "priorlens/errors.hpp"

namespace priorlens {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Metadata& Metadata::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return *this;
    }
  }
  entries_.emplace_back(key, value);
  return *this;
}

Metadata& Metadata::set(const std::string& key, double value) { return set(key, format_number(value)); }

Metadata& Metadata::set(const std::string& key, std::uint64_t value) {
  return set(key, std::to_string(value));
}

std::string Metadata::csv_header() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += "# " + k + "=" + v + "\n";
  return out;
}

nlohmann::ordered_json Metadata::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

std::string thist_csv(const THistogram& h, const Metadata& meta) {
  std::string out = meta.csv_header() + "t,count,probability\n";
  for (std::size_t t = 0; t < h.counts().size(); ++t) {
    out += std::to_string(t) + "," + std::to_string(h.counts()[t]) + "," +
           format_number(h.probability(t)) + "\n";
  }
  return out;
}

std::string rank_csv(const RankCurve& r, const Metadata& meta) {
  std::string out = meta.csv_header() + "rank,probability\n";
  for (const auto& p : r.points) out += std::to_string(p.rank) + "," + format_number(p.probability) + "\n";
  return out;
}

std::string functions_csv(const FreqTable& f, const Metadata& meta) {
  std::string out = meta.csv_header() + "pattern,m,t,H,K_LZ,count,probability\n";
  const double total = static_cast<double>(f.samples());
  for (const auto& [p, c] : f.sorted()) {
    out += p.to_hex() + "," + std::to_string(p.size()) + "," + std::to_string(t_value(p)) + "," +
           format_number(entropy(p)) + "," + format_number(p.size() >= 2 ? k_lz(p) : 0.0) + "," +
           std::to_string(c) + "," + format_number(static_cast<double>(c) / total) + "\n";
  }
  return out;
}

std::string law_csv(const std::vector<double>& p, const Metadata& meta) {
  std::string out = meta.csv_header() + "t,probability\n";
  for (std::size_t t = 0; t < p.size(); ++t) out += std::to_string(t) + "," + format_number(p[t]) + "\n";
  return out;
}

RankCurve read_rank_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  RankCurve r;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path + ": row " + std::to_string(line_no) + ": expected rank,probability");
    }
    try {
      std::size_t used = 0;
      const unsigned long long rank = std::stoull(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("rank");
      const std::string ps = line.substr(comma + 1);
      const double prob = std::stod(ps, &used);
      if (used != ps.size()) throw std::invalid_argument("probability");
      r.points.push_back({static_cast<std::size_t>(rank), prob, OutputPattern(), 0});
    } catch (const std::exception&) {
      if (!header_seen && r.points.empty()) {
        header_seen = true;
        continue;
      }
      throw ParseError(path + ": row " + std::to_string(line_no) + ": non-numeric cell");
    }
  }
  return r;
}

nlohmann::ordered_json campaign_json(const CampaignResult& r, const Metadata& meta) {
  nlohmann::ordered_json j;
  j["metadata"] = meta.to_json();
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["shards"] = r.shards;
  j["distinct_functions"] = r.freq.distinct();
  j["thist"] = r.thist.counts();
  return j;
}

nlohmann::ordered_json network_json(const NetSpec& spec, const NetParams& params) {
  params.check_shapes(spec);
  nlohmann::ordered_json j;
  j["widths"] = spec.widths;
  j["activation"] = to_string(spec.activation);
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  nlohmann::ordered_json bs = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < params.weights[l].rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(params.weights[l].cols()));
      for (Eigen::Index c = 0; c < params.weights[l].cols(); ++c) row[static_cast<std::size_t>(c)] = params.weights[l](i, c);
      w.push_back(row);
    }
    ws.push_back(w);
    bs.push_back(std::vector<double>(params.biases[l].data(), params.biases[l].data() + params.biases[l].size()));
  }
  j["weights"] = ws;
  j["biases"] = bs;
  return j;
}

std::pair<NetSpec, NetParams> network_from_json(const nlohmann::json& j) {
  try {
    NetSpec spec;
    spec.widths = j.at("widths").get<std::vector<int>>();
    spec.activation = parse_activation(j.at("activation").get<std::string>());
    spec.validate();
    NetParams params;
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    for (std::size_t l = 0; l < ws.size(); ++l) {
      const int out = spec.widths.at(l + 1);
      const int in = spec.widths.at(l);
      Eigen::MatrixXd w(out, in);
      for (int i = 0; i < out; ++i) {
        for (int c = 0; c < in; ++c) w(i, c) = ws.at(l).at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>();
      }
      const auto b = bs.at(l).get<std::vector<double>>();
      params.weights.push_back(w);
      params.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    }
    params.check_shapes(spec);
    return {spec, params};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("network JSON: ") + e.what());
  }
}

namespace {

nlohmann::ordered_json node_json(const ConditionTree& tree, int id) {
  const auto& node = tree.nodes()[static_cast<std::size_t>(id)];
  nlohmann::ordered_json j;
  if (node.leaf >= 0) {
    const auto& leaf = tree.leaves()[static_cast<std::size_t>(node.leaf)];
    j["signature"] = signature_string(leaf.sigma, leaf.sigma.size());
    std::vector<std::string> conds;
    for (const auto& c : leaf.conditions) conds.push_back(c.to_string());
    j["conditions"] = conds;
    j["pattern"] = leaf.pattern.to_hex();
    j["witness"] = leaf.witness;
    return j;
  }
  j["question"] = node.question->question();
  j["less"] = {{"condition", node.question->complement().to_string()}, {"node", node_json(tree, node.less)}};
  j["greater"] = {{"condition", node.question->to_string()}, {"node", node_json(tree, node.greater)}};
  return j;
}

}  // namespace

nlohmann::ordered_json tree_json(const ConditionTree& tree) {
  nlohmann::ordered_json j;
  j["n"] = tree.n();
  j["t"] = tree.t();
  j["leaves"] = tree.leaves().size();
  j["root"] = node_json(tree, tree.root());
  return j;
}

nlohmann::ordered_json zipf_json(const ZipfFit& fit, const Metadata& meta) {
  nlohmann::ordered_json j;
  j["metadata"] = meta.to_json();
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["n_o"] = std::isfinite(fit.n_o) ? nlohmann::ordered_json(fit.n_o) : nlohmann::ordered_json("inf");
  j["residual"] = fit.residual;
  j["points"] = fit.points;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failure: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return ss.str();
}

}  // namespace priorlens
