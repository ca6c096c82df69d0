// priorlens command-line driver.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error, 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "priorlens/analytic.hpp"
#include "priorlens/complexity.hpp"
#include "priorlens/conditions.hpp"
#include "priorlens/errors.hpp"
#include "priorlens/estimator.hpp"
#include "priorlens/expressivity.hpp"
#include "priorlens/hypercube.hpp"
#include "priorlens/io.hpp"
#include "priorlens/netsample.hpp"
#include "priorlens/oracle.hpp"
#include "priorlens/rng.hpp"

namespace pl = priorlens;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worker cap from PRIORLENS_THREADS; 0 means no cap.
unsigned thread_cap() {
  const char* env = std::getenv("PRIORLENS_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(env, &used);
    if (used != std::string(env).size() || v < 1) throw std::invalid_argument("range");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw UsageError("PRIORLENS_THREADS must be a positive integer");
  }
}

pl::Metadata base_metadata(const std::string& command) {
  pl::Metadata meta;
  meta.set("tool", std::string("priorlens"));
  meta.set("version", std::string(PRIORLENS_VERSION));
  meta.set("command", command);
  return meta;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    pl::write_file(path, content);
  }
}

pl::InputSet make_inputs(const std::string& spec, int n, std::size_t subsample,
                         std::uint64_t subsample_seed) {
  if (spec == "hypercube01" || spec == "hypercube-pm1") {
    if (n < 1) throw UsageError("--n is required for hypercube inputs");
    const auto kind = spec == "hypercube01" ? pl::InputKind::hypercube01 : pl::InputKind::hypercube_pm1;
    std::optional<pl::Subsample> sub;
    if (subsample > 0) sub = pl::Subsample{subsample, subsample_seed};
    return pl::build_input_set(n, kind, sub);
  }
  if (subsample > 0) throw UsageError("--subsample applies to hypercube inputs only");
  return pl::load_input_set(spec);
}

std::vector<int> parse_int_list(const std::string& s, const std::string& flag) {
  std::vector<int> out;
  const auto range = s.find("..");
  try {
    if (range != std::string::npos) {
      const int lo = std::stoi(s.substr(0, range));
      const int hi = std::stoi(s.substr(range + 2));
      if (hi < lo) throw std::invalid_argument("empty range");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected a comma list or lo..hi range, got '" + s + "'");
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// key=value lines; '#' starts a comment. Keys become --key=value arguments
// unless the flag already appears on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::istringstream in(pl::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag + "=" + value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// sample

struct SampleOptions {
  std::string arch = "perceptron";
  int n = 0;
  std::string widths;
  std::string act = "relu";
  std::string dist = "gaussian";
  double sigma_w = 1.0;
  std::string bias_dist;
  double sigma_b = 0.0;
  std::string fan_in = "n";
  std::string inputs = "hypercube01";
  std::size_t subsample = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  std::uint64_t cutoff = pl::kDefaultCutoff;
  std::string out = ".";
  bool no_functions = false;
};

int run_sample(const SampleOptions& o, const std::string& command) {
  pl::WeightLaw law;
  law.weight = pl::parse_weight_dist(o.dist);
  law.weight_scale = o.sigma_w;
  const std::string bias = o.bias_dist.empty() ? (o.sigma_b > 0 ? "gaussian" : "none") : o.bias_dist;
  law.bias = pl::parse_bias_dist(bias);
  law.bias_scale = o.sigma_b;
  law.fan_in = pl::parse_fan_in(o.fan_in);

  pl::NetSpec spec;
  if (o.arch == "perceptron") {
    if (o.n < 1) throw UsageError("--n is required for --arch perceptron");
    spec = pl::NetSpec::perceptron(o.n, law);
  } else if (o.arch == "mlp") {
    if (o.widths.empty()) throw UsageError("--widths is required for --arch mlp");
    spec.widths = parse_int_list(o.widths, "--widths");
    spec.activation = pl::parse_activation(o.act);
    spec.law = law;
    if (o.n > 0 && o.n != spec.widths.front()) throw UsageError("--n disagrees with --widths");
  } else {
    throw UsageError("--arch must be perceptron or mlp");
  }
  spec.validate();
  const pl::InputSet inputs = make_inputs(o.inputs, spec.input_dim(), o.subsample, o.seed);

  pl::CampaignConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.shards = o.shards;
  cfg.max_threads = thread_cap();
  cfg.keep_functions = !o.no_functions;
  const pl::CampaignResult result = pl::run_campaign(spec, inputs, cfg);

  pl::Metadata meta = base_metadata(command);
  meta.set("seed", o.seed)
      .set("shards", static_cast<std::uint64_t>(o.shards))
      .set("samples", o.samples)
      .set("spec", spec.describe())
      .set("inputs", inputs.describe() + (o.inputs.rfind("hypercube", 0) == 0 ? "" : ":" + o.inputs))
      .set("rng", std::string(pl::Xoshiro256pp::kName))
      .set("threshold", std::string("output 1 iff pre-activation > 0"));

  std::filesystem::create_directories(o.out);
  const std::filesystem::path dir(o.out);
  pl::Metadata table_meta = meta;
  table_meta.set("cutoff", o.cutoff).set("cutoff_rule", std::string("rank curve keeps counts > cutoff"));
  auto json = pl::campaign_json(result, table_meta);
  pl::write_file((dir / "thist.csv").string(), pl::thist_csv(result.thist, meta));
  if (!o.no_functions) {
    const pl::RankCurve curve = pl::rank_curve(result.freq, o.cutoff);
    pl::write_file((dir / "rank.csv").string(), pl::rank_csv(curve, table_meta));
    pl::write_file((dir / "functions.csv").string(), pl::functions_csv(result.freq, meta));
    json["retained_ranks"] = curve.points.size();
  }
  json["mean_entropy"] = pl::mean_entropy(result.thist);
  json["p_t0"] = result.thist.probability(0);
  const std::size_t m = inputs.m();
  if (m >= 2) {
    const auto chi = pl::chi_square_uniformity(result.thist, m);
    json["chi_square_uniform"] = {{"statistic", chi.statistic}, {"p_value", chi.p_value}, {"dof", chi.dof}};
  }
  pl::write_file((dir / "campaign.json").string(), json.dump(2) + "\n");
  std::cerr << "wrote " << (dir / "campaign.json").string() << "\n";
  return 0;
}

// analyze gp-depth

struct GpOptions {
  int n = 0;
  std::string inputs = "hypercube01";
  std::size_t subsample = 0;
  std::string layers = "0..8";
  double sigma_w = 1.0;
  double sigma_b = 0.0;
  std::string act = "relu";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  std::string out;
};

int run_gp(const GpOptions& o, const std::string& command) {
  const pl::InputSet inputs = make_inputs(o.inputs, o.n, o.subsample, o.seed);
  const auto layers = parse_int_list(o.layers, "--layers");
  const pl::Activation act = pl::parse_activation(o.act);
  pl::GpConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.shards = o.shards;
  cfg.max_threads = thread_cap();

  pl::Metadata meta = base_metadata(command);
  meta.set("seed", o.seed)
      .set("shards", static_cast<std::uint64_t>(o.shards))
      .set("samples", o.samples)
      .set("inputs", inputs.describe())
      .set("sigma_w", o.sigma_w)
      .set("sigma_b", o.sigma_b)
      .set("activation", o.act)
      .set("depth0_kernel", std::string("sigma_b^2 + sigma_w^2 <x,x'>/n"))
      .set("rng", std::string(pl::Xoshiro256pp::kName));
  std::string csv = meta.csv_header() + "layer,mean_entropy,p_t0\n";
  for (const int l : layers) {
    if (l < 0) throw UsageError("--layers entries must be >= 0");
    const pl::THistogram h = pl::gp_t_distribution(inputs, l, o.sigma_w, o.sigma_b, cfg, act);
    csv += std::to_string(l) + "," + pl::format_number(pl::mean_entropy(h)) + "," +
           pl::format_number(h.probability(0)) + "\n";
  }
  emit(o.out, csv);
  return 0;
}

// analyze laws

int run_laws(int n, const std::string& law, const std::string& out, const std::string& command) {
  std::vector<double> p;
  if (law == "uniform") {
    p = pl::uniform_law(n);
  } else if (law == "infinitesimal-bias") {
    p = pl::infinitesimal_bias_law(n);
  } else {
    throw UsageError("--law must be uniform or infinitesimal-bias");
  }
  pl::Metadata meta = base_metadata(command);
  meta.set("n", static_cast<std::uint64_t>(n)).set("law", law);
  emit(out, pl::law_csv(p, meta));
  return 0;
}

// analyze zipf

int run_zipf(const std::string& in, std::uint64_t min_rank, const std::string& out,
             const std::string& command) {
  pl::RankCurve curve = pl::read_rank_csv(in);
  if (min_rank > 1) {
    std::erase_if(curve.points, [&](const pl::RankPoint& p) { return p.rank < min_rank; });
  }
  const pl::ZipfFit fit = pl::zipf_fit(curve);
  pl::Metadata meta = base_metadata(command);
  meta.set("input", in).set("n_o_rule", std::string("b * integral_1^N r^-a dr = 1"));
  emit(out, pl::zipf_json(fit, meta).dump(2) + "\n");
  return 0;
}

// analyze conditions

int run_conditions(int n, std::size_t t, bool json, const std::string& out) {
  const pl::ConditionTree tree = pl::build_condition_tree(n, t);
  emit(out, json ? pl::tree_json(tree).dump(2) + "\n" : tree.render());
  return 0;
}

// analyze expressivity

pl::OutputPattern parse_pattern_line(const std::string& line, int n) {
  const std::size_t m = std::size_t{1} << n;
  if (line.size() == m && line.find_first_not_of("01") == std::string::npos) {
    return pl::OutputPattern::from_bits(line);
  }
  return pl::OutputPattern::from_hex(line, m);
}

int run_expressivity(int n, const std::string& patterns, int layers, const std::string& emit_dir,
                     const std::string& out, const std::string& command) {
  if (n < 1 || n > 12) throw UsageError("--n must be in [1, 12]");
  if (layers < 0) throw UsageError("--layers must be >= 0 (0 selects the one-hidden-layer builder)");
  std::istringstream in(pl::read_file(patterns));
  std::string line;
  pl::Metadata meta = base_metadata(command);
  meta.set("n", static_cast<std::uint64_t>(n)).set("layers", static_cast<std::uint64_t>(layers));
  std::string csv = meta.csv_header() + "pattern,t,hidden_layers,hidden_width,negated,verified\n";
  if (!emit_dir.empty()) std::filesystem::create_directories(emit_dir);
  std::size_t index = 0;
  bool all_ok = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const pl::OutputPattern p = parse_pattern_line(line, n);
    const pl::CompiledNet net = layers == 0 ? pl::build_one_hidden(p, n) : pl::build_multi_layer(p, n, layers);
    const bool ok = pl::verify(net.spec, net.params, p);
    all_ok = all_ok && ok;
    csv += p.to_hex() + "," + std::to_string(pl::t_value(p)) + "," +
           std::to_string(net.spec.hidden_layers()) + "," + std::to_string(net.spec.widths[1]) + "," +
           (net.negated ? "1" : "0") + "," + (ok ? "1" : "0") + "\n";
    if (!emit_dir.empty()) {
      const auto path = std::filesystem::path(emit_dir) / ("net_" + std::to_string(index) + ".json");
      pl::write_file(path.string(), pl::network_json(net.spec, net.params).dump(1) + "\n");
    }
    ++index;
  }
  emit(out, csv);
  return all_ok ? 0 : kExitFailure;
}

// analyze oracle

int run_oracle(int n, const std::string& inputs_spec, bool bias, const std::string& patterns_out,
               const std::string& out, const std::string& command) {
  const pl::InputSet inputs = make_inputs(inputs_spec, n, 0, 0);
  if (inputs.m() > pl::kMaxOraclePoints) throw UsageError("oracle supports at most 32 input points");
  pl::OracleOptions opt;
  opt.with_bias = bias;
  const auto patterns = pl::enumerate_threshold_patterns(inputs, opt);
  pl::Metadata meta = base_metadata(command);
  meta.set("inputs", inputs.describe())
      .set("bias", std::string(bias ? "free" : "none"))
      .set("total", static_cast<std::uint64_t>(patterns.size()))
      .set("rule", std::string("1-labels <w,x>+b>0, 0-labels <w,x>+b<0 unless the row is zero"));
  std::string csv = meta.csv_header() + "t,count\n";
  for (const auto& [t, c] : pl::class_sizes(patterns)) csv += std::to_string(t) + "," + std::to_string(c) + "\n";
  if (!patterns_out.empty()) {
    std::string lines = meta.csv_header();
    for (const auto& p : patterns) lines += p.to_hex() + "\n";
    pl::write_file(patterns_out, lines);
  }
  emit(out, csv);
  return 0;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? " " : "") + args[i];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(args);
  } catch (const pl::IoError& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string command = join_args(args);

  CLI::App app{"priorlens: priors over Boolean functions induced by random neural networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PRIORLENS_VERSION));
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags on the command line win");

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "Monte-Carlo campaign over random networks");
  sample->add_option("--arch", so.arch, "perceptron | mlp")->capture_default_str();
  sample->add_option("--n", so.n, "input dimension");
  sample->add_option("--widths", so.widths, "layer widths n0,...,1 for mlp");
  sample->add_option("--act", so.act, "relu | tanh | erf | linear")->capture_default_str();
  sample->add_option("--dist", so.dist, "weight law: gaussian | uniform")->capture_default_str();
  sample->add_option("--sigma-w", so.sigma_w, "weight std, or half-width for uniform")->capture_default_str();
  sample->add_option("--bias-dist", so.bias_dist, "none | gaussian | uniform (default: gaussian iff sigma-b > 0)");
  sample->add_option("--sigma-b", so.sigma_b, "bias std, or half-width for uniform")->capture_default_str();
  sample->add_option("--fan-in", so.fan_in, "weight variance divisor: none | n | sqrt")->capture_default_str();
  sample->add_option("--inputs", so.inputs, "hypercube01 | hypercube-pm1 | path to CSV")->capture_default_str();
  sample->add_option("--subsample", so.subsample, "uniform subsample size of the hypercube");
  sample->add_option("--samples", so.samples, "number of parameter draws")->required();
  sample->add_option("--seed", so.seed, "master seed")->required();
  sample->add_option("--shards", so.shards, "independent RNG streams")->capture_default_str();
  sample->add_option("--cutoff", so.cutoff, "rank curve drops counts <= cutoff")->capture_default_str();
  sample->add_option("--out", so.out, "output directory")->capture_default_str();
  sample->add_flag("--no-functions", so.no_functions, "keep only t counts: no functions.csv or rank.csv");

  auto* analyze = app.add_subcommand("analyze", "Analytic predictions, fits and exact oracles");
  analyze->require_subcommand(1);

  GpOptions go;
  auto* gp = analyze->add_subcommand("gp-depth", "infinite-width T distribution versus depth");
  gp->add_option("--n", go.n, "input dimension");
  gp->add_option("--inputs", go.inputs, "hypercube01 | hypercube-pm1 | path to CSV")->capture_default_str();
  gp->add_option("--subsample", go.subsample, "uniform subsample size of the hypercube");
  gp->add_option("--layers", go.layers, "depths as lo..hi or a comma list")->capture_default_str();
  gp->add_option("--sigma-w", go.sigma_w)->capture_default_str();
  gp->add_option("--sigma-b", go.sigma_b)->capture_default_str();
  gp->add_option("--act", go.act, "relu | tanh | erf | linear")->capture_default_str();
  gp->add_option("--samples", go.samples, "Monte-Carlo draws per depth")->capture_default_str();
  gp->add_option("--seed", go.seed, "master seed")->required();
  gp->add_option("--shards", go.shards)->capture_default_str();
  gp->add_option("--out", go.out, "CSV path (default stdout)");

  int laws_n = 0;
  std::string laws_law = "uniform";
  std::string laws_out;
  auto* laws = analyze->add_subcommand("laws", "closed-form P(T=t)");
  laws->add_option("--n", laws_n)->required();
  laws->add_option("--law", laws_law, "uniform | infinitesimal-bias")->capture_default_str();
  laws->add_option("--out", laws_out, "CSV path (default stdout)");

  std::string zipf_in;
  std::string zipf_out;
  std::uint64_t zipf_min_rank = 1;
  auto* zipf = analyze->add_subcommand("zipf", "least-squares Zipf fit of a rank CSV");
  zipf->add_option("--in", zipf_in, "rank,probability CSV")->required();
  zipf->add_option("--min-rank", zipf_min_rank, "ignore ranks below this")->capture_default_str();
  zipf->add_option("--out", zipf_out, "JSON path (default stdout)");

  int cond_n = 0;
  std::size_t cond_t = 0;
  bool cond_json = false;
  std::string cond_out;
  auto* cond = analyze->add_subcommand("conditions", "decision tree of magnitude conditions");
  cond->add_option("--n", cond_n)->required();
  cond->add_option("--t", cond_t)->required();
  cond->add_flag("--json", cond_json, "emit JSON instead of text");
  cond->add_option("--out", cond_out, "output path (default stdout)");

  int ex_n = 0;
  int ex_layers = 1;
  std::string ex_patterns;
  std::string ex_emit;
  std::string ex_out;
  auto* ex = analyze->add_subcommand("expressivity", "compile truth tables into ReLU networks and verify");
  ex->add_option("--n", ex_n)->required();
  ex->add_option("--patterns", ex_patterns, "file of hex or bit-string patterns, one per line")->required();
  ex->add_option("--layers", ex_layers, "hidden layers; 0 selects the one-hidden-layer builder")->capture_default_str();
  ex->add_option("--emit-dir", ex_emit, "write each network as JSON here");
  ex->add_option("--out", ex_out, "CSV path (default stdout)");

  int or_n = 0;
  std::string or_inputs = "hypercube01";
  bool or_bias = false;
  std::string or_patterns;
  std::string or_out;
  auto* orc = analyze->add_subcommand("oracle", "exact enumeration of threshold patterns");
  orc->add_option("--n", or_n)->required();
  orc->add_option("--inputs", or_inputs, "hypercube01 | hypercube-pm1 | path to CSV")->capture_default_str();
  orc->add_flag("--bias", or_bias, "allow a free bias");
  orc->add_option("--patterns-out", or_patterns, "write realizable patterns as hex lines");
  orc->add_option("--out", or_out, "CSV path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sample->parsed()) return run_sample(so, command);
    if (gp->parsed()) return run_gp(go, command);
    if (laws->parsed()) return run_laws(laws_n, laws_law, laws_out, command);
    if (zipf->parsed()) return run_zipf(zipf_in, zipf_min_rank, zipf_out, command);
    if (cond->parsed()) return run_conditions(cond_n, cond_t, cond_json, cond_out);
    if (ex->parsed()) return run_expressivity(ex_n, ex_patterns, ex_layers, ex_emit, ex_out, command);
    if (orc->parsed()) return run_oracle(or_n, or_inputs, or_bias, or_patterns, or_out, command);
  } catch (const UsageError& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pl::IoError& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitIo;
  } catch (const pl::ParseError& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "priorlens: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
