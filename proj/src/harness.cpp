#include "rbdo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rbdo/errors.hpp"

namespace rbdo {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::ranges::find(allowed, key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + std::string(section));
  }
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

} // namespace

void RunConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  swarm.validate();
  if (verification.mcs && verification.mcs_samples < 1000) throw ConfigError("mcs_samples must be at least 1000");
  make_problem().validate();
}

ProblemDefinition RunConfig::make_problem() const { return problems::make_benchmark(benchmark, options); }

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, "config", {"benchmark", "algorithm", "swarm", "trials", "base_seed", "output_dir", "verification"});

  RunConfig cfg;
  if (!doc.contains("benchmark")) throw ConfigError("config needs a 'benchmark' section");
  const auto& b = doc.at("benchmark");
  if (b.is_string()) {
    cfg.benchmark = b.get<std::string>();
  } else {
    reject_unknown(b, "benchmark", {"id", "beta", "pf", "variant", "preset", "random_beam_length"});
    read_if(b, "id", cfg.benchmark);
    if (b.contains("beta")) cfg.options.beta = b.at("beta").get<double>();
    if (b.contains("pf")) cfg.options.pf = b.at("pf").get<double>();
    if (b.contains("variant")) cfg.options.variant = problems::parse_math2d_variant(b.at("variant").get<std::string>());
    read_if(b, "random_beam_length", cfg.options.random_beam_length);
    if (b.contains("preset")) cfg.options.preset = problems::parse_welded_preset(b.at("preset").get<std::string>());
  }
  if (cfg.benchmark.empty()) throw ConfigError("benchmark id is missing");

  if (doc.contains("algorithm")) cfg.swarm.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());

  if (doc.contains("swarm")) {
    const auto& s = doc.at("swarm");
    reject_unknown(s, "swarm",
                   {"population", "max_iterations", "r0", "r_inf", "loudness0", "loudness_inf", "phi_min", "phi_max",
                    "cp", "tc_fraction", "theta_fraction", "violation_power", "peer_rule", "local_search_origin",
                    "alpha", "gamma"});
    auto& w = cfg.swarm;
    w.population = read_count(s, "population", w.population);
    w.max_iterations = read_count(s, "max_iterations", w.max_iterations);
    read_if(s, "r0", w.r0);
    read_if(s, "r_inf", w.r_inf);
    read_if(s, "loudness0", w.loudness0);
    read_if(s, "loudness_inf", w.loudness_inf);
    read_if(s, "phi_min", w.phi_min);
    read_if(s, "phi_max", w.phi_max);
    read_if(s, "cp", w.cp);
    read_if(s, "tc_fraction", w.tc_fraction);
    read_if(s, "theta_fraction", w.theta_fraction);
    read_if(s, "violation_power", w.violation_power);
    read_if(s, "alpha", w.alpha);
    read_if(s, "gamma", w.gamma);
    if (s.contains("local_search_origin"))
      w.local_search_origin = parse_local_search_origin(s.at("local_search_origin").get<std::string>());
    if (s.contains("peer_rule")) {
      const auto rule = s.at("peer_rule").get<std::string>();
      if (rule == "epsilon") w.peer_rule = PeerRule::Epsilon;
      else if (rule == "fitness") w.peer_rule = PeerRule::RawFitness;
      else throw ConfigError("peer_rule must be 'epsilon' or 'fitness'");
    }
  }

  cfg.trials = read_count(doc, "trials", cfg.trials);
  if (doc.contains("base_seed")) {
    const auto& v = doc.at("base_seed");
    if (!v.is_number_unsigned()) throw ConfigError("base_seed must be a non-negative integer");
    cfg.base_seed = v.get<std::uint64_t>();
  }
  read_if(doc, "output_dir", cfg.output_dir);

  if (doc.contains("verification")) {
    const auto& v = doc.at("verification");
    reject_unknown(v, "verification", {"form", "sorm", "mcs", "mcs_samples"});
    read_if(v, "form", cfg.verification.form);
    read_if(v, "sorm", cfg.verification.sorm);
    read_if(v, "mcs", cfg.verification.mcs);
    cfg.verification.mcs_samples = read_count(v, "mcs_samples", cfg.verification.mcs_samples);
  }
  try {
    cfg.validate();
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str());
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

StatsSummary summarize(std::span<const TrialResult> trials) {
  if (trials.empty()) throw DomainError("summarize needs at least one trial");
  StatsSummary s;
  std::vector<double> f;
  f.reserve(trials.size());
  double nu_sum = 0.0;
  for (const auto& t : trials) {
    f.push_back(t.best.f);
    nu_sum += t.best.nu;
    s.designs.push_back(t.best.y);
  }
  const auto n = static_cast<double>(f.size());
  s.best_trial = static_cast<std::size_t>(std::ranges::min_element(f) - f.begin());
  s.mean = std::accumulate(f.begin(), f.end(), 0.0) / n;
  s.mean_violation = nu_sum / n;
  if (f.size() > 1) {
    double ss = 0.0;
    for (double v : f) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / (n - 1.0));
  }
  std::ranges::sort(f);
  s.best = f.front();
  s.worst = f.back();
  s.median = f[(f.size() - 1) / 2];
  return s;
}

ExperimentResult run_experiment(const RunConfig& config, std::size_t jobs) {
  config.validate();
  const ProblemDefinition problem = config.make_problem();

  ExperimentResult out;
  out.config = config;
  for (const auto& v : problem.deterministic_vars) out.variable_names.push_back(v.name);
  for (const auto& v : problem.random_vars) out.variable_names.push_back(v.name);
  out.trials.resize(config.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < config.trials; k = next++) {
      try {
        SwarmConfig sc = config.swarm;
        sc.seed = config.base_seed + k;
        out.trials[k] = run_trial(problem, sc);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, config.trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = summarize(out.trials);
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", value);
  return buf;
}

std::string summary_csv(const ExperimentResult& result) {
  const auto& c = result.config;
  const auto& s = result.summary;
  std::ostringstream os;
  os << kSummaryHeader << '\n'
     << c.benchmark << ',' << to_string(c.swarm.algorithm) << ',' << c.trials << ',' << c.base_seed << ','
     << format_number(s.best) << ',' << format_number(s.median) << ',' << format_number(s.worst) << ','
     << format_number(s.mean) << ',' << format_number(s.std_dev) << ',' << format_number(s.mean_violation) << '\n';
  return os.str();
}

std::string trials_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "trial,seed,f,nu,evaluations";
  for (const auto& name : result.variable_names) os << ',' << name;
  os << '\n';
  for (std::size_t k = 0; k < result.trials.size(); ++k) {
    const auto& t = result.trials[k];
    os << k << ',' << t.seed << ',' << format_number(t.best.f) << ',' << format_number(t.best.nu) << ','
       << t.evaluations;
    for (double v : t.best.y) os << ',' << format_number(v);
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const TrialResult& trial) {
  std::ostringstream os;
  os << kTraceHeader << '\n';
  for (const auto& e : trial.trace)
    os << e.iteration << ',' << format_number(e.best_f) << ',' << format_number(e.best_nu) << ','
       << format_number(e.epsilon) << '\n';
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

} // namespace

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "summary.csv", summary_csv(result));
  write_file(dir / "trials.csv", trials_csv(result));
  for (std::size_t k = 0; k < result.trials.size(); ++k)
    write_file(dir / ("trace_" + std::to_string(k) + ".csv"), trace_csv(result.trials[k]));
}

std::vector<VerificationRow> verify_design(const ProblemDefinition& problem, std::span<const double> y,
                                           const VerificationOptions& options, std::uint64_t seed) {
  const Box box = problem.box();
  if (y.size() != box.size()) throw DomainError("design has " + std::to_string(y.size()) + " components, expected " +
                                                std::to_string(box.size()));
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] < box.lower[j] || y[j] > box.upper[j])
      throw DomainError("design component " + std::to_string(j + 1) + " lies outside its bounds");
  }
  const auto dists = design_distributions(problem, y);
  std::vector<double> x_means(dists.x.size());
  for (std::size_t j = 0; j < x_means.size(); ++j) x_means[j] = dists.x[j].mean();
  const auto p_means = problem.param_means();
  const Realization at_mean{dists.d, x_means, p_means};

  std::vector<VerificationRow> rows;
  for (std::size_t i = 0; i < problem.probabilistic.size(); ++i) {
    const auto& c = problem.probabilistic[i];
    const double value = c.g(at_mean);
    auto add = [&](ReliabilityMethod m, auto&& compute) {
      VerificationRow row{c.name, true, value, m, std::nullopt, ""};
      try {
        ReliabilityReport r = compute();
        r.constraint_index = i;
        if (r.beyond_precision) row.note = "beyond-precision";
        row.report = std::move(r);
      } catch (const std::exception& e) {
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    };
    std::optional<ReliabilityReport> form;
    if (options.form || options.sorm) {
      try {
        form = form_beta(c.g, dists);
      } catch (const std::exception& e) {
        if (options.form) rows.push_back({c.name, true, value, ReliabilityMethod::FORM, std::nullopt, e.what()});
        if (options.sorm)
          rows.push_back({c.name, true, value, ReliabilityMethod::SORM_Breitung, std::nullopt, e.what()});
      }
    }
    if (form) {
      if (options.form) add(ReliabilityMethod::FORM, [&] { return *form; });
      if (options.sorm) add(ReliabilityMethod::SORM_Breitung, [&] { return sorm_breitung(*form, c.g, dists); });
    }
    if (options.mcs)
      add(ReliabilityMethod::MCS, [&] { return mcs_pf(c.g, dists, options.mcs_samples, seed + i); });
    if (!options.form && !options.sorm && !options.mcs)
      rows.push_back({c.name, true, value, std::nullopt, std::nullopt, ""});
  }
  for (const auto& c : problem.deterministic)
    rows.push_back({c.name, false, c.h(at_mean), std::nullopt, std::nullopt, ""});
  return rows;
}

std::string verification_csv(std::span<const VerificationRow> rows) {
  std::ostringstream os;
  os << kVerificationHeader << '\n';
  for (const auto& row : rows) {
    os << row.constraint << ',' << (row.method ? to_string(*row.method) : "--") << ','
       << format_number(row.value_at_mean) << ',';
    if (row.report) {
      const auto& r = *row.report;
      os << format_number(r.beta) << ',' << format_number(r.pf) << ','
         << (r.method == ReliabilityMethod::MCS ? format_number(r.mcs_stderr) : "--");
    } else {
      os << "--,--,--";
    }
    std::string note = row.note;
    std::ranges::replace(note, ',', ';');
    os << ',' << note << '\n';
  }
  return os.str();
}

std::vector<double> read_design_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read design file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (numeric && !values.empty()) return values;
  }
  throw ConfigError("design file " + path.string() + " has no numeric row");
}

} // namespace rbdo
