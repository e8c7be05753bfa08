#include "icb/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "icb/graph_metrics.hpp"
#include "icb/losses.hpp"
#include "json.hpp"

namespace icb {

using nlohmann::json;

namespace {

// Reads fields out of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config: bad value for '" + name_ + "." + key + "': " + e.what());
    }
  }

  template <class T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  Section sub(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    static const json empty = json::object();
    return Section(it == j_.end() ? empty : *it, name_.empty() ? key : name_ + "." + key);
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  void mark(const char* key) { seen_.insert(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError("config: unknown key '" + (name_.empty() ? "" : name_ + ".") + it.key() + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Epsilon ExperimentConfig::resolved_epsilon() const {
  if (epsilon) return Epsilon(*epsilon);
  return epsilon_select(model);
}

DomainBounds ExperimentConfig::domain_bounds() const {
  return DomainBounds::from_params(model, domain.phi_max, domain.v_max, domain.b_theta, domain.penetration,
                                   domain.b_lambda.value_or(0.0), domain.lambda_max.value_or(0.0));
}

std::filesystem::path ExperimentConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("ICB_OUTPUT_DIR"); env && *env) return env;
  return "icb_out";
}

void ExperimentConfig::validate() const {
  try {
    model.validate();
    domain_bounds().validate();
    resolved_epsilon();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (dataset.n < 1) throw ConfigError("config: dataset.n must be >= 1");
  if (!(dataset.contact_bias >= 0.0 && dataset.contact_bias <= 1.0)) {
    throw ConfigError("config: dataset.contact_bias must lie in [0, 1]");
  }
  if (!(dataset.sigma_x >= 0.0) || !(dataset.sigma_y >= 0.0)) throw ConfigError("config: noise sigmas must be >= 0");
  for (const std::string& l : trainer.losses) loss_kind_from_string(l);
  if (!(trainer.step > 0.0)) throw ConfigError("config: trainer.step must be > 0");
  if (!(sweeps.theta_max > sweeps.theta_min) || sweeps.theta_points < 2) {
    throw ConfigError("config: sweeps theta grid needs theta_min < theta_max and >= 2 points");
  }
  for (double n : sweeps.n_values) {
    if (!(n >= 1.0)) throw ConfigError("config: sweeps.n_values entries must be >= 1");
  }
  for (double d : sweeps.delta_values) {
    if (!(d > 0.0 && d <= 1.0)) throw ConfigError("config: sweeps.delta_values entries must lie in (0, 1]");
  }
  if (!(sweeps.delta > 0.0 && sweeps.delta <= 1.0)) throw ConfigError("config: sweeps.delta must lie in (0, 1]");
  if (!(sweeps.n >= 1.0) || !(sweeps.k >= 1.0)) throw ConfigError("config: sweeps.n and sweeps.k must be >= 1");
  if (qg.samples < 1) throw ConfigError("config: qg.samples must be >= 1");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "");

  Section m = root.sub("model");
  m.get("mass", c.model.mass);
  m.get("dt", c.model.dt);
  m.get("a_grav", c.model.a_grav);
  m.get("theta", c.model.theta);
  m.finish();

  Section d = root.sub("domain");
  d.get("phi_max", c.domain.phi_max);
  d.get("v_max", c.domain.v_max);
  d.get("b_theta", c.domain.b_theta);
  d.get("penetration", c.domain.penetration);
  d.get_optional("lambda_max", c.domain.lambda_max);
  d.get_optional("b_lambda", c.domain.b_lambda);
  d.finish();

  root.mark("epsilon");
  if (root.has("epsilon")) {
    const json& e = root.at("epsilon");
    if (e.is_string() && e.get<std::string>() == "auto") {
      c.epsilon.reset();
    } else if (e.is_number()) {
      c.epsilon = e.get<double>();
    } else {
      throw ConfigError("config: 'epsilon' must be a number or \"auto\"");
    }
  }

  Section ds = root.sub("dataset");
  ds.get("n", c.dataset.n);
  ds.get("contact_bias", c.dataset.contact_bias);
  ds.get("sigma_x", c.dataset.sigma_x);
  ds.get("sigma_y", c.dataset.sigma_y);
  ds.finish();

  Section t = root.sub("trainer");
  t.get("losses", c.trainer.losses);
  t.get("step", c.trainer.step);
  t.get("iterations", c.trainer.iterations);
  t.get_optional("init", c.trainer.init);
  t.get("patience", c.trainer.patience);
  t.finish();

  Section s = root.sub("sweeps");
  s.get("theta_min", c.sweeps.theta_min);
  s.get("theta_max", c.sweeps.theta_max);
  s.get("theta_points", c.sweeps.theta_points);
  s.get("n_values", c.sweeps.n_values);
  s.get("delta_values", c.sweeps.delta_values);
  s.get("delta", c.sweeps.delta);
  s.get("n", c.sweeps.n);
  s.get("k", c.sweeps.k);
  s.finish();

  Section q = root.sub("qg");
  q.get("samples", c.qg.samples);
  q.finish();

  root.get("output_dir", c.output_dir);
  root.get("seed", c.seed);
  root.finish();

  c.validate();
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"mass", c.model.mass}, {"dt", c.model.dt}, {"a_grav", c.model.a_grav}, {"theta", c.model.theta}};
  j["domain"] = {{"phi_max", c.domain.phi_max},
                 {"v_max", c.domain.v_max},
                 {"b_theta", c.domain.b_theta},
                 {"penetration", c.domain.penetration},
                 {"lambda_max", opt(c.domain.lambda_max)},
                 {"b_lambda", opt(c.domain.b_lambda)}};
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json("auto");
  j["dataset"] = {{"n", c.dataset.n},
                  {"contact_bias", c.dataset.contact_bias},
                  {"sigma_x", c.dataset.sigma_x},
                  {"sigma_y", c.dataset.sigma_y}};
  j["trainer"] = {{"losses", c.trainer.losses},
                  {"step", c.trainer.step},
                  {"iterations", c.trainer.iterations},
                  {"init", opt(c.trainer.init)},
                  {"patience", c.trainer.patience}};
  j["sweeps"] = {{"theta_min", c.sweeps.theta_min}, {"theta_max", c.sweeps.theta_max},
                 {"theta_points", c.sweeps.theta_points}, {"n_values", c.sweeps.n_values},
                 {"delta_values", c.sweeps.delta_values}, {"delta", c.sweeps.delta},
                 {"n", c.sweeps.n}, {"k", c.sweeps.k}};
  j["qg"] = {{"samples", c.qg.samples}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Where the tables land does not change their contents.
  ExperimentConfig c = cfg;
  c.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace icb
