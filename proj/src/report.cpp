#include "icb/report.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "icb/sampling.hpp"

namespace icb {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("CsvTable '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_number(std::uint64_t x) { return std::to_string(x); }
std::string csv_bool(bool b) { return b ? "1" : "0"; }

void write_csv(std::ostream& os, const CsvTable& t, std::string_view hash, std::uint64_t seed) {
  os << "# config_hash=" << hash << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

std::filesystem::path write_csv_file(const std::filesystem::path& dir, const CsvTable& t, std::string_view hash,
                                     std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / (t.name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, t, hash, seed);
  return path;
}

CsvTable lipschitz_constants_table(const LipschitzTable& t) {
  CsvTable out{"lipschitz_constants", {"constant", "expression", "value"}, {}};
  out.add_row({"L_f_theta", "1/dt", csv_number(t.L_f_theta)});
  out.add_row({"L_g_lambda", "1/m", csv_number(t.L_g_lambda)});
  out.add_row({"L_g_theta", "0", csv_number(t.L_g_theta)});
  out.add_row({"L_h_lambda", "max(phi_max; lambda_max)", csv_number(t.L_h_lambda)});
  out.add_row({"L_h_theta", "max(phi_max; lambda_max)", csv_number(t.L_h_theta)});
  out.add_row({"L_lambda_theta_nimp", "max(m*dt/(m^2+dt^2); m/dt)", csv_number(t.L_lambda_theta_nimp)});
  out.add_row({"L_lambda_theta_vimp", "m^2/(2*eps)", csv_number(t.L_lambda_theta_vimp)});
  return out;
}

CsvTable loss_bounds_table(const LossBounds& a, const LossBounds& e) {
  CsvTable out{"loss_bounds", {"quantity", "analytic", "empirical"}, {}};
  out.add_row({"B_f", csv_number(a.B_f), csv_number(e.B_f)});
  out.add_row({"B_g", csv_number(a.B_g), csv_number(e.B_g)});
  out.add_row({"B_h", csv_number(a.B_h), csv_number(e.B_h)});
  out.add_row({"B_exp", csv_number(a.B_exp), csv_number(e.B_exp)});
  out.add_row({"B_nimp", csv_number(a.B_nimp), csv_number(e.B_nimp)});
  out.add_row({"B_vimp", csv_number(a.B_vimp), csv_number(e.B_vimp)});
  return out;
}

CsvTable loss_lipschitz_table(const LossLipschitz& lip) {
  CsvTable out{"loss_lipschitz", {"loss", "toy_form", "general_form"}, {}};
  out.add_row({"explicit", csv_number(lip.exp_theta), csv_number(lip.exp_theta_general)});
  out.add_row({"naive_implicit", csv_number(lip.nimp_theta), csv_number(lip.nimp_theta_general)});
  out.add_row({"violation_implicit", csv_number(lip.vimp_theta), csv_number(lip.vimp_theta_general)});
  return out;
}

CsvTable landscape_table(const std::vector<LandscapeSeries>& series) {
  CsvTable out{"landscape", {"loss", "theta", "mean_loss"}, {}};
  for (const auto& s : series) {
    for (const auto& r : s.rows) out.add_row({std::string(to_string(s.kind)), csv_number(r.theta), csv_number(r.mean_loss)});
  }
  return out;
}

CsvTable bound_curves_table(const std::vector<BoundCurveRow>& by_n, const std::vector<BoundCurveRow>& by_delta) {
  CsvTable out{"bound_curves", {"sweep_kind", "sweep_value", "bound_exp", "bound_nimp", "bound_vimp"}, {}};
  auto emit = [&](const char* kind, const std::vector<BoundCurveRow>& rows) {
    for (const auto& r : rows) {
      out.add_row({kind, csv_number(r.sweep_value), csv_number(r.bound_exp), csv_number(r.bound_nimp),
                   csv_number(r.bound_vimp)});
    }
  };
  emit("n", by_n);
  emit("delta", by_delta);
  return out;
}

CsvTable sample_complexity_table(double reference_n, double target, const SampleComplexity& s) {
  CsvTable out{"sample_complexity", {"reference_n", "target_bound", "n_pred", "n_vimp", "ratio"}, {}};
  out.add_row({csv_number(reference_n), csv_number(target), csv_number(s.n_pred), csv_number(s.n_vimp),
               csv_number(s.ratio)});
  return out;
}

CsvTable qg_certificate_table(const QGCertificate& c) {
  CsvTable out{"qg_certificate",
               {"mu", "eps", "samples", "worst_ratio", "mean_d2", "mean_l_vimp", "resolution", "inconclusive",
                "violations", "passed"},
               {}};
  out.add_row({csv_number(c.mu), csv_number(c.eps), csv_number(std::uint64_t{c.samples}), csv_number(c.worst_ratio),
               csv_number(c.mean_d2), csv_number(c.mean_l_vimp), csv_number(c.resolution),
               csv_number(std::uint64_t{c.inconclusive}), csv_number(std::uint64_t{c.violations.size()}),
               csv_bool(c.passed())});
  return out;
}

CsvTable qg_violations_table(const QGCertificate& c) {
  CsvTable out{"qg_violations", {"z", "v", "y", "d2", "l_vimp", "slack"}, {}};
  for (const auto& v : c.violations) {
    out.add_row({csv_number(v.datapoint.x.z), csv_number(v.datapoint.x.v), csv_number(v.datapoint.y),
                 csv_number(v.d2), csv_number(v.l_vimp), csv_number(v.slack)});
  }
  return out;
}

CsvTable training_table(const std::vector<TrainingRow>& rows) {
  CsvTable out{"training",
               {"loss", "theta_true", "theta_init", "theta_hat", "abs_error", "iterations", "converged", "diverged",
                "final_loss"},
               {}};
  for (const auto& r : rows) {
    const TrainResult& t = r.result;
    out.add_row({std::string(to_string(r.kind)), csv_number(r.theta_true), csv_number(t.theta_init),
                 csv_number(t.theta_hat), csv_number(std::abs(t.theta_hat - r.theta_true)),
                 csv_number(std::uint64_t{t.iterations}), csv_bool(t.converged), csv_bool(t.diverged),
                 csv_number(t.loss_curve.empty() ? 0.0 : t.loss_curve.back())});
  }
  return out;
}

CsvTable lipschitz_validation_table(const LipschitzValidation& v) {
  CsvTable out{"lipschitz_validation",
               {"loss", "bound", "max_slope", "max_same_branch_slope", "same_branch_samples", "samples", "violations"},
               {}};
  for (const auto& r : v.reports) {
    out.add_row({std::string(to_string(r.kind)), csv_number(r.bound), csv_number(r.max_slope),
                 csv_number(r.max_same_branch_slope), csv_number(std::uint64_t{r.same_branch_samples}),
                 csv_number(std::uint64_t{v.samples}), csv_number(std::uint64_t{r.violations.size()})});
  }
  return out;
}

CsvTable graph_distance_table(const std::vector<GraphDistanceRow>& rows) {
  CsvTable out{"graph_distance",
               {"z", "v", "y", "distance", "nearest_z", "nearest_v", "nearest_y", "resolution", "rounds",
                "boundary_hit", "l_exp", "l_vimp"},
               {}};
  for (const auto& r : rows) {
    const auto& g = r.result;
    out.add_row({csv_number(r.datapoint.x.z), csv_number(r.datapoint.x.v), csv_number(r.datapoint.y),
                 csv_number(g.distance), csv_number(g.nearest_x.z), csv_number(g.nearest_x.v),
                 csv_number(g.nearest_y), csv_number(g.resolution), csv_number(std::uint64_t(g.rounds)),
                 csv_bool(g.boundary_hit), csv_number(r.l_exp), csv_number(r.l_vimp)});
  }
  return out;
}

CsvTable report_errors_table(const std::vector<std::pair<std::string, std::string>>& errors) {
  CsvTable out{"report_errors", {"section", "message"}, {}};
  for (const auto& [section, message] : errors) {
    std::string m = message;
    for (char& ch : m) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out.add_row({section, m});
  }
  return out;
}

ReportBundle run_report(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  const std::filesystem::path dir = cfg.resolved_output_dir();
  const ModelParams p = cfg.model;
  const DomainBounds b = cfg.domain_bounds();
  const Epsilon eps = cfg.resolved_epsilon();

  ReportBundle bundle;
  auto section = [&](const char* name, const std::function<std::vector<CsvTable>()>& body) {
    try {
      for (const CsvTable& t : body()) bundle.files.push_back(write_csv_file(dir, t, hash, cfg.seed));
    } catch (const std::exception& e) {
      bundle.errors.emplace_back(name, e.what());
    }
  };

  section("lipschitz_constants", [&] { return std::vector{lipschitz_constants_table(lipschitz_table(p, b, eps))}; });

  const LossBounds lb = loss_suprema(p, b, eps);
  const LossLipschitz lip = loss_lipschitz(p, b, lipschitz_table(p, b, eps), lb, eps);
  section("loss_bounds", [&] {
    return std::vector{loss_bounds_table(lb, empirical_suprema(p, b, eps, 100000, cfg.seed)),
                       loss_lipschitz_table(lip)};
  });

  section("landscape", [&] {
    const Dataset ds = generate_dataset(p, b, cfg.dataset.n, {0.0, 0.0, cfg.seed}, cfg.dataset.contact_bias);
    const std::vector<double> thetas = linspace(cfg.sweeps.theta_min, cfg.sweeps.theta_max, cfg.sweeps.theta_points);
    std::vector<LandscapeSeries> series;
    for (LossKind k : {LossKind::Explicit, LossKind::NaiveImplicit, LossKind::ViolationImplicit}) {
      series.push_back({k, loss_landscape(p, thetas, ds.points, k, eps, b.b_lambda)});
    }
    return std::vector{landscape_table(series)};
  });

  section("bound_curves", [&] {
    const SweepSpec& s = cfg.sweeps;
    auto in = [&](LossKind k) { return approach_inputs(k, lip, lb, b.b_theta, s.delta, s.n, s.k); };
    const BoundInputs ie = in(LossKind::Explicit), in_ = in(LossKind::NaiveImplicit),
                      iv = in(LossKind::ViolationImplicit);
    std::vector<BoundCurveRow> by_n, by_delta;
    if (!s.n_values.empty()) by_n = bound_curve(SweepKind::DatasetSize, s.n_values, ie, in_, iv);
    if (!s.delta_values.empty()) by_delta = bound_curve(SweepKind::FailureProbability, s.delta_values, ie, in_, iv);
    const double target = generalization_bound(iv);
    return std::vector{bound_curves_table(by_n, by_delta),
                       sample_complexity_table(s.n, target, sample_complexity_ratio(target, ie, iv))};
  });

  section("qg_certificate", [&] {
    const QGCertificate c = qg_verify(p, b, eps, cfg.qg.samples, cfg.seed);
    return std::vector{qg_certificate_table(c), qg_violations_table(c)};
  });

  section("training", [&] {
    const Dataset ds = generate_dataset(p, b, cfg.dataset.n, {cfg.dataset.sigma_x, cfg.dataset.sigma_y, cfg.seed},
                                        cfg.dataset.contact_bias);
    TrainConfig tc;
    tc.step = cfg.trainer.step;
    tc.iterations = cfg.trainer.iterations;
    tc.init = cfg.trainer.init;
    tc.patience = cfg.trainer.patience;
    tc.seed = cfg.seed;
    std::vector<TrainingRow> rows;
    for (const std::string& name : cfg.trainer.losses) {
      const LossKind k = loss_kind_from_string(name);
      rows.push_back({k, p.theta, train(p, b, ds, k, eps, tc)});
    }
    return std::vector{training_table(rows)};
  });

  bundle.files.push_back(write_csv_file(dir, report_errors_table(bundle.errors), hash, cfg.seed));
  return bundle;
}

}  // namespace icb
