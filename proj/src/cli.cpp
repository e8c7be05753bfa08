#include "icb/cli.hpp"

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "icb/bounds.hpp"
#include "icb/config.hpp"
#include "icb/experiments.hpp"
#include "icb/graph_metrics.hpp"
#include "icb/losses.hpp"
#include "icb/report.hpp"
#include "json.hpp"

namespace icb {

namespace {

struct CommonFlags {
  std::string config_path;
  std::string eps;  // number or "auto"
  std::optional<std::uint64_t> seed;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config");
  cmd->add_option("--eps", f.eps, "violation weight, a number or 'auto'");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--output-dir", f.output_dir, "directory for CSV output");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (!f.eps.empty()) {
    if (f.eps == "auto") {
      cfg.epsilon.reset();
    } else {
      try {
        std::size_t used = 0;
        cfg.epsilon = std::stod(f.eps, &used);
        if (used != f.eps.size()) throw std::invalid_argument(f.eps);
      } catch (const std::exception&) {
        throw ConfigError("--eps: expected a number or 'auto', got '" + f.eps + "'");
      }
    }
  }
  if (f.seed) cfg.seed = *f.seed;
  if (!f.output_dir.empty()) cfg.output_dir = f.output_dir;
  cfg.validate();
  return cfg;
}

int report_error(const char* kind, int code, const std::string& message) {
  nlohmann::json j = {{"error", kind}, {"exit_code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

void emit(const CsvTable& t, const ExperimentConfig& cfg, bool to_file) {
  const std::string hash = config_hash(cfg);
  write_csv(std::cout, t, hash, cfg.seed);
  if (to_file) write_csv_file(cfg.resolved_output_dir(), t, hash, cfg.seed);
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Loss formulations, bounds and graph-distance checks for a 1-D contact model", "icb"};
  app.require_subcommand(1);

  CommonFlags flags;
  int status = kExitOk;

  auto* lip = app.add_subcommand("lipschitz", "closed-form Lipschitz constants; optional finite-difference check");
  add_common(lip, flags);
  bool validate = false;
  std::size_t lip_samples = 100000;
  lip->add_flag("--validate", validate, "also compare finite-difference slopes with the closed forms");
  lip->add_option("--samples", lip_samples, "samples for --validate");

  auto* bnd = app.add_subcommand("bounds", "loss suprema, bound curves and the sample-size ratio");
  add_common(bnd, flags);

  auto* land = app.add_subcommand("landscape", "mean loss over a theta grid for all three losses");
  add_common(land, flags);

  auto* gd = app.add_subcommand("graph-distance", "distance from one datapoint to the model graph");
  add_common(gd, flags);
  double gz = 0.0, gv = 0.0, gy = 0.0;
  gd->add_option("--z", gz, "position")->required();
  gd->add_option("--v", gv, "velocity")->required();
  gd->add_option("--y", gy, "observed next velocity")->required();

  auto* qg = app.add_subcommand("qg-verify", "sample-based quadratic-growth certificate");
  add_common(qg, flags);
  std::optional<std::size_t> qg_samples;
  qg->add_option("--samples", qg_samples, "number of datapoints");

  auto* tr = app.add_subcommand("train", "fit theta by subgradient descent");
  add_common(tr, flags);
  std::string tr_loss;
  std::optional<double> tr_init;
  tr->add_option("--loss", tr_loss, "explicit | naive_implicit | violation_implicit (default: all in config)");
  tr->add_option("--init", tr_init, "initial theta");

  auto* rep = app.add_subcommand("report", "write every report table");
  add_common(rep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", kExitConfig, e.what());
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    const ModelParams p = cfg.model;
    const DomainBounds b = cfg.domain_bounds();
    const Epsilon eps = cfg.resolved_epsilon();
    const std::string hash = config_hash(cfg);

    if (lip->parsed()) {
      emit(lipschitz_constants_table(lipschitz_table(p, b, eps)), cfg, false);
      if (validate) {
        const LipschitzValidation v = lipschitz_validate(p, b, eps, lip_samples, cfg.seed);
        write_csv_file(cfg.resolved_output_dir(), lipschitz_validation_table(v), hash, cfg.seed);
        if (!v.passed()) status = report_error("certificate", kExitCertificate, "finite-difference slope exceeds bound");
      }
    } else if (bnd->parsed()) {
      const LossBounds lb = loss_suprema(p, b, eps);
      const LossLipschitz ll = loss_lipschitz(p, b, lipschitz_table(p, b, eps), lb, eps);
      const SweepSpec& s = cfg.sweeps;
      auto in = [&](LossKind k) { return approach_inputs(k, ll, lb, b.b_theta, s.delta, s.n, s.k); };
      const BoundInputs ie = in(LossKind::Explicit), in_ = in(LossKind::NaiveImplicit),
                        iv = in(LossKind::ViolationImplicit);
      const auto dir = cfg.resolved_output_dir();
      write_csv_file(dir, loss_bounds_table(lb, empirical_suprema(p, b, eps, 100000, cfg.seed)), hash, cfg.seed);
      write_csv_file(dir, loss_lipschitz_table(ll), hash, cfg.seed);
      std::vector<BoundCurveRow> by_n, by_delta;
      if (!s.n_values.empty()) by_n = bound_curve(SweepKind::DatasetSize, s.n_values, ie, in_, iv);
      if (!s.delta_values.empty()) by_delta = bound_curve(SweepKind::FailureProbability, s.delta_values, ie, in_, iv);
      write_csv_file(dir, bound_curves_table(by_n, by_delta), hash, cfg.seed);
      const double target = generalization_bound(iv);
      emit(sample_complexity_table(s.n, target, sample_complexity_ratio(target, ie, iv)), cfg, true);
    } else if (land->parsed()) {
      const Dataset ds = generate_dataset(p, b, cfg.dataset.n, {0.0, 0.0, cfg.seed}, cfg.dataset.contact_bias);
      const auto thetas = linspace(cfg.sweeps.theta_min, cfg.sweeps.theta_max, cfg.sweeps.theta_points);
      std::vector<LandscapeSeries> series;
      for (LossKind k : {LossKind::Explicit, LossKind::NaiveImplicit, LossKind::ViolationImplicit}) {
        series.push_back({k, loss_landscape(p, thetas, ds.points, k, eps, b.b_lambda)});
      }
      const auto path = write_csv_file(cfg.resolved_output_dir(), landscape_table(series), hash, cfg.seed);
      std::cout << path.string() << "\n";
    } else if (gd->parsed()) {
      const Datapoint d{{gz, gv}, gy};
      GraphDistanceRow row{d, graph_distance(p, b, d), loss_explicit(p, d).value,
                           loss_violation(p, d, eps, b.b_lambda).value};
      emit(graph_distance_table({row}), cfg, false);
    } else if (qg->parsed()) {
      const QGCertificate c = qg_verify(p, b, eps, qg_samples.value_or(cfg.qg.samples), cfg.seed);
      emit(qg_certificate_table(c), cfg, true);
      write_csv_file(cfg.resolved_output_dir(), qg_violations_table(c), hash, cfg.seed);
      if (!c.passed()) {
        status = report_error("certificate", kExitCertificate,
                              std::to_string(c.violations.size()) + " violations, " +
                                  std::to_string(c.inconclusive) + " inconclusive");
      }
    } else if (tr->parsed()) {
      const Dataset ds = generate_dataset(p, b, cfg.dataset.n, {cfg.dataset.sigma_x, cfg.dataset.sigma_y, cfg.seed},
                                          cfg.dataset.contact_bias);
      TrainConfig tc;
      tc.step = cfg.trainer.step;
      tc.iterations = cfg.trainer.iterations;
      tc.init = tr_init ? tr_init : cfg.trainer.init;
      tc.patience = cfg.trainer.patience;
      tc.seed = cfg.seed;
      std::vector<std::string> names = tr_loss.empty() ? cfg.trainer.losses : std::vector<std::string>{tr_loss};
      std::vector<TrainingRow> rows;
      for (const std::string& name : names) {
        const LossKind k = loss_kind_from_string(name);
        rows.push_back({k, p.theta, train(p, b, ds, k, eps, tc)});
      }
      emit(training_table(rows), cfg, true);
    } else if (rep->parsed()) {
      const ReportBundle bundle = run_report(cfg);
      for (const auto& f : bundle.files) std::cout << f.string() << "\n";
      if (!bundle.ok()) {
        std::string msg;
        for (const auto& [section, m] : bundle.errors) msg += section + ": " + m + "; ";
        status = report_error("report", kExitNumerical, msg);
      }
    }
  } catch (const ConfigError& e) {
    return report_error("config", kExitConfig, e.what());
  } catch (const NumericalError& e) {
    return report_error("numerical", kExitNumerical, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error("config", kExitConfig, e.what());
  } catch (const std::exception& e) {
    return report_error("internal", kExitInternal, e.what());
  }
  return status;
}

}  // namespace icb
