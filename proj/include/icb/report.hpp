#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icb/bounds.hpp"
#include "icb/config.hpp"
#include "icb/experiments.hpp"
#include "icb/graph_metrics.hpp"

namespace icb {

/// A named CSV table. Every column name must appear in schema/csv_schema.json.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add_row(std::vector<std::string> row);
};

/// %.17g, so doubles round-trip.
std::string csv_number(double x);
std::string csv_number(std::uint64_t x);
std::string csv_bool(bool b);

/// "# config_hash=<hash> seed=<seed>", then the header, then rows.
void write_csv(std::ostream& os, const CsvTable& t, std::string_view hash, std::uint64_t seed);
std::filesystem::path write_csv_file(const std::filesystem::path& dir, const CsvTable& t, std::string_view hash,
                                     std::uint64_t seed);

CsvTable lipschitz_constants_table(const LipschitzTable& t);
CsvTable loss_bounds_table(const LossBounds& analytic, const LossBounds& empirical);
CsvTable loss_lipschitz_table(const LossLipschitz& lip);

struct LandscapeSeries {
  LossKind kind;
  std::vector<LandscapeRow> rows;
};
CsvTable landscape_table(const std::vector<LandscapeSeries>& series);

CsvTable bound_curves_table(const std::vector<BoundCurveRow>& by_n, const std::vector<BoundCurveRow>& by_delta);
CsvTable sample_complexity_table(double reference_n, double target, const SampleComplexity& s);
CsvTable qg_certificate_table(const QGCertificate& c);
CsvTable qg_violations_table(const QGCertificate& c);

struct TrainingRow {
  LossKind kind;
  double theta_true = 0.0;
  TrainResult result;
};
CsvTable training_table(const std::vector<TrainingRow>& rows);

CsvTable lipschitz_validation_table(const LipschitzValidation& v);

struct GraphDistanceRow {
  Datapoint datapoint;
  GraphDistanceResult result;
  double l_exp = 0.0;
  double l_vimp = 0.0;
};
CsvTable graph_distance_table(const std::vector<GraphDistanceRow>& rows);

CsvTable report_errors_table(const std::vector<std::pair<std::string, std::string>>& errors);

struct ReportBundle {
  std::vector<std::filesystem::path> files;
  std::vector<std::pair<std::string, std::string>> errors;  // (section, message)
  bool ok() const { return errors.empty(); }
};

/// Writes every report section into cfg.resolved_output_dir(). A failing
/// section is recorded in report_errors.csv and the remaining sections still
/// run.
ReportBundle run_report(const ExperimentConfig& cfg);

}  // namespace icb
