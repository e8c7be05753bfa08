#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icb/bounds.hpp"
#include "icb/config.hpp"
#include "icb/contact_model.hpp"
#include "icb/experiments.hpp"
#include "icb/graph_metrics.hpp"
#include "icb/losses.hpp"
#include "icb/report.hpp"
#include "icb/sampling.hpp"

namespace py = pybind11;
using namespace icb;

namespace {

Epsilon to_eps(double e) { return Epsilon(e); }

LossKind to_kind(const std::string& s) { return loss_kind_from_string(s); }

std::vector<Datapoint> to_points(const std::vector<std::tuple<double, double, double>>& rows) {
  std::vector<Datapoint> out;
  out.reserve(rows.size());
  for (const auto& [z, v, y] : rows) out.push_back({{z, v}, y});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contact-model losses, Lipschitz constants, bounds and graph-distance checks";
  m.attr("__version__") = "0.1.0";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double mass, double dt, double a_grav, double theta) {
             ModelParams p{mass, dt, a_grav, theta};
             p.validate();
             return p;
           }),
           py::arg("mass") = 1.0, py::arg("dt") = 0.005, py::arg("a_grav") = 9.81, py::arg("theta") = 0.0)
      .def_readwrite("mass", &ModelParams::mass)
      .def_readwrite("dt", &ModelParams::dt)
      .def_readwrite("a_grav", &ModelParams::a_grav)
      .def_readwrite("theta", &ModelParams::theta)
      .def("with_theta", &ModelParams::with_theta)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(mass=" + std::to_string(p.mass) + ", dt=" + std::to_string(p.dt) +
               ", a_grav=" + std::to_string(p.a_grav) + ", theta=" + std::to_string(p.theta) + ")";
      });

  py::class_<DomainBounds>(m, "DomainBounds")
      .def(py::init([](const ModelParams& p, double phi_max, double v_max, double b_theta, double penetration,
                       double b_lambda, double lambda_max) {
             return DomainBounds::from_params(p, phi_max, v_max, b_theta, penetration, b_lambda, lambda_max);
           }),
           py::arg("params") = ModelParams{}, py::arg("phi_max") = 8.0, py::arg("v_max") = 15.0,
           py::arg("b_theta") = 8.0, py::arg("penetration") = 0.1, py::arg("b_lambda") = 0.0,
           py::arg("lambda_max") = 0.0)
      .def_readonly("phi_max", &DomainBounds::phi_max)
      .def_readonly("v_max", &DomainBounds::v_max)
      .def_readonly("lambda_max", &DomainBounds::lambda_max)
      .def_readonly("b_theta", &DomainBounds::b_theta)
      .def_readonly("b_lambda", &DomainBounds::b_lambda)
      .def_readonly("z_lo", &DomainBounds::z_lo)
      .def_readonly("z_hi", &DomainBounds::z_hi)
      .def_readonly("penetration", &DomainBounds::penetration);

  m.def("step_explicit", [](const ModelParams& p, double z, double v) { return step_explicit(p, {z, v}); },
        py::arg("params"), py::arg("z"), py::arg("v"));
  m.def("contact_impulse", [](const ModelParams& p, double z, double v) { return contact_impulse(p, {z, v}); },
        py::arg("params"), py::arg("z"), py::arg("v"));
  m.def(
      "simulate_trajectory",
      [](const ModelParams& p, double z, double v, int steps) {
        std::vector<std::pair<double, double>> out;
        for (const State& s : simulate_trajectory(p, {z, v}, steps)) out.emplace_back(s.z, s.v);
        return out;
      },
      py::arg("params"), py::arg("z"), py::arg("v"), py::arg("steps"));

  py::class_<LossEval>(m, "LossEval")
      .def_readonly("value", &LossEval::value)
      .def_readonly("lambda_star", &LossEval::lambda_star)
      .def_property_readonly("branch", [](const LossEval& e) { return std::string(to_string(e.branch)); })
      .def_readonly("d_v", &LossEval::d_v)
      .def_readonly("phi_end", &LossEval::phi_end);

  m.def(
      "loss",
      [](const std::string& kind, const ModelParams& p, double z, double v, double y, double eps, double b_lambda) {
        return evaluate_loss(to_kind(kind), p, {{z, v}, y}, to_eps(eps), b_lambda);
      },
      py::arg("kind"), py::arg("params"), py::arg("z"), py::arg("v"), py::arg("y"), py::arg("eps") = 0.25,
      py::arg("b_lambda") = DomainBounds{}.b_lambda,
      "kind: explicit | naive_implicit | violation_implicit");
  m.def(
      "mean_loss",
      [](const std::string& kind, const ModelParams& p, const std::vector<std::tuple<double, double, double>>& data,
         double eps, double b_lambda) {
        const auto pts = to_points(data);
        return mean_loss(to_kind(kind), p, pts, to_eps(eps), b_lambda);
      },
      py::arg("kind"), py::arg("params"), py::arg("data"), py::arg("eps") = 0.25,
      py::arg("b_lambda") = DomainBounds{}.b_lambda);
  m.def(
      "loss_landscape",
      [](const std::string& kind, const ModelParams& p, const std::vector<double>& thetas,
         const std::vector<std::tuple<double, double, double>>& data, double eps, double b_lambda) {
        const auto pts = to_points(data);
        std::vector<double> out;
        for (const LandscapeRow& r : loss_landscape(p, thetas, pts, to_kind(kind), to_eps(eps), b_lambda)) {
          out.push_back(r.mean_loss);
        }
        return out;
      },
      py::arg("kind"), py::arg("params"), py::arg("thetas"), py::arg("data"), py::arg("eps") = 0.25,
      py::arg("b_lambda") = DomainBounds{}.b_lambda);

  m.def(
      "lipschitz_table",
      [](const ModelParams& p, const DomainBounds& b, double eps) {
        const LipschitzTable t = lipschitz_table(p, b, to_eps(eps));
        return py::dict(py::arg("L_f_theta") = t.L_f_theta, py::arg("L_g_lambda") = t.L_g_lambda,
                        py::arg("L_g_theta") = t.L_g_theta, py::arg("L_h_lambda") = t.L_h_lambda,
                        py::arg("L_h_theta") = t.L_h_theta, py::arg("L_lambda_theta_nimp") = t.L_lambda_theta_nimp,
                        py::arg("L_lambda_theta_vimp") = t.L_lambda_theta_vimp);
      },
      py::arg("params"), py::arg("bounds"), py::arg("eps"));
  m.def(
      "loss_suprema",
      [](const ModelParams& p, const DomainBounds& b, double eps) {
        const LossBounds l = loss_suprema(p, b, to_eps(eps));
        return py::dict(py::arg("B_exp") = l.B_exp, py::arg("B_nimp") = l.B_nimp, py::arg("B_vimp") = l.B_vimp,
                        py::arg("B_f") = l.B_f, py::arg("B_g") = l.B_g, py::arg("B_h") = l.B_h);
      },
      py::arg("params"), py::arg("bounds"), py::arg("eps"));
  m.def(
      "loss_lipschitz",
      [](const ModelParams& p, const DomainBounds& b, double eps) {
        const Epsilon e = to_eps(eps);
        const LossBounds lb = loss_suprema(p, b, e);
        const LossLipschitz l = loss_lipschitz(p, b, lipschitz_table(p, b, e), lb, e);
        return py::dict(py::arg("explicit") = l.exp_theta, py::arg("naive_implicit") = l.nimp_theta,
                        py::arg("violation_implicit") = l.vimp_theta);
      },
      py::arg("params"), py::arg("bounds"), py::arg("eps"));
  m.def(
      "generalization_bound",
      [](double L, double b_theta, double k, double B, double delta, double n) {
        return generalization_bound({delta, n, k, b_theta, L, B});
      },
      py::arg("L"), py::arg("b_theta"), py::arg("k"), py::arg("B"), py::arg("delta"), py::arg("n"));
  m.def(
      "sample_complexity_ratio",
      [](const ModelParams& p, const DomainBounds& b, double eps, double delta, double n) {
        const Epsilon e = to_eps(eps);
        const LossBounds lb = loss_suprema(p, b, e);
        const LossLipschitz lip = loss_lipschitz(p, b, lipschitz_table(p, b, e), lb, e);
        const BoundInputs pred = approach_inputs(LossKind::Explicit, lip, lb, b.b_theta, delta, n);
        const BoundInputs vimp = approach_inputs(LossKind::ViolationImplicit, lip, lb, b.b_theta, delta, n);
        const SampleComplexity s = sample_complexity_ratio(generalization_bound(vimp), pred, vimp);
        return py::dict(py::arg("n_pred") = s.n_pred, py::arg("n_vimp") = s.n_vimp, py::arg("ratio") = s.ratio);
      },
      py::arg("params"), py::arg("bounds"), py::arg("eps") = 0.25, py::arg("delta") = 0.05, py::arg("n") = 1000.0);

  py::class_<GraphDistanceResult>(m, "GraphDistanceResult")
      .def_readonly("distance", &GraphDistanceResult::distance)
      .def_property_readonly("nearest_x",
                             [](const GraphDistanceResult& r) { return std::pair(r.nearest_x.z, r.nearest_x.v); })
      .def_readonly("nearest_y", &GraphDistanceResult::nearest_y)
      .def_readonly("resolution", &GraphDistanceResult::resolution)
      .def_readonly("boundary_hit", &GraphDistanceResult::boundary_hit);
  m.def(
      "graph_distance",
      [](const ModelParams& p, const DomainBounds& b, double z, double v, double y) {
        return graph_distance(p, b, {{z, v}, y});
      },
      py::arg("params"), py::arg("bounds"), py::arg("z"), py::arg("v"), py::arg("y"));
  m.def("epsilon_select", [](const ModelParams& p) { return epsilon_select(p).value(); }, py::arg("params"));
  m.def("qg_modulus", [](const ModelParams& p, double eps) { return qg_modulus(p, to_eps(eps)); },
        py::arg("params"), py::arg("eps"));
  m.def(
      "qg_verify",
      [](const ModelParams& p, const DomainBounds& b, double eps, std::size_t samples, std::uint64_t seed) {
        const QGCertificate c = qg_verify(p, b, to_eps(eps), samples, seed);
        return py::dict(py::arg("mu") = c.mu, py::arg("samples") = c.samples, py::arg("worst_ratio") = c.worst_ratio,
                        py::arg("violations") = c.violations.size(), py::arg("inconclusive") = c.inconclusive,
                        py::arg("passed") = c.passed());
      },
      py::arg("params"), py::arg("bounds"), py::arg("eps"), py::arg("samples") = 1000, py::arg("seed") = 7);

  m.def(
      "generate_dataset",
      [](const ModelParams& p, const DomainBounds& b, std::size_t n, double sigma_x, double sigma_y,
         std::uint64_t seed, double contact_bias) {
        const Dataset ds = generate_dataset(p, b, n, {sigma_x, sigma_y, seed}, contact_bias);
        std::vector<std::tuple<double, double, double>> out;
        for (const Datapoint& d : ds.points) out.emplace_back(d.x.z, d.x.v, d.y);
        return out;
      },
      py::arg("params"), py::arg("bounds"), py::arg("n"), py::arg("sigma_x") = 0.0, py::arg("sigma_y") = 0.0,
      py::arg("seed") = 0, py::arg("contact_bias") = 0.5);
  m.def(
      "train",
      [](const std::string& kind, const ModelParams& p, const DomainBounds& b,
         const std::vector<std::tuple<double, double, double>>& data, double eps, std::optional<double> init,
         std::size_t iterations, std::uint64_t seed) {
        Dataset ds;
        ds.points = to_points(data);
        ds.theta_true = p.theta;
        TrainConfig tc;
        tc.init = init;
        tc.iterations = iterations;
        tc.seed = seed;
        const TrainResult r = train(p, b, ds, to_kind(kind), to_eps(eps), tc);
        return py::dict(py::arg("theta_init") = r.theta_init, py::arg("theta_hat") = r.theta_hat,
                        py::arg("iterations") = r.iterations, py::arg("converged") = r.converged,
                        py::arg("diverged") = r.diverged, py::arg("loss_curve") = r.loss_curve);
      },
      py::arg("kind"), py::arg("params"), py::arg("bounds"), py::arg("data"), py::arg("eps") = 0.25,
      py::arg("init") = py::none(), py::arg("iterations") = 50000, py::arg("seed") = 0);

  m.def(
      "run_report",
      [](const std::string& config_json, const std::string& output_dir) {
        ExperimentConfig cfg = config_json.empty() ? ExperimentConfig{} : parse_config(config_json);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        cfg.validate();
        const ReportBundle r = run_report(cfg);
        std::vector<std::string> files;
        for (const auto& f : r.files) files.push_back(f.string());
        return py::dict(py::arg("files") = files, py::arg("errors") = r.errors);
      },
      py::arg("config_json") = "", py::arg("output_dir") = "",
      "Writes every report table; config_json is the same JSON accepted by the CLI");
}
