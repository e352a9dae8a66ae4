#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "banditms/balancing.hpp"
#include "banditms/baselines.hpp"
#include "banditms/env.hpp"
#include "banditms/fs_scb.hpp"
#include "banditms/harness.hpp"
#include "banditms/ps_oful.hpp"
#include "banditms/regressor.hpp"
#include "banditms/sq_aggregator.hpp"

namespace py = pybind11;
using namespace banditms;

namespace {

std::vector<Vec> to_features(const std::vector<Vec>& actions) { return actions; }

}  // namespace

PYBIND11_MODULE(_banditms, m) {
  m.doc() = "Model-selection algorithms for stochastic linear bandits";

  py::class_<AssumptionConstants>(m, "AssumptionConstants")
      .def(py::init<>())
      .def_readwrite("d", &AssumptionConstants::d)
      .def_readwrite("L", &AssumptionConstants::L)
      .def_readwrite("S", &AssumptionConstants::S)
      .def_readwrite("G", &AssumptionConstants::G)
      .def_readwrite("R", &AssumptionConstants::R)
      .def_readwrite("T", &AssumptionConstants::T)
      .def_readwrite("M", &AssumptionConstants::M)
      .def_readwrite("K", &AssumptionConstants::K)
      .def_readwrite("delta", &AssumptionConstants::delta)
      .def("validate", &AssumptionConstants::validate);

  py::class_<Regressor>(m, "Regressor")
      .def(py::init<Vec, double>(), py::arg("bias"), py::arg("lambda_"))
      .def("update", &Regressor::update)
      .def("predict", &Regressor::predict)
      .def("weighted_norm", &Regressor::weighted_norm)
      .def_property_readonly("coeffs", &Regressor::coeffs)
      .def_property_readonly("inv_gram", &Regressor::inv_gram)
      .def_property_readonly("n_obs", &Regressor::n_obs);

  py::class_<SqAggregator>(m, "SqAggregator")
      .def(py::init<int, double, double, double>(), py::arg("n_experts"), py::arg("beta"),
           py::arg("ell"), py::arg("eta") = 2.0)
      .def("predict",
           [](const SqAggregator& agg, const std::vector<double>& preds) {
             return agg.predict(preds);
           })
      .def("update",
           [](SqAggregator& agg, const std::vector<double>& preds, double y) {
             agg.update(preds, y);
           })
      .def_property_readonly("normalized_weights", &SqAggregator::normalized_weights)
      .def_property_readonly("beta", &SqAggregator::beta)
      .def_property_readonly("ell", &SqAggregator::ell);

  m.def("lambda_for_model",
        [](int T, double b, double c) { return lambda_for_model(T, b, c); });
  m.def("compute_ut", &compute_Ut);
  m.def("compute_rsq_ps", &compute_RSq_ps);
  m.def("confidence_radius", &confidence_radius);
  m.def("compute_qt", [](double t, double d, double L, double R, double S, double delta,
                         const std::vector<double>& lambdas) {
    return compute_Qt(t, d, L, R, S, delta, lambdas);
  });
  m.def("compute_rsq_fs", [](double t, double d, double L, double R, double S, double G, double M,
                             double delta, const std::vector<double>& lambdas) {
    return compute_RSq_fs(t, d, L, R, S, G, M, delta, lambdas);
  });
  m.def("prediction_error_bound", &prediction_error_bound);
  m.def("reference_u", &reference_U);
  m.def("igw_distribution", [](const std::vector<double>& preds, double alpha, double kappa) {
    return igw_distribution(preds, alpha, kappa);
  });

  py::class_<BallModel>(m, "BallModel")
      .def(py::init([](Vec center, double radius, double error) {
             return BallModel{std::move(center), radius, error};
           }),
           py::arg("center_estimate"), py::arg("radius"), py::arg("center_error"))
      .def_readonly("center_estimate", &BallModel::center_estimate)
      .def_readonly("radius", &BallModel::radius)
      .def_readonly("center_error", &BallModel::center_error)
      .def("effective_radius", &BallModel::effective_radius);

  py::class_<PsOful>(m, "PsOful")
      .def(py::init<AssumptionConstants, std::vector<BallModel>>())
      .def("gamma_prev", &PsOful::gamma_prev)
      .def("select_action",
           [](const PsOful& p, const std::vector<Vec>& actions, double gamma) {
             return p.select_action(to_features(actions), gamma);
           })
      .def("step",
           [](PsOful& p, const std::vector<Vec>& actions, const std::function<double(int)>& f) {
             const auto s =
                 p.step(to_features(actions), [&](int a, const Vec&) { return f(a); });
             return py::make_tuple(s.action, s.oracle_prediction, s.reward);
           })
      .def_property_readonly("conf_theta", &PsOful::conf_theta)
      .def_property_readonly("rounds", &PsOful::rounds);

  py::enum_<BallVariant>(m, "BallVariant")
      .value("overlapping", BallVariant::Overlapping)
      .value("disjoint", BallVariant::Disjoint)
      .value("balancing20", BallVariant::Balancing20);

  py::class_<EnvInstance>(m, "EnvInstance")
      .def_readonly("seed", &EnvInstance::seed)
      .def_readonly("theta_star", &EnvInstance::theta_star)
      .def_readonly("true_model_index", &EnvInstance::true_model_index)
      .def_readonly("noise_sigma", &EnvInstance::noise_sigma)
      .def_readonly("ball_models", &EnvInstance::ball_models)
      .def_property_readonly("constants", [](const EnvInstance& e) { return e.constants; })
      .def("action_feature", &EnvInstance::action_feature)
      .def("true_mean", &EnvInstance::true_mean)
      .def("optimal_value", &EnvInstance::optimal_value)
      .def("instantaneous_regret", &EnvInstance::instantaneous_regret)
      .def("manifest", &EnvInstance::manifest);

  m.def("gen_ball_env",
        [](const std::string& variant, std::uint64_t seed, int T, int K, bool unit_ball) {
          return gen_ball_env(parse_ball_variant(variant), seed, {T, K, unit_ball});
        },
        py::arg("variant"), py::arg("seed"), py::arg("T") = 1000, py::arg("K") = 50,
        py::arg("unit_ball") = false);
  m.def("gen_feature_env",
        [](std::uint64_t seed, int T, const std::string& noise_interp) {
          FeatureEnvOptions opts;
          opts.T = T;
          opts.noise_interp = noise_interp == "stddev" ? NoiseInterpretation::Stddev
                                                       : NoiseInterpretation::Variance;
          return gen_feature_env(seed, opts);
        },
        py::arg("seed"), py::arg("T") = 1000, py::arg("noise_interp") = "variance");

  py::class_<RegretTable>(m, "RegretTable")
      .def("algorithms", &RegretTable::algorithms)
      .def("max_round", &RegretTable::max_round)
      .def("mean_at", [](const RegretTable& t, const std::string& a, int r) {
        return t.at(a, r).mean;
      })
      .def("std_at", [](const RegretTable& t, const std::string& a, int r) {
        return t.at(a, r).stddev;
      })
      .def("cumulative_at", &RegretTable::cumulative_at);

  m.def("run_experiment",
        [](const std::string& experiment, int T, int instances, std::uint64_t seed,
           const std::vector<std::string>& algorithms,
           const std::map<std::string, std::string>& env_overrides, const std::string& out,
           int parallelism, bool emit) {
          ExperimentConfig cfg = experiment_preset(experiment);
          if (T > 0) cfg.T = T;
          if (instances > 0) cfg.n_instances = instances;
          cfg.master_seed = seed;
          if (!algorithms.empty()) cfg.algorithms = algorithms;
          for (const auto& [k, v] : env_overrides) cfg.env_overrides[k] = v;
          if (!out.empty()) cfg.output_dir = out;
          cfg.parallelism = parallelism;
          const RunSummary summary = emit ? run_and_emit(cfg) : run_experiment(cfg);
          py::dict result;
          result["table"] = summary.table;
          result["n_failed"] = summary.n_failed;
          result["manifest"] = summary.manifest;
          return result;
        },
        py::arg("experiment"), py::arg("T") = 0, py::arg("instances") = 0, py::arg("seed") = 0,
        py::arg("algorithms") = std::vector<std::string>{},
        py::arg("env_overrides") = std::map<std::string, std::string>{}, py::arg("out") = "",
        py::arg("parallelism") = 1, py::arg("emit") = false);
}
