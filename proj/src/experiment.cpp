// Copyright 2026 The qconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconv/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "qconv/data_io.hpp"
#include "qconv/error.hpp"
#include "qconv/nonlinear.hpp"
#include "qconv/oracles.hpp"
#include "qconv/parallel.hpp"
#include "qconv/qadc.hpp"
#include "qconv/qdac.hpp"
#include "qconv/state_prep.hpp"

namespace qconv {

using nlohmann::json;

namespace {

const std::vector<std::string> kKinds = {"prep",      "qdac",      "qadc-abs",   "qadc-real",
                                         "qadc-imag", "nonlinear", "perceptron", "spectrum"};

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw ValidationError("field '" + field + "': " + message);
}

bool is_qadc(const std::string& kind) { return kind.rfind("qadc-", 0) == 0; }

int count_sources(const ExperimentConfig& c) {
  return static_cast<int>(!c.values.empty()) + static_cast<int>(!c.data_path.empty()) +
         static_cast<int>(c.data_seed.has_value());
}

int log2_exact(std::size_t size) {
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  return n;
}

bool qdac_signed(const ExperimentConfig& c) {
  return std::any_of(c.values.begin(), c.values.end(), [](auto v) { return v.real() < 0; });
}

json complex_json(const Eigen::VectorXcd& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

json counter_json(const GateCounter& c) {
  json blocks = json::object();
  for (const auto& [k, v] : c.blocks) blocks[k] = v;
  return {{"single", c.single},
          {"controlled", c.controlled},
          {"oracle", c.oracle},
          {"total", c.total()},
          {"blocks", blocks}};
}

void check_finite(const json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error("metric '" + path + "' is not finite");
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, path.empty() ? k : path + "." + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], path + "[" + std::to_string(i) + "]");
  }
}

// The data vector, with the address count filled in.
Eigen::VectorXcd resolve_data(ExperimentConfig& c) {
  Eigen::VectorXcd v;
  const bool raw_values = c.kind == "qdac";
  if (!c.values.empty()) {
    v.resize(static_cast<Eigen::Index>(c.values.size()));
    for (std::size_t i = 0; i < c.values.size(); ++i) v(static_cast<Eigen::Index>(i)) = c.values[i];
  } else if (!c.data_path.empty()) {
    v = load_vector(c.data_path, false);
  } else {
    if (c.n < 1) field_error("n", "required with data_seed");
    Rng rng(*c.data_seed);
    const Activation& act = find_activation(c.function);
    const bool complex = c.kind == "prep" || is_qadc(c.kind) ||
                         (c.kind == "nonlinear" && act.uses_imag);
    v.resize(Eigen::Index{1} << c.n);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (raw_values) {
        v(i) = uniform01(rng);
      } else {
        const double re = 2 * uniform01(rng) - 1;
        v(i) = {re, complex ? 2 * uniform01(rng) - 1 : 0.0};
      }
    }
    if (!raw_values) v.normalize();
  }
  const Eigen::Index size = v.size();
  if (size < 2 || (size & (size - 1)) != 0) field_error("data", "length must be a power of two >= 2");
  const int n = log2_exact(static_cast<std::size_t>(size));
  if (c.n != 0 && c.n != n) {
    field_error("n", "is " + std::to_string(c.n) + " but the data has " + std::to_string(size) +
                         " entries");
  }
  c.n = n;
  if (raw_values || c.kind == "perceptron") {
    for (Eigen::Index i = 0; i < size; ++i) {
      if (v(i).imag() != 0) field_error("data", c.kind + " values must be real");
    }
  } else if (v.norm() == 0) {
    field_error("data", "vector is zero");
  }
  return v;
}

json prep_metrics(const Eigen::VectorXcd& c) {
  const PrepTree tree = PrepTree::build(c);
  const int n = tree.depth();
  StateVector s(n);
  const CircuitOp ua = synthesize_ua(tree, {0, n});
  apply(ua, s);
  const Eigen::VectorXcd target = c.normalized();
  return {{"n", n},
          {"renormalized", tree.renormalized()},
          {"fidelity", std::abs(target.dot(s.amplitudes()))},
          {"amplitudes", complex_json(s.amplitudes())},
          {"gates", counter_json(ua.counter())}};
}

json qdac_metrics(const ExperimentConfig& cfg, const Eigen::VectorXcd& v, Rng& rng) {
  std::vector<double> d(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = v(static_cast<Eigen::Index>(i)).real();
  const bool is_signed = std::any_of(d.begin(), d.end(), [](double x) { return x < 0; });
  const DigitalState in = make_digital_state(d, cfg.m, is_signed);
  QdacOptions opt;
  opt.mode = parse_qdac_mode(cfg.mode);
  opt.shots = std::max<std::uint64_t>(cfg.shots, 1);
  const QdacOutcome out = qdac_run(in, cfg.function, rng, opt);
  const Moments mo = moments(d);
  json quantized = json::array();
  for (std::uint64_t j = 0; j < in.size(); ++j) quantized.push_back(in.value(j));
  return {{"n", cfg.n},
          {"quantized", quantized},
          {"realized", out.realized},
          {"success", out.success},
          {"attempts", out.attempts},
          {"successes", out.successes},
          {"shots", out.shots},
          {"rounds", out.rounds},
          {"predicted_probability", out.predicted_probability},
          {"exact_probability", out.exact_probability},
          {"empirical_probability", out.empirical_probability},
          {"unquantized_probability", predict_success(d, cfg.function)},
          {"mean", mo.mean},
          {"variance", mo.variance},
          {"fidelity", out.fidelity},
          {"residual", out.residual},
          {"analog", complex_json(out.analog)},
          {"gates", counter_json(out.gates)}};
}

json qadc_json(const QadcResult& r) {
  const std::uint64_t t = static_cast<std::uint64_t>(r.m + r.g);
  return {{"variant", to_string(r.variant)},
          {"n", r.n},
          {"qubits", r.layout.total()},
          {"true_values", r.true_values},
          {"estimates", r.estimates},
          {"modal_probability", r.modal_probability},
          {"fidelity_vs_ideal", r.fidelity_vs_ideal},
          {"residual", r.residual},
          {"controlled_ua_count", r.controlled_ua_count},
          {"expected_controlled_ua_count", 4 * ((std::uint64_t{1} << t) - 1)},
          {"gates", counter_json(r.gates)}};
}

Sweep qadc_m_sweep(QadcVariant variant, const PrepTree& tree, int m_max, int g) {
  Sweep s;
  s.header = {"m", "fidelity_vs_ideal", "min_modal_probability", "max_abs_error"};
  s.rows.resize(static_cast<std::size_t>(m_max));
  parallel_for(s.rows.size(), [&](std::size_t i) {
    const int m = static_cast<int>(i) + 1;
    const QadcResult r = run_qadc(variant, tree, m, g);
    double err = 0;
    for (std::size_t k = 0; k < r.estimates.size(); ++k) {
      err = std::max(err, std::abs(r.estimates[k] - r.true_values[k]));
    }
    s.rows[i] = {static_cast<double>(m), r.fidelity_vs_ideal,
                 *std::min_element(r.modal_probability.begin(), r.modal_probability.end()), err};
  });
  return s;
}

PipelineOptions pipeline_options(const ExperimentConfig& cfg) {
  PipelineOptions opt;
  opt.m = cfg.m;
  opt.g = cfg.g;
  opt.mode = parse_qdac_mode(cfg.mode);
  opt.shots = std::max<std::uint64_t>(cfg.shots, 1);
  return opt;
}

json nonlinear_json(const NonlinearOutcome& out) {
  return {{"success", out.success},
          {"attempts", out.attempts},
          {"successes", out.successes},
          {"shots", out.shots},
          {"output", complex_json(out.output)},
          {"leakage", out.leakage},
          {"exact_probability", out.exact_probability},
          {"empirical_probability", out.empirical_probability},
          {"predicted_probability", out.predicted_probability},
          {"ideal_probability", out.ideal_probability},
          {"realized", out.realized},
          {"normalization", out.normalization},
          {"fidelity", out.fidelity},
          {"controlled_ua_count", out.controlled_ua_count},
          {"qubits", out.qubits},
          {"gates", counter_json(out.gates)}};
}

Sweep amplitude_table(const Eigen::VectorXcd& out, const Eigen::VectorXd& reference) {
  Sweep s;
  s.header = {"k", "output_re", "output_im", "reference"};
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    s.rows.push_back({static_cast<double>(k), out(k).real(), out(k).imag(), reference(k)});
  }
  return s;
}

json perceptron_metrics(const ExperimentConfig& cfg, const Eigen::VectorXcd& x, Rng& rng,
                        Sweep& table) {
  const PrepTree tree = PrepTree::build(x);
  const AnsatzCircuit ansatz = AnsatzCircuit::random(cfg.n, cfg.layers, rng);
  const PipelineOptions opt = pipeline_options(cfg);
  const NonlinearOutcome out = perceptron_forward(tree, ansatz, cfg.function, rng, opt);

  const Activation& act = find_activation(cfg.function);
  const Eigen::VectorXcd wx = ansatz_matrix(ansatz) * tree.amplitudes();
  Eigen::VectorXd exact(wx.size());
  for (Eigen::Index k = 0; k < wx.size(); ++k) exact(k) = act(wx(k).real());
  if (exact.norm() > 0) exact.normalize();
  const oracle::PipelineReference quantized = oracle::classical_pipeline(wx, cfg.function, cfg.m, cfg.g);
  table = amplitude_table(out.output, exact);

  json readouts = json::array();
  for (std::uint64_t k = 0; k < tree.size(); ++k) {
    const PerceptronReadout r = swap_test_readout(out.output, k, cfg.shots, rng);
    readouts.push_back({{"k", r.k},
                        {"estimate", r.estimate},
                        {"p0_hat", r.p0_hat},
                        {"p0_exact", r.p0_exact},
                        {"exact_overlap", r.exact_overlap},
                        {"standard_error", r.standard_error}});
  }
  json j = nonlinear_json(out);
  j["n"] = cfg.n;
  j["layers"] = cfg.layers;
  j["params"] = ansatz.params();
  j["reference"] = std::vector<double>(exact.data(), exact.data() + exact.size());
  j["max_reference_deviation"] = (out.output.real() - exact).cwiseAbs().maxCoeff();
  j["max_quantized_reference_deviation"] = (out.output.real() - quantized.output).cwiseAbs().maxCoeff();
  j["readouts"] = readouts;

  if (cfg.train) {
    // Planted optimum: targets come from a forward pass at the drawn angles,
    // and the search starts from a perturbed copy.
    std::vector<double> targets;
    for (Eigen::Index k = 0; k < out.output.size(); ++k) targets.push_back(std::norm(out.output(k)));
    std::vector<double> start = ansatz.params();
    for (double& a : start) a += (uniform01(rng) < 0.5 ? -1 : 1) * (0.15 + 0.15 * uniform01(rng));
    TrainOptions topt;
    topt.budget = cfg.budget;
    topt.shots = cfg.shots;
    topt.pipeline = opt;
    const TrainResult tr =
        train_demo(tree, targets, AnsatzCircuit(cfg.n, cfg.layers, start), cfg.function, rng, topt);
    j["train"] = {{"initial_loss", tr.initial_loss},
                  {"best_loss", tr.best_loss},
                  {"noise_floor", tr.noise_floor},
                  {"reached_noise_floor", tr.best_loss <= tr.noise_floor},
                  {"evaluations", tr.evaluations},
                  {"trace", tr.trace},
                  {"best_params", tr.best_params}};
  }
  return j;
}

json spectrum_metrics(const Sweep& sweep) {
  std::vector<double> dev(sweep.rows.size());
  parallel_for(sweep.rows.size(), [&](std::size_t i) {
    const double r = sweep.rows[i][0];
    const GroverSpectrum s = spectrum_oracle(r);
    Eigen::VectorXcd c(2);
    c << r, std::sqrt(std::max(0.0, 1 - r * r));
    const Eigen::VectorXcd psi = oracle::swap_test_state(c, 0);
    const oracle::BlockSpectrum b = oracle::block_spectrum(oracle::reflection_operator(psi, 2), psi);
    double d = 0;
    for (const auto& ev : b.eigenvalues) {
      d = std::max(d, std::min(std::abs(ev - s.lambda_plus), std::abs(ev - s.lambda_minus)));
    }
    dev[i] = d;
  });
  return {{"points", sweep.rows.size()},
          {"theta_min", sweep.rows.front()[1]},
          {"theta_max", sweep.rows.back()[1]},
          {"max_dense_eigenvalue_deviation", *std::max_element(dev.begin(), dev.end())}};
}

}  // namespace

int required_qubits(const ExperimentConfig& c) {
  const int n = c.n != 0 ? c.n : (c.values.empty() ? 1 : log2_exact(c.values.size()));
  const int t = c.m + c.g;
  if (c.kind == "prep") return n;
  if (c.kind == "qdac") {
    const int sign = qdac_signed(c) ? 1 : 0;
    return n + (c.m + sign) + (c.m + 2) + 1;
  }
  if (c.kind == "qadc-abs") return 3 * n + 1 + t + c.m;
  if (is_qadc(c.kind)) return 2 * n + 1 + t + c.m + 1;
  if (c.kind == "nonlinear" || c.kind == "perceptron") {
    const bool imag = c.kind == "nonlinear" && find_activation(c.function).uses_imag;
    return std::max(2 * n + 1 + t + (imag ? 2 : 1) * (c.m + 1) + 1, 2 * n + 1);
  }
  return 3;
}

void validate(const ExperimentConfig& c) {
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) {
    field_error("kind", "unknown kind '" + c.kind + "'");
  }
  if (!c.seed) field_error("seed", "required");
  if (c.n < 0 || c.n > 12) field_error("n", "must lie in [0, 12]");
  if (c.m < 1 || c.m > 16) field_error("m", "must lie in [1, 16]");
  if (c.g < 0 || c.g > 8) field_error("g", "must lie in [0, 8]");
  if (c.kind == "spectrum") {
    if (!(c.step > 0 && c.step <= 1)) field_error("step", "must lie in (0, 1]");
    return;
  }
  if (count_sources(c) != 1) {
    field_error("data", "give exactly one of values, data_path, data_seed");
  }
  if (c.kind == "qdac" || c.kind == "nonlinear" || c.kind == "perceptron") {
    try {
      const Activation& act = find_activation(c.function);
      if (act.uses_imag && c.kind != "nonlinear") {
        field_error("function", "'" + c.function + "' needs the complex pipeline");
      }
    } catch (const ValidationError& e) {
      if (std::string(e.what()).rfind("field", 0) == 0) throw;
      field_error("function", e.what());
    }
    QdacMode mode;
    try {
      mode = parse_qdac_mode(c.mode);
    } catch (const ValidationError& e) {
      field_error("mode", e.what());
    }
    if (mode == QdacMode::kAmplify && c.kind != "qdac") {
      field_error("mode", "amplify is only available for qdac");
    }
    if (mode == QdacMode::kSample && c.shots == 0) field_error("shots", "sample mode needs shots >= 1");
  }
  if (c.kind == "perceptron") {
    if (c.layers < 1) field_error("layers", "must be >= 1");
    if (c.shots == 0) field_error("shots", "readout needs shots >= 1");
    if (c.budget < 0) field_error("budget", "must be >= 0");
  }
  const int need = required_qubits(c);
  if (need > qubit_cap()) {
    throw ResourceError("run needs " + std::to_string(need) + " qubits, above the cap of " +
                        std::to_string(qubit_cap()));
  }
}

json to_json(const ExperimentConfig& c) {
  json j = {{"kind", c.kind},
            {"n", c.n},
            {"m", c.m},
            {"g", c.g},
            {"function", c.function},
            {"mode", c.mode},
            {"shots", c.shots},
            {"layers", c.layers},
            {"train", c.train},
            {"budget", c.budget},
            {"step", c.step}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  if (!c.values.empty()) {
    json re = json::array(), im = json::array();
    for (auto v : c.values) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    j["values"] = {{"re", re}, {"im", im}};
  }
  if (!c.data_path.empty()) j["data_path"] = c.data_path;
  if (c.data_seed) j["data_seed"] = *c.data_seed;
  if (!c.output_path.empty()) j["output_path"] = c.output_path;
  if (!c.csv_path.empty()) j["csv_path"] = c.csv_path;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {
      "kind",   "n",      "m",         "g",         "function",    "mode",     "shots",
      "seed",   "layers", "train",     "budget",    "step",        "values",   "data_path",
      "data_seed", "output_path", "csv_path"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) field_error(k, "unknown field");
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
      j.at(key).get_to(out);
    } catch (const json::exception&) {
      field_error(key, "wrong type");
    }
  };
  get("kind", c.kind);
  get("n", c.n);
  get("m", c.m);
  get("g", c.g);
  get("function", c.function);
  get("mode", c.mode);
  get("shots", c.shots);
  get("layers", c.layers);
  get("train", c.train);
  get("budget", c.budget);
  get("step", c.step);
  get("data_path", c.data_path);
  get("output_path", c.output_path);
  get("csv_path", c.csv_path);
  if (j.contains("seed") && !j.at("seed").is_null()) {
    std::uint64_t s = 0;
    get("seed", s);
    c.seed = s;
  }
  if (j.contains("data_seed") && !j.at("data_seed").is_null()) {
    std::uint64_t s = 0;
    get("data_seed", s);
    c.data_seed = s;
  }
  if (j.contains("values")) {
    const json& v = j.at("values");
    try {
      if (v.is_array()) {
        for (const auto& x : v) c.values.emplace_back(x.get<double>(), 0.0);
      } else {
        const auto re = v.at("re").get<std::vector<double>>();
        const auto im = v.value("im", std::vector<double>(re.size(), 0.0));
        if (im.size() != re.size()) field_error("values", "re and im differ in length");
        for (std::size_t i = 0; i < re.size(); ++i) c.values.emplace_back(re[i], im[i]);
      }
    } catch (const json::exception&) {
      field_error("values", "expected a number array or {re, im}");
    }
  }
  return c;
}

Sweep spectrum_sweep(double step) {
  if (!(step > 0 && step <= 1)) throw ValidationError("sweep step must lie in (0, 1]");
  const auto points = static_cast<std::size_t>(std::floor(1 / step + 1e-9)) + 1;
  Sweep s;
  s.header = {"r", "theta", "alpha", "beta", "lambda_plus_re", "lambda_plus_im",
              "lambda_minus_re", "lambda_minus_im"};
  s.rows.resize(points);
  parallel_for(points, [&](std::size_t i) {
    const double r = std::min(1.0, static_cast<double>(i) * step);
    const GroverSpectrum g = spectrum_oracle(r);
    s.rows[i] = {r,
                 g.theta,
                 g.alpha,
                 g.beta,
                 g.lambda_plus.real(),
                 g.lambda_plus.imag(),
                 g.lambda_minus.real(),
                 g.lambda_minus.imag()};
  });
  return s;
}

ResultRecord run(const ExperimentConfig& input) {
  const auto start = std::chrono::steady_clock::now();
  validate(input);
  ExperimentConfig cfg = input;
  ResultRecord rec;
  Rng rng(*cfg.seed);

  if (cfg.kind == "spectrum") {
    Sweep sweep = spectrum_sweep(cfg.step);
    rec.metrics = spectrum_metrics(sweep);
    rec.sweep = std::move(sweep);
  } else {
    const Eigen::VectorXcd data = resolve_data(cfg);
    validate(cfg);
    if (cfg.kind == "prep") {
      rec.metrics = prep_metrics(data);
    } else if (cfg.kind == "qdac") {
      rec.metrics = qdac_metrics(cfg, data, rng);
    } else if (is_qadc(cfg.kind)) {
      const QadcVariant v = parse_qadc_variant(cfg.kind.substr(5));
      const PrepTree tree = PrepTree::build(data);
      rec.metrics = qadc_json(run_qadc(v, tree, cfg.m, cfg.g));
      if (!cfg.csv_path.empty()) rec.sweep = qadc_m_sweep(v, tree, cfg.m, cfg.g);
    } else if (cfg.kind == "nonlinear") {
      const PrepTree tree = PrepTree::build(data);
      const NonlinearOutcome out = nonlinear_transform(tree, cfg.function, rng, pipeline_options(cfg));
      const oracle::PipelineReference ref =
          oracle::classical_pipeline(tree.amplitudes(), cfg.function, cfg.m, cfg.g);
      rec.metrics = nonlinear_json(out);
      rec.metrics["n"] = cfg.n;
      rec.metrics["reference"] = std::vector<double>(ref.output.data(), ref.output.data() + ref.output.size());
      if (out.success) {
        rec.metrics["max_reference_deviation"] = (out.output.real() - ref.output).cwiseAbs().maxCoeff();
        rec.sweep = amplitude_table(out.output, ref.output);
      }
    } else {
      Sweep table;
      rec.metrics = perceptron_metrics(cfg, data.normalized(), rng, table);
      rec.sweep = std::move(table);
    }
  }
  rec.config = to_json(cfg);
  check_finite(rec.metrics, "");
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string render_record(const ResultRecord& record, bool include_timing) {
  json j = {{"schema", kResultSchema}, {"config", record.config}, {"metrics", record.metrics}};
  if (include_timing) j["wall_time_s"] = record.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace qconv
