#include "ethde/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ethde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_path(const std::string& cache_dir, const std::string& descriptor) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(descriptor)));
  return cache_dir + "/" + buf + ".eig";
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// least-squares slope of y against x
double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

/// Per-eigenstate values of the operator-form kick response at strength
/// lambda: diag of e^{i lambda O} [H0, O] e^{-i lambda O} times -i lambda.
VectorR operator_route_diag(const EigenbasisObservable& obs,
                            const KickOperator& kick, double lambda) {
  const Eigen::Index dim = obs.dim();
  const VectorR& E = obs.energies();
  const MatrixC& O = obs.matrix();
  MatrixC B(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) B(i, j) = (E(i) - E(j)) * O(i, j);
  MatrixC C = kick.apply(lambda, MatrixC::Identity(dim, dim));
  MatrixC M = C.adjoint() * (B * C);
  VectorR out(dim);
  for (Eigen::Index n = 0; n < dim; ++n)
    out(n) = std::real(Complex(0.0, -lambda) * M(n, n));
  return out;
}

}  // namespace

StateSelector StateSelector::from_json(const nlohmann::json& j) {
  StateSelector s;
  const std::string mode = j.value("mode", "beta_window");
  if (mode == "beta_window") {
    s.mode = Mode::beta_window;
    s.beta_lo = j.value("beta_lo", 0.2);
    s.beta_hi = j.value("beta_hi", 1.0);
    s.count = j.value("count", 20);
  } else if (mode == "thermal") {
    s.mode = Mode::thermal;
    s.beta = j.value("beta", 0.5);
  } else if (mode == "index") {
    s.mode = Mode::index;
    s.index = j.value("index", 0);
  } else {
    throw std::invalid_argument("unknown state selector mode: " + mode);
  }
  return s;
}

nlohmann::json StateSelector::to_json() const {
  switch (mode) {
    case Mode::beta_window:
      return {{"mode", "beta_window"},
              {"beta_lo", beta_lo},
              {"beta_hi", beta_hi},
              {"count", count}};
    case Mode::thermal:
      return {{"mode", "thermal"}, {"beta", beta}};
    default:
      return {{"mode", "index"}, {"index", index}};
  }
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  s.model = ModelSpec::from_json(j.at("model"));
  if (j.contains("state")) s.state = StateSelector::from_json(j.at("state"));
  if (j.contains("pulse")) s.pulse = Pulse::from_json(j.at("pulse"));
  if (j.contains("lambdas")) s.lambdas = j.at("lambdas").get<std::vector<double>>();
  s.max_order = j.value("max_order", 8);
  s.evolution.dt = j.value("dt", 0.0);
  s.seed = j.value("seed", uint64_t{0});
  s.cache_dir = j.value("cache_dir", std::string{});
  return s;
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["model"] = model.to_json();
  j["state"] = state.to_json();
  j["pulse"] = pulse.to_json();
  j["lambdas"] = lambdas;
  j["max_order"] = max_order;
  j["dt"] = evolution.dt;
  j["seed"] = seed;
  return j;
}

std::string ExperimentSpec::content_hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

double PreparedModel::max_abs_energy() const {
  return std::max(std::abs(eig.energies(0)),
                  std::abs(eig.energies(eig.dim() - 1)));
}

PreparedModel prepare_model(const ModelSpec& spec, const std::string& cache_dir) {
  HermitianMatrix H = build_hamiltonian(spec);
  HermitianMatrix O = build_observable(spec, H);

  Eigensystem eig;
  bool loaded = false;
  std::string path;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    path = cache_path(cache_dir, spec.descriptor());
    loaded = load_eigensystem(path, spec.descriptor(), eig);
  }
  if (!loaded) {
    eig = diagonalize(H);
    if (!cache_dir.empty()) save_eigensystem(path, eig, spec.descriptor());
  }

  PreparedModel out{spec, std::move(H), std::move(O), std::move(eig), 0.0};
  out.kernel_width = default_kernel_width(out.eig);
  return out;
}

KickStudy run_kick_study(const ExperimentSpec& spec) {
  PreparedModel model = prepare_model(spec.model, spec.cache_dir);
  const Eigen::Index dim = model.eig.dim();
  const bool small = dim <= 1024;  // series + operator routes only at small dims

  int max_power = small ? std::max(2, (spec.max_order + 1) / 2) : 1;
  EigenbasisObservable obs = to_eigenbasis(model.O, model.eig, max_power);
  KickOperator kick(obs);
  VectorR betas = effective_beta_all(model.eig, model.kernel_width);

  KickStudy study;

  if (spec.state.mode == StateSelector::Mode::thermal) {
    InitialState th = make_thermal(model.eig, spec.state.beta);
    VectorR raw(dim);
    for (Eigen::Index n = 0; n < dim; ++n)
      raw(n) = std::exp(-spec.state.beta * model.eig.energies(n));
    for (double lam : spec.lambdas) {
      KickRow row{};
      row.state = -1;
      row.energy = kNaN;
      row.beta_eff = spec.state.beta;
      row.lambda = lam;
      row.de_exact = delta_e_kick_state(kick, lam, th);
      row.de_operator = small ? kick_commutator_response(obs, lam, th.weights) : kNaN;
      row.de_operator_unnorm = small ? kick_commutator_response(obs, lam, raw) : kNaN;
      row.de_series = kNaN;
      row.max_route_gap = kNaN;
      row.r4 = kNaN;
      study.rows.push_back(row);
    }
  } else {
    std::vector<Eigen::Index> states;
    if (spec.state.mode == StateSelector::Mode::index) {
      states = {spec.state.index};
    } else {
      states = select_beta_window(model.eig, spec.state.beta_lo,
                                  spec.state.beta_hi, spec.state.count,
                                  model.kernel_width);
      if (states.empty())
        throw std::runtime_error("run_kick_study: empty beta_eff window");
    }

    for (double lam : spec.lambdas) {
      VectorR de = delta_e_kick(kick, lam, states);
      VectorR op_diag;
      if (small) op_diag = operator_route_diag(obs, kick, lam);
      for (size_t j = 0; j < states.size(); ++j) {
        Eigen::Index n = states[j];
        KickRow row{};
        row.state = n;
        row.energy = model.eig.energies(n);
        row.beta_eff = betas(n);
        row.lambda = lam;
        row.de_exact = de(static_cast<Eigen::Index>(j));
        row.de_operator = small ? op_diag(n) : kNaN;
        row.de_operator_unnorm = row.de_operator;  // one-hot weights
        if (small) {
          auto terms = delta_kick_series(obs, n, lam, spec.max_order, true);
          double sum = 0, gap = 0;
          for (const auto& t : terms) {
            sum += t.value();
            if (t.order % 2 == 0) gap = std::max(gap, t.route_gap());
          }
          row.de_series = sum;
          row.max_route_gap = gap;
          row.r4 = order4_decomposition(obs, n).ratio();
        } else {
          row.de_series = kNaN;
          row.max_route_gap = kNaN;
          row.r4 = kNaN;
        }
        study.rows.push_back(row);
      }
    }
  }

  // summary statistics, sequentially from the ordered rows
  double sum = 0, sumsq = 0;
  int n_samples = 0, n_pos = 0;
  for (const auto& row : study.rows) {
    if (row.state < 0) continue;
    ++n_samples;
    if (row.de_exact > 0) ++n_pos;
    sum += row.de_exact;
    sumsq += row.de_exact * row.de_exact;
  }
  if (n_samples > 0) {
    study.positive_fraction = double(n_pos) / n_samples;
    study.mean = sum / n_samples;
    double var = std::max(0.0, sumsq / n_samples - study.mean * study.mean);
    study.standard_error =
        n_samples > 1 ? std::sqrt(var / (n_samples - 1)) : kNaN;
  } else {
    study.positive_fraction = kNaN;
    study.mean = kNaN;
    study.standard_error = kNaN;
  }

  study.summary = {{"spec_hash", spec.content_hash()},
                   {"model", spec.model.descriptor()},
                   {"dim", dim},
                   {"samples", n_samples},
                   {"positive_fraction", study.positive_fraction},
                   {"mean_de_exact", study.mean},
                   {"standard_error", study.standard_error},
                   {"seed", spec.seed}};
  return study;
}

ResponseStudy run_response_study(const ExperimentSpec& spec) {
  if (spec.state.mode != StateSelector::Mode::thermal)
    throw std::invalid_argument("run_response_study: thermal state required");
  if (spec.pulse.shape() == Pulse::Shape::delta_kick)
    throw std::invalid_argument(
        "run_response_study: finite-duration pulse required");

  PreparedModel model = prepare_model(spec.model, spec.cache_dir);
  EigenbasisObservable obs = to_eigenbasis(model.O, model.eig, 1);
  InitialState th = make_thermal(model.eig, spec.state.beta);

  double eta = 0.02 * model.eig.spectral_width();
  // unit-amplitude template of the requested pulse shape
  Pulse unit = spec.pulse.scaled(1.0 / spec.pulse.amplitude());

  ResponseStudy study;
  {
    double cover = model.eig.spectral_width() + 6.0 * eta;
    study.spectral =
        spectral_function(obs, th, make_symmetric_grid(cover, 2048), eta);
  }

  DeltaELinear probe = delta_e_linear(study.spectral, unit);
  double scale = 1e-3 * model.max_abs_energy();
  if (probe.lehmann <= 0)
    throw std::runtime_error(
        "run_response_study: non-positive linear response; cannot calibrate");
  double lam0 = std::sqrt(scale / probe.lehmann);

  for (int k = 0; k < 3; ++k) {
    double amp = lam0 / double(1 << k);
    Pulse p = unit.scaled(amp);
    ResponseRung rung{};
    rung.amplitude = amp;
    DeltaELinear lin = delta_e_linear(study.spectral, p);
    rung.de_lr_lehmann = lin.lehmann;
    rung.de_lr_broadened = lin.broadened;
    rung.de_exact = delta_e_pulse_state(obs, p, th, spec.evolution);
    rung.rel_error_lehmann =
        std::abs(lin.lehmann - rung.de_exact) / std::abs(rung.de_exact);
    rung.rel_error_broadened =
        std::abs(lin.broadened - rung.de_exact) / std::abs(rung.de_exact);
    study.rungs.push_back(rung);
  }

  study.summary = {{"spec_hash", spec.content_hash()},
                   {"model", spec.model.descriptor()},
                   {"beta", spec.state.beta},
                   {"eta", eta},
                   {"lambda0", lam0},
                   {"seed", spec.seed}};
  for (const auto& r : study.rungs)
    study.summary["rungs"].push_back({{"amplitude", r.amplitude},
                                      {"de_exact", r.de_exact},
                                      {"de_lr_lehmann", r.de_lr_lehmann},
                                      {"de_lr_broadened", r.de_lr_broadened},
                                      {"rel_error", r.rel_error_lehmann}});
  return study;
}

namespace {

ModelSpec chain_spec(int L, bool chaotic) {
  ModelSpec m;
  m.kind = ModelKind::ising_chain;
  m.params = {{"L", double(L)},
              {"J", 1.0},
              {"h_x", chaotic ? 1.05 : 1.0},
              {"h_z", chaotic ? 0.5 : 0.0}};
  int c = L / 2;
  // observable with a rich power algebra (single Pauli strings square to
  // the identity and give a degenerate series)
  m.observable.strings = {{{{c, PauliAxis::x}}, 1.0},
                          {{{c, PauliAxis::z}}, 1.0},
                          {{{c, PauliAxis::z}, {c + 1, PauliAxis::z}}, 1.0}};
  return m;
}

ScalingPoint scaling_point(const ModelSpec& spec, const std::string& cache_dir,
                           int count) {
  PreparedModel model = prepare_model(spec, cache_dir);
  EigenbasisObservable obs = to_eigenbasis(model.O, model.eig, 3);
  auto states = select_beta_window(model.eig, 0.2, 1.0, count,
                                   model.kernel_width);
  if (states.empty())
    throw std::runtime_error("run_scaling_study: empty beta_eff window");
  std::vector<double> r4s, odd3s;
  for (Eigen::Index n : states) {
    r4s.push_back(order4_decomposition(obs, n).ratio());
    odd3s.push_back(std::abs(odd_order_term(obs, n, 3)));
  }
  ScalingPoint p;
  p.L = static_cast<int>(spec.params.at("L"));
  p.dim = model.eig.dim();
  p.median_r4 = median(std::move(r4s));
  p.median_abs_odd3 = median(std::move(odd3s));
  return p;
}

}  // namespace

ScalingStudy run_scaling_study(const std::vector<int>& sizes,
                               const std::string& cache_dir,
                               int states_per_size) {
  if (sizes.size() < 3)
    throw std::invalid_argument("run_scaling_study: need at least 3 sizes");

  ScalingStudy study;
  for (int L : sizes) {
    study.chaotic.push_back(
        scaling_point(chain_spec(L, true), cache_dir, states_per_size));
    study.integrable.push_back(
        scaling_point(chain_spec(L, false), cache_dir, states_per_size));
  }

  auto slope_of = [](const std::vector<ScalingPoint>& pts) {
    std::vector<double> x, y;
    for (const auto& p : pts) {
      x.push_back(std::log(double(p.dim)));
      y.push_back(std::log(p.median_r4));
    }
    return slope_fit(x, y);
  };
  study.chaotic_slope = slope_of(study.chaotic);
  study.integrable_slope = slope_of(study.integrable);

  bool monotone = true;
  for (size_t i = 1; i < study.integrable.size(); ++i)
    if (study.integrable[i].median_r4 >= study.integrable[i - 1].median_r4)
      monotone = false;
  study.integrable_outside_window = !monotone ||
                                    study.integrable_slope < -0.8 ||
                                    study.integrable_slope > -0.2;

  study.summary = {{"chaotic_slope", study.chaotic_slope},
                   {"integrable_slope", study.integrable_slope},
                   {"integrable_outside_window", study.integrable_outside_window}};
  for (const auto& p : study.chaotic)
    study.summary["chaotic"].push_back(
        {{"L", p.L}, {"dim", p.dim}, {"median_r4", p.median_r4}});
  for (const auto& p : study.integrable)
    study.summary["integrable"].push_back(
        {{"L", p.L}, {"dim", p.dim}, {"median_r4", p.median_r4}});
  return study;
}

// --- report output -------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string kick_csv(const KickStudy& study, const std::string& model_tag) {
  std::ostringstream out;
  out << "model,state,energy,beta_eff,lambda,de_exact,de_operator,"
         "de_operator_unnorm,de_series,max_route_gap,r4\n";
  for (const auto& r : study.rows) {
    out << model_tag << ',' << r.state << ',' << format_double(r.energy) << ','
        << format_double(r.beta_eff) << ',' << format_double(r.lambda) << ','
        << format_double(r.de_exact) << ',' << format_double(r.de_operator)
        << ',' << format_double(r.de_operator_unnorm) << ','
        << format_double(r.de_series) << ',' << format_double(r.max_route_gap)
        << ',' << format_double(r.r4) << '\n';
  }
  return out.str();
}

std::string response_csv(const ResponseStudy& study) {
  std::ostringstream out;
  out << "amplitude,de_exact,de_lr_lehmann,de_lr_broadened,"
         "rel_error_lehmann,rel_error_broadened\n";
  for (const auto& r : study.rungs) {
    out << format_double(r.amplitude) << ',' << format_double(r.de_exact) << ','
        << format_double(r.de_lr_lehmann) << ','
        << format_double(r.de_lr_broadened) << ','
        << format_double(r.rel_error_lehmann) << ','
        << format_double(r.rel_error_broadened) << '\n';
  }
  return out.str();
}

std::string spectral_csv(const SpectralFunction& spec,
                         const std::vector<Complex>& green) {
  std::ostringstream out;
  out << "omega,A,reG,imG\n";
  for (size_t i = 0; i < spec.grid.size(); ++i) {
    out << format_double(spec.grid[i]) << ',' << format_double(spec.values[i])
        << ',' << format_double(green[i].real()) << ','
        << format_double(green[i].imag()) << '\n';
  }
  return out.str();
}

std::string scaling_csv(const ScalingStudy& study) {
  std::ostringstream out;
  out << "family,L,dim,median_r4,median_abs_odd3\n";
  for (const auto& p : study.chaotic)
    out << "chaotic," << p.L << ',' << p.dim << ','
        << format_double(p.median_r4) << ',' << format_double(p.median_abs_odd3)
        << '\n';
  for (const auto& p : study.integrable)
    out << "integrable," << p.L << ',' << p.dim << ','
        << format_double(p.median_r4) << ',' << format_double(p.median_abs_odd3)
        << '\n';
  return out.str();
}

std::string eth_diag_csv(const EthStatistics& stats) {
  std::ostringstream out;
  out << "ebar,o_diag\n";
  for (const auto& [e, o] : stats.diagonal_curve)
    out << format_double(e) << ',' << format_double(o) << '\n';
  return out.str();
}

std::string eth_entropy_csv(const EthStatistics& stats) {
  std::ostringstream out;
  out << "energy,entropy\n";
  for (const auto& [e, s] : stats.entropy_curve)
    out << format_double(e) << ',' << format_double(s) << '\n';
  return out.str();
}

std::string eth_bins_csv(const EthStatistics& stats) {
  std::ostringstream out;
  out << "ebar,omega,count,mean_abs,f1,resid_mean_re,resid_mean_im,resid_var,"
         "usable\n";
  for (const auto& b : stats.offdiag_bins)
    out << format_double(b.ebar) << ',' << format_double(b.omega) << ','
        << b.count << ',' << format_double(b.mean_abs) << ','
        << format_double(b.f1) << ',' << format_double(b.resid_mean_re) << ','
        << format_double(b.resid_mean_im) << ',' << format_double(b.resid_var)
        << ',' << (b.usable ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace ethde
