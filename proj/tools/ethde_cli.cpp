// Command-line front end: wraps the experiment drivers and the eigensystem
// cache, emitting CSV reports plus one JSON summary per run.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ethde/experiments.hpp"
#include "ethde/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string spec_path;
  std::string out_dir = ".";
  std::string cache_dir;
  uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;
};

json load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  json j;
  in >> j;
  return j;
}

json model_subobject(const json& j) {
  return j.contains("model") ? j.at("model") : j;
}

std::string resolved_cache(const GlobalOpts& g) {
  if (!g.cache_dir.empty()) return g.cache_dir;
  if (const char* env = std::getenv("ETHDE_CACHE_DIR")) return env;
  return "";
}

ethde::ExperimentSpec experiment_from(const GlobalOpts& g) {
  ethde::ExperimentSpec spec = ethde::ExperimentSpec::from_json(load_spec(g.spec_path));
  spec.seed = g.seed;
  spec.cache_dir = resolved_cache(g);
  return spec;
}

void write_out(const GlobalOpts& g, const std::string& name,
               const std::string& content) {
  fs::create_directories(g.out_dir);
  std::string path = (fs::path(g.out_dir) / name).string();
  ethde::write_text_atomic(path, content);
  if (g.verbose) std::cerr << "wrote " << path << "\n";
}

int cmd_model_info(const GlobalOpts& g) {
  auto spec = ethde::ModelSpec::from_json(model_subobject(load_spec(g.spec_path)));
  auto model = ethde::prepare_model(spec, resolved_cache(g));
  const auto& E = model.eig.energies;

  std::vector<double> sorted(E.data(), E.data() + E.size());
  double r = ethde::level_spacing_ratio(sorted);
  json info = {{"model", spec.descriptor()},
               {"dim", model.eig.dim()},
               {"ground_energy", E(0)},
               {"max_energy", E(E.size() - 1)},
               {"spectral_width", model.eig.spectral_width()},
               {"level_spacing_ratio", r}};
  if (spec.kind == ethde::ModelKind::ising_chain) {
    int L = static_cast<int>(spec.params.at("L"));
    info["level_spacing_ratio_parity_resolved"] =
        ethde::level_spacing_ratio_parity_resolved(model.eig, L);
  }
  std::cout << info.dump(2) << "\n";
  write_out(g, "model_info.json", info.dump(2) + "\n");
  return 0;
}

int cmd_eth_stats(const GlobalOpts& g) {
  auto spec = ethde::ModelSpec::from_json(model_subobject(load_spec(g.spec_path)));
  auto model = ethde::prepare_model(spec, resolved_cache(g));
  auto obs = ethde::to_eigenbasis(model.O, model.eig, 1);
  auto stats = ethde::extract_eth(obs, ethde::default_bin_width(model.eig),
                                  model.kernel_width);
  write_out(g, "eth_diag.csv", ethde::eth_diag_csv(stats));
  write_out(g, "eth_entropy.csv", ethde::eth_entropy_csv(stats));
  write_out(g, "eth_bins.csv", ethde::eth_bins_csv(stats));
  json summary = {{"model", spec.descriptor()},
                  {"bin_width", stats.bin_width},
                  {"kernel_width", stats.kernel_width},
                  {"resid_fail_fraction", stats.resid_fail_fraction()}};
  write_out(g, "eth_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_spectral(const GlobalOpts& g) {
  auto spec = experiment_from(g);
  if (spec.state.mode != ethde::StateSelector::Mode::thermal)
    throw std::invalid_argument("spectral: thermal state selector required");
  auto model = ethde::prepare_model(spec.model, spec.cache_dir);
  auto obs = ethde::to_eigenbasis(model.O, model.eig, 1);
  auto th = ethde::make_thermal(model.eig, spec.state.beta);
  double eta = 0.02 * model.eig.spectral_width();
  double cover = model.eig.spectral_width() + 6.0 * eta;
  auto A = ethde::spectral_function(obs, th,
                                    ethde::make_symmetric_grid(cover, 2048), eta);
  auto G = ethde::retarded_green_grid(A);
  write_out(g, "spectral.csv", ethde::spectral_csv(A, G));
  json summary = {{"model", spec.model.descriptor()},
                  {"beta", spec.state.beta},
                  {"eta", eta},
                  {"transitions", A.lehmann_omegas.size()}};
  write_out(g, "spectral_summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_kick(const GlobalOpts& g) {
  auto spec = experiment_from(g);
  auto study = ethde::run_kick_study(spec);
  write_out(g, "kick.csv", ethde::kick_csv(study, spec.model.descriptor()));
  write_out(g, "kick_summary.json", study.summary.dump(2) + "\n");
  std::cout << study.summary.dump(2) << "\n";
  return 0;
}

int cmd_pulse(const GlobalOpts& g) {
  auto spec = experiment_from(g);
  auto study = ethde::run_response_study(spec);
  write_out(g, "response.csv", ethde::response_csv(study));
  auto G = ethde::retarded_green_grid(study.spectral);
  write_out(g, "spectral.csv", ethde::spectral_csv(study.spectral, G));
  write_out(g, "response_summary.json", study.summary.dump(2) + "\n");
  std::cout << study.summary.dump(2) << "\n";
  return 0;
}

int cmd_scaling(const GlobalOpts& g) {
  std::vector<int> sizes = {6, 8, 10};
  if (!g.spec_path.empty()) {
    json j = load_spec(g.spec_path);
    if (j.contains("sizes")) sizes = j.at("sizes").get<std::vector<int>>();
  }
  auto study = ethde::run_scaling_study(sizes, resolved_cache(g));
  write_out(g, "scaling.csv", ethde::scaling_csv(study));
  write_out(g, "scaling_summary.json", study.summary.dump(2) + "\n");
  std::cout << study.summary.dump(2) << "\n";
  return 0;
}

int cmd_cache(const GlobalOpts& g, bool clear) {
  std::string dir = resolved_cache(g);
  if (dir.empty()) {
    std::cerr << "no cache directory configured (--cache or ETHDE_CACHE_DIR)\n";
    return 1;
  }
  if (!fs::exists(dir)) {
    std::cout << (clear ? "nothing to clear\n" : "(empty)\n");
    return 0;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".eig") continue;
    if (clear) {
      fs::remove(entry.path());
      std::cout << "removed " << entry.path().string() << "\n";
    } else {
      std::cout << entry.path().filename().string() << "  "
                << fs::file_size(entry.path()) << " bytes\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-change studies for kicked and pulsed closed quantum systems"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--spec", g.spec_path, "JSON spec file");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--cache", g.cache_dir,
                 "eigensystem cache directory (env ETHDE_CACHE_DIR)");
  app.add_option("--seed", g.seed, "RNG seed recorded in reports");
  app.add_option("--threads", g.threads, "OpenMP thread count")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbose, "progress on stderr");

  auto* info = app.add_subcommand("model-info", "spectrum statistics");
  auto* eth = app.add_subcommand("eth-stats", "ETH diagnostics");
  auto* spectral = app.add_subcommand("spectral", "spectral function export");
  auto* kick = app.add_subcommand("kick", "delta-kick study");
  auto* pulse = app.add_subcommand("pulse", "finite-pulse response study");
  auto* scaling = app.add_subcommand("scaling", "suppression scaling study");
  auto* cache = app.add_subcommand("cache", "cache management");
  bool cache_clear = false;
  auto* cache_list = cache->add_subcommand("list", "list cached eigensystems");
  auto* cache_clr = cache->add_subcommand("clear", "remove cached eigensystems");
  cache->require_subcommand(1);
  (void)cache_list;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // usage errors exit 1; --help exits 0
  }

  for (auto* sub : {info, eth, spectral, kick, pulse}) {
    if (sub->parsed() && g.spec_path.empty()) {
      std::cerr << "error: " << sub->get_name() << " requires --spec\n";
      return 1;
    }
  }

  ethde::kernels::set_threads(g.threads);
  cache_clear = cache_clr->parsed();

  try {
    if (info->parsed()) return cmd_model_info(g);
    if (eth->parsed()) return cmd_eth_stats(g);
    if (spectral->parsed()) return cmd_spectral(g);
    if (kick->parsed()) return cmd_kick(g);
    if (pulse->parsed()) return cmd_pulse(g);
    if (scaling->parsed()) return cmd_scaling(g);
    if (cache->parsed()) return cmd_cache(g, cache_clear);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
