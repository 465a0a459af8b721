// Command-line front end of the verification harness.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "hartree/errors.hpp"
#include "hartree/verifier.hpp"

using namespace hartree;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

struct Options {
  std::string config;
  std::string out = "hartree_out";
  std::optional<int> grid_m;
  std::optional<double> r_max;
  std::optional<double> tol_scale;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> convention;
  std::string lemma;
};

VerifierConfig build_config(const Options& o) {
  VerifierConfig c = o.config.empty() ? VerifierConfig{} : load_config(o.config);
  if (o.grid_m) c.grid_m = *o.grid_m;
  if (o.r_max) c.r_max = *o.r_max;
  if (o.tol_scale) c.tol_scale = *o.tol_scale;
  if (o.seed) c.seed = *o.seed;
  if (o.convention) c.convention = *o.convention;
  if (c.grid_m < 32) throw ParameterError("--grid-m must be >= 32");
  if (!(c.r_max > 1.0)) throw ParameterError("--r-max must exceed 1");
  if (!(c.tol_scale > 0.0)) throw ParameterError("--tol-scale must be positive");
  return c;
}

LemmaReport timed(const std::function<LemmaReport()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  LemmaReport r = f();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int finish(const std::vector<LemmaReport>& reports, const VerifierConfig& cfg, const std::string& out) {
  write_reports(reports, cfg, out);
  for (const auto& r : reports) std::cout << r.id << ": " << r.status << "\n";
  std::cout << "report written to " << out << "\n";
  return all_pass(reports) ? kPass : kFail;
}

int run(const std::string& cmd, const Options& o) {
  VerifierConfig cfg = build_config(o);
  Verifier v(cfg);
  namespace fs = std::filesystem;
  std::vector<LemmaReport> reports;
  if (cmd == "constants") {
    reports.push_back(timed([&] { return v.constants_report(); }));
  } else if (cmd == "bubble-certify") {
    reports.push_back(timed([&] { return v.bubble_report(); }));
  } else if (cmd == "solve-ground") {
    reports.push_back(timed([&] { return v.solve_report(); }));
    fs::create_directories(o.out);
    write_profile_csv(v.ground_flow().final_pair.u, (fs::path(o.out) / "ground_u.csv").string());
    write_profile_csv(v.ground_flow().final_pair.v, (fs::path(o.out) / "ground_v.csv").string());
  } else if (cmd == "verify") {
    const auto& ids = Verifier::lemma_ids();
    if (std::find(ids.begin(), ids.end(), o.lemma) == ids.end()) {
      std::cerr << "unknown check id '" << o.lemma << "'; known:";
      for (const auto& id : ids) std::cerr << " " << id;
      std::cerr << "\n";
      return kUsage;
    }
    reports.push_back(timed([&] { return v.verify(o.lemma); }));
  } else if (cmd == "scan-region") {
    for (const char* id : {"region", "region-bound", "lambda-sweep"})
      reports.push_back(timed([&] { return v.verify(id); }));
  } else if (cmd == "homotopy-check") {
    reports.push_back(timed([&] { return v.verify("homotopy"); }));
  } else if (cmd == "run-all") {
    reports = run_all(v);
    fs::create_directories(o.out);
    write_profile_csv(v.ground_flow().final_pair.u, (fs::path(o.out) / "ground_u.csv").string());
    write_profile_csv(v.ground_flow().final_pair.v, (fs::path(o.out) / "ground_v.csv").string());
    write_profile_csv(v.trial().theta, (fs::path(o.out) / "trial_profile.csv").string());
  }
  return finish(reports, cfg, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification harness for the critical Hartree system"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "INI configuration file");
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--grid-m", o.grid_m, "grid nodes");
  app.add_option("--r-max", o.r_max, "grid radius");
  app.add_option("--tol-scale", o.tol_scale, "multiplier on numerical tolerances");
  app.add_option("--seed", o.seed, "seed of the random suites");
  app.add_option("--convention", o.convention, "potential smallness convention")->check(CLI::IsMember({"A3", "C3"}));

  const std::vector<std::pair<std::string, std::string>> cmds{
      {"constants", "HLS, Sobolev and bubble constants"},
      {"bubble-certify", "weak residual of the bubble"},
      {"solve-ground", "projected flow to the limit ground state"},
      {"verify", "run one check by id"},
      {"scan-region", "region search, energy bound and lambda sweep"},
      {"homotopy-check", "homotopy boundary non-vanishing"},
      {"run-all", "every check, full report bundle"}};
  for (const auto& [name, desc] : cmds) {
    auto* sub = app.add_subcommand(name, desc);
    if (name == "verify") sub->add_option("id", o.lemma, "check id")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const AdmissibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
