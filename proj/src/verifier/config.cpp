#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hartree/errors.hpp"
#include "hartree/verifier.hpp"

namespace hartree {

namespace {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParameterError("config: bad number '" + item + "' in " + key);
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ParameterError("config: bad number '" + item + "' in " + key);
    out.push_back(x);
  }
  if (out.empty()) throw ParameterError("config: empty list for " + key);
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& t) : t_(t) {}

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto v = t_.get_optional<std::string>(key);
    if (!v) return;
    try {
      out = t_.get<T>(key);
    } catch (const pt::ptree_bad_data&) {
      throw ParameterError("config: bad value '" + *v + "' for " + key);
    }
  }

  void list(const std::string& key, std::vector<double>& out) {
    seen_.insert(key);
    auto v = t_.get_optional<std::string>(key);
    if (v) out = parse_list(key, *v);
  }

  void potential(const std::string& sec, PotentialSpec& p) {
    get(sec + ".kind", p.kind);
    get(sec + ".V0", p.V0);
    get(sec + ".s", p.s);
    get(sec + ".file", p.file);
    get(sec + ".tail_p", p.tail_p);
  }

  void reject_unknown() const {
    for (const auto& [sec, body] : t_) {
      for (const auto& [key, val] : body) {
        std::string full = sec + "." + key;
        if (!seen_.count(full)) throw ParameterError("config: unknown key " + full);
      }
    }
  }

 private:
  const pt::ptree& t_;
  std::set<std::string> seen_;
};

}  // namespace

VerifierConfig load_config(const std::string& path) {
  pt::ptree tree;
  {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ParameterError("config: " + std::string(e.what()));
    }
  }
  VerifierConfig c;
  Reader r(tree);
  r.get("problem.N", c.N);
  r.get("problem.mu1", c.mu1);
  r.get("problem.mu2", c.mu2);
  r.get("problem.beta", c.beta);
  r.get("problem.lambda1", c.lambda1);
  r.get("problem.lambda2", c.lambda2);
  r.potential("V1", c.V1);
  r.potential("V2", c.V2);
  r.get("grid.m", c.grid_m);
  r.get("grid.r_max", c.r_max);
  r.get("grid.stretch", c.stretch);
  r.get("flow.step", c.flow.step);
  r.get("flow.max_iterations", c.flow.max_iterations);
  r.get("flow.tolerance", c.flow.tolerance);
  r.get("flow.project_every", c.flow.project_every);
  r.get("flow.residual_every", c.flow.residual_every);
  r.get("flow.recentre_every", c.flow.recentre_every);
  r.get("flow.start", c.flow.start);
  r.get("flow.start_width", c.flow.start_width);
  r.get("flow.start_u", c.flow.start_u);
  r.get("flow.start_v", c.flow.start_v);
  r.get("trial.support_fraction", c.support_fraction);
  r.get("trial.m", c.trial_m);
  r.get("trial.mollify_cells", c.mollify_cells);
  r.get("scan.c_star_margin", c.c_star_margin);
  r.get("scan.convention", c.convention);
  r.list("scan.delta1", c.delta1_candidates);
  r.list("scan.delta2", c.delta2_candidates);
  r.list("scan.rbar", c.rbar_candidates);
  r.list("scan.far_rhos", c.far_rhos);
  r.get("scan.boundary_points", c.boundary_points);
  r.get("scan.s_samples", c.s_samples);
  r.get("scan.interior_deltas", c.interior_deltas);
  r.get("scan.interior_rhos", c.interior_rhos);
  r.list("scan.lambda_sweep", c.lambda_sweep);
  r.get("limits.lemma_lambda", c.lemma_lambda);
  r.get("limits.fraction", c.limit_fraction);
  r.get("limits.jitter", c.jitter);
  r.get("run.seed", c.seed);
  r.get("run.tol_scale", c.tol_scale);
  r.reject_unknown();

  if (c.convention != "A3" && c.convention != "C3") throw ParameterError("config: convention must be A3 or C3");
  if (c.grid_m < 32 || c.trial_m < 32) throw ParameterError("config: grid sizes must be >= 32");
  if (!(c.r_max > 1.0) || !(c.stretch >= 1.0)) throw ParameterError("config: bad grid extent");
  if (c.boundary_points < 2 || c.s_samples < 2) throw ParameterError("config: need >= 2 boundary and s samples");
  if (c.interior_deltas < 2 || c.interior_rhos < 2) throw ParameterError("config: need >= 2 interior samples");
  if (!(c.tol_scale > 0.0)) throw ParameterError("config: tol_scale must be positive");
  if (!(c.c_star_margin > 0.0)) throw ParameterError("config: c_star_margin must be positive");
  return c;
}

GridPtr make_grid(const VerifierConfig& cfg) { return RadialGrid::make(cfg.N, cfg.grid_m, cfg.r_max, cfg.stretch); }

RadialFn load_potential(const PotentialSpec& spec, const GridPtr& grid) {
  if (spec.kind == "none") return RadialFn();
  if (spec.kind == "power") {
    if (!(spec.s > 1.0)) throw ParameterError("potential: power decay too slow for L^{N/2}");
    return power_potential(grid, spec.V0, spec.s);
  }
  if (spec.kind != "file") throw ParameterError("potential: unknown kind '" + spec.kind + "'");
  std::ifstream in(spec.file);
  if (!in) throw IoError("cannot open potential file '" + spec.file + "'");
  std::vector<double> rs, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) continue;
    try {
      double r = std::stod(a), v = std::stod(b);
      rs.push_back(r);
      vs.push_back(v);
    } catch (const std::exception&) {
      if (!rs.empty()) throw IoError("potential file '" + spec.file + "': bad row '" + line + "'");
      // header line
    }
  }
  if (rs.size() < 2) throw IoError("potential file '" + spec.file + "': need at least two rows");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) throw IoError("potential file '" + spec.file + "': radii must increase");
  const std::size_t n = rs.size();
  double p = spec.tail_p;
  if (p == 0.0) {
    if (!(vs[n - 1] > 0.0 && vs[n - 2] > 0.0)) throw IoError("potential file '" + spec.file + "': cannot fit tail");
    p = -std::log(vs[n - 1] / vs[n - 2]) / std::log(rs[n - 1] / rs[n - 2]);
  }
  const double c = vs[n - 1] * std::pow(rs[n - 1], p);
  auto f = [&](double r) {
    if (r <= rs.front()) return vs.front();
    if (r >= rs.back()) return c * std::pow(r, -p);
    auto it = std::upper_bound(rs.begin(), rs.end(), r);
    std::size_t k = static_cast<std::size_t>(it - rs.begin());
    double w = (r - rs[k - 1]) / (rs[k] - rs[k - 1]);
    return (1.0 - w) * vs[k - 1] + w * vs[k];
  };
  return RadialFn::sample(grid, f, Tail::power(p, c));
}

Problem make_problem(const VerifierConfig& cfg, const GridPtr& grid) {
  coupling_constants(cfg.mu1, cfg.mu2, cfg.beta, cfg.N);  // domain check first
  Problem p;
  p.N = cfg.N;
  p.mu1 = cfg.mu1;
  p.mu2 = cfg.mu2;
  p.beta = cfg.beta;
  p.lambda1 = cfg.lambda1;
  p.lambda2 = cfg.lambda2;
  p.V1 = load_potential(cfg.V1, grid);
  p.V2 = load_potential(cfg.V2, grid);
  p.validate();
  return p;
}

}  // namespace hartree
