#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hartree/riesz.hpp"
#include "hartree/solver.hpp"
#include "hartree/variational.hpp"

namespace hartree {

// Potential source: "none", "power" (V0 (1 + r^2)^{-s}) or "file" (CSV of r,value).
struct PotentialSpec {
  std::string kind = "power";
  double V0 = 0.1;
  double s = 2.0;
  std::string file;
  double tail_p = 0.0;  // decay exponent beyond the last CSV row; 0 = fit from the last two rows
};

struct VerifierConfig {
  int N = 5;
  double mu1 = 1.0, mu2 = 2.0, beta = 3.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  PotentialSpec V1, V2;

  int grid_m = 400;
  double r_max = 40.0;
  double stretch = 1.02;

  FlowConfig flow;

  double support_fraction = 0.999;
  int trial_m = 400;
  int mollify_cells = 5;

  double c_star_margin = 0.02;
  std::string convention = "A3";
  std::vector<double> delta1_candidates{0.3, 0.1, 0.03, 0.01};
  std::vector<double> delta2_candidates{3, 10, 30, 100, 300, 1000, 3000};
  std::vector<double> rbar_candidates{100, 50, 30, 20, 10, 5, 3, 2, 1, 0.5};
  std::vector<double> far_rhos{0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256};
  int boundary_points = 32;
  int s_samples = 9;
  int interior_deltas = 24;
  int interior_rhos = 12;
  std::vector<double> lambda_sweep{0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

  double lemma_lambda = 0.1;  // lambda_j used by the vanishing-limit checks
  double limit_fraction = 0.1;
  double jitter = 0.05;

  std::uint64_t seed = 20240601;
  double tol_scale = 1.0;
};

// INI file; missing keys keep their defaults. Throws IoError / ParameterError.
VerifierConfig load_config(const std::string& path);
GridPtr make_grid(const VerifierConfig& cfg);
RadialFn load_potential(const PotentialSpec& spec, const GridPtr& grid);
Problem make_problem(const VerifierConfig& cfg, const GridPtr& grid);

struct AdmissibilityReport {
  double norm_V1 = 0.0, norm_V2 = 0.0;  // L^{N/2}
  double w1 = 0.0, w2 = 0.0;            // (beta - mu2, beta - mu1) / (2 beta - mu1 - mu2)
  double m = 0.0;                       // min{sqrt(...), sqrt(...), sqrt 2}
  double left_A3 = 0.0, right_A3 = 0.0, margin_A3 = 0.0;
  double left_C3 = 0.0, right_C3 = 0.0, margin_C3 = 0.0;
  bool nonzero = false;  // V1 + V2 not identically 0
  bool satisfied_A3 = false, satisfied_C3 = false;
};

AdmissibilityReport check_A3(const Problem& prob, const ConstantsTable& t);

struct ThresholdChoice {
  double a = 0.0;
  double a_bisect = 0.0;  // bisection on f(t) = left
  double c_inf = 0.0;
  double c_star_lower = 0.0;
  double cbar = 0.0;
  double two_pow = 0.0;    // 2^{1-a} c_inf
  double chain_min = 0.0;  // min{S_HL^2/(4 mu1), S_HL^2/(4 mu2), 2 c_inf}
  bool chain_ok = false;
  bool f_increasing = false;
  bool boundary = false;  // a within 1e-9 of 1
};

// convention "A3" (|V| against S) or "C3" (C^{-1/2}|V| against S_HL)
ThresholdChoice choose_a_and_cbar(const Problem& prob, const ConstantsTable& t, double c_star_lower,
                                  const std::string& convention = "A3");

struct ScanSample {
  double delta = 0.0, rho = 0.0;
  double gamma = 0.0, xi = 0.0;
  double a0 = 0.0;       // (k1 + k2)|grad theta|^2 + int (k1 V1 + k2 V2) theta^2
  double b = 0.0;        // (k1 + k2) D(theta^2, theta^2)
  double l2_mass = 0.0;  // int theta_{delta,y}^2
  double t0 = 0.0;
  double i0 = 0.0;  // I_0 at the N_0 projection

  // I at the N projection for the given lambda_j
  double i_lam(double lam1, double lam2, double k1, double k2) const;
};

struct LambdaRow {
  double lambda = 0.0;
  double k_tilde = 0.0;  // sup over the boundary
  double s_tilde = 0.0;  // sup over the region
  bool gamma_ok = false;
  bool boundary_ok = false;
  bool region_ok = false;
  bool feasible = false;
};

struct RegionScan {
  bool found = false;
  std::string failing;  // first unmet constraint when not found
  double delta1 = 0.0, delta2 = 0.0, rbar = 0.0;
  double c_inf = 0.0, cbar = 0.0, c_star_lower = 0.0;
  double threshold = 0.0;  // min{S_HL^2/(4 mu1), S_HL^2/(4 mu2), 2 c_inf}
  double max_gamma_h1 = 0.0;         // sup over all sampled y at delta1
  double min_gamma_h2 = 0.0;         // inf over |y| <= rbar at delta2
  double boundary_sup = 0.0;         // sup of I_0 over the sampled boundary
  double K = 0.0;                    // sup of I_0 over the sampled region
  std::vector<ScanSample> h1, h2, h3, far, interior;
  std::vector<LambdaRow> lambda_rows;
  double lambda_proxy = 0.0;  // largest feasible swept lambda, 0 if none
  bool lambda_monotone = true;
};

struct ScanContext {
  const TrialProfile* profile = nullptr;
  const Problem* prob = nullptr;
  const CouplingConstants* cc = nullptr;
  double cbar = 0.0;
  double c_star_lower = 0.0;
};

ScanSample scan_sample(const ScanContext& ctx, double delta, double rho);
// evaluate the three constraints for a fixed (delta1, delta2, rbar)
RegionScan evaluate_region(const ScanContext& ctx, const VerifierConfig& cfg, double delta1, double delta2,
                           double rbar);
RegionScan scan_region(const ScanContext& ctx, const VerifierConfig& cfg);

struct Row {
  std::string name;
  double value = 0.0;
  std::string op;  // "<", ">", "<=", ">=", "info"
  double bound = 0.0;
  bool pass = true;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct LemmaReport {
  std::string id;
  std::string title;
  std::string status = "pass";  // pass / fail / informational
  std::vector<Row> rows;
  std::vector<Table> tables;
  std::vector<std::string> notes;
  double runtime = 0.0;  // seconds; kept out of the JSON report

  void check(const std::string& name, double value, const std::string& op, double bound);
  void info(const std::string& name, double value);
  void finish();  // sets status from the rows
};

struct HomotopyClearance {
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;
};

LemmaReport homotopy_boundary_check(const RegionScan& scan, const std::vector<double>& s_samples,
                                    HomotopyClearance* clearance = nullptr);

// Shared artefacts built once per run.
class Verifier {
 public:
  explicit Verifier(VerifierConfig cfg);

  const VerifierConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }
  const Problem& problem() const { return prob_; }
  const CouplingConstants& coupling() const { return cc_; }
  const ConstantsTable& constants() const { return table_; }
  const AdmissibilityReport& admissibility() const { return adm_; }
  const ThresholdChoice& thresholds();
  const TrialProfile& trial();
  const RegionScan& scan();
  const FlowDiagnostics& ground_flow();

  LemmaReport constants_report();
  LemmaReport bubble_report();
  LemmaReport admissibility_report();
  LemmaReport solve_report();
  LemmaReport scan_report();
  LemmaReport homotopy_report();
  LemmaReport verify(const std::string& id);

  static const std::vector<std::string>& lemma_ids();

 private:
  double tol(double x) const { return x * cfg_.tol_scale; }

  VerifierConfig cfg_;
  GridPtr grid_;
  Problem prob_;
  CouplingConstants cc_;
  ConstantsTable table_;
  AdmissibilityReport adm_;
  bool have_thresholds_ = false, have_trial_ = false, have_scan_ = false, have_flow_ = false;
  ThresholdChoice thr_;
  TrialProfile trial_;
  RegionScan scan_;
  FlowDiagnostics flow_;
};

// Writes report.json, report.md and one CSV per table into out_dir.
void write_reports(const std::vector<LemmaReport>& reports, const VerifierConfig& cfg, const std::string& out_dir);
void write_profile_csv(const RadialFn& f, const std::string& path);

// All checks in a fixed order; returns the reports.
std::vector<LemmaReport> run_all(Verifier& v);

bool all_pass(const std::vector<LemmaReport>& reports);

}  // namespace hartree
