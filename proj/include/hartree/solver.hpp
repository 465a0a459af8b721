#pragma once

#include <string>
#include <vector>

#include "hartree/variational.hpp"

namespace hartree {

struct FlowConfig {
  double step = 1.0;
  int max_iterations = 5000;
  double tolerance = 1e-3;  // relative weak residual
  int project_every = 1;
  int residual_every = 10;
  int recentre_every = 50;
  // initial pair: "gaussian" (a_u e^{-r^2/w^2}, a_v e^{-r^2/w^2}) or "ground"
  std::string start = "gaussian";
  double start_width = 1.0;
  double start_u = 1.0;
  double start_v = 1.0;
  GridPtr grid;  // default grid when unset
};

struct FlowRecord {
  int iteration = 0;
  double energy = 0.0;
  double nehari_defect = 0.0;
  double residual = -1.0;  // -1 where not evaluated
  double step = 0.0;
  double clamped = 0.0;  // L^2 mass removed by the clamp
};

struct FlowDiagnostics {
  std::vector<FlowRecord> trace;
  Pair final_pair;
  std::string verdict;
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double residual = 0.0;
  double delta_hat = 0.0;        // fitted bubble scale of the final iterate
  double amplitude_ratio = 0.0;  // bulk mean of v/u
  double ratio_spread = 0.0;     // max bulk deviation of v/u from amplitude_ratio
  double max_energy_increase = 0.0;
};

FlowDiagnostics solve_limit_ground_state(const CouplingConstants& cc, const FlowConfig& cfg);
FlowDiagnostics solve_limit_ground_state(const CouplingConstants& cc, const FlowConfig& cfg, const Pair& start);
// scalar equation -Delta w = mu (|x|^{-4} * w^2) w; the v slot stays zero
FlowDiagnostics solve_scalar_choquard(double mu, const FlowConfig& cfg);
FlowDiagnostics solve_scalar_choquard(double mu, const FlowConfig& cfg, const RadialFn& start);

// radial solution of -Delta w = F decaying at infinity
RadialFn inverse_laplacian(const RadialFn& F);

// half-maximum fit of (d/(d^2 + r^2))^{(N-2)/2}
double fit_bubble_scale(const RadialFn& u);

struct VanishingRow {
  double delta = 0.0;
  double potential_mass = 0.0;  // int (V_j + lambda_j) Phi^2
  double lambda_mass = 0.0;     // lambda_j int Phi^2
  double lambda_law = 0.0;      // lambda_j delta^2 mu_j^{-1} |U_{1,0}|_2^2
  double t = 0.0;
  double energy = 0.0;          // J_j(t Phi)
};

// Phi = mu_j^{-1/2} U_{delta,0}
std::vector<VanishingRow> vanishing_energy_limit(const Problem& prob, int mu_index, const std::vector<double>& deltas,
                                                 const GridPtr& grid = nullptr);

struct BrezisLiebRow {
  double sigma = 0.0;
  double offset = 0.0;
  double self_error = 0.0;
  double mixed_error = 0.0;
  double d_full = 0.0;
};

// u_n = u0 + b_sigma, v_n = v0 + b_sigma with b_sigma(r) = sigma^{-(N-2)/2} b(r / sigma).
// Only zero offsets are representable on a single-centre grid.
std::vector<BrezisLiebRow> brezis_lieb_check(const RadialFn& u0, const RadialFn& bubble_profile,
                                             const std::vector<double>& sigmas, const std::vector<double>& offsets,
                                             const RadialFn& v0);
std::vector<BrezisLiebRow> brezis_lieb_check(const RadialFn& u0, const RadialFn& bubble_profile,
                                             const std::vector<double>& sigmas, const std::vector<double>& offsets);

}  // namespace hartree
