#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hartree/errors.hpp"
#include "hartree/verifier.hpp"
#include "json.hpp"

namespace hartree {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json potential_json(const PotentialSpec& p) {
  json j;
  j["kind"] = p.kind;
  if (p.kind == "power") {
    j["V0"] = p.V0;
    j["s"] = p.s;
  } else if (p.kind == "file") {
    j["file"] = p.file;
    j["tail_p"] = p.tail_p;
  }
  return j;
}

json config_json(const VerifierConfig& c) {
  json j;
  j["N"] = c.N;
  j["mu1"] = c.mu1;
  j["mu2"] = c.mu2;
  j["beta"] = c.beta;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["V1"] = potential_json(c.V1);
  j["V2"] = potential_json(c.V2);
  j["grid"] = {{"m", c.grid_m}, {"r_max", c.r_max}, {"stretch", c.stretch}};
  j["trial"] = {{"support_fraction", c.support_fraction}, {"m", c.trial_m}, {"mollify_cells", c.mollify_cells}};
  j["convention"] = c.convention;
  j["c_star_margin"] = c.c_star_margin;
  j["boundary_points"] = c.boundary_points;
  j["s_samples"] = c.s_samples;
  j["seed"] = c.seed;
  j["tol_scale"] = c.tol_scale;
  return j;
}

// non-finite values are not representable in JSON
json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string md_cell(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '|') o += '\\';
    o += c;
  }
  return o;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void write_reports(const std::vector<LemmaReport>& reports, const VerifierConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

  json root;
  root["config"] = config_json(cfg);
  root["all_pass"] = all_pass(reports);
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["status"] = r.status;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json x;
      x["name"] = row.name;
      x["value"] = number(row.value);
      x["op"] = row.op;
      if (row.op != "info") {
        x["bound"] = number(row.bound);
        x["pass"] = row.pass;
      }
      rows.push_back(std::move(x));
    }
    j["rows"] = std::move(rows);
    json tables = json::array();
    for (const auto& t : r.tables) tables.push_back(t.name + ".csv");
    j["tables"] = std::move(tables);
    j["notes"] = r.notes;
    arr.push_back(std::move(j));
  }
  root["reports"] = std::move(arr);
  {
    auto out = open_out(fs::path(out_dir) / "report.json");
    out << root.dump(2) << "\n";
  }

  {
    auto md = open_out(fs::path(out_dir) / "report.md");
    md << "# Verification report\n\n";
    md << "N = " << cfg.N << ", (mu1, mu2, beta) = (" << fmt(cfg.mu1) << ", " << fmt(cfg.mu2) << ", " << fmt(cfg.beta)
       << "), lambda = (" << fmt(cfg.lambda1) << ", " << fmt(cfg.lambda2) << "), convention " << cfg.convention
       << ", seed " << cfg.seed << "\n\n";
    md << "| check | status | runtime (s) |\n|---|---|---|\n";
    for (const auto& r : reports) md << "| " << r.id << " | " << r.status << " | " << fmt(r.runtime) << " |\n";
    md << "\nOverall: " << (all_pass(reports) ? "pass" : "FAIL") << "\n";
    for (const auto& r : reports) {
      md << "\n## " << r.id << ": " << md_cell(r.title) << "\n\nStatus: " << r.status << "\n\n";
      if (!r.rows.empty()) {
        md << "| quantity | value | bound | ok |\n|---|---|---|---|\n";
        for (const auto& row : r.rows) {
          md << "| " << md_cell(row.name) << " | " << fmt(row.value) << " | ";
          if (row.op == "info")
            md << " | |\n";
          else
            md << row.op << " " << fmt(row.bound) << " | " << (row.pass ? "yes" : "NO") << " |\n";
        }
      }
      for (const auto& n : r.notes) md << "\n- " << n;
      if (!r.notes.empty()) md << "\n";
      for (const auto& t : r.tables) md << "\nTable: `" << t.name << ".csv` (" << t.rows.size() << " rows)\n";
    }
  }

  for (const auto& r : reports) {
    for (const auto& t : r.tables) {
      auto out = open_out(fs::path(out_dir) / (t.name + ".csv"));
      out << std::setprecision(17);
      for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
      out << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
      }
    }
  }
}

void write_profile_csv(const RadialFn& f, const std::string& path) {
  auto out = open_out(path);
  out << std::setprecision(17) << "r,value\n";
  const auto& g = *f.grid();
  for (int i = 0; i < g.size(); ++i) out << g.nodes()[i] << "," << f.values()[i] << "\n";
}

}  // namespace hartree
