#include "sdq/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sdq/config.hpp"
#include "sdq/parallel.hpp"

namespace sdq {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string num(double x) { return format_number(x); }
std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

std::vector<double> grid(double step, double top) {
  std::vector<double> g;
  const auto k = static_cast<std::int64_t>(std::ceil(top / step - 1e-9));
  for (std::int64_t i = 0; i <= k; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}

}  // namespace

CsvWriter::CsvWriter(const std::vector<std::string>& header) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  return *this;
}

std::string law_csv(const LatticeLaw& law) {
  CsvWriter w({"ell", "scaled_u", "mass"});
  const double rn = std::sqrt(static_cast<double>(law.n));
  for (std::size_t l = 0; l < law.mass.size(); ++l)
    w.row({std::to_string(l), num(static_cast<double>(l) / rn), num(law.mass[l])});
  return w.str();
}

std::string histogram_csv(const Histogram& hist) {
  CsvWriter w({"ell", "scaled_u", "mass"});
  const double total = hist.total();
  for (std::size_t i = 0; i < hist.weight.size(); ++i) {
    if (hist.weight[i] == 0.0) continue;
    w.row({std::to_string(i), num(static_cast<double>(i) * hist.width), num(hist.weight[i] / total)});
  }
  return w.str();
}

json law_json(const EmpiricalLaw& law) {
  const LatticeLaw d = law.distribution();
  return json{{"n", law.n},
              {"seed", law.seed},
              {"replications", law.replications},
              {"events", law.events},
              {"burn_in_events", law.burn_in_events},
              {"burn_in_time", law.burn_in_time},
              {"total_time", law.total_time},
              {"arrivals", law.arrivals},
              {"departures", law.departures},
              {"mass", d.mass}};
}

json histogram_json(const DiffusionRun& run, std::uint64_t seed) {
  const double total = run.hist.total();
  std::vector<double> mass;
  for (double x : run.hist.weight) mass.push_back(total > 0.0 ? x / total : 0.0);
  return json{{"seed", seed},
              {"dt", run.dt},
              {"samples", run.samples},
              {"bin_width", run.hist.width},
              {"overflow", total > 0.0 ? run.hist.overflow / total : 0.0},
              {"complementarity_proxy", run.complementarity_proxy()},
              {"min_state", run.min_state},
              {"mass", mass}};
}

std::string palm_csv(const std::vector<PalmEstimate>& H, const std::vector<PalmEstimate>& D) {
  if (H.size() != D.size()) throw std::invalid_argument("palm_csv: H and Delta tables differ in length");
  CsvWriter w({"x", "q", "H_hat", "Delta_hat", "epochs_used", "H_stderr", "Delta_stderr", "sufficient"});
  for (std::size_t i = 0; i < H.size(); ++i)
    w.row({num(H[i].x), num(H[i].q), num(H[i].value), num(D[i].value), num(H[i].epochs_used), num(H[i].std_error),
           num(D[i].std_error), H[i].sufficient ? "1" : "0"});
  return w.str();
}

std::string clocks_csv(const std::vector<ClockSolution>& rows) {
  CsvWriter w({"theta", "n", "eta", "zeta", "residual_eta", "residual_zeta"});
  for (const ClockSolution& s : rows)
    w.row({num(s.theta), std::to_string(s.n), num(s.eta), num(s.zeta), num(s.residual_eta), num(s.residual_zeta)});
  return w.str();
}

std::string study_csv(const StudyTable& t) {
  CsvWriter w({"n", "ks", "boundary_mass", "boundary_lhs", "jump_ratio"});
  for (const StudyRow& r : t.rows)
    w.row({std::to_string(r.n), num(r.ks), num(r.boundary_mass), num(r.boundary_lhs),
           r.jump_ratio ? num(*r.jump_ratio) : ""});
  return w.str();
}

std::string limit_csv(const LimitDensity& density, double step, double top) {
  CsvWriter w({"u", "h", "Hcdf"});
  for (double u : grid(step, top)) w.row({num(u), num(density.h(u)), num(density.cdf(u))});
  return w.str();
}

json limit_json(const LimitDensity& density, double step, double top) {
  json pts = json::array();
  for (double u : grid(step, top)) pts.push_back({{"u", u}, {"h", density.h(u)}, {"Hcdf", density.cdf(u)}});
  return json{{"C", density.normalizer()},
              {"closed_form", density.closed_form()},
              {"boundary_target", density.boundary_target()},
              {"grid", pts}};
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + file);
}

json manifest(const std::string& command, const json& config, std::uint64_t seed,
              const std::vector<std::string>& outputs) {
  return json{{"command", command},
              {"version", kVersion},
              {"config_hash", config_hash(config)},
              {"seed", seed},
              {"workers", worker_count()},
              {"outputs", outputs},
              {"config", config}};
}

}  // namespace sdq
