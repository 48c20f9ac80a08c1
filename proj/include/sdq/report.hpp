#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sdq/analyzer.hpp"
#include "sdq/clocks.hpp"
#include "sdq/diffusion.hpp"
#include "sdq/palm.hpp"
#include "sdq/simulator.hpp"

namespace sdq {

inline constexpr const char* kVersion = "1.0.0";

// shortest round-trip decimal, locale independent
std::string format_number(double x);

// accumulates CSV text: header row, '.' decimals, LF line ends
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string law_csv(const LatticeLaw& law);
std::string histogram_csv(const Histogram& hist);
nlohmann::json law_json(const EmpiricalLaw& law);
nlohmann::json histogram_json(const DiffusionRun& run, std::uint64_t seed);
std::string palm_csv(const std::vector<PalmEstimate>& H, const std::vector<PalmEstimate>& Delta);
std::string clocks_csv(const std::vector<ClockSolution>& rows);
std::string study_csv(const StudyTable& table);
std::string limit_csv(const LimitDensity& density, double step, double top);
nlohmann::json limit_json(const LimitDensity& density, double step, double top);

void write_text(const std::string& file, const std::string& text);

nlohmann::json manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed,
                        const std::vector<std::string>& outputs);

}  // namespace sdq
