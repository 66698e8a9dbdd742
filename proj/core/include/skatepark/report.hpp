#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skatepark/gqr.hpp"
#include "skatepark/protocol.hpp"

namespace skatepark {

inline constexpr int report_version = 1;

struct OutputMeta {
  std::string config_hash;  // hex
  std::uint64_t seed = 0;
};

// 17 significant digits.
std::string fmt17(double v);

std::string report_json(const PairedReport& r, const OutputMeta& meta);
// x_m, density_no_collapse[, density_with_collapse]
std::string pattern_csv(const PairedReport& r, const OutputMeta& meta);
std::string budget_json(const ProtocolConfig& cfg, const RunReport& off, const RunReport* on,
                        const OutputMeta& meta);
std::string trap_scan_csv(const std::vector<TrapScanRow>& rows, double radius, bool with_couplings,
                          const OutputMeta& meta);
std::string slit_sample_csv(const SlitSample& s, int bins, const OutputMeta& meta);
std::string gqr_csv(const std::vector<GqrRow>& rows, double density, const OutputMeta& meta);
std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows, const OutputMeta& meta);

}  // namespace skatepark
