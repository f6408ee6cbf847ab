#pragma once

#include "rootb/barrier.hpp"
#include "rootb/embed_mc.hpp"
#include "rootb/measures.hpp"
#include "rootb/pde.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rootb::io {

/// Measure JSON: {"kind":"atomic","atoms":[[x,p],...]},
/// {"kind":"gaussian","mean":m,"variance":v},
/// {"kind":"lognormal","log_mean":m,"log_variance":v},
/// {"kind":"uniform","lo":a,"hi":b}, {"kind":"empirical","samples":[...]} .
std::string measure_to_json(const ProbabilityMeasure& m);
ProbabilityMeasure measure_from_json(const std::string& text);

/// Market CSV with header `strike,price`.
std::pair<std::vector<double>, std::vector<double>> read_market_csv(const std::string& path);

/// Barrier CSV with header `x,f`; "inf" marks never-contacted columns. On
/// read, "inf" maps to max(min_sentinel, 2x the largest finite value, 1);
/// pass the simulation horizon so those columns stay out of reach.
void write_barrier_csv(const std::string& path, const RootBarrier& b);
RootBarrier read_barrier_csv(const std::string& path, double min_sentinel = 0.0);

/// Solution CSV with header `t,x,u`, one row per written (t, x) node.
void write_solution_csv(const std::string& path, const PdeSolution& sol, int time_stride);

/// Metadata JSON for a solve: kind, domain, resolution, sigma description.
void write_meta_json(const std::string& path, const PdeSolution& sol, double cfl_ratio,
                     int solution_stride, const std::string& kernels_isa);

/// Embedding report JSON plus optional `tau,x` sample dump.
void write_report_json(const std::string& path, const EmbeddingReport& rep, double threshold);
void write_samples_csv(const std::string& path, const EmbeddingReport& rep);

/// Flat key-value config (`grid.n_x = 400`, `#` comments) or a JSON object
/// with nested sections; both flatten to dotted keys.
std::map<std::string, std::string> read_config(const std::string& path);

} // namespace rootb::io
