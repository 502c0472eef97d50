#pragma once

#include <string>
#include <vector>

#include "uscg/siddon.hpp"

namespace uscg {

struct BenchConfig {
    int n = 256;
    int detectors = 101;
    double spacing = 0.05;
    Point3 source{-8, 0, 0};
    Point3 center{8, 0, 0};
    std::vector<int> p_values{10, 50, 100};  // view counts for the storage comparison
    int speed_views = 50;
    int sweeps = 5;
    double beta = 0.4;
    int threads = 1;  // applied symmetrically to both pipelines' precompute
};

struct BenchMemoryRow {
    int views = 0;
    std::size_t polar_cache_bytes = 0;
    std::size_t cartesian_stored_bytes = 0;
    double ratio = 0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchMemoryRow> memory;
    double polar_seconds = 0;            // cache build + sweeps
    double cartesian_otf_seconds = 0;    // sweeps with per-line Siddon
    double cartesian_stored_seconds = 0; // precompute + sweeps
    double speedup_vs_otf = 0;
    double speedup_vs_stored = 0;

    std::string to_text() const;
};

/// Run the storage and runtime comparison between the on-the-fly polar
/// pipeline and the Cartesian Siddon pipelines under identical scans.
BenchReport bench_compare(const BenchConfig& cfg);

}  // namespace uscg
