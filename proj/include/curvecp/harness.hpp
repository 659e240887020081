#pragma once
// Task runner behind the command-line tool.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace curvecp {

struct RunOptions {
    int jobs = 1;
    std::filesystem::path cache_dir;
    std::ostream* log = nullptr;
};

// Exit status: 0 ok, 3 numerical failure (partial output flushed), 4 failed acceptance.
int run_task(const RunConfig& cfg, const RunOptions& opt);

// Stability grid over (d, c1, c2); axis codes follow `Axis`, -1 marks a failed cell.
struct StabilityGrid {
    std::vector<double> d, c;
    std::vector<int> code; // index (i_d * c.size() + i_c1) * c.size() + i_c2
    std::vector<double> U_z, U_x, U_y;
    std::vector<std::string> failure; // per d, empty when fine

    int at(std::size_t id, std::size_t i1, std::size_t i2) const { return code[(id * c.size() + i1) * c.size() + i2]; }
};

StabilityGrid stability_scan(const RunConfig& cfg, const RunOptions& opt);

// Cells violating the x <-> y replacement symmetry (c1, c2) -> (c2, c1).
int mirror_violations(const StabilityGrid& g);

} // namespace curvecp
