#pragma once
// Run configuration read from TOML.

#include <filesystem>
#include <string>
#include <vector>

#include "beta_table.hpp"
#include "cp.hpp"
#include "materials.hpp"
#include "toml.hpp"

namespace curvecp {

enum class Task { Epsilon, Beta, Cp, Sphere, Stability, Validate };

Task task_from_string(const std::string& s);
const char* task_name(Task t);

struct RunConfig {
    Task task = Task::Validate;

    std::string medium_name = "vacuum", body_name = "Au";
    MaterialPair pair{builtin("vacuum"), builtin("Au")};
    double T = 300.0; // K; 0 selects the zero-temperature integral

    // particle
    bool ellipsoid = true;
    std::string particle_material_name; // empty: same as the body
    MaterialModel particle_material = builtin("Au");
    double volume = 1e-3; // um^3
    double n_z = 0.1;
    double alpha_perp_tilde = 2.0, alpha_3_tilde = 1.0; // generic particle, um^3

    // geometry
    std::vector<double> d_um;   // separations
    std::vector<double> c_grid; // curvature ratios for both principal directions (stability)
    double c1 = 0.0, c2 = 0.0;  // single geometry (cp)
    double theta = 0.0, phi = 0.0;

    std::vector<double> xi_eV; // epsilon task

    bool curvature = true; // beta task
    TableGrid grid;

    double R_um = 30.0, sphere_alpha = 1.0; // sphere task
    std::vector<double> d_over_R;

    double rel_tol = 1e-9, tie_tol = 1e-9, audit_tol = 1e-6;

    std::filesystem::path output_dir = "curvecp_out";
    std::string cache_dir; // empty: default
    bool allow_extrapolation = false;

    std::string canonical; // normalised config text
    std::string hash;      // fingerprint of `canonical`

    ThermalState thermal() const;
    ParticlePolarizability particle() const;
};

// Parses and validates. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text, bool allow_extrapolation = false);
RunConfig load_config(const std::filesystem::path& path, bool allow_extrapolation = false);

// Hash of a config text, as embedded in every artifact.
std::string config_hash(const std::string& text);

// Geometric grid including both end points.
std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> lin_grid(double lo, double hi, int points);

} // namespace curvecp
