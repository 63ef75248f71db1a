#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigbound/dynamics.hpp"
#include "wigbound/star.hpp"
#include "wigbound/wavefunction.hpp"
#include "wigbound/wigner.hpp"

namespace wigbound {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 15 significant digits, locale independent.
std::string format_double(double v);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string wavefunction_csv(const Wavefunction& psi, const std::vector<double>& x);
std::string field_csv(const WignerField& F);
std::string complex_field_csv(const ComplexField& F);
std::string spectrum_csv(const std::vector<double>& energies);
std::string trajectory_csv(const Trajectory& t);
std::string contours_csv(const std::vector<Trajectory>& contours);
std::string force_csv(const EffectiveForceField& f);
std::string report_csv(const BoundaryReport& r);

/// Reads `x,re_psi,im_psi` rows into a sampled confined state on `domain`.
Wavefunction read_wavefunction_csv(const std::filesystem::path& path, const Domain& domain);

}  // namespace wigbound
