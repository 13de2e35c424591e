#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fourier_ocp/fourier_basis.hpp"

namespace fourier_ocp {

// Text persistence, one block per surface:
//
//   fourier-surface v1
//   dims <1 + number of IC axes>
//   orders <M> <N_1> ... <N_d>
//   domain <T> <lo_1> <hi_1> ... <lo_d> <hi_d>
//   <basis_index> <m> <n_1> ... <n_d> <value>      (one line per stored entry)
//
// Values are written with 17 significant digits, which round-trips doubles
// exactly. A file may hold several blocks back to back; solver output stores
// the control surface first, then one surface per state component.

void write_surface(std::ostream& out, const FourierSurface& surface);
FourierSurface read_surface(std::istream& in);

void save_surfaces(const std::filesystem::path& path, const std::vector<FourierSurface>& surfaces);
std::vector<FourierSurface> load_surfaces(const std::filesystem::path& path);

}  // namespace fourier_ocp
