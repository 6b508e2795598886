#pragma once

#include <iosfwd>
#include <string>

#include "metastab/ldp.hpp"
#include "metastab/spectral_field.hpp"

namespace metastab::io {

/// CSV with a `t` column followed by x0..x{n-1}; '#' lines are comments.
void write_path_csv(std::ostream& os, const EuclideanPath& path);
EuclideanPath read_path_csv(std::istream& is);

/// One JSON object per line: {"t":..,"d":..,"L":..,"N":..,"re":[..],"im":[..]}.
void write_field_jsonl(std::ostream& os, double t, const SpectralField& phi);
FieldPath read_field_path_jsonl(std::istream& is);

/// Grid values, one row per first-axis index (a single row in d = 1), with a
/// comment header carrying d, L, N, t.
void write_snapshot_csv(std::ostream& os, double t, const SpectralField& phi, int grid_points);

/// Trajectory summary line: time, spatial mean, L^2 norm, energy.
void write_summary_jsonl(std::ostream& os, double t, const SpectralField& phi, double energy);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace metastab::io
