#pragma once

#include "typomap/semmap.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace typomap {

struct VariogramParams {
    double nugget = 0.0; // >= 0
    double psill = 1.0;  // > 0
    double range = 1.0;  // > 0
    int nlag = 1;        // single averaging bin; parameters are user-set
};

// Gaussian model with the practical-range convention:
// gamma(h) = nugget + psill * (1 - exp(-3 h^2 / range^2)); gamma(0) returns
// the nugget here, while the solver applies the exact-zero discontinuity.
double gaussian_variogram(double h, const VariogramParams& p);

struct GridSpec {
    int nx = 100;
    int ny = 100;
    double xmin = 0.0, xmax = 1.0;
    double ymin = 0.0, ymax = 1.0;

    double x_at(int i) const;
    double y_at(int j) const;
};

struct KrigingGrid {
    GridSpec spec;
    std::vector<double> z; // row-major, ny rows of nx
    // (z - min) / (max - min); all zeros when the field is flat up to
    // solver noise (spread <= 1e-8 relative)
    std::vector<double> z_norm;

    double at(int ix, int iy) const { return z[static_cast<std::size_t>(iy) * spec.nx + ix]; }
    double norm_at(int ix, int iy) const {
        return z_norm[static_cast<std::size_t>(iy) * spec.nx + ix];
    }
};

struct KrigeSample {
    double x = 0.0, y = 0.0, value = 0.0;
};

struct KrigingDiagnostics {
    double max_weight_deviation = 0.0; // max over nodes of |sum(w) - 1|
};

// Ordinary kriging over the grid: one LU factorization of the augmented
// semivariance system, one solve per node. Duplicate sample locations are
// value-averaged first. Throws when fewer than 2 distinct locations remain
// or any coordinate is non-finite.
KrigingGrid ordinary_krige(std::span<const KrigeSample> samples, const VariogramParams& p,
                           const GridSpec& grid, KrigingDiagnostics* diag = nullptr);

using Polyline = std::vector<std::array<double, 2>>;

struct ContourSet {
    std::string label;
    std::vector<double> levels;                  // sorted ascending
    std::vector<std::vector<Polyline>> polylines; // one bucket per level
};

// Marching squares over z_norm with linear edge interpolation; saddle cells
// disambiguated by the cell-center mean; segments joined into polylines
// where endpoints coincide within 1e-9.
ContourSet extract_contours(const KrigingGrid& grid, std::span<const double> levels);

struct LabelField {
    std::string label;
    KrigingGrid grid;
    ContourSet contours;
};

inline const std::vector<double>& default_contour_levels() {
    static const std::vector<double> levels{0.8, 0.85, 0.9, 0.95, 1.0};
    return levels;
}

// Per distinct label of `code` in the map: indicator kriging (1 where the
// language uses the label, else 0) followed by contour extraction. Labels
// with fewer than 2 positive samples are skipped with a warning. Defaults:
// psill = indicator variance (1 when flat), range = half the grid diagonal,
// nugget = 0, grid = 100x100 over the map's bounding box padded 5%.
std::vector<LabelField> krige_language(const SemanticMap& map, const std::string& code,
                                       const std::optional<VariogramParams>& params,
                                       const std::optional<GridSpec>& grid_spec,
                                       std::span<const double> levels);

GridSpec default_grid_for(const SemanticMap& map, int nx = 100, int ny = 100);

void write_grid_tsv(const std::filesystem::path& path, const KrigingGrid& grid);
void write_contours_tsv(const std::filesystem::path& path, const ContourSet& contours);
ContourSet load_contours_tsv(const std::filesystem::path& path);

} // namespace typomap
