#pragma once

#include "typomap/aligner.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace typomap {

// Symmetric nonnegative dissimilarities with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

// d[i][j] = number of languages labeling points i and j differently;
// NOMATCH is an ordinary label value.
DistanceMatrix hamming_matrix(const std::vector<UsagePoint>& points,
                              const std::vector<std::string>& languages);

struct MdsResult {
    std::vector<std::array<double, 2>> coords;
    std::array<double, 2> eigenvalues = {0.0, 0.0};
    bool degenerate_second_axis = false; // second eigenvalue <= 0, y forced 0
};

// Torgerson double centering + two deflated power-iteration eigenpairs
// (tolerance 1e-10, <= 10000 iterations). Axes ordered by descending
// eigenvalue; each axis is oriented so its largest-magnitude coordinate is
// positive. Throws for n < 3.
MdsResult classical_mds(const DistanceMatrix& d);

// Kruskal stress-1 of a configuration against target distances.
double kruskal_stress1(const DistanceMatrix& d,
                       const std::vector<std::array<double, 2>>& coords);

struct SemanticMap {
    std::vector<std::string> languages;          // column order for labels
    std::vector<UsagePoint> points;              // labels per language
    std::vector<std::array<double, 2>> coords;   // one (x, y) per point
};

SemanticMap build_semantic_map(std::vector<UsagePoint> points,
                               std::vector<std::string> languages);

// TSV: usage_point_id, verse_id, pivot_idx, x, y, then one label column per
// language.
void write_map_tsv(const std::filesystem::path& path, const SemanticMap& map);
SemanticMap load_map_tsv(const std::filesystem::path& path);

} // namespace typomap
