#pragma once

#include "typomap/ngrampipe.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace typomap {

// Flat key=value configuration; every numeric default matches the module
// documentation, and any value can be overridden per run.
struct PipelineConfig {
    std::filesystem::path corpus_dir = "corpus";
    std::string source = "eng";
    std::filesystem::path metadata = "languages.tsv";
    std::filesystem::path region;   // empty = no geographic filtering
    std::filesystem::path deps;     // CoNLL-U over the source tokenization
    std::filesystem::path gold_dir; // optional gold files for eval
    std::filesystem::path out = "out";

    NgramParams ngram;

    int em_iters = 10;
    double theta = 1e-4;

    std::optional<double> krige_nugget; // unset -> 0
    std::optional<double> krige_psill;  // unset -> indicator variance
    std::optional<double> krige_range;  // unset -> half the grid diagonal
    int grid_nx = 100;
    int grid_ny = 100;
    std::vector<double> contour_levels = {0.8, 0.85, 0.9, 0.95, 1.0};

    unsigned jobs = 0; // 0 = available parallelism; TYPOMAP_JOBS fallback
};

PipelineConfig load_config(const std::filesystem::path& path);

// key=value override, same keys as the config file. Throws Error naming the
// field on an invalid value.
void apply_override(PipelineConfig& cfg, const std::string& key, const std::string& value);

// Sorted key=value snapshot of everything that affects artifact content
// (excludes out and jobs).
std::vector<std::pair<std::string, std::string>> config_snapshot(const PipelineConfig& cfg);

} // namespace typomap
