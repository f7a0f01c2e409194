#include "typomap/config.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"

#include <algorithm>
#include <cstdlib>

namespace typomap {

namespace {

double positive_double(const std::string& key, const std::string& value) {
    double v;
    try {
        v = io::parse_double(value);
    } catch (const Error&) {
        throw Error("config field '" + key + "': not a number: " + value);
    }
    if (v <= 0.0) throw Error("config field '" + key + "': must be > 0");
    return v;
}

int int_in_range(const std::string& key, const std::string& value, int lo, int hi) {
    std::int64_t v;
    try {
        v = io::parse_int(value);
    } catch (const Error&) {
        throw Error("config field '" + key + "': not an integer: " + value);
    }
    if (v < lo || v > hi)
        throw Error("config field '" + key + "': out of range [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
    return static_cast<int>(v);
}

} // namespace

void apply_override(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "corpus_dir") cfg.corpus_dir = value;
    else if (key == "source") cfg.source = value;
    else if (key == "metadata") cfg.metadata = value;
    else if (key == "region") cfg.region = value;
    else if (key == "deps") cfg.deps = value;
    else if (key == "gold_dir") cfg.gold_dir = value;
    else if (key == "out") cfg.out = value;
    else if (key == "pivot") {
        if (value.empty()) throw Error("config field 'pivot': empty");
        cfg.ngram.pivot = value;
    } else if (key == "stopwords") {
        cfg.ngram.stopwords = StopwordList::from_words(io::split(value, ','));
    } else if (key == "epsilon") {
        cfg.ngram.epsilon = positive_double(key, value);
        if (cfg.ngram.epsilon >= 1.0) throw Error("config field 'epsilon': must be < 1");
    } else if (key == "ngram_min") {
        cfg.ngram.ngram_min = int_in_range(key, value, 1, 32);
    } else if (key == "ngram_max") {
        cfg.ngram.ngram_max = int_in_range(key, value, 1, 32);
    } else if (key == "top_chi2") {
        cfg.ngram.top_by_chi2 = int_in_range(key, value, 1, 1000000);
    } else if (key == "top_cooc") {
        cfg.ngram.top_by_cooccurrence = int_in_range(key, value, 1, 1000000);
    } else if (key == "dbscan_eps") {
        cfg.ngram.dbscan_eps = positive_double(key, value);
    } else if (key == "dbscan_min_pts") {
        cfg.ngram.dbscan_min_pts = int_in_range(key, value, 1, 1000);
    } else if (key == "feat_min") {
        cfg.ngram.feat_min = int_in_range(key, value, 1, 8);
    } else if (key == "feat_max") {
        cfg.ngram.feat_max = int_in_range(key, value, 1, 8);
    } else if (key == "em_iters") {
        cfg.em_iters = int_in_range(key, value, 1, 10000);
    } else if (key == "theta") {
        cfg.theta = positive_double(key, value);
    } else if (key == "krige_nugget") {
        if (value == "auto") cfg.krige_nugget.reset();
        else {
            double v;
            try {
                v = io::parse_double(value);
            } catch (const Error&) {
                throw Error("config field 'krige_nugget': not a number: " + value);
            }
            if (v < 0.0) throw Error("config field 'krige_nugget': must be >= 0");
            cfg.krige_nugget = v;
        }
    } else if (key == "krige_psill") {
        if (value == "auto") cfg.krige_psill.reset();
        else cfg.krige_psill = positive_double(key, value);
    } else if (key == "krige_range") {
        if (value == "auto") cfg.krige_range.reset();
        else cfg.krige_range = positive_double(key, value);
    } else if (key == "grid_nx") {
        cfg.grid_nx = int_in_range(key, value, 2, 4096);
    } else if (key == "grid_ny") {
        cfg.grid_ny = int_in_range(key, value, 2, 4096);
    } else if (key == "contour_levels") {
        std::vector<double> levels;
        for (const std::string& part : io::split(value, ',')) {
            double v;
            try {
                v = io::parse_double(part);
            } catch (const Error&) {
                throw Error("config field 'contour_levels': not a number: " + part);
            }
            if (v < 0.0 || v > 1.0)
                throw Error("config field 'contour_levels': level outside [0, 1]");
            levels.push_back(v);
        }
        if (levels.empty()) throw Error("config field 'contour_levels': empty");
        std::sort(levels.begin(), levels.end());
        cfg.contour_levels = levels;
    } else if (key == "jobs") {
        cfg.jobs = static_cast<unsigned>(int_in_range(key, value, 0, 4096));
    } else {
        throw Error("unknown config key '" + key + "'");
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    PipelineConfig cfg;
    std::size_t lineno = 0;
    for (const std::string& line : io::split_lines(io::read_file(path))) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        apply_override(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    // relative paths resolve against the config file's directory
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    auto resolve = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    resolve(cfg.corpus_dir);
    resolve(cfg.metadata);
    resolve(cfg.region);
    resolve(cfg.deps);
    resolve(cfg.gold_dir);
    resolve(cfg.out);
    if (cfg.ngram.ngram_min > cfg.ngram.ngram_max)
        throw Error("config field 'ngram_min': exceeds ngram_max");
    if (cfg.ngram.feat_min > cfg.ngram.feat_max)
        throw Error("config field 'feat_min': exceeds feat_max");
    if (const char* env = std::getenv("TYPOMAP_JOBS"); env && cfg.jobs == 0) {
        try {
            cfg.jobs = static_cast<unsigned>(io::parse_int(env));
        } catch (const Error&) {
            throw Error("TYPOMAP_JOBS: not an integer");
        }
    }
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_snapshot(const PipelineConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("corpus_dir", cfg.corpus_dir.string());
    kv.emplace_back("source", cfg.source);
    kv.emplace_back("metadata", cfg.metadata.string());
    kv.emplace_back("region", cfg.region.string());
    kv.emplace_back("deps", cfg.deps.string());
    kv.emplace_back("gold_dir", cfg.gold_dir.string());
    kv.emplace_back("pivot", cfg.ngram.pivot);
    kv.emplace_back("stopwords", io::join({cfg.ngram.stopwords.words.begin(),
                                           cfg.ngram.stopwords.words.end()},
                                          ","));
    kv.emplace_back("epsilon", io::format_double(cfg.ngram.epsilon));
    kv.emplace_back("ngram_min", std::to_string(cfg.ngram.ngram_min));
    kv.emplace_back("ngram_max", std::to_string(cfg.ngram.ngram_max));
    kv.emplace_back("top_chi2", std::to_string(cfg.ngram.top_by_chi2));
    kv.emplace_back("top_cooc", std::to_string(cfg.ngram.top_by_cooccurrence));
    kv.emplace_back("dbscan_eps", io::format_double(cfg.ngram.dbscan_eps));
    kv.emplace_back("dbscan_min_pts", std::to_string(cfg.ngram.dbscan_min_pts));
    kv.emplace_back("feat_min", std::to_string(cfg.ngram.feat_min));
    kv.emplace_back("feat_max", std::to_string(cfg.ngram.feat_max));
    kv.emplace_back("em_iters", std::to_string(cfg.em_iters));
    kv.emplace_back("theta", io::format_double(cfg.theta));
    kv.emplace_back("krige_nugget",
                    cfg.krige_nugget ? io::format_double(*cfg.krige_nugget) : "auto");
    kv.emplace_back("krige_psill", cfg.krige_psill ? io::format_double(*cfg.krige_psill) : "auto");
    kv.emplace_back("krige_range", cfg.krige_range ? io::format_double(*cfg.krige_range) : "auto");
    kv.emplace_back("grid_nx", std::to_string(cfg.grid_nx));
    kv.emplace_back("grid_ny", std::to_string(cfg.grid_ny));
    std::vector<std::string> levels;
    for (double v : cfg.contour_levels) levels.push_back(io::format_double(v));
    kv.emplace_back("contour_levels", io::join(levels, ","));
    std::sort(kv.begin(), kv.end());
    return kv;
}

} // namespace typomap
