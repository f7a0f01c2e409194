// typomap: induce probabilistic semantic maps of a pivot concept from
// verse-aligned parallel corpora, with character n-gram morpheme discovery
// and per-language kriging contours.

#include "typomap/config.hpp"
#include "typomap/error.hpp"
#include "typomap/log.hpp"
#include "typomap/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

typomap::PipelineConfig make_config(const std::string& config_path,
                                    const std::vector<std::string>& overrides) {
    typomap::PipelineConfig cfg;
    if (!config_path.empty()) cfg = typomap::load_config(config_path);
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw typomap::Error("override '" + kv + "' is not key=value");
        typomap::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic maps of a pivot concept from parallel corpora"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("-c,--config", config_path, "config file (key=value lines)");
    app.add_option("-s,--set", overrides, "override a config key (key=value, repeatable)");
    app.add_flag("-q,--quiet", quiet, "suppress informational logging");

    struct Sub {
        const char* name;
        const char* help;
        void (*run)(const typomap::PipelineConfig&);
    };
    const Sub subs[] = {
        {"ingest", "tokenize and snapshot the corpus", &typomap::stage_ingest},
        {"filter-geo", "restrict languages to the configured region", &typomap::stage_filter_geo},
        {"align", "train the EM aligner and export alignments", &typomap::stage_align},
        {"extract", "extract pivot usage points with raw labels", &typomap::stage_extract},
        {"ngram", "run the n-gram refinement and relabel points", &typomap::stage_ngram},
        {"map", "build the Hamming matrix and the MDS embedding", &typomap::stage_map},
        {"krige", "interpolate per-label intensity grids and contours", &typomap::stage_krige},
        {"render", "render per-language SVG maps", &typomap::stage_render},
    };
    for (const Sub& sub : subs) app.add_subcommand(sub.name, sub.help);
    app.add_subcommand("eval", "score against gold samples");
    app.add_subcommand("pipeline", "run all stages in order");

    CLI11_PARSE(app, argc, argv);
    if (quiet) typomap::log::set_level(typomap::log::Level::Warn);

    try {
        const typomap::PipelineConfig cfg = make_config(config_path, overrides);
        const std::string chosen = app.get_subcommands().front()->get_name();
        if (chosen == "pipeline") {
            typomap::run_pipeline(cfg);
        } else if (chosen == "eval") {
            for (const auto& [code, scores] : typomap::stage_eval(cfg)) {
                std::cout << code << " alignment: P=" << typomap::round_reported(scores.first.precision)
                          << " R=" << typomap::round_reported(scores.first.recall)
                          << " F1=" << typomap::round_reported(scores.first.f1)
                          << " | refined: P=" << typomap::round_reported(scores.second.precision)
                          << " R=" << typomap::round_reported(scores.second.recall)
                          << " F1=" << typomap::round_reported(scores.second.f1) << "\n";
            }
        } else {
            bool ran = false;
            for (const Sub& sub : subs) {
                if (chosen == sub.name) {
                    typomap::write_manifest(cfg);
                    sub.run(cfg);
                    ran = true;
                    break;
                }
            }
            if (!ran) throw typomap::Error("unknown subcommand " + chosen);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
