#pragma once

#include "typomap/config.hpp"
#include "typomap/evalharness.hpp"

#include <map>
#include <string>

namespace typomap {

// Each stage reads its inputs from disk (original inputs or artifacts under
// cfg.out written by earlier stages) and writes its own artifacts, so any
// stage can restart from a previous run.
void stage_ingest(const PipelineConfig& cfg);
void stage_filter_geo(const PipelineConfig& cfg);
void stage_align(const PipelineConfig& cfg);
void stage_extract(const PipelineConfig& cfg);
void stage_ngram(const PipelineConfig& cfg);
void stage_map(const PipelineConfig& cfg);
void stage_krige(const PipelineConfig& cfg);
void stage_render(const PipelineConfig& cfg);
std::map<std::string, std::pair<PRF, PRF>> stage_eval(const PipelineConfig& cfg);

// All stages in order, plus the run manifest.
void run_pipeline(const PipelineConfig& cfg);

void write_manifest(const PipelineConfig& cfg);

// Replaces ngram_K placeholders by the gold label they most frequently
// carry (greedy, injective, deterministic); evaluation glue for comparing
// induced clusters with annotated gold.
PredictionMap map_placeholder_labels(const PredictionMap& pred, const GoldSample& gold);

} // namespace typomap
