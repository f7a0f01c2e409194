#include "typomap/pipeline.hpp"

#include "typomap/aligner.hpp"
#include "typomap/error.hpp"
#include "typomap/geofilter.hpp"
#include "typomap/io.hpp"
#include "typomap/kriging.hpp"
#include "typomap/log.hpp"
#include "typomap/parallel.hpp"
#include "typomap/svg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace typomap {

namespace {

namespace fs = std::filesystem;

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    return out.empty() ? "_" : out;
}

std::vector<LanguageMeta> load_active_languages(const PipelineConfig& cfg) {
    const fs::path filtered = cfg.out / "languages.filtered.tsv";
    const fs::path ingested = cfg.out / "corpus" / "languages.tsv";
    if (fs::exists(filtered)) return load_language_metadata(filtered);
    if (fs::exists(ingested)) return load_language_metadata(ingested);
    throw Error("missing input: run ingest (and filter-geo) first; looked for " +
                filtered.string());
}

ParallelCorpus load_working_corpus(const PipelineConfig& cfg) {
    const std::vector<LanguageMeta> metas = load_active_languages(cfg);
    ParallelCorpus corpus = load_parallel_corpus(cfg.out / "corpus", cfg.source, metas);
    if (corpus.source.empty()) throw Error("source corpus is empty");
    return corpus;
}

std::vector<std::string> language_codes(const ParallelCorpus& corpus) {
    std::vector<std::string> codes;
    for (const auto& [code, target] : corpus.targets) codes.push_back(code);
    return codes;
}

std::map<std::string, VerseLinks> load_all_links(const PipelineConfig& cfg,
                                                 const ParallelCorpus& corpus) {
    std::map<std::string, VerseLinks> links;
    for (const auto& [code, target] : corpus.targets) {
        const fs::path verses_path = cfg.out / "align" / (code + ".verses");
        const fs::path pharaoh_path = cfg.out / "align" / (code + ".pharaoh");
        if (!fs::exists(verses_path) || !fs::exists(pharaoh_path))
            throw Error("missing input: alignment for '" + code + "'; run align first");
        std::vector<std::string> verse_ids;
        for (const std::string& line : io::split_lines(io::read_file(verses_path)))
            if (!line.empty()) verse_ids.push_back(line);
        std::map<std::string, int> src_len, tgt_len;
        for (const std::string& verse_id : verse_ids) {
            auto src = corpus.source.find(verse_id);
            auto tgt = target.verses.find(verse_id);
            if (src == corpus.source.end() || tgt == target.verses.end())
                throw Error("alignment for '" + code + "' references unknown verse " + verse_id);
            src_len[verse_id] = static_cast<int>(src->second.tokens.size());
            tgt_len[verse_id] = static_cast<int>(tgt->second.tokens.size());
        }
        links.emplace(code, import_pharaoh(pharaoh_path, verse_ids, src_len, tgt_len));
    }
    return links;
}

// labels.tsv / usage_points.tsv schema: point, verse_id, pivot_idx, then
// one label column per language
void write_labels_tsv(const fs::path& path, const std::vector<UsagePoint>& points,
                      const std::vector<std::string>& codes) {
    std::string out = "# point\tverse_id\tpivot_idx";
    for (const std::string& code : codes) out += "\t" + code;
    out += '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += std::to_string(i);
        out += '\t';
        out += points[i].verse_id;
        out += '\t';
        out += std::to_string(points[i].pivot_idx);
        for (const std::string& code : codes) {
            out += '\t';
            out += points[i].labels.at(code);
        }
        out += '\n';
    }
    io::write_file(path, out);
}

std::pair<std::vector<UsagePoint>, std::vector<std::string>> load_labels_tsv(const fs::path& path) {
    if (!fs::exists(path)) throw Error("missing input: " + path.string());
    const std::vector<std::string> lines = io::split_lines(io::read_file(path));
    if (lines.empty() || lines[0].empty() || lines[0][0] != '#')
        throw Error(path.string() + ": missing header");
    const std::vector<std::string> header = io::split(lines[0].substr(2), '\t');
    if (header.size() < 3) throw Error(path.string() + ": malformed header");
    std::vector<std::string> codes(header.begin() + 3, header.end());
    std::vector<UsagePoint> points;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].empty()) continue;
        const std::vector<std::string> cols = io::split(lines[k], '\t');
        if (cols.size() != header.size())
            throw Error(path.string() + ":" + std::to_string(k + 1) + ": wrong column count");
        UsagePoint up;
        up.verse_id = cols[1];
        up.pivot_idx = static_cast<int>(io::parse_int(cols[2]));
        for (std::size_t c = 0; c < codes.size(); ++c) up.labels.emplace(codes[c], cols[c + 3]);
        points.push_back(std::move(up));
    }
    return {std::move(points), std::move(codes)};
}

// pivot occurrence ordinal within its verse, for gold lookups
std::vector<int> occurrence_ordinals(const std::vector<UsagePoint>& points) {
    std::map<std::string, int> counter;
    std::vector<int> ordinals;
    ordinals.reserve(points.size());
    for (const UsagePoint& up : points) ordinals.push_back(counter[up.verse_id]++);
    return ordinals;
}

} // namespace

void stage_ingest(const PipelineConfig& cfg) {
    if (!fs::exists(cfg.metadata)) throw Error("missing input: metadata " + cfg.metadata.string());
    const std::vector<LanguageMeta> metas = load_language_metadata(cfg.metadata);
    if (!fs::exists(cfg.corpus_dir / (cfg.source + ".txt")))
        throw Error("missing input: source corpus " +
                    (cfg.corpus_dir / (cfg.source + ".txt")).string());
    const ParallelCorpus corpus = load_parallel_corpus(cfg.corpus_dir, cfg.source, metas);
    // normalized (tokenized) corpus snapshot; later stages read only this
    write_verse_file(cfg.out / "corpus" / (cfg.source + ".txt"), corpus.source);
    std::vector<LanguageMeta> kept;
    for (const LanguageMeta& m : metas) {
        if (m.code == cfg.source) continue;
        const TargetCorpus& target = corpus.targets.at(m.code);
        write_verse_file(cfg.out / "corpus" / (m.code + ".txt"), target.verses);
        kept.push_back(m);
    }
    write_language_metadata(cfg.out / "corpus" / "languages.tsv", kept);
    log::info("ingest: " + std::to_string(corpus.source.size()) + " source verses, " +
              std::to_string(kept.size()) + " target language(s)");
}

void stage_filter_geo(const PipelineConfig& cfg) {
    const fs::path ingested = cfg.out / "corpus" / "languages.tsv";
    if (!fs::exists(ingested)) throw Error("missing input: run ingest first");
    const std::vector<LanguageMeta> metas = load_language_metadata(ingested);
    std::vector<LanguageMeta> kept;
    if (cfg.region.empty()) {
        kept = metas;
        log::info("filter-geo: no region configured; keeping all languages");
    } else {
        if (!fs::exists(cfg.region)) throw Error("missing input: region " + cfg.region.string());
        const Region region = load_region(cfg.region);
        kept = filter_languages(metas, region);
        log::info("filter-geo: kept " + std::to_string(kept.size()) + " of " +
                  std::to_string(metas.size()) + " language(s)");
    }
    write_language_metadata(cfg.out / "languages.filtered.tsv", kept);
}

void stage_align(const PipelineConfig& cfg) {
    const ParallelCorpus corpus = load_working_corpus(cfg);
    const std::vector<std::string> codes = language_codes(corpus);
    parallel_for(codes.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& code = codes[i];
        const LexTable fwd = train_lex_table(corpus, code, Direction::SrcToTgt, cfg.em_iters);
        const LexTable rev = train_lex_table(corpus, code, Direction::TgtToSrc, cfg.em_iters);
        const VerseLinks links = align_corpus(corpus, code, fwd, rev, cfg.theta);
        const std::vector<std::string> verse_ids = intersect_verses(corpus, code);
        std::string verses_txt;
        for (const std::string& verse_id : verse_ids) verses_txt += verse_id + "\n";
        io::write_file(cfg.out / "align" / (code + ".verses"), verses_txt);
        export_pharaoh(cfg.out / "align" / (code + ".pharaoh"), verse_ids, links);
    });
    log::info("align: " + std::to_string(codes.size()) + " language pair(s) aligned");
}

void stage_extract(const PipelineConfig& cfg) {
    const ParallelCorpus corpus = load_working_corpus(cfg);
    const std::map<std::string, VerseLinks> links = load_all_links(cfg, corpus);
    const std::vector<UsagePoint> points =
        extract_usage_points(corpus, links, cfg.ngram.pivot);
    write_labels_tsv(cfg.out / "usage_points.tsv", points, language_codes(corpus));
    log::info("extract: " + std::to_string(points.size()) + " usage point(s)");
}

void stage_ngram(const PipelineConfig& cfg) {
    const ParallelCorpus corpus = load_working_corpus(cfg);
    const std::map<std::string, VerseLinks> links = load_all_links(cfg, corpus);
    auto [points, codes] = load_labels_tsv(cfg.out / "usage_points.tsv");
    if (cfg.deps.empty() || !fs::exists(cfg.deps))
        throw Error("missing input: deps (CoNLL-U) is required for the ngram stage");
    const DependencyDoc deps = load_conllu(cfg.deps);

    std::vector<LanguagePipelineResult> results(codes.size());
    parallel_for(codes.size(), cfg.jobs, [&](std::size_t i) {
        results[i] =
            run_ngram_pipeline(corpus, codes[i], links.at(codes[i]), deps, points, cfg.ngram);
    });

    // merge deterministically in language-code order
    for (std::size_t c = 0; c < codes.size(); ++c) {
        const LanguagePipelineResult& r = results[c];
        for (std::size_t p = 0; p < points.size(); ++p) points[p].labels[codes[c]] = r.labels[p];
        std::string report = "# label\tgram\tchi2\tp_value\tcooccurrence\n";
        for (const std::string& tok : r.lexified) {
            for (const AssociationScore& s : r.token_scores) {
                if (s.unit != tok) continue;
                report += "lexified\t" + tok + "\t" + io::format_double(s.chi2) + "\t" +
                          io::format_double(s.p_value) + "\t" + std::to_string(s.cooccurrence) +
                          "\n";
            }
        }
        for (const NgramCluster& cluster : r.clusters) {
            for (const std::string& member : cluster.members) {
                const AssociationScore* score = nullptr;
                for (const NgramCandidate& cand : r.selected)
                    if (cand.gram == member) {
                        score = &cand.score;
                        break;
                    }
                report += cluster.label + "\t" + member + "\t" +
                          (score ? io::format_double(score->chi2) : "0") + "\t" +
                          (score ? io::format_double(score->p_value) : "1") + "\t" +
                          (score ? std::to_string(score->cooccurrence) : "0") + "\n";
            }
        }
        io::write_file(cfg.out / "ngram" / (codes[c] + ".clusters.tsv"), report);
    }
    write_labels_tsv(cfg.out / "labels.tsv", points, codes);
    log::info("ngram: refined labels for " + std::to_string(codes.size()) + " language(s)");
}

void stage_map(const PipelineConfig& cfg) {
    auto [points, codes] = load_labels_tsv(cfg.out / "labels.tsv");
    if (points.size() < 3) throw Error("map: need at least 3 usage points");
    const SemanticMap map = build_semantic_map(std::move(points), std::move(codes));
    write_map_tsv(cfg.out / "map.tsv", map);
    log::info("map: embedded " + std::to_string(map.points.size()) + " point(s)");
}

namespace {

std::optional<VariogramParams> variogram_from_config(const PipelineConfig& cfg) {
    if (!cfg.krige_nugget && !cfg.krige_psill && !cfg.krige_range) return std::nullopt;
    VariogramParams vp;
    vp.nugget = cfg.krige_nugget.value_or(0.0);
    vp.psill = cfg.krige_psill.value_or(1.0);
    vp.range = cfg.krige_range.value_or(1.0);
    return vp;
}

} // namespace

void stage_krige(const PipelineConfig& cfg) {
    const SemanticMap map = load_map_tsv(cfg.out / "map.tsv");
    const GridSpec grid = default_grid_for(map, cfg.grid_nx, cfg.grid_ny);
    // per-label psill still defaults to the indicator variance unless the
    // config pins the full variogram
    const std::optional<VariogramParams> params = variogram_from_config(cfg);
    parallel_for(map.languages.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& code = map.languages[i];
        const std::vector<LabelField> fields =
            krige_language(map, code, params, grid, cfg.contour_levels);
        for (const LabelField& field : fields) {
            const fs::path dir = cfg.out / "krige" / code;
            write_grid_tsv(dir / (sanitize_label(field.label) + ".grid.tsv"), field.grid);
            write_contours_tsv(dir / (sanitize_label(field.label) + ".contours.tsv"),
                               field.contours);
        }
    });
    log::info("krige: interpolated " + std::to_string(map.languages.size()) + " language(s)");
}

void stage_render(const PipelineConfig& cfg) {
    const fs::path map_path = cfg.out / "map.tsv";
    if (!fs::exists(map_path)) throw Error("missing input: " + map_path.string() + "; run map first");
    const SemanticMap map = load_map_tsv(map_path);
    parallel_for(map.languages.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& code = map.languages[i];
        const fs::path dir = cfg.out / "krige" / code;
        if (!fs::exists(dir))
            throw Error("missing input: " + dir.string() + "; run krige first");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 13 && name.substr(name.size() - 13) == ".contours.tsv")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::vector<ContourSet> contours;
        for (const fs::path& p : files) contours.push_back(load_contours_tsv(p));
        io::write_file(cfg.out / "maps" / (code + ".svg"), render_svg(map, code, contours));
    });
    log::info("render: wrote " + std::to_string(map.languages.size()) + " SVG map(s)");
}

PredictionMap map_placeholder_labels(const PredictionMap& pred, const GoldSample& gold) {
    std::map<std::pair<std::string, int>, const std::string*> gold_by_item;
    for (const GoldItem& item : gold.items) gold_by_item[{item.verse_id, item.occurrence}] = &item.label;
    // count (placeholder, gold label) pairs
    std::map<std::pair<std::string, std::string>, std::int64_t> pair_count;
    for (const auto& [key, label] : pred) {
        if (label.rfind("ngram_", 0) != 0) continue;
        auto g = gold_by_item.find(key);
        if (g == gold_by_item.end()) continue;
        const std::string& gl = *g->second;
        if (gl == kGoldNullOk || gl == kGoldNullBad) continue;
        ++pair_count[{label, gl}];
    }
    std::vector<std::pair<std::pair<std::string, std::string>, std::int64_t>> ranked(
        pair_count.begin(), pair_count.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    std::map<std::string, std::string> assignment;
    std::set<std::string> used_gold;
    for (const auto& [pair, count] : ranked) {
        if (assignment.count(pair.first) || used_gold.count(pair.second)) continue;
        assignment.emplace(pair.first, pair.second);
        used_gold.insert(pair.second);
    }
    PredictionMap out;
    for (const auto& [key, label] : pred) {
        auto it = assignment.find(label);
        out.emplace(key, it == assignment.end() ? label : it->second);
    }
    return out;
}

std::map<std::string, std::pair<PRF, PRF>> stage_eval(const PipelineConfig& cfg) {
    if (cfg.gold_dir.empty()) throw Error("missing input: gold_dir is not configured");
    auto [raw_points, raw_codes] = load_labels_tsv(cfg.out / "usage_points.tsv");
    auto [ref_points, ref_codes] = load_labels_tsv(cfg.out / "labels.tsv");
    const std::vector<int> raw_ord = occurrence_ordinals(raw_points);
    const std::vector<int> ref_ord = occurrence_ordinals(ref_points);

    std::map<std::string, std::pair<PRF, PRF>> all;
    std::string summary;
    for (const std::string& code : ref_codes) {
        const fs::path align_gold = cfg.gold_dir / (code + ".gold_align.tsv");
        const fs::path refined_gold = cfg.gold_dir / (code + ".gold_refined.tsv");
        if (!fs::exists(align_gold) && !fs::exists(refined_gold)) continue;
        std::pair<PRF, PRF> scores;
        std::string report;
        if (fs::exists(align_gold)) {
            PredictionMap pred;
            for (std::size_t i = 0; i < raw_points.size(); ++i)
                pred[{raw_points[i].verse_id, raw_ord[i]}] = raw_points[i].labels.at(code);
            scores.first = score_alignment(pred, load_gold(align_gold));
            report += "[alignment]\n" + format_prf_report(scores.first);
        }
        if (fs::exists(refined_gold)) {
            PredictionMap pred;
            for (std::size_t i = 0; i < ref_points.size(); ++i)
                pred[{ref_points[i].verse_id, ref_ord[i]}] = ref_points[i].labels.at(code);
            const GoldSample gold = load_gold(refined_gold);
            scores.second = score_alignment(map_placeholder_labels(pred, gold), gold);
            report += "[refined]\n" + format_prf_report(scores.second);
        }
        io::write_file(cfg.out / "eval" / (code + ".txt"), report);
        summary += code + "\talignment P=" + io::format_double(round_reported(scores.first.precision)) +
                   " R=" + io::format_double(round_reported(scores.first.recall)) +
                   " F1=" + io::format_double(round_reported(scores.first.f1)) +
                   "\trefined P=" + io::format_double(round_reported(scores.second.precision)) +
                   " R=" + io::format_double(round_reported(scores.second.recall)) +
                   " F1=" + io::format_double(round_reported(scores.second.f1)) + "\n";
        all.emplace(code, scores);
    }
    if (all.empty()) throw Error("eval: no gold files found under " + cfg.gold_dir.string());
    io::write_file(cfg.out / "eval" / "summary.tsv", summary);
    return all;
}

void write_manifest(const PipelineConfig& cfg) {
    // describes parameters and inputs, not the destination: out and jobs
    // stay out so reruns are comparable
    std::string out = "# typomap run manifest\n";
    for (const auto& [key, value] : config_snapshot(cfg)) out += "config." + key + "=" + value + "\n";
    std::vector<fs::path> inputs;
    if (!cfg.metadata.empty() && fs::exists(cfg.metadata)) inputs.push_back(cfg.metadata);
    if (!cfg.region.empty() && fs::exists(cfg.region)) inputs.push_back(cfg.region);
    if (!cfg.deps.empty() && fs::exists(cfg.deps)) inputs.push_back(cfg.deps);
    if (fs::exists(cfg.corpus_dir)) {
        for (const auto& entry : fs::directory_iterator(cfg.corpus_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    char buf[32];
    for (const fs::path& p : inputs) {
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(io::fnv1a64(io::read_file(p))));
        out += "input." + p.string() + "=fnv1a64:" + buf + "\n";
    }
    io::write_file(cfg.out / "manifest.txt", out);
}

void run_pipeline(const PipelineConfig& cfg) {
    write_manifest(cfg);
    stage_ingest(cfg);
    stage_filter_geo(cfg);
    stage_align(cfg);
    stage_extract(cfg);
    stage_ngram(cfg);
    stage_map(cfg);
    stage_krige(cfg);
    stage_render(cfg);
    if (!cfg.gold_dir.empty()) stage_eval(cfg);
    log::info("pipeline: complete; artifacts under " + cfg.out.string());
}

} // namespace typomap
