// Copyright 2026 The Textmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textmap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "textmap/annotation.hpp"
#include "textmap/detector.hpp"
#include "textmap/error.hpp"
#include "textmap/evaluation.hpp"
#include "textmap/lexicon.hpp"
#include "textmap/ocr.hpp"
#include "textmap/parallel.hpp"
#include "textmap/png_io.hpp"
#include "textmap/raster.hpp"
#include "textmap/scoring.hpp"
#include "textmap/synth.hpp"

namespace textmap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a sibling temp file and renames, so readers never see a
/// partially written file.
void write_file_atomic(const fs::path& path, std::string_view bytes)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write '" + tmp.string() + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw Error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

/// Regular files in `dir` with the given extension, sorted by name.
std::vector<fs::path> list_files(const fs::path& dir, std::string_view extension)
{
    if (!fs::is_directory(dir))
        throw InputError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <typename Fn>
auto with_file_context(const fs::path& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

/// Collects the run record written next to every stage's outputs.
class Manifest {
public:
    explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    json& parameters() { return parameters_; }
    json& inputs() { return inputs_; }
    json& corpus() { return corpus_; }
    void add_output(const fs::path& p) { outputs_.push_back(p.generic_string()); }

    void write(const fs::path& path, unsigned jobs, double seconds)
    {
        std::sort(outputs_.begin(), outputs_.end());
        json doc = {{"tool", "textmap"},
                    {"version", kToolVersion},
                    {"subcommand", subcommand_},
                    {"parameters", parameters_},
                    {"inputs", inputs_},
                    {"outputs", outputs_},
                    {"corpus", corpus_},
                    {"runtime", {{"jobs", jobs}, {"wall_clock_seconds", seconds}}}};
        write_file_atomic(path, doc.dump(1) + "\n");
    }

private:
    std::string subcommand_;
    json parameters_ = json::object();
    json inputs_ = json::object();
    json corpus_ = json::object();
    std::vector<std::string> outputs_;
};

struct CommonOptions {
    unsigned jobs = 1;
    std::uint64_t seed = 42;
    std::string out;
    std::string manifest;
};

void add_common(CLI::App* cmd, CommonOptions& common, bool out_required, const std::string& out_help)
{
    cmd->add_option("--jobs", common.jobs, "Worker threads for document-parallel work")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    auto* out = cmd->add_option("--out", common.out, out_help);
    if (out_required)
        out->required();
    cmd->add_option("--manifest", common.manifest, "Manifest path (default: next to the outputs)");
}

fs::path manifest_path(const CommonOptions& common, bool out_is_dir)
{
    if (!common.manifest.empty())
        return common.manifest;
    if (out_is_dir)
        return fs::path(common.out) / "manifest.json";
    fs::path p = common.out;
    p += ".manifest.json";
    return p;
}

enum class OcrFormat { Canonical, Gcv };

OcrDocument parse_ocr_file(const fs::path& path, OcrFormat format)
{
    return with_file_context(path, [&] {
        const std::string bytes = read_file(path);
        return format == OcrFormat::Gcv ? parse_gcv_annotation(bytes, path.stem().string())
                                        : parse_canonical_ocr(bytes);
    });
}

std::vector<OcrDocument> load_ocr_dir(const fs::path& dir, OcrFormat format, unsigned jobs)
{
    const auto files = list_files(dir, ".json");
    auto docs = parallel_map(files.size(), jobs, [&](std::size_t i) { return parse_ocr_file(files[i], format); });
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!seen.emplace(docs[i].doc_id, i).second)
            throw InputError("duplicate doc_id '" + docs[i].doc_id + "' in " + dir.string());
    }
    return docs;
}

std::vector<OcrDocument> load_ocr_inputs(const fs::path& path, OcrFormat format, unsigned jobs)
{
    if (fs::is_directory(path))
        return load_ocr_dir(path, format, jobs);
    return {parse_ocr_file(path, format)};
}

const std::map<std::string, OcrFormat> kOcrFormats{{"canonical", OcrFormat::Canonical}, {"gcv", OcrFormat::Gcv}};

std::string format_name(OcrFormat f)
{
    return f == OcrFormat::Gcv ? "gcv" : "canonical";
}

std::map<std::string, AnnotationFile> load_annotation_dir(const fs::path& dir, unsigned jobs)
{
    const auto files = list_files(dir, ".json");
    auto parsed = parallel_map(files.size(), jobs, [&](std::size_t i) {
        return with_file_context(files[i], [&] { return parse_annotation(read_file(files[i])); });
    });
    std::map<std::string, AnnotationFile> out;
    for (auto& a : parsed) {
        const std::string id = a.doc_id;
        if (!out.emplace(id, std::move(a)).second)
            throw InputError("duplicate annotation for doc_id '" + id + "' in " + dir.string());
    }
    return out;
}

/// Map/tensor file names are `<doc_id>.<category><ext>`.
struct StemParts {
    std::string doc_id;
    Category category;
};

std::optional<StemParts> split_stem(const fs::path& file)
{
    const std::string stem = file.stem().string();
    const auto dot = stem.rfind('.');
    if (dot == std::string::npos)
        return std::nullopt;
    auto category = find_category(stem.substr(dot + 1));
    if (!category)
        return std::nullopt;
    return StemParts{stem.substr(0, dot), *category};
}

std::vector<Category> resolve_categories(const std::vector<std::string>& names)
{
    if (names.empty())
        return {kAllCategories.begin(), kAllCategories.end()};
    std::vector<Category> out;
    for (const auto& n : names) {
        const Category c = parse_category(n);
        if (std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

json category_names(const std::vector<Category>& cats)
{
    json out = json::array();
    for (auto c : cats)
        out.push_back(std::string(category_name(c)));
    return out;
}

struct StageResult {
    Manifest manifest;
    fs::path manifest_path;
};

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    CommonOptions common;
    std::size_t n = 1;
    std::size_t eval_split = 0;
    bool no_images = false;
    SynthConfig config;
};

StageResult run_synth(SynthArgs& a, std::ostream& out)
{
    a.config.seed = a.common.seed;
    if (a.eval_split > a.n)
        throw InputError("--eval-split (" + std::to_string(a.eval_split) + ") exceeds --n (" +
                         std::to_string(a.n) + ")");
    const auto corpus = generate_corpus(a.config, a.n, a.common.jobs);

    const fs::path root = a.common.out;
    const std::size_t train_count = a.n - a.eval_split;
    auto split_dir = [&](std::size_t i) -> fs::path {
        if (a.eval_split == 0)
            return root;
        return root / (i < train_count ? "train" : "eval");
    };

    auto written = parallel_map(corpus.size(), a.common.jobs, [&](std::size_t i) {
        const SynthDocument& d = corpus[i];
        const fs::path base = split_dir(i);
        const std::string& id = d.annotated.doc.doc_id;
        std::vector<fs::path> files{base / "ocr" / (id + ".json"), base / "annotations" / (id + ".json")};
        write_file_atomic(files[0], serialize_canonical_ocr(d.annotated.doc));
        write_file_atomic(files[1], serialize_annotation({id, d.annotated.regions}));
        if (!a.no_images) {
            files.push_back(base / "images" / (id + ".png"));
            write_file_atomic(files[2], encode_png(render_synthetic_image(d)));
        }
        return files;
    });

    StageResult result{Manifest("synth"), manifest_path(a.common, true)};
    const SynthConfig& c = a.config;
    result.manifest.parameters() = {
        {"n", a.n},
        {"eval_split", a.eval_split},
        {"images", !a.no_images},
        {"seed", c.seed},
        {"width", {c.width_min, c.width_max}},
        {"height", {c.height_min, c.height_max}},
        {"regions_per_category", {c.regions_per_category_min, c.regions_per_category_max}},
        {"words_per_region", {c.words_per_region_min, c.words_per_region_max}},
        {"word_height", {c.word_height_min, c.word_height_max}},
        {"ocr_typo_rate", c.ocr_typo_rate},
        {"distractor_word_rate", c.distractor_word_rate},
        {"vocab_overlap", c.vocab_overlap}};
    std::size_t regions = 0;
    std::size_t words = 0;
    for (const auto& d : corpus) {
        regions += d.annotated.regions.size();
        words += d.annotated.doc.words.size();
    }
    result.manifest.corpus() = {{"documents", corpus.size()},
                                {"train_documents", train_count},
                                {"eval_documents", a.eval_split},
                                {"regions", regions},
                                {"words", words}};
    for (const auto& files : written)
        for (const auto& f : files)
            result.manifest.add_output(fs::relative(f, root));
    out << "synth: wrote " << corpus.size() << " documents (" << regions << " regions, " << words
        << " words) to " << root.string() << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// build-stats

struct BuildStatsArgs {
    CommonOptions common;
    std::string ocr_dir;
    OcrFormat ocr_format = OcrFormat::Canonical;
    std::string annotation_dir;
    double alpha = LexiconStats::kDefaultAlpha;
    double fuzzy_floor = LexiconStats::kDefaultFuzzyFloor;
    std::vector<std::string> dictionaries; // category=path
};

StageResult run_build_stats(BuildStatsArgs& a, std::ostream& out)
{
    std::vector<OcrDocument> docs = load_ocr_dir(a.ocr_dir, a.ocr_format, a.common.jobs);
    std::map<std::string, AnnotationFile> annotations = load_annotation_dir(a.annotation_dir, a.common.jobs);

    std::vector<std::string> orphans;
    std::map<std::string, bool> paired;
    for (const auto& d : docs) {
        if (annotations.count(d.doc_id) == 0)
            orphans.push_back(d.doc_id + " (no annotation)");
        paired[d.doc_id] = true;
    }
    for (const auto& [id, ann] : annotations) {
        if (paired.count(id) == 0)
            orphans.push_back(id + " (no OCR document)");
    }
    if (!orphans.empty()) {
        std::string list;
        for (const auto& o : orphans)
            list += "\n  " + o;
        throw InputError("unmatched doc_id(s):" + list);
    }
    if (docs.empty())
        throw InputError("empty corpus: no OCR documents in '" + a.ocr_dir + "'");

    std::vector<AnnotatedDocument> corpus;
    corpus.reserve(docs.size());
    for (auto& d : docs) {
        const std::string id = d.doc_id;
        corpus.push_back(with_file_context(fs::path(a.annotation_dir) / (id + ".json"),
                                           [&] { return attach_annotation(std::move(d), annotations.at(id)); }));
    }

    LexiconStats stats = build_stats(corpus, {a.alpha, a.fuzzy_floor}, a.common.jobs);

    json dictionary_inputs = json::object();
    for (const auto& spec : a.dictionaries) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw InputError("--dictionary expects CATEGORY=PATH, got '" + spec + "'");
        const Category c = parse_category(spec.substr(0, eq));
        const fs::path path = spec.substr(eq + 1);
        std::istringstream lines(read_file(path));
        std::vector<std::string> words;
        for (std::string line; std::getline(lines, line);) {
            if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
                words.push_back(line);
        }
        add_dictionary_words(stats, c, words);
        dictionary_inputs[std::string(category_name(c))] = path.generic_string();
    }

    write_file_atomic(a.common.out, save_stats(stats));

    StageResult result{Manifest("build-stats"), manifest_path(a.common, false)};
    result.manifest.parameters() = {{"alpha", a.alpha},
                                    {"fuzzy_floor", a.fuzzy_floor},
                                    {"ocr_format", format_name(a.ocr_format)},
                                    {"seed", a.common.seed}};
    result.manifest.inputs() = {
        {"ocr", a.ocr_dir}, {"annotations", a.annotation_dir}, {"dictionaries", dictionary_inputs}};
    std::size_t regions = 0;
    std::size_t words = 0;
    for (const auto& d : corpus) {
        regions += d.regions.size();
        words += d.doc.words.size();
    }
    json dict_sizes = json::object();
    for (auto c : stats.categories)
        dict_sizes[std::string(category_name(c))] = stats.dictionaries[index_of(c)].size();
    result.manifest.corpus() = {{"documents", corpus.size()},
                                {"regions", regions},
                                {"words", words},
                                {"vocabulary", stats.words.size()},
                                {"dictionary_sizes", dict_sizes}};
    result.manifest.add_output(fs::path(a.common.out).filename());
    out << "build-stats: " << corpus.size() << " documents, " << stats.words.size() << " distinct words -> "
        << a.common.out << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// gen-textmap

struct GenTextmapArgs {
    CommonOptions common;
    std::string ocr;
    OcrFormat ocr_format = OcrFormat::Canonical;
    std::string stats;
    std::vector<std::string> categories;
    bool png = false;
    double min_ocr_confidence = 0.0;
    std::string triggers;
};

StageResult run_gen_textmap(GenTextmapArgs& a, std::ostream& out)
{
    const std::vector<Category> categories = resolve_categories(a.categories);
    const LexiconStats stats = with_file_context(a.stats, [&] { return load_stats(read_file(a.stats)); });
    for (auto c : categories) {
        if (!stats.has_category(c))
            throw InputError("stats file '" + a.stats + "' has no statistics for category '" +
                             std::string(category_name(c)) + "'");
    }
    ScoringOptions scoring;
    scoring.min_ocr_confidence = a.min_ocr_confidence;
    if (!(a.min_ocr_confidence >= 0.0 && a.min_ocr_confidence <= 1.0))
        throw InputError("--min-ocr-confidence must lie in [0, 1]");
    if (!a.triggers.empty())
        scoring.triggers = with_file_context(a.triggers, [&] { return parse_green_triggers(read_file(a.triggers)); });

    const std::vector<OcrDocument> docs = load_ocr_inputs(a.ocr, a.ocr_format, a.common.jobs);
    const fs::path root = a.common.out;
    auto written = parallel_map(docs.size(), a.common.jobs, [&](std::size_t i) {
        std::vector<fs::path> files;
        for (auto c : categories) {
            const TextMap map = render_textmap(docs[i], stats, c, scoring);
            const std::string stem = docs[i].doc_id + "." + std::string(category_name(c));
            files.push_back(root / (stem + ".tmap"));
            write_file_atomic(files.back(), write_textmap(map));
            if (a.png) {
                files.push_back(root / (stem + ".png"));
                write_file_atomic(files.back(), write_textmap_png(map));
            }
        }
        return files;
    });

    StageResult result{Manifest("gen-textmap"), manifest_path(a.common, true)};
    json triggers = json::object();
    for (auto c : kAllCategories)
        triggers[std::string(category_name(c))] = scoring.triggers.get(c);
    result.manifest.parameters() = {{"categories", category_names(categories)},
                                    {"png", a.png},
                                    {"ocr_format", format_name(a.ocr_format)},
                                    {"min_ocr_confidence", a.min_ocr_confidence},
                                    {"green_triggers", triggers},
                                    {"alpha", stats.alpha},
                                    {"fuzzy_floor", stats.fuzzy_floor},
                                    {"seed", a.common.seed}};
    result.manifest.inputs() = {{"ocr", a.ocr}, {"stats", a.stats}, {"triggers", a.triggers}};
    result.manifest.corpus() = {{"documents", docs.size()}};
    for (const auto& files : written)
        for (const auto& f : files)
            result.manifest.add_output(fs::relative(f, root));
    out << "gen-textmap: " << docs.size() << " documents x " << categories.size() << " categories -> "
        << root.string() << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// export-6ch

struct Export6Args {
    CommonOptions common;
    std::string maps;
    std::string images;
};

StageResult run_export_6ch(Export6Args& a, std::ostream& out)
{
    const auto map_files = list_files(a.maps, ".tmap");
    const fs::path root = a.common.out;
    auto written = parallel_map(map_files.size(), a.common.jobs, [&](std::size_t i) {
        const auto parts = split_stem(map_files[i]);
        if (!parts)
            throw InputError("cannot derive doc_id and category from '" + map_files[i].filename().string() + "'");
        const fs::path image_path = fs::path(a.images) / (parts->doc_id + ".png");
        if (!fs::exists(image_path))
            throw InputError("no image for '" + parts->doc_id + "' (expected " + image_path.string() + ")");
        const TextMap map = with_file_context(map_files[i], [&] { return read_textmap(read_file(map_files[i])); });
        const Image3 image = with_file_context(image_path, [&] { return decode_png<Image3>(read_file(image_path)); });
        const Tensor6 tensor = with_file_context(image_path, [&] { return compose_6ch(image, map); });
        const fs::path target = root / (map_files[i].stem().string() + ".t6");
        write_file_atomic(target, write_tensor6(tensor));
        return target;
    });

    StageResult result{Manifest("export-6ch"), manifest_path(a.common, true)};
    result.manifest.parameters() = {{"channel_order", {"image_r", "image_g", "image_b", "map_r", "map_g", "map_b"}},
                                    {"seed", a.common.seed}};
    result.manifest.inputs() = {{"maps", a.maps}, {"images", a.images}};
    result.manifest.corpus() = {{"tensors", written.size()}};
    for (const auto& f : written)
        result.manifest.add_output(fs::relative(f, root));
    out << "export-6ch: " << written.size() << " tensors -> " << root.string() << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
    CommonOptions common;
    std::string maps;
    std::vector<std::string> categories;
    DetectorParams params;
};

StageResult run_detect(DetectArgs& a, std::ostream& out)
{
    a.params.validate();
    const std::vector<Category> categories = resolve_categories(a.categories);
    std::vector<fs::path> files;
    for (const auto& f : list_files(a.maps, ".tmap")) {
        const auto parts = split_stem(f);
        if (!parts)
            throw InputError("cannot derive doc_id and category from '" + f.filename().string() + "'");
        if (std::find(categories.begin(), categories.end(), parts->category) != categories.end())
            files.push_back(f);
    }
    auto per_file = parallel_map(files.size(), a.common.jobs, [&](std::size_t i) {
        const auto parts = split_stem(files[i]);
        const TextMap map = with_file_context(files[i], [&] { return read_textmap(read_file(files[i])); });
        std::vector<DocumentDetection> dets;
        for (const auto& d : detect_regions(map, parts->category, a.params))
            dets.push_back({parts->doc_id, d});
        return dets;
    });
    std::vector<DocumentDetection> all;
    for (auto& v : per_file)
        all.insert(all.end(), v.begin(), v.end());
    write_file_atomic(a.common.out, write_detections(all));

    StageResult result{Manifest("detect"), manifest_path(a.common, false)};
    result.manifest.parameters() = {{"binarize_threshold", a.params.binarize_threshold},
                                    {"close_radius", a.params.close_radius},
                                    {"min_area", a.params.min_area},
                                    {"categories", category_names(categories)},
                                    {"seed", a.common.seed}};
    result.manifest.inputs() = {{"maps", a.maps}};
    result.manifest.corpus() = {{"maps", files.size()}, {"detections", all.size()}};
    result.manifest.add_output(fs::path(a.common.out).filename());
    out << "detect: " << all.size() << " detections over " << files.size() << " maps -> " << a.common.out << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// eval / overlay

struct EvalArgs {
    CommonOptions common;
    std::string detections;
    std::string annotations;
    std::vector<std::string> categories;
    EvalParams params;
    std::string overlay_dir;
    std::string images;
};

struct DocumentMatches {
    std::string doc_id;
    MatchResult match;
};

/// Matches the detections file against every annotated document.
std::vector<DocumentMatches> match_corpus(const EvalArgs& a, const std::vector<Category>& categories)
{
    const std::vector<DocumentDetection> detections =
        with_file_context(a.detections, [&] { return parse_detections(read_file(a.detections)); });
    const std::map<std::string, AnnotationFile> annotations = load_annotation_dir(a.annotations, a.common.jobs);

    std::map<std::string, std::vector<DetectionBox>> by_doc;
    std::vector<std::string> missing;
    for (const auto& d : detections) {
        if (annotations.count(d.doc_id) == 0) {
            if (std::find(missing.begin(), missing.end(), d.doc_id) == missing.end())
                missing.push_back(d.doc_id);
            continue;
        }
        if (std::find(categories.begin(), categories.end(), d.detection.category) != categories.end())
            by_doc[d.doc_id].push_back(d.detection);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing)
            list += "\n  " + m;
        throw InputError("missing annotations for detected document(s):" + list);
    }

    std::vector<DocumentMatches> out;
    for (const auto& [id, ann] : annotations) {
        std::vector<GroundTruthRegion> gts;
        for (const auto& r : ann.regions) {
            if (std::find(categories.begin(), categories.end(), r.category) != categories.end())
                gts.push_back(r);
        }
        const auto it = by_doc.find(id);
        const std::vector<DetectionBox> none;
        out.push_back({id, match_detections(it == by_doc.end() ? none : it->second, gts, a.params)});
    }
    return out;
}

std::vector<fs::path> write_overlays(const EvalArgs& a, const std::vector<DocumentMatches>& matches,
                                     const std::vector<Category>& categories, const fs::path& dir)
{
    if (a.images.empty())
        throw InputError("overlays need --images");
    auto per_doc = parallel_map(matches.size(), a.common.jobs, [&](std::size_t i) {
        const auto& m = matches[i];
        const fs::path image_path = fs::path(a.images) / (m.doc_id + ".png");
        if (!fs::exists(image_path))
            throw InputError("no image for '" + m.doc_id + "' (expected " + image_path.string() + ")");
        const Image3 image = with_file_context(image_path, [&] { return decode_png<Image3>(read_file(image_path)); });
        std::vector<fs::path> files;
        for (auto c : categories) {
            std::vector<LabeledBox> boxes;
            for (const auto& lb : m.match.labeled) {
                if (lb.category == c)
                    boxes.push_back(lb);
            }
            const fs::path target = dir / (m.doc_id + "." + std::string(category_name(c)) + ".png");
            write_file_atomic(target, encode_png(render_eval_overlay(image, boxes)));
            files.push_back(target);
        }
        return files;
    });
    std::vector<fs::path> out;
    for (auto& v : per_doc)
        out.insert(out.end(), v.begin(), v.end());
    return out;
}

json eval_parameters(const EvalArgs& a, const std::vector<Category>& categories)
{
    return {{"iou_threshold", a.params.iou_threshold},
            {"confidence_threshold", a.params.confidence_threshold},
            {"categories", category_names(categories)},
            {"seed", a.common.seed}};
}

StageResult run_eval(EvalArgs& a, std::ostream& out)
{
    a.params.validate();
    const std::vector<Category> categories = resolve_categories(a.categories);
    const auto matches = match_corpus(a, categories);

    CategoryCounts counts{};
    for (const auto& m : matches)
        for (auto c : kAllCategories)
            counts[index_of(c)] += m.match.counts[index_of(c)];
    const EvalReport report = compute_report(counts);
    write_file_atomic(a.common.out, write_report(report));

    StageResult result{Manifest("eval"), manifest_path(a.common, false)};
    result.manifest.add_output(fs::path(a.common.out).filename());
    if (!a.overlay_dir.empty()) {
        fs::path dir = fs::path(a.overlay_dir).lexically_normal();
        if (dir.filename().empty())
            dir = dir.parent_path();
        const fs::path dir_name = dir.filename();
        for (const auto& f : write_overlays(a, matches, categories, a.overlay_dir))
            result.manifest.add_output(dir_name / f.filename());
    }
    result.manifest.parameters() = eval_parameters(a, categories);
    result.manifest.inputs() = {{"detections", a.detections}, {"annotations", a.annotations}, {"images", a.images}};
    result.manifest.corpus() = {{"documents", matches.size()}};
    out << format_report_table(report);
    return result;
}

StageResult run_overlay(EvalArgs& a, std::ostream& out)
{
    a.params.validate();
    const std::vector<Category> categories = resolve_categories(a.categories);
    const auto matches = match_corpus(a, categories);
    const fs::path root = a.common.out;
    StageResult result{Manifest("overlay"), manifest_path(a.common, true)};
    for (const auto& f : write_overlays(a, matches, categories, root))
        result.manifest.add_output(fs::relative(f, root));
    result.manifest.parameters() = eval_parameters(a, categories);
    result.manifest.inputs() = {{"detections", a.detections}, {"annotations", a.annotations}, {"images", a.images}};
    result.manifest.corpus() = {{"documents", matches.size()}};
    out << "overlay: " << matches.size() << " documents -> " << root.string() << "\n";
    return result;
}

template <typename Args, typename Fn>
int execute(Args& args, Fn&& fn, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    StageResult result = fn(args, out);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.manifest.write(result.manifest_path, args.common.jobs, elapsed.count());
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Text-map toolchain: OCR words -> category relevance rasters -> detection and evaluation",
                 "textmap"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
    add_common(synth_cmd, synth.common, true, "Output directory");
    synth_cmd->add_option("--n", synth.n, "Number of documents")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    synth_cmd->add_option("--eval-split", synth.eval_split,
                          "Put the last N documents under eval/ and the rest under train/")
        ->capture_default_str();
    synth_cmd->add_flag("--no-images", synth.no_images, "Skip the background rasters");
    SynthConfig& sc = synth.config;
    synth_cmd->add_option("--width-min", sc.width_min)->capture_default_str();
    synth_cmd->add_option("--width-max", sc.width_max)->capture_default_str();
    synth_cmd->add_option("--height-min", sc.height_min)->capture_default_str();
    synth_cmd->add_option("--height-max", sc.height_max)->capture_default_str();
    synth_cmd->add_option("--regions-min", sc.regions_per_category_min, "Regions per category, lower bound")
        ->capture_default_str();
    synth_cmd->add_option("--regions-max", sc.regions_per_category_max, "Regions per category, upper bound")
        ->capture_default_str();
    synth_cmd->add_option("--words-min", sc.words_per_region_min)->capture_default_str();
    synth_cmd->add_option("--words-max", sc.words_per_region_max)->capture_default_str();
    synth_cmd->add_option("--word-height-min", sc.word_height_min)->capture_default_str();
    synth_cmd->add_option("--word-height-max", sc.word_height_max)->capture_default_str();
    synth_cmd->add_option("--typo-rate", sc.ocr_typo_rate)->capture_default_str();
    synth_cmd->add_option("--distractor-rate", sc.distractor_word_rate)->capture_default_str();
    synth_cmd->add_option("--vocab-overlap", sc.vocab_overlap)->capture_default_str();

    BuildStatsArgs build;
    auto* build_cmd = app.add_subcommand("build-stats", "Count word statistics over an annotated corpus");
    add_common(build_cmd, build.common, true, "Stats file to write");
    build_cmd->add_option("--ocr", build.ocr_dir, "Directory of canonical OCR files")->required();
    build_cmd->add_option("--ocr-format", build.ocr_format, "OCR file format")
        ->transform(CLI::CheckedTransformer(kOcrFormats, CLI::ignore_case))
        ->default_str("canonical");
    build_cmd->add_option("--annotations", build.annotation_dir, "Directory of annotation files")->required();
    build_cmd->add_option("--alpha", build.alpha, "Laplace smoothing constant")->capture_default_str();
    build_cmd->add_option("--fuzzy-floor", build.fuzzy_floor, "Minimum edit similarity for unseen words")
        ->capture_default_str();
    build_cmd->add_option("--dictionary", build.dictionaries,
                          "Extra dictionary words, CATEGORY=PATH (one word per line); repeatable");

    GenTextmapArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-textmap", "Render text-maps for OCR documents");
    add_common(gen_cmd, gen.common, true, "Output directory");
    gen_cmd->add_option("--ocr", gen.ocr, "Canonical OCR file or directory")->required();
    gen_cmd->add_option("--ocr-format", gen.ocr_format, "OCR file format")
        ->transform(CLI::CheckedTransformer(kOcrFormats, CLI::ignore_case))
        ->default_str("canonical");
    gen_cmd->add_option("--stats", gen.stats, "Stats file from build-stats")->required();
    gen_cmd->add_option("--category", gen.categories,
                        "Category to render (" + allowed_category_names() + "); repeatable, default all");
    gen_cmd->add_flag("--png", gen.png, "Also write PNG previews");
    gen_cmd->add_option("--min-ocr-confidence", gen.min_ocr_confidence)->capture_default_str();
    gen_cmd->add_option("--triggers", gen.triggers, "Green-channel trigger configuration (JSON)");

    Export6Args exp;
    auto* exp_cmd = app.add_subcommand("export-6ch", "Stack images and text-maps into 6-channel tensors");
    add_common(exp_cmd, exp.common, true, "Output directory");
    exp_cmd->add_option("--maps", exp.maps, "Directory of .tmap files")->required();
    exp_cmd->add_option("--images", exp.images, "Directory of <doc_id>.png images")->required();

    DetectArgs det;
    auto* det_cmd = app.add_subcommand("detect", "Run the baseline region detector over text-maps");
    add_common(det_cmd, det.common, true, "Detections file to write");
    det_cmd->add_option("--maps", det.maps, "Directory of .tmap files")->required();
    det_cmd->add_option("--category", det.categories, "Restrict to a category; repeatable");
    det_cmd->add_option("--threshold", det.params.binarize_threshold, "Foreground iff relevance > threshold")
        ->capture_default_str();
    det_cmd->add_option("--close-radius", det.params.close_radius)->capture_default_str();
    det_cmd->add_option("--min-area", det.params.min_area)->capture_default_str();

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score detections against ground truth");
    add_common(eval_cmd, eval.common, true, "Report file to write");
    EvalArgs overlay;
    auto* overlay_cmd = app.add_subcommand("overlay", "Draw TP/FP/FN boxes over the source images");
    add_common(overlay_cmd, overlay.common, true, "Output directory");
    for (auto [cmd, e] : {std::pair{eval_cmd, &eval}, std::pair{overlay_cmd, &overlay}}) {
        cmd->add_option("--detections", e->detections, "Detections file from detect")->required();
        cmd->add_option("--annotations", e->annotations, "Directory of annotation files")->required();
        cmd->add_option("--category", e->categories, "Restrict to a category; repeatable");
        cmd->add_option("--iou", e->params.iou_threshold, "IoU needed for a match")->capture_default_str();
        cmd->add_option("--confidence", e->params.confidence_threshold, "Prediction confidence gate")
            ->capture_default_str();
        cmd->add_option("--images", e->images, "Directory of <doc_id>.png images (for overlays)");
    }
    eval_cmd->add_option("--overlay-dir", eval.overlay_dir, "Also write overlays here");
    overlay_cmd->get_option("--images")->required();

    std::vector<std::string> argv_storage{"textmap"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "textmap: " << e.what() << "\n";
        if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            err << "run 'textmap " << sub->get_name() << " --help' for usage\n";
        else
            err << "run 'textmap --help' for usage\n";
        return kExitUsage;
    }

    try {
        if (synth_cmd->parsed())
            return execute(synth, run_synth, out);
        if (build_cmd->parsed())
            return execute(build, run_build_stats, out);
        if (gen_cmd->parsed())
            return execute(gen, run_gen_textmap, out);
        if (exp_cmd->parsed())
            return execute(exp, run_export_6ch, out);
        if (det_cmd->parsed())
            return execute(det, run_detect, out);
        if (eval_cmd->parsed())
            return execute(eval, run_eval, out);
        if (overlay_cmd->parsed())
            return execute(overlay, run_overlay, out);
    } catch (const InputError& e) {
        err << "textmap: error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "textmap: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace textmap
