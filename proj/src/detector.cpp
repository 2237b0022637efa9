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

#include "textmap/detector.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "textmap/error.hpp"

namespace textmap {

void DetectorParams::validate() const
{
    if (binarize_threshold < 0 || binarize_threshold > 255)
        throw InputError("binarize_threshold must lie in [0, 255], got " + std::to_string(binarize_threshold));
    if (close_radius < 0)
        throw InputError("close_radius must be >= 0, got " + std::to_string(close_radius));
    if (min_area < 1)
        throw InputError("min_area must be >= 1, got " + std::to_string(min_area));
}

Plane8 relevance(const TextMap& map)
{
    return map.channel(0).max(map.channel(1)).max(map.channel(2));
}

Mask binarize(const Plane8& relevance, int threshold)
{
    return (relevance.cast<int>() > threshold).cast<std::uint8_t>();
}

namespace {

/// Sliding "any" over a window of +-radius along one axis, using prefix sums.
Mask dilate_rows(const Mask& in, int radius)
{
    const Eigen::Index rows = in.rows();
    const Eigen::Index cols = in.cols();
    Mask out(rows, cols);
    std::vector<int> prefix(static_cast<std::size_t>(cols) + 1);
    for (Eigen::Index y = 0; y < rows; ++y) {
        prefix[0] = 0;
        for (Eigen::Index x = 0; x < cols; ++x)
            prefix[static_cast<std::size_t>(x) + 1] = prefix[static_cast<std::size_t>(x)] + in(y, x);
        for (Eigen::Index x = 0; x < cols; ++x) {
            const Eigen::Index lo = std::max<Eigen::Index>(x - radius, 0);
            const Eigen::Index hi = std::min<Eigen::Index>(x + radius + 1, cols);
            out(y, x) = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)] > 0;
        }
    }
    return out;
}

} // namespace

Mask dilate(const Mask& mask, int radius)
{
    if (radius <= 0 || mask.size() == 0)
        return mask;
    const Mask horizontal = dilate_rows(mask, radius);
    const Mask transposed = horizontal.transpose();
    return dilate_rows(transposed, radius).transpose();
}

Mask erode(const Mask& mask, int radius)
{
    if (radius <= 0 || mask.size() == 0)
        return mask;
    const Mask complement = (mask == 0).cast<std::uint8_t>();
    return (dilate(complement, radius) == 0).cast<std::uint8_t>();
}

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

struct ComponentAccumulator {
    PixelBox box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), -1, -1};
    std::uint64_t relevance_sum = 0;
    std::uint64_t foreground = 0;
};

} // namespace

std::vector<DetectionBox> detect_regions(const TextMap& map, Category category, const DetectorParams& params)
{
    params.validate();
    const int width = map.width();
    const int height = map.height();
    if (width == 0 || height == 0)
        return {};

    const Plane8 rel = relevance(map);
    const Mask original = binarize(rel, params.binarize_threshold);
    const Mask closed = close(original, params.close_radius);

    const auto index = [width](int x, int y) { return static_cast<std::size_t>(y) * width + x; };
    DisjointSet sets(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!closed(y, x))
                continue;
            if (x > 0 && closed(y, x - 1))
                sets.unite(index(x, y), index(x - 1, y));
            if (y > 0 && closed(y - 1, x))
                sets.unite(index(x, y), index(x, y - 1));
        }
    }

    std::vector<std::size_t> root_slot(static_cast<std::size_t>(width) * height, SIZE_MAX);
    std::vector<ComponentAccumulator> components;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!closed(y, x))
                continue;
            const std::size_t root = sets.find(index(x, y));
            if (root_slot[root] == SIZE_MAX) {
                root_slot[root] = components.size();
                components.emplace_back();
            }
            ComponentAccumulator& acc = components[root_slot[root]];
            acc.box.x0 = std::min(acc.box.x0, x);
            acc.box.y0 = std::min(acc.box.y0, y);
            acc.box.x1 = std::max(acc.box.x1, x + 1);
            acc.box.y1 = std::max(acc.box.y1, y + 1);
            if (original(y, x)) {
                acc.relevance_sum += rel(y, x);
                ++acc.foreground;
            }
        }
    }

    std::vector<DetectionBox> out;
    for (const auto& acc : components) {
        if (acc.box.area() < params.min_area)
            continue;
        const double confidence =
            acc.foreground == 0 ? 0.0
                                : static_cast<double>(acc.relevance_sum) / (255.0 * static_cast<double>(acc.foreground));
        out.push_back({acc.box, confidence, category});
    }
    std::sort(out.begin(), out.end(), [](const DetectionBox& a, const DetectionBox& b) {
        if (a.confidence != b.confidence)
            return a.confidence > b.confidence;
        return reading_order_less(a.box, b.box);
    });
    return out;
}

std::string write_detections(std::span<const DocumentDetection> detections)
{
    using nlohmann::json;
    json out = json::array();
    for (const auto& d : detections) {
        const PixelBox& b = d.detection.box;
        out.push_back({{"doc_id", d.doc_id},
                       {"category", std::string(category_name(d.detection.category))},
                       {"bbox", {b.x0, b.y0, b.x1, b.y1}},
                       {"confidence", d.detection.confidence}});
    }
    return out.dump(1) + "\n";
}

std::vector<DocumentDetection> parse_detections(std::string_view bytes)
{
    using nlohmann::json;
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed detections file: ") + e.what(), e.byte);
    }
    if (!root.is_array())
        throw ValidationError("<root>", "expected an array of detections");

    std::vector<DocumentDetection> out;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const std::string path = "[" + std::to_string(i) + "]";
        const json& d = root[i];
        if (!d.is_object())
            throw ValidationError(path, "expected an object");
        DocumentDetection det;
        auto id = d.find("doc_id");
        if (id == d.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
            throw ValidationError(path + ".doc_id", "expected a non-empty string");
        det.doc_id = id->get<std::string>();
        auto cat = d.find("category");
        if (cat == d.end() || !cat->is_string() || !find_category(cat->get<std::string>()))
            throw ValidationError(path + ".category", "expected one of: " + allowed_category_names());
        det.detection.category = *find_category(cat->get<std::string>());
        auto bbox = d.find("bbox");
        if (bbox == d.end() || !bbox->is_array() || bbox->size() != 4 ||
            !std::all_of(bbox->begin(), bbox->end(), [](const json& v) { return v.is_number_integer(); }))
            throw ValidationError(path + ".bbox", "expected [x0, y0, x1, y1] integers");
        det.detection.box = {(*bbox)[0].get<int>(), (*bbox)[1].get<int>(), (*bbox)[2].get<int>(),
                             (*bbox)[3].get<int>()};
        if (!det.detection.box.valid())
            throw ValidationError(path + ".bbox", "degenerate, misordered or negative box");
        auto conf = d.find("confidence");
        if (conf == d.end() || !conf->is_number() || !(conf->get<double>() >= 0.0 && conf->get<double>() <= 1.0))
            throw ValidationError(path + ".confidence", "expected a number in [0, 1]");
        det.detection.confidence = conf->get<double>();
        out.push_back(std::move(det));
    }
    return out;
}

} // namespace textmap
