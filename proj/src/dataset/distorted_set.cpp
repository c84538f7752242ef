#include "robulink/dataset/distorted_set.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "robulink/imgcore/image_io.hpp"
#include "robulink/rng.hpp"

namespace robulink {

using nlohmann::json;

std::uint64_t record_seed(std::uint64_t run_seed, const std::string& sample_id) {
    return derive_key({run_seed, fnv1a64(sample_id)});
}

std::string record_image_path(const std::string& sample_id, int dimension, Strength strength) {
    const auto& info = dimension_info(dimension);
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%02d", dimension);
    return "images/" + sample_id + "/" + prefix + "-" + std::string(info.slug) + "_" +
           std::string(to_string(strength)) + ".png";
}

std::vector<DistortedRecord> plan_distorted_set(const std::vector<Sample>& samples, const std::vector<int>& dims,
                                                const std::vector<Strength>& strengths, std::uint64_t seed,
                                                StrengthPlan plan) {
    if (strengths.empty()) {
        throw std::invalid_argument("distorted set: no strengths requested");
    }
    for (int d : dims) {
        dimension_info(d);
    }
    std::vector<DistortedRecord> out;
    const std::size_t per_cell = plan == StrengthPlan::Full ? strengths.size() : 1;
    out.reserve(samples.size() * dims.size() * per_cell);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::uint64_t s = record_seed(seed, samples[i].id);
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const auto make = [&](Strength st) {
                out.push_back({samples[i].id, dims[j], st, s, record_image_path(samples[i].id, dims[j], st),
                               dimension_info(dims[j]).synthetic_wild});
            };
            if (plan == StrengthPlan::Full) {
                for (Strength st : strengths) {
                    make(st);
                }
            } else {
                make(strengths[(i * dims.size() + j) % strengths.size()]);
            }
        }
    }
    return out;
}

DistortedSet build_distorted_set(const std::vector<Sample>& samples, const std::vector<int>& dims,
                                 const std::vector<Strength>& strengths, std::uint64_t seed,
                                 const std::filesystem::path& out_dir, const BuildOptions& options,
                                 const CodecRegistry& codecs) {
    const std::vector<DistortedRecord> plan = plan_distorted_set(samples, dims, strengths, seed, options.plan);

    // Group record indices by sample so each reference is decoded once.
    std::map<std::string, const Sample*> by_id;
    for (const auto& s : samples) {
        by_id[s.id] = &s;
    }
    std::vector<std::pair<std::size_t, std::size_t>> spans;  // [begin, end) into plan
    for (std::size_t i = 0; i < plan.size();) {
        std::size_t j = i;
        while (j < plan.size() && plan[j].sample_id == plan[i].sample_id) {
            ++j;
        }
        spans.emplace_back(i, j);
        i = j;
    }

    std::vector<char> ok(plan.size(), 0);
    std::vector<std::string> errors(plan.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < spans.size(); k = next++) {
            const auto [begin, end] = spans[k];
            const Sample& sample = *by_id.at(plan[begin].sample_id);
            ImageBuffer reference;
            try {
                reference = read_image(sample.image_file.empty() ? std::filesystem::path(sample.image_path) : sample.image_file);
            } catch (const std::exception& e) {
                for (std::size_t r = begin; r < end; ++r) {
                    errors[r] = e.what();
                }
                continue;
            }
            for (std::size_t r = begin; r < end; ++r) {
                try {
                    write_image(apply(plan[r].spec(), reference, codecs), out_dir / plan[r].image_path);
                    ok[r] = 1;
                } catch (const std::exception& e) {
                    errors[r] = e.what();
                }
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, spans.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    DistortedSet result;
    result.planned = plan.size();
    for (std::size_t r = 0; r < plan.size(); ++r) {
        if (ok[r]) {
            result.records.push_back(plan[r]);
        } else {
            result.failures.push_back({plan[r].sample_id, plan[r].dimension, plan[r].strength, errors[r]});
        }
    }
    return result;
}

bool verify_record(const DistortedRecord& record, const ImageBuffer& reference, const std::filesystem::path& set_dir,
                   const CodecRegistry& codecs) {
    return read_image(set_dir / record.image_path) == apply(record.spec(), reference, codecs);
}

std::string record_to_json_line(const DistortedRecord& r) {
    // Seeds are 64-bit; store as a decimal string so JSON readers that use
    // doubles do not round them.
    return json{{"sample_id", r.sample_id},
                {"dimension", r.dimension},
                {"strength", std::string(to_string(r.strength))},
                {"seed", std::to_string(r.seed)},
                {"image_path", r.image_path},
                {"synthetic_wild", r.synthetic_wild}}
        .dump();
}

DistortedRecord record_from_json_line(std::string_view line) {
    const json obj = json::parse(line);
    DistortedRecord r;
    r.sample_id = obj.at("sample_id").get<std::string>();
    r.dimension = obj.at("dimension").get<int>();
    dimension_info(r.dimension);
    const auto st = parse_strength(obj.at("strength").get<std::string>());
    if (!st) {
        throw std::invalid_argument("unknown strength");
    }
    r.strength = *st;
    const json& seed = obj.at("seed");
    r.seed = seed.is_string() ? std::stoull(seed.get<std::string>()) : seed.get<std::uint64_t>();
    r.image_path = obj.at("image_path").get<std::string>();
    r.synthetic_wild = obj.value("synthetic_wild", dimension_info(r.dimension).synthetic_wild);
    return r;
}

void save_distorted_records(const std::vector<DistortedRecord>& records, const std::filesystem::path& path) {
    std::string text;
    for (const auto& r : records) {
        text += record_to_json_line(r);
        text += '\n';
    }
    write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<DistortedRecord> load_distorted_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ManifestError(0, "", "cannot open " + path.string());
    }
    std::vector<DistortedRecord> out;
    std::set<std::tuple<std::string, int, int>> seen;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        DistortedRecord r;
        try {
            r = record_from_json_line(line);
        } catch (const std::exception& e) {
            throw ManifestError(n, "", std::string("bad distorted record: ") + e.what());
        }
        if (!seen.emplace(r.sample_id, r.dimension, static_cast<int>(r.strength)).second) {
            throw ManifestError(n, "sample_id", "duplicate (sample, dimension, strength)");
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace robulink
