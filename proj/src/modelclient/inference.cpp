#include "robulink/modelclient/inference.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <optional>
#include <thread>

#include "robulink/imgcore/image_io.hpp"
#include "robulink/rng.hpp"

namespace robulink {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInterleaveDomain = 0x696e746c76ULL;

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

struct Item {
    const Sample* sample;
    const DistortedRecord* record;  // null for the reference
};

}  // namespace

const std::string& PromptTemplates::for_task(Task t) const {
    switch (t) {
        case Task::MCQ: return mcq;
        case Task::VQA: return vqa;
        case Task::CAP: return cap;
    }
    return mcq;
}

PromptTemplates default_prompt_templates() {
    return {
        "{question}\n{choices}\nAnswer with the option's letter from the given choices directly.",
        "{question}\nAnswer the question using a single word or phrase of at most 10 words.",
        "{question}\nDescribe the image in about 40 words.",
    };
}

PromptTemplates prompt_templates_from_json(const json& j) {
    PromptTemplates t = default_prompt_templates();
    if (j.is_null()) {
        return t;
    }
    t.mcq = j.value("MCQ", t.mcq);
    t.vqa = j.value("VQA", t.vqa);
    t.cap = j.value("CAP", t.cap);
    return t;
}

json prompt_templates_to_json(const PromptTemplates& t) { return {{"MCQ", t.mcq}, {"VQA", t.vqa}, {"CAP", t.cap}}; }

std::string render_prompt(const PromptTemplates& templates, const Sample& sample) {
    std::string choices;
    for (const auto& c : sample.choices) {
        if (!choices.empty()) {
            choices += '\n';
        }
        choices += c.label + ". " + c.text;
    }
    std::string out = replace_all(templates.for_task(sample.task), "{question}", sample.question);
    return replace_all(out, "{choices}", choices);
}

std::vector<std::size_t> interleaved_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SubStream(derive_key({seed, kInterleaveDomain})).shuffle(order);
    return order;
}

InferenceRun run_inference(ModelClient& client, const std::vector<Sample>& samples,
                           const std::vector<DistortedRecord>& records, const std::filesystem::path& set_dir,
                           const PromptTemplates& templates, const InferenceOptions& options) {
    std::map<std::string, const Sample*> by_id;
    for (const auto& s : samples) {
        by_id[s.id] = &s;
    }
    InferenceRun run;
    std::vector<Item> items;
    for (const auto& s : samples) {
        items.push_back({&s, nullptr});
    }
    for (const auto& r : records) {
        const auto it = by_id.find(r.sample_id);
        if (it == by_id.end()) {
            run.failures.push_back({r.sample_id, r.corruption_key(), "distorted record refers to an unknown sample"});
            continue;
        }
        items.push_back({it->second, &r});
    }
    run.planned = items.size();
    const std::vector<std::size_t> order = interleaved_order(items.size(), options.seed);

    std::vector<std::optional<Exchange>> results(items.size());
    std::vector<std::string> errors(items.size());
    std::vector<char> hit(items.size(), 0);
    const std::size_t calls_before = client.transport_calls();
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < order.size(); k = next++) {
            const Item& item = items[order[k]];
            const std::string key = item.record ? item.record->corruption_key() : std::string(kReferenceKey);
            const std::string prompt = render_prompt(templates, *item.sample);
            try {
                if (auto cached = client.cached(prompt, item.sample->id, key)) {
                    results[k] = std::move(*cached);
                    hit[k] = 1;
                    continue;
                }
                const std::filesystem::path path =
                    item.record ? set_dir / item.record->image_path
                                : (item.sample->image_file.empty() ? std::filesystem::path(item.sample->image_path)
                                                                   : item.sample->image_file);
                const ImageBuffer img = read_image(path);
                results[k] = client.ask(&img, prompt, item.sample->id, key);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : static_cast<unsigned>(client.endpoint().max_in_flight);
    threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, order.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (results[k]) {
            run.cache_hits += hit[k];
            run.exchanges.push_back(std::move(*results[k]));
        } else {
            const Item& item = items[order[k]];
            run.failures.push_back({item.sample->id,
                                    item.record ? item.record->corruption_key() : std::string(kReferenceKey),
                                    errors[k]});
        }
    }
    run.transport_calls = client.transport_calls() - calls_before;
    return run;
}

}  // namespace robulink
