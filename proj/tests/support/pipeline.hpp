// A small on-disk benchmark: MCQ samples cut from the fixture corpus, a
// manifest, and a run config whose mock model answers the reference
// correctly and flips the distorted answer on odd-numbered samples.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "robulink/cli/cli.hpp"
#include "robulink/imgcore/image_io.hpp"
#include "support.hpp"

namespace testing {

struct Pipeline {
    explicit Pipeline(const std::string& tag) : dir(tag) {}

    ScratchDir dir;
    std::filesystem::path manifest;
    std::filesystem::path config;
    std::filesystem::path out;
    std::string last_out;
    std::string last_err;

    // `models` mock endpoints, all answering the same way.
    void build(int samples, const std::string& dims, const std::string& strengths,
               const std::vector<std::string>& models = {"mockA"}, bool offline = true) {
        manifest = dir / "manifest.jsonl";
        out = dir / "out";
        std::string lines;
        nlohmann::json responses = nlohmann::json::object();
        for (int i = 0; i < samples; ++i) {
            const std::string id = "s" + std::to_string(i);
            robulink::write_image(corpus().at(static_cast<std::size_t>(i) % corpus().size()), dir / ("img/" + id + ".png"));
            nlohmann::json s = {{"id", id},
                                {"task", "MCQ"},
                                {"image_path", "img/" + id + ".png"},
                                {"question", "Which object is shown?"},
                                {"choices", {"a cat", "a dog", "a car"}},
                                {"gt_answer", "A"},
                                {"source", "fixture"}};
            lines += s.dump() + "\n";
            responses[id] = {{"reference", "A"}, {"distorted", i % 2 ? "B" : "A"}};
        }
        write_text(manifest, lines);
        nlohmann::json eps = nlohmann::json::array();
        for (const auto& m : models) eps.push_back({{"name", m}, {"kind", "mock"}, {"mock", {{"responses", responses}}}});
        nlohmann::json cfg = {{"manifest", manifest.string()}, {"out", out.string()}, {"seed", 7},
                              {"dims", dims},                  {"strengths", strengths}, {"endpoints", eps},
                              {"offline", offline},            {"resamples", 200}};
        config = dir / "config.json";
        write_text(config, cfg.dump(2));
    }

    int run(const std::vector<std::string>& args, const robulink::CliContext& base = {}) {
        std::ostringstream o, e;
        robulink::CliContext ctx = base;
        ctx.out = &o;
        ctx.err = &e;
        std::vector<std::string> full = {"robulink", "--config", config.string()};
        full.insert(full.end(), args.begin(), args.end());
        const int rc = robulink::run_cli(full, ctx);
        last_out = o.str();
        last_err = e.str();
        return rc;
    }
};

}  // namespace testing
