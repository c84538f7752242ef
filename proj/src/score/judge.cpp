#include "robulink/score/judge.hpp"

#include <regex>

#include "robulink/modelclient/client.hpp"
#include "robulink/score/text.hpp"

namespace robulink {

ClientJudge::ClientJudge(std::shared_ptr<ModelClient> client) : client_(std::move(client)) {
    if (!client_) {
        throw std::invalid_argument("judge needs a client");
    }
}

std::string ClientJudge::name() const { return client_->endpoint().name; }

std::string ClientJudge::complete(const std::string& prompt, const JudgeContext& ctx, int repeat) {
    try {
        return client_->ask(nullptr, prompt, ctx.sample_id, "judge:" + ctx.subject + "#" + std::to_string(repeat))
            .response;
    } catch (const std::exception& e) {
        throw JudgeUnavailable(e.what());
    }
}

std::string JudgeTemplates::hash() const {
    std::string all;
    for (const std::string* t : {&mcq_equivalence, &open_rating, &cap_rating, &consistency}) {
        all += *t;
        all += '\0';
    }
    return sha256_hex(std::string_view(all));
}

JudgeTemplates default_judge_templates() {
    return {
        "Question: {question}\nChoices:\n{choices}\nCorrect choice: {gt}\nModel answer: {output}\n"
        "Does the model answer select the correct choice? Reply with 1 for yes or 0 for no.",

        "Question: {question}\nReference answer: {gt}\nModel answer: {output}\n"
        "Rate the model answer against the reference for completeness, precision and relevance. "
        "Reply with a single number between 0 and 1.",

        "Ground-truth caption: {gt}\nScore points:\n{points}\nModel caption: {output}\n"
        "What fraction of the ground-truth score points does the model caption match, "
        "considering completeness, precision and relevance? Reply with a single number between 0 and 1.",

        "Question: {question}\nFirst answer: {reference}\nSecond answer: {output}\n"
        "Rate how well the second answer agrees with the first for completeness, precision and relevance. "
        "Reply with a single number between 0 and 1.",
    };
}

JudgeTemplates judge_templates_from_json(const nlohmann::json& j) {
    JudgeTemplates t = default_judge_templates();
    if (j.is_null()) {
        return t;
    }
    t.mcq_equivalence = j.value("mcq_equivalence", t.mcq_equivalence);
    t.open_rating = j.value("open_rating", t.open_rating);
    t.cap_rating = j.value("cap_rating", t.cap_rating);
    t.consistency = j.value("consistency", t.consistency);
    return t;
}

nlohmann::json judge_templates_to_json(const JudgeTemplates& t) {
    return {{"mcq_equivalence", t.mcq_equivalence},
            {"open_rating", t.open_rating},
            {"cap_rating", t.cap_rating},
            {"consistency", t.consistency}};
}

std::string fill_template(std::string tmpl, const std::string& key, const std::string& value) {
    const std::string k = "{" + key + "}";
    for (std::size_t pos = tmpl.find(k); pos != std::string::npos; pos = tmpl.find(k, pos + value.size())) {
        tmpl.replace(pos, k.size(), value);
    }
    return tmpl;
}

std::optional<double> parse_rating(const std::string& reply) {
    static const std::regex number(R"((\d+(?:\.\d+)?|\.\d+))");
    std::smatch m;
    if (!std::regex_search(reply, m, number)) {
        return std::nullopt;
    }
    double v = std::stod(m[1].str());
    if (v <= 1.0) {
        return v;
    }
    if (v <= 10.0) {
        return v / 10.0;
    }
    if (v <= 100.0) {
        return v / 100.0;
    }
    return std::nullopt;
}

std::optional<bool> parse_verdict(const std::string& reply) {
    const auto tokens = tokenize(reply);
    if (!tokens.empty()) {
        if (tokens.front() == "yes" || tokens.front() == "correct" || tokens.front() == "true") return true;
        if (tokens.front() == "no" || tokens.front() == "incorrect" || tokens.front() == "false") return false;
    }
    if (const auto r = parse_rating(reply)) {
        return *r >= 0.5;
    }
    return std::nullopt;
}

}  // namespace robulink
