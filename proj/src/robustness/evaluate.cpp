#include "robulink/robustness/evaluate.hpp"

#include <map>
#include <set>

namespace robulink {

ScoringRun score_exchanges(const std::vector<Sample>& samples, const std::vector<DistortedRecord>& records,
                           const std::vector<Exchange>& exchanges, Judge* judge, const ScoreOptions& options) {
    std::map<std::string, const Sample*> by_id;
    for (const auto& s : samples) by_id[s.id] = &s;

    std::set<std::string> models;
    std::map<std::tuple<std::string, std::string, std::string>, const Exchange*> index;
    for (const auto& e : exchanges) {
        models.insert(e.model);
        index[{e.model, e.sample_id, e.corruption_key}] = &e;
    }
    const auto find = [&](const std::string& m, const std::string& s, const std::string& k) -> const Exchange* {
        const auto it = index.find({m, s, k});
        return it == index.end() ? nullptr : it->second;
    };

    ScoringRun run;
    for (const auto& model : models) {
        std::map<std::string, std::optional<ScoreValue>> ref_scores;
        for (const auto& rec : records) {
            const auto sit = by_id.find(rec.sample_id);
            if (sit == by_id.end()) continue;
            const Sample& sample = *sit->second;
            EvalRecord er{model, sample.id, sample.task, rec.dimension, rec.strength, {}, {}, {}};
            const Exchange* ref = find(model, sample.id, std::string(kReferenceKey));
            const Exchange* dist = find(model, sample.id, rec.corruption_key());
            if (ref) {
                auto [it, fresh] = ref_scores.try_emplace(sample.id);
                if (fresh) {
                    it->second = score_against_gt(sample, ref->response, judge,
                                                  {sample.id, model + ":ref_vs_gt@" + std::string(kReferenceKey)},
                                                  options);
                }
                er.ref_vs_gt = it->second;
            } else {
                ++run.missing_reference;
            }
            if (dist) {
                er.dist_vs_gt = score_against_gt(sample, dist->response, judge,
                                                 {sample.id, model + ":dist_vs_gt@" + rec.corruption_key()}, options);
                if (ref) {
                    er.ref_vs_dist = score_consistency(ref->response, dist->response, sample.task, judge,
                                                       {sample.id, model + ":ref_vs_dist@" + rec.corruption_key()},
                                                       options, sample.choices, sample.question);
                }
            } else {
                ++run.missing_distorted;
            }
            run.records.push_back(std::move(er));
        }
    }
    return run;
}

}  // namespace robulink
