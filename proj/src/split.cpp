#include "scsn/split.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

namespace scsn::data {

Range parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParameterError("range must be 'start:end', got '" + text + "'");
    auto parse = [&](std::string_view s) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
            throw ParameterError("range bound is not a non-negative integer in '" + text + "'");
        }
        return v;
    };
    std::string_view sv(text);
    Range r{parse(sv.substr(0, colon)), parse(sv.substr(colon + 1))};
    if (r.end < r.begin) throw ParameterError("range end precedes start in '" + text + "'");
    return r;
}

void SplitSpec::validate(std::size_t session2_size) const {
    if (val.end < val.begin || test.end < test.begin) throw ContractError("split ranges must have end >= start");
    if (calib_trials > val.begin || val.end > test.begin || test.end > session2_size) {
        throw ContractError("split ranges must satisfy calib <= val.start, val.end <= test.start <= test.end <= " +
                            std::to_string(session2_size) + " (calib=" + std::to_string(calib_trials) +
                            ", val=" + std::to_string(val.begin) + ":" + std::to_string(val.end) +
                            ", test=" + std::to_string(test.begin) + ":" + std::to_string(test.end) + ")");
    }
}

std::size_t Split::train_size() const {
    std::size_t n = 0;
    for (const auto& s : train) n += s.set.size();
    return n;
}

Split Split::single_subject() const {
    Split out;
    out.train.push_back(train.at(target_index));
    out.target_index = 0;
    out.val = val;
    out.test = test;
    return out;
}

Split make_splits(const std::vector<SubjectDataset>& datasets, const SplitSpec& spec) {
    auto target = std::find_if(datasets.begin(), datasets.end(),
                               [&](const SubjectDataset& d) { return d.subject_id == spec.target_subject; });
    if (target == datasets.end()) throw LookupError("target subject '" + spec.target_subject + "' not in datasets");
    if (target->sessions.size() < 2) throw ContractError("target subject needs a second session");
    const TrialSet& s2 = target->sessions[1];
    spec.validate(s2.size());

    auto slice = [&](Range r) {
        TrialSet out = s2.empty_like();
        out.trials.assign(s2.trials.begin() + static_cast<std::ptrdiff_t>(r.begin),
                          s2.trials.begin() + static_cast<std::ptrdiff_t>(r.end));
        return out;
    };

    Split split;
    for (const SubjectDataset& d : datasets) {
        if (d.sessions.empty()) throw ContractError("subject '" + d.subject_id + "' has no sessions");
        SubjectTrials st{d.subject_id, d.sessions[0]};
        if (&d == &*target) {
            split.target_index = split.train.size();
            TrialSet calib = slice({0, spec.calib_trials});
            st.set.trials.insert(st.set.trials.end(), calib.trials.begin(), calib.trials.end());
        }
        split.train.push_back(std::move(st));
    }
    split.val = slice(spec.val);
    split.test = slice(spec.test);
    return split;
}

TrialSet balanced_upsample(const TrialSet& set, std::size_t target_size, std::uint64_t seed) {
    if (target_size < set.size()) throw ContractError("upsample target smaller than the set");
    std::vector<std::vector<std::size_t>> by_class(set.n_classes());
    for (std::size_t i = 0; i < set.size(); ++i) by_class.at(set.trials[i].label).push_back(i);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].empty()) {
            throw ContractError("class '" + set.class_names[c] + "' is absent from subject '" + set.subject_id + "'");
        }
    }

    std::vector<std::size_t> counts(by_class.size());
    for (std::size_t c = 0; c < counts.size(); ++c) counts[c] = by_class[c].size();
    std::vector<std::size_t> extra(counts.size(), 0);
    for (std::size_t n = set.size(); n < target_size; ++n) {
        const auto c = static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
        ++counts[c];
        ++extra[c];
    }

    std::mt19937_64 rng(seed);
    TrialSet out = set;
    for (std::size_t c = 0; c < extra.size(); ++c) {
        // Cycle through reshuffled copies so duplicates spread over originals.
        std::vector<std::size_t> pool;
        for (std::size_t k = 0; k < extra[c]; ++k) {
            if (pool.empty()) {
                pool = by_class[c];
                std::shuffle(pool.begin(), pool.end(), rng);
            }
            out.trials.push_back(set.trials[pool.back()]);
            pool.pop_back();
        }
    }
    return out;
}

}  // namespace scsn::data
