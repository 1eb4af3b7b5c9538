#include "scsn/trialset.hpp"

#include "scsn/errors.hpp"

namespace scsn {

std::vector<std::size_t> TrialSet::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (const Epoch& e : trials) ++counts.at(e.label);
    return counts;
}

TrialSet TrialSet::empty_like() const {
    TrialSet out;
    out.subject_id = subject_id;
    out.fs = fs;
    out.channel_names = channel_names;
    out.class_names = class_names;
    return out;
}

void TrialSet::validate() const {
    if (!(fs > 0.0)) throw ParameterError("trial set sampling rate must be positive");
    if (class_names.empty()) throw ContractError("trial set has no class names");
    for (const Epoch& e : trials) {
        if (e.n_channels != channel_names.size() || e.n_samples != n_samples()) {
            throw ShapeError("trial shape differs from the set's channels x samples");
        }
        if (e.data.size() != e.n_channels * e.n_samples) throw ShapeError("trial payload length mismatch");
        if (e.fs != fs) throw ParameterError("trial sampling rate differs from the set's");
        if (e.label >= class_names.size()) throw ContractError("trial label out of range");
    }
}

}  // namespace scsn
