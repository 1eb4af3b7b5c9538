#include "scsn/errors.hpp"
#include "scsn/signal.hpp"
#include "scsn/train.hpp"

#include <algorithm>

namespace scsn::train {

EvalResult evaluate(const CropPredictor& predict, const TrialSet& test, double win_s, double overlap_s) {
    if (test.empty()) throw ContractError("evaluate: empty test set");
    EvalResult r;
    std::size_t crops_ok = 0, trials_ok = 0;
    for (const Epoch& e : test.trials) {
        const auto crops = signal::crop_trials(e, win_s, overlap_s);
        nn::Tensor x({crops.size(), e.n_channels, crops.front().n_samples});
        for (std::size_t i = 0; i < crops.size(); ++i)
            std::copy(crops[i].data.begin(), crops[i].data.end(),
                      x.values().begin() + static_cast<std::ptrdiff_t>(i * crops[i].data.size()));
        const std::vector<std::size_t> pred = predict(x);
        if (pred.size() != crops.size()) throw ContractError("predictor returned the wrong number of labels");

        std::vector<std::size_t> votes(std::max(test.n_classes(), *std::max_element(pred.begin(), pred.end()) + 1));
        for (std::size_t p : pred) {
            ++votes[p];
            if (p == e.label) ++crops_ok;
        }
        // max_element returns the first maximum: ties resolve to the lowest class.
        const auto winner = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
        if (winner == e.label) ++trials_ok;
        r.n_crops += crops.size();
        ++r.n_trials;
    }
    r.crop_accuracy = static_cast<double>(crops_ok) / static_cast<double>(r.n_crops);
    r.trial_accuracy = static_cast<double>(trials_ok) / static_cast<double>(r.n_trials);
    return r;
}

EvalResult evaluate(const models::Model& model, std::size_t branch, const TrialSet& test, double win_s,
                    double overlap_s) {
    return evaluate(
        [&](const nn::Tensor& crops) {
            nn::Tensor probs = models::forward_infer(model, crops, branch);
            const std::size_t k = probs.dim(1);
            std::vector<std::size_t> out;
            for (std::size_t r = 0; r < probs.dim(0); ++r) {
                auto row = probs.values().subspan(r * k, k);
                out.push_back(static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()));
            }
            return out;
        },
        test, win_s, overlap_s);
}

}  // namespace scsn::train
